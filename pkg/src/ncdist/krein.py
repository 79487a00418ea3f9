"""Finite-dimensional Krein spaces.

An invertible hermitian Gram matrix ``G`` defines the indefinite product
``(u, v) = u^dagger G v``. The fundamental symmetry ``J = sign(G)`` (taken
through the spectral decomposition) turns it into the positive product
``<u, v>_J = u^dagger G J v``. Adjoints are computed in the canonical frame
where ``G`` becomes ``diag(+-1)`` and ``A^x = J A^dagger J``.
"""
from dataclasses import dataclass

import numpy as np

from ncdist.errors import InvalidInput, SingularForm
from ncdist.linalg import as_hermitian, as_matrix, eig_hermitian, operator_norm, scale_of

SINGULAR_RTOL = 1e-10
SELFADJOINT_RTOL = 1e-9


@dataclass(frozen=True)
class KreinSpace:
    gram: np.ndarray
    j: np.ndarray
    signature: tuple
    # canonical frame S with S^dagger J0 S = G, J0 = diag(+-1)
    frame: np.ndarray
    frame_inv: np.ndarray
    j0: np.ndarray

    @property
    def dim(self):
        return self.gram.shape[0]

    def product(self, u, v):
        """Indefinite product ``u^dagger G v``."""
        u, v = self._vecs(u, v)
        return complex(u.conj() @ self.gram @ v)

    def _vecs(self, u, v):
        u = np.asarray(u, dtype=np.complex128)
        v = np.asarray(v, dtype=np.complex128)
        if u.shape != (self.dim,) or v.shape != (self.dim,):
            raise InvalidInput(f"vectors must have length {self.dim}")
        return u, v


def fundamental_symmetry(gram):
    g = as_hermitian(gram)
    w, u = eig_hermitian(g)
    if np.min(np.abs(w)) <= SINGULAR_RTOL * max(scale_of(g), 1e-300):
        raise SingularForm("Gram form is singular")
    sign = np.where(w > 0, 1.0, -1.0)
    if np.array_equal(g, np.diag(g.diagonal())) and np.all(np.abs(g.diagonal()) == 1.0):
        j = g.copy()
    else:
        j = (u * sign) @ u.conj().T
        j = 0.5 * (j + j.conj().T)
    # G = U diag(w) U^dagger = S^dagger diag(sign) S with S = |w|^{1/2} U^dagger
    root = np.sqrt(np.abs(w))
    frame = root[:, None] * u.conj().T
    frame_inv = u / root[None, :]
    n_plus = int(np.sum(sign > 0))
    return KreinSpace(g, j, (n_plus, g.shape[0] - n_plus), frame, frame_inv, np.diag(sign))


def canonical_space(n_plus, n_minus):
    return fundamental_symmetry(np.diag([1.0] * n_plus + [-1.0] * n_minus))


def j_inner(space, u, v):
    """Positive definite product ``u^dagger G J v``."""
    u, v = space._vecs(u, v)
    return complex(u.conj() @ space.gram @ space.j @ v)


def _square(space, a):
    a = as_matrix(a)
    if a.shape != (space.dim, space.dim):
        raise InvalidInput(f"operator must be {space.dim}x{space.dim}, got {a.shape}")
    return a


def krein_adjoint(space, a):
    """``A^x`` with ``(A u, v) = (u, A^x v)`` for the indefinite product."""
    a = _square(space, a)
    s, s_inv, j0 = space.frame, space.frame_inv, space.j0
    canon = s @ a @ s_inv
    canon_adj = j0 @ canon.conj().T @ j0
    return s_inv @ canon_adj @ s


def is_krein_selfadjoint(space, a):
    a = _square(space, a)
    scale = max(scale_of(a), 1.0)
    return operator_norm(a - krein_adjoint(space, a)) <= SELFADJOINT_RTOL * scale


def invariant_report(space):
    """Numerical check of the KreinSpace invariants."""
    n = space.dim
    j2 = float(np.max(np.abs(space.j @ space.j - np.eye(n))))
    herm = float(np.max(np.abs(space.j - space.j.conj().T)))
    gj = space.gram @ space.j
    gj = 0.5 * (gj + gj.conj().T)
    min_eig = float(eig_hermitian(gj)[0][0])
    return {
        "j_squared_error": j2,
        "j_hermitian_error": herm,
        "gram_j_min_eigenvalue": min_eig,
        "signature": list(space.signature),
        "pass": bool(j2 <= 1e-9 and herm <= 1e-9 and min_eig > 0 and sum(space.signature) == n),
    }


GAMMA0 = np.array([[1.0, 0.0], [0.0, -1.0]])
GAMMA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
