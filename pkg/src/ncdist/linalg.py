"""Dense hermitian linear algebra primitives.

Matrices are plain numpy arrays. :func:`as_hermitian` is the validating
constructor used at every API boundary that requires a hermitian input.
"""
import numpy as np

from ncdist import _kernels
from ncdist.errors import InvalidInput

ASYMMETRY_RTOL = 1e-12


def as_matrix(a):
    """Return ``a`` as a finite 2-d complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidInput(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("matrix has non-finite entries")
    return m


def as_hermitian(a):
    """Validate a hermitian matrix.

    Rejects (never symmetrizes) inputs whose asymmetry exceeds
    ``1e-12 * max|entry|``. The returned copy is exactly hermitian.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise InvalidInput(f"hermitian matrix must be square, got {m.shape}")
    scale = scale_of(m)
    if np.max(np.abs(m - m.conj().T)) > ASYMMETRY_RTOL * scale:
        raise InvalidInput("matrix is not hermitian")
    out = m.copy()
    iu = np.triu_indices(m.shape[0], 1)
    out[iu[1], iu[0]] = np.conj(out[iu])
    out[np.diag_indices(m.shape[0])] = out.diagonal().real
    return out


def scale_of(a):
    """``max|entry|`` (0 for the zero matrix)."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def eig_tol(a):
    """Residual tolerance ``1e-10 * dim * max|entry|`` for eigenpairs."""
    return 1e-10 * a.shape[0] * scale_of(a)


def eig_hermitian(a):
    """Eigenvalues (ascending) and orthonormal eigenvectors of ``a``.

    Uses the cyclic Jacobi kernel (compiled when available).
    """
    h = as_hermitian(a)
    w, v = _kernels.jacobi_eigh(h)
    return np.asarray(w), np.asarray(v)


def operator_norm(a):
    """Largest singular value of ``a``."""
    m = as_matrix(a)
    return float(np.linalg.norm(m, 2))


def matrix_abs(a):
    """``|a| = V |Lambda| V^dagger`` for hermitian ``a``."""
    w, v = eig_hermitian(a)
    out = (v * np.abs(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def hermitian_function(a, fn):
    """Apply a real scalar function through the spectral decomposition."""
    w, v = eig_hermitian(a)
    out = (v * fn(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def is_psd(a, tol=0.0):
    if tol < 0:
        raise InvalidInput("tol must be non-negative")
    w, _ = eig_hermitian(a)
    return bool(w[0] >= -tol)
