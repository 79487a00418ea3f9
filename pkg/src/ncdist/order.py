"""Finite posets, isotone functions and the hermitian meet/join cone.

On a finite poset the isotone functions recover the order: ``x <= y`` iff
every isotone ``f`` has ``f(x) <= f(y)``, and the up-set indicators already
suffice. For matrices, meet and join are defined through the spectral
absolute value and reduce to pointwise min/max on commuting inputs.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from ncdist.errors import InvalidInput
from ncdist.linalg import as_hermitian, matrix_abs, scale_of
from ncdist.rng import rng_for

ISOTONE_TOL = 1e-12
MEMBERSHIP_RTOL = 1e-6


@dataclass(frozen=True)
class FinitePoset:
    """Reflexive partial order ``leq[i, j] == (i <= j)``."""

    leq: np.ndarray

    def __post_init__(self):
        leq = np.asarray(self.leq, dtype=bool)
        n = leq.shape[0] if leq.ndim == 2 else -1
        if leq.ndim != 2 or leq.shape != (n, n) or n < 1:
            raise InvalidInput("leq must be a non-empty square boolean matrix")
        if not np.all(np.diag(leq)):
            raise InvalidInput("order is not reflexive")
        off = leq & ~np.eye(n, dtype=bool)
        if np.any(off & off.T):
            raise InvalidInput("order is not antisymmetric")
        lf = leq.astype(np.float64)
        if np.any(((lf @ lf) > 0.5) & ~leq):
            raise InvalidInput("order is not transitive")
        object.__setattr__(self, "leq", leq)

    @property
    def n(self):
        return self.leq.shape[0]

    def covers(self):
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        sf = strict.astype(np.float64)
        return strict & ~((sf @ sf) > 0.5)

    @classmethod
    def from_covers(cls, n, pairs):
        r = np.eye(n, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInput(f"pair {(i, j)} out of range")
            r[i, j] = True
        while True:
            rf = r.astype(np.float64)
            nxt = r | ((rf @ rf) > 0.5)
            if np.array_equal(nxt, r):
                return cls(r)
            r = nxt


def random_poset(n, seed, density=0.35, label=0):
    """Random order: closure of a random DAG on a shuffled labelling."""
    rng = rng_for(seed, "poset", label)
    upper = np.triu(rng.random((n, n)) < density, 1)
    perm = rng.permutation(n)
    dag = np.zeros((n, n), dtype=bool)
    dag[np.ix_(perm, perm)] = upper
    return FinitePoset.from_covers(n, [tuple(map(int, ij)) for ij in np.argwhere(dag)])


@dataclass
class IsotoneFamily:
    poset: FinitePoset
    functions: list = field(default_factory=list)

    def __post_init__(self):
        self.functions = [np.asarray(f, dtype=float) for f in self.functions]
        for f in self.functions:
            if not is_isotone(f, self.poset):
                raise InvalidInput("family member is not isotone")


def is_isotone(f, poset):
    f = np.asarray(f, dtype=float)
    if f.shape != (poset.n,):
        raise InvalidInput(f"function must have length {poset.n}")
    return bool(np.all(~poset.leq | (f[:, None] <= f[None, :] + ISOTONE_TOL)))


def upset_indicators(poset):
    """Indicator of ``{z : e <= z}`` for each element ``e``."""
    return IsotoneFamily(poset, [poset.leq[e].astype(float) for e in range(poset.n)])


def order_from_functions(family):
    if not family.functions:
        raise InvalidInput("family must be non-empty")
    fs = np.vstack(family.functions)
    return np.all(fs[:, :, None] <= fs[:, None, :], axis=0)


def _pair(a, b):
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch {a.shape} vs {b.shape}")
    return a, b


def _diagonal(a):
    return np.array_equal(a, np.diag(a.diagonal()))


def meet(a, b):
    """``(a + b)/2 - |a - b|/2``; pointwise min for diagonal inputs."""
    a, b = _pair(a, b)
    if _diagonal(a) and _diagonal(b):
        return np.diag(np.minimum(a.diagonal().real, b.diagonal().real)).astype(np.complex128)
    return 0.5 * (a + b) - 0.5 * matrix_abs(a - b)


def join(a, b):
    """``(a + b)/2 + |a - b|/2``; pointwise max for diagonal inputs."""
    a, b = _pair(a, b)
    if _diagonal(a) and _diagonal(b):
        return np.diag(np.maximum(a.diagonal().real, b.diagonal().real)).astype(np.complex128)
    return 0.5 * (a + b) + 0.5 * matrix_abs(a - b)


@dataclass
class ConeSample:
    """Generators of a convex cone inside an ambient hermitian algebra.

    ``algebra`` is ``"full"`` (all n x n hermitian matrices, real dimension
    n^2) or ``"diagonal"`` (real diagonal matrices, dimension n); it fixes
    what the span axiom is measured against.
    """

    dim: int
    generators: list
    algebra: str = "full"

    def __post_init__(self):
        self.generators = [as_hermitian(g) for g in self.generators]
        for g in self.generators:
            if g.shape != (self.dim, self.dim):
                raise InvalidInput("generator dimension mismatch")
        if self.algebra not in ("full", "diagonal"):
            raise InvalidInput(f"unknown algebra {self.algebra!r}")


def _hvec(a):
    """Real coordinates of a hermitian matrix (length n^2)."""
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    return np.concatenate([a.diagonal().real, np.sqrt(2) * a[iu].real, np.sqrt(2) * a[iu].imag])


def cone_residual(sample, target):
    """Relative residual of the best non-negative fit of ``target``."""
    g = np.column_stack([_hvec(x) for x in sample.generators])
    t = _hvec(as_hermitian(target))
    _, res = nnls(g, t)
    return res / max(1.0, np.linalg.norm(t))


def istar_axioms_check(sample, trials=50, seed=0):
    """Report on the I*-algebra axioms for the cone spanned by ``sample``.

    Membership uses non-negative least squares with relative residual
    threshold ``1e-6`` instead of exact LP feasibility. Closedness is
    automatic in finite dimension and density means full span.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    n = sample.dim
    ident = np.eye(n)
    const_res = cone_residual(sample, ident)
    rng = rng_for(seed, "istar")
    k = len(sample.generators)
    worst = 0.0
    failures = 0
    for _ in range(trials):
        ca, cb = rng.random(k), rng.random(k)
        a = sum(c * g for c, g in zip(ca, sample.generators))
        b = sum(c * g for c, g in zip(cb, sample.generators))
        scale = max(scale_of(a), scale_of(b), 1.0)
        r = max(cone_residual(sample, meet(a, b)), cone_residual(sample, join(a, b))) / scale
        worst = max(worst, r)
        failures += int(r > MEMBERSHIP_RTOL)
    vecs = np.column_stack([_hvec(g) for g in sample.generators])
    rank = int(np.linalg.matrix_rank(vecs, tol=1e-9 * max(1.0, np.abs(vecs).max())))
    target = n if sample.algebra == "diagonal" else n * n
    axioms = {
        "constants": {"pass": bool(const_res <= MEMBERSHIP_RTOL), "residual": float(const_res)},
        "convex_cone": {"pass": True, "note": "non-negative combinations of generators by construction"},
        "closed": {"pass": True, "note": "finite-dimensional cone of finitely many generators"},
        "meet_join_stable": {
            "pass": failures == 0,
            "trials": int(trials),
            "failures": int(failures),
            "worst_residual": float(worst),
        },
        "span": {"pass": rank == target, "rank": rank, "required": target, "deficiency": target - rank},
    }
    return {
        "axioms": axioms,
        "all_pass": all(v["pass"] for v in axioms.values()),
        "membership_rtol": MEMBERSHIP_RTOL,
        "membership_method": "nnls",
    }


def isotone_chain_cone(n=2):
    """Diagonal cone of isotone functions on an n-chain.

    Generated by the constants ``+-1`` and the up-set indicators.
    """
    gens = [np.eye(n), -np.eye(n)]
    for e in range(1, n):
        gens.append(np.diag((np.arange(n) >= e).astype(float)))
    return ConeSample(n, gens, algebra="diagonal")
