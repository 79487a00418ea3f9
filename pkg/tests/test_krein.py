import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncdist.errors import InvalidInput, SingularForm
from ncdist.krein import (
    GAMMA0,
    GAMMA1,
    canonical_space,
    fundamental_symmetry,
    invariant_report,
    is_krein_selfadjoint,
    j_inner,
    krein_adjoint,
)


def random_gram(seed, n):
    rng = np.random.default_rng(seed)
    while True:
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        g = x + x.conj().T
        w = np.linalg.eigvalsh(g)
        if np.min(np.abs(w)) > 1e-2 * np.max(np.abs(w)):
            return g


def test_canonical():
    s = canonical_space(2, 1)
    np.testing.assert_array_equal(s.j, np.diag([1.0, 1.0, -1.0]))
    assert s.signature == (2, 1)
    assert s.product([0, 0, 1], [0, 0, 1]) == -1


def test_gamma_example():
    s = fundamental_symmetry(GAMMA0)
    np.testing.assert_array_equal(s.j, GAMMA0)
    assert is_krein_selfadjoint(s, GAMMA1)
    np.testing.assert_allclose(krein_adjoint(s, GAMMA1), GAMMA1, atol=1e-15)
    # but gamma1 is not hermitian in the ordinary sense
    assert not np.allclose(GAMMA1, GAMMA1.T)


def test_singular_rejected():
    with pytest.raises(SingularForm):
        fundamental_symmetry(np.diag([1.0, 0.0]))
    with pytest.raises(InvalidInput):
        fundamental_symmetry([[1, 2], [0, 1]])


def test_wrong_shapes():
    s = canonical_space(1, 1)
    with pytest.raises(InvalidInput):
        krein_adjoint(s, np.eye(3))
    with pytest.raises(InvalidInput):
        s.product([1, 0, 0], [1, 0])


@pytest.mark.parametrize("seed", range(8))
def test_invariants(seed):
    n = 2 + seed % 6
    g = random_gram(seed, n)
    s = fundamental_symmetry(g)
    rep = invariant_report(s)
    assert rep["pass"], rep
    w = np.linalg.eigvalsh(g)
    assert s.signature == (int((w > 0).sum()), int((w < 0).sum()))
    np.testing.assert_allclose(s.j @ g, g @ s.j, atol=1e-9 * np.abs(g).max())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_adjoint_identity(n, seed):
    s = fundamental_symmetry(random_gram(seed, n))
    rng = np.random.default_rng(seed + 1)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    ax = krein_adjoint(s, a)
    cond = np.linalg.cond(s.gram)
    tol = 1e-9 * cond * max(1.0, abs(s.product(a @ u, v)))
    assert abs(s.product(a @ u, v) - s.product(u, ax @ v)) <= tol
    np.testing.assert_allclose(krein_adjoint(s, ax), a, atol=1e-9 * cond * np.abs(a).max())


def test_j_inner_positive():
    s = fundamental_symmetry(random_gram(3, 5))
    rng = np.random.default_rng(0)
    for _ in range(20):
        u = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        val = j_inner(s, u, u)
        assert val.real > 0 and abs(val.imag) <= 1e-9 * val.real
