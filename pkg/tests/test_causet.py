import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncdist.causet import (
    Box,
    CausalSet,
    Diamond,
    Event,
    check_reverse_triangle,
    from_coords,
    from_events,
    link_tau_matrix,
    links,
    longest_path,
    order_violations,
    sprinkle,
    tau_flat,
    tau_matrix,
    transitive_closure,
)
from ncdist.errors import InvalidInput, NotCausallyRelated
from oracles import all_chains, diamond_related_fraction_mc, heaviest_chain, warshall_closure


def test_tau_flat_examples():
    assert tau_flat(Event(0, 0, 0), Event(1, 1, 0)) == 1.0
    assert tau_flat(Event(0, 0, 0), Event(1, 2, 1)) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert tau_flat(Event(0, 0, 0), Event(1, 1, 1)) == 0.0
    assert tau_flat(Event(0, 1, 0), Event(1, 0, 0)) == 0.0


def test_relation_from_coordinates():
    cs = from_coords([(0, 0), (1, 0), (1, 2), (2, 0)])
    assert cs.precedes(0, 1) and cs.precedes(1, 3) and cs.precedes(0, 3)
    assert not cs.precedes(0, 2) and not cs.precedes(1, 0)
    assert cs.precedes(0, 2) is False


def test_null_pairs_related():
    cs = from_coords([(0, 0), (1, 1)])
    assert cs.precedes(0, 1)


def test_duplicate_coordinates_unrelated():
    cs = from_coords([(0, 0), (0, 0)])
    assert not cs.relation.any()
    assert order_violations(cs.relation) == []


def test_duplicate_ids_rejected():
    with pytest.raises(InvalidInput):
        from_events([Event(1, 0, 0), Event(1, 1, 0)])


def test_order_violations():
    assert order_violations(np.eye(2, dtype=bool)) == ["irreflexive"]
    assert "antisymmetric" in order_violations(np.array([[0, 1], [1, 0]], dtype=bool))
    r = np.zeros((3, 3), dtype=bool)
    r[0, 1] = r[1, 2] = True
    assert order_violations(r) == ["transitive"]


def test_regions_validate():
    with pytest.raises(InvalidInput):
        sprinkle(Diamond(-1.0), 5, 0)
    with pytest.raises(InvalidInput):
        sprinkle(Box(1, 0, 0, 1), 5, 0)
    with pytest.raises(InvalidInput):
        sprinkle(Diamond(1.0), 0, 0)


@pytest.mark.parametrize("region", [Diamond(2.0, t0=1.0, x0=-1.0), Box(0, 1, -2, 3)])
def test_sprinkle_inside_and_ordered(region):
    cs = sprinkle(region, 300, seed=5)
    assert cs.n == 300
    assert all(region.contains(e.t, e.x) for e in cs.events)
    assert order_violations(cs.relation) == []
    np.testing.assert_array_equal(cs.relation, warshall_closure(cs.relation))


def test_sprinkle_deterministic():
    a = sprinkle(Diamond(1.0), 50, seed=9)
    b = sprinkle(Diamond(1.0), 50, seed=9)
    c = sprinkle(Diamond(1.0), 50, seed=10)
    assert a.events == b.events and a.events != c.events


def test_sprinkle_related_fraction():
    """Fraction of related pairs vs a rejection-sampled Monte Carlo estimate."""
    count, seeds = 200, 20
    fracs = []
    for s in range(seeds):
        cs = sprinkle(Diamond(1.0), count, seed=s)
        fracs.append(cs.relation.sum() / (count * (count - 1) / 2))
    p_hat, se, zeta1 = diamond_related_fraction_mc(200_000, seed=123)
    # U-statistic standard deviation of one set, averaged over the suite
    sd = math.sqrt(4 * zeta1 / count + se**2 * seeds) / math.sqrt(seeds)
    assert abs(np.mean(fracs) - p_hat) <= 4 * sd
    assert abs(p_hat - 0.5) <= 4 * se


def test_links_and_closure():
    cs = sprinkle(Diamond(1.0), 80, seed=2)
    lk = links(cs)
    np.testing.assert_array_equal(transitive_closure(lk), cs.relation)
    g = nx.DiGraph(np.argwhere(cs.relation).tolist())
    g.add_nodes_from(range(cs.n))
    red = nx.transitive_reduction(g)
    expect = np.zeros_like(lk)
    for u, v in red.edges:
        expect[u, v] = True
    np.testing.assert_array_equal(lk, expect)


def test_topological_order_is_linear_extension():
    cs = sprinkle(Diamond(1.0), 100, seed=3)
    pos = np.empty(cs.n, dtype=int)
    pos[cs.topological_order()] = np.arange(cs.n)
    for i, j in np.argwhere(cs.relation):
        assert pos[i] < pos[j]


def test_longest_path_small():
    cs = from_coords([(0, 0), (1, 0.5), (2, 0)])
    w = tau_matrix(cs)
    val, path = longest_path(cs, w, 0, 2)
    assert val == pytest.approx(2.0)
    assert path == [0, 2]
    w2 = link_tau_matrix(cs)
    val2, path2 = longest_path(cs, w2, 0, 2)
    assert path2 == [0, 1, 2]
    assert val2 == pytest.approx(2 * math.sqrt(0.75))


def test_longest_path_errors():
    cs = from_coords([(0, 0), (0, 1)])
    with pytest.raises(NotCausallyRelated):
        longest_path(cs, tau_matrix(cs), 0, 1)
    cs = from_coords([(0, 0), (1, 0)])
    bad = tau_matrix(cs)
    bad[0, 1] = -1.0
    with pytest.raises(InvalidInput):
        longest_path(cs, bad, 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.integers(0, 2**32 - 1))
def test_longest_path_matches_chain_enumeration(n, seed):
    cs = sprinkle(Diamond(1.0), n, seed)
    rng = np.random.default_rng(seed)
    w = np.where(cs.relation, rng.uniform(0, 2, (n, n)), np.nan)
    w[rng.random((n, n)) < 0.2] = np.nan
    for p, q in np.argwhere(cs.relation):
        val, path = longest_path(cs, w, p, q)
        ref = heaviest_chain(cs.relation, w, p, q)
        if ref == -math.inf:
            assert val == -math.inf and path == []
            continue
        assert val == pytest.approx(ref, abs=1e-12)
        assert path[0] == p and path[-1] == q
        assert sum(w[a, b] for a, b in zip(path, path[1:])) == pytest.approx(val, abs=1e-12)
        assert path in all_chains(cs.relation, p, q)


def test_reverse_triangle_detects_violation():
    cs = from_coords([(0, 0), (1, 0), (2, 0)])
    d = tau_matrix(cs)
    assert check_reverse_triangle(cs, d) == []
    d[0, 2] = 1.0
    bad = check_reverse_triangle(cs, d)
    assert bad and bad[0][:3] == (0, 1, 2)
    assert check_reverse_triangle(cs, tau_flat) == []
