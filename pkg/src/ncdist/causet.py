"""Finite causal sets in flat 1+1 Minkowski space.

A :class:`CausalSet` stores events and a dense strict-order matrix
``relation[i, j] == (event i precedes event j)``. Null separations count as
related. Pair weights for longest-path queries are dense ``(n, n)`` float
matrices; NaN marks "no edge".
"""
from dataclasses import dataclass
import heapq
import logging
import math

import numpy as np

from ncdist import _kernels
from ncdist.errors import InvalidInput, NotCausallyRelated
from ncdist.rng import rng_for

log = logging.getLogger(__name__)

REVERSE_TRIANGLE_TOL = 1e-9


@dataclass(frozen=True)
class Event:
    id: int
    t: float
    x: float


@dataclass
class CausalSet:
    events: list
    relation: np.ndarray

    def __post_init__(self):
        self.relation = np.asarray(self.relation, dtype=bool)
        n = len(self.events)
        if self.relation.shape != (n, n):
            raise InvalidInput("relation shape does not match event count")

    @property
    def n(self):
        return len(self.events)

    @property
    def ids(self):
        return [e.id for e in self.events]

    @property
    def t(self):
        return np.array([e.t for e in self.events], dtype=float)

    @property
    def x(self):
        return np.array([e.x for e in self.events], dtype=float)

    def index_of(self, event_id):
        for i, e in enumerate(self.events):
            if e.id == event_id:
                return i
        raise InvalidInput(f"no event with id {event_id}")

    def precedes(self, i, j):
        return bool(self.relation[i, j])

    def topological_order(self):
        """Linear extension of the order, ties broken by t, then x, then id.

        For coordinate-derived relations this is plain sorting by t.
        """
        r = self.relation
        indeg = r.sum(axis=0).astype(np.int64)
        keys = [(e.t, e.x, e.id, i) for i, e in enumerate(self.events)]
        heap = [keys[i] for i in range(self.n) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)[3]
            out.append(i)
            for j in np.flatnonzero(r[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, keys[j])
        if len(out) != self.n:
            raise InvalidInput("relation has a cycle")
        return np.array(out, dtype=np.int64)


def order_violations(relation):
    """Names of the strict-order axioms that ``relation`` breaks."""
    r = np.asarray(relation, dtype=bool)
    bad = []
    if np.any(np.diag(r)):
        bad.append("irreflexive")
    off = r & ~np.eye(r.shape[0], dtype=bool)
    if np.any(off & off.T):
        bad.append("antisymmetric")
    rf = r.astype(np.float64)
    if np.any(((rf @ rf) > 0.5) & ~r):
        bad.append("transitive")
    return bad


def tau_flat(a, b):
    """Proper time from ``a`` to ``b``; 0 unless ``b`` is in the causal future."""
    dt = b.t - a.t
    dx = abs(b.x - a.x)
    if dt >= dx:
        return math.sqrt(max((dt - dx) * (dt + dx), 0.0))
    return 0.0


def relate(events):
    """Strict causal order from coordinates.

    Exact coordinate duplicates are left unrelated (keeps antisymmetry).
    """
    t = np.array([e.t for e in events], dtype=float)
    x = np.array([e.x for e in events], dtype=float)
    dt = t[None, :] - t[:, None]
    dx = np.abs(x[None, :] - x[:, None])
    same = (dt == 0) & (dx == 0)
    rel = (dt >= dx) & ~same
    dup = same.copy()
    np.fill_diagonal(dup, False)
    if np.any(dup):
        log.warning("relate: %d coincident event pairs left unrelated", int(dup.sum()) // 2)
    return rel


def from_events(events):
    events = list(events)
    ids = [e.id for e in events]
    if len(set(ids)) != len(ids):
        raise InvalidInput("event ids must be unique")
    for e in events:
        if not (math.isfinite(e.t) and math.isfinite(e.x)):
            raise InvalidInput(f"event {e.id} has non-finite coordinates")
    return CausalSet(events, relate(events))


def from_coords(coords):
    return from_events(Event(i, float(t), float(x)) for i, (t, x) in enumerate(coords))


@dataclass(frozen=True)
class Diamond:
    """Causal diamond between ``(t0, x0)`` and ``(t0 + tau_total, x0)``."""

    tau_total: float
    t0: float = 0.0
    x0: float = 0.0

    def sample(self, rng, count):
        # uniform in light-cone coordinates is uniform in the diamond
        u = rng.uniform(0.0, self.tau_total, count)
        v = rng.uniform(0.0, self.tau_total, count)
        return self.t0 + 0.5 * (u + v), self.x0 + 0.5 * (u - v)

    def validate(self):
        if not (math.isfinite(self.tau_total) and self.tau_total > 0):
            raise InvalidInput("diamond must have positive finite tau_total")

    def contains(self, t, x, shrink=1.0):
        """Membership in the concentric diamond scaled by ``shrink``."""
        half = 0.5 * self.tau_total * shrink
        tc = self.t0 + 0.5 * self.tau_total
        return np.abs(np.asarray(t) - tc) + np.abs(np.asarray(x) - self.x0) <= half


@dataclass(frozen=True)
class Box:
    t_min: float
    t_max: float
    x_min: float
    x_max: float

    def sample(self, rng, count):
        t = rng.uniform(self.t_min, self.t_max, count)
        x = rng.uniform(self.x_min, self.x_max, count)
        return t, x

    def validate(self):
        vals = (self.t_min, self.t_max, self.x_min, self.x_max)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("box bounds must be finite")
        if not (self.t_max > self.t_min and self.x_max > self.x_min):
            raise InvalidInput("box region is empty")

    def contains(self, t, x, shrink=1.0):
        tc, xc = 0.5 * (self.t_min + self.t_max), 0.5 * (self.x_min + self.x_max)
        ht, hx = 0.5 * (self.t_max - self.t_min) * shrink, 0.5 * (self.x_max - self.x_min) * shrink
        return (np.abs(np.asarray(t) - tc) <= ht) & (np.abs(np.asarray(x) - xc) <= hx)


def sprinkle(region, count, seed):
    """``count`` uniform events in ``region``; deterministic per seed."""
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise InvalidInput("count must be a positive integer")
    region.validate()
    t, x = region.sample(rng_for(seed, "sprinkle"), int(count))
    return from_events(Event(i, float(t[i]), float(x[i])) for i in range(int(count)))


def links(cs):
    """Covering relation (transitive reduction) of ``cs.relation``."""
    r = cs.relation
    rf = r.astype(np.float64)
    return r & ~((rf @ rf) > 0.5)


def transitive_closure(rel):
    """Reflexive-free closure by repeated boolean squaring."""
    r = np.asarray(rel, dtype=bool).copy()
    while True:
        rf = r.astype(np.float64)
        nxt = r | ((rf @ rf) > 0.5)
        if np.array_equal(nxt, r):
            return r
        r = nxt


def tau_matrix(cs):
    """``tau_flat`` on every related pair; NaN elsewhere."""
    t, x = cs.t, cs.x
    dt = t[None, :] - t[:, None]
    dx = np.abs(x[None, :] - x[:, None])
    tau = np.sqrt(np.maximum((dt - dx) * (dt + dx), 0.0))
    return np.where(cs.relation, tau, np.nan)


def link_tau_matrix(cs):
    """``tau_flat`` restricted to links; NaN elsewhere."""
    w = tau_matrix(cs)
    return np.where(links(cs), w, np.nan)


def _check_weights(cs, weights):
    w = np.asarray(weights, dtype=float)
    if w.shape != (cs.n, cs.n):
        raise InvalidInput(f"weights must have shape {(cs.n, cs.n)}")
    used = cs.relation & ~np.isnan(w)
    if np.any(w[used] < 0) or not np.all(np.isfinite(w[used])):
        raise InvalidInput("weights on related pairs must be finite and non-negative")
    return w


def longest_path(cs, weights, p, q):
    """Heaviest chain ``p = z0 < z1 < ... < zk = q`` under ``weights``.

    Returns ``(value, path)`` with ``path`` as event indices. If no chain of
    weighted pairs joins ``p`` to ``q`` the value is ``-inf`` and the path
    empty.
    """
    w = _check_weights(cs, weights)
    if p == q:
        return 0.0, [int(p)]
    if not cs.relation[p, q]:
        raise NotCausallyRelated(f"event {cs.events[p].id} does not precede {cs.events[q].id}")
    dist, pred = _kernels.longest_paths_from(cs.topological_order(), cs.relation, w, p)
    return float(dist[q]), _unwind(pred, p, q) if dist[q] > -math.inf else []


def _unwind(pred, p, q):
    path = [int(q)]
    while path[-1] != p:
        path.append(int(pred[path[-1]]))
    return path[::-1]


def check_reverse_triangle(cs, d, tol=REVERSE_TRIANGLE_TOL):
    """Triples ``x < y < z`` with ``d(x,z) < d(x,y) + d(y,z) - tol``.

    ``d`` is an ``(n, n)`` matrix or a callable on event pairs.
    """
    n = cs.n
    if callable(d):
        dm = np.array([[d(a, b) for b in cs.events] for a in cs.events], dtype=float)
    else:
        dm = np.asarray(d, dtype=float)
    r = cs.relation
    out = []
    for y in range(n):
        xs = np.flatnonzero(r[:, y])
        zs = np.flatnonzero(r[y, :])
        if xs.size == 0 or zs.size == 0:
            continue
        lhs = dm[np.ix_(xs, zs)]
        rhs = dm[xs, y][:, None] + dm[y, zs][None, :]
        bad = np.argwhere(lhs < rhs - tol)
        for i, k in bad:
            out.append((int(xs[i]), y, int(zs[k]), float(lhs[i, k]), float(rhs[i, k])))
    return out
