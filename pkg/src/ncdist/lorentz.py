"""Lorentzian distance as an infimum over dilatations.

A function ``f`` on events is a dilatation for pair weights ``w`` when
``|f(x) - f(y)| >= w(x, y)`` on every constrained pair ``x < y``. The
distance from ``p`` to ``q`` is the smallest ``|f(p) - f(q)|`` a dilatation
can achieve. Restricted to monotone dilatations this is a difference
constraint system whose optimum is the heaviest chain from ``p`` to ``q``.
"""
from dataclasses import dataclass, field
import heapq
from itertools import product
import math

import numpy as np

from ncdist import _kernels
from ncdist.causet import CausalSet, _check_weights, _unwind
from ncdist.errors import InstanceTooLarge, InvalidInput, NotCausallyRelated
from ncdist.rng import rng_for

DILATATION_TOL = 1e-9
BRUTEFORCE_MAX_PAIRS = 10
SAMPLED_MAX_EVENTS = 8
SAMPLED_PATTERNS = 4096


@dataclass
class DilatationProgram:
    """Constraints ``f[y] - f[x] >= w`` for each ``(x, y, w)``."""

    n: int
    constraints: list
    source: int
    sink: int

    @classmethod
    def from_causet(cls, cs, weights, p, q):
        w = _check_weights(cs, weights)
        pairs = np.argwhere(cs.relation & ~np.isnan(w))
        cons = [(int(x), int(y), float(w[x, y])) for x, y in pairs]
        return cls(cs.n, cons, int(p), int(q))


@dataclass
class LorentzDistanceResult:
    value: float
    witness: np.ndarray
    dual_path: list
    case_report: dict = field(default_factory=dict)

    def to_dict(self, ids=None):
        path = self.dual_path if ids is None else [ids[i] for i in self.dual_path]
        return {
            "value": self.value,
            "witness": [float(v) for v in self.witness],
            "dual_path": path,
            "case_report": self.case_report,
        }


def _require_causal(cs, p, q):
    for i in (p, q):
        if not (isinstance(i, (int, np.integer)) and 0 <= i < cs.n):
            raise InvalidInput(f"event index {i!r} out of range")
    if not cs.relation[p, q]:
        raise NotCausallyRelated(
            f"event {cs.events[p].id} does not causally precede event {cs.events[q].id}"
        )


def dilatation_distance_monotone(cs, weights, p, q):
    """Exact infimum over monotone dilatations (heaviest-chain duality).

    The witness is ``f(z) = longest(p, z)`` where defined; remaining events
    get, in reverse topological order, the largest value their successor
    constraints allow (0 if unconstrained), so every constraint holds.
    """
    _require_causal(cs, p, q)
    w = _check_weights(cs, weights)
    order = cs.topological_order()
    dist, pred = _kernels.longest_paths_from(order, cs.relation, w, p)
    f = np.array(dist, dtype=float)
    edges = cs.relation & ~np.isnan(w)
    for z in order[::-1]:
        if f[z] > -math.inf:
            continue
        succ = np.flatnonzero(edges[z])
        f[z] = float(np.min(f[succ] - w[z, succ])) if succ.size else 0.0
    if dist[q] == -math.inf:
        # no weighted chain from p to q: f_q - f_p ranges over all reals
        return LorentzDistanceResult(0.0, _tied_witness(edges, w, p, q), [])
    return LorentzDistanceResult(float(dist[q]), f, _unwind(pred, p, q))


def _tied_witness(edges, w, p, q):
    """Feasible monotone dilatation with ``f_p = f_q`` (Bellman-Ford)."""
    xs, ys = np.nonzero(edges)
    us = np.concatenate([ys, [p, q]]).astype(np.int64)
    vs = np.concatenate([xs, [q, p]]).astype(np.int64)
    cs_ = np.concatenate([-w[xs, ys], [0.0, 0.0]])
    f, ok = _kernels.bellman_ford(edges.shape[0], us, vs, cs_, -1)
    if not ok:
        raise AssertionError("monotone dilatation system unexpectedly infeasible")
    return np.asarray(f, dtype=float)


def dilatation_check(f, cs, weights, tol=DILATATION_TOL):
    """Constrained pairs ``(x, y)`` with ``|f_x - f_y| < w(x, y) - tol``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (cs.n,):
        raise InvalidInput("function length must equal the event count")
    w = _check_weights(cs, weights)
    used = cs.relation & ~np.isnan(w)
    gap = np.abs(f[:, None] - f[None, :])
    bad = used & (gap < np.where(used, w, 0.0) - tol)
    return [(int(x), int(y)) for x, y in np.argwhere(bad)]


def _pattern_range(n, cons, signs, p, q):
    """Interval of ``f_q - f_p`` over one sign pattern, or None if empty.

    Sign +1 keeps ``f_y - f_x >= w``; -1 flips it to ``f_x - f_y >= w``.
    Written as ``f_b - f_a <= c`` edges a -> b for shortest paths.
    """
    us, vs, cs_ = [], [], []
    for (x, y, w), s in zip(cons, signs):
        lo, hi = (x, y) if s > 0 else (y, x)
        # f_hi - f_lo >= w  <=>  f_lo - f_hi <= -w : edge hi -> lo, cost -w
        us.append(hi)
        vs.append(lo)
        cs_.append(-w)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    cs_ = np.asarray(cs_, dtype=float)
    _, ok = _kernels.bellman_ford(n, us, vs, cs_, -1)
    if not ok:
        return None
    from_p, _ = _kernels.bellman_ford(n, us, vs, cs_, p)
    from_q, _ = _kernels.bellman_ford(n, us, vs, cs_, q)
    # max(f_q - f_p) = sp(p -> q); min(f_q - f_p) = -sp(q -> p)
    return -float(from_q[p]), float(from_p[q])


def _min_abs(lo, hi):
    if lo <= 0.0 <= hi:
        return 0.0
    return min(abs(lo), abs(hi))


def dilatation_distance_bruteforce(cs, weights, p, q, samples=None, seed=0):
    """Infimum of ``|f_p - f_q|`` over all dilatations, by sign enumeration.

    Exact for at most 10 constrained pairs. With ``samples`` set and at most
    8 events, a seeded random subset of sign patterns is tried instead and
    the result is labelled ``"sampled"``. Returns ``(value, signs, mode)``.
    """
    _require_causal(cs, p, q)
    cons = DilatationProgram.from_causet(cs, weights, p, q).constraints
    m = len(cons)
    if m <= BRUTEFORCE_MAX_PAIRS:
        patterns = product((1, -1), repeat=m)
        mode = "exact"
    elif samples is not None and cs.n <= SAMPLED_MAX_EVENTS:
        rng = rng_for(seed, "bruteforce-signs")
        k = int(samples) if samples is not True else SAMPLED_PATTERNS
        drawn = rng.integers(0, 2, size=(k, m))
        patterns = [tuple(1 if b else -1 for b in row) for row in drawn]
        patterns.insert(0, (1,) * m)
        mode = "sampled"
    else:
        raise InstanceTooLarge(f"{m} constrained pairs exceeds the cap of {BRUTEFORCE_MAX_PAIRS}")
    best = (math.inf, None)
    for signs in patterns:
        rng_ = _pattern_range(cs.n, cons, signs, p, q)
        if rng_ is None:
            continue
        val = _min_abs(*rng_)
        if val < best[0]:
            best = (val, tuple(signs))
    return best[0], best[1], mode


def lipschitz_null_collapse(cs, weights, p, q):
    """``sup |f_p - f_q|`` under the symmetric Lipschitz constraints.

    Every related pair gives ``|f_x - f_y| <= d(x, y)`` and
    ``|f_y - f_x| <= d(y, x) = 0``; as difference constraints these are the
    edges x -> y (cost ``d(x, y)``) and y -> x, x -> y (cost 0). The sup is
    the larger shortest-path distance between p and q, so it vanishes as
    soon as a chain of related pairs connects them.
    """
    n = cs.n
    if not (0 <= p < n and 0 <= q < n):
        raise InvalidInput("event index out of range")
    if p == q:
        return 0.0
    r = cs.relation
    cost = np.full((n, n), np.inf)
    # d(y, x) = 0 on related pairs pins both directions, which makes the
    # forward edge x -> y with cost d(x, y) >= 0 redundant; ``weights``
    # therefore never changes the answer
    cost[r] = 0.0
    cost[r.T] = 0.0
    return float(max(_directed_sp(cost, p)[q], _directed_sp(cost, q)[p]))


def _directed_sp(cost, source):
    n = cost.shape[0]
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = np.zeros(n, dtype=bool)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v in np.flatnonzero(np.isfinite(cost[u])):
            nd = d + cost[u, v]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return dist


# -- Cauchy surfaces ---------------------------------------------------------


@dataclass(frozen=True)
class CauchySlice:
    """Discrete antichain of event indices, or the continuum slab t = t0."""

    kind: str
    members: tuple = ()
    t0: float = 0.0

    @classmethod
    def continuum(cls, t0=0.0):
        return cls("continuum", (), float(t0))

    @classmethod
    def discrete(cls, members, cs=None):
        members = tuple(int(m) for m in members)
        if not members:
            raise InvalidInput("Cauchy slice must be non-empty")
        if cs is not None:
            sub = cs.relation[np.ix_(members, members)]
            if np.any(sub):
                raise InvalidInput("Cauchy slice members must form an antichain")
        return cls("discrete", members)


@dataclass(frozen=True)
class FlatContinuum:
    """Flat 1+1 Minkowski space; points are ``(t, x)`` pairs."""

    def d(self, a, b):
        dt = b[0] - a[0]
        dx = abs(b[1] - a[1])
        return math.sqrt(max((dt - dx) * (dt + dx), 0.0)) if dt >= dx else 0.0


@dataclass
class DiscreteModel:
    """Causal set plus a pair-distance matrix (0 off the relation)."""

    cs: CausalSet
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        self.weights = np.where(self.cs.relation & ~np.isnan(w), w, 0.0)

    def d(self, a, b):
        return float(self.weights[a, b])


def surface_distance(model, z, surface, direction):
    """``sup_{t in C} d(z, t)`` (to_surface) or ``sup d(t, z)`` (from_surface)."""
    if direction not in ("to_surface", "from_surface"):
        raise InvalidInput(f"unknown direction {direction!r}")
    if surface.kind == "continuum":
        if not isinstance(model, FlatContinuum):
            raise InvalidInput("continuum slice requires the flat continuum model")
        # sup attained at equal spatial coordinate
        if direction == "from_surface":
            return max(z[0] - surface.t0, 0.0)
        return max(surface.t0 - z[0], 0.0)
    if not surface.members:
        raise InvalidInput("Cauchy slice must be non-empty")
    if direction == "to_surface":
        return max(model.d(z, t) for t in surface.members)
    return max(model.d(t, z) for t in surface.members)


def cauchy_function(model, surface):
    """``f(z) = d(z, C) - d(C, z)`` as a callable (continuum) or a vector."""
    if surface.kind == "continuum":
        return lambda z: surface_distance(model, z, surface, "to_surface") - surface_distance(
            model, z, surface, "from_surface"
        )
    return np.array(
        [
            surface_distance(model, z, surface, "to_surface")
            - surface_distance(model, z, surface, "from_surface")
            for z in range(model.cs.n)
        ]
    )


CASES = ("x<C<y", "C<x<y", "x<y<C", "other")


def _classify(model, surface, x, y):
    if surface.kind == "continuum":
        t0 = surface.t0
        if x[0] < t0 < y[0]:
            return "x<C<y"
        if x[0] >= t0:
            return "C<x<y"
        return "x<y<C"
    r = model.cs.relation
    mem = list(surface.members)
    below = lambda z: z in mem or bool(np.any(r[mem, z]))  # noqa: E731
    above = lambda z: z in mem or bool(np.any(r[z, mem]))  # noqa: E731
    if x not in mem and y not in mem and np.any(r[x, mem]) and np.any(r[mem, y]):
        return "x<C<y"
    if below(x):
        return "C<x<y"
    if above(y):
        return "x<y<C"
    return "other"


def _certificate(model, surface, case, x, y):
    """Slack of the case inequality chain used to certify ``|df| >= d``.

    x<C<y: d(x,C) + d(C,y) >= d(x,t) + d(t,y) with t = geodesic crossing.
    C<x<y: d(C,y) - d(C,x) >= d(t,y) - d(t,x) >= d(x,y), t the foot of x.
    x<y<C: mirror of the previous case.
    """
    if surface.kind != "continuum":
        return None
    t0 = surface.t0
    dxy = model.d(x, y)
    if case == "x<C<y":
        frac = (t0 - x[0]) / (y[0] - x[0])
        t = (t0, x[1] + frac * (y[1] - x[1]))
        return model.d(x, t) + model.d(t, y) - dxy
    if case == "C<x<y":
        t = (t0, x[1])
        return model.d(t, y) - model.d(t, x) - dxy
    t = (t0, y[1])
    return model.d(x, t) - model.d(y, t) - dxy


def verify_cauchy_cases(model, surface, sample_pairs, tol=DILATATION_TOL):
    """Check ``|f(x) - f(y)| >= d(x, y)`` on causal pairs, sorted by case.

    Returns ``{"rows": [...], "summary": {case: {"count", "pass"}}}``; each
    row is ``(pair_id, case, lhs, rhs, pass)`` with ``lhs = |df|``.
    """
    f = cauchy_function(model, surface)
    ev = f if callable(f) else (lambda z: float(f[z]))
    rows = []
    summary = {c: {"count": 0, "pass": 0, "certified": 0} for c in CASES}
    for k, (x, y) in enumerate(sample_pairs):
        lhs = abs(ev(x) - ev(y))
        rhs = model.d(x, y)
        ok = lhs >= rhs - tol
        case = _classify(model, surface, x, y)
        cert = _certificate(model, surface, case, x, y)
        summary[case]["count"] += 1
        summary[case]["pass"] += int(ok)
        summary[case]["certified"] += int(cert is not None and cert >= -tol)
        rows.append((k, case, lhs, rhs, bool(ok)))
    return {"rows": rows, "summary": summary}


def sample_causal_pairs_continuum(count, seed, extent=1.0, t_center=0.0):
    """``count`` causal pairs drawn uniformly from a diamond centred on t_center.

    Rejection sampling: both points uniform in the diamond of height
    ``extent``; spacelike draws are discarded; each kept pair is ordered so
    that x precedes y.
    """
    rng = rng_for(seed, "cauchy-pairs")
    out = []
    half = 0.5 * extent
    while len(out) < count:
        m = max(2 * (count - len(out)), 16)
        u = rng.uniform(0.0, extent, (m, 2))
        v = rng.uniform(0.0, extent, (m, 2))
        t = t_center - half + 0.5 * (u + v)
        x = 0.5 * (u - v)
        for i in range(m):
            a = (float(t[i, 0]), float(x[i, 0]))
            b = (float(t[i, 1]), float(x[i, 1]))
            if abs(b[0] - a[0]) >= abs(b[1] - a[1]):
                out.append((a, b) if a[0] <= b[0] else (b, a))
                if len(out) == count:
                    break
    return out


def discrete_surface_gap(model, surface, p, q):
    """``d(C, q) - d(p, q)``: how far a discrete slice misses the equality case."""
    return surface_distance(model, q, surface, "from_surface") - model.d(p, q)
