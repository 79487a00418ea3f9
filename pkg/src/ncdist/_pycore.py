"""Pure-Python/numpy versions of the hot kernels.

Mirrors the API of the compiled ``_core`` extension exactly. Selected by
``ncdist._kernels`` when the extension is missing or when the environment
variable ``NCDIST_PURE_PYTHON`` is set.
"""
import numpy as np

NEG_INF = -np.inf


def jacobi_eigh(a, tol=1e-15, max_sweeps=100):
    """Cyclic Jacobi eigensolver for a complex hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ascending and orthonormal
    eigenvectors in the columns of ``v``. Pivots are visited in row-major
    order so the result is deterministic.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.sqrt(np.sum(np.abs(a) ** 2))
    if n == 1 or scale == 0.0:
        w = a.diagonal().real.copy()
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order]
    thresh = tol * scale
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(a.diagonal())) ** 2))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= 1e-300:
                    continue
                ph = apq / g
                theta = 0.5 * np.arctan2(2.0 * g, a[q, q].real - a[p, p].real)
                c = np.cos(theta)
                s = np.sin(theta)
                # U = [[c, s], [-s*conj(ph), c*conj(ph)]] acting on (p, q)
                u_qp = -s * np.conj(ph)
                u_qq = c * np.conj(ph)
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = colp * c + colq * u_qp
                a[:, q] = colp * s + colq * u_qq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp + np.conj(u_qp) * rowq
                a[q, :] = s * rowp + np.conj(u_qq) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = vp * c + vq * u_qp
                v[:, q] = vp * s + vq * u_qq
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def longest_paths_from(order, rel, weights, source):
    """Single-source longest paths over a DAG in topological ``order``.

    ``rel[i, j]`` marks usable edges i -> j and ``weights[i, j]`` their
    lengths; NaN weights mark absent edges. Returns ``(dist, pred)`` where
    unreachable nodes carry ``-inf`` and predecessor ``-1``. Ties keep the
    first predecessor found.
    """
    n = rel.shape[0]
    dist = np.full(n, NEG_INF)
    pred = np.full(n, -1, dtype=np.int64)
    dist[source] = 0.0
    started = False
    for u in order:
        if u == source:
            started = True
        if not started or dist[u] == NEG_INF:
            continue
        du = dist[u]
        row = rel[u]
        wrow = weights[u]
        for v in range(n):
            if row[v]:
                w = wrow[v]
                if w != w:
                    continue
                cand = du + w
                if cand > dist[v]:
                    dist[v] = cand
                    pred[v] = u
    return dist, pred


def bellman_ford(n, us, vs, cs, source):
    """Shortest paths for difference constraints ``x[v] - x[u] <= c``.

    ``source = -1`` starts every node at 0 (virtual source), which is the
    feasibility test for the whole system. Returns ``(dist, ok)``; ``ok`` is
    False when a negative cycle is reachable.
    """
    if source < 0:
        dist = np.zeros(n)
    else:
        dist = np.full(n, np.inf)
        dist[source] = 0.0
    m = len(us)
    for _ in range(n):
        changed = False
        for k in range(m):
            du = dist[us[k]]
            if du == np.inf:
                continue
            cand = du + cs[k]
            if cand < dist[vs[k]]:
                dist[vs[k]] = cand
                changed = True
        if not changed:
            return dist, True
    for k in range(m):
        du = dist[us[k]]
        if du != np.inf and du + cs[k] < dist[vs[k]]:
            return dist, False
    return dist, True

