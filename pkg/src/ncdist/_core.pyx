# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same API and results as ``ncdist._pycore``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, atan2, cos, sin, INFINITY, isnan

cnp.import_array()


def jacobi_eigh(a, double tol=1e-15, int max_sweeps=100):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.array(a, dtype=np.complex128, copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] am = A
    cdef double complex[:, ::1] vm = V
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double g, theta, c, s, scale = 0.0, off, thresh
    cdef double complex apq, ph, u_qp, u_qq, xp, xq
    for p in range(n):
        for q in range(n):
            scale += am[p, q].real * am[p, q].real + am[p, q].imag * am[p, q].imag
    scale = sqrt(scale)
    if n > 1 and scale > 0.0:
        thresh = tol * scale
        for sweep in range(max_sweeps):
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += am[p, q].real * am[p, q].real + am[p, q].imag * am[p, q].imag
            if sqrt(off) <= thresh:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = am[p, q]
                    g = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                    if g <= 1e-300:
                        continue
                    ph = apq / g
                    theta = 0.5 * atan2(2.0 * g, am[q, q].real - am[p, p].real)
                    c = cos(theta)
                    s = sin(theta)
                    u_qp = -s * ph.conjugate()
                    u_qq = c * ph.conjugate()
                    for k in range(n):
                        xp = am[k, p]
                        xq = am[k, q]
                        am[k, p] = xp * c + xq * u_qp
                        am[k, q] = xp * s + xq * u_qq
                    for k in range(n):
                        xp = am[p, k]
                        xq = am[q, k]
                        am[p, k] = c * xp + u_qp.conjugate() * xq
                        am[q, k] = s * xp + u_qq.conjugate() * xq
                    am[p, q] = 0.0
                    am[q, p] = 0.0
                    am[p, p] = am[p, p].real
                    am[q, q] = am[q, q].real
                    for k in range(n):
                        xp = vm[k, p]
                        xq = vm[k, q]
                        vm[k, p] = xp * c + xq * u_qp
                        vm[k, q] = xp * s + xq * u_qq
    w = A.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def longest_paths_from(order, rel, weights, Py_ssize_t source):
    cdef cnp.uint8_t[:, ::1] r = np.ascontiguousarray(rel, dtype=np.uint8)
    cdef double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long long[::1] od = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = r.shape[0]
    dist_a = np.full(n, -np.inf)
    pred_a = np.full(n, -1, dtype=np.int64)
    cdef double[::1] dist = dist_a
    cdef long long[::1] pred = pred_a
    cdef Py_ssize_t i, u, v
    cdef bint started = False
    cdef double du, wv, cand
    dist[source] = 0.0
    for i in range(od.shape[0]):
        u = od[i]
        if u == source:
            started = True
        if not started or dist[u] == -INFINITY:
            continue
        du = dist[u]
        for v in range(n):
            if r[u, v]:
                wv = w[u, v]
                if isnan(wv):
                    continue
                cand = du + wv
                if cand > dist[v]:
                    dist[v] = cand
                    pred[v] = u
    return dist_a, pred_a


def bellman_ford(Py_ssize_t n, us, vs, cs, Py_ssize_t source):
    cdef long long[::1] U = np.ascontiguousarray(us, dtype=np.int64)
    cdef long long[::1] Vv = np.ascontiguousarray(vs, dtype=np.int64)
    cdef double[::1] C = np.ascontiguousarray(cs, dtype=np.float64)
    cdef Py_ssize_t m = U.shape[0], k, it
    if source < 0:
        dist_a = np.zeros(n)
    else:
        dist_a = np.full(n, np.inf)
        dist_a[source] = 0.0
    cdef double[::1] dist = dist_a
    cdef bint changed
    cdef double du, cand
    for it in range(n):
        changed = False
        for k in range(m):
            du = dist[U[k]]
            if du == INFINITY:
                continue
            cand = du + C[k]
            if cand < dist[Vv[k]]:
                dist[Vv[k]] = cand
                changed = True
        if not changed:
            return dist_a, True
    for k in range(m):
        du = dist[U[k]]
        if du != INFINITY and du + C[k] < dist[Vv[k]]:
            return dist_a, False
    return dist_a, True
