"""Compiled core vs pure-Python fallback on the three hot kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from ncdist import _kernels
from ncdist.causet import Diamond, sprinkle, tau_matrix


def cases():
    rng = np.random.default_rng(0)
    for n in (8, 32, 64):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = (x + x.conj().T) / 2
        yield f"jacobi_eigh n={n}", lambda b, a=a: b.jacobi_eigh(a)
    for n in (200, 800):
        cs = sprinkle(Diamond(1.0), n, seed=1)
        w, order, rel = tau_matrix(cs), cs.topological_order(), cs.relation
        yield f"longest_paths_from n={n}", lambda b, o=order, r=rel, w=w: b.longest_paths_from(o, r, w, int(o[0]))
    for m in (10, 200):
        n = m // 2 + 2
        us = rng.integers(0, n, m).astype(np.int64)
        vs = rng.integers(0, n, m).astype(np.int64)
        cs_ = rng.uniform(0, 1, m)
        yield f"bellman_ford edges={m}", lambda b, us=us, vs=vs, c=cs_, n=n: b.bellman_ford(n, us, vs, c, -1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    if "compiled" not in backends:
        print("compiled core not built; only the fallback is timed")
    names = sorted(backends)
    print(f"{'kernel':<28}" + "".join(f"{n:>14}" for n in names) + (f"{'speedup':>10}" if len(names) == 2 else ""))
    for label, fn in cases():
        times = {}
        for name in names:
            b = backends[name]
            number = 1
            while timeit.timeit(lambda: fn(b), number=number) < 0.05 and number < 10_000:
                number *= 4
            times[name] = min(timeit.repeat(lambda: fn(b), number=number, repeat=args.repeat)) / number
        row = f"{label:<28}" + "".join(f"{times[n] * 1e3:>12.3f}ms" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
