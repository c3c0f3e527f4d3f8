"""Compare the compiled and pure-Python rank kernels.

    python benchmarks/bench_rank.py [--sizes 200 500 1000] [--repeat 3]

Square-ish random matrices over GF(2**31 - 1) plus Terracini matrices from
real statements. Both kernels must agree on every rank.
"""
import argparse
import time

import numpy as np

from chowsecant import _ffpure
from chowsecant.ff_linalg import DEFAULT_PRIME, sample_uniform
from chowsecant.terracini import Statement, build_statement_matrix

try:
    from chowsecant import _ffcore
except ImportError:
    _ffcore = None

P = DEFAULT_PRIME


def best_of(fn, m, repeat):
    times, r = [], None
    for _ in range(repeat):
        a = m.copy()
        t0 = time.perf_counter()
        r = fn(a, P)
        times.append(time.perf_counter() - t0)
    return min(times), r


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-pure-above", type=int, default=1000,
                    help="largest row count timed with the pure kernel")
    args = ap.parse_args(argv)

    cases = [(f"random {k}x{k + 50}", sample_uniform(k * (k + 50), seed=k, p=P).reshape(k, k + 50))
             for k in args.sizes]
    for st in (Statement(4, 4, 3), Statement(5, 4, 7), Statement(4, 7, 10)):
        cases.append((f"terracini {st}", build_statement_matrix(st, 1)))

    print(f"{'case':34} {'shape':>11} {'rank':>5} {'cython s':>9} {'numpy s':>9} {'speedup':>8}")
    for name, m in cases:
        shape = f"{m.shape[0]}x{m.shape[1]}"
        tc = rc = None
        if _ffcore is not None:
            tc, rc = best_of(_ffcore.rank_inplace, m, args.repeat)
        tp = rp = None
        if m.shape[0] <= args.skip_pure_above:
            tp, rp = best_of(_ffpure.rank_inplace, m, 1 if m.shape[0] > 500 else args.repeat)
        if rc is not None and rp is not None and rc != rp:
            raise SystemExit(f"kernels disagree on {name}: {rc} vs {rp}")
        r = rc if rc is not None else rp
        fmt = lambda t: f"{t:9.3f}" if t is not None else f"{'-':>9}"
        speed = f"{tp / tc:7.1f}x" if tc and tp else f"{'-':>8}"
        print(f"{name:34} {shape:>11} {r:>5} {fmt(tc)} {fmt(tp)} {speed}")


if __name__ == "__main__":
    main()
