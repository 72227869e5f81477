"""Compare the compiled and pure-Python series kernels.

Each case builds the kernel program for one catalog function at zeta_n and
times both backends on the identical program. Results must agree exactly.

    python benchmarks/bench_kernel.py --n 51 101 199 --repeat 5
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time

from cyclomock import _kernel_py
from cyclomock.mocktheta import CATALOG, root_point
from cyclomock.qseries import _plan_monomial

try:
    from cyclomock import _kernel as _compiled
except ImportError:
    _compiled = None


def build_program(fid: str, n: int):
    entry = CATALOG[fid]
    point = entry.apply(root_point(n, 1))
    plan = _plan_monomial(entry.spec, n, point.as_monomial(), 4 * n)
    if plan is None:
        raise SystemExit(f"{fid} at n={n} does not use the kernel path")
    step_ptr, codes, ms, signs, exps, _ = plan
    return n, step_ptr, codes, ms, signs, exps


def best_of(fn, args, repeat: int) -> tuple[float, float]:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, nargs="+", default=[51, 101, 199])
    ap.add_argument("--fn", nargs="+", default=["phi", "u", "S0_neg"])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled kernel not built; only the Python kernel is timed", file=sys.stderr)
    print(f"{'fn':<8} {'n':>5} {'ops':>6} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for fid in args.fn:
        for n in args.n:
            prog = build_program(fid, n)
            py_best, _ = best_of(_kernel_py.run_steps, prog, args.repeat)
            if _compiled is None:
                print(f"{fid:<8} {n:>5} {len(prog[2]):>6} {py_best * 1e3:>10.2f} {'-':>12} {'-':>8}")
                continue
            try:
                c_out = _compiled.run_steps(*prog)
            except OverflowError:
                print(f"{fid:<8} {n:>5} {len(prog[2]):>6} {py_best * 1e3:>10.2f} {'overflow':>12} {'-':>8}")
                continue
            py_out = _kernel_py.run_steps(*prog)
            if list(c_out[0]) != list(py_out[0]) or c_out[1] != py_out[1]:
                print(f"backends disagree for {fid} at n={n}", file=sys.stderr)
                return 1
            c_best, _ = best_of(_compiled.run_steps, prog, args.repeat)
            print(f"{fid:<8} {n:>5} {len(prog[2]):>6} {py_best * 1e3:>10.2f} {c_best * 1e3:>12.3f} "
                  f"{py_best / c_best:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
