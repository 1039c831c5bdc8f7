"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--no-solve]

Kernel timings run in-process on seeded random inputs. The end-to-end
timing runs the same solve in two subprocesses, one of them with
CDERIV_PURE_PYTHON=1.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from cderiv import _kernels_py

try:
    from cderiv import _kernels as compiled
except ImportError:
    compiled = None

SOLVE_SNIPPET = """
import time
from cderiv import DegreeBound, EquationKind, solve
from cderiv.lcsa import builtin
t = time.perf_counter()
solve(builtin("cur_sl2"), EquationKind.der(), DegreeBound(3, 3))
print(time.perf_counter() - t)
"""


def poly_terms(rng: random.Random, n: int) -> dict:
    return {rng.randrange(1 << 24): rng.randint(-99, 99) or 1 for _ in range(n)}


def int_matrix(rng: random.Random, nrows: int, ncols: int) -> list:
    return [[rng.randint(-5, 5) for _ in range(ncols)] for _ in range(nrows)]


def bench(label: str, fn_py, fn_c, repeat: int) -> None:
    t_py = min(timeit.repeat(fn_py, number=1, repeat=repeat))
    if fn_c is None:
        print(f"{label:<28} python {t_py * 1e3:9.2f} ms   compiled      n/a")
        return
    t_c = min(timeit.repeat(fn_c, number=1, repeat=repeat))
    print(f"{label:<28} python {t_py * 1e3:9.2f} ms   compiled {t_c * 1e3:9.2f} ms   x{t_py / t_c:5.2f}")


def solve_time(pure: bool) -> float:
    env = dict(os.environ, CDERIV_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-solve", action="store_true", help="skip the end-to-end solve")
    args = ap.parse_args()
    rng = random.Random(20240611)

    a, b = poly_terms(rng, 200), poly_terms(rng, 200)
    c = compiled
    bench("mul_terms 200x200", lambda: _kernels_py.mul_terms(a, b), c and (lambda: c.mul_terms(a, b)), args.repeat)
    bench("add_terms 200+200", lambda: _kernels_py.add_terms(a, b, 3), c and (lambda: c.add_terms(a, b, 3)), args.repeat)
    for n in (40, 80):
        m = int_matrix(rng, n, n)
        bench(
            f"rref_int {n}x{n}",
            lambda m=m, n=n: _kernels_py.rref_int(m, n),
            c and (lambda m=m, n=n: c.rref_int(m, n)),
            args.repeat,
        )
    if not args.no_solve:
        t_py, t_c = solve_time(True), solve_time(False)
        print(f"{'solve DER cur_sl2 (3,3)':<28} python {t_py * 1e3:9.2f} ms   compiled {t_c * 1e3:9.2f} ms   x{t_py / t_c:5.2f}")


if __name__ == "__main__":
    main()
