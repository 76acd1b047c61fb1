"""Compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Part one times each kernel on synthetic data with both implementations.
Part two runs the whole pipeline on a few corpus germs in a subprocess per
backend (the backend is fixed at import, so it cannot be switched in-process).
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from pathlib import Path

from gmpy2 import mpq

from mondcert.kernels import backends

ROOT = Path(__file__).resolve().parent.parent
GERMS = ["s3.germ", "b3.germ", "h2.germ", "nonwh.germ"]


def _sparse(rng: random.Random, size: int, span: int) -> list:
    keys = rng.sample(range(span), size)
    return [(k, mpq(rng.randint(-50, 50) or 1, rng.randint(1, 9))) for k in sorted(keys)]


def kernel_cases(rng: random.Random):
    items = _sparse(rng, 400, 5000)
    base = dict(_sparse(rng, 400, 5000))
    p = 2_000_000_011
    items_p = [(k, int(v.numerator) % p) for k, v in items]
    base_p = {k: int(v.numerator) % p for k, v in base.items()}
    # packed monomials: 4 variables, 8 bits each, guard bit on top of every field
    mask = sum(0x7F << (8 * i) for i in range(4))
    guards = sum(0x80 << (8 * i) for i in range(4))

    def pack(e):
        return sum(x << (8 * i) for i, x in enumerate(e))

    lms = [pack([rng.randint(0, 12) for _ in range(4)]) for _ in range(300)]
    keys = [pack([rng.randint(0, 14) for _ in range(4)]) for _ in range(50)]
    pivots = {}
    for col in range(0, 600, 3):
        row = [(col, mpq(1))] + [(c, mpq(rng.randint(-3, 3) or 1)) for c in sorted(rng.sample(range(col + 1, 900), 4))]
        pivots[col] = row
    rows = [{c: mpq(rng.randint(1, 5)) for c in rng.sample(range(600), 6)} for _ in range(40)]

    return {
        "axpy": lambda m: m.axpy(dict(base), items, 7, mpq(3, 2)),
        "axpy_mod": lambda m: m.axpy_mod(dict(base_p), items_p, 7, 12345, p),
        "find_divisor": lambda m: [m.find_divisor(lms, k, mask, guards) for k in keys],
        "find_divisors": lambda m: [m.find_divisors(lms, k, mask, guards) for k in keys],
        "reduce_row": lambda m: [m.reduce_row(dict(r), pivots) for r in rows],
    }


def bench_kernels(repeat: int) -> None:
    impls = backends()
    cases = kernel_cases(random.Random(2024))
    names = sorted(impls)
    print("kernel          " + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for case, fn in cases.items():
        times = {}
        for n in names:
            mod = impls[n]
            times[n] = min(timeit.repeat(lambda: fn(mod), number=20, repeat=repeat)) / 20
        line = f"{case:<16}" + "".join(f"{times[n] * 1e3:>10.3f}ms" for n in names)
        if "cython" in times:
            line += f"{times['python'] / times['cython']:>11.2f}x"
        print(line)
    if "cython" not in impls:
        print("(compiled kernels not built; only the fallback was timed)")


_PIPELINE = """
import sys, time
from mondcert.kernels import BACKEND
from mondcert.germfile import read_germ
from mondcert.report import analyze
best = float("inf")
for _ in range(3):
    t = time.perf_counter()
    for p in sys.argv[1:]:
        analyze(read_germ(p))
    best = min(best, time.perf_counter() - t)
print(BACKEND, best)
"""


def bench_pipeline() -> None:
    paths = [str(ROOT / "corpus" / g) for g in GERMS]
    print(f"\nfull pipeline (best of 3) on {', '.join(GERMS)}")
    results = {}
    for forced in ("1", "0"):
        env = dict(os.environ, MONDCERT_PURE_PYTHON=forced)
        out = subprocess.run([sys.executable, "-c", _PIPELINE, *paths], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        results[out[0]] = float(out[1])
    for name, secs in sorted(results.items()):
        print(f"  {name:<8}{secs:8.2f}s")
    if len(results) == 2:
        print(f"  speedup {results['python'] / results['cython']:.2f}x")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-pipeline", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if not args.skip_pipeline:
        bench_pipeline()


if __name__ == "__main__":
    main()
