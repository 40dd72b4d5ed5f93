"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.  Both backends are imported
directly, so the comparison does not depend on ``POLYJC_PURE``.
"""
from __future__ import annotations

import argparse
import random
import timeit
from fractions import Fraction

from polyjc import _kernels_py

try:
    from polyjc import _kernels
except ImportError:  # extension not built
    _kernels = None


def random_terms(rng, nvars, nterms, maxdeg):
    out = {}
    while len(out) < nterms:
        e = tuple(rng.randint(0, maxdeg) for _ in range(nvars))
        out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def cases(rng):
    a = random_terms(rng, 3, 60, 6)
    b = random_terms(rng, 3, 60, 6)
    src = random_terms(rng, 3, 80, 5)
    return {
        "mul_terms": lambda k: k.mul_terms(a, b),
        "mul_terms_trunc": lambda k: k.mul_terms_trunc(a, b, 8),
        "sub_mul_term": lambda k: k.sub_mul_term(dict(a), src, Fraction(3, 7), (1, 0, 2)),
        "box_search": lambda k: k.box_search(4, 6, 10, 120, 30),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    print(f"{'kernel':18} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases(rng).items():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:18} {tp:10.2f} {'n/a':>10} {'n/a':>8}")
            continue
        if fn(_kernels_py) != fn(_kernels):
            raise SystemExit(f"{name}: backends disagree")
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:18} {tp:10.2f} {tc:10.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
