"""Compare the compiled and pure-Python evaluation kernels.

Usage: python benchmarks/bench_kernels.py [--batch 2000] [--length 24] [--repeat 3]

Each workload evaluates one quantifier-free body on a batch of random
two-trace assignments folded to a common lasso, then checks that both
backends return identical tables.
"""
import argparse
import random
import time

import numpy as np

from hypersat import _kernels
from hypersat.syntax import parse_formula

WORKLOADS = {
    "until-chain": "(a[p] U (b[q] U (a[q] & X b[p]))) & G F a[p]",
    "nested-globally": "G (a[p] -> F (b[q] & X G !a[q])) | (b[p] U G a[q])",
    "iff-heavy": "G ((a[p] <-> a[q]) & (b[p] <-> X b[q])) -> F (a[p] & b[q])",
}


def make_labels(rng, batch, length, nbits=2):
    return np.array(
        [[[rng.getrandbits(nbits) for _ in range(length)] for _ in range(2)] for _ in range(batch)],
        dtype=np.uint64,
    )


def time_backend(name, prog, labels, S, repeat):
    best = float("inf")
    with _kernels.using_backend(name):
        for _ in range(repeat):
            t0 = time.perf_counter()
            table = _kernels.eval_program(prog, labels, S)
            best = min(best, time.perf_counter() - t0)
    return best, table


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=2000)
    ap.add_argument("--length", type=int, default=24, help="folded positions S + P")
    ap.add_argument("--stem", type=int, default=8, help="stem length S")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)}; batch {args.batch}, {args.length} positions, stem {args.stem}")
    if "compiled" not in backends:
        print("compiled kernel not built; only the python timing is shown")
    rng = random.Random(args.seed)
    labels = make_labels(rng, args.batch, args.length)
    print(f"{'workload':<18}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, text in WORKLOADS.items():
        prog = _kernels.compile_program(parse_formula(text, "hyperltl"), ("p", "q"), ("a", "b"))
        tp, table_p = time_backend("python", prog, labels, args.stem, args.repeat)
        if "compiled" in backends:
            tc, table_c = time_backend("compiled", prog, labels, args.stem, args.repeat)
            if not np.array_equal(table_p, table_c):
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:<18}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")
        else:
            print(f"{name:<18}{tp:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
