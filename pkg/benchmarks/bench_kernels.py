"""Compare the compiled bitmask kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import timeit

from ultrachase import _kernels_py, kernels
from ultrachase.ideals import _table, submasks


def tables(n, count=4, seed=1):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        top = ((1 << n) - 1) & ~(1 << rng.randrange(n))
        out.append(_table(n, set(submasks(top))))
    return out


def cases():
    yield "ideal_codes(4)", lambda k: k.ideal_codes(4)
    for n in (8, 10, 12):
        tabs = tables(n)
        yield f"down+union n={n}", lambda k, tabs=tabs, n=n: [
            (k.down_violation(tb, n), k.union_violation(tb, n)) for tb in tabs
        ]
    for n in (8, 10):
        tabs = tables(n)
        yield f"prime_masks n={n}", lambda k, tabs=tabs, n=n: [k.prime_masks(tb, n) for tb in tabs]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = kernels.BACKENDS.get("compiled")
    if compiled is None:
        print("compiled extension not built; only the python backend is available")
    print(f"{'case':<22}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, fn in cases():
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:<22}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        assert fn(compiled) == fn(_kernels_py), name
        cc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        print(f"{name:<22}{py:>12.4f}{cc:>12.4f}{py / cc:>9.1f}x", flush=True)


if __name__ == "__main__":
    main()
