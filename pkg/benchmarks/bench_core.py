"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_core.py [--repeat 5] [--json out.json]

Times the coordinate-wise transform, the translation-norm pass behind the
modulus of continuity, and direct convolution on a few bases, plus the naive
character-sum transform for reference.
"""

import argparse
import json
import math
import time

import numpy as np

from vilenkin import _backend
from vilenkin.group import parse_basis
from vilenkin.transform import forward_transform_naive, CylinderFunction

TRANSFORM_BASES = ["dyadic:12", "dyadic:16", "triadic:8", "triadic:10", "mixed:2,3,5,7,2,3,5,7"]
NORM_BASES = ["dyadic:10", "dyadic:12", "triadic:7", "mixed:2,3,2,3,2,3,2"]
CONV_BASES = ["dyadic:9", "triadic:6", "mixed:2,3,2,3,2,3"]
NAIVE_CAP = 4096


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeat: int) -> list[dict]:
    backends = ["python"] + (["compiled"] if _backend.compiled_available() else [])
    rng = np.random.default_rng(0)
    rows = []

    def add(kernel, spec, fn_for):
        b = parse_basis(spec)
        row = {"kernel": kernel, "basis": spec, "size": b.size}
        for be in backends:
            row[be] = best_of(fn_for(b, be), repeat)
        if "compiled" in row:
            row["speedup"] = row["python"] / row["compiled"]
        rows.append(row)
        return b, row

    for spec in TRANSFORM_BASES:
        b = parse_basis(spec)
        data = rng.standard_normal((1, b.size)) + 0j
        _, row = add("transform", spec,
                     lambda b, be: lambda: _backend.mixed_radix_transform(data, b.radices, -1, be))
        if b.size <= NAIVE_CAP:
            f = CylinderFunction(data[0], b)
            row["naive"] = best_of(lambda: forward_transform_naive(f), 1)

    for spec in NORM_BASES:
        b = parse_basis(spec)
        f = rng.standard_normal(b.size) + 0j
        ts = np.arange(0, b.size, b.scales[1])
        add("translation_norms", spec,
            lambda b, be: lambda: _backend.translation_norms(f, b.radices, ts, [1.0, 2.0, 4.0], be))

    for spec in CONV_BASES:
        b = parse_basis(spec)
        f = rng.standard_normal(b.size) + 0j
        g = rng.standard_normal(b.size) + 0j
        add("convolve", spec, lambda b, be: lambda: _backend.convolve_direct(f, g, b.radices, be))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    rows = bench(args.repeat)
    print(f"default backend: {_backend.BACKEND}")
    print(f"{'kernel':<18} {'basis':<24} {'M_N':>9} {'python s':>10} {'compiled s':>11} "
          f"{'speedup':>8} {'naive s':>9}")
    for r in rows:
        comp = f"{r['compiled']:.3e}" if "compiled" in r else "-"
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else "-"
        nv = f"{r['naive']:.3e}" if "naive" in r else ""
        print(f"{r['kernel']:<18} {r['basis']:<24} {r['size']:>9} {r['python']:>10.3e} "
              f"{comp:>11} {sp:>8} {nv:>9}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
