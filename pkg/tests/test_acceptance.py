"""Acceptance criteria, one check per criterion.

Run under pytest (each criterion is a test, and the PASS/FAIL lines are
repeated in the terminal summary) or directly::

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from vilenkin.approx import (
    LipSpec,
    build_corpus,
    c_cap,
    constant_rigidity_check,
    growth_ok,
    lip_generator,
    modulus_profiles,
    rate_table,
    sweep,
)
from vilenkin.group import parse_basis
from vilenkin.identities import identity_suite
from vilenkin.means import (
    abel_norlund_mean,
    convolve,
    dirichlet_kernel,
    norlund_mean,
    norlund_mean_convolution,
    partial_sum,
)
from vilenkin.transform import CylinderFunction, character_table, fast_forward_rows
from vilenkin.weights import build_weights

BASES = ("dyadic:8", "triadic:6", "mixed:2,3,2,3,2,3")
CORPUS_SIZE = 50
CORPUS_SEED = 20240
PS = (1.0, 2.0, 4.0)
IDENTITY_TOL = 1e-10
EXPLICIT_TOL = 1e-9

# criterion number -> (passed, detail)
RESULTS: dict[int, tuple[bool, str]] = {}


def _record(k: int, passed: bool, detail: str) -> bool:
    RESULTS[k] = (bool(passed), detail)
    print(f"{'PASS' if passed else 'FAIL'} criterion {k:2d}: {detail}", flush=True)
    return bool(passed)


@lru_cache(maxsize=None)
def _suite(spec: str):
    t0 = time.perf_counter()
    res = {r.identity: r for r in identity_suite(parse_basis(spec), IDENTITY_TOL)}
    return res, time.perf_counter() - t0


@lru_cache(maxsize=None)
def _corpus(spec: str):
    b = parse_basis(spec)
    entries = build_corpus(b, CORPUS_SIZE, CORPUS_SEED)
    profiles = [modulus_profiles(e.function, PS) for e in entries]
    return b, entries, profiles


def _identity_criterion(k: int, names: list[str], label: str) -> bool:
    worst, failed = 0.0, []
    for spec in BASES:
        res, _ = _suite(spec)
        for name in names:
            r = res[name]
            worst = max(worst, r.max_residual)
            if not r.passed:
                failed.append(f"{spec}/{name}={r.max_residual:.3g}")
    detail = f"{label}; worst {worst:.3g}"
    if failed:
        detail += "; failing " + ", ".join(failed)
    return _record(k, not failed, detail)


# criteria

def criterion_1() -> bool:
    t0 = time.perf_counter()
    worst, ok = 0.0, True
    for spec in BASES:
        b = parse_basis(spec)
        for s, Ms in enumerate(b.scales):
            ind = ~b.digit_table[:, :s].any(axis=1)
            r = float(np.max(np.abs(dirichlet_kernel(Ms, b).values - Ms * ind)))
            worst = max(worst, r)
        ok &= _suite(spec)[0]["dirichlet_scale_indicator"].passed
    elapsed = time.perf_counter() - t0
    ok &= worst < IDENTITY_TOL and elapsed < 10
    return _record(1, ok, f"D_(M_n) = M_n 1_(I_n), residual {worst:.3g}, {elapsed:.2f} s")


def criterion_2() -> bool:
    specs = [s for s in BASES if parse_basis(s).size <= 256]
    worst, checked = 0.0, 0
    for spec in specs:
        r = _suite(spec)[0]["dirichlet_complement"]
        worst = max(worst, r.max_residual)
        checked += r.checked
    return _record(2, worst < IDENTITY_TOL,
                   f"Dirichlet complement identity on {', '.join(specs)}: "
                   f"{checked} (n, j) pairs, residual {worst:.3g}")


def criterion_3() -> bool:
    return _identity_criterion(3, ["fejer_closed_form"], "Fejer closed form vs summed kernel")


def criterion_4() -> bool:
    ok = True
    l1 = 0.0
    int_res = 0.0
    for spec in BASES:
        res, _ = _suite(spec)
        int_res = max(int_res, res["fejer_integral"].max_residual)
        l1 = max(l1, res["fejer_l1_bound"].max_residual)
        ok &= res["fejer_integral"].passed and res["fejer_l1_bound"].passed
    return _record(4, ok, f"|int K_n - 1| <= {int_res:.3g}; max int |K_n| = {l1:.6f} (<= 2)")


def criterion_5() -> bool:
    ok = True
    parts = []
    for spec in BASES:
        r = _suite(spec)[0]["fejer_domination"]
        ok &= r.passed
        parts.append(f"{spec} ratio {r.max_residual:.6g}")
    return _record(5, ok, "pointwise Fejer domination (<= 1 + 1e-10): " + "; ".join(parts))


def criterion_6() -> bool:
    worst_fast = worst_sd = worst_nor = 0.0
    weights = ("constant", "power:1", "log", "geom:0.5", "power:-1", "power:-0.5")
    for spec in BASES:
        b = parse_basis(spec)
        rng = np.random.default_rng(6)
        vals = rng.standard_normal((100, b.size)) + 1j * rng.standard_normal((100, b.size))
        naive = vals @ np.conj(character_table(b)).T / b.size
        worst_fast = max(worst_fast, float(np.max(np.abs(fast_forward_rows(vals, b) - naive))))
        ns = sorted({1, 2, 3, b.scales[2] - 1, b.scales[2], b.scales[2] + 1,
                     int(rng.integers(1, b.size)), b.size - 1, b.size})
        for i in range(3):
            f = CylinderFunction(vals[i], b)
            for n in [0] + ns:
                d = partial_sum(f, n).values - convolve(f, dirichlet_kernel(n, b)).values
                worst_sd = max(worst_sd, float(np.max(np.abs(d))))
            for spec_w in weights:
                w = build_weights(spec_w, b.size + 1)
                for n in ns:
                    direct = norlund_mean(f, w, n).values
                    for other in (abel_norlund_mean(f, w, n), norlund_mean_convolution(f, w, n)):
                        worst_nor = max(worst_nor, float(np.max(np.abs(direct - other.values))))
    ok = max(worst_fast, worst_sd, worst_nor) < IDENTITY_TOL
    return _record(6, ok, f"fast vs naive {worst_fast:.3g} (100 functions/basis); "
                          f"S_n f vs D_n*f {worst_sd:.3g}; Norlund direct/Abel/convolution "
                          f"{worst_nor:.3g}")


def _bound_sweep(theorem: str, weight_specs, k: int, label: str) -> bool:
    total = failed = 0
    worst = 0.0
    for spec in BASES:
        b, entries, profiles = _corpus(spec)
        ns = list(range(b.scales[2], b.size + 1))
        for w_spec in weight_specs:
            w = None if w_spec is None else build_weights(w_spec, b.size + 1)
            for e, prof in zip(entries, profiles):
                for r in sweep(e.function, theorem, PS, ns, w, prof, e.label):
                    total += 1
                    failed += not r.passed
                    worst = max(worst, r.ratio)
    return _record(k, failed == 0 and total > 0,
                   f"{label}: {total - failed}/{total} rows pass, max ratio {worst:.4g}")


def criterion_7() -> bool:
    return _bound_sweep("fejer", [None], 7,
                        f"Fejer estimate, explicit R^2, {CORPUS_SIZE} functions x 3 bases")


def criterion_8() -> bool:
    return _bound_sweep("1", ["constant", "power:1", "log"], 8,
                        "bound 1, explicit 3R^3/2R^3, {constant, power:1, log}")


def _custom(length):
    return [1 + 1 / (k + 1) for k in range(length)]


def criterion_9() -> bool:
    plans = {
        "2": ["constant", "geom:0.5", "power:-1", "power:-0.5", "custom"],
        "3": ["constant", "custom"],
    }
    ok = True
    parts = []
    for theorem, specs in plans.items():
        cmax, rows, growth, caps = 0.0, 0, True, []
        for spec in BASES:
            b, entries, profiles = _corpus(spec)
            basis_max = 0.0
            grid = list(b.scales[2:])
            per_n: dict[int, float] = {}
            for w_spec in specs:
                w = build_weights(_custom(b.size + 1) if w_spec == "custom" else w_spec, b.size + 1)
                ns = grid if theorem == "2" else list(range(b.scales[2], b.size + 1))
                for e, prof in zip(entries, profiles):
                    for r in sweep(e.function, theorem, PS, ns, w, prof, e.label):
                        rows += 1
                        basis_max = max(basis_max, r.ratio)
                        ok &= r.passed
                        if r.n in grid:
                            per_n[r.n] = max(per_n.get(r.n, 0.0), r.ratio)
            g = growth_ok(list(per_n), list(per_n.values()))
            growth &= g
            caps.append(c_cap(b))
            cmax = max(cmax, basis_max)
            ok &= basis_max <= c_cap(b) and g
        parts.append(f"bound {theorem}: {rows} rows, max C {cmax:.4g} "
                     f"(caps {'/'.join(f'{c:g}' for c in caps)}), "
                     f"growth {'ok' if growth else 'FAILS'}")
    return _record(9, ok, "; ".join(parts))


def criterion_10() -> bool:
    t0 = time.perf_counter()
    b = parse_basis("dyadic:12")
    ok = True
    parts = []
    for w_spec in ("constant", "power:1"):
        w = build_weights(w_spec, b.size + 1)
        for alpha in (0.5, 1.0, 2.0):
            f = lip_generator(LipSpec(alpha), b).function
            for p in (1.0, 2.0):
                r = rate_table(f, alpha, None if w.is_fejer else w, p)
                if alpha == 0.5:
                    good = -0.65 <= r.slope <= -0.35
                elif alpha == 2.0:
                    good = -1.25 <= r.slope <= -0.75
                else:
                    lo, hi = r.log_ratio_range
                    good = lo >= 1 / 8 and hi <= 8
                ok &= good
                if p == 2.0:
                    tag = (f"slope {r.slope:.3f}" if alpha != 1.0
                           else f"err/(log n/n) in [{r.log_ratio_range[0]:.3g}, "
                                f"{r.log_ratio_range[1]:.3g}]")
                    parts.append(f"{w_spec} a={alpha:g} {tag}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    return _record(10, ok, "; ".join(parts) + f"; {elapsed:.1f} s")


def criterion_11() -> bool:
    total = failed = 0
    example = ""
    for spec in BASES:
        _, entries, _ = _corpus(spec)
        for e in entries:
            if e.function.is_constant():
                continue
            for p in PS:
                r = constant_rigidity_check(e.function, p)
                total += 1
                if not r.passed:
                    failed += 1
                    if not example:
                        example = (f"e.g. {spec}/{e.label} p={p:g}: min {min(r.values):.3g} "
                                   f"<= floor {r.floor:.3g}")
    detail = f"M_n ||sigma_(M_n) f - f||_p above floor: {total - failed}/{total}"
    if example:
        detail += f"; {example}"
    return _record(11, failed == 0, detail)


def criterion_12(tmp: Path | None = None) -> bool:
    import tempfile

    base = Path(tmp or tempfile.mkdtemp())
    configs = [
        ["bounds", "--basis", "mixed:2,3,2,3,2", "--functions", "8", "--seed", "7",
         "--p", "1,2,4", "--jobs", "4"],
        ["rates", "--basis", "dyadic:9", "--seed", "7"],
    ]
    same = True
    names = []
    for i, cfg in enumerate(configs):
        outs = []
        for run in ("a", "b"):
            out = base / f"{i}{run}"
            subprocess.run([sys.executable, "-m", "vilenkin.cli", *cfg, "--out", str(out)],
                           capture_output=True, check=False)
            outs.append(out)
        for csv_file in sorted(outs[0].glob("*.csv")):
            names.append(csv_file.name)
            other = outs[1] / csv_file.name
            same &= other.exists() and csv_file.read_bytes() == other.read_bytes()
    same &= set(names) == {"bounds.csv", "rates.csv"}
    return _record(12, same, f"byte-identical {', '.join(sorted(names))} across two runs")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, tmp_path):
    fn = CRITERIA[k - 1]
    ok = fn(tmp_path) if k == 12 else fn()
    assert ok, RESULTS[k][1]


def main() -> int:
    ok = True
    for fn in CRITERIA:
        ok &= fn()
    passed = sum(p for p, _ in RESULTS.values())
    print(f"{passed}/{len(RESULTS)} criteria pass")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
