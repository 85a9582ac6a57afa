"""Command line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import _backend
from .approx import (
    LACUNARY,
    RADIAL,
    BoundReport,
    ConditionError,
    LipSpec,
    WeightClassError,
    _lip_values,
    build_corpus,
    c_cap,
    growth_ok,
    lip_generator,
    modulus_profiles,
    rate_table,
    require_theorem,
    sweep,
)
from .group import CapacityError, InvalidBasisError, parse_basis
from .identities import identity_suite
from .means import fejer_kernel_closed_form
from .transform import (
    CylinderFunction,
    character_rows,
    fast_forward_rows,
    fast_inverse_rows,
    forward_transform_naive,
    sup_relative_error,
    to_csv,
)
from .weights import InvalidWeightsError, build_weights

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OUT_ENV = "VILENKIN_OUT"
DEFAULT_WEIGHTS = ["constant", "power:1", "log", "geom:0.5"]
THEOREMS = ("fejer", "1", "2", "3")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or "vilenkin-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _finite(obj):
    """Replace non-finite floats by strings so the output stays valid JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _json(obj) -> str:
    return json.dumps(_finite(obj), indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _weights(args, basis):
    specs = args.weights or DEFAULT_WEIGHTS
    return [build_weights(spec, basis.size + 1) for spec in specs]


# kernels

def cmd_kernels(args) -> int:
    basis = parse_basis(args.basis)
    out = _out_dir(args)
    results = identity_suite(basis, args.tolerance)
    tables = out / "kernels"
    for s in range(basis.N + 1):
        Ms = basis.scales[s]
        coeffs = (np.arange(basis.size) < Ms).astype(float)
        D = CylinderFunction(fast_inverse_rows(coeffs, basis)[0], basis)
        write_atomic(tables / f"dirichlet_M{s}.csv", to_csv(D))
        write_atomic(tables / f"fejer_M{s}.csv", to_csv(fejer_kernel_closed_form(s, basis)))
    report = {
        "basis": basis.to_json(),
        "tolerance": args.tolerance,
        "identities": [r.to_json() for r in results],
    }
    write_atomic(out / "kernels.json", _json(report))
    ok = all(r.passed for r in results)
    write_atomic(out / "summary.json", _json({
        "command": "kernels",
        "basis": basis.to_json(),
        "passed": sum(r.passed for r in results),
        "failed": [r.identity for r in results if not r.passed],
    }))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.identity}: {r.max_residual:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


# bounds

def _theorems_for(w, requested: str) -> list[str]:
    if requested != "all":
        return [requested]
    out = []
    if w.monotone_class == "non_decreasing":
        out.append("1")
    if w.monotone_class == "non_increasing" or w.is_fejer:
        out += ["2", "3"]
    return out


def _corpus(args, basis):
    entries = []
    for i, a in enumerate(args.alpha):
        for kind in (LACUNARY, RADIAL):
            seed = args.seed * 1000 + 2 * i + (kind == RADIAL)
            vals = _lip_values(LipSpec(a, kind=kind), basis, seed)
            entries.append((f"{kind}:{a:g}", CylinderFunction(vals, basis), a))
    for e in build_corpus(basis, args.functions, args.seed):
        entries.append((e.label, e.function, e.alpha))
    return entries


def cmd_bounds(args) -> int:
    basis = parse_basis(args.basis)
    weights = _weights(args, basis)
    ps = args.p
    if any(not 1 <= p < math.inf for p in ps):
        raise UsageError("bounds need 1 <= p < inf")
    n_min = args.n_min if args.n_min is not None else basis.scales[min(2, basis.N)]
    n_max = args.n_max if args.n_max is not None else basis.size
    if not 1 <= n_min <= n_max <= basis.size:
        raise UsageError(f"need 1 <= n-min <= n-max <= {basis.size}")
    ns = list(range(n_min, n_max + 1))

    plan = []  # (theorem, weights or None)
    rejected = []
    if args.theorem in ("all", "fejer"):
        plan.append(("fejer", None))
    for w in weights:
        for th in _theorems_for(w, args.theorem):
            if th == "fejer":
                continue
            try:
                require_theorem(w, th, basis)
            except WeightClassError as exc:
                raise UsageError(str(exc)) from exc
            except ConditionError as exc:
                rejected.append(BoundReport(th, basis.spec_string(), w.name, math.nan, 0,
                                            math.nan, math.nan, passed=False, note=str(exc)))
                continue
            plan.append((th, w))

    corpus = _corpus(args, basis)

    def run(entry):
        label, f, alpha = entry
        profiles = modulus_profiles(f, ps)
        rows = []
        for th, w in plan:
            rows += sweep(f, th, ps, ns, w, profiles, label, alpha)
        return rows

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        per_function = list(pool.map(run, corpus))
    reports = [r for rows in per_function for r in rows] + rejected

    write_atomic(_out_dir(args) / "bounds.csv",
                 _csv(BoundReport.CSV_HEADER, [r.csv_row() for r in reports]))
    summary = _bounds_summary(reports, basis)
    summary.update({"command": "bounds", "basis": basis.to_json(), "p": ps,
                    "alpha": args.alpha, "n_range": [n_min, n_max],
                    "weights": [w.name for w in weights], "seed": args.seed})
    write_atomic(_out_dir(args) / "summary.json", _json(summary))
    ok = True
    for th, s in summary["suites"].items():
        good = s["failed"] == 0 and s.get("growth_ok", True)
        ok &= good
        print(f"{'PASS' if good else 'FAIL'} {th}: {s['passed']}/{s['rows']} rows, "
              f"max ratio/C {s['max_ratio']:.4g}, rejected {s['rejected']}")
    return EXIT_OK if ok else EXIT_FAIL


def _bounds_summary(reports, basis) -> dict:
    suites = {}
    scale_set = set(basis.scales)
    for th in THEOREMS:
        rows = [r for r in reports if r.theorem == th]
        if not rows:
            continue
        live = [r for r in rows if not r.note]
        s = {
            "rows": len(live),
            "passed": sum(r.passed for r in live),
            "failed": sum(not r.passed for r in live),
            "rejected": len(rows) - len(live),
            "rejections": sorted({f"{r.weights}: {r.note}" for r in rows if r.note}),
            "max_ratio": max((r.ratio for r in live), default=0.0),
        }
        if th in ("2", "3"):
            s["cap"] = c_cap(basis)
            groups = {}
            for r in live:
                if r.n in scale_set:
                    groups.setdefault((r.function, r.weights, r.p), []).append((r.n, r.ratio))
            s["growth_ok"] = all(growth_ok([n for n, _ in g], [c for _, c in g])
                                 for g in groups.values())
        suites[th] = s
    return {"suites": suites}


# rates

def cmd_rates(args) -> int:
    basis = parse_basis(args.basis)
    weights = _weights(args, basis)
    levels = list(range(1, basis.N + 1))
    if len(levels) < 3:
        raise UsageError("rate fits need at least 3 dyadic grid points (N >= 3)")
    rows, skipped, ok = [], [], True
    for w in weights:
        theorem = "1" if w.monotone_class == "non_decreasing" else "3"
        try:
            require_theorem(w, theorem, basis)
        except (WeightClassError, ConditionError) as exc:
            skipped.append(f"{w.name}: {exc}")
            continue
        for a in args.alpha:
            f = lip_generator(LipSpec(a, kind=LACUNARY), basis).function
            for p in args.p:
                r = rate_table(f, a, None if w.is_fejer else w, p, levels)
                ok &= r.consistent
                rows.append([basis.spec_string(), w.name, f"{a:.17g}", f"{p:.17g}", len(r.ns),
                             f"{r.slope:.17g}", r.classification, str(r.consistent).lower(),
                             f"{r.log_ratio_range[0]:.17g}", f"{r.log_ratio_range[1]:.17g}"])
                print(f"{'PASS' if r.consistent else 'FAIL'} {w.name} alpha={a:g} p={p:g}: "
                      f"slope {r.slope:.3f} ({r.classification})")
    header = ["basis", "weights", "alpha", "p", "n_points", "slope", "classification",
              "consistent", "log_ratio_min", "log_ratio_max"]
    out = _out_dir(args)
    write_atomic(out / "rates.csv", _csv(header, rows))
    write_atomic(out / "summary.json", _json({
        "command": "rates", "basis": basis.to_json(), "rows": len(rows),
        "consistent": sum(row[7] == "true" for row in rows), "skipped": skipped,
    }))
    return EXIT_OK if ok else EXIT_FAIL


# perf

def _timed(fn, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def cmd_perf(args) -> int:
    basis = parse_basis(args.basis)
    rng = np.random.default_rng(args.seed)
    values = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
    f = CylinderFunction(values, basis)
    report = {"basis": basis.to_json(), "size": basis.size, "backend": _backend.BACKEND,
              "timings_s": {}, "residuals": {}}
    backends = ["python"] + (["compiled"] if _backend.compiled_available() else [])
    fast = {}
    for be in backends:
        t, coeffs = _timed(lambda: fast_forward_rows(f.values, basis, be)[0], args.repeat)
        report["timings_s"][f"fast_{be}"] = t
        fast[be] = coeffs
    ref = fast[backends[-1]]
    if basis.size <= args.naive_cap:
        t, s = _timed(lambda: forward_transform_naive(f).coeffs, 1)
        report["timings_s"]["naive"] = t
        report["residuals"]["fast_vs_naive"] = sup_relative_error(ref, s)
    else:
        report["timings_s"]["naive"] = "skipped"
        ks = np.sort(rng.choice(basis.size, size=min(64, basis.size), replace=False))
        sample = np.conj(character_rows(basis, ks)) @ f.values / basis.size
        report["residuals"]["fast_vs_naive_sampled"] = sup_relative_error(ref[ks], sample)
    if len(backends) == 2:
        report["residuals"]["compiled_vs_python"] = sup_relative_error(fast["compiled"], fast["python"])
    back = fast_inverse_rows(ref, basis)[0]
    report["residuals"]["roundtrip"] = sup_relative_error(back, f.values)
    ok = all(v < args.tolerance for v in report["residuals"].values())
    report["pass"] = ok
    out = _out_dir(args)
    write_atomic(out / "perf.json", _json(report))
    write_atomic(out / "summary.json", _json({"command": "perf", "pass": ok,
                                              "basis": basis.to_json()}))
    for k, v in report["timings_s"].items():
        print(f"{k}: {v if isinstance(v, str) else f'{v:.4g} s'}")
    for k, v in report["residuals"].items():
        print(f"{'PASS' if v < args.tolerance else 'FAIL'} {k}: {v:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--basis", default=None,
                        help="dyadic:N, triadic:N or mixed:m0,m1,... "
                             "(default dyadic:10; dyadic:12 for perf)")
    common.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-10)
    common.add_argument("--jobs", type=int, default=1)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--weights", action="append",
                      help="constant | power:<beta> | log | geom:<r> | file:<path> (repeatable)")
    grid.add_argument("--p", type=_floats, default=[1.0, 2.0])
    grid.add_argument("--alpha", type=_floats, default=[0.5, 1.0, 2.0])

    parser = argparse.ArgumentParser(prog="vilenkin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("kernels", parents=[common], help="kernel identity suite")
    b = sub.add_parser("bounds", parents=[common, grid], help="approximation bound sweeps")
    b.add_argument("--theorem", choices=("all",) + THEOREMS, default="all")
    b.add_argument("--n-min", type=int, default=None)
    b.add_argument("--n-max", type=int, default=None)
    b.add_argument("--functions", type=int, default=0,
                   help="extra seeded corpus functions beyond the Lip generators")
    sub.add_parser("rates", parents=[common, grid], help="convergence rate fits")
    pf = sub.add_parser("perf", parents=[common], help="transform benchmark")
    pf.add_argument("--naive-cap", type=int, default=4096)
    pf.add_argument("--repeat", type=int, default=3)
    return parser


COMMANDS = {"kernels": cmd_kernels, "bounds": cmd_bounds, "rates": cmd_rates, "perf": cmd_perf}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.basis is None:
        args.basis = "dyadic:12" if args.command == "perf" else "dyadic:10"
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidBasisError, CapacityError, InvalidWeightsError) as exc:
        print(f"vilenkin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
