"""L^p norms, moduli of continuity, Lip-class generators and bound evaluators.

The modulus is taken over the Vilenkin metric: ``|t| < 1/M_s`` means
``t in I_s``.  For cylinder functions this is a finite maximum over the
``M_N / M_s`` translations whose first ``s`` digits vanish, i.e. the coset
labels that are multiples of ``M_s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .group import Basis, BasisMismatchError, GroupPoint, shift_indices
from .means import fejer_multiplier, norlund_multiplier
from .transform import CylinderFunction, character_rows, fast_forward_rows, fast_inverse_rows
from .weights import (
    NON_DECREASING,
    NON_INCREASING,
    NorlundWeights,
    check_cond,
    check_regular,
)

EXPLICIT_TOL = 1e-9
C_CAP_FACTOR = 32  # empirical constants of bounds 2 and 3 are capped at 32 R^3
# rows of mean multipliers inverse-transformed together
_BATCH_ELEMS = 1 << 21


class InapplicableError(ValueError):
    """The requested check does not apply to this input."""


class WeightClassError(InapplicableError):
    """Weights of the wrong monotonicity class were offered to a bound."""


class ConditionError(InapplicableError):
    """Weights fail a side condition (regularity, (Cond), positivity)."""


# norms and moduli

def _lp(values: np.ndarray, p: float, axis=-1):
    a = np.abs(values)
    if np.isinf(p):
        return a.max(axis=axis)
    return np.mean(a**p, axis=axis) ** (1.0 / p)


def lp_norm(f: CylinderFunction | np.ndarray, p: float) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    values = f.values if isinstance(f, CylinderFunction) else np.asarray(f)
    return float(_lp(values, p))


def translate(f: CylinderFunction, t: GroupPoint) -> CylinderFunction:
    """``g(x) = f(x + t)``."""
    if t.basis != f.basis:
        raise BasisMismatchError("translation lives on a different basis")
    idx = shift_indices(f.basis, t.index)[0]
    return CylinderFunction(f.values[idx], f.basis)


@dataclass(frozen=True, eq=False)
class ModulusProfile:
    """``omega[s] = omega_p(1/M_s, f)`` for ``s = 0..N``."""

    p: float
    omega: np.ndarray


def modulus_profiles(f: CylinderFunction, ps, backend=None) -> dict[float, ModulusProfile]:
    """Profiles for several exponents from one pass over all translations."""
    ps = [float(p) for p in ps]
    for p in ps:
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
    basis = f.basis
    norms = _backend.translation_norms(f.values, basis.radices, np.arange(basis.size), ps, backend)
    out = {}
    for j, p in enumerate(ps):
        omega = np.array([norms[::Ms, j].max() for Ms in basis.scales[:-1]] + [0.0])
        out[p] = ModulusProfile(p, omega)
    return out


def modulus_profile(f: CylinderFunction, p: float, backend=None) -> ModulusProfile:
    return modulus_profiles(f, [p], backend)[float(p)]


def modulus(f: CylinderFunction, p: float, s: int, backend=None) -> float:
    basis = f.basis
    if not 0 <= s <= basis.N:
        raise ValueError(f"s={s} outside [0, {basis.N}]")
    if s == basis.N:
        return 0.0
    ts = np.arange(0, basis.size, basis.scales[s])
    norms = _backend.translation_norms(f.values, basis.radices, ts, [float(p)], backend)
    return float(norms.max())


# Lip-class generators

LACUNARY = "lacunary"
RADIAL = "radial"


@dataclass(frozen=True)
class LipSpec:
    alpha: float
    p: float = 2.0
    kind: str = LACUNARY


@dataclass(frozen=True, eq=False)
class LipFunction:
    function: CylinderFunction
    spec: LipSpec
    profile: ModulusProfile
    c_low: float
    c_high: float

    @property
    def in_band(self) -> bool:
        """Measured ``c2/c1 <= 16`` for ``c1 M_s^-alpha <= omega_s <= c2 M_s^-alpha``."""
        return self.c_low > 0 and self.c_high / self.c_low <= 16


def radial_coordinate(basis: Basis) -> np.ndarray:
    """``rho(x) = sum_j x_j / M_{j+1}`` on every coset."""
    return basis.digit_table @ (1.0 / np.asarray(basis.scales[1:], dtype=np.float64))


def _lip_values(spec: LipSpec, basis: Basis, seed) -> np.ndarray:
    if spec.alpha <= 0:
        raise ValueError("alpha must be positive")
    rng = None if seed is None else np.random.default_rng(seed)
    if spec.kind == LACUNARY:
        N = basis.N
        phases = np.ones(N) if rng is None else np.exp(2j * np.pi * rng.random(N))
        rows = character_rows(basis, list(basis.scales[:-1]))
        amps = np.asarray(basis.scales[:-1], dtype=np.float64) ** -spec.alpha
        return np.real((amps * phases) @ rows)
    if spec.kind == RADIAL:
        rho = radial_coordinate(basis)
        if rng is not None:
            rho = rho[shift_indices(basis, int(rng.integers(basis.size)))[0]]
        return rho**spec.alpha
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def lip_generator(spec: LipSpec, basis: Basis, seed=None) -> LipFunction:
    """Lacunary ``Re sum_s M_s^-alpha c_s psi_{M_s}`` or radial ``rho(x + t0)^alpha``.

    Without a seed the phases ``c_s`` are 1 and ``t0 = 0``.  The modulus
    profile at ``spec.p`` is measured and attached.
    """
    f = CylinderFunction(_lip_values(spec, basis, seed), basis)
    prof = modulus_profile(f, spec.p)
    N = basis.N
    scaled = prof.omega[:N] * np.asarray(basis.scales[:N], dtype=np.float64) ** spec.alpha
    return LipFunction(f, spec, prof, float(scaled.min()), float(scaled.max()))


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    label: str
    function: CylinderFunction
    alpha: float | None = None


def build_corpus(basis: Basis, count: int, seed: int = 0) -> list[CorpusEntry]:
    """Seeded mix of lacunary, radial, coarse-cylinder and noise functions."""
    rng = np.random.default_rng(seed)
    lac_alphas = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0)
    rad_alphas = (0.25, 0.5, 0.75, 1.0)
    out = []
    for i in range(count):
        kind = i % 5
        sub = int(rng.integers(2**31))
        if kind == 0:
            a = lac_alphas[(i // 5) % len(lac_alphas)]
            f = CylinderFunction(_lip_values(LipSpec(a, kind=LACUNARY), basis, sub), basis)
            out.append(CorpusEntry(f"lacunary{i}", f, a))
        elif kind == 1:
            a = rad_alphas[(i // 5) % len(rad_alphas)]
            f = CylinderFunction(_lip_values(LipSpec(a, kind=RADIAL), basis, sub), basis)
            out.append(CorpusEntry(f"radial{i}", f, a))
        elif kind == 2:
            lev = int(rng.integers(1, basis.N)) if basis.N > 1 else 1
            coarse = rng.standard_normal(basis.scales[lev])
            vals = coarse[np.arange(basis.size) % basis.scales[lev]]
            out.append(CorpusEntry(f"cylinder{i}", CylinderFunction(vals, basis)))
        elif kind == 3:
            vals = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
            out.append(CorpusEntry(f"noise{i}", CylinderFunction(vals, basis)))
        else:
            a = lac_alphas[(i // 5) % len(lac_alphas)]
            vals = _lip_values(LipSpec(a, kind=LACUNARY), basis, sub)
            vals = vals + 0.05 * rng.standard_normal(basis.size)
            out.append(CorpusEntry(f"mixed{i}", CylinderFunction(vals, basis)))
    return out


# approximation errors

def mean_errors(f: CylinderFunction, multipliers: np.ndarray, ps) -> np.ndarray:
    """``||T f - f||_p`` for each row of spectral multipliers ``T``.

    Returns an array of shape ``(rows, len(ps))``.
    """
    basis = f.basis
    multipliers = np.atleast_2d(multipliers)
    out = np.empty((multipliers.shape[0], len(ps)))
    if np.all(f.values == f.values[0]):
        # only the zeroth coefficient is present; avoid transform round-off
        out[:] = (np.abs(1 - multipliers[:, 0]) * abs(f.values[0]))[:, None]
        return out
    fh = fast_forward_rows(f.values, basis)[0]
    step = max(1, _BATCH_ELEMS // basis.size)
    for lo in range(0, multipliers.shape[0], step):
        block = fast_inverse_rows(multipliers[lo:lo + step] * fh, basis) - f.values
        for j, p in enumerate(ps):
            out[lo:lo + step, j] = _lp(block, p, axis=1)
    return out


def fejer_multipliers(ns, size: int) -> np.ndarray:
    return np.stack([fejer_multiplier(n, size) for n in ns])


def norlund_multipliers(w: NorlundWeights, ns, size: int) -> np.ndarray:
    return np.stack([norlund_multiplier(w, n, size) for n in ns])


# bound evaluators

@dataclass
class BoundReport:
    theorem: str
    basis: str
    weights: str
    p: float
    n: int
    lhs: float
    rhs: float
    term2: float = math.nan
    ratio: float = math.nan
    passed: bool = True
    alpha: float | None = None
    function: str = ""
    note: str = ""

    CSV_HEADER = ("theorem", "basis", "weights", "p", "alpha", "n", "lhs",
                  "rhs_or_term1", "term2", "ratio_or_C", "pass", "function")

    def csv_row(self) -> list[str]:
        def num(v):
            if v is None or (isinstance(v, float) and math.isnan(v)):
                return ""
            return f"{v:.17g}"

        status = "rejected: " + self.note if self.note else str(self.passed).lower()
        return [self.theorem, self.basis, self.weights, num(self.p), num(self.alpha),
                str(self.n), num(self.lhs), num(self.rhs), num(self.term2),
                num(self.ratio), status, self.function]


def _safe_ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    return 0.0 if num <= 0 else math.inf


def _scales_f(basis: Basis) -> np.ndarray:
    return np.asarray(basis.scales, dtype=np.float64)


def fejer_rhs(omega: np.ndarray, basis: Basis, level: int) -> float:
    M = _scales_f(basis)
    R = basis.r_sup
    return float(R**2 * np.sum(M[: level + 1] / M[level] * omega[: level + 1]))


def thm1_rhs(omega, basis: Basis, w: NorlundWeights, n: int, level: int) -> float:
    M = _scales_f(basis)
    R = basis.r_sup
    i = np.arange(level)
    q_shift = w.q[n - np.asarray(basis.scales[:level], dtype=np.int64)]
    head = 3 * R**3 / w.Q[n] * np.sum(M[i] * q_shift * omega[i])
    return float(head + 2 * R**3 * omega[level])


def thm2_terms(omega, basis: Basis, w: NorlundWeights, level: int) -> tuple[float, float]:
    M = _scales_f(basis)
    R = basis.r_sup
    L = level
    term1 = 3 * R**2 * np.sum(M[: L + 1] / M[L] * omega[: L + 1])
    s = np.arange(L)
    qs = w.q[np.asarray(basis.scales[:L], dtype=np.int64)]
    term2 = np.sum((L - s) * M[s] / M[L] * qs / w.q[basis.scales[L]] * omega[s])
    return float(term1), float(term2)


def thm3_sum(omega, basis: Basis, level: int) -> float:
    M = _scales_f(basis)
    return float(np.sum(M[: level + 1] / M[level] * omega[: level + 1]))


def c_cap(basis: Basis) -> float:
    return C_CAP_FACTOR * basis.r_sup**3


def _check_p(p: float) -> None:
    if not 1 <= p < math.inf:
        raise ValueError(f"bounds are evaluated for 1 <= p < inf, got {p}")


def _check_n(n: int, basis: Basis) -> None:
    if not 1 <= n <= basis.size:
        raise ValueError(f"n={n} outside [1, {basis.size}]")


def _profile(f, p, profile):
    return (profile or modulus_profile(f, p)).omega


def fejer_bound_report(f: CylinderFunction, p: float, n: int, profile=None) -> BoundReport:
    _check_p(p)
    _check_n(n, f.basis)
    omega = _profile(f, p, profile)
    lhs = float(mean_errors(f, fejer_multiplier(n, f.basis.size), [p])[0, 0])
    rhs = fejer_rhs(omega, f.basis, f.basis.level(n))
    ratio = _safe_ratio(lhs, rhs)
    return BoundReport("fejer", f.basis.spec_string(), "constant", p, n, lhs, rhs,
                       ratio=ratio, passed=ratio <= 1 + EXPLICIT_TOL)


def require_theorem(w: NorlundWeights, theorem: str, basis: Basis) -> None:
    """Raise unless ``w`` is admissible for ``theorem`` over the tested range."""
    cls = w.monotone_class
    if len(w) < basis.size:
        raise ConditionError(f"need {basis.size} weights, have {len(w)}")
    if theorem == "1":
        if cls != NON_DECREASING:
            raise WeightClassError(f"bound 1 needs non-decreasing weights; {w.name} is {cls}")
        reg = check_regular(w, basis.size)
        if not reg.holds:
            raise ConditionError(f"{w.name} is not regular over n in {list(reg.n_range)}")
    elif theorem in ("2", "3"):
        if cls != NON_INCREASING and not w.is_fejer:
            raise WeightClassError(f"bound {theorem} needs non-increasing weights; {w.name} is {cls}")
        if theorem == "2":
            needed = w.q[: min(len(w), basis.size + 1)]
            if np.any(needed <= 0):
                raise ConditionError(f"{w.name} has a zero weight; q_(M_s)/q_(M_n) undefined")
        else:
            cond = check_cond(w, basis.size)
            if not cond.holds:
                raise ConditionError(f"{w.name} fails (Cond) over n in {list(cond.n_range)}")
    elif theorem != "fejer":
        raise ValueError(f"unknown theorem {theorem!r}")


def thm1_bound_report(f: CylinderFunction, p: float, w: NorlundWeights, n: int,
                      profile=None) -> BoundReport:
    _check_p(p)
    _check_n(n, f.basis)
    require_theorem(w, "1", f.basis)
    omega = _profile(f, p, profile)
    lhs = float(mean_errors(f, norlund_multiplier(w, n, f.basis.size), [p])[0, 0])
    rhs = thm1_rhs(omega, f.basis, w, n, f.basis.level(n))
    ratio = _safe_ratio(lhs, rhs)
    return BoundReport("1", f.basis.spec_string(), w.name, p, n, lhs, rhs,
                       ratio=ratio, passed=ratio <= 1 + EXPLICIT_TOL)


def thm2_empirical_c(lhs: float, term1: float, term2: float) -> float:
    excess = max(0.0, lhs - term1)
    return _safe_ratio(excess, term2)


def thm2_bound_report(f: CylinderFunction, p: float, w: NorlundWeights, level: int,
                      profile=None) -> BoundReport:
    """Evaluated at ``n = M_level`` only; ``C`` is reported as measured."""
    _check_p(p)
    basis = f.basis
    if not 0 <= level <= basis.N:
        raise ValueError(f"level {level} outside [0, {basis.N}]")
    require_theorem(w, "2", basis)
    if len(w) <= basis.scales[level]:
        raise ConditionError(f"q_(M_{level}) not available in {w.name}")
    omega = _profile(f, p, profile)
    n = basis.scales[level]
    lhs = float(mean_errors(f, norlund_multiplier(w, n, basis.size), [p])[0, 0])
    term1, term2 = thm2_terms(omega, basis, w, level)
    C = thm2_empirical_c(lhs, term1, term2)
    return BoundReport("2", basis.spec_string(), w.name, p, n, lhs, term1, term2,
                       ratio=C, passed=C <= c_cap(basis))


def thm3_bound_report(f: CylinderFunction, p: float, w: NorlundWeights, n: int,
                      profile=None) -> BoundReport:
    _check_p(p)
    _check_n(n, f.basis)
    require_theorem(w, "3", f.basis)
    omega = _profile(f, p, profile)
    lhs = float(mean_errors(f, norlund_multiplier(w, n, f.basis.size), [p])[0, 0])
    s = thm3_sum(omega, f.basis, f.basis.level(n))
    C = _safe_ratio(lhs, s)
    return BoundReport("3", f.basis.spec_string(), w.name, p, n, lhs, s,
                       ratio=C, passed=C <= c_cap(f.basis))


def sweep(f: CylinderFunction, theorem: str, ps, ns, w: NorlundWeights | None = None,
          profiles=None, label: str = "", alpha=None) -> list[BoundReport]:
    """Vectorised equivalent of calling the ``*_bound_report`` functions on a grid.

    For bound 2 the grid is reduced to the scales ``M_s`` it contains.
    """
    basis = f.basis
    ps = [float(p) for p in ps]
    for p in ps:
        _check_p(p)
    if profiles is None:
        profiles = modulus_profiles(f, ps)
    if theorem == "fejer":
        wname = "constant"
        mult = fejer_multipliers(ns, basis.size)
    else:
        require_theorem(w, theorem, basis)
        wname = w.name
        if theorem == "2":
            scale_set = set(basis.scales)
            ns = [n for n in ns if n in scale_set and len(w) > n]
        mult = norlund_multipliers(w, ns, basis.size)
    ns = list(ns)
    if not ns:
        return []
    errs = mean_errors(f, mult, ps)
    cap = c_cap(basis)
    spec = basis.spec_string()
    reports = []
    for j, p in enumerate(ps):
        omega = profiles[p].omega
        for i, n in enumerate(ns):
            lhs = float(errs[i, j])
            L = basis.level(n)
            if theorem == "fejer":
                rhs = fejer_rhs(omega, basis, L)
                r = _safe_ratio(lhs, rhs)
                rep = BoundReport("fejer", spec, wname, p, n, lhs, rhs, ratio=r,
                                  passed=r <= 1 + EXPLICIT_TOL)
            elif theorem == "1":
                rhs = thm1_rhs(omega, basis, w, n, L)
                r = _safe_ratio(lhs, rhs)
                rep = BoundReport("1", spec, wname, p, n, lhs, rhs, ratio=r,
                                  passed=r <= 1 + EXPLICIT_TOL)
            elif theorem == "2":
                t1, t2 = thm2_terms(omega, basis, w, L)
                C = thm2_empirical_c(lhs, t1, t2)
                rep = BoundReport("2", spec, wname, p, n, lhs, t1, t2, ratio=C, passed=C <= cap)
            else:
                s = thm3_sum(omega, basis, L)
                C = _safe_ratio(lhs, s)
                rep = BoundReport("3", spec, wname, p, n, lhs, s, ratio=C, passed=C <= cap)
            rep.alpha = alpha
            rep.function = label
            reports.append(rep)
    return reports


def growth_ok(ns, values) -> bool:
    """Max over the last quarter of the dyadic subgrid is at most twice the first quarter's."""
    pairs = sorted(zip(ns, values))
    vals = [v for _, v in pairs]
    if len(vals) < 2:
        return True
    q = max(1, len(vals) // 4)
    return max(vals[-q:]) <= 2 * max(vals[:q])


# rates

SUBLINEAR = "sublinear"
LOG_LINEAR = "log-linear"
LINEAR = "linear"
DEGENERATE = "degenerate/exact"


@dataclass
class RateResult:
    alpha: float
    weights: str
    p: float
    ns: list[int]
    errors: list[float]
    slope: float
    classification: str
    consistent: bool
    log_ratio_range: tuple[float, float] = field(default=(math.nan, math.nan))


def rate_table(f: CylinderFunction, alpha: float, w: NorlundWeights | None, p: float,
               levels=None) -> RateResult:
    """Fit ``log ||t_n f - f||_p`` against ``log n`` on ``n = M_j``.

    The expected branch follows ``alpha``: below 1 the slope should be
    ``-alpha``, above 1 it should be ``-1`` and at 1 the errors should track
    ``log(n)/n``.
    """
    basis = f.basis
    if levels is None:
        levels = range(1, basis.N + 1)
    ns = [basis.scales[j] for j in levels]
    if len(ns) < 3:
        raise ValueError("rate fit needs at least 3 grid points")
    if w is None:
        mult = fejer_multipliers(ns, basis.size)
        wname = "constant"
    else:
        mult = norlund_multipliers(w, ns, basis.size)
        wname = w.name
    errs = mean_errors(f, mult, [p])[:, 0]
    if np.all(errs <= 1e-12):
        return RateResult(alpha, wname, p, ns, errs.tolist(), 0.0, DEGENERATE, True)
    x = np.log(np.asarray(ns, dtype=np.float64))
    slope = float(np.polyfit(x, np.log(errs), 1)[0])
    band = errs / (x / np.exp(x))
    band_range = (float(band.min()), float(band.max()))
    if alpha < 1:
        cls = SUBLINEAR
        ok = -alpha - 0.15 <= slope <= -alpha + 0.15
    elif alpha > 1:
        cls = LINEAR
        ok = -1.25 <= slope <= -0.75
    else:
        cls = LOG_LINEAR
        ok = band_range[0] >= 1 / 8 and band_range[1] <= 8
    return RateResult(alpha, wname, p, ns, errs.tolist(), slope, cls, bool(ok), band_range)


# rigidity

@dataclass
class RigidityResult:
    levels: list[int]
    values: list[float]
    floor: float
    passed: bool


def constant_rigidity_check(f: CylinderFunction, p: float, levels=None) -> RigidityResult:
    """``M_n ||sigma_{M_n} f - f||_p`` stays above half its tail value on the grid."""
    if f.is_constant():
        raise InapplicableError("rigidity check needs a non-constant function")
    basis = f.basis
    if levels is None:
        levels = list(range(1, basis.N + 1))
    levels = list(levels)
    if len(levels) < 2:
        raise ValueError("rigidity check needs at least 2 levels")
    ns = [basis.scales[s] for s in levels]
    errs = mean_errors(f, fejer_multipliers(ns, basis.size), [p])[:, 0]
    values = [float(n * e) for n, e in zip(ns, errs)]
    floor = 0.5 * min(values[-2:])
    return RigidityResult(levels, values, floor, min(values) > floor and floor > 0)
