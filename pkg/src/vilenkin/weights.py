"""Norlund weight sequences ``q_k``, their partial sums and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

NON_DECREASING = "non_decreasing"
NON_INCREASING = "non_increasing"
NEITHER = "neither"


class InvalidWeightsError(ValueError):
    pass


def classify(q: np.ndarray) -> str:
    """Monotonicity by scan; constant sequences count as non-decreasing."""
    d = np.diff(q)
    if np.all(d >= 0):
        return NON_DECREASING
    if np.all(d <= 0):
        return NON_INCREASING
    return NEITHER


@dataclass(frozen=True, eq=False)
class NorlundWeights:
    """Weights ``q_0..q_{L-1}`` with ``Q[n] = q_0 + ... + q_{n-1}`` (so ``Q[0] = 0``)."""

    q: np.ndarray
    name: str = "custom"
    monotone_class: str = field(init=False)
    Q: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        if q.ndim != 1 or q.size == 0:
            raise InvalidWeightsError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(q)):
            raise InvalidWeightsError("weights must be finite")
        if np.any(q < 0):
            raise InvalidWeightsError("weights must be non-negative")
        if q[0] <= 0:
            raise InvalidWeightsError("q_0 must be positive")
        q.setflags(write=False)
        Q = np.concatenate([[0.0], np.cumsum(q)])
        Q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "monotone_class", classify(q))

    def __len__(self):
        return self.q.size

    @property
    def is_fejer(self) -> bool:
        return bool(np.all(self.q == self.q[0]))

    @property
    def strictly_positive(self) -> bool:
        return bool(np.all(self.q > 0))

    def partial_sum(self, n: int) -> float:
        return float(self.Q[n])


def build_weights(spec: str | list, length: int) -> NorlundWeights:
    """Materialise ``length`` weights from a generator spec.

    ``spec`` is ``constant``, ``power:<beta>`` (``q_k=(k+1)^beta``), ``log``
    (``q_k=log(k+2)``), ``geom:<r>`` (``q_k=r^k``, ``0<r<1``),
    ``file:<path>`` (one decimal per line) or an explicit list.
    """
    k = np.arange(length, dtype=np.float64)
    if isinstance(spec, (list, tuple, np.ndarray)):
        q = np.asarray(spec, dtype=np.float64)
        if q.size < length:
            raise InvalidWeightsError(f"custom weights have {q.size} entries, need {length}")
        return NorlundWeights(q[:length], "custom")
    name, _, arg = spec.strip().partition(":")
    try:
        if name == "constant" and not arg:
            q = np.ones(length)
        elif name == "power":
            q = (k + 1.0) ** float(arg)
        elif name == "log" and not arg:
            q = np.log(k + 2.0)
        elif name == "geom":
            r = float(arg)
            if not 0 < r < 1:
                raise InvalidWeightsError(f"geometric ratio must lie in (0, 1), got {r}")
            q = r**k
        elif name == "file":
            lines = Path(arg).read_text().split()
            q = np.asarray([float(v) for v in lines], dtype=np.float64)
            if q.size < length:
                raise InvalidWeightsError(f"{arg}: {q.size} weights, need {length}")
            q = q[:length]
        else:
            raise InvalidWeightsError(f"unknown weight spec {spec!r}")
    except (ValueError, OSError) as exc:
        if isinstance(exc, InvalidWeightsError):
            raise
        raise InvalidWeightsError(f"cannot parse weight spec {spec!r}: {exc}") from exc
    return NorlundWeights(q, spec.strip())


def regularity_ratio(w: NorlundWeights, n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    return float(w.q[n - 1] / w.Q[n])


def cond_ratio(w: NorlundWeights, n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    return float(n / w.Q[n])


def moricz_siddiqi_quantity(w: NorlundWeights, n: int, gamma: float) -> float:
    if not 1 < gamma <= 2:
        raise ValueError(f"gamma must lie in (1, 2], got {gamma}")
    if n < 1:
        raise ValueError("n must be positive")
    return float(n ** (gamma - 1) / w.Q[n] ** gamma * np.sum(w.q[:n] ** gamma))


def _dyadic_grid(n_max: int) -> list[int]:
    grid = []
    n = 2
    while n <= n_max:
        grid.append(n)
        n *= 2
    return grid


@dataclass(frozen=True)
class RangeDiagnostic:
    holds: bool
    n_range: tuple[int, int]
    values: tuple[float, ...]


def check_regular(w: NorlundWeights, n_max: int | None = None) -> RangeDiagnostic:
    """Empirical regularity over ``n = 2, 4, ..., n_max``.

    Holds when ``q_{n-1}/Q_n`` is non-increasing along the grid's second
    half and ends below 0.1.
    """
    n_max = min(n_max or len(w), len(w))
    grid = _dyadic_grid(n_max) or [n_max]
    vals = [regularity_ratio(w, n) for n in grid]
    tail = vals[len(vals) // 2:]
    holds = all(b <= a * (1 + 1e-12) for a, b in zip(tail, tail[1:])) and vals[-1] < 0.1
    return RangeDiagnostic(holds, (grid[0], grid[-1]), tuple(vals))


def check_cond(w: NorlundWeights, n_max: int | None = None) -> RangeDiagnostic:
    """Empirical boundedness of ``n/Q_n`` over ``n = 2, 4, ..., n_max``.

    Holds when the second half of the grid never exceeds twice the maximum
    over the first half.
    """
    n_max = min(n_max or len(w), len(w))
    grid = _dyadic_grid(n_max) or [n_max]
    vals = [cond_ratio(w, n) for n in grid]
    half = max(1, len(vals) // 2)
    holds = max(vals[half:] or vals) <= 2 * max(vals[:half])
    return RangeDiagnostic(holds, (grid[0], grid[-1]), tuple(vals))
