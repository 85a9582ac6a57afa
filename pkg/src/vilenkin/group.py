"""Mixed-radix arithmetic on a finite-resolution bounded Vilenkin group.

A point of the group is a digit vector ``(x_0, ..., x_{N-1})`` with
``0 <= x_k < m_k``.  Cosets of ``I_N`` are labelled by the little-endian
mixed-radix integer ``sum x_k * M_k``.  Note that adding two points is
digit-wise modular addition; it is *not* integer addition on the labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# M_N must fit a signed 64-bit integer; tables indexed by cosets use int64.
MAX_SIZE = 2**62


class InvalidBasisError(ValueError):
    pass


class CapacityError(ValueError):
    pass


class BasisMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    """Radix sequence ``m_0..m_{N-1}`` with derived scales ``M_0..M_N``."""

    radices: tuple[int, ...]
    scales: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        radices = tuple(int(m) for m in self.radices)
        if not radices:
            raise InvalidBasisError("basis needs at least one radix")
        for k, m in enumerate(radices):
            if m < 2:
                raise InvalidBasisError(f"radix m_{k}={m} is smaller than 2")
        scales = [1]
        for m in radices:
            scales.append(scales[-1] * m)
            if scales[-1] > MAX_SIZE:
                raise CapacityError(f"group size exceeds {MAX_SIZE}")
        object.__setattr__(self, "radices", radices)
        object.__setattr__(self, "scales", tuple(scales))

    @property
    def N(self) -> int:
        return len(self.radices)

    @property
    def size(self) -> int:
        """M_N, the number of cosets of I_N."""
        return self.scales[-1]

    @property
    def r_sup(self) -> int:
        return max(self.radices)

    @cached_property
    def lcm(self) -> int:
        return math.lcm(*self.radices)

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``(M_N, N)`` array; row ``i`` holds the digits of coset ``i``."""
        idx = np.arange(self.size, dtype=np.int64)
        cols = [(idx // M) % m for m, M in zip(self.radices, self.scales)]
        return np.stack(cols, axis=1)

    @cached_property
    def scale_array(self) -> np.ndarray:
        return np.asarray(self.scales[:-1], dtype=np.int64)

    @cached_property
    def radix_array(self) -> np.ndarray:
        return np.asarray(self.radices, dtype=np.int64)

    def level(self, n: int) -> int:
        """Largest ``s <= N`` with ``M_s <= n`` (requires ``n >= 1``)."""
        if n < 1:
            raise ValueError("level is defined for n >= 1")
        s = 0
        while s < self.N and self.scales[s + 1] <= n:
            s += 1
        return s

    def point(self, digits: Sequence[int]) -> "GroupPoint":
        return GroupPoint(tuple(digits), self)

    def zero(self) -> "GroupPoint":
        return GroupPoint((0,) * self.N, self)

    def unit(self, t: int) -> "GroupPoint":
        """The point ``e_t``: digit 1 at coordinate ``t``, zero elsewhere."""
        digits = [0] * self.N
        digits[t] = 1
        return GroupPoint(tuple(digits), self)

    def points(self) -> Iterable["GroupPoint"]:
        for i in range(self.size):
            yield index_to_point(i, self)

    def to_json(self) -> dict:
        return {"radices": list(self.radices), "N": self.N}

    def spec_string(self) -> str:
        return "mixed:" + ",".join(str(m) for m in self.radices)


def build_basis(radices: Sequence[int], N: int | None = None) -> Basis:
    radices = list(radices)
    if N is None:
        N = len(radices)
    if N < 1:
        raise InvalidBasisError("N must be at least 1")
    if N > len(radices):
        raise InvalidBasisError(f"N={N} but only {len(radices)} radices given")
    return Basis(tuple(radices[:N]))


def parse_basis(spec: str) -> Basis:
    """Parse ``dyadic:N``, ``triadic:N``, ``mixed:2,3,2`` or a bare radix list."""
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    try:
        if name == "dyadic":
            return build_basis([2] * int(arg))
        if name == "triadic":
            return build_basis([3] * int(arg))
        if name == "mixed":
            return build_basis([int(v) for v in arg.split(",")])
        if not arg:
            return build_basis([int(v) for v in name.split(",")])
    except ValueError as exc:
        if isinstance(exc, (InvalidBasisError, CapacityError)):
            raise
        raise InvalidBasisError(f"cannot parse basis spec {spec!r}") from exc
    raise InvalidBasisError(f"unknown basis spec {spec!r}")


def basis_from_json(obj: dict | str) -> Basis:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return build_basis(obj["radices"], obj.get("N"))


@dataclass(frozen=True)
class GroupPoint:
    digits: tuple[int, ...]
    basis: Basis

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if len(digits) != self.basis.N:
            raise ValueError(f"expected {self.basis.N} digits, got {len(digits)}")
        for k, (d, m) in enumerate(zip(digits, self.basis.radices)):
            if not 0 <= d < m:
                raise ValueError(f"digit x_{k}={d} outside Z_{m}")
        object.__setattr__(self, "digits", digits)

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return group_add(self, other)

    def __neg__(self) -> "GroupPoint":
        return group_negate(self)

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return group_add(self, group_negate(other))

    @property
    def index(self) -> int:
        return point_to_index(self)

    def in_cylinder(self, s: int) -> bool:
        """Membership in ``I_s``: the first ``s`` digits vanish."""
        return all(d == 0 for d in self.digits[:s])


def _check_same(x: GroupPoint, y: GroupPoint) -> None:
    if x.basis != y.basis:
        raise BasisMismatchError("points live on different bases")


def group_add(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    _check_same(x, y)
    digits = tuple((a + b) % m for a, b, m in zip(x.digits, y.digits, x.basis.radices))
    return GroupPoint(digits, x.basis)


def group_negate(x: GroupPoint) -> GroupPoint:
    digits = tuple((m - a) % m for a, m in zip(x.digits, x.basis.radices))
    return GroupPoint(digits, x.basis)


def index_to_point(i: int, basis: Basis) -> GroupPoint:
    if not 0 <= i < basis.size:
        raise IndexError(f"coset index {i} outside [0, {basis.size})")
    digits = []
    for m in basis.radices:
        i, d = divmod(i, m)
        digits.append(d)
    return GroupPoint(tuple(digits), basis)


def point_to_index(x: GroupPoint) -> int:
    return sum(d * M for d, M in zip(x.digits, x.basis.scales))


@dataclass(frozen=True)
class IndexExpansion:
    value: int
    digits: tuple[int, ...]
    order: int


def expand_index(n: int, basis: Basis) -> IndexExpansion:
    """Mixed-radix digits of ``n`` and its order ``|n|`` (top nonzero digit)."""
    if n < 0 or n >= basis.size:
        raise IndexError(f"n={n} outside representable range [0, {basis.size})")
    digits = []
    rest = n
    for m in basis.radices:
        rest, d = divmod(rest, m)
        digits.append(d)
    nonzero = [j for j, d in enumerate(digits) if d]
    return IndexExpansion(n, tuple(digits), max(nonzero) if nonzero else 0)


def order(n: int, basis: Basis) -> int:
    """``|n|``; also defined for ``n = M_N`` (order ``N``)."""
    if n == basis.size:
        return basis.N
    return expand_index(n, basis).order


def shift_indices(basis: Basis, t: int | np.ndarray, sign: int = 1) -> np.ndarray:
    """Index of ``x + sign*t`` for every coset ``x`` (vectorised; ``t`` may be an array)."""
    D = basis.digit_table
    t = np.atleast_1d(np.asarray(t, dtype=np.int64))
    Dt = D[t]
    if sign < 0:
        Dt = (basis.radix_array - Dt) % basis.radix_array
    out = ((D[None, :, :] + Dt[:, None, :]) % basis.radix_array) @ basis.scale_array
    return out
