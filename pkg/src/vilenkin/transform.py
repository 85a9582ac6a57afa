"""Vilenkin characters and the Vilenkin-Fourier transform.

Two routes are provided.  :func:`forward_transform_naive` and
:func:`inverse_transform` sum characters directly (``O(M_N^2)``) and serve
as the reference.  :func:`fast_forward_transform` and
:func:`fast_inverse_transform` factor the transform coordinate by
coordinate, a length-``m_k`` DFT along each digit axis, for
``O(M_N * sum m_k)`` work.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .group import Basis, BasisMismatchError, GroupPoint, expand_index

# elements per chunk of the naive character sums
_NAIVE_CHUNK = 1 << 21


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """Step function constant on the cosets of ``I_N``; ``values[i]`` is its value on coset ``i``."""

    values: np.ndarray
    basis: Basis

    def __post_init__(self):
        arr = _frozen(self.values)
        if arr.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} values, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cylinder function has non-finite entries")
        object.__setattr__(self, "values", arr)

    def _other(self, other):
        if isinstance(other, CylinderFunction):
            if other.basis != self.basis:
                raise BasisMismatchError("functions live on different bases")
            return other.values
        return other

    def __add__(self, other):
        return CylinderFunction(self.values + self._other(other), self.basis)

    __radd__ = __add__

    def __sub__(self, other):
        return CylinderFunction(self.values - self._other(other), self.basis)

    def __mul__(self, other):
        return CylinderFunction(self.values * self._other(other), self.basis)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return CylinderFunction(self.values / scalar, self.basis)

    def conj(self) -> "CylinderFunction":
        return CylinderFunction(np.conj(self.values), self.basis)

    def __call__(self, x: GroupPoint) -> complex:
        return complex(self.values[x.index])

    def integral(self) -> complex:
        return complex(self.values.mean())

    def is_constant(self, tol: float = 1e-8) -> bool:
        v = self.values
        return float(np.max(np.abs(v - v[0]))) <= tol


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Vilenkin-Fourier coefficients ``coeffs[k]`` for ``k < M_N``."""

    coeffs: np.ndarray
    basis: Basis

    def __post_init__(self):
        arr = _frozen(self.coeffs)
        if arr.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {arr.shape}")
        object.__setattr__(self, "coeffs", arr)


def rademacher(k: int, x: GroupPoint) -> complex:
    basis = x.basis
    if not 0 <= k < basis.N:
        raise IndexError(f"coordinate {k} outside [0, {basis.N})")
    return cmath.exp(2j * math.pi * x.digits[k] / basis.radices[k])


def _root_table(L: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(L) / L)


def _phase_weights(basis: Basis) -> np.ndarray:
    return np.asarray([basis.lcm // m for m in basis.radices], dtype=np.int64)


def vilenkin_psi(n: int, x: GroupPoint) -> complex:
    basis = x.basis
    digits = expand_index(n, basis).digits
    L = basis.lcm
    phase = sum(nk * xk * (L // m) for nk, xk, m in zip(digits, x.digits, basis.radices)) % L
    return cmath.exp(2j * math.pi * phase / L)


def character_rows(basis: Basis, ks) -> np.ndarray:
    """Rows ``psi_k(x)`` over all cosets ``x`` for the indices ``ks``."""
    ks = np.asarray(ks, dtype=np.int64)
    if ks.size and (ks.min() < 0 or ks.max() >= basis.size):
        raise IndexError("character index out of range")
    D = basis.digit_table
    phase = ((D[ks] * _phase_weights(basis)) @ D.T) % basis.lcm
    return _root_table(basis.lcm)[phase]


def character(n: int, basis: Basis) -> CylinderFunction:
    return CylinderFunction(character_rows(basis, [n])[0], basis)


def character_table(basis: Basis) -> np.ndarray:
    return character_rows(basis, np.arange(basis.size))


def _chunks(basis: Basis):
    step = max(1, _NAIVE_CHUNK // basis.size)
    for lo in range(0, basis.size, step):
        yield np.arange(lo, min(lo + step, basis.size))


def forward_transform_naive(f: CylinderFunction) -> Spectrum:
    basis = f.basis
    out = np.empty(basis.size, dtype=np.complex128)
    for ks in _chunks(basis):
        out[ks] = np.conj(character_rows(basis, ks)) @ f.values
    return Spectrum(out / basis.size, basis)


def inverse_transform(s: Spectrum) -> CylinderFunction:
    """Synthesis ``f(x) = sum_k coeffs[k] psi_k(x)`` by direct summation."""
    basis = s.basis
    out = np.zeros(basis.size, dtype=np.complex128)
    for ks in _chunks(basis):
        out += s.coeffs[ks] @ character_rows(basis, ks)
    return CylinderFunction(out, basis)


def fast_forward_rows(values: np.ndarray, basis: Basis, backend=None) -> np.ndarray:
    """Batched forward transform; each row of ``values`` is one function."""
    out = _backend.mixed_radix_transform(values, basis.radices, -1, backend)
    return out / basis.size


def fast_inverse_rows(coeffs: np.ndarray, basis: Basis, backend=None) -> np.ndarray:
    return _backend.mixed_radix_transform(coeffs, basis.radices, +1, backend)


def fast_forward_transform(f: CylinderFunction, backend=None) -> Spectrum:
    return Spectrum(fast_forward_rows(f.values, f.basis, backend)[0], f.basis)


def fast_inverse_transform(s: Spectrum, backend=None) -> CylinderFunction:
    return CylinderFunction(fast_inverse_rows(s.coeffs, s.basis, backend)[0], s.basis)


def sup_relative_error(a, b) -> float:
    """``max|a-b| / max(max|b|, 1)``: relative for large data, absolute near zero."""
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(float(np.max(np.abs(b))) if b.size else 0.0, 1.0)
    return float(np.max(np.abs(a - b))) / scale


# CSV: columns index, re, im with 17 significant digits.

def to_csv(obj: CylinderFunction | Spectrum) -> str:
    data = obj.values if isinstance(obj, CylinderFunction) else obj.coeffs
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im"])
    for i, z in enumerate(data):
        writer.writerow([i, f"{z.real:.17g}", f"{z.imag:.17g}"])
    return buf.getvalue()


def write_csv(obj: CylinderFunction | Spectrum, path) -> None:
    Path(path).write_text(to_csv(obj))


def _read_values(text: str) -> np.ndarray:
    rows = list(csv.DictReader(io.StringIO(text)))
    values = np.zeros(len(rows), dtype=np.complex128)
    for row in rows:
        values[int(row["index"])] = complex(float(row["re"]), float(row["im"]))
    return values


def read_function_csv(path, basis: Basis) -> CylinderFunction:
    return CylinderFunction(_read_values(Path(path).read_text()), basis)


def read_spectrum_csv(path, basis: Basis) -> Spectrum:
    return Spectrum(_read_values(Path(path).read_text()), basis)
