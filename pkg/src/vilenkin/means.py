"""Dirichlet, Fejer and Norlund kernels, partial sums and means.

Every mean has two independent routes (spectral multipliers vs. direct
convolution with the kernel, literal weighted sum vs. Abel-transformed sum),
which the tests and the identity suite compare.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .group import Basis, BasisMismatchError, order
from .transform import (
    CylinderFunction,
    Spectrum,
    character_rows,
    fast_forward_transform,
    fast_inverse_rows,
    inverse_transform,
)
from .weights import NorlundWeights

TOL = 1e-10


def _check_order(n: int, basis: Basis, lo: int = 1) -> None:
    if not lo <= n <= basis.size:
        raise ValueError(f"kernel order n={n} outside [{lo}, {basis.size}]")


def _synthesize(coeffs: np.ndarray, basis: Basis) -> CylinderFunction:
    return inverse_transform(Spectrum(coeffs, basis))


# multipliers: the Fourier coefficient of psi_j in each kernel

def dirichlet_multiplier(n: int, size: int) -> np.ndarray:
    return (np.arange(size) < n).astype(np.float64)


def fejer_multiplier(n: int, size: int) -> np.ndarray:
    j = np.arange(size)
    return np.where(j < n, (n - j) / n, 0.0)


def norlund_multiplier(w: NorlundWeights, n: int, size: int) -> np.ndarray:
    """Closed form ``Q_{n-j}/Q_n`` for ``j < n``."""
    if w.Q[n] <= 0:
        raise ValueError("Q_n must be positive")
    j = np.arange(size)
    return np.where(j < n, w.Q[np.clip(n - j, 0, n)] / w.Q[n], 0.0)


def _require_weights(w: NorlundWeights, n: int) -> None:
    if len(w) < n:
        raise ValueError(f"need at least {n} weights, have {len(w)}")
    if w.Q[n] <= 0:
        raise ValueError("Q_n must be positive")


# kernels

def dirichlet_kernel(n: int, basis: Basis) -> CylinderFunction:
    """``D_n``; ``D_0`` is the zero function."""
    _check_order(n, basis, lo=0)
    return _synthesize(dirichlet_multiplier(n, basis.size), basis)


def fejer_kernel(n: int, basis: Basis) -> CylinderFunction:
    _check_order(n, basis)
    return _synthesize(fejer_multiplier(n, basis.size), basis)


def norlund_kernel(w: NorlundWeights, n: int, basis: Basis) -> CylinderFunction:
    _check_order(n, basis)
    _require_weights(w, n)
    return _synthesize(norlund_multiplier(w, n, basis.size), basis)


def fejer_kernel_closed_form(n: int, basis: Basis) -> CylinderFunction:
    """``K_{M_n}`` evaluated piecewise from digits, without summing characters."""
    if not 0 <= n <= basis.N:
        raise ValueError(f"level n={n} outside [0, {basis.N}]")
    D = basis.digit_table
    Mn = basis.scales[n]
    out = np.zeros(basis.size, dtype=np.complex128)
    head = D[:, :n]
    in_In = ~head.any(axis=1)
    out[in_In] = (Mn + 1) / 2
    for t in range(n):
        # x in I_t \ I_{t+1} and x - x_t e_t in I_n: digit t is the only nonzero one below n
        mask = ~in_In & (head[:, t] != 0)
        mask &= ~np.delete(head, t, axis=1).any(axis=1)
        r = np.exp(2j * np.pi * D[mask, t] / basis.radices[t])
        out[mask] = basis.scales[t] / (1 - r)
    return CylinderFunction(out, basis)


# means

def _spectral(f: CylinderFunction, mult: np.ndarray) -> CylinderFunction:
    s = fast_forward_transform(f)
    return CylinderFunction(fast_inverse_rows(s.coeffs * mult, f.basis)[0], f.basis)


def partial_sum(f: CylinderFunction, n: int) -> CylinderFunction:
    """``S_n f``; ``S_0 f = 0``."""
    _check_order(n, f.basis, lo=0)
    return _spectral(f, dirichlet_multiplier(n, f.basis.size))


def fejer_mean(f: CylinderFunction, n: int) -> CylinderFunction:
    _check_order(n, f.basis)
    return _spectral(f, fejer_multiplier(n, f.basis.size))


def norlund_mean(f: CylinderFunction, w: NorlundWeights, n: int) -> CylinderFunction:
    """``(1/Q_n) sum_{k=1}^n q_{n-k} S_k f`` summed term by term."""
    _check_order(n, f.basis)
    _require_weights(w, n)
    size = f.basis.size
    mult = np.zeros(size)
    for k in range(1, n + 1):
        mult[:k] += w.q[n - k]
    return _spectral(f, mult / w.Q[n])


def abel_norlund_mean(f: CylinderFunction, w: NorlundWeights, n: int) -> CylinderFunction:
    """Norlund mean rebuilt from Fejer means after summation by parts."""
    _check_order(n, f.basis)
    _require_weights(w, n)
    size = f.basis.size
    q = w.q
    s = fast_forward_transform(f).coeffs
    acc = q[0] * n * fejer_multiplier(n, size)
    for j in range(1, n):
        dq = q[n - j] - q[n - j - 1]
        if dq:
            acc = acc + dq * j * fejer_multiplier(j, size)
    return CylinderFunction(fast_inverse_rows(s * acc / w.Q[n], f.basis)[0], f.basis)


def abel_partial_sum_identity(w: NorlundWeights, n: int) -> tuple[float, float]:
    """Both sides of ``Q_n = sum_{j=1}^{n-1} (q_{n-j}-q_{n-j-1}) j + q_0 n``."""
    q = w.q
    lhs = float(np.sum(q[:n]))
    j = np.arange(1, n)
    rhs = float(np.sum((q[n - j] - q[n - j - 1]) * j) + q[0] * n)
    return lhs, rhs


def convolve(f: CylinderFunction, g: CylinderFunction, backend=None) -> CylinderFunction:
    """``(f*g)(x) = (1/M_N) sum_t f(t) g(x - t)`` by direct summation."""
    if f.basis != g.basis:
        raise BasisMismatchError("cannot convolve functions on different bases")
    return CylinderFunction(
        _backend.convolve_direct(f.values, g.values, f.basis.radices, backend), f.basis
    )


def norlund_mean_convolution(f: CylinderFunction, w: NorlundWeights, n: int) -> CylinderFunction:
    return convolve(f, norlund_kernel(w, n, f.basis))


# identities

def dirichlet_complement_identity(n: int, j: int, basis: Basis) -> float:
    """Sup residual of ``D_{M_n-j} = D_{M_n} - psi_{M_n-1} conj(D_j)``."""
    if not 0 <= n <= basis.N:
        raise ValueError(f"level n={n} outside [0, {basis.N}]")
    Mn = basis.scales[n]
    if not 0 <= j < Mn:
        raise ValueError(f"j={j} outside [0, {Mn})")
    lhs = dirichlet_kernel(Mn - j, basis).values
    psi = character_rows(basis, [Mn - 1])[0]
    rhs = dirichlet_kernel(Mn, basis).values - psi * np.conj(dirichlet_kernel(j, basis).values)
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class DominationResult:
    ratio: float
    flagged: int

    @property
    def holds(self) -> bool:
        return self.ratio <= 1 + TOL and self.flagged == 0


def _domination(n: int, Kn: np.ndarray, K_scales: list[np.ndarray], basis: Basis) -> DominationResult:
    top = order(n, basis)
    den = 2 * sum(basis.scales[l] * np.abs(K_scales[l]) for l in range(top + 1))
    num = n * np.abs(Kn)
    pos = den > 0
    ratio = float(np.max(num[pos] / den[pos])) if pos.any() else 0.0
    flagged = int(np.count_nonzero(~pos & (num > TOL)))
    return DominationResult(ratio, flagged)


def kernel_domination_check(n: int, basis: Basis) -> DominationResult:
    """Pointwise test of ``n|K_n| <= 2 sum_{l<=|n|} M_l |K_{M_l}|``."""
    _check_order(n, basis)
    top = order(n, basis)
    K_scales = [fejer_kernel(basis.scales[l], basis).values for l in range(top + 1)]
    return _domination(n, fejer_kernel(n, basis).values, K_scales, basis)
