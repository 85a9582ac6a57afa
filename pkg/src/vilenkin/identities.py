"""Exhaustive check of the kernel identities on one basis.

Kernels are built by streaming over the character table, so memory stays
``O(N * M_N)`` while every ``D_n`` and ``K_n`` for ``n <= M_N`` is visited.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .group import Basis
from .means import TOL, _domination, fejer_kernel_closed_form
from .transform import character_rows

_BLOCK_ELEMS = 1 << 20


@dataclass
class IdentityResult:
    identity: str
    max_residual: float
    passed: bool
    checked: int
    detail: str = ""

    def __post_init__(self):
        self.max_residual = float(self.max_residual)
        self.passed = bool(self.passed)

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _rows(basis: Basis, indices):
    """Yield ``(k, psi_k)`` for the given character indices, computed in blocks."""
    indices = np.asarray(indices, dtype=np.int64)
    step = max(1, _BLOCK_ELEMS // basis.size)
    for lo in range(0, indices.size, step):
        ks = indices[lo:lo + step]
        block = character_rows(basis, ks)
        for k, row in zip(ks, block):
            yield int(k), row


def _cylinder_indicator(basis: Basis, s: int) -> np.ndarray:
    return (~basis.digit_table[:, :s].any(axis=1)).astype(np.float64)


def identity_suite(basis: Basis, tol: float = TOL) -> list[IdentityResult]:
    M = basis.size
    scales = basis.scales
    scale_level = {Ms: s for s, Ms in enumerate(scales)}

    res_23 = res_closed = res_int = 0.0
    max_abs_int = 0.0
    dom_ratio = 0.0
    dom_flagged = 0
    dom_worst_n = 0
    K_scales: list[np.ndarray] = []

    D = np.zeros(M, dtype=np.complex128)
    S = np.zeros(M, dtype=np.complex128)
    for k, psi in _rows(basis, np.arange(M)):
        n = k + 1
        D += psi
        S += D
        K = S / n
        if n in scale_level:
            s = scale_level[n]
            res_23 = max(res_23, float(np.max(np.abs(D - n * _cylinder_indicator(basis, s)))))
            closed = fejer_kernel_closed_form(s, basis).values
            res_closed = max(res_closed, float(np.max(np.abs(K - closed))))
            K_scales.append(K.copy())
        res_int = max(res_int, abs(K.mean() - 1))
        max_abs_int = max(max_abs_int, float(np.abs(K).mean()))
        dom = _domination(n, K, K_scales, basis)
        if dom.ratio > dom_ratio:
            dom_ratio, dom_worst_n = dom.ratio, n
        dom_flagged += dom.flagged

    res_24, checked_24 = _complement_identity(basis)

    levels = basis.N + 1
    return [
        IdentityResult("dirichlet_scale_indicator", res_23, res_23 < tol, levels,
                       "D_{M_n} = M_n * 1_{I_n} for n <= N"),
        IdentityResult("dirichlet_complement", res_24, res_24 < tol, checked_24,
                       "D_{M_n-j} = D_{M_n} - psi_{M_n-1} conj(D_j), all j < M_n"),
        IdentityResult("fejer_closed_form", res_closed, res_closed < tol, levels,
                       "K_{M_n} piecewise formula vs mean of Dirichlet kernels"),
        IdentityResult("fejer_integral", res_int, res_int < tol, M,
                       "integral of K_n equals 1 for n <= M_N"),
        IdentityResult("fejer_l1_bound", max_abs_int, max_abs_int <= 2 + tol, M,
                       "integral of |K_n| at most 2 for n <= M_N"),
        IdentityResult("fejer_domination", dom_ratio,
                       dom_ratio <= 1 + tol and dom_flagged == 0, M,
                       f"max of n|K_n| / (2 sum_l M_l |K_(M_l)|), worst at n={dom_worst_n}, "
                       f"flagged points={dom_flagged}"),
    ]


def _complement_identity(basis: Basis) -> tuple[float, int]:
    """Stream ``D_j`` forward and ``D_{M_n-j}`` backward for every level ``n``."""
    M = basis.size
    worst = 0.0
    checked = 0
    for n in range(basis.N + 1):
        Mn = basis.scales[n]
        psi_last = character_rows(basis, [Mn - 1])[0]
        D_Mn = np.zeros(M, dtype=np.complex128)
        for _, psi in _rows(basis, np.arange(Mn)):
            D_Mn += psi
        Dj = np.zeros(M, dtype=np.complex128)
        E = D_Mn.copy()  # D_{M_n - j}
        backward = _rows(basis, np.arange(Mn - 1, -1, -1))
        forward = _rows(basis, np.arange(Mn))
        for j in range(Mn):
            rhs = D_Mn - psi_last * np.conj(Dj)
            worst = max(worst, float(np.max(np.abs(E - rhs))))
            checked += 1
            _, psi_f = next(forward)
            _, psi_b = next(backward)
            Dj = Dj + psi_f
            E = E - psi_b
    return worst, checked
