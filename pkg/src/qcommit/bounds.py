"""Closed-form security bounds and a numeric cross-check of their chaining.

All calculators return raw formula values, which may exceed 1 in small
parameter regimes; callers that want a probability should clamp
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundQuery:
    """Parameter bundle for the bound calculators."""

    S: int = 0
    T: int = 0
    T_samp: int = 0
    T_verify: int = 0
    P: int = 0
    N: int = 1
    M: int = 1
    gamma: Optional[float] = None

    def __post_init__(self):
        for name in ("S", "T", "T_samp", "T_verify", "P"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be >= 1")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")


def clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def bf_prg_security(P: float, T: float, N: float) -> float:
    """Distinguishing probability 1/2 + 4*sqrt(2)*sqrt((P + T^2)/N)."""
    return 0.5 + 4.0 * np.sqrt(2.0) * np.sqrt((P + T * T) / N)


def nonuniform_prg_bound(S: float, N: float) -> float:
    """Advice-bounded distinguishing advantage 12 * (S/N)^(1/3)."""
    if S < 1 or N < 1:
        raise ValueError("S and N must be >= 1")
    return 12.0 * (S / N) ** (1.0 / 3.0)


def stat_hiding_bound(P: float, N: float) -> float:
    """Hiding error with P aux copies: 8*sqrt(2)*sqrt(P/N).

    Defined so that the identity with the query-less distinguishing game is
    exact in floating point: 2 * (bf_prg_security(P, 0, N) - 1/2).
    """
    return 2.0 * (bf_prg_security(P, 0.0, N) - 0.5)


def binding_bound(N: float, M: float) -> float:
    """Worst-case binding fidelity min(1, N/M), attained by injective tables."""
    return min(1.0, N / M)


def _advantage(P: float, T: float, N: float, gamma: float) -> float:
    """Advantage form of the advice-transfer objective at a fixed gamma."""
    return 2.0 * (bf_prg_security(P / gamma, T, N) - 0.5) + 2.0 * gamma


def bf_transfer(
    S: float,
    T: float,
    T_samp: float,
    T_verify: float,
    N: float,
    gamma_grid: Optional[Sequence[float]] = None,
) -> tuple[float, float]:
    """Numeric minimum over gamma of the precomputation-transfer advantage.

    The advice of size S is traded for P = S * (T + T_verify + T_samp)
    precomputation queries at postselection cost gamma. Returns (minimum,
    argmin gamma); a single-element grid skips minimization entirely.
    """
    P = S * (T + T_verify + T_samp)
    if gamma_grid is None:
        gamma_grid = np.logspace(-6, 0, 10_000)
    gamma_grid = np.asarray(list(gamma_grid), dtype=np.float64)
    if gamma_grid.size == 0:
        raise ValueError("gamma grid must be nonempty")
    if np.any(gamma_grid <= 0):
        raise ValueError("gamma grid must be positive")
    values = np.array([_advantage(P, T, N, g) for g in gamma_grid])
    best = int(np.argmin(values))
    if gamma_grid.size == 1:
        return float(values[0]), float(gamma_grid[0])
    # golden-section refinement around the grid argmin
    lo = gamma_grid[max(best - 1, 0)]
    hi = gamma_grid[min(best + 1, gamma_grid.size - 1)]
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = _advantage(P, T, N, c), _advantage(P, T, N, d)
    while b - a > 1e-8:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _advantage(P, T, N, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _advantage(P, T, N, d)
    gamma_star = 0.5 * (a + b)
    return _advantage(P, T, N, gamma_star), float(gamma_star)
