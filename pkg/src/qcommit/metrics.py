"""Distinguishability measures between density matrices.

All dimensions in this project stay small (<= 256 in the experiments), so
everything goes through explicit Hermitian eigendecompositions.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError
from .states import DensityMatrix


def _check_dims(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    _check_dims(rho, sigma)
    w, v = np.linalg.eigh(rho.entries)
    w = np.clip(w, 0.0, None)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    inner = sqrt_rho @ sigma.entries @ sqrt_rho
    eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    value = float(np.sum(np.sqrt(eigs)) ** 2)
    return min(max(value, 0.0), 1.0)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of rho - sigma."""
    _check_dims(rho, sigma)
    eigs = np.linalg.eigvalsh(rho.entries - sigma.entries)
    value = 0.5 * float(np.sum(np.abs(eigs)))
    return min(max(value, 0.0), 1.0)


def helstrom(rho0: DensityMatrix, rho1: DensityMatrix) -> tuple[float, np.ndarray]:
    """Optimal two-outcome discrimination of rho0 vs rho1 (uniform prior).

    Returns the success probability 1/2 + TD/2 and the projector onto the
    nonnegative eigenspace of rho0 - rho1 (outcome "guess rho0").
    """
    _check_dims(rho0, rho1)
    w, v = np.linalg.eigh(rho0.entries - rho1.entries)
    cols = v[:, w >= 0.0]
    projector = cols @ cols.conj().T
    advantage = 0.5 + 0.5 * trace_distance(rho0, rho1)
    return advantage, projector


def measurement_success(
    projector: np.ndarray, rho0: DensityMatrix, rho1: DensityMatrix
) -> float:
    """Success probability of the two-outcome measurement {P, I-P} at uniform prior."""
    p_correct0 = float(np.real(np.trace(projector @ rho0.entries)))
    p_correct1 = 1.0 - float(np.real(np.trace(projector @ rho1.entries)))
    return 0.5 * p_correct0 + 0.5 * p_correct1
