"""Approximate reflection about an unknown state from finitely many copies."""

import numpy as np
import pytest

from qcommit import DensityMatrix, RegisterLayout, StateVector
from qcommit.reflection import (
    ReflectionResources,
    approx_reflect,
    pretrace_overlap,
    reflect_exact,
    reflection_error_sweep,
)


def state(width, vec, name="P"):
    vec = np.asarray(vec, dtype=np.complex128)
    return StateVector(RegisterLayout([(name, width)]), vec / np.linalg.norm(vec))


def random_state(rng, width, name="P"):
    d = 1 << width
    raw = rng.normal(size=d) + 1j * rng.normal(size=d)
    return state(width, raw, name)


def probe_state(rng, width):
    layout = RegisterLayout([("X0", width), ("REF", width)])
    raw = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return StateVector(layout, raw / np.linalg.norm(raw))


def brute_force_channel(psi_vec, n, probe):
    """Literal circuit: n copies, an (n+1)-dim control, swaps, phase flip."""
    d = len(psi_vec)
    arr = np.moveaxis(probe._as_axes(), 0, 0)  # (X0, REF)
    ref_dim = arr.shape[1]
    copies = np.array([1.0], dtype=np.complex128)
    for _ in range(n):
        copies = np.kron(copies, psi_vec)
    # state[x0, copies, control, ref]
    full = np.einsum("xr,c->xcr", arr, copies)[:, :, None, :]
    full = np.repeat(full, n + 1, axis=2) / np.sqrt(n + 1)

    def swap_step(t):
        out = t.copy()
        shape = (d,) + (d,) * n + (n + 1, ref_dim)
        out = out.reshape(shape)
        for j in range(1, n + 1):
            sl = out[..., j, :]
            out[..., j, :] = np.swapaxes(sl, 0, j)
        return out.reshape(d, d**n, n + 1, ref_dim)

    full = swap_step(full)
    full = full - 2.0 * full.mean(axis=2, keepdims=True)
    full = swap_step(full)
    mat = np.moveaxis(full, [0, 3], [0, 1]).reshape(d * ref_dim, -1)
    return mat @ mat.conj().T


@pytest.mark.parametrize("width,n", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_reduced_simulator_matches_literal_circuit(width, n):
    rng = np.random.default_rng(width * 10 + n)
    psi = random_state(rng, width)
    res = ReflectionResources(psi, n)
    for _ in range(3):
        probe = probe_state(rng, width)
        expected = brute_force_channel(psi.amplitudes, n, probe)
        got = approx_reflect(res, probe, "X0").entries
        assert np.max(np.abs(got - expected)) < 1e-12


def test_exact_reflection_eigenvectors():
    rng = np.random.default_rng(0)
    psi = random_state(rng, 2)
    out = reflect_exact(psi, psi)
    assert np.allclose(out.amplitudes, -psi.amplitudes)
    # orthogonal states are fixed
    raw = rng.normal(size=4) + 1j * rng.normal(size=4)
    raw -= psi.amplitudes * np.vdot(psi.amplitudes, raw)
    phi = state(2, raw)
    assert np.allclose(reflect_exact(psi, phi).amplitudes, phi.amplitudes)


def test_exact_reflection_is_involution():
    rng = np.random.default_rng(1)
    psi = random_state(rng, 2)
    s = random_state(rng, 2)
    twice = reflect_exact(psi, reflect_exact(psi, s))
    assert np.max(np.abs(twice.amplitudes - s.amplitudes)) < 1e-12


def test_eigenaction_on_psi_is_exact():
    rng = np.random.default_rng(2)
    psi = random_state(rng, 1)
    for n in (0, 1, 7):
        res = ReflectionResources(psi, n)
        rho = approx_reflect(res, psi)
        expected = np.outer(psi.amplitudes, psi.amplitudes.conj())
        assert np.max(np.abs(rho.entries - expected)) < 1e-12
        ov = pretrace_overlap(res, psi)
        assert abs(ov - 1.0) < 1e-12  # -psi against -psi


def test_pretrace_overlap_orthogonal_input():
    rng = np.random.default_rng(3)
    psi = random_state(rng, 2)
    raw = rng.normal(size=4) + 1j * rng.normal(size=4)
    raw -= psi.amplitudes * np.vdot(psi.amplitudes, raw)
    phi = state(2, raw)
    for n in (0, 1, 3, 15):
        ov = pretrace_overlap(ReflectionResources(psi, n), phi)
        assert abs(ov - (1.0 - 2.0 / (n + 1))) < 1e-12


def test_error_sweep_bounds_and_monotonicity():
    rng = np.random.default_rng(4)
    psi = random_state(rng, 1)
    rows = reflection_error_sweep(psi, [0, 1, 3, 7, 15, 31, 63], 30, 5)
    observed = [row[1] for row in rows]
    for n, obs, bound in rows:
        assert abs(bound - (64.0 / (n + 1)) ** 0.25) < 1e-12
        assert obs <= bound + 1e-9
    # worst-case error over a fixed probe set decreases with more copies
    for a, b in zip(observed, observed[1:]):
        assert b <= a + 1e-9
    # n = 0 with an equal-superposition probe is maximally wrong
    assert abs(observed[0] - 1.0) < 1e-9
    # n = 63, d = 2: strictly below the tighter pre-trace figure
    assert observed[-1] <= np.sqrt(1.0 - (1.0 - 4.0 / 8.0) ** 2) + 1e-9


def test_resource_validation():
    rng = np.random.default_rng(6)
    psi = random_state(rng, 1)
    with pytest.raises(ValueError):
        ReflectionResources(psi, -1)
