"""Classical hiding attack and the shared-oracle equivocation attack."""

import numpy as np
import pytest

from qcommit import RegisterLayout, StateVector
from qcommit.attacks import (
    classical_hiding_attack,
    equivocation_attack,
    toy_classical_scheme,
)


# -- toy classical scheme -------------------------------------------------------


def test_toy_scheme_completeness():
    scheme = toy_classical_scheme(4, 0)
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = int(rng.integers(0, 1 << scheme.secret_bits))
        b = int(rng.integers(2))
        tau = scheme.commit_fn(s, b)
        assert scheme.reveal_fn(s, b, tau, scheme.sampler(rng))


def test_toy_scheme_double_openings_are_rare():
    scheme = toy_classical_scheme(8, 3)
    zero_images = {scheme.commit_fn(s, 0) for s in range(256)}
    double = sum(
        1 for s in range(256) if scheme.commit_fn(s, 1) in zero_images
    )
    assert double / 256 <= 2**-8


def test_attack_beats_the_toy_scheme():
    scheme = toy_classical_scheme(8, 0)
    report = classical_hiding_attack(scheme, trials=300, seed=0)
    assert report.advantage >= 0.45
    # honest secrets always witness themselves on the b=0 branch
    assert report.guess0_rate_b0 == 1.0
    sigma = np.sqrt(0.25 / (report.trials / 2))
    assert report.guess0_rate_b1 <= 0.5 + 3.0 * sigma


def test_attack_degenerate_shift_zero():
    # with z = 0 both branches commit identically, so the honest secret
    # witnesses an opening to 0 in every trial and the advantage vanishes
    scheme = toy_classical_scheme(8, 0, shift=0)
    report = classical_hiding_attack(scheme, trials=200, seed=5)
    assert report.guess0_rate_b0 == 1.0
    assert report.guess0_rate_b1 == 1.0
    assert report.advantage == 0.0


def test_attack_report_determinism():
    scheme = toy_classical_scheme(8, 0)
    a = classical_hiding_attack(scheme, trials=100, seed=9)
    b = classical_hiding_attack(scheme, trials=100, seed=9)
    assert a == b  # elapsed is excluded from comparison


def test_attack_search_cap():
    scheme = toy_classical_scheme(8, 0)
    with pytest.raises(ValueError):
        classical_hiding_attack(scheme, trials=1, seed=0, search_cap_bits=4)


# -- equivocation attack ---------------------------------------------------------


def test_equivocation_single_fold_closed_form():
    # one fold: the only degradation is the reference copy landing on the
    # committed preimage, so p1 = 1 - (1 - 1/M) / (2N)
    for n, m in ((1, 1), (2, 3), (3, 2)):
        big_n, big_m = 1 << n, 1 << m
        res = equivocation_attack(n, m, 1)
        assert res.p0 == 1.0
        expected = 1.0 - (1.0 - 1.0 / big_m) / (2.0 * big_n)
        assert abs(res.p1 - expected) < 1e-12
        assert res.abort_prob == 0.0


def test_equivocation_error_scales_inversely_with_n():
    errors = [1.0 - equivocation_attack(n, 3, 1).p1 for n in (2, 4, 6)]
    assert errors[0] > errors[1] > errors[2]
    for a, b in zip(errors, errors[1:]):
        assert abs(a / b - 4.0) < 1e-9  # N quadruples each step


def test_equivocation_abort_probability():
    res = equivocation_attack(2, 3, 2)
    assert abs(res.abort_prob - 0.25) < 1e-12  # 1 - (1 - 1/4)
    assert res.abort_prob <= 2 * 2 / 4 + 1e-9
    assert 0.0 < res.p1 <= 1.0
    assert 0.0 < res.p1_nonaborting <= res.p1 + 1e-12


def test_equivocation_enumeration_cap():
    with pytest.raises(ValueError):
        equivocation_attack(8, 2, 4)


def _bit(index, axis_count, axis):
    return (index >> (axis_count - 1 - axis)) & 1


def test_equivocation_matches_purified_oracle_simulation():
    # independent cross-check at n = m = 1, one fold: simulate the whole
    # interaction against a manually purified oracle (one register per
    # point), where "send the database value register" is literally
    # handing over the oracle register for the measured preimage.
    names = ["D", "C", "F0", "F1", "RX", "RY", "RA", "RB"]
    layout = RegisterLayout([(nm, 1) for nm in names])
    ax = {nm: i for i, nm in enumerate(names)}
    amps = np.zeros([2] * 8, dtype=np.complex128)
    for idx in np.ndindex(*[2] * 8):
        d, c, f0, f1, rx, ry, ra, rb = idx
        if c or ry or ra != rb:
            continue
        amps[idx] = (1 / np.sqrt(2)) * 0.5 * (1 / np.sqrt(2)) * (1 / np.sqrt(2))

    def query(arr, x_name, y_name):
        out = np.zeros_like(arr)
        for idx in np.ndindex(*[2] * 8):
            lst = list(idx)
            fx = idx[ax["F0"]] if idx[ax[x_name]] == 0 else idx[ax["F1"]]
            lst[ax[y_name]] ^= fx
            out[tuple(lst)] += arr[idx]
        return out

    amps = query(amps, "D", "C")      # committer's commit query
    amps = query(amps, "RX", "RY")    # receiver's reference copy
    assert abs(np.linalg.norm(amps) - 1.0) < 1e-12

    p1 = 0.0
    for x in (0, 1):
        post = amps.copy()
        other = 1 - x
        post[tuple(slice(None) if a != ax["D"] else other for a in range(8))] = 0.0
        prob = float(np.sum(np.abs(post) ** 2))
        # symmetrize (F_x, C) against the fresh EPR pair (RA, RB)
        fx = ax[f"F{x}"]
        swapped = np.swapaxes(np.swapaxes(post, fx, ax["RA"]), ax["C"], ax["RB"])
        sym = (post + swapped) / 2.0
        p1 += float(np.sum(np.abs(sym) ** 2))  # prob * conditional accept
    res = equivocation_attack(1, 1, 1)
    assert abs(p1 - res.p1) < 1e-12
