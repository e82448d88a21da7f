"""Commit/reveal protocol, hiding and binding quantities, extraction."""

import numpy as np
import pytest

from qcommit import (
    CompressedOracleState,
    DensityMatrix,
    FunctionTable,
    RegisterLayout,
    SchemeParams,
    StateVector,
    epr_state,
    fidelity,
    magic_state,
    partial_trace,
    sample_function,
    tensor,
)
from qcommit import commitment
from qcommit.bounds import stat_hiding_bound
from qcommit.errors import ContractViolationError


def trusted(h):
    return commitment.TrustedAux(h)


def params_for(h, folds=1):
    return SchemeParams(1, h.n_bits, h.m_bits, folds)


# -- commit -------------------------------------------------------------------


def test_commit_zero_equals_anchored_pair_state():
    h = sample_function(1, 2, 0)
    _, _, s = commitment.commit(trusted(h), params_for(h), 0)
    assert np.allclose(s.amplitudes, magic_state(h, "D0", "C0").amplitudes)


def test_commit_one_equals_epr():
    h = sample_function(1, 2, 0)
    _, _, s = commitment.commit(trusted(h), params_for(h), 1)
    assert np.allclose(s.amplitudes, epr_state(2, "D0", "C0").amplitudes)


def test_commit_zero_two_folds_is_product():
    h = sample_function(1, 1, 1)
    _, _, s = commitment.commit(trusted(h), params_for(h, folds=2), 0)
    one = magic_state(h).amplitudes
    assert np.allclose(s.amplitudes, np.kron(one, one))


# -- completeness -------------------------------------------------------------


def modes_for(h, t):
    yield trusted(h)
    yield commitment.SenderPreprocessed(h)
    yield commitment.Ucrs(CompressedOracleState(h.n_bits, h.m_bits, t))


def test_completeness_small_grid_all_modes():
    for n, m in ((1, 1), (1, 2), (2, 2)):
        h = sample_function(n, m, n * 8 + m)
        params = params_for(h)
        for mode in modes_for(h, 2):
            for bit in (0, 1):
                c, d, s = commitment.commit(mode, params, bit)
                p = commitment.reveal(mode, params, s, c, d)
                assert abs(p - 1.0) < 1e-9, (n, m, type(mode).__name__, bit)


def test_completeness_two_folds():
    h = sample_function(2, 2, 5)
    params = params_for(h, folds=2)
    for mode in (trusted(h), commitment.SenderPreprocessed(h)):
        for bit in (0, 1):
            c, d, s = commitment.commit(mode, params, bit)
            assert abs(commitment.reveal(mode, params, s, c, d) - 1.0) < 1e-9


def test_identity_table_degeneracy():
    # with H = identity the two reference states coincide, so a 0-commit
    # passes the claimed-1 check (the widths also agree since n = m)
    h = FunctionTable.identity(2)
    params = params_for(h)
    c, d, s = commitment.commit(trusted(h), params, 0)
    p = commitment.accept_probability(trusted(h), params, s, c.c_regs, d.d_regs, 1)
    assert abs(p - 1.0) < 1e-9


def test_truncated_decommitment_is_rejected():
    h = sample_function(1, 2, 3)
    params = params_for(h)
    c, d, s = commitment.commit(trusted(h), params, 0)
    # claiming 1 with an n-bit decommitment register fails the width rule
    p = commitment.accept_probability(trusted(h), params, s, c.c_regs, d.d_regs, 1)
    assert p == 0.0
    decision = commitment.reveal(
        trusted(h), params, s, c, d, claimed_bit=1, analysis=False,
        rng=np.random.default_rng(0),
    )
    assert decision.value == commitment.REJECT


def test_sampled_reveal_accepts_honest_opening():
    h = sample_function(1, 1, 4)
    params = params_for(h)
    c, d, s = commitment.commit(trusted(h), params, 1)
    decision = commitment.reveal(
        trusted(h), params, s, c, d, analysis=False, rng=np.random.default_rng(1)
    )
    assert decision.value == 1


# -- shared-oracle mode conditioned on the table ------------------------------


def test_shared_oracle_commit_conditioned_on_table():
    # decompressing every point and projecting the database onto a full
    # explicit table must leave exactly that table's anchored-pair state
    n = m = 1
    oracle = CompressedOracleState(n, m, 2)
    mode = commitment.Ucrs(oracle)
    params = SchemeParams(1, n, m, 1)
    _, _, s = commitment.commit(mode, params, 0)
    for x in range(1 << n):
        s = oracle.std_decomp(s, x)
    for table in ((0, 0), (0, 1), (1, 0), (1, 1)):
        idx = oracle.encode_entries([(0, table[0]), (1, table[1])])
        prob, post = s.project([oracle.db_register], idx)
        assert abs(prob - 1.0 / 4.0) < 1e-12
        post = post.renormalized()
        reduced = partial_trace(post, ["D0", "C0"]).entries
        vec = magic_state(FunctionTable(n, m, table)).amplitudes
        assert np.max(np.abs(reduced - np.outer(vec, vec.conj()))) < 1e-9


# -- binding fidelity and hiding ------------------------------------------------


def test_binding_fidelity_examples():
    assert commitment.binding_fidelity(FunctionTable(1, 2, (0, 3))) == 0.5
    assert commitment.binding_fidelity(FunctionTable.constant(2, 2)) == 0.25
    assert commitment.binding_fidelity(FunctionTable.identity(2)) == 1.0


def test_binding_fidelity_matches_uhlmann():
    for seed in range(30):
        h = sample_function(2, 2, seed)
        params = params_for(h)
        rhos = []
        for bit in (0, 1):
            _, _, s = commitment.commit(trusted(h), params, bit)
            rhos.append(partial_trace(s, ["C0"]))
        assert abs(commitment.binding_fidelity(h) - fidelity(*rhos)) < 1e-9


def test_statistical_hiding_examples():
    assert commitment.statistical_hiding_advantage(FunctionTable(1, 2, (0, 3))) == 0.5
    assert commitment.statistical_hiding_advantage(FunctionTable.identity(2)) == 0.0
    assert commitment.statistical_hiding_advantage(FunctionTable.constant(1, 2)) == 0.75


def test_hiding_advantage_with_copies():
    # a single commitment register averaged over tables is maximally mixed
    assert commitment.hiding_advantage_with_copies(1, 2, 0) < 1e-12
    one = commitment.hiding_advantage_with_copies(1, 2, 1)
    two = commitment.hiding_advantage_with_copies(1, 2, 2)
    assert 0.0 < one <= two <= 1.0
    # the closed-form bound is vacuous at desk scale: it never binds here
    for copies in (1, 2):
        assert stat_hiding_bound(copies, 2) > 1.0


# -- sum binding ----------------------------------------------------------------


def overlap_pad_vs_epr(h):
    """<EPR | zero-padded anchored-pair state> for an n<m table."""
    big_n, big_m = h.domain_size, h.range_size
    return sum(1 for x in range(big_n) if h(x) == x) / np.sqrt(big_n * big_m)


def test_honest_zero_adversary_probabilities():
    for table in ((1, 2), (0, 1), (3, 0)):
        h = FunctionTable(1, 2, table)
        params = params_for(h)
        adv = commitment.honest_binding_adversary(trusted(h), params, 0)
        p0, p1 = commitment.sum_binding_experiment(adv, trusted(h), params)
        assert abs(p0 - 1.0) < 1e-9
        expected = (1.0 + overlap_pad_vs_epr(h) ** 2) / 2.0
        assert abs(p1 - expected) < 1e-9


def test_honest_one_adversary_probabilities():
    for table in ((1, 0), (0, 1), (1, 1)):
        h = FunctionTable(1, 1, table)
        params = params_for(h)
        adv = commitment.honest_binding_adversary(trusted(h), params, 1)
        p0, p1 = commitment.sum_binding_experiment(adv, trusted(h), params)
        assert abs(p1 - 1.0) < 1e-9
        ov = abs(np.vdot(magic_state(h).amplitudes, epr_state(1).amplitudes))
        assert abs(p0 - (1.0 + ov**2) / 2.0) < 1e-9


def test_sum_binding_parallel_repetition_product_law():
    h = FunctionTable(1, 2, (0, 1))
    single = commitment.sum_binding_experiment(
        commitment.honest_binding_adversary(trusted(h), params_for(h), 0),
        trusted(h),
        params_for(h),
    )
    double = commitment.sum_binding_experiment(
        commitment.honest_binding_adversary(trusted(h), params_for(h, 2), 0),
        trusted(h),
        params_for(h, 2),
    )
    assert abs(double[0] - single[0] ** 2) < 1e-9
    assert abs(double[1] - single[1] ** 2) < 1e-9


def test_sum_binding_bound_for_tested_adversaries():
    # p0 + p1 <= 1 + sqrt(F) for the evaluated honest strategies on
    # generic tables (it is not a universal SWAP-test bound; see the
    # identity-embedded table, which exceeds it)
    for seed in range(10):
        h = sample_function(2, 3, seed + 100)
        if all(h(x) == x for x in range(4)):
            continue
        params = params_for(h)
        bound = 1.0 + np.sqrt(commitment.binding_fidelity(h))
        for bit in (0, 1):
            adv = commitment.honest_binding_adversary(trusted(h), params, bit)
            p0, p1 = commitment.sum_binding_experiment(adv, trusted(h), params)
            assert p0 + p1 <= bound + 1e-6


def test_reveal_unitary_must_not_touch_commitment():
    h = FunctionTable(1, 2, (0, 1))
    params = params_for(h)
    adv = commitment.honest_binding_adversary(trusted(h), params, 0)
    bad = commitment.BindingAdversary(
        state=adv.state,
        c_regs=adv.c_regs,
        d_regs_0=adv.d_regs_0,
        d_regs_1=adv.d_regs_1,
        reveal_unitary_0=(np.eye(4, dtype=np.complex128), ("C0",)),
    )
    with pytest.raises(ContractViolationError):
        commitment.sum_binding_experiment(bad, trusted(h), params)


# -- extraction -----------------------------------------------------------------


def test_extraction_perfect_for_orthogonal_supports():
    h = FunctionTable(1, 3, (1, 6))
    params = SchemeParams(1, 1, 3, 1)
    for bit in (0, 1):
        committer = commitment.honest_extraction_committer(h, params, bit)
        td = commitment.extraction_experiment(committer, trusted(h), params)
        assert td <= 1e-9


def test_extraction_degenerate_identity_table():
    h = FunctionTable.identity(1)
    params = SchemeParams(1, 1, 1, 1)
    for make in (
        lambda: commitment.honest_extraction_committer(h, params, 0),
        lambda: commitment.superposed_extraction_committer(h, params),
    ):
        td = commitment.extraction_experiment(make(), trusted(h), params)
        assert 0.0 <= td <= 1.0


# -- witness game ----------------------------------------------------------------


def test_witness_game_constant_distinguisher():
    h = sample_function(2, 2, 0)
    trials = 4000
    freq = commitment.insecurity_witness_game(
        h, commitment.ConstantDistinguisher(0), trials, 1
    )
    sigma = np.sqrt(0.25 / trials)
    assert abs(freq - 0.5) <= 3.0 * sigma


def test_witness_game_constant_table():
    h = FunctionTable.constant(2, 2)
    trials = 10_000
    freq = commitment.insecurity_witness_game(
        h, commitment.EqualityDistinguisher(h(0)), trials, 2
    )
    exact = 7.0 / 8.0
    sigma = np.sqrt(exact * (1 - exact) / trials)
    assert abs(freq - exact) <= 3.0 * sigma


def test_witness_game_bijective_table_is_uninformative():
    h = FunctionTable.identity(2)
    trials = 10_000
    freq = commitment.insecurity_witness_game(
        h, commitment.EqualityDistinguisher(2), trials, 3
    )
    # both branches feed the uniform distribution, exact frequency 1/2
    sigma = np.sqrt(0.25 / trials)
    assert abs(freq - 0.5) <= 3.0 * sigma
