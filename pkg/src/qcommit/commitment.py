"""Non-interactive commitment protocol built on magic/EPR states.

Committing to 0 sends the image half of a magic state |M> = N^{-1/2}
sum_x |x>|H(x)>; committing to 1 sends one half of a maximally entangled
pair. Reveal SWAP-tests the returned registers against a fresh reference
copy, one test per parallel fold, accepting only if every fold accepts.

Three setup modes fix where the reference copies come from: a trusted
dealer with an explicit table, a shared compressed-oracle database, or a
sender-published table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    ContractViolationError,
    DimensionMismatchError,
    LayoutError,
    StateError,
)
from .metrics import trace_distance
from .oracle import (
    CompressedOracleState,
    FunctionTable,
    SchemeParams,
    epr_state,
    magic_state,
)
from .states import DensityMatrix, RegisterLayout, StateVector, tensor

REJECT = "reject"


# -- setup modes -----------------------------------------------------------


@dataclass(frozen=True)
class TrustedAux:
    """A trusted dealer sampled H and distributes magic-state copies."""

    h: FunctionTable


@dataclass
class Ucrs:
    """All reference copies are minted by querying a shared compressed oracle."""

    oracle: CompressedOracleState


@dataclass(frozen=True)
class SenderPreprocessed:
    """The sender sampled H itself and published the table."""

    h: FunctionTable
    provenance: str = "sender"


SetupMode = Union[TrustedAux, Ucrs, SenderPreprocessed]


def _mode_table(mode: SetupMode) -> Optional[FunctionTable]:
    if isinstance(mode, (TrustedAux, SenderPreprocessed)):
        return mode.h
    return None


# -- protocol messages -------------------------------------------------------


@dataclass(frozen=True)
class Commitment:
    params: SchemeParams
    c_regs: tuple[str, ...]


@dataclass(frozen=True)
class Decommitment:
    bit: int
    d_regs: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class RevealDecision:
    value: Union[int, str]


# -- low-level register plumbing -----------------------------------------------


def _swap_regs(s: StateVector, regs_a: Sequence[str], regs_b: Sequence[str]) -> StateVector:
    """Exchange the contents of two equal-width register groups."""
    regs_a, regs_b = list(regs_a), list(regs_b)
    s.layout.check_names(regs_a + regs_b)
    wa = s.layout.total_width_of(regs_a)
    wb = s.layout.total_width_of(regs_b)
    if wa != wb:
        raise DimensionMismatchError(f"swap operand widths {wa} != {wb}")
    if set(regs_a) & set(regs_b):
        raise LayoutError("swap operands overlap")
    axes = [s.layout.axis_of(n) for n in regs_a + regs_b]
    arr = np.moveaxis(s._as_axes(), axes, range(len(axes)))
    moved_shape = arr.shape
    arr = arr.reshape(1 << wa, 1 << wb, -1).swapaxes(0, 1)
    arr = arr.reshape(moved_shape)
    arr = np.moveaxis(arr, range(len(axes)), axes)
    return StateVector(s.layout, arr.reshape(-1), subnormalized=s.subnormalized)


def _symmetrize(s: StateVector, regs_a: Sequence[str], regs_b: Sequence[str]) -> StateVector:
    """Project onto the symmetric subspace of (regs_a, regs_b) exchange.

    The squared norm lost here is exactly the SWAP-test rejection
    probability, so chaining symmetrizers across folds and taking the final
    squared norm gives the joint all-folds acceptance probability.
    """
    swapped = _swap_regs(s, regs_a, regs_b)
    return StateVector(
        s.layout, 0.5 * (s.amplitudes + swapped.amplitudes), subnormalized=True
    )


def _project_zero(s: StateVector, reg: str) -> StateVector:
    """Project a register onto |0...0>, keeping the subnormalized remainder."""
    if s.layout.width_of(reg) == 0:
        return s
    _, post = s.project([reg], 0)
    return post


# -- commit / reveal -------------------------------------------------------------


def commit(
    mode: SetupMode, params: SchemeParams, bit: int
) -> tuple[Commitment, Decommitment, StateVector]:
    """Prepare the joint post-commit state for an honest committer.

    Registers are named D{f} (the committer-held half) and C{f} (the sent
    commitment register) per fold. In the shared-oracle mode the database
    register rides along in the joint state.
    """
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    n, m = params.n_bits, params.m_bits
    state: Optional[StateVector] = None
    c_regs, d_regs = [], []
    for f in range(params.folds):
        d_name, c_name = f"D{f}", f"C{f}"
        c_regs.append(c_name)
        d_regs.append((d_name,))
        if bit == 1:
            fold = epr_state(m, a_name=d_name, b_name=c_name)
        elif _mode_table(mode) is not None:
            fold = magic_state(_mode_table(mode), x_name=d_name, y_name=c_name)
        else:
            # shared-oracle fold: query on a uniform preimage register
            layout = RegisterLayout([(d_name, n), (c_name, m)])
            amps = np.zeros(layout.dim, dtype=np.complex128)
            amps[np.arange(1 << n) << m] = 1.0 / np.sqrt(1 << n)
            fold = StateVector(layout, amps)
        state = fold if state is None else tensor(state, fold)
    if isinstance(mode, Ucrs):
        state = mode.oracle.attach(state)
        if bit == 0:
            for f in range(params.folds):
                state = mode.oracle.query(state, f"D{f}", f"C{f}")
    return (
        Commitment(params, tuple(c_regs)),
        Decommitment(bit, tuple(d_regs)),
        state,
    )


def accept_probability(
    mode: SetupMode,
    params: SchemeParams,
    state: StateVector,
    c_regs: Sequence[str],
    d_regs: Sequence[Sequence[str]],
    claimed_bit: int,
) -> float:
    """Exact probability that every fold's SWAP test accepts claimed_bit.

    Returns 0.0 on decommitment-width mismatch (the width rule rejects
    before any quantum test runs).
    """
    n, m = params.n_bits, params.m_bits
    if len(c_regs) != params.folds or len(d_regs) != params.folds:
        return 0.0
    want = n if claimed_bit == 0 else m
    for regs in d_regs:
        if state.layout.total_width_of(regs) != want:
            return 0.0
    s = state
    ref_regs = []
    for f in range(params.folds):
        if claimed_bit == 0:
            rx, ry = f"_RX{f}", f"_RY{f}"
            table = _mode_table(mode)
            if table is not None:
                s = tensor(s, magic_state(table, x_name=rx, y_name=ry))
            else:
                ref_layout = RegisterLayout([(rx, n), (ry, m)])
                amps = np.zeros(ref_layout.dim, dtype=np.complex128)
                amps[np.arange(1 << n) << m] = 1.0 / np.sqrt(1 << n)
                s = tensor(s, StateVector(ref_layout, amps))
                s = mode.oracle.query(s, rx, ry)
            ref_regs.append((rx, ry))
        else:
            ra, rb = f"_RA{f}", f"_RB{f}"
            s = tensor(s, epr_state(m, a_name=ra, b_name=rb))
            ref_regs.append((ra, rb))
    for f in range(params.folds):
        own = list(d_regs[f]) + [c_regs[f]]
        s = _symmetrize(s, own, list(ref_regs[f]))
    return float(s.norm() ** 2)


def reveal(
    mode: SetupMode,
    params: SchemeParams,
    state: StateVector,
    commitment: Commitment,
    decommitment: Decommitment,
    claimed_bit: Optional[int] = None,
    analysis: bool = True,
    rng: Optional[np.random.Generator] = None,
):
    """Receiver check: SWAP test per fold against a fresh reference copy.

    In analysis mode, returns the exact acceptance probability. Otherwise
    samples the Born-rule decision and returns a RevealDecision.
    """
    claimed = decommitment.bit if claimed_bit is None else claimed_bit
    p = accept_probability(
        mode, params, state, commitment.c_regs, decommitment.d_regs, claimed
    )
    if analysis:
        return p
    if rng is None:
        raise ValueError("sampled reveal needs an rng")
    return RevealDecision(claimed if rng.random() < p else REJECT)


# -- hiding / binding quantities --------------------------------------------------


def binding_fidelity(h: FunctionTable) -> float:
    """Fidelity between the two single-fold commitment-register states.

    Closed form (sum_y sqrt(Pr[H(x)=y]/M))^2 = (sum_y sqrt(count_y))^2/(N*M);
    always at most N/M, with equality exactly when H is injective.
    """
    counts = h.preimage_counts()
    total = float(np.sum(np.sqrt(counts.astype(np.float64))))
    return total**2 / (h.domain_size * h.range_size)


def statistical_hiding_advantage(h: FunctionTable, params: Optional[SchemeParams] = None) -> float:
    """Trace distance between the single-fold commitment-register states.

    Both states are diagonal: {|H^{-1}(y)|/N} for bit 0, uniform for bit 1.
    """
    p = h.preimage_counts().astype(np.float64) / h.domain_size
    return float(0.5 * np.sum(np.abs(p - 1.0 / h.range_size)))


def hiding_advantage_with_copies(n_bits: int, m_bits: int, copies: int) -> float:
    """Distinguishing advantage of an unbounded receiver holding extra copies.

    Exactly averages over all M^N tables the state (magic copy)^{⊗copies}
    tensored with the commitment register, and takes the trace distance of
    the bit-0 vs bit-1 averages. Only practical for tiny parameters.
    """
    big_n, big_m = 1 << n_bits, 1 << m_bits
    n_tables = big_m**big_n
    if n_tables > 4096:
        raise ValueError(f"{n_tables} tables is too many to enumerate")
    dim = 1 << (copies * (n_bits + m_bits) + m_bits)
    sigma0 = np.zeros((dim, dim), dtype=np.complex128)
    sigma1 = np.zeros((dim, dim), dtype=np.complex128)
    eye_m = np.eye(big_m, dtype=np.complex128) / big_m
    for code in range(n_tables):
        table = []
        c = code
        for _ in range(big_n):
            table.append(c % big_m)
            c //= big_m
        h = FunctionTable(n_bits, m_bits, tuple(table))
        copy_vec = np.array([1.0], dtype=np.complex128)
        mvec = magic_state(h).amplitudes
        for _ in range(copies):
            copy_vec = np.kron(copy_vec, mvec)
        copy_rho = np.outer(copy_vec, copy_vec.conj())
        rho_c0 = np.diag(h.preimage_counts().astype(np.complex128) / big_n)
        sigma0 += np.kron(copy_rho, rho_c0)
        sigma1 += np.kron(copy_rho, eye_m)
    sigma0 /= n_tables
    sigma1 /= n_tables
    return trace_distance(
        DensityMatrix(sigma0, validate=False), DensityMatrix(sigma1, validate=False)
    )


# -- sum-binding experiment ----------------------------------------------------------


@dataclass
class BindingAdversary:
    """A committer strategy for the sum-binding experiment.

    The adversary prepares `state`, sends the c_regs, then for each claimed
    bit designates which of its registers form the decommitment (MSB-first
    per fold) and may apply one reveal-phase unitary on non-commitment
    registers first.
    """

    state: StateVector
    c_regs: tuple[str, ...]
    d_regs_0: tuple[tuple[str, ...], ...]
    d_regs_1: tuple[tuple[str, ...], ...]
    reveal_unitary_0: Optional[tuple[np.ndarray, tuple[str, ...]]] = None
    reveal_unitary_1: Optional[tuple[np.ndarray, tuple[str, ...]]] = None


def sum_binding_experiment(
    adversary: BindingAdversary, mode: SetupMode, params: SchemeParams
) -> tuple[float, float]:
    """Exact acceptance probabilities (p0, p1) for the two reveal claims."""
    results = []
    for bit in (0, 1):
        s = adversary.state
        unitary = adversary.reveal_unitary_0 if bit == 0 else adversary.reveal_unitary_1
        if unitary is not None:
            matrix, regs = unitary
            if set(regs) & set(adversary.c_regs):
                raise ContractViolationError(
                    "reveal-phase unitary touches a commitment register"
                )
            s = s.apply_unitary(matrix, list(regs))
        d_regs = adversary.d_regs_0 if bit == 0 else adversary.d_regs_1
        results.append(
            accept_probability(mode, params, s, adversary.c_regs, d_regs, bit)
        )
    return results[0], results[1]


def honest_binding_adversary(
    mode: SetupMode, params: SchemeParams, bit: int
) -> BindingAdversary:
    """Honest committer for `bit`, cross-revealing the other bit by padding.

    Requires m_bits >= n_bits. Revealing 1 from an honest-0 state sends a
    zero-padded preimage register; revealing 0 from an honest-1 state sends
    the low n_bits of the entangled half.
    """
    n, m = params.n_bits, params.m_bits
    if m < n:
        raise ValueError("cross-reveal padding needs m_bits >= n_bits")
    table = _mode_table(mode)
    if table is None:
        raise ValueError("honest adversary construction needs an explicit table")
    state: Optional[StateVector] = None
    c_regs, d0, d1 = [], [], []
    for f in range(params.folds):
        c_regs.append(f"C{f}")
        d0.append((f"DL{f}",))
        d1.append((f"DH{f}", f"DL{f}"))
        layout = RegisterLayout([(f"DH{f}", m - n), (f"DL{f}", n), (f"C{f}", m)])
        amps = np.zeros(layout.dim, dtype=np.complex128)
        if bit == 0:
            for x in range(1 << n):
                amps[(x << m) | table(x)] = 1.0 / np.sqrt(1 << n)
        else:
            for y in range(1 << m):
                amps[(y << m) | y] = 1.0 / np.sqrt(1 << m)
        fold = StateVector(layout, amps)
        state = fold if state is None else tensor(state, fold)
    return BindingAdversary(
        state=state,
        c_regs=tuple(c_regs),
        d_regs_0=tuple(d0),
        d_regs_1=tuple(d1),
    )


# -- extraction experiment ---------------------------------------------------------------


@dataclass
class ExtractionCommitter:
    """Commit-phase output of a (possibly dishonest) single-fold committer.

    Required registers: C (m, sent), B (1, claimed bit), DH (m-n) and DL (n)
    forming the decommitment register D = (DH, DL). Anything else is the
    committer's private workspace and shows up in the experiment output.
    """

    state: StateVector


def honest_extraction_committer(
    h: FunctionTable, params: SchemeParams, bit: int
) -> ExtractionCommitter:
    n, m = params.n_bits, params.m_bits
    layout = RegisterLayout([("B", 1), ("DH", m - n), ("DL", n), ("C", m)])
    amps = np.zeros(layout.dim, dtype=np.complex128)
    if bit == 0:
        for x in range(1 << n):
            amps[(x << m) | h(x)] = 1.0 / np.sqrt(1 << n)
    else:
        for y in range(1 << m):
            amps[(1 << (2 * m)) | (y << m) | y] = 1.0 / np.sqrt(1 << m)
    return ExtractionCommitter(StateVector(layout, amps))


def superposed_extraction_committer(
    h: FunctionTable, params: SchemeParams
) -> ExtractionCommitter:
    """Equal superposition of the two honest branches (distinct B values)."""
    a = honest_extraction_committer(h, params, 0).state.amplitudes
    b = honest_extraction_committer(h, params, 1).state.amplitudes
    amps = (a + b) / np.sqrt(2.0)
    layout = honest_extraction_committer(h, params, 0).state.layout
    return ExtractionCommitter(StateVector(layout, amps))


def _reduce_to(s_amps: np.ndarray, layout: RegisterLayout, keep: Sequence[str]) -> np.ndarray:
    """Subnormalized reduced matrix on `keep` (dim 1 if keep is empty)."""
    arr = s_amps.reshape(layout.axis_dims())
    if not keep:
        return np.array([[np.vdot(s_amps, s_amps)]], dtype=np.complex128)
    axes = [layout.axis_of(n) for n in keep]
    arr = np.moveaxis(arr, axes, range(len(axes)))
    keep_dim = 1 << layout.total_width_of(keep)
    mat = arr.reshape(keep_dim, -1)
    return mat @ mat.conj().T


def extraction_experiment(
    committer: ExtractionCommitter, mode: SetupMode, params: SchemeParams
) -> float:
    """Trace distance between real and extractor-first reveal experiments.

    The receiver measures {accept-0, accept-1, reject} via the reveal SWAP
    tests; the extractor is the Helstrom measurement on the receiver's view
    between the reveal-0- and reveal-1-post-selected states. Output systems
    are the committer's private registers plus a four-valued decision
    symbol (0, 1, reject, extraction-error).
    """
    table = _mode_table(mode)
    if table is None:
        raise ValueError("extraction experiment needs an explicit-table mode")
    if params.folds != 1:
        raise ValueError("extraction experiment is single-fold")
    n, m = params.n_bits, params.m_bits
    for name, width in (("B", 1), ("DH", m - n), ("DL", n), ("C", m)):
        if committer.state.layout.width_of(name) != width:
            raise LayoutError(f"committer register {name} must have width {width}")
    joint = tensor(committer.state, magic_state(table, "_RMX", "_RMY"))
    joint = tensor(joint, epr_state(m, "_RPA", "_RPB"))
    layout = joint.layout
    view = ["C", "_RMX", "_RMY", "_RPA", "_RPB"]
    priv = [
        name
        for name in committer.state.layout.names
        if name not in ("B", "DH", "DL", "C")
    ]

    def project_reveal(s: StateVector) -> dict:
        _, b0 = s.project(["B"], 0)
        b0 = _project_zero(b0, "DH")
        out0 = _symmetrize(b0, ["DL", "C"], ["_RMX", "_RMY"])
        _, b1 = s.project(["B"], 1)
        out1 = _symmetrize(b1, ["DH", "DL", "C"], ["_RPA", "_RPB"])
        perp = s.amplitudes - out0.amplitudes - out1.amplitudes
        return {0: out0.amplitudes, 1: out1.amplitudes, "reject": perp}

    branches = project_reveal(joint)
    q0 = float(np.vdot(branches[0], branches[0]).real)
    q1 = float(np.vdot(branches[1], branches[1]).real)

    view_axes = [layout.axis_of(name) for name in view]
    view_dim = 1 << layout.total_width_of(view)

    def as_view_matrix(amps: np.ndarray) -> np.ndarray:
        arr = np.moveaxis(amps.reshape(layout.axis_dims()), view_axes, range(len(view)))
        return arr.reshape(view_dim, -1)

    def from_view_matrix(mat: np.ndarray) -> np.ndarray:
        arr = mat.reshape(
            [layout.axis_dims()[a] for a in view_axes]
            + [d for i, d in enumerate(layout.axis_dims()) if i not in view_axes]
        )
        arr = np.moveaxis(arr, range(len(view)), view_axes)
        return arr.reshape(-1)

    tiny = 1e-15
    if q1 <= tiny and q0 <= tiny:
        extract = lambda mat: (mat, np.zeros_like(mat))
    elif q1 <= tiny:
        extract = lambda mat: (mat, np.zeros_like(mat))
    elif q0 <= tiny:
        extract = lambda mat: (np.zeros_like(mat), mat)
    else:
        m0 = as_view_matrix(branches[0]) / np.sqrt(q0)
        m1 = as_view_matrix(branches[1]) / np.sqrt(q1)
        span, _ = np.linalg.qr(np.hstack([m0, m1]))
        g0 = span.conj().T @ m0
        g1 = span.conj().T @ m1
        delta = g0 @ g0.conj().T - g1 @ g1.conj().T
        w, u = np.linalg.eigh(delta)
        b_plus = span @ u[:, w >= 0.0]
        b_minus = span @ u[:, w < 0.0]

        def extract(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            # guess-0 projector = nonneg eigenspace plus the span complement
            inside = span @ (span.conj().T @ mat)
            part0 = mat - inside + b_plus @ (b_plus.conj().T @ mat)
            part1 = b_minus @ (b_minus.conj().T @ mat)
            return part0, part1

    omega_real = {
        label: _reduce_to(amps, layout, priv) for label, amps in branches.items()
    }
    omega_ideal: dict = {}
    ext0, ext1 = extract(as_view_matrix(joint.amplitudes))
    for guess, mat in ((0, ext0), (1, ext1)):
        post = StateVector(layout, from_view_matrix(mat), subnormalized=True)
        for outcome, amps in project_reveal(post).items():
            if outcome == "reject":
                label = "reject"
            elif outcome == guess:
                label = outcome
            else:
                label = "error"
            block = _reduce_to(amps, layout, priv)
            if label in omega_ideal:
                omega_ideal[label] = omega_ideal[label] + block
            else:
                omega_ideal[label] = block

    priv_dim = 1 << layout.total_width_of(priv) if priv else 1
    zero = np.zeros((priv_dim, priv_dim), dtype=np.complex128)
    td = 0.0
    for label in (0, 1, "reject", "error"):
        diff = omega_real.get(label, zero) - omega_ideal.get(label, zero)
        td += 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return td


# -- witness game -----------------------------------------------------------------------


class ConstantDistinguisher:
    """Ignores the sample and always answers the same bit."""

    def __init__(self, bit: int):
        self.bit = bit

    def guess(self, y: int, rng: np.random.Generator) -> int:
        return self.bit


class EqualityDistinguisher:
    """Answers "pseudorandom" exactly when the sample equals a fixed target."""

    def __init__(self, target: int):
        self.target = target

    def guess(self, y: int, rng: np.random.Generator) -> int:
        return 0 if y == self.target else 1


class CircuitDistinguisher:
    """Runs a unitary on |y>|0...0> and measures the first qubit as the answer."""

    def __init__(self, matrix: np.ndarray, m_bits: int, ancilla_bits: int = 0):
        dim = 1 << (m_bits + ancilla_bits)
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(
                f"circuit shape {matrix.shape} does not act on {dim} dims"
            )
        self.matrix = matrix
        self.m_bits = m_bits
        self.ancilla_bits = ancilla_bits

    def guess(self, y: int, rng: np.random.Generator) -> int:
        dim = self.matrix.shape[0]
        vec = np.zeros(dim, dtype=np.complex128)
        vec[y << self.ancilla_bits] = 1.0
        vec = self.matrix @ vec
        probs = np.abs(vec) ** 2
        p_one = float(np.sum(probs[dim // 2 :]))
        return 1 if rng.random() < p_one else 0


def insecurity_witness_game(
    h: FunctionTable, distinguisher, trials: int, seed
) -> float:
    """Monte Carlo frequency with which the distinguisher predicts the branch.

    Branch 0 feeds H(x) for uniform x; branch 1 feeds a uniform range
    element. Deterministic given the seed.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    correct = 0
    for _ in range(trials):
        b = int(rng.integers(2))
        if b == 0:
            y = h(int(rng.integers(h.domain_size)))
        else:
            y = int(rng.integers(h.range_size))
        if distinguisher.guess(y, rng) == b:
            correct += 1
    return correct / trials
