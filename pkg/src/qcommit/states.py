"""Multi-register statevectors and density matrices with exact dense arithmetic.

Registers are named and ordered; the first register holds the most
significant bits of a basis index. All operations return new values, so
states are safe to share read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .capacity import check_capacity
from .errors import DimensionMismatchError, LayoutError, StateError

NORM_ATOL = 1e-9
DRIFT_ATOL = 1e-12


class RegisterLayout:
    """Ordered list of named registers with qubit widths (width 0 allowed)."""

    def __init__(self, registers: Sequence[tuple[str, int]]):
        names = [name for name, _ in registers]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, width in registers:
            if width < 0:
                raise LayoutError(f"register {name!r} has negative width {width}")
        self.registers = tuple((str(name), int(width)) for name, width in registers)
        self.names = tuple(names)
        self.total_width = sum(width for _, width in self.registers)
        self.dim = 1 << self.total_width

    def width_of(self, name: str) -> int:
        for reg_name, width in self.registers:
            if reg_name == name:
                return width
        raise LayoutError(f"unknown register {name!r}")

    def axis_of(self, name: str) -> int:
        for axis, (reg_name, _) in enumerate(self.registers):
            if reg_name == name:
                return axis
        raise LayoutError(f"unknown register {name!r}")

    def axis_dims(self) -> tuple[int, ...]:
        return tuple(1 << width for _, width in self.registers)

    def total_width_of(self, names: Iterable[str]) -> int:
        return sum(self.width_of(name) for name in names)

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        overlap = set(self.names) & set(other.names)
        if overlap:
            raise LayoutError(f"register name collision: {sorted(overlap)}")
        return RegisterLayout(list(self.registers) + list(other.registers))

    def check_names(self, names: Iterable[str]) -> None:
        for name in names:
            if name not in self.names:
                raise LayoutError(f"unknown register {name!r}")

    def __eq__(self, other) -> bool:
        return isinstance(other, RegisterLayout) and self.registers == other.registers

    def __repr__(self) -> str:
        regs = ", ".join(f"{n}:{w}" for n, w in self.registers)
        return f"RegisterLayout({regs})"


class StateVector:
    """Pure state over a register layout.

    Norm must be 1 within 1e-9 unless the state is explicitly flagged
    subnormalized (post-selection intermediates only); public operations
    reject subnormalized inputs.
    """

    def __init__(self, layout: RegisterLayout, amplitudes, subnormalized: bool = False):
        check_capacity(layout.total_width)
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (layout.dim,):
            raise DimensionMismatchError(
                f"amplitude length {amps.shape} does not match layout dim {layout.dim}"
            )
        if not subnormalized:
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > NORM_ATOL:
                raise StateError(f"state norm {norm} deviates from 1 beyond {NORM_ATOL}")
        self.layout = layout
        self.amplitudes = amps
        self.subnormalized = subnormalized

    # -- constructors ------------------------------------------------------

    @classmethod
    def basis(cls, layout: RegisterLayout, index: int = 0) -> "StateVector":
        amps = np.zeros(layout.dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(layout, amps)

    @classmethod
    def uniform(cls, layout: RegisterLayout) -> "StateVector":
        amps = np.full(layout.dim, 1.0 / np.sqrt(layout.dim), dtype=np.complex128)
        return cls(layout, amps)

    # -- helpers -----------------------------------------------------------

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _require_normalized(self, op: str) -> None:
        if self.subnormalized:
            raise StateError(f"{op} rejects subnormalized states")

    def _as_axes(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.axis_dims())

    def renormalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise StateError("cannot renormalize the zero vector")
        return StateVector(self.layout, self.amplitudes / norm)

    def overlap(self, other: "StateVector") -> complex:
        if self.layout.dim != other.layout.dim:
            raise DimensionMismatchError("overlap needs equal dimensions")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    # -- operations --------------------------------------------------------

    def apply_unitary(self, matrix, regs: Sequence[str]) -> "StateVector":
        """Apply a unitary on the given registers (in the listed order, MSB first)."""
        self.layout.check_names(regs)
        matrix = np.asarray(matrix, dtype=np.complex128)
        target_dim = 1 << self.layout.total_width_of(regs)
        if matrix.shape != (target_dim, target_dim):
            raise DimensionMismatchError(
                f"matrix shape {matrix.shape} does not act on dim {target_dim}"
            )
        axes = [self.layout.axis_of(name) for name in regs]
        arr = self._as_axes()
        arr = np.moveaxis(arr, axes, range(len(axes)))
        moved_shape = arr.shape
        arr = arr.reshape(target_dim, -1)
        arr = matrix @ arr
        arr = arr.reshape(moved_shape)
        arr = np.moveaxis(arr, range(len(axes)), axes)
        return StateVector(
            self.layout, arr.reshape(-1), subnormalized=self.subnormalized
        )

    def controlled_swap(
        self,
        control: str,
        regs_a: Sequence[str],
        regs_b: Sequence[str],
    ) -> "StateVector":
        """Swap the contents of regs_a and regs_b on the control=1 subspace."""
        self.layout.check_names([control, *regs_a, *regs_b])
        if self.layout.width_of(control) != 1:
            raise LayoutError("control register must have width 1")
        wa = self.layout.total_width_of(regs_a)
        wb = self.layout.total_width_of(regs_b)
        if wa != wb:
            raise DimensionMismatchError(
                f"swap operands have widths {wa} and {wb}"
            )
        if set(regs_a) & set(regs_b):
            raise LayoutError("swap operands overlap")
        axes = [self.layout.axis_of(control)]
        axes += [self.layout.axis_of(n) for n in regs_a]
        axes += [self.layout.axis_of(n) for n in regs_b]
        arr = self._as_axes()
        arr = np.moveaxis(arr, axes, range(len(axes)))
        moved_shape = arr.shape
        arr = arr.reshape(2, 1 << wa, 1 << wb, -1).copy()
        arr[1] = arr[1].swapaxes(0, 1)
        arr = arr.reshape(moved_shape)
        arr = np.moveaxis(arr, range(len(axes)), axes)
        return StateVector(
            self.layout, arr.reshape(-1), subnormalized=self.subnormalized
        )

    def probabilities(self, regs: Sequence[str]) -> np.ndarray:
        """Born-rule marginal over the given registers (MSB-first index order)."""
        self.layout.check_names(regs)
        axes = [self.layout.axis_of(name) for name in regs]
        arr = np.abs(self._as_axes()) ** 2
        other = tuple(i for i in range(len(self.layout.registers)) if i not in axes)
        probs = arr.sum(axis=other)
        probs = np.moveaxis(
            probs, [sorted(axes).index(a) for a in axes], range(len(axes))
        )
        return probs.reshape(-1)

    def project(self, regs: Sequence[str], value: int) -> tuple[float, "StateVector"]:
        """Project the given registers onto a basis value.

        Returns (probability, subnormalized post state).
        """
        self.layout.check_names(regs)
        axes = [self.layout.axis_of(name) for name in regs]
        arr = self._as_axes().copy()
        arr = np.moveaxis(arr, axes, range(len(axes)))
        moved_shape = arr.shape
        target_dim = int(np.prod(moved_shape[: len(axes)]))
        flat = arr.reshape(target_dim, -1)
        prob = float(np.sum(np.abs(flat[value]) ** 2))
        keep = flat[value].copy()
        flat[:] = 0.0
        flat[value] = keep
        arr = flat.reshape(moved_shape)
        arr = np.moveaxis(arr, range(len(axes)), axes)
        return prob, StateVector(self.layout, arr.reshape(-1), subnormalized=True)


@dataclass
class MeasurementOutcome:
    outcome: int
    probability: float
    post_state: StateVector


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; the layouts are concatenated (a first)."""
    a._require_normalized("tensor")
    b._require_normalized("tensor")
    layout = a.layout.concat(b.layout)
    check_capacity(layout.total_width, "tensor product")
    return StateVector(layout, np.kron(a.amplitudes, b.amplitudes))


def measure(s: StateVector, regs: Sequence[str]) -> list[MeasurementOutcome]:
    """Full Born-rule distribution over the given registers.

    Outcomes with probability 0 are omitted; the rest carry renormalized
    post states.
    """
    s._require_normalized("measure")
    probs = s.probabilities(regs)
    outcomes = []
    for value, prob in enumerate(probs):
        if prob <= 1e-15:
            continue
        _, post = s.project(regs, value)
        outcomes.append(
            MeasurementOutcome(
                outcome=value,
                probability=float(prob),
                post_state=post.renormalized(),
            )
        )
    return outcomes


def sample_measure(
    s: StateVector, regs: Sequence[str], rng: np.random.Generator
) -> MeasurementOutcome:
    """Sample one measurement outcome."""
    s._require_normalized("sample_measure")
    probs = s.probabilities(regs)
    value = int(rng.choice(len(probs), p=probs / probs.sum()))
    prob, post = s.project(regs, value)
    return MeasurementOutcome(value, float(prob), post.renormalized())


class DensityMatrix:
    """Mixed state: Hermitian, unit-trace, PSD within 1e-9."""

    def __init__(self, entries, validate: bool = True):
        entries = np.asarray(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(f"density matrix shape {entries.shape}")
        if validate:
            if not np.allclose(entries, entries.conj().T, atol=NORM_ATOL):
                raise StateError("density matrix is not Hermitian within 1e-9")
            tr = complex(np.trace(entries))
            if abs(tr - 1.0) > NORM_ATOL:
                raise StateError(f"density matrix trace {tr} deviates from 1")
            eigs = np.linalg.eigvalsh(entries)
            if eigs.min() < -NORM_ATOL:
                raise StateError(f"density matrix has eigenvalue {eigs.min()} < -1e-9")
        self.entries = entries
        self.dim = entries.shape[0]

    @classmethod
    def pure(cls, s: StateVector) -> "DensityMatrix":
        v = s.amplitudes
        return cls(np.outer(v, v.conj()), validate=False)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def partial_trace(s: StateVector, keep: Sequence[str]) -> DensityMatrix:
    """Reduced density matrix on the kept registers (in the listed order)."""
    s._require_normalized("partial_trace")
    keep = list(keep)
    s.layout.check_names(keep)
    axes = [s.layout.axis_of(name) for name in keep]
    arr = s._as_axes()
    arr = np.moveaxis(arr, axes, range(len(axes)))
    keep_dim = 1 << s.layout.total_width_of(keep)
    mat = arr.reshape(keep_dim, -1)
    rho = mat @ mat.conj().T
    return DensityMatrix(rho, validate=False)


def swap_test(
    s: StateVector,
    regs_a: Sequence[str],
    regs_b: Sequence[str],
    ancilla: str,
) -> tuple[float, StateVector]:
    """Hadamard, controlled-SWAP, Hadamard; measure the ancilla.

    The ancilla must be a width-1 register currently in |0>. Returns the
    acceptance probability (ancilla outcome 0) and the renormalized
    post-acceptance state.
    """
    s._require_normalized("swap_test")
    if s.layout.width_of(ancilla) != 1:
        raise LayoutError("swap-test ancilla must have width 1")
    p1 = s.probabilities([ancilla])[1]
    if p1 > DRIFT_ATOL:
        raise StateError("swap-test ancilla is not in |0>")
    wa = s.layout.total_width_of(regs_a)
    wb = s.layout.total_width_of(regs_b)
    if wa != wb:
        raise DimensionMismatchError(f"swap-test operand widths {wa} != {wb}")
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    out = s.apply_unitary(hadamard, [ancilla])
    out = out.controlled_swap(ancilla, regs_a, regs_b)
    out = out.apply_unitary(hadamard, [ancilla])
    prob, post = out.project([ancilla], 0)
    if prob <= 1e-15:
        return 0.0, post
    return prob, post.renormalized()
