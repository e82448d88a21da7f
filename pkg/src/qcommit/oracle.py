"""Random-function machinery: explicit tables, magic/EPR state preparation,
and two interchangeable quantum random-oracle simulations.

The purified oracle keeps an explicit function register in uniform
superposition over all M^N tables. The compressed oracle keeps a lazily
populated database of at most t entries; its induced channel on the
non-database registers must be identical to the purified one, which is
pinned by test rather than by transcription.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
import scipy.sparse as sp

from .capacity import check_capacity
from .errors import (
    DimensionMismatchError,
    LayoutError,
    QueryBudgetError,
    StateError,
)
from .states import RegisterLayout, StateVector, tensor


@dataclass(frozen=True)
class FunctionTable:
    """Explicit table for H: [N] -> [M] with N = 2^n_bits, M = 2^m_bits."""

    n_bits: int
    m_bits: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n_bits < 1 or self.m_bits < 1:
            raise ValueError("n_bits and m_bits must be >= 1")
        if len(self.table) != self.domain_size:
            raise ValueError(
                f"table length {len(self.table)} != domain size {self.domain_size}"
            )
        if any(v < 0 or v >= self.range_size for v in self.table):
            raise ValueError("table entry out of range")

    @property
    def domain_size(self) -> int:
        return 1 << self.n_bits

    @property
    def range_size(self) -> int:
        return 1 << self.m_bits

    def __call__(self, x: int) -> int:
        return self.table[x]

    def preimage_counts(self) -> np.ndarray:
        counts = np.zeros(self.range_size, dtype=np.int64)
        for v in self.table:
            counts[v] += 1
        return counts

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.domain_size

    @classmethod
    def identity(cls, n_bits: int) -> "FunctionTable":
        return cls(n_bits, n_bits, tuple(range(1 << n_bits)))

    @classmethod
    def constant(cls, n_bits: int, m_bits: int, value: int = 0) -> "FunctionTable":
        return cls(n_bits, m_bits, (value,) * (1 << n_bits))

    def to_text(self) -> str:
        values = " ".join(str(v) for v in self.table)
        return f"{self.n_bits} {self.m_bits}\n{values}\n"

    @classmethod
    def from_text(cls, text: str) -> "FunctionTable":
        lines = text.split("\n", 1)
        if len(lines) < 2:
            raise ValueError("function file needs a header line and a value line")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"bad function file header {lines[0]!r}")
        n_bits, m_bits = int(header[0]), int(header[1])
        values = tuple(int(v) for v in lines[1].split())
        return cls(n_bits, m_bits, values)


def sample_function(n_bits: int, m_bits: int, seed) -> FunctionTable:
    """Uniform random table, deterministic given the seed."""
    if n_bits < 1 or m_bits < 1:
        raise ValueError("n_bits and m_bits must be >= 1")
    check_capacity(n_bits + m_bits, "magic state for sampled function")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    table = rng.integers(0, 1 << m_bits, size=1 << n_bits)
    return FunctionTable(n_bits, m_bits, tuple(int(v) for v in table))


def magic_state(h: FunctionTable, x_name: str = "X", y_name: str = "Y") -> StateVector:
    """|M> = N^{-1/2} sum_x |x>|H(x)> over registers (x_name, y_name)."""
    n, m = h.n_bits, h.m_bits
    check_capacity(n + m, "magic state")
    layout = RegisterLayout([(x_name, n), (y_name, m)])
    amps = np.zeros(layout.dim, dtype=np.complex128)
    scale = 1.0 / np.sqrt(h.domain_size)
    for x in range(h.domain_size):
        amps[(x << m) | h(x)] = scale
    return StateVector(layout, amps)


def epr_state(m_bits: int, a_name: str = "A", b_name: str = "B") -> StateVector:
    """Maximally entangled state M^{-1/2} sum_y |y>|y> on two m_bits halves."""
    if m_bits < 1:
        raise ValueError("m_bits must be >= 1")
    check_capacity(2 * m_bits, "maximally entangled state")
    layout = RegisterLayout([(a_name, m_bits), (b_name, m_bits)])
    m = 1 << m_bits
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[np.arange(m) * m + np.arange(m)] = 1.0 / np.sqrt(m)
    return StateVector(layout, amps)


@dataclass(frozen=True)
class SchemeParams:
    """Scaled-down scheme parameters; the honest regime keeps m_bits > n_bits."""

    lambda_scaled: int
    n_bits: int
    m_bits: int
    folds: int = 1

    def __post_init__(self):
        if self.lambda_scaled < 1 or self.n_bits < 1 or self.m_bits < 1:
            raise ValueError("lambda_scaled, n_bits, m_bits must be >= 1")
        if self.folds < 1:
            raise ValueError("fold count must be >= 1")

    @property
    def honest_regime(self) -> bool:
        return self.m_bits > self.n_bits

    @classmethod
    def from_lambda(cls, lambda_scaled: int, folds: int | None = None) -> "SchemeParams":
        return cls(
            lambda_scaled=lambda_scaled,
            n_bits=5 * lambda_scaled,
            m_bits=6 * lambda_scaled,
            folds=folds if folds is not None else lambda_scaled,
        )


class PurifiedOracle:
    """Reference random-oracle simulation with an explicit function register.

    The function register holds m_bits * N qubits; point x occupies the
    x-th m-bit block counted from the most significant end. Before any
    query the register is uniform over all tables.
    """

    def __init__(self, n_bits: int, m_bits: int, func_register: str = "F"):
        self.n_bits = n_bits
        self.m_bits = m_bits
        self.func_register = func_register
        self.func_width = m_bits * (1 << n_bits)
        check_capacity(self.func_width, "purified function register")

    def initial_state(self) -> StateVector:
        layout = RegisterLayout([(self.func_register, self.func_width)])
        return StateVector.uniform(layout)

    def attach(self, s: StateVector) -> StateVector:
        return tensor(s, self.initial_state())

    def point_values(self, x: int) -> np.ndarray:
        """Value of point x for every function-register basis index."""
        shift = self.m_bits * ((1 << self.n_bits) - 1 - x)
        idx = np.arange(1 << self.func_width, dtype=np.int64)
        return (idx >> shift) & ((1 << self.m_bits) - 1)

    def query(self, s: StateVector, x_reg: str, y_reg: str) -> StateVector:
        """XOR H(x) into y_reg, coherently over the function register."""
        self._check_regs(s, x_reg, y_reg)
        axes = [
            s.layout.axis_of(x_reg),
            s.layout.axis_of(y_reg),
            s.layout.axis_of(self.func_register),
        ]
        arr = s._as_axes()
        arr = np.moveaxis(arr, axes, (0, 1, 2))
        moved_shape = arr.shape
        n_dim, m_dim, f_dim = moved_shape[0], moved_shape[1], moved_shape[2]
        arr = arr.reshape(n_dim, m_dim, f_dim, -1)
        out = np.empty_like(arr)
        y_idx = np.arange(m_dim, dtype=np.int64)
        f_idx = np.arange(f_dim, dtype=np.int64)
        for x in range(n_dim):
            values = self.point_values(x)
            gather_y = y_idx[:, None] ^ values[None, :]
            out[x] = arr[x][gather_y, f_idx[None, :], :]
        out = out.reshape(moved_shape)
        out = np.moveaxis(out, (0, 1, 2), axes)
        return StateVector(s.layout, out.reshape(-1), subnormalized=s.subnormalized)

    def _check_regs(self, s: StateVector, x_reg: str, y_reg: str) -> None:
        if s.layout.width_of(x_reg) != self.n_bits:
            raise DimensionMismatchError(
                f"x register width {s.layout.width_of(x_reg)} != n_bits {self.n_bits}"
            )
        if s.layout.width_of(y_reg) != self.m_bits:
            raise DimensionMismatchError(
                f"y register width {s.layout.width_of(y_reg)} != m_bits {self.m_bits}"
            )


class CompressedOracleState:
    """Zhandry-style compressed standard oracle with a fixed query budget.

    The database register holds t slots of (1 occupied flag + n key bits +
    m value bits) each. Occupied slots form a prefix sorted strictly by
    key; empty slots are all-zero. The content-canonical (sorted) encoding
    is what makes the simulation exact: slot positions must be a function
    of database content only, never of query order.
    """

    def __init__(self, n_bits: int, m_bits: int, max_queries: int, db_register: str = "DB"):
        if max_queries < 0:
            raise ValueError("max_queries must be >= 0")
        self.n_bits = n_bits
        self.m_bits = m_bits
        self.max_queries = max_queries
        self.db_register = db_register
        self.slot_width = n_bits + m_bits + 1
        self.db_width = self.slot_width * max_queries
        self.query_count = 0
        check_capacity(self.db_width, "compressed-oracle database")
        self._decomp_ops: dict[int, sp.csr_matrix] = {}
        self._xor_values: dict[int, np.ndarray] = {}

    # -- encoding ------------------------------------------------------------

    def encode_entries(self, entries) -> int:
        """Canonical database index for a set of (key, value) entries."""
        entries = sorted(entries)
        if len(entries) > self.max_queries:
            raise ValueError("too many entries for the database")
        keys = [k for k, _ in entries]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate keys in database entries")
        index = 0
        for j in range(self.max_queries):
            slot = 0
            if j < len(entries):
                key, value = entries[j]
                slot = (1 << (self.n_bits + self.m_bits)) | (key << self.m_bits) | value
            index = (index << self.slot_width) | slot
        return index

    def decode_db(self, index: int) -> list[tuple[int, int]]:
        """Occupied (key, value) entries of a database basis index."""
        entries = []
        mask = (1 << self.slot_width) - 1
        for j in range(self.max_queries):
            shift = self.slot_width * (self.max_queries - 1 - j)
            slot = (index >> shift) & mask
            if slot >> (self.n_bits + self.m_bits):
                key = (slot >> self.m_bits) & ((1 << self.n_bits) - 1)
                entries.append((key, slot & ((1 << self.m_bits) - 1)))
        return entries

    # -- state plumbing --------------------------------------------------------

    def initial_state(self) -> StateVector:
        layout = RegisterLayout([(self.db_register, self.db_width)])
        return StateVector.basis(layout, 0)

    def attach(self, s: StateVector) -> StateVector:
        return tensor(s, self.initial_state())

    # -- operator construction --------------------------------------------------

    def _decomp_operator(self, x: int) -> sp.csr_matrix:
        """Local decompression unitary StdDecomp_x on the database register.

        Swaps the absent state with the uniform value superposition at key
        x and fixes the nonzero Fourier components; block-diagonal over
        contexts (databases over the other keys), identity elsewhere.
        """
        if x in self._decomp_ops:
            return self._decomp_ops[x]
        n_dom = 1 << self.n_bits
        m_rng = 1 << self.m_bits
        if not 0 <= x < n_dom:
            raise ValueError(f"domain point {x} out of range")
        dim = 1 << self.db_width
        inv_sqrt_m = 1.0 / np.sqrt(m_rng)
        block = np.zeros((m_rng + 1, m_rng + 1))
        block[1:, 0] = inv_sqrt_m                      # |absent> -> uniform
        block[0, 1:] = inv_sqrt_m                      # uniform component back to absent
        block[1:, 1:] = np.eye(m_rng) - np.full((m_rng, m_rng), 1.0 / m_rng)
        rows, cols, data = [], [], []
        covered = set()
        other_keys = [k for k in range(n_dom) if k != x]
        for size in range(self.max_queries):
            for keys in combinations(other_keys, size):
                for values in product(range(m_rng), repeat=size):
                    ctx = list(zip(keys, values))
                    indices = [self.encode_entries(ctx)]
                    indices += [
                        self.encode_entries(ctx + [(x, y)]) for y in range(m_rng)
                    ]
                    covered.update(indices)
                    for a, row_idx in enumerate(indices):
                        for b, col_idx in enumerate(indices):
                            if block[a, b] != 0.0:
                                rows.append(row_idx)
                                cols.append(col_idx)
                                data.append(block[a, b])
        for idx in range(dim):
            if idx not in covered:
                rows.append(idx)
                cols.append(idx)
                data.append(1.0)
        op = sp.csr_matrix(
            (np.array(data), (np.array(rows), np.array(cols))), shape=(dim, dim)
        )
        self._decomp_ops[x] = op
        return op

    def _xor_value_table(self, x: int) -> np.ndarray:
        """Per database basis index: value stored at key x, or -1 if absent."""
        if x in self._xor_values:
            return self._xor_values[x]
        idx = np.arange(1 << self.db_width, dtype=np.int64)
        values = np.full(idx.shape, -1, dtype=np.int64)
        slot_mask = (1 << self.slot_width) - 1
        key_mask = (1 << self.n_bits) - 1
        val_mask = (1 << self.m_bits) - 1
        for j in range(self.max_queries):
            shift = self.slot_width * (self.max_queries - 1 - j)
            slot = (idx >> shift) & slot_mask
            occupied = (slot >> (self.n_bits + self.m_bits)) == 1
            keys = (slot >> self.m_bits) & key_mask
            hit = occupied & (keys == x)
            values[hit] = (slot & val_mask)[hit]
        self._xor_values[x] = values
        return values

    # -- public operations ------------------------------------------------------

    def query(self, s: StateVector, x_reg: str, y_reg: str) -> StateVector:
        """One compressed-oracle query: decompress at x, XOR, recompress."""
        if self.query_count >= self.max_queries:
            raise QueryBudgetError(
                f"query budget of {self.max_queries} exhausted"
            )
        self._check_regs(s, x_reg, y_reg)
        s = self._apply_decomp_controlled(s, x_reg)
        s = self._apply_xor(s, x_reg, y_reg)
        s = self._apply_decomp_controlled(s, x_reg)
        self.query_count += 1
        return s

    def std_decomp(self, s: StateVector, x: int) -> StateVector:
        """Toggle the x-entry between compressed and standard form (self-inverse)."""
        if not 0 <= x < (1 << self.n_bits):
            raise ValueError(f"domain point {x} out of range")
        op = self._decomp_operator(x)
        axes = [s.layout.axis_of(self.db_register)]
        arr = s._as_axes()
        arr = np.moveaxis(arr, axes, (0,))
        moved_shape = arr.shape
        flat = arr.reshape(moved_shape[0], -1)
        flat = op @ flat
        arr = flat.reshape(moved_shape)
        arr = np.moveaxis(arr, (0,), axes)
        return StateVector(s.layout, arr.reshape(-1), subnormalized=s.subnormalized)

    # -- internals ----------------------------------------------------------------

    def _check_regs(self, s: StateVector, x_reg: str, y_reg: str) -> None:
        if s.layout.width_of(x_reg) != self.n_bits:
            raise DimensionMismatchError(
                f"x register width {s.layout.width_of(x_reg)} != n_bits {self.n_bits}"
            )
        if s.layout.width_of(y_reg) != self.m_bits:
            raise DimensionMismatchError(
                f"y register width {s.layout.width_of(y_reg)} != m_bits {self.m_bits}"
            )
        if self.db_register not in s.layout.names:
            raise LayoutError(
                f"state does not carry database register {self.db_register!r}"
            )

    def _apply_decomp_controlled(self, s: StateVector, x_reg: str) -> StateVector:
        axes = [s.layout.axis_of(x_reg), s.layout.axis_of(self.db_register)]
        arr = s._as_axes()
        arr = np.moveaxis(arr, axes, (0, 1))
        moved_shape = arr.shape
        arr = arr.reshape(moved_shape[0], moved_shape[1], -1).copy()
        for x in range(moved_shape[0]):
            arr[x] = self._decomp_operator(x) @ arr[x]
        arr = arr.reshape(moved_shape)
        arr = np.moveaxis(arr, (0, 1), axes)
        return StateVector(s.layout, arr.reshape(-1), subnormalized=s.subnormalized)

    def _apply_xor(self, s: StateVector, x_reg: str, y_reg: str) -> StateVector:
        axes = [
            s.layout.axis_of(x_reg),
            s.layout.axis_of(y_reg),
            s.layout.axis_of(self.db_register),
        ]
        arr = s._as_axes()
        arr = np.moveaxis(arr, axes, (0, 1, 2))
        moved_shape = arr.shape
        n_dim, m_dim, d_dim = moved_shape[0], moved_shape[1], moved_shape[2]
        arr = arr.reshape(n_dim, m_dim, d_dim, -1)
        out = np.empty_like(arr)
        y_idx = np.arange(m_dim, dtype=np.int64)
        d_idx = np.arange(d_dim, dtype=np.int64)
        for x in range(n_dim):
            values = self._xor_value_table(x)
            gather_y = y_idx[:, None] ^ np.where(values >= 0, values, 0)[None, :]
            out[x] = arr[x][gather_y, d_idx[None, :], :]
        out = out.reshape(moved_shape)
        out = np.moveaxis(out, (0, 1, 2), axes)
        return StateVector(s.layout, out.reshape(-1), subnormalized=s.subnormalized)

def purified_query(
    po: PurifiedOracle, s: StateVector, x_reg: str, y_reg: str
) -> StateVector:
    """Free-function form of PurifiedOracle.query."""
    return po.query(s, x_reg, y_reg)


def cstO_query(
    co: CompressedOracleState, s: StateVector, x_reg: str, y_reg: str
) -> StateVector:
    """Free-function form of CompressedOracleState.query."""
    return co.query(s, x_reg, y_reg)


def std_decomp(co: CompressedOracleState, s: StateVector, x: int) -> StateVector:
    """Free-function form of CompressedOracleState.std_decomp."""
    return co.std_decomp(s, x)
