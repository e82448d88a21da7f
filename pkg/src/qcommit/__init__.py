"""Quantum-commitment protocol simulation library and experiment runner."""

from .capacity import DEFAULT_QUBIT_CAP, check_capacity, qubit_cap, set_qubit_cap
from .errors import (
    CapacityError,
    ContractViolationError,
    DimensionMismatchError,
    LayoutError,
    QCommitError,
    QueryBudgetError,
    StateError,
)
from .metrics import fidelity, helstrom, measurement_success, trace_distance
from .oracle import (
    CompressedOracleState,
    FunctionTable,
    PurifiedOracle,
    SchemeParams,
    cstO_query,
    epr_state,
    magic_state,
    purified_query,
    sample_function,
    std_decomp,
)
from .states import (
    DensityMatrix,
    MeasurementOutcome,
    RegisterLayout,
    StateVector,
    measure,
    partial_trace,
    sample_measure,
    swap_test,
    tensor,
)

__version__ = "0.1.0"
