"""Live-qubit cap for exact dense simulation.

Dense complex128 amplitudes at 24 qubits occupy 256 MB; anything bigger is
rejected up front instead of thrashing the machine.
"""

from .errors import CapacityError

DEFAULT_QUBIT_CAP = 24

_qubit_cap = DEFAULT_QUBIT_CAP


def qubit_cap() -> int:
    return _qubit_cap


def set_qubit_cap(cap: int) -> None:
    global _qubit_cap
    if cap < 1:
        raise ValueError("qubit cap must be positive")
    _qubit_cap = cap


def check_capacity(total_qubits: int, what: str = "state") -> None:
    if total_qubits > _qubit_cap:
        raise CapacityError(
            f"{what} needs {total_qubits} qubits, exceeding the cap of {_qubit_cap}"
        )
