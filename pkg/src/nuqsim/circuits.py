"""Circuit intermediate representation for 1- and 2-qubit gate lists.

Gate set: X, RY, RZ, U (generic three-angle single-qubit rotation),
CNOT, MEASURE.  Qubit 0 is the most significant bit of the basis index,
so a two-qubit basis state reads |q0 q1>.  MEASURE ops may only appear
at the tail of a circuit.  Circuits and ops are immutable values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class GateKind(Enum):
    X = "X"
    RY = "RY"
    RZ = "RZ"
    U = "U"
    CNOT = "CNOT"
    MEASURE = "MEASURE"


# number of angle parameters carried by each kind
N_PARAMS = {
    GateKind.X: 0,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.U: 3,
    GateKind.CNOT: 0,
    GateKind.MEASURE: 0,
}


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != N_PARAMS[self.kind]:
            raise ValueError(f"{self.kind.value} takes {N_PARAMS[self.kind]} "
                             f"angle(s), got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError(f"non-finite angle in {self.kind.value} op")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        if self.kind is GateKind.CNOT and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT control and target must differ")


def x(qubit: int = 0) -> GateOp:
    return GateOp(GateKind.X, (qubit,))


def ry(angle: float, qubit: int = 0) -> GateOp:
    return GateOp(GateKind.RY, (qubit,), (float(angle),))


def rz(angle: float, qubit: int = 0) -> GateOp:
    return GateOp(GateKind.RZ, (qubit,), (float(angle),))


def u(theta: float, phi: float, lam: float, qubit: int = 0) -> GateOp:
    return GateOp(GateKind.U, (qubit,), (float(theta), float(phi), float(lam)))


def cnot(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CNOT, (control, target))


def measure(qubit: int = 0) -> GateOp:
    return GateOp(GateKind.MEASURE, (qubit,))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over `width` qubits; measures only at the tail."""

    width: int
    ops: tuple[GateOp, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.width not in (1, 2):
            raise ValueError(f"width must be 1 or 2, got {self.width}")
        seen_measure: set[int] = set()
        for op in self.ops:
            if max(op.qubits) >= self.width:
                raise ValueError(f"{op.kind.value} on qubit {max(op.qubits)} "
                                 f"exceeds circuit width {self.width}")
            if op.kind is GateKind.MEASURE:
                if op.qubits[0] in seen_measure:
                    raise ValueError(f"qubit {op.qubits[0]} measured twice")
                seen_measure.add(op.qubits[0])
            elif seen_measure:
                raise ValueError("gate after MEASURE; measures must be at the tail")

    @property
    def gates(self) -> tuple[GateOp, ...]:
        """Ops excluding MEASURE."""
        return tuple(op for op in self.ops if op.kind is not GateKind.MEASURE)

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        return tuple(op.qubits[0] for op in self.ops
                     if op.kind is GateKind.MEASURE)
