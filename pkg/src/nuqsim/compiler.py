"""Single-qubit circuit rewriting.

Two passes:

- ``virtual_z_pass`` removes every RZ by folding its angle into the
  phase offset of subsequent rotations (each RY(t) under a pending
  offset L becomes the pulse-form gate U(t, -L, L), a rotation about
  the equatorial axis (sin L, cos L, 0)).  A trailing RZ carries the
  total offset unless the circuit ends in a Z-basis measurement, where
  it is irrelevant and elided.
- ``lower_to_native`` rewrites X/RY/RZ/U circuits onto the native set
  {RZ, sqrt(X), X}, with sqrt(X) represented in pulse form as
  U(pi/2, -pi/2, pi/2).

The output unitary of ``virtual_z_pass`` (trailing RZ kept) equals the
input exactly for X/RY/RZ and pulse-form U inputs; a general
U(theta, phi, lam) with phi + lam != 0 has determinant e^{i(phi+lam)},
which no RZ/pulse-form sequence can carry, so there equality holds up
to a global phase.  Z-basis probabilities are preserved in every case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, GateKind, GateOp, rz, u, x
from .simulator import gate_matrix, unitaries_equal_up_to_phase

SX_PARAMS = (math.pi / 2, -math.pi / 2, math.pi / 2)


def pulse(theta: float, phi: float, qubit: int = 0) -> GateOp:
    """Physical-pulse rotation about the equatorial axis (sin phi, cos phi, 0)."""
    return u(theta, -phi, phi, qubit)


def sx(qubit: int = 0) -> GateOp:
    """Native sqrt(X) in pulse form."""
    return u(*SX_PARAMS, qubit)


def is_sx(op: GateOp, tol: float = 1e-15) -> bool:
    return (op.kind is GateKind.U
            and all(abs(p - r) <= tol for p, r in zip(op.params, SX_PARAMS)))


@dataclass(frozen=True)
class CompileReport:
    input_gate_count: int        # ops excluding MEASURE
    output_gate_count: int
    physical_pulse_count: int    # pulse_count() of the output
    folded_rz_count: int
    residual_rz: float           # angle of the (kept or elided) trailing RZ


def pulse_count(circuit: Circuit) -> int:
    """Number of gates needing a physical pulse.

    Every gate except MEASURE needs one, except RZs in tail position
    (followed only by measures): a frame change just before Z-basis
    readout or at the end of the circuit is never executed.
    """
    gates = circuit.gates
    n = len(gates)
    while n > 0 and gates[n - 1].kind is GateKind.RZ:
        n -= 1
    return n


def wrap_angle(a: float) -> float:
    """Fold an angle into [-pi, pi] (IEEE remainder)."""
    return math.remainder(a, math.tau)


def virtual_z_pass(circuit: Circuit, normalize_phases: bool = False
                   ) -> tuple[Circuit, CompileReport]:
    """Fold all RZ gates of a single-qubit circuit into phase offsets.

    Walks the circuit keeping a running offset L: RZ(a) adds a to L and
    is dropped; RY(t) is emitted as U(t, -L, L); U(t, phi, lam) is
    emitted as U(t, -(L+lam), L+lam) and then adds lam + phi to L;
    X flips the sign of L.  A final RZ(L) is appended unless the next
    op is a measurement (elided) or L is zero.

    ``normalize_phases`` folds emitted offsets into [-pi, pi]; this is
    exact for the pulse-form gates (2pi-periodic in the offset) and a
    global sign at most for the trailing RZ.
    """
    if circuit.width != 1:
        raise ValueError("virtual-Z pass supports single-qubit circuits only")

    out: list[GateOp] = []
    offset = 0.0
    folded = 0
    elided = False

    def emit_offset(val: float) -> float:
        return wrap_angle(val) if normalize_phases else val

    for i, op in enumerate(circuit.ops):
        kind = op.kind
        if kind is GateKind.RZ:
            offset += op.params[0]
            folded += 1
        elif kind is GateKind.X:
            out.append(op)
            offset = -offset
        elif kind is GateKind.RY:
            if offset == 0.0:
                out.append(op)
            else:
                eff = emit_offset(offset)
                out.append(u(op.params[0], -eff, eff, op.qubits[0]))
        elif kind is GateKind.U:
            theta, phi, lam = op.params
            eff = emit_offset(offset + lam)
            out.append(u(theta, -eff, eff, op.qubits[0]))
            offset += lam + phi
        elif kind is GateKind.MEASURE:
            elided = offset != 0.0
            out.extend(circuit.ops[i:])
            break
        else:
            raise ValueError(f"virtual-Z pass cannot handle {kind.value}")
    else:
        if offset != 0.0:
            out.append(rz(emit_offset(offset)))

    compiled = Circuit(circuit.width, tuple(out))
    report = CompileReport(
        input_gate_count=len(circuit.gates),
        output_gate_count=len(compiled.gates),
        physical_pulse_count=pulse_count(compiled),
        folded_rz_count=folded,
        residual_rz=emit_offset(offset) if elided or offset != 0.0 else 0.0,
    )
    return compiled, report


# --- native lowering ---------------------------------------------------------

_CONVENTION_CHECKED = False


def _check_native_convention() -> None:
    """Verify the RZ-SX-RZ-SX-RZ angle pattern against gate_matrix once.

    Guards against sign/convention drift: the expansion is only trusted
    after it reproduces randomly drawn U gates up to global phase.
    """
    global _CONVENTION_CHECKED
    if _CONVENTION_CHECKED:
        return
    rng = np.random.Generator(np.random.PCG64(20240917))
    for _ in range(8):
        theta, phi, lam = rng.uniform(-2 * math.pi, 2 * math.pi, 3)
        target = gate_matrix(u(theta, phi, lam))
        got = np.eye(2, dtype=complex)
        for op in _expand_u(theta, phi, lam, 0):
            got = gate_matrix(op) @ got
        if not unitaries_equal_up_to_phase(target, got, 1e-12):
            raise RuntimeError("native lowering convention self-check failed")
    sx_direct = gate_matrix(sx())
    sq = sx_direct @ sx_direct
    if not unitaries_equal_up_to_phase(sq, gate_matrix(x()), 1e-12):
        raise RuntimeError("sqrt(X) convention self-check failed")
    _CONVENTION_CHECKED = True


def _expand_u(theta: float, phi: float, lam: float, qubit: int) -> list[GateOp]:
    """U(theta, phi, lam) as RZ(lam), SX, RZ(theta+pi), SX, RZ(phi+pi)."""
    ops = [rz(lam, qubit), sx(qubit), rz(theta + math.pi, qubit),
           sx(qubit), rz(phi + math.pi, qubit)]
    return [op for op in ops if not (op.kind is GateKind.RZ and op.params[0] == 0.0)]


def lower_to_native(circuit: Circuit) -> Circuit:
    """Rewrite a single-qubit circuit onto {RZ, sqrt(X), X}.

    The total unitary is preserved up to global phase.  Collapses the
    trivial cases: RZ and X pass through, a pulse-form sqrt(X) stays a
    single gate, and a zero-angle U reduces to one RZ.
    """
    if circuit.width != 1:
        raise ValueError("two-qubit lowering is not supported")
    _check_native_convention()

    out: list[GateOp] = []
    for op in circuit.ops:
        kind = op.kind
        if kind in (GateKind.RZ, GateKind.X, GateKind.MEASURE):
            if not (kind is GateKind.RZ and op.params[0] == 0.0):
                out.append(op)
        elif kind is GateKind.RY:
            out.extend(_expand_u(op.params[0], 0.0, 0.0, op.qubits[0]))
        elif kind is GateKind.U:
            theta, phi, lam = op.params
            if is_sx(op):
                out.append(op)
            elif theta == 0.0:
                if phi + lam != 0.0:
                    out.append(rz(phi + lam, op.qubits[0]))
            else:
                out.extend(_expand_u(theta, phi, lam, op.qubits[0]))
        else:
            raise ValueError(f"cannot lower {kind.value}")
    return Circuit(circuit.width, tuple(out))


# --- textual dump ------------------------------------------------------------

def dump_circuit(circuit: Circuit) -> str:
    """One gate per line: kind, angles, qubit indices.

    Angles use repr() so the dump round-trips bit-exactly through
    ``parse_circuit``.
    """
    lines = [f"# nuqsim-circuit width={circuit.width}"]
    for op in circuit.ops:
        fields = [op.kind.value]
        fields += [repr(p) for p in op.params]
        fields += [str(q) for q in op.qubits]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Inverse of ``dump_circuit``."""
    width = None
    ops: list[GateOp] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "width=" in line:
                width = int(line.split("width=")[1].split()[0])
            continue
        tokens = line.split()
        try:
            kind = GateKind(tokens[0])
        except ValueError:
            raise ValueError(f"unknown gate kind {tokens[0]!r}") from None
        from .circuits import N_PARAMS
        n = N_PARAMS[kind]
        params = tuple(float(t) for t in tokens[1:1 + n])
        qubits = tuple(int(t) for t in tokens[1 + n:])
        ops.append(GateOp(kind, qubits, params))
    if width is None:
        width = 1 + max((max(op.qubits) for op in ops), default=0)
    return Circuit(width, tuple(ops))
