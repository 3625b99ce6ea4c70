"""Virtual-Z folding, native lowering, pulse counting, textual dump."""
import math

import numpy as np
import pytest

from nuqsim.circuits import Circuit, GateKind, cnot, measure, ry, rz, u, x
from nuqsim.compiler import (dump_circuit, is_sx, lower_to_native,
                             parse_circuit, pulse, pulse_count, sx,
                             virtual_z_pass, wrap_angle)
from nuqsim.simulator import (circuit_unitary, gate_matrix, probabilities,
                              run, unitaries_equal_up_to_phase)

RNG = np.random.Generator(np.random.PCG64(99))

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])


def random_1q_circuit(n_ops, kinds=("X", "RY", "RZ", "U"), with_measure=False):
    ops = []
    for _ in range(n_ops):
        kind = kinds[int(RNG.integers(len(kinds)))]
        a, b, c = RNG.uniform(-2 * math.pi, 2 * math.pi, 3)
        ops.append({"X": x(), "RY": ry(a), "RZ": rz(a),
                    "U": u(a, b, c)}[kind])
    if with_measure:
        ops.append(measure(0))
    return Circuit(1, tuple(ops))


# --- pulse-form gate ----------------------------------------------------------

def test_pulse_matches_axis_angle_rotation():
    """U(t, -f, f) vs expm of the equatorial axis (sin f, cos f, 0).

    A zero-phase pulse must be a plain Y rotation, which pins the axis
    convention.
    """
    from scipy.linalg import expm
    for _ in range(300):
        theta, phi = RNG.uniform(-2 * math.pi, 2 * math.pi, 2)
        m = gate_matrix(pulse(theta, phi))
        axis = math.sin(phi) * PAULI_X + math.cos(phi) * PAULI_Y
        assert np.max(np.abs(m - expm(-0.5j * theta * axis))) < 1e-12


# --- virtual-Z pass -----------------------------------------------------------

def test_fold_produces_slab_pulse_sequence():
    """Alternating RY/RZ layers fold into the cumulative-offset U gates."""
    t1, t2, f1, f2 = 0.31, 0.87, 1.21, 0.44
    circ = Circuit(1, (ry(-2 * t1), rz(f1), ry(2 * t1),
                       ry(-2 * t2), rz(f2), ry(2 * t2)))
    out, report = virtual_z_pass(circ)
    kinds = [op.kind for op in out.ops]
    assert kinds == [GateKind.RY, GateKind.U, GateKind.U, GateKind.U,
                     GateKind.RZ]
    assert out.ops[0].params == (-2 * t1,)
    assert out.ops[1].params == (2 * t1, -f1, f1)
    assert out.ops[2].params == (-2 * t2, -f1, f1)
    assert out.ops[3].params == (2 * t2, -(f1 + f2), f1 + f2)
    assert out.ops[4].params == (f1 + f2,)
    assert report.folded_rz_count == 2
    assert report.residual_rz == f1 + f2


def test_no_rz_circuit_unchanged():
    circ = Circuit(1, (x(), ry(0.5), ry(-1.2), measure(0)))
    out, report = virtual_z_pass(circ)
    assert out == circ
    assert report.folded_rz_count == 0
    assert report.residual_rz == 0.0


def test_fold_exact_with_trailing_rz():
    """RY/RZ/X inputs: output unitary equals input exactly (RZ kept)."""
    for _ in range(100):
        circ = random_1q_circuit(int(RNG.integers(1, 21)),
                                 kinds=("X", "RY", "RZ"))
        out, _ = virtual_z_pass(circ)
        diff = np.max(np.abs(circuit_unitary(out) - circuit_unitary(circ)))
        assert diff < 1e-12


def test_fold_general_u_up_to_phase():
    for _ in range(100):
        circ = random_1q_circuit(int(RNG.integers(1, 21)))
        out, _ = virtual_z_pass(circ)
        assert unitaries_equal_up_to_phase(circuit_unitary(out),
                                           circuit_unitary(circ), 1e-12)


def test_pass_soundness_probabilities():
    for _ in range(100):
        circ = random_1q_circuit(int(RNG.integers(1, 15)), with_measure=True)
        out, _ = virtual_z_pass(circ)
        p_in = probabilities(run(circ)[0], 0)
        p_out = probabilities(run(out)[0], 0)
        assert abs(p_in[0] - p_out[0]) < 1e-12


def test_trailing_rz_elided_before_measure():
    circ = Circuit(1, (ry(0.4), rz(0.9), ry(1.0), measure(0)))
    out, report = virtual_z_pass(circ)
    assert out.ops[-1].kind is GateKind.MEASURE
    assert all(op.kind is not GateKind.RZ for op in out.ops)
    assert report.residual_rz == 0.9


def test_x_flips_pending_offset():
    circ = Circuit(1, (rz(0.8), x(), ry(0.5)))
    out, _ = virtual_z_pass(circ)
    assert [op.kind for op in out.ops] == [GateKind.X, GateKind.U, GateKind.RZ]
    assert out.ops[1].params == (0.5, 0.8, -0.8)   # offset sign flipped by X
    diff = np.max(np.abs(circuit_unitary(out) - circuit_unitary(circ)))
    assert diff < 1e-12


def test_idempotent_pulse_count():
    for _ in range(50):
        circ = random_1q_circuit(int(RNG.integers(1, 15)), with_measure=True)
        once, _ = virtual_z_pass(circ)
        twice, _ = virtual_z_pass(once)
        assert pulse_count(once) == pulse_count(twice)


def test_normalized_phases_equivalent():
    circ = Circuit(1, tuple(op for k in range(12)
                            for op in (rz(2.1 + k), ry(0.3 * k + 0.1))))
    plain, _ = virtual_z_pass(circ)
    norm, _ = virtual_z_pass(circ, normalize_phases=True)
    for op in norm.ops:
        # normalization applies to phase offsets, not rotation angles
        if op.kind is GateKind.U:
            offsets = op.params[1:]
        elif op.kind is GateKind.RZ:
            offsets = op.params
        else:
            offsets = ()
        for p in offsets:
            assert -math.pi <= p <= math.pi
    assert unitaries_equal_up_to_phase(circuit_unitary(norm),
                                       circuit_unitary(plain), 1e-12)


def test_wrap_angle_mod_2pi():
    for a in RNG.uniform(-50, 50, 200):
        w = wrap_angle(a)
        assert -math.pi <= w <= math.pi
        assert abs(math.remainder(w - a, math.tau)) < 1e-12


def test_pass_rejects_two_qubit():
    circ = Circuit(2, (cnot(0, 1),))
    with pytest.raises(ValueError):
        virtual_z_pass(circ)


# --- pulse counting -----------------------------------------------------------

def test_pulse_count_empty():
    assert pulse_count(Circuit(1)) == 0


def test_pulse_count_slab_circuits():
    """Uncompiled 3N+1 pulses vs 2N+1 after folding (init X included)."""
    for n in (1, 2, 5, 10):
        ops = [x()]
        for k in range(n):
            ops += [ry(-0.3 - k), rz(0.7 + k), ry(0.3 + k)]
        ops.append(measure(0))
        raw = Circuit(1, tuple(ops))
        compiled, report = virtual_z_pass(raw)
        assert pulse_count(raw) == 3 * n + 1
        assert pulse_count(compiled) == 2 * n + 1
        assert report.physical_pulse_count == 2 * n + 1
        assert report.input_gate_count == 3 * n + 1


def test_trailing_rz_is_free():
    assert pulse_count(Circuit(1, (ry(0.3), rz(1.0)))) == 1
    assert pulse_count(Circuit(1, (ry(0.3), rz(1.0), rz(0.2), measure(0)))) == 1
    assert pulse_count(Circuit(1, (rz(1.0), ry(0.3)))) == 2


# --- native lowering ----------------------------------------------------------

def test_lower_rz_unchanged():
    out = lower_to_native(Circuit(1, (rz(0.77),)))
    assert out.ops == (rz(0.77),)


def test_lower_sx_collapses():
    out = lower_to_native(Circuit(1, (sx(),)))
    assert len(out.ops) == 1 and is_sx(out.ops[0])
    m = gate_matrix(out.ops[0])
    # equals the principal sqrt(X) matrix up to global phase, and squares to X
    sqrt_x = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
    assert unitaries_equal_up_to_phase(m, sqrt_x, 1e-12)
    assert np.max(np.abs(np.exp(1j * math.pi / 4) * m - sqrt_x)) < 1e-12
    assert unitaries_equal_up_to_phase(m @ m, gate_matrix(x()), 1e-12)


def test_lower_zero_theta_becomes_rz():
    out = lower_to_native(Circuit(1, (u(0.0, 0.4, 0.3),)))
    assert out.ops == (rz(0.7),)


def test_lower_random_circuits_equivalent():
    native_kinds = {GateKind.RZ, GateKind.X, GateKind.MEASURE}
    for _ in range(200):
        circ = random_1q_circuit(int(RNG.integers(1, 9)), with_measure=True)
        out = lower_to_native(circ)
        for op in out.ops:
            assert op.kind in native_kinds or is_sx(op)
        assert unitaries_equal_up_to_phase(circuit_unitary(out),
                                           circuit_unitary(circ), 1e-12)


def test_lower_rejects_cnot():
    with pytest.raises(ValueError):
        lower_to_native(Circuit(2, (cnot(0, 1),)))


# --- textual dump -------------------------------------------------------------

def test_dump_parse_round_trip():
    circuits = [
        Circuit(1, (x(), ry(0.123456789), rz(-2.5), u(0.1, -0.2, 0.3),
                    measure(0))),
        Circuit(2, (ry(1e-17, 0), cnot(0, 1), ry(-math.pi, 1), measure(1))),
        Circuit(2),
    ]
    for circ in circuits:
        text = dump_circuit(circ)
        back = parse_circuit(text)
        assert back == circ
        assert dump_circuit(back) == text


def test_parse_infers_width():
    text = "RY 0.5 0\nCNOT 0 1\n"
    circ = parse_circuit(text)
    assert circ.width == 2
    assert circ.ops == (ry(0.5, 0), cnot(0, 1))


def test_parse_rejects_unknown_kind():
    with pytest.raises(ValueError):
        parse_circuit("HADAMARD 0\n")
