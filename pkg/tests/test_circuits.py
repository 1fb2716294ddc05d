"""Gate constructors, noise channels, and the interaction builder."""

import math

import numpy as np
import pytest

from ctcsim.circuits import (
    CircuitKind,
    CircuitSpec,
    QubitChannel,
    apply_channel,
    build_interaction,
    depolarize,
    gate_failure_channel,
    make_cnot,
    make_cu_xz,
    make_cz,
    make_swap,
)
from ctcsim.qmath import (
    DensityMatrix,
    PureQubit,
    ValidationError,
    bloch_from_density,
    tensor,
)

HH = np.array([1, 0, 0, 0], dtype=complex)
HV = np.array([0, 1, 0, 0], dtype=complex)
VH = np.array([0, 0, 1, 0], dtype=complex)
VV = np.array([0, 0, 0, 1], dtype=complex)


class TestGateConstructors:
    def test_swap_exchanges_rails(self):
        np.testing.assert_allclose(make_swap().mat @ HV, VH, atol=0)
        np.testing.assert_allclose(make_swap().mat @ VH, HV, atol=0)

    def test_cnot_control_is_first_qubit(self):
        np.testing.assert_allclose(make_cnot().mat @ VH, VV, atol=0)
        np.testing.assert_allclose(make_cnot().mat @ HV, HV, atol=0)

    def test_cz_sign_flip_on_vv(self):
        np.testing.assert_allclose(make_cz().mat @ VV, -VV, atol=0)
        for basis in (HH, HV, VH):
            np.testing.assert_allclose(make_cz().mat @ basis, basis, atol=0)

    def test_cu_at_zero_is_cz_like(self):
        np.testing.assert_allclose(
            make_cu_xz(0.0).mat[2:, 2:], np.diag([1.0, -1.0]), atol=1e-15
        )

    def test_cu_at_half_pi_is_cnot(self):
        np.testing.assert_allclose(make_cu_xz(math.pi / 2).mat, make_cnot().mat, atol=1e-15)

    def test_cu_at_quarter_pi_is_controlled_hadamard(self):
        hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        np.testing.assert_allclose(make_cu_xz(math.pi / 4).mat[2:, 2:], hadamard, atol=1e-15)

    @pytest.mark.parametrize("theta", np.linspace(-math.pi / 2, math.pi / 2, 25))
    def test_cu_unitary_and_involutive(self, theta):
        u = make_cu_xz(theta).mat
        np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(u @ u, np.eye(4), atol=1e-12)

    def test_non_unitary_rejected(self):
        from ctcsim.circuits import TwoQubitGate

        with pytest.raises(ValidationError, match="unitarity"):
            TwoQubitGate(np.diag([1.0, 1.0, 1.0, 0.5]).astype(complex))


class TestDepolarize:
    def test_strength_zero_is_identity(self):
        rho = PureQubit(0.8, 0.3).density()
        np.testing.assert_allclose(depolarize(rho, 0.0).mat, rho.mat, atol=0)

    def test_full_strength_gives_maximally_mixed(self):
        h = PureQubit(0.0, 0.0).density()
        np.testing.assert_allclose(depolarize(h, 1.0).mat, np.eye(2) / 2, atol=1e-15)

    def test_half_strength_on_h(self):
        """Bloch z shrinks 1 -> 1/2, i.e. diag(3/4, 1/4); checked against the Kraus form."""
        h = PureQubit(0.0, 0.0).density()
        out = depolarize(h, 0.5)
        np.testing.assert_allclose(out.mat, np.diag([0.75, 0.25]), atol=1e-15)
        sx = np.array([[0, 1], [1, 0]])
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1, -1])
        kraus_form = (1 - 3 * 0.5 / 4) * h.mat + (0.5 / 4) * (
            sx @ h.mat @ sx + sy @ h.mat @ sy + sz @ h.mat @ sz
        )
        np.testing.assert_allclose(out.mat, kraus_form, atol=1e-15)

    def test_bloch_vector_scaling(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = g @ g.conj().T
            rho = DensityMatrix(m / m.trace().real)
            p = rng.uniform(0, 1)
            before = bloch_from_density(rho).as_array()
            after = bloch_from_density(depolarize(rho, p)).as_array()
            np.testing.assert_allclose(after, (1 - p) * before, atol=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            depolarize(PureQubit(0.0, 0.0).density(), 1.2)


class TestGateFailureChannel:
    def test_completeness_across_strength_grid(self):
        gate = make_cu_xz(math.pi / 4)
        for eps in np.linspace(0.0, 1.0, 101):
            ch = gate_failure_channel(gate, float(eps))
            acc = sum(w * op.conj().T @ op for w, op in ch.kraus)
            assert np.abs(acc - np.eye(4)).max() <= 1e-10

    def test_zero_failure_is_pure_unitary(self):
        ch = gate_failure_channel(make_cu_xz(0.3), 0.0)
        assert len(ch.kraus) == 1 and ch.kraus[0][0] == 1.0

    def test_certain_failure_is_identity_channel(self):
        ch = gate_failure_channel(make_cu_xz(0.3), 1.0)
        assert len(ch.kraus) == 1
        np.testing.assert_allclose(ch.kraus[0][1], np.eye(4), atol=0)

    def test_half_failure_two_term_expansion(self):
        """eps=1/2 on |V>|H>: even mixture of the original and the rotated target."""
        gate = make_cu_xz(math.pi / 4)
        vh = DensityMatrix(tensor(PureQubit(math.pi).density().mat,
                                  PureQubit(0.0).density().mat))
        out = apply_channel(gate_failure_channel(gate, 0.5), vh)
        plus_vec = gate.mat[2:, 2:] @ np.array([1.0, 0.0])  # Hadamard |H>
        plus = np.outer(plus_vec, plus_vec.conj())
        expected = 0.5 * vh.mat + 0.5 * tensor(
            PureQubit(math.pi).density().mat, plus
        )
        np.testing.assert_allclose(out.mat, expected, atol=1e-14)

    def test_third_failure_direct_sum(self):
        gate = make_cu_xz(math.pi / 4)
        vh = DensityMatrix(np.outer(np.array([0, 0, 1, 0.0]), np.array([0, 0, 1, 0.0])))
        out = apply_channel(gate_failure_channel(gate, 1 / 3), vh)
        expected = (2 / 3) * gate.mat @ vh.mat @ gate.mat.conj().T + (1 / 3) * vh.mat
        np.testing.assert_allclose(out.mat, expected, atol=1e-14)


class TestApplyChannel:
    def test_identity_channel(self):
        ch = QubitChannel(((1.0, np.eye(4, dtype=complex)),))
        bell = DensityMatrix.from_state_vector(np.array([1, 0, 0, 1]) / math.sqrt(2))
        np.testing.assert_allclose(apply_channel(ch, bell).mat, bell.mat, atol=0)

    def test_pure_unitary_channel(self):
        u = make_swap().mat
        ch = QubitChannel(((1.0, u),))
        rho = DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex))
        np.testing.assert_allclose(apply_channel(ch, rho).mat, u @ rho.mat @ u.conj().T)

    def test_trace_preserved(self):
        rng = np.random.default_rng(67)
        ch = gate_failure_channel(make_cu_xz(0.9), 0.37)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g @ g.conj().T
        rho = DensityMatrix(m / m.trace().real)
        assert abs(apply_channel(ch, rho).mat.trace() - 1) <= 1e-12

    def test_incomplete_channel_rejected(self):
        with pytest.raises(ValidationError, match="completeness"):
            QubitChannel(((0.5, np.eye(4, dtype=complex)),))


class TestBuildInteraction:
    def test_swap_cnot_is_single_kraus(self):
        ch = build_interaction(CircuitSpec(kind=CircuitKind.SWAP_CNOT))
        assert len(ch.kraus) == 1
        np.testing.assert_allclose(ch.kraus[0][1], make_swap().mat @ make_cnot().mat)

    def test_swap_then_cu_gate_order(self):
        ch = build_interaction(
            CircuitSpec(kind=CircuitKind.SWAP_THEN_CU, theta_xz=math.pi / 4)
        )
        assert len(ch.kraus) == 1
        np.testing.assert_allclose(
            ch.kraus[0][1], make_cu_xz(math.pi / 4).mat @ make_swap().mat
        )

    def test_full_gate_noise_leaves_pure_swap(self):
        ch = build_interaction(
            CircuitSpec(kind=CircuitKind.SWAP_THEN_CU, theta_xz=math.pi / 4, gate_noise=1.0)
        )
        assert len(ch.kraus) == 1
        np.testing.assert_allclose(ch.kraus[0][1], make_swap().mat)

    def test_noisy_channel_weights(self):
        ch = build_interaction(
            CircuitSpec(kind=CircuitKind.SWAP_THEN_CU, theta_xz=0.1, gate_noise=0.25)
        )
        assert [w for w, _ in ch.kraus] == [0.75, 0.25]

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            CircuitSpec(kind=CircuitKind.SWAP_THEN_CU, theta_xz=2.0)
        with pytest.raises(ValidationError):
            CircuitSpec(kind=CircuitKind.SWAP_CNOT, gate_noise=-0.1)
        with pytest.raises(ValidationError):
            CircuitSpec(kind=CircuitKind.SWAP_CNOT, input_noise=1.01)
