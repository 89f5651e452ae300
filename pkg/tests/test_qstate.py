import numpy as np
import pytest

from wgtoffoli import qstate as qs


def test_plus_state_amplitudes():
    for n in (1, 2, 6):
        state = qs.plus_state(n)
        np.testing.assert_allclose(state.amplitudes, np.full(2**n, 2 ** (-n / 2)))
        assert abs(state.norm_sq - 1) < 1e-12


@pytest.mark.parametrize("n", [0, 13, -1])
def test_plus_state_range(n):
    with pytest.raises(ValueError):
        qs.plus_state(n)


def test_apply_single_hadamard():
    out = qs.apply_single(qs.basis_state(1, 0), 0, qs.HADAMARD)
    np.testing.assert_allclose(out.amplitudes, qs.KET_PLUS, atol=1e-15)


def test_apply_single_rz_phase():
    # diag(1, e^{-i a}) on |1> for a = pi/2 gives amplitude -i
    out = qs.apply_single(qs.basis_state(1, 1), 0, qs.rz(-np.pi / 2))
    np.testing.assert_allclose(out.amplitudes, [0, -1j], atol=1e-15)


def test_apply_single_x_fixes_plus():
    plus = qs.plus_state(1)
    out = qs.apply_single(plus, 0, qs.PAULI_X)
    np.testing.assert_allclose(out.amplitudes, plus.amplitudes, atol=1e-15)


def test_qubit_zero_is_least_significant():
    # X on qubit 0 of a 2-qubit register maps |00> to |01> (index 1)
    out = qs.apply_single(qs.basis_state(2, 0), 0, qs.PAULI_X)
    np.testing.assert_allclose(out.amplitudes, [0, 1, 0, 0], atol=1e-15)


@pytest.mark.parametrize(
    "theta,expected",
    [(np.pi, -1), (np.pi / 2, 1j)],
)
def test_cz_theta_on_11(theta, expected):
    out = qs.apply_cz_theta(qs.basis_state(2, 3), 0, 1, theta)
    np.testing.assert_allclose(out.amplitudes[3], expected, atol=1e-15)


def test_cz_theta_on_plus_plus():
    theta = 0.7231
    out = qs.apply_cz_theta(qs.plus_state(2), 0, 1, theta)
    np.testing.assert_allclose(
        out.amplitudes, np.array([1, 1, 1, np.exp(1j * theta)]) / 2, atol=1e-15
    )


def test_cz_theta_symmetry_and_composition():
    rng = np.random.default_rng(3)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = qs.StateVector(3, amps / np.linalg.norm(amps))
    a, b = 0.311, 1.62
    left = qs.apply_cz_theta(qs.apply_cz_theta(state, 0, 2, a), 2, 0, b)
    right = qs.apply_cz_theta(state, 0, 2, a + b)
    np.testing.assert_allclose(left.amplitudes, right.amplitudes, atol=1e-12)


def test_cz_theta_rejects_equal_qubits():
    with pytest.raises(ValueError):
        qs.apply_cz_theta(qs.plus_state(2), 1, 1, np.pi)


def test_project_plus_factor():
    state = qs.StateVector(2, np.kron(np.array([0.6, 0.8]), qs.KET_PLUS))
    out = qs.project(state, 0, qs.KET_PLUS)
    np.testing.assert_allclose(out.amplitudes, [0.6, 0.8], atol=1e-15)
    assert abs(out.norm_sq - 1) < 1e-12


def test_project_orthogonal_gives_zero():
    out = qs.project(qs.basis_state(1, 0), 0, qs.KET_ONE)
    assert out.num_qubits == 0
    assert out.norm_sq == 0


def test_project_two_qubit_graph_state():
    # (|0+> + |1->)/sqrt(2): project qubit 0 onto |0> leaves |+>/sqrt(2)
    amps = np.array([0.5, 0.5, 0.5, -0.5])
    out = qs.project(qs.StateVector(2, amps), 0, qs.KET_ZERO)
    np.testing.assert_allclose(out.amplitudes, qs.KET_PLUS / np.sqrt(2), atol=1e-15)
    assert abs(out.norm_sq - 0.5) < 1e-12


def test_project_completeness():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    state = qs.StateVector(4, amps)
    total = sum(qs.project(state, 2, ket).norm_sq for ket in (qs.KET_PLUS, qs.KET_MINUS))
    assert abs(total - state.norm_sq) < 1e-12


def test_unitaries_preserve_norm():
    rng = np.random.default_rng(5)
    state = qs.plus_state(4)
    for _ in range(20):
        mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        unitary, _ = np.linalg.qr(mat)
        state = qs.apply_single(state, int(rng.integers(4)), unitary)
        state = qs.apply_cz_theta(state, 0, 3, float(rng.uniform(0, 6)))
    assert abs(state.norm_sq - 1) < 1e-12


def test_apply_operator_target_order():
    # CNOT with targets (control, target): control is the matrix MSB
    state = qs.basis_state(2, 2)  # qubit 1 set
    out = qs.apply_operator(state, (1, 0), qs.CNOT)
    np.testing.assert_allclose(out.amplitudes, [0, 0, 0, 1], atol=1e-15)


def test_reorder_qubits_permutation():
    state = qs.basis_state(3, 0b101)  # qubit0=1, qubit1=0, qubit2=1
    out = qs.reorder_qubits(state, (1, 0, 2))  # new qubit0 = old qubit1
    assert np.argmax(np.abs(out.amplitudes)) == 0b110


def test_reconstruct_hadamard():
    op = qs.reconstruct_operator(lambda s: qs.apply_single(s, 0, qs.HADAMARD), 1)
    np.testing.assert_allclose(op, qs.HADAMARD, atol=1e-15)


def test_reconstruct_cz():
    op = qs.reconstruct_operator(lambda s: qs.apply_cz_theta(s, 0, 1, np.pi), 2)
    np.testing.assert_allclose(op, np.diag([1, 1, 1, -1]), atol=1e-15)


def test_x_propagation_identity():
    # CZ(theta) (X x I) = (X x Rz(theta)) CZ(-theta) as 4x4 matrices
    rng = np.random.default_rng(17)
    for theta in rng.uniform(0, 2 * np.pi, size=20):
        lhs = np.diag([1, 1, 1, np.exp(1j * theta)]) @ np.kron(qs.PAULI_X, qs.ID2)
        rhs = np.kron(qs.PAULI_X, qs.rz(theta)) @ np.diag([1, 1, 1, np.exp(-1j * theta)])
        assert np.max(np.abs(lhs - rhs)) <= 1e-12
