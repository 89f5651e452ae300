import warnings

import numpy as np
import pytest

from wgtoffoli import qstate as qs
from wgtoffoli import verify


def test_equal_up_to_phase_trivial_cases():
    eye = np.eye(4)
    assert verify.equal_up_to_phase(eye, -eye)
    assert verify.equal_up_to_phase(eye, 1j * eye)
    assert not verify.equal_up_to_phase(eye, np.diag([1, 1, 1, -1]))


def test_equal_up_to_phase_relation_properties():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = np.exp(0.77j) * a
    c = np.exp(-1.2j) * b
    assert verify.equal_up_to_phase(a, a, tol=0)  # reflexive
    assert verify.equal_up_to_phase(b, a) and verify.equal_up_to_phase(a, b)
    assert verify.equal_up_to_phase(a, c)  # transitive through b


def test_equal_up_to_phase_rejects_zero_target():
    with pytest.raises(ValueError):
        verify.equal_up_to_phase(np.eye(2), np.zeros((2, 2)))


def test_is_local_tensor_product():
    op = qs.kron_all(qs.PAULI_Z, qs.rz(np.pi / 4), qs.PAULI_X)
    verdict = verify.is_local(op)
    assert verdict.is_local
    for values in verdict.schmidt_singular_values:
        assert values[1] <= 1e-12 * values[0]


def test_is_local_detects_cnot():
    op = qs.kron_all(qs.ID2, qs.CNOT)  # CNOT between the two lower wires
    verdict = verify.is_local(op)
    assert not verdict.is_local
    # the cut separating the untouched wire is still rank one
    assert verdict.schmidt_singular_values[0][1] <= 1e-12


def test_process_fidelity_identity_vs_toffoli():
    from wgtoffoli.toffoli import toffoli_matrix

    assert abs(verify.process_fidelity(np.eye(8), np.eye(8)) - 1) < 1e-12
    # trace of the Toffoli is 6, so the fidelity with the identity is (6/8)^2
    got = verify.process_fidelity(np.eye(8), toffoli_matrix())
    assert abs(got - 0.5625) < 1e-12


def test_process_fidelity_warns_on_nonunitary():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        verify.process_fidelity(np.ones((2, 2)), np.eye(2))
    assert any("not unitary" in str(w.message) for w in caught)


def test_unit_scale_restores_unitary_norm():
    scaled = 0.125 * np.eye(8)
    rescaled = verify.unit_scale(scaled)
    assert abs(np.vdot(rescaled, rescaled).real - 8) < 1e-12
