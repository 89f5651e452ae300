from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgtoffoli import mbqc
from wgtoffoli import qstate as qs
from wgtoffoli.graphstate import WeightedGraph, build_state_with_input

MAXIMAL = Fraction(1)


def random_state(rng, n):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return qs.StateVector(n, amps / np.linalg.norm(amps))


# --- bases ---


def test_plain_basis_kets():
    plus, minus = mbqc.basis_states(mbqc.MeasurementBasis())
    np.testing.assert_allclose(plus, qs.KET_PLUS, atol=1e-15)
    np.testing.assert_allclose(minus, qs.KET_MINUS, atol=1e-15)


def test_hadamard_basis_kets():
    plus, minus = mbqc.basis_states(mbqc.MeasurementBasis(hadamard=True))
    np.testing.assert_allclose(plus, qs.KET_ZERO, atol=1e-15)
    np.testing.assert_allclose(minus, qs.KET_ONE, atol=1e-15)


def test_basis_orthonormal():
    rng = np.random.default_rng(2)
    for alpha in rng.uniform(0, 2 * np.pi, size=10):
        plus, minus = mbqc.basis_states(mbqc.MeasurementBasis(alpha, hadamard=True))
        assert abs(np.vdot(plus, plus) - 1) < 1e-12
        assert abs(np.vdot(plus, minus)) < 1e-12


# --- single-wire teleportation ---


def teleport_setup(rng):
    psi = random_state(rng, 1)
    graph = WeightedGraph(2, [(0, 1, MAXIMAL)])
    return psi, build_state_with_input(graph, psi, (0,))


def test_teleport_outcome_zero():
    rng = np.random.default_rng(31)
    psi, state = teleport_setup(rng)
    pattern = mbqc.Pattern([mbqc.PatternStep(0, mbqc.MeasurementBasis())])
    prob, out = mbqc.run_branch(state, pattern, {0: 0})
    expected = qs.HADAMARD @ psi.amplitudes / np.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)
    assert abs(prob - 0.5) < 1e-12


def test_teleport_outcome_one():
    rng = np.random.default_rng(32)
    psi, state = teleport_setup(rng)
    pattern = mbqc.Pattern([mbqc.PatternStep(0, mbqc.MeasurementBasis())])
    prob, out = mbqc.run_branch(state, pattern, {0: 1})
    expected = qs.PAULI_X @ qs.HADAMARD @ psi.amplitudes / np.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)
    assert abs(prob - 0.5) < 1e-12


# --- the three-qubit gadget ---


def gadget_branch(psi, theta, outcome, hadamard=True):
    chain = WeightedGraph(3, [(0, 1, MAXIMAL), (1, 2, MAXIMAL)])
    state = build_state_with_input(chain, psi, (2, 0))
    basis = mbqc.MeasurementBasis(theta / 2, hadamard=hadamard)
    pattern = mbqc.Pattern([mbqc.PatternStep(1, basis)])
    return mbqc.run_branch(state, pattern, {1: outcome})


def gadget_expected(psi, theta, outcome):
    gate = np.kron(qs.rz(-theta / 2), qs.rz(-theta / 2)) @ np.diag(
        [1, 1, 1, np.exp(1j * theta)]
    )
    byproduct = np.kron(qs.PAULI_Z, qs.PAULI_Z) if outcome else np.eye(4)
    return byproduct @ gate @ psi.amplitudes / np.sqrt(2)


def test_gadget_identity_random_angles():
    rng = np.random.default_rng(41)
    for theta in rng.uniform(0, 2 * np.pi, size=20):
        psi = random_state(rng, 2)
        for outcome in (0, 1):
            prob, out = gadget_branch(psi, theta, outcome)
            np.testing.assert_allclose(
                out.amplitudes, gadget_expected(psi, theta, outcome), atol=1e-10
            )
            assert abs(prob - 0.5) < 1e-10


def test_gadget_needs_hadamard_composed_kets():
    # projecting onto the bare tilted kets does not realise the phase gate
    rng = np.random.default_rng(42)
    theta = 1.234
    psi = random_state(rng, 2)
    _, out = gadget_branch(psi, theta, 0, hadamard=False)
    expected = gadget_expected(psi, theta, 0)
    overlap = abs(np.vdot(expected, out.amplitudes)) / (
        np.linalg.norm(expected) * np.linalg.norm(out.amplitudes)
    )
    assert overlap < 0.999


def test_correction_absorption():
    # measuring with absorbed R equals applying R first, branch by branch
    rng = np.random.default_rng(43)
    correction, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    psi = random_state(rng, 2)
    chain = WeightedGraph(3, [(0, 1, MAXIMAL), (1, 2, MAXIMAL)])
    state = build_state_with_input(chain, psi, (2, 0))
    basis = mbqc.MeasurementBasis(Fraction(1, 4), hadamard=True)
    absorbed = mbqc.MeasurementBasis(Fraction(1, 4), hadamard=True, absorbed=correction)
    for outcome in (0, 1):
        pattern_a = mbqc.Pattern([mbqc.PatternStep(1, absorbed)])
        _, out_a = mbqc.run_branch(state, pattern_a, {1: outcome})
        pattern_b = mbqc.Pattern([mbqc.PatternStep(1, basis)])
        _, out_b = mbqc.run_branch(
            qs.apply_single(state, 1, correction), pattern_b, {1: outcome}
        )
        np.testing.assert_allclose(out_a.amplitudes, out_b.amplitudes, atol=1e-12)


# --- branch enumeration ---


def test_enumerate_keeps_zero_branches():
    pattern = mbqc.Pattern([mbqc.PatternStep(0, mbqc.MeasurementBasis())])
    branches = mbqc.enumerate_branches(qs.plus_state(1), pattern)
    assert [(o[0], round(p, 12)) for o, p, _ in branches] == [(0, 1.0), (1, 0.0)]


def test_enumerate_probabilities_sum_to_one():
    rng = np.random.default_rng(44)
    state = build_state_with_input(
        WeightedGraph(4, [(0, 1, MAXIMAL), (1, 2, Fraction(1, 2)), (2, 3, MAXIMAL)]),
        random_state(rng, 1),
        (0,),
    )
    pattern = mbqc.Pattern(
        [
            mbqc.PatternStep(0, mbqc.MeasurementBasis()),
            mbqc.PatternStep(1, mbqc.MeasurementBasis(Fraction(1, 4))),
            mbqc.PatternStep(2, mbqc.MeasurementBasis(hadamard=True)),
        ]
    )
    branches = mbqc.enumerate_branches(state, pattern)
    assert len(branches) == 8
    assert abs(sum(p for _, p, _ in branches) - 1) < 1e-10


def test_branch_probability_order_invariant():
    rng = np.random.default_rng(45)
    state = random_state(rng, 3)
    steps = [mbqc.PatternStep(v, mbqc.COMPUTATIONAL) for v in range(3)]
    base = {
        tuple(sorted(o.items())): p
        for o, p, _ in mbqc.enumerate_branches(state, mbqc.Pattern(steps))
    }
    flipped = {
        tuple(sorted(o.items())): p
        for o, p, _ in mbqc.enumerate_branches(state, mbqc.Pattern(steps[::-1]))
    }
    for key, p in base.items():
        assert abs(flipped[key] - p) < 1e-12


def test_pattern_rejects_duplicate_vertices():
    with pytest.raises(ValueError):
        mbqc.Pattern([mbqc.PatternStep(1, mbqc.COMPUTATIONAL)] * 2)


def test_enumerate_rejects_too_many_measurements():
    steps = [mbqc.PatternStep(v, mbqc.COMPUTATIONAL) for v in range(17)]
    with pytest.raises(ValueError):
        mbqc.enumerate_branches(qs.plus_state(2), mbqc.Pattern(steps))


def test_adaptive_basis_sees_earlier_outcomes():
    seen = {}

    def resolve(outcomes):
        seen.update(outcomes)
        return mbqc.COMPUTATIONAL

    pattern = mbqc.Pattern(
        [
            mbqc.PatternStep(0, mbqc.COMPUTATIONAL),
            mbqc.PatternStep(1, resolve),
        ]
    )
    mbqc.run_branch(qs.plus_state(2), pattern, {0: 1, 1: 0})
    assert seen == {0: 1}


# --- frames ---


def test_z_squared_is_identity():
    z = mbqc.make_word(z=1)
    frame = mbqc.frame_compose(
        mbqc.ByproductOperator(("t",), {"t": z}),
        mbqc.ByproductOperator(("t",), {"t": z}),
    )
    assert frame.words["t"] == mbqc.WireWord()
    assert frame.global_phase == 1


def test_rz_quarters_accumulate_to_z():
    # Rz(-pi/2) twice is Rz(-pi) = Z up to phase; words canonicalise k to 0..3
    word = mbqc.make_word(k=6)
    product, phase = mbqc._word_mul(word, word)
    matrix = phase * product.matrix()
    np.testing.assert_allclose(matrix, qs.rz(-np.pi), atol=1e-12)
    assert product.z == 1 and product.k == 0


def test_x_rz_commutation():
    x = mbqc.make_word(x=1)
    r = mbqc.make_word(k=3)
    left, lp = mbqc._word_mul(x, r)
    right, rp = mbqc._word_mul(r, x)
    np.testing.assert_allclose(lp * left.matrix(), qs.PAULI_X @ r.matrix(), atol=1e-12)
    np.testing.assert_allclose(rp * right.matrix(), r.matrix() @ qs.PAULI_X, atol=1e-12)


word_strategy = st.builds(
    mbqc.make_word,
    x=st.integers(0, 1),
    z=st.integers(0, 1),
    k=st.integers(0, 7),
)


@settings(max_examples=100, deadline=None)
@given(a0=word_strategy, a1=word_strategy, b0=word_strategy, b1=word_strategy)
def test_frame_compose_matches_matrix_product(a0, a1, b0, b1):
    wires = ("c1", "t")
    frame_a = mbqc.ByproductOperator(wires, {"c1": a0, "t": a1})
    frame_b = mbqc.ByproductOperator(wires, {"c1": b0, "t": b1})
    composed = mbqc.frame_to_operator(mbqc.frame_compose(frame_a, frame_b))
    product = mbqc.frame_to_operator(frame_a) @ mbqc.frame_to_operator(frame_b)
    np.testing.assert_allclose(composed, product, atol=1e-12)


def test_frame_compose_with_nonlocal_factor():
    wires = ("c1", "c2", "t")
    factor = qs.kron_all(qs.ID2, qs.CNOT)
    frame_a = mbqc.ByproductOperator(
        wires, {"c1": mbqc.make_word(z=1)}, nonlocal_factor=factor
    )
    frame_b = mbqc.ByproductOperator(wires, {"t": mbqc.make_word(x=1, k=2)})
    for left, right in ((frame_a, frame_b), (frame_b, frame_a)):
        composed = mbqc.frame_to_operator(mbqc.frame_compose(left, right))
        product = mbqc.frame_to_operator(left) @ mbqc.frame_to_operator(right)
        np.testing.assert_allclose(composed, product, atol=1e-12)


def test_frame_compose_wire_mismatch():
    with pytest.raises(ValueError):
        mbqc.frame_compose(
            mbqc.ByproductOperator(("a",)), mbqc.ByproductOperator(("b",))
        )


def test_frame_to_operator_single_z():
    frame = mbqc.ByproductOperator(
        ("c1", "c2", "t"), {"c1": mbqc.make_word(z=1)}
    )
    expected = qs.kron_all(qs.PAULI_Z, qs.ID2, qs.ID2)
    np.testing.assert_allclose(mbqc.frame_to_operator(frame), expected, atol=1e-15)
