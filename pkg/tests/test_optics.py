from fractions import Fraction

import numpy as np
import pytest

from wgtoffoli import optics
from wgtoffoli import qstate as qs
from wgtoffoli.acceptance import _one_shot_probability, _quoted_fixture
from wgtoffoli.graphstate import WeightedGraph, build_state
from wgtoffoli.toffoli import ResourceVariant, build_resource

H = np.array([1, 0], dtype=complex)
V = np.array([0, 1], dtype=complex)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def tilted(theta):
    return np.array([1, np.exp(1j * theta)], dtype=complex) / np.sqrt(2)


# --- sources ---


def test_pdc_pair_extremes():
    np.testing.assert_allclose(optics.pdc_pair(Fraction(0)).amplitudes, [1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(optics.pdc_pair(Fraction(2)).amplitudes, [0, 0, 0, 1], atol=1e-15)


def test_pdc_pair_at_pi():
    expected = np.array([(1 - 1j) / 2, 0, 0, (1 + 1j) / 2])
    np.testing.assert_allclose(optics.pdc_pair(Fraction(1)).amplitudes, expected, atol=1e-15)


def test_source_amplitudes_normalised():
    for gamma in (Fraction(1, 3), Fraction(1, 2), 2.1717):
        plus, minus_amp = optics.source_amplitudes(gamma)
        assert abs(abs(plus) ** 2 + abs(minus_amp) ** 2 - 1) < 1e-14


@pytest.mark.parametrize("gamma", [Fraction(1), Fraction(1, 2), Fraction(0)])
def test_weighted_pair_matches_graph_builder(gamma):
    pair = optics.to_weighted_pair(optics.pdc_pair(gamma), gamma)
    if gamma == 0:
        expected = qs.kron_all(qs.KET_PLUS, qs.KET_PLUS)
    else:
        expected = build_state(WeightedGraph(2, [(0, 1, gamma)])).amplitudes
    overlap = abs(np.vdot(expected, pair.amplitudes))
    assert abs(overlap - 1) < 1e-12


def test_weighted_pair_random_angles():
    rng = np.random.default_rng(71)
    for gamma in rng.uniform(0.05, 2 * np.pi - 0.05, size=20):
        pair = optics.to_weighted_pair(optics.pdc_pair(float(gamma)), float(gamma))
        expected = build_state(WeightedGraph(2, [(0, 1, float(gamma))])).amplitudes
        assert abs(abs(np.vdot(expected, pair.amplitudes)) - 1) < 1e-12


# --- fuse ---


def fresh_register(amplitudes, labels):
    state = qs.from_amplitudes(amplitudes)
    return optics.PhotonRegister(list(labels), state)


def test_fuse_on_hh():
    register = fresh_register(np.kron(H, H), (1, 2))  # qubit1=mode2, qubit0=mode1
    fused = optics.fuse(register, 1, 2, h_on=1)
    expected = np.kron(H, qs.KET_PLUS)  # H still on mode 2, |+> on mode 1
    np.testing.assert_allclose(fused.state.amplitudes, expected, atol=1e-12)
    assert abs(fused.cumulative_prob - 1) < 1e-12


def test_fuse_on_plus_plus():
    register = fresh_register(np.kron(qs.KET_PLUS, qs.KET_PLUS), (1, 2))
    fused = optics.fuse(register, 1, 2, h_on=2)
    # projector keeps (|HH> + |VV>)/sqrt(2); H on mode 2 gives the 2-vertex graph
    expected = np.array([0.5, 0.5, 0.5, -0.5])
    np.testing.assert_allclose(fused.state.amplitudes, expected, atol=1e-12)
    assert abs(fused.cumulative_prob - 0.5) < 1e-12


def test_fuse_rejects_outside_h_target():
    register = fresh_register(np.kron(H, H), (1, 2))
    with pytest.raises(optics.RecipeError):
        optics.fuse(register, 1, 2, h_on=7)


def test_fuse_zero_support():
    register = fresh_register(np.kron(H, V), (1, 2))
    with pytest.raises(optics.RecipeError):
        optics.fuse(register, 1, 2, h_on=1)


def test_fuse_repeat_after_undoing_h_changes_nothing():
    rng = np.random.default_rng(72)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    register = fresh_register(amps / np.linalg.norm(amps), (1, 2))
    once = optics.fuse(register, 1, 2, h_on=2)
    undone = optics.PhotonRegister(
        list(once.labels),
        qs.apply_single(once.state, once.qubit_of(2), qs.HADAMARD),
        once.cumulative_prob,
    )
    twice = optics.fuse(undone, 1, 2, h_on=2)
    np.testing.assert_allclose(twice.state.amplitudes, once.state.amplitudes, atol=1e-12)
    assert abs(twice.cumulative_prob - once.cumulative_prob) < 1e-12


# --- recipes ---


def test_zero_fuse_recipe_probability_one():
    steps = [optics.RecipeStep("source", (1, 2), gamma=Fraction(1))]
    assert abs(optics.coincidence_probability(steps) - 1) < 1e-15


def test_single_fuse_probability_half():
    steps = [
        optics.RecipeStep("reset", (1,)),
        optics.RecipeStep("reset", (2,)),
        optics.RecipeStep("fuse", (1, 2), h_on=2),
    ]
    assert abs(optics.coincidence_probability(steps) - 0.5) < 1e-12


def quoted_intermediate(prefix, terms):
    register = optics.run_recipe(optics.six_qubit_recipe()[:prefix])
    expected = _quoted_fixture(register.labels, terms)
    got = register.state.amplitudes / np.linalg.norm(register.state.amplitudes)
    return abs(np.vdot(expected, got))


def test_first_fusion_fixture():
    overlap = quoted_intermediate(
        3,
        [
            {2: qs.KET_PLUS, 1: H, 6: qs.KET_PLUS, 7: qs.KET_PLUS},
            {2: tilted(np.pi / 2), 1: V, 6: MINUS, 7: tilted(np.pi / 2)},
        ],
    )
    assert abs(overlap - 1) < 1e-10


def test_second_fusion_fixture():
    overlap = quoted_intermediate(
        5,
        [
            {2: qs.KET_PLUS, 1: H, 6: H, 4: qs.KET_PLUS, 7: qs.KET_PLUS},
            {2: qs.KET_PLUS, 1: H, 6: V, 4: MINUS, 7: qs.KET_PLUS},
            {2: tilted(np.pi / 2), 1: V, 6: H, 4: qs.KET_PLUS, 7: tilted(np.pi / 2)},
            {2: tilted(np.pi / 2), 1: V, 6: V, 4: -MINUS, 7: tilted(np.pi / 2)},
        ],
    )
    assert abs(overlap - 1) < 1e-10


def test_tilted_measurement_fixture():
    overlap = quoted_intermediate(
        8,
        [
            {2: qs.KET_PLUS, 1: H, 4: qs.KET_PLUS, 7: qs.KET_PLUS},
            {2: tilted(np.pi / 2), 1: V, 4: tilted(-np.pi / 2), 7: tilted(np.pi / 2)},
        ],
    )
    assert abs(overlap - 1) < 1e-10


def test_full_recipe_builds_the_six_qubit_resource():
    register = optics.run_recipe(optics.six_qubit_recipe())
    assert sorted(register.labels) == [1, 2, 3, 4, 5, 6]
    target = build_state(build_resource(ResourceVariant("six")))
    final = optics.sorted_state(register)
    fidelity = abs(np.vdot(target.amplitudes, final.amplitudes)) ** 2
    assert fidelity >= 1 - 1e-10


def test_stepwise_probability_matches_one_shot_oracle():
    steps = optics.six_qubit_recipe()
    stepwise = optics.coincidence_probability(steps)
    assert abs(stepwise - _one_shot_probability(steps)) < 1e-12
    # derived value for the default-outcome branch: nine postselections at 1/2
    assert abs(stepwise - 0.5**9) < 1e-12


def test_commuting_fuses_reorder_freely():
    steps = optics.six_qubit_recipe()
    assert steps[9].op == "fuse" and set(steps[9].modes) == {6, 2}
    assert steps[11].op == "fuse" and set(steps[11].modes) == {4, 3}
    # the (6,2) fusion touches neither the (3,5) source nor the (4,3) fusion
    swapped = steps[:9] + [steps[10], steps[11], steps[9]] + steps[12:]
    a = optics.run_recipe(steps)
    b = optics.run_recipe(swapped)
    fa = optics.sorted_state(a).amplitudes
    fb = optics.sorted_state(b).amplitudes
    assert abs(abs(np.vdot(fa, fb)) - 1) < 1e-12
    assert abs(a.cumulative_prob - b.cumulative_prob) < 1e-12


def test_sweep_outcomes_covers_all_branches():
    steps = [
        optics.RecipeStep("reset", (1,)),
        optics.RecipeStep("reset", (2,)),
        optics.RecipeStep("fuse", (1, 2), h_on=2),
        optics.RecipeStep("measure", (1,), basis=optics.COMPUTATIONAL, outcome=0),
    ]
    sweep = optics.sweep_measure_outcomes(steps)
    assert len(sweep) == 2
    assert abs(sum(p for _, p in sweep) - 0.5) < 1e-12  # fuse costs 1/2


def test_recipe_json_round_trip():
    steps = optics.six_qubit_recipe()
    again = optics.steps_from_json(optics.steps_to_json(steps))
    assert steps == again


def test_shipped_fixture_matches_builtin():
    from importlib import resources

    data = resources.files("wgtoffoli").joinpath("data/six_qubit_recipe.json").read_bytes()
    assert optics.steps_from_json(data) == optics.six_qubit_recipe()


def test_recipe_json_errors():
    with pytest.raises(optics.RecipeError):
        optics.steps_from_json(b'{"steps": [{"op": "warp", "mode": 1}]}')
    with pytest.raises(optics.RecipeError):
        optics.steps_from_json(b'{"steps": [{"op": "fuse", "modes": [1]}]}')
