"""Postselected linear-optics generation of the six-qubit gate resource.

Photons carry polarisation qubits (|H> = |0>, |V> = |1>). The ``fuse``
operation is the two-photon projector |HH><HH| + |VV><VV| followed by H
on a designated photon; both photons stay in the register and the
projection norm is folded into ``cumulative_prob``. Pair sources emit
``gamma_+|HH> + gamma_-|VV>`` with ``gamma_pm = (1 pm e^{-i*gamma/2})/2``
and are rotated into a two-vertex graph pair of edge weight gamma by
``Rz(gamma/2) H`` on each photon.

The built-in recipe assembles the six-qubit resource from two gamma=pi/2
pairs and one maximal pair plus two recycled photons. Each fuse names the
photon that receives the H; these assignments, and the waveplate settings
of the mid-recipe measurement, are fixed by the intermediate states the
construction is required to reproduce (see the tests).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import angles
from .angles import Angle
from .mbqc import COMPUTATIONAL, MeasurementBasis, basis_states
from .qstate import (
    HADAMARD,
    KET_PLUS,
    StateVector,
    apply_single,
    kron_all,
    project,
    reorder_qubits,
    rz,
)


class RecipeError(ValueError):
    """Ill-formed recipe or a postselection step with zero support."""


@dataclass
class PhotonRegister:
    """Live photon modes; ``labels[i]`` is the mode on qubit ``i``."""

    labels: list[int] = field(default_factory=list)
    state: StateVector = field(
        default_factory=lambda: StateVector(0, np.ones(1, dtype=complex))
    )
    cumulative_prob: float = 1.0

    def qubit_of(self, mode: int) -> int:
        try:
            return self.labels.index(mode)
        except ValueError:
            raise RecipeError(f"mode {mode} is not in the register") from None


@dataclass(frozen=True)
class RecipeStep:
    op: str  # source | fuse | rotate | measure | reset
    modes: tuple[int, ...] = ()
    gamma: Angle | None = None
    h_on: int | None = None
    angle: Angle | None = None
    basis: MeasurementBasis | None = None
    outcome: int = 0


def pdc_pair(gamma: Angle) -> StateVector:
    """Two-photon source state gamma_+|HH> + gamma_-|VV> (normalised)."""
    half = np.exp(-1j * angles.radians(gamma) / 2)
    amps = np.zeros(4, dtype=complex)
    amps[0] = (1 + half) / 2
    amps[3] = (1 - half) / 2
    return StateVector(2, amps)


def source_amplitudes(gamma: Angle) -> tuple[complex, complex]:
    pair = pdc_pair(gamma)
    return complex(pair.amplitudes[0]), complex(pair.amplitudes[3])


def to_weighted_pair(pair: StateVector, gamma: Angle) -> StateVector:
    """Rotate a source pair into the two-vertex graph with edge weight gamma."""
    turn = rz(angles.radians(gamma) / 2) @ HADAMARD
    out = apply_single(pair, 0, turn)
    return apply_single(out, 1, turn)


def _append_modes(register: PhotonRegister, labels, state: StateVector) -> PhotonRegister:
    for mode in labels:
        if mode in register.labels:
            raise RecipeError(f"mode {mode} already exists")
    joint = kron_all(state.amplitudes, register.state.amplitudes)
    return PhotonRegister(
        register.labels + list(labels),
        StateVector(register.state.num_qubits + state.num_qubits, joint),
        register.cumulative_prob,
    )


def fuse(register: PhotonRegister, a: int, b: int, h_on: int) -> PhotonRegister:
    """Project modes (a, b) onto equal polarisation, then H on ``h_on``."""
    if a == b:
        raise RecipeError("fuse needs two distinct modes")
    if h_on not in (a, b):
        raise RecipeError(f"h_on={h_on} must be one of the fused modes {a, b}")
    qa, qb = register.qubit_of(a), register.qubit_of(b)
    idx = np.arange(register.state.amplitudes.size)
    keep = (((idx >> qa) ^ (idx >> qb)) & 1) == 0
    amps = np.where(keep, register.state.amplitudes, 0)
    before = register.state.norm_sq
    projected = StateVector(register.state.num_qubits, amps)
    ratio = projected.norm_sq / before
    if ratio < 1e-15:
        raise RecipeError(f"fusing modes {a} and {b} has zero success probability")
    out = apply_single(projected.normalized(), register.qubit_of(h_on), HADAMARD)
    return PhotonRegister(list(register.labels), out, register.cumulative_prob * ratio)


def _measure_out(register: PhotonRegister, mode: int, basis, outcome: int) -> PhotonRegister:
    kets = basis_states(basis)
    q = register.qubit_of(mode)
    before = register.state.norm_sq
    projected = project(register.state, q, kets[outcome])
    ratio = projected.norm_sq / before
    if ratio < 1e-15:
        raise RecipeError(f"measuring mode {mode} with outcome {outcome} cannot occur")
    labels = [m for m in register.labels if m != mode]
    return PhotonRegister(labels, projected.normalized(), register.cumulative_prob * ratio)


def run_recipe(
    steps, outcome_overrides: dict[int, int] | None = None
) -> PhotonRegister:
    """Execute steps in order; ``outcome_overrides`` maps step index to outcome."""
    register = PhotonRegister()
    for index, step in enumerate(steps):
        if step.op == "source":
            if len(step.modes) != 2 or step.gamma is None:
                raise RecipeError(f"step {index}: source needs two modes and gamma")
            pair = to_weighted_pair(pdc_pair(step.gamma), step.gamma)
            register = _append_modes(register, step.modes, pair)
        elif step.op == "reset":
            (mode,) = step.modes
            register = _append_modes(register, [mode], StateVector(1, KET_PLUS.copy()))
        elif step.op == "fuse":
            a, b = step.modes
            register = fuse(register, a, b, step.h_on)
        elif step.op == "rotate":
            (mode,) = step.modes
            register = PhotonRegister(
                list(register.labels),
                apply_single(
                    register.state,
                    register.qubit_of(mode),
                    rz(angles.radians(step.angle)),
                ),
                register.cumulative_prob,
            )
        elif step.op == "measure":
            (mode,) = step.modes
            outcome = step.outcome
            if outcome_overrides and index in outcome_overrides:
                outcome = outcome_overrides[index]
            register = _measure_out(register, mode, step.basis or COMPUTATIONAL, outcome)
        else:
            raise RecipeError(f"step {index}: unknown op {step.op!r}")
    return register


def coincidence_probability(steps) -> float:
    """Probability that every postselection step of the recipe succeeds."""
    return run_recipe(steps).cumulative_prob


def sweep_measure_outcomes(steps) -> list[tuple[dict[int, int], float]]:
    """Cumulative probability of every measurement-outcome branch."""
    measure_steps = [i for i, s in enumerate(steps) if s.op == "measure"]
    results = []
    for bits in np.ndindex(*(2,) * len(measure_steps)):
        overrides = dict(zip(measure_steps, map(int, bits)))
        try:
            register = run_recipe(steps, overrides)
            results.append((overrides, register.cumulative_prob))
        except RecipeError:
            results.append((overrides, 0.0))
    return results


def sorted_state(register: PhotonRegister) -> StateVector:
    """Register state with qubits reordered to ascending mode label."""
    order = sorted(range(len(register.labels)), key=lambda i: register.labels[i])
    return reorder_qubits(register.state, order)


def six_qubit_recipe() -> list[RecipeStep]:
    """Built-in recipe producing the six-qubit resource graph state.

    Mode m of the register ends up as vertex m of the graph (1-based
    labels). Waveplate settings and H assignments are pinned by the
    intermediate-state fixtures.
    """
    half = Fraction(1, 2)
    eighth = Fraction(-1, 4)
    tilted = MeasurementBasis(alpha=Fraction(-1, 4), hadamard=True)
    return [
        RecipeStep("source", (2, 1), gamma=half),
        RecipeStep("source", (6, 7), gamma=half),
        RecipeStep("fuse", (1, 6), h_on=6),
        RecipeStep("reset", (4,)),
        RecipeStep("fuse", (6, 4), h_on=4),
        RecipeStep("measure", (6,), basis=tilted, outcome=0),
        RecipeStep("rotate", (1,), angle=eighth),
        RecipeStep("rotate", (4,), angle=eighth),
        RecipeStep("reset", (6,)),
        RecipeStep("fuse", (6, 2), h_on=6),
        RecipeStep("source", (3, 5), gamma=Fraction(1)),
        RecipeStep("fuse", (4, 3), h_on=3),
        RecipeStep("fuse", (3, 6), h_on=6),
        RecipeStep("fuse", (6, 7), h_on=7),
        RecipeStep("fuse", (5, 7), h_on=7),
        RecipeStep("measure", (7,), basis=COMPUTATIONAL, outcome=0),
    ]


# --- JSON recipe files ---


def steps_to_json(steps) -> bytes:
    out = []
    for step in steps:
        entry: dict = {"op": step.op}
        if step.op in ("source", "fuse"):
            entry["modes"] = list(step.modes)
        else:
            entry["mode"] = step.modes[0]
        if step.gamma is not None:
            entry["gamma"] = angles.to_json(step.gamma)
        if step.h_on is not None:
            entry["h_on"] = step.h_on
        if step.angle is not None:
            entry["angle"] = angles.to_json(step.angle)
        if step.op == "measure":
            basis = step.basis or COMPUTATIONAL
            if basis.hadamard and angles.is_zero(basis.alpha):
                entry["basis"] = "computational"
            else:
                entry["basis"] = {
                    "alpha": angles.to_json(basis.alpha),
                    "hadamard": basis.hadamard,
                }
            entry["outcome"] = step.outcome
        out.append(entry)
    return (json.dumps({"steps": out}, indent=2, sort_keys=True) + "\n").encode()


def steps_from_json(text) -> list[RecipeStep]:
    if isinstance(text, bytes):
        text = text.decode()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecipeError(f"line {exc.lineno}: {exc.msg}") from None
    steps = []
    for pos, entry in enumerate(doc.get("steps", [])):
        op = entry.get("op")
        where = f"steps[{pos}]"
        if op in ("source", "fuse"):
            modes = tuple(entry.get("modes", ()))
            if len(modes) != 2:
                raise RecipeError(f"{where}: {op} needs two modes")
        elif op in ("rotate", "measure", "reset"):
            if "mode" not in entry:
                raise RecipeError(f"{where}: {op} needs a mode")
            modes = (entry["mode"],)
        else:
            raise RecipeError(f"{where}: unknown op {op!r}")
        gamma = angles.from_json(entry["gamma"], f"{where}.gamma") if "gamma" in entry else None
        angle = angles.from_json(entry["angle"], f"{where}.angle") if "angle" in entry else None
        basis = None
        if op == "measure":
            raw = entry.get("basis", "computational")
            if raw == "computational":
                basis = COMPUTATIONAL
            else:
                basis = MeasurementBasis(
                    alpha=angles.from_json(raw.get("alpha", 0), f"{where}.basis.alpha"),
                    hadamard=bool(raw.get("hadamard", False)),
                )
        steps.append(
            RecipeStep(
                op,
                modes,
                gamma=gamma,
                h_on=entry.get("h_on"),
                angle=angle,
                basis=basis,
                outcome=entry.get("outcome", 0),
            )
        )
    return steps
