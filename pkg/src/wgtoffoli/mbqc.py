"""Measurement patterns and byproduct-frame algebra.

Measurement bases
-----------------
``MeasurementBasis(alpha)`` measures in ``{(|0> + e^{i*alpha}|1>)/sqrt(2),
(|0> - e^{i*alpha}|1>)/sqrt(2)}``; outcome 0 always refers to the first
(``+``) ket. With ``hadamard=True`` the kets are pushed through H, which
is the variant used by the three-qubit phase-gate gadget. An ``absorbed``
correction R turns the kets into ``R^dagger |.>``, i.e. measuring is then
equivalent to applying R to the qubit first.

Byproduct frames
----------------
A ``ByproductOperator`` stores, per logical wire, a word in canonical
order ``X^x Z^z Rz(k*pi/4)`` with ``k`` in 0..3, an optional non-local
matrix factor applied before the words, and an exact global phase.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from . import angles
from .angles import Angle
from .qstate import (
    HADAMARD,
    PAULI_X,
    PAULI_Z,
    StateVector,
    kron_all,
    project,
    rz,
)

OutcomeBits = dict[int, int]

MAX_PATTERN_QUBITS = 16


@dataclass
class MeasurementBasis:
    alpha: Angle = Fraction(0)
    hadamard: bool = False
    absorbed: np.ndarray | None = None

    def __post_init__(self):
        if self.absorbed is not None:
            self.absorbed = np.asarray(self.absorbed, dtype=complex)
            if self.absorbed.shape != (2, 2):
                raise ValueError("absorbed correction must be a 2x2 matrix")


COMPUTATIONAL = MeasurementBasis(alpha=Fraction(0), hadamard=True)


def basis_states(basis: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    """Projection kets for outcomes 0 and 1."""
    phase = np.exp(1j * angles.radians(basis.alpha))
    plus = np.array([1, phase], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -phase], dtype=complex) / np.sqrt(2)
    if basis.hadamard:
        plus, minus = HADAMARD @ plus, HADAMARD @ minus
    if basis.absorbed is not None:
        rdag = basis.absorbed.conj().T
        plus, minus = rdag @ plus, rdag @ minus
    return plus, minus


BasisLike = Union[MeasurementBasis, Callable[[OutcomeBits], MeasurementBasis]]


@dataclass
class PatternStep:
    """One measurement; ``basis`` may be a function of earlier outcomes."""

    vertex: int
    basis: BasisLike


@dataclass
class Pattern:
    steps: list[PatternStep]

    def __post_init__(self):
        seen = set()
        for step in self.steps:
            if step.vertex in seen:
                raise ValueError(f"vertex {step.vertex} measured twice")
            seen.add(step.vertex)

    @property
    def vertices(self) -> list[int]:
        return [step.vertex for step in self.steps]


def run_branch(
    state: StateVector, pattern: Pattern, outcomes: OutcomeBits
) -> tuple[float, StateVector]:
    """Project out every measured qubit for one fixed outcome assignment.

    Returns the branch probability (final over initial squared norm) and
    the remaining state, unnormalised. Unmeasured vertices keep their
    relative order: the vertex with the smallest label becomes qubit 0.
    """
    if set(outcomes) != set(pattern.vertices):
        raise ValueError("outcome bits must cover exactly the measured vertices")
    initial = state.norm_sq
    if initial == 0:
        raise ValueError("cannot measure the zero state")
    position = {v: v for v in range(state.num_qubits)}
    seen: OutcomeBits = {}
    for step in pattern.steps:
        if step.vertex not in position:
            raise ValueError(f"vertex {step.vertex} not present in the register")
        basis = step.basis(seen) if callable(step.basis) else step.basis
        kets = basis_states(basis)
        bit = outcomes[step.vertex]
        if bit not in (0, 1):
            raise ValueError(f"outcome for vertex {step.vertex} must be 0 or 1")
        q = position.pop(step.vertex)
        state = project(state, q, kets[bit])
        for v in position:
            if position[v] > q:
                position[v] -= 1
        seen[step.vertex] = bit
    return state.norm_sq / initial, state


def enumerate_branches(
    state: StateVector, pattern: Pattern
) -> list[tuple[OutcomeBits, float, StateVector]]:
    """All ``2**m`` measurement branches, zero-probability ones included."""
    m = len(pattern.steps)
    if m > MAX_PATTERN_QUBITS:
        raise ValueError(f"{m} measurements exceed the limit of {MAX_PATTERN_QUBITS}")
    branches = []
    for bits in itertools.product((0, 1), repeat=m):
        outcomes = dict(zip(pattern.vertices, bits))
        probability, final = run_branch(state, pattern, outcomes)
        branches.append((outcomes, probability, final))
    return branches


# --- byproduct frames ---


@dataclass(frozen=True)
class WireWord:
    """Single-wire word X^x Z^z Rz(k*pi/4), canonicalised to k in 0..3."""

    x: int = 0
    z: int = 0
    k: int = 0

    def matrix(self) -> np.ndarray:
        out = rz(self.k * np.pi / 4)
        if self.z:
            out = PAULI_Z @ out
        if self.x:
            out = PAULI_X @ out
        return out

    def label(self) -> str:
        parts = []
        if self.x:
            parts.append("X")
        if self.z:
            parts.append("Z")
        if self.k:
            parts.append(f"Rz({self.k}pi/4)")
        return ".".join(parts) or "I"


def make_word(x: int = 0, z: int = 0, k: int = 0) -> WireWord:
    """Build a word, folding Rz(pi) into Z so that k lands in 0..3."""
    k %= 8
    if k >= 4:
        k -= 4
        z ^= 1
    return WireWord(x & 1, z & 1, k)


def _word_mul(a: WireWord, b: WireWord) -> tuple[WireWord, complex]:
    """Product a*b in canonical form plus the exact scalar it picks up."""
    phase = 1.0 + 0.0j
    k_left = a.k
    if b.x:
        if a.z:
            phase = -phase
        if a.k:
            phase *= np.exp(1j * np.pi / 4 * a.k)
            k_left = -a.k
    return make_word(a.x ^ b.x, a.z ^ b.z, k_left + b.k), phase


@dataclass
class ByproductOperator:
    """Per-wire correction words with an optional non-local factor.

    The full operator is ``global_phase * (word_0 x word_1 x ...) @
    nonlocal_factor`` with ``wires[0]`` on the most significant qubit.
    """

    wires: tuple[str, ...]
    words: dict[str, WireWord] = field(default_factory=dict)
    nonlocal_factor: np.ndarray | None = None
    nonlocal_label: str | None = None
    global_phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        for wire in self.wires:
            self.words.setdefault(wire, WireWord())
        if set(self.words) != set(self.wires):
            raise ValueError("frame words must match the declared wires")

    @property
    def is_local(self) -> bool:
        return self.nonlocal_factor is None

    def word(self, wire: str) -> WireWord:
        return self.words[wire]

    def describe(self) -> str:
        parts = [f"{w}:{self.words[w].label()}" for w in self.wires]
        if self.nonlocal_factor is not None:
            parts.append(f"nonlocal[{self.nonlocal_label or '8x8 factor'}]")
        return " ".join(parts)


def frame_identity(wires=("c1", "c2", "t")) -> ByproductOperator:
    return ByproductOperator(tuple(wires))


def frame_to_operator(frame: ByproductOperator) -> np.ndarray:
    """Dense matrix of the frame on ``len(wires)`` qubits."""
    out = kron_all(*(frame.words[w].matrix() for w in frame.wires))
    if frame.nonlocal_factor is not None:
        out = out @ frame.nonlocal_factor
    return frame.global_phase * out


def frame_compose(a: ByproductOperator, b: ByproductOperator) -> ByproductOperator:
    """Operator product ``a @ b`` as a frame; phases are tracked exactly."""
    if a.wires != b.wires:
        raise ValueError(f"wire mismatch: {a.wires} vs {b.wires}")
    phase = a.global_phase * b.global_phase
    if a.nonlocal_factor is None:
        words = {}
        for wire in a.wires:
            words[wire], extra = _word_mul(a.words[wire], b.words[wire])
            phase *= extra
        return ByproductOperator(
            a.wires,
            words,
            None if b.nonlocal_factor is None else b.nonlocal_factor.copy(),
            b.nonlocal_label,
            phase,
        )
    # Fold everything to the right of a's words into the matrix factor.
    tail = a.nonlocal_factor @ frame_to_operator(replace(b, global_phase=1.0 + 0.0j))
    return ByproductOperator(a.wires, dict(a.words), tail, a.nonlocal_label, phase)
