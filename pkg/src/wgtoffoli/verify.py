"""Operator comparisons: phase-free equality, locality, process fidelity."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .qstate import is_unitary

LOCALITY_TOL = 1e-8


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff ``a`` equals ``b`` up to one complex scalar.

    The scalar is the least-squares fit ``tr(b^dag a) / tr(b^dag b)``; for
    inputs of equal norm it is a pure phase.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    denom = np.vdot(b, b)
    if denom == 0:
        raise ValueError("comparison target is identically zero")
    scale = np.vdot(b, a) / denom
    return bool(np.max(np.abs(a - scale * b)) <= tol)


@dataclass
class LocalityVerdict:
    is_local: bool
    schmidt_singular_values: list[np.ndarray]
    tolerance: float


def operator_schmidt_values(op: np.ndarray, wire: int) -> np.ndarray:
    """Singular values of the one-wire-versus-rest matricisation of ``op``."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (8, 8):
        raise ValueError("expected an 8x8 operator on three wires")
    tensor = op.reshape(2, 2, 2, 2, 2, 2)
    others = [w for w in range(3) if w != wire]
    axes = [wire, 3 + wire] + others + [3 + w for w in others]
    mat = np.transpose(tensor, axes).reshape(4, 16)
    return np.linalg.svd(mat, compute_uv=False)


def is_local(op: np.ndarray, tol: float = LOCALITY_TOL) -> LocalityVerdict:
    """Tensor-product test: Schmidt rank 1 across every single-wire cut."""
    values = [operator_schmidt_values(op, wire) for wire in range(3)]
    local = all(v[1] <= tol * v[0] for v in values)
    return LocalityVerdict(local, values, tol)


def process_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|tr(a^dag b)|^2 / d^2 for two unitaries of dimension d."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    for name, mat in (("first", a), ("second", b)):
        if not is_unitary(mat, tol=1e-9):
            warnings.warn(f"{name} operator is not unitary; fidelity may be meaningless")
    dim = a.shape[0]
    return float(abs(np.trace(a.conj().T @ b)) ** 2 / dim**2)


def unit_scale(op: np.ndarray) -> np.ndarray:
    """Rescale a matrix proportional to a unitary onto unitary scale."""
    op = np.asarray(op, dtype=complex)
    frob_sq = np.vdot(op, op).real
    if frob_sq == 0:
        raise ValueError("cannot rescale the zero operator")
    return op * np.sqrt(op.shape[0] / frob_sq)
