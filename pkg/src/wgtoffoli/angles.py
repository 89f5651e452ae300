"""Exact angle arithmetic.

Angles are stored as rational multiples of pi (``fractions.Fraction``)
wherever possible, with plain float radians as an escape hatch. A
``Fraction(1, 2)`` therefore means pi/2 radians. All frame arithmetic in
this package stays on the rational side; floats only appear when a state
vector is actually built.
"""

from __future__ import annotations

import math
from fractions import Fraction

Angle = Fraction | float

TWO_PI = 2.0 * math.pi


def radians(angle: Angle) -> float:
    """Angle in radians; rational angles are multiples of pi."""
    if isinstance(angle, Fraction):
        return float(angle) * math.pi
    return float(angle)


def normalized(angle: Angle) -> Angle:
    """Reduce modulo 2*pi, keeping rational angles rational."""
    if isinstance(angle, Fraction):
        return angle % 2
    return float(angle) % TWO_PI


def is_zero(angle: Angle, tol: float = 1e-15) -> bool:
    norm = normalized(angle)
    if isinstance(norm, Fraction):
        return norm == 0
    return norm < tol or TWO_PI - norm < tol


def eighths(angle: Angle) -> int | None:
    """The angle as an integer multiple of pi/4 in 0..7, or None."""
    norm = normalized(angle)
    if isinstance(norm, Fraction):
        scaled = norm * 4
        if scaled.denominator == 1:
            return int(scaled) % 8
    return None


def parse_fraction(text: str) -> Fraction:
    """Parse a command-line angle such as ``1/2`` (meaning pi/2)."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational multiple of pi: {text!r}") from exc


def to_json(angle: Angle):
    if isinstance(angle, Fraction):
        return {"pi_num": angle.numerator, "pi_den": angle.denominator}
    return float(angle)


def from_json(obj, where: str = "angle") -> Angle:
    if isinstance(obj, dict):
        try:
            num, den = obj["pi_num"], obj["pi_den"]
        except KeyError as exc:
            raise ValueError(f"{where}: missing {exc.args[0]}") from None
        if not isinstance(num, int) or not isinstance(den, int):
            raise ValueError(f"{where}: pi_num/pi_den must be integers")
        if den == 0:
            raise ValueError(f"{where}: zero denominator")
        return Fraction(num, den)
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return float(obj)
    raise ValueError(f"{where}: expected {{pi_num, pi_den}} or a number")


def describe(angle: Angle) -> str:
    """Short human-readable form, e.g. ``pi/2`` or ``-3pi/4``."""
    if isinstance(angle, Fraction):
        if angle == 0:
            return "0"
        num, den = angle.numerator, angle.denominator
        head = {1: "pi", -1: "-pi"}.get(num, f"{num}pi")
        return head if den == 1 else f"{head}/{den}"
    return f"{float(angle):.6g}rad"
