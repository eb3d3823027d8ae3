"""Number handling shared by every module.

All model quantities are rational whenever the inputs are, so each operation
accepts either ``Fraction`` or ``float`` values and keeps the arithmetic in
whatever type it was handed. ``Fraction`` inputs give exact results; ``float``
inputs give binary64 results.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]

MODES = ("float", "rational")


class DomainError(ValueError):
    """A model parameter lies outside its admissible interval."""


def parse_number(text: str | int | float | Fraction, mode: str = "rational") -> Number:
    """Parse ``"1/4"``, ``"0.325"``, an int or a float into the requested mode.

    Decimal strings are read exactly, so ``parse_number("0.1")`` is ``1/10``
    in rational mode rather than the nearest binary64 value.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    try:
        value = Fraction(text.strip()) if isinstance(text, str) else Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {text!r} as a number") from exc
    return value if mode == "rational" else float(value)


def convert(value: Number, mode: str) -> Number:
    if mode == "rational":
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def exact(value: Number) -> Fraction:
    """Exact rational value of ``value`` (a float converts without rounding)."""
    return value if isinstance(value, Fraction) else Fraction(value)


def check_open_unit(name: str, value: Number) -> None:
    if not 0 < value < 1:
        raise DomainError(f"{name} must lie in the open interval (0, 1), got {value}")


def format_number(value: Number) -> str:
    """Render for CSV/report output: fraction string or 17 significant digits."""
    if isinstance(value, Fraction):
        return str(value)
    return format(value, ".17g")
