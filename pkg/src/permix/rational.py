"""Parsing and printing of exact rationals as ``"p/q"`` strings."""

from fractions import Fraction


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` / ``"p"`` strings to Fraction.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(q: Fraction) -> str:
    # Always "p/q", also for integers, so records have one shape.
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_list(text: str) -> list[Fraction]:
    return [to_fraction(part) for part in text.split(",") if part.strip()]
