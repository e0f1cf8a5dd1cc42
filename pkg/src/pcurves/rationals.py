"""Exact rational helpers.

Winding numbers, indices and intersection counts are integers; several
derived quantities (normal Chern number, Z(du), singularity index) live in
(1/2)Z.  Everything is kept exact with ``fractions.Fraction``; floating
point only ever appears inside the spectral oracle.
"""

from fractions import Fraction


def as_fraction(value, location=None):
    """Coerce ints, Fractions and {num, den} mappings to Fraction."""
    from .errors import ValidationError

    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError("expected a number, got a boolean", location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, dict):
        try:
            return Fraction(int(value["num"]), int(value["den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational object: {exc}", location)
    raise ValidationError(f"cannot interpret {value!r} as a rational", location)


def require_half_integer(value, name, location=None):
    """Check value is in (1/2)Z and return it as Fraction."""
    from .errors import ValidationError

    frac = as_fraction(value, location)
    if frac.denominator not in (1, 2):
        raise ValidationError(f"{name} must be a half-integer, got {frac}", location)
    return frac


def half_int_json(value):
    """Serialize a half-integer as {"num": ..., "den": 1 or 2}."""
    frac = Fraction(value)
    assert frac.denominator in (1, 2)
    return {"num": frac.numerator, "den": frac.denominator}


def rational_json(value):
    frac = Fraction(value)
    return {"num": frac.numerator, "den": frac.denominator}
