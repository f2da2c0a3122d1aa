"""Exact rational scalars.

All coefficients in this package are arbitrary-precision rationals; no
floating point is used anywhere.  ``gmpy2.mpq`` is used when available
(roughly an order of magnitude faster), with ``fractions.Fraction`` as a
drop-in fallback.  Both normalize to lowest terms with a positive
denominator and print as ``"p/q"`` (or ``"p"`` for integers), which is the
wire format used by the map-document serializer.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rat

    _BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat

    _BACKEND = "fractions"

ZERO = Rat(0)
ONE = Rat(1)


def rat_from_str(text: str) -> "Rat":
    """Parse an exact rational from ``"p"`` or ``"p/q"``."""
    try:
        return Rat(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal {text!r}") from exc


def rat_to_str(value) -> str:
    return str(value)
