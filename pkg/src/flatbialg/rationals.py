"""Exact rational scalars and their string forms.

Every coefficient in this package is an exact rational; all predicates
(degeneracy, flatness, metaflatness, Yang-Baxter) are decided by exact
equality, never by tolerance.
"""

from __future__ import annotations

import re

try:
    # gmpy2.mpq is a drop-in replacement for Fraction and noticeably faster
    # on the randomized suites; the package works with either.
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

#: Strict grammar for rationals at file boundaries: "p" or "p/q", q > 0.
RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")

ZERO = Rational(0)
ONE = Rational(1)


def as_rational(value) -> Rational:
    """Coerce ints, strings and rational-like values; floats are rejected."""
    if isinstance(value, float):
        raise TypeError(f"floats are not exact rationals: {value!r}")
    if isinstance(value, str):
        return parse_rational(value)
    return Rational(value)


def parse_rational(text: str) -> Rational:
    """Parse "p" or "p/q" exactly; anything else is an error."""
    if not RATIONAL_RE.match(text):
        raise ValueError(f"not an exact rational string: {text!r}")
    num, _, den = text.partition("/")
    return Rational(int(num), int(den)) if den else Rational(int(num))


def format_rational(x) -> str:
    n, d = x.numerator, x.denominator
    return str(n) if d == 1 else f"{n}/{d}"
