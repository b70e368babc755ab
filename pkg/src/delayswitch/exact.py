"""Exact rational arithmetic for the simulator core.

Every quantity the core manipulates (the delay, event times, positions,
switch coordinates) is an exact rational.  ``Rat`` is
:class:`fractions.Fraction`, which already provides the canonical form the
rest of the package relies on: positive denominator, numerator and
denominator coprime, unbounded integers, exact total order.  This module adds
the strict text round-trip used by the CLI and the file formats ("p/q" or a
finite decimal in, "p/q" out) and correctly rounded decimal companions for
human-readable output.  Core logic never consumes the decimal strings.
"""

from __future__ import annotations

import re
from fractions import Fraction

Rat = Fraction

_INT_RE = re.compile(r"[+-]?\d+\Z")
_RATIO_RE = re.compile(r"(?P<num>[+-]?\d+)/(?P<den>\d+)\Z")
_DECIMAL_RE = re.compile(r"(?P<sign>[+-]?)(?P<int>\d*)\.(?P<frac>\d*)\Z")

_OP_ALIASES = {"−": "-", "×": "*", "·": "*", "÷": "/"}


class RatParseError(ValueError):
    """Raised when a rational literal cannot be parsed."""


def rat_parse(text: str) -> Rat:
    """Parse "p/q", a plain integer "p", or a finite decimal into a Rat.

    Decimals convert exactly as digits/10^n; they are never routed through
    binary floating point (the dynamics are discontinuous in the delay at
    rational points, so "1.35" must mean 27/20 exactly).
    """
    token = text.strip()
    if _INT_RE.match(token):
        return Fraction(int(token))
    m = _RATIO_RE.match(token)
    if m:
        den = int(m.group("den"))
        if den == 0:
            raise RatParseError(f"zero denominator in {token!r}")
        return Fraction(int(m.group("num")), den)
    m = _DECIMAL_RE.match(token)
    if m and (m.group("int") or m.group("frac")):
        frac_digits = m.group("frac") or ""
        digits = (m.group("int") or "0") + frac_digits
        value = Fraction(int(digits), 10 ** len(frac_digits))
        return -value if m.group("sign") == "-" else value
    raise RatParseError(f"not a rational literal: {token!r}")


def rat_format(a: Rat) -> str:
    """Canonical text form: "p/q", or plain "p" for integers."""
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def rat_arith(a: Rat, b: Rat, op: str) -> Rat:
    """Apply one of ``+ - * /`` (the glyphs − × · ÷ are accepted as aliases)."""
    op = _OP_ALIASES.get(op, op)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def rat_cmp(a: Rat, b: Rat) -> int:
    """Exact three-way comparison: -1 if a < b, 0 if equal, +1 if a > b."""
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def rat_to_decimal(a: Rat, digits: int) -> str:
    """Correctly rounded (half-to-even) decimal string with ``digits`` places.

    Reporting aid only; exact consumers must use :func:`rat_format`.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10**digits
    q, r = divmod(abs(a.numerator) * scale, a.denominator)
    if 2 * r > a.denominator or (2 * r == a.denominator and q % 2 == 1):
        q += 1
    sign = "-" if a < 0 and q > 0 else ""
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{digits}d}"
