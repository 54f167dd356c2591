"""Reading and writing polynomials in the usual ``x^4-8x^3+56x`` notation.

The grammar is a signed sum of terms ``[coef][*][var[^exp]]``.  Any single
letter may serve as the variable, but only one per expression.  Scientific
notation is not accepted since ``2e3`` would be ambiguous with a variable
named ``e``.
"""

from __future__ import annotations

import numpy as np

from .errors import MultipleVariables, PolySyntaxError
from .polynomial import Polynomial


def _number(src: str, i: int):
    j = i
    while j < len(src) and src[j].isdigit():
        j += 1
    if j < len(src) and src[j] == ".":
        j += 1
        while j < len(src) and src[j].isdigit():
            j += 1
    text = src[i:j]
    if text in ("", "."):
        return None, i
    return float(text), j


def _skip_ws(src: str, i: int) -> int:
    while i < len(src) and src[i].isspace():
        i += 1
    return i


def parse(expr: str) -> Polynomial:
    """Parse ``expr`` into a :class:`Polynomial`; like powers are summed."""
    src = expr
    i = _skip_ws(src, 0)
    if i == len(src):
        raise PolySyntaxError("empty expression", 0, expr)
    var = None
    terms: dict[int, float] = {}
    first = True
    while True:
        i = _skip_ws(src, i)
        if i == len(src):
            if first:
                raise PolySyntaxError("empty expression", i, expr)
            raise PolySyntaxError("expected a term after the sign", i, expr)
        sign = 1.0
        if src[i] in "+-":
            sign = -1.0 if src[i] == "-" else 1.0
            i = _skip_ws(src, i + 1)
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-' but found {src[i]!r}", i, expr)
        first = False
        start = i
        coef, i = _number(src, i)
        i = _skip_ws(src, i)
        if coef is not None and i < len(src) and src[i] == "*":
            i = _skip_ws(src, i + 1)
            if i == len(src) or not src[i].isalpha():
                raise PolySyntaxError("expected a variable after '*'", i, expr)
        power = 0
        if i < len(src) and src[i].isalpha():
            if i + 1 < len(src) and src[i + 1].isalpha():
                raise PolySyntaxError("variables are single letters", i, expr)
            if var is None:
                var = src[i]
            elif src[i] != var:
                raise MultipleVariables(f"second variable {src[i]!r} (already using {var!r})", i, expr)
            power = 1
            i = _skip_ws(src, i + 1)
            if i < len(src) and src[i] == "^":
                i = _skip_ws(src, i + 1)
                j = i
                while j < len(src) and src[j].isdigit():
                    j += 1
                if j == i:
                    raise PolySyntaxError("exponent must be a nonnegative integer", i, expr)
                power = int(src[i:j])
                i = j
        elif coef is None:
            if i < len(src) and src[i] in "()":
                raise PolySyntaxError(
                    "parentheses are not supported; pass coefficients with --coeffs instead", i, expr
                )
            found = repr(src[i]) if i < len(src) else "end of input"
            raise PolySyntaxError(f"expected a number or variable, found {found}", start, expr)
        value = sign * (1.0 if coef is None else coef)
        terms[power] = terms.get(power, 0.0) + value
        i = _skip_ws(src, i)
        if i == len(src):
            break
        if src[i] not in "+-":
            raise PolySyntaxError(f"unexpected {src[i]!r}", i, expr)
    deg = max(terms)
    coeffs = [0.0] * (deg + 1)
    for k, v in terms.items():
        coeffs[k] = v
    return Polynomial(coeffs)


def format_number(v: float) -> str:
    """Shortest decimal string that reads back to the same float."""
    return np.format_float_positional(float(v), unique=True, trim="-")


def format_poly(p: Polynomial, var: str = "x") -> str:
    """Inverse of :func:`parse`: descending powers, no spaces."""
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0.0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = format_number(mag)
        else:
            body = "" if mag == 1.0 else format_number(mag)
            body += var if k == 1 else f"{var}^{k}"
        parts.append(sign + body)
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out


def parse_coeffs(text: str) -> Polynomial:
    """Comma-separated coefficients, highest power first."""
    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError as exc:
        raise PolySyntaxError(f"bad coefficient list: {exc}", None, text) from None
    if not vals:
        raise PolySyntaxError("empty coefficient list", None, text)
    return Polynomial.from_descending(vals)
