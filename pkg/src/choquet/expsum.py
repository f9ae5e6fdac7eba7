"""Exact arithmetic on rational combinations of ``exp(-q)`` with rational ``q``.

Exponentials of distinct rationals are linearly independent over the
rationals (Lindemann-Weierstrass), so a sum is zero iff every collected
coefficient is zero.  Signs of nonzero sums are certified with interval
arithmetic at increasing precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .measure import as_fraction

MAX_PRECISION = 1 << 14
_CONTEXTS: dict = {}


def interval_context(prec: int) -> MPIntervalContext:
    """Shared interval context per precision; building one is costly."""
    ctx = _CONTEXTS.get(prec)
    if ctx is None:
        ctx = MPIntervalContext()
        ctx.prec = prec
        _CONTEXTS[prec] = ctx
    return ctx


_EXPS: dict = {}


def _exp_interval(prec: int, q: Fraction):
    key = (prec, q)
    v = _EXPS.get(key)
    if v is None:
        ctx = interval_context(prec)
        v = _EXPS[key] = ctx.exp(-(ctx.mpf(q.numerator) / q.denominator))
    return v


class ExpSum:
    """``Σ c · exp(-q)`` stored as ``{q: c}`` with zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for q, c in (terms or {}).items():
            if type(q) is not Fraction:
                q = as_fraction(q)
            if type(c) is not Fraction:
                c = as_fraction(c)
            if c:
                clean[q] = clean.get(q, 0) + c
        self.terms = {q: c for q, c in sorted(clean.items()) if c}

    @classmethod
    def exp_neg(cls, q, coef=1) -> "ExpSum":
        return cls({q: coef})

    @classmethod
    def rational(cls, c) -> "ExpSum":
        return cls({0: c})

    @staticmethod
    def _coerce(x) -> "ExpSum":
        return x if isinstance(x, ExpSum) else ExpSum.rational(x)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for q, c in other.terms.items():
            t[q] = t.get(q, 0) + c
        return ExpSum(t)

    __radd__ = __add__

    def __neg__(self):
        return ExpSum({q: -c for q, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                t[q1 + q2] = t.get(q1 + q2, 0) + c1 * c2
        return ExpSum(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if set(self.terms) <= {Fraction(0)}:
            return hash(self.terms.get(Fraction(0), Fraction(0)))
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return set(self.terms) <= {Fraction(0)}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(Fraction(0), Fraction(0))

    def interval(self, prec: int):
        ctx = interval_context(prec)
        s = ctx.mpf(0)
        for q, c in self.terms.items():
            term = ctx.mpf(c.numerator) / c.denominator
            if q:
                term = term * _exp_interval(prec, q)
            s += term
        return s

    def sign(self) -> int:
        if self.is_zero():
            return 0
        prec = 64
        while prec <= MAX_PRECISION:
            iv = self.interval(prec)
            if iv.a > 0:
                return 1
            if iv.b < 0:
                return -1
            prec *= 2
        raise ArithmeticError(f"sign of {self} not resolved at {MAX_PRECISION} bits")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        with mpmath.workprec(80):
            s = mpmath.mpf(0)
            for q, c in self.terms.items():
                s += mpmath.mpf(c.numerator) / c.denominator * mpmath.exp(-mpmath.mpf(q.numerator) / q.denominator)
            return float(s)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for q, c in self.terms.items():
            if q == 0:
                parts.append(str(c))
            else:
                e = f"exp(-{q})" if q > 0 else f"exp({-q})"
                parts.append(e if c == 1 else f"-{e}" if c == -1 else f"{c}*{e}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"ExpSum({self})"
