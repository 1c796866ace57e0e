"""Closed real intervals with outward-rounded MPFR endpoints.

Every operation evaluates the lower endpoint with round-toward-minus-infinity
and the upper endpoint with round-toward-plus-infinity.  MPFR's elementary
functions are correctly rounded, so each result encloses the exact value.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import RoundDown, RoundUp, mpfr, mpq

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096
MIN_PRECISION = 64


def _ctx(prec: int, rnd):
    return gmpy2.context(precision=prec, round=rnd, emax=2**40, emin=-(2**40))


def _as_mpq(x):
    if isinstance(x, mpq):
        return x
    if isinstance(x, (int, type(gmpy2.mpz(0)))):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return mpq(f.numerator, f.denominator)
    if isinstance(x, float):
        return mpq(*x.as_integer_ratio())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class RigorousReal:
    """An interval ``[lo, hi]`` certain to contain a real quantity."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int = DEFAULT_PRECISION):
        self.lo = lo
        self.hi = hi
        self.prec = prec
        if not lo <= hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")

    # -- construction ------------------------------------------------------

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PRECISION) -> "RigorousReal":
        """Enclosure of the rational ``x`` (int, Fraction, decimal string)."""
        q = _as_mpq(x)
        with _ctx(prec, RoundDown):
            lo = mpfr(q)
        with _ctx(prec, RoundUp):
            hi = mpfr(q)
        return cls(lo, hi, prec)

    @classmethod
    def e(cls, prec: int = DEFAULT_PRECISION) -> "RigorousReal":
        with _ctx(prec, RoundDown):
            lo = gmpy2.exp(mpfr(1))
        with _ctx(prec, RoundUp):
            hi = gmpy2.exp(mpfr(1))
        return cls(lo, hi, prec)

    def _wrap(self, other) -> "RigorousReal":
        if isinstance(other, RigorousReal):
            return other
        return RigorousReal.exact(other, self.prec)

    # -- views -------------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        n, d = self.lo.as_integer_ratio()
        return Fraction(int(n), int(d))

    @property
    def upper(self) -> Fraction:
        n, d = self.hi.as_integer_ratio()
        return Fraction(int(n), int(d))

    @property
    def width(self):
        with _ctx(self.prec, RoundUp):
            return self.hi - self.lo

    def mid(self) -> float:
        with _ctx(self.prec, gmpy2.RoundToNearest):
            return float((self.lo + self.hi) / 2)

    def contains(self, x) -> bool:
        q = _as_mpq(x)
        return self.lo <= q <= self.hi

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def __repr__(self):
        return f"RigorousReal([{self.lo}, {self.hi}], prec={self.prec})"

    def to_dict(self) -> dict:
        return {
            "lower": str(self.lo),
            "upper": str(self.hi),
            "precision": self.prec,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RigorousReal":
        prec = int(data["precision"])
        with gmpy2.context(precision=prec):
            return cls(mpfr(data["lower"]), mpfr(data["upper"]), prec)

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        # negation is exact only in a context at least as precise as the operand
        with _ctx(self.prec, RoundDown):
            lo = -self.hi
        with _ctx(self.prec, RoundUp):
            hi = -self.lo
        return RigorousReal(lo, hi, self.prec)

    def __add__(self, other):
        other = self._wrap(other)
        with _ctx(self.prec, RoundDown):
            lo = self.lo + other.lo
        with _ctx(self.prec, RoundUp):
            hi = self.hi + other.hi
        return RigorousReal(lo, hi, self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        with _ctx(self.prec, RoundDown):
            lo = min(a * b for a, b in pairs)
        with _ctx(self.prec, RoundUp):
            hi = max(a * b for a, b in pairs)
        return RigorousReal(lo, hi, self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._wrap(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        with _ctx(self.prec, RoundDown):
            lo = min(a / b for a, b in pairs)
        with _ctx(self.prec, RoundUp):
            hi = max(a / b for a, b in pairs)
        return RigorousReal(lo, hi, self.prec)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def log(self) -> "RigorousReal":
        if self.lo <= 0:
            raise ValueError("logarithm of an interval reaching 0 or below")
        with _ctx(self.prec, RoundDown):
            lo = gmpy2.log(self.lo)
        with _ctx(self.prec, RoundUp):
            hi = gmpy2.log(self.hi)
        return RigorousReal(lo, hi, self.prec)

    def exp(self) -> "RigorousReal":
        with _ctx(self.prec, RoundDown):
            lo = gmpy2.exp(self.lo)
        with _ctx(self.prec, RoundUp):
            hi = gmpy2.exp(self.hi)
        return RigorousReal(lo, hi, self.prec)

    def __pow__(self, k):
        """Power with an integer or positive-base real exponent."""
        if isinstance(k, int):
            if k == 0:
                return RigorousReal.exact(1, self.prec)
            if k < 0:
                return 1 / (self ** (-k))
            out = RigorousReal.exact(1, self.prec)
            base = self
            while k:
                if k & 1:
                    out = out * base
                k >>= 1
                if k:
                    base = base * base
            return out
        return (self._wrap(k) * self.log()).exp()

    def max(self, other) -> "RigorousReal":
        other = self._wrap(other)
        return RigorousReal(max(self.lo, other.lo), max(self.hi, other.hi), self.prec)

    def min(self, other) -> "RigorousReal":
        other = self._wrap(other)
        return RigorousReal(min(self.lo, other.lo), min(self.hi, other.hi), self.prec)


def precise_log(x, precision: int = DEFAULT_PRECISION) -> RigorousReal:
    """Enclosure of the natural logarithm of a positive rational ``x``."""
    q = _as_mpq(x)
    if q <= 0:
        raise ValueError(f"logarithm needs a positive argument, got {x}")
    if q == 1:
        zero = mpfr(0)
        return RigorousReal(zero, zero, precision)
    return RigorousReal.exact(q, precision).log()
