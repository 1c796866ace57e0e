"""Explicit bounds for linear forms in logarithms of rational numbers.

Two estimates for ``Lambda = prod (x_i/y_i)**b_i - 1`` (nonzero):

* Matveev's lower bound for ``log|Lambda|`` (positive rationals), and
* Yu's upper bound for the p-adic valuation ``v_p(Lambda)``.

Both are evaluated on :class:`~fewdigits.rigorous.RigorousReal` intervals and
the certified endpoint is returned: the lower endpoint for Matveev, the
upper endpoint for Yu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arithmetic import is_prime, valuation
from .rigorous import DEFAULT_PRECISION, RigorousReal, precise_log

# Exact rational powering is only attempted up to this many bits of output.
EXACT_POWER_BIT_BUDGET = 200_000


@dataclass(frozen=True)
class LinearFormInstance:
    """Rationals ``x_i/y_i`` with integer exponents ``b_i``.

    ``nonzero`` records whether ``prod (x_i/y_i)**b_i != 1``.  When left as
    ``None`` it is decided exactly, which needs the exponents to be small
    enough for rational powering.
    """

    items: tuple[tuple[int, int, int], ...]
    nonzero: bool | None = None

    def __post_init__(self):
        items = tuple((int(x), int(y), int(b)) for x, y, b in self.items)
        object.__setattr__(self, "items", items)
        if len(items) < 2:
            raise ValueError("a linear form needs at least two terms")
        for x, y, _ in items:
            if x == 0:
                raise ValueError("numerators must be nonzero")
            if y <= 0:
                raise ValueError("denominators must be positive")

    @property
    def n(self) -> int:
        return len(self.items)

    def value_bits(self) -> int:
        return sum(abs(b) * max(abs(x), y).bit_length() for x, y, b in self.items)

    def product(self) -> Fraction:
        if self.value_bits() > EXACT_POWER_BIT_BUDGET:
            raise OverflowError("exponents too large for exact rational powering")
        out = Fraction(1)
        for x, y, b in self.items:
            out *= Fraction(x, y) ** b
        return out

    def is_nondegenerate(self) -> bool:
        if self.nonzero is not None:
            return self.nonzero
        return self.product() != 1

    def to_dict(self) -> dict:
        return {
            "items": [[str(x), str(y), str(b)] for x, y, b in self.items],
            "nonzero": self.nonzero,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearFormInstance":
        return cls(
            tuple((int(x), int(y), int(b)) for x, y, b in data["items"]),
            data.get("nonzero"),
        )


@dataclass
class BoundEvaluation:
    kind: str
    bound: Fraction
    enclosure: RigorousReal
    log_heights: list[RigorousReal]
    B: RigorousReal
    precision: int
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "bound": str(self.bound),
            "bound_float": float(self.bound),
            "enclosure": self.enclosure.to_dict(),
            "log_A": [a.to_dict() for a in self.log_heights],
            "B": self.B.to_dict(),
            "precision": self.precision,
            "extra": {k: v.to_dict() if isinstance(v, RigorousReal) else v for k, v in self.extra.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundEvaluation":
        extra = {}
        for k, v in data.get("extra", {}).items():
            extra[k] = RigorousReal.from_dict(v) if isinstance(v, dict) and "lower" in v else v
        return cls(
            data["kind"],
            Fraction(data["bound"]),
            RigorousReal.from_dict(data["enclosure"]),
            [RigorousReal.from_dict(a) for a in data["log_A"]],
            RigorousReal.from_dict(data["B"]),
            int(data["precision"]),
            extra,
        )


def log_height(x: int, y: int, prec: int) -> RigorousReal:
    """``log max{|x|, |y|, e}``; exactly 1 when both are at most 2."""
    h = max(abs(x), abs(y))
    if h <= 2:
        return RigorousReal.exact(1, prec)
    return precise_log(h, prec)


def matveev_constant(n: int, prec: int = DEFAULT_PRECISION) -> RigorousReal:
    """``8 * 30**(n+3) * n**(9/2)``."""
    return RigorousReal.exact(8 * 30 ** (n + 3), prec) * RigorousReal.exact(n, prec) ** Fraction(9, 2)


def matveev_value(n: int, log_heights: Sequence[RigorousReal], B: RigorousReal, prec: int) -> RigorousReal:
    """Enclosure of ``-C(n) log(e B) prod log A_i``."""
    out = matveev_constant(n, prec) * (B.log() + 1)
    for la in log_heights:
        out = out * la
    return -out


def matveev_bound(inst: LinearFormInstance, precision: int = DEFAULT_PRECISION) -> BoundEvaluation:
    """Lower bound ``L`` with ``log|prod (x_i/y_i)**b_i - 1| > L``."""
    for x, y, _ in inst.items:
        if x <= 0:
            raise ValueError("the Archimedean bound needs positive rationals")
    if not inst.is_nondegenerate():
        raise ValueError("the product equals 1, so the linear form vanishes")
    prec = precision
    heights = [log_height(x, y, prec) for x, y, _ in inst.items]
    last = heights[-1]
    B = RigorousReal.exact(1, prec)
    for (_, _, b), la in zip(inst.items, heights):
        B = B.max(la * abs(b) / last)
    value = matveev_value(inst.n, heights, B, prec)
    return BoundEvaluation("matveev", value.lower, value, heights, B, prec)


def yu_constant(n: int, p: int, prec: int = DEFAULT_PRECISION) -> RigorousReal:
    """``(16e)**(2(n+1)) n**(3/2) (log 2n)**2 p / (log p)**2``."""
    e = RigorousReal.e(prec)
    out = (e * 16) ** (2 * (n + 1))
    out = out * RigorousReal.exact(n, prec) ** Fraction(3, 2)
    out = out * precise_log(2 * n, prec) ** 2
    return out * p / precise_log(p, prec) ** 2


def yu_log_T(n: int, p: int, B_n, delta, head_heights: Sequence[RigorousReal], prec: int) -> RigorousReal:
    """``log T`` for ``T = 2 B_n / delta * e**((n+1)(6n+5)) * p**(n+1) * prod_{i<n} log A_i``."""
    out = precise_log(2, prec) + _log_of(B_n, prec) - _log_of(delta, prec)
    out = out + (n + 1) * (6 * n + 5) + precise_log(p, prec) * (n + 1)
    for la in head_heights:
        out = out + la.log()
    return out


def _log_of(x, prec: int) -> RigorousReal:
    if isinstance(x, RigorousReal):
        return x.log()
    return precise_log(x, prec)


def _as_interval(x, prec: int) -> RigorousReal:
    return x if isinstance(x, RigorousReal) else RigorousReal.exact(x, prec)


def _fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def yu_bound(
    p: int,
    inst: LinearFormInstance,
    B=None,
    B_n=None,
    delta=Fraction(1, 2),
    precision: int = DEFAULT_PRECISION,
) -> BoundEvaluation:
    """Upper bound ``U`` with ``v_p(prod (x_i/y_i)**b_i - 1) < U``.

    ``B`` defaults to ``max{|b_i|, 3}`` and ``B_n`` to ``|b_n|``.  The term
    whose exponent has the smallest p-adic valuation is moved to the last
    slot before evaluation (ties keep the current last term).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    delta = _fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")
    items = list(inst.items)
    for x, y, b in items:
        if b == 0:
            raise ValueError("exponents must be nonzero")
        if x % p == 0 or y % p == 0:
            raise ValueError(f"{x}/{y} is not a {p}-adic unit")
    if not inst.is_nondegenerate():
        raise ValueError("the product equals 1, so the linear form vanishes")

    vals = [valuation(abs(b), p) for _, _, b in items]
    best = min(vals)
    if vals[-1] != best:
        j = vals.index(best)
        items[j], items[-1] = items[-1], items[j]
    n = len(items)
    bmax = max(abs(b) for _, _, b in items)
    B = Fraction(max(bmax, 3)) if B is None else _fraction(B)
    B_n = Fraction(abs(items[-1][2])) if B_n is None else _fraction(B_n)
    if B < max(bmax, 3):
        raise ValueError(f"B = {B} is below max(|b_i|, 3) = {max(bmax, 3)}")
    if not B >= B_n >= abs(items[-1][2]):
        raise ValueError("need B >= B_n >= |b_n|")

    prec = precision
    heights = [log_height(x, y, prec) for x, y, _ in items]
    logT = yu_log_T(n, p, B_n, delta, heights[:-1], prec)
    first = logT
    for la in heights:
        first = first * la
    second = RigorousReal.exact(delta * B / B_n, prec)
    value = yu_constant(n, p, prec) * first.max(second)
    return BoundEvaluation(
        "yu",
        value.upper,
        value,
        heights,
        _as_interval(B, prec),
        prec,
        {
            "p": p,
            "B_n": str(B_n),
            "delta": str(delta),
            "log_T": logT,
            "order": [[str(x), str(y), str(b)] for x, y, b in items],
        },
    )


def true_archimedean_gap(
    inst: LinearFormInstance, precision: int = DEFAULT_PRECISION, max_exponent: int = 64
) -> RigorousReal:
    """Enclosure of ``log|prod (x_i/y_i)**b_i - 1|`` from exact rational arithmetic."""
    if any(abs(b) > max_exponent for _, _, b in inst.items):
        raise OverflowError(f"exponent above the exact-powering budget {max_exponent}")
    lam = inst.product() - 1
    if lam == 0:
        raise ValueError("the linear form vanishes")
    return precise_log(abs(lam), precision)


def rational_valuation(z: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    z = Fraction(z)
    if z == 0:
        raise ValueError("valuation of zero is infinite")
    return valuation(abs(z.numerator), p) - valuation(z.denominator, p)


def true_padic_valuation(inst: LinearFormInstance, p: int) -> int:
    """Exact ``v_p(prod (x_i/y_i)**b_i - 1)``."""
    return rational_valuation(inst.product() - 1, p)
