"""Explicit exponent caps for three-digit S-unit relations.

For ``u = d3*b**m + d2*b**n + d1 = q_1**r_1 ... q_s**r_s * M`` (``m > n > 0``)
we compute an integer ``m0`` such that every such relation with
``max(M, d1, d3) <= A`` has ``m <= m0``.  Two branches:

``m >= 2n`` (Archimedean)
    ``Lambda_a = prod q_i**r_i * b**-m * M/d3 - 1`` lies in
    ``(0, b**(1+n-m)]``, so ``log Lambda_a <= -(m/2 - 1) log b``.  Matveev's
    theorem bounds it below.  Primes of S dividing b are merged into the
    q-exponents, leaving only the S-free part ``b'`` of ``b`` as its own term.
    Every exponent obeys ``|e_j| log q_j <= (m+1) log b``.

``m <= 2n`` (p-adic, ``p`` the least prime factor of ``b``)
    ``Lambda_u = prod q_i**r_i * M/d1 - 1 = b**n (d2 + d3 b**(m-n)) / d1`` has
    ``v_p(Lambda_u) >= m/2 - log b/log p``.  Yu's theorem bounds it above,
    with ``M/d1`` in the last slot (exponent 1, so ``B_n = 1``),
    ``B = max(3, (m+1) log b / log q_min)`` and
    ``delta = min(1/2, prod log A_i / B)``.  When p lies in S its exponent is
    forced to ``v_p(d1)`` and absorbed into the last term.

In each branch the comparison function is convex in m, so past the point
where its slope turns nonnegative a single certified sign decides every
larger m.  The crossover is bracketed by doubling and located by bisection
on outward-rounded intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arithmetic import PrimeSet, first_primes, s_part
from .lfl_bounds import log_height, matveev_constant, yu_constant
from .rigorous import DEFAULT_PRECISION, MAX_PRECISION, RigorousReal, precise_log

# exp(exp(e)); every iterated log up to the fourth is positive above it.
THRESHOLD_DOMAIN_START = 3814280


def smallest_prime_factor(b: int) -> int:
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    for p in range(2, math.isqrt(b) + 1):
        if b % p == 0:
            return p
    return b


def _decide(fn, arg, prec: int) -> bool:
    """True iff ``fn(arg, prec)`` is certainly positive, escalating precision
    while the enclosure straddles zero."""
    while True:
        val = fn(arg, prec)
        if val.lo > 0:
            return True
        if val.hi <= 0 or prec >= MAX_PRECISION:
            return False
        prec = min(2 * prec, MAX_PRECISION)


def _first_certified(fn, start: int, prec: int) -> int:
    """Smallest integer ``m >= start`` with ``fn(m)`` certified positive,
    assuming the true sign of ``fn`` is nondecreasing from ``start`` on."""
    if _decide(fn, start, prec):
        return start
    lo, hi = start, max(2 * start, start + 1)
    while not _decide(fn, hi, prec):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _decide(fn, mid, prec):
            hi = mid
        else:
            lo = mid
    return hi


def _ceil_upper(x: RigorousReal) -> int:
    return math.ceil(x.upper)


@dataclass
class BranchSetup:
    """Everything a branch comparison needs, independent of m."""

    name: str
    key: tuple  # (b, primes, cap)
    n_terms: int
    log_heights: list  # of RigorousReal, last slot = cofactor term
    constant: RigorousReal  # Matveev or Yu leading constant
    rate: RigorousReal  # Archimedean: kappa; p-adic: log b / log q_min
    offset: RigorousReal  # the additive log b or log b / log p term
    log_b: RigorousReal
    p: int | None = None
    log_T_base: RigorousReal | None = None

    @property
    def head_product(self) -> RigorousReal:
        out = RigorousReal.exact(1, self.constant.prec)
        for la in self.log_heights[:-1]:
            out = out * la
        return out

    @property
    def full_product(self) -> RigorousReal:
        return self.head_product * self.log_heights[-1]


def _effective_cap(b: int, A) -> int:
    # digits are at most b-1; heights below e are rounded up to 3
    return max(int(math.ceil(Fraction(A))), b - 1, 3)


def archimedean_setup(b: int, S, A, prec: int = DEFAULT_PRECISION) -> BranchSetup:
    S = PrimeSet.of(S)
    cap = _effective_cap(b, A)
    log_b = precise_log(b, prec)
    b_free = s_part(b, S).cofactor
    heights, rates = [], []
    for q in S:
        la = log_height(q, 1, prec)
        heights.append(la)
        rates.append(log_b * la / precise_log(q, prec))
    if b_free > 1:
        la = log_height(b_free, 1, prec)
        heights.append(la)
        rates.append(la)
    heights.append(precise_log(cap, prec))
    kappa = rates[0]
    for r in rates[1:]:
        kappa = kappa.max(r)
    n = len(heights)
    key = (b, S.primes, cap)
    return BranchSetup("archimedean", key, n, heights, matveev_constant(n, prec), kappa, log_b, log_b)


def _arch_gap(setup: BranchSetup, m: int, prec: int) -> RigorousReal:
    """``(m/2 - 1) log b - C(n) log(e B(m)) prod log A_i``; positive means no
    relation with this m survives."""
    s = _rescale(setup, prec)
    heights = s.log_heights
    last = heights[-1]
    B = (s.rate * (m + 1) / last).max(1)
    prod = RigorousReal.exact(1, prec)
    for la in heights:
        prod = prod * la
    lower = s.constant * (B.log() + 1) * prod
    return (RigorousReal.exact(Fraction(m, 2) - 1, prec)) * s.log_b - lower


def padic_setup(b: int, S, A, prec: int = DEFAULT_PRECISION) -> BranchSetup:
    S = PrimeSet.of(S)
    cap = _effective_cap(b, A)
    p = smallest_prime_factor(b)
    log_b = precise_log(b, prec)
    log_p = precise_log(p, prec)
    others = [q for q in S if q != p]
    heights = [log_height(q, 1, prec) for q in others]
    heights.append(precise_log(cap, prec))
    n = len(heights)
    offset = log_b / log_p
    key = (b, S.primes, cap)
    if n == 1:
        return BranchSetup("p-adic", key, 1, heights, 1 / log_p, RigorousReal.exact(0, prec), offset, log_b, p)
    rate = log_b / precise_log(min(others), prec)
    # log T without the -log(delta) term; B_n = 1
    base = precise_log(2, prec) + (n + 1) * (6 * n + 5) + log_p * (n + 1)
    for la in heights[:-1]:
        base = base + la.log()
    return BranchSetup("p-adic", key, n, heights, yu_constant(n, p, prec), rate, offset, log_b, p, base)


def _padic_yu(s: BranchSetup, B: RigorousReal, P: RigorousReal) -> RigorousReal:
    """Yu's bound with ``B_n = 1`` and ``delta = min(1/2, P/B)``."""
    prec = s.constant.prec
    ratio = B / P
    log_inv_delta = precise_log(2, prec).max(ratio.log())
    log_T = s.log_T_base + log_inv_delta
    second = (B / 2).min(P)  # delta * B / B_n
    return s.constant * (P * log_T).max(second)


def _padic_gap(setup: BranchSetup, m: int, prec: int) -> RigorousReal:
    """``m/2 - log b/log p - U(m)``; positive means no relation with this m."""
    s = _rescale(setup, prec)
    heights = s.log_heights
    half = RigorousReal.exact(Fraction(m, 2), prec)
    if s.n_terms == 1:
        return half - s.offset - s.constant * heights[-1]
    P = RigorousReal.exact(1, prec)
    for la in heights:
        P = P * la
    B = (s.rate * (m + 1)).max(3)
    single = heights[-1] / precise_log(s.p, prec)
    U = _padic_yu(s, B, P).max(single)
    return half - s.offset - U


@lru_cache(maxsize=512)
def _setup(kind: str, b: int, primes: tuple, cap: int, prec: int) -> BranchSetup:
    builder = archimedean_setup if kind == "archimedean" else padic_setup
    return builder(b, primes, cap, prec)


def _rescale(setup: BranchSetup, prec: int) -> BranchSetup:
    """The same setup evaluated at precision ``prec``."""
    if setup.constant.prec == prec:
        return setup
    return _setup(setup.name, *setup.key, prec)


def _monotone_start(setup: BranchSetup) -> int:
    """An m from which the gap function is nondecreasing."""
    if setup.name == "archimedean":
        # slope log b / 2 - C P / (m+1) in the logarithmic regime
        threshold = setup.constant * setup.full_product * 2 / setup.log_b
    elif setup.n_terms == 1:
        return 1
    else:
        # slope 1/2 - K P / (m+1) once log(B/P) is active; 1/2 otherwise
        threshold = setup.constant * setup.full_product * 2
    return max(1, _ceil_upper(threshold) - 1)


def _branch_bound(setup: BranchSetup, gap, prec: int) -> int:
    start = _monotone_start(setup)
    first = _first_certified(lambda m, pr: gap(setup, m, pr), start, prec)
    return max(first - 1, 1)


def archimedean_m_bound(b: int, S, A=None, precision: int = DEFAULT_PRECISION) -> int:
    """Largest m not excluded in the ``m >= 2n`` branch."""
    A = _default_cap(b) if A is None else A
    return _branch_bound(
        _setup("archimedean", b, PrimeSet.of(S).primes, _effective_cap(b, A), precision), _arch_gap, precision
    )


def padic_m_bound(b: int, S, A=None, precision: int = DEFAULT_PRECISION) -> int:
    """Largest m not excluded in the ``m <= 2n`` branch."""
    A = _default_cap(b) if A is None else A
    return _branch_bound(
        _setup("p-adic", b, PrimeSet.of(S).primes, _effective_cap(b, A), precision), _padic_gap, precision
    )


def _default_cap(b: int) -> int:
    return max(b, 3)


# -- slope in log A, used for the S-part exponent ------------------------------


def _arch_slope_gap(setup: BranchSetup, t: Fraction, prec: int, L0: RigorousReal):
    """``G(t) - log b / L0`` where ``G(t) L - log b`` lower-bounds the
    Archimedean gap at ``m = t L`` for every ``L = log A >= L0``."""
    s = _rescale(setup, prec)
    L0 = RigorousReal.exact(L0.lower, prec)
    B = (s.rate * (RigorousReal.exact(t, prec) + 1 / L0)).max(1)
    G = s.log_b * t / 2 - s.constant * s.head_product * (B.log() + 1)
    return G - s.log_b / L0


def _padic_slope_gap(setup: BranchSetup, t: Fraction, prec: int, L0: RigorousReal):
    s = _rescale(setup, prec)
    L0 = RigorousReal.exact(L0.lower, prec)
    half = RigorousReal.exact(t / 2, prec)
    if s.n_terms == 1:
        return half - s.constant - s.offset / L0
    Q = s.head_product
    ratio = ((s.rate * (RigorousReal.exact(t, prec) + 1 / L0)) / Q).max(RigorousReal.exact(3, prec) / (Q * L0))
    log_inv_delta = precise_log(2, prec).max(ratio.log())
    V = s.constant * Q * (s.log_T_base + log_inv_delta)
    V = V.max(1 / precise_log(s.p, prec))
    return half - V - s.offset / L0


def _slope(setup: BranchSetup, fn, prec: int, L0: RigorousReal) -> Fraction:
    if setup.name == "archimedean":
        t_mono = setup.constant * setup.head_product * 2 / setup.log_b - 1 / L0
    elif setup.n_terms == 1:
        t_mono = RigorousReal.exact(0, prec)
    else:
        t_mono = setup.constant * setup.head_product * 2 - 1 / L0
    start = max(Fraction(math.ceil(t_mono.upper)), Fraction(1))
    # integer grid, then refine by bisection on 1/1024 steps
    k = _first_certified(lambda j, pr: fn(setup, Fraction(j), pr, L0), int(start), prec)
    lo, hi = Fraction(max(k - 1, int(start))), Fraction(k)
    if lo == hi:
        return hi
    while hi - lo > Fraction(1, 1024):
        mid = (lo + hi) / 2
        if _decide(lambda t, pr: fn(setup, t, pr, L0), mid, prec):
            hi = mid
        else:
            lo = mid
    return hi


# -- certificate -----------------------------------------------------------------


@dataclass
class BoundCertificate:
    base: int
    primes: tuple[int, ...]
    cofactor_cap: int
    Q: RigorousReal
    m_arch: int
    m_padic: int
    m0: int
    p: int
    slope: Fraction
    c: Fraction
    precision: int
    assumptions: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "primes": list(self.primes),
            "cofactor_cap": str(self.cofactor_cap),
            "Q": self.Q.to_dict(),
            "m_arch": str(self.m_arch),
            "m_padic": str(self.m_padic),
            "m0": str(self.m0),
            "p": self.p,
            "slope": str(self.slope),
            "c": str(self.c),
            "c_float": float(self.c),
            "precision": self.precision,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundCertificate":
        return cls(
            int(data["base"]),
            tuple(int(q) for q in data["primes"]),
            int(data["cofactor_cap"]),
            RigorousReal.from_dict(data["Q"]),
            int(data["m_arch"]),
            int(data["m_padic"]),
            int(data["m0"]),
            int(data["p"]),
            Fraction(data["slope"]),
            Fraction(data["c"]),
            int(data["precision"]),
            list(data.get("assumptions", [])),
        )


def three_digit_certificate(b: int, S, A=None, precision: int = DEFAULT_PRECISION) -> BoundCertificate:
    """Certified ``m0`` and S-part exponent ``c`` for base ``b`` and primes ``S``.

    Guarantees: every relation ``d3 b**m + d2 b**n + d1 = [u]_S * M`` with
    ``m > n > 0`` and ``max(M, d1, d3) <= cofactor_cap`` has ``m <= m0``; and
    every such ``u`` (any M) with ``m > m0`` has ``[u]_S <= u**(1 - c)``.

    The exponent follows from the slope ``tau``: for every cap ``A`` at least
    the default one and every ``m >= tau log A`` both branches are
    contradictory.  A relation with ``m > m0`` then has ``M > cofactor_cap``
    and ``m < tau log M``, and ``c = (m0+1) / ((m0+2) tau log b)`` turns this
    into ``M >= u**c``.
    """
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    S = PrimeSet.of(S)
    A = _default_cap(b) if A is None else A
    cap = _effective_cap(b, A)
    prec = precision
    arch = _setup("archimedean", b, S.primes, cap, prec)
    padic = _setup("p-adic", b, S.primes, cap, prec)
    m_arch = _branch_bound(arch, _arch_gap, prec)
    m_padic = _branch_bound(padic, _padic_gap, prec)
    m0 = max(m_arch, m_padic)

    L0 = precise_log(cap, prec)
    tau = max(_slope(arch, _arch_slope_gap, prec, L0), _slope(padic, _padic_slope_gap, prec, L0))
    log_b_hi = precise_log(b, prec).upper
    c = Fraction(m0 + 1, m0 + 2) / (tau * log_b_hi)
    # 60 significant bits, rounded down
    shift = max(0, 60 - c.numerator.bit_length() + c.denominator.bit_length())
    c = Fraction(c.numerator * 2**shift // c.denominator, 2**shift)

    Q = RigorousReal.exact(1, prec)
    for q in S:
        Q = Q * precise_log(q, prec)
    assumptions = [
        f"cofactor and outer digits bounded by A = {cap}",
        "natural logarithms; outward-rounded interval evaluation",
        "B_n = 1 with the cofactor term last in the p-adic branch",
        f"c = (m0+1)/((m0+2) * slope * log b) with slope {tau}",
    ]
    b_free = s_part(b, S).cofactor
    if b_free != b:
        assumptions.append(f"primes of S dividing b merged; S-free part of b is {b_free}")
    return BoundCertificate(b, S.primes, cap, Q, m_arch, m_padic, m0, padic.p, tau, c, prec, assumptions)


def first_primes_m_bound(s: int, b: int = 2, precision: int = DEFAULT_PRECISION) -> int:
    """``m0`` for S = the first ``s`` primes and S-units (``M = 1``)."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return three_digit_certificate(b, first_primes(s), max(b, 2), precision).m0


# -- smoothness threshold -----------------------------------------------------------


def _threshold_parts(n, eps: Fraction, prec: int):
    l1 = precise_log(n, prec)
    l2 = l1.log()
    if l2.lo <= 0:
        return None, l2
    l3 = l2.log()
    if l3.lo <= 0:
        return None, l3
    l4 = l3.log()
    if l4.lo <= 0:
        return None, l4
    one_minus = RigorousReal.exact(1 - eps, prec)
    return one_minus * l2 * l3 / l4, l4


def smooth_threshold_enclosure(n, eps, precision: int = DEFAULT_PRECISION) -> RigorousReal:
    """Enclosure of ``(1-eps) loglog n * logloglog n / loglogloglog n``."""
    eps = Fraction(str(eps)) if not isinstance(eps, Fraction) else eps
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    prec = precision
    while True:
        value, last = _threshold_parts(n, eps, prec)
        if value is not None:
            return value
        if last.hi <= 0 or prec >= MAX_PRECISION:
            raise ValueError(f"n = {n} is below the iterated-log domain (n > exp(exp(e)))")
        prec = min(2 * prec, MAX_PRECISION)


def smooth_threshold(n, eps, precision: int = DEFAULT_PRECISION) -> float:
    return smooth_threshold_enclosure(n, eps, precision).mid()
