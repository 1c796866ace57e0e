"""Exhaustive search for S-units with at most three nonzero base-b digits.

Solves ``d3*b**m + d2*b**n + d1 = q_1**r_1 ... q_s**r_s`` for ``m <= m_max``
and builds the empirical tables for S-parts and greatest prime factors.

Two exact strategies are available:

``patterns``
    Walk every digit pattern, reject most candidates with residue sieves,
    and confirm survivors by dividing out the primes of S.
``units``
    Walk every S-unit below ``b**(m_max+1)`` and keep those with two or
    three nonzero digits.

Two-digit solutions (``d2 = 0``) are reported with ``n = 0``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


from .arithmetic import COMPLETE, DEFAULT_EFFORT, FactorEffort, PrimeSet, greatest_prime_factor, primes_up_to, s_part
from .effective_bounds import smooth_threshold_enclosure
from .rigorous import DEFAULT_PRECISION, RigorousReal, precise_log
from .sparse_digits import digits_of, enumerate_sparse, enumerate_three_term

# sieve moduli are kept below this so residue tables stay small
MAX_SIEVE_MODULUS = 1 << 20


@dataclass(frozen=True, order=True)
class SolutionRecord:
    value: int
    m: int
    n: int
    d3: int
    d2: int
    d1: int
    base: int = field(compare=False)
    primes: tuple[int, ...] = field(compare=False)
    exponents: tuple[int, ...] = field(compare=False)

    @property
    def three_digit(self) -> bool:
        return self.d2 != 0

    def revalidate(self) -> bool:
        b = self.base
        from_digits = self.d3 * b**self.m + self.d2 * b**self.n + self.d1
        from_units = math.prod(q**r for q, r in zip(self.primes, self.exponents))
        return from_digits == from_units == self.value and self.value % b != 0

    def to_dict(self) -> dict:
        return {
            "u": str(self.value),
            "b": self.base,
            "m": self.m,
            "n": self.n,
            "d3": self.d3,
            "d2": self.d2,
            "d1": self.d1,
            "primes": list(self.primes),
            "r": list(self.exponents),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionRecord":
        return cls(
            int(data["u"]),
            int(data["m"]),
            int(data["n"]),
            int(data["d3"]),
            int(data["d2"]),
            int(data["d1"]),
            int(data["b"]),
            tuple(int(q) for q in data["primes"]),
            tuple(int(r) for r in data["r"]),
        )


def _record(u: int, b: int, m: int, n: int, d3: int, d2: int, d1: int, S: PrimeSet) -> SolutionRecord | None:
    f = s_part(u, S)
    if f.cofactor != 1:
        return None
    return SolutionRecord(u, m, n, d3, d2, d1, b, S.primes, f.exponents)


# -- residue sieves ------------------------------------------------------------


def _subgroup(gens: Iterable[int], mod: int) -> frozenset[int]:
    """The multiplicative subgroup of (Z/mod)^* generated by ``gens``."""
    gens = [g % mod for g in gens]
    seen = {1 % mod}
    frontier = [1 % mod]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % mod
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


@dataclass
class ResidueSieve:
    """Necessary conditions for a value to be an S-unit.

    For a prime ``l`` outside S, an S-unit is a unit mod ``l`` lying in the
    subgroup generated by S.  For ``q`` in S and ``x = u mod q**t`` with
    ``x = q**v * w``, the part ``w`` must lie in the subgroup generated by
    the other primes modulo ``q**(t-v)``.
    """

    base: int
    primes: tuple[int, ...]
    power: int = 10
    aux: tuple[tuple[int, frozenset], ...] = ()
    local: tuple[tuple[int, int, tuple], ...] = ()

    @classmethod
    def build(cls, b: int, S: PrimeSet, power: int = 10, aux_count: int = 6) -> "ResidueSieve":
        aux = []
        for ell in primes_up_to(5000):
            if len(aux) >= aux_count:
                break
            if ell in S.primes:
                continue
            H = _subgroup(S.primes, ell)
            if 4 * len(H) <= ell - 1:
                aux.append((ell, H))
        local = []
        for q in S.primes:
            t = power
            while t > 1 and q**t > MAX_SIEVE_MODULUS:
                t -= 1
            others = [x for x in S.primes if x != q]
            groups = tuple(_subgroup(others, q**k) if others else frozenset({1}) for k in range(t + 1))
            local.append((q, t, groups))
        return cls(b, S.primes, power, tuple(aux), tuple(local))

    @property
    def moduli(self) -> list[int]:
        return [ell for ell, _ in self.aux] + [q**t for q, t, _ in self.local]

    def powers(self, m_max: int) -> list[list[int]]:
        """``b**e mod N`` for every modulus ``N`` and ``0 <= e <= m_max``."""
        return [[pow(self.base, e, N) for e in range(m_max + 1)] for N in self.moduli]

    def admits(self, residues: list[int]) -> bool:
        """Whether a value with these residues (ordered as :attr:`moduli`) can be an S-unit."""
        k = 0
        for _, H in self.aux:
            if residues[k] not in H:
                return False
            k += 1
        for q, t, groups in self.local:
            x = residues[k]
            k += 1
            if x == 0:
                continue
            v = 0
            while x % q == 0:
                x //= q
                v += 1
            mod = q ** (t - v)
            if x % mod not in groups[t - v]:
                return False
        return True


# -- search ---------------------------------------------------------------------


def _solve_patterns(b: int, primes: tuple, ms: list[int], include_two_digit: bool, power: int) -> list[SolutionRecord]:
    S = PrimeSet(primes)
    sieve = ResidueSieve.build(b, S, power)
    mods = sieve.moduli
    table = sieve.powers(max(ms, default=1))
    out = []
    for m in ms:
        for d3 in range(1, b):
            top = d3 * b**m
            top_r = [d3 * t[m] for t in table]
            if include_two_digit:
                for d1 in range(1, b):
                    res = [(x + d1) % N for x, N in zip(top_r, mods)]
                    if sieve.admits(res):
                        rec = _record(top + d1, b, m, 0, d3, 0, d1, S)
                        if rec:
                            out.append(rec)
            for n in range(1, m):
                for d2 in range(1, b):
                    mid = top + d2 * b**n
                    mid_r = [x + d2 * t[n] for x, t in zip(top_r, table)]
                    for d1 in range(1, b):
                        res = [(x + d1) % N for x, N in zip(mid_r, mods)]
                        if sieve.admits(res):
                            rec = _record(mid + d1, b, m, n, d3, d2, d1, S)
                            if rec:
                                out.append(rec)
    return out


def _units_below(primes: tuple, bound: int, first_exponents: Iterable[int] | None = None):
    """All ``prod q**r < bound``; the exponent of the first prime may be restricted."""
    q0, rest = primes[0], primes[1:]

    def walk(i: int, acc: int, exps: list):
        if i == len(rest):
            yield acc, tuple(exps)
            return
        q = rest[i]
        r = 0
        while acc < bound:
            yield from walk(i + 1, acc, exps + [r])
            acc *= q
            r += 1

    if first_exponents is None:
        first_exponents = range(bound.bit_length() + 1)
    for r0 in first_exponents:
        start = q0**r0
        if start >= bound:
            continue
        for u, exps in walk(0, start, []):
            yield u, (r0,) + exps


def _solve_units(b: int, primes: tuple, m_max: int, include_two_digit: bool, r0s: list[int]) -> list[SolutionRecord]:
    out = []
    bound = b ** (m_max + 1)
    for u, exps in _units_below(primes, bound, r0s):
        if u % b == 0 or u <= b:
            continue
        ds = digits_of(u, b)
        nz = [(e, d) for e, d in enumerate(ds) if d]
        if len(nz) == 3:
            (_, d1), (n, d2), (m, d3) = nz
        elif len(nz) == 2 and include_two_digit:
            (_, d1), (m, d3) = nz
            n, d2 = 0, 0
        else:
            continue
        out.append(SolutionRecord(u, m, n, d3, d2, d1, b, primes, exps))
    return out


def _estimated_units(primes: tuple, m_max: int, b: int) -> float:
    log_bound = (m_max + 1) * math.log(b)
    s = len(primes)
    return log_bound**s / (math.factorial(s) * math.prod(math.log(q) for q in primes)) + 1


def _estimated_patterns(b: int, m_max: int) -> float:
    return m_max * (b - 1) ** 2 + m_max * m_max / 2 * (b - 1) ** 3


def _partition(items: list[int], workers: int) -> list[list[int]]:
    return [p for p in (items[i::workers] for i in range(workers)) if p]


def solve_three_digit(
    b: int,
    S,
    m_max: int,
    workers: int = 1,
    include_two_digit: bool = True,
    strategy: str = "auto",
    residue_power: int = 10,
) -> list[SolutionRecord]:
    """Every S-unit ``d3*b**m + d2*b**n + d1`` with ``m <= m_max``, sorted by value.

    The output does not depend on ``workers`` or ``strategy``.
    """
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    S = PrimeSet.of(S)
    if strategy == "auto":
        # a sieved pattern costs roughly six times as much as a unit
        cheap = _estimated_units(S.primes, m_max, b) < 6 * _estimated_patterns(b, m_max)
        strategy = "units" if cheap else "patterns"
    if strategy == "patterns":
        parts = _partition(list(range(1, m_max + 1)), workers)
        args = [(b, S.primes, part, include_two_digit, residue_power) for part in parts]
        fn = _solve_patterns
    elif strategy == "units":
        top = ((m_max + 1) * b.bit_length()) // max(1, int(math.log2(S.primes[0]))) + 2
        parts = _partition(list(range(top + 1)), workers)
        args = [(b, S.primes, m_max, include_two_digit, part) for part in parts]
        fn = _solve_units
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    if workers == 1 or len(args) == 1:
        chunks = [fn(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_call, [(fn, a) for a in args]))
    return sorted(rec for chunk in chunks for rec in chunk)


def _call(job):
    fn, args = job
    return fn(*args)


# -- S-parts of 2**m + 2**n + 1 against 2**(3m/4) --------------------------------


@dataclass(frozen=True, order=True)
class Violation:
    """``[2**m + 2**n + 1]_S > 2**(3m/4)``."""

    m: int
    n: int
    u: int
    s_part: int

    @property
    def cap_log2(self) -> Fraction:
        return Fraction(3 * self.m, 4)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "u": str(self.u),
            "s_part": str(self.s_part),
            "cap": f"2^({self.cap_log2})",
            "cap_float": 2.0 ** float(self.cap_log2),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Violation":
        return cls(int(data["m"]), int(data["n"]), int(data["u"]), int(data["s_part"]))


def check_problem42(m_max: int, S=(3, 5)) -> list[Violation]:
    """All ``m > n > 0``, ``m <= m_max`` with ``[2**m + 2**n + 1]_S**4 > 2**(3m)``."""
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    S = PrimeSet.of(S)
    out = []
    for m in range(2, m_max + 1):
        for n in range(1, m):
            u = 2**m + 2**n + 1
            sp = s_part(u, S).s_part
            if sp**4 > 2 ** (3 * m):
                out.append(Violation(m, n, u, sp))
    return out


# -- trend tables ----------------------------------------------------------------------


@dataclass
class TrendRow:
    j: int
    u: int
    s_part: int | None = None
    cofactor: int | None = None
    below: bool | None = None  # [u]_S < u**eps
    gpf: int | None = None
    gpf_status: str | None = None
    threshold: float | None = None  # None: outside the iterated-log domain
    exceeds: bool | None = None  # P[u] > threshold; None when not comparable
    witnesses: tuple = ()

    def to_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "j": self.j,
            "u": str(self.u),
            "s_part": s(self.s_part),
            "cofactor": s(self.cofactor),
            "below": self.below,
            "gpf": s(self.gpf),
            "gpf_status": self.gpf_status,
            "threshold": "n/a" if self.threshold is None else self.threshold,
            "exceeds": self.exceeds,
            "witnesses": [list(w) for w in self.witnesses],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrendRow":
        def i(x):
            return None if x is None else int(x)

        thr = data.get("threshold")
        return cls(
            int(data["j"]),
            int(data["u"]),
            i(data.get("s_part")),
            i(data.get("cofactor")),
            data.get("below"),
            i(data.get("gpf")),
            data.get("gpf_status"),
            None if thr in (None, "n/a") else float(thr),
            data.get("exceeds"),
            tuple(tuple(w) for w in data.get("witnesses", [])),
        )


def _as_fraction(eps) -> Fraction:
    return eps if isinstance(eps, Fraction) else Fraction(str(eps))


def power_below(x: int, u: int, eps: Fraction, prec: int = DEFAULT_PRECISION) -> bool:
    """Exact test of ``x < u**eps`` for positive integers and rational ``eps``."""
    if x < 1 or u < 1:
        raise ValueError("arguments must be positive")
    if u == 1:
        return x < 1
    a, c = eps.numerator, eps.denominator
    if c * x.bit_length() + a * u.bit_length() < 1 << 16:
        return x**c < u**a
    # compare c log x with a log u on intervals, then fall back to exact powers
    lhs = precise_log(x, prec) * c
    rhs = precise_log(u, prec) * a
    if lhs.hi < rhs.lo:
        return True
    if lhs.lo > rhs.hi:
        return False
    return x**c < u**a


def verify_spart_trend(b: int, k: int, S, j_count: int, eps) -> list[TrendRow]:
    """S-part of the first ``j_count`` integers with at most ``k`` nonzero digits."""
    S = PrimeSet.of(S)
    eps = _as_fraction(eps)
    rows = []
    for j, su in enumerate(enumerate_sparse(b, k, count=j_count), start=1):
        f = s_part(su.value, S)
        rows.append(TrendRow(j, su.value, f.s_part, f.cofactor, power_below(f.s_part, su.value, eps)))
    return rows


def _threshold_or_none(u: int, eps: Fraction) -> RigorousReal | None:
    try:
        return smooth_threshold_enclosure(u, eps)
    except ValueError:
        return None


def p_table(
    source: str,
    params: tuple[int, int],
    count: int,
    effort: FactorEffort = DEFAULT_EFFORT,
    eps=Fraction(1, 10),
    start: int = 1,
) -> list[TrendRow]:
    """Greatest prime factors against ``(1-eps) ll u * lll u / llll u``.

    ``source`` is ``"sparse"`` with ``params = (b, k)`` or ``"three_term"``
    with ``params = (a, c)``.  Rows with a partial factorization are never
    compared with the threshold.
    """
    eps = _as_fraction(eps)
    if source == "sparse":
        b, k = params
        stream = ((su.value, ()) for su in enumerate_sparse(b, k))
    elif source == "three_term":
        a, c = params
        stream = ((tv.value, tv.witnesses) for tv in enumerate_three_term(a, c))
    else:
        raise ValueError(f"unknown source {source!r}")
    rows = []
    for j, (u, wit) in enumerate(stream, start=1):
        if j < start:
            continue
        if len(rows) >= count:
            break
        if u < 2:
            rows.append(TrendRow(j, u, gpf=1, gpf_status=COMPLETE, witnesses=wit))
            continue
        p, status = greatest_prime_factor(u, effort)
        enc = _threshold_or_none(u, eps)
        thr = None if enc is None else enc.mid()
        exceeds = None
        if enc is not None and status == COMPLETE:
            if p > enc.upper:
                exceeds = True
            elif p < enc.lower:
                exceeds = False
        rows.append(TrendRow(j, u, gpf=p, gpf_status=status, threshold=thr, exceeds=exceeds, witnesses=wit))
    return rows
