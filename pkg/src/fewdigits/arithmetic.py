"""Exact S-parts, valuations, smoothness, greatest prime factor and radical.

S-parts only ever divide by the members of S, so they are exact for inputs
of any size.  Anything that needs a full factorization (greatest prime
factor, radical, smoothness) runs under a :class:`FactorEffort` budget and
reports ``complete`` or ``partial`` instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import gmpy2

COMPLETE = "complete"
PARTIAL = "partial"

# Strong pseudoprime tests to these bases are deterministic below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
DETERMINISTIC_LIMIT = 3317044064679887385961981


def _miller_rabin(n: int, bases: Sequence[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < DETERMINISTIC_LIMIT``."""
    if n >= DETERMINISTIC_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    return _miller_rabin(n, _MR_BASES)


def _probable_prime(n: int) -> bool:
    # BPSW above the deterministic range; no known counterexample.
    if n < DETERMINISTIC_LIMIT:
        return is_prime(n)
    return bool(gmpy2.is_bpsw_prp(n))


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def first_primes(count: int) -> tuple[int, ...]:
    if count < 1:
        raise ValueError("count must be >= 1")
    limit = 16
    while True:
        ps = primes_up_to(limit)
        if len(ps) >= count:
            return ps[:count]
        limit *= 2


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(q) for q in self.primes)
        object.__setattr__(self, "primes", ps)
        if not ps:
            raise ValueError("a prime set needs at least one prime")
        if any(x >= y for x, y in zip(ps, ps[1:])):
            raise ValueError(f"primes must be strictly increasing: {ps}")
        for q in ps:
            if not is_prime(q):
                raise ValueError(f"{q} is not prime")

    @classmethod
    def of(cls, primes) -> "PrimeSet":
        if isinstance(primes, PrimeSet):
            return primes
        if isinstance(primes, str):
            primes = [int(t) for t in primes.split(",") if t.strip()]
        return cls(tuple(sorted(int(q) for q in primes)))

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, q):
        return q in self.primes


@dataclass(frozen=True)
class SFactorization:
    n: int
    primes: tuple[int, ...]
    exponents: tuple[int, ...]
    cofactor: int

    @property
    def s_part(self) -> int:
        out = 1
        for q, r in zip(self.primes, self.exponents):
            out *= q**r
        return out

    @property
    def is_s_unit(self) -> bool:
        return self.cofactor == 1

    def to_dict(self) -> dict:
        return {
            "n": str(self.n),
            "primes": list(self.primes),
            "exponents": list(self.exponents),
            "cofactor": str(self.cofactor),
            "s_part": str(self.s_part),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SFactorization":
        out = cls(
            int(data["n"]),
            tuple(int(q) for q in data["primes"]),
            tuple(int(r) for r in data["exponents"]),
            int(data["cofactor"]),
        )
        if out.s_part * out.cofactor != out.n:
            raise ValueError("inconsistent S-factorization")
        return out


@dataclass(frozen=True)
class FactorEffort:
    """Budget for factoring: trial division up to ``trial_ceiling``, then an
    optional Pollard-Brent stage limited to ``rho_iterations`` steps."""

    trial_ceiling: int = 10**6
    second_stage: bool = False
    rho_iterations: int = 100_000

    def __post_init__(self):
        if self.trial_ceiling < 2:
            raise ValueError("trial ceiling must be >= 2")
        if self.rho_iterations < 0:
            raise ValueError("iteration budget must be non-negative")


DEFAULT_EFFORT = FactorEffort()


def _remove(n: int, p: int) -> tuple[int, int]:
    if n < 2**64:
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return n, v
    m, v = gmpy2.remove(n, p)
    return int(m), int(v)


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the positive integer ``n``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _remove(n, p)[1]


def s_part(n: int, S) -> SFactorization:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    S = PrimeSet.of(S)
    m = n
    exps = []
    for q in S:
        m, v = _remove(m, q)
        exps.append(v)
    return SFactorization(n, S.primes, tuple(exps), m)


def _rho(n: int, budget: int) -> int | None:
    """Brent's variant of Pollard rho with fixed seeds; a factor or ``None``."""
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 20):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += 128
                spent += 128
                g = math.gcd(q, n)
                if spent > budget and g == 1:
                    return None
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        if spent > budget:
            return None
    return None


def factorize(n: int, effort: FactorEffort = DEFAULT_EFFORT) -> tuple[dict[int, int], int]:
    """Factor ``n`` as far as ``effort`` allows.

    Returns ``(factors, rest)`` where ``factors`` maps primes to exponents and
    ``rest`` is the unfactored composite part (1 when the factorization is
    complete).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    factors: dict[int, int] = {}
    m = n
    for p in primes_up_to(effort.trial_ceiling):
        if p * p > m:
            break
        if m % p == 0:
            m, v = _remove(m, p)
            factors[p] = v
    if m == 1:
        return factors, 1
    ceiling = effort.trial_ceiling
    if m <= ceiling * ceiling or _probable_prime(m):
        factors[m] = factors.get(m, 0) + 1
        return factors, 1
    if not effort.second_stage:
        return factors, m

    pending = [m]
    rest = 1
    while pending:
        c = pending.pop()
        if _probable_prime(c):
            factors[c] = factors.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            pending += [r, r]
            continue
        d = _rho(c, effort.rho_iterations)
        if d is None:
            rest *= c
        else:
            pending += [d, c // d]
    return dict(sorted(factors.items())), rest


def greatest_prime_factor(n: int, effort: FactorEffort = DEFAULT_EFFORT) -> tuple[int, str]:
    """Largest prime factor found and whether it is certainly ``P[n]``.

    With status ``partial`` the unfactored part only has prime factors above
    the trial ceiling, so the true ``P[n]`` is at least the returned value.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    factors, rest = factorize(n, effort)
    p = max(factors, default=1)
    return p, COMPLETE if rest == 1 else PARTIAL


def radical(n: int, effort: FactorEffort = DEFAULT_EFFORT) -> tuple[int, str]:
    """Greatest square-free divisor of ``n``.

    On a partial factorization the unfactored part is multiplied in whole, so
    the true radical divides the returned value.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    factors, rest = factorize(n, effort)
    q = math.prod(factors) * rest
    return q, COMPLETE if rest == 1 else PARTIAL


def is_smooth(n: int, bound: int, effort: FactorEffort = DEFAULT_EFFORT) -> bool | None:
    """``True``/``False`` if ``n`` is (not) ``bound``-smooth, ``None`` if undecided."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if bound < 2:
        raise ValueError(f"smoothness bound must be >= 2, got {bound}")
    m = n
    for p in primes_up_to(min(bound, effort.trial_ceiling)):
        if p * p > m:
            break
        if m % p == 0:
            m, _ = _remove(m, p)
    if m == 1:
        return True
    if bound <= effort.trial_ceiling:
        # m is 1 or a prime above sqrt-stop, or has only factors > bound
        if m <= bound:
            return True
        return False
    # bound > trial ceiling: m has no prime factor <= trial ceiling
    if m <= bound:
        return True
    if m <= effort.trial_ceiling**2 or _probable_prime(m):
        return False
    if effort.second_stage:
        factors, rest = factorize(m, FactorEffort(2, True, effort.rho_iterations))
        if any(p > bound for p in factors):
            return False
        if rest == 1:
            return True
        if rest <= bound:
            return True
    return None
