"""Base-b digits and increasing enumeration of integers with few nonzero digits.

The enumerators walk a min-heap frontier instead of scanning every integer,
so members around 2**64 and beyond are reached without touching the
integers in between.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterator


def _check_base(b: int) -> None:
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")


def digits_of(n: int, b: int) -> list[int]:
    """Digits of ``n`` in base ``b``, least significant first."""
    _check_base(b)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    out = []
    while n:
        n, r = divmod(n, b)
        out.append(r)
    return out


def nonzero_digit_count(n: int, b: int) -> int:
    if b == 2 and n >= 1:
        return bin(n).count("1")
    return sum(1 for d in digits_of(n, b) if d)


@dataclass(frozen=True, order=True)
class SparseInt:
    """A positive integer with its nonzero base-b digits.

    ``terms`` holds ``(digit, exponent)`` pairs with exponents strictly
    decreasing and ending at 0, so the value is never divisible by the base.
    """

    value: int
    base: int = field(compare=False)
    terms: tuple[tuple[int, int], ...] = field(compare=False)

    @property
    def nonzero_digits(self) -> int:
        return len(self.terms)

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "base": self.base,
            "terms": [[d, e] for d, e in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SparseInt":
        out = sparse_value(int(data["base"]), [(int(d), int(e)) for d, e in data["terms"]])
        if out.value != int(data["value"]):
            raise ValueError("value does not match terms")
        return out


def sparse_value(b: int, terms) -> SparseInt:
    """Build the canonical :class:`SparseInt` from ``(digit, exponent)`` pairs."""
    _check_base(b)
    terms = [(int(d), int(e)) for d, e in terms]
    if not terms:
        raise ValueError("at least one term is required")
    exps = [e for _, e in terms]
    if len(set(exps)) != len(exps):
        raise ValueError(f"repeated exponent in {terms}")
    for d, e in terms:
        if not 1 <= d <= b - 1:
            raise ValueError(f"digit {d} outside 1..{b - 1}")
        if e < 0:
            raise ValueError(f"negative exponent {e}")
    if 0 not in exps:
        raise ValueError("no exponent-0 term: value would be divisible by the base")
    terms.sort(key=lambda t: -t[1])
    value = sum(d * b**e for d, e in terms)
    return SparseInt(value, b, tuple(terms))


def from_int(n: int, b: int) -> SparseInt:
    """Decompose ``n`` (not divisible by ``b``) into a :class:`SparseInt`."""
    ds = digits_of(n, b)
    if ds[0] == 0:
        raise ValueError(f"{n} is divisible by {b}")
    terms = tuple((d, e) for e, d in reversed(list(enumerate(ds))) if d)
    return SparseInt(n, b, terms)


def _stopper(count, ceiling):
    if count is not None and count < 0:
        raise ValueError("count must be non-negative")

    def done(emitted: int, value: int) -> bool:
        if count is not None and emitted >= count:
            return True
        return ceiling is not None and value > ceiling

    return done


def enumerate_sparse(b: int, k: int, count: int | None = None, ceiling: int | None = None) -> Iterator[SparseInt]:
    """Yield, in increasing order, every ``u`` with ``b`` not dividing ``u``
    and at most ``k`` nonzero base-``b`` digits.

    Stops after ``count`` values or once values exceed ``ceiling``; with
    neither given the stream is infinite.

    Every member ``u`` with two or more nonzero digits has a unique parent:
    ``u`` with its leading term removed.  The children of ``v`` are
    ``d*b**e + v`` for ``e`` above the top exponent of ``v``, visited lazily
    in (e, d) order, so each heap pop pushes at most a sibling and a child.
    """
    _check_base(b)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    done = _stopper(count, ceiling)
    if done(0, 1):
        return
    # entry: (value, digit, exponent, parent value, parent terms)
    heap: list = [(1, 1, 0, 0, ())]
    emitted = 0
    while heap:
        value, d, e, parent, pterms = heapq.heappop(heap)
        if done(emitted, value):
            return
        terms = ((d, e),) + pterms
        yield SparseInt(value, b, terms)
        emitted += 1
        # next sibling under the same parent
        if d + 1 < b:
            heapq.heappush(heap, (parent + (d + 1) * b**e, d + 1, e, parent, pterms))
        elif pterms:
            heapq.heappush(heap, (parent + b ** (e + 1), 1, e + 1, parent, pterms))
        # first child
        if len(terms) < k:
            heapq.heappush(heap, (value + b ** (e + 1), 1, e + 1, value, terms))


@dataclass(frozen=True)
class ThreeTermValue:
    """One value of ``a**m + c**n + 1`` with every ``(m, n)`` producing it."""

    value: int
    witnesses: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {"value": str(self.value), "witnesses": [list(w) for w in self.witnesses]}

    @classmethod
    def from_dict(cls, data: dict) -> "ThreeTermValue":
        return cls(int(data["value"]), tuple((int(m), int(n)) for m, n in data["witnesses"]))


def enumerate_three_term(
    a: int, c: int, count: int | None = None, ceiling: int | None = None
) -> Iterator[ThreeTermValue]:
    """Yield the distinct values ``a**m + c**n + 1`` (m, n >= 1) in increasing order."""
    if a < 2 or c < 2:
        raise ValueError("both bases must be >= 2")
    if a == c:
        raise ValueError(f"bases must be distinct, got a = c = {a}")
    done = _stopper(count, ceiling)
    heap = [(a + c + 1, 1, 1)]
    emitted = 0
    while heap:
        value, m, n = heapq.heappop(heap)
        witnesses = [(m, n)]
        heapq.heappush(heap, (a**m + c ** (n + 1) + 1, m, n + 1))
        if n == 1:
            heapq.heappush(heap, (a ** (m + 1) + c + 1, m + 1, 1))
        while heap[0][0] == value:
            _, m2, n2 = heapq.heappop(heap)
            witnesses.append((m2, n2))
            heapq.heappush(heap, (a**m2 + c ** (n2 + 1) + 1, m2, n2 + 1))
            if n2 == 1:
                heapq.heappush(heap, (a ** (m2 + 1) + c + 1, m2 + 1, 1))
        if done(emitted, value):
            return
        yield ThreeTermValue(value, tuple(sorted(witnesses)))
        emitted += 1
