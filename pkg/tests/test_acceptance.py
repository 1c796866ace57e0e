"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import math
import random
import sys
import time
from pathlib import Path

import mpmath

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from oracles import gpf_and_radical, trial_factor  # noqa: E402
from test_sparse_digits import brute_sparse  # noqa: E402
from test_sunit_solver import as_tuples, brute_solutions  # noqa: E402

from fewdigits.arithmetic import COMPLETE, first_primes, greatest_prime_factor, radical, s_part  # noqa: E402
from fewdigits.effective_bounds import smooth_threshold, three_digit_certificate  # noqa: E402
from fewdigits.lfl_bounds import (  # noqa: E402
    LinearFormInstance,
    matveev_bound,
    true_archimedean_gap,
    true_padic_valuation,
    yu_bound,
)
from fewdigits.sparse_digits import enumerate_sparse  # noqa: E402
from fewdigits.sunit_solver import check_problem42, solve_three_digit  # noqa: E402

RESULTS = []


def report(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_enumerator_exactness():
    t0 = time.perf_counter()
    bad = []
    for b, k in itertools.product((2, 3, 10), (1, 2, 3)):
        got = [x.value for x in enumerate_sparse(b, k, ceiling=10**6)]
        if got != brute_sparse(b, k, 10**6):
            bad.append((b, k))
    dt = time.perf_counter() - t0
    report(
        "enumerator exactness, b in {2,3,10}, k in {1,2,3}, n <= 10^6",
        not bad and dt < 60,
        f"{dt:.1f}s, mismatches {bad}",
    )


def test_s_part_identities():
    rng = random.Random(1)
    primes = first_primes(10)
    failures = 0
    for _ in range(10**4):
        n, n2 = rng.randint(1, 10**12), rng.randint(1, 10**12)
        S = rng.sample(primes, rng.randint(1, 10))
        f = s_part(n, S)
        ok = f.s_part * f.cofactor == n
        ok &= all(math.gcd(f.cofactor, q) == 1 for q in S)
        ok &= s_part(n * n2, S).s_part == f.s_part * s_part(n2, S).s_part
        failures += not ok
    report("S-part identities on 10^4 random inputs", failures == 0, f"{failures} failures")


def test_solver_reproduction():
    one = solve_three_digit(2, {3, 5}, 20, workers=1)
    eight = solve_three_digit(2, {3, 5}, 20, workers=8)
    oracle = brute_solutions(2, (3, 5), 20)
    got = as_tuples(one)
    dump = lambda rs: json.dumps([r.to_dict() for r in rs], sort_keys=True).encode()  # noqa: E731
    ok = got == oracle and (25, 4, 3, 1, 1, 1) in got and (81, 6, 4, 1, 1, 1) in got
    ok &= dump(one) == dump(eight)
    report("solver (2, {3,5}, 20) equals unpruned oracle; 1 and 8 workers identical", ok, f"{len(got)} solutions")


def test_problem42_evidence():
    t0 = time.perf_counter()
    found = check_problem42(30)
    dt = time.perf_counter() - t0
    low = {(v.m, v.n) for v in found if v.m <= 10}
    exact = set()
    for m in range(2, 11):
        for n in range(1, m):
            sp = math.prod(q**e for q, e in trial_factor(2**m + 2**n + 1).items() if q in (3, 5))
            if sp**4 > 2 ** (3 * m):
                exact.add((m, n))
    ok = low == exact == {(4, 3), (6, 4)} and dt < 10
    report("check_problem42(30) slice m <= 10 is {(4,3), (6,4)}", ok, f"{dt:.3f}s, {len(found)} violations up to 30")


def _instance(rng, p=None):
    while True:
        items = []
        for _ in range(rng.randint(2, 4)):
            x, y = rng.randint(1, 60), rng.randint(1, 60)
            if p is not None:
                while x % p == 0:
                    x += 1
                while y % p == 0:
                    y += 1
            items.append((x, y, rng.choice([i for i in range(-12, 13) if i])))
        inst = LinearFormInstance(tuple(items))
        if inst.product() != 1:
            return inst


def test_matveev_and_yu_soundness():
    rng = random.Random(2)
    arch = sum(
        not true_archimedean_gap(inst).lower > matveev_bound(inst).bound
        for inst in (_instance(rng) for _ in range(10**4))
    )
    padic = 0
    for _ in range(10**4):
        p = rng.choice((2, 3, 5, 7, 11))
        inst = _instance(rng, p)
        padic += not true_padic_valuation(inst, p) < yu_bound(p, inst).bound
    report("Matveev and Yu soundness on 10^4 random instances each", arch == padic == 0, f"violations {arch} / {padic}")


def test_certificate_consistency():
    subsets = [S for r in range(1, 5) for S in itertools.combinations((2, 3, 5, 7), r)]
    problems = []
    for b in (2, 3, 10):
        m0 = {}
        for S in subsets:
            c128 = three_digit_certificate(b, S, precision=128)
            c256 = three_digit_certificate(b, S, precision=256)
            m0[S] = c128.m0
            if not (1 <= c128.m0 == c256.m0):
                problems.append(("precision", b, S))
            worst = max((r.m for r in solve_three_digit(b, S, 40)), default=0)
            if worst > c128.m0:
                problems.append(("solver", b, S))
        for S, T in itertools.product(subsets, repeat=2):
            if set(S) < set(T) and m0[S] > m0[T]:
                problems.append(("monotone", b, S, T))
    report("certificates over b in {2,3,10} x nonempty S in {2,3,5,7}", not problems, f"{len(problems)} problems")


def test_threshold_reproduction():
    with mpmath.workdps(40):
        ll = mpmath.log(mpmath.log(mpmath.mpf(10) ** 100))
        direct = float(mpmath.mpf("0.9") * ll * mpmath.log(ll) / mpmath.log(mpmath.log(ll)))
    v = smooth_threshold(10**100, 0.1)
    try:
        smooth_threshold(3814279, 0.5)
        raised = False
    except ValueError:
        raised = True
    ok = abs(v - 15.73) <= 0.01 and abs(v - direct) < 1e-9 and raised and smooth_threshold(10**7, 0.5) > 0
    report("smooth_threshold(10^100, 0.1) = 15.73 +- 0.01 and domain edge", ok, f"value {v:.6f}")


def test_factorization_exactness():
    limit = 10**6
    gpf, rad = gpf_and_radical(limit)
    bad = 0
    for n in range(2, limit + 1):
        if greatest_prime_factor(n) != (gpf[n], COMPLETE) or radical(n) != (rad[n], COMPLETE):
            bad += 1
    ok = bad == 0 and greatest_prime_factor(1049601) == (331, COMPLETE) and radical(1049601) == (1049601, COMPLETE)
    report("greatest prime factor and radical for all n <= 10^6", ok, f"{bad} mismatches")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
