import itertools
import math
from fractions import Fraction

import mpmath
import pytest

from fewdigits.effective_bounds import (
    THRESHOLD_DOMAIN_START,
    BoundCertificate,
    archimedean_m_bound,
    first_primes_m_bound,
    padic_m_bound,
    smallest_prime_factor,
    smooth_threshold,
    smooth_threshold_enclosure,
    three_digit_certificate,
)
from fewdigits.sunit_solver import solve_three_digit
from oracles import mp_arch_bound, mp_arch_gap, mp_padic_bound, mp_padic_gap

mpmath.mp.dps = 60

SUBSETS = [S for r in range(1, 5) for S in itertools.combinations((2, 3, 5, 7), r)]
MATRIX = [(b, S) for b in (2, 3, 10) for S in SUBSETS]

# (b, S, effective cap) -> (m_arch, m_padic), re-derived independently in mpmath at 80 digits
FIXTURES = {
    (2, (3, 5), 3): (19281984341900609, 468366907674502590),
    (2, (3, 5, 7), 3): (3488358078476707920, 5236406312223941773547),
    (10, (2, 3, 5, 7), 10): (2200908902822312112, 11041675419076913169812),
    (3, (2,), 3): (59476302958227, 17246842144253),
    (2, (2,), 3): (384588604999, 5),
    (5, (2, 3), 5): (12165577629204053, 203158386891130789),
    (9, (2,), 9): (121521693151013, 34775505415704),
}


@pytest.mark.parametrize("key", sorted(FIXTURES))
def test_branch_fixtures(key):
    b, S, cap = key
    m_arch, m_padic = FIXTURES[key]
    assert archimedean_m_bound(b, S, cap) == m_arch
    assert padic_m_bound(b, S, cap) == m_padic
    cert = three_digit_certificate(b, S, cap)
    assert (cert.m_arch, cert.m_padic, cert.m0) == (m_arch, m_padic, max(m_arch, m_padic))


def test_example_cap_two_rounds_up_to_three():
    cert = three_digit_certificate(2, {3, 5}, A=2)
    assert cert.cofactor_cap == 3
    assert cert.m0 == FIXTURES[(2, (3, 5), 3)][1]
    assert 0 < cert.c < 1


@pytest.mark.parametrize("b,S", MATRIX)
def test_matrix_matches_mpmath_rederivation(b, S):
    cert = three_digit_certificate(b, S)
    assert cert.m_arch == mp_arch_bound(b, S, cert.cofactor_cap)
    assert cert.m_padic == mp_padic_bound(b, S, cert.cofactor_cap)


@pytest.mark.parametrize("b,S", MATRIX)
def test_precision_invariance(b, S):
    lo = three_digit_certificate(b, S, precision=128)
    hi = three_digit_certificate(b, S, precision=256)
    assert (lo.m_arch, lo.m_padic, lo.m0) == (hi.m_arch, hi.m_padic, hi.m0)


@pytest.mark.parametrize("b", (2, 3, 10))
def test_monotone_under_enlarging_primes(b):
    m0 = {S: three_digit_certificate(b, S).m0 for S in SUBSETS}
    for S, T in itertools.product(SUBSETS, repeat=2):
        if set(S) < set(T):
            assert m0[S] <= m0[T], (S, T)


@pytest.mark.parametrize(
    "chain,pool",
    [((3, 9, 27), (2, 5, 7)), ((4, 8, 16), (3, 5, 7)), ((10, 20, 40), (3, 7)), ((5, 25), (2, 3, 7))],
)
def test_monotone_in_base_for_fixed_shape(chain, pool):
    for r in range(1, len(pool) + 1):
        for S in itertools.combinations(pool, r):
            ms = [three_digit_certificate(b, S).m0 for b in chain]
            assert ms == sorted(ms), (chain, S, ms)


def test_branch_failure_persists_beyond_bound():
    # both comparison functions stay positive on a sample of m past each bound
    for (b, S, cap), (m_arch, m_padic) in FIXTURES.items():
        g, h = mp_arch_gap(b, S, cap), mp_padic_gap(b, S, cap)
        assert g(m_arch) <= 0 < g(m_arch + 1)
        assert h(m_padic) <= 0 < h(m_padic + 1)
        for k in (2, 3, 10, 1000, 10**6):
            assert g(m_arch * k) > 0 and h(m_padic * k) > 0


@pytest.mark.parametrize("b,S", [(2, (3, 5)), (10, (2, 3, 5, 7)), (3, (2,)), (2, (7,))])
def test_slope_covers_larger_caps(b, S):
    cert = three_digit_certificate(b, S)
    tau = cert.slope
    for A in (cert.cofactor_cap, 10**3, 10**9, 10**30, 10**200):
        L = Fraction(mpmath.nstr(mpmath.log(A), 40))
        m = math.ceil(tau * L * (1 + Fraction(1, 10**20)))
        g, h = mp_arch_gap(b, S, A), mp_padic_gap(b, S, A)
        for mm in (m, 2 * m, 50 * m):
            assert g(mm) > 0 and h(mm) > 0


def test_exponent_convention():
    cert = three_digit_certificate(2, {3, 5})
    expected = Fraction(cert.m0 + 1, cert.m0 + 2) / (cert.slope * Fraction(math.log(2)))
    assert 0 < cert.c <= expected * (1 + Fraction(1, 10**12))
    assert cert.c > expected * (1 - Fraction(1, 10**12))
    assert cert.c.denominator & (cert.c.denominator - 1) == 0


@pytest.mark.parametrize("b,S", MATRIX)
def test_no_solution_beyond_certificate(b, S):
    cert = three_digit_certificate(b, S)
    recs = solve_three_digit(b, S, 40)
    assert all(r.m <= cert.m0 for r in recs)
    assert cert.m0 >= 1 and 0 < cert.c < 1


def test_smallest_prime_selection():
    assert smallest_prime_factor(10) == 2
    assert smallest_prime_factor(9) == 3
    assert smallest_prime_factor(49) == 7
    assert three_digit_certificate(9, {2}).p == 3


def test_first_primes_delegates():
    assert first_primes_m_bound(2, b=5) == three_digit_certificate(5, {2, 3}, A=5).m0
    assert first_primes_m_bound(2, b=2) == three_digit_certificate(2, {2, 3}, A=2).m0
    ms = [first_primes_m_bound(s) for s in range(1, 6)]
    assert ms == sorted(ms)
    with pytest.raises(ValueError):
        first_primes_m_bound(0)


def test_certificate_round_trip():
    cert = three_digit_certificate(10, {3, 7})
    back = BoundCertificate.from_dict(cert.to_dict())
    assert back.to_dict() == cert.to_dict()
    assert any("merged" in a for a in three_digit_certificate(10, {2, 3}).assumptions)


def test_threshold_value():
    # log n = 230.26, then 5.439, 1.694, 0.527
    with mpmath.workdps(50):
        n = mpmath.mpf(10) ** 100
        ll = mpmath.log(mpmath.log(n))
        ref = 0.9 * ll * mpmath.log(ll) / mpmath.log(mpmath.log(ll))
    v = smooth_threshold(10**100, Fraction(1, 10))
    assert abs(v - 15.73) < 0.01
    assert abs(v - float(ref)) < 1e-12


def test_threshold_domain():
    with mpmath.workdps(30):
        edge = mpmath.exp(mpmath.exp(mpmath.e))
    assert int(edge) + 1 == THRESHOLD_DOMAIN_START
    with pytest.raises(ValueError):
        smooth_threshold(3814279, 0.5)
    assert smooth_threshold(THRESHOLD_DOMAIN_START, 0.5) > 0
    assert smooth_threshold(10**7, 0.5) > 0
    with pytest.raises(ValueError):
        smooth_threshold(10**7, 1)
    with pytest.raises(ValueError):
        smooth_threshold(10**7, 0)


def test_threshold_linear_in_one_minus_eps():
    for n in (10**7, 10**20, 10**100, 2**4000):
        a = smooth_threshold_enclosure(n, Fraction(1, 5), 256)
        b = smooth_threshold_enclosure(n, Fraction(3, 5), 256)
        ratio = a / b
        assert ratio.lower <= 2 <= ratio.upper
        assert ratio.upper - ratio.lower < Fraction(1, 10**60)


def test_threshold_shape_on_grid():
    # y log y / log log y in y = loglog n has its minimum near y = 4.4522, n = 1.86e37;
    # the fourth log vanishes at the domain edge, so the value falls until there
    def values(grid):
        return [smooth_threshold_enclosure(n, Fraction(1, 10), 256) for n in grid]

    falling = values([THRESHOLD_DOMAIN_START + k for k in (0, 1, 10, 1000)] + [10**e for e in range(7, 37, 3)])
    assert all(x.lower > y.upper for x, y in zip(falling, falling[1:]))
    rising = values([10**e for e in range(38, 400, 13)] + [2**k for k in (2000, 5000, 20000)])
    assert all(x.upper < y.lower for x, y in zip(rising, rising[1:]))
