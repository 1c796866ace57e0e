"""Integers with few nonzero digits: enumeration, S-parts and effective bounds."""

from .arithmetic import FactorEffort, PrimeSet, SFactorization, greatest_prime_factor, radical, s_part
from .effective_bounds import BoundCertificate, smooth_threshold, three_digit_certificate
from .lfl_bounds import LinearFormInstance, matveev_bound, yu_bound
from .rigorous import RigorousReal, precise_log
from .sparse_digits import SparseInt, enumerate_sparse, enumerate_three_term
from .sunit_solver import SolutionRecord, check_problem42, p_table, solve_three_digit, verify_spart_trend

__version__ = "0.1.0"

__all__ = [
    "BoundCertificate",
    "FactorEffort",
    "LinearFormInstance",
    "PrimeSet",
    "RigorousReal",
    "SFactorization",
    "SolutionRecord",
    "SparseInt",
    "check_problem42",
    "enumerate_sparse",
    "enumerate_three_term",
    "greatest_prime_factor",
    "matveev_bound",
    "p_table",
    "precise_log",
    "radical",
    "s_part",
    "smooth_threshold",
    "solve_three_digit",
    "three_digit_certificate",
    "verify_spart_trend",
    "yu_bound",
]
