"""
Exact degree and parity computations for the rank-2 determinantal variety.

All arithmetic is on Python integers and ``fractions.Fraction``; nothing in
this module touches floating point.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

from sympy.ntheory import digits, multiplicity

logger = logging.getLogger(__name__)


def _check_dimension(m: int) -> None:
    if m < 2:
        raise ValueError(f"Dimension must be at least 2, got {m}")


def degree_rank2(m: int) -> int:
    """
    Degree of the variety of M x M matrices of rank <= 2.

    ``d = prod_{i=0}^{M-3} C(M+i, 2) / C(2+i, 2)``, evaluated over exact
    rationals and checked to be an integer.

    Args:
        m: Dimension (>= 2)

    Returns:
        The degree (1 for m=2)

    Raises:
        ValueError: If m < 2

    Example:
        >>> [degree_rank2(m) for m in range(2, 6)]
        [1, 3, 20, 175]
    """
    _check_dimension(m)
    value = prod((Fraction(comb(m + i, 2), comb(2 + i, 2)) for i in range(m - 2)), start=Fraction(1))
    if value.denominator != 1:
        raise ArithmeticError(f"Degree for m={m} is not an integer: {value}")
    return value.numerator


def digit_sum(n: int, p: int = 2) -> int:
    """Sum of the base-p digits of a nonnegative integer."""
    if p < 2:
        raise ValueError(f"Base must be at least 2, got {p}")
    if n < 0:
        raise ValueError(f"Digit sums are defined for nonnegative integers, got {n}")
    return sum(digits(n, p)[1:])


def binomial_two_adic_valuation(n: int, r: int) -> int:
    """
    ``v_2(C(n+r, r))`` as the number of carries ``s_2(n) + s_2(r) - s_2(n+r)``.

    Example:
        >>> binomial_two_adic_valuation(6, 4)
        1
    """
    if n < 0 or r < 0:
        raise ValueError(f"Arguments must be nonnegative, got n={n}, r={r}")
    return digit_sum(n) + digit_sum(r) - digit_sum(n + r)


def two_adic_valuation(value: int) -> int:
    """``v_2`` of a nonzero integer by direct factor counting."""
    if value == 0:
        raise ValueError("The 2-adic valuation of 0 is infinite")
    return int(multiplicity(2, abs(value)))


def degree_parity_via_digits(m: int) -> int:
    """
    ``v_2`` of the degree from digit sums alone.

    Each factor ``C(M+i, 2) / C(2+i, 2)`` contributes
    ``v_2(C(M+i, 2)) - v_2(C(2+i, 2))``, and each binomial valuation is a
    carry count. Agrees with ``two_adic_valuation(degree_rank2(m))``.

    Example:
        >>> degree_parity_via_digits(4), degree_parity_via_digits(5)
        (2, 0)
    """
    _check_dimension(m)
    if m == 2:
        return 0
    return sum(
        binomial_two_adic_valuation(m + i - 2, 2) - binomial_two_adic_valuation(i, 2)
        for i in range(m - 2)
    )


def is_power_of_two_plus_one(m: int) -> bool:
    """True when ``m = 2^k + 1`` for some k >= 0."""
    n = m - 1
    return n >= 1 and n & (n - 1) == 0


def two_term_valuation(m: int) -> int:
    """
    Telescoped four-term digit-sum expression
    ``(s_2(M) - s_2(M-2)) - (s_2(M-1) - s_2(M-3))``.

    When ``M = 2^k + 1`` the carry sums collapse to this expression, which is
    then zero; it is not a valuation for other M.
    """
    if m < 3:
        raise ValueError(f"The four-term form needs m >= 3, got {m}")
    return (digit_sum(m) - digit_sum(m - 2)) - (digit_sum(m - 1) - digit_sum(m - 3))


def hmw_bound(m: int) -> int:
    """
    ``4M - 2 s_2(M-1) - 4``: at or below this many vectors the intensity
    map is never injective, by the embedding-theoretic bound.

    Example:
        >>> hmw_bound(5)
        14
    """
    _check_dimension(m)
    return 4 * m - 2 * digit_sum(m - 1) - 4


@dataclass(frozen=True)
class DegreeReport:
    """Degree data for dimension m, including the resultant degrees used by exact tests."""

    m: int
    degree: int
    two_adic_valuation: int
    is_odd: bool
    is_power_of_two_plus_one: bool
    hmw_bound: int
    resultant_exponent: int
    resultant_column_degree: int
    resultant_total_degree: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "degree": str(self.degree),
            "two_adic_valuation": self.two_adic_valuation,
            "is_odd": self.is_odd,
            "is_power_of_two_plus_one": self.is_power_of_two_plus_one,
            "hmw_bound": self.hmw_bound,
            "resultant_exponent": self.resultant_exponent,
            "resultant_column_degree": self.resultant_column_degree,
            "resultant_total_degree": str(self.resultant_total_degree),
        }

    def table_row(self) -> dict:
        """One row of the parity table."""
        return {
            "m": self.m,
            "degree": str(self.degree),
            "v2": self.two_adic_valuation,
            "is_odd": self.is_odd,
            "power_of_two_plus_one": self.is_power_of_two_plus_one,
            "hmw_bound": self.hmw_bound,
            "4m-5": 4 * self.m - 5,
            "4m-4": 4 * self.m - 4,
        }


def degree_report(m: int) -> DegreeReport:
    """
    Collect degree, parity and bound data for dimension m.

    The resultant exponent ``E = (M-2)^2`` gives the multidegree of the
    hypersurface of non-injective frames with ``N = 4M - 4``: degree
    ``2 * 3^E`` in each column and ``2 (4M - 4) 3^E`` in total.
    """
    degree = degree_rank2(m)
    valuation = two_adic_valuation(degree)
    digits_valuation = degree_parity_via_digits(m)
    if digits_valuation != valuation:
        raise ArithmeticError(
            f"Digit-sum valuation {digits_valuation} disagrees with {valuation} for m={m}"
        )
    exponent = (m - 2) ** 2
    column_degree = 2 * 3**exponent
    return DegreeReport(
        m=m,
        degree=degree,
        two_adic_valuation=valuation,
        is_odd=valuation == 0,
        is_power_of_two_plus_one=is_power_of_two_plus_one(m),
        hmw_bound=hmw_bound(m),
        resultant_exponent=exponent,
        resultant_column_degree=column_degree,
        resultant_total_degree=column_degree * (4 * m - 4),
    )


def parity_table(m_min: int = 2, m_max: int = 64) -> list[DegreeReport]:
    """Degree reports for every m in ``[m_min, m_max]``."""
    if m_max < m_min:
        raise ValueError(f"Empty range: m_min={m_min}, m_max={m_max}")
    logger.debug(f"Building parity table for m in [{m_min}, {m_max}]")
    return [degree_report(m) for m in range(m_min, m_max + 1)]
