"""Test degree, parity and bound computations."""

from math import comb

import pytest
from sympy.ntheory import multiplicity

from phase_injectivity.combinatorics import (
    binomial_two_adic_valuation,
    degree_parity_via_digits,
    degree_rank2,
    degree_report,
    digit_sum,
    hmw_bound,
    is_power_of_two_plus_one,
    parity_table,
    two_adic_valuation,
    two_term_valuation,
)


class TestDegree:
    """Tests for degree_rank2."""

    @pytest.mark.parametrize("m, expected", [(2, 1), (3, 3), (4, 20), (5, 175)])
    def test_small_degrees(self, m, expected):
        """Test the first values of the degree."""
        assert degree_rank2(m) == expected

    def test_invalid_dimension(self):
        """Test m < 2."""
        with pytest.raises(ValueError):
            degree_rank2(1)


class TestDigitSums:
    """Tests for digit sums and 2-adic valuations."""

    def test_digit_sum(self):
        """Test binary and decimal digit sums."""
        assert digit_sum(0) == 0
        assert digit_sum(7) == 3
        assert digit_sum(8) == 1
        assert digit_sum(123, 10) == 6

    def test_digit_sum_invalid(self):
        """Test negative inputs and bases below 2."""
        with pytest.raises(ValueError):
            digit_sum(-1)
        with pytest.raises(ValueError):
            digit_sum(5, 1)

    @pytest.mark.parametrize("n, r", [(6, 4), (0, 5), (7, 1), (12, 20), (31, 33)])
    def test_carry_count(self, n, r):
        """Test carries equal the valuation of the binomial coefficient."""
        assert binomial_two_adic_valuation(n, r) == multiplicity(2, comb(n + r, r))

    def test_two_adic_valuation(self):
        """Test direct valuations."""
        assert two_adic_valuation(20) == 2
        assert two_adic_valuation(-48) == 4
        assert two_adic_valuation(175) == 0
        with pytest.raises(ValueError):
            two_adic_valuation(0)

    def test_digit_rule_matches_direct_valuation(self):
        """Test the digit-sum valuation of the degree up to m = 64."""
        for m in range(2, 65):
            assert degree_parity_via_digits(m) == two_adic_valuation(degree_rank2(m))


class TestPowersOfTwoPlusOne:
    """Tests for dimensions of the form 2^k + 1."""

    @pytest.mark.parametrize("m", [2, 3, 5, 9, 17, 33])
    def test_recognized(self, m):
        """Test 2^k + 1 dimensions."""
        assert is_power_of_two_plus_one(m)

    @pytest.mark.parametrize("m", [1, 4, 6, 7, 10, 66])
    def test_rejected(self, m):
        """Test other dimensions."""
        assert not is_power_of_two_plus_one(m)

    @pytest.mark.parametrize("m", [3, 5, 9, 17, 33])
    def test_odd_degree(self, m):
        """Test the degree is odd for m = 2^k + 1 and the four-term form vanishes."""
        assert degree_rank2(m) % 2 == 1
        assert two_term_valuation(m) == 0

    def test_two_term_valuation_requires_m3(self):
        """Test the four-term form needs m >= 3."""
        with pytest.raises(ValueError):
            two_term_valuation(2)


class TestHMWBound:
    """Tests for hmw_bound."""

    @pytest.mark.parametrize("m, expected", [(2, 2), (3, 6), (4, 8), (5, 14)])
    def test_values(self, m, expected):
        """Test 4m - 2 s_2(m - 1) - 4."""
        assert hmw_bound(m) == expected

    def test_bound_is_4m_minus_6_at_powers_of_two_plus_one(self):
        """Test the bound equals 4m - 6 exactly when m - 1 is a power of two."""
        for m in range(2, 65):
            assert (hmw_bound(m) == 4 * m - 6) == is_power_of_two_plus_one(m)


class TestReports:
    """Tests for degree reports and the parity table."""

    def test_degree_report(self):
        """Test report fields for m = 4."""
        report = degree_report(4)
        assert report.degree == 20
        assert report.two_adic_valuation == 2
        assert not report.is_odd
        assert report.resultant_exponent == 4
        assert report.resultant_column_degree == 2 * 3**4
        assert report.resultant_total_degree == 2 * 12 * 3**4

    def test_report_payload(self):
        """Test JSON payload keeps large integers as strings."""
        payload = degree_report(3).to_dict()
        assert payload["degree"] == "3"
        assert payload["is_odd"] is True
        assert payload["resultant_total_degree"] == str(2 * 8 * 3)

    def test_parity_table(self):
        """Test the default table covers m = 2..64."""
        table = parity_table()
        assert [r.m for r in table] == list(range(2, 65))
        assert table[7].is_odd and table[7].is_power_of_two_plus_one
        row = table[0].table_row()
        assert list(row) == ["m", "degree", "v2", "is_odd", "power_of_two_plus_one", "hmw_bound", "4m-5", "4m-4"]

    def test_empty_range(self):
        """Test m_max < m_min."""
        with pytest.raises(ValueError):
            parity_table(5, 4)
