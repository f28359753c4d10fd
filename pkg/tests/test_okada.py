import pytest

from qtspp.okada import (
    CofactorVector,
    check_identity,
    identity_reports,
    okada_entry,
    okada_matrix,
    row_summand,
    solve_cofactors,
    verify_determinant,
)
from qtspp.qcomb import determinant_product, determinant_product_ratio
from qtspp.qfield import Poly, Q, RatFunc, det_fraction_free


def minor_cofactor(n, j):
    """Independent oracle: signed minor of the n x n Okada matrix with row
    n and column j removed."""
    m = okada_matrix(n)
    rows = [
        [m.entries[i][jj] for jj in range(n) if jj != j - 1]
        for i in range(n - 1)
    ]
    det = det_fraction_free(rows) if rows else Poly.one()
    return det if (n + j) % 2 == 0 else -det


class TestEntries:
    def test_entry_1_1(self):
        assert okada_entry(1, 1) == (1 + Q) ** 2

    def test_entry_1_2(self):
        assert okada_entry(1, 2) == Q**2 + Q**3 + Q**4

    def test_entry_2_1(self):
        assert okada_entry(2, 1) == Q**2 + Q**3 - 1

    def test_bad_indices(self):
        with pytest.raises(ValueError):
            okada_entry(0, 1)

    def test_matrix_agrees_with_entry(self):
        m = okada_matrix(3)
        for i in range(1, 4):
            for j in range(1, 4):
                assert m[(i, j)] == okada_entry(i, j)


class TestDeterminant:
    def test_n1(self):
        rep = verify_determinant(1)
        assert rep.verified and rep.lhs == RatFunc((1 + Q) ** 2)

    def test_n2_hand_expansion(self):
        m = okada_matrix(2)
        det = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]
        assert det == determinant_product(2)
        assert verify_determinant(2).verified

    @pytest.mark.parametrize("n", range(3, 8))
    def test_midrange(self, n):
        assert verify_determinant(n).verified

    def test_cap(self):
        with pytest.raises(ValueError):
            verify_determinant(13)
        with pytest.raises(ValueError):
            verify_determinant(0)


class TestCofactors:
    def test_n1(self):
        c = solve_cofactors(1)
        assert c[1] == 1

    def test_n2_hand_value(self):
        c = solve_cofactors(2)
        assert c[1] == RatFunc(-(Q**2) * (1 + Q + Q**2), (1 + Q) ** 2)
        assert c[2] == 1

    def test_out_of_range_convention(self):
        c = solve_cofactors(3)
        assert c[0].is_zero and c[-5].is_zero and c[4].is_zero

    def test_normalization_invariant(self):
        for n in range(1, 7):
            assert solve_cofactors(n)[n] == 1

    @pytest.mark.parametrize("n", range(1, 6))
    def test_matches_minor_oracle(self, n):
        c = solve_cofactors(n)
        denom = minor_cofactor(n, n)
        for j in range(1, n + 1):
            assert c[j] == RatFunc(minor_cofactor(n, j), denom), (n, j)

    def test_common_denominator_consistent(self):
        c = solve_cofactors(4)
        for j in range(1, 5):
            assert c[j] == RatFunc(c.numerator(j), c.common_denominator)


class TestIdentities:
    def test_one_n1(self):
        rep = check_identity(1, "one")
        assert rep.verified and rep.lhs == RatFunc(1)

    def test_three_n2(self):
        rep = check_identity(2, "three")
        assert rep.verified
        assert rep.rhs == RatFunc(determinant_product(2), determinant_product(1))

    def test_two_n3(self):
        rep = check_identity(3, "two", i=1)
        assert rep.verified and rep.lhs.is_zero

    def test_two_requires_row(self):
        with pytest.raises(ValueError):
            check_identity(3, "two")
        with pytest.raises(ValueError):
            check_identity(3, "two", i=3)
        with pytest.raises(ValueError):
            check_identity(3, "one", i=1)
        with pytest.raises(ValueError):
            check_identity(3, "seven")

    def test_three_prime_n1(self):
        # (1 + q) - 0 + q(1+q) = (1+q)^2, the Pochhammer form at n=1
        rep = check_identity(1, "three_prime")
        assert rep.verified
        assert rep.rhs == RatFunc((1 + Q) ** 2)

    @pytest.mark.parametrize("n", [2, 3])
    def test_three_prime_small(self, n):
        assert check_identity(n, "three_prime").verified

    def test_two_prime_n3(self):
        assert check_identity(3, "two_prime", i=2).verified

    @pytest.mark.parametrize("n", range(1, 7))
    def test_full_reports(self, n):
        reports = identity_reports(n)
        assert all(r.verified for r in reports)
        # one + three + three_prime + (n-1) x two + (n-1) x two_prime
        assert len(reports) == 3 + 2 * (n - 1)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_equivalence_of_forms(self, n):
        c = solve_cofactors(n)
        for i in range(1, n):
            plain = check_identity(n, "two", i=i, cofactors=c).verified
            rewritten = check_identity(n, "two_prime", i=i, cofactors=c).verified
            assert plain == rewritten == True  # noqa: E712
        assert (
            check_identity(n, "three", cofactors=c).verified
            == check_identity(n, "three_prime", cofactors=c).verified
            == True  # noqa: E712
        )

    @pytest.mark.parametrize("n", range(2, 7))
    def test_induction_identity(self, n):
        # b_{n-1} * sum_j c_{n,j} a(n,j) equals the n x n determinant
        c = solve_cofactors(n)
        total = RatFunc(0)
        for j in range(1, n + 1):
            total = total + RatFunc(okada_entry(n, j)) * c[j]
        lhs = RatFunc(determinant_product(n - 1)) * total
        assert lhs == RatFunc(det_fraction_free(okada_matrix(n).entries))


class TestRowSummand:
    def test_vanishes_outside(self):
        c = solve_cofactors(3)
        assert row_summand(3, 1, 0, c).is_zero
        assert row_summand(3, 1, -2, c).is_zero
        assert row_summand(3, 1, 4, c).is_zero

    def test_base_case(self):
        c = solve_cofactors(1)
        assert row_summand(1, 1, 1, c) == RatFunc(Q * (1 + Q))

    def test_sum_matches_two_prime_rhs(self):
        n = 4
        c = solve_cofactors(n)
        for i in range(1, n):
            total = RatFunc(0)
            for j in range(1, n + 1):
                total = total + row_summand(n, i, j, c)
            rhs = c[i - 1] - RatFunc(1 + Poly.q_power(i)) * c[i]
            assert total == rhs

    def test_sum_matches_three_prime_rhs(self):
        for n in (1, 2, 3):
            c = solve_cofactors(n)
            total = RatFunc(1 + Poly.q_power(n)) - c[n - 1]
            for j in range(1, n + 1):
                total = total + row_summand(n, n, j, c)
            assert total == determinant_product_ratio(n)
