from math import comb

import pytest

from qtspp.qcomb import (
    QProductFormula,
    determinant_product,
    determinant_product_ratio,
    orbit_count_total,
    orbit_product,
    q_binomial,
    q_pochhammer,
)
from qtspp.qfield import Poly, Q, RatFunc


class TestQBinomial:
    def test_k_zero(self):
        for n in range(6):
            assert q_binomial(n, 0) == 1

    def test_2_choose_1(self):
        assert q_binomial(2, 1) == 1 + Q

    def test_4_choose_2(self):
        assert q_binomial(4, 2) == 1 + Q + 2 * Q**2 + Q**3 + Q**4

    def test_out_of_range_is_zero(self):
        assert q_binomial(3, -1) == 0
        assert q_binomial(3, 4) == 0
        assert q_binomial(-2, 0) == 0

    def test_pascal_recursion(self):
        # oracle: the q-Pascal rule, checked on the full triangle
        for n in range(1, 21):
            for k in range(n + 1):
                expect = q_binomial(n - 1, k - 1) + Poly.q_power(k) * q_binomial(n - 1, k)
                assert q_binomial(n, k) == expect, (n, k)

    def test_symmetry(self):
        for n in range(16):
            for k in range(n + 1):
                assert q_binomial(n, k) == q_binomial(n, n - k)

    def test_specializes_to_binomial(self):
        for n in range(13):
            for k in range(n + 1):
                assert q_binomial(n, k).eval_int(q=1) == comb(n, k)


class TestQPochhammer:
    def test_empty_product(self):
        assert q_pochhammer(5, 3, 0) == 1

    def test_q_q_2(self):
        assert q_pochhammer(1, 1, 2) == (1 - Q) * (1 - Q**2)

    def test_rewritten_base_case(self):
        # (q^2; q)_1^2 / (q; q^2)_1^2 = (1-q^2)^2/(1-q)^2 = (1+q)^2
        num = q_pochhammer(2, 1, 1) ** 2
        den = q_pochhammer(1, 2, 1) ** 2
        assert RatFunc(num, den) == RatFunc((1 + Q) ** 2)

    def test_negative_count(self):
        with pytest.raises(ValueError):
            q_pochhammer(1, 1, -1)


class TestOrbitProduct:
    def test_small_values(self):
        assert orbit_product(0) == 1
        assert orbit_product(1) == 1 + Q
        assert orbit_product(2) == 1 + Q + Q**2 + Q**3 + Q**4

    def test_counts_at_one(self):
        # frozen from the integer product formula, cross-checked against
        # the polynomial evaluated at q=1
        expected = [1, 2, 5, 16, 66, 352, 2431]
        for n, c in enumerate(expected):
            assert orbit_count_total(n) == c
            assert orbit_product(n).eval_int(q=1) == c

    def test_count_large_n_is_cheap(self):
        assert orbit_count_total(40) > 10**40

    def test_square_relation(self):
        for n in range(9):
            assert determinant_product(n) == orbit_product(n) ** 2

    def test_ratio_pochhammer_form(self):
        # the constructor itself cross-checks the Pochhammer rewriting
        # against the direct quotient and raises on mismatch
        for n in range(1, 9):
            r = determinant_product_ratio(n)
            assert r == RatFunc(determinant_product(n), determinant_product(n - 1))
        assert determinant_product_ratio(1) == RatFunc((1 + Q) ** 2)

    def test_product_formula_record(self):
        rec = QProductFormula.build(3, "orbit")
        assert rec.value == orbit_product(3)
        rec2 = QProductFormula.build(3, "okada_det")
        assert rec2.value == determinant_product(3)
        with pytest.raises(ValueError):
            QProductFormula(3, "bogus", Poly.one())
