import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polys
from qtspp.fixtures import build_telescoping_fixture, mutate_fixture
from qtspp.guess import build_table
from qtspp.okada import solve_cofactors
from qtspp.qcomb import determinant_product_ratio
from qtspp.qfield import Poly, PrimePoint, Q, RatFunc, XJ, XN
from qtspp.ore import (
    CertificateTerm,
    InsufficientPointsError,
    NotDiagonalError,
    NotUnivariateError,
    OreOperator,
    SequenceTable,
    SingularCoefficientError,
    SummandTable,
    TableDomainError,
    TelescopingCertificate,
    annihilates,
    apply,
    homogenize,
    is_left_multiple,
    right_divide,
    substitute_diagonal,
    verify_telescoping,
)

SN = OreOperator.sn()
SJ = OreOperator.sj()


def rand_coeff(rng, dq=2, dn=2, dj=1):
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        exps = (rng.randrange(dq + 1), rng.randrange(dn + 1), rng.randrange(dj + 1))
        terms[exps] = terms.get(exps, 0) + rng.randrange(-4, 5)
    p = Poly(terms)
    return RatFunc(p if not p.is_zero else Poly.one())


def rand_univariate_op(rng, max_order=3):
    terms = {}
    for a in range(rng.randrange(1, max_order + 1) + 1):
        num = Poly({(rng.randrange(2), rng.randrange(2), 0): rng.randrange(-3, 4) for _ in range(2)})
        den = Poly({(rng.randrange(2), rng.randrange(2), 0): rng.randrange(1, 3)})
        if num.is_zero:
            num = Poly.one()
        terms[(a, 0)] = RatFunc(num, den)
    return OreOperator(terms)


class TestOperatorAlgebra:
    def test_commutation_rule(self):
        assert SN * OreOperator.from_scalar(XN) == OreOperator({(1, 0): RatFunc(Q * XN)})
        assert SJ * OreOperator.from_scalar(XJ) == OreOperator({(0, 1): RatFunc(Q * XJ)})

    def test_constant_coefficients_commute(self):
        assert (SN + 1) * (SN - 1) == SN * SN - 1

    def test_multiplicative_identity(self):
        A = OreOperator({(1, 0): RatFunc(XN), (0, 2): RatFunc(Q + 1)})
        assert A * OreOperator.identity() == A
        assert OreOperator.identity() * A == A

    @given(polys, st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_commutation_property(self, f, k):
        # Sn^k * f == sigma_n^k(f) * Sn^k
        lhs = OreOperator.sn(k) * OreOperator.from_scalar(f)
        rhs = OreOperator({(k, 0): RatFunc(f.sigma(k, 0))})
        assert lhs == rhs

    def test_associativity_random(self, rng):
        for _ in range(40):
            ops = [
                OreOperator(
                    {(rng.randrange(3), rng.randrange(3)): rand_coeff(rng) for _ in range(2)}
                )
                for _ in range(3)
            ]
            A, B, C = ops
            assert (A * B) * C == A * (B * C)
            assert A * (B + C) == A * B + A * C

    def test_inhomogeneous_multiplication(self):
        # (L_A, h_A) * (L_B, h_B) applied to T equals A applied to B(T)
        rng = random.Random(5)
        A = OreOperator({(1, 0): rand_coeff(rng)}, inhomogeneous=rand_coeff(rng))
        B = OreOperator({(0, 0): rand_coeff(rng), (1, 0): rand_coeff(rng)}, inhomogeneous=rand_coeff(rng))
        T = SequenceTable({(n, 0): RatFunc(Poly.q_power(n) + n) for n in range(1, 9)})
        BT = SequenceTable({(n, 0): apply(B, T, (n, 0)) for n in range(1, 8)})
        prod = A * B
        for n in range(1, 7):
            assert apply(prod, T, (n, 0)) == apply(A, BT, (n, 0))

    def test_json_round_trip(self, rng):
        A = OreOperator(
            {(2, 1): rand_coeff(rng), (0, 0): rand_coeff(rng)},
            inhomogeneous=rand_coeff(rng),
        )
        assert OreOperator.from_json(A.to_json()) == A


class TestApply:
    def test_difference_kills_constants(self):
        tbl = SequenceTable({(n, 0): 1 for n in range(1, 30)})
        assert apply(SN - 1, tbl, (5, 0)).is_zero
        assert annihilates(SN - 1, tbl, min_points=20)

    def test_geometric(self):
        tbl = SequenceTable({(n, 0): RatFunc(Poly.q_power(n)) for n in range(1, 30)})
        assert annihilates(SN - OreOperator.from_scalar(Q), tbl, min_points=20)

    def test_diagonal_cofactors_are_constant(self):
        # the flat diagonal table carries c_{n,n}, which identity one pins to 1
        tbl = build_table(range(1, 11), "diagonal", flat=True, cap=12)
        assert annihilates(SN - 1, tbl, min_points=8)

    def test_not_annihilated(self):
        tbl = SequenceTable({(n, 0): n for n in range(1, 30)})
        assert not annihilates(SN - 1, tbl, min_points=20)

    def test_missing_point(self):
        tbl = SequenceTable({(1, 0): 1})
        with pytest.raises(TableDomainError):
            apply(SN, tbl, (1, 0))

    def test_min_points_guard(self):
        tbl = SequenceTable({(n, 0): 1 for n in range(1, 6)})
        with pytest.raises(InsufficientPointsError):
            annihilates(SN - 1, tbl)  # default floor of 25

    def test_singular_coefficient_reported_and_skipped(self):
        op = OreOperator({(0, 0): RatFunc(Poly.one(), XN - Q**2)})
        tbl = SequenceTable({(n, 0): 0 for n in range(1, 40)})
        with pytest.raises(SingularCoefficientError):
            apply(op, tbl, (2, 0))  # xn -> q^2 kills the denominator
        # annihilates treats that point as inadmissible and still succeeds
        assert annihilates(op, tbl, min_points=30)

    def test_modular_apply(self, rng):
        pp = PrimePoint.random(rng, bits=40)
        tbl = SequenceTable(
            {(n, 0): RatFunc(Poly.q_power(2 * n)) for n in range(1, 30)}
        ).reduce(pp)
        assert annihilates(SN - OreOperator.from_scalar(Q**2), tbl, min_points=20)
        assert apply(SN, tbl, (3, 0)) == pow(pp.q_image, 8, pp.p)


class TestDiagonalSubstitution:
    def test_example(self):
        op = OreOperator({(1, 1): RatFunc(XJ)}) - OreOperator.from_scalar(XN)
        assert substitute_diagonal(op) == OreOperator({(1, 0): RatFunc(XN)}) - OreOperator.from_scalar(XN)

    def test_pure_shifts(self):
        assert substitute_diagonal(SN**2 * SJ**2 - 1) == OreOperator({(2, 0): 1}) - 1

    def test_rejects_off_diagonal(self):
        with pytest.raises(NotDiagonalError):
            substitute_diagonal(SN)

    def test_consistency_with_apply(self, rng):
        # diagonal-shaped operators act the same on the diagonal of a table
        # as their substitution acts on the flattened diagonal
        A = OreOperator({(k, k): rand_coeff(rng) for k in range(3)})
        D = substitute_diagonal(A)
        vals = {(n, n): RatFunc(Poly.from_q_coeffs([rng.randrange(-5, 6) for _ in range(3)])) for n in range(1, 12)}
        T = SequenceTable(vals)
        flat = SequenceTable({(n, 0): v for (n, _), v in vals.items()})
        for n in range(1, 9):
            assert apply(A, T, (n, n)) == apply(D, flat, (n, 0))


class TestDivision:
    def test_exact_case(self):
        q, r = right_divide(SN * SN - 1, SN - 1)
        assert r.is_zero and q == SN + 1

    def test_remainder_case(self):
        _, r = right_divide(SN - OreOperator.from_scalar(Q), SN - 1)
        assert not r.is_zero

    def test_rejects_bivariate(self):
        with pytest.raises(NotUnivariateError):
            right_divide(SJ, SN)
        with pytest.raises(NotUnivariateError):
            right_divide(OreOperator({(1, 0): RatFunc(XJ)}), SN - 1)
        with pytest.raises(NotUnivariateError):
            right_divide(OreOperator({(1, 0): 1}, inhomogeneous=RatFunc(1)), SN - 1)

    def test_recombination_random(self, rng):
        for _ in range(60):
            A = rand_univariate_op(rng)
            B = rand_univariate_op(rng, max_order=2)
            q, r = right_divide(A, B)
            assert q * B + r == A
            assert r.is_zero or r.sn_order < B.sn_order

    def test_left_multiples(self, rng):
        B = rand_univariate_op(rng, max_order=2)
        assert is_left_multiple((SN + 1) * B, B)
        if B.sn_order >= 1:
            assert not is_left_multiple(B, (SN + 1) * B)
        for _ in range(30):
            Qop = rand_univariate_op(rng, max_order=2)
            assert is_left_multiple(Qop * B, B)

    def test_homogenize(self):
        # y(n) = n satisfies y(n+1) - y(n) - 1 = 0
        op = OreOperator({(1, 0): 1, (0, 0): -1}, inhomogeneous=RatFunc(-1))
        hom = homogenize(op)
        assert hom.inhomogeneous is None
        tbl = SequenceTable({(n, 0): n for n in range(1, 40)})
        assert annihilates(hom, tbl, min_points=30)


class TestDeterminantRatioRecurrence:
    """The consecutive ratio of squared orbit products satisfies an
    explicit second-order recurrence; a random higher-order left multiple
    of that operator is recognized by skew division and annihilates the
    same table."""

    def _ratio_operator(self):
        num = ((1 - Q * XN**3) * (1 - Q**3 * XN**3) * (1 - Q**5 * XN**3) * (1 - XN)) ** 2
        den = ((1 - XN**2) * (1 - Q * XN**2) * (1 - Q**2 * XN**2) * (1 - Q**3 * XN**2)) ** 2
        return OreOperator({(2, 0): RatFunc(den), (0, 0): RatFunc(-num)})

    def test_order_two_annihilator(self):
        B = self._ratio_operator()
        tbl = SequenceTable({(n, 0): determinant_product_ratio(n) for n in range(1, 15)})
        assert annihilates(B, tbl, min_points=10)

    def test_left_multiple_annihilates(self, rng):
        B = self._ratio_operator()
        tbl = SequenceTable({(n, 0): determinant_product_ratio(n) for n in range(1, 15)})
        Qop = rand_univariate_op(rng, max_order=2)
        L = Qop * B
        assert is_left_multiple(L, B)
        assert annihilates(L, tbl, min_points=8)


class TestTelescoping:
    def test_zero_certificate(self):
        cert = TelescopingCertificate(OreOperator.zero(), ())
        F = SummandTable({(n, i, j): 0 for n in (1, 2) for i in (1, 2) for j in range(-1, 4)})
        assert verify_telescoping(cert, F, (-1, 2))

    def test_constructed_fixtures(self, rng):
        for _ in range(8):
            fix = build_telescoping_fixture(rng, width=rng.randrange(3, 6), n_terms=rng.randrange(1, 4))
            assert verify_telescoping(fix.certificate, fix.summand, fix.window)

    def test_mutations_rejected(self, rng):
        for _ in range(8):
            fix = build_telescoping_fixture(rng, width=4)
            bad = mutate_fixture(fix, rng)
            assert not verify_telescoping(bad.certificate, bad.summand, bad.window)

    def test_modular_fixture(self, rng):
        pp = PrimePoint.random(rng, bits=45)
        fix = build_telescoping_fixture(rng, width=4, mode="mod", prime_point=pp)
        assert verify_telescoping(fix.certificate, fix.summand, fix.window)
        bad = mutate_fixture(fix, rng)
        assert not verify_telescoping(bad.certificate, bad.summand, bad.window)

    def test_no_base_pairs(self):
        cert = TelescopingCertificate(OreOperator({(5, 5): 1}), ())
        F = SummandTable({(1, 1, 0): 1})
        with pytest.raises(InsufficientPointsError):
            verify_telescoping(cert, F, (0, 0))

    def test_json_round_trip(self, rng):
        fix = build_telescoping_fixture(rng)
        cert2 = TelescopingCertificate.from_json(fix.certificate.to_json())
        assert cert2 == fix.certificate
        F2 = SummandTable.from_json(fix.summand.to_json())
        assert F2.values == fix.summand.values
        assert verify_telescoping(cert2, F2, fix.window)


class TestTables:
    def test_mode_validation(self):
        with pytest.raises(ValueError):
            SequenceTable({}, mode="weird")
        with pytest.raises(ValueError):
            SequenceTable({(1, 1): 1}, mode="mod")

    def test_reduce_and_json(self, rng):
        pp = PrimePoint.random(rng, bits=40)
        t = SequenceTable({(n, j): RatFunc(Q + n * j) for n in range(1, 4) for j in range(1, 3)})
        tm = t.reduce(pp)
        assert tm.mode == "mod" and tm.prime_point == pp
        again = SequenceTable.from_json(tm.to_json())
        assert again.values == tm.values and again.prime_point.p == pp.p

    def test_cofactor_table_values(self):
        t = build_table(range(1, 4), "cofactors")
        c2 = solve_cofactors(2)
        assert t[(2, 1)] == c2[1]
        assert t[(3, 3)] == RatFunc(1)
