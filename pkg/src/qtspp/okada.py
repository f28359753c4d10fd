"""The Okada-matrix engine: entry formula, determinant verification
against the squared orbit product, the bordered cofactor system, and the
five cofactor identities (normalization, row sums, determinant ratio,
plus the two rewritten forms used for telescoping).

Identity labels used throughout (also by the CLI):

* ``one``          c[n] == 1
* ``two``          sum_j c[j] * a(i,j) == 0 for 1 <= i < n
* ``three``        sum_j c[j] * a(n,j) == b(n)/b(n-1)
* ``two_prime``    the q-binomial rewriting of ``two`` with the Kronecker
                   deltas folded into the right-hand side
* ``three_prime``  the rewriting of ``three`` with Pochhammer right-hand side
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .qcomb import ConsistencyError, determinant_product, determinant_product_ratio, q_binomial
from .qfield import (
    Poly,
    Q,
    RatFunc,
    det_fraction_free,
    poly_gcd,
    div_exact,
    solve_linear_fraction,
)

DEFAULT_N_CAP = 12

IDENTITIES = ("one", "two", "two_prime", "three", "three_prime")


def _check_cap(n: int, cap: int):
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n={n} exceeds the configured cap {cap}")


@lru_cache(maxsize=None)
def okada_entry(i: int, j: int) -> Poly:
    """Entry a(i,j): q^(i+j-1) * (qbinom(i+j-2, i-1) + q*qbinom(i+j-1, i))
    plus (1 + q^i) on the diagonal, minus 1 on the first subdiagonal."""
    if i < 1 or j < 1:
        raise ValueError("matrix indices start at 1")
    e = Poly.q_power(i + j - 1) * (q_binomial(i + j - 2, i - 1) + Q * q_binomial(i + j - 1, i))
    if i == j:
        e = e + 1 + Poly.q_power(i)
    if i == j + 1:
        e = e - 1
    return e


@dataclass(frozen=True)
class OkadaMatrix:
    n: int
    entries: tuple[tuple[Poly, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i - 1][j - 1]


@lru_cache(maxsize=None)
def okada_matrix(n: int) -> OkadaMatrix:
    if n < 1:
        raise ValueError("n must be positive")
    rows = tuple(tuple(okada_entry(i, j) for j in range(1, n + 1)) for i in range(1, n + 1))
    return OkadaMatrix(n=n, entries=rows)


@dataclass(frozen=True)
class IdentityReport:
    n: int
    identity: str
    i: int | None
    verified: bool
    lhs: RatFunc
    rhs: RatFunc


class CofactorVector:
    """Normalized cofactors (c[1], ..., c[n]) of the bordered system.

    Indexing follows the convention that c[j] == 0 for j <= 0 and j > n
    (used by the summation identities); c[n] == 1 always. Internally the
    vector is kept both as canonical RatFunc values and as numerators over
    one common denominator, which the identity checks use to avoid
    repeated gcd work.
    """

    __slots__ = ("n", "_c", "_nums", "_den")

    def __init__(self, n: int, c: tuple[RatFunc, ...], nums: tuple[Poly, ...], den: Poly):
        self.n = n
        self._c = c
        self._nums = nums
        self._den = den
        if c[-1] != 1:
            raise ConsistencyError(f"bordered solve returned c[{n}] != 1")

    def __getitem__(self, j: int) -> RatFunc:
        if j < 1 or j > self.n:
            return RatFunc.zero()
        return self._c[j - 1]

    def __len__(self):
        return self.n

    def values(self) -> tuple[RatFunc, ...]:
        return self._c

    def numerator(self, j: int) -> Poly:
        """Numerator of c[j] over the shared denominator."""
        if j < 1 or j > self.n:
            return Poly.zero()
        return self._nums[j - 1]

    @property
    def common_denominator(self) -> Poly:
        return self._den

    def to_json(self) -> dict:
        return {"n": self.n, "c": [v.to_json() for v in self._c]}


@lru_cache(maxsize=None)
def _solve_cofactors(n: int) -> CofactorVector:
    m = okada_matrix(n)
    rows: list[list[Poly]] = [list(m.entries[i]) for i in range(n - 1)]
    rows.append([Poly.const(1 if j == n - 1 else 0) for j in range(n)])
    rhs = [Poly.const(1 if i == n - 1 else 0) for i in range(n)]
    nums, den, _, _ = solve_linear_fraction(rows, rhs)
    if den.lead_coeff() < 0:
        den = -den
        nums = [-v for v in nums]
    cs = []
    for nv in nums:
        if nv.is_zero:
            cs.append(RatFunc.zero())
            continue
        g = poly_gcd(nv, den)
        cn, cd = div_exact(nv, g), div_exact(den, g)
        cs.append(RatFunc._raw(cn, cd))
    return CofactorVector(n=n, c=tuple(cs), nums=tuple(nums), den=den)


def solve_cofactors(n: int, cap: int = DEFAULT_N_CAP) -> CofactorVector:
    """Solve the bordered system (rows 1..n-1 of the Okada matrix plus the
    unit row) with right-hand side (0, ..., 0, 1)."""
    _check_cap(n, cap)
    return _solve_cofactors(n)


def verify_determinant(n: int, cap: int = DEFAULT_N_CAP) -> IdentityReport:
    """Compare det of the n x n Okada matrix with the squared orbit product.

    A mismatch is reported, not raised: it would falsify the determinant
    conjecture at this n.
    """
    _check_cap(n, cap)
    det = det_fraction_free(okada_matrix(n).entries)
    expected = determinant_product(n)
    return IdentityReport(
        n=n,
        identity="determinant",
        i=None,
        verified=det == expected,
        lhs=RatFunc(det),
        rhs=RatFunc(expected),
    )


def _summand_prefactor(n_or_i: int, j: int) -> tuple[Poly, Poly]:
    """Numerator and denominator of q^(i+j-1)(q^(i+j)+q^i-q-1)/(q^i-1)."""
    i = n_or_i
    num = Poly.q_power(i + j - 1) * (Poly.q_power(i + j) + Poly.q_power(i) - Q - 1)
    den = Poly.q_power(i) - 1
    return num, den


def row_summand(n: int, i: int, j: int, c: CofactorVector) -> RatFunc:
    """Summand of the rewritten row identities:
    q^(i+j-1)(q^(i+j)+q^i-q-1)/(q^i-1) * qbinom(i+j-2, i-1) * c[j].

    Vanishes for j <= 0 (q-binomial) and j > n (cofactor convention).
    """
    if i < 1:
        raise ValueError("row index must be >= 1")
    if j <= 0 or j > n:
        return RatFunc.zero()
    qb = q_binomial(i + j - 2, i - 1)
    if qb.is_zero:
        return RatFunc.zero()
    num, den = _summand_prefactor(i, j)
    return RatFunc(num * qb, den) * c[j]


def check_identity(
    n: int,
    which: str,
    i: int | None = None,
    cofactors: CofactorVector | None = None,
    cap: int = DEFAULT_N_CAP,
) -> IdentityReport:
    """Evaluate one of the five cofactor identities exactly.

    ``two`` and ``two_prime`` need a row index 1 <= i < n. The check is
    exact over Q(q); the report carries both sides in canonical form.
    """
    _check_cap(n, cap)
    if which not in IDENTITIES:
        raise ValueError(f"unknown identity {which!r}")
    c = cofactors if cofactors is not None else solve_cofactors(n, cap=cap)
    if which in ("two", "two_prime"):
        if i is None or not 1 <= i < n:
            raise ValueError(f"identity {which!r} needs a row index 1 <= i < n")
    elif i is not None:
        raise ValueError(f"identity {which!r} takes no row index")

    if which == "one":
        lhs = c[n]
        rhs = RatFunc.one()
        return IdentityReport(n, which, None, lhs == rhs, lhs, rhs)

    den = c.common_denominator

    if which in ("two", "three"):
        row = n if which == "three" else i
        total = Poly.zero()
        for j in range(1, n + 1):
            total = total + okada_entry(row, j) * c.numerator(j)
        if which == "two":
            lhs = RatFunc(total, den)
            rhs = RatFunc.zero()
            return IdentityReport(n, which, i, total.is_zero, lhs, rhs)
        rhs = RatFunc(determinant_product(n), determinant_product(n - 1))
        verified = total * rhs.den == rhs.num * den
        lhs = rhs if verified else RatFunc(total, den)
        return IdentityReport(n, which, None, verified, lhs, rhs)

    # rewritten identities: sum over the common denominator (q^row - 1) * den
    row = n if which == "three_prime" else i
    pden = Poly.q_power(row) - 1
    total = Poly.zero()
    for j in range(1, n + 1):
        qb = q_binomial(row + j - 2, row - 1)
        if qb.is_zero:
            continue
        pnum, _ = _summand_prefactor(row, j)
        total = total + pnum * qb * c.numerator(j)

    if which == "two_prime":
        rhs_num = c.numerator(i - 1) - (1 + Poly.q_power(i)) * c.numerator(i)
        verified = total == rhs_num * pden
        rhs = RatFunc(rhs_num, den)
        lhs = rhs if verified else RatFunc(total, pden * den)
        return IdentityReport(n, which, i, verified, lhs, rhs)

    # three_prime: (1 + q^n) - c[n-1] + sum == Pochhammer ratio
    total = total + (1 + Poly.q_power(n)) * pden * den - c.numerator(n - 1) * pden
    rhs = determinant_product_ratio(n)
    verified = total * rhs.den == rhs.num * pden * den
    lhs = rhs if verified else RatFunc(total, pden * den)
    return IdentityReport(n, which, None, verified, lhs, rhs)


def identity_reports(n: int, cap: int = DEFAULT_N_CAP) -> list[IdentityReport]:
    """All identity checks for one n: (one), (two) for every row, (three),
    and both rewritten forms."""
    _check_cap(n, cap)
    c = solve_cofactors(n, cap=cap)
    reports = [check_identity(n, "one", cofactors=c, cap=cap)]
    for i in range(1, n):
        reports.append(check_identity(n, "two", i=i, cofactors=c, cap=cap))
    reports.append(check_identity(n, "three", cofactors=c, cap=cap))
    for i in range(1, n):
        reports.append(check_identity(n, "two_prime", i=i, cofactors=c, cap=cap))
    reports.append(check_identity(n, "three_prime", cofactors=c, cap=cap))
    return reports
