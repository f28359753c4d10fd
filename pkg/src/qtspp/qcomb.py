"""q-combinatorial building blocks: Gaussian binomials, q-Pochhammer
symbols, and the two orbit-counting product formulas (the generating
product for totally symmetric plane partitions and its square, the
conjectured Okada determinant value).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import gmpy2

from .qfield import Poly, Q, RatFunc, div_exact


class ConsistencyError(RuntimeError):
    """Two supposedly equal closed forms disagreed; must never fire."""


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> Poly:
    """Gaussian binomial coefficient as a polynomial in q.

    Out-of-range arguments (k < 0 or k > n) give 0, so sums over all
    integers j are well defined; the quotient of q-factorial products is
    divided out exactly.
    """
    if k < 0 or k > n:
        return Poly.zero()
    if k == 0 or k == n:
        return Poly.one()
    num = Poly.one()
    den = Poly.one()
    for t in range(1, k + 1):
        num = num * (1 - Poly.q_power(n - k + t))
        den = den * (1 - Poly.q_power(t))
    return div_exact(num, den)


def q_pochhammer(base_exp: int, step_exp: int, count: int) -> Poly:
    """(q**base_exp; q**step_exp)_count as a polynomial in q."""
    if count < 0:
        raise ValueError("q_pochhammer needs a nonnegative count")
    out = Poly.one()
    for t in range(count):
        e = base_exp + t * step_exp
        if e < 0:
            raise ValueError("q_pochhammer factor with negative exponent")
        out = out * (1 - Poly.q_power(e))
    return out


@lru_cache(maxsize=None)
def orbit_product(n: int) -> Poly:
    """The orbit-counting generating product for TSPPs with parts <= n:
    prod over 1 <= i <= j <= k <= n of (1 - q^(i+j+k-1)) / (1 - q^(i+j+k-2)),
    fully canceled to a polynomial.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    exps: Counter[int] = Counter()
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                exps[i + j + k - 1] += 1
                exps[i + j + k - 2] -= 1
    num = Poly.one()
    den = Poly.one()
    for e, m in sorted(exps.items()):
        if m > 0:
            num = num * (1 - Poly.q_power(e)) ** m
        elif m < 0:
            den = den * (1 - Poly.q_power(e)) ** (-m)
    return div_exact(num, den)


@lru_cache(maxsize=None)
def determinant_product(n: int) -> Poly:
    """The conjectured Okada determinant value: orbit_product(n) squared."""
    return orbit_product(n) ** 2


def determinant_product_ratio(n: int) -> RatFunc:
    """Consecutive ratio of determinant products, in q-Pochhammer form:
    (q^(2n); q)_n^2 / (q^n; q^2)_n^2.

    Cross-checked against determinant_product(n) / determinant_product(n-1)
    before returning.
    """
    if n < 1:
        raise ValueError("n must be positive")
    pochhammer_form = RatFunc(q_pochhammer(2 * n, 1, n) ** 2, q_pochhammer(n, 2, n) ** 2)
    direct = RatFunc(determinant_product(n), determinant_product(n - 1))
    if pochhammer_form != direct:
        raise ConsistencyError(
            f"Pochhammer form of the determinant ratio disagrees with the "
            f"direct quotient at n={n}"
        )
    return pochhammer_form


def orbit_count_total(n: int) -> int:
    """Number of TSPPs with parts <= n (the product formula at q = 1).

    Computed as the integer product over triples of (i+j+k-1)/(i+j+k-2)
    with exponent bookkeeping per base, so it stays cheap for n far above
    the enumeration cap (where the polynomial itself would be huge).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    exps: Counter[int] = Counter()
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                exps[i + j + k - 1] += 1
                exps[i + j + k - 2] -= 1
    num = gmpy2.mpz(1)
    den = gmpy2.mpz(1)
    for base, e in exps.items():
        if e > 0:
            num *= gmpy2.mpz(base) ** e
        elif e < 0:
            den *= gmpy2.mpz(base) ** (-e)
    quotient, remainder = gmpy2.f_divmod(num, den)
    if remainder != 0:
        raise ConsistencyError("orbit count product did not reduce to an integer")
    return int(quotient)


@dataclass(frozen=True)
class QProductFormula:
    """A fully canceled product-formula value, tagged by which product."""

    n: int
    kind: str  # "orbit" or "okada_det"
    value: Poly

    def __post_init__(self):
        if self.kind not in ("orbit", "okada_det"):
            raise ValueError(f"unknown product kind {self.kind!r}")
        if self.value.eval_int(q=1) <= 0:
            raise ValueError("product value must be positive at q=1")

    @classmethod
    def build(cls, n: int, kind: str) -> "QProductFormula":
        value = orbit_product(n) if kind == "orbit" else determinant_product(n)
        return cls(n=n, kind=kind, value=value)
