"""Constructive telescoping fixtures.

Each fixture is a genuinely telescoping triple (operator, certificate,
summand table) built from a separable summand

    F(n, i, j) = rho(n, i) * c(j),        c(j) = qbinom(width, j),

whose j-factor satisfies (1 - q^(j+1)) c(j+1) = (1 - q^(width-j)) c(j)
for every integer j, with c supported on 0 <= j <= width. Writing
r(xj) = (xj - q^width) / (xj (1 - q xj)) for the step ratio and choosing
certificate coefficients with the factor (1 - xj) (which kills the j = -1
boundary), the telescoped difference of

    t(n, i, j) = sum_s (1 - xj) R_s(q, xn, xj) * F(n + dn_s, i + di_s, j)

collapses to an operator acting on (n, i) only:

    L = sum_s [ sigma_j((1 - xj) R_s) * r - (1 - xj) R_s ] * Sn^dn_s Si^di_s,

and L(F) = t(n,i,j+1) - t(n,i,j) holds at every integer j, with t
vanishing outside the support. The (1 - q xj) pole of r cancels against
the sigma_j image of the (1 - xj) factor, so L's coefficients only carry
powers of xj in the denominator and evaluate everywhere on the window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .qcomb import q_binomial
from .qfield import Poly, PrimePoint, Q, RatFunc, XJ, XN
from .ore import CertificateTerm, OreOperator, SummandTable, TelescopingCertificate


@dataclass(frozen=True)
class TelescopingFixture:
    certificate: TelescopingCertificate
    summand: SummandTable
    window: tuple[int, int]


def _random_poly(rng: random.Random) -> Poly:
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        exps = (rng.randrange(0, 3), rng.randrange(0, 2), rng.randrange(0, 2))
        terms[exps] = terms.get(exps, 0) + rng.randrange(-4, 5)
    p = Poly(terms)
    return p if not p.is_zero else Poly.one()


def build_telescoping_fixture(
    rng: random.Random,
    width: int = 4,
    base_n: int = 2,
    base_i: int = 2,
    n_terms: int = 2,
    mode: str = "exact",
    prime_point: PrimePoint | None = None,
) -> TelescopingFixture:
    """A valid (operator, certificate, summand, window) fixture.

    The window is (-1, width + 1): one margin point on each side of the
    j-support, so the summand (and hence the certificate) vanishes at both
    window boundaries.
    """
    step = RatFunc(XJ - Poly.q_power(width), XJ * (1 - Q * XJ))
    shifts = []
    seen = set()
    while len(shifts) < n_terms:
        s = (rng.randrange(0, 3), rng.randrange(0, 3))
        if s not in seen:
            seen.add(s)
            shifts.append(s)
    cert_terms = []
    op_terms: dict[tuple[int, int], RatFunc] = {}
    for (dn, di) in shifts:
        coeff = RatFunc((1 - XJ) * _random_poly(rng))
        cert_terms.append(CertificateTerm(dn=dn, di=di, dj=0, coeff=coeff))
        lcoeff = coeff.sigma(0, 1) * step - coeff
        if not lcoeff.is_zero:
            op_terms[(dn, di)] = op_terms.get((dn, di), RatFunc.zero()) + lcoeff
    cert = TelescopingCertificate(OreOperator(op_terms), tuple(cert_terms))

    max_dn = max(s[0] for s in shifts)
    max_di = max(s[1] for s in shifts)
    rho = {
        (n, i): rng.choice([v for v in range(-9, 10) if v])
        for n in range(1, base_n + max_dn + 1)
        for i in range(1, base_i + max_di + 1)
    }
    window = (-1, width + 1)
    values = {}
    for (n, i), r in rho.items():
        for j in range(window[0], window[1] + 2):
            values[(n, i, j)] = RatFunc(r * q_binomial(width, j))
    summand = SummandTable(values)
    if mode == "mod":
        if prime_point is None:
            raise ValueError("modular fixtures need a prime point")
        summand = summand.reduce(prime_point)
    return TelescopingFixture(certificate=cert, summand=summand, window=window)


@dataclass(frozen=True)
class PlantedRecurrence:
    """A random operator together with a modular table generated to satisfy
    it everywhere, for recovery testing of the guessing engine."""

    operator: OreOperator
    structure: "object"  # AnsatzStructure (imported lazily to avoid a cycle)
    table: "object"  # SequenceTable, mode "mod"
    prime_point: PrimePoint


class _UnluckyPlant(RuntimeError):
    pass


_PLANT_STENCILS = [
    s
    for s in (
        ((0, 0), (1, 0)),
        ((0, 0), (0, 1)),
        ((0, 0), (1, 1)),
        ((1, 0), (0, 1)),
        ((0, 0), (1, 0), (0, 1)),
        ((0, 0), (1, 0), (1, 1)),
        ((0, 0), (0, 1), (1, 1)),
        ((1, 0), (0, 1), (1, 1)),
        ((0, 0), (1, 0), (0, 1), (1, 1)),
    )
]


def _random_coeff(rng: random.Random, degrees) -> Poly:
    dq, dn, dj = degrees
    terms = {}
    for _ in range(rng.randrange(1, 5)):
        exps = (rng.randrange(dq + 1), rng.randrange(dn + 1), rng.randrange(dj + 1))
        terms[exps] = terms.get(exps, 0) + rng.randrange(-3, 4)
    p = Poly(terms)
    return p if not p.is_zero else Poly.const(rng.choice([-2, -1, 1, 2]))


def plant_random_recurrence(
    rng: random.Random,
    prime_point: PrimePoint,
    max_degree: int = 3,
    margin: int = 30,
    max_attempts: int = 20,
) -> PlantedRecurrence:
    """Draw a random operator with stencil inside {(0,0),(1,0),(0,1),(1,1)}
    and degree bounds <= max_degree, then generate a modular solution table
    big enough to guess it back (unknowns + margin admissible points)."""
    from .guess import AnsatzStructure
    from .ore import SequenceTable

    for _ in range(max_attempts):
        stencil = list(rng.choice(_PLANT_STENCILS))
        degrees = tuple(rng.randrange(max_degree + 1) for _ in range(3))
        structure = AnsatzStructure.make(stencil, degrees)
        coeffs = {s: _random_coeff(rng, degrees) for s in structure.stencil}
        driver = max(structure.stencil, key=lambda s: (s[0] + s[1], s))
        try:
            values = _fill_solution(rng, prime_point, structure, coeffs, driver, margin)
        except _UnluckyPlant:
            continue
        op = OreOperator({s: RatFunc(c) for s, c in coeffs.items()})
        table = SequenceTable(values, mode="mod", prime_point=prime_point)
        return PlantedRecurrence(operator=op, structure=structure, table=table, prime_point=prime_point)
    raise _UnluckyPlant("could not generate a solution table (driver kept vanishing)")


def _fill_solution(rng, pp: PrimePoint, structure, coeffs, driver, margin) -> dict:
    """Seed boundary values and propagate the recurrence so it holds at
    every base point whose stencil fits in the table; the driver is the
    stencil's maximal shift, solved for at each step."""
    p = pp.p

    def cval(s, n, j):
        xn, xj = pp.powers(n, j)
        return coeffs[s].eval_mod(p, pp.q_image, xn, xj)

    def solve_step(base_n, base_j, values):
        acc = 0
        for s in structure.stencil:
            if s == driver:
                continue
            acc += cval(s, base_n, base_j) * values[(base_n + s[0], base_j + s[1])]
        d = cval(driver, base_n, base_j)
        if d == 0:
            raise _UnluckyPlant
        return (-acc * pow(d, -1, p)) % p

    target = structure.unknown_count + margin
    values: dict[tuple[int, int], int] = {}
    side = 2
    while (side - 1) * (side - 1) < target:
        side += 1
    if driver == (1, 1):
        for j in range(1, side + 2):
            values[(1, j)] = rng.randrange(1, p)
        for n in range(1, side + 2):
            values[(n, 1)] = rng.randrange(1, p)
        for n in range(1, side + 1):
            for j in range(1, side + 1):
                values[(n + 1, j + 1)] = solve_step(n, j, values)
    elif driver == (1, 0):
        # stencil inside {(0,0),(0,1),(1,0)}: each new row needs the
        # previous row one column further, so the domain is a staircase
        width = 2 * side + 2
        for j in range(1, width + 1):
            values[(1, j)] = rng.randrange(1, p)
        for n in range(1, side + 1):
            for j in range(1, width - n + 1):
                values[(n + 1, j)] = solve_step(n, j, values)
    else:  # driver (0,1): stencil inside {(0,0),(0,1)}, rows independent
        for n in range(1, side + 2):
            values[(n, 1)] = rng.randrange(1, p)
        for n in range(1, side + 2):
            for j in range(1, side + 1):
                values[(n, j + 1)] = solve_step(n, j, values)
    return values


def mutate_fixture(fixture: TelescopingFixture, rng: random.Random) -> TelescopingFixture:
    """Perturb one coefficient of the certificate by +1 (either an operator
    coefficient or a certificate-term coefficient); the result must be
    rejected by the checker."""
    cert = fixture.certificate
    n_op = len(cert.operator.terms)
    pick = rng.randrange(n_op + len(cert.terms))
    if pick < n_op:
        key = sorted(cert.operator.terms)[pick]
        terms = dict(cert.operator.terms)
        terms[key] = terms[key] + 1
        mutated = TelescopingCertificate(OreOperator(terms, cert.operator.inhomogeneous), cert.terms)
    else:
        idx = pick - n_op
        new_terms = list(cert.terms)
        new_terms[idx] = replace(new_terms[idx], coeff=new_terms[idx].coeff + 1)
        mutated = TelescopingCertificate(cert.operator, tuple(new_terms))
    return TelescopingFixture(certificate=mutated, summand=fixture.summand, window=fixture.window)
