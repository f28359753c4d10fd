"""Recurrence guessing: fit shift operators of a prescribed structure to a
finite value table by exact linear algebra, then validate on held-out
points.

The default lane evaluates everything in a prime field at a random image
of q and solves the nullspace there (two independent primes, structural
agreement enforced); returned operators are modular images tied to the
report's prime points. The exact lane solves the same nullspace over
Q(q) and returns exact operators; it is the right tool for small
structures (for instance the diagonal-cofactor pipeline, where the
guessed operator is afterwards divided by Sn - 1).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import okada
from .qfield import (
    BadEvaluationPointError,
    Poly,
    PrimePoint,
    RatFunc,
    div_exact,
    nullspace_mod_p,
    poly_gcd,
    poly_lcm,
    solve_mod_p,
)
from .ore import OreOperator, SequenceTable, right_divide, substitute_diagonal
from .ore import apply as ore_apply

DEFAULT_GUESS_PRIME_BITS = 29
DEFAULT_OVERSAMPLE = 8
DEFAULT_HOLDOUT = 16
DEFAULT_MAX_CANDIDATES = 16
DEFAULT_SEED = 0


class GuessError(RuntimeError):
    """The guessing pipeline could not produce a coherent answer."""


class InsufficientDataError(ValueError):
    """Table too small for the requested structure; message says how much
    data would be needed."""


@dataclass(frozen=True)
class AnsatzStructure:
    """Shape of the recurrences to fit: which shifts appear and the degree
    bounds (d_q, d_xn, d_xj) of the coefficient monomials; optionally an
    inhomogeneous slot with the same monomials."""

    stencil: tuple[tuple[int, int], ...]
    degrees: tuple[int, int, int]
    inhomogeneous: bool = False

    def __post_init__(self):
        if not self.stencil:
            raise ValueError("empty shift stencil")
        seen = set()
        for (a, b) in self.stencil:
            if a < 0 or b < 0:
                raise ValueError("stencil shifts must be nonnegative")
            if (a, b) in seen:
                raise ValueError(f"duplicate stencil shift {(a, b)}")
            seen.add((a, b))
        if len(self.degrees) != 3 or any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be three nonnegative bounds")

    @classmethod
    def make(cls, stencil, degrees, inhomogeneous=False) -> "AnsatzStructure":
        return cls(
            stencil=tuple(sorted((int(a), int(b)) for a, b in stencil)),
            degrees=tuple(int(d) for d in degrees),
            inhomogeneous=bool(inhomogeneous),
        )

    def monomials(self) -> list[tuple[int, int, int]]:
        dq, dn, dj = self.degrees
        return [
            (e0, e1, e2)
            for e0 in range(dq + 1)
            for e1 in range(dn + 1)
            for e2 in range(dj + 1)
        ]

    def unknowns(self) -> list[tuple[tuple[int, int] | None, tuple[int, int, int]]]:
        monos = self.monomials()
        out = [(shift, m) for shift in sorted(self.stencil) for m in monos]
        if self.inhomogeneous:
            out.extend((None, m) for m in monos)
        return out

    @property
    def unknown_count(self) -> int:
        per = (self.degrees[0] + 1) * (self.degrees[1] + 1) * (self.degrees[2] + 1)
        return per * (len(self.stencil) + (1 if self.inhomogeneous else 0))

    def to_json(self) -> dict:
        return {
            "stencil": [list(s) for s in self.stencil],
            "degrees": list(self.degrees),
            "inhomogeneous": self.inhomogeneous,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AnsatzStructure":
        return cls.make(
            [tuple(s) for s in data["stencil"]],
            tuple(data["degrees"]),
            data.get("inhomogeneous", False),
        )


@dataclass
class GuessReport:
    """Outcome of a guessing run.

    For modular runs the operators are the first prime point's
    representatives (symmetric-lifted residue coefficients); structural
    agreement of the nullspace and of the holdout survivors was enforced
    at every prime in prime_points.
    """

    operators: list[OreOperator]
    training_points: int
    validation_points: int
    primes_used: list[int]
    status: str  # validated | refuted | underdetermined
    structure: AnsatzStructure
    exact: bool
    prime_points: list[PrimePoint] = field(default_factory=list)
    vectors: list[list[list[int]]] = field(default_factory=list, repr=False)
    image_points: list[list[PrimePoint]] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "operators": [op.to_json() for op in self.operators],
            "training_points": self.training_points,
            "validation_points": self.validation_points,
            "primes": self.primes_used,
            "structure": self.structure.to_json(),
            "exact": self.exact,
        }


# ---------------------------------------------------------------------------
# tables from the cofactor pipeline
# ---------------------------------------------------------------------------


def modular_cofactors(n: int, pp: PrimePoint) -> list[int]:
    """Solve the bordered system mod p at the prime point's q-image;
    returns residues [c_1, ..., c_n]."""
    p, rq = pp.p, pp.q_image
    rows = []
    for i in range(1, n):
        rows.append([okada.okada_entry(i, j).eval_mod(p, rq) for j in range(1, n + 1)])
    rows.append([1 if j == n else 0 for j in range(1, n + 1)])
    rhs = [0] * (n - 1) + [1]
    return solve_mod_p(rows, rhs, p)


def build_table(
    n_values,
    source: str,
    mode: str = "exact",
    prime_point: PrimePoint | None = None,
    j_values=None,
    fn=None,
    cap: int | None = None,
    flat: bool = False,
) -> SequenceTable:
    """Populate a SequenceTable from one of the built-in sources.

    * ``cofactors``: points (n, j) for 1 <= j <= n, values c_{n,j} from the
      bordered solve (exact, or mod p at the prime point's q-image).
    * ``diagonal``: points (n, n) with the diagonal values c_{n,n}; with
      ``flat=True`` the points are (n, 0) instead, which is the right shape
      for applying univariate operators like Sn - 1 to the sequence.
    * ``custom``: fn(n, j) over n_values x j_values.
    """
    ns = sorted(set(int(n) for n in n_values))
    if mode not in ("exact", "mod"):
        raise ValueError(f"unknown table mode {mode!r}")
    if mode == "mod" and prime_point is None:
        raise ValueError("modular tables need a prime point")
    values: dict[tuple[int, int], object] = {}
    if source == "custom":
        if fn is None or j_values is None:
            raise ValueError("custom tables need fn and j_values")
        for n in ns:
            for j in sorted(set(int(v) for v in j_values)):
                values[(n, j)] = fn(n, j)
    elif source in ("cofactors", "diagonal"):
        if cap is None:
            cap = okada.DEFAULT_N_CAP if mode == "exact" else 64
        for n in ns:
            if n < 1:
                raise ValueError("cofactor sources need n >= 1")
            if mode == "exact":
                c = okada.solve_cofactors(n, cap=cap)
                if source == "diagonal":
                    values[(n, 0) if flat else (n, n)] = c[n]
                else:
                    for j in range(1, n + 1):
                        values[(n, j)] = c[j]
            else:
                if n > cap:
                    raise ValueError(f"n={n} exceeds the cap {cap}")
                cs = modular_cofactors(n, prime_point)
                if source == "diagonal":
                    values[(n, 0) if flat else (n, n)] = cs[n - 1]
                else:
                    for j in range(1, n + 1):
                        values[(n, j)] = cs[j - 1]
    else:
        raise ValueError(f"unknown table source {source!r}")
    if mode == "mod":
        return SequenceTable(values, mode="mod", prime_point=prime_point)
    return SequenceTable(values)


# ---------------------------------------------------------------------------
# the guessing engine
# ---------------------------------------------------------------------------


def _admissible_points(table: SequenceTable, structure: AnsatzStructure) -> list[tuple[int, int]]:
    out = []
    for (n, j) in table.domain():
        if all((n + a, j + b) in table for (a, b) in structure.stencil):
            out.append((n, j))
    return out


def _q_power_rf(e: int) -> RatFunc:
    if e >= 0:
        return RatFunc(Poly.q_power(e))
    return RatFunc(Poly.one(), Poly.q_power(-e))


def _row_exact(structure: AnsatzStructure, table: SequenceTable, point) -> list[RatFunc]:
    n, j = point
    row = []
    for shift, (e0, e1, e2) in structure.unknowns():
        mono = _q_power_rf(e0 + n * e1 + j * e2)
        if shift is None:
            row.append(mono)
        else:
            a, b = shift
            row.append(mono * table[(n + a, j + b)])
    return row


def _row_mod(structure: AnsatzStructure, values: dict, pp: PrimePoint, point) -> list[int]:
    n, j = point
    p, rq = pp.p, pp.q_image
    row = []
    for shift, (e0, e1, e2) in structure.unknowns():
        mono = pow(rq, e0 + n * e1 + j * e2, p)
        if shift is None:
            row.append(mono)
        else:
            a, b = shift
            row.append((mono * values[(n + a, j + b)]) % p)
    return row


def _sym_lift(v: int, p: int) -> int:
    v %= p
    return v - p if 2 * v > p else v


def operator_to_vector(structure: AnsatzStructure, op: OreOperator, p: int) -> list[int]:
    """Coefficient vector of an integer-polynomial operator in the
    structure's unknown coordinates, reduced mod p. The operator must fit
    the structure (shifts inside the stencil, degrees inside the bounds)."""
    cols = {key: idx for idx, key in enumerate(structure.unknowns())}
    vec = [0] * len(cols)

    def place(shift, coeff: RatFunc):
        if not coeff.is_poly():
            raise ValueError("operator coefficients must be polynomial for vectorization")
        for exps, c in coeff.as_poly().terms.items():
            key = (shift, exps)
            if key not in cols:
                raise ValueError(f"operator does not fit the structure at {key}")
            vec[cols[key]] = c % p

    for shift, coeff in op.terms.items():
        place(shift, coeff)
    if op.inhomogeneous is not None:
        place(None, op.inhomogeneous)
    return vec


def _vector_to_operator(structure: AnsatzStructure, vec, lift_p: int | None = None) -> OreOperator:
    terms: dict[tuple[int, int], RatFunc] = {}
    inhom = RatFunc.zero()
    for (shift, mono), c in zip(structure.unknowns(), vec):
        if isinstance(c, RatFunc):
            contrib = c * RatFunc(Poly.monomial(1, mono))
        else:
            ci = _sym_lift(int(c), lift_p) if lift_p else int(c)
            contrib = RatFunc(Poly.monomial(ci, mono))
        if contrib.is_zero:
            continue
        if shift is None:
            inhom = inhom + contrib
        else:
            terms[shift] = terms.get(shift, RatFunc.zero()) + contrib
    return OreOperator(terms, None if inhom.is_zero else inhom)


def _normalize_exact_vector(vec: list[RatFunc]) -> list[RatFunc]:
    """Clear denominators and content so the vector has coprime integer
    polynomial entries with a positive-leading first nonzero entry."""
    lcm = Poly.one()
    for v in vec:
        if not v.is_zero:
            lcm = poly_lcm(lcm, v.den)
    polys = [(v * RatFunc(lcm)).as_poly() for v in vec]
    g = Poly.zero()
    for pv in polys:
        if not pv.is_zero:
            g = pv.sign_normalized() if g.is_zero else poly_gcd(g, pv)
            if g == 1:
                break
    first = next(pv for pv in polys if not pv.is_zero)
    flip = -1 if first.lead_coeff() < 0 else 1
    if g == 1 or g.is_zero:
        return [RatFunc(pv * flip) for pv in polys]
    return [RatFunc(div_exact(pv, g) * flip) if not pv.is_zero else RatFunc.zero() for pv in polys]


def _rref_field(rows: list[list[RatFunc]]):
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not A[i][c].is_zero), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [v * inv for v in A[r]]
        for i in range(nrows):
            if i != r and not A[i][c].is_zero:
                m = A[i][c]
                A[i] = [vi - m * vr for vi, vr in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A[:r], pivots


def _nullspace_field(rows: list[list[RatFunc]], ncols: int):
    if not rows:
        basis = []
        for k in range(ncols):
            v = [RatFunc.zero()] * ncols
            v[k] = RatFunc.one()
            basis.append(v)
        return basis, []
    R, pivots = _rref_field(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [RatFunc.zero()] * ncols
        v[f] = RatFunc.one()
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis, pivots


def _split_points(points, holdout: int):
    if holdout:
        return points[:-holdout], points[-holdout:]
    return points, []


def guess_operators(
    table: SequenceTable,
    structure: AnsatzStructure,
    oversample: int = DEFAULT_OVERSAMPLE,
    holdout: int = DEFAULT_HOLDOUT,
    primes: list[int] | None = None,
    n_primes: int = 2,
    seed: int = DEFAULT_SEED,
    exact: bool = False,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    prime_bits: int = DEFAULT_GUESS_PRIME_BITS,
) -> GuessReport:
    """Fit operators of the given structure to the table.

    Training takes the admissible points in deterministic (n, j) order,
    keeping the last `holdout` of them out of the fit for validation.
    Raises InsufficientDataError when the window is too small; the message
    states the required size.
    """
    points = _admissible_points(table, structure)
    required = structure.unknown_count + oversample + holdout
    if len(points) < required:
        raise InsufficientDataError(
            f"structure has {structure.unknown_count} unknowns; need at least "
            f"{required} admissible points (+{oversample} oversample, "
            f"+{holdout} holdout) but the table provides {len(points)}"
        )
    training, held = _split_points(points, holdout)
    if exact:
        return _guess_exact(table, structure, training, held, max_candidates)
    return _guess_modular(
        table, structure, training, held, max_candidates, primes, n_primes, seed, prime_bits
    )


def _guess_exact(table, structure, training, held, max_candidates) -> GuessReport:
    if table.mode != "exact":
        raise ValueError("exact guessing needs an exact table")
    rows = [_row_exact(structure, table, pt) for pt in training]
    basis, _ = _nullspace_field(rows, structure.unknown_count)
    status = "validated"
    if len(basis) > max_candidates:
        status = "underdetermined"
        basis = basis[:max_candidates]
    # the monomial parametrization is redundant over the field, so a
    # nonzero unknown vector can assemble to the zero operator; drop those
    ops = [_vector_to_operator(structure, _normalize_exact_vector(v)) for v in basis]
    ops = [op for op in ops if not op.is_zero]
    survivors = []
    for op in ops:
        if all(ore_apply(op, table, pt).is_zero for pt in held):
            survivors.append(op)
    if not survivors:
        status = "refuted"
    elif status != "underdetermined":
        status = "validated"
    return GuessReport(
        operators=survivors,
        training_points=len(training),
        validation_points=len(held),
        primes_used=[],
        status=status,
        structure=structure,
        exact=True,
    )


def _project_table(table: SequenceTable, pp: PrimePoint) -> dict:
    if table.mode == "mod":
        if table.prime_point != pp:
            raise ValueError("modular table is tied to a different prime point")
        return dict(table.values)
    p, rq = pp.p, pp.q_image
    return {k: v.eval_mod(p, rq) for k, v in table.values.items()}


def _guess_modular(
    table, structure, training, held, max_candidates, primes, n_primes, seed, prime_bits
) -> GuessReport:
    rng = random.Random(seed)
    attempts = 0
    while True:
        attempts += 1
        try:
            prime_points = _pick_prime_points(table, rng, primes, n_primes, prime_bits)
            per_prime = [
                _modular_lane(table, structure, training, held, pp, max_candidates)
                for pp in prime_points
            ]
        except BadEvaluationPointError:
            if attempts >= 4:
                raise GuessError("could not find prime points avoiding denominator zeros")
            continue
        signatures = {
            (d["dim"], tuple(d["pivots"]), tuple(d["survivor_idx"]), tuple(d["nontrivial_idx"]))
            for d in per_prime
        }
        if len(signatures) == 1:
            break
        if attempts >= 4 or primes is not None:
            raise GuessError(
                "independent primes disagree on the nullspace structure; "
                "the window is so unlucky that fresh primes did not help"
            )
    first = per_prime[0]
    ops = [
        _vector_to_operator(structure, first["basis"][i], lift_p=prime_points[0].p)
        for i in first["nontrivial_idx"]
    ]
    status = first["status"]
    return GuessReport(
        operators=ops,
        training_points=len(training),
        validation_points=len(held),
        primes_used=[pp.p for pp in prime_points],
        status=status,
        structure=structure,
        exact=False,
        prime_points=list(prime_points),
        vectors=[[d["basis"][i] for i in d["survivor_idx"]] for d in per_prime],
        image_points=[d["images"] for d in per_prime],
    )


def _pick_prime_points(table, rng, primes, n_primes, prime_bits) -> list[PrimePoint]:
    pts = []
    if primes is not None:
        for p in primes:
            pts.append(PrimePoint.random(rng, p=p))
    else:
        for _ in range(n_primes):
            pts.append(PrimePoint.random(rng, bits=prime_bits))
    if table.mode == "mod":
        pts = [table.prime_point]
    return pts


def _q_images_for(pp: PrimePoint, count: int) -> list[PrimePoint]:
    """Several q-images at the same prime, deterministically derived from
    the first one."""
    rng = random.Random((pp.p << 1) ^ pp.q_image)
    images = [pp]
    seen = {pp.q_image}
    while len(images) < count:
        cand = PrimePoint.random(rng, p=pp.p)
        if cand.q_image not in seen:
            seen.add(cand.q_image)
            images.append(cand)
    return images


def _reduces_to_zero_at(poly: Poly, pp: PrimePoint) -> bool:
    """True iff the polynomial is 0 modulo (p, q - q_image): substitute the
    q-image and collect per (xn, xj) monomial."""
    acc: dict[tuple[int, int], int] = {}
    for (e0, e1, e2), c in poly.terms.items():
        key = (e1, e2)
        acc[key] = (acc.get(key, 0) + c * pow(pp.q_image, e0, pp.p)) % pp.p
    return all(v == 0 for v in acc.values())


def _trivial_at_image(op: OreOperator, pp: PrimePoint) -> bool:
    """A single q-image cannot see coefficients that vanish at that image;
    an operator all of whose coefficients do is formal junk mod (p, q - rq)."""
    parts = [c.num for c in op.terms.values()]
    if op.inhomogeneous is not None:
        parts.append(op.inhomogeneous.num)
    return all(_reduces_to_zero_at(num, pp) for num in parts)


def _modular_lane(table, structure, training, held, pp, max_candidates) -> dict:
    # a single q-image makes the columns of q-monomials proportional, so
    # exact tables are projected at several images of the same prime (one
    # more than the q-degree bound pins the coefficients down); modular
    # tables carry data at one image only, and trivially-vanishing
    # candidates are filtered after the fact instead
    if table.mode == "mod":
        images = [pp]
    else:
        images = _q_images_for(pp, structure.degrees[0] + 2)
    rows: list[list[int]] = []
    held_rows: list[list[int]] = []
    for img in images:
        values = _project_table(table, img)
        rows.extend(_row_mod(structure, values, img, pt) for pt in training)
        held_rows.extend(_row_mod(structure, values, img, pt) for pt in held)
    basis, pivots = nullspace_mod_p(rows, structure.unknown_count, pp.p)
    status = "validated"
    if len(basis) > max_candidates:
        status = "underdetermined"
        basis = basis[:max_candidates]
    survivor_idx = []
    nontrivial_idx = []
    for idx, vec in enumerate(basis):
        op = _vector_to_operator(structure, vec, lift_p=pp.p)
        if op.is_zero:
            continue  # degenerate assembly (monomial combination cancels)
        ok = all(sum(c * r for c, r in zip(vec, row)) % pp.p == 0 for row in held_rows)
        if ok:
            survivor_idx.append(idx)
            if len(images) > 1 or not _trivial_at_image(op, pp):
                nontrivial_idx.append(idx)
    if not nontrivial_idx:
        status = "refuted"
    return {
        "dim": len(basis),
        "pivots": pivots,
        "basis": basis,
        "survivor_idx": survivor_idx,
        "nontrivial_idx": nontrivial_idx,
        "status": status,
        "images": images,
    }


def revalidate(report: GuessReport, table2: SequenceTable) -> GuessReport:
    """Filter a report's operators to those also annihilating a disjoint
    table; updates counts and status."""
    structure = report.structure
    points = _admissible_points(table2, structure)
    if not points:
        raise InsufficientDataError("revalidation table has no admissible points")
    if report.exact:
        survivors = [
            op for op in report.operators if all(ore_apply(op, table2, pt).is_zero for pt in points)
        ]
        return GuessReport(
            operators=survivors,
            training_points=report.training_points,
            validation_points=report.validation_points + len(points),
            primes_used=[],
            status="validated" if survivors else "refuted",
            structure=structure,
            exact=True,
        )
    keep: set[int] | None = None
    for pp, vecs in zip(report.prime_points, report.vectors):
        values = _project_table(table2, pp)
        rows = [_row_mod(structure, values, pp, pt) for pt in points]
        ok_idx = {
            i
            for i, vec in enumerate(vecs)
            if all(sum(c * r for c, r in zip(vec, row)) % pp.p == 0 for row in rows)
        }
        keep = ok_idx if keep is None else (keep & ok_idx)
    keep = sorted(keep or [])
    survivors = [report.operators[i] for i in keep]
    return GuessReport(
        operators=survivors,
        training_points=report.training_points,
        validation_points=report.validation_points + len(points),
        primes_used=report.primes_used,
        status="validated" if survivors else "refuted",
        structure=structure,
        exact=False,
        prime_points=report.prime_points,
        vectors=[[vecs[i] for i in keep] for vecs in report.vectors],
    )


def escalate(
    table: SequenceTable,
    max_total_shift: int = 4,
    max_degree: int = 6,
    budget_seconds: float = 60.0,
    diagonal: bool = False,
    **kw,
) -> GuessReport | None:
    """Try structures of increasing size until one validates or the budget
    runs out. Returns None if nothing validated."""
    t0 = time.monotonic()
    for total in range(1, max_total_shift + 1):
        if diagonal:
            families = [[(k, k) for k in range(total + 1)]]
        else:
            families = [
                [(k, 0) for k in range(total + 1)],
                [(0, k) for k in range(total + 1)],
                [(a, b) for a in range(total + 1) for b in range(total + 1 - a)],
            ]
        for deg in range(max_degree + 1):
            for stencil in families:
                if time.monotonic() - t0 > budget_seconds:
                    return None
                structure = AnsatzStructure.make(stencil, (deg, deg, deg))
                try:
                    report = guess_operators(table, structure, **kw)
                except InsufficientDataError:
                    continue
                if report.status == "validated" and report.operators:
                    return report
    return None


# ---------------------------------------------------------------------------
# the diagonal-normalization pipeline
# ---------------------------------------------------------------------------


@dataclass
class DiagonalCertification:
    """Everything the diagonal pipeline concluded: the guessed diagonal
    operator, its univariate substitution, the witness that Sn - 1 is a
    right factor, and the initial-value checks that pin the sequence to
    the constant 1 on the window."""

    report: GuessReport
    operator: OreOperator
    diagonal_operator: OreOperator
    quotient: OreOperator
    remainder_zero: bool
    order: int
    initial_checked: int
    initial_ok: bool
    leading_nonvanishing: bool
    window: tuple[int, int]
    concluded: bool


def certify_constant_diagonal(
    n_max: int = 12,
    initial_values: int = 7,
    holdout: int = 3,
    cap: int | None = None,
) -> DiagonalCertification:
    """Guess a diagonal-shaped operator on the diagonal cofactor table,
    substitute j -> n, divide by Sn - 1, and check initial values.

    A validated operator with zero remainder, nonvanishing leading
    coefficient on the window, and `initial_values` checked starting
    values of 1 certifies that the diagonal is constant 1 on the window.
    """
    if n_max < 8:
        raise ValueError("the diagonal certification needs a window of at least 8")
    table = build_table(range(1, n_max + 1), "diagonal", cap=cap)
    structure = AnsatzStructure.make([(0, 0), (1, 1)], (0, 1, 0))
    admissible = n_max - 1  # the (1,1) shift drops the last diagonal point
    oversample = admissible - structure.unknown_count - holdout
    if oversample < 0:
        raise ValueError("window too small for the diagonal ansatz")
    report = guess_operators(
        table, structure, oversample=oversample, holdout=holdout, exact=True
    )
    operator = None
    diag = None
    for op in report.operators:
        cand = substitute_diagonal(op)
        if not cand.is_zero:
            operator, diag = op, cand
            break
    if operator is None or diag is None:
        raise GuessError("no guessed candidate has a nonzero diagonal substitution")
    quotient, remainder = right_divide(diag, OreOperator.sn() - 1)
    order = diag.sn_order
    lead = diag.coeff(order)
    leading_ok = all(
        not lead.instantiate(n=k).is_zero for k in range(1, n_max - order + 1)
    )
    checked = min(initial_values, n_max)
    initial_ok = all(table[(k, k)] == 1 for k in range(1, checked + 1))
    concluded = (
        report.status == "validated"
        and remainder.is_zero
        and order <= initial_values
        and initial_ok
        and leading_ok
    )
    return DiagonalCertification(
        report=report,
        operator=operator,
        diagonal_operator=diag,
        quotient=quotient,
        remainder_zero=remainder.is_zero,
        order=order,
        initial_checked=checked,
        initial_ok=initial_ok,
        leading_nonvanishing=leading_ok,
        window=(1, n_max),
        concluded=concluded,
    )
