"""Noncommutative shift-operator algebra over Q(q, xn, xj) and the
machinery built on it: applying operators to value tables, diagonal
substitution, skew (right) Euclidean division, left-multiple tests, and
telescoping-certificate verification.

Operators are finite sums coeff(q, xn, xj) * Sn^a * Sj^b plus an optional
inhomogeneous part. Multiplication twists coefficients by the shift
substitutions xn -> q^a * xn, xj -> q^b * xj (the image of q^n under
n -> n+a, and likewise for j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .qfield import (
    BadEvaluationPointError,
    FracSum,
    Poly,
    PrimePoint,
    RatFunc,
)


class TableDomainError(KeyError):
    """A required table point is missing."""


class SingularCoefficientError(ValueError):
    """A coefficient denominator vanished at an evaluation point."""


class InsufficientPointsError(ValueError):
    """Too few admissible points for a meaningful check."""


class NotUnivariateError(ValueError):
    """Operation requires an operator univariate in Sn."""


class NotDiagonalError(ValueError):
    """Operation requires pure diagonal shifts Sn^k Sj^k."""


DEFAULT_MIN_POINTS = 25


def _coerce_coeff(v) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, (Poly, int)):
        return RatFunc(v)
    raise TypeError(f"cannot use {v!r} as an operator coefficient")


class OreOperator:
    """Finite sum of terms coeff * Sn^a * Sj^b with an optional
    inhomogeneous part (a bare rational function added on application)."""

    __slots__ = ("terms", "inhomogeneous")

    def __init__(self, terms: Mapping | None = None, inhomogeneous=None):
        clean: dict[tuple[int, int], RatFunc] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("shift orders must be nonnegative")
            c = _coerce_coeff(c)
            if not c.is_zero:
                clean[(int(a), int(b))] = c
        self.terms = clean
        if inhomogeneous is not None:
            inhomogeneous = _coerce_coeff(inhomogeneous)
            if inhomogeneous.is_zero:
                inhomogeneous = None
        self.inhomogeneous = inhomogeneous

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "OreOperator":
        return cls()

    @classmethod
    def identity(cls) -> "OreOperator":
        return cls({(0, 0): 1})

    @classmethod
    def sn(cls, k: int = 1) -> "OreOperator":
        return cls({(k, 0): 1})

    @classmethod
    def sj(cls, k: int = 1) -> "OreOperator":
        return cls({(0, k): 1})

    @classmethod
    def from_scalar(cls, c) -> "OreOperator":
        return cls({(0, 0): c})

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.inhomogeneous is None

    @property
    def sn_order(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    @property
    def sj_order(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def coeff(self, a: int, b: int = 0) -> RatFunc:
        return self.terms.get((a, b), RatFunc.zero())

    def shifts(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Poly, RatFunc)):
            other = OreOperator.from_scalar(other)
        if not isinstance(other, OreOperator):
            return NotImplemented
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, RatFunc.zero()) + c
            if s.is_zero:
                terms.pop(key, None)
            else:
                terms[key] = s
        inhom = None
        if self.inhomogeneous is not None or other.inhomogeneous is not None:
            inhom = (self.inhomogeneous or RatFunc.zero()) + (other.inhomogeneous or RatFunc.zero())
        return OreOperator(terms, inhom)

    __radd__ = __add__

    def __neg__(self):
        return OreOperator(
            {k: -c for k, c in self.terms.items()},
            None if self.inhomogeneous is None else -self.inhomogeneous,
        )

    def __sub__(self, other):
        if isinstance(other, (int, Poly, RatFunc)):
            other = OreOperator.from_scalar(other)
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Poly, RatFunc)):
            other = OreOperator.from_scalar(other)
        if not isinstance(other, OreOperator):
            return NotImplemented
        terms: dict[tuple[int, int], RatFunc] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                val = c1 * c2.sigma(a1, b1)
                s = terms.get(key, RatFunc.zero()) + val
                if s.is_zero:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        inhom = self.inhomogeneous
        if other.inhomogeneous is not None:
            acc = RatFunc.zero()
            for (a, b), c in self.terms.items():
                acc = acc + c * other.inhomogeneous.sigma(a, b)
            inhom = acc if inhom is None else inhom + acc
        return OreOperator(terms, inhom)

    def __rmul__(self, other):
        if isinstance(other, (int, Poly, RatFunc)):
            return OreOperator.from_scalar(other) * self
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("operator power needs a nonnegative exponent")
        out = OreOperator.identity()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Poly, RatFunc)):
            other = OreOperator.from_scalar(other)
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.terms == other.terms and self.inhomogeneous == other.inhomogeneous

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.inhomogeneous))

    def scale(self, c) -> "OreOperator":
        """Left-multiply by a rational function."""
        c = _coerce_coeff(c)
        return OreOperator(
            {k: c * v for k, v in self.terms.items()},
            None if self.inhomogeneous is None else c * self.inhomogeneous,
        )

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms, reverse=True):
            c = self.terms[(a, b)]
            shift = "*".join(
                ([f"Sn^{a}" if a > 1 else "Sn"] if a else []) + ([f"Sj^{b}" if b > 1 else "Sj"] if b else [])
            )
            cs = str(c)
            if not shift:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(shift)
            else:
                parts.append(f"({cs})*{shift}")
        if self.inhomogeneous is not None:
            parts.append(f"[{self.inhomogeneous}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"OreOperator({self})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "inhomog": None if self.inhomogeneous is None else self.inhomogeneous.to_json(),
            "terms": [
                {"sn": a, "sj": b, "coeff": self.terms[(a, b)].to_json()}
                for (a, b) in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OreOperator":
        terms = {}
        for t in data["terms"]:
            key = (int(t["sn"]), int(t["sj"]))
            c = RatFunc.from_json(t["coeff"])
            terms[key] = terms.get(key, RatFunc.zero()) + c
        inhom = data.get("inhomog")
        return cls(terms, None if inhom is None else RatFunc.from_json(inhom))


SN = OreOperator.sn()
SJ = OreOperator.sj()


# ---------------------------------------------------------------------------
# value tables
# ---------------------------------------------------------------------------


class _BaseTable:
    """Finite map from integer index tuples to exact or prime-field values."""

    _KEYLEN = 2
    _FIELDS = ("n", "j")
    __slots__ = ("mode", "values", "prime_point")

    def __init__(self, values: Mapping, mode: str = "exact", prime_point: PrimePoint | None = None):
        if mode not in ("exact", "mod"):
            raise ValueError(f"unknown table mode {mode!r}")
        if mode == "mod" and prime_point is None:
            raise ValueError("modular tables must carry their prime point")
        if mode == "exact" and prime_point is not None:
            raise ValueError("exact tables carry no prime point")
        clean = {}
        for key, v in values.items():
            key = tuple(int(x) for x in key)
            if len(key) != self._KEYLEN:
                raise ValueError(f"table keys must be {self._KEYLEN}-tuples")
            if mode == "exact":
                clean[key] = v if isinstance(v, RatFunc) else RatFunc(v)
            else:
                clean[key] = int(v) % prime_point.p
        self.mode = mode
        self.values = clean
        self.prime_point = prime_point

    def __getitem__(self, key):
        try:
            return self.values[tuple(key)]
        except KeyError:
            raise TableDomainError(f"point {tuple(key)} not in table domain") from None

    def __contains__(self, key):
        return tuple(key) in self.values

    def __len__(self):
        return len(self.values)

    def domain(self) -> list[tuple]:
        return sorted(self.values)

    def reduce(self, prime_point: PrimePoint):
        """Project an exact table to residues at a prime point."""
        if self.mode != "exact":
            raise ValueError("can only reduce an exact table")
        p, rq = prime_point.p, prime_point.q_image
        vals = {k: v.eval_mod(p, rq) for k, v in self.values.items()}
        return type(self)(vals, mode="mod", prime_point=prime_point)

    def to_json(self) -> dict:
        points = []
        for key in self.domain():
            v = self.values[key]
            entry = dict(zip(self._FIELDS, key))
            entry["value"] = v.to_json() if self.mode == "exact" else v
            points.append(entry)
        out = {"mode": self.mode, "points": points}
        if self.mode == "mod":
            out["prime"] = self.prime_point.p
            out["q"] = self.prime_point.q_image
        return out

    @classmethod
    def from_json(cls, data: dict):
        mode = data["mode"]
        pp = None
        if mode == "mod":
            pp = PrimePoint(data["prime"], {"q": data["q"]})
        vals = {}
        for entry in data["points"]:
            key = tuple(int(entry[f]) for f in cls._FIELDS)
            vals[key] = entry["value"] if mode == "mod" else RatFunc.from_json(entry["value"])
        return cls(vals, mode=mode, prime_point=pp)


class SequenceTable(_BaseTable):
    """Values on a finite window of (n, j) points."""

    _KEYLEN = 2
    _FIELDS = ("n", "j")


class SummandTable(_BaseTable):
    """Values on a finite window of (n, i, j) points (telescoping summands)."""

    _KEYLEN = 3
    _FIELDS = ("n", "i", "j")


# ---------------------------------------------------------------------------
# applying operators to tables
# ---------------------------------------------------------------------------


def _instantiate_exact(coeff: RatFunc, n: int, j: int) -> RatFunc:
    try:
        return coeff.instantiate(n=n, j=j)
    except BadEvaluationPointError as exc:
        raise SingularCoefficientError(f"coefficient denominator vanishes at (n={n}, j={j})") from exc


def _instantiate_mod(coeff: RatFunc, pp: PrimePoint, n: int, j: int) -> int:
    xn, xj = pp.powers(n, j)
    try:
        return coeff.eval_mod(pp.p, pp.q_image, xn, xj)
    except BadEvaluationPointError as exc:
        raise SingularCoefficientError(f"coefficient denominator vanishes at (n={n}, j={j}) mod {pp.p}") from exc


def apply(op: OreOperator, table: SequenceTable, at: tuple[int, int]):
    """Evaluate sum of coeff(q, q^n, q^j) * T(n+a, j+b) plus the
    inhomogeneous part at the base point.

    Exact tables give a RatFunc in q, modular tables a residue. Missing
    shifted points raise TableDomainError; vanishing coefficient
    denominators raise SingularCoefficientError.
    """
    n, j = at
    if table.mode == "exact":
        acc = FracSum()
        for (a, b), coeff in op.terms.items():
            v = table[(n + a, j + b)]
            c = _instantiate_exact(coeff, n, j)
            acc.add(c.num * v.num, c.den * v.den)
        if op.inhomogeneous is not None:
            acc.add_ratfunc(_instantiate_exact(op.inhomogeneous, n, j))
        return acc.value()
    pp = table.prime_point
    total = 0
    for (a, b), coeff in op.terms.items():
        v = table[(n + a, j + b)]
        total += _instantiate_mod(coeff, pp, n, j) * v
    if op.inhomogeneous is not None:
        total += _instantiate_mod(op.inhomogeneous, pp, n, j)
    return total % pp.p


def _value_is_zero(v) -> bool:
    return v.is_zero if isinstance(v, RatFunc) else v == 0


def admissible_points(op: OreOperator, table: SequenceTable) -> list[tuple[int, int]]:
    """Base points whose full shift stencil lies inside the table domain."""
    shifts = op.shifts() or [(0, 0)]
    out = []
    for (n, j) in table.domain():
        if all((n + a, j + b) in table for (a, b) in shifts):
            out.append((n, j))
    return out


def annihilates(op: OreOperator, table: SequenceTable, min_points: int = DEFAULT_MIN_POINTS) -> bool:
    """True iff the operator evaluates to zero at every admissible point.

    Points where a coefficient denominator vanishes are skipped as
    inadmissible; fewer than `min_points` admissible evaluations raise
    InsufficientPointsError (mirroring the nonvanishing caveat of the
    uniqueness argument at finite scale).
    """
    checked = 0
    for point in admissible_points(op, table):
        try:
            value = apply(op, table, point)
        except SingularCoefficientError:
            continue
        checked += 1
        if not _value_is_zero(value):
            return False
    if checked == 0:
        raise InsufficientPointsError("no admissible points in the table")
    if checked < min_points:
        raise InsufficientPointsError(
            f"only {checked} admissible points, need at least {min_points}"
        )
    return True


# ---------------------------------------------------------------------------
# diagonal substitution and skew division
# ---------------------------------------------------------------------------


def substitute_diagonal(op: OreOperator) -> OreOperator:
    """Turn a pure-diagonal operator (all shifts Sn^k Sj^k) into a
    univariate operator in Sn by substituting xj -> xn."""
    terms = {}
    for (a, b), coeff in op.terms.items():
        if a != b:
            raise NotDiagonalError(f"not diagonal-shaped: term Sn^{a} Sj^{b}")
        den = coeff.den.subst_xj_to_xn()
        if den.is_zero:
            raise SingularCoefficientError(
                f"coefficient denominator of Sn^{a} Sj^{b} vanishes under xj -> xn"
            )
        c = RatFunc(coeff.num.subst_xj_to_xn(), den)
        if not c.is_zero:
            prev = terms.get((a, 0), RatFunc.zero())
            terms[(a, 0)] = prev + c
    inhom = None
    if op.inhomogeneous is not None:
        den = op.inhomogeneous.den.subst_xj_to_xn()
        if den.is_zero:
            raise SingularCoefficientError("inhomogeneous denominator vanishes under xj -> xn")
        inhom = RatFunc(op.inhomogeneous.num.subst_xj_to_xn(), den)
    return OreOperator(terms, inhom)


def _require_univariate(op: OreOperator, role: str, allow_inhomogeneous: bool = False):
    for (a, b), coeff in op.terms.items():
        if b != 0:
            raise NotUnivariateError(f"{role} has a Sj^{b} shift; need univariate in Sn")
        if coeff.num.degree_in(2) > 0 or coeff.den.degree_in(2) > 0:
            raise NotUnivariateError(f"{role} coefficient involves xj; need coefficients in (q, xn)")
    if op.inhomogeneous is not None:
        if not allow_inhomogeneous:
            raise NotUnivariateError(f"{role} has an inhomogeneous part; homogenize first")
        h = op.inhomogeneous
        if h.num.degree_in(2) > 0 or h.den.degree_in(2) > 0:
            raise NotUnivariateError(f"{role} inhomogeneous part involves xj")


def right_divide(A: OreOperator, B: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Skew Euclidean division: A = Q*B + R with Sn-order(R) < Sn-order(B).

    Both operators must be univariate in Sn with coefficients in Q(q, xn)
    and no inhomogeneous part.
    """
    _require_univariate(A, "dividend")
    _require_univariate(B, "divisor")
    if B.is_zero:
        raise ZeroDivisionError("right division by the zero operator")
    ordB = B.sn_order
    lcB = B.coeff(ordB)
    Q_ = OreOperator.zero()
    R = A
    while not R.is_zero and R.sn_order >= ordB:
        d = R.sn_order - ordB
        t = R.coeff(R.sn_order) / lcB.sigma(d, 0)
        step = OreOperator({(d, 0): t})
        Q_ = Q_ + step
        R = R - step * B
    return Q_, R


def is_left_multiple(A: OreOperator, B: OreOperator) -> bool:
    """True iff A = Q*B exactly (zero remainder in skew right division)."""
    _, rem = right_divide(A, B)
    return rem.is_zero


def homogenize(op: OreOperator) -> OreOperator:
    """Replace L(y) + h = 0 by the homogeneous (Sn - 1) * (1/h) * L,
    which annihilates the same solutions (the scaled relation has constant
    value -1, killed by Sn - 1)."""
    if op.inhomogeneous is None:
        return op
    h = op.inhomogeneous
    base = OreOperator(op.terms).scale(h.inverse())
    return (OreOperator.sn() - 1) * base


# ---------------------------------------------------------------------------
# telescoping certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateTerm:
    dn: int
    di: int
    dj: int
    coeff: RatFunc


@dataclass(frozen=True)
class TelescopingCertificate:
    """An operator acting on (n, i) with no j-shifts, together with the
    certificate t(n,i,j) expressed as a linear combination of shifts of
    the summand table.

    Convention: operator shift pairs (a, b) act as (n+a, i+b); coefficient
    variables instantiate as xn -> q^n and xj -> q^j (i enters through
    shifts only, since the coefficient ring has three variables).
    """

    operator: OreOperator
    terms: tuple[CertificateTerm, ...]

    def to_json(self) -> dict:
        return {
            "operator": self.operator.to_json(),
            "certificate": [
                {"dn": t.dn, "di": t.di, "dj": t.dj, "coeff": t.coeff.to_json()} for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TelescopingCertificate":
        op = OreOperator.from_json(data["operator"])
        terms = tuple(
            CertificateTerm(int(t["dn"]), int(t["di"]), int(t["dj"]), RatFunc.from_json(t["coeff"]))
            for t in data["certificate"]
        )
        return cls(op, terms)


def _cert_value_exact(cert: TelescopingCertificate, F: SummandTable, n: int, i: int, j: int) -> FracSum:
    acc = FracSum()
    for t in cert.terms:
        v = F[(n + t.dn, i + t.di, j + t.dj)]
        c = _instantiate_exact(t.coeff, n, j)
        acc.add(c.num * v.num, c.den * v.den)
    return acc


def _op_value_exact(op: OreOperator, F: SummandTable, n: int, i: int, j: int) -> FracSum:
    acc = FracSum()
    for (a, b), coeff in op.terms.items():
        v = F[(n + a, i + b, j)]
        c = _instantiate_exact(coeff, n, j)
        acc.add(c.num * v.num, c.den * v.den)
    if op.inhomogeneous is not None:
        acc.add_ratfunc(_instantiate_exact(op.inhomogeneous, n, j))
    return acc


def _cert_value_mod(cert, F, pp, n, i, j) -> int:
    total = 0
    for t in cert.terms:
        v = F[(n + t.dn, i + t.di, j + t.dj)]
        total += _instantiate_mod(t.coeff, pp, n, j) * v
    return total % pp.p


def _op_value_mod(op, F, pp, n, i, j) -> int:
    total = 0
    for (a, b), coeff in op.terms.items():
        v = F[(n + a, i + b, j)]
        total += _instantiate_mod(coeff, pp, n, j) * v
    if op.inhomogeneous is not None:
        total += _instantiate_mod(op.inhomogeneous, pp, n, j)
    return total % pp.p


def telescoping_base_pairs(cert: TelescopingCertificate, F: SummandTable, window: tuple[int, int]):
    """(n, i) pairs whose full stencil over the window lies inside F."""
    j0, j1 = window
    pairs = sorted({(n, i) for (n, i, _) in F.domain()})
    out = []
    for (n, i) in pairs:
        ok = all(
            (n + a, i + b, j) in F
            for (a, b) in cert.operator.terms
            for j in range(j0, j1 + 1)
        ) and all(
            (n + t.dn, i + t.di, j + t.dj) in F
            for t in cert.terms
            for j in range(j0, j1 + 2)
        )
        if ok:
            out.append((n, i))
    return out


def verify_telescoping(
    cert: TelescopingCertificate,
    F: SummandTable,
    window: tuple[int, int],
) -> bool:
    """Check a telescoping certificate pointwise on the j-window.

    For every admissible base pair (n, i) and every j in [j0, j1] the
    operator applied to F in (n, i) must equal t(n,i,j+1) - t(n,i,j), and
    the telescoped sum over the window, t(n,i,j1+1) - t(n,i,j0), must
    vanish (the caller picks the window wide enough that the summand is
    zero outside it).
    """
    j0, j1 = window
    if j0 > j1:
        raise ValueError("empty telescoping window")
    pairs = telescoping_base_pairs(cert, F, window)
    if not pairs:
        raise InsufficientPointsError("no base pairs with full stencil in the summand table")
    if F.mode == "exact":
        for (n, i) in pairs:
            t_vals = {jj: _cert_value_exact(cert, F, n, i, jj) for jj in range(j0, j1 + 2)}
            for j in range(j0, j1 + 1):
                lhs = _op_value_exact(cert.operator, F, n, i, j)
                diff = FracSum()
                diff.add(t_vals[j + 1].num, t_vals[j + 1].den)
                diff.add(-t_vals[j].num, t_vals[j].den)
                if not lhs.equals(diff):
                    return False
            total = FracSum()
            total.add(t_vals[j1 + 1].num, t_vals[j1 + 1].den)
            total.add(-t_vals[j0].num, t_vals[j0].den)
            if not total.is_zero:
                return False
        return True
    pp = F.prime_point
    for (n, i) in pairs:
        t_vals = {jj: _cert_value_mod(cert, F, pp, n, i, jj) for jj in range(j0, j1 + 2)}
        for j in range(j0, j1 + 1):
            lhs = _op_value_mod(cert.operator, F, pp, n, i, j)
            if (t_vals[j + 1] - t_vals[j] - lhs) % pp.p:
                return False
        if (t_vals[j1 + 1] - t_vals[j0]) % pp.p:
            return False
    return True
