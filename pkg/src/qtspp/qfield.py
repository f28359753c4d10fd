"""Exact arithmetic core: sparse integer polynomials in (q, xn, xj),
canonical rational functions, prime-field evaluation points, and exact
linear algebra (fraction-free determinants and system solving).

All downstream modules store their scalars in the two types defined here:

* ``Poly`` -- sparse polynomial over arbitrary-precision integers in the
  three fixed variables ``q``, ``xn`` (standing for q**n) and ``xj``
  (standing for q**j).
* ``RatFunc`` -- quotient of two ``Poly`` values, always kept canonical:
  gcd(num, den) == 1 and the denominator's leading coefficient (under
  graded lex, q lowest) positive.

The heavy univariate work (Bareiss eliminations on Okada matrices, big
gcd cancellations) runs through dense integer kernels that pack
coefficient vectors into big integers (Kronecker substitution) so gmpy2
does the multiplying and dividing, plus a CRT/modular gcd with
numpy-vectorized Euclid.
"""

from __future__ import annotations

import math
import random
from typing import Iterable, Mapping, Sequence

import gmpy2
import numpy as np

VARS = ("q", "xn", "xj")
NVARS = 3
_VAR_INDEX = {name: i for i, name in enumerate(VARS)}

_ZERO_EXPS = (0, 0, 0)


class InexactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


class SingularMatrixError(ValueError):
    """Raised by solve_linear on a singular system; carries the rank found."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"singular system: rank {rank} < size {size}")
        self.rank = rank
        self.size = size


class BadEvaluationPointError(ValueError):
    """Raised when a denominator vanishes at an evaluation point."""


def _grlex_key(exps):
    # graded lexicographic, q < xn < xj: total degree first, then the
    # exponent vector read from the highest variable down
    return (exps[0] + exps[1] + exps[2], exps[2], exps[1], exps[0])


# ---------------------------------------------------------------------------
# dense univariate kernels (coefficient lists, index = exponent)
# ---------------------------------------------------------------------------

_SCHOOLBOOK_CUTOFF = 48 * 48


def _utrim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _umax_bits(c) -> int:
    m = 0
    for v in c:
        if v:
            b = v.bit_length() if v > 0 else (-v).bit_length()
            if b > m:
                m = b
    return m


def _upack(c, width: int):
    """Pack signed coefficients into one integer, base 2**width."""
    pos = [v if v > 0 else 0 for v in c]
    neg = [-v if v < 0 else 0 for v in c]
    val = gmpy2.pack(pos, width)
    if any(neg):
        val -= gmpy2.pack(neg, width)
    return val


def _uunpack(val, width: int, count: int) -> list:
    """Recover balanced signed digits; valid while |coeff| < 2**(width-1)."""
    sign = 1
    if val < 0:
        sign = -1
        val = -val
    digits = [int(d) for d in gmpy2.unpack(val, width)]
    digits.extend([0] * (count + 1 - len(digits)))
    half = 1 << (width - 1)
    base = 1 << width
    out = []
    carry = 0
    for d in digits:
        d += carry
        if d >= half:
            out.append(sign * (d - base))
            carry = 1
        else:
            out.append(sign * d)
            carry = 0
    if carry or any(out[count:]):
        raise OverflowError("kronecker unpack width too small")
    return _utrim(out[:count])


def _umul_school(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _utrim(out)


def _umul(a, b):
    if not a or not b:
        return []
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF:
        return _umul_school(a, b)
    width = _umax_bits(a) + _umax_bits(b) + min(len(a), len(b)).bit_length() + 2
    prod = gmpy2.mpz(_upack(a, width)) * _upack(b, width)
    return _uunpack(prod, width, len(a) + len(b) - 1)


def _uexact_div_school(a, b):
    """Exact division of dense coefficient lists; raises if not exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise InexactDivisionError("degree of dividend below divisor")
    r = list(a)
    lcb = b[-1]
    nq = len(a) - len(b) + 1
    q = [0] * nq
    for k in range(nq - 1, -1, -1):
        c = r[k + len(b) - 1]
        if c:
            qc, rem = divmod(c, lcb)
            if rem:
                raise InexactDivisionError("inexact coefficient division")
            q[k] = qc
            for j, bj in enumerate(b):
                if bj:
                    r[k + j] -= qc * bj
    if any(r):
        raise InexactDivisionError("nonzero remainder")
    return _utrim(q)


def _uexact_div(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF * 4:
        return _uexact_div_school(a, b)
    width = _umax_bits(a) + _umax_bits(b) + len(b).bit_length() + 8
    nq = len(a) - len(b) + 1
    if nq <= 0:
        raise InexactDivisionError("degree of dividend below divisor")
    for _ in range(3):
        av = gmpy2.mpz(_upack(a, width))
        bv = gmpy2.mpz(_upack(b, width))
        quot, rem = gmpy2.f_divmod(av, bv)
        if rem != 0:
            raise InexactDivisionError("nonzero remainder")
        try:
            q = _uunpack(quot, width, nq)
        except OverflowError:
            width *= 2
            continue
        # packed equality can be a width artefact; confirm on the polys
        if _umul(q, b) == _utrim(list(a)):
            return q
        width *= 2
    return _uexact_div_school(a, b)


def _ucontent(c) -> int:
    g = 0
    for v in c:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                return 1
    return g


def _upseudo_rem(a, b):
    """prem(a, b): remainder of lc(b)**(deg a - deg b + 1) * a by b."""
    da, db = len(a) - 1, len(b) - 1
    lcb = b[-1]
    r = list(a)
    e = da - db + 1
    while r and len(r) - 1 >= db:
        lcr = r[-1]
        shift = len(r) - 1 - db
        r = [v * lcb for v in r]
        for j, bj in enumerate(b):
            r[shift + j] -= lcr * bj
        _utrim(r)
        e -= 1
    if e > 0:
        m = lcb**e
        r = [v * m for v in r]
    return r


def _ugcd_prs(a, b):
    """Subresultant PRS gcd of primitive dense lists; returns primitive gcd."""
    if len(a) < len(b):
        a, b = b, a
    g, h = 1, 1
    while True:
        delta = len(a) - len(b)
        r = _upseudo_rem(a, b)
        if not r:
            gp = list(b)
            break
        if len(r) == 1:
            return [1]
        denom = g * h**delta
        a, b = b, [v // denom for v in r]
        g = a[-1]
        if delta > 0:
            h = g**delta // h ** (delta - 1)
    cg = _ucontent(gp)
    gp = [v // cg for v in gp]
    if gp[-1] < 0:
        gp = [-v for v in gp]
    return gp


def _umod_reduce(c, p):
    return _utrim([int(v % p) for v in c])


def _ugcd_mod_np(a, b, p):
    """Monic gcd of a, b modulo p (p < 2**30), numpy-vectorized Euclid."""
    fa = np.array(_umod_reduce(a, p), dtype=np.int64)
    fb = np.array(_umod_reduce(b, p), dtype=np.int64)
    if fa.size < fb.size:
        fa, fb = fb, fa
    while fb.size:
        db = fb.size - 1
        inv = pow(int(fb[-1]), -1, p)
        ra = fa.copy()
        for k in range(ra.size - 1, db - 1, -1):
            c = int(ra[k])
            if c:
                m = (c * inv) % p
                if db:
                    ra[k - db : k] = (ra[k - db : k] - m * fb[:-1]) % p
                ra[k] = 0
        ra = ra[: int(np.max(np.nonzero(ra)[0])) + 1] if np.any(ra) else ra[:0]
        fa, fb = fb, ra
    if not fa.size:
        return []
    inv = pow(int(fa[-1]), -1, p)
    return [(int(v) * inv) % p for v in fa]


_GCD_PRIME_BITS = 29
_GCD_PRS_CUTOFF = 33


def _gcd_primes():
    p = gmpy2.next_prime(1 << _GCD_PRIME_BITS)
    while True:
        yield int(p)
        p = gmpy2.next_prime(p)


def _udivides(d, a) -> bool:
    try:
        _uexact_div(a, d)
        return True
    except InexactDivisionError:
        return False


def _ugcd(a, b):
    """Gcd of dense integer coefficient lists, primitive, positive leading."""
    a = _utrim(list(a))
    b = _utrim(list(b))
    if not a:
        a, b = b, a
    if not b:
        if not a:
            raise ValueError("gcd undefined")
        c = _ucontent(a)
        out = [v // c for v in a]
        return [-v for v in out] if out[-1] < 0 else out
    ca, cb = _ucontent(a), _ucontent(b)
    gc = math.gcd(ca, cb)
    pa = [v // ca for v in a]
    pb = [v // cb for v in b]
    if len(pa) == 1 or len(pb) == 1:
        return [gc]
    if max(len(pa), len(pb)) <= _GCD_PRS_CUTOFF:
        gp = _ugcd_prs(pa, pb)
    else:
        gp = _ugcd_modular(pa, pb)
    return [v * gc for v in gp]


def _ugcd_modular(pa, pb):
    """Brown-style modular gcd of primitive inputs (CRT + trial division)."""
    gamma = math.gcd(pa[-1], pb[-1])
    best_deg = None
    crt_val: list | None = None
    crt_mod = 1
    last_lift = None
    tried = 0
    for p in _gcd_primes():
        if pa[-1] % p == 0 or pb[-1] % p == 0:
            continue
        tried += 1
        if tried > 40:
            break
        gp = _ugcd_mod_np(pa, pb, p)
        d = len(gp) - 1
        if d == 0:
            return [1]
        if best_deg is None or d < best_deg:
            best_deg = d
            crt_val, crt_mod, last_lift = None, 1, None
        elif d > best_deg:
            continue  # unlucky prime
        scaled = [(gamma * v) % p for v in gp]
        if crt_val is None:
            crt_val, crt_mod = scaled, p
        else:
            crt_val = _crt_combine(crt_val, crt_mod, scaled, p)
            crt_mod *= p
        lift = [_sym_lift(v, crt_mod) for v in crt_val]
        if lift == last_lift:
            cand = list(lift)
            cc = _ucontent(cand)
            if cc:
                cand = [v // cc for v in cand]
                if cand[-1] < 0:
                    cand = [-v for v in cand]
                if _udivides(cand, pa) and _udivides(cand, pb):
                    return cand
        last_lift = lift
    return _ugcd_prs(pa, pb)


def _crt_combine(old, old_mod, new, p):
    inv = pow(old_mod % p, -1, p)
    out = []
    for o, n in zip(old, new):
        t = ((n - o) * inv) % p
        out.append(o + old_mod * t)
    return out


def _sym_lift(v, m):
    v %= m
    return v - m if 2 * v > m else v


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


def _coerce_terms(terms) -> dict:
    out = {}
    for exps, coeff in terms.items():
        coeff = int(coeff)
        if not coeff:
            continue
        e = tuple(int(v) for v in exps)
        if len(e) != NVARS or any(v < 0 for v in e):
            raise ValueError(f"bad exponent vector {exps!r}")
        out[e] = coeff
    return out


class Poly:
    """Sparse polynomial over Z in the fixed variables (q, xn, xj)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = _coerce_terms(terms) if terms else {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def one(cls) -> "Poly":
        return cls({_ZERO_EXPS: 1})

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({_ZERO_EXPS: int(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        exps = [0, 0, 0]
        exps[_VAR_INDEX[name]] = 1
        return cls({tuple(exps): 1})

    @classmethod
    def monomial(cls, coeff: int, exps) -> "Poly":
        return cls({tuple(exps): coeff})

    @classmethod
    def q_power(cls, e: int) -> "Poly":
        if e < 0:
            raise ValueError("q_power needs a nonnegative exponent")
        return cls({(e, 0, 0): 1})

    @classmethod
    def from_q_coeffs(cls, coeffs: Sequence[int]) -> "Poly":
        return cls({(e, 0, 0): c for e, c in enumerate(coeffs) if c})

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXPS in self.terms)

    def const_value(self) -> int:
        if self.is_zero:
            return 0
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms[_ZERO_EXPS]

    def var_mask(self) -> int:
        mask = 0
        for exps in self.terms:
            for v in range(NVARS):
                if exps[v]:
                    mask |= 1 << v
        return mask

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(e[0] + e[1] + e[2] for e in self.terms)

    def degree_in(self, var: int) -> int:
        if self.is_zero:
            return -1
        return max(e[var] for e in self.terms)

    def lead_exps(self) -> tuple:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=_grlex_key)

    def lead_coeff(self) -> int:
        return self.terms[self.lead_exps()]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    def sign_normalized(self) -> "Poly":
        """Flip signs if needed so the grlex leading coefficient is positive."""
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        return -self if self.lead_coeff() < 0 else self

    def primitive_positive(self) -> "Poly":
        """Divide out the content; make the grlex leading coefficient positive."""
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        c = self.content()
        if self.lead_coeff() < 0:
            c = -c
        if c == 1:
            return self
        return Poly({e: v // c for e, v in self.terms.items()})

    def dense_in(self, var: int) -> list:
        """Dense coefficient list; requires the poly to involve only `var`."""
        out = [0] * (self.degree_in(var) + 1 if self.terms else 0)
        for exps, c in self.terms.items():
            out[exps[var]] = c
        return out

    @classmethod
    def from_dense(cls, coeffs: Sequence[int], var: int) -> "Poly":
        terms = {}
        for e, c in enumerate(coeffs):
            if c:
                exps = [0, 0, 0]
                exps[var] = e
                terms[tuple(exps)] = c
        return cls(terms)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Poly.zero()
            p = Poly.__new__(Poly)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly.zero()
        mask = self.var_mask() | other.var_mask()
        if mask & (mask - 1) == 0:
            var = 0 if mask == 0 else mask.bit_length() - 1
            return Poly.from_dense(_umul(self.dense_in(var), other.dense_in(var)), var)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power needs a nonnegative integer")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __truediv__(self, other):
        return RatFunc(self, other)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({} if other == 0 else {_ZERO_EXPS: other})
        if isinstance(other, Poly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- substitution and evaluation -----------------------------------

    def sigma(self, n_shift: int = 0, j_shift: int = 0) -> "Poly":
        """Twist xn -> q**n_shift * xn and xj -> q**j_shift * xj."""
        if n_shift < 0 or j_shift < 0:
            raise ValueError("sigma shifts must be nonnegative")
        if (n_shift == 0 and j_shift == 0) or self.is_zero:
            return self
        out = {}
        for (e0, e1, e2), c in self.terms.items():
            e = (e0 + n_shift * e1 + j_shift * e2, e1, e2)
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def subst_xj_to_xn(self) -> "Poly":
        out = {}
        for (e0, e1, e2), c in self.terms.items():
            e = (e0, e1 + e2, 0)
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def instantiate(self, n: int | None = None, j: int | None = None):
        """Substitute xn -> q**n and/or xj -> q**j (n, j may be negative).

        Returns (poly, shift) with the result equal to poly / q**shift.
        """
        shift = 0
        out = {}
        for (e0, e1, e2), c in self.terms.items():
            e = e0
            e1n, e2n = e1, e2
            if n is not None:
                e += n * e1
                e1n = 0
            if j is not None:
                e += j * e2
                e2n = 0
            key = (e, e1n, e2n)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                del out[key]
        if out:
            low = min(k[0] for k in out)
            if low < 0:
                shift = -low
                out = {(k[0] + shift, k[1], k[2]): v for k, v in out.items()}
        p = Poly.__new__(Poly)
        p.terms = out
        return p, shift

    def eval_int(self, q: int = 1, xn: int = 1, xj: int = 1) -> int:
        total = 0
        for (e0, e1, e2), c in self.terms.items():
            total += c * q**e0 * xn**e1 * xj**e2
        return total

    def eval_mod(self, p: int, q: int, xn: int = 0, xj: int = 0) -> int:
        total = 0
        for (e0, e1, e2), c in self.terms.items():
            t = c * pow(q, e0, p)
            if e1:
                t *= pow(xn, e1, p)
            if e2:
                t *= pow(xj, e2, p)
            total += t
        return total % p

    # -- display and serialization --------------------------------------

    def _term_str(self, exps, coeff) -> str:
        factors = []
        for v in range(NVARS):
            if exps[v] == 1:
                factors.append(VARS[v])
            elif exps[v] > 1:
                factors.append(f"{VARS[v]}^{exps[v]}")
        if not factors:
            return str(coeff)
        body = "*".join(factors)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        return f"{coeff}*{body}"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            s = self._term_str(exps, self.terms[exps])
            if parts:
                parts.append(f"- {s[1:]}" if s.startswith("-") else f"+ {s}")
            else:
                parts.append(s)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self) -> dict:
        terms = [
            {"coeff": str(self.terms[e]), "exps": list(e)}
            for e in sorted(self.terms, key=_grlex_key, reverse=True)
        ]
        return {"vars": list(VARS), "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "Poly":
        if list(data.get("vars", VARS)) != list(VARS):
            raise ValueError(f"unsupported variable set {data.get('vars')!r}")
        terms = {}
        for t in data["terms"]:
            exps = tuple(int(v) for v in t["exps"])
            terms[exps] = terms.get(exps, 0) + int(t["coeff"])
        return cls(terms)


Q = Poly.var("q")
XN = Poly.var("xn")
XJ = Poly.var("xj")
ONE = Poly.one()
ZERO = Poly.zero()


# ---------------------------------------------------------------------------
# exact division and gcd on Poly
# ---------------------------------------------------------------------------


def div_exact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b in Z[q, xn, xj]; raises InexactDivisionError."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return Poly.zero()
    mask = a.var_mask() | b.var_mask()
    if mask & (mask - 1) == 0:
        var = 0 if mask == 0 else mask.bit_length() - 1
        return Poly.from_dense(_uexact_div(a.dense_in(var), b.dense_in(var)), var)
    rem = dict(a.terms)
    quot = {}
    lb = max(b.terms, key=_grlex_key)
    lb_coeff = b.terms[lb]
    while rem:
        la = max(rem, key=_grlex_key)
        diff = (la[0] - lb[0], la[1] - lb[1], la[2] - lb[2])
        if any(d < 0 for d in diff):
            raise InexactDivisionError("leading monomial not divisible")
        qc, r = divmod(rem[la], lb_coeff)
        if r:
            raise InexactDivisionError("inexact coefficient division")
        quot[diff] = qc
        for eb, cb in b.terms.items():
            e = (diff[0] + eb[0], diff[1] + eb[1], diff[2] + eb[2])
            s = rem.get(e, 0) - qc * cb
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
    p = Poly.__new__(Poly)
    p.terms = quot
    return p


def _poly_as_top(a: Poly, var: int) -> dict:
    """View a Poly as univariate in `var` with Poly coefficients."""
    out: dict[int, dict] = {}
    for exps, c in a.terms.items():
        low = list(exps)
        deg = low[var]
        low[var] = 0
        out.setdefault(deg, {})[tuple(low)] = c
    return {k: Poly(v) for k, v in out.items()}


def _from_top(coeffs: dict, var: int) -> Poly:
    terms = {}
    for deg, poly in coeffs.items():
        for exps, c in poly.terms.items():
            e = list(exps)
            e[var] = deg
            terms[tuple(e)] = c
    return Poly(terms)


def _gcd_many(polys: Iterable[Poly]) -> Poly:
    g = Poly.zero()
    for p in polys:
        if p.is_zero:
            continue
        g = p.sign_normalized() if g.is_zero else poly_gcd(g, p)
        if g == 1:
            return g
    return g


_PROBE_PRIME = (1 << 31) - 1


def _top_degree_probe(A: dict, B: dict, top: int) -> int | None:
    """Upper bound on deg_top(gcd) from a random modular evaluation of the
    lower variables; None when no usable point was found.

    Sound in one direction only: if the projected univariate gcd has
    degree 0 then the primitive parts are coprime in the top variable.
    This short-circuits the pseudo-remainder cascade, whose coefficient
    growth is brutal exactly in the (generic) coprime case.
    """
    p = _PROBE_PRIME
    rng = random.Random(0xC0FFEE + top)
    da, db = max(A), max(B)
    for _ in range(4):
        vals = [rng.randrange(2, p) for _ in range(NVARS)]
        vals[top] = 1  # coefficients do not contain the top variable

        def project(C, deg):
            out = [0] * (deg + 1)
            for k, poly in C.items():
                out[k] = poly.eval_mod(p, vals[0], vals[1], vals[2])
            return out

        fa = project(A, da)
        fb = project(B, db)
        if fa[-1] == 0 or fb[-1] == 0:
            continue
        g = _ugcd_mod_np(fa, fb, p)
        return len(g) - 1
    return None


def _pprem_top(A: dict, B: dict) -> dict:
    """Pseudo-remainder of Poly-coefficient univariate representations."""
    dB = max(B)
    lcB = B[dB]
    R = dict(A)
    e = max(R) - dB + 1 if R else 0
    while R and max(R) >= dB:
        dR = max(R)
        lcR = R[dR]
        newR: dict[int, Poly] = {k: v * lcB for k, v in R.items()}
        for k, c in B.items():
            kk = k + dR - dB
            s = newR.get(kk, Poly.zero()) - lcR * c
            if s.is_zero:
                newR.pop(kk, None)
            else:
                newR[kk] = s
        R = newR
        e -= 1
    if e > 0:
        m = lcB**e
        R = {k: v * m for k, v in R.items()}
    return R


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Gcd in Z[q, xn, xj], normalized to positive grlex leading coefficient.

    Content/primitive-part recursion on the top variable; dense modular or
    subresultant PRS at the univariate base.
    """
    if a.is_zero and b.is_zero:
        raise ValueError("gcd undefined")
    if a.is_zero:
        return b.sign_normalized()
    if b.is_zero:
        return a.sign_normalized()
    mask = a.var_mask() | b.var_mask()
    if mask & (mask - 1) == 0:
        var = 0 if mask == 0 else mask.bit_length() - 1
        return Poly.from_dense(_ugcd(a.dense_in(var), b.dense_in(var)), var)
    top = mask.bit_length() - 1
    A = _poly_as_top(a, top)
    B = _poly_as_top(b, top)
    ca = _gcd_many(A.values())
    cb = _gcd_many(B.values())
    cont = poly_gcd(ca, cb)
    A = {k: div_exact(v, ca) for k, v in A.items()}
    B = {k: div_exact(v, cb) for k, v in B.items()}
    if _top_degree_probe(A, B, top) == 0:
        return cont
    if max(A) < max(B):
        A, B = B, A
    # primitive PRS in the top variable
    while True:
        R = _pprem_top(A, B)
        if not R:
            g = B
            break
        if max(R) == 0:
            return cont
        cr = _gcd_many(R.values())
        A, B = B, {k: div_exact(v, cr) for k, v in R.items()}
    gc = _gcd_many(g.values())
    g = {k: div_exact(v, gc) for k, v in g.items()}
    return (_from_top(g, top) * cont).sign_normalized()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    return div_exact(a * b, poly_gcd(a, b))


# ---------------------------------------------------------------------------
# RatFunc
# ---------------------------------------------------------------------------


def _as_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, int):
        return Poly.const(v)
    raise TypeError(f"cannot interpret {v!r} as a polynomial")


class RatFunc:
    """Canonical quotient num/den of integer polynomials.

    Invariants: den != 0, gcd(num, den) = 1 (up to integer content), and
    den's grlex leading coefficient is positive. Equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = Poly.one() if den is None else _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num, self.den = Poly.zero(), Poly.one()
            return
        g = poly_gcd(num, den)
        if not (g == 1):
            num = div_exact(num, g)
            den = div_exact(den, g)
        cn, cd = num.content(), den.content()
        c = math.gcd(cn, cd)
        if den.lead_coeff() < 0:
            c = -c
        if c != 1:
            num = Poly({e: v // c for e, v in num.terms.items()})
            den = Poly({e: v // c for e, v in den.terms.items()})
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        """Wrap an already-canonical pair without re-canonicalizing."""
        rf = cls.__new__(cls)
        rf.num, rf.den = num, den
        return rf

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls._raw(Poly.zero(), Poly.one())

    @classmethod
    def one(cls) -> "RatFunc":
        return cls._raw(Poly.one(), Poly.one())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_poly(self) -> bool:
        return self.den == 1

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def __add__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce_ratfunc(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __eq__(self, other):
        other = _coerce_ratfunc(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero

    def sigma(self, n_shift: int = 0, j_shift: int = 0) -> "RatFunc":
        # the twist is not surjective, so images can pick up common factors
        # (e.g. xn/q under xn -> q*xn); re-canonicalize
        return RatFunc(self.num.sigma(n_shift, j_shift), self.den.sigma(n_shift, j_shift))

    def subst_xj_to_xn(self) -> "RatFunc":
        den = self.den.subst_xj_to_xn()
        if den.is_zero:
            raise BadEvaluationPointError("denominator vanishes under xj -> xn")
        return RatFunc(self.num.subst_xj_to_xn(), den)

    def instantiate(self, n: int | None = None, j: int | None = None) -> "RatFunc":
        """Substitute xn -> q**n and/or xj -> q**j exactly."""
        num, sn = self.num.instantiate(n, j)
        den, sd = self.den.instantiate(n, j)
        if den.is_zero:
            raise BadEvaluationPointError(f"denominator vanishes at n={n}, j={j}")
        if sn > sd:
            den = den * Poly.q_power(sn - sd)
        elif sd > sn:
            num = num * Poly.q_power(sd - sn)
        return RatFunc(num, den)

    def eval_mod(self, p: int, q: int, xn: int = 0, xj: int = 0) -> int:
        dv = self.den.eval_mod(p, q, xn, xj)
        if dv == 0:
            raise BadEvaluationPointError("bad evaluation point: denominator vanishes")
        nv = self.num.eval_mod(p, q, xn, xj)
        return (nv * pow(dv, -1, p)) % p

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))


def _coerce_ratfunc(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, Poly):
        return RatFunc._raw(v, Poly.one())
    if isinstance(v, int):
        return RatFunc._raw(Poly.const(v), Poly.one())
    return NotImplemented


RF_ZERO = RatFunc.zero()
RF_ONE = RatFunc.one()


class FracSum:
    """Lazy sum of fractions: accumulates without gcd cancellation.

    Zero tests and cross-multiplied comparisons never need a gcd; call
    ``value()`` for the canonical RatFunc at the end.
    """

    __slots__ = ("num", "den")

    def __init__(self):
        self.num = Poly.zero()
        self.den = Poly.one()

    def add(self, num: Poly, den: Poly) -> "FracSum":
        if den.is_zero:
            raise ZeroDivisionError("fraction with zero denominator")
        if num.is_zero:
            return self
        if self.den == den:
            self.num = self.num + num
        else:
            self.num = self.num * den + num * self.den
            self.den = self.den * den
        return self

    def add_ratfunc(self, rf: RatFunc) -> "FracSum":
        return self.add(rf.num, rf.den)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def equals(self, other: "RatFunc | FracSum") -> bool:
        return self.num * other.den == other.num * self.den

    def value(self) -> RatFunc:
        return RatFunc(self.num, self.den)


# ---------------------------------------------------------------------------
# prime-field evaluation points
# ---------------------------------------------------------------------------

DEFAULT_UNITY_GUARD = 64
DEFAULT_PRIME_BITS = 62


class PrimePoint:
    """A prime p with residues for (q, xn, xj).

    The image of q is checked to be nonzero and not a k-th root of unity
    for k up to `unity_guard`, so q-bracket factors (1 - q**k) cannot
    vanish accidentally during modular work.
    """

    __slots__ = ("p", "assignments", "unity_guard")

    def __init__(self, p: int, assignments: Mapping[str, int], unity_guard: int = DEFAULT_UNITY_GUARD):
        if not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = int(p)
        rq = int(assignments["q"]) % p
        rn = int(assignments.get("xn", 1)) % p
        rj = int(assignments.get("xj", 1)) % p
        for name, r in (("q", rq), ("xn", rn), ("xj", rj)):
            if not 0 <= r < p:
                raise ValueError(f"residue for {name} out of range")
        if rq == 0:
            raise ValueError("image of q must be nonzero")
        acc = 1
        for k in range(1, unity_guard + 1):
            acc = (acc * rq) % p
            if acc == 1:
                raise ValueError(f"image of q is a {k}-th root of unity mod {p}")
        self.assignments = {"q": rq, "xn": rn, "xj": rj}
        self.unity_guard = unity_guard

    @classmethod
    def random(
        cls,
        rng: random.Random,
        bits: int = DEFAULT_PRIME_BITS,
        unity_guard: int = DEFAULT_UNITY_GUARD,
        p: int | None = None,
    ) -> "PrimePoint":
        if p is None:
            p = int(gmpy2.next_prime(rng.randrange(1 << (bits - 1), 1 << bits)))
        while True:
            rq = rng.randrange(2, p)
            try:
                return cls(p, {"q": rq, "xn": rng.randrange(1, p), "xj": rng.randrange(1, p)}, unity_guard)
            except ValueError:
                continue

    @property
    def q_image(self) -> int:
        return self.assignments["q"]

    def powers(self, n: int, j: int) -> tuple[int, int]:
        r = self.q_image
        return pow(r, n, self.p), pow(r, j, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, PrimePoint)
            and self.p == other.p
            and self.assignments == other.assignments
        )

    def __repr__(self):
        return f"PrimePoint(p={self.p}, q={self.q_image})"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q_image, "xn": self.assignments["xn"], "xj": self.assignments["xj"]}

    @classmethod
    def from_json(cls, data: dict) -> "PrimePoint":
        return cls(data["p"], {"q": data["q"], "xn": data.get("xn", 1), "xj": data.get("xj", 1)})


def eval_at(f: Poly | RatFunc, pt: PrimePoint) -> int:
    """Homomorphic image of f at the prime point (q, xn, xj residues)."""
    a = pt.assignments
    if isinstance(f, Poly):
        return f.eval_mod(pt.p, a["q"], a["xn"], a["xj"])
    if isinstance(f, RatFunc):
        return f.eval_mod(pt.p, a["q"], a["xn"], a["xj"])
    raise TypeError(f"cannot evaluate {f!r}")


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def det_fraction_free(M: Sequence[Sequence]) -> Poly:
    """Determinant of a square Poly matrix by Bareiss elimination.

    All interior divisions are exact (asserted); intermediate entries stay
    polynomial.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n == 0:
        return Poly.one()
    A = [[_as_poly(v) for v in row] for row in M]
    sign = 1
    prev = Poly.one()
    for k in range(n - 1):
        if A[k][k].is_zero:
            for i in range(k + 1, n):
                if not A[i][k].is_zero:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Poly.zero()
        pivot = A[k][k]
        for i in range(k + 1, n):
            row_i = A[i]
            row_k = A[k]
            aik = row_i[k]
            for j in range(k + 1, n):
                num = pivot * row_i[j] - aik * row_k[j]
                row_i[j] = div_exact(num, prev)
            row_i[k] = Poly.zero()
        prev = pivot
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def _bareiss_jordan(A: list[list[Poly]], width: int):
    """Fraction-free Gauss-Jordan on an augmented Poly matrix, in place.

    Returns the final pivot (det of the left block up to sign bookkeeping
    applied to the augmented columns). On exit the left block is pivot * I.
    Raises SingularMatrixError if the left block is singular.
    """
    n = len(A)
    prev = Poly.one()
    for k in range(n):
        if A[k][k].is_zero:
            for i in range(k + 1, n):
                if not A[i][k].is_zero:
                    A[k], A[i] = A[i], A[k]
                    # swapping rows of the augmented system leaves solutions
                    # unchanged; only the determinant's sign would flip, and
                    # the shared scale cancels in every solution component
                    break
            else:
                raise SingularMatrixError(rank=k, size=n)
        pivot = A[k][k]
        for i in range(n):
            if i == k:
                continue
            row_i = A[i]
            row_k = A[k]
            aik = row_i[k]
            for j in range(width):
                if j == k:
                    continue
                num = pivot * row_i[j] - aik * row_k[j]
                row_i[j] = div_exact(num, prev)
            row_i[k] = Poly.zero()
        prev = pivot
    return prev


def solve_linear(M: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve M x = rhs exactly over a field.

    Entries that are Poly / RatFunc / int run through a fraction-free
    elimination (denominators cleared per row, Bareiss-style Gauss-Jordan),
    and the result is returned as canonical RatFunc values. Any other
    field-like elements (supporting +,-,*,/ and truthiness) go through
    generic elimination. In both lanes the solution is verified by
    substitution before returning; a rank-deficient system raises
    SingularMatrixError carrying the rank found.
    """
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise ValueError("need a square matrix and matching right-hand side")
    if n == 0:
        return []
    flat = [v for row in M for v in row] + list(rhs)
    if all(isinstance(v, (int, Poly, RatFunc)) for v in flat):
        return _solve_linear_ratfunc(M, rhs)
    return _solve_linear_generic(M, rhs)


def _solve_linear_ratfunc(M, rhs) -> list[RatFunc]:
    nums, den, _, _ = solve_linear_fraction(M, rhs)
    return [RatFunc(nv, den) for nv in nums]


def solve_linear_fraction(M, rhs):
    """Exact solve returning (numerators, common_denominator, P, R).

    The solution is x_j = numerators[j] / common_denominator; P and R are
    the denominator-cleared polynomial matrix and right-hand side that were
    actually eliminated (useful for re-verification by callers).
    """
    n = len(M)
    P: list[list[Poly]] = []
    R: list[Poly] = []
    for i in range(n):
        row = [_coerce_ratfunc(v) for v in M[i]]
        rv = _coerce_ratfunc(rhs[i])
        scale = rv.den
        for v in row:
            scale = scale * v.den
        prow = []
        for v in row:
            prow.append(v.num * div_exact(scale, v.den))
        P.append(prow)
        R.append(rv.num * div_exact(scale, rv.den))
    A = [P[i][:] + [R[i]] for i in range(n)]
    det = _bareiss_jordan(A, n + 1)
    nums = [A[i][n] for i in range(n)]
    # substitution check on the cleared system: sum_k P[i][k]*x_k == R[i]
    for i in range(n):
        acc = Poly.zero()
        for k in range(n):
            if not P[i][k].is_zero and not nums[k].is_zero:
                acc = acc + P[i][k] * nums[k]
        if acc != R[i] * det:
            raise ArithmeticError("solve_linear substitution check failed")
    return nums, det, P, R


def _solve_linear_generic(M, rhs) -> list:
    n = len(M)
    A = [list(M[i]) + [rhs[i]] for i in range(n)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if A[i][k]:
                piv = i
                break
        if piv is None:
            raise SingularMatrixError(rank=k, size=n)
        A[k], A[piv] = A[piv], A[k]
        pk = A[k][k]
        for i in range(k + 1, n):
            if A[i][k]:
                factor = A[i][k] / pk
                for j in range(k, n + 1):
                    A[i][j] = A[i][j] - factor * A[k][j]
    xs = [None] * n
    for k in range(n - 1, -1, -1):
        acc = A[k][n]
        for j in range(k + 1, n):
            acc = acc - A[k][j] * xs[j]
        xs[k] = acc / A[k][k]
    for i in range(n):
        acc = M[i][0] * xs[0]
        for j in range(1, n):
            acc = acc + M[i][j] * xs[j]
        if acc != rhs[i]:
            raise ArithmeticError("solve_linear substitution check failed")
    return xs


# ---------------------------------------------------------------------------
# prime-field linear algebra (dense, machine integers)
# ---------------------------------------------------------------------------

_NP_PRIME_LIMIT = 1 << 30


def _rref_mod_p(rows: list[list[int]], p: int):
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    if p < _NP_PRIME_LIMIT and rows:
        return _rref_mod_np(rows, p)
    A = [[v % p for v in row] for row in rows]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(v * inv) % p for v in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                m = A[i][c]
                A[i] = [(vi - m * vr) % p for vi, vr in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A[:r], pivots


def _rref_mod_np(rows, p):
    A = np.array([[v % p for v in row] for row in rows], dtype=np.int64)
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = (A[i] - int(A[i, c]) * A[r]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [[int(v) for v in row] for row in A[:r]], pivots


def nullspace_mod_p(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Canonical basis of the right nullspace of the row matrix, mod p.

    Returns (basis, pivot_columns). The basis comes from the reduced
    echelon form with free variables set to 1 one at a time, so identical
    inputs give identical bases.
    """
    if not rows:
        return [[1 if i == k else 0 for i in range(ncols)] for k in range(ncols)], []
    R, pivots = _rref_mod_p(rows, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r][f]) % p
        basis.append(v)
    return basis, pivots


def in_row_span_mod_p(vec: list[int], rows: list[list[int]], p: int) -> bool:
    """True iff vec lies in the row span of `rows` over GF(p)."""
    if not rows:
        return all(v % p == 0 for v in vec)
    R, pivots = _rref_mod_p(rows, p)
    v = [x % p for x in vec]
    for r, c in enumerate(pivots):
        if v[c]:
            m = v[c]
            v = [(x - m * y) % p for x, y in zip(v, R[r])]
    return not any(v)


def solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int]:
    """Solve a square system mod p; raises SingularMatrixError if singular."""
    n = len(rows)
    aug = [list(rows[i]) + [rhs[i] % p] for i in range(n)]
    R, pivots = _rref_mod_p(aug, p)
    if pivots and pivots[-1] == n:
        raise SingularMatrixError(rank=len(pivots) - 1, size=n)
    if len(pivots) < n:
        raise SingularMatrixError(rank=len(pivots), size=n)
    xs = [0] * n
    for r, c in enumerate(pivots):
        xs[c] = R[r][n]
    return xs
