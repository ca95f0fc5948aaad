"""Splitting algebras and Kronecker integrality certificates.

The coefficient a_k of a monic factor g (degree m) of a monic f (degree n) is
(-1)^k e_k of m of the roots of f.  Running over all m-subsets of the roots
gives an orbit of C(n, m) values whose characteristic polynomial is symmetric
in the roots, hence a polynomial in the coefficients of f.  The orbit
characteristic polynomials are computed once per (n, m, k) from power sums and
Newton's identities and then specialized.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from .errors import (
    MissingWeightedForm,
    NotMonic,
    NotNormalWitnessFailure,
    NotSymmetric,
    OrbitTooLarge,
    PreconditionViolated,
    RelationInvalid,
)
from .grobner import MPoly
from .poly import BiPolynomial, Polynomial, QuotientAlg, linear_factor_divide, monic_divmod
from .rings import Elem, IntegralRelation, Ring, normality_witness

DEFAULT_MAX_ORBIT = 20


# ---------------------------------------------------------------------------
# splitting towers


class SplittingTower:
    """Triangular tower T_1 = R[x1]/(f), T_{i+1} = T_i[x_{i+1}]/(f_i/(X - x_i))."""

    def __init__(self, f: Polynomial):
        if not f.is_monic():
            raise NotMonic("splitting_tower needs a monic polynomial")
        self.f = f
        self.base = f.ring
        self.n = f.degree
        self.stages = []
        self.rings = []
        ring, g = self.base, f
        for i in range(self.n):
            self.stages.append(g)
            S = QuotientAlg(ring, g, root_name=f"x{i + 1}")
            self.rings.append(S)
            if i + 1 < self.n:
                gS = g.map(S, S.embed)
                g = monic_divmod(gS, Polynomial.x(S) - S.root(), exact=True)[0]
            ring = S
        self.top = self.rings[-1] if self.rings else self.base
        self.roots = [self.embed(self.rings[i].var(f"x{i + 1}"), i) for i in range(self.n)]

    @property
    def rank(self) -> int:
        return math.factorial(self.n)

    def embed(self, payload, level: int):
        """Move a payload of ring `level` (-1 for the base) to the top ring."""
        for j in range(level + 1, self.n):
            payload = self.rings[j].embed(payload)
        return payload

    def root(self, i: int) -> Elem:
        return Elem(self.top, self.roots[i])

    def const(self, x: Elem) -> Elem:
        return Elem(self.top, self.embed(self.base(x).v, -1))

    def normal_form(self, expr) -> Elem:
        """Evaluate an MPoly in x1..xn (or an element) inside the tower."""
        if isinstance(expr, Elem):
            return self.const(expr)
        T = self.top
        return Elem(
            T,
            expr.substitute(self.roots, T.one, T.mul, T.add, T.from_fraction),
        )

    def is_constant(self, x: Elem):
        """Base element if `x` lies in the base ring, else None."""
        v = x.v
        for j in range(self.n - 1, -1, -1):
            if len(v) > 1:
                return None
            v = v[0] if v else self.rings[j].base.zero
        return Elem(self.base, v)

    def product_identity(self) -> bool:
        T = self.top
        X = Polynomial.x(T)
        prod = Polynomial.const(T, 1)
        for i in range(self.n):
            prod = prod * (X - self.root(i))
        return prod == self.f.map(T, lambda c: self.embed(c, -1))


def splitting_tower(f: Polynomial) -> SplittingTower:
    return SplittingTower(f)


def tower_normal_form(tower: SplittingTower, expr) -> Elem:
    return tower.normal_form(expr)


# ---------------------------------------------------------------------------
# symmetric functions


def elementary(n: int, k: int) -> MPoly:
    terms = {}
    for S in itertools.combinations(range(n), k):
        e = [0] * n
        for i in S:
            e[i] = 1
        terms[tuple(e)] = 1
    return MPoly(n, terms)


def is_symmetric(s: MPoly) -> bool:
    n = s.nvars
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if s.permute(perm) != s:
            return False
    return True


def symmetrize(s: MPoly) -> MPoly:
    """Write a symmetric polynomial in x1..xn as a polynomial in e1..en."""
    n = s.nvars
    if not is_symmetric(s):
        raise NotSymmetric("polynomial is not invariant under transpositions")
    es = [elementary(n, k) for k in range(1, n + 1)]
    out = {}
    cur = s
    while cur:
        lead = max(cur.terms)  # lex-largest exponent, which is weakly decreasing
        c = cur.terms[lead]
        d = [lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n)]
        out[tuple(d)] = out.get(tuple(d), 0) + c
        term = MPoly.const(n, c)
        for k, dk in enumerate(d):
            if dk:
                term = term * es[k] ** dk
        cur = cur - term
    return MPoly(n, out)


# ---------------------------------------------------------------------------
# universal orbit polynomials


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


@lru_cache(maxsize=None)
def _partition_expansion(lam):
    """Power-sum expansion of the augmented monomial symmetric function of `lam`."""
    coll = defaultdict(int)
    for sp in _set_partitions(list(range(len(lam)))):
        mu = 1
        for block in sp:
            mu *= (-1) ** (len(block) - 1) * math.factorial(len(block) - 1)
        nu = tuple(sorted(sum(lam[t] for t in block) for block in sp))
        coll[nu] += mu
    return dict(coll)


@lru_cache(maxsize=None)
def orbit_polynomials(n: int, m: int, k: int, max_orbit: int = DEFAULT_MAX_ORBIT):
    """Coefficients p_1..p_L (L = C(n, m)) of the monic relation satisfied by a_k.

    Returned as dicts {exponent tuple over b_1..b_n: int}, where
    f = X^n + b_1 X^(n-1) + ... + b_n and a_k is the X^(m-k) coefficient of a
    monic degree-m factor.
    """
    L = math.comb(n, m)
    if L > max_orbit:
        raise OrbitTooLarge(f"orbit of size C({n},{m}) = {L} exceeds the bound {max_orbit}")
    ctx = flint.fmpq_mpoly_ctx.get(tuple(f"e{i}" for i in range(1, n + 1)), "lex")
    e = ctx.gens()
    zero = ctx.from_dict({})
    R = L * k
    # power sums of the roots in terms of elementary symmetric functions
    P = [None] * (R + 1)
    for r in range(1, R + 1):
        acc = (-1) ** (r - 1) * r * e[r - 1] if r <= n else zero
        for i in range(1, min(r - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i - 1] * P[r - i]
        P[r] = acc
    prods = {}

    def pprod(nu):
        v = prods.get(nu)
        if v is None:
            v = P[nu[0]] if len(nu) == 1 else pprod(nu[:-1]) * P[nu[-1]]
            prods[nu] = v
        return v

    yctx = flint.fmpz_mpoly_ctx.get(tuple(f"y{i}" for i in range(m)), "lex")
    ys = yctx.gens()
    ek = yctx.from_dict({})
    for c in itertools.combinations(ys, k):
        ek += math.prod(c)
    power_sums = [None]
    pw = yctx.from_dict({(0,) * m: 1})
    for j in range(1, L + 1):
        pw = pw * ek
        coll = defaultdict(Fraction)
        for exps, c in pw.to_dict().items():
            exps = [int(x) for x in exps]
            if exps != sorted(exps, reverse=True):
                continue
            lam = tuple(x for x in exps if x)
            ell = len(lam)
            mult = math.prod(math.factorial(v) for v in Counter(lam).values())
            w = Fraction(int(c) * math.comb(n - ell, m - ell), mult)
            for nu, mu in _partition_expansion(lam).items():
                coll[nu] += w * mu
        q = zero
        for nu, c in coll.items():
            if c:
                q += flint.fmpq(c.numerator, c.denominator) * pprod(nu)
        power_sums.append(q * (-1) ** (k * j))
    coeffs = [ctx.from_dict({(0,) * n: 1})]
    for i in range(1, L + 1):
        acc = zero
        for j in range(1, i + 1):
            acc += coeffs[i - j] * power_sums[j]
        coeffs.append(-acc / i)
    out = []
    for c in coeffs[1:]:
        d = {}
        for exps, v in c.to_dict().items():
            exps = tuple(int(x) for x in exps)
            v = Fraction(int(v.p), int(v.q))
            if v.denominator != 1:
                raise AssertionError("orbit polynomial with non-integral coefficient")
            sign = (-1) ** sum(j * x for j, x in enumerate(exps, start=1))
            d[exps] = int(v) * sign  # e_j = (-1)^j b_j
        out.append(d)
    return tuple(out)


def eval_dict(ring: Ring, poly: dict, values) -> Elem:
    """Evaluate {exps: int} at ring elements."""
    acc = ring.zero
    cache = {}
    for exps, c in poly.items():
        t = ring.from_fraction(Fraction(c))
        for i, x in enumerate(exps):
            if x:
                key = (i, x)
                if key not in cache:
                    cache[key] = ring.pow(values[i].v, x)
                t = ring.mul(t, cache[key])
        acc = ring.add(acc, t)
    return Elem(ring, acc)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class WeightedForm:
    """p_i as polynomials in named variables with weights, plus their values."""

    names: list
    weights: list
    values: list
    polys: list
    subject_weight: int = 1


@dataclass
class IntegralCert:
    """subject^l + u_1*a*subject^(l-1) + ... + u_l*a^l = 0."""

    subject: Elem
    modulus: Elem
    coefficients: list
    weighted: WeightedForm | None = None

    @property
    def l(self) -> int:
        return len(self.coefficients)

    def relation(self) -> IntegralRelation | None:
        if not self.coefficients:
            return None
        return IntegralRelation(self.l, self.coefficients)

    def relation_holds(self) -> bool:
        rel = self.relation()
        return True if rel is None else rel.holds(self.subject, self.modulus)

    def values_match(self) -> bool:
        if self.weighted is None:
            return True
        ring = self.subject.ring
        return all(
            eval_dict(ring, p, self.weighted.values) == u
            for p, u in zip(self.weighted.polys, self.coefficients)
        )


def weighted_homogeneity_check(cert: IntegralCert) -> bool:
    """Every monomial of p_i has weighted degree i times the subject's weight."""
    wf = cert.weighted
    if wf is None:
        raise MissingWeightedForm("certificate carries no weighted form")
    for i, p in enumerate(wf.polys, start=1):
        for exps in p:
            if sum(w * e for w, e in zip(wf.weights, exps)) != i * wf.subject_weight:
                return False
    return True


def kronecker_cert(g: Polynomial, f: Polynomial, h: Polynomial | None = None, max_orbit: int = DEFAULT_MAX_ORBIT) -> list:
    """One integrality certificate per non-leading coefficient of g | f."""
    if not (g.is_monic() and f.is_monic()):
        raise NotMonic("kronecker_cert needs monic g and f")
    R = f.ring
    if h is None:
        h = monic_divmod(f, g, exact=True)[0]
    if g * h != f:
        raise PreconditionViolated("f != g*h")
    n, m = f.degree, g.degree
    b = [f[n - j] for j in range(1, n + 1)]
    certs = []
    for k in range(1, m + 1):
        polys = orbit_polynomials(n, m, k, max_orbit)
        us = [eval_dict(R, p, b) for p in polys]
        wf = WeightedForm([f"b{j}" for j in range(1, n + 1)], list(range(1, n + 1)), b, list(polys), k)
        cert = IntegralCert(g[m - k], R(1), us, wf)
        if not cert.relation_holds():
            raise AssertionError("orbit relation failed to vanish")
        certs.append(cert)
    return certs


def corollary_certificates(H: Polynomial, c: Elem, cofactors, max_orbit: int = DEFAULT_MAX_ORBIT) -> list:
    """Relations h^L + sum u_i c^i h^(L-i) = 0 for every coefficient h of H.

    M(Y) = Y^n + sum A_j c^j Y^(n-j) has the root H.  Substituting Y = X^N
    turns M(Y) = (Y - H) S into a factorization of monic polynomials in X; the
    universal relation for the coefficients of X^N - H, graded by powers of c,
    keeps exactly the monomials of Y-weight i in the c^i part.
    """
    R = H.ring
    A = list(cofactors)
    n = len(A)
    ycoeffs = [None] * (n + 1)
    ycoeffs[n] = Polynomial.const(R, 1)
    for i, a in enumerate(A, start=1):
        ycoeffs[n - i] = a * c ** i
    M = BiPolynomial(R, ycoeffs)
    S = linear_factor_divide(M, H)
    dH = H.degree
    dS = max((s.degree for s in S.ycoeffs), default=0)
    N = max(dH, 0) + max(dS, 0) + 1
    total = n * N
    positions = []
    for t in range(1, total + 1):
        d = total - t
        j = n - d // N
        positions.append((j, d % N))
    betas = [A[j - 1][r] for j, r in positions]
    weights = [j for j, _ in positions]
    certs = []
    for r in range(dH + 1):
        k = N - r
        universal = orbit_polynomials(total, N, k, max_orbit)
        graded = []
        for i, p in enumerate(universal, start=1):
            keep = {}
            for exps, v in p.items():
                if sum(w * e for w, e in zip(weights, exps)) == i:
                    keep[exps] = v * (-1) ** i
            graded.append(keep)
        us = [eval_dict(R, p, betas) for p in graded]
        wf = WeightedForm([f"beta{t}" for t in range(1, total + 1)], weights, betas, graded, 1)
        cert = IntegralCert(H[r], c, us, wf)
        if not cert.relation_holds():
            raise AssertionError("graded relation failed to vanish")
        certs.append(cert)
    return certs


def ideal_integral_divide(H: Polynomial, c: Elem, M: BiPolynomial, cofactors=None, certify: bool = False) -> Polynomial:
    """H1 with H = c*H1, given M(H) = 0 for M monic with c^j | j-th coefficient."""
    R = H.ring
    c = R(c) if not isinstance(c, Elem) else c
    if not M.is_monic():
        raise NotMonic("M must be monic in Y")
    if not M.eval_y(H).is_zero():
        raise PreconditionViolated("M(H) != 0")
    if certify:
        if cofactors is None:
            raise PreconditionViolated("certificate mode needs the cofactors A_j")
        out = []
        for cert in corollary_certificates(H, c, cofactors):
            if cert.l == 0 or cert.subject.is_zero():
                out.append(R.zero)
                continue
            out.append(normality_witness(cert.subject, c, cert.relation()).v)
        H1 = Polynomial.raw(R, out)
    else:
        out = []
        for h in H.coeffs:
            q = R.divide_exact(h, c.v)
            if q is None:
                raise NotNormalWitnessFailure(f"coefficient {R.fmt(h)} is not divisible by {c}")
            out.append(q)
        H1 = Polynomial.raw(R, out)
    if not (H - H1 * c).is_zero():
        raise NotNormalWitnessFailure("H != c*H1 after division")
    return H1
