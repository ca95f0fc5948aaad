"""S = R[X]/<f>, its localization R{f} = S[1/f'(x)], traces and Tate's formula.

The normality of R{f} is shown constructively: for p integral over <q> in S
we produce w, N, D with f'(x)^N * d^D * p = q * w in S, d being the product
of any extra denominators carried through the recursion over factors of f.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (
    NotMonic,
    NotNormalWitnessFailure,
    OrbitTooLarge,
    PreconditionViolated,
    RelationInvalid,
    ResourceLimit,
)
from .kronecker import SplittingTower, eval_dict, orbit_polynomials
from .poly import Polynomial, QuotientAlg, monic_divmod
from . import _dense as D
from .rings import LEFT, Cap, Elem, Integers, IntegralRelation, Rationals, Ring, normality_witness
from .tree import NodeRing, gcd_tree


def _S_of(v: Elem) -> QuotientAlg:
    S = v.ring
    if not isinstance(S, QuotientAlg):
        raise PreconditionViolated("expected an element of R[X]/<f>")
    return S


def fprime(S: QuotientAlg) -> Elem:
    return S.of(S.f.derivative())


# ---------------------------------------------------------------------------
# traces


def trace_matrix(v: Elem) -> Elem:
    """Trace of multiplication by v on the basis 1, x, ..., x^(n-1)."""
    S = _S_of(v)
    R = S.base
    x = S.root()
    total = R(0)
    b = v
    for j in range(S.n):
        total = total + S.coordinates(b)[j]
        b = b * x
    return total


@lru_cache(maxsize=256)
def _tower(f: Polynomial) -> SplittingTower:
    return SplittingTower(f)


def trace_split(v: Elem) -> Elem:
    """h(x_1) + ... + h(x_n) in the splitting tower, read off as a base element."""
    S = _S_of(v)
    tower = _tower(S.f)
    h = S.lift(v)
    T = tower.top
    total = T(0)
    for i in range(S.n):
        total = total + h.map(T, lambda c: tower.embed(c, -1)).eval(tower.root(i))
    out = tower.is_constant(total)
    if out is None:
        raise AssertionError("symmetric sum did not reduce to a base element")
    return out


# ---------------------------------------------------------------------------
# Tate's formula


@dataclass
class TateData:
    """f(X) - f(Y) = (X - Y) * sum_i g_i(Y) X^i."""

    f: Polynomial
    g: list

    @classmethod
    def of(cls, f: Polynomial) -> "TateData":
        R = f.ring
        n = f.degree
        g = []
        for i in range(n):
            g.append(Polynomial.raw(R, [f.coeffs[k] for k in range(i + 1, n + 1)]))
        return cls(f, g)

    def expands(self) -> bool:
        """Check (X - Y) g(X, Y) = f(X) - f(Y) coefficientwise in X."""
        R = self.f.ring
        n = self.f.degree
        Y = Polynomial.x(R)
        # coefficient of X^k on the left: g_(k-1)(Y) - Y g_k(Y)
        for k in range(n + 1):
            left = (self.g[k - 1] if 1 <= k <= n else Polynomial(R)) - (Y * self.g[k] if k < n else Polynomial(R))
            right = Polynomial.const(R, self.f[k]) if k >= 1 else (Polynomial.const(R, self.f[0]) - self.f)
            if left != right:
                return False
        return True


def tate_formula(v: Elem):
    """(f'(x) v, sum_i tr(g_i(x) v) x^i); the two always agree."""
    S = _S_of(v)
    td = TateData.of(S.f)
    lhs = fprime(S) * v
    x = S.root()
    rhs = S(0)
    xi = S(1)
    for gi in td.g:
        rhs = rhs + xi * Elem(S, S.embed(trace_matrix(S.of(gi) * v).v))
        xi = xi * x
    return lhs, rhs


def tate_lemma_witness(v: Elem, a, rel: IntegralRelation) -> Elem:
    """w with f'(x) v = a w, for v integral over <a> in S and a in R."""
    S = _S_of(v)
    R = S.base
    R.require(Cap.NORMAL, what="tate_lemma_witness")
    a = a if isinstance(a, Elem) and a.ring == R else R(a)
    aS = Elem(S, S.embed(a.v))
    rel = rel.map(S)
    if not rel.holds(v, aS):
        raise RelationInvalid("relation for v over <a> does not expand to zero")
    td = TateData.of(S.f)
    x = S.root()
    w = S(0)
    xi = S(1)
    for gi in td.g:
        t = trace_matrix(S.of(gi) * v)
        # g_i(x) v is integral over <a>, so is its trace, and R is normal
        q = R.divide_exact(t.v, a.v)
        if q is None:
            raise NotNormalWitnessFailure(f"trace {t} is not divisible by {a}")
        w = w + xi * Elem(S, S.embed(q))
        xi = xi * x
    if fprime(S) * v != aS * w:
        raise NotNormalWitnessFailure("f'(x) v != a w")
    return w


# ---------------------------------------------------------------------------
# R{f} = S[1/delta]


class RfRing(Ring):
    """S[1/delta] with payloads (s, N) meaning s / delta^N.

    Over a base without zero divisors S is free of rank n, so delta^k s = 0
    for some k already forces delta^n s = 0; that is the zero test.
    """

    canonical = False

    def __init__(self, S: QuotientAlg, delta: Elem | None = None):
        self.S = S
        self.delta = fprime(S) if delta is None else delta
        self.name = f"{S.name}[1/({self.delta})]"
        super().__init__({Cap.DISCRETE})
        self.zero = (S.zero, 0)
        self.one = (S.one, 0)
        self.cheap_division = False

    def spec(self):
        return {"ring": "Rf", "S": self.S.spec(), "delta": self.S.fmt(self.delta.v)}

    def _dpow(self, k):
        return self.S.pow(self.delta.v, k)

    def add(self, x, y):
        S = self.S
        (s, a), (t, b) = x, y
        m = max(a, b)
        return (S.add(S.mul(s, self._dpow(m - a)), S.mul(t, self._dpow(m - b))), m)

    def neg(self, x):
        return (self.S.neg(x[0]), x[1])

    def mul(self, x, y):
        return (self.S.mul(x[0], y[0]), x[1] + y[1])

    def is_zero(self, x):
        S = self.S
        return S.is_zero(S.mul(x[0], self._dpow(S.n)))

    def literal_zero(self, x):
        return self.S.literal_zero(x[0])

    def from_int(self, n):
        return (self.S.from_int(n), 0)

    def fmt(self, x):
        s, N = x
        if N == 0:
            return self.S.fmt(s)
        return f"({self.S.fmt(s)})/({self.delta})^{N}"

    def divide_exact(self, a, b):
        return None

    def of(self, s: Elem, N: int = 0) -> Elem:
        return Elem(self, (s.v, N))

    def is_trivial(self) -> bool:
        return self.is_zero(self.one)


@dataclass
class Decomposition:
    """R{f} = R{g}[1/f1(x)] x R{f1}[1/g(x)] through idempotents e1 + e2 = 1."""

    f: Polynomial
    g: Polynomial
    f1: Polynomial
    ring: RfRing
    e1: Elem
    e2: Elem
    trivial: bool = False

    def checks(self) -> dict:
        Rf = self.ring
        e1, e2 = self.e1, self.e2
        return {
            "e1 + e2 = 1": (e1 + e2 - 1).is_zero(),
            "e1 e2 = 0": (e1 * e2).is_zero(),
            "e1^2 = e1": (e1 * e1 - e1).is_zero(),
            "e2^2 = e2": (e2 * e2 - e2).is_zero(),
            "g(x) e1 = 0": (Rf.of(Rf.S.of(self.g)) * e1).is_zero(),
            "f1(x) e2 = 0": (Rf.of(Rf.S.of(self.f1)) * e2).is_zero(),
        }

    def verify(self) -> bool:
        return all(self.checks().values())

    def factor_ring(self, side: int) -> RfRing:
        """R{g}[1/f1(x)] for side 1, R{f1}[1/g(x)] for side 2."""
        R = self.f.ring
        h, other = (self.g, self.f1) if side == 1 else (self.f1, self.g)
        T = QuotientAlg(R, h)
        return RfRing(T, T.of(h.derivative() * other))

    def project(self, z: Elem, side: int) -> Elem:
        """Image of z = s / f'^N in the chosen factor."""
        F = self.factor_ring(side)
        T = F.S
        s, N = z.v
        h, other = (self.g, self.f1) if side == 1 else (self.f1, self.g)
        # f' = h' * other + h * other' and h = 0 in T, so f' maps to the new delta
        return F.of(T.of(self.ring.S.lift(s)), N)

    def morphism_checks(self) -> bool:
        """Projections are compatible with addition and multiplication on generators."""
        S = self.ring.S
        x = self.ring.of(S.root())
        gens = [x, x * x, self.e1, self.e2, self.ring.of(fprime(S))]
        ok = True
        for side in (1, 2):
            ok &= (self.project(self.e1 if side == 1 else self.e2, side) - 1).is_zero()
            ok &= self.project(self.e2 if side == 1 else self.e1, side).is_zero()
            for u in gens:
                for v in gens:
                    ok &= (self.project(u * v, side) - self.project(u, side) * self.project(v, side)).is_zero()
                    ok &= (self.project(u + v, side) - self.project(u, side) - self.project(v, side)).is_zero()
        return ok


def rf_decompose(f: Polynomial, g: Polynomial, f1: Polynomial) -> Decomposition:
    """Idempotents e1 = g'f1/f', e2 = g f1'/f' of R{f} for f = g*f1."""
    if not (f.is_monic() and g.is_monic() and f1.is_monic()):
        raise NotMonic("rf_decompose needs monic polynomials")
    if g.degree < 1 or f1.degree < 1:
        raise PreconditionViolated("rf_decompose needs a proper factorization")
    if g * f1 != f:
        raise PreconditionViolated("f != g*f1")
    S = QuotientAlg(f.ring, f)
    Rf = RfRing(S)
    e1 = Rf.of(S.of(g.derivative() * f1), 1)
    e2 = Rf.of(S.of(g * f1.derivative()), 1)
    dec = Decomposition(f, g, f1, Rf, e1, e2, trivial=Rf.is_trivial())
    if not dec.verify():
        raise AssertionError(f"idempotent identities failed: {dec.checks()}")
    return dec


# ---------------------------------------------------------------------------
# denominator-free factors


@dataclass
class InR:
    g: Polynomial
    f1: Polynomial


class _AIsZero:
    def __repr__(self):
        return "AIsZero"


AIsZero = _AIsZero()


def localized(R: Ring, a, items) -> Polynomial:
    """Polynomial over R[1/a] from (numerator, exponent) pairs, ascending."""
    a = R(a).v
    L = NodeRing(R, (a,))
    return Polynomial.raw(L, [(R(s).v, (k,)) for s, k in items])


def _resolve(R: Ring, L: NodeRing, c, rel_coeffs) -> Elem:
    """Base element equal to the node element c, via normality over <U^k>."""
    num, e = c
    k = max(e, default=0)
    if k == 0:
        return Elem(R, num)
    s = Elem(R, R.mul(num, L._mono(tuple(k - x for x in e))))
    ak = Elem(R, L.U) ** k
    if rel_coeffs is None:
        q = R.divide_exact(s.v, ak.v)
        if q is None:
            raise NotNormalWitnessFailure(f"{s} is not divisible by {ak}")
        return Elem(R, q)
    # gamma^L + sum u_i gamma^(L-i) = 0 becomes s^L + sum u_i a^(ki) s^(L-i) = 0
    return normality_witness(s, ak, IntegralRelation(len(rel_coeffs), rel_coeffs))


def crucial_factor(f: Polynomial, g: Polynomial, f1: Polynomial):
    """Denominator-free g, f1 over R, or AIsZero when the inverted element vanishes.

    `g` and `f1` live over a node R[1/a_1, ..., a_k] (no radical) with
    g*f1 = f there; f is over R.
    """
    L = g.ring
    if not isinstance(L, NodeRing) or L.radical_gens:
        raise PreconditionViolated("factors must live over a localization R[1/a]")
    R = L.base
    R.require(Cap.NORMAL, Cap.WITHOUT_ZERO_DIVISORS, what="crucial_factor")
    if L.is_trivial() or R.is_zero(L.U):
        return AIsZero
    fL = L.adopt(f)
    if not (g.is_monic() and f1.is_monic()) or g * f1 != fL:
        raise PreconditionViolated("need monic g, f1 with g*f1 = f over R[1/a]")
    n = f.degree
    b = [f[n - j] for j in range(1, n + 1)]
    out = []
    for h in (g, f1):
        m = h.degree
        coeffs = []
        for k in range(m + 1):
            c = h.coeffs[k]
            if k == m:
                coeffs.append(R.one)
                continue
            rel_coeffs = None
            num, e = c
            if any(e):
                try:
                    polys = orbit_polynomials(n, m, m - k)
                    rel_coeffs = [eval_dict(R, p, b) for p in polys]
                    kk = max(e)
                    ak = Elem(R, L.U) ** kk
                    rel_coeffs = [u * ak ** i for i, u in enumerate(rel_coeffs, start=1)]
                    # the scaled relation is over <a^k> with coefficients u_i a^(k i) / a^(k i)
                    rel_coeffs = [Elem(R, x.v) for x in _unscale(R, rel_coeffs, ak)]
                except OrbitTooLarge:
                    rel_coeffs = None
            coeffs.append(_resolve(R, L, c, rel_coeffs).v)
        out.append(Polynomial.raw(R, coeffs))
    g0, f10 = out
    if g0 * f10 != f:
        raise NotNormalWitnessFailure("resolved factors do not multiply back to f")
    return InR(g0, f10)


def _unscale(R, coeffs, ak):
    """u_i from u_i * a^(k i): the relation is stated over <a^k> with coefficients u_i."""
    out = []
    for i, c in enumerate(coeffs, start=1):
        q = R.divide_exact(c.v, (ak ** i).v)
        out.append(Elem(R, q))
    return out


# ---------------------------------------------------------------------------
# normality of R{f}


@dataclass
class RfWitness:
    """f'(x)^N * d^D * p = q * w in S = R[X]/<f>."""

    f: Polynomial
    p: Elem
    q: Elem
    w: Elem
    N: int
    D: int
    extra: list = field(default_factory=list)

    def d(self) -> Elem:
        S = self.w.ring
        out = S(1)
        for e in self.extra:
            out = out * e
        return out

    def verify(self) -> bool:
        S = self.w.ring
        lhs = fprime(S) ** self.N * self.d() ** self.D * self.p
        return (lhs - self.q * self.w).is_zero()


def _clear(H: Polynomial, R: Ring):
    """(N, H') with U^N * H = H' over the base, U the product of inverted elements."""
    L = H.ring
    N = max((max(e, default=0) for _, e in H.coeffs), default=0)
    return N, Polynomial.raw(R, [R.mul(a, L._mono(tuple(N - x for x in e))) for a, e in H.coeffs])


def _as_S(S: QuotientAlg, x) -> Elem:
    if isinstance(x, Elem):
        if x.ring == S:
            return x
        if x.ring == S.base:
            return Elem(S, S.embed(x.v))
        raise PreconditionViolated(f"element of {x.ring.name} is not in {S.name}")
    if isinstance(x, Polynomial):
        return S.of(x)
    return S(x)


def _direct_quotient(S: QuotientAlg, p: Elem, q: Elem):
    """w with p = q*w in S by exact linear algebra over Q, for Z and Q bases."""
    R = S.base
    if not isinstance(R, (Integers, Rationals)):
        return None
    n = S.n
    cols, b = [], S.root() ** 0
    for _ in range(n):
        cols.append([Fraction(c.v) for c in S.coordinates(q * b)])
        b = b * S.root()
    rows = [[cols[j][i] for j in range(n)] + [Fraction(S.coordinates(p)[i].v)] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                rows[i] = [x - rows[i][c] * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] for i in range(r, n)):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][n]
    if isinstance(R, Integers) and any(x.denominator != 1 for x in sol):
        return None
    w = S.of(Polynomial.raw(R, list(D.trim(R, [R.from_fraction(x) for x in sol]))))
    return w if q * w == p else None


def rf_normality_witness(p, q, rel, f: Polynomial, extra_denominators=(), max_depth: int | None = None, shortcut: bool = False) -> RfWitness:
    """(w, N, D) with f'(x)^N d^D p = q w in R[X]/<f>, from p integral over <q>.

    With `shortcut`, a plain quotient p = q*w in S (found by linear algebra
    over Z or Q) is returned with N = 0 before running the recursion.
    """
    R = f.ring
    R.require(Cap.NORMAL, Cap.WITHOUT_ZERO_DIVISORS, what="rf_normality_witness")
    if not f.is_monic() or f.degree < 1:
        raise NotMonic("rf_normality_witness needs a monic f of degree >= 1")
    S = QuotientAlg(R, f)
    p, q = _as_S(S, p), _as_S(S, q)
    extra = [_as_S(S, e) for e in extra_denominators]
    if not isinstance(rel, IntegralRelation):
        rel = IntegralRelation(len(rel), rel)
    rel = rel.map(lambda u: _as_S(S, u))
    if not rel.holds(p, q):
        raise RelationInvalid("relation for p over <q> does not expand to zero in S")
    depth = f.degree if max_depth is None else max_depth
    if shortcut:
        w0 = _direct_quotient(S, p, q)
        if w0 is not None:
            return RfWitness(f, p, q, w0, 0, 0, extra)
    w = _rf(S, p, q, rel, extra, depth)
    if not w.verify():
        raise NotNormalWitnessFailure("R{f} witness failed to verify")
    return w


def _rf(S: QuotientAlg, p: Elem, q: Elem, rel: IntegralRelation, extra, depth) -> RfWitness:
    R = S.base
    f = S.f
    n = f.degree
    delta = fprime(S)
    if depth < 0:
        raise ResourceLimit("R{f} recursion went deeper than deg f")
    if p.is_zero():
        return RfWitness(f, p, q, S(0), 0, 0, extra)
    if n == 1:
        # S = R; plain normality of the base
        b, a = Elem(R, S.coordinates(p)[0].v), Elem(R, S.coordinates(q)[0].v)
        r = rel.map(lambda u: Elem(R, S.coordinates(u)[0].v))
        w = normality_witness(b, a, r)
        return RfWitness(f, p, q, Elem(S, S.embed(w.v)), 0, 0, extra)
    tree = gcd_tree(f, S.lift(q))
    leaf = tree.root
    while leaf.kind == "internal":
        leaf = leaf.left
    cert = leaf.cert
    if cert is None:
        raise NotNormalWitnessFailure(f"unexpected leftmost leaf of kind {leaf.kind}")
    L = cert.ring
    G = cert.G
    if G.degree == 0:
        # A f + B q = 1 over R[1/U]; cleared, c = B'(x) q(x) in S with c = U^m
        NA, A = _clear(cert.A, R)
        NB, B = _clear(cert.B, R)
        m = max(NA, NB)
        U = Elem(R, L.U)
        A, B = A * U ** (m - NA), B * U ** (m - NB)
        c = U ** m
        if A * f + B * S.lift(q) != Polynomial.const(R, c):
            raise NotNormalWitnessFailure("cleared Bezout identity failed")
        Bx = S.of(B)
        cS = Elem(S, S.embed(c.v))
        v = Bx * p
        # (B p)^n + sum u_i (B q)^i (B p)^(n-i) = 0 and B q = c
        l = tate_lemma_witness(v, c, rel)
        s = delta * p - l * q
        # c * s = 0; c != 0 in R since the leftmost leaf is a nontrivial R[1/U]
        for coord in S.coordinates(s):
            if not coord.is_zero() and R.nzd_split(c.v, coord.v) == LEFT:
                raise NotNormalWitnessFailure("the cleared denominator vanished")
        return RfWitness(f, p, q, l, 1, 0, extra)
    if G.degree == n:
        # f | q over R[1/U]: q = 0 in S, p nilpotent, hence zero in R{f}
        for N in range(n + 1):
            if (delta ** N * p).is_zero():
                return RfWitness(f, p, q, S(0), N, 0, extra)
        raise NotNormalWitnessFailure("nilpotent p did not vanish in R{f}")
    res = crucial_factor(f, G, cert.P1)
    if res is AIsZero:
        raise NotNormalWitnessFailure("leftmost leaf ring is trivial")
    g, f1 = res.g, res.f1
    parts = []
    for h, other in ((g, f1), (f1, g)):
        T = QuotientAlg(R, h)
        red = lambda z: T.of(S.lift(z))
        sub_extra = [red(e) for e in extra] + [T.of(other)]
        sub = _rf(T, red(p), red(q), rel.map(red), sub_extra, depth - 1)
        parts.append(sub)
    # f'^(N_i + D_i + 1) d^(D_i) e_i p = q W_i in R{f}
    (w1, w2) = parts
    lift = lambda z: S.of(z.ring.lift(z))
    gx, f1x = S.of(g), S.of(f1)
    gp, f1p = S.of(g.derivative()), S.of(f1.derivative())
    W1 = lift(w1.w) * f1x ** (w1.N + 1) * gp ** (w1.D + 1)
    W2 = lift(w2.w) * gx ** (w2.N + 1) * f1p ** (w2.D + 1)
    K1, K2 = w1.N + w1.D + 1, w2.N + w2.D + 1
    K, Dd = max(K1, K2), max(w1.D, w2.D)
    out = RfWitness(f, p, q, S(0), K, Dd, extra)
    dd = out.d()
    w = W1 * delta ** (K - K1) * dd ** (Dd - w1.D) + W2 * delta ** (K - K2) * dd ** (Dd - w2.D)
    # the identity holds in R{f}; at most n more factors of f'(x) make it hold in S
    for extra_pow in range(n + 1):
        out.w = w * delta ** extra_pow
        out.N = K + extra_pow
        if out.verify():
            return out
    raise NotNormalWitnessFailure("glued R{f} witness did not verify")
