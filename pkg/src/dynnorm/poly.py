"""Dense univariate polynomials over any ring, bivariate helpers, and R[X]/<f>."""
from __future__ import annotations

from fractions import Fraction

from . import _dense as D
from .errors import ExactDivisionFailed, MixedBackends, NotMonic, PreconditionViolated, UnsupportedCapability
from .rings import LEFT, RIGHT, Cap, Elem, Ring


class Polynomial:
    """Immutable polynomial; `coeffs` is a trimmed tuple of payloads, ascending."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs=()):
        self.ring = ring
        self.coeffs = D.trim(ring, [ring(c).v if not _is_payload_of(ring, c) else c for c in coeffs])

    @classmethod
    def raw(cls, ring: Ring, payloads) -> "Polynomial":
        p = cls.__new__(cls)
        p.ring = ring
        p.coeffs = D.trim(ring, payloads)
        return p

    @classmethod
    def trusted(cls, ring, payloads):
        p = cls.__new__(cls)
        p.ring = ring
        p.coeffs = tuple(payloads)
        return p

    @classmethod
    def x(cls, ring: Ring) -> "Polynomial":
        return cls.raw(ring, (ring.zero, ring.one))

    @classmethod
    def const(cls, ring: Ring, c) -> "Polynomial":
        return cls.raw(ring, (ring(c).v,))

    @classmethod
    def parse(cls, ring: Ring, items) -> "Polynomial":
        """From a JSON-style list of element strings/ints, ascending."""
        return cls.raw(ring, [ring.parse(c) for c in items])

    # structure ---------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i) -> Elem:
        if 0 <= i < len(self.coeffs):
            return Elem(self.ring, self.coeffs[i])
        return Elem(self.ring, self.ring.zero)

    def coefficients(self):
        return [Elem(self.ring, c) for c in self.coeffs]

    @property
    def lc(self) -> Elem:
        return self[self.degree]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return D.is_monic(self.ring, self.coeffs)

    def _co(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise MixedBackends(f"{self.ring.name}[X] vs {other.ring.name}[X]")
            return other.coeffs
        if isinstance(other, (Elem, int, Fraction)) and not isinstance(other, bool):
            return D.trim(self.ring, (self.ring(other).v,))
        return NotImplemented

    # arithmetic ---------------------------------------------------------------
    def __add__(self, o):
        c = self._co(o)
        return NotImplemented if c is NotImplemented else Polynomial.trusted(self.ring, D.add(self.ring, self.coeffs, c))

    __radd__ = __add__

    def __sub__(self, o):
        c = self._co(o)
        return NotImplemented if c is NotImplemented else Polynomial.trusted(self.ring, D.sub(self.ring, self.coeffs, c))

    def __rsub__(self, o):
        c = self._co(o)
        return NotImplemented if c is NotImplemented else Polynomial.trusted(self.ring, D.sub(self.ring, c, self.coeffs))

    def __neg__(self):
        return Polynomial.trusted(self.ring, D.neg(self.ring, self.coeffs))

    def __mul__(self, o):
        c = self._co(o)
        return NotImplemented if c is NotImplemented else Polynomial.trusted(self.ring, D.mul(self.ring, self.coeffs, c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.raw(self.ring, (self.ring.one,))
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, o):
        c = self._co(o)
        if c is NotImplemented:
            return NotImplemented
        if self.ring.canonical:
            return self.coeffs == c
        return not D.sub(self.ring, self.coeffs, c)

    def __hash__(self):
        return hash(self.coeffs) if self.ring.canonical else 0

    def scale(self, c) -> "Polynomial":
        return Polynomial.trusted(self.ring, D.scale(self.ring, self.coeffs, self.ring(c).v))

    def shift(self, k: int) -> "Polynomial":
        return Polynomial.trusted(self.ring, D.shift(self.ring, self.coeffs, k))

    def eval(self, x) -> Elem:
        return Elem(self.ring, D.evaluate(self.ring, self.coeffs, self.ring(x).v))

    def compose(self, g: "Polynomial") -> "Polynomial":
        acc = Polynomial(self.ring)
        for c in reversed(self.coeffs):
            acc = acc * g + Polynomial.raw(self.ring, (c,))
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial.trusted(self.ring, D.derivative(self.ring, self.coeffs))

    def map(self, ring: Ring, fn) -> "Polynomial":
        """Apply a payload map coefficientwise, landing in `ring`."""
        return Polynomial.raw(ring, [fn(c) for c in self.coeffs])

    def truncate(self, k: int) -> "Polynomial":
        return Polynomial.raw(self.ring, self.coeffs[:k])

    def to_json(self):
        return [self.ring.fmt(c) for c in self.coeffs]

    def __str__(self):
        return D.fmt(self.ring, self.coeffs)

    def __repr__(self):
        return f"Polynomial({self.ring.name}: {self})"


def _is_payload_of(ring, c):
    # Elements handed in as Elem/int/str/Fraction get coerced; anything else is
    # treated as an already-valid payload (internal use).
    return not isinstance(c, (Elem, int, str, Fraction))


def poly_arith(op: str, f: Polynomial, g: Polynomial | None = None) -> Polynomial:
    if op == "neg":
        return -f
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def monic_divmod(f: Polynomial, g: Polynomial, exact: bool = False):
    """(q, r) with f = g*q + r, deg r < deg g, for monic g."""
    if f.ring is not g.ring and f.ring != g.ring:
        raise MixedBackends("monic_divmod over different rings")
    if not g.is_monic():
        raise NotMonic(f"{g} is not monic")
    q, r = D.divmod_monic(f.ring, f.coeffs, g.coeffs)
    if exact and r:
        raise ExactDivisionFailed(f"{g} does not divide {f}")
    return Polynomial.trusted(f.ring, q), Polynomial.trusted(f.ring, r)


def _nzd_gate(ring):
    if not (ring.has(Cap.WITHOUT_ZERO_DIVISORS) or getattr(ring, "pf_mode", False)):
        raise UnsupportedCapability(f"{ring.name} is not flagged without zero divisors")


def nzd_poly_split(f: Polynomial, g: Polynomial) -> str:
    """Given f*g = 0, return LEFT if f = 0 and RIGHT if g = 0."""
    ring = f.ring
    _nzd_gate(ring)
    if not (f * g).is_zero():
        raise PreconditionViolated("nzd_poly_split needs f*g = 0")
    fc, gc = f.coeffs, g.coeffs
    while True:
        if not fc:
            return LEFT
        if not gc:
            return RIGHT
        side = ring.nzd_split(fc[-1], gc[-1])
        if side == LEFT:
            fc = D.trim(ring, fc[:-1])
        else:
            gc = D.trim(ring, gc[:-1])


class BiPolynomial:
    """Polynomial in Y over R[X]: `ycoeffs[j]` is the Y^j coefficient."""

    __slots__ = ("ring", "ycoeffs")

    def __init__(self, ring: Ring, ycoeffs):
        ys = list(ycoeffs)
        while ys and ys[-1].is_zero():
            ys.pop()
        self.ring = ring
        self.ycoeffs = tuple(ys)

    @property
    def ydegree(self):
        return len(self.ycoeffs) - 1

    def is_monic(self):
        return bool(self.ycoeffs) and self.ycoeffs[-1] == Polynomial.const(self.ring, 1)

    def eval_y(self, h: Polynomial) -> Polynomial:
        acc = Polynomial(self.ring)
        for c in reversed(self.ycoeffs):
            acc = acc * h + c
        return acc

    def __mul__(self, other: "BiPolynomial") -> "BiPolynomial":
        out = [Polynomial(self.ring)] * (len(self.ycoeffs) + len(other.ycoeffs) - 1)
        for i, a in enumerate(self.ycoeffs):
            for j, b in enumerate(other.ycoeffs):
                out[i + j] = out[i + j] + a * b
        return BiPolynomial(self.ring, out)

    def __eq__(self, other):
        if not isinstance(other, BiPolynomial) or len(self.ycoeffs) != len(other.ycoeffs):
            return False
        return all(a == b for a, b in zip(self.ycoeffs, other.ycoeffs))

    def __repr__(self):
        return "BiPolynomial(" + ", ".join(str(c) for c in self.ycoeffs) + ")"


def linear_factor_divide(M: BiPolynomial, H: Polynomial) -> BiPolynomial:
    """S with M = (Y - H)*S, by synthetic division in Y."""
    if not M.is_monic():
        raise NotMonic("M must be monic in Y")
    n = M.ydegree
    s = [None] * n
    acc = M.ycoeffs[n]
    for j in range(n - 1, -1, -1):
        s[j] = acc
        acc = M.ycoeffs[j] + acc * H
    if not acc.is_zero():
        raise ExactDivisionFailed("M(H) != 0")
    return BiPolynomial(M.ring, s)


def subresultant_prs(f: Polynomial, g: Polynomial) -> list:
    """Subresultant remainder sequence of (f, g).

    The sequence stops at a constant term or, when the last division is exact,
    with an appended zero polynomial. A g of larger degree is reduced mod f first.
    """
    if not f.is_monic():
        raise NotMonic("subresultant_prs needs monic f")
    R = f.ring
    if g.degree > f.degree:
        # f is monic, so reducing g first keeps the gcd and a nonnegative degree gap
        return subresultant_prs(f, monic_divmod(g, f)[1])
    seq = [f, g]
    if g.is_zero() or g.degree == 0:
        return seq
    prev, cur = f, g
    d = prev.degree - cur.degree
    psi = R(-1)
    beta = R((-1) ** (d + 1))
    while True:
        r = _pseudo_rem(prev, cur)
        if r.is_zero():
            seq.append(r)
            return seq
        nxt = _exact_scalar_div(r, beta)
        seq.append(nxt)
        if nxt.degree == 0:
            return seq
        gamma = cur.lc
        if d == 0:
            psi_next = psi
        else:
            psi_next = _exact_elem_div((-gamma) ** d, psi ** (d - 1))
        d = cur.degree - nxt.degree
        beta = -gamma * psi_next ** d
        psi = psi_next
        prev, cur = cur, nxt


def _pseudo_rem(a: Polynomial, b: Polynomial) -> Polynomial:
    """lc(b)^(deg a - deg b + 1) * a mod b."""
    R = a.ring
    r = list(a.coeffs)
    lb = b.coeffs[-1]
    n = len(b.coeffs) - 1
    steps = 0
    total = max(len(r) - 1 - n + 1, 0)
    while r and len(r) - 1 >= n:
        c = r[-1]
        k = len(r) - 1 - n
        r = [R.mul(lb, x) for x in r]
        for j, y in enumerate(b.coeffs):
            r[k + j] = R.sub(r[k + j], R.mul(c, y))
        r = list(D.trim(R, r))
        steps += 1
    out = Polynomial.raw(R, r)
    if steps < total:
        out = out.scale(Elem(R, R.pow(lb, total - steps)))
    return out


def _exact_scalar_div(p: Polynomial, c: Elem) -> Polynomial:
    out = []
    for x in p.coeffs:
        q = p.ring.divide_exact(x, c.v)
        if q is None:
            raise ExactDivisionFailed("subresultant coefficient division failed")
        out.append(q)
    return Polynomial.raw(p.ring, out)


def _exact_elem_div(a: Elem, b: Elem) -> Elem:
    q = a.ring.divide_exact(a.v, b.v)
    if q is None:
        raise ExactDivisionFailed("subresultant scalar division failed")
    return Elem(a.ring, q)


class QuotientAlg(Ring):
    """S = R[X]/<f> for monic f; payloads are reduced coefficient tuples."""

    def __init__(self, base: Ring, f: Polynomial, root_name: str = "x"):
        if f.ring is not base and f.ring != base:
            raise MixedBackends("modulus must live over the base ring")
        if not f.is_monic() or f.degree < 1:
            raise NotMonic("QuotientAlg needs a monic modulus of degree >= 1")
        self.base = base
        self.f = f
        self.n = f.degree
        self.root_name = root_name
        self.name = f"{base.name}[{root_name}]/({D.fmt(base, f.coeffs, root_name)})"
        self.canonical = base.canonical
        self.cheap_division = False
        super().__init__({Cap.DISCRETE} if base.has(Cap.DISCRETE) else set())
        self.zero = ()
        self.one = D.trim(base, (base.one,))

    def spec(self):
        return {"ring": "Quotient", "base": self.base.spec(), "modulus": self.f.to_json()}

    def reduce(self, coeffs):
        B = self.base
        r = list(D.trim(B, coeffs))
        fc = self.f.coeffs
        n = self.n
        lz = B.literal_zero
        for k in range(len(r) - 1, n - 1, -1):
            c = r[k]
            if lz(c):
                continue
            for j in range(n):
                if not lz(fc[j]):
                    r[k - n + j] = B.sub(r[k - n + j], B.mul(c, fc[j]))
        return D.trim(B, r[:n])

    def add(self, x, y):
        return D.add(self.base, x, y)

    def neg(self, x):
        return D.neg(self.base, x)

    def sub(self, x, y):
        return D.sub(self.base, x, y)

    def mul(self, x, y):
        return self.reduce(D.mul(self.base, x, y))

    def is_zero(self, x):
        return not x

    def literal_zero(self, x):
        return not x

    def eq(self, x, y):
        return not D.sub(self.base, x, y)

    def hash_payload(self, x):
        return hash(x) if self.base.canonical else 0

    def from_int(self, n):
        return D.trim(self.base, (self.base.from_int(n),))

    def from_fraction(self, q):
        return D.trim(self.base, (self.base.from_fraction(q),))

    def var(self, name):
        if name == self.root_name:
            return self.reduce((self.base.zero, self.base.one))
        return self.embed(self.base.var(name))

    def embed(self, payload):
        return D.trim(self.base, (payload,))

    def fmt(self, x):
        return D.fmt(self.base, x, self.root_name)

    def divide_exact(self, a, b):
        return None

    def root(self) -> Elem:
        return Elem(self, self.var(self.root_name))

    def of(self, p: Polynomial) -> Elem:
        """Class of a base polynomial."""
        if p.ring is not self.base and p.ring != self.base:
            raise MixedBackends("polynomial over the wrong ring")
        return Elem(self, self.reduce(p.coeffs))

    def lift(self, x) -> Polynomial:
        """Canonical representative (degree < n) of an element or payload."""
        v = x.v if isinstance(x, Elem) else x
        return Polynomial.trusted(self.base, v)

    def coordinates(self, x) -> list:
        v = x.v if isinstance(x, Elem) else x
        return [Elem(self.base, v[i] if i < len(v) else self.base.zero) for i in range(self.n)]
