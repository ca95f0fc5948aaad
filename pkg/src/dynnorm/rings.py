"""Computable commutative rings.

A `Ring` works on opaque *payloads* (ints, Fractions, tuples, MPoly ...) and
declares a static set of capabilities.  `Elem` wraps a payload with its ring
and gives ordinary operator syntax; most user-facing code works with `Elem`.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from . import _dense as D
from . import grobner
from .errors import (
    DivisionByZero,
    MixedBackends,
    NotComaximal,
    NotNormalWitnessFailure,
    ParseError,
    PreconditionViolated,
    RelationInvalid,
    UnsupportedCapability,
)
from .parsing import parse_expression, split_top_level


class Cap(enum.Enum):
    DISCRETE = "DISCRETE"
    DOMAIN = "DOMAIN"
    WITHOUT_ZERO_DIVISORS = "WITHOUT_ZERO_DIVISORS"
    PF = "PF"
    NORMAL = "NORMAL"
    FIELD = "FIELD"
    COMAXIMAL_SOLVER = "COMAXIMAL_SOLVER"
    SATURATION_TEST = "SATURATION_TEST"


# Closure rules; a normal ring is pf (it splits ab = 0 through its normality).
_IMPLIES = [
    (Cap.FIELD, Cap.DOMAIN),
    (Cap.DOMAIN, Cap.WITHOUT_ZERO_DIVISORS),
    (Cap.WITHOUT_ZERO_DIVISORS, Cap.PF),
    (Cap.NORMAL, Cap.PF),
]

LEFT = "left"
RIGHT = "right"


def close_caps(caps) -> frozenset:
    caps = set(caps)
    changed = True
    while changed:
        changed = False
        for a, b in _IMPLIES:
            if a in caps and b not in caps:
                caps.add(b)
                changed = True
    return frozenset(caps)


class Ring:
    """Base class for ring backends."""

    name = "ring"
    # payload equality is ring equality and payloads are hashable
    canonical = True
    # divide_exact is cheap enough to normalize fractions eagerly in node rings
    cheap_division = True

    def __init__(self, caps=()):
        self.caps = close_caps(caps)
        self._key = None

    # identity -----------------------------------------------------------
    def spec(self) -> dict:
        raise NotImplementedError

    @property
    def key(self) -> str:
        if self._key is None:
            self._key = json.dumps(self.spec(), sort_keys=True)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Ring) and (self is other or self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    def has(self, *caps) -> bool:
        return all(c in self.caps for c in caps)

    def require(self, *caps, what: str = "operation"):
        missing = [c.value for c in caps if c not in self.caps]
        if missing:
            raise UnsupportedCapability(f"{what} needs {', '.join(missing)} on {self.name}")

    # payload arithmetic -------------------------------------------------
    zero = 0
    one = 1

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        raise NotImplementedError

    def pow(self, x, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out, base = self.one, x
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def is_zero(self, x) -> bool:
        return x == self.zero

    def literal_zero(self, x) -> bool:
        return x == self.zero

    def eq(self, x, y) -> bool:
        return x == y if self.canonical else self.is_zero(self.sub(x, y))

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        q = Fraction(q)
        if q.denominator == 1:
            return self.from_int(q.numerator)
        inv = self.inverse(self.from_int(q.denominator))
        if inv is None:
            raise ParseError(f"{q} is not an element of {self.name}")
        return self.mul(self.from_int(q.numerator), inv)

    def var(self, name: str):
        raise ParseError(f"unknown symbol {name!r} for {self.name}")

    def parse(self, text):
        if isinstance(text, int):
            return self.from_int(text)
        return parse_expression(self, str(text))

    def fmt(self, x) -> str:
        return str(x)

    def hash_payload(self, x):
        return hash(x) if self.canonical else 0

    # division and ideals ------------------------------------------------
    def divide_exact(self, a, b):
        """Payload q with a = b*q, or None."""
        raise NotImplementedError

    def inverse(self, x):
        return self.divide_exact(self.one, x)

    def radical_member(self, c, gens) -> bool:
        raise UnsupportedCapability(f"no radical membership test on {self.name}")

    def comaximal(self, elems):
        """Payload list c with sum c_i*e_i = 1, or None when <elems> != 1."""
        raise UnsupportedCapability(f"no comaximal solver on {self.name}")

    def squarefree(self, x):
        return x

    def nzd_split(self, x, y) -> str:
        """Given x*y = 0, say which factor is zero."""
        if not self.has(Cap.WITHOUT_ZERO_DIVISORS):
            raise UnsupportedCapability(f"{self.name} is not flagged without zero divisors")
        if not self.is_zero(self.mul(x, y)):
            raise PreconditionViolated("nzd_split needs x*y = 0")
        if self.is_zero(x):
            return LEFT
        if self.is_zero(y):
            return RIGHT
        raise PreconditionViolated(f"{self.name}: nonzero factors with zero product")

    # wrapping ---------------------------------------------------------------
    def __call__(self, value) -> "Elem":
        if isinstance(value, Elem):
            if value.ring is self or value.ring == self:
                return value if value.ring is self else Elem(self, value.v)
            raise MixedBackends(f"{value.ring.name} element used in {self.name}")
        if isinstance(value, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(value, int):
            return Elem(self, self.from_int(value))
        if isinstance(value, Fraction):
            return Elem(self, self.from_fraction(value))
        if isinstance(value, str):
            return Elem(self, self.parse(value))
        raise TypeError(f"cannot coerce {type(value).__name__} into {self.name}")

    def elem(self, payload) -> "Elem":
        return Elem(self, payload)

    def zero_elem(self):
        return Elem(self, self.zero)

    def one_elem(self):
        return Elem(self, self.one)


class Elem:
    """A ring element: payload plus owning ring.  Immutable."""

    __slots__ = ("ring", "v")

    def __init__(self, ring: Ring, v):
        self.ring = ring
        self.v = v

    def _co(self, other):
        if isinstance(other, Elem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise MixedBackends(f"{self.ring.name} vs {other.ring.name}")
            return other.v
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring(other).v
        return NotImplemented

    def __add__(self, o):
        v = self._co(o)
        return NotImplemented if v is NotImplemented else Elem(self.ring, self.ring.add(self.v, v))

    def __radd__(self, o):
        return self.__add__(o)

    def __sub__(self, o):
        v = self._co(o)
        return NotImplemented if v is NotImplemented else Elem(self.ring, self.ring.sub(self.v, v))

    def __rsub__(self, o):
        v = self._co(o)
        return NotImplemented if v is NotImplemented else Elem(self.ring, self.ring.sub(v, self.v))

    def __mul__(self, o):
        v = self._co(o)
        return NotImplemented if v is NotImplemented else Elem(self.ring, self.ring.mul(self.v, v))

    def __rmul__(self, o):
        return self.__mul__(o)

    def __neg__(self):
        return Elem(self.ring, self.ring.neg(self.v))

    def __pow__(self, n: int):
        return Elem(self.ring, self.ring.pow(self.v, n))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.v)

    def __eq__(self, o):
        v = self._co(o)
        if v is NotImplemented:
            return NotImplemented
        return self.ring.eq(self.v, v)

    def __hash__(self):
        return self.ring.hash_payload(self.v)

    def __str__(self):
        return self.ring.fmt(self.v)

    def __repr__(self):
        return f"Elem({self.ring.name}: {self})"


# ---------------------------------------------------------------------------
# helpers


def _xgcd(a: int, b: int):
    """(g, s, t) with s*a + t*b = g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _int_radical_exponent(index: int) -> int:
    return max(1, math.ceil(math.log2(index))) + 1 if index > 1 else 1


def _int_squarefree(n: int) -> int:
    n = abs(n)
    if n <= 1:
        return n
    out = 1
    for p, _ in flint.fmpz(n).factor():
        out *= int(p)
    return out


# ---------------------------------------------------------------------------
# backends


class Integers(Ring):
    name = "Z"

    def __init__(self):
        super().__init__({Cap.DISCRETE, Cap.DOMAIN, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST})

    def spec(self):
        return {"ring": "Int"}

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def pow(self, x, n):
        return x ** n

    def from_int(self, n):
        return int(n)

    def divide_exact(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def radical_member(self, c, gens):
        g = 0
        for x in gens:
            g = math.gcd(g, x)
        if g == 0:
            return c == 0
        if g == 1:
            return True
        return pow(c, _int_radical_exponent(g), g) == 0

    def comaximal(self, elems):
        g, coeffs = 0, [0] * len(elems)
        for i, e in enumerate(elems):
            g, s, t = _xgcd(g, e)
            coeffs = [s * c for c in coeffs]
            coeffs[i] = t
        return coeffs if g == 1 else None

    def squarefree(self, x):
        return _int_squarefree(x)


class Rationals(Ring):
    name = "Q"

    def __init__(self):
        super().__init__({Cap.DISCRETE, Cap.FIELD, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST})
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def spec(self):
        return {"ring": "Q"}

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def divide_exact(self, a, b):
        if b == 0:
            return self.zero if a == 0 else None
        return a / b

    def radical_member(self, c, gens):
        return c == 0 or any(g != 0 for g in gens)

    def comaximal(self, elems):
        for i, e in enumerate(elems):
            if e != 0:
                out = [self.zero] * len(elems)
                out[i] = 1 / e
                return out
        return None

    def squarefree(self, x):
        return self.one if x != 0 else x


class PrimeField(Ring):
    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not flint.fmpz(p).is_prime():
            raise ParseError(f"PrimeField needs a prime modulus, got {p}")
        self.p = p
        self.name = f"F{p}"
        super().__init__({Cap.DISCRETE, Cap.FIELD, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST})

    def spec(self):
        return {"ring": "PrimeField", "p": self.p}

    def add(self, x, y):
        return (x + y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def from_int(self, n):
        return int(n) % self.p

    def divide_exact(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        return (a * pow(b, -1, self.p)) % self.p

    def radical_member(self, c, gens):
        return c == 0 or any(g != 0 for g in gens)

    def comaximal(self, elems):
        for i, e in enumerate(elems):
            if e:
                out = [0] * len(elems)
                out[i] = pow(e, -1, self.p)
                return out
        return None

    def squarefree(self, x):
        return 1 if x else 0


def _is_squarefree_int(d: int) -> bool:
    return d not in (0, 1) and _int_squarefree(d) == abs(d)


def _echelon2(rows):
    """Integer row reduction of 2-column rows carrying combination vectors.

    rows: list of (vec, combo).  Returns (r1, r2) where r1 = ((a, b), combo)
    with a = gcd of the first column (None if all zero) and r2 = ((0, c), combo)
    spanning the rest (None if zero).
    """
    rows = [(list(v), list(c)) for v, c in rows]

    def reduce_col(rs, col):
        rs = [r for r in rs if any(r[0])]
        while True:
            nz = [r for r in rs if r[0][col] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[0][col]))
            for r in nz:
                if r is piv:
                    continue
                q = r[0][col] // piv[0][col]
                r[0][0] -= q * piv[0][0]
                r[0][1] -= q * piv[0][1]
                for k in range(len(r[1])):
                    r[1][k] -= q * piv[1][k]
            rs = [r for r in rs if any(r[0])]
        nz = [r for r in rs if r[0][col] != 0]
        rest = [r for r in rs if r[0][col] == 0]
        piv = nz[0] if nz else None
        if piv is not None and piv[0][col] < 0:
            piv = ([-x for x in piv[0]], [-x for x in piv[1]])
        return piv, rest

    p1, rest = reduce_col(rows, 0)
    p2, _ = reduce_col(rest, 1)
    return p1, p2


class QuadInt(Ring):
    """Z[w] with w^2 = d, d squarefree and d = 2, 3 mod 4 (the maximal order)."""

    def __init__(self, d: int):
        d = int(d)
        if not _is_squarefree_int(d):
            raise ParseError(f"QuadInt needs squarefree d != 0, 1, got {d}")
        if d % 4 not in (2, 3):
            raise ParseError(
                f"QuadInt(d={d}): d = 1 mod 4 makes Z[sqrt d] a non-maximal order, "
                "which is not normal; only d = 2, 3 mod 4 are supported"
            )
        self.d = d
        self.name = f"Z[sqrt({d})]"
        super().__init__({Cap.DISCRETE, Cap.DOMAIN, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST})
        self.zero = (0, 0)
        self.one = (1, 0)

    def spec(self):
        return {"ring": "QuadInt", "d": self.d}

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def mul(self, x, y):
        return (x[0] * y[0] + self.d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def from_int(self, n):
        return (int(n), 0)

    def var(self, name):
        if name == "w":
            return (0, 1)
        return super().var(name)

    def fmt(self, x):
        a, b = x
        if b == 0:
            return str(a)
        wb = "w" if b == 1 else "-w" if b == -1 else f"{b}w"
        if a == 0:
            return wb
        return f"{a}{wb}" if wb.startswith("-") else f"{a}+{wb}"

    def norm(self, x):
        return x[0] * x[0] - self.d * x[1] * x[1]

    def divide_exact(self, a, b):
        if b == self.zero:
            return self.zero if a == self.zero else None
        n = self.norm(b)
        num = self.mul(a, (b[0], -b[1]))
        if num[0] % n or num[1] % n:
            return None
        return (num[0] // n, num[1] // n)

    def _lattice(self, gens):
        rows = []
        for g in gens:
            rows.append(((g[0], g[1]), ()))
            rows.append(((self.d * g[1], g[0]), ()))
        return _echelon2(rows)

    def radical_member(self, c, gens):
        p1, p2 = self._lattice(gens)
        if p1 is None and p2 is None:
            return c == self.zero
        if p1 is None or p2 is None:
            raise AssertionError("nonzero ideal of Z[w] has full rank")
        (a, b), (_, cc) = p1[0], p2[0]
        index = a * cc
        if index == 1:
            return True
        k = _int_radical_exponent(index)
        x = (c[0] % index, c[1] % index)
        y = self.one
        for _ in range(k):
            y = self.mul(y, x)
            y = (y[0] % index, y[1] % index)
        u, r = divmod(y[0], a)
        if r:
            return False
        return (y[1] - u * b) % cc == 0

    def comaximal(self, elems):
        m = len(elems)
        rows = []
        for i, g in enumerate(elems):
            e1 = [0] * (2 * m)
            e1[2 * i] = 1
            e2 = [0] * (2 * m)
            e2[2 * i + 1] = 1
            rows.append(((g[0], g[1]), e1))
            rows.append(((self.d * g[1], g[0]), e2))
        p1, p2 = _echelon2(rows)
        if p1 is None or p1[0][0] != 1:
            return None
        (a, b), combo = p1
        combo = list(combo)
        if b:
            if p2 is None or b % p2[0][1]:
                return None
            v = -b // p2[0][1]
            combo = [x + v * y for x, y in zip(combo, p2[1])]
        return [(combo[2 * i], combo[2 * i + 1]) for i in range(m)]


class UnivarPoly(Ring):
    """F[t] for a field F; payloads are coefficient tuples (ascending)."""

    def __init__(self, field: Ring, var: str = "t"):
        if not field.has(Cap.FIELD):
            raise ParseError("PolyOverField needs a field as base")
        self.field = field
        self.varname = var
        self.name = f"{field.name}[{var}]"
        super().__init__({Cap.DISCRETE, Cap.DOMAIN, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST})
        self.zero = ()
        self.one = (field.one,)

    def spec(self):
        return {"ring": "PolyOverField", "base": self.field.spec(), "var": self.varname}

    def add(self, x, y):
        return D.add(self.field, x, y)

    def neg(self, x):
        return D.neg(self.field, x)

    def sub(self, x, y):
        return D.sub(self.field, x, y)

    def mul(self, x, y):
        return D.mul(self.field, x, y)

    def from_int(self, n):
        return D.trim(self.field, (self.field.from_int(n),))

    def from_fraction(self, q):
        return D.trim(self.field, (self.field.from_fraction(q),))

    def var(self, name):
        if name == self.varname:
            return (self.field.zero, self.field.one)
        return super().var(name)

    def fmt(self, x):
        return D.fmt(self.field, x, self.varname)

    def divide_exact(self, a, b):
        if not b:
            return () if not a else None
        q, r = D.divmod_field(self.field, a, b)
        return q if not r else None

    def radical_member(self, c, gens):
        F = self.field
        g = ()
        for x in gens:
            g = D.gcd_field(F, g, x)
        if not g:
            return not c
        if len(g) == 1:
            return True
        r = D.divmod_field(F, c, g)[1]
        acc = self.one
        for _ in range(len(g) - 1):
            acc = D.divmod_field(F, D.mul(F, acc, r), g)[1]
        return not acc

    def comaximal(self, elems):
        F = self.field
        g, coeffs = (), [()] * len(elems)
        for i, e in enumerate(elems):
            g2, s, t = D.xgcd_field(F, g, e)
            if not g2:
                continue
            coeffs = [D.mul(F, s, c) for c in coeffs]
            coeffs[i] = t
            g = g2
        return coeffs if g == self.one else None

    def squarefree(self, x):
        F = self.field
        if not x:
            return x
        if not isinstance(F, Rationals):
            return D.monic_field(F, x)
        g = D.gcd_field(F, x, D.derivative(F, x))
        return D.monic_field(F, D.divmod_field(F, x, g)[0])


MAX_MPOLY_VARS = 4


class MultivarPoly(Ring):
    """Q[vars] backed by the Gröbner engine."""

    cheap_division = False

    def __init__(self, variables: Sequence[str], max_vars: int = MAX_MPOLY_VARS):
        variables = list(variables)
        if not variables or len(set(variables)) != len(variables):
            raise ParseError("MPolyQ needs distinct variable names")
        if len(variables) > max_vars:
            raise ParseError(f"MPolyQ supports at most {max_vars} variables")
        self.vars = variables
        self.n = len(variables)
        self.name = "Q[" + ",".join(variables) + "]"
        super().__init__({Cap.DISCRETE, Cap.DOMAIN, Cap.NORMAL, Cap.SATURATION_TEST})
        self.zero = grobner.MPoly.const(self.n, 0)
        self.one = grobner.MPoly.const(self.n, 1)
        self._ctx = None

    def spec(self):
        return {"ring": "MPolyQ", "vars": list(self.vars)}

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def pow(self, x, n):
        return x ** n

    def is_zero(self, x):
        return not x.terms

    literal_zero = is_zero

    def from_int(self, n):
        return grobner.MPoly.const(self.n, n)

    def from_fraction(self, q):
        return grobner.MPoly.const(self.n, q)

    def var(self, name):
        if name in self.vars:
            return grobner.MPoly.gen(self.n, self.vars.index(name))
        return super().var(name)

    def fmt(self, x):
        return x.format(self.vars)

    def divide_exact(self, a, b):
        return grobner.divide_exact(a, b)

    def radical_member(self, c, gens):
        return grobner.radical_member(c, list(gens))

    def squarefree(self, x):
        if x.is_constant():
            return self.one if x else x
        if self._ctx is None:
            self._ctx = flint.fmpq_mpoly_ctx.get(tuple(self.vars), "lex")
        fp = self._ctx.from_dict({e: flint.fmpq(c.numerator, c.denominator) for e, c in x.terms.items()})
        _, facs = fp.factor_squarefree()
        out = self.one
        for f, _ in facs:
            d = {tuple(int(k) for k in e): Fraction(int(c.p), int(c.q)) for e, c in f.to_dict().items()}
            out = out * grobner.MPoly(self.n, d)
        return out.monic()


class Product(Ring):
    """Finite product of rings, componentwise."""

    def __init__(self, factors: Sequence[Ring]):
        factors = list(factors)
        if not factors:
            raise ParseError("Product needs at least one factor")
        self.factors = factors
        self.name = "x".join(f.name for f in factors)
        shared = set.intersection(*(set(f.caps) for f in factors))
        caps = {c for c in shared if c in (Cap.DISCRETE, Cap.NORMAL, Cap.COMAXIMAL_SOLVER, Cap.SATURATION_TEST, Cap.PF)}
        if len(factors) == 1:
            caps = shared
        super().__init__(caps)
        self.zero = tuple(f.zero for f in factors)
        self.one = tuple(f.one for f in factors)
        self.cheap_division = all(f.cheap_division for f in factors)

    def spec(self):
        return {"ring": "Product", "factors": [f.spec() for f in self.factors]}

    def _map(self, fn, *args):
        return tuple(fn(f, *xs) for f, *xs in zip(self.factors, *args))

    def add(self, x, y):
        return self._map(lambda f, a, b: f.add(a, b), x, y)

    def neg(self, x):
        return self._map(lambda f, a: f.neg(a), x)

    def sub(self, x, y):
        return self._map(lambda f, a, b: f.sub(a, b), x, y)

    def mul(self, x, y):
        return self._map(lambda f, a, b: f.mul(a, b), x, y)

    def is_zero(self, x):
        return all(f.is_zero(a) for f, a in zip(self.factors, x))

    def literal_zero(self, x):
        return all(f.literal_zero(a) for f, a in zip(self.factors, x))

    def from_int(self, n):
        return tuple(f.from_int(n) for f in self.factors)

    def from_fraction(self, q):
        return tuple(f.from_fraction(q) for f in self.factors)

    def parse(self, text):
        if isinstance(text, int):
            return self.from_int(text)
        s = str(text).strip()
        if s.startswith("(") and s.endswith(")"):
            parts = split_top_level(s[1:-1])
            if len(parts) == len(self.factors) and len(parts) > 1:
                return tuple(f.parse(p) for f, p in zip(self.factors, parts))
        return parse_expression(self, s)

    def fmt(self, x):
        return "(" + ",".join(f.fmt(a) for f, a in zip(self.factors, x)) + ")"

    def divide_exact(self, a, b):
        out = []
        for f, x, y in zip(self.factors, a, b):
            q = f.divide_exact(x, y)
            if q is None:
                return None
            out.append(q)
        return tuple(out)

    def radical_member(self, c, gens):
        return all(
            f.radical_member(c[i], [g[i] for g in gens]) for i, f in enumerate(self.factors)
        )

    def comaximal(self, elems):
        cols = []
        for i, f in enumerate(self.factors):
            c = f.comaximal([e[i] for e in elems])
            if c is None:
                return None
            cols.append(c)
        return [tuple(col[j] for col in cols) for j in range(len(elems))]

    def squarefree(self, x):
        return x


# ---------------------------------------------------------------------------
# ring specs

_RING_CACHE: dict = {}


def parse_ring_spec(spec) -> Ring:
    """Build (or fetch the cached) ring for a RingSpec dict or JSON string."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"ring spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "ring" not in spec:
        raise ParseError("ring spec must be an object with a 'ring' field")
    key = json.dumps(spec, sort_keys=True)
    if key in _RING_CACHE:
        return _RING_CACHE[key]
    kind = spec["ring"]
    try:
        if kind == "Int":
            ring = Integers()
        elif kind == "Q":
            ring = Rationals()
        elif kind == "PrimeField":
            ring = PrimeField(spec["p"])
        elif kind == "QuadInt":
            ring = QuadInt(spec["d"])
        elif kind == "PolyOverField":
            ring = UnivarPoly(parse_ring_spec(spec["base"]), spec.get("var", "t"))
        elif kind == "MPolyQ":
            ring = MultivarPoly(spec["vars"])
        elif kind == "Product":
            ring = Product([parse_ring_spec(f) for f in spec["factors"]])
        else:
            raise ParseError(f"unknown ring kind {kind!r}")
    except KeyError as exc:
        raise ParseError(f"ring spec {kind!r} is missing field {exc}") from exc
    _RING_CACHE[key] = ring
    return ring


ZZ = parse_ring_spec({"ring": "Int"})
QQ = parse_ring_spec({"ring": "Q"})


# ---------------------------------------------------------------------------
# the ring-level operations


def _same_ring(*xs):
    ring = xs[0].ring
    for x in xs[1:]:
        if x.ring is not ring and x.ring != ring:
            raise MixedBackends(f"{ring.name} vs {x.ring.name}")
    return ring


def ring_arith(op: str, x: Elem, y: Elem | None = None) -> Elem:
    if op == "neg":
        return -x
    _same_ring(x, y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def is_zero(x: Elem) -> bool:
    return x.is_zero()


@dataclass(frozen=True)
class IntegralRelation:
    """b^n + u_1 a b^(n-1) + ... + u_n a^n = 0, for elements or polynomials."""

    n: int
    coefficients: tuple

    def __init__(self, n: int, coefficients):
        coefficients = tuple(coefficients)
        if n < 1 or len(coefficients) != n:
            raise RelationInvalid(f"relation of degree {n} needs {n} coefficients")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coefficients", coefficients)

    def expand(self, b, a):
        total = b ** self.n
        apow = None
        for i, u in enumerate(self.coefficients, start=1):
            apow = a if apow is None else apow * a
            total = total + u * apow * b ** (self.n - i)
        return total

    def holds(self, b, a) -> bool:
        return self.expand(b, a).is_zero()

    def map(self, fn) -> "IntegralRelation":
        return IntegralRelation(self.n, [fn(u) for u in self.coefficients])


def normality_witness(b: Elem, a: Elem, rel: IntegralRelation) -> Elem:
    """q with b = a*q, given b integral over <a> in a normal ring."""
    ring = _same_ring(b, a)
    ring.require(Cap.NORMAL, what="normality_witness")
    rel = rel.map(ring)
    if not rel.holds(b, a):
        raise RelationInvalid("integral relation does not expand to zero")
    q = ring.divide_exact(b.v, a.v)
    if q is None:
        raise NotNormalWitnessFailure(f"{b} is integral over <{a}> but not divisible in {ring.name}")
    return Elem(ring, q)


def pf_split(a: Elem, b: Elem) -> Elem:
    """u with u*a = 0 and (1-u)*b = 0, given a*b = 0."""
    ring = _same_ring(a, b)
    ring.require(Cap.PF, what="pf_split")
    if not (a * b).is_zero():
        raise PreconditionViolated("pf_split needs a*b = 0")
    if ring.has(Cap.NORMAL):
        # b^2 - (a+b)*b = -ab = 0, so b is integral over <a+b>: b = (a+b)u.
        s = a + b
        u = normality_witness(b, s, IntegralRelation(2, [ring(-1), ring(0)]))
    else:
        u = ring(0) if b.is_zero() else ring(1)
    if not ((u * a).is_zero() and ((1 - u) * b).is_zero()):
        raise NotNormalWitnessFailure("pf_split produced an invalid splitting element")
    return u


def saturation_zero_test(c: Elem, inverted: Sequence[Elem] = (), radical_gens: Sequence[Elem] = ()) -> bool:
    """Is c zero in B[1/prod(inverted)]/sqrt<radical_gens>?"""
    ring = c.ring
    ring.require(Cap.SATURATION_TEST, what="saturation_zero_test")
    _same_ring(c, *inverted, *radical_gens) if (inverted or radical_gens) else None
    u = c.v
    for s in inverted:
        u = ring.mul(u, s.v)
    return ring.radical_member(u, [g.v for g in radical_gens])


def is_trivial(ring: Ring, inverted: Sequence[Elem] = (), radical_gens: Sequence[Elem] = ()) -> bool:
    return saturation_zero_test(ring(1), inverted, radical_gens)


def comaximal_coefficients(elems: Sequence[Elem]) -> list:
    """c_i with sum c_i*e_i = 1."""
    if not elems:
        raise NotComaximal("empty family generates the zero ideal")
    ring = _same_ring(*elems)
    coeffs = None
    for i, e in enumerate(elems):
        inv = ring.inverse(e.v)
        if inv is not None:
            coeffs = [ring.zero] * len(elems)
            coeffs[i] = inv
            break
    if coeffs is None:
        ring.require(Cap.COMAXIMAL_SOLVER, what="comaximal_coefficients")
        coeffs = ring.comaximal([e.v for e in elems])
        if coeffs is None:
            raise NotComaximal("elements do not generate the unit ideal")
    out = [Elem(ring, c) for c in coeffs]
    total = ring(0)
    for c, e in zip(out, elems):
        total = total + c * e
    if not (total - 1).is_zero():
        raise NotComaximal("comaximal solver returned a bad combination")
    return out


def fraction_divide(b: Elem, a: Elem) -> Elem | None:
    ring = _same_ring(b, a)
    ring.require(Cap.DOMAIN, what="fraction_divide")
    if a.is_zero():
        raise DivisionByZero("fraction_divide by zero")
    q = ring.divide_exact(b.v, a.v)
    return None if q is None else Elem(ring, q)
