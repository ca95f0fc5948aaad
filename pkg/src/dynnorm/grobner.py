"""Multivariate polynomials over Q and a small Buchberger engine.

Terms are ordered by graded reverse lexicographic order with variables in
declaration order.  Everything here is exact (`fractions.Fraction`).
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache

from .errors import ResourceLimit

DEFAULT_MAX_PAIRS = 100_000


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MPoly:
    """Immutable sparse polynomial in `nvars` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        d = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    e = tuple(e)
                    c = d.get(e, 0) + Fraction(c)
                    if c:
                        d[e] = c
                    else:
                        d.pop(e, None)
        self.terms = d
        self._hash = None

    @classmethod
    def _raw(cls, nvars, d):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = d
        p._hash = None
        return p

    @classmethod
    def const(cls, nvars, c):
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def gen(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        d = dict(self.terms)
        for e, c in other.terms.items():
            v = d.get(e, 0) + c
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return MPoly._raw(self.nvars, d)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly._raw(self.nvars, {})
            return MPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        d = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = d.get(e, 0) + c1 * c2
                if v:
                    d[e] = v
                else:
                    d.pop(e, None)
        return MPoly._raw(self.nvars, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_term(self, e, c):
        return MPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(e0, e)): c0 * c for e0, c0 in self.terms.items()}
        )

    def leading(self):
        """(exponent, coefficient) of the grevlex-largest term."""
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def monic(self):
        if not self.terms:
            return self
        return self * (1 / self.leading()[1])

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def substitute(self, values, one, mul, add, from_fraction):
        """Evaluate with ring-valued `values` using caller-supplied ring operations."""
        acc = None
        powers = {}
        for e, c in self.terms.items():
            t = from_fraction(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        p = one
                        for _ in range(k):
                            p = mul(p, values[i])
                        powers[key] = p
                    t = mul(t, powers[key])
            acc = t if acc is None else add(acc, t)
        return acc if acc is not None else from_fraction(Fraction(0))

    def extend(self, nvars):
        pad = (0,) * (nvars - self.nvars)
        return MPoly._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    def permute(self, perm):
        """Rename variable i to perm[i]."""
        d = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, k in enumerate(e):
                ne[perm[i]] = k
            d[tuple(ne)] = c
        return MPoly._raw(self.nvars, d)

    def format(self, names):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            out.append(s)
        text = out[0]
        for s in out[1:]:
            text += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return text

    def __repr__(self):
        return f"MPoly({self.format([f'x{i + 1}' for i in range(self.nvars)])})"


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def reduce_full(p: MPoly, basis):
    """Remainder of `p` on full division by `basis` (list of MPoly)."""
    leads = [(g.leading(), g) for g in basis if g]
    rem = {}
    cur = dict(p.terms)
    n = p.nvars
    while cur:
        e = max(cur, key=grevlex_key)
        c = cur[e]
        for (le, lc), g in leads:
            if _divides(le, e):
                f = c / lc
                shift = tuple(x - y for x, y in zip(e, le))
                for ge, gc in g.terms.items():
                    te = tuple(a + b for a, b in zip(ge, shift))
                    v = cur.get(te, 0) - f * gc
                    if v:
                        cur[te] = v
                    else:
                        cur.pop(te, None)
                break
        else:
            rem[e] = c
            del cur[e]
    return MPoly._raw(n, rem)


def divide_exact(f: MPoly, g: MPoly):
    """Quotient q with f = g*q, or None when g does not divide f."""
    if not g:
        return MPoly._raw(f.nvars, {}) if not f else None
    le, lc = g.leading()
    q = {}
    cur = dict(f.terms)
    while cur:
        e = max(cur, key=grevlex_key)
        if not _divides(le, e):
            return None
        c = cur[e] / lc
        shift = tuple(x - y for x, y in zip(e, le))
        q[shift] = c
        for ge, gc in g.terms.items():
            te = tuple(a + b for a, b in zip(ge, shift))
            v = cur.get(te, 0) - c * gc
            if v:
                cur[te] = v
            else:
                cur.pop(te, None)
    return MPoly._raw(f.nvars, q)


class GroebnerBasis:
    """Reduced, monic Gröbner basis under grevlex."""

    order = "grevlex"

    def __init__(self, generators, nvars):
        self.generators = list(generators)
        self.nvars = nvars

    def is_unit_ideal(self):
        return any(g.is_constant() and g for g in self.generators)

    def __repr__(self):
        return f"GroebnerBasis({self.generators!r})"


def _spoly(f, g):
    (ef, cf), (eg, cg) = f.leading(), g.leading()
    m = _lcm(ef, eg)
    a = f.mul_term(tuple(x - y for x, y in zip(m, ef)), 1 / cf)
    b = g.mul_term(tuple(x - y for x, y in zip(m, eg)), 1 / cg)
    return a - b


def buchberger(gens, nvars: int | None = None, max_pairs: int | None = None) -> GroebnerBasis:
    gens = [g for g in gens if g]
    if nvars is None:
        nvars = gens[0].nvars if gens else 0
    if max_pairs is None:
        max_pairs = int(os.environ.get("DYNNORM_MAX_PAIRS", DEFAULT_MAX_PAIRS))
    basis = []
    for g in gens:
        r = reduce_full(g, basis)
        if r:
            basis.append(r.monic())
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    processed = 0
    while pairs:
        if any(g.is_constant() for g in basis):
            break
        processed += 1
        if processed > max_pairs:
            raise ResourceLimit(f"Buchberger exceeded {max_pairs} pairs")
        pairs.sort(key=lambda ij: sum(_lcm(basis[ij[0]].leading()[0], basis[ij[1]].leading()[0])))
        i, j = pairs.pop(0)
        ei, ej = basis[i].leading()[0], basis[j].leading()[0]
        if all(x == 0 or y == 0 for x, y in zip(ei, ej)):
            continue  # coprime leading monomials
        r = reduce_full(_spoly(basis[i], basis[j]), basis)
        if r:
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.extend((i2, k) for i2 in range(k))
    if any(g.is_constant() for g in basis):
        return GroebnerBasis([MPoly.const(nvars, 1)], nvars)
    return GroebnerBasis(_interreduce(basis), nvars)


def _interreduce(basis):
    basis = sorted(basis, key=lambda g: grevlex_key(g.leading()[0]))
    minimal = []
    for g in basis:
        le = g.leading()[0]
        if not any(_divides(h.leading()[0], le) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce_full(g, others).monic())
    return sorted(out, key=lambda g: grevlex_key(g.leading()[0]), reverse=True)


def normal_form(p: MPoly, gb: GroebnerBasis) -> MPoly:
    return reduce_full(p, gb.generators)


def ideal_member(p: MPoly, gb: GroebnerBasis) -> bool:
    return not normal_form(p, gb)


def radical_member(p: MPoly, gens) -> bool:
    """Decide p in the radical of <gens> via 1 in <gens, 1 - t*p>."""
    if not p:
        return True
    gens = [g for g in gens if g]
    if not gens:
        return False
    return _radical_cached(p, tuple(gens))


@lru_cache(maxsize=4096)
def _radical_cached(p, gens):
    n = p.nvars
    ext = [g.extend(n + 1) for g in gens]
    t = MPoly.gen(n + 1, n)
    ext.append(MPoly.const(n + 1, 1) - t * p.extend(n + 1))
    return buchberger(ext, n + 1).is_unit_ideal()
