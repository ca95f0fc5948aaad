"""Payload-level dense univariate polynomial helpers.

Polynomials are tuples of coefficient payloads of a ring `R`, ascending by
degree.  `trim` uses the ring's (semantic) zero test; the inner loops only skip
literal zeros so they stay cheap over node rings.
"""
from __future__ import annotations

from .errors import ExactDivisionFailed, NotMonic


def trim(R, a):
    n = len(a)
    while n and R.is_zero(a[n - 1]):
        n -= 1
    return tuple(a[:n])


def add(R, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = R.add(out[i], y)
    return trim(R, out)


def neg(R, a):
    return tuple(R.neg(x) for x in a)


def sub(R, a, b):
    return add(R, a, neg(R, b))


def scale(R, a, c):
    return trim(R, [R.mul(x, c) for x in a])


def mul(R, a, b):
    if not a or not b:
        return ()
    out = [R.zero] * (len(a) + len(b) - 1)
    lz = R.literal_zero
    for i, x in enumerate(a):
        if lz(x):
            continue
        for j, y in enumerate(b):
            if lz(y):
                continue
            out[i + j] = R.add(out[i + j], R.mul(x, y))
    return trim(R, out)


def shift(R, a, k):
    return (R.zero,) * k + tuple(a) if a else ()


def derivative(R, a):
    return trim(R, [R.mul(R.from_int(i), a[i]) for i in range(1, len(a))])


def evaluate(R, a, x):
    acc = R.zero
    for c in reversed(a):
        acc = R.add(R.mul(acc, x), c)
    return acc


def is_monic(R, g):
    return bool(g) and R.eq(g[-1], R.one)


def divmod_monic(R, f, g):
    """(q, r) with f = g*q + r, deg r < deg g.  `g` must have leading coefficient one."""
    if not is_monic(R, g):
        raise NotMonic("divisor is not monic")
    n = len(g) - 1
    r = list(f)
    if len(r) <= n:
        return (), trim(R, r)
    q = [R.zero] * (len(r) - n)
    lz = R.literal_zero
    for k in range(len(r) - 1, n - 1, -1):
        c = r[k]
        if lz(c):
            continue
        q[k - n] = c
        for j in range(n):
            if not lz(g[j]):
                r[k - n + j] = R.sub(r[k - n + j], R.mul(c, g[j]))
        r[k] = R.zero
    return trim(R, q), trim(R, r[:n])


def rem_monic(R, f, g):
    return divmod_monic(R, f, g)[1]


def exact_div_monic(R, f, g):
    q, r = divmod_monic(R, f, g)
    if r:
        raise ExactDivisionFailed("nonzero remainder in exact monic division")
    return q


def divmod_field(F, f, g):
    """Euclidean division over a field ring `F`."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.inverse(g[-1])
    gm = tuple(F.mul(c, inv) for c in g)
    q, r = divmod_monic(F, f, gm)
    return scale(F, q, inv), r


def monic_field(F, f):
    if not f:
        return f
    inv = F.inverse(f[-1])
    return tuple(F.mul(c, inv) for c in f)


def xgcd_field(F, a, b):
    """(g, s, t) with s*a + t*b = g, g monic (or empty when a = b = 0)."""
    r0, r1 = a, b
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = divmod_field(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return (), (), ()
    inv = F.inverse(r0[-1])
    return scale(F, r0, inv), scale(F, s0, inv), scale(F, t0, inv)


def gcd_field(F, a, b):
    while b:
        a, b = b, divmod_field(F, a, b)[1]
    return monic_field(F, a)


def fmt(R, a, var="X"):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if R.is_zero(c):
            continue
        s = R.fmt(c)
        if i == 0:
            term = s
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if s == "1":
                term = mono
            elif s == "-1":
                term = "-" + mono
            else:
                if _compound(s):
                    s = f"({s})"
                term = f"{s}*{mono}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") and not t.startswith("-(") else f" + {t}"
    return out


def _compound(s: str) -> bool:
    depth = 0
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0 and s[i - 1] not in "e^":
            return True
    return False
