"""A small expression reader turning strings like "1+2w" or "t^2 - 1/2" into ring payloads."""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot read {text!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Reader:
    # Values are ("q", Fraction) for pure numbers or ("e", payload) once a ring
    # element is involved, so "1/2*t" works over Q[t] without fractions in R.

    def __init__(self, ring, tokens):
        self.R = ring
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def elem(self, v):
        return v[1] if v[0] == "e" else self.R.from_fraction(v[1])

    def add(self, x, y, sign):
        if x[0] == "q" and y[0] == "q":
            return ("q", x[1] + sign * y[1])
        a, b = self.elem(x), self.elem(y)
        return ("e", self.R.add(a, b) if sign > 0 else self.R.sub(a, b))

    def mul(self, x, y):
        if x[0] == "q" and y[0] == "q":
            return ("q", x[1] * y[1])
        return ("e", self.R.mul(self.elem(x), self.elem(y)))

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = 1 if self.take()[1] == "+" else -1
            v = self.add(v, self.term(), sign)
        return v

    def term(self):
        v = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                v = self.mul(v, self.factor())
            elif kind == "op" and val == "/":
                self.take()
                d = self.factor()
                if d[0] != "q":
                    raise ParseError("only division by rational constants is supported")
                if d[1] == 0:
                    raise ParseError("division by zero in expression")
                v = self.mul(v, ("q", 1 / d[1]))
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                v = self.mul(v, self.factor())  # juxtaposition, e.g. "2w"
            else:
                return v

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            v = self.factor()
            if val == "+":
                return v
            return ("q", -v[1]) if v[0] == "q" else ("e", self.R.neg(v[1]))
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            k, e = self.take()
            if k != "num":
                raise ParseError("exponent must be a nonnegative integer")
            if base[0] == "q":
                return ("q", base[1] ** e)
            return ("e", self.R.pow(base[1], e))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("q", Fraction(val))
        if kind == "name":
            return ("e", self.R.var(val))
        if kind == "op" and val == "(":
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("unbalanced parentheses")
            return v
        raise ParseError(f"unexpected token {val!r}")


def parse_expression(ring, text: str):
    """Evaluate `text` in `ring`, returning a payload."""
    toks = tokenize(str(text))
    if not toks:
        raise ParseError("empty expression")
    r = _Reader(ring, toks)
    v = r.expr()
    if r.i != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return r.elem(v)


def split_top_level(text: str, sep: str = ","):
    depth, start, parts = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]
