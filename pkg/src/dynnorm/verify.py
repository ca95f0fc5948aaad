"""Independent certificate checker.

Only ring arithmetic, polynomial arithmetic and the saturation zero test are
used here; nothing from the solver modules is imported, so a bug in a solver
cannot make its own output look valid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .poly import Polynomial, QuotientAlg
from .rings import Cap, Elem, Ring, parse_ring_spec, saturation_zero_test


class LocalRing(Ring):
    """base[1/prod(inverted)]/sqrt<radical>, payloads (numerator, exponents)."""

    canonical = False

    def __init__(self, base: Ring, inverted, radical):
        self.base = base
        self.inverted = list(inverted)
        self.radical = list(radical)
        self.name = f"{base.name}-local"
        super().__init__({Cap.DISCRETE})
        k = len(self.inverted)
        self.zero = (base.zero, (0,) * k)
        self.one = (base.one, (0,) * k)
        self.cheap_division = False

    def _scale(self, a, e, target):
        B = self.base
        for s, have, want in zip(self.inverted, e, target):
            if want > have:
                a = B.mul(a, B.pow(s, want - have))
        return a

    def add(self, x, y):
        (a, ea), (b, eb) = x, y
        e = tuple(max(i, j) for i, j in zip(ea, eb))
        return (self.base.add(self._scale(a, ea, e), self._scale(b, eb, e)), e)

    def neg(self, x):
        return (self.base.neg(x[0]), x[1])

    def mul(self, x, y):
        return (self.base.mul(x[0], y[0]), tuple(i + j for i, j in zip(x[1], y[1])))

    def is_zero(self, x):
        B = self.base
        inv = [Elem(B, s) for s in self.inverted]
        rad = [Elem(B, g) for g in self.radical]
        return saturation_zero_test(Elem(B, x[0]), inv, rad)

    def literal_zero(self, x):
        return self.base.literal_zero(x[0])

    def from_int(self, n):
        return (self.base.from_int(n), (0,) * len(self.inverted))

    def fmt(self, x):
        return self.base.fmt(x[0])

    def divide_exact(self, a, b):
        return None


def ring_from_spec(spec) -> Ring:
    if isinstance(spec, dict) and spec.get("ring") == "Node":
        B = parse_ring_spec(spec["base"])
        return LocalRing(B, [B.parse(s) for s in spec.get("inverted", [])], [B.parse(s) for s in spec.get("radical_gens", [])])
    return parse_ring_spec(spec)


def decode_elem(ring: Ring, item):
    try:
        if isinstance(ring, LocalRing):
            exps = tuple(int(e) for e in item["exps"])
            if len(exps) != len(ring.inverted) or min(exps, default=0) < 0:
                raise ParseError("bad exponent vector for a localized element")
            return (ring.base.parse(item["num"]), exps)
        return ring.parse(item)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"cannot read element {item!r}: {exc}") from exc


def decode_poly(ring: Ring, items) -> Polynomial:
    if not isinstance(items, list):
        raise ParseError(f"polynomial must be a list of coefficients, got {items!r}")
    return Polynomial.raw(ring, [decode_elem(ring, c) for c in items])


@dataclass
class VerifyReport:
    kind: str
    checks: list = field(default_factory=list)
    children: list = field(default_factory=list)

    def add(self, name: str, ok: bool):
        self.checks.append((name, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks) and all(c.ok for c in self.children)

    def failures(self) -> list:
        out = [f"{self.kind}: {name}" for name, ok in self.checks if not ok]
        for c in self.children:
            out.extend(c.failures())
        return out

    def lines(self, indent: str = "") -> list:
        out = [f"{indent}{self.kind}: {'PASS' if self.ok else 'FAIL'}"]
        for name, ok in self.checks:
            out.append(f"{indent}  [{'ok' if ok else 'FAILED'}] {name}")
        for c in self.children:
            out.extend(c.lines(indent + "  "))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _zero(p: Polynomial) -> bool:
    return p.is_zero()


def _relation_sum(b, a, coeffs):
    n = len(coeffs)
    total = b ** n
    for i, u in enumerate(coeffs, start=1):
        total = total + u * a ** i * b ** (n - i)
    return total


def _check_leaf(rep: VerifyReport, ring: Ring, pl: dict):
    P, Q, G, P1, Q1, A, B = (decode_poly(ring, pl[k]) for k in ("P", "Q", "G", "P1", "Q1", "A", "B"))
    one = Polynomial.raw(ring, (ring.one,))
    rep.add("G is monic", not G.is_zero() and ring.is_zero(ring.sub(G.coeffs[-1], ring.one)))
    rep.add("A*P1 + B*Q1 = 1", _zero(A * P1 + B * Q1 - one))
    rep.add("P = G*P1", _zero(P - G * P1))
    rep.add("Q = G*Q1", _zero(Q - G * Q1))


def _check_integral(rep: VerifyReport, ring: Ring, pl: dict):
    b = Elem(ring, decode_elem(ring, pl["subject"]))
    a = Elem(ring, decode_elem(ring, pl["modulus"]))
    us = [Elem(ring, decode_elem(ring, u)) for u in pl["coefficients"]]
    rep.add("relation expands to zero", _relation_sum(b, a, us).is_zero() if us else False)
    wf = pl.get("weighted")
    if wf is not None:
        weights = [int(w) for w in wf["weights"]]
        values = [Elem(ring, decode_elem(ring, v)) for v in wf["values"]]
        sw = int(wf.get("subject_weight", 1))
        polys = wf["polys"]
        homogeneous = len(polys) == len(us)
        match = len(polys) == len(us)
        for i, (p, u) in enumerate(zip(polys, us), start=1):
            total = ring(0)
            for exps, c in p:
                if sum(w * e for w, e in zip(weights, exps)) != i * sw:
                    homogeneous = False
                t = ring(Fraction(c))
                for v, e in zip(values, exps):
                    if e:
                        t = t * v ** e
                total = total + t
            if total != u:
                match = False
        rep.add("weighted homogeneity", homogeneous)
        rep.add("coefficients equal p_i at the weighted values", match)


def _check_membership(rep: VerifyReport, ring: Ring, pl: dict):
    P, Q, H1 = (decode_poly(ring, pl[k]) for k in ("P", "Q", "H1"))
    lhs = P
    den = pl.get("denominators")
    if den is not None:
        u = Elem(ring, decode_elem(ring, den["u"]))
        lhs = P * (u ** int(den["N"]))
    if "relation" in pl:
        A = [decode_poly(ring, c) for c in pl["relation"]]
        rep.add("integral relation expands to zero", _zero(_relation_sum(P, Q, A)) if A else False)
    rep.add("P = Q*H1" if den is None else "u^N P = Q*H1", _zero(lhs - Q * H1))


def _check_comaximal(rep: VerifyReport, ring: Ring, pl: dict):
    P, Q = decode_poly(ring, pl["P"]), decode_poly(ring, pl["Q"])
    us = [Elem(ring, decode_elem(ring, u)) for u in pl["elements"]]
    cs = [Elem(ring, decode_elem(ring, c)) for c in pl["coefficients"]]
    Hs = [decode_poly(ring, h) for h in pl["witnesses"]]
    N = int(pl["N"])
    ok_shape = len(us) == len(cs) == len(Hs) and len(us) > 0
    rep.add("one coefficient and one witness per element", ok_shape)
    total = ring(0)
    for c, u in zip(cs, us):
        total = total + c * u ** N
    rep.add("sum c_i u_i^N = 1", (total - 1).is_zero())
    for i, (u, H) in enumerate(zip(us, Hs)):
        rep.add(f"u_{i + 1}^N P = Q*H_{i + 1}", _zero(P * (u ** N) - Q * H))
    if "H1" in pl:
        H1 = decode_poly(ring, pl["H1"])
        rep.add("P = Q*H1", _zero(P - Q * H1))
        glued = Polynomial(ring)
        for c, H in zip(cs, Hs):
            glued = glued + H * c
        rep.add("H1 = sum c_i H_i", _zero(H1 - glued))


def _quotient(ring: Ring, pl: dict):
    f = decode_poly(ring, pl["f"])
    if not f.is_monic() or f.degree < 1:
        raise ParseError("modulus must be monic of degree >= 1")
    S = QuotientAlg(ring, f)
    return f, S


def _S_elem(S: QuotientAlg, items) -> Elem:
    return S.of(decode_poly(S.base, items))


def _trace(S: QuotientAlg, v: Elem) -> Elem:
    x = S.root()
    total = S.base(0)
    b = v
    for j in range(S.n):
        total = total + S.coordinates(b)[j]
        b = b * x
    return total


def _check_tate(rep: VerifyReport, ring: Ring, pl: dict):
    f, S = _quotient(ring, pl)
    v = _S_elem(S, pl["v"])
    fp = S.of(f.derivative())
    mode = pl.get("mode", "formula")
    if mode == "formula":
        lhs, rhs = _S_elem(S, pl["lhs"]), _S_elem(S, pl["rhs"])
        traces = [Elem(ring, decode_elem(ring, t)) for t in pl["traces"]]
        n = f.degree
        rep.add("one trace per basis power", len(traces) == n)
        ok = len(traces) == n
        xi, total = S(1), S(0)
        for i, t in enumerate(traces):
            gi = Polynomial.raw(ring, list(f.coeffs[i + 1:]))
            ok &= _trace(S, S.of(gi) * v) == t
            total = total + xi * Elem(S, S.embed(t.v))
            xi = xi * S.root()
        rep.add("traces tr(g_i(x) v) recomputed", ok)
        rep.add("lhs = f'(x) v", lhs == fp * v)
        rep.add("rhs = sum tr(g_i(x) v) x^i", rhs == total)
        rep.add("lhs = rhs", lhs == rhs)
    else:
        a = Elem(S, S.embed(decode_elem(ring, pl["a"])))
        w = _S_elem(S, pl["w"])
        us = [_S_elem(S, u) for u in pl["relation"]]
        rep.add("relation for v over <a> expands to zero", _relation_sum(v, a, us).is_zero() if us else False)
        rep.add("f'(x) v = a w", fp * v == a * w)


def _check_rf(rep: VerifyReport, ring: Ring, pl: dict):
    f, S = _quotient(ring, pl)
    p, q, w = (_S_elem(S, pl[k]) for k in ("p", "q", "w"))
    N, Dexp = int(pl["N"]), int(pl["D"])
    d = S(1)
    for e in pl.get("extra", []):
        d = d * _S_elem(S, e)
    us = [_S_elem(S, u) for u in pl["relation"]]
    rep.add("relation p^n + sum u_i q^i p^(n-i) = 0 in S", _relation_sum(p, q, us).is_zero() if us else False)
    fp = S.of(f.derivative())
    rep.add("f'(x)^N d^D p = q w", fp ** N * d ** Dexp * p == q * w)


def _check_decomposition(rep: VerifyReport, ring: Ring, pl: dict):
    f, S = _quotient(ring, pl)
    g, f1 = decode_poly(ring, pl["g"]), decode_poly(ring, pl["f1"])
    rep.add("f = g*f1 with monic factors", g.is_monic() and f1.is_monic() and g * f1 == f)
    fp = S.of(f.derivative())
    n = S.n

    def zero(s):
        return (s * fp ** n).is_zero()

    def el(item):
        return (_S_elem(S, item["num"]), int(item["N"]))

    def mul(x, y):
        return (x[0] * y[0], x[1] + y[1])

    def sub(x, y):
        return (x[0] * fp ** y[1] - y[0] * fp ** x[1], x[1] + y[1])

    one = (S(1), 0)
    e1, e2 = el(pl["e1"]), el(pl["e2"])
    if pl.get("trivial"):
        rep.add("R{f} is the zero ring", zero(S(1)))
        return
    rep.add("e1 + e2 = 1", zero(sub((e1[0] * fp ** e2[1] + e2[0] * fp ** e1[1], e1[1] + e2[1]), one)[0]))
    rep.add("e1 e2 = 0", zero(mul(e1, e2)[0]))
    rep.add("e1^2 = e1", zero(sub(mul(e1, e1), e1)[0]))
    rep.add("e2^2 = e2", zero(sub(mul(e2, e2), e2)[0]))
    rep.add("g(x) e1 = 0", zero(S.of(g) * e1[0]))
    rep.add("f1(x) e2 = 0", zero(S.of(f1) * e2[0]))


_CHECKERS = {
    "LeafCert": _check_leaf,
    "IntegralCert": _check_integral,
    "MembershipWitness": _check_membership,
    "ComaximalCert": _check_comaximal,
    "TateWitness": _check_tate,
    "RfWitness": _check_rf,
    "Decomposition": _check_decomposition,
}


def _check_tree(rep: VerifyReport, ring: Ring, pl: dict):
    leaves = pl.get("leaves", [])
    rep.add("at least one leaf", bool(leaves))
    for leaf in leaves:
        lring = ring_from_spec(leaf["ring"])
        child = VerifyReport(f"leaf {leaf['path'] or 'root'} ({leaf['kind']})")
        if leaf["kind"] == "leaf":
            _check_leaf(child, lring, leaf["cert"])
        elif leaf["kind"] == "trivial":
            child.add("node ring is zero", lring.is_zero(lring.one))
        elif leaf["kind"] == "bothzero":
            child.add("P = 0 and Q = 0", all(_zero(decode_poly(lring, leaf[k])) for k in ("P", "Q")))
        else:
            child.add(f"known leaf kind {leaf['kind']!r}", False)
        rep.children.append(child)


def verify(cert) -> VerifyReport:
    """Check every identity a certificate claims; never raises on a wrong identity."""
    if isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError as exc:
            raise ParseError(f"certificate is not valid JSON: {exc}") from exc
    if not isinstance(cert, dict) or "kind" not in cert:
        raise ParseError("certificate must be an object with a 'kind' field")
    kind = cert["kind"]
    rep = VerifyReport(kind)
    if kind == "Bundle":
        for c in cert.get("certificates", []):
            rep.children.append(verify(c))
        rep.add("non-empty bundle", bool(rep.children))
        return rep
    ring = ring_from_spec(cert["ring"])
    pl = cert.get("payload", {})
    try:
        if kind == "GcdTree":
            _check_tree(rep, ring, pl)
        elif kind in _CHECKERS:
            _CHECKERS[kind](rep, ring, pl)
        else:
            raise ParseError(f"unknown certificate kind {kind!r}")
    except KeyError as exc:
        raise ParseError(f"{kind} certificate is missing field {exc}") from exc
    return rep
