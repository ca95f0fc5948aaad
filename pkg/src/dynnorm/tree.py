"""Node rings, gcd trees and their collapse.

A node ring is B[1/(a_1...a_k)]/sqrt<g_1,...,g_r> over a base backend B.  Its
payloads are pairs (numerator, exponents) meaning num / prod a_i^e_i; zero
tests go through the base ring's saturation test.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from math import comb

from . import _dense as D
from .errors import (
    DegenerateBranch,
    ExactDivisionFailed,
    NeedsSplit,
    NotNormalWitnessFailure,
    PreconditionViolated,
    ResourceLimit,
    UnsupportedCapability,
)
from .poly import BiPolynomial, Polynomial, monic_divmod, nzd_poly_split
from .rings import LEFT, RIGHT, Cap, Elem, IntegralRelation, Ring, pf_split

DEFAULT_NODE_BUDGET = 2 ** 14
MAX_INVERSE_POWER = 64


def node_budget() -> int:
    return int(os.environ.get("DYNNORM_NODE_BUDGET", DEFAULT_NODE_BUDGET))


class NodeRing(Ring):
    """base[1/prod(inverted)]/sqrt<radical_gens>."""

    canonical = False

    def __init__(self, base: Ring, inverted=(), radical_gens=(), pf_mode: bool = False, path: str = ""):
        if isinstance(base, NodeRing):
            raise TypeError("node rings are built over a backend, not over another node")
        base.require(Cap.SATURATION_TEST, Cap.DISCRETE, what="node rings")
        self.base = base
        self.inverted = tuple(inverted)
        self.radical_gens = tuple(radical_gens)
        self.pf_mode = pf_mode
        self.path = path
        self.k = len(self.inverted)
        U = base.one
        for s in self.inverted:
            U = base.mul(U, s)
        self.U = U
        caps = {Cap.DISCRETE, Cap.SATURATION_TEST}
        if not self.radical_gens:
            caps |= {c for c in (Cap.NORMAL, Cap.WITHOUT_ZERO_DIVISORS, Cap.DOMAIN) if base.has(c)}
        super().__init__(caps)
        self.cheap_division = base.cheap_division
        self.zero = (base.zero, (0,) * self.k)
        self.one = (base.one, (0,) * self.k)
        self._zero_cache = {}
        self._pow_cache = {}
        self.name = self.describe()

    # identity -------------------------------------------------------------------
    def spec(self):
        B = self.base
        return {
            "ring": "Node",
            "base": B.spec(),
            "inverted": [B.fmt(s) for s in self.inverted],
            "radical_gens": [B.fmt(g) for g in self.radical_gens],
        }

    def describe(self) -> str:
        B = self.base
        s = B.name
        if self.inverted:
            s += "[1/" + ",1/".join(_paren(B.fmt(a)) for a in self.inverted) + "]"
        if self.radical_gens:
            s += "/sqrt<" + ",".join(B.fmt(g) for g in self.radical_gens) + ">"
        return s

    # structure ------------------------------------------------------------------
    def localize(self, u) -> "NodeRing":
        return NodeRing(self.base, self.inverted + (u,), self.radical_gens, self.pf_mode, self.path)

    def with_radical(self, g) -> "NodeRing":
        return NodeRing(self.base, self.inverted, self.radical_gens + (g,), self.pf_mode, self.path)

    def drop_radical(self, index: int) -> "NodeRing":
        rad = self.radical_gens[:index] + self.radical_gens[index + 1:]
        return NodeRing(self.base, self.inverted, rad, self.pf_mode, self.path)

    def truncate(self, k: int) -> "NodeRing":
        """The ring with only the first k inverted elements."""
        return NodeRing(self.base, self.inverted[:k], self.radical_gens, self.pf_mode, self.path)

    def is_trivial(self) -> bool:
        return self.is_zero(self.one)

    # payload plumbing -----------------------------------------------------------
    def _mono(self, exps):
        key = tuple(exps)
        m = self._pow_cache.get(key)
        if m is None:
            B = self.base
            m = B.one
            for s, e in zip(self.inverted, exps):
                if e:
                    m = B.mul(m, B.pow(s, e))
            self._pow_cache[key] = m
        return m

    def _norm(self, a, e, force: bool = False):
        B = self.base
        if B.literal_zero(a):
            return self.zero
        if not any(e) or not (force or self.cheap_division):
            return (a, tuple(e))
        e = list(e)
        for i, s in enumerate(self.inverted):
            while e[i] > 0:
                q = B.divide_exact(a, s)
                if q is None:
                    break
                a = q
                e[i] -= 1
        return (a, tuple(e))

    def normalize(self, x):
        if self.is_zero(x):
            return self.zero
        return self._norm(x[0], x[1], force=True)

    def from_base(self, payload):
        return (payload, (0,) * self.k)

    def adopt_payload(self, x, source: Ring | None = None):
        """Bring a payload from the base or from a node with fewer inverted elements."""
        if source is self.base or (source is None and not _is_node_payload(x)):
            return (x, (0,) * self.k)
        a, e = x
        if len(e) > self.k:
            if any(e[self.k:]):
                raise PreconditionViolated("element has denominators not inverted here")
            e = e[: self.k]
        return (a, tuple(e) + (0,) * (self.k - len(e)))

    def adopt(self, p: Polynomial) -> Polynomial:
        src = p.ring
        if src is self.base or src == self.base:
            return Polynomial.raw(self, [(c, (0,) * self.k) for c in p.coeffs])
        return Polynomial.raw(self, [self.adopt_payload(c, src) for c in p.coeffs])

    def adopt_elem(self, x: Elem) -> Elem:
        return Elem(self, self.adopt_payload(x.v, x.ring))

    def clean(self, p: Polynomial) -> Polynomial:
        """Replace zero coefficients by literal zeros and normalize the rest."""
        return Polynomial.raw(self, [self.normalize(c) for c in p.coeffs])

    def to_base(self, x):
        """Base payload for an element without denominators (None otherwise)."""
        a, e = self.normalize(x) if any(x[1]) else x
        return a if not any(e) else None

    # arithmetic -----------------------------------------------------------------
    def add(self, x, y):
        (a, ea), (b, eb) = x, y
        B = self.base
        if ea == eb:
            return self._norm(B.add(a, b), ea)
        if B.literal_zero(a):
            return y
        if B.literal_zero(b):
            return x
        e = tuple(max(i, j) for i, j in zip(ea, eb))
        a2 = B.mul(a, self._mono([i - j for i, j in zip(e, ea)]))
        b2 = B.mul(b, self._mono([i - j for i, j in zip(e, eb)]))
        return self._norm(B.add(a2, b2), e)

    def neg(self, x):
        return (self.base.neg(x[0]), x[1])

    def mul(self, x, y):
        (a, ea), (b, eb) = x, y
        B = self.base
        if B.literal_zero(a) or B.literal_zero(b):
            return self.zero
        return self._norm(B.mul(a, b), tuple(i + j for i, j in zip(ea, eb)))

    def literal_zero(self, x):
        return self.base.literal_zero(x[0])

    def is_zero(self, x):
        a = x[0]
        B = self.base
        if B.literal_zero(a):
            return True
        key = a if B.canonical else None
        if key is not None and key in self._zero_cache:
            return self._zero_cache[key]
        z = B.radical_member(B.mul(a, self.U), self.radical_gens)
        if key is not None:
            self._zero_cache[key] = z
        return z

    def eq(self, x, y):
        return self.is_zero(self.sub(x, y))

    def from_int(self, n):
        return (self.base.from_int(n), (0,) * self.k)

    def var(self, name):
        return (self.base.var(name), (0,) * self.k)

    def fmt(self, x):
        B = self.base
        a, e = x
        if not any(e):
            return B.fmt(a)
        den = "*".join(
            _paren(B.fmt(s)) + (f"^{k}" if k > 1 else "") for s, k in zip(self.inverted, e) if k
        )
        return f"({B.fmt(a)})/({den})"

    # division -------------------------------------------------------------------
    def inverse(self, x, max_power: int = MAX_INVERSE_POWER):
        if self.is_zero(x):
            return self.zero if self.is_trivial() else None
        B = self.base
        a, e = x
        t = B.one
        for m in range(max_power + 1):
            q = B.divide_exact(t, a)
            if q is not None:
                return self._norm(B.mul(q, self._mono(e)), (m,) * self.k)
            if not self.k:
                return None
            t = B.mul(t, self.U)
        return None

    def divide(self, x, y, max_power: int = MAX_INVERSE_POWER):
        """q with x = y*q in this ring (searching over denominators), or None."""
        if self.is_zero(y):
            return self.zero if self.is_zero(x) else None
        B = self.base
        (a, ea), (b, eb) = x, y
        t = a
        for k in range(max_power + 1):
            q = B.divide_exact(t, b)
            if q is not None:
                return self._norm(B.mul(q, self._mono(eb)), tuple(i + k for i in ea))
            if not self.k:
                break
            t = B.mul(t, self.U)
        return None

    divide_exact = divide

    def branch_element(self, x):
        """Normalized base payload to branch on so that x becomes invertible."""
        B = self.base
        a = x[0]
        for s in self.inverted:
            if B.inverse(s) is not None:
                continue
            for _ in range(MAX_INVERSE_POWER):
                if B.literal_zero(a):
                    break
                q = B.divide_exact(a, s)
                if q is None or B.eq(q, a):
                    break
                a = q
        return B.squarefree(a)

    def nzd_split(self, x, y):
        if not (self.has(Cap.WITHOUT_ZERO_DIVISORS) or self.pf_mode):
            raise UnsupportedCapability(f"{self.name} is not flagged without zero divisors")
        if not self.is_zero(self.mul(x, y)):
            raise PreconditionViolated("nzd_split needs x*y = 0")
        if self.is_zero(x):
            return LEFT
        if self.is_zero(y):
            return RIGHT
        if self.pf_mode and not self.radical_gens:
            B = self.base
            u = pf_split(Elem(B, B.mul(x[0], self.U)), Elem(B, y[0]))
            raise NeedsSplit(u.v)
        raise PreconditionViolated(f"{self.name}: nonzero factors with zero product")


def _is_node_payload(x):
    return isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], tuple) and all(isinstance(i, int) for i in x[1])


def _paren(s: str) -> str:
    return f"({s})" if D._compound(s) else s


def branch(node: NodeRing, a, allow_degenerate: bool = False):
    """(node[1/a], node/sqrt<a>) for a base payload or element `a`."""
    if isinstance(a, Elem):
        a = a.v[0] if a.ring is node else a.v
    if not allow_degenerate and node.is_zero(node.from_base(a)):
        raise DegenerateBranch("branch element is zero in this node")
    return node.localize(a), node.with_radical(a)


# ---------------------------------------------------------------------------
# gcd trees

INTERNAL, LEAF, TRIVIAL, BOTHZERO = "internal", "leaf", "trivial", "bothzero"


@dataclass
class LeafCert:
    """Bézout data at a leaf: A*P1 + B*Q1 = 1, P = G*P1, Q = G*Q1, G monic."""

    ring: NodeRing
    P: Polynomial
    Q: Polynomial
    G: Polynomial
    P1: Polynomial
    Q1: Polynomial
    A: Polynomial
    B: Polynomial

    def checks(self) -> dict:
        one = Polynomial.raw(self.ring, (self.ring.one,))
        return {
            "G monic": self.G.is_monic(),
            "A*P1 + B*Q1 = 1": (self.A * self.P1 + self.B * self.Q1 - one).is_zero(),
            "P = G*P1": (self.P - self.G * self.P1).is_zero(),
            "Q = G*Q1": (self.Q - self.G * self.Q1).is_zero(),
        }

    def verify(self) -> bool:
        return all(self.checks().values())


@dataclass
class TreeNode:
    ring: NodeRing
    path: str
    kind: str
    branch: object = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    cert: LeafCert | None = None
    witness: Polynomial | None = None

    def leaves(self):
        if self.kind == INTERNAL:
            yield from self.left.leaves()
            yield from self.right.leaves()
        else:
            yield self

    def nodes(self):
        yield self
        if self.kind == INTERNAL:
            yield from self.left.nodes()
            yield from self.right.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


@dataclass
class GcdTree:
    root: TreeNode
    P: Polynomial
    Q: Polynomial

    @property
    def root_ring(self) -> NodeRing:
        return self.root.ring

    def leaves(self):
        return list(self.root.leaves())

    def nontrivial_leaves(self):
        return [l for l in self.leaves() if l.kind != TRIVIAL]


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise ResourceLimit(f"gcd tree exceeded {self.limit} nodes")


def _unit_step(ring: NodeRing, lc: Elem):
    if ring.inverse(lc.v, max_power=4) is not None:
        return ("same", ring)
    t = ring.branch_element(lc.v)
    right = ring.with_radical(t)
    if right.is_trivial():
        return ("unit", ring.localize(t))
    return ("branch", t, ring.localize(t), right)


def _force_monic(ring, p: Polynomial) -> Polynomial:
    c = list(p.coeffs)
    c[-1] = ring.one
    return Polynomial.trusted(ring, c)


def gcd_tree(P: Polynomial, Q: Polynomial, root: NodeRing | None = None, budget: int | None = None) -> GcdTree:
    """Dynamic Euclid on (P, Q), branching on leading coefficients."""
    base = P.ring.base if isinstance(P.ring, NodeRing) else P.ring
    if root is None:
        root = P.ring if isinstance(P.ring, NodeRing) else NodeRing(base)
    P0, Q0 = root.adopt(P), root.adopt(Q)
    bud = _Budget(node_budget() if budget is None else budget)
    one = Polynomial.raw(root, (root.one,))
    zero = Polynomial(root)
    tree_root = _run(root, "", [P0, Q0, P0, one, zero, Q0, zero, one], bud)
    return GcdTree(tree_root, P0, Q0)


def _run(ring: NodeRing, path: str, state, bud: _Budget) -> TreeNode:
    bud.tick()
    if ring.is_trivial():
        return TreeNode(ring, path, TRIVIAL)
    state = [ring.adopt(p) for p in state]
    P, Q, r0, s0, t0, r1, s1, t1 = state
    while True:
        if r1.is_zero() and r0.is_zero():
            return TreeNode(ring, path, BOTHZERO, witness=Polynomial(ring))
        if r1.is_zero() or r0.degree < r1.degree:
            if r1.is_zero():
                lead = r0
            else:
                r0, s0, t0, r1, s1, t1 = r1, s1, t1, r0, s0, t0
                continue
        else:
            lead = r1
        step = _unit_step(ring, lead.lc)
        if step[0] == "branch":
            _, t, left, right = step
            node = TreeNode(ring, path, INTERNAL, branch=t)
            cur = [P, Q, r0, s0, t0, r1, s1, t1]
            node.left = _run(_with_path(left, path + "0"), path + "0", cur, bud)
            node.right = _run(_with_path(right, path + "1"), path + "1", cur, bud)
            return node
        if step[0] == "unit":
            ring = _with_path(step[1], path)
            P, Q, r0, s0, t0, r1, s1, t1 = [ring.adopt(p) for p in (P, Q, r0, s0, t0, r1, s1, t1)]
            lead = r1 if not r1.is_zero() else r0
        inv = Elem(ring, ring.inverse(lead.lc.v))
        if r1.is_zero():
            G = _force_monic(ring, ring.clean(r0 * inv))
            A, B = ring.clean(s0 * inv), ring.clean(t0 * inv)
            P1 = ring.clean(monic_divmod(P, G, exact=True)[0])
            Q1 = ring.clean(monic_divmod(Q, G, exact=True)[0])
            cert = LeafCert(ring, P, Q, G, P1, Q1, A, B)
            if not cert.verify():
                raise AssertionError(f"leaf certificate failed at {path or 'root'}: {cert.checks()}")
            return TreeNode(ring, path, LEAF, cert=cert)
        m = _force_monic(ring, r1 * inv)
        q, r = monic_divmod(r0, m)
        q = q * inv
        r0, s0, t0, r1, s1, t1 = r1, s1, t1, ring.clean(r), ring.clean(s0 - q * s1), ring.clean(t0 - q * t1)


def _with_path(ring: NodeRing, path: str) -> NodeRing:
    ring.path = path
    return ring


# ---------------------------------------------------------------------------
# witnesses at leaves and the collapse


def leaf_witness(cert: LeafCert, rel: IntegralRelation) -> Polynomial:
    """H with P = Q*H in the leaf ring, from the Bézout data and the relation.

    Dividing the relation by G^n gives P1^n = Q1*K; expanding
    1 = (A*P1 + B*Q1)^n gives 1 = Q1*(A^n*K + E), so Q1 is a unit with an
    explicit inverse V and H = V*P1.
    """
    L = cert.ring
    n = rel.n
    us = [L.adopt(u) for u in rel.coefficients]
    P1, Q1, A, B = cert.P1, cert.Q1, cert.A, cert.B
    K = Polynomial(L)
    for i, u in enumerate(us, start=1):
        K = K - u * Q1 ** (i - 1) * P1 ** (n - i)
    E = Polynomial(L)
    AP1 = A * P1
    for j in range(1, n + 1):
        E = E + (AP1 ** (n - j) * B ** j * Q1 ** (j - 1)).scale(comb(n, j))
    V = L.clean(A ** n * K + E)
    one = Polynomial.raw(L, (L.one,))
    if not (Q1 * V - one).is_zero():
        raise NotNormalWitnessFailure("leaf inverse of Q1 did not verify; is the relation valid?")
    H = L.clean(V * P1)
    if not (cert.Q * H - cert.P).is_zero():
        raise NotNormalWitnessFailure("leaf witness does not satisfy P = Q*H")
    return H


@dataclass
class CollapsedToParent:
    H1: Polynomial


class _BranchElementZero:
    def __repr__(self):
        return "BranchElementZero"


BranchElementZero = _BranchElementZero()


def lift_witness(child: NodeRing, parent: NodeRing, H: Polynomial):
    """(N, H') over `parent` with a^N * H = H' where a is the last inverted element of `child`."""
    k = parent.k
    N = max((c[1][k] for c in H.coeffs), default=0)
    a = child.inverted[k]
    B = parent.base
    out = []
    for num, e in H.coeffs:
        out.append((B.mul(num, B.pow(a, N - e[k])), e[:k]))
    return N, Polynomial.raw(parent, out)


def collapse_step(parent: NodeRing, a, witness, rel: IntegralRelation, P: Polynomial, Q: Polynomial):
    """From a^N*P = Q*H over `parent`, get P = Q*H1 there, or certify a = 0."""
    N, H = witness
    B = parent.base
    a = a.v if isinstance(a, Elem) else a
    a_el = Elem(parent, parent.from_base(a))
    if a_el.is_zero():
        return BranchElementZero
    P, Q, H = parent.adopt(P), parent.adopt(Q), parent.adopt(H)
    c = a_el ** N
    diff = P * c - Q * H
    for d in diff.coeffs:
        if not parent.is_zero(d):
            # the identity holds after inverting a, so a*d = 0 (reduced ring)
            if parent.nzd_split(a_el.v, d) == LEFT:
                return BranchElementZero
    from .kronecker import ideal_integral_divide

    n = rel.n
    us = [parent.adopt(u) for u in rel.coefficients]
    ycoeffs = [None] * (n + 1)
    ycoeffs[n] = Polynomial.raw(parent, (parent.one,))
    for i, u in enumerate(us, start=1):
        ycoeffs[n - i] = u * c ** i
    M = BiPolynomial(parent, ycoeffs)
    if nzd_poly_split(Q ** n, M.eval_y(H)) == LEFT:
        if not P.is_zero():
            raise PreconditionViolated("Q = 0 but P != 0 although P^n = 0")
        return CollapsedToParent(Polynomial(parent))
    H1 = parent.clean(ideal_integral_divide(H, c, M, cofactors=us))
    rest = P - Q * H1
    for d in rest.coeffs:
        if parent.nzd_split(c.v, d) == LEFT:
            return BranchElementZero
    return CollapsedToParent(H1)


def _leftmost_path(node: TreeNode):
    path = [node]
    while node.kind == INTERNAL:
        node = node.left
        path.append(node)
    return path


def _replace(root: TreeNode, path: str, new: TreeNode) -> TreeNode:
    if root.path == path:
        return new
    nxt = path[len(root.path)]
    if nxt == "0":
        return replace(root, left=_replace(root.left, path, new))
    return replace(root, right=_replace(root.right, path, new))


def graft(node: TreeNode, drop_index: int, depth: int) -> TreeNode:
    """Re-home a subtree after its branch element turned out to be zero.

    The radical generator at `drop_index` is dropped (it was zero anyway) and
    the path character at `depth` is removed.
    """
    ring = node.ring.drop_radical(drop_index)
    ring.path = node.path[:depth] + node.path[depth + 1:]
    new = TreeNode(ring, ring.path, node.kind, branch=node.branch)
    if node.witness is not None:
        new.witness = Polynomial.raw(ring, node.witness.coeffs)
    if node.kind == INTERNAL:
        new.left = graft(node.left, drop_index, depth)
        new.right = graft(node.right, drop_index, depth)
    return new


def _prepare(node: TreeNode, rel: IntegralRelation) -> TreeNode:
    if node.kind == INTERNAL:
        return replace(node, left=_prepare(node.left, rel), right=_prepare(node.right, rel))
    if node.kind == LEAF:
        return replace(node, witness=leaf_witness(node.cert, rel))
    return replace(node, witness=Polynomial(node.ring))


def collapse_tree(tree: GcdTree, rel: IntegralRelation) -> Polynomial:
    """H1 over the tree's root ring with P = Q*H1, by leftmost-branch induction."""
    root_ring = tree.root_ring
    P, Q = tree.P, tree.Q
    work = _prepare(tree.root, rel)
    base_k = root_ring.k
    while True:
        chain = _leftmost_path(work)
        leaf = chain[-1]
        parent = chain[-2] if len(chain) > 1 else None
        target_k = parent.ring.k if parent is not None else base_k
        ring, H = leaf.ring, leaf.witness
        grafted = False
        while ring.k > target_k:
            prev = ring.truncate(ring.k - 1)
            a = ring.inverted[-1]
            N, Hp = lift_witness(ring, prev, H)
            res = collapse_step(prev, a, (N, Hp), rel, P, Q)
            if res is BranchElementZero:
                if parent is not None and prev.k == target_k:
                    depth = len(parent.path)
                    new_sub = graft(parent.right, len(parent.ring.radical_gens), depth)
                    work = _replace(work, parent.path, new_sub)
                    grafted = True
                    break
                # a unit-appended element vanished: `prev` is the trivial ring
                H = Polynomial(prev)
            else:
                H = res.H1
            ring = prev
        if grafted:
            continue
        if parent is None:
            return Polynomial.raw(root_ring, [root_ring.adopt_payload(c, ring) for c in H.coeffs])
        collapsed = TreeNode(parent.ring, parent.path, LEAF, witness=Polynomial.raw(parent.ring, H.coeffs))
        work = _replace(work, parent.path, collapsed)
