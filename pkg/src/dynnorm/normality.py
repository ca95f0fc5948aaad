"""P = Q*H1 in R[X] from an integral relation of P over <Q>.

Three routes: the gcd tree for rings without zero divisors, the same tree
with lazy pf splits and comaximal gluing for general normal rings, and plain
pseudo-division for domains (used as an independent oracle).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    NeedsSplit,
    NotComaximal,
    NotNormalWitnessFailure,
    PreconditionViolated,
    RelationInvalid,
    ResourceLimit,
)
from .kronecker import ideal_integral_divide
from .poly import BiPolynomial, Polynomial
from .rings import Cap, Elem, IntegralRelation, Ring, comaximal_coefficients
from .tree import NodeRing, collapse_tree, gcd_tree

MAX_PF_BRANCHES = 256


@dataclass
class MembershipWitness:
    """u^N * P = Q * H1 (plain P = Q * H1 when `denominators` is None)."""

    H1: Polynomial
    denominators: tuple | None = None

    def verify(self, P: Polynomial, Q: Polynomial) -> bool:
        lhs = P
        if self.denominators is not None:
            u, N = self.denominators
            lhs = P * (u ** N)
        return (lhs - Q * self.H1).is_zero()


@dataclass
class ComaximalCert:
    """sum c_i u_i^N = 1 and u_i^N * P = Q * H_i for every i."""

    elements: list
    N: int
    coefficients: list
    witnesses: list = field(default_factory=list)

    def summation_holds(self) -> bool:
        total = self.elements[0].ring(0)
        for c, u in zip(self.coefficients, self.elements):
            total = total + c * u ** self.N
        return (total - 1).is_zero()

    def verify(self, P: Polynomial, Q: Polynomial) -> bool:
        if not self.summation_holds():
            return False
        return all(
            (P * (u ** self.N) - Q * H).is_zero() for u, H in zip(self.elements, self.witnesses)
        )

    def glue(self) -> Polynomial:
        ring = self.elements[0].ring
        H1 = Polynomial(ring)
        for c, H in zip(self.coefficients, self.witnesses):
            H1 = H1 + H * c
        return H1


def _as_relation(P: Polynomial, rel) -> IntegralRelation:
    R = P.ring

    def lift(u):
        if isinstance(u, Polynomial):
            if u.ring != R:
                raise RelationInvalid("relation coefficients live over another ring")
            return u
        return Polynomial.const(R, u)

    if not isinstance(rel, IntegralRelation):
        rel = IntegralRelation(len(rel), rel)
    return rel.map(lift)


def verify_integral_relation(P: Polynomial, Q: Polynomial, rel) -> bool:
    """Does P^n + A_1 Q P^(n-1) + ... + A_n Q^n vanish?"""
    try:
        rel = _as_relation(P, rel)
    except RelationInvalid:
        return False
    return rel.holds(P, Q)


def _checked(P: Polynomial, Q: Polynomial, rel) -> IntegralRelation:
    if P.ring != Q.ring:
        raise PreconditionViolated("P and Q live over different rings")
    rel = _as_relation(P, rel)
    if not rel.holds(P, Q):
        raise RelationInvalid("integral relation does not expand to zero")
    return rel


def _to_base(H: Polynomial, base: Ring) -> Polynomial:
    ring = H.ring
    out = []
    for c in H.coeffs:
        v = ring.to_base(c)
        if v is None:
            raise NotNormalWitnessFailure("witness kept a denominator at the root")
        out.append(v)
    return Polynomial.raw(base, out)


def membership_witness_nzd(P: Polynomial, Q: Polynomial, rel, budget: int | None = None) -> MembershipWitness:
    """Gcd tree, unit-Q1 witnesses at the leaves, then the collapse."""
    R = P.ring
    R.require(Cap.NORMAL, Cap.WITHOUT_ZERO_DIVISORS, what="membership_witness_nzd")
    rel = _checked(P, Q, rel)
    tree = gcd_tree(P, Q, budget=budget)
    H1 = _to_base(collapse_tree(tree, rel), R)
    w = MembershipWitness(H1)
    if not w.verify(P, Q):
        raise NotNormalWitnessFailure("collapsed witness does not satisfy P = Q*H1")
    return w


def pseudo_divmod(P: Polynomial, Q: Polynomial):
    """(e, H, r) with lc(Q)^e * P = Q*H + r and deg r < deg Q."""
    R = P.ring
    if Q.is_zero():
        raise PreconditionViolated("pseudo-division by zero")
    lq = Q.lc
    n = Q.degree
    H = Polynomial(R)
    r = P
    e = 0
    while not r.is_zero() and r.degree >= n:
        k = r.degree - n
        mono = Polynomial.raw(R, [R.zero] * k + [r.lc.v])
        r = r * lq - Q * mono
        H = H * lq + mono
        e += 1
    return e, H, r


def membership_witness_domain(P: Polynomial, Q: Polynomial, rel) -> MembershipWitness:
    """Divide over the fraction field, clear the denominator c, then divide H by c."""
    R = P.ring
    R.require(Cap.NORMAL, Cap.DOMAIN, what="membership_witness_domain")
    rel = _checked(P, Q, rel)
    if Q.is_zero():
        # P^n = 0 in a domain
        return MembershipWitness(Polynomial(R))
    e, H, r = pseudo_divmod(P, Q)
    if not r.is_zero():
        raise NotNormalWitnessFailure("P is not a multiple of Q over the fraction field")
    c = Q.lc ** e
    # c^n * rel / Q^n gives H^n + sum A_i c^i H^(n-i) = 0
    n = rel.n
    ycoeffs = [None] * (n + 1)
    ycoeffs[n] = Polynomial.const(R, 1)
    for i, A in enumerate(rel.coefficients, start=1):
        ycoeffs[n - i] = A * c ** i
    M = BiPolynomial(R, ycoeffs)
    H1 = ideal_integral_divide(H, c, M, cofactors=rel.coefficients)
    w = MembershipWitness(H1)
    if not w.verify(P, Q):
        raise NotNormalWitnessFailure("domain route witness does not satisfy P = Q*H1")
    return w


# ---------------------------------------------------------------------------
# pf path


def _clear_denominators(H: Polynomial, base: Ring, P: Polynomial, Q: Polynomial):
    """(u, N, H') over the base with u^N * P = Q * H', u the product of the inverted elements."""
    ring: NodeRing = H.ring
    u = Elem(base, ring.U)
    N = max((max(e, default=0) for _, e in H.coeffs), default=0)
    out = []
    for a, e in H.coeffs:
        out.append(base.mul(a, ring._mono(tuple(N - x for x in e))))
    Hb = Polynomial.raw(base, out)
    for _ in range(64):
        if (P * (u ** N) - Q * Hb).is_zero():
            return u, N, Hb
        # the identity holds after inverting u, so a power of u kills the defect
        N += 1
        Hb = Hb * u
    raise NotNormalWitnessFailure("local witness does not lift to the base ring")


class PfDriver:
    """Run a computation over base[1/v] and fork on every NeedsSplit."""

    def __init__(self, base: Ring, max_branches: int = MAX_PF_BRANCHES):
        self.base = base
        self.max_branches = max_branches
        self.splits = []

    def run(self, task):
        """`task(root)` for every leaf of the split tree; returns [(root, result)]."""
        B = self.base
        pending = [()]
        done = []
        visited = 0
        while pending:
            V = pending.pop(0)
            root = NodeRing(B, V, pf_mode=True)
            if root.is_trivial():
                continue
            visited += 1
            if visited > self.max_branches:
                raise ResourceLimit(f"pf path exceeded {self.max_branches} branches")
            try:
                done.append((root, task(root)))
            except NeedsSplit as s:
                self.splits.append((V, s.u))
                pending.extend([V + (s.u,), V + (B.sub(B.one, s.u),)])
        return done


def glue(base: Ring, locals_, P: Polynomial, Q: Polynomial) -> ComaximalCert:
    """Combine local witnesses u_j^(N_j) P = Q H_j into a comaximal certificate."""
    if not locals_:
        raise NotComaximal("every branch was trivial; the ring is zero")
    N = max(Nj for _, Nj, _ in locals_)
    us, Hs = [], []
    for u, Nj, H in locals_:
        us.append(u)
        Hs.append(H * (u ** (N - Nj)))
    cs = comaximal_coefficients([u ** N for u in us])
    return ComaximalCert(us, N, cs, Hs)


def membership_witness_pf(P: Polynomial, Q: Polynomial, rel, budget: int | None = None):
    """(MembershipWitness, ComaximalCert) over a normal ring, zero divisors allowed."""
    B = P.ring
    B.require(Cap.NORMAL, what="membership_witness_pf")
    rel = _checked(P, Q, rel)
    driver = PfDriver(B)

    def task(root):
        return collapse_tree(gcd_tree(P, Q, root=root, budget=budget), rel)

    locals_ = [_clear_denominators(H, B, P, Q) for _, H in driver.run(task)]
    cert = glue(B, locals_, P, Q)
    if not cert.verify(P, Q):
        raise NotNormalWitnessFailure("local witnesses failed to verify")
    w = MembershipWitness(cert.glue())
    if not w.verify(P, Q):
        raise NotNormalWitnessFailure("glued witness does not satisfy P = Q*H1")
    return w, cert
