from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynnorm import ZZ, QQ, IntegralRelation, Polynomial, Product, QuadInt, UnivarPoly
from dynnorm.errors import RelationInvalid, UnsupportedCapability
from dynnorm.normality import (
    membership_witness_domain,
    membership_witness_nzd,
    membership_witness_pf,
    pseudo_divmod,
    verify_integral_relation,
)
from dynnorm.rings import LEFT, RIGHT, normality_witness
from dynnorm.tree import NodeRing

from _instances import domain_backends, membership_instance, power_relation, rand_elem, rand_poly

X = Polynomial.x(ZZ)
BACKENDS = domain_backends()


def test_nzd_examples():
    Q, H = 2 * X + 3, X ** 2 - 1
    P = Q * H
    rel = IntegralRelation(2, [-2 * H, H * H])
    assert verify_integral_relation(P, Q, rel)
    assert membership_witness_nzd(P, Q, rel).H1 == H
    P = X ** 3 - 4 * X
    one = Polynomial.const(ZZ, 1)
    assert membership_witness_nzd(P, one, IntegralRelation(1, [-P])).H1 == P
    zero = Polynomial(ZZ)
    assert membership_witness_nzd(zero, Q, IntegralRelation(1, [zero])).H1.is_zero()


def test_domain_examples():
    assert membership_witness_domain(6 * X ** 2, 2 * X, IntegralRelation(1, [-3 * X])).H1 == 3 * X
    P = X ** 3 + 5
    assert pseudo_divmod(P * X, X)[0] == 0 or pseudo_divmod(P * X, X)[1] == P
    assert membership_witness_domain(P * X, X, IntegralRelation(1, [-P])).H1 == P
    R = UnivarPoly(QQ, "t")
    t = R("t")
    Y = Polynomial.x(R)
    P = Y.scale(t * t + 1)
    assert membership_witness_domain(P, Y, IntegralRelation(1, [-Polynomial.const(R, t * t + 1)])).H1 == Polynomial.const(R, t * t + 1)


def test_verify_integral_relation_examples():
    one = Polynomial.const(ZZ, 1)
    assert not verify_integral_relation(X, X ** 2, IntegralRelation(1, [-one]))
    P, Q, H, rel = membership_instance(ZZ, random.Random(1), k=2)
    assert verify_integral_relation(P, Q, rel)


def test_invalid_relation_rejected():
    one = Polynomial.const(ZZ, 1)
    with pytest.raises(RelationInvalid):
        membership_witness_nzd(X, X ** 2, IntegralRelation(1, [-one]))
    with pytest.raises(RelationInvalid):
        membership_witness_domain(X, X ** 2, IntegralRelation(1, [-one]))


def test_capability_gates():
    R = Product([ZZ, ZZ])
    P = Polynomial.x(R)
    with pytest.raises(UnsupportedCapability):
        membership_witness_nzd(P, P, IntegralRelation(1, [Polynomial.const(R, -1)]))
    with pytest.raises(UnsupportedCapability):
        membership_witness_domain(P, P, IntegralRelation(1, [Polynomial.const(R, -1)]))


def test_pf_examples():
    R = Product([ZZ, ZZ])
    e = R.elem((1, 0))
    x = Polynomial.x(R)
    P, Q = x * x * e, x * e
    rel = IntegralRelation(1, [-x])
    w, cert = membership_witness_pf(P, Q, rel)
    assert cert.summation_holds() and cert.verify(P, Q)
    assert w.verify(P, Q)
    assert w.H1 == x * e
    # P = Q gives H1 = 1 whatever the splits
    w, _ = membership_witness_pf(Q, Q, IntegralRelation(1, [Polynomial.const(R, -1)]))
    assert w.verify(Q, Q)


def test_pf_degenerates_on_domains():
    Q, H = 2 * X + 3, X - 4
    w, cert = membership_witness_pf(Q * H, Q, power_relation(Q * H, Q, H, 1))
    assert len(cert.elements) == 1 and cert.elements[0] == ZZ(1)
    assert w.H1 == H


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(3)))
def test_oracle_equivalence(seed, which):
    R = BACKENDS[which]
    P, Q, H, rel = membership_instance(R, random.Random(seed))
    a = membership_witness_nzd(P, Q, rel).H1
    b = membership_witness_domain(P, Q, rel).H1
    assert a == b == H


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([ZZ, UnivarPoly(QQ, "t")]))
def test_unit_scaling(seed, R):
    rng = random.Random(seed)
    P, Q, H, rel = membership_instance(R, rng)
    w = R(-1) if R is ZZ else R(rng.choice([2, -3, "1/5"]))
    winv = R.elem(R.inverse(w.v))
    rel2 = IntegralRelation(rel.n, [A * winv ** i for i, A in enumerate(rel.coefficients, start=1)])
    H1 = membership_witness_nzd(P, Q * w, rel2).H1
    assert H1 == membership_witness_nzd(P, Q, rel).H1 * winv


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pf_random_products(seed):
    rng = random.Random(seed)
    R = Product([ZZ, ZZ]) if seed % 2 else Product([ZZ, ZZ, ZZ])
    P, Q, H, rel = membership_instance(R, rng, max_deg=3)
    w, cert = membership_witness_pf(P, Q, rel)
    assert cert.summation_holds() and cert.verify(P, Q)
    assert w.verify(P, Q)


# localization lemmas ---------------------------------------------------------------


def _nonzero(R, rng):
    while True:
        x = R.elem(rand_elem(R, rng))
        if not x.is_zero():
            return x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(3)), st.sampled_from([1, 2]))
def test_localized_normality_lifts(seed, which, k):
    """c integral over <b> in R[1/a] gives a^N c in <b> in R."""
    R = BACKENDS[which]
    rng = random.Random(seed)
    a, b = _nonzero(R, rng), _nonzero(R, rng)
    L = NodeRing(R, (a.v,))
    e = rng.randint(0, 3)
    h = L.elem((R.elem(rand_elem(R, rng)).v, (e,)))
    bL = L.elem(L.from_base(b.v))
    c = bL * h
    rel = IntegralRelation(k, [(-h) ** i * comb(k, i) for i in range(1, k + 1)])
    q = normality_witness(c, bL, rel)
    num, (N,) = q.v
    c_num, (Nc,) = c.v
    # c = c_num / a^Nc and c = b * num / a^N, so a^(N + Nc) c lies in <b> over R
    lhs = R.elem(c_num) * a ** N
    assert lhs == b * R.elem(num) * a ** Nc


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(3)))
def test_localization_has_no_zero_divisors(seed, which):
    R = BACKENDS[which]
    rng = random.Random(seed)
    a = _nonzero(R, rng)
    L = NodeRing(R, (a.v,))
    v = L.elem((_nonzero(R, rng).v, (rng.randint(0, 2),)))
    zero = L.elem(L.zero)
    if rng.random() < 0.5:
        assert L.nzd_split(zero.v, v.v) == LEFT
    else:
        assert L.nzd_split(v.v, zero.v) == RIGHT
