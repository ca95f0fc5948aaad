from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynnorm import ZZ, QQ, IntegralRelation, Polynomial, UnivarPoly
from dynnorm.errors import NotMonic, PreconditionViolated, RelationInvalid
from dynnorm.etale import (
    AIsZero,
    InR,
    RfRing,
    TateData,
    crucial_factor,
    fprime,
    localized,
    rf_decompose,
    rf_normality_witness,
    tate_formula,
    tate_lemma_witness,
    trace_matrix,
    trace_split,
)
from dynnorm.poly import QuotientAlg
from dynnorm.rings import normality_witness

X = Polynomial.x(ZZ)
ACCEPT_F = [X ** 2 - 2, X ** 2 + 1, X ** 2 - 5 * X + 6, X ** 3 - 2]


def S_of(f):
    return QuotientAlg(f.ring, f)


def test_trace_examples():
    S = S_of(X ** 2 - 2)
    x = S.root()
    assert trace_matrix(x) == ZZ(0) == trace_split(x)
    assert trace_matrix(x * x) == ZZ(4) == trace_split(x * x)
    S3 = S_of(X ** 3 - 2)
    assert trace_matrix(S3(1)) == ZZ(3) == trace_split(S3(1))


def test_tate_examples():
    S = S_of(X ** 2 - 2)
    x = S.root()
    lhs, rhs = tate_formula(x)
    assert lhs == rhs == S(4)
    assert tate_formula(S(0)) == (S(0), S(0))
    S1 = S_of(X - 7)
    v = S1(5)
    lhs, rhs = tate_formula(v)
    assert lhs == rhs == v
    assert TateData.of(X ** 3 - 2 * X + 1).expands()


def test_tate_lemma_examples():
    S = S_of(X ** 2 - 2)
    x = S.root()
    one = S(1)
    w = tate_lemma_witness(x * x, 2, IntegralRelation(1, [-one]))
    assert w == 2 * x
    v = x + 3
    assert tate_lemma_witness(v, 1, IntegralRelation(1, [-v])) == fprime(S) * v
    assert tate_lemma_witness(S(0), 2, IntegralRelation(1, [S(0)])) == S(0)
    with pytest.raises(RelationInvalid):
        tate_lemma_witness(x, 2, IntegralRelation(1, [-one]))


def _basis_and_random(S, rng, k):
    x = S.root()
    yield from (x ** j for j in range(S.n))
    for _ in range(k):
        yield S.of(Polynomial(S.base, [rng.randint(-9, 9) for _ in range(S.n)]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5), st.integers(0, 10 ** 6))
def test_traces_agree_over_z(coeffs, seed):
    S = S_of(Polynomial(ZZ, coeffs + [1]))
    for v in _basis_and_random(S, random.Random(seed), 2):
        assert trace_matrix(v) == trace_split(v)
        lhs, rhs = tate_formula(v)
        assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_traces_agree_over_qt(seed):
    rng = random.Random(seed)
    R = UnivarPoly(QQ, "t")
    t = R("t")
    n = rng.randint(1, 4)
    f = Polynomial(R, [t * rng.randint(-3, 3) + rng.randint(-3, 3) for _ in range(n)] + [R(1)])
    S = S_of(f)
    for v in [S.root() ** j for j in range(n)] + [S.of(Polynomial(R, [t ** rng.randint(0, 2) * rng.randint(-3, 3) for _ in range(n)]))]:
        assert trace_matrix(v) == trace_split(v)
        lhs, rhs = tate_formula(v)
        assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(4)), st.integers(1, 6))
def test_tate_lemma_random(seed, which, a):
    rng = random.Random(seed)
    S = S_of(ACCEPT_F[which])
    u = S.of(Polynomial(ZZ, [rng.randint(-5, 5) for _ in range(S.n)]))
    v = u * a
    w = tate_lemma_witness(v, a, IntegralRelation(1, [-u]))
    assert fprime(S) * v == w * a


# crucial factors ----------------------------------------------------------------


def test_crucial_examples():
    g = localized(ZZ, 2, [(-2, 1), (1, 0)])
    f1 = localized(ZZ, 2, [(0, 1), (1, 0)])
    res = crucial_factor(X ** 2 - X, g, f1)
    assert isinstance(res, InR) and res.g == X - 1 and res.f1 == X
    g = localized(ZZ, 2, [(-2, 1), (1, 0)])
    res = crucial_factor(X ** 2 - 2 * X + 1, g, g)
    assert res.g == X - 1 and res.f1 == X - 1
    g = localized(ZZ, 0, [(1, 0), (1, 0)])
    assert crucial_factor(X ** 2 + 2 * X + 1, g, g) is AIsZero


def test_crucial_with_deep_denominators():
    # (X - 3)(X + 5) presented with denominators 4
    g = localized(ZZ, 2, [(-12, 2), (1, 0)])
    f1 = localized(ZZ, 2, [(40, 3), (1, 0)])
    res = crucial_factor((X - 3) * (X + 5), g, f1)
    assert res.g == X - 3 and res.f1 == X + 5


# decompositions -------------------------------------------------------------------


def test_decompose_split_quadratic():
    dec = rf_decompose(X ** 2 - 5 * X + 6, X - 2, X - 3)
    assert dec.verify() and not dec.trivial
    assert dec.morphism_checks()


def test_decompose_rejections():
    with pytest.raises(PreconditionViolated):
        rf_decompose(X ** 2 - 1, X ** 2 - 1, Polynomial.const(ZZ, 1))
    with pytest.raises(PreconditionViolated):
        rf_decompose(X ** 2 - 1, X - 1, X - 2)
    with pytest.raises(NotMonic):
        rf_decompose(X ** 2 - 1, 2 * X - 1, X - 2)


def test_decompose_double_root_is_trivial():
    dec = rf_decompose(X ** 2, X, X)
    assert dec.trivial and dec.ring.is_trivial()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=2), st.lists(st.integers(-4, 4), min_size=1, max_size=2))
def test_decompose_random(gc, hc):
    g, f1 = Polynomial(ZZ, gc + [1]), Polynomial(ZZ, hc + [1])
    dec = rf_decompose(g * f1, g, f1)
    assert dec.verify()
    if not dec.trivial:
        assert dec.morphism_checks()


# normality of R{f} ---------------------------------------------------------------


def test_rf_examples():
    f = X ** 2 - 2
    S = S_of(f)
    x = S.root()
    rel = IntegralRelation(2, [S(0), S(-2)])
    w = rf_normality_witness(S(2), x, rel, f, shortcut=True)
    assert (w.w, w.N, w.D) == (x, 0, 0)
    w = rf_normality_witness(S(2), x, rel, f)
    assert w.verify()
    p = x * 3 + 1
    w = rf_normality_witness(p, S(1), IntegralRelation(1, [-p]), f, shortcut=True)
    assert w.w == p and w.N == 0
    w = rf_normality_witness(S(0), x, IntegralRelation(1, [S(0)]), f)
    assert w.w == S(0)


def test_rf_bad_relation():
    f = X ** 2 - 2
    S = S_of(f)
    with pytest.raises(RelationInvalid):
        rf_normality_witness(S(1), S.root(), IntegralRelation(1, [S(-1)]), f)


def rf_instance(f, rng, k=None):
    S = S_of(f)
    rnd = lambda: S.of(Polynomial(ZZ, [rng.randint(-4, 4) for _ in range(S.n)]))
    q, w = rnd(), rnd()
    p = q * w
    k = k or rng.choice([1, 2])
    coeffs = [(-w) ** i * comb(k, i) for i in range(1, k + 1)]
    return S, p, q, IntegralRelation(k, coeffs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(4)))
def test_rf_random(seed, which):
    f = ACCEPT_F[which]
    S, p, q, rel = rf_instance(f, random.Random(seed))
    res = rf_normality_witness(p, q, rel, f)
    assert res.verify()
    assert fprime(S) ** res.N * res.d() ** res.D * p == q * res.w


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rf_split_case_matches_componentwise_division(seed):
    f = X ** 2 - 5 * X + 6
    S, p, q, rel = rf_instance(f, random.Random(seed))
    res = rf_normality_witness(p, q, rel, f)
    for r in (2, 3):
        at = lambda z: S.lift(z).eval(ZZ(r))
        qr, pr = at(q), at(p)
        if qr.is_zero():
            continue
        rr = rel.map(lambda u: at(u))
        base = normality_witness(pr, qr, rr)
        scale = at(fprime(S)) ** res.N * at(res.d()) ** res.D
        assert at(res.w) == base * scale


def test_rf_proper_factorization_paths():
    for f, q in ((X ** 2 - 5 * X + 6, X - 2), ((X - 1) * (X - 2) * (X + 3), (X - 1) * (X + 3))):
        S = S_of(f)
        qS = S.of(q)
        wS = S.root() + 4
        p = qS * wS
        res = rf_normality_witness(p, qS, IntegralRelation(1, [-wS]), f)
        assert res.verify()


def test_rf_ring_zero_test():
    f = X ** 2 - 5 * X + 6
    S = S_of(f)
    Rf = RfRing(S)
    x = S.root()
    # (x - 2)(x - 3) = 0 in S, and neither factor is zero in R{f}
    assert not Rf.of(x - 2).is_zero() and (Rf.of(x - 2) * Rf.of(x - 3)).is_zero()
    assert not RfRing(S_of(X ** 2 - 2)).is_trivial()
    assert RfRing(S_of(X ** 2)).is_trivial()
