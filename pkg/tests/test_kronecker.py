from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.polyfuncs import symmetrize as sympy_symmetrize

from dynnorm import ZZ, QQ, Polynomial, UnivarPoly
from dynnorm.errors import MissingWeightedForm, NotMonic, NotNormalWitnessFailure, NotSymmetric, OrbitTooLarge
from dynnorm.grobner import MPoly
from dynnorm.kronecker import (
    IntegralCert,
    WeightedForm,
    elementary,
    ideal_integral_divide,
    kronecker_cert,
    orbit_polynomials,
    splitting_tower,
    symmetrize,
    weighted_homogeneity_check,
)
from dynnorm.poly import BiPolynomial

X = Polynomial.x(ZZ)


def gen(n, i):
    return MPoly.gen(n, i)


def test_tower_examples():
    T = splitting_tower(X ** 2 - 5 * X + 6)
    assert T.rank == 2 and len(T.stages) == 2
    x1, x2 = gen(2, 0), gen(2, 1)
    assert T.is_constant(T.normal_form(x1 + x2)) == ZZ(5)
    assert T.is_constant(T.normal_form(x1 * x2)) == ZZ(6)
    assert T.is_constant(T.root(0)) is None
    S1 = T.rings[0]
    assert T.stages[1] == Polynomial.x(S1) - (S1(5) - S1.root())
    T = splitting_tower(X - 7)
    assert T.is_constant(T.root(0)) == ZZ(7)
    T = splitting_tower(X ** 2 - 2)
    assert T.is_constant(T.normal_form(gen(2, 0) ** 2)) == ZZ(2)
    with pytest.raises(NotMonic):
        splitting_tower(2 * X)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
def test_tower_product_identity(coeffs):
    T = splitting_tower(Polynomial(ZZ, coeffs + [1]))
    assert T.product_identity()


def test_symmetrize_examples():
    x1, x2 = gen(2, 0), gen(2, 1)
    e1, e2 = gen(2, 0), gen(2, 1)
    assert symmetrize(x1 ** 2 + x2 ** 2) == e1 ** 2 - 2 * e2
    for k in (1, 2):
        assert symmetrize(elementary(2, k)) == gen(2, k - 1)
    assert symmetrize(gen(3, 0) * gen(3, 1) * gen(3, 2)) == gen(3, 2)
    with pytest.raises(NotSymmetric):
        symmetrize(x1)


def test_symmetrize_against_sympy():
    rng = random.Random(2)
    xs = sympy.symbols("x1:4")
    for _ in range(15):
        # random symmetric polynomial: a sum of orbit sums of random monomials
        s = MPoly.const(3, 0)
        for _ in range(2):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            c = rng.randint(-3, 3)
            for perm in set(itertools.permutations(e)):
                s = s + MPoly(3, {perm: c})
        ours = symmetrize(s)
        expr = sum(c * sympy.Mul(*(x ** k for x, k in zip(xs, e))) for e, c in s.terms.items())
        sym, rem, defs = sympy_symmetrize(expr, *xs, formal=True)
        assert rem == 0
        back = sym.subs(dict(defs))
        check = sum(
            c * sympy.Mul(*(sympy.Add(*[sympy.Mul(*S) for S in itertools.combinations(xs, k + 1)]) ** d for k, d in enumerate(exps)))
            for exps, c in ours.terms.items()
        )
        assert sympy.expand(check - back) == 0


def test_kronecker_examples():
    g, f = X - 3, X ** 2 - 5 * X + 6
    (cert,) = kronecker_cert(g, f)
    assert cert.subject == ZZ(-3)
    assert cert.coefficients == [ZZ(5), ZZ(6)]
    assert cert.weighted.polys == [{(1, 0): -1}, {(0, 1): 1}]
    assert cert.relation_holds() and weighted_homogeneity_check(cert)
    certs = kronecker_cert(f, f)
    assert len(certs) == 2 and all(c.relation_holds() for c in certs)
    assert kronecker_cert(Polynomial.const(ZZ, 1), f) == []


def test_weighted_check_examples():
    (cert,) = kronecker_cert(X - 3, X ** 2 - 5 * X + 6)
    wf = cert.weighted
    bad = IntegralCert(cert.subject, cert.modulus, cert.coefficients, WeightedForm(wf.names, wf.weights, wf.values, [{(0, 1): 1}, wf.polys[1]]))
    assert not weighted_homogeneity_check(bad)
    empty = IntegralCert(ZZ(0), ZZ(1), [], WeightedForm([], [], [], []))
    assert weighted_homogeneity_check(empty)
    with pytest.raises(MissingWeightedForm):
        weighted_homogeneity_check(IntegralCert(ZZ(0), ZZ(1), []))


def test_orbit_cap():
    with pytest.raises(OrbitTooLarge):
        orbit_polynomials(8, 4, 1)
    with pytest.raises(OrbitTooLarge):
        orbit_polynomials(6, 3, 1, max_orbit=10)


def _charpoly_from_roots(roots, m, k):
    """Coefficients of prod over m-subsets S of (Z - (-1)^k e_k(S))."""
    Z = sympy.Symbol("Z")
    expr = 1
    for S in itertools.combinations(roots, m):
        ek = sum(math.prod(T) for T in itertools.combinations(S, k))
        expr *= Z - (-1) ** k * ek
    return [int(c) for c in sympy.Poly(sympy.expand(expr), Z).all_coeffs()[1:]]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5), st.data())
def test_orbit_polynomials_match_roots(roots, data):
    n = len(roots)
    m = data.draw(st.integers(1, n))
    k = data.draw(st.integers(1, m))
    f = sympy.Poly(math.prod(sympy.Symbol("X") - r for r in roots), sympy.Symbol("X"))
    b = [int(c) for c in f.all_coeffs()[1:]]
    ours = [sum(c * math.prod(bj ** e for bj, e in zip(b, exps)) for exps, c in p.items()) for p in orbit_polynomials(n, m, k)]
    assert ours == _charpoly_from_roots(roots, m, k)


def _random_factorization(rng, max_deg=6, bound=9):
    while True:
        m = rng.randint(1, 5)
        d = rng.randint(1, max_deg - m) if m < max_deg else 0
        if d == 0:
            continue
        g = Polynomial(ZZ, [rng.randint(-3, 3) for _ in range(m)] + [1])
        h = Polynomial(ZZ, [rng.randint(-3, 3) for _ in range(d)] + [1])
        f = g * h
        if math.comb(f.degree, m) <= 20 and all(abs(int(c)) <= bound for c in f.coeffs):
            return g, h, f


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kronecker_certs_vanish_and_are_weighted(seed):
    g, h, f = _random_factorization(random.Random(seed))
    certs = kronecker_cert(g, f, h)
    assert len(certs) == g.degree
    for cert in certs:
        assert cert.relation_holds() and cert.values_match()
        assert weighted_homogeneity_check(cert)


def test_scaling_coherence():
    """t^n f(X/t) multiplies the coefficient of degree i by t^(i*k)."""
    R = UnivarPoly(QQ, "t")
    t = R("t")
    rng = random.Random(9)
    for _ in range(10):
        g, h, f = _random_factorization(rng, max_deg=5)
        scale = lambda p: Polynomial(R, [R(int(c)) * t ** (p.degree - i) for i, c in enumerate(p.coeffs)])
        plain = kronecker_cert(g.map(R, lambda c: R(int(c)).v), f.map(R, lambda c: R(int(c)).v))
        scaled = kronecker_cert(scale(g), scale(f))
        for k, (c0, c1) in enumerate(zip(plain, scaled), start=1):
            for i, (u0, u1) in enumerate(zip(c0.coefficients, c1.coefficients), start=1):
                assert u1 == u0 * t ** (i * k)


def test_ideal_integral_divide_examples():
    H = 2 * X + 4
    c = ZZ(2)
    A = [Polynomial(ZZ), -((X + 2) ** 2)]
    M = BiPolynomial(ZZ, [A[1] * 4, Polynomial(ZZ), Polynomial.const(ZZ, 1)])
    assert ideal_integral_divide(H, c, M) == X + 2
    assert ideal_integral_divide(H, c, M, cofactors=A, certify=True) == X + 2
    one = Polynomial.const(ZZ, 1)
    assert ideal_integral_divide(H, ZZ(1), BiPolynomial(ZZ, [-H, one])) == H
    zero = Polynomial(ZZ)
    assert ideal_integral_divide(zero, c, BiPolynomial(ZZ, [zero, one])) == zero
    # the relation Y - (3X + 4) does not put 3X + 4 in <2>
    bad = 3 * X + 4
    with pytest.raises(NotNormalWitnessFailure):
        ideal_integral_divide(bad, c, BiPolynomial(ZZ, [-bad, one]))
