from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynnorm import ZZ, Polynomial, Product, QuadInt, UnivarPoly, QQ
from dynnorm.errors import ExactDivisionFailed, MixedBackends, NotMonic, PreconditionViolated, UnsupportedCapability
from dynnorm.poly import BiPolynomial, linear_factor_divide, monic_divmod, nzd_poly_split, poly_arith, subresultant_prs
from dynnorm.rings import LEFT, RIGHT

from _instances import domain_backends, rand_poly

X = Polynomial.x(ZZ)


def P(*coeffs, ring=ZZ):
    return Polynomial(ring, list(coeffs))


def test_basic_examples():
    assert (X ** 2 - 2).derivative() == 2 * X
    assert (X ** 2 - 5 * X + 6).eval(ZZ(3)) == ZZ(0)
    assert poly_arith("mul", X - 2, X - 3) == X ** 2 - 5 * X + 6
    assert P(0, 0, 0).is_zero() and P(0, 0, 0).coeffs == ()
    assert P(1, 2, 0).degree == 1


def test_mixed_backends():
    with pytest.raises(MixedBackends):
        poly_arith("add", X, Polynomial.x(QQ))
    with pytest.raises(MixedBackends):
        monic_divmod(X, Polynomial.x(QQ))


def test_monic_divmod_examples():
    assert monic_divmod(X ** 2 - 5 * X + 6, X - 2) == (X - 3, P())
    assert monic_divmod(X ** 2, X - 1) == (X + 1, P(1))
    assert monic_divmod(P(), X) == (P(), P())
    with pytest.raises(NotMonic):
        monic_divmod(X, 2 * X)
    with pytest.raises(ExactDivisionFailed):
        monic_divmod(X ** 2, X - 1, exact=True)


def test_nzd_split_examples():
    assert nzd_poly_split(P(), X + 1) == LEFT
    assert nzd_poly_split(X, P()) == RIGHT
    R = Product([ZZ, ZZ])
    one0 = Polynomial(R, [R.elem((1, 0))])
    zero1 = Polynomial(R, [R.elem((0, 1))])
    with pytest.raises(UnsupportedCapability):
        nzd_poly_split(one0, zero1)
    with pytest.raises(PreconditionViolated):
        nzd_poly_split(X, X)


def test_linear_factor_divide_examples():
    H = 3 * X + 1
    Y2 = Polynomial.const(ZZ, 1)
    zero = P()
    M = BiPolynomial(ZZ, [-(H * H), zero, Y2])
    assert linear_factor_divide(M, H) == BiPolynomial(ZZ, [H, Y2])
    M = BiPolynomial(ZZ, [H * H, -2 * H, Y2])
    assert linear_factor_divide(M, H) == BiPolynomial(ZZ, [-H, Y2])
    with pytest.raises(ExactDivisionFailed):
        linear_factor_divide(M, H + 1)


def test_linear_factor_divide_with_parameter():
    R = UnivarPoly(QQ, "c")
    c = R("c")
    x = Polynomial.x(R)
    H = x.scale(c)
    one = Polynomial.const(R, 1)
    M = BiPolynomial(R, [H * H, -2 * H, one])
    assert linear_factor_divide(M, H) == BiPolynomial(R, [-H, one])


def test_subresultant_examples():
    seq = subresultant_prs(X ** 2 - 1, X - 1)
    assert seq[-1].is_zero()
    assert seq[-2] == X - 1 or seq[-2] == -(X - 1)
    assert subresultant_prs(X, P(1)) == [X, P(1)]
    assert subresultant_prs(X ** 2, X) == [X ** 2, X, P()]
    with pytest.raises(NotMonic):
        subresultant_prs(2 * X, X)


def test_subresultant_last_term_matches_gcd_degree():
    import sympy

    rng = random.Random(3)
    t = sympy.Symbol("t")
    for _ in range(40):
        f = Polynomial(ZZ, [rng.randint(-4, 4) for _ in range(rng.randint(1, 4))] + [1])
        g = rand_poly(ZZ, rng, 3, 4, nonzero=True)
        seq = subresultant_prs(f, g)
        last = [p for p in seq if not p.is_zero()][-1]
        to_sym = lambda p: sum(int(c) * t ** i for i, c in enumerate(p.coeffs))
        gcd = sympy.gcd(to_sym(f), to_sym(g))
        if seq[-1].is_zero():
            assert last.degree == sympy.degree(gcd, t)
        else:
            assert sympy.degree(gcd, t) == 0


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(range(3)))
def test_divmod_round_trip(rng, which):
    R = domain_backends()[which]
    f = rand_poly(R, rng, 5)
    g = rand_poly(R, rng, 3) + Polynomial.x(R) ** 4
    q, r = monic_divmod(f, g)
    assert g * q + r == f
    assert r.is_zero() or r.degree < g.degree


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(range(3)))
def test_derivative_product_rule(rng, which):
    R = domain_backends()[which]
    f, g = rand_poly(R, rng), rand_poly(R, rng)
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(range(3)))
def test_no_zero_divisors_sample(seed, which):
    rng = random.Random(seed)
    R = domain_backends()[which]
    f = rand_poly(R, rng, nonzero=True)
    g = rand_poly(R, rng, nonzero=True)
    assert not (f * g).is_zero()
    assert nzd_poly_split(f * 0, g) == LEFT


def test_json_is_ascending():
    assert (X ** 2 - 2).to_json() == ["-2", "0", "1"] or (X ** 2 - 2).to_json() == [-2, 0, 1]


def test_quadint_eval():
    R = QuadInt(-5)
    w = R("w")
    f = Polynomial(R, [R(5), R(0), R(1)])
    assert f.eval(w).is_zero()
