from __future__ import annotations

import random
from fractions import Fraction

import flint
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynnorm import ZZ, Polynomial, QuadInt, UnivarPoly, QQ, collapse_tree, gcd_tree
from dynnorm.errors import DegenerateBranch, ResourceLimit
from dynnorm.rings import parse_ring_spec
from dynnorm.tree import BOTHZERO, LEAF, TRIVIAL, BranchElementZero, CollapsedToParent, NodeRing, branch, collapse_step

from _instances import power_relation, rand_poly

QAB = parse_ring_spec({"ring": "MPolyQ", "vars": ["a", "b"]})


def test_branch_examples():
    node = NodeRing(ZZ)
    left, right = branch(node, 2)
    assert left.describe() == "Z[1/2]" and right.describe() == "Z/sqrt<2>"
    qnode = NodeRing(QAB)
    left, right = branch(qnode, QAB("a"))
    assert left.describe() == "Q[a,b][1/a]"
    assert right.describe() == "Q[a,b]/sqrt<a>"
    left, right = branch(node, 1)
    assert not left.is_trivial() and right.is_trivial()
    with pytest.raises(DegenerateBranch):
        branch(right, 5)


def test_two_parameter_example_tree():
    X = Polynomial.x(QAB)
    tree = gcd_tree(X ** 2, X * QAB("a") + QAB("b"))
    leaves = {l.path: l for l in tree.nontrivial_leaves()}
    assert set(leaves) == {"00", "01", "10", "11"}
    assert {p: str(l.cert.G) for p, l in leaves.items()} == {"00": "1", "01": "X", "10": "1", "11": "X^2"}
    assert leaves["00"].ring.describe() == "Q[a,b][1/a,1/b]"
    assert leaves["11"].ring.describe() == "Q[a,b]/sqrt<a,b>"
    for leaf in leaves.values():
        assert leaf.kind == LEAF and leaf.cert.verify()
    # the leftmost leaf is a pure localization
    assert not leaves["00"].ring.radical_gens


def test_integer_specialization():
    X = Polynomial.x(ZZ)
    tree = gcd_tree(X ** 2, 2 * X + 3)
    leaves = {l.path: l for l in tree.nontrivial_leaves()}
    G = {p: str(l.cert.G) for p, l in leaves.items()}
    assert sorted(G.values()) == ["1", "1", "X"]
    assert all(l.cert.verify() for l in leaves.values())
    # the left leaf inverts both 2 and 3, so it is Z[1/6]
    left = leaves[min(leaves)]
    assert left.ring.k == 2 and set(left.ring.inverted) == {2, 3}


def test_monic_q_single_leaf():
    X = Polynomial.x(ZZ)
    tree = gcd_tree(X ** 3 - 1, X - 1)
    assert len(tree.leaves()) == 1 and tree.leaves()[0].cert.verify()


def test_both_zero_leaf():
    zero = Polynomial(ZZ)
    tree = gcd_tree(zero, zero)
    assert [l.kind for l in tree.leaves()] == [BOTHZERO]


def test_budget():
    X = Polynomial.x(QAB)
    with pytest.raises(ResourceLimit):
        gcd_tree(X ** 2, X * QAB("a") + QAB("b"), budget=2)


def test_collapse_step_examples():
    X = Polynomial.x(ZZ)
    parent = NodeRing(ZZ)
    P, Q = 2 * X ** 2, X
    rel = power_relation(P, Q, 2 * X, 1)
    res = collapse_step(parent, 1, (0, parent.adopt(2 * X)), rel, P, Q)
    assert isinstance(res, CollapsedToParent) and res.H1 == parent.adopt(2 * X)
    P, Q = 4 * X ** 2, 2 * X
    rel = power_relation(P, Q, 2 * X, 1)
    res = collapse_step(parent, 2, (0, parent.adopt(2 * X)), rel, P, Q)
    assert res.H1 == parent.adopt(2 * X)
    zero = Polynomial(ZZ)
    res = collapse_step(parent, 2, (0, parent.adopt(zero)), power_relation(zero, zero, zero, 1), zero, zero)
    assert res.H1.is_zero()
    # over Z/sqrt<2> a = 2 is zero
    right = NodeRing(ZZ, radical_gens=(2,))
    assert collapse_step(right, 2, (1, right.adopt(X)), rel, P, Q) is BranchElementZero


def _collapse(P, Q, rel):
    return collapse_tree(gcd_tree(P, Q), rel)


def test_collapse_examples():
    X = Polynomial.x(ZZ)
    H = _collapse(X ** 3 - 1, X - 1, power_relation(X ** 3 - 1, X - 1, X ** 2 + X + 1, 1))
    assert H == (X ** 2 + X + 1).map(H.ring, lambda c: H.ring.from_base(c)) or str(H) == "X^2 + X + 1"
    Q = 2 * X + 3
    P = Q * X ** 2
    H = _collapse(P, Q, power_relation(P, Q, X ** 2, 1))
    assert str(H) == "X^2"
    zero = Polynomial(ZZ)
    assert _collapse(zero, Q, power_relation(zero, Q, zero, 1)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([ZZ, QuadInt(-5), UnivarPoly(QQ, "t")]), st.sampled_from([1, 2]))
def test_collapse_recovers_quotient(seed, R, k):
    rng = random.Random(seed)
    Q = rand_poly(R, rng, 3, nonzero=True)
    H = rand_poly(R, rng, 3)
    P = Q * H
    H1 = _collapse(P, Q, power_relation(P, Q, H, k))
    root = H1.ring
    assert (root.adopt(Q) * H1 - root.adopt(P)).is_zero()
    assert H1 == root.adopt(H)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_every_leaf_cert_verifies(seed):
    rng = random.Random(seed)
    P, Q = rand_poly(ZZ, rng, 3, 6), rand_poly(ZZ, rng, 3, 6)
    for leaf in gcd_tree(P, Q).leaves():
        if leaf.kind == LEAF:
            assert leaf.cert.verify()
        elif leaf.kind == TRIVIAL:
            assert leaf.ring.is_trivial()


# partition property ------------------------------------------------------------


def _leaf_survives(ring, val):
    return all(val(s) != 0 for s in ring.inverted) and all(val(g) == 0 for g in ring.radical_gens)


def _special_poly(p, ring, val, inv):
    out = []
    for num, exps in p.coeffs:
        c = val(num)
        for s, e in zip(ring.inverted, exps):
            c = c * inv(val(s)) ** e
        out.append(c)
    return out


def _check_partition(tree, val, inv, mk_poly, Pc, Qc):
    alive = [l for l in tree.leaves() if _leaf_survives(l.ring, val)]
    assert len(alive) == 1
    leaf = alive[0]
    g = mk_poly(Pc).gcd(mk_poly(Qc))
    if leaf.kind == BOTHZERO:
        assert g == 0
        return
    assert leaf.kind == LEAF
    G = mk_poly(_special_poly(leaf.cert.G, leaf.ring, val, inv))
    if g != 0:
        g = g * inv(g.coeffs()[-1])
    assert G == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5, 7]))
def test_partition_mod_p(seed, p):
    rng = random.Random(seed)
    P, Q = rand_poly(ZZ, rng, 3, 6), rand_poly(ZZ, rng, 3, 6)
    tree = gcd_tree(P, Q)
    val = lambda x: flint.nmod(int(x), p)
    inv = lambda x: 1 / x
    mk = lambda cs: flint.nmod_poly([int(c) for c in cs], p)
    _check_partition(tree, val, inv, mk, [val(c) for c in P.coeffs], [val(c) for c in Q.coeffs])


def test_partition_at_rational_points():
    X = Polynomial.x(QAB)
    P, Q = X ** 2, X * QAB("a") + QAB("b")
    tree = gcd_tree(P, Q)
    rng = random.Random(5)
    points = [(0, 0), (0, 1), (1, 0), (2, 3)] + [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(10)]
    for pt in points:
        val = lambda m: flint.fmpq(m.evaluate(pt).numerator, m.evaluate(pt).denominator)
        inv = lambda x: 1 / x
        mk = lambda cs: flint.fmpq_poly([c if isinstance(c, flint.fmpq) else val(c) for c in cs])
        _check_partition(tree, val, inv, mk, [val(c) for c in P.coeffs], [val(c) for c in Q.coeffs])
