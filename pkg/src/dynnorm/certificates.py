"""JSON certificates for solver outputs.

A certificate is {"kind", "ring", "payload"}; elements are strings in the
backend's own syntax, localized elements are {"num", "exps"} over the node's
inverted elements, and polynomials are ascending coefficient lists.
"""
from __future__ import annotations

import json

from .etale import Decomposition, RfWitness
from .kronecker import IntegralCert
from .normality import ComaximalCert, MembershipWitness
from .poly import Polynomial, QuotientAlg
from .rings import Elem, IntegralRelation, Ring
from .tree import BOTHZERO, LEAF, TRIVIAL, GcdTree, LeafCert, NodeRing


def enc_elem(ring: Ring, payload):
    if isinstance(ring, NodeRing):
        num, exps = payload
        return {"num": ring.base.fmt(num), "exps": list(exps)}
    if isinstance(ring, QuotientAlg):
        return enc_poly(ring.lift(payload))
    return ring.fmt(payload)


def enc_poly(p: Polynomial) -> list:
    return [enc_elem(p.ring, c) for c in p.coeffs]


def _e(x: Elem):
    return enc_elem(x.ring, x.v)


def _S(x: Elem) -> list:
    """A quotient-algebra element as its base polynomial representative."""
    return enc_poly(x.ring.lift(x))


def certificate(kind: str, ring: Ring, payload: dict) -> dict:
    return {"kind": kind, "ring": ring.spec(), "payload": payload}


def bundle(certs) -> dict:
    return {"kind": "Bundle", "certificates": list(certs)}


def leaf_cert(cert: LeafCert, path: str = "") -> dict:
    pl = {k: enc_poly(getattr(cert, k)) for k in ("P", "Q", "G", "P1", "Q1", "A", "B")}
    pl["path"] = path
    return certificate("LeafCert", cert.ring, pl)


def gcd_tree_cert(tree: GcdTree) -> dict:
    leaves = []
    for leaf in tree.leaves():
        item = {"path": leaf.path, "kind": leaf.kind, "ring": leaf.ring.spec(), "describe": leaf.ring.describe()}
        if leaf.kind == LEAF:
            item["cert"] = leaf_cert(leaf.cert, leaf.path)["payload"]
            item["G"] = str(leaf.cert.G)
        elif leaf.kind == BOTHZERO:
            item["P"] = enc_poly(leaf.ring.adopt(tree.P))
            item["Q"] = enc_poly(leaf.ring.adopt(tree.Q))
        leaves.append(item)
    return certificate("GcdTree", tree.root_ring.base, {"leaves": leaves})


def integral_cert(cert: IntegralCert) -> dict:
    ring = cert.subject.ring
    pl = {
        "subject": _e(cert.subject),
        "modulus": _e(cert.modulus),
        "coefficients": [_e(u) for u in cert.coefficients],
    }
    wf = cert.weighted
    if wf is not None:
        pl["weighted"] = {
            "names": list(wf.names),
            "weights": list(wf.weights),
            "values": [_e(v) for v in wf.values],
            "polys": [[[list(e), str(c)] for e, c in sorted(p.items())] for p in wf.polys],
            "subject_weight": wf.subject_weight,
        }
    return certificate("IntegralCert", ring, pl)


def membership_cert(w: MembershipWitness, P: Polynomial, Q: Polynomial, rel: IntegralRelation | None = None) -> dict:
    pl = {"P": enc_poly(P), "Q": enc_poly(Q), "H1": enc_poly(w.H1)}
    if w.denominators is not None:
        u, N = w.denominators
        pl["denominators"] = {"u": _e(u), "N": N}
    if rel is not None:
        pl["relation"] = [enc_poly(A if isinstance(A, Polynomial) else Polynomial.const(P.ring, A)) for A in rel.coefficients]
    return certificate("MembershipWitness", P.ring, pl)


def comaximal_cert(cert: ComaximalCert, P: Polynomial, Q: Polynomial, H1: Polynomial | None = None) -> dict:
    pl = {
        "P": enc_poly(P),
        "Q": enc_poly(Q),
        "elements": [_e(u) for u in cert.elements],
        "N": cert.N,
        "coefficients": [_e(c) for c in cert.coefficients],
        "witnesses": [enc_poly(H) for H in cert.witnesses],
    }
    if H1 is not None:
        pl["H1"] = enc_poly(H1)
    return certificate("ComaximalCert", P.ring, pl)


def tate_formula_cert(v: Elem, lhs: Elem, rhs: Elem, traces) -> dict:
    S = v.ring
    pl = {"mode": "formula", "f": enc_poly(S.f), "v": _S(v), "lhs": _S(lhs), "rhs": _S(rhs), "traces": [_e(t) for t in traces]}
    return certificate("TateWitness", S.base, pl)


def tate_lemma_cert(v: Elem, a: Elem, rel: IntegralRelation, w: Elem) -> dict:
    S = v.ring
    pl = {
        "mode": "lemma",
        "f": enc_poly(S.f),
        "v": _S(v),
        "a": _e(a),
        "w": _S(w),
        "relation": [_S(S(u) if not isinstance(u, Elem) else u) for u in rel.coefficients],
    }
    return certificate("TateWitness", S.base, pl)


def rf_cert(w: RfWitness, rel: IntegralRelation) -> dict:
    S = w.w.ring
    pl = {
        "f": enc_poly(w.f),
        "p": _S(w.p),
        "q": _S(w.q),
        "w": _S(w.w),
        "N": w.N,
        "D": w.D,
        "extra": [_S(e) for e in w.extra],
        "relation": [_S(u) for u in rel.map(lambda u: u if isinstance(u, Elem) and u.ring == S else _lift_S(S, u)).coefficients],
    }
    return certificate("RfWitness", S.base, pl)


def _lift_S(S: QuotientAlg, u) -> Elem:
    if isinstance(u, Polynomial):
        return S.of(u)
    if isinstance(u, Elem) and u.ring == S.base:
        return Elem(S, S.embed(u.v))
    return S(u)


def decomposition_cert(dec: Decomposition) -> dict:
    def rf(z):
        s, N = z.v
        return {"num": enc_poly(dec.ring.S.lift(s)), "N": N}

    pl = {
        "f": enc_poly(dec.f),
        "g": enc_poly(dec.g),
        "f1": enc_poly(dec.f1),
        "e1": rf(dec.e1),
        "e2": rf(dec.e2),
        "trivial": dec.trivial,
    }
    return certificate("Decomposition", dec.f.ring, pl)


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2)


def to_dot(tree: GcdTree) -> str:
    """Graphviz rendering of a gcd tree."""
    lines = ["digraph gcdtree {", "  node [shape=box];"]

    def name(node):
        return '"n' + (node.path or "root") + '"'

    def walk(node):
        label = node.ring.describe()
        if node.kind == LEAF:
            label += f"\\ngcd = {node.cert.G}"
        elif node.kind in (TRIVIAL, BOTHZERO):
            label += f"\\n{node.kind}"
        else:
            label += f"\\nbranch on {node.ring.base.fmt(node.branch)}"
        lines.append(f'  {name(node)} [label="{label}"];')
        for side, child in (("0", node.left), ("1", node.right)):
            if child is not None:
                lines.append(f'  {name(node)} -> {name(child)} [label="{side}"];')
                walk(child)

    walk(tree.root)
    lines.append("}")
    return "\n".join(lines)
