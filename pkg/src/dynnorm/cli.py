"""Command-line front end: `dynnorm <command> ...`."""
from __future__ import annotations

import argparse
import json
import sys

from . import certificates as C
from .errors import DynnormError, ParseError
from .etale import TateData, rf_normality_witness, tate_formula, tate_lemma_witness, trace_matrix
from .kronecker import kronecker_cert
from .normality import membership_witness_domain, membership_witness_nzd, membership_witness_pf
from .poly import Polynomial, QuotientAlg
from .rings import IntegralRelation, parse_ring_spec
from .tree import LEAF, gcd_tree
from .verify import verify

GENERIC_AB_RING = {"ring": "MPolyQ", "vars": ["a", "b"]}


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc}") from exc


def _inputs(args) -> dict:
    data = {}
    if getattr(args, "input", None):
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
        data = _load_json(text, "input file")
    for key in ("ring", "p", "q", "f", "g", "v", "a", "rel", "extra"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = _load_json(val, f"--{key}")
    if "ring" not in data:
        raise ParseError("no ring given (use --ring or an input file)")
    return data


def _poly(ring, data, key) -> Polynomial:
    if key not in data:
        raise ParseError(f"missing polynomial {key!r}")
    items = data[key]
    if not isinstance(items, list):
        raise ParseError(f"{key} must be a list of coefficients, lowest degree first")
    return Polynomial.parse(ring, items)


def _relation(ring, data) -> IntegralRelation:
    if "rel" not in data:
        raise ParseError("missing relation 'rel' (list of coefficient polynomials A_1..A_n)")
    return IntegralRelation(len(data["rel"]), [Polynomial.parse(ring, A) for A in data["rel"]])


def _emit(args, cert):
    text = C.dumps(cert)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_gcdtree(args) -> int:
    data = _inputs(args)
    R = parse_ring_spec(data["ring"])
    tree = gcd_tree(_poly(R, data, "p"), _poly(R, data, "q"))
    if args.dot:
        print(C.to_dot(tree))
    else:
        _emit(args, C.gcd_tree_cert(tree))
    return 0


def cmd_witness(args) -> int:
    data = _inputs(args)
    R = parse_ring_spec(data["ring"])
    P, Q = _poly(R, data, "p"), _poly(R, data, "q")
    rel = _relation(R, data)
    if args.command == "witness-pf":
        w, cert = membership_witness_pf(P, Q, rel)
        _emit(args, C.comaximal_cert(cert, P, Q, w.H1))
        return 0
    fn = membership_witness_domain if args.command == "witness-domain" else membership_witness_nzd
    _emit(args, C.membership_cert(fn(P, Q, rel), P, Q, rel))
    return 0


def cmd_kronecker(args) -> int:
    data = _inputs(args)
    R = parse_ring_spec(data["ring"])
    certs = kronecker_cert(_poly(R, data, "g"), _poly(R, data, "f"))
    _emit(args, C.bundle(C.integral_cert(c) for c in certs))
    return 0


def cmd_tate(args) -> int:
    data = _inputs(args)
    R = parse_ring_spec(data["ring"])
    S = QuotientAlg(R, _poly(R, data, "f"))
    v = S.of(_poly(R, data, "v"))
    if "a" in data:
        a = R(data["a"])
        rel = IntegralRelation(len(data.get("rel", [])), [S.of(Polynomial.parse(R, u)) for u in data.get("rel", [])])
        w = tate_lemma_witness(v, a, rel)
        _emit(args, C.tate_lemma_cert(v, a, rel, w))
        return 0
    lhs, rhs = tate_formula(v)
    traces = [trace_matrix(S.of(g) * v) for g in TateData.of(S.f).g]
    _emit(args, C.tate_formula_cert(v, lhs, rhs, traces))
    return 0


def cmd_rf(args) -> int:
    data = _inputs(args)
    R = parse_ring_spec(data["ring"])
    f = _poly(R, data, "f")
    S = QuotientAlg(R, f)
    rel = IntegralRelation(len(data.get("rel", [])), [S.of(Polynomial.parse(R, u)) for u in data.get("rel", [])])
    extra = [S.of(Polynomial.parse(R, e)) for e in data.get("extra", [])]
    w = rf_normality_witness(_poly(R, data, "p"), _poly(R, data, "q"), rel, f, extra)
    _emit(args, C.rf_cert(w, rel))
    return 0


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    rep = verify(_load_json(text, "certificate"))
    print(rep)
    return 0 if rep.ok else 1


def cmd_selftest(args) -> int:
    R = parse_ring_spec(GENERIC_AB_RING)
    X = Polynomial.x(R)
    tree = gcd_tree(X ** 2, X * R("a") + R("b"))
    leaves = tree.nontrivial_leaves()
    for leaf in leaves:
        G = leaf.cert.G if leaf.kind == LEAF else "0"
        print(f"S_{leaf.path or 'root'}: {leaf.ring.describe()}  gcd = {G}")
    rep = verify(C.gcd_tree_cert(tree))
    expected = {"00": "1", "01": "X", "10": "1", "11": "X^2"}
    got = {leaf.path: str(leaf.cert.G) for leaf in leaves if leaf.kind == LEAF}
    ok = rep.ok and got == expected
    print("selftest:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynnorm", description="Dynamical gcd trees and constructive normality witnesses.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *keys):
        p.add_argument("--input", help="JSON file with the inputs ('-' for stdin)")
        p.add_argument("--ring", help="ring spec as JSON")
        for k in keys:
            p.add_argument(f"--{k}", help=f"{k} as JSON")
        p.add_argument("--out", help="write the certificate here instead of stdout")

    p = sub.add_parser("gcdtree", help="dynamic gcd tree of P and Q")
    common(p, "p", "q")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p.set_defaults(func=cmd_gcdtree)
    for name, text in (
        ("witness", "P = Q*H1 over a ring without zero divisors"),
        ("witness-pf", "P = Q*H1 over a normal ring, with comaximal gluing"),
        ("witness-domain", "P = Q*H1 through the fraction field"),
    ):
        p = sub.add_parser(name, help=text)
        common(p, "p", "q", "rel")
        p.set_defaults(func=cmd_witness)
    p = sub.add_parser("kronecker", help="integrality certificates for the coefficients of g | f")
    common(p, "g", "f")
    p.set_defaults(func=cmd_kronecker)
    p = sub.add_parser("tate", help="Tate's formula, or the divided form with --a and --rel")
    common(p, "f", "v", "a", "rel")
    p.set_defaults(func=cmd_tate)
    p = sub.add_parser("rf-witness", help="p in <q> in R{f}")
    common(p, "f", "p", "q", "rel", "extra")
    p.set_defaults(func=cmd_rf)
    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("file", help="certificate JSON ('-' for stdin)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("selftest", help="run the X^2, aX+b example end to end")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DynnormError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ParseError.exit_code


if __name__ == "__main__":
    sys.exit(main())
