"""Command-line front end.

Every invocation prints one JSON document.  Value documents carry the hash
of their curve; loading a value against a different curve is an error.
Exit codes: 0 success, 2 domain error, 3 iteration cap reached, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance as ac
from . import curve as cv
from . import divisor as dv
from . import gfcore as gf
from . import morphism as mo
from . import pairing as pr
from . import picard as pc
from . import sampler
from . import torsion as ts
from .gfcore import CapExceededError, DomainError, Subspace

EXIT_OK, EXIT_DOMAIN, EXIT_CAP, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# serialisation


def encode_matrix(F, M):
    return [[F.coeffs(v) for v in row] for row in np.asarray(M, dtype=np.int64)]


def decode_matrix(F, rows, ncols):
    out = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise DomainError("matrix row has the wrong length")
        for j, c in enumerate(row):
            out[i, j] = F.from_coeffs(c)
    return out


def curve_document(X):
    return {
        "type": "curve",
        "curve": X.description(),
        "curve_hash": X.curve_hash,
        "genus": X.g,
        "degL": X.degL,
        "dims": [X.dim(i) for i in range(1, X.h + 1)],
    }


def serialize(value):
    if isinstance(value, pc.PicardElement):
        kind, level, section = "picard", 2, None
    elif isinstance(value, dv.DivisorRep):
        kind, level, section = "divisor", value.level, value.section
    else:
        raise DomainError(f"cannot serialise {type(value).__name__}")
    X = value.curve
    doc = {
        "type": kind,
        "curve": X.description(),
        "curve_hash": X.curve_hash,
        "level": level,
        "ambient": value.space.ambient,
        "basis": encode_matrix(X.k, value.space.basis),
    }
    if section is not None:
        doc["section"] = {"level": section[0], "coeffs": encode_matrix(X.k, [section[1]])[0]}
    return doc


def deserialize(doc, X=None):
    """Value from a document; X (if given) must match the document's curve."""
    if X is None:
        X = cv.from_description(doc["curve"])
    if doc.get("curve_hash") != X.curve_hash:
        raise DomainError("document belongs to a different curve")
    level = int(doc["level"])
    ambient = int(doc["ambient"])
    if ambient != X.dim(level):
        raise DomainError("ambient dimension does not match the level")
    B = decode_matrix(X.k, doc["basis"], ambient)
    space = Subspace.span(X.k, B, ambient)
    if space.dim != B.shape[0] or not np.array_equal(space.basis, B):
        raise DomainError("basis is not in reduced echelon form")
    if doc["type"] == "picard":
        return pc.make_element(X, space)
    if doc["type"] == "divisor":
        section = None
        if "section" in doc:
            s = decode_matrix(X.k, [doc["section"]["coeffs"]], X.dim(int(doc["section"]["level"])))[0]
            section = (int(doc["section"]["level"]), s)
        return dv.DivisorRep(X, level, space, section)
    raise DomainError(f"unknown document type {doc['type']}")


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_curve(path):
    doc = _load_json(path)
    return cv.from_description(doc.get("curve", doc))


def _load_value(path, X):
    return deserialize(_load_json(path), X)


def _load_value_over(path, X):
    """A value whose curve is X or a base change of X."""
    doc = _load_json(path)
    desc = doc["curve"]
    if desc.get("n", 1) == X.k.n:
        return deserialize(doc, X)
    K = gf.Field(int(desc["p"]), desc["field_poly"])
    return deserialize(doc, cv.base_change(X, K))


def _rng(args):
    return np.random.default_rng(args.seed)


# ---------------------------------------------------------------------------
# commands


def cmd_curve_build(args):
    desc = {"kind": args.kind, "p": args.p, "n": args.n, "h": args.h}
    if args.kind == "p1":
        desc["d"] = args.d
    elif args.kind == "elliptic":
        for name in ("a1", "a2", "a3", "a4", "a6"):
            desc[name] = getattr(args, name)
        desc["degL"] = args.degL
    else:
        if not args.f:
            raise DomainError("--f is required for hyperelliptic curves")
        desc["f"] = [int(c) for c in args.f.split(",")]
    return curve_document(cv.from_description(desc))


def _zeta_doc(X):
    Z = cv.zeta_from_point_counts(X)
    return Z, {"q": Z.q, "g": Z.g, "L": list(Z.L), "class_number": cv.class_number(Z), "chi": Z.char_poly()}


def cmd_curve_zeta(args):
    X = _load_curve(args.curve)
    return {"type": "zeta", "curve_hash": X.curve_hash, **_zeta_doc(X)[1]}


def cmd_div_random(args):
    X = _load_curve(args.curve)
    Z = cv.zeta_from_point_counts(X)
    if args.biased:
        D = dv.at_level(sampler.random_divisor_biased(X, args.degree, _rng(args)), args.level)
        return serialize(D)
    m = args.smooth if args.smooth is not None else max(1, args.degree)
    D = sampler.random_divisor(X, sampler.SmoothCountTable(Z), args.degree, m, args.level, _rng(args))
    return serialize(D)


def cmd_div_decompose(args):
    X = _load_curve(args.curve)
    D = _load_value(args.div, X)
    parts = dv.decompose(D, _rng(args))
    return {
        "type": "decomposition",
        "curve_hash": X.curve_hash,
        "parts": [{"degree": p.degree, "multiplicity": p.multiplicity, "prime": serialize(p.prime)} for p in parts],
    }


def cmd_div_add(args):
    X = _load_curve(args.curve)
    D, E = _load_value(args.a, X), _load_value(args.b, X)
    level = args.level or max(D.level, E.level)
    if args.cmd2 == "add":
        return serialize(dv.add_divisors(D, E, level))
    return serialize(dv.subtract_divisors(D, E, level))


def _O(X):
    return dv.infinity_divisor(X, 1, 2)


def cmd_pic(args):
    X = _load_curve(args.curve)
    op = args.cmd2
    if op == "zero":
        return serialize(pc.zero_element(X))
    if op == "point":
        pt = None if args.infinity else (X.k.from_coeffs([args.x]), X.k.from_coeffs([args.y]))
        return serialize(pc.point_class(X, pt))
    if op == "random":
        Z = cv.zeta_from_point_counts(X)
        return serialize(sampler.random_picard_element(X, sampler.SmoothCountTable(Z), _rng(args)))
    x = _load_value(args.x, X)
    if op == "zero-test":
        ok, s = pc.zero_test(x)
        return {
            "type": "zero-test",
            "curve_hash": X.curve_hash,
            "zero": ok,
            "section": encode_matrix(X.k, [s])[0] if ok else None,
        }
    if op == "mul":
        return serialize(pc.scalar_mul(args.n, x))
    if op == "normalize":
        r, space = pc.normalised_representative(x, _O(X))
        doc = serialize(pc.PicardElement(X, space))
        doc["r"] = r
        return doc
    if op == "neg":
        return serialize(pc.neg(x))
    y = _load_value(args.y, X)
    if op == "add":
        return serialize(pc.add(x, y))
    if op == "addflip":
        z, s = pc.addflip(x, y)
        doc = serialize(z)
        doc["section"] = encode_matrix(X.k, [s])[0]
        return doc
    raise UsageError(f"unknown pic operation {op}")


def cmd_pic_frobenius(args):
    X = _load_curve(args.curve)
    x = _load_value_over(args.x, X)
    ctx = sampler.FrobeniusContext(X.k, x.curve.k)
    if args.cmd2 == "frobenius":
        for _ in range(args.power):
            x = sampler.frobenius_point(ctx, x)
        return serialize(x)
    return serialize(sampler.trace(ctx, x, _O(X)))


def _load_morphism(path):
    return mo.FiniteMorphism.from_dict(_load_json(path))


def cmd_map_build(args):
    k = gf.prime_field(args.p)
    if args.kind == "power":
        f = mo.power_map(k, args.d, args.m, args.h)
    elif args.kind == "x":
        f = mo.x_map(k, tuple(args.a), args.h)
    else:
        X = _load_curve(args.curve)
        f = mo.identity_map(X) if args.kind == "identity" else mo.negation_map(X)
    doc = f.to_dict()
    doc.update({"type": "morphism", "degree": f.degree})
    return doc


def cmd_map(args):
    f = _load_morphism(args.morphism)
    op = args.cmd2
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    if op in ("pull", "picard"):
        v = _load_value(args.value, f.target)
        if op == "pull":
            return serialize(mo.pull_back(f, v))
        return serialize(pc.picard_map(f, v))
    v = _load_value(args.value, f.source)
    if op == "image":
        return serialize(mo.image_divisor(f, v))
    if rng is None:
        raise UsageError("--seed is required")
    if op == "push":
        return serialize(mo.push_forward(f, v, rng))
    return serialize(pc.albanese_map(f, v, _O(f.target), rng))


def cmd_pair(args):
    X = _load_curve(args.curve)
    x, y = _load_value(args.x, X), _load_value(args.y, X)
    val, log = pr.frey_ruck(x, y, args.n, _rng(args))
    return {
        "type": "pairing",
        "curve_hash": X.curve_hash,
        "n": args.n,
        "value": X.k.coeffs(val),
        "zeta": X.k.coeffs(pr.root_of_unity(X.k, args.n)),
        "log": log,
    }


def cmd_torsion(args):
    X = _load_curve(args.curve)
    Z, zdoc = _zeta_doc(X)
    rng = _rng(args)
    if args.cmd2 == "basis":
        B = ts.l_torsion_basis(X, Z, args.l, args.alpha, rng, O=_O(X) if args.descend else None)
        return {
            "type": "torsion-basis",
            "curve_hash": X.curve_hash,
            "zeta": zdoc,
            "kummer": B.kummer.factorisation_report(),
            "frobenius_matrix": B.frobenius_matrix,
            "basis": [serialize(z) for z in B.basis],
        }
    pts = [_load_value_over(path, X) for path in args.points]
    Xc = pts[0].curve if pts else X
    rel = ts.find_relations(Xc, pts, args.l, args.alpha, rng, Z=Z)
    return {"type": "relations", "curve_hash": X.curve_hash, "l": args.l, "kernel": rel.vectors}


def cmd_acceptance(args):
    names = list(ac.SUITES) if args.suite == "all" else [args.suite]
    results = [ac.run_suite(name, args.seed) for name in names]
    for r in results:
        print(r.line(), file=sys.stderr)
    return {
        "type": "acceptance",
        "results": [
            {"suite": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3), "limit": r.limit}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    p = _Parser(prog="curvepic", description="Divisors and Picard groups of curves over finite fields")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def seeded(sp, required=True):
        sp.add_argument("--seed", type=int, required=required)

    curve = sub.add_parser("curve").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    b = curve.add_parser("build")
    b.add_argument("--kind", choices=["p1", "elliptic", "hyperelliptic"], required=True)
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--h", type=int, default=7)
    b.add_argument("--d", type=int, default=1)
    for name in ("a1", "a2", "a3", "a4", "a6"):
        b.add_argument(f"--{name}", type=int, default=0)
    b.add_argument("--degL", type=int, default=3)
    b.add_argument("--f", help="comma-separated coefficients, constant term first")
    b.set_defaults(func=cmd_curve_build)
    z = curve.add_parser("zeta")
    z.add_argument("--curve", required=True)
    z.set_defaults(func=cmd_curve_zeta)

    div = sub.add_parser("div").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    r = div.add_parser("random")
    r.add_argument("--curve", required=True)
    r.add_argument("--degree", type=int, required=True)
    r.add_argument("--smooth", type=int, help="largest prime degree allowed (default: the degree)")
    r.add_argument("--biased", action="store_true", help="fast sampler that is not uniform")
    r.add_argument("--level", type=int, default=2)
    seeded(r)
    r.set_defaults(func=cmd_div_random)
    d = div.add_parser("decompose")
    d.add_argument("--curve", required=True)
    d.add_argument("--div", required=True)
    seeded(d)
    d.set_defaults(func=cmd_div_decompose)
    for name in ("add", "sub"):
        a = div.add_parser(name)
        a.add_argument("--curve", required=True)
        a.add_argument("--a", required=True)
        a.add_argument("--b", required=True)
        a.add_argument("--level", type=int)
        a.set_defaults(func=cmd_div_add)

    pic = sub.add_parser("pic").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    for name, inputs in (
        ("zero", ()),
        ("random", ()),
        ("zero-test", ("x",)),
        ("neg", ("x",)),
        ("normalize", ("x",)),
        ("mul", ("x",)),
        ("add", ("x", "y")),
        ("addflip", ("x", "y")),
    ):
        sp = pic.add_parser(name)
        sp.add_argument("--curve", required=True)
        for i in inputs:
            sp.add_argument(f"--{i}", required=True)
        if name == "mul":
            sp.add_argument("--n", type=int, required=True)
        if name == "random":
            seeded(sp)
        sp.set_defaults(func=cmd_pic)
    pt = pic.add_parser("point")
    pt.add_argument("--curve", required=True)
    pt.add_argument("--x", type=int, default=0)
    pt.add_argument("--y", type=int, default=0)
    pt.add_argument("--infinity", action="store_true")
    pt.set_defaults(func=cmd_pic)
    for name in ("frobenius", "trace"):
        sp = pic.add_parser(name, help="the curve file is the curve over the base field")
        sp.add_argument("--curve", required=True)
        sp.add_argument("--x", required=True)
        if name == "frobenius":
            sp.add_argument("--power", type=int, default=1)
        sp.set_defaults(func=cmd_pic_frobenius)

    mp = sub.add_parser("map").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    mb = mp.add_parser("build")
    mb.add_argument("--kind", choices=["power", "x", "identity", "negation"], required=True)
    mb.add_argument("--p", type=int, default=2)
    mb.add_argument("--d", type=int, default=1)
    mb.add_argument("--m", type=int, default=2)
    mb.add_argument("--a", type=int, nargs=5, default=[0, 0, 0, 1, 0])
    mb.add_argument("--h", type=int, default=7)
    mb.add_argument("--curve")
    mb.set_defaults(func=cmd_map_build)
    for name in ("pull", "push", "image", "picard", "albanese"):
        sp = mp.add_parser(name)
        sp.add_argument("--morphism", required=True)
        sp.add_argument("--value", required=True)
        seeded(sp, required=name in ("push", "albanese"))
        sp.set_defaults(func=cmd_map)

    pair = sub.add_parser("pair").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    fr = pair.add_parser("frey-ruck")
    fr.add_argument("--curve", required=True)
    fr.add_argument("--n", type=int, required=True)
    fr.add_argument("--x", required=True)
    fr.add_argument("--y", required=True)
    seeded(fr)
    fr.set_defaults(func=cmd_pair)

    tor = sub.add_parser("torsion").add_subparsers(dest="cmd2", required=True, parser_class=_Parser)
    tb = tor.add_parser("basis")
    tb.add_argument("--curve", required=True)
    tb.add_argument("--l", type=int, required=True)
    tb.add_argument("--alpha", type=float, default=0.9)
    tb.add_argument("--descend", action="store_true", help="descend the basis to the base field")
    seeded(tb)
    tb.set_defaults(func=cmd_torsion)
    tr = tor.add_parser("relations")
    tr.add_argument("--curve", required=True)
    tr.add_argument("--l", type=int, required=True)
    tr.add_argument("--alpha", type=float, default=0.9)
    tr.add_argument("--points", nargs="*", default=[])
    seeded(tr)
    tr.set_defaults(func=cmd_torsion)

    acc = sub.add_parser("acceptance")
    acc.add_argument("suite", choices=list(ac.SUITES) + ["all"])
    acc.add_argument("--seed", type=int, default=0)
    acc.set_defaults(func=cmd_acceptance)
    return p


def run(argv):
    """(exit code, output document)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return EXIT_USAGE, {"error": "usage", "message": str(e)}
    except SystemExit as e:  # --help
        return (EXIT_OK if not e.code else EXIT_USAGE), None
    try:
        return EXIT_OK, args.func(args)
    except UsageError as e:
        return EXIT_USAGE, {"error": "usage", "message": str(e)}
    except CapExceededError as e:
        return EXIT_CAP, {"error": "cap", "message": str(e)}
    except (DomainError, KeyError, json.JSONDecodeError, OSError) as e:
        return EXIT_DOMAIN, {"error": "domain", "message": str(e)}


def main(argv=None):
    code, doc = run(sys.argv[1:] if argv is None else argv)
    if doc is not None:
        out = sys.stdout if code == EXIT_OK else sys.stderr
        print(json.dumps(doc, sort_keys=True), file=out)
    if code == EXIT_OK and doc is not None and doc.get("type") == "acceptance" and not doc["passed"]:
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
