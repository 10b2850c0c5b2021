"""Command line front end: ``lindiff <command> ...``."""

import argparse
import json
import sys

from .absfact import ReducibleOperatorError, abs_factorization, abs_irreducibility, check_irreducible
from .constructions import GaugeError, invert_gauge, section_operator, symmetric_product
from .ore import gcrd, lclm
from .parser import ParseError, parse_operator
from .reduce_order import NotAbsolutelyIrreducibleError, reduce_order
from .sequences import SequenceError, fetch_bfile, verify_identity, IdentitySpec


def op_json(L):
    return {"order": L.order, "coefficients": [str(c) for c in L.coeffs], "operator": str(L)}


def _abs_json(res):
    out = {"verdict": res.verdict}
    if res.factored:
        out["p"] = res.p
        out["factors"] = [op_json(F) for F in res.factors]
        out["section"] = op_json(res.section)
        if res.extension_needed:
            out["extension_needed"] = [str(f) for f in res.extension_needed]
    return out


def _reduce_json(res):
    out = {"verdict": res.verdict}
    if res.reason:
        out["reason"] = res.reason
    if res.conditional:
        out["conditional"] = True
    if res.gauge is not None:
        out["G"] = op_json(res.gauge.G)
        out["G_inverse"] = op_json(res.gauge.inverse)
        out["LG"] = op_json(res.LG)
        out["certificates"] = res.certificates_hold() if res.solved else res.gauge.check()
    if res.solved:
        out["L2"] = op_json(res.L2)
        out["r"] = str(res.r)
    if res.certificates:
        out["obstructions"] = [str(c) for c in res.certificates]
    return out


def _reduce_text(res):
    lines = [res.verdict]
    if res.reason:
        lines.append(f"reason: {res.reason}" + (" (conditional)" if res.conditional else ""))
    if res.solved:
        lines += [f"L2 = {res.L2}", f"r = {res.r}", f"G = {res.gauge.G}",
                  f"G~ = {res.gauge.inverse}", f"LG = {res.LG}"]
        for name, ok in res.certificates_hold().items():
            lines.append(f"  [{'ok' if ok else 'FAILED'}] {name}")
    for c in res.certificates:
        lines.append(f"  no point: {c}")
    return "\n".join(lines)


def cmd_absfact(args):
    res = abs_factorization(parse_operator(args.op))
    return _abs_json(res), str(res)


def cmd_absirr(args):
    ok = abs_irreducibility(parse_operator(args.op))
    return {"absolutely_irreducible": ok}, "absolutely irreducible" if ok else "not absolutely irreducible"


def cmd_reduce3(args):
    res = reduce_order(parse_operator(args.op))
    return _reduce_json(res), _reduce_text(res)


def cmd_solve3(args):
    L = parse_operator(args.op)
    if L.order != 3:
        raise ValueError(f"expected an operator of order 3, got order {L.order}")
    try:
        check_irreducible(L)
    except ReducibleOperatorError as e:
        return ({"case": "R", "factor": op_json(e.witness)},
                f"case R: reducible over Q(x), right factor {e.witness}")
    res = abs_factorization(L, check=False)
    if res.factored:
        return {"case": "L", **_abs_json(res)}, f"case L: {res}"
    red = reduce_order(L, check=False)
    return {"case": "reduce_order", **_reduce_json(red)}, _reduce_text(red)


def _binary(fn):
    def run(args):
        out = fn(parse_operator(args.a), parse_operator(args.b))
        return op_json(out), str(out)
    return run


def cmd_section(args):
    S = section_operator(parse_operator(args.op), args.m)
    return op_json(S), str(S)


def cmd_gauge(args):
    gm = invert_gauge(parse_operator(args.G), parse_operator(args.op))
    checks = gm.check()
    text = "\n".join([f"LG = {gm.target}", f"G~ = {gm.inverse}"]
                     + [f"  [{'ok' if v else 'FAILED'}] {k}" for k, v in checks.items()])
    return {"LG": op_json(gm.target), "G_inverse": op_json(gm.inverse), "certificates": checks}, text


def cmd_verify(args):
    rep = verify_identity(IdentitySpec.load(args.spec), fixtures=args.fixtures, net=args.net)
    return rep.as_dict(), str(rep)


def cmd_fetch(args):
    g = fetch_bfile(args.id, fixtures=args.fixtures, net=args.net)
    vals = [str(v) for v in g.values]
    shown = ", ".join(vals[: args.terms]) + (", ..." if len(vals) > args.terms else "")
    return ({"id": args.id, "offset": str(g.offset), "values": vals},
            f"{args.id} (offset {g.offset}, {len(g)} terms): {shown}")


def build_parser():
    ap = argparse.ArgumentParser(prog="lindiff", description="Exact tools for linear difference operators over Q(x).")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--net", action="store_true", help="allow fetching b-files from the OEIS")
    ap.add_argument("--fixtures", default=None, help="b-file directory (default: shipped fixtures)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help, *ops):
        p = sub.add_parser(name, help=help)
        for o in ops:
            p.add_argument(o)
        p.set_defaults(run=fn)
        return p

    add("absfact", cmd_absfact, "absolute factorization", "op")
    add("absirr", cmd_absirr, "absolute irreducibility test", "op")
    add("reduce3", cmd_reduce3, "reduce an order-3 operator to a symmetric square", "op")
    add("solve3", cmd_solve3, "classify an order-3 operator", "op")
    add("symprod", _binary(symmetric_product), "symmetric product", "a", "b")
    add("gcrd", _binary(gcrd), "greatest common right divisor", "a", "b")
    add("lclm", _binary(lclm), "least common left multiple", "a", "b")
    p = add("section", cmd_section, "m-section operator", "op")
    p.add_argument("-m", type=int, required=True)
    add("gauge", cmd_gauge, "apply a gauge map G to op", "op", "G")
    add("verify", cmd_verify, "check an identity spec (JSON file or shipped spec name)", "spec")
    p = add("fetch", cmd_fetch, "load a b-file", "id")
    p.add_argument("--terms", type=int, default=10)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        data, text = args.run(args)
    except (ParseError, SequenceError, ReducibleOperatorError, NotAbsolutelyIrreducibleError,
            GaugeError, ValueError, ArithmeticError, OSError) as e:
        if args.json:
            print(json.dumps({"error": str(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 1
    print(json.dumps(data, indent=2) if args.json else text)
    return 1 if data.get("passed") is False else 0


if __name__ == "__main__":
    sys.exit(main())
