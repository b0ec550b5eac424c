"""Command-line interface: ``iwahori {rootsys,qbg,nu,cordial,survey,verify}``.

Exit status is 0 on success, 1 for invalid input and 2 when an internal
invariant check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .affine import DEFAULT_LENGTH_BOUND, AffineWeylGroup
from .cordial import METHODS, CordialityReport, SurveySpec, is_cordial, survey
from .newton import (
    INDETERMINATE,
    defect,
    generic_adlv_dimension,
    generic_newton_bruteforce,
    generic_newton_qbg,
    superregularity_threshold,
)
from .qbg import build_qbg
from .rootsys import LATTICE_MODES, SUPPORTED_TYPES, build_root_system
from .verify import verify_suite
from .weyl import InvariantViolation, WeylGroup, format_word, parse_word


class UsageError(ValueError):
    pass


# -- input parsing -------------------------------------------------------------------


def _ints(text: str, what: str) -> tuple[int, ...]:
    try:
        body = text.replace(" ", "").strip("()")
        return tuple(int(p) for p in body.split(",") if p != "")
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def parse_lambda(rs, text: str) -> tuple[int, ...]:
    """Dynkin labels of ``lambda`` given as coroot coefficients or, in type A, as an ``n``-tuple."""
    vals = _ints(text, "--lambda")
    if len(vals) == rs.rank:
        labels = rs.to_labels(vals)
    elif rs.is_type_a and len(vals) == rs.rank + 1:
        labels = rs.tuple_to_labels(vals)
    else:
        extra = f" or a tuple of {rs.rank + 1}" if rs.is_type_a else ""
        raise UsageError(f"--lambda needs {rs.rank} coroot coefficients{extra}, got {len(vals)}")
    labels = tuple(int(c) for c in labels)
    if min(labels) < 0:
        raise UsageError(f"lambda {text} is not dominant (simple pairings {labels})")
    if not rs.in_lattice(labels):
        raise UsageError(f"lambda {text} is not in the translation lattice for lattice={rs.lattice}")
    return labels


def _word(group: WeylGroup, text: str) -> int:
    return group.from_word(parse_word(text, group.rs.rank))


def parse_element(W: AffineWeylGroup, args):
    g = W.group
    w = _word(g, args.w or "e")
    if args.mu is not None:
        if args.v is not None or args.lam:
            raise UsageError("give either --mu or --v/--lambda, not both")
        mu = _ints(args.mu, "--mu")
        if len(mu) != W.rank:
            raise UsageError(f"--mu needs {W.rank} coroot coefficients, got {len(mu)}")
        return W.element(mu, w)
    if not args.lam:
        raise UsageError("an element needs --mu, or --lambda (with optional --v and --w)")
    lam = parse_lambda(W.rs, args.lam[0])
    return W.from_decomposition(_word(g, args.v or "e"), lam, w)


# -- output --------------------------------------------------------------------------


def _frac(q) -> str:
    return str(Fraction(q))


def emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    # write then rename so a failure never leaves a partial file
    d = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".iwahori-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")
    os.replace(tmp, output)


def report_dict(W: AffineWeylGroup, rep: CordialityReport) -> dict:
    g = W.group
    d = rep.decomposition
    verdict = rep.is_cordial
    return {
        "element": {"mu": [_frac(c) for c in W.coroot_coords(rep.element)],
                    "w": [i + 1 for i in g.words[rep.element.u]]},
        "decomposition": {"v": [i + 1 for i in g.words[d.v]],
                          "lambda": [_frac(c) for c in W.rs.to_coroot_coords(d.lam)],
                          "w": [i + 1 for i in g.words[d.w]], "singular": d.singular},
        "eta": [i + 1 for i in g.words[W.eta(rep.element)]],
        "cordial": verdict,
        "method": rep.method,
        "lhs": rep.lhs,
        "rhs": _frac(rep.rhs) if rep.rhs != INDETERMINATE else INDETERMINATE,
        "nu_x": [_frac(c) for c in rep.nu_x.coroot_coords],
        "defect": rep.defect,
        "families": list(rep.family),
        "superregular": rep.superregular,
        **({"reason": rep.reason} if rep.reason else {}),
    }


# -- commands ------------------------------------------------------------------------


def _setup(args):
    rs = build_root_system(args.type, args.lattice)
    W = AffineWeylGroup(WeylGroup(rs))
    return rs, W


def cmd_rootsys(args) -> str:
    rs = build_root_system(args.type, args.lattice)
    if args.format == "json":
        data = rs.to_dict()
        data.update({
            "positive_roots": [list(r) for r in rs.positive_roots],
            "positive_coroots": [list(c) for c in rs.positive_coroots],
            "highest_root": list(rs.highest_root),
        })
        return json.dumps(data, indent=2)
    lines = [f"type {rs.name}  rank {rs.rank}  lattice {rs.lattice}", "cartan:"]
    lines += ["  " + " ".join(f"{a:3d}" for a in row) for row in rs.cartan]
    lines.append(f"{rs.num_positive} positive roots (simple-root coefficients -> coroot coefficients):")
    lines += [f"  {r} -> {c}" for r, c in zip(rs.positive_roots, rs.positive_coroots)]
    return "\n".join(lines)


def cmd_qbg(args) -> str:
    rs = build_root_system(args.type, args.lattice)
    graph = build_qbg(WeylGroup(rs))
    if args.format == "text":
        g = graph.group
        return "\n".join(
            f"{g.name(e.source)} -> {g.name(e.target)}  {e.direction}  root {e.root + 1}"
            + (f"  weight {e.weight}" if not e.up else "")
            for e in graph.edges
        )
    if args.format not in ("dot", "json"):
        raise UsageError("qbg supports --format dot, json or text")
    return graph.export(args.format)


def cmd_nu(args) -> str:
    rs, W = _setup(args)
    x = parse_element(W, args)
    M = args.M if args.M is not None else superregularity_threshold(rs)
    results = {}
    if args.method in ("oracle", "both"):
        results["oracle"] = generic_newton_bruteforce(W, x, args.bound)
    if args.method in ("qbg", "both"):
        results["qbg"] = generic_newton_qbg(W, build_qbg(W.group), x, M, force=args.force)
    if len(set(results.values())) > 1:
        raise InvariantViolation(f"methods disagree: {results}")
    nu = next(iter(results.values()))
    out = {
        "nu_x": [_frac(c) for c in nu.coroot_coords],
        "method": args.method,
        "defect": defect(nu, W.kottwitz(x)),
        "dim_Xx_bx": generic_adlv_dimension(W, x, nu),
    }
    if args.format == "text":
        return (f"nu_x = ({', '.join(out['nu_x'])})  method {out['method']}  "
                f"defect {out['defect']}  dim X_x(b_x) = {out['dim_Xx_bx']}")
    return json.dumps(out)


def cmd_cordial(args) -> str:
    rs, W = _setup(args)
    x = parse_element(W, args)
    rep = is_cordial(W, x, args.method, M=args.M, force=args.force, bound=args.bound)
    data = report_dict(W, rep)
    if args.format == "text":
        g = W.group
        d = rep.decomposition
        return "\n".join([
            f"x = {W.format(x)}",
            f"v = {g.name(d.v)}  lambda = ({', '.join(data['decomposition']['lambda'])})  w = {g.name(d.w)}"
            + ("  (singular)" if d.singular else ""),
            f"eta = {format_word(g.words[W.eta(x)])}",
            f"nu_x = ({', '.join(data['nu_x'])})  defect {data['defect']}",
            f"l(x) - l(eta) = {data['lhs']}   <2rho, nu_x> - def = {data['rhs']}",
            f"cordial: {str(rep.is_cordial).lower()}  (method {rep.method})",
            f"families: {', '.join(rep.family) or 'none'}",
        ])
    return json.dumps(data, indent=2)


def cmd_survey(args) -> str:
    rs = build_root_system(args.type, args.lattice)
    g = WeylGroup(rs)
    if not args.lam:
        raise UsageError("survey needs at least one --lambda")
    lams = [parse_lambda(rs, t) for t in args.lam]
    vs = [_word(g, t) for t in args.v_list] if args.v_list else None
    ws = [_word(g, t) for t in args.w_list] if args.w_list else None
    spec = SurveySpec(args.type, args.lattice, lams, vs, ws, args.method, args.M, args.force,
                      args.bound, args.jobs)
    res = survey(spec)
    return res.to_json() if args.format == "json" else res.to_csv()


def cmd_verify(args) -> tuple[str, bool]:
    results = verify_suite(args.type, args.lattice, args.seed)
    ok = all(r.status != "fail" for r in results)
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in results], indent=2)
    else:
        text = "\n".join(r.line() for r in results)
    return text, ok


# -- argument parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iwahori", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, default):
        sp.add_argument("--type", required=True, help=f"one of {', '.join(SUPPORTED_TYPES)}")
        sp.add_argument("--lattice", choices=LATTICE_MODES, default="sc",
                        help="sc: coroot lattice, adj: coweight lattice")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", help="write to this file instead of stdout")

    def element(sp):
        sp.add_argument("--mu", help="translation in simple-coroot coefficients, e.g. 2,1")
        sp.add_argument("--v", help="finite Weyl group word, e.g. 12 or s12 or e")
        sp.add_argument("--w", help="finite Weyl group word")
        sp.add_argument("--lambda", dest="lam", action="append",
                        help="dominant lambda as coroot coefficients, or an n-tuple in type A")

    def evaluation(sp, default_method):
        sp.add_argument("--method", choices=METHODS, default=default_method)
        sp.add_argument("--M", type=int, help="superregularity threshold override")
        sp.add_argument("--force", action="store_true",
                        help="use the graph formula even when lambda is not superregular")
        sp.add_argument("--bound", type=int, default=DEFAULT_LENGTH_BOUND,
                        help="largest l(x) for which the brute-force lower set is enumerated")

    sp = sub.add_parser("rootsys", help="print root data")
    common(sp, ["text", "json"], "text")

    sp = sub.add_parser("qbg", help="build and export the quantum Bruhat graph")
    common(sp, ["dot", "json", "text"], "dot")

    sp = sub.add_parser("nu", help="generic Newton point of I x I")
    common(sp, ["json", "text"], "json")
    element(sp)
    evaluation(sp, "both")

    sp = sub.add_parser("cordial", help="cordiality report for one element")
    common(sp, ["json", "text"], "text")
    element(sp)
    evaluation(sp, "both")

    sp = sub.add_parser("survey", help="cordiality over a grid of (v, w, lambda)")
    common(sp, ["csv", "json"], "csv")
    sp.add_argument("--lambda", dest="lam", action="append", help="repeatable")
    sp.add_argument("--v", dest="v_list", action="append", help="repeatable; default all of W")
    sp.add_argument("--w", dest="w_list", action="append", help="repeatable; default all of W")
    evaluation(sp, "both")
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("verify", help="run the invariant suite for one type")
    common(sp, ["text", "json"], "text")
    sp.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {
    "rootsys": cmd_rootsys,
    "qbg": cmd_qbg,
    "nu": cmd_nu,
    "cordial": cmd_cordial,
    "survey": cmd_survey,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 1
    if args.output and not os.path.isdir(os.path.dirname(os.path.abspath(args.output))):
        print(f"error: directory for --output {args.output} does not exist", file=sys.stderr)
        return 1
    try:
        if args.command == "verify":
            text, ok = cmd_verify(args)
            emit(text, args.output)
            return 0 if ok else 2
        emit(COMMANDS[args.command](args), args.output)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
