"""Command-line verifier.

Every subcommand reads one JSON document (a path, or ``-`` for stdin) and
prints a JSON report.  Exit codes: 0 all checks pass, 1 a check fails,
2 the input could not be read or parsed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import product

from . import __version__
from .algebroid import (AlgebroidData, algebroid_to_pi, check_axioms, check_diagram,
                        check_rep_equivalence, frame_determinants, jacobiator,
                        nijenhuis_suite, poisson_cotangent, rho_hat_matrix)
from .bundle import SectionE, jet_lift
from .dirac import (LOCAL_ONLY, check_integrability, dirac_to_algebroid, four_conditions,
                    graph_section)
from .document import (Document, algebroid_json, jacobi_json, load_document, patch_json,
                       pi_json)
from .errors import InputError, StructuralError
from .jacobi import (check_anchor_like, check_jacobi_structure, jacobi_to_pi,
                     line_dirac_to_local_lie)
from .omni import check_omni_axioms, random_omni_samples, skew_dorfman, weinstein_bracket
from .report import Check, Report, zero_check

TOOL = "omnilie"


def _expect(doc: Document, *kinds: str):
    if doc.kind not in kinds:
        raise InputError(f"this command needs a {' or '.join(kinds)} payload, "
                         f"got {doc.kind!r}")
    return doc.payload


def cmd_check_algebroid(doc: Document, args) -> Report:
    a = _expect(doc, "algebroid")
    rep = check_axioms(a, seed=args.seed)
    rep.title = "check-algebroid"
    return rep


def cmd_to_dirac(doc: Document, args) -> Report:
    a = _expect(doc, "algebroid")
    rep = Report("to-dirac")
    rep.extend(check_axioms(a, seed=args.seed), "axioms/")
    if not rep.passed:
        rep.data["message"] = "not a Lie algebroid; no Dirac structure is produced"
        return rep
    pi = algebroid_to_pi(a, strict=False)
    rep.extend(check_integrability(pi, args.mode, args.degree_cap, args.samples, args.seed),
               "dirac/")
    rep.data["document"] = {"patch": patch_json(a.patch), "pi": pi_json(pi)}
    return rep


def cmd_check_dirac(doc: Document, args) -> Report:
    pi = _expect(doc, "pi")
    return check_integrability(pi, args.mode, args.degree_cap, args.samples, args.seed)


def cmd_from_dirac(doc: Document, args) -> Report:
    pi = _expect(doc, "pi")
    rep = Report("from-dirac")
    integ = check_integrability(pi, "finite", args.degree_cap)
    rep.extend(integ, "dirac/")
    if not integ.passed:
        rep.data["message"] = "graph of pi is not a Dirac structure"
        return rep
    if pi.patch.rank_e == 1:
        j = line_dirac_to_local_lie(pi, args.degree_cap)
        rep.data["jacobi"] = jacobi_json(j)
    four = four_conditions(pi, samples=args.samples, seed=args.seed)
    rep.extend(four, "quotient/")
    rep.data["conditions"] = four.data["conditions"]
    try:
        a = dirac_to_algebroid(pi, samples=args.samples, seed=args.seed)
    except StructuralError as exc:
        rep.data["message"] = str(exc)
        if str(exc) == LOCAL_ONLY:
            rep.add(Check("algebroid-quotient", "line-bundle", False, exc.witness,
                          note=LOCAL_ONLY))
        return rep
    rep.data["document"] = {"patch": patch_json(a.patch), "algebroid": algebroid_json(a)}
    return rep


def cmd_check_jacobi(doc: Document, args) -> Report:
    j = _expect(doc, "jacobi")
    rep = check_jacobi_structure(j, args.degree_cap)
    rep.title = "check-jacobi"
    rep.extend(check_anchor_like(j, samples=min(args.samples, 8), seed=args.seed),
               "anchor-like/")
    return rep


def cmd_jacobi_to_dirac(doc: Document, args) -> Report:
    j = _expect(doc, "jacobi")
    pi = jacobi_to_pi(j)
    rep = Report("jacobi-to-dirac")
    rep.extend(check_jacobi_structure(j, args.degree_cap), "jacobi/")
    rep.extend(check_integrability(pi, args.mode, args.degree_cap, args.samples, args.seed),
               "dirac/")
    agree = rep["jacobi/lambda-lambda"].passed and rep["jacobi/lambda-x"].passed
    rep.add(Check("agreement", "line-bundle", agree == check_integrability(pi).passed))
    rep.data["document"] = {"patch": patch_json(j.patch), "pi": pi_json(pi)}
    return rep


def cmd_nijenhuis(doc: Document, args) -> Report:
    a, nop = _expect(doc, "nijenhuis")
    rep = Report("nijenhuis")
    ax = check_axioms(a, seed=args.seed)
    if not ax.passed:
        rep.extend(ax, "axioms/")
        return rep
    sub = nijenhuis_suite(a, nop, seed=args.seed)
    rep.extend(sub)
    rep.data.update(sub.data)
    return rep


def cmd_omni_check(doc: Document, args) -> Report:
    params = _expect(doc, "omni")
    seed = args.seed if args.seed_given else params["seed"]
    samples = random_omni_samples(doc.patch, params["count"], params["degree"], seed)
    return check_omni_axioms(doc.patch, samples)


def cmd_poisson_cotangent(doc: Document, args) -> Report:
    bivector = _expect(doc, "poisson")
    a = poisson_cotangent(doc.patch, bivector)
    rep = Report("poisson-cotangent")
    rep.extend(check_axioms(a, seed=args.seed), "axioms/")
    rep.extend(check_diagram(a, seed=args.seed), "diagram/")
    rep.extend(check_rep_equivalence(a, seed=args.seed), "representations/")
    points = [tuple(Fraction(i + 1, j + 2) for j in range(a.patch.dim_m)) for i in range(3)]
    rep.data["rho_hat_determinants"] = [str(d) for d in
                                        frame_determinants(rho_hat_matrix(a), points)]
    rep.data["document"] = {"patch": patch_json(a.patch), "algebroid": algebroid_json(a)}
    return rep


def cmd_weinstein(doc: Document, args) -> Report:
    a = _expect(doc, "algebroid")
    if a.patch.dim_m != 0:
        raise InputError("weinstein works over a point: the patch needs dim 0")
    return weinstein_report(a)


def weinstein_report(a: AlgebroidData) -> Report:
    """Dirac check of the induced map against a brute-force Jacobi check on V."""
    k = a.patch.rank_e
    rep = Report("weinstein")
    integ = check_integrability(algebroid_to_pi(a, strict=False), "finite")
    rep.extend(integ, "dirac/")
    basis = [SectionE.basis(k, i, 0) for i in range(k)]

    def br(u, v):
        return a.c.pair(u.comps, v.comps)

    def jac():
        for i, j, l in product(range(k), repeat=3):
            yield f"triple ({i + 1},{j + 1},{l + 1})", jacobiator(br, basis[i], basis[j],
                                                                  basis[l])

    brute = zero_check("brute-force-jacobi", "point-base", jac(), ())
    rep.add(brute)
    rep.add(Check("agreement", "point-base", brute.passed == integ.passed))

    pi = algebroid_to_pi(a, strict=False)

    def skew_part():
        for i, j in product(range(k), repeat=2):
            x = graph_section(pi, jet_lift(basis[i]))
            y = graph_section(pi, jet_lift(basis[j]))
            s, w = skew_dorfman(x, y), weinstein_bracket(x, y)
            yield f"pair ({i + 1},{j + 1})", ((s.de - w.de), (s.jet - w.jet))

    rep.add(zero_check("skew-dorfman-is-weinstein", "point-base", skew_part(), ()))
    return rep


COMMANDS = {
    "check-algebroid": (cmd_check_algebroid, "check the Lie algebroid axioms"),
    "to-dirac": (cmd_to_dirac, "build the Dirac map of a Lie algebroid"),
    "check-dirac": (cmd_check_dirac, "check whether the graph of pi is a Dirac structure"),
    "from-dirac": (cmd_from_dirac, "recover algebroid (or local Lie) data from pi"),
    "check-jacobi": (cmd_check_jacobi, "check a Jacobi pair (lambda, x)"),
    "jacobi-to-dirac": (cmd_jacobi_to_dirac, "build and check the line-bundle map of a Jacobi pair"),
    "nijenhuis": (cmd_nijenhuis, "compare the three Nijenhuis conditions"),
    "omni-check": (cmd_omni_check, "check the omni-Lie algebroid axioms on random samples"),
    "poisson-cotangent": (cmd_poisson_cotangent, "cotangent algebroid of a Poisson bivector"),
    "weinstein": (cmd_weinstein, "point-base correspondence with Lie algebra structures"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=TOOL, description="Exact verifier for omni-Lie "
                                "algebroids, Dirac structures and Jacobi pairs.")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("document", help="JSON document path, or - for stdin")
        sp.add_argument("--mode", choices=("finite", "sampled"), default="finite")
        sp.add_argument("--degree-cap", type=int, default=2)
        sp.add_argument("--samples", type=int, default=16)
        sp.add_argument("--seed", type=int, default=None)
        out = sp.add_mutually_exclusive_group()
        out.add_argument("--json", dest="pretty", action="store_false")
        out.add_argument("--pretty", dest="pretty", action="store_true")
        sp.set_defaults(pretty=False)
    return p


def render_pretty(out: dict) -> str:
    lines = [f"{out['tool']} {out['version']}  {out['command']}  {out['input_digest']}"]
    for c in out["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        line = f"  [{mark}] {c['name']} ({c['tag']})"
        if c.get("note"):
            line += f"  {c['note']}"
        lines.append(line)
        if c["witness"]:
            lines.append(f"         sections: {', '.join(c['witness']['sections'])}")
            if c["witness"].get("defect") is not None:
                lines.append(f"         defect:   {c['witness']['defect']}")
    if "message" in out.get("data", {}):
        lines.append(f"  {out['data']['message']}")
    lines.append(f"verdict: {out['verdict']}")
    return "\n".join(lines)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def run_command(argv: list[str] | None = None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = 0
    for flag in ("degree_cap", "samples"):
        if getattr(args, flag) < 0:
            raise InputError(f"--{flag.replace('_', '-')} must be non-negative")
    doc = load_document(_read(args.document))
    fn = COMMANDS[args.command][0]
    try:
        rep = fn(doc, args)
    except StructuralError as exc:
        rep = Report(args.command)
        rep.add(Check("structure", "structural", False, exc.witness, note=str(exc)))
        rep.data["message"] = str(exc)
    body = rep.to_dict()
    out = {"tool": TOOL, "version": __version__, "command": args.command,
           "input_digest": doc.digest, "checks": body["checks"], "data": body["data"],
           "verdict": body["verdict"]}
    out["_pretty"] = args.pretty
    return (0 if rep.passed else 1), out


def main(argv: list[str] | None = None) -> int:
    try:
        code, out = run_command(argv)
    except InputError as exc:
        print(f"{TOOL}: input error: {exc}", file=sys.stderr)
        return 2
    pretty = out.pop("_pretty")
    if pretty:
        print(render_pretty(out))
    else:
        print(json.dumps(out, indent=2))
    if code == 1 and "message" in out["data"]:
        print(f"{TOOL}: {out['data']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
