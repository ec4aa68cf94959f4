"""Command-line interface: ``vb0 <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or I/O error, 3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import CapExceeded, InternalDisagreement, VB0Error

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path):
    from .groups import load_group

    return load_group(path)


def _emit(args, data: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _variety(args):
    from .words import Variety, parse_variety, parse_word

    if getattr(args, "word", None):
        return Variety((parse_word(args.word),), args.word)
    return parse_variety(args.variety)


def cmd_multiplier(args) -> int:
    from .cohomology import multiplier_from_cohomology
    from .multiplier import schur_multiplier

    G = _load(args.group)
    data, lines = {"order": G.order}, []
    if args.method in ("exterior", "both"):
        m = schur_multiplier(G)
        data["exterior"] = m.to_list()
        lines.append(f"M(G) exterior:   {m}")
    if args.method in ("cohomology", "both"):
        c = multiplier_from_cohomology(G, cap=max(args.cap, 1))
        data["cohomology"] = c.to_list()
        lines.append(f"M(G) cohomology: {c}")
    if args.method == "both" and data["exterior"] != data["cohomology"]:
        print("\n".join(lines))
        print("routes disagree", file=sys.stderr)
        return EXIT_FAIL
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_b0(args) -> int:
    from .cohomology import b0_cohomological
    from .multiplier import bogomolov_tilde

    G = _load(args.group)
    data, lines = {"order": G.order}, []
    if args.method in ("exterior", "both"):
        r = bogomolov_tilde(G)
        data.update(r.to_dict())
        lines.append(f"M(G) = {r.M}")
        lines.append(f"B0 (exterior):   {r.B0_tilde}")
    if args.method in ("cohomology", "both"):
        c = b0_cohomological(G, args.mode, cap=args.cap, modulus=args.modulus)
        data["cohomology"] = c.to_dict()
        if args.method == "cohomology":
            lines.append(f"M(G) = {c.M_structure}")
        lines.append(f"B0 (cohomology, {args.mode}): {c.B0_structure}")
    _emit(args, data, "\n".join(lines))
    if args.method == "both" and data["B0_tilde"] != data["cohomology"]["B0"]:
        print("routes disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .harness import PROPOSITIONS, load_corpus, run_campaign, write_report

    corpus = load_corpus(args.corpus)
    names = PROPOSITIONS if args.proposition == "all" else [args.proposition]
    reports = []
    for name in names:
        rep = run_campaign(name, corpus, args.max_order)
        reports.append(rep)
        print(rep.summary())
        for f in rep.failures[:10]:
            print(f"  FAIL {f.instance}: {f.detail} (witness {f.witness})")
    if args.output:
        write_report({"propositions": {r.proposition: r.to_dict() for r in reports}}, args.output)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_report(args) -> int:
    from .harness import PROPOSITIONS, load_corpus, report

    corpus = load_corpus(args.corpus)
    checks = [] if args.checks == "none" else (
        PROPOSITIONS if args.checks == "all" else args.checks.split(","))
    code = report(corpus, checks, args.output, args.max_order)
    print(f"wrote {args.output} ({len(corpus)} groups)")
    return code


def cmd_tvalues(args) -> int:
    from .words import value_set

    G = _load(args.group)
    T = sorted(value_set(_variety(args), G))
    _emit(args, {"values": T, "count": len(T)}, f"|T(G)| = {len(T)}: {T}")
    return EXIT_OK


def _subgroup_cmd(fn, name):
    def run(args) -> int:
        G = _load(args.group)
        H = fn(_variety(args), G)
        els = [int(x) for x in H.elements]
        _emit(args, {"order": H.order, "elements": els}, f"{name} subgroup of order {H.order}: {els}")
        return EXIT_OK
    return run


def cmd_vp_check(args) -> int:
    from .groups import Subgroup, is_subgroup
    from .vp import Extension, is_marginal_extension, is_vp_extension, vp_criterion_check
    from .words import value_set

    G = _load(args.group)
    try:
        elems = sorted({int(t) for t in args.normal.split(",") if t.strip()} | {G.identity})
    except ValueError:
        print("--normal expects comma-separated element indices", file=sys.stderr)
        return EXIT_USAGE
    if any(e < 0 or e >= G.order for e in elems) or not is_subgroup(G, elems):
        print("--normal does not describe a subgroup", file=sys.stderr)
        return EXIT_USAGE
    N = Subgroup(G, elems)
    V = _variety(args)
    E = Extension.canonical(G, N)
    vp = is_vp_extension(E, V)
    marginal = is_marginal_extension(E, V)
    T = value_set(V, G)
    meet = sorted(int(x) for x in N.elements if int(x) in T)
    data = {"vp": vp.holds, "marginal": marginal, "unliftable": vp.witness,
            "N_meet_T": meet}
    lines = [f"VP extension: {vp.holds}" + ("" if vp.holds else f" (unliftable tuple {vp.witness})"),
             f"marginal: {marginal}", f"N & T(G) = {meet}"]
    code = EXIT_OK
    if marginal:
        rep = vp_criterion_check(E, V)
        data["criterion"] = "holds" if rep.ok else "violated"
        lines.append(f"criterion (VP iff N & T(G) = 1): {data['criterion']}")
        code = EXIT_OK if rep.ok else EXIT_FAIL
    _emit(args, data, "\n".join(lines))
    return code


def build_parser() -> argparse.ArgumentParser:
    from .cohomology import COHOMOLOGY_CAP
    from .harness import PROPOSITIONS
    from .words import marginal_subgroup, verbal_subgroup

    p = _Parser(prog="vb0", description="Bogomolov-type invariants of finite groups.")
    p.add_argument("--version", action="version", version=f"vb0 {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("group", help="group file (mtable or perm format)")
        sp.add_argument("--json", action="store_true", help="print JSON")
        return sp

    sp = group_cmd("multiplier", "Schur multiplier")
    sp.add_argument("--method", choices=["exterior", "cohomology", "both"], default="exterior")
    sp.add_argument("--cap", type=int, default=COHOMOLOGY_CAP, help="cohomology order cap")
    sp.set_defaults(func=cmd_multiplier)

    sp = group_cmd("b0", "Bogomolov multiplier by one or both routes")
    sp.add_argument("--method", choices=["exterior", "cohomology", "both"], default="both")
    sp.add_argument("--mode", choices=["bicyclic", "all-abelian"], default="bicyclic")
    sp.add_argument("--modulus", type=int, default=None, help="coefficient modulus (multiple of |G|)")
    sp.add_argument("--cap", type=int, default=COHOMOLOGY_CAP, help="cohomology order cap")
    sp.set_defaults(func=cmd_b0)

    for name, fn, label in (("verbal", verbal_subgroup, "verbal"),
                            ("marginal", marginal_subgroup, "marginal")):
        sp = group_cmd(name, f"{label} subgroup of a variety")
        _variety_args(sp)
        sp.set_defaults(func=_subgroup_cmd(fn, label))
    sp = group_cmd("tvalues", "value set T(G) of a variety's laws")
    _variety_args(sp)
    sp.set_defaults(func=cmd_tvalues)

    sp = group_cmd("vp-check", "VP and marginal status of 1 -> N -> G -> G/N -> 1")
    sp.add_argument("--normal", required=True, help="comma-separated element indices of N")
    _variety_args(sp)
    sp.set_defaults(func=cmd_vp_check)

    sp = sub.add_parser("verify", help="run a verification campaign over a corpus")
    sp.add_argument("proposition", choices=PROPOSITIONS + ["all"])
    sp.add_argument("--corpus", default=None, help="corpus directory (default: bundled)")
    sp.add_argument("--max-order", type=int, default=None)
    sp.add_argument("-o", "--output", default=None, help="write JSON report here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="JSON report over a corpus")
    sp.add_argument("--corpus", default=None, help="corpus directory (default: bundled)")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--max-order", type=int, default=None)
    sp.add_argument("--checks", default="none",
                    help="comma-separated propositions, 'all' or 'none' (default)")
    sp.set_defaults(func=cmd_report)
    return p


def _variety_args(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--variety", default="abelian",
                   help="abelian | nilpotent-<c> | compose:<w1>:<w2> | an o.c. word")
    g.add_argument("--word", default=None, help='single o.c. word, e.g. "[x1,x2,x3]"')


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalDisagreement as exc:
        print(f"internal disagreement: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, VB0Error, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
