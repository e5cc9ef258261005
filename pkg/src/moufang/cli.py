"""``moufang`` command line: validate, construct, analyze and verify finite loops.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a size or work
budget was exceeded.
"""

import argparse
import json
import os
import sys

from . import __version__
from .constructions import build, parse_spec
from .errors import BudgetError, InputError, MoufangError, NotCML
from .loop import DEFAULT_SAMPLES, DEFAULT_SEED, format_table, load_loop
from .report import CheckReport
from .verify import exit_code, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

# Fields of one JSON report record, in output order.
REPORT_FIELDS = ("name", "status", "reason", "mode", "seed", "count", "counterexample", "timing_ms")

RANK_AUTO_ORDER = 81


def resolve_source(source):
    """A path to a Cayley-table file, or a construction spec such as ``cml81``."""
    if os.path.exists(source):
        return load_loop(source)
    try:
        spec = parse_spec(source)
    except InputError as exc:
        raise InputError(f"{source!r} is neither a readable file nor a construction spec ({exc})") from None
    return build(spec, certify=False)


def _int_list(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _check_elements(L, values, what):
    for v in values or ():
        if not 0 <= v < L.order:
            raise InputError(f"{what} element {v} is outside [0, {L.order})")


def report_record(rep: CheckReport, timing=True, details=False):
    d = rep.to_dict(timing=timing)
    keys = [k for k in REPORT_FIELDS if timing or k != "timing_ms"]
    out = {k: d[k] for k in keys}
    if details:
        out["details"] = d["details"]
    return out


def _dump(obj):
    return json.dumps(obj, sort_keys=False, separators=(", ", ": "))


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args):
    L = load_loop(args.path)
    if args.json:
        print(_dump({"path": args.path, "order": L.order, "identity": L.identity, "valid": True}))
    else:
        print(f"{args.path}: valid loop of order {L.order}, identity {L.identity}")
    return EXIT_OK


def cmd_construct(args):
    L = build(args.spec)
    text = format_table(L)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {parse_spec(args.spec)} (order {L.order}) to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def analyze(L, rank=None):
    """Summary invariants of a loop as a plain dict."""
    from .loop import is_associative, is_commutative
    from .structure import loop_center, min_generators, nilpotency_class_loop, special_rank

    assoc = is_associative(L)
    info = {
        "order": L.order,
        "identity": L.identity,
        "commutative": is_commutative(L).passed,
        "associative": assoc.passed,
        "associativity_witness": None if assoc.passed else list(assoc.counterexample),
        "cml": L.cml_report.passed,
        "exponent": L.exponent(),
        "center_order": None,
        "nilpotency_class": None,
        "min_generators": None,
        "generators": None,
        "special_rank": None,
    }
    if not info["cml"]:
        return info
    info["center_order"] = loop_center(L).order
    info["nilpotency_class"] = nilpotency_class_loop(L)
    d, gens = min_generators(L)
    info["min_generators"] = d
    info["generators"] = list(gens)
    if rank is None:
        rank = L.order <= RANK_AUTO_ORDER
    if rank:
        info["special_rank"] = special_rank(L).special_rank
    return info


def cmd_analyze(args):
    L = resolve_source(args.source)
    info = analyze(L, rank=True if args.rank else None)
    if args.json:
        print(_dump(info))
    else:
        for key, value in info.items():
            if value is not None:
                print(f"{key:>26}: {value}")
    return EXIT_OK


def cmd_multgroup(args):
    from .multgroup import inner_mapping_group, mult_group_invariants, multiplication_group

    L = resolve_source(args.source)
    M = multiplication_group(L)
    info = mult_group_invariants(L).to_dict()
    info["base"] = list(M.base)
    info["transversal_sizes"] = list(M.transversal_sizes())
    info["inner_strong_generators"] = len(inner_mapping_group(L).strong_generators())
    if args.json:
        print(_dump(info))
    else:
        for key, value in info.items():
            print(f"{key:>26}: {value}")
    return EXIT_OK if not info["errors"] else EXIT_BUDGET


def cmd_centralizer(args):
    from .loop import generate
    from .structure import centralizer

    L = resolve_source(args.source)
    _check_elements(L, args.subloop, "subloop generator")
    _check_elements(L, args.set, "set")
    L.require_cml()
    H = None if args.subloop is None else generate(L, args.subloop)
    M = list(range(L.order)) if args.set is None else args.set
    Z = centralizer(L, H, M)
    info = {
        "subloop_order": L.order if H is None else H.order,
        "set": M if args.set is not None else "all",
        "order": Z.order,
        "members": list(Z.members),
    }
    if args.json:
        print(_dump(info))
    else:
        print(f"centralizer of order {Z.order} inside a subloop of order {info['subloop_order']}")
        print("members:", " ".join(map(str, Z.members)))
    return EXIT_OK


def cmd_verify(args):
    L = resolve_source(args.source)
    reports = run_suite(
        L,
        budget=args.budget,
        seed=args.seed,
        samples=args.samples,
        rank=args.rank,
        only=args.only,
    )
    if args.only and not reports:
        raise InputError(f"no check matches {', '.join(args.only)}")
    if args.json:
        for rep in reports:
            print(_dump(report_record(rep, timing=not args.no_timing, details=args.details)))
    else:
        width = max(len(r.name) for r in reports)
        for rep in reports:
            mode = rep.mode if rep.seed is None else f"{rep.mode}(seed={rep.seed})"
            line = f"{rep.status.upper():7} {rep.name:<{width}}  {mode:<18} n={rep.count:<10} {rep.timing_ms:9.1f} ms"
            if rep.failed:
                line += f"  counterexample={list(rep.counterexample)}"
            elif rep.skipped:
                line += f"  ({rep.reason})"
            print(line)
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
        print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped")
    return exit_code(reports)


# -- parser ----------------------------------------------------------------------


def _budget_type(text):
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be a number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="moufang",
        description="Finite commutative Moufang loops: tables, multiplication groups and structural checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a file holds a loop's Cayley table")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", help="emit the Cayley table of a built-in loop")
    p.add_argument("spec", help="e.g. cml81, cyclic(9), elementary_abelian_3(2), product(cml81,cyclic(3))")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_construct)

    source_help = "Cayley-table file or construction spec"

    p = sub.add_parser("analyze", help="basic invariants: centre, class, generators, rank")
    p.add_argument("source", help=source_help)
    p.add_argument("--rank", action="store_true", help="compute the special rank even for large loops")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("multgroup", help="multiplication group and inner mapping group data")
    p.add_argument("source", help=source_help)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_multgroup)

    p = sub.add_parser("centralizer", help="Z_H(M) for a subloop H and an element set M")
    p.add_argument("source", help=source_help)
    p.add_argument("--subloop", type=_int_list, help="generators of H (default: the whole loop)")
    p.add_argument("--set", type=_int_list, help="elements of M (default: the whole loop)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("verify", help="run the structural check suite")
    p.add_argument("source", help=source_help)
    p.add_argument("--json", action="store_true", help="one JSON object per check")
    p.add_argument("--rank", action="store_true", help="include the subloop-lattice checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="sample count for sampled checks")
    p.add_argument(
        "--budget",
        type=_budget_type,
        default=None,
        help="largest work count checked exhaustively (default: $MOUFANG_BUDGET or 1e8)",
    )
    p.add_argument("--only", action="append", metavar="PREFIX", help="run only checks with this name prefix")
    p.add_argument("--details", action="store_true", help="add per-check details to JSON records")
    p.add_argument("--no-timing", action="store_true", help="omit timing_ms from JSON records")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"moufang: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, OSError) as exc:
        print(f"moufang: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotCML as exc:
        print(f"moufang: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except MoufangError as exc:
        print(f"moufang: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
