"""Command-line front end: ``groundsize <command> ...``.

Exit codes: 0 success or Keep, 1 analysis error, 2 Discard, 3 oracle limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .depgraph import to_dot
from .estimator import analyze, decide_rewrite
from .keys import KeyFileError, load_keys
from .normalize import DEFAULT_EXPANSION_LIMIT, NormalizationError
from .oracle import (DEFAULT_MAX_ATOMS, DEFAULT_MAX_RULES, LimitExceeded, error_factor,
                     format_ground, ground, mean_error_factor)
from .program import load_file
from .syntax import ParseError

EXIT_OK, EXIT_ERROR, EXIT_DISCARD, EXIT_LIMIT = 0, 1, 2, 3


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_report(program, analysis, per_rule: bool = False) -> dict:
    """Plain-data report of an analysis; the shape written by ``estimate --json``."""
    table = analysis.table
    report = {
        "perArgument": [
            {"argument": str(a), "min": table.est_min[a], "max": table.est_max[a],
             "range": table.range[a], "size": table.size[a]}
            for a in table.arguments()
        ],
        "total": analysis.total,
        "diagnostics": sorted(set(analysis.diagnostics) | set(program.warnings)),
    }
    if per_rule:
        report["perRule"] = [
            {"originId": r.origin, "group": r.group, "sourceText": r.source,
             "estimate": size}
            for r, size in zip(program.rules, analysis.rule_sizes) if r.representative
        ]
    return report


def _load(path, keys_path, limit=DEFAULT_EXPANSION_LIMIT):
    keys = load_keys(keys_path) if keys_path else None
    return load_file(path, keys, limit)


def _format_bound(value):
    return "undefined" if value is None else str(value)


def cmd_estimate(args) -> int:
    program = _load(args.file, args.keys, args.expansion_limit)
    analysis = analyze(program)
    if args.dump_graph:
        sys.stdout.write(to_dot(analysis.graph, analysis.components))
        return EXIT_OK
    report = build_report(program, analysis, args.per_rule)
    if args.json:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    print(f"{'argument':<20} {'min':>10} {'max':>10} {'range':>8} {'size':>8}")
    for row in report["perArgument"]:
        print(f"{row['argument']:<20} {_format_bound(row['min']):>10} "
              f"{_format_bound(row['max']):>10} {row['range']:>8} {row['size']:>8}")
    if args.per_rule:
        print()
        for row in report["perRule"]:
            print(f"{row['estimate']:>10}  {row['sourceText']}")
    print(f"\ntotal {report['total']}")
    for d in report["diagnostics"]:
        print(f"warning: {d}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    original = _load(args.original, args.keys)
    rewritten = _load(args.rewritten, args.keys)
    decision = decide_rewrite(original, rewritten)
    print(decision)
    return EXIT_OK if decision.keep else EXIT_DISCARD


def cmd_pick(args) -> int:
    sizes = [analyze(_load(f, args.keys)).total for f in args.files]
    best = sizes.index(min(sizes))
    for i, (f, s) in enumerate(zip(args.files, sizes)):
        print(f"{s:>10}  {f}{'  <- best' if i == best else ''}")
    return EXIT_OK


def cmd_oracle_ground(args) -> int:
    program = _load(args.file, None, args.expansion_limit)
    gp = ground(program, args.max_rules, args.max_atoms, naive=args.naive,
                count_facts=args.count_facts)
    if args.emit_ground:
        sys.stdout.write(format_ground(gp, program.decode))
        return EXIT_OK
    print(f"ground rules {gp.size}")
    print(f"facts {gp.fact_count}")
    print(f"derived atoms {len(gp.derived_atoms)}")
    for a, s in gp.argument_sizes.items():
        print(f"  {a}: {s}")
    return EXIT_OK


def _factor_line(name, predicted, actual, factor):
    return f"{name}: predicted {predicted}, actual {actual}, factor {factor} ({float(factor):.4f})"


def cmd_error_factor(args) -> int:
    if (args.file is None) == (args.batch is None):
        raise _UsageError("give exactly one of FILE or --batch DIR")
    if args.batch is not None:
        files = sorted(p for p in Path(args.batch).glob(args.pattern)
                       if p.is_file() and not p.name.startswith("."))
        if not files:
            raise _UsageError(f"no files matching {args.pattern} in {args.batch}")
    else:
        files = [Path(args.file)]
    factors = []
    for path in files:
        program = _load(path, args.keys)
        predicted = analyze(program).total
        actual = ground(program, args.max_rules, args.max_atoms).size
        factor = error_factor(predicted, actual)
        factors.append(factor)
        print(_factor_line(path.name, predicted, actual, factor))
    if args.batch is not None:
        mean = mean_error_factor(factors)
        print(f"mean error factor over {len(factors)} file(s): {mean} ({float(mean):.4f})")
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundsize",
        description="Predict the grounding size of an answer-set program without grounding it.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="per-argument estimates and the program total")
    p.add_argument("file")
    p.add_argument("--keys", help="key declarations, one 'pred/arity: i,j' per line")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--per-rule", action="store_true", help="include the rule table")
    p.add_argument("--dump-graph", action="store_true",
                   help="print dependency and component graphs as DOT")
    p.add_argument("--expansion-limit", type=int, default=DEFAULT_EXPANSION_LIMIT,
                   help="max rules one pooled or interval statement may expand to")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("compare", help="keep or discard a rewriting (exit 0 or 2)")
    p.add_argument("original")
    p.add_argument("rewritten")
    p.add_argument("--keys")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pick", help="the candidate with the smallest estimate")
    p.add_argument("files", nargs="+")
    p.add_argument("--keys")
    p.set_defaults(func=cmd_pick)

    p = sub.add_parser("oracle-ground", help="ground with the reference grounder")
    p.add_argument("file")
    p.add_argument("--max-rules", type=int, default=DEFAULT_MAX_RULES)
    p.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
    p.add_argument("--naive", action="store_true",
                   help="instantiate every variable with every object constant")
    p.add_argument("--emit-ground", action="store_true", help="print the ground program")
    p.add_argument("--count-facts", type=_bool, default=True, metavar="BOOL",
                   help="count facts in the reported size (default true)")
    p.add_argument("--expansion-limit", type=int, default=DEFAULT_EXPANSION_LIMIT)
    p.set_defaults(func=cmd_oracle_ground)

    p = sub.add_parser("error-factor", help="predicted over actual grounding size")
    p.add_argument("file", nargs="?")
    p.add_argument("--batch", metavar="DIR", help="average over the matching files in DIR")
    p.add_argument("--pattern", default="*.lp", help="file pattern for --batch (default *.lp)")
    p.add_argument("--keys")
    p.add_argument("--max-rules", type=int, default=DEFAULT_MAX_RULES)
    p.add_argument("--max-atoms", type=int, default=DEFAULT_MAX_ATOMS)
    p.set_defaults(func=cmd_error_factor)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, NormalizationError, KeyFileError, OSError, ZeroDivisionError,
            _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
