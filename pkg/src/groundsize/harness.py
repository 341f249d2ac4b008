"""Compare estimates against an external grounder on user-supplied instances.

Each instance is grounded with the external command (``gringo --text`` by
default) and the rules it prints are counted.  Error factors divide the
estimate by that count; with ``--rewritten`` the grounding-size factor divides
the rewritten encoding's count by the original's.

    python -m groundsize.harness --encoding enc.lp inst1.lp inst2.lp
    python -m groundsize.harness --encoding enc.lp --rewritten enc2.lp --batch instances/
"""

from __future__ import annotations

import argparse
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .estimator import analyze
from .keys import KeyFileError, load_keys
from .normalize import NormalizationError
from .oracle import error_factor, mean_error_factor
from .program import load_program
from .syntax import ParseError


class GrounderError(RuntimeError):
    pass


def count_ground_rules(text: str, count_facts: bool = True) -> int:
    """Rules in a grounder's text output; directives and comments are skipped."""
    n = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("#", "%")) or not line.endswith("."):
            continue
        is_fact = ":-" not in line and not line.startswith("{") and "|" not in line \
            and ";" not in line
        if is_fact and not count_facts:
            continue
        n += 1
    return n


def run_grounder(command, files) -> str:
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    if not argv or shutil.which(argv[0]) is None:
        raise GrounderError(f"grounder {argv[0] if argv else command!r} not found on PATH")
    done = subprocess.run(argv + [str(f) for f in files], capture_output=True, text=True)
    # clingo-family tools use non-zero codes to report satisfiability, so only
    # a missing output counts as failure
    if done.returncode not in (0, 10, 20, 30) and not done.stdout:
        raise GrounderError(f"{' '.join(argv)} failed: {done.stderr.strip()}")
    return done.stdout


@dataclass(frozen=True)
class InstanceResult:
    name: str
    predicted: int
    actual: int
    factor: Fraction
    rewritten_actual: int | None = None

    @property
    def size_factor(self) -> Fraction | None:
        if self.rewritten_actual is None:
            return None
        return Fraction(self.rewritten_actual, self.actual)


def evaluate_instance(instance, encoding=None, rewritten=None, command="gringo --text",
                      keys=None, count_facts=True) -> InstanceResult:
    files = [p for p in (encoding, instance) if p is not None]
    actual = count_ground_rules(run_grounder(command, files), count_facts)
    text = "\n".join(Path(p).read_text(encoding="utf-8") for p in files)
    predicted = analyze(load_program(text, keys)).total
    rewritten_actual = None
    if rewritten is not None:
        rewritten_actual = count_ground_rules(run_grounder(command, [rewritten, instance]),
                                              count_facts)
    return InstanceResult(Path(instance).name, predicted, actual,
                          error_factor(predicted, actual), rewritten_actual)


def _bool(text):
    return text.lower() in ("true", "yes", "1", "on")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m groundsize.harness", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("instances", nargs="*", type=Path)
    parser.add_argument("--batch", type=Path, help="use the matching files in this directory")
    parser.add_argument("--pattern", default="*.lp", help="file pattern for --batch")
    parser.add_argument("--encoding", type=Path, help="encoding prepended to each instance")
    parser.add_argument("--rewritten", type=Path, help="rewritten encoding to compare against")
    parser.add_argument("--grounder", default="gringo --text",
                        help="command printing the ground program as text")
    parser.add_argument("--keys", type=Path)
    parser.add_argument("--count-facts", type=_bool, default=True, metavar="BOOL")
    args = parser.parse_args(argv)

    instances = list(args.instances)
    if args.batch:
        instances += sorted(p for p in args.batch.glob(args.pattern)
                            if p.is_file() and not p.name.startswith("."))
    if not instances:
        parser.error("no instances given")
    results = []
    try:
        keys = load_keys(args.keys) if args.keys else None
        for inst in instances:
            r = evaluate_instance(inst, args.encoding, args.rewritten, args.grounder, keys,
                                  args.count_facts)
            results.append(r)
            line = f"{r.name}: predicted {r.predicted}, actual {r.actual}, factor {float(r.factor):.4f}"
            if r.size_factor is not None:
                line += f", size factor {float(r.size_factor):.4f}"
            print(line)
    except (GrounderError, ParseError, NormalizationError, KeyFileError, ZeroDivisionError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"average error factor: {float(mean_error_factor(r.factor for r in results)):.4f}")
    if args.rewritten is not None:
        mean = sum((r.size_factor for r in results), Fraction(0)) / len(results)
        print(f"average grounding size factor: {float(mean):.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
