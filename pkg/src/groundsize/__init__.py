"""Static grounding-size prediction for answer-set programs.

Load a program, estimate how many ground rules a grounder will produce, and
check the estimate against a small reference grounder::

    >>> from groundsize import load_program, analyze, ground
    >>> prog = load_program("p(1). p(2). r(3). q(X,1) :- p(X).")
    >>> analyze(prog).total
    5
    >>> ground(prog).size
    5
"""

from .depgraph import build_component_analysis, build_dependency_graph, is_tight, to_dot
from .estimator import (Analysis, Decision, EmptyCandidateList, NotTight, analyze,
                        analyze_rules, decide_rewrite, estimate_arguments, kvars, pick_best,
                        program_size, rule_size, tight_estimates)
from .keys import KeyFileError, load_keys, parse_keys
from .normalize import (ArgumentId, EstimationRule, ExpansionLimitExceeded,
                        IntervalBoundNotGround, NormalizationError, UnsafeRule, normalize_rules)
from .oracle import (GroundProgram, LimitExceeded, UngroundableRule, error_factor, ground,
                     mean_error_factor, measure_argument_sizes)
from .program import Program, load_file, load_program
from .syntax import ParseError, UnsupportedStatement, parse_program

__all__ = [
    "Analysis", "ArgumentId", "Decision", "EmptyCandidateList", "EstimationRule",
    "ExpansionLimitExceeded", "GroundProgram", "IntervalBoundNotGround", "KeyFileError",
    "LimitExceeded", "NormalizationError", "NotTight", "ParseError", "Program",
    "UngroundableRule", "UnsafeRule", "UnsupportedStatement", "analyze", "analyze_rules",
    "build_component_analysis", "build_dependency_graph", "decide_rewrite", "error_factor",
    "estimate_arguments", "ground", "is_tight", "kvars", "load_file", "load_keys",
    "load_program", "mean_error_factor", "measure_argument_sizes", "normalize_rules",
    "parse_keys", "parse_program", "pick_best", "program_size", "rule_size",
    "tight_estimates", "to_dot",
]
