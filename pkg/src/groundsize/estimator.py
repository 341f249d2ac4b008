"""Argument range/size estimates and rule/program grounding-size estimates.

Arguments are processed component by component in topological order.  Inside
a component the partition index ``j`` runs from 0 (object constants only) up
to the partition cardinality, and every estimate for index ``j`` reads
same-component values at ``j - 1`` and finished values of earlier components.
That is the memoised recursion evaluated bottom-up, so no Python recursion
depth is involved.

``None`` stands for an undefined minimum or maximum (the argument can hold no
value).  Inside a rule it behaves as "no value": an undefined minimum wins a
``max`` and an undefined maximum wins a ``min``, so the rule contributes
nothing to the enclosing ``min``/``max`` over rules.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .depgraph import (ComponentAnalysis, DependencyGraph, build_component_analysis,
                       build_dependency_graph, is_tight)
from .keys import key_positions
from .normalize import ArgumentId, args
from .syntax import IntegerConstant, Variable

log = logging.getLogger(__name__)


class EmptyCandidateList(ValueError):
    pass


class NotTight(ValueError):
    pass


# ---------------------------------------------------------------- object constants


def oc_argument(rules, arg: ArgumentId) -> set:
    """Constants at position ``arg.position`` of heads of ``arg.predicate``."""
    out = set()
    for r in rules:
        h = r.head
        if h is not None and h.key == arg.key:
            t = h.terms[arg.position - 1]
            if isinstance(t, IntegerConstant):
                out.add(t.value)
    return out


def oc_program(rules) -> set:
    return {t.value for r in rules if r.head is not None
            for t in r.head.terms if isinstance(t, IntegerConstant)}


def _oc_table(rules) -> dict:
    table = {}
    for r in rules:
        h = r.head
        if h is None:
            continue
        for i, t in enumerate(h.terms, start=1):
            s = table.setdefault(ArgumentId(h.predicate, h.arity, i), set())
            if isinstance(t, IntegerConstant):
                s.add(t.value)
    return table


# ---------------------------------------------------------------- argument estimates


@dataclass
class EstimateTable:
    est_min: dict
    est_max: dict
    range: dict
    size: dict
    oc_sets: dict
    oc_program: frozenset
    # (argument, j) -> value for the partition-indexed recursions
    memo_min: dict = field(default_factory=dict)
    memo_max: dict = field(default_factory=dict)
    memo_size: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def arguments(self) -> list:
        return sorted(self.size)

    def oc(self, arg: ArgumentId) -> frozenset:
        return self.oc_sets.get(arg, frozenset())


def _range(lo, hi, n_constants) -> int:
    if lo is None or hi is None:
        return 0
    return min(max(0, hi - lo + 1), n_constants)


def estimate_arguments(rules, analysis: Optional[ComponentAnalysis] = None) -> EstimateTable:
    """Min/max/range/size estimates for every argument of the program."""
    rules = tuple(rules)
    if analysis is None:
        analysis = build_component_analysis(build_dependency_graph(rules), rules)
    oc_sets = {a: frozenset(s) for a, s in _oc_table(rules).items()}
    oc_all = frozenset(oc_program(rules))
    n_oc = len(oc_all)
    fallback_lo = min(oc_all) if oc_all else None
    fallback_hi = max(oc_all) if oc_all else None

    table = EstimateTable({}, {}, {}, {}, oc_sets, oc_all)
    lo, hi, sz = table.memo_min, table.memo_max, table.memo_size
    warned = set()

    def body_arguments(ridx, arg):
        r = rules[ridx]
        var = r.head.terms[arg.position - 1].name
        found = args(r.positive_body, var)
        if not found and ridx not in warned:
            warned.add(ridx)
            msg = (f"head variable {var} of '{r.source or r}' has no positive body "
                   "occurrence; using worst-case bounds")
            log.warning(msg)
            table.diagnostics.append(msg)
        return found

    for c in range(len(analysis.components)):
        comp_args = analysis.arguments(c)
        groups = analysis.partitions[c]
        if groups is None:
            for a in comp_args:
                table.est_min[a] = table.est_max[a] = None
                table.range[a] = table.size[a] = 0
            continue
        n = len(groups)
        members = analysis.components[c]
        prefix = {(a, j): analysis.rules_M(a, j, cumulative=True)
                  for a in comp_args for j in range(1, n + 1)}

        def split(b, j, memo, final):
            return memo[(b, j - 1)] if b.key in members else final[b]

        for a in comp_args:
            oc = table.oc(a)
            lo[(a, 0)] = min(oc) if oc else None
            hi[(a, 0)] = max(oc) if oc else None
        for j in range(1, n + 1):
            for a in comp_args:
                lows, highs = list(table.oc(a)), list(table.oc(a))
                for ridx in prefix[(a, j)]:
                    body = body_arguments(ridx, a)
                    if not body:
                        rule_lo, rule_hi = fallback_lo, fallback_hi
                    else:
                        s_lo = [split(b, j, lo, table.est_min) for b in body]
                        s_hi = [split(b, j, hi, table.est_max) for b in body]
                        rule_lo = None if None in s_lo else max(s_lo)
                        rule_hi = None if None in s_hi else min(s_hi)
                    if rule_lo is not None:
                        lows.append(rule_lo)
                    if rule_hi is not None:
                        highs.append(rule_hi)
                lo[(a, j)] = min(lows) if lows else None
                hi[(a, j)] = max(highs) if highs else None
        for a in comp_args:
            table.est_min[a] = lo[(a, n)]
            table.est_max[a] = hi[(a, n)]
            table.range[a] = _range(lo[(a, n)], hi[(a, n)], n_oc)

        for a in comp_args:
            sz[(a, 0)] = min(table.range[a], len(table.oc(a)))
        for j in range(1, n + 1):
            for a in comp_args:
                total = len(table.oc(a))
                for ridx in prefix[(a, j)]:
                    body = body_arguments(ridx, a)
                    if not body:
                        total += n_oc
                    else:
                        total += min(split(b, j, sz, table.size) for b in body)
                sz[(a, j)] = min(table.range[a], total)
        for a in comp_args:
            table.size[a] = sz[(a, n)]
    return table


def tight_estimates(rules) -> EstimateTable:
    """The tight-program formulas evaluated directly over the dependency graph.

    No components or partitions are involved; raises :class:`NotTight` on a
    program whose dependency graph has a cycle.
    """
    rules = tuple(rules)
    graph = build_dependency_graph(rules)
    if not is_tight(graph):
        raise NotTight("program is not tight")
    order = list(nx.lexicographical_topological_sort(graph.to_networkx()))
    oc_sets = {a: frozenset(s) for a, s in _oc_table(rules).items()}
    oc_all = frozenset(oc_program(rules))
    table = EstimateTable({}, {}, {}, {}, oc_sets, oc_all)
    defining = {}
    for r in rules:
        if r.head is not None:
            defining.setdefault(r.head.key, []).append(r)

    for pred in order:
        for i in range(1, pred[1] + 1):
            a = ArgumentId(pred[0], pred[1], i)
            oc = set(table.oc(a))
            lows, highs, sizes = list(oc), list(oc), []
            for r in defining.get(pred, ()):
                t = r.head.terms[i - 1]
                if not isinstance(t, Variable):
                    continue
                body = args(r.positive_body, t.name)
                if not body:
                    lows.append(min(oc_all) if oc_all else None)
                    highs.append(max(oc_all) if oc_all else None)
                    sizes.append(len(oc_all))
                    continue
                bl = [table.est_min[b] for b in body]
                bh = [table.est_max[b] for b in body]
                if None not in bl:
                    lows.append(max(bl))
                if None not in bh:
                    highs.append(min(bh))
                sizes.append(min(table.size[b] for b in body))
            lows = [v for v in lows if v is not None]
            highs = [v for v in highs if v is not None]
            table.est_min[a] = min(lows) if lows else None
            table.est_max[a] = max(highs) if highs else None
            table.range[a] = _range(table.est_min[a], table.est_max[a], len(oc_all))
            table.size[a] = min(table.range[a], len(oc) + sum(sizes))
    return table


# ---------------------------------------------------------------- rule and program size


def kvars(rule, keys=None) -> set:
    """Variables of the rule's positive body that sit at a key position."""
    out = set()
    for atom in rule.size_body:
        positions = key_positions(keys, atom.key)
        for i, t in enumerate(atom.terms, start=1):
            if isinstance(t, Variable) and i in positions:
                out.add(t.name)
    return out


def rule_size(rule, table: EstimateTable, keys=None) -> int:
    """Estimated number of ground instances of ``rule``.

    Non-representative rules (extra heads split off a disjunction or choice)
    count 0 so their statement is counted once.
    """
    if not rule.representative:
        return 0
    product = 1
    for var in sorted(kvars(rule, keys)):
        product *= min(table.size[b] for b in args(rule.size_body, var))
    return product


@dataclass
class Analysis:
    graph: DependencyGraph
    components: ComponentAnalysis
    table: EstimateTable
    rule_sizes: tuple
    total: int

    @property
    def tight(self) -> bool:
        return is_tight(self.graph)

    @property
    def diagnostics(self) -> list:
        return sorted(set(self.components.diagnostics) | set(self.table.diagnostics))


def analyze_rules(rules, keys=None) -> Analysis:
    rules = tuple(rules)
    graph = build_dependency_graph(rules)
    components = build_component_analysis(graph, rules)
    table = estimate_arguments(rules, components)
    sizes = tuple(rule_size(r, table, keys) for r in rules)
    return Analysis(graph, components, table, sizes, sum(sizes))


def analyze(program, keys=None) -> Analysis:
    return analyze_rules(program.rules, program.keys if keys is None else keys)


def program_size(program, keys=None) -> int:
    """Sum of rule-size estimates over representative rules, facts included."""
    return analyze(program, keys).total


@dataclass(frozen=True)
class Decision:
    keep: bool
    original_size: int
    rewritten_size: int

    def __str__(self):
        verdict = "Keep" if self.keep else "Discard"
        return f"{verdict} (original {self.original_size}, rewritten {self.rewritten_size})"


def decide_rewrite(original, rewritten, keys=None) -> Decision:
    """Keep the rewriting iff its estimate is no larger than the original's."""
    a = program_size(original, keys)
    b = program_size(rewritten, keys)
    return Decision(b <= a, a, b)


def pick_best(candidates, keys=None) -> int:
    """Index of the candidate with the smallest estimate; the first one on ties."""
    if not candidates:
        raise EmptyCandidateList("no candidate programs given")
    sizes = [program_size(p, keys) for p in candidates]
    return sizes.index(min(sizes))
