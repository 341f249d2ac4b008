"""Predicate dependency graph, its condensation, and component partitions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .normalize import ArgumentId
from .syntax import Variable

log = logging.getLogger(__name__)


def predicate_name(pred) -> str:
    return f"{pred[0]}/{pred[1]}"


@dataclass(frozen=True)
class DependencyGraph:
    nodes: frozenset
    edges: frozenset  # (body predicate, head predicate)

    def successors(self, pred):
        return {q for p, q in self.edges if p == pred}

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(sorted(self.nodes))
        g.add_edges_from(sorted(self.edges))
        return g


def build_dependency_graph(rules) -> DependencyGraph:
    nodes, edges = set(), set()
    for r in rules:
        body = {a.key for a in r.positive_body}
        nodes |= body
        if r.head is not None:
            nodes.add(r.head.key)
            edges |= {(p, r.head.key) for p in body}
    return DependencyGraph(frozenset(nodes), frozenset(edges))


def is_tight(graph: DependencyGraph) -> bool:
    """True iff the graph has no directed cycle; a self-loop is a cycle."""
    if any(p == q for p, q in graph.edges):
        return False
    return nx.is_directed_acyclic_graph(graph.to_networkx())


@dataclass
class ComponentAnalysis:
    """Strongly connected components in topological order, with their modules.

    ``components[c]`` is the c-th component of a fixed topological order, so the
    strong strata rank of a predicate is its component index plus one.
    ``partitions[c]`` is the list of groups M1..Mn (lists of rule indices into
    ``rules``), or ``None`` when the module is non-empty but has no exit rule.
    """

    rules: tuple
    components: list
    component_of: dict
    component_edges: frozenset
    rank: dict
    modules: dict
    recursive: frozenset
    partitions: dict
    diagnostics: list = field(default_factory=list)

    def arguments(self, component: Optional[int] = None) -> list:
        comps = range(len(self.components)) if component is None else [component]
        return [ArgumentId(name, arity, i)
                for c in comps
                for name, arity in sorted(self.components[c])
                for i in range(1, arity + 1)]

    def cardinality(self, component: int) -> int:
        groups = self.partitions[component]
        return 0 if groups is None else len(groups)

    def rules_M(self, arg: ArgumentId, k: int, cumulative: bool = False) -> list:
        """Rules of group ``k`` (or of groups 1..k) headed by ``arg.key`` with a
        variable at ``arg.position``."""
        groups = self.partitions[self.component_of[arg.key]]
        if groups is None:
            return []
        chosen = groups[:k] if cumulative else groups[k - 1:k]
        out = []
        for g in chosen:
            for idx in g:
                h = self.rules[idx].head
                if h.key == arg.key and isinstance(h.terms[arg.position - 1], Variable):
                    out.append(idx)
        return out


def _topological_components(graph: DependencyGraph):
    g = graph.to_networkx()
    cond = nx.condensation(g)
    members = {c: frozenset(cond.nodes[c]["members"]) for c in cond.nodes}
    order = list(nx.lexicographical_topological_sort(cond, key=lambda c: min(members[c])))
    index = {c: i for i, c in enumerate(order)}
    components = [members[c] for c in order]
    comp_edges = frozenset((index[a], index[b]) for a, b in cond.edges)
    return components, comp_edges


def _partition(module, rules, members, recursive):
    exit_rules = [i for i in module if i not in recursive]
    if not exit_rules:
        return None, []
    groups = [exit_rules]
    available = {rules[i].head.key for i in exit_rules}
    pending = [i for i in module if i in recursive]
    while pending:
        last_heads = {rules[i].head.key for i in groups[-1]}
        placed, rest = [], []
        for i in pending:
            inside = {a.key for a in rules[i].positive_body if a.key in members}
            if inside <= available and inside & last_heads:
                placed.append(i)
            else:
                rest.append(i)
        if not placed:
            break
        groups.append(placed)
        available |= {rules[i].head.key for i in placed}
        pending = rest
    return groups, pending


def build_component_analysis(graph: DependencyGraph, rules) -> ComponentAnalysis:
    rules = tuple(rules)
    components, comp_edges = _topological_components(graph)
    component_of = {p: c for c, members in enumerate(components) for p in members}
    rank = {p: c + 1 for p, c in component_of.items()}

    modules = {c: [] for c in range(len(components))}
    recursive = set()
    for i, r in enumerate(rules):
        if r.head is None:
            continue
        c = component_of[r.head.key]
        modules[c].append(i)
        if any(component_of[a.key] == c for a in r.positive_body):
            recursive.add(i)

    partitions, diagnostics = {}, []
    for c, module in modules.items():
        if not module:
            partitions[c] = []
            continue
        groups, unplaced = _partition(module, rules, components[c], recursive)
        if unplaced:
            names = "; ".join(sorted(rules[i].source or str(rules[i]) for i in unplaced))
            msg = (f"component {{{', '.join(sorted(map(predicate_name, components[c])))}}}: "
                   f"{len(unplaced)} recursive rule(s) never enabled, placed in a final group: "
                   f"{names}")
            log.warning(msg)
            diagnostics.append(msg)
            groups.append(unplaced)
        partitions[c] = groups
    return ComponentAnalysis(rules, components, component_of, comp_edges, rank, modules,
                             frozenset(recursive), partitions, diagnostics)


def to_dot(graph: DependencyGraph, analysis: Optional[ComponentAnalysis] = None) -> str:
    lines = ["digraph dependency {"]
    for p in sorted(graph.nodes):
        lines.append(f'  "{predicate_name(p)}";')
    for p, q in sorted(graph.edges):
        lines.append(f'  "{predicate_name(p)}" -> "{predicate_name(q)}";')
    lines.append("}")
    if analysis is not None:
        lines.append("digraph components {")
        for c, members in enumerate(analysis.components):
            label = ", ".join(sorted(map(predicate_name, members)))
            lines.append(f'  c{c + 1} [label="{{{label}}}"];')
        for a, b in sorted(analysis.component_edges):
            lines.append(f"  c{a + 1} -> c{b + 1};")
        lines.append("}")
    return "\n".join(lines) + "\n"
