"""Reference grounder used to measure true grounding sizes at desk scale.

This is a grounding-size oracle, not a solver: rules fire whenever their
positive body is derivable, negative literals and ignored conditions never
block anything, and every head of a split disjunction or choice is derived.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .estimator import oc_program
from .normalize import ArgumentId, NormalizationError
from .syntax import IntegerConstant

DEFAULT_MAX_RULES = 10**6
DEFAULT_MAX_ATOMS = 10**6


class LimitExceeded(RuntimeError):
    def __init__(self, what: str, limit: int):
        super().__init__(f"grounding exceeded the {what} limit of {limit}")
        self.what = what
        self.limit = limit


class UngroundableRule(NormalizationError):
    """A head variable is bound only by arithmetic the oracle does not evaluate."""


# ground atoms are (predicate name, tuple of integer codes)


@dataclass(frozen=True)
class GroundRule:
    head: tuple | None
    body: tuple
    group: int


@dataclass(frozen=True)
class GroundProgram:
    ground_rules: tuple
    derived_atoms: frozenset
    size: int  # counted instances, one per distinct substitution of each group
    fact_count: int
    argument_sizes: dict


def _check_groundable(rule):
    if rule.head is None:
        return
    body_vars = set()
    for a in rule.positive_body:
        body_vars |= a.variables()
    loose = rule.head.variables() - body_vars
    if loose:
        raise UngroundableRule(
            f"cannot ground '{rule.source or rule}': head variable(s) "
            f"{', '.join(sorted(loose))} are computed, not matched")


def _instantiate(atom, binding):
    return atom.predicate, tuple(t.value if isinstance(t, IntegerConstant) else binding[t.name]
                                 for t in atom.terms)


def _match_atom(atom, fact, binding):
    """Extend ``binding`` so that ``atom`` equals the ground ``fact``, or return None."""
    if len(fact[1]) != atom.arity:
        return None
    out = binding
    for t, v in zip(atom.terms, fact[1]):
        if isinstance(t, IntegerConstant):
            if t.value != v:
                return None
        else:
            bound = out.get(t.name)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[t.name] = v
            elif bound != v:
                return None
    return out


def _joins(body, sources, binding=None):
    """All bindings matching ``body`` where atom ``i`` draws from ``sources[i]``.

    ``sources[i]`` maps a predicate key to an iterable of ground atoms.
    """
    binding = {} if binding is None else binding
    if not body:
        yield binding
        return
    first, rest = body[0], body[1:]
    for fact in sources[0].get(first.key, ()):
        extended = _match_atom(first, fact, binding)
        if extended is not None:
            yield from _joins(rest, sources[1:], extended)


def _is_fact(rule) -> bool:
    return (rule.head is not None and not rule.positive_body and not rule.ignored
            and not rule.head.variables())


class _Store:
    def __init__(self, max_atoms):
        self.by_key = defaultdict(set)
        self.count = 0
        self.max_atoms = max_atoms

    def add(self, atom_key, atom) -> bool:
        bucket = self.by_key[atom_key]
        if atom in bucket:
            return False
        if self.count >= self.max_atoms:
            raise LimitExceeded("atom", self.max_atoms)
        bucket.add(atom)
        self.count += 1
        return True


def _fixpoint(rules, max_rules, max_atoms):
    store = _Store(max_atoms)
    produced, seen = [], set()

    def emit(idx, rule, binding):
        head = None if rule.head is None else _instantiate(rule.head, binding)
        body = tuple(_instantiate(a, binding) for a in rule.positive_body)
        key = (idx, head, body)
        if key in seen:
            return None
        if len(produced) >= max_rules:
            raise LimitExceeded("rule", max_rules)
        seen.add(key)
        produced.append(GroundRule(head, body, rule.group))
        return head

    delta = defaultdict(set)
    for idx, r in enumerate(rules):
        if not r.positive_body:
            head = emit(idx, r, {})
            if head is not None and store.add(r.head.key, head):
                delta[r.head.key].add(head)

    while delta:
        old = {k: v - delta.get(k, set()) for k, v in store.by_key.items()}
        full = {k: set(v) for k, v in store.by_key.items()}
        fresh = defaultdict(set)
        for idx, r in enumerate(rules):
            body = r.positive_body
            for k, atom in enumerate(body):
                if atom.key not in delta:
                    continue
                sources = [old] * k + [delta] + [full] * (len(body) - k - 1)
                for binding in _joins(body, sources):
                    head = emit(idx, r, binding)
                    if head is not None and store.add(r.head.key, head):
                        fresh[r.head.key].add(head)
        delta = fresh
    return produced, store


def _count_instances(rules, store, count_facts):
    """Distinct size-body substitutions per group, plus how many were facts."""
    size = facts = 0
    for r in rules:
        if not r.representative:
            continue
        if _is_fact(r):
            facts += 1
            size += count_facts
            continue
        body = r.size_body
        names = sorted(set().union(*(a.variables() for a in body))) if body else []
        found = {tuple(b[n] for n in names)
                 for b in _joins(body, [store.by_key] * len(body))}
        size += len(found)
    return size, facts


def _program_arguments(rules):
    keys = set()
    for r in rules:
        if r.head is not None:
            keys.add(r.head.key)
        keys |= {a.key for a in r.positive_body}
    return [ArgumentId(n, k, i) for n, k in sorted(keys) for i in range(1, k + 1)]


def measure_argument_sizes(ground_rules, arguments=()) -> dict:
    """Distinct constants per argument over all atoms of ``ground_rules``.

    Arguments listed in ``arguments`` but never seen get size 0.
    """
    seen = defaultdict(set)
    for gr in ground_rules:
        atoms = gr.body if gr.head is None else (gr.head, *gr.body)
        for name, values in atoms:
            for i, v in enumerate(values, start=1):
                seen[ArgumentId(name, len(values), i)].add(v)
    sizes = {a: 0 for a in arguments}
    sizes.update({a: len(s) for a, s in seen.items()})
    return dict(sorted(sizes.items()))


def _naive(rules, max_rules, count_facts):
    constants = sorted(oc_program(rules))
    planned = sum(len(constants) ** len(r.variables()) for r in rules)
    if planned > max_rules:
        raise LimitExceeded("rule", max_rules)
    produced, derived = [], set()
    for r in rules:
        names = sorted(r.variables())
        for values in itertools.product(constants, repeat=len(names)):
            binding = dict(zip(names, values))
            head = None if r.head is None else _instantiate(r.head, binding)
            body = tuple(_instantiate(a, binding) for a in r.positive_body)
            produced.append(GroundRule(head, body, r.group))
            derived.update(body)
            if head is not None:
                derived.add(head)
    size = facts = 0
    for r in rules:
        if not r.representative:
            continue
        if _is_fact(r):
            facts += 1
            size += count_facts
        else:
            size += len(constants) ** len(set().union(*(a.variables() for a in r.size_body)))
    return produced, frozenset(derived), size, facts


def ground(program, max_rules: int = DEFAULT_MAX_RULES, max_atoms: int = DEFAULT_MAX_ATOMS,
           naive: bool = False, count_facts: bool = True) -> GroundProgram:
    """Ground ``program`` (a :class:`Program` or a sequence of estimation rules).

    With ``naive`` every variable ranges over all object constants of the
    program instead of over derivable atoms.
    """
    rules = tuple(getattr(program, "rules", program))
    for r in rules:
        _check_groundable(r)
    if naive:
        produced, derived, size, facts = _naive(rules, max_rules, count_facts)
    else:
        produced, store = _fixpoint(rules, max_rules, max_atoms)
        derived = frozenset(a for bucket in store.by_key.values() for a in bucket)
        size, facts = _count_instances(rules, store, count_facts)
    sizes = measure_argument_sizes(produced, _program_arguments(rules))
    produced.sort(key=lambda g: (g.group, g.head is None, g.head or (), g.body))
    return GroundProgram(tuple(produced), derived, size, facts, sizes)


def format_ground(gp: GroundProgram, decode=str) -> str:
    """Ground rules in input syntax, one per line, grouped by source statement."""
    def atom_text(atom):
        name, values = atom
        return f"{name}({','.join(decode(v) for v in values)})" if values else name

    lines = []
    for gr in gp.ground_rules:
        head = "" if gr.head is None else atom_text(gr.head)
        body = ", ".join(map(atom_text, gr.body))
        if body:
            lines.append(f"{head} :- {body}." if head else f":- {body}.")
        else:
            lines.append(f"{head}." if head else ":- .")
    return "\n".join(lines) + ("\n" if lines else "")


def error_factor(predicted: int, actual: int) -> Fraction:
    """Predicted over actual grounding size; above 1 means overestimation."""
    if actual == 0:
        raise ZeroDivisionError("actual grounding size is 0")
    return Fraction(predicted, actual)


def mean_error_factor(factors) -> Fraction:
    factors = list(factors)
    if not factors:
        raise ValueError("no error factors to average")
    return sum(factors, Fraction(0)) / len(factors)
