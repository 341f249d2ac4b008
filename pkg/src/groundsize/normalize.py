"""Lowering of parsed rules to the plain rules the size formulas consume.

Each source statement goes through pool/interval expansion, aggregate
stripping, head splitting and term lowering, then a safety check.  Every
expanded copy of a statement forms one *group*; heads split off a disjunction
or choice share the group, and exactly one of them is the group's
representative, so rule-size estimation counts the statement once per copy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

from .syntax import (Atom, BinaryOpTerm, Choice, ChoiceElement, ComparisonLiteral,
                     ConstantTable, Disjunction, FunctionTerm, IntegerConstant,
                     IntervalTerm, Literal, PoolTerm, RawRule, Variable, iter_subterms,
                     term_variables)

DEFAULT_EXPANSION_LIMIT = 10**6


class NormalizationError(ValueError):
    pass


class IntervalBoundNotGround(NormalizationError):
    pass


class ExpansionLimitExceeded(NormalizationError):
    pass


class UnsafeRule(NormalizationError):
    def __init__(self, rule, variables):
        self.rule = rule
        self.variables = frozenset(variables)
        names = ", ".join(sorted(self.variables))
        super().__init__(f"unsafe rule '{rule}': variable(s) {names} "
                         "do not occur in the positive body")


@dataclass(frozen=True, order=True)
class ArgumentId:
    """Position ``position`` (1-based) of predicate ``predicate/arity``."""

    predicate: str
    arity: int
    position: int

    def __post_init__(self):
        if not 1 <= self.position <= self.arity:
            raise ValueError(f"position {self.position} outside arity {self.arity}")

    @property
    def key(self):
        return (self.predicate, self.arity)

    def __str__(self):
        return f"{self.predicate}/{self.arity}[{self.position}]"


@dataclass(frozen=True)
class EstimationRule:
    head: Optional[Atom]
    positive_body: tuple
    ignored: int
    origin: int
    group: int
    representative: bool
    # positive body of the statement before choice conditions were folded in;
    # the rule-size product ranges over this
    size_body: tuple = ()
    guard_vars: frozenset = frozenset()
    # bound by `V = t`, `V = #agg{..}`, or standing for multi-variable arithmetic
    assigned: frozenset = frozenset()
    source: str = ""

    def variables(self) -> set:
        out = set()
        if self.head is not None:
            out |= self.head.variables()
        for a in self.positive_body:
            out |= a.variables()
        return out

    def __str__(self):
        head = "" if self.head is None else str(self.head)
        body = ", ".join(map(str, self.positive_body))
        if self.ignored:
            body += f"{', ' if body else ''}<{self.ignored} ignored>"
        return f"{head} :- {body}." if body else (f"{head}." if head else ":- .")


def args(atoms, variable: str) -> set:
    """Arguments ``p[i]`` of ``atoms`` whose term is exactly ``variable``."""
    out = set()
    for a in atoms:
        for i, t in enumerate(a.terms, start=1):
            if isinstance(t, Variable) and t.name == variable:
                out.add(ArgumentId(a.predicate, a.arity, i))
    return out


# ---------------------------------------------------------------- expansion


def evaluate_ground(term, constants: Optional[ConstantTable] = None) -> int:
    """Integer value of a variable-free arithmetic term."""
    if isinstance(term, IntegerConstant):
        if constants is not None and term.value in constants.inverse:
            raise IntervalBoundNotGround(
                f"interval bound {constants.inverse[term.value]} is a symbolic constant")
        return term.value
    if isinstance(term, BinaryOpTerm):
        a = evaluate_ground(term.left, constants)
        b = evaluate_ground(term.right, constants)
        try:
            if term.op == "+":
                return a + b
            if term.op == "-":
                return a - b
            if term.op == "*":
                return a * b
            if term.op == "/":
                return a // b
            if term.op == "\\":
                return a % b
            if term.op == "**":
                return a ** b
        except ZeroDivisionError:
            raise IntervalBoundNotGround(f"division by zero in interval bound {term}") from None
    raise IntervalBoundNotGround(f"interval bound {term} is not a ground integer expression")


def _count_alternatives(term, constants) -> int:
    if isinstance(term, PoolTerm):
        return sum(_count_alternatives(m, constants) for m in term.members)
    if isinstance(term, IntervalTerm):
        lo = evaluate_ground(term.low, constants)
        hi = evaluate_ground(term.high, constants)
        return max(0, hi - lo + 1)
    n = 1
    if isinstance(term, FunctionTerm):
        for a in term.args:
            n *= _count_alternatives(a, constants)
    elif isinstance(term, BinaryOpTerm):
        n = (_count_alternatives(term.left, constants)
             * _count_alternatives(term.right, constants))
    return n


def _expand_term(term, constants) -> list:
    if isinstance(term, PoolTerm):
        return [x for m in term.members for x in _expand_term(m, constants)]
    if isinstance(term, IntervalTerm):
        lo = evaluate_ground(term.low, constants)
        hi = evaluate_ground(term.high, constants)
        return [IntegerConstant(v) for v in range(lo, hi + 1)]
    if isinstance(term, FunctionTerm):
        return [FunctionTerm(term.symbol, combo)
                for combo in itertools.product(*(_expand_term(a, constants) for a in term.args))]
    if isinstance(term, BinaryOpTerm):
        return [BinaryOpTerm(term.op, l, r)
                for l in _expand_term(term.left, constants)
                for r in _expand_term(term.right, constants)]
    return [term]


def _expand_slots(slots, constants, limit):
    """Cartesian product of the alternatives of every term in ``slots``."""
    total = 1
    for t in slots:
        total *= _count_alternatives(t, constants)
        if total > limit:
            raise ExpansionLimitExceeded(f"pool/interval expansion exceeds {limit} copies")
    return itertools.product(*(_expand_term(t, constants) for t in slots))


def expand_pools_and_intervals(rule: RawRule, limit: int = DEFAULT_EXPANSION_LIMIT,
                               constants: Optional[ConstantTable] = None) -> list:
    """Copies of ``rule`` with every pool and interval replaced by one of its values.

    Terms inside aggregates are left alone (aggregates are stripped later).
    Inside a choice head, pools and intervals multiply the choice elements
    instead of the rule, as a grounder would.
    """
    head = rule.head
    if isinstance(head, Choice):
        elements = []
        for e in head.elements:
            slots = list(e.atom.terms)
            for c in e.condition:
                slots += list(c.atom.terms) if isinstance(c, Literal) else [c.left, c.right]
            for combo in _expand_slots(slots, constants, limit):
                it = iter(combo)
                atom = Atom(e.atom.predicate, tuple(next(it) for _ in e.atom.terms))
                cond = []
                for c in e.condition:
                    if isinstance(c, Literal):
                        cond.append(Literal(Atom(c.atom.predicate,
                                                 tuple(next(it) for _ in c.atom.terms)), c.negated))
                    else:
                        cond.append(ComparisonLiteral(c.op, next(it), next(it)))
                elements.append(ChoiceElement(atom, tuple(cond)))
                if len(elements) > limit:
                    raise ExpansionLimitExceeded(f"choice expansion exceeds {limit} elements")
        head = replace(head, elements=tuple(elements))
        head_atoms = []
    elif isinstance(head, Atom):
        head_atoms = [head]
    elif isinstance(head, Disjunction):
        head_atoms = list(head.atoms)
    else:
        head_atoms = []

    atoms = head_atoms + list(rule.positive_body) + list(rule.negative_body)
    slots = [t for a in atoms for t in a.terms]
    for c in rule.comparisons:
        slots += [c.left, c.right]

    out = []
    for combo in _expand_slots(slots, constants, limit):
        it = iter(combo)
        rebuilt = [Atom(a.predicate, tuple(next(it) for _ in a.terms)) for a in atoms]
        cmps = tuple(ComparisonLiteral(c.op, next(it), next(it)) for c in rule.comparisons)
        nh = len(head_atoms)
        npos = len(rule.positive_body)
        if isinstance(rule.head, Atom):
            new_head = rebuilt[0]
        elif isinstance(rule.head, Disjunction):
            new_head = Disjunction(tuple(rebuilt[:nh]))
        else:
            new_head = head
        out.append(replace(rule, head=new_head,
                           positive_body=tuple(rebuilt[nh:nh + npos]),
                           negative_body=tuple(rebuilt[nh + npos:]),
                           comparisons=cmps))
    return out


# ---------------------------------------------------------------- aggregates, heads


def strip_aggregates(rule: RawRule) -> RawRule:
    """Drop aggregate literals.  ``V = #agg{..}`` marks ``V`` as assigned."""
    if not rule.aggregates:
        return rule
    assigned = set(rule.assigned)
    for agg in rule.aggregates:
        if agg.negated:
            continue
        for op, bound in agg.guards:
            if op == "=" and isinstance(bound, Variable):
                assigned.add(bound.name)
    return replace(rule, aggregates=(), stripped=rule.stripped + len(rule.aggregates),
                   assigned=frozenset(assigned))


def split_heads(rule: RawRule) -> list:
    """One single-head rule per disjunct or choice element; the first is the representative.

    Choice condition literals are appended to the generated rule's body by sign.
    """
    head = rule.head
    if isinstance(head, Disjunction):
        return [replace(rule, head=a) for a in head.atoms]
    if isinstance(head, Choice):
        if not head.elements:
            return [replace(rule, head=None)]
        out = []
        for e in head.elements:
            pos = [c.atom for c in e.condition if isinstance(c, Literal) and not c.negated]
            neg = [c.atom for c in e.condition if isinstance(c, Literal) and c.negated]
            cmp = [c for c in e.condition if isinstance(c, ComparisonLiteral)]
            out.append(replace(rule, head=e.atom,
                               positive_body=rule.positive_body + tuple(pos),
                               negative_body=rule.negative_body + tuple(neg),
                               comparisons=rule.comparisons + tuple(cmp)))
        return out
    return [rule]


# ---------------------------------------------------------------- term lowering


class _Demote(Exception):
    pass


class SyntheticConstants:
    """Integer codes for function terms and variable-free arithmetic.

    Codes are handed out above ``base`` in sorted order of the terms' text,
    so the assignment does not depend on rule order.
    """

    def __init__(self, keys=(), base: int = 0):
        self.base = base
        self.codes = {k: base + i for i, k in enumerate(sorted(set(keys)), start=1)}
        self.inverse = {v: k for k, v in self.codes.items()}

    def __call__(self, key: str) -> int:
        return self.codes[key]


class _Collector:
    def __init__(self):
        self.keys = set()

    def __call__(self, key: str) -> int:
        self.keys.add(key)
        return 0


def _lower_term(term, synth):
    if isinstance(term, FunctionTerm):
        return IntegerConstant(synth(str(term)))
    if isinstance(term, BinaryOpTerm):
        left = _lower_term(term.left, synth)
        right = _lower_term(term.right, synth)
        names = set(term_variables(left)) | set(term_variables(right))
        if not names:
            return IntegerConstant(synth(str(term)))
        if len(names) == 1:
            return Variable(names.pop())
        raise _Demote()
    return term


def lower_terms(rule: RawRule, synth) -> RawRule:
    """Function terms and ground arithmetic become constants; one-variable
    arithmetic becomes that variable; a positive atom holding arithmetic over
    two or more variables is moved to the negative body.

    In a head such a term is replaced by a fresh variable marked as assigned.
    """
    pos, demoted = [], []
    for a in rule.positive_body:
        try:
            pos.append(Atom(a.predicate, tuple(_lower_term(t, synth) for t in a.terms)))
        except _Demote:
            demoted.append(a)
    head = rule.head
    assigned = set(rule.assigned)
    if isinstance(head, Atom):
        terms = []
        for i, t in enumerate(head.terms, start=1):
            try:
                terms.append(_lower_term(t, synth))
            except _Demote:
                name = f"_Arith{i}"
                assigned.add(name)
                terms.append(Variable(name))
        head = Atom(head.predicate, tuple(terms))
    return replace(rule, head=head, positive_body=tuple(pos),
                   negative_body=rule.negative_body + tuple(demoted),
                   assigned=frozenset(assigned))


# ---------------------------------------------------------------- safety


def _assignment_closure(comparisons, safe, assigned) -> set:
    bound = set(safe) | set(assigned)
    changed = True
    while changed:
        changed = False
        for c in comparisons:
            if c.op != "=":
                continue
            for var, other in ((c.left, c.right), (c.right, c.left)):
                if (isinstance(var, Variable) and var.name not in bound
                        and set(term_variables(other)) <= bound):
                    bound.add(var.name)
                    changed = True
    return bound - set(safe)


def check_safety(rule: EstimationRule) -> None:
    """Raise :class:`UnsafeRule` unless every variable occurs in the kept positive body."""
    safe = set()
    for a in rule.positive_body:
        safe |= a.variables()
    needed = set(rule.guard_vars)
    if rule.head is not None:
        needed |= rule.head.variables()
    bad = needed - safe - set(rule.assigned)
    if bad:
        raise UnsafeRule(rule.source or rule, bad)


def _estimation_rule(lowered: RawRule, size_body, origin, group, representative, source):
    safe = set()
    for a in lowered.positive_body:
        safe |= a.variables()
    guard = set()
    for a in lowered.negative_body:
        guard |= a.variables()
    for c in lowered.comparisons:
        guard |= c.variables()
    assigned = set(lowered.assigned) | _assignment_closure(lowered.comparisons, safe,
                                                          lowered.assigned)
    head = lowered.head if isinstance(lowered.head, Atom) else None
    return EstimationRule(
        head=head,
        positive_body=lowered.positive_body,
        ignored=len(lowered.negative_body) + lowered.stripped + len(lowered.comparisons),
        origin=origin, group=group, representative=representative,
        size_body=size_body,
        guard_vars=frozenset(guard), assigned=frozenset(assigned - safe),
        source=source)


def _prepared(rules, limit, constants):
    """Expanded and aggregate-free rules per origin: [(origin, [rule, ...]), ...]."""
    return [(origin, [strip_aggregates(r)
                      for r in expand_pools_and_intervals(rule, limit, constants)])
            for origin, rule in enumerate(rules)]


def normalize_rules(rules, constants: Optional[ConstantTable] = None,
                    limit: int = DEFAULT_EXPANSION_LIMIT, sources=None):
    """Lower constant-normalized rules to a tuple of :class:`EstimationRule`.

    Returns ``(estimation_rules, synthetic_constants)``.  Raises
    :class:`UnsafeRule` for the first unsafe rule found.
    """
    prepared = _prepared(rules, limit, constants)
    collector = _Collector()
    for _, copies in prepared:
        for r in copies:
            for part in split_heads(r):
                lower_terms(part, collector)
    if constants is not None:
        base = max([constants.max_original_integer, *constants.forward.values()])
    else:
        base = max([0] + [s.value for r in rules for a in r.atoms() for t in a.terms
                          for s in iter_subterms(t) if isinstance(s, IntegerConstant)])
    synth = SyntheticConstants(collector.keys, base)

    out = []
    group = 0
    for origin, copies in prepared:
        source = str(sources[origin]) if sources is not None else str(rules[origin])
        for r in copies:
            size_body = lower_terms(replace(r, head=None), synth).positive_body
            for k, part in enumerate(split_heads(r)):
                er = _estimation_rule(lower_terms(part, synth), size_body,
                                      origin, group, k == 0, source)
                check_safety(er)
                out.append(er)
            group += 1
    return tuple(out), synth
