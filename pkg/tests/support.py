"""Fixtures, random program generators and independent reference evaluators."""

from __future__ import annotations

import functools
import itertools
import random
from pathlib import Path

from groundsize.normalize import ArgumentId, args

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "demos" / "programs"

PI1 = "p(1). p(2). r(3). q(X,1) :- p(X)."
PI2 = PI1 + " r(2). r(4). s(X,Y,Z) :- r(X), p(X), p(Y), q(Y,Z)."
PI3 = PI2 + " q(Y,X) :- s(X,Y,Z)."


def A(name, arity, pos):
    return ArgumentId(name, arity, pos)


# ---------------------------------------------------------------- generators


def _atom(name, terms):
    return f"{name}({','.join(terms)})" if terms else name


def random_program(rng: random.Random, tight: bool = True, max_preds: int = 8,
                   max_rules: int = 15, max_facts: int = 20, constants: int = 6) -> str:
    """A safe random program.  With ``tight`` every body predicate is listed
    before the head predicate, so the dependency graph is acyclic."""
    n_preds = rng.randint(1, max_preds)
    preds = [(f"p{i}", rng.randint(0, 3)) for i in range(n_preds)]
    lines = []
    for _ in range(rng.randint(0, max_facts)):
        name, arity = rng.choice(preds)
        lines.append(_atom(name, [str(rng.randrange(constants)) for _ in range(arity)]) + ".")
    for _ in range(rng.randint(0, max_rules)):
        h = rng.randrange(n_preds)
        pool = preds[:h] if tight else preds
        if not pool:
            continue
        body, body_vars = [], []
        for _ in range(rng.randint(1, 3)):
            name, arity = rng.choice(pool)
            terms = []
            for _ in range(arity):
                if rng.random() < 0.8:
                    v = rng.choice("XYZW")
                    terms.append(v)
                    body_vars.append(v)
                else:
                    terms.append(str(rng.randrange(constants)))
            body.append(_atom(name, terms))
        if rng.random() < 0.1:
            lines.append(":- " + ", ".join(body) + ".")
            continue
        name, arity = preds[h]
        head = [rng.choice(body_vars) if body_vars and rng.random() < 0.8
                else str(rng.randrange(constants)) for _ in range(arity)]
        if rng.random() < 0.2:
            body.append("not blocked")
        lines.append(f"{_atom(name, head)} :- {', '.join(body)}.")
    return "\n".join(lines) + "\n"


def random_keys(rng: random.Random, program) -> dict:
    keys = {}
    preds = {a.key for r in program.rules for a in (r.positive_body + ((r.head,) if r.head else ()))}
    for name, arity in sorted(preds):
        if arity and rng.random() < 0.6:
            k = rng.randint(1, arity)
            keys[(name, arity)] = frozenset(rng.sample(range(1, arity + 1), k))
    return keys


def fact_program(rng: random.Random, max_facts: int = 20) -> str:
    preds = [(f"f{i}", rng.randint(0, 3)) for i in range(rng.randint(1, 4))]
    facts = set()
    for _ in range(rng.randint(1, max_facts)):
        name, arity = rng.choice(preds)
        facts.add(_atom(name, [rng.choice(["a", "b", "c", "1", "2", "7"]) for _ in range(arity)]))
    return " ".join(f + "." for f in sorted(facts))


def cross_product_program(rng: random.Random) -> tuple[str, int, int]:
    """``r(X,Y) :- p(X), q(Y).`` with distinct-constant facts for ``p`` and ``q``."""
    np_, nq = rng.randint(1, 8), rng.randint(1, 8)
    ps = rng.sample(range(50), np_)
    qs = rng.sample(range(50), nq)
    text = " ".join(f"p({c})." for c in ps) + " " + " ".join(f"q({c})." for c in qs)
    return text + " r(X,Y) :- p(X), q(Y).", np_, nq


# ---------------------------------------------------------------- reference evaluators


def reference_estimates(rules, analysis, memo=False):
    """Top-down evaluation of the estimate recursions, straight from their
    definitions.

    Without ``memo`` nothing is cached, which is exponential in general but fine
    for the small example fixtures.  Returns ``{argument: (min, max, size)}``.
    """
    rules = tuple(rules)
    comp_of = analysis.component_of
    oc_all = {t.value for r in rules if r.head is not None for t in r.head.terms
              if hasattr(t, "value")}

    def oc(a):
        return {r.head.terms[a.position - 1].value for r in rules
                if r.head is not None and r.head.key == a.key
                and hasattr(r.head.terms[a.position - 1], "value")}

    def n_of(a):
        return analysis.cardinality(comp_of[a.key])

    def body_args(ridx, a):
        r = rules[ridx]
        return args(r.positive_body, r.head.terms[a.position - 1].name)

    def gr(a, j, kind):
        cands = list(oc(a))
        for ridx in analysis.rules_M(a, j, cumulative=True):
            vals = [split(b, a, j, kind) for b in body_args(ridx, a)]
            if not vals:
                cands.append(min(oc_all) if kind == "min" else max(oc_all))
            elif None not in vals:
                cands.append(max(vals) if kind == "min" else min(vals))
        if not cands:
            return None
        return min(cands) if kind == "min" else max(cands)

    def split(b, a, j, kind):
        if comp_of[b.key] == comp_of[a.key]:
            return gr(b, j - 1, kind)
        return est(b, kind)

    def est(a, kind):
        if analysis.partitions[comp_of[a.key]] is None:
            return None
        return gr(a, n_of(a), kind)

    def rng_(a):
        lo, hi = est(a, "min"), est(a, "max")
        if lo is None or hi is None:
            return 0
        return min(max(0, hi - lo + 1), len(oc_all))

    def size_gr(a, j):
        total = len(oc(a))
        for ridx in analysis.rules_M(a, j, cumulative=True):
            body = body_args(ridx, a)
            if not body:
                total += len(oc_all)
            else:
                total += min(size_split(b, a, j) for b in body)
        return min(rng_(a), total)

    def size_split(b, a, j):
        if comp_of[b.key] == comp_of[a.key]:
            return size_gr(b, j - 1)
        return size(b)

    def size(a):
        if analysis.partitions[comp_of[a.key]] is None:
            return 0
        return size_gr(a, n_of(a))

    if memo:
        gr, est, size_gr, size = map(functools.cache, (gr, est, size_gr, size))
    return {a: (est(a, "min"), est(a, "max"), size(a)) for a in analysis.arguments()}


def reference_components(nodes, edges):
    """Strongly connected components by mutual reachability (transitive closure)."""
    nodes = sorted(nodes)
    reach = {p: {p} for p in nodes}
    for p, q in edges:
        reach[p].add(q)
    changed = True
    while changed:
        changed = False
        for p in nodes:
            extra = set().union(*(reach[q] for q in reach[p])) - reach[p]
            if extra:
                reach[p] |= extra
                changed = True
    comps = {frozenset(q for q in nodes if q in reach[p] and p in reach[q]) for p in nodes}
    return comps, reach


def brute_force_count(rule, atoms_by_key, variables):
    """Ground instances of ``rule`` by trying every assignment over the atoms' constants."""
    domain = sorted({v for bucket in atoms_by_key.values() for _, vals in bucket for v in vals})
    names = sorted(variables)
    count = 0
    for values in itertools.product(domain, repeat=len(names)):
        b = dict(zip(names, values))
        if all((a.predicate, tuple(b[t.name] if hasattr(t, "name") else t.value for t in a.terms))
               in atoms_by_key.get(a.key, ()) for a in rule.size_body):
            count += 1
    return count
