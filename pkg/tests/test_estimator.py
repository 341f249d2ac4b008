import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groundsize.depgraph import build_component_analysis, build_dependency_graph
from groundsize.estimator import (EmptyCandidateList, NotTight, analyze, decide_rewrite,
                                  estimate_arguments, kvars, oc_argument, oc_program, pick_best,
                                  program_size, rule_size, tight_estimates)
from groundsize.normalize import args
from groundsize.program import load_program

from support import A, PI1, PI2, PI3, random_keys, random_program, reference_estimates

P1, Q1, Q2, R1 = A("p", 1, 1), A("q", 2, 1), A("q", 2, 2), A("r", 1, 1)
S1, S2, S3 = A("s", 3, 1), A("s", 3, 2), A("s", 3, 3)


def table_of(text):
    return estimate_arguments(load_program(text).rules)


def test_object_constants():
    rules = load_program(PI1).rules
    assert oc_argument(rules, P1) == {1, 2}
    assert oc_argument(rules, Q1) == set()
    assert oc_argument(rules, Q2) == {1}
    assert oc_program(rules) == {1, 2, 3}
    rules2 = load_program(PI2).rules
    assert oc_argument(rules2, R1) == {2, 3, 4}
    assert oc_program(rules2) == {1, 2, 3, 4}
    assert oc_argument(rules2, A("zz", 1, 1)) == set()
    assert oc_program(()) == set()


def test_pi2_bounds():
    t = table_of(PI2)
    assert (t.est_min[R1], t.est_min[P1], t.est_min[S1]) == (2, 1, 2)
    assert t.est_max[S1] == 2
    assert t.range[S1] == 1
    assert t.range[Q2] == 1
    assert len(t.oc_program) == 4


def test_pi2_sizes():
    t = table_of(PI2)
    assert t.size[P1] == 2 and t.size[Q1] == 2 and t.size[S2] == 2
    assert t.size[R1] == 3 and t.size[Q2] == 1


def test_facts_only_argument():
    t = table_of("p(4). p(9). p(6).")
    assert (t.est_min[P1], t.est_max[P1]) == (4, 9)


def test_min_above_max_gives_zero_range():
    # s(X) needs X in both a (values 1..2) and b (values 5..6)
    t = table_of("a(1). a(2). b(5). b(6). s(X) :- a(X), b(X).")
    s = A("s", 1, 1)
    assert t.est_min[s] == 5 and t.est_max[s] == 2
    assert t.range[s] == 0 and t.size[s] == 0


def test_undefined_body_predicate():
    t = table_of("q(X) :- p(X).")
    assert t.est_min[P1] is None and t.size[P1] == 0
    assert t.est_min[A("q", 1, 1)] is None and t.size[A("q", 1, 1)] == 0


def test_no_exit_rule_component_is_zero():
    t = table_of("b(1). a(X) :- c(X), b(X). c(X) :- a(X).")
    assert t.size[A("a", 1, 1)] == 0 and t.range[A("c", 1, 1)] == 0
    assert t.est_min[A("a", 1, 1)] is None


def test_pi3_recursion_matches_memo_free_reference():
    rules = load_program(PI3).rules
    ca = build_component_analysis(build_dependency_graph(rules), rules)
    t = estimate_arguments(rules, ca)
    ref = reference_estimates(rules, ca, memo=False)
    for a, (lo, hi, size) in ref.items():
        assert (t.est_min[a], t.est_max[a], t.size[a]) == (lo, hi, size), a
    assert t.size[Q1] <= t.range[Q1]
    # q[2] now also takes the values of s[1] through the cycle
    assert (t.est_min[Q2], t.est_max[Q2], t.size[Q2]) == (1, 2, 2)


def test_tight_formulas_refuse_cycles():
    with pytest.raises(NotTight):
        tight_estimates(load_program(PI3).rules)


def _same_tables(a, b):
    assert a.arguments() == b.arguments()
    for arg in a.arguments():
        assert (a.est_min[arg], a.est_max[arg], a.range[arg], a.size[arg]) == (
            b.est_min[arg], b.est_max[arg], b.range[arg], b.size[arg]), arg


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_general_equals_tight_formulas(seed):
    rules = load_program(random_program(random.Random(seed), tight=True)).rules
    _same_tables(estimate_arguments(rules), tight_estimates(rules))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_general_equals_reference_on_recursive_programs(seed):
    rules = load_program(random_program(random.Random(seed), tight=False, max_rules=10)).rules
    ca = build_component_analysis(build_dependency_graph(rules), rules)
    t = estimate_arguments(rules, ca)
    for a, (lo, hi, size) in reference_estimates(rules, ca, memo=True).items():
        assert (t.est_min[a], t.est_max[a], t.size[a]) == (lo, hi, size), a


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_table_invariants(seed):
    rules = load_program(random_program(random.Random(seed), tight=False)).rules
    t = estimate_arguments(rules)
    n = len(t.oc_program)
    for a in t.arguments():
        assert 0 <= t.range[a] <= n
        assert 0 <= t.size[a] <= t.range[a]
        if t.range[a] == 0:
            assert t.size[a] == 0


def test_prefix_sizes_never_decrease():
    rules = load_program(PI3).rules
    t = estimate_arguments(rules)
    steps = sorted((j, v) for (a, j), v in t.memo_size.items() if a == Q1)
    values = [v for _, v in steps]
    assert values == sorted(values) and values[-1] == t.size[Q1]


# ---------------------------------------------------------------- rules and programs


def test_kvars():
    prog = load_program(PI2)
    s_rule = prog.rules[-1]
    assert kvars(s_rule) == {"X", "Y", "Z"}
    assert kvars(prog.rules[0]) == set()
    [r] = load_program("h(X,Y) :- q(X,Y,V).").rules
    assert kvars(r, {("q", 3): frozenset({1, 2})}) == {"X", "Y"}


def test_rule_sizes_pi2():
    a = analyze(load_program(PI2))
    assert a.rule_sizes[-1] == 4
    assert a.rule_sizes[3] == 2
    assert a.total == 11


def test_program_totals():
    assert program_size(load_program(PI1)) == 5
    assert program_size(load_program(PI2)) == 11
    assert program_size(load_program("a. b. c(1). c(2).")) == 4
    assert program_size(load_program("")) == 0


def test_fact_rule_size_is_one():
    prog = load_program("p(1).")
    a = analyze(prog)
    assert rule_size(prog.rules[0], a.table) == 1


def test_zero_size_body_argument_gives_zero():
    a = analyze(load_program("p(1). r(X) :- p(X), q(X)."))
    assert a.rule_sizes[-1] == 0


def test_split_heads_count_once():
    a = analyze(load_program("q(1). p(X) | r(X) :- q(X)."))
    assert a.rule_sizes == (1, 1, 0) and a.total == 2


def test_keys_narrow_the_product():
    text = "q(1,1,1). q(1,1,2). q(2,2,3). h(X,Y) :- q(X,Y,V)."
    default = analyze(load_program(text))
    keyed = analyze(load_program(text, keys={("q", 3): frozenset({1, 2})}))
    assert default.rule_sizes[-1] == 2 * 2 * 3
    assert keyed.rule_sizes[-1] == 2 * 2


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_key_narrowing(seed):
    rng = random.Random(seed)
    prog = load_program(random_program(rng, tight=False))
    keys = random_keys(rng, prog)
    plain, keyed = analyze(prog, {}), analyze(prog, keys)
    for r in prog.rules:
        assert kvars(r, keys) <= kvars(r, {})
    if no_zero_factor(prog.rules, plain.table):
        assert keyed.total <= plain.total


def no_zero_factor(rules, table):
    """True when every per-variable factor of every default-key product is positive."""
    return all(min(table.size[b] for b in args(r.size_body, x)) > 0
               for r in rules if r.representative for x in kvars(r, {}))


# ---------------------------------------------------------------- decisions


def test_decisions():
    p1, p2 = load_program(PI1), load_program(PI2)
    assert decide_rewrite(p2, p2).keep                    # tie keeps
    assert not decide_rewrite(p1, p2).keep
    d = decide_rewrite(p2, p1)
    assert d.keep and (d.original_size, d.rewritten_size) == (11, 5)
    extra = load_program(PI2 + " t(1).")
    assert str(decide_rewrite(p2, extra)) == "Discard (original 11, rewritten 12)"
    # a fact that widens p[1] also grows the rules reading p
    assert decide_rewrite(p2, load_program(PI2 + " p(7).")).rewritten_size == 18


def test_pick_best():
    progs = [load_program(t) for t in (PI2, PI1, "p(1). p(2). r(3). q(X,2) :- p(X).")]
    assert pick_best(progs) == 1                          # 11, 5, 5: first minimum
    assert pick_best(progs[:1]) == 0
    unreachable = load_program("p(X) :- q(X).")
    assert pick_best(progs + [unreachable]) == 3
    with pytest.raises(EmptyCandidateList):
        pick_best([])


def test_permutation_invariance():
    rng = random.Random(3)
    for _ in range(30):
        text = random_program(rng, tight=False)
        lines = text.splitlines()
        base = analyze(load_program(text))
        rng.shuffle(lines)
        other = analyze(load_program("\n".join(lines)))
        assert base.total == other.total
        _same_tables(base.table, other.table)
