import random

import pytest

from conftest import random_pattern_term
from terndescent.errors import NonterminationRisk
from terndescent.rewriting import (
    COMPLETED_RULES,
    CORE_RULES,
    Rule,
    RuleSystem,
    canonical_pair,
    check_confluence,
    check_shrinking,
    check_variable_coverage,
    critical_pairs,
    is_joinable,
    normalize,
    rewrite_once,
)
from terndescent.terms import (
    TERNARY_SIGNATURE,
    Var,
    match,
    parse_term,
    replace_at,
    size,
    substitute,
    subterm_at,
)


def T(text):
    return parse_term(text)


def system_of(*labeled):
    return RuleSystem(
        TERNARY_SIGNATURE, tuple(Rule(l, T(lhs), T(rhs)) for l, lhs, rhs in labeled)
    )


class TestRuleInvariants:
    def test_variable_lhs_rejected(self):
        with pytest.raises(ValueError):
            Rule("bad", Var("x"), T("(t x 1 0)"))

    def test_fresh_rhs_variable_rejected(self):
        with pytest.raises(ValueError):
            Rule("bad", T("(t x 1 0)"), Var("y"))

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            system_of(("r", "(t 0 x y)", "y"), ("r", "(t x 0 y)", "y"))

    def test_builtin_systems(self):
        assert [r.label for r in CORE_RULES.rules] == ["1.1", "1.2", "1.3", "1.4", "1.6", "1.7"]
        assert [r.label for r in COMPLETED_RULES.rules[6:]] == ["3.1", "3.2", "3.3", "3.4"]


class TestRewriteOnce:
    def test_single_redex(self):
        assert rewrite_once(COMPLETED_RULES, T("(t 0 a b)")) == {((), "1.1", Var("b"))}

    def test_normal_form(self):
        assert rewrite_once(COMPLETED_RULES, T("(q 1 (t 1 a b) a)")) == set()

    def test_two_redexes(self):
        got = rewrite_once(COMPLETED_RULES, T("(t 1 (q 1 c c) 0)"))
        assert got == {
            ((2,), "3.3", T("(t 1 0 0)")),
            ((), "1.3", T("(q 1 c c)")),
        }

    def test_soundness(self):
        term = T("(t 1 (q 1 (t 0 x y) (t 0 x y)) 0)")
        for pos, label, result in rewrite_once(COMPLETED_RULES, term):
            rule = COMPLETED_RULES.rule(label)
            binding = match(rule.lhs, subterm_at(term, pos))
            assert binding is not None
            assert replace_at(term, pos, substitute(rule.rhs, binding)) == result


class TestNormalize:
    def test_forced_to_zero(self):
        nf, trace = normalize(COMPLETED_RULES, T("(t 1 (q 1 c c) 0)"))
        assert nf == T("0")
        assert [s.label for s in trace] in (["3.3", "1.2"], ["3.3", "1.3"], ["1.3", "3.3"])

    def test_cancellation(self):
        nf, _ = normalize(COMPLETED_RULES, T("(q a b (t a b c))"))
        assert nf == Var("c")

    def test_already_normal(self):
        nf, trace = normalize(COMPLETED_RULES, T("(t a b c)"))
        assert nf == T("(t a b c)")
        assert trace == ()

    def test_trace_replays(self):
        term = T("(q 0 (t 1 x 0) (t 0 y (q a b (t a b z))))")
        nf, trace = normalize(COMPLETED_RULES, term, strategy="seeded-random", seed=7)
        current = term
        for step in trace:
            current = step.term
        assert current == nf

    def test_size_strictly_decreases(self):
        rng = random.Random(3)
        for _ in range(50):
            term = random_pattern_term(rng, 4)
            _, trace = normalize(COMPLETED_RULES, term)
            sizes = [size(term)] + [size(s.term) for s in trace]
            assert all(a > b for a, b in zip(sizes, sizes[1:]))

    def test_nontermination_guard(self):
        growing = system_of(("grow", "(t 1 x 0)", "(t x 1 0)"))
        with pytest.raises(NonterminationRisk):
            normalize(growing, T("(t 1 y 0)"))

    def test_strategy_independence(self):
        # confluence + termination make the normal form strategy-free
        rng = random.Random(11)
        for _ in range(30):
            term = random_pattern_term(rng, 4)
            baseline, _ = normalize(COMPLETED_RULES, term)
            assert normalize(COMPLETED_RULES, term, strategy="leftmost-outermost")[0] == baseline
            for seed in range(100):
                got, _ = normalize(COMPLETED_RULES, term, strategy="seeded-random", seed=seed)
                assert got == baseline


class TestConditions:
    def test_completed_rules_shrink(self):
        report = check_shrinking(COMPLETED_RULES)
        assert report.ok
        assert all(c.ok for c in report.per_rule)

    def test_size_increase_fails(self):
        report = check_shrinking(system_of(("same", "(t 1 x 0)", "(t x 1 0)")))
        assert not report.ok
        assert "size" in report.per_rule[0].detail

    def test_equal_size_fails(self):
        report = check_shrinking(system_of(("swap", "(t x x y)", "(t x y x)")))
        assert not report.ok

    def test_duplicating_variable_fails(self):
        report = check_shrinking(system_of(("dup", "(t x 0 0)", "(q x x 0)")))
        assert not report.ok
        assert "duplicated" in report.per_rule[0].detail

    def test_completed_rules_cover_variables(self):
        assert check_variable_coverage(COMPLETED_RULES).ok

    def test_inner_subterm_missing_variable(self):
        report = check_variable_coverage(system_of(("bad", "(t x (t y y 0) 0)", "x")))
        assert not report.ok

    def test_vacuous_coverage(self):
        assert check_variable_coverage(system_of(("ok", "(t x 1 0)", "x"))).ok


class TestCriticalPairs:
    def test_pair_for_first_derived_identity(self):
        # the overlap of rule 1.1 inside rule 1.6 peaks at q(0,y,t(0,y,z))
        found = False
        for cp in critical_pairs(CORE_RULES):
            if {cp.outer_label, cp.inner_label} == {"1.6", "1.1"} and cp.position == (3,):
                reducts = {cp.left, cp.right}
                assert canonical_pair(*reducts) == canonical_pair(T("(q 0 x y)"), T("y"))
                found = True
        assert found

    def test_pair_for_second_derived_identity(self):
        found = False
        for cp in critical_pairs(CORE_RULES):
            if {cp.outer_label, cp.inner_label} == {"1.6", "1.2"} and cp.position == (3,):
                assert canonical_pair(cp.left, cp.right) == canonical_pair(T("(q x 0 y)"), T("y"))
                found = True
        assert found

    def test_single_rule_no_overlap(self):
        assert critical_pairs(system_of(("1.1", "(t 0 x y)", "y"))) == []

    def test_reducts_are_one_step(self):
        for cp in critical_pairs(CORE_RULES):
            reducts = {r for _, _, r in rewrite_once(CORE_RULES, cp.peak)}
            assert cp.left in reducts
            assert cp.right in reducts


class TestJoinability:
    def test_joinable_in_completed(self):
        assert is_joinable(COMPLETED_RULES, (T("(q 0 y z)"), Var("z")))

    def test_not_joinable_in_core(self):
        assert not is_joinable(CORE_RULES, (T("(q 0 y z)"), Var("z")))

    def test_reflexive(self):
        assert is_joinable(CORE_RULES, (Var("x"), Var("x")))


class TestConfluence:
    def test_completed_rules_confluent(self):
        verdict = check_confluence(COMPLETED_RULES)
        assert verdict.status == "confluent"
        assert verdict.witnesses == ()

    def test_core_rules_not_confluent(self):
        verdict = check_confluence(CORE_RULES)
        assert verdict.status == "not-confluent"
        expected = {
            canonical_pair(rule.lhs, rule.rhs)
            for rule in COMPLETED_RULES.rules
            if rule.label.startswith("3.")
        }
        assert set(verdict.witnesses) == expected

    def test_single_rule_confluent(self):
        verdict = check_confluence(system_of(("1.1", "(t 0 x y)", "y")))
        assert verdict.status == "confluent"

    def test_unknown_without_termination(self):
        verdict = check_confluence(system_of(("same", "(t 1 x 0)", "(t x 1 0)")))
        assert verdict.status == "unknown"
