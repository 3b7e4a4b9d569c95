import random

import pytest
from hypothesis import given, settings, strategies as st

from posmodal.deep import DeepDerivation, DeepRule, DeepStep, check_deep, replay
from posmodal.formula import Substitution, formula_word, parse_formula
from posmodal.logics import get_logic
from posmodal.normalize import (
    NormalizationError, contains_top, eliminate_conjunction, eliminate_top,
)
from posmodal.rewrite import RewriteSystem, logic_of, rewrite_to_deep

from helpers import inject_detours, random_rewrite_derivation, random_system

F = parse_formula
KP = get_logic("kp")
A_TO_B = RewriteSystem.of(("a", "b", "ab"))
L_AB = logic_of(A_TO_B)


def step(pos, rule, schema=None, **sub):
    subst = Substitution.of({k: F(v) for k, v in sub.items()}) if schema else None
    return DeepStep(tuple(pos), DeepRule(rule), schema, subst)


def _conj_free(d):
    return d.count(DeepRule.AND_DUP, DeepRule.AND_E1, DeepRule.AND_E2, DeepRule.TOP_I) == 0


def test_top_in_a_copy_that_is_dropped():
    d = replay(F("p"), [step((), "AndDup"), step(("right",), "TopI"), step((), "AndE1")], KP)
    assert d.formulas == (F("p"), F("p & p"), F("p & T"), F("p"))
    out = eliminate_top(d, KP)
    assert check_deep(out, KP)
    assert out.count(DeepRule.TOP_I) == 0
    assert (out.first, out.last) == (d.first, d.last)
    assert out.formulas == (F("p"), F("p & p"), F("p"))


def test_top_free_derivation_is_a_fixpoint():
    d = replay(F("<a>p"), [step((), "AndDup"), step((), "AndE2")], KP)
    assert eliminate_top(d, KP) == d


def test_top_duplicated_then_erased():
    steps = [step((), "AndDup"), step(("right",), "TopI"), step(("right",), "AndDup"),
             step(("right",), "AndE2"), step((), "AndE1")]
    d = replay(F("<a>p"), steps, KP)
    out = eliminate_top(d, KP)
    assert check_deep(out, KP) and out.count(DeepRule.TOP_I) == 0
    assert (out.first, out.last) == (d.first, d.last)
    assert not any(contains_top(f) for f in out.formulas)


def test_top_flowing_through_an_axiom():
    # <a>T is rewritten to <b>T, so the axiom's substitution must follow.
    d = replay(F("<a>p"), [step((), "AndDup"), step(("right", "body"), "TopI"),
                           step(("right",), "Axiom", "ab", P="T"), step((), "AndE1")], L_AB)
    out = eliminate_top(d, L_AB)
    assert check_deep(out, L_AB)
    assert out.steps[1] == step(("right",), "Axiom", "ab", P="p")
    assert out.formulas[2] == F("<a>p & <b>p")


def test_top_in_endpoints_is_rejected():
    with pytest.raises(NormalizationError):
        eliminate_top(DeepDerivation([F("T")]), KP)


def test_non_word_logic_is_rejected():
    with pytest.raises(NormalizationError):
        eliminate_top(DeepDerivation([F("p")]), get_logic("s5p"))


def test_conjunction_detour_collapses():
    d = replay(F("<a>p"), [step((), "AndDup"), step(("left",), "Axiom", "ab", P="p"),
                           step((), "AndE1")], L_AB)
    assert d.formulas == (F("<a>p"), F("<a>p & <a>p"), F("<b>p & <a>p"), F("<b>p"))
    out = eliminate_conjunction(d, L_AB)
    assert out.formulas == (F("<a>p"), F("<b>p"))
    assert out.steps == (step((), "Axiom", "ab", P="p"),)


def test_axiom_only_derivation_is_a_fixpoint():
    d = replay(F("<a><a>p"), [step((), "Axiom", "ab", P="<a>p"), step(("body",), "Axiom", "ab", P="p")], L_AB)
    assert eliminate_conjunction(d, L_AB) == d


def test_both_conjuncts_rewritten():
    d = replay(F("<a><a>p"), [
        step((), "AndDup"),
        step(("left", "body"), "Axiom", "ab", P="p"),
        step(("right",), "Axiom", "ab", P="<a>p"),
        step(("right", "body"), "Axiom", "ab", P="p"),
        step((), "AndE2"),
    ], L_AB)
    out = eliminate_conjunction(d, L_AB)
    assert check_deep(out, L_AB) and _conj_free(out)
    assert (out.first, out.last) == (F("<a><a>p"), F("<b><b>p"))
    assert len(out) == 2


def test_outer_step_after_inner_work():
    # the conjunction lives under <a>, which is itself rewritten before the AndE
    d = replay(F("<a><a>p"), [
        step(("body",), "AndDup"),
        step(("body", "left"), "Axiom", "ab", P="p"),
        step((), "Axiom", "ab", P="<b>p & <a>p"),
        step(("body",), "AndE1"),
    ], L_AB)
    out = eliminate_conjunction(d, L_AB)
    assert check_deep(out, L_AB) and _conj_free(out)
    assert out.formulas == (F("<a><a>p"), F("<a><b>p"), F("<b><b>p"))


def test_conjunction_elimination_preconditions():
    d = replay(F("p"), [step((), "AndDup"), step(("right",), "TopI"), step((), "AndE1")], KP)
    with pytest.raises(NormalizationError):
        eliminate_conjunction(d, KP)
    with pytest.raises(NormalizationError):
        eliminate_conjunction(DeepDerivation([F("p & p")]), KP)


def _word_derivation(rng):
    system = random_system(rng)
    rd = random_rewrite_derivation(rng, system)
    return system, logic_of(system), rewrite_to_deep(rd, system)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_eliminate_top_on_detoured_derivations(seed, n):
    rng = random.Random(seed)
    _, logic, d = _word_derivation(rng)
    noisy = inject_detours(rng, d, logic, n)
    assert check_deep(noisy, logic)
    out = eliminate_top(noisy, logic)
    assert check_deep(out, logic)
    assert out.count(DeepRule.TOP_I) == 0
    assert (out.first, out.last) == (d.first, d.last)
    assert len(out) <= len(noisy)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_eliminate_conjunction_on_detoured_derivations(seed, n):
    rng = random.Random(seed)
    _, logic, d = _word_derivation(rng)
    clean = eliminate_top(inject_detours(rng, d, logic, n), logic)
    out = eliminate_conjunction(clean, logic)
    assert check_deep(out, logic)
    assert _conj_free(out)
    assert (out.first, out.last) == (d.first, d.last)
    assert len(out) <= len(clean)


def test_normal_forms_stay_within_word_formulas():
    rng = random.Random(7)
    for _ in range(20):
        _, logic, d = _word_derivation(rng)
        out = eliminate_conjunction(eliminate_top(inject_detours(rng, d, logic, 3), logic), logic)
        assert out.first == d.first and out.last == d.last
        assert all(formula_word(f) is not None for f in out.formulas)
