import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from posmodal.deep import (
    DeepDerivation, DeepRule, DeepStep, StepError, apply_step, check_deep,
    context_lift, deep_to_seq, dump_derivation, enumerate_steps, load_derivation,
    seq_to_deep, step_residuals,
)
from posmodal.formula import (
    And, Context, Dia, HOLE, Sequent, Substitution, TOP, Var, is_valid_position,
    parse_formula, parse_sequent, plug, positions, subformula_at,
)
from posmodal.logics import builtin_logics
from posmodal.rewrite import RewriteSystem, logic_of
from posmodal.sequent import (
    and_e1, and_e2, and_intro, check_sequent_proof, identity, mono,
)

from helpers import contexts, formulas, random_derivation, random_formula, random_proof_from

KP, K4, S4, S5 = builtin_logics()
p, q, r = Var("p"), Var("q"), Var("r")
F = parse_formula
SWAP = RewriteSystem.of(("ab", "ba", "swap"))
L_SWAP = logic_of(SWAP)


def step(pos, rule, schema=None, **sub):
    subst = Substitution.of({k: F(v) for k, v in sub.items()}) if schema else None
    return DeepStep(tuple(pos), DeepRule(rule), schema, subst)


def test_apply_step_examples():
    assert apply_step(F("<a>p"), step((), "AndDup")) == F("<a>p & <a>p")
    assert apply_step(F("<a>(p & q)"), step(("body",), "AndE2")) == F("<a>q")
    ax = step(("body",), "Axiom", "swap", P="p")
    assert apply_step(F("<b><a><b>p"), ax, L_SWAP) == F("<b><b><a>p")


def test_apply_step_errors():
    with pytest.raises(StepError):
        apply_step(F("p"), step(("left",), "TopI"))
    with pytest.raises(StepError):
        apply_step(F("p"), step((), "AndE1"))
    with pytest.raises(StepError):
        apply_step(F("<a><b>p"), step((), "Axiom", "swap", P="q"), L_SWAP)
    with pytest.raises(StepError):
        apply_step(F("<a><b>p"), step((), "Axiom", "nope", P="p"), L_SWAP)


def test_check_deep_examples():
    assert check_deep(DeepDerivation([p, And(p, p)], [step((), "AndDup")]))
    assert check_deep(DeepDerivation([F("p & q"), q, TOP], [step((), "AndE2"), step((), "TopI")]))
    v = check_deep(DeepDerivation([p, q], [step((), "AndE1")]))
    assert not v and v.where == 0


def test_check_deep_reports_first_failure():
    d = DeepDerivation([p, And(p, p), p, q], [step((), "AndDup"), step((), "AndE1"), step((), "TopI")])
    v = check_deep(d)
    assert not v and v.where == 2


def test_context_lift_examples():
    d = DeepDerivation([p, And(p, p)], [step((), "AndDup")])
    lifted = context_lift(d, Context(Dia("a", HOLE)))
    assert lifted.formulas == (F("<a>p"), F("<a>(p & p)"))
    assert lifted.steps[0].position == ("body",)
    assert context_lift(d, Context()) == d
    lifted = context_lift(d, Context(And(HOLE, r)))
    assert lifted.formulas == (F("p & r"), F("p & p & r"))
    assert check_deep(lifted)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), contexts(), st.sampled_from(builtin_logics()))
def test_context_lift_preserves_validity(seed, c, logic):
    rng = random.Random(seed)
    d = random_derivation(rng, random_formula(rng), logic, 5)
    lifted = context_lift(d, c, logic)
    assert check_deep(lifted, logic)
    assert len(lifted) == len(d)
    assert (lifted.first, lifted.last) == (plug(c, d.first), plug(c, d.last))


def test_seq_to_deep_examples():
    assert seq_to_deep(identity(p), KP) == DeepDerivation([p])

    proof = and_intro(and_e2(p, q), and_e1(p, q))
    d = seq_to_deep(proof, KP)
    assert check_deep(d, KP)
    assert (d.first, d.last) == (F("p & q"), F("q & p"))
    # C, C & C, ..., A & C, ..., A & B
    assert d.formulas == (F("p & q"), F("p & q & (p & q)"), F("q & (p & q)"), F("q & p"))

    d = seq_to_deep(mono("a", and_e1(p, q)), KP)
    assert d.formulas == (F("<a>(p & q)"), F("<a>p"))
    assert d.steps == (step(("body",), "AndE1"),)


def test_deep_to_seq_examples():
    assert deep_to_seq(DeepDerivation([p]), KP) == identity(p)

    d = DeepDerivation([p, And(p, p), p], [step((), "AndDup"), step((), "AndE1")])
    proof = deep_to_seq(d, KP)
    assert proof.conclusion == Sequent(p, p)
    assert check_sequent_proof(proof, KP)

    d = DeepDerivation([F("<a><b>p"), F("<b><a>p")], [step((), "Axiom", "swap", P="p")])
    proof = deep_to_seq(d, L_SWAP)
    assert proof.conclusion == parse_sequent("<a><b>p |- <b><a>p")
    assert check_sequent_proof(proof, L_SWAP)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(builtin_logics()))
def test_translations_round_trip(seed, logic):
    rng = random.Random(seed)
    proof = random_proof_from(rng, random_formula(rng), logic, 5)
    d = seq_to_deep(proof, logic)
    assert check_deep(d, logic)
    assert (d.first, d.last) == (proof.conclusion.lhs, proof.conclusion.rhs)
    back = deep_to_seq(d, logic)
    assert check_sequent_proof(back, logic)
    assert back.conclusion == proof.conclusion


# --- residuals ---------------------------------------------------------------

def test_residuals_of_duplication():
    assert step_residuals(F("p"), step((), "AndDup"), ()) == {("left",), ("right",)}
    f = F("<a>(p & q)")
    assert step_residuals(f, step(("body",), "AndDup"), ("body", "right")) == {
        ("body", "left", "right"), ("body", "right", "right")}


def test_residuals_of_deletion():
    f = F("p & q")
    assert step_residuals(f, step((), "AndE1"), ("right",)) == set()
    assert step_residuals(f, step((), "AndE1"), ("left",)) == {()}
    assert step_residuals(f, step((), "AndE1"), ()) == set()
    assert step_residuals(f, step(("left",), "TopI"), ("left",)) == set()


def test_residuals_outside_redex_are_unchanged():
    f = F("<a>p & q")
    assert step_residuals(f, step(("left", "body"), "AndDup"), ("right",)) == {("right",)}


def test_residuals_through_word_axiom():
    f = F("<a><b>r")
    st_ = step((), "Axiom", "swap", P="r")
    assert apply_step(f, st_, L_SWAP) == F("<b><a>r")
    # r sits at body.body before and after
    assert step_residuals(f, st_, ("body", "body"), L_SWAP) == {("body", "body")}
    # the diamonds belong to the pattern
    assert step_residuals(f, st_, ("body",), L_SWAP) == set()


def test_residuals_through_duplicating_schema():
    dup = logic_of(RewriteSystem.of(("a", "aa", "grow")))
    f = F("<c><a>(p & q)")
    st_ = step(("body",), "Axiom", "grow", P="p & q")
    assert step_residuals(f, st_, ("body", "body", "right"), dup) == {("body", "body", "body", "right")}
    s5 = S5
    f = F("<a>p & <a>q")
    st5 = DeepStep((), DeepRule.AXIOM, "5", Substitution.of({"A": p, "B": q}, {"a": "a"}))
    assert apply_step(f, st5, s5) == F("<a>(p & <a>q)")
    assert step_residuals(f, st5, ("right", "body"), s5) == {("body", "right", "body")}


def test_residuals_of_invalid_position():
    with pytest.raises(StepError):
        step_residuals(F("p"), step((), "AndDup"), ("left",))


@settings(max_examples=150, deadline=None)
@given(formulas(max_leaves=5), st.data())
def test_residuals_hold_copies(f, data):
    logic = S4
    steps = list(enumerate_steps(f, logic, {"a", "b"}))
    st_ = data.draw(st.sampled_from(steps))
    q_ = data.draw(st.sampled_from(list(positions(f))))
    # only positions the step does not rewrite from within
    assume(q_[: len(st_.position)] == st_.position or st_.position[: len(q_)] != q_)
    g = apply_step(f, st_, logic)
    here = subformula_at(f, q_)
    for res in step_residuals(f, st_, q_, logic):
        assert is_valid_position(g, res)
        assert subformula_at(g, res) == here


# --- files -------------------------------------------------------------------

def test_derivation_file_round_trip():
    d = DeepDerivation(
        [F("<a><b>p"), F("<a><b>p & <a><b>p"), F("<b><a>p & <a><b>p"), F("<b><a>p")],
        [step((), "AndDup"), step(("left",), "Axiom", "swap", P="p"), step((), "AndE1")],
    )
    text = dump_derivation(d, "thue:rules.txt")
    assert text == (
        "logic: thue:rules.txt\n"
        "formula: <a><b>p\n"
        "step: AndDup @ root\n"
        "formula: <a><b>p & <a><b>p\n"
        "step: Axiom @ left [schema=swap sub=P=p]\n"
        "formula: <b><a>p & <a><b>p\n"
        "step: AndE1 @ root\n"
        "formula: <b><a>p\n"
    )
    back, ref = load_derivation(text)
    assert back == d and ref == "thue:rules.txt"
    assert dump_derivation(back, ref) == text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(builtin_logics()))
def test_random_derivation_files_round_trip(seed, logic):
    rng = random.Random(seed)
    d = random_derivation(rng, random_formula(rng), logic, 6)
    text = dump_derivation(d, logic.name)
    back, _ = load_derivation(text)
    assert back == d
    assert dump_derivation(back, logic.name) == text


def test_derivation_file_errors():
    with pytest.raises(ValueError):
        load_derivation("formula: p\nformula: q\n")
    with pytest.raises(ValueError):
        load_derivation("step: AndDup @ root\n")
    with pytest.raises(ValueError):
        load_derivation("formula: p\nstep: Dance @ root\nformula: p\n")
