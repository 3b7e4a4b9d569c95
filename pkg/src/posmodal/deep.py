"""Deep-inference derivations: single-premise rules applied inside contexts.

A step names the redex root by position and the rule applied there:

    AndDup   A      =>  A & A
    AndE1    A & B  =>  A
    AndE2    A & B  =>  B
    TopI     A      =>  T
    Axiom    instance of a schema's left side  =>  the right side
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import product
from pathlib import Path

from .formula import (
    HOLE, LEFT, RIGHT, BODY, And, Context, Dia, Formula, Position, Substitution, TOP,
    Top, Var, format_position, is_valid_position, parse_formula, parse_position,
    plug, positions, print_formula, replace_at, size, subformula_at, symbols,
)
from .logics import LogicSpec, Schema, load_logic, match
from .sequent import (
    InvalidProof, Rule, SequentProof, Verdict, VALID, and_e1, and_e2, and_intro,
    axiom as axiom_proof, check_sequent_proof, identity, positive_replacement,
    syllogism, top_intro,
)

__all__ = [
    "DeepRule", "DeepStep", "DeepDerivation", "StepError", "apply_step",
    "check_deep", "context_lift", "concat", "seq_to_deep", "deep_to_seq",
    "step_residuals", "enumerate_steps", "rematch", "replay", "dump_derivation",
    "load_derivation", "parse_step", "read_derivation",
]


class DeepRule(str, Enum):
    AND_DUP = "AndDup"
    AND_E1 = "AndE1"
    AND_E2 = "AndE2"
    TOP_I = "TopI"
    AXIOM = "Axiom"


@dataclass(frozen=True)
class DeepStep:
    position: Position
    rule: DeepRule
    schema: str | None = None
    sub: Substitution | None = None

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(self.position))
        object.__setattr__(self, "rule", DeepRule(self.rule))

    def shifted(self, prefix: Position) -> "DeepStep":
        return DeepStep(tuple(prefix) + self.position, self.rule, self.schema, self.sub)

    def __str__(self):
        text = f"{self.rule.value} @ {format_position(self.position)}"
        if self.rule is DeepRule.AXIOM:
            text += f" [schema={self.schema} sub={self.sub or ''}]"
        return text


@dataclass(frozen=True)
class DeepDerivation:
    formulas: tuple
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.formulas:
            raise ValueError("a derivation has at least one formula")
        if len(self.steps) != len(self.formulas) - 1:
            raise ValueError(f"{len(self.formulas)} formulas need {len(self.formulas) - 1} steps, got {len(self.steps)}")

    @property
    def first(self) -> Formula:
        return self.formulas[0]

    @property
    def last(self) -> Formula:
        return self.formulas[-1]

    def __len__(self):
        return len(self.steps)

    def count(self, *rules: DeepRule) -> int:
        return sum(st.rule in rules for st in self.steps)


class StepError(ValueError):
    pass


def _rewrite(redex: Formula, st: DeepStep, logic: LogicSpec | None) -> Formula:
    rule = st.rule
    if rule is DeepRule.AND_DUP:
        return And(redex, redex)
    if rule is DeepRule.TOP_I:
        return TOP
    if rule in (DeepRule.AND_E1, DeepRule.AND_E2):
        if not isinstance(redex, And):
            raise StepError(f"{rule.value} needs a conjunction, found {print_formula(redex)!r}")
        return redex.left if rule is DeepRule.AND_E1 else redex.right
    if logic is None or st.schema is None or not logic.has_schema(st.schema):
        name = logic.name if logic else "no logic"
        raise StepError(f"schema {st.schema!r} is not an axiom of {name}")
    try:
        inst = logic.schema(st.schema).instance(st.sub or Substitution())
    except ValueError as e:
        raise StepError(str(e)) from None
    if inst.lhs != redex:
        raise StepError(f"axiom {st.schema} premise {print_formula(inst.lhs)!r} does not match {print_formula(redex)!r}")
    return inst.rhs


def apply_step(f: Formula, st: DeepStep, logic: LogicSpec | None = None) -> Formula:
    try:
        redex = subformula_at(f, st.position)
    except IndexError as e:
        raise StepError(str(e)) from None
    return replace_at(f, st.position, _rewrite(redex, st, logic))


def check_deep(d: DeepDerivation, logic: LogicSpec | None = None) -> Verdict:
    for i, st in enumerate(d.steps):
        try:
            got = apply_step(d.formulas[i], st, logic)
        except StepError as e:
            return Verdict(False, i, str(e))
        if got != d.formulas[i + 1]:
            return Verdict(False, i, f"{st} gives {print_formula(got)!r}, not {print_formula(d.formulas[i + 1])!r}")
    return VALID


def _require_valid(d, logic):
    v = check_deep(d, logic)
    if not v:
        raise StepError(f"invalid derivation: {v}")


def replay(start: Formula, steps, logic: LogicSpec | None = None) -> DeepDerivation:
    """Build a derivation by applying ``steps`` from ``start``."""
    formulas = [start]
    for st in steps:
        formulas.append(apply_step(formulas[-1], st, logic))
    return DeepDerivation(formulas, steps)


def concat(*ds: DeepDerivation) -> DeepDerivation:
    formulas, steps = list(ds[0].formulas), list(ds[0].steps)
    for d in ds[1:]:
        if d.first != formulas[-1]:
            raise ValueError(f"cannot join {print_formula(formulas[-1])!r} to {print_formula(d.first)!r}")
        formulas.extend(d.formulas[1:])
        steps.extend(d.steps)
    return DeepDerivation(formulas, steps)


def context_lift(d: DeepDerivation, c: Context, logic: LogicSpec | None = None,
                 check: bool = True) -> DeepDerivation:
    """Run ``d`` inside context ``c``."""
    if check:
        _require_valid(d, logic)
    hole = c.hole_position
    return DeepDerivation([plug(c, f) for f in d.formulas], [st.shifted(hole) for st in d.steps])


# --- sequent proofs <-> derivations ------------------------------------------

def seq_to_deep(p: SequentProof, logic: LogicSpec, check: bool = True) -> DeepDerivation:
    if check:
        v = check_sequent_proof(p, logic)
        if not v:
            raise InvalidProof(str(v))
    return _to_deep(p)


def _to_deep(p: SequentProof) -> DeepDerivation:
    lhs, rhs = p.conclusion.lhs, p.conclusion.rhs
    rule = p.rule
    if rule is Rule.ID:
        return DeepDerivation([lhs])
    if rule is Rule.TOP_INTRO:
        if isinstance(lhs, Top):
            return DeepDerivation([lhs])
        return DeepDerivation([lhs, rhs], [DeepStep((), DeepRule.TOP_I)])
    if rule is Rule.AND_E1:
        return DeepDerivation([lhs, rhs], [DeepStep((), DeepRule.AND_E1)])
    if rule is Rule.AND_E2:
        return DeepDerivation([lhs, rhs], [DeepStep((), DeepRule.AND_E2)])
    if rule is Rule.AXIOM:
        return DeepDerivation([lhs, rhs], [DeepStep((), DeepRule.AXIOM, p.schema, p.sub)])
    if rule is Rule.SYLLOGISM:
        return concat(_to_deep(p.premises[0]), _to_deep(p.premises[1]))
    if rule is Rule.MONO:
        return context_lift(_to_deep(p.premises[0]), Context(Dia(p.label, HOLE)), check=False)
    # AndI: C, C & C, ..., A & C, ..., A & B
    left, right = _to_deep(p.premises[0]), _to_deep(p.premises[1])
    dup = DeepDerivation([lhs, And(lhs, lhs)], [DeepStep((), DeepRule.AND_DUP)])
    first = context_lift(left, Context(And(HOLE, lhs)), check=False)
    second = context_lift(right, Context(And(left.last, HOLE)), check=False)
    return concat(dup, first, second)


def _local_proof(redex: Formula, st: DeepStep, logic: LogicSpec) -> SequentProof:
    rule = st.rule
    if rule is DeepRule.AND_DUP:
        return and_intro(identity(redex), identity(redex))
    if rule is DeepRule.TOP_I:
        return top_intro(redex)
    if rule is DeepRule.AND_E1:
        return and_e1(redex.left, redex.right)
    if rule is DeepRule.AND_E2:
        return and_e2(redex.left, redex.right)
    return axiom_proof(logic, st.schema, st.sub)


def deep_to_seq(d: DeepDerivation, logic: LogicSpec, check: bool = True) -> SequentProof:
    """Syllogism chain of positively replaced per-step proofs."""
    if check:
        _require_valid(d, logic)
    proof = None
    for f, st in zip(d.formulas, d.steps):
        local = _local_proof(subformula_at(f, st.position), st, logic)
        step_proof = positive_replacement(local, Context.at(f, st.position), logic, check=False)
        proof = step_proof if proof is None else syllogism(proof, step_proof)
    return proof if proof is not None else identity(d.first)


# --- residuals ---------------------------------------------------------------

def _occurrences(pattern: Formula, name: str, prefix: Position = ()):
    if isinstance(pattern, Var):
        if pattern.name == name:
            yield prefix
    elif isinstance(pattern, And):
        yield from _occurrences(pattern.left, name, prefix + (LEFT,))
        yield from _occurrences(pattern.right, name, prefix + (RIGHT,))
    elif isinstance(pattern, Dia):
        yield from _occurrences(pattern.body, name, prefix + (BODY,))


def _var_leaf(pattern: Formula, rel: Position):
    """The metavariable whose occurrence is a prefix of ``rel``, with the
    occurrence position; None if ``rel`` ends on pattern structure."""
    p, depth = pattern, 0
    while not isinstance(p, Var):
        if depth == len(rel):
            return None
        step = rel[depth]
        if step == LEFT and isinstance(p, And):
            p = p.left
        elif step == RIGHT and isinstance(p, And):
            p = p.right
        elif step == BODY and isinstance(p, Dia):
            p = p.body
        else:
            return None
        depth += 1
    return p.name, rel[:depth]


def step_residuals(f: Formula, st: DeepStep, q: Position,
                   logic: LogicSpec | None = None) -> set:
    """Positions in the next formula that continue the node at ``q``."""
    q = tuple(q)
    if not is_valid_position(f, q):
        raise StepError(f"position {format_position(q)} not in {print_formula(f)!r}")
    r = st.position
    if q[: len(r)] != r:
        return {q}
    rel = q[len(r):]
    rule = st.rule
    if rule is DeepRule.AND_DUP:
        return {r + (LEFT,) + rel, r + (RIGHT,) + rel}
    if rule is DeepRule.TOP_I:
        return set()
    if rule in (DeepRule.AND_E1, DeepRule.AND_E2):
        keep = LEFT if rule is DeepRule.AND_E1 else RIGHT
        if rel and rel[0] == keep:
            return {r + rel[1:]}
        return set()
    if logic is None:
        raise StepError("axiom residuals need the logic")
    schema = logic.schema(st.schema)
    hit = _var_leaf(schema.lhs, rel)
    if hit is None:
        return set()
    name, occ = hit
    rest = rel[len(occ):]
    return {r + v + rest for v in _occurrences(schema.rhs, name)}


# --- step enumeration --------------------------------------------------------

def _axiom_steps(g: Formula, pos: Position, schema: Schema, signature):
    sub = match(schema.lhs, g, schema.modal_vars)
    if sub is None:
        return
    free = sorted(schema.free_modal_vars())
    for choice in product(sorted(signature), repeat=len(free)):
        labels = dict(sub.label_map)
        labels.update(zip(free, choice))
        yield DeepStep(pos, DeepRule.AXIOM, schema.id, Substitution.of(sub.formula_map, labels))


def enumerate_steps(f: Formula, logic: LogicSpec, signature=None, max_size: int | None = None):
    """Every step applicable to ``f``.

    Modality metavariables occurring only on a schema's right side range
    over ``signature`` (default: symbols of ``f`` and of the logic).
    """
    if signature is None:
        signature = symbols(f) | logic.symbols()
    total = size(f)
    for pos in positions(f):
        g = subformula_at(f, pos)
        gs = size(g)
        if max_size is None or total + gs + 1 <= max_size:
            yield DeepStep(pos, DeepRule.AND_DUP)
        if isinstance(g, And):
            yield DeepStep(pos, DeepRule.AND_E1)
            yield DeepStep(pos, DeepRule.AND_E2)
        if not isinstance(g, Top):
            yield DeepStep(pos, DeepRule.TOP_I)
        for schema in logic.schemata:
            for st in _axiom_steps(g, pos, schema, signature):
                if max_size is not None:
                    if total - gs + size(_rewrite(g, st, logic)) > max_size:
                        continue
                yield st


def rematch(f: Formula, st: DeepStep, logic: LogicSpec) -> DeepStep:
    """Re-derive an Axiom step's substitution against the current redex,
    keeping the instantiated modality metavariables."""
    if st.rule is not DeepRule.AXIOM:
        return st
    schema = logic.schema(st.schema)
    old = st.sub or Substitution()
    fixed = Substitution.of({}, old.label_map)
    sub = match(schema.lhs, subformula_at(f, st.position), schema.modal_vars, fixed)
    if sub is None:
        raise StepError(f"axiom {st.schema} no longer matches at {format_position(st.position)}")
    return DeepStep(st.position, st.rule, st.schema, sub)


# --- text format -------------------------------------------------------------
#
#   logic: <name or file>
#   formula: <a><a>p
#   step: Axiom @ root [schema=4 sub=A=p,<a>=a]
#   formula: <a>p

_STEP = re.compile(r"^(?P<rule>\w+)\s*@\s*(?P<pos>[\w.]*)\s*(?:\[schema=(?P<schema>\S+) sub=(?P<sub>[^\]]*)\])?$")


def dump_derivation(d: DeepDerivation, logic: str | None = None) -> str:
    lines = [f"logic: {logic}"] if logic else []
    for i, f in enumerate(d.formulas):
        lines.append(f"formula: {print_formula(f)}")
        if i < len(d.steps):
            lines.append(f"step: {d.steps[i]}")
    return "\n".join(lines) + "\n"


def parse_step(text: str) -> DeepStep:
    m = _STEP.match(text.strip())
    if not m:
        raise ValueError(f"bad step {text!r}")
    sub = Substitution.parse(m["sub"]) if m["schema"] else None
    return DeepStep(parse_position(m["pos"]), DeepRule(m["rule"]), m["schema"], sub)


def load_derivation(text: str) -> tuple[DeepDerivation, str | None]:
    """Parse the text format; returns the derivation and the logic reference."""
    logic = None
    formulas, steps = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        key, sep, value = raw.partition(":")
        key = key.strip()
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value'")
        value = value.strip()
        if key == "logic":
            logic = value
        elif key == "formula":
            if len(formulas) != len(steps):
                raise ValueError(f"line {lineno}: two formulas without a step between them")
            formulas.append(parse_formula(value))
        elif key == "step":
            if len(steps) != len(formulas) - 1:
                raise ValueError(f"line {lineno}: step not preceded by a formula")
            steps.append(parse_step(value))
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return DeepDerivation(formulas, steps), logic


def read_derivation(path) -> tuple[DeepDerivation, LogicSpec | None, str | None]:
    path = Path(path)
    d, ref = load_derivation(path.read_text(encoding="utf-8"))
    logic = load_logic(ref, path.parent) if ref else None
    return d, logic, ref
