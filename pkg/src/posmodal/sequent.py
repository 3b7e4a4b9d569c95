"""Tree-shaped proofs in K+ and its schematic extensions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .formula import (
    LEFT, BODY, And, Context, Dia, Formula, Sequent, Substitution, TOP,
    Top, parse_sequent, print_sequent, substitute,
)
from .logics import LogicSpec

__all__ = [
    "Rule", "SequentProof", "Verdict", "InvalidProof", "check_sequent_proof",
    "positive_replacement", "substitute_proof", "proof_size",
    "identity", "top_intro", "and_e1", "and_e2", "syllogism", "and_intro",
    "mono", "axiom", "dump_proof", "load_proof",
]


class Rule(str, Enum):
    ID = "Id"
    TOP_INTRO = "TopIntro"
    SYLLOGISM = "Syllogism"
    AND_E1 = "AndE1"
    AND_E2 = "AndE2"
    AND_I = "AndI"
    MONO = "Mono"
    AXIOM = "Axiom"


ARITY = {
    Rule.ID: 0, Rule.TOP_INTRO: 0, Rule.AXIOM: 0, Rule.AND_E1: 0, Rule.AND_E2: 0,
    Rule.MONO: 1, Rule.SYLLOGISM: 2, Rule.AND_I: 2,
}


@dataclass(frozen=True)
class SequentProof:
    conclusion: Sequent
    rule: Rule
    premises: tuple = ()
    label: str | None = None          # Mono
    schema: str | None = None         # Axiom
    sub: Substitution | None = None   # Axiom

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        object.__setattr__(self, "premises", tuple(self.premises))


class InvalidProof(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.  Falsy when invalid; ``where`` locates the first
    failure (a premise path for proofs, a step index for derivations)."""

    valid: bool
    where: object = None
    reason: str = ""

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "valid"
        return f"invalid at {self.where}: {self.reason}"


VALID = Verdict(True)


# --- constructors ------------------------------------------------------------

def identity(a: Formula) -> SequentProof:
    return SequentProof(Sequent(a, a), Rule.ID)


def top_intro(a: Formula) -> SequentProof:
    return SequentProof(Sequent(a, TOP), Rule.TOP_INTRO)


def and_e1(a: Formula, b: Formula) -> SequentProof:
    return SequentProof(Sequent(And(a, b), a), Rule.AND_E1)


def and_e2(a: Formula, b: Formula) -> SequentProof:
    return SequentProof(Sequent(And(a, b), b), Rule.AND_E2)


def syllogism(p1: SequentProof, p2: SequentProof) -> SequentProof:
    return SequentProof(Sequent(p1.conclusion.lhs, p2.conclusion.rhs), Rule.SYLLOGISM, (p1, p2))


def and_intro(p1: SequentProof, p2: SequentProof) -> SequentProof:
    concl = Sequent(p1.conclusion.lhs, And(p1.conclusion.rhs, p2.conclusion.rhs))
    return SequentProof(concl, Rule.AND_I, (p1, p2))


def mono(label: str, p: SequentProof) -> SequentProof:
    c = p.conclusion
    return SequentProof(Sequent(Dia(label, c.lhs), Dia(label, c.rhs)), Rule.MONO, (p,), label=label)


def axiom(logic: LogicSpec, schema_id: str, sub: Substitution) -> SequentProof:
    concl = logic.schema(schema_id).instance(sub)
    return SequentProof(concl, Rule.AXIOM, schema=schema_id, sub=sub)


# --- checking ----------------------------------------------------------------

def _check_node(node: SequentProof, logic: LogicSpec) -> str | None:
    """Reason the node is locally wrong, or None."""
    n = ARITY[node.rule]
    if len(node.premises) != n:
        return f"{node.rule.value} takes {n} premises, got {len(node.premises)}"
    lhs, rhs = node.conclusion.lhs, node.conclusion.rhs
    prem = [p.conclusion for p in node.premises]
    rule = node.rule
    if rule is Rule.ID:
        ok = lhs == rhs
    elif rule is Rule.TOP_INTRO:
        ok = isinstance(rhs, Top)
    elif rule is Rule.AND_E1:
        ok = isinstance(lhs, And) and lhs.left == rhs
    elif rule is Rule.AND_E2:
        ok = isinstance(lhs, And) and lhs.right == rhs
    elif rule is Rule.SYLLOGISM:
        ok = prem[0].lhs == lhs and prem[1].rhs == rhs and prem[0].rhs == prem[1].lhs
    elif rule is Rule.AND_I:
        ok = (isinstance(rhs, And) and prem[0].lhs == lhs and prem[1].lhs == lhs
              and prem[0].rhs == rhs.left and prem[1].rhs == rhs.right)
    elif rule is Rule.MONO:
        a = node.label
        ok = (a is not None and lhs == Dia(a, prem[0].lhs) and rhs == Dia(a, prem[0].rhs))
    else:
        if node.schema is None or not logic.has_schema(node.schema):
            return f"schema {node.schema!r} is not an axiom of {logic.name}"
        try:
            ok = logic.schema(node.schema).instance(node.sub or Substitution()) == node.conclusion
        except ValueError as e:
            return str(e)
    if not ok:
        return f"{rule.value} does not conclude {print_sequent(node.conclusion)}"
    return None


def check_sequent_proof(p: SequentProof, logic: LogicSpec) -> Verdict:
    """Check every node; report the first bad one in pre-order by premise path."""
    stack = [(p, ())]
    while stack:
        node, path = stack.pop()
        reason = _check_node(node, logic)
        if reason:
            return Verdict(False, path, reason)
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + (i,)))
    return VALID


def _require_valid(p, logic):
    v = check_sequent_proof(p, logic)
    if not v:
        raise InvalidProof(str(v))


def proof_size(p: SequentProof) -> int:
    n, stack = 0, [p]
    while stack:
        node = stack.pop()
        n += 1
        stack.extend(node.premises)
    return n


# --- constructive lemmas -----------------------------------------------------

def _replace(p: SequentProof, body: Formula, hole: tuple) -> SequentProof:
    # Induction on the context, outermost node first.
    if not hole:
        return p
    step, rest = hole[0], hole[1:]
    inner = _replace(p, _child(body, step), rest)
    a = inner.conclusion.lhs
    if step == BODY:
        return mono(body.label, inner)
    if step == LEFT:
        other = body.right
        return and_intro(syllogism(and_e1(a, other), inner), and_e2(a, other))
    other = body.left
    return and_intro(and_e1(other, a), syllogism(and_e2(other, a), inner))


def _child(f, step):
    return f.body if step == BODY else f.left if step == LEFT else f.right


def positive_replacement(p: SequentProof, c: Context, logic: LogicSpec,
                         check: bool = True) -> SequentProof:
    """From a proof of ``A |- B`` build one of ``c(A) |- c(B)``."""
    if check:
        _require_valid(p, logic)
    return _replace(p, c.body, c.hole_position)


def substitute_proof(p: SequentProof, s: Substitution, logic: LogicSpec,
                     check: bool = True) -> SequentProof:
    """Apply a formula substitution to every sequent of a proof."""
    if s.label_map:
        raise ValueError("proof substitution only maps variables to formulas")
    if check:
        _require_valid(p, logic)

    def go(node):
        c = node.conclusion
        concl = Sequent(substitute(c.lhs, s), substitute(c.rhs, s))
        sub = node.sub.then(s) if node.rule is Rule.AXIOM else node.sub
        if node.rule is Rule.AXIOM:
            keep = logic.schema(node.schema).formula_vars
            sub = Substitution.of({k: v for k, v in sub.formula_map.items() if k in keep},
                                  sub.label_map)
        return SequentProof(concl, node.rule, tuple(go(q) for q in node.premises),
                            node.label, node.schema, sub)

    return go(p)


# --- text format -------------------------------------------------------------
#
# One node per line in pre-order, indented two spaces per depth:
#
#   Rule[<label>][[schema=ID sub=...]](A |- B)[n]
#
# where n is the premise count.  An optional first line ``logic: NAME``
# names the logic to check against.

_LINE = re.compile(
    r"^(?P<rule>[A-Za-z0-9]+)"
    r"(?:<(?P<label>[a-z][a-zA-Z0-9_]*)>)?"
    r"(?:\[schema=(?P<schema>\S+) sub=(?P<sub>[^\]]*)\])?"
    r"\((?P<seq>.*)\)\[(?P<n>\d+)\]$"
)


def _node_head(node: SequentProof) -> str:
    head = node.rule.value
    if node.rule is Rule.MONO:
        head += f"<{node.label}>"
    if node.rule is Rule.AXIOM:
        head += f"[schema={node.schema} sub={node.sub or ''}]"
    return head


def dump_proof(p: SequentProof, logic: str | None = None) -> str:
    lines = [f"logic: {logic}"] if logic else []
    stack = [(p, 0)]
    while stack:
        node, depth = stack.pop()
        lines.append(f"{'  ' * depth}{_node_head(node)}({print_sequent(node.conclusion)})[{len(node.premises)}]")
        for q in reversed(node.premises):
            stack.append((q, depth + 1))
    return "\n".join(lines) + "\n"


def load_proof(text: str) -> tuple[SequentProof, str | None]:
    """Parse the text format; returns the proof and the declared logic name."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    logic = None
    if lines and lines[0].startswith("logic:"):
        logic = lines[0][len("logic:"):].strip()
        lines = lines[1:]
    nodes = []
    for ln in lines:
        m = _LINE.match(ln.strip())
        if not m:
            raise ValueError(f"bad proof line {ln!r}")
        rule = Rule(m["rule"])
        sub = Substitution.parse(m["sub"]) if m["schema"] else None
        nodes.append((rule, m["label"], m["schema"], sub, parse_sequent(m["seq"]), int(m["n"])))
    pos = 0

    def build():
        nonlocal pos
        if pos >= len(nodes):
            raise ValueError("proof text ends before all premises are given")
        rule, label, schema, sub, seq, n = nodes[pos]
        pos += 1
        prem = tuple(build() for _ in range(n))
        return SequentProof(seq, rule, prem, label, schema, sub)

    if not nodes:
        raise ValueError("empty proof")
    root = build()
    if pos != len(nodes):
        raise ValueError(f"{len(nodes) - pos} trailing proof lines")
    return root, logic
