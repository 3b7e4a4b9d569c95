"""Normalization of derivations in word-style logics.

``eliminate_top`` removes every TopI step by replacing the introduced ``T``
and all its residuals with the formula it overwrote.  ``eliminate_conjunction``
then removes conjunction steps from derivations between word formulas by
repeatedly taking the most recently introduced outermost conjunction,
keeping the work done in its surviving conjunct and dropping the rest.
"""

from __future__ import annotations

from .deep import (
    DeepDerivation, DeepRule, DeepStep, apply_step, check_deep,
    rematch, replay, step_residuals,
)
from .formula import (
    BODY, LEFT, RIGHT, Formula, Top, formula_word, replace_at, subformula_at,
    print_formula,
)
from .logics import LogicSpec

__all__ = ["NormalizationError", "eliminate_top", "eliminate_conjunction", "contains_top"]


class NormalizationError(ValueError):
    pass


def contains_top(f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    return any(contains_top(getattr(f, k)) for k in ("left", "right", "body") if hasattr(f, k))


def _require(d, logic):
    if not logic.is_word_style():
        raise NormalizationError(f"logic {logic.name} is not word-style")
    v = check_deep(d, logic)
    if not v:
        raise NormalizationError(f"invalid derivation: {v}")


def _drop_top(d: DeepDerivation, i: int, logic: LogicSpec) -> DeepDerivation:
    """Remove the TopI step ``i``, restoring the overwritten formula in all
    residuals of the introduced ``T``."""
    r = d.steps[i].position
    restored = subformula_at(d.formulas[i], r)
    tracked = {r}
    formulas = list(d.formulas[: i + 1])
    steps = list(d.steps[:i])
    for j in range(i + 1, len(d.steps) + 1):
        f = d.formulas[j]
        for q in tracked:
            if not isinstance(subformula_at(f, q), Top):
                raise NormalizationError(f"residual at {q} is not T in {print_formula(f)!r}")
            f = replace_at(f, q, restored)
        if j > i + 1:
            st = rematch(formulas[-1], d.steps[j - 1], logic)
            if apply_step(formulas[-1], st, logic) != f:
                raise NormalizationError(f"step {j - 1} does not survive T replacement")
            steps.append(st)
            formulas.append(f)
        if j < len(d.steps):
            st = d.steps[j]
            nxt = set()
            for q in tracked:
                nxt |= step_residuals(d.formulas[j], st, q, logic)
            tracked = nxt
    if tracked:
        raise NormalizationError("T survives into the last formula")
    return DeepDerivation(formulas, steps)


def eliminate_top(d: DeepDerivation, logic: LogicSpec) -> DeepDerivation:
    """An equivalent derivation with no TopI steps."""
    _require(d, logic)
    if contains_top(d.first) or contains_top(d.last):
        raise NormalizationError("T occurs in an endpoint")
    while True:
        idx = next((i for i, st in enumerate(d.steps) if st.rule is DeepRule.TOP_I), None)
        if idx is None:
            return d
        d = _drop_top(d, idx, logic)


def _spine(pos) -> bool:
    return all(s == BODY for s in pos)


def _inside(pos, prefix) -> bool:
    return len(pos) > len(prefix) and pos[: len(prefix)] == prefix


def _eliminate_one(d: DeepDerivation, logic: LogicSpec) -> DeepDerivation:
    k = max(i for i, st in enumerate(d.steps)
            if st.rule is DeepRule.AND_DUP and _spine(st.position))
    where = d.steps[k].position
    inner = {LEFT: [], RIGHT: []}
    outer = []
    for j in range(k + 1, len(d.steps)):
        st = d.steps[j]
        if st.position == where and st.rule in (DeepRule.AND_E1, DeepRule.AND_E2):
            side = LEFT if st.rule is DeepRule.AND_E1 else RIGHT
            end = j
            break
        if _inside(st.position, where):
            rel = st.position[len(where):]
            inner[rel[0]].append(DeepStep(rel[1:], st.rule, st.schema, st.sub))
        elif st.rule is DeepRule.AXIOM and where[: len(st.position)] == st.position:
            outer.append(st)
            res = step_residuals(d.formulas[j], st, where, logic)
            if len(res) != 1:
                raise NormalizationError(f"outermost conjunction has {len(res)} successors after step {j}")
            (where,) = res
        else:
            raise NormalizationError(
                f"step {j} ({st}) acts outside the outermost conjunction introduced at step {k}")
    else:
        raise NormalizationError(f"conjunction introduced at step {k} is never eliminated")

    start = d.formulas[k]
    origin = d.steps[k].position
    piece = replay(subformula_at(start, origin), inner[side], logic)
    lifted = [st.shifted(origin) for st in piece.steps]
    f = replace_at(start, origin, piece.last)
    tail = []
    for st in outer:
        st = rematch(f, st, logic)
        tail.append(st)
        f = apply_step(f, st, logic)
    if f != d.formulas[end + 1]:
        raise NormalizationError(f"reassembled segment ends in {print_formula(f)!r}, expected {print_formula(d.formulas[end + 1])!r}")
    middle = replay(start, lifted + tail, logic)
    return DeepDerivation(
        d.formulas[:k] + middle.formulas + d.formulas[end + 2:],
        d.steps[:k] + middle.steps + d.steps[end + 1:],
    )


def eliminate_conjunction(d: DeepDerivation, logic: LogicSpec) -> DeepDerivation:
    """An equivalent derivation made of Axiom steps only.

    Needs word-formula endpoints and no TopI steps.
    """
    _require(d, logic)
    if formula_word(d.first) is None or formula_word(d.last) is None:
        raise NormalizationError("endpoints must be word formulas")
    if d.count(DeepRule.TOP_I):
        raise NormalizationError("TopI steps present; run eliminate_top first")
    while d.count(DeepRule.AND_DUP, DeepRule.AND_E1, DeepRule.AND_E2):
        if not d.count(DeepRule.AND_DUP):
            raise NormalizationError("conjunction elimination without introduction")
        d = _eliminate_one(d, logic)
    return d
