"""Semi-Thue (word rewriting) systems and their strictly positive logics.

A system ``R`` yields the logic ``L_R`` with one axiom ``U P |- V P`` per
rule ``U -> V``.  Rewrite derivations translate to Axiom-only deep
derivations and, after normalization, back.

System files hold one rule per line, symbols separated by whitespace,
``_`` for the empty word and ``#`` comments.  A rule may carry an id::

    swap: a b -> b a
    b -> _

Rules without an id are named ``r1``, ``r2``, ... by line order.
Derivation files give the start word on the first line, then one
``rule_id @ offset`` line per step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .deep import DeepDerivation, DeepRule, DeepStep, check_deep
from .formula import BODY, Substitution, formula_word, word_formula
from .logics import LogicSpec, Schema
from .normalize import eliminate_conjunction, eliminate_top
from .sequent import Verdict, VALID

__all__ = [
    "RewriteRule", "RewriteSystem", "RewriteDerivation", "RewriteError",
    "apply_rule", "check_rewrite_derivation", "reachable", "logic_of",
    "rewrite_to_deep", "deep_to_rewrite", "parse_word", "format_word",
    "parse_system", "print_system", "load_system", "parse_rewrite_derivation",
    "print_rewrite_derivation",
]

METAVAR = "P"


class RewriteError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple
    rhs: tuple
    id: str

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def __str__(self):
        return f"{self.id}: {format_word(self.lhs, sep=' ')} -> {format_word(self.rhs, sep=' ')}"


@dataclass(frozen=True)
class RewriteSystem:
    alphabet: frozenset
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise RewriteError(f"duplicate rule ids in {ids}")
        for r in self.rules:
            stray = (set(r.lhs) | set(r.rhs)) - self.alphabet
            if stray:
                raise RewriteError(f"rule {r.id} uses symbols {sorted(stray)} outside the alphabet")

    @classmethod
    def of(cls, *rules, alphabet=()) -> "RewriteSystem":
        """Build from ``(lhs, rhs)`` or ``(lhs, rhs, id)`` tuples of words."""
        built = []
        for n, r in enumerate(rules, 1):
            lhs, rhs = parse_word(r[0]), parse_word(r[1])
            built.append(RewriteRule(lhs, rhs, r[2] if len(r) > 2 else f"r{n}"))
        letters = set(alphabet)
        for r in built:
            letters |= set(r.lhs) | set(r.rhs)
        return cls(frozenset(letters), built)

    def rule(self, rule_id: str) -> RewriteRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise RewriteError(f"no rule {rule_id!r}")


@dataclass(frozen=True)
class RewriteDerivation:
    words: tuple
    steps: tuple = ()  # (rule_id, offset) pairs

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(tuple(w) for w in self.words))
        object.__setattr__(self, "steps", tuple((r, int(o)) for r, o in self.steps))
        if len(self.steps) != len(self.words) - 1:
            raise RewriteError("need exactly one step between consecutive words")

    @property
    def first(self):
        return self.words[0]

    @property
    def last(self):
        return self.words[-1]

    def __len__(self):
        return len(self.steps)


# --- words -------------------------------------------------------------------

def parse_word(text) -> tuple:
    """``"a b c"`` or ``"abc"`` (single-letter symbols); ``_`` or ``""`` is empty."""
    if not isinstance(text, str):
        return tuple(text)
    text = text.strip()
    if text in ("", "_"):
        return ()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    return tuple(text)


def format_word(word, sep: str = "") -> str:
    if not word:
        return "_"
    if not sep and any(len(a) > 1 for a in word):
        sep = " "
    return sep.join(word)


# --- operations --------------------------------------------------------------

def apply_rule(w, r: RewriteRule, offset: int) -> tuple:
    w = tuple(w)
    n = len(r.lhs)
    if offset < 0 or offset + n > len(w) or w[offset: offset + n] != r.lhs:
        raise RewriteError(f"rule {r.id} does not match {format_word(w)!r} at offset {offset}")
    return w[:offset] + r.rhs + w[offset + n:]


def check_rewrite_derivation(d: RewriteDerivation, system: RewriteSystem) -> Verdict:
    for i, (rid, offset) in enumerate(d.steps):
        try:
            got = apply_rule(d.words[i], system.rule(rid), offset)
        except RewriteError as e:
            return Verdict(False, i, str(e))
        if got != d.words[i + 1]:
            return Verdict(False, i, f"{rid} @ {offset} gives {format_word(got)!r}, not {format_word(d.words[i + 1])!r}")
    return VALID


def _successors(w, system):
    for r in system.rules:
        n = len(r.lhs)
        for offset in range(len(w) - n + 1):
            if w[offset: offset + n] == r.lhs:
                yield r.id, offset, w[:offset] + r.rhs + w[offset + n:]


def reachable(system: RewriteSystem, start, goal, max_len: int, max_steps: int):
    """Breadth-first search for a derivation of ``goal`` from ``start``.

    Words longer than ``max_len`` are not explored and at most ``max_steps``
    words are expanded.  Returns ``(found, derivation or None)``; the
    derivation is the first shortest one in rule order, then offset order.
    """
    start, goal = parse_word(start), parse_word(goal)
    parent = {start: None}
    queue = deque([start])
    expanded = 0
    while queue:
        w = queue.popleft()
        if w == goal:
            words, steps = [w], []
            while parent[w] is not None:
                prev, rid, offset = parent[w]
                steps.append((rid, offset))
                words.append(prev)
                w = prev
            return True, RewriteDerivation(words[::-1], steps[::-1])
        if expanded >= max_steps:
            break
        expanded += 1
        for rid, offset, nxt in _successors(w, system):
            if len(nxt) <= max_len and nxt not in parent:
                parent[nxt] = (w, rid, offset)
                queue.append(nxt)
    return False, None


def logic_of(system: RewriteSystem, name: str = "L_R") -> LogicSpec:
    schemata = [Schema(r.id, word_formula(r.lhs, METAVAR), word_formula(r.rhs, METAVAR))
                for r in system.rules]
    return LogicSpec(name, schemata)


def rewrite_to_deep(d: RewriteDerivation, system: RewriteSystem, var: str = "p") -> DeepDerivation:
    v = check_rewrite_derivation(d, system)
    if not v:
        raise RewriteError(f"invalid rewrite derivation: {v}")
    formulas = [word_formula(w, var) for w in d.words]
    steps = []
    for w, (rid, offset) in zip(d.words, d.steps):
        r = system.rule(rid)
        rest = word_formula(w[offset + len(r.lhs):], var)
        steps.append(DeepStep((BODY,) * offset, DeepRule.AXIOM, rid, Substitution.of({METAVAR: rest})))
    return DeepDerivation(formulas, steps)


def deep_to_rewrite(d: DeepDerivation, system: RewriteSystem) -> RewriteDerivation:
    logic = logic_of(system)
    v = check_deep(d, logic)
    if not v:
        raise RewriteError(f"invalid derivation: {v}")
    ends = formula_word(d.first), formula_word(d.last)
    if None in ends:
        raise RewriteError("endpoints must be word formulas")
    d = eliminate_conjunction(eliminate_top(d, logic), logic)
    words = []
    for f in d.formulas:
        split = formula_word(f)
        if split is None or split[1] != ends[0][1]:
            raise RewriteError(f"normalized derivation leaves word formulas at {f}")
        words.append(split[0])
    steps = [(st.schema, len(st.position)) for st in d.steps]
    out = RewriteDerivation(words, steps)
    v = check_rewrite_derivation(out, system)
    if not v:
        raise RewriteError(f"extracted rewrite derivation is invalid: {v}")
    return out


# --- files -------------------------------------------------------------------

def parse_system(text: str) -> RewriteSystem:
    rules = []
    alphabet = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet |= set(line[len("alphabet:"):].split())
            continue
        rid = f"r{len(rules) + 1}"
        head, colon, body = line.partition(":")
        if colon:
            rid, line = head.strip(), body.strip()
        lhs, arrow, rhs = line.partition("->")
        if not arrow:
            raise RewriteError(f"line {lineno}: expected 'lhs -> rhs', got {raw!r}")
        lw = () if lhs.strip() == "_" else tuple(lhs.split())
        rw = () if rhs.strip() == "_" else tuple(rhs.split())
        rules.append(RewriteRule(lw, rw, rid))
        alphabet |= set(lw) | set(rw)
    return RewriteSystem(frozenset(alphabet), rules)


def print_system(system: RewriteSystem) -> str:
    lines = []
    used = set()
    for r in system.rules:
        used |= set(r.lhs) | set(r.rhs)
    if system.alphabet - used:
        lines.append("alphabet: " + " ".join(sorted(system.alphabet)))
    lines += [str(r) for r in system.rules]
    return "\n".join(lines) + "\n"


def load_system(path) -> RewriteSystem:
    return parse_system(Path(path).read_text(encoding="utf-8"))


def parse_rewrite_derivation(text: str, system: RewriteSystem) -> RewriteDerivation:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise RewriteError("empty derivation file")
    words = [parse_word(lines[0])]
    steps = []
    for ln in lines[1:]:
        rid, at, offset = ln.partition("@")
        if not at:
            raise RewriteError(f"expected 'rule_id @ offset', got {ln!r}")
        rid, offset = rid.strip(), int(offset)
        words.append(apply_rule(words[-1], system.rule(rid), offset))
        steps.append((rid, offset))
    return RewriteDerivation(words, steps)


def print_rewrite_derivation(d: RewriteDerivation) -> str:
    lines = [format_word(d.first, sep=" ")]
    lines += [f"{rid} @ {offset}" for rid, offset in d.steps]
    return "\n".join(lines) + "\n"
