"""Axiom schemata and logic specifications.

A schema is a sequent whose variables are all formula metavariables; a
declared subset of its diamond labels are modality metavariables that may
be instantiated by any symbol (the same symbol at every occurrence).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .formula import (
    And, Dia, Formula, Sequent, Substitution, Top, Var, parse_sequent,
    print_sequent, substitute, symbols, variables,
)

__all__ = [
    "Schema", "LogicSpec", "builtin_logics", "get_logic", "match",
    "parse_logic", "print_logic", "LOGIC_ALIASES",
]


@dataclass(frozen=True)
class Schema:
    id: str
    lhs: Formula
    rhs: Formula
    modal_vars: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "modal_vars", frozenset(self.modal_vars))
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            raise ValueError(f"schema {self.id}: right side metavariables {sorted(extra)} not on the left")

    @property
    def formula_vars(self) -> set[str]:
        return variables(self.lhs)

    def free_modal_vars(self) -> set[str]:
        """Modality metavariables that occur only on the right."""
        return (symbols(self.rhs) - symbols(self.lhs)) & self.modal_vars

    def instance(self, sub: Substitution) -> Sequent:
        missing = self.formula_vars - sub.formula_map.keys()
        missing |= (self.modal_vars & (symbols(self.lhs) | symbols(self.rhs))) - sub.label_map.keys()
        if missing:
            raise ValueError(f"schema {self.id}: substitution leaves {sorted(missing)} unassigned")
        return Sequent(substitute(self.lhs, sub), substitute(self.rhs, sub))

    def concrete_symbols(self) -> set[str]:
        return (symbols(self.lhs) | symbols(self.rhs)) - self.modal_vars

    def is_word_style(self) -> bool:
        """``a1..am P |- b1..bk P`` with concrete symbols and one metavariable."""
        if self.modal_vars & (symbols(self.lhs) | symbols(self.rhs)):
            return False
        ends = []
        for f in (self.lhs, self.rhs):
            while isinstance(f, Dia):
                f = f.body
            ends.append(f)
        return isinstance(ends[0], Var) and ends[0] == ends[1]

    def __str__(self):
        return f"{self.id}: {print_sequent(Sequent(self.lhs, self.rhs))}"


@dataclass(frozen=True)
class LogicSpec:
    name: str
    schemata: tuple = ()
    _by_id: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "schemata", tuple(self.schemata))
        by_id = {}
        for s in self.schemata:
            if s.id in by_id:
                raise ValueError(f"duplicate schema id {s.id!r} in logic {self.name}")
            by_id[s.id] = s
        object.__setattr__(self, "_by_id", by_id)

    def schema(self, schema_id: str) -> Schema:
        try:
            return self._by_id[schema_id]
        except KeyError:
            raise KeyError(f"logic {self.name} has no schema {schema_id!r}") from None

    def has_schema(self, schema_id: str) -> bool:
        return schema_id in self._by_id

    def symbols(self) -> set[str]:
        out = set()
        for s in self.schemata:
            out |= s.concrete_symbols()
        return out

    def is_word_style(self) -> bool:
        return all(s.is_word_style() for s in self.schemata)


def _schema(sid, text, modal="a"):
    s = parse_sequent(text, schematic=True)
    return Schema(sid, s.lhs, s.rhs, frozenset(modal))


AX4 = _schema("4", "<a><a>A |- <a>A")
AXT = _schema("T", "A |- <a>A")
AX5 = _schema("5", "<a>A & <a>B |- <a>(A & <a>B)")

KP = LogicSpec("K+")
K4P = LogicSpec("K4+", (AX4,))
S4P = LogicSpec("S4+", (AX4, AXT))
S5P = LogicSpec("S5+", (AX4, AXT, AX5))

LOGIC_ALIASES = {
    "kp": KP, "k+": KP, "K+": KP,
    "k4p": K4P, "k4+": K4P, "K4+": K4P,
    "s4p": S4P, "s4+": S4P, "S4+": S4P,
    "s5p": S5P, "s5+": S5P, "S5+": S5P,
}


def builtin_logics() -> list[LogicSpec]:
    return [KP, K4P, S4P, S5P]


def get_logic(name: str) -> LogicSpec:
    try:
        return LOGIC_ALIASES[name]
    except KeyError:
        raise KeyError(f"unknown logic {name!r}; expected one of kp, k4p, s4p, s5p") from None


def match(pattern: Formula, f: Formula, modal_vars=frozenset(), sub: Substitution | None = None):
    """Match a schema side against ``f``.

    Returns the extending substitution or None.  Every variable of the
    pattern is a metavariable; repeated metavariables must bind equal
    formulas.
    """
    fmap = dict(sub.formula_map) if sub else {}
    lmap = dict(sub.label_map) if sub else {}

    def go(p, g):
        if isinstance(p, Var):
            bound = fmap.get(p.name)
            if bound is None:
                fmap[p.name] = g
                return True
            return bound == g
        if isinstance(p, Top):
            return isinstance(g, Top)
        if isinstance(p, And):
            return isinstance(g, And) and go(p.left, g.left) and go(p.right, g.right)
        if isinstance(p, Dia):
            if not isinstance(g, Dia):
                return False
            if p.label in modal_vars:
                bound = lmap.setdefault(p.label, g.label)
                if bound != g.label:
                    return False
            elif p.label != g.label:
                return False
            return go(p.body, g.body)
        return False

    if go(pattern, f):
        return Substitution.of(fmap, lmap)
    return None


# --- logic files -------------------------------------------------------------
#
#   name: K4+
#   modal: a
#   axiom 4: <a><a>A |- <a>A
#
# ``modal`` lists modality metavariables for the axioms that follow it.

def parse_logic(text: str) -> LogicSpec:
    name = None
    modal: frozenset = frozenset()
    schemata = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value', got {raw!r}")
        head, rest = head.strip(), rest.strip()
        if head == "name":
            name = rest
        elif head == "modal":
            modal = frozenset(rest.split())
        elif head.startswith("axiom "):
            sid = head[len("axiom "):].strip()
            s = parse_sequent(rest, schematic=True)
            schemata.append(Schema(sid, s.lhs, s.rhs, modal & (symbols(s.lhs) | symbols(s.rhs))))
        else:
            raise ValueError(f"line {lineno}: unknown key {head!r}")
    if name is None:
        raise ValueError("logic file has no 'name:' line")
    return LogicSpec(name, schemata)


def print_logic(logic: LogicSpec) -> str:
    lines = [f"name: {logic.name}"]
    current: frozenset = frozenset()
    for s in logic.schemata:
        if s.modal_vars != current:
            current = s.modal_vars
            lines.append("modal: " + " ".join(sorted(current)))
        lines.append(f"axiom {s.id}: {print_sequent(Sequent(s.lhs, s.rhs))}")
    return "\n".join(lines) + "\n"


def load_logic(ref: str, base: Path | None = None) -> LogicSpec:
    """A builtin name, ``thue:<system file>``, or a logic file path."""
    if ref in LOGIC_ALIASES:
        return LOGIC_ALIASES[ref]
    if ref.startswith("thue:"):
        from .rewrite import load_system, logic_of
        path = Path(ref[len("thue:"):])
        if base is not None and not path.is_absolute():
            path = base / path
        return logic_of(load_system(path))
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    return parse_logic(path.read_text(encoding="utf-8"))
