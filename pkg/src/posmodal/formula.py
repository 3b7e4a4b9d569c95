"""Strictly positive formulas, contexts, substitutions and sequents.

Formulas are immutable trees built from variables, ``T`` (top), binary
conjunction and labelled diamonds.  Concrete syntax::

    T            top
    p, q1, x_y   variables
    <a>A         diamond labelled ``a``
    A & B        conjunction (left-associative, lowest precedence)
    A |- B       sequent

Positions address nodes by a path of ``left``/``right`` (into a conjunction)
and ``body`` (into a diamond) steps; the empty path is the root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Var", "Top", "And", "Dia", "Hole", "TOP", "HOLE", "Formula",
    "Sequent", "Context", "Substitution", "Position",
    "ParseError", "parse_formula", "parse_sequent", "parse_context",
    "print_formula", "print_sequent", "substitute", "plug", "compose_contexts",
    "size", "variables", "symbols", "subformula_at", "replace_at", "positions",
    "is_valid_position", "format_position", "parse_position", "conj",
    "enumerate_formulas", "word_formula", "formula_word",
]

LEFT, RIGHT, BODY = "left", "right", "body"
Position = tuple  # tuple[str, ...] of LEFT / RIGHT / BODY

IDENT = re.compile(r"[a-z][a-zA-Z0-9_]*")
SCHEMATIC_IDENT = re.compile(r"[A-Za-z][a-zA-Z0-9_]*")


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Top:
    def __str__(self):
        return "T"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Dia:
    label: str
    body: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Hole:
    """The hole of a context; never appears in an ordinary formula."""

    def __str__(self):
        return "[]"


Formula = Union[Var, Top, And, Dia, Hole]
TOP = Top()
HOLE = Hole()


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    if not parts:
        raise ValueError("conj() needs at least one formula")
    out = parts[0]
    for f in parts[1:]:
        out = And(out, f)
    return out


@dataclass(frozen=True, slots=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return print_sequent(self)


# --- parsing -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<turnstile>\|-)|(?P<hole>\[\])|(?P<ident>[A-Za-z][a-zA-Z0-9_]*)|(?P<sym>[<>()&]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", text, i)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        i = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, schematic: bool = False, holes: bool = False):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.schematic = schematic
        self.holes = holes

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "<":
            self.take()
            _, label, lpos = self.take("ident")
            if not IDENT.fullmatch(label):
                raise ParseError(f"bad modality name {label!r}", self.text, lpos)
            self.take(value=">")
            return Dia(label, self.unary())
        if value == "(":
            self.take()
            f = self.conjunction()
            self.take(value=")")
            return f
        if kind == "hole":
            if not self.holes:
                raise ParseError("hole outside a context", self.text, pos)
            self.take()
            return HOLE
        if kind == "ident":
            self.take()
            if value == "T":
                return TOP
            if not (IDENT.fullmatch(value) or self.schematic):
                raise ParseError(f"bad variable name {value!r}", self.text, pos)
            return Var(value)
        raise ParseError(f"unexpected {value or 'end of input'!r}", self.text, pos)

    def end(self):
        self.take("eof")


def parse_formula(text: str, schematic: bool = False) -> Formula:
    """Parse a formula.  ``schematic`` also admits capitalised metavariables."""
    p = _Parser(text, schematic=schematic)
    f = p.conjunction()
    p.end()
    return f


def parse_sequent(text: str, schematic: bool = False) -> Sequent:
    p = _Parser(text, schematic=schematic)
    lhs = p.conjunction()
    p.take("turnstile")
    rhs = p.conjunction()
    p.end()
    return Sequent(lhs, rhs)


def parse_context(text: str) -> "Context":
    p = _Parser(text, holes=True)
    f = p.conjunction()
    p.end()
    return Context(f)


# --- printing ----------------------------------------------------------------

def print_formula(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Hole):
        return "[]"
    if isinstance(f, Dia):
        body = print_formula(f.body)
        if isinstance(f.body, And):
            body = f"({body})"
        return f"<{f.label}>{body}"
    if isinstance(f, And):
        right = print_formula(f.right)
        if isinstance(f.right, And):
            right = f"({right})"
        return f"{print_formula(f.left)} & {right}"
    raise TypeError(f"not a formula: {f!r}")


def print_sequent(s: Sequent) -> str:
    return f"{print_formula(s.lhs)} |- {print_formula(s.rhs)}"


# --- structure ---------------------------------------------------------------

def size(f: Formula) -> int:
    """Number of nodes."""
    if isinstance(f, And):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Dia):
        return 1 + size(f.body)
    return 1


def variables(f: Formula) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, And):
        return variables(f.left) | variables(f.right)
    if isinstance(f, Dia):
        return variables(f.body)
    return set()


def symbols(f: Formula) -> set[str]:
    if isinstance(f, And):
        return symbols(f.left) | symbols(f.right)
    if isinstance(f, Dia):
        return {f.label} | symbols(f.body)
    return set()


def subformula_at(f: Formula, pos: Iterable[str]) -> Formula:
    for step in pos:
        if step == LEFT and isinstance(f, And):
            f = f.left
        elif step == RIGHT and isinstance(f, And):
            f = f.right
        elif step == BODY and isinstance(f, Dia):
            f = f.body
        else:
            raise IndexError(f"position step {step!r} does not fit {print_formula(f)!r}")
    return f


def is_valid_position(f: Formula, pos: Iterable[str]) -> bool:
    try:
        subformula_at(f, pos)
    except IndexError:
        return False
    return True


def replace_at(f: Formula, pos: Position, g: Formula) -> Formula:
    """``f`` with the node at ``pos`` replaced by ``g``."""
    if not pos:
        return g
    step, rest = pos[0], pos[1:]
    if step == LEFT and isinstance(f, And):
        return And(replace_at(f.left, rest, g), f.right)
    if step == RIGHT and isinstance(f, And):
        return And(f.left, replace_at(f.right, rest, g))
    if step == BODY and isinstance(f, Dia):
        return Dia(f.label, replace_at(f.body, rest, g))
    raise IndexError(f"position step {step!r} does not fit {print_formula(f)!r}")


def positions(f: Formula, prefix: Position = ()) -> Iterator[Position]:
    """All node positions in pre-order."""
    yield prefix
    if isinstance(f, And):
        yield from positions(f.left, prefix + (LEFT,))
        yield from positions(f.right, prefix + (RIGHT,))
    elif isinstance(f, Dia):
        yield from positions(f.body, prefix + (BODY,))


def format_position(pos: Position) -> str:
    return ".".join(pos) if pos else "root"


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("root", ""):
        return ()
    steps = tuple(text.split("."))
    for s in steps:
        if s not in (LEFT, RIGHT, BODY):
            raise ValueError(f"bad position step {s!r} in {text!r}")
    return steps


# --- substitution ------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """Simultaneous substitution of formulas for variables and, optionally,
    symbols for modality metavariables.

    Stored as sorted pairs so instances are hashable and print canonically.
    """

    formulas: tuple = ()
    labels: tuple = ()
    _fmap: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _lmap: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(sorted(dict(self.formulas).items())))
        object.__setattr__(self, "labels", tuple(sorted(dict(self.labels).items())))
        object.__setattr__(self, "_fmap", dict(self.formulas))
        object.__setattr__(self, "_lmap", dict(self.labels))

    @classmethod
    def of(cls, formulas: Mapping[str, Formula] | None = None,
           labels: Mapping[str, str] | None = None) -> "Substitution":
        return cls(tuple((formulas or {}).items()), tuple((labels or {}).items()))

    @property
    def formula_map(self) -> dict:
        return self._fmap

    @property
    def label_map(self) -> dict:
        return self._lmap

    def then(self, other: "Substitution") -> "Substitution":
        """Composite substitution: apply ``self`` first, then ``other``."""
        fmap = {k: substitute(v, other) for k, v in self._fmap.items()}
        for k, v in other._fmap.items():
            fmap.setdefault(k, v)
        lmap = {k: other._lmap.get(v, v) for k, v in self._lmap.items()}
        for k, v in other._lmap.items():
            lmap.setdefault(k, v)
        return Substitution.of(fmap, lmap)

    def __str__(self):
        parts = [f"{k}={print_formula(v)}" for k, v in self.formulas]
        parts += [f"<{k}>={v}" for k, v in self.labels]
        return ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        fmap, lmap = {}, {}
        text = text.strip()
        if not text:
            return cls()
        for item in text.split(","):
            key, sep, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise ValueError(f"bad substitution entry {item!r}")
            if key.startswith("<") and key.endswith(">"):
                lmap[key[1:-1]] = value
            else:
                fmap[key] = parse_formula(value, schematic=True)
        return cls.of(fmap, lmap)


def substitute(f: Formula, s: Substitution) -> Formula:
    fmap, lmap = s.formula_map, s.label_map
    if not fmap and not lmap:
        return f

    def go(g):
        if isinstance(g, Var):
            return fmap.get(g.name, g)
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Dia):
            return Dia(lmap.get(g.label, g.label), go(g.body))
        return g

    return go(f)


# --- contexts ----------------------------------------------------------------

def _holes(f: Formula) -> int:
    if isinstance(f, Hole):
        return 1
    if isinstance(f, And):
        return _holes(f.left) + _holes(f.right)
    if isinstance(f, Dia):
        return _holes(f.body)
    return 0


def _hole_position(f: Formula) -> Position:
    if isinstance(f, Hole):
        return ()
    if isinstance(f, And):
        if _holes(f.left):
            return (LEFT,) + _hole_position(f.left)
        return (RIGHT,) + _hole_position(f.right)
    if isinstance(f, Dia):
        return (BODY,) + _hole_position(f.body)
    raise ValueError("no hole")


@dataclass(frozen=True)
class Context:
    """A formula with exactly one hole."""

    body: Formula = HOLE

    def __post_init__(self):
        n = _holes(self.body)
        if n != 1:
            raise ValueError(f"a context needs exactly one hole, found {n}")

    @classmethod
    def at(cls, f: Formula, pos: Position) -> "Context":
        """The context obtained by punching a hole into ``f`` at ``pos``."""
        return cls(replace_at(f, pos, HOLE))

    @property
    def hole_position(self) -> Position:
        return _hole_position(self.body)

    def __str__(self):
        return print_formula(self.body)


IDENTITY = Context()


def plug(c: Context, f: Formula) -> Formula:
    return replace_at(c.body, c.hole_position, f)


def compose_contexts(c1: Context, c2: Context) -> Context:
    return Context(plug(c1, c2.body))


# --- words and enumeration ---------------------------------------------------

def word_formula(word: Iterable[str], tail: Formula | str = "p") -> Formula:
    """``a1 ... an tail`` as nested diamonds."""
    f = Var(tail) if isinstance(tail, str) else tail
    for a in reversed(tuple(word)):
        f = Dia(a, f)
    return f


def formula_word(f: Formula):
    """Split ``a1 ... an p`` into ``((a1, ..., an), p)``; None otherwise."""
    word = []
    while isinstance(f, Dia):
        word.append(f.label)
        f = f.body
    if isinstance(f, Var):
        return tuple(word), f.name
    return None


def enumerate_formulas(variables: Iterable[str], symbols: Iterable[str],
                       max_size: int, top: bool = True) -> list[Formula]:
    """Every formula over the given atoms with at most ``max_size`` nodes,
    ordered by size."""
    atoms = [Var(v) for v in variables] + ([TOP] if top else [])
    syms = list(symbols)
    by_size: list[list[Formula]] = [[], atoms]
    for n in range(2, max_size + 1):
        layer = [Dia(a, g) for a in syms for g in by_size[n - 1]]
        for k in range(1, n - 1):
            layer.extend(And(x, y) for x, y in product(by_size[k], by_size[n - 1 - k]))
        by_size.append(layer)
    return [f for layer in by_size[: max_size + 1] for f in layer]
