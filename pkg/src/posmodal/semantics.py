"""Kripke semantics and the tree-model decision procedure for K+, K4+, S4+.

A sequent ``A |- B`` holds in one of these logics iff ``B`` is true at the
root of the tree model of ``A`` after closing its relations under the
frame conditions of the logic (nothing, transitivity, reflexivity and
transitivity).

Model files are line oriented::

    worlds: 0 1
    rel a: 0->1
    val p: 0
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .formula import And, Dia, Formula, Sequent, Top, Var, symbols

__all__ = [
    "KripkeModel", "TreeModel", "eval_formula", "truth_set", "fixture_model",
    "tree_model", "closure", "decide", "parse_model", "print_model",
    "SEMANTIC_LOGICS",
]

SEMANTIC_LOGICS = {"K+": "K+", "kp": "K+", "K4+": "K4+", "k4p": "K4+", "S4+": "S4+", "s4p": "S4+"}


@dataclass
class KripkeModel:
    worlds: set
    relations: dict = field(default_factory=dict)   # symbol -> set of (w, v)
    valuation: dict = field(default_factory=dict)   # variable -> set of worlds

    def __post_init__(self):
        self.worlds = set(self.worlds)
        self.relations = {a: set(pairs) for a, pairs in self.relations.items()}
        self.valuation = {p: set(ws) for p, ws in self.valuation.items()}
        for a, pairs in self.relations.items():
            for w, v in pairs:
                if w not in self.worlds or v not in self.worlds:
                    raise ValueError(f"relation {a} mentions unknown world in {(w, v)}")
        for p, ws in self.valuation.items():
            if not ws <= self.worlds:
                raise ValueError(f"valuation of {p} mentions unknown worlds {ws - self.worlds}")

    def successors(self, a: str, w) -> set:
        return {v for (u, v) in self.relations.get(a, ()) if u == w}


@dataclass
class TreeModel:
    model: KripkeModel
    root: int


def _successor_map(model):
    succ = defaultdict(lambda: defaultdict(list))
    for a, pairs in model.relations.items():
        for w, v in pairs:
            succ[a][w].append(v)
    return succ


def _evaluator(model: KripkeModel):
    succ = _successor_map(model)
    memo = {}

    def ev(w, f):
        key = (w, f)
        if key in memo:
            return memo[key]
        if isinstance(f, Top):
            val = True
        elif isinstance(f, Var):
            val = w in model.valuation.get(f.name, ())
        elif isinstance(f, And):
            val = ev(w, f.left) and ev(w, f.right)
        elif isinstance(f, Dia):
            val = any(ev(v, f.body) for v in succ[f.label].get(w, ()))
        else:
            raise TypeError(f"cannot evaluate {f!r}")
        memo[key] = val
        return val

    return ev


def eval_formula(model: KripkeModel, w, f: Formula) -> bool:
    if w not in model.worlds:
        raise KeyError(f"unknown world {w!r}")
    return _evaluator(model)(w, f)


def truth_set(model: KripkeModel, f: Formula) -> set:
    ev = _evaluator(model)
    return {w for w in model.worlds if ev(w, f)}


def fixture_model(symbol: str = "a") -> KripkeModel:
    """Two worlds, ``0 R 1`` only, ``p`` true at 0 alone."""
    return KripkeModel({0, 1}, {symbol: {(0, 1)}}, {"p": {0}})


def _conjuncts(f):
    if isinstance(f, And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def tree_model(a: Formula) -> TreeModel:
    worlds, relations, valuation = [], defaultdict(set), defaultdict(set)

    def build(f):
        node = len(worlds)
        worlds.append(node)
        for c in _conjuncts(f):
            if isinstance(c, Var):
                valuation[c.name].add(node)
            elif isinstance(c, Dia):
                child = build(c.body)
                relations[c.label].add((node, child))
        return node

    root = build(a)
    return TreeModel(KripkeModel(set(worlds), dict(relations), dict(valuation)), root)


def _transitive(pairs):
    succ = defaultdict(set)
    for w, v in pairs:
        succ[w].add(v)
    out = set()
    for w in list(succ):
        seen, stack = set(), list(succ[w])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(succ.get(v, ()))
        out |= {(w, v) for v in seen}
    return out


def closure(m: TreeModel | KripkeModel, logic: str, symbols=()) -> KripkeModel:
    """Close relations under the frame conditions of ``logic``.

    ``symbols`` names extra modalities that get relations even when the
    model has none (S4+ makes every modality reflexive).
    """
    model = m.model if isinstance(m, TreeModel) else m
    kind = SEMANTIC_LOGICS.get(logic)
    if kind is None:
        raise ValueError(f"no frame closure for logic {logic!r}")
    relations = {a: set(p) for a, p in model.relations.items()}
    for a in symbols:
        relations.setdefault(a, set())
    if kind in ("K4+", "S4+"):
        relations = {a: _transitive(p) for a, p in relations.items()}
    if kind == "S4+":
        for a in relations:
            relations[a] |= {(w, w) for w in model.worlds}
    return KripkeModel(model.worlds, relations, model.valuation)


def decide(logic: str, s: Sequent) -> bool:
    tree = tree_model(s.lhs)
    model = closure(tree, logic, symbols(s.lhs) | symbols(s.rhs))
    return eval_formula(model, tree.root, s.rhs)


# --- model files -------------------------------------------------------------

def _world(token: str):
    return int(token) if token.isdigit() else token


def parse_model(text: str) -> KripkeModel:
    worlds, relations, valuation = None, {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value'")
        head = head.split()
        if head == ["worlds"]:
            worlds = {_world(t) for t in rest.split()}
        elif len(head) == 2 and head[0] == "rel":
            pairs = relations.setdefault(head[1], set())
            for edge in rest.split():
                src, arrow, dst = edge.partition("->")
                if not arrow:
                    raise ValueError(f"line {lineno}: bad edge {edge!r}")
                pairs.add((_world(src), _world(dst)))
        elif len(head) == 2 and head[0] == "val":
            valuation.setdefault(head[1], set()).update(_world(t) for t in rest.split())
        else:
            raise ValueError(f"line {lineno}: unknown key {' '.join(head)!r}")
    if worlds is None:
        raise ValueError("model file has no 'worlds:' line")
    return KripkeModel(worlds, relations, valuation)


def print_model(model: KripkeModel) -> str:
    key = lambda w: (isinstance(w, str), w if not isinstance(w, str) else 0, str(w))
    lines = ["worlds: " + " ".join(str(w) for w in sorted(model.worlds, key=key))]
    for a in sorted(model.relations):
        edges = sorted(model.relations[a], key=lambda e: (key(e[0]), key(e[1])))
        lines.append(f"rel {a}: " + " ".join(f"{w}->{v}" for w, v in edges))
    for p in sorted(model.valuation):
        lines.append(f"val {p}: " + " ".join(str(w) for w in sorted(model.valuation[p], key=key)))
    return "\n".join(lines) + "\n"
