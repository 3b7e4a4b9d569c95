"""Bounded forward saturation in the deep-inference calculus.

Formulas are hash-consed into integer ids so the successor relation can be
memoised once per (logic, signature, size bound) and reused across many
start formulas.  Successor generation here is written independently of
``deep.apply_step``; found paths are turned back into checked
``DeepDerivation`` objects through the public step machinery.
"""

from __future__ import annotations

from itertools import product

from .deep import DeepDerivation, apply_step, check_deep, enumerate_steps
from .formula import And, Dia, Formula, Sequent, TOP, Top, Var, symbols
from .logics import LogicSpec

__all__ = ["SearchSpace", "bounded_forward_search"]

_TOP = ("t",)


class SearchSpace:
    """Formulas of size at most ``size_bound`` and the one-step relation of
    a logic's deep-inference calculus between them."""

    def __init__(self, logic: LogicSpec, size_bound: int, signature=()):
        self.logic = logic
        self.size_bound = size_bound
        self.signature = sorted(set(signature) | logic.symbols())
        self.nodes: list[tuple] = []
        self.sizes: list[int] = []
        self.index: dict[tuple, int] = {}
        self._succ: dict[int, list[int]] = {}
        self.top = self._intern(_TOP, 1)
        self._patterns = [self._pattern(s) for s in logic.schemata]

    def _intern(self, node, n):
        i = self.index.get(node)
        if i is None:
            i = len(self.nodes)
            self.index[node] = i
            self.nodes.append(node)
            self.sizes.append(n)
        return i

    def add(self, f: Formula) -> int:
        if isinstance(f, Var):
            return self._intern(("v", f.name), 1)
        if isinstance(f, Top):
            return self.top
        if isinstance(f, And):
            l, r = self.add(f.left), self.add(f.right)
            return self._intern(("&", l, r), 1 + self.sizes[l] + self.sizes[r])
        if isinstance(f, Dia):
            b = self.add(f.body)
            return self._intern(("d", f.label, b), 1 + self.sizes[b])
        raise TypeError(f"cannot intern {f!r}")

    def formula(self, i: int) -> Formula:
        node = self.nodes[i]
        if node[0] == "v":
            return Var(node[1])
        if node[0] == "t":
            return TOP
        if node[0] == "&":
            return And(self.formula(node[1]), self.formula(node[2]))
        return Dia(node[1], self.formula(node[2]))

    # schema patterns: ("mv", name) | ("t",) | ("&", p, q) | ("d", label, is_meta, p)
    def _pattern(self, schema):
        def conv(f):
            if isinstance(f, Var):
                return ("mv", f.name)
            if isinstance(f, Top):
                return _TOP
            if isinstance(f, And):
                return ("&", conv(f.left), conv(f.right))
            return ("d", f.label, f.label in schema.modal_vars, conv(f.body))
        free = sorted(schema.free_modal_vars())
        return conv(schema.lhs), conv(schema.rhs), free

    def _match(self, pat, i, fb, lb):
        kind = pat[0]
        if kind == "mv":
            bound = fb.get(pat[1])
            if bound is None:
                fb[pat[1]] = i
                return True
            return bound == i
        node = self.nodes[i]
        if kind == "t":
            return node[0] == "t"
        if kind == "&":
            return node[0] == "&" and self._match(pat[1], node[1], fb, lb) and self._match(pat[2], node[2], fb, lb)
        if node[0] != "d":
            return False
        if pat[2]:
            if lb.setdefault(pat[1], node[1]) != node[1]:
                return False
        elif pat[1] != node[1]:
            return False
        return self._match(pat[3], node[2], fb, lb)

    def _build(self, pat, fb, lb):
        kind = pat[0]
        if kind == "mv":
            return fb[pat[1]]
        if kind == "t":
            return self.top
        if kind == "&":
            l, r = self._build(pat[1], fb, lb), self._build(pat[2], fb, lb)
            return self._intern(("&", l, r), 1 + self.sizes[l] + self.sizes[r])
        b = self._build(pat[3], fb, lb)
        label = lb[pat[1]] if pat[2] else pat[1]
        return self._intern(("d", label, b), 1 + self.sizes[b])

    def successors(self, i: int) -> list[int]:
        """Ids reachable in one step, all of size at most the bound."""
        out = self._succ.get(i)
        if out is not None:
            return out
        bound = self.size_bound
        sizes = self.sizes
        node = self.nodes[i]
        found = {}
        if 2 * sizes[i] + 1 <= bound:
            found[self._intern(("&", i, i), 2 * sizes[i] + 1)] = None
        if node[0] == "&":
            found[node[1]] = None
            found[node[2]] = None
        if node[0] != "t":
            found[self.top] = None
        for lhs, rhs, free in self._patterns:
            fb, lb = {}, {}
            if not self._match(lhs, i, fb, lb):
                continue
            for choice in product(self.signature, repeat=len(free)):
                labels = dict(lb, **dict(zip(free, choice)))
                j = self._build(rhs, fb, labels)
                if sizes[j] <= bound:
                    found[j] = None
        if node[0] == "&":
            l, r = node[1], node[2]
            for l2 in self.successors(l):
                n = 1 + sizes[l2] + sizes[r]
                if n <= bound:
                    found[self._intern(("&", l2, r), n)] = None
            for r2 in self.successors(r):
                n = 1 + sizes[l] + sizes[r2]
                if n <= bound:
                    found[self._intern(("&", l, r2), n)] = None
        elif node[0] == "d":
            for b2 in self.successors(node[2]):
                n = 1 + sizes[b2]
                if n <= bound:
                    found[self._intern(("d", node[1], b2), n)] = None
        out = list(found)
        self._succ[i] = out
        return out

    def reach(self, start: int, step_bound: int, goal: int | None = None):
        """Breadth-first search from ``start``.

        Returns the parent map of every id reached within ``step_bound``
        steps, stopping early once ``goal`` is reached.
        """
        parent = {start: None}
        frontier = [start]
        for _ in range(step_bound):
            if goal is not None and goal in parent:
                break
            nxt = []
            for i in frontier:
                for j in self.successors(i):
                    if j not in parent:
                        parent[j] = i
                        nxt.append(j)
            if not nxt:
                break
            frontier = nxt
        return parent

    def reach_set(self, start: int, step_bound: int) -> set:
        """Ids reachable within ``step_bound`` steps (no parent bookkeeping)."""
        seen = {start}
        frontier = {start}
        succ = self.successors
        for _ in range(step_bound):
            nxt = set()
            for i in frontier:
                nxt.update(succ(i))
            nxt -= seen
            if not nxt:
                break
            seen |= nxt
            frontier = nxt
        return seen

    def derivation(self, parent: dict, goal: int) -> DeepDerivation:
        path = []
        i = goal
        while i is not None:
            path.append(self.formula(i))
            i = parent[i]
        path.reverse()
        steps = []
        for f, g in zip(path, path[1:]):
            st = next((st for st in enumerate_steps(f, self.logic, self.signature)
                       if apply_step(f, st, self.logic) == g), None)
            if st is None:
                raise AssertionError(f"search produced a step the calculus does not have: {f} => {g}")
            steps.append(st)
        return DeepDerivation(path, steps)


def bounded_forward_search(logic: LogicSpec, s: Sequent, size_bound: int, step_bound: int,
                           signature=(), space: SearchSpace | None = None):
    """Look for a derivation of ``s.rhs`` from ``s.lhs``.

    Only formulas with at most ``size_bound`` nodes are visited and at most
    ``step_bound`` steps taken.  Returns ``(True, derivation)`` or
    ``(False, None)``; a negative answer says nothing beyond the bounds.
    """
    if size_bound < 1 or step_bound < 1:
        raise ValueError("bounds must be at least 1")
    if space is None:
        sig = set(signature) | symbols(s.lhs) | symbols(s.rhs)
        space = SearchSpace(logic, size_bound, sig)
    start, goal = space.add(s.lhs), space.add(s.rhs)
    parent = space.reach(start, step_bound, goal)
    if goal not in parent:
        return False, None
    d = space.derivation(parent, goal)
    v = check_deep(d, logic)
    if not v:
        raise AssertionError(f"search derivation failed its check: {v}")
    return True, d
