"""Random generators shared by the property and acceptance tests."""

from hypothesis import strategies as st

from posmodal.deep import (
    DeepDerivation, DeepRule, DeepStep, concat, context_lift, enumerate_steps,
    replay,
)
from posmodal.formula import (
    HOLE, LEFT, RIGHT, And, Context, Dia, Formula, TOP, Var, positions, size,
    subformula_at, replace_at,
)
from posmodal.logics import match
from posmodal.rewrite import RewriteDerivation, RewriteRule, RewriteSystem, apply_rule
from posmodal.sequent import (
    SequentProof, and_e1, and_e2, and_intro, axiom, identity, mono,
    syllogism, top_intro,
)
from posmodal.formula import Substitution


def formulas(variables=("p", "q"), symbols=("a", "b"), max_leaves=6):
    atoms = st.sampled_from([Var(v) for v in variables] + [TOP])
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(And, sub, sub),
            st.builds(Dia, st.sampled_from(list(symbols)), sub),
        ),
        max_leaves=max_leaves,
    )


def contexts(variables=("p", "q"), symbols=("a", "b")):
    base = st.just(HOLE)
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.builds(And, sub, formulas(variables, symbols, 3)),
            st.builds(And, formulas(variables, symbols, 3), sub),
            st.builds(Dia, st.sampled_from(list(symbols)), sub),
        ),
        max_leaves=4,
    ).map(Context)


def random_formula(rng, variables=("p", "q"), symbols=("a",), depth=3) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([Var(v) for v in variables] + [TOP])
    if rng.random() < 0.5:
        return Dia(rng.choice(symbols), random_formula(rng, variables, symbols, depth - 1))
    return And(random_formula(rng, variables, symbols, depth - 1),
               random_formula(rng, variables, symbols, depth - 1))


def _axiom_instances(a, logic, signature):
    out = []
    for schema in logic.schemata:
        sub = match(schema.lhs, a, schema.modal_vars)
        if sub is None:
            continue
        labels = dict(sub.label_map)
        for mv in schema.free_modal_vars():
            labels[mv] = sorted(signature)[0]
        out.append(axiom(logic, schema.id, Substitution.of(sub.formula_map, labels)))
    return out


def random_proof_from(rng, a, logic, depth, signature=("a",), max_size=24) -> SequentProof:
    """A valid proof with left side ``a`` and tree depth at most ``depth + 1``."""
    options = ["id", "top"]
    if isinstance(a, And):
        options += ["e1", "e2"]
    axioms = _axiom_instances(a, logic, signature)
    if axioms:
        options += ["ax", "ax"]
    if depth > 0 and size(a) <= max_size:
        options += ["syl", "syl", "andi"]
        if isinstance(a, Dia):
            options += ["mono", "mono"]
    kind = rng.choice(options)
    if kind == "id":
        return identity(a)
    if kind == "top":
        return top_intro(a)
    if kind == "e1":
        return and_e1(a.left, a.right)
    if kind == "e2":
        return and_e2(a.left, a.right)
    if kind == "ax":
        return rng.choice(axioms)
    if kind == "mono":
        return mono(a.label, random_proof_from(rng, a.body, logic, depth - 1, signature, max_size))
    p1 = random_proof_from(rng, a, logic, depth - 1, signature, max_size)
    if kind == "andi":
        p2 = random_proof_from(rng, a, logic, depth - 1, signature, max_size)
        return and_intro(p1, p2)
    p2 = random_proof_from(rng, p1.conclusion.rhs, logic, depth - 1, signature, max_size)
    return syllogism(p1, p2)


def proof_depth(p: SequentProof) -> int:
    return 1 + max((proof_depth(q) for q in p.premises), default=0)


def random_derivation(rng, start, logic, length, signature=("a",), max_size=14) -> DeepDerivation:
    formulas, steps = [start], []
    for _ in range(length):
        options = list(enumerate_steps(formulas[-1], logic, set(signature), max_size))
        if not options:
            break
        st_ = rng.choice(options)
        d = replay(formulas[-1], [st_], logic)
        formulas.append(d.last)
        steps.append(st_)
    return DeepDerivation(formulas, steps)


# --- rewriting ---------------------------------------------------------------

def random_system(rng, letters="abc") -> RewriteSystem:
    alphabet = letters[: rng.randint(1, len(letters))]
    rules = []
    for n in range(rng.randint(1, 4)):
        lhs = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 3)))
        rhs = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 3)))
        rules.append(RewriteRule(lhs, rhs, f"r{n + 1}"))
    return RewriteSystem(frozenset(alphabet), rules)


def random_rewrite_derivation(rng, system, max_steps=8, max_len=8) -> RewriteDerivation:
    letters = sorted(system.alphabet)
    word = tuple(rng.choice(letters) for _ in range(rng.randint(0, 4)))
    words, steps = [word], []
    for _ in range(rng.randint(0, max_steps)):
        options = []
        for r in system.rules:
            for off in range(len(word) - len(r.lhs) + 1):
                if word[off: off + len(r.lhs)] == r.lhs and len(word) - len(r.lhs) + len(r.rhs) <= max_len:
                    options.append((r, off))
        if not options:
            break
        r, off = rng.choice(options)
        word = apply_rule(word, r, off)
        words.append(word)
        steps.append((r.id, off))
    return RewriteDerivation(words, steps)


# --- adversarial detours -----------------------------------------------------

def _local_detour(rng, f):
    """A short AndDup / TopI / AndE excursion that returns to ``f``."""
    r = rng.choice(list(positions(f)))
    keep = rng.choice([LEFT, RIGHT])
    junk = RIGHT if keep == LEFT else LEFT
    drop = DeepRule.AND_E1 if keep == LEFT else DeepRule.AND_E2
    steps = [DeepStep(r, DeepRule.AND_DUP)]
    kind = rng.randrange(4)
    if kind == 1:
        steps.append(DeepStep(r + (junk,), DeepRule.TOP_I))
    elif kind == 2:
        inner = replace_at(f, r, And(subformula_at(f, r), subformula_at(f, r)))
        q = rng.choice(list(positions(subformula_at(inner, r + (junk,)))))
        steps.append(DeepStep(r + (junk,) + q, DeepRule.TOP_I))
    elif kind == 3:
        # T in the junk copy, then duplicated before both copies go.
        steps += [DeepStep(r + (junk,), DeepRule.TOP_I), DeepStep(r + (junk,), DeepRule.AND_DUP)]
    steps.append(DeepStep(r, drop))
    return steps


def inject_detours(rng, d: DeepDerivation, logic, n_local: int) -> DeepDerivation:
    """Wrap ``d`` with one context-lifted detour and ``n_local`` local ones;
    endpoints are preserved."""
    i = rng.randrange(len(d.formulas))
    j = rng.randrange(i, len(d.formulas))
    fi = d.formulas[i]
    segment = DeepDerivation(d.formulas[i: j + 1], d.steps[i:j])
    head = DeepDerivation(d.formulas[: i + 1], d.steps[:i])
    tail = DeepDerivation(d.formulas[j:], d.steps[j:])
    if rng.random() < 0.5:
        ctx, drop = Context(And(HOLE, fi)), DeepRule.AND_E1
    else:
        ctx, drop = Context(And(fi, HOLE)), DeepRule.AND_E2
    dup = replay(fi, [DeepStep((), DeepRule.AND_DUP)])
    lifted = context_lift(segment, ctx, logic)
    end = replay(lifted.last, [DeepStep((), drop)])
    d = concat(head, dup, lifted, end, tail)
    for _ in range(n_local):
        k = rng.randrange(len(d.formulas))
        f = d.formulas[k]
        excursion = replay(f, _local_detour(rng, f), logic)
        d = concat(DeepDerivation(d.formulas[: k + 1], d.steps[:k]), excursion,
                   DeepDerivation(d.formulas[k:], d.steps[k:]))
    return d
