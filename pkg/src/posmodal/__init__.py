"""Workbench for strictly positive polymodal logics.

Sequent and deep-inference calculi with translations between them,
semi-Thue systems and their logics, normalization of derivations, and
Kripke-semantic decision for K+, K4+ and S4+.
"""

from .formula import (
    And, Context, Dia, Formula, HOLE, Hole, ParseError, Sequent, Substitution,
    TOP, Top, Var, compose_contexts, parse_context, parse_formula, parse_sequent,
    plug, print_formula, print_sequent, size, substitute,
)
from .logics import LogicSpec, Schema, builtin_logics, get_logic
from .sequent import (
    SequentProof, Verdict, check_sequent_proof, positive_replacement,
    substitute_proof,
)
from .deep import (
    DeepDerivation, DeepRule, DeepStep, apply_step, check_deep, context_lift,
    deep_to_seq, seq_to_deep, step_residuals,
)
from .normalize import eliminate_conjunction, eliminate_top
from .search import bounded_forward_search
from .semantics import (
    KripkeModel, TreeModel, closure, decide, eval_formula, fixture_model,
    tree_model, truth_set,
)
from .rewrite import (
    RewriteDerivation, RewriteRule, RewriteSystem, apply_rule,
    check_rewrite_derivation, deep_to_rewrite, logic_of, reachable,
    rewrite_to_deep,
)

__version__ = "0.1.0"
