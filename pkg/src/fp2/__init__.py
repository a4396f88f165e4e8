"""Finitely recursive normal logic programs with function symbols: FP2
membership, grounding of call-safe queries and stable-model query answering."""
from .terms import Atom, Fn, Literal, Program, Rule, Var, apply, format_program, format_rule, unify
from .parser import ParseError, parse_atom, parse_goal, parse_program, parse_term
from .norms import compare, nocc, norm
from .depgraph import build_pred_graph, component_has_odd_cycle, sccs
from .patterns import (
    LITERAL, RELAXED, CallPattern, Fp2Verdict, all_call_patterns, call_pattern_for,
    check_goal_call_safe, check_recursion_pattern, find_call_pattern, format_mapping, parse_mapping,
)
from .derivation import ALiteral, ExternalModel, agoal, derivations, is_cyclic, ssup
from .support import GroundProgram, support_subprogram
from .solver import (
    CREDULOUS, SKEPTICAL, answer_query, compose_query, composition_relation, gl_reduct,
    least_model, stable_models,
)
from .errors import BudgetExceeded, DerivationError, Fp2Error, LimitExceeded, NotCallSafe, NotGround, PatternError

__version__ = "0.1.0"
