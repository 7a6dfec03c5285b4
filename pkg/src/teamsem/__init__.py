"""Exact model checker and property laboratory for team-semantics logics."""

from .evaluator import (NAIVE, OPTIMIZED, EvalBudget, EvalError, Evaluator,
                        Strategy, eval_tarski, evaluate, evaluate_sentence)
from .formulas import Formula, ParseError, free_variables, parse, render
from .report import PropertyReport
from .structures import (Permutation, Structure, automorphisms, gen_cycle,
                         gen_single_cycle, gen_two_cycles, is_connected,
                         parse_model, render_model)
from .teams import (BudgetExceeded, Team, duplicate, enumerate_teams,
                    parse_team, project_relation, render_team, supplement,
                    team_closure)

__all__ = [
    "BudgetExceeded", "EvalBudget", "EvalError", "Evaluator", "Formula",
    "NAIVE", "OPTIMIZED", "ParseError", "Permutation", "PropertyReport",
    "Strategy", "Structure", "Team", "automorphisms", "duplicate",
    "enumerate_teams", "eval_tarski", "evaluate", "evaluate_sentence",
    "free_variables", "gen_cycle", "gen_single_cycle", "gen_two_cycles",
    "is_connected", "parse", "parse_model", "parse_team",
    "project_relation", "render", "render_model", "render_team",
    "supplement", "team_closure",
]
