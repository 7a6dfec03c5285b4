import random

import pytest

from teamsem.evaluator import (DEFAULT_BUDGET, NAIVE, OPTIMIZED, EvalBudget,
                               EvalError, Evaluator, Strategy, eval_tarski,
                               evaluate, evaluate_sentence, syntactically_flat)
from teamsem.formulas import (Anon, Dep, Flat, NE, Var, desugar_hook, parse,
                              render)
from teamsem.pools import PoolSpec, estimate_ops, random_formula
from teamsem.structures import Relation, Structure, gen_cycle, gen_two_cycles
from teamsem.teams import BudgetExceeded, Team, enumerate_teams

S1 = Structure(("a",))
S2 = Structure(("0", "1"))
S3 = Structure(("a", "b", "c"))
EDGE = Structure(("0", "1"),
                 {"E": Relation(2, frozenset({("0", "1")})),
                  "P": Relation(1, frozenset({("1",)}))})


def team(vars_, *rows):
    return Team.of(vars_, rows)


# ---------------------------------------------------------------------------
# Tarskian base

def test_tarski_equality():
    assert eval_tarski(S2, {"x": "0", "y": "0"}, parse("x = y"))
    assert not eval_tarski(S2, {"x": "0", "y": "1"}, parse("x = y"))


def test_tarski_top_bot():
    assert eval_tarski(S2, {"x": "0"}, parse("TOP"))
    assert not eval_tarski(S2, {"x": "0"}, parse("BOT"))


def test_tarski_edge():
    s = gen_cycle(3, symmetric=False)
    assert eval_tarski(s, {"x": "v0", "y": "v1"}, parse("E(x, y)"))
    assert not eval_tarski(s, {"x": "v1", "y": "v0"}, parse("E(x, y)"))


def test_tarski_quantifiers():
    assert eval_tarski(EDGE, {}, parse("E x. P(x)"))
    assert not eval_tarski(EDGE, {}, parse("A x. P(x)"))


def test_tarski_errors():
    with pytest.raises(EvalError, match="unbound"):
        eval_tarski(S2, {}, parse("x = y"))
    with pytest.raises(EvalError, match="unknown relation"):
        eval_tarski(S2, {"x": "0"}, parse("Q(x)"))
    with pytest.raises(EvalError, match="unknown constant"):
        eval_tarski(S2, {"x": "0"}, parse("x = #c"))


# ---------------------------------------------------------------------------
# empty team behaviour

@pytest.mark.parametrize("text", [
    "x = y", "x != y", "R(x)", "TOP", "BOT",
    "dep(x; y)", "anon(x; y)", "inc(x; y)", "exc(x; y)", "ind(x; y; y)",
])
def test_empty_team_satisfies_atoms(text):
    s = Structure(("0", "1"), {"R": Relation(1, frozenset())})
    assert evaluate(s, Team.empty(("x", "y")), parse(text))


def test_empty_team_refutes_ne():
    assert not evaluate(S2, Team.empty(("x",)), NE())
    assert evaluate(S2, team(("x",), ("0",)), NE())


# ---------------------------------------------------------------------------
# atom semantics

def test_constancy_two_rows():
    X = team(("x",), ("0",), ("1",))
    assert not evaluate(S2, X, parse("const(x)"))
    assert evaluate(S2, team(("x",), ("0",)), parse("const(x)"))


def test_dep_semantics():
    X = team(("x", "y"), ("0", "0"), ("0", "1"))
    assert not evaluate(S2, X, parse("dep(x; y)"))
    Y = team(("x", "y"), ("0", "0"), ("1", "1"))
    assert evaluate(S2, Y, parse("dep(x; y)"))


def test_anon_semantics():
    X = team(("x", "y"), ("0", "0"), ("0", "1"))
    assert evaluate(S2, X, parse("anon(x; y)"))
    assert not evaluate(S2, team(("x", "y"), ("0", "0")), parse("anon(x; y)"))


def test_incl_semantics():
    X = team(("x", "y"), ("0", "1"), ("1", "0"))
    assert evaluate(S2, X, parse("inc(x; y)"))
    assert not evaluate(S2, team(("x", "y"), ("0", "1")), parse("inc(x; y)"))


def test_excl_semantics():
    assert evaluate(S2, team(("x", "y"), ("0", "1")), parse("exc(x; y)"))
    assert not evaluate(S2, team(("x", "y"), ("0", "1"), ("1", "0")),
                        parse("exc(x; y)"))


def test_ind_semantics():
    full = team(("x", "y"), ("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"))
    assert evaluate(S2, full, parse("ind(; x; y)"))
    broken = team(("x", "y"), ("0", "0"), ("1", "1"))
    assert not evaluate(S2, broken, parse("ind(; x; y)"))
    # conditioning on x makes the broken team fine again
    assert evaluate(S2, broken, parse("ind(x; y; y)"))


def test_ne_or_ne_equals_ne():
    phi = parse("NE | NE")
    for X in enumerate_teams(S2, ("x",)):
        assert evaluate(S2, X, phi) == bool(X.rows)


# ---------------------------------------------------------------------------
# connectives and quantifiers

def test_or_splits_team():
    X = team(("x", "y"), ("0", "0"), ("1", "1"), ("0", "1"))
    # y = x holds on two rows, y != x on the third
    assert evaluate(S2, X, parse("x = y | x != y"))
    assert not evaluate(S2, X, parse("x = y & x != y"))


def test_exists_needs_witness_sets():
    # anon(; y) needs two values for y on one row: only multi-valued
    # supplements can satisfy it, singleton ones cannot.
    X = team(("x",), ("0",))
    assert evaluate(S2, X, parse("E y. anon(; y)"))
    assert not evaluate(S1, X.with_rows({("a",)}), parse("E y. anon(; y)"))


def test_forall_duplicates():
    assert evaluate(S2, Team.unit(), parse("A x. E y. x = y"))
    assert not evaluate(S2, Team.unit(), parse("A x. A y. x = y"))


def test_flat_operator_pointwise():
    X = team(("x",), ("0",), ("1",))
    assert evaluate(S2, X, Flat(Dep((), Var("x")))) is True
    assert not evaluate(S2, X, Dep((), Var("x")))


def test_flat_metamorphic_equals_singleton_conjunction():
    rng = random.Random(11)
    spec = PoolSpec(relations=(("P", 1),), allow_ne=True, max_depth=3,
                    max_quantifiers=1, max_or=1)
    s = EDGE
    for _ in range(40):
        phi = random_formula(rng, spec)
        for X in enumerate_teams(s, ("x", "y"), size_cap=3):
            lhs = evaluate(s, X, Flat(phi))
            rhs = all(evaluate(s, sub, phi) for sub in X.singletons())
            assert lhs == rhs


def test_sentence_evaluation():
    assert evaluate_sentence(S3, parse("E x. TOP"))
    with pytest.raises(EvalError, match="sentence"):
        evaluate_sentence(S3, parse("R(x)"))


def test_sentence_flattening_operator_transparent():
    # F phi on {empty assignment} agrees with phi for sentences
    for text in ["E x. TOP", "A x. E y. anon(x; y)", "E x. nonconst(x)"]:
        phi = parse(text)
        assert evaluate_sentence(S2, phi, OPTIMIZED) == \
            evaluate_sentence(S2, Flat(phi), OPTIMIZED)


def test_anon_remark_one_element_model():
    phi = parse("A x. E y. anon(x; y)")
    assert not evaluate_sentence(S1, phi)
    assert evaluate_sentence(S1, parse("A x. E y. TOP"))
    assert not evaluate_sentence(S1, Flat(phi))


def test_unbound_variable_is_an_error():
    with pytest.raises(EvalError, match="unbound"):
        evaluate(S2, Team.empty(("x",)), parse("dep(x; y)"))


def test_unknown_relation_is_an_error():
    with pytest.raises(EvalError, match="unknown relation"):
        evaluate(S2, team(("x",), ("0",)), parse("Q(x)"))
    with pytest.raises(EvalError, match="arity"):
        evaluate(EDGE, team(("x",), ("0",)), parse("E(x)"))


# ---------------------------------------------------------------------------
# budgets

def test_branch_budget_exceeded_is_not_false():
    budget = EvalBudget(max_branches=5)
    X = team(("x", "y"), ("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"))
    with pytest.raises(BudgetExceeded):
        evaluate(S2, X, parse("dep(x; y) | dep(y; x)"), NAIVE, budget)


def test_row_budget_exceeded():
    budget = EvalBudget(max_rows=3)
    with pytest.raises(BudgetExceeded):
        evaluate(S3, team(("x",), ("a",), ("b",)), parse("A y. TOP"), NAIVE, budget)


def test_timeout_budget():
    budget = EvalBudget(timeout_ms=1)
    X = team(("x",), ("a",), ("b",), ("c",))
    phi = parse("E u. E v. (nonconst(u) & const(u))")  # unsatisfiable body
    with pytest.raises(BudgetExceeded):
        evaluate(S3, X, phi, NAIVE, budget)


def test_budget_validation():
    with pytest.raises(ValueError):
        EvalBudget(max_rows=0)


# ---------------------------------------------------------------------------
# strategies

def test_strategy_defaults():
    assert Strategy() == NAIVE
    assert OPTIMIZED.hook_forced_split and OPTIMIZED.memoize


def test_syntactically_flat():
    assert syntactically_flat(parse("R(x) & x = y"))
    assert syntactically_flat(parse("F dep(x; y)"))
    assert syntactically_flat(parse("E x. R(x)"))
    assert not syntactically_flat(parse("dep(x; y)"))
    assert not syntactically_flat(parse("NE"))


def test_hook_forced_split_matches_desugared_naive():
    s = EDGE
    phi = parse("E(x, y) => dep(x; y)")
    desugared = desugar_hook(phi)
    split_only = Strategy(hook_forced_split=True)
    for X in enumerate_teams(s, ("x", "y")):
        assert evaluate(s, X, phi, split_only) == evaluate(s, X, desugared, NAIVE)


def test_some_row_matches_boolean_definition_on_fo():
    # some p coincides with neg ! p for first-order p
    from teamsem.formulas import BoolNeg, negate_fo
    s = EDGE
    for text in ["P(x)", "E(x, y)", "x = y & P(y)"]:
        phi = parse(text)
        double_negated = BoolNeg(negate_fo(phi))
        for X in enumerate_teams(s, ("x", "y")):
            assert evaluate(s, X, parse(f"some ({text})")) == \
                evaluate(s, X, double_negated)


def test_flat_body_existential_agrees_with_naive():
    s = EDGE
    flagged = Strategy(flat_body_existential=True)
    for text in ["E u. F anon(u; x)", "E u. E(x, u)", "E u. (P(u) & u = x)"]:
        phi = parse(text)
        for X in enumerate_teams(s, ("x", "y"), size_cap=3):
            assert evaluate(s, X, phi, flagged) == evaluate(s, X, phi, NAIVE)


def test_flat_aware_disjunction_agrees_with_naive():
    s = EDGE
    flagged = Strategy(flat_aware_disjunction=True)
    for text in ["P(x) | dep(x; y)", "P(x) | E(x, y)", "dep(x; y) | NE",
                 "F anon(x; y) | x = y"]:
        phi = parse(text)
        for X in enumerate_teams(s, ("x", "y"), size_cap=3):
            assert evaluate(s, X, phi, flagged) == evaluate(s, X, phi, NAIVE)


def test_strategy_agreement_smoke():
    rng = random.Random(23)
    spec = PoolSpec(relations=(("P", 1), ("E", 2)), allow_ne=True,
                    allow_bool=True, allow_flat=True, allow_hook=True,
                    max_depth=3, max_quantifiers=1, max_or=1)
    checked = 0
    for _ in range(60):
        phi = random_formula(rng, spec)
        if estimate_ops(phi, 3, 2) > 100_000:
            continue
        for X in enumerate_teams(EDGE, ("x", "y"), size_cap=3):
            assert evaluate(EDGE, X, phi, OPTIMIZED) == evaluate(EDGE, X, phi, NAIVE)
            checked += 1
    assert checked > 200


def test_empty_team_property_for_ne_free_pool():
    rng = random.Random(5)
    spec = PoolSpec(relations=(("P", 1),), allow_flat=True, allow_hook=True,
                    max_depth=4, max_quantifiers=1, max_or=2)
    for _ in range(60):
        phi = random_formula(rng, spec)
        assert evaluate(EDGE, Team.empty(("x", "y")), phi, OPTIMIZED)


def test_evaluator_stats_and_memo():
    ev = Evaluator(EDGE, OPTIMIZED, DEFAULT_BUDGET)
    X = team(("x",), ("0",), ("1",))
    phi = parse("F P(x) | F !P(x)")
    ev.run(X, phi)
    ev.run(X, phi)
    assert ev.stats.cache_hits > 0
    assert ev.stats.evals > 0


def test_disconnectedness_sentence_small():
    phi = parse("E y. F (E x. (x != y & A z. (E(x,z) => inc(z; x))))")
    assert evaluate_sentence(gen_two_cycles(0), phi, OPTIMIZED)
    assert not evaluate_sentence(gen_cycle(4, symmetric=True), phi, OPTIMIZED)
