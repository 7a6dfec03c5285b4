import pytest

from teamsem.analysis import standard_universe
from teamsem.evaluator import OPTIMIZED, evaluate
from teamsem.flattening import (EXCLUSION_NEQ, FlatteningError,
                                check_translation_biconditional, flatten,
                                simplify_flat, translate_singleton_guess,
                                tuple_equality, verify_flattening_axioms)
from teamsem.formulas import (And, Anon, Bot, Dep, Equal, Flat, NE, NotEqual,
                              Or, Top, Var, parse, render)
from teamsem.structures import Structure
from teamsem.teams import Team, enumerate_teams

x, y = Var("x"), Var("y")
UNIVERSE = standard_universe(label="flattening tests")
REL_UNIVERSE = standard_universe({"R": 1}, label="flattening tests")


def test_flatten_atoms_to_top():
    for text in ["dep(x; y)", "const(y)", "anon(x; y)", "nonconst(y)",
                 "inc(x; y)", "ind(x; y; y)", "exc(x; y)"]:
        assert flatten(parse(text)) == Top()


def test_flatten_homomorphic():
    assert flatten(parse("R(x) & anon(x; y)")) == parse("R(x) & TOP")
    assert flatten(parse("E x. (R(x) | dep(x; y))")) == parse("E x. (R(x) | TOP)")
    assert flatten(parse("R(x) => inc(x; y)")) == parse("R(x) => TOP")


def test_flatten_exclusion_inequality_mode():
    assert flatten(parse("exc(x; y)"), EXCLUSION_NEQ) == NotEqual(x, y)
    assert flatten(parse("exc(x, y; y, x)"), EXCLUSION_NEQ) == \
        Or(NotEqual(x, y), NotEqual(y, x))


def test_flatten_ne_unchanged_and_flat_recurses():
    assert flatten(NE()) == NE()
    assert flatten(Flat(Dep((x,), y))) == Top()
    assert flatten(Flat(parse("R(x)"))) == parse("R(x)")


def test_flatten_rejects_boolean_operators():
    for text in ["neg dep(x; y)", "NE vv NE", "some R(x)"]:
        with pytest.raises(FlatteningError):
            flatten(parse(text))


def test_simplify_examples():
    assert simplify_flat(parse("F inc(x; y)")) == Equal(x, y)
    assert simplify_flat(parse("F F dep(x; y)")) == Top()
    assert simplify_flat(parse("F (R(x) & anon(; y))")) == parse("R(x) & BOT")
    assert simplify_flat(parse("F exc(x; y)")) == NotEqual(x, y)
    assert simplify_flat(parse("F ind(; x; y)")) == Top()
    assert simplify_flat(parse("F x = y")) == Equal(x, y)


def test_simplify_no_rewrite_under_disjunction_or_quantifiers():
    phi = parse("F (dep(x; y) | anon(x; y))")
    assert simplify_flat(phi) == phi
    psi = parse("F (E u. anon(u; y))")
    assert simplify_flat(psi) == psi


def test_simplify_preserves_truth_on_small_universe():
    import random

    from teamsem.pools import PoolSpec, random_formula
    rng = random.Random(3)
    spec = PoolSpec(allow_flat=True, max_depth=3, max_quantifiers=0, max_or=1)
    s = Structure(("0", "1"))
    for _ in range(60):
        phi = Flat(random_formula(rng, spec))
        simplified = simplify_flat(phi)
        for X in enumerate_teams(s, ("x", "y"), size_cap=3):
            assert evaluate(s, X, phi, OPTIMIZED) == \
                evaluate(s, X, simplified, OPTIMIZED)


def test_axioms_dep_top_holds():
    report = verify_flattening_axioms(parse("dep(x; y)"), Top(), UNIVERSE)
    assert report.holds()


def test_axioms_anon_bot_fails_entailment():
    report = verify_flattening_axioms(parse("anon(x; y)"), Bot(), UNIVERSE)
    assert report.verdict == "counterexample"
    assert "entailment" in report.details
    w = report.witness
    # the witness is a team satisfying the atom but not BOT: re-verify
    assert evaluate(w.structure, w.team, parse("anon(x; y)"))
    assert not evaluate(w.structure, w.team, Bot())
    assert len(w.team.rows) >= 2


def test_axioms_exclusion_both_choices_hold():
    phi = parse("exc(x; y)")
    assert verify_flattening_axioms(phi, Top(), UNIVERSE).holds()
    assert verify_flattening_axioms(phi, NotEqual(x, y), UNIVERSE).holds()


def test_axioms_candidate_variable_check():
    with pytest.raises(ValueError):
        verify_flattening_axioms(parse("dep(x; y)"), parse("z = z"), UNIVERSE)


def test_translate_no_source_atoms():
    out = translate_singleton_guess(parse("R0(x)"), ("x",), "S", "R", ("y",))
    assert out == parse("A y. (!R(y) | R0(x))")


def test_translate_replaces_atoms():
    out = translate_singleton_guess(parse("S(x)"), ("x",), "S", "R", ("y",))
    assert out == parse("A y. (!R(y) | y = x)")
    out2 = translate_singleton_guess(parse("S(x) & P(x)"), ("x",), "S", "R", ("y",))
    assert out2 == parse("A y. (!R(y) | (y = x & P(x)))")


def test_translate_negated_atoms_normalize():
    out = translate_singleton_guess(parse("!S(x)"), ("x",), "S", "R", ("y",))
    assert out == parse("A y. (!R(y) | y != x)")


def test_translate_errors():
    with pytest.raises(ValueError, match="captured"):
        translate_singleton_guess(parse("S(x)"), ("x",), "S", "R", ("x",))
    with pytest.raises(ValueError, match="fresh"):
        translate_singleton_guess(parse("S(x)"), ("x", "y"), "S", "R", ("u",))
    with pytest.raises(ValueError, match="arity"):
        translate_singleton_guess(parse("S(x, x)"), ("x",), "S", "R", ("y",))


def test_biconditional_pure_fo_all_small_teams():
    s = Structure(("0", "1"), {"R0": (1, frozenset({("1",)}))})
    psi = parse("R0(x)")
    for X in enumerate_teams(s, ("x",)):
        report = check_translation_biconditional(s, X, psi, psi, ("x",))
        assert report.holds(), report.details


def test_biconditional_empty_team():
    s = Structure(("0", "1"))
    X = Team.empty(("x",))
    report = check_translation_biconditional(s, X, parse("x = x"), parse("x = x"), ("x",))
    assert report.holds()


def test_biconditional_tautology():
    s = Structure(("0", "1", "2"))
    psi = parse("x = x")
    for X in enumerate_teams(s, ("x",), size_cap=2):
        assert check_translation_biconditional(s, X, psi, psi, ("x",)).holds()


def test_tuple_equality_shapes():
    assert tuple_equality((x, y), (y, x)) == And(Equal(x, y), Equal(y, x))
