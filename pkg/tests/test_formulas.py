import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamsem.formulas import (And, Anon, Bot, Dep, Equal, Excl, Exists, Flat,
                              Forall, Hook, Incl, NE, NegRelAtom, NotEqual, Or,
                              ParseError, RelAtom, Top, Var, desugar_hook,
                              free_variables, negate_fo, parse, render,
                              substitute_rel_atoms)
from teamsem.pools import PoolSpec, random_formula

x, y, z = Var("x"), Var("y"), Var("z")


def test_free_variables_dep():
    assert free_variables(Dep((x,), y)) == {"x", "y"}


def test_free_variables_flat_binds_nothing():
    assert free_variables(Flat(Anon((x,), y))) == {"x", "y"}


def test_free_variables_quantifier():
    assert free_variables(parse("E x. R(x, y)")) == {"y"}


def test_free_variables_hook():
    assert free_variables(parse("E(x, y) => dep(x; z)")) == {"x", "y", "z"}


def test_parse_dep():
    assert parse("dep(x; y)") == Dep((x,), y)


def test_parse_nested_prefixes_and_quantifier():
    assert parse("E x. F (anon(; y))") == Exists("x", Flat(Anon((), y)))


def test_parse_const_sugar():
    assert parse("const(y)") == Dep((), y)
    assert parse("dep(; y)") == Dep((), y)
    assert parse("nonconst(y)") == Anon((), y)


def test_parse_hook_guard_rejects_team_atom():
    with pytest.raises(ParseError, match="team atom inside hook guard"):
        parse("inc(x; y) => NE")


def test_parse_reports_position():
    with pytest.raises(ParseError, match=r"at position"):
        parse("dep(x; ")


def test_parse_arity_mismatch():
    with pytest.raises(ParseError, match="arities"):
        parse("R(x) & R(x, y)")
    with pytest.raises(ParseError, match="equal length"):
        parse("inc(x; y, z)")


def test_parse_precedence():
    from teamsem.formulas import BoolOr
    phi = parse("x = y & R(x) | R(y) => NE vv NE")
    # tight to loose: &, |, =>, vv
    assert isinstance(phi, BoolOr)
    assert isinstance(phi.left, Hook)
    assert isinstance(phi.left.guard, Or)
    assert isinstance(phi.left.guard.left, And)
    assert render(phi) == "x = y & R(x) | R(y) => NE vv NE"
    assert phi == parse(render(phi))


def test_parse_bang_on_composite_fo():
    assert parse("!(R(x) & x = y)") == Or(NegRelAtom("R", (x,)), NotEqual(x, y))


def test_parse_bang_rejects_team_atoms():
    with pytest.raises(ParseError, match="first-order"):
        parse("!dep(x; y)")


def test_quantifier_body_extends_right():
    phi = parse("E x. R(x) & R(y)")
    assert phi == Exists("x", And(RelAtom("R", (x,)), RelAtom("R", (y,))))


def test_render_examples():
    assert render(Flat(Flat(Dep((x,), y)))) == "F F dep(x; y)"
    assert render(Incl((x,), (y,))) == "inc(x; y)"
    rendered = render(Hook(RelAtom("E", (y, z)), NE()))
    assert rendered == "E(y,z) => NE"
    assert parse(rendered) == Hook(RelAtom("E", (y, z)), NE())


def test_desugar_hook():
    guard = RelAtom("E", (y, z))
    assert desugar_hook(Hook(guard, NE())) == Or(NegRelAtom("E", (y, z)),
                                                 And(guard, NE()))
    assert desugar_hook(Hook(Equal(x, y), NE())) == Or(NotEqual(x, y),
                                                       And(Equal(x, y), NE()))


def test_desugar_hook_identity_without_hooks():
    phi = parse("F dep(x; y) & anon(; y)")
    assert desugar_hook(phi) == phi


def test_desugar_preserves_free_variables():
    spec = PoolSpec(allow_hook=True, allow_flat=True, allow_ne=True, allow_bool=True,
                    relations=(("R", 1), ("E", 2)))
    rng = random.Random(7)
    for _ in range(100):
        phi = random_formula(rng, spec)
        assert free_variables(desugar_hook(phi)) == free_variables(phi)


def test_negate_fo():
    assert negate_fo(parse("E x. R(x) & x = y")) == parse("A x. !R(x) | x != y")
    assert negate_fo(Top()) == Bot()
    with pytest.raises(ValueError):
        negate_fo(NE())


def test_substitute_rel_atoms():
    build = lambda ts: Equal(y, ts[0])
    assert substitute_rel_atoms(parse("S(x)"), "S", build) == Equal(y, x)
    assert substitute_rel_atoms(parse("!S(x)"), "S", build) == NotEqual(y, x)
    phi = parse("R0(x)")
    assert substitute_rel_atoms(phi, "S", build) == phi
    assert substitute_rel_atoms(parse("S(x) & P(x)"), "S", build) == \
        And(Equal(y, x), RelAtom("P", (x,)))


_ROUND_TRIP_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)),
    allow_ne=True, allow_bool=True, allow_flat=True, allow_hook=True,
    max_depth=5, max_quantifiers=3, max_or=4)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_render_parse_round_trip(seed):
    phi = random_formula(random.Random(seed), _ROUND_TRIP_SPEC)
    assert parse(render(phi)) == phi


def test_excl_requires_equal_lengths():
    with pytest.raises(ValueError):
        Excl((x,), (y, z))


def test_keywords_not_terms():
    with pytest.raises(ParseError):
        parse("dep(F; y)")
