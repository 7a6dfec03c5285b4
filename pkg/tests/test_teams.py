import pytest

from teamsem.structures import Permutation, Structure, automorphisms
from teamsem.teams import (BudgetExceeded, Team, duplicate, enumerate_teams,
                           parse_team, project_relation, render_team,
                           supplement, team_closure)

S2 = Structure(("0", "1"))
S3 = Structure(("a", "b", "c"))


def test_duplicate_unit_team():
    out = duplicate(Team.unit(), "x", S2)
    assert out == Team.of(("x",), [("0",), ("1",)])


def test_duplicate_empty_team():
    out = duplicate(Team.empty(("x",)), "y", S2)
    assert out == Team.empty(("x", "y"))


def test_duplicate_size_fresh_variable():
    team = Team.of(("x",), [("0",), ("1",)])
    assert len(duplicate(team, "y", S2)) == len(team) * len(S2.domain)


def test_duplicate_existing_variable_overwrites():
    team = Team.of(("x", "y"), [("0", "0")])
    out = duplicate(team, "y", S2)
    assert out == Team.of(("x", "y"), [("0", "0"), ("0", "1")])


def test_supplement_constant_choice():
    team = Team.of(("x",), [("0",), ("1",)])
    out = supplement(team, "y", {row: {"0"} for row in team.rows})
    assert out == Team.of(("x", "y"), [("0", "0"), ("1", "0")])


def test_supplement_full_choice_equals_duplicate():
    team = Team.of(("x",), [("0",), ("1",)])
    full = {row: S2.domain for row in team.rows}
    assert supplement(team, "y", full) == duplicate(team, "y", S2)


def test_supplement_empty_team():
    assert supplement(Team.empty(("x",)), "y", {}) == Team.empty(("x", "y"))


def test_supplement_errors():
    team = Team.of(("x",), [("0",)])
    with pytest.raises(ValueError, match="undefined"):
        supplement(team, "y", {})
    with pytest.raises(ValueError, match="empty"):
        supplement(team, "y", {("0",): set()})


def test_project_relation():
    team = Team.of(("x", "y"), [("0", "1"), ("0", "2")])
    assert project_relation(team, ("x",)) == {("0",)}
    assert project_relation(team, ("x", "y")) == {("0", "1"), ("0", "2")}
    assert project_relation(Team.empty(("x",)), ("x",)) == frozenset()
    with pytest.raises(KeyError):
        project_relation(team, ("z",))


def test_project_ignores_duplicated_variable():
    team = Team.of(("x", "y"), [("0", "1"), ("0", "2")])
    bigger = duplicate(team, "z", Team and S3)
    assert project_relation(bigger, ("x", "y")) == project_relation(team, ("x", "y"))


def test_team_closure_identity():
    team = Team.of(("x",), [("a",)])
    assert team_closure(team, [Permutation.identity(S3.domain)]) == team


def test_team_closure_orbit():
    team = Team.of(("x",), [("a",)])
    out = team_closure(team, automorphisms(S3))
    assert out == Team.of(("x",), [("a",), ("b",), ("c",)])


def test_team_closure_idempotent_for_magma():
    perms = automorphisms(S3)
    team = Team.of(("x", "y"), [("a", "b"), ("a", "a")])
    once = team_closure(team, perms)
    assert team_closure(once, perms) == once
    assert team.rows <= once.rows


def test_enumerate_teams_counts():
    assert len(list(enumerate_teams(S2, ("x",)))) == 4
    assert len(list(enumerate_teams(S2, ("x", "y")))) == 16


def test_enumerate_teams_order_and_cap():
    teams = list(enumerate_teams(S2, ("x",)))
    assert teams[0] == Team.empty(("x",))
    capped = list(enumerate_teams(S2, ("x",), size_cap=1))
    assert len(capped) == 3
    assert capped[0] == Team.empty(("x",))


def test_enumerate_teams_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_teams(S3, ("x", "y", "z"), max_assignments=12))


def test_team_rows_validated():
    with pytest.raises(ValueError):
        Team.of(("x",), [("a", "b")])


def test_team_file_round_trip():
    team = Team.of(("x", "y"), [("a", "b"), ("b", "c")])
    assert parse_team(render_team(team)) == team


def test_team_file_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        parse_team("vars: x\nrow: a\nrow: a\n")


def test_team_file_requires_vars():
    with pytest.raises(ValueError, match="vars"):
        parse_team("row: a\n")
