"""Teams (sets of assignments over a fixed variable list) and their algebra.

A team stores its variable domain as an ordered tuple and its rows as a
frozenset of value tuples aligned with that order, which makes teams
hashable and usable as memoization keys.  The empty team is legal and
distinct from the one-row team of the empty assignment.

Team file format::

    vars: x y
    row: a b
    row: a c

Duplicate rows are rejected.  Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .structures import Permutation, Structure

Row = tuple[str, ...]


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration or evaluation budget runs out.

    Deliberately distinct from a false answer."""


@dataclass(frozen=True)
class Team:
    variables: tuple[str, ...]
    rows: frozenset[Row]

    def __post_init__(self):
        if not isinstance(self.variables, tuple):
            object.__setattr__(self, "variables", tuple(self.variables))
        if not isinstance(self.rows, frozenset):
            object.__setattr__(self, "rows", frozenset(tuple(r) for r in self.rows))
        width = len(self.variables)
        if not all(len(row) == width for row in self.rows):
            bad = next(r for r in self.rows if len(r) != width)
            raise ValueError(f"row {bad} does not match variables {self.variables}")

    @classmethod
    def of(cls, variables: Sequence[str], rows: Iterable[Sequence[str]]) -> "Team":
        return cls(tuple(variables), frozenset(tuple(r) for r in rows))

    @classmethod
    def empty(cls, variables: Sequence[str]) -> "Team":
        return cls(tuple(variables), frozenset())

    @classmethod
    def unit(cls) -> "Team":
        """The team containing only the empty assignment."""
        return cls((), frozenset({()}))

    def __len__(self) -> int:
        return len(self.rows)

    def sorted_rows(self) -> list[Row]:
        return sorted(self.rows)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def assignments(self) -> list[dict[str, str]]:
        return [dict(zip(self.variables, row)) for row in self.sorted_rows()]

    def with_rows(self, rows: Iterable[Row]) -> "Team":
        return Team(self.variables, frozenset(rows))

    def singletons(self) -> Iterator["Team"]:
        for row in self.sorted_rows():
            yield Team(self.variables, frozenset({row}))


def _extended(team: Team, var: str) -> tuple[tuple[str, ...], int]:
    """Variable tuple after binding var, and the column index it lands in."""
    if var in team.variables:
        return team.variables, team.variables.index(var)
    return team.variables + (var,), len(team.variables)


def set_value(row: Row, index: int, value: str) -> Row:
    if index == len(row):
        return row + (value,)
    return row[:index] + (value,) + row[index + 1:]


def duplicate(team: Team, var: str, structure: Structure) -> Team:
    """Every row extended with every domain value at var."""
    variables, idx = _extended(team, var)
    rows = {set_value(row, idx, m) for row in team.rows for m in structure.domain}
    return Team(variables, frozenset(rows))


def supplement(team: Team, var: str, choices: Mapping[Row, Iterable[str]]) -> Team:
    """Every row extended at var with its own non-empty set of values."""
    variables, idx = _extended(team, var)
    rows = set()
    for row in team.rows:
        if row not in choices:
            raise ValueError(f"choice function undefined on row {row}")
        values = list(choices[row])
        if not values:
            raise ValueError(f"choice function empty on row {row}")
        for m in values:
            rows.add(set_value(row, idx, m))
    return Team(variables, frozenset(rows))


def project_relation(team: Team, variables: Sequence[str]) -> frozenset[Row]:
    """The relation {(s(x1),...,s(xn)) : s in team}."""
    indices = [team.index(v) for v in variables]
    return frozenset(tuple(row[i] for i in indices) for row in team.rows)


def team_closure(team: Team, perms: Sequence[Permutation]) -> Team:
    """All rows reachable by applying the given permutations elementwise."""
    rows = {perm.apply_row(row) for row in team.rows for perm in perms}
    return Team(team.variables, frozenset(rows))


def all_assignments(structure: Structure, variables: Sequence[str]) -> list[Row]:
    return [tuple(values) for values in
            itertools.product(structure.domain, repeat=len(variables))]


def enumerate_teams(structure: Structure, variables: Sequence[str],
                    size_cap: int | None = None,
                    max_assignments: int = 12) -> Iterator[Team]:
    """Every team over the variables, in a fixed deterministic order.

    Without a size cap the order is binary counting over the assignment
    list (the empty team first); with a cap, teams come in order of
    increasing size.  Raises BudgetExceeded when the full assignment
    space is larger than max_assignments.
    """
    rows = all_assignments(structure, variables)
    if len(rows) > max_assignments:
        raise BudgetExceeded(
            f"{len(rows)} assignments over {tuple(variables)} exceed the "
            f"enumeration budget of {max_assignments}")
    variables = tuple(variables)
    if size_cap is None:
        for mask in range(2 ** len(rows)):
            picked = [rows[i] for i in range(len(rows)) if mask >> i & 1]
            yield Team(variables, frozenset(picked))
    else:
        for size in range(min(size_cap, len(rows)) + 1):
            for picked in itertools.combinations(rows, size):
                yield Team(variables, frozenset(picked))


# ---------------------------------------------------------------------------
# team files

def parse_team(text: str) -> Team:
    variables: tuple[str, ...] | None = None
    rows: list[Row] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            variables = tuple(line[len("vars:"):].split())
        elif line.startswith("row:"):
            if variables is None:
                raise ValueError(f"line {lineno}: 'row:' before 'vars:'")
            row = tuple(line[len("row:"):].split())
            if len(row) != len(variables):
                raise ValueError(f"line {lineno}: row has {len(row)} values, "
                                 f"expected {len(variables)}")
            if row in rows:
                raise ValueError(f"line {lineno}: duplicate row {row}")
            rows.append(row)
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    if variables is None:
        raise ValueError("team file has no 'vars:' line")
    return Team(variables, frozenset(rows))


def render_team(team: Team) -> str:
    lines = ["vars: " + " ".join(team.variables)]
    lines.extend("row: " + " ".join(row) for row in team.sorted_rows())
    return "\n".join(lines) + "\n"


def team_text(team: Team) -> str:
    """Compact one-line rendering for report details."""
    if not team.rows:
        return "{}"
    rows = ["(" + ",".join(f"{v}={x}" for v, x in zip(team.variables, row)) + ")"
            for row in team.sorted_rows()]
    return "{" + " ".join(rows) + "}"
