"""Universe-relative semantic property checkers.

Flatness, closure and coherence are statements about all structures and
teams, so every checker here is relative to an explicitly enumerated
universe and a positive verdict means "no counterexample found in this
universe".  Counterexamples are real: each witness re-verifies under the
evaluator.

A universe bundles a structure pool, the team variable list, a per-team
size cap and the evaluation strategy/budget.  Team enumeration is closed
under subsets (every team up to the cap occurs), which is what makes the
downward/upward checks and the implication lattice between the verdicts
meaningful.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Mapping, Sequence

from .evaluator import (DEFAULT_BUDGET, OPTIMIZED, EvalBudget, Evaluator,
                        Strategy, evaluate)
from .formulas import Flat, Formula, free_variables, render
from .pools import estimate_ops
from .report import (COUNTEREXAMPLE, HOLDS, INAPPLICABLE, PropertyReport,
                     Witness)
from .structures import (Permutation, Relation, Structure,
                         check_magma_hypothesis)
from .teams import (Team, all_assignments, enumerate_teams, team_closure,
                    team_text)

__all__ = ["Universe", "enumerate_structures", "standard_universe",
           "feasible_team_cap", "truth_table", "is_flat",
           "is_downwards_closed", "is_union_closed", "is_downwards_flat",
           "is_upwards_flat", "is_n_coherent", "equivalent", "entails",
           "flatness_profile", "magma_lemma_check"]


@dataclass(frozen=True)
class Universe:
    structures: tuple[Structure, ...]
    variables: tuple[str, ...]
    team_cap: int | None = None
    max_assignments: int = 12
    strategy: Strategy = OPTIMIZED
    budget: EvalBudget = DEFAULT_BUDGET
    label: str = ""

    def teams(self, structure: Structure) -> Iterator[Team]:
        return enumerate_teams(structure, self.variables, self.team_cap,
                               self.max_assignments)

    def with_cap(self, cap: int | None) -> "Universe":
        return replace(self, team_cap=cap)

    def describe(self) -> str:
        sizes = sorted({len(s.domain) for s in self.structures})
        cap = "all" if self.team_cap is None else f"<={self.team_cap} rows"
        text = (f"{len(self.structures)} structures (|M| in {sizes}), "
                f"teams over {self.variables} ({cap})")
        return f"{text}; {self.label}" if self.label else text


def enumerate_structures(relations: Mapping[str, int],
                         domain_sizes: Sequence[int] = (1, 2, 3),
                         per_size_cap: int = 16,
                         seed: int = 0,
                         constants: Mapping[str, str] | None = None) -> list[Structure]:
    """Deterministic pool of structures over the given signature.

    For each domain size, relation contents are enumerated exhaustively
    when few enough, otherwise the empty and full contents plus a seeded
    sample are taken.  Element names are a, b, c, ...
    """
    rng = random.Random(seed)
    names = "abcdefgh"
    out: list[Structure] = []
    for size in domain_sizes:
        domain = tuple(names[:size])
        spaces = {name: [tuple(t) for t in
                         itertools.product(domain, repeat=arity)]
                  for name, arity in relations.items()}
        total = 1
        for space in spaces.values():
            total *= 2 ** len(space)
        rel_names = sorted(relations)

        def build(masks: dict[str, int]) -> Structure:
            rels = {}
            for name in rel_names:
                space = spaces[name]
                chosen = frozenset(space[i] for i in range(len(space))
                                   if masks[name] >> i & 1)
                rels[name] = Relation(relations[name], chosen)
            return Structure(domain, rels, dict(constants or {}))

        if total <= per_size_cap:
            for combo in itertools.product(*(range(2 ** len(spaces[n]))
                                             for n in rel_names)):
                out.append(build(dict(zip(rel_names, combo))))
        else:
            picked = {tuple(0 for _ in rel_names),
                      tuple(2 ** len(spaces[n]) - 1 for n in rel_names)}
            while len(picked) < per_size_cap:
                picked.add(tuple(rng.randrange(2 ** len(spaces[n]))
                                 for n in rel_names))
            for combo in sorted(picked):
                out.append(build(dict(zip(rel_names, combo))))
    return out


def standard_universe(relations: Mapping[str, int] | None = None,
                      variables: Sequence[str] = ("x", "y"),
                      max_domain: int = 3,
                      team_cap: int | None = None,
                      per_size_cap: int = 16,
                      strategy: Strategy = OPTIMIZED,
                      budget: EvalBudget = DEFAULT_BUDGET,
                      extra_structures: Sequence[Structure] = (),
                      label: str = "") -> Universe:
    structures = enumerate_structures(relations or {},
                                      tuple(range(1, max_domain + 1)),
                                      per_size_cap)
    structures.extend(extra_structures)
    return Universe(tuple(structures), tuple(variables), team_cap,
                    strategy=strategy, budget=budget, label=label)


def feasible_team_cap(phi: Formula, universe: Universe,
                      ops_budget: float = 2_000_000.0,
                      max_cap: int = 9) -> int:
    """Largest team size for which exhaustively checking phi over the
    universe stays within the estimated operation budget."""
    best = 0
    for cap in range(1, max_cap + 1):
        total = 0.0
        for structure in universe.structures:
            n_assign = len(structure.domain) ** len(universe.variables)
            m = len(structure.domain)
            for k in range(0, min(cap, n_assign) + 1):
                total += math.comb(n_assign, k) * estimate_ops(phi, k, m)
            if total > ops_budget:
                break
        if total > ops_budget:
            break
        best = cap
    return best


# ---------------------------------------------------------------------------
# truth tables

def truth_table(structure: Structure, phi: Formula,
                universe: Universe) -> dict[Team, bool]:
    ev = Evaluator(structure, universe.strategy, universe.budget)
    return {team: ev.run(team, phi) for team in universe.teams(structure)}


def _singleton(team: Team, row) -> Team:
    return Team(team.variables, frozenset({row}))


def _check_universe(name: str, universe: Universe, probe) -> PropertyReport:
    """Run a per-structure probe returning an optional counterexample."""
    for structure in universe.structures:
        found = probe(structure)
        if found is not None:
            return found
    return PropertyReport(name, HOLDS, universe.describe())


def is_flat(phi: Formula, universe: Universe) -> PropertyReport:
    """Team truth must coincide with pointwise singleton truth."""
    name = "flat"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        for team, truth in table.items():
            pointwise = all(table[_singleton(team, row)] for row in team.rows)
            if truth != pointwise:
                side = "team holds, some singleton fails" if truth else \
                    "all singletons hold, team fails"
                return PropertyReport(
                    name, COUNTEREXAMPLE, universe.describe(),
                    f"{render(phi)}: {side} on {team_text(team)} "
                    f"over {structure.describe()}",
                    Witness(structure=structure, team=team, formula=phi,
                            note=side))
        return None

    return _check_universe(name, universe, probe)


def is_downwards_closed(phi: Formula, universe: Universe) -> PropertyReport:
    name = "downwards-closed"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        for team, truth in table.items():
            if not truth:
                continue
            rows = team.sorted_rows()
            for size in range(len(rows)):
                for sub in itertools.combinations(rows, size):
                    subteam = Team(team.variables, frozenset(sub))
                    if not table[subteam]:
                        return PropertyReport(
                            name, COUNTEREXAMPLE, universe.describe(),
                            f"{render(phi)} holds on {team_text(team)} but not "
                            f"on sub-team {team_text(subteam)} over "
                            f"{structure.describe()}",
                            Witness(structure=structure, team=team,
                                    other_team=subteam, formula=phi))
        return None

    return _check_universe(name, universe, probe)


def is_union_closed(phi: Formula, universe: Universe) -> PropertyReport:
    """Closure under unions, including the empty union (the empty team)."""
    name = "union-closed"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        empty = Team.empty(universe.variables)
        if not table[empty]:
            return PropertyReport(
                name, COUNTEREXAMPLE, universe.describe(),
                f"{render(phi)} fails on the empty team (empty union) over "
                f"{structure.describe()}",
                Witness(structure=structure, team=empty, formula=phi))
        satisfying = [t for t, v in table.items() if v]
        for a in satisfying:
            for b in satisfying:
                union = Team(a.variables, a.rows | b.rows)
                truth = table.get(union)
                if truth is None:
                    continue  # union exceeds the enumeration cap
                if not truth:
                    return PropertyReport(
                        name, COUNTEREXAMPLE, universe.describe(),
                        f"{render(phi)} holds on {team_text(a)} and "
                        f"{team_text(b)} but not on their union over "
                        f"{structure.describe()}",
                        Witness(structure=structure, team=a, other_team=b,
                                formula=phi))
        return None

    return _check_universe(name, universe, probe)


def is_downwards_flat(phi: Formula, universe: Universe) -> PropertyReport:
    name = "downwards-flat"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        for team, truth in table.items():
            if not truth:
                continue
            for row in team.rows:
                if not table[_singleton(team, row)]:
                    sub = _singleton(team, row)
                    return PropertyReport(
                        name, COUNTEREXAMPLE, universe.describe(),
                        f"{render(phi)} holds on {team_text(team)} but not on "
                        f"singleton {team_text(sub)} over {structure.describe()}",
                        Witness(structure=structure, team=team, other_team=sub,
                                formula=phi))
        return None

    return _check_universe(name, universe, probe)


def is_upwards_flat(phi: Formula, universe: Universe) -> PropertyReport:
    name = "upwards-flat"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        for team, truth in table.items():
            if truth:
                continue
            if all(table[_singleton(team, row)] for row in team.rows):
                return PropertyReport(
                    name, COUNTEREXAMPLE, universe.describe(),
                    f"every singleton of {team_text(team)} satisfies "
                    f"{render(phi)} but the team does not, over "
                    f"{structure.describe()}",
                    Witness(structure=structure, team=team, formula=phi))
        return None

    return _check_universe(name, universe, probe)


def is_n_coherent(phi: Formula, n: int, universe: Universe) -> PropertyReport:
    """Team truth must equal truth of every size-n sub-team."""
    if n <= 0:
        raise ValueError("coherence degree must be positive")
    name = f"{n}-coherent"

    def probe(structure):
        table = truth_table(structure, phi, universe)
        for team, truth in table.items():
            rows = team.sorted_rows()
            pieces = all(table[Team(team.variables, frozenset(sub))]
                         for sub in itertools.combinations(rows, n))
            if truth != pieces:
                side = ("team holds, some size-%d sub-team fails" % n) if truth \
                    else ("all size-%d sub-teams hold, team fails" % n)
                return PropertyReport(
                    name, COUNTEREXAMPLE, universe.describe(),
                    f"{render(phi)}: {side} on {team_text(team)} over "
                    f"{structure.describe()}",
                    Witness(structure=structure, team=team, formula=phi,
                            note=side))
        return None

    return _check_universe(name, universe, probe)


def _compare(phi: Formula, psi: Formula, universe: Universe,
             both_ways: bool) -> PropertyReport:
    name = "equivalent" if both_ways else "entails"

    def probe(structure):
        left = truth_table(structure, phi, universe)
        right = truth_table(structure, psi, universe)
        for team in left:
            a, b = left[team], right[team]
            bad = (a != b) if both_ways else (a and not b)
            if bad:
                return PropertyReport(
                    name, COUNTEREXAMPLE, universe.describe(),
                    f"{render(phi)} is {a} but {render(psi)} is {b} on "
                    f"{team_text(team)} over {structure.describe()}",
                    Witness(structure=structure, team=team, formula=psi,
                            note=f"lhs={a} rhs={b}"))
        return None

    return _check_universe(name, universe, probe)


def equivalent(phi: Formula, psi: Formula, universe: Universe) -> PropertyReport:
    return _compare(phi, psi, universe, both_ways=True)


def entails(phi: Formula, psi: Formula, universe: Universe) -> PropertyReport:
    return _compare(phi, psi, universe, both_ways=False)


def flatness_profile(phi: Formula, universe: Universe) -> dict[str, bool]:
    """One-pass verdicts for flat / downwards-closed / union-closed /
    downwards-flat / upwards-flat on the universe.

    Teams are handled as bitmasks over the assignment list, so the
    subset and union bookkeeping is cheap; the evaluator is still the
    single source of truth values.
    """
    flags = {"flat": True, "dc": True, "uc": True, "df": True, "uf": True}
    for structure in universe.structures:
        rows = all_assignments(structure, universe.variables)
        n = len(rows)
        if n > universe.max_assignments:
            raise ValueError("assignment space exceeds the universe budget")
        cap = n if universe.team_cap is None else min(universe.team_cap, n)
        masks = [m for m in range(2 ** n) if bin(m).count("1") <= cap]
        ev = Evaluator(structure, universe.strategy, universe.budget)
        truth = {}
        for mask in masks:
            team = Team(universe.variables,
                        frozenset(rows[i] for i in range(n) if mask >> i & 1))
            truth[mask] = ev.run(team, phi)
        singles = 0
        for i in range(n):
            if truth[1 << i]:
                singles |= 1 << i
        for mask, value in truth.items():
            pointwise = mask & ~singles == 0
            if value and not pointwise:
                flags["df"] = flags["flat"] = False
            if pointwise and not value:
                flags["uf"] = flags["flat"] = False
        if flags["dc"]:
            for mask, value in truth.items():
                if not value:
                    continue
                sub = (mask - 1) & mask
                while True:
                    if not truth[sub]:
                        flags["dc"] = False
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
                if not flags["dc"]:
                    break
        if flags["uc"]:
            if not truth[0]:
                flags["uc"] = False
        if flags["uc"]:
            # an unsatisfied team that is the union of its satisfied
            # sub-teams refutes union closure (folding pairwise unions)
            for mask, value in truth.items():
                if value or mask == 0:
                    continue
                acc = 0
                sub = mask
                while True:
                    if truth[sub]:
                        acc |= sub
                        if acc == mask:
                            flags["uc"] = False
                            break
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
                if not flags["uc"]:
                    break
        if not any(flags.values()):
            break
    return flags


def magma_lemma_check(structure: Structure, perms: Sequence[Permutation],
                      phi: Formula,
                      variables: Sequence[str] = ("x", "y"),
                      exclusion_mode: str = "top",
                      strategy: Strategy = OPTIMIZED,
                      budget: EvalBudget = DEFAULT_BUDGET) -> PropertyReport:
    """On teams closed under the given automorphisms, compare phi with
    its syntactic flattening.

    Inapplicable when the unitary-magma/fixing-moving hypothesis fails or
    the domain has a single element (no value can move)."""
    from .flattening import flatten

    name = "magma-flattening"
    hypothesis = check_magma_hypothesis(structure, perms)
    if not hypothesis.holds():
        return PropertyReport(name, INAPPLICABLE, hypothesis.universe,
                              f"hypothesis fails: {hypothesis.details}")
    if len(structure.domain) < 2:
        return PropertyReport(name, INAPPLICABLE, hypothesis.universe,
                              "one-element domain: nothing can be moved")
    flat_phi = flatten(phi, exclusion_mode)
    ev = Evaluator(structure, strategy, budget)
    closed = 0
    for team in enumerate_teams(structure, tuple(variables)):
        if team_closure(team, perms) != team:
            continue
        closed += 1
        a = ev.run(team, phi)
        b = ev.run(team, flat_phi)
        if a != b:
            return PropertyReport(
                name, COUNTEREXAMPLE,
                f"{hypothesis.universe}, closed teams over {tuple(variables)}",
                f"{render(phi)} is {a} but its flattening {render(flat_phi)} "
                f"is {b} on closed team {team_text(team)}",
                Witness(structure=structure, team=team, formula=phi,
                        note=f"flattening {render(flat_phi)}"))
    return PropertyReport(name, HOLDS,
                          f"{hypothesis.universe}, {closed} closed teams over "
                          f"{tuple(variables)}")
