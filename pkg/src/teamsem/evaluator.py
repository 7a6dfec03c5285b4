"""Exact evaluation of formulas on (structure, team) pairs.

The semantics is the lax one: a team satisfies `p | q` when it is the
union of two (possibly overlapping, possibly empty) sub-teams satisfying
the disjuncts, and `E v. p` asks for a choice of a non-empty value set
per row.  Literals hold when every row satisfies them classically, so
the empty team satisfies every literal, including BOT.

Two strategies are provided.  The naive strategy follows the defining
clauses directly: disjunction searches all covers (3^|X| signed
memberships) and the existential quantifier searches all per-row choice
sets.  The optimized strategy adds independently toggleable rewrites
that preserve truth exactly:

* hook_forced_split -- `a => p` is decided on the sub-team of rows
  satisfying the first-order guard `a`; the guard's flatness forces that
  cover, so this is an equivalence, not a heuristic.
* flat_body_existential -- when the body of `E v` is F q or first-order,
  a witness exists iff each row has some value making its singleton
  satisfy the body, so the search is per row.
* flat_aware_disjunction -- a syntactically flat disjunct can be taken
  maximal, shrinking the cover search.
* memoize -- evaluation is a pure function of (formula, team) for a
  fixed structure, so results are cached.

Budgets bound team growth, branching and wall time; exhausting a budget
raises BudgetExceeded and is never reported as false.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping

from .formulas import (And, Anon, Bot, BoolNeg, BoolOr, Dep, Equal, Excl,
                       Exists, Flat, Forall, Formula, Hook, Incl, Ind, NE,
                       NegRelAtom, NotEqual, Or, RelAtom, SomeRow, Term, Top,
                       Var, free_variables, is_first_order, is_literal,
                       negate_fo)
from .structures import Structure
from .teams import BudgetExceeded, Row, Team, duplicate, set_value

__all__ = ["EvalError", "Strategy", "NAIVE", "OPTIMIZED", "EvalBudget",
           "DEFAULT_BUDGET", "EvalStats", "Evaluator", "evaluate",
           "evaluate_sentence", "eval_tarski", "syntactically_flat"]


class EvalError(Exception):
    """Unbound variable, unknown symbol, or arity mismatch."""


@dataclass(frozen=True)
class Strategy:
    hook_forced_split: bool = False
    flat_body_existential: bool = False
    flat_aware_disjunction: bool = False
    memoize: bool = False


NAIVE = Strategy()
OPTIMIZED = Strategy(hook_forced_split=True, flat_body_existential=True,
                     flat_aware_disjunction=True, memoize=True)


@dataclass(frozen=True)
class EvalBudget:
    max_rows: int = 4096
    max_branches: int = 5_000_000
    timeout_ms: int | None = None

    def __post_init__(self):
        if self.max_rows <= 0 or self.max_branches <= 0:
            raise ValueError("budget limits must be positive")
        if self.timeout_ms is not None and self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")


DEFAULT_BUDGET = EvalBudget()

_MEMO_CAP = 400_000  # entries; beyond this the cache stops growing


@dataclass
class EvalStats:
    evals: int = 0
    branches: int = 0
    cache_hits: int = 0


def syntactically_flat(phi: Formula) -> bool:
    """Conservative syntactic test for flatness.

    Literals and F-formulas are flat, and flatness is preserved by
    conjunction, disjunction, hooks and both quantifiers.  Team atoms,
    NE and the Boolean operators are not claimed flat.
    """
    if is_literal(phi) or isinstance(phi, Flat):
        return True
    if isinstance(phi, (And, Or)):
        return syntactically_flat(phi.left) and syntactically_flat(phi.right)
    if isinstance(phi, Hook):
        return syntactically_flat(phi.body)
    if isinstance(phi, (Exists, Forall)):
        return syntactically_flat(phi.body)
    return False


# ---------------------------------------------------------------------------
# classical single-assignment truth

def _term_value(term: Term, assignment: Mapping[str, str], structure: Structure) -> str:
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except KeyError:
            raise EvalError(f"unbound variable {term.name!r}") from None
    try:
        return structure.constants[term.name]
    except KeyError:
        raise EvalError(f"unknown constant {term.name!r}") from None


def _rel_tuples(structure: Structure, name: str, arity: int) -> frozenset[Row]:
    rel = structure.relations.get(name)
    if rel is None:
        raise EvalError(f"unknown relation {name!r}")
    if rel.arity != arity:
        raise EvalError(f"relation {name!r} has arity {rel.arity}, atom uses {arity}")
    return rel.tuples


def eval_tarski(structure: Structure, assignment: Mapping[str, str],
                phi: Formula) -> bool:
    """Classical truth of a first-order formula under one assignment."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, RelAtom):
        values = tuple(_term_value(t, assignment, structure) for t in phi.terms)
        return values in _rel_tuples(structure, phi.name, len(phi.terms))
    if isinstance(phi, NegRelAtom):
        values = tuple(_term_value(t, assignment, structure) for t in phi.terms)
        return values not in _rel_tuples(structure, phi.name, len(phi.terms))
    if isinstance(phi, Equal):
        return (_term_value(phi.left, assignment, structure)
                == _term_value(phi.right, assignment, structure))
    if isinstance(phi, NotEqual):
        return (_term_value(phi.left, assignment, structure)
                != _term_value(phi.right, assignment, structure))
    if isinstance(phi, And):
        return (eval_tarski(structure, assignment, phi.left)
                and eval_tarski(structure, assignment, phi.right))
    if isinstance(phi, Or):
        return (eval_tarski(structure, assignment, phi.left)
                or eval_tarski(structure, assignment, phi.right))
    if isinstance(phi, Exists):
        return any(eval_tarski(structure, {**assignment, phi.var: m}, phi.body)
                   for m in structure.domain)
    if isinstance(phi, Forall):
        return all(eval_tarski(structure, {**assignment, phi.var: m}, phi.body)
                   for m in structure.domain)
    raise EvalError(f"not a first-order formula node: {type(phi).__name__}")


# ---------------------------------------------------------------------------
# team evaluation

class Evaluator:
    """Evaluates formulas on teams over one fixed structure.

    A single instance may be reused across many teams and formulas; the
    memo table (when enabled) is shared across those calls, which is
    sound because evaluation is a pure function of (formula, team).
    """

    def __init__(self, structure: Structure, strategy: Strategy = NAIVE,
                 budget: EvalBudget = DEFAULT_BUDGET):
        self.structure = structure
        self.strategy = strategy
        self.budget = budget
        self.stats = EvalStats()
        # keyed by object identity to avoid rehashing formula trees; the
        # keepalive map pins every memoized formula so ids stay unique
        self._memo: dict[tuple[int, Team], bool] = {}
        self._keepalive: dict[int, Formula] = {}
        self._desugared: dict[int, Formula] = {}
        self._fv: dict[int, frozenset[str]] = {}
        self._deadline: float | None = None
        self._subsets: list[tuple[str, ...]] | None = None

    def run(self, team: Team, phi: Formula) -> bool:
        missing = free_variables(phi) - set(team.variables)
        if missing:
            raise EvalError(f"unbound variables {sorted(missing)}; "
                            f"team domain is {team.variables}")
        if self.budget.timeout_ms is not None:
            self._deadline = time.monotonic() + self.budget.timeout_ms / 1000.0
        return self._eval(team, phi)

    # -- plumbing

    def _branch(self) -> None:
        self.stats.branches += 1
        if self.stats.branches > self.budget.max_branches:
            raise BudgetExceeded(f"branch budget of {self.budget.max_branches} exceeded")
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"timeout of {self.budget.timeout_ms} ms exceeded")

    def _nonempty_subsets(self) -> list[tuple[str, ...]]:
        # non-empty value sets, smallest first, for the existential search
        if self._subsets is None:
            domain = self.structure.domain
            masks = sorted(range(1, 2 ** len(domain)),
                           key=lambda m: (bin(m).count("1"), m))
            self._subsets = [tuple(domain[i] for i in range(len(domain)) if m >> i & 1)
                             for m in masks]
        return self._subsets

    def _ext_team(self, variables: tuple[str, ...], rows) -> Team:
        return Team(variables, frozenset(rows))

    def _singleton(self, team: Team, row: Row) -> Team:
        return Team(team.variables, frozenset({row}))

    # -- dispatch

    def _free_vars(self, phi: Formula) -> frozenset[str]:
        cached = self._fv.get(id(phi))
        if cached is None:
            cached = free_variables(phi)
            self._fv[id(phi)] = cached
            self._keepalive[id(phi)] = phi
        return cached

    def _eval(self, team: Team, phi: Formula) -> bool:
        self.stats.evals += 1
        if len(team.rows) > self.budget.max_rows:
            raise BudgetExceeded(f"team of {len(team.rows)} rows exceeds the "
                                 f"row budget of {self.budget.max_rows}")
        if self._deadline is not None and self.stats.evals % 256 == 0:
            if time.monotonic() > self._deadline:
                raise BudgetExceeded(f"timeout of {self.budget.timeout_ms} ms exceeded")
        memoize = self.strategy.memoize
        if memoize:
            # canonical team for the cache: lax semantics is local, so the
            # restriction to the free variables carries the whole truth
            fv = self._free_vars(phi)
            if len(fv) < len(team.variables):
                kept = tuple(i for i, v in enumerate(team.variables) if v in fv)
                variables = tuple(team.variables[i] for i in kept)
                team = Team(variables,
                            frozenset(tuple(row[i] for i in kept)
                                      for row in team.rows))
            key = (id(phi), team)
            cached = self._memo.get(key)
            if cached is not None:
                self.stats.cache_hits += 1
                return cached
        value = self._eval_node(team, phi)
        if memoize and len(self._memo) < _MEMO_CAP:
            self._memo[key] = value
            self._keepalive[id(phi)] = phi
        return value

    def _eval_node(self, team: Team, phi: Formula) -> bool:
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Bot):
            return not team.rows
        if isinstance(phi, NE):
            return bool(team.rows)
        if isinstance(phi, (RelAtom, NegRelAtom, Equal, NotEqual)):
            return self._eval_literal(team, phi)
        if isinstance(phi, Dep):
            return self._eval_dep(team, phi)
        if isinstance(phi, Anon):
            return self._eval_anon(team, phi)
        if isinstance(phi, Incl):
            return self._eval_incl(team, phi)
        if isinstance(phi, Excl):
            return self._eval_excl(team, phi)
        if isinstance(phi, Ind):
            return self._eval_ind(team, phi)
        if isinstance(phi, And):
            return self._eval(team, phi.left) and self._eval(team, phi.right)
        if isinstance(phi, Or):
            return self._eval_or(team, phi)
        if isinstance(phi, Hook):
            return self._eval_hook(team, phi)
        if isinstance(phi, BoolOr):
            return self._eval(team, phi.left) or self._eval(team, phi.right)
        if isinstance(phi, BoolNeg):
            return not self._eval(team, phi.body)
        if isinstance(phi, SomeRow):
            return any(self._eval(self._singleton(team, row), phi.body)
                       for row in team.sorted_rows())
        if isinstance(phi, Flat):
            return all(self._eval(self._singleton(team, row), phi.body)
                       for row in team.sorted_rows())
        if isinstance(phi, Exists):
            return self._eval_exists(team, phi)
        if isinstance(phi, Forall):
            return self._eval(duplicate(team, phi.var, self.structure), phi.body)
        raise EvalError(f"unsupported formula node: {type(phi).__name__}")

    # -- atoms

    def _columns(self, team: Team, terms: tuple[Term, ...]) -> list:
        """Per-term accessors: a column index for a variable, a constant
        value wrapped in a one-element tuple otherwise."""
        structure = self.structure
        out = []
        for t in terms:
            if isinstance(t, Var):
                out.append(team.index(t.name))
            else:
                out.append((_term_value(t, {}, structure),))
        return out

    @staticmethod
    def _pick(row: Row, columns: list) -> Row:
        return tuple(row[c] if isinstance(c, int) else c[0] for c in columns)

    def _values(self, team: Team, terms: tuple[Term, ...]) -> dict[Row, Row]:
        columns = self._columns(team, terms)
        pick = self._pick
        return {row: pick(row, columns) for row in team.rows}

    def _eval_literal(self, team: Team, phi: Formula) -> bool:
        if isinstance(phi, (Equal, NotEqual)):
            a, b = self._columns(team, (phi.left, phi.right))
            ga = (lambda r: r[a]) if isinstance(a, int) else (lambda r: a[0])
            gb = (lambda r: r[b]) if isinstance(b, int) else (lambda r: b[0])
            if isinstance(phi, Equal):
                return all(ga(row) == gb(row) for row in team.rows)
            return all(ga(row) != gb(row) for row in team.rows)
        tuples = _rel_tuples(self.structure, phi.name, len(phi.terms))
        columns = self._columns(team, phi.terms)
        pick = self._pick
        if isinstance(phi, RelAtom):
            return all(pick(row, columns) in tuples for row in team.rows)
        return all(pick(row, columns) not in tuples for row in team.rows)

    def _rows_satisfying_guard(self, team: Team, guard: Formula) -> frozenset[Row]:
        """Rows whose singleton assignment classically satisfies a
        first-order guard."""
        if isinstance(guard, Top):
            return team.rows
        if isinstance(guard, Bot):
            return frozenset()
        if isinstance(guard, (Equal, NotEqual)):
            a, b = self._columns(team, (guard.left, guard.right))
            ga = (lambda r: r[a]) if isinstance(a, int) else (lambda r: a[0])
            gb = (lambda r: r[b]) if isinstance(b, int) else (lambda r: b[0])
            if isinstance(guard, Equal):
                return frozenset(r for r in team.rows if ga(r) == gb(r))
            return frozenset(r for r in team.rows if ga(r) != gb(r))
        if isinstance(guard, (RelAtom, NegRelAtom)):
            tuples = _rel_tuples(self.structure, guard.name, len(guard.terms))
            columns = self._columns(team, guard.terms)
            pick = self._pick
            if isinstance(guard, RelAtom):
                return frozenset(r for r in team.rows if pick(r, columns) in tuples)
            return frozenset(r for r in team.rows if pick(r, columns) not in tuples)
        structure = self.structure
        return frozenset(row for row in team.rows
                         if eval_tarski(structure, dict(zip(team.variables, row)), guard))

    def _eval_dep(self, team: Team, phi: Dep) -> bool:
        keys = self._values(team, phi.prefix)
        targets = self._values(team, (phi.target,))
        seen: dict[Row, Row] = {}
        for row in team.rows:
            key, value = keys[row], targets[row]
            if seen.setdefault(key, value) != value:
                return False
        return True

    def _eval_anon(self, team: Team, phi: Anon) -> bool:
        keys = self._values(team, phi.prefix)
        targets = self._values(team, (phi.target,))
        for row in team.rows:
            if not any(keys[other] == keys[row] and targets[other] != targets[row]
                       for other in team.rows):
                return False
        return True

    def _eval_incl(self, team: Team, phi: Incl) -> bool:
        left = self._values(team, phi.left)
        right = self._values(team, phi.right)
        available = set(right.values())
        return all(value in available for value in left.values())

    def _eval_excl(self, team: Team, phi: Excl) -> bool:
        left = self._values(team, phi.left)
        right = self._values(team, phi.right)
        return not (set(left.values()) & set(right.values()))

    def _eval_ind(self, team: Team, phi: Ind) -> bool:
        cond = self._values(team, phi.condition)
        left = self._values(team, phi.condition + phi.left)
        right = self._values(team, phi.condition + phi.right)
        rows = list(team.rows)
        combos = {(left[r], right[r]) for r in rows}
        for s in rows:
            for s2 in rows:
                if cond[s] != cond[s2]:
                    continue
                if (left[s], right[s2]) not in combos:
                    return False
        return True

    # -- connectives with search

    def _eval_or(self, team: Team, phi: Or) -> bool:
        left, right = phi.left, phi.right
        rows = team.sorted_rows()
        if not rows:
            return self._eval(team, left) and self._eval(team, right)
        if self.strategy.flat_aware_disjunction:
            lflat, rflat = syntactically_flat(left), syntactically_flat(right)
            if lflat and rflat:
                return all(self._eval(self._singleton(team, row), left)
                           or self._eval(self._singleton(team, row), right)
                           for row in rows)
            if lflat or rflat:
                flat_side, other = (left, right) if lflat else (right, left)
                covered = [row for row in rows
                           if self._eval(self._singleton(team, row), flat_side)]
                forced = frozenset(rows) - frozenset(covered)
                for k in range(2 ** len(covered)):
                    self._branch()
                    extra = {covered[i] for i in range(len(covered)) if k >> i & 1}
                    if self._eval(team.with_rows(forced | extra), other):
                        return True
                return False
        n = len(rows)
        for ymask in range(2 ** n):
            self._branch()
            y_rows = [rows[i] for i in range(n) if ymask >> i & 1]
            if not self._eval(team.with_rows(y_rows), left):
                continue
            complement = frozenset(rows[i] for i in range(n) if not ymask >> i & 1)
            for wmask in range(2 ** len(y_rows)):
                self._branch()
                extra = {y_rows[i] for i in range(len(y_rows)) if wmask >> i & 1}
                if self._eval(team.with_rows(complement | extra), right):
                    return True
        return False

    def _eval_hook(self, team: Team, phi: Hook) -> bool:
        if self.strategy.hook_forced_split:
            satisfying = self._rows_satisfying_guard(team, phi.guard)
            return self._eval(team.with_rows(satisfying), phi.body)
        desugared = self._desugared.get(id(phi))
        if desugared is None:
            desugared = Or(negate_fo(phi.guard), And(phi.guard, phi.body))
            self._desugared[id(phi)] = desugared
            self._keepalive[id(phi)] = phi
        return self._eval(team, desugared)

    def _eval_exists(self, team: Team, phi: Exists) -> bool:
        var, body = phi.var, phi.body
        structure = self.structure
        variables = team.variables if var in team.variables else team.variables + (var,)
        idx = variables.index(var)
        rows = team.sorted_rows()
        if self.strategy.flat_body_existential and (
                isinstance(body, Flat) or is_first_order(body)):
            inner = body.body if isinstance(body, Flat) else body
            for row in rows:
                hit = False
                for m in structure.domain:
                    self._branch()
                    candidate = Team(variables, frozenset({set_value(row, idx, m)}))
                    if self._eval(candidate, inner):
                        hit = True
                        break
                if not hit:
                    return False
            return True
        if not rows:
            return self._eval(Team(variables, frozenset()), body)
        subsets = self._nonempty_subsets()

        def search(i: int, chosen: frozenset[Row]) -> bool:
            if i == len(rows):
                self._branch()
                return self._eval(Team(variables, chosen), body)
            row = rows[i]
            for values in subsets:
                extended = chosen | {set_value(row, idx, m) for m in values}
                if search(i + 1, extended):
                    return True
            return False

        return search(0, frozenset())


def evaluate(structure: Structure, team: Team, phi: Formula,
             strategy: Strategy = NAIVE,
             budget: EvalBudget = DEFAULT_BUDGET) -> bool:
    """Truth of phi on the team under lax team semantics."""
    return Evaluator(structure, strategy, budget).run(team, phi)


def evaluate_sentence(structure: Structure, phi: Formula,
                      strategy: Strategy = NAIVE,
                      budget: EvalBudget = DEFAULT_BUDGET) -> bool:
    """Truth of a sentence, i.e. truth on the one-row team of the empty
    assignment."""
    if free_variables(phi):
        raise EvalError(f"not a sentence; free variables {sorted(free_variables(phi))}")
    return Evaluator(structure, strategy, budget).run(Team.unit(), phi)
