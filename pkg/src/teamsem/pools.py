"""Seeded random formula pools and naive-cost estimation.

Pools drive the exhaustive property checks: a pool spec fixes which
atoms, connectives and quantifiers may appear, how deep the tree may
grow, and how expensive the formula is allowed to be for the naive
evaluator.  Generation is deterministic for a fixed seed.

The cost estimate mirrors the naive strategy's worst case (3^k covers
for disjunction, (2^m - 1)^k choice sets for the existential) and is
used to pick, per formula, the largest team size that keeps exhaustive
checks affordable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .formulas import (And, Anon, Bot, BoolNeg, BoolOr, Dep, Equal, Excl,
                       Exists, Flat, Forall, Formula, Hook, Incl, Ind, NE,
                       NegRelAtom, NotEqual, Or, RelAtom, SomeRow, Top, Var,
                       render)

TEAM_ATOM_KINDS = ("dep", "const", "anon", "nonconst", "incl", "excl", "ind")


@dataclass(frozen=True)
class PoolSpec:
    variables: tuple[str, ...] = ("x", "y")
    relations: tuple[tuple[str, int], ...] = ()
    atoms: tuple[str, ...] = TEAM_ATOM_KINDS
    allow_ne: bool = False
    allow_bool: bool = False          # neg, vv, some
    allow_flat: bool = False          # F inside pool formulas
    allow_hook: bool = False
    allow_exists: bool = True
    allow_forall: bool = True
    max_depth: int = 4
    max_quantifiers: int = 1
    max_or: int = 2
    or_under_quantifier: bool = True
    fo_only: bool = False


FO_SPEC = PoolSpec(atoms=(), fo_only=True)


def random_formula(rng: random.Random, spec: PoolSpec) -> Formula:
    budget = {"quants": spec.max_quantifiers, "ors": spec.max_or}
    return _gen(rng, spec, spec.max_depth, budget, False)


def _gen(rng: random.Random, spec: PoolSpec, depth: int,
         budget: dict, under_quant: bool) -> Formula:
    # quantifier and disjunction budgets are totals for the whole formula
    options = ["atom", "atom"]
    if depth > 0:
        options.append("and")
        if budget["ors"] > 0 and (spec.or_under_quantifier or not under_quant):
            options.append("or")
        if budget["quants"] > 0 and spec.allow_exists:
            options.append("exists")
        if budget["quants"] > 0 and spec.allow_forall:
            options.append("forall")
        if spec.allow_hook:
            options.append("hook")
        if spec.allow_flat:
            options.append("flat")
        if spec.allow_bool:
            options.extend(["boolneg", "boolor", "some"])
    choice = rng.choice(options)
    if choice == "atom":
        return _gen_atom(rng, spec)
    if choice == "and":
        return And(_gen(rng, spec, depth - 1, budget, under_quant),
                   _gen(rng, spec, depth - 1, budget, under_quant))
    if choice == "or":
        budget["ors"] -= 1
        return Or(_gen(rng, spec, depth - 1, budget, under_quant),
                  _gen(rng, spec, depth - 1, budget, under_quant))
    if choice == "exists":
        budget["quants"] -= 1
        return Exists(rng.choice(spec.variables + ("u",)),
                      _gen(rng, spec, depth - 1, budget, True))
    if choice == "forall":
        budget["quants"] -= 1
        return Forall(rng.choice(spec.variables + ("u",)),
                      _gen(rng, spec, depth - 1, budget, True))
    if choice == "hook":
        guard = _gen_fo_guard(rng, spec)
        return Hook(guard, _gen(rng, spec, depth - 1, budget, under_quant))
    if choice == "flat":
        return Flat(_gen(rng, spec, depth - 1, budget, under_quant))
    if choice == "boolneg":
        return BoolNeg(_gen(rng, spec, depth - 1, budget, under_quant))
    if choice == "some":
        return SomeRow(_gen(rng, spec, depth - 1, budget, under_quant))
    return BoolOr(_gen(rng, spec, depth - 1, budget, under_quant),
                  _gen(rng, spec, depth - 1, budget, under_quant))


def _var(rng: random.Random, spec: PoolSpec) -> Var:
    return Var(rng.choice(spec.variables))


def _gen_literal(rng: random.Random, spec: PoolSpec) -> Formula:
    kinds = ["eq", "neq", "top", "bot"]
    if spec.relations:
        kinds.extend(["rel", "rel", "negrel"])
    kind = rng.choice(kinds)
    if kind == "eq":
        return Equal(_var(rng, spec), _var(rng, spec))
    if kind == "neq":
        return NotEqual(_var(rng, spec), _var(rng, spec))
    if kind == "top":
        return Top()
    if kind == "bot":
        return Bot()
    name, arity = rng.choice(spec.relations)
    terms = tuple(_var(rng, spec) for _ in range(arity))
    return RelAtom(name, terms) if kind == "rel" else NegRelAtom(name, terms)


def _gen_atom(rng: random.Random, spec: PoolSpec) -> Formula:
    choices = ["literal", "literal"]
    if not spec.fo_only:
        choices.extend(spec.atoms)
        if spec.allow_ne:
            choices.append("ne")
    kind = rng.choice(choices)
    if kind == "literal":
        return _gen_literal(rng, spec)
    if kind == "ne":
        return NE()
    if kind == "dep":
        return Dep((_var(rng, spec),), _var(rng, spec))
    if kind == "const":
        return Dep((), _var(rng, spec))
    if kind == "anon":
        return Anon((_var(rng, spec),), _var(rng, spec))
    if kind == "nonconst":
        return Anon((), _var(rng, spec))
    if kind == "incl":
        return Incl((_var(rng, spec),), (_var(rng, spec),))
    if kind == "excl":
        return Excl((_var(rng, spec),), (_var(rng, spec),))
    condition = () if rng.random() < 0.5 else (_var(rng, spec),)
    return Ind(condition, (_var(rng, spec),), (_var(rng, spec),))


def _gen_fo_guard(rng: random.Random, spec: PoolSpec) -> Formula:
    guard = _gen_literal(rng, spec)
    if rng.random() < 0.3:
        guard = And(guard, _gen_literal(rng, spec))
    return guard


def generate_pool(spec: PoolSpec, count: int, seed: int,
                  keep=None, max_attempts_factor: int = 80) -> list[Formula]:
    """Deterministic pool of `count` distinct formulas matching the spec.

    `keep` is an optional predicate applied before a formula is accepted
    (used to reject formulas too expensive for the intended universe).
    """
    rng = random.Random(seed)
    out: list[Formula] = []
    seen: set[Formula] = set()
    attempts = 0
    limit = count * max_attempts_factor
    while len(out) < count and attempts < limit:
        attempts += 1
        phi = random_formula(rng, spec)
        if phi in seen:
            continue
        if keep is not None and not keep(phi):
            continue
        seen.add(phi)
        out.append(phi)
    if len(out) < count:
        raise RuntimeError(f"pool generation stalled at {len(out)}/{count} "
                           f"formulas for spec {spec}")
    return out


# ---------------------------------------------------------------------------
# naive cost model

_CAP = 1e30


def estimate_ops(phi: Formula, rows: int, domain: int) -> float:
    """Rough operation count for one naive evaluation of phi on a team
    of `rows` rows over a domain of `domain` elements."""
    k, m = rows, domain
    if isinstance(phi, (Top, Bot, NE)):
        return 1.0
    if isinstance(phi, (RelAtom, NegRelAtom, Equal, NotEqual, Dep, Incl, Excl)):
        return float(k + 2)
    if isinstance(phi, (Anon, Ind)):
        return float(k * k + 2)
    if isinstance(phi, And):
        return estimate_ops(phi.left, k, m) + estimate_ops(phi.right, k, m) + 1
    if isinstance(phi, Or):
        covers = min(3.0 ** k, _CAP)
        inner = estimate_ops(phi.left, k, m) + estimate_ops(phi.right, k, m)
        return min(covers * (inner + 2), _CAP)
    if isinstance(phi, Hook):
        inner = estimate_ops(phi.body, k, m) + k
        return min((3.0 ** k) * (inner + 2), _CAP)
    if isinstance(phi, BoolOr):
        return estimate_ops(phi.left, k, m) + estimate_ops(phi.right, k, m) + 1
    if isinstance(phi, BoolNeg):
        return estimate_ops(phi.body, k, m) + 1
    if isinstance(phi, (SomeRow, Flat)):
        return k * (estimate_ops(phi.body, 1, m) + 1) + 1
    if isinstance(phi, Exists):
        choices = min((2.0 ** m - 1) ** k, _CAP)
        return min(choices * (estimate_ops(phi.body, k * m, m) + k + 2), _CAP)
    if isinstance(phi, Forall):
        return estimate_ops(phi.body, k * m, m) + k * m + 1
    raise TypeError(f"not a formula: {phi!r}")


def describe_pool(formulas: Iterable[Formula], limit: int = 5) -> str:
    sample = [render(f) for f in list(formulas)[:limit]]
    return "; ".join(sample)
