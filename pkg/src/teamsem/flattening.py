"""Syntactic flattening, F-rewrites, axiom verification and the
singleton-guess translation.

`flatten` maps a formula to a flat (team-insensitive) first-order proxy:
team atoms become TOP (exclusion optionally becomes a tuple inequality),
literals stay, and the map distributes over the connectives and
quantifiers.  `simplify_flat` rewrites occurrences of the F operator by
the exact pointwise equivalences (F over a dependence atom is TOP, over
an anonymity atom BOT, over inclusion the tuple equality, over exclusion
the tuple inequality, over an independence atom TOP, over a literal the
literal itself, and F distributes over conjunction and is idempotent);
no rewrite is applied under disjunction or quantifiers where only
one-directional entailments hold.

`verify_flattening_axioms` checks a candidate flattening against the two
semantic axioms on an enumerated universe: satisfaction must entail the
candidate, and the candidate must be flat.  The distribution axiom is
structural and checked against `flatten` itself.
"""

from __future__ import annotations

from functools import reduce

from .analysis import Universe, is_flat
from .evaluator import Evaluator, eval_tarski, evaluate
from .formulas import (And, Anon, Bot, BoolNeg, BoolOr, Dep, Equal, Excl,
                       Exists, Flat, Forall, Formula, Hook, Incl, Ind, NE,
                       NegRelAtom, NotEqual, Or, RelAtom, SomeRow, Term, Top,
                       Var, free_variables, is_first_order, is_literal,
                       render, substitute_rel_atoms)
from .report import COUNTEREXAMPLE, HOLDS, PropertyReport, Witness
from .structures import Structure
from .teams import Team, project_relation, team_text

__all__ = ["FlatteningError", "EXCLUSION_TOP", "EXCLUSION_NEQ", "flatten",
           "simplify_flat", "tuple_equality", "tuple_inequality",
           "verify_flattening_axioms", "translate_singleton_guess",
           "check_translation_biconditional"]

EXCLUSION_TOP = "top"
EXCLUSION_NEQ = "neq"


class FlatteningError(ValueError):
    """Flattening is undefined for Boolean operators and `some`."""


def tuple_equality(left: tuple[Term, ...], right: tuple[Term, ...]) -> Formula:
    parts = [Equal(a, b) for a, b in zip(left, right)]
    return reduce(And, parts)


def tuple_inequality(left: tuple[Term, ...], right: tuple[Term, ...]) -> Formula:
    parts = [NotEqual(a, b) for a, b in zip(left, right)]
    return reduce(Or, parts)


def flatten(phi: Formula, exclusion_mode: str = EXCLUSION_TOP) -> Formula:
    """The flat proxy of phi; distributes over connectives/quantifiers."""
    if exclusion_mode not in (EXCLUSION_TOP, EXCLUSION_NEQ):
        raise ValueError(f"unknown exclusion mode {exclusion_mode!r}")
    if is_literal(phi) or isinstance(phi, NE):
        return phi
    if isinstance(phi, (Dep, Anon, Incl, Ind)):
        return Top()
    if isinstance(phi, Excl):
        if exclusion_mode == EXCLUSION_NEQ:
            return tuple_inequality(phi.left, phi.right)
        return Top()
    if isinstance(phi, And):
        return And(flatten(phi.left, exclusion_mode), flatten(phi.right, exclusion_mode))
    if isinstance(phi, Or):
        return Or(flatten(phi.left, exclusion_mode), flatten(phi.right, exclusion_mode))
    if isinstance(phi, Hook):
        return Hook(phi.guard, flatten(phi.body, exclusion_mode))
    if isinstance(phi, Exists):
        return Exists(phi.var, flatten(phi.body, exclusion_mode))
    if isinstance(phi, Forall):
        return Forall(phi.var, flatten(phi.body, exclusion_mode))
    if isinstance(phi, Flat):
        # F psi is already flat; its flattening coincides with psi's
        return flatten(phi.body, exclusion_mode)
    raise FlatteningError(
        f"flattening undefined for {type(phi).__name__} in {render(phi)}")


def simplify_flat(phi: Formula) -> Formula:
    """Bottom-up application of the exact F-rewrites until fixpoint."""
    if isinstance(phi, And):
        phi = And(simplify_flat(phi.left), simplify_flat(phi.right))
    elif isinstance(phi, Or):
        phi = Or(simplify_flat(phi.left), simplify_flat(phi.right))
    elif isinstance(phi, BoolOr):
        phi = BoolOr(simplify_flat(phi.left), simplify_flat(phi.right))
    elif isinstance(phi, Hook):
        phi = Hook(phi.guard, simplify_flat(phi.body))
    elif isinstance(phi, BoolNeg):
        phi = BoolNeg(simplify_flat(phi.body))
    elif isinstance(phi, SomeRow):
        phi = SomeRow(simplify_flat(phi.body))
    elif isinstance(phi, Exists):
        phi = Exists(phi.var, simplify_flat(phi.body))
    elif isinstance(phi, Forall):
        phi = Forall(phi.var, simplify_flat(phi.body))
    elif isinstance(phi, Flat):
        phi = Flat(simplify_flat(phi.body))
    if isinstance(phi, Flat):
        body = phi.body
        if is_literal(body):
            return body
        if isinstance(body, (Dep, Ind)):
            return Top()
        if isinstance(body, Anon):
            return Bot()
        if isinstance(body, Incl):
            return tuple_equality(body.left, body.right)
        if isinstance(body, Excl):
            return tuple_inequality(body.left, body.right)
        if isinstance(body, Flat):
            return body
        if isinstance(body, And):
            return And(simplify_flat(Flat(body.left)),
                       simplify_flat(Flat(body.right)))
    return phi


def _distributes_structurally(phi: Formula, exclusion_mode: str) -> bool:
    """flatten commutes with every composite constructor of phi."""
    flat = lambda f: flatten(f, exclusion_mode)
    if isinstance(phi, (And, Or)):
        cls = type(phi)
        return (flat(phi) == cls(flat(phi.left), flat(phi.right))
                and _distributes_structurally(phi.left, exclusion_mode)
                and _distributes_structurally(phi.right, exclusion_mode))
    if isinstance(phi, Hook):
        return (flat(phi) == Hook(phi.guard, flat(phi.body))
                and _distributes_structurally(phi.body, exclusion_mode))
    if isinstance(phi, (Exists, Forall)):
        cls = type(phi)
        return (flat(phi) == cls(phi.var, flat(phi.body))
                and _distributes_structurally(phi.body, exclusion_mode))
    return True


def verify_flattening_axioms(phi: Formula, candidate: Formula,
                             universe: Universe,
                             exclusion_mode: str = EXCLUSION_TOP) -> PropertyReport:
    """Check the flattening axioms for a candidate on the universe.

    Axiom 1 (entailment): every satisfying (structure, team) pair of phi
    satisfies the candidate.  Axiom 2 (flatness): the candidate is flat
    on the universe.  Axiom 3 (distribution) is structural, relative to
    `flatten`.
    """
    if not free_variables(candidate) <= free_variables(phi):
        raise ValueError("candidate has free variables outside those of the formula")
    name = "flattening-axioms"
    for structure in universe.structures:
        ev = Evaluator(structure, universe.strategy, universe.budget)
        for team in universe.teams(structure):
            if ev.run(team, phi) and not ev.run(team, candidate):
                return PropertyReport(
                    name, COUNTEREXAMPLE, universe.describe(),
                    f"entailment axiom fails: {render(phi)} holds but "
                    f"{render(candidate)} does not on {team_text(team)} "
                    f"over {structure.describe()}",
                    Witness(structure=structure, team=team, formula=candidate,
                            note="entailment axiom"))
    flat_report = is_flat(candidate, universe)
    if not flat_report.holds():
        return PropertyReport(name, COUNTEREXAMPLE, universe.describe(),
                              f"flatness axiom fails: {flat_report.details}",
                              flat_report.witness)
    if not _distributes_structurally(phi, exclusion_mode):
        return PropertyReport(name, COUNTEREXAMPLE, universe.describe(),
                              "distribution axiom fails structurally")
    return PropertyReport(name, HOLDS, universe.describe(),
                          "entailment, flatness and distribution verified")


# ---------------------------------------------------------------------------
# the translation used for the F case of the inclusion-logic encoding

def translate_singleton_guess(psi_star: Formula, xvars: tuple[str, ...],
                              source_rel: str, target_rel: str,
                              fresh_vars: tuple[str, ...]) -> Formula:
    """Build the first-order formula deciding F pointwise via a relation.

    Given psi_star (first-order, possibly mentioning `source_rel`, a
    relation standing for the one-row guess), returns::

        A y1. ... A yk. ( !target_rel(y...) | theta )

    where theta replaces every source_rel(t...) by the conjunction of
    y_i = t_i.  The fresh variables must avoid psi_star's free variables.
    """
    if not is_first_order(psi_star):
        raise ValueError("translation body must be first-order")
    if len(fresh_vars) != len(xvars):
        raise ValueError(f"need {len(xvars)} fresh variables, got {len(fresh_vars)}")
    clash = set(fresh_vars) & free_variables(psi_star)
    if clash:
        raise ValueError(f"fresh variables {sorted(clash)} are captured")
    ys = tuple(Var(v) for v in fresh_vars)

    def build(terms: tuple[Term, ...]) -> Formula:
        if len(terms) != len(ys):
            raise ValueError(f"relation {source_rel!r} used with arity "
                             f"{len(terms)}, expected {len(ys)}")
        return tuple_equality(ys, terms)

    theta = substitute_rel_atoms(psi_star, source_rel, build)
    body = Or(NegRelAtom(target_rel, ys), theta)
    for v in reversed(fresh_vars):
        body = Forall(v, body)
    return body


def _fresh_relation_name(structure: Structure) -> str:
    name = "R"
    k = 0
    while name in structure.relations:
        name = f"R{k}"
        k += 1
    return name


def _fresh_variables(count: int, taken: set[str]) -> tuple[str, ...]:
    out = []
    k = 0
    while len(out) < count:
        v = f"y{k}"
        if v not in taken:
            out.append(v)
        k += 1
    return tuple(out)


def check_translation_biconditional(structure: Structure, team: Team,
                                    psi: Formula, psi_star: Formula,
                                    xvars: tuple[str, ...],
                                    source_rel: str = "S",
                                    strategy=None, budget=None) -> PropertyReport:
    """Compare F psi on the team with the translated first-order check.

    The team's projection to xvars is materialized as a fresh relation R
    and the translation is evaluated classically at every row; the report
    says whether that matches the team-level truth of F psi.
    """
    from .evaluator import DEFAULT_BUDGET, OPTIMIZED
    strategy = OPTIMIZED if strategy is None else strategy
    budget = DEFAULT_BUDGET if budget is None else budget
    target_rel = _fresh_relation_name(structure)
    taken = set(free_variables(psi_star)) | set(xvars) | set(team.variables)
    fresh = _fresh_variables(len(xvars), taken)
    translated = translate_singleton_guess(psi_star, xvars, source_rel,
                                           target_rel, fresh)
    content = project_relation(team, xvars)
    extended = structure.with_relation(target_rel, len(xvars), content)
    lhs = evaluate(structure, team, Flat(psi), strategy, budget)
    rhs = all(eval_tarski(extended, dict(zip(team.variables, row)), translated)
              for row in team.sorted_rows())
    name = "translation-biconditional"
    scope = f"{structure.describe()}, team {team_text(team)}"
    if lhs == rhs:
        return PropertyReport(name, HOLDS, scope,
                              f"both sides {'true' if lhs else 'false'}")
    return PropertyReport(
        name, COUNTEREXAMPLE, scope,
        f"team-level F gives {lhs}, translated pointwise check gives {rhs} "
        f"for {render(psi)}",
        Witness(structure=structure, team=team, formula=psi))
