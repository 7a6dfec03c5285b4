"""The reproduction-experiment suite behind `teamsem experiments`.

Every experiment checks one exactly-stated claim about the flattening
operator, the syntactic flattening, or the evaluator, on an explicitly
enumerated universe, and reports PASS, FAIL or INAPPLICABLE together
with a witness when something fails.  Experiments are deterministic:
pools and structure samples are seeded, and the machine-readable records
contain no timestamps.

A FAIL is not necessarily a bug in this package: the suite measures the
claims, and where a claim is refuted by exhaustive computation the
verdict records the counterexample (see `magma-closed-teams`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .analysis import (Universe, enumerate_structures, equivalent,
                       feasible_team_cap, flatness_profile, is_downwards_flat,
                       is_n_coherent, is_upwards_flat, magma_lemma_check,
                       standard_universe, truth_table)
from .evaluator import (DEFAULT_BUDGET, NAIVE, OPTIMIZED, EvalBudget,
                        Evaluator, Strategy, evaluate_sentence)
from .flattening import (EXCLUSION_NEQ, EXCLUSION_TOP,
                         check_translation_biconditional, flatten,
                         simplify_flat, tuple_inequality,
                         verify_flattening_axioms)
from .formulas import (And, Anon, Bot, Dep, Equal, Excl, Exists, Flat, Forall,
                       Incl, Ind, NE, NotEqual, Or, RelAtom, Top, Var,
                       desugar_hook, parse, render)
from .pools import PoolSpec, estimate_ops, generate_pool
from .report import INAPPLICABLE
from .structures import (Relation, Structure, automorphisms, gen_single_cycle,
                         gen_two_cycles, is_connected)
from .teams import Team, enumerate_teams, team_text

PASS, FAIL = "PASS", "FAIL"

DISCONNECTEDNESS_SENTENCE = "E y. F (E x. (x != y & A z. (E(x,z) => inc(z; x))))"
SEPARATING_SENTENCE = ("E x. F (E y. (y != x & A z. "
                       "(E(y,z) => (z != x & anon(y; z) & anon(z; y)))))")


@dataclass(frozen=True)
class ExperimentOptions:
    exclusion_mode: str = EXCLUSION_TOP
    budget: EvalBudget = DEFAULT_BUDGET
    max_domain: int = 3


@dataclass(frozen=True)
class ExperimentResult:
    experiment: str
    verdict: str  # PASS | FAIL | INAPPLICABLE
    details: str

    def line(self) -> str:
        return f"{self.experiment}\t{self.verdict}\t{self.details}"


def _result(name: str, failures: list[str], checked: str) -> ExperimentResult:
    if failures:
        return ExperimentResult(name, FAIL,
                                f"{len(failures)} violation(s); first: {failures[0]}")
    return ExperimentResult(name, PASS, checked)


def _mixed_universe(options: ExperimentOptions, per_size: int = 4,
                    seed: int = 0, label: str = "") -> Universe:
    structures = enumerate_structures(
        {"P": 1, "E": 2}, tuple(range(1, options.max_domain + 1)),
        per_size_cap=per_size, seed=seed)
    return Universe(tuple(structures), ("x", "y"), budget=options.budget,
                    label=label)


def _capped(universe: Universe, phi, ops_budget: float) -> Universe:
    return universe.with_cap(max(2, feasible_team_cap(phi, universe, ops_budget)))


# ---------------------------------------------------------------------------
# experiments

def atom_flattenings(options: ExperimentOptions) -> ExperimentResult:
    """Team atoms flatten to TOP and TOP satisfies the axioms."""
    universe = standard_universe(budget=options.budget,
                                 max_domain=options.max_domain)
    atoms = ["dep(x; y)", "const(y)", "anon(x; y)", "nonconst(y)",
             "inc(x; y)", "ind(; x; y)", "ind(x; y; y)", "exc(x; y)"]
    failures = []
    for text in atoms:
        phi = parse(text)
        candidate = flatten(phi, options.exclusion_mode)
        report = verify_flattening_axioms(phi, candidate, universe,
                                          options.exclusion_mode)
        if not report.holds():
            failures.append(f"{text}: {report.details}")
    return _result("atom-flattenings", failures,
                   f"{len(atoms)} atoms verified on {universe.describe()}")


def exclusion_flattening_inequality(options: ExperimentOptions) -> ExperimentResult:
    """The tuple inequality is an equally valid exclusion flattening."""
    universe = standard_universe(budget=options.budget,
                                 max_domain=options.max_domain)
    failures = []
    cases = [
        (Excl((Var("x"),), (Var("y"),)), NotEqual(Var("x"), Var("y"))),
        (Excl((Var("x"), Var("y")), (Var("y"), Var("x"))),
         tuple_inequality((Var("x"), Var("y")), (Var("y"), Var("x")))),
    ]
    for phi, candidate in cases:
        report = verify_flattening_axioms(phi, candidate, universe, EXCLUSION_NEQ)
        if not report.holds():
            failures.append(f"{render(phi)}: {report.details}")
        if flatten(phi, EXCLUSION_NEQ) != candidate:
            failures.append(f"{render(phi)}: inequality mode output differs")
    return _result("exclusion-flattening-inequality", failures,
                   f"both exclusion flattenings verified on {universe.describe()}")


def flat_operator_atoms(options: ExperimentOptions) -> ExperimentResult:
    """F on atoms: F dep == TOP, F anon == BOT, F inc == tuple equality,
    F exc == tuple inequality, F ind == TOP, F literal == literal."""
    base = standard_universe(budget=options.budget, max_domain=options.max_domain)
    unary = standard_universe({"P": 1}, budget=options.budget,
                              max_domain=options.max_domain)
    x, y = Var("x"), Var("y")
    cases = [
        (base, Flat(Dep((x,), y)), Top()),
        (base, Flat(Dep((), y)), Top()),
        (base, Flat(Anon((x,), y)), Bot()),
        (base, Flat(Anon((), y)), Bot()),
        (base, Flat(Incl((x,), (y,))), Equal(x, y)),
        (base, Flat(Incl((x, y), (y, x))), And(Equal(x, y), Equal(y, x))),
        (base, Flat(Excl((x,), (y,))), NotEqual(x, y)),
        (base, Flat(Excl((x, y), (y, x))), Or(NotEqual(x, y), NotEqual(y, x))),
        (base, Flat(Ind((), (x,), (y,))), Top()),
        (base, Flat(Ind((x,), (y,), (y,))), Top()),
        (base, Flat(Equal(x, y)), Equal(x, y)),
        (base, Flat(NotEqual(x, y)), NotEqual(x, y)),
        (unary, Flat(parse("P(x)")), parse("P(x)")),
        (unary, Flat(parse("!P(x)")), parse("!P(x)")),
    ]
    failures = []
    for universe, lhs, rhs in cases:
        report = equivalent(lhs, rhs, universe)
        if not report.holds():
            failures.append(f"{render(lhs)} vs {render(rhs)}: {report.details}")
        if simplify_flat(lhs) != rhs:
            failures.append(f"simplifier maps {render(lhs)} to "
                            f"{render(simplify_flat(lhs))}, expected {render(rhs)}")
    return _result("flat-op-atoms", failures,
                   f"{len(cases)} equivalences verified semantically and "
                   f"syntactically on {base.describe()}")


_PROPERTY_POOL_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), allow_ne=True, allow_hook=True,
    allow_flat=True, max_depth=4, max_quantifiers=1, max_or=2)


def _property_pool(universe: Universe, count: int, seed: int,
                   spec: PoolSpec = _PROPERTY_POOL_SPEC,
                   ops_budget: float = 250_000.0):
    def keep(phi):
        return feasible_team_cap(phi, universe, ops_budget) >= 2

    return generate_pool(spec, count, seed, keep=keep)


def flat_operator_properties(options: ExperimentOptions) -> ExperimentResult:
    """F phi is flat, F is idempotent, F distributes over conjunction,
    and phi is flat exactly when F phi is equivalent to phi."""
    universe = _mixed_universe(options, per_size=3, seed=1,
                               label="pool universe")
    pool = _property_pool(universe, 200, seed=11)
    failures = []
    for i, phi in enumerate(pool):
        capped = _capped(universe, phi, 250_000.0)
        profile_flat = True
        equiv_flat = True
        for structure in capped.structures:
            ev = Evaluator(structure, capped.strategy, capped.budget)
            teams = list(capped.teams(structure))
            t_phi = {X: ev.run(X, phi) for X in teams}
            t_f = {X: ev.run(X, Flat(phi)) for X in teams}
            t_ff = {X: ev.run(X, Flat(Flat(phi))) for X in teams}
            for X in teams:
                pointwise = all(t_f[sub] for sub in X.singletons())
                if t_f[X] != pointwise:
                    failures.append(f"F {render(phi)} not flat on "
                                    f"{team_text(X)} over {structure.describe()}")
                if t_ff[X] != t_f[X]:
                    failures.append(f"FF vs F differ for {render(phi)} on "
                                    f"{team_text(X)}")
                single_truth = all(t_phi[sub] for sub in X.singletons())
                if t_phi[X] != single_truth:
                    profile_flat = False
                if t_phi[X] != t_f[X]:
                    equiv_flat = False
        if profile_flat != equiv_flat:
            failures.append(f"flatness vs F-equivalence disagree for {render(phi)}")
        if failures:
            break
    # conjunction distribution over consecutive pool pairs
    for a, b in zip(pool[:60], pool[1:61]):
        both = And(a, b)
        capped = _capped(universe, both, 250_000.0)
        report = equivalent(Flat(both), And(Flat(a), Flat(b)), capped)
        if not report.holds():
            failures.append(f"F distribution over & fails: {report.details}")
            break
    return _result("flat-op-properties", failures,
                   f"pool of {len(pool)} formulas (depth <= 4) plus 60 "
                   f"conjunction pairs on {universe.describe()}")


def one_element_anon_remark(options: ExperimentOptions) -> ExperimentResult:
    """On a one-element model the anonymity sentence is false, its
    flattening is true, and F of it is false: the flattening does not
    entail the F form."""
    structure = Structure(("a",))
    phi = parse("A x. E y. anon(x; y)")
    flattened = flatten(phi, options.exclusion_mode)
    results = (
        evaluate_sentence(structure, phi, OPTIMIZED, options.budget),
        evaluate_sentence(structure, flattened, OPTIMIZED, options.budget),
        evaluate_sentence(structure, Flat(phi), OPTIMIZED, options.budget),
    )
    if results == (False, True, False):
        return ExperimentResult(
            "one-element-anon-remark", PASS,
            f"sentence false, flattening {render(flattened)} true, F form false")
    return ExperimentResult(
        "one-element-anon-remark", FAIL,
        f"(sentence, flattening, F) evaluated to {results}, expected "
        f"(False, True, False)")


def _random_symmetric_graph(rng: random.Random) -> Structure:
    n = rng.randint(2, 6)
    domain = tuple(f"v{i}" for i in range(n))
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.45:
                edges.add((domain[i], domain[j]))
                edges.add((domain[j], domain[i]))
    return Structure(domain, {"E": Relation(2, frozenset(edges))})


def disconnectedness_sentence(options: ExperimentOptions) -> ExperimentResult:
    """The unary-inclusion sentence with F holds exactly on disconnected
    graphs; checked on the cycle families and random graphs against a
    breadth-first connectivity oracle."""
    phi = parse(DISCONNECTEDNESS_SENTENCE)
    budget = replace(options.budget, max_branches=max(options.budget.max_branches,
                                                      20_000_000))
    failures = []
    cases = []
    for n in range(3):
        cases.append((f"two-cycles({n})", gen_two_cycles(n)))
        cases.append((f"single-cycle({n})", gen_single_cycle(n)))
    rng = random.Random(2024)
    for k in range(20):
        cases.append((f"random-graph-{k}", _random_symmetric_graph(rng)))
    for label, structure in cases:
        expected = not is_connected(structure)
        got = evaluate_sentence(structure, phi, OPTIMIZED, budget)
        if got != expected:
            failures.append(f"{label}: sentence {got}, oracle says "
                            f"{'disconnected' if expected else 'connected'}")
    return _result("disconnectedness-sentence", failures,
                   f"{len(cases)} graphs agree with the BFS oracle "
                   f"(optimized strategy)")


def separating_sentence(options: ExperimentOptions) -> ExperimentResult:
    """The unary-anonymity sentence with F distinguishes two cycles of
    length 4 from one cycle of length 8."""
    phi = parse(SEPARATING_SENTENCE)
    budget = replace(options.budget, max_branches=max(options.budget.max_branches,
                                                      20_000_000))
    on_pair = evaluate_sentence(gen_two_cycles(1), phi, OPTIMIZED, budget)
    on_single = evaluate_sentence(gen_single_cycle(1), phi, OPTIMIZED, budget)
    if on_pair and not on_single:
        return ExperimentResult("separating-sentence", PASS,
                                "true on two 4-cycles, false on one 8-cycle")
    return ExperimentResult(
        "separating-sentence", FAIL,
        f"two-cycles(1) -> {on_pair} (expected True), "
        f"single-cycle(1) -> {on_single} (expected False)")


_ANON_POOL_SPEC = PoolSpec(
    variables=("x", "y"), relations=(), atoms=("anon", "nonconst"),
    allow_exists=False, allow_forall=True, max_depth=4, max_quantifiers=1,
    max_or=1, or_under_quantifier=False)


def magma_closed_teams(options: ExperimentOptions) -> ExperimentResult:
    """On automorphism-closed teams of the three-element empty-signature
    structure, unary-anonymity formulas would coincide with their
    flattenings.  The suite measures this claim; the 1-ary anonymity
    atom refutes it on the diagonal closed team."""
    structure = Structure(("a", "b", "c"))
    perms = automorphisms(structure)

    def keep(phi):
        return estimate_ops(phi, 9, 3) <= 3_000_000.0

    pool = [parse("anon(x; y)"), parse("nonconst(y)")]
    pool += generate_pool(_ANON_POOL_SPEC, 50, seed=17, keep=keep)
    failures = []
    inapplicable = 0
    for phi in pool:
        report = magma_lemma_check(structure, perms, phi,
                                   exclusion_mode=options.exclusion_mode,
                                   budget=options.budget)
        if report.verdict == INAPPLICABLE:
            inapplicable += 1
        elif not report.holds():
            failures.append(report.details)
    checked = (f"{len(pool)} unary-anonymity formulas on all closed teams of "
               f"|M|=3 under the full symmetric group")
    if failures:
        return ExperimentResult(
            "magma-closed-teams", FAIL,
            f"{len(failures)}/{len(pool)} formulas refute the claim; "
            f"first: {failures[0]}")
    if inapplicable:
        return ExperimentResult("magma-closed-teams", INAPPLICABLE, checked)
    return ExperimentResult("magma-closed-teams", PASS, checked)


_AGREEMENT_POOL_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), allow_ne=True, allow_bool=True,
    allow_hook=True, allow_flat=True, max_depth=4, max_quantifiers=1,
    max_or=2)


def strategy_agreement(options: ExperimentOptions) -> ExperimentResult:
    """The optimized strategy (forced hook splits, flat-body existential,
    flat-aware disjunction, memoization) agrees with the naive clause-by-
    clause strategy everywhere."""
    universe = _mixed_universe(options, per_size=3, seed=2,
                               label="agreement universe")
    pool = _property_pool(universe, 200, seed=29,
                          spec=_AGREEMENT_POOL_SPEC, ops_budget=150_000.0)
    failures = []
    pairs = 0
    for phi in pool:
        capped = _capped(universe, phi, 150_000.0)
        for structure in capped.structures:
            naive = Evaluator(structure, NAIVE, capped.budget)
            optimized = Evaluator(structure, OPTIMIZED, capped.budget)
            for team in capped.teams(structure):
                pairs += 1
                a = naive.run(team, phi)
                b = optimized.run(team, phi)
                if a != b:
                    failures.append(
                        f"{render(phi)}: naive {a}, optimized {b} on "
                        f"{team_text(team)} over {structure.describe()}")
            if failures:
                break
        if failures:
            break
    return _result("strategy-agreement", failures,
                   f"{len(pool)} formulas, {pairs} (structure, team) "
                   f"evaluations compared on {universe.describe()}")


_FO_BODY_SPEC = PoolSpec(
    variables=("x", "y"), relations=(("P", 1), ("E", 2)), atoms=(),
    fo_only=True, max_depth=3, max_quantifiers=1, max_or=2)


def singleton_guess_translation(options: ExperimentOptions) -> ExperimentResult:
    """Evaluating F via the first-order translation that materializes the
    team as a relation agrees with the team-level truth for first-order
    bodies."""
    structures = enumerate_structures({"P": 1, "E": 2},
                                      tuple(range(1, options.max_domain + 1)),
                                      per_size_cap=3, seed=3)
    pool = generate_pool(_FO_BODY_SPEC, 20, seed=41)
    failures = []
    teams_checked = 0
    for phi in pool:
        for structure in structures:
            for team in enumerate_teams(structure, ("x", "y")):
                teams_checked += 1
                report = check_translation_biconditional(
                    structure, team, phi, phi, ("x", "y"),
                    budget=options.budget)
                if not report.holds():
                    failures.append(report.details)
            if failures:
                break
        if failures:
            break
    return _result("singleton-guess-translation", failures,
                   f"{len(pool)} first-order bodies, {teams_checked} teams, "
                   f"{len(structures)} structures")


def flatness_lattice(options: ExperimentOptions) -> ExperimentResult:
    """Implications between the flatness notions: flat implies closure
    both ways and both one-sided flatnesses; downwards closure implies
    downwards flatness; union closure implies upwards flatness; each
    opposite pair implies flatness."""
    universe = _mixed_universe(options, per_size=3, seed=4,
                               label="lattice universe")
    pool = _property_pool(universe, 200, seed=53)
    implications = [
        ("flat", "dc"), ("flat", "uc"), ("flat", "df"), ("flat", "uf"),
        ("dc", "df"), ("uc", "uf"),
    ]
    failures = []
    for phi in pool:
        capped = _capped(universe, phi, 250_000.0)
        profile = flatness_profile(phi, capped)
        for pre, post in implications:
            if profile[pre] and not profile[post]:
                failures.append(f"{render(phi)}: {pre} holds but {post} fails")
        if profile["df"] and profile["uf"] and not profile["flat"]:
            failures.append(f"{render(phi)}: df and uf hold but flat fails")
        if profile["dc"] and profile["uc"] and not profile["flat"]:
            failures.append(f"{render(phi)}: dc and uc hold but flat fails")
        if failures:
            break
    return _result("flatness-lattice", failures,
                   f"{len(pool)} formulas profiled on {universe.describe()}")


def ne_disjunction_distribution(options: ExperimentOptions) -> ExperimentResult:
    """Measured status of F(NE | NE) versus F NE | F NE: the distribution
    law needs the empty team property in general, and NE lacks it, but
    under lax semantics with possibly-empty cover sides both sides come
    out equivalent.  The verdict reports the measured relation and its
    stability across strategies; no particular outcome is asserted."""
    universe = standard_universe(budget=options.budget,
                                 max_domain=options.max_domain,
                                 variables=("x",))
    lhs = Flat(Or(NE(), NE()))
    rhs = Or(Flat(NE()), Flat(NE()))
    verdicts = {}
    for name, strategy in (("naive", NAIVE), ("optimized", OPTIMIZED)):
        equal = True
        lhs_always = True
        for structure in universe.structures:
            a = truth_table(structure, lhs, replace(universe, strategy=strategy))
            b = truth_table(structure, rhs, replace(universe, strategy=strategy))
            if a != b:
                equal = False
            if not all(a.values()):
                lhs_always = False
        verdicts[name] = (equal, lhs_always)
    stable = verdicts["naive"] == verdicts["optimized"]
    equal, lhs_always = verdicts["optimized"]
    measured = ("equivalent" if equal else "NOT equivalent")
    extra = " (both sides true on every team)" if equal and lhs_always else ""
    if stable:
        return ExperimentResult(
            "ne-disjunction-distribution", PASS,
            f"measured: F(NE | NE) and F NE | F NE are {measured}{extra} on "
            f"{universe.describe()}; verdict stable across strategies")
    return ExperimentResult(
        "ne-disjunction-distribution", FAIL,
        f"strategies disagree: naive {verdicts['naive']}, optimized "
        f"{verdicts['optimized']}")


_HOOK_POOL_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), allow_hook=True, allow_flat=True,
    max_depth=3, max_quantifiers=0, max_or=1)


def hook_desugaring(options: ExperimentOptions) -> ExperimentResult:
    """Hooks mean their desugaring, and flattening commutes with it."""
    universe = _mixed_universe(options, per_size=3, seed=5)
    pool = [phi for phi in _property_pool(universe, 60, seed=61,
                                          spec=_HOOK_POOL_SPEC)
            if "=>" in render(phi)]
    failures = []
    for phi in pool:
        capped = _capped(universe, phi, 200_000.0)
        report = equivalent(phi, desugar_hook(phi), capped)
        if not report.holds():
            failures.append(f"desugaring differs: {report.details}")
            break
        lhs = flatten(desugar_hook(phi), options.exclusion_mode)
        rhs = desugar_hook(flatten(phi, options.exclusion_mode))
        report = equivalent(lhs, rhs, capped)
        if not report.holds():
            failures.append(f"flatten/desugar do not commute: {report.details}")
            break
    return _result("hook-desugaring", failures,
                   f"{len(pool)} hook formulas on {universe.describe()}")


_ETP_POOL_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), allow_hook=True, allow_flat=True,
    max_depth=4, max_quantifiers=1, max_or=2)


def or_distribution_empty_team(options: ExperimentOptions) -> ExperimentResult:
    """For formulas satisfied by the empty team, F distributes over
    team disjunction."""
    universe = _mixed_universe(options, per_size=3, seed=6)
    pool = _property_pool(universe, 60, seed=71, spec=_ETP_POOL_SPEC)
    failures = []
    pairs = 0
    for a, b in zip(pool[:-1], pool[1:]):
        combined = Or(a, b)
        capped = _capped(universe, combined, 200_000.0)
        # the pool is NE-free so the empty team property holds; spot-check it
        empty = Team.empty(capped.variables)
        if not all(Evaluator(s, capped.strategy, capped.budget).run(empty, combined)
                   for s in capped.structures):
            failures.append(f"empty team property unexpectedly fails for "
                            f"{render(combined)}")
            break
        pairs += 1
        report = equivalent(Flat(combined), Or(Flat(a), Flat(b)), capped)
        if not report.holds():
            failures.append(report.details)
            break
    return _result("or-distribution-empty-team", failures,
                   f"{pairs} empty-team-friendly disjunctions on "
                   f"{universe.describe()}")


_QF_BODY_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), max_depth=2, max_quantifiers=0, max_or=1)


def quantifier_flattening_entailments(options: ExperimentOptions) -> ExperimentResult:
    """One-directional entailments between F over a quantifier and the
    quantifier over F.

    The side condition admits two readings.  With one-sided flatness of
    the quantified *body* (what the inductive argument actually uses)
    the entailments hold and are asserted here.  With one-sided flatness
    of the whole quantified formula (the literal phrasing) they are
    refutable: F(E x. nonconst(x)) holds on a one-row team over a
    two-element domain while E x. F nonconst(x) fails, although
    E x. nonconst(x) is downwards flat.  The literal reading is measured
    and its counterexample count reported, not asserted."""
    from .analysis import entails

    universe = _mixed_universe(options, per_size=3, seed=7)
    bodies = generate_pool(_QF_BODY_SPEC, 40, seed=83)
    failures = []
    applicable = 0
    literal_counterexamples = 0
    for body in bodies:
        for quantifier in (Exists, Forall):
            phi = quantifier("x", body)
            capped = _capped(universe, phi, 150_000.0)
            swapped = quantifier("x", Flat(body))
            body_df = is_downwards_flat(body, capped).holds()
            body_uf = is_upwards_flat(body, capped).holds()
            if body_df:
                applicable += 1
                report = entails(Flat(phi), swapped, capped)
                if not report.holds():
                    failures.append(f"DF case: {report.details}")
            if body_uf:
                applicable += 1
                report = entails(swapped, Flat(phi), capped)
                if not report.holds():
                    failures.append(f"UF case: {report.details}")
            if not body_df and is_downwards_flat(phi, capped).holds():
                if not entails(Flat(phi), swapped, capped).holds():
                    literal_counterexamples += 1
            if not body_uf and is_upwards_flat(phi, capped).holds():
                if not entails(swapped, Flat(phi), capped).holds():
                    literal_counterexamples += 1
        if failures:
            break
    note = (f"; literal whole-formula reading refuted "
            f"{literal_counterexamples} time(s) (measured, not asserted)"
            if literal_counterexamples else "")
    return _result("quantifier-flattening-entailments", failures,
                   f"{len(bodies)} bodies, {applicable} body-hypothesis "
                   f"entailments verified on {universe.describe()}{note}")


_CLOSURE_POOL_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), allow_hook=True, max_depth=3,
    max_quantifiers=1, max_or=1)


def closure_preservation(options: ExperimentOptions) -> ExperimentResult:
    """F preserves downwards closure, union closure and both one-sided
    flatness properties."""
    universe = _mixed_universe(options, per_size=3, seed=8)
    pool = _property_pool(universe, 60, seed=97, spec=_CLOSURE_POOL_SPEC)
    failures = []
    for phi in pool:
        capped = _capped(universe, phi, 200_000.0)
        before = flatness_profile(phi, capped)
        after = flatness_profile(Flat(phi), capped)
        for prop in ("dc", "uc", "df", "uf"):
            if before[prop] and not after[prop]:
                failures.append(f"{render(phi)}: {prop} lost under F")
        if failures:
            break
    return _result("closure-preservation", failures,
                   f"{len(pool)} formulas on {universe.describe()}")


_EXISTENTIAL_DEP_SPEC = PoolSpec(
    relations=(("P", 1), ("E", 2)), atoms=("dep", "const"),
    allow_forall=False, max_depth=3, max_quantifiers=1, max_or=1)


def existential_dep_flattening(options: ExperimentOptions) -> ExperimentResult:
    """For existential dependence formulas (literals, dependence atoms,
    conjunction, disjunction, existential quantifier), F phi is
    equivalent to the syntactic flattening of phi."""
    universe = _mixed_universe(options, per_size=3, seed=9)
    pool = _property_pool(universe, 60, seed=101, spec=_EXISTENTIAL_DEP_SPEC,
                          ops_budget=150_000.0)
    failures = []
    for phi in pool:
        capped = _capped(universe, phi, 150_000.0)
        report = equivalent(Flat(phi), flatten(phi, options.exclusion_mode),
                            capped)
        if not report.holds():
            failures.append(report.details)
            break
    return _result("existential-dep-flattening", failures,
                   f"{len(pool)} existential dependence formulas on "
                   f"{universe.describe()}")


def empty_team_property(options: ExperimentOptions) -> ExperimentResult:
    """Formulas without NE and without Boolean operators hold on the
    empty team."""
    universe = _mixed_universe(options, per_size=4, seed=10)
    pool = generate_pool(_ETP_POOL_SPEC, 120, seed=103)
    failures = []
    for phi in pool:
        empty = Team.empty(universe.variables)
        for structure in universe.structures:
            if not Evaluator(structure, OPTIMIZED, options.budget).run(empty, phi):
                failures.append(f"{render(phi)} fails on the empty team over "
                                f"{structure.describe()}")
                break
        if failures:
            break
    return _result("empty-team-property", failures,
                   f"{len(pool)} NE-free formulas on {universe.describe()}")


def fo_flatness(options: ExperimentOptions) -> ExperimentResult:
    """Every first-order formula is flat."""
    universe = _mixed_universe(options, per_size=3, seed=12)
    pool = _property_pool(universe, 50, seed=107, spec=_FO_BODY_SPEC,
                          ops_budget=150_000.0)
    failures = []
    for phi in pool:
        capped = _capped(universe, phi, 150_000.0)
        profile = flatness_profile(phi, capped)
        if not profile["flat"]:
            failures.append(f"{render(phi)} not flat")
            break
    return _result("fo-flatness", failures,
                   f"{len(pool)} first-order formulas on {universe.describe()}")


def hook_forced_split(options: ExperimentOptions) -> ExperimentResult:
    """Forcing the hook split (rows satisfying the guard versus the rest)
    equals naive evaluation of the desugared formula."""
    universe = _mixed_universe(options, per_size=3, seed=13)
    pool = [phi for phi in _property_pool(universe, 40, seed=109,
                                          spec=_HOOK_POOL_SPEC,
                                          ops_budget=150_000.0)
            if "=>" in render(phi)]
    split_only = Strategy(hook_forced_split=True)
    failures = []
    compared = 0
    for phi in pool:
        capped = _capped(universe, phi, 150_000.0)
        desugared = desugar_hook(phi)
        for structure in capped.structures:
            forced = Evaluator(structure, split_only, capped.budget)
            naive = Evaluator(structure, NAIVE, capped.budget)
            for team in capped.teams(structure):
                compared += 1
                if forced.run(team, phi) != naive.run(team, desugared):
                    failures.append(f"{render(phi)} on {team_text(team)} over "
                                    f"{structure.describe()}")
            if failures:
                break
        if failures:
            break
    return _result("hook-forced-split", failures,
                   f"{len(pool)} hook formulas, {compared} comparisons")


def coherence_examples(options: ExperimentOptions) -> ExperimentResult:
    """Dependence atoms are 2-coherent, flat formulas are 1-coherent, and
    a disjunction of two dependence atoms already fails 2-coherence."""
    universe = standard_universe(budget=options.budget,
                                 max_domain=options.max_domain)
    failures = []
    if not is_n_coherent(parse("dep(x; y)"), 2, universe).holds():
        failures.append("dep(x; y) is not 2-coherent on the universe")
    if not is_n_coherent(parse("x = y"), 1, universe).holds():
        failures.append("x = y is not 1-coherent on the universe")
    disjunction = parse("const(y) | const(v)")
    s3 = Structure(("a", "b", "c"))
    wide = Universe((s3,), ("y", "v"), team_cap=4, budget=options.budget)
    report = is_n_coherent(disjunction, 2, wide)
    if report.holds():
        failures.append("const(y) | const(v) unexpectedly 2-coherent")
    return _result("coherence-examples", failures,
                   "2-coherence of dependence, 1-coherence of flat, and a "
                   "searched 2-coherence counterexample for a dependence "
                   "disjunction")


EXPERIMENTS = [
    ("atom-flattenings",
     "team atoms flatten to TOP; the candidate satisfies the entailment, "
     "flatness and distribution axioms",
     atom_flattenings),
    ("exclusion-flattening-inequality",
     "the tuple inequality also satisfies the flattening axioms for the "
     "exclusion atom",
     exclusion_flattening_inequality),
    ("flat-op-atoms",
     "F dep == TOP, F anon == BOT, F inc == equality, F exc == inequality, "
     "F ind == TOP, F literal == literal",
     flat_operator_atoms),
    ("flat-op-properties",
     "F phi is flat; F is idempotent; F distributes over conjunction; "
     "phi is flat iff F phi == phi",
     flat_operator_properties),
    ("one-element-anon-remark",
     "on a one-element model the anonymity sentence shows the flattening "
     "does not entail the F form",
     one_element_anon_remark),
    ("disconnectedness-sentence",
     "the unary-inclusion sentence with F is true exactly on disconnected "
     "graphs (BFS oracle)",
     disconnectedness_sentence),
    ("separating-sentence",
     "the unary-anonymity sentence with F separates two 4-cycles from one "
     "8-cycle",
     separating_sentence),
    ("magma-closed-teams",
     "on automorphism-closed teams with the fixing-moving hypothesis, "
     "unary-anonymity formulas coincide with their flattenings (measured)",
     magma_closed_teams),
    ("strategy-agreement",
     "optimized evaluation equals naive evaluation on the exhaustive "
     "universe",
     strategy_agreement),
    ("singleton-guess-translation",
     "the first-order translation materializing the team as a relation "
     "decides F for first-order bodies",
     singleton_guess_translation),
    ("flatness-lattice",
     "flat implies DC, UC, DF, UF; DC implies DF; UC implies UF; DF+UF and "
     "DC+UC each imply flat",
     flatness_lattice),
    ("ne-disjunction-distribution",
     "measured relation between F(NE | NE) and F NE | F NE, stable across "
     "strategies",
     ne_disjunction_distribution),
    ("hook-desugaring",
     "hooks equal their desugaring and flattening commutes with it",
     hook_desugaring),
    ("or-distribution-empty-team",
     "F distributes over team disjunction when both disjuncts hold on the "
     "empty team",
     or_distribution_empty_team),
    ("quantifier-flattening-entailments",
     "one-sided flatness of the body yields the one-directional "
     "entailments between F of a quantified formula and the quantifier "
     "over F; the whole-formula reading is measured",
     quantifier_flattening_entailments),
    ("closure-preservation",
     "F preserves downwards closure, union closure and one-sided flatness",
     closure_preservation),
    ("existential-dep-flattening",
     "for existential dependence formulas F phi equals the syntactic "
     "flattening",
     existential_dep_flattening),
    ("empty-team-property",
     "formulas without NE and Boolean operators hold on the empty team",
     empty_team_property),
    ("fo-flatness",
     "every first-order formula is flat",
     fo_flatness),
    ("hook-forced-split",
     "the forced hook split equals naive evaluation of the desugared "
     "formula",
     hook_forced_split),
    ("coherence-examples",
     "dependence atoms are 2-coherent, flat formulas 1-coherent, and a "
     "dependence disjunction fails 2-coherence",
     coherence_examples),
]

_BY_ID = {name: fn for name, _claim, fn in EXPERIMENTS}


def list_experiments() -> list[tuple[str, str]]:
    return [(name, claim) for name, claim, _fn in EXPERIMENTS]


def run_experiment(name: str,
                   options: ExperimentOptions | None = None) -> ExperimentResult:
    if name not in _BY_ID:
        raise KeyError(f"unknown experiment {name!r}")
    return _BY_ID[name](options or ExperimentOptions())


def run_experiments(select: str = "all",
                    options: ExperimentOptions | None = None) -> list[ExperimentResult]:
    options = options or ExperimentOptions()
    if select == "all":
        names = [name for name, _claim, _fn in EXPERIMENTS]
    else:
        names = [select]
    return [run_experiment(name, options) for name in names]
