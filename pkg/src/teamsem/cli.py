"""Command-line front end.

Subcommands: eval, check, gen, flatten, simplify-f, automorphisms,
experiments.  Exit codes: 0 for true / holds / all-pass, 1 for false /
counterexample / any-fail, 2 for operational errors (bad input, budget
exhaustion).  Machine-readable experiment records go to the report
stream as tab-separated `id, verdict, details` lines; human summaries go
to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .analysis import (entails, equivalent, is_downwards_closed,
                       is_downwards_flat, is_flat, is_n_coherent,
                       is_union_closed, is_upwards_flat, standard_universe)
from .evaluator import (DEFAULT_BUDGET, NAIVE, OPTIMIZED, EvalBudget,
                        EvalError, Evaluator)
from .experiments import ExperimentOptions, list_experiments, run_experiments
from .flattening import EXCLUSION_NEQ, EXCLUSION_TOP, flatten, simplify_flat
from .formulas import (ParseError, collect_relations, free_variables, parse,
                       render)
from .structures import (automorphisms, gen_cycle, gen_single_cycle,
                         gen_two_cycles, parse_model, render_model)
from .teams import BudgetExceeded, Team, parse_team

CHECKS = ("flat", "dc", "uc", "df", "uf", "equiv", "entails")


def _budget(args) -> EvalBudget:
    return EvalBudget(max_rows=args.budget_rows,
                      max_branches=args.budget_branches,
                      timeout_ms=args.timeout_ms)


def _strategy(args):
    return NAIVE if args.strategy == "naive" else OPTIMIZED


def _add_budget_flags(parser) -> None:
    parser.add_argument("--strategy", choices=("naive", "optimized"),
                        default="optimized")
    parser.add_argument("--budget-rows", type=int, default=DEFAULT_BUDGET.max_rows)
    parser.add_argument("--budget-branches", type=int,
                        default=DEFAULT_BUDGET.max_branches)
    parser.add_argument("--timeout-ms", type=int, default=None)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def cmd_eval(args) -> int:
    structure = parse_model(_read(args.model))
    phi = parse(args.formula)
    if args.team is not None:
        team = parse_team(_read(args.team))
    elif args.empty_team:
        team = Team.empty(tuple(sorted(free_variables(phi))))
    elif not free_variables(phi):
        team = Team.unit()
    else:
        print("error: formula has free variables; give --team FILE or "
              "--empty-team", file=sys.stderr)
        return 2
    evaluator = Evaluator(structure, _strategy(args), _budget(args))
    value = evaluator.run(team, phi)
    print("true" if value else "false")
    stats = evaluator.stats
    print(f"strategy={args.strategy} evals={stats.evals} "
          f"branches={stats.branches} cache_hits={stats.cache_hits}",
          file=sys.stderr)
    return 0 if value else 1


def cmd_check(args) -> int:
    phi = parse(args.formula)
    formulas = [phi]
    if args.other is not None:
        formulas.append(parse(args.other))
    relations: dict[str, int] = {}
    for f in formulas:
        for name, arity in collect_relations(f).items():
            seen = relations.setdefault(name, arity)
            if seen != arity:
                raise ParseError(f"relation {name!r} used with arities "
                                 f"{seen} and {arity}", 0)
    variables = sorted(set().union(*(free_variables(f) for f in formulas)) or {"x"})
    universe = standard_universe(relations, variables,
                                 max_domain=args.universe_max_domain,
                                 strategy=_strategy(args),
                                 budget=_budget(args))
    prop = args.property
    if prop.startswith("coherent:"):
        report = is_n_coherent(phi, int(prop.split(":", 1)[1]), universe)
    elif prop == "flat":
        report = is_flat(phi, universe)
    elif prop == "dc":
        report = is_downwards_closed(phi, universe)
    elif prop == "uc":
        report = is_union_closed(phi, universe)
    elif prop == "df":
        report = is_downwards_flat(phi, universe)
    elif prop == "uf":
        report = is_upwards_flat(phi, universe)
    elif prop in ("equiv", "entails"):
        if args.other is None:
            print("error: equiv/entails need two formulas", file=sys.stderr)
            return 2
        checker = equivalent if prop == "equiv" else entails
        report = checker(phi, formulas[1], universe)
    else:
        print(f"error: unknown property {prop!r}", file=sys.stderr)
        return 2
    print(report)
    return 0 if report.holds() else 1


def cmd_gen(args) -> int:
    kind, _, size_text = args.family.partition(":")
    if not size_text.isdigit():
        print(f"error: family must look like cycle:L, A:n or B:n, got "
              f"{args.family!r}", file=sys.stderr)
        return 2
    size = int(size_text)
    if kind == "cycle":
        structure = gen_cycle(size, symmetric=not args.directed)
    elif kind == "A":
        structure = gen_two_cycles(size)
    elif kind == "B":
        structure = gen_single_cycle(size)
    else:
        print(f"error: unknown family {kind!r}", file=sys.stderr)
        return 2
    text = render_model(structure)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_flatten(args) -> int:
    mode = EXCLUSION_NEQ if args.exclusion_flattening == "neq" else EXCLUSION_TOP
    print(render(flatten(parse(args.formula), mode)))
    return 0


def cmd_simplify(args) -> int:
    print(render(simplify_flat(parse(args.formula))))
    return 0


def cmd_automorphisms(args) -> int:
    structure = parse_model(_read(args.model))
    perms = automorphisms(structure)
    for perm in perms:
        print(perm)
    print(f"{len(perms)} automorphisms", file=sys.stderr)
    return 0


def cmd_experiments(args) -> int:
    if args.list:
        for name, claim in list_experiments():
            print(f"{name}\t{claim}")
        return 0
    options = ExperimentOptions(
        exclusion_mode=(EXCLUSION_NEQ if args.exclusion_flattening == "neq"
                        else EXCLUSION_TOP),
        budget=_budget(args),
        max_domain=args.universe_max_domain)
    results = run_experiments(args.select, options)
    lines = [result.line() for result in results]
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    passed = sum(1 for r in results if r.verdict == "PASS")
    failed = sum(1 for r in results if r.verdict == "FAIL")
    skipped = len(results) - passed - failed
    for result in results:
        print(f"[{result.verdict}] {result.experiment}", file=sys.stderr)
    print(f"{passed} passed, {failed} failed, {skipped} inapplicable",
          file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamsem",
        description="Exact model checking and property checks for "
                    "team-semantics logics with the flattening operator F.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula on a model and team")
    p.add_argument("model", help="model file")
    p.add_argument("formula", help="formula text")
    p.add_argument("--team", help="team file")
    p.add_argument("--empty-team", action="store_true",
                   help="use the empty team over the formula's free variables")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="check a semantic property on an "
                                     "enumerated universe")
    p.add_argument("property",
                   help="flat | dc | uc | df | uf | coherent:N | equiv | entails")
    p.add_argument("formula")
    p.add_argument("other", nargs="?", help="second formula for equiv/entails")
    p.add_argument("--universe-max-domain", type=int, choices=(1, 2, 3), default=3)
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("gen", help="generate a model file (cycle:L, A:n, B:n)")
    p.add_argument("family")
    p.add_argument("--out")
    p.add_argument("--directed", action="store_true",
                   help="cycle:L only: one direction per edge")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("flatten", help="print the syntactic flattening")
    p.add_argument("formula")
    p.add_argument("--exclusion-flattening", choices=("top", "neq"), default="top")
    p.set_defaults(fn=cmd_flatten)

    p = sub.add_parser("simplify-f", help="apply the exact F rewrites")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_simplify)

    p = sub.add_parser("automorphisms", help="list a model's automorphisms")
    p.add_argument("model")
    p.set_defaults(fn=cmd_automorphisms)

    p = sub.add_parser("experiments", help="run the reproduction suite")
    p.add_argument("--select", default="all", help="experiment id or 'all'")
    p.add_argument("--report", help="write machine-readable records here")
    p.add_argument("--list", action="store_true", help="list experiment ids")
    p.add_argument("--exclusion-flattening", choices=("top", "neq"), default="top")
    p.add_argument("--universe-max-domain", type=int, choices=(1, 2, 3), default=3)
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_experiments)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError, KeyError, OSError, EvalError,
            BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
