"""Command-line front end.

Subcommands: gen (synthetic | attribute | reduce-vc | reduce-sc), solve,
advise, emit-ilp, bench and validate.  Exit codes: 0 success, 1 infeasible
when feasibility was demanded, 2 input error, 3 search budget exceeded.
Identical seeds and inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from fractions import Fraction

from . import advice as advice_mod
from . import fileio, generate, ilp
from .benefits import profiles_for
from .errors import CapExceededError, InputValidationError, RoundmatchError
from .instance import (
    RestrictionsGraph,
    derive_compatibility,
    min_satisfaction_ratio,
    satisfaction,
    validate_solution,
)
from .maxsa import solve_maxsa_exact, solve_maxsa_heuristic
from .maxtb import solve_maxtb
from .mrm import solve_mrm

OBJECTIVES = (
    "mrm",
    "maxtb:utilitarian",
    "maxtb:rawlsian",
    "maxsa:exact",
    "maxsa:heuristic",
)


class _Infeasible(RoundmatchError):
    pass


def _search_cap(default: int = 1_000_000) -> int:
    raw = os.environ.get("MRM_SEARCH_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputValidationError(f"MRM_SEARCH_CAP must be an integer, got {raw!r}")


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputValidationError(f"cannot read {path}: {exc.strerror}")


def _load_instance(path: str) -> RestrictionsGraph:
    return fileio.parse_instance(_read(path))


def _scale_budgets(g: RestrictionsGraph, scale: Fraction) -> RestrictionsGraph:
    if scale == 1:
        return g
    agents = tuple(replace(a, budget=a.budget * scale) for a in g.agents)
    return RestrictionsGraph(
        agents=agents, resources=g.resources, k=g.k, edges=g.edges
    )


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


# -- gen ----------------------------------------------------------------------

def _gen_params(args) -> generate.GenParams:
    overrides = {}
    for name, attr in (
        ("n", "n"), ("m", "m"), ("k", "k"),
        ("labels", "labels_per_agent"), ("cost_lo", "cost_lo"),
        ("cost_hi", "cost_hi"), ("edge_labels", "max_edge_labels"),
        ("rho_lo", "rho_lo"), ("rho_hi", "rho_hi"),
        ("round_prob", "round_prob"), ("budget", "budget"),
        ("twins", "twin_capacity"),
    ):
        value = getattr(args, name, None)
        if value is not None:
            overrides[attr] = value
    if args.preset is not None:
        if args.preset not in generate.PRESETS:
            raise InputValidationError(
                f"unknown preset {args.preset!r}; have "
                f"{', '.join(sorted(generate.PRESETS))}"
            )
        return replace(generate.PRESETS[args.preset], **overrides)
    if args.n is None or args.m is None or args.k is None:
        raise InputValidationError("provide --preset or all of --n/--m/--k")
    return generate.GenParams(**overrides)


def _cmd_gen(args) -> int:
    if args.kind == "synthetic":
        g = generate.gen_synthetic(_gen_params(args), args.seed)
    elif args.kind == "attribute":
        scenario = fileio.parse_scenario(_read(args.scenario))
        g = generate.gen_attribute_instance(scenario, args.seed)
    elif args.kind == "reduce-vc":
        if args.graph in generate.CUBIC_GRAPHS:
            edges = generate.CUBIC_GRAPHS[args.graph]
        else:
            doc = json.loads(_read(args.graph))
            edges = [tuple(e) for e in doc]
        g, q = generate.reduce_from_vertex_cover(edges, args.bound)
        sys.stderr.write(f"satisfiable-target Q = {q}\n")
    elif args.kind == "reduce-sc":
        doc = json.loads(_read(args.source))
        g = generate.reduce_from_set_cover(
            doc["universe"], doc["subsets"], args.alpha
        )
    else:  # pragma: no cover - argparse restricts choices
        raise InputValidationError(f"unknown generator {args.kind!r}")
    _emit(fileio.write_instance(g), args.out)
    return 0


# -- solve --------------------------------------------------------------------

def _cmd_solve(args) -> int:
    g = _load_instance(args.instance)
    compat = derive_compatibility(g)
    if args.objective == "mrm":
        solution = solve_mrm(compat)
        if solution is None:
            raise _Infeasible("infeasible")
        extra = {"objective": "mrm", "value": "feasible"}
    elif args.objective.startswith("maxtb:"):
        family = args.objective.split(":", 1)[1]
        solution, benefit = solve_maxtb(compat, profiles_for(compat, family))
        extra = {"objective": args.objective, "value": str(benefit)}
        if family == "rawlsian":
            extra["value"] = str(min_satisfaction_ratio(solution, compat.agents))
    elif args.objective == "maxsa:exact":
        result = solve_maxsa_exact(compat, limit=_search_cap())
        solution = result.solution
        extra = {
            "objective": args.objective,
            "value": str(len(result.satisfied)),
            "satisfied": sorted(result.satisfied),
        }
    else:  # maxsa:heuristic
        result = solve_maxsa_heuristic(compat)
        solution = result.solution
        extra = {
            "objective": args.objective,
            "value": str(len(result.satisfied)),
            "satisfied": sorted(result.satisfied),
        }
    _emit(fileio.write_solution(solution, extra), args.out)
    if args.csv:
        row = fileio.ResultRow(
            instance=args.instance,
            objective=args.objective,
            solver="cli",
            value=extra["value"],
            runtime_ms=0,
            seed=args.seed or 0,
        )
        _emit(fileio.emit_results_csv([row]), args.csv)
    return 0


# -- advise -------------------------------------------------------------------

def _cmd_advise(args) -> int:
    g = _scale_budgets(_load_instance(args.instance), args.budget_scale)
    if args.mode == "ilp-emit":
        _emit(ilp.emit_lp(ilp.build_ilp(g)), args.out)
        return 0
    if args.mode == "anneal":
        if args.seed is None:
            raise InputValidationError("--seed is required for --mode anneal")
        cfg = advice_mod.AnnealConfig(
            seed=args.seed,
            t0=args.t0,
            factor=args.factor,
            floor=args.floor,
            iterations=args.iters,
            stall=args.stall,
        )
        plan = advice_mod.anneal_advice(g, cfg)
    else:  # exact
        plan = advice_mod.exact_advice(g, limit=_search_cap())
    _emit(
        fileio.write_plan(plan.removals, plan.costs, plan.satisfied, plan.solution),
        args.out,
    )
    return 0


# -- bench --------------------------------------------------------------------

def _bench_rows(args) -> list[fileio.ResultRow]:
    rows = []
    if not args.objective:
        args.objective = ["maxtb:utilitarian"]
    sizes = (
        [int(s) for s in args.sizes.split(",")] if args.sizes else [None]
    )
    for size in sizes:
        for rep in range(args.replicates):
            seed = args.seed + rep
            if args.instance:
                g = _load_instance(args.instance)
                name = args.instance
            else:
                params = _gen_params(args)
                if size is not None:
                    params = replace(params, n=size, m=size)
                g = generate.gen_synthetic(params, seed)
                name = f"synthetic-n{params.n}-m{params.m}-k{params.k}"
            g = _scale_budgets(g, args.budget_scale)
            compat = derive_compatibility(g)
            for objective in args.objective:
                start = time.perf_counter()
                if objective == "mrm":
                    value = "feasible" if solve_mrm(compat) else "infeasible"
                elif objective == "maxtb:utilitarian":
                    _, benefit = solve_maxtb(
                        compat, profiles_for(compat, "utilitarian")
                    )
                    value = str(benefit)
                elif objective == "maxtb:rawlsian":
                    solution, _ = solve_maxtb(
                        compat, profiles_for(compat, "rawlsian")
                    )
                    value = str(min_satisfaction_ratio(solution, compat.agents))
                elif objective == "maxsa:heuristic":
                    value = str(len(solve_maxsa_heuristic(compat).satisfied))
                elif objective == "advise:anneal":
                    cfg = advice_mod.AnnealConfig(
                        seed=seed, t0=args.t0, factor=args.factor,
                        floor=args.floor, iterations=args.iters,
                        stall=args.stall,
                    )
                    value = str(advice_mod.anneal_advice(g, cfg).satisfied)
                else:
                    raise InputValidationError(
                        f"objective {objective!r} is not benchmarkable"
                    )
                elapsed = int((time.perf_counter() - start) * 1000)
                rows.append(
                    fileio.ResultRow(
                        instance=name,
                        objective=objective,
                        solver="roundmatch",
                        value=value,
                        runtime_ms=elapsed if args.timing else 0,
                        seed=seed,
                    )
                )
    return rows


def _cmd_bench(args) -> int:
    _emit(fileio.emit_results_csv(_bench_rows(args)), args.csv)
    return 0


# -- validate -----------------------------------------------------------------

def _cmd_validate(args) -> int:
    g = _load_instance(args.instance)
    problems: list[str] = []
    if args.plan:
        removals, solution, _ = fileio.parse_plan(_read(args.plan))
        compat = derive_compatibility(g, removals)
        problems = validate_solution(solution, compat)
    elif args.solution:
        solution = fileio.parse_solution(_read(args.solution))
        compat = derive_compatibility(g)
        problems = validate_solution(solution, compat)
    if problems:
        for p in problems:
            sys.stderr.write(f"error: {p}\n")
        return 2
    sys.stdout.write("ok\n")
    return 0


# -- wiring -------------------------------------------------------------------

def _add_anneal_flags(p: argparse.ArgumentParser):
    p.add_argument("--t0", type=_fraction_arg, default=Fraction(100))
    p.add_argument("--factor", type=_fraction_arg, default=Fraction(99, 100))
    p.add_argument("--floor", type=_fraction_arg, default=Fraction(1, 100))
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--stall", type=int, default=40)


def _add_gen_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--preset", choices=sorted(generate.PRESETS), default=None)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--labels", type=int)
    p.add_argument("--cost-lo", dest="cost_lo", type=int)
    p.add_argument("--cost-hi", dest="cost_hi", type=int)
    p.add_argument("--edge-labels", dest="edge_labels", type=int)
    p.add_argument("--rho-lo", dest="rho_lo", type=int)
    p.add_argument("--rho-hi", dest="rho_hi", type=int)
    p.add_argument("--round-prob", dest="round_prob", type=float)
    p.add_argument("--budget", type=_fraction_arg)
    p.add_argument("--twins", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roundmatch",
        description="Multi-round matching solvers and advice generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate instance files")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    g_syn = gen_sub.add_parser("synthetic")
    _add_gen_param_flags(g_syn)
    g_syn.add_argument("--seed", type=int, required=True)
    g_syn.add_argument("--out")
    g_att = gen_sub.add_parser("attribute")
    g_att.add_argument("--scenario", required=True)
    g_att.add_argument("--seed", type=int, required=True)
    g_att.add_argument("--out")
    g_vc = gen_sub.add_parser("reduce-vc")
    g_vc.add_argument("--graph", required=True,
                      help="k4, k33 or a JSON file of edge pairs")
    g_vc.add_argument("--bound", type=int, required=True)
    g_vc.add_argument("--out")
    g_sc = gen_sub.add_parser("reduce-sc")
    g_sc.add_argument("--source", required=True,
                      help='JSON file {"universe": [...], "subsets": [[...], ...]}')
    g_sc.add_argument("--alpha", type=int, required=True)
    g_sc.add_argument("--out")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="solve an instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--objective", choices=OBJECTIVES, required=True)
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--out")
    solve.add_argument("--csv")
    solve.set_defaults(func=_cmd_solve)

    advise = sub.add_parser("advise", help="generate label-removal advice")
    advise.add_argument("--instance", required=True)
    advise.add_argument("--mode", choices=("anneal", "exact", "ilp-emit"),
                        required=True)
    advise.add_argument("--seed", type=int, default=None)
    advise.add_argument("--budget-scale", dest="budget_scale",
                        type=_fraction_arg, default=Fraction(1))
    advise.add_argument("--out")
    _add_anneal_flags(advise)
    advise.set_defaults(func=_cmd_advise)

    emit = sub.add_parser("emit-ilp", help="emit the LP-format model")
    emit.add_argument("--instance", required=True)
    emit.add_argument("--out")
    emit.set_defaults(
        func=lambda args: _emit(
            ilp.emit_lp(ilp.build_ilp(_load_instance(args.instance))), args.out
        )
        or 0
    )

    bench = sub.add_parser("bench", help="sweep a parameter grid, emit CSV")
    _add_gen_param_flags(bench)
    bench.add_argument("--instance")
    bench.add_argument("--objective", action="append",
                       default=None,
                       choices=("mrm", "maxtb:utilitarian", "maxtb:rawlsian",
                                "maxsa:heuristic", "advise:anneal"))
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--replicates", type=int, default=1)
    bench.add_argument("--sizes", help="comma-separated n=m sweep")
    bench.add_argument("--budget-scale", dest="budget_scale",
                       type=_fraction_arg, default=Fraction(1))
    bench.add_argument("--timing", action="store_true",
                       help="record wall time (breaks byte-determinism)")
    bench.add_argument("--csv")
    _add_anneal_flags(bench)
    bench.set_defaults(func=_cmd_bench)

    val = sub.add_parser("validate", help="validate instance/solution/plan files")
    val.add_argument("--instance", required=True)
    val.add_argument("--solution")
    val.add_argument("--plan")
    val.set_defaults(func=_cmd_validate)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _Infeasible as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except CapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except InputValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except RoundmatchError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
