"""Command-line front end: generation, execution, verification, parameters,
replacement, and benchmark suites with machine-readable output.

Exit codes: 0 success/legal, 1 assertion or verification failure, 2 usage/IO
errors.  Every invocation is deterministic given its arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import engine, families, oracles, params as params_mod, replacers
from .graph import (
    GraphFormatError,
    read_graph,
    read_matching,
    read_path,
    write_graph,
    write_matching,
    write_path,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class BenchRow:
    family: str
    params: str
    n: int
    m: int
    strategy: str
    phases_observed: int
    nu: int
    bounds: list[tuple[str, int, bool]] = field(default_factory=list)

    def satisfied(self) -> bool:
        return all(ok for _, _, ok in self.bounds)

    def to_csv(self) -> str:
        bounds = ";".join(f"{name}={value}={'ok' if ok else 'FAIL'}"
                          for name, value, ok in self.bounds)
        return ",".join([self.family, self.params, str(self.n), str(self.m),
                         self.strategy, str(self.phases_observed), str(self.nu),
                         bounds])

    def to_json_dict(self) -> dict:
        return {
            "family": self.family, "params": self.params, "n": self.n,
            "m": self.m, "strategy": self.strategy,
            "phases_observed": self.phases_observed, "nu": self.nu,
            "bounds": [{"name": name, "value": value, "satisfied": ok}
                       for name, value, ok in self.bounds],
        }


CSV_HEADER = "family,params,n,m,strategy,phases_observed,nu,bounds"


def _emit_rows(rows: list[BenchRow], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps([r.to_json_dict() for r in rows], indent=1) + "\n"
    else:
        text = "\n".join([CSV_HEADER] + [r.to_csv() for r in rows]) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def _build_instance(args) -> families.FamilyInstance:
    if args.family == "chain":
        if args.k is None:
            raise ValueError("--k is required for the chain family")
        return families.gen_chain(args.k)
    if args.family == "pathlb":
        if args.k is None:
            raise ValueError("--k (the phase target) is required for pathlb")
        return families.gen_path_lb(args.k)
    if args.family == "cographlb":
        if args.n is None:
            raise ValueError("--n is required for cographlb")
        return families.gen_cograph_lb(args.n)
    if args.family == "structured":
        if args.klass is None:
            raise ValueError("--class is required for structured instances")
        p = {"comp_count": args.comp_count, "comp_size": args.comp_size}
        if args.splex_s is not None:
            p["s"] = args.splex_s
        if args.nd_t is not None:
            p["t"] = args.nd_t
        return families.gen_structured(args.klass, p, args.k or 0, args.seed)
    if args.family == "random":
        if args.n is None:
            raise ValueError("--n is required for random instances")
        return families.gen_random(args.n, p=args.p, m=args.edges,
                                   seed=args.seed, bipartite=args.bipartite)
    raise ValueError(f"unknown family {args.family!r}")


def cmd_gen(args) -> int:
    inst = _build_instance(args)
    write_graph(inst.graph, args.out)
    print(f"family={inst.meta.name} n={inst.graph.n} m={inst.graph.m} "
          f"expected_phases={inst.meta.expected_phases}")
    if inst.meta.planted:
        print(f"planted_modulator={list(inst.meta.planted)}")
    if args.plan:
        if inst.plan is None:
            print("no plan for this family", file=sys.stderr)
            return EXIT_USAGE
        engine.write_plan(inst.plan, args.plan)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run / verify
# ---------------------------------------------------------------------------

def _strategy_from_args(args) -> engine.Strategy:
    if args.strategy == "greedy-lex":
        return engine.GreedyLex()
    if args.strategy == "seeded-random":
        return engine.SeededRandom(args.seed)
    if args.strategy == "scripted":
        if not args.plan:
            raise ValueError("scripted strategy needs --plan")
        return engine.Scripted(engine.read_plan(args.plan))
    raise ValueError(f"unknown strategy {args.strategy!r}")


def cmd_run(args) -> int:
    g = read_graph(args.graph)
    strategy = _strategy_from_args(args)
    try:
        matching, trace = engine.run_phase_framework(g, strategy,
                                                     limit_n=args.limit_n)
    except engine.PlanError as exc:
        print(f"illegal plan: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.trace:
        engine.write_trace(trace, args.trace)
    print(f"phases={trace.phase_count()} final_size={matching.size()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    trace = engine.read_trace(args.trace)
    report = engine.verify_trace(g, trace, limit_n=args.limit_n)
    for violation in report.violations:
        print(f"violation: {violation}")
    if report.legal:
        bounds = engine.phase_bound_report(g, trace)
        print(f"legal phases={report.phase_count} final_size={report.final_size} "
              f"bound_nu={bounds.bound_nu} bound_n={bounds.bound_n}")
        if not bounds.ok():
            print("phase bound exceeded", file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK
    print("illegal")
    return EXIT_FAIL


# ---------------------------------------------------------------------------
# params
# ---------------------------------------------------------------------------

def cmd_params(args) -> int:
    g = read_graph(args.graph)
    report: dict = {"n": g.n, "m": g.m}
    flags = params_mod.class_membership(g)
    report["is_cluster"] = flags.is_cluster
    report["is_star_forest"] = flags.is_star_forest
    report["is_bipartite_chain"] = flags.is_bipartite_chain
    report["is_cograph"] = flags.is_cograph
    report["splex_union_s"] = flags.splex_union_s
    report["nd"] = params_mod.neighborhood_diversity(g).nd()
    tree = params_mod.modular_decomposition(g) if g.n else None
    if tree is not None:
        report["mw"] = tree.mw()
        report["md"] = tree.md()
    if g.n <= args.exact_limit:
        alpha = params_mod.independence_number(g, limit_n=args.exact_limit)
        report["alpha"] = alpha
        report["tau"] = g.n - alpha
    if g.n <= args.limit_n or g.bipartition is not None:
        matching, trace = engine.run_phase_framework(g, engine.GreedyLex(),
                                                     limit_n=args.limit_n)
        report["nu"] = matching.size()
        report["greedy_phases"] = trace.phase_count()
        for bound in params_mod.theorem_bound(matching.size(), g.n):
            report[f"bound_{bound.name}"] = bound.value
    if args.distance:
        out = params_mod.distance_to_class(g, args.distance, k_max=args.k_max)
        if out is None:
            report[f"dist_{args.distance}"] = f"> {args.k_max}"
        else:
            report[f"dist_{args.distance}"] = out[0]
            report[f"dist_{args.distance}_witness"] = list(out[1])
    if args.format == "json":
        print(json.dumps(report, indent=1))
    else:
        for key, value in report.items():
            print(f"{key}={value}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# replace
# ---------------------------------------------------------------------------

def cmd_replace(args) -> int:
    g = read_graph(args.graph)
    m = read_matching(args.matching)
    m.validate_in(g)
    p = read_path(args.path)
    from .graph import AltPath

    p = AltPath.in_graph(g, p.vertices)
    try:
        if args.method == "splex":
            result = replacers.replace_splex(g, m, p, args.param)
        elif args.method == "independence":
            result = replacers.replace_independence(g, m, p, args.param)
        elif args.method == "nd":
            types = params_mod.neighborhood_diversity(g)
            result = replacers.replace_nd(g, m, p, types)
        elif args.method == "modular":
            tree = params_mod.modular_decomposition(g)
            result = replacers.replace_modular(g, m, p, tree)
        else:
            raise ValueError(f"unknown method {args.method!r}")
    except replacers.HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        write_path(result.path, args.out)
    print(f"input_length={p.length()} output_length={result.path.length()} "
          f"steps={result.steps} bound={result.bound} valid=yes")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _standard_bounds(phases: int, nu: int, n: int) -> list[tuple[str, int, bool]]:
    bounds = params_mod.theorem_bound(nu, n)
    return [(b.name, b.value, phases <= b.value) for b in bounds]


def _bench_lowerbounds(args) -> list[BenchRow]:
    rows = []
    jobs = [("chain", k, families.gen_chain(k)) for k in range(2, args.k_max + 1)]
    jobs += [("pathlb", j, families.gen_path_lb(j)) for j in range(2, args.k_max + 1)]
    jobs += [("cographlb", n, families.gen_cograph_lb(n)) for n in range(1, args.k_max + 1)]
    for family, value, inst in jobs:
        matching, trace = engine.run_phase_framework(
            inst.graph, engine.Scripted(inst.plan), limit_n=args.limit_n)
        report = engine.verify_trace(inst.graph, trace, limit_n=args.limit_n)
        phases = trace.phase_count()
        bounds = [("legal", 1, report.legal),
                  ("expected_phases", inst.meta.expected_phases,
                   phases >= inst.meta.expected_phases)]
        bounds += _standard_bounds(phases, matching.size(), inst.graph.n)
        rows.append(BenchRow(family=family, params=f"k={value}", n=inst.graph.n,
                             m=inst.graph.m, strategy="scripted",
                             phases_observed=phases, nu=matching.size(),
                             bounds=bounds))
    return rows


def _bench_upperbounds(args) -> list[BenchRow]:
    rows = []
    ell_cache: dict[tuple, int] = {}
    for klass, base_params in (
            ("cluster", {"comp_count": 6, "comp_size": 5}),
            ("splex_union", {"comp_count": 5, "comp_size": 6, "s": 2}),
    ):
        comp = families.gen_structured(klass, {**base_params, "comp_count": 1},
                                       0, seed=0).graph
        key = (klass, tuple(sorted(base_params.items())))
        if key not in ell_cache:
            ell_cache[key] = oracles.min_replaceability(comp)
        ell = ell_cache[key]
        for k in args.modulators:
            inst = families.gen_structured(klass, base_params, k, seed=args.seed)
            strategies: list[engine.Strategy] = [engine.GreedyLex()]
            strategies += [engine.SeededRandom(s) for s in range(args.runs)]
            for strategy in strategies:
                matching, trace = engine.run_phase_framework(
                    inst.graph, strategy, limit_n=args.limit_n)
                phases = trace.phase_count()
                value, clamped = params_mod.replaceable_phase_bound(k, ell)
                bounds = [(f"sqrt_k_ell{'_clamped' if clamped else ''}",
                           value, phases <= value)]
                bounds += _standard_bounds(phases, matching.size(), inst.graph.n)
                rows.append(BenchRow(
                    family=f"structured-{klass}",
                    params=f"k={k};ell={ell};seed={args.seed}",
                    n=inst.graph.n, m=inst.graph.m,
                    strategy=str(strategy.describe()),
                    phases_observed=phases, nu=matching.size(), bounds=bounds))
    return rows


def _bench_oracle_sweep(args) -> list[BenchRow]:
    import itertools as it

    rows = []
    n_exh = min(5, args.limit_n)
    pairs = list(it.combinations(range(n_exh), 2))
    mismatches = 0
    worst_phases_ok = True
    from .graph import Graph

    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = Graph(n_exh, edges)
        matching, trace = engine.run_phase_framework(g, engine.GreedyLex())
        if matching.size() != oracles.brute_force_nu(g):
            mismatches += 1
        if not engine.phase_bound_report(g, trace).ok():
            worst_phases_ok = False
    rows.append(BenchRow(
        family="oracle-sweep", params=f"exhaustive_n={n_exh}",
        n=n_exh, m=len(pairs), strategy="greedy-lex",
        phases_observed=mismatches, nu=0,
        bounds=[("zero_mismatches", 0, mismatches == 0),
                ("phase_bounds", 1, worst_phases_ok)]))
    mismatches = 0
    for seed in range(args.runs):
        inst = families.gen_random(10, p=0.4, seed=args.seed * 1000 + seed)
        matching, _ = engine.run_phase_framework(inst.graph, engine.GreedyLex())
        if matching.size() != oracles.brute_force_nu(inst.graph):
            mismatches += 1
    rows.append(BenchRow(
        family="oracle-sweep", params=f"seeded_n=10;runs={args.runs}",
        n=10, m=0, strategy="greedy-lex", phases_observed=mismatches, nu=0,
        bounds=[("zero_mismatches", 0, mismatches == 0)]))
    return rows


def cmd_bench(args) -> int:
    if args.suite == "lowerbounds":
        rows = _bench_lowerbounds(args)
    elif args.suite == "upperbounds":
        rows = _bench_upperbounds(args)
    elif args.suite == "oracle-sweep":
        rows = _bench_oracle_sweep(args)
    else:
        print(f"unknown suite {args.suite!r}", file=sys.stderr)
        return EXIT_USAGE
    _emit_rows(rows, args.format, args.out)
    failing = [r for r in rows if not r.satisfied()]
    if failing:
        for row in failing:
            print(f"FAIL: {row.to_csv()}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasematch",
        description="Matching phase framework: generators, runs, verification, "
                    "parameters, replacement, benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a family instance")
    p_gen.add_argument("--family", required=True,
                       choices=["chain", "pathlb", "cographlb", "structured", "random"])
    p_gen.add_argument("--k", type=int, help="family size parameter / modulator size")
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--class", dest="klass",
                       choices=["cluster", "splex_union", "bounded_nd", "star_forest"])
    p_gen.add_argument("--comp-count", type=int, default=8)
    p_gen.add_argument("--comp-size", type=int, default=5)
    p_gen.add_argument("--splex-s", type=int)
    p_gen.add_argument("--nd-t", type=int)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--edges", type=int)
    p_gen.add_argument("--bipartite", action="store_true")
    p_gen.add_argument("--out", required=True, help="graph file destination")
    p_gen.add_argument("--plan", help="plan file destination")
    p_gen.set_defaults(func=cmd_gen)

    p_run = sub.add_parser("run", help="run the phase framework on a graph")
    p_run.add_argument("--graph", required=True)
    p_run.add_argument("--strategy", default="greedy-lex",
                       choices=["greedy-lex", "seeded-random", "scripted"])
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--plan")
    p_run.add_argument("--trace", help="trace file destination")
    p_run.add_argument("--limit-n", type=int, default=engine.DEFAULT_EXHAUSTIVE_LIMIT)
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="verify a trace against a graph")
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--trace", required=True)
    p_verify.add_argument("--limit-n", type=int, default=engine.DEFAULT_EXHAUSTIVE_LIMIT)
    p_verify.set_defaults(func=cmd_verify)

    p_params = sub.add_parser("params", help="graph parameter report")
    p_params.add_argument("--graph", required=True)
    p_params.add_argument("--exact-limit", type=int, default=30)
    p_params.add_argument("--limit-n", type=int, default=engine.DEFAULT_EXHAUSTIVE_LIMIT)
    p_params.add_argument("--distance", help="class flag, e.g. cluster or splex_union:2")
    p_params.add_argument("--k-max", type=int, default=10)
    p_params.add_argument("--format", choices=["text", "json"], default="text")
    p_params.set_defaults(func=cmd_params)

    p_rep = sub.add_parser("replace", help="run a replacement procedure")
    p_rep.add_argument("--graph", required=True)
    p_rep.add_argument("--matching", required=True)
    p_rep.add_argument("--path", required=True)
    p_rep.add_argument("--method", required=True,
                       choices=["splex", "independence", "nd", "modular"])
    p_rep.add_argument("--param", type=int, default=1)
    p_rep.add_argument("--out", help="replacement path destination")
    p_rep.set_defaults(func=cmd_replace)

    p_bench = sub.add_parser("bench", help="run a benchmark suite")
    p_bench.add_argument("--suite", required=True,
                         choices=["lowerbounds", "upperbounds", "oracle-sweep"])
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--k-max", type=int, default=8, dest="k_max")
    p_bench.add_argument("--modulators", type=int, nargs="+", default=[16, 36])
    p_bench.add_argument("--runs", type=int, default=3)
    p_bench.add_argument("--limit-n", type=int, default=engine.DEFAULT_EXHAUSTIVE_LIMIT)
    p_bench.add_argument("--out")
    p_bench.add_argument("--format", choices=["csv", "json"], default="csv")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
