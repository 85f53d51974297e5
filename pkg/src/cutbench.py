#!/usr/bin/env python3
"""
cutbench: wire-cutting experiments on clustered QAOA Max-Cut instances.

Every stochastic command needs --seed; with --workers 1 and --omit-timing the
output files are byte-identical between runs.
"""
import argparse
import json
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

import networkx as nx

from bench import (
    ResultFormatError, clustered_instance, fit_log2_slope, run_circuit_sample, run_cutsize, run_sample, run_scaling,
    run_selftest, run_variance, write_trace,
)
from bench.experiments import Instance
from channels import ChannelError
from cliffords import CliffordError
from cutting import METHODS, CutPlanError, EstimationError, NumericalInvariantError, build_plan, estimate, load_plan
from qaoa import (
    ClusteredGraphSpec, GraphGenerationError, OptimizationError, PartitionError, QAOAParams, QAOAParamsError,
    build_qaoa_circuit, cluster_partition, cut_evaluator, exact_cost, exact_evaluator, find_balanced_separator,
    generate_clustered_graph, graph_to_dict, grid_search, initial_params, load_graph, load_params,
    maxcut_cost_operator, optimize_params, plan_qaoa_cuts, save_graph, separator_partition,
)
from sim import SimulationError, format_bitstring, load_circuit
from utils.config import ConfigError, get_settings, load_config, use_settings
from utils.log_setup import set_verbose, setup_project_logging

logger = setup_project_logging()

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

VALIDATION_ERRORS = (
    ConfigError, SimulationError, CliffordError, ChannelError, CutPlanError, EstimationError,
    GraphGenerationError, PartitionError, QAOAParamsError, OptimizationError, ResultFormatError,
    ValueError, OSError,
)

EPILOG = """
examples:
  cutbench.py --seed 7 --out graph.json gen-graph --r 3 --n 20 --k 1
  cutbench.py --seed 7 exact --graph graph.json --gammas 0.4 --betas 0.3
  cutbench.py --seed 1 --out variance.csv --omit-timing bench-variance --p 2 --shots-grid 1000 10000
  cutbench.py --seed 1 --out cutsize.json --format json bench-cutsize --ks 1 2 3 --shots 100000
  cutbench.py --seed 3 --out params.json qaoa-opt --r 2 --n 2 --k 1 --p 1
  cutbench.py --seed 5 --out samples.txt sample --r 2 --n 1 --k 1 --shots 100000
  cutbench.py --seed 5 --out bits.txt sample --circuit circuit.json --plan plan.json
  cutbench.py --seed 9 scaling --worker-counts 1 2 4
  cutbench.py selftest
"""

def _require_seed(args) -> int:
    if args.seed is None:
        raise ValueError(f"{args.command} is stochastic and needs --seed")
    return args.seed

def _emit(data: Dict, out: Optional[Path]) -> None:
    """JSON to --out or stdout"""
    text = json.dumps(data, indent=2, sort_keys=True)
    if out is None:
        print(text)
    else:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        logger.info(f"Wrote {out}")

def _graph(args) -> nx.Graph:
    """Graph from --graph, else generated from --r/--n/--k and the seed"""
    if getattr(args, 'graph', None):
        return load_graph(Path(args.graph))
    spec = ClusteredGraphSpec(
        args.r, args.n, args.k, args.p_intra, args.p_sep,
        seed=_require_seed(args), anchored=getattr(args, 'anchor_separators', False),
    )
    return generate_clustered_graph(spec)

def _partition(graph: nx.Graph):
    """Cluster partition when the generator labels are present, else a balanced separator"""
    if all(label is not None for _, label in graph.nodes(data='label')):
        return cluster_partition(graph)
    return separator_partition(graph, find_balanced_separator(graph))

def _params(args, p: int) -> QAOAParams:
    if getattr(args, 'params', None):
        params = load_params(Path(args.params))
    elif getattr(args, 'gammas', None) is not None or getattr(args, 'betas', None) is not None:
        params = QAOAParams(tuple(args.gammas or ()), tuple(args.betas or ()))
    else:
        params = initial_params(p)
    if params.p != p:
        raise QAOAParamsError(f"Parameters have p={params.p}, expected p={p}")
    return params

def _instance(args) -> Instance:
    graph = _graph(args)
    return Instance(graph, _partition(graph), args.p, _params(args, args.p))

def _write_table(table, args) -> None:
    if args.omit_timing:
        table = table.without_timing()
        table.metadata.pop('speedup', None)
    if args.out is None:
        print(json.dumps(table.to_dict(), indent=2, sort_keys=True))
    else:
        table.write(Path(args.out), args.format)

def cmd_gen_graph(args) -> int:
    graph = _graph(args)
    if args.out is None:
        print(json.dumps(graph_to_dict(graph), indent=2))
    else:
        save_graph(graph, Path(args.out))
        logger.info(f"Wrote graph with {graph.number_of_nodes()} vertices to {args.out}")
    return EXIT_OK

def cmd_exact(args) -> int:
    graph = _graph(args)
    cap = get_settings().caps.cli_exact_qubits
    if graph.number_of_nodes() > cap:
        raise SimulationError(f"Exact evaluation is limited to {cap} qubits, graph has {graph.number_of_nodes()}")
    params = _params(args, args.p)
    cost = exact_cost(graph, params)
    _emit({'cost': cost, 'params': params.to_dict(), 'num_vertices': graph.number_of_nodes()}, args.out)
    return EXIT_OK

def cmd_cut_estimate(args) -> int:
    seed = _require_seed(args)
    instance = _instance(args)
    plan = plan_qaoa_cuts(instance.graph, instance.partition, instance.p, args.method)
    circuit = build_qaoa_circuit(instance.graph, instance.params, instance.partition)
    start = time.monotonic()
    result = estimate(circuit, plan, maxcut_cost_operator(instance.graph), args.shots, seed, args.workers)
    wall = 0.0 if args.omit_timing else time.monotonic() - start
    data = {
        'estimate': result.to_dict(), 'method': args.method, 'k_total': plan.num_cut_wires,
        'groups': len(plan.groups), 'seed': seed, 'wall_time': wall,
    }
    if instance.graph.number_of_nodes() <= get_settings().caps.cli_exact_qubits:
        data['exact'] = instance.exact()
    _emit(data, args.out)
    return EXIT_OK

def cmd_bench_variance(args) -> int:
    seed = _require_seed(args)
    if args.graph:
        instance = _instance(args)
    else:
        # defaults give two clusters of three joined by three anchored separator vertices: 9 qubits
        instance = clustered_instance(args.r, args.n, args.k, args.p, seed, _params(args, args.p))
    shots_grid = args.shots_grid or get_settings().bench.shots_grid
    table = run_variance(instance, args.methods, shots_grid, seed, args.workers, args.repetitions)
    _write_table(table, args)
    return EXIT_OK

def cmd_bench_cutsize(args) -> int:
    seed = _require_seed(args)
    table = run_cutsize(args.ks, args.methods, args.shots, seed, args.p, args.n, args.workers)
    if len(set(args.ks)) > 1:
        for method in args.methods:
            slope = fit_log2_slope(table, method)
            table.metadata[f"log2_slope_{method}"] = slope
            logger.info(f"{method}: log2 variance slope {slope:.2f} per cut wire")
    _write_table(table, args)
    return EXIT_OK

def cmd_qaoa_opt(args) -> int:
    seed = _require_seed(args)
    graph = _graph(args)
    settings = get_settings().optimizer
    if args.evaluator == 'exact':
        evaluator = exact_evaluator(graph)
    else:
        evaluator = cut_evaluator(graph, _partition(graph), args.p, args.evaluator, args.shots, seed)
    initial = _params(args, args.p) if (args.params or args.gammas is not None) else None
    result = optimize_params(graph, args.p, evaluator, settings, args.evaluator != 'exact', initial, args.workers)
    data = {
        'params': result.params.to_dict(), 'final_cost': result.trace[-1], 'iterations': result.iterations,
        'converged': result.converged, 'evaluator': args.evaluator, 'seed': seed,
        'exact_final_cost': exact_cost(graph, result.params),
    }
    if args.p == 1:
        grid_params, grid_cost = grid_search(graph, 1, settings.grid_resolution)
        data['grid_optimum'] = {'params': grid_params.to_dict(), 'cost': grid_cost}
    _emit(data, args.out)
    if args.out is not None:
        trace_path = Path(args.out).with_suffix('.trace.csv')
        write_trace(result.trace, trace_path)
        logger.info(f"Wrote {len(result.trace)} trace rows to {trace_path}")
    return EXIT_OK

def cmd_sample(args) -> int:
    seed = _require_seed(args)
    if args.plan and not args.circuit:
        raise ValueError("--plan needs --circuit")
    if args.circuit:
        circuit = load_circuit(Path(args.circuit))
        plan = load_plan(circuit, Path(args.plan)) if args.plan and not args.no_cut else build_plan(circuit, [])
        report = run_circuit_sample(circuit, plan, args.shots, seed, args.workers)
        n = circuit.num_qubits
        failure = f"Smallest q~/q ratio {report.min_ratio} below 1/{report.overhead}"
    else:
        instance = _instance(args)
        report = run_sample(instance, args.shots, seed, not args.no_cut, args.workers)
        n = instance.graph.number_of_nodes()
        failure = f"Hit rate {report.hit_rate:.5f} below the bound {report.bound:.5f}"
    if args.out is None:
        _emit(report.to_dict(), None)
    else:
        out = Path(args.out)
        with open(out, 'w', encoding='utf-8') as f:
            f.writelines(format_bitstring(x, n) + '\n' for x in report.bitstrings)
        _emit(report.to_dict(), out.with_suffix('.report.json'))
    if not report.passed:
        logger.error(failure)
        return EXIT_NUMERICAL
    return EXIT_OK

def cmd_scaling(args) -> int:
    seed = _require_seed(args)
    instance = _instance(args)
    table, identical = run_scaling(instance, args.worker_counts, args.shots, seed, args.method)
    _write_table(table, args)
    if not identical:
        raise NumericalInvariantError("Shot values differ between worker counts")
    return EXIT_OK

def cmd_selftest(args) -> int:
    seed = 11 if args.seed is None else args.seed
    report = run_selftest(corrupt=args.corrupt_pauli, design_samples=args.design_samples, seed=seed)
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_NUMERICAL

def _add_graph_args(
    parser, p_default: int = 1, n_default: int = 4, k_default: int = 1, anchor_flag: bool = True,
) -> None:
    parser.add_argument('--graph', type=str, help='Graph JSON file (default: generate from --r/--n/--k)')
    parser.add_argument('--r', type=int, default=2, help='Number of clusters (default: 2)')
    parser.add_argument('--n', type=int, default=n_default, help=f'Vertices per cluster (default: {n_default})')
    parser.add_argument('--k', type=int, default=k_default, help=f'Vertices per separator (default: {k_default})')
    parser.add_argument('--p-intra', type=float, default=0.7, help='Edge probability inside a cluster (default: 0.7)')
    parser.add_argument('--p-sep', type=float, default=0.3,
                        help='Edge probability from a separator vertex (default: 0.3)')
    parser.add_argument('--p', type=int, default=p_default, help=f'QAOA layers (default: {p_default})')
    if anchor_flag:
        parser.add_argument('--anchor-separators', action='store_true',
                            help='Give every separator vertex an edge into both neighbouring clusters')

def _add_params_args(parser) -> None:
    parser.add_argument('--params', type=str, help='QAOA parameter JSON file')
    parser.add_argument('--gammas', type=float, nargs='+', help='Cost angles, one per layer')
    parser.add_argument('--betas', type=float, nargs='+', help='Mixer angles, one per layer')

def parse_args(argv: Optional[List[str]] = None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        description='Randomized wire cutting benchmarks on clustered QAOA Max-Cut instances',
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--seed', type=int, help='Master seed (required by stochastic commands)')
    parser.add_argument('--workers', type=int, default=1, help='Worker threads for shot execution (default: 1)')
    parser.add_argument('--out', type=str, help='Output file (default: stdout)')
    parser.add_argument('--format', choices=['csv', 'json'], default='csv', help='Result table format (default: csv)')
    parser.add_argument('--config', type=str, help='YAML settings file')
    parser.add_argument('--verbose', action='store_true', help='Enable debug logging')
    parser.add_argument('--omit-timing', action='store_true', help='Write wall_time=0 for byte-stable output')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen-graph', help='Generate a clustered graph')
    p.add_argument('--r', type=int, required=True, help='Number of clusters')
    p.add_argument('--n', type=int, required=True, help='Vertices per cluster')
    p.add_argument('--k', type=int, required=True, help='Vertices per separator')
    p.add_argument('--p-intra', type=float, default=0.7, help='Edge probability inside a cluster (default: 0.7)')
    p.add_argument('--p-sep', type=float, default=0.3, help='Edge probability from a separator vertex (default: 0.3)')
    p.add_argument('--anchor-separators', action='store_true',
                   help='Give every separator vertex an edge into both neighbouring clusters')
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser('exact', help='Exact QAOA cost of a graph and parameters')
    _add_graph_args(p)
    _add_params_args(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser('cut-estimate', help='One cut estimate of the QAOA cost')
    _add_graph_args(p)
    _add_params_args(p)
    p.add_argument('--method', choices=METHODS, default='randomized', help='Cut method (default: randomized)')
    p.add_argument('--shots', type=int, default=10000, help='Shots (default: 10000)')
    p.set_defaults(func=cmd_cut_estimate)

    p = sub.add_parser('bench-variance', help='Estimator spread against shot count (generated separators are anchored)')
    _add_graph_args(p, p_default=2, n_default=3, k_default=3, anchor_flag=False)
    _add_params_args(p)
    p.add_argument('--methods', nargs='+', choices=METHODS, default=list(METHODS), help='Cut methods')
    p.add_argument('--shots-grid', type=int, nargs='+', help='Shot counts (default: from settings)')
    p.add_argument('--repetitions', type=int, help='Repetitions per point (default: from settings)')
    p.set_defaults(func=cmd_bench_variance)

    p = sub.add_parser('bench-cutsize', help='Per-shot variance against the number of cut wires')
    p.add_argument('--ks', type=int, nargs='+', default=[1, 2, 3], help='Separator sizes (default: 1 2 3)')
    p.add_argument('--methods', nargs='+', choices=METHODS, default=list(METHODS), help='Cut methods')
    p.add_argument('--shots', type=int, default=100000, help='Shots per instance (default: 100000)')
    p.add_argument('--p', type=int, default=1, help='QAOA layers (default: 1)')
    p.add_argument('--n', type=int, default=5, help='Vertices per cluster (default: 5)')
    p.set_defaults(func=cmd_bench_cutsize)

    p = sub.add_parser('qaoa-opt', help='Optimise QAOA parameters')
    _add_graph_args(p)
    _add_params_args(p)
    p.add_argument('--evaluator', choices=('exact',) + METHODS, default='exact',
                   help='Cost evaluator (default: exact)')
    p.add_argument('--shots', type=int, default=10000, help='Shots per cut evaluation (default: 10000)')
    p.set_defaults(func=cmd_qaoa_opt)

    p = sub.add_parser('sample', help='Sample bitstrings from the cut circuit')
    _add_graph_args(p)
    _add_params_args(p)
    p.add_argument('--shots', type=int, default=100000, help='Samples (default: 100000)')
    p.add_argument('--no-cut', action='store_true', help='Sample the uncut circuit')
    p.add_argument('--circuit', type=str, help='Circuit JSON file to sample instead of a QAOA instance')
    p.add_argument('--plan', type=str, help='Cut plan JSON file for --circuit (default: no cuts)')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('scaling', help='Wall time against worker count')
    _add_graph_args(p)
    _add_params_args(p)
    p.add_argument('--worker-counts', type=int, nargs='+', default=[1, 2, 4], help='Worker counts (default: 1 2 4)')
    p.add_argument('--shots', type=int, default=20000, help='Shots (default: 20000)')
    p.add_argument('--method', choices=METHODS, default='randomized', help='Cut method (default: randomized)')
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser('selftest', help='Run the identity, 2-design and unbiasedness checks')
    p.add_argument('--corrupt-pauli', action='store_true', help='Flip the Pauli table signs (negative control)')
    p.add_argument('--design-samples', type=int, default=0,
                   help='Draws for the sampled two-qubit 2-design check (default: skip)')
    p.set_defaults(func=cmd_selftest)

    return parser.parse_args(argv)

def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and map failures to exit codes"""
    args = parse_args(argv)
    set_verbose(args.verbose)
    try:
        settings = load_config(args.config)
        use_settings(settings)
        if settings.debug:
            set_verbose(True)
        if args.workers < 1:
            raise ValueError(f"--workers must be >= 1, got {args.workers}")
        for name, least in (('shots', 1), ('repetitions', 2)):
            value = getattr(args, name, None)
            if value is not None and value < least:
                raise ValueError(f"--{name} must be >= {least}, got {value}")
        return args.func(args)
    except NumericalInvariantError as e:
        logger.error(f"Numerical invariant violated: {e}")
        return EXIT_NUMERICAL
    except VALIDATION_ERRORS as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_INVALID

if __name__ == "__main__":
    sys.exit(main())
