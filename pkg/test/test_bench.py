#!/usr/bin/env python3
import json
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

# Define directory paths
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent

# Add src directory to Python path
sys.path.append(str(ROOT_DIR / 'src'))

from bench import (
    Instance, ResultFormatError, ResultRow, ResultTable, clustered_instance, cut_values, fit_log2_slope,
    run_circuit_sample, run_cutsize, run_sample, run_scaling, run_selftest, run_variance, write_trace,
)
from bench.experiments import METHOD_INDEX
from cutbench import main
from cutting import build_plan, estimate, plan_bipartition, save_plan
from qaoa import ClusteredGraphSpec, cluster_partition, generate_clustered_graph, initial_params, maxcut_cost_operator
from sim import Circuit, Gate, MeasureZ, exact_distribution, save_circuit
from utils.seeding import derived_seed

def small_instance(p: int = 1) -> Instance:
    """Three-vertex path: two single-vertex clusters around one separator"""
    graph = generate_clustered_graph(ClusteredGraphSpec(2, 1, 1, p_intra=1.0, p_sep=1.0), 5)
    return Instance(graph, cluster_partition(graph), p, initial_params(p))

def sample_table() -> ResultTable:
    rows = [
        ResultRow('a', 1, 1, 'randomized', 100, 0.1, 0.01, 2.5, 0.12, 0.31),
        ResultRow('b', 2, 1, 'randomized', 100, -1 / 3, 0.02, 10.0, 0.12, 0.0),
        ResultRow('c', 3, 1, 'randomized', 100, 0.3, 0.03, 40.0, 0.12, 1e-7),
    ]
    return ResultTable(rows, {'seed': 1})

def test_csv_roundtrip(tmp_path):
    table = sample_table()
    path = tmp_path / 'rows.csv'
    table.write(path, 'csv')
    assert ResultTable.read_csv(path).rows == table.rows
    with open(path.with_suffix('.meta.json'), 'r', encoding='utf-8') as f:
        assert json.load(f) == {'seed': 1}

def test_json_roundtrip(tmp_path):
    table = sample_table()
    path = tmp_path / 'rows.json'
    table.write(path, 'json')
    loaded = ResultTable.read_json(path)
    assert loaded.rows == table.rows
    assert loaded.metadata == table.metadata

def test_bad_csv_header(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('experiment,mean\nx,1.0\n', encoding='utf-8')
    with pytest.raises(ResultFormatError):
        ResultTable.read_csv(path)
    with pytest.raises(ResultFormatError):
        sample_table().write(tmp_path / 'x.parquet', 'parquet')

def test_without_timing():
    stripped = sample_table().without_timing()
    assert all(r.wall_time == 0.0 for r in stripped.rows)
    assert [r.mean for r in stripped.rows] == [r.mean for r in sample_table().rows]

def test_write_trace(tmp_path):
    path = tmp_path / 'trace.csv'
    write_trace([0.5, 0.25, -0.125], path)
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines == ['step,cost', '0,0.5', '1,0.25', '2,-0.125']

def test_log2_slope():
    assert fit_log2_slope(sample_table(), 'randomized') == pytest.approx(2.0)
    single = ResultTable([sample_table().rows[0]])
    with pytest.raises(ValueError):
        fit_log2_slope(single, 'randomized')

def test_cut_values():
    path = nx.path_graph(3)
    assert list(cut_values(path, np.arange(8))) == [0, 1, 2, 1, 1, 2, 1, 0]

def test_run_variance():
    instance = small_instance()
    table = run_variance(instance, ['randomized', 'pauli'], [200, 400], seed=3, repetitions=3)
    assert len(table) == 4
    assert table.metadata['repetitions'] == 3
    for row in table.rows:
        assert row.exact == pytest.approx(instance.exact())
        assert row.stderr >= 0
        assert row.variance > 0
    again = run_variance(instance, ['randomized', 'pauli'], [200, 400], seed=3, repetitions=3)
    assert [r.mean for r in again.rows] == [r.mean for r in table.rows]

def test_run_cutsize_cuts_k_wires():
    table = run_cutsize([1, 2, 3], ['randomized', 'pauli'], 300, seed=4, n=2)
    assert len(table) == 6
    for method in ('randomized', 'pauli'):
        assert [row.k_total for row in table.for_method(method)] == [1, 2, 3]
    assert table.rows[0].experiment_id == "cutsize-randomized-k1"

@pytest.mark.parametrize('p', [1, 2])
def test_joint_separator_groups(p):
    for k in (1, 2, 3):
        instance = clustered_instance(2, 2, k, p, seed=6)
        randomized, pauli = instance.plan('randomized'), instance.plan('pauli')
        assert [g.size for g in randomized.groups] == [k] * (2 * p - 1)
        # one joint group of k wires costs 2^(k+1)+1 against 4^k wire by wire
        assert randomized.overhead() == (2 ** (k + 1) + 1) ** (2 * p - 1)
        assert pauli.overhead() == 4 ** (k * (2 * p - 1))
        assert (randomized.overhead() < pauli.overhead()) == (k >= 2)

def test_wide_separator_variance_ordering():
    instance = clustered_instance(2, 2, 3, 1, seed=9)
    table = run_variance(instance, ['randomized', 'pauli'], [2000], seed=12, repetitions=2)
    randomized, pauli = (table.for_method(m)[0] for m in ('randomized', 'pauli'))
    assert randomized.k_total == pauli.k_total == 3
    assert randomized.variance < pauli.variance

def test_run_sample():
    instance = small_instance()
    report = run_sample(instance, 2000, seed=8)
    assert report.overhead == 5
    assert report.bound == pytest.approx(1 / 10)
    assert report.exact_hit_probability is not None
    probs = exact_distribution(instance.circuit())
    good = cut_values(instance.graph, np.arange(probs.size)) >= report.mean_cut - 1e-9
    assert report.exact_hit_probability >= probs[good].sum() / report.overhead - 1e-12
    sigma = np.sqrt(report.exact_hit_probability * (1 - report.exact_hit_probability) / 2000)
    assert abs(report.hit_rate - report.exact_hit_probability) <= 5 * sigma + 1e-9
    assert run_sample(instance, 2000, seed=8).bitstrings == report.bitstrings

def test_run_scaling():
    table, identical = run_scaling(small_instance(), [1, 2, 4], 1200, seed=2)
    assert identical
    assert len(table) == 3
    assert table.metadata['speedup'][0] == pytest.approx(1.0)
    assert len({r.mean for r in table.rows}) == 1

def test_selftest_passes():
    report = run_selftest()
    assert report.checks
    assert report.passed, [c.name for c in report.failures()]

def test_cli_gen_graph_is_reproducible(tmp_path):
    first, second = tmp_path / 'g1.json', tmp_path / 'g2.json'
    for path in (first, second):
        assert main(['--seed', '7', '--out', str(path), 'gen-graph', '--r', '3', '--n', '4', '--k', '1']) == 0
    assert first.read_bytes() == second.read_bytes()

def test_cli_exact_zero_angles(tmp_path):
    out = tmp_path / 'exact.json'
    assert main(['--seed', '3', '--out', str(out), 'exact', '--gammas', '0', '--betas', '0']) == 0
    data = json.loads(out.read_text(encoding='utf-8'))
    assert data['cost'] == pytest.approx(0.0, abs=1e-12)
    assert data['num_vertices'] == 9

def test_cli_validation_errors(tmp_path):
    # 17 vertices is over the exact-evaluation cap
    assert main(['--seed', '3', 'exact', '--r', '3', '--n', '5', '--k', '1']) == 1
    assert main(['cut-estimate', '--shots', '10']) == 1
    assert main(['--seed', '1', 'cut-estimate', '--shots', '0']) == 1
    assert main(['--seed', '1', '--workers', '0', 'cut-estimate']) == 1
    assert main(['--seed', '1', 'exact', '--gammas', '0.1', '0.2', '--betas', '0.1']) == 1
    assert main(['--config', str(tmp_path / 'missing.yaml'), 'selftest']) == 1

def test_cli_corrupt_selftest_exits_numerical(tmp_path):
    out = tmp_path / 'selftest.json'
    assert main(['--out', str(out), 'selftest', '--corrupt-pauli']) == 2
    assert json.loads(out.read_text(encoding='utf-8'))['passed'] is False

def test_cli_cut_estimate_is_byte_stable(tmp_path):
    base = ['--seed', '11', '--omit-timing']
    tail = ['cut-estimate', '--r', '2', '--n', '2', '--k', '1', '--shots', '2000']
    paths = [tmp_path / f'est{i}.json' for i in range(3)]
    for path, workers in zip(paths, (1, 1, 4)):
        assert main(base + ['--workers', str(workers), '--out', str(path)] + tail) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    # the shot streams do not depend on the worker count
    assert paths[0].read_bytes() == paths[2].read_bytes()

def test_cli_bench_variance_is_byte_stable(tmp_path):
    outputs = []
    for name in ('v1.csv', 'v2.csv'):
        path = tmp_path / name
        code = main([
            '--seed', '5', '--omit-timing', '--out', str(path), 'bench-variance',
            '--r', '2', '--n', '2', '--k', '1', '--p', '1', '--shots-grid', '100', '200', '--repetitions', '2',
        ])
        assert code == 0
        outputs.append((path.read_bytes(), path.with_suffix('.meta.json').read_bytes()))
    assert outputs[0] == outputs[1]
    assert ResultTable.read_csv(tmp_path / 'v1.csv').rows[0].wall_time == 0.0

def path_graph_args() -> list:
    return ['--r', '2', '--n', '1', '--k', '1', '--p-sep', '1.0']

def test_cli_qaoa_opt_writes_trace(tmp_path):
    out = tmp_path / 'params.json'
    assert main(['--seed', '3', '--out', str(out), 'qaoa-opt'] + path_graph_args()) == 0
    data = json.loads(out.read_text(encoding='utf-8'))
    lines = out.with_suffix('.trace.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'step,cost'
    # the starting cost plus one row per accepted step
    assert len(lines) == data['iterations'] + 2
    assert data['final_cost'] == pytest.approx(data['exact_final_cost'], abs=1e-9)
    assert 'grid_optimum' in data
    assert main(['qaoa-opt'] + path_graph_args()) == 1
    assert main(['--seed', '3', 'qaoa-opt', '--p', '2', '--gammas', '0.1', '--betas', '0.2']) == 1
    assert main(['--seed', '3', 'qaoa-opt', '--evaluator', 'pauli', '--shots', '0']) == 1

def test_cli_sample_is_byte_stable(tmp_path):
    outputs = []
    for name in ('s1.txt', 's2.txt'):
        path = tmp_path / name
        code = main(
            ['--seed', '5', '--omit-timing', '--out', str(path), 'sample', '--shots', '2000'] + path_graph_args()
        )
        assert code == 0
        outputs.append((path.read_bytes(), path.with_suffix('.report.json').read_bytes()))
    assert outputs[0] == outputs[1]
    lines = (tmp_path / 's1.txt').read_text(encoding='utf-8').splitlines()
    assert len(lines) == 2000
    assert all(len(line) == 3 and set(line) <= {'0', '1'} for line in lines)
    report = json.loads(outputs[0][1])
    assert set(report) == {
        'shots', 'mean_cut', 'hit_rate', 'bound', 'overhead', 'num_edges', 'passed', 'exact_hit_probability',
    }
    assert report['overhead'] == 5 and report['passed'] is True

def small_circuit() -> Circuit:
    return Circuit(3, (
        Gate('RY', (0,), 0.7), Gate('RY', (1,), 1.2), Gate('CNOT', (0, 1)), Gate('RZZ', (0, 1), 0.5),
        Gate('CNOT', (1, 2)), Gate('RY', (2,), 0.9), Gate('RZZ', (1, 2), 0.8),
        MeasureZ((0, 1, 2)),
    ))

def test_run_circuit_sample():
    circuit = small_circuit()
    uncut = run_circuit_sample(circuit, build_plan(circuit, []), 100, seed=2)
    assert uncut.overhead == 1
    assert uncut.min_ratio == pytest.approx(1.0)
    cut = run_circuit_sample(circuit, plan_bipartition(circuit, [0, 1], [1, 2]), 100, seed=2)
    assert cut.overhead == 5
    assert cut.passed
    pauli = run_circuit_sample(circuit, plan_bipartition(circuit, [0, 1], [1, 2], method='pauli'), 100, seed=2)
    assert pauli.min_ratio is None

def test_cli_sample_from_circuit_file(tmp_path):
    circuit = small_circuit()
    circuit_path, plan_path = tmp_path / 'circuit.json', tmp_path / 'plan.json'
    save_circuit(circuit, circuit_path)
    save_plan(plan_bipartition(circuit, [0, 1], [1, 2]), plan_path)
    out = tmp_path / 'bits.txt'
    code = main([
        '--seed', '4', '--out', str(out), 'sample', '--circuit', str(circuit_path), '--plan', str(plan_path),
        '--shots', '500',
    ])
    assert code == 0
    assert len(out.read_text(encoding='utf-8').splitlines()) == 500
    report = json.loads(out.with_suffix('.report.json').read_text(encoding='utf-8'))
    assert report['overhead'] == 5
    assert report['min_ratio'] >= 1 / 5 - 1e-9
    assert main(['--seed', '4', 'sample', '--plan', str(plan_path)]) == 1
    assert main(['--seed', '4', 'sample', '--circuit', str(tmp_path / 'missing.json')]) == 1

def test_cli_scaling_is_byte_stable(tmp_path):
    outputs = []
    for name in ('w1.json', 'w2.json'):
        path = tmp_path / name
        code = main([
            '--seed', '9', '--omit-timing', '--format', 'json', '--out', str(path), 'scaling',
            '--worker-counts', '1', '2', '--shots', '500',
        ] + path_graph_args())
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    table = ResultTable.read_json(tmp_path / 'w1.json')
    assert len(table) == 2
    assert 'speedup' not in table.metadata
    assert all(row.wall_time == 0.0 for row in table.rows)

def test_cli_bench_cutsize_reports_both_slopes(tmp_path):
    outputs = []
    for name in ('c1.json', 'c2.json'):
        path = tmp_path / name
        code = main([
            '--seed', '1', '--omit-timing', '--format', 'json', '--out', str(path), 'bench-cutsize',
            '--ks', '1', '2', '3', '--shots', '300', '--n', '2',
        ])
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    table = ResultTable.read_json(tmp_path / 'c1.json')
    assert {'log2_slope_randomized', 'log2_slope_pauli'} <= set(table.metadata)
    assert sorted(row.k_total for row in table.rows) == [1, 1, 2, 2, 3, 3]

@pytest.mark.slow
def test_nine_qubit_two_layer_estimates_match_exact():
    instance = clustered_instance(2, 3, 3, 2, seed=21)
    assert instance.graph.number_of_nodes() == 9
    circuit = instance.circuit()
    obs = maxcut_cost_operator(instance.graph)
    exact = instance.exact()
    for method in ('randomized', 'pauli'):
        result = estimate(circuit, instance.plan(method), obs, 20000, derived_seed(21, METHOD_INDEX[method]))
        assert abs(result.mean - exact) <= 4 * result.stderr

@pytest.mark.slow
def test_cutsize_slopes():
    table = run_cutsize([1, 2, 3], ['randomized', 'pauli'], 20000, seed=1, n=5)
    assert fit_log2_slope(table, 'randomized') == pytest.approx(2.0, abs=0.8)
    assert fit_log2_slope(table, 'pauli') == pytest.approx(4.0, abs=0.8)
    for randomized, pauli in zip(table.for_method('randomized'), table.for_method('pauli')):
        if randomized.k_total >= 2:
            assert randomized.variance < pauli.variance

@pytest.mark.slow
def test_default_variance_instance_orders_methods():
    instance = clustered_instance(2, 3, 3, 2, seed=1)
    table = run_variance(instance, ['randomized', 'pauli'], [20000], seed=1, repetitions=5)
    randomized, pauli = (table.for_method(m)[0] for m in ('randomized', 'pauli'))
    assert randomized.variance < pauli.variance
    assert randomized.stderr < pauli.stderr

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
