from .results import ResultFormatError, ResultRow, ResultTable, COLUMNS, write_trace
from .experiments import (
    Instance, SampleReport, clustered_instance, run_variance, run_cutsize, fit_log2_slope,
    run_sample, run_scaling, cut_values, CircuitSampleReport, run_circuit_sample,
)
from .selftest import Check, SelftestReport, run_selftest, unbiasedness_suite, random_bipartite_circuit

__all__ = [
    'ResultFormatError', 'ResultRow', 'ResultTable', 'COLUMNS', 'write_trace',
    'Instance', 'SampleReport', 'clustered_instance', 'run_variance', 'run_cutsize', 'fit_log2_slope',
    'run_sample', 'run_scaling', 'cut_values', 'CircuitSampleReport', 'run_circuit_sample',
    'Check', 'SelftestReport', 'run_selftest', 'unbiasedness_suite', 'random_bipartite_circuit',
]
