from .circuit import (
    Circuit, Gate, MeasureZ, PrepareBasis, ChannelSlot, SimulationError, CapExceededError,
    load_circuit, save_circuit, format_bitstring, bit_of,
)
from .observables import DiagonalObservable, parity_observable, zz_observable, edge_sum_observable
from .statevector import (
    Statevector, ShotResult, apply_gate, apply_unitary, run_shot, measure, reset,
    exact_distribution, exact_expectation, final_state,
)
from .density import DensityMatrix, run_density, density_expectation, reduced_density

__all__ = [
    'Circuit', 'Gate', 'MeasureZ', 'PrepareBasis', 'ChannelSlot',
    'SimulationError', 'CapExceededError', 'load_circuit', 'save_circuit',
    'format_bitstring', 'bit_of',
    'DiagonalObservable', 'parity_observable', 'zz_observable', 'edge_sum_observable',
    'Statevector', 'ShotResult', 'apply_gate', 'apply_unitary', 'run_shot', 'measure', 'reset',
    'exact_distribution', 'exact_expectation', 'final_state',
    'DensityMatrix', 'run_density', 'density_expectation', 'reduced_density',
]
