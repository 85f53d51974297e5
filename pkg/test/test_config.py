#!/usr/bin/env python3
import logging
import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

# Define directory paths
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent

# Add src directory to Python path
sys.path.append(str(ROOT_DIR / 'src'))

from utils.config import ConfigError, Settings, create_example_config, get_settings, load_config, use_settings
from utils.log_setup import set_verbose, setup_project_logging
from utils.seeding import chunk_ranges, derived_generator, derived_seed, master_seed_of, run_all, run_indexed

def write_yaml(path: Path, data) -> Path:
    with open(path, 'w') as f:
        yaml.dump(data, f)
    return path

def test_defaults():
    settings = load_config(None)
    assert settings == Settings()
    assert settings.caps.statevector_qubits == 16
    assert settings.caps.density_qubits == 10
    assert settings.bench.repetitions == 20
    assert settings.optimizer.grid_resolution == 64

def test_yaml_override(tmp_path):
    path = write_yaml(tmp_path / 'config.yaml', {'caps': {'density_qubits': 8}, 'debug': True})
    settings = load_config(str(path))
    assert settings.caps.density_qubits == 8
    assert settings.caps.statevector_qubits == 16
    assert settings.debug

def test_use_settings():
    custom = load_config(None)
    use_settings(custom)
    assert get_settings() is custom

@pytest.mark.parametrize('data', [
    {'network': {'timeout': 3}},
    {'caps': {'gpu_qubits': 30}},
    {'bench': {'repetitions': 1}},
    {'caps': {'density_qubits': 20}},
    ['not', 'a', 'mapping'],
])
def test_invalid_config(tmp_path, data):
    path = write_yaml(tmp_path / 'config.yaml', data)
    with pytest.raises(ConfigError):
        load_config(str(path))

def test_unreadable_config(tmp_path):
    path = tmp_path / 'broken.yaml'
    path.write_text('caps: [unclosed\n', encoding='utf-8')
    with pytest.raises(ConfigError):
        load_config(str(path))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / 'missing.yaml'))

def test_example_config_loads(tmp_path):
    path = create_example_config(tmp_path / 'config.yaml.example')
    assert load_config(str(path)) == Settings()

def test_logging_setup():
    logger = setup_project_logging()
    assert logger.name == 'cutbench'
    assert (ROOT_DIR / 'debug').is_dir()
    set_verbose(True)
    assert logger.isEnabledFor(logging.DEBUG)
    set_verbose(False)
    assert not logger.isEnabledFor(logging.DEBUG)

def test_derived_streams():
    assert derived_seed(5, 1, 2) == derived_seed(5, 1, 2)
    assert derived_seed(5, 1, 2) != derived_seed(5, 2, 1)
    a = derived_generator(9, 3).random(4)
    b = derived_generator(9, 3).random(4)
    assert np.array_equal(a, b)
    assert master_seed_of(12) == 12
    with pytest.raises(ValueError):
        master_seed_of(None)

def test_run_indexed_keeps_order():
    assert [len(r) for r in chunk_ranges(10, 4)] == [4, 4, 2]
    serial = run_indexed(lambda i: i * i, 50, workers=1, chunk_size=7)
    pooled = run_indexed(lambda i: i * i, 50, workers=4, chunk_size=7)
    assert serial == pooled == [i * i for i in range(50)]
    assert run_all([lambda: 1, lambda: 2, lambda: 3], workers=3) == [1, 2, 3]

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
