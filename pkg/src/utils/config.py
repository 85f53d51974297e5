import yaml
from dataclasses import dataclass, field, asdict, replace
from pathlib import Path
from typing import Dict, List, Optional
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

class ConfigError(Exception):
    """Custom exception for configuration errors"""
    pass

@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-10
    hermitian: float = 1e-10
    trace: float = 1e-10
    eigenvalue_floor: float = -1e-9
    trace_drift: float = 1e-8
    identity_residual: float = 1e-12
    unbiasedness: float = 1e-10
    unitarity: float = 1e-10
    symplectic_check: bool = True

@dataclass(frozen=True)
class Caps:
    statevector_qubits: int = 16
    density_qubits: int = 10
    unitary_qubits: int = 10
    clifford_min_k: int = 1
    clifford_max_k: int = 12
    superop_max_dim: int = 32
    exact_cut_max_groups: int = 6
    cli_exact_qubits: int = 13

@dataclass(frozen=True)
class OptimizerSettings:
    step_exact: float = 1e-3
    step_shots: float = 0.05
    learning_rate: float = 0.1
    max_halvings: int = 8
    max_iterations: int = 100
    gradient_tolerance: float = 1e-6
    grid_resolution: int = 64
    warm_start_resolution: int = 16

@dataclass(frozen=True)
class BenchSettings:
    shots_grid: List[int] = field(default_factory=lambda: [1000, 10000, 100000, 1000000])
    repetitions: int = 20
    connectivity_retries: int = 100
    chunk_size: int = 512

@dataclass(frozen=True)
class Settings:
    """Central record of tolerances, caps and defaults"""
    tolerances: Tolerances = field(default_factory=Tolerances)
    caps: Caps = field(default_factory=Caps)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    bench: BenchSettings = field(default_factory=BenchSettings)
    debug: bool = False

_SECTIONS = {
    'tolerances': Tolerances,
    'caps': Caps,
    'optimizer': OptimizerSettings,
    'bench': BenchSettings,
}

_active = Settings()

def get_settings() -> Settings:
    """Return the settings record in effect"""
    return _active

def use_settings(settings: Settings) -> None:
    """Install a settings record for the rest of the process"""
    global _active
    _active = settings

def load_config(config_path: Optional[str] = None) -> Settings:
    """
    Load settings from a yaml file

    Args:
        config_path: Path to config file; None returns the defaults

    Returns:
        Settings record with file values layered over the defaults

    Raises:
        ConfigError: If config file cannot be loaded or is invalid
    """
    if config_path is None:
        return Settings()
    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing config file: {e}")
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {config_path}")

    if not isinstance(config, dict):
        raise ConfigError(f"Config file must hold a mapping, got {type(config).__name__}")

    unknown = [name for name in config if name not in _SECTIONS and name != 'debug']
    if unknown:
        raise ConfigError(f"Unknown config sections: {', '.join(unknown)}")

    sections = {}
    for name, cls in _SECTIONS.items():
        section = config.get(name) or {}
        validate_config_section(section, cls, name)
        sections[name] = replace(cls(), **section)

    settings = Settings(debug=bool(config.get('debug', False)), **sections)
    check_settings(settings)
    logger.info(f"Loaded settings from {config_path}")
    return settings

def validate_config_section(section: Dict, section_cls: type, section_name: str):
    """
    Validate that a config section only names known fields

    Args:
        section: Config section to validate
        section_cls: Dataclass describing the section
        section_name: Name of section for error messages

    Raises:
        ConfigError: If any unknown fields are present
    """
    if not isinstance(section, dict):
        raise ConfigError(f"Section {section_name} must be a mapping")
    known = set(section_cls.__dataclass_fields__)
    unknown_fields = [name for name in section if name not in known]
    if unknown_fields:
        raise ConfigError(
            f"Unknown fields in {section_name} section: {', '.join(unknown_fields)}"
        )

def check_settings(settings: Settings) -> None:
    """Reject settings that would break the numeric contracts"""
    caps = settings.caps
    if not 1 <= caps.density_qubits <= caps.statevector_qubits:
        raise ConfigError("caps.density_qubits must be between 1 and caps.statevector_qubits")
    if not 1 <= caps.clifford_min_k <= caps.clifford_max_k:
        raise ConfigError("caps.clifford_min_k must not exceed caps.clifford_max_k")
    opt = settings.optimizer
    if opt.step_exact <= 0 or opt.step_shots <= 0 or opt.learning_rate <= 0:
        raise ConfigError("optimizer steps and learning rate must be positive")
    if any(int(s) < 1 for s in settings.bench.shots_grid):
        raise ConfigError("bench.shots_grid entries must be >= 1")
    if settings.bench.repetitions < 2:
        raise ConfigError("bench.repetitions must be at least 2")

def create_example_config(example_path: Path = Path('config.yaml.example')) -> Path:
    """Create example config file if it doesn't exist"""
    defaults = Settings()
    example_config = {name: asdict(getattr(defaults, name)) for name in _SECTIONS}
    example_config['debug'] = False

    if not example_path.exists():
        with open(example_path, 'w') as f:
            yaml.dump(example_config, f, default_flow_style=False)
    return example_path
