import sys
from pathlib import Path

import pytest

# Add src directory to Python path
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent
sys.path.insert(0, str(ROOT_DIR / 'src'))

from utils.config import Settings, use_settings

def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical checks at full shot counts")

@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts and ends on the default settings record"""
    use_settings(Settings())
    yield
    use_settings(Settings())
