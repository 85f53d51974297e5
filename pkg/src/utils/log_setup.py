import logging
import sys
from pathlib import Path

def setup_project_logging(level: int = logging.INFO) -> logging.Logger:
    """Configure and return logger for the cut-bench project"""
    # Get project root directory
    SCRIPT_DIR = Path(__file__).parent
    ROOT_DIR = SCRIPT_DIR.parent.parent

    # Create debug directory if it doesn't exist
    debug_dir = ROOT_DIR / 'debug'
    debug_dir.mkdir(exist_ok=True)

    # Log to file and to stderr; stdout carries command output
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(debug_dir / 'debug_log.txt', encoding='utf-8'),
            logging.StreamHandler(sys.stderr)
        ]
    )
    return logging.getLogger('cutbench')

def set_verbose(verbose: bool) -> None:
    """Switch the project logger between INFO and DEBUG"""
    level = logging.DEBUG if verbose else logging.INFO
    logging.getLogger().setLevel(level)
    logging.getLogger('cutbench').setLevel(level)
