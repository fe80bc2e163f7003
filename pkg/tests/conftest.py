"""Pytest configuration and shared fixtures."""

from pathlib import Path

import pytest

from reason_cells import ClauseLearningSession, CnfFormula, parse_dimacs


@pytest.fixture
def cnf_files_dir() -> Path:
    """Return the path to the cnf-files test fixtures directory."""
    return Path(__file__).parent / "cnf-files"


@pytest.fixture
def sudoku_files_dir() -> Path:
    """Return the path to the sudoku-files test fixtures directory."""
    return Path(__file__).parent / "sudoku-files"


@pytest.fixture
def load_cnf_file(cnf_files_dir: Path):
    """Factory fixture to parse CNF files by name."""

    def _load(filename: str) -> CnfFormula:
        return parse_dimacs((cnf_files_dir / filename).read_text(encoding="ascii"))

    return _load


@pytest.fixture
def session() -> ClauseLearningSession:
    return ClauseLearningSession()
