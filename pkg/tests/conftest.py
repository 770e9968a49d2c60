"""Shared fixtures: the small matrices used throughout the suite."""
from pathlib import Path

import pytest

from src.matrices import BinaryMatrix, load_matrix

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def h3():
    """Single parity check of length 3."""
    return load_matrix(str(DATA_DIR / "h3.txt"))


@pytest.fixture
def hrep():
    """Repetition code of length 3."""
    return load_matrix(str(DATA_DIR / "hrep.txt"))


@pytest.fixture
def i3():
    return BinaryMatrix.identity(3)


@pytest.fixture
def hamming():
    return load_matrix(str(DATA_DIR / "hamming74.alist"))


@pytest.fixture
def ldpc():
    """(3,4)-regular 9x12 parity-check matrix."""
    return load_matrix(str(DATA_DIR / "ldpc12.txt"))


@pytest.fixture
def chain5():
    """Repetition code of length 5: the fundamental cone is the diagonal ray."""
    return BinaryMatrix.from_rows([
        [1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 0, 1, 1],
    ])
