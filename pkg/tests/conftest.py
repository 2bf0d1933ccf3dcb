from pathlib import Path

import pytest

import dycoh

DATA = Path(dycoh.__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA
