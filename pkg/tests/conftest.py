import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from holarb import fixture  # noqa: E402


@pytest.fixture(scope="session")
def simple_spec():
    return fixture("simple")


@pytest.fixture(scope="session")
def stronger_spec():
    return fixture("stronger")


@pytest.fixture
def simple(simple_spec):
    return simple_spec.filtration()


@pytest.fixture
def stronger(stronger_spec):
    return stronger_spec.filtration()

