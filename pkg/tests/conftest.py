import pytest

from oamspdc.fiber import FiberSpec


@pytest.fixture(scope="session")
def fiber():
    return FiberSpec(2.0)
