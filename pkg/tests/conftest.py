from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from permstab.neumann import NeumannGroup
from permstab.seqgen import SequenceSpec

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def toy_a() -> NeumannGroup:
    """d = 5, 7, 13, 37, ...: small degrees, larger thresholds."""
    return NeumannGroup(SequenceSpec.load(FIXTURES / "toy_a.json"))


@pytest.fixture(scope="session")
def toy_b() -> NeumannGroup:
    """Thresholds 2, 2, 3, 4 for l = 1..4, so L_m stays enumerable."""
    return NeumannGroup(SequenceSpec.load(FIXTURES / "toy_b.json"))
