import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from labelkit.synth import generate_instance


@pytest.fixture
def small_instance():
    return generate_instance(n=8, k=2, seed=7)


@pytest.fixture
def standard_instance():
    return generate_instance(n=30, k=5, seed=11)
