import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def interval64():
    from eigenweight import build_grid
    return build_grid("interval", [1.0], [64])
