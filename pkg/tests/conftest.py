import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modpair.linalg import Metric
from modpair.pair import Subspace, analyze_pair


@pytest.fixture(scope="session")
def euclid_pa():
    metric = Metric.identity(3)
    k = Subspace.from_vectors([[1.0, 1.0, 1.0]], metric)
    l = Subspace.from_vectors([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], metric)
    return analyze_pair(k, l)


@pytest.fixture(scope="session")
def generic_pa():
    from modpair.pair import random_pair

    k, l = random_pair(6, 3, 3, seed=424242)
    return analyze_pair(k, l)
