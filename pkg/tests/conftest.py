import numpy as np
import pytest

from focklab.core import TruncationPolicy


@pytest.fixture
def tight_policy():
    """Truncation tight enough that high-order moments keep 1e-10 accuracy."""
    return TruncationPolicy(max_dim=512, tail_tolerance=1e-16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
