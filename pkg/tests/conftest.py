import numpy as np
import pytest

from slfv.params import ModelParams


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


@pytest.fixture
def desk_params() -> ModelParams:
    """The standard desk-scale parameter set used across the suite."""
    return ModelParams(
        L=256.0,
        alpha=0.5,
        R_s=1.0,
        R_B=1.0,
        u_s=0.3,
        u_B=0.3,
        rho=64.0,
        r=0.1,
        lambda_s={2: 1.0},
        lambda_B={2: 1.0},
        beta=0.85,
    )


@pytest.fixture
def small_params() -> ModelParams:
    """A smaller torus for cheap statistical tests."""
    return ModelParams(
        L=64.0,
        alpha=0.5,
        R_s=1.0,
        R_B=1.0,
        u_s=0.3,
        u_B=0.3,
        rho=16.0,
        r=0.1,
        lambda_s={2: 1.0},
        lambda_B={2: 1.0},
        beta=0.8,
    )
