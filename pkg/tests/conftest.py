from __future__ import annotations

import numpy as np
import pytest

from armdesign.space import SpaceConfig, random_sample


@pytest.fixture
def space() -> SpaceConfig:
    return SpaceConfig(n_joints=4)


def random_posture(rng: np.random.Generator, n_joints: int) -> np.ndarray:
    return rng.uniform(-2.4, 2.4, size=n_joints)


def random_design(rng: np.random.Generator, cfg: SpaceConfig):
    return random_sample(rng, cfg)
