from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest  # type: ignore

from qabel.algebra.quaternion import Quaternion

if TYPE_CHECKING:
    from typing import Any


@pytest.fixture(
    scope='session', params=[0, 1, 7], ids=lambda seed: f'{seed=}'
)
def rng(request: Any) -> np.random.Generator:
    return np.random.default_rng(request.param)


@pytest.fixture()
def quaternions(rng: np.random.Generator) -> Quaternion:
    """Return 50 random quaternions as one array-valued quaternion."""
    parts = rng.normal(size=(4, 50))
    return Quaternion(parts[0] + 1j * parts[1], parts[2] + 1j * parts[3])
