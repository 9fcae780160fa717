from __future__ import annotations

from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.abel.curve import TorusDivisor
from qabel.abel.lattice import Lattice

if TYPE_CHECKING:
    from typing import Any
    from typing import Tuple


@pytest.fixture(
    scope='session',
    params=[1j, 0.3 + 1.1j],
    ids=lambda tau: f'{tau=}',
)
def lattice(request: Any) -> Lattice:
    return Lattice(request.param)


@pytest.fixture(scope='session')
def square_lattice() -> Lattice:
    return Lattice(1j)


@pytest.fixture(scope='session')
def equivalent_pair() -> Tuple[TorusDivisor, TorusDivisor]:
    """Return ``P`` and ``Q`` of degree 2 with equal sums."""
    return (
        TorusDivisor((0.2 + 0.2j, 0.6 + 0.5j)),
        TorusDivisor((0.3 + 0.25j, 0.5 + 0.45j)),
    )


@pytest.fixture(scope='session')
def inequivalent_pair() -> Tuple[TorusDivisor, TorusDivisor]:
    return TorusDivisor((0.2 + 0.3j,)), TorusDivisor((0.6 + 0.7j,))
