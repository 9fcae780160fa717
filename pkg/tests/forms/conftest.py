from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest  # type: ignore

from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.suites.samples import random_form
from qabel.suites.samples import random_polynomial

if TYPE_CHECKING:
    from typing import Any

    from qabel.forms.fields import ScalarField


@pytest.fixture(
    scope='session', params=[1, 2, 3], ids=lambda dim: f'{dim=}'
)
def chart(request: Any) -> Chart:
    return Chart(request.param)


@pytest.fixture(scope='session')
def chart_2() -> Chart:
    return Chart(2)


@pytest.fixture(scope='session')
def points_2(chart_2: Chart) -> np.ndarray:
    return chart_2.sample(20, seed=3, margin=0.1)


@pytest.fixture(scope='session')
def polynomial(chart_2: Chart) -> ScalarField:
    return random_polynomial(chart_2, np.random.default_rng(5), degree=3)


@pytest.fixture(scope='session')
def one_form(chart_2: Chart) -> KForm:
    return random_form(chart_2, 1, np.random.default_rng(11))


@pytest.fixture(scope='session')
def two_form(chart_2: Chart) -> KForm:
    return random_form(chart_2, 2, np.random.default_rng(13))
