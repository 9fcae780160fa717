from __future__ import annotations

from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.integrate.quadrature import QuadratureSpec

if TYPE_CHECKING:
    from typing import Any


@pytest.fixture(scope='session')
def line() -> Chart:
    return Chart(1)


@pytest.fixture(scope='session')
def area_form(line: Chart) -> KForm:
    """Return ``(i/2) dz ^ dconj(z) = dx ^ dy``."""
    return KForm(line, 2, {(0, 1): 0.5j})


@pytest.fixture(
    scope='session',
    params=['periodic-grid', 'gauss-grid'],
    ids=lambda method: f'{method=}',
)
def grid_spec(request: Any) -> QuadratureSpec:
    return QuadratureSpec(method=request.param, resolution=32)
