from __future__ import annotations

import numpy as np
import pytest  # type: ignore

from qabel.forms.fields import Chart
from qabel.geometry.bundle import HermitianBundle
from qabel.geometry.bundle import Section
from qabel.geometry.group_calculus import GroupMap
from qabel.suites.samples import random_bundle
from qabel.suites.samples import random_group_map
from qabel.suites.samples import random_section


@pytest.fixture(scope='session')
def small_chart() -> Chart:
    return Chart(2, box=((-0.5, 0.5),) * 4)


@pytest.fixture(scope='session')
def points(small_chart: Chart) -> np.ndarray:
    return small_chart.sample(12, seed=17)


@pytest.fixture(scope='session')
def group_map(small_chart: Chart) -> GroupMap:
    return random_group_map(small_chart, np.random.default_rng(2))


@pytest.fixture(scope='session')
def flat_bundle(small_chart: Chart) -> HermitianBundle:
    return HermitianBundle([[1, 0], [0, 1]], small_chart)


@pytest.fixture(scope='session')
def bundle(small_chart: Chart) -> HermitianBundle:
    return random_bundle(small_chart, np.random.default_rng(6))


@pytest.fixture(scope='session')
def section(small_chart: Chart) -> Section:
    return random_section(small_chart, np.random.default_rng(7))


@pytest.fixture(scope='session')
def holomorphic_section(small_chart: Chart) -> Section:
    return random_section(
        small_chart, np.random.default_rng(8), holomorphic=True, label='sP'
    )
