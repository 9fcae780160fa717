from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest  # type: ignore

from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.forms.kform import MatForm
from qabel.geometry.bundle import chern_connection
from qabel.geometry.bundle import Connection
from qabel.geometry.bundle import flat_connection_from_section
from qabel.geometry.bundle import HermitianBundle
from qabel.geometry.bundle import Section
from qabel.geometry.chern_simons import check_test_form
from qabel.geometry.chern_simons import cs_03
from qabel.geometry.chern_simons import cs_composition_defect
from qabel.geometry.chern_simons import cs_flat
from qabel.geometry.chern_simons import cs_pair
from qabel.geometry.chern_simons import cs_t_integral
from qabel.geometry.chern_simons import cs_transgression
from qabel.geometry.chern_simons import tubular_limit
from qabel.integrate.quadrature import QuadratureSpec
from qabel.suites.currents import composition_cases
from qabel.suites.currents import random_matrix_form
from qabel.suites.identities import residual
from qabel.suites.samples import random_section

if TYPE_CHECKING:
    from typing import List
    from typing import Tuple

    Case = Tuple[Tuple[Connection, Connection, Connection], KForm]


class TestTransgression:
    def test_vanishes_on_the_diagonal(
        self, bundle: HermitianBundle, points: np.ndarray
    ) -> None:
        connection = chern_connection(bundle)
        form = cs_transgression(connection, connection)
        assert residual(form, points) < 1e-12

    def test_matches_t_integral(
        self, bundle: HermitianBundle, points: np.ndarray
    ) -> None:
        first = chern_connection(bundle)
        second = first.shifted(
            random_matrix_form(first.chart, np.random.default_rng(1))
        )
        closed = cs_transgression(first, second).evaluate(points)
        numeric = cs_t_integral(first, second, points, nodes=8)
        assert np.allclose(closed, numeric, atol=1e-9)

    def test_flat_pair(
        self, bundle: HermitianBundle, section: Section, points: np.ndarray
    ) -> None:
        other = random_section(
            section.chart, np.random.default_rng(9), label='t'
        )
        first = flat_connection_from_section(bundle, section)
        second = flat_connection_from_section(bundle, other)
        difference = cs_transgression(first, second) - cs_flat(first, second)
        assert residual(difference, points) < 1e-8

    def test_03_part(self) -> None:
        chart = Chart(3, box=((-0.5, 0.5),) * 6)
        rng = np.random.default_rng(12)
        bundle = HermitianBundle([[1, 0], [0, 1]], chart)
        s = random_section(chart, rng, holomorphic=True)
        first = chern_connection(bundle)
        second = flat_connection_from_section(bundle, s)
        points = chart.sample(6, seed=4)
        part = cs_transgression(first, second).type_project(0, 3)
        assert residual(part - cs_03(first, second), points) < 1e-9


class TestTestForms:
    def test_degree(self) -> None:
        chart = Chart(3)
        with pytest.raises(DomainError, match='must be a 3-form') as e:
            check_test_form(KForm.covector(chart, 0))
        assert 'The test form must be a 3-form!' == str(e.value)

    def test_type(self) -> None:
        chart = Chart(3)
        tau = KForm(chart, 3, {(0, 4, 5): 1.0})
        with pytest.raises(DomainError, match='must be of type') as e:
            check_test_form(tau)
        assert 'The test form must be of type (3, 0) + (2, 1)!' == str(
            e.value
        )

    def test_accepts_21(self) -> None:
        chart = Chart(3)
        check_test_form(KForm(chart, 3, {(0, 1, 5): 1.0, (0, 1, 2): 1.0}))

    def test_empty_pairing(self) -> None:
        chart = Chart(3)
        connection = Connection(MatForm.zeros(chart, 1))
        tau = KForm(chart, 3, {(0, 1, 2): 1.0})
        result = cs_pair(connection, connection, tau, QuadratureSpec())
        assert 0 == result.value
        assert 0 == result.samples


class TestTubularLimit:
    def test_needs_four_radii(self) -> None:
        chart = Chart(3)
        connection = chern_connection(
            HermitianBundle([[1, 0], [0, 1]], chart)
        )
        tau = KForm(chart, 3, {(0, 1, 2): 1.0})
        with pytest.raises(QuadratureError, match='at least 4 radii') as e:
            tubular_limit(
                connection,
                connection,
                tau,
                (0.2, 0.1, 0.05),
                chart.constant(0),
                QuadratureSpec(),
            )
        assert 'A stable tubular fit needs at least 4 radii!' == str(e.value)


class TestComposition:
    @pytest.fixture(scope='class')
    def cases(self) -> List[Case]:
        return composition_cases(Chart(3), np.random.default_rng(45), 5)

    def test_no_flat_base_point(self, cases: List[Case]) -> None:
        points = Chart(3).sample(6, seed=5)
        assert 5 == len(cases)
        for triple, _ in cases:
            assert all(
                residual(connection.theta, points) > 1e-3
                for connection in triple
            )

    def test_fresh_closed_test_forms(self, cases: List[Case]) -> None:
        points = Chart(3).sample(6, seed=5)
        taus = [tau for _, tau in cases]
        for tau in taus:
            check_test_form(tau)
            assert residual(tau.d(), points) < 1e-10
        for first, second in zip(taus, taus[1:]):
            assert residual(first - second, points) > 1e-3

    @pytest.mark.slow
    def test_defect_vanishes(self, cases: List[Case]) -> None:
        spec = QuadratureSpec(method='gauss-grid', resolution=6)
        for triple, tau in cases:
            scale = abs(cs_pair(triple[0], triple[1], tau, spec).value)
            defect = cs_composition_defect(triple, tau, spec)
            assert abs(defect.value) < 1e-6 * max(scale, 1.0)
