from __future__ import annotations

from typing import TYPE_CHECKING

import math

import numpy as np
import pytest  # type: ignore

from qabel.exceptions import DomainError
from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.integrate.domains import box_domain
from qabel.integrate.domains import circle_domain
from qabel.integrate.domains import Domain
from qabel.integrate.domains import hopf_shell
from qabel.integrate.domains import line_domain
from qabel.integrate.domains import periodic_distance
from qabel.integrate.domains import s3_domain
from qabel.integrate.domains import tube_distance
from qabel.integrate.domains import volume_density
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import integrate_density
from qabel.integrate.quadrature import QuadratureSpec
from qabel.qa_collections import Tube

if TYPE_CHECKING:
    from qabel.qa_typing import ChartName


def _volume(domain: Domain, resolution: int = 24) -> float:
    spec = QuadratureSpec(method='gauss-grid', resolution=resolution)
    result = integrate_density(
        lambda points, jacobian: volume_density(jacobian, domain.chart.dim),
        domain,
        spec,
    )
    return result.value.real


class TestDomain:
    def test_empty_box(self, line: Chart) -> None:
        with pytest.raises(DomainError, match='positive volume') as e:
            Domain(line, [0, 1], [1, 1], lambda t: (t, t))
        assert 'The parameter box must have positive volume!' == str(e.value)

    def test_parameter_volume(self, line: Chart) -> None:
        domain = box_domain(line, bounds=[(0, 2), (-1, 0.5)])
        assert 2 == domain.dimension
        assert math.isclose(3, domain.parameter_volume)
        assert not domain.singular

    def test_reversed_flips_sign(self, area_form: KForm) -> None:
        domain = box_domain(area_form.chart)
        spec = QuadratureSpec(resolution=4)
        forward = integrate(area_form, domain, spec).value
        backward = integrate(area_form, domain.reversed(), spec).value
        assert abs(forward + backward) < 1e-12


class TestSphere:
    @pytest.mark.parametrize(
        'name', ['hopf', 'euler'], ids=lambda name: f'{name=}'
    )
    def test_volume(self, name: ChartName) -> None:
        domain = s3_domain(Chart(2), name)
        assert math.isclose(2 * math.pi ** 2, _volume(domain), rel_tol=1e-8)

    @pytest.mark.parametrize(
        'name', ['hopf', 'euler'], ids=lambda name: f'{name=}'
    )
    def test_points_on_sphere(self, name: ChartName) -> None:
        domain = s3_domain(Chart(2), name)
        t = domain.lower + np.random.default_rng(0).uniform(
            size=(30, 3)
        ) * (domain.upper - domain.lower)
        points, _ = domain.mapping(t)
        assert np.allclose(np.linalg.norm(points, axis=1), 1)

    def test_wrong_chart(self) -> None:
        with pytest.raises(DomainError, match='dimension 2') as e:
            s3_domain(Chart(3))
        assert 'The sphere S^3 lives in a chart of dimension 2!' == str(
            e.value
        )

    def test_unknown_name(self) -> None:
        with pytest.raises(DomainError, match='Unknown sphere'):
            s3_domain(Chart(2), 'stereographic')  # type: ignore


class TestCurves:
    def test_circle_residue(self, line: Chart) -> None:
        form = KForm(line, 1, {(0,): (line.z(0) - 0.2).reciprocal()})
        spec = QuadratureSpec(method='periodic-grid', resolution=64)
        value = integrate(form, circle_domain(line, 0.2, 0.5), spec).value
        assert abs(value - 2j * math.pi) < 1e-12

    def test_line_area(self) -> None:
        chart = Chart(3, box=((-2.0, 2.0),) * 6)
        form = KForm(chart, 2, {(2, 5): 0.5j})
        spec = QuadratureSpec(resolution=4)
        domain = line_domain(chart, (0.5j, -0.25), (-1.0, 1.0))
        assert math.isclose(4, integrate(form, domain, spec).value.real)


class TestShell:
    def test_boundary_volume(self) -> None:
        chart = Chart(3)
        tube = hopf_shell(chart, 0.5)
        assert 5 == tube.dimension
        expected = 2 * math.pi ** 2 * 0.5 ** 3 * 4
        assert math.isclose(expected, _volume(tube, 12), rel_tol=1e-6)

    def test_shell_volume(self) -> None:
        chart = Chart(3)
        shell = hopf_shell(chart, 0.25, outer=0.5)
        assert 6 == shell.dimension
        expected = math.pi ** 2 / 2 * (0.5 ** 4 - 0.25 ** 4) * 4
        assert math.isclose(expected, _volume(shell, 8), rel_tol=1e-6)

    def test_needs_dimension_3(self) -> None:
        with pytest.raises(DomainError, match='dimension 3'):
            hopf_shell(Chart(2), 0.5)


class TestDistances:
    def test_tube_distance(self) -> None:
        tubes = (Tube((0j, 0j), (0, 1), 0.1), Tube((1 + 0j, 0j), (0, 1), 0.1))
        points = np.array([[0.3 + 0.4j, 0j, 5j], [0.9 + 0j, 0j, 0j]])
        assert np.allclose([0.5, 0.1], tube_distance(points, tubes))

    def test_periodic_distance(self) -> None:
        points = np.array([[0.95 + 0.5j]])
        assert np.allclose([0.1], periodic_distance(points, [0.05 + 0.5j], 1j))
