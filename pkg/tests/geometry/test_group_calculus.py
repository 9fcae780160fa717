from __future__ import annotations

import math

import numpy as np
import pytest  # type: ignore

from qabel.algebra.quaternion import Quaternion
from qabel.exceptions import SingularEvaluationError
from qabel.forms.fields import Chart
from qabel.geometry.group_calculus import full_three_form
from qabel.geometry.group_calculus import GroupMap
from qabel.geometry.group_calculus import invariant_three_form
from qabel.geometry.group_calculus import maurer_cartan
from qabel.geometry.group_calculus import s3_constant
from qabel.geometry.group_calculus import scale_three_form
from qabel.integrate.quadrature import QuadratureSpec
from qabel.qa_collections import Tube
from qabel.suites.identities import residual

S3_CONSTANT = 24 * math.pi ** 2


class TestGroupMap:
    def test_inverse(self, group_map: GroupMap, points: np.ndarray) -> None:
        product = group_map.quaternion * group_map.inverse()
        assert np.allclose(product.a.evaluate(points), 1)
        assert np.allclose(product.b.evaluate(points), 0)

    def test_unit_has_norm_one(
        self, group_map: GroupMap, points: np.ndarray
    ) -> None:
        assert np.allclose(group_map.unit().norm2.evaluate(points), 1)

    def test_vanishing_map(self, small_chart: Chart) -> None:
        g = GroupMap(small_chart.z(0), small_chart.z(1))
        with pytest.raises(SingularEvaluationError, match='vanishes') as e:
            g.norm2.evaluate(np.zeros((1, 2), complex))
        assert 'The group map vanishes at an evaluation point!' == str(
            e.value
        )

    def test_inside_excision(self, small_chart: Chart) -> None:
        tube = Tube(center=(0j, 0j), axes=(0, 1), radius=0.1)
        g = GroupMap(small_chart.z(0), small_chart.z(1), (tube,))
        with pytest.raises(SingularEvaluationError, match='excision tube'):
            g.a.evaluate(np.array([[0.05, 0.0]], complex))


class TestMaurerCartan:
    def test_structure_equation(
        self, group_map: GroupMap, points: np.ndarray
    ) -> None:
        omega = maurer_cartan(group_map)
        assert residual(omega.d() + omega.qwedge(omega), points) < 1e-9

    def test_left_invariance(
        self, group_map: GroupMap, points: np.ndarray
    ) -> None:
        moved = group_map.left_multiply(Quaternion(0.3 - 1j, 0.8 + 0.2j))
        difference = maurer_cartan(moved) - maurer_cartan(group_map)
        assert residual(difference, points) < 1e-9


class TestThreeForms:
    def test_split(self, group_map: GroupMap, points: np.ndarray) -> None:
        total = invariant_three_form(group_map) + scale_three_form(group_map)
        assert residual(total - full_three_form(group_map), points) < 1e-8

    def test_invariant_form_is_real_and_closed(
        self, group_map: GroupMap, points: np.ndarray
    ) -> None:
        form = invariant_three_form(group_map)
        assert residual(form - form.conj(), points) < 1e-9
        assert residual(form.d(), points) < 1e-8

    def test_unit_maps_have_no_scale_part(self, small_chart: Chart) -> None:
        z1, z2 = small_chart.z(0), small_chart.z(1)
        norm = (z1.abs2() + z2.abs2() + 1).sqrt()
        g = GroupMap((z1 + 1) / norm, (z2 - small_chart.zbar(0)) / norm)
        points = small_chart.sample(6, seed=1)
        assert residual(scale_three_form(g.unit()), points) < 1e-9


class TestS3Constant:
    @pytest.mark.parametrize(
        ('chart_name', 'reverse', 'sign'),
        [('hopf', False, 1), ('euler', False, 1), ('hopf', True, -1)],
        ids=lambda arg: f'{arg}',
    )
    def test_value(self, chart_name: str, reverse: bool, sign: int) -> None:
        spec = QuadratureSpec(method='gauss-grid', resolution=16)
        result = s3_constant(spec, chart_name, reverse)  # type: ignore
        assert math.isclose(sign * S3_CONSTANT, result.value, rel_tol=1e-8)
        assert math.isclose(2 * math.pi ** 2, result.volume, rel_tol=1e-8)
        assert 16 ** 3 == result.samples
