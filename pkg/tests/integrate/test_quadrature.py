from __future__ import annotations

import math

import numpy as np
import pytest  # type: ignore

from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.integrate.domains import box_domain
from qabel.integrate.domains import torus_domain
from qabel.integrate.quadrature import extrapolate
from qabel.integrate.quadrature import fit_decay
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import QuadratureSpec
from qabel.qa_collections import Partial
from qabel.qa_collections import Tube


class TestQuadratureSpec:
    def test_unknown_method(self) -> None:
        with pytest.raises(DomainError, match='Unknown quadrature') as e:
            QuadratureSpec(method='simpson')  # type: ignore
        assert "Unknown quadrature method 'simpson'!" == str(e.value)

    @pytest.mark.parametrize(
        'schedule',
        [(0.1, 0.2), (0.1, 0.1), (0.2, -0.1)],
        ids=lambda schedule: f'{schedule=}',
    )
    def test_schedule_must_decrease(self, schedule: tuple) -> None:
        with pytest.raises(DomainError, match='strictly decreasing'):
            QuadratureSpec(schedule=schedule, extrapolate=False)

    def test_two_radii_cannot_extrapolate(self) -> None:
        with pytest.raises(DomainError, match='at least 3') as e:
            QuadratureSpec(schedule=(0.2, 0.1))
        assert 'Extrapolation needs at least 3 excision radii!' == str(
            e.value
        )

    def test_qmc_needs_replicates(self) -> None:
        with pytest.raises(DomainError, match='2 replicates'):
            QuadratureSpec(method='qmc', replicates=1)

    def test_coarse(self) -> None:
        spec = QuadratureSpec(resolution=33, seed=4)
        assert 16 == spec.coarse().resolution
        assert 4 == spec.coarse().seed


class TestIntegrate:
    def test_box_area(
        self, area_form: KForm, grid_spec: QuadratureSpec
    ) -> None:
        result = integrate(area_form, box_domain(area_form.chart), grid_spec)
        assert math.isclose(4.0, result.value.real, abs_tol=1e-12)
        assert abs(result.value.imag) < 1e-12
        assert 32 ** 2 == result.samples

    def test_torus_area(self, area_form: KForm) -> None:
        tau = 0.3 + 1.1j
        spec = QuadratureSpec(resolution=8)
        result = integrate(area_form, torus_domain(area_form.chart, tau), spec)
        assert math.isclose(tau.imag, result.value.real, abs_tol=1e-12)

    def test_polynomial(self, line: Chart) -> None:
        x = line.x(0)
        form = KForm(line, 2, {(0, 1): x * x * 0.5j})
        spec = QuadratureSpec(method='gauss-grid', resolution=4)
        result = integrate(form, box_domain(line), spec)
        assert math.isclose(4 / 3, result.value.real, abs_tol=1e-12)
        assert result.error < 1e-12

    def test_qmc(self, line: Chart) -> None:
        x = line.x(0)
        form = KForm(line, 2, {(0, 1): x * x * 0.5j})
        spec = QuadratureSpec(method='qmc', resolution=4096, seed=3)
        result = integrate(form, box_domain(line), spec)
        assert 4096 == result.samples
        assert 0 < result.error < 1e-2
        assert abs(result.value - 4 / 3) < 5 * result.error + 1e-6

    def test_qmc_is_reproducible(self, area_form: KForm) -> None:
        x = area_form.chart.x(0)
        form = area_form * x.exp()
        spec = QuadratureSpec(method='qmc', resolution=1024, seed=9)
        first = integrate(form, box_domain(form.chart), spec)
        second = integrate(form, box_domain(form.chart), spec)
        assert first.value == second.value

    def test_chunk_size_moves_only_rounding(self, area_form: KForm) -> None:
        x = area_form.chart.x(0)
        form = area_form * x.exp()
        domain = box_domain(form.chart)
        values = [
            integrate(
                form,
                domain,
                QuadratureSpec(
                    method='qmc', resolution=4096, seed=9, chunk=chunk
                ),
            ).value
            for chunk in (64, 512, 4096)
        ]
        for value in values[1:]:
            assert values[0] == pytest.approx(value, rel=1e-12)

    def test_wrong_degree(self, line: Chart) -> None:
        with pytest.raises(DomainError, match='cannot be integrated') as e:
            integrate(
                KForm.covector(line, 0), box_domain(line), QuadratureSpec()
            )
        assert (
            'A form of degree 1 cannot be integrated over a 2-dimensional '
            'domain!' == str(e.value)
        )

    def test_tolerance(self, line: Chart) -> None:
        form = KForm(line, 2, {(0, 1): (line.x(0) * 9).cos()})
        spec = QuadratureSpec(resolution=2, tolerance=1e-12)
        with pytest.raises(QuadratureError, match='exceeds the tolerance'):
            integrate(form, box_domain(line), spec)

    def test_excision_schedule(self, area_form: KForm) -> None:
        tube = Tube(center=(0j,), axes=(0,), radius=0.1)
        spec = QuadratureSpec(
            method='periodic-grid',
            resolution=256,
            schedule=(0.4, 0.2, 0.1),
            extrapolate=False,
        )
        result = integrate(
            area_form, box_domain(area_form.chart, (tube,)), spec
        )
        assert [0.4, 0.2, 0.1] == [p.delta for p in result.partials]
        for partial in result.partials:
            expected = 4 - math.pi * partial.delta ** 2
            assert abs(partial.value - expected) < 1e-2
        assert result.partials[-1].value == result.value


class TestExtrapolate:
    def test_exact_model(self) -> None:
        deltas = (0.4, 0.2, 0.1, 0.05)
        partials = [
            Partial(d, 3 - 2 * d + 0.5 * d * math.log(d) ** 2) for d in deltas
        ]
        fit = extrapolate(partials)
        assert math.isclose(3, fit.value.real, abs_tol=1e-10)
        assert fit.residual < 1e-10

    def test_too_few(self) -> None:
        with pytest.raises(QuadratureError, match='at least 3') as e:
            extrapolate([Partial(0.2, 1), Partial(0.1, 1)])
        assert 'Extrapolation needs at least 3 partials!' == str(e.value)

    def test_not_decreasing(self) -> None:
        with pytest.raises(QuadratureError, match='strictly decreasing'):
            extrapolate([Partial(0.1, 1), Partial(0.2, 1), Partial(0.3, 1)])


class TestFitDecay:
    def test_recovers_exponent(self) -> None:
        radii = np.array([0.2, 0.1, 0.05, 0.025])
        values = 1.5 * radii * np.abs(np.log(radii))
        fit = fit_decay(radii, values)
        assert math.isclose(1, fit.exponent, abs_tol=1e-10)
        assert math.isclose(1.5, fit.constant, rel_tol=1e-10)

    def test_non_positive(self) -> None:
        with pytest.raises(QuadratureError, match='positive values'):
            fit_decay([0.2, 0.1], [1.0, 0.0])
