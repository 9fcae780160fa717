"""Chern-Simons transgression and tubular-limit suites."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qabel.forms.fields import Chart
from qabel.forms.kform import KForm
from qabel.forms.kform import MatForm
from qabel.geometry.bundle import chern_connection
from qabel.geometry.bundle import chern_in_section_frame
from qabel.geometry.bundle import Connection
from qabel.geometry.bundle import dprime_connection
from qabel.geometry.bundle import flat_connection_from_section
from qabel.geometry.bundle import HermitianBundle
from qabel.geometry.bundle import quaternion_ratio
from qabel.geometry.bundle import Section
from qabel.geometry.chern_simons import cs_03
from qabel.geometry.chern_simons import cs_composition_defect
from qabel.geometry.chern_simons import cs_flat
from qabel.geometry.chern_simons import cs_pair
from qabel.geometry.chern_simons import cs_t_integral
from qabel.geometry.chern_simons import cs_transgression
from qabel.geometry.chern_simons import tubular_limit
from qabel.geometry.group_calculus import full_three_form
from qabel.geometry.group_calculus import GroupMap
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.suites.checks import Check
from qabel.suites.checks import max_abs
from qabel.suites.checks import Outcome
from qabel.suites.identities import residual
from qabel.suites.samples import random_bundle
from qabel.suites.samples import random_form
from qabel.suites.samples import random_polynomial
from qabel.suites.samples import random_section

if TYPE_CHECKING:
    from typing import List
    from typing import Sequence
    from typing import Tuple

    from qabel.forms.fields import ScalarField
    from qabel.qa_collections import LimitReport
    from qabel.suites.checks import RunContext

__all__ = (
    'CS_CHECKS',
    'TUBULAR_CHECKS',
    'bump',
    'closed_test_form',
    'composition_cases',
    'random_matrix_form',
)

SMALL_BOX = ((-0.5, 0.5),) * 6
HOLOMORPHIC_PAIRS = ((0, 1), (0, 2), (1, 2))


def random_matrix_form(chart: Chart, rng: np.random.Generator) -> MatForm:
    """Return a 2x2 matrix 1-form with degree-one polynomial entries."""
    return MatForm(
        [
            [random_form(chart, 1, rng, poly_degree=1) for _ in range(2)]
            for _ in range(2)
        ]
    )


def bump(chart: Chart) -> ScalarField:
    """Return ``prod (1 - t^2)^2`` over the real coordinates of the chart."""
    total = chart.constant(1.0)
    for i in range(chart.dim):
        for coordinate in (chart.x(i), chart.y(i)):
            total = total * (1 - coordinate * coordinate) ** 2
    return total


def closed_test_form(
    chart: Chart, cutoff: ScalarField, rng: np.random.Generator
) -> KForm:
    """Return ``tau = d sigma`` for a random ``(2, 0)``-form ``sigma``.

    ``tau`` is closed and of type ``(3, 0) + (2, 1)``; it vanishes
    wherever ``cutoff`` does to second order.

    :param chart: A chart of dimension 3.
    :param cutoff: The support factor of ``sigma``.
    :param rng: The random generator.

    """
    sigma = KForm(
        chart,
        2,
        {
            pair: cutoff * random_polynomial(chart, rng, degree=1)
            for pair in HOLOMORPHIC_PAIRS
        },
    )
    return sigma.d()


def _points(
    context: RunContext, chart: Chart, rng: np.random.Generator
) -> np.ndarray:
    count = context.count('chern-simons', 'points', 50)
    return chart.sample(count, int(rng.integers(2 ** 31)))


def _tolerance(context: RunContext) -> float:
    return context.tol('chern-simons', 'tolerance', 1e-8)


def _bundle_pair(
    context: RunContext, salt: int, dim: int = 2
) -> Tuple[HermitianBundle, Section, Section, np.ndarray]:
    chart = Chart(dim, box=SMALL_BOX[: 2 * dim])
    rng = context.rng(salt)
    bundle = random_bundle(chart, rng)
    s_p = random_section(chart, rng, holomorphic=True, label='sP')
    s_q = random_section(chart, rng, holomorphic=True, label='sQ')
    return bundle, s_p, s_q, _points(context, chart, rng)


def cs_t_integral_check(context: RunContext) -> Outcome:
    chart = Chart(2, box=SMALL_BOX[:4])
    rng = context.rng(41)
    first = chern_connection(random_bundle(chart, rng))
    second = first.shifted(random_matrix_form(chart, rng))
    points = _points(context, chart, rng)
    closed = cs_transgression(first, second).evaluate(points)
    nodes = context.settings.get_int('chern-simons', 't_nodes', 32)
    numeric = cs_t_integral(first, second, points, nodes=nodes)
    value = max_abs(closed - numeric) / max(max_abs(closed), 1.0)
    return Outcome(value, 0.0, _tolerance(context), samples=len(points))


def cs_flat_check(context: RunContext) -> Outcome:
    bundle, s_p, s_q, points = _bundle_pair(context, 42)
    flat_p = flat_connection_from_section(bundle, s_p)
    flat_q = flat_connection_from_section(bundle, s_q)
    difference = cs_transgression(flat_p, flat_q) - cs_flat(flat_p, flat_q)
    value = residual(difference, points)
    return Outcome(value, 0.0, _tolerance(context), samples=len(points))


def cs_flat_oracle_check(context: RunContext) -> Outcome:
    bundle, s_p, s_q, points = _bundle_pair(context, 43)
    flat_p = flat_connection_from_section(bundle, s_p)
    flat_q = flat_connection_from_section(bundle, s_q)
    ratio = quaternion_ratio(bundle, s_p, s_q)
    oracle = full_three_form(GroupMap(ratio.a, ratio.b)) * (-1 / 3)
    value = residual(cs_flat(flat_p, flat_q) - oracle, points)
    return Outcome(value, 0.0, _tolerance(context), samples=len(points))


def cs_03_check(context: RunContext) -> Outcome:
    bundle, s_p, _, points = _bundle_pair(context, 44, dim=3)
    first = chern_connection(bundle)
    second = flat_connection_from_section(bundle, s_p)
    transgression = cs_transgression(first, second).type_project(0, 3)
    value = residual(transgression - cs_03(first, second), points)
    return Outcome(value, 0.0, _tolerance(context), samples=len(points))


def composition_cases(
    chart: Chart, rng: np.random.Generator, count: int
) -> List[Tuple[Tuple[Connection, Connection, Connection], KForm]]:
    """Draw ``count`` triples of polynomial connections and test forms.

    Each triple gets its own closed ``tau``.

    :param chart: A chart of dimension 3.
    :param rng: The random generator.
    :param count: The number of triples.

    """
    base = Connection(MatForm.zeros(chart, 1))
    cases: List[Tuple[Tuple[Connection, Connection, Connection], KForm]] = []
    for _ in range(count):
        d0, d1, d2 = (
            base.shifted(random_matrix_form(chart, rng)) for _ in range(3)
        )
        tau = closed_test_form(chart, bump(chart), rng)
        cases.append(((d0, d1, d2), tau))
    return cases


def cs_additivity_check(context: RunContext) -> Outcome:
    chart = Chart(3)
    rng = context.rng(45)
    resolution = context.settings.get_int('chern-simons', 'resolution', 6)
    spec = QuadratureSpec(method='gauss-grid', resolution=resolution)
    count = context.settings.get_int('chern-simons', 'triples', 5)
    worst = 0.0
    scale = 0.0
    samples = 0
    for triple, tau in composition_cases(chart, rng, count):
        defect = cs_composition_defect(triple, tau, spec)
        scale = max(scale, abs(cs_pair(triple[0], triple[1], tau, spec).value))
        worst = max(worst, abs(defect.value))
        samples += defect.samples
        logger.debug(f'{defect.value=} {scale=}')
    tolerance = context.tol('chern-simons', 'additivity_tolerance', 1e-6)
    return Outcome(worst, 0.0, tolerance * max(scale, 1.0), samples=samples)


def cs_type_check(context: RunContext) -> Outcome:
    chart = Chart(3, box=SMALL_BOX)
    rng = context.rng(46)
    first = chern_connection(random_bundle(chart, rng))
    second = first.shifted(random_matrix_form(chart, rng))
    tau = closed_test_form(chart, bump(chart), rng)
    form = cs_transgression(first, second)
    projected = form.type_project(1, 2) + form.type_project(0, 3)
    points = _points(context, chart, rng)
    value = residual(tau.wedge(form) - tau.wedge(projected), points)
    return Outcome(value, 0.0, 0.0, samples=len(points))


def cs_dprime_check(context: RunContext) -> Outcome:
    bundle, s_p, _, points = _bundle_pair(context, 47, dim=3)
    form = cs_transgression(
        dprime_connection(bundle, s_p), chern_in_section_frame(bundle, s_p)
    )
    current = form.type_project(1, 2) + form.type_project(0, 3)
    value = residual(current, points)
    return Outcome(value, 0.0, _tolerance(context), samples=len(points))


CS_CHECKS = (
    Check(
        'chern-simons.t-integral',
        'tr(2 A ^ R_t) dt',
        cs_t_integral_check,
    ),
    Check(
        'chern-simons.flat-connections',
        'If both connections are flat',
        cs_flat_check,
    ),
    Check(
        'chern-simons.flat-oracle',
        '-1/3 tr((g^-1 dg)^3)',
        cs_flat_oracle_check,
    ),
    Check(
        'chern-simons.type-03',
        'the (0,3)-part of the Chern-Simons form',
        cs_03_check,
    ),
    Check(
        'chern-simons.additivity',
        'CS_0(1) + CS_1(2) = CS_0(2) modulo exact forms',
        cs_additivity_check,
    ),
    Check(
        'chern-simons.type-bookkeeping',
        'only the (1,2)+(0,3) part pairs with tau',
        cs_type_check,
    ),
    Check(
        'chern-simons.dprime-chern',
        'differs from the Chern connection by a (1,0) matrix',
        cs_dprime_check,
    ),
)


def tubular_setup(
    rng: np.random.Generator,
) -> Tuple[Connection, Connection, KForm, ScalarField]:
    """Return ``(D_P, D'_P, tau, log |s|^2)`` for ``s = (z1, z2)``.

    The metric is flat and ``tau`` is a closed test form supported in
    the unit ball times the unit square.

    :param rng: Draws the polynomial part of ``tau``.

    """
    chart = Chart(3)
    one = chart.constant(1.0)
    zero = chart.constant(0.0)
    bundle = HermitianBundle([[one, zero], [zero, one]], chart)
    s = Section((chart.z(0), chart.z(1)), holomorphic=True, label='sP')
    flat = flat_connection_from_section(bundle, s, in_section_frame=True)
    dprime = dprime_connection(bundle, s)
    potential = bundle.norm2(s).log().memoized()
    ball = 1 - chart.z(0).abs2() - chart.z(1).abs2()
    x3, y3 = chart.x(2), chart.y(2)
    cutoff = ball ** 2 * (1 - x3 * x3) ** 2 * (1 - y3 * y3) ** 2
    tau = closed_test_form(chart, cutoff, rng)
    return flat, dprime, tau, potential


def _radii(context: RunContext) -> Sequence[float]:
    return context.settings.get_floats(
        'tubular', 'radii', (0.2, 0.1, 0.05, 0.025)
    )


def _tubular(context: RunContext) -> Tuple[LimitReport, float]:
    def build() -> Tuple[LimitReport, float]:
        rng = context.rng(51)
        flat, dprime, tau, potential = tubular_setup(rng)
        points = tau.chart.sample(256, int(rng.integers(2 ** 31)))
        scale = max(max_abs(tau.evaluate(points)), 1e-12)
        boundary = QuadratureSpec(
            method='gauss-grid',
            resolution=context.settings.get_int('tubular', 'resolution', 8),
        )
        shell = context.qmc('tubular', 2 ** 16)
        report = tubular_limit(
            flat,
            dprime,
            tau,
            _radii(context),
            potential,
            boundary,
            shell_spec=shell,
        )
        context.record_series(
            'tubular.mass', zip(report.radii, report.mass)
        )
        context.record_series(
            'tubular.boundary', zip(report.radii, report.boundary)
        )
        return report, scale

    return context.cached('tubular', build)


def _samples(report: LimitReport, context: RunContext) -> int:
    return len(report.radii) * context.count('tubular', 'samples', 2 ** 16)


def tubular_exponent_check(context: RunContext) -> Outcome:
    report, _ = _tubular(context)
    tolerance = context.tol('tubular', 'exponent_tolerance', 0.2)
    return Outcome(
        report.fit.exponent,
        1.0,
        tolerance,
        samples=_samples(report, context),
    )


def log_ratios(radii: Sequence[float], mass: Sequence[float]) -> List[float]:
    """Return ``M(eps) / (eps log^2 eps)`` for every radius.

    >>> [round(r, 6) for r in log_ratios([0.5], [0.5 * np.log(0.5) ** 2])]
    [1.0]

    """
    return [m / (eps * np.log(eps) ** 2) for eps, m in zip(radii, mass)]


def tubular_ratio_check(context: RunContext) -> Outcome:
    report, _ = _tubular(context)
    ratios = log_ratios(report.radii, report.mass)
    increase = max(
        (later - earlier for earlier, later in zip(ratios, ratios[1:])),
        default=0.0,
    )
    growth = max(increase, 0.0) / max(abs(ratios[0]), 1e-300)
    tolerance = context.tol('tubular', 'monotone_slack', 1e-2)
    return Outcome(
        growth, 0.0, tolerance, samples=_samples(report, context)
    )


def tubular_boundary_check(context: RunContext) -> Outcome:
    report, scale = _tubular(context)
    tolerance = context.tol('tubular', 'limit_tolerance', 1e-4)
    return Outcome(
        abs(report.boundary_limit.value),
        0.0,
        tolerance * scale,
        error=report.boundary_limit.residual,
        samples=_samples(report, context),
    )


def tubular_pairing_check(context: RunContext) -> Outcome:
    report, scale = _tubular(context)
    tolerance = context.tol('tubular', 'limit_tolerance', 1e-4)
    return Outcome(
        abs(report.pairing.value),
        0.0,
        tolerance * scale,
        error=report.pairing.residual,
        samples=_samples(report, context),
    )


TUBULAR_CHECKS = (
    Check(
        'tubular.mass-exponent',
        'O(eps |log eps|)',
        tubular_exponent_check,
    ),
    Check(
        'tubular.log-ratio',
        'M(eps) / (eps log^2 eps) is nonincreasing',
        tubular_ratio_check,
    ),
    Check(
        'tubular.boundary-limit',
        'the boundary term tends to zero',
        tubular_boundary_check,
    ),
    Check(
        'tubular.pairing',
        "CS_{D_P}(D'_P) defines the zero current",
        tubular_pairing_check,
    ),
)
