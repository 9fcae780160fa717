"""Abel suites: the elliptic curve pipeline and the local threefold.

The curve checks run for every period in ``[abel-curve] taus``; the
divisors come from ``[abel-curve] poles`` and ``zeros`` when given,
otherwise they are drawn from the run seed.

"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qabel.abel.curve import abel_pairing
from qabel.abel.curve import alpha01_sup
from qabel.abel.curve import build_g
from qabel.abel.curve import build_psi_and_f
from qabel.abel.curve import dbar_solve
from qabel.abel.curve import divisor_windings
from qabel.abel.curve import loop_periods
from qabel.abel.curve import normalized_rho
from qabel.abel.curve import periods_and_class
from qabel.abel.curve import random_twist
from qabel.abel.curve import sample_torus
from qabel.abel.curve import sigma_candidate
from qabel.abel.curve import TorusDivisor
from qabel.abel.lattice import Lattice
from qabel.abel.threefold import alpha_pq
from qabel.abel.threefold import algebraic_equivalence_check
from qabel.abel.threefold import bump_20
from qabel.abel.threefold import calibrate_sign
from qabel.abel.threefold import canonical_beta
from qabel.abel.threefold import default_model
from qabel.abel.threefold import LineDivisor
from qabel.abel.threefold import LocalModel
from qabel.abel.threefold import localization_check
from qabel.exceptions import ObstructionSignal
from qabel.forms.kform import KForm
from qabel.integrate.domains import box_domain
from qabel.integrate.domains import periodic_distance
from qabel.integrate.domains import tube_distance
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_constants import TWO_PI_I
from qabel.suites.checks import Check
from qabel.suites.checks import max_abs
from qabel.suites.checks import Outcome
from qabel.suites.identities import residual
from qabel.suites.samples import random_polynomial

if TYPE_CHECKING:
    from typing import List
    from typing import Sequence
    from typing import Tuple

    from qabel.abel.curve import Mode
    from qabel.abel.curve import SmoothQuotientMap
    from qabel.forms.fields import ScalarField
    from qabel.qa_collections import LocalizationResult
    from qabel.suites.checks import RunContext

__all__ = (
    'CURVE_CHECKS',
    'THREEFOLD_CHECKS',
    'equivalent_divisors',
    'localization_forms',
    'random_divisor',
)

CURVE = 'abel-curve'
THREEFOLD = 'abel-threefold'
SAMPLES = 20000000


def random_divisor(
    lattice: Lattice,
    rng: np.random.Generator,
    degree: int,
    avoid: Sequence[complex] = (),
    separation: float = 0.15,
) -> TorusDivisor:
    """Draw ``degree`` points of the fundamental domain, well separated.

    :param lattice: The period lattice.
    :param rng: The random generator.
    :param degree: The number of points.
    :param avoid: Points to keep ``separation`` away from.
    :param separation: The least periodic distance between points.

    """
    points: List[complex] = []
    while len(points) < degree:
        x, y = rng.uniform(0.1, 0.9, size=2)
        candidate = complex(x + lattice.tau * y)
        taken = list(avoid) + points
        if taken:
            distance = periodic_distance(
                np.array([[candidate]]), taken, lattice.tau
            )
            if distance[0] < separation:
                continue
        points.append(candidate)
    return TorusDivisor(tuple(points))


def equivalent_divisors(
    lattice: Lattice,
    rng: np.random.Generator,
    equivalent: bool = True,
) -> Tuple[TorusDivisor, TorusDivisor]:
    """Return ``(P, Q)`` of degree two, Abel-Jacobi equivalent or not.

    ``Q = (p1 + delta, p2 - delta)`` keeps ``sum Q = sum P``;
    ``Q = (p1 + delta, p2 + delta)`` shifts it by ``2 delta``.

    :param lattice: The period lattice.
    :param rng: The random generator.
    :param equivalent: Which of the two shapes to return.

    """
    p = random_divisor(lattice, rng, 2, separation=0.4)
    delta = complex(*rng.uniform(0.08, 0.12, size=2))
    p1, p2 = p.points
    second = p2 - delta if equivalent else p2 + delta
    return p, TorusDivisor((p1 + delta, second))


def _taus(context: RunContext) -> Tuple[complex, ...]:
    return context.settings.get_complexes(CURVE, 'taus', (1j, 0.3 + 1.1j))


def _configured_divisors(
    context: RunContext,
) -> Tuple[TorusDivisor, TorusDivisor]:
    poles = context.settings.get_complexes(CURVE, 'poles', ())
    zeros = context.settings.get_complexes(CURVE, 'zeros', ())
    return TorusDivisor(poles), TorusDivisor(zeros)


def _away_points(
    g_map: SmoothQuotientMap, rng: np.random.Generator, count: int
) -> np.ndarray:
    lattice = g_map.lattice
    x, y = rng.uniform(0, 1, size=(2, 4 * count))
    points = (x + lattice.tau * y).reshape(-1, 1)
    keep = periodic_distance(points, g_map.support, lattice.tau) > 0.05
    return points[keep][:count]


def curve_sigma_check(context: RunContext) -> Outcome:
    rng = context.rng(61)
    worst = 0.0
    count = context.count(CURVE, 'points', 64)
    for tau in _taus(context):
        lattice = Lattice(tau)
        x, y = rng.uniform(-0.5, 0.5, size=(2, count))
        z = x + 1j * y
        value = lattice.sigma(z)
        shifted = (
            lattice.sigma(z + 1) + np.exp(lattice.eta1 * (z + 0.5)) * value,
            lattice.sigma(z + tau)
            + np.exp(lattice.eta2 * (z + tau / 2)) * value,
        )
        scale = np.maximum(np.abs(value), 1.0)
        worst = max(worst, *(max_abs(part / scale) for part in shifted))
    tolerance = context.tol(CURVE, 'sigma_tolerance', 1e-10)
    return Outcome(worst, 0.0, tolerance, samples=count * len(_taus(context)))


def _twists(
    rng: np.random.Generator, count: int
) -> List[Tuple[Mode, ...]]:
    return [()] + [random_twist(rng) for _ in range(count)]


def curve_pairing_check(context: RunContext) -> Outcome:
    rng = context.rng(62)
    resolution = context.count(CURVE, 'resolution', 256)
    spec = QuadratureSpec(method='periodic-grid', resolution=resolution)
    degrees = context.settings.get_floats(CURVE, 'degrees', (1, 2, 4))
    configured = _configured_divisors(context)
    worst = 0.0
    samples = 0
    for tau in _taus(context):
        lattice = Lattice(tau)
        cases = []
        if configured[0].points:
            cases.append(configured)
        for degree in (int(d) for d in degrees):
            p = random_divisor(lattice, rng, degree)
            q = random_divisor(lattice, rng, degree, p.points)
            cases.append((p, q))
        for p, q in cases:
            for twist in _twists(rng, 3):
                g_map = build_g(lattice, p, q, twist)
                c = complex(*rng.normal(size=2))
                pairing = abel_pairing(g_map, c, spec)
                worst = max(worst, pairing.defect / abs(c))
                samples += pairing.samples
    tolerance = context.tol(CURVE, 'pairing_tolerance', 1e-3)
    return Outcome(worst, 0.0, tolerance, samples=samples)


def curve_alpha01_check(context: RunContext) -> Outcome:
    """Compare ``sup |g^-1 dbar g|`` with ``|mu| + sup |dbar phi|``.

    The sigma quotient is holomorphic away from the divisors, so the
    bound holds near them too.

    """
    rng = context.rng(63)
    size = context.count(CURVE, 'grid', 128)
    worst = 0.0
    for tau in _taus(context):
        lattice = Lattice(tau)
        p = random_divisor(lattice, rng, 2)
        q = random_divisor(lattice, rng, 2, p.points)
        g_map = build_g(lattice, p, q, random_twist(rng))
        sup = alpha01_sup(g_map, size, radius=1e-4)
        dbar_phi = KForm.scalar(g_map.phi).d_double_prime()
        bound = abs(g_map.mu) + max_abs(
            sample_torus(dbar_phi.coefficient((1,)), lattice, size)
        )
        worst = max(worst, sup - bound)
        logger.debug(f'{sup=} {bound=}')
    tolerance = context.tol(CURVE, 'tolerance', 1e-8)
    return Outcome(max(worst, 0.0), 0.0, tolerance, samples=size ** 2)


def curve_period_check(context: RunContext) -> Outcome:
    rng = context.rng(64)
    count = context.count(CURVE, 'points', 64)
    worst = 0.0
    for tau in _taus(context):
        lattice = Lattice(tau)
        p = random_divisor(lattice, rng, 3)
        q = random_divisor(lattice, rng, 3, p.points)
        g_map = build_g(lattice, p, q, random_twist(rng))
        worst = max(
            worst, g_map.period_defect(_away_points(g_map, rng, count))
        )
    tolerance = context.tol(CURVE, 'tolerance', 1e-8)
    return Outcome(worst, 0.0, tolerance, samples=count)


def _pipeline(
    context: RunContext, tau: complex, rng: np.random.Generator
) -> Tuple[SmoothQuotientMap, KForm, ScalarField]:
    lattice = Lattice(tau)
    p, q = equivalent_divisors(lattice, rng)
    g_map = build_g(lattice, p, q, random_twist(rng))
    size = context.count(CURVE, 'grid', 64)
    classes = periods_and_class(g_map, size)
    rho = normalized_rho(g_map, classes, size)
    solution = dbar_solve(rho, lattice, g_map.chart)
    basepoint = complex(_away_points(g_map, rng, 1)[0, 0])
    psi, f = build_psi_and_f(g_map, classes, solution, basepoint)
    return g_map, psi, f


def _pipelines(
    context: RunContext,
) -> List[Tuple[SmoothQuotientMap, KForm, ScalarField]]:
    def build() -> List[Tuple[SmoothQuotientMap, KForm, ScalarField]]:
        rng = context.rng(65)
        return [_pipeline(context, tau, rng) for tau in _taus(context)]

    return context.cached('abel-pipeline', build)


def curve_psi_type_check(context: RunContext) -> Outcome:
    rng = context.rng(66)
    count = context.count(CURVE, 'points', 64)
    worst = 0.0
    for g_map, psi, _ in _pipelines(context):
        points = _away_points(g_map, rng, count)
        worst = max(worst, residual(psi.type_project(0, 1), points))
    tolerance = context.tol(CURVE, 'psi_tolerance', 1e-7)
    return Outcome(worst, 0.0, tolerance, samples=count)


def curve_psi_periods_check(context: RunContext) -> Outcome:
    worst = 0.0
    for g_map, psi, _ in _pipelines(context):
        for period in loop_periods(psi, g_map):
            winding = period / TWO_PI_I
            worst = max(worst, abs(winding - round(winding.real)))
    tolerance = context.tol(CURVE, 'period_tolerance', 1e-5)
    return Outcome(worst, 0.0, tolerance)


def curve_single_valued_check(context: RunContext) -> Outcome:
    rng = context.rng(67)
    count = context.count(CURVE, 'points', 64)
    worst = 0.0
    for g_map, _, f in _pipelines(context):
        z = _away_points(g_map, rng, count)
        value = f.evaluate(z)
        for w in (1.0, g_map.lattice.tau):
            worst = max(worst, max_abs(f.evaluate(z + w) / value - 1))
    tolerance = context.tol(CURVE, 'period_tolerance', 1e-5)
    return Outcome(worst, 0.0, tolerance, samples=count)


def curve_windings_check(context: RunContext) -> Outcome:
    worst = 0.0
    for g_map, psi, _ in _pipelines(context):
        for divisor, sign in ((g_map.q, 1), (g_map.p, -1)):
            windings = divisor_windings(psi, divisor.points, radius=0.05)
            for winding, m in zip(windings, divisor.multiplicities):
                worst = max(worst, abs(winding - sign * m))
    tolerance = context.tol(CURVE, 'winding_tolerance', 1e-6)
    return Outcome(worst, 0.0, tolerance)


def curve_sigma_candidate_check(context: RunContext) -> Outcome:
    rng = context.rng(68)
    count = context.count(CURVE, 'points', 64)
    worst = 0.0
    for g_map, _, f in _pipelines(context):
        z = _away_points(g_map, rng, count)
        ratio = f.evaluate(z) / sigma_candidate(g_map).evaluate(z)
        worst = max(worst, max_abs(ratio / ratio[0] - 1))
    tolerance = context.tol(CURVE, 'period_tolerance', 1e-5)
    return Outcome(worst, 0.0, tolerance, samples=count)


def curve_obstruction_check(context: RunContext) -> Outcome:
    """Expect the pipeline to stop for divisors with ``sum Q != sum P``."""
    rng = context.rng(69)
    size = context.count(CURVE, 'grid', 64)
    raised = 0
    taus = _taus(context)
    for tau in taus:
        lattice = Lattice(tau)
        p, q = equivalent_divisors(lattice, rng, equivalent=False)
        g_map = build_g(lattice, p, q)
        try:
            classes = periods_and_class(g_map, size)
            dbar_solve(
                normalized_rho(g_map, classes, size), lattice, g_map.chart
            )
        except ObstructionSignal as signal:
            logger.info(f'Obstruction for tau = {tau}: {signal}')
            raised += 1
    return Outcome(float(raised), float(len(taus)), 0.0)


CURVE_CHECKS = (
    Check(
        'abel-curve.sigma-quasi-periodicity',
        'sigma(z + 1) = -exp(eta_1 (z + 1/2)) sigma(z)',
        curve_sigma_check,
    ),
    Check(
        'abel-curve.pairing',
        'g^-1 dg is a current on X',
        curve_pairing_check,
    ),
    Check(
        'abel-curve.alpha01-bounded',
        'g^-1 dbar g is bounded',
        curve_alpha01_check,
    ),
    Check(
        'abel-curve.doubly-periodic',
        'g is doubly periodic',
        curve_period_check,
    ),
    Check(
        'abel-curve.psi-type',
        'psi is a meromorphic 1-form',
        curve_psi_type_check,
    ),
    Check(
        'abel-curve.psi-periods',
        'the periods of psi lie in 2 pi i Z',
        curve_psi_periods_check,
    ),
    Check(
        'abel-curve.single-valued',
        'f = exp(integral psi) is single valued',
        curve_single_valued_check,
    ),
    Check(
        'abel-curve.divisor-windings',
        'div f = Q - P',
        curve_windings_check,
    ),
    Check(
        'abel-curve.sigma-candidate',
        'f agrees with the sigma quotient up to a constant',
        curve_sigma_candidate_check,
    ),
    Check(
        'abel-curve.obstruction',
        'sum Q = sum P is necessary',
        curve_obstruction_check,
    ),
)


def _shell_spec(context: RunContext) -> QuadratureSpec:
    radii = context.settings.get_floats(
        THREEFOLD, 'radii', (0.08, 0.04, 0.02)
    )
    return context.qmc(THREEFOLD, SAMPLES, radii)


def _box_spec(context: RunContext) -> QuadratureSpec:
    return context.qmc(THREEFOLD, SAMPLES)


def _generic(context: RunContext) -> Tuple[LocalModel, int]:
    def build() -> Tuple[LocalModel, int]:
        model = default_model(coplanar=False)
        return model, calibrate_sign(model, _shell_spec(context))

    return context.cached('threefold-sign', build)


def threefold_alpha_check(context: RunContext) -> Outcome:
    model = default_model(coplanar=False)
    rng = context.rng(71)
    count = context.count(THREEFOLD, 'points', 200)
    points = model.chart.sample(4 * count, int(rng.integers(2 ** 31)))
    points = points[tube_distance(points, model.tubes) > 0.1][:count]
    alpha = alpha_pq(model)
    scale = max(residual(alpha, points), 1.0)
    value = max(
        residual(alpha.d(), points), residual(alpha - alpha.conj(), points)
    )
    tolerance = context.tol(THREEFOLD, 'tolerance', 1e-8)
    return Outcome(value / scale, 0.0, tolerance, samples=len(points))


def threefold_trivial_check(context: RunContext) -> Outcome:
    center = (0.5 + 0.5j, -0.25j)
    model = LocalModel(
        LineDivisor(center, 'pole'), LineDivisor(center, 'zero')
    )
    points = model.chart.sample(16, context.seed)
    return Outcome(residual(alpha_pq(model), points), 0.0, 0.0, samples=16)


def _localization(
    context: RunContext,
    beta: KForm,
    around: LineDivisor,
) -> Outcome:
    model, sign = _generic(context)
    result: LocalizationResult = localization_check(
        model, beta, _shell_spec(context), sign=sign, around=around
    )
    tolerance = context.tol(THREEFOLD, 'ratio_tolerance', 0.05)
    return Outcome(
        result.ratio.real,
        1.0,
        tolerance,
        error=result.error / max(abs(result.rhs), 1e-300),
        samples=context.count(THREEFOLD, 'samples', SAMPLES),
    )


def localization_forms(
    model: LocalModel,
) -> Tuple[Tuple[KForm, LineDivisor], ...]:
    """Return three test forms, each with the line it is centred on.

    None of them is the calibration bump ``canonical_beta(Q, 0.2)``.

    :param model: A nontrivial local model.

    """
    chart = model.chart
    return (
        (canonical_beta(chart, model.q.center, 0.25, 0.5), model.q),
        (canonical_beta(chart, model.q.center, 0.3, 0.9), model.q),
        (canonical_beta(chart, model.p.center, 0.25), model.p),
    )


def _localization_case(context: RunContext, index: int) -> Outcome:
    model, _ = _generic(context)
    beta, line = localization_forms(model)[index]
    return _localization(context, beta, line)


def threefold_zero_check(context: RunContext) -> Outcome:
    return _localization_case(context, 0)


def threefold_wide_check(context: RunContext) -> Outcome:
    return _localization_case(context, 1)


def threefold_pole_check(context: RunContext) -> Outcome:
    return _localization_case(context, 2)


def threefold_far_check(context: RunContext) -> Outcome:
    model, sign = _generic(context)
    center = (-1.5 - 1.5j, -1.5 - 1.5j)
    beta = canonical_beta(model.chart, center, width=0.2)
    bounds = [(-2.5, -0.5)] * 4 + [model.square] * 2
    domain = box_domain(model.chart, bounds=bounds)
    result = localization_check(
        model, beta, _box_spec(context), sign=sign, domain=domain
    )
    tolerance = context.tol(THREEFOLD, 'far_tolerance', 1e-3)
    return Outcome(
        abs(result.lhs),
        0.0,
        tolerance,
        error=result.error,
        samples=context.count(THREEFOLD, 'samples', SAMPLES),
    )


def _algebraic_form(
    model: LocalModel, rng: np.random.Generator
) -> KForm:
    chart = model.chart
    total = KForm(chart, 2)
    for _ in range(3):
        center = tuple(
            complex(*rng.uniform(-1.0, 1.5, size=2)) for _ in range(3)
        )
        polynomial = random_polynomial(chart, rng, degree=1, scale=0.3)
        total = total + bump_20(chart, center, 0.3, polynomial + 1)
    return total


def threefold_algebraic_check(context: RunContext) -> Outcome:
    model = default_model(coplanar=True)
    beta = _algebraic_form(model, context.rng(72))
    pairing = algebraic_equivalence_check(model, beta, _box_spec(context))
    tolerance = context.tol(THREEFOLD, 'algebraic_tolerance', 0.05)
    return Outcome(
        abs(pairing.value) / max(pairing.mass, 1e-300),
        0.0,
        tolerance,
        error=pairing.error,
        samples=context.count(THREEFOLD, 'samples', SAMPLES),
    )


def threefold_noncoplanar_check(context: RunContext) -> Outcome:
    """Record the pairing for lines in different surfaces.

    No value is predicted, so the record is always inconclusive.

    """
    model = default_model(coplanar=False)
    beta = _algebraic_form(model, context.rng(72))
    pairing = algebraic_equivalence_check(
        model, beta, _box_spec(context), require_coplanar=False
    )
    return Outcome(
        abs(pairing.value) / max(pairing.mass, 1e-300),
        float('nan'),
        float('nan'),
        error=pairing.error,
        samples=context.count(THREEFOLD, 'samples', SAMPLES),
        status='inconclusive',
    )


THREEFOLD_CHECKS = (
    Check(
        'abel-threefold.alpha-closed-real',
        'alpha_PQ is a real closed 3-form',
        threefold_alpha_check,
    ),
    Check(
        'abel-threefold.trivial',
        'for P = Q the current vanishes',
        threefold_trivial_check,
    ),
    Check(
        'abel-threefold.localization-q',
        'd alpha_PQ = 8 pi^2 (delta_Q - delta_P)',
        threefold_zero_check,
    ),
    Check(
        'abel-threefold.localization-wide',
        'd alpha_PQ = 8 pi^2 (delta_Q - delta_P)',
        threefold_wide_check,
    ),
    Check(
        'abel-threefold.localization-p',
        'd alpha_PQ = 8 pi^2 (delta_Q - delta_P)',
        threefold_pole_check,
    ),
    Check(
        'abel-threefold.far-support',
        'alpha_PQ is closed away from P and Q',
        threefold_far_check,
    ),
    Check(
        'abel-threefold.algebraic',
        'P and Q algebraically equivalent',
        threefold_algebraic_check,
    ),
    Check(
        'abel-threefold.non-coplanar',
        'lines in different surfaces',
        threefold_noncoplanar_check,
    ),
)
