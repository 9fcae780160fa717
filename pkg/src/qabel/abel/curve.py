"""Abel's theorem on an elliptic curve ``C / (Z + tau Z)``.

The pipeline builds the smooth doubly periodic map ``g`` with zeros
``Q`` and poles ``P``, pairs ``g^-1 dg`` with ``c dz``, normalizes the
``(0, 1)`` part of ``g^-1 dg`` by an integral class ``xi``, solves
``dbar gamma`` for the rest and exponentiates

    psi = g^-1 dg + xi + d gamma,    f = exp(integral psi)

to a meromorphic ``f`` with divisor ``Q - P``.  The last two steps
complete exactly when ``sum Q = sum P`` modulo the lattice; otherwise
:func:`dbar_solve` raises :class:`ObstructionSignal`.

"""
from __future__ import annotations

from dataclasses import dataclass
import math
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np
from scipy import fft

from qabel.exceptions import DomainError
from qabel.exceptions import ObstructionSignal
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Chart
from qabel.forms.fields import ScalarField
from qabel.forms.kform import KForm
from qabel.integrate.domains import circle_domain
from qabel.integrate.domains import periodic_distance
from qabel.integrate.domains import segment_domain
from qabel.integrate.domains import torus_domain
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_collections import Tube
from qabel.qa_collections import Windings
from qabel.qa_constants import TWO_PI_I

if TYPE_CHECKING:
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.abel.lattice import Lattice

    Mode = Tuple[int, int, float, float]

__all__ = (
    'AbelPairing',
    'ClassResult',
    'DbarSolution',
    'PsiAndF',
    'SmoothQuotientMap',
    'TorusDivisor',
    'abel_pairing',
    'alpha01_sup',
    'build_g',
    'build_psi_and_f',
    'dbar_solve',
    'divisor_windings',
    'loop_periods',
    'normalized_rho',
    'periods_and_class',
    'random_twist',
    'sample_torus',
    'sigma_candidate',
)

_LOOP_OFFSETS = (0.137, 0.291, 0.413, 0.587, 0.709, 0.863, 0.061, 0.939)


@dataclass(frozen=True)
class TorusDivisor:
    """Points of the fundamental domain with integer multiplicities.

    :param points: Pairwise distinct points.
    :param multiplicities: One per point; all ``1`` when omitted.

    :raises DomainError: On repeated points or a length mismatch.

    """

    points: Tuple[complex, ...]
    multiplicities: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        points = tuple(complex(point) for point in self.points)
        object.__setattr__(self, 'points', points)
        if not self.multiplicities:
            object.__setattr__(self, 'multiplicities', (1,) * len(points))
        if len(self.multiplicities) != len(points):
            raise DomainError('Every point needs one multiplicity!')
        for i, first in enumerate(points):
            for second in points[i + 1 :]:
                if abs(first - second) < 1e-9:
                    raise DomainError(
                        f'The point {first} appears twice in the divisor!'
                    )

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    @property
    def total(self) -> complex:
        """Return ``sum m_i p_i``."""
        return sum(
            (m * p for p, m in zip(self.points, self.multiplicities)), 0j
        )

    @property
    def effective(self) -> bool:
        return all(m > 0 for m in self.multiplicities)


class SmoothQuotientMap:
    """The doubly periodic map ``g`` with zeros ``q`` and poles ``p``.

    ``g = prod sigma(z - q) / prod sigma(z - p) exp(lam z + mu zbar + phi)``

    :param lattice: The period lattice.
    :param chart: A chart of dimension 1.
    :param p: The poles.
    :param q: The zeros.
    :param lam: The holomorphic multiplier exponent.
    :param mu: The antiholomorphic multiplier exponent.
    :param twist: Modes ``(k, l, a, b)`` of the real periodic function
        ``phi = sum a cos(2 pi (k x + l y)) + b sin(2 pi (k x + l y))``.
    :param shift: The lattice point ``(a, b)`` used to choose ``mu``.

    """

    def __init__(
        self,
        lattice: Lattice,
        chart: Chart,
        p: TorusDivisor,
        q: TorusDivisor,
        lam: complex,
        mu: complex,
        twist: Sequence[Mode] = (),
        shift: Tuple[int, int] = (0, 0),
    ) -> None:
        self.lattice = lattice
        self.chart = chart
        self.p = p
        self.q = q
        self.lam = lam
        self.mu = mu
        self.twist = tuple(twist)
        self.shift = shift
        z = chart.z(0)
        core = ScalarField.constant(chart, 1)
        for divisor, sign in ((q, 1), (p, -1)):
            for point, multiplicity in zip(
                divisor.points, divisor.multiplicities
            ):
                factor = lattice.sigma_field(z - point).memoized()
                if sign * multiplicity < 0:
                    factor = factor.reciprocal()
                for _ in range(abs(multiplicity)):
                    core = core * factor
        self.phi = twist_field(lattice, chart, self.twist)
        exponent = z * lam + chart.zbar(0) * mu + self.phi
        self.g: ScalarField = (core * exponent.exp()).memoized()
        self.alpha: KForm = KForm.scalar(self.g).d() * (
            self.g.reciprocal().memoized()
        )

    def __repr__(self) -> str:
        return (
            f'SmoothQuotientMap(P={self.p.points}, Q={self.q.points}, '
            f'mu={self.mu:.6g})'
        )

    @property
    def alpha01(self) -> KForm:
        """Return ``(g^-1 dg)^(0, 1) = g^-1 dbar g``."""
        return self.alpha.type_project(0, 1)

    @property
    def support(self) -> Tuple[complex, ...]:
        return self.p.points + self.q.points

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Return ``g(z)``.

        :param z: Complex array of points.

        """
        return self.g.evaluate(np.asarray(z, complex).reshape(-1, 1))

    def period_defect(self, z: np.ndarray) -> float:
        """Return ``max |g(z + w) / g(z) - 1|`` over ``w = 1, tau``.

        :param z: Complex array of points away from the divisors.

        """
        z = np.asarray(z, complex).reshape(-1)
        value = self.evaluate(z)
        return max(
            float(np.max(np.abs(self.evaluate(z + w) / value - 1)))
            for w in (1.0, self.lattice.tau)
        )


def twist_field(
    lattice: Lattice, chart: Chart, twist: Sequence[Mode]
) -> ScalarField:
    """Return the real periodic field of the twist modes.

    :param lattice: The period lattice.
    :param chart: A chart of dimension 1.
    :param twist: Modes ``(k, l, a, b)``.

    """
    x, y = lattice.real_coordinates(chart)
    phi = ScalarField.constant(chart, 0)
    for k, l, cosine, sine in twist:
        phase = (x * k + y * l) * (2 * math.pi)
        phi = phi + phase.cos() * cosine + phase.sin() * sine
    return phi


def random_twist(
    rng: np.random.Generator, modes: int = 3, amplitude: float = 0.2
) -> Tuple[Mode, ...]:
    """Draw a random real trigonometric twist.

    :param rng: The random generator.
    :param modes: The number of modes.
    :param amplitude: The largest coefficient.

    """
    result: List[Mode] = []
    for _ in range(modes):
        k, l = (int(v) for v in rng.integers(-2, 3, size=2))
        if k == 0 and l == 0:
            k = 1
        cosine, sine = rng.uniform(-amplitude, amplitude, size=2)
        result.append((k, l, float(cosine), float(sine)))
    return tuple(result)


def build_g(
    lattice: Lattice,
    p: TorusDivisor,
    q: TorusDivisor,
    twist: Sequence[Mode] = (),
    chart: Optional[Chart] = None,
) -> SmoothQuotientMap:
    """Return the doubly periodic map with zeros ``q`` and poles ``p``.

    With ``S = sum q - sum p`` the sigma quotient picks up the factors
    ``exp(-eta_k S)`` along the periods, which ``exp(lam z + mu zbar)``
    cancels up to ``2 pi i Z``.  The integers are chosen so that ``mu``
    is the smallest solution,
    ``mu = pi (S - (b - a tau)) / Im tau`` with ``b - a tau`` the lattice
    point nearest to ``S``.

    :param lattice: The period lattice.
    :param p: The poles, effective.
    :param q: The zeros, effective and of the same degree.
    :param twist: Modes of a real periodic exponent.
    :param chart: A chart of dimension 1.

    :raises DomainError: If the divisors are not effective, differ in
        degree or share a point.

    """
    if not (p.effective and q.effective):
        raise DomainError('The divisors must be effective!')
    if p.degree != q.degree:
        raise DomainError(
            f'The divisors have degrees {p.degree} and {q.degree}!'
        )
    for point in p.points:
        if min((abs(point - other) for other in q.points), default=1) < 1e-9:
            raise DomainError(f'The point {point} lies in both divisors!')
    chart = chart or Chart(1)
    total = q.total - p.total
    x, y = lattice.coordinates(np.array([total]))
    a, b = -int(round(float(y[0]))), int(round(float(x[0])))
    tau = lattice.tau
    mu = math.pi * (total - (b - a * tau)) / tau.imag
    lam = lattice.eta1 * total + TWO_PI_I * a - mu
    logger.debug(f'{total=} {a=} {b=} {lam=} {mu=}')
    return SmoothQuotientMap(
        lattice, chart, p, q, lam, mu, twist=twist, shift=(a, b)
    )


def sigma_candidate(g_map: SmoothQuotientMap) -> ScalarField:
    """Return ``prod sigma(z - q) / prod sigma(z - p) exp(lam z)``.

    :param g_map: The map whose divisors and ``lam`` are used.

    """
    lattice, chart = g_map.lattice, g_map.chart
    z = chart.z(0)
    candidate = (z * g_map.lam).exp()
    for point in g_map.q.points:
        candidate = candidate * lattice.sigma_field(z - point)
    for point in g_map.p.points:
        candidate = candidate / lattice.sigma_field(z - point)
    return candidate


class AbelPairing(NamedTuple):
    """AbelPairing(value, expected, defect, error, samples).

    :ivar value:  ``(1 / 2 pi i) integral(g^-1 dg ^ c dz)``.
    :ivar expected:  ``c (sum Q - sum P)``.
    :ivar defect:  The distance of ``value - expected`` to ``c Lambda``.

    """

    value: complex
    expected: complex
    defect: float
    error: float
    samples: int


def abel_pairing(
    g_map: SmoothQuotientMap,
    c: complex,
    spec: QuadratureSpec,
    radius: float = 1e-3,
) -> AbelPairing:
    """Return ``(1 / 2 pi i) integral_X g^-1 dg ^ c dz``.

    Only ``g^-1 dbar g`` enters, which is bounded; discs around the
    divisors are excised with ``spec.schedule`` or ``radius``.

    :param g_map: The quotient map.
    :param c: The coefficient of the holomorphic form ``c dz``.
    :param spec: The quadrature on the fundamental domain.
    :param radius: The excision radius without a schedule.

    """
    expected = c * (g_map.q.total - g_map.p.total)
    if c == 0:
        return AbelPairing(0j, expected, 0.0, 0.0, 0)
    chart = g_map.chart
    eta = KForm.covector(chart, 0) * c
    integrand = g_map.alpha.wedge(eta) * (1 / TWO_PI_I)
    excisions = tuple(
        Tube(center=(point,), axes=(0,), radius=radius)
        for point in g_map.support
    )
    domain = torus_domain(chart, g_map.lattice.tau, excisions)
    result = integrate(integrand, domain, spec)
    defect = abs(c) * g_map.lattice.lattice_distance(
        (result.value - expected) / c
    )
    logger.info(
        f'Abel pairing {result.value:.8f}, expected {expected:.8f} '
        f'mod the lattice, defect {defect:.2e}'
    )
    return AbelPairing(
        value=result.value,
        expected=expected,
        defect=defect,
        error=result.error,
        samples=result.samples,
    )


def _loop_start(
    g_map: SmoothQuotientMap, direction: complex, margin: float
) -> complex:
    lattice = g_map.lattice
    t = np.linspace(0, 1, 513)
    for offset in _LOOP_OFFSETS:
        start = offset * (lattice.tau if direction == 1 else 1)
        path = (start + t * direction).reshape(-1, 1)
        distance = periodic_distance(path, g_map.support, lattice.tau)
        if np.min(distance) > margin:
            return start
        logger.debug(f'{offset=} passes {np.min(distance)=} from the divisor')
    raise DomainError(
        'Every representative loop passes through a divisor point!'
    )


def loop_periods(
    form: KForm,
    g_map: SmoothQuotientMap,
    resolution: int = 512,
    margin: float = 0.02,
) -> Tuple[complex, complex]:
    """Integrate a closed 1-form over the two basis cycles.

    The cycles are ``t -> z0 + t`` and ``t -> z0 + t tau``; ``z0`` is
    shifted until the loop keeps ``margin`` from the divisors.

    :param form: A 1-form on the torus chart.
    :param g_map: Provides the lattice and the divisors.
    :param resolution: Gauss nodes per loop.
    :param margin: The required distance from the divisors.

    :raises DomainError: If no representative loop avoids the divisors.

    """
    spec = QuadratureSpec(method='gauss-grid', resolution=resolution)
    periods = []
    for direction in (1.0, g_map.lattice.tau):
        start = _loop_start(g_map, direction, margin)
        domain = segment_domain(g_map.chart, start, direction)
        periods.append(integrate(form, domain, spec).value)
    return periods[0], periods[1]


class ClassResult(NamedTuple):
    """ClassResult(windings, xi, xi_class, raw_class, mean).

    :ivar windings:  ``(1 / 2 pi i)`` times the periods of ``g^-1 dg``.
    :ivar xi:  ``2 pi i (m dx + n dy)`` with ``(m, n) = xi_class``.
    :ivar xi_class:  The rounded normalizing class.
    :ivar raw_class:  The real class cancelling the ``(0, 1)``-mean.
    :ivar mean:  The mean of the ``dconj(z)`` coefficient of
        ``g^-1 dg``.

    """

    windings: Windings
    xi: KForm
    xi_class: Tuple[int, int]
    raw_class: Tuple[float, float]
    mean: complex


def sample_torus(
    field: ScalarField, lattice: Lattice, size: int
) -> np.ndarray:
    """Return ``field`` on the midpoint grid, indexed ``[x, y]``.

    :param field: A field on a chart of dimension 1.
    :param lattice: The period lattice.
    :param size: The number of nodes per period.

    """
    nodes = (np.arange(size) + 0.5) / size
    x, y = np.meshgrid(nodes, nodes, indexing='ij')
    points = (x + lattice.tau * y).reshape(-1, 1)
    return field.evaluate(points).reshape(size, size)


def xi_form(
    lattice: Lattice, chart: Chart, m: float, n: float
) -> KForm:
    """Return ``2 pi i (m dx + n dy)``.

    :param lattice: The period lattice.
    :param chart: A chart of dimension 1.
    :param m: The ``dx`` period.
    :param n: The ``dy`` period.

    """
    x, y = lattice.real_coordinates(chart)
    return (KForm.scalar(x).d() * m + KForm.scalar(y).d() * n) * TWO_PI_I


def periods_and_class(
    g_map: SmoothQuotientMap,
    size: int = 64,
    resolution: int = 512,
    tol: float = 1e-6,
) -> ClassResult:
    """Return the loop windings of ``g`` and the normalizing class ``xi``.

    ``xi`` is the integral class nearest to the real class that cancels
    the mean of ``(g^-1 dg)^(0, 1)``; the two coincide exactly when the
    divisors are Abel-Jacobi equivalent.  The ``(0, 1)`` part of
    ``2 pi i (m dx + n dy)`` is ``pi (m tau - n) / Im tau``.

    :param g_map: The quotient map.
    :param size: The grid of the mean.
    :param resolution: Gauss nodes per loop.
    :param tol: The admissible distance of the windings to integers.

    :raises ObstructionSignal: If the windings are not integral.

    """
    lattice, chart = g_map.lattice, g_map.chart
    first, second = loop_periods(g_map.alpha, g_map, resolution)
    raw_m, raw_n = (first / TWO_PI_I).real, (second / TWO_PI_I).real
    windings = Windings(round(raw_m), round(raw_n), raw_m, raw_n)
    if max(abs(raw_m - windings.m), abs(raw_n - windings.n)) > tol:
        raise ObstructionSignal(
            f'The windings ({raw_m:.8f}, {raw_n:.8f}) are not integral!'
        )
    coefficient = g_map.alpha01.coefficient((1,))
    mean = complex(np.mean(sample_torus(coefficient, lattice, size)))
    target = -mean * lattice.tau.imag / math.pi
    x, y = lattice.coordinates(np.array([target]))
    raw_class = (float(y[0]), -float(x[0]))
    xi_class = (round(raw_class[0]), round(raw_class[1]))
    logger.debug(f'{windings=} {mean=} {raw_class=}')
    return ClassResult(
        windings=windings,
        xi=xi_form(lattice, chart, *xi_class),
        xi_class=xi_class,
        raw_class=raw_class,
        mean=mean,
    )


class DbarSolution(NamedTuple):
    """DbarSolution(gamma, modes, residual, mean).

    :ivar gamma:  The mean-zero solution as a trigonometric field.
    :ivar modes:  ``(k, l, coefficient)`` of the kept Fourier modes.
    :ivar residual:  ``max |dbar gamma - rho|`` on the grid.
    :ivar mean:  The mean of ``rho``.

    """

    gamma: ScalarField
    modes: Tuple[Tuple[int, int, complex], ...]
    residual: float
    mean: complex


def dbar_solve(
    rho: np.ndarray,
    lattice: Lattice,
    chart: Chart,
    tol: float = 1e-8,
    max_modes: int = 64,
) -> DbarSolution:
    """Solve ``dbar gamma = rho dconj(z)`` on the torus by FFT.

    ``dbar exp(2 pi i (k x + l y)) = pi (k tau - l) / Im tau`` times the
    mode, which is nonzero away from the constant mode.

    :param rho: The ``dconj(z)`` coefficient on the midpoint grid of
        :func:`sample_torus`.
    :param lattice: The period lattice.
    :param chart: A chart of dimension 1 for the field ``gamma``.
    :param tol: The admissible mean of ``rho`` and residual of a
        truncated solution.
    :param max_modes: Keep at most this many of the largest modes.

    :raises ObstructionSignal: If ``rho`` has a nonzero mean, that is
        the divisors are not Abel-Jacobi equivalent.
    :raises QuadratureError: If the kept modes miss ``rho`` by more than
        ``tol``.

    """
    size = rho.shape[0]
    frequencies = fft.fftfreq(size, 1 / size).astype(int)
    k, l = np.meshgrid(frequencies, frequencies, indexing='ij')
    # midpoint nodes shift every mode by half a cell
    shift = np.exp(-1j * np.pi * (k + l) / size)
    coefficients = fft.fft2(rho) / size ** 2 * shift
    mean = complex(coefficients[0, 0])
    if abs(mean) > tol:
        raise ObstructionSignal(
            f'The (0,1)-form has mean {abs(mean):.3e}; the divisors are '
            'not Abel-Jacobi equivalent!'
        )
    tau = lattice.tau
    multiplier = math.pi * (k * tau - l) / tau.imag
    multiplier[0, 0] = 1
    gamma_hat = coefficients / multiplier
    gamma_hat[0, 0] = 0
    order = np.argsort(-np.abs(gamma_hat), axis=None)[:max_modes]
    largest = float(np.max(np.abs(gamma_hat), initial=0.0))
    kept = [
        (int(k.flat[i]), int(l.flat[i]), complex(gamma_hat.flat[i]))
        for i in order
        if abs(gamma_hat.flat[i]) > 1e-13 * max(largest, 1e-300)
    ]
    nodes = (np.arange(size) + 0.5) / size
    x_grid, y_grid = np.meshgrid(nodes, nodes, indexing='ij')
    dbar_gamma = np.zeros_like(rho, dtype=complex)
    x, y = lattice.real_coordinates(chart)
    gamma = ScalarField.constant(chart, 0)
    for mode_k, mode_l, value in kept:
        wave = np.exp(TWO_PI_I * (mode_k * x_grid + mode_l * y_grid))
        factor = math.pi * (mode_k * tau - mode_l) / tau.imag
        dbar_gamma += value * factor * wave
        phase = (x * mode_k + y * mode_l) * TWO_PI_I
        gamma = gamma + phase.exp() * value
    residual = float(np.max(np.abs(dbar_gamma - (rho - mean))))
    if len(kept) == max_modes and residual > tol:
        raise QuadratureError(
            f'The dbar solution truncated to {max_modes} modes leaves '
            f'the residual {residual:.3e} above {tol:.3e}!'
        )
    return DbarSolution(
        gamma=gamma.memoized(),
        modes=tuple(kept),
        residual=residual,
        mean=mean,
    )


class PsiAndF(NamedTuple):
    """PsiAndF(psi, f).

    :ivar psi:  ``g^-1 dg + xi + d gamma``, of type ``(1, 0)``.
    :ivar f:  ``g exp(gamma + 2 pi i (m x + n y))``, equal to ``1`` at
        the base point.

    """

    psi: KForm
    f: ScalarField


def build_psi_and_f(
    g_map: SmoothQuotientMap,
    classes: ClassResult,
    solution: DbarSolution,
    basepoint: complex,
) -> PsiAndF:
    """Return ``psi`` and ``f = exp(integral_basepoint psi)``.

    :param g_map: The quotient map.
    :param classes: The output of :func:`periods_and_class`.
    :param solution: The output of :func:`dbar_solve` for
        ``rho = -(g^-1 dbar g + xi^(0, 1))``.
    :param basepoint: A point away from the divisors.

    """
    lattice, chart = g_map.lattice, g_map.chart
    gamma = solution.gamma
    psi = g_map.alpha + classes.xi + KForm.scalar(gamma).d()
    x, y = lattice.real_coordinates(chart)
    m, n = classes.xi_class
    exponent = gamma + (x * m + y * n) * TWO_PI_I
    unnormalized = g_map.g * exponent.exp()
    base = complex(unnormalized.evaluate(np.array([[basepoint]]))[0])
    return PsiAndF(psi=psi, f=(unnormalized * (1 / base)).memoized())


def divisor_windings(
    form: KForm,
    points: Sequence[complex],
    radius: float,
    resolution: int = 256,
) -> Tuple[float, ...]:
    """Return ``(1 / 2 pi i) integral(form)`` around each point.

    :param form: A 1-form on the torus chart, ``df / f`` or ``psi``.
    :param points: The centers.
    :param radius: The circle radius, below the point separation.
    :param resolution: Nodes per circle.

    """
    spec = QuadratureSpec(method='periodic-grid', resolution=resolution)
    windings = []
    for point in points:
        circle = circle_domain(form.chart, point, radius)
        value = integrate(form, circle, spec).value / TWO_PI_I
        windings.append(value.real)
    return tuple(windings)


def alpha01_sup(
    g_map: SmoothQuotientMap, size: int, radius: float
) -> float:
    """Return ``max |g^-1 dbar g|`` on the grid outside discs of ``radius``.

    :param g_map: The quotient map.
    :param size: The grid size.
    :param radius: The excision radius.

    """
    nodes = (np.arange(size) + 0.5) / size
    x, y = np.meshgrid(nodes, nodes, indexing='ij')
    points = (x + g_map.lattice.tau * y).reshape(-1, 1)
    keep = periodic_distance(points, g_map.support, g_map.lattice.tau) > radius
    values = g_map.alpha01.coefficient((1,)).evaluate(points[keep])
    return float(np.max(np.abs(values), initial=0.0))


def normalized_rho(
    g_map: SmoothQuotientMap, classes: ClassResult, size: int
) -> np.ndarray:
    """Return ``-(g^-1 dbar g + xi^(0, 1))`` on the midpoint grid.

    :param g_map: The quotient map.
    :param classes: The output of :func:`periods_and_class`.
    :param size: The grid size.

    """
    normalized = g_map.alpha01 + classes.xi.type_project(0, 1)
    return -sample_torus(
        normalized.coefficient((1,)), g_map.lattice, size
    )
