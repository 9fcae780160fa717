"""Quadrature of top-degree forms over parameterized domains.

Three rules are available:

* ``gauss-grid``: tensor Gauss-Legendre, ``resolution`` nodes per axis;
* ``periodic-grid``: equal weights at cell midpoints, spectrally
  accurate for periodic integrands;
* ``qmc``: scrambled Sobol points in ``replicates`` independent
  scramblings keyed by the seed.

Singular sets are excised at every radius of the schedule in a single
pass and the partial integrals are extrapolated to zero radius.  Each
chunk is summed with numpy and the chunk sums are combined with
``math.fsum``, so changing the chunk size moves results only by
rounding.

"""
from __future__ import annotations

from dataclasses import dataclass
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import roots_legendre
from scipy.stats import qmc

from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Variables
from qabel.log import logger
from qabel.qa_collections import DecayFit
from qabel.qa_collections import Extrapolation
from qabel.qa_collections import IntegralResult
from qabel.qa_collections import Partial
from qabel.qa_constants import DEFAULT_CHUNK

if TYPE_CHECKING:
    from typing import Callable
    from typing import Iterator
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.forms.kform import KForm
    from qabel.integrate.domains import Domain
    from qabel.qa_typing import Method
    from qabel.qa_typing import Schedule

    Density = Callable[[np.ndarray, np.ndarray], np.ndarray]

__all__ = (
    'QuadratureSpec',
    'extrapolate',
    'fit_decay',
    'integrate',
    'integrate_density',
    'pullback',
)

_METHODS = ('periodic-grid', 'gauss-grid', 'qmc')


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration strategy.

    :param method: ``periodic-grid``, ``gauss-grid`` or ``qmc``.
    :param resolution: Nodes per axis for grids, total samples for
        ``qmc`` (rounded up to a power of two).
    :param schedule: Excision radii, strictly decreasing.
    :param seed: Determines the QMC point set.
    :param tolerance: Raise :class:`QuadratureError` when the error
        estimate exceeds it; ``None`` disables the check.
    :param replicates: The number of independent QMC scramblings.
    :param chunk: Points per evaluation batch.
    :param extrapolate: Extrapolate partials when the schedule has more
        than one radius.

    """

    method: Method = 'gauss-grid'
    resolution: int = 16
    schedule: Schedule = ()
    seed: int = 0
    tolerance: Optional[float] = None
    replicates: int = 8
    chunk: int = DEFAULT_CHUNK
    extrapolate: bool = True

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise DomainError(f'Unknown quadrature method {self.method!r}!')
        if self.resolution < 1:
            raise DomainError('The resolution must be positive!')
        if any(
            later >= earlier
            for earlier, later in zip(self.schedule, self.schedule[1:])
        ) or any(delta <= 0 for delta in self.schedule):
            raise DomainError(
                'The excision schedule must be positive and strictly '
                'decreasing!'
            )
        if self.extrapolate and len(self.schedule) == 2:
            raise DomainError(
                'Extrapolation needs at least 3 excision radii!'
            )
        if self.method == 'qmc' and self.replicates < 2:
            raise DomainError('QMC needs at least 2 replicates!')

    @property
    def radii(self) -> Schedule:
        return self.schedule or (0.0,)

    def coarse(self) -> QuadratureSpec:
        """Return the grid spec with half the nodes per axis."""
        return QuadratureSpec(
            method=self.method,
            resolution=max(1, self.resolution // 2),
            schedule=self.schedule,
            seed=self.seed,
            chunk=self.chunk,
            extrapolate=self.extrapolate,
        )


def pullback(
    form: KForm, variables: Variables, jacobian: np.ndarray
) -> np.ndarray:
    """Return the density of a top-degree form in the parameters.

    The coefficient of each multi-index ``I`` is multiplied by the
    ``k x k`` minor of the Jacobian in the rows ``I``.

    :param form: A form whose degree equals the parameter dimension.
    :param variables: The batch of points to evaluate at.
    :param jacobian: Shape ``(P, 2m, k)``.

    """
    density = np.zeros(variables.npoints, complex)
    for index, coefficient in form.terms.items():
        minor = np.linalg.det(jacobian[:, list(index), :])
        density += variables.evaluate(coefficient).value * minor
    return density


def _grid(spec: QuadratureSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Return the 1-d nodes on ``[0, 1]`` and their weights."""
    count = spec.resolution
    if spec.method == 'gauss-grid':
        nodes, weights = roots_legendre(count)
        return (nodes + 1) / 2, weights / 2
    return (np.arange(count) + 0.5) / count, np.full(count, 1 / count)


def _grid_batches(
    spec: QuadratureSpec, domain: Domain
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    nodes, weights = _grid(spec)
    dimension = domain.dimension
    total = len(nodes) ** dimension
    span = domain.upper - domain.lower
    for start in range(0, total, spec.chunk):
        flat = np.arange(start, min(start + spec.chunk, total))
        digits = np.stack(
            np.unravel_index(flat, (len(nodes),) * dimension), axis=1
        )
        t = domain.lower + nodes[digits] * span
        yield t, np.prod(weights[digits], axis=1) * np.prod(span)


class _Accumulator:
    """Per-radius chunk sums, combined exactly at the end."""

    def __init__(self, radii: Schedule) -> None:
        self.radii = radii
        self.real: List[List[float]] = [[] for _ in radii]
        self.imag: List[List[float]] = [[] for _ in radii]
        self.samples = 0

    def add(self, contributions: np.ndarray, distance: np.ndarray) -> None:
        self.samples += contributions.shape[0]
        for number, delta in enumerate(self.radii):
            kept = contributions[distance >= delta]
            total = complex(np.sum(kept))
            self.real[number].append(total.real)
            self.imag[number].append(total.imag)

    def totals(self) -> List[complex]:
        return [
            complex(math.fsum(real), math.fsum(imag))
            for real, imag in zip(self.real, self.imag)
        ]


def _accumulate(
    density: Density,
    domain: Domain,
    spec: QuadratureSpec,
    batches: Iterator[Tuple[np.ndarray, np.ndarray]],
) -> _Accumulator:
    accumulator = _Accumulator(spec.radii)
    smallest = min(spec.radii)
    for t, weights in batches:
        points, jacobian = domain.mapping(t)
        distance = (
            domain.distance(points)
            if domain.singular
            else np.full(t.shape[0], np.inf)
        )
        if not spec.schedule and domain.excisions:
            radius = min(tube.radius for tube in domain.excisions)
            distance = np.where(distance < radius, -1.0, np.inf)
        keep = distance >= smallest
        contributions = np.zeros(t.shape[0], complex)
        if np.any(keep):
            contributions[keep] = (
                density(points[keep], jacobian[keep]) * weights[keep]
            )
        accumulator.add(contributions, distance)
    return accumulator


def _finish(
    totals: Sequence[complex], spec: QuadratureSpec
) -> Tuple[complex, Tuple[Partial, ...], float]:
    partials = tuple(
        Partial(delta=delta, value=total)
        for delta, total in zip(spec.radii, totals)
    )
    if spec.extrapolate and len(partials) >= 3:
        fit = extrapolate(partials)
        return fit.value, partials, fit.residual
    return totals[-1], partials if spec.schedule else (), 0.0


def _integrate_grid(
    density: Density, domain: Domain, spec: QuadratureSpec
) -> IntegralResult:
    fine = _accumulate(density, domain, spec, _grid_batches(spec, domain))
    value, partials, residual = _finish(fine.totals(), spec)
    coarse_spec = spec.coarse()
    coarse = _accumulate(
        density, domain, coarse_spec, _grid_batches(coarse_spec, domain)
    )
    coarse_value, _, _ = _finish(coarse.totals(), coarse_spec)
    return IntegralResult(
        value=value,
        error=abs(value - coarse_value),
        samples=fine.samples,
        partials=partials,
        residual=residual,
    )


def _qmc_batches(
    domain: Domain, count: int, chunk: int, seed: np.random.SeedSequence
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    sampler = qmc.Sobol(
        d=domain.dimension, scramble=True, seed=np.random.default_rng(seed)
    )
    step = min(count, 2 ** int(math.log2(max(chunk, 1))))
    weight = domain.parameter_volume / count
    for _ in range(count // step):
        unit = sampler.random(step)
        t = domain.lower + unit * (domain.upper - domain.lower)
        yield t, np.full(step, weight)


def _integrate_qmc(
    density: Density, domain: Domain, spec: QuadratureSpec
) -> IntegralResult:
    per_replicate = 2 ** max(
        1, round(math.log2(max(spec.resolution / spec.replicates, 2)))
    )
    children = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
    replicate_values: List[complex] = []
    replicate_totals: List[List[complex]] = []
    samples = 0
    for child in children:
        accumulator = _accumulate(
            density,
            domain,
            spec,
            _qmc_batches(domain, per_replicate, spec.chunk, child),
        )
        samples += accumulator.samples
        totals = accumulator.totals()
        replicate_totals.append(totals)
        replicate_values.append(_finish(totals, spec)[0])
    mean_totals = [
        complex(np.mean(column)) for column in zip(*replicate_totals)
    ]
    value, partials, residual = _finish(mean_totals, spec)
    spread = float(np.std(replicate_values, ddof=1))
    return IntegralResult(
        value=value,
        error=spread / math.sqrt(spec.replicates),
        samples=samples,
        partials=partials,
        residual=residual,
    )


def integrate_density(
    density: Density, domain: Domain, spec: QuadratureSpec
) -> IntegralResult:
    """Integrate a density given on points and Jacobians.

    :param density: ``(points, jacobian) -> (P,)`` values.
    :param domain: The integration domain.
    :param spec: The quadrature strategy.

    :raises QuadratureError: If the error estimate exceeds
        ``spec.tolerance``.

    """
    logger.debug(f'{domain.label=} {spec.method=} {spec.resolution=}')
    if spec.method == 'qmc':
        result = _integrate_qmc(density, domain, spec)
    else:
        result = _integrate_grid(density, domain, spec)
    if spec.tolerance is not None and result.error > spec.tolerance:
        raise QuadratureError(
            f'The error estimate {result.error:.3e} exceeds the tolerance '
            f'{spec.tolerance:.3e} on {domain.label or "the domain"}!'
        )
    return result


def integrate(
    form: KForm, domain: Domain, spec: QuadratureSpec, absolute: bool = False
) -> IntegralResult:
    """Integrate a top-degree form over ``domain``.

    :param form: A form of degree ``domain.dimension``.
    :param domain: The integration domain.
    :param spec: The quadrature strategy.
    :param absolute: Integrate ``|density|`` instead, which gives the
        unsigned mass of the form.

    :raises DomainError: If the degree does not match the domain.

    """
    if form.degree != domain.dimension:
        raise DomainError(
            f'A form of degree {form.degree} cannot be integrated over a '
            f'{domain.dimension}-dimensional domain!'
        )

    def density(points: np.ndarray, jacobian: np.ndarray) -> np.ndarray:
        values = pullback(form, Variables(form.chart, points), jacobian)
        return np.abs(values) if absolute else values

    return integrate_density(density, domain, spec)


def extrapolate(partials: Sequence[Partial]) -> Extrapolation:
    """Extrapolate excised integrals to zero radius.

    Fits ``value(delta) = v + c1 delta + c2 delta log(delta)^2`` by least
    squares and returns ``v``.

    >>> fit = extrapolate([Partial(0.4, 2), Partial(0.2, 2), Partial(0.1, 2)])
    >>> round(fit.value.real, 12)
    2.0

    :param partials: At least three ``(delta, value)`` pairs with
        ``delta`` strictly decreasing.

    :raises QuadratureError: If there are fewer than three partials, the
        radii are not strictly decreasing or the fit is ill-conditioned.

    """
    if len(partials) < 3:
        raise QuadratureError('Extrapolation needs at least 3 partials!')
    deltas = np.array([partial.delta for partial in partials], float)
    if np.any(np.diff(deltas) >= 0) or np.any(deltas <= 0):
        raise QuadratureError(
            'The excision radii must be positive and strictly decreasing!'
        )
    values = np.array([partial.value for partial in partials], complex)
    design = np.stack(
        [np.ones_like(deltas), deltas, deltas * np.log(deltas) ** 2], axis=1
    )
    scale = np.max(np.abs(design), axis=0)
    if np.linalg.cond(design / scale) > 1e12:
        raise QuadratureError('The extrapolation fit is ill-conditioned!')
    solution, *_ = np.linalg.lstsq(design / scale, values, rcond=None)
    coefficients = solution / scale
    residual = float(np.linalg.norm(design @ coefficients - values))
    return Extrapolation(
        value=complex(coefficients[0]),
        residual=residual,
        coefficients=tuple(complex(c) for c in coefficients[1:]),
    )


def fit_decay(
    radii: Sequence[float], values: Sequence[float], log_power: float = 1.0
) -> DecayFit:
    """Fit ``value = C eps^p |log eps|^k`` with fixed ``k``.

    :param radii: The radii ``eps``, all in ``(0, 1)``.
    :param values: Positive values, one per radius.
    :param log_power: The fixed power ``k`` of ``|log eps|``.

    :raises QuadratureError: If fewer than two radii or a non-positive
        value are given.

    """
    eps = np.asarray(radii, float)
    mass = np.asarray(values, float)
    if eps.shape[0] < 2 or np.any(mass <= 0):
        raise QuadratureError('A decay fit needs positive values at 2+ radii!')
    target = np.log(mass) - log_power * np.log(np.abs(np.log(eps)))
    design = np.stack([np.ones_like(eps), np.log(eps)], axis=1)
    (log_constant, exponent), *_ = np.linalg.lstsq(design, target, rcond=None)
    return DecayFit(
        exponent=float(exponent),
        log_power=float(log_power),
        constant=float(np.exp(log_constant)),
    )
