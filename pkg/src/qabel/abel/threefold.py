"""The quaternionic Abel identity on a local model of a threefold.

The model is a box in ``C^3`` with two complex lines ``P`` and ``Q`` of
the form ``{z1 = c1, z2 = c2}`` and the map

    g = ((z1 - c1Q) + (z2 - c2Q) j) ((z1 - c1P) + (z2 - c2P) j)^-1

which is smooth and invertible off the lines, with ``Q`` as zero and
``P`` as pole.  For ``alpha = 1/3 g* tr((h^-1 dh)^3)`` and a compactly
supported 2-form ``beta``::

    integral alpha ^ d beta = 8 pi^2 (integral_Q beta - integral_P beta)

up to an orientation sign that is calibrated once.

"""
from __future__ import annotations

from dataclasses import dataclass
import math
from typing import NamedTuple
from typing import TYPE_CHECKING

from qabel.algebra.quaternion import inverse
from qabel.algebra.quaternion import multiply
from qabel.algebra.quaternion import Quaternion
from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Chart
from qabel.forms.fields import ScalarField
from qabel.forms.kform import KForm
from qabel.geometry.group_calculus import full_three_form
from qabel.geometry.group_calculus import GroupMap
from qabel.integrate.domains import box_domain
from qabel.integrate.domains import hopf_shell
from qabel.integrate.domains import line_domain
from qabel.integrate.quadrature import extrapolate
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_collections import LocalizationResult
from qabel.qa_collections import Partial
from qabel.qa_collections import Tube
from qabel.qa_constants import ABEL_CONSTANT

if TYPE_CHECKING:
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.integrate.domains import Domain
    from qabel.qa_collections import IntegralResult
    from qabel.qa_typing import Role

__all__ = (
    'AlgebraicPairing',
    'LineDivisor',
    'LocalModel',
    'algebraic_equivalence_check',
    'alpha_pq',
    'bump_20',
    'calibrate_sign',
    'canonical_beta',
    'default_model',
    'line_integral',
    'localization_check',
)


@dataclass(frozen=True)
class LineDivisor:
    """LineDivisor(center, role, sign).

    :param center: ``(c1, c2)`` of the line ``{z1 = c1, z2 = c2}``.
    :param role: ``zero`` for ``Q``, ``pole`` for ``P``.
    :param sign: The orientation sign of the line.

    """

    center: Tuple[complex, complex]
    role: Role = 'zero'
    sign: int = 1

    def quaternion(self, chart: Chart) -> Quaternion:
        """Return ``(z1 - c1) + (z2 - c2) j``.

        :param chart: A chart of dimension 3.

        """
        c1, c2 = self.center
        return Quaternion(chart.z(0) - c1, chart.z(1) - c2)

    def tube(self, radius: float) -> Tube:
        return Tube(center=tuple(self.center), axes=(0, 1), radius=radius)


class LocalModel:
    """Box of half-width ``half_width`` with the lines ``p`` and ``q``.

    :param p: The pole line.
    :param q: The zero line.
    :param half_width: Half the side of the box, in every real
        coordinate.
    :param radius: The radius of the tubes inside which ``g`` may not
        be evaluated.

    :raises DomainError: If the roles are wrong or a line leaves the
        box.

    """

    def __init__(
        self,
        p: LineDivisor,
        q: LineDivisor,
        half_width: float = 3.0,
        radius: float = 1e-3,
    ) -> None:
        if p.role != 'pole' or q.role != 'zero':
            raise DomainError('P must be the pole line and Q the zero line!')
        for line in (p, q):
            if any(
                abs(part) > half_width - radius
                for c in line.center
                for part in (c.real, c.imag)
            ):
                raise DomainError(
                    f'The line through {line.center} leaves the box!'
                )
        self.p = p
        self.q = q
        self.half_width = half_width
        self.radius = radius
        self.chart = Chart(3, box=((-half_width, half_width),) * 6)
        if self.trivial:
            one = ScalarField.constant(self.chart, 1)
            zero = ScalarField.constant(self.chart, 0)
            self.g = GroupMap(one, zero)
        else:
            product = multiply(
                q.quaternion(self.chart), inverse(p.quaternion(self.chart))
            )
            self.g = GroupMap(product.a, product.b, self.tubes)

    def __repr__(self) -> str:
        return f'LocalModel(P={self.p.center}, Q={self.q.center})'

    @property
    def trivial(self) -> bool:
        return self.p.center == self.q.center

    @property
    def coplanar(self) -> bool:
        """Whether both lines lie in one surface ``{z2 = const}``."""
        return self.p.center[1] == self.q.center[1]

    @property
    def tubes(self) -> Tuple[Tube, ...]:
        return (self.p.tube(self.radius), self.q.tube(self.radius))

    @property
    def separation(self) -> float:
        (p1, p2), (q1, q2) = self.p.center, self.q.center
        return math.hypot(abs(p1 - q1), abs(p2 - q2))

    @property
    def square(self) -> Tuple[float, float]:
        return -self.half_width, self.half_width

    def swapped(self) -> LocalModel:
        """Return the model with the roles of ``P`` and ``Q`` exchanged."""
        return LocalModel(
            LineDivisor(self.q.center, 'pole', self.q.sign),
            LineDivisor(self.p.center, 'zero', self.p.sign),
            self.half_width,
            self.radius,
        )


def alpha_pq(model: LocalModel) -> KForm:
    """Return ``1/3 g* tr((h^-1 dh)^3)``, the current of ``Q - P``.

    :param model: The local model.

    """
    return full_three_form(model.g) * (1 / 3)


def canonical_beta(
    chart: Chart,
    center: Tuple[complex, complex],
    width: float = 0.2,
    transverse: float = 0.7,
) -> KForm:
    """Return ``b1 b3 (i/2) dz3 ^ dconj(z3)``, a real Gaussian bump.

    ``b1 = exp(-|(z1, z2) - center|^2 / width^2)`` and
    ``b3 = exp(-|z3|^2 / transverse^2)``, so that the integral over the
    line through ``center`` is ``pi transverse^2``.

    :param chart: A chart of dimension 3.
    :param center: ``(c1, c2)``.
    :param width: The width across the line.
    :param transverse: The width along the line.

    """
    c1, c2 = center
    across = (chart.z(0) - c1).abs2() + (chart.z(1) - c2).abs2()
    along = chart.z(2).abs2()
    bump = (across * (-1 / width ** 2) + along * (-1 / transverse ** 2)).exp()
    return KForm(chart, 2, {(2, 5): bump * 0.5j})


def bump_20(
    chart: Chart,
    center: Tuple[complex, complex, complex],
    width: float = 0.3,
    polynomial: Optional[ScalarField] = None,
) -> KForm:
    """Return ``exp(-|z - center|^2 / width^2) p dz1 ^ dz3``.

    :param chart: A chart of dimension 3.
    :param center: The center of the bump.
    :param width: Its width.
    :param polynomial: The factor ``p``; ``1`` by default.

    """
    distance = ScalarField.constant(chart, 0)
    for i, c in enumerate(center):
        distance = distance + (chart.z(i) - c).abs2()
    bump = (distance * (-1 / width ** 2)).exp()
    if polynomial is not None:
        bump = bump * polynomial
    return KForm(chart, 2, {(0, 2): bump})


def line_integral(
    beta: KForm,
    line: LineDivisor,
    square: Tuple[float, float],
    spec: Optional[QuadratureSpec] = None,
) -> complex:
    """Return the integral of the 2-form ``beta`` over a line.

    :param beta: A 2-form on a chart of dimension 3.
    :param line: The line, with its orientation sign.
    :param square: The range of ``x3`` and ``y3``.
    :param spec: The quadrature; Gauss ``64^2`` by default.

    """
    spec = spec or QuadratureSpec(method='gauss-grid', resolution=64)
    domain = line_domain(beta.chart, line.center, square)
    return line.sign * integrate(beta, domain, spec).value


def _shell_integral(
    form: KForm,
    model: LocalModel,
    line: LineDivisor,
    spec: QuadratureSpec,
    outer: float,
) -> IntegralResult:
    radii = spec.schedule or (model.radius,)
    inner_spec = QuadratureSpec(
        method=spec.method,
        resolution=spec.resolution,
        seed=spec.seed,
        replicates=spec.replicates,
        chunk=spec.chunk,
    )
    partials = []
    result = None
    for radius in radii:
        shell = hopf_shell(
            model.chart, radius, outer, model.square, center=line.center
        )
        result = integrate(form, shell, inner_spec)
        partials.append(Partial(radius, result.value))
    value = (
        extrapolate(partials).value if len(partials) >= 3 else result.value
    )
    return result._replace(value=value, partials=tuple(partials))


def localization_check(
    model: LocalModel,
    beta: KForm,
    spec: QuadratureSpec,
    sign: int = 1,
    domain: Optional[Domain] = None,
    around: Optional[LineDivisor] = None,
    outer: Optional[float] = None,
    line_spec: Optional[QuadratureSpec] = None,
) -> LocalizationResult:
    """Compare ``1/3 integral tr(omega^3) ^ d beta`` with the line integrals.

    The left side is integrated over ``domain`` (the box with both tubes
    excised by default) or, when ``around`` is given, over shells
    ``delta <= |(z1, z2) - c| <= outer`` around that line with the inner
    radius taken from ``spec.schedule`` and extrapolated.  The latter
    needs ``d beta`` to vanish outside the shell.

    :param model: The local model.
    :param beta: A 2-form decaying to zero at the box boundary.
    :param spec: The quadrature of the left side.
    :param sign: The calibrated orientation sign.
    :param domain: The domain of the left side.
    :param around: Integrate in shells around this line.
    :param outer: The outer shell radius; ``0.9`` times the line
        separation by default.
    :param line_spec: The quadrature of the line integrals.

    :raises QuadratureError: If a quadrature misses its tolerance.

    """
    integrand = alpha_pq(model).wedge(beta.d())
    if around is not None:
        outer = outer or 0.9 * (model.separation or model.half_width)
        left = _shell_integral(integrand, model, around, spec, outer)
    else:
        left = integrate(
            integrand,
            domain or box_domain(model.chart, excisions=model.tubes),
            spec,
        )
    square = model.square
    rhs = ABEL_CONSTANT * (
        line_integral(beta, model.q, square, line_spec)
        - line_integral(beta, model.p, square, line_spec)
    )
    lhs = sign * left.value
    noise = max(3 * left.error, 1e-10)
    if abs(rhs) < noise:
        logger.warning(
            f'The line integrals {abs(rhs):.2e} are below the noise '
            f'{noise:.2e}; the check is inconclusive'
        )
        ratio = complex('nan')
    else:
        ratio = lhs / rhs
    logger.info(f'Localization lhs {lhs:.6f}, rhs {rhs:.6f}')
    return LocalizationResult(
        lhs=lhs, rhs=rhs, ratio=ratio, error=left.error, sign=sign
    )


def calibrate_sign(
    model: LocalModel, spec: QuadratureSpec, width: float = 0.2
) -> int:
    """Return the orientation sign from the canonical bump around ``Q``.

    :param model: A nontrivial local model.
    :param spec: The shell quadrature, with its inner radii schedule.
    :param width: The width of the canonical bump.

    :raises DomainError: If ``P = Q``.
    :raises QuadratureError: If the calibration ratio is not finite.

    """
    if model.trivial:
        raise DomainError('The sign needs distinct lines P and Q!')
    beta = canonical_beta(model.chart, model.q.center, width)
    result = localization_check(model, beta, spec, around=model.q)
    if not math.isfinite(result.ratio.real):
        raise QuadratureError(
            'The orientation sign is inconclusive: the calibration '
            'ratio is not finite!'
        )
    sign = 1 if result.ratio.real > 0 else -1
    logger.info(f'Calibrated orientation sign {sign}')
    return sign


class AlgebraicPairing(NamedTuple):
    """AlgebraicPairing(value, mass, error, coplanar).

    :ivar value:  ``integral dbar beta ^ alpha^((1, 2) + (0, 3))``.
    :ivar mass:  The integral of the absolute integrand.
    :ivar error:  The error estimate of ``value``.
    :ivar coplanar:  Whether the lines share a surface ``{z2 = c}``.

    """

    value: complex
    mass: float
    error: float
    coplanar: bool


def algebraic_equivalence_check(
    model: LocalModel,
    beta20: KForm,
    spec: QuadratureSpec,
    domain: Optional[Domain] = None,
    require_coplanar: bool = True,
) -> AlgebraicPairing:
    """Pair ``alpha^((1, 2) + (0, 3))`` with ``dbar beta^(2, 0)``.

    :param model: The local model.
    :param beta20: A ``(2, 0)``-form decaying at the box boundary.
    :param spec: The quadrature.
    :param domain: The box with both tubes excised by default.
    :param require_coplanar: Reject lines in different surfaces.

    :raises DomainError: If ``beta20`` is not of type ``(2, 0)`` or the
        lines are required but fail to be coplanar.

    """
    if require_coplanar and not model.coplanar:
        raise DomainError(
            'Algebraic equivalence needs both lines in one surface '
            '{z2 = c}!'
        )
    if beta20.degree != 2 or any(
        beta20.hodge_type(index) != (2, 0) for index in beta20.terms
    ):
        raise DomainError('The test form must be of type (2, 0)!')
    alpha = alpha_pq(model)
    current = alpha.type_project(1, 2) + alpha.type_project(0, 3)
    integrand = beta20.d_double_prime().wedge(current)
    domain = domain or box_domain(model.chart, excisions=model.tubes)
    result = integrate(integrand, domain, spec)
    mass = integrate(integrand, domain, spec, absolute=True)
    logger.info(
        f'Algebraic pairing {abs(result.value):.3e} against mass '
        f'{mass.value.real:.3e}'
    )
    return AlgebraicPairing(
        value=result.value,
        mass=mass.value.real,
        error=result.error,
        coplanar=model.coplanar,
    )


def default_model(
    coplanar: bool = True,
    half_width: float = 3.0,
    offset: Sequence[complex] = (1, 0.7),
) -> LocalModel:
    """Return ``Q`` through the origin and ``P`` through ``(1, 0)``.

    :param coplanar: Use ``P = (1, 0)``, in the surface ``{z2 = 0}``,
        instead of ``offset``.
    :param half_width: Half the side of the box.
    :param offset: The generic center of ``P``.

    """
    c1, c2 = (1, 0) if coplanar else tuple(offset)
    return LocalModel(
        LineDivisor((complex(c1), complex(c2)), 'pole'),
        LineDivisor((0j, 0j), 'zero'),
        half_width,
    )
