"""Maurer-Cartan calculus on the group ``H* = (0, inf) x SU(2)``.

For a map ``g = r * kappa`` into the nonzero quaternions the
left-invariant form pulls back to::

    g^-1 dg = r^-1 dr + (conj(u) du + v dconj(v))
              + (conj(u) dv - v du) j

with ``kappa = u + v j``.  ``tr((kappa^-1 dkappa)^3)`` is real and
closed; integrated over ``S^3`` it gives ``12 vol(S^3) = 24 pi^2``.

"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qabel.algebra.quaternion import multiply
from qabel.algebra.quaternion import Quaternion
from qabel.exceptions import SingularEvaluationError
from qabel.forms.fields import Chart
from qabel.forms.fields import ScalarField
from qabel.forms.kform import KForm
from qabel.forms.qform import QForm
from qabel.integrate.domains import s3_domain
from qabel.integrate.domains import tube_distance
from qabel.integrate.domains import volume_density
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import integrate_density
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_collections import S3Constant
from qabel.qa_constants import SINGULAR_THRESHOLD

if TYPE_CHECKING:
    from typing import Callable
    from typing import Optional
    from typing import Tuple

    from qabel.forms.autodiff import Jet
    from qabel.forms.fields import Variables
    from qabel.qa_collections import Tube
    from qabel.qa_typing import ChartName

__all__ = (
    'GroupMap',
    'full_three_form',
    'invariant_three_form',
    'maurer_cartan',
    's3_constant',
    'scale_three_form',
)


class GroupMap:
    """Smooth map ``x -> a(x) + b(x) j`` from a chart into ``H*``.

    Evaluating any derived field inside one of the ``excisions`` or
    where ``|a|^2 + |b|^2 < threshold`` raises
    :class:`SingularEvaluationError`.

    :param a: The complex part.
    :param b: The ``j`` part.
    :param excisions: Declared neighbourhoods of the zero set.
    :param threshold: The smallest admissible ``|g|^2``.

    """

    def __init__(
        self,
        a: ScalarField,
        b: ScalarField,
        excisions: Tuple[Tube, ...] = (),
        threshold: float = SINGULAR_THRESHOLD,
    ) -> None:
        self.chart: Chart = a.chart
        self.excisions = excisions
        self.threshold = threshold
        self.a = a.guarded(self._check_points).memoized()
        self.b = b.guarded(self._check_points).memoized()
        self.norm2 = ScalarField(
            self.chart, self._norm2_rule(), cached=True, label='|g|^2'
        )

    def _check_points(self, points: np.ndarray) -> None:
        if self.excisions and np.any(
            tube_distance(points, self.excisions)
            < min(tube.radius for tube in self.excisions)
        ):
            raise SingularEvaluationError(
                'The group map is evaluated inside an excision tube!'
            )

    def _norm2_rule(self) -> Callable[[Variables], Jet]:
        squared = self.a.abs2() + self.b.abs2()

        def rule(variables: Variables) -> Jet:
            jet = variables.evaluate(squared)
            if np.any(np.abs(jet.value) < self.threshold):
                raise SingularEvaluationError(
                    'The group map vanishes at an evaluation point!'
                )
            return jet

        return rule

    @property
    def quaternion(self) -> Quaternion:
        return Quaternion(self.a, self.b)

    def inverse(self) -> Quaternion:
        """Return ``g^-1`` as a quaternion of fields."""
        reciprocal = self.norm2.reciprocal().memoized()
        return Quaternion(
            (self.a.conjugate() * reciprocal).memoized(),
            (-self.b * reciprocal).memoized(),
        )

    def scale(self) -> ScalarField:
        """Return ``r = |g|``."""
        return self.norm2.sqrt().memoized()

    def unit(self) -> GroupMap:
        """Return ``kappa = g / |g|`` as a map into ``SU(2)``."""
        r = self.scale()
        return GroupMap(
            (self.a / r).memoized(), (self.b / r).memoized(), self.excisions,
            self.threshold,
        )

    def left_multiply(self, q: Quaternion) -> GroupMap:
        """Return the map ``x -> q g(x)`` for a constant quaternion ``q``.

        :param q: A constant quaternion with numeric parts.

        """
        product = multiply(q, self.quaternion)
        return GroupMap(product.a, product.b, self.excisions, self.threshold)

    def evaluate(self, points: np.ndarray) -> Quaternion:
        """Return ``g`` at ``points`` as a quaternion of arrays.

        :param points: Complex array of shape ``(P, m)``.

        """
        return Quaternion(self.a.evaluate(points), self.b.evaluate(points))


def maurer_cartan(g: GroupMap) -> QForm:
    """Return ``g^-1 dg`` as a quaternion 1-form.

    :param g: The group map.

    """
    differential = QForm(KForm.scalar(g.a).d(), KForm.scalar(g.b).d())
    return QForm.from_quaternion(g.inverse()).qwedge(differential)


def _scalar_d(field: ScalarField) -> KForm:
    return KForm.scalar(field).d()


def invariant_three_form(g: GroupMap) -> KForm:
    """Return ``tr((kappa^-1 dkappa)^3)`` of the unit part of ``g``.

    Computed from the closed formula
    ``3 (u dconj(u) dv dconj(v) - conj(v) du dconj(u) dv) + conj``.

    :param g: The group map.

    """
    unit = g.unit()
    u, v = unit.a, unit.b
    du, dv = _scalar_d(u), _scalar_d(v)
    du_bar, dv_bar = du.conj(), dv.conj()
    half = (
        du_bar.wedge(dv).wedge(dv_bar) * (u * 3)
        - du.wedge(du_bar).wedge(dv) * (v.conjugate() * 3)
    )
    return half + half.conj()


def full_three_form(g: GroupMap) -> KForm:
    """Return ``g* tr((h^-1 dh)^3)``.

    :param g: The group map.

    """
    omega = maurer_cartan(g)
    return omega.qwedge(omega).qwedge(omega).trace()


def scale_three_form(g: GroupMap) -> KForm:
    """Return ``-d log r ^ tr(d(kappa^-1 dkappa))``.

    Together with :func:`invariant_three_form` it adds up to
    :func:`full_three_form`.

    :param g: The group map.

    """
    log_r = _scalar_d(g.scale().log())
    unit_trace = maurer_cartan(g.unit()).d().trace()
    return -log_r.wedge(unit_trace)


def s3_constant(
    spec: Optional[QuadratureSpec] = None,
    chart_name: ChartName = 'hopf',
    reverse: bool = False,
) -> S3Constant:
    """Integrate ``tr((h^-1 dh)^3)`` over the unit sphere ``S^3``.

    :param spec: The quadrature; Gauss ``64^3`` by default.
    :param chart_name: ``hopf`` or ``euler``.
    :param reverse: Flip the orientation of the parameterization.

    :returns: The integral (``24 pi^2`` for the positive orientation)
        and ``vol(S^3)``.

    """
    spec = spec or QuadratureSpec(method='gauss-grid', resolution=64)
    chart = Chart(2)
    identity = GroupMap(chart.z(0), chart.z(1))
    domain = s3_domain(chart, chart_name)
    if reverse:
        domain = domain.reversed()
    result = integrate(full_three_form(identity), domain, spec)
    volume = integrate_density(
        lambda points, jacobian: volume_density(jacobian, chart.dim),
        domain,
        spec,
    )
    logger.info(
        f'S^3 constant on the {chart_name} chart: {result.value.real:.12f}'
    )
    return S3Constant(
        value=result.value.real,
        volume=volume.value.real,
        error=max(result.error, abs(result.value.imag)),
        samples=result.samples,
    )
