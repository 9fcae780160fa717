"""Chern-Simons transgression between two connections.

For ``A = D1 - D0`` in a common frame the transgression is the
closed form of ``integral_0^1 tr(2 A ^ R_t) dt`` along the segment
``D0 + t A``::

    CS_D0(D1) = tr(A ^ (2 R0 + D0 A + 2/3 A ^ A))

with ``D0 A = dA + theta0 ^ A + A ^ theta0``.  It is kept unnormalized;
the constant ``8 pi^2`` shows up only in the identities it enters.

"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy.special import roots_legendre

from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.forms.kform import KForm
from qabel.geometry.bundle import connection_difference
from qabel.integrate.domains import box_domain
from qabel.integrate.domains import hopf_shell
from qabel.integrate.quadrature import extrapolate
from qabel.integrate.quadrature import fit_decay
from qabel.integrate.quadrature import integrate
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_collections import CSPairing
from qabel.qa_collections import LimitReport
from qabel.qa_collections import Partial
from qabel.qa_constants import CS_T_NODES

if TYPE_CHECKING:
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.forms.fields import ScalarField
    from qabel.forms.kform import MatForm
    from qabel.geometry.bundle import Connection
    from qabel.integrate.domains import Domain

__all__ = (
    'check_test_form',
    'covariant_difference',
    'cs_03',
    'cs_composition_defect',
    'cs_flat',
    'cs_pair',
    'cs_t_integral',
    'cs_transgression',
    'tubular_limit',
)


def covariant_difference(connection: Connection, a: MatForm) -> MatForm:
    """Return ``D A = dA + theta ^ A + A ^ theta`` for a matrix 1-form.

    :param connection: The connection ``D``.
    :param a: A matrix 1-form in the frame of ``connection``.

    """
    theta = connection.theta
    return a.d() + theta.wedge(a) + a.wedge(theta)


def cs_transgression(first: Connection, second: Connection) -> KForm:
    """Return the 3-form ``CS_{first}(second)``.

    :param first: ``D0``.
    :param second: ``D1``, in the frame of ``D0``.

    :raises DomainError: If the frames differ.

    """
    a = connection_difference(second, first)
    inner = (
        first.curvature() * 2
        + covariant_difference(first, a)
        + a.wedge(a) * (2 / 3)
    )
    return a.wedge(inner).trace()


def cs_flat(first: Connection, second: Connection) -> KForm:
    """Return ``-1/3 tr(A ^ A ^ A)``, the transgression of flat connections.

    :param first: ``D0``, flat.
    :param second: ``D1``, flat and in the frame of ``D0``.

    """
    a = connection_difference(second, first)
    return a.wedge(a).wedge(a).trace() * (-1 / 3)


def cs_03(first: Connection, second: Connection) -> KForm:
    """Return ``-1/3 tr((A^(0,1))^3)``.

    It is the ``(0, 3)`` part of the transgression when both
    ``(0, 1)`` parts are integrable.

    :param first: ``D0``.
    :param second: ``D1``, in the frame of ``D0``.

    """
    a = connection_difference(second, first).type_project(0, 1)
    return a.wedge(a).wedge(a).trace() * (-1 / 3)


def cs_t_integral(
    first: Connection,
    second: Connection,
    points: np.ndarray,
    nodes: int = CS_T_NODES,
) -> np.ndarray:
    """Evaluate ``integral_0^1 tr(2 A ^ R_t) dt`` by Gauss-Legendre in ``t``.

    ``R_t`` is the curvature of ``D0 + t A`` computed from scratch at
    every node.

    :param first: ``D0``.
    :param second: ``D1``, in the frame of ``D0``.
    :param points: Complex array of shape ``(P, m)``.
    :param nodes: The number of Gauss nodes on ``[0, 1]``.

    :returns: The coefficients at ``points``, shape ``(P, len(basis))``.

    """
    a = connection_difference(second, first)
    roots, weights = roots_legendre(nodes)
    total: Optional[np.ndarray] = None
    for root, weight in zip((roots + 1) / 2, weights / 2):
        theta = first.theta + a * float(root)
        curvature = theta.d() + theta.wedge(theta)
        values = (a.wedge(curvature) * 2).trace().evaluate(points) * weight
        total = values if total is None else total + values
    return total  # type: ignore


def check_test_form(tau: KForm) -> None:
    """Raise unless ``tau`` is a 3-form of type ``(3, 0) + (2, 1)``.

    :param tau: The test form.

    :raises DomainError: On a wrong degree or type.

    """
    if tau.degree != 3:
        raise DomainError('The test form must be a 3-form!')
    for index in tau.terms:
        p, _ = tau.hodge_type(index)
        if p < 2:
            raise DomainError(
                'The test form must be of type (3, 0) + (2, 1)!'
            )


def _current_part(form: KForm) -> KForm:
    return form.type_project(1, 2) + form.type_project(0, 3)


def _pair_form(
    form: KForm,
    tau: KForm,
    domain: Optional[Domain],
    spec: QuadratureSpec,
    project: bool,
) -> CSPairing:
    check_test_form(tau)
    if project:
        form = _current_part(form)
    integrand = tau.wedge(form)
    if integrand.is_zero:
        return CSPairing(value=0j, error=0.0, samples=0)
    result = integrate(integrand, domain or box_domain(tau.chart), spec)
    return CSPairing(
        value=result.value,
        error=result.error,
        samples=result.samples,
        partials=result.partials,
    )


def cs_pair(
    first: Connection,
    second: Connection,
    tau: KForm,
    spec: QuadratureSpec,
    domain: Optional[Domain] = None,
    project: bool = True,
) -> CSPairing:
    """Return ``integral(tau ^ CS_{first}(second))``.

    :param first: ``D0``.
    :param second: ``D1``, in the frame of ``D0``.
    :param tau: A test 3-form of type ``(3, 0) + (2, 1)`` vanishing on
        the boundary of ``domain``.
    :param spec: The quadrature.
    :param domain: The chart box by default.
    :param project: Pair only the ``(1, 2) + (0, 3)`` part, the only
        part that can contribute.

    :raises DomainError: If ``tau`` has the wrong type.
    :raises QuadratureError: If the quadrature misses its tolerance.

    """
    return _pair_form(
        cs_transgression(first, second), tau, domain, spec, project
    )


def cs_composition_defect(
    connections: Sequence[Connection],
    tau: KForm,
    spec: QuadratureSpec,
    domain: Optional[Domain] = None,
) -> CSPairing:
    """Pair ``CS_0(1) + CS_1(2) - CS_0(2)`` with ``tau``.

    The defect is exact, so it vanishes against closed test forms.

    :param connections: ``(D0, D1, D2)`` in one frame.
    :param tau: A closed test form of type ``(3, 0) + (2, 1)``.
    :param spec: The quadrature.
    :param domain: The chart box by default.

    """
    d0, d1, d2 = connections
    defect = (
        cs_transgression(d0, d1)
        + cs_transgression(d1, d2)
        - cs_transgression(d0, d2)
    )
    return _pair_form(defect, tau, domain, spec, project=True)


def tubular_limit(
    flat: Connection,
    dprime: Connection,
    tau: KForm,
    radii: Sequence[float],
    potential: ScalarField,
    spec: QuadratureSpec,
    shell_spec: Optional[QuadratureSpec] = None,
    log_power: float = 1.0,
    square: Tuple[float, float] = (-1.0, 1.0),
) -> LimitReport:
    """Study ``CS_{D_P}(D'_P)(tau)`` near the line ``z1 = z2 = 0``.

    In the frame ``(s, j s)`` the transgression is
    ``dbar L ^ d dbar L`` for ``L = log |s|^2``, which against ``tau``
    equals ``d(L d(dbar L))``.  The boundary terms
    ``integral(tau ^ L d(dbar L))`` over the tubes ``S^3_eps x square``
    are fitted and extrapolated to zero radius, and so is the pairing
    over the complements ``eps <= |(z1, z2)| <= 1``.

    :param flat: ``D_P``, in the frame ``(s, j s)``.
    :param dprime: ``D'_P``, in the same frame.
    :param tau: A closed test form of type ``(3, 0) + (2, 1)``
        supported in the unit ball times ``square``.
    :param radii: Strictly decreasing tube radii.
    :param potential: The field ``L = log |s|^2``.
    :param spec: The quadrature of the boundary integrals.
    :param shell_spec: The quadrature of the complements; ``spec`` by
        default.
    :param log_power: The fixed power of ``|log eps|`` in the mass fit.
    :param square: The range of ``x3`` and ``y3``.

    :raises QuadratureError: If fewer than 4 radii are given.

    """
    if len(radii) < 4:
        raise QuadratureError(
            'A stable tubular fit needs at least 4 radii!'
        )
    check_test_form(tau)
    chart = tau.chart
    current = _current_part(cs_transgression(flat, dprime))
    volume_form = tau.wedge(current)
    boundary_form = tau.wedge(
        KForm.scalar(potential).d_double_prime().d_prime() * potential
    )
    shell_spec = shell_spec or spec
    boundary: List[complex] = []
    mass: List[float] = []
    partials: List[Partial] = []
    for eps in radii:
        tube = hopf_shell(chart, eps, square=square)
        boundary.append(integrate(boundary_form, tube, spec).value)
        mass.append(
            integrate(boundary_form, tube, spec, absolute=True).value.real
        )
        shell = hopf_shell(chart, eps, outer=1.0, square=square)
        partials.append(
            Partial(eps, integrate(volume_form, shell, shell_spec).value)
        )
        logger.debug(f'{eps=} {boundary[-1]=} {mass[-1]=} {partials[-1]=}')
    report = LimitReport(
        radii=tuple(radii),
        boundary=tuple(boundary),
        mass=tuple(mass),
        fit=fit_decay(radii, mass, log_power=log_power),
        boundary_limit=extrapolate(
            [Partial(eps, value) for eps, value in zip(radii, boundary)]
        ),
        pairing=extrapolate(partials),
    )
    logger.info(
        f'Tubular limit: exponent {report.fit.exponent:.3f}, '
        f'pairing {abs(report.pairing.value):.3e}'
    )
    return report
