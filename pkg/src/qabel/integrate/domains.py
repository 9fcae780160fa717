"""Parameterized integration domains.

A :class:`Domain` maps a real parameter box ``[lower, upper]`` into a
chart.  Besides the points it returns the Jacobian of
``(z_1..z_m, conj(z_1)..conj(z_m))`` with respect to the parameters,
shape ``(P, 2m, k)``, which is all a form pullback needs.  Orientation
is the order of the parameters.

"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError

if TYPE_CHECKING:
    from typing import Callable
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.forms.fields import Chart
    from qabel.qa_collections import Tube
    from qabel.qa_typing import ChartName

    Mapping = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

__all__ = (
    'Domain',
    'box_domain',
    'circle_domain',
    'hopf_shell',
    'line_domain',
    'periodic_distance',
    's3_domain',
    'segment_domain',
    'torus_domain',
    'tube_distance',
    'volume_density',
)


class Domain:
    """Parameter box with a map into a chart.

    :param chart: The target chart.
    :param lower: The lower parameter bounds, shape ``(k,)``.
    :param upper: The upper parameter bounds, shape ``(k,)``.
    :param mapping: ``t -> (points, jacobian)`` for ``t`` of shape
        ``(P, k)``.
    :param excisions: Singular sets, see :class:`Tube`.
    :param distance: ``points -> (P,)`` distance to the singular set;
        by default the distance to the nearest tube.
    :param label: A name used in logs.

    """

    def __init__(
        self,
        chart: Chart,
        lower: Sequence[float],
        upper: Sequence[float],
        mapping: Mapping,
        *,
        excisions: Tuple[Tube, ...] = (),
        distance: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        label: str = '',
    ) -> None:
        self.chart = chart
        self.lower = np.asarray(lower, float)
        self.upper = np.asarray(upper, float)
        if self.lower.shape != self.upper.shape or np.any(
            self.upper <= self.lower
        ):
            raise DomainError('The parameter box must have positive volume!')
        self.mapping = mapping
        self.excisions = excisions
        self._distance = distance
        self.label = label

    @property
    def dimension(self) -> int:
        return int(self.lower.shape[0])

    @property
    def parameter_volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    @property
    def singular(self) -> bool:
        return bool(self.excisions) or self._distance is not None

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Return the distance of ``points`` to the singular set.

        :param points: Complex array of shape ``(P, m)``.

        """
        if self._distance is not None:
            return self._distance(points)
        return tube_distance(points, self.excisions)

    def reversed(self) -> Domain:
        """Return the same domain with the last two parameters swapped."""
        order = list(range(self.dimension))
        order[-2:] = order[-1:-3:-1]
        inner = self.mapping

        def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            restored = np.empty_like(t)
            restored[:, order] = t
            points, jacobian = inner(restored)
            return points, jacobian[:, :, order]

        return Domain(
            self.chart,
            self.lower[order],
            self.upper[order],
            mapping,
            excisions=self.excisions,
            distance=self._distance,
            label=f'{self.label}-reversed',
        )


def tube_distance(points: np.ndarray, tubes: Sequence[Tube]) -> np.ndarray:
    """Return the distance to the nearest tube center set.

    :param points: Complex array of shape ``(P, m)``.
    :param tubes: The tubes.

    """
    distance = np.full(points.shape[0], np.inf)
    for tube in tubes:
        offset = points[:, list(tube.axes)] - np.asarray(tube.center)
        distance = np.minimum(distance, np.linalg.norm(offset, axis=1))
    return distance


def _conjugate_rows(holomorphic: np.ndarray) -> np.ndarray:
    return np.concatenate([holomorphic, holomorphic.conj()], axis=1)


def box_domain(
    chart: Chart,
    excisions: Tuple[Tube, ...] = (),
    bounds: Optional[Sequence[Tuple[float, float]]] = None,
) -> Domain:
    """Return a box in real coordinates ``x_1, y_1, x_2, ...``.

    :param chart: The chart.
    :param excisions: Singular sets inside the box.
    :param bounds: ``(low, high)`` per real coordinate; the chart box
        by default.

    """
    dim = chart.dim
    holomorphic = np.zeros((dim, 2 * dim), complex)
    for i in range(dim):
        holomorphic[i, 2 * i] = 1
        holomorphic[i, 2 * i + 1] = 1j
    jacobian = _conjugate_rows(holomorphic[np.newaxis])
    box = bounds or chart.box

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = t[:, 0::2] + 1j * t[:, 1::2]
        return points, np.broadcast_to(
            jacobian, (t.shape[0],) + jacobian.shape[1:]
        )

    return Domain(
        chart,
        [low for low, _ in box],
        [high for _, high in box],
        mapping,
        excisions=excisions,
        label='box',
    )


def _hopf(
    radius: np.ndarray, eta: np.ndarray, xi1: np.ndarray, xi2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(z1, z2, d(z1, z2)/d(r, eta, xi1, xi2))``."""
    phase1, phase2 = np.exp(1j * xi1), np.exp(1j * xi2)
    z1 = radius * np.cos(eta) * phase1
    z2 = radius * np.sin(eta) * phase2
    zeros = np.zeros_like(z1)
    jacobian = np.stack(
        [
            np.stack([np.cos(eta) * phase1, -radius * np.sin(eta) * phase1,
                      1j * z1, zeros], axis=-1),
            np.stack([np.sin(eta) * phase2, radius * np.cos(eta) * phase2,
                      zeros, 1j * z2], axis=-1),
        ],
        axis=1,
    )
    return z1, z2, jacobian


def s3_domain(chart: Chart, name: ChartName = 'hopf') -> Domain:
    """Return the unit sphere ``S^3`` in a chart of dimension 2.

    Both parameterizations are positively oriented:

    * ``hopf``: ``(eta, xi1, xi2) -> (cos(eta) e^(i xi1), sin(eta) e^(i xi2))``
      on ``[0, pi/2] x [0, 2pi]^2``;
    * ``euler``: ``(theta, psi, phi) -> (cos(theta/2) e^(i(phi+psi)/2),
      sin(theta/2) e^(i(phi-psi)/2))`` on
      ``[0, pi] x [0, 4pi] x [0, 2pi]``.

    :param chart: A chart of dimension 2.
    :param name: ``hopf`` or ``euler``.

    :raises DomainError: If the chart dimension is not 2 or the name is
        unknown.

    """
    if chart.dim != 2:
        raise DomainError('The sphere S^3 lives in a chart of dimension 2!')
    if name == 'hopf':
        def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            z1, z2, jacobian = _hopf(
                np.ones(t.shape[0]), t[:, 0], t[:, 1], t[:, 2]
            )
            holomorphic = jacobian[:, :, 1:]
            return np.stack([z1, z2], axis=1), _conjugate_rows(holomorphic)

        return Domain(
            chart, [0, 0, 0], [np.pi / 2, 2 * np.pi, 2 * np.pi], mapping,
            label='s3-hopf',
        )
    if name == 'euler':
        def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            theta, psi, phi = t[:, 0], t[:, 1], t[:, 2]
            phase_a = np.exp(0.5j * (phi + psi))
            phase_b = np.exp(0.5j * (phi - psi))
            a = np.cos(theta / 2) * phase_a
            b = np.sin(theta / 2) * phase_b
            jacobian = np.stack(
                [
                    np.stack([-0.5 * np.sin(theta / 2) * phase_a, 0.5j * a,
                              0.5j * a], axis=-1),
                    np.stack([0.5 * np.cos(theta / 2) * phase_b, -0.5j * b,
                              0.5j * b], axis=-1),
                ],
                axis=1,
            )
            return np.stack([a, b], axis=1), _conjugate_rows(jacobian)

        return Domain(
            chart, [0, 0, 0], [np.pi, 4 * np.pi, 2 * np.pi], mapping,
            label='s3-euler',
        )
    raise DomainError(f'Unknown sphere parameterization {name!r}!')


def hopf_shell(
    chart: Chart,
    inner: float,
    outer: Optional[float] = None,
    square: Tuple[float, float] = (-1.0, 1.0),
    center: Tuple[complex, complex] = (0j, 0j),
) -> Domain:
    """Return a neighbourhood of the line ``(z1, z2) = center`` in ``C^3``.

    With ``outer`` the domain is the shell
    ``inner <= |(z1, z2) - center| <= outer``
    times the square ``x3, y3`` in ``square``, parameterized by
    ``(r, eta, xi1, xi2, x3, y3)``.  Without it, it is the tube boundary
    ``S^3_inner x square`` parameterized by ``(eta, xi1, xi2, x3, y3)``.

    :param chart: A chart of dimension 3.
    :param inner: The inner radius.
    :param outer: The outer radius.
    :param square: The range of ``x3`` and ``y3``.
    :param center: The point ``(c1, c2)`` the line passes through.

    :raises DomainError: If the chart dimension is not 3.

    """
    if chart.dim != 3:
        raise DomainError(
            'The shell around a line lives in a chart of dimension 3!'
        )
    low, high = square
    first = 0 if outer is not None else 1

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if outer is not None:
            radius, angles, transverse = t[:, 0], t[:, 1:4], t[:, 4:6]
        else:
            radius = np.full(t.shape[0], inner)
            angles, transverse = t[:, 0:3], t[:, 3:5]
        z1, z2, hopf = _hopf(
            radius, angles[:, 0], angles[:, 1], angles[:, 2]
        )
        z3 = transverse[:, 0] + 1j * transverse[:, 1]
        count = 6 - first
        holomorphic = np.zeros((t.shape[0], 3, count), complex)
        holomorphic[:, :2, :4 - first] = hopf[:, :, first:]
        holomorphic[:, 2, count - 2] = 1
        holomorphic[:, 2, count - 1] = 1j
        points = np.stack([z1 + center[0], z2 + center[1], z3], axis=1)
        return points, _conjugate_rows(holomorphic)

    angular_low = [0.0, 0.0, 0.0]
    angular_high = [np.pi / 2, 2 * np.pi, 2 * np.pi]
    if outer is not None:
        return Domain(
            chart,
            [inner] + angular_low + [low, low],
            [outer] + angular_high + [high, high],
            mapping,
            label=f'shell-{inner}',
        )
    return Domain(
        chart,
        angular_low + [low, low],
        angular_high + [high, high],
        mapping,
        label=f'tube-{inner}',
    )


def volume_density(jacobian: np.ndarray, dim: int) -> np.ndarray:
    """Return ``sqrt(det(G))`` for the real Gram matrix ``G`` of the map.

    :param jacobian: Shape ``(P, 2m, k)``; only the ``dz`` rows are used.
    :param dim: The complex dimension ``m``.

    """
    holomorphic = jacobian[:, :dim, :]
    gram = np.real(np.einsum('pia,pib->pab', holomorphic.conj(), holomorphic))
    return np.sqrt(np.abs(np.linalg.det(gram)))


def periodic_distance(
    points: np.ndarray, centers: Sequence[complex], tau: complex
) -> np.ndarray:
    """Return the distance to the nearest lattice translate of ``centers``.

    The lattice is ``Z + tau Z``; only the nine nearest translates are
    tried, which suffices for points and centers in one fundamental
    domain.

    :param points: Complex array of shape ``(P, 1)``.
    :param centers: Points of the fundamental domain.
    :param tau: The second period.

    """
    z = points[:, 0]
    distance = np.full(z.shape[0], np.inf)
    for center in centers:
        for m in (-1, 0, 1):
            for n in (-1, 0, 1):
                shifted = np.abs(z - center - m - n * tau)
                distance = np.minimum(distance, shifted)
    return distance


def torus_domain(
    chart: Chart, tau: complex, excisions: Tuple[Tube, ...] = ()
) -> Domain:
    """Return the fundamental domain ``z = x + tau y``, ``x, y in [0, 1]``.

    Excision distances are measured on the torus.

    :param chart: A chart of dimension 1.
    :param tau: The second period, ``Im tau > 0``.
    :param excisions: Discs around points of the fundamental domain.

    :raises DomainError: If the chart dimension is not 1 or
        ``Im tau <= 0``.

    """
    if chart.dim != 1 or tau.imag <= 0:
        raise DomainError(
            'A torus needs a chart of dimension 1 and Im tau > 0!'
        )
    jacobian = _conjugate_rows(np.array([[[1, tau]]], complex))

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = (t[:, 0] + tau * t[:, 1])[:, np.newaxis]
        return points, np.broadcast_to(
            jacobian, (t.shape[0],) + jacobian.shape[1:]
        )

    centers = [tube.center[0] for tube in excisions]
    return Domain(
        chart,
        [0, 0],
        [1, 1],
        mapping,
        excisions=excisions,
        distance=(
            (lambda points: periodic_distance(points, centers, tau))
            if excisions
            else None
        ),
        label='torus',
    )


def segment_domain(chart: Chart, start: complex, step: complex) -> Domain:
    """Return the path ``t -> start + t step``, ``t in [0, 1]``.

    :param chart: A chart of dimension 1.
    :param start: The initial point.
    :param step: The displacement.

    """
    jacobian = _conjugate_rows(np.array([[[step]]], complex))

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = (start + step * t[:, 0])[:, np.newaxis]
        return points, np.broadcast_to(
            jacobian, (t.shape[0],) + jacobian.shape[1:]
        )

    return Domain(chart, [0], [1], mapping, label=f'segment-{start}')


def circle_domain(chart: Chart, center: complex, radius: float) -> Domain:
    """Return the positively oriented circle ``|z - center| = radius``.

    :param chart: A chart of dimension 1.
    :param center: The center.
    :param radius: The radius.

    """

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        phase = radius * np.exp(1j * t[:, 0])
        holomorphic = (1j * phase)[:, np.newaxis, np.newaxis]
        points = (center + phase)[:, np.newaxis]
        return points, _conjugate_rows(holomorphic)

    return Domain(chart, [0], [2 * np.pi], mapping, label=f'circle-{center}')


def line_domain(
    chart: Chart,
    center: Tuple[complex, complex],
    square: Tuple[float, float],
) -> Domain:
    """Return the complex line ``(z1, z2) = center`` over a square in ``z3``.

    It is parameterized by ``(x3, y3)``, the complex orientation.

    :param chart: A chart of dimension 3.
    :param center: The point ``(c1, c2)``.
    :param square: The range of ``x3`` and ``y3``.

    """
    holomorphic = np.zeros((1, 3, 2), complex)
    holomorphic[0, 2] = (1, 1j)
    jacobian = _conjugate_rows(holomorphic)
    low, high = square

    def mapping(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        count = t.shape[0]
        points = np.stack(
            [
                np.full(count, center[0], complex),
                np.full(count, center[1], complex),
                t[:, 0] + 1j * t[:, 1],
            ],
            axis=1,
        )
        return points, np.broadcast_to(jacobian, (count,) + jacobian.shape[1:])

    return Domain(
        chart, [low, low], [high, high], mapping, label=f'line-{center}'
    )
