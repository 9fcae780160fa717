"""Period lattices ``Z + tau Z`` and the Weierstrass sigma function.

``sigma`` is computed from the Jacobi theta function ``theta_1`` with
nome ``q = exp(i pi tau)``::

    sigma(z) = exp(eta1 z^2 / 2) theta_1(pi z) / (pi theta_1'(0))
    eta1 = -(pi^2 / 3) theta_1'''(0) / theta_1'(0)

so that ``sigma(z + 1) = -exp(eta1 (z + 1/2)) sigma(z)`` and
``sigma(z + tau) = -exp(eta2 (z + tau/2)) sigma(z)`` with
``eta2 = eta1 tau - 2 pi i``.

"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError
from qabel.log import logger
from qabel.qa_constants import TWO_PI_I

if TYPE_CHECKING:
    from typing import Tuple

    from qabel.forms.fields import Chart
    from qabel.forms.fields import ScalarField

__all__ = ('Lattice',)

_CHECK_POINT = 0.31 + 0.17j


class Lattice:
    """The lattice ``Z + tau Z`` with its sigma function.

    :param tau: The second period, ``Im tau > 0``.
    :param precision: Series terms below this size are dropped.

    :raises DomainError: If ``Im tau <= 0`` or the quasi-periodicity
        check fails.

    """

    def __init__(self, tau: complex, precision: float = 1e-18) -> None:
        self.tau = complex(tau)
        if self.tau.imag <= 0:
            raise DomainError('The period tau must have Im tau > 0!')
        self.nome = np.exp(1j * np.pi * self.tau)
        # |q|^((n + 1/2)^2) < precision, two spare terms for derivatives
        self.terms = 2 + math.ceil(
            math.sqrt(math.log(precision) / math.log(abs(self.nome)))
        )
        order = np.arange(self.terms)
        self._frequencies = 2 * order + 1
        self._weights = (
            2 * (-1.0) ** order * self.nome ** ((order + 0.5) ** 2)
        )
        self.theta_prime0 = complex(self.theta1(np.zeros(1), 1)[0])
        self.eta1 = complex(
            -(np.pi ** 2 / 3)
            * self.theta1(np.zeros(1), 3)[0]
            / self.theta_prime0
        )
        self.eta2 = self.eta1 * self.tau - TWO_PI_I
        logger.debug(f'{self.tau=} {self.terms=} {self.eta1=} {self.eta2=}')
        self._check_quasi_periodicity()

    def __repr__(self) -> str:
        return f'Lattice(tau={self.tau})'

    def _check_quasi_periodicity(self) -> None:
        z = np.array([_CHECK_POINT])
        value = self.sigma(z)[0]
        residuals = (
            self.sigma(z + 1)[0] + np.exp(self.eta1 * (z[0] + 0.5)) * value,
            self.sigma(z + self.tau)[0]
            + np.exp(self.eta2 * (z[0] + self.tau / 2)) * value,
        )
        if max(abs(residual) for residual in residuals) > 1e-10 * max(
            1.0, abs(value)
        ):
            raise DomainError(
                f'The sigma function of tau = {self.tau} fails its '
                'quasi-periodicity check!'
            )

    def theta1(self, v: np.ndarray, order: int = 0) -> np.ndarray:
        """Return the ``order``-th derivative of ``theta_1`` at ``v``.

        :param v: Complex array.
        :param order: The derivative order.

        """
        v = np.asarray(v, complex)
        phases = np.outer(v, self._frequencies) + order * np.pi / 2
        scale = self._weights * self._frequencies.astype(float) ** order
        return (np.sin(phases) @ scale).reshape(v.shape)

    def sigma(self, z: np.ndarray) -> np.ndarray:
        """Return ``sigma(z)``.

        >>> lattice = Lattice(1j)
        >>> abs(lattice.sigma(np.array([1e-4]))[0] - 1e-4) < 1e-12
        True

        :param z: Complex array.

        """
        z = np.asarray(z, complex)
        return (
            np.exp(self.eta1 * z ** 2 / 2)
            * self.theta1(np.pi * z)
            / (np.pi * self.theta_prime0)
        )

    def sigma_field(self, z: ScalarField) -> ScalarField:
        """Return ``sigma`` composed with a holomorphic field.

        :param z: A field, for example ``chart.z(0) - p``.

        """
        theta = z.compose(
            lambda x, k: np.pi ** k * self.theta1(np.pi * x, k),
            f'theta1(pi {z.label})',
        )
        return (z * z * (self.eta1 / 2)).exp() * theta * (
            1 / (np.pi * self.theta_prime0)
        )

    def coordinates(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Return real ``(x, y)`` with ``z = x + tau y``.

        :param z: Complex array.

        """
        z = np.asarray(z, complex)
        y = z.imag / self.tau.imag
        return z.real - self.tau.real * y, y

    def reduce(self, z: np.ndarray) -> np.ndarray:
        """Return the representative of ``z`` in the fundamental domain.

        :param z: Complex array.

        """
        x, y = self.coordinates(z)
        return np.asarray(z, complex) - np.floor(x) - np.floor(y) * self.tau

    def lattice_distance(self, w: complex) -> float:
        """Return the distance from ``w`` to the nearest lattice point.

        >>> Lattice(1j).lattice_distance(2 - 1j)
        0.0

        :param w: A complex number.

        """
        x, y = self.coordinates(np.array([w]))
        best = math.inf
        for m in (math.floor(x[0]), math.ceil(x[0])):
            for n in (math.floor(y[0]), math.ceil(y[0])):
                best = min(best, abs(w - m - n * self.tau))
        return best

    def real_coordinates(
        self, chart: Chart
    ) -> Tuple[ScalarField, ScalarField]:
        """Return the fields ``x`` and ``y`` on a chart of dimension 1.

        ``y = (z - conj(z)) / (2 i Im tau)`` and
        ``x = (z + conj(z)) / 2 - Re tau y``.

        :param chart: A chart of dimension 1.

        """
        z, z_bar = chart.z(0), chart.zbar(0)
        y = (z - z_bar) * (1 / (2j * self.tau.imag))
        x = (z + z_bar) * 0.5 - y * self.tau.real
        return x.memoized(), y.memoized()
