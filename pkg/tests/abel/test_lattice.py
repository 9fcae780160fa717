from __future__ import annotations

import math

import numpy as np
import pytest  # type: ignore

from qabel.abel.lattice import Lattice
from qabel.exceptions import DomainError
from qabel.forms.fields import Chart


class TestLattice:
    def test_upper_half_plane(self) -> None:
        with pytest.raises(DomainError, match='Im tau > 0') as e:
            Lattice(-1j)
        assert 'The period tau must have Im tau > 0!' == str(e.value)

    def test_legendre_relation(self, lattice: Lattice) -> None:
        assert abs(
            lattice.eta1 * lattice.tau - lattice.eta2 - 2j * math.pi
        ) < 1e-12

    def test_sigma_is_odd(self, lattice: Lattice) -> None:
        z = np.array([0.1 + 0.2j, -0.4 + 0.3j, 0.7 - 0.1j])
        assert np.allclose(lattice.sigma(-z), -lattice.sigma(z))

    def test_sigma_zeros(self, lattice: Lattice) -> None:
        points = np.array([0, 1, lattice.tau, 1 + lattice.tau])
        assert np.allclose(lattice.sigma(points), 0, atol=1e-10)

    def test_quasi_periodicity(self, lattice: Lattice) -> None:
        z = np.array([0.13 + 0.07j, -0.21 + 0.33j])
        value = lattice.sigma(z)
        assert np.allclose(
            lattice.sigma(z + 1),
            -np.exp(lattice.eta1 * (z + 0.5)) * value,
        )
        assert np.allclose(
            lattice.sigma(z + lattice.tau),
            -np.exp(lattice.eta2 * (z + lattice.tau / 2)) * value,
        )

    def test_sigma_field(self, lattice: Lattice) -> None:
        chart = Chart(1)
        points = chart.sample(10, seed=0)
        field = lattice.sigma_field(chart.z(0) - 0.25)
        expected = lattice.sigma(points[:, 0] - 0.25)
        assert np.allclose(field.evaluate(points), expected)
        assert np.allclose(field.derivative(1).evaluate(points), 0)

    def test_sigma_field_derivative(self, square_lattice: Lattice) -> None:
        chart = Chart(1)
        z = np.array([[0.3 + 0.1j]])
        sigma = square_lattice.sigma
        field = square_lattice.sigma_field(chart.z(0))
        step = 1e-6
        difference = (sigma(z[0] + step) - sigma(z[0] - step)) / (2 * step)
        assert np.allclose(
            field.derivative(0).evaluate(z), difference, atol=1e-8
        )

    def test_reduce(self, lattice: Lattice) -> None:
        z = np.array([2.3 + 0.4j, -0.7 - 3.2j])
        x, y = lattice.coordinates(lattice.reduce(z))
        assert np.all((0 <= x) & (x < 1))
        assert np.all((0 <= y) & (y < 1))

    def test_lattice_distance(self, lattice: Lattice) -> None:
        assert lattice.lattice_distance(2 - 3 * lattice.tau) < 1e-12
        assert math.isclose(
            0.1, lattice.lattice_distance(1.1 + lattice.tau), rel_tol=1e-12
        )

    def test_real_coordinates(self, lattice: Lattice) -> None:
        chart = Chart(1)
        x, y = lattice.real_coordinates(chart)
        z = np.array([[0.25 + 0.5 * lattice.tau]])
        assert np.allclose(x.evaluate(z), 0.25)
        assert np.allclose(y.evaluate(z), 0.5)
