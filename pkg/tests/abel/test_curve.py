from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest  # type: ignore

from qabel.abel.curve import abel_pairing
from qabel.abel.curve import build_g
from qabel.abel.curve import build_psi_and_f
from qabel.abel.curve import dbar_solve
from qabel.abel.curve import divisor_windings
from qabel.abel.curve import normalized_rho
from qabel.abel.curve import periods_and_class
from qabel.abel.curve import sample_torus
from qabel.abel.curve import sigma_candidate
from qabel.abel.curve import TorusDivisor
from qabel.exceptions import DomainError
from qabel.exceptions import ObstructionSignal
from qabel.exceptions import QuadratureError
from qabel.forms.fields import Chart
from qabel.integrate.quadrature import QuadratureSpec
from qabel.suites.identities import residual

if TYPE_CHECKING:
    from typing import Tuple

    from qabel.abel.lattice import Lattice

    Pair = Tuple[TorusDivisor, TorusDivisor]

TWIST = ((1, 0, 0.1, -0.05), (-1, 2, 0.0, 0.15))
AWAY = np.array([0.05 + 0.9j, 0.85 + 0.1j, 0.45 + 0.05j, 0.95 + 0.95j])


class TestTorusDivisor:
    def test_defaults(self) -> None:
        divisor = TorusDivisor((0.1j, 0.5))
        assert (1, 1) == divisor.multiplicities
        assert 2 == divisor.degree
        assert 0.5 + 0.1j == divisor.total
        assert divisor.effective

    def test_repeated_point(self) -> None:
        with pytest.raises(DomainError, match='appears twice') as e:
            TorusDivisor((0.5j, 0.5j))
        assert 'The point 0.5j appears twice in the divisor!' == str(e.value)

    def test_multiplicities_length(self) -> None:
        with pytest.raises(DomainError, match='one multiplicity'):
            TorusDivisor((0.5j, 0.1), (1,))


class TestBuildG:
    def test_degrees_must_match(self, square_lattice: Lattice) -> None:
        with pytest.raises(DomainError, match='degrees 1 and 2') as e:
            build_g(
                square_lattice,
                TorusDivisor((0.2j,)),
                TorusDivisor((0.5j, 0.5 + 0.5j)),
            )
        assert 'The divisors have degrees 1 and 2!' == str(e.value)

    def test_effective(self, square_lattice: Lattice) -> None:
        with pytest.raises(DomainError, match='must be effective'):
            build_g(
                square_lattice,
                TorusDivisor((0.2j,), (-1,)),
                TorusDivisor((0.5j,), (-1,)),
            )

    def test_shared_point(self, square_lattice: Lattice) -> None:
        with pytest.raises(DomainError, match='lies in both divisors'):
            build_g(
                square_lattice, TorusDivisor((0.2j,)), TorusDivisor((0.2j,))
            )

    def test_doubly_periodic(
        self, lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *inequivalent_pair, twist=TWIST)
        assert g_map.period_defect(AWAY) < 1e-8

    def test_zeros_and_poles(
        self, lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        p, q = inequivalent_pair
        g_map = build_g(lattice, p, q)
        near = np.array([q.points[0] + 1e-7, p.points[0] + 1e-7])
        values = np.abs(g_map.evaluate(near))
        assert values[0] < 1e-5
        assert values[1] > 1e5

    def test_alpha01_is_mu_without_twist(
        self, lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *inequivalent_pair)
        coefficient = g_map.alpha01.coefficient((1,))
        assert np.allclose(coefficient.evaluate(AWAY.reshape(-1, 1)), g_map.mu)
        assert abs(g_map.mu) > 1e-3

    def test_equivalent_divisors_have_no_mu(
        self, lattice: Lattice, equivalent_pair: Pair
    ) -> None:
        assert abs(build_g(lattice, *equivalent_pair).mu) < 1e-12

    def test_sigma_candidate(
        self, lattice: Lattice, equivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *equivalent_pair)
        z = AWAY.reshape(-1, 1)
        ratio = g_map.g.evaluate(z) / sigma_candidate(g_map).evaluate(z)
        assert np.allclose(ratio, 1)


class TestAbelPairing:
    @pytest.mark.parametrize(
        'c', [1.0, 0.4 - 1.3j], ids=lambda c: f'{c=}'
    )
    def test_defect(
        self, lattice: Lattice, inequivalent_pair: Pair, c: complex
    ) -> None:
        g_map = build_g(lattice, *inequivalent_pair, twist=TWIST)
        spec = QuadratureSpec(method='periodic-grid', resolution=32)
        pairing = abel_pairing(g_map, c, spec)
        assert pairing.defect < 1e-8 * abs(c)
        expected = c * (0.4 + 0.4j)
        assert abs(expected - pairing.expected) < 1e-12

    def test_zero_form(
        self, square_lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        g_map = build_g(square_lattice, *inequivalent_pair)
        pairing = abel_pairing(g_map, 0, QuadratureSpec())
        assert 0 == pairing.samples


class TestPipeline:
    def test_obstruction(
        self, lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *inequivalent_pair)
        classes = periods_and_class(g_map, 32)
        assert classes.raw_class != pytest.approx(classes.xi_class)
        with pytest.raises(ObstructionSignal, match='not Abel-Jacobi'):
            dbar_solve(normalized_rho(g_map, classes, 32), lattice, Chart(1))

    def test_windings_are_integers(
        self, lattice: Lattice, inequivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *inequivalent_pair, twist=TWIST)
        windings = periods_and_class(g_map, 32).windings
        assert windings.raw_m == pytest.approx(windings.m, abs=1e-8)
        assert windings.raw_n == pytest.approx(windings.n, abs=1e-8)

    def test_dbar_solve(self, square_lattice: Lattice) -> None:
        chart = Chart(1)
        x, y = square_lattice.real_coordinates(chart)
        wave = ((x * 2 - y) * 2j * np.pi).exp()
        rho = sample_torus(wave, square_lattice, 16)
        solution = dbar_solve(rho, square_lattice, chart)
        assert 1 == len(solution.modes)
        assert solution.residual < 1e-12
        points = AWAY.reshape(-1, 1)
        dbar = solution.gamma.derivative(1).evaluate(points)
        assert np.allclose(dbar, wave.evaluate(points))

    def test_dbar_truncation(self, square_lattice: Lattice) -> None:
        chart = Chart(1)
        x, y = square_lattice.real_coordinates(chart)
        waves = (
            ((x * 2 - y) * 2j * np.pi).exp()
            + (x * 2j * np.pi).exp() * 0.5
            + (y * 6j * np.pi).exp() * 0.25
        )
        rho = sample_torus(waves, square_lattice, 16)
        solution = dbar_solve(rho, square_lattice, chart, max_modes=3)
        assert 3 == len(solution.modes)
        assert solution.residual < 1e-12
        with pytest.raises(QuadratureError, match='truncated to 2 modes'):
            dbar_solve(rho, square_lattice, chart, max_modes=2)

    def test_psi_and_f(
        self, lattice: Lattice, equivalent_pair: Pair
    ) -> None:
        g_map = build_g(lattice, *equivalent_pair, twist=TWIST)
        classes = periods_and_class(g_map, 32)
        assert (0, 0) == classes.xi_class
        solution = dbar_solve(
            normalized_rho(g_map, classes, 32), lattice, g_map.chart
        )
        psi, f = build_psi_and_f(g_map, classes, solution, AWAY[0])
        z = AWAY.reshape(-1, 1)
        assert residual(psi.type_project(0, 1), z) < 1e-7
        assert np.isclose(f.evaluate(z)[0], 1)
        for w in (1.0, lattice.tau):
            assert np.allclose(f.evaluate(z + w), f.evaluate(z), rtol=1e-6)
        p, q = equivalent_pair
        assert np.allclose(
            (1, 1), divisor_windings(psi, q.points, 0.03), atol=1e-6
        )
        assert np.allclose(
            (-1, -1), divisor_windings(psi, p.points, 0.03), atol=1e-6
        )
