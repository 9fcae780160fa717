"""Random fields, forms, metrics and group maps for the identity suites.

Every builder takes a ``numpy.random.Generator`` so that a suite seed
fixes the whole sample set.

"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import TYPE_CHECKING

from qabel.forms.fields import ScalarField
from qabel.forms.kform import basis
from qabel.forms.kform import KForm
from qabel.geometry.bundle import HermitianBundle
from qabel.geometry.bundle import metric_from
from qabel.geometry.bundle import Section
from qabel.geometry.group_calculus import GroupMap

if TYPE_CHECKING:
    from typing import Optional
    from typing import Sequence

    import numpy as np

    from qabel.forms.fields import Chart

__all__ = (
    'random_bundle',
    'random_complex',
    'random_conformal_bundle',
    'random_form',
    'random_group_map',
    'random_polynomial',
    'random_real_polynomial',
    'random_section',
)


def random_complex(rng: np.random.Generator, scale: float = 1.0) -> complex:
    real, imag = rng.normal(0, scale, size=2)
    return complex(real, imag)


def random_polynomial(
    chart: Chart,
    rng: np.random.Generator,
    degree: int = 2,
    scale: float = 0.5,
    holomorphic: bool = False,
) -> ScalarField:
    """Return a polynomial in ``z`` and ``conj(z)`` with random coefficients.

    :param chart: The chart.
    :param rng: The random generator.
    :param degree: The total degree.
    :param scale: The standard deviation of the coefficients.
    :param holomorphic: Use ``z`` only.

    """
    variables = [chart.z(i) for i in range(chart.dim)]
    if not holomorphic:
        variables += [chart.zbar(i) for i in range(chart.dim)]
    total = chart.constant(random_complex(rng, scale))
    for order in range(1, degree + 1):
        for monomial in combinations_with_replacement(variables, order):
            term = chart.constant(random_complex(rng, scale))
            for factor in monomial:
                term = term * factor
            total = total + term
    return total


def random_real_polynomial(
    chart: Chart, rng: np.random.Generator, degree: int = 2, scale: float = 0.3
) -> ScalarField:
    return random_polynomial(chart, rng, degree, scale).real()


def random_form(
    chart: Chart,
    degree: int,
    rng: np.random.Generator,
    poly_degree: int = 2,
    indices: Optional[Sequence[tuple]] = None,
) -> KForm:
    """Return a form with random polynomial coefficients.

    :param chart: The chart.
    :param degree: The form degree.
    :param rng: The random generator.
    :param poly_degree: The degree of the coefficients.
    :param indices: Restrict to these multi-indices.

    """
    indices = indices or basis(chart.nvars, degree)
    return KForm(
        chart,
        degree,
        {
            index: random_polynomial(chart, rng, poly_degree)
            for index in indices
        },
    )


def random_group_map(
    chart: Chart, rng: np.random.Generator, scale: float = 0.25
) -> GroupMap:
    """Return ``g = (2 + p1) + p2 j``, nonvanishing on the unit box.

    :param chart: The chart, with the default box.
    :param rng: The random generator.
    :param scale: The coefficient scale of ``p1`` and ``p2``.

    """
    return GroupMap(
        random_polynomial(chart, rng, scale=scale) + 2.0,
        random_polynomial(chart, rng, scale=scale),
    )


def random_bundle(
    chart: Chart, rng: np.random.Generator, scale: float = 0.2
) -> HermitianBundle:
    """Return a bundle with a random metric of determinant one.

    :param chart: The chart.
    :param rng: The random generator.
    :param scale: The size of the perturbation of the flat metric.

    """
    p = random_real_polynomial(chart, rng, scale=scale).exp()
    q = random_polynomial(chart, rng, scale=scale)
    return HermitianBundle(metric_from(p, q), chart)


def random_conformal_bundle(
    chart: Chart, rng: np.random.Generator, scale: float = 0.2
) -> HermitianBundle:
    """Return the bundle with ``H = diag(exp(phi), exp(-phi))``.

    :param chart: The chart.
    :param rng: The random generator.
    :param scale: The coefficient scale of ``phi``.

    """
    phi = random_real_polynomial(chart, rng, scale=scale)
    zero = ScalarField.constant(chart, 0)
    return HermitianBundle(
        [[phi.exp(), zero], [zero, (-phi).exp()]], chart
    )


def random_section(
    chart: Chart,
    rng: np.random.Generator,
    holomorphic: bool = False,
    label: str = 's',
) -> Section:
    """Return a section whose first component stays away from zero.

    :param chart: The chart.
    :param rng: The random generator.
    :param holomorphic: Use holomorphic polynomial components.
    :param label: The section label.

    """
    first = random_polynomial(chart, rng, scale=0.2, holomorphic=holomorphic)
    second = random_polynomial(chart, rng, scale=0.4, holomorphic=holomorphic)
    return Section((first + 1.5, second), holomorphic=holomorphic, label=label)
