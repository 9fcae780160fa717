"""Pointwise identity suites: quaternion, forms, group and bundle.

Each check draws its sample set from the run seed, evaluates both
sides of an identity at random points and reports the largest residual
against a tolerance from the matching config section.

"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qabel.algebra.quaternion import embed
from qabel.algebra.quaternion import inverse
from qabel.algebra.quaternion import multiply
from qabel.algebra.quaternion import polar
from qabel.algebra.quaternion import Quaternion
from qabel.forms.fields import Chart
from qabel.forms.fields import wirtinger_difference
from qabel.forms.kform import basis
from qabel.forms.kform import KForm
from qabel.forms.kform import MatForm
from qabel.forms.qform import QForm
from qabel.geometry.bundle import chern_connection
from qabel.geometry.bundle import chern_in_section_frame
from qabel.geometry.bundle import flat_connection_from_section
from qabel.geometry.bundle import frame_curvature
from qabel.geometry.bundle import frame_formulas
from qabel.geometry.bundle import j_forms
from qabel.geometry.bundle import j_structure
from qabel.geometry.bundle import operator_sides
from qabel.geometry.bundle import section_frame
from qabel.geometry.group_calculus import full_three_form
from qabel.geometry.group_calculus import invariant_three_form
from qabel.geometry.group_calculus import maurer_cartan
from qabel.geometry.group_calculus import s3_constant
from qabel.geometry.group_calculus import scale_three_form
from qabel.integrate.quadrature import QuadratureSpec
from qabel.qa_constants import S3_CONSTANT
from qabel.qa_constants import S3_VOLUME
from qabel.suites.checks import Check
from qabel.suites.checks import max_abs
from qabel.suites.checks import Outcome
from qabel.suites.samples import random_bundle
from qabel.suites.samples import random_complex
from qabel.suites.samples import random_conformal_bundle
from qabel.suites.samples import random_form
from qabel.suites.samples import random_group_map
from qabel.suites.samples import random_polynomial
from qabel.suites.samples import random_section

if TYPE_CHECKING:
    from typing import Sequence
    from typing import Tuple
    from typing import Union

    from qabel.geometry.bundle import FormPair
    from qabel.geometry.bundle import HermitianBundle
    from qabel.geometry.bundle import Section
    from qabel.geometry.group_calculus import GroupMap
    from qabel.suites.checks import RunContext

    Residual = Union[KForm, MatForm, QForm]

__all__ = (
    'BUNDLE_CHECKS',
    'FORMS_CHECKS',
    'GROUP_CHECKS',
    'QUATERNION_CHECKS',
    'residual',
)

SMALL_BOX = ((-0.5, 0.5),) * 4


def residual(form: Residual, points: np.ndarray) -> float:
    """Return the largest coefficient of ``form`` at ``points``.

    :param form: A scalar, matrix or quaternion form.
    :param points: Complex array of shape ``(P, m)``.

    """
    if isinstance(form, QForm):
        return max(residual(form.A, points), residual(form.B, points))
    return max_abs(form.evaluate(points))


def _pair_residual(
    first: FormPair, second: FormPair, points: np.ndarray
) -> float:
    return max(
        residual(left - right, points) for left, right in zip(first, second)
    )


def _quaternions(context: RunContext, salt: int) -> Tuple[Quaternion, int]:
    count = context.count('quaternion', 'points', 100)
    rng = context.rng(salt)
    a, b = (
        rng.normal(size=count) + 1j * rng.normal(size=count) for _ in range(2)
    )
    return Quaternion(a, b), count


def _quaternion_tolerance(context: RunContext) -> float:
    return context.tol('quaternion', 'tolerance', 1e-12)


def quaternion_homomorphism(context: RunContext) -> Outcome:
    p, count = _quaternions(context, 1)
    q, _ = _quaternions(context, 2)
    product = np.einsum('ikn,kjn->ijn', embed(p), embed(q))
    value = max_abs(embed(multiply(p, q)) - product)
    return Outcome(value, 0.0, _quaternion_tolerance(context), samples=count)


def quaternion_inverse(context: RunContext) -> Outcome:
    q, count = _quaternions(context, 3)
    product = multiply(q, inverse(q))
    value = max(max_abs(product.a - 1), max_abs(product.b))
    return Outcome(value, 0.0, _quaternion_tolerance(context), samples=count)


def quaternion_determinant(context: RunContext) -> Outcome:
    q, count = _quaternions(context, 4)
    matrix = np.moveaxis(embed(q), -1, 0)
    value = max_abs(np.linalg.det(matrix) - q.norm2)
    return Outcome(value, 0.0, _quaternion_tolerance(context), samples=count)


def quaternion_polar(context: RunContext) -> Outcome:
    q, count = _quaternions(context, 5)
    decomposition = polar(q)
    unit = decomposition.unit
    r = decomposition.r
    value = max(
        max_abs((unit.a * r - q.a) / r),
        max_abs((unit.b * r - q.b) / r),
        max_abs(unit.norm2 - 1),
    )
    return Outcome(value, 0.0, _quaternion_tolerance(context), samples=count)


def quaternion_conjugate_linear(context: RunContext) -> Outcome:
    z, count = _quaternions(context, 6)
    scalar = Quaternion(z.a, np.zeros_like(z.a))
    left = multiply(Quaternion.j(), scalar)
    right = multiply(Quaternion(z.a.conjugate(), 0 * z.a), Quaternion.j())
    value = max(max_abs(left.a - right.a), max_abs(left.b - right.b))
    return Outcome(value, 0.0, _quaternion_tolerance(context), samples=count)


QUATERNION_CHECKS = (
    Check(
        'quaternion.embedding-homomorphism',
        'gives the expression for the C-basis',
        quaternion_homomorphism,
    ),
    Check(
        'quaternion.inverse',
        'with u conj(u) + v conj(v) = 1',
        quaternion_inverse,
    ),
    Check(
        'quaternion.determinant',
        'det [[a, b], [-conj(b), conj(a)]] = |a|^2 + |b|^2',
        quaternion_determinant,
    ),
    Check(
        'quaternion.polar',
        'h = r [[u, v], [-conj(v), conj(u)]]',
        quaternion_polar,
    ),
    Check(
        'quaternion.conjugate-linear',
        'the action of j is conjugate linear',
        quaternion_conjugate_linear,
    ),
)


def _forms_setup(
    context: RunContext, salt: int
) -> Tuple[Chart, np.random.Generator, np.ndarray, float]:
    chart = Chart(3)
    rng = context.rng(salt)
    count = context.count('forms', 'points', 100)
    points = chart.sample(count, int(rng.integers(2 ** 31)), margin=0.05)
    return chart, rng, points, context.tol('forms', 'tolerance', 1e-10)


def _some_indices(
    chart: Chart, degree: int, rng: np.random.Generator, count: int = 4
) -> Sequence[tuple]:
    indices = basis(chart.nvars, degree)
    chosen = rng.choice(len(indices), size=min(count, len(indices)))
    return [indices[int(i)] for i in sorted(set(chosen))]


def forms_type_partition(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 11)
    form = random_form(chart, 3, rng, poly_degree=1)
    total = KForm(chart, 3)
    for p, q in form.types():
        total = total + form.type_project(p, q)
    value = residual(total - form, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_d_squared(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 12)
    form = random_form(
        chart, 2, rng, poly_degree=3, indices=_some_indices(chart, 2, rng)
    )
    value = residual(form.d().d(), points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_leibniz(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 13)
    x = random_form(chart, 1, rng, indices=_some_indices(chart, 1, rng))
    y = random_form(chart, 2, rng, indices=_some_indices(chart, 2, rng))
    expected = x.d().wedge(y) - x.wedge(y.d())
    value = residual(x.wedge(y).d() - expected, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_graded_commutativity(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 14)
    x = random_form(chart, 1, rng, poly_degree=1)
    y = random_form(chart, 1, rng, poly_degree=1)
    z = random_form(chart, 2, rng, indices=_some_indices(chart, 2, rng))
    value = max(
        residual(x.wedge(y) + y.wedge(x), points),
        residual(x.wedge(z) - z.wedge(x), points),
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def _random_qform(chart: Chart, rng: np.random.Generator) -> QForm:
    return QForm(
        random_form(chart, 1, rng, poly_degree=1),
        random_form(chart, 1, rng, poly_degree=1),
    )


def forms_qwedge_embedding(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 15)
    x, y = _random_qform(chart, rng), _random_qform(chart, rng)
    difference = x.qwedge(y).to_mat() - x.to_mat().wedge(y.to_mat())
    value = residual(difference, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_triple_wedge(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 16)
    a = random_form(chart, 1, rng, poly_degree=1)
    imaginary = a - a.conj()
    b = random_form(chart, 1, rng, poly_degree=1)
    x = QForm(imaginary, b)
    cube = x.qwedge(x).qwedge(x)
    expected = imaginary.conj().wedge(b).wedge(b.conj()) * 3
    value = max(
        residual(cube.A - expected, points), residual(cube.B, points)
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_cyclicity(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _forms_setup(context, 17)

    def matrix() -> MatForm:
        return MatForm(
            [
                [random_form(chart, 1, rng, poly_degree=1) for _ in range(2)]
                for _ in range(2)
            ]
        )

    x, y = matrix(), matrix()
    value = residual(x.wedge(y).trace() + y.wedge(x).trace(), points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def forms_gradient(context: RunContext) -> Outcome:
    chart, rng, points, _ = _forms_setup(context, 18)
    field = (random_polynomial(chart, rng, degree=2, scale=0.3)).exp()
    worst = 0.0
    for var in range(chart.nvars):
        exact = field.derivative(var).evaluate(points)
        approximate = wirtinger_difference(field, points, var)
        scale = max(max_abs(exact), 1.0)
        worst = max(worst, max_abs(exact - approximate) / scale)
    tolerance = context.tol('forms', 'gradient_tolerance', 1e-6)
    return Outcome(worst, 0.0, tolerance, samples=len(points))


FORMS_CHECKS = (
    Check(
        'forms.type-partition',
        'current of type (1,2)+(0,3)',
        forms_type_partition,
    ),
    Check('forms.d-squared', 'd d = 0', forms_d_squared),
    Check(
        'forms.leibniz',
        'd(x ^ y) = dx ^ y + (-1)^|x| x ^ dy',
        forms_leibniz,
    ),
    Check(
        'forms.graded-commutativity',
        'x ^ y = (-1)^(|x||y|) y ^ x',
        forms_graded_commutativity,
    ),
    Check(
        'forms.qwedge-embedding',
        'Using the rule',
        forms_qwedge_embedding,
    ),
    Check(
        'forms.triple-wedge',
        '(A + B j)^3 = 3 conj(A) ^ B ^ conj(B)',
        forms_triple_wedge,
    ),
    Check(
        'forms.trace-cyclicity',
        'tr(x ^ y) = (-1)^(|x||y|) tr(y ^ x)',
        forms_cyclicity,
    ),
    Check(
        'forms.gradient-check',
        'Wirtinger derivatives against central differences',
        forms_gradient,
    ),
)


def _group_setup(
    context: RunContext, salt: int
) -> Tuple[GroupMap, np.random.Generator, np.ndarray, float]:
    chart = Chart(3)
    rng = context.rng(salt)
    count = context.count('group', 'points', 100)
    points = chart.sample(count, int(rng.integers(2 ** 31)))
    g = random_group_map(chart, rng)
    return g, rng, points, context.tol('group', 'tolerance', 1e-9)


def group_maurer_cartan(context: RunContext) -> Outcome:
    g, _, points, tolerance = _group_setup(context, 21)
    omega = maurer_cartan(g)
    value = residual(omega.d() + omega.qwedge(omega), points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def group_left_invariance(context: RunContext) -> Outcome:
    g, rng, points, tolerance = _group_setup(context, 22)
    q = Quaternion(random_complex(rng), random_complex(rng))
    difference = maurer_cartan(g.left_multiply(q)) - maurer_cartan(g)
    value = residual(difference, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def group_invariant_real_closed(context: RunContext) -> Outcome:
    g, _, points, tolerance = _group_setup(context, 23)
    form = invariant_three_form(g)
    value = max(
        residual(form - form.conj(), points), residual(form.d(), points)
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def group_decomposition(context: RunContext) -> Outcome:
    g, _, points, tolerance = _group_setup(context, 24)
    full = full_three_form(g)
    split = scale_three_form(g) + invariant_three_form(g)
    value = max(
        residual(full - split, points), residual(full.d(), points)
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def group_matrix_oracle(context: RunContext) -> Outcome:
    g, _, points, tolerance = _group_setup(context, 25)
    matrix = maurer_cartan(g).to_mat()
    cube = matrix.wedge(matrix).wedge(matrix).trace()
    value = residual(full_three_form(g) - cube, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def _s3_spec(context: RunContext) -> QuadratureSpec:
    resolution = context.settings.get_int('group', 's3_resolution', 64)
    return QuadratureSpec(method='gauss-grid', resolution=resolution)


def group_s3_constant(context: RunContext) -> Outcome:
    result = s3_constant(_s3_spec(context), 'hopf')
    tolerance = context.tol('group', 's3_tolerance', 1e-6) * S3_CONSTANT
    return Outcome(
        result.value, S3_CONSTANT, tolerance, result.error, result.samples
    )


def group_s3_volume(context: RunContext) -> Outcome:
    result = s3_constant(_s3_spec(context), 'hopf')
    tolerance = context.tol('group', 'volume_tolerance', 1e-8) * S3_VOLUME
    return Outcome(result.volume, S3_VOLUME, tolerance, 0.0, result.samples)


def group_s3_euler(context: RunContext) -> Outcome:
    result = s3_constant(_s3_spec(context), 'euler')
    tolerance = context.tol('group', 's3_tolerance', 1e-6) * S3_CONSTANT
    return Outcome(
        result.value, S3_CONSTANT, tolerance, result.error, result.samples
    )


def group_s3_reversed(context: RunContext) -> Outcome:
    result = s3_constant(_s3_spec(context), 'hopf', reverse=True)
    tolerance = context.tol('group', 's3_tolerance', 1e-6) * S3_CONSTANT
    return Outcome(
        result.value, -S3_CONSTANT, tolerance, result.error, result.samples
    )


GROUP_CHECKS = (
    Check('group.maurer-cartan', 'On the other hand', group_maurer_cartan),
    Check(
        'group.left-invariance',
        'is a left-invariant 1-form on H*',
        group_left_invariance,
    ),
    Check(
        'group.invariant-real-closed',
        'is real and d-closed on',
        group_invariant_real_closed,
    ),
    Check(
        'group.scale-unit-split',
        'On the other hand',
        group_decomposition,
    ),
    Check(
        'group.matrix-oracle',
        'tr((h^-1 dh)^3) of the embedded form',
        group_matrix_oracle,
    ),
    Check(
        'group.s3-constant',
        'evaluated at (u,v)=(1,0)',
        group_s3_constant,
    ),
    Check('group.s3-volume', '12 vol(S^3) = 24 pi^2', group_s3_volume),
    Check(
        'group.s3-euler-chart',
        'the constant does not depend on the chart',
        group_s3_euler,
    ),
    Check(
        'group.s3-orientation',
        'the reversed orientation flips the sign',
        group_s3_reversed,
    ),
)


def _bundle_setup(
    context: RunContext, salt: int
) -> Tuple[Chart, np.random.Generator, np.ndarray, float]:
    chart = Chart(2, box=SMALL_BOX)
    rng = context.rng(salt)
    count = context.count('bundle', 'points', 100)
    points = chart.sample(count, int(rng.integers(2 ** 31)))
    return chart, rng, points, context.tol('bundle', 'tolerance', 1e-9)


def bundle_j_squared(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 31)
    bundle = random_bundle(chart, rng)
    s = random_section(chart, rng)
    jj = j_structure(bundle, j_structure(bundle, s))
    value = max_abs(jj.evaluate(points) + s.evaluate(points))
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_quaternionic_identities(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 32)
    bundle = random_bundle(chart, rng)
    s = random_section(chart, rng)
    t = random_section(chart, rng, label='t')
    js, jt = j_structure(bundle, s), j_structure(bundle, t)
    norm = bundle.norm2(s)
    residuals = (
        bundle.pairing(js, s),
        bundle.wedge_ratio(s, js) - norm,
        bundle.norm2(js) - norm,
        bundle.wedge_ratio(js, jt) - bundle.wedge_ratio(s, t).conjugate(),
    )
    value = max(max_abs(field.evaluate(points)) for field in residuals)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_chern_type(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 33)
    connection = chern_connection(random_bundle(chart, rng))
    curvature = connection.curvature()
    value = max(
        residual(connection.theta.type_project(0, 1), points),
        residual(curvature.type_project(2, 0), points),
        residual(curvature.type_project(0, 2), points),
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_metric_compatibility(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 34)
    bundle = random_bundle(chart, rng)
    connection = chern_connection(bundle)
    s = random_section(chart, rng)
    t = random_section(chart, rng, label='t')
    left = KForm.scalar(bundle.pairing(s, t)).d()
    right = (
        bundle.pairing_forms(connection.covariant(s), t)
        + bundle.pairing_forms(connection.covariant(t), s).conj()
    )
    value = residual(left - right, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_quaternionic_connection(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 35)
    bundle = random_bundle(chart, rng)
    connection = chern_connection(bundle)
    s = random_section(chart, rng)
    d_js = connection.covariant(j_structure(bundle, s))
    j_ds = j_forms(bundle, connection.covariant(s))
    value = _pair_residual(d_js, j_ds, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def _holomorphic_setup(
    context: RunContext, salt: int
) -> Tuple[HermitianBundle, Section, np.ndarray, float]:
    chart, rng, points, tolerance = _bundle_setup(context, salt)
    bundle = random_conformal_bundle(chart, rng)
    s = random_section(chart, rng, holomorphic=True, label='sP')
    return bundle, s, points, tolerance


def bundle_frame_matrix(context: RunContext) -> Outcome:
    bundle, s, points, tolerance = _holomorphic_setup(context, 36)
    moved = chern_connection(bundle).in_frame(section_frame(bundle, s))
    formulas = chern_in_section_frame(bundle, s)
    value = residual(moved.theta - formulas.theta, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_beta_constraint(context: RunContext) -> Outcome:
    bundle, s, points, tolerance = _holomorphic_setup(context, 37)
    formulas = frame_formulas(bundle, s)
    beta = formulas.beta
    value = max(
        residual(beta.d_prime() - formulas.dlog.wedge(beta), points),
        residual(beta.type_project(0, 1), points),
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_frame_curvature(context: RunContext) -> Outcome:
    bundle, s, points, tolerance = _holomorphic_setup(context, 38)
    moved = chern_connection(bundle).in_frame(section_frame(bundle, s))
    displayed = frame_curvature(frame_formulas(bundle, s))
    value = residual(moved.curvature().transpose() - displayed, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_operator_identity(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 39)
    bundle = random_bundle(chart, rng)
    s = random_section(chart, rng)
    left, right = operator_sides(bundle, chern_connection(bundle), s)
    value = _pair_residual(left, right, points)
    return Outcome(value, 0.0, tolerance, samples=len(points))


def bundle_flat_connection(context: RunContext) -> Outcome:
    chart, rng, points, tolerance = _bundle_setup(context, 40)
    bundle = random_bundle(chart, rng)
    s = random_section(chart, rng)
    flat = flat_connection_from_section(bundle, s)
    value = max(
        residual(flat.curvature(), points),
        max(residual(form, points) for form in flat.covariant(s)),
        max(
            residual(form, points)
            for form in flat.covariant(j_structure(bundle, s))
        ),
    )
    return Outcome(value, 0.0, tolerance, samples=len(points))


BUNDLE_CHECKS = (
    Check('bundle.j-squared', 'j^2 = -1', bundle_j_squared),
    Check(
        'bundle.quaternionic-structure',
        'structure of a quaternionic line bundle',
        bundle_quaternionic_identities,
    ),
    Check(
        'bundle.chern-type',
        'unique metric-(1,0) connection',
        bundle_chern_type,
    ),
    Check(
        'bundle.metric-compatibility',
        'd mu(s, t) = mu(Ds, t) + mu(s, Dt)',
        bundle_metric_compatibility,
    ),
    Check(
        'bundle.quaternionic-connection',
        'is a quaternionic connection',
        bundle_quaternionic_connection,
    ),
    Check('bundle.frame-matrix', 'we can write', bundle_frame_matrix),
    Check(
        'bundle.beta-constraint',
        'must be of type (1,1)',
        bundle_beta_constraint,
    ),
    Check(
        'bundle.frame-curvature',
        'the curvature matrix becomes',
        bundle_frame_curvature,
    ),
    Check(
        'bundle.operator-identity',
        'D^(1,0) = -j dbar j',
        bundle_operator_identity,
    ),
    Check(
        'bundle.flat-from-section',
        'such that s_P is flat',
        bundle_flat_connection,
    ),
)
