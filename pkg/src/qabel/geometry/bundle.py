"""Hermitian rank-2 bundles over a chart.

Matrices act on columns: a connection matrix ``theta`` in a frame
``e`` means ``D s = ds + theta s`` for the component column ``s``, and
its curvature is ``R = d theta + theta ^ theta``.  The metric matrix is
``H_ij = mu(e_j, e_i)``, so ``mu(s, t) = t^dagger H s``.

A determinant trivialization ``1 = c e_1 ^ e_2`` with
``|c|^2 det H = 1`` makes the bundle quaternionic::

    j t = -c eps H^T conj(t),    eps = [[0, 1], [-1, 0]]

which is the unique conjugate-linear map with
``s ^ (j t) / 1 = mu(s, t)``.

The matrices of the frame ``(s, j s)`` are reported transposed
("displayed"), the way they act on the row ``(s, j s)``; in that layout
the frame matrix of the Chern connection reads
``[[dlog N, beta], [-conj(beta), dbar log N]]`` with ``N = |s|^2``.

"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np

from qabel.algebra.quaternion import Quaternion
from qabel.exceptions import DegenerateMetricError
from qabel.exceptions import DomainError
from qabel.exceptions import SingularEvaluationError
from qabel.forms.fields import ScalarField
from qabel.forms.kform import KForm
from qabel.forms.kform import MatForm

if TYPE_CHECKING:
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple
    from typing import Union

    from qabel.forms.autodiff import Jet
    from qabel.forms.fields import Chart
    from qabel.forms.fields import Variables

    Entry = Union[ScalarField, complex, float]
    FormPair = Tuple[KForm, KForm]

__all__ = (
    'Connection',
    'Frame',
    'FrameFormulas',
    'HermitianBundle',
    'HOLOMORPHIC',
    'Section',
    'check_section_zeros',
    'chern_connection',
    'chern_in_section_frame',
    'connection_difference',
    'dprime_connection',
    'flat_connection_from_section',
    'frame_curvature',
    'frame_formulas',
    'j_forms',
    'j_structure',
    'metric_from',
    'operator_sides',
    'quaternion_ratio',
    'section_frame',
)


@dataclass(frozen=True)
class Section:
    """Section(components, holomorphic, label).

    :param components: The two components in the holomorphic frame.
    :param holomorphic: Whether ``dbar`` of the components vanishes.
    :param label: A name used to label frames built from the section.

    """

    components: Tuple[ScalarField, ScalarField]
    holomorphic: bool = False
    label: str = 's'

    @property
    def chart(self) -> Chart:
        return self.components[0].chart

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Return the components at ``points``, shape ``(P, 2)``.

        :param points: Complex array of shape ``(P, m)``.

        """
        return np.stack(
            [component.evaluate(points) for component in self.components],
            axis=1,
        )

    def dbar(self) -> FormPair:
        """Return ``dbar`` of both components."""
        first, second = (
            KForm.scalar(component).d_double_prime()
            for component in self.components
        )
        return first, second

    def check_holomorphic(
        self, points: np.ndarray, tol: float = 1e-10
    ) -> None:
        """Raise if a holomorphic section has ``dbar s != 0`` at ``points``.

        :param points: Complex array of shape ``(P, m)``.
        :param tol: The admissible maximum of ``|dbar s|``.

        :raises DomainError: If the flag and the values disagree.

        """
        if not self.holomorphic:
            return
        largest = max(
            float(np.max(np.abs(form.evaluate(points)), initial=0.0))
            for form in self.dbar()
        )
        if largest > tol:
            raise DomainError(
                f'The section {self.label} is flagged holomorphic but '
                f'|dbar s| = {largest:.2e}!'
            )


class Frame(NamedTuple):
    """Frame(label: str, matrix: Optional[MatForm]).

    :ivar label:  Frames are compared by label.
    :ivar matrix:  The frame vectors as the columns of a matrix 0-form
        in the holomorphic frame; ``None`` for the holomorphic frame.

    """

    label: str
    matrix: Optional[MatForm] = None


HOLOMORPHIC = Frame('holomorphic')


class HermitianBundle:
    """Trivial rank-2 bundle with a hermitian metric.

    :param metric: The 2x2 positive hermitian matrix ``H`` of fields.
    :param chart: The chart, used for numeric entries.
    :param determinant: ``c`` in ``1 = c e_1 ^ e_2``.
    :param tube_radius: The radius of excision tubes around zero sets
        of sections.

    """

    def __init__(
        self,
        metric: Sequence[Sequence[Entry]],
        chart: Chart,
        determinant: complex = 1.0,
        tube_radius: float = 1e-2,
    ) -> None:
        self.chart = chart
        self.determinant = complex(determinant)
        self.tube_radius = tube_radius
        self._base: List[List[ScalarField]] = [
            [
                (
                    entry
                    if isinstance(entry, ScalarField)
                    else ScalarField.constant(chart, entry)
                ).memoized()
                for entry in row
            ]
            for row in metric
        ]
        self.H: List[List[ScalarField]] = self._guard(quaternionic=False)
        self.quaternionic_H: List[List[ScalarField]] = self._guard(
            quaternionic=True
        )

    def _guard(self, quaternionic: bool) -> List[List[ScalarField]]:
        base = self._base

        def guarded(entry: ScalarField) -> ScalarField:
            def rule(variables: Variables) -> Jet:
                values = [
                    [variables.evaluate(h).value for h in row] for row in base
                ]
                self._check_values(values, quaternionic)
                return variables.evaluate(entry)

            return ScalarField(self.chart, rule, cached=True, label='H')

        return [[guarded(entry) for entry in row] for row in base]

    def _check_values(
        self, values: List[List[np.ndarray]], quaternionic: bool
    ) -> None:
        h11, h12 = values[0]
        h21, h22 = values[1]
        det = h11 * h22 - h12 * h21
        if np.any(h11.real <= 0) or np.any(det.real <= 0):
            raise DegenerateMetricError(
                'The metric must be positive definite!'
            )
        if quaternionic and np.any(
            np.abs(abs(self.determinant) ** 2 * det.real - 1) > 1e-8
        ):
            raise DegenerateMetricError(
                'The quaternionic structure needs |c|^2 det H = 1!'
            )

    def metric_matrix(self) -> MatForm:
        return MatForm.from_fields(self.H, self.chart)

    def pairing(self, s: Section, t: Section) -> ScalarField:
        """Return ``mu(s, t) = t^dagger H s``.

        :param s: The first (linear) argument.
        :param t: The second (conjugate-linear) argument.

        """
        total = ScalarField.constant(self.chart, 0)
        for i in range(2):
            for k in range(2):
                total = total + t.components[i].conjugate() * self.H[i][k] * (
                    s.components[k]
                )
        return total

    def pairing_forms(self, forms: FormPair, t: Section) -> KForm:
        """Return ``mu(S, t)`` for a form-valued ``S``.

        :param forms: The components of ``S``.
        :param t: The second argument.

        """
        total = KForm(self.chart, forms[0].degree)
        for i in range(2):
            for k in range(2):
                total = total + forms[k] * (
                    t.components[i].conjugate() * self.H[i][k]
                )
        return total

    def norm2(self, s: Section) -> ScalarField:
        """Return ``|s|^2`` as a real field.

        :param s: The section.

        """
        return self.pairing(s, s).real().memoized()

    def wedge_ratio(self, s: Section, t: Section) -> ScalarField:
        """Return ``(s ^ t) / 1``.

        :param s: The first section.
        :param t: The second section.

        """
        (s1, s2), (t1, t2) = s.components, t.components
        return (s1 * t2 - s2 * t1) / self.determinant


def _j_components(
    bundle: HermitianBundle, conjugated: Sequence[object]
) -> Tuple[object, object]:
    h = bundle.quaternionic_H
    c = bundle.determinant
    first, second = conjugated
    return (
        (first * h[0][1] + second * h[1][1]) * -c,  # type: ignore
        (first * h[0][0] + second * h[1][0]) * c,  # type: ignore
    )


def j_structure(bundle: HermitianBundle, s: Section) -> Section:
    """Return ``j s``.

    :param bundle: A quaternionic bundle (``|c|^2 det H = 1``).
    :param s: The section.

    :raises DegenerateMetricError: On evaluation, if the metric is not
        positive or not compatible with the determinant.

    """
    first, second = _j_components(
        bundle, [component.conjugate() for component in s.components]
    )
    return Section(
        (first.memoized(), second.memoized()),  # type: ignore
        holomorphic=False,
        label=f'j{s.label}',
    )


def j_forms(bundle: HermitianBundle, forms: FormPair) -> FormPair:
    """Apply ``j`` to a form-valued section, conjugating the forms.

    :param bundle: A quaternionic bundle.
    :param forms: The components.

    """
    first, second = _j_components(bundle, [form.conj() for form in forms])
    return first, second  # type: ignore


class Connection:
    """Connection matrix in a frame.

    :param theta: The matrix 1-form acting on component columns.
    :param frame: The frame the matrix refers to.
    :param flat: Declared flatness.
    :param metric: Declared metric compatibility.
    :param quaternionic: Declared compatibility with ``j``.

    """

    def __init__(
        self,
        theta: MatForm,
        frame: Frame = HOLOMORPHIC,
        *,
        flat: bool = False,
        metric: bool = False,
        quaternionic: bool = False,
    ) -> None:
        if theta.degree != 1:
            raise DomainError('A connection matrix must be a 1-form!')
        self.theta = theta
        self.frame = frame
        self.flat = flat
        self.metric = metric
        self.quaternionic = quaternionic

    @property
    def chart(self) -> Chart:
        return self.theta.chart

    def __repr__(self) -> str:
        return f'Connection(frame={self.frame.label!r}, flat={self.flat})'

    def covariant(self, s: Section) -> FormPair:
        """Return ``D s = ds + theta s``.

        :param s: Components in the frame of the connection.

        """
        result = []
        for i in range(2):
            form = KForm.scalar(s.components[i]).d()
            for k in range(2):
                form = form + self.theta[i, k] * s.components[k]
            result.append(form)
        return result[0], result[1]

    def curvature(self) -> MatForm:
        """Return ``d theta + theta ^ theta``."""
        return self.theta.d() + self.theta.wedge(self.theta)

    def shifted(self, difference: MatForm) -> Connection:
        """Return the connection ``D + difference`` in the same frame.

        :param difference: A matrix 1-form.

        """
        return Connection(self.theta + difference, self.frame)

    def in_frame(self, frame: Frame) -> Connection:
        """Return the matrix in another frame, ``P^-1 dP + P^-1 theta P``.

        :param frame: The new frame, given in the holomorphic frame.

        :raises DomainError: If the connection is not in the holomorphic
            frame or the new frame has no matrix.

        """
        if self.frame.label != HOLOMORPHIC.label or frame.matrix is None:
            raise DomainError(
                'Frames are changed from the holomorphic frame only!'
            )
        matrix = frame.matrix
        inverse = matrix.inverse()
        theta = inverse.wedge(matrix.d()) + inverse.wedge(
            self.theta.wedge(matrix)
        )
        return Connection(
            theta,
            frame,
            flat=self.flat,
            metric=self.metric,
            quaternionic=self.quaternionic,
        )


class FrameFormulas(NamedTuple):
    """The Chern connection in the frame ``(s, j s)``.

    :ivar beta:  The ``(1, 0)``-form ``mu(Ds, js) / |s|^2``.
    :ivar log_norm:  The field ``log |s|^2``.
    :ivar dlog:  ``d' log |s|^2``.
    :ivar dbar_log:  ``d'' log |s|^2``.
    :ivar matrix:  ``[[dlog, beta], [-conj(beta), dbar_log]]``.

    """

    beta: KForm
    log_norm: ScalarField
    dlog: KForm
    dbar_log: KForm
    matrix: MatForm


def chern_connection(bundle: HermitianBundle) -> Connection:
    """Return the metric ``(1, 0)`` connection ``theta = H^-1 dH``.

    The holomorphic structure is the one of the trivial frame.

    :param bundle: The hermitian bundle.

    """
    metric = bundle.metric_matrix()
    theta = metric.inverse().wedge(
        MatForm(
            [[entry.d_prime() for entry in row] for row in metric.entries]
        )
    )
    return Connection(theta, HOLOMORPHIC, metric=True, quaternionic=True)


def section_frame(bundle: HermitianBundle, s: Section) -> Frame:
    """Return the frame ``(s, j s)``.

    :param bundle: A quaternionic bundle.
    :param s: A section without zeros on the evaluation set.

    """
    js = j_structure(bundle, s)
    matrix = MatForm.from_fields(
        [
            [s.components[0], js.components[0]],
            [s.components[1], js.components[1]],
        ],
        bundle.chart,
    )
    return Frame(f'({s.label}, j{s.label})', matrix)


def frame_formulas(bundle: HermitianBundle, s: Section) -> FrameFormulas:
    """Return ``beta`` and the displayed Chern matrix in ``(s, j s)``.

    :param bundle: A quaternionic bundle.
    :param s: A holomorphic section, away from its zeros.

    """
    norm = bundle.norm2(s)
    log_norm = norm.log().memoized()
    dlog = KForm.scalar(log_norm).d_prime()
    dbar_log = KForm.scalar(log_norm).d_double_prime()
    derivative = chern_connection(bundle).covariant(s)
    beta = bundle.pairing_forms(derivative, j_structure(bundle, s)) * (
        norm.reciprocal().memoized()
    )
    matrix = MatForm([[dlog, beta], [-beta.conj(), dbar_log]])
    return FrameFormulas(
        beta=beta,
        log_norm=log_norm,
        dlog=dlog,
        dbar_log=dbar_log,
        matrix=matrix,
    )


def frame_curvature(formulas: FrameFormulas) -> MatForm:
    """Return the displayed curvature of the Chern connection in ``(s, js)``.

    Entries, with ``a = d' log N``::

        [[d''a + beta ^ conj(beta),   d''beta + conj(a) ^ beta],
         [-d'conj(beta) - a ^ conj(beta), d'conj(a) - beta ^ conj(beta)]]

    :param formulas: The output of :func:`frame_formulas`.

    """
    a, a_bar, beta = formulas.dlog, formulas.dbar_log, formulas.beta
    beta_bar = beta.conj()
    return MatForm(
        [
            [
                a.d_double_prime() + beta.wedge(beta_bar),
                beta.d_double_prime() + a_bar.wedge(beta),
            ],
            [
                -beta_bar.d_prime() - a.wedge(beta_bar),
                a_bar.d_prime() - beta.wedge(beta_bar),
            ],
        ]
    )


def flat_connection_from_section(
    bundle: HermitianBundle, s: Section, in_section_frame: bool = False
) -> Connection:
    """Return the quaternionic connection with ``D s = 0``.

    ``theta = -dP P^-1`` for ``P = [s | j s]``, so ``D`` also kills
    ``j s`` and is flat.  In the frame ``(s, j s)`` its matrix vanishes.

    :param bundle: A quaternionic bundle.
    :param s: A section without zeros on the evaluation set.
    :param in_section_frame: Return the matrix in ``(s, j s)``.

    """
    frame = section_frame(bundle, s)
    if in_section_frame:
        return Connection(
            MatForm.zeros(bundle.chart, 1), frame, flat=True, quaternionic=True
        )
    matrix = frame.matrix
    theta = -matrix.d().wedge(matrix.inverse())  # type: ignore
    return Connection(theta, HOLOMORPHIC, flat=True, quaternionic=True)


def chern_in_section_frame(bundle: HermitianBundle, s: Section) -> Connection:
    """Return the Chern connection in ``(s, j s)`` from its frame formulas.

    :param bundle: A quaternionic bundle.
    :param s: A holomorphic section, away from its zeros.

    """
    formulas = frame_formulas(bundle, s)
    return Connection(
        formulas.matrix.transpose(),
        section_frame(bundle, s),
        metric=True,
        quaternionic=True,
    )


def dprime_connection(bundle: HermitianBundle, s: Section) -> Connection:
    """Return ``D'_P``, written in the frame ``(s, j s)``.

    Its displayed matrix is ``[[0, 0], [-conj(beta), dbar log N]]``; it
    differs from the Chern connection by a ``(1, 0)`` matrix.

    :param bundle: A quaternionic bundle.
    :param s: A holomorphic section, away from its zeros.

    """
    formulas = frame_formulas(bundle, s)
    zero = KForm(bundle.chart, 1)
    displayed = MatForm(
        [[zero, zero], [-formulas.beta.conj(), formulas.dbar_log]]
    )
    return Connection(displayed.transpose(), section_frame(bundle, s))


def connection_difference(first: Connection, second: Connection) -> MatForm:
    """Return ``A = D1 - D0`` as a matrix 1-form.

    :param first: ``D1``.
    :param second: ``D0``, in the same frame.

    :raises DomainError: If the frames differ.

    """
    if first.frame.label != second.frame.label:
        raise DomainError(
            f'Cannot subtract connections in frames {first.frame.label!r} '
            f'and {second.frame.label!r}!'
        )
    return first.theta - second.theta


def quaternion_ratio(
    bundle: HermitianBundle, s_p: Section, s_q: Section
) -> Quaternion:
    """Return ``g = a + b j`` with ``s_Q = a s_P + b (j s_P)``.

    :param bundle: A quaternionic bundle.
    :param s_p: The reference section.
    :param s_q: The other section.

    """
    norm = bundle.norm2(s_p).reciprocal().memoized()
    return Quaternion(
        (bundle.pairing(s_q, s_p) * norm).memoized(),
        (bundle.pairing(s_q, j_structure(bundle, s_p)) * norm).memoized(),
    )


def operator_sides(
    bundle: HermitianBundle, connection: Connection, s: Section
) -> Tuple[FormPair, FormPair]:
    """Return ``(D^(1,0) s, -j dbar(j s))`` for the Chern connection.

    :param bundle: A quaternionic bundle.
    :param connection: The Chern connection of ``bundle``.
    :param s: A smooth section.

    """
    first, second = connection.covariant(s)
    holomorphic_part = (first.type_project(1, 0), second.type_project(1, 0))
    js = j_structure(bundle, s)
    dbar_js = js.dbar()
    minus = j_forms(bundle, dbar_js)
    return holomorphic_part, (-minus[0], -minus[1])


def metric_from(
    p: ScalarField, q: ScalarField
) -> List[List[ScalarField]]:
    """Return ``[[p, q], [conj(q), (1 + |q|^2) / p]]``, of determinant 1.

    :param p: A positive real field.
    :param q: A complex field.

    """
    return [[p, q], [q.conjugate(), (q.abs2() + 1) / p]]


def check_section_zeros(
    bundle: HermitianBundle, s: Section, points: np.ndarray
) -> None:
    """Raise when ``points`` come closer than the tube radius to ``s = 0``.

    :param bundle: The bundle, providing the tube radius.
    :param s: The section.
    :param points: Complex array of shape ``(P, m)``.

    :raises SingularEvaluationError: If a point is too close.

    """
    values = s.evaluate(points)
    if np.any(np.linalg.norm(values, axis=1) < bundle.tube_radius):
        raise SingularEvaluationError(
            f'The section {s.label} vanishes near an evaluation point!'
        )

