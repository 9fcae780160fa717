"""Charts and differentiable scalar fields.

A :class:`ScalarField` is a rule that turns a :class:`Variables` batch
into a :class:`~qabel.forms.autodiff.Jet`.  Arithmetic on fields builds
new rules, so a field is an expression tree that is evaluated lazily at
any truncation order.  A derivative field evaluates its parent one
order higher and differentiates the jet; parents of derivatives are
memoized per batch, so all first derivatives of a field share a single
evaluation of it.

"""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError
from qabel.exceptions import SingularEvaluationError
from qabel.forms.autodiff import Jet
from qabel.qa_constants import DEFAULT_CHUNK
from qabel.qa_constants import SINGULAR_THRESHOLD

if TYPE_CHECKING:
    from typing import Any
    from typing import Callable
    from typing import Dict
    from typing import Optional
    from typing import Sequence
    from typing import Tuple
    from typing import Union

    Rule = Callable[['Variables'], Jet]
    Operand = Union['ScalarField', complex, float]

__all__ = (
    'Chart',
    'ScalarField',
    'Variables',
    'evaluate_fields',
    'wirtinger_difference',
)


@dataclass(frozen=True)
class Chart:
    """Coordinate chart ``z_1..z_m`` of complex dimension ``m``.

    :param dim: The complex dimension, 1 to 3.
    :param box: ``(low, high)`` per real coordinate in the order
        ``x_1, y_1, x_2, y_2, ...``; ``[-1, 1]`` each by default.

    """

    dim: int
    box: Tuple[Tuple[float, float], ...] = ()
    labels: Tuple[str, ...] = dataclass_field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.dim not in {1, 2, 3}:
            raise DomainError('The chart dimension must be 1, 2 or 3!')
        if not self.box:
            object.__setattr__(self, 'box', ((-1.0, 1.0),) * (2 * self.dim))
        if len(self.box) != 2 * self.dim or any(
            high <= low for low, high in self.box
        ):
            raise DomainError('The chart box must have positive volume!')
        if not self.labels:
            object.__setattr__(
                self,
                'labels',
                tuple(f'z{i + 1}' for i in range(self.dim))
                + tuple(f'zbar{i + 1}' for i in range(self.dim)),
            )

    @property
    def nvars(self) -> int:
        return 2 * self.dim

    def z(self, i: int) -> ScalarField:  # noqa: WPS111
        """Return the coordinate field ``z_(i+1)``.

        :param i: The zero-based coordinate index.

        """
        return ScalarField(self, lambda v: v.coordinate(i), label=f'z{i + 1}')

    def zbar(self, i: int) -> ScalarField:
        """Return the field ``conj(z_(i+1))``.

        :param i: The zero-based coordinate index.

        """
        return ScalarField(
            self, lambda v: v.coordinate(self.dim + i), label=f'zbar{i + 1}'
        )

    def x(self, i: int) -> ScalarField:  # noqa: WPS111
        return (self.z(i) + self.zbar(i)) * 0.5

    def y(self, i: int) -> ScalarField:  # noqa: WPS111
        return (self.z(i) - self.zbar(i)) * -0.5j

    def constant(self, value: complex) -> ScalarField:
        return ScalarField.constant(self, value)

    def sample(
        self, count: int, seed: int, margin: float = 0.0
    ) -> np.ndarray:
        """Return ``count`` uniform random points of shape ``(count, m)``.

        :param count: The number of points.
        :param seed: The seed of ``numpy.random.default_rng``.
        :param margin: The distance kept from the box faces.

        """
        rng = np.random.default_rng(seed)
        low = np.array([bounds[0] for bounds in self.box]) + margin
        high = np.array([bounds[1] for bounds in self.box]) - margin
        real = rng.uniform(low, high, size=(count, self.nvars))
        return real[:, 0::2] + 1j * real[:, 1::2]


class Variables:
    """One evaluation batch: points, truncation order and memo table.

    :param chart: The chart of the points.
    :param points: Complex array of shape ``(P, m)``.
    :param order: The truncation order of the jets produced.
    :param cache: The memo table, shared with lifted batches.

    """

    def __init__(
        self,
        chart: Chart,
        points: np.ndarray,
        order: int = 0,
        cache: Optional[Dict[Tuple[int, int], Jet]] = None,
    ) -> None:
        self.chart = chart
        self.points = points
        self.order = order
        self.cache: Dict[Tuple[int, int], Jet] = (
            {} if cache is None else cache
        )

    @property
    def npoints(self) -> int:
        return int(self.points.shape[0])

    def coordinate(self, var: int) -> Jet:
        """Return the jet of the independent variable ``var``.

        :param var: ``0..m-1`` for ``z``, ``m..2m-1`` for ``conj(z)``.

        """
        dim = self.chart.dim
        value = (
            self.points[:, var]
            if var < dim
            else self.points[:, var - dim].conj()
        )
        return Jet.variable(value, var, self.chart.nvars, self.order)

    def constant(self, value: Any) -> Jet:
        return Jet.constant(value, self.chart.nvars, self.order, self.npoints)

    def lifted(self) -> Variables:
        """Return the same batch one order higher, sharing the memo."""
        return Variables(self.chart, self.points, self.order + 1, self.cache)

    def evaluate(self, field: ScalarField, memo: bool = False) -> Jet:
        """Return the jet of ``field`` on this batch.

        :param field: The field to evaluate.
        :param memo: Memoize the result even if ``field`` is not marked.

        """
        if not (memo or field.cached):
            return field.rule(self)
        key = (id(field), self.order)
        if key not in self.cache:
            self.cache[key] = field.rule(self)
        return self.cache[key]


class ScalarField:
    """Complex-valued smooth function on a chart.

    :param chart: The chart the field lives on.
    :param rule: Maps a :class:`Variables` batch to a jet of the same
        order.
    :param cached: Memoize evaluations per batch.
    :param value: The value of a constant field, ``None`` otherwise.
    :param label: A name used in ``repr``.

    """

    def __init__(
        self,
        chart: Chart,
        rule: Rule,
        *,
        cached: bool = False,
        value: Optional[complex] = None,
        label: str = '',
    ) -> None:
        self.chart = chart
        self.rule = rule
        self.cached = cached
        self.value = value
        self.label = label
        self._derivatives: Dict[int, ScalarField] = {}

    def __repr__(self) -> str:
        name = self.label or ('const' if self.value is not None else 'field')
        return f'ScalarField({name})'

    @classmethod
    def constant(cls, chart: Chart, value: complex) -> ScalarField:
        return cls(
            chart,
            lambda v: v.constant(value),
            value=complex(value),
            label=f'{complex(value)}',
        )

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def _check_chart(self, other: ScalarField) -> None:
        if other.chart != self.chart:
            raise DomainError('The fields must live on the same chart!')

    def _combine(
        self,
        other: Operand,
        operation: Callable[[Any, Any], Any],
        fold: Callable[[ScalarField, Any], Optional[ScalarField]],
    ) -> ScalarField:
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(self.chart, other)
        self._check_chart(other)
        if self.value is not None and other.value is not None:
            return ScalarField.constant(
                self.chart, operation(self.value, other.value)
            )
        folded = fold(self, other)
        if folded is not None:
            return folded
        left, right = self, other
        return ScalarField(
            self.chart,
            lambda v: operation(v.evaluate(left), v.evaluate(right)),
        )

    def __add__(self, other: Operand) -> ScalarField:
        def fold(x: ScalarField, y: ScalarField) -> Optional[ScalarField]:
            if x.is_zero:
                return y
            return x if y.is_zero else None

        return self._combine(other, lambda x, y: x + y, fold)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> ScalarField:
        if not isinstance(other, ScalarField):
            return self + (-complex(other))
        return self + (-other)

    def __rsub__(self, other: Operand) -> ScalarField:
        return (-self) + other

    def __neg__(self) -> ScalarField:
        return self * -1.0

    def __mul__(self, other: Operand) -> ScalarField:
        def fold(x: ScalarField, y: ScalarField) -> Optional[ScalarField]:
            if x.is_zero or y.is_zero:
                return ScalarField.constant(self.chart, 0)
            if x.value == 1:
                return y
            return x if y.value == 1 else None

        return self._combine(other, lambda x, y: x * y, fold)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> ScalarField:
        if isinstance(other, ScalarField):
            return self * other.reciprocal()
        return self * (1 / complex(other))

    def __rtruediv__(self, other: Operand) -> ScalarField:
        return self.reciprocal() * other

    def __pow__(self, exponent: float) -> ScalarField:
        if isinstance(exponent, int) and exponent >= 0:
            result = ScalarField.constant(self.chart, 1)
            for _ in range(exponent):
                result = result * self
            return result
        return self.power(exponent)

    def _unary(
        self, transform: Callable[[Jet], Jet], label: str
    ) -> ScalarField:
        parent = self
        return ScalarField(
            self.chart, lambda v: transform(v.evaluate(parent)), label=label
        )

    def _nonvanishing(
        self, transform: Callable[[Jet], Jet], label: str
    ) -> ScalarField:
        parent = self

        def rule(variables: Variables) -> Jet:
            jet = variables.evaluate(parent)
            if np.any(np.abs(jet.value) < SINGULAR_THRESHOLD):
                raise SingularEvaluationError(
                    f'The argument of {label} vanishes at an evaluation '
                    'point!'
                )
            return transform(jet)

        return ScalarField(self.chart, rule, label=label)

    def conjugate(self) -> ScalarField:
        """Return the complex conjugate field."""
        if self.value is not None:
            return ScalarField.constant(self.chart, self.value.conjugate())
        return self._unary(Jet.conj, 'conj')

    def real(self) -> ScalarField:
        return (self + self.conjugate()) * 0.5

    def abs2(self) -> ScalarField:
        return self * self.conjugate()

    def exp(self) -> ScalarField:
        if self.value is not None:
            value = complex(np.exp(self.value))
            return ScalarField.constant(self.chart, value)
        return self._unary(Jet.exp, 'exp')

    def sin(self) -> ScalarField:
        return self._unary(Jet.sin, 'sin')

    def cos(self) -> ScalarField:
        return self._unary(Jet.cos, 'cos')

    def log(self) -> ScalarField:
        return self._nonvanishing(Jet.log, 'log')

    def reciprocal(self) -> ScalarField:
        if self.value is not None:
            if abs(self.value) < SINGULAR_THRESHOLD:
                raise SingularEvaluationError('Division by a zero constant!')
            return ScalarField.constant(self.chart, 1 / self.value)
        return self._nonvanishing(Jet.reciprocal, 'reciprocal')

    def power(self, exponent: float) -> ScalarField:
        """Return ``self ** exponent`` on the principal branch.

        :param exponent: A real exponent.

        """
        return self._nonvanishing(lambda jet: jet.power(exponent), 'power')

    def sqrt(self) -> ScalarField:
        return self.power(0.5)

    def compose(
        self, derivative: Callable[[np.ndarray, int], np.ndarray], label: str
    ) -> ScalarField:
        """Return ``f(self)`` for holomorphic ``f``.

        :param derivative: ``derivative(x, k) = f^(k)(x)``.
        :param label: A name used in ``repr``.

        """
        return self._unary(lambda jet: jet.apply(derivative), label)

    def guarded(self, check: Callable[[np.ndarray], None]) -> ScalarField:
        """Return the same field, calling ``check(points)`` first.

        :param check: Raises when the points are not admissible.

        """
        parent = self

        def rule(variables: Variables) -> Jet:
            check(variables.points)
            return variables.evaluate(parent)

        return ScalarField(self.chart, rule, label=self.label)

    def memoized(self) -> ScalarField:
        """Return the same field, memoized per evaluation batch."""
        parent = self
        return ScalarField(
            self.chart, lambda v: v.evaluate(parent), cached=True,
            label=self.label,
        )

    def derivative(self, var: int) -> ScalarField:
        """Return the Wirtinger derivative in the variable ``var``.

        :param var: ``0..m-1`` for ``d/dz``, ``m..2m-1`` for
            ``d/dconj(z)``.

        """
        if self.value is not None:
            return ScalarField.constant(self.chart, 0)
        if var not in self._derivatives:
            parent = self
            self._derivatives[var] = ScalarField(
                self.chart,
                lambda v: v.lifted().evaluate(parent, memo=True).derivative(
                    var
                ),
                cached=True,
                label=f'd{self.chart.labels[var]}({self.label})',
            )
        return self._derivatives[var]

    def jet(self, points: np.ndarray, order: int) -> Jet:
        """Return the jet of the field at ``points``.

        :param points: Complex array of shape ``(P, m)``.
        :param order: The truncation order.

        """
        batch = Variables(self.chart, np.asarray(points, complex), order)
        return batch.evaluate(self)

    def evaluate(
        self, points: np.ndarray, chunk: int = DEFAULT_CHUNK
    ) -> np.ndarray:
        """Return the values at ``points``, shape ``(P,)``.

        :param points: Complex array of shape ``(P, m)``.
        :param chunk: The number of points per batch.

        """
        return evaluate_fields([self], points, chunk)[0]


def evaluate_fields(
    fields: Sequence[ScalarField],
    points: np.ndarray,
    chunk: int = DEFAULT_CHUNK,
) -> np.ndarray:
    """Evaluate several fields sharing one memo table per batch.

    :param fields: The fields, all on the chart of ``points``.
    :param points: Complex array of shape ``(P, m)``.
    :param chunk: The number of points per batch.

    :returns: Complex array of shape ``(len(fields), P)``.

    """
    points = np.atleast_2d(np.asarray(points, complex))
    values = np.zeros((len(fields), points.shape[0]), complex)
    if not fields:
        return values
    chart = fields[0].chart
    for start in range(0, points.shape[0], chunk):
        batch = Variables(chart, points[start : start + chunk])
        for number, scalar in enumerate(fields):
            values[number, start : start + chunk] = batch.evaluate(
                scalar
            ).value
    return values


def wirtinger_difference(
    field: ScalarField, points: np.ndarray, var: int, step: float = 1e-5
) -> np.ndarray:
    """Return a central finite-difference Wirtinger derivative.

    ``d/dz = (d/dx - i d/dy) / 2`` and ``d/dconj(z) = (d/dx + i d/dy) / 2``.
    Used as the oracle that :meth:`ScalarField.derivative` is checked
    against.

    :param field: The field to differentiate.
    :param points: Complex array of shape ``(P, m)``.
    :param var: The variable index as in :meth:`ScalarField.derivative`.
    :param step: The finite-difference step.

    """
    dim = field.chart.dim
    axis = var % dim
    shift = np.zeros(dim, complex)
    shift[axis] = step
    d_x = (field.evaluate(points + shift) - field.evaluate(points - shift)) / (
        2 * step
    )
    d_y = (
        field.evaluate(points + 1j * shift)
        - field.evaluate(points - 1j * shift)
    ) / (2 * step)
    sign = -1 if var < dim else 1
    return 0.5 * (d_x + sign * 1j * d_y)
