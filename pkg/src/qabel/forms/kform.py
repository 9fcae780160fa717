"""Complex- and matrix-valued differential forms on a chart.

Covector ``i`` of a chart of dimension ``m`` is ``dz_(i+1)`` for
``i < m`` and ``dconj(z)_(i-m+1)`` otherwise.  A :class:`KForm` maps
strictly increasing multi-indices to :class:`ScalarField` coefficients;
an index written in any order is sorted at insertion and the
permutation sign is folded into its coefficient.

"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError
from qabel.forms.fields import evaluate_fields
from qabel.forms.fields import ScalarField

if TYPE_CHECKING:
    from typing import Any
    from typing import Dict
    from typing import Iterator
    from typing import List
    from typing import Mapping
    from typing import Optional
    from typing import Sequence
    from typing import Tuple
    from typing import Union

    from qabel.forms.fields import Chart
    from qabel.qa_typing import MultiIndex

    Scalar = Union[ScalarField, complex, float]

__all__ = (
    'KForm',
    'MatForm',
    'basis',
    'conj',
    'd',
    'trace',
    'type_project',
    'wedge',
)


@lru_cache(maxsize=None)
def _canonical(index: MultiIndex) -> Optional[Tuple[MultiIndex, int]]:
    """Return the sorted index and the permutation sign.

    ``None`` means a repeated covector, i.e. a zero product.

    """
    if len(set(index)) != len(index):
        return None
    inversions = sum(
        1
        for i in range(len(index))
        for j in range(i + 1, len(index))
        if index[i] > index[j]
    )
    return tuple(sorted(index)), (-1 if inversions % 2 else 1)


@lru_cache(maxsize=None)
def basis(nvars: int, degree: int) -> Tuple[MultiIndex, ...]:
    """Return the increasing multi-indices of ``degree`` covectors.

    >>> basis(4, 2)[:3]
    ((0, 1), (0, 2), (0, 3))

    :param nvars: The number of covectors, ``2m``.
    :param degree: The form degree.

    """
    return tuple(combinations(range(nvars), degree))


def _as_field(chart: Chart, value: Scalar) -> ScalarField:
    if isinstance(value, ScalarField):
        return value
    return ScalarField.constant(chart, value)


class KForm:
    """Differential form of one degree on a chart.

    :param chart: The chart.
    :param degree: The degree ``k``.
    :param terms: Mapping from multi-index to coefficient.  Indices in
        any order are allowed; they are normalized with their sign.

    """

    def __init__(
        self,
        chart: Chart,
        degree: int,
        terms: Optional[Mapping[MultiIndex, Scalar]] = None,
    ) -> None:
        self.chart = chart
        self.degree = degree
        table: Dict[MultiIndex, ScalarField] = {}
        for index, coefficient in (terms or {}).items():
            if len(index) != degree or any(
                not 0 <= i < chart.nvars for i in index
            ):
                raise DomainError(
                    f'The index {index} is not a degree {degree} index '
                    f'on a chart of dimension {chart.dim}!'
                )
            normalized = _canonical(tuple(index))
            if normalized is None:
                continue
            key, sign = normalized
            term = _as_field(chart, coefficient) * sign
            if key in table:
                term = table[key] + term
            table[key] = term
        self._terms: Dict[MultiIndex, ScalarField] = {
            key: term for key, term in table.items() if not term.is_zero
        }

    def __repr__(self) -> str:
        names = [
            '^'.join(f'd{self.chart.labels[i]}' for i in index) or '1'
            for index in self._terms
        ]
        return f'KForm(degree={self.degree}, terms=[{", ".join(names)}])'

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> KForm:
        return cls(chart, degree)

    @classmethod
    def scalar(cls, value: ScalarField) -> KForm:
        """Return the 0-form with coefficient ``value``.

        :param value: The coefficient field.

        """
        return cls(value.chart, 0, {(): value})

    @classmethod
    def covector(cls, chart: Chart, index: int) -> KForm:
        """Return the 1-form ``dz`` or ``dconj(z)`` number ``index``.

        :param chart: The chart.
        :param index: The covector index.

        """
        return cls(chart, 1, {(index,): 1.0})

    @property
    def terms(self) -> Mapping[MultiIndex, ScalarField]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, index: MultiIndex) -> ScalarField:
        """Return the coefficient of the increasing ``index``.

        :param index: An increasing multi-index.

        """
        return self._terms.get(index, ScalarField.constant(self.chart, 0))

    def _check(self, other: KForm) -> None:
        if other.chart != self.chart:
            raise DomainError('The forms must live on the same chart!')

    def __add__(self, other: KForm) -> KForm:
        self._check(other)
        if other.degree != self.degree:
            raise DomainError('Only forms of equal degree can be added!')
        terms: Dict[MultiIndex, ScalarField] = dict(self._terms)
        for index, term in other.terms.items():
            terms[index] = terms[index] + term if index in terms else term
        return KForm(self.chart, self.degree, terms)

    def __neg__(self) -> KForm:
        return self * -1.0

    def __sub__(self, other: KForm) -> KForm:
        return self + (-other)

    def __mul__(self, factor: Scalar) -> KForm:
        return KForm(
            self.chart,
            self.degree,
            {index: term * factor for index, term in self._terms.items()},
        )

    __rmul__ = __mul__

    def wedge(self, other: KForm) -> KForm:
        """Return ``self ^ other``.

        :param other: A form on the same chart.

        """
        self._check(other)
        degree = self.degree + other.degree
        if degree > self.chart.nvars:
            return KForm(self.chart, degree)
        terms: Dict[MultiIndex, ScalarField] = {}
        for left, f in self._terms.items():
            for right, g in other.terms.items():
                normalized = _canonical(left + right)
                if normalized is None:
                    continue
                key, sign = normalized
                term = f * g * sign
                terms[key] = terms[key] + term if key in terms else term
        return KForm(self.chart, degree, terms)

    def _differential(self, variables: Sequence[int]) -> KForm:
        terms: Dict[MultiIndex, ScalarField] = {}
        for index, f in self._terms.items():
            for var in variables:
                if var in index:
                    continue
                key, sign = _canonical((var,) + index)  # type: ignore
                term = f.derivative(var) * sign
                if term.is_zero:
                    continue
                terms[key] = terms[key] + term if key in terms else term
        return KForm(self.chart, self.degree + 1, terms)

    def d(self) -> KForm:  # noqa: WPS111
        """Return the exterior derivative.

        A top-degree form has the empty form of degree ``k + 1`` as its
        derivative.

        """
        return self._differential(range(self.chart.nvars))

    def d_prime(self) -> KForm:
        """Return the ``(1, 0)`` part of ``d``."""
        return self._differential(range(self.chart.dim))

    def d_double_prime(self) -> KForm:
        """Return the ``(0, 1)`` part of ``d``."""
        return self._differential(range(self.chart.dim, self.chart.nvars))

    def hodge_type(self, index: MultiIndex) -> Tuple[int, int]:
        holomorphic = sum(1 for i in index if i < self.chart.dim)
        return holomorphic, len(index) - holomorphic

    def type_project(self, p: int, q: int) -> KForm:  # noqa: WPS111
        """Keep the terms of type ``(p, q)``.

        :param p: The number of ``dz`` covectors.
        :param q: The number of ``dconj(z)`` covectors.

        :raises DomainError: If ``p + q`` is not the degree.

        """
        if p + q != self.degree:
            raise DomainError(
                f'The type ({p}, {q}) does not match degree {self.degree}!'
            )
        return KForm(
            self.chart,
            self.degree,
            {
                index: term
                for index, term in self._terms.items()
                if self.hodge_type(index) == (p, q)
            },
        )

    def types(self) -> Iterator[Tuple[int, int]]:
        """Yield the types ``(p, q)`` with ``p + q = k`` in order of ``p``."""
        for p in range(self.degree, -1, -1):
            q = self.degree - p
            if p <= self.chart.dim and q <= self.chart.dim:
                yield p, q

    def conj(self) -> KForm:
        """Swap ``dz <-> dconj(z)`` and conjugate the coefficients."""
        dim = self.chart.dim
        return KForm(
            self.chart,
            self.degree,
            {
                tuple((i + dim) % (2 * dim) for i in index): term.conjugate()
                for index, term in self._terms.items()
            },
        )

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Return the coefficients at ``points`` in :func:`basis` order.

        :param points: Complex array of shape ``(P, m)``.

        :returns: Complex array of shape ``(P, len(basis))``.

        """
        points = np.atleast_2d(np.asarray(points, complex))
        indices = basis(self.chart.nvars, self.degree)
        values = np.zeros((points.shape[0], len(indices)), complex)
        present = [
            i for i, index in enumerate(indices) if index in self._terms
        ]
        fields = [self._terms[indices[i]] for i in present]
        if fields:
            values[:, present] = evaluate_fields(fields, points).T
        return values


class MatForm:
    """Square matrix of forms of a common degree.

    :param entries: Rows of :class:`KForm`.

    """

    def __init__(self, entries: Sequence[Sequence[KForm]]) -> None:
        self.entries: Tuple[Tuple[KForm, ...], ...] = tuple(
            tuple(row) for row in entries
        )
        self.size = len(self.entries)
        if any(len(row) != self.size for row in self.entries):
            raise DomainError('The matrix form must be square!')
        first = self.entries[0][0]
        self.chart: Chart = first.chart
        self.degree: int = first.degree
        for row in self.entries:
            for entry in row:
                if entry.degree != self.degree or entry.chart != self.chart:
                    raise DomainError(
                        'The entries of a matrix form must share degree '
                        'and chart!'
                    )

    def __getitem__(self, position: Tuple[int, int]) -> KForm:
        row, column = position
        return self.entries[row][column]

    @classmethod
    def zeros(cls, chart: Chart, degree: int, size: int = 2) -> MatForm:
        return cls([[KForm(chart, degree)] * size for _ in range(size)])

    @classmethod
    def from_fields(
        cls, rows: Sequence[Sequence[Scalar]], chart: Chart
    ) -> MatForm:
        """Return the matrix 0-form with the given coefficients.

        :param rows: Rows of fields or numbers.
        :param chart: The chart, used for numbers.

        """
        return cls(
            [[KForm(chart, 0, {(): value}) for value in row] for row in rows]
        )

    def _map(self, transform: Any) -> MatForm:
        return MatForm(
            [[transform(entry) for entry in row] for row in self.entries]
        )

    def _zip(self, other: MatForm, transform: Any) -> MatForm:
        return MatForm(
            [
                [transform(x, y) for x, y in zip(row, other_row)]
                for row, other_row in zip(self.entries, other.entries)
            ]
        )

    def __add__(self, other: MatForm) -> MatForm:
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other: MatForm) -> MatForm:
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self) -> MatForm:
        return self._map(lambda entry: -entry)

    def __mul__(self, factor: Scalar) -> MatForm:
        return self._map(lambda entry: entry * factor)

    __rmul__ = __mul__

    def wedge(self, other: MatForm) -> MatForm:
        """Return the matrix product with entries wedged.

        :param other: A matrix form of the same size and chart.

        """
        if other.size != self.size:
            raise DomainError('The matrix forms must have equal size!')
        degree = self.degree + other.degree
        rows: List[List[KForm]] = []
        for i in range(self.size):
            row: List[KForm] = []
            for k in range(self.size):
                entry = KForm(self.chart, degree)
                for j in range(self.size):
                    entry = entry + self[i, j].wedge(other[j, k])
                row.append(entry)
            rows.append(row)
        return MatForm(rows)

    def d(self) -> MatForm:  # noqa: WPS111
        return self._map(KForm.d)

    def conj(self) -> MatForm:
        return self._map(KForm.conj)

    def transpose(self) -> MatForm:
        return MatForm(list(zip(*self.entries)))

    def type_project(self, p: int, q: int) -> MatForm:  # noqa: WPS111
        return self._map(lambda entry: entry.type_project(p, q))

    def trace(self) -> KForm:
        result = KForm(self.chart, self.degree)
        for i in range(self.size):
            result = result + self[i, i]
        return result

    def inverse(self) -> MatForm:
        """Return the inverse of a 2x2 matrix 0-form.

        :raises DomainError: If the matrix is not a 2x2 0-form.

        """
        if self.degree != 0 or self.size != 2:
            raise DomainError('Only 2x2 matrix 0-forms can be inverted!')
        a, b = self[0, 0].coefficient(()), self[0, 1].coefficient(())
        c, e = self[1, 0].coefficient(()), self[1, 1].coefficient(())
        inverse_det = (a * e - b * c).reciprocal().memoized()
        return MatForm.from_fields(
            [
                [e * inverse_det, -b * inverse_det],
                [-c * inverse_det, a * inverse_det],
            ],
            self.chart,
        )

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Return shape ``(P, size, size, len(basis))`` coefficients.

        :param points: Complex array of shape ``(P, m)``.

        """
        return np.stack(
            [
                np.stack([entry.evaluate(points) for entry in row], axis=1)
                for row in self.entries
            ],
            axis=1,
        )


def wedge(x: Any, y: Any) -> Any:
    """Return ``x ^ y`` for two :class:`KForm` or two :class:`MatForm`."""
    return x.wedge(y)


def d(x: Any) -> Any:  # noqa: WPS111
    """Return ``d x`` for a scalar, matrix or quaternion form."""
    return x.d()


def type_project(x: Any, p: int, q: int) -> Any:  # noqa: WPS111
    """Return the ``(p, q)`` part of ``x``."""
    return x.type_project(p, q)


def conj(x: Any) -> Any:
    return x.conj()


def trace(x: MatForm) -> KForm:
    return x.trace()
