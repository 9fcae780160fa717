"""Truncated multivariate Taylor arithmetic.

A :class:`Jet` carries the Taylor coefficients up to total degree
``order`` of a function of ``nvars`` independent variables, at ``P``
points at once.  On a chart of complex dimension ``m`` the variables
are ``z_1..z_m, conj(z_1)..conj(z_m)``, so a coefficient of the first
order is a Wirtinger derivative.

Coefficients are plain Taylor coefficients (no factorials) stored in an
array of shape ``(N, P)``.  Multi-indices are ordered by total degree,
so the jet of a lower order is a prefix of the array.

Generalizes the nested dual numbers of forward-mode AD: a jet of order
``K`` gives every mixed partial up to order ``K`` exactly.

"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

if TYPE_CHECKING:
    from typing import Any
    from typing import Callable
    from typing import Dict
    from typing import List
    from typing import Sequence
    from typing import Tuple
    from typing import Union

    from qabel.qa_typing import MultiIndex

    Operand = Union['Jet', complex, float, np.ndarray]

__all__ = ('Jet', 'JetTables', 'jet_tables')


class JetTables:
    """Index bookkeeping shared by all jets of one ``(nvars, order)``.

    :param nvars: The number of independent variables, even.
    :param order: The truncation order.

    :ivar indices: The multi-indices, ordered by total degree.
    :ivar position: The inverse of ``indices``.
    :ivar sizes: ``sizes[k]`` is the number of multi-indices of degree
        at most ``k``.

    """

    def __init__(self, nvars: int, order: int) -> None:
        self.nvars = nvars
        self.order = order
        indices: List[MultiIndex] = []
        for degree in range(order + 1):
            for combo in combinations_with_replacement(range(nvars), degree):
                counts = [0] * nvars
                for var in combo:
                    counts[var] += 1
                indices.append(tuple(counts))
        self.indices: Tuple[MultiIndex, ...] = tuple(indices)
        self.position: Dict[MultiIndex, int] = {
            index: number for number, index in enumerate(self.indices)
        }
        self.sizes: Tuple[int, ...] = tuple(
            math.comb(nvars + degree, degree) for degree in range(order + 1)
        )
        self._fill_product()
        self._fill_conjugation()

    @property
    def size(self) -> int:
        return len(self.indices)

    def _fill_product(self) -> None:
        left: List[int] = []
        right: List[int] = []
        target: List[int] = []
        for i, alpha in enumerate(self.indices):
            rest = self.order - sum(alpha)
            for j in range(self.sizes[rest]):
                beta = self.indices[j]
                left.append(i)
                right.append(j)
                target.append(
                    self.position[tuple(x + y for x, y in zip(alpha, beta))]
                )
        self.left = np.array(left, dtype=np.intp)
        self.right = np.array(right, dtype=np.intp)
        self.reduce = sparse.csr_matrix(
            (np.ones(len(target)), (target, np.arange(len(target)))),
            shape=(self.size, len(target)),
        )

    def _fill_conjugation(self) -> None:
        half = self.nvars // 2
        self.swap = np.array(
            [
                self.position[index[half:] + index[:half]]
                for index in self.indices
            ],
            dtype=np.intp,
        )

    @lru_cache(maxsize=None)  # noqa: B019
    def derivative(self, var: int) -> Tuple[np.ndarray, np.ndarray]:
        """Return ``(sources, factors)`` for ``d/d(variable var)``.

        The coefficient of the derivative at ``beta`` is
        ``(beta[var] + 1) * c[beta + e_var]``.

        :param var: The variable index.

        """
        sources: List[int] = []
        factors: List[float] = []
        for beta in self.indices[: self.sizes[self.order - 1]]:
            shifted = list(beta)
            shifted[var] += 1
            sources.append(self.position[tuple(shifted)])
            factors.append(beta[var] + 1.0)
        return np.array(sources, dtype=np.intp), np.array(factors)


@lru_cache(maxsize=None)
def jet_tables(nvars: int, order: int) -> JetTables:
    """Return the cached :class:`JetTables` of ``(nvars, order)``.

    :param nvars: The number of independent variables.
    :param order: The truncation order.

    """
    return JetTables(nvars, order)


class Jet:
    """Truncated Taylor expansion at ``P`` points.

    :param coeffs: Complex array of shape ``(N, P)``.
    :param nvars: The number of independent variables.
    :param order: The truncation order, ``N`` must match it.

    """

    __slots__ = ('coeffs', 'nvars', 'order')

    def __init__(self, coeffs: np.ndarray, nvars: int, order: int) -> None:
        self.coeffs = coeffs
        self.nvars = nvars
        self.order = order

    @classmethod
    def constant(
        cls, value: Any, nvars: int, order: int, npoints: int
    ) -> Jet:
        """Return the jet of a constant (or a point-wise value).

        :param value: A scalar or an array of shape ``(P,)``.
        :param nvars: The number of independent variables.
        :param order: The truncation order.
        :param npoints: The number of points ``P``.

        """
        coeffs = np.zeros((jet_tables(nvars, order).size, npoints), complex)
        coeffs[0] = value
        return cls(coeffs, nvars, order)

    @classmethod
    def variable(
        cls, value: np.ndarray, var: int, nvars: int, order: int
    ) -> Jet:
        """Return the jet of the independent variable ``var``.

        :param value: The values of the variable, shape ``(P,)``.
        :param var: The variable index.
        :param nvars: The number of independent variables.
        :param order: The truncation order.

        """
        jet = cls.constant(value, nvars, order, len(value))
        if order > 0:
            jet.coeffs[1 + var] = 1.0
        return jet

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    @property
    def tables(self) -> JetTables:
        return jet_tables(self.nvars, self.order)

    def _like(self, coeffs: np.ndarray) -> Jet:
        return Jet(coeffs, self.nvars, self.order)

    def _lift(self, other: Operand) -> Jet:
        if isinstance(other, Jet):
            return other
        npoints = self.coeffs.shape[1]
        return Jet.constant(other, self.nvars, self.order, npoints)

    def __add__(self, other: Operand) -> Jet:
        if isinstance(other, Jet):
            return self._like(self.coeffs + other.coeffs)
        coeffs = self.coeffs.copy()
        coeffs[0] += other
        return self._like(coeffs)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return self._like(-self.coeffs)

    def __sub__(self, other: Operand) -> Jet:
        return self + (-other)

    def __rsub__(self, other: Operand) -> Jet:
        return (-self) + other

    def __mul__(self, other: Operand) -> Jet:
        if not isinstance(other, Jet):
            return self._like(self.coeffs * other)
        if self.order == 0:
            return self._like(self.coeffs * other.coeffs)
        tables = self.tables
        pairs = self.coeffs[tables.left] * other.coeffs[tables.right]
        return self._like(np.asarray(tables.reduce @ pairs))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> Jet:
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self._like(self.coeffs / other)

    def __rtruediv__(self, other: Operand) -> Jet:
        return self.reciprocal() * other

    def __pow__(self, exponent: float) -> Jet:
        if isinstance(exponent, int) and exponent >= 0:
            result = self._lift(1.0)
            for _ in range(exponent):
                result = result * self
            return result
        return self.power(exponent)

    def conj(self) -> Jet:
        """Return the jet of the complex conjugate function."""
        return self._like(self.coeffs[self.tables.swap].conj())

    def real(self) -> Jet:
        return (self + self.conj()) * 0.5

    def derivative(self, var: int) -> Jet:
        """Return the jet of ``d/d(variable var)``, one order lower.

        :param var: The variable index.

        """
        if self.order == 0:
            raise ValueError('A jet of order 0 has no derivatives!')
        sources, factors = self.tables.derivative(var)
        coeffs = self.coeffs[sources] * factors[:, np.newaxis]
        return Jet(coeffs, self.nvars, self.order - 1)

    def compose(self, derivatives: Sequence[np.ndarray]) -> Jet:
        """Return ``f(self)`` for a holomorphic ``f``.

        Horner evaluation of ``sum f^(k)(x0) / k! * h^k`` with the
        nilpotent part ``h = self - x0``.

        :param derivatives: ``f^(k)(x0)`` for ``k = 0..order``, each of
            shape ``(P,)``.

        """
        nilpotent = self._like(self.coeffs.copy())
        nilpotent.coeffs[0] = 0
        top = derivatives[self.order] / math.factorial(self.order)
        result = self._lift(top)
        for k in range(self.order - 1, -1, -1):
            result = result * nilpotent + derivatives[k] / math.factorial(k)
        return result

    def apply(
        self, derivative: Callable[[np.ndarray, int], np.ndarray]
    ) -> Jet:
        """Return ``f(self)`` given ``derivative(x0, k) = f^(k)(x0)``.

        :param derivative: The derivative generator of ``f``.

        """
        x0 = self.value
        return self.compose([derivative(x0, k) for k in range(self.order + 1)])

    def exp(self) -> Jet:
        return self.apply(lambda x0, k: np.exp(x0))

    def log(self) -> Jet:
        def derivative(x0: np.ndarray, k: int) -> np.ndarray:
            if k == 0:
                return np.log(x0)
            return (-1) ** (k - 1) * math.factorial(k - 1) / x0 ** k

        return self.apply(derivative)

    def reciprocal(self) -> Jet:
        return self.apply(
            lambda x0, k: (-1) ** k * math.factorial(k) / x0 ** (k + 1)
        )

    def power(self, exponent: float) -> Jet:
        """Return ``self ** exponent`` on the principal branch.

        :param exponent: A real exponent.

        """

        def derivative(x0: np.ndarray, k: int) -> np.ndarray:
            falling = math.prod(exponent - i for i in range(k))
            return falling * np.power(x0, exponent - k)

        return self.apply(derivative)

    def sqrt(self) -> Jet:
        return self.power(0.5)

    def sin(self) -> Jet:
        cycle = (np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))
        return self.apply(lambda x0, k: cycle[k % 4](x0))

    def cos(self) -> Jet:
        cycle = (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)
        return self.apply(lambda x0, k: cycle[k % 4](x0))
