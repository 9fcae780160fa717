"""Quaternions in the ``a + b j`` split.

A :class:`Quaternion` stores two complex components.  The components
may be numbers, ``numpy`` arrays (a quaternion per sample point) or
:class:`~qabel.forms.fields.ScalarField` objects, since the algebra
only needs ``+``, ``*``, ``/`` and ``conjugate()``.

The multiplication rule follows from ``j z = conj(z) j``::

    (a + b j)(c + d j) = (a c - b conj(d)) + (a d + b conj(c)) j

"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError

if TYPE_CHECKING:
    from typing import Any

__all__ = (
    'PolarDecomposition',
    'Quaternion',
    'embed',
    'inverse',
    'multiply',
    'polar',
)


def _conj(value: Any) -> Any:
    return value.conjugate()


def _is_numeric(value: Any) -> bool:
    return isinstance(value, (Number, np.ndarray))


@dataclass(frozen=True)
class Quaternion:
    """Quaternion(a, b) meaning ``a + b j``.

    :param a: The complex part.
    :param b: The ``j`` part.

    """

    a: Any
    b: Any = 0j

    @classmethod
    def one(cls) -> Quaternion:
        return cls(1 + 0j, 0j)

    @classmethod
    def j(cls) -> Quaternion:  # noqa: WPS111
        return cls(0j, 1 + 0j)

    @property
    def norm2(self) -> Any:
        """``|a|^2 + |b|^2``."""
        return self.a * _conj(self.a) + self.b * _conj(self.b)

    def conjugate(self) -> Quaternion:
        """Return ``conj(a) - b j``."""
        return Quaternion(_conj(self.a), -self.b)

    def scale(self, factor: Any) -> Quaternion:
        """Multiply both components by a real ``factor``.

        :param factor: A real number, array or real-valued field.

        """
        return Quaternion(self.a * factor, self.b * factor)

    def __mul__(self, other: Quaternion) -> Quaternion:
        return multiply(self, other)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a + other.a, self.b + other.b)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a - other.a, self.b - other.b)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.a, -self.b)


class PolarDecomposition(NamedTuple):
    """PolarDecomposition(r: positive scale, unit: Quaternion on S^3)."""

    r: Any
    unit: Quaternion


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Return the product ``p q``.

    >>> multiply(Quaternion(0j, 1), Quaternion(1j, 0j))
    Quaternion(a=0j, b=-1j)

    :param p: The left factor.
    :param q: The right factor.

    """
    return Quaternion(
        p.a * q.a - p.b * _conj(q.b), p.a * q.b + p.b * _conj(q.a),
    )


def inverse(q: Quaternion) -> Quaternion:
    """Return ``conj(q) / |q|^2``.

    :param q: A nonzero quaternion.

    :raises DomainError: If ``q`` is zero (numeric components only;
        field components are checked when evaluated).

    """
    norm2 = q.norm2
    if _is_numeric(norm2) and np.any(np.real(norm2) <= 0):
        raise DomainError('The quaternion must be nonzero!')
    conjugate = q.conjugate()
    return Quaternion(conjugate.a / norm2, conjugate.b / norm2)


def polar(q: Quaternion) -> PolarDecomposition:
    """Split ``q = r * unit`` with ``r > 0`` and ``unit`` on ``S^3``.

    :param q: A nonzero quaternion.

    :raises DomainError: If ``q`` is zero.

    """
    norm2 = q.norm2
    if _is_numeric(norm2):
        if np.any(np.real(norm2) <= 0):
            raise DomainError('The quaternion must be nonzero!')
        r = np.sqrt(np.real(norm2))
    else:
        r = norm2.sqrt()
    return PolarDecomposition(r=r, unit=Quaternion(q.a / r, q.b / r))


def embed(q: Quaternion) -> np.ndarray:
    """Return the complex matrix ``[[a, b], [-conj(b), conj(a)]]``.

    Array components give an array of shape ``(2, 2, ...)``.

    :param q: The quaternion to embed.

    """
    a = np.asarray(q.a, dtype=complex)
    b = np.asarray(q.b, dtype=complex)
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])
