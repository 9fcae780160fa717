"""Quaternion-valued forms ``A + B j``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from qabel.exceptions import DomainError
from qabel.forms.kform import KForm
from qabel.forms.kform import MatForm

if TYPE_CHECKING:
    from typing import Union

    from qabel.algebra.quaternion import Quaternion
    from qabel.forms.fields import Chart
    from qabel.forms.fields import ScalarField

__all__ = ('QForm',)


@dataclass(frozen=True)
class QForm:
    """QForm(A: KForm, B: KForm) meaning ``A + B j``."""

    A: KForm  # noqa: N815
    B: KForm  # noqa: N815

    def __post_init__(self) -> None:
        if self.A.chart != self.B.chart or self.A.degree != self.B.degree:
            raise DomainError(
                'Both parts of a quaternion form must share degree and chart!'
            )

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> QForm:
        """Return the quaternion 0-form of a quaternion of fields.

        :param q: A :class:`Quaternion` with :class:`ScalarField` parts.

        """
        a: ScalarField = q.a
        b: ScalarField = q.b
        return cls(KForm.scalar(a), KForm.scalar(b))

    @property
    def chart(self) -> Chart:
        return self.A.chart

    @property
    def degree(self) -> int:
        return self.A.degree

    def __add__(self, other: QForm) -> QForm:
        return QForm(self.A + other.A, self.B + other.B)

    def __sub__(self, other: QForm) -> QForm:
        return QForm(self.A - other.A, self.B - other.B)

    def __neg__(self) -> QForm:
        return QForm(-self.A, -self.B)

    def __mul__(self, factor: Union[ScalarField, complex, float]) -> QForm:
        return QForm(self.A * factor, self.B * factor)

    def qwedge(self, other: QForm) -> QForm:
        """Return ``self ^ other`` by the rule ``j z = conj(z) j``.

        ``(A + B j) ^ (C + D j) = (A^C - B^conj(D)) + (A^D + B^conj(C)) j``

        :param other: A quaternion form on the same chart.

        """
        a, b, c, e = self.A, self.B, other.A, other.B
        return QForm(
            a.wedge(c) - b.wedge(e.conj()), a.wedge(e) + b.wedge(c.conj())
        )

    wedge = qwedge

    def d(self) -> QForm:  # noqa: WPS111
        return QForm(self.A.d(), self.B.d())

    def to_mat(self) -> MatForm:
        """Return ``[[A, B], [-conj(B), conj(A)]]``."""
        return MatForm([[self.A, self.B], [-self.B.conj(), self.A.conj()]])

    def trace(self) -> KForm:
        """Return the trace of :meth:`to_mat`, ``A + conj(A)``."""
        return self.A + self.A.conj()
