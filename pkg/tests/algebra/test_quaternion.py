from __future__ import annotations

import numpy as np
import pytest  # type: ignore

from qabel.algebra.quaternion import embed
from qabel.algebra.quaternion import inverse
from qabel.algebra.quaternion import multiply
from qabel.algebra.quaternion import polar
from qabel.algebra.quaternion import Quaternion
from qabel.exceptions import DomainError


def _shifted(q: Quaternion) -> Quaternion:
    return Quaternion(np.roll(q.a, 1), np.roll(q.b, 1))


class TestQuaternion:
    def test_j_squared(self) -> None:
        square = Quaternion.j() * Quaternion.j()
        assert (-1 + 0j, 0j) == (square.a, square.b)

    def test_j_twists_complex_numbers(self) -> None:
        z = Quaternion(2 + 3j)
        assert Quaternion.j() * z == Quaternion(z.a.conjugate()) * (
            Quaternion.j()
        )

    def test_multiply_is_not_commutative(self) -> None:
        i = Quaternion(1j)
        j = Quaternion.j()
        assert multiply(i, j) == -multiply(j, i)

    def test_embedding_is_multiplicative(
        self, quaternions: Quaternion
    ) -> None:
        other = _shifted(quaternions)
        left = embed(quaternions * other)
        right = np.einsum('ikn,kjn->ijn', embed(quaternions), embed(other))
        assert np.allclose(left, right, atol=1e-12)

    def test_determinant_is_norm(self, quaternions: Quaternion) -> None:
        matrix = embed(quaternions)
        det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
        assert np.allclose(det, quaternions.norm2, atol=1e-12)

    def test_inverse(self, quaternions: Quaternion) -> None:
        product = quaternions * inverse(quaternions)
        assert np.allclose(product.a, 1, atol=1e-12)
        assert np.allclose(product.b, 0, atol=1e-12)

    def test_inverse_of_zero(self) -> None:
        with pytest.raises(DomainError, match='must be nonzero') as e:
            inverse(Quaternion(0j, 0j))
        assert 'The quaternion must be nonzero!' == str(e.value)

    def test_conjugate_reverses_products(
        self, quaternions: Quaternion
    ) -> None:
        other = _shifted(quaternions)
        left = (quaternions * other).conjugate()
        right = other.conjugate() * quaternions.conjugate()
        assert np.allclose(left.a, right.a, atol=1e-12)
        assert np.allclose(left.b, right.b, atol=1e-12)

    def test_multiplication_by_j_is_conjugate_linear(
        self, quaternions: Quaternion
    ) -> None:
        z = 0.3 - 1.2j
        left = Quaternion.j() * (Quaternion(z) * quaternions)
        right = Quaternion(z.conjugate()) * (Quaternion.j() * quaternions)
        assert np.allclose(left.a, right.a, atol=1e-12)
        assert np.allclose(left.b, right.b, atol=1e-12)


class TestPolar:
    def test_unit_part_on_sphere(self, quaternions: Quaternion) -> None:
        r, unit = polar(quaternions)
        assert np.all(r > 0)
        assert np.allclose(unit.norm2, 1, atol=1e-12)

    def test_recombines(self, quaternions: Quaternion) -> None:
        r, unit = polar(quaternions)
        restored = unit.scale(r)
        assert np.allclose(restored.a, quaternions.a, atol=1e-12)
        assert np.allclose(restored.b, quaternions.b, atol=1e-12)

    def test_zero(self) -> None:
        with pytest.raises(DomainError, match='must be nonzero') as e:
            polar(Quaternion(np.zeros(3, complex), np.zeros(3, complex)))
        assert 'The quaternion must be nonzero!' == str(e.value)
