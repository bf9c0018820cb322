import random
import unittest
from fractions import Fraction

from bondcat.errors import DimensionMismatch, ShapeMismatch
from bondcat.linsys import LinearSystem
from bondcat.scalar import DenseMatrix, Field, solve_affine, solve_sparse


class FieldTests(unittest.TestCase):
    def test_parse_labels(self) -> None:
        self.assertEqual(Field.parse("rational"), Field(0))
        self.assertEqual(Field.parse("GF:5"), Field(5))
        self.assertEqual(Field.parse(None).label, "rational")
        self.assertEqual(Field(7).label, "gf:7")

    def test_rejects_composite_modulus_and_unknown_names(self) -> None:
        with self.assertRaises(ValueError):
            Field(6)
        with self.assertRaises(ValueError):
            Field.parse("reals")

    def test_coerce_is_exact(self) -> None:
        rational = Field(0)
        self.assertEqual(rational.coerce("-3/4"), Fraction(-3, 4))
        self.assertEqual(Field(5).coerce(-1), 4)
        self.assertEqual(Field(5).coerce(Fraction(1, 2)), 3)
        self.assertEqual(Field(5).coerce("3 mod 5"), 3)
        with self.assertRaises(ValueError):
            rational.coerce(0.5)
        with self.assertRaises(ValueError):
            rational.coerce(True)
        with self.assertRaises(ValueError):
            Field(5).coerce("3 mod 7")

    def test_format_keeps_fractions_as_strings(self) -> None:
        self.assertEqual(Field(0).format(Fraction(2, 1)), 2)
        self.assertEqual(Field(0).format(Fraction(-1, 3)), "-1/3")

    def test_inverse_of_zero(self) -> None:
        with self.assertRaises(ZeroDivisionError):
            Field(3).inv(0)


class DenseMatrixTests(unittest.TestCase):
    def setUp(self) -> None:
        self.field = Field(0)

    def test_product_and_identity(self) -> None:
        a = DenseMatrix.from_rows(self.field, [[1, 2], [3, 4]])
        self.assertEqual(a @ DenseMatrix.identity(self.field, 2), a)
        self.assertEqual((a @ a).formatted_rows(), [[7, 10], [15, 22]])

    def test_zero_width_matrices(self) -> None:
        empty = DenseMatrix.zeros(self.field, 2, 0)
        product = empty @ DenseMatrix.zeros(self.field, 0, 3)
        self.assertEqual(product.shape, (2, 3))
        self.assertTrue(product.is_zero())

    def test_shape_errors(self) -> None:
        with self.assertRaises(ShapeMismatch):
            DenseMatrix.from_rows(self.field, [[1, 2], [3]])
        with self.assertRaises(DimensionMismatch):
            DenseMatrix.identity(self.field, 2) @ DenseMatrix.identity(self.field, 3)
        with self.assertRaises(DimensionMismatch):
            DenseMatrix.identity(self.field, 2) + DenseMatrix.identity(self.field, 3)

    def test_prime_field_reduces(self) -> None:
        gf3 = Field(3)
        a = DenseMatrix.from_rows(gf3, [[2, 2]])
        self.assertEqual((a + a).formatted_rows(), [[1, 1]])
        self.assertEqual((-a).formatted_rows(), [[1, 1]])

    def test_matrices_are_read_only(self) -> None:
        a = DenseMatrix.identity(self.field, 2)
        with self.assertRaises(ValueError):
            a.data[0, 0] = 5


class SolverTests(unittest.TestCase):
    def test_affine_solution(self) -> None:
        field = Field(0)
        solution = solve_affine([([1, 1], 3), ([1, -1], 1)], 2, field)
        self.assertEqual(solution, [2, 1])

    def test_infeasible_returns_none(self) -> None:
        field = Field(0)
        self.assertIsNone(solve_affine([([1, 1], 1), ([2, 2], 3)], 2, field))

    def test_free_unknowns_follow_callback(self) -> None:
        field = Field(5)
        solution = solve_sparse([({0: 1, 1: 1}, 0)], 2, field, free_value=lambda var: 2)
        self.assertEqual(solution, [3, 2])

    def test_coefficient_count_is_checked(self) -> None:
        with self.assertRaises(DimensionMismatch):
            solve_affine([([1], 0)], 2, Field(0))

    def test_linear_system_matrix_equation(self) -> None:
        # A @ X = B with A invertible
        field = Field(0)
        system = LinearSystem(field)
        X = system.unknowns(2, 1)
        A = DenseMatrix.from_rows(field, [[1, 1], [0, 2]])
        B = DenseMatrix.from_rows(field, [[3], [4]])
        system.add_left_product("eq", A, X)
        system.add_constant("eq", B, -1)
        solution = system.solve()
        self.assertIsNotNone(solution)
        self.assertEqual(system.read(solution, X).formatted_rows(), [[1], [2]])

    def test_random_solution_still_solves(self) -> None:
        field = Field(7)
        system = LinearSystem(field)
        X = system.unknowns(1, 3)
        ones = DenseMatrix.from_rows(field, [[1], [1], [1]])
        system.add_right_product("eq", X, ones)
        system.add_constant("eq", DenseMatrix.scalar(field, 1), -1)
        solution = system.solve_random(random.Random(4))
        total = (system.read(solution, X) @ ones).entry(0, 0)
        self.assertEqual(total, 1)


if __name__ == "__main__":
    unittest.main()
