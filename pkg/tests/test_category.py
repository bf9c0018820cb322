import unittest

from bondcat.category import (
    BondMorphism,
    BondObject,
    add,
    compose,
    direct_sum,
    direct_sum_morphisms,
    identity,
    scale,
    shift_morphism,
    shift_object,
    subtract,
    validate_morphism,
    validate_object,
    zero_morphism,
)
from bondcat.errors import ComposeMismatch, DegreeOverflow
from bondcat.fixtures import RATIONAL, triangle_morphism, triangle_poset, triangle_source
from bondcat.poset import DEGREE_MAX
from bondcat.scalar import DenseMatrix


def _m(rows):
    return DenseMatrix.from_rows(RATIONAL, rows)


def _conditions(report):
    return {violation.condition for violation in report.violations}


class BondObjectTests(unittest.TestCase):
    def setUp(self) -> None:
        self.poset = triangle_poset()
        self.x = self.poset.element
        self.B = triangle_source()

    def test_triangle_object_is_valid(self) -> None:
        self.assertTrue(validate_object(self.B).valid)
        self.assertEqual(self.B.total_dim, 4)
        self.assertEqual(self.B.degree_range, (1, 2))

    def test_zero_object_is_valid(self) -> None:
        zero = BondObject.zero(self.poset, RATIONAL)
        self.assertTrue(zero.is_zero_object())
        self.assertTrue(validate_object(zero).valid)

    def test_square_must_vanish(self) -> None:
        x = self.x
        dims = {x("u", 1): 1, x("v", 1): 1, x("a", 2): 1, x("b", 2): 1}
        blocks = {(x("u", 1), x("a", 2)): _m([[1]]), (x("a", 2), x("u", 1)): _m([[1]])}
        report = validate_object(BondObject.build(self.poset, RATIONAL, dims, blocks))
        self.assertFalse(report.valid)
        locations = {v.location for v in report.violations if v.condition == "(iii)"}
        self.assertIn("([u,1],[u,1])", locations)

    def test_paired_band_sizes_must_agree(self) -> None:
        x = self.x
        report = validate_object(BondObject.build(self.poset, RATIONAL, {x("u", 0): 2, x("v", 0): 1}))
        self.assertEqual(_conditions(report), {"(ii)"})

    def test_block_shape_is_reported(self) -> None:
        x = self.x
        dims = {x("u", 0): 1, x("v", 0): 1, x("a", 1): 1, x("b", 1): 1}
        blocks = {(x("u", 0), x("a", 1)): _m([[1, 0]])}
        report = validate_object(BondObject.build(self.poset, RATIONAL, dims, blocks))
        self.assertIn("(i)", _conditions(report))

    def test_zero_blocks_and_empty_bands_are_normalized(self) -> None:
        x = self.x
        padded = BondObject.build(
            self.poset,
            RATIONAL,
            {**self.B.dims, x("u", 5): 0},
            {**self.B.blocks, (x("v", 1), x("a", 2)): _m([[0]])},
        )
        self.assertEqual(padded, self.B)

    def test_shift_negates_and_lowers_degrees(self) -> None:
        x = self.x
        shifted = shift_object(self.B)
        self.assertEqual(shifted.block(x("u", 0), x("a", 1)), _m([[1]]))
        self.assertEqual(shifted.block(x("v", 0), x("b", 1)), _m([[-1]]))
        self.assertTrue(validate_object(shifted).valid)

    def test_double_shift_keeps_signs(self) -> None:
        x = self.x
        twice = shift_object(shift_object(self.B))
        self.assertEqual(twice, shift_object(self.B, 2))
        self.assertEqual(twice.block(x("u", -1), x("a", 0)), _m([[-1]]))

    def test_shift_of_zero_object(self) -> None:
        zero = BondObject.zero(self.poset, RATIONAL)
        self.assertEqual(shift_object(zero), zero)

    def test_shift_overflow(self) -> None:
        x = self.x
        low = BondObject.build(self.poset, RATIONAL, {x("u", -DEGREE_MAX): 1, x("v", -DEGREE_MAX): 1})
        with self.assertRaises(DegreeOverflow):
            shift_object(low, 2)

    def test_direct_sum_with_zero(self) -> None:
        zero = BondObject.zero(self.poset, RATIONAL)
        self.assertEqual(direct_sum(zero, self.B), self.B)
        doubled = direct_sum(self.B, self.B)
        self.assertEqual(doubled.dim(self.x("u", 1)), 2)
        self.assertTrue(validate_object(doubled).valid)


class BondMorphismTests(unittest.TestCase):
    def setUp(self) -> None:
        self.T = triangle_morphism()
        self.B = self.T.source
        self.x = self.B.poset.element

    def test_triangle_morphism_is_valid(self) -> None:
        self.assertTrue(validate_morphism(self.T).valid)
        self.assertTrue(validate_morphism(identity(self.B)).valid)

    def test_intertwining_violation(self) -> None:
        x = self.x
        shifted = shift_object(self.B)
        diagonal = {
            (x("u", 0), x("u", 0)): _m([[2]]),
            (x("v", 0), x("v", 0)): _m([[2]]),
            (x("a", 1), x("a", 1)): _m([[1]]),
            (x("b", 1), x("b", 1)): _m([[1]]),
        }
        report = validate_morphism(BondMorphism.build(shifted, shifted, diagonal))
        self.assertEqual(_conditions(report), {"(b)"})

    def test_paired_diagonal_violation(self) -> None:
        x = self.x
        blocks = {(x("u", 1), x("u", 1)): _m([[1]])}
        report = validate_morphism(BondMorphism.build(self.B, self.B, blocks))
        self.assertIn("(d)", _conditions(report))

    def test_block_below_the_diagonal(self) -> None:
        x = self.x
        blocks = {(x("a", 2), x("u", 1)): _m([[1]])}
        report = validate_morphism(BondMorphism.build(self.B, self.B, blocks))
        self.assertIn("(c)", _conditions(report))

    def test_composition_with_identity(self) -> None:
        self.assertEqual(compose(self.T, identity(self.T.target)), self.T)
        self.assertEqual(compose(identity(self.B), self.T), self.T)

    def test_compose_mismatch(self) -> None:
        with self.assertRaises(ComposeMismatch):
            compose(self.T, self.T)

    def test_additive_structure(self) -> None:
        zero = zero_morphism(self.B, self.T.target)
        self.assertEqual(add(self.T, zero), self.T)
        self.assertEqual(add(self.T, scale(-1, self.T)), zero)
        self.assertEqual(subtract(self.T, self.T), zero)
        self.assertEqual(subtract(zero, self.T), scale(-1, self.T))
        self.assertTrue(zero.is_zero())

    def test_direct_sum_of_morphisms(self) -> None:
        total = direct_sum_morphisms(self.T, identity(self.B))
        self.assertEqual(total.source, direct_sum(self.B, self.B))
        self.assertEqual(total.target, direct_sum(self.T.target, self.B))
        self.assertTrue(validate_morphism(total).valid)
        self.assertEqual(direct_sum_morphisms(identity(self.B), identity(self.B)), identity(direct_sum(self.B, self.B)))

    def test_shift_is_functorial(self) -> None:
        unit = identity(self.T.target)
        self.assertEqual(shift_morphism(compose(self.T, unit)), compose(shift_morphism(self.T), shift_morphism(unit)))
        self.assertEqual(shift_morphism(identity(self.B)), identity(shift_object(self.B)))
        self.assertEqual(shift_morphism(self.T).block(self.x("u", 0), self.x("a", 0)), _m([[1]]))


if __name__ == "__main__":
    unittest.main()
