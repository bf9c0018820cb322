import unittest

from hypothesis import given

from bondcat.category import (
    BondObject,
    compose,
    identity,
    negate,
    shift_object,
    validate_morphism,
    validate_object,
    zero_morphism,
)
from bondcat.cones import (
    check_octahedron,
    check_rotation_commutativity,
    check_tr3_squares,
    cone,
    identity_cone_contraction,
    inclusion,
    lambda_quotient_inverse,
    octahedron,
    projection,
    rotated_triangle,
    rotation_witnesses,
    shift_cone_isomorphism,
    standard_triangle,
    tr3_fill,
    validate_triangle,
)
from bondcat.equiv import KMatrixWitness, Variant, check_witness, find_witness
from bondcat.errors import WitnessInvalid
from bondcat.fixtures import RATIONAL, triangle_cone_expected, triangle_morphism
from bondcat.generator import random_composable, random_morphism_between, random_square
from bondcat.scalar import DenseMatrix
from strategies import fields, posets, rngs


def _m(rows):
    return DenseMatrix.from_rows(RATIONAL, rows)


class TriangleExampleTests(unittest.TestCase):
    def setUp(self) -> None:
        self.T = triangle_morphism()
        self.x = self.T.poset.element

    def test_cone_matches_printed_matrix(self) -> None:
        self.assertEqual(cone(self.T), triangle_cone_expected())

    def test_inclusion_and_projection_blocks(self) -> None:
        x = self.x
        iota = inclusion(self.T)
        pi = projection(self.T)
        for name in ("u", "v"):
            self.assertEqual(iota.block(x(name, 0), x(name, 0)), _m([[0, 1]]))
            self.assertEqual(pi.block(x(name, 0), x(name, 0)), _m([[1], [0]]))
        self.assertTrue(validate_morphism(iota).valid)
        self.assertTrue(validate_morphism(pi).valid)
        self.assertTrue(compose(iota, pi).is_zero())

    def test_standard_triangle_edges(self) -> None:
        triangle = standard_triangle(self.T)
        self.assertTrue(validate_triangle(triangle).valid)
        self.assertEqual(triangle.Z, triangle_cone_expected())
        self.assertEqual(triangle.w.target, shift_object(triangle.X))

    def test_first_two_edges_compose_to_null(self) -> None:
        triangle = standard_triangle(self.T)
        composite = compose(triangle.u, triangle.v)
        self.assertIsNotNone(find_witness(composite, zero_morphism(composite.source, composite.target)))

    def test_rotation(self) -> None:
        rotation = rotation_witnesses(self.T)
        self.assertEqual(compose(rotation.R, rotation.S), identity(shift_object(self.T.source)))
        self.assertTrue(check_rotation_commutativity(self.T, rotation).valid)
        self.assertTrue(validate_triangle(rotated_triangle(self.T)).valid)

    def test_tr3_with_identity_square(self) -> None:
        B, C = self.T.source, self.T.target
        L = KMatrixWitness.build(B, C, {})
        H = tr3_fill(self.T, self.T, identity(B), identity(C), L)
        self.assertEqual(H, identity(cone(self.T)))

    def test_tr3_rejects_a_bad_witness(self) -> None:
        B, C = self.T.source, self.T.target
        L = KMatrixWitness.build(B, C, {})
        with self.assertRaises(WitnessInvalid):
            tr3_fill(self.T, self.T, identity(B), negate(identity(C)), L)

    def test_octahedron_on_triangle_example(self) -> None:
        iota = inclusion(self.T)
        result = octahedron(self.T, iota)
        self.assertTrue(check_octahedron(self.T, iota, result).valid)
        self.assertIsNotNone(lambda_quotient_inverse(result))

    def test_shift_cone_isomorphism_is_a_morphism(self) -> None:
        self.assertTrue(validate_morphism(shift_cone_isomorphism(self.T)).valid)


class IdentityConeTests(unittest.TestCase):
    def test_identity_cone_contracts(self) -> None:
        B = triangle_morphism().source
        omega = cone(identity(B))
        L = identity_cone_contraction(B)
        self.assertTrue(validate_object(omega).valid)
        self.assertTrue(check_witness(identity(omega), zero_morphism(omega, omega), L).valid)

    def test_cone_of_zero_has_no_mixing_blocks(self) -> None:
        T = triangle_morphism()
        omega = cone(zero_morphism(T.source, T.target))
        x = T.poset.element
        self.assertEqual(omega.dim(x("u", 0)), 2)
        self.assertEqual(omega.block(x("u", 0), x("a", 1)), _m([[1, 0], [0, 1]]))

    def test_standard_triangle_of_zero_object(self) -> None:
        zero = BondObject.zero(triangle_morphism().poset, RATIONAL)
        triangle = standard_triangle(identity(zero))
        self.assertTrue(triangle.Z.is_zero_object())


class RandomizedConeTests(unittest.TestCase):
    @given(posets(), fields(), rngs())
    def test_random_standard_triangles(self, poset, field, rng) -> None:
        T = random_morphism_between(poset, field, rng, depth=1)
        self.assertTrue(validate_triangle(standard_triangle(T)).valid)
        omega = cone(identity(T.source))
        L = identity_cone_contraction(T.source)
        self.assertTrue(check_witness(identity(omega), zero_morphism(omega, omega), L).valid)

    @given(posets(max_size=3), fields(), rngs())
    def test_random_tr3_squares(self, poset, field, rng) -> None:
        square = random_square(poset, field, rng, depth=1)
        self.assertEqual(square.L.variant, Variant.PAIRED)
        H = tr3_fill(square.T, square.T2, square.F, square.G, square.L)
        self.assertTrue(validate_morphism(H).valid)
        self.assertTrue(check_tr3_squares(square.T, square.T2, square.F, square.G, H))

    @given(posets(max_size=3), fields(), rngs())
    def test_random_octahedra(self, poset, field, rng) -> None:
        S, T = random_composable(poset, field, rng, depth=1)
        result = octahedron(S, T)
        self.assertTrue(check_octahedron(S, T, result).valid)
        self.assertIsNotNone(lambda_quotient_inverse(result))


if __name__ == "__main__":
    unittest.main()
