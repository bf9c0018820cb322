import unittest

from hypothesis import given

from bondcat.category import shift_object, validate_morphism, validate_object, zero_morphism
from bondcat.complexes import (
    homotopy_witness,
    identity_chain_map,
    mapping_cone,
    random_chain_map,
    zero_chain_map,
)
from bondcat.cones import cone
from bondcat.equiv import Variant, check_witness, find_witness
from bondcat.fixtures import (
    algebra_a1,
    kronecker_chain_map,
    kronecker_complex,
    kronecker_stalk_map,
    loop_chain_map,
    loop_chain_map_image,
    loop_complex,
    loop_complex_image,
    parametric_chain_map,
    parametric_chain_map_image,
    parametric_complex,
    parametric_complex_image,
    parametric_cone_image,
    triangle_morphism,
    triangle_source,
)
from bondcat.functor import (
    check_additivity,
    check_cone_compat,
    check_faithful,
    check_homotopy_equiv,
    check_shift_compat,
    functor_homotopy,
    functor_morphism,
    functor_object,
    morphism_image,
    object_image,
    path_cells,
    recover_chain_map,
)
from bondcat.generator import random_chain_map_instance, random_complex
from strategies import algebras, fields, rngs


class FunctorObjectTests(unittest.TestCase):
    def assertSameBlocks(self, left, right) -> None:
        self.assertEqual(set(left.blocks), set(right.blocks))
        for key, matrix in left.blocks.items():
            self.assertEqual(matrix, right.blocks[key], key)

    def test_kronecker_complex_lands_on_the_triangle_source(self) -> None:
        image = functor_object(kronecker_complex())
        expected = triangle_source()
        # Same involution, different element names.
        self.assertEqual(image.poset.involution, expected.poset.involution)
        self.assertEqual(dict(image.dims), dict(expected.dims))
        self.assertSameBlocks(image, expected)

    def test_kronecker_chain_map_lands_on_the_triangle_morphism(self) -> None:
        image = functor_morphism(kronecker_chain_map())
        self.assertSameBlocks(image, triangle_morphism())
        self.assertEqual(image.target, shift_object(image.source))

    def test_images_are_valid(self) -> None:
        for P in (parametric_complex(), loop_complex(), kronecker_complex()):
            self.assertTrue(validate_object(functor_object(P)).valid)
        for phi in (parametric_chain_map(), loop_chain_map(), kronecker_stalk_map()):
            self.assertTrue(validate_morphism(functor_morphism(phi)).valid)

    def test_placement_names_paths(self) -> None:
        image = object_image(parametric_complex())
        self.assertIn(("xay", 1), set(image.placement.values()))
        self.assertIn(("e1", 1), set(image.placement.values()))
        algebra = algebra_a1()
        self.assertEqual(path_cells(algebra, algebra.parse_path("xay")), [(0, 3)])
        self.assertEqual(path_cells(algebra, algebra.parse_path("e1")), [(0, 0), (1, 1)])
        morphism = morphism_image(parametric_chain_map())
        self.assertIn(("x", 2), set(morphism.placement.values()))


class WorkedImageTests(unittest.TestCase):
    def test_parametric_complex_image(self) -> None:
        self.assertEqual(functor_object(parametric_complex()), parametric_complex_image())

    def test_parametric_chain_map_image(self) -> None:
        self.assertEqual(functor_morphism(parametric_chain_map()), parametric_chain_map_image())
        other = {"alpha": 0, "beta": 1, "gamma": 7, "delta": -1, "epsilon": 0, "lam": 2}
        self.assertEqual(functor_morphism(parametric_chain_map(**other)), parametric_chain_map_image(**other))

    def test_parametric_cone_image(self) -> None:
        expected = parametric_cone_image()
        self.assertEqual(functor_object(mapping_cone(parametric_chain_map()).cone), expected)
        self.assertEqual(cone(parametric_chain_map_image()), expected)
        self.assertEqual(expected.total_dim, 16)

    def test_loop_images(self) -> None:
        self.assertEqual(functor_object(loop_complex()), loop_complex_image())
        self.assertEqual(functor_morphism(loop_chain_map()), loop_chain_map_image())
        image = loop_chain_map_image()
        zero = zero_morphism(image.source, image.target)
        self.assertIsNone(find_witness(image, zero, Variant.KAPPA))
        self.assertIsNotNone(find_witness(image, zero, Variant.K))
        phi = loop_chain_map()
        self.assertIsNotNone(homotopy_witness(phi, zero_chain_map(phi.source, phi.target)))


class CompatibilityTests(unittest.TestCase):
    def test_cone_compatibility(self) -> None:
        for phi in (parametric_chain_map(), loop_chain_map(), kronecker_chain_map(), kronecker_stalk_map()):
            self.assertEqual(functor_object(mapping_cone(phi).cone), cone(functor_morphism(phi)))
            self.assertTrue(check_cone_compat(phi).valid)

    def test_shift_compatibility(self) -> None:
        phi = parametric_chain_map()
        self.assertTrue(check_shift_compat(phi.source, phi).valid)
        self.assertTrue(check_shift_compat(kronecker_complex()).valid)

    def test_additivity(self) -> None:
        phi = loop_chain_map()
        self.assertTrue(check_additivity(loop_complex(), parametric_complex()).valid)
        self.assertTrue(check_additivity(phi.source, phi.source, phi, identity_chain_map(phi.source)).valid)

    def test_faithful_on_worked_maps(self) -> None:
        for phi in (parametric_chain_map(), loop_chain_map(), kronecker_stalk_map()):
            self.assertTrue(check_faithful(phi).valid)
            self.assertEqual(recover_chain_map(functor_morphism(phi), phi.source, phi.target), phi)

    @given(algebras(), fields(), rngs())
    def test_random_compatibility(self, algebra, field, rng) -> None:
        P = random_complex(algebra, field, rng, depth=1)
        Q = random_complex(algebra, field, rng, depth=1)
        phi = random_chain_map(P, Q, rng)
        self.assertTrue(check_cone_compat(phi).valid)
        self.assertTrue(check_shift_compat(P, phi).valid)
        self.assertTrue(check_additivity(P, Q).valid)
        self.assertTrue(check_faithful(phi).valid)


class HomotopyEquivalenceTests(unittest.TestCase):
    def test_loop_map_needs_a_lowering_witness(self) -> None:
        phi = loop_chain_map()
        image = functor_morphism(phi)
        zero = zero_morphism(image.source, image.target)
        self.assertIsNone(find_witness(image, zero, Variant.KAPPA))
        self.assertIsNotNone(find_witness(image, zero, Variant.K))
        self.assertIsNotNone(find_witness(image, zero, Variant.PAIRED))

        report = check_homotopy_equiv(phi)
        self.assertTrue(report.homotopic)
        self.assertTrue(report.k_paired)
        self.assertTrue(report.k_plain)
        self.assertFalse(report.kappa)
        self.assertTrue(report.conversions_verified)

    def test_homotopy_image_is_a_paired_witness(self) -> None:
        phi = loop_chain_map()
        witness = homotopy_witness(phi, zero_chain_map(phi.source, phi.target))
        L = functor_homotopy(witness)
        image = functor_morphism(phi)
        self.assertIs(Variant.parse(L.variant), Variant.PAIRED)
        self.assertTrue(check_witness(image, zero_morphism(image.source, image.target), L).valid)

    def test_stalk_map_separates_plain_and_paired(self) -> None:
        report = check_homotopy_equiv(kronecker_stalk_map())
        self.assertFalse(report.homotopic)
        self.assertFalse(report.k_paired)
        self.assertTrue(report.k_plain)
        self.assertFalse(report.conversions_verified)

    @given(algebras(), fields(), rngs())
    def test_random_decisions_agree(self, algebra, field, rng) -> None:
        phi = random_chain_map_instance(algebra, field, rng, depth=1)
        report = check_homotopy_equiv(phi, include_plain=False)
        self.assertEqual(report.homotopic, report.k_paired)
        self.assertIsNone(report.k_plain)
        if report.homotopic:
            self.assertTrue(report.conversions_verified)


if __name__ == "__main__":
    unittest.main()
