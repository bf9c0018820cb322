import unittest

from hypothesis import given

from bondcat.complexes import (
    ChainMap,
    ProjComplex,
    check_homotopy,
    compose_chain_maps,
    compose_homotopy_left,
    compose_homotopy_right,
    direct_sum_complexes,
    homotopy_witness,
    identity_chain_map,
    mapping_cone,
    negate_chain_map,
    null_homotopic_map,
    random_chain_map,
    random_homotopy,
    shift_complex,
    stalk_complex,
    subtract_chain_maps,
    validate_chain_map,
    validate_complex,
    zero_chain_map,
)
from bondcat.errors import ComposeMismatch, ShapeMismatch
from bondcat.fixtures import (
    RATIONAL,
    algebra_a1,
    kronecker_chain_map,
    kronecker_complex,
    kronecker_stalk_map,
    loop_chain_map,
    loop_complex,
    parametric_chain_map,
    parametric_complex,
    parametric_cone_expected,
)
from bondcat.generator import random_complex
from bondcat.scalar import DenseMatrix
from strategies import algebras, fields, rngs


def _m(rows):
    return DenseMatrix.from_rows(RATIONAL, rows)


class ComplexTests(unittest.TestCase):
    def test_worked_complexes_are_valid(self) -> None:
        for P in (parametric_complex(), loop_complex(), kronecker_complex()):
            self.assertTrue(validate_complex(P).valid)

    def test_square_of_differential_must_vanish(self) -> None:
        algebra = algebra_a1()
        x, a = algebra.parse_path("x"), algebra.parse_path("a")
        P = ProjComplex.build(
            algebra,
            RATIONAL,
            {("1", 0): 1, ("1", 1): 1, ("2", 2): 1},
            {0: {x: _m([[1]])}, 1: {a: _m([[1]])}},
        )
        report = validate_complex(P)
        self.assertEqual([(v.condition, v.location) for v in report.violations], [("d^2", "(xa,0)")])

    def test_loop_composition_vanishes_by_relation(self) -> None:
        algebra = algebra_a1()
        x = algebra.parse_path("x")
        P = ProjComplex.build(
            algebra,
            RATIONAL,
            {("1", 0): 1, ("1", 1): 1, ("1", 2): 1},
            {0: {x: _m([[1]])}, 1: {x: _m([[1]])}},
        )
        self.assertTrue(validate_complex(P).valid)

    def test_shift_negates_differentials(self) -> None:
        P = kronecker_complex()
        shifted = shift_complex(P)
        a = P.algebra.parse_path("a")
        self.assertEqual(shifted.d("1", 0), 1)
        self.assertEqual(shifted.block(0, a), _m([[1]]))
        self.assertEqual(shift_complex(P, 2).block(-1, a), _m([[-1]]))
        self.assertEqual(shift_complex(shifted, -1), P)

    def test_direct_sum(self) -> None:
        P, Q = loop_complex(), parametric_complex()
        total = direct_sum_complexes(P, Q)
        self.assertEqual(total.d("1", 2), 3)
        self.assertTrue(validate_complex(total).valid)

    def test_zero_complex(self) -> None:
        zero = ProjComplex.zero(algebra_a1(), RATIONAL)
        self.assertTrue(zero.is_zero_complex())
        self.assertIsNone(zero.degree_span())


class ChainMapTests(unittest.TestCase):
    def test_worked_chain_maps_are_valid(self) -> None:
        for phi in (parametric_chain_map(), loop_chain_map(), kronecker_chain_map(), kronecker_stalk_map()):
            self.assertTrue(validate_chain_map(phi).valid)

    def test_commutation_violation(self) -> None:
        P = parametric_complex()
        e1 = P.algebra.parse_path("e1")
        phi = ChainMap.build(P, P, {1: {e1: _m([[1]])}})
        conditions = {violation.condition for violation in validate_chain_map(phi).violations}
        self.assertEqual(conditions, {"commutation"})

    def test_identity_and_composition(self) -> None:
        phi = parametric_chain_map()
        unit = identity_chain_map(phi.source)
        self.assertEqual(compose_chain_maps(unit, phi), phi)
        self.assertEqual(compose_chain_maps(phi, unit), phi)
        with self.assertRaises(ComposeMismatch):
            compose_chain_maps(kronecker_chain_map(), phi)

    def test_maps_over_different_algebras(self) -> None:
        with self.assertRaises(ShapeMismatch):
            zero_chain_map(loop_complex(), kronecker_complex())


class MappingConeTests(unittest.TestCase):
    def test_cone_of_parametric_endomorphism(self) -> None:
        built = mapping_cone(parametric_chain_map())
        self.assertEqual(built.cone, parametric_cone_expected())
        self.assertTrue(validate_complex(built.cone).valid)
        self.assertTrue(validate_chain_map(built.inclusion).valid)
        self.assertTrue(validate_chain_map(built.projection).valid)
        self.assertEqual(built.projection.target, shift_complex(parametric_complex()))

    def test_inclusion_then_projection_is_zero(self) -> None:
        built = mapping_cone(loop_chain_map())
        self.assertTrue(compose_chain_maps(built.inclusion, built.projection).is_zero())

    def test_cone_of_identity_is_contractible(self) -> None:
        cone = mapping_cone(identity_chain_map(parametric_complex())).cone
        self.assertIsNotNone(homotopy_witness(identity_chain_map(cone), zero_chain_map(cone, cone)))


class HomotopyTests(unittest.TestCase):
    def test_loop_map_is_null_homotopic(self) -> None:
        phi = loop_chain_map()
        zero = zero_chain_map(phi.source, phi.target)
        witness = homotopy_witness(phi, zero)
        self.assertIsNotNone(witness)
        self.assertTrue(check_homotopy(phi, zero, witness).valid)
        e1 = phi.algebra.parse_path("e1")
        self.assertEqual(witness.block(2, e1), _m([[1]]))

    def test_stalk_map_is_not_null_homotopic(self) -> None:
        phi = kronecker_stalk_map()
        self.assertIsNone(homotopy_witness(phi, zero_chain_map(phi.source, phi.target)))

    def test_homotopy_requires_parallel_maps(self) -> None:
        with self.assertRaises(ShapeMismatch):
            homotopy_witness(loop_chain_map(), parametric_chain_map())

    @given(algebras(), fields(), rngs())
    def test_random_null_homotopic_maps(self, algebra, field, rng) -> None:
        P = random_complex(algebra, field, rng, depth=1)
        Q = random_complex(algebra, field, rng, depth=1)
        s = random_homotopy(P, Q, rng)
        phi = null_homotopic_map(P, Q, s)
        zero = zero_chain_map(P, Q)
        self.assertTrue(validate_chain_map(phi).valid)
        self.assertTrue(check_homotopy(phi, zero, s).valid)
        self.assertIsNotNone(homotopy_witness(phi, zero))

    @given(algebras(), fields(), rngs())
    def test_homotopy_is_a_congruence(self, algebra, field, rng) -> None:
        P, Q, R = (random_complex(algebra, field, rng, depth=1) for _ in range(3))
        s = random_homotopy(P, Q, rng)
        phi = null_homotopic_map(P, Q, s)
        chi = random_chain_map(Q, R, rng)
        rho = random_chain_map(R, P, rng)
        right = compose_chain_maps(phi, chi)
        left = compose_chain_maps(rho, phi)
        self.assertTrue(check_homotopy(right, zero_chain_map(P, R), compose_homotopy_right(s, chi)).valid)
        self.assertTrue(check_homotopy(left, zero_chain_map(R, Q), compose_homotopy_left(rho, s)).valid)

    def test_difference_of_homotopic_maps(self) -> None:
        phi = loop_chain_map()
        difference = subtract_chain_maps(phi, zero_chain_map(phi.source, phi.target))
        self.assertEqual(difference, phi)
        self.assertEqual(subtract_chain_maps(zero_chain_map(phi.source, phi.target), phi), negate_chain_map(phi))
        stalk = stalk_complex(phi.algebra, RATIONAL, "2", 0)
        self.assertTrue(validate_complex(stalk).valid)


if __name__ == "__main__":
    unittest.main()
