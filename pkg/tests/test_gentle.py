import unittest

from bondcat.errors import BondcatError, EndpointMismatch, NotFiniteDimensional, UnknownPath
from bondcat.fixtures import algebra_a1, algebra_a2, algebra_a3, algebra_two_cycle
from bondcat.gentle import GentleAlgebra, enumerate_paths, maximal_paths, validate_gentle


def _names(paths):
    return [path.name for path in paths]


class GentleAlgebraTests(unittest.TestCase):
    def test_worked_algebras_are_gentle(self) -> None:
        for build in (algebra_a1, algebra_a2, algebra_a3, algebra_two_cycle):
            with self.subTest(algebra=build.__name__):
                self.assertTrue(validate_gentle(build()).valid)

    def test_paths_of_loop_algebra(self) -> None:
        algebra = algebra_a1()
        self.assertEqual(_names(enumerate_paths(algebra)), ["e1", "e2", "x", "a", "y", "xa", "ay", "xay"])
        self.assertEqual(_names(maximal_paths(algebra)), ["xay"])

    def test_paths_of_kronecker_algebra(self) -> None:
        algebra = algebra_a2()
        self.assertEqual(_names(enumerate_paths(algebra)), ["e1", "e2", "a", "b"])
        self.assertEqual(_names(maximal_paths(algebra)), ["a", "b"])

    def test_path_products(self) -> None:
        algebra = algebra_a1()
        x, a, y = (algebra.parse_path(name) for name in ("x", "a", "y"))
        self.assertEqual(algebra.path_mul(x, a).name, "xa")
        self.assertEqual(algebra.path_mul(algebra.path_mul(x, a), y).name, "xay")
        self.assertIsNone(algebra.path_mul(x, x))
        self.assertEqual(algebra.path_mul(algebra.trivial("1"), x), x)
        with self.assertRaises(EndpointMismatch):
            algebra.path_mul(a, x)

    def test_factorizations_cover_every_split(self) -> None:
        algebra = algebra_a1()
        splits = algebra.factorizations[algebra.parse_path("xay")]
        self.assertEqual(
            [(left.name, right.name) for left, right in splits],
            [("e1", "xay"), ("x", "ay"), ("xa", "y"), ("xay", "e2")],
        )

    def test_unknown_path_name(self) -> None:
        with self.assertRaises(UnknownPath) as caught:
            algebra_a1().parse_path("yx")
        self.assertIsInstance(caught.exception, BondcatError)
        with self.assertRaises(UnknownPath):
            algebra_a1().arrow("w")


class AlgebraPosetTests(unittest.TestCase):
    def test_loop_algebra_poset(self) -> None:
        poset = algebra_a1().poset
        self.assertEqual(poset.elements, ("e1", "x", "xa", "xay"))
        self.assertEqual(poset.targets, ("1", "1", "2", "2"))
        self.assertEqual(poset.pairs(), {"e1": "x", "xa": "xay"})

    def test_kronecker_poset_names_trivial_copies(self) -> None:
        poset = algebra_a2().poset
        self.assertEqual(poset.elements, ("e1[a]", "a", "e1[b]", "b"))
        self.assertEqual(poset.pairs(), {"e1[a]": "e1[b]", "a": "b"})
        self.assertEqual(poset.copies_of_vertex("1"), [0, 2])

    def test_unpaired_cells_are_fixed(self) -> None:
        poset = algebra_a3().poset
        self.assertEqual(poset.elements, ("e1", "a", "e2", "b"))
        self.assertTrue(poset.is_fixed(poset.index("e1")))
        self.assertEqual(poset.pairs(), {"a": "e2"})

    def test_maximal_order_is_respected(self) -> None:
        algebra = GentleAlgebra.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2")], maximal_order=["b", "a"])
        self.assertEqual(_names(algebra.maximal_paths), ["b", "a"])
        self.assertEqual(algebra.poset.elements[1], "b")
        wrong = GentleAlgebra.build(["1", "2"], [("a", "1", "2")], maximal_order=["b"])
        with self.assertRaises(ValueError):
            _ = wrong.maximal_paths


class GentleValidationTests(unittest.TestCase):
    def test_too_many_arrows_at_a_vertex(self) -> None:
        algebra = GentleAlgebra.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2")])
        conditions = {violation.condition for violation in validate_gentle(algebra).violations}
        self.assertIn("(i)", conditions)

    def test_two_free_continuations(self) -> None:
        algebra = GentleAlgebra.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "2", "3")])
        conditions = {violation.condition for violation in validate_gentle(algebra).violations}
        self.assertEqual(conditions, {"(ii)"})

    def test_relation_must_be_a_path(self) -> None:
        algebra = GentleAlgebra.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [("b", "a")])
        conditions = {violation.condition for violation in validate_gentle(algebra).violations}
        self.assertEqual(conditions, {"(iv)"})

    def test_cycle_without_relations_is_infinite(self) -> None:
        loop = GentleAlgebra.build(["1"], [("x", "1", "1")])
        with self.assertRaises(NotFiniteDimensional):
            validate_gentle(loop)

    def test_duplicate_arrow_names(self) -> None:
        with self.assertRaises(ValueError):
            GentleAlgebra.build(["1", "2"], [("a", "1", "2"), ("a", "2", "1")])


if __name__ == "__main__":
    unittest.main()
