"""Worked instances: small posets, gentle algebras and the complexes used as regressions."""
from __future__ import annotations

from typing import Any, Sequence

from bondcat.category import BondMorphism, BondObject, shift_object
from bondcat.complexes import ChainMap, ProjComplex, shift_complex, stalk_complex
from bondcat.gentle import GentleAlgebra
from bondcat.poset import BasePoset
from bondcat.scalar import DenseMatrix, Field

RATIONAL = Field(0)


def _m(field: Field, rows: Sequence[Sequence[Any]]) -> DenseMatrix:
    return DenseMatrix.from_rows(field, rows)


def triangle_poset() -> BasePoset:
    return BasePoset.from_pairs(["u", "a", "v", "b"], {"u": "v", "a": "b"})


def triangle_source(field: Field = RATIONAL) -> BondObject:
    poset = triangle_poset()
    x = poset.element
    dims = {x("u", 1): 1, x("v", 1): 1, x("a", 2): 1, x("b", 2): 1}
    blocks = {
        (x("u", 1), x("a", 2)): _m(field, [[-1]]),
        (x("v", 1), x("b", 2)): _m(field, [[1]]),
    }
    return BondObject.build(poset, field, dims, blocks)


def triangle_morphism(field: Field = RATIONAL) -> BondMorphism:
    """T: B -> [[B]] with unit blocks at ([u,1],[a,1]) and ([v,1],[b,1])."""
    source = triangle_source(field)
    x = source.poset.element
    blocks = {
        (x("u", 1), x("a", 1)): _m(field, [[1]]),
        (x("v", 1), x("b", 1)): _m(field, [[1]]),
    }
    return BondMorphism.build(source, shift_object(source), blocks)


def triangle_cone_expected(field: Field = RATIONAL) -> BondObject:
    poset = triangle_poset()
    x = poset.element
    dims = {x("u", 0): 2, x("v", 0): 2, x("a", 1): 2, x("b", 1): 2}
    blocks = {
        (x("u", 0), x("a", 1)): _m(field, [[1, 1], [0, 1]]),
        (x("v", 0), x("b", 1)): _m(field, [[-1, 1], [0, -1]]),
    }
    return BondObject.build(poset, field, dims, blocks)


def algebra_a1() -> GentleAlgebra:
    """One loop x at 1, an arrow a: 1 -> 2 and a loop y at 2, with x^2 = y^2 = 0."""
    return GentleAlgebra.build(
        ["1", "2"],
        [("x", "1", "1"), ("a", "1", "2"), ("y", "2", "2")],
        [("x", "x"), ("y", "y")],
    )


def algebra_a2() -> GentleAlgebra:
    """The Kronecker quiver: two arrows a, b from 1 to 2."""
    return GentleAlgebra.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


def algebra_a3() -> GentleAlgebra:
    """Linear 1 -> 2 -> 3 with the composite killed."""
    return GentleAlgebra.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [("a", "b")])


def algebra_two_cycle() -> GentleAlgebra:
    return GentleAlgebra.build(["1", "2"], [("p", "1", "2"), ("q", "2", "1")], [("p", "q"), ("q", "p")])


def _paths(algebra: GentleAlgebra, field: Field, entries: dict[str, Sequence[Sequence[Any]]]):
    return {algebra.parse_path(name): _m(field, rows) for name, rows in entries.items()}


def kronecker_complex(field: Field = RATIONAL) -> ProjComplex:
    """P1 in degree 1 -> P2 in degree 2 with differential p(b) - p(a); its image is the triangle source."""
    algebra = algebra_a2()
    return ProjComplex.build(
        algebra,
        field,
        {("1", 1): 1, ("2", 2): 1},
        {1: _paths(algebra, field, {"a": [[-1]], "b": [[1]]})},
    )


def kronecker_chain_map(field: Field = RATIONAL) -> ChainMap:
    """p(a) + p(b) into the shifted complex; its image is the triangle morphism."""
    source = kronecker_complex(field)
    target = shift_complex(source)
    return ChainMap.build(source, target, {1: _paths(source.algebra, field, {"a": [[1]], "b": [[1]]})})


def parametric_complex(field: Field = RATIONAL) -> ProjComplex:
    """P1 -> P1^2 + P2 over A1 with differential (2p(x), p(e1), p(a) + 3p(ay) + 2p(xay))."""
    algebra = algebra_a1()
    return ProjComplex.build(
        algebra,
        field,
        {("1", 1): 1, ("1", 2): 2, ("2", 2): 1},
        {
            1: _paths(
                algebra,
                field,
                {"e1": [[0, 1]], "x": [[2, 0]], "a": [[1]], "ay": [[3]], "xay": [[2]]},
            )
        },
    )


def parametric_chain_map(
    field: Field = RATIONAL,
    alpha: Any = 1,
    beta: Any = 2,
    gamma: Any = 3,
    delta: Any = 4,
    epsilon: Any = 5,
    lam: Any = 6,
) -> ChainMap:
    """The endomorphism family of the parametric complex."""
    P = parametric_complex(field)
    algebra = P.algebra
    three_lam = field.mul(field.coerce(3), field.coerce(lam))
    return ChainMap.build(
        P,
        P,
        {
            1: _paths(algebra, field, {"e1": [[beta]], "x": [[lam]]}),
            2: _paths(
                algebra,
                field,
                {
                    "e1": [[beta, 0], [0, beta]],
                    "e2": [[beta]],
                    "x": [[alpha, gamma], [0, lam]],
                    "xa": [[delta], [lam]],
                    "xay": [[epsilon], [three_lam]],
                },
            ),
        },
    )


def parametric_cone_expected(field: Field = RATIONAL, alpha=1, beta=2, gamma=3, delta=4, epsilon=5, lam=6) -> ProjComplex:
    algebra = algebra_a1()
    three_lam = field.mul(field.coerce(3), field.coerce(lam))
    return ProjComplex.build(
        algebra,
        field,
        {("1", 0): 1, ("1", 1): 3, ("2", 1): 1, ("1", 2): 2, ("2", 2): 1},
        {
            0: _paths(
                algebra,
                field,
                {
                    "e1": [[0, -1, beta]],
                    "x": [[-2, 0, lam]],
                    "a": [[-1]],
                    "ay": [[-3]],
                    "xay": [[-2]],
                },
            ),
            1: _paths(
                algebra,
                field,
                {
                    "e1": [[beta, 0], [0, beta], [0, 1]],
                    "x": [[alpha, gamma], [0, lam], [2, 0]],
                    "a": [[0], [0], [1]],
                    "xa": [[delta], [lam], [0]],
                    "ay": [[0], [0], [3]],
                    "xay": [[epsilon], [three_lam], [2]],
                    "e2": [[beta]],
                },
            ),
        },
    )


def loop_complex(field: Field = RATIONAL) -> ProjComplex:
    """P1 -> P1 over A1 with differential p(x) + p(e1)."""
    algebra = algebra_a1()
    return ProjComplex.build(
        algebra,
        field,
        {("1", 1): 1, ("1", 2): 1},
        {1: _paths(algebra, field, {"e1": [[1]], "x": [[1]]})},
    )


def loop_chain_map(field: Field = RATIONAL) -> ChainMap:
    """Null-homotopic endomorphism whose image needs a degree-lowering witness."""
    P = loop_complex(field)
    components = {degree: _paths(P.algebra, field, {"e1": [[1]], "x": [[1]]}) for degree in (1, 2)}
    return ChainMap.build(P, P, components)


def kronecker_stalk_map(field: Field = RATIONAL) -> ChainMap:
    """p(a) from the stalk P1 into P1 -> P2 (differential p(a) + p(b)).

    Not null-homotopic, yet its image is null through a witness whose two copies
    of e1 carry different degree-lowering blocks.
    """
    algebra = algebra_a2()
    source = stalk_complex(algebra, field, "1", 1)
    target = ProjComplex.build(
        algebra,
        field,
        {("1", 0): 1, ("2", 1): 1},
        {0: _paths(algebra, field, {"a": [[1]], "b": [[1]]})},
    )
    return ChainMap.build(source, target, {1: _paths(algebra, field, {"a": [[1]]})})


def _a1_cells(degrees: dict[int, dict[str, int]]):
    poset = algebra_a1().poset
    dims = {poset.element(name, degree): size for degree, sizes in degrees.items() for name, size in sizes.items()}
    return poset, dims


def parametric_complex_image(field: Field = RATIONAL) -> BondObject:
    """F of the parametric complex, block by block over [e1,i], [x,i], [xa,i], [xay,i]."""
    poset, dims = _a1_cells({1: {"e1": 1, "x": 1}, 2: {"e1": 2, "x": 2, "xa": 1, "xay": 1}})
    x = poset.element
    blocks = {
        (x("e1", 1), x("e1", 2)): _m(field, [[0, 1]]),
        (x("x", 1), x("x", 2)): _m(field, [[0, 1]]),
        (x("e1", 1), x("x", 2)): _m(field, [[2, 0]]),
        (x("e1", 1), x("xa", 2)): _m(field, [[0]]),
        (x("e1", 1), x("xay", 2)): _m(field, [[2]]),
        (x("x", 1), x("xa", 2)): _m(field, [[1]]),
        (x("x", 1), x("xay", 2)): _m(field, [[3]]),
    }
    return BondObject.build(poset, field, dims, blocks)


def parametric_chain_map_image(
    field: Field = RATIONAL, alpha=1, beta=2, gamma=3, delta=4, epsilon=5, lam=6
) -> BondMorphism:
    obj = parametric_complex_image(field)
    x = obj.poset.element
    three_lam = field.mul(field.coerce(3), field.coerce(lam))
    blocks = {
        (x("e1", 1), x("e1", 1)): _m(field, [[beta]]),
        (x("e1", 1), x("x", 1)): _m(field, [[lam]]),
        (x("x", 1), x("x", 1)): _m(field, [[beta]]),
        (x("e1", 2), x("e1", 2)): _m(field, [[beta, 0], [0, beta]]),
        (x("e1", 2), x("x", 2)): _m(field, [[alpha, gamma], [0, lam]]),
        (x("e1", 2), x("xa", 2)): _m(field, [[delta], [lam]]),
        (x("e1", 2), x("xay", 2)): _m(field, [[epsilon], [three_lam]]),
        (x("x", 2), x("x", 2)): _m(field, [[beta, 0], [0, beta]]),
        (x("xa", 2), x("xa", 2)): _m(field, [[beta]]),
        (x("xay", 2), x("xay", 2)): _m(field, [[beta]]),
    }
    return BondMorphism.build(obj, obj, blocks)


def parametric_cone_image(field: Field = RATIONAL, alpha=1, beta=2, gamma=3, delta=4, epsilon=5, lam=6) -> BondObject:
    """F of the cone of the parametric endomorphism, with bands P^{j+1} before P^j."""
    poset, dims = _a1_cells(
        {
            0: {"e1": 1, "x": 1},
            1: {"e1": 3, "x": 3, "xa": 1, "xay": 1},
            2: {"e1": 2, "x": 2, "xa": 1, "xay": 1},
        }
    )
    x = poset.element
    three_lam = field.mul(field.coerce(3), field.coerce(lam))
    trivial_1 = [[beta, 0], [0, beta], [0, 1]]
    blocks = {
        (x("e1", 0), x("e1", 1)): _m(field, [[0, -1, beta]]),
        (x("x", 0), x("x", 1)): _m(field, [[0, -1, beta]]),
        (x("e1", 0), x("x", 1)): _m(field, [[-2, 0, lam]]),
        (x("e1", 0), x("xay", 1)): _m(field, [[-2]]),
        (x("x", 0), x("xa", 1)): _m(field, [[-1]]),
        (x("x", 0), x("xay", 1)): _m(field, [[-3]]),
        (x("e1", 1), x("e1", 2)): _m(field, trivial_1),
        (x("x", 1), x("x", 2)): _m(field, trivial_1),
        (x("e1", 1), x("x", 2)): _m(field, [[alpha, gamma], [0, lam], [2, 0]]),
        (x("e1", 1), x("xa", 2)): _m(field, [[delta], [lam], [0]]),
        (x("e1", 1), x("xay", 2)): _m(field, [[epsilon], [three_lam], [2]]),
        (x("x", 1), x("xa", 2)): _m(field, [[0], [0], [1]]),
        (x("x", 1), x("xay", 2)): _m(field, [[0], [0], [3]]),
        (x("xa", 1), x("xa", 2)): _m(field, [[beta]]),
        (x("xay", 1), x("xay", 2)): _m(field, [[beta]]),
    }
    return BondObject.build(poset, field, dims, blocks)


def loop_complex_image(field: Field = RATIONAL) -> BondObject:
    poset, dims = _a1_cells({1: {"e1": 1, "x": 1}, 2: {"e1": 1, "x": 1}})
    x = poset.element
    blocks = {
        (x("e1", 1), x("e1", 2)): _m(field, [[1]]),
        (x("e1", 1), x("x", 2)): _m(field, [[1]]),
        (x("x", 1), x("x", 2)): _m(field, [[1]]),
    }
    return BondObject.build(poset, field, dims, blocks)


def loop_chain_map_image(field: Field = RATIONAL) -> BondMorphism:
    obj = loop_complex_image(field)
    x = obj.poset.element
    blocks = {}
    for degree in (1, 2):
        blocks[(x("e1", degree), x("e1", degree))] = _m(field, [[1]])
        blocks[(x("e1", degree), x("x", degree))] = _m(field, [[1]])
        blocks[(x("x", degree), x("x", degree))] = _m(field, [[1]])
    return BondMorphism.build(obj, obj, blocks)
