"""Seeded random instances built only from valid pieces: stalks, random morphisms and cones."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from bondcat import config
from bondcat.category import BondMorphism, BondObject
from bondcat.complexes import (
    ChainMap,
    ProjComplex,
    mapping_cone,
    null_homotopic_map,
    random_chain_map,
    random_homotopy,
    stalk_complex,
)
from bondcat.cones import cone
from bondcat.equiv import (
    KMatrixWitness,
    Variant,
    add_morphism_conditions,
    add_null_equation,
    add_unknown_times_known,
    morphism_unknowns,
    random_morphism,
    read_blocks,
    witness_unknowns,
)
from bondcat.gentle import GentleAlgebra
from bondcat.linsys import LinearSystem
from bondcat.poset import BasePoset, GradedElement
from bondcat.scalar import Field

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Square:
    """T: B -> C, T2: B' -> C', F: B -> B', G: C -> C' with F·T2 ≃ T·G through L."""

    T: BondMorphism
    T2: BondMorphism
    F: BondMorphism
    G: BondMorphism
    L: KMatrixWitness


def random_poset(rng: random.Random, size: int = 4) -> BasePoset:
    names = [f"p{index}" for index in range(size)]
    unpaired = names[:]
    rng.shuffle(unpaired)
    pairs = {}
    while len(unpaired) >= 2 and rng.random() < 0.7:
        left, right = unpaired.pop(), unpaired.pop()
        pairs[left] = right
    return BasePoset.from_pairs(names, pairs)


def stalk_object(poset: BasePoset, field: Field, element: GradedElement, size: int = 1) -> BondObject:
    """Band ``size`` at ``element`` and at its partner, no blocks."""
    partner = poset.involution_of(element)
    return BondObject.build(poset, field, {element: size, partner: size}, {})


def random_stalk(poset: BasePoset, field: Field, rng: random.Random, degrees: tuple[int, int] = (0, 2)) -> BondObject:
    element = GradedElement(rng.randrange(len(poset)), rng.randint(*degrees))
    return stalk_object(poset, field, element, rng.randint(1, 2) if rng.random() < 0.3 else 1)


def random_object(
    poset: BasePoset,
    field: Field,
    rng: random.Random,
    depth: int | None = None,
) -> BondObject:
    """Repeated cones of random morphisms, starting from a stalk."""
    depth = config.MAX_DEPTH if depth is None else depth
    current = random_stalk(poset, field, rng)
    for _ in range(rng.randint(1, max(1, depth))):
        other = random_stalk(poset, field, rng)
        if rng.random() < 0.5:
            current = cone(random_morphism(current, other, rng))
        else:
            current = cone(random_morphism(other, current, rng))
    return current


def random_morphism_between(poset: BasePoset, field: Field, rng: random.Random, depth: int | None = None) -> BondMorphism:
    source = random_object(poset, field, rng, depth)
    target = random_object(poset, field, rng, depth)
    return random_morphism(source, target, rng)


def random_composable(poset: BasePoset, field: Field, rng: random.Random, depth: int | None = None):
    B, C, D = (random_object(poset, field, rng, depth) for _ in range(3))
    return random_morphism(B, C, rng), random_morphism(C, D, rng)


def random_square(poset: BasePoset, field: Field, rng: random.Random, depth: int | None = None) -> Square:
    """Draws T2 and G, then solves for T, F and a K-paired L making the square commute up to ≃."""
    B, C, B2, C2 = (random_object(poset, field, rng, depth) for _ in range(4))
    T2 = random_morphism(B2, C2, rng)
    G = random_morphism(C, C2, rng)
    system = LinearSystem(field)
    T = morphism_unknowns(system, B, C)
    F = morphism_unknowns(system, B, B2)
    L = witness_unknowns(system, B, C2, Variant.PAIRED)
    add_morphism_conditions(system, "T", B, C, T)
    add_morphism_conditions(system, "F", B, B2, F)
    add_unknown_times_known(system, "square", F, T2.blocks, 1)
    add_unknown_times_known(system, "square", T, G.blocks, -1)
    add_null_equation(system, "square", B, C2, L)
    # the zero square always solves the system
    solution = system.solve_random(rng)
    LOGGER.debug("square system: %s unknowns", system.unknown_count)
    return Square(
        T=BondMorphism.build(B, C, read_blocks(system, solution, T)),
        T2=T2,
        F=BondMorphism.build(B, B2, read_blocks(system, solution, F)),
        G=G,
        L=KMatrixWitness.build(B, C2, read_blocks(system, solution, L), variant=Variant.PAIRED),
    )


def random_stalk_complex(algebra: GentleAlgebra, field: Field, rng: random.Random, degrees: tuple[int, int] = (0, 2)) -> ProjComplex:
    vertex = rng.choice(algebra.vertices)
    return stalk_complex(algebra, field, vertex, rng.randint(*degrees))


def random_complex(algebra: GentleAlgebra, field: Field, rng: random.Random, depth: int | None = None) -> ProjComplex:
    """Mapping cones of random chain maps between stalks and earlier cones."""
    depth = config.MAX_DEPTH if depth is None else depth
    current = random_stalk_complex(algebra, field, rng)
    for _ in range(rng.randint(1, max(1, depth))):
        other = random_stalk_complex(algebra, field, rng)
        if rng.random() < 0.5:
            current = mapping_cone(random_chain_map(current, other, rng)).cone
        else:
            current = mapping_cone(random_chain_map(other, current, rng)).cone
    return current


def random_chain_map_instance(
    algebra: GentleAlgebra,
    field: Field,
    rng: random.Random,
    depth: int | None = None,
    null_share: float = 0.4,
) -> ChainMap:
    """A random chain map; about ``null_share`` of them are null-homotopic by construction."""
    source = random_complex(algebra, field, rng, depth)
    target = random_complex(algebra, field, rng, depth)
    if rng.random() < null_share:
        return null_homotopic_map(source, target, random_homotopy(source, target, rng))
    return random_chain_map(source, target, rng)
