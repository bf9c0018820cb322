from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Mapping

import numpy as np

from bondcat.category import (
    BlockMatrix,
    BondMorphism,
    BondObject,
    Key,
    sorted_blocks,
    block_product,
    block_sum,
    compose,
    identity,
    validate_morphism,
    zero_morphism,
)
from bondcat.errors import ShapeMismatch, WitnessInvalid
from bondcat.linsys import LinearSystem
from bondcat.poset import GradedElement
from bondcat.schemas import ValidationReport

LOGGER = logging.getLogger(__name__)

UnknownBlocks = dict[Key, np.ndarray]


class Variant(str, Enum):
    K = "K"
    KAPPA = "kappa"
    PAIRED = "K-paired"

    @classmethod
    def parse(cls, value: "str | Variant") -> "Variant":
        if isinstance(value, Variant):
            return value
        lowered = value.strip().lower()
        for member in cls:
            if member.value.lower() == lowered:
                return member
        if lowered in {"κ", "k-kappa"}:
            return cls.KAPPA
        raise ValueError(f"unknown witness variant {value!r}")


@dataclass(frozen=True, eq=False)
class KMatrixWitness(BlockMatrix):
    """Matrix L over (B, C) certifying S - T = BL + LC."""

    variant: Variant = Variant.K


@dataclass(frozen=True, eq=False)
class IsoCertificate:
    inverse: BondMorphism
    left_witness: KMatrixWitness
    right_witness: KMatrixWitness


def allowed(row: GradedElement, col: GradedElement, variant: Variant) -> bool:
    """Whether a witness block at (row, col) may be nonzero."""
    i, j = row.degree, col.degree
    if variant is Variant.KAPPA:
        return not (i > j or (i == j and row.base > col.base))
    return not (i > j + 1 or (i == j + 1 and row.base > col.base))


def _paired_lowering(row: GradedElement, col: GradedElement) -> bool:
    return row.base == col.base and col.degree == row.degree - 1


def witness_unknowns(system: LinearSystem, source: BondObject, target: BondObject, variant: Variant) -> UnknownBlocks:
    poset = source.poset
    unknowns: UnknownBlocks = {}
    for row in source.support:
        for col in target.support:
            if not allowed(row, col, variant):
                continue
            shape = (source.dim(row), target.dim(col))
            partner_key = None
            if row == col or (variant is Variant.PAIRED and _paired_lowering(row, col)):
                partner_key = (poset.involution_of(row), poset.involution_of(col))
            shared = unknowns.get(partner_key) if partner_key is not None else None
            if shared is not None and shared.shape == shape:
                unknowns[(row, col)] = shared
            else:
                unknowns[(row, col)] = system.unknowns(*shape)
    return unknowns


def morphism_unknowns(system: LinearSystem, source: BondObject, target: BondObject) -> UnknownBlocks:
    poset = source.poset
    unknowns: UnknownBlocks = {}
    for row in source.support:
        for col in target.support:
            if col < row:
                continue
            shape = (source.dim(row), target.dim(col))
            shared = None
            if row == col:
                partner = poset.involution_of(row)
                shared = unknowns.get((partner, partner))
            if shared is not None and shared.shape == shape:
                unknowns[(row, col)] = shared
            else:
                unknowns[(row, col)] = system.unknowns(*shape)
    return unknowns


def add_known(system: LinearSystem, tag: str, known: Mapping[Key, object], sign: int = 1) -> None:
    for (row, col), matrix in known.items():
        system.add_constant((tag, row, col), matrix, sign)


def add_unknown(system: LinearSystem, tag: str, unknown: UnknownBlocks, sign: int = 1) -> None:
    for (row, col), ids in unknown.items():
        system.add_unknowns((tag, row, col), ids, sign)


def add_known_times_unknown(
    system: LinearSystem, tag: str, known: Mapping[Key, object], unknown: UnknownBlocks, sign: int = 1
) -> None:
    by_row: dict[GradedElement, list[tuple[GradedElement, np.ndarray]]] = {}
    for (middle, col), ids in unknown.items():
        by_row.setdefault(middle, []).append((col, ids))
    for (row, middle), matrix in known.items():
        for col, ids in by_row.get(middle, ()):
            system.add_left_product((tag, row, col), matrix, ids, sign)


def add_unknown_times_known(
    system: LinearSystem, tag: str, unknown: UnknownBlocks, known: Mapping[Key, object], sign: int = 1
) -> None:
    by_row: dict[GradedElement, list[tuple[GradedElement, object]]] = {}
    for (middle, col), matrix in known.items():
        by_row.setdefault(middle, []).append((col, matrix))
    for (row, middle), ids in unknown.items():
        for col, matrix in by_row.get(middle, ()):
            system.add_right_product((tag, row, col), ids, matrix, sign)


def add_morphism_conditions(
    system: LinearSystem, tag: str, source: BondObject, target: BondObject, unknown: UnknownBlocks
) -> None:
    """Intertwining T C - B T = 0 for an unknown morphism T: source -> target."""
    add_unknown_times_known(system, tag, unknown, target.blocks, 1)
    add_known_times_unknown(system, tag, source.blocks, unknown, -1)


def add_null_equation(
    system: LinearSystem,
    tag: str,
    source: BondObject,
    target: BondObject,
    witness: UnknownBlocks,
    sign: int = -1,
) -> None:
    """Adds ``sign * (B L + L C)`` under ``tag``."""
    add_known_times_unknown(system, tag, source.blocks, witness, sign)
    add_unknown_times_known(system, tag, witness, target.blocks, sign)


def read_blocks(system: LinearSystem, solution: list, unknown: UnknownBlocks) -> dict[Key, object]:
    return {key: system.read(solution, ids) for key, ids in unknown.items()}


def validate_witness(L: KMatrixWitness) -> ValidationReport:
    """Conditions on L alone: shapes, the allowed region and the sigma ties."""
    variant = Variant.parse(L.variant)
    report = ValidationReport(subject=f"witness ({variant.value})")
    poset = L.poset
    shapes_ok = True
    for (row, col), matrix in L.blocks.items():
        expected = (L.source.dim(row), L.target.dim(col))
        if matrix.shape != expected:
            shapes_ok = False
            report.add("(i)", f"({poset.label(row)},{poset.label(col)})", f"block shape {matrix.shape} != {expected}")
    for row, col in L.blocks:
        if not allowed(row, col, variant):
            report.add("(iii)", f"({poset.label(row)},{poset.label(col)})", "block outside the allowed region")
    if not shapes_ok:
        return report
    elements = sorted(set(L.source.support) | set(L.target.support), key=lambda item: item.key)
    for element in elements:
        partner = poset.involution_of(element)
        if partner.base <= element.base:
            continue
        if L.block(element, element) != L.block(partner, partner):
            report.add("(iv)", f"{poset.label(element)}~{poset.label(partner)}", "paired diagonal blocks differ")
        if variant is Variant.PAIRED:
            lower, partner_lower = element.shifted(-1), partner.shifted(-1)
            if L.block(element, lower) != L.block(partner, partner_lower):
                report.add(
                    "(iv')",
                    f"{poset.label(element)}~{poset.label(partner)}",
                    "paired degree-lowering blocks differ",
                )
    return report


def check_witness(S: BondMorphism, T: BondMorphism, L: KMatrixWitness) -> ValidationReport:
    if S.source != T.source or S.target != T.target:
        raise ShapeMismatch("S and T are not parallel")
    if L.source != S.source or L.target != S.target:
        raise ShapeMismatch("witness is not over the frame of S and T")
    report = validate_witness(L)
    if any(violation.condition == "(i)" for violation in report.violations):
        return report
    residual = block_sum(S.blocks, T.blocks, sign=-1)
    residual = block_sum(residual, block_product(L.source.blocks, L.blocks), sign=-1)
    residual = block_sum(residual, block_product(L.blocks, L.target.blocks), sign=-1)
    for (row, col), matrix in sorted_blocks(residual).items():
        if not matrix.is_zero():
            report.add("(ii)", f"({L.poset.label(row)},{L.poset.label(col)})", "S - T differs from BL + LC")
    return report


def find_witness(S: BondMorphism, T: BondMorphism, variant: Variant | str = Variant.K) -> KMatrixWitness | None:
    variant = Variant.parse(variant)
    if S.source != T.source or S.target != T.target:
        raise ShapeMismatch("S and T are not parallel")
    source, target = S.source, S.target
    system = LinearSystem(S.field)
    unknown = witness_unknowns(system, source, target, variant)
    add_known(system, "eq", S.blocks, 1)
    add_known(system, "eq", T.blocks, -1)
    add_null_equation(system, "eq", source, target, unknown)
    LOGGER.debug("witness system: %s unknowns, %s equations", system.unknown_count, system.equation_count)
    solution = system.solve()
    if solution is None:
        LOGGER.debug("no %s witness exists", variant.value)
        return None
    witness = KMatrixWitness.build(source, target, read_blocks(system, solution, unknown), variant=variant)
    report = check_witness(S, T, witness)
    if not report.valid:
        raise WitnessInvalid(f"solver produced an invalid witness: {report.violations[0]}")
    return witness


def is_iso_in_quotient(T: BondMorphism) -> IsoCertificate | None:
    source, target = T.source, T.target
    system = LinearSystem(T.field)
    inverse = morphism_unknowns(system, target, source)
    left = witness_unknowns(system, source, source, Variant.K)
    right = witness_unknowns(system, target, target, Variant.K)
    add_morphism_conditions(system, "inverse", target, source, inverse)

    add_known_times_unknown(system, "left", T.blocks, inverse, 1)
    add_known(system, "left", identity(source).blocks, -1)
    add_null_equation(system, "left", source, source, left)

    add_unknown_times_known(system, "right", inverse, T.blocks, 1)
    add_known(system, "right", identity(target).blocks, -1)
    add_null_equation(system, "right", target, target, right)

    solution = system.solve()
    if solution is None:
        LOGGER.info("morphism is not invertible in the quotient")
        return None
    certificate = IsoCertificate(
        inverse=BondMorphism.build(target, source, read_blocks(system, solution, inverse)),
        left_witness=KMatrixWitness.build(source, source, read_blocks(system, solution, left), variant=Variant.K),
        right_witness=KMatrixWitness.build(target, target, read_blocks(system, solution, right), variant=Variant.K),
    )
    if not verify_iso_certificate(T, certificate):
        raise WitnessInvalid("solver produced an invalid isomorphism certificate")
    return certificate


def verify_iso_certificate(T: BondMorphism, certificate: IsoCertificate) -> bool:
    if not validate_morphism(certificate.inverse).valid:
        return False
    left = check_witness(compose(T, certificate.inverse), identity(T.source), certificate.left_witness)
    right = check_witness(compose(certificate.inverse, T), identity(T.target), certificate.right_witness)
    return left.valid and right.valid


def witness_product(
    first: BlockMatrix,
    second: BlockMatrix,
    variant: Variant,
) -> KMatrixWitness:
    return KMatrixWitness.build(first.source, second.target, block_product(first.blocks, second.blocks), variant=variant)


def ideal_witness(
    F: BondMorphism,
    L: KMatrixWitness,
    other: BondMorphism,
    side: Literal["right", "left"] = "right",
) -> tuple[KMatrixWitness, bool]:
    """Witness for F·G ≃ 0 (side="right") or H·F ≃ 0 (side="left").

    Returns the witness and whether it is the plain product L·G (resp. H·L).
    """
    variant = Variant.parse(L.variant)
    if not check_witness(F, zero_morphism(F.source, F.target), L).valid:
        raise WitnessInvalid("L does not certify F ≃ 0")
    if side == "right":
        product = compose(F, other)
        candidate = witness_product(L, other, variant)
    else:
        product = compose(other, F)
        candidate = witness_product(other, L, variant)
    zero = zero_morphism(product.source, product.target)
    report = check_witness(product, zero, candidate)
    if report.valid:
        return candidate, True
    if any(violation.condition not in {"(iv)", "(iv')"} for violation in report.violations):
        raise WitnessInvalid(f"product witness fails: {report.violations[0]}")
    LOGGER.debug("product witness breaks the paired-diagonal condition; re-solving")
    solved = find_witness(product, zero, variant)
    if solved is None:
        raise WitnessInvalid("no witness for the composite exists")
    return solved, False


def is_ideal_stable(
    F: BondMorphism,
    L: KMatrixWitness,
    other: BondMorphism,
    side: Literal["right", "left"] = "right",
) -> KMatrixWitness:
    return ideal_witness(F, L, other, side)[0]


def random_morphism(source: BondObject, target: BondObject, rng: random.Random) -> BondMorphism:
    system = LinearSystem(source.field)
    unknown = morphism_unknowns(system, source, target)
    add_morphism_conditions(system, "morphism", source, target, unknown)
    solution = system.solve_random(rng)
    if solution is None:
        return zero_morphism(source, target)
    return BondMorphism.build(source, target, read_blocks(system, solution, unknown))


def random_null_morphism(
    source: BondObject,
    target: BondObject,
    rng: random.Random,
    variant: Variant = Variant.PAIRED,
) -> tuple[BondMorphism, KMatrixWitness]:
    """A random morphism N with a witness L for N ≃ 0."""
    system = LinearSystem(source.field)
    morphism = morphism_unknowns(system, source, target)
    witness = witness_unknowns(system, source, target, variant)
    add_unknown(system, "null", morphism, 1)
    add_null_equation(system, "null", source, target, witness)
    solution = system.solve_random(rng)
    if solution is None:
        return zero_morphism(source, target), KMatrixWitness.build(source, target, {}, variant=variant)
    return (
        BondMorphism.build(source, target, read_blocks(system, solution, morphism)),
        KMatrixWitness.build(source, target, read_blocks(system, solution, witness), variant=variant),
    )
