from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from bondcat.bands import BandLayout, BlockAssembler
from bondcat.errors import ComposeMismatch, ForeignElement, ShapeMismatch
from bondcat.poset import BasePoset, GradedElement
from bondcat.scalar import DenseMatrix, Field
from bondcat.schemas import ValidationReport

LOGGER = logging.getLogger(__name__)

Key = tuple[GradedElement, GradedElement]
Blocks = Mapping[Key, DenseMatrix]


def sorted_blocks(blocks: Mapping[Key, DenseMatrix]) -> dict[Key, DenseMatrix]:
    return {key: blocks[key] for key in sorted(blocks, key=lambda pair: (pair[0].key, pair[1].key))}


def _normalize_blocks(
    blocks: Mapping[Key, DenseMatrix],
    row_dims: Mapping[GradedElement, int],
    col_dims: Mapping[GradedElement, int],
) -> dict[Key, DenseMatrix]:
    """Drops empty and all-zero blocks; blocks of the wrong shape are kept for validation."""
    kept: dict[Key, DenseMatrix] = {}
    for (row, col), matrix in blocks.items():
        expected = (row_dims.get(row, 0), col_dims.get(col, 0))
        if matrix.shape == expected and (0 in expected or matrix.is_zero()):
            continue
        kept[(row, col)] = matrix
    return sorted_blocks(kept)


def _blocks_equal(left: Blocks, right: Blocks) -> bool:
    if set(left) != set(right):
        return False
    return all(left[key] == right[key] for key in left)


def block_product(left: Blocks, right: Blocks) -> dict[Key, DenseMatrix]:
    by_row: dict[GradedElement, list[tuple[GradedElement, DenseMatrix]]] = defaultdict(list)
    for (middle, col), matrix in right.items():
        by_row[middle].append((col, matrix))
    product: dict[Key, DenseMatrix] = {}
    for (row, middle), matrix in left.items():
        for col, other in by_row.get(middle, ()):
            term = matrix @ other
            key = (row, col)
            product[key] = product[key] + term if key in product else term
    return product


def block_sum(left: Blocks, right: Blocks, sign: int = 1) -> dict[Key, DenseMatrix]:
    total = dict(left)
    for key, matrix in right.items():
        term = matrix if sign == 1 else matrix.scale(sign)
        total[key] = total[key] + term if key in total else term
    return total


@dataclass(frozen=True, eq=False)
class BondObject:
    """A Bondarenko matrix: square block matrix over the graded poset with B^2 = 0."""

    poset: BasePoset
    field: Field
    dims: Mapping[GradedElement, int]
    blocks: Mapping[Key, DenseMatrix]

    @classmethod
    def build(
        cls,
        poset: BasePoset,
        field: Field,
        dims: Mapping[GradedElement, int],
        blocks: Mapping[Key, DenseMatrix] | None = None,
    ) -> "BondObject":
        clean_dims = {}
        for element in sorted(dims, key=lambda item: item.key):
            poset.check(element)
            size = int(dims[element])
            if size < 0:
                raise ShapeMismatch(f"negative band size at {poset.label(element)}")
            if size:
                clean_dims[element] = size
        clean_blocks = _normalize_blocks(blocks or {}, clean_dims, clean_dims)
        return cls(poset, field, MappingProxyType(clean_dims), MappingProxyType(clean_blocks))

    @classmethod
    def zero(cls, poset: BasePoset, field: Field) -> "BondObject":
        return cls.build(poset, field, {}, {})

    def dim(self, element: GradedElement) -> int:
        return self.dims.get(element, 0)

    @property
    def support(self) -> tuple[GradedElement, ...]:
        return tuple(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero_object(self) -> bool:
        return not self.dims

    def block(self, row: GradedElement, col: GradedElement) -> DenseMatrix:
        found = self.blocks.get((row, col))
        if found is not None:
            return found
        return DenseMatrix.zeros(self.field, self.dim(row), self.dim(col))

    @cached_property
    def degree_range(self) -> tuple[int, int] | None:
        if not self.dims:
            return None
        degrees = [element.degree for element in self.dims]
        return (min(degrees), max(degrees))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BondObject):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.field == other.field
            and dict(self.dims) == dict(other.dims)
            and _blocks_equal(self.blocks, other.blocks)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        dims = ", ".join(f"{self.poset.label(x)}:{n}" for x, n in self.dims.items())
        return f"BondObject({dims}; {len(self.blocks)} blocks)"


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Sparse block matrix whose rows follow ``source`` and columns follow ``target``."""

    source: BondObject
    target: BondObject
    blocks: Mapping[Key, DenseMatrix]

    @classmethod
    def build(cls, source: BondObject, target: BondObject, blocks: Mapping[Key, DenseMatrix] | None = None, **extra: Any):
        if source.poset != target.poset:
            raise ForeignElement("source and target live over different posets")
        clean = _normalize_blocks(blocks or {}, source.dims, target.dims)
        return cls(source, target, MappingProxyType(clean), **extra)

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def poset(self) -> BasePoset:
        return self.source.poset

    def block(self, row: GradedElement, col: GradedElement) -> DenseMatrix:
        found = self.blocks.get((row, col))
        if found is not None:
            return found
        return DenseMatrix.zeros(self.field, self.source.dim(row), self.target.dim(col))

    def is_zero(self) -> bool:
        return not self.blocks

    def _same_frame(self, other: "BlockMatrix") -> bool:
        return self.source == other.source and self.target == other.target

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockMatrix) or type(self) is not type(other):
            return NotImplemented
        return self._same_frame(other) and _blocks_equal(self.blocks, other.blocks)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        labels = ", ".join(f"({self.poset.label(r)},{self.poset.label(c)})" for r, c in self.blocks)
        return f"{type(self).__name__}({labels})"


class BondMorphism(BlockMatrix):
    """Block upper-triangular intertwiner T with TC = BT and sigma-tied diagonal."""


def _check_shapes(report: ValidationReport, matrix: BlockMatrix | BondObject, condition: str) -> bool:
    if isinstance(matrix, BondObject):
        poset, row_dims, col_dims = matrix.poset, matrix.dims, matrix.dims
    else:
        poset, row_dims, col_dims = matrix.poset, matrix.source.dims, matrix.target.dims
    ok = True
    for (row, col), block in matrix.blocks.items():
        expected = (row_dims.get(row, 0), col_dims.get(col, 0))
        if block.shape != expected:
            ok = False
            report.add(
                condition,
                f"({poset.label(row)},{poset.label(col)})",
                f"block is {block.shape[0]}x{block.shape[1]}, bands need {expected[0]}x{expected[1]}",
            )
    return ok


def _check_sigma_dims(report: ValidationReport, obj: BondObject) -> None:
    for element, size in obj.dims.items():
        partner = obj.poset.involution_of(element)
        if partner.base > element.base and obj.dim(partner) != size:
            report.add(
                "(ii)",
                f"{obj.poset.label(element)}~{obj.poset.label(partner)}",
                f"paired band sizes {size} and {obj.dim(partner)} differ",
            )


def validate_object(obj: BondObject, subject: str = "object") -> ValidationReport:
    report = ValidationReport(subject=subject)
    shapes_ok = _check_shapes(report, obj, "(i)")
    _check_sigma_dims(report, obj)
    if shapes_ok:
        for (row, col), matrix in sorted_blocks(block_product(obj.blocks, obj.blocks)).items():
            if not matrix.is_zero():
                report.add("(iii)", f"({obj.poset.label(row)},{obj.poset.label(col)})", "B^2 is not zero")
    return report


def validate_morphism(morphism: BlockMatrix, subject: str = "morphism") -> ValidationReport:
    report = ValidationReport(subject=subject)
    poset = morphism.poset
    if not _check_shapes(report, morphism, "(a)"):
        return report
    left = block_product(morphism.blocks, morphism.target.blocks)
    right = block_product(morphism.source.blocks, morphism.blocks)
    for key, matrix in sorted_blocks(block_sum(left, right, sign=-1)).items():
        if not matrix.is_zero():
            report.add("(b)", f"({poset.label(key[0])},{poset.label(key[1])})", "TC differs from BT")
    for row, col in morphism.blocks:
        if col < row:
            report.add("(c)", f"({poset.label(row)},{poset.label(col)})", "nonzero block below the diagonal")
    for element in morphism.source.support:
        partner = poset.involution_of(element)
        if partner.base <= element.base:
            continue
        if morphism.block(element, element) != morphism.block(partner, partner):
            report.add(
                "(d)",
                f"{poset.label(element)}~{poset.label(partner)}",
                "diagonal blocks at paired elements differ",
            )
    return report


def _require_same_frame(left: BlockMatrix, right: BlockMatrix) -> None:
    if not left._same_frame(right):
        raise ShapeMismatch("morphisms do not share source and target")


def compose(first: BondMorphism, second: BondMorphism) -> BondMorphism:
    """Diagrammatic composition: ``first`` then ``second``."""
    if first.target != second.source:
        raise ComposeMismatch("target of the first morphism is not the source of the second")
    return BondMorphism.build(first.source, second.target, block_product(first.blocks, second.blocks))


def identity(obj: BondObject) -> BondMorphism:
    blocks = {(x, x): DenseMatrix.identity(obj.field, size) for x, size in obj.dims.items()}
    return BondMorphism.build(obj, obj, blocks)


def zero_morphism(source: BondObject, target: BondObject) -> BondMorphism:
    return BondMorphism.build(source, target, {})


def add(left: BondMorphism, right: BondMorphism) -> BondMorphism:
    _require_same_frame(left, right)
    return BondMorphism.build(left.source, left.target, block_sum(left.blocks, right.blocks))


def subtract(left: BondMorphism, right: BondMorphism) -> BondMorphism:
    _require_same_frame(left, right)
    return BondMorphism.build(left.source, left.target, block_sum(left.blocks, right.blocks, sign=-1))


def scale(value: Any, morphism: BondMorphism) -> BondMorphism:
    blocks = {key: matrix.scale(value) for key, matrix in morphism.blocks.items()}
    return BondMorphism.build(morphism.source, morphism.target, blocks)


def negate(morphism: BondMorphism) -> BondMorphism:
    return scale(-1, morphism)


def _shift_blocks(blocks: Blocks, times: int, sign: int) -> dict[Key, DenseMatrix]:
    return {
        (row.shifted(-times), col.shifted(-times)): (matrix if sign == 1 else matrix.scale(sign))
        for (row, col), matrix in blocks.items()
    }


def shift_object(obj: BondObject, times: int = 1) -> BondObject:
    """[[B]] at [u,i] is B at [u,i+1], with every block negated once per shift."""
    dims = {element.shifted(-times): size for element, size in obj.dims.items()}
    sign = -1 if times % 2 else 1
    return BondObject.build(obj.poset, obj.field, dims, _shift_blocks(obj.blocks, times, sign))


def shift_morphism(morphism: BondMorphism, times: int = 1) -> BondMorphism:
    return BondMorphism.build(
        shift_object(morphism.source, times),
        shift_object(morphism.target, times),
        _shift_blocks(morphism.blocks, times, 1),
    )


def _sum_layout(objects: Iterable[BondObject]) -> BandLayout:
    objects = list(objects)
    elements = sorted({x for obj in objects for x in obj.dims}, key=lambda item: item.key)
    return BandLayout({x: tuple(obj.dim(x) for obj in objects) for x in elements})


def direct_sum(*objects: BondObject) -> BondObject:
    if not objects:
        raise ValueError("direct_sum needs at least one object")
    first = objects[0]
    if any(obj.poset != first.poset for obj in objects):
        raise ForeignElement("direct summands live over different posets")
    layout = _sum_layout(objects)
    assembler = BlockAssembler(first.field, layout, layout)
    for band, obj in enumerate(objects):
        for (row, col), matrix in obj.blocks.items():
            assembler.put(row, band, col, band, matrix)
    return BondObject.build(first.poset, first.field, layout.dims(), assembler.blocks())


def direct_sum_morphisms(*morphisms: BondMorphism) -> BondMorphism:
    if not morphisms:
        raise ValueError("direct_sum_morphisms needs at least one morphism")
    sources = [morphism.source for morphism in morphisms]
    targets = [morphism.target for morphism in morphisms]
    rows, cols = _sum_layout(sources), _sum_layout(targets)
    assembler = BlockAssembler(morphisms[0].field, rows, cols)
    for band, morphism in enumerate(morphisms):
        for (row, col), matrix in morphism.blocks.items():
            assembler.put(row, band, col, band, matrix)
    return BondMorphism.build(direct_sum(*sources), direct_sum(*targets), assembler.blocks())
