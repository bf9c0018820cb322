from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Mapping, Sequence

import numpy as np

from bondcat.errors import ShapeMismatch
from bondcat.poset import GradedElement
from bondcat.scalar import DenseMatrix, Field


@dataclass(frozen=True)
class BandLayout:
    """Ordered bands inside each graded element (e.g. [B(u,i+1), C(u,i)] for a cone)."""

    bands: Mapping[GradedElement, Sequence[int]]

    def band_sizes(self, element: GradedElement) -> Sequence[int]:
        return self.bands.get(element, ())

    def band(self, element: GradedElement, index: int) -> int:
        sizes = self.band_sizes(element)
        return sizes[index] if index < len(sizes) else 0

    def size(self, element: GradedElement) -> int:
        return sum(self.band_sizes(element))

    def offset(self, element: GradedElement, index: int) -> int:
        return sum(self.band_sizes(element)[:index])

    def dims(self) -> dict[GradedElement, int]:
        return {element: self.size(element) for element in self.bands if self.size(element)}


@dataclass
class BlockAssembler:
    """Accumulates sub-blocks into the band structure of two layouts."""

    field: Field
    rows: BandLayout
    cols: BandLayout
    _data: dict[tuple[GradedElement, GradedElement], np.ndarray] = dataclass_field(default_factory=dict)

    def put(
        self,
        row: GradedElement,
        row_band: int,
        col: GradedElement,
        col_band: int,
        matrix: DenseMatrix,
    ) -> None:
        height = self.rows.band(row, row_band)
        width = self.cols.band(col, col_band)
        if matrix.shape != (height, width):
            raise ShapeMismatch(
                f"sub-block {matrix.shape} does not fit band ({height}, {width}) at {row}, {col}"
            )
        if height == 0 or width == 0 or matrix.is_zero():
            return
        target = self._data.get((row, col))
        if target is None:
            target = np.full((self.rows.size(row), self.cols.size(col)), self.field.zero, dtype=object)
            self._data[(row, col)] = target
        r0 = self.rows.offset(row, row_band)
        c0 = self.cols.offset(col, col_band)
        window = target[r0 : r0 + height, c0 : c0 + width]
        target[r0 : r0 + height, c0 : c0 + width] = self.field.reduce_array(window + matrix.data)

    def put_identity(self, row: GradedElement, row_band: int, col: GradedElement, col_band: int, sign: int = 1) -> None:
        size = self.rows.band(row, row_band)
        if size != self.cols.band(col, col_band):
            raise ShapeMismatch(f"identity band mismatch at {row}, {col}")
        self.put(row, row_band, col, col_band, DenseMatrix.identity(self.field, size).scale(sign))

    def blocks(self) -> dict[tuple[GradedElement, GradedElement], DenseMatrix]:
        return {key: DenseMatrix(self.field, data) for key, data in self._data.items()}
