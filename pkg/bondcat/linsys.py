from __future__ import annotations

import logging
import random
from collections import defaultdict
from typing import Any, Callable, Hashable

import numpy as np

from bondcat.errors import DimensionMismatch
from bondcat.scalar import DenseMatrix, Field, solve_sparse

LOGGER = logging.getLogger(__name__)


class LinearSystem:
    """Matrix equations in block unknowns, collected entrywise.

    Every entry (key, i, j) stands for the equation
    ``sum(coef * unknown) + constant = 0``. Unknown blocks are numpy arrays of
    variable ids; passing the same id array twice aliases two blocks.
    """

    def __init__(self, field: Field) -> None:
        self.field = field
        self._count = 0
        self._coefficients: dict[tuple[Hashable, int, int], dict[int, Any]] = defaultdict(dict)
        self._constants: dict[tuple[Hashable, int, int], Any] = {}

    @property
    def unknown_count(self) -> int:
        return self._count

    @property
    def equation_count(self) -> int:
        return len(set(self._coefficients) | set(self._constants))

    def unknowns(self, rows: int, cols: int) -> np.ndarray:
        ids = np.arange(self._count, self._count + rows * cols, dtype=np.int64).reshape(rows, cols)
        self._count += rows * cols
        return ids

    def _bump(self, entry: tuple[Hashable, int, int], var: int, coef: Any) -> None:
        row = self._coefficients[entry]
        updated = self.field.add(row.get(var, self.field.zero), coef)
        if updated == 0:
            row.pop(var, None)
        else:
            row[var] = updated

    def add_constant(self, key: Hashable, matrix: DenseMatrix, sign: int = 1) -> None:
        factor = self.field.coerce(sign)
        for (i, j), value in np.ndenumerate(matrix.data):
            if value == 0:
                continue
            entry = (key, i, j)
            self._constants[entry] = self.field.add(
                self._constants.get(entry, self.field.zero), self.field.mul(factor, value)
            )

    def add_unknowns(self, key: Hashable, ids: np.ndarray, sign: int = 1) -> None:
        factor = self.field.coerce(sign)
        for (i, j), var in np.ndenumerate(ids):
            self._bump((key, i, j), int(var), factor)

    def add_left_product(self, key: Hashable, known: DenseMatrix, ids: np.ndarray, sign: int = 1) -> None:
        """Adds ``sign * known @ V`` to the equations under ``key``."""
        if known.cols != ids.shape[0]:
            raise DimensionMismatch(f"cannot multiply {known.shape} by unknown block {ids.shape}")
        factor = self.field.coerce(sign)
        for (i, k), value in np.ndenumerate(known.data):
            if value == 0:
                continue
            coef = self.field.mul(factor, value)
            for j in range(ids.shape[1]):
                self._bump((key, i, j), int(ids[k, j]), coef)

    def add_right_product(self, key: Hashable, ids: np.ndarray, known: DenseMatrix, sign: int = 1) -> None:
        """Adds ``sign * V @ known`` to the equations under ``key``."""
        if ids.shape[1] != known.rows:
            raise DimensionMismatch(f"cannot multiply unknown block {ids.shape} by {known.shape}")
        factor = self.field.coerce(sign)
        for (k, j), value in np.ndenumerate(known.data):
            if value == 0:
                continue
            coef = self.field.mul(factor, value)
            for i in range(ids.shape[0]):
                self._bump((key, i, j), int(ids[i, k]), coef)

    def solve(self, free_value: Callable[[int], Any] | None = None) -> list[Any] | None:
        entries = set(self._coefficients) | set(self._constants)
        equations = []
        for entry in sorted(entries, key=repr):
            constant = self._constants.get(entry, self.field.zero)
            equations.append((self._coefficients.get(entry, {}), self.field.neg(constant)))
        LOGGER.debug("solving %s equations in %s unknowns", len(equations), self._count)
        return solve_sparse(equations, self._count, self.field, free_value=free_value)

    def solve_random(self, rng: random.Random) -> list[Any] | None:
        return self.solve(free_value=lambda _var: self.field.random_element(rng))

    def read(self, solution: list[Any], ids: np.ndarray) -> DenseMatrix:
        data = np.full(ids.shape, self.field.zero, dtype=object)
        for (i, j), var in np.ndenumerate(ids):
            data[i, j] = solution[int(var)]
        return DenseMatrix(self.field, data)
