from __future__ import annotations

import heapq
import logging
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from bondcat.errors import DimensionMismatch, ShapeMismatch

LOGGER = logging.getLogger(__name__)

_GF_PATTERN = re.compile(r"^\s*(?:gf\s*[:(]\s*(\d+)\s*\)?)\s*$", re.IGNORECASE)
_MOD_PATTERN = re.compile(r"^\s*(-?\d+)\s*mod\s*(\d+)\s*$", re.IGNORECASE)


def _is_prime(value: int) -> bool:
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


@dataclass(frozen=True)
class Field:
    """Exact coefficient field: the rationals (modulus 0) or GF(p)."""

    modulus: int = 0

    def __post_init__(self) -> None:
        if self.modulus and not _is_prime(self.modulus):
            raise ValueError(f"field modulus {self.modulus} is not prime")

    @classmethod
    def parse(cls, text: str | None) -> "Field":
        raw = (text or "rational").strip().lower()
        if raw in {"rational", "q", "qq"}:
            return cls(0)
        match = _GF_PATTERN.match(raw)
        if match is None:
            raise ValueError(f"unknown field {text!r}; expected 'rational' or 'gf:p'")
        return cls(int(match.group(1)))

    @property
    def label(self) -> str:
        return f"gf:{self.modulus}" if self.modulus else "rational"

    @property
    def zero(self) -> Any:
        return 0 if self.modulus else Fraction(0)

    @property
    def one(self) -> Any:
        return 1 if self.modulus else Fraction(1)

    def coerce(self, value: Any) -> Any:
        if isinstance(value, bool) or isinstance(value, float):
            raise ValueError(f"inexact or boolean scalar {value!r} is not accepted")
        if isinstance(value, str):
            value = self._parse_scalar(value)
        if isinstance(value, (int, np.integer)):
            value = int(value)
            return value % self.modulus if self.modulus else Fraction(value)
        if isinstance(value, Fraction):
            if not self.modulus:
                return value
            denominator = value.denominator % self.modulus
            if denominator == 0:
                raise ValueError(f"{value} has no residue mod {self.modulus}")
            return (value.numerator * pow(denominator, -1, self.modulus)) % self.modulus
        raise ValueError(f"unsupported scalar {value!r}")

    def _parse_scalar(self, text: str) -> Any:
        match = _MOD_PATTERN.match(text)
        if match is not None:
            modulus = int(match.group(2))
            if self.modulus and modulus != self.modulus:
                raise ValueError(f"scalar {text!r} does not live in {self.label}")
            if not self.modulus:
                raise ValueError(f"scalar {text!r} needs a prime field")
            return int(match.group(1))
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed scalar {text!r}") from exc

    def add(self, left: Any, right: Any) -> Any:
        total = left + right
        return total % self.modulus if self.modulus else total

    def sub(self, left: Any, right: Any) -> Any:
        total = left - right
        return total % self.modulus if self.modulus else total

    def mul(self, left: Any, right: Any) -> Any:
        product = left * right
        return product % self.modulus if self.modulus else product

    def neg(self, value: Any) -> Any:
        return (-value) % self.modulus if self.modulus else -value

    def inv(self, value: Any) -> Any:
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.modulus:
            return pow(int(value), -1, self.modulus)
        return 1 / Fraction(value)

    def format(self, value: Any) -> int | str:
        if self.modulus:
            return int(value)
        value = Fraction(value)
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"

    def random_element(self, rng: random.Random, spread: int = 3) -> Any:
        if self.modulus:
            return rng.randrange(self.modulus)
        return Fraction(rng.randint(-spread, spread))

    def reduce_array(self, data: np.ndarray) -> np.ndarray:
        if self.modulus and data.size:
            return np.mod(data, self.modulus)
        return data


class DenseMatrix:
    """Read-only exact matrix; zero rows or zero columns are allowed."""

    __slots__ = ("field", "data")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, field: Field, data: np.ndarray) -> None:
        if data.ndim != 2:
            raise ShapeMismatch(f"matrix data must be 2-dimensional, got {data.ndim}")
        data = data.astype(object, copy=False)
        data.flags.writeable = False
        self.field = field
        self.data = data

    @classmethod
    def from_rows(
        cls,
        field: Field,
        rows: Sequence[Sequence[Any]],
        shape: tuple[int, int] | None = None,
    ) -> "DenseMatrix":
        rows = [list(row) for row in rows]
        if not rows:
            if shape is None:
                raise ShapeMismatch("an empty matrix needs an explicit shape")
            if shape[0] != 0 and shape[1] != 0:
                raise ShapeMismatch(f"no entries given for a {shape[0]}x{shape[1]} matrix")
            return cls.zeros(field, *shape)
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeMismatch("ragged matrix rows")
        if shape is not None and (len(rows), width) != tuple(shape) and width:
            raise ShapeMismatch(f"expected a {shape[0]}x{shape[1]} matrix, got {len(rows)}x{width}")
        if width == 0:
            return cls.zeros(field, len(rows), 0 if shape is None else shape[1])
        data = np.empty((len(rows), width), dtype=object)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                data[i, j] = field.coerce(value)
        return cls(field, data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "DenseMatrix":
        return cls(field, np.full((rows, cols), field.zero, dtype=object))

    @classmethod
    def identity(cls, field: Field, size: int) -> "DenseMatrix":
        data = np.full((size, size), field.zero, dtype=object)
        for index in range(size):
            data[index, index] = field.one
        return cls(field, data)

    @classmethod
    def scalar(cls, field: Field, value: Any) -> "DenseMatrix":
        return cls.from_rows(field, [[value]])

    @classmethod
    def random(
        cls,
        field: Field,
        rows: int,
        cols: int,
        rng: random.Random,
        density: float = 1.0,
    ) -> "DenseMatrix":
        data = np.full((rows, cols), field.zero, dtype=object)
        for i in range(rows):
            for j in range(cols):
                if rng.random() < density:
                    data[i, j] = field.random_element(rng)
        return cls(field, data)

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.data.shape[0]), int(self.data.shape[1]))

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def entry(self, row: int, col: int) -> Any:
        return self.data[row, col]

    def is_zero(self) -> bool:
        return not any(value != 0 for value in self.data.flat)

    def formatted_rows(self) -> list[list[int | str]]:
        return [[self.field.format(value) for value in row] for row in self.data]

    def scale(self, value: Any) -> "DenseMatrix":
        factor = self.field.coerce(value)
        return DenseMatrix(self.field, self.field.reduce_array(self.data * factor))

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same_shape(other, "+")
        return DenseMatrix(self.field, self.field.reduce_array(self.data + other.data))

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same_shape(other, "-")
        return DenseMatrix(self.field, self.field.reduce_array(self.data - other.data))

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix(self.field, self.field.reduce_array(-self.data))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(left == right for left, right in zip(self.data.flat, other.data.flat))

    def __repr__(self) -> str:
        return f"DenseMatrix({self.formatted_rows()!r}, shape={self.shape})"

    def _check_same_shape(self, other: "DenseMatrix", op: str) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot apply {op} to {self.shape} and {other.shape} matrices")


def mat_mul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.cols == 0 or a.rows == 0 or b.cols == 0:
        return DenseMatrix.zeros(a.field, a.rows, b.cols)
    product = np.dot(a.data, b.data)
    return DenseMatrix(a.field, a.field.reduce_array(np.asarray(product, dtype=object)))


Equation = tuple[Mapping[int, Any], Any]


def solve_sparse(
    equations: Iterable[Equation],
    unknown_count: int,
    field: Field,
    free_value: Callable[[int], Any] | None = None,
) -> list[Any] | None:
    """Exact incremental elimination; returns one solution or None if infeasible.

    Each equation reads sum(coef * x[var]) = rhs. Free unknowns are set to zero,
    or to ``free_value(var)`` when a callback is given.
    """
    zero = field.zero
    pivot_of: dict[int, int] = {}
    reduced: list[tuple[int, dict[int, Any], Any]] = []
    seen_equations = 0

    for coefficients, rhs in equations:
        seen_equations += 1
        row = {var: field.coerce(coef) for var, coef in coefficients.items()}
        row = {var: coef for var, coef in row.items() if coef != 0}
        value = field.coerce(rhs)

        pending = [pivot_of[var] for var in row if var in pivot_of]
        heapq.heapify(pending)
        done: set[int] = set()
        while pending:
            index = heapq.heappop(pending)
            if index in done:
                continue
            done.add(index)
            pivot_col, pivot_row, pivot_rhs = reduced[index]
            factor = row.get(pivot_col)
            if factor is None:
                continue
            for var, coef in pivot_row.items():
                updated = field.sub(row.get(var, zero), field.mul(factor, coef))
                if updated == 0:
                    row.pop(var, None)
                    continue
                row[var] = updated
                if var != pivot_col and var in pivot_of and pivot_of[var] not in done:
                    heapq.heappush(pending, pivot_of[var])
            value = field.sub(value, field.mul(factor, pivot_rhs))

        if not row:
            if value != 0:
                LOGGER.debug("infeasible after %s equations", seen_equations)
                return None
            continue
        pivot_col = min(row)
        scale = field.inv(row[pivot_col])
        normalized = {var: field.mul(coef, scale) for var, coef in row.items()}
        pivot_of[pivot_col] = len(reduced)
        reduced.append((pivot_col, normalized, field.mul(value, scale)))

    solution = [zero] * unknown_count
    for var in range(unknown_count):
        if var not in pivot_of and free_value is not None:
            solution[var] = field.coerce(free_value(var))
    for pivot_col, row, rhs in reversed(reduced):
        total = rhs
        for var, coef in row.items():
            if var != pivot_col:
                total = field.sub(total, field.mul(coef, solution[var]))
        solution[pivot_col] = total
    LOGGER.debug(
        "solved %s equations in %s unknowns (rank %s)", seen_equations, unknown_count, len(reduced)
    )
    return solution


def solve_affine(
    system: Sequence[tuple[Sequence[Any], Any]],
    unknown_count: int,
    field: Field,
) -> list[Any] | None:
    equations: list[Equation] = []
    for position, (coefficients, rhs) in enumerate(system):
        if len(coefficients) != unknown_count:
            raise DimensionMismatch(
                f"equation {position} has {len(coefficients)} coefficients, expected {unknown_count}"
            )
        equations.append(({var: coef for var, coef in enumerate(coefficients) if coef != 0}, rhs))
    return solve_sparse(equations, unknown_count, field)
