"""Exhaustive GF(2) decision for S ≃ T, independent of the elimination-based solver.

Each free witness entry (σ-tied entries count once) is a generator g with basis
contribution M_g = B E_g + E_g C; the instance is feasible iff some subset of the
M_g sums to S - T.
"""
from __future__ import annotations

import itertools
import logging

import numpy as np

from bondcat.category import BondMorphism, BondObject
from bondcat.equiv import Variant, allowed
from bondcat.poset import GradedElement

LOGGER = logging.getLogger(__name__)

MAX_GENERATORS = 16


def _offsets(obj: BondObject) -> dict[GradedElement, int]:
    offsets, position = {}, 0
    for element in sorted(obj.dims, key=lambda item: item.key):
        offsets[element] = position
        position += obj.dims[element]
    return offsets


def _dense(blocks, rows: dict[GradedElement, int], cols: dict[GradedElement, int], shape) -> np.ndarray:
    data = np.zeros(shape, dtype=np.int64)
    for (row, col), matrix in blocks.items():
        r0, c0 = rows[row], cols[col]
        data[r0 : r0 + matrix.rows, c0 : c0 + matrix.cols] = np.asarray(matrix.data, dtype=np.int64)
    return data % 2


def _generators(source: BondObject, target: BondObject, variant: Variant):
    """Groups of (row, col, i, j) entries that share one witness unknown."""
    poset = source.poset
    groups: dict[tuple, list[tuple[GradedElement, GradedElement, int, int]]] = {}
    for row in source.dims:
        for col in target.dims:
            if not allowed(row, col, variant):
                continue
            tie = row == col or (variant is Variant.PAIRED and row.base == col.base and col.degree == row.degree - 1)
            for i in range(source.dims[row]):
                for j in range(target.dims[col]):
                    key = (row, col, i, j)
                    if tie:
                        partner = (poset.involution_of(row), poset.involution_of(col), i, j)
                        key = min(key, partner, key=repr)
                    groups.setdefault(key, []).append((row, col, i, j))
    return [groups[key] for key in sorted(groups, key=repr)]


def generator_count(S: BondMorphism, variant: Variant | str = Variant.K) -> int:
    return len(_generators(S.source, S.target, Variant.parse(variant)))


def brute_force_equivalent(S: BondMorphism, T: BondMorphism, variant: Variant | str = Variant.K) -> bool:
    if S.field.modulus != 2:
        raise ValueError("the oracle works over gf:2 only")
    variant = Variant.parse(variant)
    source, target = S.source, S.target
    rows, cols = _offsets(source), _offsets(target)
    shape = (source.total_dim, target.total_dim)
    B = _dense(source.blocks, rows, rows, (shape[0], shape[0]))
    C = _dense(target.blocks, cols, cols, (shape[1], shape[1]))
    D = (_dense(S.blocks, rows, cols, shape) - _dense(T.blocks, rows, cols, shape)) % 2

    generators = _generators(source, target, variant)
    if len(generators) > MAX_GENERATORS:
        raise ValueError(f"{len(generators)} generators exceed the enumeration limit {MAX_GENERATORS}")
    basis = []
    for group in generators:
        unit = np.zeros(shape, dtype=np.int64)
        for row, col, i, j in group:
            unit[rows[row] + i, cols[col] + j] = 1
        basis.append(((B @ unit + unit @ C) % 2).ravel())
    if not basis:
        return not D.any()
    stacked = np.array(basis, dtype=np.int64)
    choices = np.array(list(itertools.product((0, 1), repeat=len(basis))), dtype=np.int64)
    reachable = (choices @ stacked) % 2
    found = bool((reachable == D.ravel()).all(axis=1).any())
    LOGGER.debug("oracle enumerated %s combinations: %s", len(choices), found)
    return found
