"""Bounded complexes of indecomposable projectives over a gentle algebra.

Differentials and maps are formal sums of path maps: the block A_{w,j} has one
row per summand P_{s(w)} of P^j and one column per summand P_{t(w)} of the
next term. Products follow the diagrammatic order, ``f·g`` is f then g.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, ClassVar, Iterable, Mapping

import numpy as np

from bondcat.errors import ComposeMismatch, ShapeMismatch, WitnessInvalid
from bondcat.gentle import GentleAlgebra, Path
from bondcat.linsys import LinearSystem
from bondcat.scalar import DenseMatrix, Field
from bondcat.schemas import ValidationReport

LOGGER = logging.getLogger(__name__)

PathFamily = Mapping[Path, DenseMatrix]


def _path_order(algebra: GentleAlgebra):
    position = {path: index for index, path in enumerate(algebra.paths)}
    return lambda path: position.get(path, len(position))


def formal_product(algebra: GentleAlgebra, left: PathFamily, right: PathFamily) -> dict[Path, DenseMatrix]:
    """(left·right)_w = sum over w = w1 w2 of left_{w1} right_{w2}."""
    product: dict[Path, DenseMatrix] = {}
    for first, matrix in left.items():
        for second, other in right.items():
            if first.target != second.source:
                continue
            path = algebra.path_mul(first, second)
            if path is None:
                continue
            term = matrix @ other
            product[path] = product[path] + term if path in product else term
    return product


def _family_sum(left: PathFamily, right: PathFamily, sign: int = 1) -> dict[Path, DenseMatrix]:
    total = dict(left)
    for path, matrix in right.items():
        term = matrix if sign == 1 else matrix.scale(sign)
        total[path] = total[path] + term if path in total else term
    return total


def _block_2x2(field: Field, rows: tuple[int, int], cols: tuple[int, int], parts: Mapping[tuple[int, int], DenseMatrix]) -> DenseMatrix:
    data = np.full((sum(rows), sum(cols)), field.zero, dtype=object)
    for (i, j), matrix in parts.items():
        if matrix.shape != (rows[i], cols[j]):
            raise ShapeMismatch(f"part {(i, j)} is {matrix.shape}, expected {(rows[i], cols[j])}")
        r0, c0 = sum(rows[:i]), sum(cols[:j])
        data[r0 : r0 + rows[i], c0 : c0 + cols[j]] = matrix.data
    return DenseMatrix(field, data)


@dataclass(frozen=True, eq=False)
class ProjComplex:
    algebra: GentleAlgebra
    field: Field
    multiplicities: Mapping[tuple[str, int], int]
    differentials: Mapping[int, PathFamily]

    @classmethod
    def build(
        cls,
        algebra: GentleAlgebra,
        field: Field,
        multiplicities: Mapping[tuple[str, int], int],
        differentials: Mapping[int, PathFamily] | None = None,
    ) -> "ProjComplex":
        clean: dict[tuple[str, int], int] = {}
        for (vertex, degree), count in sorted(multiplicities.items(), key=lambda item: (item[0][1], item[0][0])):
            if vertex not in algebra.vertices:
                raise ValueError(f"unknown vertex {vertex!r}")
            if count < 0:
                raise ShapeMismatch(f"negative multiplicity at ({vertex}, {degree})")
            if count:
                clean[(vertex, int(degree))] = int(count)
        frame = cls(algebra, field, MappingProxyType(clean), MappingProxyType({}))
        families = {
            degree: frame._normalize(family, lambda path, j=degree: frame.differential_shape(j, path))
            for degree, family in (differentials or {}).items()
        }
        families = {degree: family for degree, family in sorted(families.items()) if family}
        return cls(algebra, field, MappingProxyType(clean), MappingProxyType(families))

    @classmethod
    def zero(cls, algebra: GentleAlgebra, field: Field) -> "ProjComplex":
        return cls.build(algebra, field, {}, {})

    def _normalize(self, family: PathFamily, shape_of) -> Mapping[Path, DenseMatrix]:
        order = _path_order(self.algebra)
        kept = {}
        for path in sorted(family, key=order):
            matrix = family[path]
            expected = shape_of(path)
            if matrix.shape == expected and (0 in expected or matrix.is_zero()):
                continue
            kept[path] = matrix
        return MappingProxyType(kept)

    def d(self, vertex: str, degree: int) -> int:
        return self.multiplicities.get((vertex, degree), 0)

    @property
    def degrees(self) -> list[int]:
        return sorted({degree for _, degree in self.multiplicities})

    def degree_span(self) -> tuple[int, int] | None:
        degrees = self.degrees
        return (degrees[0], degrees[-1]) if degrees else None

    def differential_shape(self, degree: int, path: Path) -> tuple[int, int]:
        return (self.d(path.source, degree), self.d(path.target, degree + 1))

    def differential(self, degree: int) -> PathFamily:
        return self.differentials.get(degree, {})

    def block(self, degree: int, path: Path) -> DenseMatrix:
        found = self.differential(degree).get(path)
        if found is not None:
            return found
        return DenseMatrix.zeros(self.field, *self.differential_shape(degree, path))

    def is_zero_complex(self) -> bool:
        return not self.multiplicities

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjComplex):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.field == other.field
            and dict(self.multiplicities) == dict(other.multiplicities)
            and _families_equal(self.differentials, other.differentials)
        )

    __hash__ = None  # type: ignore[assignment]


def _families_equal(left: Mapping[int, PathFamily], right: Mapping[int, PathFamily]) -> bool:
    if set(left) != set(right):
        return False
    for degree in left:
        if set(left[degree]) != set(right[degree]):
            return False
        if any(left[degree][path] != right[degree][path] for path in left[degree]):
            return False
    return True


@dataclass(frozen=True, eq=False)
class PathMap:
    """Degreewise path-indexed blocks between two complexes."""

    source: ProjComplex
    target: ProjComplex
    components: Mapping[int, PathFamily]

    OFFSET: ClassVar[int] = 0

    @classmethod
    def build(cls, source: ProjComplex, target: ProjComplex, components: Mapping[int, PathFamily] | None = None):
        if source.algebra != target.algebra:
            raise ShapeMismatch("complexes live over different algebras")
        frame = cls(source, target, MappingProxyType({}))
        families = {
            degree: source._normalize(family, lambda path, j=degree: frame.shape(j, path))
            for degree, family in (components or {}).items()
        }
        families = {degree: family for degree, family in sorted(families.items()) if family}
        return cls(source, target, MappingProxyType(families))

    @property
    def algebra(self) -> GentleAlgebra:
        return self.source.algebra

    @property
    def field(self) -> Field:
        return self.source.field

    def shape(self, degree: int, path: Path) -> tuple[int, int]:
        return (self.source.d(path.source, degree), self.target.d(path.target, degree + self.OFFSET))

    def component(self, degree: int) -> PathFamily:
        return self.components.get(degree, {})

    def block(self, degree: int, path: Path) -> DenseMatrix:
        found = self.component(degree).get(path)
        if found is not None:
            return found
        return DenseMatrix.zeros(self.field, *self.shape(degree, path))

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathMap) or type(self) is not type(other):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and _families_equal(self.components, other.components)
        )

    __hash__ = None  # type: ignore[assignment]


class ChainMap(PathMap):
    OFFSET = 0


class HomotopyWitness(PathMap):
    """Blocks S_{w,j} from P^j to the target's degree j-1."""

    OFFSET = -1


def _check_family_shapes(report: ValidationReport, families: Mapping[int, PathFamily], shape_of, label: str) -> bool:
    ok = True
    for degree, family in families.items():
        for path, matrix in family.items():
            expected = shape_of(degree, path)
            if matrix.shape != expected:
                ok = False
                report.add("shape", f"({path.name},{degree})", f"{label} block is {matrix.shape}, expected {expected}")
    return ok


def _span(*complexes: ProjComplex, pad: int = 1) -> range:
    degrees = [degree for complex_ in complexes for degree in complex_.degrees]
    if not degrees:
        return range(0)
    return range(min(degrees) - pad, max(degrees) + pad + 1)


def validate_complex(P: ProjComplex) -> ValidationReport:
    report = ValidationReport(subject="complex")
    if not _check_family_shapes(report, P.differentials, P.differential_shape, "differential"):
        return report
    for degree in _span(P):
        square = formal_product(P.algebra, P.differential(degree), P.differential(degree + 1))
        for path in sorted(square, key=_path_order(P.algebra)):
            if not square[path].is_zero():
                report.add("d^2", f"({path.name},{degree})", "consecutive differentials do not compose to zero")
    return report


def chain_map_defect(phi: ChainMap, degree: int) -> dict[Path, DenseMatrix]:
    """phi_j·d~_j - d_j·phi_{j+1}, path by path."""
    left = formal_product(phi.algebra, phi.component(degree), phi.target.differential(degree))
    right = formal_product(phi.algebra, phi.source.differential(degree), phi.component(degree + 1))
    return _family_sum(left, right, sign=-1)


def validate_chain_map(phi: ChainMap) -> ValidationReport:
    report = ValidationReport(subject="chain map")
    if phi.source.algebra != phi.target.algebra:
        report.add("algebra", "/", "source and target use different algebras")
        return report
    if not _check_family_shapes(report, phi.components, phi.shape, "component"):
        return report
    for degree in _span(phi.source, phi.target):
        defect = chain_map_defect(phi, degree)
        for path in sorted(defect, key=_path_order(phi.algebra)):
            if not defect[path].is_zero():
                report.add("commutation", f"({path.name},{degree})", "phi·d~ differs from d·phi")
    return report


def homotopy_defect(phi: ChainMap, psi: ChainMap, witness: HomotopyWitness, degree: int) -> dict[Path, DenseMatrix]:
    algebra = phi.algebra
    total = _family_sum(phi.component(degree), psi.component(degree), sign=-1)
    total = _family_sum(
        total, formal_product(algebra, witness.component(degree), phi.target.differential(degree - 1)), sign=-1
    )
    total = _family_sum(
        total, formal_product(algebra, phi.source.differential(degree), witness.component(degree + 1)), sign=-1
    )
    return total


def validate_homotopy(witness: HomotopyWitness) -> ValidationReport:
    report = ValidationReport(subject="homotopy")
    _check_family_shapes(report, witness.components, witness.shape, "homotopy")
    return report


def check_homotopy(phi: ChainMap, psi: ChainMap, witness: HomotopyWitness) -> ValidationReport:
    report = ValidationReport(subject="homotopy")
    if not _check_family_shapes(report, witness.components, witness.shape, "homotopy"):
        return report
    for degree in _span(phi.source, phi.target):
        defect = homotopy_defect(phi, psi, witness, degree)
        for path in sorted(defect, key=_path_order(phi.algebra)):
            if not defect[path].is_zero():
                report.add("homotopy", f"({path.name},{degree})", "phi - psi differs from s·d~ + d·s")
    return report


def shift_complex(P: ProjComplex, times: int = 1) -> ProjComplex:
    """(P[k])^j = P^{j+k} with differential (-1)^k d^{j+k}."""
    sign = -1 if times % 2 else 1
    multiplicities = {(vertex, degree - times): count for (vertex, degree), count in P.multiplicities.items()}
    differentials = {
        degree - times: {path: (matrix if sign == 1 else matrix.scale(-1)) for path, matrix in family.items()}
        for degree, family in P.differentials.items()
    }
    return ProjComplex.build(P.algebra, P.field, multiplicities, differentials)


def shift_chain_map(phi: ChainMap, times: int = 1) -> ChainMap:
    components = {degree - times: dict(family) for degree, family in phi.components.items()}
    return ChainMap.build(shift_complex(phi.source, times), shift_complex(phi.target, times), components)


def identity_chain_map(P: ProjComplex) -> ChainMap:
    components: dict[int, dict[Path, DenseMatrix]] = {}
    for (vertex, degree), count in P.multiplicities.items():
        components.setdefault(degree, {})[P.algebra.trivial(vertex)] = DenseMatrix.identity(P.field, count)
    return ChainMap.build(P, P, components)


def zero_chain_map(P: ProjComplex, Q: ProjComplex) -> ChainMap:
    return ChainMap.build(P, Q, {})


def compose_chain_maps(phi: ChainMap, psi: ChainMap) -> ChainMap:
    if phi.target != psi.source:
        raise ComposeMismatch("chain maps are not composable")
    degrees = set(phi.components) | set(psi.components)
    components = {degree: formal_product(phi.algebra, phi.component(degree), psi.component(degree)) for degree in degrees}
    return ChainMap.build(phi.source, psi.target, components)


def _combine(left: PathMap, right: PathMap, sign: int) -> dict[int, dict[Path, DenseMatrix]]:
    if left.source != right.source or left.target != right.target:
        raise ShapeMismatch("maps are not parallel")
    degrees = set(left.components) | set(right.components)
    return {degree: _family_sum(left.component(degree), right.component(degree), sign) for degree in degrees}


def add_chain_maps(phi: ChainMap, psi: ChainMap) -> ChainMap:
    return ChainMap.build(phi.source, phi.target, _combine(phi, psi, 1))


def subtract_chain_maps(phi: ChainMap, psi: ChainMap) -> ChainMap:
    return ChainMap.build(phi.source, phi.target, _combine(phi, psi, -1))


def scale_chain_map(value: Any, phi: ChainMap) -> ChainMap:
    components = {
        degree: {path: matrix.scale(value) for path, matrix in family.items()}
        for degree, family in phi.components.items()
    }
    return ChainMap.build(phi.source, phi.target, components)


def negate_chain_map(phi: ChainMap) -> ChainMap:
    return scale_chain_map(-1, phi)


def stalk_complex(algebra: GentleAlgebra, field: Field, vertex: str, degree: int, count: int = 1) -> ProjComplex:
    return ProjComplex.build(algebra, field, {(vertex, degree): count}, {})


def direct_sum_complexes(P: ProjComplex, Q: ProjComplex) -> ProjComplex:
    if P.algebra != Q.algebra:
        raise ShapeMismatch("complexes live over different algebras")
    keys = set(P.multiplicities) | set(Q.multiplicities)
    multiplicities = {key: P.multiplicities.get(key, 0) + Q.multiplicities.get(key, 0) for key in keys}
    differentials: dict[int, dict[Path, DenseMatrix]] = {}
    for degree in set(P.differentials) | set(Q.differentials):
        family = {}
        for path in set(P.differential(degree)) | set(Q.differential(degree)):
            rows = (P.d(path.source, degree), Q.d(path.source, degree))
            cols = (P.d(path.target, degree + 1), Q.d(path.target, degree + 1))
            family[path] = _block_2x2(
                P.field, rows, cols, {(0, 0): P.block(degree, path), (1, 1): Q.block(degree, path)}
            )
        differentials[degree] = family
    return ProjComplex.build(P.algebra, P.field, multiplicities, differentials)


@dataclass(frozen=True, eq=False)
class MappingCone:
    cone: ProjComplex
    inclusion: ChainMap
    projection: ChainMap


def mapping_cone(phi: ChainMap) -> MappingCone:
    """C(phi)^j = P^{j+1} ⊕ P~^j with block [[-A_{w,j+1}, phi_{w,j+1}], [0, A~_{w,j}]]."""
    P, Q, field = phi.source, phi.target, phi.field
    keys = {(vertex, degree - 1) for vertex, degree in P.multiplicities} | set(Q.multiplicities)
    multiplicities = {(v, j): P.d(v, j + 1) + Q.d(v, j) for v, j in keys}
    differentials: dict[int, dict[Path, DenseMatrix]] = {}
    degrees = {degree - 1 for degree in P.differentials} | {degree - 1 for degree in phi.components} | set(Q.differentials)
    for degree in degrees:
        paths = set(P.differential(degree + 1)) | set(phi.component(degree + 1)) | set(Q.differential(degree))
        family = {}
        for path in paths:
            rows = (P.d(path.source, degree + 1), Q.d(path.source, degree))
            cols = (P.d(path.target, degree + 2), Q.d(path.target, degree + 1))
            family[path] = _block_2x2(
                field,
                rows,
                cols,
                {
                    (0, 0): -P.block(degree + 1, path),
                    (0, 1): phi.block(degree + 1, path),
                    (1, 1): Q.block(degree, path),
                },
            )
        differentials[degree] = family
    cone = ProjComplex.build(phi.algebra, field, multiplicities, differentials)

    shifted = shift_complex(P, 1)
    inclusion_parts: dict[int, dict[Path, DenseMatrix]] = {}
    projection_parts: dict[int, dict[Path, DenseMatrix]] = {}
    for vertex, degree in multiplicities:
        unit = phi.algebra.trivial(vertex)
        upper, lower = P.d(vertex, degree + 1), Q.d(vertex, degree)
        if lower:
            inclusion_parts.setdefault(degree, {})[unit] = _block_2x2(
                field, (lower,), (upper, lower), {(0, 1): DenseMatrix.identity(field, lower)}
            )
        if upper:
            projection_parts.setdefault(degree, {})[unit] = _block_2x2(
                field, (upper, lower), (upper,), {(0, 0): DenseMatrix.identity(field, upper)}
            )
    return MappingCone(
        cone=cone,
        inclusion=ChainMap.build(Q, cone, inclusion_parts),
        projection=ChainMap.build(cone, shifted, projection_parts),
    )


def _map_unknowns(system: LinearSystem, source: ProjComplex, target: ProjComplex, offset: int, degrees: Iterable[int]):
    unknowns: dict[tuple[int, Path], np.ndarray] = {}
    for degree in degrees:
        for path in source.algebra.paths:
            rows, cols = source.d(path.source, degree), target.d(path.target, degree + offset)
            if rows and cols:
                unknowns[(degree, path)] = system.unknowns(rows, cols)
    return unknowns


def _add_formal_unknown_known(system, algebra, tag, unknowns, degree, known: PathFamily, target_degree, sign):
    for (j, first), ids in unknowns.items():
        if j != degree:
            continue
        for second, matrix in known.items():
            if first.target != second.source:
                continue
            path = algebra.path_mul(first, second)
            if path is not None:
                system.add_right_product((tag, target_degree, path), ids, matrix, sign)


def _add_formal_known_unknown(system, algebra, tag, known: PathFamily, unknowns, degree, target_degree, sign):
    for first, matrix in known.items():
        for (j, second), ids in unknowns.items():
            if j != degree or first.target != second.source:
                continue
            path = algebra.path_mul(first, second)
            if path is not None:
                system.add_left_product((tag, target_degree, path), matrix, ids, sign)


def _read_family(system: LinearSystem, solution, unknowns) -> dict[int, dict[Path, DenseMatrix]]:
    components: dict[int, dict[Path, DenseMatrix]] = {}
    for (degree, path), ids in unknowns.items():
        components.setdefault(degree, {})[path] = system.read(solution, ids)
    return components


def homotopy_witness(phi: ChainMap, psi: ChainMap) -> HomotopyWitness | None:
    if phi.source != psi.source or phi.target != psi.target:
        raise ShapeMismatch("chain maps are not parallel")
    P, Q, algebra = phi.source, phi.target, phi.algebra
    degrees = list(_span(P, Q))
    system = LinearSystem(phi.field)
    unknowns = _map_unknowns(system, P, Q, -1, degrees)
    for degree in degrees:
        for path, matrix in phi.component(degree).items():
            system.add_constant(("h", degree, path), matrix, 1)
        for path, matrix in psi.component(degree).items():
            system.add_constant(("h", degree, path), matrix, -1)
        _add_formal_unknown_known(system, algebra, "h", unknowns, degree, Q.differential(degree - 1), degree, -1)
        _add_formal_known_unknown(system, algebra, "h", P.differential(degree), unknowns, degree + 1, degree, -1)
    solution = system.solve()
    if solution is None:
        LOGGER.debug("chain maps are not homotopic")
        return None
    witness = HomotopyWitness.build(P, Q, _read_family(system, solution, unknowns))
    report = check_homotopy(phi, psi, witness)
    if not report.valid:
        raise WitnessInvalid(f"solver produced an invalid homotopy: {report.violations[0]}")
    return witness


def random_chain_map(P: ProjComplex, Q: ProjComplex, rng: random.Random) -> ChainMap:
    """A random solution of the commutation equations."""
    algebra = P.algebra
    degrees = list(_span(P, Q, pad=0))
    system = LinearSystem(P.field)
    unknowns = _map_unknowns(system, P, Q, 0, degrees)
    for degree in _span(P, Q):
        _add_formal_unknown_known(system, algebra, "c", unknowns, degree, Q.differential(degree), degree, 1)
        _add_formal_known_unknown(system, algebra, "c", P.differential(degree), unknowns, degree + 1, degree, -1)
    solution = system.solve_random(rng)
    if solution is None:
        return zero_chain_map(P, Q)
    return ChainMap.build(P, Q, _read_family(system, solution, unknowns))


def null_homotopic_map(P: ProjComplex, Q: ProjComplex, witness: HomotopyWitness) -> ChainMap:
    """s·d~ + d·s, a chain map homotopic to zero through ``witness``."""
    components = {}
    for degree in _span(P, Q):
        family = _family_sum(
            formal_product(P.algebra, witness.component(degree), Q.differential(degree - 1)),
            formal_product(P.algebra, P.differential(degree), witness.component(degree + 1)),
        )
        if family:
            components[degree] = family
    return ChainMap.build(P, Q, components)


def random_homotopy(P: ProjComplex, Q: ProjComplex, rng: random.Random) -> HomotopyWitness:
    components: dict[int, dict[Path, DenseMatrix]] = {}
    for degree in _span(P, Q, pad=0):
        for path in P.algebra.paths:
            rows, cols = P.d(path.source, degree), Q.d(path.target, degree - 1)
            if rows and cols:
                components.setdefault(degree, {})[path] = DenseMatrix.random(P.field, rows, cols, rng, density=0.5)
    return HomotopyWitness.build(P, Q, components)


def compose_homotopy_right(witness: HomotopyWitness, chi: ChainMap) -> HomotopyWitness:
    """If s: phi ~ psi then s^j chi^{j-1}: phi·chi ~ psi·chi."""
    components = {
        degree: formal_product(witness.algebra, family, chi.component(degree - 1))
        for degree, family in witness.components.items()
    }
    return HomotopyWitness.build(witness.source, chi.target, components)


def compose_homotopy_left(chi: ChainMap, witness: HomotopyWitness) -> HomotopyWitness:
    """If s: phi ~ psi then chi^j s^j: chi·phi ~ chi·psi."""
    components = {
        degree: formal_product(chi.algebra, chi.component(degree), family)
        for degree, family in witness.components.items()
    }
    return HomotopyWitness.build(chi.source, witness.target, components)
