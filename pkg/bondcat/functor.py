"""The functor from complexes of projectives to Bondarenko matrices over the algebra poset."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Union

from bondcat.category import (
    BondMorphism,
    BondObject,
    Key,
    add,
    direct_sum,
    shift_morphism,
    shift_object,
    zero_morphism,
)
from bondcat.complexes import (
    ChainMap,
    HomotopyWitness,
    PathFamily,
    ProjComplex,
    add_chain_maps,
    check_homotopy,
    direct_sum_complexes,
    homotopy_witness,
    mapping_cone,
    shift_chain_map,
    shift_complex,
    zero_chain_map,
)
from bondcat.cones import cone, inclusion, projection
from bondcat.equiv import KMatrixWitness, Variant, check_witness, find_witness
from bondcat.errors import DecisionMismatch
from bondcat.gentle import GentleAlgebra, Path
from bondcat.poset import GradedElement
from bondcat.scalar import DenseMatrix
from bondcat.schemas import EquivalenceReport, ValidationReport

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FunctorImage:
    value: Union[BondObject, BondMorphism, KMatrixWitness]
    placement: Mapping[Key, tuple[str, int]]


def path_cells(algebra: GentleAlgebra, path: Path) -> list[tuple[int, int]]:
    """Poset positions (row cell, column cell) a path block is placed at."""
    poset = algebra.poset
    if path.is_trivial:
        return [(cell, cell) for cell in poset.copies_of_vertex(path.source)]
    maximal, start = algebra.embeddings[path]
    return [(poset.cell_index(maximal, start), poset.cell_index(maximal, start + path.length))]


def _complex_dims(P: ProjComplex) -> dict[GradedElement, int]:
    poset = P.algebra.poset
    dims: dict[GradedElement, int] = {}
    for (vertex, degree), count in P.multiplicities.items():
        for cell in poset.copies_of_vertex(vertex):
            dims[GradedElement(cell, degree)] = count
    return dims


def _place(algebra: GentleAlgebra, families: Mapping[int, PathFamily], col_offset: int):
    blocks: dict[Key, DenseMatrix] = {}
    placement: dict[Key, tuple[str, int]] = {}
    for degree, family in families.items():
        for path, matrix in family.items():
            for row_cell, col_cell in path_cells(algebra, path):
                key = (GradedElement(row_cell, degree), GradedElement(col_cell, degree + col_offset))
                blocks[key] = matrix
                placement[key] = (path.name, degree)
    return blocks, placement


def _read(algebra: GentleAlgebra, blocks: Mapping[Key, DenseMatrix], degree: int, path: Path, col_offset: int):
    row_cell, col_cell = path_cells(algebra, path)[0]
    return blocks.get((GradedElement(row_cell, degree), GradedElement(col_cell, degree + col_offset)))


def object_image(P: ProjComplex) -> FunctorImage:
    blocks, placement = _place(P.algebra, P.differentials, 1)
    value = BondObject.build(P.algebra.poset, P.field, _complex_dims(P), blocks)
    return FunctorImage(value, MappingProxyType(placement))


def morphism_image(phi: ChainMap) -> FunctorImage:
    blocks, placement = _place(phi.algebra, phi.components, 0)
    value = BondMorphism.build(functor_object(phi.source), functor_object(phi.target), blocks)
    return FunctorImage(value, MappingProxyType(placement))


def functor_object(P: ProjComplex) -> BondObject:
    return object_image(P).value  # type: ignore[return-value]


def functor_morphism(phi: ChainMap) -> BondMorphism:
    return morphism_image(phi).value  # type: ignore[return-value]


def functor_homotopy(witness: HomotopyWitness) -> KMatrixWitness:
    """S_{w,i} placed at ([u,i], [uw,i-1]); a K-paired witness for F(phi) ≃ F(psi)."""
    blocks, _ = _place(witness.algebra, witness.components, -1)
    return KMatrixWitness.build(
        functor_object(witness.source), functor_object(witness.target), blocks, variant=Variant.PAIRED
    )


def witness_to_homotopy(L: KMatrixWitness, P: ProjComplex, Q: ProjComplex) -> HomotopyWitness:
    """Reads S_{w,i} back from the degree-lowering blocks along each maximal path."""
    components: dict[int, dict[Path, DenseMatrix]] = {}
    degrees = sorted({row.degree for row, _ in L.blocks})
    for degree in degrees:
        for path in P.algebra.paths:
            found = _read(P.algebra, L.blocks, degree, path, -1)
            if found is not None:
                components.setdefault(degree, {})[path] = found
    return HomotopyWitness.build(P, Q, components)


def recover_chain_map(F_phi: BondMorphism, P: ProjComplex, Q: ProjComplex) -> ChainMap:
    components: dict[int, dict[Path, DenseMatrix]] = {}
    for degree in sorted({row.degree for row, _ in F_phi.blocks}):
        for path in P.algebra.paths:
            found = _read(P.algebra, F_phi.blocks, degree, path, 0)
            if found is not None:
                components.setdefault(degree, {})[path] = found
    return ChainMap.build(P, Q, components)


def check_cone_compat(phi: ChainMap) -> ValidationReport:
    report = ValidationReport(subject="cone compatibility")
    built = mapping_cone(phi)
    image = functor_morphism(phi)
    omega = cone(image)
    if functor_object(built.cone) != omega:
        report.add("cone", "F(C(phi))", "differs from the cone of F(phi)")
    if functor_morphism(built.inclusion) != inclusion(image, omega):
        report.add("inclusion", "F(iota)", "differs from the cone inclusion")
    if functor_morphism(built.projection) != projection(image, omega):
        report.add("projection", "F(pi)", "differs from the cone projection")
    return report


def check_shift_compat(P: ProjComplex, phi: ChainMap | None = None) -> ValidationReport:
    report = ValidationReport(subject="shift compatibility")
    if functor_object(shift_complex(P)) != shift_object(functor_object(P)):
        report.add("shift", "F(P[1])", "differs from the shift of F(P)")
    if phi is not None and functor_morphism(shift_chain_map(phi)) != shift_morphism(functor_morphism(phi)):
        report.add("shift", "F(phi[1])", "differs from the shift of F(phi)")
    return report


def check_additivity(P: ProjComplex, Q: ProjComplex, phi: ChainMap | None = None, psi: ChainMap | None = None) -> ValidationReport:
    report = ValidationReport(subject="additivity")
    if functor_object(direct_sum_complexes(P, Q)) != direct_sum(functor_object(P), functor_object(Q)):
        report.add("sum", "F(P+Q)", "differs from F(P)+F(Q)")
    if phi is not None and psi is not None:
        if functor_morphism(add_chain_maps(phi, psi)) != add(functor_morphism(phi), functor_morphism(psi)):
            report.add("sum", "F(phi+psi)", "differs from F(phi)+F(psi)")
    return report


def check_faithful(phi: ChainMap) -> ValidationReport:
    report = ValidationReport(subject="faithfulness")
    image = functor_morphism(phi)
    if image.is_zero() and not phi.is_zero():
        report.add("kernel", "F(phi)", "a nonzero chain map has zero image")
    if recover_chain_map(image, phi.source, phi.target) != phi:
        report.add("recovery", "F(phi)", "placed blocks do not determine phi")
    return report


def check_homotopy_equiv(phi: ChainMap, include_plain: bool = True) -> EquivalenceReport:
    """Decides phi ~ 0 on both sides and cross-checks through the witness dictionary."""
    P, Q = phi.source, phi.target
    image = functor_morphism(phi)
    zero_image = zero_morphism(image.source, image.target)
    homotopy = homotopy_witness(phi, zero_chain_map(P, Q))
    paired = find_witness(image, zero_image, Variant.PAIRED)
    report = EquivalenceReport(homotopic=homotopy is not None, k_paired=paired is not None)
    if include_plain:
        report.k_plain = find_witness(image, zero_image, Variant.K) is not None
        report.kappa = find_witness(image, zero_image, Variant.KAPPA) is not None
    if report.homotopic != report.k_paired:
        raise DecisionMismatch(
            f"homotopy solver says {report.homotopic}, K-paired solver says {report.k_paired}"
        )
    if homotopy is not None and paired is not None:
        forward = check_witness(image, zero_image, functor_homotopy(homotopy))
        backward = check_homotopy(phi, zero_chain_map(P, Q), witness_to_homotopy(paired, P, Q))
        if not (forward.valid and backward.valid):
            raise DecisionMismatch("witness dictionary did not carry a witness across")
        report.conversions_verified = True
    LOGGER.debug("homotopy decision %s (K %s, kappa %s)", report.homotopic, report.k_plain, report.kappa)
    return report
