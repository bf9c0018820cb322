"""Cones, standard triangles and the explicit morphisms of the triangulated structure.

Band order inside a cone's graded element x is [B(x+1), C(x)]: the shifted
source first, then the target.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from bondcat import config
from bondcat.bands import BandLayout, BlockAssembler
from bondcat.category import (
    BondMorphism,
    BondObject,
    add,
    compose,
    identity,
    negate,
    shift_morphism,
    shift_object,
    validate_morphism,
    validate_object,
    zero_morphism,
)
from bondcat.equiv import IsoCertificate, KMatrixWitness, Variant, check_witness, is_iso_in_quotient
from bondcat.errors import ComposeMismatch, ConstructionInvalid, WitnessInvalid
from bondcat.schemas import ValidationReport

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Triangle:
    X: BondObject
    Y: BondObject
    Z: BondObject
    u: BondMorphism
    v: BondMorphism
    w: BondMorphism


@dataclass(frozen=True, eq=False)
class RotationWitnesses:
    R: BondMorphism
    S: BondMorphism
    L_comm: KMatrixWitness
    L_inv: KMatrixWitness


@dataclass(frozen=True, eq=False)
class Octahedron:
    F: BondMorphism
    G: BondMorphism
    Lambda: BondMorphism
    L_rot: KMatrixWitness
    L_comm: KMatrixWitness
    Lambda_inverse: BondMorphism
    L_iso: KMatrixWitness


def _ensure(report: ValidationReport) -> None:
    if config.CHECK_OUTPUTS and not report.valid:
        first = report.violations[0]
        raise ConstructionInvalid(f"{report.subject}: {first.condition} at {first.location} {first.detail}")


def single_layout(obj: BondObject) -> BandLayout:
    return BandLayout({x: (size,) for x, size in obj.dims.items()})


def cone_layout(T: BondMorphism) -> BandLayout:
    shifted = {x.shifted(-1) for x in T.source.dims}
    elements = sorted(shifted | set(T.target.dims), key=lambda item: item.key)
    return BandLayout({x: (T.source.dim(x.shifted(1)), T.target.dim(x)) for x in elements})


def _nested_cone_layout(S: BondMorphism, T: BondMorphism) -> BandLayout:
    """Four bands [B(x+2), C(x+1), B(x+1), D(x)] of the cone of Omega_S -> Omega_ST."""
    B, C, D = S.source, S.target, T.target
    elements = set()
    for obj, offset in ((B, 2), (C, 1), (B, 1), (D, 0)):
        elements.update(x.shifted(-offset) for x in obj.dims)
    ordered = sorted(elements, key=lambda item: item.key)
    return BandLayout(
        {x: (B.dim(x.shifted(2)), C.dim(x.shifted(1)), B.dim(x.shifted(1)), D.dim(x)) for x in ordered}
    )


def cone(T: BondMorphism) -> BondObject:
    """Omega_T with (x, y) block [[-B(x+1, y+1), T(x+1, y)], [0, C(x, y)]]."""
    layout = cone_layout(T)
    assembler = BlockAssembler(T.field, layout, layout)
    for (row, col), matrix in T.source.blocks.items():
        assembler.put(row.shifted(-1), 0, col.shifted(-1), 0, -matrix)
    for (row, col), matrix in T.blocks.items():
        assembler.put(row.shifted(-1), 0, col, 1, matrix)
    for (row, col), matrix in T.target.blocks.items():
        assembler.put(row, 1, col, 1, matrix)
    result = BondObject.build(T.poset, T.field, layout.dims(), assembler.blocks())
    _ensure(validate_object(result, "cone"))
    return result


def _band_identity(
    assembler: BlockAssembler,
    elements,
    row_band: int,
    col_band: int,
    col_offset: int = 0,
) -> None:
    for x in elements:
        target = x.shifted(col_offset)
        if assembler.rows.band(x, row_band):
            assembler.put_identity(x, row_band, target, col_band)


def inclusion(T: BondMorphism, omega: BondObject | None = None) -> BondMorphism:
    """iota: C -> Omega_T, the identity into the C-bands."""
    omega = omega or cone(T)
    assembler = BlockAssembler(T.field, single_layout(T.target), cone_layout(T))
    _band_identity(assembler, T.target.dims, 0, 1)
    return BondMorphism.build(T.target, omega, assembler.blocks())


def projection(T: BondMorphism, omega: BondObject | None = None) -> BondMorphism:
    """pi: Omega_T -> [[B]], the identity out of the shifted B-bands."""
    omega = omega or cone(T)
    shifted = shift_object(T.source)
    layout = cone_layout(T)
    assembler = BlockAssembler(T.field, layout, single_layout(shifted))
    _band_identity(assembler, layout.bands, 0, 0)
    return BondMorphism.build(omega, shifted, assembler.blocks())


def validate_triangle(triangle: Triangle) -> ValidationReport:
    report = ValidationReport(subject="triangle")
    expected = (
        ("u", triangle.u, triangle.X, triangle.Y),
        ("v", triangle.v, triangle.Y, triangle.Z),
        ("w", triangle.w, triangle.Z, shift_object(triangle.X)),
    )
    for name, morphism, source, target in expected:
        if morphism.source != source or morphism.target != target:
            report.add("endpoints", name, "morphism does not connect the stated objects")
            continue
        report.merge(validate_morphism(morphism, name), prefix=f"{name}:")
    return report


def standard_triangle(T: BondMorphism) -> Triangle:
    omega = cone(T)
    triangle = Triangle(
        X=T.source,
        Y=T.target,
        Z=omega,
        u=T,
        v=inclusion(T, omega),
        w=projection(T, omega),
    )
    _ensure(validate_triangle(triangle))
    return triangle


def rotated_triangle(T: BondMorphism) -> Triangle:
    """C -> Omega_T -> [[B]] -> [[C]] with last edge -[[T]]."""
    omega = cone(T)
    triangle = Triangle(
        X=T.target,
        Y=omega,
        Z=shift_object(T.source),
        u=inclusion(T, omega),
        v=projection(T, omega),
        w=negate(shift_morphism(T)),
    )
    _ensure(validate_triangle(triangle))
    return triangle


def _lowering_witness(
    source: BondObject,
    target: BondObject,
    rows: BandLayout,
    row_band: int,
    cols: BandLayout,
    col_band: int,
    variant: Variant = Variant.K,
) -> KMatrixWitness:
    """Identity from ``row_band`` at x to ``col_band`` at x one degree lower."""
    assembler = BlockAssembler(source.field, rows, cols)
    for x in rows.bands:
        if rows.band(x, row_band):
            assembler.put_identity(x, row_band, x.shifted(-1), col_band)
    return KMatrixWitness.build(source, target, assembler.blocks(), variant=variant)


def identity_cone_contraction(B: BondObject) -> KMatrixWitness:
    """The witness [[0, 0], [Id, 0]] for Id of Omega_{Id_B} ≃ 0."""
    unit = identity(B)
    omega = cone(unit)
    layout = cone_layout(unit)
    return _lowering_witness(omega, omega, layout, 1, layout, 0)


def rotation_witnesses(T: BondMorphism) -> RotationWitnesses:
    omega_t = cone(T)
    iota = inclusion(T, omega_t)
    omega = cone(iota)
    # bands of omega at x: [C(x+1), B(x+1), C(x)]
    bands = BandLayout(
        {x: (T.target.dim(x.shifted(1)), T.source.dim(x.shifted(1)), T.target.dim(x)) for x in omega.dims}
    )
    shifted_b = shift_object(T.source)
    shifted_c = shift_object(T.target)

    r_builder = BlockAssembler(T.field, single_layout(shifted_b), bands)
    for (row, col), matrix in T.blocks.items():
        r_builder.put(row.shifted(-1), 0, col.shifted(-1), 0, -matrix)
    _band_identity(r_builder, shifted_b.dims, 0, 1)
    R = BondMorphism.build(shifted_b, omega, r_builder.blocks())

    s_builder = BlockAssembler(T.field, bands, single_layout(shifted_b))
    _band_identity(s_builder, bands.bands, 1, 0)
    S = BondMorphism.build(omega, shifted_b, s_builder.blocks())

    L_comm = _lowering_witness(omega, shifted_c, bands, 2, single_layout(shifted_c), 0)
    L_inv = _lowering_witness(omega, omega, bands, 2, bands, 0)
    result = RotationWitnesses(R=R, S=S, L_comm=L_comm, L_inv=L_inv)
    if config.CHECK_OUTPUTS:
        _ensure(validate_morphism(R, "R"))
        _ensure(validate_morphism(S, "S"))
        if compose(R, S) != identity(shifted_b):
            raise ConstructionInvalid("RS is not the identity")
        _ensure(check_rotation_commutativity(T, result))
        _ensure(check_witness(identity(omega), compose(S, R), L_inv))
    return result


def check_rotation_commutativity(T: BondMorphism, rotation: RotationWitnesses) -> ValidationReport:
    """pi + S[[T]] ≃ 0 through L_comm."""
    iota = inclusion(T)
    pi = projection(iota, rotation.S.source)
    total = add(pi, compose(rotation.S, shift_morphism(T)))
    return check_witness(total, zero_morphism(total.source, total.target), rotation.L_comm)


def tr3_fill(
    T: BondMorphism,
    T2: BondMorphism,
    F: BondMorphism,
    G: BondMorphism,
    L: KMatrixWitness,
) -> BondMorphism:
    """Fill-in H: Omega_T -> Omega_T2 for a square F·T2 ≃ T·G certified by L.

    H at (x, y) is [[F(x+1, y+1), -L(x+1, y)], [0, G(x, y)]].
    """
    if F.source != T.source or G.source != T.target or F.target != T2.source or G.target != T2.target:
        raise ComposeMismatch("square morphisms do not connect")
    if not check_witness(compose(F, T2), compose(T, G), L).valid:
        raise WitnessInvalid("L does not certify F·T2 ≃ T·G")
    omega, omega2 = cone(T), cone(T2)
    assembler = BlockAssembler(T.field, cone_layout(T), cone_layout(T2))
    for (row, col), matrix in F.blocks.items():
        assembler.put(row.shifted(-1), 0, col.shifted(-1), 0, matrix)
    for (row, col), matrix in L.blocks.items():
        assembler.put(row.shifted(-1), 0, col, 1, -matrix)
    for (row, col), matrix in G.blocks.items():
        assembler.put(row, 1, col, 1, matrix)
    H = BondMorphism.build(omega, omega2, assembler.blocks())
    report = validate_morphism(H, "H")
    if not report.valid:
        if all(violation.condition == "(d)" for violation in report.violations):
            raise WitnessInvalid("witness is not paired on its degree-lowering blocks; H breaks condition (d)")
        _ensure(report)
    return H


def check_tr3_squares(T: BondMorphism, T2: BondMorphism, F: BondMorphism, G: BondMorphism, H: BondMorphism) -> bool:
    left = compose(G, inclusion(T2)) == compose(inclusion(T), H)
    right = compose(projection(T), shift_morphism(F)) == compose(H, projection(T2))
    return left and right


def octahedron(S: BondMorphism, T: BondMorphism) -> Octahedron:
    if S.target != T.source:
        raise ComposeMismatch("S and T are not composable")
    ST = compose(S, T)
    omega_s, omega_t, omega_st = cone(S), cone(T), cone(ST)
    lay_s, lay_t, lay_st = cone_layout(S), cone_layout(T), cone_layout(ST)

    f_builder = BlockAssembler(S.field, lay_s, lay_st)
    _band_identity(f_builder, lay_s.bands, 0, 0)
    for (row, col), matrix in T.blocks.items():
        f_builder.put(row, 1, col, 1, matrix)
    F = BondMorphism.build(omega_s, omega_st, f_builder.blocks())

    g_builder = BlockAssembler(S.field, lay_st, lay_t)
    for (row, col), matrix in S.blocks.items():
        g_builder.put(row.shifted(-1), 0, col.shifted(-1), 0, matrix)
    _band_identity(g_builder, lay_st.bands, 1, 1)
    G = BondMorphism.build(omega_st, omega_t, g_builder.blocks())

    omega_f = cone(F)
    nested = _nested_cone_layout(S, T)
    l_builder = BlockAssembler(S.field, lay_t, nested)
    _band_identity(l_builder, lay_t.bands, 0, 1)
    _band_identity(l_builder, lay_t.bands, 1, 3)
    Lambda = BondMorphism.build(omega_t, omega_f, l_builder.blocks())

    u_builder = BlockAssembler(S.field, nested, lay_t)
    _band_identity(u_builder, nested.bands, 1, 0)
    for (row, col), matrix in S.blocks.items():
        u_builder.put(row.shifted(-1), 2, col.shifted(-1), 0, matrix)
    _band_identity(u_builder, nested.bands, 3, 1)
    inverse = BondMorphism.build(omega_f, omega_t, u_builder.blocks())

    result = Octahedron(
        F=F,
        G=G,
        Lambda=Lambda,
        L_rot=_lowering_witness(omega_st, omega_f, lay_st, 0, nested, 0),
        L_comm=_lowering_witness(omega_s, omega_t, lay_s, 1, lay_t, 0),
        Lambda_inverse=inverse,
        L_iso=_lowering_witness(omega_f, omega_f, nested, 2, nested, 0),
    )
    if config.CHECK_OUTPUTS:
        for name in ("F", "G", "Lambda", "Lambda_inverse"):
            _ensure(validate_morphism(getattr(result, name), name))
        _ensure(check_witness(inclusion(F, omega_f), compose(G, Lambda), result.L_rot))
    return result


def check_octahedron(S: BondMorphism, T: BondMorphism, result: Octahedron) -> ValidationReport:
    report = ValidationReport(subject="octahedron")
    for name in ("F", "G", "Lambda", "Lambda_inverse"):
        report.merge(validate_morphism(getattr(result, name), name), prefix=f"{name}:")
    omega_f = result.Lambda.target
    if compose(result.Lambda, projection(result.F, omega_f)) != compose(projection(T), shift_morphism(inclusion(S))):
        report.add("projection", "Lambda", "Lambda·pi differs from pi·iota")
    report.merge(check_witness(inclusion(result.F, omega_f), compose(result.G, result.Lambda), result.L_rot), "L_rot:")
    composite = compose(result.F, result.G)
    report.merge(check_witness(composite, zero_morphism(composite.source, composite.target), result.L_comm), "L_comm:")
    if compose(result.Lambda, result.Lambda_inverse) != identity(result.Lambda.source):
        report.add("inverse", "Lambda", "Lambda·U is not the identity")
    report.merge(
        check_witness(identity(omega_f), compose(result.Lambda_inverse, result.Lambda), result.L_iso), "L_iso:"
    )
    return report


def lambda_quotient_inverse(result: Octahedron) -> IsoCertificate | None:
    return is_iso_in_quotient(result.Lambda)


def shift_cone_isomorphism(T: BondMorphism) -> BondMorphism:
    """Strict isomorphism cone([[T]]) -> [[cone(T)]], diag(-Id, Id) on the bands."""
    shifted = shift_morphism(T)
    source = cone(shifted)
    target = shift_object(cone(T))
    layout = cone_layout(shifted)
    assembler = BlockAssembler(T.field, layout, layout)
    for x in layout.bands:
        if layout.band(x, 0):
            assembler.put_identity(x, 0, x, 0, sign=-1)
        if layout.band(x, 1):
            assembler.put_identity(x, 1, x, 1)
    return BondMorphism.build(source, target, assembler.blocks())
