from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from pydantic import ValidationError

from bondcat import codec, config
from bondcat.category import compose, shift_morphism, shift_object, validate_morphism, validate_object
from bondcat.complexes import (
    homotopy_witness,
    subtract_chain_maps,
    validate_chain_map,
    validate_complex,
    validate_homotopy,
    zero_chain_map,
)
from bondcat.cones import (
    lambda_quotient_inverse,
    octahedron,
    rotated_triangle,
    rotation_witnesses,
    standard_triangle,
    tr3_fill,
    validate_triangle,
)
from bondcat.equiv import Variant, find_witness, is_iso_in_quotient, validate_witness
from bondcat.errors import BondcatError, MalformedInput, NotFiniteDimensional
from bondcat.fixtures import algebra_a1
from bondcat.functor import check_homotopy_equiv, morphism_image, object_image
from bondcat.generator import random_complex, random_object, random_poset
from bondcat.gentle import validate_gentle
from bondcat.harness import ACCEPTANCE_TRIALS, BATTERIES, verify_axioms
from bondcat.reports import as_json, gentle_table, render_equivalence, render_gentle, render_summary, render_validation
from bondcat.scalar import Field
from bondcat.schemas import RunConfig, ValidationReport

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MALFORMED = 2
EXIT_NO = 3

VARIANTS = [variant.value for variant in Variant]


def setup_logging(level: str = config.LOG_LEVEL) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format="[%(levelname)s] %(message)s")


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="bondcat",
        description="Bondarenko block matrices, their triangulated quotient and the functor from gentle complexes.",
    )
    parser.add_argument("--field", default=None, help="rational or gf:p (default: document field, then BONDCAT_FIELD)")
    parser.add_argument("--json", action="store_true", default=config.JSON_REPORTS, help="Machine-readable reports")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level (default: %(default)s)")
    parser.add_argument("-o", "--output", default=None, help="Output file, or directory for multi-artifact commands")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="Check any bondcat document")
    validate.add_argument("input")

    shift = commands.add_parser("shift", help="Shift an object or morphism")
    shift.add_argument("input")
    shift.add_argument("-n", "--times", type=int, default=1)

    cone_cmd = commands.add_parser("cone", help="Cone, inclusion, projection and standard triangle of a morphism")
    cone_cmd.add_argument("input")

    equiv = commands.add_parser("equiv", help="Find a witness for S ≃ T")
    equiv.add_argument("S")
    equiv.add_argument("T")
    equiv.add_argument("--variant", choices=VARIANTS, default=Variant.K.value)

    iso = commands.add_parser("iso", help="Decide whether a morphism is invertible in the quotient")
    iso.add_argument("input")

    rotate = commands.add_parser("rotate", help="Rotation morphisms and witnesses of a standard triangle")
    rotate.add_argument("input")

    tr3 = commands.add_parser("tr3", help="Fill a square between standard triangles")
    for name in ("T", "T2", "F", "G"):
        tr3.add_argument(name)
    tr3.add_argument("--witness", default=None, help="Witness for F·T2 ≃ T·G (solved when omitted)")

    octa = commands.add_parser("octahedron", help="Octahedral data for a composable pair")
    octa.add_argument("S")
    octa.add_argument("T")

    gentle = commands.add_parser("gentle", help="Gentle algebra tools")
    gentle_commands = gentle.add_subparsers(dest="gentle_command", required=True)
    analyze = gentle_commands.add_parser("analyze", help="Paths, maximal paths and the algebra poset")
    analyze.add_argument("input")

    functor = commands.add_parser("functor", help="Image of a complex or chain map")
    functor.add_argument("what", choices=["object", "morphism"])
    functor.add_argument("input")

    homotopy = commands.add_parser("homotopy", help="Find a homotopy between chain maps")
    homotopy.add_argument("phi")
    homotopy.add_argument("psi", nargs="?", default=None)
    homotopy.add_argument("--compare", action="store_true", help="Also decide the image side and cross-check")

    generate = commands.add_parser("generate", help="Emit a random valid instance")
    generate.add_argument("what", choices=["object", "complex"])
    generate.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    generate.add_argument("--depth", type=int, default=config.MAX_DEPTH)
    generate.add_argument("--size", type=int, default=4, help="Poset size for objects")
    generate.add_argument("--algebra", default=None, help="Quiver document for complexes (default: A1)")

    verify = commands.add_parser("verify-axioms", help="Run the randomized acceptance batteries")
    verify.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    verify.add_argument("--trials", type=int, default=config.DEFAULT_TRIALS)
    verify.add_argument("--acceptance", action="store_true", help="Use the per-battery acceptance trial counts")
    verify.add_argument("--only", action="append", choices=list(BATTERIES), default=None)
    verify.add_argument("--workers", type=int, default=config.HARNESS_WORKERS)
    verify.add_argument("--field", dest="battery_field", default=None, help="Coefficient field of the trials (default: gf:5)")
    return parser.parse_args(argv)


def _print(text: str) -> None:
    sys.stdout.write(text)


def _emit_report(args: argparse.Namespace, report: ValidationReport) -> int:
    _print(as_json(report) if args.json else render_validation(report))
    return EXIT_OK if report.valid else EXIT_INVALID


def _emit_one(args: argparse.Namespace, doc: Mapping[str, Any]) -> None:
    if args.output:
        codec.write(doc, args.output)
        LOGGER.info("wrote %s", args.output)
    else:
        _print(codec.dumps(doc))


def _emit_many(args: argparse.Namespace, field: Field, items: Mapping[str, Mapping[str, Any]]) -> None:
    if args.output:
        directory = Path(args.output)
        for name, doc in items.items():
            codec.write(doc, directory / f"{name}.json")
        LOGGER.info("wrote %s artifacts to %s", len(items), directory)
    else:
        _print(codec.dumps(codec.bundle_doc(field, items)))


def _say_no(args: argparse.Namespace, message: str) -> int:
    LOGGER.info(message)
    _print(as_json({"decision": False, "message": message}) if args.json else f"{message}\n")
    return EXIT_NO


def _validate_value(kind: str, value: Any) -> ValidationReport:
    if kind == "object":
        return validate_object(value)
    if kind == "morphism":
        return validate_morphism(value)
    if kind == "witness":
        return validate_witness(value)
    if kind == "quiver":
        try:
            return validate_gentle(value)
        except NotFiniteDimensional as exc:
            report = ValidationReport(subject="gentle algebra")
            report.add("finite", "/", str(exc))
            return report
    if kind == "complex":
        return validate_complex(value)
    if kind == "chainmap":
        return validate_chain_map(value)
    if kind == "homotopy":
        return validate_homotopy(value)
    if kind == "triangle":
        return validate_triangle(value)
    report = ValidationReport(subject="bundle")
    for name, (item_kind, item) in value.items():
        report.merge(_validate_value(item_kind, item), prefix=f"{name}:")
    return report


def _kinded(path: str, field: str | None) -> tuple[str, Any]:
    kind, value = codec.load(path, field)
    if kind == "bundle":
        raw = codec.read_json(path).get("items", {})
        value = {name: (codec.parse_document(raw[name]).kind, item) for name, item in value.items()}
    return kind, value


def run_validate(args: argparse.Namespace) -> int:
    kind, value = _kinded(args.input, args.field)
    return _emit_report(args, _validate_value(kind, value))


def run_shift(args: argparse.Namespace) -> int:
    kind, value = codec.load(args.input, args.field)
    if kind == "object":
        _emit_one(args, codec.object_to_doc(shift_object(value, args.times)))
    elif kind == "morphism":
        _emit_one(args, codec.morphism_to_doc(shift_morphism(value, args.times)))
    else:
        raise MalformedInput(f"cannot shift a {kind} document", "/kind")
    return EXIT_OK


def run_cone(args: argparse.Namespace) -> int:
    T = codec.load_as(args.input, "morphism", args.field)
    triangle = standard_triangle(T)
    _emit_many(
        args,
        T.field,
        {
            "cone": codec.object_to_doc(triangle.Z),
            "inclusion": codec.morphism_to_doc(triangle.v),
            "projection": codec.morphism_to_doc(triangle.w),
            "triangle": codec.triangle_to_doc(triangle),
        },
    )
    return EXIT_OK


def run_equiv(args: argparse.Namespace) -> int:
    S = codec.load_as(args.S, "morphism", args.field)
    T = codec.load_as(args.T, "morphism", args.field)
    witness = find_witness(S, T, args.variant)
    if witness is None:
        return _say_no(args, f"not equivalent ({args.variant})")
    _emit_one(args, codec.witness_to_doc(witness))
    return EXIT_OK


def run_iso(args: argparse.Namespace) -> int:
    T = codec.load_as(args.input, "morphism", args.field)
    certificate = is_iso_in_quotient(T)
    if certificate is None:
        return _say_no(args, "not iso")
    _emit_many(
        args,
        T.field,
        {
            "inverse": codec.morphism_to_doc(certificate.inverse),
            "left_witness": codec.witness_to_doc(certificate.left_witness),
            "right_witness": codec.witness_to_doc(certificate.right_witness),
        },
    )
    return EXIT_OK


def run_rotate(args: argparse.Namespace) -> int:
    T = codec.load_as(args.input, "morphism", args.field)
    rotation = rotation_witnesses(T)
    _emit_many(
        args,
        T.field,
        {
            "R": codec.morphism_to_doc(rotation.R),
            "S": codec.morphism_to_doc(rotation.S),
            "L_comm": codec.witness_to_doc(rotation.L_comm),
            "L_inv": codec.witness_to_doc(rotation.L_inv),
            "rotated_triangle": codec.triangle_to_doc(rotated_triangle(T)),
        },
    )
    return EXIT_OK


def run_tr3(args: argparse.Namespace) -> int:
    T, T2, F, G = (codec.load_as(getattr(args, name), "morphism", args.field) for name in ("T", "T2", "F", "G"))
    if args.witness:
        L = codec.load_as(args.witness, "witness", args.field)
    else:
        L = find_witness(compose(F, T2), compose(T, G), Variant.PAIRED)
        if L is None:
            return _say_no(args, "square does not commute up to a paired witness")
    _emit_one(args, codec.morphism_to_doc(tr3_fill(T, T2, F, G, L)))
    return EXIT_OK


def run_octahedron(args: argparse.Namespace) -> int:
    S = codec.load_as(args.S, "morphism", args.field)
    T = codec.load_as(args.T, "morphism", args.field)
    result = octahedron(S, T)
    items = {
        "F": codec.morphism_to_doc(result.F),
        "G": codec.morphism_to_doc(result.G),
        "Lambda": codec.morphism_to_doc(result.Lambda),
        "L_rot": codec.witness_to_doc(result.L_rot),
        "L_comm": codec.witness_to_doc(result.L_comm),
        "Lambda_inverse": codec.morphism_to_doc(result.Lambda_inverse),
        "L_iso": codec.witness_to_doc(result.L_iso),
    }
    certificate = lambda_quotient_inverse(result)
    if certificate is not None:
        items["Lambda_left_witness"] = codec.witness_to_doc(certificate.left_witness)
        items["Lambda_right_witness"] = codec.witness_to_doc(certificate.right_witness)
    _emit_many(args, S.field, items)
    return EXIT_OK


def run_gentle(args: argparse.Namespace) -> int:
    algebra = codec.load_as(args.input, "quiver", args.field)
    try:
        report = validate_gentle(algebra)
    except NotFiniteDimensional as exc:
        raise MalformedInput(str(exc), "/arrows") from exc
    if not report.valid:
        return _emit_report(args, report)
    if args.json:
        _print(as_json(gentle_table(algebra)))
    else:
        _print(render_gentle(algebra))
    return EXIT_OK


def run_functor(args: argparse.Namespace) -> int:
    if args.what == "object":
        image = object_image(codec.load_as(args.input, "complex", args.field))
        _emit_one(args, codec.object_to_doc(image.value, image.placement))
    else:
        image = morphism_image(codec.load_as(args.input, "chainmap", args.field))
        _emit_one(args, codec.morphism_to_doc(image.value, image.placement))
    return EXIT_OK


def run_homotopy(args: argparse.Namespace) -> int:
    phi = codec.load_as(args.phi, "chainmap", args.field)
    psi = codec.load_as(args.psi, "chainmap", args.field) if args.psi else zero_chain_map(phi.source, phi.target)
    if args.compare:
        report = check_homotopy_equiv(subtract_chain_maps(phi, psi))
        _print(as_json(report) if args.json else render_equivalence(report))
        return EXIT_OK if report.homotopic else EXIT_NO
    witness = homotopy_witness(phi, psi)
    if witness is None:
        return _say_no(args, "not homotopic")
    _emit_one(args, codec.homotopy_to_doc(witness))
    return EXIT_OK


def run_generate(args: argparse.Namespace) -> int:
    field = codec.resolve_field(args.field, None)
    rng = random.Random(args.seed)
    if args.what == "object":
        poset = random_poset(rng, args.size)
        _emit_one(args, codec.object_to_doc(random_object(poset, field, rng, args.depth)))
    else:
        algebra = codec.load_as(args.algebra, "quiver", args.field) if args.algebra else algebra_a1()
        _emit_one(args, codec.complex_to_doc(random_complex(algebra, field, rng, args.depth)))
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    try:
        settings = RunConfig(
            field=args.battery_field or args.field or config.PROPERTY_FIELD,
            seed=args.seed,
            trials=args.trials,
            json_reports=args.json,
        )
    except ValidationError as exc:
        raise MalformedInput(exc.errors()[0]["msg"], "/" + "/".join(map(str, exc.errors()[0]["loc"]))) from exc
    summary = verify_axioms(
        seed=settings.seed,
        trials=settings.trials,
        field=Field.parse(settings.field),
        only=args.only,
        workers=max(1, args.workers),
        counts=ACCEPTANCE_TRIALS if args.acceptance else None,
    )
    _print(as_json(summary) if settings.json_reports else render_summary(summary))
    return EXIT_OK if summary.failure_count == 0 else EXIT_INVALID


HANDLERS: dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": run_validate,
    "shift": run_shift,
    "cone": run_cone,
    "equiv": run_equiv,
    "iso": run_iso,
    "rotate": run_rotate,
    "tr3": run_tr3,
    "octahedron": run_octahedron,
    "gentle": run_gentle,
    "functor": run_functor,
    "homotopy": run_homotopy,
    "generate": run_generate,
    "verify-axioms": run_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    setup_logging(args.log_level)
    try:
        return HANDLERS[args.command](args)
    except MalformedInput as exc:
        LOGGER.error("malformed input: %s", exc)
        return EXIT_MALFORMED
    except BondcatError as exc:
        LOGGER.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
