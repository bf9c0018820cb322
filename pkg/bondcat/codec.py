"""JSON documents ("bondcat/1") to domain values and back.

Nested objects, complexes and algebras are either inline documents or paths
relative to the file that mentions them.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path as FilePath
from typing import Any, Mapping

from pydantic import TypeAdapter, ValidationError

from bondcat import config
from bondcat.category import BondMorphism, BondObject
from bondcat.complexes import ChainMap, HomotopyWitness, PathMap, ProjComplex
from bondcat.cones import Triangle
from bondcat.equiv import KMatrixWitness, Variant
from bondcat.errors import BondcatError, MalformedInput, NotFiniteDimensional, UnknownPath
from bondcat.gentle import GentleAlgebra, validate_gentle
from bondcat.poset import BasePoset, GradedElement
from bondcat.scalar import DenseMatrix, Field
from bondcat.schemas import (
    AnyDocument,
    BundleDoc,
    ChainMapDoc,
    ComplexDoc,
    HomotopyDoc,
    MorphismDoc,
    ObjectDoc,
    QuiverDoc,
    TriangleDoc,
    WitnessDoc,
)

LOGGER = logging.getLogger(__name__)

_ADAPTER = TypeAdapter(AnyDocument)
_TYPE_TAGS = {
    "str",
    "ObjectDoc",
    "MorphismDoc",
    "WitnessDoc",
    "QuiverDoc",
    "ComplexDoc",
    "ChainMapDoc",
    "HomotopyDoc",
    "TriangleDoc",
    "BundleDoc",
    "int",
    "constrained-int",
}
_KIND_HINTS = (
    ("arrows", "quiver"),
    ("vertices", "quiver"),
    ("poset", "object"),
    ("degrees", "complex"),
    ("differentials", "complex"),
    ("components", "chainmap"),
    ("items", "bundle"),
)


def pointer_of(loc: tuple) -> str:
    parts = [str(part) for part in loc[1:] if str(part) not in _TYPE_TAGS]
    return "/" + "/".join(parts)


def infer_kind(raw: Mapping[str, Any]) -> str | None:
    for key, kind in _KIND_HINTS:
        if key in raw:
            return kind
    return None


def parse_document(raw: Any, pointer: str = ""):
    """Validates one JSON value as a document, inferring a missing "kind"."""
    if not isinstance(raw, dict):
        raise MalformedInput("document must be a JSON object", pointer or "/")
    if "kind" not in raw:
        kind = infer_kind(raw)
        if kind is None:
            raise MalformedInput("cannot tell the document kind; add a \"kind\" field", f"{pointer}/kind")
        raw = {**raw, "kind": kind}
    try:
        return _ADAPTER.validate_python(raw)
    except ValidationError as exc:
        errors = exc.errors()
        chosen = next((err for err in errors if "str" not in err["loc"]), errors[0])
        raise MalformedInput(chosen["msg"], f"{pointer}{pointer_of(chosen['loc'])}") from exc


def read_json(path: str | FilePath) -> Any:
    file_path = FilePath(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {file_path}: {exc.strerror}", "") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "") from exc


def resolve_field(cli_field: str | None, doc_field: str | None) -> Field:
    """CLI flag, then the document's own "field", then BONDCAT_FIELD."""
    try:
        return Field.parse(cli_field or doc_field or config.DEFAULT_FIELD)
    except ValueError as exc:
        raise MalformedInput(str(exc), "/field") from exc


def _require_gentle(algebra: GentleAlgebra, pointer: str) -> None:
    try:
        report = validate_gentle(algebra)
    except NotFiniteDimensional as exc:
        raise MalformedInput(str(exc), f"{pointer}/relations") from exc
    except ValueError as exc:
        raise MalformedInput(str(exc), f"{pointer}/maximal_order") from exc
    if not report.valid:
        first = report.violations[0]
        where = "relations" if first.condition == "(iv)" else "arrows"
        raise MalformedInput(
            f"not a gentle algebra: {first.condition} at {first.location}: {first.detail}", f"{pointer}/{where}"
        )


class Decoder:
    """Turns validated documents into domain values over one field."""

    def __init__(self, field: Field, base_dir: FilePath) -> None:
        self.field = field
        self.base_dir = base_dir
        self._algebras: dict[str, GentleAlgebra] = {}

    def _ref(self, value: Any, expected: type, pointer: str):
        if not isinstance(value, str):
            return value, self.base_dir
        path = (self.base_dir / value).resolve()
        doc = parse_document(read_json(path), "")
        if not isinstance(doc, expected):
            raise MalformedInput(f"{value} is a {doc.kind} document, expected {expected.__name__}", pointer)
        return doc, path.parent

    def _nested(self, value: Any, expected: type, pointer: str):
        doc, base = self._ref(value, expected, pointer)
        if base == self.base_dir:
            return doc, self
        return doc, Decoder(self.field, base)

    def matrix(self, rows: list, shape: tuple[int, int], pointer: str) -> DenseMatrix:
        try:
            if not rows:
                return DenseMatrix.zeros(self.field, *shape)
            return DenseMatrix.from_rows(self.field, rows)
        except (ValueError, BondcatError) as exc:
            raise MalformedInput(str(exc), pointer) from exc

    def poset(self, doc, pointer: str) -> BasePoset:
        try:
            return BasePoset.from_pairs(doc.elements, doc.involution)
        except (ValueError, BondcatError) as exc:
            raise MalformedInput(str(exc), f"{pointer}/poset") from exc

    def element(self, poset: BasePoset, ref: tuple[str, int], pointer: str) -> GradedElement:
        try:
            return poset.element(ref[0], ref[1])
        except BondcatError as exc:
            raise MalformedInput(str(exc), pointer) from exc

    def _blocks(self, docs, poset, row_dims, col_dims, pointer: str):
        blocks = {}
        for index, block in enumerate(docs):
            here = f"{pointer}/blocks/{index}"
            row = self.element(poset, block.row, f"{here}/row")
            col = self.element(poset, block.col, f"{here}/col")
            shape = (row_dims.get(row, 0), col_dims.get(col, 0))
            matrix = self.matrix(block.entries, shape, f"{here}/entries")
            blocks[(row, col)] = blocks[(row, col)] + matrix if (row, col) in blocks else matrix
        return blocks

    def object(self, value: Any, pointer: str = "") -> BondObject:
        doc, decoder = self._nested(value, ObjectDoc, pointer)
        poset = decoder.poset(doc.poset, pointer)
        dims = {}
        for index, (name, degree, size) in enumerate(doc.dims):
            element = decoder.element(poset, (name, degree), f"{pointer}/dims/{index}")
            dims[element] = dims.get(element, 0) + size
        blocks = decoder._blocks(doc.blocks, poset, dims, dims, pointer)
        try:
            return BondObject.build(poset, self.field, dims, blocks)
        except BondcatError as exc:
            raise MalformedInput(str(exc), f"{pointer}/dims") from exc

    def _frame(self, doc, pointer: str) -> tuple[BondObject, BondObject]:
        source = self.object(doc.source, f"{pointer}/source")
        target = self.object(doc.target, f"{pointer}/target")
        if source.poset != target.poset:
            raise MalformedInput("source and target use different posets", f"{pointer}/target/poset")
        return source, target

    def morphism(self, value: Any, pointer: str = "") -> BondMorphism:
        doc, decoder = self._nested(value, MorphismDoc, pointer)
        source, target = decoder._frame(doc, pointer)
        blocks = decoder._blocks(doc.blocks, source.poset, source.dims, target.dims, pointer)
        return BondMorphism.build(source, target, blocks)

    def witness(self, value: Any, pointer: str = "") -> KMatrixWitness:
        doc, decoder = self._nested(value, WitnessDoc, pointer)
        source, target = decoder._frame(doc, pointer)
        blocks = decoder._blocks(doc.blocks, source.poset, source.dims, target.dims, pointer)
        return KMatrixWitness.build(source, target, blocks, variant=Variant.parse(doc.variant))

    def algebra(self, value: Any, pointer: str = "", check: bool = True) -> GentleAlgebra:
        """Builds the algebra; with ``check`` it must also pass validate_gentle."""
        cache_key = value if isinstance(value, str) else None
        if cache_key is not None and cache_key in self._algebras:
            return self._algebras[cache_key]
        doc, _ = self._nested(value, QuiverDoc, pointer)
        try:
            algebra = GentleAlgebra.build(
                doc.vertices,
                [(arrow.name, arrow.source, arrow.target) for arrow in doc.arrows],
                doc.relations,
                doc.maximal_order,
            )
        except (ValueError, BondcatError) as exc:
            raise MalformedInput(str(exc), f"{pointer}/arrows") from exc
        if check:
            _require_gentle(algebra, pointer)
        if cache_key is not None:
            self._algebras[cache_key] = algebra
        return algebra

    def _families(self, algebra: GentleAlgebra, docs: Mapping[str, list], shape_of, pointer: str):
        families: dict[int, dict] = {}
        for degree_text, entries in docs.items():
            degree = self._degree(degree_text, f"{pointer}/{degree_text}")
            family = families.setdefault(degree, {})
            for index, entry in enumerate(entries):
                here = f"{pointer}/{degree_text}/{index}"
                try:
                    path = algebra.parse_path(entry.path)
                except UnknownPath as exc:
                    raise MalformedInput(f"{entry.path!r} is not a nonzero path", f"{here}/path") from exc
                matrix = self.matrix(entry.matrix, shape_of(degree, path), f"{here}/matrix")
                family[path] = family[path] + matrix if path in family else matrix
        return families

    @staticmethod
    def _degree(text: str, pointer: str) -> int:
        try:
            return int(text)
        except ValueError as exc:
            raise MalformedInput(f"degree {text!r} is not an integer", pointer) from exc

    def complex(self, value: Any, pointer: str = "") -> ProjComplex:
        doc, decoder = self._nested(value, ComplexDoc, pointer)
        algebra = decoder.algebra(doc.algebra, f"{pointer}/algebra")
        multiplicities = {}
        for degree_text, counts in doc.degrees.items():
            degree = self._degree(degree_text, f"{pointer}/degrees/{degree_text}")
            for vertex, count in counts.items():
                if vertex not in algebra.vertices:
                    raise MalformedInput(f"unknown vertex {vertex!r}", f"{pointer}/degrees/{degree_text}/{vertex}")
                multiplicities[(vertex, degree)] = count
        frame = ProjComplex.build(algebra, self.field, multiplicities, {})
        families = decoder._families(algebra, doc.differentials, frame.differential_shape, f"{pointer}/differentials")
        try:
            return ProjComplex.build(algebra, self.field, multiplicities, families)
        except BondcatError as exc:
            raise MalformedInput(str(exc), f"{pointer}/degrees") from exc

    def _path_map(self, cls: type[PathMap], doc, pointer: str):
        source = self.complex(doc.source, f"{pointer}/source")
        target = self.complex(doc.target, f"{pointer}/target")
        if source.algebra != target.algebra:
            raise MalformedInput("source and target use different algebras", f"{pointer}/target/algebra")
        frame = cls.build(source, target, {})
        families = self._families(source.algebra, doc.components, frame.shape, f"{pointer}/components")
        return cls.build(source, target, families)

    def chain_map(self, value: Any, pointer: str = "") -> ChainMap:
        doc, decoder = self._nested(value, ChainMapDoc, pointer)
        return decoder._path_map(ChainMap, doc, pointer)

    def homotopy(self, value: Any, pointer: str = "") -> HomotopyWitness:
        doc, decoder = self._nested(value, HomotopyDoc, pointer)
        return decoder._path_map(HomotopyWitness, doc, pointer)

    def triangle(self, value: Any, pointer: str = "") -> Triangle:
        doc, decoder = self._nested(value, TriangleDoc, pointer)
        return Triangle(
            X=decoder.object(doc.X, f"{pointer}/X"),
            Y=decoder.object(doc.Y, f"{pointer}/Y"),
            Z=decoder.object(doc.Z, f"{pointer}/Z"),
            u=decoder.morphism(doc.u, f"{pointer}/u"),
            v=decoder.morphism(doc.v, f"{pointer}/v"),
            w=decoder.morphism(doc.w, f"{pointer}/w"),
        )

    def value(self, doc, pointer: str = "") -> Any:
        if isinstance(doc, BundleDoc):
            return {name: self.value(parse_document(item, f"{pointer}/items/{name}"), f"{pointer}/items/{name}") for name, item in doc.items.items()}
        readers = {
            "object": self.object,
            "morphism": self.morphism,
            "witness": self.witness,
            "quiver": lambda quiver, where: self.algebra(quiver, where, check=False),
            "complex": self.complex,
            "chainmap": self.chain_map,
            "homotopy": self.homotopy,
            "triangle": self.triangle,
        }
        return readers[doc.kind](doc, pointer)


def load(path: str | FilePath, field: str | None = None) -> tuple[str, Any]:
    """Reads a document file; returns its kind and the decoded value."""
    file_path = FilePath(path)
    doc = parse_document(read_json(file_path))
    decoder = Decoder(resolve_field(field, doc.field), file_path.resolve().parent)
    LOGGER.debug("loading %s document from %s over %s", doc.kind, file_path, decoder.field.label)
    return doc.kind, decoder.value(doc)


def load_as(path: str | FilePath, kind: str, field: str | None = None) -> Any:
    found, value = load(path, field)
    if found != kind:
        raise MalformedInput(f"expected a {kind} document, got {found}", "/kind")
    return value


def _header(field: Field, kind: str) -> dict[str, Any]:
    return {"format": config.FORMAT_TAG, "kind": kind, "field": field.label}


def _element_ref(poset: BasePoset, element: GradedElement) -> list:
    return [poset.name(element.base), element.degree]


def _block_docs(poset: BasePoset, blocks) -> list[dict[str, Any]]:
    ordered = sorted(blocks.items(), key=lambda item: (item[0][0].key, item[0][1].key))
    return [
        {
            "row": _element_ref(poset, row),
            "col": _element_ref(poset, col),
            "entries": matrix.formatted_rows(),
        }
        for (row, col), matrix in ordered
    ]


def _placement_docs(poset: BasePoset, placement) -> list[dict[str, Any]]:
    ordered = sorted(placement.items(), key=lambda item: (item[0][0].key, item[0][1].key))
    return [
        {"path": path, "degree": degree, "row": _element_ref(poset, row), "col": _element_ref(poset, col)}
        for (row, col), (path, degree) in ordered
    ]


def object_to_doc(obj: BondObject, placement=None) -> dict[str, Any]:
    doc = _header(obj.field, "object")
    doc["poset"] = {"elements": list(obj.poset.elements), "involution": obj.poset.pairs()}
    doc["dims"] = [[obj.poset.name(x.base), x.degree, size] for x, size in obj.dims.items()]
    doc["blocks"] = _block_docs(obj.poset, obj.blocks)
    if placement is not None:
        doc["placement"] = _placement_docs(obj.poset, placement)
    return doc


def morphism_to_doc(morphism: BondMorphism, placement=None) -> dict[str, Any]:
    doc = _header(morphism.field, "morphism")
    doc["source"] = _nested_object(morphism.source)
    doc["target"] = _nested_object(morphism.target)
    doc["blocks"] = _block_docs(morphism.poset, morphism.blocks)
    if placement is not None:
        doc["placement"] = _placement_docs(morphism.poset, placement)
    return doc


def witness_to_doc(witness: KMatrixWitness) -> dict[str, Any]:
    doc = _header(witness.field, "witness")
    doc["variant"] = Variant.parse(witness.variant).value
    doc["source"] = _nested_object(witness.source)
    doc["target"] = _nested_object(witness.target)
    doc["blocks"] = _block_docs(witness.poset, witness.blocks)
    return doc


def _nested_object(obj: BondObject) -> dict[str, Any]:
    doc = object_to_doc(obj)
    for key in ("format", "field"):
        doc.pop(key)
    return doc


def algebra_to_doc(algebra: GentleAlgebra) -> dict[str, Any]:
    return {
        "format": config.FORMAT_TAG,
        "kind": "quiver",
        "vertices": list(algebra.vertices),
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in algebra.quiver.arrows],
        "relations": [list(pair) for pair in sorted(algebra.relations)],
        "maximal_order": [path.name for path in algebra.maximal_paths],
    }


def _family_docs(algebra: GentleAlgebra, families) -> dict[str, list]:
    order = {path: index for index, path in enumerate(algebra.paths)}
    return {
        str(degree): [
            {"path": path.name, "matrix": matrix.formatted_rows()}
            for path, matrix in sorted(family.items(), key=lambda item: order[item[0]])
        ]
        for degree, family in sorted(families.items())
    }


def complex_to_doc(P: ProjComplex, nested: bool = False) -> dict[str, Any]:
    doc = {} if nested else _header(P.field, "complex")
    if nested:
        doc["kind"] = "complex"
    algebra = algebra_to_doc(P.algebra)
    algebra.pop("format")
    doc["algebra"] = algebra
    degrees: dict[str, dict[str, int]] = {}
    for (vertex, degree), count in P.multiplicities.items():
        degrees.setdefault(str(degree), {})[vertex] = count
    doc["degrees"] = degrees
    doc["differentials"] = _family_docs(P.algebra, P.differentials)
    return doc


def _path_map_to_doc(value: PathMap, kind: str) -> dict[str, Any]:
    doc = _header(value.field, kind)
    doc["source"] = complex_to_doc(value.source, nested=True)
    doc["target"] = complex_to_doc(value.target, nested=True)
    doc["components"] = _family_docs(value.algebra, value.components)
    return doc


def chain_map_to_doc(phi: ChainMap) -> dict[str, Any]:
    return _path_map_to_doc(phi, "chainmap")


def homotopy_to_doc(witness: HomotopyWitness) -> dict[str, Any]:
    return _path_map_to_doc(witness, "homotopy")


def triangle_to_doc(triangle: Triangle) -> dict[str, Any]:
    doc = _header(triangle.X.field, "triangle")
    for name in ("X", "Y", "Z"):
        doc[name] = _nested_object(getattr(triangle, name))
    for name in ("u", "v", "w"):
        morphism = morphism_to_doc(getattr(triangle, name))
        for key in ("format", "field"):
            morphism.pop(key)
        doc[name] = morphism
    return doc


def bundle_doc(field: Field, items: Mapping[str, dict[str, Any]]) -> dict[str, Any]:
    doc = _header(field, "bundle")
    doc["items"] = dict(items)
    return doc


def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write(doc: Mapping[str, Any], path: str | FilePath) -> None:
    file_path = FilePath(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(dumps(doc), encoding="utf-8")
