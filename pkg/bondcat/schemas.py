from __future__ import annotations

from typing import Annotated, Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, field_validator

from bondcat.config import FORMAT_TAG
from bondcat.scalar import Field as ScalarField

ScalarValue = Union[StrictInt, str]
MatrixRows = list[list[ScalarValue]]


class Violation(BaseModel):
    condition: str
    location: str
    detail: str = ""


class ValidationReport(BaseModel):
    subject: str
    valid: bool = True
    violations: list[Violation] = Field(default_factory=list)

    def add(self, condition: str, location: str, detail: str = "") -> None:
        self.violations.append(Violation(condition=condition, location=location, detail=detail))
        self.valid = False

    def merge(self, other: "ValidationReport", prefix: str = "") -> None:
        for violation in other.violations:
            self.add(violation.condition, f"{prefix}{violation.location}", violation.detail)


class EquivalenceReport(BaseModel):
    homotopic: bool
    k_paired: bool
    k_plain: Optional[bool] = None
    kappa: Optional[bool] = None
    conversions_verified: bool = False


class BatterySummary(BaseModel):
    name: str
    trials: int = 0
    passed: int = 0
    failures: list[str] = Field(default_factory=list)
    notes: Dict[str, int] = Field(default_factory=dict)


class HarnessSummary(BaseModel):
    format: str = FORMAT_TAG
    seed: int
    trials: int
    field: str
    batteries: list[BatterySummary] = Field(default_factory=list)

    @property
    def failure_count(self) -> int:
        return sum(len(battery.failures) for battery in self.batteries)


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    format: str = FORMAT_TAG
    field: Optional[str] = None

    @field_validator("format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value != FORMAT_TAG:
            raise ValueError(f"unsupported format {value!r}, expected {FORMAT_TAG!r}")
        return value


class PosetDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    elements: list[str]
    involution: Dict[str, str] = Field(default_factory=dict)


class BlockDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    row: tuple[str, StrictInt]
    col: tuple[str, StrictInt]
    entries: MatrixRows


class PlacementDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str
    degree: StrictInt
    row: tuple[str, StrictInt]
    col: tuple[str, StrictInt]


class ObjectDoc(_Document):
    kind: Literal["object"] = "object"
    poset: PosetDoc
    dims: list[tuple[str, StrictInt, StrictInt]] = Field(default_factory=list)
    blocks: list[BlockDoc] = Field(default_factory=list)
    placement: Optional[list[PlacementDoc]] = None


ObjectRef = Union[ObjectDoc, str]


class MorphismDoc(_Document):
    kind: Literal["morphism"] = "morphism"
    source: ObjectRef
    target: ObjectRef
    blocks: list[BlockDoc] = Field(default_factory=list)
    placement: Optional[list[PlacementDoc]] = None


class WitnessDoc(_Document):
    kind: Literal["witness"] = "witness"
    variant: Literal["K", "kappa", "K-paired"] = "K"
    source: ObjectRef
    target: ObjectRef
    blocks: list[BlockDoc] = Field(default_factory=list)


MorphismRef = Union[MorphismDoc, str]


class ArrowDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")


class QuiverDoc(_Document):
    kind: Literal["quiver"] = "quiver"
    vertices: list[str]
    arrows: list[ArrowDoc] = Field(default_factory=list)
    relations: list[tuple[str, str]] = Field(default_factory=list)
    maximal_order: Optional[list[str]] = None


class PathMatrixDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str
    matrix: MatrixRows


class ComplexDoc(_Document):
    kind: Literal["complex"] = "complex"
    algebra: Union[QuiverDoc, str]
    degrees: Dict[str, Dict[str, StrictInt]] = Field(default_factory=dict)
    differentials: Dict[str, list[PathMatrixDoc]] = Field(default_factory=dict)


ComplexRef = Union[ComplexDoc, str]


class ChainMapDoc(_Document):
    kind: Literal["chainmap"] = "chainmap"
    source: ComplexRef
    target: ComplexRef
    components: Dict[str, list[PathMatrixDoc]] = Field(default_factory=dict)


class HomotopyDoc(_Document):
    kind: Literal["homotopy"] = "homotopy"
    source: ComplexRef
    target: ComplexRef
    components: Dict[str, list[PathMatrixDoc]] = Field(default_factory=dict)


class TriangleDoc(_Document):
    kind: Literal["triangle"] = "triangle"
    X: ObjectRef
    Y: ObjectRef
    Z: ObjectRef
    u: MorphismRef
    v: MorphismRef
    w: MorphismRef


class BundleDoc(_Document):
    kind: Literal["bundle"] = "bundle"
    items: Dict[str, Any] = Field(default_factory=dict)


AnyDocument = Annotated[
    Union[
        ObjectDoc,
        MorphismDoc,
        WitnessDoc,
        QuiverDoc,
        ComplexDoc,
        ChainMapDoc,
        HomotopyDoc,
        TriangleDoc,
        BundleDoc,
    ],
    Field(discriminator="kind"),
]


class RunConfig(BaseModel):
    """Settings of one CLI run after flags, document fields and environment are merged."""

    field: str = "rational"
    inputs: list[str] = Field(default_factory=list)
    output: Optional[str] = None
    seed: int = Field(default=1, ge=-(2**63), le=2**63 - 1)
    trials: int = Field(default=1, ge=1)
    variant: Literal["K", "kappa", "K-paired"] = "K"
    json_reports: bool = False

    @field_validator("field")
    @classmethod
    def _known_field(cls, value: str) -> str:
        return ScalarField.parse(value).label
