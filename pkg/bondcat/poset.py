from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from bondcat.errors import DegreeOverflow, ForeignElement

DEGREE_MIN = -(2**63)
DEGREE_MAX = 2**63 - 1


def checked_degree(value: int) -> int:
    if value < DEGREE_MIN or value > DEGREE_MAX:
        raise DegreeOverflow(f"degree {value} leaves the 64-bit range")
    return value


@dataclass(frozen=True, order=False)
class GradedElement:
    """The element [u, i] of the graded poset, with u given by its index."""

    base: int
    degree: int

    def __post_init__(self) -> None:
        checked_degree(self.degree)

    @property
    def key(self) -> tuple[int, int]:
        return (self.degree, self.base)

    def shifted(self, offset: int) -> "GradedElement":
        return GradedElement(self.base, checked_degree(self.degree + offset))

    def __lt__(self, other: "GradedElement") -> bool:
        return self.key < other.key

    def __le__(self, other: "GradedElement") -> bool:
        return self.key <= other.key


@dataclass(frozen=True, eq=False)
class BasePoset:
    """A finite linear order u_0 < u_1 < ... with an involution on its indices."""

    elements: tuple[str, ...]
    involution: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("poset elements must be distinct")
        if len(self.involution) != len(self.elements):
            raise ValueError("involution must have one entry per element")
        for index, image in enumerate(self.involution):
            if not 0 <= image < len(self.elements) or self.involution[image] != index:
                raise ValueError(f"involution is not of order two at {self.elements[index]!r}")

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Mapping[str, str] | None = None) -> "BasePoset":
        names = tuple(elements)
        position = {name: index for index, name in enumerate(names)}
        images = list(range(len(names)))
        for left, right in (pairs or {}).items():
            if left not in position or right not in position:
                raise ForeignElement(f"involution names unknown element {left!r} or {right!r}")
            for source, target in ((left, right), (right, left)):
                current = images[position[source]]
                if current != position[source] and current != position[target]:
                    raise ValueError(f"element {source!r} is paired twice")
                images[position[source]] = position[target]
        return cls(names, tuple(images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasePoset):
            return NotImplemented
        return self.elements == other.elements and self.involution == other.involution

    def __hash__(self) -> int:
        return hash((self.elements, self.involution))

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def _position(self) -> dict[str, int]:
        return {name: index for index, name in enumerate(self.elements)}

    def index(self, name: str) -> int:
        try:
            return self._position[name]
        except KeyError as exc:
            raise ForeignElement(f"{name!r} is not an element of the poset") from exc

    def name(self, base: int) -> str:
        return self.elements[base]

    def element(self, name: str, degree: int) -> GradedElement:
        return GradedElement(self.index(name), degree)

    def check(self, element: GradedElement) -> GradedElement:
        if not 0 <= element.base < len(self.elements):
            raise ForeignElement(f"base index {element.base} is outside the poset")
        return element

    def compare(self, left: GradedElement, right: GradedElement) -> int:
        """Anti-lexicographic order: degree first, then base."""
        self.check(left)
        self.check(right)
        if left.key == right.key:
            return 0
        return -1 if left.key < right.key else 1

    def involution_of(self, element: GradedElement) -> GradedElement:
        self.check(element)
        return GradedElement(self.involution[element.base], element.degree)

    def is_fixed(self, base: int) -> bool:
        return self.involution[base] == base

    def pairs(self) -> dict[str, str]:
        return {
            self.elements[index]: self.elements[image]
            for index, image in enumerate(self.involution)
            if index < image
        }

    def label(self, element: GradedElement) -> str:
        return f"[{self.name(element.base)},{element.degree}]"
