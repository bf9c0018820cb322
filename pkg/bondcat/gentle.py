from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from bondcat.errors import EndpointMismatch, InvolutionArity, NotFiniteDimensional, UnknownPath
from bondcat.poset import BasePoset
from bondcat.schemas import ValidationReport

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A basis path: a trivial path e_v, or a sequence of arrows."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def name(self) -> str:
        return "".join(self.arrows) if self.arrows else f"e{self.source}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        names = [arrow.name for arrow in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        known = set(self.vertices)
        for arrow in self.arrows:
            if arrow.source not in known or arrow.target not in known:
                raise ValueError(f"arrow {arrow.name!r} has an unknown endpoint")

    @cached_property
    def arrow_by_name(self) -> dict[str, Arrow]:
        return {arrow.name: arrow for arrow in self.arrows}


@dataclass(frozen=True)
class AlgebraPosetElement:
    maximal: int
    length: int


@dataclass(frozen=True, eq=False)
class AlgebraPoset(BasePoset):
    """The poset Y(A): prefix chains of the maximal paths, in the order on M."""

    cells: tuple[AlgebraPosetElement, ...] = ()
    targets: tuple[str, ...] = ()
    prefixes: tuple[Path, ...] = ()

    def cell_index(self, maximal: int, length: int) -> int:
        return self._cell_position[(maximal, length)]

    @cached_property
    def _cell_position(self) -> dict[tuple[int, int], int]:
        return {(cell.maximal, cell.length): index for index, cell in enumerate(self.cells)}

    def copies_of_vertex(self, vertex: str) -> list[int]:
        return [index for index, target in enumerate(self.targets) if target == vertex]


@dataclass(frozen=True, eq=False)
class GentleAlgebra:
    quiver: Quiver
    relations: frozenset[tuple[str, str]]
    maximal_order: tuple[str, ...] | None = None

    @classmethod
    def build(
        cls,
        vertices: Sequence[str],
        arrows: Iterable[tuple[str, str, str]],
        relations: Iterable[tuple[str, str]] = (),
        maximal_order: Sequence[str] | None = None,
    ) -> "GentleAlgebra":
        quiver = Quiver(tuple(vertices), tuple(Arrow(*arrow) for arrow in arrows))
        return cls(
            quiver,
            frozenset((left, right) for left, right in relations),
            tuple(maximal_order) if maximal_order is not None else None,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GentleAlgebra):
            return NotImplemented
        if self is other:
            return True
        return (
            self.quiver == other.quiver
            and self.relations == other.relations
            and [p.name for p in self.maximal_paths] == [p.name for p in other.maximal_paths]
        )

    def __hash__(self) -> int:
        return hash((self.quiver, self.relations))

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def arrow(self, name: str) -> Arrow:
        try:
            return self.quiver.arrow_by_name[name]
        except KeyError as exc:
            raise UnknownPath(f"{name!r} is not an arrow of the quiver") from exc

    def successor(self, name: str) -> str | None:
        arrow = self.arrow(name)
        for candidate in self.quiver.arrows:
            if candidate.source == arrow.target and (name, candidate.name) not in self.relations:
                return candidate.name
        return None

    def predecessor(self, name: str) -> str | None:
        arrow = self.arrow(name)
        for candidate in self.quiver.arrows:
            if candidate.target == arrow.source and (candidate.name, name) not in self.relations:
                return candidate.name
        return None

    def trivial(self, vertex: str) -> Path:
        return Path(vertex, vertex)

    def make_path(self, arrows: Sequence[str]) -> Path:
        if not arrows:
            raise ValueError("use trivial() for paths of length zero")
        first, last = self.arrow(arrows[0]), self.arrow(arrows[-1])
        return Path(first.source, last.target, tuple(arrows))

    @cached_property
    def maximal_paths(self) -> tuple[Path, ...]:
        found: list[Path] = []
        covered: set[str] = set()
        for arrow in self.quiver.arrows:
            if self.predecessor(arrow.name) is not None:
                continue
            chain = [arrow.name]
            while (following := self.successor(chain[-1])) is not None:
                if following in chain:
                    raise NotFiniteDimensional(f"the path through {following!r} never vanishes")
                chain.append(following)
            covered.update(chain)
            found.append(self.make_path(chain))
        leftover = [arrow.name for arrow in self.quiver.arrows if arrow.name not in covered]
        if leftover:
            raise NotFiniteDimensional(f"arrows {leftover} lie on an oriented cycle without relations")
        touched = {vertex for path in found for vertex in self._vertices_on(path)}
        found.extend(self.trivial(vertex) for vertex in self.vertices if vertex not in touched)
        return self._apply_order(found)

    def _vertices_on(self, path: Path) -> list[str]:
        visited = [path.source]
        for name in path.arrows:
            visited.append(self.arrow(name).target)
        return visited

    def _apply_order(self, found: list[Path]) -> tuple[Path, ...]:
        if self.maximal_order is None:
            return tuple(found)
        by_name = {path.name: path for path in found}
        if sorted(by_name) != sorted(self.maximal_order):
            raise ValueError(
                f"maximal_order {list(self.maximal_order)} does not list the maximal paths {sorted(by_name)}"
            )
        return tuple(by_name[name] for name in self.maximal_order)

    @cached_property
    def embeddings(self) -> dict[Path, tuple[int, int]]:
        """Nontrivial path -> (maximal path index, start offset)."""
        placed: dict[Path, tuple[int, int]] = {}
        for index, maximal in enumerate(self.maximal_paths):
            arrows = maximal.arrows
            for start in range(len(arrows)):
                for stop in range(start + 1, len(arrows) + 1):
                    placed.setdefault(self.make_path(arrows[start:stop]), (index, start))
        return placed

    @cached_property
    def paths(self) -> tuple[Path, ...]:
        trivial = [self.trivial(vertex) for vertex in self.vertices]
        nontrivial = sorted(self.embeddings, key=lambda path: (path.length, self.embeddings[path]))
        return tuple(trivial + nontrivial)

    @cached_property
    def path_by_name(self) -> dict[str, Path]:
        return {path.name: path for path in self.paths}

    def parse_path(self, name: str) -> Path:
        try:
            return self.path_by_name[name]
        except KeyError as exc:
            raise UnknownPath(f"{name!r} is not a nonzero path of the algebra") from exc

    def path_mul(self, left: Path, right: Path) -> Path | None:
        """Product left·right (left first); None when a relation kills it."""
        if left.target != right.source:
            raise EndpointMismatch(f"{left.name} ends at {left.target}, {right.name} starts at {right.source}")
        if left.is_trivial:
            return right
        if right.is_trivial:
            return left
        candidate = Path(left.source, right.target, left.arrows + right.arrows)
        return candidate if candidate in self.embeddings else None

    @cached_property
    def factorizations(self) -> dict[Path, tuple[tuple[Path, Path], ...]]:
        """Every basis path w with its splittings w = w1·w2 into basis paths."""
        result: dict[Path, list[tuple[Path, Path]]] = defaultdict(list)
        for path in self.paths:
            if path.is_trivial:
                result[path].append((path, path))
                continue
            result[path].append((self.trivial(path.source), path))
            for cut in range(1, path.length):
                result[path].append((self.make_path(path.arrows[:cut]), self.make_path(path.arrows[cut:])))
            result[path].append((path, self.trivial(path.target)))
        return {path: tuple(pairs) for path, pairs in result.items()}

    @cached_property
    def poset(self) -> AlgebraPoset:
        return build_algebra_poset(self)


def validate_gentle(algebra: GentleAlgebra) -> ValidationReport:
    report = ValidationReport(subject="gentle algebra")
    quiver = algebra.quiver
    known = quiver.arrow_by_name
    for left, right in sorted(algebra.relations):
        if left not in known or right not in known:
            report.add("(iv)", f"{left}{right}", "relation names an unknown arrow")
        elif known[left].target != known[right].source:
            report.add("(iv)", f"{left}{right}", "relation is not a path of length two")
    if not report.valid:
        return report

    for vertex in quiver.vertices:
        outgoing = [arrow for arrow in quiver.arrows if arrow.source == vertex]
        incoming = [arrow for arrow in quiver.arrows if arrow.target == vertex]
        if len(outgoing) > 2 or len(incoming) > 2:
            report.add("(i)", vertex, f"{len(outgoing)} outgoing and {len(incoming)} incoming arrows")

    for arrow in quiver.arrows:
        after = [other for other in quiver.arrows if other.source == arrow.target]
        before = [other for other in quiver.arrows if other.target == arrow.source]
        free_after = [o.name for o in after if (arrow.name, o.name) not in algebra.relations]
        free_before = [o.name for o in before if (o.name, arrow.name) not in algebra.relations]
        if len(free_after) > 1 or len(free_before) > 1:
            report.add("(ii)", arrow.name, "more than one arrow composes with it outside the ideal")
        bound_after = [o.name for o in after if (arrow.name, o.name) in algebra.relations]
        bound_before = [o.name for o in before if (o.name, arrow.name) in algebra.relations]
        if len(bound_after) > 1 or len(bound_before) > 1:
            report.add("(iii)", arrow.name, "more than one arrow composes with it inside the ideal")

    if report.valid:
        # raises NotFiniteDimensional for a cycle that never vanishes
        _ = algebra.maximal_paths
    return report


def enumerate_paths(algebra: GentleAlgebra) -> tuple[Path, ...]:
    return algebra.paths


def maximal_paths(algebra: GentleAlgebra) -> tuple[Path, ...]:
    return algebra.maximal_paths


def build_algebra_poset(algebra: GentleAlgebra) -> AlgebraPoset:
    cells: list[AlgebraPosetElement] = []
    prefixes: list[Path] = []
    for index, maximal in enumerate(algebra.maximal_paths):
        cells.append(AlgebraPosetElement(index, 0))
        prefixes.append(algebra.trivial(maximal.source))
        for length in range(1, maximal.length + 1):
            cells.append(AlgebraPosetElement(index, length))
            prefixes.append(algebra.make_path(maximal.arrows[:length]))

    trivial_copies: dict[str, int] = defaultdict(int)
    for prefix in prefixes:
        if prefix.is_trivial:
            trivial_copies[prefix.source] += 1
    names = []
    for cell, prefix in zip(cells, prefixes):
        if prefix.is_trivial and trivial_copies[prefix.source] > 1:
            names.append(f"{prefix.name}[{algebra.maximal_paths[cell.maximal].name}]")
        else:
            names.append(prefix.name)

    targets = tuple(prefix.target for prefix in prefixes)
    groups: dict[str, list[int]] = defaultdict(list)
    for index, target in enumerate(targets):
        groups[target].append(index)
    involution = list(range(len(cells)))
    for vertex, members in groups.items():
        if len(members) > 2:
            raise InvolutionArity(f"vertex {vertex} has {len(members)} copies in the algebra poset")
        if len(members) == 2:
            first, second = members
            involution[first], involution[second] = second, first

    LOGGER.debug("algebra poset with %s elements over %s maximal paths", len(cells), len(algebra.maximal_paths))
    return AlgebraPoset(
        elements=tuple(names),
        involution=tuple(involution),
        cells=tuple(cells),
        targets=targets,
        prefixes=tuple(prefixes),
    )
