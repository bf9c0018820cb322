from __future__ import annotations

import json
from functools import lru_cache

from jinja2 import Environment, FileSystemLoader, select_autoescape
from pydantic import BaseModel

from bondcat.config import TEMPLATES_DIR
from bondcat.gentle import GentleAlgebra
from bondcat.schemas import EquivalenceReport, HarnessSummary, ValidationReport


@lru_cache(maxsize=1)
def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIR)),
        autoescape=select_autoescape(enabled_extensions=("html",)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def _render(template: str, **context) -> str:
    return _environment().get_template(template).render(**context)


def as_json(model: BaseModel | dict) -> str:
    payload = model.model_dump(mode="json") if isinstance(model, BaseModel) else model
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def render_validation(report: ValidationReport) -> str:
    return _render("report.txt.j2", report=report)


def render_equivalence(report: EquivalenceReport) -> str:
    return _render("equivalence.txt.j2", report=report)


def render_summary(summary: HarnessSummary) -> str:
    return _render("verify_summary.txt.j2", summary=summary)


def gentle_table(algebra: GentleAlgebra) -> dict:
    """Paths, maximal paths and the algebra poset with targets and involution."""
    poset = algebra.poset
    return {
        "paths": [path.name for path in algebra.paths],
        "maximal": [path.name for path in algebra.maximal_paths],
        "poset": [
            {
                "name": name,
                "target": poset.targets[index],
                "partner": "-" if poset.is_fixed(index) else poset.name(poset.involution[index]),
            }
            for index, name in enumerate(poset.elements)
        ],
    }


def render_gentle(algebra: GentleAlgebra) -> str:
    return _render("gentle_table.txt.j2", **gentle_table(algebra))
