"""Regenerates the worked samples from bondcat.fixtures.

malformed_block.json, quiver_infinite.json and quiver_branching.json are written by hand.
"""
from __future__ import annotations

import json
from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from bondcat import codec, fixtures

SAMPLES_DIR = ROOT / "samples"


def _with_refs(doc: dict, **refs: str) -> dict:
    """Replaces nested documents by file references next to the sample."""
    return {**doc, **refs}


def export_triangle() -> int:
    source = fixtures.triangle_source()
    T = fixtures.triangle_morphism()
    codec.write(codec.object_to_doc(source), SAMPLES_DIR / "triangle_B.json")
    codec.write(codec.object_to_doc(T.target), SAMPLES_DIR / "triangle_B_shifted.json")
    codec.write(codec.object_to_doc(fixtures.triangle_cone_expected()), SAMPLES_DIR / "triangle_cone.json")
    codec.write(
        _with_refs(codec.morphism_to_doc(T), source="triangle_B.json", target="triangle_B_shifted.json"),
        SAMPLES_DIR / "triangle_T.json",
    )
    return 4


def export_complexes() -> int:
    written = 0
    for name, algebra in (("quiver_a1", fixtures.algebra_a1()), ("quiver_a2", fixtures.algebra_a2())):
        codec.write(codec.algebra_to_doc(algebra), SAMPLES_DIR / f"{name}.json")
        written += 1
    complexes = {
        "parametric_complex": (fixtures.parametric_complex(), "quiver_a1.json"),
        "loop_complex": (fixtures.loop_complex(), "quiver_a1.json"),
        "kronecker_complex": (fixtures.kronecker_complex(), "quiver_a2.json"),
    }
    for name, (P, algebra_ref) in complexes.items():
        codec.write(_with_refs(codec.complex_to_doc(P), algebra=algebra_ref), SAMPLES_DIR / f"{name}.json")
        written += 1
    maps = {
        "parametric_chain_map": (fixtures.parametric_chain_map(), "parametric_complex.json"),
        "loop_chain_map": (fixtures.loop_chain_map(), "loop_complex.json"),
    }
    for name, (phi, complex_ref) in maps.items():
        codec.write(_with_refs(codec.chain_map_to_doc(phi), source=complex_ref, target=complex_ref), SAMPLES_DIR / f"{name}.json")
        written += 1
    return written


def main() -> int:
    SAMPLES_DIR.mkdir(parents=True, exist_ok=True)
    written = export_triangle() + export_complexes()
    print(json.dumps({"samples_dir": str(SAMPLES_DIR), "written": written}, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
