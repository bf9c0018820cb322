import io
import json
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path

from bondcat import codec
from bondcat.category import identity, zero_morphism
from bondcat.cli import EXIT_INVALID, EXIT_MALFORMED, EXIT_NO, EXIT_OK, main
from bondcat.fixtures import triangle_source

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def _sample(name: str) -> str:
    return str(SAMPLES / name)


class CliTests(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def run_cli(self, *argv: str) -> tuple[int, str]:
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = main(["--log-level", "ERROR", *argv])
        return code, buffer.getvalue()

    def test_validate_exit_codes(self) -> None:
        self.assertEqual(self.run_cli("validate", _sample("triangle_B.json"))[0], EXIT_OK)
        self.assertEqual(self.run_cli("validate", _sample("malformed_block.json"))[0], EXIT_MALFORMED)
        code, out = self.run_cli("--json", "validate", _sample("quiver_infinite.json"))
        self.assertEqual(code, EXIT_INVALID)
        self.assertFalse(json.loads(out)["valid"])

    def test_complex_over_a_bad_algebra_is_malformed(self) -> None:
        doc = json.loads((SAMPLES / "loop_complex.json").read_text(encoding="utf-8"))
        for quiver in ("quiver_infinite.json", "quiver_branching.json"):
            doc["algebra"] = _sample(quiver)
            target = self.tmp / "P.json"
            target.write_text(json.dumps(doc), encoding="utf-8")
            with self.subTest(quiver=quiver):
                self.assertEqual(self.run_cli("validate", str(target))[0], EXIT_MALFORMED)
        code, out = self.run_cli("--json", "validate", _sample("quiver_branching.json"))
        self.assertEqual(code, EXIT_INVALID)
        self.assertEqual([v["condition"] for v in json.loads(out)["violations"]], ["(ii)"])

    def test_unknown_field_is_malformed(self) -> None:
        self.assertEqual(self.run_cli("--field", "gf:4", "validate", _sample("triangle_B.json"))[0], EXIT_MALFORMED)

    def test_shift_writes_the_shifted_object(self) -> None:
        target = self.tmp / "shifted.json"
        self.assertEqual(self.run_cli("-o", str(target), "shift", _sample("triangle_B.json"))[0], EXIT_OK)
        self.assertEqual(
            codec.load_as(target, "object"),
            codec.load_as(_sample("triangle_B_shifted.json"), "object"),
        )

    def test_cone_writes_every_artifact(self) -> None:
        folder = self.tmp / "cone"
        self.assertEqual(self.run_cli("-o", str(folder), "cone", _sample("triangle_T.json"))[0], EXIT_OK)
        self.assertEqual(
            sorted(path.name for path in folder.iterdir()),
            ["cone.json", "inclusion.json", "projection.json", "triangle.json"],
        )
        self.assertEqual(codec.load_as(folder / "cone.json", "object"), codec.load_as(_sample("triangle_cone.json"), "object"))
        self.assertEqual(self.run_cli("validate", str(folder / "triangle.json"))[0], EXIT_OK)

    def test_cone_bundle_on_stdout(self) -> None:
        code, out = self.run_cli("cone", _sample("triangle_T.json"))
        self.assertEqual(code, EXIT_OK)
        bundle = json.loads(out)
        self.assertEqual(bundle["kind"], "bundle")
        self.assertEqual(set(bundle["items"]), {"cone", "inclusion", "projection", "triangle"})

    def test_equiv_decisions(self) -> None:
        image = self.tmp / "F_phi.json"
        zero = self.tmp / "zero.json"
        self.assertEqual(self.run_cli("-o", str(image), "functor", "morphism", _sample("loop_chain_map.json"))[0], EXIT_OK)
        F_phi = codec.load_as(image, "morphism")
        codec.write(codec.morphism_to_doc(zero_morphism(F_phi.source, F_phi.target)), zero)

        self.assertEqual(self.run_cli("equiv", str(image), str(zero), "--variant", "kappa")[0], EXIT_NO)
        code, out = self.run_cli("equiv", str(image), str(zero), "--variant", "K")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["kind"], "witness")

    def test_iso_of_identity(self) -> None:
        path = self.tmp / "identity.json"
        codec.write(codec.morphism_to_doc(identity(triangle_source())), path)
        code, out = self.run_cli("iso", str(path))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("inverse", json.loads(out)["items"])

    def test_homotopy(self) -> None:
        code, out = self.run_cli("homotopy", _sample("loop_chain_map.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["kind"], "homotopy")
        code, out = self.run_cli("--json", "homotopy", "--compare", _sample("loop_chain_map.json"))
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report["homotopic"])
        self.assertFalse(report["kappa"])

    def test_gentle_analyze(self) -> None:
        code, out = self.run_cli("--json", "gentle", "analyze", _sample("quiver_a1.json"))
        self.assertEqual(code, EXIT_OK)
        table = json.loads(out)
        self.assertEqual(table["maximal"], ["xay"])
        self.assertEqual([row["name"] for row in table["poset"]], ["e1", "x", "xa", "xay"])
        self.assertEqual(self.run_cli("gentle", "analyze", _sample("quiver_infinite.json"))[0], EXIT_MALFORMED)

    def test_functor_object_carries_placement(self) -> None:
        code, out = self.run_cli("functor", "object", _sample("kronecker_complex.json"))
        self.assertEqual(code, EXIT_OK)
        doc = json.loads(out)
        self.assertEqual({entry["path"] for entry in doc["placement"]}, {"a", "b"})

    def test_generate_then_validate(self) -> None:
        for what in ("object", "complex"):
            path = self.tmp / f"{what}.json"
            self.assertEqual(self.run_cli("--field", "gf:5", "-o", str(path), "generate", what, "--seed", "4")[0], EXIT_OK)
            self.assertEqual(self.run_cli("validate", str(path))[0], EXIT_OK)

    def test_verify_axioms_json(self) -> None:
        code, out = self.run_cli("--json", "verify-axioms", "--only", "identity-cone", "--trials", "2", "--seed", "3")
        self.assertEqual(code, EXIT_OK)
        summary = json.loads(out)
        self.assertEqual(summary["field"], "gf:5")
        self.assertEqual(summary["batteries"][0]["passed"], 2)

    def test_verify_axioms_acceptance_counts(self) -> None:
        code, out = self.run_cli("--json", "verify-axioms", "--acceptance", "--only", "ideal", "--only", "octahedron")
        self.assertEqual(code, EXIT_OK)
        summary = json.loads(out)
        self.assertEqual([(b["name"], b["trials"], b["passed"]) for b in summary["batteries"]], [("ideal", 30, 30), ("octahedron", 30, 30)])


if __name__ == "__main__":
    unittest.main()
