import json
import subprocess
import sys
from pathlib import Path

from posetfiber.cli import run

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def c(name):
    return str(CORPUS / name)


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = invoke(capsys, *argv)
    return code, json.loads(out)


CIRCLE_TO_POINT = (c("circle.poset"), c("point.poset"), c("circle_to_point.map"))
EDGE_IDENTITY = (c("edge.poset"), c("edge.poset"), c("edge_identity.map"))
DUNCE_TO_POINT = (c("dunce_hat_faces.poset"), c("point.poset"), c("dunce_hat_faces_to_point.map"))


class TestComputeCommands:
    def test_homology_four_cycle(self, capsys):
        code, rep = report(capsys, "homology", c("four_cycle.complex"))
        assert code == 0 and rep["status"] == "ok"
        assert rep["result"]["reduced_homology"]["1"] == {"betti": 1, "torsion": []}

    def test_homology_of_poset(self, capsys):
        code, rep = report(capsys, "homology", "--poset", c("circle.poset"))
        assert rep["result"]["nontrivial"] == [{"degree": 1, "betti": 1, "torsion": []}]

    def test_order_complex(self, capsys):
        code, rep = report(capsys, "order-complex", c("circle.poset"))
        assert code == 0 and rep["result"]["f_vector"] == [4, 4]

    def test_face_poset(self, capsys):
        code, rep = report(capsys, "face-poset", c("hollow_triangle.complex"))
        assert len(rep["result"]["poset"]["elements"]) == 6

    def test_subdivide(self, capsys):
        code, rep = report(capsys, "subdivide", c("full_triangle.complex"))
        assert rep["result"]["f_vector"] == [7, 12, 6]

    def test_cylinder(self, capsys):
        code, rep = report(capsys, "cylinder", c("circle.poset"), c("interval.poset"), c("circle_to_interval.map"))
        assert code == 0 and rep["result"]["homology_matches_target"] is True


class TestVerdictCommands:
    def test_check_fibers_refuted(self, capsys):
        code, rep = report(capsys, "check-fibers", *CIRCLE_TO_POINT)
        assert code == 1 and rep["status"] == "refuted"
        (entry,) = rep["result"]["fibers"]["fibers"]
        assert entry["verdict"]["witness"] == {"degree": 1, "betti": 1, "torsion": []}

    def test_certify_identity(self, capsys):
        code, rep = report(capsys, "certify", *EDGE_IDENTITY)
        assert code == 0 and rep["status"] == "certified"
        assert rep["result"]["replay"] == {"y_steps": 2, "x_steps": 2, "comparison_steps": 2}

    def test_certify_inconclusive(self, capsys):
        code, rep = report(capsys, "--budget", "2", "certify", *DUNCE_TO_POINT)
        assert code == 2 and rep["status"] == "inconclusive"
        assert rep["result"]["offending"] == ["p"]

    def test_certify_refused_on_refutation(self, capsys):
        code, rep = report(capsys, "certify", *CIRCLE_TO_POINT)
        assert code == 1 and "refusal" in rep["result"]

    def test_verify_certificate_round_trip(self, capsys, tmp_path):
        out = tmp_path / "cert.json"
        assert run(["certify", *EDGE_IDENTITY, "--output", str(out)]) == 0
        code, rep = report(capsys, "verify-certificate", out)
        assert code == 0 and rep["result"]["valid"]

    def test_verify_certificate_tampered(self, capsys, tmp_path):
        out = tmp_path / "cert.json"
        run(["certify", *EDGE_IDENTITY, "--output", str(out)])
        data = json.loads(out.read_text())
        data["result"]["certificate"]["comparison"].pop()
        out.write_text(json.dumps(data))
        code, rep = report(capsys, "verify-certificate", out)
        assert code == 1 and rep["result"]["valid"] is False

    def test_verify_certificate_garbage(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert invoke(capsys, "verify-certificate", bad)[0] == 65

    def test_homology_fibers(self, capsys):
        code, rep = report(capsys, "homology-fibers", "--n", "0", *CIRCLE_TO_POINT)
        assert code == 0 and rep["result"]["conclusion"]["holds"]
        assert "fundamental group" in rep["result"]["conclusion"]["caveat"]
        code, rep = report(capsys, "homology-fibers", "--n", "1", *CIRCLE_TO_POINT)
        assert code == 1 and rep["result"]["conclusion"]["witness"]["degree"] == 2

    def test_nerve(self, capsys):
        assert report(capsys, "nerve", c("path.complex"), c("path_edges.cover"))[0] == 0
        assert report(capsys, "nerve", c("hollow_triangle.complex"), c("triangle_edges.cover"))[0] == 0
        assert report(capsys, "nerve", c("four_cycle.complex"), c("cycle_two_arcs.cover"))[0] == 1

    def test_dowker(self, capsys):
        code, rep = report(capsys, "dowker", c("inequality3.relation"))
        assert code == 0 and rep["result"]["dowker"]["homology"]["agree"]


class TestErrors:
    def test_no_command(self, capsys):
        assert invoke(capsys)[0] == 64

    def test_unknown_command(self, capsys):
        assert invoke(capsys, "frobnicate")[0] == 64

    def test_missing_n(self, capsys):
        assert invoke(capsys, "homology-fibers", *CIRCLE_TO_POINT)[0] == 64

    def test_bad_budget(self, capsys):
        assert invoke(capsys, "--budget", "0", "check-fibers", *CIRCLE_TO_POINT)[0] == 64

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "homology", tmp_path / "nope.complex")
        assert code == 65 and "nope.complex" in err

    def test_malformed_line_reported(self, capsys, tmp_path):
        p = tmp_path / "bad.poset"
        p.write_text("a < b\na < < c\n")
        code, _, err = invoke(capsys, "order-complex", p)
        assert code == 65 and "bad.poset:2:" in err

    def test_non_monotone_map(self, capsys, tmp_path):
        m = tmp_path / "flip.map"
        m.write_text("a -> b\nb -> a\n")
        code, _, err = invoke(capsys, "certify", c("edge.poset"), c("edge.poset"), m)
        assert code == 65 and "a" in err and "b" in err

    def test_map_missing_element(self, capsys, tmp_path):
        m = tmp_path / "part.map"
        m.write_text("a -> p\n")
        code, _, err = invoke(capsys, "check-fibers", c("circle.poset"), c("point.poset"), m)
        assert code == 65 and "'c'" in err


class TestDeterminism:
    def test_byte_identical(self, capsys):
        args = ("--seed", "7", "nerve", c("hollow_triangle.complex"), c("triangle_edges.cover"))
        first = invoke(capsys, *args)[1]
        assert invoke(capsys, *args)[1] == first

    def test_report_fields(self, capsys):
        _, rep = report(capsys, "--seed", "3", "certify", *EDGE_IDENTITY)
        assert rep["seed"] == 3 and rep["budget"] == 32 and rep["schema_version"] == 1
        assert set(rep["inputs"]) == set(EDGE_IDENTITY) and "timing_seconds" not in rep

    def test_timing_flag(self, capsys):
        _, rep = report(capsys, "--timing", "homology", c("four_cycle.complex"))
        assert rep["timing_seconds"] >= 0

    def test_flags_after_subcommand(self, capsys):
        _, rep = report(capsys, "homology", c("four_cycle.complex"), "--seed", "9")
        assert rep["seed"] == 9

    def test_text_format(self, capsys):
        code, out, _ = invoke(capsys, "--format", "text", "homology", c("four_cycle.complex"))
        assert out.startswith("homology: ok\n")

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "posetfiber.cli", "check-fibers", *CIRCLE_TO_POINT],
                              capture_output=True, text=True)
        assert proc.returncode == 1 and json.loads(proc.stdout)["status"] == "refuted"
