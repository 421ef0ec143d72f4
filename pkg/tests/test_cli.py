import json
import math
import subprocess
import sys

import pytest

from slice_bergman.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from slice_bergman.plot import read_ppm


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerify:
    def test_bundle_seed_7(self, capsys):
        code, out, _ = run(["verify", "--suite", "bundle", "--seed", "7"], capsys)
        report = json.loads(out)
        assert code == EXIT_OK and report["pass"]
        cocycle = next(r for r in report["reports"] if r["check"] == "cocycle")
        assert cocycle["max_violation"] <= 1e-12
        assert report["config"]["seed"] == 7 and report["config"]["suites"] == ["bundle"]

    def test_inequalities_thousand_samples(self, capsys):
        code, out, _ = run(["verify", "--suite", "inequalities", "--samples", "1000"], capsys)
        report = json.loads(out)
        assert code == EXIT_OK
        assert {r["check"] for r in report["reports"]} == {"projection_continuity", "section_continuity"}
        assert all(r["samples"] == 1000 for r in report["reports"])

    def test_quadrature_precondition(self, capsys):
        code, out, err = run(["verify", "--suite", "bergman", "--n-r", "2"], capsys)
        assert code == EXIT_USAGE and out == "" and "--n-r" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["--n-theta", "10"],
            ["--degree", "-1"],
            ["--tol", "0"],
            ["--samples", "0"],
        ],
    )
    def test_invalid_config(self, capsys, argv):
        assert run(["verify", "--suite", "algebra", *argv], capsys)[0] == EXIT_USAGE

    def test_unknown_suite_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "nope"])
        assert exc.value.code == EXIT_USAGE

    def test_failure_exit_code(self, capsys):
        # an unreachable tolerance forces every nonzero violation to fail
        code, out, _ = run(["verify", "--suite", "splitting", "--samples", "20", "--tol", "1e-300"], capsys)
        assert code == EXIT_FAIL and not json.loads(out)["pass"]

    def test_byte_identical_reports(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for p in (a, b):
            assert main(["verify", "--suite", "kernel", "--samples", "10", "--seed", "3", "--out", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestCompute:
    def test_norm_of_one(self, tmp_path, capsys):
        p = write(tmp_path, "one.json", [[1, 0, 0, 0]])
        code, out, _ = run(["compute", "norm", "--in", p], capsys)
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(math.sqrt(math.pi), abs=1e-10)

    def test_project(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", {"terms": {"(1,1)": [1, 0, 0, 0]}})
        res = json.loads(run(["compute", "project", "--in", p], capsys)[1])
        assert res["series"] == [pytest.approx([0.5, 0, 0, 0], abs=1e-12)]
        assert res["residual"] <= 1e-12

    def test_metric_identical(self, tmp_path, capsys):
        A = {"F1": [[1, 0], [0.5, -0.2]], "F2": [[0, 1]], "frame": {"i": [0, 1, 0], "j": [0, 0, 1]}}
        pa, pb = write(tmp_path, "a.json", A), write(tmp_path, "b.json", A)
        res = json.loads(run(["compute", "metric", "--in", pa, "--in", pb], capsys)[1])
        assert res["value"] == 0.0 and res["quadrature"] == 0.0

    def test_inner(self, tmp_path, capsys):
        pf = write(tmp_path, "f.json", [[0, 0, 0, 0], [0, 1, 0, 0]])
        pg = write(tmp_path, "g.json", [[0, 0, 0, 0], [0, 0, 1, 0]])
        res = json.loads(run(["compute", "inner", "--in", pf, "--in", pg, "--axis", "0", "1", "1"], capsys)[1])
        assert res["value"] == pytest.approx([0, 0, 0, -math.pi / 2], abs=1e-12)

    def test_toeplitz(self, tmp_path, capsys):
        pf = write(tmp_path, "f.json", {"terms": {"(1,0)": [0, 1, 0, 0]}})
        pa = write(tmp_path, "a.json", {"terms": {"(0,0)": [0, 0, 1, 0]}})
        res = json.loads(run(["compute", "toeplitz", "--in", pf, "--symbol", pa, "--side", "right"], capsys)[1])
        assert res["series"] == [pytest.approx([0, 0, 0, 0], abs=1e-12), pytest.approx([0, 0, 0, 1], abs=1e-12)]

    def test_toeplitz_slice_mismatch(self, tmp_path, capsys):
        pf = write(tmp_path, "f.json", {"terms": {"(1,0)": [1, 0, 0, 0]}})
        pa = write(tmp_path, "a.json", {"terms": {"(0,0)": [1, 0, 0, 0]}, "frame": {"i": [0, 1, 0], "j": [0, 0, 1]}})
        assert run(["compute", "toeplitz", "--in", pf, "--symbol", pa], capsys)[0] == EXIT_USAGE

    def test_kernel(self, capsys):
        res = json.loads(run(["compute", "kernel", "--q", "0", "0", "0", "0", "--z", "0.1", "0.2", "0", "0"], capsys)[1])
        assert res["value"] == pytest.approx([1 / math.pi, 0, 0, 0])

    def test_kernel_outside_ball(self, capsys):
        assert run(["compute", "kernel", "--q", "1", "0", "0", "0"], capsys)[0] == EXIT_USAGE

    def test_section_and_projection(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", [[0, 0, 0, 0], [1, 0, 0, 0]])
        sec = json.loads(run(["compute", "section", "--in", p, "--frame", "0", "0", "1", "1", "0", "0"], capsys)[1])
        assert sec["element"]["F1"] == [[0.0, 0.0], [1.0, 0.0]]
        q = write(tmp_path, "A.json", sec["element"])
        proj = json.loads(run(["compute", "projection", "--in", q], capsys)[1])
        assert proj["series"][1] == pytest.approx([1, 0, 0, 0], abs=1e-15)

    def test_rho(self, tmp_path, capsys):
        pa = write(tmp_path, "a.json", {"series": [[1, 0, 0, 0]]})
        pb = write(tmp_path, "b.json", {"series": [[0, 0, 0, 0]]})
        res = json.loads(run(["compute", "rho", "--in", pa, "--in", pb], capsys)[1])
        assert res["value"] == pytest.approx(math.sqrt(math.pi), abs=1e-12)

    def test_missing_inputs(self, capsys):
        assert run(["compute", "metric"], capsys)[0] == EXIT_USAGE

    def test_malformed_json_location(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("[[1, 0, 0, 0],\n")
        code, _, err = run(["compute", "norm", "--in", str(p)], capsys)
        assert code == EXIT_USAGE and "line 2 column 1" in err

    def test_malformed_value_location(self, tmp_path, capsys):
        p = write(tmp_path, "bad.json", [[1, 0, "a", 0]])
        code, _, err = run(["compute", "norm", "--in", p], capsys)
        assert code == EXIT_USAGE and "$[0][2]" in err

    def test_bad_frame(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", [[1, 0, 0, 0]])
        assert run(["compute", "section", "--in", p, "--frame", "1", "0", "0", "2", "0", "0"], capsys)[0] == EXIT_USAGE


class TestPlot:
    def test_writes_deterministic_ppm(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", [[0, 0, 0, 0], [1, 0, 0, 0]])
        a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
        for out in (a, b):
            assert main(["plot", "--in", p, "--out", str(out), "--size", "48"]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert read_ppm(a).shape == (48, 48, 3)

    def test_kernel_plot(self, tmp_path):
        out = tmp_path / "k.ppm"
        assert main(["plot", "--kernel-q", "0.1", "0", "0.2", "0", "--out", str(out), "--size", "16"]) == 0

    def test_unwritable_path(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", [[1, 0, 0, 0]])
        code, _, err = run(["plot", "--in", p, "--out", str(tmp_path / "no" / "x.ppm")], capsys)
        assert code == EXIT_USAGE and "cannot write" in err

    def test_needs_out(self, tmp_path, capsys):
        p = write(tmp_path, "f.json", [[1, 0, 0, 0]])
        assert run(["plot", "--in", p], capsys)[0] == EXIT_USAGE


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "slice_bergman", "verify", "--suite", "bergman", "--n-r", "2"],
                       capture_output=True, text=True)
    assert r.returncode == EXIT_USAGE
