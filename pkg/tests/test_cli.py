import json

import pytest
from click.testing import CliRunner

from gaborcube.cli import main

from conftest import ROOT

runner = CliRunner()


def fixture_path(name):
    return str(ROOT / "examples" / f"{name}.json")


def invoke(*args, env=None):
    return runner.invoke(main, list(args), env=env, catch_exceptions=False)


def test_eval_stft_reports_value_and_zero_set():
    res = invoke("eval-stft", "-t", "0.5", "-n", "2.0")
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["in_zero_set"] is True
    assert report["abs"] < 1e-12


def test_eval_stft_quadrature_cross_check():
    res = invoke("eval-stft", "-t", "0.3", "-n", "2.5", "--quadrature-tol", "1e-10")
    report = json.loads(res.output)
    assert report["quadrature"]["difference"] < 1e-9


def test_eval_stft_secant_window():
    res = invoke("eval-stft", "--window", "secant", "-t", "0.5", "-n", "2.0")
    report = json.loads(res.output)
    assert report["in_zero_set"] is True
    assert report["abs"] < 1e-9


def test_eval_stft_bad_vector_is_usage_error():
    res = invoke("eval-stft", "-t", "a,b", "-n", "0.0")
    assert res.exit_code == 2


def test_check_onb_lattice_z4_passes():
    res = invoke("check", "onb", fixture_path("lattice-z4"), "--radius", "3")
    assert res.exit_code == 0
    assert json.loads(res.output)["verdict"] is True


def test_check_ortho_bad_rows_fails_with_witness():
    res = invoke("check", "ortho", fixture_path("bad-rows"))
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert report["violations"][0]["difference"] == [0.5, 1.0]


def test_check_tiling_passes_and_fails():
    ok = invoke("check", "tiling", fixture_path("tiling-rows"), "--radius", "4")
    assert ok.exit_code == 0
    gap = invoke("check", "tiling",
                 '{"type": "explicit", "points": [[0.0, 0.0]]}', "--radius", "2")
    assert gap.exit_code == 1


def test_check_tiling_radius_guard():
    res = invoke("check", "tiling", fixture_path("tiling-rows"), "--radius", "1")
    assert res.exit_code == 2


def test_check_tiling_csv_grid():
    res = invoke("check", "tiling", fixture_path("tiling-rows"),
                 "--radius", "2", "--format", "csv", "--resolution", "0.5")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "x,y,count"
    counts = {line.rsplit(",", 1)[1] for line in lines[1:]}
    assert counts == {"1"}


def test_check_onb_csv_convergence(tmp_path):
    png = tmp_path / "convergence.png"
    res = invoke("check", "onb", fixture_path("lattice-z2"),
                 "--trunc-radius", "64", "--format", "csv", "--plot", str(png))
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "radius,value"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values == sorted(values)
    assert png.exists() and png.stat().st_size > 0


def test_plot_renders_coverage_grid(tmp_path):
    png = tmp_path / "coverage.png"
    res = invoke("check", "tiling", fixture_path("tiling-columns"),
                 "--radius", "2", "--resolution", "0.25", "--plot", str(png))
    assert res.exit_code == 0
    assert png.exists() and png.stat().st_size > 0


def test_classify_mixed_strips():
    res = invoke("classify", fixture_path("mixed-strips"))
    assert res.exit_code == 0
    report = json.loads(res.output)
    kinds = [s["kind"] for s in report["strips"].values()]
    assert kinds.count("tiling") == 1
    assert kinds.count("overlap") == len(kinds) - 1


def test_classify_failure_exits_one():
    res = invoke("classify", fixture_path("bad-rows"))
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert report["classified"] is False
    assert report["witness"] == [0.5, 1.0]


def test_classify_with_pseudo_split():
    res = invoke("classify", fixture_path("pseudo-standard"), "--pseudo-split", "1")
    assert res.exit_code == 0
    assert json.loads(res.output)["pseudo"]["pseudo_standard"] is True


def test_construct_canonicalizes():
    res = invoke("construct", fixture_path("standard-1d-varying"))
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["type"] == "standard"


def test_construct_classify_construct_idempotent():
    first = invoke("construct", fixture_path("standard-1d-varying")).output

    def pipeline(set_json):
        classified = invoke("classify", set_json).output
        canon = invoke("construct", classified).output
        return canon

    once = pipeline(first)
    twice = pipeline(once)
    assert once == twice


def test_malformed_json_is_annotated(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "lattice1d", "offset": }')
    res = invoke("check", "ortho", str(bad))
    assert res.exit_code == 2
    assert "line 1" in res.output and "column" in res.output


def test_missing_file_is_usage_error():
    res = invoke("check", "ortho", "/nonexistent/file.json")
    assert res.exit_code == 2


def test_density_command():
    res = invoke("density", fixture_path("lattice-z2"), "--t", "4")
    report = json.loads(res.output)
    assert report["density"] == pytest.approx(1.0, abs=0.01)


def test_sweep_stft_deterministic():
    a = invoke("sweep", "--kind", "stft", "--count", "20", "--seed", "5")
    b = invoke("sweep", "--kind", "stft", "--count", "20", "--seed", "5")
    assert a.exit_code == 0
    assert a.output == b.output
    assert json.loads(a.output)["failure_count"] == 0


def test_sweep_tiling_passes():
    res = invoke("sweep", "--kind", "tiling", "--count", "5", "--seed", "3")
    assert res.exit_code == 0
    assert json.loads(res.output)["failure_count"] == 0


def test_reports_are_byte_identical():
    a = invoke("check", "onb", fixture_path("lattice-z2"))
    b = invoke("check", "onb", fixture_path("lattice-z2"))
    assert a.output == b.output


def test_threads_env_var_validated():
    res = invoke("density", fixture_path("lattice-z2"),
                 env={"GABOR_CUBE_THREADS": "many"})
    assert res.exit_code == 2
    ok = invoke("density", fixture_path("lattice-z2"),
                env={"GABOR_CUBE_THREADS": "4"})
    assert ok.exit_code == 0
