"""
End-to-end tests for the lf_cli command line interface
"""

import json
import logging

import pytest
import numpy as np

from lf_cli import ExitCode, LightFieldCLI
from lf_io import load_coded, load_disparity, load_image, load_lf, load_report
from lf_metrics import PSNR_CAP_DB, EvalReport
from lf_sensing import gen_aperture_models, simulate
from lf_solve import SolveReport

FAST = ["--set", "pyramid_levels=2", "--set", "iters_per_level=30"]


@pytest.fixture(autouse=True)
def detach_cli_logging():
    yield
    root = logging.getLogger()
    root.handlers[:] = [h for h in root.handlers if h.get_name() != "lfcoded-stderr"]


@pytest.fixture
def cli(monkeypatch):
    for name in ("LFCODED_LOG_LEVEL", "LFCODED_DEFAULT_SEED", "LFCODED_SOLVER_CONFIG"):
        monkeypatch.delenv(name, raising=False)
    return LightFieldCLI()


def _run(cli, capsys, argv):
    code = cli.run(argv)
    captured = capsys.readouterr()
    lines = [line for line in captured.out.splitlines() if line.strip()]
    summary = json.loads(lines[-1]) if lines else None
    return code, summary, captured.err


@pytest.fixture
def synth_dir(cli, capsys, tmp_path):
    out = tmp_path / "synth"
    code, _, _ = _run(cli, capsys, ["synth", "--out", str(out), "--size", "24", "--angular", "3", "--disparity", "1.0"])
    assert code == ExitCode.OK
    return out


@pytest.mark.integration
class TestSynthAndSimulate:
    """Test cases for synth and simulate"""

    def test_synth_writes_lf_and_disparity(self, synth_dir):
        """Test synth produces a loadable light field and its true disparity"""
        lf = load_lf(synth_dir / "lf")
        dfield = load_disparity(synth_dir / "disparity")

        assert lf.angular_shape == (3, 3)
        assert lf.spatial_shape == (24, 24)
        np.testing.assert_array_equal(dfield.values, 1.0)

    def test_ca_matches_library_simulate(self, cli, capsys, synth_dir, tmp_path):
        """Test the CLI coded-aperture capture equals simulate() on the same inputs"""
        out = tmp_path / "capture"

        code, summary, _ = _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", str(synth_dir / "lf"), "--out", str(out), "--seed", "4"])

        assert code == ExitCode.OK
        assert summary["coded"] == ["coded_0.pfm"]
        lf = load_lf(synth_dir / "lf")
        expected = simulate(lf, gen_aperture_models(3, 3, seed=4)[0])
        np.testing.assert_allclose(load_coded(out / "coded_0.pfm").data, expected.data, atol=1e-6)

    def test_ca_multiple_shots(self, cli, capsys, synth_dir, tmp_path):
        """Test --shots writes one coded image and model per shot"""
        out = tmp_path / "capture"

        code, summary, _ = _run(cli, capsys, ["simulate", "--scheme", "ca", "--shots", "3", "--lf", str(synth_dir / "lf"), "--out", str(out)])

        assert code == ExitCode.OK
        assert summary["models"] == ["model_0.lfcm", "model_1.lfcm", "model_2.lfcm"]
        assert json.loads((out / "manifest.json").read_text())["kind"] == "capture"

    def test_focdef_pair_on_zero_disparity(self, cli, capsys, tmp_path):
        """Test defocus equals all-in-focus when every view is the centerview"""
        synth = tmp_path / "flat"
        _run(cli, capsys, ["synth", "--out", str(synth), "--size", "16", "--angular", "3", "--disparity", "0"])
        out = tmp_path / "capture"

        code, summary, _ = _run(cli, capsys, ["simulate", "--scheme", "focdef", "--lf", str(synth / "lf"), "--out", str(out)])

        assert code == ExitCode.OK
        assert summary["allinfocus"] == "allinfocus.pfm"
        np.testing.assert_allclose(load_coded(out / "coded_0.pfm").data, load_image(out / "allinfocus.pfm"), atol=1e-6)


@pytest.mark.integration
@pytest.mark.slow
class TestReconstructPipeline:
    """Test cases for reconstruct and evaluate"""

    def test_pipeline(self, cli, capsys, synth_dir, tmp_path):
        """Test simulate, reconstruct --pipeline and evaluate chain together"""
        capture = tmp_path / "capture"
        _run(cli, capsys, ["simulate", "--scheme", "ca", "--shots", "2", "--lf", str(synth_dir / "lf"), "--out", str(capture)])
        out = tmp_path / "recon"

        code, summary, _ = _run(cli, capsys, [
            "reconstruct", "--in", str(capture), "--out", str(out), "--lf", str(synth_dir / "lf"), "--pipeline", *FAST
        ])

        assert code == ExitCode.OK
        assert summary["center_source"] == "oracle"
        assert summary["evaluation"]["excluded"] == ["0,0"]
        assert load_lf(out / "lf").angular_shape == (3, 3)
        report = load_report(out / "solve_report.json", SolveReport)
        assert report.wall_clock_s is None
        assert summary["wall_clock_s"] > 0
        evaluation = load_report(out / "eval_report.json", EvalReport)
        assert evaluation.mean_psnr == pytest.approx(summary["evaluation"]["mean_psnr"])

        code, summary, _ = _run(cli, capsys, ["evaluate", "--lf", str(synth_dir / "lf"), "--in", str(out / "lf"), "--exclude", "0,0"])
        assert code == ExitCode.OK
        assert summary["mean_psnr"] == pytest.approx(evaluation.mean_psnr, abs=0.5)

    def test_reconstruct_is_reproducible(self, cli, capsys, synth_dir, tmp_path):
        """Test the same inputs and seed give byte-identical outputs"""
        capture = tmp_path / "capture"
        _run(cli, capsys, ["simulate", "--scheme", "clf", "--tile", "8", "--lf", str(synth_dir / "lf"), "--out", str(capture)])

        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code, _, _ = _run(cli, capsys, ["reconstruct", "--in", str(capture), "--out", str(out), "--lf", str(synth_dir / "lf"), *FAST])
            assert code == ExitCode.OK
            outputs.append(out)

        files = sorted(p.relative_to(outputs[0]) for p in outputs[0].rglob("*") if p.is_file())
        assert files
        for rel in files:
            assert (outputs[0] / rel).read_bytes() == (outputs[1] / rel).read_bytes(), rel

    def test_single_coded_image_with_model(self, cli, capsys, synth_dir, tmp_path):
        """Test --in FILE --model FILE with the code-normalized centerview"""
        capture = tmp_path / "capture"
        _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", str(synth_dir / "lf"), "--out", str(capture)])
        out = tmp_path / "recon"

        code, summary, _ = _run(cli, capsys, [
            "reconstruct", "--scheme", "ca", "--in", str(capture / "coded_0.pfm"), "--model", str(capture / "model_0.lfcm"),
            "--out", str(out), *FAST
        ])

        assert code == ExitCode.OK
        assert summary["center_source"] == "code-normalized-baseline"
        assert (out / "disparity" / "manifest.json").is_file()

    def test_evaluate_identical(self, cli, capsys, synth_dir, tmp_path):
        """Test identical directories give the PSNR sentinel and SSIM 1"""
        report_path = tmp_path / "report.json"

        code, summary, _ = _run(cli, capsys, ["evaluate", "--lf", str(synth_dir / "lf"), "--in", str(synth_dir / "lf"), "--out", str(report_path)])

        assert code == ExitCode.OK
        assert summary["mean_psnr"] == PSNR_CAP_DB
        assert summary["mean_ssim"] == pytest.approx(1.0)
        assert report_path.is_file()


@pytest.mark.integration
class TestInspection:
    """Test cases for epi and shear"""

    def test_epi(self, cli, capsys, synth_dir, tmp_path):
        """Test an EPI image is written with angular rows"""
        out = tmp_path / "epi.pfm"

        code, summary, _ = _run(cli, capsys, ["epi", "--lf", str(synth_dir / "lf"), "--out", str(out), "--fixed", "12"])

        assert code == ExitCode.OK
        assert summary["shape"][:2] == [3, 24]
        assert load_image(out).shape[:2] == (3, 24)

    def test_shear(self, cli, capsys, synth_dir, tmp_path):
        """Test shearing writes a light field of the same extents"""
        out = tmp_path / "sheared"

        code, _, _ = _run(cli, capsys, ["shear", "--lf", str(synth_dir / "lf"), "--out", str(out), "--s", "-1"])

        assert code == ExitCode.OK
        assert load_lf(out).spatial_shape == (24, 24)


@pytest.mark.integration
class TestExitCodes:
    """Test cases for argument handling and error reporting"""

    def test_dry_run(self, cli, capsys, tmp_path):
        """Test --dry-run prints the resolved run settings without writing"""
        out = tmp_path / "never"

        code, summary, _ = _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", "somewhere", "--out", str(out), "--dry-run"])

        assert code == ExitCode.OK
        assert summary["subcommand"] == "simulate"
        assert summary["scheme"] == "ca"
        assert summary["seed"] == 0
        assert not out.exists()

    def test_missing_required_argument(self, cli, capsys):
        """Test a missing required input exits 2 with a JSON error line"""
        code, _, err = _run(cli, capsys, ["simulate", "--scheme", "ca"])

        assert code == ExitCode.USAGE
        error = json.loads(err.strip().splitlines()[-1])
        assert error["exit_code"] == 2
        assert "--lf" in error["message"]

    def test_shots_need_coded_aperture(self, cli, capsys, tmp_path):
        """Test --shots > 1 is rejected for other schemes"""
        code, _, _ = _run(cli, capsys, ["simulate", "--scheme", "clf", "--shots", "2", "--lf", "x", "--out", str(tmp_path)])

        assert code == ExitCode.USAGE

    def test_unknown_scheme(self, cli, capsys):
        """Test argparse errors are usage errors"""
        code, _, _ = _run(cli, capsys, ["simulate", "--scheme", "lytro"])

        assert code == ExitCode.USAGE

    def test_bad_override(self, cli, capsys, tmp_path):
        """Test malformed --set values exit 2"""
        code, _, _ = _run(cli, capsys, ["reconstruct", "--in", "x", "--out", str(tmp_path), "--set", "lambda_tv"])

        assert code == ExitCode.USAGE

    @pytest.mark.parametrize("override", ["lambda_dcc=1", "pyramid_levels=0", "robust_eps=-1"])
    def test_invalid_override(self, cli, capsys, tmp_path, override):
        """Test unknown keys and out-of-range --set values exit 2 before any input is read"""
        code, _, err = _run(cli, capsys, ["reconstruct", "--in", str(tmp_path / "nope"), "--out", str(tmp_path), "--set", override])

        assert code == ExitCode.USAGE
        error = json.loads(err.strip().splitlines()[-1])
        assert error["exit_code"] == 2
        assert override.split("=")[0] in error["message"]

    def test_missing_light_field(self, cli, capsys, tmp_path):
        """Test a missing input directory exits 3"""
        code, _, err = _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", str(tmp_path / "nope"), "--out", str(tmp_path / "out")])

        assert code == ExitCode.IO
        assert "nope" in err

    def test_missing_given_center(self, cli, capsys, synth_dir, tmp_path):
        """Test a missing --center file exits 3 and names the path"""
        capture = tmp_path / "capture"
        _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", str(synth_dir / "lf"), "--out", str(capture)])
        missing = tmp_path / "center_missing.png"

        code, _, err = _run(cli, capsys, [
            "reconstruct", "--in", str(capture), "--out", str(tmp_path / "recon"),
            "--center-source", "given-file", "--center", str(missing), *FAST
        ])

        assert code == ExitCode.IO
        assert str(missing) in err

    def test_scheme_model_mismatch(self, cli, capsys, synth_dir, tmp_path):
        """Test a model of the wrong scheme is a validation failure"""
        capture = tmp_path / "capture"
        _run(cli, capsys, ["simulate", "--scheme", "ca", "--lf", str(synth_dir / "lf"), "--out", str(capture)])

        code, _, _ = _run(cli, capsys, [
            "reconstruct", "--scheme", "clf", "--in", str(capture / "coded_0.pfm"), "--model", str(capture / "model_0.lfcm"),
            "--out", str(tmp_path / "recon"), *FAST
        ])

        assert code == ExitCode.VALIDATION

    def test_evaluate_everything_excluded(self, cli, capsys, synth_dir):
        """Test excluding every view exits 2"""
        offsets = [f"{u},{v}" for u in (-1, 0, 1) for v in (-1, 0, 1)]
        argv = ["evaluate", "--lf", str(synth_dir / "lf"), "--in", str(synth_dir / "lf")]
        for offset in offsets:
            argv.append(f"--exclude={offset}")

        code, _, _ = _run(cli, capsys, argv)

        assert code == ExitCode.USAGE
