import json

import pytest

from wptmod import cli, scenario
from wptmod.errors import ScenarioError


@pytest.fixture(scope="module")
def pipeline_out(tmp_path_factory):
    """Run the artifact pipeline once (curves -> fit) in a shared directory."""
    out = tmp_path_factory.mktemp("pipeline")
    assert cli.main(["curves", "--out", str(out)]) == cli.EXIT_OK
    assert cli.main(["fit", "--out", str(out)]) == cli.EXIT_OK
    return out


class TestMaterials:
    def test_listing(self, capsys):
        assert cli.main(["materials"]) == cli.EXIT_OK
        text = capsys.readouterr().out
        assert "cuprum" in text and "aluminum" in text and "ferrum" in text
        assert "mu_r range 200-400" in text

    def test_single(self, capsys):
        assert cli.main(["materials", "Cu"]) == cli.EXIT_OK
        text = capsys.readouterr().out
        assert "cuprum" in text and "aluminum" not in text

    def test_not_found(self, capsys):
        assert cli.main(["materials", "unobtainium"]) == cli.EXIT_VALIDATION
        assert "not found" in capsys.readouterr().err


class TestCouplingsCommand:
    def test_artifact(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert cli.main(["couplings", "--out", str(out)]) == cli.EXIT_OK
        lines = (out / "couplings.csv").read_text().splitlines()
        assert lines[0] == "label,kind,m_closed_form_H,m_reference_H,reference_method"
        kinds = {ln.split(",")[1] for ln in lines[1:]}
        assert kinds == {"coil", "plate"}
        for ln in lines[1:]:
            label, kind, closed, ref, method = ln.split(",")
            assert float(closed) > 0.0 and float(ref) > 0.0
            assert method == ("neumann" if kind == "coil" else "radius_integral")

    def test_byte_identical_rerun(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        cli.main(["couplings", "--out", str(out1)])
        cli.main(["couplings", "--out", str(out2)])
        assert (out1 / "couplings.csv").read_bytes() == (out2 / "couplings.csv").read_bytes()


class TestImpedanceCommand:
    def test_artifact(self, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["impedance", "--out", str(out)]) == cli.EXIT_OK
        lines = (out / "impedance.csv").read_text().splitlines()
        assert lines[0] == "label,material,mu_r,half_side_m,distance_m,r_m_ohm,l_m_H"
        rows = {ln.split(",")[0]: ln.split(",") for ln in lines[1:]}
        # iron plates present the largest equivalent resistance at each size
        fe = float(rows["fe_0.2m"][5])
        cu = float(rows["cu_0.2m"][5])
        assert fe > 5.0 * cu


class TestCurvesFitDetect:
    def test_curves_artifact(self, pipeline_out):
        text = (pipeline_out / "curves.csv").read_text()
        lines = text.splitlines()
        assert lines[0] == "label,i_tx_A,u_tx_V,p_in_W"
        labels = {ln.split(",")[0] for ln in lines[1:]}
        assert any(lb.startswith("coil:") for lb in labels)
        assert any(lb.startswith("metal:") for lb in labels)

    def test_fit_artifact(self, pipeline_out):
        data = json.loads((pipeline_out / "threshold.json").read_text())
        assert set(data) == {"u_line", "p_poly_W_per_A_n", "degree", "i_min_gate_A"}
        assert data["degree"] == 2
        assert data["i_min_gate_A"] == 3.0
        assert len(data["p_poly_W_per_A_n"]) == 3

    def test_fit_requires_curves(self, tmp_path, capsys):
        assert cli.main(["fit", "--out", str(tmp_path / "empty")]) == cli.EXIT_VALIDATION
        assert "missing upstream artifact" in capsys.readouterr().err

    def test_detect_requires_threshold(self, tmp_path, capsys):
        assert cli.main(["detect", "--out", str(tmp_path / "empty")]) == cli.EXIT_VALIDATION
        assert "missing upstream artifact" in capsys.readouterr().err

    def test_detect_report(self, pipeline_out, capsys):
        assert cli.main(["detect", "--out", str(pipeline_out)]) == cli.EXIT_OK
        out_text = capsys.readouterr().out
        assert "verdict" in out_text and "accuracy" in out_text
        report = json.loads((pipeline_out / "report.json").read_text())
        assert report["accuracy"] == 1.0
        assert report["decidable"] == report["total"]
        assert {row["receiver"] for row in report["samples"]} >= {"fe_0.2m", "load_4.5ohm"}

    def test_detect_seed_changes_samples(self, pipeline_out):
        cli.main(["detect", "--out", str(pipeline_out), "--seed", "1"])
        a = json.loads((pipeline_out / "report.json").read_text())
        cli.main(["detect", "--out", str(pipeline_out), "--seed", "2"])
        b = json.loads((pipeline_out / "report.json").read_text())
        assert a["samples"][0]["u_tx_V"] != b["samples"][0]["u_tx_V"]
        cli.main(["detect", "--out", str(pipeline_out), "--seed", "1"])
        assert json.loads((pipeline_out / "report.json").read_text()) == a

    def test_detect_gate_override_indeterminate(self, pipeline_out):
        # gate above every test current: nothing is decidable
        assert (
            cli.main(["detect", "--out", str(pipeline_out), "--gate-amps", "50"])
            == cli.EXIT_OK
        )
        report = json.loads((pipeline_out / "report.json").read_text())
        assert report["no_decidable_samples"]
        assert report["accuracy"] is None
        assert all(row["gated"] for row in report["samples"])


class TestScenarioValidation:
    def test_unknown_key_rejected(self, tmp_path, capsys):
        base = json.loads(
            __import__("importlib.resources", fromlist=["files"])
            .files("wptmod.data")
            .joinpath("paper_repro.json")
            .read_text()
        )
        base["sweep"]["typo_key"] = 1
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(base))
        code = cli.main(["curves", "--scenario", str(bad), "--out", str(tmp_path / "o")])
        assert code == cli.EXIT_VALIDATION
        assert "unknown keys" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        code = cli.main(
            ["curves", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)]
        )
        assert code == cli.EXIT_VALIDATION

    def test_parse_rejects_missing_section(self):
        with pytest.raises(ScenarioError):
            scenario.parse_scenario({"frequency_hz": 20e3})

    def test_bundled_scenario_loads(self, repro_scenario):
        assert repro_scenario.frequency_hz == 20e3
        assert len(repro_scenario.receiver_coils) == 3
        assert len(repro_scenario.metal_plates) == 6
        assert repro_scenario.detection.test_currents_a == (3.0, 6.0, 9.0)
