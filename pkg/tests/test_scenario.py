import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from decoherence.cli import main as cli_main
from decoherence.scenario import (
    ConfigError,
    MODEL_SCHEMAS,
    fit_decay,
    list_models,
    parse_config,
    run_scenario,
    serialize_config,
)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL_QUBIT = """
[scenario]
name = mini
model = spin_boson
seed = 1

[params]
alpha = 0.02
temperature = 1.0
cutoff = 50.0

[initial_state]
kind = qubit_bloch
theta = 1.5707963267948966

[integrator]
dt = 0.002
t_final = 2.0
record_stride = 50

[outputs]
quantities = coherence_magnitude, purity
fit = exponential
"""


class TestParsing:
    def test_minimal_config_parses(self):
        cfg = parse_config(MINIMAL_QUBIT)
        assert cfg.model == "spin_boson"
        assert cfg.params["alpha"] == 0.02
        assert cfg.params["delta0"] == 0.0  # default filled in
        assert cfg.initial_state["kind"] == "qubit_bloch"

    def test_unknown_key_rejected(self):
        bad = MINIMAL_QUBIT.replace("alpha = 0.02", "alpha = 0.02\nbogus = 1")
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(bad)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="mystery"):
            parse_config(MINIMAL_QUBIT + "\n[mystery]\nx = 1\n")

    def test_unknown_model_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL_QUBIT.replace("model = spin_boson",
                                               "model = warp_drive"))

    def test_nonpositive_parameter_rejected(self):
        with pytest.raises(ConfigError, match="alpha"):
            parse_config(MINIMAL_QUBIT.replace("alpha = 0.02", "alpha = -1"))

    def test_missing_required_key_rejected(self):
        with pytest.raises(ConfigError, match="theta"):
            parse_config(MINIMAL_QUBIT.replace("theta = 1.5707963267948966", ""))

    def test_state_kind_must_match_model(self):
        bad = MINIMAL_QUBIT.replace("kind = qubit_bloch\ntheta = 1.5707963267948966",
                                    "kind = coherent\nalpha = 2.0")
        with pytest.raises(ConfigError, match="unsupported"):
            parse_config(bad)

    def test_grid_required_for_position_models(self):
        text = MINIMAL_QUBIT.replace("model = spin_boson", "model = collisional") \
            .replace("kind = qubit_bloch\ntheta = 1.5707963267948966",
                     "kind = gaussian_packet\nsigma = 0.5") \
            .replace("alpha = 0.02\ntemperature = 1.0\ncutoff = 50.0",
                     "lambda = 1.0")
        with pytest.raises(ConfigError, match="grid"):
            parse_config(text)

    def test_shipped_scenarios_validate(self):
        for path in sorted(SCENARIO_DIR.glob("*.cfg")):
            cfg = parse_config(path.read_text())
            assert cfg.name

    def test_round_trip_is_idempotent(self):
        for path in sorted(SCENARIO_DIR.glob("*.cfg")):
            cfg = parse_config(path.read_text())
            text1 = serialize_config(cfg)
            cfg2 = parse_config(text1)
            assert cfg2 == cfg
            assert serialize_config(cfg2) == text1


class TestFits:
    def test_exponential_fit_recovers_rate(self):
        t = np.linspace(0, 5, 200)
        rate = 0.8
        fit = fit_decay(t, np.exp(-rate * t), "exponential")
        assert fit["rate"] == pytest.approx(rate, rel=1e-6)
        assert fit["residual_rms"] < 1e-10

    def test_gaussian_fit_recovers_rate_squared(self):
        t = np.linspace(0, 3, 200)
        g_sq = 0.5
        fit = fit_decay(t, np.exp(-g_sq * t * t), "gaussian")
        assert fit["rate_sq"] == pytest.approx(g_sq, rel=1e-6)

    def test_window_excludes_floor_noise(self):
        t = np.linspace(0, 40, 400)
        values = np.exp(-t) + 1e-3  # noise floor
        fit = fit_decay(t, values, "exponential")
        assert fit["rate"] == pytest.approx(1.0, rel=0.02)


class TestRunScenario:
    def test_dephasing_qubit_outputs_and_fit(self, tmp_path):
        cfg = parse_config((SCENARIO_DIR / "dephasing_qubit.cfg").read_text())
        summary = run_scenario(cfg, out_dir=tmp_path)
        ts_path = tmp_path / "dephasing_qubit_timeseries.csv"
        assert ts_path.exists()
        header = ts_path.read_text().splitlines()[0].split(",")
        for col in ("t", "re_rho01", "im_rho01", "purity", "entropy",
                    "coherence_magnitude"):
            assert col in header
        # fitted decay rate within 1% of the literal analytic rate 4 D
        d = summary["model_info"]["dephasing_strength"]
        fit = summary["fits"]["coherence_magnitude"]
        assert fit["rate"] == pytest.approx(4.0 * d, rel=0.01)
        assert (tmp_path / "dephasing_qubit_summary.json").exists()

    def test_two_packet_collisional_snapshots(self, tmp_path):
        cfg = parse_config((SCENARIO_DIR / "two_packet_collisional.cfg").read_text())
        summary = run_scenario(cfg, out_dir=tmp_path)
        snaps = summary["files"]["wigner_snapshots"]
        assert len(snaps) == 3
        for snap in snaps:
            assert (tmp_path / snap["file"]).exists()
        # interference ridge between the packets damps away: compare the
        # central-row oscillation amplitude of first and last snapshots
        first = _wigner_mid_amplitude(tmp_path / snaps[0]["file"])
        last = _wigner_mid_amplitude(tmp_path / snaps[-1]["file"])
        assert last < 0.1 * first
        # the fitted decay rate matches Lambda (dx)^2 with dx = 2 x0
        fit = summary["fits"]["coherence_magnitude"]
        want = 0.05 * (2 * 2.0) ** 2
        assert fit["rate"] == pytest.approx(want, rel=0.05)

    def test_cavity_scenario_summary_values(self, tmp_path):
        cfg = parse_config((SCENARIO_DIR / "cavity_cat.cfg").read_text())
        summary = run_scenario(cfg, out_dir=tmp_path)
        info = summary["model_info"]
        assert 20e-3 <= info["decoherence_time"] <= 24e-3
        fit = summary["fits"]["coherence_magnitude"]
        assert fit["rate"] == pytest.approx(1.0 / info["decoherence_time"], rel=1e-6)

    def test_empty_outputs_summary_only(self, tmp_path):
        text = MINIMAL_QUBIT.replace(
            "quantities = coherence_magnitude, purity", "quantities =")
        cfg = parse_config(text)
        summary = run_scenario(cfg, out_dir=tmp_path)
        assert summary["files"].get("timeseries") is None
        assert (tmp_path / "mini_summary.json").exists()

    def test_spin_spin_mutual_information_series(self, tmp_path):
        text = """
[scenario]
name = ss
model = spin_spin
seed = 5

[params]
n_spins = 6
coupling_scale = 1.0

[initial_state]
kind = qubit_bloch
theta = 1.5707963267948966

[integrator]
dt = 0.05
t_final = 2.0
record_stride = 4

[outputs]
quantities = coherence_magnitude, mutual_information
fit = gaussian
"""
        cfg = parse_config(text)
        summary = run_scenario(cfg, out_dir=tmp_path)
        rows = (tmp_path / "ss_timeseries.csv").read_text().splitlines()
        header = rows[0].split(",")
        mi_col = header.index("mutual_information")
        coh_col = header.index("coherence_magnitude")
        first = rows[1].split(",")
        last = rows[-1].split(",")
        assert float(first[mi_col]) == pytest.approx(0.0, abs=1e-9)
        assert float(last[mi_col]) > 0.5
        assert float(last[coh_col]) < float(first[coh_col])
        assert "rate_sq" in summary["fits"]["coherence_magnitude"]

    def test_custom_lindblad_model(self, tmp_path):
        text = """
[scenario]
name = custom
model = custom_lindblad
seed = 0

[params]
dim = 2
hamiltonian = 0, 0, 0, 0
lindblad_1 = 1, 0, 0, -1
rate_1 = 0.5

[initial_state]
kind = qubit_bloch
theta = 1.5707963267948966

[integrator]
dt = 0.002
t_final = 2.0
record_stride = 100

[outputs]
quantities = coherence_magnitude
fit = exponential
"""
        cfg = parse_config(text)
        summary = run_scenario(cfg, out_dir=tmp_path)
        # sigma_z at rate 0.5 dephases |rho01| at rate 2 * 0.5 = 1
        assert summary["fits"]["coherence_magnitude"]["rate"] == \
            pytest.approx(1.0, rel=0.01)

    def test_fixed_seed_runs_are_byte_identical(self, tmp_path):
        cfg_text = (SCENARIO_DIR / "dephasing_qubit.cfg").read_text()
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run_scenario(parse_config(cfg_text), out_dir=out1)
        run_scenario(parse_config(cfg_text), out_dir=out2)
        for f1 in sorted(out1.iterdir()):
            f2 = out2 / f1.name
            assert f1.read_bytes() == f2.read_bytes()


def _wigner_mid_amplitude(path: Path) -> float:
    rows = np.genfromtxt(path, delimiter=",", names=True)
    x = rows["x"]
    mid = np.abs(x) < 0.2
    return float(np.max(np.abs(rows["w"][mid])))


class TestListModels:
    def test_lists_all_seven_models(self):
        text = list_models()
        entries = [l for l in text.splitlines() if l.startswith("model ")]
        assert len(entries) == 7

    def test_every_entry_names_a_reference_topic(self):
        text = list_models()
        blocks = text.split("model ")[1:]
        for block in blocks:
            assert "reference:" in block

    def test_schema_round_trip_every_listed_parameter_is_accepted(self):
        # build a minimal scenario for each model exercising every listed
        # parameter; validation must accept them all
        fillers = {
            "collisional": ("lambda = 0.5\ngamma_tot = 0.1\nregime = long_wavelength"
                            "\nmass = 1.0\nfree_dynamics = true",
                            "kind = gaussian_packet\nsigma = 0.5",
                            "[grid]\nn_points = 32\nx_min = -4\nx_max = 4"),
            "qbm": ("mass = 1\nomega = 1\ngamma0 = 0.1\ntemperature = 100\n"
                    "cutoff = 10\nanomalous = false",
                    "kind = gaussian_packet\nsigma = 0.5",
                    "[grid]\nn_points = 32\nx_min = -4\nx_max = 4"),
            "caldeira_leggett": ("mass = 1\nomega = 1\ngamma0 = 0.1\n"
                                 "temperature = 100\ncutoff = 10\ndissipation = true",
                                 "kind = gaussian_packet\nsigma = 0.5",
                                 "[grid]\nn_points = 32\nx_min = -4\nx_max = 4"),
            "spin_boson": ("alpha = 0.1\ntemperature = 1\ncutoff = 50\ndelta0 = 0",
                           "kind = qubit_bloch\ntheta = 1.0", ""),
            "spin_spin": ("n_spins = 4\ncoupling_scale = 1.0",
                          "kind = qubit_bloch\ntheta = 1.0", ""),
            "cavity_cat": ("damping_time = 0.13",
                           "kind = cat\nalpha = 2.0\nchi = 1.0", ""),
            "custom_lindblad": ("dim = 2\nhamiltonian = 0,0,0,0\n"
                                "lindblad_1 = 1,0,0,-1\nrate_1 = 0.1",
                                "kind = qubit_bloch\ntheta = 1.0", ""),
        }
        for model, (params, state, grid) in fillers.items():
            text = f"""
[scenario]
name = probe
model = {model}
seed = 0

[params]
{params}

[initial_state]
{state}

[integrator]
dt = 0.01
t_final = 0.1

[outputs]
quantities = coherence_magnitude
{grid}
"""
            cfg = parse_config(text)
            assert cfg.model == model
            declared = set(MODEL_SCHEMAS[model]["params"])
            assert set(cfg.params) <= declared


class TestCLI:
    def test_models_command(self, capsys):
        assert cli_main(["models"]) == 0
        out = capsys.readouterr().out
        assert "model spin_boson" in out

    def test_validate_ok(self, capsys):
        rc = cli_main(["validate", str(SCENARIO_DIR / "dephasing_qubit.cfg")])
        assert rc == 0
        assert "ok:" in capsys.readouterr().out

    def test_validate_bad_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text(MINIMAL_QUBIT + "\n[mystery]\nx = 1\n")
        assert cli_main(["validate", str(bad)]) == 2

    def test_missing_file_exits_2(self):
        assert cli_main(["validate", "/nonexistent/nope.cfg"]) == 2

    def test_run_writes_outputs(self, tmp_path, capsys):
        rc = cli_main(["run", str(SCENARIO_DIR / "dephasing_qubit.cfg"),
                       "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "dephasing_qubit_summary.json").exists()
        payload = json.loads(capsys.readouterr().out)
        assert payload["scenario"] == "dephasing_qubit"

    def test_numerical_failure_exits_3(self, tmp_path):
        # a coherent (non-cat) state has zero catness: no decoherence time
        text = """
[scenario]
name = nocat
model = cavity_cat
seed = 0

[params]
damping_time = 0.13

[initial_state]
kind = coherent
alpha = 2.0

[integrator]
dt = 0.001
t_final = 0.05

[outputs]
quantities = coherence_magnitude
"""
        path = tmp_path / "nocat.cfg"
        path.write_text(text)
        assert cli_main(["run", str(path), "--out", str(tmp_path)]) == 3

    def test_entry_point_runs_as_subprocess(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "decoherence.cli", "models"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "model collisional" in proc.stdout
