"""Scan configuration, CSV/SVG emission, CLI behavior."""
import json
import math

import numpy as np
import pytest

import nuqsim.cli as cli
from nuqsim.builders import earth_profile
from nuqsim.oscillation import (MatterLayer, NumericalDomainError, OscParams,
                                prob_msw_adiabatic, prob_slab)
from nuqsim.scan import (ConfigError, ScanConfig, ScanPoint, ScanResult,
                         emit_csv, emit_plot, run_scan,
                         slab_profile_from_config)


# --- config -------------------------------------------------------------------

def test_defaults():
    cfg = ScanConfig(scenario="slab")
    assert cfg.shots == 4096
    assert cfg.seed == 0
    assert cfg.synthesis == "exact"
    assert len(cfg.energies) == 50
    assert cfg.energies[0] == 1.0 and cfg.energies[-1] == 25.0
    msw = ScanConfig(scenario="msw")
    assert msw.energies[0] == 0.001 and msw.energies[-1] == 0.050


def test_bad_fields_are_named():
    with pytest.raises(ConfigError, match="scenario"):
        ScanConfig(scenario="moon")
    with pytest.raises(ConfigError, match="shots"):
        ScanConfig(scenario="slab", shots=0)
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig(scenario="slab", energies=(3.0, 2.0))
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig(scenario="slab", energies=(-1.0, 2.0))
    with pytest.raises(ConfigError, match="seed"):
        ScanConfig(scenario="slab", seed=-4)
    with pytest.raises(ConfigError, match="synthesis"):
        ScanConfig(scenario="msw", synthesis="magic")


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown"):
        ScanConfig.from_dict({"scenario": "slab", "shotz": 12})
    with pytest.raises(ConfigError, match="scenario"):
        ScanConfig.from_dict({"shots": 12})


def test_from_dict_rejects_wrong_types():
    with pytest.raises(ConfigError, match="shots"):
        ScanConfig.from_dict({"scenario": "slab", "shots": "many"})
    with pytest.raises(ConfigError, match="shots"):
        ScanConfig.from_dict({"scenario": "slab", "shots": True})
    with pytest.raises(ConfigError, match="ye"):
        ScanConfig.from_dict({"scenario": "slab", "ye": "half"})
    with pytest.raises(ConfigError, match="compile"):
        ScanConfig.from_dict({"scenario": "slab", "compile": 1})
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig.from_dict({"scenario": "slab", "energies": [1.0, "two"]})
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig.from_dict({"scenario": "slab",
                              "energies": {"min": "a", "max": 2, "points": 3}})


def test_energy_grid_forms():
    a = ScanConfig.from_dict({"scenario": "slab",
                              "energies": {"min": 1, "max": 5, "points": 5}})
    b = ScanConfig.from_dict({"scenario": "slab",
                              "energies": [1, 2, 3, 4, 5]})
    c = ScanConfig(scenario="slab").override(energies="1:5:5")
    assert a.energies == b.energies == c.energies == (1, 2, 3, 4, 5)
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig.from_dict({"scenario": "slab", "energies": "1:5"})
    with pytest.raises(ConfigError, match="energies"):
        ScanConfig.from_dict({"scenario": "slab",
                              "energies": {"min": 1, "hi": 2}})


def test_flags_win_over_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"scenario": "earth", "shots": 128, "seed": 7}))
    cfg = ScanConfig.from_json(str(path)).override(shots=256, compile=True)
    assert cfg.scenario == "earth"
    assert cfg.shots == 256           # flag wins
    assert cfg.seed == 7              # file value kept
    assert cfg.compile is True


def test_from_json_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        ScanConfig.from_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  broken\n}")
    with pytest.raises(ConfigError, match="line 2"):
        ScanConfig.from_json(str(bad))


# --- run_scan -----------------------------------------------------------------

def test_earth_scan_exact_matches_oracle():
    cfg = ScanConfig(scenario="earth", energies=tuple(np.linspace(1, 25, 25)),
                     shots=64)
    result = run_scan(cfg)
    p = OscParams(math.radians(cfg.theta13_deg), cfg.dm2_31)
    th23 = math.radians(cfg.theta23_deg)
    prof = earth_profile(cfg.ye)
    assert len(result.points) == 25
    for pt in result.points:
        oracle = prob_slab(p, prof, pt.energy_gev, "mu", th23)
        assert abs(pt.p_exact - oracle) < 1e-12
        assert abs(pt.p_exact - pt.p_theory) < 1e-9
        assert 0.0 <= pt.p_sampled <= 1.0


def test_slab_scan_plain_mode():
    cfg = ScanConfig(scenario="slab", energies=(2.0, 5.0, 11.0),
                     angle_mode="plain", shots=32)
    result = run_scan(cfg)
    p = OscParams(math.radians(cfg.theta13_deg), cfg.dm2_31)
    prof = slab_profile_from_config(cfg)
    for pt in result.points:
        assert abs(pt.p_theory - prob_slab(p, prof, pt.energy_gev)) < 1e-15


def test_msw_exact_channels_sum_to_one():
    cfg = ScanConfig(scenario="msw", energies=tuple(np.linspace(0.001, 0.05, 10)),
                     shots=128)
    result = run_scan(cfg)
    assert len(result.points) == 20
    by_energy = {}
    for pt in result.points:
        by_energy.setdefault(pt.energy_gev, {})[pt.channel] = pt
    p = OscParams(math.radians(cfg.theta12_deg), cfg.dm2_21)
    layer = MatterLayer(cfg.production_rho, cfg.ye, 0.0)
    for e, chans in by_energy.items():
        assert set(chans) == {"ee", "emu"}
        assert chans["ee"].p_exact + chans["emu"].p_exact == 1.0
        assert chans["ee"].p_sampled + chans["emu"].p_sampled == 1.0
        pee, pem = prob_msw_adiabatic(p, layer, e)
        assert abs(chans["ee"].p_theory - pee) < 1e-15
        assert abs(chans["emu"].p_theory - pem) < 1e-15
        assert abs(chans["ee"].p_exact - pee) < 1e-12


def test_msw_optimized_mode_close_to_theory():
    cfg = ScanConfig(scenario="msw", energies=(0.002, 0.02), shots=64,
                     synthesis="optimized", restarts=64)
    result = run_scan(cfg)
    for pt in result.points:
        assert abs(pt.p_exact - pt.p_theory) < 1e-3


# --- CSV ------------------------------------------------------------------------

def _tiny_result():
    return ScanResult(scenario="slab", shots=16, points=(
        ScanPoint(1.0, None, 0.1, 0.1000000000000001, 0.125, 0.02),
        ScanPoint(2.0, None, 0.5, 0.5, 0.4375, 0.06),
        ScanPoint(3.0, None, 0.9, 0.9, 0.875, 0.04),
    ))


def test_csv_header_only_for_empty(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv(ScanResult("slab", 16, ()), str(path))
    assert path.read_text() == "energy_gev,p_theory,p_exact,p_sampled,stderr\n"


def test_csv_line_count(tmp_path):
    path = tmp_path / "three.csv"
    emit_csv(_tiny_result(), str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "energy_gev,p_theory,p_exact,p_sampled,stderr"


def test_csv_round_trip_exact(tmp_path):
    """Parser oracle: re-reading the CSV reproduces the ScanResult."""
    cfg = ScanConfig(scenario="earth", energies=(1.0, 3.0, 9.0, 24.0))
    result = run_scan(cfg)
    path = tmp_path / "rt.csv"
    emit_csv(result, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "energy_gev,p_theory,p_exact,p_sampled,stderr"
    parsed = []
    for line in lines[1:]:
        e, pt_, pe, ps, se = (float(tok) for tok in line.split(","))
        parsed.append(ScanPoint(e, None, pt_, pe, ps, se))
    assert tuple(parsed) == result.points


def test_csv_round_trip_msw_channel_column(tmp_path):
    cfg = ScanConfig(scenario="msw", energies=(0.002, 0.02), shots=32)
    result = run_scan(cfg)
    path = tmp_path / "msw.csv"
    emit_csv(result, str(path))
    lines = path.read_text().splitlines()
    assert lines[0].endswith(",channel")
    rebuilt = tuple(
        ScanPoint(float(t[0]), t[5], float(t[1]), float(t[2]), float(t[3]),
                  float(t[4]))
        for t in (line.split(",") for line in lines[1:]))
    assert rebuilt == result.points


def test_csv_byte_identical_across_runs(tmp_path):
    cfg = ScanConfig(scenario="slab", energies=tuple(np.linspace(1, 25, 12)),
                     seed=9, shots=512)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_scan(cfg), str(a))
    emit_csv(run_scan(cfg), str(b))
    assert a.read_bytes() == b.read_bytes()


def test_sampled_mean_converges_to_exact():
    """Statistical soundness: over 200 seeds at one grid point, the mean
    sampled probability sits within 3*stderr/sqrt(200) of p_exact."""
    cfg = ScanConfig(scenario="earth", energies=(6.0, 7.0), shots=4096)
    base = run_scan(cfg)
    pt = base.points[0]
    samples = []
    for s in range(200):
        res = run_scan(ScanConfig(scenario="earth", energies=(6.0, 7.0),
                                  shots=4096, seed=s))
        samples.append(res.points[0].p_sampled)
    stderr = math.sqrt(pt.p_exact * (1 - pt.p_exact) / cfg.shots)
    assert abs(np.mean(samples) - pt.p_exact) <= 3 * stderr / math.sqrt(200)


def test_slab_sampling_within_five_sigma():
    cfg = ScanConfig(scenario="slab", energies=tuple(np.linspace(1, 25, 60)),
                     shots=4096, seed=2)
    result = run_scan(cfg)
    inside = sum(
        1 for pt in result.points
        if abs(pt.p_sampled - pt.p_theory)
        <= 5 * math.sqrt(pt.p_theory * (1 - pt.p_theory) / cfg.shots))
    assert inside / len(result.points) >= 0.99


def test_scan_independent_of_other_points():
    """Per-point seeds make each sampled value grid-independent."""
    base = ScanConfig(scenario="earth", energies=tuple(np.linspace(1, 25, 7)),
                      seed=3, shots=256)
    full = run_scan(base)
    # same grid, but computed one energy at a time with matching indices
    for i, e in enumerate(base.energies):
        cfg_i = ScanConfig(scenario="earth", energies=(e,),
                           seed=base.seed ^ i, shots=256)
        single = run_scan(cfg_i)
        assert single.points[0].p_sampled == full.points[i].p_sampled


# --- SVG ------------------------------------------------------------------------

def test_plot_needs_two_points(tmp_path):
    r = ScanResult("slab", 16, (_tiny_result().points[0],))
    with pytest.raises(ValueError):
        emit_plot(r, str(tmp_path / "one.svg"))


def test_plot_byte_deterministic(tmp_path):
    cfg = ScanConfig(scenario="earth", energies=tuple(np.linspace(1, 25, 20)),
                     seed=1, shots=256)
    result = run_scan(cfg)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_plot(result, str(a))
    emit_plot(result, str(b))
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<?xml")
    assert "Energy [GeV]" in text and "Probability" in text
    assert text.count("<polyline") == 1
    # the probability axis always spans [0, 1]
    assert ">0<" in text and ">1<" in text


def test_plot_msw_has_two_series(tmp_path):
    cfg = ScanConfig(scenario="msw", energies=(0.002, 0.01, 0.05), shots=64)
    path = tmp_path / "msw.svg"
    emit_plot(run_scan(cfg), str(path))
    text = path.read_text()
    assert text.count("<polyline") == 2
    assert "P(nu_e -&gt; nu_e)" in text or "P(nu_e -> nu_e)" in text


# --- CLI ------------------------------------------------------------------------

def test_cli_scan_success(tmp_path, capsys):
    csv = tmp_path / "out.csv"
    svg = tmp_path / "out.svg"
    code = cli.main(["scan", "--scenario", "earth", "--energies", "1:25:8",
                     "--shots", "128", "--seed", "4",
                     "--csv", str(csv), "--svg", str(svg)])
    assert code == 0
    assert csv.exists() and svg.exists()
    out = capsys.readouterr().out
    assert "wrote" in out


def test_cli_reads_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "slab",
                               "energies": [1.0, 5.0, 9.0],
                               "shots": 64}))
    code = cli.main(["scan", "--config", str(cfg)])
    assert code == 0
    out = capsys.readouterr().out
    assert "slab: 3 energies, 64 shots" in out


def test_cli_config_error_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "slab", "shotz": 1}))
    code = cli.main(["scan", "--config", str(cfg)])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_cli_missing_scenario_exit_2(capsys):
    assert cli.main(["scan"]) == 2


def test_cli_numerical_error_exit_3(monkeypatch, capsys):
    def boom(config):
        raise NumericalDomainError("degenerate point")
    monkeypatch.setattr(cli, "run_scan", boom)
    code = cli.main(["scan", "--scenario", "earth", "--energies", "1:2:2",
                     "--shots", "8"])
    assert code == 3
    assert "numerical-domain error" in capsys.readouterr().err


def test_cli_dump_circuit(capsys):
    code = cli.main(["scan", "--scenario", "earth", "--energies", "1:25:2",
                     "--shots", "8", "--compile", "--dump-circuit"])
    assert code == 0
    out = capsys.readouterr().out
    assert "# nuqsim-circuit width=1" in out
    assert "virtual-Z: 10 gates -> 7 gates, 7 physical pulses (3 RZ folded)" in out


def test_cli_dump_msw_exact_shows_matrix(capsys):
    code = cli.main(["scan", "--scenario", "msw", "--energies",
                     "0.002:0.02:2", "--shots", "8", "--dump-circuit"])
    assert code == 0
    assert "4x4 dilation" in capsys.readouterr().out
