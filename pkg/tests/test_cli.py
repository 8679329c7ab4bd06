import numpy as np
import pytest

from dickesim import cli

PAPER_CFG = """\
W = 5.46
sigma_W = 0.07
p_list = 0.00, 0.03, 0.88, 0.03, 0.03
sigma_list = 0.00, 0.02, 0.03, 0.02, 0.02
j_M = 2
"""


def _data_rows(path):
    rows = []
    for line in open(path):
        if line.startswith("#"):
            continue
        rows.append(line.strip().split(","))
    return rows[0], rows[1:]


def test_darkstate_half_pi_amplitudes(tmp_path):
    out = tmp_path / "dark.csv"
    assert cli.main(["darkstate", "--n", "4", "--theta", "1.5708",
                     "--output", str(out)]) == 0
    header, rows = _data_rows(out)
    assert header == ["excitation", "amplitude"]
    amps = [float(r[1]) for r in rows]
    assert np.allclose(amps, [0.6124, -0.5, 0.6124], atol=5e-4)
    assert [int(r[0]) for r in rows] == [0, 2, 4]


def test_darkstate_provenance_header(tmp_path):
    out = tmp_path / "dark.csv"
    cli.main(["darkstate", "--n", "2", "--output", str(out)])
    first = open(out).readline()
    assert first.startswith("# dickesim ")


def test_bounds_on_published_inputs(tmp_path, capsys):
    cfg = tmp_path / "paper.cfg"
    cfg.write_text(PAPER_CFG)
    out = tmp_path / "bounds.csv"
    assert cli.main(["bounds", "--input", str(cfg), "--output", str(out)]) == 0
    summary = capsys.readouterr().out
    assert "F_lo = 0.835000" in summary
    assert "F_hi = 0.880000" in summary
    assert "ghz_excluded = True" in summary
    text = out.read_text()
    # verbatim echo of the raw input strings
    assert '"0.00, 0.03, 0.88, 0.03, 0.03"' in text


def test_bounds_missing_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("W = 5.0\n")
    assert cli.main(["bounds", "--input", str(cfg)]) == 2


def test_parity_ideal(tmp_path, capsys):
    out = tmp_path / "parity.csv"
    assert cli.main(["parity", "--n", "2", "--output", str(out)]) == 0
    summary = capsys.readouterr().out
    fidelity = float([ln for ln in summary.splitlines() if ln.startswith("fidelity")][0]
                     .split("=")[1])
    assert fidelity == pytest.approx(1.0, abs=1e-9)
    header, rows = _data_rows(out)
    assert header == ["phi", "parity"]
    assert len(rows) == 40


def test_parity_wrong_ion_number():
    assert cli.main(["parity", "--n", "3"]) == 2


def test_parity_sampled_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["parity", "--n", "2", "--shots", "2000", "--seed", "77", "--phases", "16"]
    assert cli.main(args + ["--output", str(a)]) == 0
    assert cli.main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_witness_ideal(tmp_path):
    out = tmp_path / "witness.csv"
    assert cli.main(["witness", "--n", "4", "--output", str(out)]) == 0
    header, rows = _data_rows(out)
    assert header == ["axes", "value", "threshold", "genuine_multipartite"]
    yz = rows[0]
    assert yz[0] == "yz"
    assert float(yz[1]) == pytest.approx(6.0, abs=1e-9)
    assert yz[3] == "True"


def test_evolve_quick_run(tmp_path, capsys):
    out = tmp_path / "evolve.csv"
    assert cli.main(["evolve", "--n", "2", "--eta-omega-t", "10",
                     "--delta-ratio", "5", "--output", str(out)]) == 0
    summary = capsys.readouterr().out
    assert "final_jz" in summary
    header, rows = _data_rows(out)
    assert header == ["t", "jz_mean", "var_jx", "var_jy", "var_jz", "dark_fidelity"]
    assert float(rows[0][0]) == 0.0
    assert float(rows[-1][0]) == pytest.approx(10.0, abs=1e-9)


def test_scan_noise_quick_run(tmp_path):
    out = tmp_path / "noise.csv"
    assert cli.main(["scan-noise", "--n", "4", "--eta-omega-t", "10",
                     "--delta-ratio", "5", "--cuts", "5", "--output", str(out)]) == 0
    header, rows = _data_rows(out)
    assert header == ["tau_c", "var_jx", "var_jy", "var_jz"]
    assert len(rows) == 5
    # initial state is the pole: variances (1, 1, 0)
    assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-9)
    assert float(rows[0][3]) == pytest.approx(0.0, abs=1e-9)


def test_sweep_quick_run(tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--n", "2", "--eta-omega-t-list", "6,12",
                     "--delta-ratio", "5", "--output", str(out)]) == 0
    header, rows = _data_rows(out)
    assert header == ["eta_omega_t", "final_jz", "midpoint_dark_fidelity"]
    assert len(rows) == 2
    # longer ramp transfers better
    assert float(rows[1][1]) > float(rows[0][1])


def test_sweep_parallel_workers_match_sequential(tmp_path):
    seq, par = tmp_path / "seq.csv", tmp_path / "par.csv"
    base = ["sweep", "--n", "2", "--eta-omega-t-list", "6,12", "--delta-ratio", "5"]
    assert cli.main(base + ["--output", str(seq)]) == 0
    assert cli.main(base + ["--workers", "2", "--output", str(par)]) == 0
    assert seq.read_text() == par.read_text()


def test_config_file_defaults_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 2\ntheta = 0.0\n")
    out = tmp_path / "a.csv"
    # file supplies both values
    assert cli.main(["darkstate", "--config", str(cfg), "--output", str(out)]) == 0
    _, rows = _data_rows(out)
    assert len(rows) == 2 and float(rows[0][1]) == pytest.approx(1.0)
    # the explicit flag beats the file value
    out2 = tmp_path / "b.csv"
    assert cli.main(["darkstate", "--config", str(cfg), "--n", "4",
                     "--output", str(out2)]) == 0
    _, rows2 = _data_rows(out2)
    assert len(rows2) == 3


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bogus = 1\n")
    assert cli.main(["darkstate", "--config", str(cfg)]) == 2


def test_summary_file(tmp_path, capsys):
    summary = tmp_path / "sum.txt"
    assert cli.main(["parity", "--n", "2", "--output", str(tmp_path / "p.csv"),
                     "--summary", str(summary)]) == 0
    text = summary.read_text()
    assert text.startswith("amplitude = ")
    assert "fidelity = " in text


def test_evolve_strict_preset_reaches_full_transfer(tmp_path, capsys):
    out = tmp_path / "strict.csv"
    assert cli.main(["evolve", "--n", "4", "--adiabatic-preset", "strict",
                     "--output", str(out)]) == 0
    summary = capsys.readouterr().out
    final_jz = float([ln for ln in summary.splitlines()
                      if ln.startswith("final_jz")][0].split("=")[1])
    assert final_jz >= 1.98
    _, rows = _data_rows(out)
    assert float(rows[-1][1]) >= 1.98


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["not-a-command"])
    assert excinfo.value.code == 1
