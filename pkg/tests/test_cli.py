import csv
import json
from pathlib import Path

import numpy as np
import pytest

from floquetwaves.cli import main, EXIT_OK, EXIT_HARD, EXIT_ADVISORY
import floquetwaves.cli as cli_mod


def write_config(tmp_path, **kw):
    base = dict(
        period=2 * np.pi, eps=0.1, bc="absorbing", kappa0=0.5,
        K=6, p=5, K_list=[2, 4], p_list=[3, 4], K_ref=8, p_ref=6,
        eps_grid=[0.0, 0.1], n_paths=2, dt_steps=50, periods=2,
        target_re=0.334, target_im=-0.557, radius=0.3, fit_lo=3,
        outdir=str(tmp_path / "out"),
    )
    base.update(kw)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(base))
    return path


def test_spectrum_subcommand_ok(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code = main(["spectrum", "--config", str(cfg)])
    out = capsys.readouterr().out.strip()
    assert code in (EXIT_OK, EXIT_ADVISORY)
    assert out.endswith("spectrum.csv")
    assert Path(out).exists()


def test_flag_overrides_and_aliases(tmp_path):
    cfg = write_config(tmp_path)
    code = main(["sturm", "--config", str(cfg), "--harmonics", "12",
                 "--degree", "3"])
    assert code == EXIT_OK
    with open(tmp_path / "out" / "sturm.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * 12 + 1  # --harmonics override applied


def test_all_subcommand_writes_manifest(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code = main(["all", "--config", str(cfg)])
    out = capsys.readouterr().out.strip()
    assert code == EXIT_OK
    manifest = json.loads(Path(out).read_text())
    assert len(manifest["artifacts"]) >= 7
    assert all(a["status"] == "ok" for a in manifest["artifacts"])


def test_hard_failure_exit_code(tmp_path, capsys):
    # unreachable target: converge cannot find a reference eigenvalue
    cfg = write_config(tmp_path, target_re=40.0, target_im=40.0, radius=0.01)
    code = main(["converge", "--config", str(cfg)])
    assert code == EXIT_HARD
    assert "error" in capsys.readouterr().err


def test_all_reports_hard_failure(tmp_path, capsys):
    cfg = write_config(tmp_path, target_re=40.0, target_im=40.0, radius=0.01)
    code = main(["all", "--config", str(cfg)])
    assert code == EXIT_HARD


def test_bad_config_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["sturm", "--config", str(path)]) == EXIT_HARD
    missing = tmp_path / "missing.json"
    assert main(["sturm", "--config", str(missing)]) == EXIT_HARD


def test_unknown_subcommand_rejected():
    with pytest.raises(SystemExit):
        main(["not-a-command"])


def test_validate_time_dt_flag(tmp_path):
    cfg = write_config(tmp_path, periods=1)
    period = 2 * np.pi
    code = main(["validate-time", "--config", str(cfg),
                 "--dt", str(period / 25)])
    assert code == EXIT_OK
    with open(tmp_path / "out" / "time_validation.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 25 + 1


def test_advisory_exit_code(tmp_path, monkeypatch, capsys):
    from floquetwaves.diagnostics import RegionReport
    cfg = write_config(tmp_path)

    def fake_check(report, problem, tolerance=1e-6, margin=1.0):
        return RegionReport(bound=0.0, violations=[(0.1j, 0.1)],
                            advisory=True, threshold=99, tolerance=tolerance)

    monkeypatch.setattr(cli_mod, "region_check", fake_check)
    code = main(["spectrum", "--config", str(cfg)])
    assert code == EXIT_ADVISORY
    assert "advisory" in capsys.readouterr().err


def test_non_advisory_violation_is_hard(tmp_path, monkeypatch, capsys):
    from floquetwaves.diagnostics import RegionReport
    cfg = write_config(tmp_path)

    def fake_check(report, problem, tolerance=1e-6, margin=1.0):
        return RegionReport(bound=0.0, violations=[(0.1j, 0.1)],
                            advisory=False, threshold=1, tolerance=tolerance)

    monkeypatch.setattr(cli_mod, "region_check", fake_check)
    code = main(["spectrum", "--config", str(cfg)])
    assert code == EXIT_HARD


def test_subcommands_registered():
    from floquetwaves.cli import SUBCOMMANDS
    assert SUBCOMMANDS == ["spectrum", "converge", "validate-time",
                           "localize", "folding", "eps-path",
                           "oracle-compare", "sturm", "all"]
