import csv
import io
import json

import numpy as np
import pytest

from ndmaser.cli import main
from ndmaser.errors import ConfigError
from ndmaser.model import MaserParams
from ndmaser.sweeps import (
    COLUMNS,
    SweepConfig,
    apply_axis,
    evaluate_point,
    power_sign_changes,
    reproduce_figure,
    run_sweep,
    to_csv,
    to_json,
)


def _config(**kw):
    data = dict(base=MaserParams().to_dict(), sweep_axis="nh2_over_nc", **{"from": 0.2, "to": 5.0}, points=12)
    data.update(kw)
    return data


def test_config_from_dict():
    cfg = SweepConfig.from_dict(_config())
    assert cfg.points == 12 and np.allclose(cfg.values()[[0, -1]], [0.2, 5.0])


@pytest.mark.parametrize("bad", [dict(sweep_axis="gamma"), dict(points=1), dict(solver="x"), dict(outputs=["nope"])])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        SweepConfig.from_dict(_config(**bad))


def test_apply_axis():
    base = MaserParams(n_c=0.1)
    assert apply_axis(base, "nh2_over_nc", 3.0).n_h2 == pytest.approx(0.3)
    assert apply_axis(base, "lambda", 0.2).lambda_drive == 0.2
    assert apply_axis(base, "delta", 0.0).delta == 0.0


def test_sweep_csv_layout_and_determinism():
    cfg = SweepConfig.from_dict(_config())
    text = to_csv(run_sweep(cfg))
    assert text == to_csv(run_sweep(cfg))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["nh2_over_nc", *COLUMNS]
    assert len(rows) == 13
    assert {r[rows[0].index("regime")] for r in rows[1:]} == {"engine", "refrigerator"}


def test_parallel_matches_serial():
    cfg = SweepConfig.from_dict(_config(points=6))
    assert to_csv(run_sweep(cfg, workers=2)) == to_csv(run_sweep(cfg))


def test_json_nulls():
    rows = run_sweep(SweepConfig.from_dict(_config(points=3)))
    data = json.loads(to_json(rows))
    assert data[0]["eta"] is None  # first point is a refrigerator
    assert data[-1]["chi"] is None


def test_failure_captured_in_row():
    row = evaluate_point(MaserParams(delta=0.0, lambda_drive=0.0, p=1.0))
    assert row.error.startswith("DarkState") and row.P is None
    assert "NA" in to_csv([row])


def test_power_sign_change_location():
    rows = run_sweep(SweepConfig.from_dict(_config(points=25, base=MaserParams(delta=0).to_dict())))
    (cross,) = power_sign_changes(rows)
    assert 0.8 < cross < 1.2


def test_figure_phase_panel(tmp_path):
    paths = reproduce_figure("fig2a", tmp_path, grid=32)
    meta = json.loads((tmp_path / "fig2a.json").read_text())
    assert meta["k"] == pytest.approx(4.5)
    assert meta["grid_size"] == 32
    assert len(paths) == 2


def test_figure_sweep_panel(tmp_path):
    reproduce_figure("fig3a", tmp_path, points=8)
    meta = json.loads((tmp_path / "fig3a.json").read_text())
    assert [s["label"] for s in meta["series"]] == ["delta0.05", "delta0.2"]
    assert meta["series"][0]["diagnostics"]["errors"] == 0
    assert (tmp_path / "fig3a_delta0.2.csv").exists()


def test_cli_steady(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"delta": 0.0, "n_h2": 0.5}))
    assert main(["steady", "--config", str(cfg)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["method"] == "analytic" and out["eta"] == pytest.approx(2 / 3)


def test_cli_sweep_and_bounds(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps(_config(points=4)))
    out = tmp_path / "o.json"
    assert main(["sweep", "--config", str(cfg), "--format", "json", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())) == 4
    assert main(["bounds"]) == 0
    assert "ratio_ps" in json.loads(capsys.readouterr().out)


def test_cli_phase_dist(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["phase-dist", "--grid", "16", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 257


def test_cli_errors(tmp_path, capsys):
    assert main(["sweep"]) == 2
    assert main(["steady", "--config", str(tmp_path / "missing.json")]) in (2, 3)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 3}))
    assert main(["steady", "--config", str(bad)]) == 2
