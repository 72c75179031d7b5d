import csv
import json
from pathlib import Path

import pytest

from semiloc import cli
from semiloc.presets import (
    PRESET_NAMES,
    SCALES,
    ConfigError,
    config_from_dict,
    config_to_dict,
    resolve_preset,
)

TINY = {
    "preset": "tiny",
    "kind": "return_probability",
    "scale": "desk",
    "seed": 7,
    "threads": 1,
    "realizations": 3,
    "J": 1.0,
    "lattice": "chain",
    "boundary": "periodic",
    "sizes": [24],
    "W_values": [8.0],
    "g_c_values": [0.0, 5.0],
}


def _write_config(tmp_path, overrides=None, name="tiny.json"):
    data = dict(TINY)
    data.update(overrides or {})
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _read_csv(path: Path):
    lines = path.read_text(encoding="utf-8").splitlines()
    comments = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    rows = list(csv.reader(body))
    return comments, rows[0], rows[1:]


def test_every_preset_resolves_at_both_scales():
    for name in PRESET_NAMES:
        for scale in SCALES:
            config = resolve_preset(name, scale)
            assert config.preset == name
            assert config.scale == scale
            # round-trips through the dict form used in metadata
            again = config_from_dict(config_to_dict(config))
            assert again == config


def test_unknown_preset_and_bad_scale():
    with pytest.raises(ConfigError, match="preset"):
        resolve_preset("fig9z")
    with pytest.raises(ConfigError, match="scale"):
        resolve_preset("fig2a", "poster")


def test_validation_names_the_field():
    for overrides, field in (
        ({"realizations": 0}, "realizations"),
        ({"kind": "sorcery"}, "kind"),
        ({"W_values": [-1.0]}, "W_values"),
        ({"kind": "spacings"}, "regimes"),
        ({"window": [5.0, 1.0]}, "window"),
    ):
        data = dict(TINY)
        data.update(overrides)
        with pytest.raises(ConfigError) as err:
            config_from_dict(data)
        assert err.value.field == field


def test_cli_rejects_bad_invocations(tmp_path, capsys):
    assert cli.main(["run"]) == 2
    assert "preset" in capsys.readouterr().err
    config = _write_config(tmp_path)
    assert cli.main(["run", "--preset", "fig2a", "--config", str(config)]) == 2
    bad = _write_config(tmp_path, {"wizardry": 3}, name="bad.json")
    assert cli.main(["run", "--config", str(bad)]) == 2
    assert "wizardry" in capsys.readouterr().err
    notjson = tmp_path / "broken.json"
    notjson.write_text("{", encoding="utf-8")
    assert cli.main(["run", "--config", str(notjson)]) == 2


def test_tiny_run_emits_contracted_files(tmp_path):
    config = _write_config(tmp_path)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 0
    comments, header, rows = _read_csv(out / "tiny.csv")
    assert header == ["W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"]
    assert len(rows) == 2  # one row per coupling
    assert all(c.startswith("# ") for c in comments)
    assert any("seed: 7" in c for c in comments)
    meta = json.loads((out / "tiny_meta.json").read_text(encoding="utf-8"))
    assert meta["seed"] == 7
    assert meta["config"]["sizes"] == [24]
    assert meta["failures"] == []
    assert meta["wall_time_s"] >= 0
    assert "tiny.csv" in meta["outputs"]


def test_metadata_reruns_bit_identical(tmp_path):
    config = _write_config(tmp_path)
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert cli.main(["run", "--config", str(config), "--out", str(first)]) == 0
    meta = first / "tiny_meta.json"
    assert cli.main(["run", "--config", str(meta), "--out", str(second)]) == 0
    a = (first / "tiny.csv").read_bytes()
    b = (second / "tiny.csv").read_bytes()
    assert a == b


def test_flags_override_config_values(tmp_path):
    config = _write_config(tmp_path)
    base = tmp_path / "base"
    reseeded = tmp_path / "reseeded"
    onegc = tmp_path / "onegc"
    assert cli.main(["run", "--config", str(config), "--out", str(base)]) == 0
    assert (
        cli.main(
            ["run", "--config", str(config), "--seed", "8", "--out", str(reseeded)]
        )
        == 0
    )
    assert (first := (base / "tiny.csv").read_bytes()) != (
        reseeded / "tiny.csv"
    ).read_bytes()
    assert first  # same-file guard
    assert (
        cli.main(["run", "--config", str(config), "--gc", "3", "--out", str(onegc)])
        == 0
    )
    _, _, rows = _read_csv(onegc / "tiny.csv")
    assert len(rows) == 1 and rows[0][1] == "3.0"


def test_outdir_env_default(tmp_path, monkeypatch):
    config = _write_config(tmp_path)
    monkeypatch.setenv(cli.OUTDIR_ENV, str(tmp_path / "envout"))
    assert cli.main(["run", "--config", str(config)]) == 0
    assert (tmp_path / "envout" / "tiny.csv").exists()


def test_failed_realization_reports_seed_and_continues(tmp_path, monkeypatch, capsys):
    real = cli.infinite_time_pi
    calls = {"n": 0}

    def flaky(decomp, i, j):
        calls["n"] += 1
        if calls["n"] == 2:
            raise RuntimeError("synthetic loss of precision")
        return real(decomp, i, j)

    monkeypatch.setattr(cli, "infinite_time_pi", flaky)
    config = _write_config(tmp_path, {"g_c_values": [5.0]})
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(config), "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert "realization 1" in err and "seed 7" in err
    _, _, rows = _read_csv(out / "tiny.csv")
    assert rows[0][-1] == "2"  # two realizations survived
    meta = json.loads((out / "tiny_meta.json").read_text(encoding="utf-8"))
    assert meta["failures"][0]["index"] == 1
    assert meta["failures"][0]["seed"] == 7


def test_raw_records_roundtrip(tmp_path):
    config = _write_config(tmp_path)
    out = tmp_path / "out"
    assert (
        cli.main(["run", "--config", str(config), "--raw-records", "--out", str(out)])
        == 0
    )
    records = json.loads((out / "tiny_records.json").read_text(encoding="utf-8"))
    assert len(records) == 6  # 3 realizations x 2 couplings
    # re-aggregating the raw pi samples reproduces the published mean exactly
    import numpy as np

    from semiloc.ensemble import aggregate

    _, _, rows = _read_csv(out / "tiny.csv")
    for row in rows:
        g = float(row[1])
        samples = [r["pi"] for r in records if r["g_c"] == g]
        stats = aggregate({"pi": samples})["pi"]
        assert repr(float(stats.mean)) == row[2]
        assert repr(float(stats.sem)) == row[3]


def test_fig2a_like_schema_from_preset_template(tmp_path):
    # shrink the catalog entry, keep its table schema
    base = config_to_dict(resolve_preset("fig2a", "desk"))
    base.update(sizes=[5], realizations=2, W_values=[5.0, 40.0])
    out = tmp_path / "out"
    path = tmp_path / "fig2a.json"
    path.write_text(json.dumps(base), encoding="utf-8")
    assert cli.main(["run", "--config", str(path), "--out", str(out)]) == 0
    _, header, rows = _read_csv(out / "fig2a.csv")
    assert header == ["W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"]
    assert len(rows) == 6


def test_fig4a_like_schema_and_control(tmp_path):
    base = config_to_dict(resolve_preset("fig4a", "desk"))
    base.update(
        sizes=[4, 6],
        control_sizes=[4],
        realizations=2,
        t_max=60.0,
        n_times=61,
        window=[20.0, 60.0],
    )
    out = tmp_path / "out"
    path = tmp_path / "fig4a.json"
    path.write_text(json.dumps(base), encoding="utf-8")
    assert cli.main(["run", "--config", str(path), "--out", str(out)]) == 0
    _, header, rows = _read_csv(out / "fig4a.csv")
    assert header == ["N", "I_mean", "I_min", "I_max", "window_t1", "window_t2"]
    assert [r[0] for r in rows] == ["4", "6"]
    _, header2, rows2 = _read_csv(out / "fig4a_control.csv")
    assert header2 == header
    assert float(rows2[0][1]) <= float(rows[0][1])  # decoupled control is weaker


def test_fig1c_like_schema_and_tail_column(tmp_path):
    base = config_to_dict(resolve_preset("fig1c", "desk"))
    base.update(sizes=[20], realizations=3, g_c_values=[0.0, 5.0])
    out = tmp_path / "out"
    path = tmp_path / "fig1c.json"
    path.write_text(json.dumps(base), encoding="utf-8")
    assert cli.main(["run", "--config", str(path), "--out", str(out)]) == 0
    _, header, rows = _read_csv(out / "fig1c_gc5.csv")
    assert header == ["distance", "log_mean_amp2", "analytic_tail"]
    from semiloc.perturbation import mean_tail

    expected = mean_tail(5.0, 25.0, 20).value
    assert all(float(r[2]) == expected for r in rows)
    _, _, rows0 = _read_csv(out / "fig1c_gc0.csv")
    assert all(float(r[2]) == 0.0 for r in rows0)
