"""Loader behavior: preamble parsing, column contracts, loud failures."""

from __future__ import annotations

import numpy as np
import pytest

from figkit.schema import SchemaError, contract_for, read_table
from tablegen import write_dataset, write_table


def test_round_trip_preserves_values_and_metadata(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
                [(5.0, 0.0, 0.25, 0.01, 10), (25.0, 0.0, 0.5, 0.02, 10)], "fig2a")
    t = read_table(tmp_path / "t.csv")
    assert t.name == "fig2a"
    assert t.meta["preset"] == "fig2a"
    assert t.meta["config"] == {"preset": "fig2a", "seed": 7}
    assert len(t) == 2
    np.testing.assert_allclose(t.col("W_over_J"), [5.0, 25.0])
    np.testing.assert_allclose(t.col("pi_mean"), [0.25, 0.5])


def test_label_columns_stay_strings(tmp_path):
    write_table(tmp_path / "t.csv", "fig3a",
                ("W_over_J", "eps_lo", "eps_hi", "s", "pdf", "n_spacings", "best_fit"),
                [(5.0, 0.45, 0.55, 0.1, 0.2, 500, "wigner_dyson")], "fig3a")
    t = read_table(tmp_path / "t.csv")
    assert t.col("best_fit")[0] == "wigner_dyson"
    assert t.col("s").dtype == float


def test_per_curve_suffix_matches_family_contract():
    assert contract_for("fig1c_gc5") == ("distance", "log_mean_amp2", "analytic_tail")
    with pytest.raises(SchemaError):
        contract_for("fig9z")


def test_missing_column_is_named(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_avg", "pi_sem", "realizations"),
                [], "fig2a")
    with pytest.raises(SchemaError, match="pi_mean"):
        read_table(tmp_path / "t.csv")


def test_unexpected_column_is_named(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations", "extra"),
                [], "fig2a")
    with pytest.raises(SchemaError, match="extra"):
        read_table(tmp_path / "t.csv")


def test_reordered_columns_fail(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("g_c_over_J", "W_over_J", "pi_mean", "pi_sem", "realizations"),
                [], "fig2a")
    with pytest.raises(SchemaError, match="order"):
        read_table(tmp_path / "t.csv")


def test_missing_schema_line_fails(tmp_path):
    (tmp_path / "t.csv").write_text("# preset: fig2a\nW_over_J,g_c_over_J\n")
    with pytest.raises(SchemaError, match="schema"):
        read_table(tmp_path / "t.csv")


def test_unsupported_version_fails(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
                [], "fig2a")
    text = (tmp_path / "t.csv").read_text().replace("fig2a.v1", "fig2a.v2")
    (tmp_path / "t.csv").write_text(text)
    with pytest.raises(SchemaError, match="v2"):
        read_table(tmp_path / "t.csv")


def test_ragged_row_fails(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
                [], "fig2a")
    with open(tmp_path / "t.csv", "a") as fh:
        fh.write("5.0,0.0,0.25\n")
    with pytest.raises(SchemaError, match="row 0"):
        read_table(tmp_path / "t.csv")


def test_empty_table_loads_with_zero_rows(tmp_path):
    write_table(tmp_path / "t.csv", "fig2a",
                ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
                [], "fig2a")
    t = read_table(tmp_path / "t.csv")
    assert len(t) == 0
    assert t.col("pi_mean").shape == (0,)


def test_fixture_dataset_is_schema_valid(tmp_path):
    write_dataset(tmp_path)
    for csv in sorted(tmp_path.rglob("*.csv")):
        t = read_table(csv)
        assert len(t) > 0, csv
