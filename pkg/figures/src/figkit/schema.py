"""Reading layer for the pipeline's CSV tables.

Every table starts with a '#'-prefixed preamble (key: value lines, one
JSON config blob) followed by a single header row.  Loading validates the
header against the contract for the schema tag declared in the preamble;
a renamed or missing column aborts rendering instead of producing a
quietly wrong panel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1"

# column contracts keyed by table name; a trailing '*' matches the
# parameter suffix baked into per-curve table names
CONTRACTS = {
    "fig1c_gc*": ("distance", "log_mean_amp2", "analytic_tail"),
    "fig2a": ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
    "fig2bc": ("g_c_over_J", "W_over_J", "eps", "ipr_mean", "contributing"),
    "fig2d": ("n_sites", "W_over_J", "eps_lo", "eps_hi", "ipr_mean", "ipr_sem", "realizations"),
    "fig3a": ("W_over_J", "eps_lo", "eps_hi", "s", "pdf", "n_spacings", "best_fit"),
    "fig3b": ("W_over_J", "eps_lo", "eps_hi", "mean_abs_dev", "sem", "realizations"),
    "fig4a": ("N", "I_mean", "I_min", "I_max", "window_t1", "window_t2"),
    "fig4a_control": ("N", "I_mean", "I_min", "I_max", "window_t1", "window_t2"),
    "fig4b": ("t", "g_c_over_J", "n_sites", "msd_mean", "msd_sem", "realizations"),
    "appendixD": ("n_sites", "W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations"),
}


class SchemaError(Exception):
    """Input table does not match its declared contract."""


@dataclass
class Table:
    path: Path
    name: str
    meta: dict
    columns: tuple
    data: dict = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(next(iter(self.data.values())))

    def col(self, name: str) -> np.ndarray:
        return self.data[name]


def contract_for(name: str) -> tuple:
    if name in CONTRACTS:
        return CONTRACTS[name]
    for key, cols in CONTRACTS.items():
        if key.endswith("*") and name.startswith(key[:-1]):
            return cols
    raise SchemaError(f"no column contract for table '{name}'")


def _typed(cells: list) -> np.ndarray:
    try:
        return np.array([float(c) for c in cells], dtype=float)
    except ValueError:
        # label columns stay as strings
        return np.array(cells, dtype=object)


def read_table(path) -> Table:
    path = Path(path)
    meta: dict = {}
    header = None
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif header is None:
            header = tuple(cell.strip() for cell in line.split(","))
        elif line:
            # the emitter never quotes cells, so a plain split is enough
            rows.append(line.split(","))

    tag = meta.get("schema")
    if tag is None:
        raise SchemaError(f"{path}: missing '# schema:' line")
    name, _, version = tag.partition(".")
    if version != f"v{SCHEMA_VERSION}":
        raise SchemaError(f"{path}: schema '{tag}' is not version v{SCHEMA_VERSION}")
    expected = contract_for(name)

    if header is None:
        raise SchemaError(f"{path}: no header row")
    if header != expected:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        if missing:
            raise SchemaError(f"{path}: missing column '{missing[0]}'")
        if extra:
            raise SchemaError(f"{path}: unexpected column '{extra[0]}'")
        raise SchemaError(f"{path}: columns {header} out of order, expected {expected}")
    for i, row in enumerate(rows):
        if len(row) != len(expected):
            raise SchemaError(f"{path}: data row {i} has {len(row)} cells, expected {len(expected)}")

    if "config" in meta:
        try:
            meta["config"] = json.loads(meta["config"])
        except json.JSONDecodeError:
            pass

    data = {c: _typed([row[j] for row in rows]) for j, c in enumerate(expected)}
    return Table(path=path, name=name, meta=meta, columns=expected, data=data)
