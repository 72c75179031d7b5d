"""Experiment configuration and the preset catalog.

Every preset resolves to a fully explicit ExperimentConfig at parse time;
nothing is defaulted later, and the resolved config is echoed into every
output header so a run can be reproduced from its own metadata.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

SCHEMA_VERSION = "1"

KINDS = (
    "profile",
    "return_probability",
    "ipr_map",
    "ipr_scaling",
    "spacings",
    "deviation",
    "current",
    "msd",
    "fgr",
    "tail",
)

SCALES = ("desk", "paper")


class ConfigError(ValueError):
    """Invalid configuration; `field` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    kind: str
    scale: str = "desk"
    seed: int = 20260815
    threads: int = 1
    realizations: int = 10
    raw_records: bool = False
    J: float = 1.0
    delta: float = 0.0
    gamma: float = 0.05
    lattice: str = "chain"
    boundary: str = "open"
    sizes: tuple = (100,)  # chain lengths, or cube edges for lattice="cube"
    control_sizes: tuple = ()  # extra g_c = 0 sweep (current runner only)
    W_values: tuple = (25.0,)
    g_c_values: tuple = (1.0,)
    regimes: tuple = ()  # (W, eps_lo, eps_hi) triples
    eps_windows: tuple = ()  # (eps_lo, eps_hi) pairs, crossed with W_values
    bin_width: float = 0.02
    t_max: float = 400.0
    n_times: int = 401
    window: tuple = (1000.0, 2000.0)
    method: str = "spectral"
    schema: str = SCHEMA_VERSION


_REGIMES_2C = ((5.0, 0.45, 0.55), (175.0, 0.45, 0.55), (175.0, 0.85, 0.95))

# base settings, then per-scale overrides; sizes are cube edges where
# lattice="cube" and chain lengths otherwise
_CATALOG = {
    "fig1c": dict(
        base=dict(
            kind="profile",
            lattice="chain",
            boundary="open",
            W_values=(25.0,),
            g_c_values=(0.0, 1.0, 2.0),
            sizes=(100,),
        ),
        desk=dict(realizations=300),
        paper=dict(realizations=2000),
    ),
    "fig2a": dict(
        base=dict(
            kind="return_probability",
            lattice="cube",
            boundary="periodic",
            g_c_values=(0.0, 30.0, 50.0),
        ),
        desk=dict(
            sizes=(9,),
            W_values=(2.0, 5.0, 10.0, 16.5, 25.0, 40.0, 60.0, 80.0, 100.0),
            realizations=10,
        ),
        paper=dict(
            sizes=(15,),
            W_values=(
                2.0, 3.5, 5.0, 7.0, 10.0, 13.0, 16.5, 20.0, 25.0, 32.0,
                40.0, 50.0, 60.0, 80.0, 100.0, 120.0, 150.0,
            ),
            realizations=50,
        ),
    ),
    "fig2bc": dict(
        base=dict(
            kind="ipr_map",
            lattice="cube",
            boundary="periodic",
            g_c_values=(0.0, 30.0),
            bin_width=0.02,
        ),
        desk=dict(
            sizes=(9,),
            W_values=(2.0, 5.0, 10.0, 16.5, 25.0, 40.0, 80.0, 175.0, 300.0),
            realizations=5,
        ),
        paper=dict(
            sizes=(15,),
            W_values=(
                2.0, 3.5, 5.0, 7.0, 10.0, 14.0, 16.5, 20.0, 25.0, 35.0,
                50.0, 70.0, 100.0, 140.0, 175.0, 250.0, 300.0,
            ),
            realizations=100,
        ),
    ),
    "fig2d": dict(
        base=dict(
            kind="ipr_scaling",
            lattice="cube",
            boundary="periodic",
            g_c_values=(30.0,),
            regimes=_REGIMES_2C,
        ),
        desk=dict(sizes=(6, 8, 10), realizations=10),
        paper=dict(sizes=(8, 10, 12, 14), realizations=100),
    ),
    "fig3a": dict(
        base=dict(
            kind="spacings",
            lattice="cube",
            boundary="periodic",
            g_c_values=(30.0,),
            regimes=_REGIMES_2C,
        ),
        desk=dict(sizes=(9,), realizations=20),
        paper=dict(sizes=(15,), realizations=100),
    ),
    "fig3b": dict(
        base=dict(
            kind="deviation",
            lattice="cube",
            boundary="periodic",
            g_c_values=(30.0,),
            eps_windows=((0.45, 0.55), (0.85, 0.95)),
        ),
        desk=dict(
            sizes=(7,),
            W_values=(10.0, 20.0, 30.0, 45.0, 60.0, 90.0, 120.0, 175.0, 250.0, 350.0),
            realizations=10,
        ),
        paper=dict(
            sizes=(15,),
            W_values=(
                10.0, 15.0, 20.0, 30.0, 45.0, 60.0, 90.0, 120.0,
                175.0, 250.0, 350.0, 500.0,
            ),
            realizations=100,
        ),
    ),
    "fig4a": dict(
        base=dict(
            kind="current",
            lattice="chain",
            boundary="open",
            g_c_values=(30.0,),
            W_values=(10.0,),
            gamma=0.05,
            t_max=2000.0,
            n_times=2001,
            window=(1000.0, 2000.0),
            control_sizes=(4, 6, 8, 10, 12),
        ),
        desk=dict(sizes=(10, 20, 40, 80), realizations=20),
        paper=dict(sizes=(10, 20, 40, 80, 160, 320, 640, 1280), realizations=100),
    ),
    "fig4b": dict(
        base=dict(
            kind="msd",
            lattice="chain",
            boundary="open",
            g_c_values=(0.0, 50.0),
            W_values=(30.0,),
        ),
        desk=dict(sizes=(100,), t_max=150.0, n_times=151, realizations=30),
        paper=dict(sizes=(400,), t_max=400.0, n_times=401, realizations=200),
    ),
    "appendixD": dict(
        base=dict(
            kind="return_probability",
            lattice="chain",
            boundary="periodic",
            g_c_values=(0.0, 50.0),
            W_values=(2.0, 5.0, 10.0, 16.5, 25.0, 40.0, 60.0, 80.0, 100.0, 150.0),
        ),
        desk=dict(sizes=(200, 400), realizations=10),
        paper=dict(sizes=(500, 1000, 2000), realizations=30),
    ),
    "fgr-check": dict(
        base=dict(
            kind="fgr",
            lattice="chain",
            boundary="open",
            J=0.0,
            # escape must stay perturbative (Gamma * t << 1) or the golden
            # rule overestimates badly; the window sits in 1/W << t << N/W
            # and spans several site-photon detuning periods
            g_c_values=(1.0,),
            W_values=(10.0,),
            window=(2.0, 20.0),
            sizes=(2000,),
        ),
        desk=dict(realizations=5),
        paper=dict(realizations=20),
    ),
    "tail-check": dict(
        base=dict(
            kind="tail",
            lattice="chain",
            boundary="open",
            J=0.0,
            g_c_values=(1.0, 2.0),
            W_values=(25.0,),
            realizations=1,
        ),
        desk=dict(sizes=(200,)),
        paper=dict(sizes=(1000,), W_values=(25.0, 40.0)),
    ),
}

PRESET_NAMES = tuple(_CATALOG)


def default_threads() -> int:
    return os.cpu_count() or 1


def resolve_preset(name: str, scale: str = "desk", **overrides) -> ExperimentConfig:
    """Build the fully explicit config for a preset at the given scale."""
    if name not in _CATALOG:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if scale not in SCALES:
        raise ConfigError("scale", f"must be one of {SCALES}")
    entry = _CATALOG[name]
    fields = dict(entry["base"])
    fields.update(entry[scale])
    fields.update(preset=name, scale=scale, threads=default_threads())
    fields.update({k: v for k, v in overrides.items() if v is not None})
    config = ExperimentConfig(**fields)
    validate(config)
    return config


def _tuplify(value):
    if isinstance(value, (list, tuple)):
        return tuple(_tuplify(v) for v in value)
    return value


def config_from_dict(data: dict, **overrides) -> ExperimentConfig:
    """Rebuild a config from a parsed JSON dict (a metadata file also works)."""
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "not a config field")
    fields = {k: _tuplify(v) for k, v in data.items()}
    fields.update({k: v for k, v in overrides.items() if v is not None})
    try:
        config = ExperimentConfig(**fields)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from exc
    validate(config)
    return config


def config_to_dict(config: ExperimentConfig) -> dict:
    return dataclasses.asdict(config)


def _require(condition: bool, field: str, message: str):
    if not condition:
        raise ConfigError(field, message)


def validate(config: ExperimentConfig):
    _require(config.kind in KINDS, "kind", f"must be one of {KINDS}")
    _require(config.scale in SCALES, "scale", f"must be one of {SCALES}")
    _require(config.lattice in ("chain", "cube"), "lattice", "must be chain or cube")
    _require(
        config.boundary in ("open", "periodic"), "boundary", "must be open or periodic"
    )
    _require(config.realizations >= 1, "realizations", "need at least 1")
    _require(config.threads >= 1, "threads", "need at least 1")
    _require(len(config.sizes) > 0, "sizes", "need at least one size")
    min_size = 2 if config.lattice == "cube" else 3
    for n in config.sizes + config.control_sizes:
        _require(
            int(n) == n and n >= min_size, "sizes", f"size {n} is too small"
        )
    _require(len(config.W_values) > 0, "W_values", "need at least one value")
    for W in config.W_values:
        _require(W >= 0, "W_values", "disorder width must be nonnegative")
    _require(len(config.g_c_values) > 0, "g_c_values", "need at least one value")
    for g in config.g_c_values:
        _require(g >= 0, "g_c_values", "coupling must be nonnegative")
    _require(config.J >= 0, "J", "hopping must be nonnegative")
    _require(config.gamma >= 0, "gamma", "rate must be nonnegative")
    _require(config.bin_width > 0, "bin_width", "must be positive")
    _require(config.n_times >= 2, "n_times", "need at least two grid points")
    _require(config.t_max > 0, "t_max", "must be positive")
    for W, lo, hi in config.regimes:
        _require(W > 0, "regimes", "disorder width must be positive")
        _require(0.0 <= lo < hi <= 1.0, "regimes", f"bad window ({lo}, {hi})")
    for lo, hi in config.eps_windows:
        _require(0.0 <= lo < hi <= 1.0, "eps_windows", f"bad window ({lo}, {hi})")
    t1, t2 = config.window
    _require(0.0 <= t1 <= t2, "window", "need 0 <= t1 <= t2")
    if config.kind == "current":
        _require(t2 <= config.t_max, "window", "window ends beyond t_max")
        _require(config.method in ("rk4", "adaptive", "spectral"), "method", "unknown integrator")
        _require(config.lattice == "chain", "lattice", "current runs on a chain")
    if config.kind in ("ipr_scaling", "spacings"):
        _require(len(config.regimes) > 0, "regimes", "kind needs (W, lo, hi) triples")
    if config.kind == "deviation":
        _require(len(config.eps_windows) > 0, "eps_windows", "kind needs windows")
    if config.kind == "tail":
        for g in config.g_c_values:
            _require(g > 0, "g_c_values", "closed-form tail needs g_c > 0")
    if config.kind == "fgr":
        _require(config.J == 0, "J", "escape-rate check requires J = 0")
        _require(len(config.g_c_values) == 1, "g_c_values", "one coupling at a time")
        _require(len(config.W_values) == 1, "W_values", "one disorder width at a time")
        _require(
            config.window[0] < config.window[1], "window", "fit window is empty"
        )
