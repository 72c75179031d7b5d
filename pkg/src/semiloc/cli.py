"""Command-line runner: resolve a preset (or explicit config) into CSV tables.

Every run emits one CSV per table with `#` metadata comments plus a JSON
metadata sidecar carrying the resolved config, seed, code version and wall
time.  Rerunning from that sidecar reproduces the CSVs bit for bit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import evolve
from .ensemble import EnsembleFailure, bin_by_energy, run_ensemble
from .lattice import chain, cube
from .levelstats import best_reference, harvest_spacings, spacing_histogram
from .levelstats import dark_state_deviation
from .localization import (
    infinite_time_pi,
    ipr_all,
    most_localized_state,
    profile_from_amplitudes,
    renormalize_energy,
)
from .model import ModelParams, build_hamiltonian, sample_disorder
from .perturbation import fermi_golden_rate, finite_part_tail_check, mean_tail
from .presets import (
    PRESET_NAMES,
    SCALES,
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    resolve_preset,
)
from .spectral import dark_state_indices, diagonalize_arrowhead, diagonalize_dense
from .transport import averaged_current, evolve_open

OUTDIR_ENV = "SEMILOC_OUTDIR"


@dataclass
class Table:
    name: str
    columns: tuple
    rows: list


def _make_lattice(config: ExperimentConfig, size: int):
    if config.lattice == "cube":
        return cube(size, config.boundary)
    return chain(size, config.boundary)


def _params(config: ExperimentConfig, n_sites: int, W: float, g_c: float) -> ModelParams:
    return ModelParams(n_sites=n_sites, W=W, J=config.J, g_c=g_c, delta=config.delta)


def _decompose(lat, params: ModelParams, disorder):
    if params.J == 0:
        return diagonalize_arrowhead(disorder, params)
    return diagonalize_dense(build_hamiltonian(lat, params, disorder))


def _tag_failures(failures, label: str):
    return [
        EnsembleFailure(f.index, f.seed, f"{label}: {f.error}") for f in failures
    ]


def _sequential(task, realizations: int, seed: int, label: str, failures: list):
    """Index-ordered realization loop that records failures and keeps going."""
    outs = []
    for k in range(realizations):
        try:
            outs.append(task(seed, k))
        except Exception as exc:  # noqa: BLE001 - failures are data here
            failures.append(
                EnsembleFailure(k, seed, f"{label}: {type(exc).__name__}: {exc}")
            )
    if not outs:
        raise RuntimeError(
            f"all realizations failed for {label} (seed {seed}): {failures[-1].error}"
        )
    return outs


# ---------------------------------------------------------------- runners


def _run_profile(config: ExperimentConfig):
    size = config.sizes[0]
    W = config.W_values[0]
    lat = _make_lattice(config, size)
    origin = lat.n_sites // 2
    tables, records, failures = [], [], []
    for g_c in config.g_c_values:
        params = _params(config, lat.n_sites, W, g_c)

        def one(seed, index):
            disorder = sample_disorder(params, seed=seed, index=index)
            decomp = _decompose(lat, params, disorder)
            return decomp.amplitudes[most_localized_state(decomp, origin)] ** 2

        amp2 = _sequential(one, config.realizations, config.seed, f"g_c={g_c:g}", failures)
        dist, profile = profile_from_amplitudes(amp2, lat, origin)
        tail = mean_tail(g_c, W, lat.n_sites).value
        keep = profile > 0
        rows = [
            (float(d), float(np.log10(p)), tail)
            for d, p in zip(dist[keep], profile[keep])
        ]
        tables.append(
            Table(f"{config.preset}_gc{g_c:g}", ("distance", "log_mean_amp2", "analytic_tail"), rows)
        )
        if config.raw_records:
            records += [
                {"g_c": g_c, "index": k, "amp2": a2.tolist()}
                for k, a2 in enumerate(amp2)
            ]
    return tables, records, failures, {}


def _run_return_probability(config: ExperimentConfig):
    with_sizes = len(config.sizes) > 1
    columns = ("W_over_J", "g_c_over_J", "pi_mean", "pi_sem", "realizations")
    if with_sizes:
        columns = ("n_sites",) + columns
    rows, records, failures = [], [], []
    for size in config.sizes:
        lat = _make_lattice(config, size)
        center = lat.n_sites // 2
        for W in config.W_values:
            for g_c in config.g_c_values:
                params = _params(config, lat.n_sites, W, g_c)

                def one(seed, index):
                    disorder = sample_disorder(params, seed=seed, index=index)
                    decomp = _decompose(lat, params, disorder)
                    return {"pi": infinite_time_pi(decomp, center, center)}

                result = run_ensemble(
                    one, config.realizations, config.seed, workers=config.threads
                )
                failures += _tag_failures(
                    result.failures, f"N={lat.n_sites} W={W:g} g_c={g_c:g}"
                )
                stats = result.stats["pi"]
                row = (
                    W / config.J,
                    g_c / config.J,
                    float(stats.mean),
                    float(stats.sem),
                    stats.count,
                )
                rows.append((lat.n_sites,) + row if with_sizes else row)
                if config.raw_records:
                    records += [
                        {"n_sites": lat.n_sites, "W": W, "g_c": g_c, "index": k, "pi": p["pi"]}
                        for k, p in result.records
                    ]
    return [Table(config.preset, columns, rows)], records, failures, {}


def _run_ipr_map(config: ExperimentConfig):
    size = config.sizes[0]
    lat = _make_lattice(config, size)
    rows, records, failures = [], [], []
    for g_c in config.g_c_values:
        for W in config.W_values:
            params = _params(config, lat.n_sites, W, g_c)

            def one(seed, index):
                disorder = sample_disorder(params, seed=seed, index=index)
                decomp = _decompose(lat, params, disorder)
                dark = dark_state_indices(decomp, params)
                eps = renormalize_energy(decomp.energies[dark], W)
                return eps, ipr_all(decomp)[dark]

            recs = _sequential(
                one, config.realizations, config.seed, f"W={W:g} g_c={g_c:g}", failures
            )
            centers, means, contributing = bin_by_energy(recs, config.bin_width)
            rows += [
                (g_c / config.J, W / config.J, float(e), float(m), int(c))
                for e, m, c in zip(centers, means, contributing)
            ]
            if config.raw_records:
                records += [
                    {
                        "g_c": g_c,
                        "W": W,
                        "index": k,
                        "eps": eps.tolist(),
                        "ipr": vals.tolist(),
                    }
                    for k, (eps, vals) in enumerate(recs)
                ]
    columns = ("g_c_over_J", "W_over_J", "eps", "ipr_mean", "contributing")
    return [Table(config.preset, columns, rows)], records, failures, {}


def _group_regimes(regimes):
    grouped = {}
    for W, lo, hi in regimes:
        grouped.setdefault(W, []).append((lo, hi))
    return grouped


def _run_ipr_scaling(config: ExperimentConfig):
    rows, records, failures = [], [], []
    for size in config.sizes:
        lat = _make_lattice(config, size)
        for W, windows in _group_regimes(config.regimes).items():
            params = _params(config, lat.n_sites, W, config.g_c_values[0])

            def one(seed, index):
                disorder = sample_disorder(params, seed=seed, index=index)
                decomp = _decompose(lat, params, disorder)
                dark = dark_state_indices(decomp, params)
                eps = renormalize_energy(decomp.energies[dark], W)
                vals = ipr_all(decomp)[dark]
                out = {}
                for w, (lo, hi) in enumerate(windows):
                    sel = (eps >= lo) & (eps < hi)
                    if not np.any(sel):
                        raise RuntimeError(f"no dark states in window ({lo}, {hi})")
                    out[f"ipr_{w}"] = float(vals[sel].mean())
                return out

            result = run_ensemble(
                one, config.realizations, config.seed, workers=config.threads
            )
            failures += _tag_failures(result.failures, f"N={lat.n_sites} W={W:g}")
            for w, (lo, hi) in enumerate(windows):
                stats = result.stats[f"ipr_{w}"]
                rows.append(
                    (
                        lat.n_sites,
                        W / config.J,
                        lo,
                        hi,
                        float(stats.mean),
                        float(stats.sem),
                        stats.count,
                    )
                )
            if config.raw_records:
                records += [
                    {"n_sites": lat.n_sites, "W": W, "index": k, **p}
                    for k, p in result.records
                ]
    columns = ("n_sites", "W_over_J", "eps_lo", "eps_hi", "ipr_mean", "ipr_sem", "realizations")
    return [Table(config.preset, columns, rows)], records, failures, {}


def _run_spacings(config: ExperimentConfig):
    size = config.sizes[0]
    lat = _make_lattice(config, size)
    g_c = config.g_c_values[0]
    rows, failures = [], []
    summary = {}
    for W, windows in _group_regimes(config.regimes).items():
        params = _params(config, lat.n_sites, W, g_c)

        def one(seed, index):
            disorder = sample_disorder(params, seed=seed, index=index)
            return _decompose(lat, params, disorder)

        decomps = _sequential(one, config.realizations, config.seed, f"W={W:g}", failures)
        for lo, hi in windows:
            sample = harvest_spacings(decomps, params, window=(lo, hi))
            centers, density = spacing_histogram(sample)
            best = best_reference(sample)
            summary[f"W={W:g} eps=({lo:g},{hi:g})"] = best
            rows += [
                (
                    W / config.J,
                    lo,
                    hi,
                    float(s),
                    float(p),
                    int(sample.spacings.size),
                    best,
                )
                for s, p in zip(centers, density)
            ]
    columns = ("W_over_J", "eps_lo", "eps_hi", "s", "pdf", "n_spacings", "best_fit")
    return [Table(config.preset, columns, rows)], [], failures, summary


def _run_deviation(config: ExperimentConfig):
    size = config.sizes[0]
    lat = _make_lattice(config, size)
    g_c = config.g_c_values[0]
    rows, records, failures = [], [], []
    for W in config.W_values:
        params = _params(config, lat.n_sites, W, g_c)

        def one(seed, index):
            disorder = sample_disorder(params, seed=seed, index=index)
            decomp = _decompose(lat, params, disorder)
            kept, deltas = dark_state_deviation(decomp, disorder, params)
            eps = renormalize_energy(decomp.energies[kept], W)
            out = {}
            for w, (lo, hi) in enumerate(config.eps_windows):
                sel = (eps >= lo) & (eps < hi)
                if not np.any(sel):
                    raise RuntimeError(f"no dark states in window ({lo}, {hi})")
                out[f"dev_{w}"] = float(np.abs(deltas[sel]).mean())
            return out

        result = run_ensemble(one, config.realizations, config.seed, workers=config.threads)
        failures += _tag_failures(result.failures, f"W={W:g}")
        for w, (lo, hi) in enumerate(config.eps_windows):
            stats = result.stats[f"dev_{w}"]
            rows.append(
                (W / config.J, lo, hi, float(stats.mean), float(stats.sem), stats.count)
            )
        if config.raw_records:
            records += [{"W": W, "index": k, **p} for k, p in result.records]
    columns = ("W_over_J", "eps_lo", "eps_hi", "mean_abs_dev", "sem", "realizations")
    return [Table(config.preset, columns, rows)], records, failures, {}


def _current_rows(config: ExperimentConfig, sizes, g_c, failures, records, label):
    t_grid = np.linspace(0.0, config.t_max, config.n_times)
    t1, t2 = config.window
    W = config.W_values[0]
    rows = []
    for size in sizes:
        lat = _make_lattice(config, size)
        params = _params(config, lat.n_sites, W, g_c)

        def one(seed, index):
            disorder = sample_disorder(params, seed=seed, index=index)
            H = build_hamiltonian(lat, params, disorder)
            current, _ = evolve_open(H, config.gamma, t_grid, method=config.method)
            return {"I": averaged_current(t_grid, current, (t1, t2))}

        result = run_ensemble(one, config.realizations, config.seed, workers=config.threads)
        failures += _tag_failures(result.failures, f"{label} N={size}")
        stats = result.stats["I"]
        rows.append(
            (
                size,
                float(stats.mean),
                float(stats.minimum),
                float(stats.maximum),
                t1,
                t2,
            )
        )
        if config.raw_records:
            records += [
                {"table": label, "N": size, "g_c": g_c, "index": k, "I": p["I"]}
                for k, p in result.records
            ]
    return rows


def _run_current(config: ExperimentConfig):
    columns = ("N", "I_mean", "I_min", "I_max", "window_t1", "window_t2")
    records, failures = [], []
    tables = [
        Table(
            config.preset,
            columns,
            _current_rows(
                config, config.sizes, config.g_c_values[0], failures, records, "main"
            ),
        )
    ]
    if config.control_sizes:
        # decoupled-cavity control sweep, same schema
        tables.append(
            Table(
                f"{config.preset}_control",
                columns,
                _current_rows(
                    config, config.control_sizes, 0.0, failures, records, "control"
                ),
            )
        )
    return tables, records, failures, {}


def _run_msd(config: ExperimentConfig):
    size = config.sizes[0]
    lat = _make_lattice(config, size)
    origin = lat.n_sites // 2
    times = np.linspace(0.0, config.t_max, config.n_times)
    W = config.W_values[0]
    rows, records, failures = [], [], []
    for g_c in config.g_c_values:
        params = _params(config, lat.n_sites, W, g_c)

        def one(seed, index):
            disorder = sample_disorder(params, seed=seed, index=index)
            decomp = _decompose(lat, params, disorder)
            return {"msd": evolve(decomp, origin, times, lattice=lat).msd}

        result = run_ensemble(one, config.realizations, config.seed, workers=config.threads)
        failures += _tag_failures(result.failures, f"g_c={g_c:g}")
        stats = result.stats["msd"]
        rows += [
            (
                float(t),
                g_c / config.J,
                lat.n_sites,
                float(m),
                float(s),
                stats.count,
            )
            for t, m, s in zip(times, stats.mean, stats.sem)
        ]
        if config.raw_records:
            records += [
                {"g_c": g_c, "index": k, "msd": p["msd"].tolist()}
                for k, p in result.records
            ]
    columns = ("t", "g_c_over_J", "n_sites", "msd_mean", "msd_sem", "realizations")
    return [Table(config.preset, columns, rows)], records, failures, {}


def _run_fgr(config: ExperimentConfig):
    size = config.sizes[0]
    W = config.W_values[0]
    g_c = config.g_c_values[0]
    params = _params(config, size, W, g_c)
    t1, t2 = config.window
    times = np.linspace(t1, t2, 31)
    failures = []

    def one(seed, index):
        disorder = sample_disorder(params, seed=seed, index=index)
        decomp = diagonalize_arrowhead(disorder, params)
        weights = decomp.vectors * decomp.vectors
        phase = np.outer(times, decomp.energies)
        diag_re = np.cos(phase) @ weights.T
        diag_im = np.sin(phase) @ weights.T
        escape = 1.0 - (diag_re**2 + diag_im**2)[:, :size]
        tc = times - times.mean()
        slopes = tc @ (escape - escape.mean(axis=0)) / (tc @ tc)
        return disorder.w, slopes

    outs = _sequential(one, config.realizations, config.seed, "escape", failures)
    w_all, fit_all, fgr_all, valid_all = [], [], [], []
    for w, slopes in outs:
        for wi, slope in zip(w, slopes):
            pred = fermi_golden_rate(wi, config.delta, g_c, W, size)
            w_all.append(wi)
            fit_all.append(slope)
            fgr_all.append(pred.value)
            valid_all.append(pred.in_validity)
    w_all = np.asarray(w_all)
    fit_all = np.asarray(fit_all)
    fgr_all = np.asarray(fgr_all)
    ok = np.asarray(valid_all) & (fgr_all > 0)
    rel = np.abs(fit_all[ok] - fgr_all[ok]) / fgr_all[ok]
    # the headline number uses mid-band sites only: near resonance the rate
    # diverges and near the band edge the final-state density is truncated
    detune = np.abs(w_all[ok] + config.delta)
    mid = (detune >= 0.2 * W) & (detune <= 0.35 * W)
    edges = np.linspace(-0.5 * W, 0.5 * W, 21)
    idx = np.clip(np.digitize(w_all[ok], edges) - 1, 0, 19)
    rows = []
    for b in range(20):
        sel = idx == b
        if not np.any(sel):
            continue
        rows.append(
            (
                float(0.5 * (edges[b] + edges[b + 1])),
                float(fgr_all[ok][sel].mean()),
                float(fit_all[ok][sel].mean()),
                float(np.median(rel[sel])),
                int(sel.sum()),
            )
        )
    summary = {
        "median_rel_err_midband": float(np.median(rel[mid])),
        "midband_sites": int(mid.sum()),
        "valid_sites": int(ok.sum()),
        "total_sites": int(w_all.size),
    }
    columns = ("w_center", "rate_fgr", "rate_fit", "rel_err_median", "sites")
    return [Table(config.preset, columns, rows)], [], failures, summary


def _run_tail(config: ExperimentConfig):
    rows = []
    worst = 0.0
    for g_c in config.g_c_values:
        for W in config.W_values:
            for size in config.sizes:
                closed = mean_tail(g_c, W, size).value
                fp = finite_part_tail_check(g_c, W, size, delta=config.delta)
                rel = abs(fp - closed) / closed
                worst = max(worst, rel)
                rows.append((g_c, W, size, fp, closed, float(rel)))
    columns = ("g_c", "W", "n_sites", "fp_numeric", "fp_closed", "rel_err")
    return [Table(config.preset, columns, rows)], [], [], {"worst_rel_err": worst}


_RUNNERS = {
    "profile": _run_profile,
    "return_probability": _run_return_probability,
    "ipr_map": _run_ipr_map,
    "ipr_scaling": _run_ipr_scaling,
    "spacings": _run_spacings,
    "deviation": _run_deviation,
    "current": _run_current,
    "msd": _run_msd,
    "fgr": _run_fgr,
    "tail": _run_tail,
}


# ---------------------------------------------------------------- emission


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, table: Table, config: ExperimentConfig):
    lines = [
        f"# preset: {config.preset}",
        f"# scale: {config.scale}",
        f"# seed: {config.seed}",
        f"# code: semiloc {__version__}",
        f"# schema: {table.name}.v{config.schema}",
        f"# config: {json.dumps(config_to_dict(config), sort_keys=True)}",
        ",".join(table.columns),
    ]
    lines += [",".join(_format_cell(v) for v in row) for row in table.rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(config: ExperimentConfig, out_dir: Path) -> int:
    """Execute one experiment; returns the process exit code."""
    started = time.perf_counter()
    tables, records, failures, summary = _RUNNERS[config.kind](config)
    elapsed = time.perf_counter() - started

    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for table in tables:
        path = out_dir / f"{table.name}.csv"
        _write_csv(path, table, config)
        outputs[path.name] = list(table.columns)
        print(f"wrote {path}")
    if config.raw_records:
        rec_path = out_dir / f"{config.preset}_records.json"
        rec_path.write_text(json.dumps(records), encoding="utf-8")
        outputs[rec_path.name] = ["raw records"]
        print(f"wrote {rec_path}")

    meta = {
        "preset": config.preset,
        "code_version": __version__,
        "schema_version": config.schema,
        "seed": config.seed,
        "config": config_to_dict(config),
        "outputs": outputs,
        "wall_time_s": round(elapsed, 3),
        "failures": [
            {"index": f.index, "seed": f.seed, "error": f.error} for f in failures
        ],
        "summary": summary,
    }
    meta_path = out_dir / f"{config.preset}_meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")
    print(f"wrote {meta_path}")

    if failures:
        first = failures[0]
        print(
            f"error: realization {first.index} of seed {first.seed} failed: {first.error}"
            f" ({len(failures)} failure(s) total)",
            file=sys.stderr,
        )
        return 1
    return 0


# ---------------------------------------------------------------- arguments


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiloc",
        description="Disordered emitters in a cavity: preset experiment runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a preset or an explicit config file")
    runp.add_argument("--preset", choices=PRESET_NAMES)
    runp.add_argument("--config", type=Path, help="JSON config (or metadata) file")
    runp.add_argument("--scale", choices=SCALES)
    runp.add_argument("--seed", type=int)
    runp.add_argument("--threads", type=int)
    runp.add_argument("--out", type=Path, help=f"output directory (default ${OUTDIR_ENV} or ./out)")
    runp.add_argument("--gc", type=float, help="replace the coupling sweep with one value")
    runp.add_argument("--realizations", type=int)
    runp.add_argument(
        "--raw-records", action="store_true", default=None, help="persist raw records"
    )
    return parser


def _resolve(args) -> ExperimentConfig:
    overrides = dict(
        seed=args.seed,
        threads=args.threads,
        realizations=args.realizations,
        raw_records=args.raw_records,
        g_c_values=(args.gc,) if args.gc is not None else None,
    )
    if (args.preset is None) == (args.config is None):
        raise ConfigError("preset", "give exactly one of --preset or --config")
    if args.preset is not None:
        return resolve_preset(args.preset, args.scale or "desk", **overrides)
    try:
        data = json.loads(args.config.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError("config", f"cannot read {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"not valid JSON: {exc}") from exc
    if args.scale is not None:
        overrides["scale"] = args.scale
    return config_from_dict(data, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out or Path(os.environ.get(OUTDIR_ENV, "out"))
    try:
        return run(config, Path(out_dir))
    except Exception as exc:  # noqa: BLE001 - report and exit nonzero
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
