"""Disorder-ensemble orchestration and statistics.

A task is a callable (seed, index) -> {observable: scalar or array}; every
realization derives its randomness from the pair, so results do not depend
on scheduling. Aggregation always folds in realization-index order, which
keeps aggregates bit-identical across worker counts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .localization import energy_bin_means

_GEO_FLOOR = 1e-300  # below this, log-averaging would poison the mean


@dataclass(frozen=True)
class EnsembleStats:
    """Elementwise sample statistics over realizations.

    geo_mean is NaN wherever any sample was negative or every sample fell
    below the floor; geo_excluded counts floored samples per element. Fields
    are scalars for scalar observables, arrays otherwise.
    """

    mean: np.ndarray
    sem: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray
    geo_mean: np.ndarray
    geo_excluded: np.ndarray
    count: int


@dataclass(frozen=True)
class EnsembleFailure:
    index: int
    seed: int
    error: str


@dataclass(frozen=True)
class EnsembleResult:
    stats: dict
    records: tuple
    failures: tuple
    seed: int
    realizations: int


def _geo_stats(samples):
    n = samples.shape[0]
    negative = np.any(samples < 0.0, axis=0)
    mask = samples >= _GEO_FLOOR
    excluded = n - mask.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(mask, np.log(np.where(mask, samples, 1.0)), 0.0)
        kept = mask.sum(axis=0)
        geo = np.exp(logs.sum(axis=0) / np.where(kept > 0, kept, 1))
    geo = np.where((kept > 0) & ~negative, geo, np.nan)
    return geo, excluded


def aggregate(samples_by_name: Mapping[str, list]) -> dict:
    """Fold per-realization samples (already in index order) into stats."""
    out = {}
    for name, values in samples_by_name.items():
        samples = np.asarray(values, dtype=np.float64)
        n = samples.shape[0]
        if n == 0:
            raise ValueError(f"no successful samples for {name!r}")
        mean = samples.mean(axis=0)
        if n > 1:
            sem = samples.std(axis=0, ddof=1) / np.sqrt(n)
        else:
            sem = np.zeros_like(mean)
        geo, excluded = _geo_stats(samples)
        out[name] = EnsembleStats(
            mean=mean,
            sem=sem,
            minimum=samples.min(axis=0),
            maximum=samples.max(axis=0),
            geo_mean=geo,
            geo_excluded=excluded,
            count=n,
        )
    return out


def run_ensemble(
    task: Callable[[int, int], Mapping],
    realizations: int,
    seed: int,
    workers: int = 1,
) -> EnsembleResult:
    """Run task(seed, index) for index in 0..realizations-1 and aggregate.

    A realization that raises is recorded with its index and the ensemble
    continues; aggregation covers the successes only, in index order.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")

    def attempt(index):
        try:
            return index, dict(task(seed, index)), None
        except Exception as exc:  # noqa: BLE001 - failures are data here
            return index, None, f"{type(exc).__name__}: {exc}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(attempt, range(realizations)))
    else:
        outcomes = [attempt(k) for k in range(realizations)]
    outcomes.sort(key=lambda item: item[0])

    records = []
    failures = []
    for index, payload, error in outcomes:
        if error is None:
            records.append((index, payload))
        else:
            failures.append(EnsembleFailure(index=index, seed=seed, error=error))
    if not records:
        raise RuntimeError(
            f"all {realizations} realizations failed; first: {failures[0].error}"
        )

    names = records[0][1].keys()
    samples_by_name = {
        name: [payload[name] for _, payload in records] for name in names
    }
    return EnsembleResult(
        stats=aggregate(samples_by_name),
        records=tuple(records),
        failures=tuple(failures),
        seed=seed,
        realizations=realizations,
    )


def bin_by_energy(
    records: Iterable[tuple[np.ndarray, np.ndarray]], bin_width: float = 0.02
):
    """Per-realization energy binning, then the cross-realization average.

    records yields (renormalized energies, per-state values) pairs. Returns
    (bin centers, mean of per-realization bin means, contributing counts)
    restricted to bins that are nonempty in at least one realization.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    per_real = []
    centers = None
    for eps, values in records:
        centers, means, counts = energy_bin_means(eps, values, width=bin_width)
        per_real.append(np.where(counts > 0, means, np.nan))
    if centers is None:
        raise ValueError("no records supplied")
    stacked = np.asarray(per_real)
    contributing = np.sum(~np.isnan(stacked), axis=0)
    keep = contributing > 0
    with np.errstate(invalid="ignore"):
        bin_means = np.nanmean(stacked[:, keep], axis=0)
    return centers[keep], bin_means, contributing[keep]
