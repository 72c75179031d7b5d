"""One painter per panel.

Painters draw only what the tables carry plus closed-form overlays.  An
empty table yields labeled empty axes, so a dry pipeline still renders
every file.
"""

from __future__ import annotations

import numpy as np

from .overlays import CRITICAL_DISORDER, REFERENCE_DASHES, REFERENCE_PDFS, power_guide

PAINTERS = {}


def painter(figure_id):
    def bind(fn):
        PAINTERS[figure_id] = fn
        return fn

    return bind


def _series(table, key):
    """(value, row mask) pairs for each distinct value in column key, sorted."""
    vals = table.col(key)
    for v in sorted(set(vals.tolist())):
        yield v, vals == v


def _regimes(table):
    """Distinct (W, eps_lo, eps_hi) triples in row order."""
    keys = []
    for w, lo, hi in zip(table.col("W_over_J"), table.col("eps_lo"), table.col("eps_hi")):
        if (w, lo, hi) not in keys:
            keys.append((w, lo, hi))
    return keys


def _legend(ax, **kw):
    if ax.get_legend_handles_labels()[0]:
        ax.legend(**kw)


def _edges(centers, log=False):
    """Bin edges bracketing the given centers, geometric when log."""
    c = np.asarray(centers, dtype=float)
    if len(c) == 1:
        return np.array([c[0] * 0.9, c[0] / 0.9]) if log else np.array([c[0] - 0.5, c[0] + 0.5])
    x = np.log(c) if log else c
    mids = 0.5 * (x[1:] + x[:-1])
    e = np.concatenate([[2 * x[0] - mids[0]], mids, [2 * x[-1] - mids[-1]]])
    return np.exp(e) if log else e


@painter("fig1c")
def profile_decay(recipe, tables, fig, ax):
    tail_labeled = False
    for t in tables:
        if len(t) == 0:
            continue
        g_c = t.name.split("_gc")[-1]
        d = t.col("distance")
        ax.plot(d, np.exp(t.col("log_mean_amp2")), label=f"$g_c/J={g_c}$")
        tail = t.col("analytic_tail")
        keep = tail > 0
        if keep.any():
            ax.plot(d[keep], tail[keep], "k--", lw=0.9,
                    label=None if tail_labeled else "closed-form tail")
            tail_labeled = True
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel("distance from the initial site")
    ax.set_ylabel("log-averaged site probability")
    _legend(ax)


@painter("fig2a")
def return_probability_sweep(recipe, tables, fig, ax):
    (t,) = tables
    if len(t):
        for g_c, m in _series(t, "g_c_over_J"):
            w = t.col("W_over_J")[m]
            order = np.argsort(w)
            ax.errorbar(w[order], t.col("pi_mean")[m][order],
                        yerr=t.col("pi_sem")[m][order], marker="o",
                        label=f"$g_c/J={g_c:g}$")
    if "critical_disorder" in recipe.overlays:
        ax.axvline(CRITICAL_DISORDER, color="0.4", ls=":", lw=1.0)
        ax.annotate("$W_c$", (CRITICAL_DISORDER, 0.96),
                    xycoords=("data", "axes fraction"), ha="left", fontsize=8)
    ax.set_xscale(recipe.xscale)
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("$W/J$")
    ax.set_ylabel(r"mean return probability $\bar\Pi$")
    _legend(ax)


def _ipr_map(recipe, table, pick, fig, ax):
    ax.set_xscale(recipe.xscale)
    ax.set_xlabel("$W/J$")
    ax.set_ylabel(r"$\epsilon$")
    if len(table) == 0:
        return
    sel = pick(table.col("g_c_over_J"))
    if not sel.any():
        return
    W = table.col("W_over_J")[sel]
    eps = table.col("eps")[sel]
    ipr = table.col("ipr_mean")[sel]
    Ws = np.array(sorted(set(W.tolist())))
    Es = np.array(sorted(set(eps.tolist())))
    grid = np.full((len(Es), len(Ws)), np.nan)
    wi = {w: i for i, w in enumerate(Ws)}
    ei = {e: i for i, e in enumerate(Es)}
    for w, e, v in zip(W, eps, ipr):
        grid[ei[e], wi[w]] = v
    mesh = ax.pcolormesh(_edges(Ws, log=recipe.xscale == "log"), _edges(Es),
                         np.ma.masked_invalid(grid), cmap="viridis",
                         vmin=0.0, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="mean inverse participation ratio")


@painter("fig2b")
def ipr_map_uncoupled(recipe, tables, fig, ax):
    _ipr_map(recipe, tables[0], lambda g: g == 0.0, fig, ax)
    ax.set_title("$g_c = 0$", fontsize=9)


@painter("fig2c")
def ipr_map_coupled(recipe, tables, fig, ax):
    def pick(g):
        coupled = g[g > 0.0]
        return g == coupled.max() if len(coupled) else g < 0  # all-False mask
    _ipr_map(recipe, tables[0], pick, fig, ax)
    t = tables[0]
    if len(t) and (t.col("g_c_over_J") > 0).any():
        g_c = t.col("g_c_over_J")[t.col("g_c_over_J") > 0].max()
        ax.set_title(f"$g_c/J = {g_c:g}$", fontsize=9)


@painter("fig2d")
def ipr_size_scaling(recipe, tables, fig, ax):
    (t,) = tables
    regimes = _regimes(t) if len(t) else []
    for w, lo, hi in regimes:
        m = (t.col("W_over_J") == w) & (t.col("eps_lo") == lo) & (t.col("eps_hi") == hi)
        n = t.col("n_sites")[m]
        order = np.argsort(n)
        ax.errorbar(n[order], t.col("ipr_mean")[m][order],
                    yerr=t.col("ipr_sem")[m][order], marker="o",
                    label=f"$W/J={w:g}$, $\\epsilon\\in[{lo:g},{hi:g})$")
    if "inverse_n" in recipe.overlays and regimes:
        # anchor the guide on the weakest-disorder curve, offset for visibility
        w0 = min(k[0] for k in regimes)
        m = t.col("W_over_J") == w0
        n = t.col("n_sites")[m]
        y0 = t.col("ipr_mean")[m][np.argmin(n)]
        xs = np.array(sorted(n))
        ax.plot(xs, power_guide(xs, xs[0], 1.6 * y0, -1.0), "k--", lw=0.9,
                label=r"$\propto 1/N$")
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel("$N$")
    ax.set_ylabel("mean inverse participation ratio")
    _legend(ax)


@painter("fig3a")
def spacing_histograms(recipe, tables, fig, ax):
    (t,) = tables
    inset = ax.inset_axes((0.52, 0.52, 0.45, 0.44))
    smax = 4.0
    regimes = _regimes(t) if len(t) else []
    for w, lo, hi in regimes:
        m = (t.col("W_over_J") == w) & (t.col("eps_lo") == lo) & (t.col("eps_hi") == hi)
        s = t.col("s")[m]
        p = t.col("pdf")[m]
        tag = str(t.col("best_fit")[m][0]).replace("_", " ")
        line, = ax.plot(s, p, drawstyle="steps-mid",
                        label=f"$W/J={w:g}$, $[{lo:g},{hi:g})$: {tag}")
        inset.plot(s, p, drawstyle="steps-mid", color=line.get_color(), lw=0.9)
        smax = max(smax, float(s.max()))
    if regimes:
        grid = np.linspace(1e-3, smax, 400)
        for name in recipe.overlays:
            pdf = REFERENCE_PDFS[name]
            ax.plot(grid, pdf(grid), REFERENCE_DASHES[name], color="k", lw=0.9,
                    label=name.replace("_", " "))
            inset.plot(grid, pdf(grid), REFERENCE_DASHES[name], color="k", lw=0.8)
        inset.set_yscale("log")
        inset.set_ylim(1e-4, 2.0)
        inset.set_xlim(0.0, smax)
        inset.tick_params(labelsize=6)
    else:
        inset.set_visible(False)
    ax.set_xlim(0.0, 4.0)
    ax.set_ylim(0.0, 1.1)
    ax.set_xlabel("$s$")
    ax.set_ylabel("$P(s)$")
    _legend(ax, loc="upper left", fontsize=6.5)


@painter("fig3b")
def midpoint_deviation_sweep(recipe, tables, fig, ax):
    (t,) = tables
    if len(t):
        windows = sorted(set(zip(t.col("eps_lo").tolist(), t.col("eps_hi").tolist())))
        for lo, hi in windows:
            m = (t.col("eps_lo") == lo) & (t.col("eps_hi") == hi)
            w = t.col("W_over_J")[m]
            order = np.argsort(w)
            ax.errorbar(w[order], t.col("mean_abs_dev")[m][order],
                        yerr=t.col("sem")[m][order], marker="s",
                        label=f"$\\epsilon\\in[{lo:g},{hi:g})$")
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel("$W/J$")
    ax.set_ylabel(r"mean midpoint deviation $\langle|\delta|\rangle/J$")
    _legend(ax)


@painter("fig4a")
def steady_current_scaling(recipe, tables, fig, ax):
    coupled, control = tables

    def draw(t, marker, label, filled):
        if len(t) == 0:
            return None
        n = t.col("N")
        order = np.argsort(n)
        n = n[order]
        y = t.col("I_mean")[order]
        # bars show the realization range, not a standard error
        lo = np.clip(y - t.col("I_min")[order], 0.0, None)
        hi = np.clip(t.col("I_max")[order] - y, 0.0, None)
        ax.errorbar(n, y, yerr=(lo, hi), marker=marker, ls="-",
                    mfc=None if filled else "white", label=label)
        return n, y

    anchor = draw(coupled, "o", "cavity-coupled chain", True)
    draw(control, "s", "uncoupled control", False)
    if anchor is not None and "power_guides" in recipe.overlays:
        n, y = anchor
        xs = np.geomspace(n.min(), n.max(), 32)
        ax.plot(xs, power_guide(xs, n[0], 2.0 * y[0], -1.0), "k--", lw=0.9,
                label=r"$\propto 1/N$")
        ax.plot(xs, power_guide(xs, n[0], 2.0 * y[0], -2.0), "k:", lw=0.9,
                label=r"$\propto 1/N^2$")
    if len(coupled):
        t1 = coupled.col("window_t1")[0]
        t2 = coupled.col("window_t2")[0]
        ax.set_title(f"time average over $tJ \\in [{t1:g}, {t2:g}]$", fontsize=8)
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel("$N$")
    ax.set_ylabel(r"drained current $\bar I$")
    _legend(ax)


@painter("fig4b")
def spread_growth(recipe, tables, fig, ax):
    (t,) = tables
    if len(t):
        for g_c, m in _series(t, "g_c_over_J"):
            ts = t.col("t")[m]
            order = np.argsort(ts)
            n = t.col("n_sites")[m][order]
            y = t.col("msd_mean")[m][order] / n
            err = t.col("msd_sem")[m][order] / n
            line, = ax.plot(ts[order], y, label=f"$g_c/J={g_c:g}$")
            ax.fill_between(ts[order], y - err, y + err, alpha=0.25, lw=0,
                            color=line.get_color())
    ax.set_xlabel("$tJ$")
    ax.set_ylabel(r"$\bar\sigma^2(t)/N$")
    _legend(ax)
