"""Shared matplotlib setup.  Import this before pyplot anywhere in figkit."""

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "figure.figsize": (4.4, 3.3),
    "figure.dpi": 110,
    "savefig.dpi": 200,
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.3,
    "lines.markersize": 4.5,
    "errorbar.capsize": 2.0,
    "legend.frameon": False,
    "legend.fontsize": 8,
    "svg.hashsalt": "figkit",
}


def new_figure():
    plt.rcParams.update(RC)
    return plt.subplots()


def save(fig, path):
    # SVG embeds the wall clock unless told otherwise; strip it so a
    # rerun writes identical bytes
    metadata = {"Date": None} if path.suffix == ".svg" else None
    fig.savefig(path, bbox_inches="tight", metadata=metadata)
    plt.close(fig)
