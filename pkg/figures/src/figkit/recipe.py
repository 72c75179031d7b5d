"""Figure recipes and the render entry point."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import style
from .panels import PAINTERS
from .schema import read_table


@dataclass(frozen=True)
class FigureRecipe:
    """What a panel needs: input tables, axis scales, overlays to draw."""

    figure_id: str
    inputs: tuple
    xscale: str = "linear"
    yscale: str = "linear"
    overlays: tuple = ()


def render(recipe: FigureRecipe, out_dir, fmt: str = "png") -> Path:
    """Render one panel; returns the written image path.

    Inputs are read-only and validated before anything is drawn, so a bad
    table never leaves a half-written image behind.
    """
    tables = [read_table(p) for p in recipe.inputs]
    fig, ax = style.new_figure()
    PAINTERS[recipe.figure_id](recipe, tables, fig, ax)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / f"{recipe.figure_id}.{fmt}"
    style.save(fig, out)
    return out
