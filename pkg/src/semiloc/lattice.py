"""Site bookkeeping for chains and simple-cubic lattices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class LatticeSpec:
    """Hypercubic lattice, dimension 1 or 3, row-major site indexing."""

    lengths: Tuple[int, ...]
    boundary: str = "periodic"

    def __post_init__(self):
        if len(self.lengths) not in (1, 3):
            raise ValueError(f"dimension must be 1 or 3, got {len(self.lengths)}")
        if any(int(b) != b or b < 2 for b in self.lengths):
            raise ValueError(f"edge lengths must be integers >= 2, got {self.lengths}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        object.__setattr__(self, "lengths", tuple(int(b) for b in self.lengths))

    @property
    def dimension(self) -> int:
        return len(self.lengths)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.lengths))


def chain(n_sites: int, boundary: str = "periodic") -> LatticeSpec:
    return LatticeSpec((n_sites,), boundary)


def cube(edge: int, boundary: str = "periodic") -> LatticeSpec:
    return LatticeSpec((edge, edge, edge), boundary)


def site_coords(lattice: LatticeSpec, site) -> np.ndarray:
    """Row-major coordinates; vectorized over site indices."""
    return np.stack(np.unravel_index(np.asarray(site), lattice.lengths), axis=-1)


def coords_site(lattice: LatticeSpec, coords) -> np.ndarray:
    return np.ravel_multi_index(tuple(np.asarray(coords).T), lattice.lengths)


def neighbors(lattice: LatticeSpec, site: int) -> np.ndarray:
    """Nearest-neighbor site indices, deduplicated, ascending."""
    if not 0 <= site < lattice.n_sites:
        raise ValueError(f"site {site} outside 0..{lattice.n_sites - 1}")
    c = site_coords(lattice, site)
    out = []
    for axis, length in enumerate(lattice.lengths):
        for step in (-1, 1):
            nc = c.copy()
            nc[axis] += step
            if lattice.boundary == "periodic":
                nc[axis] %= length
            elif not 0 <= nc[axis] < length:
                continue
            out.append(int(coords_site(lattice, nc[None, :])[0]))
    return np.unique(out)


def neighbor_pairs(lattice: LatticeSpec) -> np.ndarray:
    """All undirected bonds as an (n_bonds, 2) array with pair[0] < pair[1]."""
    idx = np.arange(lattice.n_sites).reshape(lattice.lengths)
    pairs = []
    for axis in range(lattice.dimension):
        rolled = np.roll(idx, -1, axis=axis)
        a, b = idx.ravel(), rolled.ravel()
        if lattice.boundary == "open" or lattice.lengths[axis] == 2:
            # drop wrap-around bonds; for length 2 the wrap duplicates the bond
            keep = site_coords(lattice, a)[:, axis] != lattice.lengths[axis] - 1
            a, b = a[keep], b[keep]
        pairs.append(np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1))
    out = np.unique(np.concatenate(pairs, axis=0), axis=0)
    return out


def squared_displacement(lattice: LatticeSpec, site_i: int, site_j: int) -> int:
    """Sum of per-axis squared separations (minimal image when periodic)."""
    ci = site_coords(lattice, site_i)
    cj = site_coords(lattice, site_j)
    d = np.abs(ci - cj)
    if lattice.boundary == "periodic":
        d = np.minimum(d, np.asarray(lattice.lengths) - d)
    return int(np.sum(d * d))


def squared_displacements_from(lattice: LatticeSpec, origin: int) -> np.ndarray:
    """squared_displacement(origin, j) for every site j."""
    co = site_coords(lattice, origin)
    cj = site_coords(lattice, np.arange(lattice.n_sites))
    d = np.abs(cj - co)
    if lattice.boundary == "periodic":
        d = np.minimum(d, np.asarray(lattice.lengths) - d)
    return np.sum(d * d, axis=-1).astype(np.int64)


def distances_from(lattice: LatticeSpec, origin: int) -> np.ndarray:
    """Euclidean site distances from origin (integers on a chain)."""
    return np.sqrt(squared_displacements_from(lattice, origin))
