"""Path sampling for the generalized Brownian motion and its linear pairings.

Increments over a grid step are independent Gaussians with mean da and
variance db.  The stochastic pairing of a direction with a path is the
left-point Riemann-Stieltjes sum of the direction's density against the
path increments, which is licensed by the bounded variation of the
densities used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import GridMismatch, InvalidGrid, NotOrthonormal
from .hilbert import CambElement, inner, pair_with_a
from .scale import ScalePair

ORTHO_TOL = 1e-6


@dataclass(frozen=True)
class RngStream:
    """Named, reproducible random stream (counter-based Philox).

    Streams with equal (seed, stream_id) yield identical draws regardless
    of how many other streams exist; batches within a stream are keyed by
    batch index, so partial reductions are order-independent.
    """

    seed: int
    stream_id: int = 0

    def generator(self, batch: int | None = None) -> np.random.Generator:
        key = (self.stream_id,) if batch is None else (self.stream_id, batch)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=key)
        return np.random.Generator(np.random.Philox(seq))

    def child(self, k: int) -> "RngStream":
        return RngStream(seed=self.seed, stream_id=(self.stream_id << 20) ^ (k + 1))


@dataclass(frozen=True)
class GbmpPath:
    """A sampled path on a uniform grid; x[0] = 0 by construction."""

    sp: ScalePair
    t_grid: np.ndarray
    x: np.ndarray


def _grid_and_increment_moments(sp: ScalePair, grid_n: int):
    if grid_n < 1:
        raise InvalidGrid(f"need at least one step, got grid_n = {grid_n}")
    t = np.linspace(0.0, sp.T, grid_n + 1)
    da = np.diff(np.asarray(sp.a(t), dtype=float))
    db = np.diff(np.asarray(sp.b(t), dtype=float))
    if np.any(db <= 0.0):
        raise InvalidGrid("variance increments must be positive on the grid")
    return t, da, db


def sample_increments(sp: ScalePair, grid_n: int, n_paths: int,
                      gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n_paths`` rows of path increments over a uniform grid.

    Returns (t_grid, dx) with dx of shape (n_paths, grid_n).
    """
    sp.require_valid()
    t, da, db = _grid_and_increment_moments(sp, grid_n)
    g = gen.standard_normal((n_paths, grid_n))
    dx = da + np.sqrt(db) * g
    return t, dx


def sample_path(sp: ScalePair, grid_n: int, rng: RngStream) -> GbmpPath:
    """Sample a single path on a uniform grid with ``grid_n`` steps."""
    t, dx = sample_increments(sp, grid_n, 1, rng.generator())
    x = np.empty(grid_n + 1)
    x[0] = 0.0
    np.cumsum(dx[0], out=x[1:])
    return GbmpPath(sp=sp, t_grid=t, x=x)


def pwz(w: CambElement, path: GbmpPath) -> float:
    """Stochastic pairing of a direction with a path.

    Left-point Riemann-Stieltjes sum of the direction's density against
    the path increments.  Gaussian with mean pair_with_a(w) and variance
    ||w||^2 under the path law.
    """
    if w.sp is not path.sp:
        raise GridMismatch("direction and path live over different scale pairs")
    z_left = w.density(path.t_grid[:-1])
    return float(np.dot(z_left, np.diff(path.x)))


def left_densities(ws: Sequence[CambElement], t_grid: np.ndarray) -> np.ndarray:
    """Stack left-point density samples into a (grid_n, n_dirs) matrix."""
    return np.column_stack([w.density(t_grid[:-1]) for w in ws])


def pwz_batch(z_left: np.ndarray, dx: np.ndarray) -> np.ndarray:
    """Pairings for a batch: (n_paths, grid_n) @ (grid_n, n_dirs)."""
    return dx @ z_left


def cylinder_expectation(r: Callable, e_list: Sequence[CambElement],
                         gh_n: int = 64) -> float:
    """Expectation of r((e1,x)~, ..., (en,x)~) for orthonormal directions.

    Reduces to an n-dimensional Gaussian integral centered at the drift
    pairings, evaluated by tensorized Gauss-Hermite quadrature.  Supports
    n <= 3; ``r`` must accept broadcast arrays.
    """
    n = len(e_list)
    if n == 0 or n > 3:
        raise ValueError("cylinder_expectation supports 1 to 3 directions")
    gram = np.array([[inner(ei, ej) for ej in e_list] for ei in e_list])
    if np.max(np.abs(gram - np.eye(n))) > ORTHO_TOL:
        raise NotOrthonormal(
            f"Gram matrix deviates from identity by {np.max(np.abs(gram - np.eye(n))):.3g}")
    means = np.array([pair_with_a(e) for e in e_list])
    s_nodes, s_weights = np.polynomial.hermite.hermgauss(gh_n)
    grids = np.meshgrid(*[means[j] + np.sqrt(2.0) * s_nodes for j in range(n)],
                        indexing="ij")
    wgrids = np.meshgrid(*[s_weights] * n, indexing="ij")
    wtot = np.ones_like(wgrids[0])
    for wg in wgrids:
        wtot = wtot * wg
    vals = np.asarray(r(*grids))
    return float(np.sum(wtot * vals) * np.pi ** (-n / 2.0))
