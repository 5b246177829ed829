"""Symmetric alpha-stable processes on a uniform grid over [-1, 1].

Scale convention: a draw with scale ``s`` has characteristic function
``exp(-|s u|^alpha)``.  For alpha = 2 that is N(0, 2 s^2); for alpha = 1
it is ``s`` times a standard Cauchy variate.

Paths are reproducible from ``(alpha, grid_size, seed)``.  Ensembles derive
one 64-bit seed per path from ``(master_seed, path_index)`` through
``numpy.random.SeedSequence`` so that any subset or ordering of paths can
be regenerated independently.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class StableIndex:
    alpha: float

    def __post_init__(self):
        if not (1.0 <= self.alpha <= 2.0):
            raise ValueError(f"stable index must lie in [1, 2], got {self.alpha}")

    def __float__(self) -> float:
        return float(self.alpha)


def _as_index(alpha) -> StableIndex:
    return alpha if isinstance(alpha, StableIndex) else StableIndex(float(alpha))


def sample_sas(alpha, scale: float, rng: np.random.Generator, size=None):
    """Draw from the symmetric alpha-stable law by the Chambers-Mallows-Stuck transform.

    ``scale`` may be an array broadcastable to ``size``.
    """
    a = _as_index(alpha).alpha
    scale = np.asarray(scale, dtype=float)
    if np.any(scale <= 0) or not np.all(np.isfinite(scale)):
        raise ValueError("scale must be positive and finite")
    if size is None:
        size = scale.shape
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=size)
    w = rng.standard_exponential(size=size)
    if a == 1.0:
        x = np.tan(v)
    else:
        cos_v = np.cos(v)
        x = (np.sin(a * v) / cos_v ** (1.0 / a)) * (np.cos((1.0 - a) * v) / w) ** ((1.0 - a) / a)
    x = scale * x
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class StablePath:
    """One sampled trajectory; ``values[0]`` is X(-1) = 0."""

    grid: np.ndarray
    increments: np.ndarray
    alpha: StableIndex
    seed: int

    def __post_init__(self):
        if self.grid.ndim != 1 or self.grid.size < 3:
            raise ValueError("a path needs at least two grid intervals")
        if self.increments.shape != (self.grid.size - 1,):
            raise ValueError("increments must have one entry per grid interval")
        self.grid.setflags(write=False)
        self.increments.setflags(write=False)

    @property
    def grid_size(self) -> int:
        return self.increments.size

    @property
    def values(self) -> np.ndarray:
        return np.concatenate(([0.0], np.cumsum(self.increments)))

    @property
    def total_increment(self) -> float:
        """X(1) - X(-1), accumulated in ascending grid order."""
        return float(np.cumsum(self.increments)[-1])


def uniform_grid(grid_size: int) -> np.ndarray:
    if int(grid_size) != grid_size or grid_size < 2:
        raise ValueError(f"grid size must be an integer >= 2, got {grid_size}")
    return np.linspace(-1.0, 1.0, int(grid_size) + 1)


def derive_seed(master_seed: int, path_index: int) -> int:
    """64-bit seed of path ``path_index`` in the ensemble keyed by ``master_seed``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(path_index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _sample_increments(alpha: StableIndex, grid_size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(int(seed))
    scale = (2.0 / grid_size) ** (1.0 / alpha.alpha)
    return sample_sas(alpha, scale, rng, size=grid_size)


def sample_path(alpha, grid_size: int, seed: int) -> StablePath:
    """Sample X on the uniform grid of ``grid_size + 1`` points over [-1, 1]."""
    alpha = _as_index(alpha)
    grid = uniform_grid(grid_size)
    return StablePath(grid=grid, increments=_sample_increments(alpha, int(grid_size), seed), alpha=alpha, seed=int(seed))


def zero_path(alpha, grid_size: int, seed: int) -> StablePath:
    """Degenerate path with every increment zero (useful as an injected sampler)."""
    grid = uniform_grid(grid_size)
    return StablePath(grid=grid, increments=np.zeros(int(grid_size)), alpha=_as_index(alpha), seed=int(seed))


PathSampler = Callable[[StableIndex, int, int], StablePath]


def sample_increment_matrix(
    alpha,
    grid_size: int,
    master_seed: int,
    n_paths: int,
    sampler: PathSampler | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Increments of ``n_paths`` ensemble members, one row per path.

    Row ``j`` is bitwise equal to ``sample_path(alpha, grid_size,
    derive_seed(master_seed, j)).increments`` regardless of ``threads``.
    """
    alpha = _as_index(alpha)
    grid_size = int(grid_size)
    uniform_grid(grid_size)
    out = np.empty((n_paths, grid_size))

    def fill(rows: range) -> None:
        for j in rows:
            seed = derive_seed(master_seed, j)
            if sampler is None:
                out[j] = _sample_increments(alpha, grid_size, seed)
            else:
                out[j] = sampler(alpha, grid_size, seed).increments

    if threads <= 1 or n_paths < 2:
        fill(range(n_paths))
    else:
        bounds = np.linspace(0, n_paths, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]))
    return out


def stochastic_integral(g, path: StablePath) -> float:
    """Left-endpoint sum of g(t_i) (X(t_{i+1}) - X(t_i)), accumulated in grid order."""
    left = path.grid[:-1]
    values = np.asarray(g(left), dtype=float) if callable(g) else np.asarray(g, dtype=float)
    values = np.broadcast_to(values, left.shape)
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand is not finite at every grid point")
    return float(np.cumsum(values * path.increments)[-1])


def write_path(path: StablePath, destination) -> None:
    """Two-column text dump (t, X(t)) with a one-line header."""
    from .io import atomic_write_text

    lines = [f"# alpha={path.alpha.alpha:g} seed={path.seed} G={path.grid_size}"]
    lines += [f"{t!r} {x!r}" for t, x in zip(path.grid.tolist(), path.values.tolist())]
    atomic_write_text(Path(destination), "\n".join(lines) + "\n")


def read_path(source) -> StablePath:
    text = Path(source).read_text().splitlines()
    header = dict(item.split("=", 1) for item in text[0].lstrip("#").split())
    data = np.loadtxt(text[1:], ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("path file must have two columns")
    grid, values = data[:, 0], data[:, 1]
    return StablePath(grid=grid, increments=np.diff(values), alpha=StableIndex(float(header["alpha"])), seed=int(header["seed"]))
