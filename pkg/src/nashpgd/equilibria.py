"""Equilibrium residuals (NE, CE, CCE) and a brute-force grid oracle.

Residuals are the raw maximum deviation gain; a profile or distribution is an
exact equilibrium iff its residual is ``<= 0``. Pure deviations suffice for
NE because a player's payoff is linear in their own mixed strategy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .game import Game, GameError, SolvePoint, action_values_vs_mixed, as_profile, flatten_profile, product_distribution
from .objectives import ce_gains, cce_gains

MAX_GRID_POINTS = 10**7


@dataclass(frozen=True)
class ResidualReport:
    ne_residual: float
    ce_residual: float
    cce_residual: float
    per_player: dict[int, tuple[int, float]]  # player -> (best deviation, its gain)


def _player_gains(game: Game, pi) -> list[np.ndarray]:
    blocks = as_profile(game, pi)
    out = []
    for i in range(game.num_players):
        v = action_values_vs_mixed(game, i, blocks)
        out.append(v - float(v @ blocks[i]))
    return out


def ne_residual(game: Game, pi) -> float:
    return float(max(g.max() for g in _player_gains(game, pi)))


def cce_residual(game: Game, p) -> float:
    return float(max(g.max() for g in cce_gains(game, p)))


def ce_residual(game: Game, p) -> float:
    return float(max(g.max() for g in ce_gains(game, p)))


def residual_report(game: Game, pi) -> ResidualReport:
    gains = _player_gains(game, pi)
    p = product_distribution(game, pi)
    return ResidualReport(
        ne_residual=float(max(g.max() for g in gains)),
        ce_residual=ce_residual(game, p),
        cce_residual=cce_residual(game, p),
        per_player={i: (int(np.argmax(g)), float(g.max())) for i, g in enumerate(gains)},
    )


def is_nash_profile(game: Game, z: SolvePoint, eps: float) -> bool:
    """True iff ``pi`` is an ``eps``-NE and ``p`` is within ``eps`` (max-norm) of ``P(pi)``."""
    gap = np.max(np.abs(np.asarray(z.p) - product_distribution(game, z.pi)))
    return ne_residual(game, z.pi) <= eps and gap <= eps


# --- grid oracle ---------------------------------------------------------------


def simplex_grid(m: int, k: int) -> np.ndarray:
    """All points of the m-simplex with coordinates in {0, 1/k, ..., 1}, shape (C(k+m-1, m-1), m)."""
    if m == 1:
        return np.ones((1, 1))
    bars = np.array(list(itertools.combinations(range(k + m - 1), m - 1)), dtype=np.int64)
    edges = np.concatenate(
        [np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), k + m - 1)], axis=1
    )
    return (np.diff(edges, axis=1) - 1).astype(np.float64) / k


def grid_size(game: Game, k: int) -> int:
    return math.prod(math.comb(k + m - 1, m - 1) for m in game.action_counts)


@dataclass(frozen=True, eq=False)
class GridSieve:
    """Grid profiles whose NE residual is at most ``threshold``, best first."""

    resolution: int
    threshold: float
    grid_size: int
    profiles: np.ndarray  # (S, M1) concatenated blocks
    residuals: np.ndarray  # (S,)

    def __len__(self) -> int:
        return len(self.residuals)

    def profile(self, game: Game, k: int):
        return as_profile(game, self.profiles[k])


def _batch_ne_residual(game: Game, blocks: list[np.ndarray]) -> np.ndarray:
    """NE residual of a batch of profiles; ``blocks[i]`` has shape ``(C, m_i)``."""
    n = game.num_players
    c = blocks[0].shape[0]
    worst = np.full(c, -np.inf)
    for i in range(n):
        t = np.broadcast_to(game.payoff_tensor(i), (c, *game.action_counts))
        # contract opponents from the last axis down so earlier axis numbers stay put
        for k in range(n - 1, -1, -1):
            if k == i:
                continue
            shape = [c] + [1] * (t.ndim - 1)
            shape[k + 1] = game.action_counts[k]
            t = (t * blocks[k].reshape(shape)).sum(axis=k + 1)
        vals = t.reshape(c, game.action_counts[i])
        gain = vals.max(axis=1) - np.einsum("cj,cj->c", vals, blocks[i])
        np.maximum(worst, gain, out=worst)
    return worst


def grid_oracle(game: Game, resolution: int, threshold: float | None = None, chunk: int = 1 << 16) -> GridSieve:
    """Enumerate every profile on the 1/K grid and keep the approximate equilibria.

    Keeps profiles with ``ne_residual <= threshold`` (default ``2/K``), sorted by
    residual with enumeration order breaking ties.
    """
    k = int(resolution)
    if k < 1:
        raise GameError("grid resolution must be a positive integer")
    size = grid_size(game, k)
    if size > MAX_GRID_POINTS:
        raise GameError(f"grid of {size} profiles exceeds the limit of {MAX_GRID_POINTS}")
    thr = 2.0 / k if threshold is None else float(threshold)
    grids = [simplex_grid(m, k) for m in game.action_counts]
    dims = tuple(len(g) for g in grids)
    kept_idx, kept_res = [], []
    for start in range(0, size, chunk):
        flat = np.arange(start, min(start + chunk, size))
        idx = np.unravel_index(flat, dims)
        res = _batch_ne_residual(game, [g[ix] for g, ix in zip(grids, idx)])
        mask = res <= thr
        kept_idx.append(flat[mask])
        kept_res.append(res[mask])
    flat = np.concatenate(kept_idx)
    res = np.concatenate(kept_res)
    order = np.argsort(res, kind="stable")
    flat, res = flat[order], res[order]
    idx = np.unravel_index(flat, dims)
    profiles = (
        np.concatenate([g[ix] for g, ix in zip(grids, idx)], axis=1)
        if len(flat)
        else np.empty((0, game.num_individual))
    )
    return GridSieve(k, thr, size, profiles, res)


def sieve_clusters(sieve: GridSieve, linkage: float | None = None) -> list[np.ndarray]:
    """Single-linkage components of the sieve under the max norm.

    Two kept profiles share a cluster when a chain of kept profiles joins them
    with every hop at most ``linkage`` apart (default ``2/K``, the sieve's own
    scale). Returns index arrays into the sieve, the cluster holding the lowest
    residual first; indices within a cluster are ascending.
    """
    r = 2.0 / sieve.resolution if linkage is None else float(linkage)
    pts = sieve.profiles
    label = np.full(len(pts), -1)
    clusters = []
    for seed in range(len(pts)):
        if label[seed] >= 0:
            continue
        label[seed] = len(clusters)
        stack, members = [seed], [seed]
        while stack:
            x = stack.pop()
            near = np.flatnonzero((np.max(np.abs(pts - pts[x]), axis=1) <= r + 1e-12) & (label < 0))
            label[near] = len(clusters)
            stack.extend(near.tolist())
            members.extend(near.tolist())
        clusters.append(np.sort(np.array(members)))
    return clusters


def profile_distance(a, b) -> float:
    """Max-norm distance between two profiles."""
    return float(np.max(np.abs(flatten_profile(a) - flatten_profile(b))))
