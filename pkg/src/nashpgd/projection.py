"""Euclidean projection onto probability simplices and their Cartesian product."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import Game, GameError, SolvePoint


@dataclass(frozen=True)
class SimplexView:
    """One simplex block ``z[offset:offset + length]`` of a flat solve vector."""

    offset: int
    length: int

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.length)


def simplex_views(game: Game) -> tuple[SimplexView, ...]:
    """Blocks for ``(pi^1, ..., pi^N, p)``: one per player, then the joint block."""
    offs = game.offsets
    views = [SimplexView(offs[i], game.action_counts[i]) for i in range(game.num_players)]
    views.append(SimplexView(offs[-1], game.num_joint))
    return tuple(views)


def project_simplex(v) -> np.ndarray:
    """Return ``argmin_{x in simplex} ||x - v||``.

    Sorts the coordinates once (stable, so ties resolve by index), finds the
    threshold ``tau`` with ``sum(max(v - tau, 0)) = 1`` and clips. A single
    correction spreads the leftover rounding residue over the support.
    """
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise GameError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise GameError("cannot project a vector with non-finite entries")
    u = -np.sort(-v, kind="stable")
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - css / k > 0)
    tau = css[rho - 1] / rho
    x = np.maximum(v - tau, 0.0)
    support = x > 0
    resid = x.sum() - 1.0
    if resid != 0.0:
        x[support] -= resid / np.count_nonzero(support)
        np.maximum(x, 0.0, out=x)
    return x


def project_block_flat(z_raw, blocks: Sequence[SimplexView]) -> np.ndarray:
    """Project each block of ``z_raw`` onto its own simplex.

    The blocks must tile ``z_raw`` exactly, in order.
    """
    z_raw = np.asarray(z_raw, dtype=np.float64).reshape(-1)
    pos = 0
    for b in blocks:
        if b.offset != pos or b.length < 1:
            raise GameError(f"simplex blocks must tile the vector; block at {b.offset} expected at {pos}")
        pos += b.length
    if pos != z_raw.shape[0]:
        raise GameError(f"blocks cover {pos} entries but the vector has {z_raw.shape[0]}")
    out = np.empty_like(z_raw)
    for b in blocks:
        out[b.slice] = project_simplex(z_raw[b.slice])
    return out


def project_block(z_raw, blocks: Sequence[SimplexView]) -> SolvePoint:
    """Projection onto the product of simplices; the last block is the joint distribution."""
    z = project_block_flat(z_raw, blocks)
    return SolvePoint(tuple(z[b.slice] for b in blocks[:-1]), z[blocks[-1].slice])
