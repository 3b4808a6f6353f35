"""The four benchmark games with their documented Nash equilibria.

Action order follows the row/column order of the original payoff tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .game import Game, GameError, Profile


@dataclass(frozen=True)
class EquilibriumFamily:
    """A one-parameter family ``alpha -> profile`` on ``alpha in [0, 1]``."""

    name: str
    arms: tuple[Callable[[float], Profile], ...]

    def sample(self, alpha: float) -> list[Profile]:
        """One member per arm at the given ``alpha``."""
        return [arm(alpha) for arm in self.arms]

    def distance(self, pi, resolution: int = 10001) -> float:
        """Max-norm distance from ``pi`` to the family, minimising over ``alpha`` on every arm."""
        x = np.concatenate([np.asarray(b, dtype=np.float64) for b in pi])
        alphas = np.linspace(0.0, 1.0, resolution)
        best = np.inf
        for arm in self.arms:
            pts = np.array([np.concatenate(arm(a)) for a in alphas])
            best = min(best, float(np.min(np.max(np.abs(pts - x), axis=1))))
        return best


@dataclass(frozen=True)
class NamedGame:
    key: str
    game: Game
    known_equilibria: tuple[Profile, ...]
    source: str
    family: EquilibriumFamily | None = None
    description: str = field(default="", compare=False)


def _bimatrix(rows: list[list[tuple[float, float]]], labels=None) -> Game:
    t = np.array(rows, dtype=np.float64)  # (m1, m2, 2)
    return Game.from_tensors([t[..., 0], t[..., 1]], labels)


def _profile(*blocks) -> Profile:
    return tuple(np.array(b, dtype=np.float64) for b in blocks)


def _rps() -> NamedGame:
    game = _bimatrix(
        [
            [(0, 0), (0, 1), (1, 0)],
            [(1, 0), (0, 0), (0, 1)],
            [(0, 1), (1, 0), (0, 0)],
        ],
        labels=[["R", "P", "S"], ["R", "P", "S"]],
    )
    third = [1 / 3, 1 / 3, 1 / 3]
    return NamedGame("rps", game, (_profile(third, third),), "standard zero-sum cycle",
                     description="rock-paper-scissors (win = 1)")


def _jordan() -> NamedGame:
    # payoff triples indexed by (a1, a2, a3)
    table = {
        (0, 0, 0): (0, 0, 0), (0, 1, 0): (1, 1, 0),
        (1, 0, 0): (1, 0, 1), (1, 1, 0): (0, 1, 1),
        (0, 0, 1): (0, 1, 1), (0, 1, 1): (1, 0, 1),
        (1, 0, 1): (1, 1, 0), (1, 1, 1): (0, 0, 0),
    }  # fmt: skip
    t = np.zeros((3, 2, 2, 2))
    for joint, payoff in table.items():
        for i in range(3):
            t[i][joint] = payoff[i]
    half = [0.5, 0.5]
    return NamedGame("jordan", Game.from_tensors(list(t)), (_profile(half, half, half),), "Jordan (1993) three-player cycle",
                     description="three-player Jordan game")


def _finite3x3() -> NamedGame:
    game = _bimatrix(
        [
            [(1, 0), (0, 1), (1, 0)],
            [(0, 1), (1, 0), (1, 0)],
            [(0, 1), (0, 1), (1, 1)],
        ]
    )
    eqs = (_profile([0.5, 0.5, 0], [0.5, 0.5, 0]), _profile([0, 0, 1], [0, 0, 1]))
    return NamedGame("finite3x3", game, eqs, "hand-built two-equilibrium example",
                     description="3x3 game with exactly two equilibria")


def _infinite2x2() -> NamedGame:
    game = _bimatrix([[(3, 0), (12, 0)], [(3, -2), (2, -5)]])
    family = EquilibriumFamily(
        "two arms through ((1,0),(1,0))",
        (
            lambda a: _profile([a, 1 - a], [1, 0]),
            lambda a: _profile([1, 0], [a, 1 - a]),
        ),
    )
    eqs = tuple(member for a in (0.0, 0.5, 1.0) for member in family.sample(a))
    return NamedGame("infinite2x2", game, eqs, "hand-built equilibrium-continuum example", family=family,
                     description="2x2 game with a continuum of equilibria")


_BUILDERS = {
    "rps": _rps,
    "jordan": _jordan,
    "finite3x3": _finite3x3,
    "infinite2x2": _infinite2x2,
}

KEYS = tuple(_BUILDERS)


def builtin(key: str) -> NamedGame:
    try:
        return _BUILDERS[key]()
    except KeyError:
        raise GameError(f"unknown builtin game {key!r}; choose from {', '.join(KEYS)}") from None


def distance_to_equilibria(named: NamedGame, pi) -> float:
    """Max-norm distance from ``pi`` to the documented equilibrium set."""
    if named.family is not None:
        return named.family.distance(pi)
    x = np.concatenate([np.asarray(b, dtype=np.float64) for b in pi])
    return min(float(np.max(np.abs(np.concatenate(e) - x))) for e in named.known_equilibria)
