"""Finite n-player normal-form games and their expected-utility forms.

Joint actions are stored flat in row-major order: the joint action
``(j_1, ..., j_N)`` lives at ``sum_i j_i * stride_i`` with the last
player's index varying fastest. Every utility array, joint distribution
and gradient over joint actions in this package uses that layout, so a
flat vector can always be viewed as a tensor of shape ``action_counts``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

FEASIBILITY_TOL = 1e-12

Profile = tuple[NDArray[np.float64], ...]


class GameError(ValueError):
    """Malformed game, profile or distribution input."""


@dataclass(frozen=True, eq=False)
class Game:
    """A normal-form game with ``utilities[i, a]`` = payoff of player ``i`` at joint index ``a``."""

    action_counts: tuple[int, ...]
    utilities: NDArray[np.float64]
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self) -> None:
        counts = tuple(int(m) for m in self.action_counts)
        if not counts:
            raise GameError("a game needs at least one player")
        if any(m < 1 for m in counts):
            raise GameError(f"action counts must be positive, got {counts}")
        size = int(np.prod(counts))
        u = np.array(self.utilities, dtype=np.float64)
        if u.shape != (len(counts), size):
            raise GameError(
                f"utilities must have shape ({len(counts)}, {size}) "
                f"(one row of M2={size} entries per player), got {u.shape}"
            )
        if not np.all(np.isfinite(u)):
            raise GameError("utilities must be finite")
        u.setflags(write=False)
        labels = self.labels
        if labels is not None:
            labels = tuple(tuple(str(s) for s in row) for row in labels)
            if tuple(len(row) for row in labels) != counts:
                raise GameError("labels must give one name per action of every player")
        object.__setattr__(self, "action_counts", counts)
        object.__setattr__(self, "utilities", u)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_tensors(cls, tensors: Sequence[np.ndarray], labels=None) -> "Game":
        """Build a game from one payoff tensor of shape ``(m_1, ..., m_N)`` per player."""
        arrs = [np.asarray(t, dtype=np.float64) for t in tensors]
        shape = arrs[0].shape
        if len(arrs) != len(shape) or any(t.shape != shape for t in arrs):
            raise GameError("need one payoff tensor per player, all of shape (m_1, ..., m_N)")
        return cls(shape, np.stack([t.reshape(-1) for t in arrs]), labels)

    @property
    def num_players(self) -> int:
        return len(self.action_counts)

    @property
    def num_joint(self) -> int:
        """M2, the number of joint actions."""
        return self.utilities.shape[1]

    @property
    def num_individual(self) -> int:
        """M1, the total number of individual actions."""
        return sum(self.action_counts)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Start of each player's block in a concatenated profile, plus the end."""
        return tuple(int(x) for x in np.concatenate([[0], np.cumsum(self.action_counts)]))

    @property
    def strides(self) -> tuple[int, ...]:
        out = [1] * self.num_players
        for i in range(self.num_players - 2, -1, -1):
            out[i] = out[i + 1] * self.action_counts[i + 1]
        return tuple(out)

    def payoff_tensor(self, i: int) -> NDArray[np.float64]:
        check_player(self, i)
        return self.utilities[i].reshape(self.action_counts)

    def fingerprint(self) -> str:
        """Content hash of action counts and utilities."""
        h = hashlib.sha256()
        h.update(np.asarray(self.action_counts, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.utilities).tobytes())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.action_counts == other.action_counts
            and self.labels == other.labels
            and np.array_equal(self.utilities, other.utilities)
        )

    def __hash__(self) -> int:
        return hash((self.action_counts, self.labels, self.utilities.tobytes()))


def check_player(game: Game, i: int) -> None:
    if not 0 <= i < game.num_players:
        raise GameError(f"player index {i} out of range for {game.num_players} players")


def check_action(game: Game, i: int, j: int) -> None:
    check_player(game, i)
    if not 0 <= j < game.action_counts[i]:
        raise GameError(f"action {j} out of range for player {i} with {game.action_counts[i]} actions")


def joint_index(game: Game, multi_index: Sequence[int]) -> int:
    if len(multi_index) != game.num_players:
        raise GameError(f"expected {game.num_players} action indices, got {len(multi_index)}")
    flat = 0
    for i, (j, stride) in enumerate(zip(multi_index, game.strides)):
        check_action(game, i, int(j))
        flat += int(j) * stride
    return flat


def joint_unindex(game: Game, index: int) -> tuple[int, ...]:
    if not 0 <= index < game.num_joint:
        raise GameError(f"joint index {index} out of range [0, {game.num_joint})")
    return tuple(int(x) for x in np.unravel_index(index, game.action_counts))


def as_profile(game: Game, pi) -> Profile:
    """Coerce per-player vectors (or one concatenated vector) into a profile tuple.

    Only dimensions are checked; entries may lie off the simplex so the
    objectives can be differentiated numerically around feasible points.
    """
    counts = game.action_counts
    if isinstance(pi, np.ndarray) and pi.ndim == 1 and np.issubdtype(pi.dtype, np.number):
        if pi.shape[0] != game.num_individual:
            raise GameError(f"flat profile must have length M1={game.num_individual}, got {pi.shape[0]}")
        offs = game.offsets
        return tuple(np.asarray(pi[offs[i] : offs[i + 1]], dtype=np.float64) for i in range(len(counts)))
    blocks = tuple(np.asarray(b, dtype=np.float64).reshape(-1) for b in pi)
    if tuple(b.shape[0] for b in blocks) != counts:
        raise GameError(
            f"profile block sizes {tuple(b.shape[0] for b in blocks)} do not match action counts {counts}"
        )
    return blocks


def as_joint(game: Game, p) -> NDArray[np.float64]:
    arr = np.asarray(p, dtype=np.float64).reshape(-1)
    if arr.shape[0] != game.num_joint:
        raise GameError(f"joint distribution must have length M2={game.num_joint}, got {arr.shape[0]}")
    return arr


def on_simplex(v: np.ndarray, tol: float = FEASIBILITY_TOL) -> bool:
    v = np.asarray(v, dtype=np.float64)
    return bool(v.size > 0 and np.all(v >= -tol) and abs(v.sum() - 1.0) <= tol)


def is_feasible_profile(game: Game, pi, tol: float = FEASIBILITY_TOL) -> bool:
    return all(on_simplex(b, tol) for b in as_profile(game, pi))


def flatten_profile(pi) -> NDArray[np.float64]:
    return np.concatenate([np.asarray(b, dtype=np.float64).reshape(-1) for b in pi])


def uniform_profile(game: Game) -> Profile:
    return tuple(np.full(m, 1.0 / m) for m in game.action_counts)


def pure_profile(game: Game, actions: Sequence[int]) -> Profile:
    out = []
    for i, j in enumerate(actions):
        check_action(game, i, j)
        e = np.zeros(game.action_counts[i])
        e[j] = 1.0
        out.append(e)
    return tuple(out)


def _axis_shape(game: Game, i: int) -> list[int]:
    shape = [1] * game.num_players
    shape[i] = game.action_counts[i]
    return shape


def product_distribution(game: Game, pi) -> NDArray[np.float64]:
    """Joint distribution ``P(pi)(a) = prod_i pi^i(a_i)``, flattened."""
    blocks = as_profile(game, pi)
    p = blocks[0]
    for b in blocks[1:]:
        p = np.multiply.outer(p, b)
    return np.asarray(p, dtype=np.float64).reshape(-1)


def _others_product(game: Game, i: int, blocks: Profile) -> np.ndarray:
    """Product of every opponent's mixed strategy, as a tensor with axis ``i`` of length 1."""
    out = np.ones([1] * game.num_players)
    for k, b in enumerate(blocks):
        if k != i:
            out = out * b.reshape(_axis_shape(game, k))
    return out


def action_values_vs_mixed(game: Game, i: int, pi) -> NDArray[np.float64]:
    """``u^i(a^i_j, pi^-i)`` for every action ``j`` of player ``i``.

    Player ``i``'s own block in ``pi`` is ignored.
    """
    check_player(game, i)
    blocks = as_profile(game, pi)
    axes = tuple(k for k in range(game.num_players) if k != i)
    return (game.payoff_tensor(i) * _others_product(game, i, blocks)).sum(axis=axes)


def utility_mixed(game: Game, i: int, pi) -> float:
    blocks = as_profile(game, pi)
    return float(action_values_vs_mixed(game, i, blocks) @ blocks[i])


def utility_action_vs_mixed(game: Game, i: int, j: int, pi) -> float:
    check_action(game, i, j)
    return float(action_values_vs_mixed(game, i, pi)[j])


def opponent_marginal(game: Game, i: int, p) -> NDArray[np.float64]:
    """``sum_j p(a^i_j, a^-i)`` as a tensor with axis ``i`` collapsed to length 1."""
    check_player(game, i)
    return as_joint(game, p).reshape(game.action_counts).sum(axis=i, keepdims=True)


def action_values_vs_joint(game: Game, i: int, p) -> NDArray[np.float64]:
    """``u^i(a^i_j, p^-i)`` for every action ``j`` of player ``i``."""
    axes = tuple(k for k in range(game.num_players) if k != i)
    return (game.payoff_tensor(i) * opponent_marginal(game, i, p)).sum(axis=axes)


def utility_joint(game: Game, i: int, p) -> float:
    check_player(game, i)
    return float(game.utilities[i] @ as_joint(game, p))


def utility_action_vs_joint(game: Game, i: int, j: int, p) -> float:
    check_action(game, i, j)
    return float(action_values_vs_joint(game, i, p)[j])


@dataclass(frozen=True, eq=False)
class SolvePoint:
    """An iterate ``z = (pi, p)``: a mixed profile plus a joint distribution."""

    pi: Profile
    p: NDArray[np.float64]

    def flat(self) -> NDArray[np.float64]:
        return np.concatenate([*self.pi, self.p])

    @classmethod
    def from_flat(cls, game: Game, z) -> "SolvePoint":
        z = np.asarray(z, dtype=np.float64).reshape(-1)
        m1 = game.num_individual
        if z.shape[0] != m1 + game.num_joint:
            raise GameError(f"solve vector must have length M1+M2={m1 + game.num_joint}, got {z.shape[0]}")
        return cls(as_profile(game, z[:m1].copy()), z[m1:].copy())

    @classmethod
    def on_graph(cls, game: Game, pi) -> "SolvePoint":
        """The point ``(pi, P(pi))``."""
        blocks = as_profile(game, pi)
        return cls(blocks, product_distribution(game, blocks))

    def is_feasible(self, tol: float = FEASIBILITY_TOL) -> bool:
        return all(on_simplex(b, tol) for b in self.pi) and on_simplex(self.p, tol)


# --- JSON -----------------------------------------------------------------


def game_from_dict(data: dict) -> Game:
    if not isinstance(data, dict):
        raise GameError("game file must hold a JSON object")
    for key in ("players", "actions", "utilities"):
        if key not in data:
            raise GameError(f"game file is missing field '{key}'")
    n = data["players"]
    actions = data["actions"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GameError(f"field 'players' must be a positive integer, got {n!r}")
    if not isinstance(actions, list) or len(actions) != n:
        raise GameError(f"field 'actions' must list {n} action counts")
    if not all(isinstance(m, int) and not isinstance(m, bool) and m >= 1 for m in actions):
        raise GameError(f"field 'actions' must hold positive integers, got {actions!r}")
    size = int(np.prod(actions))
    rows = data["utilities"]
    if not isinstance(rows, list) or len(rows) != n:
        raise GameError(f"field 'utilities' must hold {n} arrays (one per player)")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise GameError(f"field 'utilities'[{i}] must have M2={size} entries, got {got}")
    try:
        u = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise GameError(f"field 'utilities' must hold numbers: {exc}") from None
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or [len(r) if isinstance(r, list) else -1 for r in labels] != actions:
            raise GameError("field 'labels' must give one name per action of every player")
    return Game(tuple(actions), u, labels)


def game_to_dict(game: Game) -> dict:
    out = {
        "players": game.num_players,
        "actions": list(game.action_counts),
        "utilities": game.utilities.tolist(),
    }
    if game.labels is not None:
        out["labels"] = [list(r) for r in game.labels]
    return out


def load_game(path) -> Game:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GameError(f"cannot read game file {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"game file {path} is not valid JSON: {exc}") from None
    return game_from_dict(data)


def save_game(game: Game, path) -> None:
    Path(path).write_text(json.dumps(game_to_dict(game), indent=2))
