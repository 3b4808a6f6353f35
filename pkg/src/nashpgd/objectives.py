"""Penalty objectives whose common zeros are the Nash equilibrium profiles.

``f`` measures how far ``(pi, p)`` is from the graph ``p = P(pi)``; ``C1``
and ``C2`` measure coarse-correlated and correlated deviation gains of
``p``; ``B`` measures the gain of each pure action over ``pi^i`` against
``p``'s opponent marginals. The solver minimises ``f + C1`` (``Variant.OP1``)
or ``f + B`` (``Variant.OP2``).

Everything is computed on the joint tensor view of ``p`` with one marginal
sum per player, so a full evaluation costs ``O(N * M2)``. The formulas are
evaluated on raw vectors without feasibility checks; they are polynomial
(or piecewise polynomial) on all of real space, which the finite-difference
oracle relies on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .game import Game, SolvePoint, as_joint, as_profile


class Variant(str, enum.Enum):
    OP1 = "op1"  # f + C1
    OP2 = "op2"  # f + B


@dataclass(frozen=True)
class ObjectiveValue:
    f: float
    c1: float
    total: float
    variant: Variant
    c2: float | None = None
    b: float | None = None

    @property
    def penalty(self) -> float:
        return self.c1 if self.variant is Variant.OP1 else self.b


@dataclass(frozen=True, eq=False)
class Gradient:
    pi: NDArray[np.float64]  # length M1, player blocks concatenated
    p: NDArray[np.float64]  # length M2

    def flat(self) -> NDArray[np.float64]:
        return np.concatenate([self.pi, self.p])

    def __add__(self, other: "Gradient") -> "Gradient":
        return Gradient(self.pi + other.pi, self.p + other.p)


def _split(game: Game, z) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
    if isinstance(z, SolvePoint):
        return as_profile(game, z.pi), as_joint(game, z.p).reshape(game.action_counts)
    z = SolvePoint.from_flat(game, z)
    return z.pi, z.p.reshape(game.action_counts)


def _along(game: Game, i: int, v: np.ndarray) -> np.ndarray:
    shape = [1] * game.num_players
    shape[i] = game.action_counts[i]
    return v.reshape(shape)


def _others(game: Game, i: int) -> tuple[int, ...]:
    return tuple(k for k in range(game.num_players) if k != i)


def _graph_residual(game: Game, i: int, pi_i: np.ndarray, pt: np.ndarray):
    """``r(a) = p(a) - pi^i(a_i) * s(a^-i)`` and the marginal ``s``."""
    s = pt.sum(axis=i, keepdims=True)
    return pt - _along(game, i, pi_i) * s, s


def graph_residuals(game: Game, z) -> list[NDArray[np.float64]]:
    """Per-player residual tensors; all vanish exactly on the graph of ``P``."""
    pi, pt = _split(game, z)
    return [_graph_residual(game, i, pi[i], pt)[0] for i in range(game.num_players)]


def _deviation_values(game: Game, i: int, s: np.ndarray) -> np.ndarray:
    """``u^i(a^i_j, p^-i)`` for all ``j`` given the marginal ``s``."""
    return (game.payoff_tensor(i) * s).sum(axis=_others(game, i))


def eval_f(game: Game, z) -> float:
    pi, pt = _split(game, z)
    total = 0.0
    for i in range(game.num_players):
        r, _ = _graph_residual(game, i, pi[i], pt)
        total += float(np.sum(r * r))
    return total


def cce_gains(game: Game, p) -> list[NDArray[np.float64]]:
    """``u^i(a^i_j, p^-i) - u^i(p)`` per player, one entry per action."""
    pt = as_joint(game, p).reshape(game.action_counts)
    out = []
    for i in range(game.num_players):
        s = pt.sum(axis=i, keepdims=True)
        out.append(_deviation_values(game, i, s) - float(np.sum(game.payoff_tensor(i) * pt)))
    return out


def eval_c1(game: Game, p) -> float:
    return float(sum(np.sum(np.maximum(g, 0.0) ** 2) for g in cce_gains(game, p)))


def ce_gains(game: Game, p) -> list[NDArray[np.float64]]:
    """Swap gains per player as a matrix ``G[j, j']``: recommended ``j``, played ``j'``."""
    pt = as_joint(game, p).reshape(game.action_counts)
    out = []
    for i in range(game.num_players):
        m = game.action_counts[i]
        u = np.moveaxis(game.payoff_tensor(i), i, 0).reshape(m, -1)
        q = np.moveaxis(pt, i, 0).reshape(m, -1)
        w = q @ u.T  # w[j, j'] = sum_r p(j, r) u(j', r)
        out.append(w - np.diag(w)[:, None])
    return out


def eval_c2(game: Game, p) -> float:
    return float(sum(np.sum(np.maximum(g, 0.0) ** 2) for g in ce_gains(game, p)))


def b_gains(game: Game, z) -> list[NDArray[np.float64]]:
    """``u^i(a^i_j, p^-i) - u^i(pi^i, p^-i)`` per player."""
    pi, pt = _split(game, z)
    out = []
    for i in range(game.num_players):
        v = _deviation_values(game, i, pt.sum(axis=i, keepdims=True))
        out.append(v - float(pi[i] @ v))
    return out


def eval_b(game: Game, z) -> float:
    return float(sum(np.sum(np.maximum(g, 0.0) ** 2) for g in b_gains(game, z)))


def objective_value(game: Game, z, variant: Variant = Variant.OP1, with_c2: bool = False) -> ObjectiveValue:
    variant = Variant(variant)
    f = eval_f(game, z)
    _, pt = _split(game, z)
    c1 = eval_c1(game, pt)
    b = eval_b(game, z)
    c2 = eval_c2(game, pt) if with_c2 else None
    total = f + (c1 if variant is Variant.OP1 else b)
    return ObjectiveValue(f=f, c1=c1, total=total, variant=variant, c2=c2, b=b)


def total_objective(game: Game, z, variant: Variant = Variant.OP1) -> float:
    variant = Variant(variant)
    if variant is Variant.OP1:
        _, pt = _split(game, z)
        return eval_f(game, z) + eval_c1(game, pt)
    return eval_f(game, z) + eval_b(game, z)


# --- gradients --------------------------------------------------------------


def grad_f_pi(game: Game, z) -> NDArray[np.float64]:
    """``df/dpi^k(j) = -2 sum_{a^-k} r_k(j, a^-k) s_k(a^-k)``."""
    pi, pt = _split(game, z)
    blocks = []
    for i in range(game.num_players):
        r, s = _graph_residual(game, i, pi[i], pt)
        blocks.append(-2.0 * (r * s).sum(axis=_others(game, i)))
    return np.concatenate(blocks)


def grad_f_p(game: Game, z) -> NDArray[np.float64]:
    """Each residual ``r_i(a)`` touches ``p(a)`` directly and every ``p(a^i_j, a^-i)`` via ``s``."""
    pi, pt = _split(game, z)
    g = np.zeros_like(pt)
    for i in range(game.num_players):
        r, _ = _graph_residual(game, i, pi[i], pt)
        g += 2.0 * (r - (r * _along(game, i, pi[i])).sum(axis=i, keepdims=True))
    return g.reshape(-1)


def grad_c1(game: Game, p) -> NDArray[np.float64]:
    pt = as_joint(game, p).reshape(game.action_counts)
    g = np.zeros_like(pt)
    for i, gain in enumerate(cce_gains(game, pt)):
        w = np.maximum(gain, 0.0)
        u = game.payoff_tensor(i)
        g += 2.0 * ((_along(game, i, w) * u).sum(axis=i, keepdims=True) - w.sum() * u)
    return g.reshape(-1)


def grad_b(game: Game, z) -> Gradient:
    """Gradient of ``B``; inactive (``max`` at zero) terms contribute nothing."""
    pi, pt = _split(game, z)
    g_pi = []
    g_p = np.zeros_like(pt)
    for i in range(game.num_players):
        u = game.payoff_tensor(i)
        v = _deviation_values(game, i, pt.sum(axis=i, keepdims=True))
        w = np.maximum(v - float(pi[i] @ v), 0.0)
        tot = w.sum()
        g_pi.append(-2.0 * tot * v)
        mixed = (_along(game, i, pi[i]) * u).sum(axis=i, keepdims=True)
        g_p += 2.0 * ((_along(game, i, w) * u).sum(axis=i, keepdims=True) - tot * mixed)
    return Gradient(np.concatenate(g_pi), g_p.reshape(-1))


def grad_f(game: Game, z) -> Gradient:
    return Gradient(grad_f_pi(game, z), grad_f_p(game, z))


def grad_total(game: Game, z, variant: Variant = Variant.OP1) -> Gradient:
    variant = Variant(variant)
    gf = grad_f(game, z)
    if variant is Variant.OP1:
        _, pt = _split(game, z)
        return Gradient(gf.pi, gf.p + grad_c1(game, pt))
    return gf + grad_b(game, z)


def finite_difference_gradient(
    game: Game, z, variant: Variant | None = Variant.OP1, step: float = 1e-5
) -> Gradient:
    """Central differences of the variant's total objective (``f`` alone if ``variant`` is None).

    Perturbed points are evaluated as-is, never projected.
    """
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    x = SolvePoint.from_flat(game, z.flat() if isinstance(z, SolvePoint) else z).flat()
    if variant is None:
        fn = lambda v: eval_f(game, v)  # noqa: E731
    else:
        fn = lambda v: total_objective(game, v, variant)  # noqa: E731
    g = np.empty_like(x)
    for k in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[k] += step
        xm[k] -= step
        g[k] = (fn(xp) - fn(xm)) / (2.0 * step)
    m1 = game.num_individual
    return Gradient(g[:m1], g[m1:])
