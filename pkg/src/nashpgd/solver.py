"""Projected gradient descent on ``f + C1`` (or ``f + B``) over the product of simplices.

Each iteration takes ``z <- H(z - a(n) * grad)`` where ``H`` projects every
player block and the joint block onto its own simplex, and the step sizes
``a(n) = a0 / (1 + beta * n)`` are positive, not summable, and square summable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .equilibria import ne_residual
from .game import Game, SolvePoint, as_profile, product_distribution
from .objectives import ObjectiveValue, Variant, grad_total, objective_value
from .projection import project_block, project_block_flat, simplex_views


class StopReason(str, enum.Enum):
    OBJECTIVE_TOL = "objective_tol"
    MOVE_TOL = "move_tol"
    MAX_ITERS = "max_iters"


class Certification(str, enum.Enum):
    NASH_PROFILE = "nash_profile"
    PARTIAL_OPTIMUM_ONLY = "partial_optimum_only"
    UNCONVERGED = "unconverged"


class DivergenceError(RuntimeError):
    """The iteration produced a non-finite value or blew past the divergence guard."""

    def __init__(self, iteration: int, message: str):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration


@dataclass(frozen=True)
class StepSchedule:
    a0: float = 0.5
    beta: float = 1e-4

    def __post_init__(self):
        if not (self.a0 > 0 and self.beta > 0):
            raise ValueError(f"step schedule needs a0 > 0 and beta > 0, got a0={self.a0}, beta={self.beta}")

    def __call__(self, n: int) -> float:
        return self.a0 / (1.0 + self.beta * n)


DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class SolverConfig:
    variant: Variant = Variant.OP1
    schedule: StepSchedule = field(default_factory=StepSchedule)
    max_iters: int = 200_000
    tol_objective: float = 1e-10
    tol_move: float = 1e-8
    record_every: int = 100
    record_p: bool = False
    seed: int = 0
    restarts: int = 4

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.tol_objective < 0 or self.tol_move < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class Trajectory:
    iters: list[int] = field(default_factory=list)
    total: list[float] = field(default_factory=list)
    f: list[float] = field(default_factory=list)
    penalty: list[float] = field(default_factory=list)
    ne_residual: list[float] = field(default_factory=list)
    pi: list[np.ndarray] = field(default_factory=list)
    p: list[np.ndarray] | None = None

    def record(self, game: Game, n: int, z: np.ndarray, variant: Variant) -> ObjectiveValue:
        point = SolvePoint.from_flat(game, z)
        obj = objective_value(game, point, variant)
        self.iters.append(int(n))
        self.total.append(obj.total)
        self.f.append(obj.f)
        self.penalty.append(obj.penalty)
        self.ne_residual.append(ne_residual(game, point.pi))
        self.pi.append(z[: game.num_individual].copy())
        if self.p is not None:
            self.p.append(point.p)
        return obj

    def __len__(self) -> int:
        return len(self.iters)


@dataclass(frozen=True, eq=False)
class SolveResult:
    final: SolvePoint
    objective: ObjectiveValue
    iterations_used: int
    stop_reason: StopReason
    ne_residual: float
    trajectory: Trajectory
    seed: int
    attempt: int = 0


def init_point(game: Game, seed) -> SolvePoint:
    """Uniform random profile (normalised exponentials per player) paired with its product distribution."""
    rng = np.random.default_rng(seed)
    pi = []
    for m in game.action_counts:
        e = rng.standard_exponential(m)
        pi.append(e / e.sum())
    return SolvePoint(tuple(pi), product_distribution(game, pi))


def restart_seed(seed: int, attempt: int) -> int:
    """Seed for restart ``attempt`` (attempt 0 is ``seed`` itself)."""
    if attempt == 0:
        return seed
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1, np.uint64)[0])


def step(game: Game, z: SolvePoint, n: int, cfg: SolverConfig) -> SolvePoint:
    """One projected gradient step from iterate ``n``, using the numpy reference objectives."""
    g = grad_total(game, z, cfg.variant)
    return project_block(z.flat() - cfg.schedule(n) * g.flat(), simplex_views(game))


def gradient_mapping_norm(game: Game, z: SolvePoint, variant: Variant, delta: float = 1e-6) -> float:
    """``||z - H(z - delta * grad)|| / delta``; zero exactly at constrained stationary points."""
    x = z.flat()
    moved = project_block_flat(x - delta * grad_total(game, z, variant).flat(), simplex_views(game))
    return float(np.linalg.norm(x - moved) / delta)


def _solve_once(game: Game, cfg: SolverConfig, tables: _kernel.Tables, seed: int, attempt: int) -> SolveResult:
    z = init_point(game, seed).flat()
    traj = Trajectory(p=[] if cfg.record_p else None)
    obj0 = traj.record(game, 0, z, cfg.variant)
    guard = DIVERGENCE_FACTOR * obj0.total if obj0.total > 0 else np.inf
    op2 = cfg.variant is Variant.OP2
    n, code = 0, _kernel.RUNNING
    while n < cfg.max_iters:
        stop = min((n // cfg.record_every + 1) * cfg.record_every, cfg.max_iters)
        n, code = _kernel.run(
            z, tables.counts, tables.offsets, tables.utilities, tables.act, tables.rest, op2,
            cfg.schedule.a0, cfg.schedule.beta, n, stop, cfg.tol_objective, cfg.tol_move, guard,
        )
        if code == _kernel.NONFINITE:
            raise DivergenceError(n, "non-finite objective or gradient; the step size is too large")
        if code == _kernel.DIVERGED:
            raise DivergenceError(n, f"objective exceeded {DIVERGENCE_FACTOR:g} times its initial value")
        if code != _kernel.RUNNING:
            break
        if n % cfg.record_every == 0 and n != traj.iters[-1]:
            traj.record(game, n, z, cfg.variant)
    if traj.iters[-1] != n:
        traj.record(game, n, z, cfg.variant)
    reason = {
        _kernel.OBJECTIVE_TOL: StopReason.OBJECTIVE_TOL,
        _kernel.MOVE_TOL: StopReason.MOVE_TOL,
        _kernel.RUNNING: StopReason.MAX_ITERS,
    }[code]
    final = SolvePoint.from_flat(game, z)
    return SolveResult(
        final=final,
        objective=objective_value(game, final, cfg.variant),
        iterations_used=n,
        stop_reason=reason,
        ne_residual=ne_residual(game, final.pi),
        trajectory=traj,
        seed=seed,
        attempt=attempt,
    )


def solve(game: Game, cfg: SolverConfig | None = None) -> SolveResult:
    """Run the solver, restarting from fresh seeds until a run meets the objective tolerance.

    Returns the attempt with the lowest final objective.
    """
    cfg = cfg or SolverConfig()
    tables = _kernel.Tables(game)
    best = None
    for attempt in range(cfg.restarts + 1):
        res = _solve_once(game, cfg, tables, restart_seed(cfg.seed, attempt), attempt)
        if best is None or res.objective.total < best.objective.total:
            best = res
        if res.stop_reason is StopReason.OBJECTIVE_TOL:
            break
    return best


def certify(game: Game, result: SolveResult, eps: float, delta: float = 1e-6) -> Certification:
    if result.ne_residual <= eps and result.objective.total <= eps**2:
        return Certification.NASH_PROFILE
    variant = result.objective.variant
    if result.ne_residual > eps and gradient_mapping_norm(game, result.final, variant, delta) <= eps:
        return Certification.PARTIAL_OPTIMUM_ONLY
    return Certification.UNCONVERGED


def profile_rows(game: Game, pi) -> list[list[float]]:
    return [b.tolist() for b in as_profile(game, pi)]
