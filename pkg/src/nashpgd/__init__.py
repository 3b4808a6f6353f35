"""Nash equilibria of normal-form games by projected gradient descent on a biconvex penalty."""

__version__ = "0.1.0"

from .catalog import builtin
from .equilibria import ce_residual, cce_residual, grid_oracle, is_nash_profile, ne_residual
from .game import Game, GameError, SolvePoint, load_game, product_distribution
from .objectives import Variant, eval_b, eval_c1, eval_c2, eval_f, grad_total
from .projection import project_block, project_simplex
from .solver import Certification, SolverConfig, StepSchedule, certify, solve

__all__ = [
    "Certification", "Game", "GameError", "SolvePoint", "SolverConfig", "StepSchedule", "Variant",
    "builtin", "ce_residual", "cce_residual", "certify", "eval_b", "eval_c1", "eval_c2", "eval_f",
    "grad_total", "grid_oracle", "is_nash_profile", "load_game", "ne_residual", "product_distribution",
    "project_block", "project_simplex", "solve",
]
