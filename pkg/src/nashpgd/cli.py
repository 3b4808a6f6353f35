"""Command-line front end.

    nashpgd run    (--game PATH | --builtin KEY) [solver flags] [--out DIR]
    nashpgd verify (--game PATH | --builtin KEY) --profile PATH [--eps EPS]

``run`` writes ``trajectory.csv`` and ``manifest.json`` into ``--out`` and exits
0 (Nash profile), 2 (partial optimum only) or 3 (unconverged or diverged).
``verify`` exits 0 iff the profile is an ``eps``-Nash equilibrium. Input
errors exit 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import KEYS, builtin
from .equilibria import ce_residual, cce_residual, is_nash_profile, ne_residual
from .game import Game, GameError, SolvePoint, as_profile, load_game, on_simplex, product_distribution
from .objectives import Variant
from .solver import (
    Certification,
    DivergenceError,
    SolveResult,
    SolverConfig,
    StepSchedule,
    Trajectory,
    certify,
    solve,
)

SCHEMA_VERSION = 1
PROFILE_TOL = 1e-9

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL, EXIT_UNCONVERGED = 0, 1, 2, 3
_EXIT_FOR = {
    Certification.NASH_PROFILE: EXIT_OK,
    Certification.PARTIAL_OPTIMUM_ONLY: EXIT_PARTIAL,
    Certification.UNCONVERGED: EXIT_UNCONVERGED,
}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_header(game: Game, with_p: bool) -> list[str]:
    cols = ["iter", "total", "f", "penalty", "ne_residual"]
    cols += [f"pi_{i}_{j}" for i, m in enumerate(game.action_counts) for j in range(m)]
    if with_p:
        cols += [f"p_{a}" for a in range(game.num_joint)]
    return cols


def write_trajectory_csv(game: Game, traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(trajectory_header(game, traj.p is not None))
        for k, n in enumerate(traj.iters):
            row = [str(n)] + [fmt(v[k]) for v in (traj.total, traj.f, traj.penalty, traj.ne_residual)]
            row += [fmt(x) for x in traj.pi[k]]
            if traj.p is not None:
                row += [fmt(x) for x in traj.p[k]]
            w.writerow(row)


def _config_dict(cfg: SolverConfig) -> dict:
    d = asdict(cfg)
    d["variant"] = cfg.variant.value
    return d


def build_manifest(game: Game, source: dict, cfg: SolverConfig, result: SolveResult,
                   verdict: Certification, eps: float, duration: float) -> dict:
    p = product_distribution(game, result.final.pi)
    obj = result.objective
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "game": {**source, "fingerprint": game.fingerprint(), "actions": list(game.action_counts)},
        "config": _config_dict(cfg),
        "attempt": result.attempt,
        "attempt_seed": result.seed,
        "wall_clock_seconds": duration,
        "stop_reason": result.stop_reason.value,
        "iterations_used": result.iterations_used,
        "objective": {"total": obj.total, "f": obj.f, "c1": obj.c1, "b": obj.b},
        "residuals": {
            "ne": result.ne_residual,
            "ce": ce_residual(game, p),
            "cce": cce_residual(game, p),
        },
        "certification": {"verdict": verdict.value, "eps": eps},
        "final_pi": [b.tolist() for b in result.final.pi],
    }


def _add_game_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--game", type=Path, help="game JSON file")
    src.add_argument("--builtin", choices=KEYS, help="built-in benchmark game")


def _load(args) -> tuple[Game, dict]:
    if args.builtin is not None:
        return builtin(args.builtin).game, {"builtin": args.builtin}
    return load_game(args.game), {"path": str(args.game)}


def make_parser() -> argparse.ArgumentParser:
    defaults = SolverConfig()
    parser = argparse.ArgumentParser(prog="nashpgd", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a game and write trajectory.csv and manifest.json")
    _add_game_args(run)
    run.add_argument("--seed", type=int, default=defaults.seed)
    run.add_argument("--max-iters", type=int, default=defaults.max_iters)
    run.add_argument("--tol", type=float, default=defaults.tol_objective, help="objective tolerance")
    run.add_argument("--tol-move", type=float, default=defaults.tol_move)
    run.add_argument("--step-a0", type=float, default=defaults.schedule.a0)
    run.add_argument("--step-beta", type=float, default=defaults.schedule.beta)
    run.add_argument("--variant", choices=[v.value for v in Variant], default=defaults.variant.value)
    run.add_argument("--restarts", type=int, default=defaults.restarts)
    run.add_argument("--record-every", type=int, default=defaults.record_every)
    run.add_argument("--record-p", action="store_true")
    run.add_argument("--out", type=Path, default=Path("runs"))
    run.add_argument("--eps", type=float, default=1e-3, help="certification tolerance")

    ver = sub.add_parser("verify", help="check whether a mixed profile is a Nash equilibrium")
    _add_game_args(ver)
    ver.add_argument("--profile", type=Path, required=True, help='JSON file {"pi": [[...], ...]}')
    ver.add_argument("--eps", type=float, default=1e-6)
    return parser


def cmd_run(args) -> int:
    try:
        game, source = _load(args)
        cfg = SolverConfig(
            variant=Variant(args.variant),
            schedule=StepSchedule(args.step_a0, args.step_beta),
            max_iters=args.max_iters,
            tol_objective=args.tol,
            tol_move=args.tol_move,
            record_every=args.record_every,
            record_p=args.record_p,
            seed=args.seed,
            restarts=args.restarts,
        )
    except (GameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        result = solve(game, cfg)
    except DivergenceError as exc:
        print(f"diverged at iteration {exc.iteration}: {exc}", file=sys.stderr)
        return EXIT_UNCONVERGED
    duration = time.perf_counter() - t0
    verdict = certify(game, result, args.eps)
    args.out.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(game, result.trajectory, args.out / "trajectory.csv")
    manifest = build_manifest(game, source, cfg, result, verdict, args.eps, duration)
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(
        f"stop={result.stop_reason.value} iters={result.iterations_used} "
        f"objective={result.objective.total:.3e} ne_residual={result.ne_residual:.3e} "
        f"verdict={verdict.value}"
    )
    return _EXIT_FOR[verdict]


def _read_profile(game: Game, path: Path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise GameError(f"cannot read profile file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GameError(f"profile file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("pi"), list):
        raise GameError("profile file must hold an object with a 'pi' list")
    try:
        pi = as_profile(game, data["pi"])
    except (TypeError, ValueError) as exc:
        raise GameError(f"field 'pi' does not fit the game: {exc}") from None
    for i, b in enumerate(pi):
        if not on_simplex(b, PROFILE_TOL):
            raise GameError(f"field 'pi'[{i}] is not a probability vector")
    return pi


def cmd_verify(args) -> int:
    try:
        game, _ = _load(args)
        pi = _read_profile(game, args.profile)
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    p = product_distribution(game, pi)
    ok = is_nash_profile(game, SolvePoint(pi, p), args.eps)
    print(f"ne_residual={fmt(ne_residual(game, pi))}")
    print(f"ce_residual={fmt(ce_residual(game, p))}")
    print(f"cce_residual={fmt(cce_residual(game, p))}")
    print(f"nash={'yes' if ok else 'no'} (eps={args.eps:g})")
    return EXIT_OK if ok else EXIT_INPUT


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    np.seterr(all="ignore")
    if args.command == "run":
        return cmd_run(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
