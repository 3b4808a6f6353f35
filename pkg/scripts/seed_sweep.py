"""Solve every catalog game over a range of seeds and tabulate the outcomes.

    python3 scripts/seed_sweep.py --seeds 10 --variant op1
"""

import argparse
import time

from nashpgd.catalog import KEYS, builtin, distance_to_equilibria
from nashpgd.objectives import Variant
from nashpgd.solver import SolverConfig, StepSchedule, certify, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--games", nargs="+", choices=KEYS, default=list(KEYS))
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--variant", choices=[v.value for v in Variant], default="op1")
    ap.add_argument("--a0", type=float, default=StepSchedule().a0)
    ap.add_argument("--beta", type=float, default=StepSchedule().beta)
    ap.add_argument("--max-iters", type=int, default=SolverConfig().max_iters)
    args = ap.parse_args()

    print(f"{'game':<12} {'seed':>4} {'stop':<14} {'iters':>7} {'total':>10} {'ne_res':>10} {'dist':>9} "
          f"{'verdict':<22} {'sec':>6}")
    for key in args.games:
        named = builtin(key)
        for seed in range(args.seeds):
            cfg = SolverConfig(variant=args.variant, schedule=StepSchedule(args.a0, args.beta),
                               max_iters=args.max_iters, seed=seed)
            t0 = time.perf_counter()
            res = solve(named.game, cfg)
            dt = time.perf_counter() - t0
            print(f"{key:<12} {seed:>4} {res.stop_reason.value:<14} {res.iterations_used:>7} "
                  f"{res.objective.total:>10.2e} {res.ne_residual:>10.2e} "
                  f"{distance_to_equilibria(named, res.final.pi):>9.2e} "
                  f"{certify(named.game, res, 1e-3).value:<22} {dt:>6.2f}")


if __name__ == "__main__":
    main()
