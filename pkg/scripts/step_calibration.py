"""Sweep the step-decay rate beta and report, per game, how many seeds meet the acceptance thresholds.

This is the experiment behind the default beta = 1e-4: with faster decay the
infinite2x2 iterate stalls short of the equilibrium family.

    python3 scripts/step_calibration.py --betas 1e-3 3e-4 1e-4
"""

import argparse

import numpy as np

from nashpgd.catalog import KEYS, builtin, distance_to_equilibria
from nashpgd.solver import SolverConfig, StepSchedule, solve


def passes(named, res) -> bool:
    dist = distance_to_equilibria(named, res.final.pi)
    if named.family is not None:
        return res.ne_residual <= 1e-3 and dist <= 1e-2
    return dist <= 1e-2 and res.objective.total <= 1e-6


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--betas", type=float, nargs="+", default=[1e-3, 3e-4, 1e-4, 3e-5])
    ap.add_argument("--a0", type=float, default=0.5)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    print(f"{'beta':>8} " + " ".join(f"{k:>24}" for k in KEYS))
    for beta in args.betas:
        cells = []
        for key in KEYS:
            named = builtin(key)
            results = [solve(named.game, SolverConfig(schedule=StepSchedule(args.a0, beta), seed=s))
                       for s in range(args.seeds)]
            ok = sum(passes(named, r) for r in results)
            med = np.median([r.ne_residual for r in results])
            cells.append(f"{ok:>2}/{args.seeds} ne_res~{med:.1e}")
        print(f"{beta:>8.0e} " + " ".join(f"{c:>24}" for c in cells))


if __name__ == "__main__":
    main()
