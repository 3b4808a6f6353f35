"""Plot action probabilities and objective values from a trajectory.csv written by ``nashpgd run``.

    nashpgd run --builtin rps --seed 7 --out runs/rps
    python3 scripts/plot_trajectory.py runs/rps/trajectory.csv -o rps.png

Needs matplotlib (``pip install -e .[plot]``).
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], np.array(rows[1:], dtype=float)
    return {name: data[:, k] for k, name in enumerate(header)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default="trajectory.png")
    args = ap.parse_args()

    cols = load(args.csv)
    it = cols["iter"]
    fig, (ax_pi, ax_obj) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    for name, values in cols.items():
        if name.startswith("pi_"):
            _, player, action = name.split("_")
            ax_pi.plot(it, values, label=f"player {int(player) + 1}, action {int(action) + 1}")
    ax_pi.set_ylabel("probability")
    ax_pi.legend(fontsize="small", ncol=2)
    floor = 1e-18  # exact zeros would vanish from a log axis
    for name in ("total", "f", "penalty", "ne_residual"):
        ax_obj.semilogy(it, np.maximum(cols[name], floor), label=name)
    ax_obj.set_xlabel("iteration")
    ax_obj.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
