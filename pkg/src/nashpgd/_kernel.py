"""Compiled inner loop of the projected gradient solver.

Mirrors ``objectives.grad_total`` and ``projection.project_simplex`` on flat
arrays with precomputed index tables, so a solve runs at a few microseconds
per iteration instead of paying numpy call overhead on tiny tensors. The
numpy implementations stay the reference; tests pin the two together.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .game import Game

RUNNING, OBJECTIVE_TOL, MOVE_TOL, NONFINITE, DIVERGED = 0, 1, 2, 3, 4


class Tables:
    """Index tables for one game: ``act[i, a]`` is player i's action in joint index a,
    ``rest[i, a]`` the flat index of the opponents' actions."""

    def __init__(self, game: Game):
        n, m2 = game.num_players, game.num_joint
        idx = np.array(np.unravel_index(np.arange(m2), game.action_counts), dtype=np.int64).reshape(n, m2)
        self.act = np.ascontiguousarray(idx)
        self.rest = np.zeros((n, m2), dtype=np.int64)
        for i in range(n):
            others = [k for k in range(n) if k != i]
            if others:
                self.rest[i] = np.ravel_multi_index(
                    tuple(idx[k] for k in others), tuple(game.action_counts[k] for k in others)
                )
        self.counts = np.asarray(game.action_counts, dtype=np.int64)
        self.offsets = np.asarray(game.offsets, dtype=np.int64)
        self.utilities = np.ascontiguousarray(game.utilities)


@nb.njit(cache=True)
def _project(v, out):
    n = v.shape[0]
    u = -np.sort(-v)
    css = 0.0
    tau = 0.0
    for k in range(n):
        css += u[k]
        t = (css - 1.0) / (k + 1)
        if u[k] - t > 0.0:
            tau = t
    total = 0.0
    support = 0
    for k in range(n):
        x = v[k] - tau
        if x > 0.0:
            out[k] = x
            total += x
            support += 1
        else:
            out[k] = 0.0
    resid = total - 1.0
    if resid != 0.0 and support > 0:
        shift = resid / support
        for k in range(n):
            if out[k] > 0.0:
                out[k] = max(out[k] - shift, 0.0)


@nb.njit(cache=True)
def objective_and_gradient(z, counts, offsets, utilities, act, rest, op2, grad):
    """Fill ``grad`` with the variant's total gradient at flat ``z``; return ``(f, penalty)``."""
    n = counts.shape[0]
    m2 = utilities.shape[1]
    m1 = offsets[n]
    grad[:] = 0.0
    f = 0.0
    pen = 0.0
    for i in range(n):
        m = counts[i]
        o = offsets[i]
        kk = m2 // m
        s = np.zeros(kk)
        t = np.zeros(kk)
        w = np.zeros(kk)
        q = np.zeros(kk)
        v = np.zeros(m)
        for a in range(m2):
            s[rest[i, a]] += z[m1 + a]
        base = 0.0
        for a in range(m2):
            k = rest[i, a]
            j = act[i, a]
            pij = z[o + j]
            r = z[m1 + a] - pij * s[k]
            f += r * r
            grad[o + j] -= 2.0 * r * s[k]
            grad[m1 + a] += 2.0 * r
            t[k] += r * pij
            v[j] += utilities[i, a] * s[k]
            base += utilities[i, a] * z[m1 + a]
        if op2:
            base = 0.0
            for j in range(m):
                base += z[o + j] * v[j]
        tot = 0.0
        gain = np.empty(m)
        for j in range(m):
            g = v[j] - base
            gain[j] = g if g > 0.0 else 0.0
            tot += gain[j]
            pen += gain[j] * gain[j]
        for a in range(m2):
            k = rest[i, a]
            j = act[i, a]
            w[k] += gain[j] * utilities[i, a]
            if op2:
                q[k] += z[o + j] * utilities[i, a]
        for a in range(m2):
            k = rest[i, a]
            grad[m1 + a] -= 2.0 * t[k]
            if op2:
                grad[m1 + a] += 2.0 * (w[k] - tot * q[k])
            else:
                grad[m1 + a] += 2.0 * (w[k] - tot * utilities[i, a])
        if op2:
            for j in range(m):
                grad[o + j] -= 2.0 * v[j] * tot
    return f, pen


@nb.njit(cache=True)
def run(z, counts, offsets, utilities, act, rest, op2, a0, beta, n_start, n_stop, tol_objective, tol_move, guard):
    """Iterate ``z <- H(z - a(n) grad)`` in place for ``n`` in ``[n_start, n_stop)``.

    Returns ``(n, code)``: ``n`` is the index of the current iterate when the
    loop ended and ``code`` one of the module-level stop codes.
    """
    d = z.shape[0]
    nb_blocks = counts.shape[0] + 1
    grad = np.empty(d)
    y = np.empty(d)
    out = np.empty(d)
    for n in range(n_start, n_stop):
        f, pen = objective_and_gradient(z, counts, offsets, utilities, act, rest, op2, grad)
        total = f + pen
        if not np.isfinite(total):
            return n, NONFINITE
        if total <= tol_objective:
            return n, OBJECTIVE_TOL
        if total > guard:
            return n, DIVERGED
        a = a0 / (1.0 + beta * n)
        for k in range(d):
            y[k] = z[k] - a * grad[k]
            if not np.isfinite(y[k]):
                return n, NONFINITE
        for b in range(nb_blocks):
            lo = offsets[b] if b < nb_blocks - 1 else offsets[nb_blocks - 1]
            hi = offsets[b + 1] if b < nb_blocks - 1 else d
            _project(y[lo:hi], out[lo:hi])
        move = 0.0
        for k in range(d):
            move += (out[k] - z[k]) ** 2
            z[k] = out[k]
        if np.sqrt(move) / a <= tol_move:
            return n + 1, MOVE_TOL
    return n_stop, RUNNING
