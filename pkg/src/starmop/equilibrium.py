"""Vector equilibrium problem for the limiting zero distributions.

Two probability measures mu_1 on [0, alpha^3] and mu_2 on [-b^3, -a^3]
minimise the quadratic logarithmic energy with interaction matrix

    M = [[1, -1/4], [-1/4, 1/4]],

i.e. E = sum_{j,k} M[jk] * I(mu_j, mu_k) with I the mutual log energy.
The solver discretises each interval on Chebyshev-distributed nodes
(diagonal of the kernel regularised by a quarter of the local spacing),
and runs a projected-gradient descent on the simplex of node weights with
backtracking line search.  Plain float64 is plenty: the extracted
constants are stable to ~1e-6 and every consumer tolerance is far looser.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def cheb_nodes(lo, hi, N):
    th = (np.arange(N) + 0.5) * np.pi / N
    x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(th)
    return np.sort(x)


def log_kernel(x, y, same):
    """-log|x - y| node matrix; on the diagonal the singularity is replaced
    by a quarter of the distance to the nearest neighbour."""
    D = np.abs(x[:, None] - y[None, :])
    if same:
        n = len(x)
        sp = np.empty(n)
        sp[1:-1] = np.minimum(x[2:] - x[1:-1], x[1:-1] - x[:-2])
        sp[0] = x[1] - x[0]
        sp[-1] = x[-1] - x[-2]
        np.fill_diagonal(D, sp / 4.0)
    return -np.log(D)


def proj_simplex(v):
    """Euclidean projection onto {w >= 0, sum w = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > (css - 1))[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


@dataclass
class DiscreteMeasure:
    interval: tuple
    nodes: np.ndarray
    weights: np.ndarray

    def potential(self, z):
        """Logarithmic potential -integral log|z - x| dmu(x)."""
        return float(-(self.weights * np.log(np.abs(complex(z) - self.nodes))).sum())

    def mass(self):
        return float(self.weights.sum())

    def support(self, thresh=None):
        """Detected support: hull of the nodes carrying non-negligible weight."""
        t = 1e-9 / len(self.weights) if thresh is None else thresh
        on = self.weights > t
        return float(self.nodes[on].min()), float(self.nodes[on].max())

    def support_mask(self, thresh=None):
        t = 1e-9 / len(self.weights) if thresh is None else thresh
        return self.weights > t


@dataclass
class EquilibriumSolution:
    measures: list
    fields: list            # W_j = sum_k M[jk] U^{mu_k} on the nodes of interval j
    energy: float
    iterations: int
    trace: list = field(repr=False)
    matrix: list = field(repr=False)

    def omega(self, j):
        """Equilibrium constant of interval j: the minimum of the
        variational field over the whole interval (equality holds on the
        support, strict inequality off it)."""
        return float(self.fields[j].min())

    def variational_error(self, j):
        """(max |W - omega|/|omega| on the support,
            max (omega - W)/|omega| off the support)."""
        w = self.measures[j].weights
        W = self.fields[j]
        om = self.omega(j)
        on = self.measures[j].support_mask()
        dev_on = float(np.abs(W[on] - om).max() / abs(om))
        off = ~on
        dev_off = float(max((om - W[off]).max() / abs(om), 0.0)) if off.any() else 0.0
        return dev_on, dev_off

    def energy_monotone(self):
        t = self.trace
        return all(t[i + 1] <= t[i] + 1e-15 * abs(t[i]) for i in range(len(t) - 1))


def solve_equilibrium(intervals, matrix, N=400, iters=6000, tol=1e-13, w0=None):
    intervals = [(float(lo), float(hi)) for lo, hi in intervals]
    m = len(intervals)
    M = [[float(matrix[j][k]) for k in range(m)] for j in range(m)]
    xs = [cheb_nodes(lo, hi, N) for lo, hi in intervals]
    L = [[log_kernel(xs[j], xs[k], j == k) for k in range(m)] for j in range(m)]
    ws = [np.asarray(w, dtype=float).copy() for w in w0] if w0 is not None \
        else [np.full(N, 1.0 / N) for _ in range(m)]

    def combined(ws):
        return [sum(M[j][k] * (L[j][k] @ ws[k]) for k in range(m)) for j in range(m)]

    def energy(ws):
        W = combined(ws)
        return sum(ws[j] @ W[j] for j in range(m))

    E = energy(ws)
    step = 1.0
    trace = [E]
    it = 0
    for it in range(iters):
        W = combined(ws)
        while True:
            new = [proj_simplex(ws[j] - 2 * step * W[j]) for j in range(m)]
            En = energy(new)
            if En <= E + 1e-15 * abs(E):
                break
            step *= 0.5
            if step < 1e-18:
                break
        if step < 1e-18:
            break
        gain = E - En
        ws, E = new, En
        step *= 1.3
        trace.append(E)
        if gain < tol * abs(E):
            break
    W = combined(ws)
    measures = [DiscreteMeasure(intervals[j], xs[j], ws[j]) for j in range(m)]
    return EquilibriumSolution(measures, W, float(E), it + 1, trace, M)


STAR_MATRIX = [[1.0, -0.25], [-0.25, 0.25]]


def solve_star_equilibrium(cfg, N=400, **kw):
    """The two-interval problem attached to a configuration."""
    intervals = [(0.0, float(cfg.alpha3)), (float(-cfg.b3), float(-cfg.a3))]
    return solve_equilibrium(intervals, STAR_MATRIX, N=N, **kw)
