"""High-precision Gauss-Legendre quadrature.

Nodes are seeded from scipy's double-precision rule and polished with a
Newton iteration on the Legendre three-term recurrence at the working
mpmath precision, so a rule is accurate to the full precision in use.

Every measure integral in the package is written in the radial variable u
(x = u on the first star, t = -u on the second), where the integrands are
polynomials times the weight; for integer weight exponents Gauss-Legendre
is exact up to degree 2*npts - 1, and for fractional exponents the
half-rule comparison in `MomentService.moment_error` gives an honest
a-posteriori estimate.
"""
from __future__ import annotations

from mpmath import mp, mpf

from scipy.special import roots_legendre

_rule_cache = {}


def gauss_legendre(npts, lo, hi):
    """Nodes and weights of the npts-point Gauss-Legendre rule on [lo, hi],
    at the current mpmath precision.  Returns (nodes, weights) as lists."""
    key = (npts, mp.prec, mp.nstr(mpf(lo), 30), mp.nstr(mpf(hi), 30))
    if key in _rule_cache:
        return _rule_cache[key]

    seeds, _ = roots_legendre(npts)
    nodes, weights = [], []
    for s in seeds:
        x = mpf(repr(float(s)))
        # Newton on P_n(x) = 0 using the recurrence; quadratic convergence,
        # 60 iterations is far more than enough at any practical precision.
        for _ in range(60):
            p0, p1 = mpf(1), x
            for k in range(2, npts + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = npts * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mpf(2) ** (-mp.prec - 8):
                break
        p0, p1 = mpf(1), x
        for k in range(2, npts + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = npts * (x * p1 - p0) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))

    lo, hi = mpf(lo), mpf(hi)
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    mapped = ([mid + half * x for x in nodes], [half * w for w in weights])
    _rule_cache[key] = mapped
    return mapped


class StarRules:
    """Quadrature rules and weight values for one configuration.

    rule1 lives on u in [0, alpha] (first star radius), rule2 on
    u in [a, b] (second star radius, t = -u).  Each comes with a half-size
    companion used for error estimation.  s1v/s2v are the weight values at
    the nodes; interior Gauss nodes never touch the endpoints, so the
    weight evaluation never hits the (possibly singular) edges.
    """

    def __init__(self, cfg):
        from .config import eval_s1, eval_s2

        self.cfg = cfg
        n = cfg.quad_points
        self.x1, self.w1 = gauss_legendre(n, 0, cfg.alpha)
        self.x2, self.w2 = gauss_legendre(n, cfg.a_low, cfg.b_high)
        self.x1h, self.w1h = gauss_legendre(max(n // 2, 16), 0, cfg.alpha)
        self.x2h, self.w2h = gauss_legendre(max(n // 2, 16), cfg.a_low, cfg.b_high)
        self.s1v = [eval_s1(cfg, u) for u in self.x1]
        self.s2v = [eval_s2(cfg, -u) for u in self.x2]
        self.s1vh = [eval_s1(cfg, u) for u in self.x1h]
        self.s2vh = [eval_s2(cfg, -u) for u in self.x2h]

    def int1(self, f, half=False):
        """integral over (0, alpha) of f(u) s1(u) du."""
        xs, ws, sv = (self.x1h, self.w1h, self.s1vh) if half else (self.x1, self.w1, self.s1v)
        return mp.fsum(w * s * f(u) for u, w, s in zip(xs, ws, sv))

    def int2(self, f, half=False):
        """integral over (a, b) of f(u) s2(-u) du  (i.e. the second-star
        integral pulled back to positive radius)."""
        xs, ws, sv = (self.x2h, self.w2h, self.s2vh) if half else (self.x2, self.w2, self.s2v)
        return mp.fsum(w * s * f(u) for u, w, s in zip(xs, ws, sv))
