"""Finite-n estimates of the limit objects, with convergence diagnostics.

Everything here works in the reduced plane (the polynomials P_n, P_{n,2}
in tau = z^3): ratio sequences along residue classes mod 6, tail
estimates of the recurrence-coefficient limits a^(i), the thirteen
algebraic relations those limits satisfy, nth-root and norm sequences,
and Kolmogorov distances of zero histograms against the equilibrium
measure.  No extrapolation is applied anywhere — plain tail values with
last-increment error proxies, so every reported accuracy is honest.
"""
from __future__ import annotations

import numpy as np
from mpmath import mp, mpf, mpc, mpmathify

from .mop_core import peval

K_TAIL = 9  # tail index used for limit estimates (n = 6*9+5 = 59 <= n_max)


def test_points(cfg):
    """Fixed config-derived test set: 4 real points outside both intervals
    and 4 complex points well off the cuts (reduced plane)."""
    al3, a3, b3 = cfg.alpha3, cfg.a3, cfg.b3
    reals = [-b3 - al3, -a3 / 2, mpf("1.8") * al3, al3 + b3]
    cplx = [al3 * mpc(2, mpf("0.6")), al3 * mpc(-3, 1),
            al3 * mpc(-1, -2), al3 * mpc(mpf("0.5"), 2)]
    return [mpmathify(x) for x in reals] + cplx


def h_points(cfg):
    """Eight z-plane points off both stars for the h_n limit checks."""
    base = [mpc(2, 0), mpc(-3, 1), mpc(mpf("0.5"), 2), mpc(mpf("-0.2"), mpf("0.9")),
            mpc(mpf("1.5"), mpf("-0.7")), mpc(mpf("-1.1"), mpf("-1.3")),
            mpc(3, 2), mpc(mpf("0.8"), mpf("0.5"))]
    return [cfg.alpha * z for z in base]


class AsymptoticsSuite:
    """Read-only consumer of the finished polynomial/second-kind tables."""

    def __init__(self, cfg, ptable, skt, rec):
        self.cfg = cfg
        self.ptable = ptable
        self.skt = skt
        self.rec = rec

    # ---------------- recurrence-coefficient limits ----------------

    def k_max(self, i):
        return (self.cfg.n_max - i) // 6

    def a_sequence(self, i):
        return [self.rec.a[6 * k + i] for k in range(1, self.k_max(i) + 1)]

    def estimate_limit_a(self, i, k_tail=K_TAIL):
        """Tail estimate of lim a_{6k+i}: mean of the last three terms at
        k <= k_tail, with the last tail increment as the error proxy.
        Returns (value, proxy, increments_decreasing)."""
        kt = min(k_tail, self.k_max(i))
        seq = [self.rec.a[6 * k + i] for k in range(1, kt + 1)]
        value = mp.fsum(seq[-3:]) / 3
        inc = [abs(seq[j + 1] - seq[j]) for j in range(len(seq) - 1)]
        proxy = inc[-1]
        monotone = all(inc[j + 1] <= inc[j] * mpf("1.05") for j in range(len(inc) - 4, len(inc) - 1))
        return value, proxy, monotone

    def a_hat(self, k_tail=K_TAIL):
        return [self.estimate_limit_a(i, k_tail)[0] for i in range(6)]

    # ---------------- ratio sequences ----------------

    def ratio_sequence(self, i, family, z, k_max=None):
        """P_{6k+i+1}(z)/P_{6k+i}(z) (family 1) or the same for the
        second-kind reduced polynomials (family 2), k = 1..k_max."""
        z = mpmathify(z)
        km = self.k_max(i) if k_max is None else k_max
        ev = self.ptable.eval_P if family == 1 else self.skt.eval_P2
        out = []
        for k in range(1, km + 1):
            n = 6 * k + i
            den = ev(n, z)
            if abs(den) < mpf(10) ** (-mp.prec // 2):
                # z hit a zero of the denominator: nudge it off and note it
                z = z + self.cfg.alpha3 * mpf("1e-3") * mpc(1, 1)
                den = ev(n, z)
            out.append(ev(n + 1, z) / den)
        return out

    def ratio_estimate(self, i, family, z):
        """(last ratio, |last - previous| proxy, deviations decreasing)."""
        seq = self.ratio_sequence(i, family, z)
        proxy = abs(seq[-1] - seq[-2])
        diffs = [abs(seq[j + 1] - seq[j]) for j in range(len(seq) - 1)]
        tail = diffs[-3:]
        dec = all(tail[j + 1] <= tail[j] * mpf("1.05") for j in range(len(tail) - 1))
        return seq[-1], proxy, dec

    def ratio_error_profile(self, i, family, z, target, last=4):
        """Relative errors of the last few ratio iterates against a target
        value, plus whether they decrease (5% slack)."""
        seq = self.ratio_sequence(i, family, z)
        errs = [abs(s - target) / abs(target) for s in seq[-last:]]
        dec = all(errs[j + 1] <= errs[j] * mpf("1.05") for j in range(len(errs) - 1))
        return errs, dec

    # ---------------- the thirteen limit relations ----------------

    def relation_residuals(self, zs=None):
        """Residuals of the thirteen algebraic relations among the limits,
        evaluated with the finite-k ratio estimates (largest k) and the
        a-tail estimates.  Returns {name: max relative residual over zs}."""
        zs = test_points(self.cfg) if zs is None else zs
        ah = self.a_hat()

        def rel(x, y):
            return abs(x - y) / max(abs(x), abs(y), mpf("1e-30"))

        out = {}
        for z in zs:
            F1 = [self.ratio_estimate(i, 1, z)[0] for i in range(6)]
            F2 = [self.ratio_estimate(i, 2, z)[0] for i in range(6)]
            res = {
                "F1_2_eq_z_F1_0": rel(F1[2], z * F1[0]),
                "F1_5_eq_z_F1_3": rel(F1[5], z * F1[3]),
                "F1_prod_01_34": rel(F1[0] * F1[1], F1[3] * F1[4]),
                "F1_prod_12_45": rel(F1[1] * F1[2], F1[4] * F1[5]),
                "F1_prod_23_50": rel(F1[2] * F1[3], F1[5] * F1[0]),
                "one_minus_F1_30": rel((1 - F1[3]) / (1 - F1[0]), ah[3] / ah[0]),
                "one_minus_F1_41": rel((1 - F1[4]) / (1 - F1[1]), ah[4] / ah[1]),
                "z_minus_F1_52": rel((z - F1[5]) / (z - F1[2]), ah[5] / ah[2]),
                "F2_0_eq_F2_2": rel(F2[0], F2[2]),
                "F2_3_eq_F2_5": rel(F2[3], F2[5]),
                "F2_prod_01_34": rel(F2[0] * F2[1], F2[3] * F2[4]),
                "F2_prod_12_45": rel(F2[1] * F2[2], F2[4] * F2[5]),
                "F2_prod_23_50": rel(F2[2] * F2[3], F2[5] * F2[0]),
            }
            for k, v in res.items():
                out[k] = max(out.get(k, mpf(0)), v)
        return out

    def distinctness(self, z=None):
        """At z (default 2*alpha^3): minimal pairwise separation of the six
        F1 estimates vs 10x the worst convergence proxy."""
        z = 2 * self.cfg.alpha3 if z is None else z
        ests, proxies = [], []
        for i in range(6):
            v, p, _ = self.ratio_estimate(i, 1, z)
            ests.append(v)
            proxies.append(p)
        sep = min(abs(ests[i] - ests[j]) for i in range(6) for j in range(i + 1, 6))
        return sep, max(proxies)

    # ---------------- nth-root and norm sequences ----------------

    def nth_root_P(self, z, n):
        return abs(self.ptable.eval_P(n, z)) ** (mpf(1) / (n // 3))

    def nth_root_P2(self, z, n):
        return abs(self.skt.eval_P2(n, z)) ** (mpf(1) / (n // 6))

    def norm_trend(self, family, j, k_hi=None):
        """Norm-based sequences converging to exp(-omega_bar_1)
        (family 1: (int P^2 dnu)^(1/4k) = K^(-1/(2k))) and to
        exp(-4 omega_bar_2) (family 2: (int P2^2 dnu2)^(1/2k) = (K/K2)^(1/k))."""
        k_hi = self.k_max(j) if k_hi is None else k_hi
        out = []
        for k in range(1, k_hi + 1):
            n = 6 * k + j
            if family == 1:
                out.append(self.skt.K1(n) ** (-mpf(1) / (2 * k)))
            else:
                out.append((self.skt.K1(n) / self.skt.K2(n)) ** (mpf(1) / k))
        return out

    def kappa_ratio_sequence(self, i, family):
        """kappa_{6k+i+1}/kappa_{6k+i} (family 1) or the same for the
        second-family leading coefficients; limits are sqrt(omega_j^(i))."""
        out = []
        for k in range(1, self.k_max(i) + 1):
            n = 6 * k + i
            if n + 1 > self.skt.n_top:
                break
            if family == 1:
                out.append(self.skt.K1(n + 1) / self.skt.K1(n))
            else:
                k2a = self.skt.K2(n) / self.skt.K1(n)
                k2b = self.skt.K2(n + 1) / self.skt.K1(n + 1)
                out.append(k2b / k2a)
        return out

    # ---------------- zero histograms ----------------

    def zero_pushforward(self, n):
        """Radial zero positions on the star (the cube-root coordinate map
        applied to the tau-plane roots)."""
        return [mp.cbrt(t) for t in self.ptable.roots(n)]

    def ks_distance(self, n, measure, family=1):
        """Kolmogorov distance between the normalised zero-counting measure
        of P_n (or P_{n,2}) and a discrete equilibrium measure; both live on
        the same segment of the reduced variable."""
        roots = self.ptable.roots(n) if family == 1 else self.skt.p2_roots(n)
        xs = np.sort([float(t) for t in roots])
        m = len(xs)
        if m == 0:
            return 1.0
        cdf_nodes = measure.nodes
        cdf_w = np.cumsum(measure.weights)
        idx = np.searchsorted(cdf_nodes, xs, side="right")
        F = np.where(idx > 0, cdf_w[np.minimum(idx - 1, len(cdf_w) - 1)], 0.0)
        ks = max(max(abs(F[j] - j / m), abs(F[j] - (j + 1) / m)) for j in range(m))
        return float(ks)
