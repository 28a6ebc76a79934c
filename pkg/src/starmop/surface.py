"""The three-sheeted limit surface and its closed-form objects.

Everything here depends only on the geometry (alpha, a, b) through the two
combinations lam = 2 b^3/a^3 - 1 and mu = 2 alpha^3/a^3 + 1.  The
parameters (beta, gamma) in (-1, 1) solve a pair of polynomial equations;
from them we assemble the rational map H and the coefficients of the cubic

    w^3 + (p1 z + p0) w^2 + (q1 z + q0) w + r0 = 0

whose three branches psi_0, psi_1, psi_2 are the sheets of the surface.
Branch values anywhere in the cut plane are obtained by analytic
continuation along straight segments from a reference point on the far
positive axis (`branches`), with adaptive step control and permutation
matching at each step.

The normalised branches feed the closed-form limit ratio functions F1t/F2t
(one per residue class mod 6), the boundary laws on the two cuts, and the
consistency condition that pins the recurrence-coefficient limits.
"""
from __future__ import annotations

import itertools

from mpmath import mp, mpf, mpc, mpmathify

from .errors import NonConvergenceError, SingularityError

PERMS = list(itertools.permutations(range(3)))


def _E1(B, G, lam, mu):
    return 2 * (B + G) * (3 - B * G - B - G) * (3 - B * G + B + G) + (lam - mu) * (B - G) ** 3


def _E2(B, G, lam, mu):
    return (lam + mu) ** 2 * (B - G) ** 6 \
        - 4 * (3 + B * G) ** 3 * (1 - B * G) * (2 + B + G) * (2 - B - G)


def _newton2(B, G, lam, mu, steps=80):
    """Damped two-dimensional Newton iteration on (E1, E2)."""
    for _ in range(steps):
        f1, f2 = _E1(B, G, lam, mu), _E2(B, G, lam, mu)
        h = mpf(2) ** (-mp.prec // 2)
        j11 = (_E1(B + h, G, lam, mu) - _E1(B - h, G, lam, mu)) / (2 * h)
        j12 = (_E1(B, G + h, lam, mu) - _E1(B, G - h, lam, mu)) / (2 * h)
        j21 = (_E2(B + h, G, lam, mu) - _E2(B - h, G, lam, mu)) / (2 * h)
        j22 = (_E2(B, G + h, lam, mu) - _E2(B, G - h, lam, mu)) / (2 * h)
        det = j11 * j22 - j12 * j21
        if det == 0:
            return None
        dB = (f1 * j22 - f2 * j12) / det
        dG = (j11 * f2 - j21 * f1) / det
        lamd = mpf(1)
        while lamd > mpf(2) ** -30:
            Bn, Gn = B - lamd * dB, G - lamd * dG
            if abs(_E1(Bn, Gn, lam, mu)) + abs(_E2(Bn, Gn, lam, mu)) < abs(f1) + abs(f2):
                break
            lamd /= 2
        B, G = B - lamd * dB, G - lamd * dG
        if abs(dB) + abs(dG) < mpf(2) ** (-mp.prec + 16):
            break
    return B, G


def solve_beta_gamma(lam, mu):
    """The unique solution of E1 = E2 = 0 with -1 < gamma < beta < 1,
    found by a 16 x 16 multistart of the damped Newton iteration."""
    sols = []
    for i in range(16):
        for j in range(16):
            G0 = mpf(-1) + 2 * (j + mpf("0.5")) / 16
            B0 = mpf(-1) + 2 * (i + mpf("0.5")) / 16
            if not G0 < B0:
                continue
            out = _newton2(B0, G0, lam, mu)
            if out is None:
                continue
            B, G = out
            if not (-1 < G < B < 1):
                continue
            if abs(_E1(B, G, lam, mu)) > mpf(10) ** -50 or abs(_E2(B, G, lam, mu)) > mpf(10) ** -50:
                continue
            if not any(abs(B - s[0]) + abs(G - s[1]) < mpf(10) ** -30 for s in sols):
                sols.append((B, G))
    if len(sols) != 1:
        raise NonConvergenceError(
            f"surface parameter search found {len(sols)} constrained roots "
            f"(lam={mp.nstr(lam, 10)}, mu={mp.nstr(mu, 10)}); expected exactly one")
    return sols[0]


_model_cache = {}


class SurfaceModel:
    """Solved surface for one geometry, with branch continuation."""

    def __init__(self, cfg):
        self.cfg = cfg
        lam, mu = cfg.lam, cfg.mu
        self.lam, self.mu = lam, mu
        a3, alpha3, b3 = cfg.a3, cfg.alpha3, cfg.b3
        self.beta, self.gamma = solve_beta_gamma(lam, mu)
        beta, gamma = self.beta, self.gamma

        s = beta + gamma
        q = (beta - gamma) ** 2 / (1 - beta * gamma) - 3
        disc = mp.sqrt(s * s - 4 * q)
        self.c, self.d = (-s - disc) / 2, (-s + disc) / 2
        if not (self.c < -1 < 1 < self.d):
            raise NonConvergenceError(
                f"auxiliary pair (c, d) = ({mp.nstr(self.c, 10)}, {mp.nstr(self.d, 10)}) "
                "failed the ordering c < -1 < 1 < d")

        self.h = (beta + gamma) / 4 * (2 * beta * gamma - (beta - gamma) ** 2 / (1 - beta * gamma))
        self.Th1 = (1 - self.c) * (1 - self.d) * (1 - beta) * (1 - gamma) / 4
        self.Th2 = (1 + self.c) * (1 + self.d) * (1 + beta) * (1 + gamma) / 4
        self.HB = self.H(beta)

        self.p1 = 2 / a3
        self.p0 = 1 + (3 + self.h + self.Th2 - self.Th1) / self.HB
        self.q1 = 4 / (a3 * self.HB)
        self.q0 = 2 / self.HB + (2 + 2 * self.h + self.Th2 - 3 * self.Th1) / self.HB ** 2
        self.r0 = -2 * self.Th1 / self.HB ** 3

        self.c0 = -2 / self.HB                    # psi_0 value at infinity
        self.Bc = a3 * self.Th1 / (2 * self.HB ** 2)  # psi_2 ~ Bc / z
        self.Cprod = 2 * self.Th1 / self.HB ** 3      # psi_0 psi_1 psi_2, constant in z
        self.delta_a = -a3 * self.Th2 / (4 * self.HB)

        # reference point and branch labels on the far positive axis
        zref = alpha3 + b3 + 10
        rts = self.roots_at(zref)
        l1 = min(rts, key=lambda w: abs(w - (-2 * zref / a3)))
        l2 = min(rts, key=lambda w: abs(w - self.Bc / zref))
        rest = [w for w in rts if w is not l1 and w is not l2]
        if len(rest) != 1:
            raise NonConvergenceError("could not separate the three sheets at the "
                                      "reference point by their asymptotic profiles")
        self.zref = mpc(zref)
        self.ref_labels = [rest[0], l1, l2]

    @classmethod
    def build(cls, cfg):
        key = (mp.nstr(cfg.lam, 40), mp.nstr(cfg.mu, 40), cfg.precision_bits)
        m = _model_cache.get(key)
        if m is None:
            m = _model_cache[key] = cls(cfg)
        return m

    # ---------------- algebraic layer ----------------

    def H(self, z):
        return self.h + z + self.Th1 * z / (1 - z) + self.Th2 * z / (1 + z)

    def cubic_coeffs(self, z):
        return [mpf(1), self.p1 * z + self.p0, self.q1 * z + self.q0, self.r0]

    def cubic_residual(self, z, w):
        p, q, r = self.p1 * z + self.p0, self.q1 * z + self.q0, self.r0
        return w ** 3 + p * w ** 2 + q * w + r

    def discriminant(self, z):
        p, q, r = self.p1 * z + self.p0, self.q1 * z + self.q0, self.r0
        return 18 * p * q * r - 4 * p ** 3 * r + p * p * q * q - 4 * q ** 3 - 27 * r * r

    def roots_at(self, z):
        return mp.polyroots(self.cubic_coeffs(z), maxsteps=120, extraprec=80)

    # ---------------- analytic continuation ----------------

    def walk(self, z0, labels, z1):
        """Continue the labelled root triple from z0 to z1 along the segment,
        with adaptive steps; a step is accepted only when every continued
        root is unambiguously closest to exactly one new root."""
        cur = list(labels)
        pos = mpc(z0)
        z1 = mpc(z1)
        step = z1 - pos
        while pos != z1:
            trial = pos + step
            if abs(trial - pos) >= abs(z1 - pos):
                trial = z1
            rts = self.roots_at(trial)
            best, bcost = None, None
            for pm in PERMS:
                cost = sum(abs(cur[i] - rts[pm[i]]) for i in range(3))
                if bcost is None or cost < bcost:
                    best, bcost = pm, cost
            ok = True
            for i in range(3):
                d1 = abs(cur[i] - rts[best[i]])
                d2 = min(abs(cur[i] - rts[j]) for j in range(3) if j != best[i])
                if not d1 < mpf("0.5") * d2:
                    ok = False
                    break
            if ok or abs(step) < mpf(10) ** -30:
                cur = [rts[best[i]] for i in range(3)]
                pos = trial
                step *= mpf("1.7")
            else:
                step /= 2
        return cur

    def branches(self, z):
        """(psi_0, psi_1, psi_2) at z, continued from the reference point.
        Points off the axis are reached around a rectangle that clears both
        cuts; real z > alpha^3 directly along the axis; the far field by
        asymptotic matching.  Branch points and label-ambiguous points are
        refused rather than guessed."""
        z = mpc(z)
        scale = self.cfg.alpha3 + self.cfg.b3
        for e in (mpf(0), self.cfg.alpha3, -self.cfg.a3, -self.cfg.b3):
            if abs(z - e) < mpf(10) ** -10 * scale:
                raise SingularityError(f"branch evaluation at {z}: too close to the "
                                       f"branch point {mp.nstr(e, 8)}")
        if abs(z) > 100 * abs(self.zref):
            # far field: the asymptotic profiles separate the sheets directly
            rts = self.roots_at(z)
            l1 = min(rts, key=lambda w: abs(w - (-2 * z / self.cfg.a3)))
            l2 = min(rts, key=lambda w: abs(w - self.Bc / z))
            rest = [w for w in rts if w is not l1 and w is not l2]
            out = [rest[0], l1, l2]
        elif mp.im(z) == 0 and mp.re(z) > self.cfg.alpha3:
            out = self.walk(self.zref, self.ref_labels, z)
        else:
            S = max(mpf(2), 2 * abs(mp.im(z)))
            if mp.im(z) < 0:
                S = -S
            cur = self.walk(self.zref, self.ref_labels, mpc(self.zref.real, S))
            cur = self.walk(mpc(self.zref.real, S), cur, mpc(mp.re(z), S))
            out = self.walk(mpc(mp.re(z), S), cur, z)
        if min(abs(out[i] - out[j]) for i in range(3) for j in range(i + 1, 3)) < mpf(10) ** -20:
            raise SingularityError(f"branch labels ambiguous at {z}: two sheet values "
                                   "coincide to 1e-20")
        return out

    def tilde(self, ps):
        """Normalised branches (psi0/c0, -a^3 psi1/2, psi2/Bc): the first
        tends to 1 at infinity, the second grows like z, the third decays
        like 1/z — the explicit z factors in F1/F2 absorb the growth."""
        return ps[0] / self.c0, -self.cfg.a3 * ps[1] / 2, ps[2] / self.Bc

    def branch_row(self, grid, eps_im):
        """Normalised branch triples along a horizontal row z = x + i*eps,
        continued point-to-point so no step re-crosses a cut."""
        out = []
        cur = self.branches(mpc(grid[0], eps_im))
        out.append(cur)
        for x_prev, x in zip(grid, grid[1:]):
            cur = self.walk(mpc(x_prev, eps_im), cur, mpc(x, eps_im))
            out.append(cur)
        return [self.tilde(c) for c in out]

    # ---------------- limit objects ----------------

    def afam(self, A0):
        """The one-parameter family of recurrence-limit quadruples
        (A_0, A_1, A_3, A_4) compatible with the surface constants."""
        d = self.delta_a
        A4 = d ** 2 * self.cfg.a3 / (self.HB * A0 ** 2)
        return A0, A4 - d, A0 - d, A4

    @staticmethod
    def omega1(A0, A1, A3, A4):
        """Mass-ratio constants per residue class (classes 2 and 5 share
        the values of 0 and 3)."""
        v = [(A4 - A1) / (A0 * A4), A4 / (A4 - A1), None,
             A0 / (A0 - A3), (A0 - A3) / A0 ** 2, None]
        v[2] = v[0]
        v[5] = v[3]
        return tuple(v)

    def F1(self, i, z, ts, A):
        """Closed-form limit of the polynomial ratio along residue class i;
        ts = tilde(branches(z)), A = limit quadruple."""
        A0, A1, A3, A4 = A
        t0, t1, t2 = ts
        if i == 0:
            return (A0 - A3) / (A0 * t0 - A3)
        if i == 1:
            return (A4 - A1) * t0 / (A4 * t0 - A1)
        if i == 2:
            return z * (A0 - A3) / (A0 * t0 - A3)
        if i == 3:
            return (A0 - A3) * t0 / (A0 * t0 - A3)
        if i == 4:
            return (A4 - A1) / (A4 * t0 - A1)
        if i == 5:
            return z * (A0 - A3) * t0 / (A0 * t0 - A3)
        raise ValueError(f"residue class {i} out of range")

    def F2(self, i, z, ts, A):
        """Closed-form limit of the second-kind polynomial ratio."""
        A0, A1, A3, A4 = A
        t0, t1, t2 = ts
        w = self.omega1(A0, A1, A3, A4)
        if i in (0, 2):
            return A0 * (A0 - A3) * z * t0 * t2 / ((A0 - A3 * w[3] * t0 * t2 / w[0]) * (A0 * t0 - A3))
        if i in (3, 5):
            return A0 * (A0 - A3) * z * t0 / ((A0 - A3 * w[3] * t0 * t2 / w[0]) * (A0 * t0 - A3))
        E = (w[1] - 1) / w[4]
        if i == 1:
            return (A4 - A1) / (t2 * (A4 * t0 - A1) * (t1 - E))
        if i == 4:
            return (A4 - A1) / ((A4 * t0 - A1) * (t1 - E))
        raise ValueError(f"residue class {i} out of range")

    # ---------------- pinning the recurrence limits ----------------

    def pin_a(self, n_scan=80):
        """Fix the free parameter of `afam` by requiring the second-family
        boundary law to be constant along its cut, for two residue classes
        simultaneously (a single class admits a spurious root)."""
        eps = mpf(10) ** -20
        a3, b3 = self.cfg.a3, self.cfg.b3
        xpts = [-b3 + (b3 - a3) * mpf("0.25"), -b3 + (b3 - a3) * mpf("0.75")]
        ts = [self.tilde(self.branches(mpc(x, eps))) for x in xpts]

        def law(l, x, A, t):
            F2v = self.F2(l, x, t, A)
            F1v = self.F1(l, x, t, A)
            fac = 1 / abs(x) if l in (0, 3) else (abs(x) if l in (1, 4) else 1)
            return abs(F2v) ** 2 * fac / abs(F1v)

        def defect(A0, l):
            A = self.afam(A0)
            return law(l, xpts[0], A, ts[0]) - law(l, xpts[1], A, ts[1])

        d = self.delta_a
        lo = d * mpf("1.05")
        hi = mp.sqrt(d * self.cfg.a3 / self.HB) * mpf("0.999")
        grid = [lo + (hi - lo) * i / (n_scan - 1) for i in range(n_scan)]
        cands = []
        for l in (0, 1):
            fv = [defect(s, l) for s in grid]
            for i in range(n_scan - 1):
                if (fv[i] > 0) != (fv[i + 1] > 0):
                    a_, b_, fa = grid[i], grid[i + 1], fv[i]
                    for _ in range(mp.prec + 40):
                        m_ = (a_ + b_) / 2
                        fm = defect(m_, l)
                        if fm == 0:
                            a_ = b_ = m_
                            break
                        if (fm > 0) == (fa > 0):
                            a_, fa = m_, fm
                        else:
                            b_ = m_
                    cands.append((a_ + b_) / 2)
        if not cands:
            raise NonConvergenceError("recurrence-limit pinning: no sign change of the "
                                      "boundary-law defect inside the admissible bracket")
        A0 = min(cands, key=lambda t: abs(defect(t, 0)) + abs(defect(t, 1)))
        worst = max(abs(defect(A0, 0)), abs(defect(A0, 1)))
        if worst > mpf(10) ** -20:
            raise NonConvergenceError(
                f"recurrence-limit pinning: best candidate leaves a defect of "
                f"{mp.nstr(worst, 6)} in one of the two classes")
        return self.afam(A0)

    # ---------------- boundary laws ----------------

    def boundary_laws(self, A, n_grid=20, eps=None):
        """Evaluate all 12 boundary laws on midpoint grids of the two cuts.

        Returns {('F1'|'F2', class): (mean, variance, values)}.  The F1 laws
        on (0, alpha^3) have constant 1/omega1[class]; the reciprocals of
        the F2 means define the second-family constants omega2[class].
        """
        eps = mpf(10) ** -8 if eps is None else eps
        alpha3, a3, b3 = self.cfg.alpha3, self.cfg.a3, self.cfg.b3
        grid1 = [alpha3 * (j + mpf("0.5")) / n_grid for j in range(n_grid)]
        grid2 = [-b3 + (b3 - a3) * (j + mpf("0.5")) / n_grid for j in range(n_grid)]
        row1 = self.branch_row(grid1, eps)
        row2 = self.branch_row(grid2, eps)
        out = {}
        for l in range(6):
            vals1 = []
            for x, ts in zip(grid1, row1):
                F1v = self.F1(l, mpc(x, eps), ts, A)
                F2v = self.F2(l, mpc(x, eps), ts, A)
                fac = x if l in (0, 3) else (1 if l in (1, 4) else 1 / x)
                vals1.append(abs(F1v) ** 2 * fac / mp.re(F2v))
            m = mp.fsum(vals1) / len(vals1)
            var = mp.fsum((v - m) ** 2 for v in vals1) / len(vals1)
            out[("F1", l)] = (m, var, vals1)
            vals2 = []
            for x, ts in zip(grid2, row2):
                F1v = self.F1(l, mpc(x, eps), ts, A)
                F2v = self.F2(l, mpc(x, eps), ts, A)
                fac = 1 / abs(x) if l in (0, 3) else (abs(x) if l in (1, 4) else 1)
                vals2.append(abs(F2v) ** 2 * fac / abs(F1v))
            m2 = mp.fsum(vals2) / len(vals2)
            var2 = mp.fsum((v - m2) ** 2 for v in vals2) / len(vals2)
            out[("F2", l)] = (m2, var2, vals2)
        return out

    @staticmethod
    def omega2_from_laws(laws):
        return tuple(1 / laws[("F2", l)][0] for l in range(6))
