"""Functions of the second kind, their star zeros, and the two norms.

For each n the reduced second-kind transform is

    Phi_n(w) = 3 * integral s1(u) * kern(u) * P_n(u^3) / (u^3 - w) du,

with kern = 1 for n = 0 mod 3 and kern = u^3 otherwise; the full function
on the plane is Psi_n(z) = z^(e_r) Phi_n(z^3) with e_r = (2, 0, 1)[n mod 3].
Psi_n vanishes on the second star at points whose cubes are the real zeros
of Phi_n in (-b^3, -a^3); those cubes are the roots of the monic reduced
polynomial P_{n,2}, and Q_{n,2}(z) = P_{n,2}(z^3) carries the second-kind
zero counting.

K1 / K2 are the two orthonormalisation constants; `h` is the normalised
weighted transform whose n -> oo limit is an explicit algebraic function.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from mpmath import mp, mpf, mpmathify

from .errors import HypothesisViolation, NonConvergenceError, SingularityError
from .mop_core import peval, thread_count

E_POW = (2, 0, 1)          # z-prefactor exponent of Psi_n by n mod 3
D_POW = (1, 3, 2)          # radial divisor exponent in the nu2 density


def count_expected(n):
    """Zeros of Phi_n in (-b^3, -a^3): floor(n/6), plus one when n = 4 mod 6."""
    return n // 6 + (1 if n % 6 == 4 else 0)


class SecondKindTable:
    """Per-configuration cache of Phi zeros, norms, and h evaluations."""

    def __init__(self, cfg, ms, ptable, n_top=None):
        self.cfg = cfg
        self.ms = ms
        self.ptable = ptable
        self.n_top = cfg.n_max + 1 if n_top is None else n_top
        self._p2 = {}
        self._k1 = {}
        self._k2 = {}
        self._phi2 = {}

    # ---------------- Phi / Psi ----------------

    def _guard(self, w):
        cfg = self.cfg
        x, y = mp.re(w), mp.im(w)
        if 0 <= x <= cfg.alpha3:
            dist = abs(y)
        else:
            dist = min(abs(w), abs(w - cfg.alpha3))
        if dist < mpf("1e-6") * cfg.alpha3:
            raise SingularityError(f"second-kind transform at {w}: distance {dist} "
                                   "to the cut [0, alpha^3] is below the guard")

    def phi(self, n, w, guard=True):
        w = mpmathify(w)
        if guard:
            self._guard(w)
        r = self.ms.rules()
        c = self.ptable.P(n)
        if n % 3 == 0:
            s = mp.fsum(wt * sv * peval(c, u ** 3) / (u ** 3 - w)
                        for u, wt, sv in zip(r.x1, r.w1, r.s1v))
        else:
            s = mp.fsum(wt * sv * u ** 3 * peval(c, u ** 3) / (u ** 3 - w)
                        for u, wt, sv in zip(r.x1, r.w1, r.s1v))
        return 3 * s

    def phi_prime(self, n, w):
        r = self.ms.rules()
        c = self.ptable.P(n)
        kern = (lambda u: 1) if n % 3 == 0 else (lambda u: u ** 3)
        s = mp.fsum(wt * sv * kern(u) * peval(c, u ** 3) / (u ** 3 - w) ** 2
                    for u, wt, sv in zip(r.x1, r.w1, r.s1v))
        return 3 * s

    def phi_nodes2(self, n):
        """Phi_n evaluated at -u^3 for every full-rule node u on the second
        interval, cached; shared by the norm, orthogonality and density
        checks so each index pays for the inner quadrature once."""
        vals = self._phi2.get(n)
        if vals is None:
            r = self.ms.rules()
            vals = [self.phi(n, -u ** 3, guard=False) for u in r.x2]
            self._phi2[n] = vals
        return vals

    def psi(self, n, z):
        z = mpmathify(z)
        return z ** E_POW[n % 3] * self.phi(n, z ** 3)

    # ---------------- zeros on the second star ----------------

    def _scan(self, n, m):
        a3, b3 = self.cfg.a3, self.cfg.b3
        grid = [-b3 + (b3 - a3) * (j + mpf("0.5")) / m for j in range(m)]
        vals = [self.phi(n, w, guard=False) for w in grid]
        roots = []
        for j in range(m - 1):
            if (vals[j] > 0) != (vals[j + 1] > 0):
                lo, hi, flo = grid[j], grid[j + 1], vals[j]
                for _ in range(80):
                    mid = (lo + hi) / 2
                    fm = self.phi(n, mid, guard=False)
                    if fm == 0:
                        lo = hi = mid
                        break
                    if (fm > 0) == (flo > 0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                x = (lo + hi) / 2
                # Newton polish to the working precision
                for _ in range(8):
                    fx = self.phi(n, x, guard=False)
                    dfx = self.phi_prime(n, x)
                    step = fx / dfx
                    x -= step
                    if abs(step) < mpf(2) ** (-mp.prec) * max(abs(x), mpf(1)):
                        break
                roots.append(x)
        return sorted(roots)

    def p2_roots(self, n):
        """Zeros of Phi_n in (-b^3, -a^3) — the cubes of the second-star
        zeros of Psi_n.  Scans a sign grid (64 cells per expected zero),
        refines x4 once if the count comes out wrong, then fails loudly."""
        r = self._p2.get(n)
        if r is not None:
            return r
        want = count_expected(n)
        if want == 0:
            self._p2[n] = []
            return []
        m = 64 * (n // 6 + 1)
        roots = self._scan(n, m)
        if len(roots) != want:
            roots = self._scan(n, 4 * m)
        if len(roots) != want:
            raise NonConvergenceError(
                f"Phi_{n}: found {len(roots)} zeros in (-b^3, -a^3), expected {want} "
                f"(grid refined to {4 * m} cells)")
        gap_tol = mpf("1e-20") * (self.cfg.b3 - self.cfg.a3)
        for u, v in zip(roots, roots[1:]):
            if v - u < gap_tol:
                raise HypothesisViolation(
                    f"Phi_{n}: zero gap {mp.nstr(v - u, 4)} below 1e-20 * |interval| — "
                    "multiple zero on the second star")
        self._p2[n] = roots
        return roots

    def eval_P2(self, n, w):
        v = mpmathify(w) ** 0
        for rt in self.p2_roots(n):
            v *= (w - rt)
        return v

    def eval_Q2(self, n, z):
        """Q_{n,2}(z) = P_{n,2}(z^3) (no z-prefactor in any residue class)."""
        z = mpmathify(z)
        return self.eval_P2(n, z ** 3)

    def build(self):
        ns = range(self.n_top + 1)
        workers = thread_count()
        if workers > 1:
            self.ms.rules()
            with ThreadPoolExecutor(max_workers=workers) as ex:
                for n, roots in zip(ns, ex.map(self.p2_roots, ns)):
                    pass
        else:
            for n in ns:
                self.p2_roots(n)
        return self

    # ---------------- norms ----------------

    def K1(self, n):
        """First normalisation: (3 * integral s1 kern P_n^2/P_{n,2} du)^(-1/2)."""
        v = self._k1.get(n)
        if v is not None:
            return v
        r = self.ms.rules()
        c = self.ptable.P(n)
        rr = n % 3
        s = mpf(0)
        for u, wt, sv in zip(r.x1, r.w1, r.s1v):
            u3 = u ** 3
            t = wt * sv * peval(c, u3) ** 2 / self.eval_P2(n, u3)
            if rr:
                t *= u3
            s += t
        if s <= 0:
            raise HypothesisViolation(f"norm integral for K1({n}) is not positive: {s}")
        v = (3 * s) ** mpf("-0.5")
        self._k1[n] = v
        return v

    def K2(self, n):
        """Second normalisation: (3 * integral s2 kern2 |P_{n,2} Phi_n| du)^(-1/2)
        on the second star, kern2 = u^3 for n mod 3 in {0, 2} and 1 otherwise."""
        v = self._k2.get(n)
        if v is not None:
            return v
        r = self.ms.rules()
        rr = n % 3
        s = mpf(0)
        for u, wt, sv, pv in zip(r.x2, r.w2, r.s2v, self.phi_nodes2(n)):
            t = wt * sv * abs(self.eval_P2(n, -u ** 3) * pv)
            if rr in (0, 2):
                t *= u ** 3
            s += t
        if s <= 0:
            raise HypothesisViolation(f"norm integral for K2({n}) is not positive: {s}")
        v = (3 * s) ** mpf("-0.5")
        self._k2[n] = v
        return v

    def kappa(self, n):
        """Leading orthonormal coefficients (kappa_n, kappa_{n,2})."""
        return self.K1(n), self.K2(n) / self.K1(n)

    # ---------------- h and its limit ----------------

    def h(self, n, z):
        """h_n(z) = K1^2 * pre(z) * 3 * integral s1 kern (P_n^2/P_{n,2})(u^3)
        / (u^3 - z^3) du, pre = (z^2, z, z^3)[n mod 3]."""
        z = mpmathify(z)
        z3 = z ** 3
        self._guard(z3)
        r = self.ms.rules()
        c = self.ptable.P(n)
        rr = n % 3
        s = mpf(0) * z
        for u, wt, sv in zip(r.x1, r.w1, r.s1v):
            u3 = u ** 3
            t = wt * sv * peval(c, u3) ** 2 / self.eval_P2(n, u3) / (u3 - z3)
            if rr:
                t *= u3
            s += t
        pre = (z ** 2, z, z ** 3)[rr]
        return self.K1(n) ** 2 * pre * 3 * s

    def h_limit(self, n, z):
        """Algebraic large-n limit of h_n along a residue class:
        -pre(z) / (sqrt(z^3) sqrt(z^3 - alpha^3)), principal branches."""
        z = mpmathify(z)
        z3 = z ** 3
        pre = (z ** 2, z, z ** 3)[n % 3]
        return -pre / (mp.sqrt(z3) * mp.sqrt(z3 - self.cfg.alpha3))

    # ---------------- structural checks ----------------

    def sign_law(self, n):
        """Constant sign of Phi_n/P_{n,2} on (-b^3, -a^3); the law says it
        equals (-1)^floor(n/3).  Samples every gap between consecutive
        zeros plus five fixed interval fractions.  Returns
        (ok, expected_sign)."""
        a3, b3 = self.cfg.a3, self.cfg.b3
        expected = 1 if (n // 3) % 2 == 0 else -1
        roots = self.p2_roots(n)
        cuts = [-b3] + roots + [-a3]
        probes = [(lo + hi) / 2 for lo, hi in zip(cuts, cuts[1:])]
        width = b3 - a3
        for frac in ("0.1", "0.3", "0.5", "0.7", "0.9"):
            w = -b3 + mpf(frac) * width
            # both Phi_n and P_{n,2} vanish at the shared zeros, so skip
            # probes falling inside the 0/0 neighbourhood
            if all(abs(w - x) > mpf("1e-3") * width for x in roots):
                probes.append(w)
        ok = True
        for w in probes:
            val = self.phi(n, w, guard=False) / self.eval_P2(n, w)
            if mp.sign(val) != expected:
                ok = False
        return ok, expected

    def psi_sign(self, n):
        """Expected sign of Psi_n/Q_{n,2} on the negative real ray:
        the z-prefactor flips it exactly when n = 2 mod 3."""
        base = 1 if (n // 3) % 2 == 0 else -1
        return -base if n % 3 == 2 else base

    def ortho_residuals(self, n):
        """Relative residuals of the reduced second-star orthogonality of
        Psi_n: with p ranging over the class-dependent exponent set, each
        3 * integral u^p Phi_n(-u^3) s2(-u) du must vanish."""
        l, j = divmod(n, 6)
        if j in (0, 2, 3, 5):
            ps = [3 * k + 3 for k in range(l)]
        elif j == 1:
            ps = [3 * k for k in range(l)]
        else:
            ps = [3 * k for k in range(l + 1)]
        r = self.ms.rules()
        pvals = self.phi_nodes2(n)
        out = []
        for p in ps:
            num = mpf(0)
            den = mpf(0)
            for u, wt, sv, pv in zip(r.x2, r.w2, r.s2v, pvals):
                t = wt * sv * u ** p * pv
                num += t
                den += abs(t)
            out.append(abs(num) / den if den > 0 else abs(num))
        return out

    # ---------------- orthonormality cross-checks ----------------

    def nu1_check(self, n):
        """integral of (K1 Q_n)^2 against the first varying measure, written
        through its explicit radial density; equals 1 by normalisation."""
        r = self.ms.rules()
        c = self.ptable.P(n)
        rr = n % 3
        sigma = (0, 1, -1)[rr]
        s = mpf(0)
        for u, wt, sv in zip(r.x1, r.w1, r.s1v):
            u3 = u ** 3
            s += wt * sv * peval(c, u3) ** 2 * u ** (2 * rr + sigma) / abs(self.eval_P2(n, u3))
        return self.K1(n) ** 2 * 3 * s

    def phi_interlacing(self, n):
        """Mutual separation of second-star zeros for consecutive indices:
        exactly one zero of Phi_{n+1} strictly between consecutive zeros of
        Phi_n and vice versa, and no common zeros.  Vacuously true while
        either index carries fewer than two zeros."""
        u = self.p2_roots(n)
        v = self.p2_roots(n + 1)
        ok = True
        for lo, hi in zip(u, u[1:]):
            if sum(1 for x in v if lo < x < hi) != 1:
                ok = False
        for lo, hi in zip(v, v[1:]):
            if sum(1 for x in u if lo < x < hi) != 1:
                ok = False
        if u and v:
            gap = min(abs(x - y) for x in u for y in v)
            if gap < mpf("1e-20") * (self.cfg.b3 - self.cfg.a3):
                ok = False
        return ok

    def nu2_check(self, n):
        """integral of (kappa_{n,2} Q_{n,2})^2 against the second varying
        measure with its density expressed through h_n — an independent
        route (first-star data) to the second-star normalisation."""
        r = self.ms.rules()
        c = self.ptable.P(n)
        d = D_POW[n % 3]
        k2rel = self.K2(n) / self.K1(n)
        s = mpf(0)
        for u, wt, sv in zip(r.x2, r.w2, r.s2v):
            w = -u ** 3
            dens = abs(self.h(n, -u)) * sv * 3 * u ** 2 / (u ** d * abs(peval(c, w)))
            s += wt * dens * self.eval_P2(n, w) ** 2
        return k2rel ** 2 * s
