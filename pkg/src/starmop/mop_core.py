"""Multiple orthogonal polynomials on the first star.

Symmetry reduction: the degree-n monic polynomial on the star factors as
Q_n(z) = z^(n mod 3) * P_n(z^3) with P_n monic of degree floor(n/3), and
the two orthogonality packages collapse to moment conditions on P_n in
tau = z^3.  Each residue class n mod 6 selects its own index ranges of the
A / A_f moment families (`condition_rows`), giving a square linear system
for the non-leading coefficients of P_n.

The nearest-neighbour recurrence on the star is z Q_n = Q_{n+1} + a_n Q_{n-2};
`RecurrenceTable` computes a_n both by coefficient comparison and by the
ratio of orthogonality normalisations, and records the disagreement.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from mpmath import mp, mpf, mpmathify

from .errors import HypothesisViolation, NonConvergenceError


def thread_count():
    """Worker count for the per-index stages, from MOP_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("MOP_THREADS", "1")))
    except ValueError:
        return 1


def peval(coeffs, x):
    """Evaluate a low-to-high coefficient list by Horner."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def condition_rows(n):
    """Moment rows determining P_n: list of (family, shift) pairs.

    Row (fam, k) imposes  sum_j c_j * mom(fam, k + j) = 0  over the full
    monic coefficient vector c of P_n.  The shifts depend on n mod 6; the
    total row count always equals deg P_n = floor(n/3).
    """
    l, j = divmod(n, 6)
    if j == 0:
        rows = [("A", k) for k in range(0, l)] + [("A_f", k) for k in range(0, l)]
    elif j == 1:
        rows = [("A", k) for k in range(1, l + 1)] + [("A_f", k) for k in range(0, l)]
    elif j == 2:
        rows = [("A", k) for k in range(1, l + 1)] + [("A_f", k) for k in range(1, l + 1)]
    elif j == 3:
        rows = [("A", k) for k in range(0, l + 1)] + [("A_f", k) for k in range(0, l)]
    elif j == 4:
        rows = [("A", k) for k in range(1, l + 1)] + [("A_f", k) for k in range(0, l + 1)]
    else:
        rows = [("A", k) for k in range(1, l + 2)] + [("A_f", k) for k in range(1, l + 1)]
    assert len(rows) == n // 3
    return rows


def _solve_P(ms, n):
    """One linear solve for P_n at the current precision.
    Returns (coeffs low-to-high incl. leading 1, max relative residual)."""
    deg = n // 3
    if deg == 0:
        return [mpf(1)], mpf(0)
    rows = condition_rows(n)
    M = mp.matrix(deg, deg)
    rhs = mp.matrix(deg, 1)
    for r, (fam, k) in enumerate(rows):
        for j in range(deg):
            M[r, j] = ms.moment(fam, k + j)
        rhs[r] = -ms.moment(fam, k + deg)
    sol = mp.lu_solve(M, rhs)
    coeffs = [sol[j] for j in range(deg)] + [mpf(1)]
    worst = mpf(0)
    for r, (fam, k) in enumerate(rows):
        resid = mp.fsum(coeffs[j] * ms.moment(fam, k + j) for j in range(deg + 1))
        scale = max(abs(ms.moment(fam, k + j)) for j in range(deg + 1))
        worst = max(worst, abs(resid) / scale)
    return coeffs, worst


def compute_P(ms, n):
    """Coefficients of P_n (low to high, monic).

    The moment systems are badly conditioned, so the solve always runs at
    twice the working precision and the result is rounded back — this
    keeps downstream identities (recurrence defects, route agreements)
    far below the working rounding level.  The residual is checked at the
    lifted precision; on failure the lift is doubled once more, and a
    second failure raises NonConvergenceError — it is never silently
    accepted.
    """
    base = mp.prec
    try:
        worst = tol = None
        for lift in (2, 4):
            mp.prec = lift * base
            tol = mpf(10) ** (-(mp.prec // 4))
            coeffs, worst = _solve_P(ms, n)
            if worst <= tol:
                mp.prec = base
                return [+c for c in coeffs]
        raise NonConvergenceError(
            f"linear system for P_{n}: residual {mp.nstr(worst, 6)} exceeds "
            f"{mp.nstr(tol, 6)} even after lifting the precision to {mp.prec} bits")
    finally:
        mp.prec = base


class PolyTable:
    """P_0 .. P_{n_top} for one configuration, with cached roots."""

    def __init__(self, cfg, ms, n_top=None):
        self.cfg = cfg
        self.ms = ms
        self.n_top = cfg.n_max + 1 if n_top is None else n_top
        self.coeffs = {}
        self._roots = {}

    def build(self):
        ns = range(self.n_top + 1)
        workers = thread_count()
        if workers > 1:
            # warm the shared moment cache single-threaded first so the
            # workers only read it; the solver runs lifted, so warm the
            # lifted-precision table
            top = self.n_top
            base = mp.prec
            try:
                mp.prec = 2 * base
                for fam in ("A", "A_f"):
                    for k in range(top // 3 + top // 6 + 4):
                        self.ms.moment(fam, k)
            finally:
                mp.prec = base
            with ThreadPoolExecutor(max_workers=workers) as ex:
                for n, c in zip(ns, ex.map(lambda n: compute_P(self.ms, n), ns)):
                    self.coeffs[n] = c
        else:
            for n in ns:
                self.coeffs[n] = compute_P(self.ms, n)
        return self

    def P(self, n):
        c = self.coeffs.get(n)
        if c is None:
            c = self.coeffs[n] = compute_P(self.ms, n)
        return c

    def eval_P(self, n, tau):
        return peval(self.P(n), tau)

    def eval_Q(self, n, z):
        """Q_n(z) = z^(n mod 3) P_n(z^3)."""
        z = mpmathify(z)
        return z ** (n % 3) * peval(self.P(n), z ** 3)

    def roots(self, n):
        """Roots of P_n in tau, validated against the support hypotheses:
        real, simple, inside (0, alpha^3)."""
        r = self._roots.get(n)
        if r is not None:
            return r
        c = self.P(n)
        deg = len(c) - 1
        if deg == 0:
            self._roots[n] = []
            return []
        raw = mp.polyroots(list(reversed(c)), maxsteps=120, extraprec=80)
        alpha3 = self.cfg.alpha3
        imag_tol = mpf(10) ** (-(mp.prec // 4)) * alpha3
        roots = []
        for z in raw:
            if abs(mp.im(z)) > imag_tol:
                raise HypothesisViolation(
                    f"P_{n}: root {z} is not real (|Im| > {mp.nstr(imag_tol, 4)})")
            roots.append(mp.re(z))
        roots.sort()
        for x in roots:
            if not (0 < x < alpha3):
                raise HypothesisViolation(
                    f"P_{n}: root {mp.nstr(x, 12)} outside (0, {mp.nstr(alpha3, 12)})")
        for u, v in zip(roots, roots[1:]):
            if v - u < mpf("1e-20") * alpha3:
                raise HypothesisViolation(
                    f"P_{n}: root gap {mp.nstr(v - u, 4)} below 1e-20 * alpha^3 — "
                    "multiple root on the first star")
        self._roots[n] = roots
        return roots

    def star_zeros(self, n):
        """Zeros of Q_n on the star (excluding the origin): for each root
        tau of P_n the three cube roots tau^(1/3) * exp(2*pi*i*j/3)."""
        om = mp.exp(2j * mp.pi / 3)
        out = []
        for t in self.roots(n):
            r = mp.cbrt(t)
            out.extend([r, r * om, r * om ** 2])
        return out


def check_interlacing(table, n):
    """Directed interlacing of the roots of P_n and P_{n+1}.

    For n mod 3 in {0, 1} the degrees match and the pattern is
    u_1 < v_1 < u_2 < v_2 < ... (u = roots of P_n); for n mod 3 == 2 the
    degree goes up by one and the new polynomial leads: v_1 < u_1 < v_2 < ...
    Returns the minimal signed margin (> 0 means the pattern holds strictly).
    """
    u = table.roots(n)
    v = table.roots(n + 1)
    r = n % 3
    if r in (0, 1):
        if len(u) != len(v):
            raise HypothesisViolation(f"interlacing n={n}: degree mismatch {len(u)} vs {len(v)}")
        merged = []
        for a_, b_ in zip(u, v):
            merged.extend([a_, b_])
    else:
        if len(v) != len(u) + 1:
            raise HypothesisViolation(f"interlacing n={n}: degree mismatch {len(u)} vs {len(v)}")
        merged = [v[0]]
        for a_, b_ in zip(u, v[1:]):
            merged.extend([a_, b_])
    margin = min((b_ - a_ for a_, b_ in zip(merged, merged[1:])), default=mpf(1))
    return margin


class RecurrenceTable:
    """a_n for 2 <= n <= n_max, by two independent routes.

    Coefficient route: in z Q_n = Q_{n+1} + a_n Q_{n-2} compare reduced
    polynomials; a_n is the coefficient of (P_n - P_{n+1}) — respectively
    (tau P_n - P_{n+1}) for n = 2 mod 3 — at degree deg P_{n-2}.

    Integral route: a_n = N(n) / N(n-2) where N(m) is the first
    orthogonality functional that the conditions on P_m leave non-zero,
    applied to P_m itself.
    """

    def __init__(self, table):
        self.table = table
        self.ms = table.ms
        self.a = {}
        self.a_integral = {}
        self.route_gap = {}

    @staticmethod
    def _n_row(m):
        l, j = divmod(m, 6)
        return {0: ("A", l), 1: ("A_f", l), 2: ("A", l + 1),
                3: ("A_f", l), 4: ("A", l + 1), 5: ("A_f", l + 1)}[j]

    def _N(self, m):
        fam, k = self._n_row(m)
        c = self.table.P(m)
        return mp.fsum(c[j] * self.ms.moment(fam, k + j) for j in range(len(c)))

    def a_coeff(self, n):
        Pn = self.table.P(n)
        Pn1 = self.table.P(n + 1)
        if n % 3 == 2:
            Pn = [mpf(0)] + list(Pn)  # multiply by tau
        if len(Pn) < len(Pn1):
            Pn = Pn + [mpf(0)] * (len(Pn1) - len(Pn))
        elif len(Pn1) < len(Pn):
            Pn1 = Pn1 + [mpf(0)] * (len(Pn) - len(Pn1))
        diff = [x - y for x, y in zip(Pn, Pn1)]
        return diff[(n - 2) // 3]

    def a_int(self, n):
        return self._N(n) / self._N(n - 2)

    def build(self, n_lo=2, n_hi=None):
        n_hi = self.table.cfg.n_max if n_hi is None else n_hi
        for n in range(n_lo, n_hi + 1):
            ac = self.a_coeff(n)
            ai = self.a_int(n)
            self.a[n] = ac
            self.a_integral[n] = ai
            self.route_gap[n] = abs(ac - ai) / max(abs(ac), mpf("1e-50"))
            if ac <= 0:
                raise HypothesisViolation(f"recurrence coefficient a_{n} = "
                                          f"{mp.nstr(ac, 12)} is not positive")
        return self

    def residual(self, n, z):
        """|z Q_n(z) - Q_{n+1}(z) - a_n Q_{n-2}(z)| at a point."""
        t = self.table
        return abs(z * t.eval_Q(n, z) - t.eval_Q(n + 1, z) - self.a[n] * t.eval_Q(n - 2, z))

    def residual_coeffs(self, n):
        """Max-abs coefficient of the reduced recurrence defect
        tau^{[n=2 mod 3]} P_n - P_{n+1} - a_n P_{n-2}; exact arithmetic
        would give the zero polynomial."""
        Pn = list(self.table.P(n))
        Pn1 = list(self.table.P(n + 1))
        Pm = list(self.table.P(n - 2))
        if n % 3 == 2:
            Pn = [mpf(0)] + Pn
        size = max(len(Pn), len(Pn1), len(Pm))
        Pn += [mpf(0)] * (size - len(Pn))
        Pn1 += [mpf(0)] * (size - len(Pn1))
        Pm += [mpf(0)] * (size - len(Pm))
        an = self.a[n]
        return max(abs(x - y - an * z) for x, y, z in zip(Pn, Pn1, Pm))
