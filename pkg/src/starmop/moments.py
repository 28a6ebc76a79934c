"""Markov function of the second measure and the moment families.

g(w) is the Cauchy-type transform of the second measure pushed through the
cube map,

    g(w) = integral over (a, b) of s2(-u) / (w + u^3) du,

so f(z) = z^2 g(z^3) is the function whose jump across the second star
drives the second orthogonality.  The linear systems for the polynomials
consume six moment families: with e = 0, 2, 4 for A, B, C,

    <fam>(k)   = 3 * integral s1(u) u^(3k+e) du,
    <fam>_f(k) = 3 * integral s1(u) u^(3k+e+3) g(u^3) du,

i.e. the f-variants carry one extra power of tau = u^3 times g(tau).
"""
from __future__ import annotations

from mpmath import mp, mpf, mpmathify

from .errors import SingularityError
from .quadrature import StarRules

# family id -> (base exponent, uses g factor)
FAMILIES = {
    "A": (0, False), "B": (2, False), "C": (4, False),
    "A_f": (3, True), "B_f": (5, True), "C_f": (7, True),
}


class MomentService:
    """Per-configuration moment cache.

    Rules and caches are keyed by the live mpmath precision so that a
    one-shot precision escalation in the polynomial solver transparently
    recomputes everything at the higher precision.
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self._rules = {}
        self._gv = {}
        self._moments = {}

    def rules(self):
        r = self._rules.get(mp.prec)
        if r is None:
            r = self._rules[mp.prec] = StarRules(self.cfg)
        return r

    # ---------------- g and f ----------------

    def g(self, w, half=False):
        """g(w); raises SingularityError too close to the branch cut
        [-b^3, -a^3] where the integrand blows up."""
        w = mpmathify(w)
        cfg = self.cfg
        x, y = mp.re(w), mp.im(w)
        if -cfg.b3 <= x <= -cfg.a3:
            dist = abs(y)
        else:
            dist = min(abs(w + cfg.b3), abs(w + cfg.a3))
        if dist < mpf("1e-6") * (cfg.b3 - cfg.a3):
            raise SingularityError(f"g evaluated at {w}: distance {dist} "
                                   "to the cut [-b^3, -a^3] is below the guard")
        r = self.rules()
        xs, ws, sv = (r.x2h, r.w2h, r.s2vh) if half else (r.x2, r.w2, r.s2v)
        return mp.fsum(W * s / (w + u ** 3) for u, W, s in zip(xs, ws, sv))

    def f(self, z):
        """f(z) = z^2 g(z^3)."""
        z = mpmathify(z)
        if z == 0:
            return mp.mpf(0) * z  # stays real/complex like the input
        return z ** 2 * self.g(z ** 3)

    def _g_nodes(self, half):
        """g at the cube of every first-star quadrature node (cached)."""
        key = (mp.prec, half)
        vals = self._gv.get(key)
        if vals is None:
            r = self.rules()
            xs = r.x1h if half else r.x1
            vals = self._gv[key] = [self.g(u ** 3, half=half) for u in xs]
        return vals

    # ---------------- moment families ----------------

    def moment(self, fam, k, half=False):
        key = (fam, int(k), bool(half), mp.prec)
        v = self._moments.get(key)
        if v is not None:
            return v
        try:
            e, useg = FAMILIES[fam]
        except KeyError:
            raise KeyError(f"unknown moment family {fam!r}; "
                           f"expected one of {sorted(FAMILIES)}") from None
        r = self.rules()
        xs, ws, sv = (r.x1h, r.w1h, r.s1vh) if half else (r.x1, r.w1, r.s1v)
        p = e + 3 * int(k)
        if useg:
            gv = self._g_nodes(half)
            v = 3 * mp.fsum(w * s * u ** p * gw for u, w, s, gw in zip(xs, ws, sv, gv))
        else:
            v = 3 * mp.fsum(w * s * u ** p for u, w, s in zip(xs, ws, sv))
        self._moments[key] = v
        return v

    def moment_error(self, fam, k):
        """A-posteriori quadrature error proxy: |full rule - half rule|."""
        return abs(self.moment(fam, k) - self.moment(fam, k, half=True))

    def hankel(self, fam, size=3, k0=0):
        """Hankel determinant det[ moment(fam, k0+i+j) ]_{i,j < size}."""
        m = mp.matrix(size, size)
        for i in range(size):
            for j in range(size):
                m[i, j] = self.moment(fam, k0 + i + j)
        return mp.det(m)
