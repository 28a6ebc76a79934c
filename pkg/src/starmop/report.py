"""Artifact writers and the check battery behind the verification path.

`run_compute` builds the finite-n tables for one configuration and writes
them out as delimited text; `run_verify` additionally builds the limit
objects (algebraic surface, equilibrium problem) and runs every advertised
check, emitting a machine-readable report plus the supporting artifacts.

All numeric fields are serialised as plain decimal strings at a fixed
number of significant digits, so two runs with the same configuration
produce byte-identical files.  Wall-clock timings therefore go to the
human-readable summary only, never into the CSV/JSON artifacts.
"""

import json
import random
import time
from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .asymptotics import AsymptoticsSuite, K_TAIL, h_points, test_points
from .equilibrium import solve_star_equilibrium
from .errors import ConfigError, HypothesisViolation
from .moments import MomentService
from .mop_core import PolyTable, RecurrenceTable, check_interlacing
from .second_kind import SecondKindTable, count_expected
from .surface import SurfaceModel

DIGITS = 40


def fmt(x):
    """Fixed-precision decimal string for a real number of any flavour."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return mp.nstr(x, DIGITS)


def cfmt(z):
    """Compact complex literal `re+imj` (re-parsable by complex())."""
    z = mpc(z)
    re, im = mp.re(z), mp.im(z)
    if im == 0:
        return fmt(re)
    sign = "+" if im >= 0 else "-"
    return f"{fmt(re)}{sign}{fmt(abs(im))}j"


@dataclass
class CheckRecord:
    check_id: str
    anchor: str          # what property is being checked, in plain words
    tolerance: str
    measured: str
    passed: bool
    note: str = ""

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.note}]" if self.note else ""
        return (f"{tag}  {self.check_id}: measured {self.measured} "
                f"(tolerance {self.tolerance}){extra}")

    def as_dict(self):
        return {
            "id": self.check_id,
            "anchor": self.anchor,
            "tolerance": self.tolerance,
            "measured": self.measured,
            "passed": self.passed,
            "note": self.note,
        }


class VerificationReport:
    def __init__(self, cfg):
        self.cfg = cfg
        self.checks = []

    def add(self, check_id, anchor, tolerance, measured, passed, note=""):
        rec = CheckRecord(check_id, anchor, str(tolerance),
                          measured if isinstance(measured, str) else fmt(measured),
                          bool(passed), note)
        self.checks.append(rec)
        return rec

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def as_dict(self):
        return {
            "config": self.cfg.echo(),
            "metadata": {
                "package": "starmop",
                "n_max": self.cfg.n_max,
                "precision_bits": self.cfg.precision_bits,
                "quad_points": self.cfg.quad_points,
                "digits_emitted": DIGITS,
            },
            "counts": {"total": len(self.checks),
                       "failed": len(self.failed())},
            "passed": self.all_passed,
            "checks": [c.as_dict() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# pipeline bundle
# ---------------------------------------------------------------------------

class ComputeBundle:
    """All finite-n tables for one configuration."""

    def __init__(self, cfg):
        cfg.activate()
        self.cfg = cfg
        self.ms = MomentService(cfg)
        self.ptable = PolyTable(cfg, self.ms).build()
        self.rec = RecurrenceTable(self.ptable).build()
        self.skt = SecondKindTable(cfg, self.ms, self.ptable).build()
        self.suite = AsymptoticsSuite(cfg, self.ptable, self.skt, self.rec)


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------

def _open(outdir, name):
    return open(outdir / name, "w", encoding="utf-8", newline="\n")


def write_polys_csv(outdir, bundle):
    with _open(outdir, "polys.csv") as fh:
        fh.write("n,degree,coefficients\n")
        for n in range(bundle.cfg.n_max + 1):
            c = bundle.ptable.P(n)
            fh.write(f"{n},{len(c) - 1},{';'.join(fmt(x) for x in c)}\n")


def write_recurrence_csv(outdir, bundle):
    with _open(outdir, "recurrence.csv") as fh:
        fh.write("n,a_n,residual\n")
        for n in sorted(bundle.rec.a):
            fh.write(f"{n},{fmt(bundle.rec.a[n])},"
                     f"{fmt(bundle.rec.residual_coeffs(n))}\n")


def write_second_kind_csv(outdir, bundle):
    with _open(outdir, "second_kind.csv") as fh:
        fh.write("n,degree2,roots2,K_n,K_n2\n")
        for n in range(bundle.cfg.n_max + 1):
            roots = bundle.skt.p2_roots(n)
            fh.write(f"{n},{len(roots)},{';'.join(fmt(x) for x in roots)},"
                     f"{fmt(bundle.skt.K1(n))},{fmt(bundle.skt.K2(n))}\n")


def write_ratios_csv(outdir, bundle, zs):
    with _open(outdir, "ratios.csv") as fh:
        fh.write("i,family,k,z,value\n")
        for family in (1, 2):
            for i in range(6):
                for z in zs:
                    seq = bundle.suite.ratio_sequence(i, family, z)
                    for k, v in enumerate(seq, start=1):
                        fh.write(f"{i},{family},{k},{cfmt(z)},{cfmt(v)}\n")


def write_surface_json(outdir, model, data):
    out = {
        "lambda": fmt(model.lam), "mu": fmt(model.mu),
        "beta": fmt(model.beta), "gamma": fmt(model.gamma),
        "c": fmt(model.c), "d": fmt(model.d), "h": fmt(model.h),
        "Theta1": fmt(model.Th1), "Theta2": fmt(model.Th2),
        "H_at_beta": fmt(model.HB),
        "cubic": {"p1": fmt(model.p1), "p0": fmt(model.p0),
                  "q1": fmt(model.q1), "q0": fmt(model.q0),
                  "r0": fmt(model.r0)},
        "branch_product": fmt(model.Cprod),
        "psi0_at_infinity": fmt(model.c0),
        "psi2_residue": fmt(model.Bc),
        "delta_a": fmt(model.delta_a),
    }
    out.update(data)
    with _open(outdir, "surface.json") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")


def write_branches_csv(outdir, model, rows):
    """rows: iterable of (cut_id, x, (t0, t1, t2)) with normalised branches."""
    with _open(outdir, "surface_branches.csv") as fh:
        fh.write("cut,x,t0_re,t0_im,t1_re,t1_im,t2_re,t2_im\n")
        for cut, x, ts in rows:
            cols = [str(cut), fmt(x)]
            for t in ts:
                cols += [fmt(mp.re(t)), fmt(mp.im(t))]
            fh.write(",".join(cols) + "\n")


def write_equilibrium(outdir, sol, extra):
    with _open(outdir, "equilibrium.csv") as fh:
        fh.write("interval,node,weight,field\n")
        for j, m in enumerate(sol.measures):
            for x, w, W in zip(m.nodes, m.weights, sol.fields[j]):
                fh.write(f"{j},{fmt(float(x))},{fmt(float(w))},{fmt(float(W))}\n")
    data = {
        "omega_bar": [fmt(sol.omega(0)), fmt(sol.omega(1))],
        "energy": fmt(sol.energy),
        "iterations": sol.iterations,
        "support": [[fmt(v) for v in m.support()] for m in sol.measures],
        "interaction_matrix": [[fmt(v) for v in row] for row in sol.matrix],
    }
    data.update(extra)
    with _open(outdir, "equilibrium.json") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def write_limits_json(outdir, data):
    with _open(outdir, "limits.json") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def write_report(outdir, report):
    with _open(outdir, "report.json") as fh:
        json.dump(report.as_dict(), fh, indent=2)
        fh.write("\n")


def write_summary(outdir, report, elapsed):
    with _open(outdir, "summary.txt") as fh:
        for c in report.checks:
            fh.write(c.line() + "\n")
        failed = report.failed()
        fh.write(f"\n{len(report.checks) - len(failed)}/{len(report.checks)} "
                 f"checks passed in {elapsed:.1f}s\n")


# ---------------------------------------------------------------------------
# check battery
# ---------------------------------------------------------------------------

def _structure_checks(rep, b):
    cfg = b.cfg
    bad = [n for n in range(cfg.n_max + 1)
           if len(b.ptable.P(n)) - 1 != n // 3]
    rep.add("c1_degree",
            "reduced polynomial of Q_n has degree floor(n/3) for every n",
            "0 mismatches", f"{len(bad)} mismatches", not bad)

    try:
        gap = mpf(1)
        for n in range(3, cfg.n_max + 1):
            r = b.ptable.roots(n)
            if len(r) > 1:
                gap = min(gap, min(v - u for u, v in zip(r, r[1:])) / cfg.alpha3)
        rep.add("c1_roots_simple_interior",
                "all roots of P_n real, simple, inside (0, alpha^3)",
                "min gap > 0", fmt(gap), gap > 0)
    except HypothesisViolation as e:
        rep.add("c1_roots_simple_interior",
                "all roots of P_n real, simple, inside (0, alpha^3)",
                "min gap > 0", str(e), False)

    amin = min(b.rec.a.values())
    rep.add("c1_a_positive", "recurrence coefficients a_n are positive",
            "> 0", fmt(amin), amin > 0)

    res = max(b.rec.residual_coeffs(n) for n in sorted(b.rec.a))
    rep.add("c1_recurrence_residual",
            "coefficient defect of z Q_n = Q_{n+1} + a_n Q_{n-2}",
            "1e-40", fmt(res), res <= mpf("1e-40"))

    gapr = max(b.rec.route_gap.values())
    rep.add("c1_a_route_agreement",
            "determinant route for a_n agrees with the coefficient route",
            "1e-10 relative", fmt(gapr), gapr <= mpf("1e-10"))


def _second_kind_checks(rep, b):
    cfg = b.cfg
    bad = [n for n in range(cfg.n_max + 1)
           if len(b.skt.p2_roots(n)) != count_expected(n)]
    rep.add("c2_phi_zero_counts",
            "number of second-star zeros equals floor(n/6) plus the"
            " extra one in class 4",
            "0 mismatches", f"{len(bad)} mismatches", not bad)

    badsign = [n for n in range(cfg.n_max + 1) if not b.skt.sign_law(n)[0]]
    rep.add("c2_sign_law",
            "Phi_n/P_{n,2} keeps the sign (-1)^floor(n/3) between the cuts",
            "all probes", f"{len(badsign)} sign faults", not badsign)

    worst = mpf(0)
    for n in range(cfg.n_max + 1):
        res = b.skt.ortho_residuals(n)
        if res:
            worst = max(worst, max(res))
    rep.add("c2_psi_orthogonality",
            "reduced second-star orthogonality of Psi_n (relative residuals)",
            "1e-8", fmt(worst), worst <= mpf("1e-8"))


def _interlacing_checks(rep, b):
    cfg = b.cfg
    try:
        margin = min(check_interlacing(b.ptable, n)
                     for n in range(cfg.n_max))
        rep.add("c3_interlace_P",
                "first-star zeros of consecutive indices interlace in the"
                " class-dependent order",
                "margin > 0", fmt(margin), margin > 0)
    except HypothesisViolation as e:
        rep.add("c3_interlace_P", "first-star zero interlacing",
                "margin > 0", str(e), False)

    bad = [n for n in range(cfg.n_max) if not b.skt.phi_interlacing(n)]
    rep.add("c3_interlace_Phi",
            "second-star zeros of consecutive indices separate each other",
            "0 faults", f"{len(bad)} faults", not bad)


def _tail_checks(rep, b):
    ah, proxies = [], []
    for i in range(6):
        v, p, _ = b.suite.estimate_limit_a(i)
        ah.append(v)
        proxies.append(p)
    amax = max(ah)
    tol = mpf("1e-2")

    for cid, gap in (("c4_pair_gap_02", abs(ah[0] - ah[2])),
                     ("c4_pair_gap_35", abs(ah[3] - ah[5]))):
        rep.add(cid,
                "paired recurrence-coefficient limits coincide"
                " (gap relative to the largest limit)",
                "1e-2", fmt(gap / amax), gap / amax <= tol,
                note=f"tail estimate at k_tail={K_TAIL}")
    gap = abs(ah[0] + ah[1] - ah[3] - ah[4])
    rep.add("c4_sum_relation",
            "the two class sums of recurrence limits agree",
            "1e-2", fmt(gap / amax), gap / amax <= tol,
            note=f"tail estimate at k_tail={K_TAIL}")
    rep.add("c4_a4_gt_a1",
            "strict order between the class-4 and class-1 limits",
            "a_hat[4] > a_hat[1]", fmt(ah[4] - ah[1]), ah[4] > ah[1])

    residuals = b.suite.relation_residuals()
    worst = max(residuals.values())
    which = max(residuals, key=residuals.get)
    rep.add("c4_relation_residuals",
            "the thirteen algebraic relations among the ratio limits"
            " (max relative residual over the test points)",
            "1e-2", fmt(worst), worst <= tol, note=f"worst: {which}")

    sep, proxy = b.suite.distinctness()
    rep.add("c4_distinctness",
            "the six first-family ratio limits are pairwise distinct",
            "separation > 10x proxy", f"{fmt(sep)} vs proxy {fmt(proxy)}",
            sep > 10 * proxy)
    return ah


def _admissible_points(model, count=100, seed=97):
    """Deterministic off-cut sample points for the algebraic checks."""
    cfg = model.cfg
    scale = float(cfg.alpha3 + cfg.b3)
    cuts = [(0.0, float(cfg.alpha3)), (float(-cfg.b3), float(-cfg.a3))]
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        x = rng.uniform(-2 * scale, 2 * scale)
        y = rng.uniform(-2 * scale, 2 * scale)
        d = min((x - max(lo, min(x, hi))) ** 2 + y * y
                for lo, hi in cuts) ** 0.5
        if d > 1e-3 * scale:
            pts.append(mpc(x, y))
    return pts


def _surface_checks(rep, b, model, Apin, laws, ahat):
    cfg = b.cfg
    from .surface import _E1, _E2
    sysres = max(abs(_E1(model.beta, model.gamma, model.lam, model.mu)),
                 abs(_E2(model.beta, model.gamma, model.lam, model.mu)))
    rep.add("c5_system_residuals",
            "defining equations of the branch parameters vanish at"
            " (beta, gamma)",
            "1e-30", fmt(sysres), sysres <= mpf("1e-30"))

    slack = min(model.beta - model.gamma, 1 - model.beta, model.gamma + 1,
                -1 - model.c, model.d - 1)
    rep.add("c5_constraint_order",
            "ordering -1 < gamma < beta < 1 and c < -1 < 1 < d",
            "slack > 0", fmt(slack), slack > 0)

    sym_ok = True
    if abs(model.lam - model.mu) <= mpf("1e-30") * (abs(model.lam) + abs(model.mu)):
        sym = abs(model.beta + model.gamma)
        sym_ok = sym <= mpf("1e-20")
        rep.add("v_beta_gamma_symmetric",
                "equal-parameter geometry forces beta = -gamma",
                "1e-20", fmt(sym), sym_ok)
    else:
        rep.add("v_beta_gamma_symmetric",
                "equal-parameter geometry forces beta = -gamma",
                "1e-20", "not applicable (lambda != mu)", True,
                note="asymmetric geometry")

    pts = _admissible_points(model)
    worst_res = mpf(0)
    worst_prod = mpf(0)
    for z in pts:
        roots = model.roots_at(z)
        worst_res = max(worst_res,
                        max(abs(model.cubic_residual(z, w)) for w in roots))
        prod = roots[0] * roots[1] * roots[2]
        worst_prod = max(worst_prod, abs(prod - model.Cprod) / abs(model.Cprod))
    rep.add("c5_cubic_residual",
            "the three algebraic branches satisfy their cubic at 100"
            " fixed off-cut sample points",
            "1e-30", fmt(worst_res), worst_res <= mpf("1e-30"))
    rep.add("c5_branch_product",
            "product of the three branches is constant and equals the"
            " predicted closed form",
            "1e-25 relative", fmt(worst_prod), worst_prod <= mpf("1e-25"))

    zfar = mpf(10) ** 6
    psi = model.branches(zfar)
    dev = abs(psi[1] / (-2 * zfar / cfg.a3) - 1)
    rep.add("c5_psi1_asymptote",
            "middle branch grows like -2z/a^3 far from the cuts",
            "1e-4 at |z| = 1e6", fmt(dev), dev <= mpf("1e-4"))

    dv = model.delta_a
    rep.add("v_delta_a_sign", "the limit-splitting constant is positive",
            "> 0", fmt(dv), dv > 0)

    var = max(laws[key][1] for key in laws)
    rep.add("c5_boundary_law_variance",
            "all twelve boundary products are flat along their cut"
            " (max variance, pinned limit inputs)",
            "1e-6", fmt(var), var <= mpf("1e-6"))

    w_hat = model.omega1(ahat[0], ahat[1], ahat[3], ahat[4])
    w_bdry = [1 / laws[("F1", l)][0] for l in range(6)]
    relmax = max(abs(w_hat[l] - w_bdry[l]) / abs(w_bdry[l]) for l in range(6))
    rep.add("c5_omega1_match",
            "first-family mass constants from the closed formulas with"
            " tail-estimated inputs match the boundary extraction",
            "1e-2 relative", fmt(relmax), relmax <= mpf("1e-2"),
            note=f"tail inputs at k_tail={K_TAIL}")

    d03 = abs(dv - (ahat[0] - ahat[3])) / dv
    d41 = abs(dv - (ahat[4] - ahat[1])) / dv
    rep.add("c5_delta_a_cross_03",
            "gap of the class-0/3 recurrence limits reproduces the"
            " surface splitting constant",
            "2e-2 relative", fmt(d03), d03 <= mpf("2e-2"))
    rep.add("c5_delta_a_cross_41",
            "gap of the class-4/1 recurrence limits reproduces the"
            " surface splitting constant",
            "2e-2 relative", fmt(d41), d41 <= mpf("2e-2"))

    om2 = model.omega2_from_laws(laws)
    relres = [abs(om2[0] * om2[1] - om2[3] * om2[4])
              / max(abs(om2[0] * om2[1]), abs(om2[3] * om2[4])),
              abs(om2[0] - om2[2]) / abs(om2[0]),
              abs(om2[3] - om2[5]) / abs(om2[3])]
    rep.add("v_omega2_relations",
            "product and pairing relations among the second-family mass"
            " constants",
            "1e-6 relative", fmt(max(relres)), max(relres) <= mpf("1e-6"))
    return om2


def _surface_consistency_checks(rep, model, Apin, tilde_cache):
    cfg = model.cfg
    alpha3, a3, b3 = cfg.alpha3, cfg.a3, cfg.b3

    zs = [alpha3 * mpc("0.7", "1.3"), alpha3 * mpc(-2, "0.4"),
          alpha3 * mpc("1.9", "-0.8")]
    worst = mpf(0)
    for z in zs:
        up = model.branches(z)
        dn = model.branches(mp.conj(z))
        worst = max(worst, max(abs(mp.conj(u) - v) for u, v in zip(up, dn)))
    rep.add("v_conj_symmetry",
            "branches commute with complex conjugation label by label",
            "1e-25", fmt(worst), worst <= mpf("1e-25"))

    eps = mpf("1e-8")
    worst = mpf(0)
    for (lo, hi, i1, i2) in ((mpf(0), alpha3, 0, 1), (-b3, -a3, 1, 2)):
        for frac in ("0.2", "0.4", "0.6", "0.8"):
            x = lo + (hi - lo) * mpf(frac)
            up = model.branches(mpc(x, eps))
            i3 = 3 - i1 - i2
            # on the cut the two glued sheets are complex conjugates of
            # each other and the remaining sheet is real
            worst = max(worst,
                        abs(up[i1] - mp.conj(up[i2])),
                        abs(mp.im(up[i3])))
    rep.add("v_boundary_pairing",
            "on each cut the two glued sheets are conjugate boundary values"
            " and the third sheet stays real",
            "1e-6 at eps = 1e-8", fmt(worst), worst <= mpf("1e-6"))

    # identity checks of the closed forms against the normalised branches
    # (the class-0/3 quotients do not depend on the limit quadruple)
    worst = mpf(0)
    for z in zs:
        ts = tilde_cache(z)
        r1 = model.F1(0, z, ts, Apin) / model.F1(3, z, ts, Apin) - 1 / ts[0]
        r2 = model.F2(0, z, ts, Apin) / model.F2(3, z, ts, Apin) - ts[2]
        worst = max(worst, abs(r1), abs(r2))
    rep.add("v_g_ratio",
            "class-0/3 quotients of the limit functions reduce to single"
            " normalised branches",
            "1e-25", fmt(worst), worst <= mpf("1e-25"))


def _ratio_vs_limit_checks(rep, b, model, Apin, tilde_cache):
    cfg = b.cfg
    tol = mpf("1e-2")
    zs = [2 * cfg.alpha3, cfg.alpha3 * mpc(-3, 1)]
    for family, cid in ((1, "c6_ratio_convergence_f1"),
                        (2, "c6_ratio_convergence_f2")):
        worst_last = mpf(0)
        all_dec = True
        floored = []
        for z in zs:
            ts = tilde_cache(z)
            for i in range(6):
                target = (model.F1(i, z, ts, Apin) if family == 1
                          else model.F2(i, z, ts, Apin))
                errs, dec = b.suite.ratio_error_profile(i, family, z, target)
                worst_last = max(worst_last, errs[-1])
                if not dec:
                    # |error| of a complex sequence may wobble once it has
                    # shrunk to where competing correction terms cancel;
                    # the trend is only meaningful above that floor
                    if max(errs) <= tol * mpf("1e-2"):
                        floored.append(f"class {i}")
                    else:
                        all_dec = False
        note = ("trend waived below 1e-4 for " + ", ".join(sorted(set(floored)))
                if floored else "error profiles decreasing")
        rep.add(cid,
                "finite-index ratios approach the closed-form limit"
                " functions (largest index, both probe points, all classes)",
                "1e-2 relative and decreasing", fmt(worst_last),
                worst_last <= tol and all_dec, note=note)


def _equilibrium_checks(rep, b, model, Apin, tilde_cache):
    cfg = b.cfg
    sol = solve_star_equilibrium(cfg, N=400)
    sol2 = solve_star_equilibrium(cfg, N=800)

    dev = max(max(sol.variational_error(j)) for j in (0, 1))
    rep.add("c7_variational",
            "variational conditions of the vector equilibrium problem"
            " (field flat on the support, larger off it)",
            "5e-3 relative", fmt(dev), dev <= 5e-3)

    ddiff = max(abs(sol.omega(j) - sol2.omega(j)) for j in (0, 1))
    rep.add("c7_omega_doubling",
            "equilibrium constants stable under doubling the"
            " discretisation",
            "1e-3", fmt(ddiff), ddiff <= 1e-3)

    pts = test_points(cfg)
    worst1 = worst2 = mpf(0)
    for z in pts:
        ts = tilde_cache(z)
        s1 = -mp.fsum(mp.log(abs(model.F1(i, z, ts, Apin)))
                      for i in range(6)) / 2
        s2 = -mp.fsum(mp.log(abs(model.F2(i, z, ts, Apin)))
                      for i in range(6))
        V1 = sol.measures[0].potential(complex(z))
        V2 = sol.measures[1].potential(complex(z))
        worst1 = max(worst1, abs(V1 - s1))
        worst2 = max(worst2, abs(V2 - s2))
    rep.add("c7_potential_identity_f1",
            "first equilibrium potential equals minus half the log-sum of"
            " the first-family limit functions",
            "1e-2 absolute", fmt(worst1), worst1 <= mpf("1e-2"))
    rep.add("c7_potential_identity_f2",
            "second equilibrium potential equals minus the log-sum of the"
            " second-family limit functions",
            "1e-2 absolute", fmt(worst2), worst2 <= mpf("1e-2"))

    z0 = 2 * cfg.alpha3
    n0 = cfg.n_max
    val = b.suite.nth_root_P(z0, n0)
    tgt = mp.e ** (-sol.measures[0].potential(complex(z0)))
    rel = abs(val - tgt) / tgt
    rep.add("c7_nthroot_P",
            "nth-root size of the reduced polynomial matches the"
            " equilibrium potential off the support",
            "5e-2 relative", fmt(rel), rel <= mpf("5e-2"))

    k10 = b.suite.k_max(0)
    t1 = b.suite.norm_trend(1, 0)[-1]
    t2 = b.suite.norm_trend(2, 0)[-1]
    g1 = mp.e ** (-sol.omega(0))
    g2 = mp.e ** (-4 * sol.omega(1))
    r1 = abs(t1 - g1) / g1
    r2 = abs(t2 - g2) / g2
    rep.add("c7_norm_trend_f1",
            "norm sequence of the first family approaches"
            " exp(-omega_bar_1)",
            "5e-2 relative", fmt(r1), r1 <= mpf("5e-2"),
            note=f"k = {k10}")
    rep.add("c7_norm_trend_f2",
            "norm-quotient sequence of the second family approaches"
            " exp(-4 omega_bar_2)",
            "5e-2 relative", fmt(r2), r2 <= mpf("5e-2"),
            note=f"k = {k10}")

    ks_lo = b.suite.ks_distance(cfg.n_max // 2, sol.measures[0], family=1)
    ks_hi = b.suite.ks_distance(cfg.n_max, sol.measures[0], family=1)
    rep.add("v_zero_histogram_ks",
            "zero-counting measure drifts toward the first equilibrium"
            " measure (Kolmogorov distance shrinks with n)",
            "decreasing", f"{fmt(ks_hi)} < {fmt(ks_lo)}", ks_hi < ks_lo)
    return sol, sol2


def _h_checks(rep, b):
    cfg = b.cfg
    pts = h_points(cfg)
    ns = (cfg.n_max - 6, cfg.n_max - 3, cfg.n_max - 1)
    maxima = []
    for n in ns:
        maxima.append(max(abs(b.skt.h(n, z) - b.skt.h_limit(n, z))
                          for z in pts))
    dec = maxima[1] < maxima[0] and maxima[2] < maxima[1]
    rep.add("c8_h_limit",
            "normalised first-star remainder function approaches its"
            " algebraic limit (max over probe points, three indices)",
            "5e-2 at the last index and decreasing",
            "; ".join(fmt(m) for m in maxima),
            maxima[-1] <= mpf("5e-2") and dec,
            note=f"n = {ns[0]}, {ns[1]}, {ns[2]}")


def _misc_checks(rep, b):
    hk = min(b.ms.hankel("A"), b.ms.hankel("A_f"))
    rep.add("v_hankel_positive",
            "leading Hankel determinants of both moment families are"
            " positive",
            "> 0", fmt(hk), hk > 0)

    worst = mpf(0)
    for n in (2, 4, 7):
        worst = max(worst, abs(b.skt.nu1_check(n) - 1),
                    abs(b.skt.nu2_check(n) - 1))
    rep.add("v_nu_normalization",
            "explicit densities of the two varying measures integrate the"
            " squared normalised polynomials to one",
            "1e-6", fmt(worst), worst <= mpf("1e-6"))


def _kappa_checks(rep, b, model, Apin):
    w_pin = model.omega1(*Apin)
    worst = mpf(0)
    for i in range(6):
        seq = b.suite.kappa_ratio_sequence(i, 1)
        tgt = mp.sqrt(w_pin[i])
        worst = max(worst, abs(seq[-1] - tgt) / tgt)
    rep.add("v_kappa_ratio",
            "leading-coefficient quotients of the orthonormal family drift"
            " to the square roots of the mass constants",
            "5e-2 relative", fmt(worst), worst <= mpf("5e-2"),
            note="coarse finite-index comparison")


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def run_compute(cfg, outdir):
    """Build the finite-n tables and write the three table artifacts."""
    outdir.mkdir(parents=True, exist_ok=True)
    bundle = ComputeBundle(cfg)
    write_polys_csv(outdir, bundle)
    write_recurrence_csv(outdir, bundle)
    write_second_kind_csv(outdir, bundle)
    return bundle


def run_verify(cfg, outdir, bundle=None):
    """Run the full check battery; returns the report (exit code 0/1)."""
    t0 = time.time()
    if cfg.n_max < 36:
        raise ConfigError(
            f"verification needs n_max >= 36 so every residue class carries "
            f"enough tail terms (got n_max = {cfg.n_max})")
    outdir.mkdir(parents=True, exist_ok=True)
    if bundle is None:
        bundle = ComputeBundle(cfg)
    cfg = bundle.cfg
    write_polys_csv(outdir, bundle)
    write_recurrence_csv(outdir, bundle)
    write_second_kind_csv(outdir, bundle)
    rep = VerificationReport(cfg)

    _structure_checks(rep, bundle)
    _second_kind_checks(rep, bundle)
    _interlacing_checks(rep, bundle)
    ahat = _tail_checks(rep, bundle)

    model = SurfaceModel.build(cfg)
    Apin = model.pin_a()
    laws = model.boundary_laws(Apin)

    _tilde = {}

    def tilde_cache(z):
        key = (mp.nstr(mp.re(z), 30), mp.nstr(mp.im(z), 30))
        if key not in _tilde:
            _tilde[key] = model.tilde(model.branches(z))
        return _tilde[key]

    om2 = _surface_checks(rep, bundle, model, Apin, laws, ahat)
    _surface_consistency_checks(rep, model, Apin, tilde_cache)
    _ratio_vs_limit_checks(rep, bundle, model, Apin, tilde_cache)
    sol, sol2 = _equilibrium_checks(rep, bundle, model, Apin, tilde_cache)
    _h_checks(rep, bundle)
    _misc_checks(rep, bundle)
    _kappa_checks(rep, bundle, model, Apin)

    # ---------------- artifacts ----------------
    zs = test_points(cfg)
    write_ratios_csv(outdir, bundle, zs)

    w_pin = model.omega1(*Apin)
    write_surface_json(outdir, model, {
        "A_pinned": [fmt(x) for x in Apin],
        "omega1": [fmt(x) for x in w_pin],
        "omega2": [fmt(x) for x in om2],
        "law_variances": {f"{fam}{l}": fmt(laws[(fam, l)][1])
                          for fam in ("F1", "F2") for l in range(6)},
    })

    eps = mpf("1e-8")
    n_grid = 20
    alpha3, a3, b3 = cfg.alpha3, cfg.a3, cfg.b3
    grid1 = [alpha3 * (j + mpf("0.5")) / n_grid for j in range(n_grid)]
    grid2 = [-b3 + (b3 - a3) * (j + mpf("0.5")) / n_grid for j in range(n_grid)]
    rows = [(1, x, ts) for x, ts in zip(grid1, model.branch_row(grid1, eps))]
    rows += [(2, x, ts) for x, ts in zip(grid2, model.branch_row(grid2, eps))]
    write_branches_csv(outdir, model, rows)

    write_equilibrium(outdir, sol, {
        "omega_bar_doubled": [fmt(sol2.omega(0)), fmt(sol2.omega(1))],
        "nodes": len(sol.measures[0].nodes),
        "nodes_doubled": len(sol2.measures[0].nodes),
    })

    ah_full = [bundle.suite.estimate_limit_a(i) for i in range(6)]
    kappa1 = {str(i): fmt(bundle.suite.kappa_ratio_sequence(i, 1)[-1])
              for i in range(6)}
    kappa2 = {str(i): fmt(bundle.suite.kappa_ratio_sequence(i, 2)[-1])
              for i in range(6)}
    z0 = 2 * cfg.alpha3
    write_limits_json(outdir, {
        "k_tail": K_TAIL,
        "a_hat": [fmt(v) for v, _, _ in ah_full],
        "a_hat_proxy": [fmt(p) for _, p, _ in ah_full],
        "relation_residuals": {k: fmt(v) for k, v
                               in bundle.suite.relation_residuals().items()},
        "kappa_ratio_last": {"family1": kappa1, "family2": kappa2},
        "nth_root_samples": {
            "z": fmt(z0),
            "P": fmt(bundle.suite.nth_root_P(z0, cfg.n_max)),
            "P2": fmt(bundle.suite.nth_root_P2(z0, cfg.n_max)),
        },
        "ks_distance_f1": {
            str(cfg.n_max // 2): fmt(bundle.suite.ks_distance(
                cfg.n_max // 2, sol.measures[0], family=1)),
            str(cfg.n_max): fmt(bundle.suite.ks_distance(
                cfg.n_max, sol.measures[0], family=1)),
        },
        "ks_distance_f2": {
            str(cfg.n_max // 2): fmt(bundle.suite.ks_distance(
                cfg.n_max // 2, sol.measures[1], family=2)),
            str(cfg.n_max): fmt(bundle.suite.ks_distance(
                cfg.n_max, sol.measures[1], family=2)),
        },
    })

    write_report(outdir, rep)
    write_summary(outdir, rep, time.time() - t0)
    return rep
