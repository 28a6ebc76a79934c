import numpy as np
import pytest
from mpmath import mp, mpf, mpc

from starmop.asymptotics import h_points, test_points
from starmop.equilibrium import solve_star_equilibrium

RELATION_NAMES = [
    "F1_2_eq_z_F1_0", "F1_5_eq_z_F1_3",
    "F1_prod_01_34", "F1_prod_12_45", "F1_prod_23_50",
    "one_minus_F1_30", "one_minus_F1_41", "z_minus_F1_52",
    "F2_0_eq_F2_2", "F2_3_eq_F2_5",
    "F2_prod_01_34", "F2_prod_12_45", "F2_prod_23_50",
]


@pytest.fixture(scope="module")
def suite(r1_full):
    r1_full.cfg.activate()
    return r1_full.bundle.suite


def test_fixed_point_sets(r1_cfg):
    pts = test_points(r1_cfg)
    assert len(pts) == 8
    a3, b3, al3 = r1_cfg.a3, r1_cfg.b3, r1_cfg.alpha3
    for z in pts:
        if mp.im(z) == 0:
            x = mp.re(z)
            assert not (0 <= x <= al3)
            assert not (-b3 <= x <= -a3)
    assert len(h_points(r1_cfg)) == 8


def test_k_max(suite):
    assert suite.k_max(0) == 10
    assert suite.k_max(4) == 9
    assert len(suite.a_sequence(0)) == 10


def test_limit_estimates_ordered(suite):
    ah = suite.a_hat()
    assert len(ah) == 6
    assert all(v > 0 for v in ah)
    # the two middle-class limits differ by the documented positive offset
    assert ah[4] > ah[1]
    assert ah[0] > ah[3]
    for i in range(6):
        value, proxy, monotone = suite.estimate_limit_a(i)
        assert proxy < mpf("1e-2")
        assert monotone


def test_ratio_sequences_shape(suite):
    z = 2 * suite.cfg.alpha3
    seq = suite.ratio_sequence(0, 1, z)
    assert len(seq) == 10
    est, proxy, dec = suite.ratio_estimate(0, 1, z)
    assert est == seq[-1]
    assert proxy == abs(seq[-1] - seq[-2])


def test_ratio_sequence_nudges_off_zeros(suite):
    # aim exactly at a zero of one of the denominators: the sequence must
    # still come back finite, evaluated at a nudged point
    z = suite.ptable.roots(6)[0]
    seq = suite.ratio_sequence(0, 1, z)
    assert all(mp.isfinite(s) and abs(s) > 0 for s in seq)


def test_error_profile_shape(suite):
    z = mpc(2, 1)
    target, _, _ = suite.ratio_estimate(1, 1, z)
    errs, dec = suite.ratio_error_profile(1, 1, z, target * (1 + mpf("1e-3")))
    assert len(errs) == 4
    assert all(e >= 0 for e in errs)


def test_relation_residuals_complete(suite):
    res = suite.relation_residuals()
    assert sorted(res) == sorted(RELATION_NAMES)
    assert max(res.values()) < mpf("1e-2")


def test_distinctness(suite):
    sep, proxy = suite.distinctness()
    assert sep > 10 * proxy


def test_norm_trends(suite):
    t1 = suite.norm_trend(1, 0)
    t2 = suite.norm_trend(2, 0)
    assert len(t1) == 10 and len(t2) == 10
    assert all(v > 0 for v in t1 + t2)
    # family-1 trend approaches its limit from within a shrinking band
    assert abs(t1[-1] - t1[-2]) < abs(t1[1] - t1[0])


def test_kappa_ratio_sequences(suite):
    for fam in (1, 2):
        seq = suite.kappa_ratio_sequence(0, fam)
        assert len(seq) == 10
        assert all(v > 0 for v in seq)
        # settles: the last two terms are closer than the first two
        assert abs(seq[-1] - seq[-2]) < abs(seq[1] - seq[0])


def test_nth_root_stability(suite):
    z = 2 * suite.cfg.alpha3
    v60 = suite.nth_root_P(z, 60)
    v54 = suite.nth_root_P(z, 54)
    assert v60 > 1 and v54 > 1
    assert abs(v60 - v54) < mpf("0.1") * v60


def test_zero_pushforward(suite):
    rs = suite.zero_pushforward(60)
    assert len(rs) == 20
    assert all(0 < r < suite.cfg.alpha for r in rs)


def test_ks_distances(suite, r1_cfg):
    sol = solve_star_equilibrium(r1_cfg, N=200)
    d1 = suite.ks_distance(60, sol.measures[0], family=1)
    assert 0 <= d1 < mpf("0.15")
    d2 = suite.ks_distance(60, sol.measures[1], family=2)
    assert 0 <= d2 < mpf("0.35")
    # refinement: more zeros track the measure more closely
    assert d1 < suite.ks_distance(30, sol.measures[0], family=1)
