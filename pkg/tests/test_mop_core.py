import pytest
from mpmath import mp, mpf, mpc

from starmop.mop_core import (PolyTable, RecurrenceTable, check_interlacing,
                              condition_rows, peval, thread_count)


@pytest.fixture(autouse=True)
def _precision(small_bundle):
    # tests in other modules may leave a different working precision behind
    small_bundle.cfg.activate()


def test_peval_horner():
    assert peval([mpf(1), mpf(-2), mpf(3)], mpf(2)) == 9


@pytest.mark.parametrize("n,count", [(0, 0), (3, 1), (6, 2), (7, 2), (8, 2),
                                     (12, 4), (35, 11), (60, 20)])
def test_condition_row_count(n, count):
    assert len(condition_rows(n)) == count


def test_condition_row_shifts():
    # one case per residue class mod 6, spelled out
    assert condition_rows(12) == [("A", 0), ("A", 1), ("A_f", 0), ("A_f", 1)]
    assert condition_rows(13) == [("A", 1), ("A", 2), ("A_f", 0), ("A_f", 1)]
    assert condition_rows(14) == [("A", 1), ("A", 2), ("A_f", 1), ("A_f", 2)]
    assert condition_rows(15) == [("A", 0), ("A", 1), ("A", 2), ("A_f", 0), ("A_f", 1)]
    assert condition_rows(16) == [("A", 1), ("A", 2), ("A_f", 0), ("A_f", 1), ("A_f", 2)]
    assert condition_rows(17) == [("A", 1), ("A", 2), ("A", 3), ("A_f", 1), ("A_f", 2)]


def test_low_degree_polynomials(small_bundle):
    t = small_bundle.ptable
    for n in (0, 1, 2):
        assert t.P(n) == [mpf(1)]
    # deg-1 case has a closed form: constant term -A(1)/A(0) = -1/4
    p3 = t.P(3)
    assert len(p3) == 2 and p3[1] == 1
    assert abs(p3[0] + mpf(1) / 4) < mpf("1e-70")


def test_monic_and_degree(small_bundle):
    t = small_bundle.ptable
    for n in range(13):
        c = t.P(n)
        assert len(c) == n // 3 + 1
        assert c[-1] == 1


def test_rotation_covariance(small_bundle):
    t = small_bundle.ptable
    om = mp.exp(2j * mp.pi / 3)
    z = mpc("0.7", "0.3")
    for n in (4, 7, 11):
        lhs = t.eval_Q(n, om * z)
        rhs = om ** (n % 3) * t.eval_Q(n, z)
        assert abs(lhs - rhs) < mpf("1e-70")


def test_q3_value(small_bundle):
    # z Q_2 = Q_3 + a_2 Q_0 at z = 1 gives Q_3(1) = 1 - a_2 = 3/4
    assert abs(small_bundle.ptable.eval_Q(3, mpf(1)) - mpf(3) / 4) < mpf("1e-70")


def test_roots_real_simple_interior(small_bundle):
    t = small_bundle.ptable
    for n in range(13):
        r = t.roots(n)
        assert len(r) == n // 3
        assert all(0 < x < t.cfg.alpha3 for x in r)
        assert all(v > u for u, v in zip(r, r[1:]))


def test_star_zeros_structure(small_bundle):
    t = small_bundle.ptable
    zs = t.star_zeros(9)
    assert len(zs) == 9
    om = mp.exp(2j * mp.pi / 3)
    # closed under rotation by construction; check values solve Q_9 = 0
    for z in zs:
        assert abs(t.eval_Q(9, z)) < mpf("1e-60")
        assert any(abs(z * om - w) < mpf("1e-30") for w in zs)


def test_recurrence_a2(small_bundle):
    rec = small_bundle.rec
    assert abs(rec.a[2] - mpf(1) / 4) < mpf("1e-70")
    assert abs(rec.a_integral[2] - mpf(1) / 4) < mpf("1e-60")


def test_recurrence_routes_agree(small_bundle):
    rec = small_bundle.rec
    assert max(rec.route_gap.values()) < mpf("1e-10")


def test_recurrence_defect_coefficients(small_bundle):
    rec = small_bundle.rec
    worst = max(rec.residual_coeffs(n) for n in range(2, 12))
    assert worst < mpf("1e-40")


def test_recurrence_pointwise(small_bundle):
    rec = small_bundle.rec
    z = mpc("1.1", "0.4")
    assert rec.residual(7, z) < mpf("1e-40")


@pytest.mark.parametrize("n", range(2, 12))
def test_interlacing_margin(small_bundle, n):
    assert check_interlacing(small_bundle.ptable, n) > 0


def test_thread_count_env(monkeypatch):
    monkeypatch.delenv("MOP_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("MOP_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("MOP_THREADS", "0")
    assert thread_count() == 1
    monkeypatch.setenv("MOP_THREADS", "sixteen")
    assert thread_count() == 1


def test_threaded_build_matches_serial(monkeypatch, small_bundle):
    from starmop import reference_config

    monkeypatch.setenv("MOP_THREADS", "2")
    cfg = reference_config("r1", n_max=12)
    cfg.activate()
    from starmop.moments import MomentService

    t2 = PolyTable(cfg, MomentService(cfg)).build()
    for n in range(13):
        assert t2.P(n) == small_bundle.ptable.P(n)
