import pytest
from mpmath import mp, mpf

from starmop import MomentService, reference_config
from starmop.errors import SingularityError
from starmop.quadrature import StarRules, gauss_legendre


@pytest.fixture(scope="module")
def ms():
    cfg = reference_config("r1", n_max=12)
    cfg.activate()
    return MomentService(cfg)


def test_gauss_legendre_exactness():
    reference_config("r1", n_max=12).activate()
    x, w = gauss_legendre(12, mpf(0), mpf(2))
    # degree-5 monomial integrated exactly: 2^6/6
    val = mp.fsum(wi * xi ** 5 for xi, wi in zip(x, w))
    assert abs(val - mpf(64) / 6) < mpf("1e-70")
    assert abs(mp.fsum(w) - 2) < mpf("1e-70")


def test_rules_cover_both_intervals():
    cfg = reference_config("r1", n_max=12)
    cfg.activate()
    r = StarRules(cfg)
    assert min(r.x1) > 0 and max(r.x1) < cfg.alpha
    assert min(r.x2) > cfg.a_low and max(r.x2) < cfg.b_high


# Oracle values are kept as strings and parsed inside the tests: a
# module-level mpf would be rounded at import-time (53-bit) precision.
#
# frozen from mpmath's adaptive quadrature at 60 digits, which shares no
# code with the fixed Gauss-Legendre rules under test
AF_0 = "0.2225909424403632688050465078975667884434"


def test_g_oracle(ms):
    # 1/(1+v^3) integrates in closed form; partial fractions give an
    # oracle completely outside the quadrature code path
    F = lambda v: mp.log(1 + v) / 3 - mp.log(v * v - v + 1) / 6 \
        + mp.atan((2 * v - 1) / mp.sqrt(3)) / mp.sqrt(3)
    assert abs(ms.g(mpf(1)) - (F(mpf(2)) - F(mpf(1)))) < mpf("1e-60")


def test_first_moments_closed_form(ms):
    # unit weights: A(k) = 3/(3k+1) on [0,1], B adds exponent 2
    assert abs(ms.moment("A", 0) - 3) < mpf("1e-70")
    assert abs(ms.moment("A", 1) - mpf(3) / 4) < mpf("1e-70")
    assert abs(ms.moment("B", 1) - mpf(1) / 2) < mpf("1e-70")


def test_f_variant_moment_oracle(ms):
    assert abs(ms.moment("A_f", 0) - mpf(AF_0)) < mpf("1e-35")


def test_moment_monotone_in_k(ms):
    vals = [ms.moment("A", k) for k in range(6)]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))


def test_half_rule_error_estimate(ms):
    # the full rule should sit well inside the half-rule discrepancy
    assert ms.moment_error("A_f", 0) < mpf("1e-40")


def test_hankel_positive(ms):
    for fam in ("A", "A_f", "B", "B_f"):
        assert ms.hankel(fam) > 0


def test_g_singularity_guard(ms):
    with pytest.raises(SingularityError):
        ms.g(mpf(-2))
    # regular points just work
    assert ms.g(mpf(-9)) != 0
