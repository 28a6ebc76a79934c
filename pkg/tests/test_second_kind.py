import pytest
from mpmath import mp, mpf

from starmop.errors import SingularityError
from starmop.second_kind import count_expected


@pytest.fixture(scope="module")
def skt(small_bundle):
    small_bundle.cfg.activate()
    return small_bundle.skt


def test_phi1_closed_form(skt):
    # 3 * int_0^1 u^3/(u^3 + 1) du = 3 - log 2 - pi/sqrt(3)
    target = 3 - mp.log(2) - mp.pi / mp.sqrt(3)
    assert abs(skt.phi(1, mpf(-1)) - target) < mpf("1e-60")


def test_phi0_far_field(skt):
    # -w Phi_0(w) -> total mass of the first measure as w -> -infinity
    w = mpf("-1e8")
    assert abs(-w * skt.phi(0, w) - 3) < mpf("1e-7")


def test_cut_guard(skt):
    with pytest.raises(SingularityError):
        skt.phi(0, mpf("0.5"))
    # the same point evaluates fine with the guard off (real principal value
    # never arises here: the quadrature nodes are never exactly hit)
    assert skt.phi(0, mpf("0.5"), guard=False) != 0


ZERO_COUNTS = [0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 2, 1, 2, 2]


@pytest.mark.parametrize("n", range(14))
def test_zero_counts(skt, n):
    assert count_expected(n) == ZERO_COUNTS[n]
    assert len(skt.p2_roots(n)) == ZERO_COUNTS[n]
    for x in skt.p2_roots(n):
        assert -skt.cfg.b3 < x < -skt.cfg.a3


@pytest.mark.parametrize("n", range(14))
def test_sign_law(skt, n):
    ok, expected = skt.sign_law(n)
    assert ok
    assert expected == (1 if (n // 3) % 2 == 0 else -1)


def test_psi_sign_prefactor_flip(skt):
    # the z-prefactor is z^2, z^0, z^1 by residue class; only z^2 is
    # sign-flipping on the negative ray
    assert skt.psi_sign(0) == 1
    assert skt.psi_sign(2) == -1
    assert skt.psi_sign(3) == -1
    assert skt.psi_sign(5) == 1


def test_ortho_residuals_vanish(skt):
    worst = mpf(0)
    for n in range(2, 14):
        res = skt.ortho_residuals(n)
        if res:
            worst = max(worst, max(res))
    assert worst < mpf("1e-30")


def test_phi_nodes2_cache(skt):
    vals = skt.phi_nodes2(5)
    r = skt.ms.rules()
    assert len(vals) == len(r.x2)
    direct = [skt.phi(5, -u ** 3, guard=False) for u in r.x2]
    assert all(a == b for a, b in zip(vals, direct))
    assert skt.phi_nodes2(5) is vals


def test_k1_degenerate_case(skt):
    # n = 0: unit polynomial, no second-star divisor, kern = 1
    assert abs(skt.K1(0) - 1 / mp.sqrt(3)) < mpf("1e-70")


def test_kappa_composition(skt):
    k1, k2rel = skt.kappa(5)
    assert k1 == skt.K1(5)
    assert abs(k2rel - skt.K2(5) / skt.K1(5)) < mpf("1e-70")


def test_norms_positive(skt):
    for n in range(14):
        assert skt.K1(n) > 0
        assert skt.K2(n) > 0


def test_nu1_normalisation(skt):
    for n in (2, 4, 7):
        assert abs(skt.nu1_check(n) - 1) < mpf("1e-30")


def test_nu2_normalisation(skt):
    for n in (2, 4, 7):
        assert abs(skt.nu2_check(n) - 1) < mpf("1e-30")


def test_h_against_adaptive_quadrature(skt):
    # for n = 0 the h integrand collapses to 1/(u^3 - z^3); compare the
    # fixed-rule evaluation with mpmath's adaptive quadrature
    z = mpf(10)
    target = skt.K1(0) ** 2 * z ** 2 * 3 * mp.quad(
        lambda u: 1 / (u ** 3 - z ** 3), [0, 1])
    assert abs(skt.h(0, z) - target) < mpf("1e-50")


def test_h_limit_prefactors(skt):
    root = mp.sqrt(8) * mp.sqrt(7)
    assert abs(skt.h_limit(12, mpf(2)) + 4 / root) < mpf("1e-70")
    assert abs(skt.h_limit(13, mpf(2)) + 2 / root) < mpf("1e-70")
    assert abs(skt.h_limit(14, mpf(2)) + 8 / root) < mpf("1e-70")


@pytest.mark.parametrize("n", range(13))
def test_phi_interlacing(skt, n):
    assert skt.phi_interlacing(n)
