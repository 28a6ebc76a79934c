import math

import numpy as np
import pytest

from starmop.equilibrium import (DiscreteMeasure, cheb_nodes, log_kernel,
                                 proj_simplex, solve_equilibrium,
                                 solve_star_equilibrium)


def test_cheb_nodes_basic():
    x = cheb_nodes(-2.0, 3.0, 64)
    assert len(x) == 64
    assert x[0] > -2 and x[-1] < 3
    assert np.all(np.diff(x) > 0)


def test_log_kernel_values():
    x = np.array([0.0, 1.0, 3.0])
    K = log_kernel(x, x, same=True)
    assert K[0, 1] == pytest.approx(0.0)
    assert K[0, 2] == pytest.approx(-math.log(3.0))
    assert np.isfinite(np.diag(K)).all()
    K2 = log_kernel(x, x + 5.0, same=False)
    assert K2[0, 0] == pytest.approx(-math.log(5.0))


def test_proj_simplex():
    p = proj_simplex(np.array([0.5, 0.6]))
    assert p == pytest.approx([0.45, 0.55])
    p = proj_simplex(np.array([2.0, -1.0]))
    assert p == pytest.approx([1.0, 0.0])
    v = np.array([0.3, -0.2, 1.4, 0.05])
    p = proj_simplex(v)
    assert p.sum() == pytest.approx(1.0)
    assert (p >= 0).all()
    assert proj_simplex(p) == pytest.approx(p)


def test_discrete_measure_potential():
    m = DiscreteMeasure((-1.0, 1.0), np.array([0.0]), np.array([1.0]))
    assert m.potential(math.e) == pytest.approx(-1.0)
    # far-field: potential + log|z| -> 0 for a probability measure
    m2 = DiscreteMeasure((-1.0, 1.0), np.array([-1.0, 1.0]), np.array([0.5, 0.5]))
    assert m2.potential(3.0) == pytest.approx(-1.5 * math.log(2.0))
    assert m2.potential(1e9) + math.log(1e9) == pytest.approx(0.0, abs=1e-9)
    assert m2.mass() == pytest.approx(1.0)


def test_arcsine_robin_constant():
    # classical single-interval problem: the equilibrium measure of [-1, 1]
    # is the arcsine law and its potential is log 2 on the interval
    sol = solve_equilibrium([(-1.0, 1.0)], [[1.0]], N=300)
    assert sol.omega(0) == pytest.approx(math.log(2.0), abs=2e-3)
    lo, hi = sol.measures[0].support()
    assert lo == pytest.approx(-1.0, abs=0.02)
    assert hi == pytest.approx(1.0, abs=0.02)
    on, off = sol.variational_error(0)
    assert on < 5e-3
    assert off < 5e-3


def test_arcsine_density_shape():
    sol = solve_equilibrium([(-1.0, 1.0)], [[1.0]], N=300)
    mu = sol.measures[0]
    # cumulative mass up to 0 is 1/2 by symmetry
    half = mu.weights[mu.nodes < 0].sum()
    assert half == pytest.approx(0.5, abs=5e-3)
    # arcsine CDF at 1/2: 1/2 + arcsin(1/2)/pi = 2/3
    two_thirds = mu.weights[mu.nodes < 0.5].sum()
    assert two_thirds == pytest.approx(0.5 + math.asin(0.5) / math.pi, abs=5e-3)


@pytest.fixture(scope="module")
def star_sol(r1_cfg):
    return solve_star_equilibrium(r1_cfg, N=200)


def test_star_masses_and_energy(star_sol):
    assert star_sol.measures[0].mass() == pytest.approx(1.0, abs=1e-12)
    assert star_sol.measures[1].mass() == pytest.approx(1.0, abs=1e-12)
    assert star_sol.energy_monotone()
    assert star_sol.iterations >= 10


def test_star_variational_conditions(star_sol):
    for j in (0, 1):
        dev_on, dev_off = star_sol.variational_error(j)
        assert dev_on < 5e-3
        assert dev_off < 5e-3


def test_star_full_supports(star_sol):
    # both components spread over their whole interval
    (lo1, hi1) = star_sol.measures[0].support()
    assert lo1 < 0.02 and hi1 > 0.98
    (lo2, hi2) = star_sol.measures[1].support()
    assert lo2 < -7.9 and hi2 > -1.05


def test_star_refinement_stability(r1_cfg, star_sol):
    fine = solve_star_equilibrium(r1_cfg, N=400)
    for j in (0, 1):
        drift = abs(fine.omega(j) - star_sol.omega(j))
        assert drift < 5e-3 * max(1.0, abs(fine.omega(j)))
