"""End-to-end acceptance run: every advertised check on both reference
geometries, one test per (geometry, check), each at its shipped tolerance.

A failing entry here is a genuine measurement above its tolerance, printed
with the same line the CLI would show — nothing is rescaled or skipped.
"""

import json

import pytest

ALL_CHECK_IDS = [
    "c1_degree",
    "c1_roots_simple_interior",
    "c1_a_positive",
    "c1_recurrence_residual",
    "c1_a_route_agreement",
    "c2_phi_zero_counts",
    "c2_sign_law",
    "c2_psi_orthogonality",
    "c3_interlace_P",
    "c3_interlace_Phi",
    "c4_pair_gap_02",
    "c4_pair_gap_35",
    "c4_sum_relation",
    "c4_a4_gt_a1",
    "c4_relation_residuals",
    "c4_distinctness",
    "c5_system_residuals",
    "c5_constraint_order",
    "v_beta_gamma_symmetric",
    "c5_cubic_residual",
    "c5_branch_product",
    "c5_psi1_asymptote",
    "v_delta_a_sign",
    "c5_boundary_law_variance",
    "c5_omega1_match",
    "c5_delta_a_cross_03",
    "c5_delta_a_cross_41",
    "v_omega2_relations",
    "v_conj_symmetry",
    "v_boundary_pairing",
    "v_g_ratio",
    "c6_ratio_convergence_f1",
    "c6_ratio_convergence_f2",
    "c7_variational",
    "c7_omega_doubling",
    "c7_potential_identity_f1",
    "c7_potential_identity_f2",
    "c7_nthroot_P",
    "c7_norm_trend_f1",
    "c7_norm_trend_f2",
    "v_zero_histogram_ks",
    "c8_h_limit",
    "v_hankel_positive",
    "v_nu_normalization",
    "v_kappa_ratio",
]

ARTIFACTS = [
    "polys.csv", "recurrence.csv", "second_kind.csv", "ratios.csv",
    "surface.json", "surface_branches.csv", "equilibrium.csv",
    "equilibrium.json", "limits.json", "report.json", "summary.txt",
]


@pytest.fixture(scope="module", params=["r1", "r0"])
def full(request, r1_full, r0_full):
    return r1_full if request.param == "r1" else r0_full


def test_check_catalogue_is_exact(full):
    assert [c.check_id for c in full.report.checks] == ALL_CHECK_IDS


@pytest.mark.parametrize("check_id", ALL_CHECK_IDS)
def test_check(full, check_id):
    rec = next(c for c in full.report.checks if c.check_id == check_id)
    assert rec.passed, rec.line()


def test_artifacts_on_disk(full):
    for name in ARTIFACTS:
        p = full.outdir / name
        assert p.exists() and p.stat().st_size > 0, name


def test_report_json_roundtrip(full):
    with open(full.outdir / "report.json") as fh:
        doc = json.load(fh)
    assert doc["metadata"]["n_max"] == full.cfg.n_max
    assert [c["id"] for c in doc["checks"]] == ALL_CHECK_IDS
    flags = {c["id"]: c["passed"] for c in doc["checks"]}
    for rec in full.report.checks:
        assert flags[rec.check_id] == rec.passed


def test_summary_counts_match(full):
    text = (full.outdir / "summary.txt").read_text()
    failed = [c for c in full.report.checks if not c.passed]
    assert f"{len(full.report.checks) - len(failed)}/{len(full.report.checks)}" in text
