"""Shared fixtures.

The two full-size pipelines (bundle + verification report) are expensive
— several minutes each — so they are built once per session and shared
by every test that needs finished tables.  Small-n bundles cover the
unit-level tests.
"""

from types import SimpleNamespace

import pytest

from starmop import ComputeBundle, reference_config
from starmop.report import run_verify


@pytest.fixture(scope="session")
def small_bundle():
    return ComputeBundle(reference_config("r1", n_max=12))


@pytest.fixture(scope="session")
def r1_cfg():
    return reference_config("r1")


@pytest.fixture(scope="session")
def r0_cfg():
    return reference_config("r0")


def _full(cfg, tmp_path_factory, tag):
    out = tmp_path_factory.mktemp(f"verify-{tag}")
    bundle = ComputeBundle(cfg)
    report = run_verify(cfg, out, bundle=bundle)
    return SimpleNamespace(cfg=cfg, bundle=bundle, report=report, outdir=out)


@pytest.fixture(scope="session")
def r1_full(r1_cfg, tmp_path_factory):
    return _full(r1_cfg, tmp_path_factory, "r1")


@pytest.fixture(scope="session")
def r0_full(r0_cfg, tmp_path_factory):
    return _full(r0_cfg, tmp_path_factory, "r0")
