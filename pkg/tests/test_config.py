import json

import pytest
from mpmath import mp, mpf

from starmop import ConfigError, DomainError, StarConfig, reference_config


def _base_mapping():
    return {
        "alpha": "1", "a": "1", "b": "2",
        "s1": {"gamma": "0", "delta": "0"},
        "s2": {"gamma": "0", "delta": "0"},
        "precision_bits": 128, "quad_points": 48, "n_max": 12,
    }


def test_missing_key_names_the_key():
    d = _base_mapping()
    del d["alpha"]
    with pytest.raises(ConfigError, match="alpha"):
        StarConfig.from_mapping(d)


def test_unknown_key_rejected():
    d = _base_mapping()
    d["spurious"] = 1
    with pytest.raises(ConfigError, match="spurious"):
        StarConfig.from_mapping(d)


def test_interval_order_enforced():
    d = _base_mapping()
    d["a"], d["b"] = "2", "2"
    with pytest.raises(ConfigError, match="interval order"):
        StarConfig.from_mapping(d).validate()


def test_vanishing_weight_rejected():
    d = _base_mapping()
    d["s2"] = {"gamma": "0", "delta": "0", "scale": "0"}
    with pytest.raises(ConfigError, match="vanish"):
        StarConfig.from_mapping(d).validate()


def test_negative_exponent_rejected():
    d = _base_mapping()
    d["s1"] = {"gamma": "-0.5", "delta": "0"}
    with pytest.raises(ConfigError):
        StarConfig.from_mapping(d).validate()


@pytest.mark.parametrize("fmt", ["toml", "json"])
def test_from_file_roundtrip(tmp_path, fmt):
    d = _base_mapping()
    if fmt == "json":
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(d))
    else:
        path = tmp_path / "cfg.toml"
        lines = [f'{k} = "{d[k]}"' for k in ("alpha", "a", "b")]
        lines += [f"{k} = {d[k]}" for k in
                  ("precision_bits", "quad_points", "n_max")]
        for s in ("s1", "s2"):
            lines.append(f"[{s}]")
            lines += [f'{k} = "{v}"' for k, v in d[s].items()]
        path.write_text("\n".join(lines) + "\n")
    cfg = StarConfig.from_file(path)
    cfg.validate()
    assert cfg.n_max == 12
    assert cfg.b_high == 2


def test_overrides_reparse():
    cfg = reference_config("r1", n_max=12)
    cfg2 = cfg.with_overrides(n_max=18, precision_bits=320)
    assert cfg2.n_max == 18
    assert cfg2.precision_bits == 320
    assert cfg.n_max == 12  # original untouched


def test_echo_decimal_strings():
    cfg = reference_config("r1", n_max=12)
    echo = cfg.echo()
    assert echo["b"].startswith("2")
    assert all(isinstance(v, (str, int, dict)) for v in echo.values())


def test_reference_geometries():
    r1 = reference_config("r1")
    r0 = reference_config("r0")
    r1.activate()
    assert r1.b3 == 8
    # symmetric setup: b^3 = alpha^3 + a^3 up to the 80-digit input string
    assert abs(r0.b3 - 2) < mpf("1e-75")
    assert abs(r0.lam - r0.mu) < mpf("1e-75")
    with pytest.raises(ConfigError):
        reference_config("r7")


def test_weight_evaluation_domain():
    from starmop.config import eval_s1, eval_s2

    cfg = reference_config("r1", n_max=12)
    cfg.activate()
    assert eval_s1(cfg, mpf("0.5")) == 1
    assert eval_s2(cfg, mpf("-1.5")) == 1
    with pytest.raises(DomainError):
        eval_s1(cfg, mpf("1.5"))
    with pytest.raises(DomainError):
        eval_s2(cfg, mpf("0.5"))


def test_activate_sets_precision():
    cfg = reference_config("r1", n_max=12, precision_bits=192)
    cfg.activate()
    assert mp.prec == 192
    reference_config("r1").activate()
    assert mp.prec == 256
