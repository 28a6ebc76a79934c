"""Problem configuration: star geometry, weight parameters, precision settings.

The problem lives on two stars in the complex plane: S0, the union of the
three rotated copies of [0, alpha], and S1, the three rotated copies of
[-b, -a] (0 < a < b).  After the cube substitution tau = z^3 everything
reduces to the two real intervals Delta1 = [0, alpha^3] and
Delta2 = [-b^3, -a^3], which is where all numerics happen.

Weights are generalized Jacobi densities: on (0, alpha)

    s1(x) = scale * x**gamma * (alpha - x)**delta,

and the same shape on (-b, -a) measured from its own endpoints.  Config
files (TOML or JSON) carry all reals as decimal strings so a config is
reproducible independent of the binary float representation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from mpmath import mp, mpf

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError, DomainError

REQUIRED_KEYS = ("alpha", "a", "b", "s1", "s2", "precision_bits", "quad_points", "n_max")


def _as_mpf(value, key):
    """Parse a config number.  Decimal strings are the documented form;
    ints are exact anyway; floats are tolerated via repr()."""
    if isinstance(value, bool):
        raise ConfigError(f"key '{key}': expected a number, got a boolean")
    if isinstance(value, str):
        try:
            return mpf(value)
        except ValueError as exc:
            raise ConfigError(f"key '{key}': cannot parse decimal string {value!r}") from exc
    if isinstance(value, int):
        return mpf(value)
    if isinstance(value, float):
        return mpf(repr(value))
    raise ConfigError(f"key '{key}': expected a decimal string or number, got {type(value).__name__}")


def _as_int(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError(f"key '{key}': expected an integer")
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"key '{key}': expected an integer, got {value!r}") from exc


@dataclass(frozen=True)
class WeightParams:
    """Generalized-Jacobi weight descriptor: scale * (dist to left end)**gamma
    * (dist to right end)**delta."""

    gamma: mpf
    delta: mpf
    scale: mpf

    @classmethod
    def from_mapping(cls, d, name):
        if not isinstance(d, dict):
            raise ConfigError(f"key '{name}': expected a table with 'gamma' and 'delta'")
        for k in ("gamma", "delta"):
            if k not in d:
                raise ConfigError(f"missing config key '{name}.{k}'")
        unknown = set(d) - {"gamma", "delta", "scale"}
        if unknown:
            raise ConfigError(f"unknown keys under '{name}': {sorted(unknown)}")
        return cls(
            gamma=_as_mpf(d["gamma"], f"{name}.gamma"),
            delta=_as_mpf(d["delta"], f"{name}.delta"),
            scale=_as_mpf(d.get("scale", 1), f"{name}.scale"),
        )

    def validate(self, name):
        if self.gamma < 0 or self.delta < 0:
            raise ConfigError(f"weight {name}: exponents must be >= 0 "
                              f"(gamma={self.gamma}, delta={self.delta})")
        if self.scale <= 0:
            raise ConfigError(f"weight {name} must not vanish identically: "
                              f"scale > 0 required (got {self.scale})")


@dataclass
class StarConfig:
    """Full problem configuration.

    alpha, a_low, b_high are the geometric parameters (alpha > 0,
    0 < a_low < b_high); s1/s2 the weight descriptors; precision_bits the
    mpmath working precision; quad_points the Gauss-Legendre node count;
    n_max the largest polynomial index the pipeline computes.
    """

    alpha: mpf
    a_low: mpf
    b_high: mpf
    s1: WeightParams
    s2: WeightParams
    precision_bits: int = 256
    quad_points: int = 96
    n_max: int = 60
    raw: dict | None = None

    # ---------------- construction ----------------

    @classmethod
    def from_mapping(cls, d):
        for k in REQUIRED_KEYS:
            if k not in d:
                raise ConfigError(f"missing config key '{k}'")
        unknown = set(d) - set(REQUIRED_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        precision_bits = _as_int(d["precision_bits"], "precision_bits")
        if precision_bits < 64:
            raise ConfigError(f"precision_bits must be >= 64 (got {precision_bits})")
        # parse decimal strings at (at least) the configured precision
        mp.prec = max(mp.prec, precision_bits)
        cfg = cls(
            alpha=_as_mpf(d["alpha"], "alpha"),
            a_low=_as_mpf(d["a"], "a"),
            b_high=_as_mpf(d["b"], "b"),
            s1=WeightParams.from_mapping(d["s1"], "s1"),
            s2=WeightParams.from_mapping(d["s2"], "s2"),
            precision_bits=precision_bits,
            quad_points=_as_int(d["quad_points"], "quad_points"),
            n_max=_as_int(d["n_max"], "n_max"),
            raw=dict(d),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_bytes()
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        elif path.suffix.lower() == ".toml":
            data = tomllib.loads(text.decode())
        else:
            try:
                data = tomllib.loads(text.decode())
            except Exception:
                try:
                    data = json.loads(text)
                except Exception as exc:
                    raise ConfigError(f"cannot parse {path} as TOML or JSON") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config root of {path} must be a table/object")
        return cls.from_mapping(data)

    def with_overrides(self, n_max=None, precision_bits=None):
        """Re-parse with CLI overrides applied (keeps decimal-string exactness)."""
        d = dict(self.raw) if self.raw is not None else self.echo()
        if n_max is not None:
            d["n_max"] = int(n_max)
        if precision_bits is not None:
            d["precision_bits"] = int(precision_bits)
        return StarConfig.from_mapping(d)

    # ---------------- validation / activation ----------------

    def validate(self):
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive (got {self.alpha})")
        if not (0 < self.a_low < self.b_high):
            raise ConfigError("interval order violated: need 0 < a < b "
                              f"(got a={self.a_low}, b={self.b_high})")
        self.s1.validate("s1")
        self.s2.validate("s2")
        if self.quad_points < 32:
            raise ConfigError(f"quad_points must be >= 32 (got {self.quad_points})")
        if self.n_max < 0:
            raise ConfigError(f"n_max must be >= 0 (got {self.n_max})")

    def activate(self):
        """Set the global mpmath precision for this configuration."""
        mp.prec = self.precision_bits
        return self

    # ---------------- derived geometry ----------------

    @property
    def alpha3(self):
        return self.alpha ** 3

    @property
    def a3(self):
        return self.a_low ** 3

    @property
    def b3(self):
        return self.b_high ** 3

    @property
    def delta1(self):
        """Reduced interval for the first star: [0, alpha^3]."""
        return (mpf(0), self.alpha3)

    @property
    def delta2(self):
        """Reduced interval for the second star: [-b^3, -a^3]."""
        return (-self.b3, -self.a3)

    @property
    def lam(self):
        return 2 * self.b3 / self.a3 - 1

    @property
    def mu(self):
        return 2 * self.alpha3 / self.a3 + 1

    def echo(self):
        """Config as a plain dict of strings (for the report and re-parsing)."""
        def w(p):
            return {"gamma": mp.nstr(p.gamma, 40), "delta": mp.nstr(p.delta, 40),
                    "scale": mp.nstr(p.scale, 40)}
        return {
            "alpha": mp.nstr(self.alpha, 40), "a": mp.nstr(self.a_low, 40),
            "b": mp.nstr(self.b_high, 40), "s1": w(self.s1), "s2": w(self.s2),
            "precision_bits": self.precision_bits, "quad_points": self.quad_points,
            "n_max": self.n_max,
        }


# ---------------- weight evaluation ----------------

def eval_s1(cfg, x):
    """Weight s1 at x in (0, alpha)."""
    if not (0 < x < cfg.alpha):
        raise DomainError(f"s1 argument {x} outside (0, {cfg.alpha})")
    p = cfg.s1
    return p.scale * x ** p.gamma * (cfg.alpha - x) ** p.delta


def eval_s2(cfg, t):
    """Weight s2 at t in (-b, -a); gamma grades the -b end, delta the -a end."""
    if not (-cfg.b_high < t < -cfg.a_low):
        raise DomainError(f"s2 argument {t} outside ({-cfg.b_high}, {-cfg.a_low})")
    p = cfg.s2
    return p.scale * (t + cfg.b_high) ** p.gamma * (-cfg.a_low - t) ** p.delta


# ---------------- bundled reference configurations ----------------

def reference_config(name, **overrides):
    """The two reference setups used throughout the test-suite:

    'r1': alpha=1, a=1, b=2, both weights == 1.
    'r0': alpha=1, a=1, b=2**(1/3) — the symmetric case where the two
          derived surface parameters coincide.
    """
    name = name.lower()
    if name not in ("r1", "r0"):
        raise ConfigError(f"unknown reference config {name!r} (expected 'r1' or 'r0')")
    mp.prec = max(mp.prec, 360)
    b_str = "2" if name == "r1" else mp.nstr(mp.cbrt(mpf(2)), 80)
    d = {
        "alpha": "1", "a": "1", "b": b_str,
        "s1": {"gamma": "0", "delta": "0"},
        "s2": {"gamma": "0", "delta": "0"},
        "precision_bits": 256, "quad_points": 96, "n_max": 60,
    }
    d.update(overrides)
    return StarConfig.from_mapping(d)
