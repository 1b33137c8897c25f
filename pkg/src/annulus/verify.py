"""Verification suites: every algebraic identity checked on fixture families.

A suite is an ordered list of named checks. Each check measures a residual
and compares it to a threshold. Solver failures are recorded separately from
failed comparisons so callers can tell "math wrong" from "resolution
insufficient". Reports contain no timings and are ordered by check name, so
a fixed configuration always produces the same bytes.
"""
from __future__ import annotations

import functools
import json
import os
import zlib
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import fixtures as fx
from .charts import (
    big_chart,
    chart_derivatives,
    chi,
    chi_inverse,
    norm_1inf,
    pre_schwarzian,
    richardson,
    univalence_defect,
)
from .circle import circle_distance, compose_circle, identity, mobius_boundary, rotation
from .complexfn import (
    DEFAULT_M,
    DEFAULT_N,
    DISK_FIT_RADIUS,
    DiskMap,
    ExteriorMap,
    circle_points,
    coeff_distance,
    fit_power_series,
    s_involution,
)
from .errors import AnnulusError, InvalidParameter, SolverError
from .semigroup import (
    DELTA_TOUCH,
    RiggedAnnulus,
    annulus_distance,
    classify,
    compose_e,
    infinity_derivative,
    multiply,
    normalize,
    rho,
)
from .welding import WeldingProblem, weld, weld_residual

SUITES = ("welding", "semigroup", "charts")
CONFIG_ENV = "ANNULUS_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = DEFAULT_N
    trunc_m: int = DEFAULT_M
    tol: float = 1e-9
    delta_touch: float = DELTA_TOUCH
    seed: int = 0
    output_dir: str = "."

    def __post_init__(self):
        if self.grid_n <= 0 or self.grid_n & (self.grid_n - 1):
            raise InvalidParameter(f"grid_n must be a power of two, got {self.grid_n}")
        if self.trunc_m < 1:
            raise InvalidParameter("trunc_m must be positive")
        if self.grid_n < 8 * self.trunc_m:
            raise InvalidParameter(f"grid_n={self.grid_n} must be at least 8*trunc_m={8 * self.trunc_m}")
        if self.tol <= 0 or self.delta_touch <= 0:
            raise InvalidParameter("tol and delta_touch must be positive")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_env(cls, overrides: dict | None = None, environ=None) -> "RunConfig":
        """Defaults, then the JSON file named by ANNULUS_CONFIG, then ``overrides``."""
        environ = os.environ if environ is None else environ
        data = {}
        path = environ.get(CONFIG_ENV)
        if path:
            try:
                with open(path) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InvalidParameter(f"cannot read {CONFIG_ENV}={path}: {exc}") from None
            if not isinstance(data, dict):
                raise InvalidParameter(f"{CONFIG_ENV} must hold a JSON object")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(data)


@dataclass
class Check:
    name: str
    residual: float | None
    threshold: float
    status: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    suite: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "solver_error": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        counts = self.counts
        if counts["solver_error"]:
            return 2
        return 1 if counts["fail"] else 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "checks": [
                {"name": c.name, "residual": _round(c.residual), "threshold": c.threshold,
                 "status": c.status, **({"detail": c.detail} if c.detail else {})}
                for c in self.checks
            ],
            "summary": self.counts,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def summary_text(self) -> str:
        lines = []
        for c in self.checks:
            res = "n/a" if c.residual is None else f"{c.residual:.3e}"
            note = f"  ({c.detail})" if c.detail else ""
            lines.append(f"{c.status.upper():12s} {c.name}: {res} <= {c.threshold:.1e}{note}")
        counts = self.counts
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['solver_error']} solver errors")
        return "\n".join(lines)


def _round(value):
    # four significant digits keeps the report stable against last-bit noise
    if value is None:
        return None
    return float(f"{value:.3e}")


def _rng(cfg: RunConfig, name: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, zlib.crc32(name.encode())])


def _padded(coeffs, m):
    out = np.zeros(m, dtype=complex)
    out[: len(coeffs)] = coeffs
    return out


def _flag_mismatch(got, want) -> float:
    return 0.0 if set(got) == set(want) else 1.0


# welding --------------------------------------------------------------------

def _welding_checks(cfg: RunConfig):
    m, n, tol = cfg.trunc_m, cfg.grid_n, cfg.tol

    def solve(phi, a=1.0):
        return weld(WeldingProblem(phi, a=a, trunc_m=m, grid_n=n, tol=tol))

    def identity_weld():
        F, G = solve(identity(n))
        return max(coeff_distance(F, DiskMap.identity(m)), coeff_distance(G, ExteriorMap.identity(m)))

    def rotation_weld():
        alpha = 0.7
        F, G = solve(rotation(alpha, n))
        return max(coeff_distance(F, DiskMap(_padded([np.exp(1j * alpha)], m))),
                   coeff_distance(G, ExteriorMap.identity(m)))

    def mobius_weld():
        F, G = solve(mobius_boundary(0.3, n=n))
        f0, g0 = fx.mobius_pair(0.3, m)
        return max(coeff_distance(F, f0), coeff_distance(G, g0))

    def mismatch():
        alpha = 0.5
        r = weld_residual(DiskMap.identity(m), ExteriorMap.identity(m), rotation(alpha, n))
        return abs(r - abs(np.exp(1j * alpha) - 1.0))

    checks = [
        ("welding.closed_form.identity", identity_weld, 1e-12),
        ("welding.closed_form.rotation", rotation_weld, 1e-12),
        ("welding.closed_form.mobius_0.3", mobius_weld, 1e-8),
        ("welding.residual.rotation_mismatch", mismatch, 1e-12),
    ]

    for i, c in enumerate(fx.mobius_parameters(12)):
        def mobius_roundtrip(c=c):
            f0, g0 = fx.mobius_pair(c, m)
            F, G = solve(mobius_boundary(c, n=n))
            return max(coeff_distance(F, f0), coeff_distance(G, g0))
        checks.append((f"welding.roundtrip.mobius_{i:02d}", mobius_roundtrip, 1e-6))

    for j in range(8):
        def ellipse_roundtrip(j=j):
            f0, g0, phi, a = fx.forward_pair(fx.ellipse_seed(j, n), m, n)
            F, G = solve(phi, a)
            return max(coeff_distance(F, f0), coeff_distance(G, g0))
        checks.append((f"welding.roundtrip.ellipse_{j:02d}", ellipse_roundtrip, 1e-6))

    rng = _rng(cfg, "welding.equivariance")
    for i in range(3):
        c = rng.uniform(0.05, 0.5) * np.exp(2j * np.pi * rng.uniform())
        lam = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())

        def equivariance(c=c, lam=lam):
            phi = mobius_boundary(c, n=n)
            F1, G1 = solve(phi, 1.0)
            F2, G2 = solve(phi, lam)
            return max(coeff_distance(F2, F1.scaled(lam)), coeff_distance(G2, G1.scaled(lam)))
        checks.append((f"welding.equivariance.scale_{i:02d}", equivariance, 1e-9))

    rng = _rng(cfg, "welding.rotation")
    for i in range(3):
        c = rng.uniform(0.05, 0.5) * np.exp(2j * np.pi * rng.uniform())
        alpha = rng.uniform(-np.pi, np.pi)

        def covariance(c=c, alpha=alpha):
            target = compose_circle(rotation(alpha, n), mobius_boundary(c, n=n))
            res = solve(target)
            got = rho(RiggedAnnulus(res.F, res.G, flags=frozenset({"G"})), n)
            return circle_distance(got, target)
        checks.append((f"welding.covariance.rotation_{i:02d}", covariance, 1e-6))
    return checks


# semigroup ------------------------------------------------------------------

def _semigroup_checks(cfg: RunConfig):
    m, n, tol, dt = cfg.trunc_m, cfg.grid_n, cfg.tol, cfg.delta_touch

    def mul(x, y):
        return multiply(x, y, trunc_m=m, n=n, tol=tol, delta_touch=dt)

    def e_el(coeffs):
        return RiggedAnnulus(DiskMap(_padded(coeffs, m)), ExteriorMap.identity(m)).with_flags({"A0", "E"})

    checks = []

    def exact_e():
        return annulus_distance(mul(e_el([0.5]), e_el([1 / 3])), e_el([1 / 6]))
    checks.append(("semigroup.e_oracle.half_times_third", exact_e, 1e-8))

    rng = _rng(cfg, "semigroup.e_oracle")
    for i in range(10):
        e1, e2 = fx.random_e(rng, m), fx.random_e(rng, m)

        def e_oracle(e1=e1, e2=e2):
            return annulus_distance(mul(e1, e2), compose_e(e1, e2, n))
        checks.append((f"semigroup.e_oracle.random_{i:02d}", e_oracle, 1e-6))

    rng = _rng(cfg, "semigroup.g_homomorphism")
    for i in range(10):
        cs = [rng.uniform(0.05, 0.5) * np.exp(2j * np.pi * rng.uniform()) for _ in range(2)]

        def g_hom(cs=cs):
            x, y = fx.mobius_annulus(cs[0], m), fx.mobius_annulus(cs[1], m)
            prod = mul(x, y)
            return circle_distance(rho(prod, n), compose_circle(rho(x, n), rho(y, n)))
        checks.append((f"semigroup.g_homomorphism.mobius_{i:02d}", g_hom, 1e-6))

    def rotations():
        a, b = 0.4, -1.1
        x = RiggedAnnulus(DiskMap(_padded([np.exp(1j * a)], m)), ExteriorMap.identity(m), flags=frozenset({"G"}))
        y = RiggedAnnulus(DiskMap(_padded([np.exp(1j * b)], m)), ExteriorMap.identity(m), flags=frozenset({"G"}))
        return circle_distance(rho(mul(x, y), n), rotation(a + b, n))
    checks.append(("semigroup.g_homomorphism.rotations", rotations, 1e-7))

    one = RiggedAnnulus.identity(m)
    for name, x in fx.fixture_classes(m).items():
        def left(x=x):
            return annulus_distance(mul(one, x), x)

        def right(x=x):
            return annulus_distance(mul(x, one), x)
        checks.append((f"semigroup.identity.left_{name}", left, 1e-7))
        checks.append((f"semigroup.identity.right_{name}", right, 1e-7))

    rng = _rng(cfg, "semigroup.associativity")
    patterns = ("EEG", "EGE", "GEE", "GGE", "EGG")
    for i, pattern in enumerate(patterns):
        triple = [fx.random_e(rng, m) if ch == "E" else
                  fx.mobius_annulus(rng.uniform(0.05, 0.4) * np.exp(2j * np.pi * rng.uniform()), m)
                  for ch in pattern]

        def assoc(t=triple):
            x, y, z = t
            return annulus_distance(mul(mul(x, y), z), mul(x, mul(y, z)))
        checks.append((f"semigroup.associativity.{i:02d}_{pattern}", assoc, 1e-5))

    def classify_examples():
        got = [classify(e_el([0.5]), dt, n), classify(one, dt, n), classify(fx.mobius_annulus(0.3, m), dt, n)]
        want = [{"A0", "E"}, {"G"}, {"G"}]
        return max(_flag_mismatch(g, w) for g, w in zip(got, want))
    checks.append(("semigroup.classify.examples", classify_examples, 0.0))

    rng = _rng(cfg, "semigroup.normalize")
    samples = [fx.random_a0(rng, m) for _ in range(3)]
    scales = [rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform()) for _ in range(3)]

    def h_section():
        return max(abs(infinity_derivative(normalize(x, 3 + 4j)) - (3 + 4j)) for x in samples)
    checks.append(("semigroup.normalize.h_of_section", h_section, 1e-12))

    def idempotent():
        out = 0.0
        for x, a in zip(samples, scales):
            once = normalize(x, a)
            out = max(out, annulus_distance(normalize(once, a), once))
        return out
    checks.append(("semigroup.normalize.idempotent", idempotent, 1e-12))

    def action_flags():
        # E is not scale invariant (it pins g to the identity); the disjointness predicates are
        scale_free = {"A0", "A_degenerate", "G"}
        pool = samples + [fx.mobius_annulus(0.3, m)]
        return max(_flag_mismatch(classify(normalize(x, a), dt, n) & scale_free,
                                  classify(x, dt, n) & scale_free)
                   for x, a in zip(pool, scales + [1.5j]))
    checks.append(("semigroup.normalize.flags_invariant", action_flags, 0.0))

    def s_twice():
        return max(coeff_distance(s_involution(s_involution(x.g, trunc_m=m, n=n), trunc_m=m, n=n), x.g)
                   for x in samples)
    checks.append(("semigroup.s_involution.involutive", s_twice, 1e-9))

    def qs_roundtrip():
        from .semigroup import from_qs
        phis = [mobius_boundary(0.3, n=n), rotation(0.9, n), mobius_boundary(0.25j, 0.3, n)]
        return max(circle_distance(rho(from_qs(p, m, tol), n), p) for p in phis)
    checks.append(("semigroup.from_qs.rho_roundtrip", qs_roundtrip, 1e-6))
    return checks


# charts ---------------------------------------------------------------------

def _univalent_pool(cfg: RunConfig):
    m = cfg.trunc_m
    rng = _rng(cfg, "charts.pool")
    pool = {f"class_{k}": x.f for k, x in fx.fixture_classes(m).items()}
    for i, c in enumerate(fx.mobius_parameters(12)):
        pool[f"mobius_{i:02d}"] = fx.mobius_pair(c, m)[0]
    for i in range(5):
        pool[f"random_e_{i:02d}"] = fx.random_e(rng, m).f
    return pool


def _chart_checks(cfg: RunConfig):
    m, n = cfg.trunc_m, cfg.grid_n
    checks = []

    rng = _rng(cfg, "charts.roundtrip")
    data = [fx.random_band_limited(rng, m) for _ in range(20)]

    def roundtrip():
        out = 0.0
        for u, q in data:
            u2, q2 = chi(chi_inverse(u, q, m), m, n)
            out = max(out, float(np.max(np.abs(u2 - u))), abs(q2 - q))
        return out
    checks.append(("charts.chi.roundtrip", roundtrip, 1e-9))

    for name, f in _univalent_pool(cfg).items():
        def bound(f=f):
            u = pre_schwarzian(f, m, n)
            return max(norm_1inf(u) - 6.0, univalence_defect(u) - 4.0)
        checks.append((f"charts.univalent_bound.{name}", bound, 1e-3))

    def pole_norm():
        return abs(norm_1inf(lambda z: 2.0 / (1.0 - z)) - 4.0)
    checks.append(("charts.norm_1inf.pole_example", pole_norm, 1e-3))

    rng = _rng(cfg, "charts.scale")
    f = fx.random_disk_map(rng, m)
    lam = 1.7 * np.exp(0.6j)

    def scale():
        u1, q1 = chi(f, m, n)
        u2, q2 = chi(f.scaled(lam), m, n)
        return max(float(np.max(np.abs(u2 - u1))), abs(q2 - lam * q1))
    checks.append(("charts.chi.scale_behaviour", scale, 1e-10))

    rng = _rng(cfg, "charts.theta")
    annuli = [fx.random_a0(rng, m) for _ in range(3)]

    def theta():
        out = 0.0
        for x in annuli:
            cp = big_chart(x, n)
            sg = s_involution(x.g, trunc_m=m, n=n)
            u, q = chi(sg, m, n)
            out = max(out, float(np.max(np.abs(cp.uinf - u))), abs(cp.qinf - 1.0 / q),
                      float(np.max(np.abs(cp.u0 - chi(x.f, m, n)[0]))))
        return out
    checks.append(("charts.big_chart.theta_consistency", theta, 1e-9))

    def e_image():
        x = RiggedAnnulus(DiskMap(_padded([0.5], m)), ExteriorMap.identity(m))
        cp = big_chart(x, n)
        return float(max(np.max(np.abs(cp.uinf)), abs(cp.qinf - 1.0), np.max(np.abs(cp.u0)),
                         abs(cp.q0 - 0.5)))
    checks.append(("charts.big_chart.e_image", e_image, 0.0))

    rng = _rng(cfg, "charts.holo")
    x_a, y_a = fx.random_a0(rng, m), fx.random_a0(rng, m)
    x_e, y_e = fx.random_e(rng, m), fx.random_e(rng, m)

    for label, x, y, slot in (("a0", x_a, y_a, "left"), ("e", x_e, y_e, "right")):
        probe = functools.cache(lambda x=x, y=y, slot=slot: richardson(x, y, slot=slot, n=n))
        checks.append((f"charts.holomorphy.{label}_residual", lambda p=probe: p()[0][1], 1e-3))
        # O(h^2): the observed order over h = 1e-2, 1e-3 stays within half a unit of 2
        checks.append((f"charts.holomorphy.{label}_order", lambda p=probe: abs(p()[1] - 2.0), 0.5))

    def e_symbolic():
        # d/dt Psi(f1_t o f2) = v(f2) f2' with v = 1; every other chart slot is constant
        d_real, d_imag = chart_derivatives(x_e, y_e, n=n)
        z = circle_points(n, DISK_FIT_RADIUS)
        sym = fit_power_series(y_e.f.derivative(z), DISK_FIT_RADIUS, m)[0]
        expected = np.concatenate([sym, np.zeros(d_real.size - m)])
        return float(max(np.max(np.abs(d_real - expected)), np.max(np.abs(d_imag - d_real))))
    checks.append(("charts.holomorphy.e_symbolic", e_symbolic, 1e-4))
    return checks


_BUILDERS = {"welding": _welding_checks, "semigroup": _semigroup_checks, "charts": _chart_checks}


def run_verify(config: RunConfig, suite: str = "all") -> Report:
    if suite != "all" and suite not in SUITES:
        raise InvalidParameter(f"suite must be one of {SUITES + ('all',)}, got {suite!r}")
    names = SUITES if suite == "all" else (suite,)
    report = Report(suite, {k: v for k, v in asdict(config).items() if k != "output_dir"})
    entries = []
    for name in names:
        try:
            entries.extend(_BUILDERS[name](config))
        except SolverError as exc:
            report.checks.append(Check(f"{name}.fixtures", None, 0.0, "solver_error",
                                       f"{type(exc).__name__}: {exc}"))
    for check_name, thunk, threshold in sorted(entries, key=lambda e: e[0]):
        try:
            residual = float(thunk())
        except SolverError as exc:
            report.checks.append(Check(check_name, None, threshold, "solver_error",
                                       f"{type(exc).__name__}: {exc}"))
            continue
        except AnnulusError as exc:
            report.checks.append(Check(check_name, None, threshold, "fail", f"{type(exc).__name__}: {exc}"))
            continue
        ok = np.isfinite(residual) and residual <= threshold
        report.checks.append(Check(check_name, residual, threshold, "pass" if ok else "fail"))
    report.checks.sort(key=lambda c: c.name)
    return report
