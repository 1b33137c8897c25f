"""Truncated series for univalent maps on the disk and on its exterior.

``DiskMap`` holds f(z) = sum_{k=1}^M a_k z^k (so f(0) = 0 structurally).
``ExteriorMap`` holds g(w) = b w + b_0 + sum_{k=1}^M b_k w^{-k}, normalised by
g(oo) = oo. Coefficient arrays are the source of truth; boundary samples are
always regenerated from them.

Plain power series with a constant term (pre-Schwarzians, chart
coordinates) are bare complex numpy arrays indexed by the power of z.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    AliasingError,
    DomainViolation,
    InvalidParameter,
    RangeViolation,
    ZeroInImage,
)

DEFAULT_M = 64
DEFAULT_N = 1024
DISK_FIT_RADIUS = 0.95
EXTERIOR_FIT_RADIUS = 1.05
ALIASING_LIMIT = 0.10
_DOMAIN_SLACK = 1e-12


def circle_points(n: int, radius: float = 1.0) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(n) / n)


def _as_complex_array(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


class DiskMap:
    """f(z) = sum_{k=1}^M a_k z^k on the closed unit disk."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        coeffs = _as_complex_array(coeffs).ravel()
        if coeffs.size == 0:
            raise InvalidParameter("DiskMap needs at least one coefficient")
        self._coeffs = coeffs

    @classmethod
    def identity(cls, m: int = DEFAULT_M) -> "DiskMap":
        c = np.zeros(m, dtype=complex)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def from_function(cls, func, m: int = DEFAULT_M, n: int = DEFAULT_N,
                      fit_radius: float = DISK_FIT_RADIUS) -> "DiskMap":
        z = circle_points(n, fit_radius)
        return fit_series(func(z), "disk", fit_radius, m)[0]

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def trunc_m(self) -> int:
        return self._coeffs.size

    @property
    def derivative_at_zero(self) -> complex:
        return complex(self._coeffs[0])

    def _check(self, z):
        if np.any(np.abs(z) > 1.0 + _DOMAIN_SLACK):
            raise DomainViolation(f"DiskMap evaluated at |z| = {np.max(np.abs(z)):.6g} > 1")

    def __call__(self, z, check: bool = True):
        z = np.asarray(z, dtype=complex)
        if check:
            self._check(z)
        return z * np.polyval(self._coeffs[::-1], z)

    def derivative(self, z, check: bool = True):
        z = np.asarray(z, dtype=complex)
        if check:
            self._check(z)
        k = np.arange(1, self.trunc_m + 1)
        return np.polyval((k * self._coeffs)[::-1], z)

    def second_derivative(self, z, check: bool = True):
        z = np.asarray(z, dtype=complex)
        if check:
            self._check(z)
        k = np.arange(2, self.trunc_m + 1)
        if k.size == 0:
            return np.zeros_like(z)
        return np.polyval((k * (k - 1) * self._coeffs[1:])[::-1], z)

    def scaled(self, lam: complex) -> "DiskMap":
        return DiskMap(lam * self._coeffs)

    def boundary_samples(self, n: int = DEFAULT_N, radius: float = 1.0) -> np.ndarray:
        return self(circle_points(n, radius))

    def padded(self, m: int) -> np.ndarray:
        out = np.zeros(max(m, self.trunc_m), dtype=complex)
        out[: self.trunc_m] = self._coeffs
        return out

    def __repr__(self):
        return f"DiskMap(m={self.trunc_m}, a1={self._coeffs[0]:.6g})"


class ExteriorMap:
    """g(w) = lead * w + const + sum_{k=1}^M neg_k w^{-k} on |w| >= 1."""

    __slots__ = ("_lead", "_const", "_neg")

    def __init__(self, lead: complex, const: complex = 0.0, neg=()):
        lead = complex(lead)
        if lead == 0:
            raise InvalidParameter("ExteriorMap lead coefficient must be non-zero")
        self._lead = lead
        self._const = complex(const)
        self._neg = _as_complex_array(neg).ravel()

    @classmethod
    def identity(cls, m: int = DEFAULT_M) -> "ExteriorMap":
        return cls(1.0, 0.0, np.zeros(m, dtype=complex))

    @classmethod
    def from_function(cls, func, m: int = DEFAULT_M, n: int = DEFAULT_N,
                      fit_radius: float = EXTERIOR_FIT_RADIUS) -> "ExteriorMap":
        w = circle_points(n, fit_radius)
        return fit_series(func(w), "exterior", fit_radius, m)[0]

    @property
    def lead(self) -> complex:
        return self._lead

    @property
    def const(self) -> complex:
        return self._const

    @property
    def neg(self) -> np.ndarray:
        return self._neg

    @property
    def trunc_m(self) -> int:
        return self._neg.size

    def _check(self, w):
        if np.any(np.abs(w) < 1.0 - _DOMAIN_SLACK):
            raise DomainViolation(f"ExteriorMap evaluated at |w| = {np.min(np.abs(w)):.6g} < 1")

    def __call__(self, w, check: bool = True):
        w = np.asarray(w, dtype=complex)
        if check:
            self._check(w)
        u = 1.0 / w
        tail = u * np.polyval(self._neg[::-1], u) if self.trunc_m else 0.0
        return self._lead * w + self._const + tail

    def derivative(self, w, check: bool = True):
        w = np.asarray(w, dtype=complex)
        if check:
            self._check(w)
        if not self.trunc_m:
            return np.full_like(w, self._lead)
        u = 1.0 / w
        k = np.arange(1, self.trunc_m + 1)
        return self._lead - u * u * np.polyval((k * self._neg)[::-1], u)

    def second_derivative(self, w, check: bool = True):
        w = np.asarray(w, dtype=complex)
        if check:
            self._check(w)
        if not self.trunc_m:
            return np.zeros_like(w)
        u = 1.0 / w
        k = np.arange(1, self.trunc_m + 1)
        return u**3 * np.polyval((k * (k + 1) * self._neg)[::-1], u)

    def scaled(self, lam: complex) -> "ExteriorMap":
        return ExteriorMap(lam * self._lead, lam * self._const, lam * self._neg)

    def boundary_samples(self, n: int = DEFAULT_N, radius: float = 1.0) -> np.ndarray:
        return self(circle_points(n, radius))

    def padded(self, m: int) -> np.ndarray:
        """[lead, const, neg_1, ..., neg_m] zero-padded to length m + 2."""
        out = np.zeros(max(m, self.trunc_m) + 2, dtype=complex)
        out[0] = self._lead
        out[1] = self._const
        out[2 : 2 + self.trunc_m] = self._neg
        return out

    def tail_distance_to_identity(self) -> float:
        vals = [abs(self._lead - 1.0), abs(self._const)]
        if self.trunc_m:
            vals.append(float(np.max(np.abs(self._neg))))
        return max(vals)

    def __repr__(self):
        return f"ExteriorMap(m={self.trunc_m}, lead={self._lead:.6g}, const={self._const:.6g})"


def coeff_distance(a, b) -> float:
    """Coefficientwise sup distance between two maps of the same kind."""
    if isinstance(a, DiskMap) and isinstance(b, DiskMap):
        m = max(a.trunc_m, b.trunc_m)
        return float(np.max(np.abs(a.padded(m) - b.padded(m))))
    if isinstance(a, ExteriorMap) and isinstance(b, ExteriorMap):
        m = max(a.trunc_m, b.trunc_m)
        return float(np.max(np.abs(a.padded(m) - b.padded(m))))
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    m = max(a.size, b.size)
    return float(np.max(np.abs(np.pad(a, (0, m - a.size)) - np.pad(b, (0, m - b.size)))))


def _project(samples, keep: np.ndarray):
    n = samples.size
    spec = np.fft.fft(samples) / n
    dropped = spec.copy()
    dropped[keep] = 0.0
    total = float(np.sum(np.abs(spec) ** 2))
    lost = float(np.sum(np.abs(dropped) ** 2))
    fraction = lost / total if total > 0 else 0.0
    residual = float(np.max(np.abs(np.fft.ifft(dropped) * n))) if lost > 0 else 0.0
    return spec, fraction, residual


def _check_grid(n: int, trunc_m: int):
    if trunc_m < 1:
        raise InvalidParameter("trunc_m must be positive")
    if n < 8 * trunc_m:
        raise InvalidParameter(f"need at least 8*trunc_m samples, got n={n}, trunc_m={trunc_m}")


def fit_series(boundary_samples, kind: str, fit_radius: float, trunc_m: int):
    """Project samples on |z| = fit_radius onto a truncated series.

    Returns ``(map, residual)`` where residual is the sup-norm on the fit
    circle of the discarded band.
    """
    samples = np.asarray(boundary_samples, dtype=complex).ravel()
    n = samples.size
    _check_grid(n, trunc_m)
    k = np.arange(1, trunc_m + 1)
    if kind == "disk":
        if fit_radius > 1.0:
            raise InvalidParameter("disk fit radius must be <= 1")
        spec, fraction, residual = _project(samples, k)
        result = DiskMap(spec[k] / fit_radius**k)
    elif kind == "exterior":
        if fit_radius < 1.0:
            raise InvalidParameter("exterior fit radius must be >= 1")
        keep = np.concatenate(([0, 1], n - k))
        spec, fraction, residual = _project(samples, keep)
        result = ExteriorMap(spec[1] / fit_radius, spec[0], spec[n - k] * fit_radius**k)
    else:
        raise InvalidParameter(f"unknown series kind {kind!r}")
    if fraction > ALIASING_LIMIT:
        raise AliasingError(
            f"{kind} fit discards {100 * fraction:.1f}% of the signal energy at trunc_m={trunc_m}",
            fraction=fraction,
        )
    return result, residual


def fit_power_series(samples, fit_radius: float, length: int):
    """Taylor coefficients c_0..c_{length-1} from samples on |z| = fit_radius."""
    samples = np.asarray(samples, dtype=complex).ravel()
    _check_grid(samples.size, length)
    k = np.arange(length)
    spec, fraction, residual = _project(samples, k)
    if fraction > ALIASING_LIMIT:
        raise AliasingError(
            f"power-series fit discards {100 * fraction:.1f}% of the signal energy", fraction=fraction
        )
    return spec[k] / fit_radius**k, residual


def eval_power_series(coeffs, z):
    return np.polyval(np.asarray(coeffs, dtype=complex)[::-1], np.asarray(z, dtype=complex))


def winding_number(values) -> int:
    """Winding number about 0 of a closed sampled curve."""
    v = np.asarray(values, dtype=complex)
    steps = np.angle(np.roll(v, -1) / v)
    return int(np.round(np.sum(steps) / (2 * np.pi)))


def is_univalent(fmap, n: int = DEFAULT_N, radius: float | None = None) -> bool:
    """Argument-principle check on a circle just inside the natural domain.

    A disk map must wind once about 0 with a zero-free derivative; an
    exterior map must have a zero-free derivative outside the circle.
    """
    if isinstance(fmap, DiskMap):
        z = circle_points(n, DISK_FIT_RADIUS if radius is None else radius)
        vals = fmap(z)
        if np.any(vals == 0):
            return False
        return winding_number(vals) == 1 and winding_number(fmap.derivative(z)) == 0
    w = circle_points(n, EXTERIOR_FIT_RADIUS if radius is None else radius)
    return winding_number(fmap.derivative(w)) == 0


def _reflect(n: int) -> np.ndarray:
    # sample j of the reflected circle sits at angle -theta_j
    return (-np.arange(n)) % n


def s_involution(g, fit_radius: float | None = None, trunc_m: int | None = None, n: int = DEFAULT_N):
    """S(g)(z) = 1 / g(1 / z), exchanging exterior maps and disk maps."""
    if isinstance(g, ExteriorMap):
        radius = EXTERIOR_FIT_RADIUS if fit_radius is None else fit_radius
        m = (g.trunc_m or DEFAULT_M) if trunc_m is None else trunc_m
        w = circle_points(n, radius)
        gw = g(w)
        if np.min(np.abs(gw)) < 1e-10 or winding_number(gw) != 1:
            raise ZeroInImage("exterior map takes the value 0 outside the unit disk")
        return fit_series(1.0 / gw[_reflect(n)], "disk", 1.0 / radius, m)[0]
    if isinstance(g, DiskMap):
        radius = DISK_FIT_RADIUS if fit_radius is None else fit_radius
        m = g.trunc_m if trunc_m is None else trunc_m
        z = circle_points(n, radius)
        fz = g(z)
        if np.min(np.abs(fz)) < 1e-10 or winding_number(fz) != 1:
            raise ZeroInImage("disk map vanishes away from the origin")
        return fit_series(1.0 / fz[_reflect(n)], "exterior", 1.0 / radius, m)[0]
    raise InvalidParameter(f"cannot apply S to {type(g).__name__}")


def compose_into_disk(outer: DiskMap, inner: DiskMap, fit_radius: float = DISK_FIT_RADIUS,
                      trunc_m: int | None = None, n: int = DEFAULT_N):
    """Series of outer o inner, valid when inner maps the closed disk into the disk.

    Returns ``(map, residual)``.
    """
    sup = float(np.max(np.abs(inner.boundary_samples(n))))
    if sup > 1.0 - 1e-6:
        raise RangeViolation(f"inner map reaches |z| = {sup:.6g} on the unit circle")
    m = max(outer.trunc_m, inner.trunc_m) if trunc_m is None else trunc_m
    z = circle_points(n, fit_radius)
    return fit_series(outer(inner(z)), "disk", fit_radius, m)
