"""Orientation-preserving homeomorphisms of the unit circle.

A homeomorphism is stored through its lift psi: R -> R, sampled at the
uniform angles theta_j = 2 pi j / n, with psi(theta + 2 pi) = psi(theta) + 2 pi.
Only degree-one, orientation-preserving maps are represented. In the
non-overlapping model the orientation of a rigging is carried by which side
of the circle (disk or exterior) the map lives on, so no runtime flag is
needed for orientation-reversing parametrizations.

Off-grid values use cubic Hermite interpolation of the lift. Node slopes
come from the spectral derivative of the periodic part psi - theta and are
then limited in the Fritsch-Carlson way, so the interpolant is monotone by
construction while staying fourth-order accurate on smooth data.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateProbe, InvalidParameter, MonotonicityViolation

TWO_PI = 2.0 * np.pi
DEFAULT_N = 1024


def uniform_angles(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def spectral_derivative(values: np.ndarray) -> np.ndarray:
    """Derivative of a real periodic function sampled on a uniform grid."""
    n = values.size
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(values)).real


def _limit_slopes(x: np.ndarray, y: np.ndarray, d: np.ndarray, period: float) -> np.ndarray:
    xe = np.append(x, x[0] + period)
    ye = np.append(y, y[0] + period)
    secant = np.diff(ye) / np.diff(xe)
    d = np.maximum(d, 0.0)
    alpha = d / secant
    beta = np.roll(d, -1) / secant
    radius = np.hypot(alpha, beta)
    tau = np.where(radius > 3.0, 3.0 / np.maximum(radius, 1e-300), 1.0)
    return d * np.minimum(tau, np.roll(tau, 1))


def hermite_lift(x: np.ndarray, y: np.ndarray, d: np.ndarray, query, period: float = TWO_PI):
    """Evaluate the periodic-lift Hermite interpolant through (x, y, d).

    ``x`` must be strictly increasing with ``x[-1] < x[0] + period``; the
    interpolant satisfies y(q + period) = y(q) + period.
    """
    q = np.asarray(query, dtype=float)
    xe = np.append(x, x[0] + period)
    ye = np.append(y, y[0] + period)
    de = np.append(d, d[0])
    shift = np.floor((q - x[0]) / period)
    qr = q - shift * period
    idx = np.clip(np.searchsorted(xe, qr, side="right") - 1, 0, x.size - 1)
    x0, x1 = xe[idx], xe[idx + 1]
    h = x1 - x0
    s = (qr - x0) / h
    s2 = s * s
    s3 = s2 * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    out = h00 * ye[idx] + h10 * h * de[idx] + h01 * ye[idx + 1] + h11 * h * de[idx + 1]
    return out + shift * period


class CircleHomeo:
    """Sampled lift of an orientation-preserving circle homeomorphism."""

    __slots__ = ("_lift", "_slopes")

    def __init__(self, lift, normalize: bool = True):
        lift = np.array(lift, dtype=float)
        if lift.ndim != 1 or not _is_power_of_two(lift.size):
            raise InvalidParameter(f"lift must be 1-D with power-of-two length, got shape {lift.shape}")
        if not np.all(np.isfinite(lift)):
            raise InvalidParameter("lift contains non-finite values")
        if normalize:
            lift = lift - TWO_PI * np.floor(lift[0] / TWO_PI)
            if lift[0] >= TWO_PI:
                # a tiny negative start rounds up to exactly 2 pi
                lift = lift - TWO_PI
        steps = np.diff(np.append(lift, lift[0] + TWO_PI))
        if np.any(steps <= 0.0):
            bad = int(np.argmin(steps))
            raise MonotonicityViolation(
                f"lift not strictly increasing with degree one (step {bad}: {steps[bad]:.3e})"
            )
        lift.setflags(write=False)
        self._lift = lift
        self._slopes = None

    @property
    def lift(self) -> np.ndarray:
        return self._lift

    @property
    def n(self) -> int:
        return self._lift.size

    @property
    def orientation(self) -> int:
        return 1

    @property
    def angles(self) -> np.ndarray:
        return uniform_angles(self.n)

    def slopes(self) -> np.ndarray:
        if self._slopes is None:
            theta = self.angles
            raw = 1.0 + spectral_derivative(self._lift - theta)
            slopes = _limit_slopes(theta, self._lift, raw, TWO_PI)
            slopes.setflags(write=False)
            self._slopes = slopes
        return self._slopes

    def __call__(self, theta):
        """Lift value at arbitrary angles."""
        return hermite_lift(self.angles, self._lift, self.slopes(), theta)

    def boundary_values(self) -> np.ndarray:
        return np.exp(1j * self._lift)

    def __repr__(self):
        return f"CircleHomeo(n={self.n}, psi0={self._lift[0]:.6g})"


def identity(n: int = DEFAULT_N) -> CircleHomeo:
    return CircleHomeo(uniform_angles(n))


def rotation(alpha: float, n: int = DEFAULT_N) -> CircleHomeo:
    return CircleHomeo(uniform_angles(n) + alpha)


def mobius_boundary(c: complex, alpha: float = 0.0, n: int = DEFAULT_N) -> CircleHomeo:
    """Boundary map of z -> e^{i alpha} (z + c) / (1 + conj(c) z)."""
    c = complex(c)
    if abs(c) >= 1.0:
        raise InvalidParameter(f"|c| must be < 1, got {abs(c)}")
    theta = uniform_angles(n)
    # arg(1 + c e^{-i theta}) stays in (-pi/2, pi/2), so no unwrapping needed
    return CircleHomeo(alpha + theta + 2.0 * np.angle(1.0 + c * np.exp(-1j * theta)))


def from_lift_function(func, n: int = DEFAULT_N) -> CircleHomeo:
    return CircleHomeo(func(uniform_angles(n)))


def compose_circle(a: CircleHomeo, b: CircleHomeo) -> CircleHomeo:
    """Lift of a o b sampled on the common grid."""
    if a.n != b.n:
        raise InvalidParameter(f"sample counts differ: {a.n} vs {b.n}")
    return CircleHomeo(a(b.lift))


def invert_circle(a: CircleHomeo) -> CircleHomeo:
    # Hermite through the swapped data (psi_j, theta_j) with slopes 1/psi'_j
    theta = a.angles
    raw = 1.0 + spectral_derivative(a.lift - theta)
    if np.any(raw <= 0.0):
        raise MonotonicityViolation("derivative of lift not positive; cannot invert at this resolution")
    x = a.lift
    d = _limit_slopes(x, theta, 1.0 / raw, TWO_PI)
    return CircleHomeo(hermite_lift(x, theta, d, theta))


def circle_distance(a: CircleHomeo, b: CircleHomeo) -> float:
    """Sup-norm distance between lifts, modulo the 2 pi k ambiguity."""
    diff = a.lift - b.lift
    k = np.round(np.mean(diff) / TWO_PI)
    return float(np.max(np.abs(diff - TWO_PI * k)))


def qs_probe(a: CircleHomeo, probe_count: int = 4096):
    """Sampled quasisymmetry quotient and number of skipped probes.

    The map is rotated so that it fixes 1, then conjugated to the real line
    by T(z) = i(1 + z)/(1 - z), where the point e^{i theta} corresponds to
    x = -cot(theta / 2).
    """
    if probe_count < 1:
        raise InvalidParameter("probe_count must be positive")
    side = max(2, int(np.ceil(np.sqrt(probe_count))))
    u = (np.arange(side) + 0.5) / side
    # window kept away from the pole of T, where cot differencing loses digits
    xs = np.tan(0.45 * np.pi * (2.0 * u - 1.0))
    ts = np.logspace(-2, 2, side)
    x, t = np.meshgrid(xs, ts)

    psi0 = a.lift[0]

    def h(x):
        theta = np.pi + 2.0 * np.arctan(x)
        return -1.0 / np.tan(0.5 * (a(theta) - psi0))

    hx = h(x)
    num = h(x + t) - hx
    den = hx - h(x - t)
    ok = (np.abs(den) >= 1e-14) & (np.abs(num) >= 1e-14)
    skipped = int(np.count_nonzero(~ok))
    if not np.any(ok):
        raise DegenerateProbe(f"all {x.size} probes degenerate")
    q = num[ok] / den[ok]
    return float(np.max(np.maximum(q, 1.0 / q))), skipped


def qs_quotient(a: CircleHomeo, probe_count: int = 4096) -> float:
    """Sampled lower bound for the quasisymmetry constant."""
    return qs_probe(a, probe_count)[0]
