"""Pre-Schwarzian chart coordinates and the numerical holomorphy probe.

A disk map f is charted by chi(f) = (f''/f', f'(0)); an annulus (f, g) by
chi(f) together with chi(S(g)), where S(g)(z) = 1/g(1/z). The last slot of a
chart point stores g'(oo), which is the reciprocal of S(g)'(0).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexfn import (
    DEFAULT_M,
    DEFAULT_N,
    DISK_FIT_RADIUS,
    DiskMap,
    ExteriorMap,
    circle_points,
    fit_power_series,
)
from .errors import DerivativeVanishes, InvalidParameter, ZeroInImage

DERIVATIVE_FLOOR = 1e-10


def _as_series(u) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(u, dtype=complex))
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidParameter("series must be a non-empty 1-D coefficient list")
    return arr


def pre_schwarzian_fit(f: DiskMap, length: int | None = None, n: int = DEFAULT_N,
                       fit_radius: float = DISK_FIT_RADIUS):
    """Coefficients c_0..c_{length-1} of f''/f' and the discarded-band residual."""
    length = length or f.trunc_m
    z = circle_points(n, fit_radius)
    d1 = f.derivative(z)
    if np.min(np.abs(d1)) < DERIVATIVE_FLOOR:
        raise DerivativeVanishes(f"|f'| = {np.min(np.abs(d1)):.3e} on |z| = {fit_radius}")
    return fit_power_series(f.second_derivative(z) / d1, fit_radius, length)


def pre_schwarzian(f: DiskMap, length: int | None = None, n: int = DEFAULT_N) -> np.ndarray:
    return pre_schwarzian_fit(f, length, n)[0]


def exterior_pre_schwarzian_fit(g: ExteriorMap, length: int | None = None, n: int = DEFAULT_N,
                                fit_radius: float = DISK_FIT_RADIUS):
    """Coefficients of Psi(S(g)), computed from g itself.

    With w = 1/z, Psi(S(g))(z) = -w^2 g''/g' - 2w + 2w^2 g'/g, which avoids
    refitting S(g) as a truncated series first.
    """
    length = length or max(g.trunc_m, 1)
    if g.const == 0 and not np.any(g.neg):
        # S(a w) = z / a exactly
        return np.zeros(length, dtype=complex), 0.0
    w = 1.0 / circle_points(n, fit_radius)
    gv = g(w)
    if np.min(np.abs(gv)) == 0:
        raise ZeroInImage("g vanishes on the sampling circle")
    d1 = g.derivative(w)
    if np.min(np.abs(d1)) < DERIVATIVE_FLOOR:
        raise DerivativeVanishes(f"|g'| = {np.min(np.abs(d1)):.3e} on |w| = {1 / fit_radius:.6g}")
    vals = -w * w * g.second_derivative(w) / d1 - 2.0 * w + 2.0 * w * w * d1 / gv
    return fit_power_series(vals, fit_radius, length)


def chi(f: DiskMap, length: int | None = None, n: int = DEFAULT_N):
    return pre_schwarzian(f, length, n), complex(f.derivative_at_zero)


def chi_inverse(u, q: complex, trunc_m: int | None = None) -> DiskMap:
    """The disk map f with f(0) = 0, f'(0) = q and f''/f' = u.

    Works on coefficients: f' = q exp(U) with U' = u, expanded by the power
    series recursion n E_n = sum_{k=1}^{n} u_{k-1} E_{n-k}.
    """
    u = _as_series(u)
    q = complex(q)
    if q == 0:
        raise InvalidParameter("q must be non-zero")
    m = trunc_m or max(DEFAULT_M, u.size)
    ext = np.zeros(m, dtype=complex)
    ext[: min(u.size, m)] = u[:m]
    e = np.zeros(m, dtype=complex)
    e[0] = 1.0
    for j in range(1, m):
        e[j] = np.dot(ext[:j], e[j - 1 :: -1]) / j
    return DiskMap(q * e / np.arange(1, m + 1))


def _grid_values(v, radii, n_angle):
    """Values of v on the polar grid radii x (2 pi j / n_angle)."""
    if callable(v):
        z = radii[:, None] * np.exp(2j * np.pi * np.arange(n_angle) / n_angle)[None, :]
        return np.asarray(v(z), dtype=complex)
    c = _as_series(v)
    spec = np.zeros((radii.size, n_angle), dtype=complex)
    k = np.arange(c.size)
    spec[:, : c.size] = c[None, :] * radii[:, None] ** k[None, :]
    return np.fft.ifft(spec, axis=1) * n_angle


def _weighted_sup(v, radial_samples: int, shift: float, max_levels: int = 5) -> float:
    n_angle = 256
    if not callable(v):
        while n_angle < 2 * _as_series(v).size:
            n_angle *= 2
    nr = radial_samples
    best = None
    for _ in range(max_levels):
        # log-spaced in 1 - r so the boundary layer is resolved
        radii = np.concatenate([[0.0], 1.0 - np.logspace(-8, 0, nr)[::-1][1:]])
        vals = _grid_values(v, radii, n_angle)
        weight = (1.0 - radii**2)[:, None]
        zbar = np.conj(radii[:, None] * np.exp(2j * np.pi * np.arange(n_angle) / n_angle)[None, :])
        current = float(np.max(np.abs(weight * vals - shift * zbar)))
        if best is not None and abs(current - best) <= 1e-4 * max(abs(current), 1e-300):
            return max(current, best)
        best = current if best is None else max(best, current)
        nr *= 2
        n_angle *= 2
    return best


def norm_1inf(v, radial_samples: int = 64) -> float:
    """Sampled sup over the disk of (1 - |z|^2)|v(z)|.

    ``v`` is a coefficient list or a callable; the grid is refined until the
    estimate changes by less than 1e-4 relative, so the result is a lower
    bound on the true supremum.
    """
    return _weighted_sup(v, radial_samples, 0.0)


def univalence_defect(u, radial_samples: int = 64) -> float:
    """Sampled sup of |(1 - |z|^2) u(z) - 2 conj(z)|; at most 4 for univalent f with u = Psi(f)."""
    return _weighted_sup(u, radial_samples, 2.0)


@dataclass(frozen=True)
class ChartPoint:
    u0: np.ndarray
    q0: complex
    uinf: np.ndarray
    qinf: complex
    norm_cache: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.q0 == 0 or self.qinf == 0:
            raise InvalidParameter("chart point needs q0 != 0 and qinf != 0")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.u0, [self.q0], self.uinf, [self.qinf]])


def chart_distance(a: ChartPoint, b: ChartPoint) -> float:
    m = max(a.u0.size, b.u0.size, a.uinf.size, b.uinf.size)

    def pad(c):
        out = np.zeros(m, dtype=complex)
        out[: c.size] = c
        return out

    return float(max(np.max(np.abs(pad(a.u0) - pad(b.u0))), abs(a.q0 - b.q0),
                     np.max(np.abs(pad(a.uinf) - pad(b.uinf))), abs(a.qinf - b.qinf)))


def big_chart(x, n: int = DEFAULT_N) -> ChartPoint:
    """(Psi(f), f'(0), Psi(S(g)), g'(oo)) for a rigged annulus x = (f, g)."""
    m = x.trunc_m
    u0, q0 = chi(x.f, m, n)
    uinf, _ = exterior_pre_schwarzian_fit(x.g, m, n)
    return ChartPoint(u0, q0, uinf, complex(x.g.lead))


def perturb(x, v, t: complex):
    """x moved along the chart line t -> chi_inverse(Psi(f) + t v, f'(0))."""
    from .semigroup import RiggedAnnulus

    u, q = chi(x.f)
    v = _as_series(v)
    step = np.zeros_like(u)
    step[: min(v.size, u.size)] = v[: u.size]
    f = chi_inverse(u + t * step, q, x.f.trunc_m)
    return RiggedAnnulus(f, x.g, tag=x.tag, a=x.a)


def chart_derivatives(x, y, v=None, h: float = 1e-3, slot: str = "left", n: int = DEFAULT_N):
    """Real and imaginary central differences of B(x(t) . y) (or B(x . y(t)))."""
    from .semigroup import multiply

    if h <= 0:
        raise InvalidParameter("step h must be positive")
    if slot not in ("left", "right"):
        raise InvalidParameter(f"slot must be 'left' or 'right', got {slot!r}")
    v = np.array([1.0 + 0j]) if v is None else _as_series(v)

    def chart_at(t):
        if slot == "left":
            product = multiply(perturb(x, v, t), y, n=n)
        else:
            product = multiply(x, perturb(y, v, t), n=n)
        return big_chart(product, n).as_vector()

    d_real = (chart_at(h) - chart_at(-h)) / (2 * h)
    d_imag = (chart_at(1j * h) - chart_at(-1j * h)) / (2j * h)
    return d_real, d_imag


def holo_probe(x, y, v=None, h: float = 1e-3, slot: str = "left", n: int = DEFAULT_N) -> float:
    """Sup-norm gap between the real and imaginary central differences of the product.

    For a product that is complex-differentiable in chart coordinates the two
    difference quotients agree up to O(h^2). Perturbing the left factor of a
    bounded-univalent pair moves the product along an affine chart line, so
    there the gap is pure round-off; ``slot="right"`` probes a curved direction.
    """
    d_real, d_imag = chart_derivatives(x, y, v, h, slot, n)
    return float(np.max(np.abs(d_imag - d_real)))


def richardson(x, y, v=None, steps=(1e-2, 1e-3), slot: str = "left", n: int = DEFAULT_N):
    """Residuals at two step sizes and the observed order log(r1/r2)/log(h1/h2)."""
    r = [holo_probe(x, y, v, h, slot, n) for h in steps]
    if r[1] == 0 or r[0] == 0:
        return tuple(r), float("nan")
    return tuple(r), float(np.log(r[0] / r[1]) / np.log(steps[0] / steps[1]))
