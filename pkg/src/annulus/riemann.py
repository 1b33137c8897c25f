"""Interior and exterior Riemann maps of Jordan curves.

Both problems reduce to finding the boundary correspondence s(t) with
h(e^{it}) = gamma(s(t)). For the interior map, log(h(z)/z) is holomorphic in
the disk; for the exterior map, log(h(w)/w) is holomorphic in the exterior
including infinity. Either way its imaginary part on the circle is the
conjugate function of its real part, up to sign:

    arg gamma(s) - t - sign * K[log |gamma(s)|] = 0,    sign = +1 / -1,

with K the discrete conjugation operator. The normalisations h(0) = 0,
h'(0) > 0 (resp. h(oo) = oo, h'(oo) > 0) are built into this equation; it
requires 0 to lie inside the curve.

Starlike curves are handled with Theodorsen's fixed-point sweep; when that
stalls (or the curve is not starlike about 0) a dense Newton iteration on the
same equation takes over.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import numpy as np

from .circle import TWO_PI, CircleHomeo, uniform_angles
from .complexfn import (
    DEFAULT_M,
    DEFAULT_N,
    circle_points,
    fit_series,
    winding_number,
)
from .errors import ClassificationError, InvalidInput, NotStarlikeFallbackFailed

log = logging.getLogger(__name__)

TOL_BOUNDARY = 1e-7
MAX_ITER = 200


class JordanCurve:
    """A positively oriented closed curve gamma(s), s in [0, 2 pi).

    Built either from uniform-parameter samples (interpolated trigonometrically
    or piecewise linearly) or from the boundary values of a series map, which
    is then evaluated exactly.
    """

    def __init__(self, points, interp: str = "fourier", check: bool = True):
        pts = np.asarray(points, dtype=complex).ravel()
        if pts.size < 8:
            raise InvalidInput("curve needs at least 8 points")
        if not np.all(np.isfinite(pts)):
            raise InvalidInput("curve has non-finite points")
        if interp not in ("fourier", "linear"):
            raise InvalidInput(f"unknown interpolation {interp!r}")
        self._points = pts
        self._interp = interp
        self._func = None
        if interp == "fourier":
            n = pts.size
            spec = np.fft.fft(pts) / n
            k = np.fft.fftfreq(n, 1.0 / n)
            if n % 2 == 0:
                # split the Nyquist mode symmetrically
                spec = np.append(spec, spec[n // 2] / 2)
                spec[n // 2] /= 2
                k = np.append(k, n // 2)
                k[n // 2] = -n // 2
            keep = np.abs(spec) > 1e-15 * np.max(np.abs(spec))
            self._modes = k[keep]
            self._spec = spec[keep]
        if check:
            self._validate()

    @classmethod
    def from_map(cls, fmap, n: int = DEFAULT_N) -> "JordanCurve":
        curve = cls.__new__(cls)
        curve._func = fmap
        curve._interp = "exact"
        curve._points = fmap(circle_points(n))
        curve._validate()
        return curve

    def _validate(self):
        if self.signed_area() <= 0:
            raise InvalidInput("curve must be positively oriented")
        if _self_intersects(self._points):
            raise InvalidInput("curve self-intersects at sample resolution")

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return self._points.size

    def signed_area(self) -> float:
        p = self._points
        q = np.roll(p, -1)
        return 0.5 * float(np.sum(p.real * q.imag - q.real * p.imag))

    @property
    def bounded_side_area(self) -> float:
        return abs(self.signed_area())

    @property
    def contains_zero(self) -> bool:
        return winding_number(self._points) == 1

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self._func is not None:
            return self._func(np.exp(1j * s), check=False)
        if self._interp == "fourier":
            return np.exp(1j * np.multiply.outer(s, self._modes)) @ self._spec
        return self._linear(s)[0]

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        if self._func is not None:
            w = np.exp(1j * s)
            return 1j * w * self._func.derivative(w, check=False)
        if self._interp == "fourier":
            return np.exp(1j * np.multiply.outer(s, self._modes)) @ (1j * self._modes * self._spec)
        return self._linear(s)[1]

    def _linear(self, s):
        n = self.n
        x = s * n / TWO_PI
        j = np.floor(x)
        frac = x - j
        j = j.astype(int) % n
        p0 = self._points[j]
        p1 = self._points[(j + 1) % n]
        return p0 + frac * (p1 - p0), (p1 - p0) * n / TWO_PI

    @functools.cached_property
    def _arg_reference(self):
        m = 4 * max(self.n, 256)
        s = uniform_angles(m)
        vals = self(s)
        return s, np.unwrap(np.angle(vals)) - s

    def arg(self, s):
        """Continuous branch of arg gamma(s) with arg gamma(s + 2 pi) = arg gamma(s) + 2 pi."""
        s = np.asarray(s, dtype=float)
        ref_s, ref_off = self._arg_reference
        approx = s + np.interp(np.mod(s, TWO_PI), np.append(ref_s, TWO_PI),
                               np.append(ref_off, ref_off[0]))
        principal = np.angle(self(s))
        return principal + TWO_PI * np.round((approx - principal) / TWO_PI)

    def is_starlike(self) -> bool:
        s = uniform_angles(4 * max(self.n, 256))
        return bool(np.min((self.derivative(s) / self(s)).imag) > 0)


def _self_intersects(points, max_segments: int = 256) -> bool:
    step = max(1, points.size // max_segments)
    p = points[::step]
    a, b = p, np.roll(p, -1)
    m = p.size

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    d = b - a
    o1 = cross(d[:, None], a[None, :] - a[:, None])
    o2 = cross(d[:, None], b[None, :] - a[:, None])
    o3 = cross(d[None, :], a[:, None] - a[None, :])
    o4 = cross(d[None, :], b[:, None] - a[None, :])
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(m)
    near = (np.abs(idx[:, None] - idx[None, :]) <= 1) | (np.abs(idx[:, None] - idx[None, :]) == m - 1)
    return bool(np.any(hit & ~near))


@functools.lru_cache(maxsize=8)
def _conjugation_symbol(n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, 1.0 / n)
    sym = -1j * np.sign(k)
    if n % 2 == 0:
        sym[n // 2] = 0.0
    return sym


def conjugate(u: np.ndarray) -> np.ndarray:
    """Discrete conjugate function of real periodic samples (zero mean output)."""
    return np.fft.ifft(_conjugation_symbol(u.size) * np.fft.fft(u)).real


@functools.lru_cache(maxsize=4)
def _conjugation_matrix(n: int) -> np.ndarray:
    mat = np.fft.ifft(_conjugation_symbol(n)[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0).real
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class RiemannMap:
    map: object
    correspondence: CircleHomeo
    boundary_residual: float
    equation_residual: float
    iterations: int
    method: str

    def __iter__(self):
        yield self.map
        yield self.correspondence


def _equation(curve, s, t, sign):
    gs = curve(s)
    return curve.arg(s) - t - sign * conjugate(np.log(np.abs(gs)))


def _invert_arg(curve, theta, s0, iters: int = 60):
    s = s0.copy()
    prev = np.inf
    for _ in range(iters):
        gs = curve(s)
        dg = curve.derivative(s)
        step = (curve.arg(s) - theta) / (dg / gs).imag
        step = np.clip(step, -0.5, 0.5)
        s -= step
        size = float(np.max(np.abs(step)))
        # quadratic convergence ends at round-off; stop once steps stall there
        if size < 1e-14 or (size < 1e-12 and size > 0.5 * prev):
            break
        prev = size
    return s


def _monotone(s):
    return np.all(np.diff(np.append(s, s[0] + TWO_PI)) > 0)


def solve_correspondence(curve: JordanCurve, sign: int, n: int = DEFAULT_N,
                         tol: float = 1e-13, max_iter: int = MAX_ITER):
    """Boundary correspondence s(t_j) of the interior (sign=+1) or exterior (-1) map."""
    if not curve.contains_zero:
        raise InvalidInput("curve must wind once around the origin")
    t = uniform_angles(n)
    iterations = 0
    method = "theodorsen"
    best_s, best_res = None, np.inf

    if curve.is_starlike():
        s = _invert_arg(curve, t, t.copy())
        history = []
        while iterations < max_iter:
            res = float(np.max(np.abs(_equation(curve, s, t, sign))))
            if res < best_res:
                best_s, best_res = s, res
            if res < tol:
                break
            history.append(res)
            # hand over to Newton when the linear sweep is slow or diverging
            if len(history) >= 3 and history[-1] > 0.9 * history[-2]:
                break
            iterations += 1
            theta = t + sign * conjugate(np.log(np.abs(curve(s))))
            s_new = _invert_arg(curve, theta, s)
            if not _monotone(s_new):
                break
            s = s_new
        if best_res < tol:
            return best_s, best_res, iterations, method
    else:
        best_s = t.copy()
        best_res = float(np.max(np.abs(_equation(curve, best_s, t, sign))))

    method = "newton" if iterations == 0 else "theodorsen+newton"
    kmat = _conjugation_matrix(n)
    s, res = best_s, best_res
    stalls = 0
    while iterations < max_iter and res >= tol:
        iterations += 1
        gs = curve(s)
        q = curve.derivative(s) / gs
        resid = _equation(curve, s, t, sign)
        jac = -sign * kmat * q.real[None, :]
        jac[np.diag_indices(n)] += q.imag
        try:
            delta = np.linalg.solve(jac, -resid)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        while lam > 1e-4:
            trial = s + lam * delta
            if _monotone(trial):
                trial_res = float(np.max(np.abs(_equation(curve, trial, t, sign))))
                if trial_res < res:
                    break
            lam *= 0.5
        else:
            break
        stalls = stalls + 1 if trial_res > 0.5 * res else 0
        s, res = trial, trial_res
        if stalls >= 4:
            break
    if res >= tol and res > 1e-10:
        raise NotStarlikeFallbackFailed(
            f"boundary correspondence did not converge (residual {res:.3e} after {iterations} iterations)",
            residual=res,
        )
    return s, res, iterations, method


def _solve(curve, kind, trunc_m, n, tol, max_iter):
    sign = 1 if kind == "disk" else -1
    s, eq_res, iterations, method = solve_correspondence(curve, sign, n=n, tol=tol, max_iter=max_iter)
    values = curve(s)
    fmap, _ = fit_series(values, kind, 1.0, trunc_m)
    boundary = float(np.max(np.abs(fmap(circle_points(n), check=False) - values)))
    if boundary > TOL_BOUNDARY:
        log.warning("%s map boundary residual %.2e exceeds %.0e (truncation at m=%d)",
                    kind, boundary, TOL_BOUNDARY, trunc_m)
    return RiemannMap(fmap, CircleHomeo(s), boundary, eq_res, iterations, method)


def interior_map(curve: JordanCurve, trunc_m: int = DEFAULT_M, n: int = DEFAULT_N,
                 tol: float = 1e-13, max_iter: int = MAX_ITER) -> RiemannMap:
    """Conformal map of the disk onto the inside of ``curve``, h(0)=0, h'(0)>0."""
    return _solve(curve, "disk", trunc_m, n, tol, max_iter)


def exterior_map(curve: JordanCurve, trunc_m: int = DEFAULT_M, n: int = DEFAULT_N,
                 tol: float = 1e-13, max_iter: int = MAX_ITER) -> RiemannMap:
    """Conformal map of the disk exterior onto the outside of ``curve``, h'(oo)>0."""
    return _solve(curve, "exterior", trunc_m, n, tol, max_iter)


def complementary_pair(x, trunc_m: int | None = None, n: int = DEFAULT_N):
    """(f^oo, g^0): exterior map of f(S^1) and interior map of g(S^1)."""
    from .semigroup import classify

    if not classify(x):
        raise ClassificationError("pair is not in the non-overlapping class")
    m = trunc_m or max(x.f.trunc_m, x.g.trunc_m, 1)
    f_inf = exterior_map(JordanCurve.from_map(x.f, n), trunc_m=m, n=n)
    g_zero = interior_map(JordanCurve.from_map(x.g, n), trunc_m=m, n=n)
    return f_inf, g_zero
