"""Rigged annuli as non-overlapping pairs (f, g) and their multiplication.

An element is a disk map f with f(0) = 0 and an exterior map g with
g(oo) = oo whose images do not overlap. The standard representative has
g'(oo) = 1; scaling by a in C* moves between representatives.

The product of (f1, g1) and (f2, g2) is computed as

    1. f1_inf = exterior map of f1(S^1), g2_0 = interior map of g2(S^1);
    2. phi1 = f1_inf^{-1} o f1 and phi2 = g2^{-1} o g2_0 on the circle;
    3. (F, G) = welding pair of phi1 o phi2 with G'(oo) = f1_inf'(oo);
    4. (F o g2_0^{-1} o f2, G o f1_inf^{-1} o g1), refitted as series.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial import cKDTree

from .circle import TWO_PI, CircleHomeo, compose_circle, invert_circle, uniform_angles
from .complexfn import (
    DEFAULT_M,
    DEFAULT_N,
    DISK_FIT_RADIUS,
    EXTERIOR_FIT_RADIUS,
    DiskMap,
    ExteriorMap,
    circle_points,
    coeff_distance,
    compose_into_disk,
    fit_series,
    is_univalent,
)
from .errors import ClassificationError, InvalidParameter, InversionFailure, UnivalenceFailure
from .riemann import JordanCurve, exterior_map, interior_map
from .welding import WeldingProblem, weld

DELTA_TOUCH = 1e-4
FLAG_ORDER = ("A0", "A_degenerate", "E", "G")


@dataclass(frozen=True)
class RiggedAnnulus:
    f: DiskMap
    g: ExteriorMap
    tag: str = "standard"
    a: complex | None = None
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.tag not in ("raw", "a_normalized", "standard"):
            raise InvalidParameter(f"unknown normalisation tag {self.tag!r}")
        if self.tag == "a_normalized":
            if self.a is None:
                raise InvalidParameter("a_normalized tag needs the constant a")
            if abs(self.g.lead - self.a) >= 1e-12 * max(1.0, abs(self.a)):
                raise InvalidParameter(f"g'(oo) = {self.g.lead} does not match a = {self.a}")
        if self.tag == "standard" and abs(self.g.lead - 1.0) >= 1e-12:
            raise InvalidParameter(f"standard annulus needs g'(oo) = 1, got {self.g.lead}")

    @classmethod
    def identity(cls, m: int = DEFAULT_M) -> "RiggedAnnulus":
        return cls(DiskMap.identity(m), ExteriorMap.identity(m), flags=frozenset({"G"}))

    @property
    def trunc_m(self) -> int:
        return max(self.f.trunc_m, self.g.trunc_m)

    def with_flags(self, flags) -> "RiggedAnnulus":
        return replace(self, flags=frozenset(flags))

    def sorted_flags(self) -> list:
        return [f for f in FLAG_ORDER if f in self.flags]


def annulus_distance(x: RiggedAnnulus, y: RiggedAnnulus) -> float:
    return max(coeff_distance(x.f, y.f), coeff_distance(x.g, y.g))


def _curve_projection(fmap, points, n: int = DEFAULT_N, iters: int = 12):
    """Distance from each point to the curve fmap(S^1) and the nearest angle."""
    t_grid = uniform_angles(4 * n)
    samples = fmap(np.exp(1j * t_grid), check=False)
    tree = cKDTree(np.column_stack([samples.real, samples.imag]))
    _, idx = tree.query(np.column_stack([points.real, points.imag]))
    t = t_grid[idx]
    for _ in range(iters):
        w = np.exp(1j * t)
        gam = fmap(w, check=False)
        dgam = 1j * w * fmap.derivative(w, check=False)
        step = np.real(np.conj(gam - points) * dgam) / np.abs(dgam) ** 2
        t = t - np.clip(step, -0.01, 0.01)
        if np.max(np.abs(step)) < 1e-15:
            break
    gam = fmap(np.exp(1j * t), check=False)
    return np.abs(gam - points), t


def _inside(curve_points, query):
    """Winding number of the closed polygon about each query point."""
    v = curve_points[None, :] - query[:, None]
    steps = np.angle(np.roll(v, -1, axis=1) / v)
    return np.round(np.sum(steps, axis=1) / TWO_PI).astype(int)


def classify(x: RiggedAnnulus, delta_touch: float = DELTA_TOUCH, n: int = DEFAULT_N) -> frozenset:
    """Numerical membership flags; the empty set means the pair overlaps."""
    if not is_univalent(x.f, n):
        raise UnivalenceFailure("f fails the winding test")
    if not is_univalent(x.g, n):
        raise UnivalenceFailure("g fails the winding test")
    z = circle_points(n)
    pf = x.f(z)
    pg = x.g(z)
    dist_f, _ = _curve_projection(x.g, pf, n)
    dist_g, _ = _curve_projection(x.f, pg, n)
    # f(S^1) must lie in the bounded complementary component of g(S^1)
    clear = dist_f > delta_touch
    if np.any(clear):
        sub = pf[clear][:: max(1, int(np.count_nonzero(clear)) // 128)]
        if np.any(_inside(pg[:: max(1, n // 512)], sub) != 1):
            return frozenset()
    d = float(min(dist_f.min(), dist_g.min()))
    hausdorff = float(max(dist_f.max(), dist_g.max()))
    flags = set()
    if d > delta_touch:
        flags.add("A0")
    elif hausdorff > delta_touch:
        flags.add("A_degenerate")
    else:
        flags.add("G")
    if x.g.tail_distance_to_identity() < 1e-10 and np.max(np.abs(pf)) <= 1.0 - delta_touch:
        flags.add("E")
    return frozenset(flags)


def classified(x: RiggedAnnulus, delta_touch: float = DELTA_TOUCH) -> RiggedAnnulus:
    return x.with_flags(classify(x, delta_touch))


def aut_action(x: RiggedAnnulus, a: complex) -> RiggedAnnulus:
    """a . (f, g) = (a f, a g), an untagged element of Oqc(C*)."""
    return RiggedAnnulus(x.f.scaled(a), x.g.scaled(a), tag="raw", flags=x.flags)


def infinity_derivative(x: RiggedAnnulus) -> complex:
    """The projection (f, g) -> g'(oo)."""
    return x.g.lead


def normalize(x: RiggedAnnulus, a: complex = 1.0) -> RiggedAnnulus:
    """Representative (lambda f, lambda g) with g'(oo) = a, lambda = a / g'(oo)."""
    a = complex(a)
    if a == 0:
        raise InvalidParameter("a must be non-zero")
    lam = a / x.g.lead
    f, g = x.f.scaled(lam), x.g.scaled(lam)
    # pin the lead exactly so the tag invariant holds to the last bit
    g = ExteriorMap(a, g.const, g.neg)
    tag = "standard" if a == 1 else "a_normalized"
    return RiggedAnnulus(f, g, tag=tag, a=None if tag == "standard" else a, flags=x.flags)


def section(x0: RiggedAnnulus, a: complex) -> RiggedAnnulus:
    """Global section a -> (a / g0'(oo)) (f0, g0) of the projection to g'(oo)."""
    return normalize(x0, a)


def _polar_seeds(fmap, radii, n_angle=256):
    ang = np.exp(2j * np.pi * np.arange(n_angle) / n_angle)
    pts = np.multiply.outer(np.asarray(radii), ang).ravel()
    vals = fmap(pts, check=False)
    return cKDTree(np.column_stack([vals.real, vals.imag])), pts


def invert_points(fmap, targets, tol: float = 1e-12, max_steps: int = 50):
    """Pointwise Newton inversion of a disk or exterior map.

    Seeds are the nearest entries of a polar table of map values whose
    boundary ring is the sampled boundary correspondence.
    """
    targets = np.asarray(targets, dtype=complex)
    disk = isinstance(fmap, DiskMap)
    radii = np.linspace(0.0, 1.0, 41)[1:] if disk else np.geomspace(1.0, 4.0, 41)
    tree, pts = _polar_seeds(fmap, radii)
    _, idx = tree.query(np.column_stack([targets.real, targets.imag]))
    zeta = pts[idx]
    if not disk:
        far = np.abs(targets - fmap.const) > 3.5 * abs(fmap.lead)
        zeta[far] = (targets[far] - fmap.const) / fmap.lead
    for _ in range(max_steps):
        err = fmap(zeta, check=False) - targets
        if np.max(np.abs(err)) < tol:
            return zeta
        step = err / fmap.derivative(zeta, check=False)
        zeta = zeta - step
        r = np.abs(zeta)
        if disk:
            zeta = np.where(r > 1.0, zeta / r, zeta)
        else:
            zeta = np.where(r < 1.0, zeta / r, zeta)
    err = float(np.max(np.abs(fmap(zeta, check=False) - targets)))
    if err < 10 * tol:
        return zeta
    raise InversionFailure(f"pointwise inversion stalled at residual {err:.3e}")


def _require(x, flag, what):
    flags = x.flags or classify(x)
    if flag not in flags:
        raise ClassificationError(f"{what} requires an element flagged {flag}")


@dataclass(frozen=True)
class ProductDiagnostics:
    weld_residual: float
    f_fit_residual: float
    g_fit_residual: float
    riemann_boundary: tuple
    seam: np.ndarray = field(default=None, repr=False, compare=False)


def multiply(x: RiggedAnnulus, y: RiggedAnnulus, trunc_m: int | None = None, n: int = DEFAULT_N,
             tol: float = 1e-9, delta_touch: float = DELTA_TOUCH, diagnostics: list | None = None):
    """Product x . y, returned as a classified standard annulus."""
    for el in (x, y):
        if not (el.flags or classify(el, delta_touch, n)):
            raise ClassificationError("factor is not a non-overlapping pair")
    m = trunc_m or max(x.trunc_m, y.trunc_m)
    f1_inf = exterior_map(JordanCurve.from_map(x.f, n), trunc_m=m, n=n)
    g2_zero = interior_map(JordanCurve.from_map(y.g, n), trunc_m=m, n=n)

    phi1 = invert_circle(f1_inf.correspondence)
    phi2 = g2_zero.correspondence
    welded = weld(WeldingProblem(compose_circle(phi1, phi2), a=f1_inf.map.lead, trunc_m=m, grid_n=n, tol=tol))

    z = circle_points(n, DISK_FIT_RADIUS)
    zeta = invert_points(g2_zero.map, y.f(z))
    new_f, f_res = fit_series(welded.F(zeta), "disk", DISK_FIT_RADIUS, m)

    w = circle_points(n, EXTERIOR_FIT_RADIUS)
    omega = invert_points(f1_inf.map, x.g(w))
    new_g, g_res = fit_series(welded.G(omega), "exterior", EXTERIOR_FIT_RADIUS, m)

    if diagnostics is not None:
        # the sewing curve F(S^1) = G(S^1), drawn in the product's normalisation
        seam = welded.F(circle_points(n)) / new_g.lead
        diagnostics.append(ProductDiagnostics(welded.residual, f_res, g_res,
                                              (f1_inf.boundary_residual, g2_zero.boundary_residual), seam))
    product = normalize(RiggedAnnulus(new_f, new_g, tag="raw"), 1.0)
    return product.with_flags(classify(product, delta_touch, n))


def compose_e(e1: RiggedAnnulus, e2: RiggedAnnulus, n: int = DEFAULT_N) -> RiggedAnnulus:
    """Product inside the bounded-univalent submonoid: (f1 o f2, Id)."""
    _require(e1, "E", "compose_e")
    _require(e2, "E", "compose_e")
    f, _ = compose_into_disk(e1.f, e2.f, n=n)
    out = RiggedAnnulus(f, ExteriorMap.identity(max(e1.g.trunc_m, e2.g.trunc_m)))
    return out.with_flags(classify(out))


def rho(x: RiggedAnnulus, n: int = DEFAULT_N) -> CircleHomeo:
    """g^{-1} o f on the circle for a welding pair."""
    _require(x, "G", "rho")
    vals = x.f(circle_points(n))
    _, t = _curve_projection(x.g, vals, n, iters=30)
    return CircleHomeo(np.unwrap(t))


def from_qs(phi: CircleHomeo, trunc_m: int = DEFAULT_M, tol: float = 1e-9) -> RiggedAnnulus:
    """The welding pair of phi with G'(oo) = 1, as an element of the group part."""
    welded = weld(WeldingProblem(phi, a=1.0, trunc_m=trunc_m, grid_n=phi.n, tol=tol))
    x = RiggedAnnulus(welded.F, ExteriorMap(1.0, welded.G.const, welded.G.neg))
    return x.with_flags(classify(x))
