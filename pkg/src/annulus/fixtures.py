"""Deterministic fixture families used by the verification suite and tests."""
from __future__ import annotations

import numpy as np

from .circle import compose_circle, invert_circle, uniform_angles
from .complexfn import DEFAULT_M, DEFAULT_N, DiskMap, ExteriorMap
from .riemann import JordanCurve, exterior_map, interior_map
from .semigroup import RiggedAnnulus, classified


def _padded(coeffs, m):
    out = np.zeros(m, dtype=complex)
    out[: len(coeffs)] = coeffs
    return out


def mobius_parameters(count: int = 12) -> list:
    """c = r e^{i pi k / 4} with r cycling through 0.1..0.6 and k through 0..7."""
    return [0.1 * (1 + i % 6) * np.exp(1j * np.pi * (i % 8) / 4) for i in range(count)]


def mobius_pair(c: complex, m: int = DEFAULT_M):
    """Closed-form welding pair of the boundary Mobius map m_c with G'(oo) = 1.

    F(z) = (1 - |c|^2) z / (1 + conj(c) z) and G(w) = w - c.
    """
    c = complex(c)
    k = np.arange(1, m + 1)
    f = DiskMap((1 - abs(c) ** 2) * (-np.conj(c)) ** (k - 1))
    return f, ExteriorMap(1.0, -c, np.zeros(m))


def mobius_annulus(c: complex, m: int = DEFAULT_M) -> RiggedAnnulus:
    f, g = mobius_pair(c, m)
    return RiggedAnnulus(f, g, flags=frozenset({"G"}))


def ellipse_seed(j: int, n: int = DEFAULT_N) -> JordanCurve:
    """A mildly perturbed, slightly off-centre ellipse; j indexes the family."""
    s = uniform_angles(n)
    a = 1.0 + 0.04 * (j % 4)
    b = 1.0 - 0.03 * (j % 3)
    k = 2 + j % 3
    phase = 0.7 * j
    pts = (a * np.cos(s) + 1j * b * np.sin(s)) * (1 + 0.03 * np.cos(k * s + phase)) + 0.05 * np.exp(1j * phase)
    return JordanCurve(pts)


def forward_pair(curve: JordanCurve, m: int = DEFAULT_M, n: int = DEFAULT_N):
    """(F0, G0, phi0, a0): the two Riemann maps of a curve and their welding data."""
    inner = interior_map(curve, trunc_m=m, n=n)
    outer = exterior_map(curve, trunc_m=m, n=n)
    phi = compose_circle(invert_circle(outer.correspondence), inner.correspondence)
    return inner.map, outer.map, phi, outer.map.lead


def random_disk_map(rng: np.random.Generator, m: int = DEFAULT_M, degree: int = 4,
                    radius: tuple = (0.3, 0.7)) -> DiskMap:
    """Univalent polynomial q (z + sum c_k z^k) with |f'/q - 1| <= 1/4 on the disk.

    The derivative bound makes f univalent; q is chosen so sup |f| on the
    circle is uniform in ``radius``.
    """
    c = rng.normal(size=degree - 1) + 1j * rng.normal(size=degree - 1)
    k = np.arange(2, degree + 1)
    c *= rng.uniform(0.0, 0.25) / np.sum(k * np.abs(c))
    base = DiskMap(_padded(np.concatenate([[1.0], c]), m))
    peak = np.max(np.abs(base.boundary_samples(256)))
    phase = np.exp(2j * np.pi * rng.uniform())
    return base.scaled(phase * rng.uniform(*radius) / peak)


def random_exterior_map(rng: np.random.Generator, m: int = DEFAULT_M, degree: int = 3,
                        size: float = 0.15) -> ExteriorMap:
    """g = w + b_0 + sum b_k w^{-k} with sum k |b_k| <= size, hence univalent."""
    b = rng.normal(size=degree) + 1j * rng.normal(size=degree)
    k = np.arange(1, degree + 1)
    b *= rng.uniform(0.5, 1.0) * size / np.sum(k * np.abs(b))
    b0 = size * rng.uniform(0.0, 0.5) * np.exp(2j * np.pi * rng.uniform())
    return ExteriorMap(1.0, b0, _padded(b, m))


def random_e(rng: np.random.Generator, m: int = DEFAULT_M) -> RiggedAnnulus:
    """Bounded univalent element (f, Id) with sup |f| <= 0.7."""
    return classified(RiggedAnnulus(random_disk_map(rng, m), ExteriorMap.identity(m)))


def random_a0(rng: np.random.Generator, m: int = DEFAULT_M) -> RiggedAnnulus:
    """Generic non-touching annulus: f(D) inside |z| < 0.7, g(D*) outside about |w| > 0.8."""
    return classified(RiggedAnnulus(random_disk_map(rng, m), random_exterior_map(rng, m)))


def random_band_limited(rng: np.random.Generator, m: int = DEFAULT_M, degree: int = 5,
                        scale: float = 0.4):
    """Chart data (u, q): a low-degree series with moderate coefficients and q != 0."""
    u = np.zeros(m, dtype=complex)
    u[:degree] = scale * (rng.normal(size=degree) + 1j * rng.normal(size=degree)) / np.sqrt(2)
    q = complex(rng.normal(), rng.normal())
    return u, (q if abs(q) > 0.1 else 1.0 + q)


def fixture_classes(m: int = DEFAULT_M) -> dict:
    """One representative per class, for identity-law and bound checks."""
    rng = np.random.default_rng(20240601)
    return {
        "identity": RiggedAnnulus.identity(m),
        "E_closed_form": classified(RiggedAnnulus(DiskMap(_padded([0.5], m)), ExteriorMap.identity(m))),
        "E_random": random_e(rng, m),
        "G_mobius": mobius_annulus(0.3, m),
        "G_rotation": RiggedAnnulus(DiskMap(_padded([np.exp(0.4j)], m)), ExteriorMap.identity(m),
                                    flags=frozenset({"G"})),
        "A0_random": random_a0(rng, m),
    }
