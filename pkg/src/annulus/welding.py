"""Normalised conformal welding.

Given a circle homeomorphism phi and a != 0, find F on the disk and G on its
exterior with F(0) = 0, G(oo) = oo, G'(oo) = a and F = G o phi on the circle.

With phi fixed, the residual F(e^{i theta_j}) - G(e^{i psi_j}) is linear in
the Taylor coefficients of F and the tail (b_0, b_1, ...) of G, so a single
least-squares solve determines the truncated pair. Pinning G'(oo) = a and
omitting F's constant term removes the only kernel; uniqueness of the welding
pair then identifies the solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import CircleHomeo, uniform_angles
from .complexfn import DEFAULT_M, DEFAULT_N, DiskMap, ExteriorMap, is_univalent
from .errors import InvalidParameter, WeldNonConvergence


@dataclass(frozen=True)
class WeldingProblem:
    phi: CircleHomeo
    a: complex = 1.0
    trunc_m: int = DEFAULT_M
    grid_n: int = DEFAULT_N
    tol: float = 1e-9
    max_newton: int = 1
    continuation_steps: int = 8

    def __post_init__(self):
        if self.a == 0:
            raise InvalidParameter("normalisation constant a must be non-zero")
        if self.tol <= 0:
            raise InvalidParameter("tol must be positive")
        if self.grid_n < 8 * self.trunc_m:
            raise InvalidParameter(f"grid_n={self.grid_n} must be at least 8*trunc_m={8 * self.trunc_m}")


@dataclass(frozen=True)
class WeldResult:
    F: DiskMap
    G: ExteriorMap
    residual: float
    diagnostics: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.F
        yield self.G


def _design(theta, psi, m):
    k = np.arange(1, m + 1)
    z = np.exp(1j * np.multiply.outer(theta, k))
    w = np.exp(-1j * np.multiply.outer(psi, k))
    return np.hstack([z, -np.ones((theta.size, 1)), -w])


def _solve(theta, psi, a, m):
    mat = _design(theta, psi, m)
    rhs = a * np.exp(1j * psi)
    x, _, rank, sv = np.linalg.lstsq(mat, rhs, rcond=None)
    residual = float(np.max(np.abs(mat @ x - rhs)))
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    return x, residual, int(rank), cond


def weld(p: WeldingProblem) -> WeldResult:
    theta = uniform_angles(p.grid_n)
    psi = p.phi.lift if p.phi.n == p.grid_n else p.phi(theta)
    m = p.trunc_m
    a = complex(p.a)
    x, residual, rank, cond = _solve(theta, psi, a, m)
    diagnostics = {"rank": rank, "condition": cond, "continuation": 1.0}

    if rank < 2 * m + 1 or residual >= p.tol:
        # homotopy towards the identity, only to report how far the solver gets
        progress = 0.0
        for lam in np.linspace(0.0, 1.0, p.continuation_steps + 1)[1:]:
            psi_lam = (1.0 - lam) * theta + lam * psi
            if _solve(theta, psi_lam, a, m)[1] >= p.tol:
                break
            progress = float(lam)
        reason = "rank deficient system" if rank < 2 * m + 1 else f"residual {residual:.3e} >= tol {p.tol:.1e}"
        raise WeldNonConvergence(
            f"welding failed: {reason} (continuation reached {progress:.2f})",
            residual=residual,
            progress=progress,
        )

    F = DiskMap(x[:m])
    G = ExteriorMap(a, x[m], x[m + 1 :])
    if not (is_univalent(F) and is_univalent(G)):
        raise WeldNonConvergence("welded maps fail the winding test", residual=residual, progress=1.0)
    return WeldResult(F, G, residual, diagnostics)


def weld_residual(F: DiskMap, G: ExteriorMap, phi: CircleHomeo) -> float:
    theta = phi.angles
    return float(np.max(np.abs(F(np.exp(1j * theta)) - G(np.exp(1j * phi.lift)))))
