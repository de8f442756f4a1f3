"""The large-slip limit problem: -lap(u_inf) = 1 with constant Neumann
data -A/P and zero boundary mean.

The harmonic part has Fourier coefficients V_n fixed directly by the
Neumann data through the reciprocal boundary factor ghat,

    V_n = -pi ghat_n / (8 n E_0 sinh(2 n eta0)),    n >= 1,

while the constant V_0 follows from the zero-boundary-integral condition,
evaluated by Parseval pairing of the boundary series against ghat.  The
integrals Sigma_inf = int u_inf and Sigma_1 = -oint u_inf^2 feed the
large-beta expansion and the rational lower bound R(beta).

Everything is stored in the scaled basis vhat_n = V_n cosh(2 n eta0) so
nearly circular ellipses (large eta0) stay in range.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .fourier import CoeffKind, FourierCoeffs, coeffs, ghat_pointwise
from .geometry import EllipseGeom, perimeter
from .specfun import elliptic_ke

__all__ = [
    "PinfSolution",
    "TailTruncationWarning",
    "vinf_tail",
    "v0",
    "solve_pinf",
    "sigma_inf_series",
    "sigma_1_quadrature",
    "uinf_boundary",
    "uinf_eval",
    "dirichlet_energy",
]


class TailTruncationWarning(UserWarning):
    """The truncated V_0 sum still carries a non-negligible tail term."""


@dataclass(frozen=True)
class PinfSolution:
    geom: EllipseGeom
    N: int
    vhat: np.ndarray            # vhat[0] = V_0, vhat[n] = V_n cosh(2 n eta0)
    sigma_inf: float
    sigma_1: float
    bdry_integral_residual: float

    @property
    def v0(self) -> float:
        return float(self.vhat[0])

    @property
    def v1(self) -> float:
        if self.geom.is_circle:
            return 0.0
        return float(self.vhat[1] / math.cosh(2.0 * self.geom.eta0))


def vinf_tail(geom: EllipseGeom, N: int, ghat: FourierCoeffs) -> np.ndarray:
    """Scaled coefficients V_n cosh(2 n eta0) for n = 1..N."""
    if geom.is_circle:
        return np.zeros(N)
    if ghat.kind is not CoeffKind.GHAT or ghat.N < N:
        raise ValueError(f"need ghat coefficients up to N={N}")
    _, big_e = elliptic_ke(geom.e)
    n = np.arange(1, N + 1)
    return -math.pi * ghat.values[1 : N + 1] / (8.0 * n * big_e * np.tanh(2.0 * n * geom.eta0))


def v0(geom: EllipseGeom, ghat: FourierCoeffs, vhat_tail: np.ndarray) -> float:
    """Constant coefficient from the zero-boundary-integral condition.

    I_{p,bdry} + I_{inf,bdry} = 0 with the particular-solution integral in
    closed form and the harmonic part paired against ghat by Parseval.
    Warns when the last retained term of the sum exceeds 1e-12 of the total.
    """
    if geom.is_circle:
        return 0.25
    big_k, big_e = elliptic_ke(geom.e)
    a, e2 = geom.a, geom.e2
    ip_bdry = -(a ** 3 / 3.0) * ((2.0 - e2) * big_e + (1.0 - e2) * big_k)
    n_tail = len(vhat_tail)
    terms = vhat_tail * ghat.values[1 : n_tail + 1]
    total = ip_bdry / (a * math.pi) + terms.sum()
    if n_tail and abs(terms[-1]) > 1e-12 * abs(total):
        warnings.warn(
            f"V0 series tail term {terms[-1]:.3e} exceeds 1e-12 of the total; "
            "increase the truncation",
            TailTruncationWarning,
            stacklevel=2,
        )
    return -total / ghat.values[0]


def uinf_boundary(sol: PinfSolution, psi) -> np.ndarray | float:
    """u_inf on the boundary eta = eta0."""
    geom = sol.geom
    psi = np.asarray(psi, dtype=float)
    if geom.is_circle:
        out = np.zeros_like(psi)
        return out if out.shape else 0.0
    n = np.arange(sol.N + 1)
    c2 = geom.c ** 2
    out = np.cos(2.0 * np.outer(psi.ravel(), n)) @ sol.vhat \
        - (c2 / 8.0) * (math.cosh(2.0 * geom.eta0) + np.cos(2.0 * psi.ravel()))
    return out.reshape(psi.shape) if psi.shape else float(out[0])


def uinf_eval(sol: PinfSolution, eta, psi) -> np.ndarray | float:
    """u_inf at interior elliptic coordinates."""
    geom = sol.geom
    eta = np.asarray(eta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    n = np.arange(sol.N + 1)
    expo = np.exp(2.0 * n[None, :] * (eta.ravel()[:, None] - geom.eta0))
    ratio = expo * (1.0 + np.exp(-4.0 * n[None, :] * eta.ravel()[:, None])) \
        / (1.0 + np.exp(-4.0 * n * geom.eta0))[None, :]
    harm = (ratio * np.cos(2.0 * np.outer(psi.ravel(), n))) @ sol.vhat
    c2 = geom.c ** 2
    out = harm - (c2 / 8.0) * (np.cosh(2.0 * eta.ravel()) + np.cos(2.0 * psi.ravel()))
    return out.reshape(eta.shape) if eta.shape else float(out[0])


def uinf_eval_xy(sol: PinfSolution, x, y) -> np.ndarray | float:
    """u_inf at Cartesian points via the inverse coordinate map."""
    geom = sol.geom
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if geom.is_circle:
        out = 0.25 * (1.0 - (x * x + y * y))
        return out if out.shape else float(out)
    w = np.arccosh((x + 1j * y) / geom.c)
    eta = np.clip(np.real(w), 0.0, geom.eta0)
    psi = np.imag(w)
    return uinf_eval(sol, eta, psi)


def _boundary_integral(sol: PinfSolution, samples: int = 1024) -> float:
    """oint u_inf ds by periodic trapezoid (spectrally accurate)."""
    geom = sol.geom
    if geom.is_circle:
        return 0.0
    psi = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    ub = uinf_boundary(sol, psi)
    ds = geom.a * ghat_pointwise(geom, psi)
    return float(np.sum(ub * ds) * (2.0 * math.pi / samples))


def sigma_inf_series(geom: EllipseGeom, vhat: np.ndarray) -> float:
    """Sigma_inf from the three-term flow formula (only V_0 and V_1 enter)."""
    if geom.is_circle:
        return math.pi / 8.0
    eta0 = geom.eta0
    v1 = vhat[1] / math.cosh(2.0 * eta0)
    return -(math.pi / 8.0) / math.tanh(2.0 * eta0) + math.pi * vhat[0] - 0.5 * math.pi * v1


def sigma_1_quadrature(sol: PinfSolution, samples: int = 512) -> float:
    """Sigma_1 = -oint u_inf^2 ds by periodic trapezoid."""
    geom = sol.geom
    if geom.is_circle:
        return 0.0
    psi = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    ub = uinf_boundary(sol, psi)
    ds = geom.a * ghat_pointwise(geom, psi)
    return float(-np.sum(ub * ub * ds) * (2.0 * math.pi / samples))


def dirichlet_energy(sol: PinfSolution, n_eta: int = 64, n_psi: int = 256) -> float:
    """int |grad u_inf|^2 over the ellipse.

    In elliptic coordinates the conformal metric cancels the Jacobian, so
    the energy is the plain (eta, psi) integral of u_eta^2 + u_psi^2.
    """
    geom = sol.geom
    if geom.is_circle:
        return math.pi / 8.0
    xg, wg = leggauss(n_eta)
    etas = (xg + 1.0) * (geom.eta0 / 2.0)
    weta = wg * (geom.eta0 / 2.0)
    psis = np.linspace(0.0, 2.0 * math.pi, n_psi, endpoint=False)
    n = np.arange(sol.N + 1)
    c2 = geom.c ** 2
    expo = np.exp(2.0 * n[None, :] * (etas[:, None] - geom.eta0))
    den = (1.0 + np.exp(-4.0 * n * geom.eta0))[None, :]
    cosh_ratio = expo * (1.0 + np.exp(-4.0 * n[None, :] * etas[:, None])) / den
    sinh_ratio = expo * (1.0 - np.exp(-4.0 * n[None, :] * etas[:, None])) / den
    cosmat = np.cos(2.0 * np.outer(psis, n))
    sinmat = np.sin(2.0 * np.outer(psis, n))
    # u_eta = sum 2 n vhat_n sinh(2 n eta)/cosh(2 n eta0) cos - (c^2/4) sinh(2 eta)
    du_eta = (sinh_ratio * (2.0 * n * sol.vhat)[None, :]) @ cosmat.T \
        - (c2 / 4.0) * np.sinh(2.0 * etas)[:, None]
    du_psi = -(cosh_ratio * (2.0 * n * sol.vhat)[None, :]) @ sinmat.T \
        + (c2 / 4.0) * np.sin(2.0 * psis)[None, :]
    integrand = du_eta ** 2 + du_psi ** 2
    return float(np.einsum("i,ij->", weta, integrand) * (2.0 * math.pi / n_psi))


def _auto_truncation(geom: EllipseGeom) -> int:
    """Pick N so the scaled tail is negligible; slow ghat decay needs more."""
    if geom.is_circle:
        return 1
    lam2 = 1.0 / (geom.q2 + math.sqrt(geom.q2 ** 2 - 1.0))
    if lam2 < 0.5:
        return 64
    return 256 if lam2 < 0.98 else 512


def solve_pinf(geom: EllipseGeom, N: int | None = None) -> PinfSolution:
    """Assemble the full P(inf) solution with its Sigma functionals."""
    if geom.is_circle:
        return PinfSolution(geom=geom, N=1, vhat=np.array([0.25, 0.0]),
                            sigma_inf=math.pi / 8.0, sigma_1=0.0,
                            bdry_integral_residual=0.0)
    if N is None:
        N = _auto_truncation(geom)
    ghat = coeffs(geom, CoeffKind.GHAT, N)
    tail = vinf_tail(geom, N, ghat)
    vhat = np.empty(N + 1)
    vhat[0] = v0(geom, ghat, tail)
    vhat[1:] = tail
    sol = PinfSolution(geom=geom, N=N, vhat=vhat, sigma_inf=0.0, sigma_1=0.0,
                       bdry_integral_residual=0.0)
    s_inf = sigma_inf_series(geom, vhat)
    samples = max(512, 4 * N + 4)   # avoid aliasing the squared series
    s_1 = sigma_1_quadrature(sol, samples=samples)
    resid = _boundary_integral(sol, samples=samples)
    return PinfSolution(geom=geom, N=N, vhat=vhat, sigma_inf=s_inf, sigma_1=s_1,
                        bdry_integral_residual=abs(resid))
