"""Ground-state correlation functions from momentum-space sums.

Every observable of the paired ground state reduces to the auxiliary sums

    gamma(p) = (2/N) sum_{k>0} cos(p k) sin^2(theta_k / 2)
    xi(p)    = -(1/N) sum_{k>0} sin(p k) sin(theta_k)

over the sector grid (edge levels of the odd sector enter gamma with their
0/1 occupations).  gamma(p) is the fermion two-point function
<c†_l c_{l+p}>, gamma(0) = <n_l> the site occupation, and the anomalous
two-point function is <c†_l c†_{l+p}> = -xi(p) (sign pinned against the
exact-diagonalization oracle).  Wick's theorem then gives every element of
the two-site reduced density matrix, which takes X form in the s^z product
basis (|up up>, |up down>, |down up>, |down down>):

    diag = (u, w, w, v),  anti-diag = (x, z, z*, x*),
    u = <n_l n_m> = n^2 - gamma(p)^2 + xi(p)^2,  w = n - u,  v = 1 - u - 2w,
    z_{l,l+1} = gamma(1),            x_{l,l+1} = -xi(1),
    z_{l,l+2} = gamma(2)(1-2n) + 2 gamma(1)^2,   x_{l,l+2} = -xi(2)(1-2n).

On every even-N grid the reflection k -> pi - k kills the odd-p sums, so
gamma(1) = xi(1) = 0 identically: nearest-neighbour pairs are classically
uncorrelated (the two sublattices decouple).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .model import (
    ConsistencyError,
    ModelParams,
    Sector,
    _edge_arrays,
    _pair_arrays,
    couplings,
    default_tol_zero,
)

__all__ = [
    "AuxSums",
    "SingleSiteRDM",
    "XStateRDM",
    "aux_sums",
    "occupation",
    "magnetisation",
    "single_site_rdm",
    "two_site_rdm",
]

_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10


@dataclass(frozen=True)
class AuxSums:
    """gamma(p), xi(p) for p = 0..p_max, plus the site occupation n = gamma(0)."""

    gamma: np.ndarray
    xi: np.ndarray
    n: float
    degenerate: bool = False


@dataclass(frozen=True)
class SingleSiteRDM:
    """Single-site reduced density matrix diag(p_up, p_down); off-diagonals vanish."""

    p_up: float

    @property
    def p_down(self) -> float:
        return 1.0 - self.p_up

    def probabilities(self) -> np.ndarray:
        return np.array([self.p_up, self.p_down])


@dataclass(frozen=True)
class XStateRDM:
    """Two-site X-form reduced density matrix.

    ``u`` weighs |up up>, ``v`` |down down>, ``w`` the shared middle diagonal,
    ``x`` couples |up up> <-> |down down| and ``z`` couples
    |up down> <-> |down up>.  The trace identity v = 1 - u - 2w holds by
    construction for model states.
    """

    u: float
    v: float
    w: float
    x: complex
    z: complex
    separation: int = 0
    degenerate: bool = False

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.u, self.w, self.w, self.v
        m[3, 0], m[0, 3] = self.x, np.conj(self.x)
        m[2, 1], m[1, 2] = self.z, np.conj(self.z)
        return m

    def joint_eigenvalues(self) -> np.ndarray:
        """Eigenvalues from the two 2x2 blocks (outer u/v/x, inner w/z)."""
        outer = np.hypot(self.u - self.v, 2.0 * abs(self.x))
        return np.array(
            [
                0.5 * (self.u + self.v + outer),
                0.5 * (self.u + self.v - outer),
                self.w + abs(self.z),
                self.w - abs(self.z),
            ]
        )

    def marginal(self) -> SingleSiteRDM:
        """Either site's marginal: both equal diag(u + w, w + v)."""
        return SingleSiteRDM(p_up=self.u + self.w)

    def validate(self, trace_tol: float = _TRACE_TOL, psd_tol: float = _PSD_TOL) -> None:
        trace = self.u + self.v + 2.0 * self.w
        if abs(trace - 1.0) > trace_tol:
            raise ConsistencyError(f"X-state trace {trace!r} deviates from 1 beyond {trace_tol}")
        low = float(np.min(self.joint_eigenvalues()))
        if low < -psd_tol:
            raise ConsistencyError(
                f"X-state not positive semidefinite: lowest eigenvalue {low:.3e}"
            )


def _thermo_degenerate(params: ModelParams, tol: float) -> bool:
    """Zero modes exist somewhere in k-space (thermodynamic-limit criterion)."""
    jx, jy, h = params.jx, params.jy, params.h
    if abs(jx - jy) <= tol and abs(h) <= 2.0 * abs(jx) + tol:
        return True
    return abs(abs(h) - abs(jx + jy)) <= tol


def _thermo_integrand_points(params: ModelParams):
    """Breakpoints of occ(k): roots of A_k (cos 2k = h/(jx+jy)) plus k = pi/2."""
    points = [np.pi / 2]
    jc = params.jx + params.jy
    if abs(jc) > 0 and abs(params.h) <= abs(jc):
        half = 0.5 * np.arccos(np.clip(params.h / jc, -1.0, 1.0))
        points += [half, np.pi - half]
    return sorted({p for p in points if 0.0 < p < np.pi})


def _aux_sums_thermo(params: ModelParams, p_max: int, tol_zero: float) -> AuxSums:
    points = _thermo_integrand_points(params)

    def occ(k):
        a, b = couplings(params, k)
        omega = np.hypot(a, b)
        return 0.5 if omega <= tol_zero else 0.5 * (1.0 - a / omega)

    def sin_theta(k):
        a, b = couplings(params, k)
        omega = np.hypot(a, b)
        return 0.0 if omega <= tol_zero else -b / omega

    gamma = np.empty(p_max + 1)
    xi = np.empty(p_max + 1)
    for p in range(p_max + 1):
        gamma[p] = quad(lambda k: np.cos(p * k) * occ(k), 0.0, np.pi,
                        points=points, limit=200)[0] / np.pi
        xi[p] = -quad(lambda k: np.sin(p * k) * sin_theta(k), 0.0, np.pi,
                      points=points, limit=200)[0] / (2.0 * np.pi)
    return AuxSums(gamma=gamma, xi=xi, n=float(gamma[0]),
                   degenerate=_thermo_degenerate(params, tol_zero))


def aux_sums(
    params: ModelParams,
    p_max: int = 2,
    tol_zero: float | None = None,
    thermodynamic: bool = False,
) -> AuxSums:
    """Evaluate gamma(p) and xi(p) for p = 0..p_max over the sector grid.

    Parameters
    ----------
    params : ModelParams
        Model point; the sector selects the grid.
    p_max : int
        Largest separation needed (>= 2 for the next-neighbour matrix).
    tol_zero : float, optional
        Zero-mode threshold; defaults to the scale-aware value.
    thermodynamic : bool
        Replace grid sums by adaptive quadrature over k in (0, pi).

    Returns
    -------
    AuxSums
        Arrays indexed by p, the occupation n = gamma(0), and a flag marking
        zero modes handled by the symmetric convention.
    """
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    if thermodynamic:
        return _aux_sums_thermo(params, p_max, tol_zero)
    n_sites = params.n
    k, _, _, _, occ, sin_theta, zero = _pair_arrays(params, tol_zero)
    k_edge, _, occ_edge, zero_edge = _edge_arrays(params, tol_zero)
    p = np.arange(p_max + 1)[:, None]
    gamma = (2.0 / n_sites) * np.sum(np.cos(p * k[None, :]) * occ[None, :], axis=1)
    xi = -(1.0 / n_sites) * np.sum(np.sin(p * k[None, :]) * sin_theta[None, :], axis=1)
    if len(k_edge):
        gamma = gamma + np.sum(np.cos(p * k_edge[None, :]) * occ_edge[None, :], axis=1) / n_sites
    degenerate = bool(np.any(zero) or np.any(zero_edge))
    return AuxSums(gamma=gamma, xi=xi, n=float(gamma[0]), degenerate=degenerate)


def occupation(params: ModelParams, tol_zero: float | None = None,
               thermodynamic: bool = False) -> float:
    """Site occupation <n_l> = (2/N) sum_{k>0} sin^2(theta_k/2); site-independent."""
    return aux_sums(params, 2, tol_zero, thermodynamic).n


def magnetisation(params: ModelParams, tol_zero: float | None = None,
                  thermodynamic: bool = False) -> float:
    """Magnetisation per site M^z = 2 <n_l> - 1, in [-1, 1]."""
    return 2.0 * occupation(params, tol_zero, thermodynamic) - 1.0


def single_site_rdm(params: ModelParams, tol_zero: float | None = None,
                    thermodynamic: bool = False) -> SingleSiteRDM:
    """Single-site reduced density matrix diag(n, 1 - n)."""
    return SingleSiteRDM(p_up=occupation(params, tol_zero, thermodynamic))


def _xstate_from_aux(aux: AuxSums, separation: int) -> XStateRDM:
    n = aux.n
    g, xi = aux.gamma, aux.xi
    u = n * n - g[separation] ** 2 + xi[separation] ** 2
    w = n - u
    v = 1.0 - u - 2.0 * w
    if separation == 1:
        z = g[1]
        x = -xi[1]
    else:
        z = g[2] * (1.0 - 2.0 * n) + 2.0 * g[1] ** 2
        x = -xi[2] * (1.0 - 2.0 * n)
    return XStateRDM(u=float(u), v=float(v), w=float(w), x=complex(x), z=complex(z),
                     separation=separation, degenerate=aux.degenerate)


def two_site_rdm(
    params: ModelParams,
    separation: int,
    tol_zero: float | None = None,
    thermodynamic: bool = False,
    check: bool = True,
) -> XStateRDM:
    """X-form reduced density matrix of a nearest (1) or next-neighbour (2) pair.

    Raises
    ------
    ConsistencyError
        If the reconstructed matrix fails the trace or positivity checks,
        which signals a sector or zero-mode handling bug upstream.
    """
    if separation not in (1, 2):
        raise ValueError(f"separation must be 1 or 2, got {separation}")
    aux = aux_sums(params, max(2, separation), tol_zero, thermodynamic)
    rdm = _xstate_from_aux(aux, separation)
    if check:
        rdm.validate()
    return rdm
