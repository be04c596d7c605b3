"""Free-fermion solution of the three-spin cluster chain in a transverse field.

The model is a periodic spin-1/2 chain of N sites with

    H = -Jx sum_l s^x_{l-1} s^z_l s^x_{l+1}
        -Jy sum_l s^y_{l-1} s^z_l s^y_{l+1}
        -h  sum_l s^z_l .

A Jordan-Wigner map turns H into free fermions hopping between
next-neighbour sites, block-diagonal in momentum pairs (k, -k) with

    A_k = -h + (Jx + Jy) cos 2k,      B_k = (Jx - Jy) sin 2k,
    omega_k = sqrt(A_k^2 + B_k^2),    theta_k = atan2(-B_k, A_k),

so cos(theta_k) = A_k / omega_k and each pair contributes -2 omega_k to the
ground-state energy.  The parity of the number of up spins (= fermion number)
selects the boundary condition and hence the momentum grid:

* even sector: antiperiodic fermions, k = n pi / N with odd n; all momenta
  come in (k, -k) pairs,
* odd sector: periodic fermions, k = n pi / N with even n; the interior
  momenta pair up while k = 0 and k = pi are unpaired edge levels with
  B_k = 0 and A_0 = A_pi = -h + Jx + Jy.

The occupied-pair amplitude of the ground state is
sin^2(theta_k / 2) = (1 - A_k/omega_k) / 2.  When omega_k vanishes on the
grid the pair is a zero mode: any filling has the same energy, the ground
space is degenerate, and this module adopts the symmetric convention
occ = 1/2 (flagging the mode) so that downstream observables are
reproducible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConsistencyError",
    "Sector",
    "ModelParams",
    "MomentumMode",
    "MomentumGrid",
    "DegeneracyKind",
    "DegeneracyReport",
    "SectorEnergies",
    "default_tol_zero",
    "allowed_momenta",
    "couplings",
    "mode",
    "modes",
    "ground_energy",
    "sector_energies",
    "classify_degeneracy",
]


class ConsistencyError(RuntimeError):
    """An internal identity failed beyond tolerance (likely a sector or zero-mode bug)."""


class Sector(enum.Enum):
    """Fermion-parity sector: fixes the boundary condition and momentum grid."""

    EVEN = "even"
    ODD = "odd"

    @classmethod
    def from_str(cls, name: str) -> "Sector":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown sector {name!r}; expected 'even' or 'odd'") from None


@dataclass(frozen=True)
class ModelParams:
    """Couplings, field, chain length and parity sector: the full problem statement.

    Parameters
    ----------
    jx, jy : float
        Three-spin interaction strengths (XZX and YZY terms).
    h : float
        Transverse field.
    n : int
        Chain length; must be even and >= 4 (a three-site cluster needs
        distinct sites under the periodic wrap).
    sector : Sector
        Fermion-parity sector. The even sector hosts the paired
        ground-state construction and is the default.
    """

    jx: float
    jy: float
    h: float
    n: int
    sector: Sector = Sector.EVEN

    def __post_init__(self) -> None:
        for name in ("jx", "jy", "h"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.n < 4 or self.n % 2:
            raise ValueError(f"chain length must be even and >= 4, got {self.n}")
        if abs(self.jx) == 0 and abs(self.jy) == 0 and abs(self.h) == 0:
            raise ValueError("at least one of |jx|, |jy|, |h| must be nonzero")

    def replace(self, **changes) -> "ModelParams":
        fields = {"jx": self.jx, "jy": self.jy, "h": self.h, "n": self.n, "sector": self.sector}
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class MomentumMode:
    """One momentum k with its couplings, mode energy and Bogolyubov angle."""

    k: float
    a: float
    b: float
    omega: float
    theta: float
    occ_amp2: float  # sin^2(theta/2); 1/2 by convention on flagged zero modes
    degenerate: bool = False


class MomentumGrid(tuple):
    """Sector momenta: paired interior momenta plus flagged unpaired edges."""

    __slots__ = ()

    def __new__(cls, pairs: np.ndarray, edges: np.ndarray):
        return super().__new__(cls, (np.asarray(pairs, dtype=float), np.asarray(edges, dtype=float)))

    @property
    def pairs(self) -> np.ndarray:
        return self[0]

    @property
    def edges(self) -> np.ndarray:
        return self[1]


class DegeneracyKind(enum.Enum):
    NONE = "none"
    LINE_SPIN_CONSERVING = "line_spin_conserving"
    ISOLATED_POINT = "isolated_point"


@dataclass(frozen=True)
class DegeneracyReport:
    """On-grid zero modes and the resulting ground-space degeneracy.

    ``degeneracy`` is the unconstrained count 4**len(zero_modes): each zero
    pair carries four same-energy fillings.  Fermion-parity superselection
    keeps only half of each quartet inside a sector, so the multiplicity an
    exact diagonalization reports can be smaller (and depends on which
    sector wins); see ``sector_energies``.
    """

    zero_modes: tuple
    degeneracy: int
    kind: DegeneracyKind
    min_omega: float


@dataclass(frozen=True)
class SectorEnergies:
    """Ground energies of both parity sectors.

    ``odd`` follows the unpaired-level convention (edge levels filled when
    A < 0), which always lands in the wrong (even) parity; ``odd_constrained``
    adds the cheapest single quasiparticle flip and is the energy an exact
    diagonalization finds for the odd-parity subspace.  The even-sector
    paired state already has even parity, so no correction is needed there.
    """

    even: float
    odd: float
    odd_constrained: float


def default_tol_zero(jx: float, jy: float, h: float) -> float:
    """Scale-aware tolerance below which a mode energy counts as an exact zero."""
    return 1e-12 * max(abs(jx) + abs(jy), abs(h), 1.0)


def allowed_momenta(params: ModelParams) -> MomentumGrid:
    """Positive momenta of the sector grid, ascending; edges flagged separately.

    Even sector: k = n pi / N for odd n in 1..N-1 (antiperiodic grid), no
    edges.  Odd sector: k = n pi / N for even n in 2..N-2, plus the unpaired
    edge momenta k = 0 and k = pi.
    """
    n = params.n
    if params.sector is Sector.EVEN:
        return MomentumGrid(np.pi * np.arange(1, n, 2) / n, np.empty(0))
    return MomentumGrid(np.pi * np.arange(2, n - 1, 2) / n, np.array([0.0, np.pi]))


def couplings(params: ModelParams, k) -> tuple:
    """Momentum-space couplings (A_k, B_k) of the quadratic fermion blocks."""
    a = -params.h + (params.jx + params.jy) * np.cos(2.0 * np.asarray(k))
    b = (params.jx - params.jy) * np.sin(2.0 * np.asarray(k))
    if np.ndim(k) == 0:
        return float(a), float(b)
    return a, b


def mode(params: ModelParams, k: float, tol_zero: float | None = None) -> MomentumMode:
    """Evaluate one momentum mode: couplings, energy, angle, occupation amplitude.

    On a zero mode (omega <= tol_zero) the occupation amplitude is assigned
    the symmetric convention 1/2 and the mode is flagged degenerate.
    """
    if not -np.pi < k <= np.pi + 1e-12:
        raise ValueError(f"momentum {k!r} outside (-pi, pi]")
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    a, b = couplings(params, k)
    omega = math.hypot(a, b)
    if omega <= tol_zero:
        return MomentumMode(k=k, a=a, b=b, omega=omega, theta=0.0, occ_amp2=0.5, degenerate=True)
    theta = math.atan2(-b, a)
    occ = 0.5 * (1.0 - a / omega)
    return MomentumMode(k=k, a=a, b=b, omega=omega, theta=theta, occ_amp2=occ)


def modes(params: ModelParams, tol_zero: float | None = None) -> list:
    """All paired modes of the sector grid (edges excluded), ascending in k."""
    grid = allowed_momenta(params)
    return [mode(params, k, tol_zero) for k in grid.pairs]


def _pair_arrays(params: ModelParams, tol_zero: float):
    """Vectorized (k, A, B, omega, occ, sin_theta, zero_mask) over the paired grid."""
    k = allowed_momenta(params).pairs
    a, b = couplings(params, k)
    omega = np.hypot(a, b)
    zero = omega <= tol_zero
    safe = np.where(zero, 1.0, omega)
    occ = np.where(zero, 0.5, 0.5 * (1.0 - a / safe))
    sin_theta = np.where(zero, 0.0, -b / safe)
    return k, a, b, omega, occ, sin_theta, zero


def _edge_arrays(params: ModelParams, tol_zero: float):
    """(k, A, occ, zero_mask) for the unpaired edge levels (odd sector only)."""
    k = allowed_momenta(params).edges
    if len(k) == 0:
        return k, k, k, np.zeros(0, dtype=bool)
    a, _ = couplings(params, k)
    zero = np.abs(a) <= tol_zero
    occ = np.where(zero, 0.5, np.where(a < 0, 1.0, 0.0))
    return k, a, occ, zero


def ground_energy(params: ModelParams, tol_zero: float | None = None) -> float:
    """Sector ground-state energy -2 sum_{k>0} omega_k.

    In the odd sector the unpaired edge levels contribute -|A_edge| each
    (single level filled when A < 0).  Note this is the unconstrained
    minimum of the sector Hamiltonian; see ``sector_energies`` for the
    parity-constrained odd value.
    """
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    _, _, _, omega, _, _, _ = _pair_arrays(params, tol_zero)
    energy = -2.0 * float(np.sum(omega))
    _, a_edge, _, _ = _edge_arrays(params, tol_zero)
    if len(a_edge):
        energy -= float(np.sum(np.abs(a_edge)))
    return energy


def sector_energies(params: ModelParams, tol_zero: float | None = None) -> SectorEnergies:
    """Ground energies of both sectors; surfaces the finite-N sector competition.

    The even-sector paired state is always a valid even-parity spin state.
    The odd-grid unconstrained optimum has even parity (the two edge levels
    share the same A and flip together), so the physical odd-sector energy
    adds the cheapest parity flip: min(2|A_edge|, 2 min_k omega_k), or zero
    when a zero mode supplies odd-parity states for free.
    """
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    even = ground_energy(params.replace(sector=Sector.EVEN), tol_zero)
    odd_params = params.replace(sector=Sector.ODD)
    odd = ground_energy(odd_params, tol_zero)
    _, _, _, omega, _, _, zero = _pair_arrays(odd_params, tol_zero)
    _, a_edge, _, zero_edge = _edge_arrays(odd_params, tol_zero)
    if np.any(zero) or np.any(zero_edge):
        flip = 0.0
    else:
        flip = 2.0 * min(float(np.min(omega)), float(np.min(np.abs(a_edge))))
    return SectorEnergies(even=even, odd=odd, odd_constrained=odd + flip)


def classify_degeneracy(params: ModelParams, tol_zero: float | None = None) -> DegeneracyReport:
    """List exact on-grid zero modes and classify the critical point.

    Only momenta of the sector grid count: a zero-mode condition that falls
    between grid points is finite-size near-degeneracy and is reported as
    kind NONE with the minimal mode energy attached.  When exact zeros
    exist, the spin-conserving case (jx = jy, |h| < 2|jx|) is the line of
    critical points; every other exact zero (h = +-(jx+jy) edge/interior
    zeros, or jx = -jy at h = 0) is an isolated point.
    """
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    if tol_zero <= 0:
        raise ValueError("tol_zero must be positive")
    k, _, _, omega, _, _, zero = _pair_arrays(params, tol_zero)
    k_edge, a_edge, _, zero_edge = _edge_arrays(params, tol_zero)
    zeros = list(k[zero])
    min_omega = float(np.min(omega)) if len(omega) else np.inf
    if len(k_edge):
        zeros += list(k_edge[zero_edge])
        min_omega = min(min_omega, float(np.min(np.abs(a_edge))))
    zeros = tuple(sorted(zeros))
    if not zeros:
        kind = DegeneracyKind.NONE
    elif abs(params.jx - params.jy) <= tol_zero and abs(params.h) < 2.0 * abs(params.jx):
        kind = DegeneracyKind.LINE_SPIN_CONSERVING
    else:
        kind = DegeneracyKind.ISOLATED_POINT
    return DegeneracyReport(
        zero_modes=zeros,
        degeneracy=4 ** len(zeros),
        kind=kind,
        min_omega=min_omega,
    )
