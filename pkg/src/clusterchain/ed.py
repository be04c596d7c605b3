"""Brute-force exact-diagonalization oracle for chains of up to 12 spins.

Ground truth for every analytic quantity: the full Hamiltonian is built as a
dense real-symmetric matrix in the s^z product basis and diagonalized
exactly, so degenerate multiplicities come out right and no iterative-solver
caveats apply.

Basis conventions, used bit-exactly everywhere: basis state index b encodes
site l in bit l (site 0 = least significant bit), and bit value 0 means
spin-up (s^z eigenvalue +1), so the all-up state is index 0.  Two-site
reduced matrices are indexed by 2*b_i + b_j for sites (i, j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import XStateRDM
from .measures import concurrence_general, discord, entropy, global_entanglement
from .model import ConsistencyError, ModelParams

__all__ = [
    "SpectrumResult",
    "EDPointReport",
    "build_hamiltonian",
    "ground_space",
    "cluster_state",
    "partial_trace",
    "measure_all",
    "up_count",
    "pauli_product",
]

_PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class SpectrumResult:
    """Full spectrum with the ground level resolved up to a degeneracy tolerance."""

    ground_energy: float
    multiplicity: int
    states: np.ndarray  # (dim, multiplicity), orthonormal columns
    energies: np.ndarray


@dataclass(frozen=True)
class EDPointReport:
    """Oracle values of every observable for one pair of sites."""

    energy: float
    multiplicity: int
    degenerate: bool
    mz: float
    u: float
    v: float
    w: float
    x: complex
    z: complex
    concurrence: float
    mutual_information: float
    discord_fixed: float
    discord_grid: float
    e_global: float


def _check_size(n: int) -> None:
    if n < 4 or n > 12 or n % 2:
        raise ValueError(f"chain length must be even with 4 <= n <= 12, got {n}")


def up_count(n: int) -> np.ndarray:
    """Number of up spins (bit value 0) for every basis index."""
    b = np.arange(1 << n)
    pop = np.zeros(1 << n, dtype=np.int64)
    for l in range(n):
        pop += (b >> l) & 1
    return n - pop


def pauli_product(n: int, ops: dict) -> np.ndarray:
    """Dense operator acting with the given single-site Paulis ('x','y','z','i')."""
    out = np.array([[1.0 + 0.0j]])
    for site in reversed(range(n)):  # most significant bit first
        out = np.kron(out, _PAULI[ops.get(site, "i")])
    return out


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Dense real-symmetric Hamiltonian matrix in the s^z product basis.

    The YZY term is real because the two s^y factors contribute i * i times
    a sign, so the whole matrix stays float64.
    """
    _check_size(params.n)
    n, jx, jy, h = params.n, params.jx, params.jy, params.h
    dim = 1 << n
    b = np.arange(dim)
    ham = np.zeros((dim, dim))
    ham[b, b] = -h * (n - 2.0 * (n - up_count(n)))
    for l in range(n):
        left, right = (l - 1) % n, (l + 1) % n
        mask = (1 << left) | (1 << right)
        z_mid = 1.0 - 2.0 * ((b >> l) & 1)
        same = ((b >> left) & 1) ^ ((b >> right) & 1)  # 0 when outer bits agree
        target = b ^ mask
        ham[target, b] += -jx * z_mid
        ham[target, b] += jy * (1.0 - 2.0 * same) * z_mid
    return ham


def ground_space(params: ModelParams, deg_tol: float = 1e-8) -> SpectrumResult:
    """Lowest eigenvalue, its multiplicity within deg_tol, and the ground states."""
    if deg_tol <= 0:
        raise ValueError("deg_tol must be positive")
    energies, vectors = np.linalg.eigh(build_hamiltonian(params))
    mult = int(np.sum(energies < energies[0] + deg_tol))
    return SpectrumResult(
        ground_energy=float(energies[0]),
        multiplicity=mult,
        states=vectors[:, :mult].astype(complex),
        energies=energies,
    )


def _apply_flip(psi: np.ndarray, n: int, site: int, pauli: str) -> np.ndarray:
    """Apply s^x or s^y on one site to a state vector."""
    b = np.arange(1 << n)
    out = np.empty_like(psi)
    if pauli == "x":
        out[b ^ (1 << site)] = psi[b]
    else:
        amp = 1.0j * (1.0 - 2.0 * ((b >> site) & 1))
        out[b ^ (1 << site)] = amp * psi[b]
    return out


def cluster_state(n: int, flavor: str = "y") -> np.ndarray:
    """Highly entangled stabilizer state from controlled gates on the all-up state.

    Applies, across every periodic bond (i, i+1), the controlled operator
    1 - (1 - s_i)(1 - s_{i+1})/2 with s = s^y (flavor "y") or s^x, which is
    unitary (a controlled phase in the s-eigenbasis).  The result is the
    exact ground state when the matching three-spin coupling is the only
    nonzero parameter.
    """
    if n < 4 or n % 2:
        raise ValueError(f"chain length must be even and >= 4, got {n}")
    pauli = flavor.lower()
    if pauli not in ("x", "y"):
        raise ValueError(f"flavor must be 'x' or 'y', got {flavor!r}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for i in range(n):
        j = (i + 1) % n
        s_i = _apply_flip(psi, n, i, pauli)
        s_j = _apply_flip(psi, n, j, pauli)
        s_ij = _apply_flip(s_i, n, j, pauli)
        psi = psi - 0.5 * (psi - s_i - s_j + s_ij)
    return psi


def partial_trace(state: np.ndarray, sites) -> np.ndarray:
    """Reduced density matrix of one or two sites.

    ``state`` is a vector or a matrix whose orthonormal columns are mixed
    with equal weight (degenerate ground manifolds).  The row/column index
    of the result iterates the kept sites in the order given, first site
    slowest.
    """
    sites = list(sites)
    if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
        raise ValueError(f"need one or two distinct sites, got {sites}")
    state = np.asarray(state)
    if state.ndim == 1:
        state = state[:, None]
    dim, ncols = state.shape
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"state length {dim} is not a power of two")
    if any(not 0 <= s < n for s in sites):
        raise ValueError(f"sites {sites} out of range for {n} spins")
    axes = [n - 1 - s for s in sites]
    keep = 1 << len(sites)
    rho = np.zeros((keep, keep), dtype=complex)
    for c in range(ncols):
        tensor = np.moveaxis(state[:, c].reshape([2] * n), axes, range(len(sites)))
        flat = tensor.reshape(keep, -1)
        rho += flat @ flat.conj().T
    return rho / ncols


def _xstate_from_matrix(rho: np.ndarray, separation: int, degenerate: bool) -> XStateRDM:
    off_mask = np.ones((4, 4), dtype=bool)
    for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)):
        off_mask[i, j] = False
    stray = float(np.max(np.abs(rho[off_mask])))
    if stray > 1e-9:
        raise ConsistencyError(f"two-site RDM is not X-form: stray element {stray:.3e}")
    mid_gap = abs(rho[1, 1] - rho[2, 2])
    if mid_gap > 1e-9:
        raise ConsistencyError(f"middle diagonals differ by {mid_gap:.3e}")
    return XStateRDM(
        u=float(rho[0, 0].real),
        v=float(rho[3, 3].real),
        w=float(0.5 * (rho[1, 1] + rho[2, 2]).real),
        x=complex(rho[3, 0]),
        z=complex(rho[2, 1]),
        separation=separation,
        degenerate=degenerate,
    )


def measure_all(
    params: ModelParams,
    pair: tuple,
    deg_tol: float = 1e-8,
    spectrum: SpectrumResult | None = None,
) -> EDPointReport:
    """Every observable for one pair of sites, straight from the exact ground space.

    A degenerate ground manifold is averaged with equal weights and flagged;
    at such points the analytic side follows a particular zero-mode
    convention, so flagged comparisons should be skipped.  The concurrence
    uses the general Wootters construction on the 4x4 matrix (not the
    X-state closed form) to keep the routes independent.
    """
    if spectrum is None:
        spectrum = ground_space(params, deg_tol)
    i, j = pair
    rho = partial_trace(spectrum.states, (i, j))
    sep = min((j - i) % params.n, (i - j) % params.n)
    degenerate = spectrum.multiplicity > 1
    xrdm = _xstate_from_matrix(rho, sep, degenerate)
    p_up = float((rho[0, 0] + rho[1, 1]).real)
    joint = np.linalg.eigvalsh(rho)
    mutual = 2.0 * entropy([p_up, 1.0 - p_up]) - entropy(joint)
    return EDPointReport(
        energy=spectrum.ground_energy,
        multiplicity=spectrum.multiplicity,
        degenerate=degenerate,
        mz=2.0 * p_up - 1.0,
        u=xrdm.u,
        v=xrdm.v,
        w=xrdm.w,
        x=xrdm.x,
        z=xrdm.z,
        concurrence=concurrence_general(rho),
        mutual_information=mutual,
        discord_fixed=discord(xrdm, mode="fixed"),
        discord_grid=discord(xrdm, mode="grid"),
        e_global=global_entanglement(p_up),
    )
