"""Quantum-correlation measures for X-form two-qubit states.

Everything is expressed through the five X-state elements (u, v, w, x, z)
and evaluated in closed form where one exists:

* concurrence        C = 2 max(0, |x| - w, |z| - sqrt(uv)), identical to the
  Wootters eigenvalue construction for X states,
* mutual information I = S(rho_l) + S(rho_m) - S(rho_lm) with the joint
  eigenvalues [(u+v) +- sqrt((u-v)^2 + 4|x|^2)]/2 and w +- |z|,
* measurement-conditioned entropy Q for an arbitrary projective basis on
  one qubit, with the two closed-form candidates

      Q_x = H(zeta),  zeta = 1/2 + sqrt(((u-v)/2)^2 + (|x|+|z|)^2)
      Q_z = (u+w) H(u/(u+w)) + (w+v) H(w/(w+v))

  (equatorial measurement with optimally aligned azimuth, and the s^z
  measurement).  The fixed-basis discord takes min(Q_x, Q_z); the grid mode
  minimizes Q over a (theta, phi) grid with golden-section refinement and
  serves as an independent check.  On model states the closed minimum and
  the grid minimum agree to machine precision; near zero field the s^z
  candidate is the true optimum (the state is classical there), so a bare
  equatorial basis would overestimate the discord.

All entropies are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import SingleSiteRDM, XStateRDM, aux_sums, _xstate_from_aux
from .model import ConsistencyError, ModelParams, default_tol_zero

__all__ = [
    "XStateSpectrum",
    "MeasurementBasis",
    "CorrelationReport",
    "entropy",
    "binary_entropy",
    "concurrence",
    "concurrence_general",
    "x_state_spectrum",
    "mutual_information",
    "conditional_entropy",
    "zeta",
    "discord",
    "global_entanglement",
    "report",
]

_ZETA_TOL = 1e-9
_MARGINAL_TOL = 1e-10

_SIGMA_YY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


@dataclass(frozen=True)
class XStateSpectrum:
    """Joint eigenvalues of an X state and its Wootters lambdas (descending)."""

    joint_eigs: np.ndarray
    conc_lambdas: np.ndarray


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective qubit basis |0~> = cos(t/2)|up> + e^{i phi} sin(t/2)|down>."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class CorrelationReport:
    """All scalar ground-state observables at one parameter point."""

    mz: float
    c12: float
    c13: float
    i12: float
    i13: float
    d13: float
    e_global: float
    degenerate: bool


def entropy(eigs) -> float:
    """Base-2 Shannon entropy of a probability spectrum; 0 log 0 := 0.

    Eigenvalues may undershoot zero by float noise (down to -1e-10); anything
    more negative is rejected.
    """
    p = np.asarray(eigs, dtype=float)
    if np.any(np.isnan(p)):
        raise ValueError("entropy: NaN in spectrum")
    if np.min(p) < -1e-10:
        raise ValueError(f"entropy: negative probability {np.min(p):.3e}")
    p = np.clip(p, 0.0, 1.0)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x) on [0, 1]."""
    return entropy([x, 1.0 - x])


def concurrence(rdm: XStateRDM) -> float:
    """X-state concurrence C = 2 max(0, |x| - w, |z| - sqrt(uv))."""
    values = (rdm.u, rdm.v, rdm.w, abs(rdm.x), abs(rdm.z))
    if any(math.isnan(v) for v in values):
        raise ValueError("concurrence: NaN in density-matrix elements")
    root_uv = math.sqrt(max(rdm.u * rdm.v, 0.0))
    return 2.0 * max(0.0, abs(rdm.x) - rdm.w, abs(rdm.z) - root_uv)


def concurrence_general(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
    eigenvalues of rho (s^y s^y) rho* (s^y s^y).  Used as the independent
    route against the X-state closed form.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    rho_tilde = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    lams = np.sqrt(np.clip(np.linalg.eigvals(rho @ rho_tilde).real, 0.0, None))
    lams = np.sort(lams)[::-1]
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def x_state_spectrum(rdm: XStateRDM) -> XStateSpectrum:
    """Joint eigenvalues and the closed-form Wootters lambdas of an X state."""
    root_uv = math.sqrt(max(rdm.u * rdm.v, 0.0))
    lams = np.sort(
        np.array(
            [
                root_uv + abs(rdm.x),
                abs(root_uv - abs(rdm.x)),
                rdm.w + abs(rdm.z),
                abs(rdm.w - abs(rdm.z)),
            ]
        )
    )[::-1]
    return XStateSpectrum(joint_eigs=rdm.joint_eigenvalues(), conc_lambdas=lams)


def mutual_information(
    rdm: XStateRDM,
    single_l: SingleSiteRDM | None = None,
    single_m: SingleSiteRDM | None = None,
) -> float:
    """Quantum mutual information I = S(rho_l) + S(rho_m) - S(rho_lm).

    Marginals default to the ones carried by the X state itself; passing
    them explicitly asserts consistency to 1e-10.
    """
    marg = rdm.marginal()
    for given in (single_l, single_m):
        if given is not None and abs(given.p_up - marg.p_up) > _MARGINAL_TOL:
            raise ConsistencyError(
                f"marginal p_up {given.p_up!r} inconsistent with joint state ({marg.p_up!r})"
            )
    s_single = entropy(marg.probabilities())
    return 2.0 * s_single - entropy(rdm.joint_eigenvalues())


def _conditional_entropy_raw(rdm: XStateRDM, theta: float, phi: float) -> float:
    # plain math on purpose: this sits inside the grid-minimizer's hot loop
    half = 0.5 * theta
    cos_h, sin_h = math.cos(half), math.sin(half)
    phase = complex(math.cos(phi), math.sin(phi))
    x_c = complex(rdm.x).conjugate()
    z_c = complex(rdm.z).conjugate()
    total = 0.0
    for alpha, beta in ((cos_h, phase * sin_h), (sin_h, -phase * cos_h)):
        wa, wb = alpha * alpha, abs(beta) ** 2
        prob = (rdm.u + rdm.w) * wa + (rdm.w + rdm.v) * wb
        if prob < 1e-14:
            continue
        m00 = rdm.u * wa + rdm.w * wb
        m11 = rdm.w * wa + rdm.v * wb
        off = abs(alpha) * abs(beta * x_c + beta.conjugate() * z_c)
        gap = math.hypot(m00 - m11, 2.0 * off)
        ent = 0.0
        for lam in (0.5 * (m00 + m11 + gap) / prob, 0.5 * (m00 + m11 - gap) / prob):
            if lam > 1e-300:
                ent -= lam * math.log2(min(lam, 1.0))
        total += prob * ent
    return total


def conditional_entropy(rdm: XStateRDM, basis: MeasurementBasis) -> float:
    """Entropy of qubit l after measuring qubit m, weighted over outcomes.

    Qubit m is projected onto the basis states, the post-measurement states
    of l are renormalized, and their entropies are mixed with the outcome
    probabilities.  Outcomes with probability below 1e-14 are deterministic
    and contribute nothing.
    """
    return _conditional_entropy_raw(rdm, basis.theta, basis.phi)


def zeta(rdm: XStateRDM) -> float:
    """Bias 1/2 + sqrt(((u-v)/2)^2 + (|x|+|z|)^2) of the best equatorial outcome.

    Provably <= 1 for positive semidefinite X states; values outside [0, 1]
    by more than 1e-9 indicate corrupted input and raise.
    """
    value = 0.5 + math.hypot(0.5 * (rdm.u - rdm.v), abs(rdm.x) + abs(rdm.z))
    if value > 1.0 + _ZETA_TOL or value < -_ZETA_TOL:
        raise ConsistencyError(f"zeta = {value!r} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def _min_conditional_entropy_closed(rdm: XStateRDM) -> float:
    """min(Q_x, Q_z): the closed-form candidates for the optimal measurement."""
    q_x = binary_entropy(zeta(rdm))
    q_z = 0.0
    for prob, top in ((rdm.u + rdm.w, rdm.u), (rdm.w + rdm.v, rdm.w)):
        if prob > 1e-14:
            q_z += prob * binary_entropy(min(max(top / prob, 0.0), 1.0))
    return min(q_x, q_z)


def _golden_min(f, lo: float, hi: float, iters: int = 64):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def _min_conditional_entropy_grid(rdm: XStateRDM) -> float:
    """Scan a 17x17 (theta, phi) grid, then golden-section refine each angle."""
    thetas = np.linspace(0.0, np.pi, 17)
    phis = np.linspace(0.0, 2.0 * np.pi, 17, endpoint=False)
    best = (np.inf, 0.0, 0.0)
    for th in thetas:
        for ph in phis:
            q = _conditional_entropy_raw(rdm, th, ph)
            if q < best[0]:
                best = (q, th, ph)
    q_best, th, ph = best
    d_th = thetas[1] - thetas[0]
    d_ph = phis[1] - phis[0]
    for _ in range(2):
        th, q_best = _golden_min(
            lambda t: _conditional_entropy_raw(rdm, t, ph),
            max(0.0, th - d_th), min(np.pi, th + d_th),
        )
        ph, q_best = _golden_min(
            lambda p: _conditional_entropy_raw(rdm, th, p % (2.0 * np.pi)),
            ph - d_ph, ph + d_ph,
        )
    return min(q_best, _conditional_entropy_raw(rdm, th, ph))


def discord(rdm: XStateRDM, mode: str = "fixed",
            single_m: SingleSiteRDM | None = None) -> float:
    """Quantum discord D = min_basis Q + S(rho_m) - S(rho_lm).

    ``mode="fixed"`` uses the closed-form minimum over the two candidate
    measurements (equatorial with aligned azimuth, and s^z); ``mode="grid"``
    minimizes numerically over the full basis sphere and can only be lower.
    """
    if mode == "fixed":
        q_min = _min_conditional_entropy_closed(rdm)
    elif mode == "grid":
        q_min = _min_conditional_entropy_grid(rdm)
    else:
        raise ValueError(f"unknown discord mode {mode!r}; expected 'fixed' or 'grid'")
    marg = single_m if single_m is not None else rdm.marginal()
    if abs(marg.p_up - rdm.marginal().p_up) > _MARGINAL_TOL:
        raise ConsistencyError("measured-qubit marginal inconsistent with joint state")
    return q_min + entropy(marg.probabilities()) - entropy(rdm.joint_eigenvalues())


def global_entanglement(n: float) -> float:
    """Average single-site linear entropy E = 4 n (1 - n) for occupation n."""
    if not -1e-12 <= n <= 1.0 + 1e-12:
        raise ValueError(f"occupation must lie in [0, 1], got {n!r}")
    n = min(max(n, 0.0), 1.0)
    return 4.0 * n * (1.0 - n)


def report(params: ModelParams, tol_zero: float | None = None,
           thermodynamic: bool = False) -> CorrelationReport:
    """Assemble every correlation measure at one parameter point.

    Zero modes are handled by the symmetric occupation convention and
    surface as ``degenerate=True``; consumers decide whether to mask.
    """
    if tol_zero is None:
        tol_zero = default_tol_zero(params.jx, params.jy, params.h)
    aux = aux_sums(params, 2, tol_zero, thermodynamic)
    rdm1 = _xstate_from_aux(aux, 1)
    rdm2 = _xstate_from_aux(aux, 2)
    rdm1.validate()
    rdm2.validate()
    return CorrelationReport(
        mz=2.0 * aux.n - 1.0,
        c12=concurrence(rdm1),
        c13=concurrence(rdm2),
        i12=mutual_information(rdm1),
        i13=mutual_information(rdm2),
        d13=discord(rdm2, mode="fixed"),
        e_global=global_entanglement(aux.n),
        degenerate=aux.degenerate,
    )
