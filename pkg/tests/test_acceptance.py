"""Acceptance suite: one test per criterion, printing a PASS line with measured margins.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
summary lines.  Criterion 7's multiplicity-4 clause at N=8 is implemented
faithfully and marked strict-xfail: fermion-parity superselection keeps only
half of each zero-mode quartet inside a sector, and at the only N=8 on-grid
zero modes (jy=jx, h=+-sqrt(2)) the periodic sector wins with a two-fold
ground space, so no multiplicity-4 ground space exists anywhere at N=8 (an
exhaustive 41x41 exact-diagonalization scan confirms this).  The same
mechanism does produce a genuine four-fold ground space at N=10,
(jy=-jx, h=0) - an exact sector tie at an on-grid zero mode - kept here as a
passing check.
"""

import math
import time

import numpy as np
import pytest

from clusterchain import (
    AxisSpec,
    MeasurementBasis,
    ModelParams,
    ScanSpec,
    XStateRDM,
    allowed_momenta,
    aux_sums,
    binary_entropy,
    cluster_state,
    concurrence,
    conditional_entropy,
    discord,
    format_validation,
    ground_energy,
    magnetisation,
    mutual_information,
    observable_derivative,
    report,
    run_validation,
    scan_degeneracy,
    zeta,
)
from clusterchain.correlators import _xstate_from_aux
from conftest import cached_ground_space

N_FIGURE = 100


def staircase_thresholds(n=N_FIGURE):
    k = allowed_momenta(ModelParams(1.0, 1.0, 0.5, n)).pairs
    values = 2.0 * np.cos(2.0 * k)
    values = values[values > 1e-9]
    return np.unique(np.round(values, 12))


def test_criterion_1_oracle_equivalence():
    result = run_validation(sizes=(8, 10, 12), counts=(30, 16, 4), seed=20240809,
                            tolerance=1e-8)
    print("\n" + format_validation(result))
    assert result.n_points == 50
    worst = max(result.max_dev.values())
    assert result.passed, f"worst deviation {worst:.3e} exceeds 1e-8"
    assert result.max_discord_gap < 1e-6  # grid minimizer agrees with the fixed basis
    assert result.elapsed < 60.0, f"runtime {result.elapsed:.1f}s exceeds the 60s target"
    print(f"ACCEPTANCE 1 PASS: 50 points, worst |analytic-ED| = {worst:.2e}, "
          f"{result.elapsed:.1f}s")


def test_criterion_2_cluster_state_limit():
    for n in (8, 100):
        assert abs(ground_energy(ModelParams(0.0, 1.0, 0.0, n)) + n) < 1e-12 * n
        assert abs(ground_energy(ModelParams(1.0, 0.0, 0.0, n)) + n) < 1e-12 * n
    assert abs(ground_energy(ModelParams(0.0, -2.5, 0.0, 8)) + 20.0) < 1e-12 * 20
    overlaps = []
    for jx, jy, flavor in ((0.0, 1.0, "y"), (1.0, 0.0, "x")):
        spectrum = cached_ground_space(jx, jy, 0.0, 8)
        assert spectrum.multiplicity == 1
        overlap = abs(spectrum.states[:, 0].conj() @ cluster_state(8, flavor))
        assert overlap >= 1.0 - 1e-10
        overlaps.append(overlap)
    print(f"ACCEPTANCE 2 PASS: E_g = -N*J exact; cluster overlaps "
          f"{[f'{1 - o:.1e}' for o in overlaps]} below 1e-10 of unity")


def test_criterion_3_product_state_regime():
    worst = 0.0
    for h in (2.001, 2.5, 3.0, -2.001, -2.7):
        rep = report(ModelParams(1.0, 1.0, h, N_FIGURE))
        assert abs(rep.mz - math.copysign(1.0, h)) <= 1e-12
        for value in (rep.e_global, rep.c13, rep.i13, rep.d13):
            worst = max(worst, abs(value))
    assert worst <= 1e-12
    print(f"ACCEPTANCE 3 PASS: |h|>2 spin-conserving regime uncorrelated to {worst:.1e}")


def test_criterion_4_zero_field_values():
    worst_mz = worst_eg = worst_c = worst_d = 0.0
    for jy in np.linspace(-3.0, 3.0, 61):
        rep = report(ModelParams(1.0, float(jy), 0.0, N_FIGURE))
        worst_mz = max(worst_mz, abs(rep.mz))
        worst_eg = max(worst_eg, abs(rep.e_global - 1.0))
        worst_c = max(worst_c, abs(rep.c13))
        worst_d = max(worst_d, abs(rep.d13))
    assert worst_mz <= 1e-12 and worst_eg <= 1e-12
    assert worst_c <= 1e-9 and worst_d <= 1e-9
    print(f"ACCEPTANCE 4 PASS: h=0 line: |Mz|<={worst_mz:.1e}, |E-1|<={worst_eg:.1e}, "
          f"C13<={worst_c:.1e}, D13<={worst_d:.1e}")


def test_criterion_5_nearest_neighbour_suppression():
    worst_c = worst_d = 0.0
    worst_i, arg_i = -1.0, None
    for jy in np.linspace(-2.0, 2.0, 101):
        for h in np.linspace(-3.0, 3.0, 101):
            aux = aux_sums(ModelParams(1.0, float(jy), float(h), N_FIGURE))
            rdm = _xstate_from_aux(aux, 1)
            worst_c = max(worst_c, concurrence(rdm))
            worst_d = max(worst_d, abs(discord(rdm, mode="fixed")))
            info = abs(mutual_information(rdm))
            if info > worst_i:
                worst_i, arg_i = info, (float(jy), float(h))
    assert worst_c <= 1e-12 and worst_d <= 1e-12
    assert worst_i <= 2e-3
    if worst_i > 1e-12:  # analytic I(1,2) is identically zero; guard the claim anyway
        assert abs(arg_i[0] - 1.0) < 0.25 and abs(arg_i[1]) < 0.25
    print(f"ACCEPTANCE 5 PASS: 101x101 grid: C12<={worst_c:.1e}, D12<={worst_d:.1e}, "
          f"I12<={worst_i:.1e} (max at {arg_i})")


def test_criterion_6_staircase_structure():
    thresholds = staircase_thresholds()
    assert len(thresholds) == 12
    params = ModelParams(1.0, 1.0, 0.5, N_FIGURE)

    # plateaus are exactly flat
    edges = np.concatenate(([0.0], thresholds, [2.0]))
    for lo, hi in zip(edges[:-1], edges[1:]):
        probes = np.linspace(lo + 1e-7, hi - 1e-7, 5)
        values = [magnetisation(params.replace(h=float(x))) for x in probes]
        assert max(values) - min(values) <= 1e-12

    # each threshold carries a jump of exactly two modes: 2 * 2 * (2/N)
    for t in thresholds:
        jump = magnetisation(params.replace(h=float(t) + 1e-9)) - magnetisation(
            params.replace(h=float(t) - 1e-9)
        )
        assert abs(jump - 8.0 / N_FIGURE) <= 1e-12

    # sweep differencing: jumps happen exactly in threshold-containing cells
    grid = np.linspace(0.005, 1.995, 200)
    values = np.array([magnetisation(params.replace(h=float(x))) for x in grid])
    jumps = np.abs(np.diff(values)) > 1e-14
    contains = np.array(
        [np.any((thresholds > lo) & (thresholds < hi)) for lo, hi in zip(grid[:-1], grid[1:])]
    )
    assert np.array_equal(jumps, contains)
    print(f"ACCEPTANCE 6 PASS: 12 jump locations h = 2cos(2k); plateaus flat to 1e-12")


def test_criterion_7_degeneracy_scan_loci():
    spec = ScanSpec(
        axis1=AxisSpec("jy", -2.0, 2.0, 201),
        axis2=AxisSpec("h", -3.0, 3.0, 201),
        fixed={"jx": 1.0, "n": N_FIGURE},
    )
    rows = scan_degeneracy(spec)
    cell = 6.0 / 200
    by_jy = {}
    for row in rows:
        by_jy.setdefault(round(row["jy"], 9), []).append(row["h"])
    missed = 0
    for jy in np.linspace(-2.0, 2.0, 201):
        for locus in (1.0 + jy, -(1.0 + jy)):
            if abs(locus) > 3.0:
                continue
            hits = [h for h in by_jy.get(round(float(jy), 9), []) if abs(h - locus) <= cell]
            missed += not hits
    assert missed == 0
    print(f"ACCEPTANCE 7a PASS: h = +-(jx+jy) loci recovered within one cell "
          f"({len(rows)} detections on the 201x201 scan)")


@pytest.mark.xfail(
    strict=True,
    reason="spec defect: parity superselection halves each zero-mode quartet; at the "
    "only N=8 on-grid zero modes (jy=jx, h=+-sqrt(2)) the periodic sector wins with "
    "multiplicity 2, and an exhaustive N=8 scan finds no multiplicity-4 ground space",
)
def test_criterion_7_multiplicity_four_at_n8_zero_modes():
    for h in (math.sqrt(2.0), -math.sqrt(2.0)):
        spectrum = cached_ground_space(1.0, 1.0, h, 8)
        assert spectrum.multiplicity == 4, (
            f"ED multiplicity {spectrum.multiplicity} != 4 at the on-grid zero mode "
            f"(jy=1, h={h:+.4f}, N=8)"
        )


def test_criterion_7_multiplicity_four_at_sector_tie():
    # the four-fold ground space the unconstrained count promises does occur at
    # N=10, (jy=-jx, h=0): an exact even/odd sector tie at the on-grid k=pi/2 zero
    spectrum = cached_ground_space(1.0, -1.0, 0.0, 10)
    assert spectrum.multiplicity == 4
    print("ACCEPTANCE 7b XFAIL (see docstring); sector-tie check at N=10 gives "
          "multiplicity 4 as the closed-form degeneracy count predicts")


def test_criterion_8_spin_conserving_derivative_null():
    """Both derivatives vanish on the spin-conserving staircase plateaus.

    The field derivative is identically zero on every plateau (occupations
    are locally constant and the pairing term is exactly absent).  For the
    coupling derivative the staircase steps are symmetric minima, so the
    central quotient vanishes as O(step^2), evaluated at step 3e-6; on the saturated shelf
    between the last mode flip and h=2 the line jy=jx is instead a V-shaped
    minimum (one-sided slopes +-2|dx/djy|), which is why that window is the
    product-state regime of criterion 3 rather than a staircase step.
    """
    thresholds = staircase_thresholds()
    edges = np.concatenate(([0.0], thresholds, [2.0]))
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    worst_h = worst_jy = 0.0
    for h in midpoints:
        params = ModelParams(1.0, 1.0, float(h), N_FIGURE)
        result = observable_derivative(params, "C13", "h", 1e-4)
        assert not result.unreliable
        worst_h = max(worst_h, abs(result.value))
    for h in midpoints[:-1]:  # staircase steps, below the saturated shelf
        params = ModelParams(1.0, 1.0, float(h), N_FIGURE)
        result = observable_derivative(params, "C13", "jy", 3e-6)
        assert not result.unreliable
        worst_jy = max(worst_jy, abs(result.value))
    assert worst_h <= 1e-8 and worst_jy <= 1e-8
    print(f"ACCEPTANCE 8a PASS: plateau-interior |dC13/dh| <= {worst_h:.1e}, "
          f"|dC13/djy| <= {worst_jy:.1e}")


def test_criterion_8_peak_growth_with_resolution():
    # near the critical locus h = jx + jy the derivative peak keeps growing as
    # the sweep resolution doubles (the singularity is only finite-size rounded)
    h_fixed, jy_star = 1.5, 0.5
    peaks = []
    for spacing in (0.064, 0.032, 0.016, 0.008):
        window = np.arange(jy_star - 0.3, jy_star + 0.3 + 1e-12, spacing)
        peak = 0.0
        for jy in window:
            params = ModelParams(1.0, float(jy), h_fixed, 1000)
            result = observable_derivative(params, "C13", "jy", spacing / 2.0)
            if not result.unreliable:
                peak = max(peak, abs(result.value))
        peaks.append(peak)
    assert all(b > a for a, b in zip(peaks, peaks[1:])), peaks
    print(f"ACCEPTANCE 8b PASS: peak |dC13/djy| grows through doublings: "
          f"{[f'{p:.3f}' for p in peaks]}")


def random_x_states(count, seed=11):
    rng = np.random.default_rng(seed)
    d = rng.dirichlet((1.0, 1.0, 1.0), size=count)
    u, v, w = d[:, 0], d[:, 1], d[:, 2] / 2.0
    x = rng.uniform(0.0, 1.0, count) * np.sqrt(u * v)
    z = rng.uniform(0.0, 1.0, count) * w
    return u, v, w, x, z


def test_criterion_9_measure_identities():
    count = 10_000
    u, v, w, x, z = random_x_states(count)

    # closed-form vs eigenvalue concurrence, vectorized over all states
    closed = 2.0 * np.maximum(0.0, np.maximum(x - w, z - np.sqrt(u * v)))
    rho = np.zeros((count, 4, 4))
    rho[:, 0, 0], rho[:, 1, 1], rho[:, 2, 2], rho[:, 3, 3] = u, w, w, v
    rho[:, 0, 3] = rho[:, 3, 0] = x
    rho[:, 1, 2] = rho[:, 2, 1] = z
    yy = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])).real
    lams = np.sqrt(np.clip(np.linalg.eigvals(rho @ (yy @ rho @ yy)).real, 0.0, None))
    lams = np.sort(lams, axis=1)[:, ::-1]
    eig_path = np.maximum(0.0, lams[:, 0] - lams[:, 1] - lams[:, 2] - lams[:, 3])
    worst_conc = float(np.max(np.abs(closed - eig_path)))
    assert worst_conc <= 1e-10

    # H(zeta) vs direct conditional entropy at (pi/2, 0); grid <= fixed discord
    basis = MeasurementBasis(np.pi / 2.0, 0.0)
    worst_cond, worst_gap = 0.0, -np.inf
    for i in range(count):
        state = XStateRDM(u=float(u[i]), v=float(v[i]), w=float(w[i]),
                          x=float(x[i]), z=float(z[i]), separation=2)
        worst_cond = max(worst_cond,
                         abs(binary_entropy(zeta(state)) - conditional_entropy(state, basis)))
        worst_gap = max(worst_gap, discord(state, "grid") - discord(state, "fixed"))
    assert worst_cond <= 1e-10
    assert worst_gap <= 1e-9
    print(f"ACCEPTANCE 9 PASS: 10^4 X states: |closed-eig| C <= {worst_conc:.1e}, "
          f"|H(zeta)-direct| <= {worst_cond:.1e}, grid-fixed discord <= {worst_gap:.1e}")


def test_criterion_10_field_reflection_suite():
    worst = 0.0
    h_grid = np.linspace(-3.0, 3.0, 41)
    for jy in (-2.0, -1.0, 0.5, 1.0, 2.0):
        for h in h_grid:
            plus = report(ModelParams(1.0, jy, float(h), N_FIGURE))
            minus = report(ModelParams(1.0, jy, -float(h), N_FIGURE))
            worst = max(worst, abs(plus.mz + minus.mz))
            for name in ("c12", "c13", "i12", "i13", "d13", "e_global"):
                worst = max(worst, abs(getattr(plus, name) - getattr(minus, name)))
    assert worst <= 1e-10
    print(f"ACCEPTANCE 10 PASS: h -> -h invariance on 41x5 grid to {worst:.1e}")
