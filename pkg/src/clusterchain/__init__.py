"""Exact solution and quantum correlations of a three-spin cluster chain.

The chain couples every three neighbouring spins through XZX and YZY terms
in a transverse field; a Jordan-Wigner map makes it free fermions, so the
ground state, its reduced density matrices and every pairwise correlation
measure come out in closed form.  A dense exact-diagonalization oracle
(chains up to 12 sites) validates each formula, and a small CLI drives
parameter sweeps, degeneracy scans and the validation suite.
"""

from .model import (
    ConsistencyError,
    DegeneracyKind,
    DegeneracyReport,
    ModelParams,
    MomentumGrid,
    MomentumMode,
    Sector,
    SectorEnergies,
    allowed_momenta,
    classify_degeneracy,
    couplings,
    default_tol_zero,
    ground_energy,
    mode,
    modes,
    sector_energies,
)
from .correlators import (
    AuxSums,
    SingleSiteRDM,
    XStateRDM,
    aux_sums,
    magnetisation,
    occupation,
    single_site_rdm,
    two_site_rdm,
)
from .measures import (
    CorrelationReport,
    MeasurementBasis,
    XStateSpectrum,
    binary_entropy,
    concurrence,
    concurrence_general,
    conditional_entropy,
    discord,
    entropy,
    global_entanglement,
    mutual_information,
    report,
    x_state_spectrum,
    zeta,
)
from .ed import (
    EDPointReport,
    SpectrumResult,
    build_hamiltonian,
    cluster_state,
    ground_space,
    measure_all,
    partial_trace,
    pauli_product,
    up_count,
)
from .sweep import (
    AxisSpec,
    DerivativeSpec,
    OutputSpec,
    ScanSpec,
    SweepSpec,
    load_scan_spec,
    load_spec,
    observable_derivative,
    parse_csv,
    point_values,
    run_sweep,
    scan_degeneracy,
    write_rows,
)
from .validate import (
    ValidationReport,
    compare_point,
    format_validation,
    run_validation,
    sample_nondegenerate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
