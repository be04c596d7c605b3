"""Command-line front end: sweeps, single-point reports, degeneracy scans, validation."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .correlators import two_site_rdm
from .measures import report as correlation_report
from .model import ModelParams, Sector, classify_degeneracy, sector_energies
from .sweep import load_scan_spec, load_spec, run_sweep, scan_degeneracy, write_rows
from .validate import format_validation, run_validation


def _cmd_sweep(args) -> int:
    spec = load_spec(args.config)
    rows = run_sweep(spec)
    path = write_rows(spec, rows, path=args.output, fmt=args.format)
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _cmd_report(args) -> int:
    params = ModelParams(jx=args.jx, jy=args.jy, h=args.h, n=args.n,
                         sector=Sector.from_str(args.sector))
    rep = correlation_report(params)
    energies = sector_energies(params)
    degeneracy = classify_degeneracy(params)
    print(f"jx={args.jx} jy={args.jy} h={args.h} n={args.n} sector={args.sector}")
    print(f"E(even) = {energies.even:.12g}   E(odd, convention) = {energies.odd:.12g}   "
          f"E(odd, parity-constrained) = {energies.odd_constrained:.12g}")
    print(f"degeneracy: kind={degeneracy.kind.value} zero_modes={len(degeneracy.zero_modes)} "
          f"count={degeneracy.degeneracy} min_omega={degeneracy.min_omega:.6g}")
    if rep.degenerate:
        print("warning: zero modes on the grid; observables use the symmetric convention")
    rows = [
        ("Mz", rep.mz), ("C12", rep.c12), ("C13", rep.c13), ("I12", rep.i12),
        ("I13", rep.i13), ("D13", rep.d13), ("Eglobal", rep.e_global),
    ]
    if args.ed:
        from .ed import ground_space, measure_all

        spectrum = ground_space(params, deg_tol=args.deg_tol)
        near = measure_all(params, (0, 1), spectrum=spectrum)
        nnext = measure_all(params, (0, 2), spectrum=spectrum)
        oracle = {
            "Mz": near.mz, "C12": near.concurrence, "C13": nnext.concurrence,
            "I12": near.mutual_information, "I13": nnext.mutual_information,
            "D13": nnext.discord_grid, "Eglobal": near.e_global,
        }
        print(f"ED ground energy = {spectrum.ground_energy:.12g} "
              f"(multiplicity {spectrum.multiplicity})")
        print(f"{'quantity':<10}{'analytic':>24}{'ED':>24}{'|diff|':>12}")
        for name, value in rows:
            print(f"{name:<10}{value:>24.15g}{oracle[name]:>24.15g}"
                  f"{abs(value - oracle[name]):>12.3e}")
    else:
        print(f"{'quantity':<10}{'value':>24}")
        for name, value in rows:
            print(f"{name:<10}{value:>24.15g}")
    for sep in (1, 2):
        rdm = two_site_rdm(params, sep)
        print(f"rho(sep={sep}): u={rdm.u:.12g} v={rdm.v:.12g} w={rdm.w:.12g} "
              f"x={complex(rdm.x).real:.12g} z={complex(rdm.z).real:.12g}")
    return 0


def _cmd_scan(args) -> int:
    spec = load_scan_spec(args.config)
    rows = scan_degeneracy(spec)
    if args.output is not None or spec.output is not None:
        path = write_rows(spec, rows, path=args.output,
                          fmt=args.format if args.output is not None else None)
        print(f"wrote {len(rows)} detections to {path}")
    else:
        for row in rows:
            print(row)
        print(f"{len(rows)} detections")
    return 0


def _cmd_validate(args) -> int:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    counts = tuple(int(s) for s in args.points.split(","))
    report = run_validation(sizes=sizes, counts=counts, seed=args.seed,
                            tolerance=args.tolerance)
    print(format_validation(report))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterchain",
        description="Three-spin cluster chain: exact solution, quantum correlations, "
                    "parameter sweeps and an exact-diagonalization oracle.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a sweep described by a JSON spec")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--output", default=None, help="override the spec's output path")
    p_sweep.add_argument("--format", default=None, choices=("csv", "jsonl"))
    p_sweep.set_defaults(func=_cmd_sweep)

    p_report = sub.add_parser("report", help="all measures at a single parameter point")
    p_report.add_argument("--jx", type=float, required=True)
    p_report.add_argument("--jy", type=float, required=True)
    p_report.add_argument("--h", type=float, required=True)
    p_report.add_argument("--n", type=int, required=True)
    p_report.add_argument("--sector", default="even", choices=("even", "odd"))
    p_report.add_argument("--ed", action="store_true",
                          help="add exact-diagonalization oracle columns (n <= 12)")
    p_report.add_argument("--deg-tol", type=float, default=1e-8)
    p_report.set_defaults(func=_cmd_report)

    p_scan = sub.add_parser("scan-degeneracy", help="scan a parameter grid for zero modes")
    p_scan.add_argument("--config", required=True)
    p_scan.add_argument("--output", default=None)
    p_scan.add_argument("--format", default=None, choices=("csv", "jsonl"))
    p_scan.set_defaults(func=_cmd_scan)

    p_val = sub.add_parser("validate", help="run the analytic-vs-ED comparison suite")
    p_val.add_argument("--sizes", default="8,10,12")
    p_val.add_argument("--points", default="30,16,4")
    p_val.add_argument("--seed", type=int, default=2024)
    p_val.add_argument("--tolerance", type=float, default=1e-8)
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
