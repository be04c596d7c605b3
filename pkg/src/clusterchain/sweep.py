"""Parameter sweeps, finite-difference derivatives and degeneracy scans.

A sweep is described by a JSON-serializable :class:`SweepSpec`: up to two
linearly spaced axes over (jx, jy, h, n), fixed values for the remaining
parameters, a list of observables, optional central-difference derivative
requests, the parity sector and an output target.  Rows are evaluated in a
fixed order (axis2 fastest) with no randomness, so re-running a spec
reproduces its output byte for byte; CSV files carry the full spec as a
``#``-prefixed JSON header line and print floats with 17 significant
digits.  Degenerate points are evaluated under the symmetric zero-mode
convention and flagged in a trailing column rather than dropped; derivative
columns whose stencil touches a flagged point are emitted as NaN.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np

from .correlators import aux_sums
from .measures import concurrence, discord, global_entanglement, mutual_information
from .correlators import _xstate_from_aux
from .model import DegeneracyKind, ModelParams, Sector, classify_degeneracy

__all__ = [
    "AxisSpec",
    "DerivativeSpec",
    "OutputSpec",
    "SweepSpec",
    "ScanSpec",
    "DerivativeResult",
    "load_spec",
    "load_scan_spec",
    "point_values",
    "observable_derivative",
    "run_sweep",
    "scan_degeneracy",
    "write_rows",
    "parse_csv",
]

_PARAMETERS = ("jx", "jy", "h", "n")
_PLAIN_OBSERVABLES = (
    "Mz", "C12", "C13", "I12", "I13", "D13", "Eglobal", "corrZZ", "corrPP", "corrPM",
)
_AUX_PATTERN = re.compile(r"^(gamma|xi)_(\d+)$")


def _require_keys(data: dict, allowed: tuple, where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ValueError(f"unknown key(s) {unknown} in {where}; allowed: {sorted(allowed)}")


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter on a linear grid of `count` >= 2 points."""

    parameter: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.parameter not in _PARAMETERS:
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if self.count < 2:
            raise ValueError(f"axis count must be >= 2, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def from_dict(cls, data: dict, where: str) -> "AxisSpec":
        _require_keys(data, ("parameter", "start", "stop", "count"), where)
        return cls(str(data["parameter"]), float(data["start"]), float(data["stop"]),
                   int(data["count"]))

    def to_dict(self) -> dict:
        return {"parameter": self.parameter, "start": self.start, "stop": self.stop,
                "count": self.count}


@dataclass(frozen=True)
class DerivativeSpec:
    """Central-difference derivative of an observable with respect to jy or h."""

    observable: str
    wrt: str
    step: float = 1e-4

    def __post_init__(self) -> None:
        if self.wrt.lower() not in ("jy", "h"):
            raise ValueError(f"derivatives support wrt 'jy' or 'h', got {self.wrt!r}")
        object.__setattr__(self, "wrt", self.wrt.lower())
        if self.step <= 0:
            raise ValueError("derivative step must be positive")
        _check_observable(self.observable)

    def columns(self) -> tuple:
        base = f"d{self.observable}_d{self.wrt}"
        return base, base + "_err"

    @classmethod
    def from_dict(cls, data: dict, where: str) -> "DerivativeSpec":
        _require_keys(data, ("observable", "wrt", "step"), where)
        return cls(str(data["observable"]), str(data["wrt"]), float(data.get("step", 1e-4)))

    def to_dict(self) -> dict:
        return {"observable": self.observable, "wrt": self.wrt, "step": self.step}


@dataclass(frozen=True)
class OutputSpec:
    path: str
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in ("csv", "jsonl"):
            raise ValueError(f"output format must be 'csv' or 'jsonl', got {self.format!r}")

    @classmethod
    def from_dict(cls, data: dict, where: str) -> "OutputSpec":
        _require_keys(data, ("path", "format"), where)
        return cls(str(data["path"]), str(data.get("format", "csv")))

    def to_dict(self) -> dict:
        return {"path": self.path, "format": self.format}


def _check_observable(name: str) -> None:
    if name in _PLAIN_OBSERVABLES or _AUX_PATTERN.match(name):
        return
    raise ValueError(
        f"unknown observable {name!r}; expected one of {_PLAIN_OBSERVABLES} "
        "or gamma_<p> / xi_<p>"
    )


@dataclass(frozen=True)
class SweepSpec:
    """Grid, observables and derivative requests for one sweep run."""

    axis1: AxisSpec
    axis2: AxisSpec | None
    fixed: dict
    observables: tuple
    derivatives: tuple = ()
    sector: str = "even"
    output: OutputSpec | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "derivatives", tuple(self.derivatives))
        swept = [self.axis1.parameter] + ([self.axis2.parameter] if self.axis2 else [])
        if len(set(swept)) != len(swept):
            raise ValueError("swept parameter names must be distinct")
        for name in self.fixed:
            if name not in _PARAMETERS:
                raise ValueError(f"unknown fixed parameter {name!r}")
            if name in swept:
                raise ValueError(f"parameter {name!r} is both fixed and swept")
        missing = set(_PARAMETERS) - set(swept) - set(self.fixed)
        if missing:
            raise ValueError(f"missing parameter value(s): {sorted(missing)}")
        if not self.observables and not self.derivatives:
            raise ValueError("nothing to evaluate: no observables or derivatives")
        if len(set(self.observables)) != len(self.observables):
            raise ValueError("duplicate observable names")
        for name in self.observables:
            _check_observable(name)
        Sector.from_str(self.sector)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        _require_keys(
            data,
            ("axis1", "axis2", "fixed", "observables", "derivatives", "sector", "output"),
            "sweep spec",
        )
        if "axis1" not in data or "fixed" not in data or "observables" not in data:
            raise ValueError("sweep spec requires axis1, fixed and observables")
        axis2 = data.get("axis2")
        output = data.get("output")
        return cls(
            axis1=AxisSpec.from_dict(data["axis1"], "axis1"),
            axis2=AxisSpec.from_dict(axis2, "axis2") if axis2 is not None else None,
            fixed={str(k): v for k, v in data["fixed"].items()},
            observables=tuple(data["observables"]),
            derivatives=tuple(
                DerivativeSpec.from_dict(d, "derivatives") for d in data.get("derivatives", [])
            ),
            sector=str(data.get("sector", "even")),
            output=OutputSpec.from_dict(output, "output") if output is not None else None,
        )

    def to_dict(self) -> dict:
        out = {
            "axis1": self.axis1.to_dict(),
            "axis2": self.axis2.to_dict() if self.axis2 else None,
            "fixed": dict(self.fixed),
            "observables": list(self.observables),
            "derivatives": [d.to_dict() for d in self.derivatives],
            "sector": self.sector,
            "output": self.output.to_dict() if self.output else None,
        }
        return out

    def columns(self) -> list:
        cols = [self.axis1.parameter] + ([self.axis2.parameter] if self.axis2 else [])
        cols += list(self.observables)
        for deriv in self.derivatives:
            cols += list(deriv.columns())
        cols.append("degenerate")
        return cols


def load_spec(path) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        return SweepSpec.from_dict(json.load(fh))


def _make_params(values: dict, sector: str) -> ModelParams:
    n = values["n"]
    n_int = int(round(n))
    if abs(n - n_int) > 1e-9:
        raise ValueError(f"chain length must be an integer, got {n!r}")
    return ModelParams(jx=float(values["jx"]), jy=float(values["jy"]), h=float(values["h"]),
                       n=n_int, sector=Sector.from_str(sector))


def _max_aux_order(names) -> int:
    p_max = 2
    for name in names:
        match = _AUX_PATTERN.match(name)
        if match:
            p_max = max(p_max, int(match.group(2)))
    return p_max


def point_values(params: ModelParams, names, tol_zero: float | None = None) -> tuple:
    """Evaluate the named observables at one point; returns (values, degenerate)."""
    aux = aux_sums(params, _max_aux_order(names), tol_zero)
    rdm1 = _xstate_from_aux(aux, 1)
    rdm2 = _xstate_from_aux(aux, 2)
    out = {}
    for name in names:
        match = _AUX_PATTERN.match(name)
        if match:
            table = aux.gamma if match.group(1) == "gamma" else aux.xi
            out[name] = float(table[int(match.group(2))])
        elif name == "Mz":
            out[name] = 2.0 * aux.n - 1.0
        elif name == "C12":
            out[name] = concurrence(rdm1)
        elif name == "C13":
            out[name] = concurrence(rdm2)
        elif name == "I12":
            out[name] = mutual_information(rdm1)
        elif name == "I13":
            out[name] = mutual_information(rdm2)
        elif name == "D13":
            out[name] = discord(rdm2, mode="fixed")
        elif name == "Eglobal":
            out[name] = global_entanglement(aux.n)
        elif name == "corrZZ":
            out[name] = rdm2.u + rdm2.v - 2.0 * rdm2.w
        elif name == "corrPP":
            out[name] = float(np.real(rdm2.x))
        elif name == "corrPM":
            out[name] = float(np.real(rdm2.z))
        else:  # unreachable after validation
            raise ValueError(f"unknown observable {name!r}")
    return out, aux.degenerate


@dataclass(frozen=True)
class DerivativeResult:
    value: float
    error: float
    unreliable: bool


def observable_derivative(
    params: ModelParams,
    observable: str,
    wrt: str,
    step: float,
    tol_zero: float | None = None,
) -> DerivativeResult:
    """Central difference (f(p+d) - f(p-d)) / 2d with a Richardson error estimate.

    The half-step quotient eliminates the leading O(d^2) term; the reported
    error is 4/3 times the difference of the two quotients.  The result is
    marked unreliable when any stencil point sits on a flagged zero mode.
    """
    wrt = wrt.lower()
    if wrt not in ("jy", "h"):
        raise ValueError(f"derivative wrt must be 'jy' or 'h', got {wrt!r}")
    if step <= 0:
        raise ValueError("derivative step must be positive")
    _check_observable(observable)
    center = getattr(params, wrt)

    def value_at(shift: float):
        values, degenerate = point_values(
            params.replace(**{wrt: center + shift}), (observable,), tol_zero
        )
        return values[observable], degenerate

    # a zero mode at the center sits inside the stencil: the quotient would
    # straddle the jump, so the point is flagged even though no evaluation
    # lands on it
    _, degenerate = point_values(params, (observable,), tol_zero)
    quotients = []
    for delta in (step, 0.5 * step):
        hi, deg_hi = value_at(delta)
        lo, deg_lo = value_at(-delta)
        degenerate = degenerate or deg_hi or deg_lo
        quotients.append((hi - lo) / (2.0 * delta))
    error = abs(quotients[1] - quotients[0]) * (4.0 / 3.0)
    if degenerate:
        return DerivativeResult(value=math.nan, error=math.nan, unreliable=True)
    return DerivativeResult(value=quotients[0], error=error, unreliable=False)


def run_sweep(spec: SweepSpec) -> list:
    """Evaluate the grid row by row (axis2 fastest), in deterministic order."""
    rows = []
    axis2_values = spec.axis2.values() if spec.axis2 else [None]
    for value1 in spec.axis1.values():
        for value2 in axis2_values:
            point = dict(spec.fixed)
            point[spec.axis1.parameter] = float(value1)
            if spec.axis2:
                point[spec.axis2.parameter] = float(value2)
            params = _make_params(point, spec.sector)
            row = {spec.axis1.parameter: float(value1)}
            if spec.axis2:
                row[spec.axis2.parameter] = float(value2)
            values, degenerate = point_values(params, spec.observables)
            row.update(values)
            for deriv in spec.derivatives:
                result = observable_derivative(params, deriv.observable, deriv.wrt, deriv.step)
                col_val, col_err = deriv.columns()
                row[col_val] = result.value
                row[col_err] = result.error
                degenerate = degenerate or result.unreliable
            row["degenerate"] = int(degenerate)
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# degeneracy scans


@dataclass(frozen=True)
class ScanSpec:
    """Two-axis scan reporting points whose minimal mode energy is near zero.

    Detection looks at the union of both parity sectors' momentum grids
    (including the odd sector's k = 0, pi edge levels, which carry the
    h = jx + jy locus).  ``detect_tol`` defaults to 0.6 times the largest
    axis step, so any crossing of a true degeneracy locus is caught within
    one grid cell.
    """

    axis1: AxisSpec
    axis2: AxisSpec
    fixed: dict
    detect_tol: float | None = None
    output: OutputSpec | None = None

    def __post_init__(self) -> None:
        swept = {self.axis1.parameter, self.axis2.parameter}
        if len(swept) != 2:
            raise ValueError("scan axes must differ")
        missing = set(_PARAMETERS) - swept - set(self.fixed)
        if missing:
            raise ValueError(f"missing parameter value(s): {sorted(missing)}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScanSpec":
        _require_keys(data, ("axis1", "axis2", "fixed", "detect_tol", "output"), "scan spec")
        output = data.get("output")
        return cls(
            axis1=AxisSpec.from_dict(data["axis1"], "axis1"),
            axis2=AxisSpec.from_dict(data["axis2"], "axis2"),
            fixed={str(k): v for k, v in data["fixed"].items()},
            detect_tol=float(data["detect_tol"]) if data.get("detect_tol") is not None else None,
            output=OutputSpec.from_dict(output, "output") if output is not None else None,
        )

    def to_dict(self) -> dict:
        return {
            "axis1": self.axis1.to_dict(),
            "axis2": self.axis2.to_dict(),
            "fixed": dict(self.fixed),
            "detect_tol": self.detect_tol,
            "output": self.output.to_dict() if self.output else None,
        }

    def columns(self) -> list:
        return [self.axis1.parameter, self.axis2.parameter,
                "min_omega", "zero_modes", "degeneracy", "kind"]


def load_scan_spec(path) -> ScanSpec:
    with open(path, encoding="utf-8") as fh:
        return ScanSpec.from_dict(json.load(fh))


def scan_degeneracy(spec: ScanSpec) -> list:
    """Detected near-degenerate grid points with their three-case classification."""
    steps = []
    for axis in (spec.axis1, spec.axis2):
        steps.append(abs(axis.stop - axis.start) / (axis.count - 1))
    tol = spec.detect_tol if spec.detect_tol is not None else 0.6 * max(steps)
    if tol <= 0:
        raise ValueError("detection tolerance must be positive")
    rows = []
    for value1 in spec.axis1.values():
        for value2 in spec.axis2.values():
            point = dict(spec.fixed)
            point[spec.axis1.parameter] = float(value1)
            point[spec.axis2.parameter] = float(value2)
            reports = [
                classify_degeneracy(_make_params(point, sector), tol_zero=tol)
                for sector in ("even", "odd")
            ]
            min_omega = min(r.min_omega for r in reports)
            zero_modes = sorted(set(k for r in reports for k in r.zero_modes))
            if not zero_modes:
                continue
            kind = DegeneracyKind.NONE
            for r in reports:
                if r.kind is DegeneracyKind.LINE_SPIN_CONSERVING:
                    kind = r.kind
                    break
                if r.kind is not DegeneracyKind.NONE:
                    kind = r.kind
            rows.append(
                {
                    spec.axis1.parameter: float(value1),
                    spec.axis2.parameter: float(value2),
                    "min_omega": min_omega,
                    "zero_modes": len(zero_modes),
                    "degeneracy": 4 ** len(zero_modes),
                    "kind": kind.value,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# emission


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_, int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def write_rows(spec, rows, path=None, fmt=None) -> str:
    """Emit rows as CSV (spec in a # header line) or JSON lines; returns the path."""
    if path is None or fmt is None:
        if spec.output is None:
            raise ValueError("no output target: pass path/fmt or set spec.output")
        path = path if path is not None else spec.output.path
        fmt = fmt if fmt is not None else spec.output.format
    columns = spec.columns()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if fmt == "csv":
            fh.write("# " + json.dumps(spec.to_dict(), separators=(",", ":")) + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_format_cell(row[c]) for c in columns) + "\n")
        elif fmt == "jsonl":
            fh.write(json.dumps({"spec": spec.to_dict()}, separators=(",", ":")) + "\n")
            for row in rows:
                payload = {c: row[c] for c in columns}
                fh.write(json.dumps(payload, separators=(",", ":"), allow_nan=True) + "\n")
        else:
            raise ValueError(f"unknown output format {fmt!r}")
    return str(path)


def parse_csv(path) -> tuple:
    """Read back an emitted CSV: (spec dict, rows with floats; flags as ints)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("# "):
            raise ValueError("missing spec header line")
        spec_dict = json.loads(header[2:])
        columns = fh.readline().rstrip("\n").split(",")
        rows = []
        for line in fh:
            cells = line.rstrip("\n").split(",")
            row = {}
            for name, cell in zip(columns, cells):
                if name in ("degenerate", "zero_modes", "degeneracy"):
                    row[name] = int(cell)
                elif name == "kind":
                    row[name] = cell
                else:
                    row[name] = float(cell)
            rows.append(row)
    return spec_dict, rows
