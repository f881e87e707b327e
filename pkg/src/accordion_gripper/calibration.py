"""Parameter fitting from measurement CSVs.

Three fitters are provided:

* ``fit_c1``: recovers the wall material constant from an aperture-vs-
  pressure series via 1-D bounded minimisation of the squared residuals.
* ``extract_peak_force``: peak of a force-displacement trace, with an
  optional moving-average smoother.
* ``fit_suction``: recovers the suction model's effective seal area and
  effective interior height from (chamber pressure, peak force) pairs via a
  grid-seeded Nelder-Mead refinement.

All fitters are deterministic given their inputs.  CSV parsing is strict:
the header must match the series kind exactly and malformed rows abort
with their line number.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .chamber import ChamberGeometry, SolverBox
from .errors import CalibrationError, OutOfWorkspaceError
from .gripper import GripperAssembly, aperture_vs_pressure
from .material import HyperelasticMaterial


class SeriesKind(str, Enum):
    PRESSURE_APERTURE = "pressure_aperture"
    FORCE_DISPLACEMENT = "force_displacement"
    SUCTION_FORCE = "suction_force"


#: Required CSV header (x column, y column) per series kind.
SERIES_HEADERS = {
    SeriesKind.PRESSURE_APERTURE: ("pressure_kPa", "aperture_mm"),
    SeriesKind.FORCE_DISPLACEMENT: ("displacement_mm", "force_N"),
    SeriesKind.SUCTION_FORCE: ("pressure_kPa", "force_N"),
}

# Suction series may carry as few as two points (two anchor pressures
# suffice for the 2-parameter model); the others need three.
_MIN_ROWS = {
    SeriesKind.PRESSURE_APERTURE: 3,
    SeriesKind.FORCE_DISPLACEMENT: 3,
    SeriesKind.SUCTION_FORCE: 2,
}


@dataclass(frozen=True)
class MeasurementSeries:
    kind: SeriesKind
    rows: tuple  # ordered (x, y) pairs

    def __post_init__(self) -> None:
        if len(self.rows) < _MIN_ROWS[self.kind]:
            raise CalibrationError(
                f"{self.kind.value} series needs at least "
                f"{_MIN_ROWS[self.kind]} rows, got {len(self.rows)}"
            )
        if self.kind is SeriesKind.PRESSURE_APERTURE:
            xs = [x for x, _ in self.rows]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise CalibrationError(
                    "pressure_aperture series must have strictly increasing pressures"
                )

    @classmethod
    def from_pairs(cls, kind: SeriesKind, pairs) -> "MeasurementSeries":
        return cls(kind=kind, rows=tuple((float(x), float(y)) for x, y in pairs))

    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.rows])

    def ys(self) -> np.ndarray:
        return np.array([y for _, y in self.rows])


def load_series_csv(path, kind: SeriesKind) -> MeasurementSeries:
    """Read a measurement CSV, failing loudly on any malformed content."""
    expected = SERIES_HEADERS[kind]
    pairs = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CalibrationError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != expected:
            raise CalibrationError(
                f"{path}:1: expected header {','.join(expected)!r}, "
                f"got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise CalibrationError(
                    f"{path}:{lineno}: expected 2 fields, got {len(row)}"
                )
            try:
                pairs.append((float(row[0]), float(row[1])))
            except ValueError:
                raise CalibrationError(
                    f"{path}:{lineno}: non-numeric value in {row!r}"
                ) from None
    return MeasurementSeries.from_pairs(kind, pairs)


@dataclass(frozen=True)
class FitReport:
    """Outcome of a parameter fit."""

    params: dict
    residual_norm: float
    per_point: tuple
    at_bound: bool = False
    notes: str = ""
    n_evals: int = 0

    def to_dict(self) -> dict:
        return {
            "params": dict(self.params),
            "residual_norm": self.residual_norm,
            "per_point": [dict(p) for p in self.per_point],
            "at_bound": self.at_bound,
            "notes": self.notes,
            "n_evals": self.n_evals,
        }


def _per_point(xs, ys, preds):
    return tuple(
        {"x": float(x), "measured": float(y), "predicted": float(p), "error": float(p - y)}
        for x, y, p in zip(xs, ys, preds)
    )


# ---------------------------------------------------------------------------
# Material constant


def fit_c1(
    series: MeasurementSeries,
    geom: ChamberGeometry,
    n_chambers: int = 22,
    bounds: tuple[float, float] = (10.0, 1000.0),
    box: SolverBox | None = None,
) -> FitReport:
    """Fit the material constant c1 (kPa) to an aperture-vs-pressure series."""
    if series.kind is not SeriesKind.PRESSURE_APERTURE:
        raise CalibrationError(f"fit_c1 needs a pressure_aperture series, got {series.kind.value}")
    xs, ys = series.xs(), series.ys()
    if np.any(xs <= 0):
        raise CalibrationError("fit_c1 needs pressures strictly above 0 kPa")
    # A flat or shrinking aperture trend carries no stiffness information.
    slope = np.polyfit(xs, ys, 1)[0]
    if slope <= 0:
        raise CalibrationError(
            f"series rejected: aperture does not increase with pressure "
            f"(fitted trend {slope:.3g} mm/kPa)"
        )

    evals = [0]

    def predict(c1: float) -> np.ndarray:
        assembly = GripperAssembly(geom, HyperelasticMaterial(c1), n_chambers)
        return np.array([aperture_vs_pressure(assembly, p, box) for p in xs])

    def sse(c1: float) -> float:
        evals[0] += 1
        try:
            return float(np.sum((predict(c1) - ys) ** 2))
        except OutOfWorkspaceError:
            # Softer material cannot reach the highest series pressure inside
            # the solver box; steer the search away.
            return 1e12 * (1.0 + abs(math.log(c1 / bounds[1])))

    result = minimize_scalar(
        sse, bounds=bounds, method="bounded", options={"xatol": 1e-9}
    )
    c1_hat = float(result.x)
    try:
        preds = predict(c1_hat)
    except OutOfWorkspaceError:
        raise CalibrationError(
            f"fit_c1 failed: optimum c1={c1_hat:.4g} kPa cannot reproduce the "
            "series inside the solver box"
        ) from None
    span = bounds[1] - bounds[0]
    at_bound = min(c1_hat - bounds[0], bounds[1] - c1_hat) < 1e-3 * span
    return FitReport(
        params={"c1_kPa": c1_hat},
        residual_norm=float(np.sqrt(np.sum((preds - ys) ** 2))),
        per_point=_per_point(xs, ys, preds),
        at_bound=at_bound,
        notes="optimizer at bound" if at_bound else "",
        n_evals=evals[0],
    )


# ---------------------------------------------------------------------------
# Peak extraction


def extract_peak_force(series: MeasurementSeries, smoothing_window: int = 1) -> float:
    """Peak force (N) of a force-displacement trace.

    ``smoothing_window`` > 1 applies a centred moving average before taking
    the maximum (window 1 means no smoothing).
    """
    if series.kind is not SeriesKind.FORCE_DISPLACEMENT:
        raise CalibrationError(
            f"extract_peak_force needs a force_displacement series, got {series.kind.value}"
        )
    ys = series.ys()
    if smoothing_window < 1:
        raise ValueError(f"smoothing window must be >= 1, got {smoothing_window}")
    if smoothing_window > len(ys):
        raise CalibrationError(
            f"smoothing window {smoothing_window} exceeds series length {len(ys)}"
        )
    if smoothing_window > 1:
        kernel = np.ones(smoothing_window) / smoothing_window
        ys = np.convolve(ys, kernel, mode="valid")
    return float(np.max(ys))


# ---------------------------------------------------------------------------
# Suction model parameters


def fit_suction(
    series: MeasurementSeries,
    assembly: GripperAssembly,
    lift_volume_increase_mm3: float = 5000.0,
    ambient_pressure_kPa: float = 101.325,
    area_bounds: tuple[float, float] = (1.0, 1e5),
    height_bounds: tuple[float, float] = (1.0, 500.0),
    box: SolverBox | None = None,
) -> FitReport:
    """Fit (A_eff mm^2, h_eff mm) of the suction model to measured peaks.

    The aperture radii at the series pressures depend only on the assembly,
    so they are solved once up front; the 2-parameter least-squares problem
    is then cheap and refined by Nelder-Mead from the best grid seed.
    """
    if series.kind is not SeriesKind.SUCTION_FORCE:
        raise CalibrationError(
            f"fit_suction needs a suction_force series, got {series.kind.value}"
        )
    xs, ys = series.xs(), series.ys()
    if np.any(xs < 0):
        raise CalibrationError("chamber pressures must be >= 0 kPa")
    if len(np.unique(xs)) < 2:
        raise CalibrationError(
            "underdetermined fit: need peaks at >= 2 distinct chamber pressures"
        )

    rg0 = aperture_vs_pressure(assembly, 0.0, box)
    rgs = np.array([aperture_vs_pressure(assembly, p, box) for p in xs])

    def predict(a_eff: float, h_eff: float) -> np.ndarray:
        v0 = math.pi * rg0 * rg0 * h_eff
        volumes = math.pi * rgs**2 * h_eff + lift_volume_increase_mm3
        p_interior = ambient_pressure_kPa * v0 / volumes
        force_mN = (ambient_pressure_kPa - p_interior) * a_eff
        return np.maximum(force_mN, 0.0) / 1000.0

    def sse(params) -> float:
        return float(np.sum((predict(params[0], params[1]) - ys) ** 2))

    grid_a = np.geomspace(*area_bounds, 16)
    grid_h = np.geomspace(*height_bounds, 16)
    seed = min(
        ((a, h) for a in grid_a for h in grid_h), key=lambda ah: sse(ah)
    )
    result = minimize(
        sse,
        x0=np.array(seed),
        method="Nelder-Mead",
        bounds=[area_bounds, height_bounds],
        options={"xatol": 1e-8, "fatol": 1e-18, "maxiter": 5000, "maxfev": 5000},
    )
    a_hat, h_hat = float(result.x[0]), float(result.x[1])
    preds = predict(a_hat, h_hat)
    notes = []
    if a_hat - area_bounds[0] < 1e-3 * (area_bounds[1] - area_bounds[0]):
        notes.append("degenerate: effective seal area at lower bound")
    at_bound = bool(notes) or (
        area_bounds[1] - a_hat < 1e-3 * (area_bounds[1] - area_bounds[0])
        or min(h_hat - height_bounds[0], height_bounds[1] - h_hat)
        < 1e-3 * (height_bounds[1] - height_bounds[0])
    )
    if at_bound and not notes:
        notes.append("optimizer at bound")
    return FitReport(
        params={"A_eff_mm2": a_hat, "h_eff_mm": h_hat},
        residual_norm=float(np.sqrt(np.sum((preds - ys) ** 2))),
        per_point=_per_point(xs, ys, preds),
        at_bound=at_bound,
        notes="; ".join(notes),
        n_evals=int(result.nfev),
    )
