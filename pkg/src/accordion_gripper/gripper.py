"""Whole-gripper assembly: aperture mapping, forward/inverse queries,
workspace reporting and pressure sweeps.

The gripper is a ring of N identical chambers, each occupying a sector of
angle alpha = 2*pi/N.  The deformed wall distance D of one chamber
approximates the arc length of its sector, so the aperture radius is
R_g = D/alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .chamber import (
    ChamberGeometry,
    SolverBox,
    area_residual,
    pin_residual,
    pressure_quadrature,
    solve_deformation,
    wall_distance,
)
from .errors import OutOfWorkspaceError
from .material import HyperelasticMaterial

_EPS = 2.220446049250313e-16

#: Column order of the sweep CSV export.
SWEEP_CSV_HEADER = (
    "pressure_kPa,r0_mm,r1_mm,theta0_rad,D_mm,Rg_mm,"
    "pin_residual,area_residual,quadrature_check_kPa"
)


@dataclass(frozen=True)
class GripperAssembly:
    """Ring of identical chambers plus the shared wall material."""

    geometry: ChamberGeometry
    material: HyperelasticMaterial
    n_chambers: int = 22
    folded_aperture_mm: float = 5.0  # contraction-side bound, configured not modelled

    def __post_init__(self) -> None:
        if not (isinstance(self.n_chambers, int) and self.n_chambers >= 3):
            raise ValueError(f"n_chambers must be an integer >= 3, got {self.n_chambers}")
        if self.folded_aperture_mm < 0:
            raise ValueError(
                f"folded_aperture_mm must be >= 0, got {self.folded_aperture_mm}"
            )

    @property
    def sector_angle(self) -> float:
        """alpha = 2*pi/N, rad."""
        return 2.0 * math.pi / self.n_chambers


@dataclass(frozen=True)
class Workspace:
    """Aperture radii reachable by the gripper, mm."""

    min_aperture_mm: float
    rest_aperture_mm: float
    max_aperture_mm: float

    def as_dict(self) -> dict:
        return {
            "min_aperture_mm": self.min_aperture_mm,
            "rest_aperture_mm": self.rest_aperture_mm,
            "max_aperture_mm": self.max_aperture_mm,
        }


@dataclass(frozen=True)
class SweepRow:
    pressure_kPa: float
    r0_mm: float
    r1_mm: float
    theta0_rad: float
    D_mm: float
    Rg_mm: float
    pin_residual: float
    area_residual: float
    quadrature_check_kPa: float


def aperture_radius(d: float, assembly: GripperAssembly) -> float:
    """Aperture radius R_g = D/alpha for wall distance d (mm)."""
    if d < 0:
        raise ValueError(f"wall distance must be >= 0, got {d}")
    return d / assembly.sector_angle


def aperture_vs_pressure(
    assembly: GripperAssembly,
    p: float,
    box: SolverBox | None = None,
    tol: float = 1e-12,
) -> float:
    """Forward map: aperture radius (mm) at inflation pressure p (kPa)."""
    state = solve_deformation(assembly.geometry, assembly.material, p, box, tol)
    return aperture_radius(wall_distance(state), assembly)


def inverse_pressure(
    assembly: GripperAssembly,
    target_rg: float,
    p_max: float = 40.0,
    tol: float = 1e-12,
    box: SolverBox | None = None,
) -> float:
    """Pressure (kPa) at which the aperture radius equals target_rg (mm).

    Bracketed root finding on the monotone forward map over [0, p_max].
    """
    rg_lo = aperture_vs_pressure(assembly, 0.0, box)
    rg_hi = aperture_vs_pressure(assembly, p_max, box)
    if not rg_lo <= target_rg <= rg_hi:
        raise OutOfWorkspaceError(
            f"target aperture {target_rg} mm outside the achievable range "
            f"[{rg_lo:.6g}, {rg_hi:.6g}] mm for pressures in [0, {p_max}] kPa",
            reachable=(rg_lo, rg_hi),
        )

    def f(p: float) -> float:
        return aperture_vs_pressure(assembly, p, box) - target_rg

    if f(0.0) == 0.0:
        return 0.0
    if f(p_max) == 0.0:
        return p_max
    return brentq(f, 0.0, p_max, xtol=tol, rtol=4 * _EPS)


def workspace(
    assembly: GripperAssembly, p_max: float = 40.0, box: SolverBox | None = None
) -> Workspace:
    """Aperture range over the admissible pressure span.

    The contraction-side minimum is the configured folded aperture; the
    folding branch is not modelled analytically.
    """
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    rest = aperture_vs_pressure(assembly, 0.0, box)
    largest = aperture_vs_pressure(assembly, p_max, box)
    return Workspace(
        min_aperture_mm=assembly.folded_aperture_mm,
        rest_aperture_mm=rest,
        max_aperture_mm=largest,
    )


def contraction_diameter_range(
    ws: Workspace, stretch_margin_mm: float = 8.65
) -> tuple[float, float]:
    """Feasible object diameters (mm) for contraction grasping.

    Lower end: twice the folded aperture.  Upper end: twice the rest
    aperture plus a stretch margin for objects the gripper can stretch
    around after contact.
    """
    return (
        2.0 * ws.min_aperture_mm,
        2.0 * ws.rest_aperture_mm + stretch_margin_mm,
    )


def sweep(
    assembly: GripperAssembly,
    p_from: float,
    p_to: float,
    steps: int,
    box: SolverBox | None = None,
    quad_rel_tol: float = 1e-9,
) -> list[SweepRow]:
    """Evaluate the forward model on a uniform pressure grid.

    Each row carries the solved state, aperture, constraint residuals and
    an independent quadrature check of the pressure.  Deterministic.
    """
    if not p_from < p_to:
        raise ValueError(f"empty sweep range [{p_from}, {p_to}]")
    if steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {steps}")
    geom, mat = assembly.geometry, assembly.material
    rows = []
    for i in range(steps):
        p = p_from + (p_to - p_from) * i / (steps - 1)
        state = solve_deformation(geom, mat, p, box)
        d = wall_distance(state)
        rows.append(
            SweepRow(
                pressure_kPa=p,
                r0_mm=state.r_outer,
                r1_mm=state.r_inner,
                theta0_rad=state.half_angle,
                D_mm=d,
                Rg_mm=aperture_radius(d, assembly),
                pin_residual=pin_residual(geom, state),
                area_residual=area_residual(geom, state),
                quadrature_check_kPa=pressure_quadrature(geom, state, mat, quad_rel_tol),
            )
        )
    return rows


def format_sweep_csv(rows: list[SweepRow]) -> str:
    """Render sweep rows as CSV text, 9 significant digits per value."""
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                f"{v:.9g}"
                for v in (
                    row.pressure_kPa,
                    row.r0_mm,
                    row.r1_mm,
                    row.theta0_rad,
                    row.D_mm,
                    row.Rg_mm,
                    row.pin_residual,
                    row.area_residual,
                    row.quadrature_check_kPa,
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_sweep_csv(rows))
