"""Grasp-mode selection, pressure schedules, squeeze-capacity estimates and
the expansion-driven suction force model.

The capacity model is deliberately empirical: a per-shape slope plus a
plateau that reflects buckling of the chamber walls under vacuum (forces
stop growing beyond roughly -30 kPa).  It is calibrated from measurements,
never derived from the hyperelastic wall model.

The suction model closes the qualitative mechanism (sealing a lip against a
flat surface and inflating/lifting so the enclosed volume grows) with an
isothermal ideal-gas law: P_I * V = P_atm * V0.  The enclosed volume is a
single-parameter cylinder model V(P_C) = pi * R_g(P_C)^2 * h_eff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .errors import CalibrationError
from .gripper import (
    GripperAssembly,
    Workspace,
    aperture_vs_pressure,
    contraction_diameter_range,
)

PRESSURE_LIMIT_KPA = 40.0  # schedules never exceed +/- this


class ShapeClass(str, Enum):
    CYLINDER = "cylinder"
    SPHERE = "sphere"
    CONE = "cone"
    PYRAMID = "pyramid"
    CUBE = "cube"
    IRREGULAR = "irregular"
    FLAT_PLATE = "flat_plate"


class GraspMode(str, Enum):
    CONTRACTION = "contraction"
    EXPANSION = "expansion"
    SUCTION = "suction"


@dataclass(frozen=True)
class ObjectDescriptor:
    """Size/shape/pose summary of a candidate object."""

    shape_class: ShapeClass
    characteristic_diameter_mm: float
    mass_kg: float = 0.0
    has_aperture: bool = False
    aperture_diameter_mm: float | None = None
    has_flat_sealable_surface: bool = False
    orientation_note: str = ""

    def __post_init__(self) -> None:
        if self.characteristic_diameter_mm <= 0:
            raise ValueError(
                f"characteristic diameter must be > 0, got {self.characteristic_diameter_mm}"
            )
        if self.mass_kg < 0:
            raise ValueError(f"mass must be >= 0, got {self.mass_kg}")
        if self.has_aperture != (self.aperture_diameter_mm is not None):
            raise ValueError("aperture_diameter_mm must be present iff has_aperture")
        if self.aperture_diameter_mm is not None and self.aperture_diameter_mm <= 0:
            raise ValueError(
                f"aperture diameter must be > 0, got {self.aperture_diameter_mm}"
            )

    @classmethod
    def from_dict(cls, data: dict) -> "ObjectDescriptor":
        try:
            shape = ShapeClass(data["shape_class"])
        except KeyError:
            raise ValueError("object descriptor missing 'shape_class'") from None
        except ValueError:
            raise ValueError(
                f"unknown shape_class {data.get('shape_class')!r}; expected one of "
                f"{[s.value for s in ShapeClass]}"
            ) from None
        known = {
            "shape_class",
            "characteristic_diameter_mm",
            "mass_kg",
            "has_aperture",
            "aperture_diameter_mm",
            "has_flat_sealable_surface",
            "orientation_note",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown object descriptor keys: {sorted(unknown)}")
        if "characteristic_diameter_mm" not in data:
            raise ValueError("object descriptor missing 'characteristic_diameter_mm'")
        return cls(
            shape_class=shape,
            characteristic_diameter_mm=float(data["characteristic_diameter_mm"]),
            mass_kg=float(data.get("mass_kg", 0.0)),
            has_aperture=bool(data.get("has_aperture", False)),
            aperture_diameter_mm=(
                float(data["aperture_diameter_mm"])
                if data.get("aperture_diameter_mm") is not None
                else None
            ),
            has_flat_sealable_surface=bool(data.get("has_flat_sealable_surface", False)),
            orientation_note=str(data.get("orientation_note", "")),
        )


# ---------------------------------------------------------------------------
# Squeeze capacity (contraction mode)


@dataclass(frozen=True)
class CapacityEntry:
    """Empirical capacity parameters for one shape class."""

    slope_N_per_kPa: float
    plateau_N: float
    threshold_kPa: float = 30.0  # vacuum level beyond which walls buckle
    prestretch_N: float = 0.0  # baseline when the object pre-stretches the gripper

    def __post_init__(self) -> None:
        if self.slope_N_per_kPa < 0 or self.plateau_N < 0:
            raise ValueError("capacity slope and plateau must be >= 0")
        if self.threshold_kPa <= 0:
            raise ValueError("plateau threshold must be > 0 kPa")


@dataclass(frozen=True)
class CapacityCalibration:
    """Per-shape-class capacity table; 'default' applies to unlisted shapes."""

    entries: dict = field(default_factory=dict)

    def lookup(self, shape: ShapeClass) -> CapacityEntry:
        key = shape.value if isinstance(shape, ShapeClass) else str(shape)
        if key in self.entries:
            return self.entries[key]
        if "default" in self.entries:
            return self.entries["default"]
        raise CalibrationError(f"uncalibrated shape class {key!r}")

    @classmethod
    def defaults(cls) -> "CapacityCalibration":
        return cls(
            entries={
                "cylinder": CapacityEntry(1.0, 20.0, 30.0, 20.0),
                "sphere": CapacityEntry(0.75, 15.0, 30.0, 15.0),
                "default": CapacityEntry(0.5, 10.0, 30.0, 10.0),
            }
        )


def contraction_capacity(
    obj: ObjectDescriptor,
    p_vac: float,
    calib: CapacityCalibration,
    rest_aperture_mm: float | None = None,
    threshold_override_kPa: float | None = None,
) -> float:
    """Predicted lifting capacity (N) at vacuum pressure p_vac (kPa, <= 0).

    F = min(F_pre + slope*min(|p_vac|, threshold), plateau): non-decreasing
    in |p_vac| and exactly constant once the walls buckle.  F_pre is the
    pre-stretch baseline, applied only when the object is wider than the
    rest interior diameter (contact without any vacuum).
    """
    if p_vac > 0:
        raise ValueError(f"vacuum pressure must be <= 0 kPa, got {p_vac}")
    entry = calib.lookup(obj.shape_class)
    threshold = threshold_override_kPa if threshold_override_kPa is not None else entry.threshold_kPa
    if threshold <= 0:
        raise ValueError(f"plateau threshold must be > 0 kPa, got {threshold}")
    prestretched = (
        rest_aperture_mm is not None
        and obj.characteristic_diameter_mm > 2.0 * rest_aperture_mm
    )
    base = entry.prestretch_N if prestretched else 0.0
    cap = max(entry.plateau_N, base)
    return min(base + entry.slope_N_per_kPa * min(abs(p_vac), threshold), cap)


# ---------------------------------------------------------------------------
# Expansion-driven suction


@dataclass(frozen=True)
class SuctionModel:
    """Isothermal gas closure of the sealed interior space."""

    ambient_pressure_kPa: float
    effective_seal_area_mm2: float
    rest_volume_mm3: float
    volume_vs_chamber_pressure: Callable[[float], float]

    def __post_init__(self) -> None:
        if self.ambient_pressure_kPa <= 0:
            raise ValueError("ambient pressure must be positive")
        if self.effective_seal_area_mm2 <= 0:
            raise ValueError("effective seal area must be positive")
        if self.rest_volume_mm3 <= 0:
            raise ValueError("rest volume must be positive")

    @classmethod
    def from_assembly(
        cls,
        assembly: GripperAssembly,
        effective_seal_area_mm2: float,
        h_eff_mm: float,
        ambient_pressure_kPa: float = 101.325,
    ) -> "SuctionModel":
        """Build the enclosed-volume map V(P_C) = pi*R_g(P_C)^2*h_eff."""
        if h_eff_mm <= 0:
            raise ValueError(f"effective height must be positive, got {h_eff_mm}")

        def volume(p_chamber: float) -> float:
            rg = aperture_vs_pressure(assembly, p_chamber)
            return math.pi * rg * rg * h_eff_mm

        return cls(
            ambient_pressure_kPa=ambient_pressure_kPa,
            effective_seal_area_mm2=effective_seal_area_mm2,
            rest_volume_mm3=volume(0.0),
            volume_vs_chamber_pressure=volume,
        )


def suction_force(
    model: SuctionModel,
    p_chamber: float,
    lift_volume_increase_mm3: float = 0.0,
    seal_threshold_kPa: float = 0.0,
) -> float:
    """Suction lifting force (N) with the seal formed.

    The sealed interior obeys P_I*V = P_atm*V0 with
    V = V(p_chamber) + lift_volume_increase.  Force is
    (P_atm - P_I)*A_eff, floored at zero; kPa*mm^2 = mN.
    """
    if p_chamber < seal_threshold_kPa:
        raise ValueError(
            f"chamber pressure {p_chamber} kPa below seal threshold "
            f"{seal_threshold_kPa} kPa; no seal is formed"
        )
    if lift_volume_increase_mm3 < 0:
        raise ValueError("lift volume increase must be >= 0")
    volume = model.volume_vs_chamber_pressure(p_chamber) + lift_volume_increase_mm3
    if volume <= 0:
        raise ValueError(f"non-positive enclosed volume {volume} mm^3")
    p_interior = model.ambient_pressure_kPa * model.rest_volume_mm3 / volume
    force_mN = (model.ambient_pressure_kPa - p_interior) * model.effective_seal_area_mm2
    return max(0.0, force_mN) / 1000.0


# ---------------------------------------------------------------------------
# Mode selection and planning


@dataclass(frozen=True)
class ModeSelection:
    mode: GraspMode | None
    feasible: bool
    reason: str


@dataclass(frozen=True)
class GraspPlan:
    mode: GraspMode | None
    schedule: list  # ordered (phase label, target pressure kPa)
    predicted_capacity_N: float
    feasible: bool
    rationale: str

    def __post_init__(self) -> None:
        for label, p in self.schedule:
            if abs(p) > PRESSURE_LIMIT_KPA:
                raise ValueError(
                    f"schedule phase {label!r} target {p} kPa exceeds "
                    f"+/-{PRESSURE_LIMIT_KPA} kPa"
                )
        if self.predicted_capacity_N < 0:
            raise ValueError("predicted capacity must be >= 0")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value if self.mode else None,
            "schedule": [
                {"phase": label, "pressure_kPa": p} for label, p in self.schedule
            ],
            "predicted_capacity_N": self.predicted_capacity_N,
            "feasible": self.feasible,
            "rationale": self.rationale,
        }


def select_mode(
    obj: ObjectDescriptor,
    assembly: GripperAssembly,
    ws: Workspace,
    stretch_margin_mm: float = 8.65,
) -> ModeSelection:
    """Pick a grasp mode for an object; infeasibility is a value, not an error.

    Priority: expansion into a suitable opening, then suction on flat
    surfaces, then contraction around objects inside the workspace.
    """
    if obj.has_aperture and obj.aperture_diameter_mm is not None:
        lo = 2.0 * ws.min_aperture_mm
        hi = 2.0 * ws.max_aperture_mm
        if lo <= obj.aperture_diameter_mm <= hi:
            return ModeSelection(
                GraspMode.EXPANSION,
                True,
                f"object opening {obj.aperture_diameter_mm} mm within the "
                f"expandable range [{lo:.1f}, {hi:.1f}] mm",
            )
    if obj.shape_class is ShapeClass.FLAT_PLATE or obj.has_flat_sealable_surface:
        return ModeSelection(
            GraspMode.SUCTION, True, "flat sealable surface; expansion-driven suction"
        )
    d_lo, d_hi = contraction_diameter_range(ws, stretch_margin_mm)
    if d_lo <= obj.characteristic_diameter_mm <= d_hi:
        return ModeSelection(
            GraspMode.CONTRACTION,
            True,
            f"diameter {obj.characteristic_diameter_mm} mm within the "
            f"contraction workspace [{d_lo:.1f}, {d_hi:.1f}] mm",
        )
    if obj.characteristic_diameter_mm > d_hi:
        reason = (
            f"exceeds workspace: diameter {obj.characteristic_diameter_mm} mm above "
            f"the contraction limit {d_hi:.1f} mm and no usable opening or flat surface"
        )
    else:
        reason = (
            f"below workspace: diameter {obj.characteristic_diameter_mm} mm under "
            f"the folded aperture limit {d_lo:.1f} mm"
        )
    return ModeSelection(None, False, reason)


def pressure_schedule(
    mode: GraspMode,
    open_kPa: float = 40.0,
    envelop_kPa: float = -40.0,
    insert_kPa: float = -40.0,
    expand_kPa: float = 40.0,
    suction_kPa: float = 20.0,
) -> list:
    """Ordered (phase, target pressure kPa) pairs for a grasp mode."""
    if mode is GraspMode.CONTRACTION:
        schedule = [("open", open_kPa), ("envelop", envelop_kPa)]
    elif mode is GraspMode.EXPANSION:
        schedule = [("insert", insert_kPa), ("expand", expand_kPa)]
    elif mode is GraspMode.SUCTION:
        schedule = [("seal+inflate", suction_kPa)]
    else:
        raise ValueError(f"unknown grasp mode {mode!r}")
    for label, p in schedule:
        if abs(p) > PRESSURE_LIMIT_KPA:
            raise ValueError(
                f"configured {label!r} pressure {p} kPa exceeds "
                f"+/-{PRESSURE_LIMIT_KPA} kPa"
            )
    return schedule


def plan_grasp(
    obj: ObjectDescriptor,
    assembly: GripperAssembly,
    ws: Workspace,
    calib: CapacityCalibration,
    suction_model: SuctionModel | None = None,
    stretch_margin_mm: float = 8.65,
    lift_volume_increase_mm3: float = 5000.0,
    **schedule_pressures,
) -> GraspPlan:
    """Full plan for one object: mode, schedule, capacity, feasibility."""
    sel = select_mode(obj, assembly, ws, stretch_margin_mm)
    if not sel.feasible:
        return GraspPlan(None, [], 0.0, False, sel.reason)
    schedule = pressure_schedule(sel.mode, **schedule_pressures)
    if sel.mode is GraspMode.CONTRACTION:
        capacity = contraction_capacity(
            obj, schedule[-1][1], calib, rest_aperture_mm=ws.rest_aperture_mm
        )
    elif sel.mode is GraspMode.EXPANSION:
        # No analytical model for expansion forces; quote the calibrated plateau.
        capacity = calib.lookup(obj.shape_class).plateau_N
    else:
        if suction_model is None:
            raise ValueError("suction mode selected but no suction model supplied")
        capacity = suction_force(
            suction_model, schedule[-1][1], lift_volume_increase_mm3
        )
    return GraspPlan(sel.mode, schedule, capacity, True, sel.reason)
