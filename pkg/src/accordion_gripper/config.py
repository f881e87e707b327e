"""Shared JSON configuration with full embedded defaults.

The tool runs with zero arguments; a user config file only needs to list
the keys it overrides.  Angles are degrees in the file and radians
internally; lengths are mm, pressures kPa.

Note on the geometry defaults: the uninflated (R0, R1, Theta0) were
inferred as the lower corner of the published solver search box, since the
undeformed state must be reachable at zero pressure.  They are
configurable, and the ``validate`` report pins the implied rest aperture
so silent drift is caught.
"""

from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass

from .chamber import ChamberGeometry, SolverBox
from .errors import ConfigError
from .grasp import CapacityCalibration, CapacityEntry, SuctionModel
from .gripper import GripperAssembly
from .material import HyperelasticMaterial

ENV_CONFIG_VAR = "GRIPPER_CONFIG"

DEFAULT_CONFIG = {
    "geometry": {"R0_mm": 4.56, "R1_mm": 3.0, "Theta0_deg": 57.6},
    "material": {"c1_kPa": 119.0},
    "assembly": {"n_chambers": 22, "folded_aperture_mm": 5.0},
    "solver": {
        "box": {
            "r0_mm": [4.56, 5.0],
            "r1_mm": [3.0, 3.8],
            "theta0_deg": [57.6, 80.0],
        },
        "theta_tol_rad": 1e-12,
        "quad_rel_tol": 1e-9,
        "p_max_kPa": 40.0,
    },
    "suction": {
        "ambient_kPa": 101.325,
        "A_eff_mm2": 2264.0,
        "h_eff_mm": 53.0,
        "lift_volume_increase_mm3": 5000.0,
        "seal_threshold_kPa": 0.0,
    },
    "grasp": {
        "stretch_margin_mm": 8.65,
        "open_kPa": 40.0,
        "envelop_kPa": -40.0,
        "insert_kPa": -40.0,
        "expand_kPa": 40.0,
        "suction_kPa": 20.0,
    },
    "capacity": {
        "cylinder": {
            "slope_N_per_kPa": 1.0,
            "plateau_N": 20.0,
            "threshold_kPa": 30.0,
            "prestretch_N": 20.0,
        },
        "sphere": {
            "slope_N_per_kPa": 0.75,
            "plateau_N": 15.0,
            "threshold_kPa": 30.0,
            "prestretch_N": 15.0,
        },
        "default": {
            "slope_N_per_kPa": 0.5,
            "plateau_N": 10.0,
            "threshold_kPa": 30.0,
            "prestretch_N": 10.0,
        },
    },
}

_CAPACITY_KEYS = {"slope_N_per_kPa", "plateau_N", "threshold_kPa", "prestretch_N"}


def default_config() -> dict:
    return copy.deepcopy(DEFAULT_CONFIG)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base and path != "capacity":
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _require_number(cfg: dict, section: str, key: str):
    try:
        value = cfg[section][key]
    except (KeyError, TypeError):
        raise ConfigError(f"missing config key {section}.{key}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {section}.{key} must be a number, got {value!r}")
    return value


def _require_pair(value, where: str) -> tuple[float, float]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"config key {where} must be a [lo, hi] number pair, got {value!r}")
    return float(value[0]), float(value[1])


def load_config(path: str | None = None) -> dict:
    """Load defaults, optionally merged with a user JSON file.

    The path comes from the argument or the GRIPPER_CONFIG environment
    variable; when neither is set the embedded defaults are used.
    """
    path = path or os.environ.get(ENV_CONFIG_VAR)
    cfg = default_config()
    if path:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError(f"config root must be a JSON object, got {type(user).__name__}")
        cfg = _merge(cfg, user)
    return cfg


@dataclass(frozen=True)
class ModelContext:
    """Validated domain objects and knobs built from one config dict."""

    config: dict
    geometry: ChamberGeometry
    material: HyperelasticMaterial
    assembly: GripperAssembly
    box: SolverBox
    capacity: CapacityCalibration
    theta_tol_rad: float
    quad_rel_tol: float
    p_max_kPa: float

    @classmethod
    def from_config(cls, cfg: dict) -> "ModelContext":
        try:
            geometry = ChamberGeometry(
                r_outer_0=float(_require_number(cfg, "geometry", "R0_mm")),
                r_inner_0=float(_require_number(cfg, "geometry", "R1_mm")),
                half_angle_0=math.radians(_require_number(cfg, "geometry", "Theta0_deg")),
            )
            material = HyperelasticMaterial(c1=float(_require_number(cfg, "material", "c1_kPa")))
            n_chambers = _require_number(cfg, "assembly", "n_chambers")
            if int(n_chambers) != n_chambers:
                raise ConfigError(f"assembly.n_chambers must be an integer, got {n_chambers}")
            assembly = GripperAssembly(
                geometry=geometry,
                material=material,
                n_chambers=int(n_chambers),
                folded_aperture_mm=float(
                    _require_number(cfg, "assembly", "folded_aperture_mm")
                ),
            )
            box_cfg = cfg["solver"]["box"]
            theta_lo, theta_hi = _require_pair(box_cfg.get("theta0_deg"), "solver.box.theta0_deg")
            box = SolverBox(
                r_outer_range=_require_pair(box_cfg.get("r0_mm"), "solver.box.r0_mm"),
                r_inner_range=_require_pair(box_cfg.get("r1_mm"), "solver.box.r1_mm"),
                half_angle_range=(math.radians(theta_lo), math.radians(theta_hi)),
            )
            capacity = CapacityCalibration(
                entries={
                    name: CapacityEntry(
                        slope_N_per_kPa=float(entry["slope_N_per_kPa"]),
                        plateau_N=float(entry["plateau_N"]),
                        threshold_kPa=float(entry.get("threshold_kPa", 30.0)),
                        prestretch_N=float(entry.get("prestretch_N", 0.0)),
                    )
                    for name, entry in _capacity_entries(cfg).items()
                }
            )
            for key in ("ambient_kPa", "A_eff_mm2", "h_eff_mm",
                        "lift_volume_increase_mm3", "seal_threshold_kPa"):
                _require_number(cfg, "suction", key)
            for key in ("stretch_margin_mm", "open_kPa", "envelop_kPa",
                        "insert_kPa", "expand_kPa", "suction_kPa"):
                _require_number(cfg, "grasp", key)
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
        return cls(
            config=cfg,
            geometry=geometry,
            material=material,
            assembly=assembly,
            box=box,
            capacity=capacity,
            theta_tol_rad=float(_require_number(cfg, "solver", "theta_tol_rad")),
            quad_rel_tol=float(_require_number(cfg, "solver", "quad_rel_tol")),
            p_max_kPa=float(_require_number(cfg, "solver", "p_max_kPa")),
        )

    def suction_model(self) -> SuctionModel:
        suction = self.config["suction"]
        return SuctionModel.from_assembly(
            self.assembly,
            effective_seal_area_mm2=float(suction["A_eff_mm2"]),
            h_eff_mm=float(suction["h_eff_mm"]),
            ambient_pressure_kPa=float(suction["ambient_kPa"]),
        )


def _capacity_entries(cfg: dict) -> dict:
    table = cfg.get("capacity")
    if not isinstance(table, dict) or not table:
        raise ConfigError("config key 'capacity' must be a non-empty object")
    for name, entry in table.items():
        if not isinstance(entry, dict):
            raise ConfigError(f"capacity.{name} must be an object")
        unknown = set(entry) - _CAPACITY_KEYS
        if unknown:
            raise ConfigError(f"unknown keys in capacity.{name}: {sorted(unknown)}")
        for key in ("slope_N_per_kPa", "plateau_N"):
            if key not in entry:
                raise ConfigError(f"capacity.{name} missing {key!r}")
    return table


def load_context(path: str | None = None) -> ModelContext:
    return ModelContext.from_config(load_config(path))
