"""Single-chamber kinematics, the inflation-pressure functional, and the
bounded deformation solver.

The model treats half of one chamber wall as an annular sector with
undeformed inner radius R1, outer radius R0 and half central angle Theta0
(lengths in mm, angles in rad, pressures in kPa). Under inflation the
sector deforms to (r0, r1, theta0) subject to two kinematic constraints:

* pin constraint: the inner-edge endpoints stay fixed in space, so
  ``r1*sin(theta0) = R1*sin(Theta0)``;
* area constraint: the wall cross section is conserved, so
  ``(r0^2 - r1^2)*theta0 = (R0^2 - R1^2)*Theta0``.

Positive (inflation) pressure corresponds to theta0 > Theta0; the two
constraints then force r1 and r0 to *decrease* while the wall distance
D = 2*(r0 - r1*cos(theta0)) grows.

Two independent routes compute the inflation pressure of a deformed state:
an adaptive-Simpson quadrature of the radial equilibrium integral (the
ground truth used by tests and the ``validate`` report) and a closed form.
The closed form is available in two variants: ``rederived`` (the default,
agrees with the quadrature and vanishes at zero deformation) and
``as_printed`` (retained for audit; its final logarithm carries coefficient
1 instead of 2 and it does *not* vanish at zero deformation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import ConvergenceError, OutOfWorkspaceError
from .material import HyperelasticMaterial, stress_difference

_EPS = 2.220446049250313e-16

#: Default ranges the deformed unknowns were searched over in the original
#: design study: r0 in [4.56, 5] mm, r1 in [3, 3.8] mm, theta0 in
#: [57.6 deg, 80 deg].  Only the angle range constrains the scalar solver;
#: the radial ranges are retained for reporting (see SolverBox notes).
_DEFAULT_BOX = ((4.56, 5.0), (3.0, 3.8), (math.radians(57.6), math.radians(80.0)))


@dataclass(frozen=True)
class ChamberGeometry:
    """Uninflated half-chamber cross section.

    ``pin_half_distance`` (half the distance between the fixed inner-edge
    endpoints) is derived, never user-set.
    """

    r_outer_0: float = 4.56  # R0, mm
    r_inner_0: float = 3.0  # R1, mm
    half_angle_0: float = math.radians(57.6)  # Theta0, rad

    def __post_init__(self) -> None:
        if not 0.0 < self.r_inner_0 < self.r_outer_0:
            raise ValueError(
                f"require 0 < R1 < R0, got R1={self.r_inner_0}, R0={self.r_outer_0}"
            )
        if not 0.0 < self.half_angle_0 < math.pi / 2:
            raise ValueError(
                f"require 0 < Theta0 < pi/2 rad, got {self.half_angle_0}"
            )

    @property
    def pin_half_distance(self) -> float:
        """a = R1*sin(Theta0), mm."""
        return self.r_inner_0 * math.sin(self.half_angle_0)

    @property
    def sector_area_scale(self) -> float:
        """(R0^2 - R1^2)*Theta0, mm^2*rad; conserved under deformation."""
        return (self.r_outer_0**2 - self.r_inner_0**2) * self.half_angle_0

    def undeformed_state(self) -> "DeformedState":
        return DeformedState(self.r_outer_0, self.r_inner_0, self.half_angle_0)


@dataclass(frozen=True)
class DeformedState:
    """Deformed half-chamber unknowns (r0, r1, theta0)."""

    r_outer: float  # mm
    r_inner: float  # mm
    half_angle: float  # rad

    def __post_init__(self) -> None:
        if not 0.0 < self.r_inner < self.r_outer:
            raise ValueError(
                f"require 0 < r1 < r0, got r1={self.r_inner}, r0={self.r_outer}"
            )
        if not 0.0 < self.half_angle < math.pi:
            raise ValueError(f"require 0 < theta0 < pi, got {self.half_angle}")


@dataclass(frozen=True)
class SolverBox:
    """Search ranges for the deformed unknowns.

    The scalar-reduction solver brackets only on ``half_angle_range``; the
    pin and area constraints then determine r1 and r0 uniquely, so the
    radial ranges are informational (they are reported by ``validate`` but
    cannot be enforced without making the problem infeasible).
    """

    r_outer_range: tuple[float, float] = _DEFAULT_BOX[0]
    r_inner_range: tuple[float, float] = _DEFAULT_BOX[1]
    half_angle_range: tuple[float, float] = _DEFAULT_BOX[2]

    def __post_init__(self) -> None:
        for name, (lo, hi) in (
            ("r_outer_range", self.r_outer_range),
            ("r_inner_range", self.r_inner_range),
            ("half_angle_range", self.half_angle_range),
        ):
            if not lo <= hi:
                raise ValueError(f"{name} is empty: [{lo}, {hi}]")
        lo, hi = self.half_angle_range
        if not 0.0 < lo <= hi < math.pi / 2:
            raise ValueError(
                f"half_angle_range must lie in (0, pi/2), got [{lo}, {hi}]"
            )


# ---------------------------------------------------------------------------
# Kinematics


def pin_residual(geom: ChamberGeometry, state: DeformedState) -> float:
    """r1*sin(theta0) - a, mm.  Zero when the endpoints are fixed."""
    return state.r_inner * math.sin(state.half_angle) - geom.pin_half_distance


def area_residual(geom: ChamberGeometry, state: DeformedState) -> float:
    """(R0^2-R1^2)*Theta0 - (r0^2-r1^2)*theta0, mm^2*rad."""
    return geom.sector_area_scale - (
        state.r_outer**2 - state.r_inner**2
    ) * state.half_angle


def hoop_stretch(geom: ChamberGeometry, state: DeformedState, r: float) -> float:
    """Hoop stretch of the material circle currently at radius r.

    The material map sends the undeformed circle at radius R to
    r(R) with ``(R^2 - R1^2)*Theta0 = (r^2 - r1^2)*theta0``; inverting gives
    the undeformed radius ``R(r)^2 = R1^2 + (r^2 - r1^2)*theta0/Theta0`` and
    the stretch ``lam_theta = r*theta0 / (R*Theta0)``.
    """
    if not state.r_inner - 1e-12 <= r <= state.r_outer + 1e-12:
        raise ValueError(
            f"radius {r} outside deformed wall [{state.r_inner}, {state.r_outer}]"
        )
    k = state.half_angle / geom.half_angle_0
    big_r_sq = geom.r_inner_0**2 + (r * r - state.r_inner**2) * k
    return r * k / math.sqrt(big_r_sq)


def radial_stretch(geom: ChamberGeometry, state: DeformedState, r: float) -> float:
    """Radial stretch; the reciprocal of hoop_stretch (incompressibility)."""
    return 1.0 / hoop_stretch(geom, state, r)


def wall_distance(state: DeformedState) -> float:
    """Interior chamber width D = 2*(r0 - r1*cos(theta0)), mm."""
    return 2.0 * (state.r_outer - state.r_inner * math.cos(state.half_angle))


# ---------------------------------------------------------------------------
# Pressure functional


def _adapt(f, a, b, fa, fm, fb, whole, eps, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    if not a < lm < m < rm < b:
        # Interval at floating-point resolution; cannot refine further.
        return whole
    flm = f(lm)
    frm = f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    if depth <= 0:
        raise ConvergenceError(
            f"adaptive Simpson failed on [{a:.6g}, {b:.6g}]: "
            f"estimated error {abs(delta) / 15.0:.3e} exceeds budget {eps:.3e} "
            "at maximum subdivision depth"
        )
    return _adapt(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + _adapt(
        f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1
    )


def adaptive_simpson(f, a: float, b: float, rel_tol: float = 1e-9,
                     abs_tol: float = 0.0, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature with interval-halving error control.

    ``abs_tol`` is a floor on the error budget; without it an integrand
    that is pure cancellation noise (magnitude ~eps_mach times the terms
    it is built from) can never satisfy a purely relative target.
    """
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    eps = max(rel_tol * abs(whole), abs_tol)
    return _adapt(f, a, b, fa, fm, fb, whole, eps, max_depth)


def pressure_quadrature(
    geom: ChamberGeometry,
    state: DeformedState,
    mat: HyperelasticMaterial,
    rel_tol: float = 1e-9,
) -> float:
    """Inflation pressure by direct integration of radial equilibrium, kPa.

    Integrates (sigma_tt - sigma_rr)/r over the deformed wall [r1, r0].
    This is the ground-truth oracle for the closed forms.
    """

    def integrand(r: float) -> float:
        lam_t = hoop_stretch(geom, state, r)
        return stress_difference(mat, lam_t, 1.0 / lam_t) / r

    # The integrand carries absolute roundoff of order eps_mach*c1, so give
    # the error control a floor well below any physical pressure of
    # interest but above that noise.
    return adaptive_simpson(
        integrand,
        state.r_inner,
        state.r_outer,
        rel_tol,
        abs_tol=1e-12 * mat.c1,
    )


def pressure_closed_form(
    geom: ChamberGeometry,
    state: DeformedState,
    mat: HyperelasticMaterial,
    variant: str = "rederived",
) -> float:
    """Closed-form inflation pressure, kPa.

    ``rederived`` carries coefficient 2 on the final logarithm and matches
    the quadrature; ``as_printed`` carries coefficient 1 as originally
    typeset and evaluates to c1*ln(R0/R1) != 0 at zero deformation.  The
    two differ analytically by ``c1*(Theta0/theta0)*ln(r0/r1)``.
    """
    if variant not in ("rederived", "as_printed"):
        raise ValueError(f"unknown closed-form variant {variant!r}")
    c1 = mat.c1
    big_theta = geom.half_angle_0
    theta = state.half_angle
    r0, r1 = state.r_outer, state.r_inner
    log_coeff = 2.0 if variant == "rederived" else 1.0
    return (
        2.0 * c1 * (theta / big_theta) * math.log(geom.r_outer_0 / geom.r_inner_0)
        + c1
        * (big_theta / theta**2)
        * (geom.r_inner_0**2 * big_theta - r1**2 * theta)
        * (1.0 / r0**2 - 1.0 / r1**2)
        - log_coeff * c1 * (big_theta / theta) * math.log(r0 / r1)
    )


# ---------------------------------------------------------------------------
# Deformation solver (scalar reduction on theta0)


def state_at_angle(geom: ChamberGeometry, theta: float) -> DeformedState:
    """Deformed state implied by theta0 via the pin and area constraints."""
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"half angle {theta} outside (0, pi/2)")
    r1 = geom.pin_half_distance / math.sin(theta)
    r0 = math.sqrt(r1 * r1 + geom.sector_area_scale / theta)
    return DeformedState(r0, r1, theta)


def pressure_at_angle(
    geom: ChamberGeometry, mat: HyperelasticMaterial, theta: float
) -> float:
    """Rederived closed-form pressure on the constraint manifold, kPa."""
    return pressure_closed_form(geom, state_at_angle(geom, theta), mat)


def reachable_pressure_range(
    geom: ChamberGeometry, mat: HyperelasticMaterial, box: SolverBox | None = None
) -> tuple[float, float]:
    """Pressures reachable inside the box's angle range, kPa."""
    box = box or SolverBox()
    lo, hi = box.half_angle_range
    return pressure_at_angle(geom, mat, lo), pressure_at_angle(geom, mat, hi)


def solve_deformation(
    geom: ChamberGeometry,
    mat: HyperelasticMaterial,
    p: float,
    box: SolverBox | None = None,
    tol: float = 1e-12,
) -> DeformedState:
    """Solve for the deformed state at inflation pressure p (kPa).

    The pin and area constraints eliminate r1 and r0, reducing the system
    to a single monotone equation P(theta0) = p bracketed over the box's
    angle range (Brent).  The constraints hold exactly by construction;
    the pressure residual is bounded by the bracketing tolerance.
    """
    if p < 0:
        raise OutOfWorkspaceError(
            f"inflation branch only: pressure must be >= 0 kPa, got {p}",
            reachable=(0.0, None),
        )
    box = box or SolverBox()
    lo, hi = box.half_angle_range

    def f(theta: float) -> float:
        return pressure_at_angle(geom, mat, theta) - p

    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return state_at_angle(geom, lo)
    if fhi == 0.0:
        return state_at_angle(geom, hi)
    if flo > 0.0 or fhi < 0.0:
        p_lo, p_hi = flo + p, fhi + p
        raise OutOfWorkspaceError(
            f"pressure {p} kPa outside the range [{p_lo:.6g}, {p_hi:.6g}] kPa "
            "reachable inside the solver box",
            reachable=(p_lo, p_hi),
        )
    theta = brentq(f, lo, hi, xtol=tol, rtol=4 * _EPS)
    return state_at_angle(geom, theta)
