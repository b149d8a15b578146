"""Verification reports and the per-curve check suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import Curve
from .darboux import (
    frame_at,
    frame_defects,
    frame_ode_residual,
    geodesic_curvature,
    regular_samples,
    round_geodesic_curvature,
)
from .families import (
    CycloidParams,
    HelixParams,
    SatelliteParams,
    cycloid_composed,
    helix_composed,
    satellite_composed,
)
from .metric import EllipticMetric, norm
from .numerics import SampledPath

# default tolerances of the per-curve suite
SPHERE_TOL = 1e-9
FRAME_ODE_TOL = 1e-4
FRAME_DEFECT_TOL = 1e-8
ORACLE_TOL = 1e-5
COMPOSITION_TOL = 1e-10
PROFILE_TOL = 1e-4


@dataclass
class Check:
    """One measured quantity against its tolerance.

    ``mode="max"`` passes when ``value <= tolerance``; ``mode="min"`` when
    ``value >= tolerance`` (negative controls).
    """

    name: str
    value: float
    tolerance: float
    mode: str = "max"
    detail: str = ""

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.tolerance if self.mode == "max" else self.value >= self.tolerance

    def line(self) -> str:
        op = "<=" if self.mode == "max" else ">="
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: {self.value:.3e} {op} {self.tolerance:.1e}{extra}"

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "mode": self.mode, "passed": self.passed, "detail": self.detail}


@dataclass
class VerificationReport:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name: str, value: float, tolerance: float, mode: str = "max", detail: str = "") -> Check:
        c = Check(name, float(value), float(tolerance), mode, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.value, c.tolerance, c.mode, c.detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        return {"title": self.title, "passed": self.passed, "n_checks": len(self.checks),
                "n_failed": sum(not c.passed for c in self.checks)}

    def to_dict(self) -> dict:
        return {**self.summary(), "checks": [c.to_dict() for c in self.checks]}

    def format(self) -> str:
        head = f"{self.title}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])


def _max_abs(x) -> float:
    return float(np.max(np.abs(x)))


def verify_curve(c: Curve, samples: int = 100, frame_samples: int = 200, tol: dict | None = None) -> VerificationReport:
    """Run every invariant that applies to ``c``.

    Generic checks: on-sphere at 1000 samples, frame equations, frame
    orthonormality and the round-sphere curvature oracle, all evaluated away
    from cusps. Family-specific identities are added from ``c.info``.
    """
    t = {"sphere": SPHERE_TOL, "frame_ode": FRAME_ODE_TOL, "frame": FRAME_DEFECT_TOL,
         "oracle": ORACLE_TOL, "composition": COMPOSITION_TOL, "profile": PROFILE_TOL}
    t.update(tol or {})
    m = c.metric
    rep = VerificationReport(c.label or "curve")

    if math.isfinite(c.radius):
        rep.add("on_sphere", c.sphere_residual(1000), t["sphere"] * max(1.0, c.radius**2))

    margin = 0.01 * (c.domain[1] - c.domain[0]) if c.is_sampled else 0.0
    s_frame = regular_samples(c, frame_samples, margin=margin)
    rep.add("frame_ode", max(frame_ode_residual(c, s=s_frame)), t["frame_ode"])
    d = frame_defects(frame_at(c, s_frame), m)
    rep.add("frame_orthonormality", max(d.values()), t["frame"])

    s = regular_samples(c, samples, margin=margin)
    kg = geodesic_curvature(c, s)
    rep.add("oracle_kg", _max_abs(kg - round_geodesic_curvature(c, s)), t["oracle"])

    for check in family_checks(c, s, kg, t):
        rep.checks.append(check)
    return rep


def family_checks(c: Curve, s, kg, t: dict) -> list:
    """Identities specific to the family recorded in ``c.info``."""
    m = c.metric
    fam = c.info.get("family")
    params = c.info.get("params", {})
    out = []
    grid = c.grid(1000)
    if fam == "helix":
        p = HelixParams(params["k"], m, params.get("R", 1.0))
        out.append(Check("composed_vs_closed", _max_abs(helix_composed(grid, p) - c(grid)), t["composition"]))
        # raw-parameter curvature is -cot(k t), with the sign flipping at each
        # cusp where the direction of travel reverses
        expected = -np.cos(p.k * s) / np.abs(np.sin(p.k * s))
        out.append(Check("kg_cot_profile", _max_abs((kg - expected) / (1 + np.abs(expected))), t["oracle"],
                         detail="relative, raw parameter"))
    elif fam == "satellite":
        p = SatelliteParams(params["alpha"], params["k"], m, params.get("R", 1.0))
        out.append(Check("composed_vs_closed", _max_abs(satellite_composed(grid, p) - c(grid)), t["composition"]))
    elif fam == "cycloid":
        p = CycloidParams(params["a"], params["b"], params["omega"], m)
        out.append(Check("composed_vs_closed", _max_abs(cycloid_composed(grid, p) - c(grid)), t["composition"]))
        if c.info.get("spherical"):
            out.append(Check("spherical_radius", _max_abs(norm(c(grid), m) - p.a), t["sphere"]))
    elif fam == "circle":
        out.append(Check("constant_kg_spread", float(np.ptp(kg)), t["oracle"]))
    elif fam == "linear_kg":
        out.append(Check("kg_equals_s", _max_abs(kg - s), t["profile"]))
        from .magnetic import curvature_ode_residual

        # coarse spacing: second differences amplify integration noise by 1/h^2
        ss = np.linspace(c.domain[0] + 0.1, c.domain[1] - 0.1, 21)
        out.append(Check("curvature_ode_delta0", curvature_ode_residual(SampledPath(ss, geodesic_curvature(c, ss)), 0.0),
                         1e-5))
    return out


def verify_samples(points, m: EllipticMetric, radius: float = 1.0, t=None, y=None, tol: float = SPHERE_TOL) -> VerificationReport:
    """Checks for a curve known only by samples (e.g. read from CSV)."""
    from .darboux import DarbouxFrame
    from .metric import inner, normalize

    points = np.asarray(points, dtype=float)
    rep = VerificationReport("sampled curve")
    res = np.abs(inner(points, points, m) - radius**2)
    rep.add("on_sphere", float(np.max(res)) if res.size else float("nan"), tol * max(1.0, radius**2))
    if t is not None:
        ok = np.all(np.isfinite(t), axis=1) & np.all(np.isfinite(y), axis=1)
        if np.any(ok):
            frame = DarbouxFrame(t[ok], normalize(points[ok], m), y[ok])
            rep.add("frame_orthonormality", max(frame_defects(frame, m).values()), FRAME_DEFECT_TOL)
    return rep
