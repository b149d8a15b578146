"""Lorentz force, Killing magnetic fields and magnetic trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curve import Curve
from .darboux import CurvatureProfile, constant_profile, frame_at, geodesic_curvature, tanh_profile
from .errors import DomainError, SingularityError
from .metric import EllipticMetric, cross_e, inner, norm, normalize, skew_generator
from .numerics import IvpProblem, SampledPath, grid_derivative, integrate_ivp

PRECONDITION_TOL = 1e-10


def lorentz_force(V, X, m: EllipticMetric) -> np.ndarray:
    """``phi(X) = V x_E X``."""
    return cross_e(V, X, m)


def frame_components(vectors, frame, m: EllipticMetric) -> np.ndarray:
    """Components of stacked vectors on ``{t, gamma, y}`` (last axis ordered t, gamma, y)."""
    return np.stack([inner(vectors, frame.t, m), inner(vectors, frame.gamma, m), inner(vectors, frame.y, m)], axis=-1)


def lorentz_matrix(V, frame, m: EllipticMetric) -> np.ndarray:
    """Rows are the frame components of ``phi(t)``, ``phi(gamma)``, ``phi(y)``."""
    rows = [frame_components(lorentz_force(V, e, m), frame, m) for e in (frame.t, frame.gamma, frame.y)]
    return np.stack(rows, axis=-2)


def expected_lorentz_matrix(kg, delta) -> np.ndarray:
    kg = np.asarray(kg, dtype=float)
    delta = np.broadcast_to(np.asarray(delta, dtype=float), kg.shape)
    z = np.zeros_like(kg)
    one = np.ones_like(kg)
    return np.stack(
        [
            np.stack([z, -one, kg], axis=-1),
            np.stack([one, z, delta], axis=-1),
            np.stack([-kg, -delta, z], axis=-1),
        ],
        axis=-2,
    )


@dataclass(frozen=True)
class KillingField:
    """Magnetic field driving a trajectory.

    ``kind="axis"``: ``V(p) = strength * T_u p``, the generator of the
    elliptical rotations about ``axis``.

    ``kind="frame"``: ``V = delta t - k_g(s) gamma - y`` written in the
    trajectory's own Darboux frame, with ``k_g`` given by ``profile``.
    """

    kind: str
    metric: EllipticMetric
    axis: Optional[np.ndarray] = None
    strength: float = 1.0
    delta: float = 0.0
    profile: Optional[CurvatureProfile] = None

    def __post_init__(self):
        if self.kind == "axis":
            object.__setattr__(self, "axis", np.asarray(self.axis, dtype=float))
            object.__setattr__(self, "_T", skew_generator(self.axis, self.metric))
        elif self.kind == "frame":
            if self.profile is None:
                object.__setattr__(self, "profile", constant_profile(0.0))
        else:
            raise DomainError(f"unknown field kind {self.kind!r}")

    @classmethod
    def axis_generated(cls, axis, strength: float, m: EllipticMetric) -> "KillingField":
        return cls("axis", m, axis=axis, strength=float(strength))

    @classmethod
    def frame_expressed(cls, delta: float, m: EllipticMetric, profile: Optional[CurvatureProfile] = None) -> "KillingField":
        return cls("frame", m, delta=float(delta), profile=profile)

    def at(self, p, v=None, s: float = 0.0) -> np.ndarray:
        """Field value at position ``p`` (and unit velocity ``v`` for the frame kind)."""
        if self.kind == "axis":
            return self.strength * (np.asarray(p) @ self._T.T)
        gamma = normalize(p, self.metric)
        t = normalize(v, self.metric)
        kg = np.asarray(self.profile(s), dtype=float)
        kg = np.expand_dims(kg, -1) if kg.ndim else kg
        return self.delta * t - kg * gamma - cross_e(t, gamma, self.metric)


@dataclass(frozen=True)
class HelixField:
    """``V = omega t + cos(theta) gamma + sin(theta) y`` along a curve."""

    omega: float
    theta: Callable[[np.ndarray], np.ndarray]

    def along(self, frame, s) -> np.ndarray:
        th = np.asarray(self.theta(s), dtype=float)
        if np.any(np.abs(np.sin(th)) < 1e-6):
            raise SingularityError("sin(theta) vanishes on the domain")
        th = th[..., None]
        return self.omega * frame.t + np.cos(th) * frame.gamma + np.sin(th) * frame.y


def field_along_curve(c: Curve, delta: float, s=None, samples: int = 200):
    """``V(s) = delta t - k_g gamma - y`` sampled along ``c``.

    Returns ``(s, V)``.
    """
    if s is None:
        s = c.grid(samples)
    s = np.asarray(s, dtype=float)
    frame = frame_at(c, s)
    kg = geodesic_curvature(c, s)[:, None]
    return s, delta * frame.t - kg * frame.gamma - frame.y


def _check_initial(p0, t0, m):
    for name, val in (("B(p0,p0)", float(inner(p0, p0, m)) - 1), ("B(t0,t0)", float(inner(t0, t0, m)) - 1),
                      ("B(p0,t0)", float(inner(p0, t0, m)))):
        if abs(val) > PRECONDITION_TOL:
            raise DomainError(f"initial data must be B-orthonormal on the unit sphere: {name} off by {val:.3e}")


def integrate_magnetic_trajectory(
    V: KillingField,
    p0,
    t0,
    length: float,
    samples: Optional[int] = None,
    tolerance: Optional[float] = None,
    project_every: int = 50,
    label: str = "",
) -> Curve:
    """Trajectory of a unit charge on the unit B-sphere.

    Integrates ``gamma'' = P(V x_E gamma') - B(gamma', gamma') gamma`` where
    ``P`` removes the component along ``gamma``. Position and speed are
    projected back onto the constraint set every ``project_every`` steps.
    """
    m = V.metric
    p0 = np.asarray(p0, dtype=float)
    t0 = np.asarray(t0, dtype=float)
    _check_initial(p0, t0, m)
    if length <= 0:
        raise DomainError("length must be positive")
    if samples is None:
        samples = max(201, int(math.ceil(length / 0.01)) + 1)
    s_out = np.linspace(0.0, length, samples)

    def rhs(s, state):
        g, v = state[:3], state[3:]
        field = V.at(g, v, s)
        force = cross_e(field, v, m)
        force = force - inner(force, g, m) * g
        return np.concatenate([v, force - inner(v, v, m) * g])

    def on_step(s, state, n):
        if n % project_every:
            return None
        g = normalize(state[:3], m)
        v = state[3:] - inner(state[3:], g, m) * g
        return np.concatenate([g, normalize(v, m)])

    problem = IvpProblem(rhs, 0.0, length, np.concatenate([p0, t0]), tolerance=tolerance)
    path = integrate_ivp(problem, sample_points=s_out, on_step=on_step)
    return Curve.from_samples(
        m,
        path.params,
        path.states[:, :3],
        unit_speed=True,
        label=label or f"magnetic trajectory ({V.kind})",
        info={"field": V.kind},
        extras={"t": path.states[:, 3:]},
    )


def quasislope(V: KillingField, c: Curve, s) -> np.ndarray:
    """``B(V, t)`` along a trajectory."""
    s = np.asarray(s, dtype=float)
    frame = frame_at(c, s)
    return inner(V.at(c(s), frame.t, s), frame.t, V.metric)


def curvature_ode_residual(k_g_samples: SampledPath, delta: float) -> float:
    """Max of ``|k'' + delta k k'|`` over uniformly spaced samples."""
    h = k_g_samples.spacing
    k = np.asarray(k_g_samples.states, dtype=float).reshape(len(k_g_samples))
    d1 = grid_derivative(k, h, 1)
    d2 = grid_derivative(k, h, 2)
    return float(np.max(np.abs(d2 + delta * k[3:-3] * d1)))


def sample_profile(profile, a: float, b: float, n: int = 2001) -> SampledPath:
    s = np.linspace(a, b, n)
    return SampledPath(s, np.asarray(profile(s), dtype=float))


def curvature_solution(branch: str, **params) -> CurvatureProfile:
    """Solutions of ``k'' + delta k k' = 0``.

    ``curvature_solution("constant", c=...)`` or
    ``curvature_solution("tanh", delta=..., c1=..., c2=0.0)``.
    """
    if branch == "constant":
        return constant_profile(float(params["c"]))
    if branch == "tanh":
        return tanh_profile(float(params["delta"]), float(params["c1"]), float(params.get("c2", 0.0)))
    raise DomainError(f"unknown branch {branch!r}")


def helix_theta_residual(theta_samples: SampledPath, omega: float) -> float:
    """Max of ``|theta'' sin^2(theta) - omega theta' cos(theta)|``."""
    th = np.asarray(theta_samples.states, dtype=float).reshape(len(theta_samples))
    if np.any(np.abs(np.sin(th)) < 1e-6):
        raise SingularityError("sin(theta) vanishes at a sample")
    h = theta_samples.spacing
    d1 = grid_derivative(th, h, 1)
    d2 = grid_derivative(th, h, 2)
    core = th[3:-3]
    return float(np.max(np.abs(d2 * np.sin(core) ** 2 - omega * d1 * np.cos(core))))
