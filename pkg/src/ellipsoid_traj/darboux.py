"""Darboux frames on the ellipsoid, geodesic curvature and frame synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curve import CURVE_FD_ACCURACY, CURVE_FD_STEP, Curve
from .errors import DomainError, InvariantError, RegularityError, SingularityError
from .metric import EllipticMetric, RotationSpec, cross_e, elliptical_rotation, inner, norm, normalize, to_round
from .numerics import IvpProblem, fd_derivative, integrate_ivp

#: asymptotic (normal) curvature of any curve on the unit ellipsoid
NORMAL_CURVATURE = -1.0
#: geodesic torsion; identically zero on a B-sphere
GEODESIC_TORSION = 0.0

MIN_SPEED = 1e-8
FRAME_TOL = 1e-8


@dataclass(frozen=True)
class DarbouxFrame:
    """Right-handed B-orthonormal triple ``{t, gamma, y}``, so ``y = t x_E gamma``.

    Fields may be single vectors or stacks of shape ``(n, 3)``.
    """

    t: np.ndarray
    gamma: np.ndarray
    y: np.ndarray
    s: object = 0.0

    @classmethod
    def from_point_tangent(cls, p, v, m: EllipticMetric, s: float = 0.0) -> "DarbouxFrame":
        gamma = normalize(p, m)
        t = np.asarray(v, dtype=float)
        t = t - np.expand_dims(inner(t, gamma, m), -1) * gamma
        t = normalize(t, m)
        return cls(t, gamma, cross_e(t, gamma, m), s)

    def as_array(self) -> np.ndarray:
        """Stack as ``(..., 9)`` in the order t, gamma, y."""
        return np.concatenate([self.t, self.gamma, self.y], axis=-1)

    def to_round(self, m: EllipticMetric) -> "DarbouxFrame":
        return DarbouxFrame(to_round(self.t, m), to_round(self.gamma, m), to_round(self.y, m), self.s)


def frame_defects(frame: DarbouxFrame, m: EllipticMetric) -> dict:
    """Largest violations of orthonormality and the cross-product relations."""
    t, g, y = frame.t, frame.gamma, frame.y
    ortho = max(
        np.max(np.abs(inner(t, t, m) - 1)),
        np.max(np.abs(inner(g, g, m) - 1)),
        np.max(np.abs(inner(y, y, m) - 1)),
        np.max(np.abs(inner(t, g, m))),
        np.max(np.abs(inner(t, y, m))),
        np.max(np.abs(inner(g, y, m))),
    )
    handed = max(
        np.max(norm(cross_e(y, t, m) - g, m)),
        np.max(norm(cross_e(g, y, m) - t, m)),
        np.max(norm(cross_e(g, t, m) + y, m)),
    )
    return {"orthonormality": float(ortho), "handedness": float(handed)}


def check_frame(frame: DarbouxFrame, m: EllipticMetric, tol: float = FRAME_TOL) -> None:
    d = frame_defects(frame, m)
    if max(d.values()) > tol:
        raise InvariantError(f"frame invariants violated: {d}")


def equator_frame(m: EllipticMetric, s: float = 0.0) -> DarbouxFrame:
    """Frame at ``(1/sqrt(a1), 0, 0)`` heading along the equator."""
    gamma = np.array([1.0 / math.sqrt(m.a1), 0.0, 0.0])
    t = np.array([0.0, 1.0 / math.sqrt(m.a2), 0.0])
    return DarbouxFrame(t, gamma, cross_e(t, gamma, m), s)


def frame_at(c: Curve, s) -> DarbouxFrame:
    """Darboux frame of ``c`` at parameter(s) ``s``.

    The tangent is the B-normalized velocity, so any regular parameter works;
    the frame depends only on the point and the direction of travel.
    """
    v = c.velocity(s)
    speed = norm(v, c.metric)
    if np.any(speed < MIN_SPEED):
        raise RegularityError(f"curve speed below {MIN_SPEED:g}; no frame at a cusp")
    t = v / np.expand_dims(speed, -1)
    gamma = normalize(c(s), c.metric)
    return DarbouxFrame(t, gamma, cross_e(t, gamma, c.metric), s)


def geodesic_curvature(c: Curve, s):
    """Arclength geodesic curvature ``B(gamma'', y)``.

    Uses ``B(gamma'', gamma' x_E gamma_hat) / |gamma'|^3``, which equals the
    arclength value whatever the parameterization.
    """
    v = c.velocity(s)
    speed = norm(v, c.metric)
    if np.any(speed < MIN_SPEED):
        raise RegularityError(f"curve speed below {MIN_SPEED:g}; curvature undefined")
    a = c.acceleration(s)
    gamma = normalize(c(s), c.metric)
    return inner(a, cross_e(v, gamma, c.metric), c.metric) / speed**3


def frame_ode_residual(c: Curve, samples: int = 200, s=None, h: float = 1e-3, margin: Optional[float] = None):
    """Max B-norm residuals of the three frame equations.

    Returns ``(r_t, r_gamma, r_y)`` for ``t' = -gamma/r + k_g y``,
    ``gamma' = t / r`` (``gamma`` the unit normal) and ``y' = -k_g t``, with
    ``'`` the arclength derivative. Frame derivatives are taken by finite
    differences in the curve parameter and divided by the speed.
    """
    m = c.metric
    if s is None:
        if margin is None:
            margin = 0.01 * (c.domain[1] - c.domain[0])
        s = c.grid(samples, margin)
    s = np.asarray(s, dtype=float)
    frame = frame_at(c, s)
    speed = c.speed(s)[:, None]
    kg = geodesic_curvature(c, s)[:, None]
    r = c.radius

    def part(name):
        return lambda u: getattr(frame_at(c, u), name)

    dt = fd_derivative(part("t"), s, 1, h=h, accuracy=4) / speed
    dg = fd_derivative(part("gamma"), s, 1, h=h, accuracy=4) / speed
    dy = fd_derivative(part("y"), s, 1, h=h, accuracy=4) / speed
    r_t = norm(dt - (-frame.gamma / r + kg * frame.y), m)
    r_g = norm(dg - frame.t / r, m)
    r_y = norm(dy + kg * frame.t, m)
    return float(np.max(r_t)), float(np.max(r_g)), float(np.max(r_y))


@dataclass(frozen=True)
class CurvatureProfile:
    """Prescribed geodesic curvature ``k_g(s)``.

    ``poles(a, b)`` lists parameters in ``[a, b]`` where ``k_g`` blows up.
    """

    k_g: Callable[[np.ndarray], np.ndarray]
    description: str = ""
    poles: Optional[Callable[[float, float], list]] = None

    def __call__(self, s):
        return self.k_g(s)

    def singularities(self, a: float, b: float) -> list:
        lo, hi = min(a, b), max(a, b)
        found = list(self.poles(lo, hi)) if self.poles is not None else []
        grid = np.linspace(lo, hi, 2001)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.k_g(grid), dtype=float)
        found += [float(x) for x in grid[~np.isfinite(vals)]]
        return sorted(set(found))


def constant_profile(c: float) -> CurvatureProfile:
    return CurvatureProfile(lambda s: np.full_like(np.asarray(s, dtype=float), c), f"constant {c:g}")


def tanh_profile(delta: float, c1: float, c2: float = 0.0) -> CurvatureProfile:
    """``sqrt(2 c1 / delta) tanh(sqrt(delta c1 / 2) (s + c2))``; needs delta, c1 > 0."""
    if not (delta > 0 and c1 > 0):
        raise DomainError(f"tanh branch needs delta > 0 and c1 > 0, got delta={delta}, c1={c1}")
    amp = math.sqrt(2 * c1 / delta)
    rate = math.sqrt(delta * c1 / 2)
    return CurvatureProfile(
        lambda s: amp * np.tanh(rate * (np.asarray(s, dtype=float) + c2)),
        f"tanh delta={delta:g} c1={c1:g} c2={c2:g}",
    )


def cot_profile(k: float) -> CurvatureProfile:
    """``cot(k s)``, with poles at ``n pi / k``."""
    if k == 0:
        raise DomainError("cot profile needs k != 0")

    def poles(a, b):
        step = math.pi / abs(k)
        n0 = math.ceil(a / step)
        n1 = math.floor(b / step)
        return [n * step for n in range(n0, n1 + 1)]

    def kg(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.cos(k * s) / np.sin(k * s)

    return CurvatureProfile(kg, f"cot {k:g} s", poles)


def linear_profile(slope: float = 1.0, offset: float = 0.0) -> CurvatureProfile:
    return CurvatureProfile(lambda s: offset + slope * np.asarray(s, dtype=float), f"linear {slope:g} s + {offset:g}")


def _reorthonormalize(state: np.ndarray, m: EllipticMetric) -> np.ndarray:
    t, g = state[0:3], state[3:6]
    g = normalize(g, m)
    t = normalize(t - inner(t, g, m) * g, m)
    return np.concatenate([t, g, cross_e(t, g, m)])


def frame_integrate(
    profile: CurvatureProfile,
    initial: DarbouxFrame,
    length: float,
    m: EllipticMetric,
    samples: Optional[int] = None,
    tolerance: Optional[float] = None,
    reorthonormalize_every: int = 50,
    label: str = "",
) -> Curve:
    """Curve with prescribed geodesic curvature, by integrating the frame ODE.

    Integrates ``t' = -gamma + k_g y, gamma' = t, y' = -k_g t`` from
    ``initial.s`` over ``length`` and B-orthonormalizes the frame every
    ``reorthonormalize_every`` accepted steps. Refuses domains that contain
    a pole of the profile.
    """
    if length <= 0:
        raise DomainError("length must be positive")
    check_frame(initial, m)
    s0 = float(initial.s)
    s1 = s0 + length
    poles = profile.singularities(s0, s1)
    if poles:
        raise SingularityError(f"curvature profile is singular at s = {poles[0]:.6g} inside [{s0:g}, {s1:g}]")
    if samples is None:
        samples = max(201, int(math.ceil(length / 0.01)) + 1)
    s_out = np.linspace(s0, s1, samples)

    def rhs(s, state):
        t, g, y = state[0:3], state[3:6], state[6:9]
        k = float(profile(s))
        return np.concatenate([-g + k * y, t, -k * t])

    def on_step(s, state, n):
        if n % reorthonormalize_every == 0:
            return _reorthonormalize(state, m)
        return None

    problem = IvpProblem(rhs, s0, s1, initial.as_array(), tolerance=tolerance)
    path = integrate_ivp(problem, sample_points=s_out, on_step=on_step)
    states = path.states
    return Curve.from_samples(
        m,
        path.params,
        states[:, 3:6],
        unit_speed=True,
        label=label or f"frame-integrated ({profile.description})",
        info={"profile": profile.description},
        extras={"t": states[:, 0:3], "y": states[:, 6:9], "kg": np.asarray(profile(path.params), dtype=float)},
    )


def flow_by_rotation(c: Curve, spec: RotationSpec) -> Curve:
    """Image of ``c`` under an elliptical rotation (one time-slice of a Killing flow)."""
    return c.transformed(elliptical_rotation(spec), label=f"{c.label} rotated")


def round_geodesic_curvature(c: Curve, s):
    """Geodesic curvature of the image curve on the Euclidean unit sphere.

    Independent route through plain dot/cross products after the scaling
    isometry; equal to :func:`geodesic_curvature` when everything is right.
    """
    m = c.metric
    scale = m.sqrt_coeffs

    def image(u):
        return c.position(u) * scale

    if hasattr(c.position, "derivative"):
        v = c.velocity(s) * scale
        a = c.acceleration(s) * scale
    else:
        v = fd_derivative(image, s, 1, h=CURVE_FD_STEP, accuracy=CURVE_FD_ACCURACY)
        a = fd_derivative(image, s, 2, h=CURVE_FD_STEP, accuracy=CURVE_FD_ACCURACY)
    p = image(np.atleast_1d(np.asarray(s, dtype=float)))
    n = p / np.linalg.norm(p, axis=-1, keepdims=True)
    speed = np.linalg.norm(v, axis=-1)
    k = np.einsum("...i,...i->...", a, np.cross(v, n)) / speed**3
    return k[0] if np.ndim(s) == 0 else k


def regular_samples(c: Curve, n: int, min_relative_speed: float = 0.05, margin: float = 0.0) -> np.ndarray:
    """``n`` parameters spread over the domain, skipping neighbourhoods of cusps."""
    grid = c.grid(8 * n, margin)
    speed = c.speed(grid)
    keep = grid[speed >= min_relative_speed * np.max(speed)]
    idx = np.linspace(0, keep.size - 1, n).round().astype(int)
    return keep[idx]


def third_order_residual(c: Curve, profile: CurvatureProfile, s) -> float:
    """Max B-norm of ``k gamma''' - k' gamma'' + (k^3 + k) gamma' - k' gamma``.

    ``c`` must be unit speed and ``profile`` its curvature (arclength).
    """
    m = c.metric
    s = np.asarray(s, dtype=float)
    k = np.asarray(profile(s), dtype=float)[:, None]
    dk = fd_derivative(lambda u: np.asarray(profile(u), dtype=float)[:, None], s, 1, h=1e-3, accuracy=4)
    res = k * c.jerk(s) - dk * c.acceleration(s) + (k**3 + k) * c.velocity(s) - dk * c(s)
    return float(np.max(norm(res, m)))
