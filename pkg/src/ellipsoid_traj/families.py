"""Closed-form curve families built from elliptical rotations.

Each rotation-built family has two evaluation routes: the explicit closed
form and the literal composition of rotation matrices applied to a point on
a moving ellipse. The curve objects use the closed form; the composed route
exists so the two can be compared.

Rotation matrices here all follow the generator convention of
:func:`ellipsoid_traj.metric.skew_generator`. With that convention the
closed forms below are reproduced by

* helix:     ``R_z(t) R_y(-arccos k) P(-t)``
* satellite: ``R_z(t) R_y(-alpha) P(t)``
* cycloid:   ``R_z(t) [shift a along x] R_y(omega) P(-t)``

where ``P`` is the point on the moving ellipse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .curve import Curve
from .darboux import equator_frame, frame_integrate, linear_profile
from .errors import DomainError, InvariantError
from .metric import EllipticMetric, axis_rotation, inner


def _rows(pts):
    return np.stack(pts, axis=-1)


def _apply(M, pts):
    """Per-sample matrix stack ``M`` of shape (n, 3, 3) applied to (n, 3)."""
    return np.einsum("nij,nj->ni", M, pts)


def _rotations(index, angles, m):
    return np.stack([axis_rotation(index, a, m) for a in np.atleast_1d(angles)])


# --- helices -------------------------------------------------------------


@dataclass(frozen=True)
class HelixParams:
    k: float
    metric: EllipticMetric
    R: float = 1.0

    def __post_init__(self):
        if not 0 < self.k < 1:
            raise DomainError(f"helix needs 0 < k < 1, got {self.k}")
        if not self.R > 0:
            raise DomainError("helix radius must be positive")


def helix_closed_form(t, p: HelixParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    k = p.k
    sq = p.metric.sqrt_coeffs
    x = (k * np.cos(t) * np.cos(k * t) + np.sin(t) * np.sin(k * t)) / sq[0]
    y = (k * np.sin(t) * np.cos(k * t) - np.cos(t) * np.sin(k * t)) / sq[1]
    z = math.sqrt(1 - k * k) * np.cos(k * t) / sq[2]
    return p.R * _rows([x, y, z])


def helix_epicyclic_form(t, p: HelixParams) -> np.ndarray:
    """Same helix written with the frequencies ``1 - k`` and ``1 + k``."""
    t = np.asarray(t, dtype=float)
    k = p.k
    sq = p.metric.sqrt_coeffs
    x = 0.5 * ((1 + k) * np.cos((1 - k) * t) - (1 - k) * np.cos((1 + k) * t)) / sq[0]
    y = 0.5 * ((1 + k) * np.sin((1 - k) * t) - (1 - k) * np.sin((1 + k) * t)) / sq[1]
    z = math.sqrt(1 - k * k) * np.cos(k * t) / sq[2]
    return p.R * _rows([x, y, z])


def helix_composed(t, p: HelixParams) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = p.metric
    sq = m.sqrt_coeffs
    point = _rows([np.cos(-p.k * t) / sq[0], np.sin(-p.k * t) / sq[1], np.zeros_like(t)])
    tilted = point @ axis_rotation(1, -math.acos(p.k), m).T
    return p.R * _apply(_rotations(2, t, m), tilted)


def helix_cusps(p: HelixParams, domain) -> list:
    """Parameters ``n pi / k`` in ``domain`` where the helix speed vanishes."""
    step = math.pi / p.k
    a, b = domain
    return [n * step for n in range(math.ceil(a / step), math.floor(b / step) + 1)]


def helix(p: HelixParams, domain=None) -> Curve:
    if domain is None:
        domain = (0.0, 2 * math.pi / p.k)
    return Curve(
        metric=p.metric,
        position=lambda t: helix_closed_form(t, p),
        domain=tuple(domain),
        radius=p.R,
        label=f"helix k={p.k:g}",
        info={"family": "helix", "params": {"k": p.k, "R": p.R}, "cusps": helix_cusps(p, domain)},
    )


# --- satellite curves ----------------------------------------------------


@dataclass(frozen=True)
class SatelliteParams:
    alpha: float
    k: float
    metric: EllipticMetric
    R: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("satellite radius must be positive")


def satellite_closed_form(t, p: SatelliteParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    k, ca, sa = p.k, math.cos(p.alpha), math.sin(p.alpha)
    sq = p.metric.sqrt_coeffs
    x = (np.cos(t) * np.cos(k * t) * ca - np.sin(t) * np.sin(k * t)) / sq[0]
    y = (np.sin(t) * np.cos(k * t) * ca + np.cos(t) * np.sin(k * t)) / sq[1]
    z = np.cos(k * t) * sa / sq[2]
    return p.R * _rows([x, y, z])


def satellite_composed(t, p: SatelliteParams) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = p.metric
    sq = m.sqrt_coeffs
    point = _rows([np.cos(p.k * t) / sq[0], np.sin(p.k * t) / sq[1], np.zeros_like(t)])
    tilted = point @ axis_rotation(1, -p.alpha, m).T
    return p.R * _apply(_rotations(2, t, m), tilted)


def satellite_cusps(p: SatelliteParams, domain, tol: float = 1e-12) -> list:
    """Cusps occur only in the helix case ``cos(alpha) = -k``, at ``k t = n pi``."""
    if p.k == 0 or abs(math.cos(p.alpha) + p.k) > tol:
        return []
    step = math.pi / abs(p.k)
    a, b = domain
    return [n * step for n in range(math.ceil(a / step), math.floor(b / step) + 1)]


def _closing_period(x: float, limit: int = 1000) -> float:
    """Smallest multiple of 2 pi after which both ``t`` and ``x t`` wrap."""
    frac = Fraction(abs(x)).limit_denominator(limit)
    if frac == 0:
        return 2 * math.pi
    return 2 * math.pi * frac.denominator


def satellite(p: SatelliteParams, domain=None) -> Curve:
    if domain is None:
        domain = (0.0, _closing_period(p.k))
    return Curve(
        metric=p.metric,
        position=lambda t: satellite_closed_form(t, p),
        domain=tuple(domain),
        radius=p.R,
        label=f"satellite alpha={p.alpha:g} k={p.k:g}",
        info={"family": "satellite", "params": {"alpha": p.alpha, "k": p.k, "R": p.R},
              "cusps": satellite_cusps(p, domain)},
    )


# --- cycloids -----------------------------------------------------------


def spherical_omega(a: float, b: float) -> float:
    """Inter-plane angle at which the cycloid lies on the B-sphere of radius ``a``."""
    if not 0 < b <= a:
        raise DomainError("spherical cycloid needs 0 < b <= a")
    return math.acos(-b / a)


@dataclass(frozen=True)
class CycloidParams:
    a: float
    b: float
    omega: float
    metric: EllipticMetric

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError("cycloid radii must be positive")

    @property
    def q(self) -> float:
        return self.a / self.b

    @classmethod
    def spherical(cls, a: float, b: float, metric: EllipticMetric) -> "CycloidParams":
        return cls(a, b, spherical_omega(a, b), metric)

    @property
    def is_spherical(self) -> bool:
        return self.b <= self.a and abs(math.cos(self.omega) + self.b / self.a) < 1e-12


def cycloid_closed_form(t, p: CycloidParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    a, b, q, w = p.a, p.b, p.q, p.omega
    sq = p.metric.sqrt_coeffs
    lever = a + b * (1 - np.cos(q * t)) * math.cos(w)
    x = (lever * np.cos(t) + b * np.sin(q * t) * np.sin(t)) / sq[0]
    y = (lever * np.sin(t) - b * np.sin(q * t) * np.cos(t)) / sq[1]
    z = -b * (1 - np.cos(q * t)) * math.sin(w) / sq[2]
    return _rows([x, y, z])


def cycloid_composed(t, p: CycloidParams) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    m = p.metric
    sq = m.sqrt_coeffs
    tau = -t
    point = _rows([p.b * (1 - np.cos(p.q * tau)) / sq[0], p.b * np.sin(p.q * tau) / sq[1], np.zeros_like(t)])
    tilted = point @ axis_rotation(1, p.omega, m).T
    shifted = tilted + np.array([p.a / sq[0], 0.0, 0.0])
    return _apply(_rotations(2, t, m), shifted)


def cycloid_cusps(p: CycloidParams, domain) -> list:
    """Contact instants ``q t = 2 n pi``, where the rolling point is at rest."""
    step = 2 * math.pi / p.q
    a, b = domain
    return [n * step for n in range(math.ceil(a / step), math.floor(b / step) + 1)]


def cycloid(p: CycloidParams, domain=None) -> Curve:
    if domain is None:
        domain = (0.0, _closing_period(p.q))
    return Curve(
        metric=p.metric,
        position=lambda t: cycloid_closed_form(t, p),
        domain=tuple(domain),
        radius=p.a if p.is_spherical else float("nan"),
        label=f"cycloid a={p.a:g} b={p.b:g}",
        info={"family": "cycloid", "params": {"a": p.a, "b": p.b, "q": p.q, "omega": p.omega},
              "spherical": p.is_spherical, "cusps": cycloid_cusps(p, domain)},
    )


# --- constant-curvature circles ------------------------------------------


@dataclass(frozen=True)
class CircleParams:
    """``gamma(s) = eta1 + eta2 sin((c^2+1) s) + eta3 cos((c^2+1) s)``."""

    eta1: np.ndarray
    eta2: np.ndarray
    eta3: np.ndarray
    c: float
    metric: EllipticMetric = field(default=None)

    @property
    def frequency(self) -> float:
        return self.c**2 + 1


def circle_closed_form(s, p: CircleParams) -> np.ndarray:
    s = np.asarray(s, dtype=float)[..., None]
    w = p.frequency
    return np.asarray(p.eta1) + np.asarray(p.eta2) * np.sin(w * s) + np.asarray(p.eta3) * np.cos(w * s)


def circle_constant_kg(p: CircleParams, m: EllipticMetric = None, tol: float = 1e-8) -> Curve:
    """Circle with the frequency ``c^2 + 1`` in its own parameter.

    Checked on construction to lie on the unit B-sphere over one period.
    """
    m = m or p.metric
    if m is None:
        raise DomainError("circle needs a metric")
    period = 2 * math.pi / p.frequency
    s = np.linspace(0.0, period, 257)
    res = float(np.max(np.abs(inner(circle_closed_form(s, p), circle_closed_form(s, p), m) - 1.0)))
    if res > tol:
        raise InvariantError(f"circle leaves the unit B-sphere (residual {res:.3e}); adjust eta vectors")
    return Curve(
        metric=m,
        position=lambda u: circle_closed_form(u, p),
        domain=(0.0, period),
        label=f"circle c={p.c:g}",
        info={"family": "circle", "params": {"c": p.c, "eta1": list(map(float, p.eta1)),
                                              "eta2": list(map(float, p.eta2)), "eta3": list(map(float, p.eta3))}},
    )


def example_circle_params(which: int, m: EllipticMetric) -> CircleParams:
    """The two frequency-3 circles: ``which=1`` at constant z, ``which=2`` at constant y."""
    h = 1.0 / np.sqrt(2 * m.coeffs)
    ex, ey, ez = np.diag(h)
    c = math.sqrt(2.0)
    if which == 1:
        return CircleParams(ez, ey, ex, c, m)
    if which == 2:
        return CircleParams(ey, ez, ex, c, m)
    raise DomainError("example circle must be 1 or 2")


def example_circle(which: int, m: EllipticMetric) -> Curve:
    curve = circle_constant_kg(example_circle_params(which, m))
    return replace(curve, label=f"example circle {which}")


def latitude_circle_curvature(height: float) -> float:
    """Geodesic curvature of the circle at height ``height`` on the unit round sphere."""
    return height / math.sqrt(1 - height * height)


def circle_curvature_report(which: int, m: EllipticMetric, samples: int = 50) -> dict:
    """Nominal ``c`` against the measured arclength curvature for an example circle.

    The generator's ``c`` only enters through the frequency ``c^2 + 1``; the
    circle's speed is not one, so the arclength curvature differs. Both
    numbers are reported together with the round-sphere value.
    """
    from .darboux import geodesic_curvature

    p = example_circle_params(which, m)
    curve = circle_constant_kg(p)
    s = curve.grid(samples)
    measured = geodesic_curvature(curve, s)
    speed = curve.speed(s)
    oracle = latitude_circle_curvature(1 / math.sqrt(2))
    return {
        "curve": f"example circle {which}",
        "metric": m.as_tuple(),
        "nominal_kg": p.c,
        "arclength_kg": float(np.mean(measured)),
        "arclength_kg_spread": float(np.ptp(measured)),
        "round_oracle_kg": oracle,
        "speed": float(np.mean(speed)),
        "open_question": (
            "nominal value sqrt(2) comes from matching frequency c^2+1 = 3 in a non-unit-speed "
            "parameter; the arclength geodesic curvature is |k_g| = 1"
        ),
    }


# --- linear curvature ----------------------------------------------------


def linear_kg_curve(m: EllipticMetric, length: float = 4.0, samples=None, tolerance=None) -> Curve:
    """Curve with ``k_g(s) = s`` grown from the equator at ``s = 0``."""
    c = frame_integrate(linear_profile(1.0), equator_frame(m), length, m, samples=samples,
                        tolerance=tolerance, label="linear k_g = s")
    return replace(c, info={**c.info, "family": "linear_kg", "params": {"length": length}})
