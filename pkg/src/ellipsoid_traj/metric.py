"""Weighted inner-product algebra on R^3 and elliptical rotations.

All vector functions accept arrays of shape ``(..., 3)`` and broadcast over
the leading axes, so a whole sampled curve can be pushed through at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantError

#: sectional curvature of the unit ellipsoid under B (the scaling map is an
#: isometry onto the Euclidean unit sphere)
SECTIONAL_CURVATURE = 1.0

#: tolerance used when checking that a rotation axis is B-unit
AXIS_TOL = 1e-9


@dataclass(frozen=True)
class EllipticMetric:
    """Coefficients ``(a1, a2, a3)`` of ``B(u, v) = sum a_i u_i v_i``."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"metric coefficient {name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3])

    @property
    def sqrt_coeffs(self) -> np.ndarray:
        return np.sqrt(self.coeffs)

    @property
    def delta(self) -> float:
        """``sqrt(a1 a2 a3)``, the volume factor of the cross product."""
        return math.sqrt(self.a1 * self.a2 * self.a3)

    @classmethod
    def parse(cls, text: str) -> "EllipticMetric":
        """Build from a ``"a1,a2,a3"`` string."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise DomainError(f"expected three comma-separated coefficients, got {text!r}")
        return cls(*(float(p) for p in parts))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)


EUCLIDEAN = EllipticMetric(1.0, 1.0, 1.0)


def _vec(u) -> np.ndarray:
    return np.asarray(u, dtype=float)


def inner(u, v, m: EllipticMetric):
    """B-inner product, broadcast over leading axes."""
    return np.sum(m.coeffs * _vec(u) * _vec(v), axis=-1)


def norm(u, m: EllipticMetric):
    return np.sqrt(inner(u, u, m))


def angle(u, v, m: EllipticMetric):
    """B-angle between two nonzero vectors, in ``[0, pi]``."""
    nu = norm(u, m)
    nv = norm(v, m)
    if np.any(nu == 0) or np.any(nv == 0):
        raise DomainError("angle undefined for a zero vector")
    return np.arccos(np.clip(inner(u, v, m) / (nu * nv), -1.0, 1.0))


def cross_e(u, v, m: EllipticMetric) -> np.ndarray:
    """Elliptical cross product: ``delta * (c1/a1, c2/a2, c3/a3)`` with ``c = u x v``."""
    return m.delta * np.cross(_vec(u), _vec(v)) / m.coeffs


def normalize(u, m: EllipticMetric) -> np.ndarray:
    """Scale ``u`` to B-norm one."""
    u = _vec(u)
    n = norm(u, m)
    if np.any(n == 0):
        raise DomainError("cannot normalize the zero vector")
    return u / np.expand_dims(n, -1)


def to_round(p, m: EllipticMetric) -> np.ndarray:
    """Isometry onto Euclidean space: ``(x, y, z) -> (sqrt(a1) x, sqrt(a2) y, sqrt(a3) z)``."""
    return _vec(p) * m.sqrt_coeffs


def from_round(q, m: EllipticMetric) -> np.ndarray:
    return _vec(q) / m.sqrt_coeffs


def _require_unit_axis(axis, m: EllipticMetric) -> np.ndarray:
    axis = _vec(axis)
    if axis.shape != (3,) or not np.all(np.isfinite(axis)):
        raise InvariantError(f"axis must be a finite 3-vector, got {axis!r}")
    n = float(norm(axis, m))
    if abs(n - 1.0) > AXIS_TOL:
        raise InvariantError(f"rotation axis must be B-unit (|u|_B = {n!r}); use normalize() first")
    return axis


@dataclass(frozen=True)
class RotationSpec:
    """An elliptical rotation: B-unit axis, angle in radians, metric."""

    axis: np.ndarray
    angle: float
    metric: EllipticMetric

    def __post_init__(self):
        object.__setattr__(self, "axis", _require_unit_axis(self.axis, self.metric))
        object.__setattr__(self, "angle", float(self.angle))

    @classmethod
    def about(cls, direction, angle: float, m: EllipticMetric) -> "RotationSpec":
        """Rotation about ``direction`` after B-normalizing it."""
        return cls(normalize(direction, m), angle, m)

    def matrix(self) -> np.ndarray:
        return elliptical_rotation(self)


def skew_generator(axis, m: EllipticMetric) -> np.ndarray:
    """Generator ``T`` with ``T p = axis x_E p``; skew-adjoint for B."""
    u1, u2, u3 = _require_unit_axis(axis, m)
    a1, a2, a3 = m.as_tuple()
    return m.delta * np.array(
        [
            [0.0, -u3 / a1, u2 / a1],
            [u3 / a2, 0.0, -u1 / a2],
            [-u2 / a3, u1 / a3, 0.0],
        ]
    )


def elliptical_rotation(spec: RotationSpec) -> np.ndarray:
    """Closed form ``I + sin(theta) T + (1 - cos(theta)) T^2``."""
    T = skew_generator(spec.axis, spec.metric)
    th = spec.angle
    return np.eye(3) + math.sin(th) * T + (1.0 - math.cos(th)) * (T @ T)


def rotation_entries(spec: RotationSpec) -> np.ndarray:
    """The same rotation assembled entry by entry from axis components.

    Diagonal entries are ``a_i u_i^2 + (1 - a_i u_i^2) cos(theta)``; the
    off-diagonal sine terms carry the signs of ``T``.
    """
    u1, u2, u3 = spec.axis
    a1, a2, a3 = spec.metric.as_tuple()
    d = spec.metric.delta
    c, s = math.cos(spec.angle), math.sin(spec.angle)
    cm = c - 1.0
    return np.array(
        [
            [a1 * u1**2 + (1 - a1 * u1**2) * c, -d * u3 * s / a1 - a2 * u1 * u2 * cm, d * u2 * s / a1 - a3 * u1 * u3 * cm],
            [d * u3 * s / a2 - a1 * u1 * u2 * cm, a2 * u2**2 + (1 - a2 * u2**2) * c, -d * u1 * s / a2 - a3 * u2 * u3 * cm],
            [-d * u2 * s / a3 - a1 * u1 * u3 * cm, d * u1 * s / a3 - a2 * u2 * u3 * cm, a3 * u3**2 + (1 - a3 * u3**2) * c],
        ]
    )


def expm_series(A: np.ndarray, degree: int = 12) -> np.ndarray:
    """Matrix exponential by scaling and squaring a truncated Taylor series."""
    A = np.asarray(A, dtype=float)
    nrm = np.linalg.norm(A, ord=np.inf)
    squarings = max(0, int(math.ceil(math.log2(nrm / 0.5)))) if nrm > 0.5 else 0
    X = A / 2.0**squarings
    result = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for j in range(1, degree + 1):
        term = term @ X / j
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def rotation_via_exponential(axis, angle: float, m: EllipticMetric) -> np.ndarray:
    """``exp(theta T)`` evaluated without the closed form; used as an oracle."""
    return expm_series(angle * skew_generator(axis, m))


def coordinate_axis(index: int, m: EllipticMetric) -> np.ndarray:
    """B-unit vector along coordinate axis 0, 1 or 2."""
    e = np.zeros(3)
    e[index] = 1.0 / m.sqrt_coeffs[index]
    return e


def axis_rotation(index: int, angle: float, m: EllipticMetric) -> np.ndarray:
    """Elliptical rotation about coordinate axis ``index`` (0=x, 1=y, 2=z)."""
    return elliptical_rotation(RotationSpec(coordinate_axis(index, m), angle, m))


def riemann_curvature(X, Y, Z, m: EllipticMetric, curvature: float = SECTIONAL_CURVATURE) -> np.ndarray:
    """Constant-curvature tensor ``R(X, Y) Z = C (B(Z, X) Y - B(Z, Y) X)``."""
    X, Y, Z = _vec(X), _vec(Y), _vec(Z)
    bzx = np.expand_dims(inner(Z, X, m), -1)
    bzy = np.expand_dims(inner(Z, Y, m), -1)
    return curvature * (bzx * Y - bzy * X)


def random_metric(rng: np.random.Generator, low: float = 0.2, high: float = 20.0) -> EllipticMetric:
    """Log-uniform random coefficients; handy for property checks."""
    return EllipticMetric(*np.exp(rng.uniform(math.log(low), math.log(high), size=3)))


def random_unit_axis(rng: np.random.Generator, m: EllipticMetric) -> np.ndarray:
    return normalize(rng.normal(size=3), m)
