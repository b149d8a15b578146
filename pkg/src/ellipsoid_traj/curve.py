"""Parametric curves carrying their metric."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import InvariantError
from .metric import EllipticMetric, inner, norm
from .numerics import SampledPath, fd_derivative

# analytic curves: O(h^6) stencils; the wide step keeps rounding noise low
CURVE_FD_STEP = 6e-3
CURVE_JERK_STEP = 1e-2
CURVE_FD_ACCURACY = 6


@dataclass(frozen=True)
class Curve:
    """A curve ``s -> gamma(s)`` in R^3 with the metric it lives in.

    ``position`` is vectorized: it maps a 1-D parameter array to an ``(n, 3)``
    array. Sampled curves wrap their samples in a quintic interpolating
    spline, so both kinds can be differentiated the same way.
    """

    metric: EllipticMetric
    position: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]
    unit_speed: bool = False
    radius: float = 1.0
    label: str = ""
    info: dict = field(default_factory=dict)
    path: Optional[SampledPath] = None

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = self.position(np.atleast_1d(s_arr))
        return out[0] if s_arr.ndim == 0 else out

    @classmethod
    def from_samples(cls, metric, params, points, unit_speed=False, radius=1.0, label="", info=None, extras=None):
        """Sampled curve; ``extras`` holds extra per-sample columns (frames, ...)."""
        params = np.asarray(params, dtype=float)
        points = np.asarray(points, dtype=float)
        k = min(5, params.size - 1)
        if k % 2 == 0:
            k -= 1
        spline = make_interp_spline(params, points, k=max(k, 1))
        info = dict(info or {})
        if extras:
            info["extras"] = dict(extras)
        return cls(
            metric=metric,
            position=spline,
            domain=(float(params[0]), float(params[-1])),
            unit_speed=unit_speed,
            radius=radius,
            label=label,
            info=info,
            path=SampledPath(params, points),
        )

    @property
    def is_sampled(self) -> bool:
        return self.path is not None

    def _derivative(self, s, order: int, h: float):
        # sampled curves differentiate their spline exactly
        if hasattr(self.position, "derivative"):
            s_arr = np.asarray(s, dtype=float)
            out = self.position.derivative(order)(np.atleast_1d(s_arr))
            return out[0] if s_arr.ndim == 0 else out
        return fd_derivative(self.position, s, order, h=h, accuracy=CURVE_FD_ACCURACY)

    def velocity(self, s, h: float = CURVE_FD_STEP):
        return self._derivative(s, 1, h)

    def acceleration(self, s, h: float = CURVE_FD_STEP):
        return self._derivative(s, 2, h)

    def jerk(self, s, h: float = CURVE_JERK_STEP):
        return self._derivative(s, 3, h)

    def speed(self, s):
        return norm(self.velocity(s), self.metric)

    def grid(self, n: int, margin: float = 0.0) -> np.ndarray:
        """``n`` equally spaced parameters, trimmed by ``margin`` at each end."""
        a, b = self.domain
        return np.linspace(a + margin, b - margin, n)

    def sample(self, n: int, margin: float = 0.0):
        s = self.grid(n, margin)
        return s, self(s)

    def sphere_residual(self, n: int = 1000) -> float:
        """Max ``|B(gamma, gamma) - r^2|`` over ``n`` samples."""
        if self.path is not None and n >= len(self.path):
            pts = self.path.states
        else:
            _, pts = self.sample(n)
        return float(np.max(np.abs(inner(pts, pts, self.metric) - self.radius**2)))

    def check_on_sphere(self, n: int = 1000, tol: float = 1e-8) -> float:
        res = self.sphere_residual(n)
        if res > tol:
            raise InvariantError(f"curve {self.label or '<unnamed>'} leaves the sphere: residual {res:.3e}")
        return res

    def transformed(self, M: np.ndarray, label: Optional[str] = None) -> "Curve":
        """Apply a linear map pointwise."""
        M = np.asarray(M, dtype=float)
        if self.path is not None:
            extras = {key: val @ M.T if np.ndim(val) == 2 and np.shape(val)[1] == 3 else val
                      for key, val in self.info.get("extras", {}).items()}
            info = {k: v for k, v in self.info.items() if k != "extras"}
            return Curve.from_samples(
                self.metric, self.path.params, self.path.states @ M.T,
                unit_speed=self.unit_speed, radius=self.radius,
                label=label or self.label, info=info, extras=extras or None,
            )
        position = self.position
        return Curve(
            metric=self.metric,
            position=lambda s: position(s) @ M.T,
            domain=self.domain,
            unit_speed=self.unit_speed,
            radius=self.radius,
            label=label or self.label,
            info=dict(self.info),
        )
