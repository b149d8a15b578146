"""Initial-value integration, finite differences and arclength resampling."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import IntegrationError, RegularityError

DEFAULT_TOL = 1e-10
TOL_ENV_VAR = "ELLIPSOID_TRAJ_TOL"


def default_tolerance() -> float:
    """Integrator tolerance, overridable through ``ELLIPSOID_TRAJ_TOL``."""
    raw = os.environ.get(TOL_ENV_VAR)
    if raw:
        value = float(raw)
        if not value > 0:
            raise ValueError(f"{TOL_ENV_VAR} must be positive, got {raw!r}")
        return value
    return DEFAULT_TOL


@dataclass
class IvpProblem:
    """``y' = rhs(s, y)`` on ``[s0, s1]`` with ``y(s0) = y0``.

    ``max_step`` defaults to one hundredth of the interval length.
    ``error_control="step"`` bounds the local error of each step by the
    tolerance; ``"unit"`` bounds it by ``tolerance * h / |s1 - s0|``, which
    costs more steps but makes the global error shrink faster than the
    tolerance.
    """

    rhs: Callable[[float, np.ndarray], np.ndarray]
    s0: float
    s1: float
    y0: np.ndarray
    tolerance: Optional[float] = None
    max_step: Optional[float] = None
    error_control: str = "step"

    def __post_init__(self):
        self.y0 = np.atleast_1d(np.asarray(self.y0, dtype=float))
        if self.s1 == self.s0:
            raise ValueError("integration interval is empty (s1 == s0)")
        if self.tolerance is None:
            self.tolerance = default_tolerance()
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.error_control not in ("step", "unit"):
            raise ValueError(f"error_control must be 'step' or 'unit', got {self.error_control!r}")
        if self.max_step is None:
            self.max_step = 0.01 * abs(self.s1 - self.s0)

    @property
    def dimension(self) -> int:
        return self.y0.size


@dataclass(frozen=True)
class SampledPath:
    """States sampled at strictly increasing parameters."""

    params: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if params.ndim != 1 or states.shape[0] != params.shape[0]:
            raise ValueError("params and states must have the same length")
        if params.size > 1 and not np.all(np.diff(params) > 0):
            raise ValueError("params must be strictly increasing")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.params.size

    @property
    def spacing(self) -> float:
        """Uniform spacing; raises if the grid is not uniform."""
        d = np.diff(self.params)
        if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
            raise ValueError("samples are not uniformly spaced")
        return float(d[0])


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def integrate_ivp(
    problem: IvpProblem,
    sample_points=None,
    on_step: Optional[Callable[[float, np.ndarray, int], np.ndarray]] = None,
) -> SampledPath:
    """Adaptive Dormand-Prince 5(4) integration.

    Steps are clipped so that every requested sample point is hit exactly,
    which keeps the sampled error smooth enough to differentiate. Without
    ``sample_points`` every accepted step is returned.

    ``on_step(s, y, n_accepted)`` runs after each accepted step and may
    return a corrected state (used for drift projection).
    """
    s0, s1 = float(problem.s0), float(problem.s1)
    direction = 1.0 if s1 > s0 else -1.0
    tol = problem.tolerance
    max_step = float(problem.max_step)
    per_unit = problem.error_control == "unit"
    length = abs(s1 - s0)

    if sample_points is None:
        targets = None
    else:
        targets = np.asarray(sample_points, dtype=float)
        if np.any(direction * np.diff(targets) <= 0):
            raise ValueError("sample points must be strictly monotone in the integration direction")
        lo, hi = min(s0, s1), max(s0, s1)
        span = hi - lo
        if targets[0] < lo - 1e-12 * span or targets[-1] > hi + 1e-12 * span:
            raise ValueError("sample points must lie inside the integration interval")

    s = s0
    y = problem.y0.copy()
    out_s, out_y = [], []
    next_target = 0
    if targets is not None:
        while next_target < targets.size and abs(targets[next_target] - s) <= 1e-14 * (1 + abs(s)):
            out_s.append(s)
            out_y.append(y.copy())
            next_target += 1
    else:
        out_s.append(s)
        out_y.append(y.copy())

    def f(si, yi):
        val = np.asarray(problem.rhs(si, yi), dtype=float)
        if not np.all(np.isfinite(val)):
            raise IntegrationError("right-hand side returned non-finite values", s)
        return val

    k1 = f(s, y)
    h = min(max_step, abs(s1 - s0), 1e-3 * (1 + abs(s1 - s0)))
    n_accepted = 0
    min_step = 1e-13 * max(1.0, abs(s0), abs(s1))
    while direction * (s1 - s) > min_step * 0.5:
        h = min(h, max_step, abs(s1 - s))
        hit = False
        if targets is not None and next_target < targets.size:
            gap = abs(targets[next_target] - s)
            # snap when a step would leave a sliver shorter than min_step
            if h >= gap - min_step:
                h = gap
                hit = True
        if h < min_step and not hit:
            raise IntegrationError("step size underflow", s)
        hs = direction * h
        k = [k1]
        for i in range(1, 7):
            yi = y + hs * sum(a * kj for a, kj in zip(_A[i], k))
            k.append(f(s + _C[i] * hs, yi))
        y_new = y + hs * sum(b * kj for b, kj in zip(_B5, k))
        err_vec = hs * sum(e * kj for e, kj in zip(_E, k))
        scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        err = float(np.max(np.abs(err_vec) / scale))
        if per_unit:
            err *= length / h
        if err <= 1.0:
            s = targets[next_target] if hit else s + hs
            y = y_new
            k1 = k[6]
            n_accepted += 1
            if on_step is not None:
                corrected = on_step(s, y, n_accepted)
                if corrected is not None and corrected is not y:
                    y = np.asarray(corrected, dtype=float)
                    k1 = f(s, y)
            if targets is None:
                out_s.append(s)
                out_y.append(y.copy())
            elif hit:
                out_s.append(s)
                out_y.append(y.copy())
                next_target += 1
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            if not hit:
                h = h * factor
            else:
                h = max(h, h * factor)
        else:
            h = h * max(0.1, 0.9 * err ** -0.2)

    if targets is not None and next_target < targets.size:
        # remaining targets coincide with s1 up to rounding
        for _ in range(next_target, targets.size):
            out_s.append(s)
            out_y.append(y.copy())
    params = np.array(out_s)
    states = np.array(out_y)
    if direction < 0:
        params, states = params[::-1], states[::-1]
    return SampledPath(params, states)


# central stencils: (offsets, weights, denominator power)
_STENCILS = {
    (1, 2): ((-1, 1), (-0.5, 0.5)),
    (2, 2): ((-1, 0, 1), (1.0, -2.0, 1.0)),
    (3, 2): ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    (1, 4): ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
    (2, 4): ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
    (3, 4): ((-3, -2, -1, 1, 2, 3), (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8)),
    (1, 6): ((-3, -2, -1, 1, 2, 3), (-1 / 60, 3 / 20, -3 / 4, 3 / 4, -3 / 20, 1 / 60)),
    (2, 6): ((-3, -2, -1, 0, 1, 2, 3), (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90)),
    (3, 6): ((-4, -3, -2, -1, 1, 2, 3, 4), (-7 / 240, 3 / 10, -169 / 120, 61 / 30, -61 / 30, 169 / 120, -3 / 10, 7 / 240)),
}

DEFAULT_FD_STEP = {1: 1e-5, 2: 1e-5, 3: 1e-4}


def fd_derivative(f, s, order: int, h: Optional[float] = None, accuracy: int = 2):
    """Central finite-difference derivative of a vector-valued function.

    ``f`` must accept a 1-D array of parameters and return one row per
    parameter. ``s`` may be a scalar or a 1-D array. ``accuracy`` selects the
    O(h^2) stencils (default) or the wider O(h^4) / O(h^6) ones.
    """
    try:
        offsets, weights = _STENCILS[(order, accuracy)]
    except KeyError:
        raise ValueError(f"unsupported derivative order/accuracy: {order}/{accuracy}") from None
    if h is None:
        h = DEFAULT_FD_STEP[order]
    s_arr = np.asarray(s, dtype=float)
    scalar = s_arr.ndim == 0
    s_flat = np.atleast_1d(s_arr)
    pts = (s_flat[:, None] + h * np.asarray(offsets, dtype=float)[None, :]).ravel()
    vals = np.asarray(f(pts), dtype=float)
    vals = vals.reshape(s_flat.size, len(offsets), *vals.shape[1:])
    w = np.asarray(weights).reshape((1, len(offsets)) + (1,) * (vals.ndim - 2))
    d = np.sum(w * vals, axis=1) / h**order
    return d[0] if scalar else d


def grid_derivative(values, spacing: float, order: int) -> np.ndarray:
    """Derivative of uniformly sampled data with O(h^4) central stencils.

    Returns values for the interior samples ``[3:-3]`` so every order shares
    the same index range.
    """
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    if n < 7:
        raise ValueError("need at least 7 samples")
    offsets, weights = _STENCILS[(order, 4)]
    out = np.zeros((n - 6,) + v.shape[1:])
    for o, w in zip(offsets, weights):
        out = out + w * v[3 + o : n - 3 + o]
    return out / spacing**order


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _gauss_legendre(f, a, b):
    """Vectorized 8-point Gauss-Legendre over intervals ``[a_i, b_i]``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    vals = np.asarray(f(nodes)).reshape(a.size, _GL_X.size)
    return half * (vals @ _GL_W)


def simpson_cumulative(values, spacing: float) -> np.ndarray:
    """Cumulative composite Simpson integral at the even-indexed nodes."""
    v = np.asarray(values, dtype=float)
    if (v.size - 1) % 2:
        raise ValueError("Simpson's rule needs an even number of intervals")
    panels = spacing / 3.0 * (v[0:-2:2] + 4.0 * v[1:-1:2] + v[2::2])
    return np.concatenate([[0.0], np.cumsum(panels)])


def reparameterize_arclength(c, n: int, min_speed: float = 1e-8):
    """Resample a regular curve at ``n`` points equally spaced in B-arclength.

    Arclength comes from composite Simpson on a grid 8x finer than the
    output; the inverse map starts from a monotone cubic interpolant and is
    polished with two Newton steps against Gauss-Legendre arclength, so the
    returned samples sit on the exact unit-speed parameterization.
    """
    from .curve import Curve
    from .metric import norm

    if n < 2:
        raise ValueError("need at least two output samples")
    t0, t1 = c.domain
    n_fine = 8 * n
    if n_fine % 2:
        n_fine += 1
    t_fine = np.linspace(t0, t1, n_fine + 1)
    h_fine = (t1 - t0) / n_fine

    def speed(t):
        return norm(c.velocity(np.atleast_1d(t)), c.metric)

    v_fine = speed(t_fine)
    if np.min(v_fine) < min_speed:
        bad = t_fine[np.argmin(v_fine)]
        raise RegularityError(f"curve speed vanishes near t = {bad:.6g}")

    t_even = t_fine[::2]
    L_even = simpson_cumulative(v_fine, h_fine)
    total = L_even[-1]
    inverse = PchipInterpolator(L_even, t_even)

    s_out = np.linspace(0.0, total, n)
    t_out = inverse(s_out)
    for _ in range(2):
        j = np.clip(np.searchsorted(t_even, t_out, side="right") - 1, 0, t_even.size - 1)
        L_t = L_even[j] + _gauss_legendre(speed, t_even[j], t_out)
        t_out = t_out - (L_t - s_out) / speed(t_out)
    t_out[0], t_out[-1] = t0, t1
    pts = c(t_out)
    return Curve.from_samples(
        c.metric,
        s_out,
        pts,
        unit_speed=True,
        radius=c.radius,
        label=c.label,
        info={**c.info, "source_params": t_out, "arclength": total},
    )
