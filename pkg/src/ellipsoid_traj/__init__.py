"""Curves, frames and magnetic trajectories on the elliptical 2-sphere.

The ellipsoid ``a1 x^2 + a2 y^2 + a3 z^2 = 1`` is the unit sphere of the
inner product ``B(u, v) = sum a_i u_i v_i``. Everything metric here (norms,
angles, cross products, rotations, frames, curvature) is taken in ``B``, and
every such quantity can be checked against the Euclidean unit sphere through
the scaling isometry :func:`to_round`.
"""

__version__ = "0.1.0"

from .curve import Curve
from .darboux import (
    CurvatureProfile,
    DarbouxFrame,
    constant_profile,
    cot_profile,
    equator_frame,
    flow_by_rotation,
    frame_at,
    frame_defects,
    frame_integrate,
    frame_ode_residual,
    geodesic_curvature,
    linear_profile,
    round_geodesic_curvature,
    tanh_profile,
)
from .errors import DomainError, IntegrationError, InvariantError, RegularityError, SingularityError
from .families import (
    CircleParams,
    CycloidParams,
    HelixParams,
    SatelliteParams,
    circle_constant_kg,
    cycloid,
    example_circle,
    helix,
    linear_kg_curve,
    satellite,
)
from .magnetic import (
    KillingField,
    curvature_ode_residual,
    integrate_magnetic_trajectory,
    lorentz_force,
    lorentz_matrix,
)
from .metric import (
    EllipticMetric,
    RotationSpec,
    angle,
    cross_e,
    elliptical_rotation,
    from_round,
    inner,
    norm,
    random_unit_axis,
    rotation_entries,
    rotation_via_exponential,
    skew_generator,
    to_round,
)
from .numerics import IvpProblem, SampledPath, integrate_ivp, reparameterize_arclength
from .verification import Check, VerificationReport, verify_curve

__all__ = [name for name in dir() if not name.startswith("_")]
