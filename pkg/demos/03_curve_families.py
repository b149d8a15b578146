"""The curve families built by composing elliptical rotations.

Each family has a closed form and a "composed" form that literally
multiplies rotation matrices. We compare them, show that a satellite curve
with ``cos(alpha) = -k`` is a reflected helix, and export a few curves to
CSV with JSON metadata.

Run with ``python3 demos/03_curve_families.py [output_dir]``.
"""

import math
import sys
from pathlib import Path

import numpy as np

from ellipsoid_traj import EllipticMetric
from ellipsoid_traj.families import (
    CycloidParams,
    HelixParams,
    SatelliteParams,
    cycloid,
    cycloid_closed_form,
    cycloid_composed,
    helix_closed_form,
    satellite_closed_form,
    satellite_composed,
)
from ellipsoid_traj.gallery import export_curve, gallery_curves
from ellipsoid_traj.verification import verify_curve

m = EllipticMetric(4.0, 9.0, 16.0)
t = np.linspace(0.0, 20.0, 2001)

sat = SatelliteParams(1.8, 2.0, m)
cyc = CycloidParams.spherical(7.0, 3.0, m)
print(f"satellite composed vs closed: {np.max(np.abs(satellite_composed(t, sat) - satellite_closed_form(t, sat))):.2e}")
print(f"cycloid   composed vs closed: {np.max(np.abs(cycloid_composed(t, cyc) - cycloid_closed_form(t, cyc))):.2e}")

k = 0.6
reflected = helix_closed_form(t, HelixParams(k, m)) * [-1, -1, 1]
congruent = satellite_closed_form(t, SatelliteParams(math.acos(-k), k, m))
print(f"satellite(cos alpha = -k) vs reflected helix: {np.max(np.abs(reflected - congruent)):.2e}")

c = cycloid(cyc)
print(f"\n{c.label}: omega = {cyc.omega:.6f}, B-radius {c.radius}, sphere residual {c.sphere_residual():.2e}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_curves")
out.mkdir(exist_ok=True)
print(f"\nverifying and exporting to {out}/")
for name, curve in gallery_curves(m)[:6]:
    report = verify_curve(curve)
    export_curve(curve, out / f"{name}.csv", 500, frames=True, report=report)
    status = "PASS" if report.passed else "FAIL"
    print(f"  {status} {name:<24s} {len(report.checks)} checks")
