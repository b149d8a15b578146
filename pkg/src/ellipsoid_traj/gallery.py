"""The figure set: three magnetic examples, 8 helices, 8 satellites, 7 cycloids."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import __version__
from .curve import Curve
from .darboux import frame_at, geodesic_curvature
from .families import (
    CycloidParams,
    HelixParams,
    SatelliteParams,
    cycloid,
    example_circle,
    helix,
    linear_kg_curve,
    satellite,
)
from .io import sidecar_path, write_curve_csv, write_json
from .metric import EllipticMetric
from .verification import VerificationReport, verify_curve

HELIX_K = (0.56, 0.17, 0.75, 0.5, 0.4, 0.6, 0.9, 0.3)
SATELLITE_PARAMS = ((1 / math.sqrt(2), 1.0), (math.pi / 2, 1.0), (math.pi / 2, 0.5), (2.1, 0.5),
                    (2.5, 2.0), (1.8, 2.0), (1.57, 2.0), (1.5, 2.0))
CYCLOID_PAIRS = ((4, 3), (4, 2), (7, 1), (7, 5), (25, 4), (7, 3), (1.09, 1))
DEFAULT_METRIC = EllipticMetric(4.0, 9.0, 16.0)


def gallery_curves(m: EllipticMetric = DEFAULT_METRIC) -> list:
    """``[(name, curve), ...]`` for all 26 figure curves."""
    out = [
        ("magnetic-circle-1", example_circle(1, m)),
        ("magnetic-circle-2", example_circle(2, m)),
        ("magnetic-linear-kg", linear_kg_curve(m)),
    ]
    out += [(f"helix-k{k:g}", helix(HelixParams(k, m))) for k in HELIX_K]
    out += [(f"satellite-alpha{a:.4g}-k{k:g}", satellite(SatelliteParams(a, k, m))) for a, k in SATELLITE_PARAMS]
    out += [(f"cycloid-a{a:g}-b{b:g}", cycloid(CycloidParams.spherical(a, b, m))) for a, b in CYCLOID_PAIRS]
    return out


def curve_table(c: Curve, samples: int, frames: bool = False) -> dict:
    """Columns for CSV export; frame columns are NaN where the curve stalls."""
    s = c.grid(samples)
    cols = {"s": s, "points": c(s)}
    if frames:
        n = s.size
        t = np.full((n, 3), np.nan)
        y = np.full((n, 3), np.nan)
        kg = np.full(n, np.nan)
        speed = c.speed(s)
        ok = speed > 1e-6 * max(float(np.max(speed)), 1e-300)
        if np.any(ok):
            fr = frame_at(c, s[ok])
            t[ok], y[ok], kg[ok] = fr.t, fr.y, geodesic_curvature(c, s[ok])
        cols.update(t=t, y=y, kg=kg)
    return cols


def metadata(c: Curve, report: VerificationReport | None = None) -> dict:
    meta = {
        "metric": list(c.metric.as_tuple()),
        "family": c.info.get("family", "curve"),
        "label": c.label,
        "params": c.info.get("params", {}),
        "domain": list(c.domain),
        "radius": c.radius,
        "generator": "ellipsoid_traj",
        "generator_version": __version__,
    }
    if "cusps" in c.info:
        meta["cusps"] = c.info["cusps"]
    if report is not None:
        meta["verification"] = report.to_dict()
    return meta


def export_curve(c: Curve, path, samples: int, frames: bool = False, report: VerificationReport | None = None) -> Path:
    cols = curve_table(c, samples, frames)
    path = write_curve_csv(path, cols["s"], cols["points"], cols.get("t"), cols.get("y"), cols.get("kg"))
    write_json(sidecar_path(path), metadata(c, report))
    return path


def write_gallery(out_dir, m: EllipticMetric = DEFAULT_METRIC, samples: int = 2000, frames: bool = False,
                  tol: dict | None = None) -> VerificationReport:
    """Generate, verify and export every figure curve into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    overall = VerificationReport("gallery")
    index = []
    for name, c in gallery_curves(m):
        rep = verify_curve(c, tol=tol)
        export_curve(c, out_dir / f"{name}.csv", samples, frames, rep)
        overall.extend(rep, prefix=f"{name}/")
        index.append({"name": name, "csv": f"{name}.csv", "passed": rep.passed})
    write_json(out_dir / "index.json", {"metric": list(m.as_tuple()), "curves": index, **overall.summary()})
    return overall
