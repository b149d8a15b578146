"""Command line: ``generate``, ``verify``, ``mesh`` and ``gallery``.

Exit status is 0 iff every requested verification passes; invalid input
exits with status 2 and a message on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .errors import DomainError, IntegrationError, InvariantError
from .families import (
    CycloidParams,
    HelixParams,
    SatelliteParams,
    circle_curvature_report,
    cycloid,
    example_circle,
    helix,
    linear_kg_curve,
    satellite,
    spherical_omega,
)
from .gallery import DEFAULT_METRIC, export_curve, write_gallery
from .io import ellipsoid_mesh, read_curve_csv, read_json, sidecar_path, write_json, write_obj
from .metric import EllipticMetric, coordinate_axis, inner, normalize, skew_generator
from .numerics import TOL_ENV_VAR, SampledPath
from .verification import VerificationReport, verify_curve, verify_samples


def _metric(text: str) -> EllipticMetric:
    try:
        return EllipticMetric.parse(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vector(text: str) -> np.ndarray:
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from None
    if v.shape != (3,):
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return v


def _scan(text: str) -> np.ndarray:
    """``start:stop:step`` inclusive of ``stop`` when it lies on the grid."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("scan needs step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _samples(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("sample count must be at least 2")
    return n


def _example(text: str) -> int:
    table = {"4.1": 1, "4.2": 2, "1": 1, "2": 2}
    if text not in table:
        raise argparse.ArgumentTypeError("example circle must be 4.1 or 4.2")
    return table[text]


def _add_common(p: argparse.ArgumentParser, out_help: str) -> None:
    p.add_argument("--metric", type=_metric, default=None, help="a1,a2,a3 (default 4,9,16)")
    p.add_argument("--samples", type=_samples, default=1000, help="number of samples")
    p.add_argument("--out", type=Path, help=out_help)
    p.add_argument("--tol", type=float, help=f"integration tolerance (env {TOL_ENV_VAR})")


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=float, help="helix / satellite frequency ratio")
    p.add_argument("--alpha", type=float, help="satellite tilt angle (radians)")
    p.add_argument("--a", type=float, help="cycloid fixed-ellipse radius")
    p.add_argument("--b", type=float, help="cycloid rolling radius")
    p.add_argument("--omega", type=float, help="cycloid inter-plane angle (radians)")
    p.add_argument("--omega-mode", choices=["spherical", "epi", "hypo"], help="set omega from a, b")
    p.add_argument("--example", type=_example, default=1, help="example circle: 4.1 or 4.2")
    p.add_argument("--length", type=float, default=4.0, help="arclength of the linear-k_g curve")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellipsoid-traj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a curve to CSV with a JSON sidecar")
    g.add_argument("family", choices=["helix", "satellite", "cycloid", "circle", "linear"])
    _add_common(g, "CSV path (default <family>.csv)")
    _add_family_args(g)
    g.add_argument("--frames", action="store_true", help="add t, y and k_g columns")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("target", choices=["curve", "helix", "satellite", "cycloid", "circle", "linear",
                                      "magnetic", "acceptance"])
    _add_common(v, "write the report as JSON here")
    _add_family_args(v)
    v.add_argument("--in", dest="input", type=Path, help="curve CSV to check (target 'curve')")
    v.add_argument("--radius", type=float, help="expected B-radius of a curve file")
    v.add_argument("--axis", type=_vector, default=np.array([0.0, 0.0, 1.0]),
                   help="Killing axis direction for 'magnetic' (normalized in B)")
    v.add_argument("--delta-scan", type=_scan, default=None, help="start:stop:step values of delta")
    v.add_argument("--traj-length", type=float, default=10.0, help="magnetic trajectory arclength")

    mesh = sub.add_parser("mesh", help="export the ellipsoid as an OBJ mesh")
    mesh.add_argument("--metric", type=_metric, default=DEFAULT_METRIC)
    mesh.add_argument("--resolution", type=int, default=64)
    mesh.add_argument("--out", type=Path, default=Path("ellipsoid.obj"))

    gal = sub.add_parser("gallery", help="generate, verify and export all figure curves")
    _add_common(gal, "output directory (default gallery/)")
    gal.add_argument("--frames", action="store_true")
    return parser


def _or(value, default):
    return default if value is None else value


def _family_curve(args):
    m = args.metric or DEFAULT_METRIC
    fam = args.family if hasattr(args, "family") else args.target
    if fam == "helix":
        return helix(HelixParams(_or(args.k, 0.5), m))
    if fam == "satellite":
        return satellite(SatelliteParams(_or(args.alpha, 1.8), _or(args.k, 2.0), m))
    if fam == "cycloid":
        a, b = _or(args.a, 4.0), _or(args.b, 3.0)
        if args.omega_mode == "spherical":
            omega = spherical_omega(a, b)
        elif args.omega_mode == "epi":
            omega = 0.0
        elif args.omega_mode == "hypo":
            omega = math.pi
        elif args.omega is not None:
            omega = args.omega
        else:
            omega = spherical_omega(a, b)
        return cycloid(CycloidParams(a, b, omega, m))
    if fam == "circle":
        return example_circle(args.example, m)
    if fam == "linear":
        return linear_kg_curve(m, length=args.length, tolerance=args.tol)
    raise DomainError(f"unknown family {fam!r}")


def _emit(report: VerificationReport, out) -> int:
    print(report.format())
    if out is not None:
        write_json(out, report.to_dict())
    return 0 if report.passed else 1


def cmd_generate(args) -> int:
    c = _family_curve(args)
    out = args.out or Path(f"{args.family}.csv")
    report = verify_curve(c) if math.isfinite(c.radius) else None
    export_curve(c, out, args.samples, args.frames, report)
    print(f"wrote {out} ({args.samples} rows) and {sidecar_path(out)}")
    if report is not None and not report.passed:
        print(report.format(), file=sys.stderr)
        return 1
    return 0


def cmd_verify_file(args) -> int:
    if args.input is None:
        raise DomainError("verify curve needs --in FILE.csv")
    data = read_curve_csv(args.input)
    m, radius = args.metric, 1.0
    side = sidecar_path(args.input)
    if side.exists():
        meta = read_json(side)
        if m is None and "metric" in meta:
            m = EllipticMetric(*meta["metric"])
        r = meta.get("radius")
        if isinstance(r, (int, float)) and math.isfinite(r):
            radius = float(r)
    if args.radius is not None:
        radius = args.radius
    report = verify_samples(data["points"], m or DEFAULT_METRIC, radius, data.get("t"), data.get("y"))
    report.title = str(args.input)
    return _emit(report, args.out)


def magnetic_scan(axis, deltas, m: EllipticMetric, length: float, tolerance=None) -> VerificationReport:
    """Curvature-ODE residual for axis-generated fields tuned to each ``delta``.

    The field strength is chosen so that ``B(V, t) = delta`` at the start,
    with the initial tangent along the rotation direction ``T_u p0``.
    """
    from .darboux import geodesic_curvature
    from .magnetic import KillingField, curvature_ode_residual, integrate_magnetic_trajectory

    u = normalize(np.asarray(axis, dtype=float), m)
    T = skew_generator(u, m)
    # start on the great ellipse B-orthogonal to the axis
    trial = coordinate_axis(int(np.argmin(np.abs(u * m.sqrt_coeffs))), m)
    p0 = normalize(trial - inner(trial, u, m) * u, m)
    tp = T @ p0
    t0 = normalize(tp, m)
    speed = float(np.sqrt(inner(tp, tp, m)))
    report = VerificationReport(f"magnetic delta scan, axis {np.round(u, 6).tolist()}")
    for delta in deltas:
        V = KillingField.axis_generated(u, delta / speed, m)
        c = integrate_magnetic_trajectory(V, p0, t0, length, tolerance=tolerance)
        s = np.linspace(0.25, length - 0.25, int(round((length - 0.5) / 0.05)) + 1)
        d0 = float(inner(V.at(p0), t0, m))
        res = curvature_ode_residual(SampledPath(s, geodesic_curvature(c, s)), d0)
        report.add(f"delta={delta:g} curvature ODE residual", res, 1e-5, detail=f"measured delta={d0:.6f}")
        drift = float(np.max(np.abs(inner(c.path.states, c.path.states, m) - 1)))
        report.add(f"delta={delta:g} on-sphere drift", drift, 1e-8)
    return report


def cmd_verify(args) -> int:
    if args.tol is not None:
        os.environ[TOL_ENV_VAR] = repr(args.tol)
    if args.target == "curve":
        return cmd_verify_file(args)
    if args.target == "acceptance":
        from .acceptance import run_acceptance

        return _emit(run_acceptance(verbose=True), args.out)
    if args.target == "magnetic":
        deltas = args.delta_scan if args.delta_scan is not None else np.array([0.0, 0.5, 1.0])
        return _emit(magnetic_scan(args.axis, deltas, args.metric or DEFAULT_METRIC, args.traj_length, args.tol), args.out)
    c = _family_curve(args)
    report = verify_curve(c)
    if args.target == "circle":
        info = circle_curvature_report(args.example, c.metric)
        print(f"nominal c = {info['nominal_kg']:.12g}, arclength k_g = {info['arclength_kg']:.12g}"
              f" ({info['open_question']})")
    return _emit(report, args.out)


def cmd_mesh(args) -> int:
    verts, faces = ellipsoid_mesh(args.metric, args.resolution)
    write_obj(args.out, verts, faces)
    print(f"wrote {args.out} ({len(verts)} vertices, {len(faces)} faces)")
    return 0


def cmd_gallery(args) -> int:
    if args.tol is not None:
        os.environ[TOL_ENV_VAR] = repr(args.tol)
    out = args.out or Path("gallery")
    report = write_gallery(out, args.metric or DEFAULT_METRIC, args.samples, args.frames)
    failed = [c.line() for c in report.checks if not c.passed]
    n_curves = len({c.name.split("/")[0] for c in report.checks})
    print(f"wrote {n_curves} curves to {out}; {len(report.checks)} checks, {len(failed)} failed")
    for line in failed:
        print("  " + line)
    return 0 if report.passed else 1


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "mesh": cmd_mesh, "gallery": cmd_gallery}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DomainError, InvariantError, IntegrationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
