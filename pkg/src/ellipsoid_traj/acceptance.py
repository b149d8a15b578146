"""The fourteen acceptance criteria, each returning a :class:`VerificationReport`.

Every function is deterministic (fixed seeds) and evaluates at the stated
tolerances; :func:`run_acceptance` runs them all.
"""

from __future__ import annotations

import math
import tempfile
import time
from pathlib import Path

import numpy as np

from .darboux import (
    constant_profile,
    cot_profile,
    equator_frame,
    frame_at,
    frame_integrate,
    frame_ode_residual,
    geodesic_curvature,
    regular_samples,
    tanh_profile,
    third_order_residual,
)
from .families import (
    CycloidParams,
    HelixParams,
    SatelliteParams,
    circle_curvature_report,
    cycloid,
    cycloid_closed_form,
    cycloid_composed,
    example_circle,
    helix,
    helix_closed_form,
    helix_composed,
    linear_kg_curve,
    satellite,
    satellite_closed_form,
)
from .gallery import CYCLOID_PAIRS, DEFAULT_METRIC, HELIX_K, gallery_curves, write_gallery
from .io import read_curve_csv
from .magnetic import (
    KillingField,
    curvature_ode_residual,
    expected_lorentz_matrix,
    field_along_curve,
    integrate_magnetic_trajectory,
    lorentz_matrix,
    sample_profile,
)
from .metric import (
    EllipticMetric,
    RotationSpec,
    coordinate_axis,
    cross_e,
    elliptical_rotation,
    inner,
    norm,
    normalize,
    random_metric,
    random_unit_axis,
    rotation_via_exponential,
    skew_generator,
)
from .numerics import SampledPath
from .verification import VerificationReport, verify_curve

SEED = 20240611
M = DEFAULT_METRIC


def _rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def _tangent_at(p, rng, m):
    v = rng.normal(size=3)
    g = normalize(p, m)
    return normalize(v - inner(v, g, m) * g, m)


# --- shared trajectories -------------------------------------------------

_CACHE: dict = {}


def magnetic_example(length: float = 20.0) -> tuple:
    """Trajectory of a frame-expressed field with a tanh curvature profile."""
    key = ("frame", length)
    if key not in _CACHE:
        profile = tanh_profile(1.0, 1.0, -length / 2)
        V = KillingField.frame_expressed(1.0, M, profile)
        fr = equator_frame(M)
        c = integrate_magnetic_trajectory(V, fr.gamma, fr.t, length, tolerance=1e-10, label="magnetic tanh")
        _CACHE[key] = (V, c, profile)
    return _CACHE[key]


def axis_trajectories(length: float = 10.0) -> list:
    """Trajectories of the fields ``strength * T_u p`` for three axes and two strengths."""
    key = ("axis", length)
    if key not in _CACHE:
        rng = _rng(6)
        out = []
        for axis_index in range(3):
            u = coordinate_axis(axis_index, M)
            for strength in (0.5, 2.0):
                p0 = normalize(rng.normal(size=3), M)
                t0 = _tangent_at(p0, rng, M)
                V = KillingField.axis_generated(u, strength, M)
                c = integrate_magnetic_trajectory(V, p0, t0, length, tolerance=1e-10)
                out.append((axis_index, strength, V, c))
        _CACHE[key] = out
    return _CACHE[key]


def _gallery():
    if "gallery" not in _CACHE:
        _CACHE["gallery"] = gallery_curves(M)
    return _CACHE["gallery"]


# --- criteria -----------------------------------------------------------


def criterion_1(n: int = 1000) -> VerificationReport:
    rep = VerificationReport("1 rotation isometry")
    rng = _rng(1)
    worst = 0.0
    for _ in range(n):
        m = random_metric(rng)
        R = elliptical_rotation(RotationSpec(random_unit_axis(rng, m), rng.uniform(-2 * np.pi, 2 * np.pi), m))
        p = rng.normal(size=3)
        bp = inner(p, p, m)
        worst = max(worst, abs(inner(R @ p, R @ p, m) - bp) / (1 + abs(bp)))
    rep.add("max |B(Rp,Rp)-B(p,p)| / (1+B(p,p))", worst, 1e-9)
    return rep


def criterion_2(n: int = 200) -> VerificationReport:
    rep = VerificationReport("2 closed form vs exponential")
    rng = _rng(2)
    worst = 0.0
    for _ in range(n):
        m = random_metric(rng)
        u = random_unit_axis(rng, m)
        th = rng.uniform(-2 * np.pi, 2 * np.pi)
        worst = max(worst, np.max(np.abs(elliptical_rotation(RotationSpec(u, th, m)) - rotation_via_exponential(u, th, m))))
    rep.add("max entry difference", worst, 1e-10)
    return rep


def criterion_3(n: int = 1000) -> VerificationReport:
    rep = VerificationReport("3 mixed product")
    rng = _rng(3)
    worst = 0.0
    for _ in range(n):
        m = random_metric(rng)
        X, Y, Z = rng.normal(size=(3, 3))
        lhs = inner(cross_e(X, Y, m), Z, m)
        rhs = m.delta * np.linalg.det(np.array([X, Y, Z]))
        scale = m.delta * np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(Z)
        worst = max(worst, abs(lhs - rhs) / scale)
    rep.add("max |B(XxY,Z) - D det| / (D |X||Y||Z|)", worst, 1e-12)
    return rep


def criterion_4() -> VerificationReport:
    rep = VerificationReport("4 frame equations")
    equator = frame_integrate(constant_profile(0.0), equator_frame(M), 2 * np.pi, M, label="equator")
    curves = [
        ("equator", equator),
        ("example circle 1", example_circle(1, M)),
        ("helix k=0.5", helix(HelixParams(0.5, M))),
        ("satellite 1.8, 2", satellite(SatelliteParams(1.8, 2.0, M))),
        ("magnetic trajectory", magnetic_example()[1]),
    ]
    for name, c in curves:
        margin = 0.01 * (c.domain[1] - c.domain[0]) if c.is_sampled else 0.0
        s = regular_samples(c, 200, margin=margin)
        rep.add(f"{name} frame residual", max(frame_ode_residual(c, s=s)), 1e-4)
    return rep


def criterion_5() -> VerificationReport:
    """Lorentz matrix of a constant ambient field along the second example circle."""
    rep = VerificationReport("5 Lorentz matrix")
    c = example_circle(2, M)
    s = c.grid(200)
    kg = geodesic_curvature(c, s)
    _, V = field_along_curve(c, 0.0, s=s)
    rep.add("field constancy along circle", float(np.max(np.abs(V - V[0]))), 1e-6)
    V0 = V[0]
    frame = frame_at(c, s)
    delta = inner(V0, frame.t, m=M)
    rep.add("measured delta", float(np.max(np.abs(delta))), 1.0, detail="informational bound")
    err = np.max(np.abs(lorentz_matrix(V0, frame, M) - expected_lorentz_matrix(kg, delta)))
    rep.add("max Lorentz matrix entry error", float(err), 1e-6)
    return rep


def criterion_6() -> VerificationReport:
    rep = VerificationReport("6 curvature ODE")
    worst = 0.0
    for delta in (0.5, 1.0, 2.0):
        for c1 in (0.5, 1.0):
            path = sample_profile(tanh_profile(delta, c1), -6.0, 6.0, 2401)
            worst = max(worst, curvature_ode_residual(path, delta))
    rep.add("(a) tanh branch residual", worst, 1e-5)
    for axis_index, strength, V, c in axis_trajectories():
        s = np.linspace(0.25, c.domain[1] - 0.25, 191)
        delta0 = float(inner(V.at(c(0.0)), normalize(c.velocity(0.0), M), M))
        res = curvature_ode_residual(SampledPath(s, geodesic_curvature(c, s)), delta0)
        rep.add(f"(b) axis {'xyz'[axis_index]} strength {strength:g}", res, 1e-5, detail=f"delta={delta0:+.3f}")
    return rep


def criterion_7() -> VerificationReport:
    rep = VerificationReport("7 conservation")
    axis_c = integrate_magnetic_trajectory(
        KillingField.axis_generated(coordinate_axis(2, M), 1.0, M),
        normalize(np.array([1.0, 0.5, 0.3]), M),
        _tangent_at(normalize(np.array([1.0, 0.5, 0.3]), M), _rng(7), M),
        20.0, tolerance=1e-10,
    )
    for name, c in (("axis field", axis_c), ("frame field", magnetic_example()[1])):
        pts = c.path.states
        vel = c.info["extras"]["t"]
        rep.add(f"{name} on-sphere drift", float(np.max(np.abs(inner(pts, pts, M) - 1))), 1e-8)
        rep.add(f"{name} speed drift", float(np.max(np.abs(inner(vel, vel, M) - 1))), 1e-8)
    return rep


def criterion_8() -> VerificationReport:
    rep = VerificationReport("8 cot identity")
    worst = 0.0
    control = np.inf
    for k in (0.3, 0.5, 0.9):
        path = sample_profile(cot_profile(k), 0.5 / k, (np.pi - 0.5) / k, 2001)
        worst = max(worst, curvature_ode_residual(path, 2 * k))
        control = min(control, curvature_ode_residual(path, 2 * k + 0.1))
    rep.add("residual at delta = 2k", worst, 1e-5)
    rep.add("negative control at delta = 2k + 0.1", control, 1e-2, mode="min")
    return rep


def criterion_9() -> VerificationReport:
    rep = VerificationReport("9 frame_integrate round trip")
    profiles = [(f"constant {c:.4g}", constant_profile(c)) for c in (0.0, 1.0, math.sqrt(2))]
    profiles += [("tanh 1,1,-2", tanh_profile(1.0, 1.0, -2.0)), ("tanh 2,0.5,-1", tanh_profile(2.0, 0.5, -1.0))]
    for name, prof in profiles:
        c = frame_integrate(prof, equator_frame(M), 4.0, M)
        s = c.grid(200, 0.05)
        rep.add(f"{name} k_g sup error", float(np.max(np.abs(geodesic_curvature(c, s) - prof(s)))), 1e-5)
        if name.startswith("constant"):
            rep.add(f"{name} third-order ODE", third_order_residual(c, prof, s), 1e-4)
    return rep


def _invariance_curves():
    return [
        helix(HelixParams(0.5, M)),
        satellite(SatelliteParams(1.8, 2.0, M)),
        example_circle(1, M),
        cycloid(CycloidParams.spherical(4, 3, M)),
        linear_kg_curve(M),
    ]


def criterion_10() -> VerificationReport:
    rep = VerificationReport("10 isometry invariance")
    rng = _rng(10)
    for c in _invariance_curves():
        margin = 0.01 * (c.domain[1] - c.domain[0]) if c.is_sampled else 0.0
        s = regular_samples(c, 100, margin=margin)
        kg = geodesic_curvature(c, s)
        worst = 0.0
        for _ in range(5):
            R = elliptical_rotation(RotationSpec(random_unit_axis(rng, M), rng.uniform(-np.pi, np.pi), M))
            worst = max(worst, float(np.max(np.abs(geodesic_curvature(c.transformed(R), s) - kg))))
        rep.add(f"{c.label}", worst, 1e-8)
    return rep


def criterion_11() -> VerificationReport:
    rep = VerificationReport("11 family identities")
    t = np.linspace(0.0, 40.0, 2000)
    rep.add("helix composed vs closed",
            max(float(np.max(np.abs(helix_composed(t, HelixParams(k, M)) - helix_closed_form(t, HelixParams(k, M)))))
                for k in HELIX_K), 1e-10)
    rep.add("cycloid composed vs closed",
            max(float(np.max(np.abs(cycloid_composed(t, p) - cycloid_closed_form(t, p))))
                for p in (CycloidParams.spherical(a, b, M) for a, b in CYCLOID_PAIRS)), 1e-10)
    Rpi = np.diag([-1.0, -1.0, 1.0])
    rep.add("satellite(cos alpha = -k) vs R_pi helix(k)",
            max(float(np.max(np.abs(satellite_closed_form(t, SatelliteParams(math.acos(-k), k, M))
                                    - helix_closed_form(t, HelixParams(k, M)) @ Rpi.T)))
                for k in HELIX_K), 1e-10)
    for a, b in CYCLOID_PAIRS:
        p = CycloidParams.spherical(a, b, M)
        tt = np.linspace(0.0, 2 * np.pi * 100, 20000)
        rep.add(f"spherical cycloid a={a:g} b={b:g} radius", float(np.max(np.abs(norm(cycloid_closed_form(tt, p), M) - a))), 1e-9)
    return rep


def criterion_12() -> VerificationReport:
    rep = VerificationReport("12 oracle equivalence")
    from .darboux import round_geodesic_curvature

    for name, c in _gallery():
        margin = 0.01 * (c.domain[1] - c.domain[0]) if c.is_sampled else 0.0
        s = regular_samples(c, 100, margin=margin)
        rep.add(name, float(np.max(np.abs(geodesic_curvature(c, s) - round_geodesic_curvature(c, s)))), 1e-5)
    return rep


def criterion_13() -> VerificationReport:
    rep = VerificationReport("13 recorded discrepancy")
    report = circle_curvature_report(1, M)
    has_nominal = isinstance(report.get("nominal_kg"), float) and abs(report["nominal_kg"] - math.sqrt(2)) < 1e-15
    has_measured = isinstance(report.get("arclength_kg"), float) and math.isfinite(report["arclength_kg"])
    flagged = bool(report.get("open_question"))
    rep.add("nominal value sqrt(2) present", 0.0 if has_nominal else 1.0, 0.0,
            detail=f"nominal={report.get('nominal_kg')}")
    rep.add("arclength value present", 0.0 if has_measured else 1.0, 0.0,
            detail=f"arclength={report.get('arclength_kg')}")
    rep.add("flagged as open question", 0.0 if flagged else 1.0, 0.0)
    return rep


def criterion_14(out_dir=None) -> VerificationReport:
    rep = VerificationReport("14 gallery reproduction")
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(out_dir or tmp)
        overall = write_gallery(target, M, samples=500)
        csvs = sorted(target.glob("*.csv"))
        rep.add("curves emitted", float(len(csvs)), 26.0, mode="min")
        rep.add("curves emitted (upper)", float(len(csvs)), 26.0)
        rows_ok = all(read_curve_csv(p)["points"].shape == (500, 3) for p in csvs)
        rep.add("every CSV readable with all rows", 0.0 if rows_ok else 1.0, 0.0)
        rep.add("failed per-curve checks", float(sum(not c.passed for c in overall.checks)), 0.0,
                detail=f"{len(overall.checks)} checks")
    return rep


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13, criterion_14]


def run_acceptance(verbose: bool = False) -> VerificationReport:
    overall = VerificationReport("acceptance")
    for fn in CRITERIA:
        t0 = time.perf_counter()
        rep = fn()
        if verbose:
            print(f"{'PASS' if rep.passed else 'FAIL'}  criterion {rep.title} ({time.perf_counter() - t0:.1f}s)")
        overall.extend(rep, prefix=f"[{rep.title}] ")
    return overall
