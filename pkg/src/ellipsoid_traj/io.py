"""CSV, JSON and OBJ writers/readers for curves and meshes."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .metric import EllipticMetric

CSV_BASE = ["s", "x", "y", "z"]
CSV_FRAME = ["tx", "ty", "tz", "yx", "yy", "yz", "kg"]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_curve_csv(path, s, points, t=None, y=None, kg=None) -> Path:
    """Write ``s,x,y,z[,tx,ty,tz,yx,yy,yz,kg]`` with 17 significant digits."""
    path = Path(path)
    s = np.asarray(s, dtype=float)
    cols = [s[:, None], np.asarray(points, dtype=float)]
    header = list(CSV_BASE)
    if t is not None:
        if y is None or kg is None:
            raise ValueError("frame columns need t, y and kg together")
        cols += [np.asarray(t, dtype=float), np.asarray(y, dtype=float), np.asarray(kg, dtype=float)[:, None]]
        header += CSV_FRAME
    table = np.hstack(cols)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in table:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write curve CSV {path}: {exc}") from exc
    return path


def read_curve_csv(path) -> dict:
    """Read a curve CSV back into ``{"s": ..., "points": ..., optional frame columns}``."""
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            rows = [line.strip().split(",") for line in fh if line.strip()]
    except OSError as exc:
        raise OSError(f"cannot read curve CSV {path}: {exc}") from exc
    if header[:4] != CSV_BASE:
        raise ValueError(f"{path}: unexpected header {header!r}")
    data = np.array([[float(v) for v in r] for r in rows]) if rows else np.zeros((0, len(header)))
    out = {"s": data[:, 0], "points": data[:, 1:4]}
    if header[4:] == CSV_FRAME:
        out["t"] = data[:, 4:7]
        out["y"] = data[:, 7:10]
        out["kg"] = data[:, 10]
    return out


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(_jsonable(payload), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON {path}: {exc}") from exc
    return path


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def ellipsoid_mesh(m: EllipticMetric, resolution: int):
    """UV-sphere grid of ``resolution x 2*resolution`` vertices on the unit B-sphere.

    Pole rows are kept as repeated vertices; faces touching a pole are
    emitted as single triangles so the surface closes once poles are welded.
    Returns ``(vertices, faces)`` with 0-based face indices.
    """
    if resolution < 4:
        raise ValueError("mesh resolution must be at least 4")
    nlat, nlon = resolution, 2 * resolution
    phi = np.linspace(0.0, math.pi, nlat)
    lam = np.arange(nlon) * (2 * math.pi / nlon)
    P, L = np.meshgrid(phi, lam, indexing="ij")
    unit = np.stack([np.sin(P) * np.cos(L), np.sin(P) * np.sin(L), np.cos(P)], axis=-1)
    verts = (unit / m.sqrt_coeffs).reshape(-1, 3)

    def vid(i, j):
        return i * nlon + (j % nlon)

    faces = []
    for i in range(nlat - 1):
        for j in range(nlon):
            a, b, c, d = vid(i, j), vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1)
            if i == 0:
                faces.append((a, c, d))
            elif i == nlat - 2:
                faces.append((a, c, b))
            else:
                faces.append((a, c, d))
                faces.append((a, d, b))
    return verts, np.array(faces, dtype=int)


def write_obj(path, vertices, faces) -> Path:
    """ASCII Wavefront OBJ with ``v`` and ``f`` records only (1-based indices)."""
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            for v in vertices:
                fh.write("v " + " ".join(_fmt(c) for c in v) + "\n")
            for f in faces:
                fh.write("f " + " ".join(str(int(i) + 1) for i in f) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write OBJ {path}: {exc}") from exc
    return path


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
    return np.array(verts), np.array(faces, dtype=int)


def euler_characteristic(vertices, faces, weld_tol: float = 1e-12) -> int:
    """V - E + F after merging coincident vertices (welds the pole rows)."""
    key = np.round(np.asarray(vertices) / weld_tol).astype(np.int64)
    _, inverse = np.unique(key, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    f = inverse[np.asarray(faces)]
    f = f[(f[:, 0] != f[:, 1]) & (f[:, 1] != f[:, 2]) & (f[:, 0] != f[:, 2])]
    edges = {tuple(sorted((int(a), int(b)))) for tri in f for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0]))}
    n_vertices = np.unique(f).size
    return n_vertices - len(edges) + len(f)
