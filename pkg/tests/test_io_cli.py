import json
import math

import numpy as np
import pytest

from ellipsoid_traj.cli import main
from ellipsoid_traj.io import (
    ellipsoid_mesh,
    euler_characteristic,
    read_curve_csv,
    read_json,
    read_obj,
    sidecar_path,
    write_curve_csv,
    write_json,
    write_obj,
)
from ellipsoid_traj.metric import EllipticMetric, inner, norm
from ellipsoid_traj.numerics import TOL_ENV_VAR


class TestCsv:
    def test_bit_exact_round_trip(self, tmp_path, rng):
        s = np.sort(rng.uniform(0, 10, 50))
        pts, t, y = rng.normal(size=(3, 50, 3))
        kg = rng.normal(size=50) * 1e-7
        path = write_curve_csv(tmp_path / "c.csv", s, pts, t, y, kg)
        back = read_curve_csv(path)
        for key, ref in (("s", s), ("points", pts), ("t", t), ("y", y), ("kg", kg)):
            np.testing.assert_array_equal(back[key], ref)

    def test_header_and_line_endings(self, tmp_path):
        path = write_curve_csv(tmp_path / "c.csv", [0.0, 1.0], np.zeros((2, 3)))
        raw = path.read_bytes()
        assert raw.startswith(b"s,x,y,z\n")
        assert b"\r" not in raw
        assert "t" not in read_curve_csv(path)

    def test_partial_frame_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_curve_csv(tmp_path / "c.csv", [0.0], np.zeros((1, 3)), t=np.zeros((1, 3)))

    def test_bad_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b,c,d\n1,2,3,4\n")
        with pytest.raises(ValueError):
            read_curve_csv(p)


class TestJson:
    def test_sidecar_name(self):
        assert sidecar_path("out/helix.csv").name == "helix.json"

    def test_numpy_and_nonfinite(self, tmp_path):
        p = write_json(tmp_path / "m.json", {"a": np.arange(3), "r": float("nan"), "f": np.float64(0.5),
                                             "ok": np.bool_(True)})
        assert read_json(p) == {"a": [0, 1, 2], "r": "nan", "f": 0.5, "ok": True}


class TestMesh:
    def test_round_sphere_unit_norms(self):
        verts, _ = ellipsoid_mesh(EllipticMetric(1.0, 1.0, 1.0), 8)
        np.testing.assert_allclose(np.linalg.norm(verts, axis=1), 1.0, atol=1e-15)

    def test_on_unit_b_sphere(self, m):
        verts, _ = ellipsoid_mesh(m, 16)
        np.testing.assert_allclose(inner(verts, verts, m), 1.0, atol=1e-12)

    def test_resolution_and_topology(self, m, tmp_path):
        verts, faces = ellipsoid_mesh(m, 64)
        assert verts.shape == (64 * 128, 3)
        assert euler_characteristic(verts, faces) == 2
        v2, f2 = read_obj(write_obj(tmp_path / "e.obj", verts, faces))
        np.testing.assert_array_equal(v2, verts)
        np.testing.assert_array_equal(f2, faces)

    def test_outward_orientation(self, m):
        verts, faces = ellipsoid_mesh(m, 12)
        tri = verts[faces]
        normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        assert np.all(np.einsum("ij,ij->i", normal, tri.mean(axis=1)) > 0)

    def test_too_coarse(self, m):
        with pytest.raises(ValueError):
            ellipsoid_mesh(m, 3)


@pytest.fixture
def tol_env(monkeypatch):
    # the CLI writes --tol into the environment; restore it afterwards
    monkeypatch.setenv(TOL_ENV_VAR, "1e-10")
    monkeypatch.delenv(TOL_ENV_VAR)
    return monkeypatch


class TestCli:
    def test_generate_helix(self, tmp_path, capsys):
        out = tmp_path / "helix.csv"
        assert main(["generate", "helix", "--k", "0.5", "--samples", "2000", "--out", str(out)]) == 0
        data = read_curve_csv(out)
        assert data["points"].shape == (2000, 3)
        m = EllipticMetric(4.0, 9.0, 16.0)
        np.testing.assert_allclose(norm(data["points"], m), 1.0, atol=1e-12)
        meta = read_json(sidecar_path(out))
        assert meta["family"] == "helix" and meta["params"]["k"] == 0.5
        assert meta["metric"] == [4.0, 9.0, 16.0]

    def test_generate_spherical_cycloid(self, tmp_path):
        out = tmp_path / "cyc.csv"
        rc = main(["generate", "cycloid", "--a", "4", "--b", "3", "--omega-mode", "spherical",
                   "--metric", "1,2,3", "--samples", "300", "--frames", "--out", str(out)])
        assert rc == 0
        meta = read_json(sidecar_path(out))
        assert meta["params"]["omega"] == pytest.approx(math.acos(-0.75))
        assert meta["radius"] == 4.0
        assert "kg" in read_curve_csv(out)

    def test_generate_circle(self, tmp_path, capsys):
        out = tmp_path / "circle.csv"
        assert main(["generate", "circle", "--example", "4.1", "--samples", "100", "--out", str(out)]) == 0
        assert read_curve_csv(out)["points"].shape == (100, 3)

    def test_verify_good_and_corrupted_file(self, tmp_path, capsys):
        out = tmp_path / "sat.csv"
        assert main(["generate", "satellite", "--samples", "400", "--out", str(out)]) == 0
        assert main(["verify", "curve", "--in", str(out)]) == 0
        lines = out.read_text().splitlines()
        row = lines[10].split(",")
        row[1] = repr(float(row[1]) * 1.001)
        lines[10] = ",".join(row)
        out.write_text("\n".join(lines) + "\n")
        report = tmp_path / "report.json"
        assert main(["verify", "curve", "--in", str(out), "--out", str(report)]) == 1
        assert read_json(report)["passed"] is False

    def test_verify_families(self, capsys):
        assert main(["verify", "helix", "--k", "0.56"]) == 0
        assert main(["verify", "circle", "--example", "4.2"]) == 0
        assert "arclength k_g" in capsys.readouterr().out

    def test_magnetic_scan(self, tmp_path, capsys):
        report = tmp_path / "mag.json"
        rc = main(["verify", "magnetic", "--axis", "0,0,1", "--delta-scan", "0:1:0.5", "--traj-length", "4",
                   "--out", str(report)])
        assert rc == 0
        names = [c["name"] for c in read_json(report)["checks"]]
        assert sum("curvature ODE" in n for n in names) == 3

    def test_mesh(self, tmp_path, capsys):
        out = tmp_path / "e.obj"
        assert main(["mesh", "--resolution", "8", "--out", str(out)]) == 0
        verts, faces = read_obj(out)
        assert verts.shape == (128, 3)

    def test_gallery(self, tmp_path, capsys):
        assert main(["gallery", "--out", str(tmp_path), "--samples", "200"]) == 0
        index = json.loads((tmp_path / "index.json").read_text())
        assert len(index["curves"]) == 26 and all(c["passed"] for c in index["curves"])
        assert len(list(tmp_path.glob("*.csv"))) == 26

    def test_invalid_parameters(self, tmp_path, capsys):
        assert main(["generate", "helix", "--k", "1.5", "--out", str(tmp_path / "h.csv")]) == 2
        assert "0 < k < 1" in capsys.readouterr().err
        assert main(["verify", "curve"]) == 2
        assert main(["verify", "curve", "--in", str(tmp_path / "missing.csv")]) == 2

    def test_argument_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["generate", "helix", "--metric", "1,-2,3"])
        assert info.value.code == 2

    def test_tolerance_flag_reaches_integrator(self, tmp_path, tol_env, capsys):
        import os

        assert main(["verify", "linear", "--tol", "1e-9", "--length", "2"]) == 0
        assert float(os.environ[TOL_ENV_VAR]) == 1e-9
