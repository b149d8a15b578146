import math

import numpy as np
import pytest

from ellipsoid_traj.darboux import geodesic_curvature, regular_samples
from ellipsoid_traj.errors import DomainError, InvariantError
from ellipsoid_traj.families import (
    CircleParams,
    CycloidParams,
    HelixParams,
    SatelliteParams,
    circle_constant_kg,
    circle_curvature_report,
    cycloid,
    cycloid_closed_form,
    cycloid_composed,
    helix,
    helix_closed_form,
    helix_composed,
    helix_epicyclic_form,
    linear_kg_curve,
    satellite,
    satellite_closed_form,
    satellite_composed,
    spherical_omega,
)
from ellipsoid_traj.gallery import CYCLOID_PAIRS, HELIX_K, SATELLITE_PARAMS, gallery_curves
from ellipsoid_traj.metric import EllipticMetric, norm, to_round

T = np.linspace(-7.0, 7.0, 401)
ROUND = EllipticMetric(1.0, 1.0, 1.0)


class TestGallery:
    def test_every_curve_on_its_sphere(self, m):
        curves = gallery_curves(m)
        assert len(curves) == 26
        for name, c in curves:
            assert c.sphere_residual() <= 1e-9 * c.radius**2, name


class TestHelix:
    @pytest.mark.parametrize("k", HELIX_K)
    def test_forms_agree(self, m, k):
        p = HelixParams(k, m)
        np.testing.assert_allclose(helix_composed(T, p), helix_closed_form(T, p), atol=1e-12)
        np.testing.assert_allclose(helix_epicyclic_form(T, p), helix_closed_form(T, p), atol=1e-14)

    @pytest.mark.parametrize("k", [0.0, 1.0, -0.2, 1.5])
    def test_domain(self, m, k):
        with pytest.raises(DomainError):
            HelixParams(k, m)

    def test_cusps_have_zero_speed(self, m):
        c = helix(HelixParams(0.4, m))
        cusps = c.info["cusps"]
        assert cusps == pytest.approx([0.0, math.pi / 0.4, 2 * math.pi / 0.4])
        assert np.max(c.speed(np.array(cusps))) <= 1e-8
        assert np.min(c.speed(regular_samples(c, 50))) > 1e-2

    def test_round_image_is_round_helix(self, m):
        p = HelixParams(0.6, m)
        np.testing.assert_allclose(to_round(helix_closed_form(T, p), m),
                                   helix_closed_form(T, HelixParams(0.6, ROUND)), atol=1e-14)

    def test_radius_scales(self, m):
        c = helix(HelixParams(0.5, m, R=2.5))
        np.testing.assert_allclose(norm(c(c.grid(50)), m), 2.5, atol=1e-12)

    def test_constant_slope_against_axis(self, m):
        # the unit tangent makes a constant B-angle with the z axis
        k = 0.3
        c = helix(HelixParams(k, m))
        s = regular_samples(c, 60)
        v = c.velocity(s)
        cos_angle = v[:, 2] * m.sqrt_coeffs[2] / norm(v, m)
        np.testing.assert_allclose(np.abs(cos_angle), k, atol=1e-8)


class TestSatellite:
    @pytest.mark.parametrize("alpha,k", SATELLITE_PARAMS)
    def test_forms_agree(self, m, alpha, k):
        p = SatelliteParams(alpha, k, m)
        np.testing.assert_allclose(satellite_composed(T, p), satellite_closed_form(T, p), atol=1e-12)

    @pytest.mark.parametrize("k", [0.3, 0.5, 0.9])
    def test_helix_congruence(self, m, k):
        sat = satellite_closed_form(T, SatelliteParams(math.acos(-k), k, m))
        hel = helix_closed_form(T, HelixParams(k, m))
        np.testing.assert_allclose(sat, hel * np.array([-1.0, -1.0, 1.0]), atol=1e-15)

    def test_cusps_only_in_helix_case(self, m):
        assert satellite(SatelliteParams(1.8, 2.0, m)).info["cusps"] == []
        c = satellite(SatelliteParams(math.acos(-0.5), 0.5, m))
        assert c.info["cusps"] == pytest.approx([0.0, 2 * math.pi, 4 * math.pi])

    def test_closing_period(self, m):
        c = satellite(SatelliteParams(2.1, 0.5, m))
        assert c.domain == pytest.approx((0.0, 4 * math.pi))
        np.testing.assert_allclose(c(c.domain[1]), c(0.0), atol=1e-12)


class TestCycloid:
    @pytest.mark.parametrize("a,b", CYCLOID_PAIRS)
    def test_spherical(self, m, a, b):
        p = CycloidParams.spherical(a, b, m)
        assert p.is_spherical
        np.testing.assert_allclose(cycloid_composed(T, p), cycloid_closed_form(T, p), atol=1e-11 * a)
        np.testing.assert_allclose(norm(cycloid_closed_form(T, p), m), a, rtol=1e-12)

    def test_spherical_omega(self):
        assert spherical_omega(4.0, 3.0) == pytest.approx(math.acos(-0.75))
        with pytest.raises(DomainError):
            spherical_omega(2.0, 3.0)

    def test_epicycloid(self):
        a, b = 3.0, 1.0
        x = cycloid_closed_form(T, CycloidParams(a, b, 0.0, ROUND))
        q1 = (a + b) / b
        expected = np.stack([(a + b) * np.cos(T) - b * np.cos(q1 * T),
                             (a + b) * np.sin(T) - b * np.sin(q1 * T), 0 * T], -1)
        np.testing.assert_allclose(x, expected, atol=1e-13)

    def test_hypocycloid(self):
        a, b = 5.0, 2.0
        x = cycloid_closed_form(T, CycloidParams(a, b, math.pi, ROUND))
        q1 = (a - b) / b
        expected = np.stack([(a - b) * np.cos(T) + b * np.cos(q1 * T),
                             (a - b) * np.sin(T) - b * np.sin(q1 * T), 0 * T], -1)
        np.testing.assert_allclose(x, expected, atol=1e-13)

    def test_non_spherical_radius_is_nan(self, m):
        c = cycloid(CycloidParams(4.0, 3.0, 0.0, m))
        assert not c.info["spherical"]
        assert math.isnan(c.radius)

    def test_cusps_at_rest(self, m):
        c = cycloid(CycloidParams.spherical(4.0, 2.0, m))
        assert np.max(c.speed(np.array(c.info["cusps"]))) <= 1e-7

    def test_bad_radii(self, m):
        with pytest.raises(DomainError):
            CycloidParams(-1.0, 1.0, 0.0, m)


class TestCircles:
    def test_rejects_off_sphere(self, m):
        e = np.eye(3)
        with pytest.raises(InvariantError):
            circle_constant_kg(CircleParams(e[0], e[1], e[2], 1.0, m))

    def test_needs_metric(self):
        e = np.eye(3)
        with pytest.raises(DomainError):
            circle_constant_kg(CircleParams(e[0], e[1], e[2], 1.0))

    @pytest.mark.parametrize("which", [1, 2])
    def test_report(self, m, which):
        rep = circle_curvature_report(which, m)
        assert rep["nominal_kg"] == pytest.approx(math.sqrt(2))
        assert abs(rep["arclength_kg"]) == pytest.approx(1.0, abs=1e-7)
        assert rep["round_oracle_kg"] == pytest.approx(1.0)
        assert rep["speed"] == pytest.approx(3 / math.sqrt(2))
        assert rep["arclength_kg_spread"] <= 1e-7


class TestLinear:
    def test_kg_equals_s(self, m):
        c = linear_kg_curve(m, length=3.0)
        assert float(geodesic_curvature(c, 2.0)) == pytest.approx(2.0, abs=1e-4)
        assert c.info["family"] == "linear_kg"
        assert c.sphere_residual() <= 1e-8
