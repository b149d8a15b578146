import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipsoid_traj.curve import Curve
from ellipsoid_traj.darboux import (
    GEODESIC_TORSION,
    NORMAL_CURVATURE,
    DarbouxFrame,
    check_frame,
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
    regular_samples,
    round_geodesic_curvature,
    tanh_profile,
    third_order_residual,
)
from ellipsoid_traj.errors import DomainError, InvariantError, RegularityError, SingularityError
from ellipsoid_traj.families import HelixParams, example_circle, helix
from ellipsoid_traj.metric import EllipticMetric, RotationSpec, cross_e, inner, norm, random_unit_axis


def great_ellipse(m, length=2 * math.pi):
    sq = m.sqrt_coeffs
    return Curve(m, lambda s: np.stack([np.cos(s) / sq[0], np.sin(s) / sq[1], 0 * s], -1), (0.0, length),
                 unit_speed=True, label="equator")


def round_latitude(m, z0):
    # round-sphere latitude circle pulled back to the ellipsoid, unit speed
    r = math.sqrt(1 - z0 * z0)
    sq = m.sqrt_coeffs
    return Curve(m, lambda s: np.stack([r * np.cos(s / r), r * np.sin(s / r), z0 + 0 * s], -1) / sq,
                 (0.0, 2 * math.pi * r), unit_speed=True)


class TestConstants:
    def test_fixed_curvatures(self):
        assert NORMAL_CURVATURE == -1.0
        assert GEODESIC_TORSION == 0.0


class TestFrame:
    def test_equator_frame_example(self, m):
        fr = frame_at(great_ellipse(m), 0.0)
        np.testing.assert_allclose(fr.t, [0, 1 / 3, 0], atol=1e-12)
        np.testing.assert_allclose(fr.gamma, [0.5, 0, 0], atol=1e-15)
        np.testing.assert_allclose(fr.y, cross_e(fr.t, fr.gamma, m), atol=1e-15)

    def test_handedness_relations(self, m):
        fr = equator_frame(m)
        np.testing.assert_allclose(cross_e(fr.y, fr.t, m), fr.gamma, atol=1e-14)
        np.testing.assert_allclose(cross_e(fr.gamma, fr.y, m), fr.t, atol=1e-14)
        np.testing.assert_allclose(cross_e(fr.gamma, fr.t, m), -fr.y, atol=1e-14)

    def test_check_frame_rejects_left_handed(self, m):
        fr = equator_frame(m)
        with pytest.raises(InvariantError):
            check_frame(DarbouxFrame(fr.t, fr.gamma, -fr.y), m)

    @settings(max_examples=50)
    @given(st.integers(min_value=0, max_value=10**6))
    def test_frames_on_helix_are_orthonormal(self, seed):
        m = EllipticMetric(4.0, 9.0, 16.0)
        c = helix(HelixParams(0.5, m))
        s = np.random.default_rng(seed).uniform(0.3, 2 * math.pi - 0.3, size=8)
        fr = frame_at(c, s)
        assert max(frame_defects(fr, m).values()) <= 1e-8
        rnd = fr.to_round(m)
        Q = np.stack([rnd.t, rnd.gamma, rnd.y], axis=-1)
        np.testing.assert_allclose(np.einsum("nij,nik->njk", Q, Q), np.broadcast_to(np.eye(3), Q.shape), atol=1e-9)

    def test_from_point_tangent_projects(self, m, rng):
        p = rng.normal(size=3)
        fr = DarbouxFrame.from_point_tangent(p, rng.normal(size=3), m)
        check_frame(fr, m)

    def test_no_frame_at_cusp(self, m):
        with pytest.raises(RegularityError):
            frame_at(helix(HelixParams(0.5, m)), 0.0)


class TestGeodesicCurvature:
    def test_great_ellipse_is_geodesic(self, m):
        c = great_ellipse(m)
        assert np.max(np.abs(geodesic_curvature(c, c.grid(50)))) <= 1e-5

    @pytest.mark.parametrize("z0", [0.3, 1 / math.sqrt(2), -0.6])
    def test_latitude_oracle(self, m, z0):
        # round-sphere latitude circle at height z0 has |k_g| = z0 / sqrt(1 - z0^2)
        c = round_latitude(m, z0)
        kg = geodesic_curvature(c, c.grid(40))
        np.testing.assert_allclose(np.abs(kg), abs(z0) / math.sqrt(1 - z0 * z0), atol=1e-7)

    def test_example_circles_arclength_value(self, m):
        for which, sign in ((1, -1.0), (2, 1.0)):
            c = example_circle(which, m)
            np.testing.assert_allclose(geodesic_curvature(c, c.grid(30)), sign, atol=1e-7)

    def test_reparameterization_invariant(self, m):
        c = example_circle(1, m)
        slow = Curve(m, lambda u: c.position(u**2), (0.3, 1.2))
        u = np.linspace(0.4, 1.1, 9)
        np.testing.assert_allclose(geodesic_curvature(slow, u), geodesic_curvature(c, u**2), atol=1e-7)

    def test_round_oracle_on_rotated_helix(self, m, rng):
        R = RotationSpec(random_unit_axis(rng, m), 1.1, m).matrix()
        c = helix(HelixParams(0.3, m)).transformed(R)
        s = regular_samples(c, 60)
        np.testing.assert_allclose(geodesic_curvature(c, s), round_geodesic_curvature(c, s), atol=1e-5)


class TestFrameResidual:
    def test_equator(self, m):
        assert max(frame_ode_residual(great_ellipse(m))) <= 1e-5

    def test_example_circle(self, m):
        assert max(frame_ode_residual(example_circle(2, m))) <= 1e-4

    def test_detects_wrong_curvature_sign(self, m):
        # a curve whose t' disagrees with the frame equations in a controlled way:
        # a great ellipse traversed at speed 2 is still a geodesic, residuals stay small,
        # but a non-spherical helix-like curve is not on the sphere and breaks gamma' = t
        c = Curve(m, lambda s: np.stack([np.cos(s), np.sin(s), 0.5 * s], -1) / 3, (0.0, 3.0))
        assert max(frame_ode_residual(c)) > 1e-2


class TestProfiles:
    def test_tanh_domain(self):
        with pytest.raises(DomainError):
            tanh_profile(-1.0, 1.0)
        with pytest.raises(DomainError):
            tanh_profile(1.0, 0.0)

    def test_tanh_limits(self):
        p = tanh_profile(2.0, 0.5, 0.3)
        assert p(200.0) == pytest.approx(math.sqrt(0.5))
        assert p(-200.0) == pytest.approx(-math.sqrt(0.5))

    def test_cot_poles(self):
        p = cot_profile(0.5)
        assert p.singularities(0.1, 13.0) == pytest.approx([2 * math.pi, 4 * math.pi])
        assert p.singularities(0.1, 6.0) == []

    def test_nonfinite_profile_detected(self):
        from ellipsoid_traj.darboux import CurvatureProfile

        p = CurvatureProfile(lambda s: 1.0 / (np.asarray(s) - 1.0), "pole at 1")
        assert p.singularities(0.0, 2.0) == [1.0]


class TestFrameIntegrate:
    def test_geodesic_reproduces_equator(self, m):
        c = frame_integrate(constant_profile(0.0), equator_frame(m), 2 * math.pi, m)
        np.testing.assert_allclose(c.path.states, great_ellipse(m)(c.path.params), atol=1e-7)

    @pytest.mark.parametrize("k", [0.0, 1.0, math.sqrt(2)])
    def test_constant_profile(self, m, k):
        prof = constant_profile(k)
        c = frame_integrate(prof, equator_frame(m), 5.0, m)
        assert c.sphere_residual() <= 1e-8
        s = c.grid(100, 0.05)
        np.testing.assert_allclose(c.speed(s), 1.0, atol=1e-6)
        np.testing.assert_allclose(geodesic_curvature(c, s), k, atol=1e-5)
        assert third_order_residual(c, prof, s) <= 1e-4
        assert max(frame_ode_residual(c, s=s)) <= 1e-7

    def test_tanh_round_trip_and_general_ode(self, m):
        prof = tanh_profile(1.0, 1.0, -2.0)
        c = frame_integrate(prof, equator_frame(m), 4.0, m)
        s = c.grid(150, 0.05)
        np.testing.assert_allclose(geodesic_curvature(c, s), prof(s), atol=1e-5)
        assert third_order_residual(c, prof, s) <= 1e-4

    def test_linear_profile_frame_extras(self, m):
        c = frame_integrate(linear_profile(1.0), equator_frame(m, s=-1.0), 3.0, m)
        ex = c.info["extras"]
        fr = DarbouxFrame(ex["t"], c.path.states, ex["y"])
        assert max(frame_defects(fr, m).values()) <= 1e-8
        np.testing.assert_allclose(ex["kg"], c.path.params)
        assert c.domain == (-1.0, 2.0)

    def test_refuses_pole(self, m):
        with pytest.raises(SingularityError):
            frame_integrate(cot_profile(1.0), equator_frame(m, s=0.5), 4.0, m)

    def test_rejects_bad_initial_frame(self, m):
        fr = equator_frame(m)
        with pytest.raises(InvariantError):
            frame_integrate(constant_profile(1.0), DarbouxFrame(fr.t, fr.gamma, -fr.y), 1.0, m)

    def test_rejects_nonpositive_length(self, m):
        with pytest.raises(DomainError):
            frame_integrate(constant_profile(1.0), equator_frame(m), 0.0, m)


class TestFlowByRotation:
    def test_angle_zero(self, m):
        c = helix(HelixParams(0.5, m))
        spec = RotationSpec(random_unit_axis(np.random.default_rng(1), m), 0.0, m)
        s = c.grid(50)
        np.testing.assert_allclose(flow_by_rotation(c, spec)(s), c(s), atol=1e-15)

    @pytest.mark.parametrize("seed", range(4))
    def test_preserves_speed_and_curvature(self, m, seed):
        rng = np.random.default_rng(seed)
        spec = RotationSpec(random_unit_axis(rng, m), rng.uniform(-3, 3), m)
        c = example_circle(1, m)
        r = flow_by_rotation(c, spec)
        s = c.grid(60)
        np.testing.assert_allclose(r.speed(s), c.speed(s), atol=1e-10)
        np.testing.assert_allclose(geodesic_curvature(r, s), geodesic_curvature(c, s), atol=1e-8)
        assert r.sphere_residual() <= 1e-12

    def test_sampled_curve_rotates_extras(self, m):
        c = frame_integrate(constant_profile(0.5), equator_frame(m), 2.0, m)
        spec = RotationSpec(random_unit_axis(np.random.default_rng(3), m), 0.8, m)
        r = flow_by_rotation(c, spec)
        ex = r.info["extras"]
        fr = DarbouxFrame(ex["t"], r.path.states, ex["y"])
        assert max(frame_defects(fr, m).values()) <= 1e-8
        np.testing.assert_allclose(norm(r.path.states, m), 1.0, atol=1e-12)
        np.testing.assert_allclose(inner(ex["t"], r.path.states, m), 0.0, atol=1e-10)
