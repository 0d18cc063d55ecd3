import math

import numpy as np
import pytest

from slipline_lab.catalog import (
    REGISTRY,
    acceptance_fields,
    build_field,
    channel_half_angle,
    nadai_cavity_field,
    nadai_channel_field,
    nadai_channel_singular_field,
    nadai_two_circles_field,
    nadai_vortex_field,
    prandtl_field,
    revuzhenko_envelope_eta,
    revuzhenko_field,
    revuzhenko_map,
    simple_wave_field,
    spiral_field,
    spiral_profile_closed,
    spiral_simple_wave_field,
    two_circles_constants,
    two_circles_f_closed,
)
from slipline_lab.core import (
    DegenerateSimpleWave,
    DomainError,
    MultipleRoots,
    SingularCoords,
    UnsupportedField,
    ZERO_FN,
    cart,
    polar,
)

SQRT2 = math.sqrt(2.0)


class TestPrandtl:
    def test_center_point(self):
        f = prandtl_field()
        sigma, theta = f.eval_fn(0.0, 0.0)
        assert sigma == pytest.approx(0.5)
        assert theta == pytest.approx(-math.pi / 4)

    def test_plate_tractions(self):
        f = prandtl_field()
        sigma, theta = f.eval_fn(1.0, 1.0)
        assert sigma == pytest.approx(-0.5)
        assert theta == pytest.approx(0.0)
        assert f.full_stress(cart(1.0, 1.0)).tau_xy == pytest.approx(0.5)
        assert f.full_stress(cart(0.0, -1.0)).tau_xy == pytest.approx(-0.5)

    def test_general_parameters_keep_wall_traction(self):
        f = prandtl_field(c=1.5, m=0.6, h=2.0, k=1.2)
        for x in (-1.0, 2.0):
            assert f.full_stress(cart(x, 2.0)).tau_xy == pytest.approx(0.6 * 1.2)
            assert f.full_stress(cart(x, -2.0)).tau_xy == pytest.approx(-0.6 * 1.2)

    def test_domain(self):
        f = prandtl_field()
        with pytest.raises(DomainError):
            f.stress(cart(0.0, 1.5))


class TestCavity:
    def test_wall_values(self):
        f = nadai_cavity_field(R=1.0, p=0.25, k=0.5)
        sigma, theta = f.eval_fn(1.0, 0.0)
        assert sigma == pytest.approx(0.5 - 0.25)
        assert theta == pytest.approx(math.pi / 4)
        # zero tangential traction: theta_p = pi/4
        st = f.stress(polar(1.0, 0.7))
        assert 0.5 * math.cos(2.0 * (st.theta - 0.7)) == pytest.approx(0.0, abs=1e-15)

    def test_log_growth(self):
        f = nadai_cavity_field(R=1.0, p=0.25, k=0.5)
        assert f.eval_fn(math.e, 0.0)[0] == pytest.approx(3 * 0.5 - 0.25)


class TestVortex:
    def test_reference_point(self):
        f = nadai_vortex_field(R=1.0, p=0.0, k=1.0)
        sigma, theta = f.eval_fn(SQRT2, 0.0)
        assert theta == pytest.approx(-math.pi / 3)
        assert sigma == pytest.approx(-math.log(math.tan(5 * math.pi / 12)))

    def test_wall_traction_and_pressure(self):
        f = nadai_vortex_field(R=1.0, p=0.3, k=0.5)
        st = f.stress(polar(1.0, 0.4))
        assert 0.5 * math.cos(2.0 * (st.theta - 0.4)) == pytest.approx(-0.5)
        assert st.sigma == pytest.approx(-0.3)

    def test_far_field_angle(self):
        f = nadai_vortex_field(R=1.0)
        st = f.stress(polar(1e6, 0.2))
        assert st.theta - 0.2 == pytest.approx(-math.pi / 4, abs=1e-9)


class TestChannel:
    @pytest.mark.parametrize("c", [2.0, 0.5, -0.5, 3.0])
    def test_factor_system_along_rays(self, c):
        f = nadai_channel_field(c=c)
        if c * c > 1.0:
            phi0 = 0.5 * (f.walls[0] + f.walls[1])
        else:
            phi0 = 0.3
        h = 1e-6
        th = f.theta_of_phi(phi0)
        dth = (f.theta_of_phi(phi0 + h) - f.theta_of_phi(phi0 - h)) / (2 * h)
        assert dth * math.sin(2.0 * (th - phi0)) == pytest.approx(-c, rel=1e-6)

    def test_half_angle_relation(self):
        c = 2.0
        alpha = channel_half_angle(c)
        assert alpha + math.pi / 4 == pytest.approx(
            c / math.sqrt(c * c - 1) * math.atan(math.sqrt((c + 1) / (c - 1))))
        f = nadai_channel_field(c=c, wall_margin=0.0)
        assert f.walls[1] - f.walls[0] == pytest.approx(2.0 * alpha, abs=1e-9)

    def test_subcritical_ray_angles_constant(self):
        f = nadai_channel_field(c=0.5)
        th = f.theta_of_phi(0.4)
        for r in (0.5, 1.0, 2.0):
            assert f.eval_fn(r, 0.4)[1] == pytest.approx(th)

    def test_rejects_degenerate_c(self):
        with pytest.raises(ValueError):
            nadai_channel_field(c=1.0)
        with pytest.raises(ValueError):
            nadai_channel_field(c=0.0)


class TestChannelSingular:
    def test_ray_relation(self):
        f = nadai_channel_singular_field(A=0.0)
        th = 1.3
        phi = f.phi_of_theta(th)
        assert phi == pytest.approx(th + math.atan(1.0 + 1.0 / th))
        assert f.theta_of_phi(phi) == pytest.approx(th, abs=1e-10)

    def test_factor_system_c1(self):
        f = nadai_channel_singular_field(A=0.0)
        phi0 = 2.2
        h = 1e-6
        th = f.theta_of_phi(phi0)
        dth = (f.theta_of_phi(phi0 + h) - f.theta_of_phi(phi0 - h)) / (2 * h)
        assert dth * math.sin(2.0 * (th - phi0)) == pytest.approx(-1.0, rel=1e-6)


class TestTwoCircles:
    def test_constants(self):
        C1, C2 = two_circles_constants(1.0, SQRT2)
        assert C1 == pytest.approx(-4.0)
        assert C2 == pytest.approx(3.0)

    def test_wall_angles(self):
        f = nadai_two_circles_field()
        st = f.stress(polar(1.0, 0.2))
        # cos 2 theta_p = -1 at the inner wall: full negative shear
        assert math.cos(2.0 * (st.theta - 0.2)) == pytest.approx(-1.0)
        st = f.stress(polar(SQRT2, 0.2))
        assert math.cos(2.0 * (st.theta - 0.2)) == pytest.approx(1.0)

    def test_neutral_radius(self):
        # cos 2 theta_p = 0 at r = 2/sqrt(3): theta_p = pi/4, zero shear
        f = nadai_two_circles_field()
        st = f.stress(polar(2.0 / math.sqrt(3.0), 0.0))
        assert st.theta == pytest.approx(math.pi / 4)

    def test_quadrature_matches_closed_form(self):
        f = nadai_two_circles_field()
        for r in np.linspace(1.02, SQRT2 - 0.02, 17):
            assert f.eval_fn(float(r), 0.0)[0] == pytest.approx(
                two_circles_f_closed(float(r)), abs=1e-11)

    def test_tangents_match_display(self):
        # tan(theta_p) = sqrt((2-r^2)/(r^2-1))/sqrt(2) on the annulus
        f = nadai_two_circles_field()
        for r in (1.1, 1.25, 1.4):
            st = f.stress(polar(r, 0.0))
            expect = math.sqrt((2.0 - r * r) / (r * r - 1.0)) / SQRT2
            assert math.tan(st.theta) == pytest.approx(expect, rel=1e-12)


class TestRevuzhenko:
    def test_reference_point(self):
        r, phi, sigma, theta = revuzhenko_map(0.5, 0.5, "upper")
        assert sigma == pytest.approx(0.5)
        assert theta == pytest.approx(-math.pi / 4)
        assert r == pytest.approx(2.0 * SQRT2 * math.exp(0.5))
        assert phi == pytest.approx(-math.pi / 2)

    def test_inversion_round_trip(self):
        f = revuzhenko_field("upper")
        for xi, eta in [(0.6, 0.7), (0.9, 0.6), (0.75, 0.9)]:
            r, phi, sigma, theta = revuzhenko_map(xi, eta, "upper")
            xi2, eta2 = f.invert(r, phi)
            assert xi2 == pytest.approx(xi, abs=1e-11)
            assert eta2 == pytest.approx(eta, abs=1e-11)
            assert f.eval_fn(r, phi)[0] == pytest.approx(sigma, abs=1e-11)

    def test_envelope_root(self):
        eta = revuzhenko_envelope_eta(0.5, "minus")
        assert eta == pytest.approx(-0.5)
        # the root satisfies the fold condition
        assert 2 * 0.5 + eta / (0.25 + eta * eta) == pytest.approx(0.0, abs=1e-14)
        # the product xi * eta is negative along the arc
        for xi in (0.1, 0.3, 0.49):
            assert xi * revuzhenko_envelope_eta(xi, "minus") < 0.0
            assert xi * revuzhenko_envelope_eta(xi, "plus") < 0.0

    def test_singular_coords_rejected(self):
        with pytest.raises(SingularCoords):
            revuzhenko_map(0.0, 0.5)


class TestSpiral:
    def test_closed_form_vs_quadrature(self):
        fc = spiral_field(use_closed_form=True)
        fq = spiral_field(use_closed_form=False)
        glo, ghi = fc.g_branch
        for g in np.linspace(glo + 0.05, ghi - 0.05, 15):
            assert fc.lnlam_of_g(float(g)) == pytest.approx(fq.lnlam_of_g(float(g)), abs=2e-10)
            assert fc.f_of_g(float(g)) == pytest.approx(fq.f_of_g(float(g)), abs=2e-10)

    def test_profile_closed_form_derivatives(self):
        # d ln(lambda)/dg must equal E/d for the special amplitude
        k = 0.5
        h = 1e-6
        for g in (-0.5, 0.0, 0.4):
            num = (spiral_profile_closed(g + h, k)[0] - spiral_profile_closed(g - h, k)[0]) / (2 * h)
            E = 2.0 * math.cos(2 * g)
            d = SQRT2 + math.cos(2 * g) - math.sin(2 * g)
            assert num == pytest.approx(E / d, rel=1e-8)

    def test_simple_wave_rejection(self):
        with pytest.raises(DegenerateSimpleWave):
            spiral_field(A=1.0, k=0.5)  # A = 2k

    def test_domain_bounds(self):
        f = spiral_field()
        with pytest.raises(DomainError):
            f.stress(polar(50.0, 0.0))  # ln lambda outside the branch


class TestSimpleWave:
    def test_centered_fan_root(self):
        f = simple_wave_field(ZERO_FN, theta_bracket=(-math.pi / 2, 0.0))
        st = f.stress(cart(1.0, 1.0))
        assert st.theta == pytest.approx(-math.pi / 4)

    def test_straight_line_level_sets(self):
        f = spiral_simple_wave_field()
        th0 = f.stress(cart(1.0, 1.8)).theta
        # along the line x cos th + y sin th = Phi(th) the angle is constant
        d = (-math.sin(th0), math.cos(th0))
        foot_x = 1.0 + 0.3 * d[0]
        foot_y = 1.8 + 0.3 * d[1]
        assert f.stress(cart(foot_x, foot_y)).theta == pytest.approx(th0, abs=1e-12)

    def test_sigma_affine_in_theta(self):
        f = spiral_simple_wave_field(const=0.3)
        st = f.stress(cart(1.0, 1.8))
        assert st.sigma == pytest.approx(2.0 * 0.5 * st.theta + 0.3)

    def test_multiple_roots_reported(self):
        f = simple_wave_field(ZERO_FN, theta_bracket=(-math.pi / 2, math.pi))
        with pytest.raises(MultipleRoots):
            f.stress(cart(1.0, 1.0))

    def test_odd_branch_mirrors(self):
        f = simple_wave_field(ZERO_FN, n=1, theta_bracket=(0.1, 1.4))
        st = f.stress(cart(1.0, 1.0))
        assert st.theta == pytest.approx(math.pi / 4)
        assert st.sigma == pytest.approx(-2.0 * 0.5 * st.theta)


def test_registry_builds_all_names():
    assert set(REGISTRY) == {
        "prandtl", "nadai_cavity", "nadai_vortex", "nadai_channel",
        "nadai_channel_singular", "nadai_two_circles", "revuzhenko",
        "spiral", "simple_wave",
    }
    f = build_field("nadai_channel", {"c": 2.0})
    assert f.params["c"] == 2.0
    with pytest.raises(UnsupportedField):
        build_field("does_not_exist")


def test_acceptance_instances_cover_the_catalog():
    names = [f.name for f in acceptance_fields()]
    assert names.count("nadai_channel") == 2
    assert names.count("revuzhenko") == 2
    assert len(names) == 11
