import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slipline_lab.catalog import prandtl_field, spiral_simple_wave_field
from slipline_lab.core import (
    BackgroundMismatch,
    FunctionParam,
    StagnationPoint,
    cart,
    const_fn,
)
from slipline_lab.numerics import bracket_root
from slipline_lab.velocity import (
    StrainRates,
    VelocityField,
    dissipation,
    dissipation_at,
    dissipation_sign_ok,
    exponential_velocity,
    nadai_velocity,
    plate_slide_velocity,
    quadratic_edge_velocity,
    rotation_invariant_velocity,
    simple_wave_velocity,
    spin_velocity,
    spiral_wave_velocity,
    streamline_function,
    trace_streamline,
    twist_invariant_velocity,
    velocity_catalog,
    velocity_residual,
)

BG = prandtl_field()
XS = np.linspace(-2.0, 2.0, 9)
YS = np.linspace(-0.95, 0.95, 9)


def grid():
    return [cart(float(x), float(y)) for x in XS for y in YS]


class TestCompatibility:
    def test_spin_solves_on_any_background(self):
        vf = spin_velocity()
        for p in grid():
            r1, r2 = velocity_residual(vf, BG, p)
            assert max(abs(r1), abs(r2)) < 1e-14

    def test_rigid_translation(self):
        vf = VelocityField("rigid", {}, BG, lambda x, y: (1.0, 0.0),
                           lambda x, y: (0.0, 0.0, 0.0, 0.0), lambda x, y: True)
        r1, r2 = velocity_residual(vf, BG, cart(0.3, 0.2))
        assert (r1, r2) == (0.0, 0.0)

    def test_linear_edge_flow_cancellation(self):
        vf = nadai_velocity()
        r1, r2 = velocity_residual(vf, BG, cart(0.0, 0.5))
        assert max(abs(r1), abs(r2)) < 1e-12

    @pytest.mark.parametrize("vf", velocity_catalog(), ids=lambda v: v.name)
    def test_catalog_residuals_both_modes(self, vf):
        bg = vf.background
        pts = vf.chart(12) if bg.name == "prandtl" else bg.chart(8)
        for p in pts:
            r1, r2 = velocity_residual(vf, bg, p)
            assert max(abs(r1), abs(r2)) < 1e-9, vf.name
            r1, r2 = velocity_residual(vf, bg, p, mode="fd")
            assert max(abs(r1), abs(r2)) < 1e-6, vf.name

    def test_superposition_is_compatible(self):
        a, b = nadai_velocity(), plate_slide_velocity()

        def ev(x, y):
            ua, va = a.eval_fn(x, y)
            ub, vb = b.eval_fn(x, y)
            return 2.0 * ua - 3.0 * ub, 2.0 * va - 3.0 * vb

        def part(x, y):
            pa = a.partials_fn(x, y)
            pb = b.partials_fn(x, y)
            return tuple(2.0 * qa - 3.0 * qb for qa, qb in zip(pa, pb))

        combo = VelocityField("combo", {}, BG, ev, part, a.domain_fn)
        for p in grid()[::7]:
            r1, r2 = velocity_residual(combo, BG, p)
            assert max(abs(r1), abs(r2)) < 1e-12

    def test_incompressibility_everywhere(self):
        for vf in velocity_catalog():
            pts = vf.chart(10) if vf.background.name == "prandtl" else vf.background.chart(6)
            for p in pts:
                u_x, _, _, v_y = vf.partials(p)
                assert abs(u_x + v_y) < 1e-9


class TestBoundaryData:
    def test_linear_edge(self):
        vf = nadai_velocity()
        for x in XS:
            for yv in (1.0, -1.0):
                u, v = vf.eval_fn(float(x), yv)
                assert u == pytest.approx(float(x), abs=1e-12)
                assert v == pytest.approx(-yv, abs=1e-12)

    def test_quadratic_edge(self):
        vf = quadratic_edge_velocity(C1=3.0, C2=math.pi)
        for x in XS:
            for yv in (1.0, -1.0):
                u, v = vf.eval_fn(float(x), yv)
                assert u == pytest.approx(float(x) ** 2, abs=1e-12)
                assert v == pytest.approx(-yv * (2.0 * float(x) - math.pi), abs=1e-12)

    def test_exponential_smooth_member(self):
        c2 = -1.0
        vf = exponential_velocity(c1=0.0, c2=c2)
        for x in (0.0, 1.0, 2.0):
            for yv in (1.0, -1.0):
                u, _ = vf.eval_fn(x, yv)
                assert u == pytest.approx(yv * c2 * (math.pi / 2 - 1.0) * math.exp(-x / 2), abs=1e-12)

    def test_exponential_per_half_member_plates_approach(self):
        c2 = -1.0
        vf = exponential_velocity(c1=0.0, c2=c2, paper_halves=True)
        for x in (0.0, 1.5):
            u_top, v_top = vf.eval_fn(x, 1.0)
            u_bot, v_bot = vf.eval_fn(x, -1.0)
            assert u_top == pytest.approx(u_bot, abs=1e-12)  # same tangential drift
            assert u_top == pytest.approx(c2 * (math.pi / 2 - 1.0) * math.exp(-x / 2), abs=1e-12)
            assert v_top == pytest.approx(c2 * (1.0 + math.pi / 2) * math.exp(-x / 2), abs=1e-12)
            assert v_bot == pytest.approx(-v_top, abs=1e-12)  # plates approach

    def test_exponential_series_matches_exact_formula(self):
        # same y evaluated through the series path and the raw formula path
        series = exponential_velocity(c1=0.4, c2=-0.7, series_cut=1e-2)
        exact = exponential_velocity(c1=0.4, c2=-0.7, series_cut=1e-9)
        for x in (0.0, 1.0):
            for y in (5e-3, -5e-3, 9e-3):
                us, vs = series.eval_fn(x, y)
                ue, ve = exact.eval_fn(x, y)
                assert us == pytest.approx(ue, abs=1e-9)
                assert vs == pytest.approx(ve, abs=1e-9)


class TestDissipation:
    def test_identity_restatement(self):
        fs = BG.full_stress(cart(0.4, 0.3))
        sr = StrainRates(e_x=0.7, e_y=-0.7, gamma_xy=0.2)
        alt = (fs.sigma_x - fs.sigma_y) * (sr.e_x - sr.e_y) / 2.0 + 2.0 * fs.tau_xy * sr.gamma_xy
        assert dissipation(fs, sr) == pytest.approx(alt, rel=1e-12)

    def test_linear_edge_formula(self):
        vf = nadai_velocity()
        for p in grid():
            y = p.y
            assert dissipation_at(vf, BG, p) == pytest.approx(1.0 / math.sqrt(1 - y * y), rel=1e-12)

    def test_quadratic_edge_formula_and_zone(self):
        vf = quadratic_edge_velocity(C1=3.0, C2=math.pi)
        for p in grid():
            x, y = p.x, p.y
            m = math.sqrt(1 - y * y)
            assert dissipation_at(vf, BG, p) == pytest.approx(2.0 * (x - 2.0 * m) / m, rel=1e-10, abs=1e-10)
        assert dissipation_sign_ok(vf, BG, cart(3.0, 0.0)) is True
        assert dissipation_sign_ok(vf, BG, cart(0.0, 0.0)) is False

    def test_sign_boundary_location(self):
        vf = quadratic_edge_velocity(C1=3.0, C2=math.pi)
        for y in np.linspace(-0.9, 0.9, 11):
            xr = bracket_root(lambda x: dissipation_at(vf, BG, cart(x, float(y))), -1.0, 4.0)
            assert abs(xr - 2.0 * math.sqrt(1 - y * y)) < 1e-8

    def test_linear_edge_admissible_everywhere(self):
        vf = nadai_velocity()
        assert all(dissipation_sign_ok(vf, BG, p) for p in grid())

    def test_exponential_per_half_dissipation_nonnegative(self):
        vf = exponential_velocity(c1=0.0, c2=-1.0, paper_halves=True)

        def formula(x, y):
            s = math.sqrt(1 - y * y)
            return (-(-1.0) * (s - 1.0 + y * math.asin(y))
                    / (2.0 * math.sqrt(1.0 - s) * s) * math.exp(0.5 * (-x + s)))

        for p in grid():
            if abs(p.y) < 1e-3:
                continue
            D = dissipation_at(vf, BG, p)
            assert D >= -1e-12
            assert D == pytest.approx(formula(p.x, p.y), rel=1e-10, abs=1e-12)

    def test_ordering_beyond_the_zone(self):
        nad, qe = nadai_velocity(), quadratic_edge_velocity(C1=3.0, C2=math.pi)
        for p in grid():
            if p.x > 0.5 + 2.0 * math.sqrt(1 - p.y * p.y):
                assert dissipation_at(qe, BG, p) > dissipation_at(nad, BG, p)


class TestSimpleWaveVelocity:
    def test_background_guard(self):
        with pytest.raises(BackgroundMismatch):
            simple_wave_velocity(const_fn(0.0), const_fn(1.0), BG)

    def test_unit_normal_field_values(self):
        # U = 0, V = 1: the flow is the unit normal to the straight lines;
        # its divergence is that of a line fan, (U' - V)/E, nonzero.
        bg = spiral_simple_wave_field()
        vf = simple_wave_velocity(const_fn(0.0), const_fn(1.0), bg)
        p = cart(1.0, 1.8)
        th = bg.stress(p).theta
        u, v = vf.velocity(p)
        assert u == pytest.approx(-math.sin(th))
        assert v == pytest.approx(math.cos(th))
        E = bg.line_scale(th, p.x, p.y)
        r1, r2 = velocity_residual(vf, bg, p)
        assert r2 == pytest.approx((0.0 - 1.0) / E, rel=1e-6)
        assert r1 == pytest.approx(r2, rel=1e-6)

    def test_constant_along_rays_member_is_compatible(self):
        # U = const, V = 0 satisfies U' = V: an exact solution
        bg = spiral_simple_wave_field()
        vf = simple_wave_velocity(const_fn(0.7), const_fn(0.0), bg)
        for p in bg.chart(6):
            r1, r2 = velocity_residual(vf, bg, p)
            assert max(abs(r1), abs(r2)) < 1e-12

    def test_polynomial_pair_with_matching_slope(self):
        # on the fan with Phi = theta (lines x cos + y sin = theta), V(J) = J
        # pairs with U = theta^2/2: polynomial data, exact compatibility
        from slipline_lab.catalog import simple_wave_field

        Phi = FunctionParam(fn=lambda t: t, dfn=lambda t: 1.0, name="poly")
        bg = simple_wave_field(Phi, theta_bracket=(-0.45, 0.45))
        U = FunctionParam(fn=lambda t: 0.5 * t * t, dfn=lambda t: t, name="poly")
        V = FunctionParam(fn=lambda J: J, dfn=lambda J: 1.0, name="poly")
        vf = simple_wave_velocity(U, V, bg)
        for p in bg.chart(5):
            r1, r2 = velocity_residual(vf, bg, p)
            assert max(abs(r1), abs(r2)) < 1e-10

    def test_spiral_pair(self):
        bg = spiral_simple_wave_field()
        vf = spiral_wave_velocity(bg)
        for p in bg.chart(6):
            r1, r2 = velocity_residual(vf, bg, p)
            assert max(abs(r1), abs(r2)) < 1e-10


class TestStreamlines:
    def test_conserved_functions(self):
        cases = [
            (nadai_velocity(), "nadai", cart(1.1, 0.4)),
            (quadratic_edge_velocity(C1=3.0, C2=math.pi), "quadratic_edge", cart(2.5, -0.3)),
            (exponential_velocity(c1=1.0, c2=0.0), "exponential_c2_0", cart(0.5, 0.4)),
        ]
        for vf, key, start in cases:
            H = streamline_function(key)
            ln = trace_streamline(vf, start, step=1e-3, max_arclen=1.0)
            assert ln.s[-1] >= 0.99
            vals = [H(p.x, p.y) for p in ln.points]
            assert max(abs(v - vals[0]) for v in vals) < 1e-4

    def test_trivial_horizontal_field(self):
        vf = VelocityField("uniform", {}, BG, lambda x, y: (1.0, 0.0),
                           lambda x, y: (0.0, 0.0, 0.0, 0.0), lambda x, y: abs(y) <= 1.0)
        ln = trace_streamline(vf, cart(0.0, 0.2), max_arclen=0.5)
        assert all(abs(p.y - 0.2) < 1e-12 for p in ln.points)

    def test_stagnation_detection(self):
        vf = VelocityField("still", {}, BG, lambda x, y: (0.0, 0.0),
                           lambda x, y: (0.0, 0.0, 0.0, 0.0), lambda x, y: True)
        with pytest.raises(StagnationPoint):
            trace_streamline(vf, cart(0.1, 0.1))


@settings(max_examples=25, deadline=None)
@given(x=st.floats(-2, 2), y=st.floats(-0.9, 0.9))
def test_strain_rates_are_traceless(x, y):
    sr = quadratic_edge_velocity(C1=3.0, C2=math.pi).strain_rates(cart(x, y))
    assert abs(sr.e_x + sr.e_y) < 1e-10
