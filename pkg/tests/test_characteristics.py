import math

import numpy as np
import pytest

from slipline_lab.catalog import (
    nadai_cavity_field,
    nadai_channel_field,
    nadai_channel_singular_field,
    nadai_two_circles_field,
    nadai_vortex_field,
    prandtl_field,
    revuzhenko_field,
    revuzhenko_map,
    spiral_field,
    spiral_simple_wave_field,
)
from slipline_lab.characteristics import (
    FIRST,
    SECOND,
    closed_form_family,
    invariant_drift_per_unit_arclen,
    riemann_invariants,
    slip_direction,
    trace_slipline,
)
from slipline_lab.core import StartOutsideDomain, StressState, UnsupportedField, cart, polar
from slipline_lab.residuals import fd_partial


class TestSlipDirections:
    def test_cartesian_axes(self):
        s = StressState(sigma=0.0, theta=0.0, k=0.5)
        assert slip_direction(s, FIRST) == pytest.approx((1.0, 0.0))
        assert slip_direction(s, SECOND) == pytest.approx((0.0, -1.0))

    def test_families_always_orthogonal(self):
        for theta in np.linspace(-3.0, 3.0, 17):
            s = StressState(sigma=0.1, theta=float(theta), k=0.5)
            d1 = slip_direction(s, FIRST)
            d2 = slip_direction(s, SECOND)
            assert abs(d1[0] * d2[0] + d1[1] * d2[1]) < 1e-15

    def test_polar_frame_consistency(self):
        # rotating the local polar direction by phi gives the Cartesian one
        theta, phi = 0.8, 0.3
        s = StressState(sigma=0.0, theta=theta, k=0.5)
        dr, dphi = slip_direction(s, FIRST, frame="polar", phi=phi)
        dx = dr * math.cos(phi) - dphi * math.sin(phi)
        dy = dr * math.sin(phi) + dphi * math.cos(phi)
        assert (dx, dy) == pytest.approx(slip_direction(s, FIRST))


class TestRiemannInvariants:
    def test_zero_state(self):
        c = riemann_invariants(StressState(0.0, 0.0, k=0.5))
        assert (c.xi, c.eta) == (0.0, 0.0)

    def test_simple_wave_invariant_is_global(self):
        f = spiral_simple_wave_field(const=0.2)
        pts = f.chart(4)
        assert len(pts) >= 3
        vals = [riemann_invariants(f.stress(p)).xi for p in pts]
        assert max(vals) - min(vals) < 1e-12

    def test_separable_solution_affine_relation(self):
        # sigma -+ theta reproduce the quadratic invariant scalings: with
        # 2k = 1, sigma - theta = 2(xi^2 + pi/8) and sigma + theta = 2(eta^2 - pi/8)
        for xi, eta in [(0.6, 0.8), (0.9, 0.7)]:
            r, phi, sigma, theta = revuzhenko_map(xi, eta, "upper")
            c = riemann_invariants(StressState(sigma, theta, k=0.5))
            assert c.xi == pytest.approx(2.0 * (xi * xi + math.pi / 8.0), rel=1e-12)
            assert c.eta == pytest.approx(2.0 * (eta * eta - math.pi / 8.0), rel=1e-12)


class TestTraces:
    def test_start_outside_domain(self):
        with pytest.raises(StartOutsideDomain):
            trace_slipline(prandtl_field(), cart(0.0, 3.0), FIRST)

    @pytest.mark.parametrize("fld,start", [
        (prandtl_field(), cart(0.0, 0.0)),
        (nadai_two_circles_field(), polar(1.2, 0.2)),
        (nadai_vortex_field(), polar(1.5, 0.2)),
        (spiral_simple_wave_field(), cart(1.0, 1.8)),
    ])
    def test_invariant_conservation(self, fld, start):
        for fam in (FIRST, SECOND):
            ln = trace_slipline(fld, start, fam, step=1e-3, max_arclen=1.5, margin=2e-3)
            assert len(ln) > 50
            assert invariant_drift_per_unit_arclen(ln) < 1e-5

    def test_orthogonality_along_trace_pairs(self):
        fld = prandtl_field()
        ln = trace_slipline(fld, cart(0.2, 0.1), FIRST, max_arclen=0.4)
        for st in ln.states:
            d1 = slip_direction(st, FIRST)
            d2 = slip_direction(st, SECOND)
            assert abs(d1[0] * d2[0] + d1[1] * d2[1]) < 1e-8

    def test_stress_recorded_at_every_vertex(self):
        ln = trace_slipline(nadai_cavity_field(), polar(1.5, 0.0), SECOND, max_arclen=0.5)
        assert len(ln.s) == len(ln.points) == len(ln.states)
        assert all(st.k == 0.5 for st in ln.states)


class TestClosedFormFamilies:
    def test_prandtl_cycloid_display(self):
        # x = -2 theta + sqrt(1-y^2), y = cos 2 theta (first family, C = 0)
        c = closed_form_family(prandtl_field(), FIRST)
        for th in (-1.2, -0.7, -0.3):
            p = c.point_at(th)
            assert p.y == pytest.approx(math.cos(2 * th))
            assert p.x == pytest.approx(-2 * th + math.sqrt(1 - p.y**2))

    def test_spiral_simple_wave_second_family_display(self):
        # r cos phi = C e^t (sin t + cos t) + tau sin t and the y companion
        f = spiral_simple_wave_field()
        tau = 0.8
        c = closed_form_family(f, FIRST, curve_const=tau)
        for t in (-0.2, 0.1, 0.3):
            p = c.point_at(t)
            assert p.x == pytest.approx(math.exp(t) * (math.sin(t) + math.cos(t)) + tau * math.sin(t))
            assert p.y == pytest.approx(math.exp(t) * (math.sin(t) - math.cos(t)) - tau * math.cos(t))

    @pytest.mark.parametrize("fld,start,fams", [
        (prandtl_field(), cart(0.3, 0.1), (FIRST, SECOND)),
        (nadai_two_circles_field(), polar(1.2, 0.2), (FIRST, SECOND)),
        (nadai_channel_field(c=2.0), polar(1.0, 0.55), (FIRST, SECOND)),
        (nadai_channel_singular_field(), polar(1.0, 2.2), (FIRST, SECOND)),
        (spiral_field(), polar(1.3, 0.3), (FIRST, SECOND)),
        (spiral_simple_wave_field(), cart(1.0, 1.8), (FIRST, SECOND)),
        (nadai_cavity_field(), polar(1.4, 0.2), (FIRST, SECOND)),
    ])
    def test_family_relation_constant_along_traces(self, fld, start, fams):
        for fam in fams:
            rel = closed_form_family(fld, fam).relation
            worst = 0.0
            for orient in (+1, -1):
                ln = trace_slipline(fld, start, fam, step=1e-3, max_arclen=1.0,
                                    margin=2e-3, orientation=orient)
                if len(ln) < 3:
                    continue
                vals = [rel(p) for p in ln.points]
                worst = max(worst, max(abs(v - vals[0]) for v in vals))
            assert worst < 1e-5, (fld.name, fam, worst)

    def test_two_circles_display_relations_conserved(self):
        # the half-arc closed relations for a = 1, b = sqrt(2)
        fld = nadai_two_circles_field()
        for fam in (FIRST, SECOND):
            rel = closed_form_family(fld, fam).relation
            ln = trace_slipline(fld, polar(1.2, 0.3), fam, max_arclen=1.0, margin=5e-3)
            vals = [rel(p) for p in ln.points]
            assert max(abs(v - vals[0]) for v in vals) < 1e-5

    def test_unsupported_field(self):
        with pytest.raises(UnsupportedField):
            closed_form_family(nadai_vortex_field(), FIRST)
        with pytest.raises(UnsupportedField):
            closed_form_family(prandtl_field(m=0.5), FIRST)

    def test_theta_parameter_matches_field_angle(self):
        fld = nadai_channel_field(c=2.0)
        c = closed_form_family(fld, FIRST, curve_const=0.2)
        t = 0.5 * (c.t_range[0] + c.t_range[1])
        p = c.point_at(t)
        assert fld.stress(p).theta == pytest.approx(c.theta_at(t), abs=1e-9)


def test_hencky_net_relation():
    # d y/d eta = tan(theta) d x/d eta across the separable solution's net
    for xi in (0.6, 0.8):
        for eta in (0.65, 0.9):
            def xy(e):
                r, phi, _, _ = revuzhenko_map(xi, e, "upper")
                return r * math.cos(phi), r * math.sin(phi)

            h = 1e-6
            x1, y1 = xy(eta + h)
            x0, y0 = xy(eta - h)
            theta = revuzhenko_map(xi, eta, "upper")[3]
            assert (y1 - y0) / (2 * h) == pytest.approx(
                math.tan(theta) * (x1 - x0) / (2 * h), rel=1e-6)


def test_reflection_symmetry_maps_solutions_to_solutions():
    # (phi, sigma, theta) -> (-phi, -sigma, -theta) preserves the polar system
    from slipline_lab.catalog import StressField
    from slipline_lab.residuals import sweep_stress

    base = nadai_vortex_field()

    def ev(r, phi):
        s, t = base.eval_fn(r, -phi)
        return -s, -t

    def part(r, phi):
        ds_dr, ds_dphi, dt_dr, dt_dphi = base.partials_fn(r, -phi)
        return -ds_dr, ds_dphi, -dt_dr, dt_dphi

    mirrored = StressField(
        name="vortex-reflected", frame="polar", k=base.k, params={}, subalgebra=None,
        eval_fn=ev, partials_fn=part,
        domain_fn=lambda r, phi: base.domain_fn(r, -phi),
        chart_fn=lambda n: [(r, -phi) for (r, phi) in base.chart_fn(n)],
    )
    rep = sweep_stress(mirrored, n=10)
    assert rep.max_abs < 1e-9 * base.k
