import math

import pytest

from slipline_lab.catalog import (
    StressField,
    acceptance_fields,
    prandtl_field,
    nadai_vortex_field,
    nadai_two_circles_field,
    spiral_simple_wave_field,
)
from slipline_lab.core import CARTESIAN, DomainError, cart, polar
from slipline_lab.residuals import (
    fd_partial,
    perturbed,
    residual_cartesian,
    residual_eq_u,
    residual_polar,
    residual_stress,
    sweep_stress,
    yield_identity_max,
)


def test_fd_partial_matches_catalog_analytic_partials():
    for f in (prandtl_field(), nadai_vortex_field(), nadai_two_circles_field()):
        p = f.chart(5)[7]
        c1, c2 = p.coords
        exact = f.partials_fn(c1, c2)
        approx = (
            fd_partial(lambda a, b: f.eval_fn(a, b)[0], c1, c2, 0),
            fd_partial(lambda a, b: f.eval_fn(a, b)[0], c1, c2, 1),
            fd_partial(lambda a, b: f.eval_fn(a, b)[1], c1, c2, 0),
            fd_partial(lambda a, b: f.eval_fn(a, b)[1], c1, c2, 1),
        )
        for e, a in zip(exact, approx):
            assert a == pytest.approx(e, rel=1e-6, abs=1e-9)


def test_constant_field_is_a_solution():
    f = StressField(
        name="const", frame=CARTESIAN, k=0.5, params={}, subalgebra=None,
        eval_fn=lambda x, y: (0.3, 0.1),
        partials_fn=lambda x, y: (0.0, 0.0, 0.0, 0.0),
        domain_fn=lambda x, y: True,
    )
    assert residual_cartesian(f, cart(0.4, -0.8)) == (0.0, 0.0)


def test_perturbed_prandtl_detected_with_predicted_magnitude():
    f = perturbed(prandtl_field(), 0.01)
    r1, _ = residual_cartesian(f, cart(1.0, 0.2))
    assert r1 == pytest.approx(0.02 * 1.0, abs=1e-12)  # d/dx (eps x^2) = 2 eps x


def test_defect_sensitivity_on_every_catalog_field():
    for f in acceptance_fields():
        rep = sweep_stress(perturbed(f, 1e-2), n=8)
        assert rep.max_abs > 1e-3, f.name


def test_fd_mode_converges_fourth_order():
    f = nadai_vortex_field()
    p = polar(1.7, 0.4)

    def max_res(h):
        r1, r2 = residual_polar(f, p, mode="fd", h=h)
        return max(abs(r1), abs(r2))

    # residual is 0 exactly; the FD value is pure truncation, O(h^4)
    e1, e2 = max_res(2e-2), max_res(1e-2)
    assert e1 / e2 > 8.0


def test_frame_dispatch_and_domain_guard():
    pr = prandtl_field()
    with pytest.raises(DomainError):
        residual_polar(pr, cart(0.0, 0.0))
    with pytest.raises(DomainError):
        residual_cartesian(pr, cart(0.0, 2.0))
    r1, r2 = residual_stress(pr, cart(0.5, 0.3))
    assert max(abs(r1), abs(r2)) < 1e-14


def test_simple_wave_polar_system_consistency():
    # sigma = 2k theta with the exponential line profile also solves the polar
    # form; checked through the frame conversion chain by finite differences.
    f = spiral_simple_wave_field()
    p = cart(1.0, 1.8).to_polar()

    def sig(r, phi):
        return f.eval_fn(r * math.cos(phi), r * math.sin(phi))[0]

    def th(r, phi):
        return f.eval_fn(r * math.cos(phi), r * math.sin(phi))[1]

    r, phi = p.coords
    k2 = 1.0
    w = th(r, phi) - phi
    ds_dr = fd_partial(sig, r, phi, 0)
    ds_dphi = fd_partial(sig, r, phi, 1)
    dt_dr = fd_partial(th, r, phi, 0)
    dt_dphi = fd_partial(th, r, phi, 1)
    r1 = r * ds_dr - k2 * (r * dt_dr * math.cos(2 * w) + dt_dphi * math.sin(2 * w))
    r2 = ds_dphi - k2 * (r * dt_dr * math.sin(2 * w) - dt_dphi * math.cos(2 * w))
    assert max(abs(r1), abs(r2)) < 1e-8


def test_yield_identity_on_sweeps():
    for f in acceptance_fields():
        assert yield_identity_max(f, n=6) <= 1e-12 * f.k * f.k


def test_separated_equation_residual():
    # u = eta/xi with the quadratic invariant scalings solves the separated
    # equation; u = eta^2/xi does not.
    good = residual_eq_u(lambda a, b: b / a, lambda a: 4 * a, lambda b: 4 * b, 0.7, 0.8)
    assert abs(good) < 1e-8
    bad = residual_eq_u(lambda a, b: b * b / a, lambda a: 4 * a, lambda b: 4 * b, 0.7, 0.8)
    assert abs(bad) > 1e-2
