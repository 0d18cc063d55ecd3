"""The bundled verification suite: every check the library promises, runnable
as one deterministic pass/fail report (used by the command-line ``verify``)."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import catalog
from .catalog import acceptance_fields, build_field, simple_wave_field
from .characteristics import (
    FIRST,
    SECOND,
    closed_form_family,
    envelope_closed_form,
    envelope_numeric,
    invariant_drift_per_unit_arclen,
    trace_slipline,
)
from .core import ZERO_FN, cart, polar
from .numerics import bracket_root
from .residuals import perturbed, sweep_stress, sweep_velocity, yield_identity_max
from .symmetry import (
    check_invariance,
    polar_stress_algebra,
    stress_algebra,
    structure_constant_suite,
    subalgebra_operator,
    quasi_scale_generator_check,
)
from .velocity import (
    dissipation_at,
    exponential_velocity,
    nadai_velocity,
    quadratic_edge_velocity,
    streamline_function,
    trace_streamline,
    velocity_catalog,
    velocity_residual,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.value,
            "threshold": self.threshold,
            "passed": self.passed,
            "note": self.note,
        }


def _check(name: str, value: float, threshold: float, note: str = "") -> CheckResult:
    return CheckResult(name, float(value), float(threshold), bool(value <= threshold), note)


def _field_label(f) -> str:
    c = f.params.get("c")
    sign = f.params.get("sign")
    bits = [f.name]
    if c is not None:
        bits.append(f"c={c:g}")
    if sign is not None:
        bits.append(sign)
    return " ".join(bits)


def stress_residual_checks(n: int = 50, n_fd: int = 12) -> list[CheckResult]:
    out = []
    for f in acceptance_fields():
        label = _field_label(f)
        rep = sweep_stress(f, n=n, mode="analytic")
        out.append(_check(f"stress residual {label} (analytic)", rep.max_abs, 1e-9 * f.k))
        rep_fd = sweep_stress(f, n=n_fd, mode="fd")
        out.append(_check(f"stress residual {label} (fd)", rep_fd.max_abs, 1e-4 * f.k))
        out.append(_check(f"yield identity {label}", yield_identity_max(f, n=n_fd),
                          1e-12 * f.k * f.k))
    return out


def riemann_drift_checks() -> list[CheckResult]:
    cases = [
        (catalog.prandtl_field(), cart(0.0, 0.0)),
        (catalog.nadai_two_circles_field(), polar(1.2, 0.2)),
        (catalog.nadai_vortex_field(), polar(1.5, 0.2)),
        (catalog.spiral_simple_wave_field(), cart(1.0, 1.8)),
    ]
    out = []
    for fld, start in cases:
        for fam in (FIRST, SECOND):
            drift = 0.0
            for orient in (+1, -1):
                ln = trace_slipline(fld, start, fam, step=1e-3, max_arclen=1.5,
                                    margin=2e-3, orientation=orient)
                if len(ln) > 10:
                    drift = max(drift, invariant_drift_per_unit_arclen(ln))
            out.append(_check(f"invariant drift {fld.name} family {fam}", drift, 1e-5))
    return out


def closed_form_trace_checks() -> list[CheckResult]:
    """Traced slip lines against the closed-form families.

    The drift of the family's labeling constant along the trace bounds the
    pointwise distance to the closed curve (the constant has order-one
    gradient transverse to the family).  The two-circles annulus caps the
    attainable arc below one (margins at both wall circles); the other
    geometries reach unit arcs.
    """
    cases = [
        (catalog.prandtl_field(), cart(0.3, 0.1), (FIRST, SECOND), 1.0),
        (catalog.nadai_two_circles_field(), polar(1.2, 0.2), (FIRST, SECOND), 0.6),
        (catalog.nadai_channel_field(c=2.0), polar(1.0, 0.55), (FIRST, SECOND), 0.95),
        (catalog.spiral_field(), polar(1.3, 0.3), (FIRST, SECOND), 1.0),
        (catalog.spiral_simple_wave_field(), cart(1.0, 1.8), (SECOND,), 1.0),
    ]
    out = []
    for fld, start, fams, min_arc in cases:
        for fam in fams:
            worst = 0.0
            arc = 0.0
            for orient in (+1, -1):
                ln = trace_slipline(fld, start, fam, step=1e-3, max_arclen=1.5,
                                    margin=2e-3, orientation=orient)
                if len(ln) < 3:
                    continue
                rel = closed_form_family(fld, fam).relation
                vals = [rel(p) for p in ln.points]
                worst = max(worst, max(abs(v - vals[0]) for v in vals))
                arc += ln.s[-1]
            out.append(_check(f"closed form vs trace {fld.name} family {fam}", worst, 1e-5,
                              note=f"arc={arc:.2f}"))
            out.append(_check(f"trace arc length {fld.name} family {fam}",
                              min_arc - arc, 0.0, note=f"arc={arc:.2f} >= {min_arc}"))
    return out


def envelope_checks() -> list[CheckResult]:
    out = []
    rev = catalog.revuzhenko_field("lower")
    env = envelope_numeric(rev, FIRST, grid_n=200, n_members=9)
    err = max(abs(t - catalog.revuzhenko_envelope_eta(K, "minus")) for (K, t, _) in env.samples)
    out.append(_check("envelope: separable-solution root match", err, 1e-8))

    tc = catalog.nadai_two_circles_field()
    e1 = envelope_numeric(tc, FIRST, grid_n=200, n_members=7)
    e2 = envelope_numeric(tc, SECOND, grid_n=200, n_members=7)
    out.append(_check("envelope: inner circle", max(abs(h[2].to_polar().r - tc.params["a"]) for h in e1.samples), 1e-6))
    out.append(_check("envelope: outer circle", max(abs(h[2].to_polar().r - tc.params["b"]) for h in e2.samples), 1e-6))

    ch = catalog.nadai_channel_field(c=2.0)
    ec = envelope_numeric(ch, FIRST, grid_n=200, n_members=7)
    out.append(_check("envelope: channel wall ray", max(abs(h[2].to_polar().phi - ch.walls[1]) for h in ec.samples), 1e-8))

    sw = catalog.spiral_simple_wave_field()
    es = envelope_numeric(sw, SECOND, grid_n=200, n_members=9)
    res = max(abs(pt.x + (sw.Phi.deriv(K) * math.sin(K) - sw.Phi(K) * math.cos(K)))
              for (K, _, pt) in es.samples)
    out.append(_check("envelope: straight-family relation", res, 1e-8))

    worst_angle = 0.0
    for fld in (catalog.prandtl_field(), tc, ch, catalog.spiral_field(), rev, sw):
        for envc in envelope_closed_form(fld):
            lo, hi = envc.t_range
            ts = np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 7)
            worst_angle = max(worst_angle, max(envc.tangency_angle(float(t)) for t in ts))
    out.append(_check("envelope tangency angle", worst_angle, 1e-3))
    return out


def structure_constant_checks(seed: int = 0, n_points: int = 100) -> list[CheckResult]:
    out = []
    for alg, k in (("stress", 0.5), ("velocity", 0.5)):
        rep = structure_constant_suite(alg, k=k, n_points=n_points, seed=seed, mode="fd")
        gen_keys = [kk for kk in rep if "gen" in kk]
        base = max(v for kk, v in rep.items() if kk not in gen_keys)
        out.append(_check(f"structure constants {alg} (fd)", base, 1e-6))
        rep_a = structure_constant_suite(alg, k=k, n_points=n_points, seed=seed, mode="analytic")
        out.append(_check(f"structure constants {alg} (analytic)", max(rep_a.values()), 1e-9))
        if gen_keys:
            out.append(_check("commutator-generated flows", max(rep_a[kk] for kk in gen_keys), 1e-6))
    return out


def velocity_residual_checks(n: int = 50, n_fd: int = 15) -> list[CheckResult]:
    out = []
    for vf in velocity_catalog():
        bg = vf.background
        if bg.name == "prandtl":
            pts = vf.chart(n)
            pts_fd = vf.chart(n_fd)
        else:
            pts = bg.chart(int(math.sqrt(n * n / 2)))
            pts_fd = bg.chart(n_fd)
        rep = sweep_velocity(vf, bg, pts, mode="analytic")
        out.append(_check(f"velocity residual {vf.name} (analytic)", rep.max_abs, 1e-9))
        rep_fd = sweep_velocity(vf, bg, pts_fd, mode="fd")
        out.append(_check(f"velocity residual {vf.name} (fd)", rep_fd.max_abs, 1e-6))
    return out


def boundary_condition_checks() -> list[CheckResult]:
    out = []
    xs = np.linspace(-2.0, 2.0, 9)

    pr = catalog.prandtl_field()
    worst = max(abs(pr.full_stress(cart(float(x), yv)).tau_xy - s * pr.k)
                for x in xs for yv, s in ((1.0, 1.0), (-1.0, -1.0)))
    out.append(_check("block wall traction tau_xy(+-h) = +-mk", worst, 1e-10))

    tc = catalog.nadai_two_circles_field()
    k = tc.k

    def tau_rphi(fld, r, phi_):
        sigma, theta = fld.eval_fn(r, phi_)
        return fld.k * math.cos(2.0 * (theta - phi_))

    worst = max(abs(tau_rphi(tc, tc.params["a"], float(p)) + k) for p in np.linspace(0, 1.5, 7))
    worst = max(worst, max(abs(tau_rphi(tc, tc.params["b"], float(p)) - k) for p in np.linspace(0, 1.5, 7)))
    out.append(_check("annulus wall traction -k / +k", worst, 1e-10))

    vx = catalog.nadai_vortex_field(R=1.0, p=0.25)
    worst = max(abs(tau_rphi(vx, 1.0, float(p)) + vx.k) for p in np.linspace(0, 1.5, 7))
    worst = max(worst, max(abs(vx.eval_fn(1.0, float(p))[0] + 0.25) for p in np.linspace(0, 1.5, 7)))
    out.append(_check("disc wall traction and pressure", worst, 1e-10))

    nad = nadai_velocity()
    worst = max(max(abs(nad.eval_fn(float(x), yv)[0] - float(x)),
                    abs(nad.eval_fn(float(x), yv)[1] + yv))
                for x in xs for yv in (1.0, -1.0))
    out.append(_check("linear-edge flow plate data", worst, 1e-10))

    qe = quadratic_edge_velocity(C1=3.0, C2=math.pi)
    worst = max(max(abs(qe.eval_fn(float(x), yv)[0] - float(x) ** 2),
                    abs(qe.eval_fn(float(x), yv)[1] + yv * (2.0 * float(x) - math.pi)))
                for x in xs for yv in (1.0, -1.0))
    out.append(_check("quadratic-edge flow plate data", worst, 1e-10))

    ex = exponential_velocity(c1=0.0, c2=-1.0)
    c2 = -1.0
    worst = max(abs(ex.eval_fn(float(x), yv)[0] - yv * c2 * (0.5 * math.pi - 1.0) * math.exp(-0.5 * float(x)))
                for x in xs for yv in (1.0, -1.0))
    out.append(_check("exponential flow plate data (smooth member)", worst, 1e-10))
    return out


def dissipation_checks() -> list[CheckResult]:
    out = []
    bg = catalog.prandtl_field()
    xs = np.linspace(-2.0, 2.0, 21)
    ys = np.linspace(-0.95, 0.95, 21)
    nad = nadai_velocity()
    qe = quadratic_edge_velocity(C1=3.0, C2=math.pi)

    worst = max(abs(dissipation_at(nad, bg, cart(float(x), float(y))) - 1.0 / math.sqrt(1.0 - y * y))
                for x in xs for y in ys)
    out.append(_check("dissipation of linear-edge flow", worst, 1e-8))

    worst = max(abs(dissipation_at(qe, bg, cart(float(x), float(y)))
                    - 2.0 * (float(x) - 2.0 * math.sqrt(1.0 - y * y)) / math.sqrt(1.0 - y * y))
                for x in xs for y in ys)
    out.append(_check("dissipation of quadratic-edge flow", worst, 1e-8))

    worst = max(abs(bracket_root(lambda x: dissipation_at(qe, bg, cart(x, float(y))), -1.0, 4.0)
                    - 2.0 * math.sqrt(1.0 - y * y)) for y in np.linspace(-0.9, 0.9, 13))
    out.append(_check("dissipation sign boundary", worst, 1e-8))

    exp_paper = exponential_velocity(c1=0.0, c2=-1.0, paper_halves=True)
    min_d = min(dissipation_at(exp_paper, bg, cart(float(x), float(y))) for x in xs for y in ys)
    out.append(_check("exponential flow dissipation >= 0 (per-half member)", -min_d, 1e-12))

    bad = sum(1 for x in xs for y in ys
              if float(x) > 0.5 + 2.0 * math.sqrt(1.0 - y * y)
              and dissipation_at(qe, bg, cart(float(x), float(y)))
              <= dissipation_at(nad, bg, cart(float(x), float(y))))
    out.append(_check("dissipation ordering beyond x = 1/2 + 2 sqrt(1-y^2)", float(bad), 0.0))
    return out


def streamline_checks() -> list[CheckResult]:
    out = []
    cases = [
        (nadai_velocity(), "nadai", cart(1.1, 0.4)),
        (quadratic_edge_velocity(C1=3.0, C2=math.pi), "quadratic_edge", cart(2.5, -0.3)),
        (exponential_velocity(c1=1.0, c2=0.0), "exponential_c2_0", cart(0.5, 0.4)),
    ]
    for vf, key, start in cases:
        H = streamline_function(key)
        ln = trace_streamline(vf, start, step=1e-3, max_arclen=1.0)
        vals = [H(p.x, p.y) for p in ln.points]
        drift = max(abs(v - vals[0]) for v in vals)
        out.append(_check(f"streamline conservation {key}", drift, 1e-4,
                          note=f"arc={ln.s[-1]:.2f}"))
    return out


def invariance_checks() -> list[CheckResult]:
    out = []
    fields = [f for f in acceptance_fields() if f.name != "simple_wave"]
    fields.append(simple_wave_field(ZERO_FN, theta_bracket=(-1.5, -0.1)))
    neg_total = 0.0
    for f in fields:
        op = subalgebra_operator(f)
        pts = f.chart(4)
        worst = max(max(abs(r) for r in check_invariance(op, f, p)) for p in pts)
        out.append(_check(f"invariance {_field_label(f)}", worst, 1e-7))
        # negative control: a generically wrong generator must be rejected
        if f.frame == "cartesian":
            bad_op = stress_algebra(f.k)["X1"] if f.name != "simple_wave" \
                else stress_algebra(f.k)["X3"]
        else:
            bad_op = polar_stress_algebra(f.k)["X3p"]
        neg = max(max(abs(r) for r in check_invariance(bad_op, f, p)) for p in pts)
        neg_total = min(neg_total, neg) if neg_total else neg
        out.append(_check(f"non-invariance control {_field_label(f)}", 1e-3 - neg, 0.0,
                          note=f"residual={neg:.2e}"))
    rep = quasi_scale_generator_check(0.7, 0.8)
    out.append(_check("quasi-scale generator identification", max(rep.values()), 1e-7))
    return out


def defect_sensitivity_checks() -> list[CheckResult]:
    out = []
    for f in acceptance_fields():
        bad = perturbed(f, 1e-2)
        rep = sweep_stress(bad, n=10, mode="analytic")
        out.append(_check(f"defect sensitivity {_field_label(f)}", 1e-3 - rep.max_abs, 0.0,
                          note=f"perturbed residual={rep.max_abs:.2e}"))
    return out


SUITES = {
    "stress_residuals": stress_residual_checks,
    "riemann_drift": riemann_drift_checks,
    "closed_forms": closed_form_trace_checks,
    "envelopes": envelope_checks,
    "structure_constants": structure_constant_checks,
    "velocity_residuals": velocity_residual_checks,
    "boundary_conditions": boundary_condition_checks,
    "dissipation": dissipation_checks,
    "streamlines": streamline_checks,
    "invariance": invariance_checks,
    "defect_sensitivity": defect_sensitivity_checks,
}


def run_all(suites: list[str] | None = None) -> dict:
    """Run the named suites (all by default) and collect a JSON-able report."""
    t0 = time.time()
    names = suites if suites is not None else list(SUITES)
    checks: list[CheckResult] = []
    for name in names:
        checks.extend(SUITES[name]())
    return {
        "all_passed": all(c.passed for c in checks),
        "n_checks": len(checks),
        "n_failed": sum(1 for c in checks if not c.passed),
        "elapsed_seconds": time.time() - t0,
        "checks": [c.as_dict() for c in checks],
    }


def verify_solution(name: str, params: dict | None = None, perturb: float = 0.0,
                    n: int = 30) -> dict:
    """Residual sweep of one named solution, optionally with a defect injected."""
    f = build_field(name, params)
    if perturb:
        f = perturbed(f, perturb)
    rep = sweep_stress(f, n=n, mode="analytic")
    rep_fd = sweep_stress(f, n=max(8, n // 3), mode="fd")
    thr_a, thr_fd = 1e-9 * f.k, 1e-4 * f.k
    checks = [
        _check(f"stress residual {name} (analytic)", rep.max_abs, thr_a),
        _check(f"stress residual {name} (fd)", rep_fd.max_abs, thr_fd),
    ]
    return {
        "all_passed": all(c.passed for c in checks),
        "n_checks": len(checks),
        "n_failed": sum(1 for c in checks if not c.passed),
        "checks": [c.as_dict() for c in checks],
    }
