"""Independent PDE residual evaluation.

Residuals are computed two ways: from the field's analytic partials and from
finite differences of the bare evaluators.  The two modes share nothing past
the evaluator itself, so a wrong analytic derivative, a wrong sign in a
closed form, or a broken quadrature shows up as a residual, not as a silently
consistent pair.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .catalog import StressField
from .core import CARTESIAN, DomainError, POLAR, Point2

ANALYTIC = "analytic"
FD = "fd"

#: environment variable capping the sweep thread count
THREADS_ENV = "SLIPLINE_LAB_THREADS"


def fd_partial(f: Callable[[float, float], float], c1: float, c2: float,
               var: int, h: float | None = None) -> float:
    """Central difference with one Richardson step; O(h^4) truncation."""
    base = c1 if var == 0 else c2
    if h is None:
        h = 1e-4 * max(1.0, abs(base))

    def at(t: float) -> float:
        return f(t, c2) if var == 0 else f(c1, t)

    d1 = (at(base + h) - at(base - h)) / (2.0 * h)
    d2 = (at(base + 0.5 * h) - at(base - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


def _field_partials(field: StressField, c1: float, c2: float, mode: str,
                    h: float | None = None) -> tuple[float, float, float, float]:
    if mode == ANALYTIC:
        return field.partials_fn(c1, c2)
    sig = lambda a, b: field.eval_fn(a, b)[0]
    th = lambda a, b: field.eval_fn(a, b)[1]
    return (
        fd_partial(sig, c1, c2, 0, h),
        fd_partial(sig, c1, c2, 1, h),
        fd_partial(th, c1, c2, 0, h),
        fd_partial(th, c1, c2, 1, h),
    )


def residual_cartesian(field: StressField, p: Point2, mode: str = ANALYTIC,
                       h: float | None = None) -> tuple[float, float]:
    """Residuals of the Cartesian governing system at an interior point."""
    if field.frame != CARTESIAN:
        raise DomainError(f"{field.name} is a polar-frame field; use residual_polar")
    x, y = field._coords(p)
    if not field.domain_fn(x, y):
        raise DomainError(f"{field.name}: residual point outside domain")
    ds_dx, ds_dy, dt_dx, dt_dy = _field_partials(field, x, y, mode, h)
    _, theta = field.eval_fn(x, y)
    k2 = 2.0 * field.k
    c2t, s2t = math.cos(2.0 * theta), math.sin(2.0 * theta)
    r1 = ds_dx - k2 * (dt_dx * c2t + dt_dy * s2t)
    r2 = ds_dy - k2 * (dt_dx * s2t - dt_dy * c2t)
    return r1, r2


def residual_polar(field: StressField, p: Point2, mode: str = ANALYTIC,
                   h: float | None = None) -> tuple[float, float]:
    """Residuals of the polar form (theta in the Cartesian convention)."""
    if field.frame != POLAR:
        raise DomainError(f"{field.name} is a Cartesian-frame field; use residual_cartesian")
    r, phi = field._coords(p)
    if not field.domain_fn(r, phi):
        raise DomainError(f"{field.name}: residual point outside domain")
    ds_dr, ds_dphi, dt_dr, dt_dphi = _field_partials(field, r, phi, mode, h)
    _, theta = field.eval_fn(r, phi)
    k2 = 2.0 * field.k
    w = theta - phi
    c2w, s2w = math.cos(2.0 * w), math.sin(2.0 * w)
    r1 = r * ds_dr - k2 * (r * dt_dr * c2w + dt_dphi * s2w)
    r2 = ds_dphi - k2 * (r * dt_dr * s2w - dt_dphi * c2w)
    return r1, r2


def residual_stress(field: StressField, p: Point2, mode: str = ANALYTIC,
                    h: float | None = None) -> tuple[float, float]:
    """Dispatch to the governing system matching the field's frame."""
    if field.frame == CARTESIAN:
        return residual_cartesian(field, p, mode, h)
    return residual_polar(field, p, mode, h)


def residual_velocity(vf, bg, p: Point2, mode: str = ANALYTIC) -> tuple[float, float]:
    """Uniform-reporting alias for the velocity compatibility residual."""
    from .velocity import velocity_residual

    return velocity_residual(vf, bg, p, mode=mode)


def residual_eq_u(u_fn: Callable[[float, float], float],
                  Fp: Callable[[float], float], Gp: Callable[[float], float],
                  xi: float, eta: float, h: float = 1e-3) -> float:
    """Residual of the separated characteristic-plane equation.

    d2/dxi deta ln|u| - (G'/2) d/dxi (1/u) + (F'/2) d/deta u, all by finite
    differences; F', G' are the derivatives of the invariant scalings.
    """
    lnu = lambda a, b: math.log(abs(u_fn(a, b)))
    mixed = fd_partial(lambda a, b: fd_partial(lnu, a, b, 1, h), xi, eta, 0, h)
    d_inv = fd_partial(lambda a, b: 1.0 / u_fn(a, b), xi, eta, 0, h)
    d_u = fd_partial(u_fn, xi, eta, 1, h)
    return mixed - 0.5 * Gp(eta) * d_inv + 0.5 * Fp(xi) * d_u


# --------------------------------------------------------------------------
# grid sweeps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    """Aggregate of |residual| over a sweep lattice."""

    field_name: str
    system: str
    mode: str
    n_points: int
    max_abs: float
    mean_abs: float
    worst_point: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "field": self.field_name,
            "system": self.system,
            "mode": self.mode,
            "n_points": self.n_points,
            "max_abs_residual": self.max_abs,
            "mean_abs_residual": self.mean_abs,
            "worst_point": list(self.worst_point),
        }


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep_stress(field: StressField, points: Sequence[Point2] | None = None,
                 n: int = 50, mode: str = ANALYTIC, h: float | None = None) -> ResidualReport:
    """Residual sweep of a stress field over its chart (or explicit points)."""
    pts = list(points) if points is not None else field.chart(n)
    system = "cartesian" if field.frame == CARTESIAN else "polar"

    def one(p: Point2) -> tuple[float, tuple[float, float]]:
        r1, r2 = residual_stress(field, p, mode, h)
        return max(abs(r1), abs(r2)), p.coords

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            vals = list(ex.map(one, pts))
    else:
        vals = [one(p) for p in pts]
    peak, worst = max(vals, key=lambda t: t[0])
    mean = sum(v for v, _ in vals) / len(vals)
    return ResidualReport(field.name, system, mode, len(vals), peak, mean, worst)


def sweep_velocity(vf, bg, points: Sequence[Point2], mode: str = ANALYTIC) -> ResidualReport:
    """Residual sweep of a velocity field against its stress background."""
    def one(p: Point2) -> tuple[float, tuple[float, float]]:
        r1, r2 = residual_velocity(vf, bg, p, mode)
        return max(abs(r1), abs(r2)), p.coords

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            vals = list(ex.map(one, points))
    else:
        vals = [one(p) for p in points]
    peak, worst = max(vals, key=lambda t: t[0])
    mean = sum(v for v, _ in vals) / len(vals)
    return ResidualReport(vf.name, "velocity", mode, len(vals), peak, mean, worst)


def yield_identity_max(field: StressField, points: Sequence[Point2] | None = None,
                       n: int = 50) -> float:
    """Max |yield residual| of reconstructed components over the sweep grid."""
    pts = list(points) if points is not None else field.chart(n)
    return max(abs(field.full_stress(p).yield_residual(field.k)) for p in pts)


def perturbed(field: StressField, eps: float) -> StressField:
    """Copy of ``field`` with a smooth O(eps) defect injected into sigma.

    The defect eps * c1^2 has an O(eps) gradient on unit scales, so a working
    residual check must flag it; used for verifier self-tests.
    """
    def ev(c1: float, c2: float) -> tuple[float, float]:
        s, t = field.eval_fn(c1, c2)
        return s + eps * c1 * c1, t

    def part(c1: float, c2: float) -> tuple[float, float, float, float]:
        ds1, ds2, dt1, dt2 = field.partials_fn(c1, c2)
        return ds1 + 2.0 * eps * c1, ds2, dt1, dt2

    return StressField(
        name=f"{field.name}+defect",
        frame=field.frame,
        k=field.k,
        params=dict(field.params, defect=eps),
        subalgebra=None,
        eval_fn=ev,
        partials_fn=part,
        domain_fn=field.domain_fn,
        gap_fn=field.gap_fn,
        chart_fn=field.chart_fn,
    )
