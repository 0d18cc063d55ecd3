"""Slip-line geometry: tracing, closed-form families, envelopes.

Family convention (fixed everywhere): the *first* family has Cartesian slope
dy/dx = tan(theta), the *second* dy/dx = -cot(theta).  In polar coordinates
the first family satisfies dr/dphi = r cot(theta_p) and the second
dr/dphi = -r tan(theta_p) with theta_p = theta - phi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .catalog import (
    StressField,
    CharCoords,
    revuzhenko_envelope_eta,
    revuzhenko_map,
    two_circles_constants,
)
from .core import (
    CARTESIAN,
    DomainError,
    MultipleRoots,
    NoEnvelope,
    NoRootInBracket,
    NoSignChange,
    POLAR,
    Point2,
    SingularCoords,
    SliplineError,
    StartOutsideDomain,
    StressState,
    UnsupportedField,
    cart,
    polar,
)
from .numerics import adaptive_simpson, bracket_root, rk4_step

FIRST = 1
SECOND = 2


def riemann_invariants(s: StressState) -> CharCoords:
    """Invariants sigma/2k -+ theta, constant along the first/second family."""
    half = s.sigma / (2.0 * s.k)
    return CharCoords(xi=half - s.theta, eta=half + s.theta)


def slip_direction(s: StressState, family: int, frame: str = CARTESIAN,
                   phi: float = 0.0) -> tuple[float, float]:
    """Unit slip direction for one family.

    Cartesian frame: (cos theta, sin theta) for the first family,
    (sin theta, -cos theta) for the second.  Polar frame: the same formulas in
    the local (radial, circumferential) basis with theta_p = theta - phi.
    """
    ang = s.theta if frame == CARTESIAN else s.theta - phi
    if family == FIRST:
        return math.cos(ang), math.sin(ang)
    if family == SECOND:
        return math.sin(ang), -math.cos(ang)
    raise ValueError("family must be 1 or 2")


# --------------------------------------------------------------------------
# traced polylines
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Polyline:
    """Traced curve: arc length, Cartesian vertices, per-vertex stress."""

    field_name: str
    family: int | None
    s: list[float]
    points: list[Point2]
    states: list[StressState]

    def __len__(self) -> int:
        return len(self.s)

    def xy(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.points])

    def invariants(self) -> np.ndarray:
        """Columns (xi, eta) along the trace."""
        vals = [riemann_invariants(st) for st in self.states]
        return np.array([[c.xi, c.eta] for c in vals])


def trace_slipline(
    field: StressField,
    start: Point2,
    family: int,
    step: float = 1e-3,
    max_arclen: float = 2.0,
    margin: float = 1e-2,
    orientation: int = +1,
) -> Polyline:
    """Integrate one slip line with fixed-step classical RK4.

    The step is fixed on purpose: the drift of the conserved characteristic
    invariant along the trace is the accuracy monitor and must stay visible
    rather than be hidden by adaptive step control.  Tracing stops at the
    domain boundary, at ``max_arclen``, or ``margin`` before a singular
    boundary (envelope tangency and cusp circles), where the derivatives of
    the direction field blow up and fixed-step accuracy would silently decay.
    """
    p = start.to_cartesian()
    if not field.contains(p):
        raise StartOutsideDomain(f"{field.name}: trace start {p.coords} outside domain")

    st0 = field.stress(p)
    ref = slip_direction(st0, family)
    if orientation < 0:
        ref = (-ref[0], -ref[1])

    s_vals: list[float] = []
    pts: list[Point2] = []
    states: list[StressState] = []

    def record(s: float, q: Point2, st: StressState) -> None:
        s_vals.append(s)
        pts.append(q)
        states.append(st)

    record(0.0, p, st0)
    s = 0.0
    xy = (p.x, p.y)
    while s + step <= max_arclen + 1e-12:
        base = ref

        def direction(q: tuple[float, float]) -> tuple[float, float]:
            st = field.stress(cart(q[0], q[1]))
            d = slip_direction(st, family)
            if d[0] * base[0] + d[1] * base[1] < 0.0:
                d = (-d[0], -d[1])
            return d

        try:
            nxt = rk4_step(xy, step, direction)
            q = cart(*nxt)
            if not field.contains(q):
                break
            st = field.stress(q)
        except (DomainError, SingularCoords, NoRootInBracket, MultipleRoots):
            break
        s += step
        xy = nxt
        d_new = slip_direction(st, family)
        if d_new[0] * base[0] + d_new[1] * base[1] < 0.0:
            d_new = (-d_new[0], -d_new[1])
        ref = d_new
        record(s, q, st)
        try:
            if field.boundary_gap(q) < margin:
                break
        except SliplineError:
            break
    return Polyline(field.name, family, s_vals, pts, states)


def invariant_drift_per_unit_arclen(line: Polyline) -> float:
    """Max drift of the family's conserved invariant, per unit arc length."""
    if len(line) < 2 or line.s[-1] == line.s[0]:
        return 0.0
    inv = line.invariants()
    col = 0 if line.family == FIRST else 1
    drift = float(np.max(np.abs(inv[:, col] - inv[0, col])))
    return drift / (line.s[-1] - line.s[0])


# --------------------------------------------------------------------------
# closed-form slip-line families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ParametricCurve:
    """Closed-form slip line: Cartesian point and local angle per parameter."""

    name: str
    family: int
    t_range: tuple[float, float]
    point_at: Callable[[float], Point2]
    theta_at: Callable[[float], float] | None = None
    relation: Callable[[Point2], float] | None = None  # family constant at a point

    def sample(self, n: int = 200) -> np.ndarray:
        ts = np.linspace(self.t_range[0], self.t_range[1], n)
        return np.array([[self.point_at(float(t)).x, self.point_at(float(t)).y] for t in ts])

    def tangent_at(self, t: float, h: float = 1e-6) -> tuple[float, float]:
        a = self.point_at(t - h)
        b = self.point_at(t + h)
        dx, dy = b.x - a.x, b.y - a.y
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise SingularCoords("degenerate curve tangent")
        return dx / norm, dy / norm


def _prandtl_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    prm = field.params
    if not (prm.get("m", 1.0) == 1.0 and prm.get("h", 1.0) == 1.0):
        raise UnsupportedField("cycloid closed form needs the m = 1, h = 1 normalization")
    sgn = -1.0 if family == FIRST else +1.0  # x = -+2 theta + sqrt(1-y^2) + C

    def point_at(th: float) -> Point2:
        # theta in (-pi/2, 0): sqrt(1 - y^2) = -sin 2 theta on this branch
        return cart(sgn * 2.0 * th - math.sin(2.0 * th) + curve_const, math.cos(2.0 * th))

    def relation(p: Point2) -> float:
        th = field.eval_fn(p.x, p.y)[1]
        return p.x - (sgn * 2.0 * th - math.sin(2.0 * th))

    return ParametricCurve(
        name="cycloid", family=family, t_range=(-0.5 * math.pi + 1e-6, -1e-6),
        point_at=point_at, theta_at=lambda th: th, relation=relation,
    )


def _two_circles_phi_rate(t: float, C2: float, family: int) -> float:
    # d phi / d t along a slip line, t = 2 theta_p; smooth on (C2 > 1)
    if family == FIRST:
        return math.sin(0.5 * t) ** 2 / (math.cos(t) - C2)
    return -math.cos(0.5 * t) ** 2 / (math.cos(t) - C2)


def _two_circles_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    a, b = field.params["a"], field.params["b"]
    C1, C2 = two_circles_constants(a, b)

    def r_of_t(t: float) -> float:
        return math.sqrt(C1 / (math.cos(t) - C2))

    def phi_of_t(t: float) -> float:
        return curve_const + adaptive_simpson(
            lambda u: _two_circles_phi_rate(u, C2, family), math.pi, t, tol=1e-12)

    def point_at(t: float) -> Point2:
        return polar(r_of_t(t), phi_of_t(t)).to_cartesian()

    # t = 2 theta_p runs through pi (inner tangency, r = a); the angle field
    # along the curve is theta = phi + t/2.
    return ParametricCurve(
        name="two-circles slip line", family=family,
        t_range=(0.05, 2.0 * math.pi - 0.05) if family == FIRST else (-math.pi + 0.05, math.pi - 0.05),
        point_at=point_at,
        theta_at=lambda t: phi_of_t(t) + 0.5 * t,
        relation=_two_circles_relation(field, family),
    )


def _two_circles_relation(field: StressField, family: int) -> Callable[[Point2], float] | None:
    """Half-arc relation constant (the classic display for a=1, b=sqrt(2))."""
    if abs(field.params["a"] - 1.0) > 1e-12 or abs(field.params["b"] - math.sqrt(2.0)) > 1e-12:
        return None

    def relation(p: Point2) -> float:
        q = p.to_polar()
        r2 = q.r * q.r
        P = (r2 - 1.0) * (2.0 - r2)
        if P <= 0.0:
            raise DomainError("relation valid strictly inside the annulus")
        core = math.atan((3.0 * r2 - 4.0) / (2.0 * math.sqrt(2.0 * P)))
        asn = math.asin(max(-1.0, min(1.0, 2.0 * r2 - 3.0)))
        if family == SECOND:
            return core / math.sqrt(2.0) - asn - math.sqrt(2.0) * q.phi
        return math.sqrt(2.0) * core - asn - 2.0 * math.sqrt(2.0) * q.phi

    return relation


def _channel_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    c = field.params.get("c", 1.0)
    w_of = field.w_of_theta if hasattr(field, "w_of_theta") else None
    if w_of is None:
        raise UnsupportedField("channel closed form needs the ray-invariant field")
    th_lo, th_hi = field.theta_branch
    span = th_hi - th_lo
    pad = 0.02 * span if math.isfinite(span) else 0.0
    if not math.isfinite(span):
        th_lo, th_hi, pad = -2.0, 2.0, 0.0
    # d ln r / d theta = -(1 + cos 2w)/c on the first family, (1 - cos 2w)/c
    # on the second, so the first carries exp(-theta/c).
    sgn = -1.0 if family == FIRST else +1.0

    def point_at(th: float) -> Point2:
        w = w_of(th)
        r = math.exp(curve_const + sgn * th / c) / math.sqrt(abs(c + math.sin(2.0 * w)))
        return polar(r, th - w).to_cartesian()

    def relation(p: Point2) -> float:
        q = p.to_polar()
        th = field.eval_fn(q.r, q.phi)[1]
        w = th - q.phi
        return math.log(q.r) - sgn * th / c + 0.5 * math.log(abs(c + math.sin(2.0 * w)))

    return ParametricCurve(
        name="channel slip line", family=family, t_range=(th_lo + pad, th_hi - pad),
        point_at=point_at, theta_at=lambda th: th, relation=relation,
    )


def _channel_singular_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    A = field.params["A"]
    phi_of = field.phi_of_theta
    sgn = -1.0 if family == FIRST else +1.0

    def point_at(th: float) -> Point2:
        phi = phi_of(th)
        w = th - phi
        r = math.exp(curve_const + sgn * th) / math.sqrt(abs(1.0 + math.sin(2.0 * w)))
        return polar(r, phi).to_cartesian()

    def relation(p: Point2) -> float:
        q = p.to_polar()
        th = field.eval_fn(q.r, q.phi)[1]
        w = th - q.phi
        return math.log(q.r) - sgn * th + 0.5 * math.log(abs(1.0 + math.sin(2.0 * w)))

    return ParametricCurve(
        name="singular-channel slip line", family=family, t_range=(A + 0.1, A + 6.0),
        point_at=point_at, theta_at=lambda th: th, relation=relation,
    )


def _spiral_curve_integrals(g: float) -> tuple[float, float]:
    """(first-family, second-family) angle integrals for the unit-pitch fan.

    With t = g + pi/8: the first family has phi = cos^2(pi/8) tan t - t + C,
    the second phi = sin^2(pi/8) tan t - t + C.
    """
    t = g + 0.125 * math.pi
    c8 = (2.0 + math.sqrt(2.0)) / 4.0  # cos^2(pi/8)
    s8 = (2.0 - math.sqrt(2.0)) / 4.0  # sin^2(pi/8)
    return c8 * math.tan(t) - t, s8 * math.tan(t) - t


def _spiral_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    if field.params["alpha"] != 1.0 or abs(field.params["A"] - 2.0 * math.sqrt(2.0) * field.k) > 1e-12:
        raise UnsupportedField("fan slip-line closed form needs alpha=1, A=2*sqrt(2)*k")
    glo, ghi = field.g_branch
    lnlam = field.lnlam_of_g

    def phi_of(g: float) -> float:
        i1, i1t = _spiral_curve_integrals(g)
        return (i1 if family == FIRST else i1t) + curve_const

    def point_at(g: float) -> Point2:
        phi = phi_of(g)
        return polar(math.exp(lnlam(g) + phi), phi).to_cartesian()

    def relation(p: Point2) -> float:
        q = p.to_polar()
        g = field.eval_fn(q.r, q.phi)[1] - q.phi
        i1, i1t = _spiral_curve_integrals(g)
        return q.phi - (i1 if family == FIRST else i1t)

    return ParametricCurve(
        name="fan slip line", family=family, t_range=(glo + 0.01, ghi - 0.01),
        point_at=point_at, theta_at=lambda g: phi_of(g) + g, relation=relation,
    )


def _simple_wave_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    Phi = field.Phi
    even = field.even
    straight_family = SECOND if even else FIRST

    if family == straight_family:
        th = curve_const  # the straight line theta = const
        if even:
            foot = (Phi(th) * math.cos(th), Phi(th) * math.sin(th))
            d = (-math.sin(th), math.cos(th))
        else:
            foot = (Phi(th) * math.sin(th), -Phi(th) * math.cos(th))
            d = (math.cos(th), math.sin(th))

        def point_at(s: float) -> Point2:
            return cart(foot[0] + s * d[0], foot[1] + s * d[1])

        return ParametricCurve(
            name="straight characteristic", family=family,
            t_range=(Phi.deriv(th) + 0.2, Phi.deriv(th) + 2.4),
            point_at=point_at, theta_at=lambda s: th,
            relation=lambda p: field.eval_fn(p.x, p.y)[1],
        )

    if not even:
        raise UnsupportedField("curved-family closed form implemented for the even branch")
    if Phi.name == "exp":
        C = Phi(0.0)

        def x_of(th: float) -> float:
            return C * math.exp(th) * (math.sin(th) + math.cos(th)) + curve_const * math.sin(th)

        def y_of(th: float) -> float:
            return C * math.exp(th) * (math.sin(th) - math.cos(th)) - curve_const * math.cos(th)
    else:
        # x = sin(theta) (W(theta) + tau), W = int f' cos, f = Phi/sin
        def fprime(th: float) -> float:
            s = math.sin(th)
            return (Phi.deriv(th) * s - Phi(th) * math.cos(th)) / (s * s)

        th_ref = 0.5 * (field.params.get("t0", 0.3) + 0.3)

        def W(th: float) -> float:
            return adaptive_simpson(lambda u: fprime(u) * math.cos(u), th_ref, th,
                                    tol=1e-12, guard=math.sin, guard_min=1e-6)

        def x_of(th: float) -> float:
            return math.sin(th) * (W(th) + curve_const)

        def y_of(th: float) -> float:
            return (Phi(th) - x_of(th) * math.cos(th)) / math.sin(th)

    def point_at(th: float) -> Point2:
        return cart(x_of(th), y_of(th))

    def relation(p: Point2) -> float:
        # project onto the straight-line direction: regular at sin(theta) = 0
        th = field.eval_fn(p.x, p.y)[1]
        x0 = x_of(th) - curve_const * math.sin(th)
        y0 = y_of(th) + curve_const * math.cos(th)
        return (p.x - x0) * math.sin(th) - (p.y - y0) * math.cos(th)

    return ParametricCurve(
        name="curved characteristic", family=family, t_range=(-0.4, 0.4),
        point_at=point_at, theta_at=lambda th: th, relation=relation,
    )


def _cavity_family(field: StressField, family: int, curve_const: float) -> ParametricCurve:
    # theta_p = pi/4: both families are unit-pitch logarithmic spirals.
    R = field.params["R"]
    sgn = +1.0 if family == FIRST else -1.0  # d ln r / d phi = cot/ -tan (pi/4) = +-1

    def point_at(phi: float) -> Point2:
        return polar(R * math.exp(curve_const + sgn * phi), phi).to_cartesian()

    def relation(p: Point2) -> float:
        q = p.to_polar()
        return math.log(q.r / R) - sgn * q.phi

    return ParametricCurve(
        name="cavity slip line", family=family, t_range=(0.0, 2.0),
        point_at=point_at, theta_at=lambda phi: phi + 0.25 * math.pi, relation=relation,
    )


_FAMILY_BUILDERS: dict[str, Callable[[StressField, int, float], ParametricCurve]] = {
    "prandtl": _prandtl_family,
    "nadai_two_circles": _two_circles_family,
    "nadai_channel": _channel_family,
    "nadai_channel_singular": _channel_singular_family,
    "spiral": _spiral_family,
    "simple_wave": _simple_wave_family,
    "nadai_cavity": _cavity_family,
}


def closed_form_family(field: StressField, family: int, curve_const: float = 0.0) -> ParametricCurve:
    """Closed-form slip-line member of a family, where the solution has one."""
    try:
        builder = _FAMILY_BUILDERS[field.name]
    except KeyError:
        raise UnsupportedField(f"{field.name} has no closed-form slip-line family") from None
    return builder(field, family, curve_const)


# --------------------------------------------------------------------------
# envelopes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeCurve:
    """Envelope of one slip-line family."""

    name: str
    source_family: int
    construction: str  # "closed-form" | "numeric"
    t_range: tuple[float, float]
    point_at: Callable[[float], Point2]
    theta_at: Callable[[float], float] | None = None
    samples: tuple | None = None  # numeric scans: ((K, t, Point2), ...)

    def tangent_at(self, t: float, h: float = 1e-6) -> tuple[float, float]:
        a = self.point_at(t - h)
        b = self.point_at(t + h)
        dx, dy = b.x - a.x, b.y - a.y
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise SingularCoords("degenerate envelope tangent")
        return dx / norm, dy / norm

    def tangency_angle(self, t: float) -> float:
        """Angle between the envelope tangent and the incident slip direction."""
        if self.theta_at is None:
            raise UnsupportedField("envelope carries no angle field")
        tx, ty = self.tangent_at(t)
        st = StressState(sigma=0.0, theta=self.theta_at(t), k=1.0)
        dx, dy = slip_direction(st, self.source_family)
        cross = abs(tx * dy - ty * dx)
        return math.asin(min(1.0, cross))


def _circle_envelope(radius: float, family: int, label: str) -> EnvelopeCurve:
    def point_at(phi: float) -> Point2:
        return polar(radius, phi).to_cartesian()

    def theta_at(phi: float) -> float:
        # theta_p = pi/2 on the inner circle (family 1), 0 on the outer one
        return phi + (0.5 * math.pi if family == FIRST else 0.0)

    return EnvelopeCurve(label, family, "closed-form", (0.0, 2.0 * math.pi), point_at, theta_at)


def _ray_envelope(phi_wall: float, w_wall: float, family: int, label: str) -> EnvelopeCurve:
    def point_at(r: float) -> Point2:
        return polar(r, phi_wall).to_cartesian()

    return EnvelopeCurve(label, family, "closed-form", (0.3, 3.0), point_at,
                         theta_at=lambda r: phi_wall + w_wall)


def envelope_closed_form(field: StressField) -> list[EnvelopeCurve]:
    """The documented envelopes of a catalog solution."""
    name = field.name
    if name == "nadai_two_circles":
        a, b = field.params["a"], field.params["b"]
        return [_circle_envelope(a, FIRST, "inner circle"),
                _circle_envelope(b, SECOND, "outer circle")]

    if name == "prandtl":
        h = field.params["h"]
        if field.params.get("m", 1.0) != 1.0:
            raise NoEnvelope("partial-friction plates are not slip-line envelopes")

        def line(yv: float, family: int, theta: float) -> EnvelopeCurve:
            return EnvelopeCurve(
                f"plate y={yv:+g}", family, "closed-form", (-2.0, 2.0),
                lambda x: cart(x, yv), theta_at=lambda x: theta)

        return [line(h, FIRST, 0.0), line(-h, SECOND, -0.5 * math.pi)]

    if name == "nadai_channel":
        c = field.params["c"]
        if c * c < 1.0:
            raise NoEnvelope("subcritical channel slip lines have no envelope")
        lo_wall, hi_wall = field.walls
        # w = 0 on the upper-angle wall (first family radial), w = -pi/2 on the other
        return [_ray_envelope(hi_wall, 0.0, FIRST, "wall ray (adhesive, w=0)"),
                _ray_envelope(lo_wall, -0.5 * math.pi, SECOND, "wall ray (adhesive, w=-pi/2)")]

    if name == "spiral":
        lnlam = field.lnlam_of_g

        def log_spiral(gstar: float, family: int) -> EnvelopeCurve:
            cst = lnlam(gstar)

            def point_at(phi: float) -> Point2:
                return polar(math.exp(phi + cst), phi).to_cartesian()

            return EnvelopeCurve(
                f"log spiral g={gstar:+.4f}", family, "closed-form", (-0.5, 1.5),
                point_at, theta_at=lambda phi: phi + gstar)

        # first family folds at g = +pi/4, second at g = -pi/4
        return [log_spiral(0.25 * math.pi, FIRST), log_spiral(-0.25 * math.pi, SECOND)]

    if name == "simple_wave":
        Phi = field.Phi
        fam = SECOND if field.even else FIRST

        def point_at(th: float) -> Point2:
            if field.even:
                return cart(Phi(th) * math.cos(th) - Phi.deriv(th) * math.sin(th),
                            Phi(th) * math.sin(th) + Phi.deriv(th) * math.cos(th))
            return cart(Phi(th) * math.sin(th) + Phi.deriv(th) * math.cos(th),
                        -Phi(th) * math.cos(th) + Phi.deriv(th) * math.sin(th))

        return [EnvelopeCurve("straight-family envelope", fam, "closed-form",
                              (-1.0, 1.0), point_at, theta_at=lambda th: th)]

    if name == "revuzhenko":
        # Envelope of the first family (constant-xi curves) of the lower-sign
        # member, along the minus root of 2 xi + eta/(xi^2 + eta^2) = 0 with
        # xi in (0, 1/2); xi * eta < 0 along the arc.  The upper-sign twin is
        # its mirror under eta <-> -eta and carries no separate arc here.
        if field.params.get("sign", "upper") != "lower":
            raise NoEnvelope("spiral-arc envelope is exposed on the lower-sign member")

        def point_lower(xi: float) -> Point2:
            eta = revuzhenko_envelope_eta(xi, "minus")
            r, phi, _, _ = revuzhenko_map(xi, eta, "lower")
            return polar(r, phi).to_cartesian()

        def theta_of(xi: float) -> float:
            eta = revuzhenko_envelope_eta(xi, "minus")
            return eta * eta - xi * xi - 0.25 * math.pi

        return [EnvelopeCurve("spiral arc", FIRST, "closed-form", (0.15, 0.45),
                              point_lower, theta_at=theta_of)]

    raise NoEnvelope(f"{field.name} has no documented envelope")


# --------------------------------------------------------------------------
# numeric envelopes: Jacobian-zero scan over a characteristic net
# --------------------------------------------------------------------------

def characteristic_net(field: StressField, family: int):
    """(net, t_window, K_window): two-parameter net (t, K) -> frame coords.

    ``t`` parameterizes each slip line, ``K`` labels the family member; the
    envelope is the zero set of det d(coords)/d(t, K).
    """
    name = field.name
    if name == "revuzhenko":
        sign = field.params.get("sign", "upper")

        def net(t: float, K: float) -> tuple[float, float]:
            # first family: curves of constant xi -> K = xi, t = eta
            xi, eta = (K, t) if family == FIRST else (t, K)
            r, phi, _, _ = revuzhenko_map(xi, eta, sign)
            return math.log(r), phi

        if family == FIRST:
            return net, (-3.4, -0.85), (0.15, 0.45)
        return net, (0.15, 0.45), (-3.4, -0.85)

    if name == "nadai_two_circles":
        a, b = field.params["a"], field.params["b"]
        C1, C2 = two_circles_constants(a, b)

        def net(t: float, K: float) -> tuple[float, float]:
            lnr = 0.5 * math.log(C1 / (math.cos(t) - C2))
            phi = K + adaptive_simpson(lambda u: _two_circles_phi_rate(u, C2, family),
                                       0.5 * math.pi, t, tol=1e-12)
            return lnr, phi

        window = (0.6 * math.pi, 1.4 * math.pi) if family == FIRST else (-0.4 * math.pi, 0.4 * math.pi)
        return net, window, (0.0, 0.5)

    if name == "nadai_channel":
        c = field.params["c"]
        if c * c < 1.0:
            raise NoEnvelope("subcritical channel slip lines have no envelope")
        w_of = field.w_of_theta
        th_lo, th_hi = field.theta_branch
        sgn = -1.0 if family == FIRST else +1.0

        def net(t: float, K: float) -> tuple[float, float]:
            w = w_of(t)
            r = math.exp(K + sgn * t / c) / math.sqrt(abs(c + math.sin(2.0 * w)))
            return math.log(r), t - w

        if family == FIRST:
            # extend smoothly past the adhesive wall: the fold lives at the
            # branch end th_hi where dphi/dtheta = 0
            b = math.sqrt(c * c - 1.0) / c
            hard_hi = (0.5 * math.pi) / b - field.params.get("c1", 0.0)
            return net, (th_hi - 0.4 * (th_hi - th_lo), min(hard_hi - 1e-3, th_hi + 0.4 * (th_hi - th_lo))), (0.0, 0.5)
        raise NoEnvelope("numeric scan exposed on the first family (w = 0 wall)")

    if name == "simple_wave":
        Phi = field.Phi
        fam = SECOND if field.even else FIRST
        if family != fam:
            raise NoEnvelope("only the straight family has an envelope here")

        def net(t: float, K: float) -> tuple[float, float]:
            # K = line angle, t = position along the line
            if field.even:
                return (Phi(K) * math.cos(K) - t * math.sin(K),
                        Phi(K) * math.sin(K) + t * math.cos(K))
            return (Phi(K) * math.sin(K) + t * math.cos(K),
                    -Phi(K) * math.cos(K) + t * math.sin(K))

        return net, (-1.0, 3.5), (-0.35, 0.35)

    raise UnsupportedField(f"{field.name} provides no two-parameter characteristic net")


def envelope_numeric(
    field: StressField,
    family: int,
    t_window: tuple[float, float] | None = None,
    K_window: tuple[float, float] | None = None,
    grid_n: int = 400,
    n_members: int = 12,
    tol: float = 1e-10,
) -> EnvelopeCurve:
    """Envelope by sign-change scan + bisection of the net Jacobian.

    For each family member K, det d(coords)/d(t, K) is scanned along t on a
    ``grid_n`` lattice; each sign change is refined by bisection to ``tol``.
    Raises :class:`NoSignChange` when the window contains no fold.
    """
    net, t_def, K_def = characteristic_net(field, family)
    t0, t1 = t_window if t_window is not None else t_def
    K0, K1 = K_window if K_window is not None else K_def

    def det_at(t: float, K: float) -> float:
        ht = 1e-6 * max(1.0, abs(t))
        hK = 1e-6 * max(1.0, abs(K))
        a1, b1 = net(t + ht, K)
        a0, b0 = net(t - ht, K)
        c1_, d1 = net(t, K + hK)
        c0_, d0 = net(t, K - hK)
        dt = ((a1 - a0) / (2 * ht), (b1 - b0) / (2 * ht))
        dK = ((c1_ - c0_) / (2 * hK), (d1 - d0) / (2 * hK))
        return dt[0] * dK[1] - dt[1] * dK[0]

    hits: list[tuple[float, float, Point2]] = []
    for K in np.linspace(K0, K1, n_members):
        K = float(K)
        ts = np.linspace(t0, t1, grid_n)
        vals = [det_at(float(t), K) for t in ts]
        for i in range(grid_n - 1):
            if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
                lo, hi = float(ts[i]), float(ts[i + 1])
                t_star = lo if vals[i] == 0.0 else bracket_root(
                    lambda t: det_at(t, K), lo, hi, tol=tol)
                c1_, c2_ = net(t_star, K)
                if field.frame == POLAR:
                    # nets in polar frame return (ln r, phi)
                    pt = polar(math.exp(c1_), c2_).to_cartesian()
                else:
                    pt = cart(c1_, c2_)
                hits.append((K, t_star, pt))
                break
    if not hits:
        raise NoSignChange("no Jacobian sign change in the scan window")

    pts = [h[2] for h in hits]
    Ks = [h[0] for h in hits]

    def point_at(K: float) -> Point2:
        i = int(np.clip(np.searchsorted(Ks, K), 1, len(Ks) - 1))
        w = 0.0 if Ks[i] == Ks[i - 1] else (K - Ks[i - 1]) / (Ks[i] - Ks[i - 1])
        return cart(pts[i - 1].x * (1 - w) + pts[i].x * w,
                    pts[i - 1].y * (1 - w) + pts[i].y * w)

    return EnvelopeCurve(
        name=f"{field.name} family-{family} envelope (numeric)",
        source_family=family,
        construction="numeric",
        t_range=(min(Ks), max(Ks)),
        point_at=point_at,
        samples=tuple(hits),
    )
