"""Velocity fields compatible with the pressed-block stress background.

A velocity pair (u, v) is compatible with a stress solution when it satisfies

    (u_y + v_x) sin(2 theta0) + (u_x - v_y) cos(2 theta0) = 0,
    u_x + v_y = 0,

with theta0 the background's slip angle.  The catalog below collects the
classical closed-form solutions on the pressed-block background (height 1,
fully rough plates, 2k = 1) plus the group-invariant families; each carries
analytic first partials so the compatibility residual can be checked both
analytically and by finite differences of the bare evaluators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .catalog import StressField, prandtl_field
from .core import (
    BackgroundMismatch,
    CARTESIAN,
    DomainError,
    FullStress,
    FunctionParam,
    IndeterminateAtStressIsotropy,
    Point2,
    SliplineError,
    StagnationPoint,
    StressState,
    cart,
)
from .numerics import adaptive_simpson, rk4_step
from .residuals import fd_partial
from .characteristics import Polyline


@dataclass(frozen=True)
class StrainRates:
    """Plane strain rates; e_x + e_y = 0 for admissible flows."""

    e_x: float
    e_y: float
    gamma_xy: float


@dataclass(frozen=True)
class VelocityField:
    """A named closed-form velocity solution on a stress background."""

    name: str
    params: dict
    background: StressField
    eval_fn: Callable[[float, float], tuple[float, float]]
    partials_fn: Callable[[float, float], tuple[float, float, float, float]]
    domain_fn: Callable[[float, float], bool]

    def velocity(self, p: Point2) -> tuple[float, float]:
        q = p.to_cartesian()
        if not self.domain_fn(q.x, q.y):
            raise DomainError(f"{self.name}: point {q.coords} outside domain")
        return self.eval_fn(q.x, q.y)

    def partials(self, p: Point2) -> tuple[float, float, float, float]:
        """(u_x, u_y, v_x, v_y)."""
        q = p.to_cartesian()
        if not self.domain_fn(q.x, q.y):
            raise DomainError(f"{self.name}: point {q.coords} outside domain")
        return self.partials_fn(q.x, q.y)

    def strain_rates(self, p: Point2) -> StrainRates:
        u_x, u_y, v_x, v_y = self.partials(p)
        return StrainRates(e_x=u_x, e_y=v_y, gamma_xy=0.5 * (u_y + v_x))

    def chart(self, n: int = 50, x_range: tuple[float, float] = (-2.0, 2.0),
              y_pad: float = 0.02) -> list[Point2]:
        xs = np.linspace(x_range[0], x_range[1], n)
        ys = np.linspace(-1.0 + y_pad, 1.0 - y_pad, n)
        return [cart(float(x), float(y)) for x in xs for y in ys]


def velocity_residual(vf: VelocityField, bg: StressField, p: Point2,
                      mode: str = "analytic") -> tuple[float, float]:
    """Compatibility residuals (flow equation, incompressibility)."""
    q = p.to_cartesian()
    theta0 = bg.stress(q).theta
    if mode == "analytic":
        u_x, u_y, v_x, v_y = vf.partials(q)
    else:
        u = lambda a, b: vf.eval_fn(a, b)[0]
        v = lambda a, b: vf.eval_fn(a, b)[1]
        u_x = fd_partial(u, q.x, q.y, 0)
        u_y = fd_partial(u, q.x, q.y, 1)
        v_x = fd_partial(v, q.x, q.y, 0)
        v_y = fd_partial(v, q.x, q.y, 1)
    r1 = (u_y + v_x) * math.sin(2.0 * theta0) + (u_x - v_y) * math.cos(2.0 * theta0)
    r2 = u_x + v_y
    return r1, r2


# --------------------------------------------------------------------------
# dissipation
# --------------------------------------------------------------------------

def dissipation(fs: FullStress, sr: StrainRates) -> float:
    """Plastic dissipation rate sigma_x e_x + sigma_y e_y + 2 tau_xy gamma_xy."""
    return fs.sigma_x * sr.e_x + fs.sigma_y * sr.e_y + 2.0 * fs.tau_xy * sr.gamma_xy


def dissipation_at(vf: VelocityField, bg: StressField, p: Point2) -> float:
    return dissipation(bg.full_stress(p), vf.strain_rates(p))


def dissipation_sign_ok(vf: VelocityField, bg: StressField, p: Point2,
                        tol: float = 1e-12) -> bool:
    """Non-negativity of dissipation via the proportionality condition.

    The admissibility condition equates (u_x - v_y)/(sigma_x - sigma_y) with
    (v_x + u_y)/(2 tau_xy) and requires the common ratio to be >= 0.  Both
    sides are evaluated as products (numerator times its own denominator), so
    no division happens where a stress deviator vanishes.
    """
    fs = bg.full_stress(p)
    u_x, u_y, v_x, v_y = vf.partials(p)
    dx = fs.sigma_x - fs.sigma_y
    dn = 2.0 * fs.tau_xy
    if abs(dx) < tol and abs(dn) < tol:
        raise IndeterminateAtStressIsotropy("both stress deviators vanish")
    if abs(dx) >= abs(dn):
        return (u_x - v_y) * dx >= -tol
    return (v_x + u_y) * dn >= -tol


# --------------------------------------------------------------------------
# catalog velocities on the pressed-block background (h = 1, m = 1, 2k = 1)
# --------------------------------------------------------------------------

def _strip_domain(x: float, y: float) -> bool:
    return abs(y) <= 1.0


def _root(y: float) -> float:
    return math.sqrt(max(0.0, 1.0 - y * y))


def _strip_interior(x: float, y: float) -> bool:
    return abs(y) < 1.0


def nadai_velocity() -> VelocityField:
    """Classic linear-edge flow: u = x - 2 sqrt(1-y^2), v = -y."""
    def ev(x: float, y: float) -> tuple[float, float]:
        return x - 2.0 * _root(y), -y

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        return 1.0, 2.0 * y / _root(y), 0.0, -1.0

    return VelocityField("nadai", {}, prandtl_field(), ev, part, _strip_domain)


def quadratic_edge_velocity(C1: float = 0.0, C2: float = 0.0) -> VelocityField:
    """Flow with quadratic edge data: u(x, +-1) = x^2 + C1 - 1 and linear v.

    With C1 = 3, C2 = pi the plate conditions are u = x^2, v = -+(2x - pi).
    """
    def ev(x: float, y: float) -> tuple[float, float]:
        m = _root(y)
        return (x * x - 3.0 * y * y - 4.0 * x * m + C1,
                2.0 * y * m - 2.0 * math.acos(y) - 2.0 * x * y + C2)

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        m = _root(y)
        return (2.0 * x - 4.0 * m,
                -6.0 * y + 4.0 * x * y / m,
                -2.0 * y,
                4.0 * m - 2.0 * x)

    return VelocityField("quadratic_edge", {"C1": C1, "C2": C2}, prandtl_field(),
                         ev, part, _strip_domain)


def plate_slide_velocity(c1: float = 0.0, c2: float = 0.0) -> VelocityField:
    """Opposed tangential plate motion: u = x y + arcsin y - y sqrt(1-y^2) + c1,
    v = -(x^2 + y^2)/2 + c2."""
    def ev(x: float, y: float) -> tuple[float, float]:
        return (x * y + math.asin(max(-1.0, min(1.0, y))) - y * _root(y) + c1,
                -(x * x + y * y) / 2.0 + c2)

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        m = _root(y)
        return y, x + 2.0 * y * y / m, -x, -y

    return VelocityField("plate_slide", {"c1": c1, "c2": c2}, prandtl_field(),
                         ev, part, _strip_domain)


def spin_velocity() -> VelocityField:
    """u = y, v = -x: compatible with every background (trivial spin)."""
    return VelocityField(
        "spin", {}, prandtl_field(),
        lambda x, y: (y, -x),
        lambda x, y: (0.0, 1.0, -1.0, 0.0),
        _strip_domain,
    )


def rotation_invariant_velocity(c1: float = 0.0, c2: float = 1.0) -> VelocityField:
    """Invariant flow of the rotation-type symmetry of the block system.

    In polar velocity variables u = f sin(psi), v = f cos(psi) with
    z = x - sqrt(1-y^2):

        f = c2 cosh^(1/2)(z + c1),
        psi = arccos(tanh(z + c1))/2 - arcsin(y)/2.

    (The reduction's invariant is psi + arcsin(y)/2, which fixes the sign of
    the arcsin term.)
    """
    def parts(x: float, y: float):
        z = x - _root(y) + c1
        t = math.tanh(z)
        f = c2 * math.sqrt(math.cosh(z))
        beta = 0.5 * math.acos(t)
        psi = beta - 0.5 * math.asin(max(-1.0, min(1.0, y)))
        return z, t, f, beta, psi

    def ev(x: float, y: float) -> tuple[float, float]:
        _, _, f, _, psi = parts(x, y)
        return f * math.sin(psi), f * math.cos(psi)

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        z, t, f, beta, psi = parts(x, y)
        m = _root(y)
        fp = 0.5 * f * t                       # df/dz
        betap = -0.5 * math.sqrt(1.0 - t * t)  # dbeta/dz
        z_y = y / m
        psi_x = betap
        psi_y = betap * z_y - 0.5 / m
        s, cpsi = math.sin(psi), math.cos(psi)
        u_x = fp * s + f * cpsi * psi_x
        u_y = fp * z_y * s + f * cpsi * psi_y
        v_x = fp * cpsi - f * s * psi_x
        v_y = fp * z_y * cpsi - f * s * psi_y
        return u_x, u_y, v_x, v_y

    return VelocityField("rotation_invariant", {"c1": c1, "c2": c2}, prandtl_field(),
                         ev, part, _strip_interior)


def twist_invariant_velocity(const: float = 0.0, f0: float = 1.0,
                             quad_tol: float = 1e-11) -> VelocityField:
    """Invariant flow of the translation-plus-rotation symmetry.

    With z = x - sqrt(1-y^2) - arcsin(y)/2:

        g = arctan(2 - sqrt(3) tanh(z/sqrt(3) + const)),
        ln f = (2/3) Int cos(2 g) dz   (adaptive quadrature),
        u = f sin(g - arcsin(y)/2), v = f cos(g - arcsin(y)/2).
    """
    s3 = math.sqrt(3.0)

    def g_of(z: float) -> float:
        return math.atan(2.0 - s3 * math.tanh(z / s3 + const))

    def lnf_of(z: float) -> float:
        return adaptive_simpson(lambda zz: math.cos(2.0 * g_of(zz)), 0.0, z,
                                tol=quad_tol) * (2.0 / 3.0)

    def parts(x: float, y: float):
        m = _root(y)
        asy = math.asin(max(-1.0, min(1.0, y)))
        z = x - m - 0.5 * asy
        g = g_of(z)
        f = f0 * math.exp(lnf_of(z))
        psi = g - 0.5 * asy
        return m, z, g, f, psi

    def ev(x: float, y: float) -> tuple[float, float]:
        _, _, _, f, psi = parts(x, y)
        return f * math.sin(psi), f * math.cos(psi)

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        m, z, g, f, psi = parts(x, y)
        gp = 1.0 / 3.0 - (2.0 / 3.0) * math.sin(2.0 * g)
        fp = (2.0 / 3.0) * math.cos(2.0 * g) * f
        z_y = (y - 0.5) / m
        psi_x = gp
        psi_y = gp * z_y - 0.5 / m
        s, c = math.sin(psi), math.cos(psi)
        u_x = fp * s + f * c * psi_x
        u_y = fp * z_y * s + f * c * psi_y
        v_x = fp * c - f * s * psi_x
        v_y = fp * z_y * c - f * s * psi_y
        return u_x, u_y, v_x, v_y

    return VelocityField("twist_invariant", {"const": const, "f0": f0}, prandtl_field(),
                         ev, part, _strip_interior)


def exponential_velocity(c1: float = 0.0, c2: float = -1.0,
                         paper_halves: bool = False,
                         series_cut: float = 1e-3) -> VelocityField:
    """Translation-and-scale invariant flow u = e^(-x/2) f(y), v = e^(-x/2) g(y).

    The half-strip closed form is

      u = y e^{(-x + s)/2} (1-s)^{-1/2} [c1 + (c2/y)(-1 + s + y arcsin y)],
      v =   e^{(-x + s)/2} (1-s)^{+1/2} [c1 + (c2/y)( 1 + s + y arcsin y)],

    with s = sqrt(1-y^2).  As printed it is a solution on each half strip but
    glues non-smoothly at y = 0 (|y|-type kink in u, sign jump in v).  The
    default here is the smooth solution of the reduced linear system: the
    analytic continuation that negates the formula for y < 0, making u odd
    and v even.  ``paper_halves=True`` keeps the raw per-half form instead,
    which is the variant whose plates approach each other and whose
    dissipation stays sign-definite across the whole strip.  Near y = 0 a
    series evaluation avoids the 0/0 cancellation.
    """
    alpha = -0.5

    def halves(y: float) -> tuple[float, float]:
        # (f(y), g(y)) of the printed half-strip form
        s = _root(y)
        asy = math.asin(max(-1.0, min(1.0, y)))
        if abs(y) < series_cut:
            # series through y^3: (1-s) = y^2/2 (1 + y^2/4 + ...)
            ex = math.exp(0.5 * s)
            f = math.sqrt(2.0) * ex * (1.0 - y * y / 8.0) * (c1 + c2 * (0.5 * y + y**3 / 24.0))
            g = ex * (1.0 + y * y / 8.0) * (c1 * y / math.sqrt(2.0)
                                            + math.sqrt(2.0) * c2 * (1.0 + y * y / 4.0))
            sgn = 1.0 if y >= 0.0 else -1.0
            return sgn * f, sgn * g
        root1ms = math.sqrt(1.0 - s)
        bra_u = c1 + (c2 / y) * (-1.0 + s + y * asy)
        bra_v = c1 + (c2 / y) * (1.0 + s + y * asy)
        return (y * math.exp(0.5 * s) / root1ms * bra_u,
                math.exp(0.5 * s) * root1ms * bra_v)

    def fg(y: float) -> tuple[float, float]:
        f, g = halves(y)
        if not paper_halves and y < 0.0:
            return -f, -g
        return f, g

    def ev(x: float, y: float) -> tuple[float, float]:
        f, g = fg(y)
        ex = math.exp(alpha * x)
        return ex * f, ex * g

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        # the reduced system gives g' = -alpha f and
        # f' = -alpha g - y (g' - alpha f)/sqrt(1-y^2) exactly
        u, v = ev(x, y)
        m = _root(y)
        u_x = alpha * u
        v_x = alpha * v
        v_y = -alpha * u
        u_y = -alpha * v - y * u / m
        return u_x, u_y, v_x, v_y

    return VelocityField("exponential", {"c1": c1, "c2": c2, "paper_halves": paper_halves},
                         prandtl_field(), ev, part, _strip_domain)


def simple_wave_velocity(U: FunctionParam, V: FunctionParam, bg: StressField) -> VelocityField:
    """Characteristic-component flow on a simple-wave stress background.

    u = U(theta) cos(theta) - V(J) sin(theta), v = U(theta) sin(theta) +
    V(J) cos(theta), with J the straight-family line coordinate.  Both
    compatibility residuals reduce to (U'(theta) - V(J))/E on the background,
    so the pair solves the system iff U' matches V along the lines; the
    residual is reported honestly for arbitrary pairs.
    """
    if bg.name != "simple_wave":
        raise BackgroundMismatch("simple-wave velocities need a simple-wave background")
    Phi = bg.Phi
    even = bg.even

    def fields(x: float, y: float):
        th = bg.theta_at(x, y)
        E = bg.line_scale(th, x, y)
        J = x * math.cos(th) + y * math.sin(th) if even else x * math.sin(th) - y * math.cos(th)
        return th, E, J

    def ev(x: float, y: float) -> tuple[float, float]:
        th, _, J = fields(x, y)
        c, s = math.cos(th), math.sin(th)
        return U(th) * c - V(J) * s, U(th) * s + V(J) * c

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        th, E, J = fields(x, y)
        c, s = math.cos(th), math.sin(th)
        if even:
            th_x, th_y = c / E, s / E
            J_x, J_y = Phi.deriv(th) * c / E, Phi.deriv(th) * s / E
        else:
            th_x, th_y = -s / E, c / E
            J_x, J_y = -Phi.deriv(th) * s / E, Phi.deriv(th) * c / E
        Uv, Vv = U(th), V(J)
        dU, dV = U.deriv(th), V.deriv(J)
        du_dth = dU * c - Uv * s - Vv * c
        dv_dth = dU * s + Uv * c - Vv * s
        u_x = du_dth * th_x - dV * J_x * s
        u_y = du_dth * th_y - dV * J_y * s
        v_x = dv_dth * th_x + dV * J_x * c
        v_y = dv_dth * th_y + dV * J_y * c
        return u_x, u_y, v_x, v_y

    return VelocityField("simple_wave", {"U": U.name, "V": V.name}, bg, ev, part,
                         bg.domain_fn)


def spiral_wave_velocity(bg: StressField, scale: float = 1.0) -> VelocityField:
    """Compatible pair on the spiral simple wave: V(J) = scale*J, U' = V(Phi)."""
    C = bg.Phi(0.0)
    U = FunctionParam(fn=lambda t: scale * C * math.exp(t),
                      dfn=lambda t: scale * C * math.exp(t), name="exp")
    V = FunctionParam(fn=lambda J: scale * J, dfn=lambda J: scale, name="linear")
    return simple_wave_velocity(U, V, bg)


def velocity_catalog(spiral_bg: StressField | None = None) -> list[VelocityField]:
    """The seven catalog flows checked by the verification suite."""
    from .catalog import spiral_simple_wave_field

    bg = spiral_bg if spiral_bg is not None else spiral_simple_wave_field()
    return [
        nadai_velocity(),
        quadratic_edge_velocity(C1=3.0, C2=math.pi),
        plate_slide_velocity(),
        rotation_invariant_velocity(),
        twist_invariant_velocity(),
        exponential_velocity(),
        spiral_wave_velocity(bg),
    ]


# --------------------------------------------------------------------------
# streamlines
# --------------------------------------------------------------------------

def trace_streamline(
    vf: VelocityField,
    start: Point2,
    step: float = 1e-3,
    max_arclen: float = 2.0,
    stagnation_tol: float = 1e-12,
    y_margin: float = 5e-3,
) -> Polyline:
    """Integrate the unit velocity direction with fixed-step RK4.

    The curve is arc-length parameterized: the flow's "time" is a loading
    parameter, not physical time, so only the direction field matters.
    Raises :class:`StagnationPoint` when |(u, v)| falls below the tolerance.
    """
    p = start.to_cartesian()
    uv0 = vf.velocity(p)
    if math.hypot(*uv0) < stagnation_tol:
        raise StagnationPoint(f"{vf.name}: zero velocity at start {p.coords}")

    def direction(q: tuple[float, float]) -> tuple[float, float]:
        u, v = vf.eval_fn(q[0], q[1])
        n = math.hypot(u, v)
        if n < stagnation_tol:
            raise StagnationPoint(f"{vf.name}: stagnation at {q}")
        return u / n, v / n

    s_vals = [0.0]
    pts = [p]
    states = [StressState(sigma=0.0, theta=0.0, k=vf.background.k)]
    xy = (p.x, p.y)
    s = 0.0
    while s + step <= max_arclen + 1e-12:
        try:
            nxt = rk4_step(xy, step, direction)
        except (StagnationPoint, DomainError, SliplineError, ValueError):
            break
        if not vf.domain_fn(*nxt) or abs(nxt[1]) > 1.0 - y_margin:
            break
        s += step
        xy = nxt
        s_vals.append(s)
        pts.append(cart(*nxt))
        states.append(states[0])
    return Polyline(vf.name, None, s_vals, pts, states)


def streamline_function(name: str) -> Callable[[float, float], float]:
    """Conserved stream functions for the classical flows (trace oracles)."""
    if name == "nadai":
        return lambda x, y: x * y - y * _root(y) - math.asin(max(-1.0, min(1.0, y)))
    if name == "quadratic_edge":
        # stream function of the C1=3, C2=pi member
        return lambda x, y: (2.0 * x * math.acos(max(-1.0, min(1.0, y))) + y * x * x
                             - 2.0 * x * y * _root(y) - math.pi * x - y**3 + 3.0 * y)
    if name == "exponential_c2_0":
        # c2 = 0 member: x + const = sqrt(1-y^2) + ln|1 - sqrt(1-y^2)|
        return lambda x, y: x - _root(y) - math.log(abs(1.0 - _root(y)))
    raise KeyError(f"no stream function recorded for {name!r}")
