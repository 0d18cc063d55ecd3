"""Catalog of closed-form stress solutions of the plane plasticity system.

Each solution is packaged as a :class:`StressField`: an evaluator for
``(sigma, theta)`` (theta always in the Cartesian convention), analytic first
partials in the field's own frame, a domain predicate with a distance-to-
boundary estimate, a default sampling chart for residual sweeps, and the
symmetry-subalgebra tag the solution is invariant under.

Frames: a Cartesian field takes ``(x, y)``, a polar field ``(r, phi)``.  The
polar fields satisfy the polar form of the governing system; both forms are
checked independently by the residual engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .core import (
    CARTESIAN,
    DEFAULT_K,
    DegenerateSimpleWave,
    DomainError,
    FullStress,
    FunctionParam,
    MultipleRoots,
    POLAR,
    Point2,
    SingularCoords,
    StressState,
    UnsupportedField,
    levy_to_components,
)
from .numerics import adaptive_simpson, bracket_root, solve_unique

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SubalgebraTag:
    """Identifier of a one-dimensional symmetry subalgebra.

    ``kind`` names the transformation content (e.g. pressure shift + radial
    scaling); ``alpha`` and ``amp`` carry the member's continuous parameters.
    """

    kind: str
    alpha: float = 0.0
    amp: float = 0.0
    sign: int = 0


@dataclass(frozen=True)
class CharCoords:
    """Characteristic-coordinate pair; constant along the two slip families."""

    xi: float
    eta: float

    def require_regular(self) -> None:
        if self.xi == 0.0 or self.eta == 0.0:
            raise SingularCoords("characteristic coordinates must be nonzero")


@dataclass(frozen=True)
class StressField:
    """A named closed-form stress solution."""

    name: str
    frame: str
    k: float
    params: dict
    subalgebra: SubalgebraTag | None
    eval_fn: Callable[[float, float], tuple[float, float]]
    partials_fn: Callable[[float, float], tuple[float, float, float, float]]
    domain_fn: Callable[[float, float], bool]
    gap_fn: Callable[[float, float], float] | None = None
    chart_fn: Callable[[int], list[tuple[float, float]]] | None = None

    # -- frame plumbing ----------------------------------------------------

    def _coords(self, p: Point2) -> tuple[float, float]:
        q = p.to_cartesian() if self.frame == CARTESIAN else p.to_polar()
        return q.coords

    def contains(self, p: Point2) -> bool:
        try:
            c1, c2 = self._coords(p)
        except SingularCoords:
            return False
        return self.domain_fn(c1, c2)

    def boundary_gap(self, p: Point2) -> float:
        """Distance to the nearest domain boundary, in the field's own measure."""
        if self.gap_fn is None:
            return math.inf
        c1, c2 = self._coords(p)
        return self.gap_fn(c1, c2)

    def stress(self, p: Point2) -> StressState:
        c1, c2 = self._coords(p)
        if not self.domain_fn(c1, c2):
            raise DomainError(f"{self.name}: point {(c1, c2)} outside domain")
        sigma, theta = self.eval_fn(c1, c2)
        return StressState(sigma=sigma, theta=theta, k=self.k)

    def full_stress(self, p: Point2) -> FullStress:
        return levy_to_components(self.stress(p))

    def partials(self, p: Point2) -> tuple[float, float, float, float]:
        """(d sigma/d c1, d sigma/d c2, d theta/d c1, d theta/d c2)."""
        c1, c2 = self._coords(p)
        if not self.domain_fn(c1, c2):
            raise DomainError(f"{self.name}: point {(c1, c2)} outside domain")
        return self.partials_fn(c1, c2)

    def chart(self, n: int) -> list[Point2]:
        """Default interior sampling lattice (about n x n points) for sweeps."""
        if self.chart_fn is None:
            raise UnsupportedField(f"{self.name} declares no sampling chart")
        return [Point2(c, self.frame) for c in self.chart_fn(n)]


def _grid(a0: float, a1: float, b0: float, b1: float, n: int) -> list[tuple[float, float]]:
    us = np.linspace(a0, a1, n)
    vs = np.linspace(b0, b1, n)
    return [(float(u), float(v)) for u in us for v in vs]


# --------------------------------------------------------------------------
# pressed block between rough plates
# --------------------------------------------------------------------------

def prandtl_field(c: float = 0.0, m: float = 1.0, h: float = 1.0, k: float = DEFAULT_K) -> StressField:
    """Thin block of height 2h compressed between rough plates.

    Component form: sigma_x/k = -c - m x/h + 2 sqrt(1 - m^2 y^2/h^2),
    sigma_y/k = -c - m x/h, tau_xy/k = m y/h, so tau_xy = +-m k on y = +-h.
    The angle branch is theta = -arccos(m y / h) / 2, the unique branch in
    [-pi/2, 0] for which the classic compatible velocity fields satisfy the
    velocity system.
    """
    if not (h > 0.0 and 0.0 <= m <= 1.0):
        raise ValueError("need h > 0 and m in [0, 1]")

    def ev(x: float, y: float) -> tuple[float, float]:
        w = m * y / h
        sigma = k * (-c - m * x / h + math.sqrt(max(0.0, 1.0 - w * w)))
        theta = -0.5 * math.acos(max(-1.0, min(1.0, w)))
        return sigma, theta

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        w = m * y / h
        root = math.sqrt(1.0 - w * w)
        if root == 0.0:
            raise DomainError("prandtl: angle derivative singular at |m y| = h")
        ds_dx = -k * m / h
        ds_dy = -k * m * m * y / (h * h * root)
        dt_dx = 0.0
        dt_dy = (m / h) / (2.0 * root)
        return ds_dx, ds_dy, dt_dx, dt_dy

    return StressField(
        name="prandtl",
        frame=CARTESIAN,
        k=k,
        params={"c": c, "m": m, "h": h, "k": k},
        subalgebra=SubalgebraTag(kind="pressure-shift-x-translation", amp=2.0 * k / (m / h) if m else 0.0),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=lambda x, y: abs(y) <= h and abs(m * y / h) <= 1.0,
        gap_fn=lambda x, y: h - abs(y),
        chart_fn=lambda n: _grid(-2.0, 2.0, -0.99 * h, 0.99 * h, n),
    )


# --------------------------------------------------------------------------
# circular cavity under far pressure
# --------------------------------------------------------------------------

def nadai_cavity_field(R: float = 1.0, p: float = 0.0, k: float = DEFAULT_K) -> StressField:
    """Plastic annulus around a circular cavity, zero tangential traction.

    theta = phi + pi/4, sigma = 2 k ln(r/R) + k - p for r >= R.
    """
    if not R > 0.0:
        raise ValueError("cavity radius must be positive")

    def ev(r: float, phi: float) -> tuple[float, float]:
        return 2.0 * k * math.log(r / R) + k - p, phi + 0.25 * math.pi

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        return 2.0 * k / r, 0.0, 0.0, 1.0

    return StressField(
        name="nadai_cavity",
        frame=POLAR,
        k=k,
        params={"R": R, "p": p, "k": k},
        subalgebra=SubalgebraTag(kind="pressure-shift-scale", alpha=1.0 / (2.0 * k)),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=lambda r, phi: r >= R,
        gap_fn=lambda r, phi: r - R,
        chart_fn=lambda n: _grid(R * 1.02, R * 3.0, 0.0, 0.5 * math.pi, n),
    )


# --------------------------------------------------------------------------
# vortex flow around a disc
# --------------------------------------------------------------------------

def nadai_vortex_field(R: float = 1.0, p: float = 0.0, k: float = DEFAULT_K) -> StressField:
    """Rotationally invariant field with full shear traction on r = R.

    sigma = -k ln tan(arccos(R^2/r^2)/2 + pi/4) - p,
    theta = phi - pi/2 + arccos(R^2/r^2)/2;  tau_{r phi} = -k and
    sigma = -p on the disc boundary.
    """
    if not R > 0.0:
        raise ValueError("disc radius must be positive")

    def ev(r: float, phi: float) -> tuple[float, float]:
        w = min(1.0, (R / r) ** 2 * 1.0)
        g = 0.5 * math.acos(w)
        sigma = -k * math.log(math.tan(g + 0.25 * math.pi)) - p
        theta = phi - 0.5 * math.pi + g
        return sigma, theta

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        root = math.sqrt(r**4 - R**4)
        if root == 0.0:
            raise DomainError("vortex: partials singular on r = R")
        dg_dr = R * R / (r * root)
        return -2.0 * k * r / root, 0.0, dg_dr, 1.0

    return StressField(
        name="nadai_vortex",
        frame=POLAR,
        k=k,
        params={"R": R, "p": p, "k": k},
        subalgebra=SubalgebraTag(kind="rotation-scale", alpha=0.0),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=lambda r, phi: r >= R,
        gap_fn=lambda r, phi: r - R,
        chart_fn=lambda n: _grid(R * 1.05, R * 3.0, 0.0, 0.5 * math.pi, n),
    )


# --------------------------------------------------------------------------
# converging wedge channel
# --------------------------------------------------------------------------

def _channel_w_of_theta(c: float, c1: float, c2: float) -> tuple[Callable, Callable, tuple[float, float]]:
    """Return (w(theta), dw/dtheta, theta-branch) for the channel factor system.

    The factor system along rays is theta'(phi) * sin 2(theta - phi) = -c with
    w = theta - phi.  Integration gives, on one monotone branch,

      c^2 > 1:  w = arctan( b*tan(b*(theta + c1)) - 1/c ),  b = sqrt(c^2-1)/c
      c^2 < 1:  w = arctan(-(q*tanh((q/c)*(theta + c2)) + 1)/c ), q = sqrt(1-c^2)

    (both verified against the factor system; the c -> 1 limit reproduces the
    singular ray solution w = -pi/4).
    """
    if c * c > 1.0:
        b = math.sqrt(c * c - 1.0) / c
        u_hi = math.atan(1.0 / math.sqrt(c * c - 1.0))  # wall where w = 0
        u_lo = -0.5 * math.pi                            # wall where w = -pi/2
        margin = 1e-9

        def w(theta: float) -> float:
            u = b * (theta + c1)
            return math.atan(b * math.tan(u) - 1.0 / c)

        def dw(theta: float) -> float:
            u = b * (theta + c1)
            t = math.tan(u)
            T = b * t - 1.0 / c
            return b * b * (1.0 + t * t) / (1.0 + T * T)

        lo = u_lo / b - c1 + math.copysign(margin, b)
        hi = u_hi / b - c1 - math.copysign(margin, b)
        return w, dw, (min(lo, hi), max(lo, hi))

    q = math.sqrt(1.0 - c * c)

    def w(theta: float) -> float:
        tau = math.tanh((q / c) * (theta + c2))
        return math.atan(-(q * tau + 1.0) / c)

    def dw(theta: float) -> float:
        tau = math.tanh((q / c) * (theta + c2))
        T = -(q * tau + 1.0) / c
        return -(q * q / (c * c)) * (1.0 - tau * tau) / (1.0 + T * T)

    return w, dw, (-math.inf, math.inf)


def channel_half_angle(c: float) -> float:
    """Half opening angle of the wedge for the supercritical channel (c > 1)."""
    if not c * c > 1.0:
        raise ValueError("the wedge interpretation needs c^2 > 1")
    root = math.sqrt(c * c - 1.0)
    return c / root * math.atan(math.sqrt((c + 1.0) / (c - 1.0))) - 0.25 * math.pi


def nadai_channel_field(
    c: float,
    k: float = DEFAULT_K,
    c1: float = 0.0,
    c2: float = 0.0,
    const: float = 0.0,
    wall_margin: float = 5e-3,
) -> StressField:
    """Plastic flow through a wedge channel; ray-invariant angle field.

    ``theta`` depends on ``phi`` only and solves the implicit branch relation;
    sigma = -2 k c ln r - k c ln[c + sin 2(theta - phi)] + const.  For c^2 > 1
    the slip-line families have envelopes on the channel walls; for c^2 < 1
    there is no envelope.
    """
    if c == 0.0 or abs(c) == 1.0:
        raise ValueError("need c != 0 and |c| != 1 (the |c|=1 case is the singular-ray pair)")
    w_of, dw_of, (th_lo, th_hi) = _channel_w_of_theta(c, c1, c2)
    supercritical = c * c > 1.0
    if supercritical:
        phi_ends = sorted((th_lo - w_of(th_lo), th_hi - w_of(th_hi)))
        phi_lo, phi_hi = phi_ends[0] + wall_margin, phi_ends[1] - wall_margin
    else:
        phi_lo, phi_hi = -math.inf, math.inf

    def theta_of_phi(phi: float) -> float:
        if supercritical:
            lo, hi = th_lo, th_hi
        else:
            lo, hi = phi - 0.5 * math.pi, phi + 0.5 * math.pi
        return bracket_root(lambda th: (th - w_of(th)) - phi, lo, hi,
                            df=lambda th: 1.0 - dw_of(th))

    def ev(r: float, phi: float) -> tuple[float, float]:
        th = theta_of_phi(phi)
        w = th - phi
        # c + sin 2w keeps one sign on the branch (its zeros are the branch
        # asymptotes), so ln|.| is the right antiderivative for either sign.
        sigma = -2.0 * k * c * math.log(r) - k * c * math.log(abs(c + math.sin(2.0 * w))) + const
        return sigma, th

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        th = theta_of_phi(phi)
        w = th - phi
        s2w = math.sin(2.0 * w)
        return (
            -2.0 * k * c / r,
            2.0 * k * c * math.cos(2.0 * w) / s2w,
            0.0,
            -c / s2w,
        )

    def dom(r: float, phi: float) -> bool:
        return r > 0.0 and phi_lo <= phi <= phi_hi

    def gap(r: float, phi: float) -> float:
        if not supercritical:
            return math.inf
        return min(phi - phi_lo, phi_hi - phi) + wall_margin

    if supercritical:
        chart = lambda n: _grid(0.5, 2.0, phi_lo + 0.02, phi_hi - 0.02, n)
    else:
        chart = lambda n: _grid(0.5, 2.0, -1.0, 1.0, n)

    fld = StressField(
        name="nadai_channel",
        frame=POLAR,
        k=k,
        params={"c": c, "k": k, "c1": c1, "c2": c2, "const": const},
        subalgebra=SubalgebraTag(kind="pressure-shift-scale", alpha=-1.0 / (2.0 * k * c)),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=dom,
        gap_fn=gap,
        chart_fn=chart,
    )
    object.__setattr__(fld, "theta_of_phi", theta_of_phi)
    object.__setattr__(fld, "w_of_theta", w_of)
    object.__setattr__(fld, "theta_branch", (th_lo, th_hi))
    if supercritical:
        object.__setattr__(fld, "walls", tuple(phi_ends))
    return fld


def nadai_channel_singular_field(
    A: float = 0.0, k: float = DEFAULT_K, const: float = 0.0,
    s_range: tuple[float, float] = (0.05, 20.0),
) -> StressField:
    """Non-singular companion of the |c| = 1 ray pair.

    phi = theta + arctan(1 + 1/(theta - A)) on the branch theta > A, with
    sigma = -2 k ln r - k ln[1 + sin 2(theta - phi)] + const.  (The singular
    member of the pair, theta - phi = const ray field, is the circular-cavity
    solution.)
    """
    s_lo, s_hi = s_range
    if not 0.0 < s_lo < s_hi:
        raise ValueError("need 0 < s_lo < s_hi")

    def phi_of_theta(th: float) -> float:
        return th + math.atan(1.0 + 1.0 / (th - A))

    phi_lo = phi_of_theta(A + s_lo)
    phi_hi = phi_of_theta(A + s_hi)

    def theta_of_phi(phi: float) -> float:
        return bracket_root(lambda th: phi_of_theta(th) - phi, A + s_lo, A + s_hi)

    def ev(r: float, phi: float) -> tuple[float, float]:
        th = theta_of_phi(phi)
        w = th - phi
        sigma = -2.0 * k * math.log(r) - k * math.log(1.0 + math.sin(2.0 * w)) + const
        return sigma, th

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        th = theta_of_phi(phi)
        w = th - phi
        s2w = math.sin(2.0 * w)
        return -2.0 * k / r, 2.0 * k * math.cos(2.0 * w) / s2w, 0.0, -1.0 / s2w

    fld = StressField(
        name="nadai_channel_singular",
        frame=POLAR,
        k=k,
        params={"A": A, "k": k, "const": const},
        subalgebra=SubalgebraTag(kind="pressure-shift-scale", alpha=-1.0 / (2.0 * k)),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=lambda r, phi: r > 0.0 and phi_lo <= phi <= phi_hi,
        gap_fn=lambda r, phi: min(phi - phi_lo, phi_hi - phi),
        chart_fn=lambda n: _grid(0.5, 2.0, phi_lo + 0.05 * (phi_hi - phi_lo),
                                 phi_lo + 0.6 * (phi_hi - phi_lo), n),
    )
    object.__setattr__(fld, "theta_of_phi", theta_of_phi)
    object.__setattr__(fld, "phi_of_theta", phi_of_theta)
    return fld


# --------------------------------------------------------------------------
# annulus between two concentric circles
# --------------------------------------------------------------------------

def two_circles_constants(a: float, b: float) -> tuple[float, float]:
    """Constants of cos 2theta_p = C1 r^-2 + C2 fixed by full wall friction."""
    if not 0.0 < a < b:
        raise ValueError("need 0 < a < b")
    d = b * b - a * a
    return -2.0 * a * a * b * b / d, (a * a + b * b) / d


def nadai_two_circles_field(a: float = 1.0, b: float = SQRT2, k: float = DEFAULT_K) -> StressField:
    """Shear between concentric circles: tau_{r phi} = -k at r=a, +k at r=b.

    cos 2theta_p = C1/r^2 + C2 with the wall constants; sigma = -2 k C2 phi +
    f(r), where f comes from one smooth quadrature (done in the angle variable
    t = 2 theta_p, which removes the inverse-square-root endpoint blowup of
    the raw radial integrand).
    """
    C1, C2 = two_circles_constants(a, b)

    def t_of_r(r: float) -> float:
        return math.acos(max(-1.0, min(1.0, C1 / (r * r) + C2)))

    def f_integrand(t: float) -> float:
        return k * (-C2 + (1.0 - C2 * C2) / (math.cos(t) - C2))

    def f_of_r(r: float) -> float:
        # f(a) = 0 normalization; any other constant is a pressure translation.
        return adaptive_simpson(f_integrand, math.pi, t_of_r(r), tol=1e-12)

    def ev(r: float, phi: float) -> tuple[float, float]:
        tp = 0.5 * t_of_r(r)
        return -2.0 * k * C2 * phi + f_of_r(r), phi + tp

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        t = t_of_r(r)
        st = math.sin(t)
        if st == 0.0:
            raise DomainError("two-circles: partials singular on the wall circles")
        ct = math.cos(t)
        dtp_dr = C1 / (r**3 * st)
        ds_dr = 2.0 * k * (C1 * ct / (r**3 * st) + st / r)
        return ds_dr, -2.0 * k * C2, dtp_dr, 1.0

    pad = 0.05 * (b - a)
    return StressField(
        name="nadai_two_circles",
        frame=POLAR,
        k=k,
        params={"a": a, "b": b, "k": k},
        subalgebra=SubalgebraTag(kind="pressure-shift-rotation", sign=-1, amp=2.0 * k * C2),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=lambda r, phi: a <= r <= b,
        gap_fn=lambda r, phi: min(r - a, b - r),
        chart_fn=lambda n: _grid(a + pad, b - pad, 0.0, 0.5 * math.pi, n),
    )


def two_circles_f_closed(r: float, a: float = 1.0, b: float = SQRT2, k: float = DEFAULT_K) -> float:
    """Closed form of the two-circles quadrature, for cross-checking."""
    C1, C2 = two_circles_constants(a, b)
    t = math.acos(max(-1.0, min(1.0, C1 / (r * r) + C2)))
    root = math.sqrt(C2 * C2 - 1.0)
    amp = math.sqrt((C2 + 1.0) / (C2 - 1.0))

    def F(tt: float) -> float:
        if tt >= math.pi:
            return k * (-C2 * math.pi + root * math.pi)
        return k * (-C2 * tt + 2.0 * root * math.atan(amp * math.tan(0.5 * tt)))

    return F(t) - F(math.pi)


# --------------------------------------------------------------------------
# characteristic-plane (hodograph-like) solution with spiral envelopes
# --------------------------------------------------------------------------

def revuzhenko_map(xi: float, eta: float, sign: str = "upper") -> tuple[float, float, float, float]:
    """Forward map (xi, eta) -> (r, phi, sigma, theta) of the separable solution.

    Built from the characteristic-coordinate separation tan(theta_p) =
    +-eta/xi with the quadratic reparameterization of the invariants; uses the
    2k = 1 normalization.
    """
    if xi == 0.0 or eta == 0.0:
        raise SingularCoords("xi and eta must be nonzero")
    s = 1.0 if sign == "upper" else -1.0
    sigma = xi * xi + eta * eta
    theta = eta * eta - xi * xi - 0.25 * math.pi
    phi = theta - s * math.atan(eta / xi)
    r = math.exp(s * 2.0 * xi * eta) * math.sqrt(xi**-2 + eta**-2)
    return r, phi, sigma, theta


def revuzhenko_jacobian(xi: float, eta: float, sign: str = "upper") -> np.ndarray:
    """d(ln r, phi)/d(xi, eta) of the forward map."""
    s = 1.0 if sign == "upper" else -1.0
    q = xi * xi + eta * eta
    # ln r = s*2*xi*eta + ln(xi^-2 + eta^-2)/2; phi = theta - s*arctan(eta/xi)
    dlnr_dxi = s * 2.0 * eta - eta * eta / (xi * q)
    dlnr_deta = s * 2.0 * xi - xi * xi / (eta * q)
    dphi_dxi = -2.0 * xi + s * eta / q
    dphi_deta = 2.0 * eta - s * xi / q
    return np.array([[dlnr_dxi, dlnr_deta], [dphi_dxi, dphi_deta]])


def revuzhenko_envelope_eta(xi: float, branch: str = "minus") -> float:
    """Envelope root eta(xi) of 2 xi + eta/(xi^2 + eta^2) = 0 (lower-sign field).

    The quadratic in eta gives eta = (-1 -+ sqrt(1 - 16 xi^4)) / (4 xi); the
    'minus' branch is the spiral-arc envelope, the 'plus' one the small bowed
    arc.  Real only for |xi| <= 1/2, and xi * eta < 0 along each.
    """
    disc = 1.0 - 16.0 * xi**4
    if disc < 0.0 or xi == 0.0:
        raise SingularCoords("envelope root needs 0 < |xi| <= 1/2")
    root = math.sqrt(disc)
    if branch == "minus":
        return (-1.0 - root) / (4.0 * xi)
    return (-1.0 + root) / (4.0 * xi)


def revuzhenko_field(sign: str = "upper", box: tuple[float, float, float, float] = (0.55, 0.95, 0.55, 0.95)) -> StressField:
    """Separable characteristic-plane solution as a polar-frame field.

    Evaluation at (r, phi) inverts the forward map by a Newton iteration with
    the analytic Jacobian, seeded from a coarse grid over the chart ``box``
    (chosen inside the first quadrant where the map is fold-free); partials in
    (r, phi) come from the same Jacobian, so residual checks stay analytic.
    """
    if sign not in ("upper", "lower"):
        raise ValueError("sign must be 'upper' or 'lower'")
    k = 0.5  # the separation constants fix the 2k = 1 normalization
    x0, x1, e0, e1 = box
    seeds = [(xi, eta) for xi in np.linspace(x0, x1, 12) for eta in np.linspace(e0, e1, 12)]
    seed_img = [revuzhenko_map(xi, eta, sign)[:2] for (xi, eta) in seeds]

    def invert(r: float, phi: float) -> tuple[float, float]:
        lnr = math.log(r)
        best = min(range(len(seeds)),
                   key=lambda i: (math.log(seed_img[i][0]) - lnr) ** 2 + (seed_img[i][1] - phi) ** 2)
        xi, eta = seeds[best]
        for _ in range(60):
            ri, pi_, _, _ = revuzhenko_map(xi, eta, sign)
            res = np.array([math.log(ri) - lnr, pi_ - phi])
            if float(np.max(np.abs(res))) < 1e-14:
                break
            J = revuzhenko_jacobian(xi, eta, sign)
            try:
                step = np.linalg.solve(J, res)
            except np.linalg.LinAlgError as exc:
                raise DomainError("revuzhenko: singular Jacobian during inversion") from exc
            xi, eta = float(xi - step[0]), float(eta - step[1])
            if xi <= 0.0 or eta <= 0.0:
                raise DomainError("revuzhenko: inversion left the chart quadrant")
        else:
            raise DomainError("revuzhenko: Newton inversion did not converge")
        return xi, eta

    def ev(r: float, phi: float) -> tuple[float, float]:
        xi, eta = invert(r, phi)
        _, _, sigma, theta = revuzhenko_map(xi, eta, sign)
        return sigma, theta

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        xi, eta = invert(r, phi)
        J = revuzhenko_jacobian(xi, eta, sign)  # d(ln r, phi)/d(xi, eta)
        J = J.copy()
        J[0, :] *= r  # -> d(r, phi)/d(xi, eta)
        Jinv = np.linalg.inv(J)
        grad_sigma = np.array([2.0 * xi, 2.0 * eta]) @ Jinv
        grad_theta = np.array([-2.0 * xi, 2.0 * eta]) @ Jinv
        return float(grad_sigma[0]), float(grad_sigma[1]), float(grad_theta[0]), float(grad_theta[1])

    def dom(r: float, phi: float) -> bool:
        try:
            xi, eta = invert(r, phi)
        except DomainError:
            return False
        return x0 - 0.35 <= xi <= x1 + 0.35 and e0 - 0.35 <= eta <= e1 + 0.35

    def chart(n: int) -> list[tuple[float, float]]:
        pts = []
        for xi in np.linspace(x0, x1, n):
            for eta in np.linspace(e0, e1, n):
                r, phi, _, _ = revuzhenko_map(float(xi), float(eta), sign)
                pts.append((r, phi))
        return pts

    fld = StressField(
        name="revuzhenko",
        frame=POLAR,
        k=k,
        params={"sign": sign, "box": box},
        subalgebra=SubalgebraTag(kind="quasi-scale", alpha=0.0),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=dom,
        gap_fn=None,
        chart_fn=chart,
    )
    object.__setattr__(fld, "invert", invert)
    return fld


# --------------------------------------------------------------------------
# spiral fan
# --------------------------------------------------------------------------

def _spiral_branch(alpha: float, ratio: float) -> tuple[float, float]:
    """Monotone g-branch around g = 0 for the fan inversion.

    The branch is limited by zeros of E(g) = 2 a cos 2g + (1-a^2) sin 2g (where
    d ln(lambda)/dg flips sign: the envelopes) and by zeros of
    d(g) = ratio + cos 2g - a sin 2g (where the family integrals blow up).
    """
    def E(g: float) -> float:
        return 2.0 * alpha * math.cos(2.0 * g) + (1.0 - alpha * alpha) * math.sin(2.0 * g)

    def d(g: float) -> float:
        return ratio + math.cos(2.0 * g) - alpha * math.sin(2.0 * g)

    if E(0.0) == 0.0 or d(0.0) == 0.0:
        raise ValueError("spiral: branch degenerate at g = 0")
    lo = hi = 0.0
    step = 1e-3
    while hi < math.pi and E(hi + step) * E(0.0) > 0.0 and d(hi + step) * d(0.0) > 0.0:
        hi += step
    while lo > -math.pi and E(lo - step) * E(0.0) > 0.0 and d(lo - step) * d(0.0) > 0.0:
        lo -= step
    return lo, hi


def spiral_profile_closed(g: float, k: float = DEFAULT_K) -> tuple[float, float]:
    """(ln lambda, f) closed forms for the unit-pitch fan with amp = 2 sqrt2 k.

    With t = g + pi/8:  ln lambda = t - tan(t)/2 - ln cos t  (+ const), and
    f = 2 sqrt2 k (t - tan(t)/4)  (+ const); both normalized to vanish at g=0.
    """
    def lnlam_raw(gg: float) -> float:
        t = gg + 0.125 * math.pi
        return t - 0.5 * math.tan(t) - math.log(math.cos(t))

    def f_raw(gg: float) -> float:
        t = gg + 0.125 * math.pi
        return 2.0 * SQRT2 * k * (t - 0.25 * math.tan(t))

    return lnlam_raw(g) - lnlam_raw(0.0), f_raw(g) - f_raw(0.0)


def spiral_field(
    A: float | None = None,
    alpha: float = 1.0,
    k: float = DEFAULT_K,
    margin: float = 0.02,
    use_closed_form: bool | None = None,
) -> StressField:
    """Fan of logarithmic-spiral type: sigma = A phi + f(lambda), theta = phi
    + g(lambda) with lambda = r exp(-alpha phi).

    The profile g(lambda) inverts d ln(lambda)/dg = E(g)/d(g) on the monotone
    branch through g = 0; f comes from the companion separable equation.  For
    alpha = 1, A = 2 sqrt2 k both integrals have elementary closed forms; the
    quadrature path stays available and the two must agree.
    """
    if alpha == 0.0:
        raise ValueError("alpha = 0 is the rotationally invariant family, not the fan")
    if A is None:
        A = 2.0 * SQRT2 * k
    if abs(abs(A) - 2.0 * k) < 1e-12:
        raise DegenerateSimpleWave("A = +-2k is a simple wave; use simple_wave_field")
    ratio = A / (2.0 * k)
    g_lo, g_hi = _spiral_branch(alpha, ratio)
    closed_ok = alpha == 1.0 and abs(A - 2.0 * SQRT2 * k) < 1e-12
    if use_closed_form is None:
        use_closed_form = closed_ok
    if use_closed_form and not closed_ok:
        raise UnsupportedField("closed forms only for alpha = 1, A = 2*sqrt(2)*k")

    def E(g: float) -> float:
        return 2.0 * alpha * math.cos(2.0 * g) + (1.0 - alpha * alpha) * math.sin(2.0 * g)

    def dfun(g: float) -> float:
        return ratio + math.cos(2.0 * g) - alpha * math.sin(2.0 * g)

    if use_closed_form:
        def lnlam(g: float) -> float:
            return spiral_profile_closed(g, k)[0]

        def f_of_g(g: float) -> float:
            return spiral_profile_closed(g, k)[1]
    else:
        def lnlam(g: float) -> float:
            return adaptive_simpson(lambda gg: E(gg) / dfun(gg), 0.0, g,
                                    tol=1e-10, guard=dfun, guard_min=1e-6)

        def f_of_g(g: float) -> float:
            return adaptive_simpson(
                lambda gg: A * (1.0 / ratio + math.cos(2.0 * gg) - alpha * math.sin(2.0 * gg)) / dfun(gg),
                0.0, g, tol=1e-10, guard=dfun, guard_min=1e-6)

    glo, ghi = g_lo + margin, g_hi - margin
    lam_ends = sorted((lnlam(glo), lnlam(ghi)))

    def g_of_lnlam(x: float) -> float:
        if not lam_ends[0] <= x <= lam_ends[1]:
            raise DomainError(f"spiral: ln lambda = {x:.6g} outside branch {lam_ends}")
        return bracket_root(lambda g: lnlam(g) - x, glo, ghi, df=lambda g: E(g) / dfun(g))

    def ev(r: float, phi: float) -> tuple[float, float]:
        g = g_of_lnlam(math.log(r) - alpha * phi)
        return A * phi + f_of_g(g), phi + g

    def part(r: float, phi: float) -> tuple[float, float, float, float]:
        g = g_of_lnlam(math.log(r) - alpha * phi)
        lam_fp = A * (1.0 / ratio + math.cos(2.0 * g) - alpha * math.sin(2.0 * g)) / E(g)
        lam_gp = dfun(g) / E(g)
        return lam_fp / r, A - alpha * lam_fp, lam_gp / r, 1.0 - alpha * lam_gp

    def dom(r: float, phi: float) -> bool:
        if r <= 0.0:
            return False
        x = math.log(r) - alpha * phi
        return lam_ends[0] <= x <= lam_ends[1]

    def gap(r: float, phi: float) -> float:
        g = g_of_lnlam(math.log(r) - alpha * phi)
        return min(g - glo, ghi - g)

    def chart(n: int) -> list[tuple[float, float]]:
        # Extra pullback from the branch ends: g(ln lambda) has a square-root
        # fold at the envelopes, so finite-difference stencils need room.
        pad = 0.13
        pts = []
        for g in np.linspace(glo + pad, ghi - pad, n):
            for phi in np.linspace(0.0, 1.0, n):
                pts.append((math.exp(lnlam(float(g)) + alpha * float(phi)), float(phi)))
        return pts

    fld = StressField(
        name="spiral",
        frame=POLAR,
        k=k,
        params={"A": A, "alpha": alpha, "k": k},
        subalgebra=SubalgebraTag(kind="pressure-shift-rotation-scale", alpha=alpha, amp=A, sign=+1),
        eval_fn=ev,
        partials_fn=part,
        domain_fn=dom,
        gap_fn=gap,
        chart_fn=chart,
    )
    object.__setattr__(fld, "lnlam_of_g", lnlam)
    object.__setattr__(fld, "f_of_g", f_of_g)
    object.__setattr__(fld, "g_branch", (glo, ghi))
    object.__setattr__(fld, "g_of_lnlam", g_of_lnlam)
    return fld


# --------------------------------------------------------------------------
# simple stress states (one straight characteristic family)
# --------------------------------------------------------------------------

def simple_wave_field(
    Phi: FunctionParam,
    n: int = 0,
    const: float = 0.0,
    k: float = DEFAULT_K,
    theta_bracket: tuple[float, float] = (-1.4, 1.4),
    scan_n: int = 64,
    straightness_margin: float = 1e-3,
) -> StressField:
    """Simple stress state: sigma affine in theta, one straight family.

    For even n:  sigma = 2 k theta + const and theta(x, y) solves
    x cos(theta) + y sin(theta) = Phi(theta); the straight lines carry slope
    -cot(theta) (second family).  For odd n the mirrored relation
    x sin(theta) - y cos(theta) = Phi(theta) applies with sigma = -2 k theta +
    const, and the straight lines carry slope tan(theta) (first family).
    """
    even = n % 2 == 0

    def residual(theta: float, x: float, y: float) -> float:
        if even:
            return x * math.cos(theta) + y * math.sin(theta) - Phi(theta)
        return x * math.sin(theta) - y * math.cos(theta) - Phi(theta)

    def line_scale(theta: float, x: float, y: float) -> float:
        # d(residual)/d(theta); vanishes on the envelope of the straight family.
        if even:
            return -x * math.sin(theta) + y * math.cos(theta) - Phi.deriv(theta)
        return x * math.cos(theta) + y * math.sin(theta) - Phi.deriv(theta)

    def theta_at(x: float, y: float) -> float:
        return solve_unique(lambda th: residual(th, x, y), theta_bracket, scan_n=scan_n,
                            df=lambda th: line_scale(th, x, y))

    def ev(x: float, y: float) -> tuple[float, float]:
        th = theta_at(x, y)
        sgn = 1.0 if even else -1.0
        return sgn * 2.0 * k * th + const, th

    def part(x: float, y: float) -> tuple[float, float, float, float]:
        th = theta_at(x, y)
        E = line_scale(th, x, y)
        if abs(E) < straightness_margin:
            raise DomainError("simple wave: on the straight-family envelope")
        if even:
            tx, ty = -math.cos(th) / E, -math.sin(th) / E
            sgn = 1.0
        else:
            tx, ty = -math.sin(th) / E, math.cos(th) / E
            sgn = -1.0
        return sgn * 2.0 * k * tx, sgn * 2.0 * k * ty, tx, ty

    def dom(x: float, y: float) -> bool:
        # multiplicity is reported, never silently treated as out-of-domain:
        # overlapping fans are physical and the caller must narrow the bracket
        try:
            th = theta_at(x, y)
        except MultipleRoots:
            raise
        except Exception:
            return False
        return abs(line_scale(th, x, y)) > straightness_margin

    def gap(x: float, y: float) -> float:
        th = theta_at(x, y)
        return abs(line_scale(th, x, y))

    def chart(nn: int) -> list[tuple[float, float]]:
        # Every exterior point of a convex envelope lies on two straight lines
        # of the family; sampling well away from the contact point pushes the
        # second line's angle outside the bracket, keeping theta single-valued.
        width = theta_bracket[1] - theta_bracket[0]
        th0 = theta_bracket[0] + 0.3 * width
        th1 = theta_bracket[1] - 0.3 * width
        pts = []
        for th in np.linspace(th0, th1, nn):
            dPhi = Phi.deriv(float(th))
            for s in np.linspace(dPhi + 1.4, dPhi + 2.2, nn):
                c, sn = math.cos(float(th)), math.sin(float(th))
                if even:
                    foot = (Phi(float(th)) * c, Phi(float(th)) * sn)
                    pts.append((foot[0] - s * sn, foot[1] + s * c))
                else:
                    foot = (Phi(float(th)) * sn, -Phi(float(th)) * c)
                    pts.append((foot[0] + s * c, foot[1] + s * sn))
        return pts

    fld = StressField(
        name="simple_wave",
        frame=CARTESIAN,
        k=k,
        params={"n": n, "const": const, "k": k, "phi_name": Phi.name},
        subalgebra=SubalgebraTag(kind="scale") if Phi.name == "zero" else None,
        eval_fn=ev,
        partials_fn=part,
        domain_fn=dom,
        gap_fn=gap,
        chart_fn=chart,
    )
    object.__setattr__(fld, "Phi", Phi)
    object.__setattr__(fld, "even", even)
    object.__setattr__(fld, "theta_at", theta_at)
    object.__setattr__(fld, "line_scale", line_scale)
    return fld


def exp_phi(C: float = 1.0) -> FunctionParam:
    """Phi(theta) = C e^theta, the spiral simple wave profile."""
    return FunctionParam(fn=lambda t: C * math.exp(t), dfn=lambda t: C * math.exp(t), name="exp")


def spiral_simple_wave_field(C: float = 1.0, const: float = 0.0, k: float = DEFAULT_K) -> StressField:
    """sigma = 2 k theta + const with r cos(theta - phi) = C e^theta.

    The default bracket keeps one straight line through each chart point;
    widening it re-admits the second tangent line and triggers MultipleRoots.
    """
    return simple_wave_field(exp_phi(C), n=0, const=const, k=k, theta_bracket=(-0.45, 0.45))


# --------------------------------------------------------------------------
# registry (string + JSON-parameter addressing for the CLI)
# --------------------------------------------------------------------------

def _phi_from_json(spec) -> FunctionParam:
    from .core import ZERO_FN, const_fn

    if spec is None or spec == "zero":
        return ZERO_FN
    if isinstance(spec, (int, float)):
        return const_fn(float(spec))
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "zero":
            return ZERO_FN
        if kind == "const":
            return const_fn(float(spec.get("value", 0.0)))
        if kind == "exp":
            return exp_phi(float(spec.get("C", 1.0)))
        if kind == "poly":
            coeffs = [float(c) for c in spec.get("coeffs", [0.0])]
            poly = np.polynomial.Polynomial(coeffs)
            dpoly = poly.deriv()
            return FunctionParam(fn=lambda t: float(poly(t)), dfn=lambda t: float(dpoly(t)), name="poly")
    raise ValueError(f"unrecognized profile function spec: {spec!r}")


def _build_simple_wave(params: dict) -> StressField:
    p = dict(params)
    phi = _phi_from_json(p.pop("phi", {"kind": "exp", "C": 1.0}))
    bracket = tuple(p.pop("theta_bracket", (-1.4, 1.4)))
    return simple_wave_field(phi, theta_bracket=bracket, **p)


REGISTRY: dict[str, Callable[[dict], StressField]] = {
    "prandtl": lambda p: prandtl_field(**p),
    "nadai_cavity": lambda p: nadai_cavity_field(**p),
    "nadai_vortex": lambda p: nadai_vortex_field(**p),
    "nadai_channel": lambda p: nadai_channel_field(**p),
    "nadai_channel_singular": lambda p: nadai_channel_singular_field(**p),
    "nadai_two_circles": lambda p: nadai_two_circles_field(**p),
    "revuzhenko": lambda p: revuzhenko_field(**p),
    "spiral": lambda p: spiral_field(**p),
    "simple_wave": _build_simple_wave,
}


def build_field(name: str, params: dict | None = None) -> StressField:
    """Instantiate a catalog stress field by name with JSON-style parameters."""
    if name not in REGISTRY:
        raise UnsupportedField(f"unknown solution {name!r}; known: {sorted(REGISTRY)}")
    return REGISTRY[name](dict(params or {}))


def acceptance_fields() -> list[StressField]:
    """The canonical instances exercised by the verification suite."""
    return [
        prandtl_field(),
        nadai_cavity_field(),
        nadai_vortex_field(),
        nadai_channel_field(c=0.5),
        nadai_channel_field(c=2.0),
        nadai_channel_singular_field(),
        nadai_two_circles_field(),
        revuzhenko_field("upper"),
        revuzhenko_field("lower"),
        spiral_field(),
        spiral_simple_wave_field(),
    ]
