"""Plane-strain perfect plasticity primitives.

The whole library works in the mean-stress / shear-angle parameterization of a
yielded stress state: a state at yield under the Saint Venant-Tresca-von Mises
criterion

    (sigma_x - sigma_y)**2 + 4*tau_xy**2 = 4*k**2

is written as

    sigma_x = sigma - k*sin(2*theta)
    sigma_y = sigma + k*sin(2*theta)
    tau_xy  = k*cos(2*theta)

where ``sigma`` is the hydrostatic pressure, ``k`` the shear yield stress and
``theta`` the slip-line angle in the Cartesian convention.  The criterion then
holds identically, which is what makes independent residual verification of
the closed-form solutions meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

TAU = 2.0 * math.pi

#: Default material constant, the ``2k = 1`` normalization used by most
#: closed-form solutions in the catalog.
DEFAULT_K = 0.5

CARTESIAN = "cartesian"
POLAR = "polar"


# --------------------------------------------------------------------------
# errors
# --------------------------------------------------------------------------

class SliplineError(Exception):
    """Base class for all library-specific failures."""


class DomainError(SliplineError):
    """Requested point lies outside a field's domain of validity."""


class StartOutsideDomain(DomainError):
    """Curve tracing was started outside the field domain."""


class YieldViolation(SliplineError):
    """Stress components do not satisfy the yield criterion."""


class SingularCoords(SliplineError):
    """Characteristic coordinates hit a singular locus (zero component)."""


class NoRootInBracket(SliplineError):
    """A bracketed scalar solve found no sign change."""


class MultipleRoots(SliplineError):
    """A bracketed scalar solve found more than one root; narrow the bracket."""

    def __init__(self, message: str, brackets: list[tuple[float, float]]):
        super().__init__(message)
        self.brackets = brackets


class QuadratureSingularity(SliplineError):
    """Quadrature refused an interval because a guard function nearly vanishes."""


class QuadratureFailure(SliplineError):
    """Adaptive quadrature failed to converge."""


class StagnationPoint(SliplineError):
    """Streamline tracing hit a (near) zero velocity vector."""


class SingularJacobian(SliplineError):
    """A coordinate transformation has a vanishing Jacobian."""


class NoEnvelope(SliplineError):
    """The requested slip-line family has no envelope."""


class NoSignChange(SliplineError):
    """Envelope scan found no Jacobian sign change in the region."""


class UnsupportedField(SliplineError):
    """The named field does not provide the requested closed form."""


class BackgroundMismatch(SliplineError):
    """Velocity construction applied to an incompatible stress background."""


class IndeterminateAtStressIsotropy(SliplineError):
    """Dissipation sign test is indeterminate: both stress deviators vanish."""


class DegenerateSimpleWave(SliplineError):
    """Parameter choice degenerates to a simple wave; use that constructor."""


# --------------------------------------------------------------------------
# points
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Point2:
    """A plane point tagged with its coordinate frame.

    ``coords`` is ``(x, y)`` in the Cartesian frame and ``(r, phi)`` in the
    polar frame.  ``r <= 0`` is rejected: the polar form of the governing
    system is singular on the axis and the discrete symmetry ``r -> -r`` is
    handled at the operator level, not here.
    """

    coords: tuple[float, float]
    frame: str = CARTESIAN

    def __post_init__(self) -> None:
        if self.frame not in (CARTESIAN, POLAR):
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.frame == POLAR and not self.coords[0] > 0.0:
            raise SingularCoords(f"polar radius must be positive, got {self.coords[0]!r}")

    @property
    def x(self) -> float:
        if self.frame == CARTESIAN:
            return self.coords[0]
        return self.coords[0] * math.cos(self.coords[1])

    @property
    def y(self) -> float:
        if self.frame == CARTESIAN:
            return self.coords[1]
        return self.coords[0] * math.sin(self.coords[1])

    @property
    def r(self) -> float:
        if self.frame == POLAR:
            return self.coords[0]
        return math.hypot(*self.coords)

    @property
    def phi(self) -> float:
        if self.frame == POLAR:
            return self.coords[1]
        return math.atan2(self.coords[1], self.coords[0])

    def to_cartesian(self) -> "Point2":
        if self.frame == CARTESIAN:
            return self
        return Point2((self.x, self.y), CARTESIAN)

    def to_polar(self) -> "Point2":
        if self.frame == POLAR:
            return self
        r = math.hypot(*self.coords)
        if r <= 0.0:
            raise SingularCoords("origin has no polar representation")
        return Point2((r, math.atan2(self.coords[1], self.coords[0])), POLAR)


def cart(x: float, y: float) -> Point2:
    return Point2((float(x), float(y)), CARTESIAN)


def polar(r: float, phi: float) -> Point2:
    return Point2((float(r), float(phi)), POLAR)


# --------------------------------------------------------------------------
# stress states
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StressState:
    """Mean stress ``sigma``, Cartesian slip-line angle ``theta`` and ``k``."""

    sigma: float
    theta: float
    k: float = DEFAULT_K

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValueError(f"material constant k must be positive, got {self.k!r}")


@dataclass(frozen=True)
class FullStress:
    """Raw plane stress components."""

    sigma_x: float
    sigma_y: float
    tau_xy: float

    def yield_residual(self, k: float) -> float:
        """Signed defect of the yield criterion for the declared ``k``."""
        return (self.sigma_x - self.sigma_y) ** 2 + 4.0 * self.tau_xy**2 - 4.0 * k**2


def levy_to_components(s: StressState) -> FullStress:
    """Reconstruct stress components from the (sigma, theta, k) parameterization.

    The output satisfies the yield criterion identically (up to rounding).
    """
    s2t = math.sin(2.0 * s.theta)
    c2t = math.cos(2.0 * s.theta)
    return FullStress(
        sigma_x=s.sigma - s.k * s2t,
        sigma_y=s.sigma + s.k * s2t,
        tau_xy=s.k * c2t,
    )


def components_to_levy(
    f: FullStress,
    k: float,
    theta_hint: float | None = None,
    tol: float = 1e-8,
) -> StressState:
    """Invert the component reconstruction.

    ``theta_hint`` selects the 2*pi-periodic representative of ``2*theta``
    nearest ``2*theta_hint``; without it the principal branch
    ``2*theta in (-pi, pi]`` is used.  Raises :class:`YieldViolation` when the
    components are not at yield within ``tol * k**2``.
    """
    if not k > 0.0:
        raise ValueError("k must be positive")
    res = f.yield_residual(k)
    if abs(res) > tol * k * k:
        raise YieldViolation(
            f"yield residual {res:.3e} exceeds {tol:.1e}*k^2: not a plastic state"
        )
    sigma = 0.5 * (f.sigma_x + f.sigma_y)
    s2t = (f.sigma_y - f.sigma_x) / (2.0 * k)
    c2t = f.tau_xy / k
    two_theta = math.atan2(s2t, c2t)
    if theta_hint is not None:
        target = 2.0 * theta_hint
        two_theta += TAU * round((target - two_theta) / TAU)
    return StressState(sigma=sigma, theta=0.5 * two_theta, k=k)


def theta_cart_from_polar(theta_p: float, phi: float) -> float:
    """Cartesian slip angle from the polar-convention one."""
    return theta_p + phi


def theta_polar_from_cart(theta_c: float, phi: float) -> float:
    """Polar-convention slip angle from the Cartesian one."""
    return theta_c - phi


# --------------------------------------------------------------------------
# function-valued parameters
# --------------------------------------------------------------------------

def _central_derivative(fn: Callable[[float], float], t: float) -> float:
    # Central difference with one Richardson step: O(h^4) truncation.
    h = 1e-5 * max(1.0, abs(t))
    d1 = (fn(t + h) - fn(t - h)) / (2.0 * h)
    d2 = (fn(t + 0.5 * h) - fn(t - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


@dataclass(frozen=True)
class FunctionParam:
    """A scalar function of one variable used as a solution parameter.

    Supplies an analytic derivative when available; otherwise the derivative
    falls back to central finite differences.
    """

    fn: Callable[[float], float]
    dfn: Callable[[float], float] | None = None
    name: str = ""

    def __call__(self, t: float) -> float:
        return self.fn(t)

    def deriv(self, t: float) -> float:
        if self.dfn is not None:
            return self.dfn(t)
        return _central_derivative(self.fn, t)

    def validate_derivative(self, probes: list[float], rtol: float = 1e-6) -> None:
        """Check a supplied derivative against finite differences."""
        if self.dfn is None:
            return
        for t in probes:
            a = self.dfn(t)
            b = _central_derivative(self.fn, t)
            scale = max(abs(a), abs(b), 1.0)
            if abs(a - b) > rtol * scale:
                raise ValueError(
                    f"analytic derivative of {self.name or 'FunctionParam'} disagrees "
                    f"with finite differences at t={t}: {a} vs {b}"
                )


def const_fn(value: float, name: str = "") -> FunctionParam:
    return FunctionParam(fn=lambda _t: value, dfn=lambda _t: 0.0, name=name or f"const({value})")


ZERO_FN = const_fn(0.0, "zero")
