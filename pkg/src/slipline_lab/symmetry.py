"""Point-symmetry machinery: operators, commutators, invariance checks.

Operators are vector fields on a named coordinate space, given by coefficient
functions.  Commutators are computed numerically on those coefficients;
the built-in algebra catalogs also carry analytic coefficient Jacobians, so
the structure constants can be verified to machine precision, with a
finite-difference mode as the independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .catalog import (
    StressField,
    revuzhenko_jacobian,
    revuzhenko_map,
    two_circles_constants,
)
from .core import CARTESIAN, DomainError, Point2, SingularCoords, SingularJacobian, UnsupportedField

STRESS_SPACE = ("x", "y", "sigma", "theta")
POLAR_STRESS_SPACE = ("r", "phi", "sigma", "theta")
VELOCITY_SPACE = ("x", "y", "u", "v")


@dataclass(frozen=True)
class LieOperator:
    """Vector field sum(coeff_i * d/d var_i) on a named space."""

    name: str
    space: tuple[str, ...]
    coeffs: Callable[[np.ndarray], np.ndarray]
    coeff_jac: Callable[[np.ndarray], np.ndarray] | None = None  # J[i, j] = d coeff_i / d var_j

    def __call__(self, point: Sequence[float]) -> np.ndarray:
        return np.asarray(self.coeffs(np.asarray(point, dtype=float)), dtype=float)

    def jac(self, point: Sequence[float], h: float = 1e-5) -> np.ndarray:
        """Coefficient Jacobian, analytic when available, else Richardson FD."""
        q = np.asarray(point, dtype=float)
        if self.coeff_jac is not None:
            return np.asarray(self.coeff_jac(q), dtype=float)
        n = len(q)
        J = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            d1 = (self(q + h * e) - self(q - h * e)) / (2.0 * h)
            d2 = (self(q + 0.5 * h * e) - self(q - 0.5 * h * e)) / h
            J[:, j] = (4.0 * d2 - d1) / 3.0
        return J


def apply_operator(op: LieOperator, f: Callable[..., float], point: Sequence[float],
                   h: float = 1e-5) -> float:
    """Directional derivative sum(coeff_i * df/dvar_i), FD with Richardson."""
    q = np.asarray(point, dtype=float)
    c = op(q)
    total = 0.0
    for j in range(len(q)):
        e = np.zeros(len(q))
        e[j] = 1.0
        d1 = (f(*(q + h * e)) - f(*(q - h * e))) / (2.0 * h)
        d2 = (f(*(q + 0.5 * h * e)) - f(*(q - 0.5 * h * e))) / h
        total += c[j] * (4.0 * d2 - d1) / 3.0
    return total


def commutator(a: LieOperator, b: LieOperator, point: Sequence[float],
               mode: str = "analytic", h: float = 1e-5) -> np.ndarray:
    """Coefficients of [a, b] = a(b) - b(a) at a point."""
    if a.space != b.space:
        raise ValueError(f"operator spaces differ: {a.space} vs {b.space}")
    q = np.asarray(point, dtype=float)
    if mode == "fd":
        Ja = LieOperator(a.name, a.space, a.coeffs).jac(q, h)
        Jb = LieOperator(b.name, b.space, b.coeffs).jac(q, h)
    else:
        Ja = a.jac(q, h)
        Jb = b.jac(q, h)
    return Jb @ a(q) - Ja @ b(q)


def lie_op(name: str, space: tuple[str, ...], coeffs, jac=None) -> LieOperator:
    return LieOperator(name=name, space=space, coeffs=coeffs, coeff_jac=jac)


# --------------------------------------------------------------------------
# Cartesian stress-plane algebra on (x, y, sigma, theta)
# --------------------------------------------------------------------------

def stress_algebra(k: float = 0.5) -> dict[str, LieOperator]:
    """Scaling, rotation, pressure shift, and quasi-scale generators."""
    def X1c(q):
        x, y, s, t = q
        return np.array([x, y, 0.0, 0.0])

    def X1j(q):
        J = np.zeros((4, 4))
        J[0, 0] = 1.0
        J[1, 1] = 1.0
        return J

    def X2c(q):
        x, y, s, t = q
        return np.array([-y, x, 0.0, 1.0])

    def X2j(q):
        J = np.zeros((4, 4))
        J[0, 1] = -1.0
        J[1, 0] = 1.0
        return J

    def X3c(q):
        return np.array([0.0, 0.0, 1.0, 0.0])

    def X3j(q):
        return np.zeros((4, 4))

    def X4c(q):
        x, y, s, t = q
        c2, s2 = math.cos(2.0 * t), math.sin(2.0 * t)
        return np.array([
            x * c2 + y * s2 + y * s / k,
            x * s2 - y * c2 - x * s / k,
            -4.0 * k * t,
            -s / k,
        ])

    def X4j(q):
        x, y, s, t = q
        c2, s2 = math.cos(2.0 * t), math.sin(2.0 * t)
        J = np.zeros((4, 4))
        J[0] = [c2, s2 + s / k, y / k, -2.0 * x * s2 + 2.0 * y * c2]
        J[1] = [s2 - s / k, -c2, -x / k, 2.0 * x * c2 + 2.0 * y * s2]
        J[2] = [0.0, 0.0, 0.0, -4.0 * k]
        J[3] = [0.0, 0.0, -1.0 / k, 0.0]
        return J

    S = STRESS_SPACE
    return {
        "X1": lie_op("X1", S, X1c, X1j),
        "X2": lie_op("X2", S, X2c, X2j),
        "X3": lie_op("X3", S, X3c, X3j),
        "X4": lie_op("X4", S, X4c, X4j),
    }


def hodograph_generator(x_of, y_of, name: str = "X5") -> LieOperator:
    """Infinite-part generator from a hodograph-plane solution pair.

    ``x_of(sigma, theta)`` and ``y_of(sigma, theta)`` must solve the linear
    hodograph system (validate with :func:`hodograph_residual`); the operator
    translates the plane by that solution.
    """
    def c(q):
        x, y, s, t = q
        return np.array([x_of(s, t), y_of(s, t), 0.0, 0.0])

    return lie_op(name, STRESS_SPACE, c)


def polar_stress_algebra(k: float = 0.5) -> dict[str, LieOperator]:
    """The same algebra written on (r, phi, sigma, theta)."""
    def X1c(q):
        r, p, s, t = q
        return np.array([r, 0.0, 0.0, 0.0])

    def X1j(q):
        J = np.zeros((4, 4))
        J[0, 0] = 1.0
        return J

    def X2c(q):
        return np.array([0.0, 1.0, 0.0, 1.0])

    def X3c(q):
        return np.array([0.0, 0.0, 1.0, 0.0])

    def zero_j(q):
        return np.zeros((4, 4))

    def X4c(q):
        r, p, s, t = q
        w = t - p
        return np.array([
            r * math.cos(2.0 * w),
            math.sin(2.0 * w) - s / k,
            -4.0 * k * t,
            -s / k,
        ])

    def X4j(q):
        r, p, s, t = q
        w = t - p
        c2, s2 = math.cos(2.0 * w), math.sin(2.0 * w)
        J = np.zeros((4, 4))
        J[0] = [c2, 2.0 * r * s2, 0.0, -2.0 * r * s2]
        J[1] = [0.0, -2.0 * c2, -1.0 / k, 2.0 * c2]
        J[2] = [0.0, 0.0, 0.0, -4.0 * k]
        J[3] = [0.0, 0.0, -1.0 / k, 0.0]
        return J

    S = POLAR_STRESS_SPACE
    return {
        "X1p": lie_op("X1p", S, X1c, X1j),
        "X2p": lie_op("X2p", S, X2c, zero_j),
        "X3p": lie_op("X3p", S, X3c, zero_j),
        "X4p": lie_op("X4p", S, X4c, X4j),
    }


# --------------------------------------------------------------------------
# velocity-plane algebra on (x, y, u, v), pressed-block background
# --------------------------------------------------------------------------

def velocity_algebra() -> dict[str, LieOperator]:
    def root(y: float) -> float:
        return math.sqrt(max(0.0, 1.0 - y * y))

    def Z1c(q):
        x, y, u, v = q
        return np.array([0.0, 0.0, u, v])

    def Z1j(q):
        J = np.zeros((4, 4))
        J[2, 2] = 1.0
        J[3, 3] = 1.0
        return J

    def Z2c(q):
        x, y, u, v = q
        return np.array([-2.0 * y, 2.0 * root(y), -v, u])

    def Z2j(q):
        x, y, u, v = q
        J = np.zeros((4, 4))
        J[0, 1] = -2.0
        J[1, 1] = -2.0 * y / root(y)
        J[2, 3] = -1.0
        J[3, 2] = 1.0
        return J

    def Z3c(q):
        return np.array([1.0, 0.0, 0.0, 0.0])

    def Z3j(q):
        return np.zeros((4, 4))

    def Z4c(q):
        x, y, u, v = q
        m = root(y)
        return np.array([
            2.0 * math.acos(max(-1.0, min(1.0, y))) + 2.0 * y * (x - m),
            2.0 * (-x + m) * m,
            y * u + v * (x - 2.0 * m),
            -(x * u + y * v),
        ])

    def Z4j(q):
        x, y, u, v = q
        m = root(y)
        J = np.zeros((4, 4))
        J[0] = [2.0 * y, 2.0 * x - 4.0 * m, 0.0, 0.0]
        J[1] = [-2.0 * m, 2.0 * x * y / m - 4.0 * y, 0.0, 0.0]
        J[2] = [v, u + 2.0 * v * y / m, y, x - 2.0 * m]
        J[3] = [-u, -v, -x, -y]
        return J

    def Z5c(q):
        x, y, u, v = q
        return np.array([0.0, 0.0, y, -x])

    def Z5j(q):
        J = np.zeros((4, 4))
        J[2, 1] = 1.0
        J[3, 0] = -1.0
        return J

    S = VELOCITY_SPACE
    return {
        "Z1": lie_op("Z1", S, Z1c, Z1j),
        "Z2": lie_op("Z2", S, Z2c, Z2j),
        "Z3": lie_op("Z3", S, Z3c, Z3j),
        "Z4": lie_op("Z4", S, Z4c, Z4j),
        "Z5": lie_op("Z5", S, Z5c, Z5j),
    }


def velocity_generator(u0, v0, name: str = "Z6") -> LieOperator:
    """Superposition generator from any compatible velocity pair."""
    def c(q):
        x, y, u, v = q
        return np.array([0.0, 0.0, u0(x, y), v0(x, y)])

    return lie_op(name, VELOCITY_SPACE, c)


# --------------------------------------------------------------------------
# invariance of catalog solutions
# --------------------------------------------------------------------------

def check_invariance(op: LieOperator, field: StressField, p: Point2) -> tuple[float, float]:
    """Invariant-surface residuals of a stress solution under one generator.

    res_sigma = eta^sigma - (xi^1 d sigma/d c1 + xi^2 d sigma/d c2) and the
    analogous theta component, with the operator coefficients evaluated on
    the solution graph.  Both vanish iff the solution is invariant.
    """
    want = STRESS_SPACE if field.frame == CARTESIAN else POLAR_STRESS_SPACE
    if op.space != want:
        raise UnsupportedField(f"operator lives on {op.space}, field needs {want}")
    c1, c2 = field._coords(p)
    sigma, theta = field.eval_fn(c1, c2)
    ds1, ds2, dt1, dt2 = field.partials_fn(c1, c2)
    xi1, xi2, eta_s, eta_t = op((c1, c2, sigma, theta))
    return eta_s - (xi1 * ds1 + xi2 * ds2), eta_t - (xi1 * dt1 + xi2 * dt2)


def combine(space: tuple[str, ...], name: str, *terms: tuple[float, LieOperator]) -> LieOperator:
    """Constant-coefficient linear combination of operators."""
    def c(q):
        total = np.zeros(len(space))
        for w, op in terms:
            total = total + w * op(q)
        return total

    def j(q):
        total = np.zeros((len(space), len(space)))
        for w, op in terms:
            total = total + w * op.jac(q)
        return total

    return lie_op(name, space, c, j)


def constant_generator(space: tuple[str, ...], index: int, name: str) -> LieOperator:
    def c(q):
        e = np.zeros(len(space))
        e[index] = 1.0
        return e

    return lie_op(name, space, c, lambda q: np.zeros((len(space), len(space))))


def subalgebra_operator(field: StressField) -> LieOperator:
    """The generator the catalog solution is declared invariant under."""
    k = field.k
    name = field.name
    if name == "prandtl":
        m, h = field.params.get("m", 1.0), field.params.get("h", 1.0)
        if m == 0.0:
            raise UnsupportedField("frictionless plates: pressure field is trivial")
        a = h / (k * m)
        d_sigma = constant_generator(STRESS_SPACE, 2, "d_sigma")
        d_x = constant_generator(STRESS_SPACE, 0, "d_x")
        return combine(STRESS_SPACE, f"d_sigma - {a:g} d_x", (1.0, d_sigma), (-a, d_x))

    pol = polar_stress_algebra(k)
    if name in ("nadai_cavity", "nadai_channel", "nadai_channel_singular"):
        if name == "nadai_cavity":
            alpha = 1.0 / (2.0 * k)  # the reflected c = -1 ray member
        else:
            alpha = -1.0 / (2.0 * k * field.params.get("c", 1.0))
        return combine(POLAR_STRESS_SPACE, "pressure-shift+scale",
                       (1.0, pol["X3p"]), (alpha, pol["X1p"]))
    if name == "nadai_vortex":
        return pol["X2p"]
    if name == "nadai_two_circles":
        C1, C2 = two_circles_constants(field.params["a"], field.params["b"])
        A = 2.0 * k * C2
        return combine(POLAR_STRESS_SPACE, "pressure-shift-rotation(-)",
                       (A, pol["X3p"]), (-1.0, pol["X2p"]))
    if name == "spiral":
        A, alpha = field.params["A"], field.params["alpha"]
        return combine(POLAR_STRESS_SPACE, "pressure-shift-rotation-scale",
                       (A, pol["X3p"]), (1.0, pol["X2p"]), (alpha, pol["X1p"]))
    if name == "simple_wave":
        if field.params.get("phi_name") != "zero":
            raise UnsupportedField("only the centered fan is scale invariant")
        return stress_algebra(k)["X1"]
    if name == "revuzhenko":
        return combine(POLAR_STRESS_SPACE, "quasi-scale pushforward",
                       (-1.0, pol["X4p"]), (0.5 * math.pi, pol["X3p"]))
    raise UnsupportedField(f"no declared subalgebra for {name}")


# --------------------------------------------------------------------------
# hodograph system
# --------------------------------------------------------------------------

def hodograph_residual(x_of, y_of, sigma: float, theta: float, k: float = 0.5,
                       h: float = 1e-5, jac_tol: float = 1e-12) -> tuple[float, float]:
    """Residuals of the linear hodograph system for a plane-solutions pair.

    x(sigma, theta), y(sigma, theta) solve

        x_theta - 2k (x_sigma cos 2theta + y_sigma sin 2theta) = 0,
        y_theta - 2k (x_sigma sin 2theta - y_sigma cos 2theta) = 0,

    provided the transformation Jacobian does not vanish.
    """
    def d(f, var: int) -> float:
        if var == 0:
            d1 = (f(sigma + h, theta) - f(sigma - h, theta)) / (2.0 * h)
            d2 = (f(sigma + 0.5 * h, theta) - f(sigma - 0.5 * h, theta)) / h
        else:
            d1 = (f(sigma, theta + h) - f(sigma, theta - h)) / (2.0 * h)
            d2 = (f(sigma, theta + 0.5 * h) - f(sigma, theta - 0.5 * h)) / h
        return (4.0 * d2 - d1) / 3.0

    x_s, x_t = d(x_of, 0), d(x_of, 1)
    y_s, y_t = d(y_of, 0), d(y_of, 1)
    if abs(x_s * y_t - x_t * y_s) < jac_tol:
        raise SingularJacobian("hodograph transformation Jacobian vanishes")
    c2, s2 = math.cos(2.0 * theta), math.sin(2.0 * theta)
    r1 = x_t - 2.0 * k * (x_s * c2 + y_s * s2)
    r2 = y_t - 2.0 * k * (x_s * s2 - y_s * c2)
    return r1, r2


# --------------------------------------------------------------------------
# structure-constant verification suite
# --------------------------------------------------------------------------

def _max_abs(v) -> float:
    return float(np.max(np.abs(v)))


def structure_constant_suite(algebra: str = "stress", k: float = 0.5,
                             n_points: int = 100, seed: int = 0,
                             mode: str = "analytic") -> dict[str, float]:
    """Verify the algebra's bracket table at random points.

    Returns max coefficient deviation per identity.  ``mode='fd'`` drops the
    analytic coefficient Jacobians so the brackets are fully numerical.
    """
    rng = np.random.default_rng(seed)
    out: dict[str, float] = {}

    def record(key: str, val: float) -> None:
        out[key] = max(out.get(key, 0.0), val)

    if algebra == "stress":
        ops = stress_algebra(k)
        X1, X2, X3, X4 = ops["X1"], ops["X2"], ops["X3"], ops["X4"]
        names = ["X1", "X2", "X3", "X4"]
        for _ in range(n_points):
            q = np.array([
                rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
            ])
            record("[X2,X4]+4k*X3", _max_abs(commutator(X2, X4, q, mode) + 4.0 * k * X3(q)))
            record("[X3,X4]+X2/k", _max_abs(commutator(X3, X4, q, mode) + X2(q) / k))
            for i, a in enumerate(names):
                for b in names[i + 1:]:
                    if {a, b} in ({"X2", "X4"}, {"X3", "X4"}):
                        continue
                    record(f"[{a},{b}]=0", _max_abs(commutator(ops[a], ops[b], q, mode)))
            record("antisymmetry", _max_abs(
                commutator(X2, X4, q, mode) + commutator(X4, X2, q, mode)))
            record("jacobi(X2,X3,X4)", _max_abs(_jacobi(X2, X3, X4, q, mode)))
        return out

    if algebra == "velocity":
        ops = velocity_algebra()
        Z1, Z2, Z3, Z4, Z5 = (ops[n] for n in ("Z1", "Z2", "Z3", "Z4", "Z5"))
        m = lambda y: math.sqrt(1.0 - y * y)
        for _ in range(n_points):
            q = np.array([
                rng.uniform(-2.0, 2.0), rng.uniform(-0.9, 0.9),
                rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
            ])
            x, y = q[0], q[1]
            record("[Z2,Z4]+4*Z3", _max_abs(commutator(Z2, Z4, q, mode) + 4.0 * Z3(q)))
            record("[Z3,Z4]+Z2", _max_abs(commutator(Z3, Z4, q, mode) + Z2(q)))
            record("[Z1,Z5]+Z5", _max_abs(commutator(Z1, Z5, q, mode) + Z5(q)))
            record("[Z3,Z5]+d_v", _max_abs(
                commutator(Z3, Z5, q, mode) + np.array([0.0, 0.0, 0.0, 1.0])))
            nadai_gen = np.array([0.0, 0.0, -x + 2.0 * m(y), y])
            record("[Z2,Z5]=linear-edge gen", _max_abs(commutator(Z2, Z5, q, mode) - nadai_gen))
            quad_gen = np.array([
                0.0, 0.0,
                x * x - 3.0 * y * y - 4.0 * x * m(y) + 2.0,
                -2.0 * math.acos(y) - 2.0 * x * y + 2.0 * y * m(y),
            ])
            record("[Z4,Z5]=quadratic-edge gen", _max_abs(commutator(Z4, Z5, q, mode) - quad_gen))
            nested = _nested_bracket(Z2, Z4, Z5, q, mode)
            slide_gen = np.array([
                0.0, 0.0,
                2.0 * x * y - 2.0 * math.acos(y) - 2.0 * y * m(y),
                -x * x - y * y + 6.0,
            ])
            record("[Z2,[Z4,Z5]]=plate-slide gen", _max_abs(nested - slide_gen))
            record("jacobi(Z2,Z4,Z5)", _max_abs(_jacobi(Z2, Z4, Z5, q, mode)))
        return out

    raise ValueError("algebra must be 'stress' or 'velocity'")


#: outer differentiation step for nested numerical brackets: large enough
#: that the inner bracket's FD noise is not amplified past ~1e-7
_NESTED_H = 1e-3


def _bracket_op(a: LieOperator, b: LieOperator, mode: str) -> LieOperator:
    def c(q):
        return commutator(a, b, q, mode)

    return lie_op(f"[{a.name},{b.name}]", a.space, c)


def _nested_bracket(a: LieOperator, b: LieOperator, c: LieOperator,
                    q: np.ndarray, mode: str) -> np.ndarray:
    h = _NESTED_H if mode == "fd" else 1e-5
    return commutator(a, _bracket_op(b, c, mode), q, mode, h=h)


def _jacobi(a: LieOperator, b: LieOperator, c: LieOperator,
            q: np.ndarray, mode: str) -> np.ndarray:
    h = _NESTED_H if mode == "fd" else 1e-5
    s = commutator(_bracket_op(a, b, mode), c, q, mode, h=h)
    s = s + commutator(_bracket_op(b, c, mode), a, q, mode, h=h)
    s = s + commutator(_bracket_op(c, a, mode), b, q, mode, h=h)
    return s


# --------------------------------------------------------------------------
# characteristic-plane symmetry of the separable solution
# --------------------------------------------------------------------------

def quasi_scale_generator_check(xi: float, eta: float) -> dict[str, float]:
    """Checks tying the separable solution to the quasi-scale generator.

    At a characteristic-plane point (xi, eta) of the upper-sign member:

    * the scaling generator (-xi, eta, 2u) annihilates u - eta/xi on its
      zero set (degree-two homogeneity);
    * u = eta/xi solves the separated equation with the quadratic invariant
      scalings (checked by finite differences elsewhere);
    * the pushforward of the reduced generator (-xi, eta) through the map
      (xi, eta) -> (r, phi, sigma, theta) equals -X4p + (pi/2) X3p at the
      image point (2k = 1).
    """
    if xi == 0.0 or eta == 0.0:
        raise SingularCoords("xi, eta must be nonzero")
    u = eta / xi
    annihilation = abs((-xi) * (eta / xi**2) + eta * (-1.0 / xi) + 2.0 * u)

    r, phi, sigma, theta = revuzhenko_map(xi, eta, "upper")
    J = revuzhenko_jacobian(xi, eta, "upper")  # rows: (ln r, phi)
    push = np.array([
        r * (-xi * J[0, 0] + eta * J[0, 1]),
        -xi * J[1, 0] + eta * J[1, 1],
        -xi * 2.0 * xi + eta * 2.0 * eta,
        -xi * (-2.0 * xi) + eta * 2.0 * eta,
    ])
    pol = polar_stress_algebra(0.5)
    target = -pol["X4p"]((r, phi, sigma, theta)) + 0.5 * math.pi * pol["X3p"]((r, phi, sigma, theta))
    return {
        "annihilation": annihilation,
        "generator_match": _max_abs(push - target),
    }
