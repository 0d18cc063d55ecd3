"""Small numerical kernels with pinned behavior.

These are deliberately hand-rolled rather than delegated to scipy: the library
contract pins the exact algorithms (bracketed bisection polished by one Newton
step, adaptive Simpson with a singularity guard, fixed-step classical RK4) so
that verification tolerances are reproducible.
"""
from __future__ import annotations

import math
from typing import Callable

from .core import (
    MultipleRoots,
    NoRootInBracket,
    QuadratureFailure,
    QuadratureSingularity,
)


def fd1(f: Callable[[float], float], x: float, h: float | None = None) -> float:
    """First derivative by central difference plus one Richardson step."""
    if h is None:
        h = 1e-4 * max(1.0, abs(x))
    d1 = (f(x + h) - f(x - h)) / (2.0 * h)
    d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


def bracket_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    df: Callable[[float], float] | None = None,
    max_iter: int = 200,
) -> float:
    """Bisection on [a, b] to ``tol``, refined by a single Newton step.

    Raises :class:`NoRootInBracket` when f(a) and f(b) have the same sign.
    """
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoRootInBracket(f"no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}")
    lo, hi, flo = a, b, fa
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) < tol:
            lo = hi = mid
            break
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    slope = df(x) if df is not None else fd1(f, x, h=max(tol, 1e-7 * max(1.0, abs(x))))
    if slope != 0.0 and math.isfinite(slope):
        step = f(x) / slope
        # Newton polish only if it stays inside the bracket.
        if a - 1e-12 <= x - step <= b + 1e-12:
            x = x - step
    return x


def scan_sign_changes(
    f: Callable[[float], float], a: float, b: float, n: int = 64
) -> list[tuple[float, float]]:
    """Subintervals of [a, b] on which f changes sign, from an n-point scan."""
    xs = [a + (b - a) * i / n for i in range(n + 1)]
    vals = [f(x) for x in xs]
    out: list[tuple[float, float]] = []
    for i in range(n):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            out.append((xs[i], xs[i]))
        elif v0 * v1 < 0.0:
            out.append((xs[i], xs[i + 1]))
    if vals[-1] == 0.0:
        out.append((xs[-1], xs[-1]))
    return out


def solve_unique(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    scan_n: int = 64,
    tol: float = 1e-12,
    df: Callable[[float], float] | None = None,
) -> float:
    """Root in ``bracket`` that is unique under an ``scan_n``-point sign scan.

    Raises :class:`MultipleRoots` when the bracket holds more than one sign
    change (the caller must narrow it) and :class:`NoRootInBracket` when it
    holds none.
    """
    a, b = bracket
    hits = scan_sign_changes(f, a, b, scan_n)
    if not hits:
        raise NoRootInBracket(f"no root of scalar equation in [{a}, {b}]")
    if len(hits) > 1:
        raise MultipleRoots(
            f"{len(hits)} sign changes in [{a}, {b}]; narrow the bracket", hits
        )
    lo, hi = hits[0]
    if lo == hi:
        return lo
    return bracket_root(f, lo, hi, tol=tol, df=df)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    guard: Callable[[float], float] | None = None,
    guard_min: float = 1e-6,
    max_depth: int = 48,
) -> float:
    """Adaptive Simpson quadrature with an optional singularity guard.

    When ``guard`` is given, any probed abscissa with ``|guard(x)| < guard_min``
    aborts the integration with :class:`QuadratureSingularity` instead of
    silently integrating across a near-singular integrand.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    def probe(x: float) -> float:
        if guard is not None and abs(guard(x)) < guard_min:
            raise QuadratureSingularity(
                f"integrand guard below {guard_min:.1e} at x={x!r}"
            )
        return f(x)

    def simpson(x0: float, x2: float, f0: float, f1: float, f2: float) -> float:
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = probe(xl)
        fr = probe(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth >= max_depth:
            raise QuadratureFailure(
                f"adaptive Simpson did not converge on [{x0}, {x2}] at depth {depth}"
            )
        if abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, xm, f0, fl, f1, left, depth + 1) + recurse(
            xm, x2, f1, fr, f2, right, depth + 1
        )

    m = 0.5 * (a + b)
    fa, fm, fb = probe(a), probe(m), probe(b)
    whole = simpson(a, b, fa, fm, fb)
    return sign * recurse(a, b, fa, fm, fb, whole, 0)


def rk4_step(
    pos: tuple[float, float],
    h: float,
    direction: Callable[[tuple[float, float]], tuple[float, float]],
) -> tuple[float, float]:
    """One classical Runge-Kutta step of the unit direction field."""
    x, y = pos
    k1 = direction((x, y))
    k2 = direction((x + 0.5 * h * k1[0], y + 0.5 * h * k1[1]))
    k3 = direction((x + 0.5 * h * k2[0], y + 0.5 * h * k2[1]))
    k4 = direction((x + h * k3[0], y + h * k3[1]))
    return (
        x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    )
