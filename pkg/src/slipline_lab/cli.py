"""Command-line front end.

Subcommands: ``sample`` (stress lattice), ``sliplines``, ``envelope``,
``streamlines``, ``velocity`` (lattice of flow data), and ``verify``.
Outputs are deterministic: numbers are printed with 17 significant digits,
iteration order is fixed, and files are written atomically.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from .catalog import REGISTRY, build_field
from .characteristics import (
    FIRST,
    SECOND,
    envelope_closed_form,
    envelope_numeric,
    riemann_invariants,
    trace_slipline,
)
from .core import DomainError, Point2, SliplineError, cart, polar
from .velocity import (
    dissipation_at,
    dissipation_sign_ok,
    exponential_velocity,
    nadai_velocity,
    plate_slide_velocity,
    quadratic_edge_velocity,
    rotation_invariant_velocity,
    trace_streamline,
    twist_invariant_velocity,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3


class ConfigError(Exception):
    pass


VELOCITY_BUILDERS = {
    "nadai": lambda p: nadai_velocity(**p),
    "quadratic_edge": lambda p: quadratic_edge_velocity(**p),
    "plate_slide": lambda p: plate_slide_velocity(**p),
    "rotation_invariant": lambda p: rotation_invariant_velocity(**p),
    "twist_invariant": lambda p: twist_invariant_velocity(**p),
    "exponential": lambda p: exponential_velocity(**p),
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".slipline-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_rows(header: list[str], rows: list[list[float]]) -> str:
    return json.dumps({"columns": header, "rows": [[float(v) for v in row] for row in rows]},
                      sort_keys=True, indent=1) + "\n"


def _svg_paths(curves: list[tuple[str, list[tuple[float, float]]]], pad: float = 0.05) -> str:
    pts = [p for _, c in curves for p in c]
    if not pts:
        raise ConfigError("nothing to draw")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    w = max(x1 - x0, 1e-9)
    h = max(y1 - y0, 1e-9)
    x0 -= pad * w
    y0 -= pad * h
    w *= 1 + 2 * pad
    h *= 1 + 2 * pad
    style = {
        "fam1": 'stroke="#1f77b4" fill="none" stroke-width="0.004"',
        "fam2": 'stroke="#d62728" fill="none" stroke-width="0.004"',
        "envelope": 'stroke="#2ca02c" fill="none" stroke-width="0.006" stroke-dasharray="0.02,0.01"',
        "stream": 'stroke="#9467bd" fill="none" stroke-width="0.004"',
    }
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(-y0 - h)} {_fmt(w)} {_fmt(h)}">']
    for cls, c in curves:
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(-y)}" for x, y in c)
        out.append(f'<path class="{cls}" {style.get(cls, style["fam1"])} d="{d}"/>')
    out.append("</svg>\n")
    return "\n".join(out)


def _parse_region(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"region must be four comma-separated numbers, got {text!r}")
    try:
        a, b, c, d = (float(v) for v in parts)
    except ValueError as exc:
        raise ConfigError(f"bad region {text!r}") from exc
    if not (a < b and c < d):
        raise ConfigError("region bounds must be increasing")
    return a, b, c, d


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    try:
        params = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--params is not valid JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise ConfigError("--params must be a JSON object")
    return params


def _stress_field(args):
    if args.solution not in REGISTRY:
        raise ConfigError(f"unknown solution {args.solution!r}; known: {sorted(REGISTRY)}")
    params = _parse_params(args.params)
    if args.k is not None and args.solution != "revuzhenko":
        params.setdefault("k", args.k)
    try:
        return build_field(args.solution, params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad parameters for {args.solution}: {exc}") from exc


def _emit(args, header: list[str], rows: list[list[float]],
          curves: list[tuple[str, list[tuple[float, float]]]] | None = None) -> None:
    if args.format == "csv":
        text = _csv(header, rows)
    elif args.format == "json":
        text = _json_rows(header, rows)
    elif args.format == "svg":
        if curves is None:
            raise ConfigError("this command has no SVG rendering")
        text = _svg_paths(curves)
    else:
        raise ConfigError(f"unknown format {args.format!r}")
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _region_points(args, field) -> list[Point2]:
    n = args.n
    if args.region:
        a, b, c, d = _parse_region(args.region)
    else:
        pts = field.chart(n)
        return pts
    us = np.linspace(a, b, n)
    vs = np.linspace(c, d, n)
    if args.polar:
        return [polar(float(u), float(v)) for u in us for v in vs]
    return [cart(float(u), float(v)) for u in us for v in vs]


def cmd_sample(args) -> int:
    field = _stress_field(args)
    rows = []
    for p in _region_points(args, field):
        try:
            st = field.stress(p)
        except (DomainError, SliplineError):
            if args.region:
                raise DomainError(f"sample point {p.coords} outside {field.name} domain")
            continue
        fs = field.full_stress(p)
        inv = riemann_invariants(st)
        q = p.to_cartesian()
        rows.append([q.x, q.y, st.sigma, st.theta, fs.sigma_x, fs.sigma_y, fs.tau_xy,
                     inv.xi, inv.eta])
    header = ["x", "y", "sigma", "theta", "sigma_x", "sigma_y", "tau_xy", "xi", "eta"]
    _emit(args, header, rows)
    return EXIT_OK


def _polyline_rows(curve_id: int, line) -> list[list[float]]:
    rows = []
    for s, p, st in zip(line.s, line.points, line.states):
        inv = riemann_invariants(st)
        rows.append([curve_id, s, p.x, p.y, st.sigma, st.theta, inv.xi, inv.eta])
    return rows


def _slipline_starts(args, field) -> list[Point2]:
    pts = field.chart(max(3, args.curves))
    step = max(1, len(pts) // args.curves)
    return pts[:: step][: args.curves]


def cmd_sliplines(args) -> int:
    field = _stress_field(args)
    rows = []
    curves = []
    families = [FIRST, SECOND] if args.family == 0 else [args.family]
    cid = 0
    for start in _slipline_starts(args, field):
        for fam in families:
            seg = []
            for orient in (+1, -1):
                line = trace_slipline(field, start, fam, step=args.step,
                                      max_arclen=args.arclen, orientation=orient)
                pts = [(p.x, p.y) for p in line.points]
                seg = pts[::-1] + seg if orient < 0 else seg + pts
                rows.extend(_polyline_rows(cid, line))
            curves.append((f"fam{fam}", seg))
            cid += 1
    if args.with_envelopes:
        try:
            for env in envelope_closed_form(field):
                ts = np.linspace(env.t_range[0], env.t_range[1], 200)
                curves.append(("envelope", [(env.point_at(float(t)).x, env.point_at(float(t)).y) for t in ts]))
        except SliplineError:
            pass
    header = ["curve_id", "s", "x", "y", "sigma", "theta", "xi", "eta"]
    _emit(args, header, rows, curves)
    return EXIT_OK


def cmd_envelope(args) -> int:
    field = _stress_field(args)
    rows = []
    curves = []
    if args.numeric:
        fam = args.family if args.family else FIRST
        env = envelope_numeric(field, fam)
        for i, (K, t, pt) in enumerate(env.samples):
            rows.append([i, K, pt.x, pt.y])
        curves.append(("envelope", [(h[2].x, h[2].y) for h in env.samples]))
        header = ["index", "member", "x", "y"]
    else:
        envs = envelope_closed_form(field)
        for i, env in enumerate(envs):
            ts = np.linspace(env.t_range[0], env.t_range[1], args.n)
            pts = [env.point_at(float(t)) for t in ts]
            rows.extend([[i, float(t), p.x, p.y] for t, p in zip(ts, pts)])
            curves.append(("envelope", [(p.x, p.y) for p in pts]))
        header = ["curve_id", "t", "x", "y"]
    _emit(args, header, rows, curves)
    return EXIT_OK


def _velocity_field(args):
    if args.solution not in VELOCITY_BUILDERS:
        raise ConfigError(f"unknown velocity solution {args.solution!r}; "
                          f"known: {sorted(VELOCITY_BUILDERS)}")
    try:
        return VELOCITY_BUILDERS[args.solution](_parse_params(args.params))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {args.solution}: {exc}") from exc


def cmd_streamlines(args) -> int:
    vf = _velocity_field(args)
    bg = vf.background
    rows = []
    curves = []
    ys = np.linspace(-0.8, 0.8, args.curves)
    for cid, y0 in enumerate(ys):
        start = cart(args.x0, float(y0))
        try:
            line = trace_streamline(vf, start, step=args.step, max_arclen=args.arclen)
        except SliplineError:
            continue
        pts = [(p.x, p.y) for p in line.points]
        curves.append(("stream", pts))
        for s, p in zip(line.s, line.points):
            u, v = vf.velocity(p)
            D = dissipation_at(vf, bg, p)
            ok = 1.0 if dissipation_sign_ok(vf, bg, p) else 0.0
            rows.append([cid, s, p.x, p.y, u, v, D, ok])
    header = ["curve_id", "s", "x", "y", "u", "v", "D", "diss_ok"]
    _emit(args, header, rows, curves)
    return EXIT_OK


def cmd_velocity(args) -> int:
    vf = _velocity_field(args)
    bg = vf.background
    rows = []
    for p in vf.chart(args.n):
        u, v = vf.velocity(p)
        D = dissipation_at(vf, bg, p)
        ok = 1.0 if dissipation_sign_ok(vf, bg, p) else 0.0
        rows.append([p.x, p.y, u, v, D, ok])
    header = ["x", "y", "u", "v", "D", "diss_ok"]
    _emit(args, header, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all, verify_solution

    if args.all or not args.solution:
        report = run_all()
    else:
        report = verify_solution(args.solution, _parse_params(args.params),
                                 perturb=args.perturb)
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    summary = ("PASS" if report["all_passed"] else "FAIL")
    sys.stdout.write(f"{summary}: {report['n_checks'] - report['n_failed']}"
                     f"/{report['n_checks']} checks passed\n")
    if not report["all_passed"]:
        for c in report["checks"]:
            if not c["passed"]:
                sys.stdout.write(f"  failed: {c['name']} "
                                 f"(residual {c['max_residual']:.3e} > {c['threshold']:.1e})\n")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="slipline-lab",
        description="Closed-form plane-plasticity fields: sampling, slip lines, "
                    "envelopes, streamlines, and verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, velocity=False):
        p.add_argument("--solution", required=True)
        p.add_argument("--params", default=None, help="JSON object of solution parameters")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
        p.add_argument("--k", type=float, default=None, help="material constant")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sample", help="stress lattice over a region")
    common(p)
    p.add_argument("--region", default=None,
                   help="x0,x1,y0,y1 (or r0,r1,phi0,phi1 with --polar); for the "
                        "characteristic-plane solution the region is its chart")
    p.add_argument("--polar", action="store_true")
    p.add_argument("--n", type=int, default=50)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("sliplines", help="trace slip-line families")
    common(p)
    p.add_argument("--family", type=int, choices=(0, 1, 2), default=0,
                   help="0 traces both families")
    p.add_argument("--curves", type=int, default=6)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--arclen", type=float, default=1.5)
    p.add_argument("--with-envelopes", action="store_true")
    p.set_defaults(fn=cmd_sliplines)

    p = sub.add_parser("envelope", help="closed-form or numeric envelopes")
    common(p)
    p.add_argument("--family", type=int, choices=(0, 1, 2), default=0)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--n", type=int, default=100)
    p.set_defaults(fn=cmd_envelope)

    p = sub.add_parser("streamlines", help="trace flow streamlines")
    common(p, velocity=True)
    p.add_argument("--curves", type=int, default=7)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--arclen", type=float, default=1.5)
    p.set_defaults(fn=cmd_streamlines)

    p = sub.add_parser("velocity", help="velocity lattice with dissipation data")
    common(p, velocity=True)
    p.add_argument("--n", type=int, default=40)
    p.set_defaults(fn=cmd_velocity)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--all", action="store_true")
    p.add_argument("--solution", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--perturb", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)
    return ap


def _join_negative_values(argv: list[str]) -> list[str]:
    # allow `--region -2,2,-1,1` (argparse would read -2,... as an option)
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--region":
            try:
                out.append(f"--region={next(it)}")
                continue
            except StopIteration:
                pass
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_negative_values(list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except SliplineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
