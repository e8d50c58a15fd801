"""Command-line front end.

Subcommands: eval, verify, zeros, invert, tessellate, grid.  JSON and CSV
floats are written with 17 significant digits, so identical options give
byte-identical output.  Exit codes: 0 success, 1 evaluation or verification
failure, 2 bad input.
"""

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import geom
from .core import INF, TauPoint, chordal, is_inf
from .errors import DegenerateLattice, InvalidBracket
from .group import MAX_DEPTH, tessellate
from .hypergeo import eval_normalized
from .lattice import ZetaParams, lattice_new, quasi_periods_modular, zeta_direct
from .pmap import ZeroBracket, eval_p, find_e2_zero_on_axis, invert_p
from .qforms import (SeriesParams, eval_delta_power, eval_Delta, eval_E2, eval_E4, eval_E6,
                     eval_J)
from .verify import SUITES, SuiteConfig, run_suite

PI = math.pi
FORMATS = ("json", "csv", "svg")
QUANTITIES = ("E2", "E4", "E6", "Delta", "J", "p", "pprime",
              "eta1", "eta2", "Omega1", "Omega2", "H1", "H2")
DEFAULT_FORMAT = {"eval": "json", "verify": "json", "zeros": "json", "invert": "json",
                  "tessellate": "svg", "grid": "csv"}

# SVG viewport in the tau plane and its pixel scale
VIEW_X = (-1.5, 2.5)
VIEW_Y = (0.0, 3.0)
PX = 200.0


class BadInput(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-16
    series_order: int = 4000
    zeta_radius: int = 400
    cutoff: float = 12.0
    depth: int = 3
    format: str = "json"
    out: str = "-"

    def __post_init__(self):
        for name in ("tol", "series_order", "zeta_radius", "cutoff", "depth"):
            if not getattr(self, name) > 0:
                raise BadInput(f"{name} must be positive")
        if self.format not in FORMATS:
            raise BadInput(f"unknown format {self.format!r}")
        suffix = Path(self.out).suffix.lstrip(".").lower()
        if self.out != "-" and suffix in FORMATS and suffix != self.format:
            raise BadInput(f"output {self.out!r} does not match format {self.format!r}")

    @property
    def params(self):
        return SeriesParams(order=self.series_order, tol=self.tol)


# ---------------------------------------------------------------------------
# parsing and serialization

def parse_complex(text):
    """Parse ``a+bi`` style input (``i`` or ``j``, optional whitespace); ``inf`` is infinity."""
    s = re.sub(r"\s+", "", str(text)).lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    if not s or "inf" in s or "nan" in s:
        raise BadInput(f"cannot parse complex number {text!r}")
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise BadInput(f"cannot parse complex number {text!r}") from None
    return z


def parse_lattice(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise BadInput(f"lattice must be 'omega1,omega2', got {text!r}")
    w1, w2 = (parse_complex(p) for p in parts)
    if is_inf(w1) or is_inf(w2):
        raise BadInput("lattice generators must be finite")
    try:
        return lattice_new(w1, w2)
    except DegenerateLattice as exc:
        raise BadInput(str(exc)) from None


def parse_pair(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise BadInput(f"expected 'lo,hi', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise BadInput(f"expected two numbers, got {text!r}") from None


def fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return format(x, "#.17g")


def to_json(obj):
    """JSON text with floats at 17 significant digits; non-finite floats become null."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return to_json(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(text, out):
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# commands


def _source(args):
    """Returns (tau, lattice or None, input record)."""
    if args.lattice is not None:
        lat = parse_lattice(args.lattice)
        rec = {"omega1": [lat.omega1.real, lat.omega1.imag], "omega2": [lat.omega2.real, lat.omega2.imag]}
        return TauPoint(lat.tau), lat, rec
    if args.tau is None:
        raise BadInput("give --tau or --lattice")
    z = parse_complex(args.tau)
    if is_inf(z):
        raise BadInput("tau must be finite")
    try:
        t = TauPoint(z)
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    return t, None, {"tau": [t.value.real, t.value.imag]}


def _value_and_tail(quantity, tau, lat, cfg, route):
    params = cfg.params
    simple = {"E2": eval_E2, "E4": eval_E4, "E6": eval_E6, "J": eval_J,
              "Delta": lambda t, p: eval_Delta(t, "product", p)}
    if quantity in simple:
        fv = simple[quantity](tau, params)
        return fv.value, fv.tail_bound
    if quantity in ("p", "pprime"):
        e2 = eval_E2(tau, params)
        if quantity == "p":
            v = eval_p(tau, params)
            if v.at_infinity:
                return INF, math.inf
            return v.value, 6.0 * e2.tail_bound / (PI * abs(e2.value) ** 2)
        e4 = eval_E4(tau, params)
        val = e4.value / e2.value**2
        return val, (e4.tail_bound + 2.0 * abs(e4.value) * e2.tail_bound / abs(e2.value)) / abs(e2.value) ** 2
    if quantity in ("eta1", "eta2"):
        if lat is None:
            lat = lattice_new(tau.value, 1.0)
        if route == "direct":
            half = lat.omega1 / 2 if quantity == "eta1" else lat.omega2 / 2
            zp = ZetaParams(cfg.zeta_radius)
            val = 2.0 * zeta_direct(half, lat, zp)
            ext = 2.0 * zeta_direct(half, lat, ZetaParams(cfg.zeta_radius, extrapolate=True))
            # truncation estimate from the extrapolated value
            return val, abs(val - ext)
        qp = quasi_periods_modular(lat, params)
        e2 = eval_E2(lat.tau, params)
        w1, w2 = lat.omega1, lat.omega2
        if quantity == "eta2":
            return qp.eta2, PI**2 * e2.tail_bound / (3.0 * abs(w2))
        return qp.eta1, PI**2 * abs(w1) * e2.tail_bound / (3.0 * abs(w2) ** 2)
    # normalized periods
    t = tau.value
    n = eval_normalized(tau, params)
    r = eval_delta_power(tau, Fraction(1, 12), 0, params)
    e2 = eval_E2(tau, params)
    rt = r.tail_bound / abs(r.value)
    tails = {
        "Omega1": abs(t) * r.tail_bound,
        "Omega2": r.tail_bound,
        "H1": (abs(t) * e2.tail_bound + abs(t * e2.value - 6j / PI) * rt) / abs(r.value),
        "H2": (e2.tail_bound + abs(e2.value) * rt) / abs(r.value),
    }
    return getattr(n, quantity), tails[quantity]


def cmd_eval(args, cfg):
    if args.quantity not in QUANTITIES:
        raise BadInput(f"quantity must be one of {', '.join(QUANTITIES)}")
    tau, lat, rec = _source(args)
    val, tail = _value_and_tail(args.quantity, tau, lat, cfg, args.route)
    inf = is_inf(val)
    out = {"quantity": args.quantity, "input": rec,
           "value_re": None if inf else val.real, "value_im": None if inf else val.imag,
           "tail_bound": tail}
    if inf:
        out["at_infinity"] = True
    _write(to_json(out) + "\n", cfg.out)
    return 0


def cmd_verify(args, cfg):
    if args.suite != "all" and args.suite not in SUITES:
        raise BadInput(f"suite must be one of {', '.join(SUITES)}, all")
    scfg = SuiteConfig(zeta_radius=cfg.zeta_radius, cutoff=cfg.cutoff, params=cfg.params)
    results = run_suite(args.suite, scfg)
    records = []
    for suite, checks in results.items():
        for c in checks:
            records.append({"suite": suite, "check": c.name, "residual": c.residual,
                            "threshold": c.threshold, "passed": c.passed, "detail": c.detail})
    ok = all(r["passed"] for r in records)
    _write(to_json({"suite": args.suite, "passed": ok, "checks": records}) + "\n", cfg.out)
    return 0 if ok else 1


def cmd_zeros(args, cfg):
    lo, hi = parse_pair(args.bracket)
    try:
        bracket = ZeroBracket(lo, hi)
    except InvalidBracket as exc:
        raise BadInput(str(exc)) from None
    z = find_e2_zero_on_axis(bracket, tol=args.zero_tol, params=cfg.params)
    res = abs(eval_E2(z.value, cfg.params).value)
    _write(to_json({"s_star": z.value.imag, "E2_residual": res}) + "\n", cfg.out)
    return 0


def cmd_invert(args, cfg):
    if args.w is None:
        raise BadInput("give --w")
    w = parse_complex(args.w)
    if args.count < 1:
        raise BadInput("count must be positive")
    sols = invert_p(w, args.count, args.invert_tol, cfg.params)
    out = []
    for s in sols:
        v = eval_p(s, cfg.params).value
        out.append({"re_tau": s.value.real, "im_tau": s.value.imag, "residual": chordal(v, w)})
    _write(to_json(out) + "\n", cfg.out)
    return 0


def _px(z):
    y = min(max(z.imag, VIEW_Y[0]), VIEW_Y[1])
    return ((z.real - VIEW_X[0]) * PX, (VIEW_Y[1] - y) * PX)


def _clamp_end(end, other, mid):
    """Finite stand-in for an infinite endpoint of a line side: the top of the viewport."""
    if not is_inf(end):
        return end
    d = mid - other
    if d.imag <= 0:
        d = -d
    if abs(d.imag) < 1e-15:
        return other + d / abs(d) * 1e3
    return other + d * (VIEW_Y[1] - other.imag) / d.imag


def _side_path(tri, k, start):
    v, m, u = tri.vertices[k], tri.midpoints[k], tri.vertices[(k + 1) % 3]
    circ = tri.sides[k]
    a = _clamp_end(v, u, m)
    b = _clamp_end(u, v, m)
    cmds = []
    if start is None or abs(start - a) > 1e-12:
        cmds.append("{} {:.4f} {:.4f}".format("M" if start is None else "L", *_px(a)))
    x, y = _px(b)
    if circ.is_line:
        cmds.append(f"L {x:.4f} {y:.4f}")
        return cmds, b
    c, r = circ.center, circ.radius
    ang = lambda z: math.atan2((z - c).imag, (z - c).real)
    span_m = (ang(m) - ang(a)) % (2 * PI)
    span_u = (ang(b) - ang(a)) % (2 * PI)
    ccw = span_m < span_u
    sweep_angle = span_u if ccw else 2 * PI - span_u
    large = int(sweep_angle > PI)
    # the pixel y axis points down: counterclockwise in the tau plane is sweep flag 0
    cmds.append(f"A {r * PX:.4f} {r * PX:.4f} 0 {large} {int(not ccw)} {x:.4f} {y:.4f}")
    return cmds, b


def triangle_path(tri):
    cmds, pen = [], None
    for k in range(3):
        part, pen = _side_path(tri, k, pen)
        cmds.extend(part)
    cmds.append("Z")
    return " ".join(cmds)


def render_svg(elements):
    w = (VIEW_X[1] - VIEW_X[0]) * PX
    h = (VIEW_Y[1] - VIEW_Y[0]) * PX
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0f}" height="{h:.0f}" '
             f'viewBox="0 0 {w:.0f} {h:.0f}">',
             f'<rect width="{w:.0f}" height="{h:.0f}" fill="white"/>']
    for g in elements:
        tri = geom.transform_triangle(g, geom.T0)
        fill = "#d0d8e8" if g.conjugate_first else "#f4f4f4"
        lines.append(f'<path d="{triangle_path(tri)}" fill="{fill}" stroke="black" stroke-width="0.6"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_tessellate(args, cfg):
    if cfg.depth > MAX_DEPTH:
        raise BadInput(f"depth must be at most {MAX_DEPTH}")
    _write(render_svg(tessellate(cfg.depth)), cfg.out)
    return 0


def cmd_grid(args, cfg):
    re_lo, re_hi = parse_pair(args.re_range)
    im_lo, im_hi = parse_pair(args.im_range)
    if args.steps < 1 or im_lo <= 0 or im_hi < im_lo or re_hi < re_lo:
        raise BadInput("grid needs steps >= 1 and 0 < im_lo <= im_hi, re_lo <= re_hi")
    axis = lambda lo, hi: [lo + (hi - lo) * k / max(args.steps - 1, 1) for k in range(args.steps)]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["re_tau", "im_tau", "re_p", "im_p"])
    for y in axis(im_lo, im_hi):
        for x in axis(re_lo, re_hi):
            v = eval_p(complex(x, y), cfg.params)
            pr, pi = (math.inf, math.inf) if v.at_infinity else (v.value.real, v.value.imag)
            wr.writerow([fmt_float(x), fmt_float(y), fmt_float(pr), fmt_float(pi)])
    _write(buf.getvalue(), cfg.out)
    return 0


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "zeros": cmd_zeros, "invert": cmd_invert,
            "tessellate": cmd_tessellate, "grid": cmd_grid}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadInput(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-16, help="series truncation tolerance")
    common.add_argument("--order", type=int, default=4000, help="maximum number of q-powers")
    common.add_argument("--radius", type=int, default=400, help="window radius of the direct zeta sum")
    common.add_argument("--cutoff", type=float, default=12.0, help="height cutoff at cusps")
    common.add_argument("--depth", type=int, default=3, help="tessellation depth")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")

    ap = _Parser(prog="quasiperiods", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate one quantity")
    p.add_argument("quantity")
    p.add_argument("--tau")
    p.add_argument("--lattice", help="'omega1,omega2'")
    p.add_argument("--route", choices=("modular", "direct"), default="modular",
                   help="eta1/eta2 from E2 or from the direct zeta sum")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", nargs="?", default="all")

    p = sub.add_parser("zeros", parents=[common], help="zero of E2 on the imaginary axis")
    p.add_argument("--bracket", default="0.5,1.0")
    p.add_argument("--zero-tol", type=float, default=1e-12)

    p = sub.add_parser("invert", parents=[common], help="solve p(tau) = w")
    p.add_argument("--w")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--invert-tol", type=float, default=1e-9)

    sub.add_parser("tessellate", parents=[common], help="SVG of reflected copies of T0")

    p = sub.add_parser("grid", parents=[common], help="CSV of p on a rectangular grid")
    p.add_argument("--re-range", default="-0.5,0.5")
    p.add_argument("--im-range", default="0.5,2.0")
    p.add_argument("--steps", type=int, default=11)
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format or DEFAULT_FORMAT[args.command]
        if fmt != DEFAULT_FORMAT[args.command]:
            raise BadInput(f"{args.command} writes {DEFAULT_FORMAT[args.command]}, not {fmt}")
        cfg = RunConfig(args.tol, args.order, args.radius, args.cutoff, args.depth, fmt, args.out)
        cfg.params  # validates order and tol
    except (BadInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, cfg)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
