"""Verification suites: each returns a list of named checks with residuals.

Random sample points come from a seeded generator, so a suite run is
reproducible for a given :class:`SuiteConfig`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .core import INF, RHO, chordal
from .group import IDENTITY, REFLECTIONS, S, T, UnimodularMap, apply, compose
from .hypergeo import (first_order_residual, hypergeom_residual, schwarzian_chain_residual,
                       schwarzian_p_residual, schwarzian_weight4_residual)
from .lattice import (ZetaParams, lattice_new, legendre_residual, quasi_periods_direct,
                      quasi_periods_modular)
from .pmap import (e2_bound, e2_bound_margin, e2_transform_residual, equivariance_residual,
                   eval_p, eval_p_prime, find_e2_zero_on_axis, invert_p)
from .qforms import (DEFAULT_PARAMS, delta_eisenstein_ints, delta_product_ints, dim_Mk, eval_D,
                     eval_Delta, eval_E2, eval_E4, eval_E6, eval_J)

PI = math.pi


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 20240601
    zeta_radius: int = 400
    samples: int = 200
    cutoff: float = 12.0
    params: object = DEFAULT_PARAMS


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.residual < self.threshold)


def _check(name, values, threshold, **detail):
    vals = list(values)
    return Check(name, float(max(vals)) if vals else 0.0, threshold, detail)


def random_tau(rng, n, im_lo, im_hi, re_lo=-0.5, re_hi=0.5):
    re = rng.uniform(re_lo, re_hi, n)
    im = rng.uniform(im_lo, im_hi, n)
    return [complex(a, b) for a, b in zip(re, im)]


def random_word(rng, max_len, gens=(T, S, T.inverse())):
    g = IDENTITY
    for _ in range(rng.integers(1, max_len + 1)):
        g = compose(g, gens[rng.integers(len(gens))])
    return g


def regular_points(rng, n, im_lo, im_hi, margin=0.1):
    """Points with ``|J|`` and ``|J - 1|`` above ``margin``."""
    out = []
    while len(out) < n:
        t = random_tau(rng, 1, im_lo, im_hi)[0]
        j = eval_J(t).value
        if abs(j) > margin and abs(j - 1) > margin:
            out.append(t)
    return out


# ---------------------------------------------------------------------------


def suite_legendre(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed)
    lats = []
    for t in random_tau(rng, 20, 0.9, 3.0):
        scale = complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
        lats.append(lattice_new(t * scale, scale))
    checks = [_check("legendre_modular",
                     (legendre_residual(quasi_periods_modular(l, cfg.params), l) for l in lats), 1e-10)]
    square = lattice_new(1j, 1)
    hexagonal = lattice_new(RHO, 1)
    plain = ZetaParams(cfg.zeta_radius)
    extra = ZetaParams(cfg.zeta_radius, extrapolate=True)
    checks.append(_check("legendre_direct", [legendre_residual(quasi_periods_direct(square, plain), square)], 5e-2))
    checks.append(_check("legendre_direct_extrapolated",
                         [legendre_residual(quasi_periods_direct(square, extra), square)], 1e-3))
    agree = []
    for lat in (square, hexagonal):
        m = quasi_periods_modular(lat, cfg.params).eta2
        d = quasi_periods_direct(lat, plain).eta2
        agree.append(abs(d - m) / abs(m))
    checks.append(_check("route_agreement", agree, 2e-2))
    return checks


def suite_ramanujan(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed + 1)
    pts = random_tau(rng, 100, 0.6, 2.0)
    checks = []
    for form in ("E2", "E4", "E6", "Delta"):
        res = (abs(eval_D(form, t, cfg.params).value - eval_D(form, t, cfg.params, "termwise").value)
               for t in pts)
        checks.append(_check(f"D{form}_closed_vs_termwise", res, 1e-10))
    rel = []
    for t in random_tau(rng, 50, 0.5, 2.0):
        a = eval_Delta(t, "product", cfg.params).value
        b = eval_Delta(t, "eisenstein", cfg.params).value
        rel.append(abs(a - b) / abs(a))
    checks.append(_check("delta_methods", rel, 1e-12))
    coeff = delta_eisenstein_ints(3)[1:4]
    prod = delta_product_ints(3)[1:4]
    mism = int(list(coeff) != [1, -24, 252]) + int(list(prod) != [1, -24, 252])
    checks.append(Check("delta_coefficients", float(mism), 0.5, {"eisenstein": list(coeff)}))
    bad = sum(dim_Mk(k) != dim_table(k) for k in range(2, 31))
    checks.append(Check("dimension_formula", float(bad), 0.5))
    return checks


def dim_table(k):
    """dim M_k counted as the number of monomials E4^a E6^b of weight k."""
    return sum(1 for a in range(k // 4 + 1) for b in range(k // 6 + 1) if 4 * a + 6 * b == k)


def suite_ode(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed + 2)
    pts = regular_points(rng, 50, 0.6, 2.0)
    first, second = [], []
    for t in pts:
        for k in (1, 2):
            first.extend(first_order_residual(t, k, cfg.params))
            for fam in ("H", "Omega"):
                second.append(hypergeom_residual(t, k, fam, cfg.params))
    return [_check("first_order_system", first, 1e-8),
            _check("hypergeometric_equations", second, 1e-6)]


def suite_schwarzian(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed + 3)
    pts = regular_points(rng, 10, 1.0, 2.0)
    return [_check("schwarzian_fd_vs_closed", (schwarzian_p_residual(t, params=cfg.params) for t in pts), 1e-6),
            _check("schwarzian_chain_rule", (schwarzian_chain_residual(t, params=cfg.params) for t in pts), 1e-5),
            _check("schwarzian_weight4", [schwarzian_weight4_residual(1.3j, cfg.params)], 1e-6)]


def _transform_residual(k, g, t, params):
    ev = eval_E4 if k == 4 else eval_E6
    j = g.c * t + g.d
    return abs(ev(apply(g, t), params).value - j**k * ev(t, params).value)


def suite_equivariance(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed + 4)
    pts = random_tau(rng, 100, 0.8, 2.0)
    words = [random_word(rng, 4) for _ in pts]
    checks = [
        _check("E2_transformation", (e2_transform_residual(g, t, cfg.params) for g, t in zip(words, pts)), 1e-9),
        _check("E4_transformation", (_transform_residual(4, g, t, cfg.params) for g, t in zip(words, pts)), 1e-9),
        _check("E6_transformation", (_transform_residual(6, g, t, cfg.params) for g, t in zip(words, pts)), 1e-9),
    ]
    mixed = [random_word(rng, 4, (T, S, T.inverse()) + REFLECTIONS) for _ in pts]
    # make sure reflections are represented
    mixed[:3] = list(REFLECTIONS)
    checks.append(_check("p_equivariance",
                         (equivariance_residual(g, t, cfg.params) for g, t in zip(mixed, pts)), 1e-9,
                         reflections=sum(g.conjugate_first for g in mixed)))
    res, counts = [], []
    for w in random_tau(rng, 5, -1.5, 1.5, -1.0, 1.0):
        sols = invert_p(w, 3, 1e-9, cfg.params)
        counts.append(len(sols))
        res.extend(chordal(eval_p(s, cfg.params).value, w) for s in sols)
    checks.append(_check("invert_residual", res, 1e-9))
    checks.append(Check("invert_count", float(3 - min(counts)), 0.5, {"counts": counts}))
    return checks


def suite_theorem_main(cfg=SuiteConfig()):
    p = lambda z: eval_p(z, cfg.params).value
    checks = [
        _check("p_at_i", [chordal(p(1j), -1j)], 1e-12),
        _check("p_at_rho", [chordal(p(RHO), RHO.conjugate())], 1e-12),
        _check("E4_at_rho", [abs(eval_E4(RHO, cfg.params).value)], 1e-12),
        _check("E6_at_i", [abs(eval_E6(1j, cfg.params).value)], 1e-12),
        _check("J_at_i", [abs(eval_J(1j, cfg.params).value - 1)], 1e-12),
        _check("J_at_rho", [abs(eval_J(RHO, cfg.params).value)], 1e-12),
    ]
    rep = geom.verify_boundary_map(p, geom.T0, geom.T1, cfg.samples, cfg.cutoff,
                                   fprime=lambda z: eval_p_prime(z, cfg.params))
    checks.append(_check("boundary_side_distance", rep.side_distance, 1e-10))
    structural = [rep.monotone, rep.on_arc, (rep.injective, rep.orientation_ok, rep.derivative_ok)]
    failed = sum(not x for group in structural for x in group)
    checks.append(Check("boundary_structure", float(failed), 0.5,
                        {"monotone": list(rep.monotone), "injective": rep.injective,
                         "orientation": rep.orientation_ok, "derivative": rep.derivative_ok}))
    inside, outside = counting_targets()
    wrong = 0
    for w in inside:
        wrong += geom.argument_principle_count(p, geom.T0, w, cfg.samples, cfg.cutoff) != 1
    for w in outside:
        wrong += geom.argument_principle_count(p, geom.T0, w, cfg.samples, cfg.cutoff) != 0
    checks.append(Check("argument_principle", float(wrong), 0.5,
                        {"inside": len(inside), "outside": len(outside)}))
    return checks


def counting_targets():
    """Ten points inside T1 and five outside, all clear of its boundary."""
    inside = [0.25 - 0.25j, 0.25 + 1j, 0.1 + 0.3j, 0.4 - 0.5j, 0.2 - 0.8j,
              0.3 + 3j, 0.2 + 2.5j, 0.15 - 0.1j, 0.35 + 0.5j, 0.25 - 0.6j]
    outside = [-1 + 1j, 1 + 1j, 0.25 - 2j, -0.5 - 0.5j, 2 + 0j]
    return inside, outside


def suite_bounds(cfg=SuiteConfig()):
    rng = np.random.default_rng(cfg.seed + 5)
    b = e2_bound(1j * math.sqrt(3) / 2)
    checks = [Check("e2_bound_value", abs(b - 0.105), 1e-3, {"bound": b})]
    pts = random_tau(rng, 200, math.sqrt(3) / 2, 3.0)
    checks.append(_check("e2_bound_holds", (max(0.0, -e2_bound_margin(t, cfg.params)) for t in pts), 1e-300))
    lo, hi = eval_E2(0.5j, cfg.params).value.real, eval_E2(1j, cfg.params).value.real
    via_law = -4 * eval_E2(2j, cfg.params).value.real + 12 / PI
    checks.append(Check("axis_zero_bracket_signs", float(not (lo < 0 < hi and via_law < 0)), 0.5,
                        {"E2(i/2)": lo, "E2(i)": hi}))
    z = find_e2_zero_on_axis(tol=1e-12, params=cfg.params)
    s = z.value.imag
    checks.append(_check("axis_zero", [abs(eval_E2(z.value, cfg.params).value)], 1e-12, s_star=s))
    lat = lattice_new(z.value, 1)
    qp = quasi_periods_modular(lat, cfg.params)
    checks.append(_check("axis_zero_eta2", [abs(qp.eta2)], 1e-10))
    checks.append(_check("axis_zero_eta1", [abs(qp.eta1 + 2j * PI)], 1e-10))
    return checks


SUITES = {
    "legendre": suite_legendre,
    "ramanujan": suite_ramanujan,
    "ode": suite_ode,
    "schwarzian": suite_schwarzian,
    "equivariance": suite_equivariance,
    "theorem-main": suite_theorem_main,
    "bounds": suite_bounds,
}


def run_suite(name, cfg=SuiteConfig()):
    if name == "all":
        return {k: fn(cfg) for k, fn in SUITES.items()}
    if name not in SUITES:
        raise KeyError(name)
    return {name: SUITES[name](cfg)}
