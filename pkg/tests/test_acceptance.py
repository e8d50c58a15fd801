"""Acceptance criteria, one test each, run on the verification suites.

Thresholds are restated here instead of trusting the ones carried by the
suites, so a drifting suite cannot loosen a criterion.
"""

import time

import pytest

from quasiperiods.verify import SuiteConfig, run_suite

from conftest import ACCEPTANCE_LINES

CRITERIA = {
    1: ("special values", "theorem-main",
        {"p_at_i": 1e-12, "p_at_rho": 1e-12, "E4_at_rho": 1e-12, "E6_at_i": 1e-12,
         "J_at_i": 1e-12, "J_at_rho": 1e-12}),
    2: ("Legendre relation", "legendre",
        {"legendre_modular": 1e-10, "legendre_direct": 5e-2, "legendre_direct_extrapolated": 1e-3}),
    3: ("route agreement", "legendre", {"route_agreement": 2e-2}),
    4: ("Ramanujan identities", "ramanujan",
        {"DE2_closed_vs_termwise": 1e-10, "DE4_closed_vs_termwise": 1e-10,
         "DE6_closed_vs_termwise": 1e-10, "DDelta_closed_vs_termwise": 1e-10}),
    5: ("transformation laws", "equivariance",
        {"E2_transformation": 1e-9, "E4_transformation": 1e-9, "E6_transformation": 1e-9}),
    6: ("product formula", "ramanujan", {"delta_methods": 1e-12, "delta_coefficients": 0.5}),
    7: ("ODE residuals", "ode", {"first_order_system": 1e-8, "hypergeometric_equations": 1e-6}),
    8: ("Schwarzian", "schwarzian", {"schwarzian_fd_vs_closed": 1e-6, "schwarzian_chain_rule": 1e-5}),
    9: ("E2 zero on the imaginary axis", "bounds",
        {"axis_zero_bracket_signs": 0.5, "axis_zero": 1e-12, "axis_zero_eta2": 1e-10, "axis_zero_eta1": 1e-10}),
    10: ("E2 bound", "bounds", {"e2_bound_value": 1e-3, "e2_bound_holds": 1e-300}),
    11: ("boundary correspondence and counting", "theorem-main",
         {"boundary_side_distance": 1e-10, "boundary_structure": 0.5, "argument_principle": 0.5}),
    12: ("equivariance and inversion", "equivariance",
         {"p_equivariance": 1e-9, "invert_residual": 1e-9, "invert_count": 0.5}),
    13: ("dimension formula", "ramanujan", {"dimension_formula": 0.5}),
}

_cache = {}


def suite(name):
    if name not in _cache:
        t = time.perf_counter()
        checks = run_suite(name, SuiteConfig())[name]
        _cache[name] = ({c.name: c for c in checks}, time.perf_counter() - t)
    return _cache[name]


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, suite_name, limits = CRITERIA[number]
    checks, seconds = suite(suite_name)
    parts, ok = [], True
    for name, limit in limits.items():
        c = checks[name]
        good = c.residual < limit
        ok &= good
        parts.append(f"{name}={c.residual:.2e}{'<' if good else '>='}{limit:g}")
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: " + ", ".join(parts)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
