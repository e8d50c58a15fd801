import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from quasiperiods.core import RHO
from quasiperiods.errors import InvalidRoot, ToleranceUnreachable
from quasiperiods.group import apply
from quasiperiods.qforms import (SeriesParams, delta_eisenstein_ints, delta_product_ints, delta_root,
                                 dim_Mk, divisor_sum, eval_D, eval_D2_termwise, eval_delta_power,
                                 eval_Delta, eval_E2, eval_E4, eval_E6, eval_J, eval_J_cbrt,
                                 eval_Jm1_sqrt, serre_derivative)

from strategies import upper, words

# reference values from 40-digit mpmath sums of the q-series
ORACLE = {
    0.1 + 1.2j: {
        "E2": 0.98967405352314457145 - 0.0075170332429234803376j,
        "E4": 1.1033848974001399342 + 0.075558023204595744925j,
        "E6": 0.7818409108137170952 - 0.16193710417802201855j,
        "Delta": 0.00042787946743128007487 + 0.00030599129407490438306j,
        "J": 1.3614897344807373676 - 0.60098926692695244351j,
    },
    0.3 + 0.7j: {
        "E2": 1.0998806791175630355 - 0.27422813727583508287j,
        "E4": -0.16625774514710024275 + 2.6082924455098346821j,
        "E6": 4.7624860010176524708 - 4.2936551814522700099j,
        "Delta": -0.00049603292832377668559 + 0.013523454910650208582j,
        "J": -0.7543902612750587905 - 0.11733863522092599999j,
    },
}
EVAL = {"E2": eval_E2, "E4": eval_E4, "E6": eval_E6, "Delta": eval_Delta, "J": eval_J}


@pytest.mark.parametrize("tau", sorted(ORACLE, key=lambda z: z.imag))
@pytest.mark.parametrize("name", sorted(EVAL))
def test_against_mpmath(tau, name):
    ref = ORACLE[tau][name]
    assert abs(EVAL[name](tau).value - ref) < 1e-13 * max(1.0, abs(ref))


def test_values_at_i():
    g = math.gamma(0.25)
    assert abs(eval_E2(1j).value - 3 / math.pi) < 1e-15
    assert abs(eval_E4(1j).value - 3 * g**8 / (2 * math.pi) ** 6) < 1e-14
    assert abs(eval_E6(1j).value) < 1e-14
    assert abs(eval_Delta(1j).value - g**24 / (2**24 * math.pi**18)) < 1e-17
    assert abs(eval_J(1j).value - 1) < 1e-13


def test_values_at_rho():
    assert abs(eval_E4(RHO).value) < 1e-13
    assert abs(eval_J(RHO).value) < 1e-13


def test_J_at_2i():
    # 66^3 / 1728
    assert abs(eval_J(2j).value - 166.375) < 1e-11


def test_ramanujan_tau_coefficients():
    want = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480]
    assert list(delta_eisenstein_ints(8)) == want
    assert list(delta_product_ints(8)) == want


def test_divisor_sum():
    assert divisor_sum(1, 12) == 1 + 2 + 3 + 4 + 6 + 12
    assert divisor_sum(3, 6) == 1 + 8 + 27 + 216


def test_dimension():
    want = {2: 0, 4: 1, 6: 1, 8: 1, 10: 1, 12: 2, 14: 1, 24: 3, 26: 2, 30: 3}
    for k, d in want.items():
        assert dim_Mk(k) == d
    assert dim_Mk(7) == 0


def test_tail_bound_covers_truncation():
    params = SeriesParams(order=4000, tol=1e-6)
    for tau in ORACLE:
        for name in ("E2", "E4", "E6"):
            fv = EVAL[name](tau, params)
            assert abs(fv.value - ORACLE[tau][name]) <= fv.tail_bound + 1e-14


def test_order_cap():
    with pytest.raises(ToleranceUnreachable):
        eval_E4(0.5j, SeriesParams(order=3, tol=1e-16, reduce_below=0.0))


def test_bad_root():
    with pytest.raises(InvalidRoot):
        delta_root(1j, 5)
    with pytest.raises(InvalidRoot):
        eval_delta_power(1j, Fraction(1, 5))


@given(upper(0.5, 2.5))
def test_roots_of_delta(tau):
    d = eval_Delta(tau).value
    for k in (2, 3, 12, 24):
        assert abs(delta_root(tau, k).value ** k - d) < 1e-12 * abs(d)


def test_root_is_positive_on_axis():
    for s in (0.6, 1.0, 1.7):
        r = delta_root(1j * s, 12).value
        assert r.real > 0 and abs(r.imag) < 1e-15


@given(upper(0.5, 2.5))
def test_power_series_matches_product(tau):
    r = eval_delta_power(tau, Fraction(1, 8)).value
    assert abs(r - delta_root(tau, 8).value) < 1e-13 * abs(r)


@given(upper(0.6, 2.0))
def test_J_roots(tau):
    j = eval_J(tau).value
    assert abs(eval_J_cbrt(tau).value ** 3 - j) < 1e-11 * max(1, abs(j))
    assert abs(eval_Jm1_sqrt(tau).value ** 2 - (j - 1)) < 1e-11 * max(1, abs(j))


@given(upper(0.8, 2.0), words(4))
def test_weight_laws(tau, g):
    j = g.c * tau + g.d
    gt = apply(g, tau)
    assert abs(eval_E4(gt).value - j**4 * eval_E4(tau).value) < 1e-9 * max(1, abs(j) ** 4)
    assert abs(eval_E6(gt).value - j**6 * eval_E6(tau).value) < 1e-9 * max(1, abs(j) ** 6)
    e2 = j * j * eval_E2(tau).value - (6j / math.pi) * g.c * j
    assert abs(eval_E2(gt).value - e2) < 1e-9 * max(1, abs(j) ** 2)


@given(upper(0.5, 2.0))
def test_reflection_symmetry(tau):
    mirror = -tau.conjugate()
    for ev in (eval_E2, eval_E4, eval_E6):
        assert abs(ev(mirror).value - ev(tau).value.conjugate()) < 1e-13


@given(upper(0.6, 2.0))
def test_ramanujan_identities(tau):
    for form in ("E2", "E4", "E6", "Delta"):
        closed = eval_D(form, tau).value
        termwise = eval_D(form, tau, method="termwise").value
        assert abs(closed - termwise) < 1e-10


@given(upper(0.6, 2.0))
def test_serre_derivative_of_E4(tau):
    assert abs(serre_derivative("E4", tau).value + eval_E6(tau).value / 3) < 1e-12


def test_second_derivative_of_E2():
    # D^2 E2 from differentiating the Ramanujan identity D E2 = (E2^2 - E4)/12
    tau = 0.2 + 0.9j
    e2, e4, e6 = (ev(tau).value for ev in (eval_E2, eval_E4, eval_E6))
    de2 = (e2 * e2 - e4) / 12
    de4 = (e2 * e4 - e6) / 3
    want = (2 * e2 * de2 - de4) / 12
    assert abs(eval_D2_termwise("E2", tau).value - want) < 1e-11


def test_reduction_is_consistent():
    near = SeriesParams(reduce_below=0.0)
    for tau in (0.1 + 0.4j, -0.3 + 0.45j):
        for ev in (eval_E2, eval_E4, eval_E6):
            a, b = ev(tau).value, ev(tau, near).value
            assert abs(a - b) < 1e-11 * max(1, abs(a))
    assert np.isfinite(eval_E4(0.3 + 0.01j).value)


def test_nome():
    from quasiperiods.qforms import nome
    assert abs(nome(1j) - math.exp(-2 * math.pi)) < 1e-17
    assert abs(nome(1 + 1j) - nome(1j)) < 1e-16
    assert abs(nome(10j) - math.exp(-20 * math.pi)) < 1e-40


def test_cusp_limits():
    for ev in (eval_E2, eval_E4, eval_E6):
        assert abs(ev(8j).value - 1) < 1e-15
    assert abs(eval_D("E2", 8j).value) < 1e-15
    assert abs(serre_derivative("E4", 8j).value + 1 / 3) < 1e-15


def test_serre_examples():
    e4, e6 = eval_E4(1.5j).value, eval_E6(1.5j).value
    assert abs(serre_derivative("E4", 1.5j).value + e6 / 3) < 1e-10
    assert abs(serre_derivative("E6", 1.5j).value + e4 * e4 / 2) < 1e-10


def test_delta_methods_at_i():
    a, b = eval_Delta(1j, "product").value, eval_Delta(1j, "eisenstein").value
    assert abs(a - b) < 1e-12 * abs(a)
    assert abs(delta_root(2j, 12).value ** 12 - eval_Delta(2j).value) < 1e-12 * abs(eval_Delta(2j).value)


@pytest.mark.parametrize("tau", [1j, 0.2 + 1.1j, RHO])
def test_lattice_sum_oracle(tau):
    from quasiperiods.qforms import eval_G_lattice, lattice_tail_bound
    g4, g6 = eval_G_lattice(4, tau, 200), eval_G_lattice(6, tau, 200)
    assert abs(45 * g4 / math.pi**4 - eval_E4(tau).value) <= 45 / math.pi**4 * lattice_tail_bound(4, tau, 200)
    assert abs(945 * g6 / (2 * math.pi**6) - eval_E6(tau).value) <= \
        945 / (2 * math.pi**6) * lattice_tail_bound(6, tau, 200)


@given(upper(0.6, 2.0))
def test_periodicity(tau):
    for name, ev in EVAL.items():
        a, b = ev(tau), ev(tau + 1)
        assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound + 1e-13 * max(1, abs(a.value))


def test_E4_vanishes_only_at_rho_orbit():
    from quasiperiods.group import is_rho_equivalent
    rng = np.random.default_rng(7)
    seen = 0
    while seen < 50:
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0))
        if is_rho_equivalent(tau, 0.05) or min(abs(tau - RHO), abs(tau - RHO + 1)) < 0.1:
            continue
        seen += 1
        assert abs(eval_E4(tau).value) > 1e-3
