"""q-series evaluation of E2, E4, E6, Delta, J, the roots of Delta and J,
and their derivatives ``D = (1/2 pi i) d/dtau``.

Every evaluator returns a :class:`FormValue` whose ``tail_bound`` bounds the
discarded part of the series.  It accounts for truncation only; floating
point rounding is not included.  Bounds for Eisenstein series rest on
``sigma_k(n) <= n**(k+1)``; bounds for products ``prod (1 - q^n)^e`` use the
coefficients of ``prod (1 - y^n)^(-|e|)`` as a majorant, evaluated at the
real nome ``y = sqrt(|q|)``.  Bounds of composite quantities (J, roots,
closed-form derivatives) are propagated to first order.

Points with ``Im(tau) < SeriesParams.reduce_below`` are first moved into the
fundamental domain and mapped back with the (quasi-)modular transformation
laws.  Roots of Delta have a multiplier under PSL2(Z), so they, and all
termwise derivatives, are always summed directly.
"""

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import as_tau
from .errors import InvalidRoot, InvalidWeight, ToleranceUnreachable
from .group import reduce_to_fundamental

PI = math.pi
SQRT3 = math.sqrt(3.0)
TWO_PI_I = 2j * PI

# constant and coefficient scale of 1 + scale * sum sigma_k(n) q^n
_EISENSTEIN = {2: (-24.0, 1), 4: (240.0, 3), 6: (-504.0, 5)}
# |coeff_n of (E4^3 - E6^2)/1728| <= _DELTA_C * n**14
_DELTA_C = (3 * 240**3 + 2 * 504**2) / 1728


@dataclass(frozen=True)
class SeriesParams:
    """Truncation controls: ``order`` caps the number of q-powers kept."""

    order: int = 4000
    tol: float = 1e-16
    reduce_below: float = 0.35

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")


DEFAULT_PARAMS = SeriesParams()


def _direct_params(params):
    """Same truncation controls with the fundamental-domain reduction switched off."""
    if params.reduce_below == 0.0:
        return params
    return replace(params, reduce_below=0.0)


@dataclass(frozen=True)
class FormValue:
    value: complex
    tail_bound: float = 0.0

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def nome(tau):
    return cmath.exp(TWO_PI_I * as_tau(tau))


def divisor_sum(k, n):
    """Exact ``sigma_k(n)``; Python integers do not overflow."""
    if k < 1 or n < 1:
        raise ValueError("divisor_sum needs k >= 1 and n >= 1")
    total = 0
    m = 1
    while m * m <= n:
        if n % m == 0:
            total += m**k
            other = n // m
            if other != m:
                total += other**k
        m += 1
    return total


def _bucket(n):
    return max(64, 1 << (int(n) - 1).bit_length())


@lru_cache(maxsize=None)
def _sigma_ints(k, size):
    sig = [0] * (size + 1)
    for m in range(1, size + 1):
        mk = m**k
        for multiple in range(m, size + 1, m):
            sig[multiple] += mk
    return tuple(sig)


@lru_cache(maxsize=None)
def _sigma_float(k, size):
    # float() raises OverflowError if a divisor sum leaves the double range
    arr = np.array([float(s) for s in _sigma_ints(k, size)[1:]])
    arr.setflags(write=False)
    return arr


def _powers(q, n):
    """Array ``[q, q^2, ..., q^n]``."""
    return np.cumprod(np.full(n, q, dtype=complex))


def _poly_tail(scale, power, x, n):
    """Bound for ``sum_{m > n} scale * m**power * x**m`` (0 <= x < 1)."""
    if x == 0.0:
        return 0.0
    ratio = ((n + 2) / (n + 1)) ** power * x
    if ratio >= 1.0:
        return math.inf
    log_first = math.log(scale) + power * math.log(n + 1) + (n + 1) * math.log(x)
    if log_first > 700:
        return math.inf
    return math.exp(log_first) / (1.0 - ratio)


def _terms_for(tail, x, tol, order):
    """Smallest n (roughly) with ``tail(n) <= tol``."""
    if x == 0.0:
        return 0
    n = max(1, int(math.log(tol) / math.log(x)) // 2)
    while tail(n) > tol:
        if n >= order:
            raise ToleranceUnreachable(
                f"tolerance {tol:g} needs more than {order} terms at |q| = {x:.6g}")
        n = min(order, n + 1 if n < 32 else int(n * 1.1) + 1)
    return n


def _eisenstein_series(weight, q, tol, order, deriv=0):
    """``D^deriv`` of the non-constant part of E_weight, summed directly."""
    scale, k = _EISENSTEIN[weight]
    x = abs(q)
    power = k + 1 + deriv
    c = abs(scale)
    n = _terms_for(lambda m: _poly_tail(c, power, x, m), x, tol, order)
    if n == 0:
        return 0j, 0.0
    coeff = _sigma_float(k, _bucket(n))[:n]
    if deriv:
        coeff = coeff * np.arange(1, n + 1, dtype=float) ** deriv
    return complex(scale * np.dot(coeff, _powers(q, n))), _poly_tail(c, power, x, n)


def _reduction(tau, params):
    if tau.imag >= params.reduce_below:
        return None
    return reduce_to_fundamental(tau)


def _eval_eisenstein(weight, tau, params):
    tau = as_tau(tau)
    red = _reduction(tau, params)
    if red is None:
        s, tail = _eisenstein_series(weight, cmath.exp(TWO_PI_I * tau), params.tol, params.order)
        return FormValue(1.0 + s, tail)
    t0, g = red.tau_reduced, red.map
    j = g.c * t0 + g.d
    scale = abs(j) ** weight
    s, tail = _eisenstein_series(weight, cmath.exp(TWO_PI_I * t0), params.tol / scale, params.order)
    value = j**weight * (1.0 + s)
    if weight == 2:
        value -= 6j / PI * g.c * j
    return FormValue(value, scale * tail)


def eval_E2(tau, params=DEFAULT_PARAMS):
    """``E2 = 1 - 24 sum sigma_1(n) q^n`` (quasi-modular of weight 2)."""
    return _eval_eisenstein(2, tau, params)


def eval_E4(tau, params=DEFAULT_PARAMS):
    return _eval_eisenstein(4, tau, params)


def eval_E6(tau, params=DEFAULT_PARAMS):
    return _eval_eisenstein(6, tau, params)


def e2_series_part(tau, params=DEFAULT_PARAMS):
    """``E2(tau) - 1`` summed directly, without cancellation against the constant."""
    tau = as_tau(tau)
    s, tail = _eisenstein_series(2, cmath.exp(TWO_PI_I * tau), params.tol, params.order)
    return FormValue(s, tail)


def eval_G_lattice(k, tau, radius=200):
    """Eisenstein series ``sum' (m tau + n)^-k`` over ``|m|, |n| <= radius``.

    Independent of the q-expansions; ``45 G4 / pi^4 = E4`` and
    ``945 G6 / (2 pi^6) = E6``.
    """
    if k not in (4, 6):
        raise InvalidWeight(f"only weights 4 and 6 are supported, got {k}")
    if radius < 10:
        raise ValueError("radius must be >= 10")
    tau = as_tau(tau)
    r = np.arange(-radius, radius + 1, dtype=float)
    m, n = np.meshgrid(r, r, indexing="ij")
    gam = m * tau + n
    gam[radius, radius] = 1.0
    terms = gam ** (-k)
    terms[radius, radius] = 0.0
    # pair each term with its negative index partner; the sum is even in (m, n)
    return complex(np.sum(terms + terms[::-1, ::-1]) / 2.0)


def lattice_tail_bound(k, tau, radius):
    """Upper bound for the part of G_k outside the box ``|m|, |n| <= radius``.

    Uses ``|m tau + n| >= s * max(|m|, |n|)`` with ``s`` the minimum of
    ``|x tau + y|`` over the unit square boundary, and 8L lattice points on
    the box shell of size L.
    """
    tau = as_tau(tau)
    ts = np.linspace(-1.0, 1.0, 4001)
    shell = np.concatenate([ts * tau + 1, ts * tau - 1, tau + ts, -tau + ts])
    s = float(np.min(np.abs(shell)))
    # sum_{L > R} 8 L (s L)^-k  <=  8 s^-k R^(2-k) / (k - 2)
    return 8.0 * s ** (-k) * radius ** (2 - k) / (k - 2)


# --- Delta and its roots ---------------------------------------------------

def _check_root(k):
    if k < 1 or 24 % k:
        raise InvalidRoot(f"root index must divide 24, got {k}")


def _delta_root_direct(tau, k, tol, order):
    """``exp(2 pi i tau / k) prod (1 - q^n)^(24/k)`` with truncation bound."""
    q = cmath.exp(TWO_PI_I * tau)
    x = abs(q)
    e = 24 // k
    pre = cmath.exp(TWO_PI_I * tau / k)
    if x == 0.0:
        return pre, 0.0
    # |partial product| <= |pre| * exp(e x / (1 - x))
    upper = abs(pre) * math.exp(e * x / (1.0 - x))
    # absolute tolerance for large values, relative for small ones
    eps = min(0.1, tol / (1.2 * max(upper, 1.0)))
    # log of the discarded factor is at most e x^(N+1) / (1 - x)^2
    need = math.log(eps * (1.0 - x) ** 2 / e) / math.log(x)
    n = max(1, math.ceil(need) - 1)
    if n > order:
        raise ToleranceUnreachable(f"Delta^(1/{k}) needs {n} > {order} factors")
    prod = complex(np.prod(1.0 - _powers(q, n)))
    value = pre * prod**e
    log_tail = e * x ** (n + 1) / (1.0 - x) ** 2
    return value, abs(value) * math.expm1(log_tail)


def delta_root(tau, k, params=DEFAULT_PARAMS):
    """``Delta^(1/k)`` for ``k | 24``, positive on the imaginary axis.

    Evaluated as ``exp(2 pi i tau / k) prod (1 - q^n)^(24/k)``, which is
    single valued on the upper half-plane.
    """
    _check_root(k)
    tau = as_tau(tau)
    v, t = _delta_root_direct(tau, k, params.tol, params.order)
    return FormValue(v, t)


@lru_cache(maxsize=None)
def _eta_power_ints(e, size):
    """Integer coefficients of ``prod_{n>=1} (1 - q^n)^e`` up to ``q^size``."""
    sig = _sigma_ints(1, size)
    a = [1] + [0] * size
    for n in range(1, size + 1):
        acc = 0
        for j in range(1, n + 1):
            acc += sig[j] * a[n - j]
        a[n] = (-e * acc) // n
    return tuple(a)


@lru_cache(maxsize=None)
def _eta_power_float(e, size):
    arr = np.array([float(c) for c in _eta_power_ints(e, size)])
    arr.setflags(write=False)
    return arr


def _majorant_log(e, y):
    """``log prod (1 - y^n)^(-|e|)`` for 0 <= y < 1."""
    total = 0.0
    yn = y
    while yn > 1e-18:
        total -= math.log1p(-yn)
        yn *= y
    return abs(e) * total


def _eta_tail(e, x, n, deriv, shift):
    """Bound for ``sum_{m > n} (m + shift)^deriv |a_m| x^m`` with a_m from (1-q^m)^e."""
    if x == 0.0:
        return 0.0
    r = math.sqrt(x)
    log_major = _majorant_log(e, r)
    m = n + 1
    if deriv:
        peak = deriv / -math.log(r) - shift
        if m < peak:
            return math.inf
        log_sup = deriv * math.log(m + max(shift, 0.0) + 1.0) + m * math.log(r)
    else:
        log_sup = m * math.log(r)
    val = log_sup + log_major
    return math.exp(val) if val < 700 else math.inf


def eval_delta_power(tau, exponent, deriv=0, params=DEFAULT_PARAMS):
    """``D^deriv (Delta^exponent)`` summed termwise from its q-expansion.

    ``24 * exponent`` must be an integer.  The branch is the one of
    :func:`delta_root`.
    """
    r = Fraction(exponent)
    if (24 * r).denominator != 1 or r == 0:
        raise InvalidRoot(f"24 * exponent must be a nonzero integer, got {exponent}")
    e = int(24 * r)
    tau = as_tau(tau)
    q = cmath.exp(TWO_PI_I * tau)
    pre = cmath.exp(TWO_PI_I * float(r) * tau)
    x = abs(q)
    shift = float(r)
    tol = params.tol / max(abs(pre), 1e-300)
    n = _terms_for(lambda m: _eta_tail(e, x, m, deriv, shift), x, tol, params.order)
    coeff = _eta_power_float(e, _bucket(n + 1))[: n + 1]
    if deriv:
        coeff = coeff * (np.arange(n + 1, dtype=float) + shift) ** deriv
    powers = np.concatenate([[1.0 + 0j], _powers(q, n)])
    value = pre * complex(np.dot(coeff, powers))
    return FormValue(value, abs(pre) * _eta_tail(e, x, n, deriv, shift))


@lru_cache(maxsize=None)
def delta_eisenstein_ints(size):
    """Exact q-coefficients of ``(E4^3 - E6^2) / 1728`` up to ``q^size``."""
    s3 = _sigma_ints(3, size)
    s5 = _sigma_ints(5, size)
    e4 = [1] + [240 * s3[n] for n in range(1, size + 1)]
    e6 = [1] + [-504 * s5[n] for n in range(1, size + 1)]

    def mul(a, b):
        return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(size + 1)]

    e4sq = mul(e4, e4)
    diff = [a - b for a, b in zip(mul(e4sq, e4), mul(e6, e6))]
    assert all(c % 1728 == 0 for c in diff)
    return tuple(c // 1728 for c in diff)


def delta_product_ints(size):
    """Exact q-coefficients of ``q prod (1 - q^n)^24`` up to ``q^size``."""
    return (0,) + _eta_power_ints(24, _bucket(size))[:size]


def _delta_eisenstein_direct(tau, tol, order):
    q = cmath.exp(TWO_PI_I * tau)
    x = abs(q)
    n = _terms_for(lambda m: _poly_tail(_DELTA_C, 14, x, m), x, tol, order)
    if n == 0:
        return 0j, 0.0
    coeff = np.array([float(c) for c in delta_eisenstein_ints(_bucket(n))[1: n + 1]])
    return complex(np.dot(coeff, _powers(q, n))), _poly_tail(_DELTA_C, 14, x, n)


def eval_Delta(tau, method="product", params=DEFAULT_PARAMS):
    """Discriminant ``Delta = (E4^3 - E6^2)/1728 = q prod (1 - q^n)^24``.

    ``method="eisenstein"`` sums the exact integer q-expansion of
    ``(E4^3 - E6^2)/1728`` built from the divisor sums, which avoids the
    cancellation of the floating point difference; ``"product"`` uses the
    product formula.
    """
    if method not in ("product", "eisenstein"):
        raise ValueError(f"unknown method {method!r}")
    tau = as_tau(tau)
    direct = _delta_eisenstein_direct if method == "eisenstein" else (
        lambda t, tol, order: _delta_root_direct(t, 1, tol, order))
    red = _reduction(tau, params)
    if red is None:
        v, t = direct(tau, params.tol, params.order)
        return FormValue(v, t)
    t0, g = red.tau_reduced, red.map
    j = g.c * t0 + g.d
    scale = abs(j) ** 12
    v, t = direct(t0, params.tol / scale, params.order)
    return FormValue(j**12 * v, scale * t)


# --- J and its roots ---------------------------------------------------------

def eval_J(tau, params=DEFAULT_PARAMS):
    """``J = E4^3 / (1728 Delta)``; J(rho) = 0, J(i) = 1."""
    tau = as_tau(tau)
    red = _reduction(tau, params)
    t0 = tau if red is None else red.tau_reduced
    direct = _direct_params(params)
    e4 = eval_E4(t0, direct)
    dl = eval_Delta(t0, "product", direct)
    value = e4.value**3 / (1728.0 * dl.value)
    tail = (3 * abs(e4.value) ** 2 * e4.tail_bound / (1728 * abs(dl.value))
            + abs(value) * dl.tail_bound / abs(dl.value))
    return FormValue(value, tail)


def eval_J_cbrt(tau, params=DEFAULT_PARAMS):
    """``J^(1/3) = E4 / (12 Delta^(1/3))``."""
    e4 = eval_E4(tau, params)
    r3 = delta_root(tau, 3, params)
    value = e4.value / (12.0 * r3.value)
    tail = e4.tail_bound / (12 * abs(r3.value)) + abs(value) * r3.tail_bound / abs(r3.value)
    return FormValue(value, tail)


def eval_Jm1_sqrt(tau, params=DEFAULT_PARAMS):
    """``(J - 1)^(1/2) = E6 / (24 sqrt(3) Delta^(1/2))``."""
    e6 = eval_E6(tau, params)
    r2 = delta_root(tau, 2, params)
    value = e6.value / (24.0 * SQRT3 * r2.value)
    tail = e6.tail_bound / (24 * SQRT3 * abs(r2.value)) + abs(value) * r2.tail_bound / abs(r2.value)
    return FormValue(value, tail)


def dim_Mk(k):
    """Dimension of the space of modular forms of weight k for PSL2(Z)."""
    if k < 1:
        raise ValueError("weight must be >= 1")
    if k % 2:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


# --- derivatives ---------------------------------------------------------------

FORMS = ("E2", "E4", "E6", "Delta", "J")


def _D_closed(form, tau, params):
    if form == "E2":
        e2, e4 = eval_E2(tau, params), eval_E4(tau, params)
        v = (e2.value**2 - e4.value) / 12.0
        return FormValue(v, (2 * abs(e2.value) * e2.tail_bound + e4.tail_bound) / 12)
    if form == "E4":
        e2, e4, e6 = eval_E2(tau, params), eval_E4(tau, params), eval_E6(tau, params)
        v = (e2.value * e4.value - e6.value) / 3.0
        t = abs(e2.value) * e4.tail_bound + abs(e4.value) * e2.tail_bound + e6.tail_bound
        return FormValue(v, t / 3)
    if form == "E6":
        e2, e4, e6 = eval_E2(tau, params), eval_E4(tau, params), eval_E6(tau, params)
        v = (e2.value * e6.value - e4.value**2) / 2.0
        t = abs(e2.value) * e6.tail_bound + abs(e6.value) * e2.tail_bound + 2 * abs(e4.value) * e4.tail_bound
        return FormValue(v, t / 2)
    if form == "Delta":
        dl, e2 = eval_Delta(tau, "product", params), eval_E2(tau, params)
        return FormValue(dl.value * e2.value,
                         abs(dl.value) * e2.tail_bound + abs(e2.value) * dl.tail_bound)
    # DJ = -2 sqrt(3) (J^(1/3))^2 (J-1)^(1/2) Delta^(1/6)
    c, s, r6 = eval_J_cbrt(tau, params), eval_Jm1_sqrt(tau, params), delta_root(tau, 6, params)
    v = -2.0 * SQRT3 * c.value**2 * s.value * r6.value
    rel = 0.0
    for part, power in ((c, 2), (s, 1), (r6, 1)):
        if part.value != 0:
            rel += power * part.tail_bound / abs(part.value)
    return FormValue(v, abs(v) * rel)


def _D_termwise(form, tau, params, deriv=1):
    tau = as_tau(tau)
    q = cmath.exp(TWO_PI_I * tau)
    if form in ("E2", "E4", "E6"):
        v, t = _eisenstein_series(int(form[1]), q, params.tol, params.order, deriv=deriv)
        return FormValue(v, t)
    if form == "Delta":
        return eval_delta_power(tau, 1, deriv, params)
    if deriv != 1:
        raise ValueError("termwise J derivative is only available to first order")
    # quotient rule on E4^3 / (1728 Delta) with both parts differentiated termwise
    direct = _direct_params(params)
    e4 = eval_E4(tau, direct)
    de4 = _D_termwise("E4", tau, params)
    dl = eval_Delta(tau, "product", direct)
    ddl = _D_termwise("Delta", tau, params)
    num = 3 * e4.value**2 * de4.value * dl.value - e4.value**3 * ddl.value
    v = num / (1728.0 * dl.value**2)
    t = (3 * abs(e4.value) ** 2 * de4.tail_bound / abs(dl.value)
         + abs(e4.value) ** 3 * ddl.tail_bound / abs(dl.value) ** 2
         + 6 * abs(e4.value * de4.value) * e4.tail_bound / abs(dl.value)
         + 2 * abs(v) * 1728 * dl.tail_bound / abs(dl.value)) / 1728
    return FormValue(v, t)


def eval_D(form, tau, params=DEFAULT_PARAMS, method="closed_form"):
    """``D f = (1/2 pi i) df/dtau``.

    ``closed_form`` uses the Ramanujan identities, ``D Delta = Delta E2`` and
    ``DJ = -2 sqrt(3) J^(2/3) (J-1)^(1/2) Delta^(1/6)``; ``termwise``
    differentiates the q-series coefficient by coefficient (for J: the
    series of E4 and Delta, combined by the quotient rule).
    """
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    if method == "closed_form":
        return _D_closed(form, tau, params)
    if method == "termwise":
        return _D_termwise(form, tau, params)
    raise ValueError(f"unknown method {method!r}")


def eval_D2_termwise(form, tau, params=DEFAULT_PARAMS):
    """``D^2 f`` for E2, E4, E6 or Delta from the twice-differentiated series."""
    if form not in ("E2", "E4", "E6", "Delta"):
        raise ValueError(f"unsupported form {form!r}")
    return _D_termwise(form, tau, params, deriv=2)


def serre_derivative(form, tau, params=DEFAULT_PARAMS):
    """``theta_k f = Df - (k/12) E2 f`` with ``Df`` taken termwise."""
    if form not in ("E4", "E6"):
        raise InvalidWeight(f"Serre derivative implemented for E4 and E6, got {form!r}")
    k = int(form[1])
    f = eval_E4(tau, params) if k == 4 else eval_E6(tau, params)
    df = _D_termwise(form, tau, params)
    e2 = eval_E2(tau, params)
    v = df.value - k / 12.0 * e2.value * f.value
    t = df.tail_bound + k / 12 * (abs(e2.value) * f.tail_bound + abs(f.value) * e2.tail_bound)
    return FormValue(v, t)
