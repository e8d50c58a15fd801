"""The quasi-period ratio ``p(tau) = tau - 6i / (pi E2(tau))`` and its inverse.

``p`` is a meromorphic function of tau with values on the Riemann sphere.
It commutes with every element of PSL2(Z) and, because the reflections of
T0 have real matrices, with the anti-conformal reflections as well.
"""

import math
from dataclasses import dataclass

from .core import INF, TauPoint, as_tau, chordal, is_inf
from .errors import InvalidBracket, NotFound, PoleError
from .group import IDENTITY, apply, tessellate
from .qforms import DEFAULT_PARAMS, e2_series_part, eval_D, eval_E2, eval_E4, nome

PI = math.pi
AT_INFINITY = 1e12
BISECT_WIDTH = 1e-6
SEED_DEPTH = 6
CUSP_ESCAPE = 1e3
CUSP_FLOOR = 1e-10


@dataclass(frozen=True)
class PValue:
    value: complex
    at_infinity: bool

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class ZeroBracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0 < self.lo < self.hi:
            raise InvalidBracket(f"need 0 < lo < hi, got ({self.lo}, {self.hi})")


DEFAULT_BRACKET = ZeroBracket(0.5, 1.0)


def _p_raw(t, params):
    e2 = eval_E2(t, params).value
    if abs(e2) * AT_INFINITY < 6.0 / PI:
        return INF
    return t - 6j / (PI * e2)


def eval_p(tau, params=DEFAULT_PARAMS):
    v = _p_raw(as_tau(tau), params)
    if is_inf(v):
        return PValue(INF, True)
    return PValue(v, False)


def eval_p_prime(tau, params=DEFAULT_PARAMS):
    t = as_tau(tau)
    e2 = eval_E2(t, params).value
    if e2 == 0:
        raise PoleError(f"E2 vanishes at {t!r}")
    return eval_E4(t, params).value / e2**2


def equivariance_residual(g, tau, params=DEFAULT_PARAMS):
    """Chordal distance between ``p(g tau)`` and ``g(p(tau))``."""
    t = as_tau(tau)
    if g.key == IDENTITY.key:
        return 0.0
    lhs = _p_raw(apply(g, t), params)
    rhs = apply(g, _p_raw(t, params))
    return chordal(lhs, rhs)


def e2_transform_residual(S, tau, params=DEFAULT_PARAMS):
    t = as_tau(tau)
    j = S.c * t + S.d
    lhs = eval_E2(apply(S, t), params).value
    rhs = j * j * eval_E2(t, params).value - (6j / PI) * S.c * j
    return abs(lhs - rhs)


def e2_bound(tau):
    """``24|q| / (1 - |q|)^3``, a bound for ``|E2 - 1|``."""
    x = abs(nome(as_tau(tau)))
    return 24.0 * x / (1.0 - x) ** 3


def e2_bound_margin(tau, params=DEFAULT_PARAMS):
    """``e2_bound(tau) - |E2(tau) - 1|``, with ``E2 - 1`` summed without the constant."""
    t = as_tau(tau)
    return e2_bound(t) - abs(e2_series_part(t, params).value)


def _e2_axis(s, params):
    return eval_E2(complex(0.0, s), params).value.real


def find_e2_zero_on_axis(bracket=DEFAULT_BRACKET, tol=1e-12, params=DEFAULT_PARAMS):
    """Zero of E2 on the imaginary axis: bisection, then Newton.

    On the axis ``d/ds E2(is) = -2 pi DE2(is)`` with ``DE2`` real there.
    """
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = _e2_axis(lo, params), _e2_axis(hi, params)
    if flo == 0:
        return TauPoint(complex(0.0, lo))
    if fhi == 0:
        return TauPoint(complex(0.0, hi))
    if (flo > 0) == (fhi > 0):
        raise InvalidBracket(f"E2 has the same sign at i*{lo} and i*{hi}")
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        fm = _e2_axis(mid, params)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    for _ in range(20):
        f = _e2_axis(s, params)
        if abs(f) < tol:
            break
        df = -2.0 * PI * eval_D("E2", complex(0.0, s), params).value.real
        s -= f / df
    f = _e2_axis(s, params)
    if abs(f) >= tol:
        raise NotFound(f"Newton polish stalled at s = {s!r}", {"residual": abs(f)})
    return TauPoint(complex(0.0, s))


# ---------------------------------------------------------------------------
# inversion

_SEEDS = (complex(0.25, 1.2), complex(-0.25, 1.2), complex(0.1, 2.5),
          complex(-0.1, 2.5), complex(0.3, 0.97), complex(-0.3, 0.97))


def _residual_fn(v, params):
    """Newton target for ``p(tau) = v`` in a chart suited to ``v``."""
    if not is_inf(v):
        def f(t):
            e2 = eval_E2(t, params).value
            return t - 6j / (PI * e2) - v, eval_E4(t, params).value / e2**2
    else:
        def f(t):
            # 1/p = pi E2 / (pi t E2 - 6i)
            e2 = eval_E2(t, params).value
            den = PI * t * e2 - 6j
            dp = eval_E4(t, params).value / e2**2
            p = den / (PI * e2)
            return PI * e2 / den, -dp / p**2
    return f


def _newton(f, t, max_iter=100, max_halvings=50):
    """Damped Newton, kept inside the upper half-plane; runs to the noise floor."""
    val, der = f(t)
    for _ in range(max_iter):
        if der == 0 or not math.isfinite(abs(val)):
            break
        step = -val / der
        for _ in range(max_halvings):
            cand = t + step
            if cand.imag > 0:
                cval, cder = f(cand)
                if abs(cval) < abs(val):
                    break
            step *= 0.5
        else:
            break
        t, val, der = cand, cval, cder
        if abs(val) < 1e-15:
            break
    return t


def invert_p(w, count=3, tol=1e-9, params=DEFAULT_PARAMS):
    """Up to ``count`` distinct points ``tau`` with ``p(tau) = w``.

    For each ``S`` among the words of the tessellation, solve ``p(t) = S^-1(w)``
    from seeds in the fundamental domain and move the solution to ``S(t)``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    w = INF if is_inf(w) else complex(w)
    candidates = [g for g in tessellate(SEED_DEPTH) if not g.conjugate_first]
    sep = max(10.0 * tol, 1e-6)
    found = []
    best = math.inf
    for g in candidates:
        v = apply(g.inverse(), w)
        f = _residual_fn(v, params)
        seeds = list(_SEEDS)
        if not is_inf(v) and v.imag > 0.5:
            seeds.insert(0, v + 6j / PI)
        for seed in seeds:
            t = _newton(f, seed)
            tau = apply(g, t)
            # p tends to the cusp value at a cusp: limits there are not preimages
            if t.imag < CUSP_FLOOR or abs(t) > CUSP_ESCAPE * (1.0 + (0.0 if is_inf(v) else abs(v))):
                continue
            if is_inf(tau) or tau.imag < CUSP_FLOOR:
                continue
            res = chordal(_p_raw(tau, params), w)
            best = min(best, res)
            if res < tol:
                if all(abs(tau - x) > sep for x in found):
                    found.append(tau)
                break
        if len(found) >= count:
            break
    if not found:
        raise NotFound(f"no preimage of {w!r} found",
                       {"candidates": len(candidates), "best_residual": best})
    found.sort(key=lambda z: (-z.imag, z.real))
    return [TauPoint(z) for z in found]
