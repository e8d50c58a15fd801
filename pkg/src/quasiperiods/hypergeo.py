"""Normalized periods as functions of J, their hypergeometric equations, and
Schwarzian derivatives.

Every derivative in the J-variable is taken through tau,
``d/dJ = D / DJ`` with ``D = (1/2 pi i) d/dtau``, so no local inverse
``tau(J)`` is ever built and all checks are pointwise in tau.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import TauPoint, as_tau
from .errors import OutOfRegime, SingularPoint
from .qforms import (DEFAULT_PARAMS, eval_D, eval_D2_termwise, eval_Delta, eval_E2, eval_E4,
                     eval_E6, eval_J, eval_J_cbrt, eval_Jm1_sqrt, eval_delta_power,
                     e2_series_part)

PI = math.pi
SQRT3 = math.sqrt(3.0)
TWO_PI_I = 2j * PI
MIN_IMAG = 0.35
J_EXCLUSION = 1e-2
FD_STEP = 1e-3


@dataclass(frozen=True)
class NormalizedPeriods:
    Omega1: complex
    Omega2: complex
    H1: complex
    H2: complex
    tau: TauPoint


def _check_regime(t):
    if t.imag < MIN_IMAG:
        raise OutOfRegime(f"Im(tau) = {t.imag} is below {MIN_IMAG}")


def eval_normalized(tau, params=DEFAULT_PARAMS):
    """``Omega = (tau, 1) Delta^(1/12)``, ``H = (tau E2 - 6i/pi, E2) / Delta^(1/12)``."""
    t = as_tau(tau)
    _check_regime(t)
    r12 = eval_delta_power(t, Fraction(1, 12), 0, params).value
    e2 = eval_E2(t, params).value
    return NormalizedPeriods(t * r12, r12, (t * e2 - 6j / PI) / r12, e2 / r12, TauPoint(t))


@dataclass(frozen=True)
class _Jet:
    """Value and first two D-derivatives of a function of tau."""
    f: complex
    d1: complex
    d2: complex


def _jets(t, params):
    """Jets of Omega1, Omega2, H1, H2 built from termwise series derivatives."""
    r = [eval_delta_power(t, Fraction(1, 12), m, params).value for m in range(3)]
    ri = [eval_delta_power(t, Fraction(-1, 12), m, params).value for m in range(3)]
    e2 = eval_E2(t, params).value
    de2 = eval_D("E2", t, params, method="termwise").value
    d2e2 = eval_D2_termwise("E2", t, params).value
    dtau = 1.0 / TWO_PI_I  # D tau
    om2 = _Jet(r[0], r[1], r[2])
    om1 = _Jet(t * r[0], t * r[1] + dtau * r[0], t * r[2] + 2 * dtau * r[1])
    h2 = _Jet(e2 * ri[0], de2 * ri[0] + e2 * ri[1],
              d2e2 * ri[0] + 2 * de2 * ri[1] + e2 * ri[2])
    c = 6j / PI
    h1 = _Jet(t * h2.f - c * ri[0], t * h2.d1 + dtau * h2.f - c * ri[1],
              t * h2.d2 + 2 * dtau * h2.d1 - c * ri[2])
    return {("Omega", 1): om1, ("Omega", 2): om2, ("H", 1): h1, ("H", 2): h2}


def _j_data(t, params):
    """J, its roots and the first two D-derivatives of J; checks the exclusion zone."""
    j = eval_J(t, params).value
    if abs(j) < J_EXCLUSION or abs(j - 1) < J_EXCLUSION:
        raise SingularPoint(f"J(tau) = {j!r} is within {J_EXCLUSION} of 0 or 1")
    cb = eval_J_cbrt(t, params).value
    sq = eval_Jm1_sqrt(t, params).value
    dj = eval_D("J", t, params).value
    # D^2 J from DJ = -E4^2 E6 / (1728 Delta), each factor differentiated termwise
    e4, e6 = eval_E4(t, params).value, eval_E6(t, params).value
    dl = eval_Delta(t, "product", params).value
    de4 = eval_D("E4", t, params, method="termwise").value
    de6 = eval_D("E6", t, params, method="termwise").value
    ddl = eval_D("Delta", t, params, method="termwise").value
    num = 2 * e4 * de4 * e6 + e4 * e4 * de6
    d2j = -(num / dl - e4 * e4 * e6 * ddl / dl**2) / 1728.0
    return j, cb, sq, dj, d2j


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _check_k(k):
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")


def first_order_residual(tau, k, params=DEFAULT_PARAMS):
    """Relative residuals of the two first-order equations linking Omega_k and H_k.

    Returns ``(omega_residual, h_residual)``.
    """
    _check_k(k)
    t = as_tau(tau)
    _check_regime(t)
    _, cb, sq, dj, _ = _j_data(t, params)
    jets = _jets(t, params)
    om, h = jets[("Omega", k)], jets[("H", k)]
    lhs_om = om.d1 / dj
    rhs_om = -h.f / (24.0 * SQRT3 * cb * cb * sq)
    lhs_h = h.d1 / dj
    rhs_h = om.f / (2.0 * SQRT3 * cb * sq)
    return _rel(lhs_om, rhs_om), _rel(lhs_h, rhs_h)


ODE_FRICTION = {"H": (5, 2), "Omega": (7, 4)}


def ode_coefficients(family, j):
    """Coefficients ``(P, Q)`` of ``w'' + P w' + Q w = 0`` in the J-variable."""
    a, b = ODE_FRICTION[family]
    den = j * (j - 1)
    return (a * j - b) / (6 * den), 1.0 / (144 * den)


def hypergeom_residual(tau, k, family, params=DEFAULT_PARAMS):
    """Residual of the second-order equation in J, relative to its largest term."""
    _check_k(k)
    if family not in ODE_FRICTION:
        raise ValueError(f"family must be 'H' or 'Omega', got {family!r}")
    t = as_tau(tau)
    _check_regime(t)
    j, _, _, dj, d2j = _j_data(t, params)
    w = _jets(t, params)[(family, k)]
    w1 = w.d1 / dj
    w2 = (w.d2 * dj - w.d1 * d2j) / dj**3
    p, q = ode_coefficients(family, j)
    terms = (w2, p * w1, q * w.f)
    return abs(sum(terms)) / max(abs(x) for x in terms)


def wronskian_J(tau, params=DEFAULT_PARAMS):
    """``H1 dH2/dJ - H2 dH1/dJ``."""
    t = as_tau(tau)
    _, _, _, dj, _ = _j_data(t, params)
    jets = _jets(t, params)
    h1, h2 = jets[("H", 1)], jets[("H", 2)]
    return (h1.f * h2.d1 - h2.f * h1.d1) / dj


# ---------------------------------------------------------------------------
# triangle parameters


@dataclass(frozen=True)
class HypergeomCoeffs:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def logarithmic(self):
        """True when some exponent difference is an integer (log solutions possible)."""
        diffs = (1 - self.gamma, self.gamma - self.alpha - self.beta, self.alpha - self.beta)
        return any(d.denominator == 1 for d in diffs)


@dataclass(frozen=True)
class TriangleAngles:
    """Angles in units of pi at z = 0, 1, infinity."""
    lam: float
    mu: float
    nu: float


def triangle_params(coeffs):
    c = coeffs
    return TriangleAngles(1 - c.gamma, c.gamma - c.alpha - c.beta, c.alpha - c.beta)


def schwarzian_coefficients(angles):
    lam, mu, nu = angles.lam, angles.mu, angles.nu
    return ((1 - lam**2) / 2, (1 - mu**2) / 2, (1 - lam**2 - mu**2 + nu**2) / 2)


def schwarzian_closed(angles, z):
    """Schwarzian of a triangle map with the given angles at ``z``."""
    z = complex(z)
    if z == 0 or z == 1:
        raise SingularPoint(f"z = {z!r} is a singular point")
    a, b, c = (complex(x) for x in schwarzian_coefficients(angles))
    return a / z**2 + b / (1 - z) ** 2 + c / (z * (1 - z))


# ---------------------------------------------------------------------------
# finite-difference Schwarzians


def _stencil(f, t, h):
    fm2, fm1, f0, fp1, fp2 = (f(t + m * h) for m in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h**3)
    return d1, d2, d3


def fd_derivatives(f, t, h=FD_STEP):
    """First three derivatives by 5-point stencils at spacings ``h`` and ``2h``,
    combined by Richardson extrapolation.

    The third-derivative stencil is second order, the others fourth order.
    ``h`` is the finest spacing, which sets the roundoff floor.
    """
    fine = _stencil(f, t, h)
    coarse = _stencil(f, t, 2 * h)
    d1 = (16 * fine[0] - coarse[0]) / 15
    d2 = (16 * fine[1] - coarse[1]) / 15
    d3 = (4 * fine[2] - coarse[2]) / 3
    return d1, d2, d3


def schwarzian_from_derivatives(d1, d2, d3):
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarzian_fd(f, t, h=FD_STEP):
    return schwarzian_from_derivatives(*fd_derivatives(f, complex(t), h))


def _p_offset(params):
    # p(tau) - tau + 6i/pi = (6i/pi) e / (1 + e), e = E2 - 1, keeps roundoff small
    def g(t):
        e = e2_series_part(t, params).value
        return (6j / PI) * e / (1 + e)
    return g


def schwarzian_p_fd(tau, step=FD_STEP, params=DEFAULT_PARAMS):
    """Finite-difference ``{p, tau}``; differentiates the small part of p."""
    t = as_tau(tau)
    g1, g2, g3 = fd_derivatives(_p_offset(params), t, step)
    return schwarzian_from_derivatives(1 + g1, g2, g3)


def schwarzian_p_closed(tau, params=DEFAULT_PARAMS):
    """``-1152 pi^2 Delta / E4^2``."""
    t = as_tau(tau)
    e4 = eval_E4(t, params).value
    if abs(e4) < 1e-8:
        raise SingularPoint(f"E4 vanishes near {t!r}")
    return -1152.0 * PI**2 * eval_Delta(t, "product", params).value / e4**2


def schwarzian_p_residual(tau, step=FD_STEP, params=DEFAULT_PARAMS):
    t = as_tau(tau)
    if t.imag < 0.5:
        raise OutOfRegime(f"Im(tau) = {t.imag} is below 0.5")
    target = schwarzian_p_closed(t, params)
    return abs(schwarzian_p_fd(t, step, params) - target)


P_ANGLES = TriangleAngles(2 / 3, 1 / 2, 0.0)
TAU_ANGLES = TriangleAngles(1 / 3, 1 / 2, 0.0)


def schwarzian_J_fd(tau, step=FD_STEP, params=DEFAULT_PARAMS):
    """``{J, tau}`` from finite differences of the closed-form ``DJ``.

    With ``g = J'``, ``J''/J' = g'/g`` and ``J'''/J' = g''/g``; differencing
    ``g`` instead of J saves one power of the step in roundoff.
    """
    t = as_tau(tau)
    d0 = eval_D("J", t, params).value
    d1, d2, _ = fd_derivatives(lambda z: eval_D("J", z, params).value / d0, t, step)
    return d2 - 1.5 * d1 * d1


def schwarzian_chain_residual(tau, step=FD_STEP, params=DEFAULT_PARAMS):
    """``|{p,tau} - {p,J} J'^2 - {J,tau}|`` with J' = dJ/dtau.

    Both Schwarzians in tau are finite differences; ``{p,J}`` is the closed form.
    """
    t = as_tau(tau)
    j0 = eval_J(t, params).value
    if abs(j0) < J_EXCLUSION or abs(j0 - 1) < J_EXCLUSION:
        raise SingularPoint(f"J(tau) = {j0!r} is within {J_EXCLUSION} of 0 or 1")
    jprime = TWO_PI_I * eval_D("J", t, params).value
    rhs = schwarzian_closed(P_ANGLES, j0) * jprime**2 + schwarzian_J_fd(t, step, params)
    return abs(schwarzian_p_fd(t, step, params) - rhs)


def schwarzian_weight4_residual(tau, params=DEFAULT_PARAMS):
    """``|F(-1/tau) tau^-4 - F(tau)|`` for ``F = {p, tau}`` in closed form."""
    t = as_tau(tau)
    return abs(schwarzian_p_closed(-1 / t, params) * t**-4 - schwarzian_p_closed(t, params))
