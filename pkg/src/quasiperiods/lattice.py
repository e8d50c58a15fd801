"""Rank-2 lattices, the Weierstrass zeta series and the quasi-periods.

The direct summation is a low-precision oracle.  Summation runs over the
symmetric window ``|k|, |n| <= M`` in index space.  Each compensated term is
``u^2 / (gamma^2 (u - gamma))``; its leading part ``-u^2/gamma^3`` is odd
and cancels over the symmetric window, so the truncation error is
``O(|u|^3 / M^2)`` and Richardson extrapolation uses that rate.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLattice, PoleError
from .qforms import DEFAULT_PARAMS, eval_E2

PI = math.pi
POLE_PROXIMITY = 1e-9


@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega2: complex

    @property
    def tau(self):
        return self.omega1 / self.omega2

    def point(self, k, n):
        return k * self.omega1 + n * self.omega2

    def scaled(self, t):
        return Lattice(t * self.omega1, t * self.omega2)


def lattice_new(omega1, omega2):
    """Build a lattice, flipping the sign of omega2 so that Im(omega1/omega2) > 0."""
    w1, w2 = complex(omega1), complex(omega2)
    if w1 == 0 or w2 == 0:
        raise DegenerateLattice("lattice generators must be nonzero")
    ratio = w1 / w2
    if abs(ratio.imag) <= 1e-14 * abs(ratio):
        raise DegenerateLattice(f"omega1/omega2 = {ratio!r} is real")
    if ratio.imag < 0:
        w2 = -w2
    return Lattice(w1, w2)


@dataclass(frozen=True)
class ZetaParams:
    radius: int = 400
    extrapolate: bool = False

    def __post_init__(self):
        if self.radius < 10:
            raise ValueError("radius must be >= 10")


@dataclass(frozen=True)
class QuasiPeriods:
    eta1: complex
    eta2: complex
    source: str  # "direct" or "modular"

    def __post_init__(self):
        if self.eta1 == 0 and self.eta2 == 0:
            raise ValueError("quasi-periods cannot both vanish")

    @property
    def ratio(self):
        return self.eta1 / self.eta2 if self.eta2 != 0 else complex(math.inf, 0.0)


def _zeta_window(u, lat, radius):
    r = np.arange(-radius, radius + 1, dtype=float)
    k, n = np.meshgrid(r, r, indexing="ij")
    gam = k * lat.omega1 + n * lat.omega2
    dist = np.abs(u - gam)
    if dist.min() < POLE_PROXIMITY * abs(lat.omega2):
        idx = np.unravel_index(np.argmin(dist), dist.shape)
        raise PoleError(f"u = {u!r} is at the lattice point ({int(k[idx])}, {int(n[idx])})")
    gam[radius, radius] = 1.0
    terms = 1.0 / (u - gam) + 1.0 / gam + u / gam**2
    terms[radius, radius] = 0.0
    # pair (k, n) with (-k, -n) before summing: zeta(-u) = -zeta(u) holds bit for bit
    paired = terms + terms[::-1, ::-1]
    half = np.concatenate([paired[radius + 1:].ravel(), paired[radius, radius + 1:]])
    return 1.0 / u + complex(np.sum(half))


def zeta_direct(u, lat, params=ZetaParams()):
    """Weierstrass zeta by symmetric truncation of its defining series."""
    u = complex(u)
    if abs(u) < POLE_PROXIMITY * abs(lat.omega2):
        raise PoleError("u is at the lattice point (0, 0)")
    z = _zeta_window(u, lat, params.radius)
    if not params.extrapolate:
        return z
    z2 = _zeta_window(u, lat, 2 * params.radius)
    return (4.0 * z2 - z) / 3.0


def quasi_periods_direct(lat, params=ZetaParams()):
    """``eta_k = 2 zeta(omega_k / 2)`` from the direct series."""
    eta1 = 2.0 * zeta_direct(lat.omega1 / 2, lat, params)
    eta2 = 2.0 * zeta_direct(lat.omega2 / 2, lat, params)
    return QuasiPeriods(eta1, eta2, "direct")


def quasi_periods_modular(lat, params=DEFAULT_PARAMS):
    """Quasi-periods from E2: ``eta2 = pi^2 E2(tau) / (3 omega2)``."""
    w1, w2 = lat.omega1, lat.omega2
    e2 = eval_E2(w1 / w2, params).value
    eta2 = PI**2 * e2 / (3.0 * w2)
    eta1 = -2j * PI / w2 + PI**2 * w1 * e2 / (3.0 * w2**2)
    return QuasiPeriods(eta1, eta2, "modular")


def legendre_residual(qp, lat):
    """``|omega1 eta2 - omega2 eta1 - 2 pi i|``."""
    return abs(lat.omega1 * qp.eta2 - lat.omega2 * qp.eta1 - 2j * PI)


def quasi_periodicity_residual(u, k, n, lat, qp, params=ZetaParams()):
    """``|zeta(u + k w1 + n w2) - zeta(u) - k eta1 - n eta2|`` with the direct series."""
    if k == 0 and n == 0:
        return 0.0
    shifted = zeta_direct(u + lat.point(k, n), lat, params)
    return abs(shifted - zeta_direct(u, lat, params) - k * qp.eta1 - n * qp.eta2)
