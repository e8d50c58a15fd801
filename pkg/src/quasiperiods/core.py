"""Points of the upper half-plane and of the Riemann sphere."""

import cmath
import math
from dataclasses import dataclass

INF = complex(math.inf, 0.0)
RHO = complex(0.5, math.sqrt(3.0) / 2.0)


def is_inf(z):
    return cmath.isinf(z)


def chordal(z, w):
    """Chordal distance on the Riemann sphere (diameter 2)."""
    zi, wi = is_inf(z), is_inf(w)
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


@dataclass(frozen=True)
class TauPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)) or v.imag <= 0:
            raise ValueError(f"tau must lie in the upper half-plane, got {v!r}")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


def as_tau(tau):
    """Validate a point of the upper half-plane and return it as a complex."""
    if isinstance(tau, TauPoint):
        return tau.value
    return TauPoint(tau).value
