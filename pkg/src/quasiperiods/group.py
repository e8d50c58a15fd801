"""The modular group, the reflection group of T0, and their tessellation.

Maps are stored as integer matrices.  An :class:`ExtendedMap` with
``conjugate_first`` set acts by ``z -> (a*conj(z) + b) / (c*conj(z) + d)``
and has determinant -1, so every element preserves the upper half-plane.
Matrices are kept in a canonical sign (``c > 0`` or ``c == 0 and d > 0``)
so that ``M`` and ``-M`` compare equal.
"""

import math
from dataclasses import dataclass

from .core import INF, RHO, as_tau, is_inf
from .errors import IterationLimit

MAX_DEPTH = 12


@dataclass(frozen=True)
class ExtendedMap:
    a: int
    b: int
    c: int
    d: int
    conjugate_first: bool = False

    def __post_init__(self):
        a, b, c, d = (int(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        want = -1 if self.conjugate_first else 1
        if det != want:
            raise ValueError(f"determinant must be {want}, got {det}")
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, val)

    @property
    def key(self):
        return (self.a, self.b, self.c, self.d, self.conjugate_first)

    def __call__(self, z):
        return apply(self, z)

    def inverse(self):
        det = -1 if self.conjugate_first else 1
        return _make(det * self.d, -det * self.b, -det * self.c, det * self.a,
                     self.conjugate_first)

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))


class UnimodularMap(ExtendedMap):
    """Element of PSL2(Z)."""

    def __init__(self, a, b, c, d):
        super().__init__(a, b, c, d, False)

    def __repr__(self):
        return f"UnimodularMap(a={self.a}, b={self.b}, c={self.c}, d={self.d})"


def _make(a, b, c, d, conj):
    if conj:
        return ExtendedMap(a, b, c, d, True)
    return UnimodularMap(a, b, c, d)


IDENTITY = UnimodularMap(1, 0, 0, 1)
T = UnimodularMap(1, 1, 0, 1)
S = UnimodularMap(0, -1, 1, 0)
# reflections in the three sides of T0
R_A = ExtendedMap(-1, 0, 0, 1, True)   # z -> -conj(z)
R_B = ExtendedMap(0, 1, 1, 0, True)    # z -> 1/conj(z)
R_C = ExtendedMap(-1, 1, 0, 1, True)   # z -> 1 - conj(z)
REFLECTIONS = (R_A, R_B, R_C)


def apply(g, z):
    """Act by ``g`` on a point of the extended plane."""
    if is_inf(z):
        return INF if g.c == 0 else complex(g.a / g.c)
    z = complex(z)
    if g.conjugate_first:
        z = z.conjugate()
    den = g.c * z + g.d
    if den == 0:
        return INF
    return (g.a * z + g.b) / den


def compose(g, h):
    """Return ``g o h``.  All entries are real, so conjugation flags just add mod 2."""
    a = g.a * h.a + g.b * h.c
    b = g.a * h.b + g.b * h.d
    c = g.c * h.a + g.d * h.c
    d = g.c * h.b + g.d * h.d
    return _make(a, b, c, d, g.conjugate_first != h.conjugate_first)


def word(*gens):
    out = IDENTITY
    for g in gens:
        out = compose(out, g)
    return out


@dataclass(frozen=True)
class ReductionResult:
    tau_reduced: complex
    map: UnimodularMap   # map(tau_reduced) == input tau


def reduce_to_fundamental(tau, max_steps=10**6):
    """Gauss reduction into ``|Re| <= 1/2, |tau| >= 1``.

    Boundary points are not tie-broken: whichever representative the loop
    lands on is returned.
    """
    t = as_tau(tau)
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = math.floor(t.real + 0.5)
        if n:
            t -= n
            b, d = a * n + b, c * n + d
        if abs(t) ** 2 < 1.0 - 1e-14:
            t = -1.0 / t
            a, b, c, d = b, -a, d, -c
        else:
            return ReductionResult(t, UnimodularMap(a, b, c, d))
    raise IterationLimit(f"reduction of {tau!r} did not terminate in {max_steps} steps")


def is_rho_equivalent(tau, tol=1e-9):
    t = reduce_to_fundamental(tau).tau_reduced
    return abs(t - RHO) <= tol or abs(t - (RHO - 1)) <= tol


def tessellate(depth):
    """Distinct group elements given by reflection words of length <= depth.

    Element ``g`` corresponds to the triangle ``g(T0)``; the list is in
    breadth-first order, starting with the identity.
    """
    if depth < 0 or depth > MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}]")
    out = [IDENTITY]
    seen = {IDENTITY.key}
    frontier = [IDENTITY]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for r in REFLECTIONS:
                h = compose(g, r)
                if h.key not in seen:
                    seen.add(h.key)
                    nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return out
