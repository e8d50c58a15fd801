"""Generalized circles, circular-arc triangles and a sampled boundary verifier.

A triangle is stored as three vertices, one extra point on each side (which
picks the arc of the carrying circle) and the side of the oriented boundary
on which the interior lies.  Side ``k`` runs from vertex ``k`` to vertex
``k + 1``.  Vertices may be infinite; side points must be finite.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import INF, RHO, chordal, is_inf
from .errors import (AmbiguousWinding, CapTooLow, CoincidentPoints, NotALune, WrongAngles)
from .group import ExtendedMap

TWO_PI = 2.0 * math.pi
ZERO_ANGLE = 1e-9
POINT_TOL = 1e-12


# ---------------------------------------------------------------------------
# Moebius maps as 2x2 complex matrices


def as_matrix(g):
    """Return ``(M, conjugate_first)`` for an ExtendedMap or a 2x2 matrix."""
    if isinstance(g, ExtendedMap):
        return np.array([[g.a, g.b], [g.c, g.d]], dtype=complex), g.conjugate_first
    return np.asarray(g, dtype=complex).reshape(2, 2), False


def apply_matrix(m, z, conjugate_first=False):
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if is_inf(z):
        return INF if c == 0 else complex(a / c)
    z = complex(z)
    if conjugate_first:
        z = z.conjugate()
    den = c * z + d
    if den == 0:
        return INF
    return complex((a * z + b) / den)


def _to_standard(z1, z2, z3):
    """Matrix sending (z1, z2, z3) to (0, 1, inf)."""
    if is_inf(z1):
        m = [[0, z2 - z3], [1, -z3]]
    elif is_inf(z2):
        m = [[1, -z1], [1, -z3]]
    elif is_inf(z3):
        m = [[1, -z1], [0, z2 - z1]]
    else:
        m = [[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]]
    return np.array(m, dtype=complex)


def _normalize_det(m):
    det = np.linalg.det(m)
    return m / cmath.sqrt(det)


def mobius_from_points(z, w):
    """Matrix of the Moebius map sending the triple ``z`` to the triple ``w``."""
    for trip in (z, w):
        for i in range(3):
            for j in range(i + 1, 3):
                if chordal(trip[i], trip[j]) < POINT_TOL:
                    raise CoincidentPoints(f"points {trip[i]!r} and {trip[j]!r} coincide")
    kz = _to_standard(*z)
    kw = _to_standard(*w)
    return _normalize_det(np.linalg.solve(kw, kz))


def same_map(m1, m2, tol=1e-9):
    """True when two matrices define the same Moebius map."""
    a = _normalize_det(np.asarray(m1, dtype=complex))
    b = _normalize_det(np.asarray(m2, dtype=complex))
    return min(np.abs(a - b).max(), np.abs(a + b).max()) < tol


# ---------------------------------------------------------------------------
# generalized circles


@dataclass(frozen=True)
class GeneralizedCircle:
    """Locus ``A|z|^2 + 2 Re(conj(B) z) + C = 0``; a line when ``A = 0``."""
    A: float
    B: complex
    C: float

    def __post_init__(self):
        A, B, C = float(self.A), complex(self.B), float(self.C)
        scale = max(abs(A), abs(B), abs(C))
        if scale == 0 or abs(B) ** 2 - A * C <= 1e-14 * scale**2:
            raise ValueError("degenerate circle")
        A, B, C = A / scale, B / scale, C / scale
        # fix the sign of the form: first clearly nonzero of A, Re B, Im B positive
        for x in (A, B.real, B.imag):
            if abs(x) > 1e-12:
                if x < 0:
                    A, B, C = -A, -B, -C
                break
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def is_line(self):
        return abs(self.A) < 1e-12

    @property
    def center(self):
        return INF if self.is_line else -self.B / self.A

    @property
    def radius(self):
        return math.inf if self.is_line else math.sqrt(abs(self.B) ** 2 - self.A * self.C) / abs(self.A)

    def hermitian(self):
        return np.array([[self.A, self.B], [self.B.conjugate(), self.C]], dtype=complex)

    def value(self, z):
        return self.A * abs(z) ** 2 + 2.0 * (self.B.conjugate() * z).real + self.C

    def distance(self, z):
        """Euclidean distance from ``z`` to the circle (0 for inf on a line)."""
        if is_inf(z):
            return 0.0 if self.is_line else math.inf
        # | |z-c| - r | = |value| / (|A| (|z-c| + r)), free of cancellation for huge
        # circles and equal to the line distance when A = 0
        z = complex(z)
        den = abs(self.A * z + self.B) + math.sqrt(abs(self.B) ** 2 - self.A * self.C)
        return abs(self.value(z)) / den

    def close_to(self, other, tol=1e-9):
        a = np.array([self.A, self.B.real, self.B.imag, self.C])
        b = np.array([other.A, other.B.real, other.B.imag, other.C])
        return np.abs(a - b).max() < tol


def circle_through(p1, p2, p3):
    """The generalized circle through three distinct points of the sphere."""
    pts = (p1, p2, p3)
    for i in range(3):
        for j in range(i + 1, 3):
            if chordal(pts[i], pts[j]) < POINT_TOL:
                raise CoincidentPoints(f"points {pts[i]!r} and {pts[j]!r} coincide")
    rows = []
    for z in pts:
        if is_inf(z):
            rows.append([1.0, 0.0, 0.0, 0.0])
        else:
            z = complex(z)
            s = 1.0 + abs(z) ** 2
            rows.append([abs(z) ** 2 / s, 2 * z.real / s, 2 * z.imag / s, 1.0 / s])
    _, _, vt = np.linalg.svd(np.array(rows))
    A, bx, by, C = vt[-1]
    return GeneralizedCircle(A, complex(bx, by), C)


def moebius_image(g, circle):
    """Image of a generalized circle under a Moebius or anti-Moebius map."""
    m, conj = as_matrix(g)
    h = circle.hermitian()
    if conj:
        h = h.conj()
    minv = np.linalg.inv(m)
    h2 = minv.conj().T @ h @ minv
    return GeneralizedCircle(h2[0, 0].real, h2[0, 1], h2[1, 1].real)


# ---------------------------------------------------------------------------
# arc triangles


@dataclass(frozen=True)
class ArcTriangle:
    vertices: tuple
    midpoints: tuple
    orientation: str = "left"
    sides: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.orientation not in ("left", "right"):
            raise ValueError("orientation must be 'left' or 'right'")
        v = tuple(INF if is_inf(z) else complex(z) for z in self.vertices)
        m = tuple(complex(z) for z in self.midpoints)
        if len(v) != 3 or len(m) != 3:
            raise ValueError("need three vertices and three side points")
        if any(is_inf(z) for z in m):
            raise ValueError("side points must be finite")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "midpoints", m)
        sides = tuple(circle_through(v[k], m[k], v[(k + 1) % 3]) for k in range(3))
        object.__setattr__(self, "sides", sides)

    def side_param(self, k):
        """Matrix sending (0, 1, inf) to (start, side point, end) of side ``k``."""
        v, m = self.vertices, self.midpoints
        return mobius_from_points((0.0, 1.0, INF), (v[k], m[k], v[(k + 1) % 3]))

    def cusp_index(self):
        """Index of the vertex on the extended real axis, if any."""
        for k, z in enumerate(self.vertices):
            if is_inf(z) or abs(z.imag) < POINT_TOL:
                return k
        return None

    def interior_point(self):
        return interior_point(self)


def transform_triangle(g, tri):
    m, conj = as_matrix(g)
    verts = tuple(apply_matrix(m, z, conj) for z in tri.vertices)
    mids = []
    for k, z in enumerate(tri.midpoints):
        w = apply_matrix(m, z, conj)
        if is_inf(w):
            # the pole of the map sits on this side point: use another point of the arc
            w = apply_matrix(m, apply_matrix(tri.side_param(k), 2.0), conj)
        mids.append(w)
    mids = tuple(mids)
    orient = tri.orientation
    if conj:
        orient = "right" if orient == "left" else "left"
    return ArcTriangle(verts, mids, orient)


def conjugate_triangle(tri):
    conj = lambda z: z if is_inf(z) else z.conjugate()
    orient = "right" if tri.orientation == "left" else "left"
    return ArcTriangle(tuple(conj(z) for z in tri.vertices),
                       tuple(conj(z) for z in tri.midpoints), orient)


def _on_arc(tri, k, z, tol):
    """Is ``z`` on the open arc of side ``k``?"""
    s = apply_matrix(np.linalg.inv(tri.side_param(k)), z)
    if is_inf(s):
        return False
    return abs(s.imag) <= tol * (1 + abs(s)) and s.real > 0


def same_triangle(t1, t2, tol=1e-9):
    if t1.orientation != t2.orientation:
        return False
    if any(chordal(a, b) > tol for a, b in zip(t1.vertices, t2.vertices)):
        return False
    for k in range(3):
        if not t1.sides[k].close_to(t2.sides[k], tol):
            return False
        if not _on_arc(t2, k, t1.midpoints[k], 1e-7):
            return False
    return True


# T0 has vertices inf, i, rho; T1 is its image under p
T0 = ArcTriangle((INF, 1j, RHO), (2j, cmath.exp(5j * math.pi / 12), 0.5 + 2j), "left")
T1 = ArcTriangle((INF, -1j, RHO.conjugate()), (0j, cmath.exp(-5j * math.pi / 12), 0.5 + 0j), "left")
V0 = ArcTriangle((INF, 0j, 1 + 0j), (1j, 0.5 + 0.5j, 1 + 1j), "left")
MODELS = {
    "T0": T0,
    "conjT0": conjugate_triangle(T0),
    "T1": T1,
    "conjT1": conjugate_triangle(T1),
}


def _tangent_out(v, m, u):
    """Direction leaving ``v`` along the arc ``v -> m -> u``."""
    if is_inf(u):
        return m - v
    return (m - v) * (u - v) / (u - m)


def _aux_point(tri):
    for z0 in (1.2345 - 2.3456j, -3.21 + 0.77j, 0.1 + 7.3j):
        pts = [z for z in tri.vertices + tri.midpoints if not is_inf(z)]
        if all(abs(z - z0) > 1e-3 for z in pts):
            return z0
    raise ValueError("no auxiliary point available")


def angle_at_vertex(tri, index):
    """Interior angle at vertex ``index`` (1, 2 or 3), in ``[0, 2 pi)``."""
    if index not in (1, 2, 3):
        raise ValueError("index must be 1, 2 or 3")
    k = index - 1
    if is_inf(tri.vertices[k]):
        z0 = _aux_point(tri)
        tri = transform_triangle(np.array([[0, -1], [1, -z0]], dtype=complex), tri)
    v = tri.vertices[k]
    a, m_in = tri.vertices[(k - 1) % 3], tri.midpoints[(k - 1) % 3]
    u, m_out = tri.vertices[(k + 1) % 3], tri.midpoints[k]
    t_out = _tangent_out(v, m_out, u)
    t_back = _tangent_out(v, m_in, a)
    ratio = t_back / t_out if tri.orientation == "left" else t_out / t_back
    theta = cmath.phase(ratio) % TWO_PI
    if theta > TWO_PI - ZERO_ANGLE:
        theta = 0.0
    return theta


def angles(tri):
    return tuple(angle_at_vertex(tri, k) for k in (1, 2, 3))


def complementary_triangle(tri):
    """Closure of the lune minus ``tri``, for a triangle with a zero angle."""
    ang = angles(tri)
    zero = [k for k, a in enumerate(ang) if a < ZERO_ANGLE]
    if not zero:
        raise NotALune(f"no zero angle among {ang}")
    z = zero[0]
    mids = list(tri.midpoints)
    for k in ((z - 1) % 3, z):
        w = apply_matrix(tri.side_param(k), -1.0)
        if is_inf(w):
            w = apply_matrix(tri.side_param(k), -2.0)
        mids[k] = w
    orient = "right" if tri.orientation == "left" else "left"
    return ArcTriangle(tri.vertices, tuple(mids), orient)


_PROFILES = {1: ("T0", "conjT0"), 2: ("T1", "conjT1")}


def classify_triangle(tri, tol=1e-6):
    """Return ``(class, M)`` with M sending the vertices of ``tri`` to the model's."""
    ang = angles(tri)
    zero = [k for k in range(3) if ang[k] < tol]
    right = [k for k in range(3) if abs(ang[k] - math.pi / 2) < tol]
    if len(zero) != 1 or len(right) != 1:
        raise WrongAngles(f"angles {ang} match neither model")
    z, r = zero[0], right[0]
    t = 3 - z - r
    third = ang[t] * 3 / math.pi
    if abs(third - 1) < 3 * tol / math.pi:
        family = 1
    elif abs(third - 2) < 3 * tol / math.pi:
        family = 2
    else:
        raise WrongAngles(f"angles {ang} match neither model")
    forward = r == (z + 1) % 3
    left = (tri.orientation == "left") == forward
    name = _PROFILES[family][0 if left else 1]
    model = MODELS[name]
    m = mobius_from_points((tri.vertices[z], tri.vertices[r], tri.vertices[t]), model.vertices)
    return name, m


# ---------------------------------------------------------------------------
# sampled curves and winding numbers


@dataclass(frozen=True)
class SampledCurve:
    """Closed polyline; the last point joins back to the first."""
    points: tuple
    mesh: float = field(init=False)

    def __post_init__(self):
        pts = tuple(INF if is_inf(z) else complex(z) for z in self.points)
        if len(pts) < 3:
            raise ValueError("a closed curve needs at least three points")
        object.__setattr__(self, "points", pts)
        gaps = [chordal(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
        object.__setattr__(self, "mesh", max(gaps))


WINDING_GAP = 0.3
LOCAL_CLEARANCE = 3.0


def winding_number(curve, w):
    """Winding number of a closed polyline about ``w``.

    Each segment must subtend a small angle: ``w`` has to be at least three
    segment lengths away from both its endpoints.
    """
    if not isinstance(curve, SampledCurve):
        curve = SampledCurve(tuple(curve))
    pts = np.array(curve.points, dtype=complex)
    if not np.all(np.isfinite(pts)):
        raise AmbiguousWinding("curve passes through infinity")
    w = complex(w)
    rel = pts - w
    nxt = np.roll(rel, -1)
    seg = np.abs(nxt - rel)
    near = np.minimum(np.abs(rel), np.abs(nxt))
    bad = near < LOCAL_CLEARANCE * seg
    if np.any(bad):
        i = int(np.argmax(bad))
        raise AmbiguousWinding(f"point {w!r} too close to segment {i} of the curve")
    total = np.sum(np.angle(nxt / rel)) / TWO_PI
    n = round(total)
    if 0.5 - abs(total - n) <= WINDING_GAP:
        raise AmbiguousWinding(f"winding sum {total} is not near an integer")
    return int(n)


# ---------------------------------------------------------------------------
# boundary sampling with a cusp truncated at a horocycle


def sphere_winding(points, w, ref=INF):
    """Winding of a closed curve about ``w`` relative to ``ref`` on the sphere.

    Computed in the chart ``z -> 1/(z - ref)``, where ``ref`` is at infinity;
    with ``ref = inf`` this is the ordinary winding number.
    """
    if is_inf(ref):
        return winding_number(points, w)
    psi = lambda z: 0j if is_inf(z) else 1.0 / (complex(z) - ref)
    if is_inf(w):
        return winding_number([psi(z) for z in points], 0j)
    return winding_number([psi(z) for z in points], psi(w))


def _cusp_chart(tri, c):
    """Chart sending the cusp vertex ``c`` to infinity, rotated so that the
    sides approach it going upwards.  Identity for an upper cusp at infinity."""
    cusp = tri.vertices[c]
    if is_inf(cusp):
        phi, phi_inv = (lambda z: z), (lambda w: w)
    else:
        phi, phi_inv = (lambda z: -1.0 / (z - cusp)), (lambda w: cusp - 1.0 / w)
    d = phi(tri.midpoints[c]) - phi(tri.vertices[(c + 1) % 3])
    rot = 1j * d.conjugate() / abs(d)
    if abs(rot - 1) < 1e-15:
        rot = 1.0
    return (lambda z: rot * phi(z)), (lambda w: phi_inv(w / rot))


def _heights(lo, hi, n):
    if lo > 0:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _ray_samples(tri, k, to_cusp, n, cutoff, chart):
    """Side ``k`` with its cusp end cut at chart height ``cutoff``, in travel order."""
    v, m = tri.vertices, tri.midpoints[k]
    finite = v[k] if to_cusp else v[(k + 1) % 3]
    phi, phi_inv = chart
    a = phi(finite)
    d = phi(m) - a
    if d.imag <= 0:
        raise ValueError(f"side {k} does not rise towards its cusp")
    if a.imag >= cutoff:
        raise CapTooLow(f"cutoff {cutoff} is below a vertex")
    hs = _heights(a.imag, cutoff, n)
    pts = [a + (h - a.imag) / d.imag * d for h in hs]
    out = [finite] + [phi_inv(z) for z in pts[1:]]
    return out if to_cusp else out[::-1]


def _arc_samples(tri, k, n):
    g = tri.side_param(k)
    xs = np.linspace(0.0, 1.0, n)
    out = [tri.vertices[k]]
    for x in xs[1:-1]:
        out.append(apply_matrix(g, x / (1.0 - x)))
    out.append(tri.vertices[(k + 1) % 3])
    return out


@dataclass(frozen=True)
class BoundarySamples:
    sides: tuple     # three lists of points, each in travel order, endpoints included
    cap: tuple       # cap points strictly between the truncated side ends
    cusp: object     # index of the truncated vertex, or None

    def closed(self):
        """All points in travel order, each shared vertex once."""
        if self.cusp is None:
            return [z for k in range(3) for z in self.sides[k][:-1]]
        # start with the side leaving the cusp; the side entering it ends at the
        # cut, and the cap leads back to the start
        c = self.cusp
        first, second, last = (self.sides[(c + j) % 3] for j in range(3))
        return list(first[:-1]) + list(second[:-1]) + list(last) + list(self.cap)


def sample_boundary(tri, samples, cutoff):
    """Boundary points per side; a cusp on the extended real line is cut off.

    Sides ending at the cusp are sampled geometrically in the height of the
    cusp chart ``z -> -1/(z - c)`` (the identity when ``c`` is infinity).
    """
    c = tri.cusp_index()
    chart = _cusp_chart(tri, c) if c is not None else None
    sides = []
    for k in range(3):
        if c is not None and (k + 1) % 3 == c:
            sides.append(_ray_samples(tri, k, True, samples, cutoff, chart))
        elif c is not None and k == c:
            sides.append(_ray_samples(tri, k, False, samples, cutoff, chart))
        else:
            sides.append(_arc_samples(tri, k, samples))
    cap = ()
    if c is not None:
        phi, phi_inv = chart
        start = phi(sides[(c - 1) % 3][-1])
        end = phi(sides[c][0])
        ncap = max(8, samples // 4)
        ts = np.linspace(0.0, 1.0, ncap + 2)[1:-1]
        cap = tuple(phi_inv(start + t * (end - start)) for t in ts)
    return BoundarySamples(tuple(tuple(s) for s in sides), cap, c)


def boundary_curve(tri, samples, cutoff):
    return SampledCurve(tuple(sample_boundary(tri, samples, cutoff).closed()))


ORIENT_SAMPLES = 400


def interior_exterior(tri):
    """A point inside and a point outside the triangle, certified by winding.

    Both sit on the normal through a side point, on opposite sides; the
    boundary must wind once about the first relative to the second.
    """
    want = 1 if tri.orientation == "left" else -1
    for k in range(3):
        g = tri.side_param(k)
        m = tri.midpoints[k]
        # tangent at the side point: derivative of the parametrization at s = 1
        a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
        tangent = complex((a * d - b * c) / (c + d) ** 2)
        normal = 1j * tangent / abs(tangent)
        if tri.orientation == "right":
            normal = -normal
        finite = [z for z in tri.vertices if not is_inf(z)]
        scale = min(abs(z - m) for z in finite) if finite else 1.0
        for eps in (0.25, 0.1, 0.03, 0.01):
            inside = m + eps * scale * normal
            outside = m - eps * scale * normal
            cutoff = 10.0 + 10.0 * max(abs(z) for z in finite + [inside, outside])
            cutoff = max(_chart_cutoff(tri, inside, cutoff), _chart_cutoff(tri, outside, cutoff))
            try:
                pts = boundary_curve(tri, ORIENT_SAMPLES, cutoff).points
                if sphere_winding(pts, inside, outside) == want:
                    return inside, outside
            except (AmbiguousWinding, CapTooLow, ValueError):
                continue
    raise ValueError("could not locate an interior point")


def interior_point(tri):
    return interior_exterior(tri)[0]


def _chart_cutoff(tri, z, cutoff):
    c = tri.cusp_index()
    if c is None:
        return cutoff
    phi, _ = _cusp_chart(tri, c)
    return max(cutoff, 10.0 * abs(phi(z)) + 10.0)


# ---------------------------------------------------------------------------
# boundary correspondence and argument principle


@dataclass
class BoundaryReport:
    side_distance: tuple          # max Euclidean distance to the target side circle
    side_distance_scaled: tuple   # same, divided by max(1, |f|)
    on_arc: tuple                 # images fall on the correct arc of the target circle
    monotone: tuple               # target-side parameter strictly increasing
    min_image_separation: float   # chordal, over well-separated source pairs
    injective: bool
    winding_source: int
    winding_image: int
    orientation_ok: bool
    vertex_error: float           # chordal, over finite (untruncated) vertices
    derivative_ok: object = None  # None when not checked
    tol: float = 1e-10

    @property
    def passed(self):
        ok = (max(self.side_distance_scaled) < self.tol and all(self.on_arc)
              and all(self.monotone) and self.injective and self.orientation_ok
              and self.vertex_error < 1e-8)
        if self.derivative_ok is not None:
            ok = ok and self.derivative_ok
        return ok


def _arc_parameter(tri, k, z):
    """Position along side ``k`` mapped to [0, 1] (start 0, end 1); complex if off the arc."""
    s = apply_matrix(np.linalg.inv(tri.side_param(k)), z)
    if is_inf(s):
        return complex(1.0)
    return s / (1.0 + s)


def verify_boundary_map(f, source, target, samples=200, cutoff=12.0, tol=1e-10,
                        fprime=None, separation=1e-3):
    """Check that ``f`` carries the sides of ``source`` onto those of ``target``.

    ``f`` maps a complex point to a complex point (possibly infinite).
    """
    bs = sample_boundary(source, samples, cutoff)
    dist, scaled, on_arc, mono = [], [], [], []
    for k in range(3):
        imgs = [f(z) for z in bs.sides[k]]
        circle = target.sides[k]
        d = [circle.distance(w) for w in imgs]
        dist.append(float(max(d)))
        scaled.append(float(max(x / max(1.0, abs(w)) if not is_inf(w) else x for x, w in zip(d, imgs))))
        params = [_arc_parameter(target, k, w) for w in imgs]
        on_arc.append(all(abs(x.imag) < 1e-6 and -1e-10 <= x.real <= 1 + 1e-10 for x in params))
        re = np.array([x.real for x in params])
        mono.append(bool(np.all(np.diff(re) > -1e-10) and re[-1] > re[0]))
    src = np.array(bs.closed(), dtype=complex)
    img = [f(z) for z in src]
    min_sep = _min_separation(src, img, separation)
    s_in, s_out = interior_exterior(source)
    t_in, t_out = interior_exterior(target)
    # orientation on a curve at least as fine as the one that certified the points
    if samples < ORIENT_SAMPLES:
        src = np.array(sample_boundary(source, ORIENT_SAMPLES, cutoff).closed(), dtype=complex)
        img = [f(z) for z in src]
    ws = sphere_winding(tuple(src), s_in, s_out)
    wi = sphere_winding(tuple(img), t_in, t_out)
    want_s = 1 if source.orientation == "left" else -1
    want_t = 1 if target.orientation == "left" else -1
    orient_ok = ws == want_s and wi == want_t
    verr = 0.0
    for k, (a, b) in enumerate(zip(source.vertices, target.vertices)):
        if k != bs.cusp:
            verr = max(verr, chordal(f(a), b))
    deriv_ok = None
    if fprime is not None and bs.cusp is not None and is_inf(source.vertices[bs.cusp]):
        high = [z for z in src if z.imag >= cutoff / 2]
        deriv_ok = all(fprime(z).real > 0 for z in high)
    return BoundaryReport(tuple(dist), tuple(scaled), tuple(on_arc), tuple(mono), min_sep,
                          min_sep > 1e-9, ws, wi, orient_ok, verr, deriv_ok, tol)


def _sphere(z):
    """Points on the sphere of diameter 2 (inverse stereographic projection)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros((len(z), 3))
    out[:, 2] = 1.0
    fin = np.isfinite(z)
    zf = z[fin]
    r2 = np.abs(zf) ** 2
    out[fin] = np.stack([2 * zf.real, 2 * zf.imag, r2 - 1], axis=1) / (1 + r2)[:, None]
    return out


def _min_separation(src, img, separation):
    a, b = _sphere(src), _sphere(img)
    da = np.linalg.norm(a[:, None, :] - a[None, :, :], axis=2)
    db = np.linalg.norm(b[:, None, :] - b[None, :, :], axis=2)
    mask = da > separation
    return float(db[mask].min()) if np.any(mask) else math.inf


def argument_principle_count(f, source, w, samples=200, cutoff=12.0, reference=INF):
    """Number of solutions of ``f = w`` inside the truncated source triangle.

    Strictly, solutions minus solutions of ``f = reference``; the default
    counts poles of ``f`` negatively.
    """
    bs = sample_boundary(source, samples, cutoff)
    if bs.cusp is not None:
        cap = [f(z) for z in bs.cap] + [f(bs.sides[(bs.cusp - 1) % 3][-1]), f(bs.sides[bs.cusp][0])]
        cusp = source.vertices[bs.cusp]
        if is_inf(cusp):
            low = min(abs(x) for x in cap)
            if not low > 2 * abs(w):
                raise CapTooLow(f"|f| = {low} on the cap does not exceed 2|w| = {2 * abs(w)}")
        else:
            # f is assumed to fix real cusps, as p does (p commutes with the group)
            fc = cusp
            spread = max(chordal(x, fc) for x in cap)
            if not spread < 0.5 * chordal(w, fc):
                raise CapTooLow("cap image does not separate w from the cusp value")
    img = [f(z) for z in bs.closed()]
    return sphere_winding(img, w, reference)
