import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from quasiperiods import geom
from quasiperiods.core import INF, RHO, chordal, is_inf
from quasiperiods.errors import AmbiguousWinding, CapTooLow, CoincidentPoints, NotALune, WrongAngles
from quasiperiods.group import R_A, S, T, apply, tessellate
from quasiperiods.pmap import eval_p, eval_p_prime

from strategies import words

finite = st.complex_numbers(max_magnitude=5.0)


def p(z):
    return eval_p(z).value


def distinct(pts, sep=0.05):
    return all(abs(a - b) > sep for i, a in enumerate(pts) for b in pts[i + 1:])


@given(finite, finite, finite, finite, finite, finite)
def test_mobius_from_points(z1, z2, z3, w1, w2, w3):
    assume(distinct([z1, z2, z3]) and distinct([w1, w2, w3]))
    m = geom.mobius_from_points((z1, z2, z3), (w1, w2, w3))
    for z, w in zip((z1, z2, z3), (w1, w2, w3)):
        assert chordal(geom.apply_matrix(m, z), w) < 1e-8


def test_mobius_with_infinity():
    m = geom.mobius_from_points((0, 1, INF), (1j, 2.0, INF))
    assert abs(geom.apply_matrix(m, 0.5) - (1j + 0.5 * (2 - 1j))) < 1e-12
    with pytest.raises(CoincidentPoints):
        geom.mobius_from_points((0, 0, 1), (0, 1, 2))


def test_same_map():
    m = np.array([[1, 2], [0, 1]], dtype=complex)
    assert geom.same_map(m, -3 * m)
    assert not geom.same_map(m, np.eye(2))


def test_circle_through():
    c = geom.circle_through(1, 1j, -1)
    assert abs(c.center) < 1e-15 and abs(c.radius - 1) < 1e-15
    line = geom.circle_through(0, 1j, INF)
    assert line.is_line and line.distance(2j) < 1e-15 and abs(line.distance(1.0) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        geom.GeneralizedCircle(0, 0, 1)


@given(finite, finite, finite, words(3, True))
def test_circle_images(z1, z2, z3, g):
    assume(distinct([z1, z2, z3], 0.2))
    circ = geom.circle_through(z1, z2, z3)
    img = geom.moebius_image(g, circ)
    for z in (z1, z2, z3, 0.5 * (z1 + z2)):
        # pushed points stay on the image circle (the midpoint only if it is on the circle)
        if circ.distance(z) > 1e-9:
            continue
        w = apply(g, z)
        if not is_inf(w) and abs(w) < 1e6:
            assert img.distance(w) < 1e-7 * max(1, abs(w)) ** 2


def test_model_angles():
    t0 = geom.angles(geom.T0)
    t1 = geom.angles(geom.T1)
    assert np.allclose(t0, (0, math.pi / 2, math.pi / 3), atol=1e-12)
    assert np.allclose(t1, (0, math.pi / 2, 2 * math.pi / 3), atol=1e-12)
    v0 = geom.angles(geom.V0)
    assert np.allclose(v0, (0, 0, 0), atol=1e-12)


def test_complementary():
    comp = geom.complementary_triangle(geom.T0)
    assert geom.same_triangle(comp, geom.MODELS["conjT1"])
    assert geom.same_triangle(geom.complementary_triangle(comp), geom.T0)
    no_cusp = geom.ArcTriangle((1j, RHO, 2j + 0.3), (1.2j, 0.4 + 1.2j, 0.2 + 1.5j))
    with pytest.raises(NotALune):
        geom.complementary_triangle(no_cusp)


def test_classify_models():
    for name, tri in geom.MODELS.items():
        got, m = geom.classify_triangle(tri)
        assert got == name
        assert geom.same_map(m, np.eye(2), 1e-9)
    with pytest.raises(WrongAngles):
        geom.classify_triangle(geom.V0)


@given(words(5, True))
def test_classification_is_invariant(g):
    tri = geom.transform_triangle(g, geom.T0)
    name, m = geom.classify_triangle(tri)
    assert name == ("conjT0" if g.conjugate_first else "T0")
    model = geom.MODELS[name]
    # the matrix carries the vertices of tri (in zero/right/third order) onto the model
    for z in tri.vertices:
        img = geom.apply_matrix(m, z)
        assert min(chordal(img, w) for w in model.vertices) < 1e-8


def test_transform_keeps_side_points_finite():
    s = np.array([[0, -1], [1, 0]], dtype=complex)
    tri = geom.transform_triangle(s, geom.T1)
    assert all(not is_inf(z) for z in tri.midpoints)


# winding numbers


def circle_pts(n, center=0, r=1.0, turns=1):
    return [center + r * cmath.exp(2j * math.pi * turns * k / n) for k in range(n)]


def test_winding_examples():
    assert geom.winding_number(circle_pts(100), 0.1) == 1
    assert geom.winding_number(circle_pts(100), 3.0) == 0
    assert geom.winding_number(circle_pts(200, turns=2), 0.0) == 2
    assert geom.winding_number(circle_pts(100)[::-1], 0.0) == -1


def test_winding_refuses_points_near_the_curve():
    with pytest.raises(AmbiguousWinding):
        geom.winding_number(circle_pts(20), 1.01)
    with pytest.raises(AmbiguousWinding):
        geom.winding_number([0, 1, INF], 0.5j)


@given(st.integers(8, 60), st.complex_numbers(max_magnitude=3.0))
def test_winding_stable_under_refinement(n, w):
    try:
        a = geom.winding_number(circle_pts(n), w)
    except AmbiguousWinding:
        assume(False)
    assert geom.winding_number(circle_pts(2 * n), w) == a


def test_sphere_winding():
    pts = circle_pts(100)
    assert geom.sphere_winding(pts, 0.0, 5.0) == 1
    assert geom.sphere_winding(pts, INF, 0.0) == -1


# boundary verification and counting


def in_strip_region(z, lower):
    """Membership in T0 (lower=False) or T1 (lower=True) from their defining inequalities."""
    if not 0 < z.real < 0.5:
        return False
    if lower:
        return not (abs(z) >= 1 and z.imag < 0)
    return abs(z) > 1


MEMBERSHIP = {
    "T0": lambda z: in_strip_region(z, False),
    "conjT0": lambda z: in_strip_region(z.conjugate(), False),
    "T1": lambda z: in_strip_region(z, True),
    "conjT1": lambda z: in_strip_region(z.conjugate(), True),
    "V0": lambda z: 0 < z.real < 1 and z.imag > 0 and abs(z - 0.5) > 0.5,
}


@pytest.mark.parametrize("name", sorted(MEMBERSHIP))
def test_interior_points(name):
    tri = geom.V0 if name == "V0" else geom.MODELS[name]
    inside, outside = geom.interior_exterior(tri)
    assert MEMBERSHIP[name](inside)
    assert not MEMBERSHIP[name](outside)


def test_boundary_map_of_p():
    rep = geom.verify_boundary_map(p, geom.T0, geom.T1, 200, 12.0, fprime=eval_p_prime)
    assert rep.passed
    assert max(rep.side_distance) < 1e-10
    assert all(rep.monotone) and rep.orientation_ok and rep.derivative_ok


def test_boundary_map_rejects_wrong_target():
    rep = geom.verify_boundary_map(p, geom.T0, geom.MODELS["conjT1"], 60, 12.0)
    assert not rep.passed


@given(words(2))
def test_boundary_map_of_group_elements(g):
    target = geom.transform_triangle(g, geom.T0)
    assume(target.cusp_index() is not None)
    rep = geom.verify_boundary_map(lambda z: apply(g, z), geom.T0, target, 60, 12.0)
    assert rep.passed


@pytest.mark.parametrize("w,count", [(0.25 - 0.25j, 1), (0.25 + 1j, 1), (0.4 - 0.5j, 1),
                                     (-1 + 1j, 0), (2.0, 0)])
def test_argument_principle(w, count):
    assert geom.argument_principle_count(p, geom.T0, w) == count


def test_argument_principle_needs_a_high_cap():
    with pytest.raises(CapTooLow):
        geom.argument_principle_count(p, geom.T0, 0.3 + 20j, 100, 3.0)


def test_count_stable_under_refinement():
    for w in (0.2 - 0.3j, -0.5 + 0.5j):
        a = geom.argument_principle_count(p, geom.T0, w, 100)
        assert geom.argument_principle_count(p, geom.T0, w, 200) == a


def test_circle_examples():
    real = geom.circle_through(0, 1, INF)
    assert real.is_line and real.distance(5.0) < 1e-15 and abs(real.distance(2j) - 2) < 1e-15
    imag = geom.circle_through(1j, 2j, INF)
    assert imag.is_line and imag.distance(-7j) < 1e-14
    unit = geom.circle_through(1, 1j, -1)
    assert abs(unit.A - 1) < 1e-15 and abs(unit.B) < 1e-15 and abs(unit.C + 1) < 1e-15


def test_circle_image_examples():
    unit = geom.circle_through(1, 1j, -1)
    assert geom.moebius_image(S, unit).close_to(unit)
    axis = geom.circle_through(0, 1j, INF)
    shifted = geom.moebius_image(T, axis)
    assert shifted.is_line and shifted.distance(1 + 5j) < 1e-15
    half = geom.circle_through(0.5, 0.5 + 1j, INF)
    mirrored = geom.moebius_image(R_A, half)
    assert mirrored.is_line and mirrored.distance(-0.5 + 3j) < 1e-15


def test_vertex_angles():
    assert abs(geom.angle_at_vertex(geom.T0, 1)) < 1e-12
    assert abs(geom.angle_at_vertex(geom.T0, 2) - math.pi / 2) < 1e-12
    assert abs(geom.angle_at_vertex(geom.T0, 3) - math.pi / 3) < 1e-12
    assert abs(geom.angle_at_vertex(geom.T1, 3) - 2 * math.pi / 3) < 1e-12


def test_right_angle_between_axis_and_unit_circle():
    # the triangle (inf, i, 1) has sides Re = 0, |z| = 1 and Re = 1, traversed counterclockwise
    tri = geom.ArcTriangle((INF, 1j, 1 + 0j), (2j, cmath.exp(1j * math.pi / 4), 1 + 2j), "left")
    assert abs(geom.angle_at_vertex(tri, 2) - math.pi / 2) < 1e-12


@pytest.mark.parametrize("name", ["T0", "conjT0", "T1", "conjT1"])
def test_vertices_on_incident_circles(name):
    tri = geom.MODELS[name]
    for k in range(3):
        v = tri.vertices[k]
        assert tri.sides[k].distance(v) < 1e-10
        assert tri.sides[(k - 1) % 3].distance(v) < 1e-10


def test_complementary_angle_law():
    got = geom.angles(geom.complementary_triangle(geom.T0))
    want = (0, math.pi / 2, 2 * math.pi / 3)
    assert max(abs(a - b) for a, b in zip(got, want)) < 1e-9


def test_complementary_commutes_with_translation():
    lhs = geom.complementary_triangle(geom.transform_triangle(T, geom.T0))
    rhs = geom.transform_triangle(T, geom.complementary_triangle(geom.T0))
    assert geom.same_triangle(lhs, rhs)


def test_classify_examples():
    name, _ = geom.classify_triangle(geom.transform_triangle(R_A, geom.T0))
    assert name == "conjT0"
    name, m = geom.classify_triangle(geom.transform_triangle(S, geom.T0))
    assert name == "T0"
    # m undoes z -> -1/z, which is its own inverse
    for z in (0.3 + 1.7j, 2j, -0.4 + 0.2j):
        assert chordal(geom.apply_matrix(m, z), apply(S, z)) < 1e-12


@given(words(4))
def test_classification_of_unimodular_images(g):
    assert geom.classify_triangle(geom.transform_triangle(g, geom.T0))[0] == "T0"


def test_winding_256_samples():
    assert geom.winding_number(circle_pts(256), 0.0) == 1


def test_identity_boundary_map():
    rep = geom.verify_boundary_map(lambda z: z, geom.T0, geom.T0, 200, 12.0)
    assert rep.passed and max(rep.side_distance) < 1e-14


def test_vertex_images():
    assert chordal(p(1j), -1j) < 1e-12
    assert chordal(p(RHO), RHO.conjugate()) < 1e-12


EVEN_WORDS = [g for g in tessellate(2) if not g.conjugate_first]


@pytest.mark.parametrize("g", EVEN_WORDS, ids=lambda g: str(g.matrix()))
def test_boundary_map_transported(g):
    src = geom.transform_triangle(g, geom.T0)
    dst = geom.transform_triangle(g, geom.T1)
    rep = geom.verify_boundary_map(p, src, dst, 200, 12.0)
    assert rep.passed, rep


def test_distance_to_huge_circle():
    # a circle through a point near the pole of S maps to a circle of radius ~1e9
    img = geom.moebius_image(S, geom.circle_through(1, 1e-9, 1j))
    assert img.radius > 1e8
    for z in (1, 1j):
        assert img.distance(apply(S, z)) < 1e-14
