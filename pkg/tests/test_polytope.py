import json
import math

import numpy as np
import pytest

from torick import (
    AffineMap2,
    EmptyInterior,
    InvalidPolytope,
    LabelledPolytope2,
    NotAQuadrilateral,
    ParameterOutOfRange,
    QuadType,
    RedundantLabel,
    UnboundedRegion,
    classify_quadrilateral,
    from_halfplanes,
    hirzebruch_delzant,
    is_integral_delzant,
    min_over_vertices,
    translate_polytope,
)
from torick.polytope import apply_affine, clip_to_halfplane


def test_from_halfplanes_unit_square():
    P = from_halfplanes(
        [AffineMap2(0, 1, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, 0), AffineMap2(1, 0, -1)]
    )
    assert P.vertices == ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
    # labels stored unchanged, matched per edge
    for i in range(4):
        a, b = P.edge(i)
        assert abs(P.labels[i](a)) < 1e-14 and abs(P.labels[i](b)) < 1e-14


def test_from_halfplanes_hirzebruch_vertices():
    p, k = 0.5, 1
    P = from_halfplanes(
        [
            AffineMap2(0, 1, 0),
            AffineMap2(0, 0, 1),
            AffineMap2(p, -1, 0),
            AffineMap2(k, -k, -1),
        ]
    )
    expected = [(0, 0), (0.5, 0), (0.5, 0.5), (0, 1)]
    assert np.allclose(P.vertex_array, expected)


def test_from_halfplanes_unbounded():
    with pytest.raises(UnboundedRegion):
        from_halfplanes([AffineMap2(0, 1, 0), AffineMap2(0, 0, 1), AffineMap2(-1, -1, 0)])


def test_from_halfplanes_empty_interior():
    with pytest.raises(EmptyInterior):
        from_halfplanes(
            [
                AffineMap2(0, 1, 0),
                AffineMap2(-1, -1, 0),  # x1 <= -1, contradicts x1 >= 0
                AffineMap2(0, 0, 1),
                AffineMap2(1, 0, -1),
            ]
        )


def test_from_halfplanes_redundant_label():
    with pytest.raises(RedundantLabel):
        from_halfplanes(
            [
                AffineMap2(0, 1, 0),
                AffineMap2(0, 0, 1),
                AffineMap2(1, -1, 0),
                AffineMap2(1, 0, -1),
                AffineMap2(3, -1, 0),  # 3 - x1 > 0 on the whole square
            ]
        )


def test_from_halfplanes_keeps_label_scale():
    P = from_halfplanes(
        [AffineMap2(0, 2, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, 0), AffineMap2(1, 0, -1)]
    )
    scales = sorted(lab.gradient_norm for lab in P.labels)
    assert scales == [1.0, 1.0, 1.0, 2.0]


def test_hirzebruch_vertices_and_labels():
    P = hirzebruch_delzant(0.5, 1)
    assert np.allclose(P.vertex_array, [(0, 0), (0.5, 0), (0.5, 0.5), (0, 1)])
    P2 = hirzebruch_delzant(0.5, 2)
    assert np.allclose(P2.vertex_array, [(0, 0), (0.5, 0), (0.5, 1.0), (0, 2)])
    # the four labels are x1, x2, p-x1, k(1-x1)-x2 in some edge order
    coeffs = {lab.coefficients() for lab in P.labels}
    assert coeffs == {(0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.5, -1.0, 0.0), (1.0, -1.0, -1.0)}


@pytest.mark.parametrize("p,k", [(1.0, 1), (0.0, 1), (-0.2, 1), (0.5, 0), (0.5, -3)])
def test_hirzebruch_parameter_range(p, k):
    with pytest.raises(ParameterOutOfRange):
        hirzebruch_delzant(p, k)


def test_min_over_vertices_examples(unit_square):
    val, idx = min_over_vertices(unit_square, AffineMap2(1, 1, 1))
    assert val == 1.0 and idx == 0
    # x1-only family member on the p=3/4 trapezoid: minimum at the x1=p edge
    P = hirzebruch_delzant(0.75, 1)
    f = AffineMap2(1 / 3, -2 / 9, 0.0)
    val, idx = min_over_vertices(P, f)
    assert abs(val - 1 / 6) < 1e-15
    assert idx == 1  # tie with vertex 2 broken to the lower index
    val, idx = min_over_vertices(unit_square, AffineMap2(0, 0, 0))
    assert val == 0.0 and idx == 0


def test_classify_quadrilateral(unit_square):
    assert classify_quadrilateral(unit_square) is QuadType.PARALLELOGRAM
    for p, k in [(0.3, 1), (0.5, 2), (0.8, 3)]:
        assert (
            classify_quadrilateral(hirzebruch_delzant(p, k))
            is QuadType.TRAPEZOID_NOT_PARALLELOGRAM
        )
    generic = LabelledPolytope2(
        ((0.0, 0.0), (2.0, 0.0), (3.0, 2.0), (0.0, 1.0)),
        (
            AffineMap2(0, 0, 1),
            AffineMap2(4, -2, 1),
            AffineMap2(3, 1, -3),
            AffineMap2(0, 1, 0),
        ),
    )
    assert classify_quadrilateral(generic) is QuadType.GENERIC_QUADRILATERAL


def test_classify_requires_four_vertices():
    tri = from_halfplanes([AffineMap2(0, 1, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, -1)])
    with pytest.raises(NotAQuadrilateral):
        classify_quadrilateral(tri)


def test_label_edge_vanishing_invariant():
    for p, k in [(0.1, 1), (0.5, 2), (0.9, 4)]:
        P = hirzebruch_delzant(p, k)
        for i, lab in enumerate(P.labels):
            a, b = P.edge(i)
            bound = 1e-12 * lab.gradient_norm * P.diameter
            assert abs(lab(a)) < bound and abs(lab(b)) < bound


def test_halfplane_roundtrip_recovers_labels():
    P = hirzebruch_delzant(0.37, 2)
    Q = from_halfplanes(P.labels)
    assert np.allclose(P.vertex_array, Q.vertex_array, atol=1e-12)
    for la, lb in zip(P.labels, Q.labels):
        assert la.coefficients() == lb.coefficients()
    # re-derive half-planes from the vertex geometry: parallel up to + scale
    for i, lab in enumerate(P.labels):
        a, b = P.edge(i)
        d = b - a
        normal = np.array([-d[1], d[0]])  # inward for CCW
        g = lab.gradient
        cross = normal[0] * g[1] - normal[1] * g[0]
        assert abs(cross) < 1e-12
        assert float(normal @ g) > 0.0


def test_validation_rejects_collinear():
    with pytest.raises(InvalidPolytope) as err:
        LabelledPolytope2(
            ((0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.0, 1.0)),
            (AffineMap2(0, 0, 1),) * 4,
        )
    assert "convex" in str(err.value)


def test_validation_first_violation_named(unit_square):
    d = unit_square.to_dict()
    d["labels"][0], d["labels"][3] = d["labels"][3], d["labels"][0]
    with pytest.raises(InvalidPolytope) as err:
        LabelledPolytope2.from_dict(d)
    assert err.value.invariant == "label vanishes on its edge endpoints"

    d2 = unit_square.to_dict()
    d2["labels"] = d2["labels"][:3]
    with pytest.raises(InvalidPolytope) as err2:
        LabelledPolytope2.from_dict(d2)
    assert err2.value.invariant == "label count equals vertex count"


def test_json_roundtrip(unit_square, tmp_path):
    text = json.dumps(unit_square.to_dict())
    Q = LabelledPolytope2.from_json(text)
    assert Q == unit_square
    with pytest.raises(InvalidPolytope):
        LabelledPolytope2.from_json("{not json")


def test_affine_image_invariance():
    P = hirzebruch_delzant(0.4, 2)
    f = AffineMap2(0.3, -0.2, 0.05)
    A = np.array([[2.0, 1.0], [0.5, 3.0]])
    t = np.array([1.0, -2.0])
    Q = apply_affine(P, A, t)
    assert classify_quadrilateral(P) is classify_quadrilateral(Q)
    Ainv = np.linalg.inv(A)
    g = Ainv.T @ f.gradient
    f_img = AffineMap2(f.c0 - float(g @ t), float(g[0]), float(g[1]))
    v0, _ = min_over_vertices(P, f)
    v1, _ = min_over_vertices(Q, f_img)
    assert abs(v0 - v1) < 1e-12
    # orientation-reversing map: vertex order re-threaded, still valid
    R = apply_affine(P, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert classify_quadrilateral(R) is classify_quadrilateral(P)


def test_translate_polytope():
    P = hirzebruch_delzant(0.5, 1)
    Q = translate_polytope(P, (2.0, -1.0))
    assert np.allclose(Q.vertex_array, P.vertex_array + [2.0, -1.0])
    for lab, labq in zip(P.labels, Q.labels):
        for v, vq in zip(P.vertices, Q.vertices):
            assert abs(lab(v) - labq(vq)) < 1e-14


def test_is_integral_delzant():
    for p, k in [(0.31, 1), (0.5, 3)]:
        assert is_integral_delzant(hirzebruch_delzant(p, k))
    P = from_halfplanes(
        [AffineMap2(0, 2, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, 0), AffineMap2(1, 0, -1)]
    )
    assert not is_integral_delzant(P)  # gradient (2, 0) is not primitive
    Q = from_halfplanes(
        [AffineMap2(0, 1.5, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, 0), AffineMap2(1, 0, -1)]
    )
    assert not is_integral_delzant(Q)


def test_clip_to_halfplane(unit_square):
    ell = AffineMap2(-0.5, 1.0, 0.0)  # keep x1 >= 1/2
    verts, pieces = clip_to_halfplane(unit_square, ell)
    assert len(verts) == 4
    area = 0.0
    v = np.asarray(verts)
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        area += 0.5 * (a[0] * b[1] - b[0] * a[1])
    assert abs(area - 0.5) < 1e-14
    # retained boundary: bottom half, right edge, top half; the chord is not a piece
    lengths = sorted(float(np.hypot(*(b - a))) for a, b, _ in pieces)
    assert np.allclose(lengths, [0.5, 0.5, 1.0])
    labels = {idx for _, _, idx in pieces}
    assert labels == {0, 1, 2}

    # crease missing the polygon entirely
    verts, pieces = clip_to_halfplane(unit_square, AffineMap2(-5.0, 1.0, 0.0))
    assert verts == [] and pieces == []
    # crease containing the polygon
    verts, pieces = clip_to_halfplane(unit_square, AffineMap2(5.0, 1.0, 0.0))
    assert len(verts) == 4 and len(pieces) == 4


def test_centroid_diameter(unit_square):
    assert np.allclose(unit_square.centroid, [0.5, 0.5])
    assert abs(unit_square.diameter - math.sqrt(2)) < 1e-15
    assert abs(unit_square.area() - 1.0) < 1e-15
