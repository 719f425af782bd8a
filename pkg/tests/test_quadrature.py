import math

import numpy as np
import pytest

from torick import (
    AffineMap2,
    LabelledPolytope2,
    NonPositiveWeight,
    ToleranceNotReached,
    WeightSpec,
    hirzebruch_delzant,
    integrate_boundary,
    integrate_interior,
)

ONE_W = WeightSpec(AffineMap2(1, 0, 0), 0.0)


def const_one(pts):
    return np.ones(len(pts))


def test_interior_area_examples(unit_square, trapezoid_half):
    r = integrate_interior(unit_square, const_one, ONE_W, 1e-10)
    assert abs(r.value - 1.0) < 1e-13
    assert r.est_error <= 1e-10 * max(abs(r.value), 1e-12)
    r = integrate_interior(trapezoid_half, const_one, ONE_W, 1e-10)
    assert abs(r.value - 3 / 8) < 1e-13


def test_interior_log_weight(unit_square):
    w = WeightSpec(AffineMap2(1, 1, 0), 1.0)
    r = integrate_interior(unit_square, const_one, w, 1e-12)
    assert abs(r.value - math.log(2)) < 1e-12


def test_boundary_examples(unit_square):
    r = integrate_boundary(unit_square, const_one, ONE_W, 1e-12)
    assert abs(r.value - 4.0) < 1e-12
    r = integrate_boundary(unit_square, lambda p: p[:, 1], ONE_W, 1e-12)
    assert abs(r.value - 2.0) < 1e-12


def test_boundary_trapezoid_mass():
    # per-facet masses |edge|/|grad L|: p, (1-p), p, 1 -- total 2 + p
    for p in (0.3, 0.5, 0.8):
        P = hirzebruch_delzant(p, 1)
        brute = sum(P.edge_sigma_mass(i) for i in range(4))
        assert abs(brute - (2 + p)) < 1e-13
        r = integrate_boundary(P, const_one, ONE_W, 1e-12)
        assert abs(r.value - brute) < 1e-12


def test_exactness_monomials(unit_square):
    # tensor rule of order 10 on the fan is exact through total degree 19
    for (a, b) in [(0, 0), (3, 2), (7, 5), (10, 9), (19, 0), (0, 19), (9, 10)]:
        r = integrate_interior(
            unit_square, lambda p, a=a, b=b: p[:, 0] ** a * p[:, 1] ** b, ONE_W, 1e-6
        )
        exact = 1.0 / ((a + 1) * (b + 1))
        assert abs(r.value - exact) <= 1e-13 * exact

    from torick import from_halfplanes

    tri = from_halfplanes([AffineMap2(0, 1, 0), AffineMap2(0, 0, 1), AffineMap2(1, -1, -1)])
    for (a, b) in [(0, 0), (2, 3), (6, 6), (12, 7), (19, 0)]:
        r = integrate_interior(
            tri, lambda p, a=a, b=b: p[:, 0] ** a * p[:, 1] ** b, ONE_W, 1e-6
        )
        exact = math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
        assert abs(r.value - exact) <= 1e-13 * exact


def test_boundary_edge_exactness(unit_square):
    # degree-19 polynomial along the edges
    r = integrate_boundary(unit_square, lambda p: p[:, 0] ** 19, ONE_W, 1e-6)
    # bottom+top: 2/20; left: 0; right: 1
    assert abs(r.value - (2 / 20 + 1.0)) < 1e-13


def test_label_scaling_covariance(unit_square):
    lam = 2.5
    scaled = LabelledPolytope2(
        unit_square.vertices, tuple(lab.scaled(lam) for lab in unit_square.labels)
    )
    r = integrate_boundary(scaled, const_one, ONE_W, 1e-12)
    assert abs(r.value - 4.0 / lam) < 1e-12


def test_tolerance_scaling(unit_square):
    w = WeightSpec(AffineMap2(1, 0.9, 0.7), 5.0)
    loose = integrate_interior(unit_square, const_one, w, 1e-4)
    tight = integrate_interior(unit_square, const_one, w, 1e-10)
    assert tight.est_error <= loose.est_error
    assert loose.est_error <= 1e-4 * max(abs(loose.value), 1e-12)
    assert tight.est_error <= 1e-10 * max(abs(tight.value), 1e-12)
    assert abs(loose.value - tight.value) <= 2e-4 * abs(tight.value)
    assert tight.evaluations >= loose.evaluations


def test_nonpositive_weight_detected(unit_square):
    with pytest.raises(NonPositiveWeight):
        integrate_interior(unit_square, const_one, WeightSpec(AffineMap2(-2, 1, 0), 1.0), 1e-8)
    with pytest.raises(NonPositiveWeight):
        integrate_boundary(unit_square, const_one, WeightSpec(AffineMap2(0, 1, 0), 2.0), 1e-8)


def test_tolerance_not_reached(unit_square):
    w = WeightSpec(AffineMap2(1, 1, 0), 1.0)
    with pytest.raises(ToleranceNotReached):
        integrate_interior(unit_square, const_one, w, 1e-30)


def test_invalid_tolerance(unit_square):
    with pytest.raises(ValueError):
        integrate_interior(unit_square, const_one, ONE_W, -1.0)


def test_weighted_agrees_with_brute_force(trapezoid_half):
    from conftest import brute_interior

    f = AffineMap2(0.3, 0.2, 0.1)
    w = WeightSpec(f, 5.0)
    r = integrate_interior(trapezoid_half, const_one, w, 1e-11)
    oracle = brute_interior(trapezoid_half, lambda p: f(p) ** -5.0, levels=4)
    assert abs(r.value - oracle) < 1e-9 * abs(oracle)
