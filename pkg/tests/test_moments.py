import numpy as np
import pytest

from conftest import brute_boundary, brute_interior
from torick import AffineMap2, FamilyId, extremal_affine, family_f, hirzebruch_delzant
from torick.moments import PolygonMoments, edge_poly_int, zeta_exact


def test_edge_poly_int_against_quadrature():
    xg, wg = np.polynomial.legendre.leggauss(120)
    t = 0.5 * (xg + 1)
    w = 0.5 * wg
    for (q, alpha, beta, n) in [
        ((1.0, 0.0, 0.0), 0.7, 0.4, 2),
        ((0.2, -1.3, 0.0), 0.5, -0.3, 3),
        ((1.0, 2.0, 3.0), 0.9, 1.7, 4),
        ((0.0, 1.0, 0.0), -0.8, 0.3, 3),  # f negative on the edge endpoint side
    ]:
        oracle = float(np.sum(w * np.polyval(list(reversed(q)), t) * (alpha + beta * t) ** -n))
        assert abs(edge_poly_int(q, alpha, beta, n) - oracle) < 1e-12 * abs(oracle)


def test_edge_poly_int_series_branch():
    # tiny slope relative to the constant term: series and exact branches agree
    xg, wg = np.polynomial.legendre.leggauss(80)
    t = 0.5 * (xg + 1)
    w = 0.5 * wg
    for beta in (1e-5, 1e-7, 0.0):
        oracle = float(np.sum(w * (2.0 + beta * t) ** -4.0))
        val = edge_poly_int((1.0, 0.0, 0.0), 2.0, beta, 4)
        assert abs(val - oracle) < 1e-13 * abs(oracle)


def test_interior_moments_match_brute_force():
    P = hirzebruch_delzant(0.2, 1)
    f = family_f(FamilyId.FUTAKI_ONO, 0.2, 1, "+")
    mom = PolygonMoments(P.vertex_array, f)
    for (a, b) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
        oracle = brute_interior(
            P, lambda p, a=a, b=b: p[:, 0] ** a * p[:, 1] ** b * f(p) ** -5.0, levels=4
        )
        assert abs(mom.interior(5, a, b) - oracle) < 1e-10 * abs(oracle)


def test_boundary_vector_matches_brute_force():
    P = hirzebruch_delzant(0.35, 2)
    f = AffineMap2(0.4, 0.25, 0.1)
    mom = PolygonMoments(P.vertex_array, f)
    bv = mom.boundary_vector([lab.gradient_norm for lab in P.labels])
    for j, g in enumerate(
        [lambda p: np.ones(len(p)), lambda p: p[:, 0], lambda p: p[:, 1]]
    ):
        oracle = 2.0 * brute_boundary(P, lambda p, g=g: g(p) * f(p) ** -3.0)
        assert abs(bv[j] - oracle) < 1e-11 * abs(oracle)


def test_zeta_exact_square(unit_square):
    zeta, _ = zeta_exact(unit_square, AffineMap2(1, 0, 0))
    assert abs(zeta.c0 - 8.0) < 1e-10
    assert abs(zeta.c1) < 1e-10 and abs(zeta.c2) < 1e-10


def test_zeta_exact_cross_checks_quadrature_route():
    # two fully independent routes to the same extremal affine function
    for (p, k, sign) in [(0.2, 1, "+"), (0.3, 1, "-"), (0.4, 2, "+")]:
        P = hirzebruch_delzant(p, k)
        f = family_f(FamilyId.FUTAKI_ONO, p, k, sign)
        z1, _ = zeta_exact(P, f)
        z2 = extremal_affine(P, f, 4.0, 1e-11).zeta
        scale = abs(z2.c0)
        for a, b in zip(z1.coefficients(), z2.coefficients()):
            assert abs(a - b) < 1e-8 * scale


def test_moments_log_regime_rejected(unit_square):
    mom = PolygonMoments(unit_square.vertex_array, AffineMap2(1, 0.1, 0))
    with pytest.raises(ValueError):
        mom.interior(4, 2, 0)
    with pytest.raises(ValueError):
        mom.interior(2, 0, 0)
