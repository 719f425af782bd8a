"""Shared fixtures: canonical polygons and brute-force integration oracles.

The oracles here deliberately use a different scheme from the library's
adaptive engine (plain tensor Gauss-Legendre on uniformly subdivided
triangles) so cross-checks are independent.
"""

import numpy as np
import pytest

from torick import AffineMap2, LabelledPolytope2, hirzebruch_delzant


@pytest.fixture
def unit_square():
    verts = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
    labels = (
        AffineMap2(0.0, 0.0, 1.0),   # x2
        AffineMap2(1.0, -1.0, 0.0),  # 1 - x1
        AffineMap2(1.0, 0.0, -1.0),  # 1 - x2
        AffineMap2(0.0, 1.0, 0.0),   # x1
    )
    return LabelledPolytope2(verts, labels)


@pytest.fixture
def trapezoid_half():
    return hirzebruch_delzant(0.5, 1)


_GL = np.polynomial.legendre.leggauss(40)


def brute_interior(P, fn, levels=3):
    """Fixed-order tensor Gauss over a uniformly refined centroid fan."""
    v = P.vertex_array if hasattr(P, "vertex_array") else np.asarray(P, float)
    c = v.mean(axis=0)
    tris = [(c, v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
    for _ in range(levels):
        nxt = []
        for (a, b, d) in tris:
            ab, ad, bd = (a + b) / 2, (a + d) / 2, (b + d) / 2
            nxt += [(a, ab, ad), (ab, b, bd), (ad, bd, d), (ab, bd, ad)]
        tris = nxt
    xg, wg = _GL
    u = 0.5 * (xg + 1)
    w = 0.5 * wg
    U, V = np.meshgrid(u, u, indexing="ij")
    W = np.outer(w, w) * (1 - U)
    total = 0.0
    for (a, b, d) in tris:
        X = a[0] + U * (b[0] - a[0]) + (V * (1 - U)) * (d[0] - a[0])
        Y = a[1] + U * (b[1] - a[1]) + (V * (1 - U)) * (d[1] - a[1])
        area2 = abs((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]))
        total += float(np.sum(W * fn(np.stack([X, Y], axis=-1)))) * area2
    return total


def brute_boundary(P, fn, order=160):
    """Fixed-order Gauss along every facet against the labelled measure."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (xg + 1)
    w = 0.5 * wg
    total = 0.0
    for i in range(P.num_vertices):
        a, b = P.edge(i)
        mass = P.edge_sigma_mass(i)
        X = a[None, :] + t[:, None] * (b - a)[None, :]
        total += float(np.sum(w * fn(X))) * mass
    return total
