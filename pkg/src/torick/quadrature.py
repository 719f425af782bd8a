"""Adaptive integration of weighted integrands g / f^k over labelled polygons.

Interior integrals fan-triangulate from the centroid and use a tensor
Gauss-Jacobi x Gauss-Legendre rule of order 10 on each triangle (exact for
total degree <= 19 with constant weight), with quadrisection driven by the
difference against the order-6 rule.  Boundary integrals run per-edge
Gauss-Legendre with bisection.  All reductions happen in a fixed order so
results are bitwise reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .affine import AffineMap2
from .errors import NonPositiveWeight, ToleranceNotReached
from .polytope import LabelledPolytope2, min_over_vertices

MAX_DEPTH = 24
MAX_ASSESSMENTS = 20000  # work cap per integral; exceeding it is a failure
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    """Weight f^{-k} with f affine and positive on the polygon of use."""

    f: AffineMap2
    k: float


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int


def _triangle_rule(order):
    # Gauss-Jacobi (weight 1-u on [0,1]) x Gauss-Legendre (v on [0,1]):
    # integrates total degree <= 2*order - 1 exactly on the unit simplex.
    xj, wj = roots_jacobi(order, 1.0, 0.0)
    u = 0.5 * (xj + 1.0)
    wu = 0.25 * wj
    xl, wl = np.polynomial.legendre.leggauss(order)
    v = 0.5 * (xl + 1.0)
    wv = 0.5 * wl
    U, V = np.meshgrid(u, v, indexing="ij")
    xi = U.ravel()
    eta = (V * (1.0 - U)).ravel()
    w = np.outer(wu, wv).ravel()
    return xi, eta, 2.0 * w  # weights normalized for a unit-Jacobian triangle


_RULES = {10: _triangle_rule(10), 6: _triangle_rule(6)}

_EDGE_RULES = {
    10: tuple(np.polynomial.legendre.leggauss(10)),
    6: tuple(np.polynomial.legendre.leggauss(6)),
}


def _tri_points(A, B, C, rule):
    xi, eta, w = rule
    pts = A[None, :] + np.outer(xi, B - A) + np.outer(eta, C - A)
    area2 = abs((B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]))
    return pts, w * (0.5 * area2)


def _fan_triangles(vertices):
    v = np.asarray(vertices, dtype=float)
    c = v.mean(axis=0)
    return [(c, v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


def integrate_interior_vec(vertices, integrand, tol, max_depth=MAX_DEPTH):
    """Adaptive integral of a vector-valued integrand over a convex polygon.

    ``integrand`` maps an (N, 2) point array to an (N, q) array.  The error
    control is per-component: est_error_c <= tol * max(|value_c|, ABS_FLOOR).
    Returns (values, est_errors, evaluations).
    """
    tris = _fan_triangles(vertices)
    if not tris:
        raise ValueError("empty polygon")

    evals = 0

    def assess(A, B, C):
        nonlocal evals
        p10, w10 = _tri_points(A, B, C, _RULES[10])
        p6, w6 = _tri_points(A, B, C, _RULES[6])
        g10 = np.atleast_2d(np.asarray(integrand(p10), dtype=float))
        g6 = np.atleast_2d(np.asarray(integrand(p6), dtype=float))
        if g10.shape[0] == 1 and p10.shape[0] != 1:
            g10 = g10.T
            g6 = g6.T
        v10 = w10 @ g10
        v6 = w6 @ g6
        evals += p10.shape[0] + p6.shape[0]
        return v10, np.abs(v10 - v6)

    heap = []
    counter = 0
    total = None
    total_err = None
    for (A, B, C) in tris:
        val, err = assess(A, B, C)
        if total is None:
            total = val.copy()
            total_err = err.copy()
        else:
            total += val
            total_err += err
        heapq.heappush(heap, (-float(err.max()), counter, (A, B, C, 0, val, err)))
        counter += 1

    def converged():
        target = tol * np.maximum(np.abs(total), ABS_FLOOR)
        return bool(np.all(total_err <= target))

    while not converged():
        if not heap:
            break
        _, _, (A, B, C, depth, val, err) = heapq.heappop(heap)
        if depth >= max_depth or counter > MAX_ASSESSMENTS:
            raise ToleranceNotReached(
                f"interior refinement exhausted (depth {depth}, {counter} panels)"
            )
        total -= val
        total_err -= err
        AB, AC, BC = (A + B) / 2, (A + C) / 2, (B + C) / 2
        for (a, b, c) in ((A, AB, AC), (AB, B, BC), (AC, BC, C), (AB, BC, AC)):
            v, e = assess(a, b, c)
            total += v
            total_err += e
            heapq.heappush(heap, (-float(e.max()), counter, (a, b, c, depth + 1, v, e)))
            counter += 1
    # deterministic final reduction: re-sum leaves in insertion order
    leaves = sorted(heap, key=lambda item: item[1])
    if leaves:
        total = np.sum([item[2][4] for item in leaves], axis=0)
        total_err = np.sum([item[2][5] for item in leaves], axis=0)
    return total, total_err, evals


def integrate_boundary_vec(edges, integrand, tol, max_depth=MAX_DEPTH):
    """Adaptive integral of a vector integrand over weighted edges.

    ``edges`` is a list of (a, b, mass) with mass the dsigma weight of the
    full segment, i.e. |b-a| / |grad L|; the measure on the segment is
    mass * dt for t in [0, 1].
    """
    evals = 0

    def assess(a, b, mass):
        nonlocal evals
        out = []
        for order in (10, 6):
            x, w = _EDGE_RULES[order]
            t = 0.5 * (x + 1.0)
            pts = a[None, :] + np.outer(t, b - a)
            g = np.atleast_2d(np.asarray(integrand(pts), dtype=float))
            if g.shape[0] == 1 and pts.shape[0] != 1:
                g = g.T
            out.append((0.5 * w * mass) @ g)
            evals += len(t)
        v10, v6 = out
        return v10, np.abs(v10 - v6)

    heap = []
    counter = 0
    total = None
    total_err = None
    for (a, b, mass) in edges:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if mass == 0.0 or np.hypot(*(b - a)) == 0.0:
            continue
        val, err = assess(a, b, mass)
        if total is None:
            total, total_err = val.copy(), err.copy()
        else:
            total += val
            total_err += err
        heapq.heappush(heap, (-float(err.max()), counter, (a, b, mass, 0, val, err)))
        counter += 1
    if total is None:
        return np.zeros(1), np.zeros(1), 0

    def converged():
        target = tol * np.maximum(np.abs(total), ABS_FLOOR)
        return bool(np.all(total_err <= target))

    while not converged():
        if not heap:
            break
        _, _, (a, b, mass, depth, val, err) = heapq.heappop(heap)
        if depth >= max_depth or counter > MAX_ASSESSMENTS:
            raise ToleranceNotReached(
                f"boundary refinement exhausted (depth {depth}, {counter} panels)"
            )
        total -= val
        total_err -= err
        mid = (a + b) / 2
        for (u, v) in ((a, mid), (mid, b)):
            vv, ee = assess(u, v, mass / 2)
            total += vv
            total_err += ee
            heapq.heappush(heap, (-float(ee.max()), counter, (u, v, mass / 2, depth + 1, vv, ee)))
            counter += 1
    leaves = sorted(heap, key=lambda item: item[1])
    if leaves:
        total = np.sum([item[2][4] for item in leaves], axis=0)
        total_err = np.sum([item[2][5] for item in leaves], axis=0)
    return total, total_err, evals


def _check_weight(P: LabelledPolytope2, w: WeightSpec):
    val, idx = min_over_vertices(P, w.f)
    if w.k != 0.0 and val <= 0.0:
        raise NonPositiveWeight(
            f"weight f is {val:.3e} at vertex {idx}; must be positive on the polygon"
        )


def integrate_interior(P: LabelledPolytope2, g, w: WeightSpec, tol: float) -> QuadratureResult:
    """Approximate the interior integral of g(x) * f(x)^(-k) over P."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_weight(P, w)
    f, k = w.f, float(w.k)

    def integrand(pts):
        vals = np.asarray(g(pts), dtype=float)
        if k == 0.0:
            return vals
        return vals * f(pts) ** (-k)

    val, err, n = integrate_interior_vec(P.vertex_array, integrand, tol)
    return QuadratureResult(float(val[0]), float(err[0]), n)


def integrate_boundary(P: LabelledPolytope2, g, w: WeightSpec, tol: float) -> QuadratureResult:
    """Approximate the labelled boundary integral of g * f^(-k) over all facets."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_weight(P, w)
    f, k = w.f, float(w.k)

    def integrand(pts):
        vals = np.asarray(g(pts), dtype=float)
        if k == 0.0:
            return vals
        return vals * f(pts) ** (-k)

    edges = [
        (np.asarray(P.edge(i)[0]), np.asarray(P.edge(i)[1]), P.edge_sigma_mass(i))
        for i in range(P.num_vertices)
    ]
    val, err, n = integrate_boundary_vec(edges, integrand, tol)
    return QuadratureResult(float(val[0]), float(err[0]), n)
