"""Guillemin potential, its Hessian, and weighted scalar curvature by stencils.

Only the canonical potential u = (1/2) * sum_r L_r log L_r is instantiated;
its Hessian has the closed form G(x) = sum_r (e_r e_r^T) / (2 L_r(x)) with
e_r the label gradients, which is differentiated numerically (central
differences with one Richardson extrapolation level) to evaluate Abreu-type
curvature expressions.
"""

from __future__ import annotations

import numpy as np

from .affine import AffineMap2
from .errors import NonPositiveWeight, NotInterior, SingularHessian, StepTooLarge
from .polytope import LabelledPolytope2, min_over_vertices

DET_FLOOR = 1e-300


def guillemin_potential(P: LabelledPolytope2, x) -> float:
    """Value of (1/2) * sum_r L_r(x) log L_r(x) at an interior point."""
    tot = 0.0
    for lab in P.labels:
        v = float(lab(x))
        if v <= 0.0:
            raise NotInterior(f"label value {v:.3e} at {tuple(np.asarray(x))}")
        tot += 0.5 * v * np.log(v)
    return tot


def guillemin_hessian(P: LabelledPolytope2, x) -> np.ndarray:
    """Hessian sum_r (e_r e_r^T) / (2 L_r(x)); positive definite inside."""
    x = np.asarray(x, dtype=float)
    G = np.zeros((2, 2))
    for lab in P.labels:
        v = float(lab(x))
        if v <= 0.0:
            raise NotInterior(f"label value {v:.3e} at {tuple(x)}")
        g = lab.gradient
        G += np.outer(g, g) / (2.0 * v)
    return G


def inverse_hessian(P: LabelledPolytope2, x) -> np.ndarray:
    """Closed-form 2x2 inverse of the Guillemin Hessian."""
    G = guillemin_hessian(P, x)
    det = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
    if abs(det) < DET_FLOOR:
        raise SingularHessian(f"determinant {det:.3e}")
    return np.array([[G[1, 1], -G[0, 1]], [-G[1, 0], G[0, 0]]]) / det


def _weighted_inverse(P, f, w, x):
    return inverse_hessian(P, x) * float(f(x)) ** (1.0 - w)


def _contracted_second_derivative(P, f, w, x, h):
    # sum_ij d_i d_j W_ij for W = H f^{1-w}, by one central-difference pass
    def W(pt):
        return _weighted_inverse(P, f, w, pt)

    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    w11 = (W(x + e1)[0, 0] - 2.0 * W(x)[0, 0] + W(x - e1)[0, 0]) / h**2
    w22 = (W(x + e2)[1, 1] - 2.0 * W(x)[1, 1] + W(x - e2)[1, 1]) / h**2
    w12 = (
        W(x + e1 + e2)[0, 1]
        - W(x + e1 - e2)[0, 1]
        - W(x - e1 + e2)[0, 1]
        + W(x - e1 - e2)[0, 1]
    ) / (4.0 * h**2)
    return w11 + 2.0 * w12 + w22


def weighted_scalar_curvature(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float,
    x,
    h: float | None = None,
) -> float:
    """-f^{w+1} * sum_ij (f^{1-w} H_ij)_{,ij} at an interior point.

    Central finite differences with step h plus one Richardson level; the
    point must keep a margin of at least 4h to every facet line.
    """
    x = np.asarray(x, dtype=float)
    val, idx = min_over_vertices(P, f)
    if val <= 0.0:
        raise NonPositiveWeight(f"f is {val:.3e} at vertex {idx}")
    if h is None:
        h = 1e-4 * P.diameter
    dist = P.facet_distance(x)
    if dist <= 0.0:
        raise NotInterior(f"point {tuple(x)} not strictly inside")
    if dist < 4.0 * h:
        raise StepTooLarge(f"facet distance {dist:.3e} < 4h = {4 * h:.3e}")
    d_h = _contracted_second_derivative(P, f, w, x, h)
    d_h2 = _contracted_second_derivative(P, f, w, x, h / 2.0)
    contracted = (4.0 * d_h2 - d_h) / 3.0
    return -float(f(x)) ** (w + 1.0) * contracted
