"""Closed-form rational integrals of monomials against f^-k over polygons.

For an affine f and a convex polygon, the integrals

    I_k[x^a y^b] = integral of x^a y^b f^-k dx            (a + b <= k - 3)
    J_n over an edge of poly(t) f^-n ds                   (deg <= n - 2)

are rational functions of the coefficients of f with poles only at vertex
values f(v_i) = 0.  They are computed here exactly (no quadrature) via a
divergence-theorem ladder, which keeps them defined by analytic continuation
when f changes sign across the polygon.  This backs the condition-(a) solver
at weight exponent w = 4 and doubles as an independent oracle for the
adaptive quadrature.
"""

from __future__ import annotations

import numpy as np

from .affine import AffineMap2
from .errors import DegeneratePolytope
from .polytope import LabelledPolytope2

# Relative |beta/alpha| threshold below which the edge closed form switches to
# a 3-term series; both branches then carry ~1e-12 relative error or better.
_SERIES_SWITCH = 1e-4


def edge_poly_int(q, alpha, beta, n):
    """Integral over t in [0,1] of (q0 + q1 t + q2 t^2) * (alpha + beta*t)^-n.

    Exact rational closed form; requires deg(q) <= n - 2 so no logarithmic
    terms arise.  alpha and alpha + beta must be nonzero.
    """
    q0, q1, q2 = q
    if q2 != 0.0 and n - 2 < 2:
        raise ValueError("degree 2 numerator needs n >= 4")
    if q1 != 0.0 and n - 2 < 1:
        raise ValueError("degree 1 numerator needs n >= 3")
    scale = max(abs(alpha), abs(alpha + beta))
    if scale == 0.0:
        raise ZeroDivisionError("f vanishes on the whole edge")
    if abs(beta) <= _SERIES_SWITCH * scale:
        r = beta / alpha
        out = 0.0
        for j, qj in enumerate((q0, q1, q2)):
            if qj == 0.0:
                continue
            out += qj * (
                1.0 / (j + 1)
                - n * r / (j + 2)
                + 0.5 * n * (n + 1) * r * r / (j + 3)
            )
        return out * alpha ** (-n)
    # expand q(t) in powers of u = alpha + beta*t
    A0 = q0
    A1 = 0.0
    A2 = 0.0
    if q1 != 0.0:
        A1 += q1 / beta
        A0 += -q1 * alpha / beta
    if q2 != 0.0:
        A2 += q2 / beta**2
        A1 += -2.0 * q2 * alpha / beta**2
        A0 += q2 * alpha**2 / beta**2
    u0, u1 = alpha, alpha + beta
    out = 0.0
    for j, Aj in enumerate((A0, A1, A2)):
        if Aj == 0.0:
            continue
        e = j - n
        # e <= -2 by the degree requirement, so no log terms appear
        out += Aj * (u1 ** (e + 1) - u0 ** (e + 1)) / (e + 1)
    return out / beta


def _mono_on_edge(P, Q, a, b):
    """Coefficients of x(t)^a y(t)^b along the segment P->Q (a+b <= 2)."""
    dx, dy = Q[0] - P[0], Q[1] - P[1]
    cx = ((1.0, 0.0, 0.0), (P[0], dx, 0.0), (P[0] ** 2, 2 * P[0] * dx, dx**2))[a]
    cy = ((1.0, 0.0, 0.0), (P[1], dy, 0.0), (P[1] ** 2, 2 * P[1] * dy, dy**2))[b]
    out = [0.0, 0.0, 0.0]
    for i in range(a + 1):
        for j in range(b + 1):
            out[i + j] += cx[i] * cy[j]
    return tuple(out)


class PolygonMoments:
    """Rational moments of one (polygon, f) pair, memoized.

    Valid for counterclockwise convex vertex arrays.  All interior moments
    I_k[x^a y^b] with a + b <= k - 3 <= 2 are reachable.
    """

    def __init__(self, vertices, f: AffineMap2):
        v = np.asarray(vertices, dtype=float)
        self.vertices = v
        self.f = f
        n = len(v)
        cand = [v.mean(axis=0)] + [v[i] for i in range(n)]
        fvals = [float(f(c)) for c in cand]
        pick = max(range(len(cand)), key=lambda i: abs(fvals[i]))
        if fvals[pick] == 0.0:
            raise DegeneratePolytope("f vanishes at the centroid and every vertex")
        self.x0 = cand[pick]
        self.f0 = fvals[pick]
        self.edges = []
        for i in range(n):
            P, Q = v[i], v[(i + 1) % n]
            d = Q - P
            length = float(np.hypot(*d))
            if length == 0.0:
                raise DegeneratePolytope(f"zero-length edge {i}")
            nrm = np.array([d[1], -d[0]]) / length  # outward for CCW
            dist = float((P - self.x0) @ nrm)
            alpha = float(f(P))
            beta = float(f(Q)) - alpha
            self.edges.append((P, Q, length, dist, alpha, beta))
        self._memo = {}

    def edge_integral(self, i, n_pow, a, b):
        """Integral over edge i of x^a y^b f^-n ds (arclength measure)."""
        P, Q, length, _, alpha, beta = self.edges[i]
        q = _mono_on_edge(P, Q, a, b)
        return length * edge_poly_int(q, alpha, beta, n_pow)

    def _surface_sum(self, n_pow, a, b):
        tot = 0.0
        for i, (P, Q, length, dist, alpha, beta) in enumerate(self.edges):
            q = _mono_on_edge(P, Q, a, b)
            tot += dist * length * edge_poly_int(q, alpha, beta, n_pow)
        return tot

    def interior(self, k, a, b):
        """I_k[x^a y^b]; requires a + b <= k - 3."""
        d = a + b
        if d > k - 3:
            raise ValueError(f"moment ({a},{b}) at power {k} has log terms")
        key = (k, a, b)
        if key in self._memo:
            return self._memo[key]
        # divergence of (x - x0) x^a y^b f^{1-k}:
        # (k-1) f(x0) I_k = S_{k-1} + (k-3-d) I_{k-1}[g] + I_{k-1}[x0 . grad g]
        val = self._surface_sum(k - 1, a, b)
        if k - 3 - d != 0:
            val += (k - 3 - d) * self.interior(k - 1, a, b)
        if a:
            val += a * self.x0[0] * self.interior(k - 1, a - 1, b)
        if b:
            val += b * self.x0[1] * self.interior(k - 1, a, b - 1)
        val /= (k - 1) * self.f0
        self._memo[key] = val
        return val

    def gram_matrix(self):
        """3x3 matrix of I_5[phi_i phi_j] in the basis (1, x, y)."""
        I = self.interior
        return np.array(
            [
                [I(5, 0, 0), I(5, 1, 0), I(5, 0, 1)],
                [I(5, 1, 0), I(5, 2, 0), I(5, 1, 1)],
                [I(5, 0, 1), I(5, 1, 1), I(5, 0, 2)],
            ]
        )

    def boundary_vector(self, grad_norms):
        """(2 * integral of phi_i f^-3 dsigma) for phi in (1, x, y)."""
        out = np.zeros(3)
        for i in range(len(self.edges)):
            mass = 1.0 / grad_norms[i]
            for j, (a, b) in enumerate(((0, 0), (1, 0), (0, 1))):
                out[j] += 2.0 * mass * self.edge_integral(i, 3, a, b)
        return out


def zeta_exact(P: LabelledPolytope2, f: AffineMap2):
    """Extremal affine function at weight exponent 4 from exact integrals.

    Solves M c = b with M_ij = I_5[phi_i phi_j], b_i = 2 * B_3[phi_i] in the
    basis (1, x, y).  Defined by analytic continuation whenever f is nonzero
    at every vertex; for f positive on P it agrees with the quadrature-based
    extremal affine function.
    """
    mom = PolygonMoments(P.vertex_array, f)
    M = mom.gram_matrix()
    b = mom.boundary_vector([lab.gradient_norm for lab in P.labels])
    try:
        c = np.linalg.solve(M, b)
    except np.linalg.LinAlgError as exc:
        raise DegeneratePolytope(f"singular moment matrix: {exc}") from exc
    return AffineMap2(float(c[0]), float(c[1]), float(c[2])), M
