"""Weighted Donaldson-Futaki invariants, extremal affine functions and scans.

The (f, w) Donaldson-Futaki functional of a labelled polygon is

    F(phi) = 2 * int_{boundary} phi f^{1-w} dsigma
             - int_{interior} phi f^{-(w+1)} zeta dx,

where zeta is the unique affine function annihilating all affine phi.  Its
sign on crease functions max(0, ell) is the stability quantity of interest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineMap2
from .errors import IllConditioned, NonPositiveWeight
from .polytope import LabelledPolytope2, clip_to_halfplane, min_over_vertices
from .quadrature import integrate_boundary_vec, integrate_interior_vec

COND_LIMIT = 1e12


@dataclass(frozen=True)
class ExtremalAffine:
    """Solved extremal affine function with conditioning metadata.

    ``residual_a`` is the dimensionless non-constancy measure
    (|c1| + |c2|) * diam / |zeta(centroid)|; condition (a) holds when it is
    below the caller's threshold.
    """

    zeta: AffineMap2
    gram_condition_number: float
    residual_a: float


@dataclass(frozen=True)
class CreaseFunction:
    """Convex piecewise-linear test function x -> max(0, ell(x))."""

    ell: AffineMap2

    def __call__(self, x):
        return np.maximum(0.0, self.ell(x))

    def crosses_interior(self, P: LabelledPolytope2) -> bool:
        vals = [float(self.ell(v)) for v in P.vertices]
        return min(vals) < 0.0 < max(vals)


def _require_positive(P, f):
    val, idx = min_over_vertices(P, f)
    if val <= 0.0:
        raise NonPositiveWeight(
            f"f is {val:.3e} at vertex {idx}; must be positive on the polygon"
        )


def _basis_values(pts):
    return np.stack([np.ones(len(pts)), pts[:, 0], pts[:, 1]], axis=1)


def _full_edges(P: LabelledPolytope2):
    return [
        (np.asarray(P.edge(i)[0]), np.asarray(P.edge(i)[1]), P.edge_sigma_mass(i))
        for i in range(P.num_vertices)
    ]


def extremal_affine(
    P: LabelledPolytope2, f: AffineMap2, w: float = 4.0, tol: float = 1e-10
) -> ExtremalAffine:
    """Solve for the affine zeta with F(phi) = 0 for all affine phi.

    Assembles the symmetric positive definite system M c = b with
    M_ij = int phi_i phi_j f^{-(w+1)} dx and b_i = 2 int phi_i f^{-(w-1)}
    dsigma in the basis (1, x1, x2).
    """
    _require_positive(P, f)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    kin = w + 1.0
    kb = w - 1.0

    def interior_integrand(pts):
        phi = _basis_values(pts)
        prods = np.stack(
            [
                phi[:, 0] * phi[:, 0],
                phi[:, 0] * phi[:, 1],
                phi[:, 0] * phi[:, 2],
                phi[:, 1] * phi[:, 1],
                phi[:, 1] * phi[:, 2],
                phi[:, 2] * phi[:, 2],
            ],
            axis=1,
        )
        return prods * (f(pts) ** (-kin))[:, None]

    def boundary_integrand(pts):
        return _basis_values(pts) * (f(pts) ** (-kb))[:, None]

    mvals, _, _ = integrate_interior_vec(P.vertex_array, interior_integrand, tol)
    bvals, _, _ = integrate_boundary_vec(_full_edges(P), boundary_integrand, tol)
    M = np.array(
        [
            [mvals[0], mvals[1], mvals[2]],
            [mvals[1], mvals[3], mvals[4]],
            [mvals[2], mvals[4], mvals[5]],
        ]
    )
    b = 2.0 * bvals
    cond = float(np.linalg.cond(M))
    if cond > COND_LIMIT:
        raise IllConditioned(f"gram matrix condition number {cond:.3e}")
    try:
        L = np.linalg.cholesky(M)
        c = np.linalg.solve(L.T, np.linalg.solve(L, b))
    except np.linalg.LinAlgError:
        c, *_ = np.linalg.lstsq(M, b, rcond=None)
    zeta = AffineMap2(float(c[0]), float(c[1]), float(c[2]))
    zc = float(zeta(P.centroid))
    if zc == 0.0:
        raise IllConditioned("zeta vanishes at the centroid")
    residual_a = (abs(zeta.c1) + abs(zeta.c2)) * P.diameter / abs(zc)
    return ExtremalAffine(zeta, cond, residual_a)


def df_invariant(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float,
    phi,
    zeta: AffineMap2,
    tol: float = 1e-10,
) -> float:
    """Evaluate the (f, w) Donaldson-Futaki functional on phi.

    ``phi`` may be affine or a :class:`CreaseFunction`; creases are handled
    by exact polygon clipping along the crease line, never by smoothing.
    """
    _require_positive(P, f)
    if isinstance(phi, CreaseFunction):
        verts, pieces = clip_to_halfplane(P, phi.ell)
        if len(verts) < 3:
            return 0.0
        ell = phi.ell
        interior_vertices = np.asarray(verts)
        edges = [
            (a, b, float(np.hypot(*(b - a))) / P.labels[idx].gradient_norm)
            for (a, b, idx) in pieces
        ]
    elif isinstance(phi, AffineMap2):
        ell = phi
        interior_vertices = P.vertex_array
        edges = _full_edges(P)
    else:
        raise TypeError(f"phi must be AffineMap2 or CreaseFunction, got {type(phi)}")

    def interior_integrand(pts):
        return ell(pts) * f(pts) ** (-(w + 1.0)) * zeta(pts)

    def boundary_integrand(pts):
        return ell(pts) * f(pts) ** (1.0 - w)

    ivals, _, _ = integrate_interior_vec(interior_vertices, interior_integrand, tol)
    if edges:
        bvals, _, _ = integrate_boundary_vec(edges, boundary_integrand, tol)
        bval = float(bvals[0])
    else:
        bval = 0.0
    return 2.0 * bval - float(ivals[0])


def ckem_constant(P: LabelledPolytope2, f: AffineMap2, m: int = 2, tol: float = 1e-10) -> float:
    """The prescribed constant 2 * (boundary f^{1-2m} mass) / (interior f^{-(2m+1)} mass)."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    _require_positive(P, f)

    num, _, _ = integrate_boundary_vec(
        _full_edges(P), lambda pts: f(pts) ** (-(2.0 * m - 1.0)), tol
    )
    den, _, _ = integrate_interior_vec(
        P.vertex_array, lambda pts: f(pts) ** (-(2.0 * m + 1.0)), tol
    )
    c = 2.0 * float(num[0]) / float(den[0])
    assert c > 0.0, "the prescribed constant must be positive"
    return c


N_DIRECTIONS = 20


def sample_creases(P: LabelledPolytope2, n: int, seed: int):
    """Deterministic crease sample: 20 directions x support-quantile offsets."""
    rng = np.random.default_rng(seed)
    v = P.vertex_array
    per = -(-n // N_DIRECTIONS)  # ceil
    creases = []
    for j in range(N_DIRECTIONS):
        th = 2.0 * np.pi * j / N_DIRECTIONS
        u = np.array([np.cos(th), np.sin(th)])
        proj = v @ u
        lo, hi = float(proj.min()), float(proj.max())
        qs = np.sort(rng.uniform(0.1, 0.9, size=per))
        for q in qs:
            off = lo + q * (hi - lo)
            creases.append(CreaseFunction(AffineMap2(-off, float(u[0]), float(u[1]))))
    return creases[:n]


def crease_scan(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float = 4.0,
    n: int = 200,
    seed: int = 42,
    tol: float = 1e-8,
    zeta: AffineMap2 | None = None,
) -> dict:
    """Evaluate the DF functional on n sampled creases; evidence, not proof."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if zeta is None:
        zeta = extremal_affine(P, f, w, tol=min(tol, 1e-10)).zeta
    creases = sample_creases(P, n, seed)
    values = [df_invariant(P, f, w, cr, zeta, tol) for cr in creases]
    imin = int(np.argmin(values))
    return {
        "count": len(values),
        "min_value": float(values[imin]),
        "argmin_crease": creases[imin].ell.to_dict(),
        "non_positive_count": int(sum(1 for x in values if x <= 0.0)),
    }


def report(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float = 4.0,
    n_creases: int = 200,
    seed: int = 42,
    tol: float = 1e-10,
) -> dict:
    """Combined report: zeta, residual, prescribed constant, crease scan."""
    ex = extremal_affine(P, f, w, tol)
    scan = crease_scan(P, f, w, n_creases, seed, max(tol, 1e-8), zeta=ex.zeta)
    return {
        "zeta": ex.zeta.to_dict(),
        "residual_a": ex.residual_a,
        "c": ckem_constant(P, f, m=2, tol=tol) if w == 4.0 else None,
        "crease_min": scan["min_value"],
        "violations": scan["non_positive_count"],
    }
