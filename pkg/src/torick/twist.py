"""The f-twist: a projective change of variables exchanging weighted and
unweighted extremal problems.

For f affine and positive on a polygon containing the origin, T(x) = x / f(x)
carries the polygon to a new labelled polygon with labels L / f, affine
functions phi to phi/f, and the weighted Donaldson-Futaki functional at
exponent 4 to the unweighted one of the image, up to the factor 1/f(0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineMap2
from .errors import NonPositiveWeight, NotInterior, OriginNotInterior, ZeroConstantTerm
from .futaki import CreaseFunction, df_invariant, extremal_affine, sample_creases
from .polytope import LabelledPolytope2, min_over_vertices, translate_polytope


def twist_affine(f: AffineMap2, phi: AffineMap2) -> AffineMap2:
    """The affine function phi~ with phi~(T(x)) = phi(x) / f(x) identically.

    With f = a0 + a1 x1 + a2 x2 and phi = b0 + b1 x1 + b2 x2 the coefficients
    are c0 = b0/a0 and c_i = b_i - (b0/a0) a_i.  In particular the constant 1
    twists to f~ = (1/a0)(1 - a1 x~1 - a2 x~2), which represents 1/f in the
    new coordinates, and f itself twists to the constant 1.
    """
    a0 = f.c0
    if a0 == 0.0:
        raise ZeroConstantTerm("f(0) = 0: the twist is undefined at the origin")
    r = phi.c0 / a0
    return AffineMap2(r, phi.c1 - r * f.c1, phi.c2 - r * f.c2)


@dataclass(frozen=True)
class TwistMap:
    """Forward map x -> x/f(x) with its inverse x~ -> x~/f~(x~)."""

    f: AffineMap2

    def __post_init__(self):
        if self.f.c0 == 0.0:
            raise ZeroConstantTerm("f(0) = 0: the twist is undefined at the origin")

    @property
    def f_twisted(self) -> AffineMap2:
        return twist_affine(self.f, AffineMap2(1.0, 0.0, 0.0))

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        return x / self.f(x)[..., None]

    def inverse(self, xt):
        xt = np.asarray(xt, dtype=float)
        return xt / self.f_twisted(xt)[..., None]


def twist_polytope(P: LabelledPolytope2, f: AffineMap2) -> LabelledPolytope2:
    """Image polygon T(P) with labels L_i / f; requires 0 strictly inside P."""
    for i, lab in enumerate(P.labels):
        if float(lab((0.0, 0.0))) <= 0.0:
            raise OriginNotInterior(f"label {i} nonpositive at the origin")
    val, idx = min_over_vertices(P, f)
    if val <= 0.0:
        raise NonPositiveWeight(f"f is {val:.3e} at vertex {idx}")
    T = TwistMap(f)
    verts = tuple(tuple(T.forward(np.asarray(v))) for v in P.vertices)
    labels = tuple(twist_affine(f, lab) for lab in P.labels)
    return LabelledPolytope2(verts, labels)


def twist_scalar(f: AffineMap2, u):
    """Transform a scalar function: u~(x~) = u(x)/f(x) under x~ = T(x)."""
    T = TwistMap(f)
    ft = T.f_twisted

    def u_twisted(xt):
        return u(T.inverse(xt)) * ft(np.asarray(xt, dtype=float))

    return u_twisted


def center_at_origin(P: LabelledPolytope2, f: AffineMap2):
    """Translate so the centroid sits at the origin; returns (P0, f0, shift).

    ``shift`` is the applied translation of coordinates: y = x - shift with
    shift the original centroid, so P0 = P - shift and f0(y) = f(y + shift).
    """
    c = P.centroid
    P0 = translate_polytope(P, (-c[0], -c[1]))
    f0 = f.translated((c[0], c[1]))
    return P0, f0, (float(c[0]), float(c[1]))


def twisted_pair(P: LabelledPolytope2, f: AffineMap2):
    """Center, twist, and return (P0, f0, twisted polygon, translation)."""
    P0, f0, shift = center_at_origin(P, f)
    return P0, f0, twist_polytope(P0, f0), shift


# ---------------------------------------------------------------------------
# covariance checks
# ---------------------------------------------------------------------------


def _fd_hessian(fn, x, h):
    H = np.zeros((2, 2))
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    H[0, 0] = (fn(x + e1) - 2.0 * fn(x) + fn(x - e1)) / h**2
    H[1, 1] = (fn(x + e2) - 2.0 * fn(x) + fn(x - e2)) / h**2
    H[0, 1] = H[1, 0] = (
        fn(x + e1 + e2) - fn(x + e1 - e2) - fn(x - e1 + e2) + fn(x - e1 - e2)
    ) / (4.0 * h**2)
    return H


def _fd_hessian_rich(fn, x, h):
    return (4.0 * _fd_hessian(fn, x, h / 2.0) - _fd_hessian(fn, x, h)) / 3.0


def interior_samples(P: LabelledPolytope2, n: int, seed: int, margin_rel: float = 0.05):
    """Deterministic interior points at facet distance >= margin_rel * diam.

    The margin halves whenever rejection stalls, so thin polygons still
    produce n points.
    """
    rng = np.random.default_rng(seed)
    v = P.vertex_array
    margin = margin_rel * P.diameter
    out: list[np.ndarray] = []
    stall = 0
    while len(out) < n:
        lam = rng.dirichlet(np.ones(len(v)))
        x = lam @ v
        if P.facet_distance(x) >= margin:
            out.append(x)
            stall = 0
        else:
            stall += 1
            if stall > 200:
                margin /= 2.0
                stall = 0
    return out


def check_hessian_det_law(
    P: LabelledPolytope2,
    f: AffineMap2,
    n_points: int = 50,
    seed: int = 0,
    h: float | None = None,
) -> dict:
    """Compare det Hess(u~) at T(x) with f(x)^4 / f(0)^2 * det Hess(u).

    u is the Guillemin potential of the centered polygon; both Hessians are
    finite-difference with Richardson extrapolation.  The exponent 4 is the
    two-dimensional case of the twist determinant law.
    """
    from .abreu import guillemin_hessian, guillemin_potential

    P0, f0, shift = center_at_origin(P, f)
    val, idx = min_over_vertices(P0, f0)
    if val <= 0.0:
        raise NonPositiveWeight(f"f is {val:.3e} at vertex {idx}")
    a0 = f0.c0
    ut = twist_scalar(f0, lambda x: guillemin_potential(P0, x))
    if h is None:
        h = 1e-4 * P0.diameter
    worst = 0.0
    pts = interior_samples(P0, n_points, seed, margin_rel=0.05)
    T = TwistMap(f0)
    for x in pts:
        G = guillemin_hessian(P0, x)
        xt = T.forward(x)
        lhs = np.linalg.det(_fd_hessian_rich(lambda z: float(ut(z)), xt, h))
        rhs = float(f0(x)) ** 4 / a0**2 * np.linalg.det(G)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return {
        "max_rel_deviation": worst,
        "n_points": len(pts),
        "translation": shift,
    }


def check_df_covariance(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float = 4.0,
    n_creases: int = 20,
    seed: int = 0,
    tol: float = 1e-10,
) -> dict:
    """Verify F_{P,L,f,4}(phi) = F_{twist}(phi~) / f(0) on sampled creases.

    Both sides are computed independently: the left with the weighted
    functional on (P, f), the right with the unweighted functional on the
    twisted polygon.  Also reports the coefficientwise deviation between the
    twisted extremal affine function and the twist of the source one.
    """
    if w != 4.0:
        raise ValueError("the twist covariance is stated at weight exponent 4")
    P0, f0, Pt, shift = twisted_pair(P, f)
    a0 = f0.c0
    zeta = extremal_affine(P0, f0, 4.0, tol).zeta
    one = AffineMap2(1.0, 0.0, 0.0)
    zeta_t = extremal_affine(Pt, one, 4.0, tol).zeta
    zeta_pred = twist_affine(f0, zeta)
    zscale = max(abs(c) for c in zeta_t.coefficients())
    zeta_dev = max(
        abs(a - b) for a, b in zip(zeta_t.coefficients(), zeta_pred.coefficients())
    ) / zscale

    creases = sample_creases(P0, n_creases, seed)
    deviations = []
    for cr in creases:
        lhs = df_invariant(P0, f0, 4.0, cr, zeta, tol)
        cr_t = CreaseFunction(twist_affine(f0, cr.ell))
        rhs = df_invariant(Pt, one, 4.0, cr_t, zeta_t, tol)
        scale = max(abs(lhs), abs(rhs) / abs(a0), 1e-12)
        deviations.append(abs(lhs - rhs / a0) / scale)
    return {
        "max_rel_deviation": float(max(deviations)),
        "zeta_twist_rel_deviation": float(zeta_dev),
        "n_creases": len(creases),
        "translation": shift,
    }


def twist_report(P: LabelledPolytope2, f: AffineMap2, tol: float = 1e-10, seed: int = 0) -> dict:
    """Full twist report: translation, image data and both covariance checks."""
    P0, f0, Pt, shift = twisted_pair(P, f)
    cov = check_df_covariance(P, f, 4.0, n_creases=8, seed=seed, tol=tol)
    det = check_hessian_det_law(P, f, n_points=12, seed=seed)
    return {
        "translation": list(shift),
        "twisted_vertices": [list(v) for v in Pt.vertices],
        "twisted_labels": [lab.to_dict() for lab in Pt.labels],
        "df_covariance_max_rel_deviation": cov["max_rel_deviation"],
        "zeta_twist_rel_deviation": cov["zeta_twist_rel_deviation"],
        "hessian_det_max_rel_deviation": det["max_rel_deviation"],
    }
