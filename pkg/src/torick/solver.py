"""Recovery of condition-(a) weights by multistart Newton, extremal-pair
checking, and the theorem-backed stability verdict.

The Newton residual is the gradient part of the extremal affine function,
evaluated from the exact rational moments, so the solve extends by analytic
continuation to weights that change sign on the polygon; such roots are kept
and flagged rather than discarded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import sturm
from .affine import AffineMap2, ONE
from .errors import (
    ConditionANotMet,
    DegeneratePolytope,
    NoConvergence,
    ParameterOutOfDomain,
)
from .families import FamilyId, E_b, family_f, r_k
from .futaki import crease_scan, extremal_affine
from .moments import zeta_exact
from .polytope import (
    LabelledPolytope2,
    QuadType,
    classify_quadrilateral,
    min_over_vertices,
)
from .twist import twisted_pair


@dataclass(frozen=True)
class ConditionASolution:
    """One normalized root of the condition-(a) system.

    ``f`` has vertex sum exactly one; ``matched_family`` is a family id
    string when the coefficients match a known family after the same
    normalization.
    """

    f: AffineMap2
    residual_a: float
    positive_on_polytope: bool
    matched_family: str | None


# ---------------------------------------------------------------------------
# condition-(a) multistart Newton
# ---------------------------------------------------------------------------


def _newton_residual(P, f):
    try:
        zeta, _ = zeta_exact(P, f)
    except Exception:
        return None, None
    vec = np.array([zeta.c1, zeta.c2])
    if not np.all(np.isfinite(vec)):
        return None, None
    return vec, zeta


def _start_grid(P, starts, seed):
    # feasibility region of (c1, c2): f(v_i) > 0 under the vertex-sum gauge
    v = P.vertex_array
    S = v.sum(axis=0)
    lines = [(v[i, 0] - S[0] / 4.0, v[i, 1] - S[1] / 4.0, 0.25) for i in range(4)]
    corners = []
    for (a1, b1, d1), (a2, b2, d2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-14:
            continue
        corners.append((((-d1) * b2 - (-d2) * b1) / det, (a1 * (-d2) - a2 * (-d1)) / det))
    if not corners:
        raise DegeneratePolytope("no corners in the (c1, c2) feasibility region")
    corners = np.asarray(corners)
    lo = corners.min(axis=0)
    hi = corners.max(axis=0)
    mid = (lo + hi) / 2.0
    half = np.maximum((hi - lo) / 2.0, 1e-6)
    lo = mid - 1.5 * half  # shell slightly outside the positivity region
    hi = mid + 1.5 * half
    n = math.ceil(math.sqrt(starts))
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-0.3, 0.3, size=(n, n, 2))
    pts = []
    for i in range(n):
        for j in range(n):
            if len(pts) >= starts:
                break
            u = (i + 0.5 + jitter[i, j, 0]) / n
            w = (j + 0.5 + jitter[i, j, 1]) / n
            pts.append(np.array([lo[0] + (hi[0] - lo[0]) * u, lo[1] + (hi[1] - lo[1]) * w]))
    return pts


def _detect_hirzebruch(P):
    """Return (p, k) if the vertices are exactly the standard trapezoid."""
    v = P.vertex_array
    if len(v) != 4:
        return None
    if not (np.allclose(v[0], [0.0, 0.0], atol=1e-12) and abs(v[1][1]) < 1e-12):
        return None
    p = v[1][0]
    k = v[3][1]
    if not (0.0 < p < 1.0) or k < 1.0 or abs(k - round(k)) > 1e-12:
        return None
    k = int(round(k))
    if not np.allclose(v[2], [p, (1.0 - p) * k], atol=1e-12):
        return None
    if not np.allclose(v[3], [0.0, float(k)], atol=1e-12):
        return None
    return p, k


def _family_candidates(p, k, b_hint):
    cands = []
    cands.append((FamilyId.LEBRUN_CALABI.value, family_f(FamilyId.LEBRUN_CALABI, p, k)))
    if k == 1 and 8.0 / 9.0 <= p < 1.0:
        for sg in ("+", "-"):
            cands.append((FamilyId.LEBRUN_B.value, family_f(FamilyId.LEBRUN_B, p, k, sg)))
    if k <= 4 and 0.0 < p < r_k(k):
        for sg in ("+", "-"):
            cands.append((FamilyId.FUTAKI_ONO.value, family_f(FamilyId.FUTAKI_ONO, p, k, sg)))
    if k == 1 and abs(p - 2.0 / 3.0) >= 1e-9 and E_b(p, b_hint) >= 0.0:
        for sg in ("+", "-"):
            cands.append(
                (FamilyId.FO_CASE12.value, family_f(FamilyId.FO_CASE12, p, 1, sg, b_hint))
            )
    return cands


def _match_family(P, f, tol=1e-6):
    ctx = _detect_hirzebruch(P)
    if ctx is None:
        return None
    p, k = ctx
    root = np.array(f.coefficients())
    for name, cand in _family_candidates(p, k, b_hint=float(f.c2)):
        s = sum(float(cand(v)) for v in P.vertices)
        if s == 0.0:
            continue
        cc = np.array(cand.coefficients()) / s
        if np.max(np.abs(cc - root)) < tol:
            return name
    return None


def solve_condition_a(
    P: LabelledPolytope2,
    w: float = 4.0,
    starts: int = 150,
    seed: int = 42,
    tol: float = 1e-9,
) -> list[ConditionASolution]:
    """Multistart damped Newton for affine f with constant extremal zeta.

    f is gauged by the vertex-sum normalization sum_i f(v_i) = 1, leaving the
    two gradient components as unknowns; the residual is the gradient part of
    zeta computed from exact rational moments.  Converged roots are
    deduplicated at distance 1e-7 and annotated with positivity and the
    nearest paper family.
    """
    if P.num_vertices != 4:
        raise DegeneratePolytope("the solver handles labelled quadrilaterals")
    if w != 4.0:
        raise ParameterOutOfDomain(
            "the exact-moment solver is implemented at weight exponent w = 4"
        )
    if starts < 1:
        raise ValueError("starts must be >= 1")
    v = P.vertex_array
    S = v.sum(axis=0)
    diam = P.diameter
    cen = P.centroid

    def make_f(theta):
        c0 = (1.0 - theta[0] * S[0] - theta[1] * S[1]) / 4.0
        return AffineMap2(float(c0), float(theta[0]), float(theta[1]))

    def residual(theta):
        return _newton_residual(P, make_f(theta))

    roots: list[np.ndarray] = []
    for theta0 in _start_grid(P, starts, seed):
        theta = theta0.copy()
        r, zeta = residual(theta)
        if r is None:
            continue
        converged = False
        for _ in range(60):
            zc = abs(float(zeta(cen)))
            if zc > 0.0 and np.linalg.norm(r) < tol * zc / diam:
                converged = True
                break
            J = np.zeros((2, 2))
            h = 1e-6
            ok = True
            for m in range(2):
                tp = theta.copy()
                tp[m] += h
                tm = theta.copy()
                tm[m] -= h
                rp, _ = residual(tp)
                rm, _ = residual(tm)
                if rp is None or rm is None:
                    ok = False
                    break
                J[:, m] = (rp - rm) / (2.0 * h)
            if not ok:
                break
            try:
                step = np.linalg.solve(J, -r)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            moved = False
            for _ in range(30):
                cand = theta + lam * step
                rc, zc_new = residual(cand)
                if rc is not None and np.linalg.norm(rc) < (1.0 - 0.5 * lam) * np.linalg.norm(r):
                    theta, r, zeta = cand, rc, zc_new
                    moved = True
                    break
                lam /= 2.0
            if not moved:
                break
        if converged and not any(np.linalg.norm(theta - q) < 1e-7 for q in roots):
            roots.append(theta)

    if not roots:
        raise NoConvergence(f"no converged root from {starts} starts")

    out = []
    for theta in roots:
        f = make_f(theta)
        mn, _ = min_over_vertices(P, f)
        positive = mn > 0.0
        if positive:
            residual_a = extremal_affine(P, f, 4.0, tol=1e-10).residual_a
        else:
            zeta, _ = zeta_exact(P, f)
            residual_a = (abs(zeta.c1) + abs(zeta.c2)) * diam / abs(float(zeta(cen)))
        out.append(
            ConditionASolution(
                f=f,
                residual_a=float(residual_a),
                positive_on_polytope=positive,
                matched_family=_match_family(P, f),
            )
        )
    return out


# ---------------------------------------------------------------------------
# extremal pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalPair:
    """Polynomials (A, B) with their intervals and prescribed boundary slopes.

    Coefficients are ascending; degrees at most four.  The intervals must
    satisfy 0 < beta1 < beta2 < alpha1 < alpha2 and all four slopes must be
    positive.
    """

    A: tuple[float, ...]
    B: tuple[float, ...]
    alpha: tuple[float, float]
    beta: tuple[float, float]
    slopes: tuple[float, float, float, float]  # r_a1, r_a2, r_b1, r_b2

    def __post_init__(self):
        if len(self.A) > 5 or len(self.B) > 5:
            raise ParameterOutOfDomain("polynomials must have degree <= 4")
        b1, b2 = self.beta
        a1, a2 = self.alpha
        if not (0.0 < b1 < b2 < a1 < a2):
            raise ParameterOutOfDomain(
                f"need 0 < beta1 < beta2 < alpha1 < alpha2, got {b1}, {b2}, {a1}, {a2}"
            )
        if not all(s > 0.0 for s in self.slopes):
            raise ParameterOutOfDomain("boundary slopes must be positive")


def _poly_scale(coeffs, x):
    return sum(abs(c) * max(1.0, abs(x)) ** i for i, c in enumerate(coeffs))


def _positivity_clause(coeffs, lo, hi):
    delta = 1e-9 * (hi - lo)
    a, b = lo + delta, hi - delta
    count = sturm.count_roots(list(coeffs), a, b)
    mid_positive = sturm.polyval(list(coeffs), 0.5 * (lo + hi)) > 0.0
    sample_positive = sturm.dense_positive(list(coeffs), a, b)
    verdict = count == 0 and mid_positive
    if verdict != sample_positive:
        # disagreement between Sturm and sampling: recompute exactly
        count = sturm.count_roots_exact(list(coeffs), a, b)
        verdict = count == 0 and mid_positive
    roots = sturm.isolate_roots(list(coeffs), a, b) if count > 0 else []
    return {
        "positive": bool(verdict),
        "interior_root_count": int(count),
        "isolating_intervals": [list(iv) for iv in roots],
    }


BOUNDARY_RTOL = 1e-10


def check_extremal_pair(pair: ExtremalPair, quad_type: QuadType) -> dict:
    """Check boundary conditions, type relations and interval positivity.

    Failures are report entries, never exceptions.  Positivity uses Sturm
    root counting cross-checked against dense sampling, with an exact
    rational recount on disagreement.
    """
    A, B = list(pair.A), list(pair.B)
    dA, dB = sturm.polyder(A), sturm.polyder(B)
    a1, a2 = pair.alpha
    b1, b2 = pair.beta
    ra1, ra2, rb1, rb2 = pair.slopes

    def near(value, target, scale):
        return abs(value - target) <= BOUNDARY_RTOL * max(scale, abs(target), 1.0)

    boundary = {
        "A(alpha1)=0": near(sturm.polyval(A, a1), 0.0, _poly_scale(A, a1)),
        "A(alpha2)=0": near(sturm.polyval(A, a2), 0.0, _poly_scale(A, a2)),
        "B(beta1)=0": near(sturm.polyval(B, b1), 0.0, _poly_scale(B, b1)),
        "B(beta2)=0": near(sturm.polyval(B, b2), 0.0, _poly_scale(B, b2)),
        "A'(alpha1)=r": near(sturm.polyval(dA, a1), ra1, _poly_scale(dA, a1)),
        "A'(alpha2)=-r": near(sturm.polyval(dA, a2), -ra2, _poly_scale(dA, a2)),
        "B'(beta1)=r": near(sturm.polyval(dB, b1), rb1, _poly_scale(dB, b1)),
        "B'(beta2)=-r": near(sturm.polyval(dB, b2), -rb2, _poly_scale(dB, b2)),
    }

    scaleA = max(abs(c) for c in A)
    scaleB = max(abs(c) for c in B)
    if quad_type is QuadType.PARALLELOGRAM:
        relations = {
            "deg A <= 3": sturm.degree(A) <= 3,
            "deg B <= 3": sturm.degree(B) <= 3,
        }
    elif quad_type is QuadType.TRAPEZOID_NOT_PARALLELOGRAM:
        # Calabi coupling: B'' constant equal to -A''(0), and A''(0) > 0
        a2_coeff = A[2] if len(A) > 2 else 0.0
        b2_coeff = B[2] if len(B) > 2 else 0.0
        relations = {
            "deg B <= 2": sturm.degree(B) <= 2,
            "B'' = -A''(0)": abs(2.0 * b2_coeff + 2.0 * a2_coeff)
            <= BOUNDARY_RTOL * max(scaleA, scaleB, 1.0),
            "A''(0) > 0": 2.0 * a2_coeff > 0.0,
        }
    else:
        total = [0.0] * max(len(A), len(B))
        for i, c in enumerate(A):
            total[i] += c
        for i, c in enumerate(B):
            total[i] += c
        relations = {
            "deg(A+B) <= 1": all(
                abs(c) <= BOUNDARY_RTOL * max(scaleA, scaleB, 1.0) for c in total[2:]
            )
        }

    positivity = {
        "A": _positivity_clause(A, a1, a2),
        "B": _positivity_clause(B, b1, b2),
    }
    passed = (
        all(boundary.values())
        and all(relations.values())
        and positivity["A"]["positive"]
        and positivity["B"]["positive"]
    )
    return {
        "passed": bool(passed),
        "boundary_conditions": boundary,
        "type_relations": relations,
        "positivity": positivity,
        "quad_type": quad_type.value,
    }


# ---------------------------------------------------------------------------
# stability verdict
# ---------------------------------------------------------------------------

_BRANCH = {
    QuadType.PARALLELOGRAM: "product",
    QuadType.TRAPEZOID_NOT_PARALLELOGRAM: "calabi",
    QuadType.GENERIC_QUADRILATERAL: "orthotoric",
}


def stability_verdict(
    P: LabelledPolytope2,
    f: AffineMap2,
    w: float = 4.0,
    tol: float = 1e-10,
    tau_a: float = 1e-7,
    tau_eq: float = 1e-8,
    crease_count: int = 200,
    seed: int = 42,
) -> dict:
    """Combine the twist with the equipoised criterion into a verdict.

    STABLE-BY-THEOREM means: condition (a) holds for (P, f), the twist is a
    quadrilateral, and its extremal affine function has relative alternating
    vertex sum below tau_eq; equipoised quadrilaterals are K-stable and their
    Abreu problem is solvable.  Anything else returns EVIDENCE-ONLY with a
    crease scan of the twist.
    """
    from .families import alternating_vertex_sum

    ex = extremal_affine(P, f, w, tol)
    if ex.residual_a >= tau_a:
        raise ConditionANotMet(
            f"residual_a = {ex.residual_a:.3e} >= tau_a = {tau_a:.1e}"
        )
    P0, f0, Pt, shift = twisted_pair(P, f)
    zt = extremal_affine(Pt, ONE, w, tol)
    report = {
        "residual_a": ex.residual_a,
        "zeta": ex.zeta.to_dict(),
        "translation": list(shift),
        "twist": Pt.to_dict(),
        "zeta_twisted": zt.zeta.to_dict(),
        "crease_min": None,
        "violations": None,
    }
    if Pt.num_vertices == 4:
        qt = classify_quadrilateral(Pt)
        s = alternating_vertex_sum(Pt, zt.zeta)
        scale = max(abs(float(zt.zeta(v))) for v in Pt.vertices)
        eq_rel = abs(s) / scale
        report["quad_type"] = qt.value
        report["ambitoric_branch"] = _BRANCH[qt]
        report["equipoised_sum_rel"] = eq_rel
        if eq_rel < tau_eq:
            report["verdict"] = "STABLE-BY-THEOREM"
            return report
    else:
        report["quad_type"] = None
        report["ambitoric_branch"] = None
        report["equipoised_sum_rel"] = None
    scan = crease_scan(Pt, ONE, w, crease_count, seed, zeta=zt.zeta)
    report["verdict"] = "EVIDENCE-ONLY"
    report["crease_min"] = scan["min_value"]
    report["violations"] = scan["non_positive_count"]
    return report
