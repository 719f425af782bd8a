"""The explicit affine function families on the trapezoids Delta_{p,k}.

Four families are provided: the one-parameter Calabi-type potentials
(x1-only, all k and p), the k=1 pair defined for 8/9 <= p < 1, the pair
defined below the smaller root r_k of F_k for k <= 4, and the two-parameter
(p, b) pair that solves the same algebraic system but is never positive on
the polygon.  Coefficients follow the closed forms exactly; nothing is
renormalized here.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .affine import AffineMap2
from .errors import (
    NegativeDiscriminant,
    NotAQuadrilateral,
    ParameterOutOfDomain,
    VertexZero,
)
from .polytope import LabelledPolytope2, hirzebruch_delzant, min_over_vertices


class FamilyId(enum.Enum):
    LEBRUN_CALABI = "lebrun-calabi"
    LEBRUN_B = "lebrun-b"
    FUTAKI_ONO = "futaki-ono"
    FO_CASE12 = "fo-case12"


def F_k(p: float, k: int) -> float:
    """The quartic 4(1-p)^2 k^2 - 4(p-1)(p-2)p k + p^4, by Horner in p."""
    # expanded: p^4 - 4k p^3 + (4k^2+12k) p^2 - (8k^2+8k) p + 4k^2
    k = float(k)
    return (((p - 4.0 * k) * p + (4.0 * k * k + 12.0 * k)) * p
            - (8.0 * k * k + 8.0 * k)) * p + 4.0 * k * k


@lru_cache(maxsize=None)
def r_k(k: int) -> float:
    """Smaller root of F_k in (0, 1), by bisection to 1e-14."""
    lo = 0.0
    hi = None
    for i in range(1, 2001):
        p = i / 2000.0
        if F_k(p, k) < 0.0:
            hi = p
            lo = (i - 1) / 2000.0
            break
    if hi is None:
        raise ParameterOutOfDomain(f"F_{k} has no root in (0, 1)")
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if F_k(mid, k) < 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def E_b(p: float, b: float) -> float:
    """Discriminant b^2 (1-p)(2-3p)^2 + p^2 + p - 1 of the (p, b) family."""
    return b * b * (1.0 - p) * (2.0 - 3.0 * p) ** 2 + p * p + p - 1.0


def ineq1_threshold(p: float) -> float:
    """Lower bound on b^2 for the (p, b) family: (1-p-p^2)/((1-p)(2-3p)^2)."""
    return (1.0 - p - p * p) / ((1.0 - p) * (2.0 - 3.0 * p) ** 2)


def _sign_value(sign) -> float:
    if sign in ("+", 1, +1.0):
        return 1.0
    if sign in ("-", -1, -1.0):
        return -1.0
    raise ParameterOutOfDomain(f"sign must be '+' or '-', got {sign!r}")


def family_f(
    family: FamilyId | str,
    p: float,
    k: int = 1,
    sign: str = "+",
    b: float | None = None,
) -> AffineMap2:
    """Coefficients of the requested family member, from the closed forms."""
    family = FamilyId(family)
    p = float(p)
    if family is FamilyId.LEBRUN_CALABI:
        if not (0.0 < p < 1.0):
            raise ParameterOutOfDomain(f"p must lie in (0, 1), got {p}")
        root = math.sqrt(1.0 - p)
        return AffineMap2(
            -(root - 1.0) / (2.0 * p),
            (p + 2.0 * root - 2.0) / (2.0 * p * p),
            0.0,
        )
    if family is FamilyId.LEBRUN_B:
        if k != 1:
            raise ParameterOutOfDomain("the pair exists only for k = 1")
        if not (8.0 / 9.0 <= p < 1.0):
            raise ParameterOutOfDomain(f"p must lie in [8/9, 1), got {p}")
        s = _sign_value(sign)
        disc = 9.0 * p * p - 8.0 * p
        if disc < 0.0:
            raise NegativeDiscriminant(f"9p^2 - 8p = {disc:.3e}")
        root = math.sqrt(disc)
        return AffineMap2(
            3.0 / 8.0 - s * root / (8.0 * p),
            (-p + s * root) / (4.0 * p * p),
            0.0,
        )
    if family is FamilyId.FUTAKI_ONO:
        if k not in (1, 2, 3, 4):
            raise ParameterOutOfDomain(f"k must be in 1..4, got {k}")
        rk = r_k(k)
        if not (0.0 < p <= rk):
            raise ParameterOutOfDomain(f"p must lie in (0, r_{k}] = (0, {rk:.6f}], got {p}")
        s = _sign_value(sign)
        disc = F_k(p, k)
        if disc < 0.0:
            if disc < -1e-13 * max(1.0, 4.0 * k * k):
                raise NegativeDiscriminant(f"F_{k}({p}) = {disc:.3e}")
            disc = 0.0  # roundoff at the domain endpoint
        root = math.sqrt(disc)
        den = 2.0 * (p - 1.0) * (p - 2.0) * k - p**3
        a = (s * root + 2.0 * (p - 1.0) * k - p * (p - 2.0)) / (2.0 * den)
        bb = s * root / (k * den)
        c = 0.25 * (1.0 + (p - 2.0) * k * bb - 2.0 * p * a)
        return AffineMap2(c, a, bb)
    if family is FamilyId.FO_CASE12:
        if k != 1:
            raise ParameterOutOfDomain("the (p, b) pair exists only for k = 1")
        if b is None:
            raise ParameterOutOfDomain("the (p, b) pair needs the parameter b")
        if not (0.0 < p < 1.0) or abs(p - 2.0 / 3.0) < 1e-9:
            raise ParameterOutOfDomain(
                f"p must lie in (0, 1) away from 2/3, got {p}"
            )
        s = _sign_value(sign)
        disc = E_b(p, float(b))
        if disc < 0.0:
            raise NegativeDiscriminant(f"E_b({p}) = {disc:.3e}")
        root = math.sqrt(disc)
        a = (3.0 * b * p * p + (1.0 - 2.0 * b) * p + s * root) / (2.0 * p * (3.0 * p - 2.0))
        c = 0.25 * (1.0 - (2.0 - p) * b - 2.0 * p * a)
        return AffineMap2(c, a, float(b))
    raise ParameterOutOfDomain(f"unknown family {family}")


def family_domain(family: FamilyId | str, k: int = 1) -> tuple[float, float]:
    """Open p-interval on which the family is defined."""
    family = FamilyId(family)
    if family is FamilyId.LEBRUN_CALABI:
        return (0.0, 1.0)
    if family is FamilyId.LEBRUN_B:
        return (8.0 / 9.0, 1.0)
    if family is FamilyId.FUTAKI_ONO:
        return (0.0, r_k(k))
    raise ParameterOutOfDomain(f"{family.value} has a two-parameter domain")


def family_grid(family: FamilyId | str, k: int, n: int, margin_rel: float = 0.04):
    """Evenly spaced p-grid inside the family domain with relative margins.

    The margins keep the grid away from the endpoints where discriminants
    vanish and where the weight degenerates at a vertex.
    """
    lo, hi = family_domain(family, k)
    width = hi - lo
    return np.linspace(lo + margin_rel * width, hi - margin_rel * width, n)


# ---------------------------------------------------------------------------
# equipoised and exact identities
# ---------------------------------------------------------------------------


def alternating_vertex_sum(P: LabelledPolytope2, g) -> float:
    """sum_i (-1)^i g(v_i) over the stored cyclic vertex order (quadrilaterals)."""
    if P.num_vertices != 4:
        raise NotAQuadrilateral(f"polygon has {P.num_vertices} vertices")
    return float(sum((-1.0) ** i * float(g(v)) for i, v in enumerate(P.vertices)))


def equipoised_check(P: LabelledPolytope2, f: AffineMap2) -> float:
    """Alternating sum of reciprocals sum_i (-1)^i / f(v_i).

    The absolute value is independent of where the cyclic order starts; it
    vanishes exactly when the twist of (P, f) is equipoised.
    """
    if P.num_vertices != 4:
        raise NotAQuadrilateral(f"polygon has {P.num_vertices} vertices")
    vals = [float(f(v)) for v in P.vertices]
    for i, v in enumerate(vals):
        if v == 0.0:
            raise VertexZero(f"f vanishes at vertex {i}")
    return float(sum((-1.0) ** i / v for i, v in enumerate(vals)))


def identity_e2(p) -> Fraction:
    """Exact evaluation of V^2 + (1-p)(p W^2 - U^2) in rational arithmetic.

    U = p^2 + 2p - 2, V = p^3 - 3p^2 + 4p - 2 and W^2 = F_1(p).  The result
    is the zero polynomial, so every rational p must give exactly 0.
    """
    p = Fraction(p)
    U = p * p + 2 * p - 2
    V = p**3 - 3 * p * p + 4 * p - 2
    W2 = p**4 - 4 * p**3 + 16 * p * p - 16 * p + 4
    return V * V + (1 - p) * (p * W2 - U * U)


# ---------------------------------------------------------------------------
# positivity scan of the (p, b) pair
# ---------------------------------------------------------------------------


def case12_samples(n: int, seed: int = 42):
    """Deterministic (p, b) samples satisfying the b^2 lower bound."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p = rng.uniform(0.02, 0.98)
        if abs(p - 2.0 / 3.0) < 0.02:
            continue
        thr = ineq1_threshold(p)
        if thr > 0.0:
            # include the equality case occasionally
            u = rng.uniform(0.0, 2.0) if rng.uniform() > 0.1 else 0.0
            b = math.sqrt(thr) * (1.0 + u)
        else:
            b = rng.uniform(0.0, 3.0)
        if rng.uniform() < 0.5:
            b = -b
        out.append((float(p), float(b)))
    return out


def positivity_scan_case12(samples) -> dict:
    """Vertex-minimum scan of the (p, b) pair over the given samples.

    Returns the maximum over samples and signs of the vertex minimum
    (expected negative everywhere) and a counterexample if one occurs.
    """
    worst = -np.inf
    counterexample = None
    count = 0
    for (p, b) in samples:
        P = hirzebruch_delzant(p, 1)
        for sign in ("+", "-"):
            try:
                f = family_f(FamilyId.FO_CASE12, p, 1, sign, b)
            except NegativeDiscriminant:
                continue
            val, _ = min_over_vertices(P, f)
            count += 1
            if val > worst:
                worst = val
                if val >= 0.0:
                    counterexample = {"p": p, "b": b, "sign": sign, "min_vertex_value": val}
    return {
        "num_evaluations": count,
        "max_of_min_vertex_values": float(worst),
        "counterexample": counterexample,
    }
