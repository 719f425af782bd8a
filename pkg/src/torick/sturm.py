"""Sturm sequences and real-root counting for low-degree polynomials.

Coefficients are ascending (c[0] + c[1] x + ...).  The double-precision path
truncates near-zero leading coefficients at a relative 1e-12; callers who
detect a disagreement with dense sampling can rerun the same routines with
exact Fraction coefficients.
"""

from __future__ import annotations

from fractions import Fraction

LEAD_TRUNC_RTOL = 1e-12


def trim(coeffs, rel_eps=LEAD_TRUNC_RTOL):
    """Drop near-zero leading (highest-degree) coefficients."""
    coeffs = list(coeffs)
    scale = max((abs(c) for c in coeffs), default=0)
    if scale == 0:
        return [coeffs[0] * 0] if coeffs else [0.0]
    while len(coeffs) > 1 and abs(coeffs[-1]) <= rel_eps * scale:
        coeffs.pop()
    return coeffs


def degree(coeffs) -> int:
    return len(trim(coeffs)) - 1


def polyval(coeffs, x):
    out = coeffs[-1] * 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def polyder(coeffs):
    if len(coeffs) <= 1:
        return [coeffs[0] * 0]
    return [i * c for i, c in enumerate(coeffs)][1:]


def polydiv(num, den):
    """Quotient and remainder of ascending-coefficient polynomials."""
    num = list(num)
    den = trim(den)
    if len(den) == 1 and den[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [num[0] * 0] * max(1, len(num) - len(den) + 1)
    r = list(num)
    dlead = den[-1]
    while len(trim(r, 0)) >= len(den) and any(c != 0 for c in r):
        r = trim(r, 0)
        if len(r) < len(den):
            break
        shift = len(r) - len(den)
        factor = r[-1] / dlead
        q[shift] = q[shift] + factor
        for i, dc in enumerate(den):
            r[shift + i] = r[shift + i] - factor * dc
        r[-1] = r[-1] * 0  # force exact cancellation of the leading term
        r = r[:-1]
    if not r:
        r = [num[0] * 0]
    return q, r


def sturm_sequence(coeffs, rel_eps=LEAD_TRUNC_RTOL):
    """Canonical Sturm chain p, p', -rem(...), ... down to a constant."""
    p0 = trim(coeffs, rel_eps)
    seq = [p0]
    if len(p0) == 1:
        return seq
    p1 = trim(polyder(p0), rel_eps)
    seq.append(p1)
    while len(seq[-1]) > 1:
        _, rem = polydiv(seq[-2], seq[-1])
        rem = trim([-c for c in rem], rel_eps)
        if len(rem) == 1 and rem[0] == 0:
            break
        seq.append(rem)
    return seq


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def sign_variations(seq, x) -> int:
    signs = [_sign(polyval(p, x)) for p in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_roots(coeffs, a, b, rel_eps=LEAD_TRUNC_RTOL) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    if not a < b:
        raise ValueError("need a < b")
    seq = sturm_sequence(coeffs, rel_eps)
    return sign_variations(seq, a) - sign_variations(seq, b)


def isolate_roots(coeffs, a, b, rel_eps=LEAD_TRUNC_RTOL, max_depth=80):
    """Disjoint subintervals of (a, b] each containing exactly one root."""
    seq = sturm_sequence(coeffs, rel_eps)

    def var(x):
        return sign_variations(seq, x)

    out = []

    def recurse(lo, hi, vlo, vhi, depth):
        n = vlo - vhi
        if n == 0:
            return
        if n == 1 or depth >= max_depth:
            out.append((lo, hi))
            return
        mid = 0.5 * (lo + hi)
        vm = var(mid)
        recurse(lo, mid, vlo, vm, depth + 1)
        recurse(mid, hi, vm, vhi, depth + 1)

    recurse(a, b, var(a), var(b), 0)
    return out


def to_exact(coeffs):
    """Exact Fraction copies of (possibly float) coefficients."""
    return [Fraction(c) for c in coeffs]


def count_roots_exact(coeffs, a, b) -> int:
    """Exact-arithmetic root count in (a, b] via Fraction coefficients."""
    return count_roots(to_exact(coeffs), Fraction(a), Fraction(b), rel_eps=0)


def dense_positive(coeffs, a, b, n=2000) -> bool:
    """Dense-sampling check that the polynomial is positive on (a, b)."""
    step = (b - a) / (n + 1)
    return all(polyval(coeffs, a + i * step) > 0 for i in range(1, n + 1))
