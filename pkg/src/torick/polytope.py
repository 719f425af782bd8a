"""Labelled compact convex polygons: construction, validation and queries.

A labelled polygon stores counterclockwise vertices together with one affine
label per facet; label ``i`` vanishes identically on the edge from vertex
``i`` to vertex ``i+1`` (cyclically) and is positive inside.  Label scales
are never renormalized: all downstream boundary measures depend on them.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .affine import AffineMap2
from .errors import (
    EmptyInterior,
    InvalidPolytope,
    NotAQuadrilateral,
    ParameterOutOfRange,
    RedundantLabel,
    UnboundedRegion,
)

# Tolerances (relative): edge-vanishing of labels, parallelism of edges.
EDGE_VANISH_RTOL = 1e-12
PARALLEL_RTOL = 1e-10


class QuadType(enum.Enum):
    PARALLELOGRAM = "parallelogram"
    TRAPEZOID_NOT_PARALLELOGRAM = "trapezoid-not-parallelogram"
    GENERIC_QUADRILATERAL = "generic-quadrilateral"


@dataclass(frozen=True)
class LabelledPolytope2:
    """Counterclockwise vertices plus one label per facet.

    Invariants are revalidated on construction; the first violated one is
    reported through :class:`InvalidPolytope`.
    """

    vertices: tuple[tuple[float, float], ...]
    labels: tuple[AffineMap2, ...]

    def __post_init__(self):
        _validate(self.vertices, self.labels)

    # -- basic queries -------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def vertex_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertex_array.mean(axis=0)

    @property
    def diameter(self) -> float:
        v = self.vertex_array
        return float(max(np.hypot(*(a - b)) for a, b in itertools.combinations(v, 2)))

    def area(self) -> float:
        return _shoelace(self.vertex_array)

    def edge(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        v = self.vertex_array
        return v[i], v[(i + 1) % len(v)]

    def edge_length(self, i: int) -> float:
        a, b = self.edge(i)
        return float(np.hypot(*(b - a)))

    def edge_sigma_mass(self, i: int) -> float:
        """Mass of the labelled boundary measure on edge i: |edge| / |grad L_i|."""
        return self.edge_length(i) / self.labels[i].gradient_norm

    def contains_interior(self, x, margin: float = 0.0) -> bool:
        """True if x lies strictly inside, at facet distance > margin."""
        x = np.asarray(x, dtype=float)
        for lab in self.labels:
            if lab(x) <= margin * lab.gradient_norm:
                return False
        return True

    def facet_distance(self, x) -> float:
        """Minimum euclidean distance from x to the facet lines (signed)."""
        x = np.asarray(x, dtype=float)
        return min(float(lab(x)) / lab.gradient_norm for lab in self.labels)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": [[float(a), float(b)] for a, b in self.vertices],
            "labels": [lab.to_dict() for lab in self.labels],
        }

    @staticmethod
    def from_dict(d) -> "LabelledPolytope2":
        try:
            verts = tuple((float(p[0]), float(p[1])) for p in d["vertices"])
            labels = tuple(AffineMap2.from_dict(l) for l in d["labels"])
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise InvalidPolytope("well-formed JSON object", str(exc)) from exc
        return LabelledPolytope2(verts, labels)

    @staticmethod
    def from_json(text: str) -> "LabelledPolytope2":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidPolytope("well-formed JSON object", str(exc)) from exc
        return LabelledPolytope2.from_dict(d)


def _shoelace(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _validate(vertices, labels):
    # Validation order is fixed; the first violated invariant is reported.
    if len(labels) != len(vertices):
        raise InvalidPolytope(
            "label count equals vertex count",
            f"{len(labels)} labels for {len(vertices)} vertices",
        )
    if len(vertices) < 3:
        raise InvalidPolytope("at least three vertices", f"got {len(vertices)}")
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    diam = max(np.hypot(*(a - b)) for a, b in itertools.combinations(v, 2))
    if diam == 0.0:
        raise InvalidPolytope("positive area", "all vertices coincide")
    # strict convexity in counterclockwise order; also rejects collinear triples
    for i in range(n):
        d1 = v[(i + 1) % n] - v[i]
        d2 = v[(i + 2) % n] - v[(i + 1) % n]
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if cross <= PARALLEL_RTOL * np.hypot(*d1) * np.hypot(*d2):
            raise InvalidPolytope(
                "vertices strictly convex in counterclockwise order",
                f"turn at vertex {(i + 1) % n} has cross product {cross:.3e}",
            )
    if _shoelace(v) <= 0.0:
        raise InvalidPolytope("positive area")
    for i, lab in enumerate(labels):
        gn = lab.gradient_norm
        if gn == 0.0:
            raise InvalidPolytope("label has nonzero gradient", f"label {i}")
        tol = EDGE_VANISH_RTOL * gn * diam
        for j in (i, (i + 1) % n):
            if abs(float(lab(v[j]))) > tol:
                raise InvalidPolytope(
                    "label vanishes on its edge endpoints",
                    f"label {i} at vertex {j} evaluates to {float(lab(v[j])):.3e}",
                )
        for j in range(n):
            if j in (i, (i + 1) % n):
                continue
            if float(lab(v[j])) <= tol:
                raise InvalidPolytope(
                    "label strictly positive at non-edge vertices",
                    f"label {i} at vertex {j}",
                )
    cen = v.mean(axis=0)
    for i, lab in enumerate(labels):
        if float(lab(cen)) <= 0.0:
            raise InvalidPolytope("labels strictly positive at centroid", f"label {i}")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_halfplanes(labels) -> LabelledPolytope2:
    """Build the labelled polygon {x : L_i(x) >= 0 for all i} from its labels.

    Vertices come out counterclockwise starting at the lexicographically
    smallest one; each edge is matched to the unique label vanishing on it and
    labels are stored unchanged (no rescaling).
    """
    labels = [lab if isinstance(lab, AffineMap2) else AffineMap2(*lab) for lab in labels]
    if len(labels) < 3:
        raise EmptyInterior(f"need at least 3 half-planes, got {len(labels)}")
    grads = [lab.gradient for lab in labels]
    for i, g in enumerate(grads):
        if np.hypot(*g) == 0.0:
            raise RedundantLabel(f"label {i} is constant")
    # boundedness: the inward normals must not fit in a closed half-plane
    angles = sorted(math.atan2(g[1], g[0]) for g in grads)
    gaps = [angles[(i + 1) % len(angles)] - angles[i] for i in range(len(angles) - 1)]
    gaps.append(2 * math.pi - (angles[-1] - angles[0]))
    if max(gaps) >= math.pi - 1e-12:
        raise UnboundedRegion("inward normals lie in a closed half-plane")

    pts = []
    for (i, li), (j, lj) in itertools.combinations(enumerate(labels), 2):
        det = li.c1 * lj.c2 - lj.c1 * li.c2
        norm = np.hypot(li.c1, li.c2) * np.hypot(lj.c1, lj.c2)
        if abs(det) <= 1e-14 * norm:
            continue
        x = (-li.c0 * lj.c2 + lj.c0 * li.c2) / det
        y = (-li.c1 * lj.c0 + lj.c1 * li.c0) / det
        pts.append((x, y))
    scale = max((abs(p[0]) + abs(p[1]) for p in pts), default=1.0) or 1.0
    feas = []
    for p in pts:
        if all(lab(p) >= -1e-9 * lab.gradient_norm * (1.0 + scale) for lab in labels):
            feas.append(p)
    # dedupe
    uniq: list[tuple[float, float]] = []
    for p in feas:
        if not any(np.hypot(p[0] - q[0], p[1] - q[1]) <= 1e-9 * (1.0 + scale) for q in uniq):
            uniq.append(p)
    if len(uniq) < 3:
        raise EmptyInterior(f"only {len(uniq)} feasible corner(s)")
    center = np.mean(uniq, axis=0)
    uniq.sort(key=lambda p: math.atan2(p[1] - center[1], p[0] - center[0]))
    start = min(range(len(uniq)), key=lambda i: (uniq[i][0], uniq[i][1]))
    verts = [uniq[(start + i) % len(uniq)] for i in range(len(uniq))]
    if _shoelace(np.asarray(verts)) <= 1e-18 * scale * scale:
        raise EmptyInterior("feasible region has zero area")

    n = len(verts)
    diam = max(np.hypot(a[0] - b[0], a[1] - b[1]) for a, b in itertools.combinations(verts, 2))
    edge_labels: list[AffineMap2] = []
    used = set()
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        match = None
        for j, lab in enumerate(labels):
            tol = 1e-9 * lab.gradient_norm * diam
            if abs(lab(a)) <= tol and abs(lab(b)) <= tol:
                if match is not None:
                    raise RedundantLabel(
                        f"labels {match} and {j} both vanish on edge {i}"
                    )
                match = j
        if match is None:
            raise EmptyInterior(f"no label vanishes on edge {i}")
        edge_labels.append(labels[match])
        used.add(match)
    unused = sorted(set(range(len(labels))) - used)
    if unused:
        raise RedundantLabel(f"label(s) {unused} vanish on no edge of the closure")
    return LabelledPolytope2(tuple(verts), tuple(edge_labels))


def hirzebruch_delzant(p: float, k: int) -> LabelledPolytope2:
    """The labelled trapezoid with vertices (0,0), (p,0), (p,(1-p)k), (0,k).

    The four labels are x1, x2, p - x1 and k(1 - x1) - x2, stored in the
    edge-matched order required by :class:`LabelledPolytope2`.
    """
    if not (0.0 < p < 1.0):
        raise ParameterOutOfRange(f"p must lie in (0, 1), got {p}")
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ParameterOutOfRange(f"k must be a positive integer, got {k}")
    p = float(p)
    k = int(k)
    verts = ((0.0, 0.0), (p, 0.0), (p, (1.0 - p) * k), (0.0, float(k)))
    labels = (
        AffineMap2(0.0, 0.0, 1.0),          # x2
        AffineMap2(p, -1.0, 0.0),           # p - x1
        AffineMap2(float(k), -float(k), -1.0),  # k(1 - x1) - x2
        AffineMap2(0.0, 1.0, 0.0),          # x1
    )
    return LabelledPolytope2(verts, labels)


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def min_over_vertices(P: LabelledPolytope2, f: AffineMap2) -> tuple[float, int]:
    """Minimum of an affine function over the vertices and the attaining index.

    Ties break to the lowest vertex index.  The function is positive on the
    whole polygon iff the returned value is positive.
    """
    vals = [float(f(v)) for v in P.vertices]
    idx = min(range(len(vals)), key=lambda i: (vals[i], i))
    return vals[idx], idx


def classify_quadrilateral(P: LabelledPolytope2) -> QuadType:
    """Classify a quadrilateral by its number of parallel opposite-edge pairs."""
    if P.num_vertices != 4:
        raise NotAQuadrilateral(f"polygon has {P.num_vertices} vertices")
    v = P.vertex_array
    parallel = 0
    for i in range(2):
        d1 = v[(i + 1) % 4] - v[i]
        d2 = v[(i + 3) % 4] - v[(i + 2) % 4]
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) <= PARALLEL_RTOL * np.hypot(*d1) * np.hypot(*d2):
            parallel += 1
    if parallel == 2:
        return QuadType.PARALLELOGRAM
    if parallel == 1:
        return QuadType.TRAPEZOID_NOT_PARALLELOGRAM
    return QuadType.GENERIC_QUADRILATERAL


def is_integral_delzant(P: LabelledPolytope2, tol: float = 1e-9) -> bool:
    """Advisory check: are all label gradients primitive integer vectors?"""
    for lab in P.labels:
        g = lab.gradient
        r = np.round(g)
        if np.max(np.abs(g - r)) > tol:
            return False
        a, b = int(abs(r[0])), int(abs(r[1]))
        if math.gcd(a, b) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# transformations
# ---------------------------------------------------------------------------


def translate_polytope(P: LabelledPolytope2, offset) -> LabelledPolytope2:
    """The polygon shifted by +offset, labels composed accordingly."""
    ox, oy = float(offset[0]), float(offset[1])
    verts = tuple((x + ox, y + oy) for x, y in P.vertices)
    labels = tuple(lab.translated((-ox, -oy)) for lab in P.labels)
    return LabelledPolytope2(verts, labels)


def apply_affine(P: LabelledPolytope2, A, t=(0.0, 0.0)) -> LabelledPolytope2:
    """Image of the polygon under x -> A x + t, labels by the inverse rule.

    Labels transform as L'(y) = L(A^{-1}(y - t)) so that primed labels vanish
    on the primed edges.  Orientation-reversing maps reverse the vertex order,
    so the edge/label correspondence is re-threaded.
    """
    A = np.asarray(A, dtype=float)
    t = np.asarray(t, dtype=float)
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    if det == 0.0:
        raise ParameterOutOfRange("affine map must be invertible")
    Ainv = np.linalg.inv(A)
    verts = [tuple(A @ np.asarray(v) + t) for v in P.vertices]

    def push(lab: AffineMap2) -> AffineMap2:
        g = Ainv.T @ lab.gradient
        c0 = lab.c0 - float(g @ t)
        return AffineMap2(c0, float(g[0]), float(g[1]))

    labels = [push(lab) for lab in P.labels]
    if det < 0.0:
        n = len(verts)
        verts = [verts[0]] + verts[:0:-1]
        labels = [labels[(n - 1 - i) % n] for i in range(n)]
    return LabelledPolytope2(tuple(verts), tuple(labels))


def clip_to_halfplane(P: LabelledPolytope2, ell: AffineMap2):
    """Clip the polygon against {ell >= 0}.

    Returns ``(vertices, pieces)`` where ``vertices`` is the clipped polygon
    in counterclockwise order (possibly empty) and ``pieces`` lists the
    retained parts of the original boundary as ``(a, b, label_index)``; the
    chord created by the clip carries no label and is excluded from
    ``pieces``.
    """
    v = P.vertex_array
    n = len(v)
    vals = np.array([float(ell(x)) for x in v])
    out_verts: list[np.ndarray] = []
    pieces: list[tuple[np.ndarray, np.ndarray, int]] = []
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        la, lb = vals[i], vals[(i + 1) % n]
        if la >= 0.0:
            out_verts.append(a)
        crossing = (la > 0.0 and lb < 0.0) or (la < 0.0 and lb > 0.0)
        if crossing:
            t = la / (la - lb)
            cut = a + t * (b - a)
            out_verts.append(cut)
            seg = (a, cut) if la > 0.0 else (cut, b)
            if np.hypot(*(seg[1] - seg[0])) > 0.0:
                pieces.append((seg[0], seg[1], i))
        elif la >= 0.0 and lb >= 0.0:
            if np.hypot(*(b - a)) > 0.0:
                pieces.append((a, b, i))
    return out_verts, pieces
