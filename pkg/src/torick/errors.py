"""Exception types raised across the toolkit."""


class TorickError(Exception):
    """Base class for all toolkit errors."""


class InvalidPolytope(TorickError):
    """A labelled polygon violates one of its construction invariants.

    ``invariant`` names the first violated invariant in the fixed
    validation order.
    """

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class UnboundedRegion(TorickError):
    """Half-plane intersection is unbounded."""


class EmptyInterior(TorickError):
    """Half-plane intersection has no interior."""


class RedundantLabel(TorickError):
    """A label vanishes on no edge of the region's closure."""


class ParameterOutOfRange(TorickError):
    """Constructor parameter outside its admissible range."""


class NotAQuadrilateral(TorickError):
    """Operation requires a polygon with exactly four vertices."""


class NonPositiveWeight(TorickError):
    """Weight function is not strictly positive on the polygon (vertex check)."""


class ToleranceNotReached(TorickError):
    """Adaptive quadrature exceeded the maximum refinement depth."""


class IllConditioned(TorickError):
    """Gram matrix condition number above the admissible threshold."""


class NotInterior(TorickError):
    """Evaluation point is not strictly inside the polygon."""


class SingularHessian(TorickError):
    """Hessian determinant below the representable floor."""


class StepTooLarge(TorickError):
    """Finite-difference stencil would cross the polygon boundary."""


class ZeroConstantTerm(TorickError):
    """Twist weight vanishes at the origin; the twist is undefined."""


class OriginNotInterior(TorickError):
    """The origin is not strictly inside the polygon to be twisted."""


class ParameterOutOfDomain(TorickError):
    """Family parameters outside the family's stated domain."""


class NegativeDiscriminant(TorickError):
    """Family discriminant is negative; no real branch exists."""


class VertexZero(TorickError):
    """Function vanishes at a vertex where a reciprocal is required."""


class NoConvergence(TorickError):
    """No Newton start converged to a root."""


class DegeneratePolytope(TorickError):
    """Polygon too degenerate for the requested solve."""


class ConditionANotMet(TorickError):
    """Extremal affine function is not constant to the required tolerance."""
