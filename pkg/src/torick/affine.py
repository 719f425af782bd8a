"""Affine functions of two variables, the basic scalar objects of the toolkit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AffineMap2:
    """The affine function x -> c0 + c1*x1 + c2*x2 on the plane.

    Instances are immutable and callable on a single point ``(x1, x2)`` or on
    an ``(N, 2)`` array of points.
    """

    c0: float
    c1: float
    c2: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.c0 + self.c1 * x[..., 0] + self.c2 * x[..., 1]

    @property
    def gradient(self) -> np.ndarray:
        return np.array([self.c1, self.c2])

    @property
    def gradient_norm(self) -> float:
        return float(np.hypot(self.c1, self.c2))

    def is_constant(self, rel_tol: float = 0.0) -> bool:
        scale = max(abs(self.c0), abs(self.c1), abs(self.c2))
        return self.gradient_norm <= rel_tol * scale

    def translated(self, offset) -> "AffineMap2":
        """The map y -> f(y + offset)."""
        ox, oy = float(offset[0]), float(offset[1])
        return AffineMap2(self.c0 + self.c1 * ox + self.c2 * oy, self.c1, self.c2)

    def scaled(self, factor: float) -> "AffineMap2":
        return AffineMap2(factor * self.c0, factor * self.c1, factor * self.c2)

    def coefficients(self) -> tuple[float, float, float]:
        return (self.c0, self.c1, self.c2)

    @staticmethod
    def constant(value: float) -> "AffineMap2":
        return AffineMap2(float(value), 0.0, 0.0)

    def to_dict(self) -> dict:
        return {"c0": self.c0, "c1": self.c1, "c2": self.c2}

    @staticmethod
    def from_dict(d) -> "AffineMap2":
        return AffineMap2(float(d["c0"]), float(d["c1"]), float(d["c2"]))


ONE = AffineMap2(1.0, 0.0, 0.0)
