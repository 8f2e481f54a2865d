"""Real 3-vectors, skew-symmetric generators and rotations.

The reduced dynamics lives on the unit sphere and every constant-control arc
is an exact rotation, so this module provides the exact matrix exponential
(Rodrigues formula) rather than a numerical propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import DomainError


@dataclass(frozen=True)
class StateS2:
    """A point of the unit sphere, stored as its three real components."""

    psi1: float
    psi2: float
    psi3: float

    def __post_init__(self):
        sq = self.psi1 * self.psi1 + self.psi2 * self.psi2 + self.psi3 * self.psi3
        if not math.isfinite(sq) or abs(sq - 1.0) > tol.STRUCTURAL:
            raise DomainError(f"state is not on the unit sphere: |psi|^2 = {sq!r}")

    @classmethod
    def from_array(cls, arr) -> "StateS2":
        a = np.asarray(arr, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2, self.psi3])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.psi1, self.psi2, self.psi3)

    def in_octant(self, slack: float = tol.STRUCTURAL) -> bool:
        """True when all components are nonnegative up to ``slack``."""
        return min(self.psi1, self.psi2, self.psi3) >= -slack


#: source state (population in level one) and target state (level three)
SOURCE = StateS2(1.0, 0.0, 0.0)
TARGET = StateS2(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SkewGenerator:
    """Skew-symmetric 3x3 matrix stored by its three independent entries.

    The stored scalars (m1, m2, m3) sit at the (2,1), (3,2) and (3,1)
    positions respectively; antisymmetry is structural.
    """

    m1: float
    m2: float
    m3: float

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [0.0, -self.m1, -self.m3],
                [self.m1, 0.0, -self.m2],
                [self.m3, self.m2, 0.0],
            ]
        )

    def axis(self) -> np.ndarray:
        """Rotation axis scaled by the angular rate."""
        return np.array([self.m2, -self.m3, self.m1])

    @property
    def rate(self) -> float:
        """Angular speed of exp(t*G), i.e. the Euclidean norm of the axis."""
        return math.sqrt(self.m1 * self.m1 + self.m2 * self.m2 + self.m3 * self.m3)

    def apply(self, v) -> np.ndarray:
        x, y, z = float(v[0]), float(v[1]), float(v[2])
        return np.array(
            [
                -self.m1 * y - self.m3 * z,
                self.m1 * x - self.m2 * z,
                self.m3 * x + self.m2 * y,
            ]
        )


@dataclass(frozen=True)
class Rotation:
    """Orthogonal 3x3 matrix with determinant one."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.shape != (3, 3):
            raise DomainError("rotation matrix must be 3x3")
        if np.max(np.abs(m.T @ m - np.eye(3))) > tol.STRUCTURAL:
            raise DomainError("matrix is not orthogonal within tolerance")
        if abs(np.linalg.det(m) - 1.0) > tol.STRUCTURAL:
            raise DomainError("matrix determinant is not +1 within tolerance")

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.eye(3))

    def apply(self, state: StateS2) -> StateS2:
        return StateS2.from_array(self.matrix @ state.as_array())

    def apply_array(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def compose(self, other: "Rotation") -> "Rotation":
        """self after other (matrix product self @ other)."""
        return Rotation(self.matrix @ other.matrix)

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T.copy())


def generator(u1: float, u2: float, alpha: float) -> SkewGenerator:
    """Right-hand-side generator of the reduced dynamics for constant controls.

    Args:
        u1: coupling of levels one and two, in [-1, 1] for bang arcs.
        u2: coupling of levels two and three.
        alpha: nonisotropy factor scaling the second coupling.

    Returns:
        The skew matrix with (2,1)-entry ``u1`` and (3,2)-entry ``alpha*u2``.
    """
    return SkewGenerator(float(u1), float(alpha) * float(u2), 0.0)


def _exp_coeffs(rate: float, t: float) -> tuple[float, float]:
    """Coefficients (a, b) of exp(tG) = I + a*G + b*G^2 for |axis| = rate."""
    theta = rate * t
    th2 = theta * theta
    if abs(theta) < tol.ROTATION_SERIES_ANGLE:
        # series for sin(theta)/theta and (1-cos(theta))/theta^2 to avoid
        # cancellation at small angles
        a = t * (1.0 - th2 / 6.0 * (1.0 - th2 / 20.0))
        b = 0.5 * t * t * (1.0 - th2 / 12.0 * (1.0 - th2 / 30.0))
    else:
        a = math.sin(theta) / rate
        b = (1.0 - math.cos(theta)) / (rate * rate)
    return a, b


def rodrigues_exp(g: SkewGenerator, t: float) -> Rotation:
    """Exact matrix exponential exp(t*G) of a skew generator."""
    if not math.isfinite(t):
        raise DomainError("time must be finite")
    a, b = _exp_coeffs(g.rate, t)
    m = g.matrix()
    return Rotation(np.eye(3) + a * m + b * (m @ m))


def bracket(g1: SkewGenerator, g2: SkewGenerator) -> SkewGenerator:
    """Matrix commutator G1*G2 - G2*G1, returned as a skew generator."""
    c = g1.matrix() @ g2.matrix() - g2.matrix() @ g1.matrix()
    return SkewGenerator(float(c[1, 0]), float(c[2, 1]), float(c[2, 0]))
