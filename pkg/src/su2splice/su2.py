"""Unit quaternion arithmetic for SU(2).

Elements are stored as ``w + x i + y j + z k`` and renormalized after every
product.  The pillowcase convention ``e^{theta K}`` (``K`` a unit imaginary
quaternion) is exposed through :func:`exp_axis`; :func:`from_axis_angle`
uses the rotation-angle convention, so ``from_axis_angle(K, 2*theta)`` equals
``exp_axis(K, theta)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

CENTRAL_TOL = 1e-9
AXIS_TOL = 1e-9
NORM_TOL = 1e-9


class StabilizerType(enum.Enum):
    """Stabilizer of a set of elements under conjugation."""

    FULL = "Full"      # all central, stabilizer SU(2)
    CIRCLE = "Circle"  # common axis, stabilizer U(1)
    CENTER = "Center"  # stabilizer {+-1}

    @property
    def lie_dim(self) -> int:
        return {"Full": 3, "Circle": 1, "Center": 0}[self.value]


@dataclass(frozen=True)
class GroupElement:
    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n - 1.0) > 1e-6:
            raise ValueError(f"not a unit quaternion (norm^2 = {n!r})")

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def _normalized(cls, w, x, y, z) -> GroupElement:
        n = math.sqrt(w * w + x * x + y * y + z * z)
        return cls(w / n, x / n, y / n, z / n)

    def __mul__(self, other: GroupElement) -> GroupElement:
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return GroupElement._normalized(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> GroupElement:
        return GroupElement(self.w, -self.x, -self.y, -self.z)

    def __pow__(self, n: int) -> GroupElement:
        if n == 1:
            return self
        if n == -1:
            return self.inverse()
        if n == 0:
            return GroupElement.identity()
        # polar form keeps long powers accurate: (e^{tK})^n = e^{ntK}
        theta, axis = self.polar()
        return exp_axis(axis, n * theta)

    @property
    def imag(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def is_central(self, tol: float = CENTRAL_TOL) -> bool:
        return float(np.linalg.norm(self.imag)) < tol

    def polar(self) -> tuple[float, np.ndarray]:
        """Return ``(theta, K)`` with ``self = e^{theta K}``, ``theta`` in [0, pi].

        For central elements the axis is arbitrary and ``(1, 0, 0)`` is used.
        """
        s = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        theta = math.atan2(s, self.w)
        if s < 1e-15:
            return theta, np.array([1.0, 0.0, 0.0])
        return theta, np.array([self.x / s, self.y / s, self.z / s])

    def distance(self, other: GroupElement) -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))

    def trace(self) -> float:
        return 2.0 * self.w


def exp_axis(axis: Sequence[float], theta: float) -> GroupElement:
    """``e^{theta K} = cos(theta) + sin(theta) K`` for a unit vector ``K``."""
    a = np.asarray(axis, dtype=float)
    s = math.sin(theta)
    return GroupElement._normalized(math.cos(theta), s * a[0], s * a[1], s * a[2])


def from_axis_angle(axis: Sequence[float], angle: float) -> GroupElement:
    """Rotation by ``angle`` about ``axis``: ``cos(angle/2) + sin(angle/2) axis``."""
    a = np.asarray(axis, dtype=float)
    if a.shape != (3,) or abs(float(np.linalg.norm(a)) - 1.0) > NORM_TOL:
        raise ValueError(f"axis must be a unit 3-vector, got {axis!r}")
    return exp_axis(a, angle / 2.0)


def evaluate_word(word, assignment: Sequence[GroupElement]) -> GroupElement:
    """Multiply out ``word`` (pairs ``(generator, exponent)``) left to right."""
    letters = getattr(word, "letters", word)
    result = GroupElement.identity()
    for gen, exp in letters:
        if not 0 <= gen < len(assignment):
            raise IndexError(f"generator {gen} not in assignment of length {len(assignment)}")
        result = result * assignment[gen] ** exp
    return result


def stabilizer_type(elements: Iterable[GroupElement]) -> StabilizerType:
    elements = list(elements)
    if not elements:
        raise ValueError("stabilizer_type needs at least one element")
    axes = [g.polar()[1] for g in elements if not g.is_central()]
    if not axes:
        return StabilizerType.FULL
    first = axes[0]
    for other in axes[1:]:
        if np.linalg.norm(np.cross(first, other)) > AXIS_TOL:
            return StabilizerType.CENTER
    return StabilizerType.CIRCLE


def adjoint_matrix(g: GroupElement) -> np.ndarray:
    """Matrix of ``v -> g v g^{-1}`` on the imaginary quaternions."""
    w, x, y, z = g.w, g.x, g.y, g.z
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def conjugate(g: GroupElement, h: GroupElement) -> GroupElement:
    """``g h g^{-1}``."""
    return g * h * g.inverse()


def rotation_taking(a: Sequence[float], b: Sequence[float]) -> GroupElement:
    """Unit quaternion ``g`` whose adjoint action sends unit vector ``a`` to ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = float(np.dot(a, b))
    if c < -1 + 1e-12:
        # antipodal: half turn about any axis perpendicular to a
        perp = np.cross(a, [1.0, 0.0, 0.0])
        if np.linalg.norm(perp) < 1e-6:
            perp = np.cross(a, [0.0, 1.0, 0.0])
        perp /= np.linalg.norm(perp)
        return GroupElement(0.0, *perp)
    v = np.cross(a, b)
    return GroupElement._normalized(1.0 + c, v[0], v[1], v[2])


def random_element(rng: np.random.Generator) -> GroupElement:
    q = rng.normal(size=4)
    return GroupElement._normalized(*q)
