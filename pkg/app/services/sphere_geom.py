# app/services/sphere_geom.py
"""
Spherical geometry of the B3 simplex and of piecewise-geodesic paths
on the unit 2-sphere. Lengths are radians on the unit sphere.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.core.config import ANALYTIC_TOL, GEOMETRIC_TOL
from app.core.errors import DegenerateTriangleError, EmptyPathError, NonUnitVectorError


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > GEOMETRIC_TOL:
            raise NonUnitVectorError(
                f"Point ({self.x}, {self.y}, {self.z}) has norm {norm}, expected 1"
            )

    @classmethod
    def from_vector(cls, vector) -> "SpherePoint":
        """Normalize any nonzero 3-vector onto the sphere"""
        arr = np.asarray(vector, dtype=float)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise NonUnitVectorError("Cannot place the zero vector on the sphere")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: "SpherePoint") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z


@dataclass(frozen=True)
class SimplexShape:
    """Angles at the three vertex types and lengths of the opposite edges"""

    angle_s1: float
    angle_s2: float
    angle_s3: float
    len_s1: float  # alpha
    len_s2: float  # beta
    len_s3: float  # delta

    def angle_at(self, vertex_type: int) -> float:
        return (self.angle_s1, self.angle_s2, self.angle_s3)[vertex_type - 1]

    def edge_length(self, edge_type: int) -> float:
        return (self.len_s1, self.len_s2, self.len_s3)[edge_type - 1]

    @property
    def alpha(self) -> float:
        return self.len_s1

    @property
    def beta(self) -> float:
        return self.len_s2

    @property
    def delta(self) -> float:
        return self.len_s3


def _clamp(value: float) -> float:
    return max(-1.0, min(1.0, value))


def _check_angles(A: float, B: float, C: float) -> None:
    if A + B + C <= math.pi:
        raise DegenerateTriangleError(
            f"Angles {A}, {B}, {C} sum to {A + B + C} <= pi; not a spherical triangle"
        )


def side_from_angles(A: float, B: float, C: float) -> float:
    """Side opposite angle A, by the spherical law of cosines for angles"""
    _check_angles(A, B, C)
    cos_a = (math.cos(A) + math.cos(B) * math.cos(C)) / (math.sin(B) * math.sin(C))
    return math.acos(_clamp(cos_a))


def b3_constants() -> SimplexShape:
    return SimplexShape(
        angle_s1=math.pi / 4,
        angle_s2=math.pi / 2,
        angle_s3=math.pi / 3,
        len_s1=math.acos(math.sqrt(2) / math.sqrt(3)),
        len_s2=math.acos(1 / math.sqrt(3)),
        len_s3=math.acos(1 / math.sqrt(2)),
    )


def shape_from_angles(A: float, B: float, C: float) -> SimplexShape:
    """Solve all three sides of the triangle with angles A, B, C"""
    return SimplexShape(
        angle_s1=A,
        angle_s2=B,
        angle_s3=C,
        len_s1=side_from_angles(A, B, C),
        len_s2=side_from_angles(B, C, A),
        len_s3=side_from_angles(C, A, B),
    )


def geodesic_distance(p: SpherePoint, q: SpherePoint) -> float:
    return math.acos(_clamp(p.dot(q)))


def triangle_area(A: float, B: float, C: float) -> float:
    """Spherical excess"""
    _check_angles(A, B, C)
    return A + B + C - math.pi


def path_length(points: Sequence[SpherePoint]) -> float:
    if len(points) < 2:
        raise EmptyPathError(f"path_length needs at least two points, got {len(points)}")
    return sum(geodesic_distance(p, q) for p, q in zip(points, points[1:]))


def spherical_angle(at: SpherePoint, p: SpherePoint, q: SpherePoint) -> float:
    """Angle at `at` between the geodesics towards p and q"""
    a = at.as_array()
    tp = p.as_array() - np.dot(p.as_array(), a) * a
    tq = q.as_array() - np.dot(q.as_array(), a) * a
    np_ = np.linalg.norm(tp)
    nq = np.linalg.norm(tq)
    if np_ < ANALYTIC_TOL or nq < ANALYTIC_TOL:
        raise DegenerateTriangleError("Angle undefined at a point equal or antipodal to an endpoint")
    return math.acos(_clamp(float(np.dot(tp, tq) / (np_ * nq))))
