"""Shared geometry builders and independent oracles.

The oracles recompute quantities through routes deliberately different
from the library's (textbook Heron vs the sorted Kahan form, arccos vs
atan2, shoelace vs cross products) so that agreement means something.
"""

import math

import numpy as np

from discmin import PolyhedralDisc, build_from_triangles


# ---------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------


def heron(a: float, b: float, c: float) -> float:
    s = 0.5 * (a + b + c)
    return math.sqrt(max(0.0, s * (s - a) * (s - b) * (s - c)))


def shoelace(points) -> float:
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def angle_between(u, w) -> float:
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    c = float(np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w)))
    return math.acos(min(1.0, max(-1.0, c)))


def cross_area(p0, p1, p2) -> float:
    p0, p1, p2 = (np.asarray(p, dtype=float) for p in (p0, p1, p2))
    return 0.5 * float(np.linalg.norm(np.cross(p1 - p0, p2 - p0)))


def random_rotation(rng) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


# ---------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------


def regular_polygon(m: int, radius: float = 1.0, z: float = 0.0) -> np.ndarray:
    th = 2.0 * np.pi * np.arange(m) / m
    return np.column_stack(
        [radius * np.cos(th), radius * np.sin(th), np.full(m, z)]
    )


def fan_disc(m: int = 12, apex=(0.0, 0.0, 0.5), radius: float = 1.0) -> PolyhedralDisc:
    """Fan over a regular m-gon rim with one interior apex (id m)."""
    positions = np.vstack([regular_polygon(m, radius), np.asarray(apex, float)])
    cx = build_from_triangles([(i, (i + 1) % m, m) for i in range(m)])
    return PolyhedralDisc(cx, positions)


def hinge_disc(a, b, x, y) -> PolyhedralDisc:
    """Two triangles abx, aby sharing the interior edge (0, 1)."""
    positions = np.array([a, b, x, y], dtype=float)
    cx = build_from_triangles([(0, 1, 2), (1, 0, 3)])
    return PolyhedralDisc(cx, positions)


def hexagon_with_violation(lift: float = 0.5) -> PolyhedralDisc:
    """Hexagon whose chords (0,2),(2,4),(4,0) form an empty triangle
    around a lifted center vertex 6."""
    tris = [(0, 1, 2), (2, 3, 4), (4, 5, 0), (0, 2, 6), (2, 4, 6), (4, 0, 6)]
    positions = np.vstack([regular_polygon(6), [[0.0, 0.0, lift]]])
    return PolyhedralDisc(build_from_triangles(tris), positions)


def tetra_cap(z: float = 0.7) -> PolyhedralDisc:
    """Triangle rim subdivided by one interior vertex at height z; the
    rim itself is the whole-boundary empty triangle (0, 1, 2)."""
    positions = np.array(
        [[0, 0, 0], [1, 0, 0], [0.5, 1, 0], [0.5, 1 / 3, z]], dtype=float
    )
    cx = build_from_triangles([(0, 1, 3), (1, 2, 3), (2, 0, 3)])
    return PolyhedralDisc(cx, positions)


def double_interior_disc(lift: float = 0.3) -> PolyhedralDisc:
    """Hexagon fan whose triangle (0, 1, 6) is subdivided by vertex 7.

    Has two interior vertices (6, 7) and one lobe-style empty triangle
    (0, 1, 6) whose cycle contains the boundary edge (0, 1).
    """
    tris = [
        (0, 1, 7),
        (1, 6, 7),
        (6, 0, 7),
        (1, 2, 6),
        (2, 3, 6),
        (3, 4, 6),
        (4, 5, 6),
        (5, 0, 6),
    ]
    positions = np.zeros((8, 3))
    positions[:6] = regular_polygon(6)
    positions[6] = [0.0, 0.0, lift]
    positions[7] = (positions[0] + positions[1] + positions[6]) / 3.0
    positions[7, 2] += 0.2
    return PolyhedralDisc(build_from_triangles(tris), positions)
