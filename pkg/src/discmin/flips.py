"""Hinge measurements and the two combinatorial moves.

A hinge is an interior edge [a, b] together with the opposite vertices
x, y of its two triangles.  The quantity steering everything is the
adjacent angle sum

    sigma = angle(abx) + angle(aby) + angle(bax) + angle(bay)

(the four angles at the hinge endpoints; apex is the middle letter).
Since each triangle's angles sum to pi, sigma + angle(axb) + angle(ayb)
is exactly 2 pi, so sigma < pi forces the opposite angles to be large.
Flipping such a hinge, replacing triangles abx, aby by axy, bxy, never
increases area; ``HingeMeasurement.gain`` records the decrease.

The second move, ``reduce_fan``, cuts along an empty triangle: three
pairwise adjacent vertices spanning no face.  The region the cycle
encloses is deleted and the flat triangle put in its place, which
never increases area either (project the region onto the triangle's
plane).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryEdge,
    CycleBoundsBoundary,
    DegenerateTriangle,
    FlipForbidden,
    NotAViolation,
)
from .mesh import DiscComplex, Edge, PolyhedralDisc, Triangle, build_from_triangles, edge_key


# =====================================================================
# Measurement
# =====================================================================


@dataclass(frozen=True)
class HingeMeasurement:
    """Angles and flip gain of one hinge.

    ``angles`` holds (angle(abx), angle(aby), angle(bax), angle(bay));
    ``sigma`` is their sum.  ``gain`` is current area minus flipped
    area for the two triangles involved, so a nonnegative gain means
    the flip does not hurt.
    """

    edge: Edge
    opposite: tuple[int, int]
    angles: tuple[float, float, float, float]
    sigma: float
    gain: float


def _row_norm(v: np.ndarray) -> np.ndarray:
    return np.linalg.norm(v, axis=-1)


def _angle_rows(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    # Numerically stable for tiny and near-pi angles alike.
    return np.arctan2(_row_norm(np.cross(u, w)), np.einsum("...i,...i->...", u, w))


def _area_rows(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    return 0.5 * _row_norm(np.cross(p1 - p0, p2 - p0))


def bulk_hinges(a, b, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sigma and gain for stacked hinge coordinates.

    Each argument is an (n, 3) array; row i holds one hinge [a_i, b_i]
    with opposite vertices x_i, y_i.  Returns (sigma, gain) arrays.
    No degeneracy checking; intended for statistical sweeps.
    """
    a, b, x, y = (np.asarray(m, dtype=float) for m in (a, b, x, y))
    sigma = (
        _angle_rows(a - b, x - b)
        + _angle_rows(a - b, y - b)
        + _angle_rows(b - a, x - a)
        + _angle_rows(b - a, y - a)
    )
    gain = (
        _area_rows(a, b, x)
        + _area_rows(a, b, y)
        - _area_rows(a, x, y)
        - _area_rows(b, x, y)
    )
    return sigma, gain


def hinge_from_points(a, b, x, y) -> HingeMeasurement:
    """Measure the hinge [a, b] with opposite points x, y.

    Raises DegenerateTriangle if either current triangle has zero area
    or the hinge has zero length.  The flipped triangles may be
    degenerate; the gain is still defined.
    """
    a, b, x, y = (np.asarray(p, dtype=float) for p in (a, b, x, y))
    if _row_norm(b - a) == 0.0:
        raise DegenerateTriangle("hinge endpoints coincide")
    if _area_rows(a, b, x) == 0.0 or _area_rows(a, b, y) == 0.0:
        raise DegenerateTriangle("hinge triangle has zero area")
    angles = (
        float(_angle_rows(a - b, x - b)),
        float(_angle_rows(a - b, y - b)),
        float(_angle_rows(b - a, x - a)),
        float(_angle_rows(b - a, y - a)),
    )
    gain = float(
        _area_rows(a, b, x)
        + _area_rows(a, b, y)
        - _area_rows(a, x, y)
        - _area_rows(b, x, y)
    )
    return HingeMeasurement(
        edge=(0, 1),
        opposite=(2, 3),
        angles=angles,
        sigma=float(sum(angles)),
        gain=gain,
    )


def _hinge_vertices(disc: PolyhedralDisc, edge) -> tuple[int, int, int, int]:
    e = edge_key(*edge)
    cx = disc.complex
    if e not in cx.edge_faces:
        raise ValueError(f"{e} is not an edge of the complex")
    faces = cx.edge_faces[e]
    if len(faces) == 1:
        raise BoundaryEdge(f"edge {e} lies on the boundary")
    a, b = e
    x = next(v for v in cx.triangles[faces[0]] if v not in e)
    y = next(v for v in cx.triangles[faces[1]] if v not in e)
    return a, b, x, y


def measure_hinge(disc: PolyhedralDisc, edge) -> HingeMeasurement:
    """Measurement of an interior edge of ``disc``.

    Opposite vertices are reported in the order of the two face
    indices; sigma and gain do not depend on that order.
    """
    a, b, x, y = _hinge_vertices(disc, edge)
    p = disc.positions
    m = hinge_from_points(p[a], p[b], p[x], p[y])
    return HingeMeasurement(
        edge=(a, b), opposite=(x, y), angles=m.angles, sigma=m.sigma, gain=m.gain
    )


# =====================================================================
# Edge flip
# =====================================================================


@dataclass(frozen=True)
class FlipCheck:
    """Verdict of the combinatorial flip precondition."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def can_flip(disc: PolyhedralDisc, edge) -> FlipCheck:
    """Whether ``edge`` admits a flip: interior, and the opposite
    vertices not already joined by an edge (a flip would double it)."""
    e = edge_key(*edge)
    cx = disc.complex
    if e not in cx.edge_faces:
        raise ValueError(f"{e} is not an edge of the complex")
    if len(cx.edge_faces[e]) == 1:
        return FlipCheck(False, "BoundaryEdge")
    a, b = e
    x = next(v for v in cx.triangles[cx.edge_faces[e][0]] if v not in e)
    y = next(v for v in cx.triangles[cx.edge_faces[e][1]] if v not in e)
    if edge_key(x, y) in cx.edge_faces:
        return FlipCheck(False, "OppositeVerticesAdjacent")
    return FlipCheck(True, None)


def flip(disc: PolyhedralDisc, edge) -> PolyhedralDisc:
    """Replace the hinge triangles abx, aby by axy, bxy.

    The two new triangles occupy the old face slots, every other
    triangle is untouched, and the boundary cycle is preserved.

    Raises BoundaryEdge or FlipForbidden when the combinatorial
    precondition fails, DegenerateTriangle when the flipped geometry
    falls below the area floor.
    """
    check = can_flip(disc, edge)
    if not check:
        if check.reason == "BoundaryEdge":
            raise BoundaryEdge(f"cannot flip boundary edge {edge_key(*edge)}")
        raise FlipForbidden(f"flip of {edge_key(*edge)}: {check.reason}")
    e = edge_key(*edge)
    a, b = e
    cx = disc.complex
    i, j = cx.edge_faces[e]
    # The face traversing a -> b contributes x, the other one y; that
    # choice makes the replacements (x, a, y), (y, b, x) match the
    # orientation of the surrounding complex.
    ti = cx.triangles[i]

    def _traverses(t: Triangle) -> bool:
        return (a, b) in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))

    if _traverses(ti):
        forward, backward = i, j
    else:
        forward, backward = j, i
    x = next(v for v in cx.triangles[forward] if v not in e)
    y = next(v for v in cx.triangles[backward] if v not in e)
    new_tris = list(cx.triangles)
    new_tris[forward] = (x, a, y)
    new_tris[backward] = (y, b, x)
    new_complex = build_from_triangles(new_tris)
    if new_complex.boundary_cycle != cx.boundary_cycle:
        raise RuntimeError("flip changed the boundary cycle")
    return PolyhedralDisc(new_complex, disc.positions, disc.eps_deg)


def flat_convex_quad(a, b, x, y, tol: float = 1e-6) -> bool:
    """Whether the hinge quadrilateral a, x, b, y is coplanar and convex.

    Coplanarity compares the tetrahedron determinant against
    ``tol * L**3`` with L the largest pairwise distance; convexity
    requires every corner turn of the projected polygon to agree with
    the Newell normal up to ``-tol``.
    """
    pts = np.array([a, x, b, y], dtype=float)
    diffs = pts[:, None, :] - pts[None, :, :]
    scale = float(_row_norm(diffs).max())
    if scale == 0.0:
        return False
    det = float(np.linalg.det(np.stack([pts[2] - pts[0], pts[1] - pts[0], pts[3] - pts[0]])))
    if abs(det) > tol * scale**3:
        return False
    normal = np.zeros(3)
    for k in range(4):
        normal += np.cross(pts[k], pts[(k + 1) % 4])
    norm = float(_row_norm(normal))
    if norm == 0.0:
        return False
    normal /= norm
    for k in range(4):
        u = pts[(k + 1) % 4] - pts[k]
        w = pts[(k + 2) % 4] - pts[(k + 1) % 4]
        nu, nw = float(_row_norm(u)), float(_row_norm(w))
        if nu == 0.0 or nw == 0.0:
            return False
        if float(np.cross(u / nu, w / nw) @ normal) < -tol:
            return False
    return True


def flat_convex_check(disc: PolyhedralDisc, edge, tol: float = 1e-6) -> bool:
    """Apply :func:`flat_convex_quad` to a hinge of ``disc``."""
    a, b, x, y = _hinge_vertices(disc, edge)
    p = disc.positions
    return flat_convex_quad(p[a], p[b], p[x], p[y], tol=tol)


# =====================================================================
# Fan reduction
# =====================================================================


@dataclass(frozen=True)
class FanReduction:
    """Record of one empty-triangle cut.

    ``vertex_map`` sends surviving old vertex ids to their ids in the
    reduced complex (kept ids stay in ascending order).
    """

    triple: Triangle
    removed_triangles: int
    removed_vertices: int
    area_before: float
    area_after: float
    area_decrease: float
    vertex_map: dict[int, int]


def reduce_fan(disc: PolyhedralDisc, triple) -> tuple[PolyhedralDisc, FanReduction]:
    """Cut along the empty triangle ``triple``.

    The three cycle edges separate the disc; the bounded domain is the
    side whose boundary edges (if any) all belong to the cycle itself.
    It is replaced by the flat triangle on the cycle's vertices.  When
    the cycle is the entire boundary the bounded domain is the whole
    disc.  Surviving vertices are renumbered compactly, preserving
    their relative order.

    Raises
    ------
    NotAViolation
        ``triple`` is not an empty triangle of the complex.
    CycleBoundsBoundary
        No unique bounded domain exists.  Unreachable for genuine
        violations of a valid disc; kept as a defensive check.
    """
    t = tuple(int(v) for v in triple)
    if len(t) != 3 or len(set(t)) != 3:
        raise ValueError(f"{triple!r} is not a triple of distinct vertices")
    t = tuple(sorted(t))
    cx = disc.complex
    if max(t) >= cx.vertex_count:
        raise NotAViolation(f"{t} contains ids outside the complex")
    cycle_edges = [edge_key(t[0], t[1]), edge_key(t[0], t[2]), edge_key(t[1], t[2])]
    for e in cycle_edges:
        if e not in cx.edge_faces:
            raise NotAViolation(f"{t} is missing edge {e}")
    if frozenset(t) in {frozenset(tri) for tri in cx.triangles}:
        raise NotAViolation(f"{t} spans a face")

    cycle_boundary = {e for e in cycle_edges if len(cx.edge_faces[e]) == 1}
    area_before = disc.total_area()

    if len(cycle_boundary) == 3:
        # The cycle is the whole boundary; everything gets replaced.
        # Reusing the stored cycle keeps its direction.
        new_tris = [cx.boundary_cycle]
        keep = sorted(t)
        removed_faces = len(cx.triangles)
    else:
        cut = set(cycle_edges) - cycle_boundary
        adjacency: dict[int, list[int]] = {i: [] for i in range(len(cx.triangles))}
        for e, faces in cx.edge_faces.items():
            if len(faces) == 2 and e not in cut:
                adjacency[faces[0]].append(faces[1])
                adjacency[faces[1]].append(faces[0])
        component = [-1] * len(cx.triangles)
        n_comp = 0
        for seed in range(len(cx.triangles)):
            if component[seed] != -1:
                continue
            stack = [seed]
            component[seed] = n_comp
            while stack:
                f = stack.pop()
                for g in adjacency[f]:
                    if component[g] == -1:
                        component[g] = n_comp
                        stack.append(g)
            n_comp += 1
        # Cutting the interior cycle edges separates the disc.  The
        # outside may fall apart into several pieces (some meet the
        # cycle only at vertices), but each keeps a boundary edge that
        # is not on the cycle; only the bounded domain carries none.
        carried: list[set[Edge]] = [set() for _ in range(n_comp)]
        for e, faces in cx.edge_faces.items():
            if len(faces) == 1:
                carried[component[faces[0]]].add(e)
        inner = [c for c in range(n_comp) if carried[c] <= cycle_boundary]
        if len(inner) != 1 or n_comp == 1:
            raise CycleBoundsBoundary(
                f"cycle {t} does not bound a unique sub-disc "
                f"({len(inner)} candidates among {n_comp} components)"
            )
        enclosed = inner[0]
        new_tris = [
            tri for i, tri in enumerate(cx.triangles) if component[i] != enclosed
        ]
        removed_faces = len(cx.triangles) - len(new_tris)
        new_tris.append(t)
        keep = sorted({v for tri in new_tris for v in tri})

    vertex_map = {old: new for new, old in enumerate(keep)}
    renumbered = [tuple(vertex_map[v] for v in tri) for tri in new_tris]
    new_complex = build_from_triangles(renumbered)
    new_disc = PolyhedralDisc(new_complex, disc.positions[keep], disc.eps_deg)

    area_after = new_disc.total_area()
    decrease = area_before - area_after
    # Replacing a region by the flat triangle over its boundary cannot
    # raise area (orthogonal projection onto the triangle's plane).
    if decrease < -1e-9 * max(area_before, 1.0):
        raise RuntimeError(f"fan reduction along {t} increased area by {-decrease}")

    record = FanReduction(
        triple=t,
        removed_triangles=removed_faces,
        removed_vertices=cx.vertex_count - len(keep),
        area_before=area_before,
        area_after=area_after,
        area_decrease=decrease,
        vertex_map=vertex_map,
    )
    return new_disc, record
