"""File formats and built-in scenarios.

The OBJ support covers the strict subset needed here: ``v`` lines with
three coordinates, ``f`` lines with three bare 1-based indices, blank
lines and ``#`` comments.  Writing uses 17 significant digits so a
save/load round trip reproduces positions bit for bit.

``make_tent`` builds the scenario separating the two kinds of
minimizer.  The rim alternates between a raised inner collar (even
vertices, radius ``ridge_skew``, height ``height``) and a ground
hexagon (odd vertices, radius 1).  Spanned by a fan from a center
apex, the apex settles at a non-saddle point it cannot leave without
retriangulating; the chord disc spans the same rim with ten triangles,
no interior vertex at all, and strictly less area.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateParameters, DisconnectedComplex, ParseError
from .mesh import PolyhedralDisc, build_from_triangles
from .optimize import OptimizationTrace, OptimizerConfig, minimize
from .saddle import VertexVerdict

_INDEX_RE = re.compile(r"[0-9]+\Z")


def _tokens_with_columns(raw: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", raw)]


def loads_obj(text: str) -> PolyhedralDisc:
    """Parse an OBJ string into a disc.

    Raises ParseError for anything outside the supported subset, the
    topology errors for triangle lists that do not describe a disc,
    and DegenerateTriangle for degenerate geometry.
    """
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    face_lines: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokens_with_columns(raw)
        if not tokens or tokens[0][0].startswith("#"):
            continue
        head, head_col = tokens[0]
        if head == "v":
            if len(tokens) != 4:
                raise ParseError(
                    f"vertex line has {len(tokens) - 1} fields, expected 3", number, head_col
                )
            coords = []
            for tok, col in tokens[1:]:
                try:
                    coords.append(float(tok))
                except ValueError:
                    raise ParseError(f"bad coordinate {tok!r}", number, col) from None
            vertices.append(tuple(coords))
        elif head == "f":
            if len(tokens) != 4:
                raise ParseError(
                    f"face line has {len(tokens) - 1} fields, expected 3", number, head_col
                )
            ids = []
            for tok, col in tokens[1:]:
                if not _INDEX_RE.match(tok):
                    raise ParseError(f"bad vertex index {tok!r}", number, col)
                i = int(tok)
                if i < 1:
                    raise ParseError("vertex indices are 1-based", number, col)
                ids.append(i - 1)
            faces.append(tuple(ids))
            face_lines.append(number)
        else:
            raise ParseError(f"unsupported directive {head!r}", number, head_col)
    for tri, number in zip(faces, face_lines):
        if max(tri) >= len(vertices):
            raise ParseError(
                f"face references vertex {max(tri) + 1} of {len(vertices)}", number
            )
    if not faces:
        raise ParseError("no faces in file", max(1, text.count("\n") + 1))
    used_count = max(max(tri) for tri in faces) + 1
    if used_count < len(vertices):
        raise DisconnectedComplex(
            f"{len(vertices) - used_count} trailing vertices appear in no face"
        )
    complex_ = build_from_triangles(faces)
    return PolyhedralDisc(complex_, np.array(vertices, dtype=float))


def load_obj(path) -> PolyhedralDisc:
    return loads_obj(Path(path).read_text())


def dumps_obj(disc: PolyhedralDisc) -> str:
    lines = []
    for x, y, z in disc.positions:
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for a, b, c in disc.complex.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + "\n"


def save_obj(disc: PolyhedralDisc, path) -> None:
    Path(path).write_text(dumps_obj(disc))


# =====================================================================
# Scenarios
# =====================================================================


@dataclass(frozen=True, eq=False)
class TentScenario:
    """Fan and chord discs over the same tent rim, both optimized.

    ``apex_verdict`` is the cutting-plane verdict at the fan's apex
    after its flip-free optimization; the scenario guarantees it is
    non-saddle and that ``chord_area`` undercuts ``fan_area``.
    """

    height: float
    ridge_skew: float
    boundary: np.ndarray
    fan_disc: PolyhedralDisc
    chord_disc: PolyhedralDisc
    fan_optimized: PolyhedralDisc
    chord_optimized: PolyhedralDisc
    fan_trace: OptimizationTrace
    chord_trace: OptimizationTrace
    fan_area: float
    chord_area: float
    area_gap: float
    apex_verdict: VertexVerdict


def make_tent(height: float = 1.25, ridge_skew: float = 0.25, seed: int = 0) -> TentScenario:
    """Build and optimize the tent scenario.

    Raises DegenerateParameters when the inputs are out of range or
    fail either postcondition: the fan apex must come to rest at a
    non-saddle point, and the chord disc must beat the optimized fan's
    area by more than a relative 1e-6.
    """
    if not (np.isfinite(height) and height > 0.0):
        raise DegenerateParameters(f"height must be positive, got {height}")
    if not (np.isfinite(ridge_skew) and 0.0 < ridge_skew < 1.0):
        raise DegenerateParameters(f"ridge_skew must lie in (0, 1), got {ridge_skew}")

    k = np.arange(12)
    theta = np.pi * k / 6.0
    radius = np.where(k % 2 == 0, ridge_skew, 1.0)
    z = np.where(k % 2 == 0, height, 0.0)
    rim = np.stack([radius * np.cos(theta), radius * np.sin(theta), z], axis=1)

    apex = np.array([0.0, 0.0, 1.5 * height])
    fan_disc = PolyhedralDisc(
        build_from_triangles([(i, (i + 1) % 12, 12) for i in range(12)]),
        np.vstack([rim, apex]),
    )
    skirt = [(2 * i, 2 * i + 1, (2 * i + 2) % 12) for i in range(6)]
    cap = [(0, 2, 4), (0, 4, 6), (0, 6, 8), (0, 8, 10)]
    chord_disc = PolyhedralDisc(build_from_triangles(skirt + cap), rim)

    # The fan run keeps its combinatorics: the apex alone moves.
    fan_config = OptimizerConfig(
        enable_flips=False, enable_reductions=False, rng_seed=seed
    )
    fan_optimized, fan_trace = minimize(fan_disc, fan_config)
    chord_optimized, chord_trace = minimize(chord_disc, OptimizerConfig(rng_seed=seed))
    if not (fan_trace.converged and chord_trace.converged):
        raise DegenerateParameters("tent optimization failed to converge")

    apex_verdict = next(
        v for v in fan_trace.certificate.verdicts if v.vertex == 12
    )
    if apex_verdict.is_saddle:
        raise DegenerateParameters(
            "fan apex settles at a saddle; the tent needs a pinned apex"
        )
    fan_area = fan_optimized.total_area()
    chord_area = chord_optimized.total_area()
    gap = fan_area - chord_area
    if gap <= 1e-6 * fan_area:
        raise DegenerateParameters(
            f"chord disc does not beat the fan (gap {gap}, fan area {fan_area})"
        )
    return TentScenario(
        height=height,
        ridge_skew=ridge_skew,
        boundary=rim,
        fan_disc=fan_disc,
        chord_disc=chord_disc,
        fan_optimized=fan_optimized,
        chord_optimized=chord_optimized,
        fan_trace=fan_trace,
        chord_trace=chord_trace,
        fan_area=fan_area,
        chord_area=chord_area,
        area_gap=gap,
        apex_verdict=apex_verdict,
    )


def random_instance(m: int, nonplanarity: float = 0.3, seed: int = 0) -> PolyhedralDisc:
    """Random fan over a wobbly m-gon rim: radii in [0.6, 1.4], heights
    in [-nonplanarity, nonplanarity], apex at the rim centroid."""
    if m < 3:
        raise ValueError(f"need at least 3 boundary vertices, got {m}")
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(m) / m
    radii = rng.uniform(0.6, 1.4, m)
    z = nonplanarity * rng.uniform(-1.0, 1.0, m)
    rim = np.stack([radii * np.cos(theta), radii * np.sin(theta), z], axis=1)
    positions = np.vstack([rim, rim.mean(axis=0)])
    triangles = [(i, (i + 1) % m, m) for i in range(m)]
    return PolyhedralDisc(build_from_triangles(triangles), positions)
