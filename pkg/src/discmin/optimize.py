"""The area minimization loop.

Each outer iteration runs three passes:

1. fan reductions: cut along empty triangles while any can be cut;
2. flips: flip hinges whose adjacent angle sum is below pi, first
   eligible edge in sorted order, rescanning after every flip;
3. vertex sweep: for every interior vertex in ascending order, descend
   along the cutting plane when one exists, otherwise along the area
   gradient, with backtracking line search in both cases.

The loop exits when an iteration decreases total area by less than
``eps_area`` (or the iteration cap is hit); it *converged* when that
final iteration also performed no combinatorial moves.  An interior
vertex is jittered once before the first iteration to knock the input
off razor-edge symmetric configurations; the amplitude is relative to
the disc diameter and the generator is seeded, so runs are exactly
reproducible.

Why a stationary sweep certifies as saddle: the derivative of area
with respect to one star edge length is l/2 (cot t1 + cot t2) with
t1, t2 the angles opposite the edge, which is nonnegative exactly when
the hinge sum sigma is at least pi.  Hinges with sigma below pi get
flipped away (or expose an empty triangle and get cut), and moving a
non-saddle vertex along its cutting direction shortens every star edge
at once, so while any incident hinge has sigma strictly above pi the
move strictly decreases area.  Stalling while non-saddle therefore
requires every incident hinge to sit at sigma = pi simultaneously,
which the jitter makes vanishingly unlikely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BudgetExceeded,
    CycleBoundsBoundary,
    DegenerateTriangle,
    DegenerationBlocked,
    NotAViolation,
    NotCuttable,
)
from .flips import FanReduction, can_flip, flip, measure_hinge, reduce_fan
from .mesh import PolyhedralDisc, edge_key
from .saddle import SaddleCertificate, certify_saddle, cutting_direction


# =====================================================================
# Configuration
# =====================================================================


@dataclass(frozen=True)
class LineSearch:
    """Backtracking schedule: start at ``initial_step`` times the safe
    step scale, multiply by ``shrink`` on rejection."""

    initial_step: float = 0.5
    shrink: float = 0.5
    max_backtracks: int = 30


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of :func:`minimize`.

    ``eps_area`` of None resolves to ``1e-12 * diameter**2`` of the
    input disc.  ``triangle_budget`` rejects oversized inputs up
    front; no move ever increases the triangle count.
    """

    triangle_budget: Optional[int] = None
    eps_flip: float = 1e-9
    eps_saddle: float = 1e-7
    eps_area: Optional[float] = None
    max_outer_iterations: int = 10000
    line_search: LineSearch = LineSearch()
    jitter_amplitude: float = 1e-9
    rng_seed: int = 0
    enable_flips: bool = True
    enable_reductions: bool = True

    _SCALARS = (
        "triangle_budget",
        "eps_flip",
        "eps_saddle",
        "eps_area",
        "max_outer_iterations",
        "jitter_amplitude",
        "enable_flips",
        "enable_reductions",
    )

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        """Build from a JSON-style dict; unknown keys are an error.

        Recognized keys: the scalar field names, ``seed``, and
        ``line_search`` with subkeys step/shrink/max_backtracks.
        """
        data = dict(data)
        kwargs = {}
        ls = data.pop("line_search", None)
        if ls is not None:
            unknown = set(ls) - {"step", "shrink", "max_backtracks"}
            if unknown:
                raise ValueError(f"unknown line_search keys: {sorted(unknown)}")
            kwargs["line_search"] = LineSearch(
                initial_step=ls.get("step", LineSearch.initial_step),
                shrink=ls.get("shrink", LineSearch.shrink),
                max_backtracks=ls.get("max_backtracks", LineSearch.max_backtracks),
            )
        if "seed" in data:
            kwargs["rng_seed"] = int(data.pop("seed"))
        for key in cls._SCALARS:
            if key in data:
                kwargs[key] = data.pop(key)
        if data:
            raise ValueError(f"unknown config keys: {sorted(data)}")
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "triangle_budget": self.triangle_budget,
            "eps_flip": self.eps_flip,
            "eps_saddle": self.eps_saddle,
            "eps_area": self.eps_area,
            "max_outer_iterations": self.max_outer_iterations,
            "line_search": {
                "step": self.line_search.initial_step,
                "shrink": self.line_search.shrink,
                "max_backtracks": self.line_search.max_backtracks,
            },
            "jitter_amplitude": self.jitter_amplitude,
            "seed": self.rng_seed,
            "enable_flips": self.enable_flips,
            "enable_reductions": self.enable_reductions,
        }


# =====================================================================
# Records
# =====================================================================


@dataclass(frozen=True)
class FlipRecord:
    edge: tuple[int, int]
    sigma: float
    area_decrease: float


@dataclass(frozen=True)
class MoveRecord:
    """One vertex update.  ``mode`` is "cut" or "gradient"; ``blocked``
    is None for an applied move, or the reason it was abandoned."""

    vertex: int
    displacement: tuple[float, float, float]
    area_decrease: float
    mode: str
    blocked: Optional[str] = None


@dataclass(frozen=True)
class IterationRecord:
    index: int
    area: float
    flips: tuple[FlipRecord, ...]
    reductions: tuple[FanReduction, ...]
    moves: tuple[MoveRecord, ...]
    triangle_count: int
    flip_cap_exceeded: bool
    unresolved_violations: int


@dataclass(frozen=True, eq=False)
class OptimizationTrace:
    iterations: tuple[IterationRecord, ...]
    converged: bool
    initial_area: float
    final_area: float
    eps_area: float
    seed: int
    certificate: SaddleCertificate

    def csv_text(self) -> str:
        """Per-iteration counters, one row per outer iteration."""
        lines = ["iter,area,flips,reductions,moves,triangles"]
        for rec in self.iterations:
            lines.append(
                f"{rec.index},{rec.area:.17g},{len(rec.flips)},"
                f"{len(rec.reductions)},{len(rec.moves)},{rec.triangle_count}"
            )
        return "\n".join(lines) + "\n"

    def summary_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": len(self.iterations),
            "initial_area": self.initial_area,
            "final_area": self.final_area,
            "flips": sum(len(r.flips) for r in self.iterations),
            "reductions": sum(len(r.reductions) for r in self.iterations),
            "moves": sum(len(r.moves) for r in self.iterations),
            "saddle": self.certificate.saddle,
            "eps_area": self.eps_area,
            "seed": self.seed,
        }


# =====================================================================
# Passes
# =====================================================================


@dataclass(frozen=True, eq=False)
class FlipPassResult:
    disc: PolyhedralDisc
    flips: tuple[FlipRecord, ...]
    cap_exceeded: bool


def flip_pass(
    disc: PolyhedralDisc, eps_flip: float = 1e-9, cap: Optional[int] = None
) -> FlipPassResult:
    """Flip hinges with sigma < pi - eps_flip until none remain.

    Scans interior edges in sorted order and restarts after every
    flip.  Each flip strictly decreases area, so the pass terminates;
    ``cap`` (default 100 edges' worth) is a safety stop.  Flips whose
    result would degenerate a triangle are skipped.
    """
    if cap is None:
        cap = 100 * len(disc.complex.edges)
    records: list[FlipRecord] = []
    cap_exceeded = False
    while True:
        if len(records) >= cap:
            cap_exceeded = True
            break
        progressed = False
        for e in disc.complex.interior_edges():
            m = measure_hinge(disc, e)
            if m.sigma >= np.pi - eps_flip:
                continue
            if not can_flip(disc, e):
                continue
            try:
                disc = flip(disc, e)
            except DegenerateTriangle:
                continue
            records.append(FlipRecord(edge=e, sigma=m.sigma, area_decrease=m.gain))
            progressed = True
            break
        if not progressed:
            break
    return FlipPassResult(disc=disc, flips=tuple(records), cap_exceeded=cap_exceeded)


def _star_area(disc: PolyhedralDisc, v: int) -> float:
    return float(sum(disc.triangle_area(i) for i in disc.complex.vertex_faces[v]))


def vertex_descent_step(
    disc: PolyhedralDisc,
    v: int,
    eps_saddle: float = 1e-7,
    line_search: LineSearch = LineSearch(),
    eps_area: Optional[float] = None,
) -> tuple[PolyhedralDisc, float]:
    """Move vertex ``v`` along its cutting direction.

    The first trial step is initial_step * margin * (shortest star
    edge) / 2, well inside the range where every star edge strictly
    shortens.  A trial is accepted when the star stays nondegenerate,
    every star edge got shorter, and the star area dropped by more
    than ``eps_area`` (None means any positive drop).

    Returns (new disc, decrease); (same disc, 0.0) when no trial was
    acceptable.  Raises NotCuttable for a saddle vertex and
    DegenerationBlocked when every trial degenerated the star.
    """
    cx = disc.complex
    if cx.is_boundary_vertex(v):
        raise ValueError(f"vertex {v} is on the boundary")
    floor = 0.0 if eps_area is None else eps_area
    star = list(cx.vertex_star(v))
    p = disc.positions
    directions = p[star] - p[v]
    verdict = cutting_direction(directions, eps_saddle)
    if verdict.is_saddle:
        raise NotCuttable(f"vertex {v} admits no cutting plane")
    normal = verdict.cut_normal
    lengths = np.linalg.norm(directions, axis=1)
    t = line_search.initial_step * 0.5 * verdict.margin * float(lengths.min())
    before = _star_area(disc, v)
    geometric_ok = 0
    for _ in range(line_search.max_backtracks + 1):
        try:
            trial = disc.moved(v, p[v] + t * normal)
        except DegenerateTriangle:
            t *= line_search.shrink
            continue
        geometric_ok += 1
        new_lengths = np.linalg.norm(trial.positions[star] - trial.positions[v], axis=1)
        if np.any(new_lengths >= lengths):
            t *= line_search.shrink
            continue
        decrease = before - _star_area(trial, v)
        if decrease > floor:
            return trial, float(decrease)
        t *= line_search.shrink
    if geometric_ok == 0:
        raise DegenerationBlocked(f"every cut step at vertex {v} degenerates its star")
    return disc, 0.0


# =====================================================================
# Gradients
# =====================================================================


def heron_area(a: float, b: float, c: float) -> float:
    """Triangle area from side lengths, stable for needle triangles."""
    a, b, c = sorted((float(a), float(b), float(c)), reverse=True)
    s = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * float(np.sqrt(max(s, 0.0)))


def edge_length_area_derivative(disc: PolyhedralDisc, edge) -> float:
    """Derivative of total area with respect to one edge's length,
    holding every other side length fixed (central difference on the
    one or two incident triangles)."""
    e = edge_key(*edge)
    cx = disc.complex
    if e not in cx.edge_faces:
        raise ValueError(f"{e} is not an edge of the complex")
    u, v = e
    length = disc.edge_length(u, v)
    others = [next(w for w in cx.triangles[i] if w not in e) for i in cx.edge_faces[e]]
    sides = [(disc.edge_length(u, w), disc.edge_length(v, w)) for w in others]

    def total(l: float) -> float:
        return sum(heron_area(l, b, c) for b, c in sides)

    h = 1e-6 * length
    return (total(length + h) - total(length - h)) / (2.0 * h)


def edge_length_area_gradient(
    disc: PolyhedralDisc, v: int
) -> list[tuple[tuple[int, int], float]]:
    """Per star edge of interior vertex ``v``, the derivative of total
    area in that edge's length with all other lengths frozen."""
    if disc.complex.is_boundary_vertex(v):
        raise ValueError(f"vertex {v} is on the boundary")
    return [
        (edge_key(v, u), edge_length_area_derivative(disc, (v, u)))
        for u in disc.complex.vertex_star(v)
    ]


def position_area_gradient(disc: PolyhedralDisc, v: int) -> np.ndarray:
    """Exact gradient of total area with respect to the position of
    ``v``: sum over incident triangles (v, a, b) of (a - b) x n / 2
    with n the triangle's unit normal."""
    gradient = np.zeros(3)
    p = disc.positions
    for i in disc.complex.vertex_faces[v]:
        t = disc.complex.triangles[i]
        k = t.index(v)
        a, b = p[t[(k + 1) % 3]], p[t[(k + 2) % 3]]
        n = np.cross(a - p[v], b - p[v])
        norm = float(np.linalg.norm(n))
        if norm == 0.0:
            raise DegenerateTriangle(f"triangle {t} has zero area")
        gradient += 0.5 * np.cross(a - b, n / norm)
    return gradient


def _gradient_step(
    disc: PolyhedralDisc, v: int, line_search: LineSearch, eps_area: float
) -> Optional[tuple[PolyhedralDisc, MoveRecord]]:
    """Backtracking descent along the negative area gradient; None when
    no improving step was found."""
    g = position_area_gradient(disc, v)
    norm = float(np.linalg.norm(g))
    if norm == 0.0:
        return None
    direction = -g / norm
    star = list(disc.complex.vertex_star(v))
    p = disc.positions
    lengths = np.linalg.norm(p[star] - p[v], axis=1)
    t = line_search.initial_step * float(lengths.min())
    before = _star_area(disc, v)
    for _ in range(line_search.max_backtracks + 1):
        try:
            trial = disc.moved(v, p[v] + t * direction)
        except DegenerateTriangle:
            t *= line_search.shrink
            continue
        decrease = before - _star_area(trial, v)
        if decrease > eps_area:
            disp = tuple(float(x) for x in (trial.positions[v] - p[v]))
            record = MoveRecord(
                vertex=v,
                displacement=disp,
                area_decrease=float(decrease),
                mode="gradient",
            )
            return trial, record
        t *= line_search.shrink
    return None


# =====================================================================
# Driver
# =====================================================================


def minimize(
    disc: PolyhedralDisc, config: Optional[OptimizerConfig] = None
) -> tuple[PolyhedralDisc, OptimizationTrace]:
    """Minimize disc area under flips, fan reductions and vertex moves.

    Returns the final disc and a trace whose ``certificate`` reports
    the cutting-plane test at every interior vertex of the result.
    """
    cfg = config if config is not None else OptimizerConfig()
    if (
        cfg.triangle_budget is not None
        and len(disc.complex.triangles) > cfg.triangle_budget
    ):
        raise BudgetExceeded(
            f"{len(disc.complex.triangles)} triangles exceed the budget "
            f"of {cfg.triangle_budget}"
        )
    rng = np.random.default_rng(cfg.rng_seed)
    eps_area = (
        cfg.eps_area if cfg.eps_area is not None else 1e-12 * disc.diameter**2
    )
    initial_area = disc.total_area()

    interior = disc.complex.interior_vertices()
    if cfg.jitter_amplitude > 0.0 and interior:
        offsets = (
            cfg.jitter_amplitude
            * disc.diameter
            * rng.uniform(-1.0, 1.0, (len(interior), 3))
        )
        jittered = np.array(disc.positions)
        jittered[list(interior)] += offsets
        try:
            disc = disc.with_positions(jittered)
        except DegenerateTriangle:
            pass  # keep the unjittered input

    iterations: list[IterationRecord] = []
    converged = False
    for index in range(1, cfg.max_outer_iterations + 1):
        area_start = disc.total_area()
        flips: tuple[FlipRecord, ...] = ()
        reductions: list[FanReduction] = []
        moves: list[MoveRecord] = []
        cap_exceeded = False
        unresolved = 0

        if cfg.enable_reductions:
            while True:
                progressed = False
                failures = 0
                for triple in disc.complex.no_triangle_violations():
                    try:
                        disc, record = reduce_fan(disc, triple)
                    except (CycleBoundsBoundary, NotAViolation, DegenerateTriangle):
                        failures += 1
                        continue
                    reductions.append(record)
                    progressed = True
                    break  # vertex ids changed, rescan
                if not progressed:
                    unresolved = failures
                    break

        if cfg.enable_flips:
            result = flip_pass(disc, cfg.eps_flip)
            disc = result.disc
            flips = result.flips
            cap_exceeded = result.cap_exceeded

        for v in disc.complex.interior_vertices():
            try:
                trial, decrease = vertex_descent_step(
                    disc,
                    v,
                    eps_saddle=cfg.eps_saddle,
                    line_search=cfg.line_search,
                    eps_area=eps_area,
                )
            except NotCuttable:
                stepped = _gradient_step(disc, v, cfg.line_search, eps_area)
                if stepped is not None:
                    disc, record = stepped
                    moves.append(record)
                continue
            except DegenerationBlocked:
                moves.append(
                    MoveRecord(
                        vertex=v,
                        displacement=(0.0, 0.0, 0.0),
                        area_decrease=0.0,
                        mode="cut",
                        blocked="degeneration",
                    )
                )
                continue
            if decrease > 0.0:
                disp = tuple(float(x) for x in (trial.positions[v] - disc.positions[v]))
                disc = trial
                moves.append(
                    MoveRecord(
                        vertex=v,
                        displacement=disp,
                        area_decrease=decrease,
                        mode="cut",
                    )
                )

        area_end = disc.total_area()
        iterations.append(
            IterationRecord(
                index=index,
                area=area_end,
                flips=flips,
                reductions=tuple(reductions),
                moves=tuple(moves),
                triangle_count=len(disc.complex.triangles),
                flip_cap_exceeded=cap_exceeded,
                unresolved_violations=unresolved,
            )
        )
        if area_start - area_end < eps_area:
            converged = not flips and not reductions and not cap_exceeded
            break

    certificate = certify_saddle(disc, cfg.eps_saddle)
    trace = OptimizationTrace(
        iterations=tuple(iterations),
        converged=converged,
        initial_area=initial_area,
        final_area=disc.total_area(),
        eps_area=eps_area,
        seed=cfg.rng_seed,
        certificate=certificate,
    )
    return disc, trace
