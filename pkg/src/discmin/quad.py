"""One-parameter family of hinged quadrilaterals.

Fix four side lengths p, q, r, s and consider two triangles sharing a
diagonal of length d: one with sides p, q, d and one with sides r, s,
d.  Write theta_x and theta_y for the angles opposite the diagonal.
As d sweeps its feasible interval the angle sum

    alpha = theta_x + theta_y

increases strictly, so alpha parameterizes the family just as well,
and the combined area

    A(alpha) = (p q sin theta_x + r s sin theta_y) / 2

is a smooth function of alpha.  A increases up to alpha = pi and
decreases beyond it, which is the engine behind every flip inequality
in this package: any pair of triangles sharing an edge in R^3 is a
member of such a family, whichever diagonal you hinge on.

The inversion alpha -> d has no closed form; ``diagonal_from_alpha``
uses bisection on the strictly increasing map d -> alpha(d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphaOutOfRange, InvalidSpec

_BISECTION_STEPS = 64
_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class QuadSpec:
    """Side lengths of the family: p, q on one side of the hinge, r, s
    on the other.  The diagonal runs between the p-q and r-s apexes'
    shared endpoints."""

    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        sides = (self.p, self.q, self.r, self.s)
        if not all(np.isfinite(x) and x > 0.0 for x in sides):
            raise InvalidSpec(f"side lengths must be positive and finite, got {sides}")
        if not self.diagonal_max - self.diagonal_min > 0.0:
            raise InvalidSpec(
                f"sides {sides} admit no open interval of diagonals "
                f"(d_min={self.diagonal_min}, d_max={self.diagonal_max})"
            )

    @property
    def diagonal_min(self) -> float:
        return max(abs(self.p - self.q), abs(self.r - self.s))

    @property
    def diagonal_max(self) -> float:
        return min(self.p + self.q, self.r + self.s)


@dataclass(frozen=True)
class HingeState:
    """One member of the family: achieved angles, their sum, and the
    diagonal length realizing them."""

    spec: QuadSpec
    alpha: float
    diagonal: float
    angle_x: float
    angle_y: float

    def area(self) -> float:
        return 0.5 * (
            self.spec.p * self.spec.q * np.sin(self.angle_x)
            + self.spec.r * self.spec.s * np.sin(self.angle_y)
        )


def _angles(spec: QuadSpec, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Law of cosines both sides of the hinge; clamp for roundoff at the
    # collapsed and stretched ends of the interval.
    cx = (spec.p**2 + spec.q**2 - d**2) / (2.0 * spec.p * spec.q)
    cy = (spec.r**2 + spec.s**2 - d**2) / (2.0 * spec.r * spec.s)
    return np.arccos(np.clip(cx, -1.0, 1.0)), np.arccos(np.clip(cy, -1.0, 1.0))


def _angle_sum(spec: QuadSpec, d: np.ndarray) -> np.ndarray:
    ax, ay = _angles(spec, d)
    return ax + ay


def alpha_range(spec: QuadSpec) -> tuple[float, float]:
    """Feasible interval of the opposite-angle sum."""
    lo = float(_angle_sum(spec, np.float64(spec.diagonal_min)))
    hi = float(_angle_sum(spec, np.float64(spec.diagonal_max)))
    return lo, hi


def _invert_alpha(spec: QuadSpec, alphas: np.ndarray) -> np.ndarray:
    """Diagonals realizing the given angle sums, by vectorized bisection."""
    d_lo = spec.diagonal_min
    d_hi = spec.diagonal_max
    a_lo, a_hi = alpha_range(spec)
    lo = np.full_like(alphas, d_lo)
    hi = np.full_like(alphas, d_hi)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = _angle_sum(spec, mid) < alphas
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    d = 0.5 * (lo + hi)
    # Endpoint shortcuts keep the extremes exact.
    d = np.where(alphas <= a_lo, d_lo, d)
    d = np.where(alphas >= a_hi, d_hi, d)
    return d


def diagonal_from_alpha(spec: QuadSpec, alpha: float) -> HingeState:
    """Member of the family with opposite-angle sum ``alpha``.

    Raises
    ------
    AlphaOutOfRange
        If ``alpha`` lies outside the feasible interval by more than a
        relative 1e-9 slack.  Values inside the slack are clamped.
    """
    a_lo, a_hi = alpha_range(spec)
    slack = _RANGE_SLACK * (a_hi - a_lo)
    if not a_lo - slack <= alpha <= a_hi + slack:
        raise AlphaOutOfRange(
            f"alpha={alpha} outside [{a_lo}, {a_hi}] for sides "
            f"({spec.p}, {spec.q}, {spec.r}, {spec.s})"
        )
    alpha = min(max(alpha, a_lo), a_hi)
    d = float(_invert_alpha(spec, np.array([alpha]))[0])
    ax, ay = _angles(spec, np.float64(d))
    return HingeState(
        spec=spec,
        alpha=float(ax + ay),
        diagonal=d,
        angle_x=float(ax),
        angle_y=float(ay),
    )


def area_of_alpha(spec: QuadSpec, alpha: float) -> float:
    return float(diagonal_from_alpha(spec, alpha).area())


def area_curve(spec: QuadSpec, alphas) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sweep of the family.

    Parameters
    ----------
    alphas:
        Array of angle sums; all must lie in the feasible interval (up
        to the same slack as :func:`diagonal_from_alpha`).

    Returns
    -------
    (diagonals, areas):
        Arrays of the same shape as ``alphas``.
    """
    alphas = np.asarray(alphas, dtype=float)
    a_lo, a_hi = alpha_range(spec)
    slack = _RANGE_SLACK * (a_hi - a_lo)
    if alphas.size and (alphas.min() < a_lo - slack or alphas.max() > a_hi + slack):
        raise AlphaOutOfRange(
            f"alphas extend beyond [{a_lo}, {a_hi}] for sides "
            f"({spec.p}, {spec.q}, {spec.r}, {spec.s})"
        )
    d = _invert_alpha(spec, np.clip(alphas, a_lo, a_hi))
    ax, ay = _angles(spec, d)
    areas = 0.5 * (spec.p * spec.q * np.sin(ax) + spec.r * spec.s * np.sin(ay))
    return d, areas


def d_area_d_alpha(spec: QuadSpec, alpha: float) -> float:
    """Central finite-difference slope of the area curve, shrunk to a
    one-sided difference at the ends of the feasible interval."""
    a_lo, a_hi = alpha_range(spec)
    h = 1e-6 * (a_hi - a_lo)
    lo = max(a_lo, alpha - h)
    hi = min(a_hi, alpha + h)
    return (area_of_alpha(spec, hi) - area_of_alpha(spec, lo)) / (hi - lo)


def embed_planar(state: HingeState) -> np.ndarray:
    """Planar realization of a family member, as four points in R^3.

    Rows are a, x, b, y with the hinge [a, b] on the x-axis, apex x at
    distance p from a and q from b above it, apex y at distance r from
    a and s from b below it.  When the diagonal collapses to zero the
    hinge endpoints coincide at the origin.
    """
    p, q, r, s = state.spec.p, state.spec.q, state.spec.r, state.spec.s
    d = state.diagonal
    if d == 0.0:
        return np.array(
            [[0.0, 0.0, 0.0], [0.0, p, 0.0], [0.0, 0.0, 0.0], [0.0, -r, 0.0]]
        )
    x1 = (p**2 - q**2 + d**2) / (2.0 * d)
    y1 = (r**2 - s**2 + d**2) / (2.0 * d)
    h = np.sqrt(max(p**2 - x1**2, 0.0))
    k = np.sqrt(max(r**2 - y1**2, 0.0))
    return np.array(
        [[0.0, 0.0, 0.0], [x1, h, 0.0], [d, 0.0, 0.0], [y1, -k, 0.0]]
    )
