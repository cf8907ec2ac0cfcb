"""Centred logratio maps between densities / proportions and L2 functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bspline import Spline, evaluate
from .exceptions import DimensionError, DomainError

PROPORTION_SUM_TOL = 5e-3
MIN_GRID = 50


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not float(self.a) < float(self.b):
            raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def eta(self) -> float:
        return float(self.b) - float(self.a)


@dataclass(frozen=True)
class HistogramSample:
    """Class midpoints and strictly positive class proportions of one distribution."""

    midpoints: np.ndarray
    proportions: np.ndarray
    sum_tol: float = PROPORTION_SUM_TOL

    def __post_init__(self):
        x = np.asarray(self.midpoints, dtype=float).ravel()
        y = np.asarray(self.proportions, dtype=float).ravel()
        if x.shape != y.shape:
            raise DimensionError(f"{x.size} midpoints but {y.size} proportions")
        _check_positive(y)
        if abs(y.sum() - 1.0) > self.sum_tol:
            raise DomainError(f"proportions sum to {y.sum():.6g}, not 1 within {self.sum_tol}")
        object.__setattr__(self, "midpoints", x)
        object.__setattr__(self, "proportions", y)


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    values: np.ndarray


def _check_positive(y, what="proportion"):
    bad = np.flatnonzero(~(y > 0))
    if bad.size:
        i = int(bad[0])
        raise DomainError(
            f"{what} of class {i + 1} is {y[i]!r}; logratios need strictly positive "
            "values, zero counts must be imputed (e.g. model-based) before the transform")


def clr_discrete(sample) -> np.ndarray:
    """``z_i = ln(y_i / geometric_mean(y))`` for a sample or a positive vector."""
    y = sample.proportions if isinstance(sample, HistogramSample) else np.asarray(sample, dtype=float)
    _check_positive(y)
    logy = np.log(y)
    return logy - logy.mean(axis=-1, keepdims=True)


def clr_discrete_inverse(z) -> np.ndarray:
    """Closure of ``exp(z)`` to unit sum; inverse of :func:`clr_discrete` on zero-sum vectors."""
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise DomainError("clr coordinates must be finite")
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def clr_functional(grid, values, interval: Interval | None = None) -> np.ndarray:
    """Functional clr of density samples on ``grid``.

    The mean of ``ln f`` over the interval is taken with the composite
    trapezoidal rule, so the output integrates to zero under the same rule.
    """
    grid = np.asarray(grid, dtype=float).ravel()
    f = np.asarray(values, dtype=float).ravel()
    if grid.shape != f.shape or grid.size < 2:
        raise DimensionError("grid and values must be equal-length vectors of size >= 2")
    if interval is not None and (grid[0] != interval.a or grid[-1] != interval.b):
        raise DomainError(f"grid must span [{interval.a}, {interval.b}]")
    _check_positive(f, what="density value")
    logf = np.log(f)
    return logf - np.trapezoid(logf, grid) / (grid[-1] - grid[0])


def _panel_quadrature(breaks, nodes):
    ref_x, ref_w = np.polynomial.legendre.leggauss(nodes)
    half = np.diff(breaks)[:, None] / 2
    mid = (breaks[:-1] + breaks[1:])[:, None] / 2
    return (mid + half * ref_x).ravel(), (half * ref_w).ravel()


def spline_exp_integral(spline: Spline, shift: float = 0.0, nodes: int = 16,
                        rtol: float = 1e-13, max_splits: int = 12) -> float:
    """``int_a^b exp(s(x) - shift) dx`` by Gauss-Legendre, ``nodes`` per panel.

    Panels start as the knot spans and are halved until two successive
    estimates agree to ``rtol``.  For moderate coefficients the first pass
    already converges; steep splines (large coefficients) need the splits.
    """
    bp = spline.space.breakpoints
    prev = None
    for level in range(max_splits + 1):
        parts = 2**level
        t = np.linspace(0.0, 1.0, parts + 1)[:-1]
        breaks = np.r_[(bp[:-1, None] + np.diff(bp)[:, None] * t).ravel(), bp[-1]]
        x, w = _panel_quadrature(breaks, nodes)
        val = float(w @ np.exp(evaluate(spline, x) - shift))
        if prev is not None and abs(val - prev) <= rtol * abs(val):
            return val
        prev = val
    return val


def inverse_clr_spline(spline: Spline, m: int = 500, interval: Interval | None = None) -> DensityCurve:
    """Back-transform a clr spline to a unit-integral density sampled on ``m`` points."""
    space = spline.space
    if interval is not None and (interval.a != space.a or interval.b != space.b):
        raise DomainError("interval must coincide with the spline domain")
    if m < MIN_GRID:
        raise DimensionError(f"grid size must be at least {MIN_GRID}, got {m}")
    grid = np.linspace(space.a, space.b, m)
    s = evaluate(spline, grid)
    # any shift cancels in the ratio; the max keeps exp() from overflowing
    shift = float(s.max())
    values = np.exp(s - shift) / spline_exp_integral(spline, shift)
    return DensityCurve(grid, values)
