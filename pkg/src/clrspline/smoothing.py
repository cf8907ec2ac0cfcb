"""Penalized smoothing splines, unconstrained and with zero integral.

The functional minimized over coefficient vectors ``b`` is

    J(b) = b' N b + alpha * (y - C b)' W (y - C b)

with ``N`` the order-``l`` roughness penalty and ``C`` the collocation
matrix at the data abscissas.  The zero-integral variant writes
``b = D K cbar`` where ``cbar`` are coefficients of the antiderivative
spline with its first and last coefficient tied together.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bspline import (Spline, SplineSpace, collocation_matrix, derivative_operator,
                      gram_matrix, integrate, penalty_matrix, support_widths)
from .exceptions import DimensionError, DomainError, InvalidOrderError
from .ginverse import DEFAULT_RCOND, LinearSystem, SolveReport, solve_min_norm


@dataclass(frozen=True)
class SmoothingProblem:
    """Data, weights and smoothing parameters for one fit."""

    space: SplineSpace
    xs: np.ndarray
    ys: np.ndarray
    weights: np.ndarray | None = None
    alpha: float = 1.0
    order: int = 2

    def __post_init__(self):
        xs = self.space.check_domain(np.asarray(self.xs, dtype=float).ravel())
        ys = np.asarray(self.ys, dtype=float).ravel()
        n = xs.shape[0]
        w = np.ones(n) if self.weights is None else np.broadcast_to(
            np.asarray(self.weights, dtype=float), (n,)).copy()
        if ys.shape[0] != n:
            raise DimensionError(f"{n} abscissas but {ys.shape[0]} ordinates")
        if not np.all(np.isfinite(ys)) or not np.all(np.isfinite(w)):
            raise DomainError("ordinates and weights must be finite")
        if np.any(w < 0):
            raise DomainError("weights must be non-negative")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        k = self.space.degree
        if int(self.order) != self.order or not 1 <= self.order <= k:
            raise InvalidOrderError(f"order must lie in [1, {k}], got {self.order}")
        if n < self.space.g + 1:
            raise DimensionError(f"need at least g + 1 = {self.space.g + 1} points, got {n}")
        for name, val in (("xs", xs), ("ys", ys), ("weights", w)):
            val.flags.writeable = False
            object.__setattr__(self, name, val)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "order", int(self.order))

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    @cached_property
    def collocation(self) -> np.ndarray:
        return collocation_matrix(self.space, self.space.degree, self.xs)

    @cached_property
    def penalty(self) -> np.ndarray:
        return penalty_matrix(self.space, self.order)


@dataclass(frozen=True)
class ConstraintOperators:
    """``D`` (diagonal scaling) and ``K`` (cyclic difference) with ``b = D K cbar``.

    ``K`` annihilates constant vectors, so ``D K`` has rank ``dim - 1``;
    its range is exactly the set of zero-integral coefficient vectors.
    """

    D: np.ndarray
    K: np.ndarray

    @property
    def DK(self) -> np.ndarray:
        return self.D @ self.K


@dataclass(frozen=True)
class SmoothingSolution:
    spline: Spline
    objective: float
    penalty: float
    residual: float
    report: SolveReport
    constrained: bool
    cbar: np.ndarray | None = None
    flags: tuple[str, ...] = field(default=())

    @property
    def coeffs(self) -> np.ndarray:
        return self.spline.coeffs

    @property
    def integral(self) -> float:
        return integrate(self.spline)


def objective(problem: SmoothingProblem, b) -> float:
    """Value of the smoothing functional at coefficient vector ``b``."""
    b = np.asarray(b, dtype=float).ravel()
    if b.shape[0] != problem.space.dim:
        raise DimensionError(f"expected {problem.space.dim} coefficients, got {b.shape[0]}")
    pen, res = _split_objective(problem, b)
    return pen + problem.alpha * res


def _split_objective(problem, b):
    r = problem.ys - problem.collocation @ b
    return float(b @ problem.penalty @ b), float(r @ (problem.weights * r))


def _system_rank(problem: SmoothingProblem, T: np.ndarray, rcond: float) -> int:
    # A = F'F with F = [alpha^-1/2 R S T; W^1/2 C T]; ranks agree but F can be
    # row-equilibrated, which removes the scale gap between penalty and data rows.
    R = np.linalg.cholesky(gram_matrix(problem.space, problem.order)).T
    F = np.vstack([R @ derivative_operator(problem.space, problem.order) @ T,
                   np.sqrt(problem.weights)[:, None] * (problem.collocation @ T)])
    norms = np.linalg.norm(F, axis=1)
    F = F[norms > 0] / norms[norms > 0, None]
    if F.shape[0] == 0:
        return 0
    s = np.linalg.svd(F, compute_uv=False)
    return int(np.sum(s > rcond * s[0]))


def _flags(problem):
    return ("all_weights_zero",) if not np.any(problem.weights > 0) else ()


def normal_system(problem: SmoothingProblem) -> LinearSystem:
    """``[N / alpha + C' W C] b = C' W y``."""
    C, w = problem.collocation, problem.weights
    A = problem.penalty / problem.alpha + C.T @ (w[:, None] * C)
    return LinearSystem((A + A.T) / 2, C.T @ (w * problem.ys))


def fit_unconstrained(problem: SmoothingProblem, rcond: float = DEFAULT_RCOND) -> SmoothingSolution:
    """Smoothing spline minimizing J; minimum-norm coefficients if not unique."""
    system = normal_system(problem)
    rank = _system_rank(problem, np.eye(problem.space.dim), rcond)
    b, report = solve_min_norm(system, rcond=rcond, rank=rank)
    pen, res = _split_objective(problem, b)
    return SmoothingSolution(Spline(problem.space, b), pen + problem.alpha * res, pen, res,
                             report, constrained=False, flags=_flags(problem))


def build_constraint_operators(space: SplineSpace) -> ConstraintOperators:
    """Operators expressing zero-integral coefficients through ``cbar``."""
    dim = space.dim
    D = np.diag((space.degree + 1) / support_widths(space))
    K = np.eye(dim) - np.eye(dim, k=-1)
    K[0, -1] -= 1.0
    return ConstraintOperators(D, K)


def constrained_system(problem: SmoothingProblem, ops: ConstraintOperators | None = None) -> LinearSystem:
    """``[(DK)' N DK / alpha + (C DK)' W C DK] cbar = K' D' C' W y``."""
    ops = ops or build_constraint_operators(problem.space)
    DK = ops.DK
    C, w = problem.collocation, problem.weights
    CDK = C @ DK
    A = DK.T @ problem.penalty @ DK / problem.alpha + CDK.T @ (w[:, None] * CDK)
    rhs = ops.K.T @ ops.D.T @ C.T @ (w * problem.ys)
    return LinearSystem((A + A.T) / 2, rhs)


def fit_zero_integral(problem: SmoothingProblem, rcond: float = DEFAULT_RCOND) -> SmoothingSolution:
    """Smoothing spline with zero integral over [a, b].

    The reduced system in ``cbar`` is always singular (constants lie in the
    kernel of ``K``); the minimum-norm ``cbar`` is mapped back by ``D K``.
    """
    ops = build_constraint_operators(problem.space)
    system = constrained_system(problem, ops)
    rank = _system_rank(problem, ops.DK, rcond)
    cbar, report = solve_min_norm(system, rcond=rcond, rank=rank)
    b = ops.DK @ cbar
    pen, res = _split_objective(problem, b)
    return SmoothingSolution(Spline(problem.space, b), pen + problem.alpha * res, pen, res,
                             report, constrained=True, cbar=cbar, flags=_flags(problem))


def antiderivative_coeffs(spline: Spline) -> np.ndarray:
    """Coefficients ``c_{-k-1}, ..., c_g`` of the antiderivative, anchored at ``c_{-k-1} = 0``.

    ``c[-1] - c[0]`` equals the integral of ``spline`` over [a, b].
    """
    steps = spline.coeffs * support_widths(spline.space) / (spline.degree + 1)
    return np.concatenate(([0.0], np.cumsum(steps)))


def weighted_identity_residual(spline: Spline) -> float:
    """``sum_i b_i (lam_{i+k+1} - lam_i)``; zero exactly for zero-integral splines."""
    return float(spline.coeffs @ support_widths(spline.space))
