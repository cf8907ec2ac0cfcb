"""Generalized and minimum-norm generalized inverses for square systems.

Solvers never silently fall back to least squares: an inconsistent right
side is reported through :attr:`SolveReport.consistent`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, InvalidInputError

DEFAULT_RCOND = 1e-10
DEFAULT_CONSISTENCY_TOL = 1e-8


class InverseKind(str, Enum):
    REGULAR = "regular"
    GENERALIZED = "generalized"
    MINIMUM_NORM = "minimum_norm"


@dataclass(frozen=True)
class LinearSystem:
    """Square system ``A x = rhs``."""

    A: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != rhs.shape[0]:
            raise DimensionError(f"incompatible system shapes {A.shape} and {rhs.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class SolveReport:
    rank: int
    consistent: bool
    residual_norm: float
    inverse_kind: InverseKind
    rcond_used: float


@dataclass(frozen=True)
class RankFactorization:
    """Thin SVD ``A = left @ diag(sigma) @ right`` truncated to the numerical rank."""

    left: np.ndarray
    sigma: np.ndarray
    right: np.ndarray
    rank: int
    rcond: float

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.sigma) @ self.right


def _check_finite(A):
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix contains non-finite entries")
    return A


def _check_rcond(rcond):
    if not 0 < rcond < 1:
        raise InvalidInputError(f"rcond must lie in (0, 1), got {rcond}")


def rank_factorize(A, rcond: float = DEFAULT_RCOND, rank: int | None = None) -> RankFactorization:
    """Orthogonal rank factorization of ``A``.

    The numerical rank counts singular values above ``rcond * sigma_max``
    unless ``rank`` is supplied by a caller that knows it structurally.
    """
    A = _check_finite(A)
    _check_rcond(rcond)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if rank is None:
        rank = int(np.sum(s > rcond * s[0])) if s.size and s[0] > 0 else 0
    return RankFactorization(U[:, :rank], s[:rank], Vt[:rank], rank, rcond)


def generalized_inverse(A, rcond: float = DEFAULT_RCOND, rank: int | None = None) -> np.ndarray:
    """A generalized inverse ``G`` with ``A G A = A`` from a column-pivoted QR.

    For singular ``A`` this is a basic (not minimum-norm) inverse; for
    regular ``A`` it equals the ordinary inverse.
    """
    A = _check_finite(A)
    r = rank_factorize(A, rcond, rank).rank
    Q, R, piv = scipy.linalg.qr(A, pivoting=True)
    m = A.shape[1]
    G = np.zeros((m, A.shape[0]))
    if r:
        G[piv[:r]] = scipy.linalg.solve_triangular(R[:r, :r], Q[:, :r].T)
    return G


def min_norm_inverse(A, rcond: float = DEFAULT_RCOND, rank: int | None = None) -> np.ndarray:
    """Minimum-norm generalized inverse (here the Moore-Penrose inverse)."""
    f = rank_factorize(A, rcond, rank)
    return (f.right.T / f.sigma) @ f.left.T


def _report(A, x, rhs, rank, kind, rcond, tol):
    resid = float(np.linalg.norm(A @ x - rhs))
    scale = np.linalg.norm(A, 2) * np.linalg.norm(x) + np.linalg.norm(rhs)
    return SolveReport(rank, bool(resid <= tol * scale), resid, kind, rcond)


def _as_system(system, rhs):
    if isinstance(system, LinearSystem):
        return system
    return LinearSystem(system, rhs)


def solve_generalized(system, rhs=None, rcond: float = DEFAULT_RCOND, rank: int | None = None,
                      tol: float = DEFAULT_CONSISTENCY_TOL):
    """Solve ``A x = rhs`` with a generalized inverse.

    Parameters
    ----------
    system : LinearSystem or ndarray
        The system, or its matrix when ``rhs`` is passed separately.
    rcond : float
        Relative singular-value cutoff defining the numerical rank.
    rank : int, optional
        Known rank; overrides the ``rcond`` threshold.
    tol : float
        Relative residual threshold for declaring the system consistent.

    Returns
    -------
    x : ndarray
    report : SolveReport
        ``report.consistent`` is False when ``rhs`` is outside the range of
        ``A``; ``x`` is then not a solution and must not be used as one.
    """
    sys_ = _as_system(system, rhs)
    A, b = _check_finite(sys_.A), _check_finite(sys_.rhs)
    m = A.shape[0]
    r = rank_factorize(A, rcond, rank).rank
    if r == m:
        x = scipy.linalg.solve(A, b)
        kind = InverseKind.REGULAR
    else:
        x = generalized_inverse(A, rcond, r) @ b
        kind = InverseKind.GENERALIZED
    return x, _report(A, x, b, r, kind, rcond, tol)


def solve_min_norm(system, rhs=None, rcond: float = DEFAULT_RCOND, rank: int | None = None,
                   tol: float = DEFAULT_CONSISTENCY_TOL):
    """Minimum Euclidean norm solution of a consistent system ``A x = rhs``.

    Regular matrices go through an LU solve, so the result coincides with
    :func:`solve_generalized`.  Arguments and return value as there.
    """
    sys_ = _as_system(system, rhs)
    A, b = _check_finite(sys_.A), _check_finite(sys_.rhs)
    f = rank_factorize(A, rcond, rank)
    if f.rank == A.shape[0]:
        x = scipy.linalg.solve(A, b)
        kind = InverseKind.REGULAR
    else:
        x = f.right.T @ ((f.left.T @ b) / f.sigma)
        kind = InverseKind.MINIMUM_NORM
    return x, _report(A, x, b, f.rank, kind, rcond, tol)
