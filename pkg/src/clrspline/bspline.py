"""B-spline spaces on a closed interval with clamped boundary knots.

Coefficients and basis functions use the offset indexing ``i = -d, ..., g``
for a degree-``d`` basis over ``g`` interior knots; array column ``j``
corresponds to ``i = j - d``.  Knots are addressed as ``lam(i)`` with
``lam(0) = a`` and ``lam(g + 1) = b``; the ``d + 1`` copies of each endpoint
make the boundary B-splines interpolatory.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, DomainError, InvalidConfigError, InvalidOrderError

MAX_DEGREE = 10


@dataclass(frozen=True)
class KnotConfig:
    """Endpoints, strictly increasing interior knots and polynomial degree."""

    a: float
    b: float
    interior: tuple[float, ...] = ()
    degree: int = 3

    def __post_init__(self):
        interior = tuple(float(v) for v in np.ravel(np.asarray(self.interior, dtype=float)))
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if int(self.degree) != self.degree:
            raise InvalidConfigError(f"degree must be an integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))
        if not 0 <= self.degree <= MAX_DEGREE:
            raise InvalidConfigError(f"degree must lie in [0, {MAX_DEGREE}], got {self.degree}")
        pts = np.array((self.a, *interior, self.b))
        if not np.all(np.isfinite(pts)):
            raise InvalidConfigError("knots must be finite")
        if np.any(np.diff(pts) <= 0):
            raise InvalidConfigError(
                f"knots must satisfy a < lam_1 < ... < lam_g < b, got {pts.tolist()}")

    @property
    def g(self) -> int:
        return len(self.interior)


@dataclass(frozen=True)
class SplineSpace:
    """The space of degree-k splines on [a, b] with the configured knots."""

    config: KnotConfig
    knots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "knots", self.knots_for(self.config.degree))
        self.knots.flags.writeable = False

    @property
    def a(self) -> float:
        return self.config.a

    @property
    def b(self) -> float:
        return self.config.b

    @property
    def degree(self) -> int:
        return self.config.degree

    @property
    def g(self) -> int:
        return self.config.g

    @property
    def dim(self) -> int:
        return self.g + self.degree + 1

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array((self.a, *self.config.interior, self.b))

    def knots_for(self, d: int) -> np.ndarray:
        """Clamped knot vector with ``d + 1`` copies of each endpoint."""
        return np.concatenate(([self.a] * (d + 1), self.config.interior, [self.b] * (d + 1)))

    def lam(self, i) -> np.ndarray | float:
        """Extended knot ``lam_i`` for ``-k <= i <= g + k + 1``."""
        return self.knots[np.asarray(i) + self.degree]

    def with_degree(self, d: int) -> "SplineSpace":
        return SplineSpace(KnotConfig(self.a, self.b, self.config.interior, d))

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(~np.isfinite(x)) or np.any(x < self.a) or np.any(x > self.b):
            bad = x[(x < self.a) | (x > self.b) | ~np.isfinite(x)]
            raise DomainError(
                f"abscissa {bad.ravel()[0]!r} outside [{self.a}, {self.b}]")
        return x


def build_space(config: KnotConfig | None = None, *, a=None, b=None,
                interior: Sequence[float] = (), degree: int = 3) -> SplineSpace:
    """Validate a knot configuration and return its spline space.

    Either pass a ready :class:`KnotConfig` or the keyword fields.  Raises
    :class:`InvalidConfigError` for degree < 1 or non-increasing knots.
    """
    if config is None:
        if a is None or b is None:
            raise InvalidConfigError("either config or both a and b are required")
        config = KnotConfig(a, b, tuple(interior), degree)
    if config.degree < 1:
        raise InvalidConfigError(f"degree must be >= 1, got {config.degree}")
    return SplineSpace(config)


def _check_degree(space: SplineSpace, d: int) -> int:
    if int(d) != d or not 0 <= d <= space.degree:
        raise InvalidOrderError(f"basis degree must lie in [0, {space.degree}], got {d}")
    return int(d)


def basis_value(space: SplineSpace, d: int, i: int, x: float) -> float:
    """Value of the degree-``d`` B-spline with offset index ``i`` at ``x``.

    Uses the Cox-de Boor triangular recursion with ``0/0 = 0``.  Degree-0
    pieces are indicators of half-open spans, except that the last
    non-degenerate span is closed at ``b`` so the basis sums to one there.
    """
    d = _check_degree(space, d)
    if not -d <= i <= space.g:
        raise DimensionError(f"index {i} outside [{-d}, {space.g}]")
    x = float(space.check_domain(x))
    t = space.knots_for(d)
    b = space.b

    def rec(j, p):
        # j is the position in t of the left knot of the support
        if p == 0:
            lo, hi = t[j], t[j + 1]
            if lo == hi:
                return 0.0
            if lo <= x < hi or (x == b and hi == b):
                return 1.0
            return 0.0
        val = 0.0
        den = t[j + p] - t[j]
        if den > 0:
            val += (x - t[j]) / den * rec(j, p - 1)
        den = t[j + p + 1] - t[j + 1]
        if den > 0:
            val += (t[j + p + 1] - x) / den * rec(j + 1, p - 1)
        return val

    return rec(i + d, d)


def _find_span(t: np.ndarray, d: int, nbasis: int, x: np.ndarray) -> np.ndarray:
    mu = np.searchsorted(t, x, side="right") - 1
    return np.clip(mu, d, nbasis - 1)


def _nonzero_basis(t: np.ndarray, d: int, mu: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Values of the ``d + 1`` B-splines that are non-zero on span ``mu``."""
    n = x.shape[0]
    vals = np.zeros((n, d + 1))
    vals[:, 0] = 1.0
    left = np.zeros((n, d + 1))
    right = np.zeros((n, d + 1))
    for j in range(1, d + 1):
        left[:, j] = x - t[mu + 1 - j]
        right[:, j] = t[mu + j] - x
        saved = np.zeros(n)
        for r in range(j):
            temp = vals[:, r] / (right[:, r + 1] + left[:, j - r])
            vals[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        vals[:, j] = saved
    return vals


def collocation_matrix(space: SplineSpace, d: int, xs) -> np.ndarray:
    """Matrix of all degree-``d`` B-splines evaluated at ``xs``.

    Returns
    -------
    ndarray, shape (len(xs), g + d + 1)
        Row ``r`` holds ``B_{-d}(x_r), ..., B_g(x_r)``; at most ``d + 1``
        entries per row are non-zero and each row sums to one.
    """
    d = _check_degree(space, d)
    xs = space.check_domain(np.atleast_1d(xs)).ravel()
    t = space.knots_for(d)
    nbasis = space.g + d + 1
    mu = _find_span(t, d, nbasis, xs)
    vals = _nonzero_basis(t, d, mu, xs)
    out = np.zeros((xs.shape[0], nbasis))
    rows = np.arange(xs.shape[0])[:, None]
    out[rows, mu[:, None] - d + np.arange(d + 1)] = vals
    return out


@dataclass(frozen=True)
class Spline:
    """A spline ``sum_i coeffs[i] * B_i`` in ``space``."""

    space: SplineSpace
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.shape[0] != self.space.dim:
            raise DimensionError(
                f"expected {self.space.dim} coefficients, got {c.shape[0]}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.space.degree

    def __call__(self, x):
        return evaluate(self, x)


def evaluate(spline: Spline, x):
    """Evaluate ``spline`` at scalar or array ``x`` (same shape returned)."""
    x = np.asarray(x, dtype=float)
    vals = collocation_matrix(spline.space, spline.degree, x.ravel()) @ spline.coeffs
    return vals.reshape(x.shape) if x.ndim else float(vals[0])


def derivative_operator(space: SplineSpace, order: int) -> np.ndarray:
    """Matrix mapping B-spline coefficients to those of the ``order``-th derivative.

    Built as the product ``D_l L_l ... D_1 L_1`` where ``L_j`` is the
    first-difference matrix and ``D_j = (k + 1 - j) diag(1 / (lam_{i+k+1-j} - lam_i))``.
    ``order == k`` (piecewise-constant derivative) is accepted as an extension.
    """
    k = space.degree
    if int(order) != order or not 1 <= order <= k:
        raise InvalidOrderError(f"derivative order must lie in [1, {k}], got {order}")
    g = space.g
    S = np.eye(space.dim)
    for j in range(1, order + 1):
        m = g + k + 1 - j
        idx = np.arange(-k + j, g + 1)
        gaps = space.lam(idx + k + 1 - j) - space.lam(idx)
        if np.any(gaps <= 0):
            raise InvalidConfigError("zero-length knot gap in derivative operator")
        L = np.zeros((m, m + 1))
        L[np.arange(m), np.arange(m)] = -1.0
        L[np.arange(m), np.arange(m) + 1] = 1.0
        S = ((k + 1 - j) / gaps)[:, None] * (L @ S)
    return S


def differentiate(spline: Spline, order: int = 1) -> Spline:
    """Derivative of ``spline`` as a spline of degree ``k - order`` on the same knots."""
    S = derivative_operator(spline.space, order)
    return Spline(spline.space.with_degree(spline.degree - order), S @ spline.coeffs)


def span_quadrature(space: SplineSpace, nodes: int):
    """Gauss-Legendre nodes and weights, ``nodes`` per knot span, over [a, b]."""
    ref_x, ref_w = np.polynomial.legendre.leggauss(nodes)
    bp = space.breakpoints
    half = np.diff(bp)[:, None] / 2
    mid = (bp[:-1] + bp[1:])[:, None] / 2
    x = (mid + half * ref_x).ravel()
    w = (half * ref_w).ravel()
    return x, w


def gram_matrix(space: SplineSpace, order: int, nodes: int | None = None) -> np.ndarray:
    """L2 inner products of the degree ``k - order`` B-splines on [a, b].

    The integrand is a polynomial of degree ``2 (k - order)`` on every span,
    so the default ``k - order + 1`` Gauss nodes per span integrate it exactly.
    """
    k = space.degree
    if int(order) != order or not 0 <= order <= k:
        raise InvalidOrderError(f"order must lie in [0, {k}], got {order}")
    d = k - order
    x, w = span_quadrature(space, nodes or d + 1)
    B = collocation_matrix(space, d, x)
    M = B.T @ (w[:, None] * B)
    return (M + M.T) / 2


def penalty_matrix(space: SplineSpace, order: int) -> np.ndarray:
    """Roughness penalty ``S_l^T M S_l`` so that ``b @ N @ b = int (s^(l))^2``."""
    if order == space.degree:
        warnings.warn("penalty order equal to the degree is an extension; "
                      "the derivative is piecewise constant", stacklevel=2)
    S = derivative_operator(space, order)
    N = S.T @ gram_matrix(space, order) @ S
    return (N + N.T) / 2


def integrate(spline: Spline) -> float:
    """Exact integral over [a, b] from the antiderivative coefficient identity."""
    return float(spline.coeffs @ support_widths(spline.space)) / (spline.degree + 1)


def support_widths(space: SplineSpace) -> np.ndarray:
    """``lam_{i+k+1} - lam_i`` for ``i = -k, ..., g``, the support length of each B-spline."""
    idx = np.arange(-space.degree, space.g + 1)
    return space.lam(idx + space.degree + 1) - space.lam(idx)
