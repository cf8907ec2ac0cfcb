"""Dataset-level commands: clr table, coefficient fits, sampled curves, reports.

Each ``cmd_*`` function returns the text it produces together with a flag
telling whether every row passed; the CLI maps that flag to an exit code.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bspline import KnotConfig, Spline, build_space, evaluate, integrate, support_widths
from .clr import clr_discrete, inverse_clr_spline
from .io import Dataset, FitConfig, write_dataset_csv, write_table
from .smoothing import (SmoothingProblem, SmoothingSolution, fit_unconstrained,
                        fit_zero_integral, weighted_identity_residual)

INTEGRAL_RTOL = 1e-8


@dataclass(frozen=True)
class RowFit:
    label: str
    group: str
    solution: SmoothingSolution
    ok: bool
    message: str = ""


def integral_tolerance(spline: Spline) -> float:
    """Admissible |integral| of a zero-integral fit: 1e-8 (b - a) max(1, max|b|)."""
    sp = spline.space
    return INTEGRAL_RTOL * (sp.b - sp.a) * max(1.0, float(np.abs(spline.coeffs).max()))


def relative_identity_residual(spline: Spline) -> float:
    """``|sum b_i h_i| / sum |b_i| h_i`` with ``h_i`` the B-spline support widths."""
    h = support_widths(spline.space)
    scale = float(np.abs(spline.coeffs) @ h)
    return abs(weighted_identity_residual(spline)) / scale if scale > 0 else 0.0


def ordinates(dataset: Dataset, config: FitConfig) -> np.ndarray:
    """Values the spline is fitted to: clr coordinates or raw proportions."""
    if config.mode == "zero_integral_clr" and dataset.kind == "proportions":
        return clr_discrete(dataset.values)
    return dataset.values


def fit_dataset(dataset: Dataset, config: FitConfig) -> list[RowFit]:
    """Fit every row in input order."""
    if len(dataset) == 0:
        raise ValueError("dataset has no rows")
    space = config.space_for(dataset.midpoints)
    Y = ordinates(dataset, config)
    fit = fit_zero_integral if config.mode == "zero_integral_clr" else fit_unconstrained
    out = []
    for row, y in zip(dataset.rows, Y):
        problem = SmoothingProblem(space, dataset.midpoints, y, config.weights,
                                   config.alpha, config.order)
        sol = fit(problem, rcond=config.rcond)
        problems = []
        if not sol.report.consistent:
            problems.append(f"inconsistent system (residual {sol.report.residual_norm:.3g})")
        if sol.constrained and abs(sol.integral) > integral_tolerance(sol.spline):
            problems.append(f"integral {sol.integral:.3g} breaches zero-integral tolerance")
        out.append(RowFit(row.label, row.group, sol, not problems, "; ".join(problems)))
    return out


def round_zero_sum(z, decimals: int = 6) -> np.ndarray:
    """Round rows to ``decimals`` places keeping each decimal row sum exactly zero.

    Plain rounding lets the row sum drift by up to ``n/2`` units in the last
    place; the leftover units go to the entries with the largest remainders,
    so no entry moves by more than one unit.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    units = z * 10.0**decimals
    q = np.round(units)
    for row, u in zip(q, units):
        excess = int(row.sum())
        if excess:
            rem = (u - row) * -np.sign(excess)
            row[np.argsort(-rem, kind="stable")[:abs(excess)]] -= np.sign(excess)
    return q / 10.0**decimals


def cmd_clr(dataset: Dataset, out=None) -> tuple[str, bool]:
    """clr table at 6 decimals; each emitted row sums to zero exactly in decimal."""
    if dataset.kind != "proportions":
        raise ValueError("clr needs a proportions table")
    z = round_zero_sum(clr_discrete(dataset.values), 6)
    text = write_dataset_csv(dataset, z, precision=6, out=out)
    return text, True


def cmd_fit(dataset: Dataset, config: FitConfig, out=None) -> tuple[str, bool]:
    fits = fit_dataset(dataset, config)
    k = config.degree
    dim = fits[0].solution.spline.space.dim
    header = (["label", "group"] + [f"b_{i}" for i in range(-k, dim - k)]
              + ["objective", "integral", "rank", "consistent"])
    rows = []
    for f in fits:
        s = f.solution
        rows.append([f.label, f.group] + [f"{v:.6f}" for v in s.coeffs]
                    + [f"{s.objective:.6e}", f"{s.integral:.6e}", s.report.rank,
                       str(s.report.consistent).lower()])
    return write_table(header, rows, out), all(f.ok for f in fits)


def cmd_curves(dataset: Dataset, config: FitConfig, out=None) -> tuple[str, bool]:
    """Long-format samples on ``config.grid`` equally spaced points.

    In ``zero_integral_clr`` mode ``clr_value`` is the fitted spline and
    ``density_value`` its inverse clr.  In ``unconstrained_raw`` mode the
    fitted proportion curve goes to ``density_value`` and ``clr_value`` is empty.
    """
    fits = fit_dataset(dataset, config)
    rows = []
    for f in fits:
        spline = f.solution.spline
        if config.mode == "zero_integral_clr":
            dens = inverse_clr_spline(spline, config.grid)
            grid, clr_vals, dvals = dens.grid, evaluate(spline, dens.grid), dens.values
        else:
            grid = np.linspace(spline.space.a, spline.space.b, config.grid)
            clr_vals, dvals = [None] * grid.size, evaluate(spline, grid)
        for x, c, d in zip(grid, clr_vals, dvals):
            rows.append([f.label, f.group, f"{x:.6f}", "" if c is None else f"{c:.10e}",
                         f"{d:.10e}"])
    header = ["label", "group", "x", "clr_value", "density_value"]
    return write_table(header, rows, out), all(f.ok for f in fits)


def cmd_report(dataset: Dataset, config: FitConfig, out=None) -> tuple[str, bool]:
    fits = fit_dataset(dataset, config)
    sp = fits[0].solution.spline.space
    lines = [f"mode={config.mode} degree={config.degree} order={config.order} "
             f"alpha={config.alpha:g} knots={[float(v) for v in sp.breakpoints]} dim={sp.dim}"]
    for f in fits:
        s = f.solution
        rel = relative_identity_residual(s.spline)
        status = "ok" if f.ok else f"FAIL: {f.message}"
        lines.append(
            f"{f.label} [{f.group}] objective={s.objective:.6e} residual={s.residual:.6e} "
            f"penalty={s.penalty:.6e} integral={s.integral:.3e} "
            f"identity_residual={weighted_identity_residual(s.spline):.3e} (rel {rel:.2e}) "
            f"rank={s.report.rank} consistent={s.report.consistent} "
            f"inverse={s.report.inverse_kind.value} {status}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text, all(f.ok for f in fits)


@dataclass(frozen=True)
class CoefficientAudit:
    label: str
    group: str
    integral: float
    identity_residual: float
    relative: float
    ok: bool


def audit_coefficients(labels, groups, coeffs, knots: KnotConfig, rtol: float = 1e-3):
    """Check the zero-integral identity on externally supplied coefficient rows."""
    space = build_space(knots)
    out = []
    for lab, grp, b in zip(labels, groups, np.atleast_2d(coeffs)):
        s = Spline(space, b)
        rel = relative_identity_residual(s)
        out.append(CoefficientAudit(lab, grp, integrate(s), weighted_identity_residual(s),
                                    rel, rel <= rtol))
    return out


def cmd_audit(table, config: FitConfig, rtol: float = 1e-3, out=None) -> tuple[str, bool]:
    """Report the identity residual of ``(labels, groups, coeffs)`` from a coefficient table."""
    knots = KnotConfig(config.knots[0], config.knots[-1], config.knots[1:-1], config.degree)
    audits = audit_coefficients(*table, knots, rtol)
    lines = [f"coefficient audit: knots={list(config.knots)} degree={config.degree} rtol={rtol:g}"]
    for a in audits:
        lines.append(f"{a.label} [{a.group}] integral={a.integral:.6g} "
                     f"identity_residual={a.identity_residual:.6g} (rel {a.relative:.2e}) "
                     f"{'ok' if a.ok else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text, all(a.ok for a in audits)
