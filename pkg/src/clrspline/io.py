"""Histogram tables on disk and the fitting configuration."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .bspline import KnotConfig, SplineSpace, build_space
from .clr import MIN_GRID, HistogramSample
from .exceptions import IngestError, InvalidConfigError
from .ginverse import DEFAULT_RCOND

MODES = ("zero_integral_clr", "unconstrained_raw")
INPUT_KINDS = ("proportions", "clr")


@dataclass(frozen=True)
class DatasetRow:
    label: str
    group: str
    values: np.ndarray


@dataclass(frozen=True)
class Dataset:
    """Rows of per-class values sharing one set of class midpoints."""

    midpoints: np.ndarray
    rows: tuple[DatasetRow, ...]
    kind: str = "proportions"

    def __len__(self):
        return len(self.rows)

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.rows]

    @property
    def values(self) -> np.ndarray:
        return np.array([r.values for r in self.rows]).reshape(len(self.rows), -1)

    def sample(self, i: int) -> HistogramSample:
        return HistogramSample(self.midpoints, self.rows[i].values)


def _parse_float(cell, where):
    try:
        val = float(cell)
    except ValueError:
        raise IngestError(f"{where}: non-numeric value {cell!r}") from None
    if not np.isfinite(val):
        raise IngestError(f"{where}: non-finite value {cell!r}")
    return val


def read_histogram_csv(source, kind: str = "proportions") -> Dataset:
    """Parse a ``label,group,<midpoint1>,...`` table from a path or text stream.

    ``kind="proportions"`` additionally requires strictly positive rows
    summing to one (within the rounding tolerance of published tables).
    """
    if kind not in INPUT_KINDS:
        raise IngestError(f"unknown input kind {kind!r}")
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8-sig") as fh:
            records = list(csv.reader(fh))
    else:
        records = list(csv.reader(source))
    records = [r for r in records if any(c.strip() for c in r)]
    if not records:
        raise IngestError("empty file")
    header = [c.strip() for c in records[0]]
    if len(header) < 3:
        raise IngestError("header needs label, group and at least one midpoint column")
    midpoints = np.array([_parse_float(c, f"header column {j + 1}")
                          for j, c in enumerate(header[2:], start=2)])
    rows, seen = [], set()
    for lineno, rec in enumerate(records[1:], start=2):
        if len(rec) != len(header):
            raise IngestError(f"line {lineno}: expected {len(header)} fields, got {len(rec)}")
        label, group = rec[0].strip(), rec[1].strip()
        if label in seen:
            raise IngestError(f"line {lineno}: duplicate label {label!r}")
        seen.add(label)
        vals = np.array([_parse_float(c, f"line {lineno}, column {j + 1}")
                         for j, c in enumerate(rec[2:], start=2)])
        if kind == "proportions":
            bad = np.flatnonzero(vals <= 0)
            if bad.size:
                j = int(bad[0])
                raise IngestError(
                    f"line {lineno}, column {j + 3} ({label!r}, class {j + 1}): proportion "
                    f"{vals[j]!r} is not positive; zero counts must be imputed upstream "
                    "before the logratio transform")
            try:
                HistogramSample(midpoints, vals)
            except ValueError as exc:
                raise IngestError(f"line {lineno} ({label!r}): {exc}") from None
        rows.append(DatasetRow(label, group, vals))
    return Dataset(midpoints, tuple(rows), kind)


parse_histogram_csv = read_histogram_csv


def read_coefficient_csv(source):
    """Read a ``label,group,b_-k,...,b_g[,extra...]`` table.

    Only the ``b_*`` columns are kept; returns labels, groups and a
    ``(rows, dim)`` coefficient array.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8-sig") as fh:
            records = list(csv.reader(fh))
    else:
        records = list(csv.reader(source))
    records = [r for r in records if any(c.strip() for c in r)]
    if len(records) < 2:
        raise IngestError("coefficient table has no rows")
    header = [c.strip() for c in records[0]]
    cols = [j for j, name in enumerate(header) if name.startswith("b_")]
    if not cols:
        raise IngestError("no b_* columns in coefficient table")
    labels, groups, coeffs = [], [], []
    for lineno, rec in enumerate(records[1:], start=2):
        if len(rec) != len(header):
            raise IngestError(f"line {lineno}: expected {len(header)} fields, got {len(rec)}")
        labels.append(rec[0].strip())
        groups.append(rec[1].strip())
        coeffs.append([_parse_float(rec[j], f"line {lineno}, column {j + 1}") for j in cols])
    return labels, groups, np.array(coeffs)


def _fmt(v, precision):
    if precision is None:
        return repr(float(v))
    return f"{v:.{precision}f}"


def _fmt_midpoint(v):
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_table(header: Sequence[str], rows, out=None) -> str:
    """Write CSV rows (LF line endings) to ``out`` or return them as text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def write_dataset_csv(dataset: Dataset, values=None, precision: int | None = None, out=None) -> str:
    """Emit ``dataset`` (or replacement ``values`` with its layout) as CSV."""
    values = dataset.values if values is None else np.asarray(values)
    header = ["label", "group"] + [_fmt_midpoint(m) for m in dataset.midpoints]
    rows = [[r.label, r.group] + [_fmt(v, precision) for v in vals]
            for r, vals in zip(dataset.rows, values)]
    return write_table(header, rows, out)


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package (e.g. ``shiw_income.csv``)."""
    return Path(resources.files("clrspline") / "data" / name)


def load_shiw(kind: str = "proportions") -> Dataset:
    """The bundled 20-region income table (proportions, or its published clr values)."""
    name = "shiw_income.csv" if kind == "proportions" else "shiw_clr.csv"
    return read_histogram_csv(bundled_path(name), kind=kind)


@dataclass(frozen=True)
class FitConfig:
    """Fit settings; defaults reproduce the income case study.

    ``knots`` lists ``a, interior..., b``.  In ``unconstrained_raw`` mode only
    its endpoints are used and the interior knots are the data midpoints.
    """

    knots: tuple[float, ...] = (0.0, 30000.0, 70000.0, 110709.0)
    degree: int = 3
    order: int = 2
    alpha: float = 1.0
    weights: float | tuple[float, ...] = 1.0
    mode: str = "zero_integral_clr"
    grid: int = 500
    rcond: float = DEFAULT_RCOND

    def __post_init__(self):
        knots = tuple(float(v) for v in self.knots)
        if len(knots) < 2:
            raise InvalidConfigError("knots need at least the two endpoints a and b")
        object.__setattr__(self, "knots", knots)
        if not np.isscalar(self.weights):
            object.__setattr__(self, "weights", tuple(float(v) for v in self.weights))
        if self.mode not in MODES:
            raise InvalidConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.grid) != self.grid or self.grid < MIN_GRID:
            raise InvalidConfigError(f"grid must be an integer >= {MIN_GRID}, got {self.grid}")
        if not 1 <= self.order < self.degree:
            raise InvalidConfigError(
                f"order must satisfy 1 <= order < degree, got order={self.order}, degree={self.degree}")
        if not self.alpha > 0:
            raise InvalidConfigError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def from_json(cls, path) -> "FitConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InvalidConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def updated(self, **overrides) -> "FitConfig":
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def space_for(self, midpoints) -> SplineSpace:
        a, b = self.knots[0], self.knots[-1]
        if self.mode == "unconstrained_raw":
            mids = np.asarray(midpoints, dtype=float)
            interior = tuple(mids[(mids > a) & (mids < b)])
        else:
            interior = self.knots[1:-1]
        return build_space(KnotConfig(a, b, interior, self.degree))
