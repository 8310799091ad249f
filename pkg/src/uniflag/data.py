"""Column-oriented dataset with explicit per-cell missing values.

Missing cells are kept in place (as NaN internally) rather than dropping
rows, because each variable excludes its own missing cells while the row
stays available to every other variable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyColumn,
    FileUnreadable,
    FileUnwritable,
    MissingTargetColumn,
    NonBinaryTarget,
    UnparseableCell,
)

DEFAULT_MISSING_TOKENS = frozenset({"", "NA", "NaN"})


def validate_target(labels: Iterable[int]) -> np.ndarray:
    """Coerce labels to an int8 array, insisting every entry is 0 or 1."""
    arr = np.asarray(list(labels) if not isinstance(labels, np.ndarray) else labels)
    if arr.ndim != 1:
        raise ValueError("target must be one-dimensional")
    values = np.unique(arr)
    for v in values:
        if v not in (0, 1):
            raise NonBinaryTarget(f"target contains non-binary value {v!r}")
    out = arr.astype(np.int8)
    out.flags.writeable = False
    return out


class VariableColumn:
    """One named continuous variable; NaN cells are the missing marker."""

    __slots__ = ("name", "values")

    def __init__(self, name: str, values: np.ndarray):
        if not name:
            raise ValueError("variable name must be non-empty")
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"column {name!r} must be one-dimensional")
        if np.isinf(arr).any():
            raise ValueError(f"column {name!r} contains non-finite present values")
        arr = arr.copy()
        arr.flags.writeable = False
        self.name = name
        self.values = arr

    @classmethod
    def from_cells(cls, name: str, cells: Iterable[float | None]) -> "VariableColumn":
        """Build from a sequence where None marks a missing cell."""
        return cls(name, np.array([math.nan if c is None else float(c) for c in cells]))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def present_mask(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @property
    def present_values(self) -> np.ndarray:
        return self.values[self.present_mask]

    @property
    def n_present(self) -> int:
        return int(self.present_mask.sum())


@dataclass(frozen=True)
class ColumnStats:
    minimum: float
    maximum: float
    median: float
    p25: float
    p75: float
    n_present: int


def column_stats(col: VariableColumn) -> ColumnStats:
    """Order statistics over the present cells only.

    Quantiles use linear interpolation between closest ranks (numpy's
    default "linear" method), fixed so detection grids are reproducible.
    """
    present = col.present_values
    if present.size == 0:
        raise EmptyColumn(f"column {col.name!r} has no present values")
    p25, med, p75 = np.quantile(present, [0.25, 0.5, 0.75], method="linear")
    return ColumnStats(
        minimum=float(present.min()),
        maximum=float(present.max()),
        median=float(med),
        p25=float(p25),
        p75=float(p75),
        n_present=int(present.size),
    )


class Dataset:
    """Immutable table: ordered variable columns plus one binary target."""

    __slots__ = ("variables", "target", "target_name", "_by_name")

    def __init__(self, variables: Sequence[VariableColumn], target,
                 target_name: str = "target"):
        variables = tuple(variables)
        target = validate_target(target)
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for v in variables:
            if len(v) != len(target):
                raise ValueError(
                    f"column {v.name!r} has {len(v)} cells, target has {len(target)}")
        self.variables = variables
        self.target = target
        self.target_name = target_name
        self._by_name = {v.name: v for v in variables}

    @property
    def n_rows(self) -> int:
        return len(self.target)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> VariableColumn:
        return self._by_name[name]

    def select_rows(self, indices) -> "Dataset":
        """Row subset (or resample: repeated indices are allowed)."""
        idx = np.asarray(indices)
        return Dataset(
            [VariableColumn(v.name, v.values[idx]) for v in self.variables],
            np.asarray(self.target)[idx],
            target_name=self.target_name,
        )

    def values_matrix(self) -> np.ndarray:
        """n_rows x n_vars float copy with NaN for missing cells."""
        if not self.variables:
            return np.empty((self.n_rows, 0))
        return np.column_stack([v.values for v in self.variables])


def _format_cell(x: float) -> str:
    return repr(float(x))


def load_csv(path, target_column: str,
             missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS) -> Dataset:
    """Read an RFC-4180-style CSV (header row required) into a Dataset.

    Cells matching a missing token become missing markers; the target
    column must contain only 0 and 1.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileUnreadable(f"{path} is empty (no header row)") from None
        if target_column not in header:
            raise MissingTargetColumn(
                f"target column {target_column!r} not in header {header}")
        t_idx = header.index(target_column)
        var_names = [h for i, h in enumerate(header) if i != t_idx]

        cells: list[list[float]] = [[] for _ in var_names]
        target: list[int] = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise UnparseableCell(
                    f"row {row_no}: expected {len(header)} cells, got {len(row)}")
            raw_t = row[t_idx].strip()
            if raw_t == "0":
                target.append(0)
            elif raw_t == "1":
                target.append(1)
            else:
                raise NonBinaryTarget(
                    f"row {row_no}: target value {raw_t!r} is not 0 or 1")
            k = 0
            for i, raw in enumerate(row):
                if i == t_idx:
                    continue
                token = raw.strip()
                if token in missing_tokens:
                    cells[k].append(math.nan)
                else:
                    try:
                        value = float(token)
                    except ValueError:
                        raise UnparseableCell(
                            f"row {row_no}, column {var_names[k]!r}: "
                            f"cannot parse {raw!r}") from None
                    if not math.isfinite(value):
                        raise UnparseableCell(
                            f"row {row_no}, column {var_names[k]!r}: "
                            f"non-finite value {raw!r}")
                    cells[k].append(value)
                k += 1

    columns = [VariableColumn(name, np.array(c, dtype=np.float64))
               for name, c in zip(var_names, cells)]
    return Dataset(columns, np.array(target, dtype=np.int8), target_name=target_column)


def load_feature_csv(path, missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS,
                     target_name: str = "target") -> Dataset:
    """Read a CSV that has no target column (for scoring unlabeled data).

    The returned Dataset carries an all-zero placeholder target.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileUnreadable(f"{path} is empty (no header row)") from None
        cells: list[list[float]] = [[] for _ in header]
        n_rows = 0
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise UnparseableCell(
                    f"row {row_no}: expected {len(header)} cells, got {len(row)}")
            n_rows += 1
            for k, raw in enumerate(row):
                token = raw.strip()
                if token in missing_tokens:
                    cells[k].append(math.nan)
                else:
                    try:
                        value = float(token)
                    except ValueError:
                        raise UnparseableCell(
                            f"row {row_no}, column {header[k]!r}: "
                            f"cannot parse {raw!r}") from None
                    if not math.isfinite(value):
                        raise UnparseableCell(
                            f"row {row_no}, column {header[k]!r}: "
                            f"non-finite value {raw!r}")
                    cells[k].append(value)
    columns = [VariableColumn(name, np.array(c, dtype=np.float64))
               for name, c in zip(header, cells)]
    return Dataset(columns, np.zeros(n_rows, dtype=np.int8), target_name=target_name)


def save_csv(data: Dataset, path, missing_token: str = "NA") -> None:
    """Write a Dataset back to CSV; full-precision floats, LF newlines."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise FileUnwritable(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(data.names) + [data.target_name])
        matrix = data.values_matrix()
        for r in range(data.n_rows):
            row = [missing_token if math.isnan(x) else _format_cell(x)
                   for x in matrix[r]]
            row.append(str(int(data.target[r])))
            writer.writerow(row)
