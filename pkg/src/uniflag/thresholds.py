"""Per-variable risk threshold detection.

For one continuous variable, candidate cuts are laid out on each side of
the median (interior boundaries of equal-length segments). Each cut
defines an outside region (strictly below the cut on the low side,
strictly above it on the high side) whose outcome rate is compared with
the rate inside the interquartile range using a two-sample binomial
proportion z-test. The cut with the largest |z| wins, and survives only
if |z| reaches the critical value.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend
from ._kernels_py import z_from_counts
from .data import ColumnStats, Dataset, VariableColumn, column_stats
from .errors import FileUnwritable, InsufficientData


class Side(Enum):
    BELOW_MEDIAN = "below_median"
    ABOVE_MEDIAN = "above_median"


class Direction(Enum):
    LESS_THAN = "less_than"
    MORE_THAN = "more_than"

    @property
    def phrase(self) -> str:
        return "Less Than" if self is Direction.LESS_THAN else "More Than"


class Polarity(Enum):
    HIGH_RISK = "high_risk"
    LOW_RISK = "low_risk"


def direction_for(side: Side) -> Direction:
    return Direction.LESS_THAN if side is Side.BELOW_MEDIAN else Direction.MORE_THAN


@dataclass(frozen=True)
class DetectionConfig:
    """Grid size, minimum outside-region support, and significance bar."""

    n_segments: int = 50
    min_support: int = 5
    critical_value: float = 2.576

    def __post_init__(self):
        if self.n_segments < 2:
            raise ValueError("n_segments must be >= 2")
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if not self.critical_value > 0:
            raise ValueError("critical_value must be positive")


@dataclass(frozen=True)
class CandidateThreshold:
    """One evaluated cut: outside-region size, outcome rate and z."""

    cut: float
    side: Side
    n_outside: int
    p_outside: float
    z: float


@dataclass(frozen=True)
class ThresholdRule:
    """A fitted cutpoint for one variable and one side of its median."""

    variable: str
    side: Side
    direction: Direction
    cut: float
    n_outside: int
    p_outside: float
    n_iqr: int
    p_iqr: float
    z: float
    significant: bool
    polarity: Polarity

    @property
    def phrase(self) -> str:
        """Human-readable threshold, e.g. ``Less Than 4.71``."""
        return f"{self.direction.phrase} {self.cut:g}"

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "side": self.side.value,
            "direction": self.direction.value,
            "cut": self.cut,
            "n_outside": self.n_outside,
            "p_outside": self.p_outside,
            "n_iqr": self.n_iqr,
            "p_iqr": self.p_iqr,
            "z": self.z,
            "significant": self.significant,
            "polarity": self.polarity.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdRule":
        return cls(
            variable=d["variable"],
            side=Side(d["side"]),
            direction=Direction(d["direction"]),
            cut=float(d["cut"]),
            n_outside=int(d["n_outside"]),
            p_outside=float(d["p_outside"]),
            n_iqr=int(d["n_iqr"]),
            p_iqr=float(d["p_iqr"]),
            z=float(d["z"]),
            significant=bool(d["significant"]),
            polarity=Polarity(d["polarity"]),
        )


RULE_FIELDS = ("variable", "side", "direction", "cut", "n_outside", "p_outside",
               "n_iqr", "p_iqr", "z", "significant", "polarity")


def _iqr_counts(col: VariableColumn, target: np.ndarray,
                stats: ColumnStats | None = None) -> tuple[int, int]:
    """(n_iqr, positives in iqr) with closed bounds on both percentiles."""
    if col.n_present < 4:
        raise InsufficientData(
            f"column {col.name!r} needs >= 4 present values for the baseline")
    if stats is None:
        stats = column_stats(col)
    values = col.values
    mask = col.present_mask & (values >= stats.p25) & (values <= stats.p75)
    n_iqr = int(mask.sum())
    if n_iqr == 0:
        raise InsufficientData(f"column {col.name!r} has an empty interquartile range")
    pos_iqr = int(np.asarray(target)[mask].sum())
    return n_iqr, pos_iqr


def baseline_iqr(col: VariableColumn, target) -> tuple[int, float]:
    """Size and outcome rate of the interquartile baseline population."""
    n_iqr, pos_iqr = _iqr_counts(col, np.asarray(target))
    return n_iqr, pos_iqr / n_iqr


def _interior_cuts(lo: float, hi: float, n_segments: int) -> np.ndarray:
    """The n_segments - 1 interior boundaries of [lo, hi]; empty if hi <= lo."""
    if not hi > lo:
        return np.empty(0, dtype=np.float64)
    width = (hi - lo) / n_segments
    return lo + width * np.arange(1, n_segments, dtype=np.float64)


def segment_width(stats: ColumnStats, side: Side, cfg: DetectionConfig) -> float:
    """Grid resolution for one side: span divided by the segment count."""
    if side is Side.BELOW_MEDIAN:
        return (stats.median - stats.minimum) / cfg.n_segments
    return (stats.maximum - stats.median) / cfg.n_segments


def _raw_cuts(stats: ColumnStats, side: Side, cfg: DetectionConfig) -> np.ndarray:
    if side is Side.BELOW_MEDIAN:
        return _interior_cuts(stats.minimum, stats.median, cfg.n_segments)
    return _interior_cuts(stats.median, stats.maximum, cfg.n_segments)


def candidate_grid(col: VariableColumn, side: Side,
                   cfg: DetectionConfig = DetectionConfig()) -> np.ndarray:
    """Candidate cuts for one side, ascending, support-filtered.

    Cuts whose outside region holds fewer than ``cfg.min_support`` present
    values are dropped. A degenerate span (min = median, or median = max)
    yields an empty grid.
    """
    if col.n_present < cfg.min_support + 1:
        raise InsufficientData(
            f"column {col.name!r} needs more than min_support present values")
    stats = column_stats(col)
    cuts = _raw_cuts(stats, side, cfg)
    if cuts.size == 0:
        return cuts
    values = np.sort(col.present_values)
    if side is Side.BELOW_MEDIAN:
        support = np.searchsorted(values, cuts, side="left")
    else:
        support = values.size - np.searchsorted(values, cuts, side="right")
    return cuts[support >= cfg.min_support]


def evaluate_candidate(cut: float, side: Side, col: VariableColumn, target,
                       baseline: tuple[int, float]) -> CandidateThreshold:
    """z-statistic of one cut against a baseline produced by baseline_iqr.

    Region membership is strict (value < cut below the median, value > cut
    above it); missing cells belong to no region.
    """
    n_iqr, p_iqr = baseline
    pos_iqr = int(round(p_iqr * n_iqr))
    y = np.asarray(target)
    values = col.values
    if side is Side.BELOW_MEDIAN:
        mask = col.present_mask & (values < cut)
    else:
        mask = col.present_mask & (values > cut)
    n_out = int(mask.sum())
    if n_out == 0:
        raise InsufficientData(f"no observations outside cut {cut!r}")
    pos_out = int(y[mask].sum())
    z = z_from_counts(n_iqr, pos_iqr, n_out, pos_out)
    return CandidateThreshold(cut=float(cut), side=side, n_outside=n_out,
                              p_outside=pos_out / n_out, z=z)


def _sorted_with_prefix(col: VariableColumn, target: np.ndarray):
    """Present values sorted ascending plus a prefix sum of their labels."""
    mask = col.present_mask
    values = col.values[mask]
    labels = np.asarray(target)[mask]
    order = np.argsort(values, kind="stable")
    values = np.ascontiguousarray(values[order])
    prefix = np.zeros(values.size + 1, dtype=np.int64)
    np.cumsum(labels[order], out=prefix[1:])
    return values, prefix


def best_candidate_rule(col: VariableColumn, target, side: Side,
                        cfg: DetectionConfig = DetectionConfig()) -> ThresholdRule | None:
    """The argmax-|z| rule for one (variable, side), significant or not.

    Returns None when the grid is empty or no cut clears the support
    filter. Ties on |z| prefer larger support, then the smallest cut.
    """
    y = np.asarray(target)
    if col.n_present < 2 * cfg.min_support:
        raise InsufficientData(
            f"column {col.name!r} needs >= {2 * cfg.min_support} present values")
    stats = column_stats(col)
    n_iqr, pos_iqr = _iqr_counts(col, y, stats)
    cuts = _raw_cuts(stats, side, cfg)
    if cuts.size == 0:
        return None
    values, prefix = _sorted_with_prefix(col, y)
    hit = _backend.kernels.scan_best(
        values, prefix, np.ascontiguousarray(cuts),
        side is Side.BELOW_MEDIAN, n_iqr, pos_iqr, cfg.min_support)
    if hit is None:
        return None
    i, n_out, pos_out, z = hit
    return ThresholdRule(
        variable=col.name,
        side=side,
        direction=direction_for(side),
        cut=float(cuts[i]),
        n_outside=n_out,
        p_outside=pos_out / n_out,
        n_iqr=n_iqr,
        p_iqr=pos_iqr / n_iqr,
        z=z,
        significant=abs(z) >= cfg.critical_value,
        polarity=Polarity.HIGH_RISK if z > 0 else Polarity.LOW_RISK,
    )


def detect_threshold(col: VariableColumn, target, side: Side,
                     cfg: DetectionConfig = DetectionConfig()) -> ThresholdRule | None:
    """Optimal threshold for one (variable, side); None unless significant."""
    rule = best_candidate_rule(col, target, side, cfg)
    if rule is None or not rule.significant:
        return None
    return rule


@dataclass(frozen=True)
class DetectionResult:
    """Significant rules in deterministic order, plus per-variable warnings."""

    rules: tuple[ThresholdRule, ...]
    warnings: tuple[str, ...]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def detect_all(data: Dataset, cfg: DetectionConfig = DetectionConfig(),
               n_threads: int = 1) -> DetectionResult:
    """Run detection for every (variable, side) pair of the dataset.

    Output order is variable order with the below-median side first,
    regardless of thread count. Variables that cannot be scanned are
    skipped with a warning rather than an error.
    """
    y = np.asarray(data.target)
    warnings: list[str] = []
    jobs: list[tuple[VariableColumn, Side]] = []
    for col in data.variables:
        if col.n_present < max(4, 2 * cfg.min_support):
            warnings.append(f"{col.name}: skipped (too few present values)")
            continue
        stats = column_stats(col)
        if stats.minimum == stats.maximum:
            warnings.append(f"{col.name}: skipped (constant column)")
            continue
        jobs.append((col, Side.BELOW_MEDIAN))
        jobs.append((col, Side.ABOVE_MEDIAN))

    def run(job: tuple[VariableColumn, Side]) -> ThresholdRule | None:
        col, side = job
        try:
            return detect_threshold(col, y, side, cfg)
        except InsufficientData as exc:
            warnings.append(f"{col.name}: skipped ({exc})")
            return None

    if n_threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            found = list(pool.map(run, jobs))
    else:
        found = [run(job) for job in jobs]
    rules = tuple(r for r in found if r is not None)
    return DetectionResult(rules=rules, warnings=tuple(warnings))


def write_rules_json(rules, path) -> None:
    """Rule-set export: JSON array in detection order, full precision."""
    doc = [r.to_dict() for r in rules]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise FileUnwritable(f"cannot write {path}: {exc}") from exc


def read_rules_json(path) -> tuple[ThresholdRule, ...]:
    with open(path, "r", encoding="utf-8") as fh:
        return tuple(ThresholdRule.from_dict(d) for d in json.load(fh))


def write_rules_csv(rules, path) -> None:
    """CSV rendering with the same columns as the JSON export."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RULE_FIELDS)
            for r in rules:
                d = r.to_dict()
                writer.writerow([repr(d[f]) if isinstance(d[f], float) else d[f]
                                 for f in RULE_FIELDS])
    except OSError as exc:
        raise FileUnwritable(f"cannot write {path}: {exc}") from exc
