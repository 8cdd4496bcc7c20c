"""Ranking metrics and score-vs-graph-property diagnostics.

Hits@n measures how many ground-truth anomalies land in the top n ranked
predictions.  The correlation report explains a detector run by turning each
tracked graph statistic into a moving-window outlier series and rank-
correlating it with the aggregated z scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _stats

from .errors import ConfigurationError, UndefinedStatisticError, ValidationError
from .graphs import TemporalGraph, graph_stats

TRACKED_PROPERTIES = (
    "edge_count",
    "avg_degree",
    "avg_edge_weight",
    "connected_components",
    "transitivity",
)


def hits_at_n(ranked, truth, n: int) -> float:
    """Fraction of ``truth`` found in the first ``n`` entries of ``ranked``."""
    ranked = list(ranked)
    truth = set(truth)
    if not truth:
        raise UndefinedStatisticError("Hits@n is undefined for an empty truth set")
    if n < 1 or n > len(ranked):
        raise ValidationError(
            f"n must be in 1..{len(ranked)} (length of ranking), got {n}"
        )
    return len(set(ranked[:n]) & truth) / len(truth)


def property_outlier_scores(series, window: int) -> np.ndarray:
    """Moving-window outlier score of a scalar series.

    For t >= window, the score is |x_t - mean| / std over the ``window``
    values immediately before t (sample std, divisor n-1); earlier positions
    score 0.  A zero-std window scores 0 when x_t equals the window mean;
    otherwise the score is infinite and is replaced by the largest finite
    score in the output series (0 if there is none), which keeps the result
    translation- and scale-invariant.
    """
    series = np.asarray(series, dtype=np.float64)
    if window < 2:
        raise ConfigurationError(f"window must be >= 2, got {window}")
    if series.size <= window:
        raise ConfigurationError(
            f"series length ({series.size}) must exceed window ({window})"
        )
    windows = np.lib.stride_tricks.sliding_window_view(series, window)[:-1]
    means = windows.mean(axis=1)
    stds = windows.std(axis=1, ddof=1)
    current = series[window:]
    dev = np.abs(current - means)
    scores = np.zeros(series.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(stds > 0, dev / stds, np.where(dev == 0, 0.0, np.inf))
    finite = tail[np.isfinite(tail)]
    cap = finite.max() if finite.size else 0.0
    scores[window:] = np.where(np.isinf(tail), cap, tail)
    return scores


def spearman(a, b) -> float:
    """Spearman rank correlation (average ranks on ties)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("inputs must be 1-d vectors of equal length")
    if a.size < 2:
        raise ValidationError("need at least 2 observations")
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise UndefinedStatisticError(
            "rank correlation is undefined for a constant input"
        )
    rho = float(_stats.spearmanr(a, b).statistic)
    if not np.isfinite(rho):
        raise UndefinedStatisticError("rank correlation is undefined for this input")
    return rho


@dataclass(frozen=True)
class PropertyCorrelation:
    """One report row; ``rho`` is None when the correlation is undefined."""

    name: str
    rho: float | None

    @property
    def undefined(self):
        return self.rho is None


@dataclass(frozen=True)
class CorrelationReport:
    """Per-property rank correlations against the z series, sorted by |rho|."""

    rows: tuple
    window: int


def property_series(g: TemporalGraph):
    """Per-snapshot series of every tracked graph statistic."""
    all_stats = [graph_stats(s) for s in g]
    return {
        name: np.array([float(getattr(st, name)) for st in all_stats])
        for name in TRACKED_PROPERTIES
    }


def correlation_report(scores, g: TemporalGraph, window: int) -> CorrelationReport:
    """Rank-correlate each property's outlier series with the z scores.

    ``scores`` may be an AnomalyScoreSeries or a raw z array.  Rows come back
    sorted by |rho| descending with undefined correlations last.
    """
    z = np.asarray(getattr(scores, "z", scores), dtype=np.float64)
    if z.size != len(g):
        raise ValidationError(
            f"score series length ({z.size}) != snapshot count ({len(g)})"
        )
    rows = []
    for name, series in property_series(g).items():
        outliers = property_outlier_scores(series, window)
        try:
            rho = spearman(outliers, z)
        except UndefinedStatisticError:
            rho = None
        rows.append(PropertyCorrelation(name, rho))
    rows.sort(key=lambda r: -abs(r.rho) if r.rho is not None else 1.0)
    return CorrelationReport(tuple(rows), window)


def write_correlation_csv(report: CorrelationReport, path) -> None:
    """Write a correlation report as CSV with columns property,rho."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("property,rho\n")
        for row in report.rows:
            value = "undefined" if row.undefined else repr(float(row.rho))
            fh.write(f"{row.name},{value}\n")


def format_correlation_table(report: CorrelationReport) -> str:
    """Human-readable table of a correlation report."""
    width = max(len(r.name) for r in report.rows)
    lines = [f"{'property'.ljust(width)}  rho"]
    for row in report.rows:
        value = "undefined" if row.undefined else f"{row.rho:+.4f}"
        lines.append(f"{row.name.ljust(width)}  {value}")
    return "\n".join(lines)
