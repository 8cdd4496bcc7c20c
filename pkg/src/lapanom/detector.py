"""Dual sliding-window scoring of embedding sequences.

For each timestep t past the startup period, the recent signature vectors
are summarized into a "typical behavior" direction over a short and a long
window, the current vector's cosine dissimilarity from each gives the two
window scores, their pointwise maximum is the aggregated score z, and the
positive jump z*[t] = max(z[t] - z[t-1], 0) ranks anomalies.  Change points
and one-off events both surface as z* spikes at their onset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError, ValidationError
from .graphs import TemporalGraph
from .spectra import EmbeddingKind, SignatureVector, embed_sequence

_ORIENT_EPS = 1e-12


@dataclass(frozen=True)
class DetectorConfig:
    """Window sizes and embedding choice; requires 1 <= short <= long."""

    short_window: int
    long_window: int
    embedding: EmbeddingKind = EmbeddingKind.laplacian()

    def __post_init__(self):
        if self.short_window < 1:
            raise ConfigurationError(
                f"short_window must be >= 1, got {self.short_window}"
            )
        if self.long_window < self.short_window:
            raise ConfigurationError(
                f"long_window ({self.long_window}) must be >= short_window "
                f"({self.short_window})"
            )


@dataclass(frozen=True, eq=False)
class AnomalyScoreSeries:
    """Per-timestep scores plus the ranked anomaly list.

    ``z[t] = max(z_short[t], z_long[t])`` lies in [0, 1];
    ``z_star[t] = max(z[t] - z[t-1], 0)``; all series are zero during the
    startup period t <= long_window.  ``ranked`` holds every time index
    sorted by z_star descending, earlier timestep first on ties.
    """

    z_short: np.ndarray
    z_long: np.ndarray
    z: np.ndarray
    z_star: np.ndarray
    ranked: tuple

    def __post_init__(self):
        for name in ("z_short", "z_long", "z", "z_star"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "ranked", tuple(int(t) for t in self.ranked))

    def __len__(self):
        return self.z.size

    def top(self, n: int):
        """The n highest-z* time indices."""
        return list(self.ranked[:n])


def _unit(vec):
    vec = np.asarray(vec, dtype=np.float64)
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def _values(item):
    return item.values if isinstance(item, SignatureVector) else np.asarray(item, float)


def normal_behavior(context) -> np.ndarray:
    """Typical-behavior direction of a window of signature vectors.

    Each vector is L2-normalized, the normalized vectors are stacked as
    columns of a context matrix, and the top left singular vector of that
    matrix is returned, oriented entrywise nonnegative (first nonzero
    coordinate positive).  An all-zero context returns the zero vector,
    which marks the context as degenerate.
    """
    columns = [_unit(_values(v)) for v in context]
    if not columns:
        raise ValidationError("context must contain at least one vector")
    C = np.column_stack(columns)
    if not C.any():
        return np.zeros(C.shape[0])
    u = np.linalg.svd(C, full_matrices=False)[0][:, 0]
    nonzero = np.nonzero(np.abs(u) > _ORIENT_EPS)[0]
    if nonzero.size and u[nonzero[0]] < 0:
        u = -u
    return u


def z_score(current, typical) -> float:
    """Cosine dissimilarity 1 - cos(current, typical), clamped to [0, 1].

    ``current`` is L2-normalized first; ``typical`` is expected to be a unit
    vector (or the zero vector for a degenerate context).  Conventions for
    degenerate inputs: both zero scores 0, exactly one zero scores 1.
    """
    current = np.asarray(current, dtype=np.float64)
    typical = np.asarray(typical, dtype=np.float64)
    if current.shape != typical.shape:
        raise DimensionError(
            f"vector lengths differ: {current.shape} vs {typical.shape}"
        )
    cur = _unit(current)
    cur_zero = not cur.any()
    typ_zero = not typical.any()
    if cur_zero and typ_zero:
        return 0.0
    if cur_zero or typ_zero:
        return 1.0
    return float(min(max(1.0 - float(cur @ typical), 0.0), 1.0))


def score_series(embeddings, cfg: DetectorConfig) -> AnomalyScoreSeries:
    """Score an embedding sequence with dual sliding windows.

    For t > long_window, the short (long) window covers the s (l) vectors
    immediately before t, excluding t itself; the startup period t <=
    long_window scores zero everywhere.
    """
    values = np.asarray([_values(e) for e in embeddings], dtype=np.float64)
    total = values.shape[0]
    s, l = cfg.short_window, cfg.long_window
    if total <= l:
        raise ConfigurationError(
            f"long_window ({l}) must be smaller than the number of "
            f"snapshots ({total})"
        )
    z_short = np.zeros(total)
    z_long = np.zeros(total)
    z = np.zeros(total)
    z_star = np.zeros(total)
    for t in range(l + 1, total):
        typical_short = normal_behavior(values[t - s : t])
        typical_long = normal_behavior(values[t - l : t])
        z_short[t] = z_score(values[t], typical_short)
        z_long[t] = z_score(values[t], typical_long)
        z[t] = max(z_short[t], z_long[t])
        z_star[t] = max(z[t] - z[t - 1], 0.0)
    ranked = np.argsort(-z_star, kind="stable")  # stable sort: ties keep time order
    return AnomalyScoreSeries(z_short, z_long, z, z_star, tuple(ranked))


def detect(g: TemporalGraph, cfg: DetectorConfig) -> AnomalyScoreSeries:
    """Full pipeline: embed every snapshot, then score the sequence."""
    return score_series(embed_sequence(g, cfg.embedding), cfg)


def write_scores_csv(series: AnomalyScoreSeries, path) -> None:
    """Write per-timestep scores as CSV with columns t,z_short,z_long,z,z_star."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,z_short,z_long,z,z_star\n")
        for t in range(len(series)):
            fh.write(
                f"{t},{float(series.z_short[t])!r},{float(series.z_long[t])!r},"
                f"{float(series.z[t])!r},{float(series.z_star[t])!r}\n"
            )


def read_scores_csv(path):
    """Read a scores CSV back into a dict of float arrays keyed by column."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        expected = ["t", "z_short", "z_long", "z", "z_star"]
        if header != expected:
            raise ValidationError(
                f"{path}: unexpected scores header {header!r}"
            )
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.asarray(rows, dtype=np.float64)
    if data.size == 0:
        raise ValidationError(f"{path}: empty scores file")
    return {name: np.ascontiguousarray(data[:, i]) for i, name in enumerate(expected)}


def write_ranked_json(series: AnomalyScoreSeries, path) -> None:
    """Write the ranked anomaly list as a JSON array of {t, z_star}."""
    payload = [
        {"t": int(t), "z_star": float(series.z_star[t])} for t in series.ranked
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_ranked_json(path):
    """Read a ranked-anomalies JSON file; returns the time indices in rank order."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        return [int(entry["t"]) for entry in payload]
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"{path}: not a ranked-anomalies file") from exc
