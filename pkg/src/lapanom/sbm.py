"""Stochastic block model generator for labeled change-point/event scenarios.

A scenario is a sequence of SBM segments over a fixed node set.  Between
anomalies, each snapshot evolves from the previous one under a continuity
rate c: every node pair keeps its previous edge state with probability c and
is resampled from the current model with probability 1 - c.  Anomaly onsets
(change points and events) use the at-change continuity rate, 0 by default,
i.e. a fresh draw from the new model.  A change point switches the model
permanently.  An event applies its model for exactly one snapshot and does
not enter the evolution chain: the next snapshot evolves from the last
pre-event snapshot under the pre-event model, so the one-step deviation
leaves no trace in later graphs.

Three built-in presets reproduce standard benchmark schedules on 500 nodes
and 151 steps: ``pure`` (7 change points, frozen graph elsewhere),
``hybrid`` (4 one-step events with elevated inter-block density interleaved
with 3 change points, continuity 0.9), and ``resampled`` (the hybrid
schedule with every snapshot redrawn independently).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Snapshot, TemporalGraph

LABEL_START = "start"
LABEL_CHANGE = "change_point"
LABEL_EVENT = "event"
_LABELS = (LABEL_START, LABEL_CHANGE, LABEL_EVENT)

PRESET_NAMES = ("pure", "hybrid", "resampled")


def equal_blocks(n_blocks: int, node_count: int):
    """Split ``node_count`` nodes into ``n_blocks`` near-equal blocks.

    Any remainder goes to the last block.
    """
    if n_blocks < 1 or node_count < n_blocks:
        raise ValidationError(
            f"cannot split {node_count} nodes into {n_blocks} blocks"
        )
    base = node_count // n_blocks
    sizes = [base] * n_blocks
    sizes[-1] += node_count % n_blocks
    return tuple(sizes)


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class SegmentSpec:
    """One generative regime: block sizes and in/out connection probabilities."""

    start: int
    block_sizes: tuple
    p_in: float
    p_ex: float
    label: str = LABEL_CHANGE

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(b) for b in self.block_sizes))
        if self.start < 0:
            raise ValidationError(f"segment start must be >= 0, got {self.start}")
        if not self.block_sizes or any(b < 1 for b in self.block_sizes):
            raise ValidationError("block sizes must be positive integers")
        _check_probability("p_in", self.p_in)
        _check_probability("p_ex", self.p_ex)
        if self.label not in _LABELS:
            raise ValidationError(f"unknown segment label {self.label!r}")

    @property
    def node_count(self):
        return sum(self.block_sizes)


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative description of one synthetic experiment."""

    segments: tuple
    total_steps: int
    continuity_rate_normal: float = 1.0
    continuity_rate_at_change: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValidationError("scenario needs at least one segment")
        starts = [seg.start for seg in self.segments]
        if starts[0] != 0:
            raise ValidationError("first segment must start at time 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValidationError("segment starts must be strictly increasing")
        if self.total_steps <= starts[-1]:
            raise ValidationError(
                f"total_steps ({self.total_steps}) must exceed the last "
                f"segment start ({starts[-1]})"
            )
        n = self.segments[0].node_count
        if any(seg.node_count != n for seg in self.segments):
            raise ValidationError("all segments must cover the same node count")
        for seg in self.segments[1:]:
            if seg.label == LABEL_START:
                raise ValidationError("only the first segment may be labeled 'start'")
        _check_probability("continuity_rate_normal", self.continuity_rate_normal)
        _check_probability("continuity_rate_at_change", self.continuity_rate_at_change)

    @property
    def node_count(self):
        return self.segments[0].node_count


def _pair_probabilities(block_sizes, p_in, p_ex, iu, iv):
    membership = np.repeat(np.arange(len(block_sizes)), block_sizes)
    return np.where(membership[iu] == membership[iv], p_in, p_ex)


def sample_sbm(block_sizes, p_in, p_ex, rng, time_index: int = 0) -> Snapshot:
    """One undirected, self-loop-free, unit-weight SBM draw.

    Node pairs inside a block connect with probability ``p_in``, pairs in
    different blocks with probability ``p_ex``.
    """
    _check_probability("p_in", p_in)
    _check_probability("p_ex", p_ex)
    n = int(sum(block_sizes))
    iu, iv = np.triu_indices(n, k=1)
    probs = _pair_probabilities(block_sizes, p_in, p_ex, iu, iv)
    mask = rng.random(iu.size) < probs
    return Snapshot.from_arrays(
        time_index, iu[mask], iv[mask], node_count=n, directed=False
    )


def evolve_with_continuity(
    prev: Snapshot, model: SegmentSpec, c: float, rng
) -> Snapshot:
    """Advance one step: pairs persist with probability ``c``, else resample.

    With c=1 the output equals ``prev``; with c=0 the output is distributed
    exactly as a fresh draw from ``model``.  The same number of random draws
    is consumed regardless of outcomes, so the stream stays aligned across
    scenarios with one seed.
    """
    _check_probability("continuity rate", c)
    n = model.node_count
    if prev.node_count != n:
        raise ValidationError(
            f"previous snapshot has {prev.node_count} nodes, model has {n}"
        )
    iu, iv = np.triu_indices(n, k=1)
    prev_state = np.zeros((n, n), dtype=bool)
    prev_state[prev.edges["source"], prev.edges["target"]] = True
    prev_pairs = prev_state[iu, iv]
    keep = rng.random(iu.size) < c
    fresh = rng.random(iu.size) < _pair_probabilities(
        model.block_sizes, model.p_in, model.p_ex, iu, iv
    )
    state = np.where(keep, prev_pairs, fresh)
    return Snapshot.from_arrays(
        prev.time_index + 1, iu[state], iv[state], node_count=n, directed=False
    )


def generate_scenario(spec: ScenarioSpec):
    """Generate a labeled temporal graph from a scenario description.

    Returns ``(graph, ground_truth)`` where ground truth lists every segment
    start except t=0 as ``(time_index, label)`` pairs.  Identical specs
    (including the seed) generate identical graphs.
    """
    rng = np.random.default_rng(spec.seed)
    by_start = {seg.start: seg for seg in spec.segments}
    base = spec.segments[0]
    first = sample_sbm(base.block_sizes, base.p_in, base.p_ex, rng, time_index=0)
    snapshots = [first]
    chain = first  # last snapshot that belongs to the persistent process
    for t in range(1, spec.total_steps):
        seg = by_start.get(t)
        if seg is None:
            snap = evolve_with_continuity(chain, base, spec.continuity_rate_normal, rng)
            chain = snap
        elif seg.label == LABEL_EVENT:
            # One-step deviation: drawn at the at-change rate, excluded from
            # the chain so later snapshots are unaffected by it.
            snap = evolve_with_continuity(
                chain, seg, spec.continuity_rate_at_change, rng
            )
        else:
            snap = evolve_with_continuity(
                chain, seg, spec.continuity_rate_at_change, rng
            )
            base = seg
            chain = snap
        if snap.time_index != t:
            snap = Snapshot(t, snap.edges, snap.node_count, snap.directed)
        snapshots.append(snap)
    truth = [(seg.start, seg.label) for seg in spec.segments[1:]]
    return TemporalGraph.from_snapshots(snapshots), truth


_PURE_ROWS = (
    (0, 4, 0.25, 0.05, LABEL_START),
    (16, 10, 0.25, 0.05, LABEL_CHANGE),
    (31, 2, 0.50, 0.05, LABEL_CHANGE),
    (61, 4, 0.25, 0.05, LABEL_CHANGE),
    (76, 10, 0.25, 0.05, LABEL_CHANGE),
    (91, 2, 0.50, 0.05, LABEL_CHANGE),
    (106, 4, 0.25, 0.05, LABEL_CHANGE),
    (136, 10, 0.25, 0.05, LABEL_CHANGE),
)

_HYBRID_ROWS = (
    (0, 4, 0.25, 0.05, LABEL_START),
    (16, 4, 0.25, 0.15, LABEL_EVENT),
    (31, 10, 0.25, 0.05, LABEL_CHANGE),
    (61, 10, 0.25, 0.15, LABEL_EVENT),
    (76, 2, 0.50, 0.05, LABEL_CHANGE),
    (91, 2, 0.50, 0.15, LABEL_EVENT),
    (106, 4, 0.25, 0.05, LABEL_CHANGE),
    (136, 4, 0.25, 0.15, LABEL_EVENT),
)


def preset_scenario(
    name: str, seed: int = 0, node_count: int = 500, total_steps: int = 151
) -> ScenarioSpec:
    """Build one of the built-in scenario presets (see module docstring)."""
    if name == "pure":
        rows, normal, at_change = _PURE_ROWS, 1.0, 0.0
    elif name == "hybrid":
        rows, normal, at_change = _HYBRID_ROWS, 0.9, 0.0
    elif name == "resampled":
        rows, normal, at_change = _HYBRID_ROWS, 0.0, 0.0
    else:
        raise ValidationError(
            f"unknown preset {name!r}; expected one of {PRESET_NAMES}"
        )
    segments = tuple(
        SegmentSpec(start, equal_blocks(nc, node_count), p_in, p_ex, label)
        for start, nc, p_in, p_ex, label in rows
    )
    return ScenarioSpec(
        segments=segments,
        total_steps=total_steps,
        continuity_rate_normal=normal,
        continuity_rate_at_change=at_change,
        seed=seed,
    )


def scenario_from_dict(payload: dict) -> ScenarioSpec:
    """Build a :class:`ScenarioSpec` from a plain dict (parsed JSON)."""
    try:
        segments = tuple(
            SegmentSpec(
                start=int(seg["start"]),
                block_sizes=tuple(seg["block_sizes"]),
                p_in=float(seg["p_in"]),
                p_ex=float(seg["p_ex"]),
                label=seg.get("label", LABEL_CHANGE),
            )
            for seg in payload["segments"]
        )
        return ScenarioSpec(
            segments=segments,
            total_steps=int(payload["total_steps"]),
            continuity_rate_normal=float(payload.get("continuity_rate_normal", 1.0)),
            continuity_rate_at_change=float(
                payload.get("continuity_rate_at_change", 0.0)
            ),
            seed=int(payload.get("seed", 0)),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed scenario spec: {exc}") from exc


def write_ground_truth(truth, path) -> None:
    """Write ground truth as a JSON array of {t, label}."""
    payload = [{"t": int(t), "label": label} for t, label in truth]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_ground_truth(path):
    """Read a ground-truth JSON file back into (time_index, label) pairs."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        return [(int(entry["t"]), str(entry["label"])) for entry in payload]
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"{path}: not a ground-truth file") from exc
