"""Snapshot and temporal-graph data model, Laplacians, and per-snapshot statistics.

A dynamic graph is an ordered sequence of :class:`Snapshot` objects over one
shared integer node-id space.  Node ids that carry no edge in a given snapshot
are *inactive*: they contribute all-zero rows and columns to that snapshot's
matrices, which is how node sets are allowed to fluctuate over time while
every matrix keeps a fixed shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from .errors import DimensionError, EdgeListParseError, ValidationError

EDGE_DTYPE = np.dtype(
    [("source", np.int64), ("target", np.int64), ("weight", np.float64)]
)


def _canonical_edges(source, target, weight, directed):
    """Merge duplicate pairs by weight sum and sort lexicographically.

    Undirected edges are keyed on the unordered pair and stored with
    source <= target.
    """
    u = np.asarray(source, dtype=np.int64)
    v = np.asarray(target, dtype=np.int64)
    w = np.asarray(weight, dtype=np.float64)
    if not directed:
        u, v = np.minimum(u, v), np.maximum(u, v)
    order = np.lexsort((v, u))
    u, v, w = u[order], v[order], w[order]
    first = np.ones(u.size, dtype=bool)
    first[1:] = (u[1:] != u[:-1]) | (v[1:] != v[:-1])
    group = np.cumsum(first) - 1
    merged_w = np.zeros(int(first.sum()))
    np.add.at(merged_w, group, w)
    edges = np.empty(merged_w.size, dtype=EDGE_DTYPE)
    edges["source"] = u[first]
    edges["target"] = v[first]
    edges["weight"] = merged_w
    return edges


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One timestamped weighted graph over the id space ``0..node_count-1``.

    Edges are held in a read-only structured array (fields ``source``,
    ``target``, ``weight``), deduplicated and lexicographically sorted.
    Duplicate pairs passed to the constructor are merged by summing their
    weights; undirected pairs are canonicalized to source <= target.
    Instances are immutable and safe to share across threads.
    """

    time_index: int
    edges: np.ndarray
    node_count: int
    directed: bool = False

    def __post_init__(self):
        if self.time_index < 0:
            raise ValidationError(f"time_index must be >= 0, got {self.time_index}")
        if self.node_count < 0:
            raise ValidationError(f"node_count must be >= 0, got {self.node_count}")
        raw = np.asarray(self.edges)
        if raw.dtype != EDGE_DTYPE:
            raw = np.asarray(raw, dtype=EDGE_DTYPE)
        edges = _canonical_edges(
            raw["source"], raw["target"], raw["weight"], self.directed
        )
        if edges.size:
            if edges["source"].min() < 0:
                raise ValidationError("node ids must be nonnegative")
            top = max(int(edges["source"].max()), int(edges["target"].max()))
            if top >= self.node_count:
                raise ValidationError(
                    f"node id {top} outside id space of size {self.node_count}"
                )
            w = edges["weight"]
            if not np.isfinite(w).all() or (w <= 0).any():
                raise ValidationError("edge weights must be positive and finite")
        edges.flags.writeable = False
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, time_index, edges, node_count=None, directed=False):
        """Build a snapshot from an iterable of (source, target, weight) tuples.

        Two-tuples are accepted and get unit weight.  When ``node_count`` is
        omitted it defaults to max node id + 1.
        """
        rows = [(e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges]
        u = np.array([r[0] for r in rows], dtype=np.int64)
        v = np.array([r[1] for r in rows], dtype=np.int64)
        w = np.array([r[2] for r in rows], dtype=np.float64)
        return cls.from_arrays(time_index, u, v, w, node_count=node_count, directed=directed)

    @classmethod
    def from_arrays(cls, time_index, source, target, weight=None, node_count=None, directed=False):
        u = np.asarray(source, dtype=np.int64)
        v = np.asarray(target, dtype=np.int64)
        w = (
            np.ones(u.size, dtype=np.float64)
            if weight is None
            else np.asarray(weight, dtype=np.float64)
        )
        if node_count is None:
            node_count = int(max(u.max(), v.max())) + 1 if u.size else 0
        edges = np.empty(u.size, dtype=EDGE_DTYPE)
        edges["source"], edges["target"], edges["weight"] = u, v, w
        return cls(time_index, edges, int(node_count), directed)

    @property
    def edge_count(self):
        return int(self.edges.size)

    def active_nodes(self):
        """Sorted array of node ids incident to at least one edge."""
        return np.union1d(self.edges["source"], self.edges["target"])

    def edge_list(self):
        """Edges as a plain list of (source, target, weight) tuples."""
        return [(int(u), int(v), float(w)) for u, v, w in self.edges]

    def __eq__(self, other):
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (
            self.time_index == other.time_index
            and self.node_count == other.node_count
            and self.directed == other.directed
            and np.array_equal(self.edges, other.edges)
        )


@dataclass(frozen=True, eq=False)
class TemporalGraph:
    """Ordered snapshots sharing one global node-id space.

    Snapshot time indices must run 0..T-1 without gaps.
    """

    snapshots: tuple
    global_node_count: int
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        for pos, snap in enumerate(self.snapshots):
            if snap.time_index != pos:
                raise ValidationError(
                    f"snapshot at position {pos} has time_index {snap.time_index}; "
                    "expected contiguous indices 0..T-1"
                )
            if snap.node_count > self.global_node_count:
                raise ValidationError(
                    f"snapshot {pos} id space ({snap.node_count}) exceeds "
                    f"global_node_count ({self.global_node_count})"
                )
            if snap.directed != self.directed:
                raise ValidationError("snapshot directedness differs from graph")

    @classmethod
    def from_snapshots(cls, snapshots, global_node_count=None):
        snapshots = tuple(snapshots)
        if global_node_count is None:
            global_node_count = max((s.node_count for s in snapshots), default=0)
        directed = snapshots[0].directed if snapshots else False
        return cls(snapshots, int(global_node_count), directed)

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, t):
        return self.snapshots[t]

    def __eq__(self, other):
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.global_node_count == other.global_node_count
            and self.directed == other.directed
            and len(self) == len(other)
            and all(a == b for a, b in zip(self.snapshots, other.snapshots))
        )


@dataclass(frozen=True)
class GraphStats:
    """Per-snapshot summary statistics.

    All fields except ``avg_degree`` and ``avg_edge_weight`` are computed on
    the undirected unweighted skeleton.  ``connected_components`` counts
    components among active nodes only (a node whose sole edge is a self-loop
    counts as its own component).
    """

    edge_count: int
    avg_degree: float
    avg_edge_weight: float
    connected_components: int
    transitivity: float


def adjacency(s: Snapshot, n: int | None = None) -> sp.csr_matrix:
    """Weighted adjacency matrix of ``s`` on an ``n``-id space.

    ``n`` defaults to ``s.node_count``.  Undirected snapshots yield a
    symmetric matrix; a self-loop of weight w appears once on the diagonal.
    """
    n = s.node_count if n is None else int(n)
    if n < s.node_count:
        raise DimensionError(
            f"requested dimension {n} is smaller than the snapshot id space "
            f"({s.node_count})"
        )
    u, v, w = s.edges["source"], s.edges["target"], s.edges["weight"]
    if s.directed:
        rows, cols, vals = u, v, w
    else:
        off = u != v
        rows = np.concatenate([u, v[off]])
        cols = np.concatenate([v, u[off]])
        vals = np.concatenate([w, w[off]])
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def laplacian(s: Snapshot, n: int | None = None) -> sp.csr_matrix:
    """Laplacian D - A of ``s`` on an ``n``-id space.

    D is the diagonal of row sums of A, so every row sums to zero and
    directed snapshots use out-degrees.  Self-loops cancel out of the result.
    Inactive ids contribute all-zero rows and columns.
    """
    A = adjacency(s, n)
    deg = np.asarray(A.sum(axis=1)).ravel()
    return (sp.diags(deg, format="csr") - A).tocsr()


def graph_stats(s: Snapshot) -> GraphStats:
    """Summary statistics of one snapshot (see :class:`GraphStats`)."""
    if s.edge_count == 0:
        return GraphStats(0, 0.0, 0.0, 0, 0.0)
    u, v, w = s.edges["source"], s.edges["target"], s.edges["weight"]
    active = s.active_nodes()
    A = adjacency(s)
    deg = np.asarray(A.sum(axis=1)).ravel()
    if s.directed:
        deg = deg + np.asarray(A.sum(axis=0)).ravel() - A.diagonal()
    avg_degree = float(deg.sum() / active.size)

    # unweighted skeleton without self-loops, symmetrized
    off = u != v
    n = s.node_count
    B = sp.csr_matrix(
        (np.ones(int(off.sum())), (u[off], v[off])), shape=(n, n)
    )
    B = B + B.T
    B.data = np.ones_like(B.data)

    ncomp_full, _ = _cc(B, directed=False)
    components = int(ncomp_full - (n - active.size))

    closed_paths = float((B @ B).multiply(B).sum())  # trace(B^3) = 6 * triangles
    degs = np.asarray(B.sum(axis=1)).ravel()
    wedge_pairs = float((degs * (degs - 1)).sum())  # 2 * wedges
    transitivity = closed_paths / wedge_pairs if wedge_pairs > 0 else 0.0

    return GraphStats(
        edge_count=s.edge_count,
        avg_degree=avg_degree,
        avg_edge_weight=float(w.mean()),
        connected_components=components,
        transitivity=transitivity,
    )


def permute_nodes(s: Snapshot, perm) -> Snapshot:
    """Relabel node ids of ``s`` through the bijection ``perm``.

    ``perm`` is a sequence of length ``s.node_count`` mapping old id i to
    ``perm[i]``.
    """
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (s.node_count,) or not np.array_equal(
        np.sort(perm), np.arange(s.node_count)
    ):
        raise ValidationError(
            f"perm must be a bijection on 0..{s.node_count - 1}"
        )
    return Snapshot.from_arrays(
        s.time_index,
        perm[s.edges["source"]],
        perm[s.edges["target"]],
        s.edges["weight"].copy(),
        node_count=s.node_count,
        directed=s.directed,
    )


def load_snapshots(path, directed: bool = False) -> TemporalGraph:
    """Load a temporal graph from an edge-list text file.

    Format: one edge per line, ``t u v [w]``, whitespace separated, with
    ``w`` defaulting to 1.  Lines starting with ``#`` and blank lines are
    ignored.  Duplicate edges within a timestep are merged by summing
    weights, and missing intermediate timesteps become empty snapshots.
    """
    ts, us, vs, ws = [], [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (3, 4):
                raise EdgeListParseError(
                    f"{path}: line {lineno}: expected 't u v [w]', "
                    f"got {len(parts)} fields"
                )
            try:
                t, u, v = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise EdgeListParseError(
                    f"{path}: line {lineno}: non-integer time or node id"
                ) from exc
            if t < 0 or u < 0 or v < 0:
                raise EdgeListParseError(
                    f"{path}: line {lineno}: negative time or node id"
                )
            if len(parts) == 4:
                try:
                    w = float(parts[3])
                except ValueError as exc:
                    raise EdgeListParseError(
                        f"{path}: line {lineno}: malformed weight {parts[3]!r}"
                    ) from exc
                if not math.isfinite(w):
                    raise EdgeListParseError(
                        f"{path}: line {lineno}: non-finite weight"
                    )
                if w <= 0:
                    raise ValidationError(
                        f"{path}: line {lineno}: weight must be positive, got {w}"
                    )
            else:
                w = 1.0
            ts.append(t)
            us.append(u)
            vs.append(v)
            ws.append(w)

    if not ts:
        return TemporalGraph((), 0, directed)

    t_arr = np.array(ts, dtype=np.int64)
    u_arr = np.array(us, dtype=np.int64)
    v_arr = np.array(vs, dtype=np.int64)
    w_arr = np.array(ws, dtype=np.float64)
    order = np.argsort(t_arr, kind="stable")
    t_arr, u_arr, v_arr, w_arr = t_arr[order], u_arr[order], v_arr[order], w_arr[order]

    total_steps = int(t_arr[-1]) + 1
    bounds = np.searchsorted(t_arr, np.arange(total_steps + 1))
    snapshots = []
    for t in range(total_steps):
        lo, hi = bounds[t], bounds[t + 1]
        snapshots.append(
            Snapshot.from_arrays(
                t, u_arr[lo:hi], v_arr[lo:hi], w_arr[lo:hi], directed=directed
            )
        )
    return TemporalGraph.from_snapshots(snapshots)


def save_snapshots(g: TemporalGraph, path) -> None:
    """Write ``g`` in the canonical edge-list format (see :func:`load_snapshots`).

    Unit weights are omitted; reloading reproduces an identical graph.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for snap in g:
            t = snap.time_index
            for u, v, w in snap.edges:
                if w == 1.0:
                    fh.write(f"{t} {u} {v}\n")
                else:
                    fh.write(f"{t} {u} {v} {float(w)!r}\n")
