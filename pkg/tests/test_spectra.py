"""Spectrum embeddings: dense and truncated SVD, activity vector, sequences."""

import numpy as np
import networkx as nx
import pytest
import scipy.sparse as sp

from lapanom import (
    EmbeddingKind,
    Snapshot,
    TemporalGraph,
    activity_vector,
    adjacency,
    embed_sequence,
    full_spectrum,
    laplacian,
    permute_nodes,
    truncated_spectrum,
)
from lapanom.errors import NumericalInputError, ValidationError

TRIANGLE = [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]


def k3_laplacian():
    return laplacian(Snapshot.from_edges(0, TRIANGLE, node_count=3))


def random_laplacian(rng, n, p=0.1):
    mask = np.triu(rng.random((n, n)) < p, k=1)
    u, v = np.nonzero(mask)
    s = Snapshot.from_arrays(0, u, v, node_count=n)
    return laplacian(s), s


class TestFullSpectrum:
    def test_complete_graph_spectrum(self):
        sig = full_spectrum(k3_laplacian())
        assert np.allclose(sig.values, [3.0, 3.0, 0.0], atol=1e-12)

    def test_zero_matrix(self):
        sig = full_spectrum(np.zeros((4, 4)))
        assert np.array_equal(sig.values, np.zeros(4))

    def test_single_edge(self):
        L = laplacian(Snapshot.from_edges(0, [(0, 1, 1.0)], node_count=2))
        assert np.allclose(full_spectrum(L).values, [2.0, 0.0], atol=1e-12)

    def test_values_descending_nonnegative(self):
        L, _ = random_laplacian(np.random.default_rng(0), 60)
        vals = full_spectrum(L).values
        assert np.all(np.diff(vals) <= 0)
        assert np.all(vals >= 0)

    def test_non_finite_rejected(self):
        M = np.zeros((3, 3))
        M[0, 1] = np.nan
        with pytest.raises(NumericalInputError):
            full_spectrum(M)


class TestTruncatedSpectrum:
    def test_top_of_known_spectrum(self):
        sig = truncated_spectrum(k3_laplacian(), 2)
        assert np.allclose(sig.values, [3.0, 3.0], atol=1e-9)

    def test_padding_beyond_dimension(self):
        sig = truncated_spectrum(k3_laplacian(), 5)
        assert sig.source_rank == 5
        assert np.allclose(sig.values, [3.0, 3.0, 0.0, 0.0, 0.0], atol=1e-9)

    def test_empty_matrix_gives_zeros(self):
        sig = truncated_spectrum(sp.csr_matrix((6, 6)), 4)
        assert np.array_equal(sig.values, np.zeros(4))

    def test_matches_dense_oracle_on_random_graph(self):
        L, _ = random_laplacian(np.random.default_rng(42), 100)
        dense = np.linalg.svd(L.toarray(), compute_uv=False)[:6]
        trunc = truncated_spectrum(L, 6).values
        assert np.allclose(trunc, dense, rtol=1e-6, atol=1e-9)

    def test_deterministic_across_calls(self):
        L, _ = random_laplacian(np.random.default_rng(1), 80)
        a = truncated_spectrum(L, 6).values
        b = truncated_spectrum(L, 6).values
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("k", [1, 3, 8])
    def test_monotone_padding(self, k):
        # growing k never changes the leading values
        L, _ = random_laplacian(np.random.default_rng(5), 40)
        small = truncated_spectrum(L, k).values
        large = truncated_spectrum(L, k + 5).values
        assert np.allclose(small, large[:k], rtol=1e-6, atol=1e-9)

    def test_invalid_rank_rejected(self):
        with pytest.raises(ValidationError):
            truncated_spectrum(k3_laplacian(), 0)


class TestActivityVector:
    def test_complete_graph_is_uniform(self):
        A = adjacency(Snapshot.from_edges(0, TRIANGLE, node_count=3))
        assert np.allclose(activity_vector(A), np.full(3, 3 ** -0.5), atol=1e-10)

    def test_edge_plus_isolated_node(self):
        A = adjacency(Snapshot.from_edges(0, [(0, 1, 1.0)], node_count=3), 3)
        expected = np.array([2 ** -0.5, 2 ** -0.5, 0.0])
        assert np.allclose(activity_vector(A), expected, atol=1e-8)

    def test_zero_matrix_returns_uniform(self):
        vec = activity_vector(sp.csr_matrix((5, 5)))
        assert np.allclose(vec, np.full(5, 5 ** -0.5))

    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(11)
        mask = np.triu(rng.random((50, 50)) < 0.15, k=1)
        u, v = np.nonzero(mask)
        A = adjacency(Snapshot.from_arrays(0, u, v, node_count=50))
        vec = activity_vector(A)
        w, V = np.linalg.eigh(A.toarray())
        lead = V[:, np.argmax(w)]
        if lead.sum() < 0:
            lead = -lead
        assert np.allclose(vec, lead, atol=1e-6)

    def test_directed_cycle(self):
        A = adjacency(
            Snapshot.from_edges(0, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)],
                                node_count=3, directed=True)
        )
        assert np.allclose(activity_vector(A), np.full(3, 3 ** -0.5), atol=1e-8)

    def test_bipartite_graph_converges(self):
        # star graphs have a +/- eigenvalue pair; the shift must still separate them
        A = adjacency(Snapshot.from_edges(0, [(0, i, 1.0) for i in range(1, 6)],
                                          node_count=6))
        vec = activity_vector(A)
        w, V = np.linalg.eigh(A.toarray())
        lead = np.abs(V[:, np.argmax(w)])
        assert np.allclose(vec, lead, atol=1e-8)

    def test_negative_entries_rejected(self):
        with pytest.raises(ValidationError):
            activity_vector(np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_entrywise_nonnegative(self):
        rng = np.random.default_rng(4)
        mask = np.triu(rng.random((30, 30)) < 0.1, k=1)
        u, v = np.nonzero(mask)
        A = adjacency(Snapshot.from_arrays(0, u, v, node_count=30))
        assert activity_vector(A).min() >= 0


class TestInvariants:
    @pytest.mark.parametrize("seed", range(10))
    def test_spectrum_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(10, 60))
        _, s = random_laplacian(rng, n, p=0.2)
        perm = rng.permutation(n)
        a = truncated_spectrum(laplacian(s), min(6, n - 3)).values
        b = truncated_spectrum(laplacian(permute_nodes(s, perm)), min(6, n - 3)).values
        assert np.max(np.abs(a - b)) < 1e-8

    @pytest.mark.parametrize("seed", range(10))
    def test_zero_multiplicity_counts_components(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(12, 80))
        L, s = random_laplacian(rng, n, p=0.05)
        vals = full_spectrum(L).values
        zeros = int(np.sum(vals < 1e-8))
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from((u, v) for u, v, _ in s.edge_list())
        components = nx.number_connected_components(g)
        rank = np.linalg.matrix_rank(L.toarray())
        assert zeros == n - rank == components


class TestEmbedSequence:
    def test_identical_snapshots_identical_vectors(self):
        s = Snapshot.from_edges(0, TRIANGLE, node_count=3)
        snaps = [Snapshot(t, s.edges, 3, False) for t in range(3)]
        g = TemporalGraph.from_snapshots(snaps)
        embs = embed_sequence(g, EmbeddingKind.laplacian())
        assert embs[0] == embs[1] == embs[2] or (
            np.array_equal(embs[0].values, embs[1].values)
            and np.array_equal(embs[1].values, embs[2].values)
        )

    def test_empty_snapshot_embeds_to_zero_vector(self):
        s = Snapshot.from_edges(0, TRIANGLE, node_count=3)
        snaps = [Snapshot(0, s.edges, 3, False),
                 Snapshot.from_edges(1, [], node_count=0),
                 Snapshot(2, s.edges, 3, False)]
        g = TemporalGraph.from_snapshots(snaps)
        embs = embed_sequence(g, EmbeddingKind.laplacian())
        assert np.array_equal(embs[1].values, np.zeros(3))

    def test_all_vectors_same_length_and_time_ordered(self):
        rng = np.random.default_rng(2)
        snaps = []
        for t in range(5):
            n = int(rng.integers(5, 20))
            mask = np.triu(rng.random((n, n)) < 0.3, k=1)
            u, v = np.nonzero(mask)
            snaps.append(Snapshot.from_arrays(t, u, v, node_count=n))
        g = TemporalGraph.from_snapshots(snaps)
        embs = embed_sequence(g, EmbeddingKind.laplacian())
        assert all(e.source_rank == g.global_node_count for e in embs)
        assert [e.time_index for e in embs] == list(range(5))

    def test_truncated_rank_controls_length(self):
        rng = np.random.default_rng(3)
        _, s = random_laplacian(rng, 30, p=0.2)
        g = TemporalGraph.from_snapshots(
            [Snapshot(t, s.edges, 30, False) for t in range(3)]
        )
        embs = embed_sequence(g, EmbeddingKind.laplacian(rank=4))
        assert all(e.source_rank == 4 for e in embs)

    def test_permuting_one_snapshot_leaves_embedding_unchanged(self):
        rng = np.random.default_rng(9)
        _, s = random_laplacian(rng, 25, p=0.2)
        g1 = TemporalGraph.from_snapshots([Snapshot(0, s.edges, 25, False)])
        g2 = TemporalGraph.from_snapshots([permute_nodes(s, rng.permutation(25))])
        e1 = embed_sequence(g1, EmbeddingKind.laplacian())[0]
        e2 = embed_sequence(g2, EmbeddingKind.laplacian())[0]
        assert np.max(np.abs(e1.values - e2.values)) < 1e-8

    def test_activity_kind_produces_unit_vectors(self):
        rng = np.random.default_rng(6)
        _, s = random_laplacian(rng, 20, p=0.2)
        g = TemporalGraph.from_snapshots(
            [Snapshot(t, s.edges, 20, False) for t in range(2)]
        )
        embs = embed_sequence(g, EmbeddingKind.activity())
        for e in embs:
            assert np.linalg.norm(e.values) == pytest.approx(1.0)

def test_embed_error_names_time_index(monkeypatch):
    # inject a NaN into snapshot 1's Laplacian; the error must carry its time
    import lapanom.spectra as spectra_mod

    original = spectra_mod.laplacian

    def poisoned(s, n=None):
        L = original(s, n)
        if s.time_index == 1:
            L = L.tolil()
            L[0, 0] = np.nan
            L = L.tocsr()
        return L

    monkeypatch.setattr(spectra_mod, "laplacian", poisoned)
    s = Snapshot.from_edges(0, TRIANGLE, node_count=3)
    snaps = [Snapshot(t, s.edges, 3, False) for t in range(3)]
    with pytest.raises(NumericalInputError, match="time_index 1"):
        embed_sequence(TemporalGraph.from_snapshots(snaps), EmbeddingKind.laplacian())
