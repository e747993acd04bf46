"""Synthetic graph families: determinism, connectivity, spectra."""

import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from lrgk.errors import InvalidParams
from lrgk.generators import GeneratorSpec, generate
from lrgk.graph import build_normalized_laplacian
from lrgk.oracle import dense_eigendecomposition


def _eigs(graph):
    return dense_eigendecomposition(build_normalized_laplacian(graph)).eigenvalues


def _is_connected(graph):
    ncomp, _ = connected_components(graph.adjacency, directed=False)
    return ncomp == 1


class TestFixedTopologies:
    def test_cycle_counts_and_degrees(self):
        g = generate(GeneratorSpec("cycle", 8))
        assert g.num_edges == 8
        assert np.all(g.degrees() == 2.0)

    def test_path(self):
        g = generate(GeneratorSpec("path", 9))
        assert g.num_edges == 8
        assert _is_connected(g)

    def test_grid_factorizes(self):
        g = generate(GeneratorSpec("grid", 12))  # 3 x 4
        assert g.num_edges == 3 * 3 + 2 * 4  # vertical + horizontal runs
        assert _is_connected(g)

    def test_cycle_needs_three_nodes(self):
        with pytest.raises(InvalidParams):
            GeneratorSpec("cycle", 2)


class TestSwissRoll:
    def test_deterministic_edge_list(self):
        spec = GeneratorSpec("swiss-roll", 500, seed=3, k_nn=10)
        a, b = generate(spec), generate(spec)
        assert a.edges == b.edges

    def test_connected_and_positive_weights(self):
        g = generate(GeneratorSpec("swiss-roll", 400, seed=1, k_nn=10))
        assert _is_connected(g)
        assert all(w > 0 for _, _, w in g.edges)

    def test_eigenvalues_evenly_spread(self):
        # no spectral gap ratio above 5 in the low-to-mid spectrum
        g = generate(GeneratorSpec("swiss-roll", 500, seed=7, k_nn=10))
        lam = _eigs(g)
        for k in range(4, 250):  # positions 5..250, 1-based
            assert lam[k + 1] / lam[k] <= 5.0

    def test_seed_changes_sample(self):
        a = generate(GeneratorSpec("swiss-roll", 200, seed=0))
        b = generate(GeneratorSpec("swiss-roll", 200, seed=1))
        assert a.edges != b.edges

    def test_knn_domain(self):
        with pytest.raises(InvalidParams):
            GeneratorSpec("swiss-roll", 50, k_nn=50)


class TestCommunity:
    def test_block_gap_after_n_comm(self):
        g = generate(GeneratorSpec("community", 400, seed=5, n_comm=8, p_in=0.2, p_out=0.002))
        lam = _eigs(g)
        assert lam[8] / lam[7] >= 3.0  # eigenvalue #9 over #8, 1-based

    def test_deterministic(self):
        spec = GeneratorSpec("community", 120, seed=2, n_comm=4)
        assert generate(spec).edges == generate(spec).edges

    def test_unit_weights(self):
        g = generate(GeneratorSpec("community", 80, seed=1, n_comm=4))
        assert all(w == 1.0 for _, _, w in g.edges)

    def test_blocks_must_divide(self):
        with pytest.raises(InvalidParams):
            GeneratorSpec("community", 100, n_comm=7)

    def test_p_in_must_exceed_p_out(self):
        with pytest.raises(InvalidParams):
            GeneratorSpec("community", 80, n_comm=4, p_in=0.01, p_out=0.05)


class TestFamilyValidation:
    def test_unknown_family(self):
        with pytest.raises(InvalidParams):
            GeneratorSpec("torus", 10)
