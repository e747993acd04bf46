"""Shared fixtures and independent reference constructions.

The reference paths here deliberately avoid the library's internals:
dense Laplacians are assembled with plain loops and cycle spectra come
from the circulant closed form, so they can serve as oracles.
"""

import numpy as np
import pytest

from lrgk.graph import Graph


def cycle_graph(n):
    edges = [(i, i + 1, 1.0) for i in range(1, n)] + [(n, 1, 1.0)]
    return Graph(n, tuple(edges))


def path_graph(n):
    return Graph(n, tuple((i, i + 1, 1.0) for i in range(1, n)))


def two_node_graph():
    return Graph(2, ((1, 2, 1.0),))


def cycle_eigenvalues(n):
    """Closed-form normalized Laplacian spectrum of the N-cycle, ascending."""
    return np.sort(1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))


def random_connected_graph(n, rng, extra_edges=None, weighted=True):
    """Random spanning tree plus extra edges; connected by construction."""
    if extra_edges is None:
        extra_edges = 2 * n
    pairs = set()
    order = rng.permutation(n) + 1
    for idx in range(1, n):
        a = int(order[idx])
        b = int(order[rng.integers(0, idx)])
        pairs.add((min(a, b), max(a, b)))
    attempts = 0
    while len(pairs) < n - 1 + extra_edges and attempts < 50 * extra_edges:
        a, b = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
        attempts += 1
        if a != b:
            pairs.add((min(a, b), max(a, b)))
    edges = []
    for a, b in sorted(pairs):
        w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
        edges.append((a, b, w))
    return Graph(n, tuple(edges))


def dense_laplacian_reference(graph):
    """I - D^{-1/2} W D^{-1/2} assembled entrywise, independent of CSR."""
    n = graph.num_nodes
    w = np.zeros((n, n))
    for i, j, wt in graph.edges:
        w[i - 1, j - 1] = wt
        w[j - 1, i - 1] = wt
    deg = w.sum(axis=1)
    dinv = 1.0 / np.sqrt(deg)
    return np.eye(n) - (dinv[:, None] * w) * dinv[None, :]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
