"""Undirected weighted graphs and the symmetric normalized Laplacian.

The Laplacian is exposed as a matrix-free operator: `L x = x - S x` with
`S = D^{-1/2} W D^{-1/2}` held in CSR form, so a matvec costs O(E).  The
operator is immutable after construction and safe to share across
threads.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatch,
    DuplicateEdge,
    GraphFormatError,
    InvalidEdge,
    InvalidWeight,
    IsolatedNode,
)


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with 1-based node indices.

    Each undirected pair is stored exactly once in `edges`; the symmetric
    adjacency structure is derived from it.  Weights must be positive and
    self-loops are rejected.  Duplicate pairs are an error, not summed.
    """

    num_nodes: int
    edges: tuple

    def __post_init__(self):
        n = self.num_nodes
        if not isinstance(n, int) or n < 1:
            raise InvalidEdge(f"num_nodes must be a positive integer, got {n!r}")
        object.__setattr__(self, "edges", tuple((int(i), int(j), float(w)) for i, j, w in self.edges))
        seen = set()
        for i, j, w in self.edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidEdge(f"edge ({i},{j}) outside [1..{n}]")
            if i == j:
                raise InvalidEdge(f"self-loop at node {i}")
            if not (np.isfinite(w) and w > 0):
                raise InvalidWeight(f"edge ({i},{j}) has weight {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdge(f"pair ({key[0]},{key[1]}) listed more than once")
            seen.add(key)

    @property
    def num_edges(self):
        return len(self.edges)

    @cached_property
    def adjacency(self):
        """Symmetric weight matrix in CSR form (both (i,j) and (j,i) stored)."""
        n = self.num_nodes
        if not self.edges:
            return sp.csr_matrix((n, n), dtype=np.float64)
        ii = np.fromiter((e[0] - 1 for e in self.edges), dtype=np.int64, count=len(self.edges))
        jj = np.fromiter((e[1] - 1 for e in self.edges), dtype=np.int64, count=len(self.edges))
        ww = np.fromiter((e[2] for e in self.edges), dtype=np.float64, count=len(self.edges))
        rows = np.concatenate([ii, jj])
        cols = np.concatenate([jj, ii])
        vals = np.concatenate([ww, ww])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def degrees(self):
        """Weighted degree vector D_ii."""
        return np.asarray(self.adjacency.sum(axis=1)).ravel()


class LaplacianOperator:
    """Matrix-free symmetric normalized Laplacian, spectrum in [0, 2]."""

    def __init__(self, graph, inv_sqrt_degrees, normalized_adjacency):
        self.graph = graph
        self.inv_sqrt_degrees = inv_sqrt_degrees
        self.num_edges = graph.num_edges
        self._s = normalized_adjacency  # D^{-1/2} W D^{-1/2}, CSR

    @property
    def shape(self):
        n = self.graph.num_nodes
        return (n, n)

    def matvec(self, x):
        """Apply L to a vector or to an N x k block of columns."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[0] != self.graph.num_nodes:
            raise DimensionMismatch(
                f"operand of shape {x.shape} incompatible with N={self.graph.num_nodes}"
            )
        return x - self._s @ x

    def to_dense(self):
        """Dense I - D^{-1/2} W D^{-1/2}; intended for small N only."""
        n = self.graph.num_nodes
        return np.eye(n) - self._s.toarray()


def build_normalized_laplacian(graph):
    """Construct the normalized Laplacian operator of a valid graph.

    Raises IsolatedNode if any node has zero degree: D^{-1/2} is undefined
    there and silently patching it would change the spectrum.
    """
    deg = graph.degrees()
    zero = np.nonzero(deg <= 0)[0]
    if zero.size:
        raise IsolatedNode(int(zero[0]) + 1)
    dinv = 1.0 / np.sqrt(deg)
    w = graph.adjacency
    s = sp.csr_matrix(w.multiply(dinv[:, None]).multiply(dinv[None, :]))
    return LaplacianOperator(graph, dinv, s)


def laplacian_matvec(op, x):
    """y = x - D^{-1/2} W D^{-1/2} x; cost proportional to E."""
    return op.matvec(x)


def load_graph(path):
    """Read the text format: first line `N E`, then E lines `i j w`.

    Indices are 1-based and each undirected pair must appear exactly once.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise GraphFormatError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"{path}: first line must be 'N E', got {lines[0]!r}")
    try:
        n, e = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"{path}: bad header {lines[0]!r}") from exc
    if len(lines) - 1 != e:
        raise GraphFormatError(f"{path}: header says {e} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"{path}: bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise GraphFormatError(f"{path}: bad edge line {ln!r}") from exc
    return Graph(num_nodes=n, edges=tuple(edges))


def save_graph(graph, path):
    """Write the canonical text serialization (see load_graph)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_text(graph))


def graph_text(graph):
    """Canonical text serialization; also used for content hashing."""
    out = [f"{graph.num_nodes} {graph.num_edges}"]
    for i, j, w in graph.edges:
        out.append(f"{i} {j} {w:.17g}")
    return "\n".join(out) + "\n"
