"""Deterministic synthetic graph families for experiments.

Random families (swiss-roll, community) resample up to 10 times until
connected; fixed topologies (cycle, path, grid) are connected by
construction.  A fixed spec+seed always yields a byte-identical edge
list.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import Disconnected, InvalidParams
from .graph import Graph
from .rng import derived_seed

FAMILIES = ("swiss-roll", "community", "cycle", "path", "grid")

_MAX_ATTEMPTS = 10


@dataclass(frozen=True)
class GeneratorSpec:
    """Family name, node count, seed and per-family parameters.

    swiss-roll: k_nn symmetric nearest neighbors, Gaussian edge weights
    exp(-d^2/(2 s^2)) with s = `width` or the mean k-NN distance.
    community: stochastic block model with n_comm equal blocks and unit
    weights.  cycle/path/grid have unit weights.
    """

    family: str
    n: int
    seed: int = 0
    k_nn: int = 10
    width: float = None
    n_comm: int = 8
    p_in: float = 0.2
    p_out: float = 0.002

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}")
        if self.n < 2:
            raise InvalidParams(f"n must be >= 2, got {self.n}")
        if self.family == "cycle" and self.n < 3:
            raise InvalidParams("cycle needs n >= 3")
        if self.family == "swiss-roll":
            if self.k_nn < 1 or self.k_nn >= self.n:
                raise InvalidParams(f"k_nn={self.k_nn} must be in [1, n-1]")
            if self.width is not None and not self.width > 0:
                raise InvalidParams("width must be > 0")
        if self.family == "community":
            if self.n_comm < 1 or self.n % self.n_comm != 0:
                raise InvalidParams(f"n={self.n} must split into n_comm={self.n_comm} equal blocks")
            if not (0 < self.p_in <= 1 and 0 <= self.p_out <= 1 and self.p_in > self.p_out):
                raise InvalidParams("need 0 <= p_out < p_in <= 1")


def generate(spec):
    """Produce a connected Graph for the given spec."""
    if spec.family == "cycle":
        edges = [(i, i + 1, 1.0) for i in range(1, spec.n)] + [(spec.n, 1, 1.0)]
        return Graph(spec.n, tuple(edges))
    if spec.family == "path":
        return Graph(spec.n, tuple((i, i + 1, 1.0) for i in range(1, spec.n)))
    if spec.family == "grid":
        return _grid(spec.n)
    builder = _swiss_roll if spec.family == "swiss-roll" else _community
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng(derived_seed(spec.seed, attempt))
        edges = builder(spec, rng)
        if edges and _connected(spec.n, edges):
            return Graph(spec.n, tuple(edges))
    raise Disconnected(f"{spec.family} n={spec.n}: no connected sample in {_MAX_ATTEMPTS} attempts")


def _grid(n):
    # most-square factorization; prime n degenerates to a 1 x n path
    rows = 1
    for d in range(int(math.isqrt(n)), 0, -1):
        if n % d == 0:
            rows = d
            break
    cols = n // rows
    node = lambda a, b: a * cols + b + 1
    edges = []
    for a in range(rows):
        for b in range(cols):
            if b + 1 < cols:
                edges.append((node(a, b), node(a, b + 1), 1.0))
            if a + 1 < rows:
                edges.append((node(a, b), node(a + 1, b), 1.0))
    return Graph(n, tuple(edges))


def _swiss_roll(spec, rng):
    n, k = spec.n, spec.k_nn
    t = rng.uniform(1.5 * np.pi, 4.5 * np.pi, n)
    y = rng.uniform(0.0, 20.0, n)
    pts = np.column_stack([t * np.cos(t), y, t * np.sin(t)])
    dist, idx = cKDTree(pts).query(pts, k=k + 1)
    dist, idx = dist[:, 1:], idx[:, 1:]  # drop self
    s = spec.width if spec.width is not None else float(np.mean(dist))
    pairs = {}
    for i in range(n):
        for d, j in zip(dist[i], idx[i]):
            key = (min(i + 1, j + 1), max(i + 1, j + 1))
            pairs.setdefault(key, float(d))
    return [(i, j, math.exp(-(d * d) / (2.0 * s * s))) for (i, j), d in sorted(pairs.items())]


def _community(spec, rng):
    n = spec.n
    block = n // spec.n_comm
    labels = np.arange(n) // block
    u = rng.random((n, n))
    same = labels[:, None] == labels[None, :]
    thresh = np.where(same, spec.p_in, spec.p_out)
    mask = np.triu(u < thresh, k=1)
    ii, jj = np.nonzero(mask)
    return [(int(a) + 1, int(b) + 1, 1.0) for a, b in zip(ii, jj)]


def _connected(n, edges):
    ii = np.array([e[0] - 1 for e in edges])
    jj = np.array([e[1] - 1 for e in edges])
    adj = sp.coo_matrix((np.ones(len(edges)), (ii, jj)), shape=(n, n))
    ncomp, _ = connected_components(adj, directed=False)
    return ncomp == 1
