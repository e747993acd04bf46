"""Randomized range finding and low-rank kernel node embeddings.

Pipeline: estimate lambda_K, build a Jackson-damped low-pass filter
cutting at that value, filter K+r Gaussian probes and orthogonalize to
get Q, then filter Q by an expansion of h^{1/2} to obtain the embedding
matrix `phi` with Gram matrix phi^T phi approximating the kernel h(L).
Everything is deterministic given (graph, parameters, seed).
"""

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, InvalidParams, KOutOfRange, RankDeficient, annotate_stage
from .estimation import EstimationConfig, estimate_lambda_k
from .filters import ChebyshevFilter, apply_filter, indicator_filter, kernel_sqrt_filter
from .graph import build_normalized_laplacian
from .rng import derived_seed

_RESIDUAL_REL_TOL = 1e-12  # column residual below this (relative) is rank collapse


@dataclass(frozen=True)
class RandomProbe:
    """Seeded N x (K+r) block of i.i.d. standard normal probe signals."""

    matrix: np.ndarray = field(repr=False)
    seed: int
    k: int
    r: int

    @classmethod
    def draw(cls, n, k, r, seed):
        rng = np.random.default_rng(seed)
        return cls(matrix=rng.standard_normal((n, k + r)), seed=seed, k=k, r=r)


def ortho(b):
    """Orthonormal basis of span(B) via Householder QR.

    Raises RankDeficient(j) when column j contributes a residual below
    1e-12 * ||B|| (numerically dependent columns).
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] > b.shape[0]:
        raise DimensionMismatch(f"cannot orthonormalize block of shape {b.shape}")
    scale = np.linalg.norm(b)
    q, rmat = np.linalg.qr(b, mode="reduced")
    resid = np.abs(np.diag(rmat))
    bad = np.nonzero(resid <= _RESIDUAL_REL_TOL * scale)[0]
    if scale == 0.0 or bad.size:
        raise RankDeficient(int(bad[0]) if bad.size else 0)
    return q


def range_find(op, k, r, lambda_k, m_chi, seed, info=None):
    """Q = ortho(p_chi(L) G): orthonormal basis capturing the low spectrum.

    p_chi is the degree-m_chi Jackson-damped indicator of [0, lambda_k]
    and G a seeded Gaussian probe block.  A rank collapse is retried once
    with seed+1 (full rank holds with probability 1, so persistent failure
    is a genuine input problem).
    """
    n = op.shape[0]
    if k + r > n:
        raise InvalidParams(f"K+r={k + r} exceeds N={n}")
    p_chi = indicator_filter(lambda_k, m_chi, damping="jackson")
    last = None
    for attempt_seed in (seed, seed + 1):
        probe = RandomProbe.draw(n, k, r, attempt_seed)
        t0 = time.perf_counter()
        b = apply_filter(op, p_chi, probe.matrix)
        t1 = time.perf_counter()
        try:
            q = ortho(b)
        except RankDeficient as exc:
            last = exc
            continue
        if info is not None:
            info.update(
                probe_seed=attempt_seed,
                filter_chi=p_chi,
                t_chi_filter=t1 - t0,
                t_ortho=time.perf_counter() - t1,
            )
        return q
    raise last


@dataclass
class Embedding:
    """Node embeddings phi (one column per node) with Gram matrix ~ h(L).

    Immutable in spirit: share freely across threads.  `basis` optionally
    retains the orthonormal Q for dense diagnostics; it is not persisted.
    """

    phi: np.ndarray
    k: int
    r: int
    filter_h: ChebyshevFilter
    lambda_k_estimate: float
    provenance: dict
    basis: np.ndarray = None

    @property
    def num_nodes(self):
        return self.phi.shape[1]

    @property
    def dim(self):
        return self.phi.shape[0]

    def node_embedding(self, i):
        """Embedding vector of node i (1-based)."""
        if not 1 <= i <= self.num_nodes:
            raise DimensionMismatch(f"node {i} outside [1..{self.num_nodes}]")
        return self.phi[:, i - 1]

    def gram(self):
        """Dense phi^T phi; oracle/diagnostic use only."""
        return self.phi.T @ self.phi


def kernel_matvec(emb, x):
    """Gamma~ x = phi^T (phi x) in O(N (K+r)); never forms the Gram matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != emb.num_nodes:
        raise DimensionMismatch(f"operand of shape {x.shape} incompatible with N={emb.num_nodes}")
    return emb.phi.T @ (emb.phi @ x)


def compute_embedding(op, q, h, m_h, k=None, r=None, lambda_k=float("nan"), provenance=None):
    """phi = (p_h(L) Q)^T for the undamped degree-m_h expansion of h^{1/2}."""
    q = np.asarray(q, dtype=np.float64)
    p_h = kernel_sqrt_filter(h, m_h)
    t0 = time.perf_counter()
    phi = apply_filter(op, p_h, q).T
    t_h = time.perf_counter() - t0
    cols = q.shape[1]
    if k is None:
        k, r = cols, 0
    prov = dict(provenance or {})
    prov.setdefault("stage_timings", {})["t_h_filter"] = t_h
    return Embedding(
        phi=phi,
        k=k,
        r=r if r is not None else cols - k,
        filter_h=p_h,
        lambda_k_estimate=lambda_k,
        provenance=prov,
    )


def approximate_kernel(
    graph,
    h,
    k,
    r,
    m_chi=60,
    m_h=30,
    est_cfg=None,
    seed=0,
    lambda_k=None,
    keep_basis=False,
):
    """Full randomized low-rank approximation of the kernel h(L).

    Stages: lambda_K estimation (skipped when `lambda_k` is given),
    low-pass filtering of K+r Gaussian probes, orthogonalization, and
    h^{1/2} filtering.  When K+r > N the orthonormal basis is the
    identity (range finding is perfect) and K is reported as N.
    Per-stage wall clock lands in provenance["stage_timings"].
    """
    if k < 1:
        raise KOutOfRange(f"K={k} must be >= 1")
    if r < 0:
        raise InvalidParams(f"r={r} must be >= 0")
    t_start = time.perf_counter()
    op = build_normalized_laplacian(graph)
    n = op.shape[0]
    timings = {"t_lambda": 0.0, "t_chi_filter": 0.0, "t_ortho": 0.0}
    info = {}
    padded = k + r > n

    if lambda_k is not None:
        lam = float(lambda_k)
        estimated = False
    elif padded:
        lam = 2.0  # whole spectrum; no cut needed
        estimated = False
    else:
        cfg = est_cfg if est_cfg is not None else EstimationConfig(seed=None)
        if cfg.seed is None:
            cfg = replace(cfg, seed=derived_seed(seed, 0))
        t0 = time.perf_counter()
        try:
            lam = estimate_lambda_k(op, k, cfg)
        except Exception as exc:
            raise annotate_stage(exc, "lambda_k estimation")
        timings["t_lambda"] = time.perf_counter() - t0
        estimated = True

    if padded:
        q = np.eye(n)
        k_eff, r_eff = n, 0
        info["probe_seed"] = None
        info["filter_chi"] = None
    else:
        k_eff, r_eff = k, r
        try:
            q = range_find(op, k, r, lam, m_chi, seed, info=info)
        except Exception as exc:
            raise annotate_stage(exc, "range finding")
        timings["t_chi_filter"] = info.pop("t_chi_filter")
        timings["t_ortho"] = info.pop("t_ortho")

    provenance = {
        "seed": seed,
        "probe_seed": info.get("probe_seed"),
        "lambda_k": lam,
        "lambda_k_estimated": estimated,
        "m_chi": m_chi,
        "m_h": m_h,
        "k_requested": k,
        "r_requested": r,
        "filter_chi": info["filter_chi"].to_dict() if info.get("filter_chi") else None,
        "est_cfg": None
        if (lambda_k is not None or padded)
        else {
            "tolerance": cfg.tolerance,
            "n_probe": cfg.n_probe,
            "count_filter_degree": cfg.count_filter_degree,
            "max_iterations": cfg.max_iterations,
            "seed": cfg.seed,
        },
        "stage_timings": timings,
    }
    try:
        emb = compute_embedding(op, q, h, m_h, k=k_eff, r=r_eff, lambda_k=lam, provenance=provenance)
    except Exception as exc:
        raise annotate_stage(exc, "embedding filtering")
    emb.provenance["stage_timings"].update(timings)
    emb.provenance["stage_timings"]["t_total"] = time.perf_counter() - t_start
    if keep_basis:
        emb.basis = q
    return emb


def save_embedding(emb, path):
    """Two-part file: one JSON header line, then raw little-endian float64
    matrix, row-major, (K+r) rows by N columns."""
    header = {
        "n": emb.num_nodes,
        "k": emb.k,
        "r": emb.r,
        "seeds": {
            "seed": emb.provenance.get("seed"),
            "probe_seed": emb.provenance.get("probe_seed"),
        },
        "filter_h": emb.filter_h.to_dict(),
        "filter_chi": emb.provenance.get("filter_chi"),
        "lambda_k_estimate": emb.lambda_k_estimate,
        "stage_timings": emb.provenance.get("stage_timings", {}),
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8") + b"\n")
        fh.write(np.ascontiguousarray(emb.phi, dtype="<f8").tobytes())


def load_embedding(path):
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        raw = fh.read()
    rows = header["k"] + header["r"]
    phi = np.frombuffer(raw, dtype="<f8").reshape(rows, header["n"]).copy()
    return Embedding(
        phi=phi,
        k=header["k"],
        r=header["r"],
        filter_h=ChebyshevFilter.from_dict(header["filter_h"]),
        lambda_k_estimate=header["lambda_k_estimate"],
        provenance={
            "seed": header["seeds"].get("seed"),
            "probe_seed": header["seeds"].get("probe_seed"),
            "filter_chi": header.get("filter_chi"),
            "stage_timings": header.get("stage_timings", {}),
        },
    )
