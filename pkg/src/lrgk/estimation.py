"""Estimate the K-th smallest Laplacian eigenvalue by dichotomy.

The eigenvalue count below a threshold is estimated stochastically:
E ||p(L) g||^2 = tr p^2(L) ~= #{lambda_k <= lambda_bar} for a Jackson-damped
indicator polynomial p and standard Gaussian probes g.  Bisection on
[0, 2] then locates the threshold whose count reaches K.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParams, KOutOfRange
from .filters import apply_filter, indicator_filter
from .rng import derived_seed


def required_iterations(tolerance):
    """Bisection steps needed to shrink [0, 2] below `tolerance`."""
    return max(1, math.ceil(math.log2(2.0 / tolerance)))


def default_probe_count(n):
    """2 ceil(log2 N) probes; a handful of signals suffices for counting."""
    return max(1, 2 * math.ceil(math.log2(max(n, 2))))


@dataclass(frozen=True)
class EstimationConfig:
    """Knobs for the eigenvalue-count / lambda_K estimators.

    n_probe=None resolves to default_probe_count(N) at use; seed=None marks
    a config whose stream will be derived by the calling pipeline.
    """

    tolerance: float = 0.01
    n_probe: int = None
    count_filter_degree: int = 60
    max_iterations: int = None
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidParams(f"tolerance must be > 0, got {self.tolerance}")
        if self.n_probe is not None and self.n_probe < 1:
            raise InvalidParams(f"n_probe must be >= 1, got {self.n_probe}")
        if self.count_filter_degree < 0:
            raise InvalidParams("count_filter_degree must be >= 0")
        if self.max_iterations is not None and self.max_iterations < required_iterations(self.tolerance):
            raise InvalidParams(
                f"max_iterations={self.max_iterations} cannot resolve tolerance {self.tolerance}; "
                f"need >= {required_iterations(self.tolerance)}"
            )


def _probe_block(n, count, seed):
    # independent per-probe streams: deterministic under any parallel split
    cols = np.empty((n, count))
    for s in range(count):
        rng = np.random.default_rng(derived_seed(seed, s))
        cols[:, s] = rng.standard_normal(n)
    return cols


def estimate_eigenvalue_count(op, lambda_bar, cfg):
    """Estimated #{lambda_k <= lambda_bar}, averaged over Gaussian probes."""
    if cfg.seed is None:
        raise InvalidParams("EstimationConfig.seed must be set for direct use")
    n = op.shape[0]
    count = cfg.n_probe if cfg.n_probe is not None else default_probe_count(n)
    filt = indicator_filter(lambda_bar, cfg.count_filter_degree, damping="jackson")
    g = _probe_block(n, count, cfg.seed)
    y = apply_filter(op, filt, g)
    return float(np.sum(y * y) / count)


def estimate_lambda_k(op, k, cfg):
    """Dichotomy on [0, 2] for the K-th smallest eigenvalue.

    Keeps [lo, hi] with count(lo) < K <= count(hi); returns hi so that the
    downstream low-pass [0, lambda~_K] tends to cover the first K
    harmonics (over-covering only costs oversampling headroom).
    """
    if cfg.seed is None:
        raise InvalidParams("EstimationConfig.seed must be set for direct use")
    n = op.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRange(f"K={k} outside [1..{n}]")
    if k == n:
        return 2.0
    lo, hi = 0.0, 2.0
    max_iter = cfg.max_iterations if cfg.max_iterations is not None else required_iterations(cfg.tolerance)
    for i in range(max_iter):
        if hi - lo <= cfg.tolerance:
            break
        mid = 0.5 * (lo + hi)
        # fresh probes each iteration: avoids correlated bias across levels
        c = estimate_eigenvalue_count(op, mid, replace(cfg, seed=derived_seed(cfg.seed, i)))
        if c < k:
            lo = mid
        else:
            hi = mid
    return hi
