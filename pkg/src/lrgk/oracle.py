"""Dense-eigendecomposition ground truth for small graphs.

Exact kernels, best rank-K truncations, measured/bounded error
decompositions and Monte-Carlo checks of the Gaussian pseudoinverse
moments.  Everything here is O(N^2)-O(N^3) and guarded by a size cap;
the randomized pipeline never depends on this module.
"""

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import AssumptionViolated, InvalidParams, KOutOfRange, TooLarge
from .rng import derived_seed

DENSE_CAP = 3000  # keeps the O(N^3) path under a minute

_GAP_TOL = 1e-12  # eigenvalue gap below this counts as a degenerate pair


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (ascending, in [0, 2]) and orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]


def dense_eigendecomposition(op, cap=DENSE_CAP):
    """Full symmetric eigendecomposition of the Laplacian operator."""
    n = op.shape[0]
    if n > cap:
        raise TooLarge(n, cap)
    lam, v = np.linalg.eigh(op.to_dense())
    return EigenSystem(eigenvalues=lam, eigenvectors=v)


def spectral_matrix(es, values):
    """V diag(values) V^T."""
    return (es.eigenvectors * np.asarray(values)) @ es.eigenvectors.T


def apply_spectral_function(es, f, x):
    """Exact filtering V f(Lambda) V^T x through the eigendecomposition."""
    vals = np.asarray(f(es.eigenvalues), dtype=np.float64)
    return es.eigenvectors @ (vals[:, None] * (es.eigenvectors.T @ x))


def exact_kernel(es, h):
    """Dense kernel matrix sum_k h(lambda_k) v_k v_k^T."""
    return spectral_matrix(es, h(es.eigenvalues))


def best_rank_k(es, h, k):
    """Optimal rank-K truncation: keep the K smoothest harmonics.

    Its spectral error against the full kernel is h(lambda_{K+1}).
    """
    n = es.n
    if not 1 <= k <= n:
        raise KOutOfRange(f"K={k} outside [1..{n}]")
    vk = es.eigenvectors[:, :k]
    return (vk * h(es.eigenvalues[:k])) @ vk.T


def spectral_norm_dense(a, symmetric=False):
    """||A||_2 of a dense matrix (eigh path for symmetric input)."""
    if symmetric:
        return float(np.max(np.abs(np.linalg.eigvalsh(a))))
    return float(np.linalg.norm(a, 2))


class SpectralNormEstimate(NamedTuple):
    value: float
    converged: bool


def power_iteration_norm(apply_fn, n, iters=2000, tol=1e-9, seed=0):
    """Largest |eigenvalue| of a symmetric operator given as a matvec.

    Runs from a fixed seeded start plus one random restart and keeps the
    larger Rayleigh estimate; `converged` is False if either run exhausted
    its iterations (the value is then only a lower bound).
    """
    best, all_conv = 0.0, True
    for run in range(2):
        rng = np.random.default_rng(derived_seed(seed, run))
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        prev = np.inf
        converged = False
        est = 0.0
        for _ in range(iters):
            y = apply_fn(x)
            ny = np.linalg.norm(y)
            if ny == 0.0:
                est, converged = 0.0, True
                break
            est = abs(float(x @ y))
            if abs(est - prev) <= tol * max(est, 1e-300):
                converged = True
                break
            prev = est
            x = y / ny
        best = max(best, est)
        all_conv = all_conv and converged
    return SpectralNormEstimate(best, all_conv)


def relative_spectral_error(a_apply, b_apply, n, iters=2000, tol=1e-9, seed=0):
    """||A - B|| / ||A|| for symmetric operators given as matvecs."""
    diff = power_iteration_norm(lambda x: a_apply(x) - b_apply(x), n, iters, tol, seed)
    ref = power_iteration_norm(a_apply, n, iters, tol, seed)
    if ref.value == 0.0:
        return SpectralNormEstimate(math.inf if diff.value else 0.0, diff.converged and ref.converged)
    return SpectralNormEstimate(diff.value / ref.value, diff.converged and ref.converged)


def _assumption_holds(lam, p_chi, k, eps_chi):
    # clause 1: distinct cut; exact float ties (closed-form twins) fail here
    if lam[k] - lam[k - 1] <= _GAP_TOL:
        return False
    passband = p_chi(lam[:k])
    return bool(np.all(passband >= 0.5) and np.all(passband <= 1.0 + eps_chi + 1e-12))


def epsilon_diagnostics(es, p_chi, p_h, h, k):
    """Worst-case polynomial errors on the discrete spectrum.

    eps_chi = max_{j>K} |p_chi(lambda_j)| (indicator leakage above the cut),
    eps_h   = max_j |h^{1/2}(lambda_j) - p_h(lambda_j)|, and the passband
    assumption flag (distinct cut and 1/2 <= p_chi <= 1+eps_chi below it).
    """
    lam = es.eigenvalues
    if not 1 <= k < es.n:
        raise KOutOfRange(f"K={k} must satisfy 1 <= K < N={es.n}")
    eps_chi = float(np.max(np.abs(p_chi(lam[k:]))))
    eps_h = float(np.max(np.abs(h.sqrt_values(lam) - p_h(lam))))
    return eps_chi, eps_h, _assumption_holds(lam, p_chi, k, eps_chi)


def e_r_bound(eigenvalues, p_chi, h, k, r):
    """Expectation bound on the range-finding error (no assumption gate).

    h^{1/2}(lambda_{K+1}) + 2 sqrt(K/(r-1)) p_chi(lambda_{K+1})
    + 2e sqrt(K+r)/r * (sum_{j>K} p_chi(lambda_j)^2)^{1/2}
    """
    lam = np.asarray(eigenvalues)
    if r < 2 or k < 2:
        raise InvalidParams(f"bound needs K >= 2 and r >= 2, got K={k}, r={r}")
    if k >= lam.shape[0]:
        raise KOutOfRange(f"K={k} must be < N={lam.shape[0]}")
    lam_k1 = lam[k]
    tail = p_chi(lam[k:])
    return float(
        h.sqrt_values(lam_k1)
        + 2.0 * math.sqrt(k / (r - 1.0)) * p_chi(lam_k1)
        + 2.0 * math.e * (math.sqrt(k + r) / r) * math.sqrt(np.sum(tail * tail))
    )


def kernel_error_bounds(es, p_chi, h, k, r, eps_h):
    """(bound_E_P, bound_E_R) under the passband assumption.

    bound_E_P = 2 eps_h + eps_h^2 holds deterministically; bound_E_R
    bounds the expected range-finding error.  Raises AssumptionViolated
    when the assumption fails (densely packed spectra), in which case the
    ungated e_r_bound value is still reported by diagnose().
    """
    if r < 2 or k < 2:
        raise InvalidParams(f"bounds need K >= 2 and r >= 2, got K={k}, r={r}")
    lam = es.eigenvalues
    if k >= es.n:
        raise KOutOfRange(f"K={k} must be < N={es.n}")
    eps_chi = float(np.max(np.abs(p_chi(lam[k:]))))
    if not _assumption_holds(lam, p_chi, k, eps_chi):
        raise AssumptionViolated(
            f"passband assumption fails at K={k} (gap {lam[k] - lam[k - 1]:.3e})"
        )
    bound_e_p = 2.0 * eps_h + eps_h * eps_h
    return bound_e_p, e_r_bound(lam, p_chi, h, k, r)


def measured_errors(es, h, q, p_h):
    """Dense measured (E_R, E_P, E) for a computed basis Q and filter p_h.

    E_R = ||(I - QQ^T) h^{1/2}(L)||,
    E_P = ||h^{1/2}(L) QQ^T h^{1/2}(L) - p_h(L) QQ^T p_h(L)||,
    E   = ||h(L) - p_h(L) QQ^T p_h(L)||, and E <= E_R^2 + E_P must hold.
    """
    lam = es.eigenvalues
    h_half = spectral_matrix(es, h.sqrt_values(lam))
    p_mat = spectral_matrix(es, p_h(lam))
    proj = q @ q.T
    e_r = spectral_norm_dense(h_half - proj @ h_half)
    approx = p_mat @ proj @ p_mat
    e_p = spectral_norm_dense(h_half @ proj @ h_half - approx, symmetric=True)
    e_total = spectral_norm_dense(spectral_matrix(es, h(lam)) - approx, symmetric=True)
    if e_total > e_r * e_r + e_p + 1e-9:
        raise AssertionError(
            f"error decomposition violated: E={e_total} > E_R^2+E_P={e_r * e_r + e_p}"
        )
    return e_r, e_p, e_total


def mc_gaussian_pseudoinverse(k, r, trials, seed=0):
    """Monte-Carlo moments of the pseudoinverse of a K x (K+r) Gaussian.

    Returns (rms_frobenius, mean_spectral); the first converges to
    sqrt(K/(r-1)) and the second is bounded by e sqrt(K+r)/r.
    """
    if k < 2 or r < 2:
        raise InvalidParams(f"need K >= 2 and r >= 2, got K={k}, r={r}")
    if trials < 100:
        raise InvalidParams(f"need >= 100 trials, got {trials}")
    fro2 = np.empty(trials)
    spec = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng(derived_seed(seed, t))
        s = np.linalg.svd(rng.standard_normal((k, k + r)), compute_uv=False)
        fro2[t] = np.sum(1.0 / (s * s))
        spec[t] = 1.0 / s[-1]
    return float(np.sqrt(np.mean(fro2))), float(np.mean(spec))


@dataclass
class DiagnosticsReport:
    """Scalar diagnostics for one computed approximation."""

    eps_chi: float
    eps_h: float
    assumption1_holds: bool
    e_r: float
    e_p: float
    bound_e_p: float
    bound_e_r: float
    rel_spectral_error: float

    def to_dict(self):
        return asdict(self)


def diagnose(es, h, p_chi, p_h, q, k, r):
    """Assemble the full diagnostics for a run (dense path).

    Bound fields are always finite: bound_e_r uses the ungated formula and
    assumption1_holds records whether the gate would have passed.
    """
    eps_chi, eps_h, assumption = epsilon_diagnostics(es, p_chi, p_h, h, k)
    e_r, e_p, e_total = measured_errors(es, h, q, p_h)
    norm_ref = float(np.max(h(es.eigenvalues)))
    return DiagnosticsReport(
        eps_chi=eps_chi,
        eps_h=eps_h,
        assumption1_holds=assumption,
        e_r=e_r,
        e_p=e_p,
        bound_e_p=2.0 * eps_h + eps_h * eps_h,
        bound_e_r=e_r_bound(es.eigenvalues, p_chi, h, k, r),
        rel_spectral_error=e_total / norm_ref,
    )
