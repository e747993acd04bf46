"""Experiment runner: sigma sweeps, rank sweeps and timing studies.

Each study produces an ExperimentReport holding the config snapshot,
one flat record per (setting, trial) and min/mean/max aggregates per
setting.  Per-trial seeds derive from (base seed, setting index, trial
index), so results never depend on execution order.  Reports serialize
to report.json (full) and report.csv (flat, documented column schema).
"""

import csv
import hashlib
import json
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .embedding import approximate_kernel
from .errors import EmptySweep, InvalidParams, TooLarge
from .estimation import EstimationConfig
from .filters import ChebyshevFilter, KernelFunction
from .generators import generate
from .graph import build_normalized_laplacian, graph_text
from .oracle import (
    DENSE_CAP,
    dense_eigendecomposition,
    e_r_bound,
    epsilon_diagnostics,
    exact_kernel,
    measured_errors,
    power_iteration_norm,
    spectral_norm_dense,
)
from .rng import derived_seed

# flat CSV schema, one row per trial-setting; figure tools key on these names
CSV_COLUMNS = [
    "setting",
    "n",
    "sigma",
    "k",
    "r",
    "trial",
    "rel_err",
    "e_r",
    "e_p",
    "bound_e_p",
    "bound_e_r",
    "best_rank_k_err",
    "best_rank_kr_err",
    "t_lambda",
    "t_chi_filter",
    "t_ortho",
    "t_h_filter",
    "t_total",
]

_AGG_METRICS = ["rel_err", "e_r", "e_p", "t_lambda", "t_chi_filter", "t_ortho", "t_h_filter", "t_total"]

KIND_ALIASES = {
    "dreg": "d-regularized-laplacian",
    "rw2": "two-step-random-walk",
    "diffusion": "diffusion",
    "invcos": "inverse-cosine",
}

_DENSE_NORM_CAP = 1500  # above this, spectral norms via power iteration

NAN = float("nan")


def make_kernel(kind, sigma, d=1):
    """KernelFunction from a CLI-style kind name."""
    canonical = KIND_ALIASES.get(kind, kind)
    return KernelFunction(kind=canonical, sigma=sigma, d=d)


def default_oversampling(k):
    return max(k // 10, 15)


@dataclass
class ExperimentReport:
    """Config snapshot, per-trial records and per-setting aggregates."""

    config: dict
    records: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)

    def finalize(self):
        self.aggregates = _aggregate(self.records)
        return self

    def to_dict(self):
        return {"config": self.config, "records": self.records, "aggregates": self.aggregates}

    def write_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in self.records:
                writer.writerow([_csv_cell(rec.get(col)) for col in CSV_COLUMNS])

    def setting_mean(self, setting, metric="rel_err"):
        return self.aggregates[setting][metric]["mean"]


def _csv_cell(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return value


def _aggregate(records):
    out = {}
    for rec in records:
        out.setdefault(rec["setting"], []).append(rec)
    agg = {}
    for setting, recs in out.items():
        agg[setting] = {}
        for metric in _AGG_METRICS:
            vals = np.array([rec[metric] for rec in recs], dtype=float)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                agg[setting][metric] = {
                    "min": float(np.nanmin(vals)) if vals.size else NAN,
                    "mean": float(np.nanmean(vals)) if vals.size else NAN,
                    "max": float(np.nanmax(vals)) if vals.size else NAN,
                }
    return agg


def _graph_hash(graph):
    return hashlib.sha256(graph_text(graph).encode("utf-8")).hexdigest()


def _est_snapshot(cfg):
    return {
        "tolerance": cfg.tolerance,
        "n_probe": cfg.n_probe,
        "count_filter_degree": cfg.count_filter_degree,
        "max_iterations": cfg.max_iterations,
    }


def _rel_error(es, h, gamma, emb, dense_norm_cap, power_iters, seed):
    """Relative spectral error of the embedding's Gram matrix vs gamma."""
    n = es.n
    norm_ref = float(np.max(h(es.eigenvalues)))
    gamma_tilde = emb.gram()
    if n <= dense_norm_cap:
        return spectral_norm_dense(gamma - gamma_tilde, symmetric=True) / norm_ref, True
    diff = power_iteration_norm(
        lambda x: gamma @ x - emb.phi.T @ (emb.phi @ x), n, iters=power_iters, seed=seed
    )
    return diff.value / norm_ref, diff.converged


def _trial_diagnostics(es, h, emb):
    """Measured and bounded error columns for one trial (dense path)."""
    n = es.n
    p_h = emb.filter_h
    if emb.k >= n:  # padded run: Q = I, range finding exact
        q = np.eye(n)
        e_r, e_p, _ = measured_errors(es, h, q, p_h)
        eps_h = float(np.max(np.abs(h.sqrt_values(es.eigenvalues) - p_h(es.eigenvalues))))
        return {
            "e_r": e_r,
            "e_p": e_p,
            "bound_e_p": 2.0 * eps_h + eps_h * eps_h,
            "bound_e_r": NAN,
            "assumption1_holds": None,
        }
    q = emb.basis
    p_chi = ChebyshevFilter.from_dict(emb.provenance["filter_chi"])
    eps_chi, eps_h, assumption = epsilon_diagnostics(es, p_chi, p_h, h, emb.k)
    e_r, e_p, _ = measured_errors(es, h, q, p_h)
    try:
        bound = e_r_bound(es.eigenvalues, p_chi, h, emb.k, emb.r)
    except InvalidParams:
        bound = NAN
    return {
        "e_r": e_r,
        "e_p": e_p,
        "bound_e_p": 2.0 * eps_h + eps_h * eps_h,
        "bound_e_r": bound,
        "assumption1_holds": assumption,
    }


def _best_rank_err(es, h, k):
    """Relative spectral error of the optimal rank-k truncation."""
    if k >= es.n:
        return 0.0
    norm_ref = float(np.max(h(es.eigenvalues)))
    return float(h(es.eigenvalues[k])) / norm_ref


def _run_setting(
    graph,
    es,
    h,
    k,
    r,
    setting,
    sigma,
    trials,
    seed,
    setting_index,
    m_chi,
    m_h,
    est_template,
    with_bounds,
    dense_norm_cap,
    power_iters,
    gamma,
):
    records = []
    for trial in range(trials):
        tseed = derived_seed(seed, setting_index, trial)
        est_cfg = replace(est_template, seed=derived_seed(tseed, 1))
        emb = approximate_kernel(
            graph, h, k, r, m_chi=m_chi, m_h=m_h, est_cfg=est_cfg, seed=tseed, keep_basis=with_bounds
        )
        rel, converged = _rel_error(es, h, gamma, emb, dense_norm_cap, power_iters, tseed)
        rec = {
            "setting": setting,
            "n": graph.num_nodes,
            "sigma": sigma,
            "k": k,
            "r": r,
            "trial": trial,
            "seed": tseed,
            "rel_err": rel,
            "error_converged": converged,
            "e_r": NAN,
            "e_p": NAN,
            "bound_e_p": NAN,
            "bound_e_r": NAN,
            "assumption1_holds": None,
            "best_rank_k_err": _best_rank_err(es, h, k),
            "best_rank_kr_err": _best_rank_err(es, h, min(k + r, graph.num_nodes)),
            "lambda_k_estimate": emb.lambda_k_estimate,
        }
        if with_bounds:
            rec.update(_trial_diagnostics(es, h, emb))
        rec.update({f"t_{name}": emb.provenance["stage_timings"].get(f"t_{name}", 0.0)
                    for name in ("lambda", "chi_filter", "ortho", "h_filter", "total")})
        records.append(rec)
    return records


def cmd_sweep_sigma(
    graph,
    k,
    r,
    sigmas,
    trials,
    seed,
    kernel_kind="diffusion",
    d=1,
    m_chi=60,
    m_h=30,
    est_cfg=None,
    oracle_cap=DENSE_CAP,
    with_bounds=True,
    dense_norm_cap=_DENSE_NORM_CAP,
    power_iters=2000,
):
    """Error study over kernel bandwidths sigma (trials full pipelines each)."""
    sigmas = list(sigmas)
    if not sigmas:
        raise EmptySweep("no sigma values given")
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    n = graph.num_nodes
    if n > oracle_cap:
        raise TooLarge(n, oracle_cap)
    if r is None:
        r = default_oversampling(k)
    est_template = est_cfg if est_cfg is not None else EstimationConfig(seed=None)
    es = dense_eigendecomposition(build_normalized_laplacian(graph), cap=oracle_cap)
    report = ExperimentReport(
        config={
            "command": "sweep-sigma",
            "n": n,
            "graph_hash": _graph_hash(graph),
            "kernel_kind": kernel_kind,
            "d": d,
            "k": k,
            "r": r,
            "sigmas": sigmas,
            "trials": trials,
            "seed": seed,
            "m_chi": m_chi,
            "m_h": m_h,
            "est": _est_snapshot(est_template),
        }
    )
    for si, sigma in enumerate(sigmas):
        h = make_kernel(kernel_kind, sigma, d)
        gamma = exact_kernel(es, h)
        report.records.extend(
            _run_setting(
                graph, es, h, k, r, f"sigma={sigma:g}", float(sigma), trials, seed, si,
                m_chi, m_h, est_template, with_bounds, dense_norm_cap, power_iters, gamma,
            )
        )
    return report.finalize()


def cmd_sweep_k(
    graph,
    h,
    ks,
    trials,
    seed,
    r=None,
    m_chi=60,
    m_h=30,
    est_cfg=None,
    oracle_cap=DENSE_CAP,
    with_bounds=True,
    dense_norm_cap=_DENSE_NORM_CAP,
    power_iters=2000,
):
    """Error study over target ranks K, with best rank-K / rank-(K+r) baselines."""
    ks = list(ks)
    if not ks:
        raise EmptySweep("no K values given")
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    n = graph.num_nodes
    if n > oracle_cap:
        raise TooLarge(n, oracle_cap)
    est_template = est_cfg if est_cfg is not None else EstimationConfig(seed=None)
    es = dense_eigendecomposition(build_normalized_laplacian(graph), cap=oracle_cap)
    gamma = exact_kernel(es, h)
    report = ExperimentReport(
        config={
            "command": "sweep-k",
            "n": n,
            "graph_hash": _graph_hash(graph),
            "kernel_kind": h.kind,
            "sigma": h.sigma,
            "d": h.d,
            "ks": ks,
            "r": r,
            "trials": trials,
            "seed": seed,
            "m_chi": m_chi,
            "m_h": m_h,
            "est": _est_snapshot(est_template),
        }
    )
    for si, k in enumerate(ks):
        rk = r if r is not None else default_oversampling(k)
        report.records.extend(
            _run_setting(
                graph, es, h, k, rk, f"k={k}", float(h.sigma), trials, seed, si,
                m_chi, m_h, est_template, with_bounds, dense_norm_cap, power_iters, gamma,
            )
        )
    return report.finalize()


def cmd_timing(
    template,
    ns,
    ks,
    trials,
    seed,
    kernel_kind="diffusion",
    sigma=5.0,
    d=1,
    m_chi=60,
    m_h=30,
    est_cfg=None,
):
    """Per-stage wall-clock over the (N, K) grid; one warm-up run discarded.

    No error metrics here (the dense oracle is not run), so the error
    columns are NaN.
    """
    ns, ks = list(ns), list(ks)
    if not ns or not ks:
        raise EmptySweep("timing needs non-empty N and K lists")
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    h = make_kernel(kernel_kind, sigma, d)
    est_template = est_cfg if est_cfg is not None else EstimationConfig(seed=None)
    report = ExperimentReport(
        config={
            "command": "timing",
            "family": template.family,
            "ns": ns,
            "ks": ks,
            "trials": trials,
            "seed": seed,
            "kernel_kind": kernel_kind,
            "sigma": sigma,
            "m_chi": m_chi,
            "m_h": m_h,
            "est": _est_snapshot(est_template),
        }
    )
    graphs = {}
    setting_index = 0
    for n in ns:
        if n not in graphs:
            graphs[n] = generate(replace(template, n=n, seed=derived_seed(template.seed, n)))
        graph = graphs[n]
        for k in ks:
            rk = default_oversampling(k)
            if k + rk > n:
                raise InvalidParams(f"K+r={k + rk} exceeds N={n} in timing grid")
            for trial in range(-1, trials):  # trial -1 is the discarded warm-up
                tseed = derived_seed(seed, setting_index, trial + 1)
                est_run = replace(est_template, seed=derived_seed(tseed, 1))
                t0 = time.perf_counter()
                emb = approximate_kernel(
                    graph, h, k, rk, m_chi=m_chi, m_h=m_h, est_cfg=est_run, seed=tseed
                )
                total = time.perf_counter() - t0
                if trial < 0:
                    continue
                timings = emb.provenance["stage_timings"]
                report.records.append(
                    {
                        "setting": f"n={n},k={k}",
                        "n": n,
                        "sigma": float(sigma),
                        "k": k,
                        "r": rk,
                        "trial": trial,
                        "seed": tseed,
                        "rel_err": NAN,
                        "error_converged": None,
                        "e_r": NAN,
                        "e_p": NAN,
                        "bound_e_p": NAN,
                        "bound_e_r": NAN,
                        "assumption1_holds": None,
                        "best_rank_k_err": NAN,
                        "best_rank_kr_err": NAN,
                        "lambda_k_estimate": emb.lambda_k_estimate,
                        "t_lambda": timings["t_lambda"],
                        "t_chi_filter": timings["t_chi_filter"],
                        "t_ortho": timings["t_ortho"],
                        "t_h_filter": timings["t_h_filter"],
                        "t_total": total,
                    }
                )
            setting_index += 1
    return report.finalize()
