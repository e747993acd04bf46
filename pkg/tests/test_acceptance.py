"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Desk-scale reruns of the headline results: oracle equivalence of the
ideal-filter path, the deterministic and expectation error bounds, the
Gaussian pseudoinverse moments, error trends over bandwidth and rank,
the community-graph failure mode, stage-timing scaling laws, and the
rank-window sanity of the eigenvalue search.

Filter degrees and estimation settings are pinned per criterion.  Where
a criterion leaves them free, degrees are chosen so the low-pass
transition stays thinner than the oversampling budget (on ring-like
spectra the transition spans about N/M eigenvalue positions); the
defaults that mirror the large-scale experiments are kept wherever the
criterion exercises them.
"""

import math
import time

import numpy as np

from conftest import cycle_eigenvalues, cycle_graph, random_connected_graph
from lrgk.bench import cmd_sweep_k, cmd_sweep_sigma, cmd_timing
from lrgk.embedding import ortho, range_find
from lrgk.estimation import EstimationConfig, estimate_lambda_k
from lrgk.filters import KernelFunction, indicator_filter, kernel_sqrt_filter
from lrgk.generators import GeneratorSpec, generate
from lrgk.graph import build_normalized_laplacian
from lrgk.oracle import (
    best_rank_k,
    dense_eigendecomposition,
    e_r_bound,
    mc_gaussian_pseudoinverse,
    spectral_matrix,
    spectral_norm_dense,
)

TIGHT_EST = EstimationConfig(tolerance=0.005, n_probe=80, seed=None)


def report(num, name, ok, elapsed, limit, detail):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {num} {name}: {status} ({elapsed:.1f}s < {limit:.0f}s) {detail}")
    assert elapsed < limit, f"criterion {num} exceeded its runtime budget: {elapsed:.1f}s"
    assert ok, f"criterion {num} failed: {detail}"


def test_criterion_1_ideal_case_exactness():
    t0 = time.perf_counter()
    h = KernelFunction("diffusion", sigma=5.0)
    worst = 0.0
    rng = np.random.default_rng(101)
    graphs = [cycle_graph(200), random_connected_graph(200, np.random.default_rng(7))]
    for graph in graphs:
        es = dense_eigendecomposition(build_normalized_laplacian(graph))
        h_half = spectral_matrix(es, h.sqrt_values(es.eigenvalues))
        for k in (10, 50):
            # oracle-exact low-pass: project the probes onto the first K
            # harmonics, then orthogonalize
            vk = es.eigenvectors[:, :k]
            g_probe = rng.standard_normal((200, k))
            q = ortho(vk @ (vk.T @ g_probe))
            phi = (h_half @ q).T
            ref = best_rank_k(es, h, k)
            err = np.linalg.norm(phi.T @ phi - ref) / np.linalg.norm(ref)
            worst = max(worst, err)
    report(
        1, "ideal-case exactness", worst <= 1e-8, time.perf_counter() - t0, 10,
        f"worst relative Frobenius error {worst:.2e} (<= 1e-8)",
    )


def test_criterion_2_deterministic_polynomial_bound():
    t0 = time.perf_counter()
    kernels = [
        KernelFunction("d-regularized-laplacian", sigma=2.0, d=2),
        KernelFunction("two-step-random-walk", sigma=2.0),
        KernelFunction("diffusion", sigma=3.0),
        KernelFunction("inverse-cosine", sigma=1.0),
    ]
    runs = 0
    worst_margin = -np.inf
    for n_idx, n in enumerate((100, 300)):
        graph = random_connected_graph(n, np.random.default_rng(50 + n_idx))
        op = build_normalized_laplacian(graph)
        es = dense_eigendecomposition(op)
        lam = es.eigenvalues
        k = 20
        for h in kernels:
            h_half = spectral_matrix(es, h.sqrt_values(lam))
            for m_h in (10, 30):
                p_h = kernel_sqrt_filter(h, m_h)
                eps_h = float(np.max(np.abs(h.sqrt_values(lam) - p_h(lam))))
                bound = 2 * eps_h + eps_h * eps_h
                p_mat = spectral_matrix(es, p_h(lam))
                for run in range(20):
                    q = range_find(op, k, 15, float(lam[k - 1]), 60, seed=1000 * m_h + run)
                    proj = q @ q.T
                    e_p = spectral_norm_dense(
                        h_half @ proj @ h_half - p_mat @ proj @ p_mat, symmetric=True
                    )
                    worst_margin = max(worst_margin, e_p - bound)
                    runs += 1
    ok = worst_margin <= 1e-9
    report(
        2, "polynomial error bound holds on every run", ok, time.perf_counter() - t0, 30,
        f"{runs} runs, worst (E_P - bound) = {worst_margin:.2e} (<= 1e-9)",
    )


def test_criterion_3_expectation_bound_on_range_error():
    t0 = time.perf_counter()
    n, k, r, m_chi = 128, 16, 15, 60
    graph = cycle_graph(n)
    op = build_normalized_laplacian(graph)
    es = dense_eigendecomposition(op)
    h = KernelFunction("diffusion", sigma=5.0)
    lam_closed = cycle_eigenvalues(n)
    lam_k = float(lam_closed[k - 1])
    p_chi = indicator_filter(lam_k, m_chi)
    # bound evaluated on the closed-form spectrum (the exact eigenvalue tie
    # lambda_K = lambda_{K+1} on the cycle makes the gated oracle op refuse;
    # the expectation bound itself is a plain formula of the spectrum)
    bound = e_r_bound(lam_closed, p_chi, h, k, r)
    h_half = spectral_matrix(es, h.sqrt_values(es.eigenvalues))
    measured = []
    for seed in range(20):
        q = range_find(op, k, r, lam_k, m_chi, seed=seed)
        measured.append(spectral_norm_dense(h_half - q @ (q.T @ h_half)))
    mean_e_r = float(np.mean(measured))
    report(
        3, "expectation bound on range-finding error", mean_e_r <= bound,
        time.perf_counter() - t0, 30,
        f"mean E_R over 20 seeds = {mean_e_r:.4f} <= bound {bound:.4f}",
    )


def test_criterion_4_gaussian_pseudoinverse_moments():
    t0 = time.perf_counter()
    k, r, trials = 20, 11, 2000
    rms, mean_spec = mc_gaussian_pseudoinverse(k, r, trials, seed=2024)
    expected = math.sqrt(k / (r - 1))
    spec_bound = math.e * math.sqrt(k + r) / r
    ok = abs(rms - expected) <= 0.05 * expected and mean_spec <= spec_bound
    report(
        4, "Gaussian pseudoinverse Monte Carlo", ok, time.perf_counter() - t0, 20,
        f"rms_F = {rms:.4f} vs sqrt(2) = {expected:.4f} (5%), "
        f"mean spectral = {mean_spec:.4f} <= {spec_bound:.4f}",
    )


def test_criterion_5_error_vs_bandwidth_trend():
    t0 = time.perf_counter()
    graph = generate(GeneratorSpec("swiss-roll", 1000, seed=11, k_nn=10))
    sigmas = [1, 2, 3, 4, 5]
    rep = cmd_sweep_sigma(
        graph, 160, 16, sigmas, trials=5, seed=0,
        m_chi=300, est_cfg=TIGHT_EST, with_bounds=False,
    )
    means = [rep.setting_mean(f"sigma={s}") for s in sigmas]
    ratio = means[-1] / means[0]
    max_consec = max(means[i + 1] / means[i] for i in range(len(means) - 1))
    ok = ratio <= 0.1 and max_consec <= 1.5
    report(
        5, "error collapses for localized kernels", ok, time.perf_counter() - t0, 180,
        f"means={['%.2e' % m for m in means]}, err(5)/err(1)={ratio:.2e} (<=0.1), "
        f"max consecutive ratio {max_consec:.2f} (<=1.5)",
    )


def test_criterion_6_error_vs_rank_trend():
    t0 = time.perf_counter()
    graph = cycle_graph(500)
    h = KernelFunction("diffusion", sigma=5.0)
    ks = [25, 50, 100, 200]
    rep = cmd_sweep_k(
        graph, h, ks + [500], trials=5, seed=7, m_chi=500, est_cfg=TIGHT_EST
    )
    ratios = {}
    for k in ks:
        recs = [r for r in rep.records if r["setting"] == f"k={k}"]
        ratios[k] = rep.setting_mean(f"k={k}") / recs[0]["best_rank_k_err"]
    padded = [r for r in rep.records if r["setting"] == "k=500"]
    pad_ok = all(r["rel_err"] <= 10 * r["bound_e_p"] for r in padded)
    monotone = rep.setting_mean("k=200") < rep.setting_mean("k=25")
    ok = all(v <= 5.0 for v in ratios.values()) and monotone and pad_ok
    report(
        6, "error tracks the best rank-K approximation", ok, time.perf_counter() - t0, 180,
        f"mean/best ratios={{{', '.join(f'{k}: {v:.2f}' for k, v in ratios.items())}}} (<=5), "
        f"err(200)<err(25)={monotone}, K+r>=N within 10x polynomial floor={pad_ok}",
    )


def test_criterion_7_community_failure_mode():
    t0 = time.perf_counter()
    graph = generate(GeneratorSpec("community", 400, seed=5, n_comm=8, p_in=0.2, p_out=0.002))
    h = KernelFunction("diffusion", sigma=5.0)
    # well-separated regime: K at the block count
    rep8 = cmd_sweep_k(
        graph, h, [8], trials=5, seed=3, m_chi=300, est_cfg=TIGHT_EST, with_bounds=False
    )
    best8 = rep8.records[0]["best_rank_k_err"]
    ratio8 = rep8.setting_mean("k=8") / best8
    # densely packed regime: keep the large-scale defaults so the
    # documented degradation actually shows
    rep200 = cmd_sweep_k(graph, h, [200], trials=5, seed=3)
    degraded = []
    for rec in rep200.records:
        degraded.append(
            rec["assumption1_holds"] is False
            or rec["rel_err"] > 10 * rec["best_rank_k_err"]
        )
    ok = ratio8 <= 5.0 and any(degraded)
    report(
        7, "community graph failure mode", ok, time.perf_counter() - t0, 120,
        f"K=8 mean/best = {ratio8:.2f} (<=5); K=200 degraded on "
        f"{sum(degraded)}/5 trials (need >=1)",
    )


def test_criterion_8_stage_timing_scaling():
    t0 = time.perf_counter()
    template = GeneratorSpec("swiss-roll", 2000, seed=21, k_nn=10)
    ks = [50, 100, 200, 400]
    rep_k = cmd_timing(template, [2000], ks, trials=3, seed=0)
    t_filter, t_lambda = [], []
    for k in ks:
        recs = [r for r in rep_k.records if r["k"] == k]
        t_filter.append(np.mean([r["t_chi_filter"] + r["t_h_filter"] for r in recs]))
        t_lambda.append(np.mean([r["t_lambda"] for r in recs]))
    slope_k = float(np.polyfit(np.log(ks), np.log(t_filter), 1)[0])
    lambda_ratio = max(t_lambda) / min(t_lambda)

    ns = [1000, 2000, 4000, 8000]
    rep_n = cmd_timing(template, ns, [100], trials=3, seed=0)
    t_total = [
        np.mean([r["t_total"] for r in rep_n.records if r["n"] == n]) for n in ns
    ]
    slope_n = float(np.polyfit(np.log(ns), np.log(t_total), 1)[0])
    ok = 0.7 <= slope_k <= 1.3 and 0.7 <= slope_n <= 1.4 and lambda_ratio <= 2.0
    report(
        8, "stage timings follow the predicted scaling", ok, time.perf_counter() - t0, 300,
        f"filter slope vs K = {slope_k:.2f} in [0.7,1.3]; total slope vs N = {slope_n:.2f} "
        f"in [0.7,1.4]; lambda-step max/min over K = {lambda_ratio:.2f} (<=2)",
    )


def test_criterion_9_lambda_k_rank_window():
    t0 = time.perf_counter()
    graph = cycle_graph(500)
    op = build_normalized_laplacian(graph)
    lam = cycle_eigenvalues(500)
    k = 50
    counts = []
    for seed in range(10):
        est = estimate_lambda_k(op, k, EstimationConfig(tolerance=0.02, seed=seed))
        counts.append(int(np.sum(lam <= est)))
    ok = all(0.8 * k <= c <= 1.3 * k for c in counts)
    report(
        9, "eigenvalue search lands in the rank window", ok, time.perf_counter() - t0, 30,
        f"exact counts at the estimate over 10 seeds: {counts} (in [40, 65])",
    )
