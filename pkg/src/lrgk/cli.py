"""Benchmark command line: graph generation, approximation and studies.

Exit codes: 0 success, 2 validation error (bad inputs/parameters),
3 numeric failure during computation.
"""

import json
import os
import sys

import click
import numpy as np

from . import bench
from .embedding import approximate_kernel, save_embedding
from .errors import NumericError, ValidationError
from .estimation import EstimationConfig
from .filters import ChebyshevFilter
from .generators import FAMILIES, GeneratorSpec, generate
from .graph import build_normalized_laplacian, load_graph, save_graph
from .oracle import dense_eigendecomposition, diagnose, mc_gaussian_pseudoinverse
from .rng import derived_seed


def _int_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def _float_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


_kernel_opts = [
    click.option("--kernel", type=click.Choice(sorted(bench.KIND_ALIASES)), default="diffusion", show_default=True),
    click.option("--sigma", type=float, default=5.0, show_default=True, help="Kernel bandwidth."),
    click.option("--d", "d", type=int, default=1, show_default=True, help="Exponent of the regularized kind."),
]

_pipeline_opts = [
    click.option("--k", "k", type=int, required=True, help="Target rank K."),
    click.option("--r", "r", type=int, default=None, help="Oversampling [default: max(K/10, 15)]."),
    click.option("--m-chi", type=int, default=60, show_default=True, help="Low-pass filter degree."),
    click.option("--m-h", type=int, default=30, show_default=True, help="Kernel filter degree."),
    click.option("--seed", type=int, default=0, show_default=True),
]


def _add(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn

    return deco


def _write_report(report, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "report.json")
    csv_path = os.path.join(out_dir, "report.csv")
    report.write_json(json_path)
    report.write_csv(csv_path)
    click.echo(f"wrote {json_path} and {csv_path}")


@click.group()
def cli():
    """Randomized low-rank graph kernel approximation benchmarks."""


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--n", "n", type=int, required=True, help="Node count.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--knn", type=int, default=10, show_default=True, help="swiss-roll neighbors.")
@click.option("--width", type=float, default=None, help="swiss-roll kernel width [default: mean k-NN distance].")
@click.option("--ncomm", type=int, default=8, show_default=True, help="community blocks.")
@click.option("--pin", type=float, default=0.2, show_default=True, help="community intra-block edge probability.")
@click.option("--pout", type=float, default=0.002, show_default=True, help="community inter-block edge probability.")
@click.option("--out", type=click.Path(), required=True)
def gen(family, n, seed, knn, width, ncomm, pin, pout, out):
    """Generate a synthetic graph and write the text format."""
    spec = GeneratorSpec(
        family=family, n=n, seed=seed, k_nn=knn, width=width, n_comm=ncomm, p_in=pin, p_out=pout
    )
    graph = generate(spec)
    save_graph(graph, out)
    click.echo(f"wrote {out}: N={graph.num_nodes} E={graph.num_edges}")


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@_add(_kernel_opts)
@_add(_pipeline_opts)
@click.option("--lambda-k", type=float, default=None, help="Skip estimation and cut at this value.")
@click.option("--out", type=click.Path(), required=True, help="Embedding output file.")
def approx(graph_path, kernel, sigma, d, k, r, m_chi, m_h, seed, lambda_k, out):
    """Compute a kernel embedding and persist it (JSON header + raw matrix)."""
    graph = load_graph(graph_path)
    h = bench.make_kernel(kernel, sigma, d)
    if r is None:
        r = bench.default_oversampling(k)
    emb = approximate_kernel(graph, h, k, r, m_chi=m_chi, m_h=m_h, seed=seed, lambda_k=lambda_k)
    save_embedding(emb, out)
    click.echo(json.dumps({
        "out": out,
        "n": emb.num_nodes,
        "k": emb.k,
        "r": emb.r,
        "lambda_k_estimate": emb.lambda_k_estimate,
        "stage_timings": emb.provenance["stage_timings"],
    }))


@cli.command("sweep-sigma")
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--kernel", type=click.Choice(sorted(bench.KIND_ALIASES)), default="diffusion", show_default=True)
@click.option("--d", "d", type=int, default=1, show_default=True)
@click.option("--sigmas", callback=_float_list, required=True, help="Comma-separated bandwidths.")
@_add(_pipeline_opts)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), default=".", show_default=True, help="Report directory.")
def sweep_sigma(graph_path, kernel, d, sigmas, k, r, m_chi, m_h, seed, trials, out):
    """Relative spectral error as a function of the kernel bandwidth."""
    graph = load_graph(graph_path)
    report = bench.cmd_sweep_sigma(
        graph, k, r, sigmas, trials, seed, kernel_kind=kernel, d=d, m_chi=m_chi, m_h=m_h
    )
    _write_report(report, out)


@cli.command("sweep-k")
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@_add(_kernel_opts)
@click.option("--ks", callback=_int_list, required=True, help="Comma-separated target ranks.")
@click.option("--r", "r", type=int, default=None, help="Oversampling [default: max(K/10, 15) per K].")
@click.option("--m-chi", type=int, default=60, show_default=True)
@click.option("--m-h", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), default=".", show_default=True, help="Report directory.")
def sweep_k(graph_path, kernel, sigma, d, ks, r, m_chi, m_h, seed, trials, out):
    """Relative spectral error vs target rank, with best rank-K baselines."""
    graph = load_graph(graph_path)
    h = bench.make_kernel(kernel, sigma, d)
    report = bench.cmd_sweep_k(graph, h, ks, trials, seed, r=r, m_chi=m_chi, m_h=m_h)
    _write_report(report, out)


@cli.command()
@click.option("--family", type=click.Choice(FAMILIES), default="swiss-roll", show_default=True)
@click.option("--knn", type=int, default=10, show_default=True)
@click.option("--ns", callback=_int_list, required=True, help="Comma-separated node counts.")
@click.option("--ks", callback=_int_list, required=True, help="Comma-separated target ranks.")
@_add(_kernel_opts)
@click.option("--m-chi", type=int, default=60, show_default=True)
@click.option("--m-h", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), default=".", show_default=True, help="Report directory.")
def timing(family, knn, ns, ks, kernel, sigma, d, m_chi, m_h, seed, trials, out):
    """Per-stage wall clock over an (N, K) grid; warm-up run discarded."""
    template = GeneratorSpec(family=family, n=max(ns), seed=seed, k_nn=knn)
    report = bench.cmd_timing(
        template, ns, ks, trials, seed, kernel_kind=kernel, sigma=sigma, d=d, m_chi=m_chi, m_h=m_h
    )
    _write_report(report, out)


@cli.command("verify-bounds")
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@_add(_kernel_opts)
@_add(_pipeline_opts)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="JSON output path [default: stdout].")
def verify_bounds(graph_path, kernel, sigma, d, k, r, m_chi, m_h, seed, trials, out):
    """Measured error decomposition vs the theoretical bounds (dense oracle)."""
    graph = load_graph(graph_path)
    h = bench.make_kernel(kernel, sigma, d)
    if r is None:
        r = bench.default_oversampling(k)
    es = dense_eigendecomposition(build_normalized_laplacian(graph))
    runs = []
    for trial in range(trials):
        tseed = derived_seed(seed, 0, trial)
        emb = approximate_kernel(
            graph, h, k, r, m_chi=m_chi, m_h=m_h,
            est_cfg=EstimationConfig(seed=derived_seed(tseed, 1)),
            seed=tseed, keep_basis=True,
        )
        p_chi = ChebyshevFilter.from_dict(emb.provenance["filter_chi"])
        rep = diagnose(es, h, p_chi, emb.filter_h, emb.basis, emb.k, emb.r)
        runs.append({"trial": trial, "seed": tseed, "lambda_k_estimate": emb.lambda_k_estimate,
                     **rep.to_dict()})
    mean_e_r = float(np.mean([r_["e_r"] for r_ in runs]))
    mean_bound = float(np.mean([r_["bound_e_r"] for r_ in runs]))
    payload = {
        "config": {"graph": graph_path, "kernel": kernel, "sigma": sigma, "d": d,
                   "k": k, "r": r, "m_chi": m_chi, "m_h": m_h, "seed": seed, "trials": trials},
        "runs": runs,
        "summary": {
            "mean_e_r": mean_e_r,
            "mean_e_r_within_bound": bool(mean_e_r <= mean_bound),
            "e_p_within_bound_all_runs": bool(
                all(r_["e_p"] <= r_["bound_e_p"] + 1e-9 for r_ in runs)
            ),
        },
    }
    text = json.dumps(payload, indent=1)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


@cli.command("mc-lemma")
@click.option("--k", "k", type=int, default=20, show_default=True)
@click.option("--r", "r", type=int, default=11, show_default=True)
@click.option("--trials", type=int, default=2000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="JSON output path [default: stdout].")
def mc_lemma(k, r, trials, seed, out):
    """Monte-Carlo moments of the Gaussian pseudoinverse vs closed forms."""
    rms_f, mean_s = mc_gaussian_pseudoinverse(k, r, trials, seed)
    expected_rms = (k / (r - 1)) ** 0.5
    spectral_bound = np.e * (k + r) ** 0.5 / r
    payload = {
        "k": k,
        "r": r,
        "trials": trials,
        "seed": seed,
        "rms_frobenius": rms_f,
        "expected_rms_frobenius": expected_rms,
        "mean_spectral": mean_s,
        "spectral_bound": float(spectral_bound),
        "rms_within_5pct": bool(abs(rms_f - expected_rms) <= 0.05 * expected_rms),
        "spectral_within_bound": bool(mean_s <= spectral_bound),
    }
    text = json.dumps(payload, indent=1)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


def main():
    try:
        cli(standalone_mode=True)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except NumericError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
