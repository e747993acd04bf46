"""CSV builders emitting the benchmark report schema."""

import csv

import pytest

COLUMNS = [
    "setting", "n", "sigma", "k", "r", "trial",
    "rel_err", "e_r", "e_p", "bound_e_p", "bound_e_r",
    "best_rank_k_err", "best_rank_kr_err",
    "t_lambda", "t_chi_filter", "t_ortho", "t_h_filter", "t_total",
]

_DEFAULTS = {
    "n": 500, "sigma": 5.0, "k": 50, "r": 15, "trial": 0,
    "rel_err": 1e-3, "e_r": 1e-2, "e_p": 1e-9, "bound_e_p": 1e-8, "bound_e_r": 0.5,
    "best_rank_k_err": 1e-4, "best_rank_kr_err": 1e-5,
    "t_lambda": 0.1, "t_chi_filter": 0.2, "t_ortho": 0.05, "t_h_filter": 0.1,
    "t_total": 0.45,
}


def write_report(path, rows, columns=COLUMNS):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            full = dict(_DEFAULTS, **row)
            writer.writerow({c: full.get(c, "") for c in columns})
    return path


def sigma_rows(sigmas=(1.0, 2.0, 5.0), trials=3):
    rows = []
    for s in sigmas:
        for t in range(trials):
            rows.append({
                "setting": f"sigma={s:g}", "sigma": s, "trial": t,
                "rel_err": 0.5 / s**2 * (1 + 0.1 * t),
            })
    return rows


def k_rows(ks=(25, 50, 100), trials=3):
    rows = []
    for k in ks:
        for t in range(trials):
            rows.append({
                "setting": f"k={k}", "k": k, "r": max(k // 10, 15), "trial": t,
                "rel_err": 1.0 / k * (1 + 0.05 * t),
                "best_rank_k_err": 0.5 / k,
                "best_rank_kr_err": 0.3 / k,
            })
    return rows


def timing_rows(ns=(1000,), ks=(50, 100, 200), trials=3):
    rows = []
    for n in ns:
        for k in ks:
            for t in range(trials):
                scale = n * k * 1e-6
                rows.append({
                    "setting": f"n={n},k={k}", "n": n, "k": k, "trial": t,
                    "rel_err": float("nan"),
                    "t_lambda": 0.02 * n * 1e-3,
                    "t_chi_filter": 0.6 * scale, "t_h_filter": 0.3 * scale,
                    "t_ortho": 0.05 * scale, "t_total": scale,
                })
    return rows


@pytest.fixture
def tmp_csv(tmp_path):
    def make(rows, name="report.csv", columns=COLUMNS):
        return write_report(tmp_path / name, rows, columns)

    return make
