"""Figure rendering for experiment CSVs.

One PNG per experiment run, written next to the CSV.  The CSV stays the
machine-readable contract; figures are a reading aid only, so every renderer
takes the already-computed rows and never recomputes a metric.  Uses the Agg
backend: safe without a display.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

_STRUCTURE_STYLE = {"tree": "o-", "path": "s-", "matching": "^-"}


def _render_crossing(rows: Sequence[tuple], ax: plt.Axes) -> None:
    worst: dict[str, dict[int, float]] = defaultdict(dict)
    for n, structure, _trial, _mc, ratio in rows:
        cur = worst[structure].get(n, 0.0)
        worst[structure][n] = max(cur, float(ratio))
    for structure, per_n in sorted(worst.items()):
        ns = sorted(per_n)
        ax.plot(ns, [per_n[n] for n in ns], _STRUCTURE_STYLE.get(structure, "x-"), label=structure)
    ax.axhline(4.0, color="gray", linestyle="--", linewidth=1, label="4 sqrt(n) bound")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("max crossing / sqrt(n)")
    ax.set_title("Halfplane crossing numbers")
    ax.legend()


def _render_approx_error(rows: Sequence[tuple], ax: plt.Axes) -> None:
    by_budget: dict[int, list[int]] = defaultdict(list)
    for _n, _trial, i, _level, err, _ok in rows:
        by_budget[int(i)].append(int(err))
    budgets = sorted(by_budget)
    ax.plot(budgets, budgets, "--", color="gray", linewidth=1, label="budget i")
    for i in budgets:
        ax.plot([i] * len(by_budget[i]), by_budget[i], "o", color="C0", alpha=0.4)
    ax.plot(budgets, [max(by_budget[i]) for i in budgets], "s-", color="C1", label="worst trial")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("budget i")
    ax.set_ylabel("max |approx - exact|")
    ax.set_title("Approximate count error vs budget")
    ax.legend()


def _render_side_query_cost(rows: Sequence[tuple], ax: plt.Axes) -> None:
    per_n: dict[int, list[tuple[float, float]]] = defaultdict(list)
    for n, _trial, _q, mean_nodes, _p99, mean_exact, _p99e in rows:
        per_n[int(n)].append((float(mean_nodes), float(mean_exact)))
    ns = sorted(per_n)
    mean_major = [sum(v[0] for v in per_n[n]) / len(per_n[n]) for n in ns]
    mean_exact = [sum(v[1] for v in per_n[n]) / len(per_n[n]) for n in ns]
    ax.plot(ns, mean_major, "o-", label="majority test (chain)")
    ax.plot(ns, mean_exact, "s-", label="exact count (single tree)")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("mean nodes visited per query")
    ax.set_title("Side-query cost scaling")
    ax.legend()


def _render_estimator_error(rows: Sequence[tuple], ax: plt.Axes) -> None:
    rels = [float(rel) for _n, _r, _trial, rel in rows]
    ax.hist(rels, bins=30, color="C0")
    ax.set_xlabel("|d' - d| / d")
    ax.set_ylabel("trials")
    n = rows[0][0] if rows else "?"
    r = rows[0][1] if rows else "?"
    ax.set_title(f"Estimator relative error (n={n}, r={r})")


def _render_level_histogram(rows: Sequence[tuple], ax: plt.Axes) -> None:
    per_n: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for n, i, count, _cum in rows:
        per_n[int(n)].append((int(i), int(count)))
    for n in sorted(per_n):
        pairs = sorted(per_n[n])
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs], "-", label=f"n={n}")
    ax.set_yscale("symlog")
    ax.set_xlabel("distance bucket i from the median level")
    ax.set_ylabel("vertices n_i")
    ax.set_title("Vertex levels around the median level")
    ax.legend()


_RENDERERS = {
    "crossing": _render_crossing,
    "approx-error": _render_approx_error,
    "side-query-cost": _render_side_query_cost,
    "estimator-error": _render_estimator_error,
    "level-histogram": _render_level_histogram,
}


def render(experiment: str, rows: Sequence[tuple], path: str) -> str:
    """Render the experiment's rows to a PNG at path; returns path."""
    if experiment not in _RENDERERS:
        raise ValueError(f"no renderer for experiment {experiment!r}")
    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=120)
    try:
        _RENDERERS[experiment](rows, ax)
        fig.tight_layout()
        fig.savefig(path)
    finally:
        plt.close(fig)
    return path
