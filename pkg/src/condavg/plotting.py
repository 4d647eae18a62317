"""Figure rendering for sweep reports.

Renders the aggregate risk curves of one or more sweeps to an image file:
mean risk versus sample size on log-log axes, a shaded decile band, and a
vertical marker at the theoretical sample-size bound.  Keeping this in its
own module means the harness and CLI stay importable in environments
without a display; the Agg backend is forced before pyplot loads.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import SweepResult

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


def render_risk_curves(results, out_path: str, title: str | None = None) -> None:
    """Save a risk-versus-sample-size figure for the given sweep results."""
    if not results:
        raise ValueError("need at least one sweep result")
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    positive = True
    for result in results:
        for row in result.aggregates:
            if min(row.mean, row.q10, row.q90) <= 0:
                positive = False
    for i, result in enumerate(results):
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        ms = [row.m for row in result.aggregates]
        means = [row.mean for row in result.aggregates]
        q10 = [row.q10 for row in result.aggregates]
        q90 = [row.q90 for row in result.aggregates]
        label = f"{result.config.mode} ({result.config.family}, n={result.config.n})"
        ax.plot(ms, means, marker="o", color=color, label=label)
        ax.fill_between(ms, q10, q90, color=color, alpha=0.18, linewidth=0)
        ax.axvline(
            result.sample_bound,
            color=color,
            linestyle=":",
            alpha=0.7,
            label=f"bound m={result.sample_bound}",
        )
    ax.set_xscale("log")
    if positive:
        # Risk curves read best on log-log, but exact zeros force linear.
        ax.set_yscale("log")
    ax.set_xlabel("sample size m")
    ax.set_ylabel("risk")
    ax.set_title(title or "Risk vs. sample size (mean, decile band)")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_from_result(result: SweepResult, out_path: str) -> None:
    render_risk_curves([result], out_path)
