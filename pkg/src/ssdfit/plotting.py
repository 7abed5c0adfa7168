"""Matplotlib rendering of the fitted/empirical CDF figure.

The figure is a thin projection of the curve table: smooth fitted CDF
paths, the empirical curve (Turnbull steps or ECDF points), a dotted
horizontal line at the displayed HC level, and a vertical arrow at each
family's HC point.  Elements carry stable gids so output files can be
checked for presence of each part; there is no styling contract beyond
that.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import CurveTable

__all__ = ["render_figure"]


def render_figure(table: CurveTable, hc_table, out_path, hc_level: float | None = None):
    """Write the CDF figure to ``out_path`` (format from the extension)."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))

    for family, column in table.fitted.items():
        (line,) = ax.plot(table.x, column, linewidth=1.8, label=f"{family} fit")
        line.set_gid(f"fitted-cdf-{family}")

    if table.empirical_x.size:
        if table.empirical_kind == "turnbull":
            (steps,) = ax.plot(
                table.empirical_x,
                table.empirical_cdf,
                drawstyle="steps-post",
                color="black",
                linewidth=1.2,
                label="Turnbull estimate",
            )
            steps.set_gid("turnbull-steps")
        else:
            (points,) = ax.plot(
                table.empirical_x,
                table.empirical_cdf,
                "o",
                color="black",
                markersize=4,
                linestyle="none",
                label="empirical (Hazen)",
            )
            points.set_gid("ecdf-points")

    levels = sorted({est.p for rows in hc_table.values() for est in rows})
    level = hc_level if hc_level is not None else (levels[0] if levels else None)
    if level is not None:
        rule = ax.axhline(level / 100.0, linestyle=":", color="gray", linewidth=1.0)
        rule.set_gid("hc-level-line")
        for family, rows in hc_table.items():
            for est in rows:
                if est.p == level:
                    arrow = ax.annotate(
                        "",
                        xy=(est.point, level / 100.0),
                        xytext=(est.point, level / 100.0 + 0.12),
                        arrowprops={"arrowstyle": "->", "color": "gray"},
                    )
                    arrow.set_gid(f"hc-arrow-{family}")

    ax.set_xscale("log")
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("concentration")
    ax.set_ylabel("fraction of species affected")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(loc="lower right", fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
