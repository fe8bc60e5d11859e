"""Figure registry and renderers.

Conventions follow the data they plot: solid lines for polaron results,
dashed for the number-conserving baseline, dots for exact diagonalization.
SVG output is byte-deterministic (fixed hash salt, no embedded dates).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .data import load_table  # noqa: E402

plt.rcParams["svg.hashsalt"] = "wqed-figures"
plt.rcParams["figure.figsize"] = (6.0, 4.0)

STYLE = {"polaron": {"linestyle": "-"},
         "rwa": {"linestyle": "--"},
         "ed": {"linestyle": "none", "marker": "o", "markersize": 4}}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    subcommand: str
    tables: tuple
    renderer: callable


def _save(fig, out_dir, figure_id):
    out = Path(out_dir) / f"{figure_id}.svg"
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out


def _per_delta_curves(table, ycol, ax, ylabel):
    for delta in table.distinct("delta"):
        sub = table.where(delta=delta)
        ax.plot(sub.column("g"), sub.column(ycol),
                label=f"splitting {delta}")
    ax.set_xlabel("coupling g")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)


def render_fig2a(tables, out_dir):
    fig, ax = plt.subplots()
    _per_delta_curves(tables["gs1q"], "delta_r_ratio", ax,
                      "renormalized / bare splitting")
    return _save(fig, out_dir, "fig2a")


def render_fig2b(tables, out_dir):
    fig, ax = plt.subplots()
    _per_delta_curves(tables["gs1q"], "p_e", ax, "excited population")
    return _save(fig, out_dir, "fig2b")


def render_fig2c(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["gs1q"]
    for delta in table.distinct("delta"):
        sub = table.where(delta=delta)
        shifted = [e + float(delta) / 2 for e in sub.column("e_gs")]
        ax.plot(sub.column("g"), shifted, label=f"splitting {delta}")
    ax.set_xlabel("coupling g")
    ax.set_ylabel("ground-state energy (relative to decoupled)")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig2c")


def render_fig3a(tables, out_dir):
    fig, ax = plt.subplots()
    _per_delta_curves(tables["bound1q_rwa"], "relative_difference", ax,
                      "relative bound-state energy difference")
    return _save(fig, out_dir, "fig3a")


def render_fig3b(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["bound1q_profiles"]
    for delta in table.distinct("delta"):
        sub = table.where(delta=delta)
        ax.plot(sub.column("n"), sub.column("value"),
                label=f"splitting {delta}")
    ax.set_yscale("log")
    ax.set_xlabel("site offset from qubit")
    ax.set_ylabel("photon number")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig3b")


def render_fig3c(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["bound1q_energies"]
    _per_delta_curves(table, "e1_excitation", ax,
                      "excitation energy above ground state")
    ax.axhline(float(table.column("band_bottom")[0]), color="k", lw=0.8,
               label="band bottom")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig3c")


def render_fig4(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["gsphotons_1q"]
    for method in table.distinct("method"):
        sub = table.where(method=method)
        ax.plot(sub.column("n"), sub.column("value"), label=method,
                **STYLE[method])
    ax.set_xlabel("site offset from qubit")
    ax.set_ylabel("ground-state photon number")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig4")


def render_fig5(tables, out_dir):
    table = tables["benchmark_ed_sebs"]
    g_values = table.distinct("g")
    fig, axes = plt.subplots(1, len(g_values), figsize=(4 * len(g_values), 3.5),
                             sharey=False)
    if len(g_values) == 1:
        axes = [axes]
    for ax, g in zip(axes, g_values):
        for method in ("polaron", "rwa", "ed"):
            sub = table.where(g=g, method=method)
            ax.plot(sub.column("n"), sub.column("value"), label=method,
                    **STYLE[method])
        ax.set_title(f"g = {g}")
        ax.set_xlabel("site offset from qubit")
    axes[0].set_ylabel("bound-state photon number")
    axes[0].legend(frameon=False)
    fig.tight_layout()
    return _save(fig, out_dir, "fig5")


def render_fig6(tables, out_dir):
    table = tables["gsphotons_2q"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    base = table.where(x=3)
    for delta in base.distinct("delta"):
        sub = base.where(delta=delta)
        ax1.plot(sub.column("n"), sub.column("value"),
                 label=f"splitting {delta}")
    ax1.set_title("separation 3")
    ax1.set_xlabel("site offset from midpoint")
    ax1.set_ylabel("ground-state photon number")
    ax1.legend(frameon=False)
    for x in ("5", "15"):
        sub = table.where(x=x)
        if len(sub):
            ax2.plot(sub.column("n"), sub.column("value"),
                     label=f"separation {x}")
    ax2.set_title("cloud separation")
    ax2.set_xlabel("site offset from midpoint")
    ax2.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, out_dir, "fig6")


def render_fig7(tables, out_dir):
    fig, ax = plt.subplots()
    trace = tables["emission_trace"]
    summary = tables["emission_summary"]
    markov = tables["emission_markov"]
    colors = {}
    for delta in trace.distinct("delta"):
        sub = trace.where(delta=delta)
        line, = ax.plot(sub.column("t"), sub.column("sigma_z"),
                        label=f"splitting {delta}")
        colors[delta] = line.get_color()
    for delta, stat in zip(summary.column("delta", numeric=False),
                           summary.column("stationary")):
        ax.axhline(stat, linestyle="--", color=colors.get(delta, "grey"),
                   lw=0.9)
    for delta in markov.distinct("delta"):
        sub = markov.where(delta=delta)
        ax.plot(sub.column("t"), sub.column("sigma_z_renormalized"),
                color="k", lw=1.0, label="golden-rule decay")
    ax.set_xlabel("time")
    ax.set_ylabel("magnetization")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig7")


def render_fig7b(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["gs2q_renorm"]
    for delta in table.distinct("delta"):
        sub = table.where(delta=delta)
        line, = ax.plot(sub.column("g"), sub.column("delta_r_ratio_2q"),
                        label=f"splitting {delta}")
        ax.plot(sub.column("g"), sub.column("delta_r_ratio_1q"),
                linestyle="none", marker="o", markersize=3,
                color=line.get_color())
    ax.set_xlabel("coupling g")
    ax.set_ylabel("renormalized / bare splitting")
    ax.legend(frameon=False, title="solid: pair, dots: single")
    return _save(fig, out_dir, "fig7b")


def render_fig8(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["gs2q_ising"]
    xs = np.array(table.column("x"))
    js = np.abs(np.array(table.column("j_ising")))
    ax.plot(xs, js, marker="o")
    good = js > 0
    if good.sum() >= 3:
        slope = np.polyfit(xs[good], np.log(js[good]), 1)[0]
        ax.annotate(f"decay rate {-slope:.3f}/site",
                    xy=(0.55, 0.8), xycoords="axes fraction")
    ax.set_yscale("log")
    ax.set_xlabel("separation (sites)")
    ax.set_ylabel("exchange constant")
    return _save(fig, out_dir, "fig8")


def render_fig9(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["bound2q_wavefunctions"]
    for parity in table.distinct("parity"):
        for method in ("polaron", "rwa"):
            sub = table.where(parity=parity, method=method)
            if len(sub):
                ax.plot(sub.column("n"), sub.column("amplitude"),
                        label=f"{parity} ({method})", **STYLE[method])
    ax.set_xlabel("site offset from midpoint")
    ax.set_ylabel("photon amplitude")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig9")


def render_fig10(tables, out_dir):
    fig, ax = plt.subplots()
    table = tables["bound2q_energies"]
    for method in ("polaron", "rwa"):
        sub = table.where(method=method)
        xs = np.array(sub.column("x"))
        gap = np.array(sub.column("splitting"))
        keep = ~np.isnan(gap)
        ax.plot(xs[keep], gap[keep], label=method, **STYLE[method])
    ax.set_yscale("log")
    ax.set_xlabel("separation (sites)")
    ax.set_ylabel("doublet splitting")
    ax.legend(frameon=False)
    return _save(fig, out_dir, "fig10")


def render_fig11(tables, out_dir):
    table = tables["bound2q_profiles"]
    x_values = table.distinct("x")
    fig, axes = plt.subplots(1, len(x_values), figsize=(4.5 * len(x_values), 3.5))
    if len(x_values) == 1:
        axes = [axes]
    for ax, x in zip(axes, x_values):
        sub_x = table.where(x=x)
        for parity in sub_x.distinct("parity"):
            sub = sub_x.where(parity=parity)
            ax.plot(sub.column("n"), sub.column("value"), label=parity)
        ax.set_title(f"separation {x}")
        ax.set_xlabel("site offset from midpoint")
    axes[0].set_ylabel("photon number")
    axes[0].legend(frameon=False)
    fig.tight_layout()
    return _save(fig, out_dir, "fig11")


def render_transfer(tables, out_dir):
    trace = tables["transfer_trace"]
    summary = tables["transfer_summary"]
    fig, (ax, axg) = plt.subplots(
        2, 1, sharex=True, figsize=(6.5, 5),
        gridspec_kw={"height_ratios": [3, 1]})
    ts = trace.column("t")
    ax.plot(ts, trace.column("p_left"), label="left qubit")
    ax.plot(ts, trace.column("p_right"), label="right qubit")
    fidelity = summary.column("fidelity")[0]
    ax.annotate(f"final fidelity {fidelity:.4f}", xy=(0.45, 0.5),
                xycoords="axes fraction")
    ax.set_ylabel("excitation population")
    ax.legend(frameon=False)
    axg.plot(ts, trace.column("g1"), label="left coupling")
    axg.plot(ts, trace.column("g2"), label="right coupling")
    axg.set_xlabel("time")
    axg.set_ylabel("coupling")
    axg.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, out_dir, "transfer")


FIGURES = {
    "fig2a": FigureSpec("fig2a", "gs1q", ("gs1q",), render_fig2a),
    "fig2b": FigureSpec("fig2b", "gs1q", ("gs1q",), render_fig2b),
    "fig2c": FigureSpec("fig2c", "gs1q", ("gs1q",), render_fig2c),
    "fig3a": FigureSpec("fig3a", "bound1q", ("bound1q_rwa",), render_fig3a),
    "fig3b": FigureSpec("fig3b", "bound1q", ("bound1q_profiles",),
                        render_fig3b),
    "fig3c": FigureSpec("fig3c", "bound1q", ("bound1q_energies",),
                        render_fig3c),
    "fig4": FigureSpec("fig4", "gsphotons", ("gsphotons_1q",), render_fig4),
    "fig5": FigureSpec("fig5", "benchmark-ed", ("benchmark_ed_sebs",),
                       render_fig5),
    "fig6": FigureSpec("fig6", "gsphotons", ("gsphotons_2q",), render_fig6),
    "fig7": FigureSpec("fig7", "emission",
                       ("emission_trace", "emission_summary",
                        "emission_markov"), render_fig7),
    "fig7b": FigureSpec("fig7b", "gs2q", ("gs2q_renorm",), render_fig7b),
    "fig8": FigureSpec("fig8", "gs2q", ("gs2q_ising",), render_fig8),
    "fig9": FigureSpec("fig9", "bound2q", ("bound2q_wavefunctions",),
                       render_fig9),
    "fig10": FigureSpec("fig10", "bound2q", ("bound2q_energies",),
                        render_fig10),
    "fig11": FigureSpec("fig11", "bound2q", ("bound2q_profiles",),
                        render_fig11),
    "transfer": FigureSpec("transfer", "transfer",
                           ("transfer_trace", "transfer_summary"),
                           render_transfer),
}


def render(figure_id, data_dir, out_dir):
    """Load, verify, and render one figure id. Returns the output path."""
    spec = FIGURES[figure_id]
    tables = {name: load_table(data_dir, name, spec.subcommand)
              for name in spec.tables}
    return spec.renderer(tables, out_dir)
