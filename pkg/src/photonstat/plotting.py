"""Matplotlib rendering of distribution reports to image files.

Import is kept out of the CLI's hot path; the Agg backend is forced so
rendering works headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_LINE_STYLES = ("-.", ":", "--", "-")
_MARKERS = ("o", "s", "^", "d")


def render_curves(ns, columns, path, title=None, ylabel="P(n)"):
    """Plot one curve per (label, values) pair over photon number and save.

    ``columns`` is an ordered mapping label -> sequence of probabilities.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, (label, values) in enumerate(columns.items()):
        ax.plot(ns, values, linestyle=_LINE_STYLES[i % len(_LINE_STYLES)],
                marker=_MARKERS[i % len(_MARKERS)], markersize=5, label=label)
    ax.set_xlabel("photon number n")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.set_ylim(bottom=0.0)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_distribution(dist, path, title=None):
    """Bar chart of a single photon-number distribution."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(dist.ns, dist.probs, width=0.8, color="tab:blue")
    ax.set_xlabel("photon number n")
    ax.set_ylabel("P(n)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
