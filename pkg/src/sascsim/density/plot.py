import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position


def plot_curves(curves, path, title: str = ""):
    """Write all curves into one PNG figure."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for curve in curves:
        ax.plot(curve.x, curve.density, label=curve.name)
    ax.set_xlabel("seconds")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_histogram(edges, counts, path, title: str = "utterance durations"):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.stairs(counts, edges, fill=True)
    ax.set_xlabel("duration [s]")
    ax.set_ylabel("utterances")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
