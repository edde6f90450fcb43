"""Figure rendering for the report paths.

When a sweep or window report is written to a file, a companion PNG with the
observed valuations is rendered next to it.  matplotlib is imported lazily so
the CLI stays light when no figure is requested.
"""

from __future__ import annotations

from pathlib import Path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_path(out_path) -> Path:
    out = Path(out_path)
    return out.with_suffix(".png") if out.suffix else out.with_name(out.name + ".png")


def render_sweep_figure(rows, path) -> Path:
    """Scatter of v_p(delta[r,s]) against p, one marker style per (r, s).

    rows: iterable of (p, r, s, vp_int, passed).
    """
    plt = _pyplot()
    styles = {
        (1, 1): ("o", "tab:blue"),
        (2, 1): ("s", "tab:orange"),
        (2, 2): ("D", "tab:green"),
        (3, 1): ("^", "tab:red"),
        (3, 2): ("v", "tab:purple"),
        (3, 3): ("x", "tab:brown"),
    }
    fig, ax = plt.subplots(figsize=(9, 5))
    by_pair: dict = {}
    for p, r, s, v, _ in rows:
        by_pair.setdefault((r, s), []).append((p, v))
    for (r, s), points in sorted(by_pair.items()):
        marker, color = styles.get((r, s), ("o", "gray"))
        xs = [p for p, _ in points]
        ys = [v for _, v in points]
        ax.scatter(xs, ys, marker=marker, color=color, s=18, label=f"r={r}, s={s}")
    ax.axhline(4, color="black", linestyle="--", linewidth=1, label="threshold 4")
    ax.set_xlabel("prime p")
    ax.set_ylabel("v_p of principal-part integer")
    ax.set_title("Principal-part valuations across the prime sweep")
    ax.legend(loc="upper right", fontsize=8, ncol=2)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def render_window_figure(entries, path) -> Path:
    """Scatter of v_p(A(pm) - A(m)) against the index pm, colored by p.

    entries: iterable of (p, m, vp_int).
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(9, 5))
    xs = [p * m for p, m, _ in entries]
    ys = [v for _, _, v in entries]
    cs = [p for p, _, _ in entries]
    sc = ax.scatter(xs, ys, c=cs, cmap="viridis", s=14)
    fig.colorbar(sc, ax=ax, label="prime p")
    ax.axhline(4, color="black", linestyle="--", linewidth=1)
    ax.set_xlabel("index p*m")
    ax.set_ylabel("v_p(A(pm) - A(m))")
    ax.set_title("Supercongruence window valuations")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
