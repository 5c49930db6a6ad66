"""Static rendering of verified embeddings: deterministic SVG, optional PNG.

SVG output is written by hand so repeated runs are byte-identical: one
circle per vertex, one line segment per edge, 20 px per lattice unit,
screen y axis pointing down.  PNG output goes through matplotlib for
report-style figures.
"""

from __future__ import annotations

from typing import Iterable

from .lattice import Embedding, Graph

SCALE = 20
MARGIN = 20
VERTEX_RADIUS = 3


def _screen(emb: Embedding) -> dict[int, tuple[int, int]]:
    min_x = min(x for x, _ in emb.values())
    max_y = max(y for _, y in emb.values())
    return {
        v: (MARGIN + SCALE * (x - min_x), MARGIN + SCALE * (max_y - y))
        for v, (x, y) in emb.items()
    }


def render_svg(g: Graph, emb: Embedding, highlight: Iterable[int] = ()) -> str:
    """An SVG document for the embedded graph; highlighted vertices drawn red."""
    pts = _screen(emb)
    width = max(x for x, _ in pts.values()) + MARGIN
    height = max(y for _, y in pts.values()) + MARGIN
    hot = set(highlight)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for u, v in g.edges:
        (x1, y1), (x2, y2) = pts[u], pts[v]
        lines.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="black" stroke-width="2"/>'
        )
    for v in range(g.n):
        x, y = pts[v]
        fill = "red" if v in hot else "steelblue"
        lines.append(f'<circle cx="{x}" cy="{y}" r="{VERTEX_RADIUS}" fill="{fill}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_png(g: Graph, emb: Embedding, path: str, highlight: Iterable[int] = ()) -> None:
    """Raster figure via matplotlib, same content as the SVG path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    hot = set(highlight)
    fig, ax = plt.subplots(figsize=(8, 6))
    for u, v in g.edges:
        (x1, y1), (x2, y2) = emb[u], emb[v]
        ax.plot([x1, x2], [y1, y2], color="black", linewidth=1, zorder=1)
    xs = [emb[v][0] for v in range(g.n)]
    ys = [emb[v][1] for v in range(g.n)]
    colors = ["red" if v in hot else "steelblue" for v in range(g.n)]
    ax.scatter(xs, ys, c=colors, s=12, zorder=2)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def flag_endpoint_vertices(index: dict[str, int]) -> set[int]:
    """Vertex ids of flag endpoints, from a component index."""
    return {v for role, v in index.items() if role.startswith(("F[", "F'[")) and role.endswith(".1")}
