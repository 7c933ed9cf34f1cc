"""Graph rendering: deterministic DOT text and matplotlib figures.

Both views use the same conventions: one node per argument labelled
``{features}:outcome``, a hexagon for the new case and ellipses for
everything else, grounded members filled light grey, arrows pointing
from attacker to attacked.
"""

from __future__ import annotations

import os
from collections import defaultdict

from .framework import ArgGraph, Argument, KIND_NEW

os.environ.setdefault("MPLBACKEND", "Agg")

_FILL = "0.83"


def node_label(a: Argument) -> str:
    features = ",".join(sorted(a.characterisation.features))
    outcome = a.outcome if a.outcome is not None else "?"
    return "{%s}:%s" % (features, outcome)


def to_dot(graph: ArgGraph, grounded: frozenset[Argument] | None = None) -> str:
    """Serialize the graph as DOT, byte-stable for equal inputs."""
    grounded = grounded or frozenset()
    names = {a: f"n{i}" for i, a in enumerate(graph.arguments)}
    lines = ["digraph attacks {", "  rankdir=BT;"]
    for a in graph.arguments:
        shape = "hexagon" if a.kind == KIND_NEW else "ellipse"
        attrs = [f'label="{node_label(a)}"', f"shape={shape}"]
        if a in grounded:
            attrs.append(f'style=filled, fillcolor="{_FILL}"')
        lines.append(f"  {names[a]} [{', '.join(attrs)}];")
    for src, dst in sorted(
        graph.attacks, key=lambda e: (names[e[0]], names[e[1]])
    ):
        lines.append(f"  {names[src]} -> {names[dst]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _layers(graph: ArgGraph) -> list[list[Argument]]:
    """Stack arguments so attacks point upward; cycles share a layer."""
    targets: dict[Argument, list[Argument]] = defaultdict(list)
    for src, dst in graph.attacks:
        targets[src].append(dst)

    depth: dict[Argument, int] = {}

    def walk(a: Argument, trail: set[Argument]) -> int:
        if a in depth:
            return depth[a]
        if a in trail:
            return 0  # cycle member, settle for the floor
        trail.add(a)
        d = 0
        for t in targets[a]:
            d = max(d, walk(t, trail) + 1)
        trail.discard(a)
        depth[a] = d
        return d

    for a in graph.arguments:
        walk(a, set())
    stacked: dict[int, list[Argument]] = defaultdict(list)
    for a in graph.arguments:
        stacked[depth[a]].append(a)
    return [stacked[d] for d in sorted(stacked)]


def render_figure(
    graph: ArgGraph,
    grounded: frozenset[Argument] | None = None,
    path: str | os.PathLike = "attacks.png",
) -> None:
    """Draw the graph to an image file (format from the extension)."""
    import matplotlib.pyplot as plt
    from matplotlib.patches import Ellipse, FancyArrowPatch, Polygon

    grounded = grounded or frozenset()
    layers = _layers(graph)
    positions: dict[Argument, tuple[float, float]] = {}
    width = max(len(layer) for layer in layers) if layers else 1
    for row, layer in enumerate(layers):
        step = width / (len(layer) + 1)
        for col, a in enumerate(sorted(layer, key=lambda x: (x.kind, x.id))):
            positions[a] = ((col + 1) * step, row)

    fig, ax = plt.subplots(figsize=(1.0 + 2.4 * width, 1.0 + 1.4 * len(layers)))
    for a, (x, y) in positions.items():
        fill = _FILL if a in grounded else "white"
        if a.kind == KIND_NEW:
            pts = [
                (x - 0.42, y), (x - 0.26, y + 0.17), (x + 0.26, y + 0.17),
                (x + 0.42, y), (x + 0.26, y - 0.17), (x - 0.26, y - 0.17),
            ]
            ax.add_patch(Polygon(pts, closed=True, facecolor=fill, edgecolor="black"))
        else:
            ax.add_patch(
                Ellipse((x, y), 0.84, 0.34, facecolor=fill, edgecolor="black")
            )
        ax.text(x, y, node_label(a), ha="center", va="center", fontsize=9)
    for src, dst in graph.attacks:
        ax.add_patch(
            FancyArrowPatch(
                positions[src],
                positions[dst],
                arrowstyle="-|>",
                mutation_scale=14,
                shrinkA=24,
                shrinkB=24,
                color="black",
            )
        )
    ax.set_xlim(-0.2, width + 0.2)
    ax.set_ylim(-0.6, len(layers) - 0.4 if layers else 0.6)
    ax.set_aspect("auto")
    ax.axis("off")
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
