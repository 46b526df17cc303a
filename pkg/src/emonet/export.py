"""Text exports of networks, community strengths and layouts.

Everything here returns a string and uses fixed number formatting, so the
same inputs always give the same bytes.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Sequence

import numpy as np

from .graph import SemanticNetwork
from .mdmc import CommunityNetwork
from .mds import OMEGA_DISPLAY_SCALE, Layout


def _num(x: float) -> str:
    return f"{float(x):.10g}"


def _quote(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def network_dot(
    net: SemanticNetwork,
    colors: Sequence[str] | None = None,
    groups: Sequence[int] | None = None,
) -> str:
    """Directed DOT graph; one edge per nonzero off-diagonal weight.

    Edge ``a -> b`` carries ``L[a, b]``.  ``groups`` adds a ``community``
    attribute to each node.
    """
    lines = ["digraph semantic_network {"]
    for i, w in enumerate(net.words):
        attrs = [f"label={_quote(w)}"]
        if colors is not None:
            attrs.append(f"fillcolor={_quote(colors[i])}, style=filled")
        if groups is not None:
            attrs.append(f"community={int(groups[i])}")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    w = net.weights
    for a in range(net.n):
        for b in range(net.n):
            if a != b and w[a, b] > 0:
                lines.append(f"  n{a} -> n{b} [weight={_num(w[a, b])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def network_graphml(net: SemanticNetwork, groups: Sequence[int] | None = None) -> str:
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ET.SubElement(root, "key", id="label", attrib={"for": "node", "attr.name": "label", "attr.type": "string"})
    ET.SubElement(root, "key", id="community", attrib={"for": "node", "attr.name": "community", "attr.type": "int"})
    ET.SubElement(root, "key", id="weight", attrib={"for": "edge", "attr.name": "weight", "attr.type": "double"})
    graph = ET.SubElement(root, "graph", id="semantic_network", edgedefault="directed")
    for i, word in enumerate(net.words):
        node = ET.SubElement(graph, "node", id=f"n{i}")
        ET.SubElement(node, "data", key="label").text = word
        if groups is not None:
            ET.SubElement(node, "data", key="community").text = str(int(groups[i]))
    w = net.weights
    for a in range(net.n):
        for b in range(net.n):
            if a != b and w[a, b] > 0:
                edge = ET.SubElement(graph, "edge", source=f"n{a}", target=f"n{b}")
                ET.SubElement(edge, "data", key="weight").text = _num(w[a, b])
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def community_label(cn: CommunityNetwork, pos: int, words: Sequence[str] | None = None) -> str:
    top = cn.top_nodes[pos]
    names = [words[i] if words is not None else str(i) for i in top]
    return f"C{cn.communities[pos]}: " + ", ".join(names)


def omega_dot(cn: CommunityNetwork, words: Sequence[str] | None = None, scale: float = OMEGA_DISPLAY_SCALE) -> str:
    """DOT graph of community strengths, each multiplied by ``scale``.

    Edge ``a -> b`` carries ``scale * omega[b, a]``, the flow from community
    ``a`` into community ``b``.  Self-loops are kept.
    """
    om = cn.scaled(scale)
    lines = ["digraph community_network {"]
    for pos in range(len(cn.communities)):
        lines.append(f"  c{cn.communities[pos]} [label={_quote(community_label(cn, pos, words))}];")
    for src, a in enumerate(cn.communities):
        for dst, b in enumerate(cn.communities):
            lines.append(f"  c{a} -> c{b} [weight={_num(om[dst, src])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def layout_svg(
    layout: Layout,
    labels: Sequence[str],
    colors: Sequence[str] | None = None,
    size: int = 640,
    radius: float = 6.0,
    title: str | None = None,
) -> str:
    """Scatter of a 2-D layout: one ``circle`` glyph and one label per point."""
    xy = np.asarray(layout.coords, dtype=float)
    if xy.shape[1] == 1:
        xy = np.column_stack([xy, np.zeros(len(xy))])
    xy = xy[:, :2]
    if len(labels) != len(xy):
        raise ValueError("one label per point is required")
    margin = 60.0
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = float(max((hi - lo).max(), 1e-12))
    pts = margin + (xy - lo) / span * (size - 2 * margin)
    pts[:, 1] = size - pts[:, 1]  # y grows downward in SVG

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{size / 2:.1f}" y="24" text-anchor="middle" font-size="16">{_esc(title)}</text>')
    for i, (x, y) in enumerate(pts):
        fill = colors[i] if colors is not None else "#4c72b0"
        out.append(f'<circle class="node" cx="{x:.2f}" cy="{y:.2f}" r="{radius:.1f}" fill="{_esc(fill)}" stroke="black"/>')
        out.append(f'<text x="{x + radius + 2:.2f}" y="{y + 4:.2f}" font-size="11">{_esc(labels[i])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
