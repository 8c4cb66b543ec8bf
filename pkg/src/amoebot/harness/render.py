"""SVG and ASCII pictures of a configuration.

Colors follow the usual snapshot convention: seed green, retired black,
roots red, followers blue.  Inactive particles are drawn grey.
"""

from __future__ import annotations

from pathlib import Path

from amoebot.core import Configuration, State
from amoebot.grid import DIRECTIONS, Node, to_cartesian

COLORS = {
    "seed": "#2ca02c",
    State.RETIRED: "#000000",
    State.ROOT: "#d62728",
    State.FOLLOWER: "#1f77b4",
    State.INACTIVE: "#9e9e9e",
}

GLYPHS = {
    State.RETIRED: "#",
    State.ROOT: "R",
    State.FOLLOWER: "F",
    State.INACTIVE: "I",
}


def _color(cfg: Configuration, pid: int) -> str:
    p = cfg.particles[pid]
    return COLORS["seed"] if p.is_seed else COLORS[p.state]


def _neighborhood(cfg: Configuration) -> set[Node]:
    out = set()
    for v in cfg.occupancy:
        out.add(Node(*v))
        for dq, dr in DIRECTIONS:
            out.add(Node(v[0] + dq, v[1] + dr))
    return out


def render_svg(cfg: Configuration, path: str | Path | None = None, scale: float = 24.0) -> str:
    """SVG 1.1 picture; seed at the origin of the lattice layout."""
    origin = cfg.seed.head
    nodes = _neighborhood(cfg)

    def xy(v) -> tuple[float, float]:
        x, y = to_cartesian((v[0] - origin[0], v[1] - origin[1]))
        return x * scale, y * scale

    pts = {v: xy(v) for v in nodes}
    xs = [x for x, _ in pts.values()]
    ys = [y for _, y in pts.values()]
    pad = scale
    minx, miny = min(xs) - pad, min(ys) - pad
    width, height = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{minx:.2f} {miny:.2f} {width:.2f} {height:.2f}" '
        f'width="{width:.0f}" height="{height:.0f}">',
        '<g stroke="#d0d0d0" stroke-width="1">',
    ]
    for v in sorted(nodes):
        x1, y1 = pts[v]
        for d in (0, 1, 2):
            w = Node(v[0] + DIRECTIONS[d][0], v[1] + DIRECTIONS[d][1])
            if w in pts:
                x2, y2 = pts[w]
                out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
    out.append("</g>")
    out.append('<g stroke-width="3">')
    radius = scale * 0.3
    for pid, p in enumerate(cfg.particles):
        color = _color(cfg, pid)
        if p.expanded:
            (x1, y1), (x2, y2) = xy(p.head), xy(p.tail)
            out.append(
                f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{color}"/>'
            )
        for v in p.nodes():
            x, y = xy(v)
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius:.2f}" fill="{color}"/>')
    out.append("</g>")
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg)
    return svg


def render_ascii(cfg: Configuration) -> str:
    """Text picture: one line per lattice row, rows shifted by half a cell.

    ``@`` is the seed, ``#`` retired, ``R``/``F``/``I`` root, follower and
    inactive heads; the tail of an expanded particle is the lowercase glyph.
    Empty nodes next to the particles are dots.
    """
    cells: dict[Node, str] = {v: "." for v in _neighborhood(cfg)}
    for p in cfg.particles:
        glyph = "@" if p.is_seed else GLYPHS[p.state]
        cells[Node(*p.head)] = glyph
        if p.expanded:
            cells[Node(*p.tail)] = glyph.lower()
    rows = sorted({v.r for v in cells})
    cols = [2 * v.q + v.r for v in cells]
    left = min(cols)
    lines = []
    for r in rows:
        line = [" "] * (max(cols) - left + 1)
        for v, ch in cells.items():
            if v.r == r:
                line[2 * v.q + v.r - left] = ch
        lines.append("".join(line).rstrip())
    return "\n".join(lines) + "\n"
