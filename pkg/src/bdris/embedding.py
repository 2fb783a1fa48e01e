"""Straight-line planar drawing of the 3-band graph and crossing checks.

The drawing is grown one vertex at a time. The outer boundary is always the
triangle formed by the three newest vertices, with everything older inside it.
Vertex ``v_k`` is joined to ``v_{k-3}, v_{k-2}, v_{k-1}`` and is placed
beyond the oldest of them, ``v_k = 3 v_{k-3} - v_{k-2} - v_{k-1}``. This puts
``v_{k-3}`` strictly inside the new triangle ``v_{k-2} v_{k-1} v_k``, so the
old drawing is swallowed and the three new edges stay out of its interior.

Coordinates are Python integers. Every orientation test is then exact, which
rules out false "no crossing" answers from rounding.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence
from xml.sax.saxutils import escape

from .architectures import ArchitectureSpec, build_graph
from .graph_core import CircuitGraph

__all__ = [
    "PlanarDrawing",
    "band3_recursive_drawing",
    "count_crossings",
    "convex_hull",
    "export_svg",
    "drawing_to_json",
]

_BASE_TRIANGLE = ((0, 0), (2, 0), (1, 2))


@dataclass(frozen=True)
class PlanarDrawing:
    """Graph plus one point per vertex (``points[v - 1]`` is vertex ``v``)."""

    graph: CircuitGraph
    points: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.points) != self.graph.n:
            raise ValueError(
                f"{len(self.points)} points given for a graph of order {self.graph.n}"
            )
        if len(set(self.points)) != len(self.points):
            raise ValueError("vertex coordinates must be distinct")

    @property
    def edges(self):
        return self.graph.edges

    def segment(self, e):
        return self.points[e[0] - 1], self.points[e[1] - 1]

    def as_float(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x, y in self.points]


def band3_recursive_drawing(n: int, *, check_steps: bool = False) -> PlanarDrawing:
    """Planar drawing of the 3-band graph on ``n >= 3`` vertices.

    With ``check_steps`` each intermediate drawing is checked to keep its three
    newest vertices on the convex hull; an ``AssertionError`` flags a failure.
    """
    if n < 3:
        raise ValueError(f"the recursion starts from a triangle; need n >= 3, got {n}")
    pts = list(_BASE_TRIANGLE)
    for k in range(4, n + 1):
        a, b, c = pts[k - 4], pts[k - 3], pts[k - 2]
        pts.append((3 * a[0] - b[0] - c[0], 3 * a[1] - b[1] - c[1]))
        if check_steps:
            hull = set(convex_hull(pts))
            assert {pts[k - 3], pts[k - 2], pts[k - 1]} <= hull, f"step {k}"
            assert len(hull) == 3, f"step {k}: outer boundary is not a triangle"
    return PlanarDrawing(build_graph(ArchitectureSpec("band", 3), n), tuple(pts))


# ---------------------------------------------------------------------------
# Exact geometry
# ---------------------------------------------------------------------------


def _exact(p):
    x, y = p
    return (x if isinstance(x, Rational) else Fraction(x),
            y if isinstance(y, Rational) else Fraction(y))


def _orient(p, q, r):
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r):
    # r collinear with pq: is it inside the closed box?
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def _segments_meet(p1, p2, q1, q2) -> bool:
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _on_segment(q1, q2, p1))
        or (d2 == 0 and _on_segment(q1, q2, p2))
        or (d3 == 0 and _on_segment(p1, p2, q1))
        or (d4 == 0 and _on_segment(p1, p2, q2))
    )


def _adjacent_overlap(shared, a, b) -> bool:
    # edges shared-a and shared-b overlap beyond the shared point iff they
    # are collinear and point the same way
    if _orient(shared, a, b) != 0:
        return False
    return ((a[0] - shared[0]) * (b[0] - shared[0]) + (a[1] - shared[1]) * (b[1] - shared[1])) > 0


def count_crossings(d: PlanarDrawing) -> int:
    """Number of edge pairs whose segments meet away from a shared endpoint.

    Touching, vertex-on-edge contact and collinear overlap all count.
    Computation is exact for integer, rational or float coordinates.
    """
    pts = [_exact(p) for p in d.points]
    segs = []
    for i, j in d.edges:
        p, q = pts[i - 1], pts[j - 1]
        box = (min(p[0], q[0]), max(p[0], q[0]), min(p[1], q[1]), max(p[1], q[1]))
        segs.append(((i, j), p, q, box))
    count = 0
    for (e, p1, p2, b1), (f, q1, q2, b2) in itertools.combinations(segs, 2):
        if b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2]:
            continue
        common = set(e) & set(f)
        if common:
            (v,) = common
            s = pts[v - 1]
            a = pts[(e[0] if e[1] == v else e[1]) - 1]
            b = pts[(f[0] if f[1] == v else f[1]) - 1]
            count += _adjacent_overlap(s, a, b)
        else:
            count += _segments_meet(p1, p2, q1, q2)
    return count


def convex_hull(points: Sequence[tuple]) -> list[tuple]:
    """Strict convex hull vertices (collinear boundary points dropped), CCW."""
    pts = sorted(set(points), key=lambda p: (p[0], p[1]))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(_exact(out[-2]), _exact(out[-1]), _exact(p)) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def export_svg(d: PlanarDrawing, size: int = 480, margin: int = 30) -> str:
    """Render as SVG: one line per edge, one circle and label per vertex."""
    fl = d.as_float()
    xs, ys = [p[0] for p in fl], [p[1] for p in fl]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (size - 2 * margin) / span

    def tx(p):
        # flip y so the drawing is upright
        return margin + (p[0] - min(xs)) * scale, size - margin - (p[1] - min(ys)) * scale

    screen = [tx(p) for p in fl]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<g stroke="#333" stroke-width="1.2">',
    ]
    for i, j in d.edges:
        (x1, y1), (x2, y2) = screen[i - 1], screen[j - 1]
        out.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
    out.append("</g>")
    out.append('<g fill="white" stroke="black" stroke-width="1.5">')
    for x, y in screen:
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="9"/>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="9" text-anchor="middle">')
    for v, (x, y) in enumerate(screen, start=1):
        out.append(f'<text x="{x:.3f}" y="{y + 3:.3f}">{escape(f"v{v}")}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def drawing_to_json(d: PlanarDrawing) -> str:
    return json.dumps({"points": [[x, y] for x, y in d.points]})
