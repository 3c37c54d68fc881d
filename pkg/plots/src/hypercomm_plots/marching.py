"""Level-set extraction on a rectangular grid (marching squares).

Produces the line segments along which a scalar field, known at grid
points, crosses a given level.  Done by hand rather than through a
plotting library so the segment vertices written to sidecar files are a
stable, exactly reproducible function of the grid values alone.
"""

from __future__ import annotations

import math

Point = tuple[float, float]
Segment = tuple[Point, Point]

# Crossed-edge pairs per corner-occupancy mask (bit 1 = bottom-left,
# 2 = bottom-right, 4 = top-right, 8 = top-left; a bit is set when the
# corner value is >= level).  Edges are "b"ottom, "r"ight, "t"op, "l"eft.
# Masks 5 and 10 are saddles, resolved at runtime by the cell-center mean.
_EDGE_PAIRS: dict[int, tuple[tuple[str, str], ...]] = {
    0: (),
    1: (("b", "l"),),
    2: (("b", "r"),),
    3: (("l", "r"),),
    4: (("t", "r"),),
    6: (("b", "t"),),
    7: (("l", "t"),),
    8: (("l", "t"),),
    9: (("b", "t"),),
    11: (("t", "r"),),
    12: (("l", "r"),),
    13: (("b", "r"),),
    14: (("b", "l"),),
    15: (),
}


def _usable(v) -> bool:
    return v is not None and not math.isnan(v)


def _cross(level: float, c0: float, v0: float, c1: float, v1: float) -> float:
    """Coordinate where the value crosses level along one edge."""
    t = (level - v0) / (v1 - v0)
    return c0 + t * (c1 - c0)


def contour_segments(
    xs: list[float], ys: list[float], values: list[list[float | None]], level: float
) -> list[Segment]:
    """Segments of the `field == level` curve on the grid.

    `values[i][j]` is the field at (xs[j], ys[i]); both coordinate lists
    must be strictly increasing.  Cells touching a missing (None/NaN)
    corner are skipped.  Returns segments in row-major cell order; within
    a segment the endpoints follow the bottom/right/top/left edge order.
    """
    if len(ys) != len(values) or any(len(row) != len(xs) for row in values):
        raise ValueError("values must be a len(ys) x len(xs) grid")
    level = float(level)
    segments: list[Segment] = []
    for i in range(len(ys) - 1):
        y0, y1 = ys[i], ys[i + 1]
        for j in range(len(xs) - 1):
            x0, x1 = xs[j], xs[j + 1]
            bl, br = values[i][j], values[i][j + 1]
            tl, tr = values[i + 1][j], values[i + 1][j + 1]
            if not all(_usable(v) for v in (bl, br, tl, tr)):
                continue
            mask = (
                (bl >= level) * 1 + (br >= level) * 2 + (tr >= level) * 4 + (tl >= level) * 8
            )
            if mask in (5, 10):
                center_inside = (bl + br + tr + tl) / 4.0 >= level
                if mask == 5:
                    pairs = (("b", "r"), ("t", "l")) if center_inside else (("b", "l"), ("r", "t"))
                else:
                    pairs = (("b", "l"), ("r", "t")) if center_inside else (("b", "r"), ("t", "l"))
            else:
                pairs = _EDGE_PAIRS[mask]
            if not pairs:
                continue
            crossing = {
                "b": lambda: (_cross(level, x0, bl, x1, br), y0),
                "r": lambda: (x1, _cross(level, y0, br, y1, tr)),
                "t": lambda: (_cross(level, x0, tl, x1, tr), y1),
                "l": lambda: (x0, _cross(level, y0, bl, y1, tl)),
            }
            for e0, e1 in pairs:
                segments.append((crossing[e0](), crossing[e1]()))
    return segments
