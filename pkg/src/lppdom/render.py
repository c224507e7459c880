"""Static renderings: SVG (line/rect only, 16 px cells) and binary PPM."""
from __future__ import annotations

from typing import Optional, Sequence

from . import _kernels as K
from .errors import ConfigurationError
from .tree import build_forest, competition_coloring
from .weights import WeightField

CELL = 16
RGB = {K.NEUTRAL: (208, 208, 208), K.BLUE: (40, 80, 220), K.RED: (220, 50, 40)}


def _hex(rgb) -> str:
    return "#%02x%02x%02x" % rgb


def forest_svg(field: WeightField) -> str:
    """One line segment per parent edge; y = 0 at the bottom."""
    nx, ny = field.window.nx, field.window.ny
    w, h = (nx + 1) * CELL, (ny + 1) * CELL

    def px(z):
        return z[0] * CELL + CELL // 2, h - (z[1] * CELL + CELL // 2)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
           f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>']
    for parent, child in build_forest(field).edges():
        (x1, y1), (x2, y2) = px(parent), px(child)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#000000" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def coloring_svg(field: WeightField, a: Sequence[int]) -> str:
    codes = competition_coloring(build_forest(field), a).codes
    nx, ny = field.window.nx, field.window.ny
    w, h = (nx + 1) * CELL, (ny + 1) * CELL
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    for x in range(nx + 1):
        for y in range(ny + 1):
            out.append(f'<rect x="{x * CELL}" y="{h - (y + 1) * CELL}" width="{CELL}" height="{CELL}" '
                       f'fill="{_hex(RGB[int(codes[x, y])])}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def coloring_ppm(field: WeightField, a: Sequence[int]) -> bytes:
    """Binary P6, one pixel per site, row y = 0 at the bottom."""
    codes = competition_coloring(build_forest(field), a).codes
    nx, ny = field.window.nx, field.window.ny
    body = bytearray()
    for y in range(ny, -1, -1):
        for x in range(nx + 1):
            body.extend(RGB[int(codes[x, y])])
    return f"P6\n{nx + 1} {ny + 1}\n255\n".encode("ascii") + bytes(body)


def render_scene(field: WeightField, mode: str = "forest", fmt: str = "svg",
                 a: Optional[Sequence[int]] = (0, 0)) -> bytes:
    if field.window.n_sites == 0:
        raise ConfigurationError("empty window")
    if fmt not in ("svg", "ppm"):
        raise ConfigurationError(f"unsupported format {fmt!r}")
    if mode == "forest":
        if fmt != "svg":
            raise ConfigurationError("unsupported format 'ppm' for forest rendering; use svg")
        return forest_svg(field).encode()
    if mode == "coloring":
        return coloring_svg(field, a).encode() if fmt == "svg" else coloring_ppm(field, a)
    raise ConfigurationError(f"unknown render mode {mode!r}")
