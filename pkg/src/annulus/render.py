"""Deterministic SVG pictures of curves and rigged annuli.

Annuli are drawn as their two boundary curves, with the region between
them shaded using the even-odd fill rule. If the curves coincide (a welding
pair), only the shared curve is drawn, highlighted as a seam. A bare
``curve`` object is also drawn as a seam. Coordinates are printed with a
fixed precision and the output has no timestamps, so the same input always
produces the same bytes.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .complexfn import DiskMap, ExteriorMap, circle_points
from .errors import InvalidInput
from .jsonio import decode
from .riemann import JordanCurve
from .semigroup import RiggedAnnulus, classify


@dataclass(frozen=True)
class Style:
    width: int = 480
    height: int = 480
    samples: int = 512
    margin: float = 0.08
    stroke_width: float = 1.5
    inner_color: str = "#1f5fa8"
    outer_color: str = "#b8401f"
    seam_color: str = "#2a9d3f"
    fill_color: str = "#e9c46a"
    fill_opacity: float = 0.45
    background: str = "#ffffff"


def _is_seam(x: RiggedAnnulus) -> bool:
    flags = x.flags or classify(x)
    return "G" in flags


def _layers(obj, style: Style):
    """(kind, points) pairs: kind is 'fill', 'inner', 'outer' or 'seam'."""
    z = circle_points(style.samples)
    if isinstance(obj, RiggedAnnulus):
        inner, outer = obj.f(z), obj.g(z)
        if _is_seam(obj):
            return [("seam", inner)]
        return [("fill", (inner, outer)), ("inner", inner), ("outer", outer)]
    if isinstance(obj, JordanCurve):
        return [("seam", obj.points)]
    if isinstance(obj, DiskMap):
        return [("inner", obj(z))]
    if isinstance(obj, ExteriorMap):
        return [("outer", obj(z))]
    raise InvalidInput(f"cannot render object of type {type(obj).__name__}")


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(objects, style: Style | None = None, paths=None) -> str:
    """SVG document for decoded objects or raw JSON dicts.

    ``paths`` names each input for error messages (defaults to ``$[i]``).
    """
    style = style or Style()
    paths = list(paths) if paths is not None else [f"$[{i}]" for i in range(len(objects))]
    layers = []
    for obj, path in zip(objects, paths):
        if isinstance(obj, dict):
            obj = decode(obj, path=path)
        try:
            layers.extend(_layers(obj, style))
        except InvalidInput as exc:
            raise InvalidInput(str(exc), path) from None
    if not layers:
        raise InvalidInput("nothing to render", "$")

    pts = np.concatenate([np.concatenate(p) if kind == "fill" else p for kind, p in layers])
    lo = complex(pts.real.min(), pts.imag.min())
    hi = complex(pts.real.max(), pts.imag.max())
    span = max(hi.real - lo.real, hi.imag - lo.imag, 1e-9)
    scale = (1 - 2 * style.margin) * min(style.width, style.height) / span
    centre = (lo + hi) / 2

    def xy(p):
        x = style.width / 2 + (p.real - centre.real) * scale
        y = style.height / 2 - (p.imag - centre.imag) * scale
        return x, y

    def ring(p):
        x, y = xy(p)
        body = " L".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y))
        return f"M{body} Z"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
        f'<rect width="100%" height="100%" fill="{escape(style.background)}"/>',
    ]
    colors = {"inner": style.inner_color, "outer": style.outer_color, "seam": style.seam_color}
    for kind, p in layers:
        if kind == "fill":
            out.append(f'<path class="annulus" d="{ring(p[0])} {ring(p[1])}" fill="{escape(style.fill_color)}" '
                       f'fill-opacity="{_fmt(style.fill_opacity)}" fill-rule="evenodd" stroke="none"/>')
    for kind, p in layers:
        if kind == "fill":
            continue
        width = style.stroke_width * (2 if kind == "seam" else 1)
        dash = ' stroke-dasharray="6 3"' if kind == "seam" else ""
        out.append(f'<path class="{kind}" d="{ring(p)}" fill="none" stroke="{escape(colors[kind])}" '
                   f'stroke-width="{_fmt(width)}"{dash}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
