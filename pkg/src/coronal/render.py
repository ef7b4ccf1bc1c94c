"""SVG figures of single coronas and of disc patches."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Optional

from .codes import CoronalCode, format_code
from .geometry import Packing, place_corona
from .realize import RealizerLike

SVG_NS = "http://www.w3.org/2000/svg"
TIGHT_TOL = 1e-8
PALETTE = [
    "#fde725", "#5ec962", "#21918c", "#3b528b", "#440154",
    "#f89540", "#cc4778", "#7e03a8", "#0d0887", "#b5de2b",
]
CLOSED = "#2ca02c"
OPEN = "#d62728"


def color(symbol: int) -> str:
    return PALETTE[symbol % len(PALETTE)]


@dataclass
class Circle:
    x: float
    y: float
    r: float
    symbol: int
    label: str = ""


@dataclass
class Scene:
    shapes: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    texts: list = field(default_factory=list)

    @property
    def viewbox(self) -> tuple[float, float, float, float]:
        if not self.shapes:
            return (0.0, 0.0, 1.0, 1.0)
        x0 = min(c.x - c.r for c in self.shapes)
        x1 = max(c.x + c.r for c in self.shapes)
        y0 = min(-c.y - c.r for c in self.shapes)
        y1 = max(-c.y + c.r for c in self.shapes)
        pad = 0.05 * max(x1 - x0, y1 - y0)
        return (x0 - pad, y0 - pad, x1 - x0 + 2 * pad, y1 - y0 + 2 * pad)

    def to_svg(self) -> str:
        vb = self.viewbox
        root = ET.Element("svg", {
            "xmlns": SVG_NS, "version": "1.1",
            "viewBox": " ".join(_fmt(v) for v in vb),
        })
        stroke = _fmt(vb[2] / 400)
        for c in self.shapes:
            el = ET.SubElement(root, "circle", {
                "cx": _fmt(c.x), "cy": _fmt(-c.y), "r": _fmt(c.r),
                "fill": color(c.symbol), "stroke": "#000000", "stroke-width": stroke,
                "class": f"s{c.symbol}",
            })
            if c.label:
                el.set("data-label", c.label)
        for (xa, ya), (xb, yb), col, cls in self.lines:
            ET.SubElement(root, "line", {
                "x1": _fmt(xa), "y1": _fmt(-ya), "x2": _fmt(xb), "y2": _fmt(-yb),
                "stroke": col, "stroke-width": _fmt(vb[2] / 100), "class": cls,
            })
        for (x, y), text in self.texts:
            el = ET.SubElement(root, "text", {
                "x": _fmt(x), "y": _fmt(-y), "font-size": _fmt(vb[2] / 40),
                "text-anchor": "middle",
            })
            el.text = text
        return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def corona_scene(x: CoronalCode, rho: RealizerLike) -> tuple[Scene, float]:
    discs, gap = place_corona(x, rho)
    scene = Scene([Circle(cx, cy, r, s) for cx, cy, r, s in discs])
    tight = abs(gap) < TIGHT_TOL
    first, last = discs[1], discs[-1]
    scene.lines.append(((last[0], last[1]), (first[0], first[1]),
                        CLOSED if tight else OPEN, "closure tight" if tight else "closure open"))
    scene.texts.append(((0.0, 0.0), format_code(x)))
    return scene, gap


def corona_svg(x: CoronalCode, rho: RealizerLike) -> str:
    return corona_scene(x, rho)[0].to_svg()


def packing_svg(p: Packing, annotate: Optional[dict] = None) -> str:
    """One circle per disc colored by label; ``annotate`` maps disc index to
    text drawn at its center (e.g. its code)."""
    scene = Scene([Circle(float(p.xy[i, 0]), float(p.xy[i, 1]), float(p.r[i]),
                          int(p.labels[i])) for i in range(len(p))])
    for i, text in (annotate or {}).items():
        scene.texts.append(((float(p.xy[i, 0]), float(p.xy[i, 1])), text))
    return scene.to_svg()


def closure_angle(x: CoronalCode, rho: RealizerLike) -> float:
    """Signed angular gap left after placing all petals (0 when tight)."""
    return place_corona(x, rho)[1]

