"""SVG pictures of boundary images near the trivial character."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .arcs import Stratum
from .pillowcase import PillowSegment, apply_gluing, deck_images, format_angle
from .presentations import PLUS_ONE_GLUING, GluingMatrix

Box = tuple[Fraction, Fraction, Fraction, Fraction]
DEFAULT_WINDOW: Box = (Fraction(0), Fraction(1, 7), Fraction(-2, 7), Fraction(1, 7))

STYLES = {
    "abelian": "stroke:#1f4e9c;stroke-width:2.5",
    "irreducible": "stroke:#c0392b;stroke-width:2",
    "glued": "stroke:#27ae60;stroke-width:2;stroke-dasharray:6 3",
}


@dataclass(frozen=True)
class Layer:
    segments: tuple[PillowSegment, ...]
    style: str
    label: str


@dataclass
class FigureSpec:
    title: str
    window: Box = DEFAULT_WINDOW
    layers: list[Layer] = field(default_factory=list)
    annotations: list[tuple[tuple[Fraction, Fraction], str]] = field(default_factory=list)


def clip(seg: PillowSegment, box: Box) -> Optional[tuple[tuple, tuple]]:
    """Exact Liang-Barsky clip of one lift to ``box``."""
    x0, x1, y0, y1 = box
    (sx, sy), (dx, dy) = seg.start, seg.direction
    lo, hi = Fraction(0), Fraction(1)
    for p, q in ((-dx, sx - x0), (dx, x1 - sx), (-dy, sy - y0), (dy, y1 - sy)):
        if p == 0:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            lo = max(lo, r)
        else:
            hi = min(hi, r)
    if lo > hi:
        return None
    return seg.point_at(lo), seg.point_at(hi)


def visible_pieces(seg: PillowSegment, box: Box) -> list[tuple[tuple, tuple]]:
    """All lifts of a pillowcase segment inside ``box``, clipped."""
    out = []
    for _, _, img in deck_images(seg, box):
        piece = clip(img, box)
        if piece is not None and piece not in out:
            out.append(piece)
    return out


def strata_layers(strata: Sequence[Stratum], h: Optional[GluingMatrix] = None,
                  name: str = "") -> list[Layer]:
    ab, irr = [], []
    for s in strata:
        img = s.image if h is None else apply_gluing(h, s.image)
        (ab if s.is_abelian else irr).append(img)
    if h is not None:
        return [Layer(tuple(ab + irr), "glued", f"h-image of {name}")]
    return [Layer(tuple(ab), "abelian", f"{name} abelian"),
            Layer(tuple(irr), "irreducible", f"{name} irreducible")]


def render_svg(spec: FigureSpec, size: int = 480, margin: int = 40) -> str:
    x0, x1, y0, y1 = spec.window
    sx = (size - 2 * margin) / float(x1 - x0)
    sy = (size - 2 * margin) / float(y1 - y0)

    def px(p):
        return (margin + float(p[0] - x0) * sx, size - margin - float(p[1] - y0) * sy)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<title>{escape(spec.title)}</title>',
             f'<rect x="{margin}" y="{margin}" width="{size - 2 * margin}" '
             f'height="{size - 2 * margin}" style="fill:none;stroke:#999"/>']
    if x0 <= 0 <= x1 and y0 <= 0 <= y1:
        (ax, ay), (bx, by) = px((x0, 0)), px((x1, 0))
        lines.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" style="stroke:#ddd"/>')
    for layer in spec.layers:
        lines.append(f'<g class="{layer.style}" style="fill:none;{STYLES[layer.style]}">'
                     f'<desc>{escape(layer.label)}</desc>')
        for seg in layer.segments:
            for a, b in visible_pieces(seg, spec.window):
                (ax, ay), (bx, by) = px(a), px(b)
                lines.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}"/>')
        lines.append("</g>")
    for point, text in spec.annotations:
        cx, cy = px(point)
        lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" style="fill:black"/>')
        lines.append(f'<text x="{cx + 6:.2f}" y="{cy - 6:.2f}" font-size="12">{escape(text)}</text>')
    for value, anchor in ((x0, "start"), (x1, "end")):
        lines.append(f'<text x="{px((value, y0))[0]:.2f}" y="{size - margin + 16}" '
                     f'font-size="11" text-anchor="{anchor}">x={escape(format_angle(value))}</text>')
    lines.append(f'<text x="{size / 2:.0f}" y="20" font-size="13" text-anchor="middle">'
                 f'{escape(spec.title)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def lift_into(p, box: Box) -> Optional[tuple[Fraction, Fraction]]:
    """A lift of the pillowcase point ``p`` lying in ``box``, if any."""
    seg = PillowSegment(p, p)
    for _, _, img in deck_images(seg, box):
        (x, y) = img.start
        if box[0] <= x <= box[1] and box[2] <= y <= box[3]:
            return x, y
    return None


def _label(p) -> str:
    return f"({format_angle(p[0])}, {format_angle(p[1])})"


def standard_figures() -> dict[str, FigureSpec]:
    """The five local pictures: X, Y, their overlay, Z, and the Z overlay."""
    from .splice import Piece

    x, y, z = Piece.parse("3,5"), Piece.parse("2,7"), Piece.parse("-2,7,-2,7")
    xs, ys, zs = x.strata(), y.strata(), z.strata()
    theta = ((Fraction(0), Fraction(0)), "theta")
    point = ((Fraction(1, 14), Fraction(-1, 14)), _label((Fraction(1, 14), Fraction(-1, 14))))
    return {
        "fig1": FigureSpec(f"image of {x.label}", layers=strata_layers(xs, name=x.label),
                           annotations=[theta]),
        "fig2": FigureSpec(f"image of {y.label}", layers=strata_layers(ys, name=y.label),
                           annotations=[theta]),
        "fig3": FigureSpec(f"{x.label} and h-image of {y.label}",
                           layers=strata_layers(xs, name=x.label)
                           + strata_layers(ys, PLUS_ONE_GLUING, y.label),
                           annotations=[theta, point]),
        "fig4": FigureSpec(f"image of {z.label}", window=(Fraction(0), Fraction(1, 7),
                                                           Fraction(-1, 7), Fraction(2, 7)),
                           layers=strata_layers(zs, name=z.label), annotations=[theta]),
        "fig5": FigureSpec(f"{x.label} and h-image of {z.label}",
                           layers=strata_layers(xs, name=x.label)
                           + strata_layers(zs, PLUS_ONE_GLUING, z.label),
                           annotations=[theta, point]),
    }


def overlay_figure(left_strata, right_strata, h: GluingMatrix, loci=(), title: str = "",
                   window: Box = DEFAULT_WINDOW) -> FigureSpec:
    """Both image sets with intersection points marked."""
    notes = []
    for l in loci:
        if l.is_point:
            lift = lift_into((l.locus.x, l.locus.y), window)
            if lift is not None:
                notes.append((lift, ""))
    return FigureSpec(title, window,
                      strata_layers(left_strata, name="left")
                      + strata_layers(right_strata, h, "right"),
                      notes)
