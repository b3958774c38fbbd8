"""Exact geometry on the pillowcase R^2 / ((2 pi Z)^2 x| {+-1}).

Coordinates are :class:`fractions.Fraction` multiples of pi, so ``Fraction(1, 14)``
stands for pi/14.  A segment is stored as a lift to R^2 (two endpoints plus
open/closed flags); all operations act on lifts and compare canonical forms.
Segments are assumed to embed in the pillowcase, which holds for every image
of a character-variety stratum (they are graphs over a meridian range inside
[0, pi]).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .presentations import GluingMatrix

Angle = Fraction
Vec = tuple[Fraction, Fraction]

TWO = Fraction(2)


def angle(value) -> Fraction:
    """Coerce ints, Fractions or ``"num/den"`` strings to an exact angle (units of pi)."""
    return value if isinstance(value, Fraction) else Fraction(value)


def angle_to_json(a: Fraction) -> dict:
    return {"num": a.numerator, "den": a.denominator}


def angle_from_json(data: dict) -> Fraction:
    return Fraction(int(data["num"]), int(data["den"]))


def format_angle(a: Fraction) -> str:
    if a == 0:
        return "0"
    num = "" if abs(a.numerator) == 1 else str(abs(a.numerator))
    sign = "-" if a < 0 else ""
    den = "" if a.denominator == 1 else f"/{a.denominator}"
    return f"{sign}{num}pi{den}"


@dataclass(frozen=True, order=True)
class PillowPoint:
    """A point of the pillowcase in canonical form.

    x in [0, 1]; y in [0, 2); on the edges x = 0 and x = 1 also y in [0, 1].
    """

    x: Fraction
    y: Fraction

    @property
    def is_corner(self) -> bool:
        return self.x in (0, 1) and self.y in (0, 1)

    def to_json(self) -> dict:
        return {"x": angle_to_json(self.x), "y": angle_to_json(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> PillowPoint:
        return canonicalize(angle_from_json(data["x"]), angle_from_json(data["y"]))

    def as_radians(self) -> tuple[float, float]:
        return float(self.x) * math.pi, float(self.y) * math.pi

    def __str__(self):
        return f"({format_angle(self.x)}, {format_angle(self.y)})"


def canonicalize(x, y) -> PillowPoint:
    x, y = angle(x) % TWO, angle(y) % TWO
    if x > 1:
        x, y = TWO - x, (TWO - y) % TWO
    if x in (0, 1) and y > 1:
        y = TWO - y
    return PillowPoint(x, y)


def equivalent(p, q) -> bool:
    if not isinstance(p, PillowPoint):
        p = canonicalize(*p)
    if not isinstance(q, PillowPoint):
        q = canonicalize(*q)
    return canonicalize(p.x, p.y) == canonicalize(q.x, q.y)


def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def _cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


@dataclass(frozen=True)
class PillowSegment:
    """Image of the lifted segment ``start -> end`` (parameter t in [0, 1])."""

    start: Vec
    end: Vec
    start_open: bool = False
    end_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "start", (angle(self.start[0]), angle(self.start[1])))
        object.__setattr__(self, "end", (angle(self.end[0]), angle(self.end[1])))

    @classmethod
    def on_line(cls, slope, intercept, x0, x1, open_ends=(True, True)) -> PillowSegment:
        """Lift ``y = slope * x + intercept`` over ``x0 <= x <= x1``."""
        slope, intercept, x0, x1 = map(angle, (slope, intercept, x0, x1))
        return cls((x0, slope * x0 + intercept), (x1, slope * x1 + intercept), *open_ends)

    @property
    def direction(self) -> Vec:
        return _sub(self.end, self.start)

    @property
    def is_degenerate(self) -> bool:
        return self.start == self.end

    @property
    def is_vertical(self) -> bool:
        return self.direction[0] == 0 and not self.is_degenerate

    @property
    def slope(self) -> Optional[Fraction]:
        """Rational slope, or ``None`` for vertical (and degenerate) segments."""
        dx, dy = self.direction
        return None if dx == 0 else dy / dx

    def point_at(self, t) -> Vec:
        t = angle(t)
        d = self.direction
        return (self.start[0] + t * d[0], self.start[1] + t * d[1])

    def canonical_at(self, t) -> PillowPoint:
        return canonicalize(*self.point_at(t))

    def sub(self, t0, t1, open0: bool, open1: bool) -> PillowSegment:
        return PillowSegment(self.point_at(t0), self.point_at(t1), open0, open1)

    def transformed(self, sign: int, shift: Vec) -> PillowSegment:
        def f(p):
            return (sign * p[0] + shift[0], sign * p[1] + shift[1])
        return PillowSegment(f(self.start), f(self.end), self.start_open, self.end_open)

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        (x0, y0), (x1, y1) = self.start, self.end
        return min(x0, x1), max(x0, x1), min(y0, y1), max(y0, y1)

    def param_allowed(self, t: Fraction) -> bool:
        if t < 0 or t > 1:
            return False
        if t == 0 and self.start_open:
            return False
        if t == 1 and self.end_open:
            return False
        return True

    def param_of(self, p: Vec) -> Optional[Fraction]:
        """Parameter of a lifted point on this lift's line, or ``None`` if off the line."""
        d = self.direction
        rel = _sub(p, self.start)
        if self.is_degenerate:
            return Fraction(0) if rel == (0, 0) else None
        if _cross(rel, d) != 0:
            return None
        return _dot(rel, d) / _dot(d, d)

    def endpoints(self) -> tuple[PillowPoint, PillowPoint]:
        return canonicalize(*self.start), canonicalize(*self.end)

    def to_json(self) -> dict:
        s = self.slope
        return {
            "start": [angle_to_json(c) for c in self.start],
            "end": [angle_to_json(c) for c in self.end],
            "start_open": self.start_open,
            "end_open": self.end_open,
            "slope": "vertical" if s is None else {"num": s.numerator, "den": s.denominator},
        }

    @classmethod
    def from_json(cls, data: dict) -> PillowSegment:
        return cls(tuple(angle_from_json(c) for c in data["start"]),
                   tuple(angle_from_json(c) for c in data["end"]),
                   bool(data["start_open"]), bool(data["end_open"]))

    def __str__(self):
        a = "(" if self.start_open else "["
        b = ")" if self.end_open else "]"
        (x0, y0), (x1, y1) = self.start, self.end
        return (f"{a}({format_angle(x0)}, {format_angle(y0)}) -> "
                f"({format_angle(x1)}, {format_angle(y1)}){b}")


Locus = Union[PillowPoint, PillowSegment]


def apply_gluing(h: GluingMatrix, obj):
    """Push a point or segment through the linear map of ``h``."""
    if isinstance(obj, PillowSegment):
        return PillowSegment(h.apply(*obj.start), h.apply(*obj.end), obj.start_open, obj.end_open)
    if isinstance(obj, PillowPoint):
        return canonicalize(*h.apply(obj.x, obj.y))
    return canonicalize(*h.apply(angle(obj[0]), angle(obj[1])))


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def deck_images(seg: PillowSegment, box) -> Iterator[tuple[int, Vec, PillowSegment]]:
    """All lifts ``sign * seg + 2 * (i, j)`` whose bounding box meets ``box``.

    The enumeration is exact: translate ranges are read off the two bounding
    boxes, so no image meeting ``box`` is skipped.
    """
    bx0, bx1, by0, by1 = box
    for sign in (1, -1):
        base = seg.transformed(sign, (Fraction(0), Fraction(0)))
        ax0, ax1, ay0, ay1 = base.bbox()
        for i in range(_ceil((bx0 - ax1) / 2), _floor((bx1 - ax0) / 2) + 1):
            for j in range(_ceil((by0 - ay1) / 2), _floor((by1 - ay0) / 2) + 1):
                shift = (Fraction(2 * i), Fraction(2 * j))
                yield sign, shift, base.transformed(1, shift)


@dataclass(frozen=True)
class Hit:
    """One piece of ``s1 ∩ s2``: parameter ranges on both original lifts."""

    t: tuple[Fraction, Fraction]
    u: tuple[Fraction, Fraction]
    open: tuple[bool, bool] = (False, False)

    @property
    def is_point(self) -> bool:
        return self.t[0] == self.t[1]


def _lift_hits(s1: PillowSegment, s2: PillowSegment) -> list[Hit]:
    """Intersection of two lifts in R^2; ``u`` is the parameter on ``s2``."""
    d1, d2 = s1.direction, s2.direction
    if s1.is_degenerate:
        u = s2.param_of(s1.start)
        if u is not None and s2.param_allowed(u) and s1.param_allowed(Fraction(0)):
            return [Hit((Fraction(0),) * 2, (u, u))]
        return []
    if s2.is_degenerate:
        t = s1.param_of(s2.start)
        if t is not None and s1.param_allowed(t) and s2.param_allowed(Fraction(0)):
            return [Hit((t, t), (Fraction(0),) * 2)]
        return []
    denom = _cross(d1, d2)
    ca = _sub(s2.start, s1.start)
    if denom != 0:
        t = _cross(ca, d2) / denom
        u = _cross(ca, d1) / denom
        if s1.param_allowed(t) and s2.param_allowed(u):
            return [Hit((t, t), (u, u))]
        return []
    if _cross(ca, d1) != 0:
        return []
    # collinear: overlap of parameter intervals measured along s1
    tc, td = s1.param_of(s2.start), s1.param_of(s2.end)
    lo_cands = [(Fraction(0), s1.start_open)]
    hi_cands = [(Fraction(1), s1.end_open)]
    if tc <= td:
        lo_cands.append((tc, s2.start_open))
        hi_cands.append((td, s2.end_open))
    else:
        lo_cands.append((td, s2.end_open))
        hi_cands.append((tc, s2.start_open))
    lo = max(v for v, _ in lo_cands)
    hi = min(v for v, _ in hi_cands)
    lo_open = any(o for v, o in lo_cands if v == lo)
    hi_open = any(o for v, o in hi_cands if v == hi)
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return []

    def u_of(t):
        return s2.param_of(s1.point_at(t))

    return [Hit((lo, hi), (u_of(lo), u_of(hi)), (lo_open, hi_open))]


def intersect_params(s1: PillowSegment, s2: PillowSegment) -> list[Hit]:
    """Pillowcase intersection of two segments, as parameter ranges on both lifts.

    Parameters ``u`` refer to the original lift of ``s2``; deck transformations
    are undone (they act affinely and preserve the parameter).
    """
    hits: list[Hit] = []
    for _, _, img in deck_images(s2, s1.bbox()):
        hits.extend(_lift_hits(s1, img))
    segments = []
    for h in hits:
        if not h.is_point and all(h.t != g.t for g in segments):
            segments.append(h)
    points: dict[PillowPoint, Hit] = {}
    for h in hits:
        if not h.is_point:
            continue
        t = h.t[0]
        inside = any(
            (g.t[0] < t < g.t[1]) or (t == g.t[0] and not g.open[0]) or (t == g.t[1] and not g.open[1])
            for g in segments)
        if not inside:
            points.setdefault(s1.canonical_at(t), h)
    return sorted(points.values(), key=lambda h: h.t) + sorted(segments, key=lambda h: h.t)


def intersect(s1: PillowSegment, s2: PillowSegment) -> list[Locus]:
    out: list[Locus] = []
    for h in intersect_params(s1, s2):
        if h.is_point:
            out.append(s1.canonical_at(h.t[0]))
        else:
            out.append(s1.sub(h.t[0], h.t[1], *h.open))
    return out


def contains(seg: PillowSegment, p) -> bool:
    """Exact membership of a pillowcase point in a segment's image."""
    if isinstance(p, PillowPoint):
        p = (p.x, p.y)
    pt = PillowSegment(p, p)
    return bool(intersect_params(seg, pt))
