"""Strata of SU(2) character varieties of torus-knot exteriors and their sums.

Irreducible representations of ``<u, v | u^p = v^q>`` send ``u`` to
``e^{alpha I}`` and ``v`` to ``e^{beta J}`` with ``alpha = pi a / |p|``,
``beta = pi b / q`` and ``a = b (mod 2)``; the angle ``t`` between the axes
``I`` and ``J`` runs over (0, pi) and sweeps out one open arc per ``(a, b)``.
The arcs' exact boundary images are obtained from a numeric trace of these
families, snapped onto the rational grid and re-verified.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .pillowcase import PillowPoint, PillowSegment, angle_to_json, canonicalize
from .presentations import (Presentation, connected_sum, meridian_exponents,
                            torus_knot_presentation, unknot_presentation)
from .su2 import (GroupElement, StabilizerType, conjugate, evaluate_word, exp_axis,
                  rotation_taking)

FIT_TOL = 1e-6
HOLONOMY_TOL = 1e-9

I_AXIS = np.array([1.0, 0.0, 0.0])

Summand = tuple[int, int]


class StrataError(RuntimeError):
    """Oracle output does not fit the exact model."""


class Kind(enum.Enum):
    ABELIAN = "Abelian"
    IRREDUCIBLE = "IrreducibleArc"
    HALF_ABELIAN = "HalfAbelian"
    GLUED = "GluedFamily"


def _normalize(p: int, q: int) -> Summand:
    return (-p, -q) if q < 0 else (p, q)


def valid_arc_labels(p: int, q: int) -> list[tuple[int, int]]:
    p, q = _normalize(p, q)
    return [(a, b) for a in range(1, abs(p)) for b in range(1, q) if (a - b) % 2 == 0]


def _generator_images(p: int, q: int, a: int, b: int, t: float) -> list[GroupElement]:
    alpha = math.pi * a / abs(p)
    beta = math.pi * b / q
    return [exp_axis(I_AXIS, alpha), exp_axis((math.cos(t), math.sin(t), 0.0), beta)]


def _holonomy(pres: Presentation, rep) -> tuple[float, float]:
    """Meridian angle in [0, pi] and longitude angle in [0, 2 pi) about the meridian axis."""
    mu = evaluate_word(pres.meridian, rep)
    lam = evaluate_word(pres.longitude, rep)
    x, axis = mu.polar()
    y = math.atan2(float(np.dot(lam.imag, axis)), lam.w) % (2 * math.pi)
    return x, y


def trace_arc_numeric(p: int, q: int, a: int, b: int, samples: int) -> list[tuple[float, float]]:
    """Sample the ``(a, b)`` family at ``samples`` evenly spaced axis angles in [0, pi].

    The two end samples are the abelian limits of the arc.  Returns pairs
    ``(meridian angle, longitude angle)`` in radians, canonical for x in (0, pi).
    """
    p, q = _normalize(p, q)
    if math.gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    if not (1 <= a <= abs(p) - 1 and 1 <= b <= q - 1):
        raise ValueError(f"arc label ({a}, {b}) out of range for T({p},{q})")
    if (a - b) % 2:
        raise ValueError(f"arc label ({a}, {b}) violates u^p = v^q = +-1 parity")
    if samples < 2:
        raise ValueError("need at least two samples")
    pres = torus_knot_presentation(p, q)
    out = []
    for t in np.linspace(0.0, math.pi, samples):
        rep = _generator_images(p, q, a, b, float(t))
        r = evaluate_word(pres.relators[0], rep)
        if r.distance(GroupElement.identity()) > 1e-9:
            raise StrataError(f"relator fails at t={t}")
        out.append(_holonomy(pres, rep))
    return out


@dataclass(frozen=True)
class ArcData:
    """Exact data of one irreducible arc of T(p, q).

    Boundary image: ``y = -p q x + intercept`` over the open range ``(x0, x1)``.
    """

    p: int
    q: int
    a: int
    b: int
    x0: Fraction
    x1: Fraction
    intercept: Fraction

    @property
    def label(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def slope(self) -> int:
        return -self.p * self.q


def _snap(value: float, den: int) -> Fraction:
    return Fraction(round(value * den), den)


def _fit_arc(p: int, q: int, a: int, b: int, samples: int) -> ArcData:
    pts = trace_arc_numeric(p, q, a, b, samples)
    grid = abs(p) * q
    raw0, raw1 = pts[0][0] / math.pi, pts[-1][0] / math.pi
    lo, hi = sorted((raw0, raw1))
    x0, x1 = _snap(lo, grid), _snap(hi, grid)
    if abs(float(x0) - lo) > FIT_TOL or abs(float(x1) - hi) > FIT_TOL:
        raise StrataError(f"T({p},{q}) arc {(a, b)}: endpoints off the pi/{grid} grid")
    slope = -p * q
    # intercept of y = slope * x + c, taken mod 2
    cs = [((y / math.pi) - slope * (x / math.pi)) % 2.0 for x, y in pts]
    c = Fraction(round(cs[len(cs) // 2])) % 2
    for x, y in pts:
        resid = ((y / math.pi) - slope * (x / math.pi) - float(c) + 1.0) % 2.0 - 1.0
        if abs(resid) > FIT_TOL:
            raise StrataError(f"T({p},{q}) arc {(a, b)}: residual {resid:.2e} off the line")
    return ArcData(p, q, a, b, x0, x1, c)


@lru_cache(maxsize=None)
def knot_arcs(p: int, q: int, samples: Optional[int] = None) -> tuple[ArcData, ...]:
    p, q = _normalize(p, q)
    samples = samples or 64 * abs(p * q)
    return tuple(_fit_arc(p, q, a, b, samples) for a, b in valid_arc_labels(p, q))


def distinguished_arc(p: int, q: int) -> ArcData:
    """The arc leaving the abelian arc closest to the trivial character."""
    return min(knot_arcs(p, q), key=lambda arc: arc.x0)


@dataclass(frozen=True)
class Stratum:
    """Family of characters of a (possibly composite) knot exterior.

    ``arcs[i]`` is ``None`` when summand ``i`` is abelian.  Interior points
    carry a torus ``T^fiber_dim`` of internal gluing parameters.
    """

    summands: tuple[Summand, ...]
    arcs: tuple[Optional[ArcData], ...]
    x_range: tuple[Fraction, Fraction]
    intercept: Fraction
    limits: tuple[tuple[Fraction, tuple], ...] = field(default=())

    @property
    def key(self) -> tuple:
        return tuple(None if arc is None else arc.label for arc in self.arcs)

    @property
    def n_irreducible(self) -> int:
        return sum(arc is not None for arc in self.arcs)

    @property
    def kind(self) -> Kind:
        k = self.n_irreducible
        if k == 0:
            return Kind.ABELIAN
        if len(self.summands) == 1:
            return Kind.IRREDUCIBLE
        return Kind.HALF_ABELIAN if k == 1 else Kind.GLUED

    @property
    def is_abelian(self) -> bool:
        return self.n_irreducible == 0

    @property
    def fiber_dim(self) -> int:
        return max(self.n_irreducible - 1, 0)

    @property
    def dimension(self) -> int:
        return 1 + self.fiber_dim

    @property
    def stabilizer(self) -> StabilizerType:
        return StabilizerType.CIRCLE if self.is_abelian else StabilizerType.CENTER

    @property
    def slope(self) -> int:
        return sum(arc.slope for arc in self.arcs if arc is not None)

    @property
    def image(self) -> PillowSegment:
        x0, x1 = self.x_range
        closed = self.is_abelian
        return PillowSegment.on_line(self.slope, self.intercept, x0, x1, (not closed, not closed))

    @property
    def label(self) -> str:
        names = []
        for (p, q), arc in zip(self.summands, self.arcs):
            names.append(f"T({p},{q})" + ("ab" if arc is None else f"[{arc.a},{arc.b}]"))
        return "#".join(names) if names else "U ab"

    def point(self, x) -> PillowPoint:
        x = Fraction(x)
        return canonicalize(x, self.slope * x + self.intercept)

    def contains_x(self, x) -> bool:
        x0, x1 = self.x_range
        return x0 <= x <= x1 if self.is_abelian else x0 < x < x1

    def limit_key(self, x) -> tuple:
        """Stratum key of the character at meridian angle ``x`` of the closure."""
        for lx, key in self.limits:
            if lx == x:
                return key
        return self.key

    def stabilizer_at(self, x) -> StabilizerType:
        if any(k is not None for k in self.limit_key(x)):
            return StabilizerType.CENTER
        return StabilizerType.FULL if x in (0, 1) else StabilizerType.CIRCLE

    def fiber_dim_at(self, x) -> int:
        return max(sum(k is not None for k in self.limit_key(x)) - 1, 0)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "label": self.label,
            "summands": [list(s) for s in self.summands],
            "arcs": [None if a is None else [a.a, a.b] for a in self.arcs],
            "x_range": [angle_to_json(v) for v in self.x_range],
            "slope": self.slope,
            "intercept": angle_to_json(self.intercept),
            "image": self.image.to_json(),
            "stabilizer": self.stabilizer.value,
            "dimension": self.dimension,
            "torus_fiber_dim": self.fiber_dim,
            "adjacency": [
                {"x": angle_to_json(x), "point": self.point(x).to_json(),
                 "limit": [None if k is None else list(k) for k in key]}
                for x, key in self.limits],
        }


def _abelian_stratum(summands: tuple[Summand, ...]) -> Stratum:
    return Stratum(summands, (None,) * len(summands), (Fraction(0), Fraction(1)), Fraction(0))


def _combine(summands, arcs) -> Optional[Stratum]:
    irr = [arc for arc in arcs if arc is not None]
    if not irr:
        return _abelian_stratum(summands)
    x0 = max(arc.x0 for arc in irr)
    x1 = min(arc.x1 for arc in irr)
    if x0 >= x1:
        return None
    intercept = sum((arc.intercept for arc in irr), Fraction(0)) % 2
    limits = []
    for end in (x0, x1):
        key = tuple(None if arc is None or end in (arc.x0, arc.x1) else arc.label for arc in arcs)
        limits.append((end, key))
    return Stratum(tuple(summands), tuple(arcs), (x0, x1), intercept, tuple(limits))


def composite_strata(summands: Sequence[Summand], selection=None,
                     samples: Optional[int] = None) -> list[Stratum]:
    """Strata of the exterior of the connected sum of torus knots ``summands``.

    ``selection`` optionally restricts the arcs used per summand: a sequence
    (one entry per summand) of iterables of ``(a, b)`` labels, or ``None``.
    Strata with empty meridian range are omitted.
    """
    summands = tuple(_normalize(p, q) for p, q in summands)
    if not summands:
        return [_abelian_stratum(())]
    options = []
    for i, (p, q) in enumerate(summands):
        arcs = knot_arcs(p, q, samples)
        if selection is not None and selection[i] is not None:
            allowed = set(map(tuple, selection[i]))
            arcs = tuple(arc for arc in arcs if arc.label in allowed)
        options.append((None,) + arcs)
    strata = []
    for combo in itertools.product(*options):
        s = _combine(summands, combo)
        if s is not None:
            strata.append(s)
    return strata


def knot_strata(p: int, q: int, samples: Optional[int] = None) -> list[Stratum]:
    return composite_strata([(p, q)], samples=samples)


def distinguished_selection(summands: Sequence[Summand]):
    return [[distinguished_arc(p, q).label] for p, q in summands]


@lru_cache(maxsize=None)
def exterior_presentation(summands: tuple[Summand, ...]) -> Presentation:
    """Unknot for no summands, torus knot for one, left-nested sums otherwise."""
    if not summands:
        return unknot_presentation()
    pres = torus_knot_presentation(*summands[0])
    for p, q in summands[1:]:
        pres = connected_sum(pres, torus_knot_presentation(p, q))
    return pres


def _summand_rep(p: int, q: int, arc: Optional[ArcData], x: Fraction) -> list[GroupElement]:
    """Representation of T(p, q) with ``mu -> e^{x pi I}`` exactly along the I axis."""
    theta = float(x) * math.pi
    if arc is None:
        return [exp_axis(I_AXIS, q * theta), exp_axis(I_AXIS, p * theta)]
    m, n = meridian_exponents(p, q)
    alpha = math.pi * arc.a / abs(p)
    beta = math.pi * arc.b / q
    cos_t = ((math.cos(m * alpha) * math.cos(n * beta) - math.cos(theta))
             / (math.sin(m * alpha) * math.sin(n * beta)))
    t = math.acos(max(-1.0, min(1.0, cos_t)))
    rep = _generator_images(p, q, arc.a, arc.b, t)
    mu = evaluate_word(torus_knot_presentation(p, q).meridian, rep)
    _, axis = mu.polar()
    g = rotation_taking(axis, I_AXIS)
    return [conjugate(g, r) for r in rep]


@dataclass(frozen=True)
class ArcPoint:
    stratum: Stratum
    x: Fraction
    fiber: tuple[float, ...]
    representation: tuple[GroupElement, ...]

    @property
    def presentation(self) -> Presentation:
        return exterior_presentation(self.stratum.summands)

    def boundary_holonomy(self) -> tuple[float, float]:
        pres = self.presentation
        mu = evaluate_word(pres.meridian, self.representation)
        lam = evaluate_word(pres.longitude, self.representation)
        return mu.polar()[0], math.atan2(lam.x, lam.w) % (2 * math.pi)


def rep_at(stratum: Stratum, x, fiber: Sequence[float] = ()) -> ArcPoint:
    """Concrete representation at meridian angle ``x`` (units of pi).

    ``mu`` is sent to ``e^{x pi i}``.  At an endpoint of an open stratum the
    limiting representation is returned.  ``fiber`` gives the internal gluing
    angles of the irreducible summands after the first one.
    """
    x = Fraction(x)
    x0, x1 = stratum.x_range
    if not x0 <= x <= x1:
        raise ValueError(f"x = {x} outside the range [{x0}, {x1}] of {stratum.label}")
    limit = stratum.limit_key(x)
    fdim = max(sum(k is not None for k in limit) - 1, 0)
    fiber = tuple(fiber) + (0.0,) * (fdim - len(fiber))
    reps: list[GroupElement] = []
    seen_irreducible = 0
    for (p, q), arc, k in zip(stratum.summands, stratum.arcs, limit):
        rep = _summand_rep(p, q, arc if k is not None else None, x)
        if k is not None:
            if seen_irreducible:
                g = exp_axis(I_AXIS, fiber[seen_irreducible - 1])
                rep = [conjugate(g, r) for r in rep]
            seen_irreducible += 1
        reps.extend(rep)
    if not stratum.summands:
        reps = [exp_axis(I_AXIS, float(x) * math.pi)]
    return ArcPoint(stratum, x, fiber[:fdim], tuple(reps))
