"""Character varieties of spliced exteriors as fiber products over the pillowcase.

A character of ``X u_h Y`` restricts to a pair of characters whose boundary
images agree after ``h``; over such a pair the remaining freedom is the
double coset ``Stab(rho_X) \\ Stab(rho_boundary) / Stab(rho_Y)``.  The loci
computed here are exact pieces of that fiber product; components are glued
together from them by matching limit points.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arcs import Stratum, composite_strata, exterior_presentation, rep_at
from .cohomology import MayerVietoris, h1_dim, mayer_vietoris
from .pillowcase import (PillowPoint, PillowSegment, angle_to_json, apply_gluing,
                         intersect_params)
from .presentations import (GluingMatrix, Presentation, RelatorError, check_relators,
                            glued_peripheral_words, splice)
from .su2 import (GroupElement, StabilizerType, conjugate, evaluate_word, exp_axis,
                  rotation_taking)

GLUE_SAMPLES = (0.3, 1.3, 2.3)
NUMBER_WORDS = {2: "two", 3: "three", 4: "four", 5: "five", 6: "six"}


class ZariskiMismatch(RuntimeError):
    """Direct and Mayer-Vietoris computations of H^1 disagree."""


# --- pieces ---------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    """Exterior of a connected sum of torus knots (no summands: the unknot)."""

    summands: tuple[tuple[int, int], ...]

    @classmethod
    def parse(cls, text: str) -> Piece:
        text = text.strip()
        if text.lower() in ("u", "unknot", ""):
            return cls(())
        nums = [int(v) for v in text.replace(" ", "").split(",") if v]
        if len(nums) % 2:
            raise ValueError(f"knot spec {text!r} needs an even number of integers")
        return cls(tuple(zip(nums[0::2], nums[1::2])))

    @property
    def presentation(self) -> Presentation:
        return exterior_presentation(self.summands)

    def strata(self, selection=None, samples=None) -> list[Stratum]:
        return composite_strata(self.summands, selection, samples)

    @property
    def label(self) -> str:
        if not self.summands:
            return "U"
        return "#".join(f"T({p},{q})" for p, q in self.summands)


# --- gluing parameters ----------------------------------------------------

@dataclass(frozen=True)
class GlueSpace:
    tag: str
    dimension: int

    @classmethod
    def torus(cls, k: int) -> GlueSpace:
        return cls(f"TorusFiberProduct({k})", k)


POINT = GlueSpace("Point", 0)
CIRCLE = GlueSpace("Circle", 1)
SO3 = GlueSpace("SO3", 3)
SPHERE2 = GlueSpace("S2", 2)
INTERVAL = GlueSpace("Interval", 1)

_ORDER = {StabilizerType.CENTER: 0, StabilizerType.CIRCLE: 1, StabilizerType.FULL: 2}


class ModelError(RuntimeError):
    pass


def gluing_parameter_space(left: StabilizerType, boundary: StabilizerType,
                           right: StabilizerType) -> GlueSpace:
    """Double coset ``Stab_left \\ Stab_boundary / Stab_right``.

    Side stabilizers sit inside the boundary stabilizer (the boundary
    representation is a restriction); a violation signals a modelling bug.
    """
    if _ORDER[left] > _ORDER[boundary] or _ORDER[right] > _ORDER[boundary]:
        raise ModelError(f"stabilizers {left.value}, {right.value} not inside {boundary.value}")
    if boundary is StabilizerType.CENTER:
        return POINT
    lo, hi = sorted((left, right), key=_ORDER.get)
    if hi is boundary:
        return POINT
    if boundary is StabilizerType.CIRCLE:
        return CIRCLE                       # U(1) / {+-1}
    if hi is StabilizerType.CENTER:
        return SO3                          # SU(2) / {+-1}
    if lo is StabilizerType.CENTER:
        return SPHERE2                      # U(1) \ SU(2)
    return INTERVAL                         # U(1) \ SU(2) / U(1)


def boundary_stabilizer(p: PillowPoint) -> StabilizerType:
    return StabilizerType.FULL if p.is_corner else StabilizerType.CIRCLE


# --- fiber product --------------------------------------------------------

def _x_on(stratum: Stratum, t: Fraction) -> Fraction:
    x0, x1 = stratum.x_range
    return x0 + t * (x1 - x0)


@dataclass(frozen=True)
class FiberLocus:
    """Exact piece of the fiber product of two strata.

    ``left_x`` and ``right_x`` are the meridian angles (units of pi) on each
    side at the two ends of the locus (equal entries for a point).
    """

    locus: Union[PillowPoint, PillowSegment]
    left: Stratum
    right: Stratum
    left_x: tuple[Fraction, Fraction]
    right_x: tuple[Fraction, Fraction]
    glue: GlueSpace
    open: tuple[bool, bool] = (False, False)
    clipped: tuple[bool, bool] = (False, False)

    @property
    def is_point(self) -> bool:
        return isinstance(self.locus, PillowPoint)

    @property
    def dimension(self) -> int:
        return 0 if self.is_point else 1

    @property
    def reducible(self) -> bool:
        return (all(k is None for k in self.left.limit_key(self.left_x[0]))
                and all(k is None for k in self.right.limit_key(self.right_x[0])))

    @property
    def fiber_dim(self) -> int:
        if self.is_point:
            return (self.glue.dimension + self.left.fiber_dim_at(self.left_x[0])
                    + self.right.fiber_dim_at(self.right_x[0]))
        return self.glue.dimension + self.left.fiber_dim + self.right.fiber_dim

    @property
    def total_dimension(self) -> int:
        return self.dimension + self.fiber_dim

    def point_at_end(self, end: int) -> PillowPoint:
        if self.is_point:
            return self.locus
        return self.locus.canonical_at(end)

    def end_key(self, end: int) -> tuple:
        xl, xr = self.left_x[end], self.right_x[end]
        return (self.left.limit_key(xl), self.right.limit_key(xr), self.point_at_end(end))

    @property
    def key(self) -> tuple:
        if self.is_point:
            return self.end_key(0)
        return (self.left.key, self.right.key, self.locus.canonical_at(0), self.locus.canonical_at(1))

    def midpoint(self) -> tuple[Fraction, Fraction]:
        return ((self.left_x[0] + self.left_x[1]) / 2, (self.right_x[0] + self.right_x[1]) / 2)

    def describe(self) -> str:
        return f"{self.left.label} x {self.right.label} over {self.locus}"

    def to_json(self) -> dict:
        return {
            "left": self.left.label,
            "right": self.right.label,
            "locus": ({"point": self.locus.to_json()} if self.is_point
                      else {"segment": self.locus.to_json()}),
            "left_x": [angle_to_json(v) for v in self.left_x],
            "right_x": [angle_to_json(v) for v in self.right_x],
            "glue": self.glue.tag,
            "dimension": self.total_dimension,
            "reducible": self.reducible,
        }


def _point_locus(left, right, pt, xl, xr) -> FiberLocus:
    glue = gluing_parameter_space(left.stabilizer_at(xl), boundary_stabilizer(pt),
                                  right.stabilizer_at(xr))
    return FiberLocus(pt, left, right, (xl, xl), (xr, xr), glue)


def _clip(locus: FiberLocus, window: Fraction) -> Optional[FiberLocus]:
    (a, b) = locus.left_x
    if min(a, b) > window:
        return None
    if max(a, b) <= window or locus.is_point:
        return locus
    seg = locus.locus
    # parameter along the segment where the left meridian angle equals the window
    s = (window - a) / (b - a)
    t0, t1 = (Fraction(0), s) if a < b else (s, Fraction(1))
    open_ = (locus.open[0], False) if a < b else (False, locus.open[1])
    clipped = (False, True) if a < b else (True, False)

    def lerp(pair, t):
        return pair[0] + t * (pair[1] - pair[0])

    return FiberLocus(seg.sub(t0, t1, *open_), locus.left, locus.right,
                      (lerp(locus.left_x, t0), lerp(locus.left_x, t1)),
                      (lerp(locus.right_x, t0), lerp(locus.right_x, t1)),
                      locus.glue, open_, clipped)


def fiber_product(left_strata: Sequence[Stratum], right_strata: Sequence[Stratum],
                  h: GluingMatrix, window: Optional[Fraction] = None) -> list[FiberLocus]:
    """Loci where left images meet h-images of right images.

    ``window`` keeps only the part with left meridian angle at most ``window``
    (units of pi), matching pictures near the trivial character.
    """
    loci: list[FiberLocus] = []
    for left in left_strata:
        for right in right_strata:
            limg = left.image
            rimg = apply_gluing(h, right.image)
            for hit in intersect_params(limg, rimg):
                xl = (_x_on(left, hit.t[0]), _x_on(left, hit.t[1]))
                xr = (_x_on(right, hit.u[0]), _x_on(right, hit.u[1]))
                if hit.is_point:
                    loci.append(_point_locus(left, right, limg.canonical_at(hit.t[0]), xl[0], xr[0]))
                    continue
                seg = limg.sub(hit.t[0], hit.t[1], *hit.open)
                glue = gluing_parameter_space(left.stabilizer, StabilizerType.CIRCLE, right.stabilizer)
                open_ = list(hit.open)
                # split off closed ends where a stabilizer jumps
                for end in (0, 1):
                    pt = seg.canonical_at(end)
                    if open_[end]:
                        continue
                    end_glue = _point_locus(left, right, pt, xl[end], xr[end])
                    if (end_glue.glue != glue or pt.is_corner
                            or left.stabilizer_at(xl[end]) != left.stabilizer
                            or right.stabilizer_at(xr[end]) != right.stabilizer):
                        loci.append(end_glue)
                        open_[end] = True
                seg = PillowSegment(seg.start, seg.end, *open_)
                loci.append(FiberLocus(seg, left, right, xl, xr, glue, tuple(open_)))
    if window is not None:
        loci = [c for c in (_clip(l, Fraction(window)) for l in loci) if c is not None]
    return loci


# --- assembly -------------------------------------------------------------

@dataclass(frozen=True)
class LinkDescription:
    pieces: tuple[str, ...]
    manifold: Optional[bool]
    expected_dimension: int

    @property
    def classification(self) -> str:
        if self.manifold is None:
            return "unclassified"
        return "manifold" if self.manifold else "not a manifold"

    def to_json(self) -> dict:
        return {"pieces": list(self.pieces), "manifold": self.manifold,
                "expected_dimension": self.expected_dimension,
                "classification": self.classification}


def _fiber_name(k: int) -> str:
    return {0: "point", 1: "circle"}.get(k, f"{k}-torus")


@dataclass
class ComponentComplex:
    nodes: list[FiberLocus]
    segments: list[FiberLocus]
    # segment index -> (node index or None, node index or None) for its two ends
    ends: dict[int, tuple[Optional[int], Optional[int]]] = field(default_factory=dict)
    end_notes: dict[int, tuple[str, str]] = field(default_factory=dict)
    topology: str = "unclassified"

    @property
    def pieces(self) -> list[FiberLocus]:
        return self.nodes + self.segments

    @property
    def dimension(self) -> int:
        return max(p.total_dimension for p in self.pieces)

    def incident(self, node: int) -> list[tuple[int, int]]:
        return [(s, e) for s, pair in self.ends.items() for e in (0, 1) if pair[e] == node]

    def node_index(self, point) -> int:
        for i, n in enumerate(self.nodes):
            if point is n or point == n.key or point == n.locus:
                return i
        raise KeyError(point)

    @property
    def is_compact(self) -> bool:
        return all(None not in pair for pair in self.ends.values())

    @property
    def manifold(self) -> Optional[bool]:
        verdicts = [classify_link(self, i).manifold for i in range(len(self.nodes))]
        if any(v is False for v in verdicts):
            return False
        if self.topology in ("point", "circle", "2-sphere") or self.topology.endswith("-torus"):
            return True
        return None

    def representative(self) -> FiberLocus:
        return (self.nodes or self.segments)[0]

    def sort_key(self):
        rep = self.representative()
        return (rep.point_at_end(0), rep.left.label, rep.right.label, self.topology)


def classify_link(component: ComponentComplex, point) -> LinkDescription:
    """Link of a 0-dimensional piece from the fibers of the pieces ending there."""
    i = point if isinstance(point, int) else component.node_index(point)
    node = component.nodes[i]
    inc = component.incident(i)
    f_node = node.fiber_dim
    if not inc:
        k = f_node
        if k == 0:
            return LinkDescription((), True, 0)
        name = "point-pair" if k == 1 else ("circle" if k == 2 else f"sphere S^{k - 1}")
        return LinkDescription((name,), True, k)
    if f_node > 0:
        return LinkDescription(tuple(sorted(_fiber_name(component.segments[s].fiber_dim)
                                            for s, _ in inc)), None, component.dimension)
    names = sorted(_fiber_name(component.segments[s].fiber_dim) for s, _ in inc)
    expected = max(component.segments[s].total_dimension for s, _ in inc)
    if all(n == "point" for n in names):
        if len(names) == 2:
            return LinkDescription(("point-pair",), expected == 1, expected)
        return LinkDescription(tuple(names), False, expected)
    if names == ["circle"]:
        return LinkDescription(("circle",), expected == 2, expected)
    if len(names) >= 2:
        return LinkDescription(tuple(names), False, expected)
    return LinkDescription(tuple(names), None, expected)


def _name_topology(comp: ComponentComplex) -> str:
    if not comp.segments:
        if len(comp.nodes) != 1:
            return "unclassified"
        k = comp.nodes[0].fiber_dim
        return {0: "point", 1: "circle"}.get(k, f"{k}-torus")
    if not comp.is_compact or any(n.fiber_dim for n in comp.nodes):
        return "unclassified"
    fibers = {s.fiber_dim for s in comp.segments}
    degree = defaultdict(int)
    for a, b in comp.ends.values():
        degree[a] += 1
        degree[b] += 1
    n_seg = len(comp.segments)
    if fibers == {1}:
        if n_seg == 1:
            a, b = comp.ends[0]
            return "2-sphere" if a != b else "unclassified"
        centers = [v for v, d in degree.items() if d == n_seg]
        leaves = [v for v, d in degree.items() if d == 1]
        if len(centers) == 1 and len(leaves) == n_seg and len(comp.nodes) == n_seg + 1:
            return f"wedge of {NUMBER_WORDS.get(n_seg, str(n_seg))} 2-spheres"
        return "unclassified"
    if fibers == {0} and all(d == 2 for d in degree.values()) and len(comp.nodes) == n_seg:
        return "circle"
    return "unclassified"


def assemble_components(loci: Sequence[FiberLocus]) -> list[ComponentComplex]:
    """Group the irreducible loci into path components by shared limit points."""
    nodes = [l for l in loci if l.is_point and not l.reducible]
    segments = [l for l in loci if not l.is_point]
    node_of = {n.key: i for i, n in enumerate(nodes)}
    parent = list(range(len(nodes) + len(segments)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    seg_ends, notes = {}, {}
    for j, s in enumerate(segments):
        pair, note = [], []
        for end in (0, 1):
            key = s.end_key(end)
            if s.open[end] and key in node_of:
                pair.append(node_of[key])
                note.append("collapse" if nodes[node_of[key]].fiber_dim < s.fiber_dim else "node")
                parent[find(len(nodes) + j)] = find(node_of[key])
            elif s.clipped[end]:
                pair.append(None)
                note.append("window")
            elif all(k is None for k in key[0]) and all(k is None for k in key[1]):
                pair.append(None)
                note.append("reducible")
            else:
                pair.append(None)
                note.append("missing")
        seg_ends[j] = tuple(pair)
        notes[j] = tuple(note)

    groups: dict[int, list[int]] = defaultdict(list)
    for i in range(len(nodes) + len(segments)):
        groups[find(i)].append(i)
    comps = []
    for members in groups.values():
        nidx = [i for i in members if i < len(nodes)]
        sidx = [i - len(nodes) for i in members if i >= len(nodes)]
        local = {g: k for k, g in enumerate(nidx)}
        comp = ComponentComplex([nodes[i] for i in nidx], [segments[j] for j in sidx])
        for k, j in enumerate(sidx):
            comp.ends[k] = tuple(None if v is None else local[v] for v in seg_ends[j])
            comp.end_notes[k] = notes[j]
        comp.topology = _name_topology(comp)
        comps.append(comp)
    comps.sort(key=ComponentComplex.sort_key)
    return comps


# --- representations and Zariski tangent spaces ----------------------------

def align_right(pres_x: Presentation, rep_x, pres_y: Presentation, rep_y, h: GluingMatrix,
                glue_angle: float = 0.0, tol: float = 1e-8) -> list[GroupElement]:
    """Conjugate ``rep_y`` so its glued peripheral words match ``rep_x``.

    ``glue_angle`` moves along the stabilizer of the boundary representation.
    """
    bx = [evaluate_word(w, rep_x) for w in (pres_x.meridian, pres_x.longitude)]
    by = [evaluate_word(w, rep_y) for w in glued_peripheral_words(pres_y, h)]
    axes_x = [g.polar()[1] for g in bx if not g.is_central()]
    axes_y = [g.polar()[1] for g in by if not g.is_central()]
    candidates = [GroupElement.identity()]
    if axes_x and axes_y:
        kx, ky = axes_x[0], axes_y[0]
        candidates = [rotation_taking(ky, kx), rotation_taking(ky, -kx)]
    for g in candidates:
        if axes_x:
            g = exp_axis(axes_x[0], glue_angle) * g
        moved = [conjugate(g, r) for r in rep_y]
        img = [evaluate_word(w, moved) for w in glued_peripheral_words(pres_y, h)]
        if max(a.distance(b) for a, b in zip(bx, img)) < tol:
            return moved
    raise RelatorError(max(a.distance(b) for a, b in zip(bx, by)), -1)


@dataclass(frozen=True)
class ZariskiSample:
    locus: FiberLocus
    left_x: Fraction
    right_x: Fraction
    glue_angle: float
    fiber: tuple[float, ...]
    direct: int
    mv: MayerVietoris
    ambiguous: bool
    gap: float

    @property
    def zariski(self) -> int:
        return self.direct

    def to_json(self) -> dict:
        return {"left_x": angle_to_json(self.left_x), "right_x": angle_to_json(self.right_x),
                "glue_angle": self.glue_angle, "fiber": list(self.fiber),
                "zariski": self.direct, "mayer_vietoris": self.mv.to_json(),
                "ambiguous": self.ambiguous,
                "rank_gap": None if math.isinf(self.gap) else float(f"{self.gap:.3g}")}


def glued_representation(left: Stratum, right: Stratum, xl, xr, h: GluingMatrix,
                         glue_angle: float = 0.0, fiber_left=(), fiber_right=()):
    px = rep_at(left, xl, fiber_left)
    py = rep_at(right, xr, fiber_right)
    rep_y = align_right(px.presentation, px.representation, py.presentation,
                        py.representation, h, glue_angle)
    return px, py, list(px.representation), rep_y


def zariski_dim(spliced: Presentation, pres_x: Presentation, pres_y: Presentation,
                h: GluingMatrix, rep_x, rep_y) -> tuple[int, MayerVietoris, bool, float]:
    """dim H^1 of the glued representation, checked against Mayer-Vietoris."""
    full = list(rep_x) + list(rep_y)
    check_relators(spliced, full)
    direct = h1_dim(spliced, full)
    mv = mayer_vietoris(pres_x, pres_y, h, rep_x, rep_y)
    if direct.h1 != mv.h1:
        raise ZariskiMismatch(f"direct H^1 = {direct.h1}, Mayer-Vietoris gives {mv.h1}")
    return direct.h1, mv, direct.ambiguous or mv.ambiguous, min(direct.gap, mv.gap)


def sample_locus(locus: FiberLocus, h: GluingMatrix, glue_angle: float = 0.0,
                 fiber: Sequence[float] = ()) -> ZariskiSample:
    xl, xr = (locus.left_x[0], locus.right_x[0]) if locus.is_point else locus.midpoint()
    nl = locus.left.fiber_dim_at(xl)
    fiber = tuple(fiber) + (0.7,) * max(0, nl + locus.right.fiber_dim_at(xr) - len(fiber))
    px, py, rep_x, rep_y = glued_representation(
        locus.left, locus.right, xl, xr, h, glue_angle, fiber[:nl], fiber[nl:])
    spliced = splice(px.presentation, py.presentation, h)
    z, mv, amb, gap = zariski_dim(spliced, px.presentation, py.presentation, h, rep_x, rep_y)
    return ZariskiSample(locus, xl, xr, glue_angle, fiber, z, mv, amb, gap)


def component_samples(comp: ComponentComplex, h: GluingMatrix) -> list[ZariskiSample]:
    """One sample per rigid point; three spread over the fibers of everything else."""
    out = []
    pieces = comp.pieces
    if len(pieces) == 1 and pieces[0].is_point and pieces[0].fiber_dim == 0:
        return [sample_locus(pieces[0], h)]
    for piece in pieces:
        if piece.fiber_dim == 0:
            out.append(sample_locus(piece, h))
            continue
        for k, angle in enumerate(GLUE_SAMPLES):
            fib = tuple(GLUE_SAMPLES[(k + i + 1) % 3] for i in range(piece.fiber_dim))
            out.append(sample_locus(piece, h, angle if piece.glue.dimension else 0.0, fib))
    return out


# --- census ---------------------------------------------------------------

@dataclass
class ComponentReport:
    component: ComponentComplex
    samples: list[ZariskiSample]
    links: list[LinkDescription]

    @property
    def zariski(self) -> list[int]:
        return [s.zariski for s in self.samples]

    @property
    def morse_bott(self) -> bool:
        return (self.component.manifold is True
                and all(z == self.component.dimension for z in self.zariski))

    def to_json(self) -> dict:
        c = self.component
        return {
            "topology": c.topology,
            "dimension": c.dimension,
            "manifold": c.manifold,
            "morse_bott": self.morse_bott,
            "pieces": [p.to_json() for p in c.pieces],
            "zariski": self.zariski,
            "samples": [s.to_json() for s in self.samples],
            "links": [
                {"point": n.locus.to_json(), **link.to_json()}
                for n, link in zip(c.nodes, self.links)],
        }


@dataclass
class CensusReport:
    left: str
    right: str
    gluing: tuple[int, int, int, int]
    components: list[ComponentReport]
    reducible: list[FiberLocus]

    @property
    def provisional(self) -> bool:
        return any(s.ambiguous for c in self.components for s in c.samples)

    def isolated_points(self, zariski: Optional[int] = None) -> list[ComponentReport]:
        out = [c for c in self.components if c.component.topology == "point"]
        if zariski is not None:
            out = [c for c in out if c.zariski and c.zariski[0] == zariski]
        return out

    def by_topology(self, name: str) -> list[ComponentReport]:
        return [c for c in self.components if c.component.topology == name]

    def non_manifold(self) -> list[ComponentReport]:
        return [c for c in self.components if c.component.manifold is False]

    def counts(self) -> dict:
        topo = defaultdict(int)
        for c in self.components:
            topo[c.component.topology] += 1
        iso = defaultdict(int)
        for c in self.isolated_points():
            iso[str(c.zariski[0])] += 1
        return {
            "components": len(self.components),
            "topology": dict(sorted(topo.items())),
            "isolated_points_by_zariski": dict(sorted(iso.items())),
            "morse_bott": sum(c.morse_bott for c in self.components),
            "non_manifold": len(self.non_manifold()),
            "reducible_points": len(self.reducible),
        }

    def to_json(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "gluing": list(self.gluing),
            "provisional": self.provisional,
            "counts": self.counts(),
            "components": [c.to_json() for c in self.components],
            "reducible": [l.to_json() for l in self.reducible],
        }


def census(left: Piece, right: Piece, h: GluingMatrix, *, zariski: bool = True,
           samples: Optional[int] = None) -> CensusReport:
    """Components of the irreducible character variety of ``left u_h right``."""
    loci = fiber_product(left.strata(samples=samples), right.strata(samples=samples), h)
    comps = assemble_components(loci)
    reports = []
    for comp in comps:
        smp = component_samples(comp, h) if zariski else []
        links = [classify_link(comp, i) for i in range(len(comp.nodes))]
        reports.append(ComponentReport(comp, smp, links))
    reducible = [l for l in loci if l.is_point and l.reducible]
    return CensusReport(left.label, right.label, h.as_tuple(), reports, reducible)
