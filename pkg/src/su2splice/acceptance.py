"""Acceptance checks shared by ``su2splice verify`` and the test suite."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .arcs import composite_strata, distinguished_arc, distinguished_selection, trace_arc_numeric
from .pillowcase import canonicalize
from .presentations import PLUS_ONE_GLUING, first_homology, splice
from .splice import (POINT, CensusReport, ComponentComplex, Piece, assemble_components,
                     census, classify_link, fiber_product, sample_locus)
from .su2 import adjoint_matrix, conjugate, random_element

ORACLE_SAMPLES = 256
ORACLE_RESIDUAL = 1e-9
ENDPOINT_TOL = 1e-6
MIN_RANK_GAP = 1e3
PROPERTY_POINTS = 10_000
PROPERTY_TRIALS = 1_000
PROPERTY_TOL = 1e-9

X = Piece.parse("3,5")
Y = Piece.parse("2,7")
Z = Piece.parse("-2,7,-2,7")
Z_VARIANT = Piece.parse("-2,7,-2,7,-2,7,2,7")
RHO0 = canonicalize(Fraction(1, 14), Fraction(-1, 14))
LOCAL_WINDOW = Fraction(1, 14)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail}"


@lru_cache(maxsize=None)
def sigma1_census() -> CensusReport:
    return census(X, Y, PLUS_ONE_GLUING)


@lru_cache(maxsize=None)
def sigma2_census() -> CensusReport:
    return census(X, Z, PLUS_ONE_GLUING)


def rho0_node(comps: list[ComponentComplex]) -> Optional[tuple[ComponentComplex, int]]:
    """The point over (pi/14, -pi/14) that is irreducible on the left, abelian on the right."""
    key = (distinguished_arc(3, 5).label,)
    for comp in comps:
        for i, node in enumerate(comp.nodes):
            if (node.locus == RHO0 and node.left.limit_key(node.left_x[0]) == key
                    and all(k is None for k in node.right.limit_key(node.right_x[0]))):
                return comp, i
    return None


def local_link(right: Piece):
    """Link at the rho0 point for ``X u_h right``, from the loci near the trivial character."""
    loci = fiber_product(X.strata(), right.strata(), PLUS_ONE_GLUING, window=LOCAL_WINDOW)
    found = rho0_node(assemble_components(loci))
    if found is None:
        return None
    return classify_link(*found)


# --- criteria --------------------------------------------------------------

def criterion_homology() -> CriterionResult:
    h1 = first_homology(splice(X.presentation, Y.presentation, PLUS_ONE_GLUING))
    h2 = first_homology(splice(X.presentation, Z.presentation, PLUS_ONE_GLUING))
    return CriterionResult(1, "homology spheres", h1 == [] and h2 == [],
                           f"H1(Sigma1) = {h1 or 0}, H1(Sigma2) = {h2 or 0}")


def oracle_check(p: int, q: int, samples: int = ORACLE_SAMPLES) -> tuple[bool, str]:
    arc = distinguished_arc(p, q)
    pts = trace_arc_numeric(p, q, arc.a, arc.b, samples)
    x0 = float(arc.x0) * math.pi
    slope = arc.slope
    resid = max(abs((y - slope * (x - x0) + math.pi) % (2 * math.pi) - math.pi) for x, y in pts)
    xs = sorted((pts[0][0], pts[-1][0]))
    want = (float(arc.x0) * math.pi, float(arc.x1) * math.pi)
    end_err = max(abs(a - b) for a, b in zip(xs, want))
    ok = resid < ORACLE_RESIDUAL and end_err < ENDPOINT_TOL
    return ok, (f"T({p},{q}) slope {slope}, range ({arc.x0}, {arc.x1})pi, "
                f"residual {resid:.1e}, endpoint error {end_err:.1e}")


def criterion_oracle() -> CriterionResult:
    expected = {(3, 5): (-15, Fraction(1, 15), Fraction(11, 15)),
                (2, 7): (-14, Fraction(1, 14), Fraction(13, 14)),
                (-2, 7): (14, Fraction(1, 14), Fraction(13, 14))}
    ok, details = True, []
    for (p, q), (slope, lo, hi) in expected.items():
        arc = distinguished_arc(p, q)
        good, msg = oracle_check(p, q)
        good = good and (arc.slope, arc.x0, arc.x1) == (slope, lo, hi)
        ok &= good
        details.append(msg)
    return CriterionResult(2, "torus knot arc oracle", ok, "; ".join(details))


def distinguished_loci(window: Optional[Fraction] = LOCAL_WINDOW):
    xs = composite_strata(X.summands, distinguished_selection(X.summands))
    ys = composite_strata(Y.summands, distinguished_selection(Y.summands))
    return fiber_product(xs, ys, PLUS_ONE_GLUING, window=window)


def criterion_intersection() -> CriterionResult:
    loci = distinguished_loci()
    theta = [l for l in loci if l.is_point and l.reducible and l.locus == canonicalize(0, 0)]
    point = [l for l in loci if l.is_point and l.locus == RHO0 and l.glue == POINT]
    ok = len(loci) == 2 and len(theta) == 1 and len(point) == 1
    total = len(distinguished_loci(window=None))
    return CriterionResult(3, "intersection near the trivial character", ok,
                           f"{len(loci)} loci for x <= pi/14: " + ", ".join(
                               f"{l.locus}[{l.glue.tag}]" for l in loci)
                           + f" ({total} loci over the whole pillowcase)")


def criterion_zariski() -> CriterionResult:
    point = next(l for l in distinguished_loci() if l.is_point and l.locus == RHO0)
    s = sample_locus(point, PLUS_ONE_GLUING)
    mv = s.mv
    ok = (s.direct == 2 and mv.h1 == 2 and mv.hx.h1 == 1 and mv.boundary.h1 == 2
          and mv.hy.h1 == 3 and mv.rank_difference_map == mv.boundary.h1
          and s.gap > MIN_RANK_GAP and not s.ambiguous)
    return CriterionResult(4, "Zariski tangent space at (pi/14, -pi/14)", ok,
                           f"direct {s.direct}, Mayer-Vietoris {mv.h1} from H1(X) = {mv.hx.h1}, "
                           f"H1(boundary) = {mv.boundary.h1}, H1(Y) = {mv.hy.h1}, "
                           f"rank {mv.rank_difference_map}; rank gap {s.gap:.2e}")


def criterion_non_manifold() -> CriterionResult:
    report = sigma2_census()
    found = rho0_node([c.component for c in report.components])
    if found is None:
        return CriterionResult(5, "non-manifold component of Sigma2", False, "rho0 not found")
    comp, i = found
    link = classify_link(comp, i)
    ok = (link.pieces == ("circle", "circle") and link.manifold is False
          and comp.topology == "wedge of two 2-spheres")
    return CriterionResult(5, "non-manifold component of Sigma2", ok,
                           f"link {{{', '.join(link.pieces)}}}, {link.classification}; "
                           f"component: {comp.topology}")


def criterion_census() -> CriterionResult:
    report = sigma1_census()
    iso0 = report.isolated_points(0)
    iso2 = report.isolated_points(2)
    rest = [c for c in report.components if c not in iso0 and c not in iso2]
    circles_ok = all(c.component.topology == "circle" and c.zariski == [1, 1, 1] and c.morse_bott
                     for c in rest)
    ok = len(iso0) == 22 and len(iso2) == 6 and circles_ok and not report.provisional
    return CriterionResult(6, "census of Sigma1", ok,
                           f"{len(iso0)} nondegenerate points, {len(iso2)} points with "
                           f"2-dimensional tangent space, {len(rest)} other components "
                           f"({'all Morse-Bott circles' if circles_ok else 'not all Morse-Bott circles'})")


def criterion_variant() -> CriterionResult:
    link = local_link(Z_VARIANT)
    if link is None:
        return CriterionResult(7, "variant link", False, "corresponding point not found")
    ok = sorted(link.pieces) == ["3-torus", "circle", "circle"] and link.manifold is False
    return CriterionResult(7, f"link at (pi/14, -pi/14) for {Z_VARIANT.label}", ok,
                           f"link {{{', '.join(link.pieces)}}}, {link.classification}")


# --- property suites -------------------------------------------------------

def pillowcase_properties(n: int, rng: np.random.Generator) -> list[str]:
    errors = []
    for _ in range(n):
        num = rng.integers(-60, 61, size=2)
        den = rng.integers(1, 31, size=2)
        x, y = Fraction(int(num[0]), int(den[0])), Fraction(int(num[1]), int(den[1]))
        p = canonicalize(x, y)
        if canonicalize(p.x, p.y) != p:
            errors.append(f"canonicalize not idempotent at {(x, y)}")
        sign = int(rng.choice((-1, 1)))
        i, j = (int(v) for v in rng.integers(-5, 6, size=2))
        if canonicalize(sign * x + 2 * i, sign * y + 2 * j) != p:
            errors.append(f"deck transformation changes class of {(x, y)}")
        if not (0 <= p.x <= 1 and 0 <= p.y < 2 and (p.x not in (0, 1) or p.y <= 1)):
            errors.append(f"{p} not canonical")
    return errors


def su2_properties(n: int, rng: np.random.Generator, tol: float = PROPERTY_TOL) -> list[str]:
    errors = []
    for _ in range(n):
        g, h, k = (random_element(rng) for _ in range(3))
        if np.abs(adjoint_matrix(g * h) - adjoint_matrix(g) @ adjoint_matrix(h)).max() > tol:
            errors.append("Ad(gh) != Ad(g) Ad(h)")
        if abs(conjugate(k, g).trace() - g.trace()) > tol:
            errors.append("trace not conjugation invariant")
        if conjugate(k, g * h).distance(conjugate(k, g) * conjugate(k, h)) > tol:
            errors.append("conjugation is not a homomorphism")
    return errors


def slope_law_errors() -> list[str]:
    errors = []
    for summands in (Z.summands, Z_VARIANT.summands, ((3, 5), (2, 7))):
        for s in composite_strata(summands):
            expected = sum(arc.slope for arc in s.arcs if arc is not None)
            if s.slope != expected or s.image.slope not in (expected, None):
                errors.append(f"{s.label}: slope {s.slope} != {expected}")
    return errors


def criterion_properties(points: int = PROPERTY_POINTS, trials: int = PROPERTY_TRIALS,
                         seed: int = 20240501) -> CriterionResult:
    rng = np.random.default_rng(seed)
    errors = pillowcase_properties(points, rng) + su2_properties(trials, rng) + slope_law_errors()
    samples = [s for rep in (sigma1_census(), sigma2_census())
               for c in rep.components for s in c.samples]
    errors += [f"MV/direct mismatch at {s.locus.describe()}" for s in samples if s.direct != s.mv.h1]
    h2 = PLUS_ONE_GLUING @ PLUS_ONE_GLUING
    if h2.as_tuple() != (1, 0, 0, 1):
        errors.append(f"h^2 = {h2.as_tuple()}")
    detail = (f"{points} pillowcase points, {trials} SU(2) trials, {len(samples)} census samples, "
              f"h^2 = {h2.as_tuple()}")
    if errors:
        detail += f"; {len(errors)} failures, first: {errors[0]}"
    return CriterionResult(8, "property suites", not errors, detail)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_homology, criterion_oracle, criterion_intersection, criterion_zariski,
    criterion_non_manifold, criterion_census, criterion_variant, criterion_properties,
)


def run_all(homology_only: bool = False) -> list[CriterionResult]:
    if homology_only:
        return [criterion_homology()]
    return [check() for check in CRITERIA]
