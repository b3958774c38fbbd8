"""Twisted cohomology H^0, H^1 with coefficients in su(2) twisted by Ad(rho).

H^1 is computed from Fox calculus: Z^1 is the kernel of the Fox Jacobian and
B^1 the image of ``d^0``, of dimension ``3 - h0``.  H^1 of a group only
depends on the group, so any presentation may be used.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .presentations import (GluingMatrix, Presentation, RelatorError, coboundary_zero,
                            fox_jacobian, fox_row, glued_peripheral_words,
                            torus_presentation)
from .su2 import GroupElement, evaluate_word, stabilizer_type

RANK_RTOL = 1e-7
# singular values within this factor of the threshold make the rank ambiguous
AMBIGUITY_FACTOR = 10.0


@dataclass(frozen=True)
class RankInfo:
    rank: int
    threshold: float
    smallest_kept: float      # inf when rank == 0
    largest_dropped: float    # 0 when nothing is dropped

    @property
    def ambiguous(self) -> bool:
        return (self.smallest_kept < AMBIGUITY_FACTOR * self.threshold
                or self.largest_dropped > self.threshold / AMBIGUITY_FACTOR)

    @property
    def gap(self) -> float:
        """min(kept / threshold, threshold / dropped)."""
        hi = self.smallest_kept / self.threshold if self.threshold else np.inf
        lo = self.threshold / self.largest_dropped if self.largest_dropped else np.inf
        return float(min(hi, lo))


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL, scale: Optional[float] = None) -> RankInfo:
    """Rank from singular values above ``rtol * scale`` (default: the largest one)."""
    if m.size == 0:
        return RankInfo(0, 0.0, np.inf, 0.0)
    s = np.linalg.svd(m, compute_uv=False)
    top = float(s[0]) if scale is None else scale
    if top == 0.0:
        return RankInfo(0, 0.0, np.inf, 0.0)
    thr = rtol * top
    kept = s[s > thr]
    dropped = s[s <= thr]
    return RankInfo(int(kept.size), thr,
                    float(kept.min()) if kept.size else np.inf,
                    float(dropped.max()) if dropped.size else 0.0)


def null_space(m: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel."""
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(m)
    top = s[0] if s.size else 0.0
    rank = int((s > rtol * top).sum()) if top > 0 else 0
    return vt[rank:].T.copy()


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    z1: int
    rank_jacobian: int
    label: str = ""
    ambiguous: bool = False
    gap: float = np.inf

    def to_json(self) -> dict:
        d = asdict(self)
        d["gap"] = None if not np.isfinite(self.gap) else float(f"{self.gap:.6g}")
        return d


def h0_dim(rep: Sequence[GroupElement]) -> int:
    if not rep:
        return 3
    return stabilizer_type(rep).lie_dim


def h1_dim(pres: Presentation, rep: Sequence[GroupElement]) -> CohomologyReport:
    j = fox_jacobian(pres, rep)
    info = numerical_rank(j)
    h0 = h0_dim(rep)
    n = pres.num_generators
    z1 = 3 * n - info.rank
    return CohomologyReport(h0=h0, h1=z1 - (3 - h0), z1=z1, rank_jacobian=info.rank,
                            label=pres.label, ambiguous=info.ambiguous, gap=info.gap)


def cocycle_basis(pres: Presentation, rep: Sequence[GroupElement]) -> np.ndarray:
    """Columns span Z^1 (cocycle values on the generators, stacked)."""
    return null_space(fox_jacobian(pres, rep))


def invariants(rep: Sequence[GroupElement]) -> np.ndarray:
    """Columns span H^0 = fixed vectors of Ad(rho)."""
    if not rep:
        return np.eye(3)
    return null_space(coboundary_zero(rep))


def mv_h1(hx: CohomologyReport, hy: CohomologyReport, rank_difference_map: int, *,
          boundary_h0: Optional[int] = None, h0_image_rank: Optional[int] = None,
          boundary_h1: Optional[int] = None) -> int:
    """dim H^1 of the glued space from the Mayer-Vietoris sequence.

    Without ``boundary_h0``/``h0_image_rank`` the map
    ``H^0(X) + H^0(Y) -> H^0(boundary)`` is taken to be onto, so the answer is
    the kernel dimension ``h1(X) + h1(Y) - rank``.  Otherwise its cokernel,
    ``boundary_h0 - h0_image_rank``, is added.
    """
    r = rank_difference_map
    if r < 0 or r > hx.h1 + hy.h1 or (boundary_h1 is not None and r > boundary_h1):
        raise ValueError(f"rank {r} inconsistent with h1 = {hx.h1}, {hy.h1}, boundary {boundary_h1}")
    result = hx.h1 + hy.h1 - r
    if boundary_h0 is not None or h0_image_rank is not None:
        if boundary_h0 is None or h0_image_rank is None:
            raise ValueError("boundary_h0 and h0_image_rank go together")
        if not 0 <= h0_image_rank <= boundary_h0:
            raise ValueError(f"h0 image rank {h0_image_rank} exceeds boundary h0 {boundary_h0}")
        result += boundary_h0 - h0_image_rank
    return result


@dataclass(frozen=True)
class MayerVietoris:
    """All terms of the Mayer-Vietoris computation at one glued representation."""

    hx: CohomologyReport
    hy: CohomologyReport
    boundary: CohomologyReport
    rank_difference_map: int
    h0_image_rank: int
    ambiguous: bool
    gap: float = np.inf

    @property
    def h1(self) -> int:
        return mv_h1(self.hx, self.hy, self.rank_difference_map,
                     boundary_h0=self.boundary.h0, h0_image_rank=self.h0_image_rank,
                     boundary_h1=self.boundary.h1)

    def to_json(self) -> dict:
        return {"h1_x": self.hx.h1, "h1_y": self.hy.h1, "h1_boundary": self.boundary.h1,
                "h0_boundary": self.boundary.h0, "h0_image_rank": self.h0_image_rank,
                "rank_difference_map": self.rank_difference_map, "h1": self.h1}


def _boundary_images(pres_x, pres_y, h, rep_x, rep_y, tol):
    """Boundary holonomies from both sides; raises if they disagree."""
    wx = (pres_x.meridian, pres_x.longitude)
    wy = glued_peripheral_words(pres_y, h)
    bx = [evaluate_word(w, rep_x) for w in wx]
    by = [evaluate_word(w, rep_y) for w in wy]
    dev = max(a.distance(b) for a, b in zip(bx, by))
    if dev > tol:
        raise RelatorError(dev, -1)
    return wx, wy, bx


def mayer_vietoris(pres_x: Presentation, pres_y: Presentation, h: GluingMatrix,
                   rep_x: Sequence[GroupElement], rep_y: Sequence[GroupElement],
                   tol: float = 1e-8) -> MayerVietoris:
    """H^1 of ``X u_h Y`` assembled from the pieces.

    ``rep_y`` must already be conjugated so that the glued peripheral words
    agree with ``rep_x`` on the nose.
    """
    wx, wy, bx = _boundary_images(pres_x, pres_y, h, rep_x, rep_y, tol)
    hx = h1_dim(pres_x, rep_x)
    hy = h1_dim(pres_y, rep_y)
    boundary = h1_dim(torus_presentation(), bx)

    zx = cocycle_basis(pres_x, rep_x)
    zy = cocycle_basis(pres_y, rep_y)
    rx = np.vstack([fox_row(w, rep_x, pres_x.num_generators) for w in wx]) @ zx
    ry = np.vstack([fox_row(w, rep_y, pres_y.num_generators) for w in wy]) @ zy
    b1 = coboundary_zero(bx)
    scale = max(np.linalg.norm(m, 2) for m in (rx, ry, b1) if m.size) if (rx.size or ry.size) else 1.0
    full = numerical_rank(np.hstack([rx, ry, b1]), scale=scale)
    exact = numerical_rank(b1, scale=scale)
    rank = full.rank - exact.rank

    inv = np.hstack([invariants(rep_x), invariants(rep_y)])
    h0_rank = numerical_rank(inv, scale=1.0)
    ambiguous = any(r.ambiguous for r in (full, exact, h0_rank)) or hx.ambiguous or hy.ambiguous
    gap = min(full.gap, exact.gap, h0_rank.gap, hx.gap, hy.gap)
    return MayerVietoris(hx, hy, boundary, rank, h0_rank.rank, ambiguous, gap)


def rank_difference_map(pres_x, pres_y, h, rep_x, rep_y) -> int:
    """Rank of ``H^1(X) + H^1(Y) -> H^1(boundary)`` (restriction difference)."""
    return mayer_vietoris(pres_x, pres_y, h, rep_x, rep_y).rank_difference_map
