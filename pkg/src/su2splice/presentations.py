"""Finitely presented groups for knot exteriors, connected sums and splices."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .su2 import GroupElement, adjoint_matrix, evaluate_word

RELATOR_TOL = 1e-8


class PresentationError(ValueError):
    pass


class RelatorError(ValueError):
    """A representation fails to satisfy a relator."""

    def __init__(self, deviation: float, relator_index: int):
        super().__init__(
            f"relator {relator_index} not satisfied (max deviation {deviation:.3e})")
        self.deviation = deviation
        self.relator_index = relator_index


def _reduce(letters) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in numbered generators."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> Word:
        return cls(((index, exponent),))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def shift(self, offset: int) -> Word:
        return Word(tuple((g + offset, e) for g, e in self.letters))

    def exponent_sums(self, num_generators: int) -> list[int]:
        sums = [0] * num_generators
        for g, e in self.letters:
            sums[g] += e
        return sums

    def __len__(self):
        return len(self.letters)

    def to_json(self) -> list[list[int]]:
        return [[g, e] for g, e in self.letters]

    @classmethod
    def from_json(cls, data) -> Word:
        return cls(tuple((int(g), int(e)) for g, e in data))


@dataclass(frozen=True)
class GluingMatrix:
    """Integer matrix acting on (meridian, longitude) coordinates.

    Rows ``(a, b), (c, d)`` encode ``mu_X = mu_Y^a lambda_Y^b`` and
    ``lambda_X = mu_Y^c lambda_Y^d``; on holonomy angles this is
    ``(x, y) -> (a x + b y, c x + d y)``.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise PresentationError(f"gluing matrix must have determinant +-1, got {self.det}")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> GluingMatrix:
        k = self.det
        return GluingMatrix(self.d * k, -self.b * k, -self.c * k, self.a * k)

    def __matmul__(self, other: GluingMatrix) -> GluingMatrix:
        return GluingMatrix(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def apply(self, x, y):
        return self.a * x + self.b * y, self.c * x + self.d * y

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


#: mu -> mu, lambda -> -mu - lambda; splicing with it is +1 surgery on the connected sum.
PLUS_ONE_GLUING = GluingMatrix(1, 0, -1, -1)


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple[Word, ...]
    meridian: Optional[Word] = None
    longitude: Optional[Word] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        for w in self.words():
            for g, _ in w.letters:
                if not 0 <= g < self.num_generators:
                    raise PresentationError(f"generator {g} out of range in {self.label!r}")
        if (self.meridian is None) != (self.longitude is None):
            raise PresentationError("peripheral data needs both meridian and longitude")

    @property
    def has_peripheral(self) -> bool:
        return self.meridian is not None

    def words(self):
        yield from self.relators
        if self.has_peripheral:
            yield self.meridian
            yield self.longitude

    def exponent_matrix(self) -> np.ndarray:
        rows = [r.exponent_sums(self.num_generators) for r in self.relators]
        return np.array(rows, dtype=int).reshape(len(rows), self.num_generators)

    def to_json(self) -> dict:
        peripheral = None
        if self.has_peripheral:
            peripheral = {"meridian": self.meridian.to_json(),
                          "longitude": self.longitude.to_json()}
        return {
            "label": self.label,
            "num_generators": self.num_generators,
            "relators": [r.to_json() for r in self.relators],
            "peripheral": peripheral,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> Presentation:
        per = data.get("peripheral")
        return cls(
            num_generators=int(data["num_generators"]),
            relators=tuple(Word.from_json(r) for r in data["relators"]),
            meridian=Word.from_json(per["meridian"]) if per else None,
            longitude=Word.from_json(per["longitude"]) if per else None,
            label=data.get("label", ""),
        )

    @classmethod
    def loads(cls, text: str) -> Presentation:
        return cls.from_json(json.loads(text))


def meridian_exponents(p: int, q: int) -> tuple[int, int]:
    """Solve ``m q + n p = 1`` with ``|m|`` minimal (ties broken towards ``m > 0``)."""
    if math.gcd(p, q) != 1:
        raise PresentationError(f"gcd({p}, {q}) != 1")
    ap = abs(p)
    m = pow(q, -1, ap) if ap > 1 else 0
    if m > ap / 2:
        m -= ap
    n, rem = divmod(1 - m * q, p)
    assert rem == 0
    return m, n


@lru_cache(maxsize=None)
def torus_knot_presentation(p: int, q: int) -> Presentation:
    """Exterior of T(p, q): ``<u, v | u^p = v^q>``.

    ``mu = u^m v^n`` with ``m q + n p = 1`` and ``lambda = u^p mu^{-pq}``.
    """
    if q < 0:
        p, q = -p, -q
    if abs(p) < 2 or q < 2:
        raise PresentationError(f"T({p},{q}) needs |p| >= 2 and |q| >= 2")
    m, n = meridian_exponents(p, q)
    u, v = Word.gen(0), Word.gen(1)
    mu = u ** m * v ** n
    lam = u ** p * mu ** (-p * q)
    pres = Presentation(2, (u ** p * v ** (-q),), mu, lam, label=f"T({p},{q})")
    _check_knot_homology(pres)
    return pres


def unknot_presentation() -> Presentation:
    return Presentation(1, (), Word.gen(0), Word(), label="U")


def torus_presentation() -> Presentation:
    """The boundary torus ``<mu, lambda | [mu, lambda]>``."""
    mu, lam = Word.gen(0), Word.gen(1)
    return Presentation(2, (mu * lam * mu.inverse() * lam.inverse(),), mu, lam, label="T2")


def _check_knot_homology(pres: Presentation) -> None:
    """H_1 = Z generated by the meridian, with the longitude null-homologous."""
    if first_homology(pres) != [0]:
        raise PresentationError(f"{pres.label}: abelianization is not Z")
    # adding w as a relator to Z = <t> leaves Z/k where w = t^k
    with_mu = Presentation(pres.num_generators, pres.relators + (pres.meridian,))
    if first_homology(with_mu) != []:
        raise PresentationError(f"{pres.label}: meridian does not generate H_1")
    with_lam = Presentation(pres.num_generators, pres.relators + (pres.longitude,))
    if first_homology(with_lam) != [0]:
        raise PresentationError(f"{pres.label}: longitude not null-homologous")


def connected_sum(k1: Presentation, k2: Presentation) -> Presentation:
    if not (k1.has_peripheral and k2.has_peripheral):
        raise PresentationError("connected_sum needs peripheral data on both summands")
    off = k1.num_generators
    mu2 = k2.meridian.shift(off)
    relators = k1.relators + tuple(r.shift(off) for r in k2.relators) + (k1.meridian * mu2.inverse(),)
    return Presentation(
        off + k2.num_generators, relators, k1.meridian,
        k1.longitude * k2.longitude.shift(off), label=f"{k1.label}#{k2.label}")


def splice(kx: Presentation, ky: Presentation, h: GluingMatrix) -> Presentation:
    """Glue two exteriors: ``mu_X = mu_Y^a lambda_Y^b``, ``lambda_X = mu_Y^c lambda_Y^d``."""
    if not (kx.has_peripheral and ky.has_peripheral):
        raise PresentationError("splice needs peripheral data on both pieces")
    if not isinstance(h, GluingMatrix):
        h = GluingMatrix(*h)
    off = kx.num_generators
    mu_y, lam_y = ky.meridian.shift(off), ky.longitude.shift(off)
    img_mu = mu_y ** h.a * lam_y ** h.b
    img_lam = mu_y ** h.c * lam_y ** h.d
    relators = (kx.relators + tuple(r.shift(off) for r in ky.relators)
                + (kx.meridian * img_mu.inverse(), kx.longitude * img_lam.inverse()))
    return Presentation(off + ky.num_generators, relators,
                        label=f"{kx.label} U_h {ky.label}")


def glued_peripheral_words(ky: Presentation, h: GluingMatrix) -> tuple[Word, Word]:
    """Words in ``ky``'s generators identified with ``mu_X`` and ``lambda_X``."""
    return (ky.meridian ** h.a * ky.longitude ** h.b,
            ky.meridian ** h.c * ky.longitude ** h.d)


def first_homology(pres: Presentation) -> list[int]:
    """Invariant factors of H_1: torsion orders > 1 followed by a 0 per free summand."""
    n = pres.num_generators
    if n == 0:
        return []
    a = pres.exponent_matrix()
    if a.shape[0] == 0:
        return [0] * n
    snf = smith_normal_form(Matrix(a.tolist()), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    nonzero = [d for d in diag if d != 0]
    free_rank = n - len(nonzero)
    return sorted(d for d in nonzero if d != 1) + [0] * free_rank


def check_relators(pres: Presentation, rep: Sequence[GroupElement], tol: float = RELATOR_TOL) -> float:
    """Max distance from the identity over all relators; raises past ``tol``."""
    one = GroupElement.identity()
    worst, worst_i = 0.0, -1
    for i, r in enumerate(pres.relators):
        d = evaluate_word(r, rep).distance(one)
        if d > worst:
            worst, worst_i = d, i
    if worst > tol:
        raise RelatorError(worst, worst_i)
    return worst


def fox_row(word: Word, rep: Sequence[GroupElement], num_generators: int) -> np.ndarray:
    """3 x 3n block row of Fox derivatives of ``word`` evaluated through ``Ad o rep``.

    For a cocycle ``z`` (values on generators stacked into a 3n vector) the
    value on ``word`` is ``fox_row(word) @ z``.
    """
    row = np.zeros((3, 3 * num_generators))
    prefix = GroupElement.identity()
    for g, e in word.letters:
        x = rep[g]
        if e > 0:
            p = prefix
            for _ in range(e):
                row[:, 3 * g:3 * g + 3] += adjoint_matrix(p)
                p = p * x
        else:
            xinv = x.inverse()
            p = prefix
            for _ in range(-e):
                p = p * xinv
                row[:, 3 * g:3 * g + 3] -= adjoint_matrix(p)
        prefix = prefix * x ** e
    return row


def fox_jacobian(pres: Presentation, rep: Sequence[GroupElement], tol: float = RELATOR_TOL) -> np.ndarray:
    """Stacked Fox derivatives: the coboundary ``C^1 -> C^2`` with su(2) coefficients."""
    if len(rep) != pres.num_generators:
        raise PresentationError(
            f"representation has {len(rep)} elements, presentation {pres.num_generators} generators")
    check_relators(pres, rep, tol)
    n = pres.num_generators
    if not pres.relators:
        return np.zeros((0, 3 * n))
    return np.vstack([fox_row(r, rep, n) for r in pres.relators])


def coboundary_zero(rep: Sequence[GroupElement]) -> np.ndarray:
    """``d^0: su(2) -> C^1``, ``xi -> (Ad(rho(g)) xi - xi)_g``."""
    return np.vstack([adjoint_matrix(g) - np.eye(3) for g in rep])
