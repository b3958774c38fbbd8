import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from su2splice.arcs import knot_strata, rep_at
from su2splice.presentations import (PLUS_ONE_GLUING, GluingMatrix, Presentation, PresentationError,
                                     RelatorError, Word, check_relators, connected_sum,
                                     coboundary_zero, first_homology, fox_jacobian,
                                     meridian_exponents, splice, torus_knot_presentation,
                                     unknot_presentation)
from su2splice.su2 import GroupElement, exp_axis

u, v = Word.gen(0), Word.gen(1)


@pytest.mark.parametrize("p,q,mn", [(2, 3, (1, -1)), (3, 5, (-1, 2)), (2, 7, (1, -3)), (-2, 7, (1, 3))])
def test_meridian_exponents(p, q, mn):
    m, n = meridian_exponents(p, q)
    assert (m, n) == mn
    assert m * q + n * p == 1


def test_torus_knot_words():
    k = torus_knot_presentation(3, 5)
    assert k.relators == (u ** 3 * (v ** 5).inverse(),)
    mu = u ** -1 * v ** 2
    assert k.meridian == mu
    assert k.longitude == u ** 3 * mu ** -15
    km = torus_knot_presentation(-2, 7)
    assert km.relators[0] == u ** -2 * (v ** 7).inverse()
    # longitude is null-homologous: killing it leaves H_1 = Z
    assert first_homology(Presentation(2, km.relators + (km.longitude,))) == [0]


def test_torus_knot_rejects_non_coprime():
    with pytest.raises(PresentationError):
        torus_knot_presentation(3, 6)


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (2, 7), (-2, 7), (5, 7)])
def test_knot_homology_is_z(p, q):
    assert first_homology(torus_knot_presentation(p, q)) == [0]


def test_snf_torsion():
    assert first_homology(Presentation(1, (Word.gen(0, 5),))) == [5]
    assert first_homology(Presentation(2, ())) == [0, 0]
    assert first_homology(Presentation(2, (u ** 2 * v ** 4, u ** 2))) == [2, 4]


def test_connected_sums():
    z = connected_sum(torus_knot_presentation(-2, 7), torus_knot_presentation(-2, 7))
    assert (z.num_generators, len(z.relators)) == (4, 3)
    k1 = torus_knot_presentation(-2, 7)
    assert z.longitude == k1.longitude * k1.longitude.shift(2)
    assert first_homology(z) == [0]
    big = z
    for p, q in ((-2, 7), (2, 7)):
        big = connected_sum(big, torus_knot_presentation(p, q))
    assert big.num_generators == 8 and first_homology(big) == [0]
    with_u = connected_sum(torus_knot_presentation(3, 5), unknot_presentation())
    assert first_homology(with_u) == [0]


def test_connected_sum_needs_peripheral_data():
    with pytest.raises(PresentationError):
        connected_sum(Presentation(1, ()), torus_knot_presentation(2, 3))


def test_homology_spheres():
    x = torus_knot_presentation(3, 5)
    z = connected_sum(torus_knot_presentation(-2, 7), torus_knot_presentation(-2, 7))
    assert first_homology(splice(x, torus_knot_presentation(2, 7), PLUS_ONE_GLUING)) == []
    assert first_homology(splice(x, z, PLUS_ONE_GLUING)) == []
    assert first_homology(splice(x, unknot_presentation(), GluingMatrix(0, 1, 1, 0))) == []


def test_gluing_matrix():
    assert (PLUS_ONE_GLUING @ PLUS_ONE_GLUING).as_tuple() == (1, 0, 0, 1)
    assert PLUS_ONE_GLUING.inverse() == PLUS_ONE_GLUING
    with pytest.raises(PresentationError):
        GluingMatrix(2, 0, 0, 1)
    h = GluingMatrix(2, 1, 1, 1)
    assert (h @ h.inverse()).as_tuple() == (1, 0, 0, 1)


def test_json_roundtrip():
    pres = splice(torus_knot_presentation(3, 5), torus_knot_presentation(2, 7), PLUS_ONE_GLUING)
    assert Presentation.loads(pres.dumps()) == pres
    k = torus_knot_presentation(3, 5)
    assert Presentation.from_json(k.to_json()) == k


letters = st.lists(st.tuples(st.integers(0, 2), st.integers(-3, 3).filter(bool)), max_size=8)


@given(letters, letters, letters)
def test_word_group_laws(a, b, c):
    x, y, z = Word(tuple(a)), Word(tuple(b)), Word(tuple(c))
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == Word(())
    assert (x * y).inverse() == y.inverse() * x.inverse()
    assert all(e != 0 for _, e in x.letters)
    assert all(g1 != g2 for (g1, _), (g2, _) in zip(x.letters, x.letters[1:]))


def test_fox_trivial_rep_blocks():
    k = torus_knot_presentation(2, 3)
    jac = fox_jacobian(k, [GroupElement.identity()] * 2)
    assert np.allclose(jac, np.hstack([2 * np.eye(3), -3 * np.eye(3)]))
    assert np.linalg.matrix_rank(jac) == 3


def test_relator_check_reports_deviation():
    k = torus_knot_presentation(3, 5)
    with pytest.raises(RelatorError) as info:
        check_relators(k, [exp_axis((1.0, 0.0, 0.0), 0.1), GroupElement.identity()])
    assert info.value.deviation > 0.1


@pytest.mark.parametrize("p,q", [(3, 5), (2, 7), (-2, 7)])
def test_fox_identity_kills_coboundaries(p, q):
    # J . d0 = 0: principal derivations are cocycles
    for stratum in knot_strata(p, q):
        x0, x1 = stratum.x_range
        rep = rep_at(stratum, (x0 + x1) / 2).representation
        jac = fox_jacobian(torus_knot_presentation(p, q), rep)
        assert np.abs(jac @ coboundary_zero(rep)).max() < 1e-9
