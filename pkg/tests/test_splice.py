from fractions import Fraction as F

import pytest

from su2splice.acceptance import (RHO0, X, Y, Z, local_link, rho0_node, sigma1_census,
                                  sigma2_census)
from su2splice.pillowcase import canonicalize
from su2splice.presentations import PLUS_ONE_GLUING, GluingMatrix
from su2splice.splice import (CIRCLE, INTERVAL, POINT, SO3, SPHERE2, ModelError, Piece,
                              assemble_components, census, classify_link, fiber_product,
                              gluing_parameter_space, sample_locus)
from su2splice.su2 import StabilizerType as S


@pytest.mark.parametrize("left,boundary,right,expected", [
    (S.CENTER, S.CIRCLE, S.CIRCLE, POINT),
    (S.CIRCLE, S.CIRCLE, S.CENTER, POINT),
    (S.CENTER, S.CIRCLE, S.CENTER, CIRCLE),
    (S.CIRCLE, S.CIRCLE, S.CIRCLE, POINT),
    (S.CENTER, S.FULL, S.CENTER, SO3),
    (S.FULL, S.FULL, S.FULL, POINT),
    (S.FULL, S.FULL, S.CENTER, POINT),
    (S.CIRCLE, S.FULL, S.CENTER, SPHERE2),
    (S.CIRCLE, S.FULL, S.CIRCLE, INTERVAL),
])
def test_gluing_parameter_table(left, boundary, right, expected):
    assert gluing_parameter_space(left, boundary, right) == expected


def test_gluing_parameter_containment():
    with pytest.raises(ModelError):
        gluing_parameter_space(S.FULL, S.CIRCLE, S.CENTER)


def test_piece_parsing():
    assert Piece.parse("3,5").summands == ((3, 5),)
    assert Piece.parse("-2,7,-2,7").label == "T(-2,7)#T(-2,7)"
    assert Piece.parse("u").summands == ()
    with pytest.raises(ValueError):
        Piece.parse("3,5,2")


def test_sigma1_local_loci():
    loci = fiber_product(X.strata(), Y.strata(), PLUS_ONE_GLUING, window=F(1, 14))
    assert [(l.locus, l.glue, l.reducible) for l in loci] == [
        (canonicalize(0, 0), POINT, True), (RHO0, POINT, False)]


def test_sigma2_half_abelian_segments():
    loci = fiber_product(X.strata(), Z.strata(), PLUS_ONE_GLUING)
    segs = [l for l in loci if not l.is_point and l.left.arcs[0].label == (1, 1)
            and l.right.n_irreducible == 1 and l.left_x[0] == F(1, 14)]
    assert len(segs) == 2
    for s in segs:
        assert s.glue == CIRCLE
        assert s.left_x == (F(1, 14), F(11, 15))
        assert s.locus.canonical_at(0) == RHO0
        assert s.open == (True, True)


def test_loci_lie_on_both_images():
    from su2splice.pillowcase import apply_gluing, contains
    for l in fiber_product(X.strata(), Y.strata(), PLUS_ONE_GLUING):
        probe = l.locus if l.is_point else l.locus.canonical_at(F(1, 2))
        assert contains(l.left.image, probe)
        assert contains(apply_gluing(PLUS_ONE_GLUING, l.right.image), probe)


def test_loci_are_disjoint():
    loci = fiber_product(X.strata(), Z.strata(), PLUS_ONE_GLUING)
    keys = [l.key for l in loci]
    assert len(keys) == len(set(keys))


def test_sigma1_singular_point_is_isolated():
    comps = assemble_components(fiber_product(X.strata(), Y.strata(), PLUS_ONE_GLUING))
    comp, i = rho0_node(comps)
    assert comp.topology == "point" and not comp.segments
    link = classify_link(comp, i)
    assert link.pieces == () and link.manifold


def test_transverse_irreducible_crossing_is_a_circle():
    report = sigma1_census()
    circles = report.by_topology("circle")
    assert circles
    for c in circles:
        (node,) = c.component.nodes
        assert not node.left.is_abelian and not node.right.is_abelian
        assert node.glue == CIRCLE
        assert classify_link(c.component, 0).pieces == ("point-pair",)


def test_zariski_examples():
    report = sigma1_census()
    (deg,) = [c for c in report.isolated_points(2) if c.component.nodes[0].locus == RHO0]
    assert deg.zariski == [2]
    assert all(c.zariski == [0] for c in report.isolated_points(0))
    s = report.by_topology("circle")[0].samples[0]
    assert s.zariski == 1 and s.mv.h1 == 1


def test_mv_and_direct_agree_on_every_sample():
    for rep in (sigma1_census(), sigma2_census()):
        for c in rep.components:
            assert len(c.samples) >= 1
            if c.component.dimension > 0:
                assert len(c.samples) >= 3
            for s in c.samples:
                assert s.direct == s.mv.h1


def test_sigma1_census_counts():
    counts = sigma1_census().counts()
    assert counts["isolated_points_by_zariski"] == {"0": 22, "2": 6}
    assert counts["non_manifold"] == 0
    assert counts["reducible_points"] == 1


def test_census_symmetry():
    swapped = census(Y, X, PLUS_ONE_GLUING.inverse())
    assert swapped.counts() == sigma1_census().counts()


def test_morse_bott_flags():
    report = sigma1_census()
    assert not any(c.morse_bott for c in report.isolated_points(2))
    assert all(c.morse_bott for c in report.by_topology("circle"))
    wedge = rho0_node([c.component for c in sigma2_census().components])[0]
    rep = next(c for c in sigma2_census().components if c.component is wedge)
    assert not rep.morse_bott


def test_sigma2_wedge():
    comp, i = rho0_node([c.component for c in sigma2_census().components])
    assert comp.topology == "wedge of two 2-spheres"
    assert len(comp.segments) == 2 and all(s.glue == CIRCLE for s in comp.segments)
    assert all(notes == ("collapse", "collapse") for notes in comp.end_notes.values())
    link = classify_link(comp, i)
    assert link.pieces == ("circle", "circle") and link.manifold is False
    # the far ends are manifold points of the spheres
    others = [classify_link(comp, j) for j in range(len(comp.nodes)) if j != i]
    assert all(l.pieces == ("circle",) and l.manifold for l in others)


def test_sigma2_non_manifold_components():
    bad = sigma2_census().non_manifold()
    assert any(rho0_node([c.component]) for c in bad)
    # further singular components exist away from the trivial character
    assert len(bad) == 5


def test_variant_links():
    link = local_link(Piece.parse("-2,7,-2,7,2,7"))
    assert sorted(link.pieces) == ["3-torus", "circle", "circle"] and link.manifold is False
    link3 = local_link(Piece.parse("-2,7,-2,7,-2,7,2,7"))
    assert sorted(link3.pieces) == ["3-torus"] * 3 + ["circle"] * 3 and link3.manifold is False


def test_unknot_splice_has_only_theta():
    report = census(X, Piece(()), GluingMatrix(0, 1, 1, 0))
    assert report.components == [] and len(report.reducible) == 1


def test_census_json_is_stable():
    a = sigma1_census().to_json()
    assert a["counts"]["components"] == len(a["components"])
    assert list(a) == ["left", "right", "gluing", "provisional", "counts", "components", "reducible"]


def test_sample_at_point_locus():
    loci = fiber_product(X.strata(), Y.strata(), PLUS_ONE_GLUING, window=F(1, 14))
    s = sample_locus(loci[1], PLUS_ONE_GLUING)
    assert (s.direct, s.mv.rank_difference_map) == (2, 2)


def test_classify_link_rejects_foreign_point():
    comp = assemble_components(fiber_product(X.strata(), Y.strata(), PLUS_ONE_GLUING))[0]
    with pytest.raises(KeyError):
        classify_link(comp, canonicalize(F(1, 3), F(1, 3)))
