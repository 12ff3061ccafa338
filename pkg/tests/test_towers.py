from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onerel.cayley import complex_ball
from onerel.complex import CWComplex2, full_subcomplex
from onerel.errors import DisconnectedComplement, RayInsideFiltration
from onerel.presentation import Abelianization, Presentation
from onerel.towers import (
    FoldedGraph,
    GroupHom,
    Tower,
    abelian_cokernel,
    ball_filtration,
    bond_surjective,
    inclusion_hom,
    pro_pi1,
    projection_evidence,
    ray_bases,
    semistability_report,
    telescopic_check,
)
from onerel.verdict import Verdict
from onerel.words import Word

from .helpers import pres, reduced_words

F1 = Presentation(("x",))
F2 = Presentation(("x", "y"))
F3 = Presentation(("x", "y", "z"))


def hom(src, tgt, *images):
    return GroupHom(src, tgt, tuple(tgt.word(w) if w != "1" else Word() for w in images))


def test_hom_basics():
    h = hom(F2, F1, "x", "x^2")
    assert list(h(F2.word("x y^-1"))) == [-1]
    g = hom(F1, F2, "x y")
    assert h.compose(g).images == (Word([1, 1, 1]),)
    assert h.abelian_matrix() == [[1], [2]]
    assert h.to_json() == {"x": "x", "y": "x^2"}
    with pytest.raises(ValueError):
        GroupHom(F2, F1, (Word([1]),))
    with pytest.raises(ValueError):
        GroupHom(F1, F1, (Word([2]),))


def test_hom_verify():
    assert hom(pres("<a; a^2>"), pres("<x; x^4>"), "x^2").verify() is Verdict.YES
    assert hom(pres("<a; a^2>"), F1, "x").verify() is Verdict.NO


def test_bond_surjective_examples():
    assert bond_surjective(hom(F2, F2, "x", "y")) is Verdict.YES
    assert bond_surjective(hom(F1, F1, "x^2")) is Verdict.NO
    assert abelian_cokernel(hom(F1, F1, "x^2")) == (0, (2,))
    assert bond_surjective(hom(F2, F1, "x", "1")) is Verdict.YES


def test_bond_surjective_by_folding():
    assert bond_surjective(hom(F2, F2, "x", "x y")) is Verdict.YES
    # abelianly onto, but y is not in <x, y x y x^-1 y^-1>
    h = hom(F2, F2, "x", "y x y x^-1 y^-1")
    assert abelian_cokernel(h) == (0, ())
    assert bond_surjective(h) is Verdict.NO


def test_folded_graph_membership():
    G = FoldedGraph([Word([1, 2]), Word([2])])
    assert G.accepts(Word([1])) and G.accepts(Word([2, 1, -2]))
    H = FoldedGraph([Word([1, 1])])
    assert H.accepts(Word([1, 1, 1, 1])) and not H.accepts(Word([1]))


@settings(max_examples=80, deadline=None)
@given(st.lists(reduced_words(2, 4).filter(len), min_size=1, max_size=3),
       st.lists(st.tuples(st.integers(0, 2), st.sampled_from((1, -1))), max_size=4))
def test_folded_graph_accepts_every_product(gens, picks):
    G = FoldedGraph(gens)
    w = Word()
    for k, e in picks:
        g = gens[k % len(gens)]
        w = w * (g if e > 0 else g.inverse())
    assert G.accepts(w)


def test_bond_surjective_with_relators():
    Z2 = pres("<a,b; a b a^-1 b^-1>")
    assert bond_surjective(hom(Z2, Z2, "b", "a")) is Verdict.YES
    assert bond_surjective(hom(Z2, Z2, "a", "a b^2")) is Verdict.NO


def test_projection_evidence():
    assert projection_evidence(hom(F3, F2, "x", "y", "1")) is Verdict.YES
    assert projection_evidence(hom(F2, F1, "x^2", "1")) is Verdict.NO


def test_tower_validation():
    with pytest.raises(ValueError):
        Tower((F1, F2), ())
    with pytest.raises(ValueError):
        Tower((F1, F2), (hom(F1, F2, "x"),))


def test_telescopic_fixture():
    T = Tower((F1, F2, F3), (hom(F2, F1, "x", "1"), hom(F3, F2, "x", "y", "1")))
    V = telescopic_check(T)
    assert V.telescopic_evidence is Verdict.YES
    assert [s.rank for s in V.stages] == [1, 2, 3]


def test_telescopic_non_examples():
    T = Tower((F1, F1), (hom(F1, F1, "x^2"),))
    V = telescopic_check(T)
    assert V.stages[1].bond_surjective is Verdict.NO
    assert V.telescopic_evidence is Verdict.NO
    torsion = pres("<x; x^2>")
    T = Tower((torsion, F1), (hom(F1, torsion, "x"),))
    assert telescopic_check(T).telescopic_evidence is Verdict.NO
    # rank drop: a surjection F2 -> F1 read upward is not telescopic
    T = Tower((F2, F1), (hom(F1, F2, "x"),))
    assert telescopic_check(T).telescopic_evidence is Verdict.NO
    with pytest.raises(ValueError):
        telescopic_check(Tower((F1,), ()))


def z2_tower(which="max"):
    P = pres("<a,b; a b a^-1 b^-1>")
    C, ball = complex_ball(P, 7)
    radii = [2, 3, 4, 5]
    F = ball_filtration(C, ball.vertices, radii)
    return C, F, pro_pi1(C, F, ray_bases(ball.vertices, radii, which))


def test_z2_tower_is_telescopic():
    C, F, T = z2_tower()
    assert len(T.groups) == len(F) == 4
    assert all(G.rank == 1 and not G.relators for G in T.groups)
    V = telescopic_check(T)
    assert V.telescopic_evidence is Verdict.YES
    assert all(s.free is Verdict.YES for s in V.stages)
    assert all(s.bond_surjective is Verdict.YES for s in V.stages[1:])


def test_bonds_compose_to_inclusion_abelianly():
    C, F, T = z2_tower()
    for i in range(len(T.groups) - 2):
        direct = inclusion_hom(C, T.stages[i + 2], T.stages[i])
        composed = T.bonds[i].compose(T.bonds[i + 1])
        ab = Abelianization(T.groups[i])
        assert [ab.image(w) for w in direct.images] == [ab.image(w) for w in composed.images]


def test_verdicts_agree_under_two_rays():
    _, _, Tmax = z2_tower("max")
    _, _, Tmin = z2_tower("min")
    assert Tmax.base_ray != Tmin.base_ray
    a, b = telescopic_check(Tmax), telescopic_check(Tmin)
    assert a.to_json() == b.to_json()


def test_tree_complements_are_trivial():
    path = CWComplex2(range(6), {k + 1: (k, k + 1) for k in range(5)}, {})
    F = [full_subcomplex(path, range(r + 1)) for r in (0, 1, 2)]
    T = pro_pi1(path, F, [1, 2, 3])
    assert all(G.rank == 0 and not G.relators for G in T.groups)


def test_free_group_ball_complement_splits_into_trivial_pieces():
    C, ball = complex_ball(pres("<a,b; >"), 4)
    F = ball_filtration(C, ball.vertices, [1, 2])
    with pytest.raises(DisconnectedComplement) as info:
        pro_pi1(C, F, ray_bases(ball.vertices, [1, 2]))
    assert info.value.components
    assert all(G.rank == 0 for G in info.value.components)


def test_pro_pi1_errors():
    C, F, _ = z2_tower()
    with pytest.raises(DisconnectedComplement):
        pro_pi1(C, [C.whole()], [0])
    with pytest.raises(RayInsideFiltration):
        pro_pi1(C, F[:1], [0])
    with pytest.raises(ValueError):
        pro_pi1(C, F, [0])


def test_semistability_examples():
    rep = semistability_report(pres("<a,b; a b a^-1 b^-1>"), [2, 3, 4, 5])
    assert rep.components == (1, 1, 1, 1)
    assert len(rep.chains) == 1
    assert all(v is Verdict.YES for v in rep.chains[0].bonds)

    rep = semistability_report(pres("<a,b; b>"), [2, 3, 4, 5])
    assert len(rep.chains) == 2
    assert all(r == 0 for c in rep.chains for r in c.ranks)
    assert all(c.semistable_evidence is Verdict.YES for c in rep.chains)

    rep = semistability_report(pres("<a,b; a^2>"), [2, 3, 4])
    assert rep.components == (6, 12, 24)
    assert len(rep.chains) == 24
    assert all(c.semistable_evidence is Verdict.YES for c in rep.chains)
    assert all(v is Verdict.YES for c in rep.chains for v in c.free)


def test_semistability_rejects_bad_radii():
    with pytest.raises(ValueError):
        semistability_report(pres("<a,b; b>"), [3, 2])


def test_z2_small_filtration_stages_are_free():
    C, ball = complex_ball(pres("<a,b; a b a^-1 b^-1>"), 6)
    radii = [1, 2, 3]
    T = pro_pi1(C, ball_filtration(C, ball.vertices, radii), ray_bases(ball.vertices, radii))
    V = telescopic_check(T)
    assert all(s.free is Verdict.YES for s in V.stages)
    assert all(s.bond_surjective is Verdict.YES for s in V.stages[1:])
