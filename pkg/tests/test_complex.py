from __future__ import annotations

import json
import random

import pytest
from onerel.complex import (
    CWComplex2,
    EdgeSite,
    FaceSite,
    Subcomplex,
    TreeSet,
    check_filtration,
    closure,
    complement,
    euler_characteristic,
    full_subcomplex,
    fundamental_presentation,
    homology,
    intersection_components,
    internal_collapse,
    internal_expansion,
    is_simply_connected_bounded,
    reroute_trees,
    standard_complex,
)
from onerel.errors import (
    Disconnected,
    InvalidComplex,
    InvalidFiltration,
    InvalidSite,
    NotATree,
    NotFreeFace,
)
from onerel.presentation import abelian_invariants
from onerel.tietze import simplify
from onerel.verdict import Verdict
from onerel.words import Word, canonical_cyclic

from .helpers import gap_fixture, grid, oracle_betti, pres, random_move, u_fixture

DIGON = CWComplex2({0, 1}, {1: (0, 1), 2: (0, 1)}, {1: (1, -2)})
CIRCLE = CWComplex2({0}, {1: (0, 0)}, {})


def test_validation():
    with pytest.raises(InvalidComplex):
        CWComplex2({0}, {1: (0, 1)}, {})
    with pytest.raises(InvalidComplex):
        CWComplex2({0, 1}, {1: (0, 1)}, {1: (1,)})
    with pytest.raises(InvalidComplex):
        CWComplex2({0}, {1: (0, 0)}, {1: (2,)})


def test_standard_complex_examples():
    K = standard_complex(pres("<a,b; a^2>"))
    assert K.counts() == (1, 2, 1)
    assert K.faces[1] == (1, 1)
    assert euler_characteristic(K) == 0
    assert standard_complex(pres("<a; >")).counts() == (1, 1, 0)
    P = pres("<a,b,c; a b, c^3, [a,c]>")
    assert euler_characteristic(standard_complex(P)) == 1 - 3 + 3


def test_standard_complex_spells_q_s_times():
    P = pres("<a,b; (a b^-1)^3>")
    K = standard_complex(P)
    assert list(K.faces[1]) == [1, -2] * 3


def test_json_round_trip_and_dot():
    K = grid(3, 2)
    data = json.loads(json.dumps(K.to_json()))
    assert CWComplex2.from_json(data) == K
    dot = standard_complex(pres("<a,b; a^2>")).to_dot({1: "a", 2: "b"})
    assert "graph" in dot and 'label="a"' in dot


def test_subcomplex_operations():
    K = grid(3, 3)
    S = full_subcomplex(K, {0, 1, 3, 4})
    assert len(S.faces) == 1 and len(S.edges) == 4
    S.check(K)
    assert S <= K.whole()
    assert closure(K, faces=[1]) == S
    R = complement(K, S)
    assert 4 in R.vertices and 0 not in R.vertices
    with pytest.raises(InvalidFiltration):
        Subcomplex({0}, {1}, set()).check(K)


def test_homology_examples():
    assert homology(standard_complex(pres("<a,b; a^2>"))).betti == (1, 1, 0)
    assert homology(standard_complex(pres("<a,b; a^2>"))).torsion == (2,)
    assert homology(standard_complex(pres("<a,b; [a,b]>"))).betti == (1, 2, 1)
    assert homology(DIGON).betti == (1, 0, 0)


def test_fundamental_presentation_examples():
    P = fundamental_presentation(CIRCLE)
    assert P.rank == 1 and P.relators == ()
    Q = fundamental_presentation(standard_complex(pres("<a,b; a b a^-1 b^-1>")))
    assert Q.rank == 2
    assert canonical_cyclic(Q.relators[0]) == canonical_cyclic(Word([1, 2, -1, -2]))
    assert simplify(fundamental_presentation(DIGON)).is_trivial_group
    with pytest.raises(Disconnected):
        fundamental_presentation(CWComplex2({0, 1}, {}, {}))


@pytest.mark.parametrize("text", ["<a,b; a^2>", "<a,b; a^2 b^-3>", "<a,b,c; [a,b] c^2>",
                                  "<a,b; a^-1 b a^-1 b^-1 a>"])
def test_fundamental_presentation_of_standard_complex(text):
    P = pres(text)
    Q = fundamental_presentation(standard_complex(P))
    assert abelian_invariants(Q) == abelian_invariants(P)
    assert Q.relators == P.relators


def test_fundamental_presentation_of_grid_is_trivial():
    P = fundamental_presentation(grid(4, 3))
    assert P.rank == 6 and len(P.relators) == 6
    assert simplify(P).is_trivial_group


def test_simply_connected_examples():
    assert is_simply_connected_bounded(DIGON) is Verdict.YES
    assert is_simply_connected_bounded(CIRCLE) is Verdict.NO
    # balanced presentation with trivial abelianization; no generator occurs
    # once, so nothing simplifies within a zero budget
    B = standard_complex(pres("<a,b; a^-1 b^2 a b^-3, b^-1 a^2 b a^-3>"))
    assert is_simply_connected_bounded(B, budget=0) is Verdict.UNKNOWN


def test_collapse_digon_to_point():
    D1 = internal_collapse(DIGON, 1, 2)
    assert D1.counts() == (2, 1, 0)
    D0 = internal_collapse(D1, 1, 1, dim=1)
    assert D0.counts() == (1, 0, 0)


def test_collapse_reroutes_other_faces():
    # two squares sharing edge 3; collapsing square 1 through its outer edge
    K = grid(3, 2)
    outer = K.faces[1][0]
    L = internal_collapse(K, 1, abs(outer))
    assert euler_characteristic(L) == euler_characteristic(K)
    assert oracle_betti(L) == oracle_betti(K)


def test_collapse_subdivided_edge_in_standard_complex():
    K = standard_complex(pres("<a,b; a^2>"))
    X, pair = internal_expansion(K, EdgeSite(0, {(1, "head")}))
    assert X.counts() == (2, 3, 1)
    assert euler_characteristic(X) == euler_characteristic(K)
    Y = internal_collapse(X, pair.e, pair.d, pair.dim)
    assert Y == K


def test_collapse_errors():
    K = standard_complex(pres("<a,b; a^2>"))
    with pytest.raises(NotFreeFace):
        internal_collapse(K, 1, 1)
    with pytest.raises(NotFreeFace):
        internal_collapse(K, 1, 0, dim=1)
    with pytest.raises(NotFreeFace):
        internal_collapse(K, 9, 1)


def test_face_expansion_round_trip():
    K = standard_complex(pres("<a,b; a b a^-1 b^-1>"))
    X, pair = internal_expansion(K, FaceSite((1, 2), ((1, 0),)))
    assert X.counts() == (1, 3, 2)
    assert internal_collapse(X, pair.e, pair.d, pair.dim) == K


def test_expansion_errors():
    K = standard_complex(pres("<a,b; a b>"))
    with pytest.raises(InvalidSite):
        internal_expansion(K, EdgeSite(5))
    with pytest.raises(InvalidSite):
        internal_expansion(K, FaceSite(()))
    with pytest.raises(InvalidSite):
        internal_expansion(K, FaceSite((1,), ((1, 1),)))


def test_random_moves_preserve_invariants():
    rng = random.Random(3)
    for trial in range(30):
        C = grid(3, 3) if trial % 2 else standard_complex(pres("<a,b; a^2 b^-3>"))
        chi, betti, hom = euler_characteristic(C), oracle_betti(C), homology(C)
        for _ in range(6):
            C = random_move(C, rng)
            assert euler_characteristic(C) == chi
            assert homology(C) == hom
        assert oracle_betti(C) == betti


def test_random_expansion_then_collapse_is_identity():
    rng = random.Random(11)
    for _ in range(40):
        C = grid(3, 3)
        for _ in range(3):
            C = random_move(C, rng)
        v = rng.choice(sorted(C.vertices))
        ends = [(e, s) for e, (t, h) in C.edges.items() for s, x in (("tail", t), ("head", h))
                if x == v]
        X, pair = internal_expansion(C, EdgeSite(v, {x for x in ends if rng.random() < 0.5}))
        assert internal_collapse(X, pair.e, pair.d, pair.dim) == C


# rerouting


def test_reroute_fixture_has_two_components_before():
    K, F, trees = u_fixture()
    assert intersection_components(K, F[0], trees.trees[0]) == 2


def test_reroute_connects_intersections():
    K, F, trees = u_fixture()
    res = reroute_trees(K, F, trees)
    X, F2, T2 = res
    T2.check(X)
    check_filtration(X, F2)
    for S in F2:
        for T in T2:
            assert intersection_components(X, S, T) <= 1
    # the two pieces meet inside C2, so the output starts from C2 unchanged
    assert res.source_index == (1,)
    assert res.complex == K


def test_reroute_with_bridges_and_splits():
    K, F, trees = gap_fixture()
    assert intersection_components(K, F[0], trees.trees[0]) == 2
    res = reroute_trees(K, F, trees)
    X, F2, T2 = res
    T2.check(X)
    check_filtration(X, F2)
    assert len(F2) == 2
    for S in F2:
        for T in T2:
            assert intersection_components(X, S, T) <= 1
    assert res.moves
    assert euler_characteristic(X) == euler_characteristic(K)
    assert oracle_betti(X) == oracle_betti(K)


def test_reroute_no_offence_is_identity():
    K = grid(3, 3)
    F = [full_subcomplex(K, {0, 1, 3, 4}), K.whole()]
    T = TreeSet((full_subcomplex(K, {0, 1, 2}),))
    res = reroute_trees(K, F, T)
    assert res.complex == K
    assert res.filtration == tuple(F)
    assert res.moves == ()


def test_reroute_random_grids():
    for trial in range(40):
        rng = random.Random(trial)
        C = grid(4, 4)
        order = sorted(C.vertices, key=lambda v: rng.random())
        cuts = sorted(rng.sample(range(1, len(order) + 1), 3))
        F = [full_subcomplex(C, order[:c]) for c in cuts]
        used: set = set()
        trees = []
        for _ in range(rng.randint(1, 3)):
            v = rng.choice(sorted(C.vertices))
            tv, te = {v}, set()
            for _ in range(rng.randint(0, 6)):
                cand = [e for e, (t, h) in C.edges.items()
                        if e not in used and ((t in tv) != (h in tv))]
                if not cand:
                    break
                e = rng.choice(cand)
                te.add(e)
                used.add(e)
                tv |= set(C.edges[e])
            trees.append(Subcomplex(tv, te))
        X, F2, T2 = reroute_trees(C, F, trees)
        T2.check(X)
        check_filtration(X, F2)
        assert euler_characteristic(X) == euler_characteristic(C)
        for S in F2:
            for T in T2:
                assert intersection_components(X, S, T) <= 1


def test_reroute_errors():
    K = grid(3, 3)
    with pytest.raises(InvalidFiltration):
        reroute_trees(K, [K.whole(), full_subcomplex(K, {0})], [full_subcomplex(K, {0})])
    with pytest.raises(NotATree):
        reroute_trees(K, [K.whole()], [full_subcomplex(K, {0, 1, 3, 4})])
    with pytest.raises(NotATree):
        T = full_subcomplex(K, {0, 1})
        reroute_trees(K, [K.whole()], [T, T])
