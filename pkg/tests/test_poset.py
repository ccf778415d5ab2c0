"""Poset nerves with functor coefficients and the circle's arc model."""

import json

import pytest

from hhx.catalog import (
    dual_numbers,
    exterior_line,
    gf4,
    ground,
    mat2,
    split_pair,
    split_triple,
)
from hhx.chains import ChainError, e_infinity, total_complex
from hhx.fields import GF, QQ
from hhx.loday import hh
from hhx.matrix import SMat
from hhx.poset import (
    Poset,
    PosetError,
    PosetFunctor,
    arc_chain_functor,
    arc_functor,
    constant_functor,
    cyclic_cech_poset,
    edge_map,
    nerve_complex,
    nerve_double_complex,
    poset_from_json,
    poset_homology,
    poset_to_json,
)
from hhx.simplicial import circle_min


def chain_poset(names):
    le = set()
    for i, a in enumerate(names):
        for b in names[i:]:
            le.add((a, b))
    return Poset(names, le, {nm: 1 for nm in names})


# ------------------------------------------------------- poset checks


def test_duplicate_objects():
    with pytest.raises(PosetError, match="duplicate"):
        Poset(["a", "a"], {("a", "a")}, {"a": 1})


def test_unknown_relation():
    with pytest.raises(PosetError, match="unknown"):
        Poset(["a"], {("a", "a"), ("a", "b")}, {"a": 1})


def test_reflexivity_required():
    with pytest.raises(PosetError, match="reflexive"):
        Poset(["a"], set(), {"a": 1})


def test_antisymmetry():
    le = {("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")}
    with pytest.raises(PosetError, match="antisymmetric"):
        Poset(["a", "b"], le, {"a": 1, "b": 1})


def test_transitivity():
    le = {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")}
    with pytest.raises(PosetError, match="transitive"):
        Poset(["a", "b", "c"], le, {"a": 1, "b": 1, "c": 1})


def test_missing_components():
    with pytest.raises(PosetError, match="component count"):
        Poset(["a"], {("a", "a")}, {})


def test_chains_and_covers():
    P = chain_poset(["a", "b", "c"])
    assert P.longest_chain() == 2
    assert P.chains(1) == [("a", "b"), ("a", "c"), ("b", "c")]
    assert P.covers == (("a", "b"), ("b", "c"))


def test_functoriality_violation_names_triple():
    P = chain_poset(["a", "b", "c"])
    one = QQ.one
    ident = SMat.from_entries(1, 1, QQ, [(0, 0, one)])
    doubled = SMat.from_entries(1, 1, QQ, [(0, 0, one + one)])
    spaces = {nm: [("e", 0)] for nm in P.objects}
    maps = {("a", "b"): ident, ("b", "c"): ident, ("a", "c"): doubled}
    with pytest.raises(PosetError, match="triple.*a.*b.*c"):
        PosetFunctor(P, QQ, spaces, maps).validate()


# --------------------------------------------------- the circle model


def test_small_m_rejected():
    with pytest.raises(PosetError, match="at least two"):
        cyclic_cech_poset(1)


def test_model_shape():
    P2 = cyclic_cech_poset(2)
    P3 = cyclic_cech_poset(3)
    assert len(P2.objects) == 16 and P2.window == 1
    assert len(P3.objects) == 45 and P3.window == 2
    assert P2.longest_chain() == 4
    assert P3.longest_chain() == 6


def test_maximal_objects_are_arcs():
    for m in (2, 3):
        P = cyclic_cech_poset(m)
        maximal = [
            x for x in P.objects if not any(P.less(x, y) for y in P.objects)
        ]
        assert len(maximal) == m + 1
        assert all(P.components[x] == 1 for x in maximal)


def test_every_object_below_an_arc():
    P = cyclic_cech_poset(2)
    maximal = {x for x in P.objects if not any(P.less(x, y) for y in P.objects)}
    for x in P.objects:
        assert x in maximal or any(P.less(x, u) for u in maximal)


def test_deterministic_object_order():
    assert cyclic_cech_poset(2).objects == cyclic_cech_poset(2).objects


# ----------------------------------------------------- nerve homology


def test_single_object_poset():
    P = Poset(["x"], {("x", "x")}, {"x": 1})
    F = constant_functor(P, QQ, dims_t=((0, 2),))
    assert poset_homology(P, F).entries == {(0, 0): 2}


def test_span_with_projections_vanishes():
    # two points under a plane: projecting to each coordinate leaves nothing
    le = {("c", "c"), ("a", "a"), ("b", "b"), ("c", "a"), ("c", "b")}
    P = Poset(["a", "b", "c"], le, {"a": 1, "b": 1, "c": 1})
    one = QQ.one
    spaces = {"a": [("e", 0)], "b": [("e", 0)], "c": [("u", 0), ("v", 0)]}
    pa = SMat.from_entries(1, 2, QQ, [(0, 0, one)])
    pb = SMat.from_entries(1, 2, QQ, [(0, 1, one)])
    F = PosetFunctor(P, QQ, spaces, {("c", "a"): pa, ("c", "b"): pb}).validate()
    assert poset_homology(P, F).entries == {}


def test_zero_functor():
    P = chain_poset(["a", "b"])
    zero = SMat(0, 0, QQ)
    F = PosetFunctor(P, QQ, {nm: [] for nm in P.objects}, {("a", "b"): zero})
    assert poset_homology(P, F).entries == {}


@pytest.mark.parametrize("m", [2, 3])
def test_constant_coefficients_acyclic(m):
    P = cyclic_cech_poset(m)
    table = poset_homology(P, constant_functor(P, QQ), min(m, 2))
    assert table.entries == {(0, 0): 1}


def test_nerve_trust_window():
    P = chain_poset(["a", "b"])
    F = constant_functor(P, QQ)
    C = nerve_complex(P, F)
    assert C.s_valid == 1
    with pytest.raises(ChainError, match="trusted only"):
        C.homology(2, provenance="poset")


# --------------------------------------------- agreement with circle


@pytest.mark.parametrize(
    "make",
    [ground, dual_numbers, split_pair, split_triple, gf4, exterior_line],
    ids=["Q", "dual", "QxQ", "Q3", "F4", "exterior"],
)
def test_m2_agrees_with_circle(make):
    A = make()
    P = cyclic_cech_poset(2)
    got = poset_homology(P, arc_functor(A, P), P.window).entries
    want = hh(A, circle_min(), 1).entries
    assert got == want


def test_m3_agrees_deeper():
    A = dual_numbers()
    P = cyclic_cech_poset(3)
    got = poset_homology(P, arc_functor(A, P), P.window).entries
    want = hh(A, circle_min(), 2).entries
    assert got == want


def test_etale_vanishing_above_zero():
    P = cyclic_cech_poset(2)
    for make in (split_pair, split_triple, gf4):
        A = make()
        table = poset_homology(P, arc_functor(A, P), P.window)
        assert all(s == 0 for s, _t in table.entries)


# ------------------------------------------------------------- edges


def test_edge_map_iso_matches_etale():
    P = cyclic_cech_poset(2)
    expect = {
        ground: True,
        dual_numbers: False,
        split_pair: True,
        split_triple: True,
        gf4: True,
        exterior_line: False,
    }
    for make, want in expect.items():
        F = arc_functor(make(), P)
        assert edge_map(P, F, "0").iso is want, make.__name__


def test_edge_map_unknown_object():
    P = cyclic_cech_poset(2)
    F = arc_functor(ground(), P)
    with pytest.raises(PosetError, match="not in the poset"):
        edge_map(P, F, "nowhere")


def test_edge_map_needs_single_component():
    P = cyclic_cech_poset(2)
    F = arc_functor(ground(), P)
    multi = next(x for x in P.objects if P.components[x] == 2)
    with pytest.raises(PosetError, match="single component"):
        edge_map(P, F, multi)


def test_edge_map_shape():
    P = cyclic_cech_poset(2)
    A = dual_numbers()
    em = edge_map(P, arc_functor(A, P), "0")
    assert em.src_dims == {0: 2} and em.h0_dims == {0: 2}


# ------------------------------------------------------ functor gates


def test_arc_functor_rejects_noncommutative():
    P = cyclic_cech_poset(2)
    with pytest.raises(PosetError, match="commutative"):
        arc_functor(mat2(), P)


def test_arc_functor_needs_labels():
    P = poset_from_json(poset_to_json(cyclic_cech_poset(2)))
    with pytest.raises(PosetError, match="component labels"):
        arc_functor(ground(), P)


def test_char_two_coefficients():
    P = cyclic_cech_poset(2)
    table = poset_homology(P, constant_functor(P, GF(2)), 1)
    assert table.entries == {(0, 0): 1}


# ---------------------------------------------------- chain functors


def test_chain_valued_pipeline():
    A = dual_numbers()
    P = cyclic_cech_poset(2)
    Fc = arc_chain_functor(A, P, 2)
    Fc.validate()
    D = nerve_double_complex(P, Fc)
    T = total_complex(D)
    got = T.homology(P.window, provenance="poset").entries
    assert got == hh(A, circle_min(), 1).entries


def test_chain_valued_converges():
    A = split_pair()
    P = cyclic_cech_poset(2)
    D = nerve_double_complex(P, arc_chain_functor(A, P, 2))
    T = total_complex(D)
    page, _r = e_infinity(D)
    sums = {}
    for (p, q, t), d in page.entries.items():
        sums[p + q] = sums.get(p + q, 0) + d
    tot = {}
    for (s, t), d in T.homology(T.s_valid, provenance="poset").entries.items():
        tot[s] = tot.get(s, 0) + d
    for n in range(min(page.n_valid, T.s_valid) + 1):
        assert sums.get(n, 0) == tot.get(n, 0)


# ------------------------------------------------------------- JSON


def test_json_round_trip():
    P = cyclic_cech_poset(2)
    blob = json.dumps(poset_to_json(P), sort_keys=True)
    Q = poset_from_json(json.loads(blob))
    assert Q.objects == P.objects
    assert Q.le == P.le
    assert Q.components == P.components


def test_json_closes_transitively():
    obj = {
        "objects": [
            {"name": "a", "components": 1},
            {"name": "b", "components": 1},
            {"name": "c", "components": 1},
        ],
        "relations": [["a", "b"], ["b", "c"]],
    }
    P = poset_from_json(obj)
    assert ("a", "c") in P.le


def test_homology_deterministic():
    P = cyclic_cech_poset(2)
    A = dual_numbers()
    a = poset_homology(P, arc_functor(A, P), 1).entries
    b = poset_homology(P, arc_functor(A, P), 1).entries
    assert repr(sorted(a.items())) == repr(sorted(b.items()))
