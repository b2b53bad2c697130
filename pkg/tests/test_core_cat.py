from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import all_functors, pullback_counts
from strategies import categories, groupoids, seeds

from awfslab.cli import broken_bz2, gen_category, random_functor
from awfslab.core_cat import (
    BoundaryMismatch,
    Functor,
    MalformedTable,
    bz2,
    category,
    chain,
    compose_functors,
    connected_components,
    constant_functor,
    discrete,
    disjoint_union,
    identity_functor,
    interval,
    inverse_functor,
    is_isomorphism,
    pair_functor,
    product,
    pullback_category,
    search_functors,
    terminal,
    to_terminal,
    validate_category,
    validate_functor,
)


def test_terminal_and_bz2_are_valid():
    assert validate_category(terminal()).ok
    assert validate_category(bz2()).ok
    assert validate_category(interval()).ok


def test_rebinding_s_s_to_s_breaks_the_inverse_law():
    report = validate_category(broken_bz2())
    assert not report.ok
    assert any("inverse" in law for law in report.laws())
    # the mutated table is the two element monoid, so associativity survives
    assert not any("associativ" in law for law in report.laws())


def test_unknown_name_is_malformed():
    C = category(["*"], [("e", "*", "*"), ("f", "*", "nowhere")], {"*": "e"}, [("e", "e", "e")])
    with pytest.raises(MalformedTable):
        validate_category(C)


def test_identity_is_neutral_for_composition():
    F = Functor(interval(), bz2(), {"a": "*", "b": "*"}, {"1_a": "e", "1_b": "e", "ab": "s", "ba": "s"})
    assert compose_functors(identity_functor(bz2()), F) == F
    assert compose_functors(F, identity_functor(interval())) == F


def test_interval_to_bz2_chain_is_computed_pointwise():
    F = Functor(interval(), bz2(), {"a": "*", "b": "*"}, {"1_a": "e", "1_b": "e", "ab": "s", "ba": "s"})
    kill = Functor(bz2(), bz2(), {"*": "*"}, {"e": "e", "s": "e"})
    GF = compose_functors(kill, F)
    assert validate_functor(GF).ok
    assert GF.morphism_map == {m: kill.arr(F.arr(m)) for m in interval().morphisms}
    assert set(GF.morphism_map.values()) == {"e"}
    assert chain(kill, kill, F) == GF


def test_mismatched_composition_is_rejected():
    F = identity_functor(bz2())
    with pytest.raises(BoundaryMismatch):
        compose_functors(F, identity_functor(interval()))


def test_pullback_along_identity_is_a_copy():
    f = to_terminal(interval())
    P, pa, pc = pullback_category(identity_functor(terminal()), f)
    assert is_isomorphism(pc)
    assert len(P.objects) == 2


def test_product_of_discrete_categories_has_six_objects():
    P, _, _ = product(discrete(["0", "1"]), discrete(["x", "y", "z"]))
    assert len(P.objects) == 6
    assert validate_category(P).ok


def test_interval_pulled_back_along_identities_is_the_diagonal():
    I = identity_functor(interval())
    P, pa, pc = pullback_category(I, I)
    assert (len(P.objects), len(P.morphisms)) == (2, 4)
    assert all(a == c for a, c in P.objects)


def test_constant_and_inverse_functors():
    c = constant_functor(interval(), bz2(), "*")
    assert validate_functor(c).ok
    swap = Functor(interval(), interval(), {"a": "b", "b": "a"}, {"1_a": "1_b", "1_b": "1_a", "ab": "ba", "ba": "ab"})
    assert compose_functors(inverse_functor(swap), swap) == identity_functor(interval())


def test_components_of_a_disjoint_union():
    U = disjoint_union([bz2(), interval(), terminal()])
    parts = connected_components(U)
    assert sorted(len(p.objects) for p in parts) == [1, 1, 2]


@given(categories)
def test_generated_categories_validate(C):
    assert validate_category(C).ok


@given(groupoids)
def test_generated_groupoids_have_inverses(G):
    assert G.is_groupoid
    assert validate_category(G).ok


@given(seeds)
def test_search_agrees_with_brute_force(seed):
    import random

    rng = random.Random(seed)
    S, T = gen_category(rng, 2), gen_category(rng, 2)
    if len(S.morphisms) > 6 or len(T.morphisms) > 8:
        return
    found = list(search_functors(S, T))
    expected = all_functors(S, T)
    assert len(found) == len(expected)
    assert all(F in expected for F in found)
    assert all(validate_functor(F).ok for F in found)


@given(seeds)
def test_composition_is_associative(seed):
    import random

    rng = random.Random(seed)
    A, B, C, D = (gen_category(rng, 2) for _ in range(4))
    f, g, h = random_functor(rng, A, B), random_functor(rng, B, C), random_functor(rng, C, D)
    assert compose_functors(h, compose_functors(g, f)) == compose_functors(compose_functors(h, g), f)


@given(seeds)
def test_pullback_matches_pair_enumeration(seed):
    import random

    rng = random.Random(seed)
    A, B, C = (gen_category(rng, 2) for _ in range(3))
    f, g = random_functor(rng, A, B), random_functor(rng, C, B)
    P, pa, pc = pullback_category(f, g)
    assert (len(P.objects), len(P.morphisms)) == pullback_counts(f, g)
    assert validate_category(P).ok
    assert compose_functors(f, pa) == compose_functors(g, pc)
    assert pair_functor(P, pa, pc) == identity_functor(P)


@given(categories, st.randoms(use_true_random=False))
def test_random_search_finds_valid_functors(C, rng):
    F = random_functor(rng, C, C)
    assert F is not None and validate_functor(F).ok
