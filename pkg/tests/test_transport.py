from __future__ import annotations

import pytest
from hypothesis import assume, given
from oracles import count_sections, hom_count, pullback_counts
from strategies import fibrations

from awfslab.cli import pi_point_count_fixture, twisted_counit_adjunction
from awfslab.core_cat import (
    Functor,
    arrow_category,
    bz2,
    compose_functors,
    discrete,
    identity_functor,
    is_isomorphism,
    point,
    terminal,
    to_terminal,
)
from awfslab.squares import SliceMorphism, Square, check_triangles, slice_morphism_compose
from awfslab.structured import (
    COCARTESIAN,
    NotAGroupoid,
    identity_fibration,
    product_fibration,
    pullback_square,
    validate_split_fibration,
)
from awfslab.transport import (
    NotAPullback,
    adjunction_check,
    is_pullback_square,
    mate_alpha,
    mate_beta,
    over_functors,
    pullback_arrows,
    pullback_object,
    pushforward_adjunction,
    pushforward_category,
    pushforward_object,
    validate_pushforward,
)


def two_point_swap():
    D2 = discrete(["0", "1"])
    return D2, Functor(D2, D2, {"0": "1", "1": "0"}, {"1_0": "1_1", "1_1": "1_0"})


def bz2_pullback():
    """BZ2 x {0,1} over BZ2, pulled back along the point of BZ2."""
    P = product_fibration(bz2(), discrete(["0", "1"]), COCARTESIAN)
    Q, sq = pullback_square(P, point(bz2(), "*"))
    return P, Q, sq


# ------------------------------------------------------------ pullback


def test_pullback_object_sizes_match_oracle():
    P = product_fibration(bz2(), discrete(["0", "1"]))
    y = point(bz2(), "*")
    proj = pullback_object(P.p, y)
    assert (len(proj.source.objects), len(proj.source.arrows)) == pullback_counts(P.p, y)
    assert proj.target == P.total


def test_pullback_arrows_preserve_identities_and_composites():
    D2, swap = two_point_swap()
    x = to_terminal(D2)
    f = identity_functor(terminal())
    once = pullback_arrows(f, SliceMorphism(swap, x))
    twice = pullback_arrows(f, slice_morphism_compose(SliceMorphism(swap, x), SliceMorphism(swap, x)))
    assert twice.f == compose_functors(once.f, once.f)
    ident = pullback_arrows(f, SliceMorphism(identity_functor(D2), x)).f
    assert ident == identity_functor(ident.source)


@given(fibrations(max_fiber=2))
def test_pullback_sizes_agree_with_brute_force(sf):
    y = sf.p
    proj = pullback_object(sf.p, y)
    assert (len(proj.source.objects), len(proj.source.arrows)) == pullback_counts(sf.p, y)


# --------------------------------------------------------- pushforward


def test_pushforward_counts_choices_in_each_fibre():
    # one object per pair (choice in a 2-fibre, choice in a 3-fibre)
    T, S = pi_point_count_fixture()
    C, pushed = pushforward_object(T.fibration, S.fibration)
    assert len(C.objects) == count_sections(S.p) == 6
    assert len(C.arrows) == 6
    assert C.is_groupoid
    assert validate_split_fibration(pushed).ok


def test_pushforward_along_identity_is_an_isomorphism():
    pf = pushforward_category(identity_fibration(bz2()), identity_functor(bz2()))
    assert is_isomorphism(pf.projection)
    assert (len(pf.category.objects), len(pf.category.arrows)) == (1, 2)


def test_pushforward_needs_groupoids():
    C = arrow_category()
    with pytest.raises(NotAGroupoid):
        pushforward_category(identity_fibration(C), identity_functor(C))


@given(fibrations(groupoid_base=True, max_fiber=2))
def test_pushforward_of_a_trivial_family_is_a_split_fibration(sf):
    assume(sf.total.is_groupoid)
    assume(len(sf.total.arrows) <= 12)
    assert validate_pushforward(sf, identity_fibration(sf.total)).ok


# ---------------------------------------------------------- adjunction


def test_adjunction_on_point_count_fixture():
    T, S = pi_point_count_fixture()
    witness, report = adjunction_check(
        T.fibration, ys=[identity_functor(terminal())], xs=[S.p, identity_functor(T.total)]
    )
    assert report.ok
    assert witness.pairs_checked == 2


def test_adjunction_along_identity():
    _, report = adjunction_check(identity_fibration(bz2()))
    assert report.ok


def test_adjunction_on_bz2_product():
    _, report = adjunction_check(product_fibration(bz2(), bz2()))
    assert report.ok


@pytest.mark.parametrize("case", ["point count", "bz2 product"])
def test_hom_sets_agree_with_brute_force(case):
    if case == "point count":
        T, S = pi_point_count_fixture()
        f, y, x = T.fibration, identity_functor(terminal()), S.p
    else:
        f = product_fibration(bz2(), discrete(["0", "1"]))
        y, x = identity_functor(bz2()), identity_functor(f.total)
    adj = pushforward_adjunction(f)
    fy, gx = adj.left_obj(y), adj.right_obj(x)
    assert len(over_functors(fy, x)) == hom_count(fy, x)
    assert len(over_functors(y, gx)) == hom_count(y, gx)
    assert hom_count(fy, x) == hom_count(y, gx)


def test_twisted_counit_breaks_a_triangle():
    adj, x = twisted_counit_adjunction(product_fibration(bz2(), discrete(["0", "1"])))
    assert check_triangles(adj, [], [x])


# --------------------------------------------------------------- mates


def test_product_square_is_a_pullback():
    _, _, sq = bz2_pullback()
    assert sq.commutes()
    assert is_pullback_square(sq)


def test_mate_components_are_invertible():
    P, Q, sq = bz2_pullback()
    m = SliceMorphism(identity_functor(P.total), identity_functor(P.total))
    comp = mate_beta(sq, Q, P, m)
    assert is_isomorphism(comp.top) and is_isomorphism(comp.bottom)
    one = identity_functor(terminal())
    comp = mate_alpha(sq, SliceMorphism(one, one))
    assert is_isomorphism(comp.top) and is_isomorphism(comp.bottom)


@pytest.mark.parametrize("method", ["pasted", "stepwise"])
def test_mate_routes_agree(method):
    P, Q, sq = bz2_pullback()
    _, swap = two_point_swap()
    E = P.total
    flip = Functor(
        E,
        E,
        {(b, d): (b, swap.obj(d)) for b, d in E.objects},
        {(g, k): (g, swap.arr(k)) for g, k in E.arrows},
    )
    m = SliceMorphism(flip, identity_functor(E))
    direct = mate_beta(sq, Q, P, m)
    other = mate_beta(sq, Q, P, m, method)
    assert other.top == direct.top and other.bottom == direct.bottom


def test_mate_refuses_a_non_pullback():
    P = product_fibration(bz2(), discrete(["0", "1"]), COCARTESIAN)
    flat = identity_fibration(bz2(), COCARTESIAN)
    sq = Square(P.p, flat.p, P.p, identity_functor(bz2()))
    assert sq.commutes()
    assert not is_pullback_square(sq)
    with pytest.raises(NotAPullback):
        mate_beta(sq, P, flat, SliceMorphism(identity_functor(bz2()), identity_functor(bz2())))
