from __future__ import annotations

import pytest
from hypothesis import given
from strategies import seeds

from awfslab.cli import CorpusConfig, agreement_corpus, frobenius_corpus, strong_corpus
from awfslab.core_cat import bz2, discrete, identity_functor, interval, is_isomorphism, point, terminal, to_terminal
from awfslab.frobenius import (
    CleavageIncompatible,
    beck_chevalley_check,
    filler_agreement,
    frobenius_equations,
    frobenius_preserves_composition,
    frobenius_preserves_squares,
    frobenius_structure,
    frobenius_transport,
    pushforward_structure,
    strong_frobenius_checks,
    transport_reflection,
)
from awfslab.lifting import ExtensionMismatch
from awfslab.squares import Square
from awfslab.structured import (
    CARTESIAN,
    COCARTESIAN,
    OrientationMismatch,
    Sliced,
    SplitFibration,
    identity_fibration,
    identity_reflection,
    make_reflection,
    product_fibration,
    pullback_square,
    terminal_fibration,
    validate_split_fibration,
    validate_split_reflection,
)
from awfslab.transport import NotAPullback

frobenius_cases = seeds.map(lambda s: frobenius_corpus(CorpusConfig(seed=s, cases=1))[0])


def two_sheets(orientation=COCARTESIAN):
    return product_fibration(bz2(), discrete(["0", "1"]), orientation)


def endpoint_over_point():
    """The reflection of the interval onto a, over the one object base."""
    I = interval()
    return Sliced(make_reflection(point(I, "a"), to_terminal(I), {"a": "1_a", "b": "ba"}), to_terminal(I))


# ------------------------------------------------------------ transport


def test_identity_reflection_transports_to_an_identity():
    P = two_sheets()
    out = frobenius_transport(P, Sliced(identity_reflection(bz2()), identity_functor(bz2())))
    sr = out.structure
    assert is_isomorphism(sr.section)
    assert all(sr.eta(o) == sr.big.id(o) for o in sr.big.objects)
    assert out.ext.target == P.total


def test_transport_over_point_is_the_product_reflection():
    P = terminal_fibration(discrete(["0", "1"]), COCARTESIAN)
    t = transport_reflection(P, endpoint_over_point())
    assert validate_split_reflection(t.reflection).ok
    assert len(t.reflection.big.objects) == 4
    assert len(t.reflection.small.objects) == 2
    # transport is trivial over a single object, so the push is the projection
    assert all(t.push.obj(o) == o[0] for o in t.reflection.big.objects)


def test_section_objects_are_fixed():
    P = two_sheets()
    assert frobenius_equations(P, Sliced(identity_reflection(bz2()), identity_functor(bz2()))).ok


def test_frobenius_structure_action_is_transport():
    P = two_sheets()
    refl = Sliced(identity_reflection(bz2()), identity_functor(bz2()))
    assert frobenius_structure(P).action(refl) == frobenius_transport(P, refl)


@given(frobenius_cases)
def test_transport_equations_hold(case):
    assert frobenius_equations(case.fibration, case.reflection).ok


@given(frobenius_cases)
def test_transport_preserves_squares(case):
    assert frobenius_preserves_squares(case.fibration, case.prime, case.reflection, case.square).ok


@given(frobenius_cases)
def test_transport_preserves_composites(case):
    assert frobenius_preserves_composition(case.fibration, case.first, case.reflection).ok


def test_transport_needs_an_opfibration():
    with pytest.raises(OrientationMismatch):
        frobenius_transport(two_sheets(CARTESIAN), Sliced(identity_reflection(bz2()), identity_functor(bz2())))


def test_extension_must_land_in_the_base():
    with pytest.raises(ExtensionMismatch):
        frobenius_transport(two_sheets(), endpoint_over_point())


def test_square_must_lie_over_the_base():
    case = frobenius_corpus(CorpusConfig(cases=1))[0]
    shifted = Sliced(case.prime.structure, identity_functor(case.prime.structure.big))
    with pytest.raises(ExtensionMismatch):
        frobenius_preserves_squares(case.fibration, shifted, case.reflection, case.square)


# --------------------------------------------------------- strong version


def interval_unit_counterexample():
    """The interval over a point, with the reflection onto b over the total."""
    I = interval()
    P = terminal_fibration(I, COCARTESIAN)
    onto_b = make_reflection(point(I, "b"), to_terminal(I), {"a": "ab", "b": "1_b"})
    return P, Sliced(onto_b, identity_functor(I))


def test_lifted_counit_holds_on_corpus():
    for case in strong_corpus(CorpusConfig(cases=20)):
        assert strong_frobenius_checks(case.fibration, over_base=case.over_base).ok


def test_lifted_counit_on_interval():
    P, refl = interval_unit_counterexample()
    over_point = Sliced(refl.structure, to_terminal(interval()))
    assert strong_frobenius_checks(P, over_base=[over_point]).ok


def test_lifted_unit_fails_on_interval():
    # transporting a along a -> b lands on b, but the retraction sends a to
    # the pair over the image of a, so the two objects differ
    P, refl = interval_unit_counterexample()
    report = strong_frobenius_checks(P, over_total=[refl])
    assert report.laws() == {"unit: transported object differs"}
    assert [v.witness for v in report.violations] == [(0, "a")]


def test_unit_reflection_must_be_over_the_total():
    with pytest.raises(ExtensionMismatch):
        strong_frobenius_checks(two_sheets(), over_total=[endpoint_over_point()])


# ------------------------------------------------------- Beck-Chevalley


def test_transport_commutes_with_pullback_on_bz2():
    P = two_sheets()
    Q, sq = pullback_square(P, point(bz2(), "*"))
    one = identity_functor(terminal())
    refls = [endpoint_over_point(), Sliced(identity_reflection(terminal()), one)]
    assert beck_chevalley_check(sq, Q, P, refls).ok


def test_square_changing_the_cleavage_is_refused():
    P = product_fibration(bz2(), bz2(), COCARTESIAN)
    diagonal = SplitFibration(P.p, COCARTESIAN, {key: (key[1], key[1]) for key in P.cleavage})
    assert validate_split_fibration(diagonal).ok
    sq = Square(diagonal.p, P.p, identity_functor(P.total), identity_functor(bz2()))
    with pytest.raises(CleavageIncompatible):
        beck_chevalley_check(sq, diagonal, P, [])


def test_non_pullback_is_refused():
    P = two_sheets()
    flat = identity_fibration(bz2(), COCARTESIAN)
    sq = Square(P.p, flat.p, P.p, identity_functor(bz2()))
    with pytest.raises(NotAPullback):
        beck_chevalley_check(sq, P, flat, [])


# --------------------------------------------------- pushforward structure


def test_pushforward_along_identity_keeps_the_fibration():
    g = product_fibration(bz2(), discrete(["x", "y"]))
    pushed = pushforward_structure(identity_fibration(bz2(), COCARTESIAN), g)
    sf = pushed.structure
    assert validate_split_fibration(sf).ok
    assert sf.orientation == g.orientation
    assert (len(sf.total.objects), len(sf.total.arrows)) == (len(g.total.objects), len(g.total.arrows))
    assert pushed.ext == identity_functor(bz2())


def test_fillers_agree_through_transposition():
    for case in agreement_corpus(CorpusConfig(cases=6)):
        direct, transposed = filler_agreement(case.fibration, case.family, case.reflection, case.top, case.bottom)
        assert direct == transposed
