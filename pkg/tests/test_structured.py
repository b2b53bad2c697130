from __future__ import annotations

import random

import pytest
from hypothesis import given
from strategies import fibrations, reflections, seeds

from awfslab.cli import break_identity_lift, free_reflection, gen_category, gen_fibration, gen_groupoid
from awfslab.core_cat import (
    BoundaryMismatch,
    arrow_category,
    bz2,
    discrete,
    identity_functor,
    interval,
    point,
    terminal,
)
from awfslab.squares import Square
from awfslab.structured import (
    CARTESIAN,
    COCARTESIAN,
    FIBRATION,
    REFLECTION,
    KindMismatch,
    MalformedCleavage,
    NotAGroupoid,
    OrientationMismatch,
    SplitFibration,
    StructuredSquare,
    check_structured_square,
    compose_split_fibrations,
    compose_split_reflections,
    fibration_opfibration_convert,
    identity_fibration,
    identity_reflection,
    is_universal_lift,
    product_fibration,
    pullback_square,
    pullback_split_fibration,
    terminal_fibration,
    validate_split_fibration,
    validate_split_reflection,
)


def two_by_bz2():
    """discrete{0,1} x BZ2 -> BZ2 with the product cleavage."""
    return product_fibration(bz2(), discrete(["0", "1"]))


def test_identity_reflection_is_valid():
    assert validate_split_reflection(identity_reflection(interval())).ok


def test_product_projection_is_a_split_fibration():
    sf = two_by_bz2()
    assert validate_split_fibration(sf).ok
    assert all(is_universal_lift(sf, l) for l in sf.cleavage.values())


def test_rebinding_an_identity_lift_breaks_the_splitting():
    broken = break_identity_lift(product_fibration(bz2(), bz2()))
    report = validate_split_fibration(broken)
    assert "splitting: identity not lifted to identity" in report.laws()


def test_missing_lift_is_malformed():
    sf = two_by_bz2()
    cleavage = dict(sf.cleavage)
    cleavage.pop(next(iter(cleavage)))
    with pytest.raises(MalformedCleavage):
        validate_split_fibration(SplitFibration(sf.p, sf.orientation, cleavage))


def test_composing_with_an_identity_fibration_changes_nothing():
    sf = two_by_bz2()
    assert compose_split_fibrations(sf, identity_fibration(bz2())) == sf
    assert compose_split_fibrations(identity_fibration(sf.total), sf) == sf


def test_two_product_projections_compose_to_the_iterated_product():
    inner = two_by_bz2()
    outer = product_fibration(inner.total, interval())
    both = compose_split_fibrations(outer, inner)
    assert validate_split_fibration(both).ok
    assert len(both.total.objects) == 2 * 2
    for (e, f), l in both.cleavage.items():
        assert both.p.arr(l) == f


def test_orientation_clash_is_refused():
    sf = two_by_bz2()
    op = identity_fibration(sf.total, COCARTESIAN)
    with pytest.raises(OrientationMismatch):
        compose_split_fibrations(op, sf)


def test_composing_with_an_identity_reflection_changes_nothing():
    sr = free_reflection(interval(), {0: "a"})
    assert compose_split_reflections(sr, identity_reflection(sr.small)) == sr
    assert compose_split_reflections(identity_reflection(sr.big), sr) == sr


def test_three_stage_units_paste():
    first = free_reflection(terminal(), {0: "*"})
    second = free_reflection(first.big, {0: first.big.objects[0]})
    third = free_reflection(second.big, {0: second.big.objects[-1]})
    left = compose_split_reflections(third, compose_split_reflections(second, first))
    right = compose_split_reflections(compose_split_reflections(third, second), first)
    assert validate_split_reflection(left).ok
    assert left == right
    E = third.big
    for e in E.objects:
        pasted = E.comp(third.section.arr(compose_split_reflections(second, first).eta(third.retraction.obj(e))), third.eta(e))
        assert left.eta(e) == pasted


def test_non_composable_reflections_are_refused():
    a = free_reflection(interval(), {0: "a"})
    with pytest.raises(BoundaryMismatch):
        compose_split_reflections(a, a)


def test_pullback_along_the_identity_is_the_same_fibration():
    sf = two_by_bz2()
    pulled = pullback_split_fibration(sf, identity_functor(bz2()))
    assert validate_split_fibration(pulled).ok
    assert len(pulled.total.objects) == len(sf.total.objects)
    assert {e for e, _ in pulled.total.objects} == set(sf.total.objects)
    assert {(e, f): l[0] for ((e, _), f), l in pulled.cleavage.items()} == dict(sf.cleavage)


def test_pullback_along_a_point_is_the_fibre():
    sf = product_fibration(interval(), discrete(["x", "y", "z"]))
    pulled = pullback_split_fibration(sf, point(interval(), "a"))
    assert len(pulled.total.objects) == 3
    assert validate_split_fibration(pulled).ok


def test_flipping_the_identity_fibration_gives_the_identity_opfibration():
    assert fibration_opfibration_convert(identity_fibration(bz2())) == identity_fibration(bz2(), COCARTESIAN)


def test_flipped_product_over_bz2_is_cocartesian():
    op = fibration_opfibration_convert(two_by_bz2())
    assert op.orientation == COCARTESIAN
    assert validate_split_fibration(op).ok


def test_flipping_needs_groupoids():
    with pytest.raises(NotAGroupoid):
        fibration_opfibration_convert(identity_fibration(arrow_category()))


def test_identity_square_on_a_fibration_is_structured():
    sf = two_by_bz2()
    sq = Square(sf.p, sf.p, identity_functor(sf.total), identity_functor(sf.base))
    assert check_structured_square(StructuredSquare(sq, FIBRATION, (sf, sf))).ok


def test_identity_square_on_a_reflection_is_structured():
    sr = free_reflection(interval(), {0: "b"})
    sq = Square(sr.section, sr.section, identity_functor(sr.small), identity_functor(sr.big))
    assert check_structured_square(StructuredSquare(sq, REFLECTION, (sr, sr))).ok


def test_pullback_square_preserves_the_cleavage():
    sf = product_fibration(bz2(), bz2())
    pulled, sq = pullback_square(sf, point(bz2(), "*"))
    assert check_structured_square(StructuredSquare(sq, FIBRATION, (pulled, sf))).ok


def test_permuted_cleavage_is_reported_with_its_witness():
    sf = product_fibration(bz2(), bz2())
    other = {k: (k[1], "s") if k[1] == "s" else l for k, l in sf.cleavage.items()}
    twisted = SplitFibration(sf.p, CARTESIAN, other)
    assert validate_split_fibration(twisted).ok
    sq = Square(sf.p, sf.p, identity_functor(sf.total), identity_functor(sf.base))
    report = check_structured_square(StructuredSquare(sq, FIBRATION, (sf, twisted)))
    assert report.laws() == {"cleavage not preserved"}
    assert all(v.witness[1] == "s" for v in report.violations)


def test_wrong_witness_kind_is_refused():
    sf = two_by_bz2()
    sq = Square(sf.p, sf.p, identity_functor(sf.total), identity_functor(sf.base))
    with pytest.raises(KindMismatch):
        check_structured_square(StructuredSquare(sq, REFLECTION, (sf, sf)))


@given(fibrations())
def test_generated_fibrations_validate(sf):
    assert validate_split_fibration(sf).ok


@given(fibrations(groupoid_base=True))
def test_flipping_twice_returns_the_fibration(sf):
    if not sf.total.is_groupoid:
        return
    back = fibration_opfibration_convert(fibration_opfibration_convert(sf))
    assert back == sf
    assert validate_split_fibration(fibration_opfibration_convert(sf)).ok


@given(reflections())
def test_generated_reflections_validate(sr):
    assert validate_split_reflection(sr).ok


@given(seeds)
def test_composites_of_generated_fibrations_validate(seed):
    rng = random.Random(seed)
    orientation = rng.choice((CARTESIAN, COCARTESIAN))
    lower = gen_fibration(rng, gen_category(rng, 2), orientation, max_fiber=2)
    upper = gen_fibration(rng, lower.total, orientation, max_fiber=2)
    both = compose_split_fibrations(upper, lower)
    assert validate_split_fibration(both).ok


@given(seeds)
def test_pullbacks_of_generated_fibrations_validate(seed):
    rng = random.Random(seed)
    sf = gen_fibration(rng, gen_groupoid(rng, 2), max_fiber=2)
    from awfslab.cli import random_functor

    v = random_functor(rng, gen_groupoid(rng, 2), sf.base)
    pulled, sq = pullback_square(sf, v)
    assert validate_split_fibration(pulled).ok
    assert check_structured_square(StructuredSquare(sq, FIBRATION, (pulled, sf))).ok


def test_terminal_fibration_validates():
    assert validate_split_fibration(terminal_fibration(interval())).ok
