from __future__ import annotations

import random

import pytest
from hypothesis import given
from oracles import count_sections, path_object_counts
from strategies import seeds

from awfslab.cli import bz2_type, gen_fibration, pi_point_count_fixture, terms_of, twisted_bz2_type
from awfslab.core_cat import Functor, arrow_category, bz2, compose_functors, identity_functor, point
from awfslab.model import (
    Context,
    JudgmentMismatch,
    TermOf,
    TypeOver,
    app,
    app_generic,
    drop_base,
    fst,
    id_stability_check,
    id_type,
    identity_type,
    j_eliminator,
    lambda_,
    pair,
    path_object_report,
    pi_pseudostability_check,
    pi_type,
    refl,
    sigma_type,
    snd,
    substitute,
    substitute_term,
)
from awfslab.squares import Square, enumerate_fillers
from awfslab.structured import (
    NotAGroupoid,
    identity_fibration,
    product_fibration,
    pullback_square,
    validate_split_fibration,
)


def family_over(T: TypeOver, seed: int) -> TypeOver:
    return TypeOver(gen_fibration(random.Random(seed), T.total, max_fiber=2))


# ------------------------------------------------------------------- Pi


def test_pi_counts_choices_in_each_fibre():
    T, S = pi_point_count_fixture()
    Pi = pi_type(T, S)
    assert len(Pi.total.objects) == count_sections(S.p) == 6
    assert len(terms_of(Pi)) == 6
    assert validate_split_fibration(Pi.fibration).ok


def test_pi_beta_and_eta():
    T, S = pi_point_count_fixture()
    for t in terms_of(S):
        lam = lambda_(T, t)
        assert lambda_(T, app_generic(T, S, lam)) == lam
        for a in terms_of(T):
            assert app(T, S, lam, a) == substitute_term(a.section, t)


def test_application_is_typed():
    T, S = pi_point_count_fixture()
    lam = lambda_(T, terms_of(S)[0])
    with pytest.raises(JudgmentMismatch):
        app(T, S, lam, terms_of(S)[0])


@given(seeds)
def test_pi_is_stable_under_substitution(seed):
    T = twisted_bz2_type()
    S = family_over(T, seed)
    for sub in (identity_functor(T.context), point(T.context, "*")):
        Tp, sq = pullback_square(T.fibration, sub)
        assert pi_pseudostability_check(sq, TypeOver(Tp), T, S).ok


# ---------------------------------------------------------------- Sigma


def test_sigma_total_is_the_family_total():
    T, S = pi_point_count_fixture()
    Sg = sigma_type(T, S)
    assert Sg.total == S.total
    assert Sg.context == T.context


@given(seeds)
def test_sigma_is_associative(seed):
    base, fam = bz2_type(), twisted_bz2_type()
    top = family_over(fam, seed)
    assert sigma_type(sigma_type(base, fam), top) == sigma_type(base, sigma_type(fam, top))


def test_sigma_is_unital():
    base = bz2_type()
    assert sigma_type(base, TypeOver(identity_fibration(base.total))) == base
    assert sigma_type(TypeOver(identity_fibration(base.context)), base) == base


def test_pairs_project_back():
    base, fam = bz2_type(), twisted_bz2_type()
    count = 0
    for a in terms_of(base):
        for b in terms_of(substitute(a.section, fam)):
            t = pair(base, fam, a, b)
            assert fst(base, fam, t) == a
            assert snd(base, fam, t) == b
            count += 1
    assert count == 2


# ------------------------------------------------------------ identity


def test_path_object_of_bz2_matches_oracle():
    path = id_type(bz2_type())
    expected = path_object_counts(bz2_type().p)
    assert (len(path.total.objects), len(path.total.arrows)) == expected == (2, 8)


@pytest.mark.parametrize("make", [bz2_type, twisted_bz2_type])
def test_path_object_laws(make):
    T = make()
    assert path_object_report(T).ok
    path = id_type(T)
    assert (len(path.total.objects), len(path.total.arrows)) == path_object_counts(T.p)
    assert validate_split_fibration(identity_type(T).fibration).ok


def test_reflexivity_is_a_section():
    path = id_type(bz2_type())
    for t in terms_of(bz2_type()):
        r = refl(path, t)
        assert compose_functors(r.type.p, r.section) == identity_functor(t.type.context)


def j_fixture():
    T = twisted_bz2_type()
    path = id_type(T)
    motive = TypeOver(product_fibration(path.total, bz2()))
    over_r = substitute(path.r, motive)
    E = T.total
    d = TermOf(
        Functor(
            E,
            over_r.total,
            {e: ((path.r.obj(e), "*"), e) for e in E.objects},
            {m: ((path.r.arr(m), "e"), m) for m in E.arrows},
        ),
        over_r,
    )
    return path, motive, d


def test_j_restricts_to_the_given_term():
    path, motive, d = j_fixture()
    J = j_eliminator(path, motive, d)
    Q = d.type.total
    first = Functor(Q, motive.total, {o: o[0] for o in Q.objects}, {m: m[0] for m in Q.arrows})
    top = compose_functors(first, d.section)
    assert compose_functors(J.section, path.r) == top
    problem = Square(path.r, motive.p, top, identity_functor(path.total))
    assert J.section in enumerate_fillers(problem)


def test_j_rejects_a_term_off_reflexivity():
    path, motive, _ = j_fixture()
    other = TermOf(identity_functor(motive.context), TypeOver(identity_fibration(motive.context)))
    with pytest.raises(JudgmentMismatch):
        j_eliminator(path, motive, other)


@pytest.mark.parametrize("where", ["identity", "point"])
def test_path_object_is_stable_under_substitution(where):
    T = twisted_bz2_type()
    sub = identity_functor(T.context) if where == "identity" else point(T.context, "*")
    assert id_stability_check(sub, T).ok


# -------------------------------------------------------- judgments


def test_substitution_along_identity_is_trivial():
    T = twisted_bz2_type()
    assert drop_base(substitute(identity_functor(T.context), T)) == T


def test_substitution_along_a_point_gives_the_fibre():
    T = twisted_bz2_type()
    fibre = substitute(point(bz2(), "*"), T)
    assert (len(fibre.total.objects), len(fibre.total.arrows)) == (2, 2)
    assert len(terms_of(fibre)) == 2


def test_contexts_are_groupoids():
    with pytest.raises(NotAGroupoid):
        Context(arrow_category())
    with pytest.raises(NotAGroupoid):
        id_type(TypeOver(identity_fibration(arrow_category())))


def test_terms_must_be_sections():
    T = twisted_bz2_type()
    with pytest.raises(JudgmentMismatch):
        TermOf(identity_functor(T.total), T)
