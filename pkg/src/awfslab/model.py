"""Groupoid model of dependent types: contexts are finite groupoids, types
are split fibrations, terms are sections. Sigma, Pi and identity types are
built from the structured maps of the other modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core_cat import (
    AwfsError,
    BoundaryMismatch,
    FinCategory,
    Functor,
    ValidationReport,
    compose_functors,
    identity_functor,
    is_isomorphism,
    pair_functor,
    pullback_category,
    relabel,
)
from .frobenius import CleavageIncompatible, beck_chevalley_check, pushforward_structure
from .lifting import canonical_lift
from .squares import SliceMorphism, Square, slice_morphism_compose
from .structured import (
    CARTESIAN,
    COCARTESIAN,
    FIBRATION,
    NotAGroupoid,
    SplitFibration,
    SplitReflection,
    StructuredSquare,
    as_orientation,
    check_structured_square,
    compose_split_fibrations,
    make_reflection,
    pullback_split_fibration,
    validate_split_fibration,
)
from .transport import mate_beta, pullback_object, pushforward_adjunction, pushforward_counit


class JudgmentMismatch(AwfsError):
    pass


@dataclass(frozen=True)
class Context:
    groupoid: FinCategory

    def __post_init__(self):
        if not self.groupoid.is_groupoid:
            raise NotAGroupoid("contexts are groupoids")


@dataclass(frozen=True)
class TypeOver:
    fibration: SplitFibration

    def __post_init__(self):
        if self.fibration.orientation != CARTESIAN:
            object.__setattr__(self, "fibration", as_orientation(self.fibration, CARTESIAN))

    @property
    def context(self) -> FinCategory:
        return self.fibration.base

    @property
    def total(self) -> FinCategory:
        return self.fibration.total

    @property
    def p(self) -> Functor:
        return self.fibration.p


@dataclass(frozen=True)
class TermOf:
    section: Functor
    type: TypeOver

    def __post_init__(self):
        T = self.type
        if self.section.source != T.context or self.section.target != T.total:
            raise JudgmentMismatch("term does not run from the context to the type")
        if compose_functors(T.p, self.section) != identity_functor(T.context):
            raise JudgmentMismatch("term is not a section of its type")


# -------------------------------------------------------------- relabelling


def relabel_fibration(sf: SplitFibration, obj: Callable, mor: Callable) -> SplitFibration:
    """Rename the total category of sf by injective maps on identifiers."""
    E = sf.total
    E1, iso = relabel(E, {o: obj(o) for o in E.objects}, {m: mor(m) for m in E.arrows})
    p = Functor(E1, sf.base, {obj(o): sf.p.obj(o) for o in E.objects}, {mor(m): sf.p.arr(m) for m in E.arrows})
    cleavage = {(obj(e), f): mor(l) for (e, f), l in sf.cleavage.items()}
    return SplitFibration(p, sf.orientation, cleavage)


def _swap(x):
    return (x[1], x[0])


def swap_pairs(sf: SplitFibration) -> SplitFibration:
    """(e, b) pairs of a pulled back fibration become (b, e)."""
    return relabel_fibration(sf, _swap, _swap)


def drop_base(T: TypeOver) -> TypeOver:
    """Undo substitution along an identity: (e, g) -> e."""
    first = lambda x: x[0]
    return TypeOver(relabel_fibration(T.fibration, first, first))


def flatten(T: TypeOver) -> TypeOver:
    """((e, d), g) -> (e, g) for a type substituted twice."""
    outer = lambda x: (x[0][0], x[1])
    return TypeOver(relabel_fibration(T.fibration, outer, outer))


# ------------------------------------------------------------- substitution


def substitute(sigma: Functor, T: TypeOver) -> TypeOver:
    return TypeOver(pullback_split_fibration(T.fibration, sigma))


def substitute_term(sigma: Functor, t: TermOf) -> TermOf:
    T1 = substitute(sigma, t.type)
    s = compose_functors(t.section, sigma)
    D = sigma.source
    sec = Functor(D, T1.total, {d: (s.obj(d), d) for d in D.objects}, {m: (s.arr(m), m) for m in D.arrows})
    return TermOf(sec, T1)


def _extension(T: TypeOver, S: TypeOver):
    if S.context != T.total:
        raise BoundaryMismatch("second type does not live over the extended context")


# -------------------------------------------------------------------- sigma


def sigma_type(T: TypeOver, S: TypeOver) -> TypeOver:
    _extension(T, S)
    return TypeOver(compose_split_fibrations(S.fibration, T.fibration))


def pair(T: TypeOver, S: TypeOver, a: TermOf, b: TermOf) -> TermOf:
    if a.type != T or b.type != substitute(a.section, S):
        raise JudgmentMismatch("components do not match the sigma type")
    sec = b.section
    G = T.context
    first = Functor(
        G, S.total, {g: sec.obj(g)[0] for g in G.objects}, {m: sec.arr(m)[0] for m in G.arrows}
    )
    return TermOf(first, sigma_type(T, S))


def fst(T: TypeOver, S: TypeOver, t: TermOf) -> TermOf:
    if t.type != sigma_type(T, S):
        raise JudgmentMismatch("term is not of the sigma type")
    return TermOf(compose_functors(S.p, t.section), T)


def snd(T: TypeOver, S: TypeOver, t: TermOf) -> TermOf:
    a = fst(T, S, t)
    S1 = substitute(a.section, S)
    G = T.context
    s = t.section
    return TermOf(Functor(G, S1.total, {g: (s.obj(g), g) for g in G.objects}, {m: (s.arr(m), m) for m in G.arrows}), S1)


# ----------------------------------------------------------------------- pi


def pi_type(T: TypeOver, S: TypeOver) -> TypeOver:
    _extension(T, S)
    return TypeOver(pushforward_structure(T.fibration, S.fibration).structure)


def lambda_(T: TypeOver, t: TermOf) -> TermOf:
    """Transpose a term over the extended context across pullback and
    pushforward along T."""
    S = t.type
    _extension(T, S)
    adj = pushforward_adjunction(T.fibration)
    G = T.context
    y = identity_functor(G)
    back = pullback_object(T.p, y)  # A x G -> A
    P = back.source
    first = Functor(P, T.total, {o: o[0] for o in P.objects}, {m: m[0] for m in P.arrows})
    bar = SliceMorphism(compose_functors(t.section, first), S.p)
    lam = slice_morphism_compose(adj.right_mor(bar), adj.unit(y))
    return TermOf(lam.f, pi_type(T, S))


def _evaluate(T: TypeOver, S: TypeOver, f: TermOf, a: Functor) -> Functor:
    """Evaluate sections f at the points a: Gamma' -> A lying over them."""
    eps = pushforward_counit(as_orientation(T.fibration, COCARTESIAN), S.p).f
    pointed = pair_functor(eps.source, a, compose_functors(f.section, compose_functors(T.p, a)))
    return compose_functors(eps, pointed)


def app(T: TypeOver, S: TypeOver, f: TermOf, a: TermOf) -> TermOf:
    if f.type != pi_type(T, S) or a.type != T:
        raise JudgmentMismatch("application is not well typed")
    e = _evaluate(T, S, f, a.section)
    S1 = substitute(a.section, S)
    G = T.context
    return TermOf(Functor(G, S1.total, {g: (e.obj(g), g) for g in G.objects}, {m: (e.arr(m), m) for m in G.arrows}), S1)


def app_generic(T: TypeOver, S: TypeOver, f: TermOf) -> TermOf:
    """f applied to the generic point of T: a term of S."""
    if f.type != pi_type(T, S):
        raise JudgmentMismatch("term is not of the pi type")
    return TermOf(_evaluate(T, S, f, identity_functor(T.total)), S)


# ------------------------------------------------------------------ identity


@dataclass(frozen=True)
class PathObject:
    """Vertical arrows of a type with the reflexivity reflection and the
    endpoint fibration."""

    total: FinCategory
    r: Functor
    rho: SplitFibration
    reflection: SplitReflection
    diagonal: Functor


def id_type(T: TypeOver) -> PathObject:
    E, G, p = T.total, T.context, T.p
    if not (E.is_groupoid and G.is_groupoid):
        raise NotAGroupoid("identity types are built over groupoids")
    vertical = [a for a in E.arrows if G.is_identity(p.arr(a))]
    morphs = {}
    for al in vertical:
        x, y = E.morphisms[al]
        for be in vertical:
            x1, y1 = E.morphisms[be]
            for v in E.hom(y, y1):
                for u in E.hom(x, x1):
                    if p.arr(u) == p.arr(v) and E.comp(v, al) == E.comp(be, u):
                        morphs[(al, u, v)] = (al, be)
    ids = {al: (al, E.id(E.dom(al)), E.id(E.cod(al))) for al in vertical}
    out = {}
    for m, (s, t) in morphs.items():
        out.setdefault(s, []).append(m)
    comp = {}
    for (al, u, v), (_, mid) in morphs.items():
        for (_, u1, v1) in out[mid]:
            comp[((mid, u1, v1), (al, u, v))] = (al, E.comp(u1, u), E.comp(v1, v))
    inv = {(al, u, v): (be, E.inv(u), E.inv(v)) for (al, u, v), (_, be) in morphs.items()}
    P = FinCategory(tuple(vertical), morphs, ids, comp, inv)
    r = Functor(E, P, {a: E.id(a) for a in E.objects}, {m: (E.id(E.dom(m)), m, m) for m in E.arrows})
    cod = Functor(P, E, {al: E.cod(al) for al in vertical}, {m: m[2] for m in morphs})
    unit = {al: (al, al, E.id(E.cod(al))) for al in vertical}
    refl_ = make_reflection(r, cod, unit)
    EE = pullback_category(p, p)[0]
    rho_f = Functor(P, EE, {al: (E.dom(al), E.cod(al)) for al in vertical}, {m: (m[1], m[2]) for m in morphs})
    cleavage = {}
    for be in vertical:
        for u, v in EE.into((E.dom(be), E.cod(be))):
            cleavage[(be, (u, v))] = (E.chain(E.inv(v), be, u), u, v)
    rho = SplitFibration(rho_f, CARTESIAN, cleavage)
    diag = pair_functor(EE, identity_functor(E), identity_functor(E))
    return PathObject(P, r, rho, refl_, diag)


def id_stability_check(sigma: Functor, T: TypeOver) -> ValidationReport:
    """The path object of a substituted type against the substituted path
    object, compared through the evident renaming."""
    report = ValidationReport()
    here = id_type(substitute(sigma, T))
    there = id_type(T)
    T1 = substitute(sigma, T)
    EE1 = pullback_category(T1.p, T1.p)[0]
    shift = Functor(
        EE1,
        there.rho.base,
        {(x, y): (x[0], y[0]) for x, y in EE1.objects},
        {(m, n): (m[0], n[0]) for m, n in EE1.arrows},
    )
    pulled = pullback_split_fibration(there.rho, shift)
    Q = pulled.total
    E1 = T1.total
    obj = {}
    for al in here.total.objects:
        a, _ = al
        obj[al] = (a, (E1.dom(al), E1.cod(al)))
    mor = {m: ((m[0][0], m[1][0], m[2][0]), (m[1], m[2])) for m in here.total.arrows}
    try:
        cmp = Functor(here.total, Q, obj, mor)
        ok = is_isomorphism(cmp)
    except (KeyError, AwfsError):
        ok = False
    if not ok:
        report.add("renaming is not an isomorphism of path objects")
        return report
    if compose_functors(pulled.p, cmp) != here.rho.p:
        report.add("endpoint maps differ")
    renamed = relabel_fibration(here.rho, obj.get, mor.get)
    if renamed.cleavage != pulled.cleavage:
        report.add("chosen lifts of the endpoint fibration differ")
    return report


def path_object_report(T: TypeOver) -> ValidationReport:
    from .structured import validate_split_reflection

    path = id_type(T)
    report = ValidationReport()
    report.extend(validate_split_reflection(path.reflection), "reflexivity: ")
    report.extend(validate_split_fibration(path.rho), "endpoints: ")
    if compose_functors(path.rho.p, path.r) != path.diagonal:
        report.add("endpoints of reflexivity are not the diagonal")
    return report


def identity_type(T: TypeOver) -> TypeOver:
    return TypeOver(id_type(T).rho)


def refl(path: PathObject, t: TermOf) -> TermOf:
    """r after t, as a term of the identity type at (t, t)."""
    point = compose_functors(path.diagonal, t.section)
    Id = substitute(point, TypeOver(path.rho))
    s = compose_functors(path.r, t.section)
    G = t.type.context
    return TermOf(Functor(G, Id.total, {g: (s.obj(g), g) for g in G.objects}, {m: (s.arr(m), m) for m in G.arrows}), Id)


def j_eliminator(path: PathObject, C: TypeOver, d: TermOf) -> TermOf:
    """Extend a term of C over reflexivity to a term of C, by lifting."""
    if C.context != path.total:
        raise JudgmentMismatch("motive is not over the path object")
    if d.type != substitute(path.r, C):
        raise JudgmentMismatch("term is not over reflexivity")
    Q = d.type.total
    first = Functor(Q, C.total, {o: o[0] for o in Q.objects}, {m: m[0] for m in Q.arrows})
    top = compose_functors(first, d.section)
    J = canonical_lift(path.reflection, C.fibration, Square(path.r, C.p, top, identity_functor(path.total)))
    return TermOf(J, C)


# ------------------------------------------------------- pi pseudo-stability


def pi_pseudostability_check(square: Square, T_prime: TypeOver, T: TypeOver, S: TypeOver) -> ValidationReport:
    """square: T_prime -> T over a substitution (top A' -> A, bottom the
    substitution). Compares Pi pulled back along the substitution with Pi
    of the pulled back family."""
    if square.left != T_prime.p or square.right != T.p:
        raise BoundaryMismatch("square legs are not the given types")
    _extension(T, S)
    report = ValidationReport()
    cc = lambda X: as_orientation(X.fibration, COCARTESIAN)
    try:
        beck_chevalley_check(square, cc(T_prime), cc(T), [])
    except CleavageIncompatible:
        report.add("square does not preserve chosen lifts")
        return report
    u, sigma = square.top, square.bottom
    S1 = TypeOver(swap_pairs(pullback_split_fibration(S.fibration, u)))
    Pi1 = pi_type(T_prime, S1)
    Pi = pi_type(T, S)
    moved = swap_pairs(pullback_split_fibration(Pi.fibration, sigma))
    beta = mate_beta(square, T_prime.fibration, T.fibration, SliceMorphism(S.p, identity_functor(T.total))).top
    if beta.source != moved.total or beta.target != Pi1.total:
        report.add("comparison has the wrong boundary")
        return report
    if not is_isomorphism(beta):
        report.add("comparison is not an isomorphism")
    cmp = Square(moved.p, Pi1.p, beta, identity_functor(sigma.source))
    if not cmp.commutes():
        report.add("comparison is not over the context")
        return report
    report.extend(check_structured_square(StructuredSquare(cmp, FIBRATION, (moved, Pi1.fibration))), "comparison: ")
    return report
