"""Pulling split reflections back along split opfibrations, and the checks
that make this a structure: preservation of squares and composites, the
lifted unit and counit, the matching pushforward of fibrations, and
compatibility with pullback squares of opfibrations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .core_cat import (
    AwfsError,
    BoundaryMismatch,
    Functor,
    ValidationReport,
    compose_functors,
    identity_functor,
    pullback_category,
)
from .lifting import ExtensionMismatch, canonical_lift
from .squares import (
    SliceMorphism,
    SliceSquare,
    Square,
    filler_from_transposed,
    transpose_lifting_problem,
)
from .structured import (
    CARTESIAN,
    COCARTESIAN,
    FIBRATION,
    REFLECTION,
    MalformedCleavage,
    OrientationMismatch,
    Sliced,
    SplitFibration,
    SplitReflection,
    StructuredSquare,
    as_orientation,
    check_structured_square,
    compose_split_reflections,
    make_reflection,
    validate_split_reflection,
)
from .transport import (
    NotAPullback,
    is_pullback_square,
    pushforward_adjunction,
    pushforward_arrows,
    pushforward_category,
    pushforward_object,
)


class CleavageIncompatible(AwfsError):
    pass


@dataclass(frozen=True)
class Transported:
    """A reflection pulled back along an opfibration, with the pieces of
    the construction kept around for the checks."""

    reflection: SplitReflection
    ext: Functor  # projection of the big pullback to the total category
    proj_small: Functor  # A x_B D -> D
    proj_big: Functor  # A x_B C -> C
    push: Functor  # A x_B C -> A, (a, c) -> transport of a along U eta_c

    @property
    def sliced(self) -> Sliced:
        return Sliced(self.reflection, self.ext)


def _check_inputs(P: SplitFibration, refl: Sliced):
    if P.orientation != COCARTESIAN:
        raise OrientationMismatch("pulling back reflections needs a split opfibration")
    if not isinstance(refl, Sliced) or not isinstance(refl.structure, SplitReflection):
        raise ExtensionMismatch("expected a split reflection with an extension")
    if refl.ext.source != refl.structure.big or refl.ext.target != P.base:
        raise ExtensionMismatch("extension does not run from the big category to the base")


def transport_reflection(P: SplitFibration, refl: Sliced) -> Transported:
    _check_inputs(P, refl)
    sr, U = refl.structure, refl.ext
    R, L = sr.section, sr.retraction
    A = P.total
    PC, pa, pc = pullback_category(P.p, U)
    PD, pa_d, pd = pullback_category(P.p, compose_functors(U, R))
    pullR = Functor(
        PD,
        PC,
        {(a, d): (a, R.obj(d)) for a, d in PD.objects},
        {(m, n): (m, R.arr(n)) for m, n in PD.arrows},
    )
    lift = {}
    F_obj = {}
    for a, c in PC.objects:
        l = P.lift(a, U.arr(sr.eta(c)))
        lift[(a, c)] = l
        F_obj[(a, c)] = A.cod(l)
    F_mor = {}
    for name in PC.arrows:
        m, n = name
        s, t = PC.morphisms[name]
        want = U.arr(R.arr(L.arr(n)))
        target = A.comp(lift[t], m)
        found = [
            k
            for k in A.hom(F_obj[s], F_obj[t])
            if P.p.arr(k) == want and A.comp(k, lift[s]) == target
        ]
        if len(found) != 1:
            raise MalformedCleavage("chosen lift is not cocartesian")
        F_mor[name] = found[0]
    G = Functor(
        PC,
        PD,
        {o: (F_obj[o], L.obj(o[1])) for o in PC.objects},
        {k: (F_mor[k], L.arr(k[1])) for k in PC.arrows},
    )
    unit = {o: (lift[o], sr.eta(o[1])) for o in PC.objects}
    push = Functor(PC, A, F_obj, F_mor)
    return Transported(make_reflection(pullR, G, unit), pa, pd, pc, push)


def frobenius_transport(P: SplitFibration, refl: Sliced) -> Sliced:
    """The reflection over the total category obtained by pulling back."""
    return transport_reflection(P, refl).sliced


@dataclass(frozen=True)
class FrobeniusStructure:
    fibration: SplitFibration
    action: Callable


def frobenius_structure(P: SplitFibration) -> FrobeniusStructure:
    return FrobeniusStructure(P, lambda refl: frobenius_transport(P, refl))


def frobenius_equations(P: SplitFibration, refl: Sliced) -> ValidationReport:
    """Validate the output and the identities that make it a reflection."""
    t = transport_reflection(P, refl)
    sr, U = refl.structure, refl.ext
    R = sr.section
    A = P.total
    out = t.reflection
    report = ValidationReport()
    report.extend(validate_split_reflection(out), "output: ")
    PD = out.small
    for a, d in PD.objects:
        Rd = R.obj(d)
        if P.lift(a, U.arr(sr.eta(Rd))) != A.id(a):
            report.add("lift of the unit at a section object is not an identity", a, d)
        if t.push.obj((a, Rd)) != a:
            report.add("transport at a section object moves the object", a, d)
        if out.eta((a, Rd)) != (A.id(a), sr.big.id(Rd)):
            report.add("unit at a section object is not the identity pair", a, d)
    if compose_functors(out.retraction, out.section) != identity_functor(PD):
        report.add("retraction after pulled back section is not the identity")
    return report


def _pull_square_leg(P: SplitFibration, ext_target: Functor, h: Functor, ext_source: Functor) -> Functor:
    """A x_B S -> A x_B T induced by h: S -> T over the base."""
    src = pullback_category(P.p, ext_source)[0]
    tgt = pullback_category(P.p, ext_target)[0]
    return Functor(
        src,
        tgt,
        {(a, s): (a, h.obj(s)) for a, s in src.objects},
        {(m, n): (m, h.arr(n)) for m, n in src.arrows},
    )


def frobenius_preserves_squares(P: SplitFibration, refl_prime: Sliced, refl: Sliced, square: Square) -> ValidationReport:
    """square = (small map, big map): refl_prime -> refl, both over the base."""
    X, Y = square.top, square.bottom
    if refl_prime.ext != compose_functors(refl.ext, Y):
        raise ExtensionMismatch("square is not over the base")
    report = ValidationReport()
    ss = StructuredSquare(square, REFLECTION, (refl_prime.structure, refl.structure))
    report.extend(check_structured_square(ss), "input: ")
    t1 = transport_reflection(P, refl_prime)
    t = transport_reflection(P, refl)
    r1, r = t1.reflection, t.reflection
    UR1 = compose_functors(refl_prime.ext, refl_prime.structure.section)
    UR = compose_functors(refl.ext, refl.structure.section)
    pX = _pull_square_leg(P, UR, X, UR1)
    pY = _pull_square_leg(P, refl.ext, Y, refl_prime.ext)
    if compose_functors(pY, r1.section) != compose_functors(r.section, pX):
        report.add("pulled back sections do not commute with the square")
    if compose_functors(r.retraction, pY) != compose_functors(pX, r1.retraction):
        report.add("pulled back retractions do not commute with the square")
    else:
        out = StructuredSquare(Square(r1.section, r.section, pX, pY), REFLECTION, (r1, r))
        report.extend(check_structured_square(out), "output: ")
    return report


def frobenius_preserves_composition(P: SplitFibration, first: Sliced, second: Sliced) -> ValidationReport:
    """first: section E -> D over the base via second; second: D -> C.

    Checks that pulling back the composite agrees with composing the pulled
    back reflections: retractions, transports and pasted units.
    """
    if first.ext != compose_functors(second.ext, second.structure.section):
        raise ExtensionMismatch("reflections are not composable over the base")
    whole = Sliced(compose_split_reflections(second.structure, first.structure), second.ext)
    t1 = transport_reflection(P, first)
    t2 = transport_reflection(P, second)
    tw = transport_reflection(P, whole)
    G1, G2, Gw = t1.reflection.retraction, t2.reflection.retraction, tw.reflection.retraction
    report = ValidationReport()
    if Gw != compose_functors(G1, G2):
        report.add("retraction of the composite differs from composite of retractions")
    if tw.push != compose_functors(t1.push, G2):
        report.add("transport of the composite differs from transport after retraction")
    PC = t2.reflection.big
    R2 = t2.reflection.section
    for o in PC.objects:
        pasted = PC.comp(R2.arr(t1.reflection.eta(G2.obj(o))), t2.reflection.eta(o))
        if tw.reflection.eta(o) != pasted:
            report.add("unit of the composite is not the pasted unit", o)
    return report


# ------------------------------------------------------------ strong version


def strong_frobenius_checks(P: SplitFibration, over_base: Iterable = (), over_total: Iterable = ()) -> ValidationReport:
    """Counit squares for reflections over the base, unit squares for
    reflections over the total category, and both triangle identities."""
    report = ValidationReport()
    for k, refl in enumerate(over_base):
        t = transport_reflection(P, refl)
        sr = refl.structure
        out = t.reflection
        if compose_functors(sr.section, t.proj_small) != compose_functors(t.proj_big, out.section):
            report.add("counit: sections do not commute", k)
        if compose_functors(t.proj_small, out.retraction) != compose_functors(sr.retraction, t.proj_big):
            report.add("counit: retractions do not commute", k)
        # the projection must carry the pulled back unit to the original one
        for o in out.big.objects:
            if t.proj_big.arr(out.eta(o)) != sr.eta(t.proj_big.obj(o)):
                report.add("counit: units do not match", k, o)
    for k, refl in enumerate(over_total):
        sr, U = refl.structure, refl.ext
        if U.target != P.total:
            raise ExtensionMismatch("reflection is not over the total category")
        pushed = Sliced(sr, compose_functors(P.p, U))
        t = transport_reflection(P, pushed)
        out = t.reflection
        R, L = sr.section, sr.retraction
        C, D = sr.big, sr.small
        eta_big = Functor(
            C, out.big, {c: (U.obj(c), c) for c in C.objects}, {m: (U.arr(m), m) for m in C.arrows}
        )
        UR = compose_functors(U, R)
        eta_small = Functor(
            D, out.small, {d: (UR.obj(d), d) for d in D.objects}, {m: (UR.arr(m), m) for m in D.arrows}
        )
        if compose_functors(out.section, eta_small) != compose_functors(eta_big, R):
            report.add("unit: sections do not commute", k)
        G = out.retraction
        for c in C.objects:
            if G.obj(eta_big.obj(c)) != eta_small.obj(L.obj(c)):
                report.add("unit: transported object differs", k, c)
        if report.ok and compose_functors(G, eta_big) != compose_functors(eta_small, L):
            report.add("unit: retractions do not commute", k)
        if compose_functors(t.proj_big, eta_big) != identity_functor(C):
            report.add("unit triangle", k)
    return report


# ------------------------------------------------------- pushforward structure


def pushforward_structure(P: SplitFibration, fib) -> Sliced:
    """Push a fibration over the total category forward to the base.

    A plain fibration over the total category is sent to the section
    fibration over the base. Otherwise ``fib`` is a Sliced fibration g: X -> Y with extension b: Y -> A. The
    result is f_*g: f_*X -> f_*Y with extension f_*b, lifts computed by
    lifting each component of a family along g.
    """
    if isinstance(fib, SplitFibration):
        C, sf = pushforward_object(P, fib)
        return Sliced(as_orientation(sf, fib.orientation), identity_functor(P.base))
    g, b = fib.structure, fib.ext
    if b.target != P.total:
        raise ExtensionMismatch("fibration is not over the total category")
    pc = as_orientation(P, COCARTESIAN)
    gc = as_orientation(g, COCARTESIAN)
    arrow = pushforward_arrows(pc, SliceMorphism(g.p, b))
    src = pushforward_category(pc, compose_functors(b, g.p))
    tgt_cat = arrow.f.target
    cleavage = {}
    for key in src.category.objects:
        F, s = src.sections[key]
        image = arrow.f.obj(key)
        for name in tgt_cat.out_of(image):
            beta, _, taus = name
            tau = dict(zip(F.objects, taus))
            sig = tuple(gc.lift(s.obj(a), tau[a]) for a in F.objects)
            cleavage[(key, name)] = (beta, key, sig)
    opf = SplitFibration(arrow.f, COCARTESIAN, cleavage)
    return Sliced(as_orientation(opf, g.orientation), arrow.a)


def filler_agreement(P: SplitFibration, fib: SplitFibration, refl: Sliced, top: Functor, bottom: Functor) -> tuple:
    """Solve one problem against the pushed forward fibration two ways.

    The problem is (top, bottom): section of refl -> f_*g, over the base.
    Returns (direct filler, filler via transposition and pulling back).
    """
    pushed = pushforward_structure(P, Sliced(fib, identity_functor(P.total)))
    pf, ext = pushed.structure, pushed.ext
    sr = refl.structure
    direct = canonical_lift(sr, as_orientation(pf, CARTESIAN), Square(sr.section, pf.p, top, bottom))
    pc = as_orientation(P, COCARTESIAN)
    adj = pushforward_adjunction(pc)
    k = SliceMorphism(fib.p, identity_functor(P.total))
    problem = SliceSquare(Square(sr.section, pf.p, top, bottom), ext)
    moved = transpose_lifting_problem(adj, problem, k)
    pulled = transport_reflection(pc, refl).reflection
    psi = canonical_lift(pulled, as_orientation(fib, CARTESIAN), moved.square)
    j = problem.left
    back = filler_from_transposed(adj, j, k, psi)
    return direct, back


# ------------------------------------------------------------ Beck-Chevalley


def beck_chevalley_check(
    square: Square, P: SplitFibration, Q: SplitFibration, corpus: Iterable
) -> ValidationReport:
    """square = (X, Y): P -> Q, a pullback square of split opfibrations
    preserving lifts; corpus = reflections over the base of P."""
    if square.left != P.p or square.right != Q.p:
        raise BoundaryMismatch("square legs are not the given opfibrations")
    if P.orientation != COCARTESIAN or Q.orientation != COCARTESIAN:
        raise OrientationMismatch("expected split opfibrations")
    if not square.commutes() or not is_pullback_square(square):
        raise NotAPullback("square is not a pullback")
    if not check_structured_square(StructuredSquare(square, FIBRATION, (P, Q))).ok:
        raise CleavageIncompatible("square does not preserve chosen lifts")
    X, Y = square.top, square.bottom
    report = ValidationReport()
    for k, refl in enumerate(corpus):
        sr, U = refl.structure, refl.ext
        moved = Sliced(sr, compose_functors(Y, U))
        tp = transport_reflection(P, refl)
        tq = transport_reflection(Q, moved)
        for a, c in tp.reflection.big.objects:
            f = U.arr(sr.eta(c))
            if X.obj(P.transport(a, f)) != Q.transport(X.obj(a), Y.arr(f)):
                report.add("transport not preserved", k, a, c)
        if not report.ok:
            continue
        alpha_big = _pull_along(tp.reflection.big, tq.reflection.big, X)
        alpha_small = _pull_along(tp.reflection.small, tq.reflection.small, X)
        ss = StructuredSquare(
            Square(tp.reflection.section, tq.reflection.section, alpha_small, alpha_big),
            REFLECTION,
            (tp.reflection, tq.reflection),
        )
        report.extend(check_structured_square(ss), f"case {k}: ")
    return report


def _pull_along(src, tgt, X: Functor) -> Functor:
    """(a, c) -> (X a, c) between pullbacks."""
    return Functor(
        src,
        tgt,
        {(a, c): (X.obj(a), c) for a, c in src.objects},
        {(m, n): (X.arr(m), n) for m, n in src.arrows},
    )
