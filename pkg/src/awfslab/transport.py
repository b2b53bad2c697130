"""Pullback and pushforward on slices of finite groupoids, the adjunction
between them, and mates of commuting squares.

Objects of a slice are functors into the base and morphisms are
SliceMorphisms. Pushforward is only defined along split fibrations of
groupoids, where it is the groupoid of sections of the fibers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian_product

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
    search_functors,
    subcategory,
)
from .squares import (
    SliceAdjunction,
    SliceMorphism,
    Square,
    check_triangles,
    slice_morphism_compose,
)
from .structured import (
    COCARTESIAN,
    NotAGroupoid,
    SplitFibration,
    as_orientation,
    validate_split_fibration,
)


class NotAFibration(AwfsError):
    pass


class NotAPullback(AwfsError):
    pass


# ------------------------------------------------------------------ pullback


_RECENT_PULLBACKS: list = []


def pullback_object(f: Functor, y: Functor) -> Functor:
    """f*y: the projection A x_B Y -> A, objects (a, y)."""
    for f1, y1, proj in _RECENT_PULLBACKS:
        if f1 == f and y1 == y:
            return proj
    proj = pullback_category(f, y)[1]
    _RECENT_PULLBACKS.insert(0, (f, y, proj))
    del _RECENT_PULLBACKS[16:]
    return proj


def pullback_arrows(f: Functor, m: SliceMorphism) -> SliceMorphism:
    """f*(g, b) = (f*g, f*b)."""
    g, b = m.f, m.a
    src = pullback_object(f, compose_functors(b, g))
    tgt = pullback_object(f, b)
    P, P1 = src.source, tgt.source
    fg = Functor(
        P,
        P1,
        {(a, y): (a, g.obj(y)) for a, y in P.objects},
        {(k, n): (k, g.arr(n)) for k, n in P.arrows},
    )
    return SliceMorphism(fg, tgt)


def postcompose_arrows(u: Functor, m: SliceMorphism) -> SliceMorphism:
    return SliceMorphism(m.f, compose_functors(u, m.a))


# ---------------------------------------------------------------- pushforward


def fiber(p: Functor, b) -> FinCategory:
    E = p.source
    B = p.target
    ident = B.id(b)
    return subcategory(E, [e for e in E.objects if p.obj(e) == b], lambda m: p.arr(m) == ident)


@dataclass(frozen=True)
class SectionGroupoid:
    """Sections over one base object: functors s from the fiber of the
    fibration into X with x.s the fiber inclusion."""

    base_object: object
    fiber: FinCategory
    sections: tuple


def _require_groupoids(*cats):
    for C in cats:
        if not C.is_groupoid:
            raise NotAGroupoid("pushforward is only defined between groupoids")


def _fibration_of_groupoids(f: SplitFibration) -> SplitFibration:
    _require_groupoids(f.total, f.base)
    return as_orientation(f, COCARTESIAN)


def section_groupoid(f: SplitFibration, x: Functor, b) -> SectionGroupoid:
    fc = _fibration_of_groupoids(f)
    F = fiber(fc.p, b)
    X = x.source
    over_obj = {}
    for o in X.objects:
        over_obj.setdefault(x.obj(o), []).append(o)
    found = tuple(
        search_functors(
            F,
            X,
            lambda a: over_obj.get(a, []),
            lambda m, cands: [c for c in cands if x.arr(c) == m],
        )
    )
    return SectionGroupoid(b, F, found)


def _section_key(b, F: FinCategory, s: Functor):
    return (
        b,
        tuple(s.obj(a) for a in F.objects),
        tuple(s.arr(m) for m in F.arrows if not F.is_identity(m)),
    )


@dataclass(frozen=True)
class Pushforward:
    """The category of sections f_*X with its projection to the base."""

    category: FinCategory
    projection: Functor
    sections: dict  # object id -> (fiber, section functor)


_RECENT: list = []
_RECENT_SIZE = 16


def pushforward_category(f: SplitFibration, x: Functor) -> Pushforward:
    # the unit, counit and arrow constructions keep asking for the same few
    # objects, and building the composition table dominates their cost
    for g, y, pf in _RECENT:
        if g is f and y == x:
            return pf
    pf = _build_pushforward(f, x)
    _RECENT.insert(0, (f, x, pf))
    del _RECENT[_RECENT_SIZE:]
    return pf


def _build_pushforward(f: SplitFibration, x: Functor) -> Pushforward:
    fc = _fibration_of_groupoids(f)
    A, B = fc.total, fc.base
    if x.target != A:
        raise BoundaryMismatch("the functor to push forward does not land over the total category")
    X = x.source
    _require_groupoids(X)
    groups = {b: section_groupoid(fc, x, b) for b in B.objects}
    secs = {}
    for b, sg in groups.items():
        for s in sg.sections:
            secs[_section_key(b, sg.fiber, s)] = (sg.fiber, s)
    objs = list(secs)

    morphs, comp_data = {}, {}
    for key, (F, s) in secs.items():
        b = key[0]
        for beta in B.out_of(b):
            b1 = B.cod(beta)
            F1 = groups[b1].fiber
            lifts = [fc.lift(a, beta) for a in F.objects]
            choices = []
            for a, l in zip(F.objects, lifts):
                choices.append([t for t in X.out_of(s.obj(a)) if x.arr(t) == l])
            for taus in cartesian_product(*choices):
                tgt = _transported_key(fc, x, X, A, F, F1, s, beta, taus, b1)
                name = (beta, key, taus)
                morphs[name] = (key, tgt)
                comp_data[name] = dict(zip(F.objects, taus))

    ids = {}
    for key, (F, s) in secs.items():
        b = key[0]
        ident = (B.id(b), key, tuple(X.id(s.obj(a)) for a in F.objects))
        ids[key] = ident

    out_of = {}
    for name, (src, tgt) in morphs.items():
        out_of.setdefault(src, []).append(name)
    comp = {}
    inv = {}
    for name, (src, mid) in morphs.items():
        beta, _, taus = name
        F = secs[src][0]
        tau = comp_data[name]
        for name2 in out_of[mid]:
            beta2, _, taus2 = name2
            tau2 = comp_data[name2]
            new = tuple(X.comp(tau2[fc.transport(a, beta)], tau[a]) for a in F.objects)
            comp[(name2, name)] = (B.comp(beta2, beta), src, new)
        binv = B.inv(beta)
        F1 = secs[mid][0]
        back = {fc.transport(a, beta): X.inv(tau[a]) for a in F.objects}
        inv[name] = (binv, mid, tuple(back[a1] for a1 in F1.objects))
    C = FinCategory(tuple(objs), morphs, ids, comp, inv)
    proj = Functor(C, B, {k: k[0] for k in objs}, {n: n[0] for n in morphs})
    return Pushforward(C, proj, secs)


def _transported_key(fc, x, X, A, F, F1, s, beta, taus, b1):
    """Key of the section over b1 forced by a family of components."""
    tau = dict(zip(F.objects, taus))
    objs = {}
    for a in F.objects:
        objs[fc.transport(a, beta)] = X.cod(tau[a])
    morphs = []
    for m1 in F1.arrows:
        if F1.is_identity(m1):
            continue
        a1, a2 = F1.morphisms[m1]
        # pull the morphism back to the fiber over the source
        l1 = fc.lift(_preimage(fc, F, beta, a1), beta)
        l2 = fc.lift(_preimage(fc, F, beta, a2), beta)
        m = A.chain(A.inv(l2), m1, l1)
        t1, t2 = tau[A.dom(l1)], tau[A.dom(l2)]
        morphs.append(X.chain(t2, s.arr(m), X.inv(t1)))
    return (b1, tuple(objs[a] for a in F1.objects), tuple(morphs))


def _preimage(fc, F, beta, a1):
    for a in F.objects:
        if fc.transport(a, beta) == a1:
            return a
    raise NotAFibration("transport between fibers is not a bijection")


def pushforward_object(f: SplitFibration, x: SplitFibration) -> tuple:
    """f_* of a split fibration: the section category and its projection as
    a split fibration, lifts given by transporting sections."""
    pf = pushforward_category(f, x.p)
    fc = _fibration_of_groupoids(f)
    xc = _fibration_of_groupoids(x)
    C, B = pf.category, fc.base
    cleavage = {}
    for key in C.objects:
        F, s = pf.sections[key]
        for beta in B.out_of(key[0]):
            taus = tuple(xc.lift(s.obj(a), fc.lift(a, beta)) for a in F.objects)
            cleavage[(key, beta)] = (beta, key, taus)
    opf = SplitFibration(pf.projection, COCARTESIAN, cleavage)
    return C, as_orientation(opf, f.orientation)


def pushforward_arrows(f: SplitFibration, m: SliceMorphism) -> SliceMorphism:
    """f_*(h, x'): postcompose sections with h."""
    h, x1 = m.f, m.a
    src = pushforward_category(f, compose_functors(x1, h))
    tgt = pushforward_category(f, x1)
    C, C1 = src.category, tgt.category
    obj = {}
    for key in C.objects:
        b, vals, mors = key
        obj[key] = (b, tuple(h.obj(v) for v in vals), tuple(h.arr(k) for k in mors))
    mor = {}
    for name in C.arrows:
        beta, key, taus = name
        mor[name] = (beta, obj[key], tuple(h.arr(t) for t in taus))
    return SliceMorphism(Functor(C, C1, obj, mor), tgt.projection)


# ------------------------------------------------------------- adjunctions


def _pullback_unit(f: Functor, z: Functor) -> SliceMorphism:
    """z -> f*(f.z) for postcomposition left adjoint to pullback."""
    fz = compose_functors(f, z)
    tgt = pullback_object(f, fz)
    P = tgt.source
    Z = z.source
    F = Functor(Z, P, {o: (z.obj(o), o) for o in Z.objects}, {m: (z.arr(m), m) for m in Z.arrows})
    return SliceMorphism(F, tgt)


def _pullback_counit(f: Functor, x: Functor) -> SliceMorphism:
    """f.(f*x) -> x, the second projection."""
    P = pullback_category(f, x)
    return SliceMorphism(P[2], x)


def postcompose_adjunction(f: Functor) -> SliceAdjunction:
    """f_! (postcompose) left adjoint to f* (pullback)."""
    return SliceAdjunction(
        lambda z: compose_functors(f, z),
        lambda m: postcompose_arrows(f, m),
        lambda x: pullback_object(f, x),
        lambda m: pullback_arrows(f, m),
        lambda z: _pullback_unit(f, z),
        lambda x: _pullback_counit(f, x),
    )


def pushforward_unit(f: SplitFibration, y: Functor) -> SliceMorphism:
    """y -> f_* f* y."""
    fc = _fibration_of_groupoids(f)
    fy = pullback_object(fc.p, y)
    pf = pushforward_category(fc, fy)
    Y = y.source
    obj = {}
    for o in Y.objects:
        b = y.obj(o)
        F = fiber(fc.p, b)
        obj[o] = (b, tuple((a, o) for a in F.objects), tuple((m, Y.id(o)) for m in F.arrows if not F.is_identity(m)))
    mor = {}
    for n in Y.arrows:
        o, o1 = Y.morphisms[n]
        beta = y.arr(n)
        F = pf.sections[obj[o]][0]
        mor[n] = (beta, obj[o], tuple((fc.lift(a, beta), n) for a in F.objects))
    return SliceMorphism(Functor(Y, pf.category, obj, mor), pf.projection)


def pushforward_counit(f: SplitFibration, x: Functor) -> SliceMorphism:
    """f* f_* x -> x, evaluation of sections."""
    fc = _fibration_of_groupoids(f)
    pf = pushforward_category(fc, x)
    P = pullback_category(fc.p, pf.projection)[0]
    A, X = fc.total, x.source
    obj = {}
    for a, key in P.objects:
        F, s = pf.sections[key]
        obj[(a, key)] = s.obj(a)
    mor = {}
    for m, name in P.arrows:
        beta, key, taus = name
        a, a1 = A.morphisms[m]
        F, s = pf.sections[key]
        tgt_key = pf.category.cod(name)
        F1, s1 = pf.sections[tgt_key]
        l = fc.lift(a, beta)
        vertical = A.comp(m, A.inv(l))
        tau = dict(zip(F.objects, taus))
        mor[(m, name)] = X.comp(s1.arr(vertical), tau[a])
    return SliceMorphism(Functor(P, X, obj, mor), x)


def pushforward_adjunction(f: SplitFibration) -> SliceAdjunction:
    """f* left adjoint to f_* along a split fibration of groupoids."""
    fc = _fibration_of_groupoids(f)
    return SliceAdjunction(
        lambda y: pullback_object(fc.p, y),
        lambda m: pullback_arrows(fc.p, m),
        lambda x: pushforward_category(fc, x).projection,
        lambda m: pushforward_arrows(fc, m),
        lambda y: pushforward_unit(fc, y),
        lambda x: pushforward_counit(fc, x),
    )


def over_functors(x: Functor, y: Functor):
    """All functors k with y.k = x (morphisms x -> y in the slice)."""
    Y = y.source
    over_obj, over_mor = {}, {}
    for o in Y.objects:
        over_obj.setdefault(y.obj(o), []).append(o)
    for n in Y.arrows:
        over_mor.setdefault(y.arr(n), set()).add(n)
    return list(
        search_functors(
            x.source,
            Y,
            lambda o: over_obj.get(x.obj(o), []),
            lambda m, cands: [c for c in cands if c in over_mor.get(x.arr(m), ())],
        )
    )


@dataclass(frozen=True)
class AdjunctionWitness:
    adjunction: SliceAdjunction
    pairs_checked: int


def adjunction_check(f: SplitFibration, ys=None, xs=None) -> tuple:
    """Certify f* -| f_* on the given objects over the base (ys) and over the
    total category (xs): triangle identities, equal hom-set sizes, and
    mutually inverse transposition maps."""
    fc = _fibration_of_groupoids(f)
    A, B = fc.total, fc.base
    ys = list(ys) if ys is not None else [identity_functor(B)]
    xs = list(xs) if xs is not None else [identity_functor(A)]
    adj = pushforward_adjunction(fc)
    report = ValidationReport()
    for side, obj in check_triangles(adj, ys, xs):
        report.add("triangle identity", side)
    pairs = 0
    for y in ys:
        fy = adj.left_obj(y)
        for x in xs:
            gx = adj.right_obj(x)
            left_homs = over_functors(fy, x)
            right_homs = over_functors(y, gx)
            pairs += 1
            if len(left_homs) != len(right_homs):
                report.add("hom-set sizes differ", pairs - 1, len(left_homs), len(right_homs))
            for k in left_homs:
                h = slice_morphism_compose(adj.right_mor(SliceMorphism(k, x)), adj.unit(y))
                back = slice_morphism_compose(adj.counit(x), adj.left_mor(h))
                if back.f != k:
                    report.add("round trip through the base side", pairs - 1)
                    break
            for h in right_homs:
                k = slice_morphism_compose(adj.counit(x), adj.left_mor(SliceMorphism(h, gx)))
                again = slice_morphism_compose(adj.right_mor(k), adj.unit(y))
                if again.f != h:
                    report.add("round trip through the total side", pairs - 1)
                    break
    return AdjunctionWitness(adj, pairs), report


# -------------------------------------------------------------------- mates


def is_pullback_square(sq: Square) -> bool:
    """Is the top-left corner the pullback of the right leg along the bottom?"""
    P = pullback_category(sq.right, sq.bottom)[0]
    try:
        cmp = pair_functor(P, sq.top, sq.left)
    except BoundaryMismatch:
        return False
    return is_isomorphism(cmp)


def _alpha(u: Functor, v: Functor, f: Functor, g: Functor, y: Functor) -> SliceMorphism:
    """alpha at y: u_! f* y -> g* v_! y, (a, y) -> (u a, y)."""
    src = pullback_category(f, y)[0]
    tgt = pullback_object(g, compose_functors(v, y))
    F = Functor(
        src,
        tgt.source,
        {(a, o): (u.obj(a), o) for a, o in src.objects},
        {(m, n): (u.arr(m), n) for m, n in src.arrows},
    )
    return SliceMorphism(F, tgt)


def mate_alpha(sq: Square, m: SliceMorphism) -> Square:
    """Component square (alpha_{b.w}, alpha_b) for a slice morphism (w, b)."""
    f, g, u, v = sq.left, sq.right, sq.top, sq.bottom
    if not sq.commutes():
        raise BoundaryMismatch("square does not commute")
    top = _alpha(u, v, f, g, m.source_ext)
    bottom = _alpha(u, v, f, g, m.a)
    left = pullback_arrows(f, m).f
    right = pullback_arrows(g, postcompose_arrows(v, m)).f
    return Square(left, right, top.f, bottom.f)


def _beta_direct(f: SplitFibration, g: SplitFibration, u: Functor, v: Functor, x: Functor) -> SliceMorphism:
    """beta at x: v* g_* x -> f_* u* x, (b, (d, s)) -> (b, a -> (a, s(u a)))."""
    fc = _fibration_of_groupoids(f)
    gc = _fibration_of_groupoids(g)
    gx = pushforward_category(gc, x)
    src = pullback_category(v, gx.projection)[0]
    ux = pullback_object(u, x)
    tgt = pushforward_category(fc, ux)
    obj = {}
    for b, key in src.objects:
        F = fiber(fc.p, b)
        Fg, s = gx.sections[key]
        obj[(b, key)] = (
            b,
            tuple((a, s.obj(u.obj(a))) for a in F.objects),
            tuple((m, s.arr(u.arr(m))) for m in F.arrows if not F.is_identity(m)),
        )
    mor = {}
    for bb, name in src.arrows:
        beta_d, key, taus = name
        b = src.dom((bb, name))[0]
        Fg, s = gx.sections[key]
        tau = dict(zip(Fg.objects, taus))
        F = fiber(fc.p, b)
        mor[(bb, name)] = (
            bb,
            obj[src.dom((bb, name))],
            tuple((fc.lift(a, bb), tau[u.obj(a)]) for a in F.objects),
        )
    return SliceMorphism(Functor(src, tgt.category, obj, mor), tgt.projection)


def _beta_pasted(f, g, u, v, x, stepwise: bool) -> SliceMorphism:
    """beta as the mate of alpha: R1(counit2 . alpha R2) . unit1, where
    R1 = f_* u*, R2 = v* g_*. ``stepwise`` applies R1 to each factor
    separately instead of to their composite."""
    fc = _fibration_of_groupoids(f)
    gc = _fibration_of_groupoids(g)
    f_adj = pushforward_adjunction(fc)
    g_adj = pushforward_adjunction(gc)
    u_adj = postcompose_adjunction(u)
    v_adj = postcompose_adjunction(v)
    gx = g_adj.right_obj(x)
    r2x = v_adj.right_obj(gx)  # v* g_* x
    # unit of u_! f* -| f_* u* at r2x
    fy = f_adj.left_obj(r2x)
    unit1 = slice_morphism_compose(f_adj.right_mor(u_adj.unit(fy)), f_adj.unit(r2x))
    alpha = _alpha(u, v, fc.p, gc.p, r2x)
    # counit of g* v_! -| v* g_* at x
    counit2 = slice_morphism_compose(g_adj.counit(x), g_adj.left_mor(v_adj.counit(gx)))
    R1 = lambda m: f_adj.right_mor(u_adj.right_mor(m))
    if stepwise:
        return slice_morphism_compose(slice_morphism_compose(R1(counit2), R1(alpha)), unit1)
    return slice_morphism_compose(R1(slice_morphism_compose(counit2, alpha)), unit1)


def mate_beta(sq: Square, f: SplitFibration, g: SplitFibration, m: SliceMorphism, method: str = "direct") -> Square:
    """Component square (beta_{x.h}, beta_x) for a slice morphism (h, x)
    over the top-right corner of a pullback square of fibrations."""
    if sq.left != f.p or sq.right != g.p:
        raise BoundaryMismatch("square legs are not the given fibrations")
    if not sq.commutes() or not is_pullback_square(sq):
        raise NotAPullback("square is not a pullback")
    u, v = sq.top, sq.bottom
    if method == "direct":
        comp = lambda x: _beta_direct(f, g, u, v, x)
    else:
        comp = lambda x: _beta_pasted(f, g, u, v, x, stepwise=(method == "stepwise"))
    top = comp(m.source_ext)
    bottom = comp(m.a)
    gc = _fibration_of_groupoids(g)
    fc = _fibration_of_groupoids(f)
    left = pullback_arrows(v, pushforward_arrows(gc, m)).f
    right = pushforward_arrows(fc, pullback_arrows(u, m)).f
    return Square(left, right, top.f, bottom.f)


def validate_pushforward(f: SplitFibration, x: SplitFibration) -> ValidationReport:
    return validate_split_fibration(pushforward_object(f, x)[1])
