"""Split monos, split reflections and split (op)fibrations, with their
morphisms and composites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .core_cat import (
    AwfsError,
    BoundaryMismatch,
    FinCategory,
    Functor,
    NatTransformation,
    ValidationReport,
    compose_functors,
    identity_functor,
    identity_nat,
    pullback_category,
    render,
    to_terminal,
    validate_functor,
    validate_nat,
)
from .squares import Square

CARTESIAN = "cartesian"
COCARTESIAN = "cocartesian"


class MalformedCleavage(AwfsError):
    pass


class OrientationMismatch(AwfsError):
    pass


class NotAGroupoid(AwfsError):
    pass


class KindMismatch(AwfsError):
    pass


# ------------------------------------------------------------ split monos


@dataclass(frozen=True)
class SplitMono:
    i: Functor
    r: Functor


def validate_split_mono(sm: SplitMono) -> ValidationReport:
    report = ValidationReport()
    report.extend(validate_functor(sm.i), "section: ")
    report.extend(validate_functor(sm.r), "retraction: ")
    if compose_functors(sm.r, sm.i) != identity_functor(sm.i.source):
        report.add("retraction after section is not the identity")
    return report


# ------------------------------------------------------- split reflections


@dataclass(frozen=True)
class SplitReflection:
    """A section with a left adjoint retraction and identity counit.

    ``section`` runs from the small category into the big one,
    ``retraction`` back, and ``unit`` is a transformation from the identity
    of the big category to section after retraction.
    """

    section: Functor
    retraction: Functor
    unit: NatTransformation

    @property
    def small(self) -> FinCategory:
        return self.section.source

    @property
    def big(self) -> FinCategory:
        return self.section.target

    def eta(self, d):
        return self.unit.components[d]

    def as_split_mono(self) -> SplitMono:
        return SplitMono(self.section, self.retraction)


def make_reflection(section: Functor, retraction: Functor, components: Mapping) -> SplitReflection:
    D = section.target
    return SplitReflection(
        section,
        retraction,
        NatTransformation(identity_functor(D), compose_functors(section, retraction), dict(components)),
    )


def validate_split_reflection(sr: SplitReflection) -> ValidationReport:
    R, L = sr.section, sr.retraction
    report = ValidationReport()
    report.extend(validate_functor(R), "section: ")
    report.extend(validate_functor(L), "retraction: ")
    if not report.ok:
        return report
    C, D = sr.small, sr.big
    if L.source != D or L.target != C:
        raise BoundaryMismatch("retraction does not run from the big to the small category")
    if compose_functors(L, R) != identity_functor(C):
        report.add("counit is not the identity")
    if sr.unit.source_functor != identity_functor(D) or sr.unit.target_functor != compose_functors(R, L):
        report.add("unit has the wrong boundary")
        return report
    report.extend(validate_nat(sr.unit), "unit: ")
    if not report.ok:
        return report
    for c in C.objects:
        if sr.eta(R.obj(c)) != D.id(R.obj(c)):
            report.add("unit not the identity on the image of the section", c)
    for d in D.objects:
        if L.arr(sr.eta(d)) != C.id(L.obj(d)):
            report.add("retraction of the unit is not an identity", d)
    return report


def identity_reflection(C: FinCategory) -> SplitReflection:
    I = identity_functor(C)
    return SplitReflection(I, I, identity_nat(I))


def compose_split_reflections(s2: SplitReflection, s1: SplitReflection) -> SplitReflection:
    """Section s2.section after s1.section; units pasted."""
    if s1.big != s2.small:
        raise BoundaryMismatch("sections are not composable")
    R2, L2 = s2.section, s2.retraction
    section = compose_functors(R2, s1.section)
    retraction = compose_functors(s1.retraction, L2)
    E = s2.big
    comps = {e: E.comp(R2.arr(s1.eta(L2.obj(e))), s2.eta(e)) for e in E.objects}
    return make_reflection(section, retraction, comps)


# -------------------------------------------------------- split fibrations


@dataclass(frozen=True, eq=False)
class SplitFibration:
    """A functor with a chosen split cleavage.

    For cartesian orientation the key (e, f) requires cod f = p(e) and the
    lift ends at e; for cocartesian, dom f = p(e) and the lift starts at e.
    """

    p: Functor
    orientation: str
    cleavage: Mapping

    @property
    def total(self) -> FinCategory:
        return self.p.source

    @property
    def base(self) -> FinCategory:
        return self.p.target

    def lift(self, e, f):
        try:
            return self.cleavage[(e, f)]
        except KeyError:
            raise MalformedCleavage(f"no lift of {render(f)} at {render(e)}") from None

    def transport(self, e, f):
        """The far endpoint of the chosen lift."""
        E = self.total
        m = self.lift(e, f)
        return E.dom(m) if self.orientation == CARTESIAN else E.cod(m)

    def keys(self):
        """Every (object, base morphism) pair the cleavage must cover."""
        E, B = self.total, self.base
        for e in E.objects:
            b = self.p.obj(e)
            arrows = B.into(b) if self.orientation == CARTESIAN else B.out_of(b)
            for f in arrows:
                yield e, f

    def __eq__(self, other):
        if not isinstance(other, SplitFibration):
            return NotImplemented
        return self.orientation == other.orientation and self.cleavage == other.cleavage and self.p == other.p

    def __hash__(self):
        return hash((self.orientation, len(self.cleavage)))


def _is_cartesian(E: FinCategory, p: Functor, l) -> bool:
    e1, e = E.morphisms[l]
    B = p.target
    f = p.arr(l)
    b1 = p.obj(e1)
    for x in E.objects:
        seen = set()
        for k in E.hom(x, e1):
            pair = (E.comp(l, k), p.arr(k))
            if pair in seen:
                return False
            seen.add(pair)
        want = 0
        for h in E.hom(x, e):
            ph = p.arr(h)
            for g in B.hom(p.obj(x), b1):
                if B.comp(f, g) == ph:
                    want += 1
        if want != len(seen):
            return False
    return True


def _is_cocartesian(E: FinCategory, p: Functor, l) -> bool:
    e, e1 = E.morphisms[l]
    B = p.target
    f = p.arr(l)
    b1 = p.obj(e1)
    for x in E.objects:
        seen = set()
        for k in E.hom(e1, x):
            pair = (E.comp(k, l), p.arr(k))
            if pair in seen:
                return False
            seen.add(pair)
        want = 0
        for h in E.hom(e, x):
            ph = p.arr(h)
            for g in B.hom(b1, p.obj(x)):
                if B.comp(g, f) == ph:
                    want += 1
        if want != len(seen):
            return False
    return True


def is_universal_lift(sf: SplitFibration, l) -> bool:
    check = _is_cartesian if sf.orientation == CARTESIAN else _is_cocartesian
    return check(sf.total, sf.p, l)


def validate_split_fibration(sf: SplitFibration, universal: bool = True) -> ValidationReport:
    if sf.orientation not in (CARTESIAN, COCARTESIAN):
        raise MalformedCleavage(f"unknown orientation {sf.orientation!r}")
    report = ValidationReport()
    report.extend(validate_functor(sf.p), "projection: ")
    if not report.ok:
        return report
    E, B, p = sf.total, sf.base, sf.p
    keys = list(sf.keys())
    for key in keys:
        if key not in sf.cleavage:
            raise MalformedCleavage(f"no lift of {render(key[1])} at {render(key[0])}")
        if sf.cleavage[key] not in E.morphisms:
            raise MalformedCleavage(f"lift at {render(key)} is not a morphism")
    if len(sf.cleavage) != len(keys):
        raise MalformedCleavage("cleavage has entries that are not lifting keys")
    cart = sf.orientation == CARTESIAN
    for e, f in keys:
        l = sf.cleavage[(e, f)]
        if p.arr(l) != f:
            report.add("lift not over its base morphism", e, f)
            continue
        end = E.cod(l) if cart else E.dom(l)
        if end != e:
            report.add("lift has the wrong endpoint", e, f)
            continue
        if universal and not is_universal_lift(sf, l):
            report.add("lift is not " + sf.orientation, e, f)
    if not report.ok:
        return report
    for e in E.objects:
        if sf.cleavage[(e, B.id(p.obj(e)))] != E.id(e):
            report.add("splitting: identity not lifted to identity", e)
    for e, g in keys:
        lg = sf.cleavage[(e, g)]
        if cart:
            e1 = E.dom(lg)
            for f in B.into(B.dom(g)):
                whole = sf.cleavage[(e, B.comp(g, f))]
                if whole != E.comp(lg, sf.cleavage[(e1, f)]):
                    report.add("splitting: composite not lifted to composite", e, g, f)
        else:
            e1 = E.cod(lg)
            for h in B.out_of(B.cod(g)):
                whole = sf.cleavage[(e, B.comp(h, g))]
                if whole != E.comp(sf.cleavage[(e1, h)], lg):
                    report.add("splitting: composite not lifted to composite", e, h, g)
    return report


def identity_fibration(C: FinCategory, orientation: str = CARTESIAN) -> SplitFibration:
    I = identity_functor(C)
    cleavage = {}
    for e in C.objects:
        arrows = C.into(e) if orientation == CARTESIAN else C.out_of(e)
        for f in arrows:
            cleavage[(e, f)] = f
    return SplitFibration(I, orientation, cleavage)


def compute_inverses(C: FinCategory) -> Optional[dict]:
    inv = {}
    for m in C.arrows:
        a, b = C.morphisms[m]
        for n in C.hom(b, a):
            if C.comp(n, m) == C.id(a) and C.comp(m, n) == C.id(b):
                inv[m] = n
                break
        else:
            return None
    return inv


def grothendieck(B: FinCategory, fibers: Mapping, action: Mapping, orientation: str = CARTESIAN) -> SplitFibration:
    """Split fibration from a strict functor into categories.

    ``fibers[b]`` is a category and ``action[f]`` a functor between fibers:
    contravariant (fiber of cod to fiber of dom) for cartesian orientation,
    covariant for cocartesian. Objects are pairs (b, x); morphisms are pairs
    (f, k) with k a morphism in the fiber over the domain (cartesian) or
    over the codomain (cocartesian).
    """
    cart = orientation == CARTESIAN
    objs = [(b, x) for b in B.objects for x in fibers[b].objects]
    morphs = {}
    for f in B.arrows:
        b, b1 = B.morphisms[f]
        F = action[f]
        for x in fibers[b].objects:
            for x1 in fibers[b1].objects:
                if cart:
                    hom = fibers[b].hom(x, F.obj(x1))
                else:
                    hom = fibers[b1].hom(F.obj(x), x1)
                for k in hom:
                    morphs[(f, k)] = ((b, x), (b1, x1))
    ids = {(b, x): (B.id(b), fibers[b].id(x)) for b, x in objs}
    comp = {}
    out_of = {}
    for m, (s, t) in morphs.items():
        out_of.setdefault(s, []).append(m)
    for (f, k), (_, mid) in morphs.items():
        for g, l in out_of.get(mid, ()):
            gf = B.comp(g, f)
            if cart:
                b = B.dom(f)
                comp[((g, l), (f, k))] = (gf, fibers[b].comp(action[f].arr(l), k))
            else:
                b2 = B.cod(g)
                comp[((g, l), (f, k))] = (gf, fibers[b2].comp(l, action[g].arr(k)))
    E = FinCategory(tuple(objs), morphs, ids, comp)
    inv = compute_inverses(E) if B.is_groupoid and all(fibers[b].is_groupoid for b in B.objects) else None
    if inv is not None:
        E = FinCategory(E.objects, morphs, ids, comp, inv)
    p = Functor(E, B, {o: o[0] for o in objs}, {m: m[0] for m in morphs})
    cleavage = {}
    for (b1, x1) in objs:
        if cart:
            for f in B.into(b1):
                b = B.dom(f)
                cleavage[((b1, x1), f)] = (f, fibers[b].id(action[f].obj(x1)))
        else:
            for f in B.out_of(b1):
                b2 = B.cod(f)
                cleavage[((b1, x1), f)] = (f, fibers[b2].id(action[f].obj(x1)))
    return SplitFibration(p, orientation, cleavage)


def product_fibration(B: FinCategory, K: FinCategory, orientation: str = CARTESIAN) -> SplitFibration:
    """The projection B x K -> B with lifts (f, id)."""
    I = identity_functor(K)
    return grothendieck(B, {b: K for b in B.objects}, {f: I for f in B.arrows}, orientation)


def compose_split_fibrations(p: SplitFibration, q: SplitFibration) -> SplitFibration:
    """q after p: lift along q first, then along p."""
    if p.base != q.total:
        raise BoundaryMismatch("base of the first fibration is not the total category of the second")
    if p.orientation != q.orientation:
        raise OrientationMismatch("cannot compose a fibration with an opfibration")
    qp = compose_functors(q.p, p.p)
    cleavage = {}
    for e in p.total.objects:
        b = p.p.obj(e)
        for (b_, f) in _keys_at(q, b):
            cleavage[(e, f)] = p.lift(e, q.lift(b, f))
    return SplitFibration(qp, p.orientation, cleavage)


def _keys_at(sf: SplitFibration, e):
    D = sf.base
    d = sf.p.obj(e)
    arrows = D.into(d) if sf.orientation == CARTESIAN else D.out_of(d)
    return [(e, f) for f in arrows]


def pullback_square(sf: SplitFibration, v: Functor) -> tuple:
    """Pull sf back along v; returns the new fibration and the square
    (top: projection to the old total, bottom: v)."""
    if v.target != sf.base:
        raise BoundaryMismatch("substitution does not land in the base")
    P, pe, pb = pullback_category(sf.p, v)
    B1 = v.source
    cleavage = {}
    for (e, b1) in P.objects:
        arrows = B1.into(b1) if sf.orientation == CARTESIAN else B1.out_of(b1)
        for f1 in arrows:
            cleavage[((e, b1), f1)] = (sf.lift(e, v.arr(f1)), f1)
    pulled = SplitFibration(pb, sf.orientation, cleavage)
    return pulled, Square(pb, sf.p, pe, v)


def pullback_split_fibration(sf: SplitFibration, v: Functor) -> SplitFibration:
    return pullback_square(sf, v)[0]


def fibration_opfibration_convert(sf: SplitFibration) -> SplitFibration:
    """Flip the orientation of a split fibration of groupoids by inverting
    chosen lifts of inverse base morphisms."""
    E, B = sf.total, sf.base
    if not (E.is_groupoid and B.is_groupoid):
        raise NotAGroupoid("orientation can only be flipped between groupoids")
    flipped = COCARTESIAN if sf.orientation == CARTESIAN else CARTESIAN
    cleavage = {}
    for e in E.objects:
        b = sf.p.obj(e)
        arrows = B.out_of(b) if flipped == COCARTESIAN else B.into(b)
        for f in arrows:
            cleavage[(e, f)] = E.inv(sf.lift(e, B.inv(f)))
    return SplitFibration(sf.p, flipped, cleavage)


def as_orientation(sf: SplitFibration, orientation: str) -> SplitFibration:
    return sf if sf.orientation == orientation else fibration_opfibration_convert(sf)


def terminal_fibration(C: FinCategory, orientation: str = CARTESIAN) -> SplitFibration:
    """C -> 1, lifting the single identity to identities."""
    p = to_terminal(C)
    (o,) = p.target.objects
    i = p.target.id(o)
    return SplitFibration(p, orientation, {(e, i): C.id(e) for e in C.objects})


# -------------------------------------------------------- structured squares

MONO, REFLECTION, FIBRATION = "mono", "reflection", "fibration"


@dataclass(frozen=True)
class StructuredSquare:
    """A square whose vertical legs carry structure: witnesses are
    (structured left leg, structured right leg)."""

    square: Square
    kind: str
    witnesses: tuple


def _leg(w):
    if isinstance(w, SplitMono):
        return w.i
    if isinstance(w, SplitReflection):
        return w.section
    if isinstance(w, SplitFibration):
        return w.p
    raise KindMismatch(f"not a structured map: {type(w).__name__}")


_KIND_TYPES = {MONO: SplitMono, REFLECTION: SplitReflection, FIBRATION: SplitFibration}


def check_structured_square(ss: StructuredSquare) -> ValidationReport:
    if ss.kind not in _KIND_TYPES:
        raise KindMismatch(f"unknown kind {ss.kind!r}")
    w1, w2 = ss.witnesses
    if not (isinstance(w1, _KIND_TYPES[ss.kind]) and isinstance(w2, _KIND_TYPES[ss.kind])):
        raise KindMismatch(f"witnesses are not both of kind {ss.kind}")
    sq = ss.square
    if _leg(w1) != sq.left or _leg(w2) != sq.right:
        raise KindMismatch("square legs are not the structured maps")
    report = ValidationReport()
    if not sq.commutes():
        report.add("square does not commute")
        return report
    u, v = sq.top, sq.bottom
    if ss.kind == MONO:
        if compose_functors(u, w1.r) != compose_functors(w2.r, v):
            report.add("retractions do not commute with the square")
    elif ss.kind == REFLECTION:
        if compose_functors(u, w1.retraction) != compose_functors(w2.retraction, v):
            report.add("retractions do not commute with the square")
        else:
            for d in w1.big.objects:
                if v.arr(w1.eta(d)) != w2.eta(v.obj(d)):
                    report.add("unit compatibility", d)
    else:
        if w1.orientation != w2.orientation:
            raise OrientationMismatch("square between a fibration and an opfibration")
        for (e, f), l in w1.cleavage.items():
            if u.arr(l) != w2.lift(u.obj(e), v.arr(f)):
                report.add("cleavage not preserved", e, f)
    return report


# ------------------------------------------------------------ sliced maps


@dataclass(frozen=True)
class Sliced:
    """A structured map together with an extension of its codomain to a
    base category: ``ext`` starts at the big category of a reflection or at
    the base of a fibration."""

    structure: object
    ext: Functor

    @property
    def leg(self) -> Functor:
        return _leg(self.structure)

    @property
    def source_ext(self) -> Functor:
        return compose_functors(self.ext, self.leg)


def sliced(structure, ext: Functor) -> Sliced:
    if ext.source != _leg(structure).target:
        raise BoundaryMismatch("extension does not start at the codomain of the map")
    return Sliced(structure, ext)
