"""Fixture files, seeded generators, corpora for the law checks, and the
command line front end."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Any, Optional

from .core_cat import (
    AwfsError,
    FinCategory,
    Functor,
    NatTransformation,
    ValidationReport,
    arrow_category,
    bz2,
    category,
    compose_functors,
    cyclic_group,
    discrete,
    disjoint_union,
    identity_functor,
    interval,
    is_isomorphism,
    relabel,
    render,
    search_functors,
    terminal,
    to_terminal,
    validate_category,
    validate_functor,
    validate_nat,
)
from .frobenius import (
    beck_chevalley_check,
    filler_agreement,
    frobenius_equations,
    frobenius_transport,
    frobenius_preserves_composition,
    frobenius_preserves_squares,
    strong_frobenius_checks,
)
from .lifting import (
    CANONICAL,
    HorizontalCase,
    arbitrary_filler_operation,
    VerticalCase,
    canonical_lift,
    check_fillers,
    check_horizontal_law,
    check_vertical_law,
    compose_lefts,
    compose_rights,
    slice_lifting_operation,
)
from .model import (
    TermOf,
    TypeOver,
    app,
    app_generic,
    id_type,
    lambda_,
    path_object_report,
    pi_type,
    sigma_type,
    substitute_term,
)
from .squares import (
    SliceMorphism,
    Square,
    compose_squares_h,
    compose_squares_v,
    enumerate_fillers,
    identity_square_h,
    identity_square_v,
)
from .structured import (
    CARTESIAN,
    COCARTESIAN,
    Sliced,
    SplitFibration,
    SplitReflection,
    grothendieck,
    make_reflection,
    pullback_square,
    validate_split_fibration,
    validate_split_reflection,
)
from .transport import adjunction_check, mate_alpha, mate_beta

MAX_OBJECTS = 8


class SizeOutOfRange(AwfsError):
    pass


class ParseError(AwfsError):
    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(AwfsError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# ================================================================ generators


def random_functor(rng: random.Random, S: FinCategory, T: FinCategory, objects=None, morphisms=None):
    """A random functor S -> T, or None when none was found.

    Shuffled search can wander, so it restarts a few times under a step
    budget before falling back to the complete deterministic search.
    """
    for _ in range(4):
        F = next(search_functors(S, T, objects, morphisms, rng=rng, budget=500), None)
        if F is not None:
            return F
    return next(search_functors(S, T, objects, morphisms), None)


def functor_over(rng, S: FinCategory, p: Functor, below: Functor):
    """A random functor k: S -> p.source with p.k = below, or None."""
    E = p.source
    over = {}
    for e in E.objects:
        over.setdefault(p.obj(e), []).append(e)
    return random_functor(
        rng,
        S,
        E,
        lambda x: over.get(below.obj(x), []),
        lambda m, cands: [k for k in cands if p.arr(k) == below.arr(m)],
    )


def _relabel_randomly(rng, C: FinCategory, tag: str) -> FinCategory:
    objs = list(C.objects)
    names = [f"{tag}{k}" for k in range(len(objs))]
    rng.shuffle(names)
    omap = dict(zip(objs, names))
    mors = list(C.arrows)
    mnames = [f"{tag}m{k}" for k in range(len(mors))]
    rng.shuffle(mnames)
    return relabel(C, omap, dict(zip(mors, mnames)))[0]


def gen_groupoid(rng: random.Random, max_objects: int = 3, relabelled: bool = True) -> FinCategory:
    """Disjoint union of one-object cyclic groups and intervals."""
    parts, size = [], 0
    budget = rng.randint(1, max_objects)
    while size < budget:
        if budget - size >= 2 and rng.random() < 0.35:
            parts.append(interval())
            size += 2
        else:
            parts.append(cyclic_group(rng.randint(1, 4)))
            size += 1
    G = parts[0] if len(parts) == 1 else disjoint_union(parts)
    return _relabel_randomly(rng, G, "o") if relabelled else G


def _chain_poset(n: int) -> FinCategory:
    objs = [str(k) for k in range(n)]
    name = lambda i, j: f"{i}{j}" if i != j else f"1_{i}"
    morphs = [(name(i, j), objs[i], objs[j]) for i in range(n) for j in range(i, n)]
    comp = [(name(j, k), name(i, j), name(i, k)) for i in range(n) for j in range(i, n) for k in range(j, n)]
    return category(objs, morphs, {objs[i]: name(i, i) for i in range(n)}, comp)


def gen_category(rng: random.Random, max_objects: int = 3) -> FinCategory:
    """Groupoids, chains, and categories with freely adjoined retracts."""
    roll = rng.random()
    if roll < 0.45:
        return gen_groupoid(rng, max_objects, relabelled=False)
    if roll < 0.7 or max_objects < 2:
        return _chain_poset(rng.randint(1, min(3, max_objects)))
    D = gen_groupoid(rng, max(1, max_objects - 1), relabelled=False)
    extra = rng.randint(1, max_objects - len(D.objects)) if max_objects > len(D.objects) else 0
    return free_reflection(D, {k: rng.choice(D.objects) for k in range(extra)}, invertible=False).big


# ------------------------------------------------------------- reflections


def free_reflection(D: FinCategory, targets: dict, invertible: bool = False) -> SplitReflection:
    """Adjoin new objects x with a unit x -> t(x) into D.

    ``targets`` maps a key to an object of D. With ``invertible`` the unit is
    an isomorphism and the new objects are copies; otherwise maps out of a
    new object are exactly the maps out of its target.
    """
    level = len(D.objects)
    t = {o: o for o in D.objects}
    new = []
    for k, d in targets.items():
        x = ("ret", level, k)
        t[x] = d
        new.append(x)
    base = D.object_set
    objs = list(D.objects) + new

    def name(a, m, b):
        return m if a in base and b in base else (a, m, b)

    def hom(a, b):
        if not invertible and b not in base:
            return [D.id(t[a])] if a == b else []
        return list(D.hom(t[a], t[b]))

    morphs, under = {}, {}
    for a in objs:
        for b in objs:
            for m in hom(a, b):
                n = name(a, m, b)
                morphs[n] = (a, b)
                under[n] = m
    out = {}
    for n, (a, b) in morphs.items():
        out.setdefault(a, []).append(n)
    comp = {}
    for f, (a, b) in morphs.items():
        for g in out[b]:
            c = morphs[g][1]
            comp[(g, f)] = name(a, D.comp(under[g], under[f]), c)
    ids = {a: name(a, D.id(t[a]), a) for a in objs}
    inv = None
    if invertible and D.is_groupoid:
        inv = {n: name(b, D.inv(under[n]), a) for n, (a, b) in morphs.items()}
    C = FinCategory(tuple(objs), morphs, ids, comp, inv)
    R = Functor(D, C, {d: d for d in D.objects}, {m: m for m in D.arrows})
    L = Functor(C, D, {a: t[a] for a in objs}, dict(under))
    unit = {a: name(a, D.id(t[a]), t[a]) for a in objs}
    return make_reflection(R, L, unit)


def _new_objects(sr: SplitReflection):
    base = sr.small.object_set
    return [o for o in sr.big.objects if o not in base]


def reflection_square(rng, sr1: SplitReflection, sr: SplitReflection, w: Functor) -> Square:
    """A random reflection square (w, x): sr1 -> sr between free reflections."""
    L1, L = sr1.retraction, sr.retraction
    C1, C = sr1.big, sr.big
    choice = {d: w.obj(d) for d in sr1.small.objects}
    for x1 in _new_objects(sr1):
        target = w.obj(L1.obj(x1))
        options = [target] + [x for x in _new_objects(sr) if L.obj(x) == target]
        choice[x1] = rng.choice(options)
    base = sr.small.object_set

    def name(a, m, b):
        return m if a in base and b in base else (a, m, b)

    mor = {n: name(choice[C1.dom(n)], w.arr(L1.arr(n)), choice[C1.cod(n)]) for n in C1.arrows}
    x = Functor(C1, C, choice, mor)
    return Square(sr1.section, sr.section, w, x)


# -------------------------------------------------------------- fibrations


def _automorphisms(groupoid_only: bool):
    """Fibre categories with an automorphism and its order."""
    out = []
    for k in (1, 2, 3):
        names = [str(i) for i in range(k)]
        K = discrete(names)
        rot = Functor(K, K, {names[i]: names[(i + 1) % k] for i in range(k)},
                      {f"1_{names[i]}": f"1_{names[(i + 1) % k]}" for i in range(k)})
        out.append((K, rot, k))
    for m in (2, 3):
        K = cyclic_group(m, prefix="h")
        names = [f"h{i}" for i in range(m)]
        inv = Functor(K, K, {"*": "*"}, {names[i]: names[(-i) % m] for i in range(m)})
        out.append((K, inv, 2 if m > 2 else 1))
    I = interval()
    swap = Functor(I, I, {"a": "b", "b": "a"}, {"1_a": "1_b", "1_b": "1_a", "ab": "ba", "ba": "ab"})
    out.append((I, swap, 2))
    if not groupoid_only:
        A = arrow_category()
        out.append((A, identity_functor(A), 1))
    return out


def _power(F: Functor, k: int) -> Functor:
    out = identity_functor(F.source)
    for _ in range(k):
        out = compose_functors(F, out)
    return out


def _components(B: FinCategory):
    parent = {o: o for o in B.objects}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for m in B.arrows:
        a, b = B.morphisms[m]
        parent[find(a)] = find(b)
    return {o: find(o) for o in B.objects}


def _exponent(name) -> int:
    return 0 if name == "e" else int(name[1:])


def gen_fibration(rng, B: FinCategory, orientation=CARTESIAN, max_fiber: int = 3, groupoid_only=None) -> SplitFibration:
    """Grothendieck construction of a twisted family of fibres, one fibre
    and twist per connected component of the base."""
    if groupoid_only is None:
        groupoid_only = B.is_groupoid
    options = [o for o in _automorphisms(groupoid_only) if len(o[0].objects) <= max_fiber]
    comp = _components(B)
    fibers, twists = {}, {}
    for root in sorted(set(comp.values()), key=render):
        K, aut, order = rng.choice(options)
        members = [o for o in B.objects if comp[o] == root]
        sub = FinCategory(
            tuple(members),
            {m: v for m, v in B.morphisms.items() if comp[v[0]] == root},
            {o: B.id(o) for o in members},
            {k: v for k, v in B.composition.items() if comp[B.dom(k[1])] == root},
        )
        phi = random_functor(rng, sub, cyclic_group(order)) if order > 1 else None
        for o in members:
            fibers[o] = K
        for m in sub.arrows:
            twists[m] = _power(aut, _exponent(phi.arr(m))) if phi else identity_functor(K)
    return grothendieck(B, fibers, twists, orientation)


def gen_sliced_reflection(rng, base: FinCategory, max_small: int = 2, max_new: int = 2, groupoid: bool = False):
    D = gen_groupoid(rng, max_small, relabelled=False) if groupoid else gen_category(rng, max_small)
    sr = free_reflection(D, {k: rng.choice(D.objects) for k in range(rng.randint(1, max_new))}, invertible=groupoid)
    U = random_functor(rng, sr.big, base)
    return Sliced(sr, U)


def gen_problem(rng, sr: SplitReflection, sf: SplitFibration, attempts: int = 6) -> Optional[Square]:
    for _ in range(attempts):
        v = random_functor(rng, sr.big, sf.base)
        if v is None:
            return None
        u = functor_over(rng, sr.small, sf.p, compose_functors(v, sr.section))
        if u is not None:
            return Square(sr.section, sf.p, u, v)
    return None


def _fits(limit_objects, limit_morphisms, *cats):
    return all(len(C.objects) <= limit_objects and len(C.morphisms) <= limit_morphisms for C in cats)


# ================================================================== corpora


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 0
    cases: int = 200
    max_objects: int = 5
    max_morphisms: int = 40
    max_fiber: int = 3


def lifting_corpus(cfg: CorpusConfig) -> list:
    """(reflection, fibration, problem) triples."""
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.cases:
        left = gen_sliced_reflection(rng, terminal(), 2, 2).structure
        B = gen_category(rng, 2)
        sf = gen_fibration(rng, B, max_fiber=2)
        if not _fits(cfg.max_objects, cfg.max_morphisms, left.big, sf.total):
            continue
        problem = gen_problem(rng, left, sf)
        if problem is not None:
            out.append((left, sf, problem))
    return out


def horizontal_corpus(cfg: CorpusConfig) -> list:
    rng = random.Random(cfg.seed + 1)
    out = []
    while len(out) < cfg.cases:
        D = gen_category(rng, 2)
        left = free_reflection(D, {k: rng.choice(D.objects) for k in range(rng.randint(1, 2))}, rng.random() < 0.3)
        D1 = gen_category(rng, 2)
        w = random_functor(rng, D1, D)
        left1 = free_reflection(D1, {k: rng.choice(D1.objects) for k in range(rng.randint(0, 2))})
        lsq = reflection_square(rng, left1, left, w)
        B1 = gen_category(rng, 2)
        right1 = gen_fibration(rng, B1, max_fiber=2)
        B = gen_category(rng, 2)
        z = random_functor(rng, B, B1)
        right, rsq = pullback_square(right1, z)
        if not _fits(cfg.max_objects, cfg.max_morphisms, left.big, left1.big, right.total, right1.total):
            continue
        problem = gen_problem(rng, left, right)
        if problem is None:
            continue
        out.append(HorizontalCase(left, right, problem, lsq, rsq, left1, right1))
    return out


def vertical_corpus(cfg: CorpusConfig) -> list:
    rng = random.Random(cfg.seed + 2)
    out = []
    while len(out) < cfg.cases:
        D1 = gen_category(rng, 2)
        f1 = free_reflection(D1, {k: rng.choice(D1.objects) for k in range(rng.randint(0, 1))})
        D2 = f1.big
        f = free_reflection(D2, {k: rng.choice(D2.objects) for k in range(rng.randint(0, 2))})
        B3 = gen_category(rng, 2)
        g = gen_fibration(rng, B3, max_fiber=2)
        g1 = gen_fibration(rng, g.total, max_fiber=2)
        if not _fits(cfg.max_objects, cfg.max_morphisms, f.big, g.total, g1.total):
            continue
        ff = compose_lefts(f, f1)
        gg = compose_rights(g, g1)
        problem = gen_problem(rng, ff, gg)
        if problem is None:
            continue
        out.append(VerticalCase(f1, f, g1, g, problem))
    return out


@dataclass(frozen=True)
class FrobeniusCase:
    fibration: SplitFibration  # cocartesian
    reflection: Sliced
    prime: Sliced  # reflection with a square into ``reflection``
    square: Square
    first: Sliced  # composable with ``reflection`` on the small side


def frobenius_corpus(cfg: CorpusConfig) -> list:
    rng = random.Random(cfg.seed + 3)
    out = []
    while len(out) < cfg.cases:
        B = gen_category(rng, 2)
        P = gen_fibration(rng, B, COCARTESIAN, max_fiber=2)
        E0 = gen_category(rng, 2)
        first_r = free_reflection(E0, {k: rng.choice(E0.objects) for k in range(rng.randint(0, 1))})
        D = first_r.big
        sr = free_reflection(D, {k: rng.choice(D.objects) for k in range(rng.randint(1, 2))})
        U = random_functor(rng, sr.big, B)
        refl = Sliced(sr, U)
        first = Sliced(first_r, compose_functors(U, sr.section))
        D1 = gen_category(rng, 2)
        w = random_functor(rng, D1, D)
        sr1 = free_reflection(D1, {k: rng.choice(D1.objects) for k in range(rng.randint(0, 2))})
        sq = reflection_square(rng, sr1, sr, w)
        prime = Sliced(sr1, compose_functors(U, sq.bottom))
        if not _fits(cfg.max_objects + 1, cfg.max_morphisms, P.total, sr.big, sr1.big):
            continue
        out.append(FrobeniusCase(P, refl, prime, sq, first))
    return out


@dataclass(frozen=True)
class StrongCase:
    fibration: SplitFibration
    over_base: tuple
    over_total: tuple


def strong_corpus(cfg: CorpusConfig) -> list:
    rng = random.Random(cfg.seed + 4)
    out = []
    while len(out) < cfg.cases:
        B = gen_category(rng, 2)
        P = gen_fibration(rng, B, COCARTESIAN, max_fiber=2)
        if not _fits(cfg.max_objects, cfg.max_morphisms, P.total):
            continue
        below = tuple(gen_sliced_reflection(rng, B) for _ in range(2))
        above = tuple(gen_sliced_reflection(rng, P.total) for _ in range(2))
        out.append(StrongCase(P, below, above))
    return out


def adjunction_corpus(cfg: CorpusConfig) -> list:
    """Groupoid fibrations with small fibres, with objects on both sides."""
    rng = random.Random(cfg.seed + 5)
    out = []
    while len(out) < cfg.cases:
        B = gen_groupoid(rng, 2)
        f = gen_fibration(rng, B, max_fiber=min(3, cfg.max_fiber))
        x = gen_fibration(rng, f.total, max_fiber=2)
        y = gen_fibration(rng, B, max_fiber=2)
        # hom-sets are enumerated in full, so keep both sides small
        if not _fits(4, 12, f.total, x.total, y.total):
            continue
        out.append((f, [identity_functor(B), y.p], [identity_functor(f.total), x.p]))
    return out


@dataclass(frozen=True)
class AgreementCase:
    fibration: SplitFibration  # cocartesian, groupoids
    family: SplitFibration  # cartesian over the total category
    reflection: Sliced
    top: Functor
    bottom: Functor


def agreement_corpus(cfg: CorpusConfig) -> list:
    from .frobenius import pushforward_structure

    rng = random.Random(cfg.seed + 6)
    out = []
    while len(out) < cfg.cases:
        B = gen_groupoid(rng, 2)
        P = gen_fibration(rng, B, COCARTESIAN, max_fiber=2)
        g = gen_fibration(rng, P.total, max_fiber=2)
        if not _fits(6, 60, P.total, g.total):
            continue
        refl = gen_sliced_reflection(rng, B, 2, 1, groupoid=True)
        pushed = pushforward_structure(P, Sliced(g, identity_functor(P.total)))
        pf, ext = pushed.structure, pushed.ext
        sr = refl.structure
        # the transposition checks the triangles at the reflection itself,
        # which costs roughly (big arrows) to the power of the fibre size
        fibre = len(P.total.arrows) / len(B.arrows)
        if fibre * len(sr.big.arrows) > 24 or len(pf.total.arrows) > 40:
            continue
        for _ in range(3):
            bottom = functor_over(rng, sr.big, ext, refl.ext)
            if bottom is None:
                break
            top = functor_over(rng, sr.small, pf.p, compose_functors(bottom, sr.section))
            if top is not None:
                out.append(AgreementCase(P, g, refl, top, bottom))
                break
    return out


@dataclass(frozen=True)
class PullbackCase:
    square: Square
    pulled: SplitFibration
    fibration: SplitFibration
    reflections: tuple  # over the base of ``pulled``
    family: SplitFibration  # over the total category of ``fibration``


def bc_corpus(cfg: CorpusConfig) -> list:
    rng = random.Random(cfg.seed + 7)
    out = []
    while len(out) < cfg.cases:
        B = gen_groupoid(rng, 2)
        P = gen_fibration(rng, B, COCARTESIAN, max_fiber=2)
        B1 = gen_groupoid(rng, 2)
        v = random_functor(rng, B1, B)
        Q, sq = pullback_square(P, v)
        S = gen_fibration(rng, P.total, max_fiber=2)
        if not _fits(6, 60, P.total, Q.total, S.total):
            continue
        refls = tuple(gen_sliced_reflection(rng, B1, groupoid=rng.random() < 0.5) for _ in range(2))
        out.append(PullbackCase(sq, Q, P, refls, S))
    return out


# ------------------------------------------------------------- model fixtures


def pi_point_count_fixture():
    """Context 1, T the two point type, S with fibres of sizes 2 and 3."""
    from .structured import terminal_fibration

    D2 = discrete(["0", "1"])
    T = TypeOver(terminal_fibration(D2))
    X = disjoint_union([discrete(["x", "y"]), discrete(["u", "v", "w"])])
    names = ["0", "1"]
    p = Functor(X, D2, {o: names[o[0]] for o in X.objects}, {m: f"1_{names[m[0]]}" for m in X.arrows})
    S = TypeOver(SplitFibration(p, CARTESIAN, {(o, p.arr(X.id(o))): X.id(o) for o in X.objects}))
    return T, S


def bz2_type():
    from .structured import terminal_fibration

    return TypeOver(terminal_fibration(bz2()))


def twisted_bz2_type():
    D2 = discrete(["0", "1"])
    swap = Functor(D2, D2, {"0": "1", "1": "0"}, {"1_0": "1_1", "1_1": "1_0"})
    return TypeOver(grothendieck(bz2(), {"*": D2}, {"e": identity_functor(D2), "s": swap}))


# ---------------------------------------------------------------- mutants
#
# Deliberately broken structures. Each one breaks a law by construction, so
# a checker that accepts any of them is vacuous.


def broken_bz2() -> FinCategory:
    """BZ2 with s.s redefined to s: still associative, no longer a group."""
    C = bz2()
    comp = dict(C.composition)
    comp[("s", "s")] = "s"
    return FinCategory(C.objects, dict(C.morphisms), dict(C.identities), comp, dict(C.inverses))


def _vertical_automorphisms(sf: SplitFibration, x) -> list:
    E, p = sf.total, sf.p
    ident = sf.base.id(p.obj(x))
    return [m for m in E.hom(x, x) if m != E.id(x) and p.arr(m) == ident and E.is_iso(m)]


def break_identity_lift(sf: SplitFibration) -> Optional[SplitFibration]:
    """Lift some identity to a non-identity vertical automorphism."""
    for e in sf.total.objects:
        autos = _vertical_automorphisms(sf, e)
        if autos:
            cleavage = dict(sf.cleavage)
            cleavage[(e, sf.base.id(sf.p.obj(e)))] = autos[0]
            return SplitFibration(sf.p, sf.orientation, cleavage)
    return None


def break_composite_lift(sf: SplitFibration) -> Optional[SplitFibration]:
    """Twist one lift by a vertical automorphism at its far end.

    The twisted lift is still universal. It is chosen where some other
    lift composes with it on the far side to a third lift, so the three can
    no longer satisfy the splitting equation. When the only partner is the
    twisted lift itself the twist may cancel, which is why those are skipped.
    """
    E, B = sf.total, sf.base
    cart = sf.orientation == CARTESIAN
    for (e, g), l in sorted(sf.cleavage.items(), key=lambda kv: render(kv[0])):
        if B.is_identity(g):
            continue
        end = E.dom(l) if cart else E.cod(l)
        far = B.dom(g) if cart else B.cod(g)
        composable = B.into(far) if cart else B.out_of(far)
        partners = [
            f
            for f in composable
            if not B.is_identity(f)
            and (end, f) != (e, g)
            and (B.comp(g, f) if cart else B.comp(f, g)) != g
        ]
        if not partners:
            continue
        autos = _vertical_automorphisms(sf, end)
        if autos:
            cleavage = dict(sf.cleavage)
            cleavage[(e, g)] = E.comp(l, autos[0]) if cart else E.comp(autos[0], l)
            return SplitFibration(sf.p, sf.orientation, cleavage)
    return None


def break_unit(sr: SplitReflection) -> Optional[SplitReflection]:
    """Replace one unit component so that a triangle identity fails."""
    R, L = sr.section, sr.retraction
    C, D = sr.small, sr.big
    image = {R.obj(c) for c in C.objects}
    for d in D.objects:
        target = R.obj(L.obj(d))
        for m in D.hom(d, target):
            if m == sr.eta(d):
                continue
            # either the component on the image of the section is no longer
            # the identity, or the retraction no longer sends it to one
            if d in image or L.arr(m) != C.id(L.obj(d)):
                comps = dict(sr.unit.components)
                comps[d] = m
                return make_reflection(R, L, comps)
    return None


def twisted_counit_adjunction(f: SplitFibration):
    """The pushforward adjunction along f with its counit at one family
    composed with the swap of a two-point fibre.

    Returns (adjunction, family); the family is the projection from
    total x {0, 1}.
    """
    from dataclasses import replace

    from .core_cat import product
    from .squares import slice_morphism_compose
    from .transport import pushforward_adjunction

    A = f.total
    two = discrete(["0", "1"])
    X, x, _ = product(A, two)
    other = {"0": "1", "1": "0", "1_0": "1_1", "1_1": "1_0"}
    swap = Functor(X, X, {(a, k): (a, other[k]) for a, k in X.objects}, {(m, n): (m, other[n]) for m, n in X.arrows})
    adj = pushforward_adjunction(f)

    def counit(z):
        c = adj.counit(z)
        if z == x:
            return slice_morphism_compose(SliceMorphism(swap, x), c)
        return c

    return replace(adj, counit=counit), x


def mutation_corpus(cfg: CorpusConfig) -> dict:
    """Mutants by kind, drawn from the ordinary corpora."""
    from .structured import terminal_fibration

    rng = random.Random(cfg.seed + 8)
    splittings = []
    for _ in range(cfg.cases):
        sf = gen_fibration(rng, gen_groupoid(rng, 2), rng.choice((CARTESIAN, COCARTESIAN)), max_fiber=2)
        for mutate in (break_identity_lift, break_composite_lift):
            m = mutate(sf)
            if m is not None:
                splittings.append(m)
    units = []
    for _ in range(cfg.cases):
        m = break_unit(gen_sliced_reflection(rng, terminal(), 2, 2, groupoid=rng.random() < 0.5).structure)
        if m is not None:
            units.append(m)
    return {
        "categories": [broken_bz2()],
        "splittings": splittings,
        "units": units,
        "counits": [twisted_counit_adjunction(terminal_fibration(bz2()))],
    }


# ============================================================ serialization


@dataclass(frozen=True)
class SquareFixture:
    square: Square
    left: Any = None  # reflection or fibration on the left leg, if any
    right: Any = None


@dataclass(frozen=True)
class Judgment:
    rule: str
    type: SplitFibration
    family: Optional[SplitFibration] = None
    term: Optional[Functor] = None
    argument: Optional[Functor] = None


@dataclass(frozen=True)
class Fixture:
    kind: str
    payload: Any
    provenance: tuple = ()


KINDS = ("category", "functor", "nat", "fibration", "reflection", "square", "judgment")


def _cat_json(C: FinCategory) -> dict:
    out = {
        "kind": "category",
        "objects": sorted(render(o) for o in C.objects),
        "morphisms": sorted(
            ({"name": render(m), "dom": render(d), "cod": render(e)} for m, (d, e) in C.morphisms.items()),
            key=lambda r: r["name"],
        ),
        "identities": {render(o): render(i) for o, i in C.identities.items()},
        "composition": sorted([render(g), render(f), render(gf)] for (g, f), gf in C.composition.items()),
    }
    if C.inverses is not None:
        out["inverses"] = {render(m): render(n) for m, n in C.inverses.items()}
    return out


def _functor_json(F: Functor) -> dict:
    return {
        "kind": "functor",
        "source": _cat_json(F.source),
        "target": _cat_json(F.target),
        "object_map": {render(k): render(v) for k, v in F.object_map.items()},
        "morphism_map": {render(k): render(v) for k, v in F.morphism_map.items()},
    }


def _fib_json(sf: SplitFibration) -> dict:
    return {
        "kind": "fibration",
        "functor": _functor_json(sf.p),
        "orientation": sf.orientation,
        "lifts": sorted(
            ({"object": render(e), "base_morphism": render(f), "lift": render(l)} for (e, f), l in sf.cleavage.items()),
            key=lambda r: (r["object"], r["base_morphism"]),
        ),
    }


def _refl_json(sr: SplitReflection) -> dict:
    return {
        "kind": "reflection",
        "section": _functor_json(sr.section),
        "retraction": _functor_json(sr.retraction),
        "unit": {render(k): render(v) for k, v in sr.unit.components.items()},
    }


def to_json(value) -> dict:
    if isinstance(value, FinCategory):
        return _cat_json(value)
    if isinstance(value, Functor):
        return _functor_json(value)
    if isinstance(value, NatTransformation):
        return {
            "kind": "nat",
            "source_functor": _functor_json(value.source_functor),
            "target_functor": _functor_json(value.target_functor),
            "components": {render(k): render(v) for k, v in value.components.items()},
        }
    if isinstance(value, SplitFibration):
        return _fib_json(value)
    if isinstance(value, SplitReflection):
        return _refl_json(value)
    if isinstance(value, SquareFixture):
        s = value.square
        return {
            "kind": "square",
            "left": to_json(value.left if value.left is not None else s.left),
            "right": to_json(value.right if value.right is not None else s.right),
            "top": _functor_json(s.top),
            "bottom": _functor_json(s.bottom),
        }
    if isinstance(value, Square):
        return to_json(SquareFixture(value))
    if isinstance(value, Judgment):
        out = {"kind": "judgment", "rule": value.rule, "type": _fib_json(value.type)}
        for key in ("family", "term", "argument"):
            v = getattr(value, key)
            if v is not None:
                out[key] = to_json(v)
        return out
    raise SchemaError("kind", f"cannot serialize {type(value).__name__}")


def dumps(data: dict) -> bytes:
    return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def serialize(fixture: Fixture) -> bytes:
    return dumps(to_json(fixture.payload))


# ------------------------------------------------------------------ parsing


def _need(d: dict, key: str, where: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"{where}.{key}", "missing field")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{where}.{key}", f"expected {kind.__name__}")
    return v


def _parse_category(d: dict, where: str) -> FinCategory:
    objects = _need(d, "objects", where, list)
    morphs = {}
    for k, row in enumerate(_need(d, "morphisms", where, list)):
        here = f"{where}.morphisms[{k}]"
        name, dom, cod = (_need(row, key, here, str) for key in ("name", "dom", "cod"))
        for key, o in (("dom", dom), ("cod", cod)):
            if o not in objects:
                raise SchemaError(f"{here}.{key}", f"unknown object {o}")
        morphs[name] = (dom, cod)
    ids = _need(d, "identities", where, dict)
    for o, m in ids.items():
        if o not in objects:
            raise SchemaError(f"{where}.identities", f"unknown object {o}")
        if m not in morphs:
            raise SchemaError(f"{where}.identities.{o}", f"unknown morphism {m}")
    comp = {}
    for k, row in enumerate(_need(d, "composition", where, list)):
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(f"{where}.composition[{k}]", "expected [g, f, g.f]")
        for m in row:
            if m not in morphs:
                raise SchemaError(f"{where}.composition[{k}]", f"unknown morphism {m}")
        comp[(row[0], row[1])] = row[2]
    inv = d.get("inverses")
    if inv is not None:
        for m, n in inv.items():
            if m not in morphs or n not in morphs:
                raise SchemaError(f"{where}.inverses", f"unknown morphism {m if m not in morphs else n}")
    return category(objects, [(n, a, b) for n, (a, b) in morphs.items()], ids, comp, inv)


def _parse_functor(d: dict, where: str) -> Functor:
    S = _parse_category(_need(d, "source", where, dict), f"{where}.source")
    T = _parse_category(_need(d, "target", where, dict), f"{where}.target")
    om = _need(d, "object_map", where, dict)
    mm = _need(d, "morphism_map", where, dict)
    for k, v in om.items():
        if k not in S.object_set or v not in T.object_set:
            raise SchemaError(f"{where}.object_map.{k}", "unknown object")
    for k, v in mm.items():
        if k not in S.morphisms or v not in T.morphisms:
            raise SchemaError(f"{where}.morphism_map.{k}", "unknown morphism")
    return Functor(S, T, dict(om), dict(mm))


def _parse_fibration(d: dict, where: str) -> SplitFibration:
    p = _parse_functor(_need(d, "functor", where, dict), f"{where}.functor")
    orientation = _need(d, "orientation", where, str)
    if orientation not in (CARTESIAN, COCARTESIAN):
        raise SchemaError(f"{where}.orientation", f"unknown orientation {orientation}")
    cleavage = {}
    for k, row in enumerate(_need(d, "lifts", where, list)):
        here = f"{where}.lifts[{k}]"
        e, f, l = (_need(row, key, here, str) for key in ("object", "base_morphism", "lift"))
        if e not in p.source.object_set:
            raise SchemaError(f"{here}.object", f"unknown object {e}")
        if f not in p.target.morphisms:
            raise SchemaError(f"{here}.base_morphism", f"unknown morphism {f}")
        if l not in p.source.morphisms:
            raise SchemaError(f"{here}.lift", f"unknown morphism {l}")
        cleavage[(e, f)] = l
    return SplitFibration(p, orientation, cleavage)


def _parse_reflection(d: dict, where: str) -> SplitReflection:
    R = _parse_functor(_need(d, "section", where, dict), f"{where}.section")
    L = _parse_functor(_need(d, "retraction", where, dict), f"{where}.retraction")
    unit = _need(d, "unit", where, dict)
    for k, v in unit.items():
        if k not in R.target.object_set or v not in R.target.morphisms:
            raise SchemaError(f"{where}.unit.{k}", "unknown object or morphism")
    return make_reflection(R, L, unit)


def from_json(d, where: str = "$"):
    kind = _need(d, "kind", where, str)
    if kind == "category":
        return _parse_category(d, where)
    if kind == "functor":
        return _parse_functor(d, where)
    if kind == "nat":
        F = _parse_functor(_need(d, "source_functor", where, dict), f"{where}.source_functor")
        G = _parse_functor(_need(d, "target_functor", where, dict), f"{where}.target_functor")
        comps = _need(d, "components", where, dict)
        for k, v in comps.items():
            if k not in F.source.object_set or v not in F.target.morphisms:
                raise SchemaError(f"{where}.components.{k}", "unknown object or morphism")
        return NatTransformation(F, G, dict(comps))
    if kind == "fibration":
        return _parse_fibration(d, where)
    if kind == "reflection":
        return _parse_reflection(d, where)
    if kind == "square":
        sides = {k: from_json(_need(d, k, where, dict), f"{where}.{k}") for k in ("left", "right", "top", "bottom")}
        left, right = sides["left"], sides["right"]
        sq = Square(_as_leg(left), _as_leg(right), sides["top"], sides["bottom"])
        return SquareFixture(
            sq,
            None if isinstance(left, Functor) else left,
            None if isinstance(right, Functor) else right,
        )
    if kind == "judgment":
        rule = _need(d, "rule", where, str)
        T = _parse_fibration(_need(d, "type", where, dict), f"{where}.type")
        extra = {k: from_json(d[k], f"{where}.{k}") for k in ("family", "term", "argument") if k in d}
        return Judgment(rule, T, **extra)
    raise SchemaError(f"{where}.kind", f"unknown kind {kind}")


def _as_leg(x) -> Functor:
    if isinstance(x, SplitReflection):
        return x.section
    if isinstance(x, SplitFibration):
        return x.p
    if isinstance(x, Functor):
        return x
    raise SchemaError("square", "legs must be functors, reflections or fibrations")


def loads(text: str, source: str = "<string>") -> Fixture:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    payload = from_json(data)
    return Fixture(data["kind"], payload, (source,))


def parse(path: str) -> Fixture:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), path)


# ---------------------------------------------------------------- generate


def generate(kind: str, max_objects: int = 3, seed: int = 0) -> Fixture:
    if not 1 <= max_objects <= MAX_OBJECTS:
        raise SizeOutOfRange(f"max_objects must be between 1 and {MAX_OBJECTS}")
    rng = random.Random(seed)
    if kind == "groupoid":
        payload = gen_groupoid(rng, max_objects)
        kind = "category"
    elif kind == "category":
        payload = gen_category(rng, max_objects)
    elif kind == "functor":
        S, T = gen_category(rng, max_objects), gen_category(rng, max_objects)
        payload = random_functor(rng, S, T)
    elif kind == "nat":
        S, T = gen_category(rng, max_objects), gen_groupoid(rng, max_objects, relabelled=False)
        F = random_functor(rng, S, T)
        conj = {o: rng.choice(T.out_of(F.obj(o))) for o in S.objects}
        G = Functor(
            S,
            T,
            {o: T.cod(conj[o]) for o in S.objects},
            {m: T.chain(conj[S.cod(m)], F.arr(m), T.inv(conj[S.dom(m)])) for m in S.arrows},
        )
        payload = NatTransformation(F, G, conj)
    elif kind == "fibration":
        B = gen_category(rng, max(1, max_objects // 2))
        payload = gen_fibration(rng, B, max_fiber=min(3, max_objects))
    elif kind == "reflection":
        D = gen_category(rng, max(1, max_objects - 1))
        room = max_objects - len(D.objects)
        payload = free_reflection(D, {k: rng.choice(D.objects) for k in range(max(1, room))}, rng.random() < 0.5)
    elif kind == "square":
        D = gen_category(rng, 2)
        sr = free_reflection(D, {0: rng.choice(D.objects)})
        while True:
            sf = gen_fibration(rng, gen_category(rng, 2), max_fiber=2)
            problem = gen_problem(rng, sr, sf)
            if problem is not None:
                break
        payload = SquareFixture(problem, sr, sf)
    elif kind == "judgment":
        T, S = pi_point_count_fixture()
        payload = Judgment("pi", T.fibration, S.fibration)
    else:
        raise SchemaError("kind", f"unknown kind {kind}")
    return Fixture(kind, payload, ("generated", seed))


# ================================================================= checking


def check_fixture(fx: Fixture) -> ValidationReport:
    """Run the validator that matches the fixture kind."""
    v = fx.payload
    if isinstance(v, FinCategory):
        return validate_category(v)
    if isinstance(v, Functor):
        return validate_functor(v)
    if isinstance(v, NatTransformation):
        return validate_nat(v)
    if isinstance(v, SplitFibration):
        return validate_split_fibration(v)
    if isinstance(v, SplitReflection):
        return validate_split_reflection(v)
    if isinstance(v, SquareFixture):
        report = ValidationReport()
        if not v.square.commutes():
            report.add("square does not commute")
        for side, s in (("left", v.left), ("right", v.right)):
            if isinstance(s, SplitFibration):
                report.extend(validate_split_fibration(s), f"{side}: ")
            elif isinstance(s, SplitReflection):
                report.extend(validate_split_reflection(s), f"{side}: ")
        return report
    if isinstance(v, Judgment):
        return check_judgment(v)
    raise SchemaError("kind", "nothing to validate")


def check_judgment(j: Judgment) -> ValidationReport:
    report = ValidationReport()
    report.extend(validate_split_fibration(j.type), "type: ")
    if not report.ok:
        return report
    T = TypeOver(j.type)
    if j.rule == "id":
        report.extend(path_object_report(T))
        return report
    if j.family is None:
        raise SchemaError("family", f"rule {j.rule} needs a family")
    report.extend(validate_split_fibration(j.family), "family: ")
    if not report.ok:
        return report
    S = TypeOver(j.family)
    if j.rule == "sigma":
        report.extend(validate_split_fibration(sigma_type(T, S).fibration), "sigma: ")
    elif j.rule == "pi":
        Pi = pi_type(T, S)
        report.extend(validate_split_fibration(Pi.fibration), "pi: ")
        if j.term is not None:
            t = TermOf(j.term, S)
            lam = lambda_(T, t)
            if lambda_(T, app_generic(T, S, lam)) != lam:
                report.add("eta law")
            if j.argument is not None:
                a = TermOf(j.argument, T)
                if app(T, S, lam, a) != substitute_term(a.section, t):
                    report.add("beta law")
    else:
        raise SchemaError("rule", f"unknown rule {j.rule}")
    return report


def lifting_checks(cfg: CorpusConfig) -> dict:
    cases = lifting_corpus(cfg)
    horizontal = horizontal_corpus(cfg)
    over_point = slice_lifting_operation(CANONICAL, terminal())
    sliced = ValidationReport()
    for k, (left, sf, problem) in enumerate(cases):
        lhs = Sliced(left, to_terminal(left.big))
        rhs = Sliced(sf, to_terminal(sf.base))
        if over_point(lhs, rhs, problem).f != canonical_lift(left, sf, problem):
            sliced.add("lift over the point differs", k)
    pasted = ValidationReport()
    for k, case in enumerate(horizontal):
        whole = compose_squares_h(case.right_square, compose_squares_h(case.problem, case.left_square))
        if not whole.commutes():
            pasted.add("pasted problem does not commute", k)
    for k, (_, _, problem) in enumerate(cases):
        across = compose_squares_h(identity_square_h(problem.right), problem)
        down = compose_squares_v(identity_square_v(problem.bottom), compose_squares_v(problem, identity_square_v(problem.top)))
        if across != problem or down != problem:
            pasted.add("pasting an identity square changes the problem", k)
    return {
        "canonical lift is an oracle filler": check_fillers(CANONICAL, cases),
        "horizontal law": check_horizontal_law(CANONICAL, horizontal),
        "vertical law": check_vertical_law(CANONICAL, vertical_corpus(cfg)),
        "lift over a base": sliced,
        "pasted problems commute": pasted,
    }


def frobenius_checks(cfg: CorpusConfig) -> dict:
    eqs, squares, comps = ValidationReport(), ValidationReport(), ValidationReport()
    for k, case in enumerate(frobenius_corpus(cfg)):
        moved = frobenius_transport(case.fibration, case.reflection)
        eqs.extend(validate_split_reflection(moved.structure), f"case {k}: ")
        eqs.extend(frobenius_equations(case.fibration, case.reflection), f"case {k}: ")
        squares.extend(
            frobenius_preserves_squares(case.fibration, case.prime, case.reflection, case.square), f"case {k}: "
        )
        comps.extend(frobenius_preserves_composition(case.fibration, case.first, case.reflection), f"case {k}: ")
    return {"transport equations": eqs, "squares preserved": squares, "composites preserved": comps}


def adjunction_checks(cfg: CorpusConfig) -> dict:
    report = ValidationReport()
    for k, (f, ys, xs) in enumerate(adjunction_corpus(cfg)):
        report.extend(adjunction_check(f, ys, xs)[1], f"case {k}: ")
    return {"pullback left adjoint to pushforward": report}


def agreement_checks(cfg: CorpusConfig) -> dict:
    report = ValidationReport()
    for k, c in enumerate(agreement_corpus(cfg)):
        direct, moved = filler_agreement(c.fibration, c.family, c.reflection, c.top, c.bottom)
        if direct != moved:
            report.add("fillers disagree", k)
    return {"pushforward filler agreement": report}


def bc_checks(cfg: CorpusConfig) -> dict:
    bc, mates = ValidationReport(), ValidationReport()
    for k, c in enumerate(bc_corpus(cfg)):
        bc.extend(beck_chevalley_check(c.square, c.pulled, c.fibration, c.reflections), f"case {k}: ")
        m = SliceMorphism(c.family.p, identity_functor(c.fibration.total))
        comp = mate_beta(c.square, c.pulled, c.fibration, m)
        if not (is_isomorphism(comp.top) and is_isomorphism(comp.bottom)):
            mates.add("mate component not invertible", k)
        for refl in c.reflections:
            sr = refl.structure
            comp = mate_alpha(Square(c.pulled.p, c.fibration.p, c.square.top, c.square.bottom), SliceMorphism(sr.section, refl.ext))
            if not (is_isomorphism(comp.top) and is_isomorphism(comp.bottom)):
                mates.add("pullback mate component not invertible", k)
    return {"transport commutes with pullback": bc, "mates invertible": mates}


def strong_checks(cfg: CorpusConfig) -> dict:
    counit, unit = ValidationReport(), ValidationReport()
    for k, c in enumerate(strong_corpus(cfg)):
        counit.extend(strong_frobenius_checks(c.fibration, over_base=c.over_base), f"case {k}: ")
        unit.extend(strong_frobenius_checks(c.fibration, over_total=c.over_total), f"case {k}: ")
    return {"lifted counit": counit, "lifted unit": unit}


def terms_of(T: TypeOver) -> list:
    """Every section of a type, by exhaustive search."""
    E, p = T.total, T.p
    return [
        TermOf(s, T)
        for s in search_functors(
            T.context,
            E,
            lambda g: [e for e in E.objects if p.obj(e) == g],
            lambda m, cands: [k for k in cands if p.arr(k) == m],
        )
    ]


def model_checks(cfg: CorpusConfig) -> dict:
    from .model import fst, id_stability_check, j_eliminator, pair, pi_pseudostability_check, refl, snd, substitute
    from .core_cat import point
    from .structured import identity_fibration, product_fibration

    rng = random.Random(cfg.seed + 9)
    out = {}

    sizes = ValidationReport()
    T, S = pi_point_count_fixture()
    Pi = pi_type(T, S)
    if len(Pi.total.objects) != 6:
        sizes.add("pi point count", len(Pi.total.objects))
    path = id_type(bz2_type())
    if (len(path.total.objects), len(path.total.arrows)) != (2, 8):
        sizes.add("path object size", len(path.total.objects), len(path.total.arrows))
    out["fixture sizes"] = sizes

    laws = ValidationReport()
    laws.extend(validate_split_fibration(Pi.fibration), "pi: ")
    for k, t in enumerate(terms_of(S)):
        lam = lambda_(T, t)
        if lambda_(T, app_generic(T, S, lam)) != lam:
            laws.add("eta law", k)
        for a in terms_of(T):
            if app(T, S, lam, a) != substitute_term(a.section, t):
                laws.add("beta law", k)
    out["pi beta and eta"] = laws

    sigma = ValidationReport()
    base, fam = bz2_type(), TypeOver(twisted_bz2_type().fibration)
    top = TypeOver(gen_fibration(rng, fam.total, max_fiber=2))
    left = sigma_type(sigma_type(base, fam), top)
    right = sigma_type(base, sigma_type(fam, top))
    sigma.extend(validate_split_fibration(left.fibration), "sigma: ")
    if left != right:
        sigma.add("sigma not associative")
    if sigma_type(base, TypeOver(identity_fibration(base.total))) != base:
        sigma.add("sigma not unital on the right")
    if sigma_type(TypeOver(identity_fibration(base.context)), base) != base:
        sigma.add("sigma not unital on the left")
    for a in terms_of(base):
        for b in terms_of(substitute(a.section, fam)):
            t = pair(base, fam, a, b)
            if fst(base, fam, t) != a or snd(base, fam, t) != b:
                sigma.add("projections of a pair differ")
    out["sigma associative and unital"] = sigma

    paths = ValidationReport()
    twisted = twisted_bz2_type()
    for TT in (bz2_type(), twisted):
        paths.extend(path_object_report(TT))
    for t in terms_of(bz2_type()):
        r = refl(path, t)
        if compose_functors(r.type.p, r.section) != identity_functor(t.type.context):
            paths.add("reflexivity is not a section")
    P = id_type(twisted)
    motive = TypeOver(product_fibration(P.total, bz2()))
    over_r = substitute(P.r, motive)
    E = twisted.total
    d = TermOf(
        Functor(
            E,
            over_r.total,
            {e: ((P.r.obj(e), "*"), e) for e in E.objects},
            {m: ((P.r.arr(m), "e"), m) for m in E.arrows},
        ),
        over_r,
    )
    J = j_eliminator(P, motive, d)
    Q = over_r.total
    first = Functor(Q, motive.total, {o: o[0] for o in Q.objects}, {m: m[0] for m in Q.arrows})
    if compose_functors(J.section, P.r) != compose_functors(first, d.section):
        paths.add("J after reflexivity differs from the given term")
    out["path object, reflexivity and J"] = paths

    stable = ValidationReport()
    for sub in (identity_functor(twisted.context), point(twisted.context, "*")):
        stable.extend(id_stability_check(sub, twisted), "id stability: ")
        Tp, sq = pullback_square(twisted.fibration, sub)
        SB = TypeOver(gen_fibration(random.Random(cfg.seed), twisted.total, max_fiber=2))
        stable.extend(pi_pseudostability_check(sq, TypeOver(Tp), twisted, SB), "pi stability: ")
    out["substitution stability"] = stable
    return out


def sanity_checks(cfg: CorpusConfig) -> dict:
    """Each report fails when a mutant goes unnoticed, or when a kind of
    mutant never occurs."""
    from .squares import check_triangles

    mutants = mutation_corpus(cfg)
    out = {}
    caught = {
        "categories": lambda C: not validate_category(C).ok,
        "splittings": lambda sf: not validate_split_fibration(sf).ok,
        "units": lambda sr: not validate_split_reflection(sr).ok,
        "counits": lambda ax: bool(check_triangles(ax[0], rights=[ax[1]])),
    }
    for kind, found in caught.items():
        report = ValidationReport()
        if not mutants[kind]:
            report.add("no mutants generated")
        for k, m in enumerate(mutants[kind]):
            if not found(m):
                report.add("mutant passed", k)
        out[f"broken {kind} detected"] = report
    op = arbitrary_filler_operation()
    report = ValidationReport()
    noticed = not check_horizontal_law(op, horizontal_corpus(cfg)).ok or not check_vertical_law(op, vertical_corpus(cfg)).ok
    if not noticed:
        report.add("arbitrary fillers satisfy both laws")
    out["arbitrary filler detected"] = report
    return out


def cli_checks(cfg: CorpusConfig) -> dict:
    """Generate every fixture kind, write it, read it back and validate it
    through the command line."""
    import tempfile
    from contextlib import redirect_stdout
    from io import StringIO
    from pathlib import Path

    trips, runs = ValidationReport(), ValidationReport()
    with tempfile.TemporaryDirectory() as tmp:
        for kind in KINDS + ("groupoid",):
            fx = generate(kind, min(cfg.max_objects, 4), cfg.seed)
            data = serialize(fx)
            path = Path(tmp) / f"{kind}.json"
            path.write_bytes(data)
            if serialize(parse(path)) != data:
                trips.add("round trip changed the bytes", kind)
            with redirect_stdout(StringIO()):
                code = run_subcommand(["validate", str(path)])
            if code != 0:
                runs.add("validate rejected a generated fixture", kind, code)
    return {"fixtures round trip": trips, "generated fixtures validate": runs}


SECTIONS = {
    "lift": lifting_checks,
    "frobenius": frobenius_checks,
    "pushforward": lambda cfg: {**adjunction_checks(cfg), **agreement_checks(cfg)},
    "bc": bc_checks,
    "strong": strong_checks,
    "model": model_checks,
    "sanity": sanity_checks,
    "cli": cli_checks,
}


def run_suite(cfg: CorpusConfig, sections=None) -> dict:
    out = {}
    for name in sections or SECTIONS:
        out.update(SECTIONS[name](cfg))
    return out


# ==================================================================== output


def _report_json(name: str, reports: dict, extra=None) -> dict:
    return {
        "command": name,
        "ok": all(r.ok for r in reports.values()),
        "checks": {
            k: {"ok": r.ok, "violations": [{"law": v.law, "witness": [render(w) for w in v.witness]} for v in r.violations]}
            for k, r in sorted(reports.items())
        },
        **(extra or {}),
    }


def _emit(args, name: str, reports: dict, extra=None) -> int:
    if args.format == "json":
        sys.stdout.buffer.write(dumps(_report_json(name, reports, extra)))
    else:
        for k, r in sorted(reports.items()):
            print(f"{'ok  ' if r.ok else 'FAIL'} {k} ({len(r)} violations)")
            for v in r.violations[:20]:
                print(f"     {v}")
        for k, v in sorted((extra or {}).items()):
            print(f"{k}: {v if isinstance(v, (str, int)) else json.dumps(v, sort_keys=True)}")
    return 0 if all(r.ok for r in reports.values()) else 1


def _config(args) -> CorpusConfig:
    return CorpusConfig(seed=args.seed, cases=args.cases, max_objects=args.max_objects)


def _load(path, kind=None):
    fx = parse(path)
    if kind is not None and not isinstance(fx.payload, kind):
        raise SchemaError(path, f"expected a {kind.__name__}")
    return fx.payload


def cmd_validate(args) -> int:
    reports = {}
    for path in args.files:
        reports[path] = check_fixture(parse(path))
    return _emit(args, "validate", reports)


def cmd_lift(args) -> int:
    sr = _load(args.refl, SplitReflection)
    sf = _load(args.fib, SplitFibration)
    sq = _load(args.square, SquareFixture).square
    problem = Square(sr.section, sf.p, sq.top, sq.bottom)
    phi = canonical_lift(sr, sf, problem)
    fillers = enumerate_fillers(problem)
    report = ValidationReport()
    if phi not in fillers:
        report.add("canonical lift is not an oracle filler")
    extra = {"filler": to_json(phi), "oracle fillers": len(fillers)} if args.format == "json" else {
        "filler objects": {render(k): render(v) for k, v in sorted(phi.object_map.items(), key=lambda kv: render(kv[0]))},
        "oracle fillers": len(fillers),
    }
    return _emit(args, "lift", {"oracle membership": report}, extra)


def cmd_frobenius(args) -> int:
    if args.fib:
        P = _load(args.fib, SplitFibration)
        from .structured import as_orientation

        if P.orientation != COCARTESIAN:
            P = as_orientation(P, COCARTESIAN)
        refl = Sliced(_load(args.refl, SplitReflection), _load(args.ext, Functor))
        return _emit(args, "frobenius", {"transport equations": frobenius_equations(P, refl)})
    cfg = _config(args)
    return _emit(args, "frobenius", {**frobenius_checks(cfg), **strong_checks(cfg)})


def cmd_pushforward(args) -> int:
    if args.fib:
        from .transport import pushforward_object

        f = _load(args.fib, SplitFibration)
        x = _load(args.over, SplitFibration)
        C, pf = pushforward_object(f, x)
        reports = {"pushforward fibration": validate_split_fibration(pf)}
        reports["adjunction"] = adjunction_check(f, None, [x.p])[1]
        return _emit(args, "pushforward", reports, {"objects": len(C.objects), "morphisms": len(C.arrows)})
    cfg = _config(args)
    return _emit(args, "pushforward", {**adjunction_checks(cfg), **agreement_checks(cfg)})


def cmd_bc(args) -> int:
    if args.square:
        fx = _load(args.square, SquareFixture)
        P, Q = fx.left, fx.right
        if not isinstance(P, SplitFibration) or not isinstance(Q, SplitFibration):
            raise SchemaError("square", "both legs must be fibrations")
        from .structured import as_orientation

        Pc, Qc = as_orientation(P, COCARTESIAN), as_orientation(Q, COCARTESIAN)
        rng = random.Random(args.corpus_seed)
        corpus = [gen_sliced_reflection(rng, P.base) for _ in range(args.cases)]
        return _emit(args, "bc", {"transport commutes with pullback": beck_chevalley_check(fx.square, Pc, Qc, corpus)})
    return _emit(args, "bc", bc_checks(_config(args)))


def cmd_model(args) -> int:
    if args.judgment:
        return _emit(args, "model", {"judgment": check_judgment(_load(args.judgment, Judgment))})
    return _emit(args, "model", model_checks(_config(args)))


def cmd_gen(args) -> int:
    fx = generate(args.kind, args.max_objects, args.seed)
    sys.stdout.buffer.write(serialize(fx))
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get("AWFSLAB_SEED", "0"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed)
    common.add_argument("--cases", type=int, default=20)
    common.add_argument("--max-objects", type=int, default=5)
    common.add_argument("--format", choices=("text", "json"), default="text")
    parser = argparse.ArgumentParser(prog="awfslab", description="Finite checks of lifting structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", parents=[common], help="validate fixture files")
    p.add_argument("files", nargs="+")
    p.set_defaults(run=cmd_validate)
    p = sub.add_parser("lift", parents=[common], help="canonical lift of one problem")
    p.add_argument("--refl", required=True)
    p.add_argument("--fib", required=True)
    p.add_argument("--square", required=True)
    p.set_defaults(run=cmd_lift)
    p = sub.add_parser("frobenius", parents=[common], help="pull reflections back along an opfibration")
    p.add_argument("--fib")
    p.add_argument("--refl")
    p.add_argument("--ext")
    p.set_defaults(run=cmd_frobenius)
    p = sub.add_parser("pushforward", parents=[common], help="pushforward of a fibration and the adjunction")
    p.add_argument("--fib")
    p.add_argument("--over")
    p.set_defaults(run=cmd_pushforward)
    p = sub.add_parser("bc", parents=[common], help="compatibility with pullback squares")
    p.add_argument("--square")
    p.add_argument("--corpus-seed", type=int, default=default_seed)
    p.set_defaults(run=cmd_bc)
    p = sub.add_parser("model", parents=[common], help="type formers of the groupoid model")
    p.add_argument("judgment", nargs="?")
    p.set_defaults(run=cmd_model)
    p = sub.add_parser("gen", parents=[common], help="print a generated fixture")
    p.add_argument("kind", choices=KINDS + ("groupoid",))
    p.set_defaults(run=cmd_gen)
    return parser


def run_subcommand(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args)
    except (ParseError, SchemaError, SizeOutOfRange, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AwfsError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_subcommand(sys.argv[1:]))


if __name__ == "__main__":
    main()
