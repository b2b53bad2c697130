"""Commuting squares of functors, slice morphisms, and the filler oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .core_cat import (
    AwfsError,
    BoundaryMismatch,
    Functor,
    compose_functors,
    identity_functor,
    search_functors,
)


class NotComposableInSlice(AwfsError):
    pass


class AdjunctionInvalid(AwfsError):
    pass


@dataclass(frozen=True)
class Square:
    """A commuting square bottom.left = right.top.

        A --top--> C
        |          |
       left      right
        v          v
        B --bot--> D
    """

    left: Functor
    right: Functor
    top: Functor
    bottom: Functor

    def commutes(self) -> bool:
        try:
            return compose_functors(self.bottom, self.left) == compose_functors(self.right, self.top)
        except BoundaryMismatch:
            return False


def check_square(s: Square) -> Square:
    if not s.commutes():
        raise BoundaryMismatch("square does not commute")
    return s


def identity_square_h(f: Functor) -> Square:
    """The square (id, id): f -> f."""
    return Square(f, f, identity_functor(f.source), identity_functor(f.target))


def identity_square_v(u: Functor) -> Square:
    """The square with identity legs and u on top and bottom."""
    return Square(identity_functor(u.source), identity_functor(u.target), u, u)


def compose_squares_h(s2: Square, s1: Square) -> Square:
    """Paste s1: f -> g and s2: g -> h side by side."""
    if s1.right != s2.left:
        raise BoundaryMismatch("right leg of the first square is not the left leg of the second")
    return check_square(
        Square(s1.left, s2.right, compose_functors(s2.top, s1.top), compose_functors(s2.bottom, s1.bottom))
    )


def compose_squares_v(s2: Square, s1: Square) -> Square:
    """Stack s2 below s1; the bottom of s1 must be the top of s2."""
    if s1.bottom != s2.top:
        raise BoundaryMismatch("bottom of the upper square is not the top of the lower one")
    return check_square(
        Square(compose_functors(s2.left, s1.left), compose_functors(s2.right, s1.right), s1.top, s2.bottom)
    )


# ----------------------------------------------------------------- fillers


@dataclass(frozen=True)
class FillerSet:
    problem: Square
    fillers: tuple

    def __len__(self):
        return len(self.fillers)

    def __contains__(self, phi):
        return any(phi == f for f in self.fillers)


def is_filler(s: Square, phi: Functor) -> bool:
    try:
        return compose_functors(phi, s.left) == s.top and compose_functors(s.right, phi) == s.bottom
    except BoundaryMismatch:
        return False


def filler_constraints(s: Square):
    """Pointwise constraints on a diagonal, or None if the top row already
    forces two different values somewhere."""
    f, g, u, v = s.left, s.right, s.top, s.bottom
    fixed_obj, fixed_mor = {}, {}
    for a in f.source.objects:
        b, c = f.obj(a), u.obj(a)
        if fixed_obj.setdefault(b, c) != c:
            return None
    for m in f.source.arrows:
        n, k = f.arr(m), u.arr(m)
        if fixed_mor.setdefault(n, k) != k:
            return None
    over_obj, over_mor = {}, {}
    C = g.source
    for c in C.objects:
        over_obj.setdefault(g.obj(c), []).append(c)
    for n in C.arrows:
        over_mor.setdefault(g.arr(n), set()).add(n)

    def objects(b):
        if b in fixed_obj:
            c = fixed_obj[b]
            return [c] if g.obj(c) == v.obj(b) else []
        return over_obj.get(v.obj(b), [])

    def morphisms(m, cands):
        if m in fixed_mor:
            return [k for k in cands if k == fixed_mor[m]]
        allowed = over_mor.get(v.arr(m), ())
        return [k for k in cands if k in allowed]

    return objects, morphisms


def enumerate_fillers(s: Square) -> FillerSet:
    cons = filler_constraints(s)
    if cons is None:
        return FillerSet(s, ())
    objects, morphisms = cons
    found = tuple(search_functors(s.left.target, s.right.source, objects, morphisms))
    return FillerSet(s, found)


# ------------------------------------------------------------------ slices


@dataclass(frozen=True)
class SliceMorphism:
    """A functor f together with an extension a of its codomain to a base."""

    f: Functor
    a: Functor

    def __post_init__(self):
        if self.f.target != self.a.source:
            raise NotComposableInSlice("extension does not start at the codomain of the map")

    @property
    def source_ext(self) -> Functor:
        return compose_functors(self.a, self.f)

    @property
    def target_ext(self) -> Functor:
        return self.a


def slice_identity(a: Functor) -> SliceMorphism:
    return SliceMorphism(identity_functor(a.source), a)


def slice_morphism_compose(m2: SliceMorphism, m1: SliceMorphism) -> SliceMorphism:
    if m1.f.target != m2.f.source or m1.a != compose_functors(m2.a, m2.f):
        raise NotComposableInSlice("extensions do not match")
    return SliceMorphism(compose_functors(m2.f, m1.f), m2.a)


def slice_chain(*ms: SliceMorphism) -> SliceMorphism:
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = slice_morphism_compose(m, out)
    return out


@dataclass(frozen=True)
class SliceSquare:
    """A commuting square whose bottom-right corner carries an extension to
    a base; every other corner is over the base by composition."""

    square: Square
    ext: Functor

    @property
    def left(self) -> SliceMorphism:
        return SliceMorphism(self.square.left, compose_functors(self.ext, self.square.bottom))

    @property
    def right(self) -> SliceMorphism:
        return SliceMorphism(self.square.right, self.ext)

    @property
    def top(self) -> SliceMorphism:
        return SliceMorphism(self.square.top, compose_functors(self.ext, self.square.right))

    @property
    def bottom(self) -> SliceMorphism:
        return SliceMorphism(self.square.bottom, self.ext)


# ----------------------------------------------------- adjunctions on slices


@dataclass(frozen=True)
class SliceAdjunction:
    """An adjunction between categories of functors over two bases.

    Objects are functors into the base; morphisms are SliceMorphisms.
    ``unit(y)`` is a morphism y -> right(left(y)) and ``counit(x)`` a
    morphism left(right(x)) -> x.
    """

    left_obj: Callable
    left_mor: Callable
    right_obj: Callable
    right_mor: Callable
    unit: Callable
    counit: Callable


def identity_adjunction() -> SliceAdjunction:
    same = lambda x: x
    return SliceAdjunction(same, same, same, same, slice_identity, slice_identity)


def check_triangles(adj: SliceAdjunction, lefts: Iterable = (), rights: Iterable = ()) -> list:
    """Objects at which a triangle identity fails."""
    bad = []
    for y in lefts:
        Fy = adj.left_obj(y)
        got = slice_morphism_compose(adj.counit(Fy), adj.left_mor(adj.unit(y)))
        if got != slice_identity(Fy):
            bad.append(("left", y))
    for x in rights:
        Gx = adj.right_obj(x)
        got = slice_morphism_compose(adj.right_mor(adj.counit(x)), adj.unit(Gx))
        if got != slice_identity(Gx):
            bad.append(("right", x))
    return bad


def _require_triangles(adj, lefts, rights):
    if check_triangles(adj, lefts, rights):
        raise AdjunctionInvalid("triangle identity fails")


def _bar(adj, m: SliceMorphism, x) -> SliceMorphism:
    return slice_morphism_compose(adj.counit(x), adj.left_mor(m))


def _unbar(adj, m: SliceMorphism, y) -> SliceMorphism:
    return slice_morphism_compose(adj.right_mor(m), adj.unit(y))


def transpose_lifting_problem(adj: SliceAdjunction, s: SliceSquare, k: SliceMorphism) -> SliceSquare:
    """Turn a problem j -> G k into the problem F j -> k."""
    Gk = adj.right_mor(k)
    if Gk.f != s.square.right or Gk.a != s.ext:
        raise BoundaryMismatch("right leg of the problem is not the image of k")
    j = s.left
    y0, y1 = j.source_ext, j.target_ext
    x0, x1 = k.source_ext, k.target_ext
    _require_triangles(adj, [y0, y1], [x0, x1])
    Fj = adj.left_mor(j)
    top = _bar(adj, s.top, x0)
    bottom = _bar(adj, s.bottom, x1)
    return SliceSquare(Square(Fj.f, k.f, top.f, bottom.f), k.a)


def untranspose_lifting_problem(adj: SliceAdjunction, t: SliceSquare, j: SliceMorphism) -> SliceSquare:
    """Turn a problem F j -> k back into j -> G k."""
    k = t.right
    y0, y1 = j.source_ext, j.target_ext
    x0, x1 = k.source_ext, k.target_ext
    _require_triangles(adj, [y0, y1], [x0, x1])
    Gk = adj.right_mor(k)
    top = _unbar(adj, t.top, y0)
    bottom = _unbar(adj, t.bottom, y1)
    return SliceSquare(Square(j.f, Gk.f, top.f, bottom.f), Gk.a)


def filler_from_transposed(adj: SliceAdjunction, j: SliceMorphism, k: SliceMorphism, phi_bar: Functor) -> Functor:
    """A diagonal F Y' -> X of the transposed problem gives Y' -> G X."""
    return _unbar(adj, SliceMorphism(phi_bar, k.source_ext), j.target_ext).f


def filler_to_transposed(adj: SliceAdjunction, j: SliceMorphism, k: SliceMorphism, phi: Functor) -> Functor:
    x0 = k.source_ext
    Gx0 = adj.right_obj(x0)
    return _bar(adj, SliceMorphism(phi, Gx0), x0).f
