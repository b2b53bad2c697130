"""Lifting operations as data, the canonical lift of split reflections
against split fibrations, and checkers for the two coherence laws."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable, Iterable

from .core_cat import (
    AwfsError,
    Functor,
    ValidationReport,
    chain,
    compose_functors,
    render,
)
from .squares import SliceMorphism, Square, enumerate_fillers, is_filler
from .structured import (
    CARTESIAN,
    MalformedCleavage,
    OrientationMismatch,
    Sliced,
    SplitFibration,
    SplitReflection,
    compose_split_fibrations,
    compose_split_reflections,
)


class NonCommutingProblem(AwfsError):
    pass


class ExtensionMismatch(AwfsError):
    pass


@dataclass(frozen=True)
class LiftingOperation:
    """``assign(left, right, problem)`` returns a diagonal for the problem."""

    assign: Callable
    name: str = "lifting operation"
    left_kind: str = "split reflection"
    right_kind: str = "split fibration"

    def __call__(self, left, right, problem):
        return self.assign(left, right, problem)


def canonical_diagonal(sr: SplitReflection, sf: SplitFibration, problem: Square) -> Functor:
    """The diagonal built from chosen cartesian lifts of the image of the
    unit, without checking the triangles."""
    if sf.orientation != CARTESIAN:
        raise OrientationMismatch("the canonical lift needs a cartesian cleavage")
    if problem.left != sr.section or problem.right != sf.p:
        raise NonCommutingProblem("problem legs are not the given structured maps")
    if not problem.commutes():
        raise NonCommutingProblem("lifting problem does not commute")
    X, Y = problem.top, problem.bottom
    L = sr.retraction
    A, D = sf.total, sr.big
    p = sf.p
    lifts, obj = {}, {}
    for d in D.objects:
        l = sf.lift(X.obj(L.obj(d)), Y.arr(sr.eta(d)))
        lifts[d] = l
        obj[d] = A.dom(l)
    mor = {}
    for m in D.arrows:
        d, d1 = D.morphisms[m]
        target = A.comp(X.arr(L.arr(m)), lifts[d])
        want = Y.arr(m)
        found = [h for h in A.hom(obj[d], obj[d1]) if p.arr(h) == want and A.comp(lifts[d1], h) == target]
        if len(found) != 1:
            raise MalformedCleavage(f"chosen lift at {render(d1)} is not cartesian")
        mor[m] = found[0]
    return Functor(D, A, obj, mor)


def canonical_lift(sr: SplitReflection, sf: SplitFibration, problem: Square) -> Functor:
    phi = canonical_diagonal(sr, sf, problem)
    if not is_filler(problem, phi):
        raise MalformedCleavage("chosen lifts do not produce a diagonal filler")
    return phi


CANONICAL = LiftingOperation(canonical_lift, "canonical")


def arbitrary_filler_operation(salt: int = 0) -> LiftingOperation:
    """Pick some filler from the oracle, chosen by hashing the problem.

    Used to show that the coherence checkers are not vacuous.
    """

    def assign(sr, sf, problem):
        fillers = enumerate_fillers(problem).fillers
        if not fillers:
            raise NonCommutingProblem("problem has no filler")
        top = problem.top
        key = render(tuple(sorted((render(k), render(v)) for k, v in top.object_map.items())))
        key += render(tuple(sorted((render(k), render(v)) for k, v in problem.bottom.object_map.items())))
        return fillers[(zlib.crc32(key.encode()) + salt) % len(fillers)]

    return LiftingOperation(assign, "arbitrary filler")


# -------------------------------------------------------------- structures


def leg(x) -> Functor:
    s = x.structure if isinstance(x, Sliced) else x
    return s.section if isinstance(s, SplitReflection) else s.p


def compose_lefts(l2, l1):
    """Composite of composable (possibly sliced) reflections, l1 first."""
    if isinstance(l2, Sliced):
        if l1.ext != compose_functors(l2.ext, l2.structure.section):
            raise ExtensionMismatch("extensions of the reflections do not match")
        return Sliced(compose_split_reflections(l2.structure, l1.structure), l2.ext)
    return compose_split_reflections(l2, l1)


def compose_rights(r_outer, r_inner):
    """Composite of composable (possibly sliced) fibrations, r_inner first."""
    if isinstance(r_outer, Sliced):
        if r_inner.ext != compose_functors(r_outer.ext, r_outer.structure.p):
            raise ExtensionMismatch("extensions of the fibrations do not match")
        return Sliced(compose_split_fibrations(r_inner.structure, r_outer.structure), r_outer.ext)
    return compose_split_fibrations(r_inner, r_outer)


def _functor(x) -> Functor:
    return x.f if isinstance(x, SliceMorphism) else x


# ---------------------------------------------------------------- law checks


@dataclass(frozen=True)
class HorizontalCase:
    """Problem (u, v): left -> right, a structured square (w, x): left' ->
    left and a structured square (y, z): right -> right'."""

    left: object
    right: object
    problem: Square
    left_square: Square
    right_square: Square
    left_prime: object
    right_prime: object


@dataclass(frozen=True)
class VerticalCase:
    """Problem (u, v): outer_left.inner_left -> outer_right.inner_right."""

    inner_left: object
    outer_left: object
    inner_right: object
    outer_right: object
    problem: Square


def horizontal_sides(op: LiftingOperation, case: HorizontalCase) -> tuple:
    w, x = case.left_square.top, case.left_square.bottom
    y, z = case.right_square.top, case.right_square.bottom
    u, v = case.problem.top, case.problem.bottom
    phi = op(case.left, case.right, case.problem)
    lhs = chain(y, _functor(phi), x)
    moved = Square(leg(case.left_prime), leg(case.right_prime), chain(y, u, w), chain(z, v, x))
    rhs = op(case.left_prime, case.right_prime, moved)
    if isinstance(phi, SliceMorphism):
        lhs = SliceMorphism(lhs, rhs.a)
    return lhs, rhs


def check_horizontal_law(op: LiftingOperation, corpus: Iterable) -> ValidationReport:
    report = ValidationReport()
    for k, case in enumerate(corpus):
        try:
            lhs, rhs = horizontal_sides(op, case)
        except AwfsError as e:
            report.add(f"horizontal law: {type(e).__name__}", k)
            continue
        if lhs != rhs:
            report.add("horizontal law", k)
    return report


def vertical_sides(op: LiftingOperation, case: VerticalCase) -> tuple:
    f1, f = case.inner_left, case.outer_left
    g1, g = case.inner_right, case.outer_right
    u, v = case.problem.top, case.problem.bottom
    ff = compose_lefts(f, f1)
    gg = compose_rights(g, g1)
    whole = op(ff, gg, case.problem)
    below = op(ff, g, Square(leg(ff), leg(g), compose_functors(leg(g1), u), v))
    above = op(f1, gg, Square(leg(f1), leg(gg), u, compose_functors(v, leg(f))))
    pasted = op(f, g1, Square(leg(f), leg(g1), _functor(above), _functor(below)))
    return pasted, whole


def check_vertical_law(op: LiftingOperation, corpus: Iterable) -> ValidationReport:
    report = ValidationReport()
    for k, case in enumerate(corpus):
        try:
            pasted, whole = vertical_sides(op, case)
        except AwfsError as e:
            # an incoherent operation can hand the pasting step a problem
            # with no filler at all
            report.add(f"vertical law: {type(e).__name__}", k)
            continue
        if pasted != whole:
            report.add("vertical law", k)
    return report


def check_fillers(op: LiftingOperation, cases: Iterable) -> ValidationReport:
    """Every assigned diagonal must be one of the oracle's fillers."""
    report = ValidationReport()
    for k, (left, right, problem) in enumerate(cases):
        phi = _functor(op(left, right, problem))
        plain = Square(problem.left, problem.right, problem.top, problem.bottom)
        if phi not in enumerate_fillers(plain):
            report.add("not an oracle filler", k)
    return report


# ------------------------------------------------------------------ slicing


def slice_lifting_operation(op: LiftingOperation, base) -> LiftingOperation:
    """Operation on maps over ``base``: forget the extensions, solve, and
    extend the diagonal by the extension of the right map."""

    def assign(left: Sliced, right: Sliced, problem: Square) -> SliceMorphism:
        for s in (left, right):
            if s.ext.target != base:
                raise ExtensionMismatch("map is not over the slicing base")
        if left.ext != compose_functors(right.ext, problem.bottom):
            raise ExtensionMismatch("problem is not a square over the base")
        phi = _functor(op(left.structure, right.structure, problem))
        return SliceMorphism(phi, right.source_ext)

    return LiftingOperation(assign, f"{op.name} over a base", op.left_kind, op.right_kind)
