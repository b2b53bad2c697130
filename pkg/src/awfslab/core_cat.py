"""Finite categories, groupoids, functors and natural transformations.

Everything is stored as explicit tables and every law is checked by
enumeration. Identifiers are hashable values: plain strings for data read
from disk, nested tuples for categories built by constructions such as
pullbacks (a pair ``(a, c)`` always means "a on the left leg, c on the right").
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Optional


class AwfsError(Exception):
    """Base class for every error raised by the package."""


class MalformedTable(AwfsError):
    pass


class BoundaryMismatch(AwfsError):
    pass


def render(ident) -> str:
    """Flat string form of an identifier, used for ordering and for JSON."""
    if isinstance(ident, str):
        return ident
    if isinstance(ident, tuple):
        return "(" + ",".join(render(x) for x in ident) + ")"
    return str(ident)


def ordered(idents: Iterable) -> tuple:
    return tuple(sorted(idents, key=render))


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.law}: " + ", ".join(render(w) if not isinstance(w, str) else w for w in self.witness)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, *witness) -> None:
        self.violations.append(Violation(law, tuple(witness)))

    def extend(self, other: "ValidationReport", prefix: str = "") -> "ValidationReport":
        for v in other.violations:
            self.violations.append(Violation(prefix + v.law, v.witness))
        return self

    def laws(self) -> set:
        return {v.law for v in self.violations}

    def __len__(self):
        return len(self.violations)

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    morphisms: Mapping  # name -> (dom, cod)
    identities: Mapping  # object -> name
    composition: Mapping  # (g, f) -> g.f
    inverses: Optional[Mapping] = None

    def __post_init__(self):
        object.__setattr__(self, "objects", ordered(self.objects))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and self.composition == other.composition
            and self.inverses == other.inverses
        )

    def __hash__(self):
        return hash((len(self.objects), len(self.morphisms)))

    def __repr__(self):
        kind = "groupoid" if self.is_groupoid else "category"
        return f"<{kind} {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    @property
    def is_groupoid(self) -> bool:
        return self.inverses is not None

    def dom(self, m):
        return self.morphisms[m][0]

    def cod(self, m):
        return self.morphisms[m][1]

    def id(self, obj):
        return self.identities[obj]

    def comp(self, g, f):
        """g after f."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise BoundaryMismatch(f"cannot compose {render(g)} after {render(f)}") from None

    def chain(self, *ms):
        """Right-to-left composite: chain(h, g, f) = h.g.f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.comp(m, out)
        return out

    def inv(self, m):
        if self.inverses is None:
            raise BoundaryMismatch("not a groupoid")
        return self.inverses[m]

    def is_identity(self, m) -> bool:
        return self.identities.get(self.dom(m)) == m

    @cached_property
    def arrows(self) -> tuple:
        return ordered(self.morphisms)

    @cached_property
    def object_set(self) -> frozenset:
        return frozenset(self.objects)

    @cached_property
    def _homs(self) -> dict:
        homs = {}
        for m in self.arrows:
            homs.setdefault(self.morphisms[m], []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    @cached_property
    def _into(self) -> dict:
        out = {o: [] for o in self.objects}
        for m in self.arrows:
            out[self.cod(m)].append(m)
        return out

    @cached_property
    def _out_of(self) -> dict:
        out = {o: [] for o in self.objects}
        for m in self.arrows:
            out[self.dom(m)].append(m)
        return out

    def into(self, obj) -> list:
        return self._into[obj]

    def out_of(self, obj) -> list:
        return self._out_of[obj]

    def is_iso(self, m) -> bool:
        a, b = self.morphisms[m]
        return any(self.comp(n, m) == self.id(a) and self.comp(m, n) == self.id(b) for n in self.hom(b, a))


def category(objects, morphisms, identities, composition, inverses=None) -> FinCategory:
    """Build a category from loosely typed tables (lists allowed)."""
    morphs = {}
    for entry in morphisms:
        if isinstance(entry, Mapping):
            morphs[entry["name"]] = (entry["dom"], entry["cod"])
        else:
            name, dom, cod = entry
            morphs[name] = (dom, cod)
    if isinstance(composition, Mapping):
        comp = dict(composition)
    else:
        comp = {(g, f): gf for g, f, gf in composition}
    return FinCategory(
        tuple(objects), morphs, dict(identities), comp, None if inverses is None else dict(inverses)
    )


def validate_category(c: FinCategory) -> ValidationReport:
    objs = c.object_set
    for m, (d, e) in c.morphisms.items():
        if d not in objs or e not in objs:
            raise MalformedTable(f"morphism {render(m)} has unknown endpoint")
    for o in c.objects:
        if o not in c.identities:
            raise MalformedTable(f"object {render(o)} has no identity")
    for o, m in c.identities.items():
        if o not in objs or m not in c.morphisms:
            raise MalformedTable(f"identity entry {render(o)} -> {render(m)} refers to unknown name")
    for (g, f), gf in c.composition.items():
        if g not in c.morphisms or f not in c.morphisms or gf not in c.morphisms:
            raise MalformedTable(f"composition entry {render((g, f, gf))} refers to unknown morphism")
    for g in c.arrows:
        for f in c.into(c.dom(g)):
            if (g, f) not in c.composition:
                raise MalformedTable(f"missing composite of {render(g)} after {render(f)}")
    if c.inverses is not None:
        for m, n in c.inverses.items():
            if m not in c.morphisms or n not in c.morphisms:
                raise MalformedTable(f"inverse entry {render(m)} -> {render(n)} refers to unknown morphism")
        for m in c.arrows:
            if m not in c.inverses:
                raise MalformedTable(f"morphism {render(m)} has no inverse entry")

    report = ValidationReport()
    for o, i in c.identities.items():
        if c.morphisms[i] != (o, o):
            report.add("identity endpoints", o, i)
    for (g, f), gf in c.composition.items():
        if c.cod(f) != c.dom(g):
            report.add("composable pair", g, f)
        elif c.morphisms[gf] != (c.dom(f), c.cod(g)):
            report.add("composite endpoints", g, f, gf)
    for f in c.arrows:
        d, e = c.morphisms[f]
        if c.composition.get((f, c.id(d))) != f:
            report.add("right identity", f)
        if c.composition.get((c.id(e), f)) != f:
            report.add("left identity", f)
    for f in c.arrows:
        for g in c.out_of(c.cod(f)):
            gf = c.composition[(g, f)]
            for h in c.out_of(c.cod(g)):
                if c.composition[(h, gf)] != c.composition[(c.composition[(h, g)], f)]:
                    report.add("associativity", h, g, f)
    if c.inverses is not None:
        for f in c.arrows:
            n = c.inverses[f]
            d, e = c.morphisms[f]
            if c.morphisms[n] != (e, d):
                report.add("inverse endpoints", f, n)
                continue
            if c.composition.get((n, f)) != c.id(d) or c.composition.get((f, n)) != c.id(e):
                report.add("inverse law", f, n)
    return report


# ---------------------------------------------------------------- functors


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping
    morphism_map: Mapping

    def obj(self, x):
        return self.object_map[x]

    def arr(self, m):
        return self.morphism_map[m]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash((len(self.object_map), len(self.morphism_map)))

    def __repr__(self):
        return f"<functor {self.source!r} -> {self.target!r}>"


def validate_functor(F: Functor) -> ValidationReport:
    S, T = F.source, F.target
    for o in S.objects:
        if o not in F.object_map or F.object_map[o] not in T.object_set:
            raise MalformedTable(f"object map undefined or invalid at {render(o)}")
    for m in S.arrows:
        if m not in F.morphism_map or F.morphism_map[m] not in T.morphisms:
            raise MalformedTable(f"morphism map undefined or invalid at {render(m)}")
    report = ValidationReport()
    for m in S.arrows:
        d, e = S.morphisms[m]
        if T.morphisms[F.arr(m)] != (F.obj(d), F.obj(e)):
            report.add("functor endpoints", m)
    for o in S.objects:
        if F.arr(S.id(o)) != T.id(F.obj(o)):
            report.add("functor identity", o)
    if report.ok:
        for (g, f), gf in S.composition.items():
            if T.comp(F.arr(g), F.arr(f)) != F.arr(gf):
                report.add("functor composition", g, f)
    return report


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, {o: o for o in C.objects}, {m: m for m in C.arrows})


def compose_functors(g: Functor, f: Functor) -> Functor:
    """g after f."""
    if f.target != g.source:
        raise BoundaryMismatch("target of the first functor differs from source of the second")
    return Functor(
        f.source,
        g.target,
        {o: g.object_map[f.object_map[o]] for o in f.source.objects},
        {m: g.morphism_map[f.morphism_map[m]] for m in f.source.arrows},
    )


def chain(*fs: Functor) -> Functor:
    """Right-to-left composite of functors."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = compose_functors(g, out)
    return out


def is_isomorphism(F: Functor) -> bool:
    return (
        len(set(F.object_map.values())) == len(F.source.objects) == len(F.target.objects)
        and len(set(F.morphism_map.values())) == len(F.source.morphisms) == len(F.target.morphisms)
    )


def inverse_functor(F: Functor) -> Functor:
    if not is_isomorphism(F):
        raise BoundaryMismatch("functor is not invertible")
    return Functor(
        F.target,
        F.source,
        {v: k for k, v in F.object_map.items()},
        {v: k for k, v in F.morphism_map.items()},
    )


def constant_functor(C: FinCategory, D: FinCategory, obj) -> Functor:
    return Functor(C, D, {o: obj for o in C.objects}, {m: D.id(obj) for m in C.arrows})


# ------------------------------------------------- natural transformations


@dataclass(frozen=True, eq=False)
class NatTransformation:
    source_functor: Functor
    target_functor: Functor
    components: Mapping

    def at(self, obj):
        return self.components[obj]

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return (
            self.components == other.components
            and self.source_functor == other.source_functor
            and self.target_functor == other.target_functor
        )

    def __hash__(self):
        return hash(len(self.components))


def validate_nat(t: NatTransformation) -> ValidationReport:
    F, G = t.source_functor, t.target_functor
    if F.source != G.source or F.target != G.target:
        raise BoundaryMismatch("functors of a transformation must be parallel")
    C, D = F.source, F.target
    report = ValidationReport()
    for o in C.objects:
        if o not in t.components or t.components[o] not in D.morphisms:
            raise MalformedTable(f"component missing or unknown at {render(o)}")
        if D.morphisms[t.at(o)] != (F.obj(o), G.obj(o)):
            report.add("component endpoints", o)
    if report.ok:
        for m in C.arrows:
            d, e = C.morphisms[m]
            if D.comp(t.at(e), F.arr(m)) != D.comp(G.arr(m), t.at(d)):
                report.add("naturality", m)
    return report


def identity_nat(F: Functor) -> NatTransformation:
    return NatTransformation(F, F, {o: F.target.id(F.obj(o)) for o in F.source.objects})


# ------------------------------------------------------------ constructions


def terminal() -> FinCategory:
    return category(["*"], [("1", "*", "*")], {"*": "1"}, [("1", "1", "1")], {"1": "1"})


def discrete(names, groupoid: bool = True) -> FinCategory:
    names = list(names)
    ids = {n: f"1_{n}" for n in names}
    return category(
        names,
        [(ids[n], n, n) for n in names],
        ids,
        [(ids[n], ids[n], ids[n]) for n in names],
        {i: i for i in ids.values()} if groupoid else None,
    )


def cyclic_group(order: int, obj: str = "*", prefix: str = "g") -> FinCategory:
    """One-object groupoid on the cyclic group of the given order."""
    names = [f"{prefix}{k}" for k in range(order)]
    names[0] = "e" if prefix == "g" else f"{prefix}0"
    comp = [(names[i], names[j], names[(i + j) % order]) for i in range(order) for j in range(order)]
    return category(
        [obj],
        [(n, obj, obj) for n in names],
        {obj: names[0]},
        comp,
        {names[i]: names[(-i) % order] for i in range(order)},
    )


def bz2() -> FinCategory:
    """The one-object groupoid with morphisms e and s, s.s = e."""
    return category(
        ["*"],
        [("e", "*", "*"), ("s", "*", "*")],
        {"*": "e"},
        [("e", "e", "e"), ("e", "s", "s"), ("s", "e", "s"), ("s", "s", "e")],
        {"e": "e", "s": "s"},
    )


def interval() -> FinCategory:
    """Two objects a, b and a unique isomorphism between them."""
    return category(
        ["a", "b"],
        [("1_a", "a", "a"), ("1_b", "b", "b"), ("ab", "a", "b"), ("ba", "b", "a")],
        {"a": "1_a", "b": "1_b"},
        [
            ("1_a", "1_a", "1_a"), ("1_b", "1_b", "1_b"),
            ("ab", "1_a", "ab"), ("1_b", "ab", "ab"),
            ("ba", "1_b", "ba"), ("1_a", "ba", "ba"),
            ("ba", "ab", "1_a"), ("ab", "ba", "1_b"),
        ],
        {"1_a": "1_a", "1_b": "1_b", "ab": "ba", "ba": "ab"},
    )


def arrow_category() -> FinCategory:
    """The walking arrow 0 -> 1 (not a groupoid)."""
    return category(
        ["0", "1"],
        [("1_0", "0", "0"), ("1_1", "1", "1"), ("01", "0", "1")],
        {"0": "1_0", "1": "1_1"},
        [("1_0", "1_0", "1_0"), ("1_1", "1_1", "1_1"), ("01", "1_0", "01"), ("1_1", "01", "01")],
    )


def to_terminal(C: FinCategory, T: Optional[FinCategory] = None) -> Functor:
    T = T or terminal()
    (o,) = T.objects
    return constant_functor(C, T, o)


def point(C: FinCategory, obj, T: Optional[FinCategory] = None) -> Functor:
    """The functor from the terminal category picking an object."""
    T = T or terminal()
    (o,) = T.objects
    return Functor(T, C, {o: obj}, {T.id(o): C.id(obj)})


def relabel(C: FinCategory, objects: Mapping, morphisms: Mapping) -> tuple:
    """Rename identifiers; returns the renamed category and the iso C -> renamed."""
    D = FinCategory(
        tuple(objects[o] for o in C.objects),
        {morphisms[m]: (objects[d], objects[e]) for m, (d, e) in C.morphisms.items()},
        {objects[o]: morphisms[i] for o, i in C.identities.items()},
        {(morphisms[g], morphisms[f]): morphisms[gf] for (g, f), gf in C.composition.items()},
        None if C.inverses is None else {morphisms[m]: morphisms[n] for m, n in C.inverses.items()},
    )
    return D, Functor(C, D, dict(objects), dict(morphisms))


def disjoint_union(parts) -> FinCategory:
    """Coproduct of categories; identifiers are tagged (index, name)."""
    objs, morphs, ids, comp, inv = [], {}, {}, {}, {}
    groupoid = all(P.is_groupoid for P in parts)
    for k, P in enumerate(parts):
        objs += [(k, o) for o in P.objects]
        morphs.update({(k, m): ((k, d), (k, e)) for m, (d, e) in P.morphisms.items()})
        ids.update({(k, o): (k, i) for o, i in P.identities.items()})
        comp.update({((k, g), (k, f)): (k, gf) for (g, f), gf in P.composition.items()})
        if groupoid:
            inv.update({(k, m): (k, n) for m, n in P.inverses.items()})
    return FinCategory(tuple(objs), morphs, ids, comp, inv if groupoid else None)


def pullback_category(f: Functor, g: Functor) -> tuple:
    """Strict pullback of f: A -> B and g: C -> B.

    Returns (A x_B C, projection to A, projection to C); objects and
    morphisms are pairs (a, c).
    """
    if f.target != g.target:
        raise BoundaryMismatch("pullback legs have different targets")
    A, C = f.source, g.source
    by_image = {}
    for c in C.objects:
        by_image.setdefault(g.obj(c), []).append(c)
    objs = [(a, c) for a in A.objects for c in by_image.get(f.obj(a), ())]
    by_arrow, by_start = {}, {}
    for n in C.arrows:
        by_arrow.setdefault(g.arr(n), []).append(n)
        by_start.setdefault((g.arr(n), C.dom(n)), []).append(n)
    morphs = {}
    for m in A.arrows:
        d, e = A.morphisms[m]
        for n in by_arrow.get(f.arr(m), ()):
            d2, e2 = C.morphisms[n]
            morphs[(m, n)] = ((d, d2), (e, e2))
    ids = {(a, c): (A.id(a), C.id(c)) for a, c in objs}
    comp = {}
    A_comp, C_comp = A.composition, C.composition
    for (m, n), (_, (e, e2)) in morphs.items():
        for m2 in A.out_of(e):
            for n2 in by_start.get((f.arr(m2), e2), ()):
                comp[((m2, n2), (m, n))] = (A_comp[(m2, m)], C_comp[(n2, n)])
    inv = None
    if A.is_groupoid and C.is_groupoid:
        inv = {(m, n): (A.inv(m), C.inv(n)) for m, n in morphs}
    P = FinCategory(tuple(objs), morphs, ids, comp, inv)
    pa = Functor(P, A, {o: o[0] for o in objs}, {k: k[0] for k in morphs})
    pc = Functor(P, C, {o: o[1] for o in objs}, {k: k[1] for k in morphs})
    return P, pa, pc


def product(A: FinCategory, C: FinCategory) -> tuple:
    return pullback_category(to_terminal(A), to_terminal(C))


def pair_functor(P: FinCategory, h: Functor, k: Functor) -> Functor:
    """The functor X -> P = A x_B C induced by a commuting cone (h, k)."""
    if h.source != k.source:
        raise BoundaryMismatch("cone legs have different sources")
    X = h.source
    F = Functor(
        X,
        P,
        {x: (h.obj(x), k.obj(x)) for x in X.objects},
        {m: (h.arr(m), k.arr(m)) for m in X.arrows},
    )
    for o in F.object_map.values():
        if o not in P.object_set:
            raise BoundaryMismatch("cone does not commute")
    for m in F.morphism_map.values():
        if m not in P.morphisms:
            raise BoundaryMismatch("cone does not commute")
    return F


def subcategory(C: FinCategory, objects: Iterable, keep: Callable) -> FinCategory:
    """Full-on-objects restriction to the morphisms satisfying ``keep``."""
    objs = set(objects)
    morphs = {m: de for m, de in C.morphisms.items() if de[0] in objs and de[1] in objs and keep(m)}
    comp = {gf: C.composition[gf] for gf in C.composition if gf[0] in morphs and gf[1] in morphs}
    inv = None if C.inverses is None else {m: C.inverses[m] for m in morphs}
    return FinCategory(tuple(objs), morphs, {o: C.id(o) for o in objs}, comp, inv)


def inclusion(S: FinCategory, C: FinCategory) -> Functor:
    return Functor(S, C, {o: o for o in S.objects}, {m: m for m in S.arrows})


# ------------------------------------------------------------- functor search


def connected_components(S: FinCategory) -> list:
    """Full subcategories on the connected components, in identifier order."""
    parent = {o: o for o in S.objects}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for d, e in S.morphisms.values():
        parent[find(d)] = find(e)
    groups = {}
    for o in S.objects:
        groups.setdefault(find(o), []).append(o)
    out = []
    for members in groups.values():
        keep = set(members)
        morphs = {m: v for m, v in S.morphisms.items() if v[0] in keep}
        out.append(
            FinCategory(
                tuple(members),
                morphs,
                {o: S.id(o) for o in members},
                {k: v for k, v in S.composition.items() if k[1] in morphs},
                None if S.inverses is None else {m: S.inverses[m] for m in morphs},
            )
        )
    return out


def search_functors(
    S: FinCategory,
    T: FinCategory,
    object_choices: Optional[Callable] = None,
    morphism_choices: Optional[Callable] = None,
    rng: Optional[random.Random] = None,
    budget: Optional[int] = None,
) -> Iterator[Functor]:
    """Backtracking enumeration of functors S -> T.

    ``object_choices(x)`` restricts the image of an object, and
    ``morphism_choices(m, candidates)`` filters the candidate images of a
    morphism. Connected components are searched independently. Without
    ``rng`` the output order is deterministic. With a ``budget`` the search
    gives up silently after that many search steps in a component, so the
    enumeration is then incomplete.
    """
    parts = connected_components(S)
    if len(parts) == 1:
        yield from _search_connected(S, T, object_choices, morphism_choices, rng, budget)
        return
    for part in parts:
        if next(_search_connected(part, T, object_choices, morphism_choices, rng, budget), None) is None:
            return

    def combine(k, omap, mmap):
        if k == len(parts):
            yield Functor(S, T, dict(omap), dict(mmap))
            return
        for F in _search_connected(parts[k], T, object_choices, morphism_choices, rng, budget):
            yield from combine(k + 1, {**omap, **F.object_map}, {**mmap, **F.morphism_map})

    yield from combine(0, {}, {})


class _OutOfBudget(Exception):
    pass


def _search_connected(S, T, object_choices, morphism_choices, rng, budget=None) -> Iterator[Functor]:
    """Search on a connected S: grow along a spanning tree from the first
    object and propagate forced composites after every choice."""
    objs = list(S.objects)
    rest = [m for m in S.arrows if not S.is_identity(m)]
    seen, steps = {objs[0]}, []
    grew = True
    while grew:
        grew = False
        for m in rest:
            d, e = S.morphisms[m]
            if (d in seen) != (e in seen):
                steps.append(m)
                seen.update((d, e))
                grew = True
    steps += [m for m in rest if m not in steps]
    after, before = {}, {}
    for (g, f), gf in S.composition.items():
        after.setdefault(f, []).append((g, gf))
        before.setdefault(g, []).append((f, gf))
    allowed_obj = {}
    omap, mmap, trail = {}, {}, []
    spent = [0]

    def obj_ok(x, c):
        if object_choices is None:
            return True
        if x not in allowed_obj:
            allowed_obj[x] = set(object_choices(x))
        return c in allowed_obj[x]

    def place(x, c, queue):
        if x in omap:
            return omap[x] == c
        if not obj_ok(x, c):
            return False
        omap[x] = c
        trail.append((omap, x))
        queue.append((S.id(x), T.id(c)))
        return True

    def assign(m, c) -> bool:
        queue = [(m, c)]
        while queue:
            m, c = queue.pop()
            if m in mmap:
                if mmap[m] != c:
                    return False
                continue
            d, e = S.morphisms[m]
            if not (place(d, T.dom(c), queue) and place(e, T.cod(c), queue)):
                return False
            if morphism_choices is not None and not S.is_identity(m) and not list(morphism_choices(m, [c])):
                return False
            mmap[m] = c
            trail.append((mmap, m))
            for g, gf in after.get(m, ()):
                if g in mmap:
                    queue.append((gf, T.composition[(mmap[g], c)]))
            for f, gf in before.get(m, ()):
                if f in mmap:
                    queue.append((gf, T.composition[(c, mmap[f])]))
        return True

    def undo(mark):
        while len(trail) > mark:
            table, key = trail.pop()
            del table[key]

    def candidates(m):
        d, e = S.morphisms[m]
        if d in omap and e in omap:
            cands = T.hom(omap[d], omap[e])
        elif d in omap:
            cands = T.out_of(omap[d])
        else:
            cands = T.into(omap[e])
        cands = list(morphism_choices(m, list(cands))) if morphism_choices else list(cands)
        if rng:
            rng.shuffle(cands)
        return cands

    def step(k):
        spent[0] += 1
        if budget is not None and spent[0] > budget:
            raise _OutOfBudget
        while k < len(steps) and steps[k] in mmap:
            k += 1
        if k == len(steps):
            yield Functor(S, T, dict(omap), dict(mmap))
            return
        m = steps[k]
        for c in candidates(m):
            mark = len(trail)
            if assign(m, c):
                yield from step(k + 1)
            undo(mark)

    first = list(object_choices(objs[0])) if object_choices else list(T.objects)
    if rng:
        rng.shuffle(first)
    try:
        for c in first:
            mark = len(trail)
            queue = []
            if place(objs[0], c, queue) and all(assign(m, v) for m, v in queue):
                yield from step(0)
            undo(mark)
    except _OutOfBudget:
        return


def first_functor(S, T, object_choices=None, morphism_choices=None, rng=None) -> Optional[Functor]:
    return next(search_functors(S, T, object_choices, morphism_choices, rng), None)
