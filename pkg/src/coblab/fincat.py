"""Exact finite categories, functors, and natural transformations.

Everything here is finite data with full composition tables: the thin shape
posets ([n], arrow posets, twisted arrow categories), nerves, backtracking
enumeration of functors and natural transformations, and the decision
procedure for equivalence of categories.

Object and morphism numbering is deterministic (constructors emit canonical
lexicographic order), so enumeration output is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import ordmaps, simplicial
from .errors import CompositionError, ResourceLimitError, TruncationError
from .simplicial import SimplicialMap, TruncatedSimplicialSet


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A finite category as explicit tables.

    ``composition[(g, f)]`` holds the index of g o f (f first) and is defined
    exactly for composable pairs.  Equality is identity: categories are built
    once by the canonical constructors and shared.
    """

    object_labels: tuple
    morphism_labels: tuple
    mor_source: tuple[int, ...]
    mor_target: tuple[int, ...]
    identities: tuple[int, ...]
    composition: dict[tuple[int, int], int]
    name: str = ""

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphism_labels)

    @cached_property
    def object_index(self) -> dict:
        return {label: i for i, label in enumerate(self.object_labels)}

    @cached_property
    def morphism_index(self) -> dict:
        return {label: i for i, label in enumerate(self.morphism_labels)}

    @cached_property
    def _hom(self) -> dict[tuple[int, int], tuple[int, ...]]:
        table: dict[tuple[int, int], list[int]] = {}
        for m in range(self.n_morphisms):
            table.setdefault((self.mor_source[m], self.mor_target[m]), []).append(m)
        return {k: tuple(v) for k, v in table.items()}

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        return self._hom.get((x, y), ())

    def compose(self, g: int, f: int) -> int:
        key = (g, f)
        if key not in self.composition:
            raise CompositionError(
                f"morphisms {f} then {g} not composable in {self.name or 'category'}"
            )
        return self.composition[key]

    def is_identity(self, m: int) -> bool:
        return self.identities[self.mor_source[m]] == m

    @cached_property
    def _iso_partners(self) -> dict[int, int]:
        """morphism -> a two-sided inverse, for every isomorphism."""
        partners = {}
        for m in range(self.n_morphisms):
            x, y = self.mor_source[m], self.mor_target[m]
            for w in self.hom(y, x):
                if (
                    self.composition[(w, m)] == self.identities[x]
                    and self.composition[(m, w)] == self.identities[y]
                ):
                    partners[m] = w
                    break
        return partners

    def is_iso(self, m: int) -> bool:
        return m in self._iso_partners

    def inverse(self, m: int) -> int:
        return self._iso_partners[m]

    def isos_between(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(m for m in self.hom(x, y) if self.is_iso(m))

    def validate(self) -> list[str]:
        """Exhaustive unitality/associativity check; returns violations."""
        bad = []
        for x in range(self.n_objects):
            e = self.identities[x]
            if self.mor_source[e] != x or self.mor_target[e] != x:
                bad.append(f"identity of object {x} has wrong endpoints")
        for m in range(self.n_morphisms):
            x, y = self.mor_source[m], self.mor_target[m]
            if self.composition[(m, self.identities[x])] != m:
                bad.append(f"right unit fails at morphism {m}")
            if self.composition[(self.identities[y], m)] != m:
                bad.append(f"left unit fails at morphism {m}")
        for (g, f), gf in self.composition.items():
            if self.mor_source[gf] != self.mor_source[f] or self.mor_target[
                gf
            ] != self.mor_target[g]:
                bad.append(f"composite of ({g},{f}) has wrong endpoints")
            for h in range(self.n_morphisms):
                if self.mor_source[h] == self.mor_target[g]:
                    if self.composition[(self.composition[(h, g)], f)] != (
                        self.composition[(h, gf)]
                    ):
                        bad.append(f"associativity fails at ({h},{g},{f})")
                        break
        return bad

    def __repr__(self):
        return (
            f"<FiniteCategory {self.name!r} objects={self.n_objects}"
            f" morphisms={self.n_morphisms}>"
        )


def from_poset(labels, leq, name: str = "") -> FiniteCategory:
    """Thin category on the given labels with x -> y exactly when leq(x, y)."""
    labels = tuple(labels)
    mor_labels = []
    mor_source = []
    mor_target = []
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if leq(a, b):
                mor_labels.append((a, b))
                mor_source.append(i)
                mor_target.append(j)
    mor_index = {lbl: k for k, lbl in enumerate(mor_labels)}
    identities = tuple(mor_index[(a, a)] for a in labels)
    composition = {}
    for g, (b1, c) in enumerate(mor_labels):
        for f, (a, b2) in enumerate(mor_labels):
            if b2 == b1:
                composition[(g, f)] = mor_index[(a, c)]
    return FiniteCategory(
        labels,
        tuple(mor_labels),
        tuple(mor_source),
        tuple(mor_target),
        identities,
        composition,
        name=name,
    )


def poset_category(n: int) -> FiniteCategory:
    """The ordinal [n] as a thin category."""
    if n < 0:
        raise ValueError("need n >= 0")
    return from_poset(range(n + 1), lambda a, b: a <= b, name=f"[{n}]")


def arrow_poset(n: int) -> FiniteCategory:
    """Pairs i <= j ordered componentwise."""
    labels = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    labels.sort()
    return from_poset(
        labels, lambda a, b: a[0] <= b[0] and a[1] <= b[1], name=f"Ar[{n}]"
    )


def tilde_arrow_poset(n: int) -> FiniteCategory:
    """Full subposet of Ar[n] on pairs with n - i <= j."""
    labels = [
        (i, j)
        for i in range(n + 1)
        for j in range(i, n + 1)
        if n - i <= j
    ]
    labels.sort()
    return from_poset(
        labels, lambda a, b: a[0] <= b[0] and a[1] <= b[1], name=f"TAr[{n}]"
    )


def twisted_arrow_category(c: FiniteCategory) -> FiniteCategory:
    """Objects are arrows of c; a morphism u => v is a pair (a, b) with b.u.a = v."""
    objects = tuple(range(c.n_morphisms))
    mor_labels = []
    mor_source = []
    mor_target = []
    for u in objects:
        for v in objects:
            for a in c.hom(c.mor_source[v], c.mor_source[u]):
                ua = c.composition[(u, a)]
                for b in c.hom(c.mor_target[u], c.mor_target[v]):
                    if c.composition[(b, ua)] == v:
                        mor_labels.append((u, v, a, b))
                        mor_source.append(u)
                        mor_target.append(v)
    mor_index = {lbl: k for k, lbl in enumerate(mor_labels)}
    identities = tuple(
        mor_index[(u, u, c.identities[c.mor_source[u]], c.identities[c.mor_target[u]])]
        for u in objects
    )
    composition = {}
    for g, (u2, v2, a2, b2) in enumerate(mor_labels):
        for f, (u1, v1, a1, b1) in enumerate(mor_labels):
            if v1 == u2:
                a = c.composition[(a1, a2)]
                b = c.composition[(b2, b1)]
                composition[(g, f)] = mor_index[(u1, v2, a, b)]
    return FiniteCategory(
        objects,
        tuple(mor_labels),
        tuple(mor_source),
        tuple(mor_target),
        identities,
        composition,
        name=f"tw({c.name})",
    )


def cyclic_group_category(k: int) -> FiniteCategory:
    """One object, morphisms Z/k under addition."""
    composition = {(g, f): (g + f) % k for g in range(k) for f in range(k)}
    return FiniteCategory(
        ("*",),
        tuple(range(k)),
        (0,) * k,
        (0,) * k,
        (0,),
        composition,
        name=f"Z/{k}",
    )


def product_of_posets(c: FiniteCategory, d: FiniteCategory, name="") -> FiniteCategory:
    """Product of two thin categories, as a thin category on label pairs."""
    c_rel = {(c.object_labels[c.mor_source[m]], c.object_labels[c.mor_target[m]])
             for m in range(c.n_morphisms)}
    d_rel = {(d.object_labels[d.mor_source[m]], d.object_labels[d.mor_target[m]])
             for m in range(d.n_morphisms)}
    labels = [(a, b) for a in c.object_labels for b in d.object_labels]
    return from_poset(
        labels,
        lambda p, q: (p[0], q[0]) in c_rel and (p[1], q[1]) in d_rel,
        name=name or f"{c.name}x{d.name}",
    )


def nerve(c: FiniteCategory, level: int) -> TruncatedSimplicialSet:
    """Nerve truncated at the given level.

    Level-0 labels are object indices; level-k labels are tuples of k
    composable morphism indices.
    """
    strings: list[list] = [sorted(range(c.n_objects))]
    if level >= 1:
        strings.append([(m,) for m in sorted(range(c.n_morphisms))])
    for k in range(2, level + 1):
        prev = strings[-1]
        nxt = []
        for s in prev:
            tail = c.mor_target[s[-1]]
            for m in range(c.n_morphisms):
                if c.mor_source[m] == tail:
                    nxt.append(s + (m,))
        nxt.sort()
        strings.append(nxt)

    def face_fn(k, i, label):
        if k == 1:
            return c.mor_target[label[0]] if i == 0 else c.mor_source[label[0]]
        if i == 0:
            return label[1:]
        if i == k:
            return label[:-1]
        return label[: i - 1] + (c.composition[(label[i], label[i - 1])],) + label[i + 1 :]

    def degeneracy_fn(k, i, label):
        if k == 0:
            return (c.identities[label],)
        obj = c.mor_source[label[0]] if i == 0 else c.mor_target[label[i - 1]]
        return label[:i] + (c.identities[obj],) + label[i:]

    return simplicial.from_generator_functions(
        strings, face_fn, degeneracy_fn, name=f"N({c.name})"
    )


@dataclass(frozen=True, eq=True)
class Functor:
    """A functor recorded by its object and morphism index maps."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]
    name: str = ""

    def on_object(self, x: int) -> int:
        return self.object_map[x]

    def on_morphism(self, m: int) -> int:
        return self.morphism_map[m]

    def validate(self) -> list[str]:
        bad = []
        s, t = self.source, self.target
        for m in range(s.n_morphisms):
            fm = self.morphism_map[m]
            if t.mor_source[fm] != self.object_map[s.mor_source[m]]:
                bad.append(f"source of morphism {m} not preserved")
            if t.mor_target[fm] != self.object_map[s.mor_target[m]]:
                bad.append(f"target of morphism {m} not preserved")
        for x in range(s.n_objects):
            if self.morphism_map[s.identities[x]] != t.identities[self.object_map[x]]:
                bad.append(f"identity of object {x} not preserved")
        for (g, f), gf in s.composition.items():
            if self.morphism_map[gf] != t.composition[
                (self.morphism_map[g], self.morphism_map[f])
            ]:
                bad.append(f"composition ({g},{f}) not preserved")
        return bad


def identity_functor(c: FiniteCategory) -> Functor:
    return Functor(
        c, c, tuple(range(c.n_objects)), tuple(range(c.n_morphisms)), name="id"
    )


def compose_functors(g: Functor, f: Functor) -> Functor:
    if f.target is not g.source:
        raise CompositionError("functors not composable")
    return Functor(
        f.source,
        g.target,
        tuple(g.object_map[x] for x in f.object_map),
        tuple(g.morphism_map[m] for m in f.morphism_map),
        name=f"{g.name}o{f.name}",
    )


def nerve_map(f: Functor, level: int) -> SimplicialMap:
    """The simplicial map induced by a functor on truncated nerves."""
    ns, nt = nerve(f.source, level), nerve(f.target, level)
    comps = []
    for k in range(level + 1):
        if k == 0:
            comps.append(
                tuple(nt.index[0][f.object_map[x]] for x in ns.simplices[0])
            )
        else:
            comps.append(
                tuple(
                    nt.index[k][tuple(f.morphism_map[m] for m in s)]
                    for s in ns.simplices[k]
                )
            )
    return SimplicialMap(ns, nt, tuple(comps), name=f"N({f.name})")


def enumerate_functors(
    s: FiniteCategory,
    c: FiniteCategory,
    predicate=None,
    max_results: int | None = None,
) -> list[Functor]:
    """All functors s -> c (passing the predicate), in canonical order.

    Backtracks over object images in index order, then over morphism images
    in index order, pruning by endpoint and composition constraints as soon
    as both factors of a composite are assigned.  Exceeding ``max_results``
    raises a resource error rather than returning a partial list.
    """
    results: list[Functor] = []
    n_obj, n_mor = s.n_objects, s.n_morphisms
    obj_map = [-1] * n_obj
    mor_map = [-1] * n_mor
    composable = {}
    for (g, f), gf in s.composition.items():
        composable.setdefault(gf, []).append((g, f))

    def assign_morphisms(m: int):
        if m == n_mor:
            cand = Functor(s, c, tuple(obj_map), tuple(mor_map))
            if predicate is None or predicate(cand):
                results.append(cand)
                if max_results is not None and len(results) > max_results:
                    raise ResourceLimitError(
                        f"functor enumeration exceeded ceiling {max_results}",
                        context={"source": s.name, "target": c.name},
                    )
            return
        if s.is_identity(m):
            mor_map[m] = c.identities[obj_map[s.mor_source[m]]]
            assign_morphisms(m + 1)
            mor_map[m] = -1
            return
        for cm in c.hom(obj_map[s.mor_source[m]], obj_map[s.mor_target[m]]):
            mor_map[m] = cm
            ok = True
            for gf, pairs in composable.items():
                if mor_map[gf] == -1:
                    continue
                for g, f in pairs:
                    if mor_map[g] != -1 and mor_map[f] != -1:
                        if c.composition[(mor_map[g], mor_map[f])] != mor_map[gf]:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                assign_morphisms(m + 1)
            mor_map[m] = -1

    def assign_objects(x: int):
        if x == n_obj:
            assign_morphisms(0)
            return
        for cx in range(c.n_objects):
            obj_map[x] = cx
            assign_objects(x + 1)
            obj_map[x] = -1

    assign_objects(0)
    return results


@dataclass(frozen=True, eq=True)
class NaturalTransformation:
    """Components indexed by objects of the (shared) source category."""

    source: Functor
    target: Functor
    components: tuple[int, ...]

    def validate(self) -> list[str]:
        f, g = self.source, self.target
        s, c = f.source, f.target
        bad = []
        for x in range(s.n_objects):
            comp = self.components[x]
            if c.mor_source[comp] != f.object_map[x] or c.mor_target[
                comp
            ] != g.object_map[x]:
                bad.append(f"component at object {x} has wrong endpoints")
        for m in range(s.n_morphisms):
            x, y = s.mor_source[m], s.mor_target[m]
            lhs = c.composition[(g.morphism_map[m], self.components[x])]
            rhs = c.composition[(self.components[y], f.morphism_map[m])]
            if lhs != rhs:
                bad.append(f"naturality fails at morphism {m}")
        return bad


def enumerate_natural_transformations(
    f: Functor, g: Functor
) -> list[NaturalTransformation]:
    """All natural transformations f => g between parallel functors."""
    if f.source is not g.source or f.target is not g.target:
        raise CompositionError("functors are not parallel")
    s, c = f.source, f.target
    n_obj = s.n_objects
    by_endpoint = [[] for _ in range(n_obj)]
    for m in range(s.n_morphisms):
        x, y = s.mor_source[m], s.mor_target[m]
        by_endpoint[max(x, y)].append((m, x, y))
    comps = [-1] * n_obj
    out: list[NaturalTransformation] = []

    def extend(x: int):
        if x == n_obj:
            out.append(NaturalTransformation(f, g, tuple(comps)))
            return
        for cand in c.hom(f.object_map[x], g.object_map[x]):
            comps[x] = cand
            ok = True
            for m, a, b in by_endpoint[x]:
                lhs = c.composition[(g.morphism_map[m], comps[a])]
                rhs = c.composition[(comps[b], f.morphism_map[m])]
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                extend(x + 1)
            comps[x] = -1

    extend(0)
    return out


@dataclass
class EquivalenceReport:
    """Verdict of the equivalence-of-categories decision procedure."""

    ok: bool
    fully_faithful: bool
    essentially_surjective: bool
    object_counts: tuple[int, int]
    iso_witness: dict = field(default_factory=dict)
    failure: str = ""


def is_equivalence(f: Functor) -> EquivalenceReport:
    """Fully faithful + essentially surjective, with witnesses."""
    s, c = f.source, f.target
    fully_faithful = True
    failure = ""
    for x in range(s.n_objects):
        for y in range(s.n_objects):
            dom = s.hom(x, y)
            cod = c.hom(f.object_map[x], f.object_map[y])
            image = [f.morphism_map[m] for m in dom]
            if len(set(image)) != len(dom) or set(image) != set(cod):
                fully_faithful = False
                failure = f"hom({x},{y}): {len(dom)} -> image {len(set(image))} of {len(cod)}"
                break
        if not fully_faithful:
            break
    witness = {}
    essentially_surjective = True
    image_objects = set(f.object_map)
    for cy in range(c.n_objects):
        found = None
        for cx in sorted(image_objects):
            isos = c.isos_between(cx, cy)
            if isos:
                found = (cx, isos[0])
                break
        if found is None:
            essentially_surjective = False
            failure = failure or f"object {cy} not reached up to iso"
        else:
            witness[cy] = found
    return EquivalenceReport(
        ok=fully_faithful and essentially_surjective,
        fully_faithful=fully_faithful,
        essentially_surjective=essentially_surjective,
        object_counts=(s.n_objects, c.n_objects),
        iso_witness=witness,
        failure=failure,
    )


def subdivision_bridge(c: FiniteCategory, level: int) -> SimplicialMap:
    """The canonical levelwise comparison N(tw c) -> Sd(N c).

    A k-string of twisted-arrow squares unfolds into the (2k+1)-string that
    runs down the left column, across the starting arrow, and up the right
    column.  The result is returned as a simplicial map whose components are
    checked for bijectivity by the caller (see tests): this is the bridge
    between the categorical and the simplicial pictures of subdivision.
    """
    tw = twisted_arrow_category(c)
    n_tw = nerve(tw, level)
    nc = nerve(c, 2 * level + 1)
    sd = simplicial.edgewise_subdivision(nc, level)
    comps = []
    for k in range(level + 1):
        table = []
        for label in n_tw.simplices[k]:
            if k == 0:
                unfolded = (label,)
            else:
                first_obj = tw.mor_source[label[0]]
                down = tuple(tw.morphism_labels[m][2] for m in reversed(label))
                up = tuple(tw.morphism_labels[m][3] for m in label)
                unfolded = down + (first_obj,) + up
            table.append(sd.index[k][unfolded])
        comps.append(tuple(table))
    return SimplicialMap(n_tw, sd, tuple(comps), name=f"bridge({c.name})")


def check_bridge_bijective(bridge: SimplicialMap) -> bool:
    """Levelwise bijectivity of the subdivision bridge components."""
    for k in range(bridge.level + 1):
        comp = bridge.components[k]
        if len(set(comp)) != len(comp) or len(comp) != bridge.target.size(k):
            return False
    return True
