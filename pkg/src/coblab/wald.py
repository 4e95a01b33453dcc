"""Concrete unpointed Waldhausen structures on skeletal finite-set categories.

An instance bundles a finite base category with cofibration/weak-equivalence
predicates, a canonical pushout oracle, and (where available) a functorial
factorization.  Skeletal bases keep enumeration finite: objects are the sizes,
elements are 0..k-1, and the pushout oracle always returns the quotient of the
ordered disjoint union with classes relabeled by least element, so identical
inputs give identical labeled outputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import ResourceLimitError
from .fincat import FiniteCategory, Functor, NaturalTransformation

GLUING_FORMULATION = (
    "gluing lemma checked in the standard two-pushout form: for weakly "
    "equivalent gluing data (cofibration-left cospans joined by three weak "
    "equivalences) the induced map of canonical pushouts is a weak equivalence"
)


@dataclass(frozen=True, eq=False)
class PushoutCocone:
    """Canonical pushout of (c: C >-> D, f: C -> X): object with its two legs."""

    obj: int
    leg_x: int  # morphism X -> obj, a cofibration by axiom (2)
    leg_d: int  # morphism D -> obj


@dataclass(frozen=True, eq=False)
class WaldhausenInstance:
    name: str
    base: FiniteCategory
    cofibrations: frozenset[int]
    weqs: frozenset[int]
    size_bound: int
    initial_object: int | None = None
    zero_object: int | None = None
    _pushout_fn: object = None
    _factorization_fn: object = None
    _pushout_cache: dict = field(default_factory=dict)
    _square_cache: dict = field(default_factory=dict)

    def __repr__(self):
        return f"<WaldhausenInstance {self.name}:{self.size_bound}>"

    def is_cofibration(self, m: int) -> bool:
        return m in self.cofibrations

    def is_weq(self, m: int) -> bool:
        return m in self.weqs

    def pushout(self, c: int, f: int) -> PushoutCocone:
        """Canonical pushout along the cofibration c of the morphism f."""
        key = (c, f)
        cached = self._pushout_cache.get(key)
        if cached is not None:
            if isinstance(cached, ResourceLimitError):
                raise cached
            return cached
        if c not in self.cofibrations:
            raise ValueError(f"morphism {c} is not a cofibration")
        if self.base.mor_source[c] != self.base.mor_source[f]:
            raise ValueError("pushout legs must share their source")
        try:
            result = self._pushout_fn(self, c, f)
        except ResourceLimitError as err:
            self._pushout_cache[key] = err
            raise
        self._pushout_cache[key] = result
        return result

    def is_pushout_square(self, f: int, g: int, u: int, v: int) -> bool:
        """Universal property of the square (f: C->X, g: C->D, u: X->P, v: D->P).

        Checked against every candidate cocone in the finite base: commuting
        square, and a unique mediating morphism for each test cocone.
        """
        key = (f, g, u, v)
        cached = self._square_cache.get(key)
        if cached is not None:
            return cached
        base = self.base
        ok = True
        if base.composition[(u, f)] != base.composition[(v, g)]:
            ok = False
        else:
            x, d = base.mor_target[f], base.mor_target[g]
            p = base.mor_target[u]
            for q in range(base.n_objects):
                homs_x = base.hom(x, q)
                homs_d = base.hom(d, q)
                homs_p = base.hom(p, q)
                for u2 in homs_x:
                    u2f = base.composition[(u2, f)]
                    for v2 in homs_d:
                        if u2f != base.composition[(v2, g)]:
                            continue
                        mediators = 0
                        for w in homs_p:
                            if (
                                base.composition[(w, u)] == u2
                                and base.composition[(w, v)] == v2
                            ):
                                mediators += 1
                                if mediators > 1:
                                    break
                        if mediators != 1:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
        self._square_cache[key] = ok
        return ok

    def mediating_morphism(self, pc: PushoutCocone, u2: int, v2: int) -> int:
        """The unique morphism out of a canonical pushout matching a cocone."""
        base = self.base
        p = base.mor_target[pc.leg_x]
        q = base.mor_target[u2]
        found = None
        for w in base.hom(p, q):
            if (
                base.composition[(w, pc.leg_x)] == u2
                and base.composition[(w, pc.leg_d)] == v2
            ):
                if found is not None:
                    raise ValueError("mediating morphism not unique")
                found = w
        if found is None:
            raise ValueError("no mediating morphism; cocone does not commute?")
        return found

    def coproduct(self, a: int, b: int) -> PushoutCocone:
        """Canonical coproduct a u b (a-part labeled first)."""
        if self.initial_object is None:
            raise ValueError(f"{self.name} has no initial object")
        init = self.initial_object
        to_b = self.base.hom(init, b)
        to_a = self.base.hom(init, a)
        if len(to_b) != 1 or len(to_a) != 1:
            raise ValueError("initial object is not initial")
        return self.pushout(to_b[0], to_a[0])

    def factor(self, f: int) -> tuple[int, int]:
        """Functorial factorization of f as cofibration followed by weq."""
        if self._factorization_fn is None:
            raise ValueError(f"{self.name} has no functorial factorization")
        return self._factorization_fn(self, f)


# ---------------------------------------------------------------------------
# skeletal base categories


def _function_labels(a: int, b: int):
    if a == 0:
        return [()]
    return [tuple(v) for v in product(range(b), repeat=a)]


def _finset_base(n: int) -> FiniteCategory:
    objects = tuple(range(n + 1))  # object k is the set {0,...,k-1}
    mor_labels = []
    for a in objects:
        for b in objects:
            for values in sorted(_function_labels(a, b)):
                mor_labels.append((a, b, values))
    return _assemble_base(objects, mor_labels, f"FinSet<= {n}")


def _finpointed_base(n: int) -> FiniteCategory:
    objects = tuple(range(1, n + 1))  # object of size k, basepoint 0
    mor_labels = []
    for a in objects:
        for b in objects:
            for values in sorted(_function_labels(a, b)):
                if values[0] == 0:
                    mor_labels.append((a, b, values))
    return _assemble_base(objects, mor_labels, f"FinSet*<= {n}")


def _assemble_base(objects, mor_labels, name) -> FiniteCategory:
    obj_index = {size: i for i, size in enumerate(objects)}
    mor_index = {lbl: i for i, lbl in enumerate(mor_labels)}
    mor_source = tuple(obj_index[a] for a, _, _ in mor_labels)
    mor_target = tuple(obj_index[b] for _, b, _ in mor_labels)
    identities = tuple(mor_index[(a, a, tuple(range(a)))] for a in objects)
    composition = {}
    for g, (b1, c, gv) in enumerate(mor_labels):
        for f, (a, b2, fv) in enumerate(mor_labels):
            if b2 == b1:
                composition[(g, f)] = mor_index[(a, c, tuple(gv[v] for v in fv))]
    return FiniteCategory(
        objects,
        tuple(mor_labels),
        mor_source,
        mor_target,
        identities,
        composition,
        name=name,
    )


def _quotient_pushout(w: WaldhausenInstance, c: int, f: int) -> PushoutCocone:
    """Quotient of the ordered disjoint union X u D by f(z) ~ c(z)."""
    base = w.base
    _, x_size, f_values = base.morphism_labels[f]
    _, d_size, c_values = base.morphism_labels[c]
    total = x_size + d_size
    parent = list(range(total))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for fz, cz in zip(f_values, c_values):
        ri, rj = find(fz), find(x_size + cz)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    reps = sorted({find(i) for i in range(total)})
    relabel = {rep: k for k, rep in enumerate(reps)}
    p_size = len(reps)
    if p_size > w.size_bound:
        raise ResourceLimitError(
            f"pushout of size {p_size} exceeds bound {w.size_bound}",
            context={"instance": w.name, "size": p_size},
        )
    leg_x = (x_size, p_size, tuple(relabel[find(i)] for i in range(x_size)))
    leg_d = (
        d_size,
        p_size,
        tuple(relabel[find(x_size + i)] for i in range(d_size)),
    )
    return PushoutCocone(
        obj=w.base.object_index[p_size],
        leg_x=base.morphism_index[leg_x],
        leg_d=base.morphism_index[leg_d],
    )


def _coproduct_factorization(w: WaldhausenInstance, f: int) -> tuple[int, int]:
    """Mapping-cylinder style: A >-> A u B -> B over the canonical coproduct."""
    base = w.base
    a = base.mor_source[f]
    b = base.mor_target[f]
    try:
        cop = w.coproduct(base.object_labels[a], base.object_labels[b])
    except ResourceLimitError as err:
        raise ResourceLimitError(
            "factorization needs headroom for the disjoint union: " + str(err),
            context=err.context,
        ) from err
    cof = cop.leg_x  # inclusion of the source block
    weq = w.mediating_morphism(cop, f, base.identities[b])
    return cof, weq


def instance_finset_inj(n: int) -> WaldhausenInstance:
    """Finite sets of size <= n; cofibrations = injections, weqs = bijections."""
    base = _finset_base(n)
    cof = frozenset(
        m
        for m, (a, b, values) in enumerate(base.morphism_labels)
        if len(set(values)) == a
    )
    weq = frozenset(
        m
        for m, (a, b, values) in enumerate(base.morphism_labels)
        if a == b and len(set(values)) == a
    )
    return WaldhausenInstance(
        name="finset_inj",
        base=base,
        cofibrations=cof,
        weqs=weq,
        size_bound=n,
        initial_object=base.object_index[0],
        _pushout_fn=_quotient_pushout,
    )


def instance_finset_all(n: int) -> WaldhausenInstance:
    """Same base and cofibrations, but every morphism is a weak equivalence.

    Functorial factorization through the disjoint union is available; it may
    need up to double the size bound, which is a documented resource error.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    base = _finset_base(n)
    cof = frozenset(
        m
        for m, (a, b, values) in enumerate(base.morphism_labels)
        if len(set(values)) == a
    )
    return WaldhausenInstance(
        name="finset_all",
        base=base,
        cofibrations=cof,
        weqs=frozenset(range(base.n_morphisms)),
        size_bound=n,
        initial_object=base.object_index[0],
        _pushout_fn=_quotient_pushout,
        _factorization_fn=_coproduct_factorization,
    )


def instance_finpointed(n: int) -> WaldhausenInstance:
    """Pointed sets of size <= n (element 0 the basepoint), pointed maps."""
    if n < 1:
        raise ValueError("need n >= 1")
    base = _finpointed_base(n)
    cof = frozenset(
        m
        for m, (a, b, values) in enumerate(base.morphism_labels)
        if len(set(values)) == a
    )
    weq = frozenset(
        m
        for m, (a, b, values) in enumerate(base.morphism_labels)
        if a == b and len(set(values)) == a
    )
    zero = base.object_index[1]
    return WaldhausenInstance(
        name="finpointed",
        base=base,
        cofibrations=cof,
        weqs=weq,
        size_bound=n,
        initial_object=zero,
        zero_object=zero,
        _pushout_fn=_quotient_pushout,
        _factorization_fn=_coproduct_factorization,
    )


def broken_gluing_instance(n: int) -> WaldhausenInstance:
    """Negative control: weqs = injections, which violates the gluing lemma."""
    good = instance_finset_inj(n)
    return WaldhausenInstance(
        name="finset_broken",
        base=good.base,
        cofibrations=good.cofibrations,
        weqs=good.cofibrations,
        size_bound=n,
        initial_object=good.initial_object,
        _pushout_fn=_quotient_pushout,
    )


INSTANCE_BUILDERS = {
    "finset_inj": instance_finset_inj,
    "finset_all": instance_finset_all,
    "finpointed": instance_finpointed,
    "finset_broken": broken_gluing_instance,
}


def instance_from_descriptor(descriptor: str) -> WaldhausenInstance:
    """Parse 'name:N' into an instance."""
    name, _, bound = descriptor.partition(":")
    if name not in INSTANCE_BUILDERS:
        raise ValueError(
            f"unknown instance {name!r}; choose from {sorted(INSTANCE_BUILDERS)}"
        )
    if not bound:
        raise ValueError("instance descriptor needs a size bound, e.g. finpointed:2")
    return INSTANCE_BUILDERS[name](int(bound))


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomReport:
    instance: str
    seed: int
    gluing_note: str = GLUING_FORMULATION
    axiom1_checked: int = 0
    axiom2_checked: int = 0
    axiom2_skipped: int = 0
    gluing_total: int = 0
    gluing_verified: int = 0
    gluing_sampled: bool = False
    gluing_skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "seed": self.seed,
            "gluing_note": self.gluing_note,
            "axiom1_checked": self.axiom1_checked,
            "axiom2_checked": self.axiom2_checked,
            "axiom2_skipped_by_bound": self.axiom2_skipped,
            "gluing_total": self.gluing_total,
            "gluing_verified": self.gluing_verified,
            "gluing_sampled": self.gluing_sampled,
            "gluing_skipped_by_bound": self.gluing_skipped,
            "failures": [str(f) for f in self.failures],
            "ok": self.ok,
        }


def check_axioms(
    w: WaldhausenInstance, gluing_budget: int = 100_000, seed: int = 0
) -> AxiomReport:
    """Verify the three structural axioms of an instance.

    Axiom (1) and the pushout axiom (2) are exhaustive over everything that is
    representable within the size bound; pushouts whose canonical output would
    overflow the bound are counted as skipped, not failed.  The gluing lemma
    runs over every gluing diagram when their number is within the budget,
    otherwise over a seeded reservoir sample of that size.
    """
    base = w.base
    report = AxiomReport(instance=f"{w.name}:{w.size_bound}", seed=seed)

    for m in range(base.n_morphisms):
        if base.is_iso(m):
            report.axiom1_checked += 1
            if m not in w.cofibrations:
                report.failures.append(f"iso {m} is not a cofibration")
            if m not in w.weqs:
                report.failures.append(f"iso {m} is not a weq")
    for klass, name in ((w.cofibrations, "cofibrations"), (w.weqs, "weqs")):
        for (g, f), gf in base.composition.items():
            if g in klass and f in klass:
                report.axiom1_checked += 1
                if gf not in klass:
                    report.failures.append(
                        f"{name} not closed under composition at ({g},{f})"
                    )

    for c in sorted(w.cofibrations):
        src = base.mor_source[c]
        for x in range(base.n_objects):
            for f in base.hom(src, x):
                try:
                    pc = w.pushout(c, f)
                except ResourceLimitError:
                    report.axiom2_skipped += 1
                    continue
                report.axiom2_checked += 1
                if pc.leg_x not in w.cofibrations:
                    report.failures.append(
                        f"cobase change of cofibration {c} along {f} not a cofibration"
                    )
                if not w.is_pushout_square(f, c, pc.leg_x, pc.leg_d):
                    report.failures.append(
                        f"oracle output for (c={c}, f={f}) fails universal property"
                    )

    rng = random.Random(seed)
    reservoir: list[tuple] = []
    total = 0
    for diagram in _gluing_diagrams(w):
        total += 1
        if len(reservoir) < gluing_budget:
            reservoir.append(diagram)
        else:
            j = rng.randrange(total)
            if j < gluing_budget:
                reservoir[j] = diagram
    report.gluing_total = total
    report.gluing_sampled = total > gluing_budget
    for c, u, v, c2, f, w_map, f2 in reservoir:
        try:
            po = w.pushout(c, f)
            po2 = w.pushout(c2, f2)
        except ResourceLimitError:
            report.gluing_skipped += 1
            continue
        u2 = base.composition[(po2.leg_x, w_map)]
        v2 = base.composition[(po2.leg_d, v)]
        induced = w.mediating_morphism(po, u2, v2)
        report.gluing_verified += 1
        if induced not in w.weqs:
            report.failures.append(
                "gluing fails: induced map of pushouts not a weq for "
                f"(c={c}, f={f}, u={u}, v={v}, c'={c2}, f'={f2}, w={w_map})"
            )
    return report


def _gluing_diagrams(w: WaldhausenInstance):
    """Yield gluing data (c, u, v, c', f, w, f') with all squares commuting."""
    base = w.base
    weq_from = [[] for _ in range(base.n_objects)]
    for m in sorted(w.weqs):
        weq_from[base.mor_source[m]].append(m)
    cof_by_endpoints: dict[tuple[int, int], list[int]] = {}
    for m in sorted(w.cofibrations):
        cof_by_endpoints.setdefault(
            (base.mor_source[m], base.mor_target[m]), []
        ).append(m)
    for c in sorted(w.cofibrations):
        src_c, tgt_c = base.mor_source[c], base.mor_target[c]
        for u in weq_from[src_c]:
            for v in weq_from[tgt_c]:
                vc = base.composition[(v, c)]
                for c2 in cof_by_endpoints.get(
                    (base.mor_target[u], base.mor_target[v]), []
                ):
                    if base.composition[(c2, u)] != vc:
                        continue
                    for x in range(base.n_objects):
                        for f in base.hom(src_c, x):
                            for w_map in weq_from[x]:
                                wf = base.composition[(w_map, f)]
                                for f2 in base.hom(
                                    base.mor_target[u], base.mor_target[w_map]
                                ):
                                    if base.composition[(f2, u)] != wf:
                                        continue
                                    yield (c, u, v, c2, f, w_map, f2)


# ---------------------------------------------------------------------------
# relative isomorphisms


@dataclass
class RelativeIsoWitness:
    ok: bool
    squares_checked: int
    failing_cofibration: int | None = None


def verify_relative_iso(
    source: WaldhausenInstance,
    target: WaldhausenInstance,
    phi: NaturalTransformation,
) -> RelativeIsoWitness:
    """Check the defining pushout squares over every cofibration of the source."""
    f_functor, g_functor = phi.source, phi.target
    checked = 0
    for m in sorted(source.cofibrations):
        x = source.base.mor_source[m]
        y = source.base.mor_target[m]
        ok = target.is_pushout_square(
            phi.components[x],
            f_functor.morphism_map[m],
            g_functor.morphism_map[m],
            phi.components[y],
        )
        checked += 1
        if not ok:
            return RelativeIsoWitness(False, checked, failing_cofibration=m)
    return RelativeIsoWitness(True, checked)


def is_exact_functor(
    source: WaldhausenInstance, target: WaldhausenInstance, f: Functor
) -> bool:
    """Preserves cofibrations, weqs, and the axiom-(2) pushout squares."""
    for m in source.cofibrations:
        if f.morphism_map[m] not in target.cofibrations:
            return False
    for m in source.weqs:
        if f.morphism_map[m] not in target.weqs:
            return False
    base = source.base
    for c in sorted(source.cofibrations):
        src = base.mor_source[c]
        for x in range(base.n_objects):
            for g in base.hom(src, x):
                try:
                    pc = source.pushout(c, g)
                except ResourceLimitError:
                    continue
                if not target.is_pushout_square(
                    f.morphism_map[g],
                    f.morphism_map[c],
                    f.morphism_map[pc.leg_x],
                    f.morphism_map[pc.leg_d],
                ):
                    return False
    return True
