"""Truncated simplicial sets with explicit operator tables.

A :class:`TruncatedSimplicialSet` stores, for each level k up to a truncation
D, a finite ordered list of simplex labels, together with the action of every
monotone ordinal map between levels <= D.  Tables for arbitrary maps are
derived deterministically from coface/codegeneracy generator tables (peeling
one generator at a time) and memoized, so downstream reindexing such as
edgewise subdivision is a pure lookup.

Truncation accounting is explicit: asking for data above the truncation
raises :class:`~coblab.errors.TruncationError` naming the level that would be
required; nothing is silently padded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ordmaps
from .errors import TruncationError
from .ordmaps import OrdinalMap

Label = object  # simplex labels: any hashable, canonically ordered per level


class TruncatedSimplicialSet:
    """A simplicial set known up to a truncation level.

    Parameters
    ----------
    simplices:
        Per level 0..D, the ordered list of simplex labels.
    faces:
        ``faces[(n, i)]`` is the index table of the i-th face X_n -> X_{n-1}
        (the action of the coface [n-1] -> [n] omitting i).
    degeneracies:
        ``degeneracies[(n, i)]`` is the table of the i-th degeneracy
        X_n -> X_{n+1}.  Empty for semisimplicial data, in which case only
        injective ordinal maps act.
    """

    def __init__(
        self,
        simplices: list[list[Label]],
        faces: dict[tuple[int, int], tuple[int, ...]],
        degeneracies: dict[tuple[int, int], tuple[int, ...]],
        simplicial: bool = True,
        name: str = "",
    ):
        self.level = len(simplices) - 1
        self.simplices = tuple(tuple(level) for level in simplices)
        self.index = tuple(
            {label: i for i, label in enumerate(level)} for level in self.simplices
        )
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)
        self.simplicial = simplicial
        self.name = name
        self._op_cache: dict[OrdinalMap, tuple[int, ...]] = {}

    def __repr__(self):
        sizes = [len(s) for s in self.simplices]
        tag = "sset" if self.simplicial else "semisset"
        label = f" {self.name!r}" if self.name else ""
        return f"<{tag}{label} D={self.level} sizes={sizes}>"

    def size(self, k: int) -> int:
        self._require_level(k)
        return len(self.simplices[k])

    def _require_level(self, k: int):
        if k < 0:
            raise ValueError(f"negative level {k}")
        if k > self.level:
            raise TruncationError(
                f"level {k} requested but truncated at {self.level}",
                required_level=k,
            )

    def operator_table(self, alpha: OrdinalMap) -> tuple[int, ...]:
        """Index table of X(alpha): X_{target} -> X_{source}."""
        self._require_level(alpha.source)
        self._require_level(alpha.target)
        cached = self._op_cache.get(alpha)
        if cached is not None:
            return cached
        table = self._derive_table(alpha)
        self._op_cache[alpha] = table
        return table

    def _derive_table(self, alpha: OrdinalMap) -> tuple[int, ...]:
        m, n = alpha.source, alpha.target
        values = alpha.values
        # non-injective: alpha = alpha' o sigma_k, so X(alpha) = s_k o X(alpha')
        for k in range(m):
            if values[k] == values[k + 1]:
                if not self.simplicial:
                    raise TruncationError(
                        "semisimplicial data has no degeneracy operators"
                    )
                inner = OrdinalMap(m - 1, n, values[:k] + values[k + 1 :])
                inner_table = self.operator_table(inner)
                degen = self.degeneracies[(m - 1, k)]
                return tuple(degen[idx] for idx in inner_table)
        # injective non-surjective: alpha = delta_i o alpha'', X(alpha) = X(alpha'') o d_i
        if m < n:
            image = set(values)
            i = next(v for v in range(n + 1) if v not in image)
            inner = OrdinalMap(m, n - 1, tuple(v if v < i else v - 1 for v in values))
            face = self.faces[(n, i)]
            inner_table = self.operator_table(inner)
            return tuple(inner_table[idx] for idx in face)
        return tuple(range(len(self.simplices[n])))

    def act(self, alpha: OrdinalMap, label: Label) -> Label:
        """Apply X(alpha) to the given target-level simplex label."""
        table = self.operator_table(alpha)
        return self.simplices[alpha.source][table[self.index[alpha.target][label]]]

    def is_degenerate(self, k: int, idx: int) -> bool:
        """Degeneracy test: x is degenerate iff x = s_j(d_j(x)) for some j."""
        self._require_level(k)
        if k == 0 or not self.simplicial:
            return False
        for j in range(k):
            down = self.faces[(k, j)][idx]
            if self.degeneracies[(k - 1, j)][down] == idx:
                return True
        return False

    def nondegenerate_indices(self, k: int) -> tuple[int, ...]:
        return tuple(
            i for i in range(self.size(k)) if not self.is_degenerate(k, i)
        )


def from_generator_functions(
    simplices: list[list[Label]],
    face_fn,
    degeneracy_fn=None,
    name: str = "",
) -> TruncatedSimplicialSet:
    """Build a truncated simplicial set by evaluating generator actions on labels.

    ``face_fn(n, i, label)`` returns the label of the i-th face;
    ``degeneracy_fn(n, i, label)`` the label of the i-th degeneracy.  Omitting
    the latter produces semisimplicial data.
    """
    level = len(simplices) - 1
    index = [{label: i for i, label in enumerate(lvl)} for lvl in simplices]
    faces = {}
    for n in range(1, level + 1):
        for i in range(n + 1):
            faces[(n, i)] = tuple(
                index[n - 1][face_fn(n, i, label)] for label in simplices[n]
            )
    degeneracies = {}
    if degeneracy_fn is not None:
        for n in range(level):
            for i in range(n + 1):
                degeneracies[(n, i)] = tuple(
                    index[n + 1][degeneracy_fn(n, i, label)] for label in simplices[n]
                )
    return TruncatedSimplicialSet(
        simplices, faces, degeneracies, simplicial=degeneracy_fn is not None, name=name
    )


def standard_simplex(n: int, level: int) -> TruncatedSimplicialSet:
    """The n-simplex truncated at the given level; k-simplices are monotone [k]->[n]."""
    simplices = [
        [alpha.values for alpha in ordmaps.all_maps(k, n)] for k in range(level + 1)
    ]
    return _simplex_like(simplices, n, level, name=f"Delta^{n}")


def boundary_simplex(n: int, level: int) -> TruncatedSimplicialSet:
    """The boundary of the n-simplex: the non-surjective monotone maps [k]->[n]."""
    simplices = [
        [
            alpha.values
            for alpha in ordmaps.all_maps(k, n)
            if set(alpha.values) != set(range(n + 1))
        ]
        for k in range(level + 1)
    ]
    return _simplex_like(simplices, n, level, name=f"boundary Delta^{n}")


def _simplex_like(simplices, n, level, name):
    def face_fn(k, i, label):
        return tuple(v for j, v in enumerate(label) if j != i)

    def degeneracy_fn(k, i, label):
        return label[: i + 1] + label[i:]

    return from_generator_functions(simplices, face_fn, degeneracy_fn, name=name)


@dataclass
class SimplicialMap:
    """A levelwise map of truncated simplicial sets, stored as index tables."""

    source: TruncatedSimplicialSet
    target: TruncatedSimplicialSet
    components: tuple[tuple[int, ...], ...]
    name: str = ""

    @property
    def level(self) -> int:
        return len(self.components) - 1

    def apply(self, k: int, label: Label) -> Label:
        idx = self.source.index[k][label]
        return self.target.simplices[k][self.components[k][idx]]

    def check_naturality(self) -> list[str]:
        """Return a list of generator maps whose squares fail to commute."""
        bad = []
        for gen in ordmaps.generators(self.level):
            if not self.source.simplicial and not gen.is_injective:
                continue
            src_table = self.source.operator_table(gen)
            tgt_table = self.target.operator_table(gen)
            comp_lo = self.components[gen.source]
            comp_hi = self.components[gen.target]
            for idx in range(len(src_table)):
                if comp_lo[src_table[idx]] != tgt_table[comp_hi[idx]]:
                    bad.append(f"{gen} at simplex {idx}")
                    break
        return bad


def compose_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    level = min(f.level, g.level)
    comps = tuple(
        tuple(g.components[k][idx] for idx in f.components[k]) for k in range(level + 1)
    )
    return SimplicialMap(f.source, g.target, comps, name=f"{g.name}o{f.name}")


def edgewise_subdivision(
    x: TruncatedSimplicialSet, out_level: int | None = None
) -> TruncatedSimplicialSet:
    """Edgewise subdivision: level k is X_{2k+1}, alpha acts as X(mu(alpha))."""
    max_out = (x.level - 1) // 2
    if out_level is None:
        out_level = max_out
    if out_level > max_out or out_level < 0:
        raise TruncationError(
            f"subdivision to level {out_level} needs input truncated at"
            f" {2 * out_level + 1}, have {x.level}",
            required_level=2 * out_level + 1,
        )
    simplices = [list(x.simplices[2 * k + 1]) for k in range(out_level + 1)]
    faces = {}
    degeneracies = {}
    for k in range(1, out_level + 1):
        for i in range(k + 1):
            faces[(k, i)] = x.operator_table(ordmaps.mu(ordmaps.coface(k, i)))
    for k in range(out_level):
        for i in range(k + 1):
            degeneracies[(k, i)] = x.operator_table(
                ordmaps.mu(ordmaps.codegeneracy(k, i))
            )
    return TruncatedSimplicialSet(
        simplices, faces, degeneracies, simplicial=True, name=f"Sd({x.name})"
    )


def subdivide_map(f: SimplicialMap, out_level: int | None = None) -> SimplicialMap:
    """Apply edgewise subdivision to a simplicial map."""
    max_out = (f.level - 1) // 2
    if out_level is None:
        out_level = max_out
    if out_level > max_out:
        raise TruncationError(
            f"subdividing a map to level {out_level} needs components up to"
            f" {2 * out_level + 1}",
            required_level=2 * out_level + 1,
        )
    return SimplicialMap(
        edgewise_subdivision(f.source, out_level),
        edgewise_subdivision(f.target, out_level),
        tuple(f.components[2 * k + 1] for k in range(out_level + 1)),
        name=f"Sd({f.name})",
    )


def last_vertex_map(
    x: TruncatedSimplicialSet, out_level: int | None = None
) -> SimplicialMap:
    """The natural map Sd(X) -> X restricting along [k] -> [2k+1], last block."""
    sd = edgewise_subdivision(x, out_level)
    comps = tuple(
        x.operator_table(ordmaps.last_block_inclusion(k)) for k in range(sd.level + 1)
    )
    return SimplicialMap(sd, x, comps, name=f"lastvertex({x.name})")


@dataclass
class IdentityReport:
    """Outcome of the simplicial-identity check; empty violations means pass."""

    checked_pairs: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_simplicial_identities(x: TruncatedSimplicialSet) -> IdentityReport:
    """Verify functoriality of the operator tables on all generator pairs.

    Identity maps must act as identity, and for every composable pair of
    generators (f, g) within the truncation the table of the composite must
    equal the composite of tables.  Violations name the offending pair.
    """
    report = IdentityReport(checked_pairs=0)
    for n in range(x.level + 1):
        table = x.operator_table(ordmaps.identity(n))
        if table != tuple(range(x.size(n))):
            report.violations.append(f"identity at level {n} not identity")
    gens = [
        g
        for g in ordmaps.generators(x.level)
        if x.simplicial or g.is_injective
    ]
    for f in gens:
        for g in gens:
            if f.target != g.source:
                continue
            composite = ordmaps.compose(g, f)
            if not x.simplicial and not composite.is_injective:
                continue
            report.checked_pairs += 1
            lhs = x.operator_table(composite)
            tf = x.operator_table(f)
            tg = x.operator_table(g)
            rhs = tuple(tf[idx] for idx in tg)
            if lhs != rhs:
                report.violations.append(f"X({g} o {f}) != X({f}) o X({g})")
    return report


class BisimplicialSetTruncated:
    """A bisimplicial set truncated at (P, Q), with two commuting actions.

    ``h`` generators act on the first (nerve) index, ``v`` generators on the
    second (construction) index.  Arbitrary pairs of ordinal maps act through
    the same memoized peeling as in the single-index case.
    """

    def __init__(
        self,
        simplices: dict[tuple[int, int], list[Label]],
        hfaces,
        hdegens,
        vfaces,
        vdegens,
        name: str = "",
    ):
        self.trunc_p = max(p for p, _ in simplices)
        self.trunc_q = max(q for _, q in simplices)
        self.simplices = {pq: tuple(labels) for pq, labels in simplices.items()}
        self.index = {
            pq: {label: i for i, label in enumerate(labels)}
            for pq, labels in self.simplices.items()
        }
        self.hfaces = dict(hfaces)  # (p, q, i) -> table B_{p,q} -> B_{p-1,q}
        self.hdegens = dict(hdegens)
        self.vfaces = dict(vfaces)  # (p, q, j) -> table B_{p,q} -> B_{p,q-1}
        self.vdegens = dict(vdegens)
        self.name = name
        self._cache: dict[tuple[str, int, OrdinalMap], tuple[int, ...]] = {}

    def size(self, p: int, q: int) -> int:
        return len(self.simplices[(p, q)])

    def _table_1d(
        self, direction: str, alpha: OrdinalMap, other: int
    ) -> tuple[int, ...]:
        """Action of (alpha, id) or (id, alpha) with the other index fixed."""
        key = (direction, other, alpha)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        m, n = alpha.source, alpha.target
        values = alpha.values
        faces = self.hfaces if direction == "h" else self.vfaces
        degens = self.hdegens if direction == "h" else self.vdegens

        def keyed(level, i):
            if direction == "h":
                return (level, other, i)
            return (other, level, i)

        result: tuple[int, ...] | None = None
        for k in range(m):
            if values[k] == values[k + 1]:
                inner = OrdinalMap(m - 1, n, values[:k] + values[k + 1 :])
                inner_table = self._table_1d(direction, inner, other)
                degen = degens[keyed(m - 1, k)]
                result = tuple(degen[idx] for idx in inner_table)
                break
        if result is None and m < n:
            image = set(values)
            i = next(v for v in range(n + 1) if v not in image)
            inner = OrdinalMap(m, n - 1, tuple(v if v < i else v - 1 for v in values))
            face = faces[keyed(n, i)]
            inner_table = self._table_1d(direction, inner, other)
            result = tuple(inner_table[idx] for idx in face)
        if result is None:
            size = self.size(n, other) if direction == "h" else self.size(other, n)
            result = tuple(range(size))
        self._cache[key] = result
        return result

    def operator_table(self, alpha: OrdinalMap, beta: OrdinalMap) -> tuple[int, ...]:
        """Table of B(alpha, beta): B_{alpha.target, beta.target} -> B_{alpha.source, beta.source}."""
        for p in (alpha.source, alpha.target):
            if p > self.trunc_p:
                raise TruncationError(
                    f"first index {p} above truncation {self.trunc_p}",
                    required_level=p,
                )
        for q in (beta.source, beta.target):
            if q > self.trunc_q:
                raise TruncationError(
                    f"second index {q} above truncation {self.trunc_q}",
                    required_level=q,
                )
        vert = self._table_1d("v", beta, alpha.target)
        horiz = self._table_1d("h", alpha, beta.source)
        return tuple(horiz[idx] for idx in vert)

    def check_commutation(self) -> list[str]:
        """Verify the two generator actions commute on every square."""
        bad = []
        for p in range(1, self.trunc_p + 1):
            for q in range(1, self.trunc_q + 1):
                for i in range(p + 1):
                    for j in range(q + 1):
                        via_h = [
                            self.vfaces[(p - 1, q, j)][self.hfaces[(p, q, i)][idx]]
                            for idx in range(self.size(p, q))
                        ]
                        via_v = [
                            self.hfaces[(p, q - 1, i)][self.vfaces[(p, q, j)][idx]]
                            for idx in range(self.size(p, q))
                        ]
                        if via_h != via_v:
                            bad.append(f"faces ({i},{j}) at ({p},{q})")
        return bad

    def is_degenerate(self, p: int, q: int, idx: int) -> bool:
        """Degenerate in either direction."""
        for j in range(p):
            down = self.hfaces[(p, q, j)][idx]
            if self.hdegens[(p - 1, q, j)][down] == idx:
                return True
        for j in range(q):
            down = self.vfaces[(p, q, j)][idx]
            if self.vdegens[(p, q - 1, j)][down] == idx:
                return True
        return False


def diagonal(b: BisimplicialSetTruncated) -> TruncatedSimplicialSet:
    """Diagonal simplicial set: level k is B_{k,k} with the doubled action."""
    level = min(b.trunc_p, b.trunc_q)
    simplices = [list(b.simplices[(k, k)]) for k in range(level + 1)]
    faces = {}
    degeneracies = {}
    for k in range(1, level + 1):
        for i in range(k + 1):
            delta = ordmaps.coface(k, i)
            faces[(k, i)] = b.operator_table(delta, delta)
    for k in range(level):
        for i in range(k + 1):
            sigma = ordmaps.codegeneracy(k, i)
            degeneracies[(k, i)] = b.operator_table(sigma, sigma)
    return TruncatedSimplicialSet(
        simplices, faces, degeneracies, simplicial=True, name=f"diag({b.name})"
    )
