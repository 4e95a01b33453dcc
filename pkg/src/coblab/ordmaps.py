"""Monotone maps of finite ordinals [n] = {0 < 1 < ... < n}.

These maps are the index alphabet for all simplicial bookkeeping: cofaces,
codegeneracies, their composites, the order-reversing involution, the ordinal
sum, and the subdivision reindexing map  mu(a) = op(a) * a.

The block presentation of [2n+1] used throughout is

    {n~ < (n-1)~ < ... < 0~ < 0 < 1 < ... < n}

where the first block is the reversed copy and the second the plain copy;
position p <= n holds (n-p)~ and position n+1+i holds i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import CompositionError


@dataclass(frozen=True)
class OrdinalMap:
    """A weakly monotone map [source] -> [target], stored by its value tuple."""

    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.source < 0 or self.target < 0:
            raise ValueError("ordinals must be nonnegative")
        if len(self.values) != self.source + 1:
            raise ValueError(
                f"expected {self.source + 1} values, got {len(self.values)}"
            )
        prev = 0
        for v in self.values:
            if not (0 <= v <= self.target):
                raise ValueError(f"value {v} outside [{self.target}]")
            if v < prev:
                raise ValueError(f"values not weakly increasing: {self.values}")
            prev = v

    def __call__(self, k: int) -> int:
        return self.values[k]

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and self.values == tuple(
            range(self.source + 1)
        )

    @property
    def is_injective(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    def __repr__(self):
        return f"OrdinalMap([{self.source}]->[{self.target}], {list(self.values)})"


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> OrdinalMap:
    """The injection [n-1] -> [n] whose image omits i."""
    if not (0 <= i <= n) or n < 1:
        raise ValueError(f"coface index {i} out of range for [{n}]")
    return OrdinalMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def codegeneracy(n: int, i: int) -> OrdinalMap:
    """The surjection [n+1] -> [n] hitting i twice."""
    if not (0 <= i <= n):
        raise ValueError(f"codegeneracy index {i} out of range for [{n}]")
    return OrdinalMap(n + 1, n, tuple(k if k <= i else k - 1 for k in range(n + 2)))


def compose(g: OrdinalMap, f: OrdinalMap) -> OrdinalMap:
    """Pointwise composite g o f (f first)."""
    if f.target != g.source:
        raise CompositionError(
            f"cannot compose [{f.source}]->[{f.target}] with [{g.source}]->[{g.target}]"
        )
    return OrdinalMap(f.source, g.target, tuple(g.values[v] for v in f.values))


def op_involution(alpha: OrdinalMap) -> OrdinalMap:
    """The order-reversing conjugate: k |-> target - alpha(source - k)."""
    m, n = alpha.source, alpha.target
    return OrdinalMap(m, n, tuple(n - alpha.values[m - k] for k in range(m + 1)))


def ordinal_sum(alpha: OrdinalMap, beta: OrdinalMap) -> OrdinalMap:
    """Block sum: alpha on the first block, beta shifted past it on the second."""
    shift = alpha.target + 1
    values = alpha.values + tuple(v + shift for v in beta.values)
    return OrdinalMap(
        alpha.source + beta.source + 1, alpha.target + beta.target + 1, values
    )


def mu(alpha: OrdinalMap) -> OrdinalMap:
    """Subdivision reindexing  op(alpha) * alpha : [2m+1] -> [2n+1]."""
    return ordinal_sum(op_involution(alpha), alpha)


def last_block_inclusion(n: int) -> OrdinalMap:
    """The inclusion [n] -> [2n+1] onto the last n+1 positions."""
    return OrdinalMap(n, 2 * n + 1, tuple(n + 1 + i for i in range(n + 1)))


@lru_cache(maxsize=None)
def all_maps(m: int, n: int) -> tuple[OrdinalMap, ...]:
    """All monotone maps [m] -> [n], in lexicographic order of value tuples."""
    return tuple(
        OrdinalMap(m, n, values)
        for values in combinations_with_replacement(range(n + 1), m + 1)
    )


def generators(level: int) -> tuple[OrdinalMap, ...]:
    """Cofaces and codegeneracies with both endpoints bounded by level."""
    gens: list[OrdinalMap] = []
    for n in range(1, level + 1):
        gens.extend(coface(n, i) for i in range(n + 1))
    for n in range(level):
        gens.extend(codegeneracy(n, i) for i in range(n + 1))
    return tuple(gens)
