"""Finite posets and lattices backed by explicit order, meet and join tables.

Elements are opaque hashable ids.  All structure lives in index-based numpy
tables so that one engine serves abstract lattices, powersets under reverse
inclusion and sublattices of either.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .exceptions import NoTop, NotALattice, NotAPartialOrder, NotDistributive, SizeExceeded

DEFAULT_MAX_SIZE = 2**16


class FiniteLattice:
    """A validated finite lattice.

    Use :func:`build_lattice` (or :meth:`from_tables` when the tables are
    already known to be correct) rather than calling the constructor.
    """

    __slots__ = ("elements", "leq_matrix", "meet_table", "join_table", "_index", "top", "bottom")

    def __init__(self, elements: Sequence[Hashable], leq_matrix, meet_table, join_table):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self.leq_matrix = np.asarray(leq_matrix, dtype=bool)
        self.meet_table = np.asarray(meet_table, dtype=np.int64)
        self.join_table = np.asarray(join_table, dtype=np.int64)
        for arr in (self.leq_matrix, self.meet_table, self.join_table):
            arr.setflags(write=False)
        n = len(self.elements)
        # the meet of everything is the bottom, the join of everything the top
        top = bottom = 0
        for i in range(1, n):
            top = int(self.join_table[top, i])
            bottom = int(self.meet_table[bottom, i])
        self.top = self.elements[top]
        self.bottom = self.elements[bottom]

    @classmethod
    def from_tables(cls, elements, leq_matrix, meet_table, join_table) -> "FiniteLattice":
        return cls(elements, leq_matrix, meet_table, join_table)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        return f"FiniteLattice(n={len(self)}, top={self.top!r}, bottom={self.bottom!r})"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an element of this lattice") from None

    def leq(self, x, y) -> bool:
        return bool(self.leq_matrix[self.index(x), self.index(y)])

    def meet(self, x, y):
        return self.elements[self.meet_table[self.index(x), self.index(y)]]

    def join(self, x, y):
        return self.elements[self.join_table[self.index(x), self.index(y)]]

    def meet_all(self, xs: Iterable) -> Hashable:
        """Greatest lower bound; the empty meet is the top."""
        i = self.index(self.top)
        for x in xs:
            i = self.meet_table[i, self.index(x)]
        return self.elements[i]

    def join_all(self, xs: Iterable) -> Hashable:
        """Least upper bound; the empty join is the bottom."""
        i = self.index(self.bottom)
        for x in xs:
            i = self.join_table[i, self.index(x)]
        return self.elements[i]

    def down(self, x) -> frozenset:
        """Principal ideal of ``x``."""
        col = self.leq_matrix[:, self.index(x)]
        return frozenset(self.elements[i] for i in np.flatnonzero(col))

    def up(self, x) -> frozenset:
        """Principal filter of ``x``."""
        row = self.leq_matrix[self.index(x), :]
        return frozenset(self.elements[i] for i in np.flatnonzero(row))

    def lower_set(self, xs: Iterable) -> frozenset:
        # lower set of the empty family is empty
        out = set()
        for x in xs:
            out |= self.down(x)
        return frozenset(out)

    def upper_set(self, xs: Iterable) -> frozenset:
        out = set()
        for x in xs:
            out |= self.up(x)
        return frozenset(out)

    def lower_covers(self, x) -> tuple:
        i = self.index(x)
        below = [j for j in np.flatnonzero(self.leq_matrix[:, i]) if j != i]
        return tuple(
            self.elements[j]
            for j in below
            if not any(k != j and self.leq_matrix[j, k] for k in below)
        )

    def upper_covers(self, x) -> tuple:
        i = self.index(x)
        above = [j for j in np.flatnonzero(self.leq_matrix[i, :]) if j != i]
        return tuple(
            self.elements[j]
            for j in above
            if not any(k != j and self.leq_matrix[k, j] for k in above)
        )

    def comparable(self, x, y) -> bool:
        i, j = self.index(x), self.index(y)
        return bool(self.leq_matrix[i, j] or self.leq_matrix[j, i])

    def dual(self) -> "FiniteLattice":
        """The same elements with the order reversed."""
        return FiniteLattice(self.elements, self.leq_matrix.T, self.join_table, self.meet_table)

    def restrict(self, subset: Iterable) -> "FiniteLattice":
        """Sublattice on ``subset``; element order follows this lattice."""
        wanted = set(subset)
        idx = [i for i, x in enumerate(self.elements) if x in wanted]
        if len(idx) != len(wanted):
            missing = wanted - set(self.elements)
            raise KeyError(f"not elements of this lattice: {sorted(map(repr, missing))}")
        pos = {old: new for new, old in enumerate(idx)}
        sub = np.ix_(idx, idx)
        try:
            meet = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.meet_table[sub])
            join = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.join_table[sub])
        except KeyError as exc:
            raise NotALattice("subset is not closed under meet and join") from exc
        return FiniteLattice([self.elements[i] for i in idx], self.leq_matrix[sub], meet, join)


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    for k in range(rel.shape[0]):
        rel |= np.outer(rel[:, k], rel[k, :])
    return rel


def _greatest(candidates: np.ndarray, leq: np.ndarray) -> int | None:
    lbs = np.flatnonzero(candidates)
    if lbs.size == 0:
        return None
    ok = leq[lbs].all(axis=0) & candidates
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else None


def build_lattice(elements: Sequence[Hashable], leq_pairs: Iterable[tuple], *, max_size: int = DEFAULT_MAX_SIZE) -> FiniteLattice:
    """Validate a finite order relation and tabulate its meets and joins.

    ``leq_pairs`` lists pairs ``(x, y)`` meaning ``x <= y``; reflexive and
    transitive closure is applied.
    """
    elements = tuple(elements)
    n = len(elements)
    if n == 0:
        raise NoTop("the empty poset has no top")
    if n > max_size:
        raise SizeExceeded(f"{n} elements exceeds the configured cap of {max_size}")
    index = {x: i for i, x in enumerate(elements)}
    if len(index) != n:
        raise ValueError("duplicate element ids")
    rel = np.eye(n, dtype=bool)
    for x, y in leq_pairs:
        try:
            rel[index[x], index[y]] = True
        except KeyError as exc:
            raise ValueError(f"pair ({x!r}, {y!r}) mentions an unknown element") from exc
    rel = _transitive_closure(rel)
    both = rel & rel.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise NotAPartialOrder(f"{elements[i]!r} and {elements[j]!r} lie on a cycle")
    tops = np.flatnonzero(rel.all(axis=0))
    if tops.size == 0:
        raise NoTop("no element lies above every other element")

    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            g = _greatest(rel[:, i] & rel[:, j], rel)
            if g is None:
                raise NotALattice(
                    f"{elements[i]!r} and {elements[j]!r} have no greatest lower bound",
                    pair=(elements[i], elements[j]),
                )
            lub = _greatest(rel[i, :] & rel[j, :], rel.T)
            if lub is None:
                raise NotALattice(
                    f"{elements[i]!r} and {elements[j]!r} have no least upper bound",
                    pair=(elements[i], elements[j]),
                )
            meet[i, j] = meet[j, i] = g
            join[i, j] = join[j, i] = lub
    return FiniteLattice(elements, rel, meet, join)


@dataclass(frozen=True)
class StructureReport:
    is_distributive: bool
    irreducibles: frozenset
    primes: frozenset
    bottom_irreducible: bool
    distributivity_witness: tuple | None = None


def distributivity_witness(L: FiniteLattice):
    """First ``(x, (y, z))`` with ``x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)``, else None."""
    M, J = L.meet_table, L.join_table
    n = len(L)
    for x in range(n):
        for y in range(n):
            for z in range(y + 1, n):
                if M[x, J[y, z]] != J[M[x, y], M[x, z]]:
                    e = L.elements
                    return (e[x], (e[y], e[z]))
    return None


def is_distributive(L: FiniteLattice) -> bool:
    return distributivity_witness(L) is None


def irreducibles(L: FiniteLattice) -> frozenset:
    """Elements z such that z = x ∧ y forces z = x or z = y."""
    M = L.meet_table
    n = len(L)
    out = []
    for z in range(n):
        ok = True
        for x in range(n):
            if not ok:
                break
            for y in range(x, n):
                if M[x, y] == z and x != z and y != z:
                    ok = False
                    break
        if ok:
            out.append(L.elements[z])
    return frozenset(out)


def primes(L: FiniteLattice) -> frozenset:
    """Elements z != top whose complement of the principal ideal is a filter."""
    out = []
    for z in L.elements:
        if z == L.top:
            continue
        rest = [i for i in range(len(L)) if not L.leq_matrix[i, L.index(z)]]
        if all(not L.leq_matrix[L.meet_table[a, b], L.index(z)] for a in rest for b in rest):
            out.append(z)
    return frozenset(out)


def structure_report(L: FiniteLattice) -> StructureReport:
    witness = distributivity_witness(L)
    irr = irreducibles(L)
    return StructureReport(
        is_distributive=witness is None,
        irreducibles=irr,
        primes=primes(L),
        bottom_irreducible=L.bottom in irr and len(L) > 1,
        distributivity_witness=witness,
    )


def boundary_antichain(L: FiniteLattice, x) -> frozenset:
    """Maximal elements of ``{z : z not >= x}``; empty at the bottom."""
    if x == L.bottom:
        return frozenset()
    j = L.index(x)
    rest = [i for i in range(len(L)) if not L.leq_matrix[j, i]]
    return frozenset(
        L.elements[i] for i in rest if not any(k != i and L.leq_matrix[i, k] for k in rest)
    )


def sublattice_generated(L: FiniteLattice, G: Iterable) -> FiniteLattice:
    """Close ``G`` under joins, then close the result under meets."""
    G = list(dict.fromkeys(G))
    if not G:
        raise ValueError("generator set must be nonempty")
    if not is_distributive(L):
        raise NotDistributive("generated sublattices are only constructed in distributive lattices")
    H = _closure({L.index(g) for g in G}, L.join_table)
    F = _closure(H, L.meet_table)
    return L.restrict(L.elements[i] for i in sorted(F))


def _closure(seed: set, table: np.ndarray) -> set:
    out = set(seed)
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for b in list(out):
                c = int(table[a, b])
                if c not in out:
                    out.add(c)
                    new.append(c)
        frontier = new
    return out


def antichain_indices(leq: np.ndarray, carrier: Sequence[int], k_max: int) -> Iterator[tuple]:
    """Index-level antichain enumeration in lexicographic order."""
    carrier = sorted(carrier)
    comparable = leq | leq.T

    def extend(prefix, start):
        for pos in range(start, len(carrier)):
            c = carrier[pos]
            if any(comparable[c, p] for p in prefix):
                continue
            chain = prefix + (c,)
            yield chain
            if len(chain) < k_max:
                yield from extend(chain, pos + 1)

    if k_max >= 1:
        yield from extend((), 0)


def antichains_of(L: FiniteLattice, carrier: Iterable, k_max: int) -> Iterator[tuple]:
    """Yield every antichain ``B`` of ``carrier`` with ``1 <= |B| <= k_max``."""
    idx = [L.index(c) for c in set(carrier)]
    for chain in antichain_indices(L.leq_matrix, idx, k_max):
        yield tuple(L.elements[i] for i in chain)


def powerset_lattice(ground: Sequence[Hashable], *, reverse: bool = False) -> FiniteLattice:
    """Subsets of ``ground`` as frozensets, ordered by inclusion (or reverse inclusion).

    Elements are listed in bitmask order of ``ground``.
    """
    ground = tuple(ground)
    k = len(ground)
    if 2**k > DEFAULT_MAX_SIZE:
        raise SizeExceeded(f"powerset of {k} points exceeds the lattice cap")
    n = 1 << k
    masks = np.arange(n, dtype=np.int64)
    elements = [frozenset(ground[b] for b in range(k) if m >> b & 1) for m in range(n)]
    union = masks[:, None] | masks[None, :]
    inter = masks[:, None] & masks[None, :]
    subset = (inter == masks[:, None])  # row ⊆ column
    if reverse:
        return FiniteLattice(elements, subset.T, union, inter)
    return FiniteLattice(elements, subset, inter, union)
