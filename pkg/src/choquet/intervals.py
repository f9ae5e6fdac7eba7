"""Compact sets on a line segment and on a product with a discrete factor.

Compacts are finite unions of closed intervals with rational endpoints,
ordered by reverse inclusion: the union is the meet and the intersection
is the join.  No floating point is used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .exceptions import InvalidMeasure
from .measure import as_fraction
from .setfun import successive_difference


def _normalize(pairs) -> tuple:
    items = []
    for p, q in pairs:
        p, q = as_fraction(p), as_fraction(q)
        if p > q:
            raise ValueError(f"interval [{p}, {q}] has left end above right end")
        items.append((p, q))
    items.sort()
    out: list = []
    for p, q in items:
        # closed intervals that touch share a point, so they merge
        if out and p <= out[-1][1]:
            if q > out[-1][1]:
                out[-1] = (out[-1][0], q)
        else:
            out.append((p, q))
    return tuple(out)


@dataclass(frozen=True)
class IntervalUnion:
    intervals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def of(cls, *pairs) -> "IntervalUnion":
        return cls(tuple(pairs))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "IntervalUnion(∅)"
        return "IntervalUnion(" + " ∪ ".join(f"[{p},{q}]" for p, q in self.intervals) + ")"

    def length(self) -> Fraction:
        return sum((q - p for p, q in self.intervals), Fraction(0))

    def contains_point(self, x) -> bool:
        x = as_fraction(x)
        return any(p <= x <= q for p, q in self.intervals)

    def issubset(self, other: "IntervalUnion") -> bool:
        return all(any(a <= p and q <= b for a, b in other.intervals) for p, q in self.intervals)

    def bounds(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]


EMPTY = IntervalUnion()


def iu_union(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return IntervalUnion(a.intervals + b.intervals)


def iu_intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    out = []
    i = j = 0
    A, B = a.intervals, b.intervals
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return IntervalUnion(tuple(out))


def iu_union_all(items: Iterable[IntervalUnion]) -> IntervalUnion:
    pairs: list = []
    for it in items:
        pairs.extend(it.intervals)
    return IntervalUnion(tuple(pairs))


def iu_intersect_all(items: Iterable[IntervalUnion]) -> IntervalUnion:
    items = list(items)
    if not items:
        raise ValueError("intersection of an empty family is undefined here")
    out = items[0]
    for it in items[1:]:
        out = iu_intersect(out, it)
    return out


def iu_way_below(e: IntervalUnion, f: IntervalUnion, ambient: IntervalUnion | tuple | None = None) -> bool:
    """True iff ``f`` lies in the interior of ``e``.

    The interior is taken relative to the ambient segment when one is
    given, so an endpoint of ``e`` that is also an endpoint of the segment
    counts as interior.  Without an ambient segment the whole line is used.
    """
    lo = hi = None
    if ambient is not None:
        if isinstance(ambient, IntervalUnion):
            if len(ambient.intervals) != 1:
                raise ValueError("the ambient space must be a single segment")
            lo, hi = ambient.intervals[0]
        else:
            lo, hi = map(as_fraction, ambient)
    for s, t in f.intervals:
        ok = False
        for p, q in e.intervals:
            left = s > p or (s == p and p == lo)
            right = t < q or (t == q and q == hi)
            if left and right:
                ok = True
                break
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class MeasureModel:
    """Piecewise constant density plus finitely many atoms, all rational."""

    pieces: tuple = ()  # ((a, b), height)
    atoms: tuple = ()  # (point, mass), sorted

    def __post_init__(self):
        pieces = []
        for (a, b), h in self.pieces:
            a, b, h = as_fraction(a), as_fraction(b), as_fraction(h)
            if h < 0:
                raise InvalidMeasure(f"negative density {h} on [{a}, {b}]")
            if a > b:
                raise InvalidMeasure(f"piece [{a}, {b}] is reversed")
            pieces.append(((a, b), h))
        atoms = dict(self.atoms) if not isinstance(self.atoms, dict) else self.atoms
        clean = {}
        for x, m in atoms.items():
            x, m = as_fraction(x), as_fraction(m)
            if m < 0:
                raise InvalidMeasure(f"negative atom {m} at {x}")
            if m:
                clean[x] = clean.get(x, 0) + m
        object.__setattr__(self, "pieces", tuple(pieces))
        object.__setattr__(self, "atoms", tuple(sorted(clean.items())))

    @classmethod
    def lebesgue(cls, a=0, b=1) -> "MeasureModel":
        return cls((((a, b), 1),))

    def is_atomic(self) -> bool:
        return bool(self.atoms)


def measure_of(m: MeasureModel, q: IntervalUnion) -> Fraction:
    total = Fraction(0)
    for (a, b), h in m.pieces:
        if h:
            total += h * iu_intersect(q, IntervalUnion(((a, b),))).length()
    for x, w in m.atoms:
        if q.contains_point(x):
            total += w
    return total


def _label_key(x):
    return (type(x).__name__, repr(x))


@dataclass(frozen=True)
class ProductCompact:
    """Compact subset of ``labels × [0, 1]`` given by its nonempty slices."""

    slices: tuple = field(default=())

    def __post_init__(self):
        raw = self.slices.items() if isinstance(self.slices, Mapping) else self.slices
        merged: dict = {}
        for label, iu in raw:
            if not isinstance(iu, IntervalUnion):
                iu = IntervalUnion(tuple(iu))
            merged[label] = iu_union(merged[label], iu) if label in merged else iu
        items = sorted(((k, v) for k, v in merged.items() if v), key=lambda kv: _label_key(kv[0]))
        object.__setattr__(self, "slices", tuple(items))

    def slice(self, label) -> IntervalUnion:
        return dict(self.slices).get(label, EMPTY)

    def __bool__(self):
        return bool(self.slices)

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in self.slices)
        return f"ProductCompact({{{inner}}})"


def pc_union(a: ProductCompact, b: ProductCompact) -> ProductCompact:
    return ProductCompact(a.slices + b.slices)


def pc_intersect(a: ProductCompact, b: ProductCompact) -> ProductCompact:
    db = dict(b.slices)
    return ProductCompact(tuple((k, iu_intersect(v, db[k])) for k, v in a.slices if k in db))


def projection(q: ProductCompact) -> IntervalUnion:
    return iu_union_all(v for _, v in q.slices)


def projection_capacity(q: ProductCompact, nu: MeasureModel) -> Fraction:
    return measure_of(nu, projection(q))


def projection_nabla_identity(q: ProductCompact, qs, nu: MeasureModel) -> dict:
    """Both sides of the difference identity for ``Q ↦ ν(π(Q))``.

    ``lhs`` is the successive difference in the reverse-inclusion order
    (meet = union); ``rhs`` is ``ν(π Q) - ν(π Q ∪ ⋂ π Q_i)``.
    """
    qs = list(qs)
    if not qs:
        raise ValueError("at least one index compact is needed")
    lhs = successive_difference(lambda x: projection_capacity(x, nu), pc_union, qs, q)
    p = projection(q)
    common = iu_intersect_all(projection(x) for x in qs)
    rhs = measure_of(nu, p) - measure_of(nu, iu_union(p, common))
    return {"lhs": lhs, "rhs": rhs}
