"""Intersection-closed covers, openings and the locally-finite-valuation bound.

Compacts are either frozensets (finite ground sets) or
:class:`~choquet.intervals.IntervalUnion` values.  They are ordered by
reverse inclusion, so a successive difference uses unions as meets.

An avoidance functional is passed as an evaluator object with an exact
``value(Q)`` method and an ``exact`` flag.  Evaluators that also know the
law of the underlying random set expose ``law()``, a list of
``(closed set, probability)`` pairs; :func:`lfv_lhs` can then sum
probabilities instead of enumerating antichains, which is what makes fine
dyadic covers tractable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exceptions import EvaluatorNotExact, NotAnAntichain
from .expsum import ExpSum
from .intervals import EMPTY, IntervalUnion, MeasureModel, iu_intersect, iu_union, measure_of
from .lattice import antichain_indices, build_lattice, sublattice_generated
from .measure import DiscreteMeasure, as_fraction
from .random_sets import AVOIDANCE, estimate_functional, run_batches
from .representation import vapprox_bound
from .setfun import SetFunction, difference_terms

# ---------------------------------------------------------------------------
# compact operations shared by both kinds


def _union(a, b):
    return a | b if isinstance(a, frozenset) else iu_union(a, b)


def _inter(a, b):
    return a & b if isinstance(a, frozenset) else iu_intersect(a, b)


def _subset(a, b) -> bool:
    return a <= b if isinstance(a, frozenset) else a.issubset(b)


def _empty_like(a):
    return frozenset() if isinstance(a, frozenset) else EMPTY


def _sort_key(q):
    if isinstance(q, frozenset):
        return (len(q), sorted(map(repr, q)))
    return (0, q.intervals)


def _as_compact(q):
    if isinstance(q, (frozenset, IntervalUnion)):
        return q
    return frozenset(q)


@dataclass(frozen=True)
class Covering:
    W: object
    members: tuple

    def __post_init__(self):
        W = _as_compact(self.W)
        ms = sorted(set(_as_compact(q) for q in self.members), key=_sort_key)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "members", tuple(ms))

    def bottom_member(self):
        """``⋂G``, the largest member in the reverse-inclusion order."""
        out = self.members[0]
        for q in self.members[1:]:
            out = _inter(out, q)
        return out

    def proper(self) -> tuple:
        """``G'``: members other than ``⋂G``."""
        b = self.bottom_member()
        return tuple(q for q in self.members if q != b)

    def pointed(self) -> "Covering":
        return Covering(self.W, self.members + (_empty_like(self.W),))

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    violation: tuple | None = None

    def __bool__(self):
        return self.ok


def validate_cover(c: Covering) -> CoverCheck:
    """Intersection closure and union equality, checked exactly."""
    G = c.members
    if not G:
        return CoverCheck(False, ("empty",))
    present = set(G)
    for i, q1 in enumerate(G):
        for q2 in G[i + 1:]:
            if _inter(q1, q2) not in present:
                return CoverCheck(False, ("meet", q1, q2))
    u = G[0]
    for q in G[1:]:
        u = _union(u, q)
    if u != c.W:
        return CoverCheck(False, ("union", u, c.W))
    return CoverCheck(True)


def _is_antichain(B) -> bool:
    return all(not _subset(x, y) and not _subset(y, x) for x, y in itertools.combinations(B, 2))


def opening_of(c: Covering, B: Sequence) -> tuple:
    """``(O_B, is_opening)`` for an antichain ``B`` of ``G'``."""
    B = [_as_compact(b) for b in B]
    proper = set(c.proper())
    if not B or any(b not in proper for b in B) or len(set(B)) != len(B) or not _is_antichain(B):
        raise NotAnAntichain("B must be a nonempty antichain of the proper members")
    return _opening(c, B)


def _opening(c: Covering, B) -> tuple:
    O = _empty_like(c.W)
    for q in c.members:
        if all(not _subset(b, q) for b in B):
            O = _union(O, q)
    return O, all(not _subset(b, O) for b in B)


# ---------------------------------------------------------------------------
# evaluators


def _exp_or_fraction(x):
    if isinstance(x, ExpSum) and x.is_rational():
        return x.as_fraction()
    return x


class FiniteLawAvoidance:
    """Avoidance functional of a random subset with a given finite law."""

    exact = True

    def __init__(self, law: DiscreteMeasure | dict):
        items = law.support_weights() if isinstance(law, DiscreteMeasure) else dict(law)
        self._law = [(_as_compact(c), p) for c, p in items.items() if p != 0]
        total = sum((p for _, p in self._law), Fraction(0))
        if total != 1:
            raise ValueError(f"law has total mass {total}, expected 1")

    def value(self, q):
        q = _as_compact(q)
        return sum((p for c, p in self._law if not _inter(c, q)), Fraction(0))

    def law(self):
        return list(self._law)


class SolidGrainAvoidance(FiniteLawAvoidance):
    """Deterministic grain: avoidance is 1 off the grain and 0 on it."""

    def __init__(self, grain):
        super().__init__({_as_compact(grain): Fraction(1)})


class CompoundPoissonAvoidance:
    """``Q ↦ exp(-Σ λ(g) over grains g meeting Q)`` on a finite ground set."""

    exact = True

    def __init__(self, grains: DiscreteMeasure | dict, ground: Iterable | None = None):
        items = grains.support_weights() if isinstance(grains, DiscreteMeasure) else dict(grains)
        self.grains = [(frozenset(g), as_fraction(w)) for g, w in items.items() if w != 0]
        pts = set().union(*(g for g, _ in self.grains)) if self.grains else set()
        self.ground = frozenset(ground) if ground is not None else frozenset(pts)
        self._values: dict = {}
        self._law = None

    def exponent(self, q) -> Fraction:
        q = frozenset(q)
        return sum((w for g, w in self.grains if g & q), Fraction(0))

    def value(self, q):
        q = frozenset(q)
        v = self._values.get(q)
        if v is None:
            v = self._values[q] = ExpSum.exp_neg(self.exponent(q))
        return v

    def law(self):
        """Exact law of the realized subset by inclusion-exclusion."""
        if self._law is None:
            self._law = self._compute_law()
        return list(self._law)

    def _compute_law(self):
        R = sorted(self.ground, key=repr)
        out = []
        for k in range(len(R) + 1):
            for C in itertools.combinations(R, k):
                C = frozenset(C)
                p = ExpSum()
                for j in range(len(C) + 1):
                    for D in itertools.combinations(sorted(C, key=repr), j):
                        # P(realized ⊆ D) is the avoidance of the complement of D
                        p = p + (-1) ** (len(C) - j) * self.value(self.ground - frozenset(D))
                p = _exp_or_fraction(p)
                if p != 0:
                    out.append((C, p))
        return out


def poisson_singletons(intensity: dict) -> CompoundPoissonAvoidance:
    return CompoundPoissonAvoidance({frozenset([r]): w for r, w in intensity.items()}, intensity.keys())


class PoissonIntervalAvoidance:
    """``Q ↦ exp(-λ(Q))`` for a rational parameter measure on the line."""

    exact = True

    def __init__(self, lam: MeasureModel):
        self.lam = lam

    def value(self, q):
        return ExpSum.exp_neg(measure_of(self.lam, q))


class EstimatedAvoidance:
    """Monte Carlo stand-in; rejected by the exact routines."""

    exact = False

    def __init__(self, sampler, n: int, seed: int):
        self.sampler, self.n, self.seed = sampler, n, seed

    def value(self, q):
        return estimate_functional(self.sampler, AVOIDANCE, q, self.n, self.seed).estimate


def _require_exact(phi):
    if not getattr(phi, "exact", False):
        raise EvaluatorNotExact("the bound needs an exact evaluator; use lfv_diagnostic for estimates")


# ---------------------------------------------------------------------------
# the left-hand side


def _antichains(members: Sequence, k_max: int):
    n = len(members)
    leq = np.array([[_subset(members[j], members[i]) for j in range(n)] for i in range(n)], dtype=bool)
    for chain in antichain_indices(leq, range(n), k_max):
        yield tuple(members[i] for i in chain)


def lfv_profile(c: Covering, n: int, *, openings_only: bool = True) -> list:
    """Per antichain size ``k = 0..n``, the signed coefficients ``{Q: c}`` of the bound.

    The bound at order ``n`` is ``Σ_{k <= n} Σ_Q c_k[Q] φ(Q)``.
    """
    prof = [dict() for _ in range(n + 1)]
    prof[0][c.W] = 1
    members = c.proper()
    for B in _antichains(members, n):
        O, is_open = _opening(c, B)
        if openings_only and not is_open:
            continue
        tgt = prof[len(B)]
        for y, coef in difference_terms(_union, B, O).items():
            tgt[y] = tgt.get(y, 0) + coef
    return prof


def linear_combination(pairs) -> object:
    """``Σ c·v`` for rational or :class:`ExpSum` values, merged in one pass."""
    acc: dict = {}
    for c, v in pairs:
        if not c:
            continue
        if isinstance(v, ExpSum):
            for q, a in v.terms.items():
                acc[q] = acc.get(q, 0) + c * a
        else:
            acc[Fraction(0)] = acc.get(Fraction(0), 0) + c * as_fraction(v)
    return _exp_or_fraction(ExpSum(acc))


def _evaluate(prof_terms: dict, phi, cache: dict):
    def val(q):
        if q not in cache:
            cache[q] = phi.value(q)
        return cache[q]

    return linear_combination((coef, val(q)) for q, coef in prof_terms.items() if coef)


def lfv_lhs(phi, c: Covering, n: int, *, route: str = "enumerate"):
    """Exact left-hand side of the bound at order ``n``.

    ``route="enumerate"`` sums differences over antichains of ``G'`` whose
    set ``O_B`` is an opening; ``route="measure"`` sums the law of the
    random set by the size of its boundary antichain.
    """
    _require_exact(phi)
    if route == "measure":
        return lfv_lhs_by_law(phi, c, n)
    if route != "enumerate":
        raise ValueError(f"unknown route {route!r}")
    prof = lfv_profile(c, n)
    terms: dict = {}
    for p in prof:
        for q, coef in p.items():
            terms[q] = terms.get(q, 0) + coef
    return _evaluate(terms, phi, {})


def lfv_bound_sum(phi, c: Covering, n: int):
    """The antichain form: ``Σ ∇_B φ(⋀(G ∖ ⟨B⟩))`` over antichains ``|B| <= n`` of ``G'``.

    The sum runs over every antichain including the empty one.  ``G`` is
    only closed under joins (intersections), so ``⟨B⟩`` is taken in the
    order of ``G`` and the meet (union) is taken among all compacts, with
    the empty meet being the empty compact.
    """
    _require_exact(phi)
    members = list(c.members)
    empty = _empty_like(c.W)

    def down(B):
        # q <= b in reverse inclusion means b ⊆ q
        return {q for q in members if any(_subset(b, q) for b in B)}

    total = Fraction(0)
    cache: dict = {}
    for B in itertools.chain([()], _antichains(list(c.proper()), n)):
        below = down(B)
        o = empty
        for q in members:
            if q not in below:
                o = _union(o, q)
        if not B:
            total = total + phi.value(o)
            continue
        for y, coef in difference_terms(_union, B, o).items():
            if y not in cache:
                cache[y] = phi.value(y)
            total = total + coef * cache[y]
    return _exp_or_fraction(total)


def boundary_of_set(c: Covering, C) -> tuple | None:
    """Boundary antichain picked out by a realized closed set, or None if it meets ``⋂G``."""
    if _inter(C, c.bottom_member()):
        return None
    O = _empty_like(c.W)
    for q in c.members:
        if not _inter(q, C):
            O = _union(O, q)
    outside = [q for q in c.members if not _subset(q, O)]
    return tuple(q for q in outside if not any(p != q and _subset(p, q) for p in outside))


def lfv_lhs_by_law(phi, c: Covering, n: int):
    if not hasattr(phi, "law"):
        raise EvaluatorNotExact("this evaluator has no finite law; use the enumeration route")
    total = Fraction(0)
    for C, p in phi.law():
        B = boundary_of_set(c, C)
        if B is not None and len(B) <= n:
            total = total + p
    return _exp_or_fraction(total)


def vapprox_lower_for_cover(phi, c: Covering, k: int):
    """The same bound through the sublattice generated by the cover (finite models)."""
    W = c.W
    ground = sorted(W, key=repr)
    subsets = [frozenset(s) for r in range(len(ground) + 1) for s in itertools.combinations(ground, r)]
    K = build_lattice(subsets, [(a, b) for a in subsets for b in subsets if b <= a])
    F = sublattice_generated(K, c.members)
    vals = {q: phi.value(q) for q in subsets}
    if all(isinstance(v, Fraction) for v in vals.values()):
        f = SetFunction(K, vals, normalize=False)
        return vapprox_bound(f, F, k)["lower"]
    raise TypeError("rational-valued evaluators only")


# ---------------------------------------------------------------------------
# cover generators


@lru_cache(maxsize=None)
def _closed_families(k: int) -> tuple:
    """All intersection-closed families of subsets of ``range(k)`` with full union, as bitmask tuples."""
    full = (1 << k) - 1
    subsets = list(range(1 << k))
    out = []
    for fam in range(1, 1 << len(subsets)):
        members = [s for s in subsets if fam >> s & 1]
        u = 0
        for s in members:
            u |= s
        if u != full:
            continue
        if all(fam >> (a & b) & 1 for i, a in enumerate(members) for b in members[i + 1:]):
            out.append(tuple(members))
    return tuple(out)


EXHAUSTIVE_LIMIT = 4


def finite_covers(W, *, pointed: bool = True, budget: int | None = None):
    """Every intersection-closed cover of a finite ``W``.

    Returns ``(covers, exhaustive)``.  Enumeration is exhaustive for
    ``|W| <= 4``; larger windows get the covers generated by pairs of
    subsets, truncated at ``budget``.
    """
    W = frozenset(W)
    pts = sorted(W, key=repr)
    k = len(pts)

    def decode(mask):
        return frozenset(p for i, p in enumerate(pts) if mask >> i & 1)

    seen = set()
    covers = []
    if k <= EXHAUSTIVE_LIMIT:
        fams = _closed_families(k)
        exhaustive = True
    else:
        fams = _closed_families_sample(k)
        exhaustive = False
    for fam in fams:
        c = Covering(W, tuple(decode(m) for m in fam))
        if pointed:
            c = c.pointed()
        if c.members in seen:
            continue
        seen.add(c.members)
        covers.append(c)
        if budget is not None and len(covers) >= budget:
            return covers, exhaustive and len(covers) == len(fams)
    return covers, exhaustive


def _closed_families_sample(k: int):
    """Closures of every pair of subsets together with the full set."""
    full = (1 << k) - 1
    for a in range(1 << k):
        for b in range(a, 1 << k):
            fam = {full, a, b, a & b, a & full, b & full}
            yield tuple(sorted(fam))


def dyadic_ladder(W: IntervalUnion, level: int, *, pointed: bool = True) -> Covering:
    """Closed dyadic pieces of a segment, their junction points and (optionally) ∅."""
    if len(W.intervals) != 1:
        raise ValueError("dyadic ladders are built on a single segment")
    a, b = W.intervals[0]
    m = 1 << level
    h = (b - a) / m
    pieces = [IntervalUnion(((a + i * h, a + (i + 1) * h),)) for i in range(m)]
    points = [IntervalUnion(((a + i * h, a + i * h),)) for i in range(1, m)]
    members = pieces + points
    if pointed or m > 2:
        members.append(EMPTY)
    return Covering(W, tuple(members))


def ladder_covers(W: IntervalUnion, budget: int, *, pointed: bool = True) -> list:
    out = []
    level = 0
    while True:
        c = dyadic_ladder(W, level, pointed=pointed)
        if len(c) > budget:
            break
        out.append(c)
        level += 1
    return out


# ---------------------------------------------------------------------------
# certificate


@dataclass
class CoverResult:
    cover_id: str
    lhs: object
    passed: bool
    n_needed: int | None


@dataclass
class LfvCertificate:
    delta: Fraction
    n_used: int
    per_cover_results: list
    verdict: str  # pass | fail | inconclusive
    counterexample: tuple | None = None  # (window, cover, n, lhs)
    exhaustive: bool = False
    notes: list = field(default_factory=list)


def _meets_target(value, target: Fraction) -> bool:
    # ExpSum comparisons resolve the sign with interval arithmetic
    return value >= target


def _cover_id(c: Covering) -> str:
    def fmt(q):
        if isinstance(q, frozenset):
            return "{" + ",".join(sorted(map(str, q))) + "}"
        return "∅" if not q else "∪".join(f"[{p},{r}]" for p, r in q.intervals)

    return fmt(c.W) + ":" + "|".join(fmt(q) for q in c.members)


def _canonical(c: Covering):
    """Relabel a finite cover onto ``range(|W|)``; returns (canonical cover, inverse map)."""
    pts = sorted(c.W, key=repr)
    pos = {p: i for i, p in enumerate(pts)}
    members = tuple(frozenset(pos[x] for x in q) for q in c.members)
    return Covering(frozenset(range(len(pts))), members), pts


@lru_cache(maxsize=1 << 15)
def _canonical_profile(c: Covering, n: int):
    return lfv_profile(c, n)


def _profile(c: Covering, n: int):
    if not isinstance(c.W, frozenset):
        return lfv_profile(c, n)
    canon, pts = _canonical(c)
    prof = _canonical_profile(canon, n)
    return [{frozenset(pts[i] for i in q): v for q, v in p.items()} for p in prof]


def _projected_law(phi, W):
    """The law of ``C ∩ W``; boundaries only see the part inside the window."""
    out: dict = {}
    for C, p in phi.law():
        key = _inter(C, W)
        out[key] = out.get(key, 0) + p
    return list(out.items())


def _min_order(phi, c: Covering, n_max: int, target: Fraction, route: str, memo: dict | None = None):
    """Smallest ``n <= n_max`` meeting the target, and the value at that ``n`` (or at ``n_max``)."""
    if route == "measure":
        law = memo["law"] if memo is not None else phi.law()
        shape = tuple(
            None if B is None else len(B) for B in (boundary_of_set(c, C) for C, _ in law)
        )
        if memo is not None and shape in memo:
            return memo[shape]
        sizes: dict = {}
        for (C, p), k in zip(law, shape):
            if k is not None:
                sizes.setdefault(k, []).append((1, p))
        out = None
        acc: list = []
        running = Fraction(0)
        for n in range(n_max + 1):
            acc.extend(sizes.get(n, ()))
            running = linear_combination(acc)
            if n >= 1 and _meets_target(running, target):
                out = (n, running)
                break
        if out is None:
            out = (None, running)
        if memo is not None:
            memo[shape] = out
        return out
    prof = _profile(c, n_max)
    cache: dict = {}
    cum: dict = {}
    value = Fraction(0)
    for n in range(n_max + 1):
        for q, coef in prof[n].items():
            cum[q] = cum.get(q, 0) + coef
        if n == 0:
            continue
        value = _evaluate(cum, phi, cache)
        if _meets_target(value, target):
            return n, value
        if not any(prof[m] for m in range(n + 1, n_max + 1)):
            return None, value
    return None, value


def lfv_certificate(
    phi,
    windows: Sequence,
    delta=Fraction(1, 20),
    n_max: int = 20,
    cover_budget: int | None = None,
    *,
    covers: dict | None = None,
    route: str = "auto",
) -> LfvCertificate:
    """Search for one order ``n`` that meets ``1 - δ`` on every generated cover of every window.

    Finite windows use every intersection-closed cover (with ∅ adjoined)
    when ``|W| <= 4``; segments use dyadic ladders with at most
    ``cover_budget`` members.  ``covers`` may map a window to an explicit
    list of covers instead.  Only exhaustive families can yield ``pass``.
    """
    _require_exact(phi)
    delta = as_fraction(delta)
    target = 1 - delta
    results = []
    exhaustive = True
    n_used = 0
    for W in windows:
        W = _as_compact(W)
        if covers is not None and W in covers:
            fam, exh = list(covers[W]), False
        elif isinstance(W, frozenset):
            fam, exh = finite_covers(W, budget=cover_budget)
        else:
            fam, exh = ladder_covers(W, cover_budget or 16), False
        exhaustive = exhaustive and exh
        r = route
        if r == "auto":
            r = "measure" if hasattr(phi, "law") else "enumerate"
        memo = {"law": _projected_law(phi, W)} if r == "measure" else None
        for c in fam:
            n, value = _min_order(phi, c, n_max, target, r, memo)
            cid = _cover_id(c)
            if n is None:
                results.append(CoverResult(cid, value, False, None))
                return LfvCertificate(delta, n_max, results, "fail", (W, c, n_max, value), exhaustive)
            results.append(CoverResult(cid, value, True, n))
            n_used = max(n_used, n)
    verdict = "pass" if exhaustive else "inconclusive"
    return LfvCertificate(delta, n_used, results, verdict, None, exhaustive)


# ---------------------------------------------------------------------------
# Monte Carlo diagnostic


def lfv_diagnostic(sampler, c: Covering, n: int, samples: int, seed: int, phi=None) -> list:
    """Per-term Monte Carlo estimates of the bound; never issues a verdict.

    Each difference term is the probability that the realized set misses
    ``O_B`` and meets every member of ``B``, so it is estimated by an
    indicator mean.  When an exact ``phi`` is supplied the z-score
    against the exact term is included.
    """
    rows = []
    terms = [((), c.W, {c.W: 1})]
    for B in _antichains(c.proper(), n):
        O, is_open = opening_of(c, B)
        if is_open:
            terms.append((B, O, difference_terms(_union, B, O)))
    qs = sorted({q for _, _, t in terms for q in t}, key=_sort_key)
    pos = {q: i for i, q in enumerate(qs)}

    def tally(b):
        av = np.stack([b.avoids(q) for q in qs]).astype(np.int64)
        return np.stack([sum(coef * av[pos[q]] for q, coef in t.items()) for _, _, t in terms]).sum(axis=1)

    sums = np.sum(run_batches(sampler, samples, seed, tally), axis=0)
    for (B, O, t), s in zip(terms, sums):
        p = float(s) / samples
        se = math.sqrt(max(p * (1 - p), 0.0) / samples)
        row = {"B": B, "O": O, "estimate": p, "std_error": se}
        if phi is not None and getattr(phi, "exact", False):
            exact = _evaluate(t, phi, {})
            row["exact"] = exact
            row["z"] = (p - float(exact)) / se if se > 0 else 0.0
        rows.append(row)
    return rows
