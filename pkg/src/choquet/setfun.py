"""Set functions on finite lattices and their difference operators.

The meet difference of ``f`` at ``x`` along ``A`` is the alternating sum of
``f`` over ``x ∧ ⋀B`` for every subset ``B`` of ``A``; the join difference
uses joins instead.  Everything here is exact rational arithmetic except the
root tests in :func:`levy_divisibility`, which use certified intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import mpmath
import numpy as np

from .expsum import interval_context
from .exceptions import (
    EmptyIndexSet,
    InvalidSetFunction,
    NonUniqueSolution,
    PrerequisiteClassFailed,
    UnsupportedClassForDirection,
)
from .lattice import FiniteLattice, antichain_indices
from .measure import DiscreteMeasure, as_fraction

INC, DEC = "inc", "dec"

CLASSES = (
    "completely_monotone",
    "completely_alternating",
    "completely_vee_monotone",
    "completely_vee_alternating",
)
# class -> (required direction, difference kind, sign that must hold)
_CLASS_RULES = {
    "completely_monotone": (INC, "meet", 1),
    "completely_alternating": (DEC, "meet", -1),
    "completely_vee_alternating": (INC, "join", -1),
    "completely_vee_monotone": (DEC, "join", 1),
}


class SetFunction:
    """Exact rational values on every element of a finite lattice.

    Increasing functions are divided by their top value unless
    ``normalize=False``; decreasing functions must vanish at the top.
    """

    __slots__ = ("lattice", "values", "direction")

    def __init__(self, lattice: FiniteLattice, values: Mapping, direction: str = INC, *, normalize: bool = True):
        if direction in ("increasing", INC):
            direction = INC
        elif direction in ("decreasing", DEC):
            direction = DEC
        else:
            raise InvalidSetFunction(f"unknown direction {direction!r}")
        missing = [x for x in lattice.elements if x not in values]
        if missing:
            raise InvalidSetFunction(f"no value for {missing[0]!r}")
        vals = {x: as_fraction(values[x]) for x in lattice.elements}
        for x, v in vals.items():
            if v < 0:
                raise InvalidSetFunction(f"negative value {v} at {x!r}")
        top = vals[lattice.top]
        if direction == INC and normalize:
            if top == 0:
                raise InvalidSetFunction("increasing function vanishes at the top")
            if top != 1:
                vals = {x: v / top for x, v in vals.items()}
        if direction == DEC and top != 0:
            raise InvalidSetFunction(f"decreasing function has value {top} at the top, expected 0")
        arr = [vals[x] for x in lattice.elements]
        leq = lattice.leq_matrix
        for i, j in zip(*np.nonzero(leq)):
            if (arr[i] > arr[j]) if direction == INC else (arr[i] < arr[j]):
                raise InvalidSetFunction(
                    f"not {'increasing' if direction == INC else 'decreasing'}: "
                    f"{lattice.elements[i]!r} <= {lattice.elements[j]!r} but values {arr[i]}, {arr[j]}"
                )
        self.lattice = lattice
        self.values = vals
        self.direction = direction

    @classmethod
    def from_callable(cls, lattice: FiniteLattice, fn: Callable, direction: str = INC, *, normalize: bool = True):
        return cls(lattice, {x: fn(x) for x in lattice.elements}, direction, normalize=normalize)

    def __call__(self, x) -> Fraction:
        return self.values[x]

    def __repr__(self) -> str:
        return f"SetFunction(n={len(self.lattice)}, direction={self.direction})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.lattice is other.lattice and self.direction == other.direction and self.values == other.values

    def vector(self) -> list:
        return [self.values[x] for x in self.lattice.elements]


@dataclass(frozen=True)
class ClassReport:
    class_queried: str
    holds: bool
    witness: tuple | None = None  # (A, x, value)
    strictly_positive: bool | None = None
    checked: int = 0


def difference_terms(combine: Callable, A: Iterable, x) -> dict:
    """Signed multiset ``{y: c}`` with ``∇_A f(x) = Σ c·f(y)``.

    ``combine`` is the meet (for ∇) or the join (for Δ).  Repeated
    elements of ``A`` are dropped first, which is harmless because the
    operator is idempotent in each argument.
    """
    A = list(dict.fromkeys(A))
    if not A:
        raise EmptyIndexSet("the index set of a successive difference must be nonempty")
    terms = {x: 1}
    for z in A:
        nxt = dict(terms)
        for y, c in terms.items():
            w = combine(y, z)
            nxt[w] = nxt.get(w, 0) - c
        terms = {y: c for y, c in nxt.items() if c != 0}
    return terms


def successive_difference(value: Callable, combine: Callable, A: Iterable, x):
    """Generic successive difference over any meet or join operation."""
    return sum((c * value(y) for y, c in difference_terms(combine, A, x).items()), Fraction(0))


def nabla(f: SetFunction, A: Iterable, x) -> Fraction:
    """Successive meet difference ``∇_A f(x)``."""
    L = f.lattice
    return successive_difference(f, L.meet, A, x)


def delta(f: SetFunction, A: Iterable, x) -> Fraction:
    """Successive join difference ``Δ_A f(x)``."""
    L = f.lattice
    return successive_difference(f, L.join, A, x)


def _integer_vector(f: SetFunction, depth: int):
    vals = f.vector()
    den = math.lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    bound = max((abs(v) for v in ints), default=0) << (depth + 1)
    dtype = np.int64 if bound < 2**62 else object
    return np.array(ints, dtype=dtype), den


def _violates(g: np.ndarray, sign: int) -> np.ndarray:
    return (g < 0) if sign > 0 else (g > 0)


def classify(f: SetFunction, cls: str, *, full_subsets: bool = False, max_order: int | None = None) -> ClassReport:
    """Check one of the four complete monotonicity classes exhaustively.

    Index sets range over nonempty antichains (all nonempty subsets with
    ``full_subsets``); the first violation in lexicographic order of
    ``(A, x)`` is reported.
    """
    if cls not in _CLASS_RULES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")
    need, kind, sign = _CLASS_RULES[cls]
    if f.direction != need:
        raise UnsupportedClassForDirection(f"{cls} is defined for {'increasing' if need == INC else 'decreasing'} functions")
    L = f.lattice
    n = len(L)
    table = L.meet_table if kind == "meet" else L.join_table
    # the top (for meets) or bottom (for joins) contributes a zero difference
    trivial = L.index(L.top if kind == "meet" else L.bottom)
    carrier = [i for i in range(n) if i != trivial]
    k_max = n if max_order is None else max_order
    comparable = L.leq_matrix | L.leq_matrix.T
    g0, den = _integer_vector(f, min(k_max, len(carrier)))
    checked = 0

    def dfs(prefix, g, blocked, start):
        nonlocal checked
        for pos in range(start, len(carrier)):
            c = carrier[pos]
            if not full_subsets and blocked[c]:
                continue
            g2 = g - g[table[:, c]]
            checked += 1
            bad = np.flatnonzero(_violates(g2, sign))
            chain = prefix + (c,)
            if bad.size:
                x = int(bad[0])
                return chain, x, Fraction(int(g2[x]), den)
            if len(chain) < k_max:
                hit = dfs(chain, g2, blocked | comparable[c], pos + 1)
                if hit is not None:
                    return hit
        return None

    hit = dfs((), g0, np.zeros(n, dtype=bool), 0)
    if hit is None:
        return ClassReport(cls, True, None, checked=checked)
    chain, x, val = hit
    e = L.elements
    return ClassReport(cls, False, (tuple(e[i] for i in chain), e[x], val), checked=checked)


def required_class(f: SetFunction) -> str:
    return "completely_monotone" if f.direction == INC else "completely_alternating"


def mobius_inverse(f: SetFunction) -> DiscreteMeasure:
    """Weights ``r`` with ``f(x) = Σ_{z <= x} r(z)``.

    ``r(x)`` is the meet difference of ``f`` at ``x`` along the lower
    covers of ``x``; at the bottom it is ``f(bottom)``.
    """
    L = f.lattice
    r = {}
    for x in L.elements:
        covers = L.lower_covers(x)
        r[x] = nabla(f, covers, x) if covers else f(x)
    # cheap exact self-check of the defining identity
    leq = L.leq_matrix
    rv = [r[x] for x in L.elements]
    for j, x in enumerate(L.elements):
        s = sum((rv[i] for i in np.flatnonzero(leq[:, j])), Fraction(0))
        if s != f(x):
            raise NonUniqueSolution(f"inversion does not reproduce f at {x!r}")
    return DiscreteMeasure(L.elements, r, signed=True, carrier_kind="elements")


def pairwise_join_meet(L: FiniteLattice, B: tuple):
    """``⋀`` over pairs ``{x, y} ⊆ B`` of ``x ∨ y``."""
    return L.meet_all(L.join(x, y) for i, x in enumerate(B) for y in B[i + 1:])


def is_k_valuation(f: SetFunction, k: int) -> ClassReport:
    """Vanishing of every order ``k+1`` antichain difference at its pairwise-join meet."""
    if k < 1:
        raise ValueError("k must be at least 1")
    pre = classify(f, required_class(f))
    if not pre.holds:
        raise PrerequisiteClassFailed(f"{pre.class_queried} fails", report=pre)
    L = f.lattice
    idx = [L.index(x) for x in L.elements]
    checked = 0
    for chain in antichain_indices(L.leq_matrix, idx, k + 1):
        if len(chain) != k + 1:
            continue
        B = tuple(L.elements[i] for i in chain)
        o = pairwise_join_meet(L, B)
        v = nabla(f, B, o)
        checked += 1
        if v != 0:
            return ClassReport(f"k_valuation({k})", False, (B, o, v), checked=checked)
    return ClassReport(f"k_valuation({k})", True, None, checked=checked)


def is_valuation(f: SetFunction) -> ClassReport:
    """Modular identity ``f(x) + f(y) = f(x∧y) + f(x∨y)`` over all pairs."""
    L = f.lattice
    vals = f.vector()
    M, J = L.meet_table, L.join_table
    n = len(L)
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            if vals[i] + vals[j] != vals[M[i, j]] + vals[J[i, j]]:
                e = L.elements
                value = vals[J[i, j]] - vals[i] - vals[j] + vals[M[i, j]]
                return ClassReport("valuation", False, ((e[i], e[j]), e[J[i, j]], value), checked=checked)
    return ClassReport("valuation", True, None, checked=checked)


def multiplicative_defect(f: SetFunction, x, y) -> Fraction:
    L = f.lattice
    return f(x) * f(y) - f(L.meet(x, y)) * f(L.join(x, y))


def is_exponential_valuation(f: SetFunction) -> ClassReport:
    """Multiplicative identity ``f(x)f(y) = f(x∧y)f(x∨y)`` over all pairs.

    The witness is ``((x, y), x∨y, f(x)f(y) - f(x∧y)f(x∨y))``.
    """
    if f.direction != INC:
        raise UnsupportedClassForDirection("exponential valuations are increasing functions")
    L = f.lattice
    vals = f.vector()
    positive = all(v > 0 for v in vals)
    M, J = L.meet_table, L.join_table
    n = len(L)
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            d = vals[i] * vals[j] - vals[M[i, j]] * vals[J[i, j]]
            if d != 0:
                e = L.elements
                return ClassReport("exponential_valuation", False, ((e[i], e[j]), e[J[i, j]], d), positive, checked)
    return ClassReport("exponential_valuation", True, None, positive, checked)


# ---------------------------------------------------------------------------
# infinite divisibility


@dataclass
class LevyReport:
    divisible: bool | None  # None means indeterminate
    support_is_filter: bool
    verdict: str  # divisible | not_divisible | indeterminate
    exponent: dict | None = None  # element -> mpmath value of -log f on the support
    witness: tuple | None = None
    failing_n: int | None = None
    n_checked: int = 0
    exponent_alternating: bool | None = None
    max_precision_used: int = 0
    notes: list = field(default_factory=list)


def _nth_root_exact(q: Fraction, n: int) -> Fraction | None:
    """Rational n-th root of ``q >= 0`` if it exists."""

    def iroot(a: int):
        if a < 0:
            return None
        r = round(a ** (1.0 / n)) if a < 2**1000 else _int_root(a, n)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**n == a:
                return c
        c = _int_root(a, n)
        return c if c**n == a else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _int_root(a: int, n: int) -> int:
    if a < 2:
        return a
    x = 1 << ((a.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def root_sum_is_zero(terms: Mapping, values: Mapping, n: int) -> bool:
    """Exact test of ``Σ c_y · values[y]^(1/n) == 0`` for rational values.

    n-th roots of positive rationals in distinct classes modulo rational
    n-th powers are linearly independent over the rationals, so the sum
    vanishes iff each class sums to zero.
    """
    reps: list[tuple[Fraction, Fraction]] = []  # (representative value, accumulated coefficient)
    for y, c in terms.items():
        v = values[y]
        if v == 0 or c == 0:
            continue
        for k, (rv, acc) in enumerate(reps):
            ratio = _nth_root_exact(v / rv, n)
            if ratio is not None:
                reps[k] = (rv, acc + c * ratio)
                break
        else:
            reps.append((v, Fraction(c)))
    return all(acc == 0 for _, acc in reps)


def _iv_values(ctx, vals: list, n: int):
    out = []
    for v in vals:
        if v == 0:
            out.append(ctx.mpf(0))
        elif v == 1 or n == 1:
            out.append(ctx.mpf(v.numerator) / v.denominator)
        else:
            out.append((ctx.mpf(v.numerator) / v.denominator) ** (ctx.mpf(1) / n))
    return out


def _root_sign(f: SetFunction, terms: dict, n: int, prec: int, max_prec: int):
    """Sign of ``∇ f^(1/n)`` for one term multiset: (+1|0|-1|None, precision used)."""
    p = min(prec, max_prec)
    while p <= max_prec:
        ctx = interval_context(p)
        items = list(terms.items())
        roots = _iv_values(ctx, [f(y) for y, _ in items], n)
        s = ctx.mpf(0)
        for (_, c), r in zip(items, roots):
            s += c * r
        if s.a > 0:
            return 1, p
        if s.b < 0:
            return -1, p
        p *= 2
    if root_sum_is_zero(terms, f.values, n):
        return 0, max_prec
    return None, max_prec


def levy_divisibility(f: SetFunction, n_max: int = 16, *, prec: int = 128, max_prec: int = 512) -> LevyReport:
    """Infinite divisibility test for an increasing completely monotone ``f``.

    The positive set of ``f`` must be a filter.  Then ``f^(1/n)`` is
    checked for complete monotonicity for ``n = 1..n_max`` with interval
    arithmetic, falling back to an exact zero test when the interval
    straddles zero.  As an independent exact check the exponent
    ``-log f`` is tested for complete alternation on the support through
    the equivalent rational inequality ``Π f(y)^c_y >= 1``.
    """
    if f.direction != INC:
        raise UnsupportedClassForDirection("infinite divisibility is tested on increasing functions")
    L = f.lattice
    e = L.elements
    V = [x for x in e if f(x) > 0]
    Vset = set(V)
    for i, x in enumerate(V):
        for y in V[i + 1:]:
            if L.meet(x, y) not in Vset:
                return LevyReport(False, False, "not_divisible", witness=(x, y))

    rep = LevyReport(True, True, "divisible")
    ctx_prec = prec
    first = classify(f, "completely_monotone")
    rep.n_checked = 1
    if not first.holds:
        rep.divisible, rep.verdict, rep.witness, rep.failing_n = False, "not_divisible", first.witness, 1
        return rep

    cases = _difference_cases(f)
    indeterminate = None
    for n in range(2, n_max + 1):
        hit = _check_root(f, n, cases, prec, max_prec)
        rep.n_checked = n
        rep.max_precision_used = max(rep.max_precision_used, hit[2])
        if hit[0] == "fail":
            rep.divisible, rep.verdict, rep.witness, rep.failing_n = False, "not_divisible", hit[1], n
            break
        if hit[0] == "indeterminate" and indeterminate is None:
            indeterminate = (n, hit[1])
    if rep.verdict == "divisible" and indeterminate is not None:
        rep.divisible, rep.verdict, rep.failing_n, rep.witness = None, "indeterminate", *indeterminate

    rep.exponent_alternating = _exponent_alternating(f, V)
    with mpmath.workprec(ctx_prec):
        rep.exponent = {x: -mpmath.log(mpmath.mpf(f(x).numerator) / f(x).denominator) for x in V}
    return rep


def _difference_cases(f: SetFunction) -> list:
    """Every (A, x, terms) with A a nonempty antichain and no member of A above x."""
    L = f.lattice
    e = L.elements
    idx = [L.index(x) for x in e if x != L.top]
    out = []
    for chain in antichain_indices(L.leq_matrix, idx, len(idx)):
        A = tuple(e[i] for i in chain)
        for xi, x in enumerate(e):
            if f(x) == 0 or any(L.leq_matrix[xi, c] for c in chain):
                continue
            out.append((A, x, difference_terms(L.meet, A, x)))
    return out


def _check_root(f: SetFunction, n: int, cases: list, prec: int, max_prec: int):
    """First case where ``∇_A f^(1/n)(x) < 0``; returns (status, witness, precision)."""
    ctx = interval_context(prec)
    e = f.lattice.elements
    roots = dict(zip(e, _iv_values(ctx, f.vector(), n)))
    used = prec
    undecided = None
    for A, x, terms in cases:
        s = ctx.mpf(0)
        for y, c in terms.items():
            s += c * roots[y]
        if s.a >= 0:
            continue
        if s.b < 0:
            return "fail", (A, x), used
        sgn, p = _root_sign(f, terms, n, prec * 2, max_prec)
        used = max(used, p)
        if sgn == -1:
            return "fail", (A, x), used
        if sgn is None and undecided is None:
            undecided = (A, x)
    if undecided is not None:
        return "indeterminate", undecided, used
    return "ok", None, used


def _exponent_alternating(f: SetFunction, V: list) -> bool:
    """Exact check that ``-log f`` is completely alternating on the filter ``V``."""
    L = f.lattice
    if len(V) <= 1:
        return True
    sub = L.restrict(V)
    idx = [i for i, x in enumerate(sub.elements) if x != sub.top]
    for chain in antichain_indices(sub.leq_matrix, idx, len(idx)):
        A = [sub.elements[i] for i in chain]
        for x in sub.elements:
            if any(sub.leq(x, a) for a in A):
                continue
            terms = difference_terms(sub.meet, A, x)
            # Σ c_y log f(y) >= 0  <=>  Π f(y)^c_y >= 1
            num, den = Fraction(1), Fraction(1)
            for y, c in terms.items():
                if c > 0:
                    num *= f(y) ** c
                else:
                    den *= f(y) ** (-c)
            if num < den:
                return False
    return True
