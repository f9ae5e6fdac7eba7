"""Exact measure representations of monotone set functions on finite lattices.

Every filter of a finite lattice is principal, so a filter is named by its
generator ``z`` (standing for ``⟨z⟩*``).  On a finite space model the
filter generated by a compact ``Z`` is the family of compacts missing the
closed set ``R ∖ Z``, and measures can be reported on closed sets instead.

Four modes are supported:

``monotone``
    ``f(x) = μ{V : x ∈ V}`` over all filters, including the whole lattice.
``alternating``
    ``f(x) = λ{V : x ∉ V}`` over filters other than the whole lattice.
``containment``
    ``f(x) = Λ{z : z >= x, z != top}``.
``vee_alternating``
    ``f(x) = Λ{z : z not >= x, z != top}`` where ``z`` may also be an
    adjoined bottom below every element.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence


from .exceptions import ClassificationFailed, InvalidMeasure, NonUniqueSolution, NotDistributive, SizeExceeded
from .lattice import FiniteLattice, antichain_indices, boundary_antichain, irreducibles, is_distributive, powerset_lattice
from .measure import DiscreteMeasure
from .setfun import DEC, INC, SetFunction, classify, mobius_inverse, nabla, pairwise_join_meet

MODES = ("monotone", "alternating", "containment", "vee_alternating")
_MODE_CLASS = {
    "monotone": (INC, "completely_monotone"),
    "alternating": (DEC, "completely_alternating"),
    "containment": (DEC, "completely_vee_monotone"),
    "vee_alternating": (INC, "completely_vee_alternating"),
}
MAX_GROUND = 24


class _AdjoinedBottom:
    """Sentinel carrier id for the bottom adjoined below a lattice."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "ADJOINED_BOTTOM"

    def __reduce__(self):
        return (_AdjoinedBottom, ())


ADJOINED_BOTTOM = _AdjoinedBottom()


class FiniteSpaceModel:
    """Subsets of a finite ground set ``R``.

    Compacts are ordered by reverse inclusion, so the top is the empty set,
    the meet is the union and the join the intersection.
    """

    def __init__(self, ground: Sequence[Hashable]):
        ground = tuple(dict.fromkeys(ground))
        if len(ground) > MAX_GROUND:
            raise SizeExceeded(f"ground sets above {MAX_GROUND} points are not enumerated")
        self.ground = ground
        self.full = frozenset(ground)
        self._lattice = None

    def __repr__(self) -> str:
        return f"FiniteSpaceModel({list(self.ground)!r})"

    @property
    def compacts(self) -> FiniteLattice:
        if self._lattice is None:
            self._lattice = powerset_lattice(self.ground, reverse=True)
        return self._lattice

    def subsets(self) -> tuple:
        return self.compacts.elements

    def closed_sets(self) -> tuple:
        return self.compacts.elements

    def nonempty_closed_sets(self) -> tuple:
        return tuple(c for c in self.closed_sets() if c)

    def closed_set_of_filter(self, z) -> frozenset:
        """The closed set missed by every compact in ``⟨z⟩*``."""
        return self.full - frozenset(z)

    def filter_of_closed_set(self, c) -> frozenset:
        return self.full - frozenset(c)

    def mask(self, q) -> int:
        return sum(1 << i for i, r in enumerate(self.ground) if r in q)

    def singletons(self) -> tuple:
        return tuple(frozenset([r]) for r in self.ground)


def enumerate_filters(L: FiniteLattice) -> dict:
    """Every filter ``⟨z⟩*`` keyed by its generator, in element order."""
    return {z: L.up(z) for z in L.elements}


def _dual_mobius(L: FiniteLattice, values: dict) -> dict:
    """Weights ``r`` with ``values[x] = Σ_{z >= x} r(z)``."""
    D = L.dual()
    g = SetFunction(D, values, INC, normalize=False)
    return dict(mobius_inverse(g).weights)


def choquet_represent(f: SetFunction, mode: str, model: FiniteSpaceModel | None = None) -> DiscreteMeasure:
    """The unique nonnegative measure reproducing ``f`` through ``mode``.

    With a :class:`FiniteSpaceModel` the filter-carried modes (monotone and
    alternating) report their weights on closed sets.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    direction, cls = _MODE_CLASS[mode]
    if f.direction != direction:
        raise ClassificationFailed(f"mode {mode} needs a{'n increasing' if direction == INC else ' decreasing'} function")
    rep = classify(f, cls)
    if not rep.holds:
        raise ClassificationFailed(f"{cls} fails at {rep.witness}", rep)
    L = f.lattice
    if mode == "monotone":
        weights = dict(mobius_inverse(f).weights)
        carrier, kind = list(L.elements), "filters"
    elif mode == "alternating":
        base = f(L.bottom)
        g = SetFunction(L, {x: base - f(x) for x in L.elements}, INC, normalize=False)
        r = mobius_inverse(g).weights
        if r[L.bottom] != 0:
            raise NonUniqueSolution("alternating inversion put mass on the whole lattice")
        carrier = [z for z in L.elements if z != L.bottom]
        weights = {z: r[z] for z in carrier}
        kind = "filters"
    elif mode == "containment":
        r = _dual_mobius(L, dict(f.values))
        if r[L.top] != 0:
            raise NonUniqueSolution("containment inversion put mass on the top")
        carrier = [z for z in L.elements if z != L.top]
        weights = {z: r[z] for z in carrier}
        kind = "elements"
    else:
        top = f(L.top)
        r = _dual_mobius(L, {x: top - f(x) for x in L.elements})
        if r[L.top] != 0:
            raise NonUniqueSolution("inversion put mass on the top")
        carrier = [z for z in L.elements if z != L.top] + [ADJOINED_BOTTOM]
        weights = {z: r[z] for z in carrier if z is not ADJOINED_BOTTOM}
        weights[ADJOINED_BOTTOM] = f(L.bottom)
        kind = "elements"
    if any(v < 0 for v in weights.values()):
        raise NonUniqueSolution(f"negative weight after a passing {cls} check")
    if model is not None and kind == "filters":
        carrier = [model.closed_set_of_filter(z) for z in carrier]
        weights = {model.closed_set_of_filter(z): v for z, v in weights.items()}
        kind = "closed_sets"
    m = DiscreteMeasure(carrier, weights, carrier_kind=kind)
    back = forward_values(m, L, mode, model)
    if back != f.values:
        raise NonUniqueSolution("representation does not reproduce the function")
    return m


def _filter_weights(m: DiscreteMeasure, L: FiniteLattice, model) -> dict:
    if m.carrier_kind == "closed_sets":
        if model is None:
            raise InvalidMeasure("closed-set measures need a FiniteSpaceModel")
        return {model.filter_of_closed_set(c): v for c, v in m.weights.items()}
    return dict(m.weights)


def forward_values(m: DiscreteMeasure, L: FiniteLattice, mode: str, model: FiniteSpaceModel | None = None) -> dict:
    """Evaluate the mode identity for a measure: element -> exact value."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    out = {}
    if mode in ("monotone", "alternating"):
        w = _filter_weights(m, L, model)
        for z in w:
            if z not in L:
                raise InvalidMeasure(f"carrier id {z!r} is not a filter generator")
        if mode == "alternating" and w.get(L.bottom, 0) != 0:
            raise InvalidMeasure("alternating measures live on filters other than the whole lattice")
        for x in L.elements:
            inside = sum((v for z, v in w.items() if L.leq(z, x)), Fraction(0))
            out[x] = inside if mode == "monotone" else sum(w.values(), Fraction(0)) - inside
        return out
    w = dict(m.weights)
    extra = w.pop(ADJOINED_BOTTOM, Fraction(0))
    if mode == "containment" and extra:
        raise InvalidMeasure("containment measures have no adjoined bottom")
    if w.get(L.top, 0) != 0:
        raise InvalidMeasure("no mass may sit on the top")
    for x in L.elements:
        above = sum((v for z, v in w.items() if L.leq(x, z)), Fraction(0))
        if mode == "containment":
            out[x] = above
        else:
            out[x] = extra + sum(w.values(), Fraction(0)) - above
    return out


def forward_evaluate(m: DiscreteMeasure, L: FiniteLattice, mode: str, model: FiniteSpaceModel | None = None) -> SetFunction:
    direction = _MODE_CLASS[mode][0]
    return SetFunction(L, forward_values(m, L, mode, model), direction, normalize=False)


def partition_classes(F: FiniteLattice) -> dict:
    """For each ``x``, the filters containing ``x`` and missing its boundary antichain."""
    if not is_distributive(F):
        raise NotDistributive("the partition needs a distributive lattice")
    out = {}
    for x in F.elements:
        B = boundary_antichain(F, x)
        out[x] = frozenset(
            z for z in F.elements if F.leq(z, x) and not any(F.leq(z, b) for b in B)
        )
    return out


def partition_class_of(F: FiniteLattice, z) -> Hashable:
    """Class of the filter ``⟨z⟩*``: the meet of the irreducibles above ``z``."""
    J = irreducibles(F)
    return F.meet_all(j for j in J if F.leq(z, j))


def support_order(lam: DiscreteMeasure, model: FiniteSpaceModel | None = None) -> int:
    """Largest size of a closed set carrying positive weight (0 for the zero measure)."""
    if lam.carrier_kind == "closed_sets":
        sets = lam.support()
    elif lam.carrier_kind == "filters":
        if model is None:
            raise InvalidMeasure("filter-carried measures need a FiniteSpaceModel")
        sets = [model.closed_set_of_filter(z) for z in lam.support()]
    elif lam.carrier_kind == "grains":
        sets = lam.support()
    else:
        raise InvalidMeasure(f"support order is undefined for carrier kind {lam.carrier_kind!r}")
    if any(v < 0 for v in lam.weights.values()):
        raise InvalidMeasure("support order needs a nonnegative measure")
    return max((len(s) for s in sets), default=0)


def vapprox_bound(f: SetFunction, F: FiniteLattice, k: int) -> dict:
    """Lower bound on the mass of sets of size ``<= k`` and the matching upper defect.

    ``lower`` sums the boundary-antichain differences of ``f`` over the
    elements of ``F`` whose boundary has at most ``k`` members (the empty
    difference being ``f`` itself).  ``upper_defect`` sums the order
    ``k+1`` differences over antichains of the primes of ``F``, each taken
    at the meet of pairwise joins.
    """
    if f.direction != INC:
        raise ClassificationFailed("the bound is stated for increasing completely monotone functions")
    lower = Fraction(0)
    for x in F.elements:
        B = boundary_antichain(F, x)
        if len(B) <= k:
            lower += f(x) if not B else nabla(f, sorted(B, key=F.index), x)
    primes = [j for j in irreducibles(F) if j != F.top]
    idx = sorted(F.index(p) for p in primes)
    defect = Fraction(0)
    for chain in antichain_indices(F.leq_matrix, idx, k + 1):
        if len(chain) != k + 1:
            continue
        B = tuple(F.elements[i] for i in chain)
        defect += nabla(f, B, pairwise_join_meet(F, B))
    return {"lower": lower, "upper_defect": defect}
