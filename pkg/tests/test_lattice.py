import itertools

import pytest
from hypothesis import given, strategies as st

from choquet import (
    NoTop,
    NotALattice,
    NotAPartialOrder,
    NotDistributive,
    SizeExceeded,
    antichains_of,
    boundary_antichain,
    build_lattice,
    powerset_lattice,
    structure_report,
    sublattice_generated,
)
from choquet.lattice import irreducibles, primes
from helpers import S, b2, chain, lattice_from_seed, m3, n5

seeds = st.integers(0, 10**6)


def test_chain_tables():
    L = chain(3)
    assert L.top == 2 and L.bottom == 0
    for x, y in itertools.product(range(3), repeat=2):
        assert L.meet(x, y) == min(x, y)
        assert L.join(x, y) == max(x, y)


def test_b2_tables():
    L = b2()
    for x, y in itertools.product(L.elements, repeat=2):
        assert L.meet(x, y) == x & y
        assert L.join(x, y) == x | y


def test_transitive_closure_applied():
    L = build_lattice("abc", [("a", "b"), ("b", "c")])
    assert L.leq("a", "c")


def test_no_top():
    with pytest.raises(NoTop):
        build_lattice(["a", "b"], [])


def test_cycle_rejected():
    with pytest.raises(NotAPartialOrder):
        build_lattice(["a", "b"], [("a", "b"), ("b", "a")])


def test_missing_join_reported_with_pair():
    # two maximal-below elements under a common top: x, y have upper bounds p, q but no least one
    els = ["0", "x", "y", "p", "q", "1"]
    rel = [("0", "x"), ("0", "y"), ("x", "p"), ("y", "p"), ("x", "q"), ("y", "q"), ("p", "1"), ("q", "1")]
    with pytest.raises(NotALattice) as e:
        build_lattice(els, rel)
    assert set(e.value.pair) == {"x", "y"}


def test_size_cap():
    with pytest.raises(SizeExceeded):
        build_lattice(list(range(5)), [], max_size=4)


def test_structure_b2():
    rep = structure_report(b2())
    assert rep.is_distributive
    assert rep.irreducibles == {S("a"), S("b"), S("ab")}
    assert rep.primes == {S("a"), S("b")}
    assert not rep.bottom_irreducible


def test_structure_m3_witness():
    L = m3()
    rep = structure_report(L)
    assert not rep.is_distributive
    x, (y, z) = rep.distributivity_witness
    assert L.meet(x, L.join(y, z)) != L.join(L.meet(x, y), L.meet(x, z))
    assert rep.distributivity_witness == ("x", ("y", "z"))


def test_structure_n5_not_distributive():
    rep = structure_report(n5())
    assert not rep.is_distributive and rep.distributivity_witness is not None


def test_structure_chain():
    rep = structure_report(chain(3))
    assert rep.is_distributive
    assert rep.irreducibles == {0, 1, 2}
    assert rep.primes == {0, 1}
    assert rep.bottom_irreducible


def test_boundary_antichain_examples():
    L = b2()
    assert boundary_antichain(L, S("ab")) == {S("a"), S("b")}
    assert boundary_antichain(L, S()) == frozenset()
    assert boundary_antichain(chain(3), 1) == {0}


def test_sublattice_examples():
    B3 = powerset_lattice("abc")
    F = sublattice_generated(B3, [S("a"), S("b")])
    assert set(F.elements) == {S(), S("a"), S("b"), S("ab")}
    assert set(sublattice_generated(B3, [S("abc")]).elements) == {S("abc")}
    assert set(sublattice_generated(B3, B3.elements).elements) == set(B3.elements)


def test_sublattice_needs_distributive():
    with pytest.raises(NotDistributive):
        sublattice_generated(m3(), ["x"])


def test_antichain_examples():
    assert list(antichains_of(b2(), [S("a"), S("b")], 2)) == [(S("a"),), (S("a"), S("b")), (S("b"),)]
    assert list(antichains_of(chain(3), [0, 1], 2)) == [(0,), (1,)]
    B3 = powerset_lattice("abc")
    assert len(list(antichains_of(B3, [S(c) for c in "abc"], 3))) == 7


def test_reverse_powerset_orientation():
    K = powerset_lattice("ab", reverse=True)
    assert K.top == S() and K.bottom == S("ab")
    assert K.meet(S("a"), S("b")) == S("ab")
    assert K.join(S("a"), S("b")) == S()
    # primes of the compacts are the singletons
    assert primes(K) == {S("a"), S("b")}


# ---------------------------------------------------------------------------
# properties


@given(seeds)
def test_meet_join_are_glb_lub(seed):
    L = lattice_from_seed(seed)
    E = L.elements
    for x, y in itertools.product(E, repeat=2):
        m, j = L.meet(x, y), L.join(x, y)
        assert L.leq(m, x) and L.leq(m, y) and L.leq(x, j) and L.leq(y, j)
        for z in E:
            if L.leq(z, x) and L.leq(z, y):
                assert L.leq(z, m)
            if L.leq(x, z) and L.leq(y, z):
                assert L.leq(j, z)


@given(seeds)
def test_boundary_antichain_generates_complement_of_filter(seed):
    L = lattice_from_seed(seed)
    for x in L.elements:
        B = boundary_antichain(L, x)
        assert all(not L.comparable(a, b) for a, b in itertools.combinations(B, 2))
        if x == L.bottom:
            assert B == frozenset()
            continue
        assert L.lower_set(B) == {z for z in L.elements if not L.leq(x, z)}


@given(seeds)
def test_primes_are_irreducibles_without_top(seed):
    L = lattice_from_seed(seed)
    assert primes(L) == irreducibles(L) - {L.top}


@given(seeds)
def test_fundamental_theorem(seed):
    L = lattice_from_seed(seed)
    J = irreducibles(L)
    image = {x: frozenset(j for j in J if L.leq(x, j)) for x in L.elements}
    uppers = set()
    for r in range(1, len(J) + 1):
        for U in itertools.combinations(J, r):
            U = frozenset(U)
            if all(k in U for j in U for k in J if L.leq(j, k)):
                uppers.add(U)
    assert set(image.values()) == uppers
    assert len(set(image.values())) == len(L)
    for x, y in itertools.product(L.elements, repeat=2):
        assert L.leq(x, y) == (image[x] >= image[y])


@given(seeds, st.data())
def test_generated_sublattice_is_smallest(seed, data):
    L = lattice_from_seed(seed)
    G = data.draw(st.lists(st.sampled_from(L.elements), min_size=1, max_size=3))
    F = set(sublattice_generated(L, G).elements)
    # brute force: smallest subset containing G closed under both operations
    closed = set(G)
    while True:
        new = {L.meet(a, b) for a in closed for b in closed} | {L.join(a, b) for a in closed for b in closed}
        if new <= closed:
            break
        closed |= new
    assert F == closed


@given(seeds, st.integers(1, 4))
def test_antichains_match_brute_force(seed, k):
    L = lattice_from_seed(seed)
    got = list(antichains_of(L, L.elements, k))
    want = [
        B
        for r in range(1, k + 1)
        for B in itertools.combinations(L.elements, r)
        if all(not L.comparable(a, b) for a, b in itertools.combinations(B, 2))
    ]
    assert sorted(map(frozenset, got), key=sorted_key) == sorted(map(frozenset, want), key=sorted_key)
    assert got == list(antichains_of(L, L.elements, k))  # deterministic


def sorted_key(B):
    return sorted(map(repr, B))


@given(seeds)
def test_dual_swaps_orientation(seed):
    L = lattice_from_seed(seed)
    D = L.dual()
    assert D.top == L.bottom and D.bottom == L.top
    for x, y in itertools.product(L.elements, repeat=2):
        assert D.meet(x, y) == L.join(x, y)
