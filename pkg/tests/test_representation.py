import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from choquet import (
    ADJOINED_BOTTOM,
    ClassificationFailed,
    DiscreteMeasure,
    FiniteSpaceModel,
    InvalidMeasure,
    NotDistributive,
    SetFunction,
    choquet_represent,
    enumerate_filters,
    forward_evaluate,
    is_k_valuation,
    partition_classes,
    support_order,
    vapprox_bound,
)
from choquet._oracle import mode_system, solve_exact
from choquet.representation import MODES, partition_class_of
from helpers import S, avoidance, b2, chain, lattice_from_seed, m3

F = Fraction
seeds = st.integers(0, 10**6)


def random_law(rng, model, max_atoms=4):
    sets = model.closed_sets()
    law = {}
    for _ in range(rng.randint(1, max_atoms)):
        c = rng.choice(sets)
        law[c] = law.get(c, F(0)) + rng.randint(1, 5)
    total = sum(law.values())
    return {c: w / total for c, w in law.items()}


def random_carrier_measure(rng, L, mode):
    if mode == "monotone":
        carrier, kind = list(L.elements), "filters"
    elif mode == "alternating":
        carrier, kind = [z for z in L.elements if z != L.bottom], "filters"
    elif mode == "containment":
        carrier, kind = [z for z in L.elements if z != L.top], "elements"
    else:
        carrier, kind = [z for z in L.elements if z != L.top] + [ADJOINED_BOTTOM], "elements"
    w = {c: F(rng.randint(0, 3), rng.randint(1, 3)) for c in carrier}
    if mode == "monotone" and not any(w.values()):
        w[L.top] = F(1)
    return DiscreteMeasure(carrier, w, carrier_kind=kind)


# ---------------------------------------------------------------------------
# filters


def test_enumerate_filters():
    assert enumerate_filters(chain(3)) == {0: {0, 1, 2}, 1: {1, 2}, 2: {2}}
    assert len(enumerate_filters(b2())) == 4
    m = FiniteSpaceModel("a")
    closed = {m.closed_set_of_filter(z) for z in enumerate_filters(m.compacts)}
    assert closed == {S(), S("a")}


# ---------------------------------------------------------------------------
# representations


def test_alternating_indicator():
    m = FiniteSpaceModel("ab")
    K = m.compacts
    Phi = SetFunction(K, {q: int("a" in q) for q in K.elements}, "dec")
    lam = choquet_represent(Phi, "alternating", m)
    assert lam.support_weights() == {S("a"): 1}
    # oracle: exact solve over the three nonempty closed sets
    carrier = [m.filter_of_closed_set(c) for c in m.nonempty_closed_sets()]
    sol, rank = solve_exact(mode_system(K, "alternating", carrier), [Phi(q) for q in K.elements])
    assert rank == 3
    assert dict(zip(m.nonempty_closed_sets(), sol)) == {S("a"): 1, S("b"): 0, S("ab"): 0}


def test_monotone_uniform_singleton():
    m = FiniteSpaceModel("ab")
    phi = avoidance(m, {"a": F(1, 2), "b": F(1, 2)})
    assert phi(S()) == 1 and phi(S("a")) == F(1, 2) and phi(S("ab")) == 0
    mu = choquet_represent(phi, "monotone", m)
    assert mu.support_weights() == {S("a"): F(1, 2), S("b"): F(1, 2)}
    assert mu.carrier_kind == "closed_sets"


def test_containment_recovers_measure():
    K = FiniteSpaceModel("ab").compacts
    Lam = DiscreteMeasure([S("a"), S("ab")], {S("a"): 1, S("ab"): 1}, carrier_kind="elements")
    Phi = forward_evaluate(Lam, K, "containment")
    assert Phi(S()) == 0 and Phi(S("a")) == 1 and Phi(S("b")) == 0 and Phi(S("ab")) == 2
    assert choquet_represent(Phi, "containment") == Lam


def test_classification_failure_carries_witness():
    L = b2()
    bad = SetFunction(L, {S(): 0, S("a"): 1, S("b"): 1, S("ab"): 1})
    with pytest.raises(ClassificationFailed) as e:
        choquet_represent(bad, "monotone")
    assert e.value.report.witness[2] == -1
    with pytest.raises(ValueError):
        choquet_represent(bad, "sideways")


@given(seeds, st.sampled_from(MODES))
def test_round_trip_random_lattice(seed, mode):
    rng = random.Random(seed)
    L = lattice_from_seed(seed)
    m = random_carrier_measure(rng, L, mode)
    f = forward_evaluate(m, L, mode)
    back = choquet_represent(f, mode)
    assert back == m


@given(seeds, st.sampled_from(MODES))
def test_round_trip_matches_linear_solve(seed, mode):
    rng = random.Random(seed)
    L = lattice_from_seed(seed, max_size=8)
    m = random_carrier_measure(rng, L, mode)
    f = forward_evaluate(m, L, mode)
    got = choquet_represent(f, mode)
    carrier = [None if c is ADJOINED_BOTTOM else c for c in m.carrier]
    sol, rank = solve_exact(mode_system(L, mode, carrier), [f(x) for x in L.elements])
    assert rank == len(carrier)
    assert {c: v for c, v in zip(m.carrier, sol) if v} == got.support_weights()


@given(seeds, st.integers(1, 4))
def test_round_trip_space_model(seed, n):
    rng = random.Random(seed)
    model = FiniteSpaceModel("abcde"[:n])
    law = random_law(rng, model)
    phi = avoidance(model, law)
    mu = choquet_represent(phi, "monotone", model)
    assert mu.support_weights() == {c: w for c, w in law.items() if w}


@given(seeds)
def test_mode_consistency(seed):
    # the alternating measure of 1 - φ is the monotone measure of φ without its top-filter atom
    rng = random.Random(seed)
    L = lattice_from_seed(seed)
    m = random_carrier_measure(rng, L, "monotone")
    phi = forward_evaluate(m, L, "monotone")
    phi = SetFunction(L, phi.values)
    Phi = SetFunction(L, {x: 1 - phi(x) for x in L.elements}, "dec")
    mono = choquet_represent(phi, "monotone").support_weights()
    alt = choquet_represent(Phi, "alternating").support_weights()
    mono.pop(L.bottom, None)
    assert alt == mono


@given(seeds, st.integers(1, 4), st.integers(1, 3))
def test_k_valuation_iff_support(seed, n, k):
    rng = random.Random(seed)
    model = FiniteSpaceModel("abcd"[:n])
    law = random_law(rng, model)
    law.pop(S(), None)
    if not law:
        law = {S("a"): F(1)}
    Phi = SetFunction(model.compacts, {q: sum((w for c, w in law.items() if c & q), F(0)) for q in model.compacts.elements}, "dec")
    lam = choquet_represent(Phi, "alternating", model)
    assert lam.support_weights() == law
    assert is_k_valuation(Phi, k).holds == (support_order(lam) <= k)


# ---------------------------------------------------------------------------
# partition


def test_partition_examples():
    one = chain(1)
    assert partition_classes(one) == {0: frozenset({0})}
    C = partition_classes(chain(3))
    assert C == {0: {0}, 1: {1}, 2: {2}}
    B = partition_classes(b2())
    assert sorted(map(len, B.values())) == [1, 1, 1, 1]
    with pytest.raises(NotDistributive):
        partition_classes(m3())


@given(seeds)
def test_partition_property(seed):
    L = lattice_from_seed(seed)
    classes = partition_classes(L)
    seen = []
    for x, members in classes.items():
        seen.extend(members)
        for z in members:
            assert partition_class_of(L, z) == x
    assert sorted(map(L.index, seen)) == list(range(len(L)))


# ---------------------------------------------------------------------------
# support order and the approximation bound


def test_support_order_examples():
    model = FiniteSpaceModel("ab")
    assert support_order(DiscreteMeasure([S("ab")], {S("ab"): 1}, carrier_kind="closed_sets")) == 2
    assert support_order(DiscreteMeasure([S("a"), S("b")], {S("a"): 1, S("b"): 2}, carrier_kind="closed_sets")) == 1
    assert support_order(DiscreteMeasure([S("a")], {S("a"): 0}, carrier_kind="closed_sets")) == 0
    with pytest.raises(InvalidMeasure):
        support_order(DiscreteMeasure([S("a")], {S("a"): 1}, carrier_kind="filters"))
    assert support_order(DiscreteMeasure([S("b")], {S("b"): 1}, carrier_kind="filters"), model) == 1


def test_vapprox_examples():
    model = FiniteSpaceModel("ab")
    K = model.compacts
    one_val = avoidance(model, {"a": F(1, 2), "b": F(1, 2)})
    assert vapprox_bound(one_val, K, 1) == {"lower": 1, "upper_defect": 0}
    solid = avoidance(model, {"ab": F(1)})
    got = vapprox_bound(solid, K, 1)
    assert got["lower"] == 0 and got["upper_defect"] == 1


@given(seeds, st.integers(1, 4), st.integers(0, 3))
def test_defect_bound(seed, n, k):
    rng = random.Random(seed)
    model = FiniteSpaceModel("abcd"[:n])
    law = random_law(rng, model)
    phi = avoidance(model, law)
    if k == 0:
        k = 1
    big = sum((w for c, w in law.items() if len(c) > k), F(0))
    b = vapprox_bound(phi, model.compacts, k)
    # on the full lattice the lower side is exact
    assert 1 - b["lower"] == big
    assert big <= b["upper_defect"]
