import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from choquet import (
    CompoundPoissonAvoidance,
    Covering,
    DiscreteMeasure,
    ExpSum,
    FiniteLawAvoidance,
    IntervalUnion,
    MeasureModel,
    PoissonIntervalAvoidance,
    SolidGrainAvoidance,
    lfv_bound_sum,
    lfv_certificate,
    lfv_diagnostic,
    lfv_lhs,
    opening_of,
    validate_cover,
)
from choquet.exceptions import EvaluatorNotExact, NotAnAntichain
from choquet.intervals import iu_intersect, iu_union, iu_union_all
from choquet.lfv import (
    EstimatedAvoidance,
    _antichains,
    _closed_families,
    dyadic_ladder,
    finite_covers,
    poisson_singletons,
)
from choquet.random_sets import CompoundSetSampler
from choquet.setfun import difference_terms
from helpers import S

F = Fraction
I = IntervalUnion.of
W01 = I((0, 1))
THIRDS = Covering(W01, (I((0, F(2, 3))), I((F(1, 3), 1)), I((F(1, 3), F(2, 3)))))
seeds = st.integers(0, 10**6)


def random_finite_cover(rng, W="abcd"):
    covers, _ = finite_covers(frozenset(W[: rng.randint(1, len(W))]), pointed=rng.random() < 0.5)
    return covers[rng.randrange(len(covers))]


def random_law(rng, ground):
    subsets = [frozenset(s) for k in range(len(ground) + 1) for s in itertools.combinations(ground, k)]
    law = {s: F(rng.randint(0, 3)) for s in subsets}
    if not any(law.values()):
        law[frozenset()] = F(1)
    tot = sum(law.values())
    return FiniteLawAvoidance({s: v / tot for s, v in law.items() if v})


# ---------------------------------------------------------------------------
# covers and openings


def test_validate_cover_examples():
    assert validate_cover(THIRDS)
    bad = validate_cover(Covering(W01, (I((0, F(2, 3))), I((F(1, 3), 1)))))
    assert not bad and bad.violation[0] == "meet"
    assert validate_cover(Covering(W01, (W01,)))
    short = validate_cover(Covering(W01, (I((0, F(1, 2))),)))
    assert not short and short.violation[0] == "union"


def test_opening_examples():
    O, ok = opening_of(THIRDS, [I((0, F(2, 3))), I((F(1, 3), 1))])
    assert O == I((F(1, 3), F(2, 3))) and ok
    O, ok = opening_of(THIRDS, [I((0, F(2, 3)))])
    assert O == I((F(1, 3), 1)) and ok
    c = Covering(S("ab"), (S("a"), S("b"), S("ab"), S()))
    O, ok = opening_of(c, [S("a"), S("b")])
    assert O == S() and ok


def test_opening_rejects_non_antichains():
    with pytest.raises(NotAnAntichain):
        opening_of(THIRDS, [I((F(1, 3), F(2, 3))), I((0, F(2, 3)))])
    with pytest.raises(NotAnAntichain):
        opening_of(THIRDS, [])
    with pytest.raises(NotAnAntichain):
        opening_of(THIRDS, [W01])


def test_cover_family_counts():
    # intersection-closed families with full union, before and after adjoining ∅
    assert [len(_closed_families(k)) for k in range(1, 5)] == [2, 8, 90, 4542]
    pointed = [len(finite_covers(frozenset("abcd"[:k]))[0]) for k in range(1, 5)]
    assert pointed == [1, 5, 71, 4223]
    assert finite_covers(frozenset("abcde"))[1] is False


def test_closed_family_counts_brute_force():
    for k in (1, 2, 3):
        n = 0
        for r in range(1, (1 << k) + 1):
            for fam in itertools.combinations(range(1 << k), r):
                fs = set(fam)
                u = 0
                for a in fam:
                    u |= a
                if u == (1 << k) - 1 and all(a & b in fs for a in fam for b in fam):
                    n += 1
        assert n == len(_closed_families(k))


def split_members(c, B, O):
    """Every member either contains some Q_i and sticks out of O, or contains none and lies in O."""
    for q in c.members:
        hits = any(b <= q for b in B) if isinstance(q, frozenset) else any(b.issubset(q) for b in B)
        inside = q <= O if isinstance(q, frozenset) else q.issubset(O)
        if hits == inside:
            return False
    return True


@given(seeds)
def test_finite_opening_partition(seed):
    rng = random.Random(seed)
    c = random_finite_cover(rng)
    for B in _antichains(list(c.proper()), 3):
        O, ok = opening_of(c, B)
        if not ok:
            continue
        parts = [q - O for q in B]
        assert all(not (a & b) for a, b in itertools.combinations(parts, 2))
        assert split_members(c, B, O)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_interval_opening_partition(level):
    c = dyadic_ladder(W01, level)
    assert validate_cover(c)
    for B in _antichains(list(c.proper()), 3):
        O, ok = opening_of(c, B)
        if not ok:
            continue
        # the parts outside O are disjoint: pairwise overlaps lie inside O
        for a, b in itertools.combinations(B, 2):
            assert iu_intersect(a, b).issubset(O)
        assert split_members(c, B, O)


def test_opening_parts_need_not_fill_the_rest():
    # the parts outside an opening are disjoint but can leave gaps in W ∖ O
    c = dyadic_ladder(W01, 3)
    B = [I((0, F(1, 8))), I((F(1, 8), F(1, 4))), I((F(3, 8), F(3, 8)))]
    O, ok = opening_of(c, B)
    assert ok
    assert not W01.issubset(iu_union(O, iu_union_all(B)))


# ---------------------------------------------------------------------------
# the bound


def test_lhs_examples():
    phi = PoissonIntervalAvoidance(MeasureModel.lebesgue())
    lhs = lfv_lhs(phi, THIRDS, 2)
    assert isinstance(lhs, ExpSum) and 0 < lhs < 1
    assert lhs == lfv_bound_sum(phi, THIRDS, 2)
    # by hand: φ(W), two single differences at [1/3,1] and [0,2/3], the pair at [1/3,2/3]
    e = ExpSum.exp_neg
    want = e(1) + (e(F(2, 3)) - e(1)) * 2 + (e(F(1, 3)) - 2 * e(F(2, 3)) + e(1))
    assert lhs == want == e(F(1, 3))
    solid = SolidGrainAvoidance(W01)
    # the grain's boundary is the three junction points, so orders below 3 see nothing
    assert lfv_lhs(solid, dyadic_ladder(W01, 2), 2) == 0
    assert lfv_lhs(solid, dyadic_ladder(W01, 2), 3) == 1
    assert lfv_lhs(phi, Covering(W01, (W01,)), 4) == phi.value(W01)


def test_exact_evaluator_required():
    est = EstimatedAvoidance(CompoundSetSampler(DiscreteMeasure([S("a")], {S("a"): 1}, carrier_kind="grains")), 100, 1)
    c = Covering(S("a"), (S("a"), S()))
    with pytest.raises(EvaluatorNotExact):
        lfv_lhs(est, c, 1)
    with pytest.raises(EvaluatorNotExact):
        lfv_certificate(est, [S("a")])
    with pytest.raises(EvaluatorNotExact):
        lfv_lhs(PoissonIntervalAvoidance(MeasureModel.lebesgue()), THIRDS, 1, route="measure")


@given(seeds, st.integers(1, 3))
def test_routes_agree(seed, n):
    rng = random.Random(seed)
    c = random_finite_cover(rng)
    phi = random_law(rng, sorted(c.W))
    a = lfv_lhs(phi, c, n)
    assert a == lfv_bound_sum(phi, c, n) == lfv_lhs(phi, c, n, route="measure")


@given(seeds)
def test_routes_agree_compound(seed):
    rng = random.Random(seed)
    c = random_finite_cover(rng, "abc")
    grains = {frozenset(rng.sample("abc", rng.randint(1, 2))): F(rng.randint(1, 4), 2) for _ in range(2)}
    phi = CompoundPoissonAvoidance(grains, "abc")
    n = rng.randint(1, 3)
    assert lfv_lhs(phi, c, n) == lfv_bound_sum(phi, c, n) == lfv_lhs(phi, c, n, route="measure")


@given(seeds)
def test_lhs_monotone_in_n(seed):
    rng = random.Random(seed)
    c = random_finite_cover(rng)
    phi = random_law(rng, sorted(c.W))
    vals = [lfv_lhs(phi, c, n) for n in range(1, 5)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 1


@given(seeds, st.integers(1, 3))
def test_hitting_form(seed, n):
    # with Φ = 1 - φ the order-≥1 terms are minus the differences of Φ
    rng = random.Random(seed)
    c = random_finite_cover(rng)
    phi = random_law(rng, sorted(c.W))

    def Phi(q):
        return 1 - phi.value(q)

    total = F(0)
    for B in _antichains(list(c.proper()), n):
        O, ok = opening_of(c, B)
        if ok:
            total -= sum(coef * Phi(y) for y, coef in difference_terms(lambda a, b: a | b, B, O).items())
    assert lfv_lhs(phi, c, n) - phi.value(c.W) == total


# ---------------------------------------------------------------------------
# certificates


def test_certificate_poisson_passes():
    phi = poisson_singletons({r: F(1) for r in "abcde"})
    windows = [frozenset(w) for k in (1, 2, 3) for w in itertools.combinations("abcde", k)]
    cert = lfv_certificate(phi, windows, F(1, 20), 20)
    assert cert.verdict == "pass" and cert.exhaustive and cert.n_used <= 3
    enum = lfv_certificate(phi, windows[:6], F(1, 20), 20, route="enumerate")
    meas = lfv_certificate(phi, windows[:6], F(1, 20), 20, route="measure")
    assert [(r.cover_id, r.lhs, r.n_needed) for r in enum.per_cover_results] == [
        (r.cover_id, r.lhs, r.n_needed) for r in meas.per_cover_results
    ]


def test_certificate_two_point_grains_pass():
    phi = CompoundPoissonAvoidance({S("ab"): F(1, 2), S("cd"): 1}, "abcd")
    cert = lfv_certificate(phi, [S("abc"), S("bcd"), S("ad")], F(1, 20), 20)
    assert cert.verdict == "pass"


def test_certificate_solid_grain_fails():
    solid = SolidGrainAvoidance(W01)
    cert = lfv_certificate(solid, [W01], F(1, 20), 20, cover_budget=64)
    assert cert.verdict == "fail"
    W, cover, n, value = cert.counterexample
    assert value == 0 and lfv_lhs(solid, cover, n, route="measure") == 0
    # with more than 20 junction points no order up to 20 reaches the bound
    assert len(cover) > 40


def test_certificate_on_finite_model_passes_at_window_size():
    # on a finite model every cover is beaten once n reaches |W|
    solid = SolidGrainAvoidance(S("abc"))
    cert = lfv_certificate(solid, [S("abc")], F(1, 20), 20)
    assert cert.verdict == "pass" and cert.n_used <= 3


def test_ladder_certificate_is_inconclusive_for_poisson():
    phi = PoissonIntervalAvoidance(MeasureModel.lebesgue())
    cert = lfv_certificate(phi, [W01], F(1, 20), 20, cover_budget=8)
    assert cert.verdict == "inconclusive" and not cert.exhaustive


def test_diagnostic_reports_z_scores_only():
    lam = DiscreteMeasure([S("a"), S("b")], {S("a"): 1, S("b"): F(1, 2)}, carrier_kind="grains")
    sampler = CompoundSetSampler(lam, ground="ab")
    phi = CompoundPoissonAvoidance(lam, "ab")
    c = Covering(S("ab"), (S("a"), S("b"), S()))
    rows = lfv_diagnostic(sampler, c, 2, 50_000, 20261017, phi)
    assert rows and all("z" in r and abs(r["z"]) <= 3 for r in rows)
    assert all("verdict" not in r for r in rows)
