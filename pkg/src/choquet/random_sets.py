"""Samplers for Poisson processes and union-of-grains random sets, with z-tests.

Every sampler draws whole batches of replications from independent
streams, so an estimate for ``n`` replications with a given seed is the
same however the batches are evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Hashable, Sequence

import numpy as np

from .exceptions import InvalidMeasure
from .expsum import ExpSum
from .intervals import IntervalUnion, MeasureModel, iu_intersect, measure_of
from .measure import DiscreteMeasure, as_fraction
from .rng import BATCH_SIZE, batch_sizes, categorical, poisson, stream

HITTING, AVOIDANCE = "hitting", "avoidance"


@dataclass(frozen=True)
class PointSample:
    points: tuple  # floats for diffuse mass, exact Fractions at atoms

    def count(self, q: IntervalUnion) -> int:
        # float/Fraction comparisons are exact in Python
        return sum(1 for x in self.points if any(p <= x <= r for p, r in q.intervals))

    def is_simple(self) -> bool:
        return len(set(self.points)) == len(self.points)


@dataclass(frozen=True)
class RandomSetSample:
    grains: tuple
    realized_set: frozenset


@dataclass(frozen=True)
class SimReport:
    estimate: float
    std_error: float
    theory: object  # Fraction or ExpSum
    z: float
    n: int
    seed: int
    label: str = ""

    @property
    def theory_value(self) -> float:
        return float(self.theory)


def _exact_str(v) -> str:
    if isinstance(v, ExpSum):
        return str(v)
    v = as_fraction(v)
    return f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# batches


class PointBatch:
    """Points of a batch of Poisson replications, stored flat."""

    def __init__(self, size, rep, comp, x, sampler):
        self.size = size
        self.rep = rep
        self.comp = comp
        self.x = x
        self._s = sampler

    def counts(self, q: IntervalUnion) -> np.ndarray:
        inside = self._s._inside(q, self.comp, self.x)
        return np.bincount(self.rep[inside], minlength=self.size)

    def avoids(self, q: IntervalUnion) -> np.ndarray:
        return self.counts(q) == 0


class SetBatch:
    """Realized subsets of a finite ground set as bitmasks."""

    def __init__(self, masks: np.ndarray, sampler):
        self.size = masks.shape[0]
        self.masks = masks
        self._s = sampler

    def avoids(self, q) -> np.ndarray:
        return (self.masks & self._s.mask(q)) == 0


# ---------------------------------------------------------------------------
# samplers


class PoissonSampler:
    """Poisson process with parameter measure ``lam`` restricted to ``window``."""

    purpose = 1

    def __init__(self, lam: MeasureModel, window: IntervalUnion):
        self.lam = lam
        self.window = window
        segs = []
        for (a, b), h in lam.pieces:
            if h == 0:
                continue
            for p, q in iu_intersect(window, IntervalUnion(((a, b),))).intervals:
                if q > p:
                    segs.append((p, q, h * (q - p)))
        atoms = [(x, m) for x, m in lam.atoms if window.contains_point(x)]
        self.segments = segs
        self.atoms = atoms
        masses = [s[2] for s in segs] + [m for _, m in atoms]
        self.total = sum(masses, Fraction(0))
        self._seg_lo = np.array([float(s[0]) for s in segs])
        self._seg_width = np.array([float(s[1] - s[0]) for s in segs])
        if self.total > 0:
            cum = np.cumsum([float(m / self.total) for m in masses])
            cum[-1] = 1.0
            self._cum = cum
        else:
            self._cum = np.array([1.0])

    def mean_count(self, q: IntervalUnion) -> Fraction:
        return measure_of(self.lam, iu_intersect(q, self.window))

    def avoidance_exact(self, q: IntervalUnion) -> ExpSum:
        return ExpSum.exp_neg(self.mean_count(q))

    def _inside(self, q: IntervalUnion, comp: np.ndarray, x: np.ndarray) -> np.ndarray:
        nseg = len(self.segments)
        inside = np.zeros(comp.shape[0], dtype=bool)
        diffuse = comp < nseg
        xs = x[diffuse]
        hit = np.zeros(xs.shape[0], dtype=bool)
        for p, r in q.intervals:
            hit |= (xs >= float(p)) & (xs <= float(r))
        inside[diffuse] = hit
        if self.atoms:
            atom_in = np.array([q.contains_point(a) for a, _ in self.atoms])
            at = ~diffuse
            inside[at] = atom_in[comp[at] - nseg]
        return inside

    def sample_batch(self, rng: np.random.Generator, size: int) -> PointBatch:
        counts = poisson(rng, float(self.total), size)
        tot = int(counts.sum())
        comp = categorical(rng, self._cum, tot) if self.total > 0 else np.zeros(0, dtype=np.int64)
        u = rng.random(tot)
        nseg = len(self.segments)
        x = np.zeros(tot)
        d = comp < nseg
        x[d] = self._seg_lo[comp[d]] + self._seg_width[comp[d]] * u[d]
        rep = np.repeat(np.arange(size), counts)
        return PointBatch(size, rep, comp, x, self)

    def sample(self, rng: np.random.Generator) -> PointSample:
        b = self.sample_batch(rng, 1)
        nseg = len(self.segments)
        pts = tuple(
            float(xv) if c < nseg else self.atoms[c - nseg][0] for c, xv in zip(b.comp.tolist(), b.x.tolist())
        )
        return PointSample(pts)


def sample_poisson(lam: MeasureModel, window: IntervalUnion, rng: np.random.Generator) -> PointSample:
    return PoissonSampler(lam, window).sample(rng)


class _FiniteSetSampler:
    def __init__(self, ground: Sequence[Hashable]):
        self.ground = tuple(ground)
        self._bit = {r: 1 << i for i, r in enumerate(self.ground)}

    def mask(self, q) -> int:
        try:
            return sum(self._bit[r] for r in set(q))
        except KeyError as exc:
            raise ValueError(f"{exc.args[0]!r} is not a ground point") from None

    def unmask(self, m: int) -> frozenset:
        return frozenset(r for r, b in self._bit.items() if m & b)


class CompoundSetSampler(_FiniteSetSampler):
    """Union of a Poisson number of i.i.d. grains.

    ``lam`` is a finite measure on grains (subsets of the ground set); the
    number of grains is Poisson with mean ``lam`` total mass and each grain
    is drawn from ``lam`` normalized.
    """

    purpose = 2

    def __init__(self, lam: DiscreteMeasure, ground: Sequence[Hashable] | None = None):
        grains = [frozenset(g) for g in lam.support()]
        if any(v < 0 for v in lam.weights.values()):
            raise InvalidMeasure("grain intensities must be nonnegative")
        if ground is None:
            ground = sorted(set().union(*grains), key=repr) if grains else ()
        super().__init__(ground)
        self.lam = lam
        self.grains = grains
        self.weights = [lam[g] for g in lam.support()]
        self.total = sum(self.weights, Fraction(0))
        self._gmask = np.array([self.mask(g) for g in grains], dtype=np.int64)
        if self.total > 0:
            cum = np.cumsum([float(w / self.total) for w in self.weights])
            cum[-1] = 1.0
            self._cum = cum

    def exponent(self, q) -> Fraction:
        """Total intensity of grains meeting ``q``."""
        q = frozenset(q)
        return sum((w for g, w in zip(self.grains, self.weights) if g & q), Fraction(0))

    def avoidance_exact(self, q) -> ExpSum:
        return ExpSum.exp_neg(self.exponent(q))

    def sample_batch(self, rng: np.random.Generator, size: int) -> SetBatch:
        masks = np.zeros(size, dtype=np.int64)
        if self.total == 0:
            return SetBatch(masks, self)
        counts = poisson(rng, float(self.total), size)
        tot = int(counts.sum())
        ids = categorical(rng, self._cum, tot)
        rep = np.repeat(np.arange(size), counts)
        np.bitwise_or.at(masks, rep, self._gmask[ids])
        return SetBatch(masks, self)

    def sample(self, rng: np.random.Generator) -> RandomSetSample:
        counts = poisson(rng, float(self.total), 1) if self.total > 0 else np.zeros(1, dtype=np.int64)
        n = int(counts[0])
        ids = categorical(rng, self._cum, n) if n else []
        grains = tuple(self.grains[i] for i in ids)
        return RandomSetSample(grains, frozenset().union(*grains))


def sample_compound_set(lam: DiscreteMeasure, rng: np.random.Generator, ground=None) -> RandomSetSample:
    return CompoundSetSampler(lam, ground).sample(rng)


class DistributionSampler(_FiniteSetSampler):
    """One closed set per replication, drawn from a probability measure."""

    purpose = 3

    def __init__(self, dist: DiscreteMeasure, ground: Sequence[Hashable] | None = None):
        if dist.total_mass != 1 or not dist.is_nonnegative():
            raise InvalidMeasure("a distribution needs nonnegative weights summing to 1")
        sets = [frozenset(c) for c in dist.support()]
        if ground is None:
            ground = sorted(set().union(*sets), key=repr) if sets else ()
        super().__init__(ground)
        self.dist = dist
        self.sets = sets
        self.probs = [dist[c] for c in dist.support()]
        self._smask = np.array([self.mask(s) for s in sets], dtype=np.int64)
        cum = np.cumsum([float(p) for p in self.probs])
        cum[-1] = 1.0
        self._cum = cum

    def avoidance_exact(self, q) -> Fraction:
        q = frozenset(q)
        return sum((p for s, p in zip(self.sets, self.probs) if not s & q), Fraction(0))

    def sample_batch(self, rng: np.random.Generator, size: int) -> SetBatch:
        return SetBatch(self._smask[categorical(rng, self._cum, size)], self)

    def sample(self, rng: np.random.Generator) -> RandomSetSample:
        s = self.sets[int(categorical(rng, self._cum, 1)[0])]
        return RandomSetSample((s,), s)


# ---------------------------------------------------------------------------
# estimation


def _theory(sampler, functional: str, q):
    av = sampler.avoidance_exact(q)
    if functional == AVOIDANCE:
        return av
    if functional == HITTING:
        return 1 - av if isinstance(av, ExpSum) else Fraction(1) - av
    raise ValueError(f"unknown functional {functional!r}")


def _normalize_theory(t):
    if isinstance(t, ExpSum) and t.is_rational():
        return t.as_fraction()
    return t


def make_report(successes: int, n: int, theory, seed: int, label: str = "") -> SimReport:
    p = successes / n
    se = math.sqrt(p * (1 - p) / n)
    theory = _normalize_theory(theory)
    if se > 0:
        z = (p - float(theory)) / se
    else:
        exact_match = (not isinstance(theory, ExpSum)) and Fraction(successes, n) == theory
        z = 0.0 if exact_match else math.copysign(math.inf, p - float(theory))
    return SimReport(p, se, theory, z, n, seed, label)


def run_batches(sampler, n: int, seed: int, fn, batch: int = BATCH_SIZE):
    """Apply ``fn`` to every batch in index order and collect the results."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []
    for idx, size in batch_sizes(n, batch):
        rng = stream(seed, idx, getattr(sampler, "purpose", 0))
        out.append(fn(sampler.sample_batch(rng, size)))
    return out


def estimate_functionals(sampler, queries: Sequence[tuple], n: int, seed: int, *, batch: int = BATCH_SIZE, per_batch: list | None = None) -> list:
    """One report per ``(functional, Q)`` query, all from the same replications."""
    for f, _ in queries:
        if f not in (HITTING, AVOIDANCE):
            raise ValueError(f"unknown functional {f!r}")

    def tally(b):
        row = []
        for f, q in queries:
            av = int(b.avoids(q).sum())
            row.append(av if f == AVOIDANCE else b.size - av)
        return b.size, row

    rows = run_batches(sampler, n, seed, tally, batch)
    if per_batch is not None:
        per_batch.extend((i, size, row) for i, (size, row) in enumerate(rows))
    totals = [sum(r[1][k] for r in rows) for k in range(len(queries))]
    return [
        make_report(totals[k], n, _theory(sampler, f, q), seed, f"{f}:{_label(q)}")
        for k, (f, q) in enumerate(queries)
    ]


def _label(q) -> str:
    if isinstance(q, IntervalUnion):
        return "∅" if not q else "∪".join(f"[{a},{b}]" for a, b in q.intervals)
    return "{" + ",".join(sorted(map(str, q))) + "}"


def estimate_functional(sampler, functional: str, q, n: int, seed: int, *, batch: int = BATCH_SIZE) -> SimReport:
    return estimate_functionals(sampler, [(functional, q)], n, seed, batch=batch)[0]


def z_compare(report: SimReport, z_threshold: float = 3.0) -> str:
    if report.std_error == 0:
        exact = not isinstance(report.theory, ExpSum) and Fraction(report.estimate) == report.theory
        return "pass" if exact else "fail"
    return "pass" if abs(report.z) <= z_threshold else "fail"


def bonferroni_z(m: int, alpha: float = 0.0026997960632601866) -> float:
    """Two-sided threshold keeping the family-wise error at ``alpha`` over ``m`` tests.

    The default ``alpha`` is the two-sided tail of three standard deviations.
    """
    if m < 1:
        raise ValueError("m must be positive")
    return NormalDist().inv_cdf(1 - alpha / (2 * m))


@dataclass(frozen=True)
class CovarianceReport:
    covariance: float
    std_error: float
    z: float
    n: int
    seed: int


def count_covariance(sampler: PoissonSampler, q1: IntervalUnion, q2: IntervalUnion, n: int, seed: int, *, batch: int = BATCH_SIZE) -> CovarianceReport:
    """Sample covariance of the counts in two windows with its standard error."""

    def moments(b):
        c1 = b.counts(q1).astype(np.float64)
        c2 = b.counts(q2).astype(np.float64)
        return c1, c2

    parts = run_batches(sampler, n, seed, moments, batch)
    c1 = np.concatenate([p[0] for p in parts])
    c2 = np.concatenate([p[1] for p in parts])
    prod = (c1 - c1.mean()) * (c2 - c2.mean())
    cov = float(prod.sum() / (n - 1))
    se = float(prod.std(ddof=1) / math.sqrt(n))
    z = cov / se if se > 0 else 0.0
    return CovarianceReport(cov, se, z, n, seed)


@dataclass(frozen=True)
class DefectReport:
    estimate: float
    std_error: float
    theory: object
    z: float
    n: int
    seed: int


def exponential_defect_mc(sampler, q1, q2, meet, join, n: int, seed: int, *, batch: int = BATCH_SIZE) -> DefectReport:
    """Monte Carlo ``φ(Q1)φ(Q2) - φ(Q1∧Q2)φ(Q1∨Q2)`` with a delta-method standard error.

    ``meet`` and ``join`` are the lattice meet and join of the two compacts
    (union and intersection under reverse inclusion).
    """
    qs = [q1, q2, meet, join]

    def ind(b):
        return np.stack([b.avoids(q) for q in qs]).astype(np.float64)

    X = np.concatenate(run_batches(sampler, n, seed, ind, batch), axis=1)
    m = X.mean(axis=1)
    est = m[0] * m[1] - m[2] * m[3]
    grad = np.array([m[1], m[0], -m[3], -m[2]])
    cov = np.cov(X) if n > 1 else np.zeros((4, 4))
    var = float(grad @ cov @ grad) / n
    se = math.sqrt(max(var, 0.0))
    exact = [ExpSum._coerce(sampler.avoidance_exact(q)) for q in qs]
    theory = _normalize_theory(exact[0] * exact[1] - exact[2] * exact[3])
    tv = float(theory)
    z = (est - tv) / se if se > 0 else (0.0 if est == tv else math.copysign(math.inf, est - tv))
    return DefectReport(float(est), se, theory, float(z), n, seed)
