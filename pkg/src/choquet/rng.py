"""Reproducible random streams and Poisson variates.

Streams come from the Philox4x64 counter-based generator.  The key is the
pair ``(seed, stream)``, where ``stream`` packs a purpose tag and a batch
index, so any batch can be regenerated on its own and results do not
depend on how batches are scheduled.

Poisson variates use table inversion for means below 30 and the PTRS
transformed-rejection method (Hörmann 1993) otherwise.
"""

from __future__ import annotations

import math

import numpy as np

BATCH_SIZE = 4096
INVERSION_LIMIT = 30.0
_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int, purpose: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seeds must be nonnegative")
    key = np.array([seed & _MASK64, ((purpose & 0xFFFFFFFF) << 32) | (index & 0xFFFFFFFF)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def batch_sizes(n: int, batch: int = BATCH_SIZE):
    """Yield ``(batch_index, size)`` covering ``n`` replications."""
    full, rest = divmod(n, batch)
    for i in range(full):
        yield i, batch
    if rest:
        yield full, rest


def _poisson_inversion(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    # cumulative table until the remaining tail is below double precision
    probs = [math.exp(-lam)]
    cdf = [probs[0]]
    k = 0
    while 1.0 - cdf[-1] > 1e-17 and k < 1000:
        k += 1
        probs.append(probs[-1] * lam / k)
        cdf.append(cdf[-1] + probs[-1])
    table = np.array(cdf)
    u = rng.random(size)
    out = np.searchsorted(table, u, side="right")
    return np.minimum(out, len(table) - 1).astype(np.int64)


def _poisson_ptrs(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2)
    out = np.empty(size, dtype=np.int64)
    todo = np.arange(size)
    while todo.size:
        m = todo.size
        u = rng.random(m) - 0.5
        v = rng.random(m)
        us = 0.5 - np.abs(u)
        k = np.floor((2 * a / us + b) * u + lam + 0.43)
        quick = (us >= 0.07) & (v <= vr)
        reject = (k < 0) | ((us < 0.013) & (v > us))
        slow = ~quick & ~reject
        accept = quick.copy()
        if slow.any():
            ks = k[slow]
            lg = np.array([math.lgamma(x + 1) for x in ks])
            lhs = np.log(v[slow] * inv_alpha / (a / (us[slow] ** 2) + b))
            accept[slow] = lhs <= -lam + ks * loglam - lg
        out[todo[accept]] = k[accept].astype(np.int64)
        todo = todo[~accept]
    return out


def poisson(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    if lam < 0:
        raise ValueError("Poisson mean must be nonnegative")
    if lam == 0 or size == 0:
        return np.zeros(size, dtype=np.int64)
    if lam < INVERSION_LIMIT:
        return _poisson_inversion(rng, lam, size)
    return _poisson_ptrs(rng, lam, size)


def categorical(rng: np.random.Generator, cumulative: np.ndarray, size: int) -> np.ndarray:
    """Indices drawn by inversion against a cumulative weight table ending at 1."""
    u = rng.random(size)
    idx = np.searchsorted(cumulative, u, side="right")
    return np.minimum(idx, len(cumulative) - 1)
