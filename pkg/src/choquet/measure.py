"""Finite discrete measures with exact rational weights."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .exceptions import InvalidMeasure

CARRIER_KINDS = ("elements", "filters", "closed_sets", "grains")


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        # floats are accepted only when they are exact dyadic rationals
        return Fraction(v)
    return Fraction(v)


class DiscreteMeasure:
    """Weights on a finite carrier.

    ``carrier`` fixes the iteration order; ids missing from ``weights`` get
    weight zero.  Negative weights are rejected unless ``signed`` is set.
    """

    __slots__ = ("carrier", "weights", "signed", "carrier_kind")

    def __init__(
        self,
        carrier: Iterable[Hashable] | None = None,
        weights: Mapping[Hashable, object] | None = None,
        *,
        signed: bool = False,
        carrier_kind: str = "elements",
    ):
        weights = dict(weights or {})
        if carrier is None:
            carrier = list(weights)
        carrier = tuple(dict.fromkeys(carrier))
        if carrier_kind not in CARRIER_KINDS:
            raise InvalidMeasure(f"unknown carrier kind {carrier_kind!r}")
        extra = set(weights) - set(carrier)
        if extra:
            raise InvalidMeasure(f"weights outside the carrier: {sorted(map(repr, extra))}")
        w = {}
        for c in carrier:
            v = as_fraction(weights.get(c, 0))
            if v < 0 and not signed:
                raise InvalidMeasure(f"negative weight {v} at {c!r}")
            w[c] = v
        self.carrier = carrier
        self.weights = w
        self.signed = signed
        self.carrier_kind = carrier_kind

    def __getitem__(self, c) -> Fraction:
        return self.weights.get(c, Fraction(0))

    def __iter__(self):
        return iter(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return self.support_weights() == other.support_weights()

    def __hash__(self):
        return hash(frozenset(self.support_weights().items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{c!r}: {v}" for c, v in self.support_weights().items())
        return f"DiscreteMeasure({{{inner}}}, kind={self.carrier_kind})"

    @property
    def total_mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def support(self) -> tuple:
        return tuple(c for c in self.carrier if self.weights[c] != 0)

    def support_weights(self) -> dict:
        return {c: v for c, v in self.weights.items() if v != 0}

    def mass(self, ids: Iterable) -> Fraction:
        return sum((self[c] for c in set(ids)), Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.weights.values())

    def scaled(self, s) -> "DiscreteMeasure":
        s = as_fraction(s)
        return DiscreteMeasure(
            self.carrier,
            {c: v * s for c, v in self.weights.items()},
            signed=self.signed,
            carrier_kind=self.carrier_kind,
        )
