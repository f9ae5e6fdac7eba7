"""Small fixtures shared by the test modules."""

import random
from fractions import Fraction

from choquet import FiniteSpaceModel, SetFunction, build_lattice
from choquet.suites import random_distributive_lattice


def chain(n):
    return build_lattice(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def b2():
    s = [frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")]
    return build_lattice(s, [(x, y) for x in s for y in s if x <= y])


def m3():
    return build_lattice(["0", "x", "y", "z", "1"], [("0", m) for m in "xyz"] + [(m, "1") for m in "xyz"])


def n5():
    return build_lattice(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def lattice_from_seed(seed, max_size=10):
    return random_distributive_lattice(random.Random(seed), max_size)


def avoidance(model: FiniteSpaceModel, law: dict) -> SetFunction:
    """Avoidance function of a random subset with the given law."""
    return SetFunction(
        model.compacts,
        {q: sum((p for c, p in law.items() if not frozenset(c) & q), Fraction(0)) for q in model.compacts.elements},
    )


def S(s=""):
    return frozenset(s)


# PASS/FAIL lines from the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list = []
