from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pocsets.core import FinitePocSet
from pocsets.errors import AxiomViolation


def line3() -> FinitePocSet:
    # three nested walls on a line: h3 <= h2 <= h1
    p = FinitePocSet.from_order_generators(3, [])
    return FinitePocSet.from_order_generators(
        3, [(p.handle("h3"), p.handle("h2")), (p.handle("h2"), p.handle("h1"))]
    )


def square() -> FinitePocSet:
    # two transverse walls
    return FinitePocSet.from_order_generators(2, [])


def tripod() -> FinitePocSet:
    # three rays from a center: h_i <= h_j* for i != j
    p = FinitePocSet.from_order_generators(3, [])
    return FinitePocSet.from_order_generators(
        3,
        [
            (p.handle("h1"), p.handle("h2*")),
            (p.handle("h1"), p.handle("h3*")),
            (p.handle("h2"), p.handle("h3*")),
        ],
    )


@pytest.fixture
def fix_line3():
    return line3()


@pytest.fixture
def fix_square():
    return square()


@pytest.fixture
def fix_tripod():
    return tripod()


def random_pocset(rng: random.Random, max_pairs: int = 6) -> FinitePocSet:
    """A random valid poc-set: random generating edges, retried until the
    closure passes the axioms."""
    while True:
        n = rng.randint(0, max_pairs)
        edge_count = rng.randint(0, 2 * n) if n else 0
        edges = []
        for _ in range(edge_count):
            a = rng.randrange(2 * n)
            b = rng.randrange(2 * n)
            edges.append((a, b))
        try:
            return FinitePocSet.from_order_generators(n, edges)
        except AxiomViolation:
            continue


def brute_force_ultrafilters(p: FinitePocSet):
    """Oracle: scan all sign assignments, keep those with no pair of members
    h, k satisfying h <= k*; straight from the definition."""
    from itertools import product

    found = []
    for signs in product((0, 1), repeat=p.n_pairs):
        members = [2 * k + s for k, s in enumerate(signs)] + [p.zero_star]
        ok = True
        for x in members:
            for y in members:
                if p.leq(x, y ^ 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(signs)
    return found
