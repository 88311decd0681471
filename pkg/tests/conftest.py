"""Shared fixtures and independent brute-force reference implementations.

Everything here recomputes answers from first principles (exhaustive
bipartitions, subset enumeration, copy-vector products) without touching
the library's flow, cut, or branch-and-bound code, so agreement between
the two is evidence, not circularity.  Max flows are checked through
minimum cuts, which is the same number by max-flow min-cut duality.
"""

import itertools
from fractions import Fraction

import pytest

from capnet.graphs import Edge, Instance, KWay, Pairs, Uniform
from capnet.util import ceil_div, iter_partitions


# ---------------------------------------------------------------------------
# brute-force cut values

def side_capacity(instance, weights, side):
    """Total weight crossing the bipartition given by `side` (undirected),
    or leaving it (directed)."""
    total = 0
    for i, e in enumerate(instance.edges):
        if instance.directed:
            if e.tail in side and e.head not in side:
                total += weights[i]
        elif (e.tail in side) != (e.head in side):
            total += weights[i]
    return total


def brute_min_st_cut(instance, weights, s, t):
    """Minimum cut separating s from t, by scanning every vertex subset."""
    others = [v for v in range(instance.n) if v not in (s, t)]
    best = None
    for mask in range(1 << len(others)):
        side = {s} | {v for i, v in enumerate(others) if mask >> i & 1}
        cap = side_capacity(instance, weights, side)
        if best is None or cap < best:
            best = cap
    return best


def brute_global_min_cut(instance, weights):
    best = None
    for mask in range(1, 1 << (instance.n - 1)):
        side = {v for v in range(1, instance.n) if mask >> (v - 1) & 1}
        cap = side_capacity(instance, weights, side)
        if best is None or cap < best:
            best = cap
    return best


def brute_cut_sides_within(instance, weights, bound):
    """Every canonical side (vertex 0 excluded) with capacity <= bound."""
    out = set()
    for mask in range(1, 1 << (instance.n - 1)):
        side = frozenset(v for v in range(1, instance.n) if mask >> (v - 1) & 1)
        if side_capacity(instance, weights, side) <= bound:
            out.add(side)
    return out


def brute_min_kway_cut(instance, weights, parts):
    best = None
    for assignment in iter_partitions(instance.n, parts):
        cap = sum(
            weights[i] for i, e in enumerate(instance.edges)
            if assignment[e.tail] != assignment[e.head]
        )
        if best is None or cap < best:
            best = cap
    return best


# ---------------------------------------------------------------------------
# brute-force feasibility and optima

def subset_weights(instance, chosen):
    chosen = set(chosen)
    return [e.capacity if i in chosen else 0 for i, e in enumerate(instance.edges)]


def brute_feasible(instance, chosen):
    """Requirement check straight from the cut characterizations."""
    w = subset_weights(instance, chosen)
    req = instance.requirements
    if isinstance(req, Uniform):
        return req.R == 0 or brute_global_min_cut(instance, w) >= req.R
    if isinstance(req, Pairs):
        return all(
            r == 0 or brute_min_st_cut(instance, w, s, t) >= r
            for s, t, r in req.pairs
        )
    if isinstance(req, KWay):
        return all(
            brute_min_kway_cut(instance, w, i + 2) >= r
            for i, r in enumerate(req.Rs)
        )
    raise TypeError(type(req).__name__)


def brute_subset_optimum(instance):
    """Cheapest feasible subset by scanning all 2^m of them; among optima
    the winner is the lexicographically least sorted edge tuple."""
    assert instance.m <= 12, "brute subset scan is for tiny instances"
    best_cost, best_edges = None, None
    for size in range(instance.m + 1):
        for combo in itertools.combinations(range(instance.m), size):
            if not brute_feasible(instance, combo):
                continue
            cost = instance.total_cost(combo)
            if best_cost is None or cost < best_cost or \
                    (cost == best_cost and combo < best_edges):
                best_cost, best_edges = cost, combo
    return best_cost, best_edges


def brute_copy_optimum(instance):
    """Cheapest feasible copy vector by scanning a product of copy counts."""
    req = instance.requirements
    assert isinstance(req, Pairs)
    max_demand = max((r for _, _, r in req.pairs), default=0)
    if max_demand == 0:
        return Fraction(0), (0,) * instance.m
    limits = [ceil_div(max_demand, e.capacity) for e in instance.edges]
    total = 1
    for l in limits:
        total *= l + 1
    assert total <= 200_000, "copy product too large for a brute scan"
    best_cost, best_copies = None, None
    for counts in itertools.product(*(range(l + 1) for l in limits)):
        w = [c * e.capacity for c, e in zip(counts, instance.edges)]
        ok = all(
            r == 0 or brute_min_st_cut(instance, w, s, t) >= r
            for s, t, r in req.pairs
        )
        if not ok:
            continue
        cost = sum(
            (c * e.cost for c, e in zip(counts, instance.edges)), Fraction(0)
        )
        if best_cost is None or cost < best_cost or \
                (cost == best_cost and counts < best_copies):
            best_cost, best_copies = cost, counts
    return best_cost, best_copies


# ---------------------------------------------------------------------------
# small shared instances

@pytest.fixture
def triangle_rigid():
    """Triangle where the cut {2} forces the expensive edge: capacities
    5/4/5, uniform demand 5, so edges 1 and 2 must both be bought."""
    return Instance(
        3,
        (
            Edge(0, 1, 5, Fraction(0)),
            Edge(1, 2, 4, Fraction(0)),
            Edge(0, 2, 5, Fraction(7)),
        ),
        Uniform(5),
    )


@pytest.fixture
def square_pairs():
    """Four-cycle with one chord and two demands."""
    return Instance(
        4,
        (
            Edge(0, 1, 3, Fraction(2)),
            Edge(1, 2, 2, Fraction(1)),
            Edge(2, 3, 3, Fraction(2)),
            Edge(0, 3, 2, Fraction(1)),
            Edge(0, 2, 1, Fraction(1)),
        ),
        Pairs(((0, 2, 3), (1, 3, 2))),
    )
