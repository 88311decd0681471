"""Exact desk-scale oracles and generators for the named test instances.

The oracles answer "what is the true optimum" on instances small enough
to enumerate, so the approximate solvers have something honest to be
measured against.  Feasibility is encoded once as covering rows, one per
relevant cut: a subset (or copy vector) is feasible exactly when every
row's selected capacity meets its demand, which agrees with the max-flow
characterization used elsewhere because min cut equals max flow.

Branch and bound conventions: subsets decide edges in cost-descending
order, exclusion branch first; copy vectors decide edges in index order,
counts ascending.  Pruning uses a fractional covering lower bound (the
cheapest cost-per-capacity fill of the most deficient row), which never
overestimates, so only strictly-worse branches die and the
lexicographically least optimum survives ties.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import CapabilityError, InfeasibleError, InstanceFormatError
from .graphs import (
    Instance,
    KWay,
    Pairs,
    Uniform,
    capacity_weighting,
    global_min_cut,
    instance_to_dict,
    kway_cut_from_assignment,
    max_flow,
    subset_weighting,
)
from .kclp import NearUniformVariant, FractionalSolution, nearly_integral_threshold
from .multicopy import baseline_independent_pairs
from .util import ceil_div, iter_partitions

SUBSET_EDGE_LIMIT = 24
MULTICOPY_EDGE_LIMIT = 12
ROW_VERTEX_LIMIT = 16


# ---------------------------------------------------------------------------
# covering rows: feasibility as capacity constraints, one row per cut

def constraint_rows(instance):
    """All binding cut constraints as (edge index tuple, demand) rows.

    A subset is feasible iff every row's capacity under the subset meets
    its demand; likewise a copy vector with capacities copies(e) * u(e).
    Rows with identical edge sets merge, keeping the largest demand.
    """
    if instance.n > ROW_VERTEX_LIMIT:
        raise CapabilityError(
            f"cut rows are enumerated exhaustively; capped at n = {ROW_VERTEX_LIMIT}"
        )
    req = instance.requirements
    n, m = instance.n, instance.m
    rows = {}

    def note(key, need):
        if need > 0 and need > rows.get(key, 0):
            rows[key] = need

    def undirected_key(side):
        return tuple(
            e for e in range(m)
            if (side >> instance.edges[e].tail & 1)
            != (side >> instance.edges[e].head & 1)
        )

    if isinstance(req, Uniform):
        if req.R > 0:
            for mask in range(1, 1 << (n - 1)):
                note(undirected_key(mask << 1), req.R)  # vertex 0 stays out
    elif isinstance(req, Pairs):
        for s, t, r in req.pairs:
            if r == 0:
                continue
            others = [v for v in range(n) if v not in (s, t)]
            for mask in range(1 << len(others)):
                side = 1 << s
                for i, v in enumerate(others):
                    if mask >> i & 1:
                        side |= 1 << v
                if instance.directed:
                    key = tuple(
                        e for e in range(m)
                        if side >> instance.edges[e].tail & 1
                        and not side >> instance.edges[e].head & 1
                    )
                else:
                    key = undirected_key(side)
                note(key, r)
    elif isinstance(req, KWay):
        if n > 10:
            raise CapabilityError("k-way rows are capped at n = 10")
        for i, r in enumerate(req.Rs):
            for assignment in iter_partitions(n, i + 2):
                key = tuple(
                    e for e in range(m)
                    if assignment[instance.edges[e].tail]
                    != assignment[instance.edges[e].head]
                )
                note(key, r)
    else:
        raise TypeError(f"unknown requirement type {type(req).__name__}")
    return tuple(sorted(rows.items()))


def _fractional_fill(deficit, candidates):
    """Cheapest fractional cost to cover `deficit` units of capacity from
    (cost, capacity) lots; None when all lots together fall short."""
    if sum(u for _, u in candidates) < deficit:
        return None
    cost = Fraction(0)
    for c, u in sorted(candidates, key=lambda t: (Fraction(t[0], t[1]), t[0])):
        if deficit <= 0:
            break
        take = min(u, deficit)
        cost += Fraction(c) * Fraction(take, u)
        deficit -= take
    return cost


# ---------------------------------------------------------------------------
# exact optimum over edge subsets

@dataclass(frozen=True)
class SubsetOptimum:
    cost: Fraction
    edges: tuple
    explored: int


def exact_optimum(instance, force=False):
    """Minimum-cost feasible edge subset by branch and bound.

    Capped at m <= 24 unless force=True.  Raises InfeasibleError when
    even the full edge set fails.  Among optima, returns the
    lexicographically least edge tuple.
    """
    if instance.m > SUBSET_EDGE_LIMIT and not force:
        raise CapabilityError(
            f"subset search is capped at m = {SUBSET_EDGE_LIMIT}; pass force=True to override"
        )
    rows = constraint_rows(instance)
    if not rows:
        return SubsetOptimum(Fraction(0), (), 0)
    m = instance.m
    caps = [e.capacity for e in instance.edges]
    costs = [e.cost for e in instance.edges]
    keys = [key for key, _ in rows]
    need = [nd for _, nd in rows]
    for key, nd in zip(keys, need):
        if sum(caps[e] for e in key) < nd:
            raise InfeasibleError("requirements exceed the full edge set", (key, nd))
    rows_of = [[] for _ in range(m)]
    for r, key in enumerate(keys):
        for e in key:
            rows_of[e].append(r)

    order = sorted(range(m), key=lambda e: (-costs[e], e))
    rank = [0] * m
    for i, e in enumerate(order):
        rank[e] = i

    # Warm start: keep everything, then drop expensive edges greedily.
    kept_cap = [sum(caps[e] for e in key) for key in keys]
    incumbent = set(range(m))
    for e in order:
        if all(kept_cap[r] - caps[e] >= need[r] for r in rows_of[e]):
            incumbent.discard(e)
            for r in rows_of[e]:
                kept_cap[r] -= caps[e]
    best_edges = tuple(sorted(incumbent))
    best_cost = sum((costs[e] for e in incumbent), Fraction(0))

    chosen_cap = [0] * len(keys)
    open_cap = [sum(caps[e] for e in key) for key in keys]
    chosen = []
    explored = 0

    def descend(pos, cost):
        nonlocal best_cost, best_edges, explored
        explored += 1
        deficient, worst = None, 0
        for r, nd in enumerate(need):
            gap = nd - chosen_cap[r]
            if chosen_cap[r] + open_cap[r] < nd:
                return  # no completion can cover row r
            if gap > worst:
                worst, deficient = gap, r
        if deficient is None:
            cand = sorted(chosen)
            # Costlier supersets lose outright, but padding with an
            # undecided zero-cost edge below the current maximum keeps
            # the cost and shrinks the tuple lexicographically; every
            # optimum is such a padding of some covered node, so this
            # closed form keeps the lex-least contract exact.
            if cand:
                top = cand[-1]
                cand += [e for e in order[pos:] if costs[e] == 0 and e < top]
                cand.sort()
            cand = tuple(cand)
            if cost < best_cost or (cost == best_cost and cand < best_edges):
                best_cost, best_edges = cost, cand
            return
        if pos == m:
            return
        fill = _fractional_fill(
            worst,
            [(costs[e], caps[e]) for e in keys[deficient] if rank[e] >= pos],
        )
        if fill is None or cost + fill > best_cost:
            return
        e = order[pos]
        for r in rows_of[e]:
            open_cap[r] -= caps[e]
        descend(pos + 1, cost)  # exclude e
        for r in rows_of[e]:
            chosen_cap[r] += caps[e]
        chosen.append(e)
        descend(pos + 1, cost + costs[e])  # include e
        chosen.pop()
        for r in rows_of[e]:
            chosen_cap[r] -= caps[e]
            open_cap[r] += caps[e]

    descend(0, Fraction(0))
    return SubsetOptimum(best_cost, best_edges, explored)


# ---------------------------------------------------------------------------
# exact optimum over copy vectors

@dataclass(frozen=True)
class CopyOptimum:
    cost: Fraction
    copies: tuple
    explored: int


def exact_optimum_multicopy(instance, force=False):
    """Minimum-cost copy vector meeting every pair demand.

    Copy counts per edge are bounded by ceil(max demand / u(e)): more
    copies than that already cover the largest demand single-handedly on
    every cut through the edge, so exceeding the bound never helps.
    Capped at m <= 12 unless force=True.
    """
    if instance.m > MULTICOPY_EDGE_LIMIT and not force:
        raise CapabilityError(
            f"copy search is capped at m = {MULTICOPY_EDGE_LIMIT}; pass force=True to override"
        )
    if not isinstance(instance.requirements, Pairs):
        raise ValueError("the copy oracle expects pair requirements")
    rows = constraint_rows(instance)
    if not rows:
        return CopyOptimum(Fraction(0), (0,) * instance.m, 0)
    m = instance.m
    caps = [e.capacity for e in instance.edges]
    costs = [e.cost for e in instance.edges]
    keys = [key for key, _ in rows]
    need = [nd for _, nd in rows]
    max_need = max(need)
    limit = [ceil_div(max_need, caps[e]) for e in range(m)]
    for key, nd in zip(keys, need):
        if not key:
            raise InfeasibleError("some pair is disconnected", (key, nd))
    rows_of = [[] for _ in range(m)]
    for r, key in enumerate(keys):
        for e in key:
            rows_of[e].append(r)

    # Warm start from per-pair shortest paths, capped at the copy bound
    # (a capped edge covers every cut through it on its own).
    base = baseline_independent_pairs(instance)
    best_copies = tuple(min(base.copies[e], limit[e]) for e in range(m))
    best_cost = sum((costs[e] * c for e, c in enumerate(best_copies)), Fraction(0))

    chosen_cap = [0] * len(keys)
    open_cap = [sum(limit[e] * caps[e] for e in key) for key in keys]
    current = [0] * m
    explored = 0

    def descend(pos, cost):
        nonlocal best_cost, best_copies, explored
        explored += 1
        deficient, worst = None, 0
        for r, nd in enumerate(need):
            gap = nd - chosen_cap[r]
            if chosen_cap[r] + open_cap[r] < nd:
                return
            if gap > worst:
                worst, deficient = gap, r
        if deficient is None:
            cand = tuple(current)
            if cost < best_cost or (cost == best_cost and cand < best_copies):
                best_cost, best_copies = cost, cand
            return
        if pos == m:
            return
        fill = _fractional_fill(
            worst,
            [
                (costs[e] * limit[e], caps[e] * limit[e])
                for e in keys[deficient]
                if e >= pos and limit[e] > 0
            ],
        )
        if fill is None or cost + fill > best_cost:
            return
        e = pos  # copy counts branch in edge index order
        span = limit[e] * caps[e]
        for r in rows_of[e]:
            open_cap[r] -= span
        for count in range(limit[e] + 1):
            current[e] = count
            add = count * caps[e]
            for r in rows_of[e]:
                chosen_cap[r] += add
            descend(pos + 1, cost + costs[e] * count)
            for r in rows_of[e]:
                chosen_cap[r] -= add
        current[e] = 0
        for r in rows_of[e]:
            open_cap[r] += span

    descend(0, Fraction(0))
    return CopyOptimum(best_cost, best_copies, explored)


# ---------------------------------------------------------------------------
# gap instances

def gen_triangle_gap(R, C):
    """Three vertices p=0, q=1, r=2 with uniform requirement R:
    pq (u=R, cost 0), qr (u=R-1, cost 0), pr (u=R, cost C).

    Every feasible integral solution must buy pr (the cut {r} has only
    qr and pr, and qr alone is one short), so the true optimum costs C.
    The plain cut LP instead covers {r} with x_pr = 1/R at cost C/R; the
    cover inequality at ({r}, A={qr}) is what forces x_pr to 1.
    """
    if not isinstance(R, int) or R < 2:
        raise ValueError("R must be an integer >= 2")
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    return Instance(
        3,
        ((0, 1, R, Fraction(0)), (1, 2, R - 1, Fraction(0)), (0, 2, R, C)),
        Uniform(R),
    )


def gen_single_pair_gap(R):
    """Star gap instance: s=0, t=1, spokes v_1..v_R (vertices 2..R+1),
    small edges s-v_i (u=2, cost 1), large edges v_i-t (u=R, cost R),
    one demand (s, t, R).  R must be even and >= 4.

    Returns (instance, reference fractional solution).  The reference
    puts 1 on small edges and 2/R on large ones, costing exactly 3R,
    and survives every cover inequality; the integral optimum needs
    R/2 spokes bought outright and costs R/2 + R^2/2.
    """
    if not isinstance(R, int) or R < 4 or R % 2:
        raise ValueError("R must be an even integer >= 4")
    edges = [(0, 2 + i, 2, Fraction(1)) for i in range(R)]
    edges += [(2 + i, 1, R, Fraction(R)) for i in range(R)]
    instance = Instance(R + 2, tuple(edges), Pairs(((0, 1, R),)))
    x = tuple([Fraction(1)] * R + [Fraction(2, R)] * R)
    variant = NearUniformVariant(Fraction(1), R)
    reference = FractionalSolution(
        instance, x, nearly_integral_threshold(variant, instance.n)
    )
    return instance, reference


# ---------------------------------------------------------------------------
# label cover and its flow reduction

@dataclass(frozen=True)
class LabelCoverInstance:
    """Regular bipartite constraint graph for label cover.

    a_count/b_count vertices on each side with regular degrees
    degree_a/degree_b; labels_a/labels_b label alphabet sizes; relations
    is one (a, b, allowed label pairs) entry per constraint edge, and a
    multigraph is allowed.  labeling, when present, is a (side-A labels,
    side-B labels) pair, not necessarily consistent.
    """

    a_count: int
    b_count: int
    degree_a: int
    degree_b: int
    labels_a: int
    labels_b: int
    relations: tuple
    labeling: object = None

    def __post_init__(self):
        for fld in ("a_count", "b_count", "degree_a", "degree_b", "labels_a", "labels_b"):
            v = getattr(self, fld)
            if not isinstance(v, int) or v < 1:
                raise InstanceFormatError(fld, "must be a positive integer")
        rels = []
        deg_a = [0] * self.a_count
        deg_b = [0] * self.b_count
        for i, entry in enumerate(self.relations):
            a, b, pairs = entry
            if not (isinstance(a, int) and 0 <= a < self.a_count):
                raise InstanceFormatError(f"pi[{i}]", f"A-vertex {a!r} out of range")
            if not (isinstance(b, int) and 0 <= b < self.b_count):
                raise InstanceFormatError(f"pi[{i}]", f"B-vertex {b!r} out of range")
            deg_a[a] += 1
            deg_b[b] += 1
            seen = []
            for la, lb in pairs:
                if not (isinstance(la, int) and 0 <= la < self.labels_a):
                    raise InstanceFormatError(f"pi[{i}]", f"A-label {la!r} out of range")
                if not (isinstance(lb, int) and 0 <= lb < self.labels_b):
                    raise InstanceFormatError(f"pi[{i}]", f"B-label {lb!r} out of range")
                seen.append((la, lb))
            rels.append((a, b, tuple(sorted(set(seen)))))
        object.__setattr__(self, "relations", tuple(rels))
        if any(d != self.degree_a for d in deg_a):
            raise InstanceFormatError("dA", "side A is not regular of the stated degree")
        if any(d != self.degree_b for d in deg_b):
            raise InstanceFormatError("dB", "side B is not regular of the stated degree")
        if len(rels) != self.a_count * self.degree_a or len(rels) != self.b_count * self.degree_b:
            raise InstanceFormatError("pi", "edge count must equal |A| dA = |B| dB")
        if self.labeling is not None:
            la, lb = self.labeling
            la, lb = tuple(la), tuple(lb)
            if len(la) != self.a_count or len(lb) != self.b_count:
                raise InstanceFormatError("phi", "labeling must cover every vertex")
            if any(not (isinstance(v, int) and 0 <= v < self.labels_a) for v in la):
                raise InstanceFormatError("phi", "A-side label out of range")
            if any(not (isinstance(v, int) and 0 <= v < self.labels_b) for v in lb):
                raise InstanceFormatError("phi", "B-side label out of range")
            object.__setattr__(self, "labeling", (la, lb))

    @property
    def m(self):
        return len(self.relations)

    def violated_by(self, labeling):
        la, lb = labeling
        return tuple(
            i for i, (a, b, pairs) in enumerate(self.relations)
            if (la[a], lb[b]) not in pairs
        )


def label_cover_to_dict(lc):
    d = {
        "A": lc.a_count,
        "B": lc.b_count,
        "dA": lc.degree_a,
        "dB": lc.degree_b,
        "LA": lc.labels_a,
        "LB": lc.labels_b,
        "pi": [[a, b, [list(p) for p in pairs]] for a, b, pairs in lc.relations],
    }
    if lc.labeling is not None:
        d["phi"] = [list(lc.labeling[0]), list(lc.labeling[1])]
    return d


def label_cover_from_dict(data):
    if not isinstance(data, dict):
        raise InstanceFormatError("", "label cover must be a JSON object")
    for fld in ("A", "B", "dA", "dB", "LA", "LB", "pi"):
        if fld not in data:
            raise InstanceFormatError(fld, "missing field")
    pi = data["pi"]
    if not isinstance(pi, list):
        raise InstanceFormatError("pi", "must be a list")
    rels = []
    for i, entry in enumerate(pi):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise InstanceFormatError(f"pi[{i}]", "entries are [a, b, [[la, lb], ...]]")
        a, b, pairs = entry
        rels.append((a, b, tuple((la, lb) for la, lb in pairs)))
    phi = data.get("phi")
    if phi is not None:
        if not (isinstance(phi, list) and len(phi) == 2):
            raise InstanceFormatError("phi", "labeling is [[A labels], [B labels]]")
        phi = (tuple(phi[0]), tuple(phi[1]))
    return LabelCoverInstance(
        data["A"], data["B"], data["dA"], data["dB"], data["LA"], data["LB"],
        tuple(rels), phi,
    )


def _reduction_layout(lc):
    """Vertex ids for the flow network: s, t, the sides, and one gadget
    vertex per (vertex, label)."""
    a0 = 2
    b0 = a0 + lc.a_count
    al0 = b0 + lc.b_count
    bl0 = al0 + lc.a_count * lc.labels_a
    n = bl0 + lc.b_count * lc.labels_b

    def a_vertex(a):
        return a0 + a

    def b_vertex(b):
        return b0 + b

    def a_label(a, la):
        return al0 + a * lc.labels_a + la

    def b_label(b, lb):
        return bl0 + b * lc.labels_b + lb

    return n, a_vertex, b_vertex, a_label, b_label


def gen_label_cover_reduction(lc):
    """Directed flow instance whose cheap high-flow subgraphs encode
    consistent labelings.

    Vertices: source 0, sink 1, one per constraint-graph vertex, one per
    (vertex, label).  Arcs: s -> a free with capacity degree_a; b -> t
    free with capacity degree_b; a -> (a, la) at cost degree_a, capacity
    degree_a (buying it means "a picks label la"), symmetrically
    (b, lb) -> b; and a free unit arc (a, la) -> (b, lb) for every
    allowed pair of every constraint.  The single demand asks for
    |constraints| units from s to t.
    """
    n, a_vertex, b_vertex, a_label, b_label = _reduction_layout(lc)
    edges = []
    for a in range(lc.a_count):
        edges.append((0, a_vertex(a), lc.degree_a, Fraction(0)))
    for b in range(lc.b_count):
        edges.append((b_vertex(b), 1, lc.degree_b, Fraction(0)))
    for a in range(lc.a_count):
        for la in range(lc.labels_a):
            edges.append((a_vertex(a), a_label(a, la), lc.degree_a, Fraction(lc.degree_a)))
    for b in range(lc.b_count):
        for lb in range(lc.labels_b):
            edges.append((b_label(b, lb), b_vertex(b), lc.degree_b, Fraction(lc.degree_b)))
    for a, b, pairs in lc.relations:
        for la, lb in pairs:
            edges.append((a_label(a, la), b_label(b, lb), 1, Fraction(0)))
    instance = Instance(n, tuple(edges), Pairs(((0, 1, lc.m),)), directed=True)
    size = (
        lc.a_count + lc.b_count + lc.labels_a + lc.labels_b
        + lc.m + sum(len(p) for _, _, p in lc.relations)
    )
    assert instance.n + instance.m <= (size + 2) ** 2, "reduction exceeded quadratic size"
    return instance


@dataclass(frozen=True)
class CertificateCheck:
    cost: Fraction
    flow: int
    expected_cost: int
    expected_flow: int
    edges: tuple

    @property
    def ok(self):
        return self.cost == self.expected_cost and self.flow >= self.expected_flow


def verify_yes_certificate(instance, lc, labeling=None):
    """Materialize the certificate subgraph for a consistent labeling and
    measure it: all free arcs plus the one label arc per vertex that the
    labeling picks.  For a consistent labeling this costs exactly
    2 |constraints| and carries the full demand.

    Raises ValueError if the labeling violates some constraints (they
    are listed) or if `instance` is not the reduction of `lc`.
    """
    if labeling is None:
        labeling = lc.labeling
    if labeling is None:
        raise ValueError("no labeling to verify")
    la, lb = tuple(labeling[0]), tuple(labeling[1])
    bad = lc.violated_by((la, lb))
    if bad:
        raise ValueError(f"labeling violates constraints {list(bad)}")
    expected = gen_label_cover_reduction(lc)
    if instance_to_dict(instance) != instance_to_dict(expected):
        raise ValueError("instance does not match the reduction of this label cover")
    _, a_vertex, b_vertex, a_label, b_label = _reduction_layout(lc)
    picked_a = {(a_vertex(a), a_label(a, la[a])) for a in range(lc.a_count)}
    picked_b = {(b_label(b, lb[b]), b_vertex(b)) for b in range(lc.b_count)}
    chosen = []
    for i, e in enumerate(instance.edges):
        if e.cost == 0 or (e.tail, e.head) in picked_a or (e.tail, e.head) in picked_b:
            chosen.append(i)
    cost = instance.total_cost(chosen)
    flow = max_flow(instance, subset_weighting(instance, chosen), 0, 1)
    return CertificateCheck(cost, flow.value, 2 * lc.m, lc.m, tuple(chosen))


def sample_yes_instances():
    """Five small satisfiable label covers with their labelings, used by
    the certificate checks.  Decoy label pairs keep them from being
    trivially consistent under every labeling."""
    toys = []
    toys.append(LabelCoverInstance(
        1, 1, 1, 1, 1, 1,
        ((0, 0, ((0, 0),)),),
        ((0,), (0,)),
    ))
    toys.append(LabelCoverInstance(
        1, 2, 2, 1, 2, 2,
        ((0, 0, ((1, 0), (0, 1))), (0, 1, ((1, 1),))),
        ((1,), (0, 1)),
    ))
    toys.append(LabelCoverInstance(
        2, 2, 1, 1, 2, 2,
        ((0, 0, ((0, 0), (1, 1))), (1, 1, ((1, 0), (0, 1)))),
        ((0, 1), (0, 0)),
    ))
    toys.append(LabelCoverInstance(
        2, 2, 2, 2, 2, 3,
        (
            (0, 0, ((0, 2), (1, 0))),
            (0, 1, ((0, 1), (1, 2))),
            (1, 0, ((1, 2), (0, 0))),
            (1, 1, ((1, 1), (0, 0))),
        ),
        ((0, 1), (2, 1)),
    ))
    toys.append(LabelCoverInstance(
        3, 2, 2, 3, 3, 2,
        (
            (0, 0, ((0, 0), (2, 1))),
            (0, 1, ((0, 1), (1, 0))),
            (1, 0, ((1, 0), (2, 0))),
            (1, 1, ((1, 1), (0, 0))),
            (2, 0, ((2, 0), (0, 1))),
            (2, 1, ((2, 1), (1, 0))),
        ),
        ((0, 1, 2), (0, 1)),
    ))
    return tuple(toys)


# ---------------------------------------------------------------------------
# random instances

def gen_random(
    kind,
    n,
    m,
    seed,
    cap_range=(1, 10),
    cost_range=(0, 10),
    pairs=1,
    levels=1,
    demand_cap=None,
):
    """Reproducible random connected instance with a feasible requirement.

    A random spanning tree guarantees connectivity; remaining edges are
    uniform vertex pairs (parallel edges allowed, self-loops not).
    Demands are drawn within what the full graph supports (global min
    cut, per-level minimum partition capacity, or per-pair max flow), so
    the result is always feasible; demand_cap lowers the draw ceiling,
    which keeps the exact oracles fast.
    """
    if kind not in ("uniform", "kway", "pairs"):
        raise ValueError(f"unknown kind {kind!r}")
    if n < 2:
        raise ValueError("need at least two vertices")
    if m < n - 1:
        raise ValueError("m is too small for a connected graph")
    if demand_cap is not None and demand_cap < 1:
        raise ValueError("demand_cap must be at least 1")
    rng = random.Random(seed)
    lo_u, hi_u = cap_range
    lo_c, hi_c = cost_range
    if lo_u < 1:
        raise ValueError("capacities must be positive")
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.append((min(a, b), max(a, b)))
    full = []
    for a, b in edges:
        full.append((a, b, rng.randint(lo_u, hi_u), Fraction(rng.randint(lo_c, hi_c))))
    skeleton = Instance(n, tuple(full), Uniform(0))

    def ceiling(value):
        return min(value, demand_cap) if demand_cap else value

    if kind == "uniform":
        mincut = global_min_cut(skeleton, capacity_weighting(skeleton)).capacity
        return replace(skeleton, requirements=Uniform(rng.randint(1, ceiling(mincut))))

    if kind == "kway":
        if levels < 1 or levels + 1 > n:
            raise ValueError("levels must fit the vertex count")
        if n > 10:
            raise CapabilityError("k-way generation enumerates partitions; capped at n = 10")
        w = capacity_weighting(skeleton)
        floors = []
        for j in range(2, levels + 2):
            floors.append(min(
                kway_cut_from_assignment(skeleton, w, assignment).capacity
                for assignment in iter_partitions(n, j)
            ))
        rs = []
        prev = 1
        for mc in floors:
            r = rng.randint(prev, max(prev, ceiling(mc)))
            rs.append(r)
            prev = r
        return replace(skeleton, requirements=KWay(tuple(rs)))

    w = capacity_weighting(skeleton)
    chosen_pairs = []
    seen = set()
    tries = 0
    while len(chosen_pairs) < pairs:
        tries += 1
        if tries > 1000:
            raise RuntimeError("rejection sampling failed to find enough distinct pairs")
        s, t = rng.randrange(n), rng.randrange(n)
        if s == t or (min(s, t), max(s, t)) in seen:
            continue
        seen.add((min(s, t), max(s, t)))
        flow = max_flow(skeleton, w, s, t).value
        chosen_pairs.append((s, t, rng.randint(1, ceiling(flow))))
    return replace(skeleton, requirements=Pairs(tuple(chosen_pairs)))
