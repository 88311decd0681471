"""Forest algorithm for the variant where edges may be bought in copies.

Pairs are processed in nonincreasing demand order while a forest F of
bought edges grows.  In iteration i the edge length is

    len_i(e) = 0                         for e already in F,
    len_i(e) = c(e) * (1 + R_i / u(e))   otherwise,

which is enough to pay for ceil(R_i / u(e)) copies of e.  The pair is
joined by a shortest path under len_i, and in addition each existing
forest component X with d_i(endpoint, X) <= 2^min(class(i), class(X))
is connected to the pair, where class(i) = floor(log2 ell_i) and
class(X) is the largest class of a pair registered in X.  The extra
connections are what later pairs exploit; their cost is charged to
component leaders so that the realized cost never exceeds 9 * sum ell_i
(asserted at runtime on every run).

Charging bookkeeping, per merge: connecting across distance d with
h = floor(log2 d) charges the path to X's h-leader when one is set,
otherwise to X's leader (a registered pair of maximal class), and the
connecting pair becomes the h-leader of the merged component.

Semantics pinned down where the pseudocode is loose:

  * distances are fixed once per iteration; the connection loops run
    over the components existing at loop entry and skip any that have
    merged with the pair's component by the time they come up;
  * components holding no classed pair (isolated vertices, or pairs
    joined at distance 0) are never connection targets;
  * a connection at distance 0 merges for free, with no charge and no
    h-leader update, since there is nothing to pay for;
  * a pair with ell_i = 0 still gets its (zero-length) path added but
    has no class and triggers no connections;
  * path edges whose endpoints are already in one component are
    dropped, keeping F a forest; feasibility survives because every
    forest edge was bought for a demand at least as large.

Pairs with zero demand are ignored throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heappop, heappush

from .errors import InfeasibleError
from .graphs import EdgeWeighting, max_flow
from .util import ceil_div, floor_log2, format_rational, pow2

_INF = float("inf")


# ---------------------------------------------------------------------------
# forest state

@dataclass
class ComponentInfo:
    members: set
    pairs: list = field(default_factory=list)
    cls: object = None  # int once a classed pair registers
    leader: object = None  # pair position holding the maximal class
    h_leaders: dict = field(default_factory=dict)


class ForestState:
    """Disjoint-set over vertices with per-component charging metadata.

    Metadata merges deterministically: on a tie the component with the
    smallest vertex wins, so runs do not depend on union internals.
    """

    def __init__(self, n):
        self.parent = list(range(n))
        self.info = {v: ComponentInfo({v}) for v in range(n)}

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        ia, ib = self.info.pop(ra), self.info.pop(rb)
        if min(ib.members) < min(ia.members):
            ia, ib = ib, ia
            ra, rb = rb, ra
        # ia now belongs to the component with the smallest vertex; its
        # choices win ties below.
        self.parent[rb] = ra
        merged = ComponentInfo(ia.members | ib.members, ia.pairs + ib.pairs)
        if ib.cls is not None and (ia.cls is None or ib.cls > ia.cls):
            merged.cls, merged.leader = ib.cls, ib.leader
        else:
            merged.cls, merged.leader = ia.cls, ia.leader
        merged.h_leaders = dict(ib.h_leaders)
        merged.h_leaders.update(ia.h_leaders)
        self.info[ra] = merged
        return ra

    def component(self, v):
        return self.info[self.find(v)]

    def snapshot(self):
        """Current components as (min member, root, info), sorted."""
        out = [(min(info.members), root, info) for root, info in self.info.items()]
        out.sort(key=lambda t: t[0])
        return out

    def register_pair(self, position, endpoint, cls):
        info = self.component(endpoint)
        info.pairs.append(position)
        if cls is not None and (info.cls is None or cls > info.cls):
            info.cls = cls
            info.leader = position


# ---------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class ChargeRecord:
    iteration: int  # position in processing order
    endpoint: str  # "s" or "t"
    component: tuple  # members of the component connected, sorted
    distance: Fraction
    h: object  # floor(log2 distance), None for a free merge
    target: object  # pair position charged, None for a free merge
    role: str  # "h-leader", "leader", or "free"


@dataclass(frozen=True)
class IterationRecord:
    position: int  # processing order, 0-based
    pair_index: int  # index into instance.requirements.pairs
    s: int
    t: int
    demand: int
    ell: Fraction
    cls: object
    direct_edges: tuple  # edges newly added by the s-t path
    dropped_edges: tuple  # path edges skipped as cycle-closing
    connections: tuple  # ChargeRecords
    connection_edges: tuple  # edges newly added by the connection paths
    copies_bought: tuple  # (edge, count) for this iteration


@dataclass(frozen=True)
class MultiCopySolution:
    instance: object
    order: tuple  # pair indices in processing order
    copies: tuple  # per-edge copy counts
    forest: tuple  # edge indices with a bought copy
    iterations: tuple
    cost: Fraction
    ell_total: Fraction

    @property
    def charge_bound(self):
        return 9 * self.ell_total

    def charges(self):
        return tuple(
            c for it in self.iterations for c in it.connections if c.role != "free"
        )

    def to_json(self):
        return json.dumps(
            {
                "schema": "capnet.multicopy.v1",
                "order": list(self.order),
                "copies": list(self.copies),
                "forest": list(self.forest),
                "cost": format_rational(self.cost),
                "ell_total": format_rational(self.ell_total),
                "charge_bound": format_rational(self.charge_bound),
                "iterations": [
                    {
                        "position": it.position,
                        "pair": it.pair_index,
                        "s": it.s,
                        "t": it.t,
                        "demand": it.demand,
                        "ell": format_rational(it.ell),
                        "class": it.cls,
                        "direct_edges": list(it.direct_edges),
                        "dropped_edges": list(it.dropped_edges),
                        "connection_edges": list(it.connection_edges),
                        "copies": [[e, c] for e, c in it.copies_bought],
                        "connections": [
                            {
                                "endpoint": c.endpoint,
                                "component": list(c.component),
                                "distance": format_rational(c.distance),
                                "h": c.h,
                                "target": c.target,
                                "role": c.role,
                            }
                            for c in it.connections
                        ],
                    }
                    for it in self.iterations
                ],
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    def csv_row(self, oracle_cost=None):
        k = len(self.order)
        opt = "" if oracle_cost is None else format_rational(Fraction(oracle_cost))
        ratio = (
            ""
            if oracle_cost in (None, 0)
            else format_rational(self.cost / Fraction(oracle_cost))
        )
        return "{},{},{},{},{},{}".format(
            k,
            format_rational(self.ell_total),
            format_rational(self.cost),
            format_rational(self.charge_bound),
            opt,
            ratio,
        )


# ---------------------------------------------------------------------------
# shortest paths under per-iteration lengths

def iteration_costs(instance, forest_edges, demand):
    """Edge lengths for one iteration, given the forest bought so far."""
    inf = set(forest_edges)
    out = []
    for i, e in enumerate(instance.edges):
        if i in inf:
            out.append(Fraction(0))
        else:
            out.append(e.cost * (1 + Fraction(demand, e.capacity)))
    return out


def _dijkstra(n, adjacency, lengths, source):
    dist = [_INF] * n
    pred = [None] * n  # (previous vertex, edge index)
    dist[source] = Fraction(0)
    heap = [(Fraction(0), source)]
    while heap:
        d, v = heappop(heap)
        if d > dist[v]:
            continue
        for e, w in adjacency[v]:
            nd = d + lengths[e]
            if nd < dist[w]:
                dist[w] = nd
                pred[w] = (v, e)
                heappush(heap, (nd, w))
    return dist, pred


def _walk_back(pred, source, v):
    edges = []
    while v != source:
        v, e = pred[v]
        edges.append(e)
    edges.reverse()
    return edges


# ---------------------------------------------------------------------------
# the algorithm

def run(instance):
    """Process all positive-demand pairs; returns a MultiCopySolution.

    Deterministic.  Raises InfeasibleError if some pair's endpoints are
    not connected in the underlying graph.  The 9 * sum(ell) cost bound
    is asserted before returning, as is per-pair feasibility of the
    bought copies.
    """
    if instance.directed:
        raise ValueError("the forest algorithm works on undirected instances")
    pairs = instance.requirements.pairs
    order = sorted(
        (j for j in range(len(pairs)) if pairs[j][2] > 0),
        key=lambda j: -pairs[j][2],
    )
    adjacency = [[] for _ in range(instance.n)]
    for i, e in enumerate(instance.edges):
        adjacency[e.tail].append((i, e.head))
        adjacency[e.head].append((i, e.tail))

    state = ForestState(instance.n)
    forest = set()
    copies = [0] * instance.m
    iterations = []
    ell_total = Fraction(0)

    def add_path(edges, new, dropped):
        for e in edges:
            a, b = instance.edges[e].tail, instance.edges[e].head
            if state.find(a) == state.find(b):
                if e not in forest:
                    dropped.append(e)
                continue
            state.union(a, b)
            forest.add(e)
            new.append(e)

    for position, j in enumerate(order):
        s, t, demand = pairs[j]
        lengths = iteration_costs(instance, forest, demand)
        dist_s, pred_s = _dijkstra(instance.n, adjacency, lengths, s)
        if dist_s[t] is _INF:
            raise InfeasibleError(f"pair {j} is disconnected", (s, t))
        dist_t, pred_t = _dijkstra(instance.n, adjacency, lengths, t)
        ell = dist_s[t]
        ell_total += ell

        new_direct, dropped = [], []
        add_path(_walk_back(pred_s, s, t), new_direct, dropped)

        cls = None
        connections = []
        new_conn = []
        if ell > 0:
            cls = floor_log2(ell)
            for endpoint, label, dist, pred in ((s, "s", dist_s, pred_s), (t, "t", dist_t, pred_t)):
                home = state.find(endpoint)
                for _, root, info in state.snapshot():
                    if root == home or state.find(root) == state.find(endpoint):
                        continue
                    if info.cls is None:
                        continue
                    best, best_v = _INF, None
                    for v in sorted(info.members):
                        if dist[v] < best:
                            best, best_v = dist[v], v
                    if best is _INF or best > pow2(min(cls, info.cls)):
                        continue
                    if best > 0:
                        h = floor_log2(best)
                        target = info.h_leaders.get(h, info.leader)
                        role = "h-leader" if h in info.h_leaders else "leader"
                    else:
                        h, target, role = None, None, "free"
                    connections.append(
                        ChargeRecord(
                            position, label, tuple(sorted(info.members)),
                            best, h, target, role,
                        )
                    )
                    add_path(_walk_back(pred, endpoint, best_v), new_conn, dropped)
                    if h is not None:
                        state.component(endpoint).h_leaders[h] = position

        bought = []
        for e in sorted(new_direct + new_conn):
            count = ceil_div(demand, instance.edges[e].capacity)
            copies[e] = count
            bought.append((e, count))
        state.register_pair(position, s, cls)

        iterations.append(
            IterationRecord(
                position, j, s, t, demand, ell, cls,
                tuple(new_direct), tuple(dropped), tuple(connections),
                tuple(new_conn), tuple(bought),
            )
        )

    cost = sum(
        (instance.edges[e].cost * c for e, c in enumerate(copies)), Fraction(0)
    )
    assert cost <= 9 * ell_total, "charging bound failed; this is a bug"
    capacity = EdgeWeighting(
        tuple(copies[e] * instance.edges[e].capacity for e in range(instance.m)),
        "copies",
    )
    for j in order:
        s, t, demand = pairs[j]
        flow = max_flow(instance, capacity, s, t, cutoff=demand)
        assert flow.value >= demand, f"pair {j} left infeasible; this is a bug"

    return MultiCopySolution(
        instance, tuple(order), tuple(copies), tuple(sorted(forest)),
        tuple(iterations), cost, ell_total,
    )


# ---------------------------------------------------------------------------
# baseline

@dataclass(frozen=True)
class BaselineSolution:
    instance: object
    copies: tuple
    cost: Fraction
    paths: tuple  # (pair index, path edges, path cost)


def baseline_independent_pairs(instance):
    """Buy each pair its own cheapest path, ignoring all other pairs.

    Copies accumulate across pairs; the reported cost is the literal sum
    of the per-pair purchases, the natural no-sharing strawman.
    """
    if instance.directed:
        raise ValueError("the baseline works on undirected instances")
    pairs = instance.requirements.pairs
    adjacency = [[] for _ in range(instance.n)]
    for i, e in enumerate(instance.edges):
        adjacency[e.tail].append((i, e.head))
        adjacency[e.head].append((i, e.tail))
    copies = [0] * instance.m
    cost = Fraction(0)
    paths = []
    for j, (s, t, demand) in enumerate(pairs):
        if demand == 0:
            continue
        lengths = [
            ceil_div(demand, e.capacity) * e.cost for e in instance.edges
        ]
        dist, pred = _dijkstra(instance.n, adjacency, lengths, s)
        if dist[t] is _INF:
            raise InfeasibleError(f"pair {j} is disconnected", (s, t))
        path = _walk_back(pred, s, t)
        for e in path:
            copies[e] += ceil_div(demand, instance.edges[e].capacity)
        cost += dist[t]
        paths.append((j, tuple(path), dist[t]))
    return BaselineSolution(instance, tuple(copies), cost, tuple(paths))
