"""Multigraph model with exact arithmetic plus flow and cut primitives.

Vertices are 0..n-1.  Parallel edges are allowed, self-loops are not.
Capacities are positive integers, costs nonnegative rationals.  An
instance carries one of three requirement shapes:

  * Uniform(R): the global min cut of the bought subgraph must be >= R;
  * KWay(R_1 <= ... <= R_{k-1}): every (i+1)-way cut must have capacity
    >= R_i;
  * Pairs((s, t, R), ...): each listed pair needs an s-t flow of R.

Directed instances are accepted only with Pairs requirements; the other
two shapes are cut conditions on undirected graphs.

Flow and cut queries take an EdgeWeighting so the same topology can be
evaluated under capacities, costs, scaled capacities, or a subset
restriction without rebuilding anything.  All values stay exact: integer
weightings give integer flows, rational weightings give rational flows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InstanceFormatError
from .util import format_rational, iter_partitions


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    capacity: int
    cost: Fraction


@dataclass(frozen=True)
class Uniform:
    R: int


@dataclass(frozen=True)
class KWay:
    # R_1..R_{k-1}, nondecreasing; entry i-1 bounds every (i+1)-way cut
    Rs: tuple


@dataclass(frozen=True)
class Pairs:
    pairs: tuple  # of (source, sink, demand)


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple
    requirements: object
    directed: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InstanceFormatError("n", "need at least one vertex")
        coerced = []
        for i, e in enumerate(self.edges):
            if not isinstance(e, Edge):
                tail, head, cap, cost = e
                e = Edge(tail, head, cap, Fraction(cost))
            _validate_edge(i, e, self.n)
            coerced.append(e)
        object.__setattr__(self, "edges", tuple(coerced))
        _validate_requirements(self.requirements, self.n, self.directed)

    @property
    def m(self):
        return len(self.edges)

    def total_cost(self, edge_subset):
        return sum((self.edges[e].cost for e in edge_subset), Fraction(0))


def _validate_edge(i, e, n):
    for fld, v in (("tail", e.tail), ("head", e.head)):
        if not isinstance(v, int) or not 0 <= v < n:
            raise InstanceFormatError(f"edges[{i}].{fld}", f"vertex {v!r} out of range")
    if e.tail == e.head:
        raise InstanceFormatError(f"edges[{i}]", "self-loops are not allowed")
    if not isinstance(e.capacity, int) or e.capacity < 1:
        raise InstanceFormatError(f"edges[{i}].capacity", "capacity must be a positive integer")
    if e.cost < 0:
        raise InstanceFormatError(f"edges[{i}].cost", "cost must be nonnegative")


def _validate_requirements(req, n, directed):
    if isinstance(req, Uniform):
        if not isinstance(req.R, int) or req.R < 0:
            raise InstanceFormatError("requirements.R", "R must be a nonnegative integer")
        if directed:
            raise InstanceFormatError("directed", "uniform requirements need an undirected graph")
    elif isinstance(req, KWay):
        rs = tuple(req.Rs)
        object.__setattr__(req, "Rs", rs)
        if not rs:
            raise InstanceFormatError("requirements.Rs", "need at least one bound")
        if len(rs) + 1 > n:
            raise InstanceFormatError("requirements.Rs", "more cut levels than vertices")
        for i, r in enumerate(rs):
            if not isinstance(r, int) or r < 1:
                raise InstanceFormatError(f"requirements.Rs[{i}]", "bounds must be positive integers")
            if i and r < rs[i - 1]:
                raise InstanceFormatError(f"requirements.Rs[{i}]", "bounds must be nondecreasing")
        if directed:
            raise InstanceFormatError("directed", "k-way requirements need an undirected graph")
    elif isinstance(req, Pairs):
        pairs = tuple(tuple(p) for p in req.pairs)
        object.__setattr__(req, "pairs", pairs)
        for i, (s, t, r) in enumerate(pairs):
            if not (isinstance(s, int) and 0 <= s < n):
                raise InstanceFormatError(f"requirements.pairs[{i}][0]", f"vertex {s!r} out of range")
            if not (isinstance(t, int) and 0 <= t < n):
                raise InstanceFormatError(f"requirements.pairs[{i}][1]", f"vertex {t!r} out of range")
            if s == t:
                raise InstanceFormatError(f"requirements.pairs[{i}]", "source and sink must differ")
            if not isinstance(r, int) or r < 0:
                raise InstanceFormatError(f"requirements.pairs[{i}][2]", "demand must be a nonnegative integer")
    else:
        raise InstanceFormatError("requirements", f"unknown requirement type {type(req).__name__}")


# ---------------------------------------------------------------------------
# weightings

@dataclass(frozen=True)
class EdgeWeighting:
    values: tuple
    label: str = ""

    def __getitem__(self, e):
        return self.values[e]

    def __len__(self):
        return len(self.values)


def capacity_weighting(instance):
    return EdgeWeighting(tuple(e.capacity for e in instance.edges), "u")


def cost_weighting(instance):
    return EdgeWeighting(tuple(e.cost for e in instance.edges), "c")


def fractional_capacity(instance, x):
    """Capacity scaled by a fractional selection: weight u(e) * x_e."""
    if len(x) != instance.m:
        raise ValueError("x must assign a value to every edge")
    return EdgeWeighting(
        tuple(e.capacity * Fraction(x[i]) for i, e in enumerate(instance.edges)), "uhat"
    )


def subset_weighting(instance, edge_subset):
    """Capacity on the chosen edges, zero elsewhere."""
    chosen = set(edge_subset)
    for e in chosen:
        if not 0 <= e < instance.m:
            raise ValueError(f"edge index {e} out of range")
    return EdgeWeighting(
        tuple(e.capacity if i in chosen else 0 for i, e in enumerate(instance.edges)),
        "u|subset",
    )


# ---------------------------------------------------------------------------
# cuts

@dataclass(frozen=True)
class Cut:
    """A vertex cut, stored by one side.

    Undirected cuts are canonical: `side` excludes vertex 0, so each
    bipartition has a single representative.  For directed instances the
    side is kept as given (it is the source side) and `crossing` holds the
    arcs leaving it.
    """

    side: frozenset
    crossing: tuple
    capacity: object
    directed: bool = False

    def separates(self, s, t):
        return (s in self.side) != (t in self.side)


def crossing_edges(instance, side):
    side = frozenset(side)
    out = []
    for i, e in enumerate(instance.edges):
        if instance.directed:
            if e.tail in side and e.head not in side:
                out.append(i)
        elif (e.tail in side) != (e.head in side):
            out.append(i)
    return tuple(out)


def cut_from_side(instance, weighting, side):
    side = frozenset(side)
    if not 0 < len(side) < instance.n:
        raise ValueError("cut side must be a nonempty proper vertex subset")
    if not instance.directed and 0 in side:
        side = frozenset(range(instance.n)) - side
    crossing = crossing_edges(instance, side)
    cap = sum(weighting[e] for e in crossing)
    return Cut(side, crossing, cap, instance.directed)


@dataclass(frozen=True)
class KWayCut:
    """A partition of the vertices into >= 2 parts with its crossing edges.

    Parts are frozensets ordered by smallest member, which makes equal
    partitions compare equal.
    """

    parts: tuple
    crossing: tuple
    capacity: object

    @property
    def way(self):
        return len(self.parts)


def kway_cut_from_assignment(instance, weighting, assignment):
    blocks = max(assignment) + 1
    parts = [set() for _ in range(blocks)]
    for v, b in enumerate(assignment):
        parts[b].add(v)
    parts = tuple(sorted((frozenset(p) for p in parts), key=min))
    crossing = tuple(
        i for i, e in enumerate(instance.edges) if assignment[e.tail] != assignment[e.head]
    )
    cap = sum(weighting[e] for e in crossing)
    return KWayCut(parts, crossing, cap)


# ---------------------------------------------------------------------------
# maximum flow

@dataclass(frozen=True)
class FlowResult:
    value: object
    exact: bool            # False when the run stopped early at `cutoff`
    source_side: object    # residual-reachable vertices; min cut side iff exact
    decomposition: object  # tuple of (path vertices, amount), or None


def max_flow(instance, weighting, source, sink, cutoff=None, want_decomposition=False):
    """Exact max flow from `source` to `sink` under `weighting`.

    Undirected edges may carry flow either way up to their weight.  With
    `cutoff` the search stops as soon as the value reaches it; the result
    is then a lower bound and is flagged inexact.  An unreachable sink is
    a legitimate zero flow, not an error.
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    n = instance.n
    adj = [[] for _ in range(n)]
    arcs = []  # [head, residual]; arc i^1 is the reverse of arc i

    def add_arc(u, v, cap):
        adj[u].append(len(arcs))
        arcs.append([v, cap])
        adj[v].append(len(arcs))
        arcs.append([u, 0])

    for i, e in enumerate(instance.edges):
        w = weighting[i]
        if w < 0:
            raise ValueError(f"negative weight on edge {i}")
        if instance.directed:
            add_arc(e.tail, e.head, w)
        else:
            add_arc(e.tail, e.head, w)
            add_arc(e.head, e.tail, w)

    orig = [a[1] for a in arcs]
    value = 0
    while cutoff is None or value < cutoff:
        parent = [-1] * n
        parent[source] = -2
        queue = [source]
        for u in queue:
            for a in adj[u]:
                v = arcs[a][0]
                if parent[v] == -1 and arcs[a][1] > 0:
                    parent[v] = a
                    queue.append(v)
        if parent[sink] == -1:
            break
        bottleneck = None
        v = sink
        while v != source:
            a = parent[v]
            r = arcs[a][1]
            if bottleneck is None or r < bottleneck:
                bottleneck = r
            v = arcs[a ^ 1][0]
        if cutoff is not None and value + bottleneck > cutoff:
            bottleneck = cutoff - value
        v = sink
        while v != source:
            a = parent[v]
            arcs[a][1] -= bottleneck
            arcs[a ^ 1][1] += bottleneck
            v = arcs[a ^ 1][0]
        value += bottleneck

    reach = {source}
    queue = [source]
    for u in queue:
        for a in adj[u]:
            v = arcs[a][0]
            if v not in reach and arcs[a][1] > 0:
                reach.add(v)
                queue.append(v)
    exact = sink not in reach

    decomposition = None
    if want_decomposition:
        decomposition = _decompose(instance, arcs, orig, source, sink, value, n)
    return FlowResult(value, exact, frozenset(reach), decomposition)


def _decompose(instance, arcs, orig, source, sink, value, n):
    # Net per-edge flow, oriented by sign, then strip source-sink paths.
    out = [[] for _ in range(n)]  # vertex -> list of [to, amount, edge]
    step = 2 if instance.directed else 4
    for i, e in enumerate(instance.edges):
        fwd = orig[step * i] - arcs[step * i][1]
        bwd = 0 if instance.directed else orig[step * i + 2] - arcs[step * i + 2][1]
        net = fwd - bwd
        if net > 0:
            out[e.tail].append([e.head, net, i])
        elif net < 0:
            out[e.head].append([e.tail, -net, i])
    paths = []
    remaining = value
    while remaining > 0:
        parent = {source: None}
        queue = [source]
        for u in queue:
            for slot in out[u]:
                v = slot[0]
                if v not in parent and slot[1] > 0:
                    parent[v] = (u, slot)
                    queue.append(v)
        if sink not in parent:
            raise AssertionError("flow decomposition lost value")
        hop, chain = sink, []
        while parent[hop] is not None:
            u, slot = parent[hop]
            chain.append((u, slot))
            hop = u
        chain.reverse()
        amount = min(slot[1] for _, slot in chain)
        amount = min(amount, remaining)
        for _, slot in chain:
            slot[1] -= amount
        paths.append((tuple([source] + [slot[0] for _, slot in chain]), amount))
        remaining -= amount
    return tuple(paths)


def global_min_cut(instance, weighting):
    """Minimum-capacity cut over all bipartitions (undirected).

    Runs n-1 max flows from vertex 0; every cut separates 0 from some
    vertex, so the cheapest of those witnesses is a global minimum.  A
    disconnected graph yields a legitimate zero-capacity cut.
    """
    if instance.directed:
        raise ValueError("global min cut is defined here for undirected instances")
    if instance.n < 2:
        raise ValueError("need at least two vertices")
    best = None
    for v in range(1, instance.n):
        res = max_flow(instance, weighting, 0, v)
        if best is None or res.value < best[0]:
            best = (res.value, res.source_side)
    side = frozenset(range(instance.n)) - best[1]  # canonical: excludes vertex 0
    cut = cut_from_side(instance, weighting, side)
    assert cut.capacity == best[0]
    return cut


# ---------------------------------------------------------------------------
# feasibility

@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: object = None     # Cut or KWayCut violating its requirement
    exact: bool = True
    note: str = ""
    pair_index: object = None  # which pair failed, for Pairs requirements


def check_feasible(instance, edge_subset, kway_cut_pool=None):
    """Does buying `edge_subset` meet the instance requirements?

    Uniform and Pairs checks are exact at any size (they reduce to max
    flows).  KWay is exact for n <= 10 by enumerating partitions; beyond
    that the check degrades to the 2-way level plus whatever cut pool the
    caller supplies, and the result is flagged inexact rather than passed
    silently.
    """
    w = subset_weighting(instance, edge_subset)
    req = instance.requirements

    if isinstance(req, Uniform):
        if req.R == 0:
            return FeasibilityResult(True)
        for v in range(1, instance.n):
            res = max_flow(instance, w, 0, v, cutoff=req.R)
            if res.value < req.R:
                side = frozenset(range(instance.n)) - res.source_side
                return FeasibilityResult(False, cut_from_side(instance, w, side))
        return FeasibilityResult(True)

    if isinstance(req, Pairs):
        for idx, (s, t, r) in enumerate(req.pairs):
            if r == 0:
                continue
            res = max_flow(instance, w, s, t, cutoff=r)
            if res.value < r:
                if instance.directed:
                    witness = cut_from_side(instance, w, res.source_side)
                else:
                    side = frozenset(range(instance.n)) - res.source_side
                    witness = cut_from_side(instance, w, side)
                return FeasibilityResult(False, witness, pair_index=idx)
        return FeasibilityResult(True)

    if isinstance(req, KWay):
        if instance.n <= 10:
            for i, r in enumerate(req.Rs):
                for assignment in iter_partitions(instance.n, i + 2):
                    cut = kway_cut_from_assignment(instance, w, assignment)
                    if cut.capacity < r:
                        return FeasibilityResult(False, cut)
            return FeasibilityResult(True)
        # Too large to enumerate partitions: check the 2-way level exactly,
        # then any supplied pool.  Never a silent pass.
        gm = global_min_cut(instance, w)
        if gm.capacity < req.Rs[0]:
            return FeasibilityResult(False, gm, exact=False, note="heuristic check")
        if kway_cut_pool is not None:
            for cut in kway_cut_pool:
                level = cut.way - 2
                if level < len(req.Rs):
                    cap = sum(w[e] for e in cut.crossing)
                    if cap < req.Rs[level]:
                        return FeasibilityResult(False, cut, exact=False, note="heuristic check")
        return FeasibilityResult(
            True, exact=False,
            note="heuristic check: levels beyond 2-way verified only against the supplied pool",
        )

    raise TypeError(f"unknown requirement type {type(req).__name__}")


# ---------------------------------------------------------------------------
# serialization

def instance_to_dict(instance):
    req = instance.requirements
    if isinstance(req, Uniform):
        rd = {"kind": "uniform", "R": req.R}
    elif isinstance(req, KWay):
        rd = {"kind": "kway", "Rs": list(req.Rs)}
    else:
        rd = {"kind": "pairs", "pairs": [list(p) for p in req.pairs]}
    return {
        "n": instance.n,
        "directed": instance.directed,
        "edges": [
            [e.tail, e.head, e.capacity, e.cost.numerator, e.cost.denominator]
            for e in instance.edges
        ],
        "requirements": rd,
    }


def serialize_instance(instance) -> str:
    """Canonical JSON text; equal instances serialize to identical bytes."""
    return json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":")) + "\n"


def _expect(container, key, kinds, where):
    if isinstance(container, dict):
        if key not in container:
            raise InstanceFormatError(where, "missing")
        value = container[key]
    else:
        value = key
    if kinds is not None and (not isinstance(value, kinds) or isinstance(value, bool)):
        raise InstanceFormatError(where, f"expected {kinds}, got {type(value).__name__}")
    return value


def instance_from_dict(data):
    if not isinstance(data, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    n = _expect(data, "n", int, "n")
    directed = data.get("directed", False)
    if not isinstance(directed, bool):
        raise InstanceFormatError("directed", "expected a boolean")
    raw_edges = _expect(data, "edges", list, "edges")
    edges = []
    for i, row in enumerate(raw_edges):
        if not isinstance(row, list) or len(row) != 5:
            raise InstanceFormatError(f"edges[{i}]", "expected [tail, head, capacity, cost_num, cost_den]")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool):
                raise InstanceFormatError(f"edges[{i}][{j}]", "expected an integer")
        tail, head, cap, num, den = row
        if den <= 0:
            raise InstanceFormatError(f"edges[{i}][4]", "cost denominator must be positive")
        edges.append(Edge(tail, head, cap, Fraction(num, den)))
    rd = _expect(data, "requirements", dict, "requirements")
    kind = _expect(rd, "kind", str, "requirements.kind")
    if kind == "uniform":
        req = Uniform(_expect(rd, "R", int, "requirements.R"))
    elif kind == "kway":
        rs = _expect(rd, "Rs", list, "requirements.Rs")
        req = KWay(tuple(rs))
    elif kind == "pairs":
        rows = _expect(rd, "pairs", list, "requirements.pairs")
        pairs = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 3:
                raise InstanceFormatError(f"requirements.pairs[{i}]", "expected [source, sink, demand]")
            pairs.append(tuple(row))
        req = Pairs(tuple(pairs))
    else:
        raise InstanceFormatError("requirements.kind", f"unknown kind {kind!r}")
    return Instance(n, tuple(edges), req, directed)


def parse_instance(text) -> Instance:
    if isinstance(text, bytes):
        text = text.decode()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<json>", str(exc)) from exc
    return instance_from_dict(data)


def describe_cut(cut):
    if isinstance(cut, KWayCut):
        return {"parts": [sorted(p) for p in cut.parts], "capacity": format_rational(cut.capacity)}
    return {"side": sorted(cut.side), "capacity": format_rational(cut.capacity)}
