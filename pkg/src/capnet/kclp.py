"""Cut LP with knapsack-cover strengthening, solved by cutting planes.

The fractional relaxation we want is the cut-covering LP augmented with
knapsack-cover inequalities: for a cut S with requirement R(S) and any
edge set A, the edges of S outside A must cover the requirement left
after A is taken for granted,

    sum over e in cross(S) minus A of  min(u(e), R(S, A)) * x_e  >=  R(S, A)
    with  R(S, A) = max(0, R(S) - u(A intersect cross(S))).

These inequalities hold for every feasible integral selection, so any
subset of them prices below the integral optimum.  Rather than running a
separation-oracle ellipsoid method, solve_good keeps an explicit, growing
constraint pool and alternates exact LP solves with separation rounds:

  1. restore the plain cut condition under uhat(e) = u(e) * x_e;
  2. rebuild the pool of small cuts (capacity at most twice the
     requirement under uhat) and look for violated knapsack-cover
     inequalities over them.

For step 2 each cut is tested against a nested family of candidate A
sets, the prefixes of its crossing edges ordered by decreasing x, plus
the nearly-integral set itself.  The loop stops when nothing is violated,
which certifies the two exit conditions the rounding step relies on:
the scaled capacities cover every requirement, and knapsack-cover holds
on every small cut for the nearly-integral edge set.

An edge counts as nearly integral when x_e >= 1 / (40 lg n) for the
uniform variant, 1 / (40 k lg n) for the k-way variant, and
1 / (40 gamma lg n) for the near-uniform variant (lg is the fixed-point
base-2 log from util, so thresholds are rational and reproducible).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cutenum import EXHAUSTIVE_LIMIT, KWAY_LIMIT, enumerate_cuts_within
from .errors import CapabilityError, InfeasibleError, IterationLimitError
from .graphs import (
    KWay,
    KWayCut,
    Pairs,
    Uniform,
    check_feasible,
    cut_from_side,
    describe_cut,
    fractional_capacity,
    global_min_cut,
    kway_cut_from_assignment,
    max_flow,
)
from .simplex import solve_box_covering_lp
from .util import format_rational, iter_partitions, log2_fixed

SEPARATION_BATCH = 40


# ---------------------------------------------------------------------------
# variants

@dataclass(frozen=True)
class UniformVariant:
    R: int


@dataclass(frozen=True)
class KWayVariant:
    Rs: tuple

    @property
    def k(self):
        return len(self.Rs) + 1


@dataclass(frozen=True)
class NearUniformVariant:
    gamma: Fraction
    base: int  # smallest pair demand; every demand lies in [base, gamma*base]


def variant_for(instance, gamma=None):
    """Derive the solver variant from the instance requirements."""
    req = instance.requirements
    if isinstance(req, Uniform):
        return UniformVariant(req.R)
    if isinstance(req, KWay):
        return KWayVariant(tuple(req.Rs))
    demands = [r for (_, _, r) in req.pairs if r > 0]
    if not demands:
        return NearUniformVariant(Fraction(1), 0)
    base = min(demands)
    spread = Fraction(max(demands), base)
    if gamma is None:
        gamma = spread
    else:
        gamma = Fraction(gamma)
        if gamma < spread:
            raise ValueError(f"gamma {gamma} below the demand spread {spread}")
    return NearUniformVariant(gamma, base)


def scale_factor(variant, n):
    """Sampling scale: highly fractional edges are kept with prob scale * x."""
    lg = log2_fixed(n)
    if isinstance(variant, UniformVariant):
        return 40 * lg
    if isinstance(variant, KWayVariant):
        return 40 * variant.k * lg
    if isinstance(variant, NearUniformVariant):
        return 40 * variant.gamma * lg
    raise TypeError(f"unknown variant {type(variant).__name__}")


def nearly_integral_threshold(variant, n):
    return 1 / scale_factor(variant, n)


# ---------------------------------------------------------------------------
# solutions and constraints

@dataclass(frozen=True)
class FractionalSolution:
    instance: object
    x: tuple
    threshold: Fraction

    def __post_init__(self):
        xs = tuple(Fraction(v) for v in self.x)
        if len(xs) != self.instance.m:
            raise ValueError("x must assign a value to every edge")
        if any(v < 0 or v > 1 for v in xs):
            raise ValueError("x entries must lie in [0, 1]")
        object.__setattr__(self, "x", xs)

    def cost(self):
        return sum(
            (e.cost * v for e, v in zip(self.instance.edges, self.x)), Fraction(0)
        )

    def uhat(self):
        return fractional_capacity(self.instance, self.x)

    def nearly_integral(self):
        # Recomputed on demand so it can never go stale.
        return tuple(i for i, v in enumerate(self.x) if v >= self.threshold)


def cut_requirement(instance, cut):
    """The demand a given cut must cover, per the instance requirements."""
    req = instance.requirements
    if isinstance(req, Uniform):
        return req.R
    if isinstance(req, KWay):
        if isinstance(cut, KWayCut):
            return req.Rs[cut.way - 2]
        return req.Rs[0]
    best = 0
    for s, t, r in req.pairs:
        if cut.separates(s, t) and r > best:
            best = r
    return best


def residual_requirement(instance, cut, edge_set, requirement=None):
    """Demand left on `cut` once the edges of `edge_set` are taken as bought.

    Never negative: a set already covering the cut leaves nothing to ask
    of the remaining edges.
    """
    if requirement is None:
        requirement = cut_requirement(instance, cut)
    covered = sum(
        instance.edges[e].capacity for e in set(edge_set) & set(cut.crossing)
    )
    return max(0, requirement - covered)


@dataclass(frozen=True)
class KCConstraint:
    """One knapsack-cover row:  sum of coeff * x_e  >=  rhs.

    coefficients run over the cut's crossing edges outside edge_set and
    are capacities clamped at the residual, so rows stay valid for every
    feasible integral selection.  edge_set empty reproduces the plain cut
    constraint with capacities clamped at the full requirement.
    """

    cut: object
    edge_set: tuple
    requirement: int
    rhs: int
    coefficients: tuple  # of (edge index, coefficient)

    def key(self):
        if isinstance(self.cut, KWayCut):
            return (self.cut.parts, self.edge_set)
        return (self.cut.side, self.edge_set)

    def sort_key(self):
        if isinstance(self.cut, KWayCut):
            shape = tuple(tuple(sorted(p)) for p in self.cut.parts)
        else:
            shape = (tuple(sorted(self.cut.side)),)
        return (shape, self.edge_set)

    def evaluate(self, x):
        lhs = sum((c * x[e] for e, c in self.coefficients), Fraction(0))
        return lhs - self.rhs  # slack; negative means violated

    def describe(self):
        d = describe_cut(self.cut)
        d.update(
            {
                "edge_set": list(self.edge_set),
                "requirement": self.requirement,
                "rhs": self.rhs,
                "coefficients": [[e, c] for e, c in self.coefficients],
            }
        )
        return d


def build_kc(instance, cut, edge_set, requirement=None, clamp=True):
    if requirement is None:
        requirement = cut_requirement(instance, cut)
    edge_set = tuple(sorted(set(edge_set)))
    rhs = residual_requirement(instance, cut, edge_set, requirement)
    inside = set(edge_set)
    coeffs = []
    for e in cut.crossing:
        if e in inside:
            continue
        cap = instance.edges[e].capacity
        coeffs.append((e, min(cap, rhs) if clamp else cap))
    return KCConstraint(cut, edge_set, requirement, rhs, tuple(coeffs))


def check_kc(instance, x, cut, edge_set, requirement=None):
    """Test one knapsack-cover inequality.  Returns (satisfied, slack)."""
    con = build_kc(instance, cut, edge_set, requirement)
    if con.rhs == 0:
        return True, Fraction(0)
    slack = con.evaluate([Fraction(v) for v in x])
    return slack >= 0, slack


class ConstraintPool:
    """Grow-only pool of rows, deduplicated by (cut, edge set)."""

    def __init__(self):
        self.constraints = []
        self._keys = set()

    def add(self, con):
        key = con.key()
        if key in self._keys:
            return False
        self._keys.add(key)
        self.constraints.append(con)
        return True

    def __contains__(self, key):
        return key in self._keys

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)


# ---------------------------------------------------------------------------
# separation

def _candidate_edge_sets(cut, x, threshold):
    """Nested prefixes of the crossing edges by decreasing x, plus the
    nearly-integral subset.  Empty set included."""
    order = sorted(cut.crossing, key=lambda e: (-x[e], e))
    cands = [()]
    seen = {()}
    prefix = []
    for i, e in enumerate(order):
        prefix.append(e)
        if i + 1 < len(order) and x[order[i + 1]] == x[e]:
            continue  # split only at distinct x values
        key = tuple(sorted(prefix))
        if key not in seen:
            seen.add(key)
            cands.append(key)
    frozen = tuple(sorted(e for e in cut.crossing if x[e] >= threshold))
    if frozen not in seen:
        cands.append(frozen)
    return cands


def _small_cut_pools(instance, uhat, variant):
    """Cuts worth testing: capacity under uhat at most twice the demand."""
    if isinstance(variant, UniformVariant):
        return [enumerate_cuts_within(instance, uhat, 2 * variant.R)]
    if isinstance(variant, NearUniformVariant):
        bound = 2 * variant.gamma * variant.base
        return [enumerate_cuts_within(instance, uhat, bound)]
    pools = []
    for i, r in enumerate(variant.Rs):
        level = []
        for assignment in iter_partitions(instance.n, i + 2):
            cut = kway_cut_from_assignment(instance, uhat, assignment)
            if cut.capacity <= 2 * r:
                level.append(cut)
        pools.append(level)
    return pools


def _violated_requirement_cuts(instance, uhat, variant, clamp):
    """Condition 1 separation: cuts whose uhat capacity misses the demand."""
    out = []
    if isinstance(variant, UniformVariant):
        if variant.R == 0:
            return out
        mincut = global_min_cut(instance, uhat)
        if mincut.capacity >= variant.R:
            return out
        if instance.n <= EXHAUSTIVE_LIMIT:
            for cut in enumerate_cuts_within(instance, uhat, variant.R):
                if cut.capacity < variant.R:
                    out.append(build_kc(instance, cut, (), variant.R, clamp))
        else:
            out.append(build_kc(instance, mincut, (), variant.R, clamp))
        return out
    if isinstance(variant, NearUniformVariant):
        if instance.n <= EXHAUSTIVE_LIMIT:
            for cut in enumerate_cuts_within(instance, uhat, max(
                (r for (_, _, r) in instance.requirements.pairs), default=0
            )):
                need = cut_requirement(instance, cut)
                if need > 0 and cut.capacity < need:
                    out.append(build_kc(instance, cut, (), need, clamp))
        else:
            for s, t, r in instance.requirements.pairs:
                if r == 0:
                    continue
                res = max_flow(instance, uhat, s, t, cutoff=r)
                if res.value < r:
                    side = frozenset(range(instance.n)) - res.source_side
                    cut = cut_from_side(instance, uhat, side)
                    need = cut_requirement(instance, cut)
                    out.append(build_kc(instance, cut, (), need, clamp))
        return out
    for i, r in enumerate(variant.Rs):
        for assignment in iter_partitions(instance.n, i + 2):
            cut = kway_cut_from_assignment(instance, uhat, assignment)
            if cut.capacity < r:
                out.append(build_kc(instance, cut, (), r, clamp))
    return out


def _violated_kc(instance, x, uhat, variant, threshold, pool):
    out = []
    for cuts in _small_cut_pools(instance, uhat, variant):
        for cut in cuts:
            need = cut_requirement(instance, cut)
            if need == 0:
                continue
            for cand in _candidate_edge_sets(cut, x, threshold):
                con = build_kc(instance, cut, cand, need)
                if con.rhs == 0 or con.key() in pool:
                    continue
                if con.evaluate(x) < 0:
                    out.append(con)
    return out


# ---------------------------------------------------------------------------
# certificates and the main loop

@dataclass(frozen=True)
class GoodCertificate:
    variant: object
    threshold: Fraction
    scale: Fraction
    rounds: int
    cost: Fraction
    x: tuple
    constraints: tuple
    slacks: tuple
    deviations: tuple

    def to_json(self):
        return json.dumps(
            {
                "schema": "capnet.good-solution.v1",
                "variant": _variant_dict(self.variant),
                "threshold": format_rational(self.threshold),
                "scale": format_rational(self.scale),
                "rounds": self.rounds,
                "cost": format_rational(self.cost),
                "x": [format_rational(v) for v in self.x],
                "constraints": [
                    dict(c.describe(), slack=format_rational(s))
                    for c, s in zip(self.constraints, self.slacks)
                ],
                "deviations": list(self.deviations),
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def _variant_dict(variant):
    if isinstance(variant, UniformVariant):
        return {"kind": "uniform", "R": variant.R}
    if isinstance(variant, KWayVariant):
        return {"kind": "kway", "Rs": list(variant.Rs)}
    return {
        "kind": "near-uniform",
        "gamma": format_rational(variant.gamma),
        "base": variant.base,
    }


_DEVIATIONS = (
    "relaxation solved by a cutting-plane loop over an explicit constraint pool "
    "with an exact rational simplex, not by ellipsoid plus binary search",
    "separation tests nested prefix candidates for the taken-for-granted edge set, "
    "not only the nearly-integral set",
)
_NEAR_UNIFORM_DEVIATION = (
    "residual demand uses max(0, R(S) - u(A on the cut)); a min in its place "
    "would make every row vacuous"
)


def _check_variant(instance, variant):
    req = instance.requirements
    ok = (
        (isinstance(variant, UniformVariant) and isinstance(req, Uniform))
        or (isinstance(variant, KWayVariant) and isinstance(req, KWay))
        or (isinstance(variant, NearUniformVariant) and isinstance(req, Pairs))
    )
    if not ok:
        raise ValueError(
            f"variant {type(variant).__name__} does not match requirements {type(req).__name__}"
        )
    if isinstance(variant, KWayVariant) and tuple(variant.Rs) != tuple(req.Rs):
        raise ValueError("variant bounds differ from the instance requirements")
    if isinstance(variant, UniformVariant) and variant.R != req.R:
        raise ValueError("variant R differs from the instance requirement")


def solve_good(instance, variant=None, gamma=None, seed=0, kc=True, iteration_cap=None):
    """Cut LP solve with knapsack-cover separation.

    Returns (FractionalSolution, GoodCertificate).  With kc=False the loop
    separates only the plain (unclamped) cut constraints, which yields the
    standard relaxation optimum.  Deterministic given (instance, variant,
    seed).  Raises InfeasibleError when even the full edge set cannot meet
    the requirements, IterationLimitError if the round cap trips.
    """
    if instance.directed:
        raise ValueError("solve_good works on undirected instances")
    if instance.n < 2:
        raise ValueError("need at least two vertices")
    if variant is None:
        variant = variant_for(instance, gamma)
    _check_variant(instance, variant)
    if isinstance(variant, KWayVariant) and instance.n > KWAY_LIMIT:
        raise CapabilityError(f"k-way separation is exhaustive only; capped at n = {KWAY_LIMIT}")
    if instance.n > EXHAUSTIVE_LIMIT:
        raise CapabilityError(
            f"small-cut pools are rebuilt exhaustively; capped at n = {EXHAUSTIVE_LIMIT}"
        )

    threshold = nearly_integral_threshold(variant, instance.n)
    scale = scale_factor(variant, instance.n)
    deviations = list(_DEVIATIONS)
    if isinstance(variant, NearUniformVariant):
        deviations.append(_NEAR_UNIFORM_DEVIATION)

    full = check_feasible(instance, range(instance.m))
    if not full.feasible:
        raise InfeasibleError("requirements exceed the full edge set", full.witness)

    trivial = (
        (isinstance(variant, UniformVariant) and variant.R == 0)
        or (isinstance(variant, NearUniformVariant)
            and all(r == 0 for (_, _, r) in instance.requirements.pairs))
    )
    if trivial:
        x = tuple(Fraction(0) for _ in range(instance.m))
        sol = FractionalSolution(instance, x, threshold)
        cert = GoodCertificate(
            variant, threshold, scale, 0, Fraction(0), x, (), (), tuple(deviations)
        )
        return sol, cert

    costs = [e.cost for e in instance.edges]
    pool = ConstraintPool()
    cap = iteration_cap if iteration_cap is not None else 50 * max(1, instance.m) * instance.n
    rounds = 0
    x = [Fraction(0)] * instance.m
    while rounds < cap:
        rounds += 1
        if len(pool):
            rows = [([dict(c.coefficients).get(e, 0) for e in range(instance.m)], c.rhs)
                    for c in pool]
            x, _ = solve_box_covering_lp(costs, rows)
        uhat = fractional_capacity(instance, x)
        violated = _violated_requirement_cuts(instance, uhat, variant, clamp=kc)
        if not violated and kc:
            violated = _violated_kc(instance, x, uhat, variant, threshold, pool)
        if not violated:
            sol = FractionalSolution(instance, tuple(x), threshold)
            slacks = tuple(c.evaluate(sol.x) for c in pool)
            assert all(s >= 0 for s in slacks)
            cert = GoodCertificate(
                variant, threshold, scale, rounds, sol.cost(), sol.x,
                tuple(pool), slacks, tuple(deviations),
            )
            return sol, cert
        violated.sort(key=lambda c: (c.evaluate(x), c.sort_key()))
        added = 0
        for con in violated:
            if pool.add(con):
                added += 1
                if added >= SEPARATION_BATCH:
                    break
        assert added, "separation reported violations but none were new"
    raise IterationLimitError("cutting-plane loop exceeded its round cap", pool)


def verify_good(instance, solution, variant=None):
    """Re-derive the exit conditions for a claimed good solution.

    Returns a list of violation descriptions; empty means the solution
    passes the two checks the rounding step depends on.
    """
    if variant is None:
        variant = variant_for(instance)
    x = solution.x if isinstance(solution, FractionalSolution) else tuple(
        Fraction(v) for v in solution
    )
    problems = []
    uhat = fractional_capacity(instance, x)
    for con in _violated_requirement_cuts(instance, uhat, variant, clamp=True):
        problems.append(("requirement", con.describe()))
    threshold = nearly_integral_threshold(variant, instance.n)
    frozen = tuple(i for i, v in enumerate(x) if v >= threshold)
    for cuts in _small_cut_pools(instance, uhat, variant):
        for cut in cuts:
            need = cut_requirement(instance, cut)
            if need == 0:
                continue
            ok, slack = check_kc(instance, x, cut, frozen, need)
            if not ok:
                problems.append(("knapsack-cover", dict(describe_cut(cut), slack=str(slack))))
    return problems
