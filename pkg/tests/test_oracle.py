"""Exact oracles, gap generators, label cover, and random instances."""

from fractions import Fraction

import pytest

from capnet.errors import CapabilityError, InfeasibleError, InstanceFormatError
from capnet.graphs import (
    Edge,
    Instance,
    KWay,
    Pairs,
    Uniform,
    check_feasible,
    instance_to_dict,
    serialize_instance,
)
from capnet.oracle import (
    MULTICOPY_EDGE_LIMIT,
    ROW_VERTEX_LIMIT,
    SUBSET_EDGE_LIMIT,
    LabelCoverInstance,
    constraint_rows,
    exact_optimum,
    exact_optimum_multicopy,
    gen_label_cover_reduction,
    gen_random,
    gen_single_pair_gap,
    gen_triangle_gap,
    label_cover_from_dict,
    label_cover_to_dict,
    sample_yes_instances,
    verify_yes_certificate,
)

from conftest import brute_copy_optimum, brute_subset_optimum


# ---------------------------------------------------------------------------
# constraint rows

def test_rows_uniform_are_all_bipartitions(triangle_rigid):
    rows = dict(constraint_rows(triangle_rigid))
    assert rows == {(0, 2): 5, (0, 1): 5, (1, 2): 5}


def test_rows_pairs_directed_keep_orientation():
    inst = Instance(
        3,
        ((0, 1, 2, 1), (1, 2, 2, 1), (0, 2, 2, 1)),
        Pairs(((0, 2, 2),)),
        directed=True,
    )
    rows = dict(constraint_rows(inst))
    # S = {0} crosses arcs 0 and 2; S = {0, 1} crosses arcs 1 and 2.
    assert rows == {(0, 2): 2, (1, 2): 2}


def test_rows_merge_keeps_the_largest_demand():
    inst = Instance(
        2,
        ((0, 1, 4, 1), (0, 1, 4, 1)),
        Pairs(((0, 1, 2), (0, 1, 5))),
    )
    assert constraint_rows(inst) == (((0, 1), 5),)


def test_rows_kway_cover_every_partition():
    inst = Instance(
        3,
        ((0, 1, 5, 0), (1, 2, 4, 0), (0, 2, 5, 7)),
        KWay((1, 2)),
    )
    rows = dict(constraint_rows(inst))
    assert rows == {(0, 2): 1, (0, 1): 1, (1, 2): 1, (0, 1, 2): 2}


def test_rows_vertex_cap():
    path = tuple((v, v + 1, 1, 1) for v in range(ROW_VERTEX_LIMIT))
    inst = Instance(ROW_VERTEX_LIMIT + 1, path, Uniform(1))
    with pytest.raises(CapabilityError):
        constraint_rows(inst)


# ---------------------------------------------------------------------------
# subset oracle

def test_triangle_optimum_buys_the_expensive_edge():
    inst = gen_triangle_gap(10, 100)
    opt = exact_optimum(inst)
    assert opt.cost == 100
    # Edge 2 is forced; the zero-cost edges ride along in the canonical
    # (lex-least) optimum.
    assert opt.edges == (0, 1, 2)


@pytest.mark.parametrize("R,cost", [(4, 10), (6, 21)])
def test_star_optimum_matches_closed_form(R, cost):
    inst, reference = gen_single_pair_gap(R)
    opt = exact_optimum(inst)
    assert opt.cost == cost == R // 2 + R * R // 2
    # The reference fractional solution costs 3R; the integral-over-
    # fractional ratio R/6 + 1/6 grows linearly in R.
    assert reference.cost() == 3 * R
    assert Fraction(opt.cost, 3 * R) == Fraction(R, 6) + Fraction(1, 6)


def test_subset_oracle_ties_break_to_the_earliest_edges():
    inst = Instance(2, ((0, 1, 3, 2), (0, 1, 3, 2)), Uniform(3))
    assert exact_optimum(inst).edges == (0,)


@pytest.mark.parametrize("kind,kwargs", [
    ("uniform", {}),
    ("pairs", {"pairs": 2}),
    ("kway", {"levels": 2}),
])
@pytest.mark.parametrize("seed", range(4))
def test_subset_oracle_matches_brute_force(kind, kwargs, seed):
    inst = gen_random(kind, n=5, m=8, seed=seed, **kwargs)
    opt = exact_optimum(inst)
    cost, edges = brute_subset_optimum(inst)
    assert opt.cost == cost
    assert opt.edges == edges
    assert check_feasible(inst, opt.edges).feasible


def test_subset_oracle_trivial_and_infeasible():
    free = Instance(3, ((0, 1, 2, 5), (1, 2, 2, 5)), Uniform(0))
    opt = exact_optimum(free)
    assert opt.cost == 0 and opt.edges == ()
    split = Instance(4, ((0, 1, 1, 1), (2, 3, 1, 1)), Uniform(1))
    with pytest.raises(InfeasibleError):
        exact_optimum(split)


def test_subset_oracle_edge_cap_and_force():
    edges = tuple((0, 1, 1, 1) for _ in range(SUBSET_EDGE_LIMIT + 1))
    inst = Instance(2, edges, Uniform(SUBSET_EDGE_LIMIT + 1))
    with pytest.raises(CapabilityError):
        exact_optimum(inst)
    opt = exact_optimum(inst, force=True)
    assert opt.cost == SUBSET_EDGE_LIMIT + 1   # every copy is needed
    assert len(opt.edges) == SUBSET_EDGE_LIMIT + 1


# ---------------------------------------------------------------------------
# copy oracle

def test_copy_oracle_single_edge():
    inst = Instance(2, ((0, 1, 2, 3),), Pairs(((0, 1, 5),)))
    opt = exact_optimum_multicopy(inst)
    assert opt.cost == 9 and opt.copies == (3,)


def test_copy_oracle_prefers_one_big_copy():
    inst = Instance(
        2,
        ((0, 1, 2, 3), (0, 1, 5, 5)),
        Pairs(((0, 1, 5),)),
    )
    opt = exact_optimum_multicopy(inst)
    assert opt.cost == 5 and opt.copies == (0, 1)


@pytest.mark.parametrize("seed", range(6))
def test_copy_oracle_matches_brute_force(seed):
    inst = gen_random("pairs", n=4, m=6, seed=seed, pairs=2, demand_cap=4)
    opt = exact_optimum_multicopy(inst)
    cost, copies = brute_copy_optimum(inst)
    assert opt.cost == cost
    assert opt.copies == copies


def test_copy_oracle_edge_cap():
    edges = tuple((0, 1, 1, 1) for _ in range(MULTICOPY_EDGE_LIMIT + 1))
    inst = Instance(2, edges, Pairs(((0, 1, 2),)))
    with pytest.raises(CapabilityError):
        exact_optimum_multicopy(inst)
    assert exact_optimum_multicopy(inst, force=True).cost == 2


# ---------------------------------------------------------------------------
# label cover

def test_label_cover_rejects_malformed_inputs():
    good = dict(a_count=1, b_count=1, degree_a=1, degree_b=1,
                labels_a=2, labels_b=2)
    with pytest.raises(InstanceFormatError):
        LabelCoverInstance(**{**good, "labels_a": 0},
                           relations=((0, 0, ((0, 0),)),))
    with pytest.raises(InstanceFormatError):   # vertex out of range
        LabelCoverInstance(**good, relations=((0, 1, ((0, 0),)),))
    with pytest.raises(InstanceFormatError):   # label out of range
        LabelCoverInstance(**good, relations=((0, 0, ((0, 2),)),))
    with pytest.raises(InstanceFormatError):   # not regular
        LabelCoverInstance(**{**good, "a_count": 2},
                           relations=((0, 0, ((0, 0),)),))
    with pytest.raises(InstanceFormatError):   # labeling too short
        LabelCoverInstance(**good, relations=((0, 0, ((0, 0),)),),
                           labeling=((), (0,)))
    with pytest.raises(InstanceFormatError):   # labeling out of range
        LabelCoverInstance(**good, relations=((0, 0, ((0, 0),)),),
                           labeling=((5,), (0,)))


def test_violated_by_lists_broken_constraints():
    lc = sample_yes_instances()[2]
    assert lc.violated_by(lc.labeling) == ()
    flipped = (tuple(1 - v for v in lc.labeling[0]), lc.labeling[1])
    assert flipped[0] != lc.labeling[0]
    assert lc.violated_by(flipped) != ()


def test_label_cover_dict_round_trip():
    for lc in sample_yes_instances():
        doc = label_cover_to_dict(lc)
        back = label_cover_from_dict(doc)
        assert back == lc
        assert label_cover_to_dict(back) == doc
    with pytest.raises(InstanceFormatError):
        label_cover_from_dict([1, 2])
    with pytest.raises(InstanceFormatError):
        label_cover_from_dict({"A": 1})
    with pytest.raises(InstanceFormatError):
        label_cover_from_dict({
            "A": 1, "B": 1, "dA": 1, "dB": 1, "LA": 1, "LB": 1,
            "pi": [[0, 0]],
        })


def test_reduction_layout_and_size():
    sizes = []
    for lc in sample_yes_instances():
        inst = gen_label_cover_reduction(lc)
        assert inst.directed
        expected_n = (2 + lc.a_count + lc.b_count
                      + lc.a_count * lc.labels_a + lc.b_count * lc.labels_b)
        assert inst.n == expected_n
        expected_m = (lc.a_count + lc.b_count
                      + lc.a_count * lc.labels_a + lc.b_count * lc.labels_b
                      + sum(len(p) for _, _, p in lc.relations))
        assert inst.m == expected_m
        assert inst.requirements.pairs == ((0, 1, lc.m),)
        sizes.append((inst.n, inst.m))
    assert sizes == [(6, 5), (11, 12), (14, 16), (16, 22), (20, 30)]


def test_yes_certificates_verify():
    for lc in sample_yes_instances():
        inst = gen_label_cover_reduction(lc)
        check = verify_yes_certificate(inst, lc)
        assert check.ok
        assert check.cost == 2 * lc.m
        assert check.flow >= lc.m


def test_certificate_rejects_bad_labeling_and_wrong_instance():
    lc = sample_yes_instances()[3]
    inst = gen_label_cover_reduction(lc)
    bad = (tuple(0 for _ in lc.labeling[0]), tuple(0 for _ in lc.labeling[1]))
    with pytest.raises(ValueError, match="violates"):
        verify_yes_certificate(inst, lc, labeling=bad)
    other = gen_label_cover_reduction(sample_yes_instances()[0])
    with pytest.raises(ValueError, match="does not match"):
        verify_yes_certificate(other, lc)
    with pytest.raises(ValueError, match="no labeling"):
        verify_yes_certificate(inst, lc.__class__(
            lc.a_count, lc.b_count, lc.degree_a, lc.degree_b,
            lc.labels_a, lc.labels_b, lc.relations,
        ), labeling=None)


# ---------------------------------------------------------------------------
# random instances

@pytest.mark.parametrize("kind,kwargs", [
    ("uniform", {}),
    ("pairs", {"pairs": 3}),
    ("kway", {"levels": 2}),
])
def test_gen_random_is_feasible_and_deterministic(kind, kwargs):
    a = gen_random(kind, n=7, m=12, seed=5, **kwargs)
    b = gen_random(kind, n=7, m=12, seed=5, **kwargs)
    assert serialize_instance(a) == serialize_instance(b)
    assert a.n == 7 and a.m == 12
    assert check_feasible(a, range(a.m)).feasible
    assert serialize_instance(gen_random(kind, n=7, m=12, seed=6, **kwargs)) \
        != serialize_instance(a)


def test_gen_random_demand_cap():
    for seed in range(5):
        inst = gen_random("pairs", n=6, m=10, seed=seed, pairs=3, demand_cap=3)
        assert all(d <= 3 for _, _, d in inst.requirements.pairs)


def test_gen_random_guards():
    with pytest.raises(ValueError, match="unknown kind"):
        gen_random("mesh", n=5, m=8, seed=0)
    with pytest.raises(ValueError, match="two vertices"):
        gen_random("uniform", n=1, m=0, seed=0)
    with pytest.raises(ValueError, match="too small"):
        gen_random("uniform", n=5, m=3, seed=0)
    with pytest.raises(ValueError, match="demand_cap"):
        gen_random("uniform", n=5, m=8, seed=0, demand_cap=0)
    with pytest.raises(ValueError, match="capacities"):
        gen_random("uniform", n=5, m=8, seed=0, cap_range=(0, 4))
    with pytest.raises(ValueError, match="levels"):
        gen_random("kway", n=3, m=4, seed=0, levels=3)
    with pytest.raises(CapabilityError):
        gen_random("kway", n=11, m=14, seed=0)


def test_gap_generator_guards():
    with pytest.raises(ValueError):
        gen_triangle_gap(1, 10)
    with pytest.raises(ValueError):
        gen_triangle_gap(5, 0)
    with pytest.raises(ValueError):
        gen_single_pair_gap(5)
    with pytest.raises(ValueError):
        gen_single_pair_gap(2)
