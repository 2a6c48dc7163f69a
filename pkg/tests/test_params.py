import random

import pytest

from phasematch.graph import Graph
from phasematch.oracles import brute_force_nu
from phasematch.params import (
    ClassFlags,
    ParamLimitError,
    class_membership,
    distance_to_class,
    independence_number,
    modular_decomposition,
    neighborhood_diversity,
    replaceable_phase_bound,
    same_type,
    theorem_bound,
    validate_md_tree,
    validate_type_partition,
    vertex_cover_number,
)

from helpers import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    path_graph,
    random_graph,
    star_graph,
)


def disjoint_union(*graphs):
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def test_alpha_tau_examples():
    assert independence_number(cycle_graph(5)) == 2
    assert vertex_cover_number(cycle_graph(5)) == 3
    assert independence_number(complete_bipartite(3, 3)) == 3
    assert vertex_cover_number(complete_bipartite(3, 3)) == 3
    assert independence_number(path_graph(1)) == 1


def test_alpha_limit():
    with pytest.raises(ParamLimitError):
        independence_number(complete_graph(8), limit_n=5)


def test_nu_at_most_tau_sweep():
    rng = random.Random(13)
    for _ in range(120):
        g = random_graph(rng.randrange(1, 11), rng.uniform(0.1, 0.9), rng)
        assert brute_force_nu(g) <= vertex_cover_number(g)


def test_nd_examples():
    assert neighborhood_diversity(complete_graph(5)).nd() == 1
    assert neighborhood_diversity(complete_bipartite(3, 3)).nd() == 2
    assert neighborhood_diversity(path_graph(4)).nd() == 4
    assert neighborhood_diversity(Graph(3, [])).nd() == 1


def test_nd_matches_pairwise_definition():
    rng = random.Random(21)
    for _ in range(80):
        g = random_graph(rng.randrange(1, 9), rng.uniform(0.1, 0.9), rng)
        part = neighborhood_diversity(g)
        validate_type_partition(g, part)
        cls = part.class_of()
        for v in range(g.n):
            for w in range(v + 1, g.n):
                assert (cls[v] == cls[w]) == same_type(g, v, w)


def test_md_tree_edgeless():
    tree = modular_decomposition(Graph(4, []))
    assert tree.root.kind == "parallel"
    assert tree.md() == 1
    assert tree.mw() == 2  # floor


def test_md_tree_k2_and_k1():
    tree = modular_decomposition(complete_graph(2))
    assert tree.root.kind == "series"
    assert tree.md() == 1
    single = modular_decomposition(complete_graph(1))
    assert single.root.kind == "leaf"
    assert single.md() == 0


def test_md_tree_p4_prime():
    tree = modular_decomposition(path_graph(4))
    assert tree.root.kind == "prime"
    assert len(tree.root.children) == 4
    assert tree.mw() == 4
    assert tree.md() == 1


def test_md_tree_twin_class_inside_prime():
    # P_4 with its second vertex blown up into a triangle of true twins
    # vertices: 0 - {1,2,3} - 4 - 5 where {1,2,3} is a clique module
    edges = [(1, 2), (1, 3), (2, 3)]
    edges += [(0, 1), (0, 2), (0, 3)]
    edges += [(1, 4), (2, 4), (3, 4)]
    edges += [(4, 5)]
    g = Graph(6, edges)
    tree = modular_decomposition(g)
    assert tree.root.kind == "prime"
    kinds = sorted(len(c.vertices) for c in tree.root.children)
    assert kinds == [1, 1, 1, 3]
    assert tree.md() == 2
    assert tree.mw() == 4


def test_md_tree_checker_rejects_wrong_tree():
    from phasematch.params import MDNode, MDTree

    g = path_graph(3)
    bad = MDTree(root=MDNode(
        vertices=frozenset({0, 1, 2}), kind="parallel",
        children=[MDNode(frozenset({0, 1}), "series",
                         [MDNode(frozenset({0}), "leaf"),
                          MDNode(frozenset({1}), "leaf")]),
                  MDNode(frozenset({2}), "leaf")]))
    with pytest.raises(ValueError):
        validate_md_tree(g, bad)


def test_md_tree_random_sweep_checker_accepts():
    rng = random.Random(5)
    for _ in range(60):
        g = random_graph(rng.randrange(1, 10), rng.uniform(0.1, 0.9), rng)
        tree = modular_decomposition(g)   # constructor re-checks
        assert tree.md() >= (1 if g.n > 1 else 0)


def test_class_flags_two_triangles():
    g = disjoint_union(complete_graph(3), complete_graph(3))
    flags = class_membership(g)
    assert flags.is_cluster
    assert flags.is_splex_union(1)
    assert flags.is_cograph
    assert not flags.is_star_forest


def test_class_flags_chain_family():
    from phasematch.families import gen_chain

    flags = class_membership(gen_chain(2).graph)
    assert flags.is_bipartite_chain


def test_class_flags_cograph_family():
    from phasematch.families import gen_cograph_lb

    inst = gen_cograph_lb(5)
    flags = class_membership(inst.graph)
    assert flags.is_cograph
    # trivially perfect: also C_4-free (scanned directly)
    g = inst.graph
    import itertools

    for quad in itertools.combinations(range(g.n), 4):
        sub = g.induced(quad)
        if sub.m == 4 and all(sub.degree(v) == 2 for v in range(4)):
            pytest.fail("induced C_4 found")


def test_class_flags_star_forest():
    g = disjoint_union(star_graph(3), star_graph(1), complete_graph(1))
    flags = class_membership(g)
    assert flags.is_star_forest
    assert not class_membership(path_graph(4)).is_star_forest


def test_splex_union_s_values():
    assert class_membership(complete_graph(5)).splex_union_s == 1
    c5 = cycle_graph(5)
    assert class_membership(c5).splex_union_s == 5 - 2


def test_distance_members_are_zero():
    g = disjoint_union(complete_graph(4), complete_graph(4))
    assert distance_to_class(g, "cluster") == (0, ())
    assert distance_to_class(path_graph(4), "cluster", k_max=3)[0] > 0


def test_distance_apex_cluster():
    # two triangles plus one apex joined to everything
    base = disjoint_union(complete_graph(3), complete_graph(3))
    edges = list(base.edges) + [(v, 6) for v in range(6)]
    g = Graph(7, edges)
    dist, witness = distance_to_class(g, "cluster")
    assert dist == 1 and witness == (6,)


def test_distance_planted_modulator():
    from phasematch.families import gen_structured

    inst = gen_structured("cluster", {"comp_count": 5, "comp_size": 4},
                          k_modulator=3, seed=11)
    out = distance_to_class(inst.graph, "cluster", k_max=3)
    assert out is not None
    assert out[0] <= 3


def test_distance_kmax_exceeded():
    g = path_graph(12)
    assert distance_to_class(g, "cluster", k_max=1) is None


def test_distance_star_forest_and_splex():
    g = path_graph(4)
    dist, _ = distance_to_class(g, "star_forest")
    assert dist == 1
    assert distance_to_class(complete_graph(6), "splex_union:2") == (0, ())


def test_theorem_bounds():
    bounds = theorem_bound(nu=4, n=20)
    by_name = {b.name: b for b in bounds}
    assert by_name["matching_number"].value == 6
    assert by_name["vertex_count"].value == 2 * 5
    value, clamped = replaceable_phase_bound(16, 3)
    assert value == 12 + 8 and not clamped
    value_small, clamped_small = replaceable_phase_bound(4, 3)
    assert clamped_small and value_small == 20


def test_distance_zero_iff_member():
    rng = random.Random(3)
    for _ in range(40):
        g = random_graph(rng.randrange(1, 8), rng.uniform(0.1, 0.8), rng)
        flags = class_membership(g)
        out = distance_to_class(g, "cluster", k_max=6)
        assert (out == (0, ())) == flags.is_cluster
