import itertools
import random

import pytest

from phasematch.graph import AltPath, Graph, Matching, validate_replacement
from phasematch.oracles import min_replaceability
from phasematch.params import (
    MDTree,
    modular_decomposition,
    neighborhood_diversity,
)
from phasematch.replacers import (
    HypothesisError,
    boundary_edge_count,
    external_color_counts,
    normalize_parity,
    reattach,
    reduce_module_border,
    reduce_series_external,
    replace_independence,
    replace_modular,
    replace_nd,
    replace_splex,
)

from helpers import (
    co_multipartite,
    complete_graph,
    complete_multipartite,
    path_graph,
    random_alternating_path,
    random_matching,
    random_modular_graph,
)


def co_bipartite(a: int, b: int, rng: random.Random, p: float = 0.5):
    """Complement of a random bipartite graph: independence number <= 2."""
    return co_multipartite([a, b], rng, p)


def alternating_ham_path(n: int):
    """K_n with every second edge of 0-1-2-...-n-1 matched (blue first)."""
    g = complete_graph(n)
    m = Matching([(i, i + 1) for i in range(1, n - 1, 2)])
    p = AltPath.in_graph(g, range(n))
    return g, m, p


# ---------------------------------------------------------------------------
# normalize_parity
# ---------------------------------------------------------------------------

def test_normalize_red_bounded_unchanged():
    g = complete_graph(4)
    m = Matching([(1, 0), (2, 3)])
    p = AltPath.in_graph(g, [1, 0, 2, 3])   # r b r
    core, pre, suf = normalize_parity(m, p)
    assert (pre, suf) == (None, None)
    assert core == p


def test_normalize_blue_red_blue_with_matched_ends():
    g = complete_graph(6)
    m = Matching([(1, 2), (0, 4), (3, 5)])
    p = AltPath.in_graph(g, [0, 1, 2, 3])   # b r b, both ends matched elsewhere
    core, pre, suf = normalize_parity(m, p)
    assert core.vertices == (1, 2)
    assert (pre, suf) == (0, 3)
    assert reattach(core, pre, suf) == p


def test_normalize_augmenting_path_unchanged():
    g = path_graph(4)
    m = Matching([(1, 2)])
    p = AltPath.in_graph(g, [0, 1, 2, 3])
    core, pre, suf = normalize_parity(m, p)
    assert core == p and pre is None and suf is None


# ---------------------------------------------------------------------------
# s-plex replacement
# ---------------------------------------------------------------------------

def test_splex_below_threshold_unchanged():
    g, m, p = alternating_ham_path(6)   # length 5 < 2*1 + 5
    res = replace_splex(g, m, p, 1)
    assert res.path == p and res.steps == 0


def test_splex_k8_hamiltonian():
    g, m, p = alternating_ham_path(8)   # length 7 = 2*1 + 5, exposed ends
    res = replace_splex(g, m, p, 1)
    assert res.steps >= 1
    assert res.path.length() <= 4
    assert validate_replacement(m, p, res.path)


def test_splex_matched_endpoints():
    # close the Hamiltonian path into an alternating structure whose first
    # vertex is matched to the last: anchors move inward
    g = complete_graph(8)
    m = Matching([(1, 2), (3, 4), (5, 6), (7, 0)])
    p = AltPath.in_graph(g, range(8))    # b r b r b r b with matched ends
    res = replace_splex(g, m, p, 1)
    assert res.path.length() <= 2 * 1 + 4
    assert validate_replacement(m, p, res.path)


def test_splex_hypothesis_violation():
    g = path_graph(8)   # min degree 1, nothing like a 1-plex
    m = Matching([(1, 2), (3, 4), (5, 6)])
    p = AltPath.in_graph(g, range(8))
    with pytest.raises(HypothesisError):
        replace_splex(g, m, p, 1)


def test_splex_seeded_sweep():
    from phasematch.families import gen_structured

    rng = random.Random(100)
    for trial in range(300):
        k = rng.choice((1, 2, 3))
        size = rng.randrange(2 * k + 8, 2 * k + 14)
        inst = gen_structured("splex_union",
                              {"comp_count": 1, "comp_size": size, "s": k},
                              k_modulator=0, seed=trial)
        g = inst.graph
        m = random_matching(g, rng)
        p = random_alternating_path(g, m, rng)
        res = replace_splex(g, m, p, k)
        assert validate_replacement(m, p, res.path)
        assert res.path.length() <= 2 * k + 4
        hist = list(res.history)
        assert hist == sorted(hist, reverse=True) and len(set(hist)) == len(hist)


# ---------------------------------------------------------------------------
# independence-number replacement
# ---------------------------------------------------------------------------

def test_independence_k20_clique():
    g, m, p = alternating_ham_path(20)   # length 19 > 4*4 + 1 = 17
    res = replace_independence(g, m, p, 1)
    assert res.steps >= 1
    assert res.path.length() < p.length()
    assert res.path.length() <= 4 * 4 + 3
    assert validate_replacement(m, p, res.path)


def test_independence_below_threshold_unchanged():
    g, m, p = alternating_ham_path(16)   # length 15 <= 17
    res = replace_independence(g, m, p, 1)
    assert res.path == p and res.steps == 0


def test_independence_detects_violation():
    # a long induced path has huge independence number; k=1 must fail with
    # an independent-set witness once the construction runs
    g = path_graph(20)
    m = Matching([(i, i + 1) for i in range(1, 19, 2)])
    p = AltPath.in_graph(g, range(20))
    with pytest.raises(HypothesisError) as err:
        replace_independence(g, m, p, 1)
    assert "independent set" in str(err.value)


def test_independence_co_bipartite_sweep():
    rng = random.Random(200)
    for trial in range(120):
        g = co_bipartite(rng.randrange(20, 26), rng.randrange(20, 26), rng)
        m = random_matching(g, rng, stop_prob=0.05)
        p = random_alternating_path(g, m, rng, keep_going=0.995)
        res = replace_independence(g, m, p, 2)
        assert validate_replacement(m, p, res.path)
        assert res.path.length() <= 4 * 9 + 3
        hist = list(res.history)
        assert hist == sorted(hist, reverse=True) and len(set(hist)) == len(hist)


# ---------------------------------------------------------------------------
# neighborhood-diversity replacement
# ---------------------------------------------------------------------------

def test_nd_clique_long_path():
    g, m, p = alternating_ham_path(12)   # nd = 1, threshold 9, length 11
    types = neighborhood_diversity(g)
    assert types.nd() == 1
    res = replace_nd(g, m, p, types)
    assert res.steps >= 1
    assert res.path.length() <= 6 * 1 + 4
    assert validate_replacement(m, p, res.path)


def test_nd_multipartite_sweep():
    rng = random.Random(300)
    for trial in range(120):
        sizes = [rng.randrange(4, 9) for _ in range(3)]
        g = complete_multipartite(sizes)
        types = neighborhood_diversity(g)
        k = types.nd()
        assert k <= 3
        m = random_matching(g, rng, stop_prob=0.05)
        p = random_alternating_path(g, m, rng, keep_going=0.99)
        res = replace_nd(g, m, p, types)
        assert validate_replacement(m, p, res.path)
        assert res.path.length() <= 6 * k + 4
        hist = list(res.history)
        assert hist == sorted(hist, reverse=True)


def test_nd_inconsistent_partition_rejected():
    from phasematch.params import TypePartition

    g = path_graph(10)
    m = Matching([(i, i + 1) for i in range(1, 9, 2)])
    p = AltPath.in_graph(g, range(10))
    # claim everything is one class: same-type fails on the pairs in use
    fake = TypePartition(classes=[frozenset(range(10))])
    with pytest.raises((HypothesisError, ValueError)):
        replace_nd(g, m, p, fake)


# ---------------------------------------------------------------------------
# modular replacement
# ---------------------------------------------------------------------------

def test_modular_parallel_and_cograph():
    from phasematch.families import gen_cograph_lb

    inst = gen_cograph_lb(6)
    g = inst.graph
    tree = modular_decomposition(g)
    assert tree.mw() == 2   # cograph
    rng = random.Random(1)
    for _ in range(30):
        m = random_matching(g, rng)
        p = random_alternating_path(g, m, rng, keep_going=0.99)
        res = replace_modular(g, m, p, tree)
        assert validate_replacement(m, p, res.path)
        assert res.path.length() <= (21 * tree.mw()) ** tree.md()


def test_modular_prime_border_lemma():
    rng = random.Random(2)
    hit_prime = 0
    for trial in range(150):
        g = random_modular_graph(rng)
        tree = modular_decomposition(g)
        m = random_matching(g, rng)
        p = random_alternating_path(g, m, rng, keep_going=0.98)
        res = replace_modular(g, m, p, tree)
        assert validate_replacement(m, p, res.path)
        assert res.path.length() <= (21 * tree.mw()) ** tree.md()
        root = tree.root
        if root.kind == "prime":
            hit_prime += 1
            for child in root.children:
                assert boundary_edge_count(res.path, child.vertices) <= 8
        elif root.kind == "series":
            blue, red = external_color_counts(
                m, res.path, [c.vertices for c in root.children])
            assert blue <= 4 and red <= 6
    assert hit_prime >= 5


def test_reduce_module_border_direct():
    rng = random.Random(3)
    for trial in range(100):
        g = random_modular_graph(rng)
        tree = modular_decomposition(g)
        if tree.root.kind != "prime":
            continue
        modules = [c.vertices for c in tree.root.children]
        m = random_matching(g, rng)
        p = random_alternating_path(g, m, rng, keep_going=0.98)
        out = reduce_module_border(g, m, p, modules)
        assert validate_replacement(m, p, out)
        for module in modules:
            assert boundary_edge_count(out, module) <= 8


def test_reduce_series_external_direct():
    rng = random.Random(4)
    checked = 0
    for trial in range(150):
        g = random_modular_graph(rng)
        tree = modular_decomposition(g)
        if tree.root.kind != "series":
            continue
        modules = [c.vertices for c in tree.root.children]
        m = random_matching(g, rng)
        p = random_alternating_path(g, m, rng, keep_going=0.98)
        out = reduce_series_external(g, m, p, modules)
        assert validate_replacement(m, p, out)
        blue, red = external_color_counts(m, out, modules)
        assert blue <= 4 and red <= 6
        checked += 1
    assert checked >= 10


def test_modular_tree_mismatch_rejected():
    from phasematch.replacers import ReplacerError

    g = complete_graph(4)
    other = modular_decomposition(path_graph(4))
    m = Matching([(0, 1)])
    p = AltPath.in_graph(g, [2, 0, 1, 3])
    with pytest.raises(ReplacerError):
        replace_modular(g, m, p, other)


def test_min_replaceability_within_constructive_bounds():
    # oracle optimum never exceeds what the constructions guarantee
    for n in (4, 6, 8):
        g = complete_graph(n)
        value = min_replaceability(g)
        assert value <= 2 * 1 + 4          # 1-plex
        assert value <= 6 * 1 + 4          # nd = 1
    g = complete_multipartite([2, 2, 2])
    assert min_replaceability(g) <= 6 * 3 + 4
