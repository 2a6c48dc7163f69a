import random

import pytest

from phasematch.engine import (
    GreedyLex,
    PhaseTrace,
    Plan,
    PlanError,
    Scripted,
    SeededRandom,
    SizeLimitError,
    exact_phase,
    hopcroft_karp_phase,
    phase_bound_report,
    read_plan,
    read_trace,
    run_phase_framework,
    shortest_aug_length,
    verify_trace,
    write_plan,
    write_trace,
)
from phasematch.graph import AltPath, Matching, augment
from phasematch.oracles import brute_force_nu, shortest_aug_length_exhaustive

from helpers import (
    complete_bipartite,
    complete_graph,
    path_graph,
    random_graph,
    random_matching,
    star_graph,
)


def test_hopcroft_karp_k33_one_phase():
    g = complete_bipartite(3, 3)
    paths = hopcroft_karp_phase(g, Matching())
    assert len(paths) == 3
    assert all(p.length() == 1 for p in paths)


def test_hopcroft_karp_star_already_maximum():
    g = complete_bipartite(1, 4)
    m = Matching([(0, 1)])
    assert hopcroft_karp_phase(g, m) == []
    assert brute_force_nu(g) == 1


def test_hopcroft_karp_requires_bipartition():
    with pytest.raises(ValueError):
        hopcroft_karp_phase(complete_graph(3), Matching())


def test_hopcroft_karp_chain_single_long_path():
    from phasematch.families import chain_matching, gen_chain, make_chain_spec

    spec = make_chain_spec(4)
    inst = gen_chain(4)
    m2 = chain_matching(spec, 2)
    paths = hopcroft_karp_phase(inst.graph, m2)
    assert len(paths) == 1
    assert paths[0].length() == 7


def test_exact_phase_p5_greedy_lex():
    g = path_graph(5)
    paths = exact_phase(g, Matching(), GreedyLex())
    assert [p.vertices for p in paths] == [(0, 1), (2, 3)]


def test_exact_phase_scripted_pathlb():
    from phasematch.families import gen_path_lb

    inst = gen_path_lb(2)
    strat = Scripted(inst.plan)
    m = Matching()
    first = exact_phase(inst.graph, m, strat, _phase_index=1)
    assert all(p.length() == 1 for p in first)
    for p in first:
        m = augment(m, p)
    second = exact_phase(inst.graph, m, strat, _phase_index=2)
    assert len(second) == 1 and second[0].length() == 3


def test_exact_phase_scripted_rejects_non_shortest():
    # after the maximal matching below, paths 0-1-2-3-4-5 (len 5) and
    # 5-6-7-8 (len 3) remain; listing the long one must be rejected
    g = path_graph(9)
    m = Matching([(1, 2), (3, 4), (6, 7)])
    plan = Plan(phases=[[(0, 1, 2, 3, 4, 5)]])
    with pytest.raises(PlanError) as err:
        exact_phase(g, m, Scripted(plan), _phase_index=2)
    assert err.value.phase_index == 2
    assert "shortest" in err.value.reason


def test_exact_phase_scripted_rejects_non_maximal():
    g = path_graph(5)
    plan = Plan(phases=[[(0, 1)]])  # (2,3) or (3,4) still available
    with pytest.raises(PlanError) as err:
        exact_phase(g, Matching(), Scripted(plan))
    assert "maximal" in err.value.reason


def test_exact_phase_size_limit():
    g = complete_graph(20)
    with pytest.raises(SizeLimitError):
        exact_phase(g, Matching(), GreedyLex(), limit_n=10)


def test_run_k2():
    m, trace = run_phase_framework(complete_graph(2), GreedyLex())
    assert m.size() == 1
    assert trace.phase_count() == 1


def test_run_chain_scripted_phases():
    from phasematch.families import gen_chain

    for k in (2, 3, 5):
        inst = gen_chain(k)
        m, trace = run_phase_framework(inst.graph, Scripted(inst.plan))
        # one maximal-matching phase plus k forced single-path phases
        assert trace.phase_count() == inst.meta.expected_phases == k + 1
        assert [r.length for r in trace.phases] == [1] + [2 * t + 1 for t in range(1, k + 1)]
        assert all(len(r.paths) == 1 for r in trace.phases[1:])
        assert m.size() == inst.graph.n // 2  # perfect matching
        report = verify_trace(inst.graph, trace)
        assert report.legal, report.violations


def test_run_cograph_scripted():
    from phasematch.families import gen_cograph_lb

    for n in (1, 2, 4, 7, 9):
        inst = gen_cograph_lb(n)
        m, trace = run_phase_framework(inst.graph, Scripted(inst.plan))
        assert trace.phase_count() == inst.meta.expected_phases
        report = verify_trace(inst.graph, trace)
        assert report.legal, report.violations


def test_shortest_aug_length_cases():
    g = path_graph(3)
    assert shortest_aug_length(g, Matching()) == 1
    assert shortest_aug_length(g, Matching([(0, 1)])) is None
    star = star_graph(4)
    assert shortest_aug_length(star, Matching([(0, 1)])) is None


def test_shortest_aug_length_chain_closed_form():
    from phasematch.families import chain_matching, gen_chain, make_chain_spec

    k = 5
    spec = make_chain_spec(k)
    inst = gen_chain(k)
    for ell in range(0, k - 1):
        m = chain_matching(spec, ell)
        assert shortest_aug_length(inst.graph, m) == 2 * ell + 3


def test_verify_trace_catches_corruption():
    from phasematch.families import gen_chain

    inst = gen_chain(3)
    _, trace = run_phase_framework(inst.graph, Scripted(inst.plan))
    assert verify_trace(inst.graph, trace).legal
    # corrupt: shorten the last phase's path
    bad = PhaseTrace.from_json_dict(trace.to_json_dict())
    full = bad.phases[-1].paths[0]
    bad.phases[-1].paths[0] = AltPath(full.vertices[:2])
    report = verify_trace(inst.graph, bad)
    assert not report.legal
    assert any(f"phase {bad.phases[-1].index}" in v for v in report.violations)


def test_verify_trace_self_consistency_random():
    rng = random.Random(2)
    for _ in range(60):
        g = random_graph(rng.randrange(2, 11), rng.uniform(0.2, 0.8), rng)
        _, trace = run_phase_framework(g, GreedyLex())
        report = verify_trace(g, trace)
        assert report.legal, report.violations


def test_phase_bound_report():
    from phasematch.families import gen_chain

    inst = gen_chain(4)
    _, trace = run_phase_framework(inst.graph, Scripted(inst.plan))
    rep = phase_bound_report(inst.graph, trace)
    assert rep.ok()
    assert rep.phases == 5 and rep.nu == inst.graph.n // 2
    m, trace2 = run_phase_framework(complete_graph(2), GreedyLex())
    rep2 = phase_bound_report(complete_graph(2), trace2)
    assert rep2.phases == 1 and rep2.bound_nu == 4


def test_engine_matches_oracle_nu_random():
    rng = random.Random(31)
    for _ in range(150):
        g = random_graph(rng.randrange(1, 11), rng.uniform(0.1, 0.9), rng)
        m, _ = run_phase_framework(g, GreedyLex())
        assert m.size() == brute_force_nu(g)


def test_seeded_random_strategy_deterministic_and_correct():
    rng = random.Random(4)
    for trial in range(40):
        g = random_graph(rng.randrange(2, 10), rng.uniform(0.2, 0.9), rng)
        m1, t1 = run_phase_framework(g, SeededRandom(trial))
        m2, t2 = run_phase_framework(g, SeededRandom(trial))
        assert t1.to_json_dict() == t2.to_json_dict()
        assert m1.size() == brute_force_nu(g)
        assert verify_trace(g, t1).legal


def test_hk_and_exact_agree_on_bipartite():
    # run the same graph once with its bipartition (Hopcroft-Karp fast path)
    # and once with the bipartition stripped (generic exhaustive machinery):
    # per-phase lengths and final sizes must agree
    from phasematch.graph import Graph

    rng = random.Random(12)
    for _ in range(40):
        g = random_graph(rng.randrange(2, 12), rng.uniform(0.2, 0.8), rng,
                         bipartite=True)
        bare = Graph(g.n, g.edges)
        m_hk, t_hk = run_phase_framework(g, GreedyLex())
        m_gen, t_gen = run_phase_framework(bare, GreedyLex())
        assert m_hk.size() == m_gen.size() == brute_force_nu(g)
        assert [r.length for r in t_hk.phases] == [r.length for r in t_gen.phases]
        m_rnd, _ = run_phase_framework(g, SeededRandom(7))
        assert m_rnd.size() == m_hk.size()


def test_phase_lengths_never_decrease_weak_hk():
    rng = random.Random(77)
    for _ in range(80):
        g = random_graph(rng.randrange(2, 10), rng.uniform(0.2, 0.9), rng)
        _, trace = run_phase_framework(g, GreedyLex())
        lengths = [r.length for r in trace.phases]
        assert lengths == sorted(lengths)
        assert len(set(lengths)) == len(lengths)  # strictly increasing


def test_engine_shortest_matches_exhaustive_oracle():
    rng = random.Random(8)
    for _ in range(200):
        g = random_graph(rng.randrange(1, 10), rng.uniform(0.1, 0.9), rng)
        m = random_matching(g, rng)
        assert shortest_aug_length(g, m) == shortest_aug_length_exhaustive(g, m)


def test_trace_and_plan_roundtrip(tmp_path):
    from phasematch.families import gen_chain

    inst = gen_chain(3)
    _, trace = run_phase_framework(inst.graph, Scripted(inst.plan))
    tf = tmp_path / "trace.json"
    write_trace(trace, tf)
    back = read_trace(tf)
    assert back.to_json_dict() == trace.to_json_dict()
    pf = tmp_path / "plan.json"
    write_plan(inst.plan, pf)
    plan2 = read_plan(pf)
    assert plan2.phases == inst.plan.phases


def test_scripted_plan_must_cover_everything():
    g = path_graph(5)
    plan = Plan(phases=[[(0, 1), (2, 3)]])  # after this, (ν not reached? ν(P5)=2) ok
    m, trace = run_phase_framework(g, Scripted(plan))
    assert m.size() == 2
    # a plan that stops too early on a bigger graph
    g2 = path_graph(7)
    plan2 = Plan(phases=[[(0, 1), (2, 3)]])
    with pytest.raises(PlanError):
        run_phase_framework(g2, Scripted(plan2))
