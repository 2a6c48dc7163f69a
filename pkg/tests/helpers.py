"""Shared graph factories and random sampling used across the test suite."""

from __future__ import annotations

import itertools
import random

from phasematch.graph import AltPath, Graph, Matching


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return Graph(a + b, edges, bipartition=(range(a), range(a, a + b)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(10, outer + inner + spokes)


def graph_from_mask(n: int, mask: int) -> Graph:
    """Graph on n labeled vertices from an edge bitmask over C(n,2) pairs."""
    pairs = list(itertools.combinations(range(n), 2))
    edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
    return Graph(n, edges)


def random_graph(n: int, p: float, rng: random.Random,
                 bipartite: bool = False) -> Graph:
    if bipartite:
        half = (n + 1) // 2
        edges = [(i, j) for i in range(half) for j in range(half, n)
                 if rng.random() < p]
        return Graph(n, edges, bipartition=(range(half), range(half, n)))
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def random_matching(g: Graph, rng: random.Random,
                    stop_prob: float = 0.15) -> Matching:
    """A random (not necessarily maximal) matching via a shuffled greedy pass."""
    edges = list(g.edges)
    rng.shuffle(edges)
    chosen = []
    used: set[int] = set()
    for u, v in edges:
        if u in used or v in used:
            continue
        if rng.random() < stop_prob:
            break
        chosen.append((u, v))
        used.add(u)
        used.add(v)
    return Matching(chosen)


def random_alternating_path(g: Graph, m: Matching, rng: random.Random,
                            keep_going: float = 0.97) -> AltPath:
    """A random alternating simple path grown by a random walk."""
    start = rng.randrange(g.n)
    path = [start]
    visited = {start}
    last_red: bool | None = None
    while rng.random() < keep_going:
        v = path[-1]
        options = []
        for w in g.adj[v]:
            if w in visited:
                continue
            red = m.mate_of(v) == w
            if last_red is not None and red == last_red:
                continue
            options.append((w, red))
        if not options:
            break
        w, red = rng.choice(options)
        path.append(w)
        visited.add(w)
        last_red = red
    return AltPath(path)


def complete_multipartite(sizes) -> Graph:
    bounds = []
    start = 0
    for s in sizes:
        bounds.append(range(start, start + s))
        start += s
    edges = []
    for i in range(len(bounds)):
        for j in range(i + 1, len(bounds)):
            edges.extend((u, v) for u in bounds[i] for v in bounds[j])
    return Graph(start, edges)


def co_multipartite(sizes, rng: random.Random, p: float = 0.5) -> Graph:
    """Complement of a random multipartite graph: alpha <= len(sizes)."""
    bounds = []
    start = 0
    for s in sizes:
        bounds.append(list(range(start, start + s)))
        start += s
    edges = []
    for part in bounds:
        edges.extend(itertools.combinations(part, 2))
    for i in range(len(bounds)):
        for j in range(i + 1, len(bounds)):
            edges.extend((u, v) for u in bounds[i] for v in bounds[j]
                         if rng.random() < p)
    return Graph(start, edges)


def random_modular_graph(rng: random.Random, depth: int = 2) -> Graph:
    """Random composition of unions, joins, and a 4-part prime quotient."""

    def build(budget: int, d: int) -> tuple[int, list[tuple[int, int]]]:
        if d == 0 or budget <= 1:
            return 1, []
        kind = rng.choice(("union", "join", "prime"))
        parts = 4 if kind == "prime" else rng.randrange(2, 4)
        child_sizes = []
        all_edges: list[tuple[int, int]] = []
        offset = 0
        for _ in range(parts):
            size, edges = build(max(1, budget // parts), d - 1)
            all_edges.extend((u + offset, v + offset) for u, v in edges)
            child_sizes.append(size)
            offset += size
        starts = [sum(child_sizes[:i]) for i in range(parts)]
        spans = [range(starts[i], starts[i] + child_sizes[i])
                 for i in range(parts)]
        if kind == "join":
            for i in range(parts):
                for j in range(i + 1, parts):
                    all_edges.extend((u, v) for u in spans[i] for v in spans[j])
        elif kind == "prime":
            for i, j in ((0, 1), (1, 2), (2, 3)):
                all_edges.extend((u, v) for u in spans[i] for v in spans[j])
        return offset, all_edges

    n, edges = build(rng.randrange(8, 17), depth)
    return Graph(n, edges)
