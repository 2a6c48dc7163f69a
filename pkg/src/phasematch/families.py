"""Instance generators: adversarial lower-bound families with scripted plans,
plus seeded structured and random families for the upper-bound experiments.

All generators are deterministic given their parameters and seed.  Each one
returns a FamilyInstance whose plan (when present) replays legally under
verify_trace with the expected phase count; internal consistency oracles guard
the constructions and abort on any index or partition inconsistency.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .engine import Plan
from .graph import AltPath, Graph, Matching, augment, norm_edge


class FamilyError(ValueError):
    """Internal consistency failure while building an instance."""


@dataclass
class FamilyMeta:
    name: str
    params: dict
    expected_phases: int
    planted: tuple[int, ...] = ()
    labels: dict = field(default_factory=dict)


@dataclass
class FamilyInstance:
    graph: Graph
    plan: Plan | None
    meta: FamilyMeta


def _ceil_sqrt(x: int) -> int:
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1


# ---------------------------------------------------------------------------
# Bipartite chain graphs.
#
# Side size: the index intervals idx_0..idx_{k-1} (sizes k..1) together with
# idx_k (size k) must partition [1..n], which forces n = k(k+3)/2; the
# partition, the edge rule, and every matching index are re-checked here.
# ---------------------------------------------------------------------------

@dataclass
class ChainSpec:
    """Index bookkeeping for the chain construction (1-based indices)."""

    k: int
    n: int
    idx: list[tuple[int, int]]      # inclusive intervals idx_0..idx_k
    istar: list[int]                # istar[j] = min idx_j for j < k

    def validate(self) -> None:
        covered = []
        for j, (lo, hi) in enumerate(self.idx):
            size = hi - lo + 1
            want = self.k - j if j < self.k else self.k
            if size != want:
                raise FamilyError(f"idx_{j} has size {size}, expected {want}")
            covered.extend(range(lo, hi + 1))
        if covered != list(range(1, self.n + 1)):
            raise FamilyError("index intervals do not partition [1..n]")
        if self.istar != [self.idx[j][0] for j in range(self.k)]:
            raise FamilyError("istar entries disagree with interval minima")

    def interval_of(self, i: int) -> int:
        for j, (lo, hi) in enumerate(self.idx):
            if lo <= i <= hi:
                return j
        raise FamilyError(f"index {i} outside [1..{self.n}]")


def make_chain_spec(k: int) -> ChainSpec:
    if k < 2:
        raise ValueError("chain construction needs k >= 2")
    n = k * (k + 3) // 2
    idx: list[tuple[int, int]] = []
    lo = 1
    for j in range(k):
        hi = lo + (k - j) - 1
        idx.append((lo, hi))
        lo = hi + 1
    idx.append((n - k + 1, n))
    spec = ChainSpec(k=k, n=n, idx=idx, istar=[iv[0] for iv in idx[:k]])
    spec.validate()
    return spec


def _chain_vertex_a(spec: ChainSpec, i: int) -> int:
    return i - 1


def _chain_vertex_b(spec: ChainSpec, j: int) -> int:
    return spec.n + j - 1


def chain_graph(spec: ChainSpec) -> Graph:
    """Bipartite chain graph on sides A, B of size n: a_i b_j iff i >= j."""
    n = spec.n
    edges = [(_chain_vertex_a(spec, i), _chain_vertex_b(spec, j))
             for i in range(1, n + 1) for j in range(1, i + 1)]
    return Graph(2 * n, edges, bipartition=(range(n), range(n, 2 * n)))


def _chain_check_edge(spec: ChainSpec, i: int, j: int) -> tuple[int, int]:
    """Edge a_i b_j, verified against the rule i >= j and the index range."""
    if not (1 <= i <= spec.n and 1 <= j <= spec.n):
        raise FamilyError(f"matching references a_{i} b_{j} outside [1..{spec.n}]")
    if i < j:
        raise FamilyError(f"a_{i} b_{j} violates the chain edge rule i >= j")
    return norm_edge(_chain_vertex_a(spec, i), _chain_vertex_b(spec, j))


def chain_matching(spec: ChainSpec, ell: int) -> Matching:
    """The matching after ell scripted augmentations, in closed form.

    Union of three parts: the surviving staircase edges b_s a_{s+k-1-j}, the
    surviving express edges b_{istar_j} a_{n-k+1+j} for j >= ell, and the
    diagonal edges a_s b_s gained by the first ell augmentations.
    """
    k, n = spec.k, spec.n
    if not 0 <= ell <= k - 1:
        raise ValueError(f"ell must lie in [0, {k - 1}]")
    edges = []
    for j in range(k - 1):
        lo, hi = spec.idx[j]
        cut_hi = spec.istar[j] + max(0, ell - 1 - j)
        for s in range(lo, hi + 1):
            if spec.istar[j] <= s <= cut_hi:
                continue
            edges.append(_chain_check_edge(spec, s + k - 1 - j, s))
    for j in range(ell, k):
        edges.append(_chain_check_edge(spec, n - k + 1 + j, spec.istar[j]))
    # diagonals collected along the first ell augmenting paths
    for j in range(min(ell, k - 1)):
        for s in range(spec.istar[j], spec.istar[j] + (ell - 1 - j) + 1):
            edges.append(_chain_check_edge(spec, s, s))
    for t in range(1, ell + 1):
        edges.append(_chain_check_edge(spec, n - k + t, n - k + t))
    return Matching(edges)


def chain_aug_path(spec: ChainSpec, ell: int) -> AltPath:
    """The scripted augmenting path for phase ell+1: starts at a_ell, takes
    the diagonal blue edge at every a, the incident red edge at every b.

    Defined for ell = 1..k; the paths are pairwise vertex-disjoint and have
    lengths 3, 5, ..., 2k+1, one per phase.
    """
    k, n = spec.k, spec.n
    if not 1 <= ell <= k:
        raise ValueError(f"ell must lie in [1, {k}]")
    m0 = chain_matching(spec, 0)
    seq = [_chain_vertex_a(spec, ell)]
    i = ell
    while True:
        b = _chain_vertex_b(spec, i)
        seq.append(b)
        mb = m0.mate_of(b)
        if mb is None:
            break
        seq.append(mb)
        i = mb + 1  # a-vertex id back to 1-based index
    path = AltPath(seq)
    if path.length() != 2 * ell + 1:
        raise FamilyError(f"P_{ell} has length {path.length()}, expected {2 * ell + 1}")
    if seq[-1] != _chain_vertex_b(spec, n - k + ell):
        raise FamilyError(f"P_{ell} ends at the wrong vertex")
    return path


def gen_chain(k: int) -> FamilyInstance:
    """Bipartite chain instance forcing k single-path augmentation phases.

    Phase 1 finds the maximal matching M_0 as length-1 paths; phase ell+1
    augments along the single path P_ell of length 2*ell + 1 for ell = 1..k,
    ending at a perfect matching.  That is k+1 phases in total: the stated
    matching sequence M_0..M_{k-1} spans the first k, and the forced
    length-(2k+1) completion occupies one more (the walk structure admits one
    augmenting path per length 3, 5, ..., 2k+1).  The closed-form matchings
    are cross-checked against the augment fold while building.
    """
    spec = make_chain_spec(k)
    g = chain_graph(spec)
    m0 = chain_matching(spec, 0)
    m0.validate_in(g)

    exposed_a = {v for v in range(spec.n) if m0.is_exposed(v)}
    want_a = {_chain_vertex_a(spec, i)
              for i in range(spec.idx[0][0], spec.idx[0][1] + 1)}
    exposed_b = {v for v in range(spec.n, 2 * spec.n) if m0.is_exposed(v)}
    want_b = {_chain_vertex_b(spec, i)
              for i in range(spec.idx[k][0], spec.idx[k][1] + 1)}
    if exposed_a != want_a or exposed_b != want_b:
        raise FamilyError("exposed vertices of M_0 are not idx_0 / idx_k")

    phases: list[list[tuple[int, ...]]] = [
        [tuple(e) for e in m0.sorted_edges()]
    ]
    current = m0
    seen: set[int] = set()
    for ell in range(1, k + 1):
        p = chain_aug_path(spec, ell)
        if not seen.isdisjoint(p.vertices):
            raise FamilyError("scripted chain paths are not vertex-disjoint")
        seen.update(p.vertices)
        current = augment(current, p)
        if ell <= k - 1 and current != chain_matching(spec, ell):
            raise FamilyError(f"closed-form M_{ell} disagrees with the augment fold")
        phases.append([p.vertices])
    if current.size() != spec.n:
        raise FamilyError("scripted schedule does not end at a perfect matching")

    meta = FamilyMeta(
        name="chain", params={"k": k, "side": spec.n}, expected_phases=k + 1,
        labels={
            "side_a": list(range(spec.n)),
            "side_b": list(range(spec.n, 2 * spec.n)),
            "a_of_index": {i: _chain_vertex_a(spec, i) for i in range(1, spec.n + 1)},
            "b_of_index": {i: _chain_vertex_b(spec, i) for i in range(1, spec.n + 1)},
        })
    plan = Plan(phases=phases, metadata={"family": "chain", "k": k,
                                         "expected_phases": k + 1})
    return FamilyInstance(graph=g, plan=plan, meta=meta)


# ---------------------------------------------------------------------------
# Paths: concatenated double-copies with per-piece maximal matchings.
# ---------------------------------------------------------------------------

def gen_path_lb(j: int) -> FamilyInstance:
    """A path on 2j^2 + 1 vertices taking j scripted phases.

    The graph concatenates pieces H_i (two copies of a 2i-vertex path glued at
    one endpoint) onto an initial 3-vertex path; phase 1 places a maximal
    matching leaving one augmenting path of length 2i-1 per piece, and phase i
    augments inside the left copy of H_i.  Gluing shares a vertex (a bridging
    edge instead would put two exposed vertices next to each other and break
    phase-1 maximality).
    """
    if j < 1:
        raise ValueError("need j >= 1")
    n = 2 * j * j + 1
    g = Graph(n, [(v, v + 1) for v in range(n - 1)],
              bipartition=(range(0, n, 2), range(1, n, 2)))

    matching_edges: list[tuple[int, int]] = [(0, 1)]
    piece_bounds: dict[int, tuple[int, int]] = {1: (0, 2)}
    phase_paths: list[tuple[int, ...]] = []
    right = 2  # exposed right end of the assembly so far
    for i in range(2, j + 1):
        size = 4 * i - 1
        start = right
        end = start + size - 1
        piece_bounds[i] = (start, end)
        center = start + 2 * i - 1
        # per-copy pattern {v_2 v_3, v_4 v_5, ...} on each 2i-vertex copy
        for t in range(1, i):
            matching_edges.append((start + 2 * t - 1, start + 2 * t))
            matching_edges.append((center + 2 * t - 1, center + 2 * t))
        phase_paths.append(tuple(range(start, center + 1)))
        right = end
    total = piece_bounds[j][1] + 1 if j >= 2 else 3
    if total != n:
        raise FamilyError(f"assembled {total} vertices, expected {n}")
    if n > 4 * j * j:
        raise FamilyError("vertex budget 4j^2 exceeded")

    phases = [[tuple(e) for e in sorted(matching_edges)]]
    for p in phase_paths:
        phases.append([p])
    meta = FamilyMeta(name="pathlb", params={"j": j, "n": n}, expected_phases=j,
                      labels={"piece_bounds": piece_bounds})
    plan = Plan(phases=phases, metadata={"family": "pathlb", "j": j,
                                         "expected_phases": j})
    return FamilyInstance(graph=g, plan=plan, meta=meta)


# ---------------------------------------------------------------------------
# Cographs built by union and join.
# ---------------------------------------------------------------------------

def _build_cograph_piece(i: int, alloc) -> dict:
    """Vertices and edges of the i-th auxiliary cograph.

    Piece 0 is a single vertex.  Piece i >= 1 carries labels x, w_1..w_i and
    v_2..v_i, where each v_t was joined onto everything before it.
    """
    if i == 0:
        return {"vertices": [alloc()], "edges": [], "w": {}, "v": {}, "x": None}
    x = alloc()
    w1 = alloc()
    piece = {"vertices": [x, w1], "edges": [(x, w1)], "w": {1: w1}, "v": {}, "x": x}
    for t in range(2, i + 1):
        wt = alloc()
        vt = alloc()
        piece["edges"].extend((u, vt) for u in piece["vertices"])
        piece["edges"].append((wt, vt))
        piece["vertices"].extend((wt, vt))
        piece["w"][t] = wt
        piece["v"][t] = vt
    return piece


def gen_cograph_lb(n: int) -> FamilyInstance:
    """Trivially perfect instance taking ceil(sqrt(n)) scripted phases.

    The graph joins one extra vertex onto the disjoint union of the pieces
    0..s; phase 1 assembles the per-piece maximal matchings plus the edge
    between the two single-vertex pieces, and phase i >= 2 augments the unique
    shortest path (length 2i-1) inside piece i.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    s = _ceil_sqrt(n)
    counter = [0]

    def alloc() -> int:
        counter[0] += 1
        return counter[0] - 1

    pieces = [_build_cograph_piece(i, alloc) for i in range(s + 1)]
    join_v = alloc()
    union_vertices = [v for piece in pieces for v in piece["vertices"]]
    edges = [e for piece in pieces for e in piece["edges"]]
    edges.extend((u, join_v) for u in union_vertices)
    total = counter[0]
    if total != s * s + s + 2:
        raise FamilyError(f"built {total} vertices, expected {s * s + s + 2}")
    g = Graph(total, edges)

    matching_edges: list[tuple[int, int]] = [(pieces[0]["vertices"][0], join_v)]
    if s >= 1:
        matching_edges.append((pieces[1]["x"], pieces[1]["w"][1]))
    for i in range(2, s + 1):
        piece = pieces[i]
        for t in range(2, i + 1):
            matching_edges.append((piece["v"][t], piece["w"][t - 1]))
    phases: list[list[tuple[int, ...]]] = [
        [tuple(norm_edge(*e)) for e in sorted(norm_edge(*e) for e in matching_edges)]
    ]
    for i in range(2, s + 1):
        piece = pieces[i]
        seq = [piece["w"][i]]
        for t in range(i, 1, -1):
            seq.append(piece["v"][t])
            seq.append(piece["w"][t - 1])
        seq.append(piece["x"])
        if len(seq) != 2 * i:
            raise FamilyError("piece path has the wrong vertex count")
        phases.append([tuple(seq)])

    meta = FamilyMeta(
        name="cographlb", params={"n": n, "s": s}, expected_phases=s,
        labels={
            "join_vertex": join_v,
            "w": {i: dict(pieces[i]["w"]) for i in range(1, s + 1)},
            "v": {i: dict(pieces[i]["v"]) for i in range(2, s + 1)},
            "x": {i: pieces[i]["x"] for i in range(1, s + 1)},
        })
    plan = Plan(phases=phases, metadata={"family": "cographlb", "n": n,
                                         "expected_phases": s})
    return FamilyInstance(graph=g, plan=plan, meta=meta)


# ---------------------------------------------------------------------------
# Seeded structured families (base class + planted modulator).
# ---------------------------------------------------------------------------

def _splex_component(size: int, s: int, rng: random.Random) -> list[tuple[int, int]]:
    """Edges of an s-plex on `size` vertices: start from a clique and remove
    edges while keeping every degree >= size - s."""
    edges = {(u, v) for u in range(size) for v in range(u + 1, size)}
    if s <= 1:
        return sorted(edges)
    removable = sorted(edges)
    rng.shuffle(removable)
    deg = {v: size - 1 for v in range(size)}
    removals = rng.randrange(0, len(removable) + 1)
    for u, v in removable[:removals * 2]:
        if deg[u] > size - s and deg[v] > size - s and len(edges) > 1:
            edges.discard((u, v))
            deg[u] -= 1
            deg[v] -= 1
    return sorted(edges)


def gen_structured(class_name: str, params: dict, k_modulator: int,
                   seed: int) -> FamilyInstance:
    """Disjoint structured base plus k planted modulator vertices with random
    edges into the base.

    class_name is one of cluster, splex_union, bounded_nd, star_forest.
    Relevant params: comp_count, comp_size, s (plex parameter), t (class
    count for bounded_nd), edges_per_modulator.
    """
    rng = random.Random(seed)
    comp_count = params.get("comp_count", 8)
    comp_size = params.get("comp_size", 5)
    edges: list[tuple[int, int]] = []
    base_n = 0

    if class_name == "cluster":
        for _ in range(comp_count):
            for u in range(base_n, base_n + comp_size):
                for v in range(u + 1, base_n + comp_size):
                    edges.append((u, v))
            base_n += comp_size
    elif class_name == "splex_union":
        s = params.get("s", 2)
        if s > comp_size:
            raise ValueError("plex parameter exceeds the component size")
        for _ in range(comp_count):
            for u, v in _splex_component(comp_size, s, rng):
                edges.append((base_n + u, base_n + v))
            base_n += comp_size
    elif class_name == "bounded_nd":
        t = params.get("t", 3)
        sizes = [rng.randrange(2, comp_size + 1) for _ in range(t)]
        classes = []
        for size in sizes:
            classes.append(list(range(base_n, base_n + size)))
            base_n += size
        clique_flags = [rng.random() < 0.5 for _ in range(t)]
        for cls, flag in zip(classes, clique_flags):
            if flag:
                edges.extend((u, v) for i, u in enumerate(cls) for v in cls[i + 1:])
        for a in range(t):
            for b in range(a + 1, t):
                joined = rng.random() < 0.5 or b == a + 1
                if joined:
                    edges.extend((u, v) for u in classes[a] for v in classes[b])
    elif class_name == "star_forest":
        for _ in range(comp_count):
            center = base_n
            leaves = max(1, comp_size - 1)
            edges.extend((center, center + i) for i in range(1, leaves + 1))
            base_n += leaves + 1
    else:
        raise ValueError(f"unknown structured class {class_name!r}")

    planted = tuple(range(base_n, base_n + k_modulator))
    per_mod = params.get("edges_per_modulator", 3)
    for v in planted:
        targets = rng.sample(range(base_n), min(per_mod, base_n))
        edges.extend((u, v) for u in targets)
    g = Graph(base_n + k_modulator, edges)
    meta = FamilyMeta(
        name=f"structured-{class_name}",
        params={**params, "class": class_name, "k": k_modulator, "seed": seed},
        expected_phases=0, planted=planted,
        labels={"base_n": base_n})
    return FamilyInstance(graph=g, plan=None, meta=meta)


def gen_random(n: int, p: float | None = None, m: int | None = None,
               seed: int = 0, bipartite: bool = False) -> FamilyInstance:
    """Seeded random graph for differential testing; deterministic per seed."""
    rng = random.Random(seed)
    if p is None and m is None:
        p = 0.5
    bip = None
    if bipartite:
        half = (n + 1) // 2
        all_pairs = [(i, j) for i in range(half) for j in range(half, n)]
        bip = (range(half), range(half, n))
    else:
        all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if m is not None:
        if not 0 <= m <= len(all_pairs):
            raise ValueError(f"edge count {m} infeasible")
        edges = rng.sample(all_pairs, m)
    else:
        if not 0.0 <= p <= 1.0:
            raise ValueError("edge probability out of [0,1]")
        edges = [e for e in all_pairs if rng.random() < p]
    g = Graph(n, edges, bipartition=bip)
    meta = FamilyMeta(name="random",
                      params={"n": n, "p": p, "m": m, "seed": seed,
                              "bipartite": bipartite},
                      expected_phases=0)
    return FamilyInstance(graph=g, plan=None, meta=meta)
