"""Brute-force ground truth for matchings, augmenting paths, and replaceability.

Everything here is deliberately simple and exhaustive.  Sizes are capped and
the functions refuse larger inputs instead of degrading silently.  Pure
functions over immutable inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import AltPath, Graph, Matching, is_alternating, norm_edge


class OracleLimitError(ValueError):
    """Input exceeds the configured exhaustive-search limit."""


@dataclass(frozen=True)
class OracleLimits:
    max_n_matching: int = 18
    max_n_replaceability: int = 9
    max_n_enumeration: int = 14


DEFAULT_LIMITS = OracleLimits()


def brute_force_nu(g: Graph, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Exact maximum matching size by branch and bound over the edge list."""
    if g.n > limits.max_n_matching:
        raise OracleLimitError(f"n={g.n} exceeds matching limit {limits.max_n_matching}")
    edges = g.edges
    n_edges = len(edges)
    best = 0

    def recurse(idx: int, used: int, count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        # remaining vertices can contribute at most one edge per two
        free = g.n - bin(used).count("1")
        if count + free // 2 <= best:
            return
        for i in range(idx, n_edges):
            u, v = edges[i]
            bit = (1 << u) | (1 << v)
            if used & bit:
                continue
            recurse(i + 1, used | bit, count + 1)
            # excluding edge i is covered by later iterations of this loop

    recurse(0, 0, 0)
    return best


def _exposed(g: Graph, m: Matching) -> list[int]:
    return [v for v in range(g.n) if v not in m.mate]


def _collect_shortest(g: Graph, m: Matching,
                      cap: int | None = None) -> tuple[int | None, list[tuple[int, ...]]]:
    """All shortest augmenting paths via depth-first enumeration.

    Returns (best length, canonical vertex tuples).  `cap` prunes anything
    longer outright.
    """
    exposed = _exposed(g, m)
    exposed_set = set(exposed)
    best: list[int | None] = [cap]
    found: set[tuple[int, ...]] = set()
    mate = m.mate
    adj = g.adj

    def step_blue(path: list[int], visited: set[int]) -> None:
        v = path[-1]
        depth = len(path) - 1
        if best[0] is not None and depth + 1 > best[0]:
            return
        for w in adj[v]:
            if w in visited or mate.get(v) == w:
                continue
            if w in exposed_set:
                length = depth + 1
                if best[0] is None or length < best[0]:
                    best[0] = length
                    found.clear()
                if length == best[0]:
                    t = tuple(path) + (w,)
                    if t[0] > t[-1]:
                        t = tuple(reversed(t))
                    found.add(t)
                continue
            mw = mate[w]
            if mw in visited:
                continue
            # blue + forced red + at least one closing blue edge
            if best[0] is not None and depth + 3 > best[0]:
                continue
            path.append(w)
            path.append(mw)
            visited.add(w)
            visited.add(mw)
            step_blue(path, visited)
            visited.discard(mw)
            visited.discard(w)
            path.pop()
            path.pop()

    for u in exposed:
        step_blue([u], {u})
    return best[0], sorted(found)


def enumerate_shortest_aug_paths(g: Graph, m: Matching,
                                 limits: OracleLimits = DEFAULT_LIMITS) -> list[AltPath]:
    """All shortest m-augmenting paths, deduplicated up to reversal."""
    if g.n > limits.max_n_enumeration:
        raise OracleLimitError(f"n={g.n} exceeds enumeration limit {limits.max_n_enumeration}")
    _, paths = _collect_shortest(g, m)
    return [AltPath(t) for t in paths]


def shortest_aug_length_exhaustive(g: Graph, m: Matching,
                                   limits: OracleLimits = DEFAULT_LIMITS) -> int | None:
    """Shortest m-augmenting path length by enumeration; None if maximum."""
    if g.n > limits.max_n_enumeration:
        raise OracleLimitError(f"n={g.n} exceeds enumeration limit {limits.max_n_enumeration}")
    best, _ = _collect_shortest(g, m)
    return best


def bipartite_shortest_aug_length(g: Graph, m: Matching) -> int | None:
    """Shortest augmenting path length on a bipartite graph via a state BFS.

    Walk-based search over (vertex, arrival-color) states.  In a bipartite
    graph alternating walks and alternating paths agree on shortest augmenting
    length, so this is exact there; it is implemented independently of the
    phase engine and has no size limit.
    """
    if g.bipartition is None:
        raise ValueError("graph carries no bipartition")
    INF = float("inf")
    ready = [INF] * g.n   # arrived via red (or start): next edge blue
    blue = [INF] * g.n    # arrived via blue
    mate = m.mate
    queue: list[tuple[int, int]] = []
    for v in range(g.n):
        if v not in mate:
            ready[v] = 0
            queue.append((v, 0))
    best = INF
    head = 0
    while head < len(queue):
        v, state = queue[head]
        head += 1
        if state == 0:
            d = ready[v]
            for w in g.adj[v]:
                if mate.get(v) == w:
                    continue
                if d + 1 < blue[w]:
                    blue[w] = d + 1
                    if w not in mate:
                        best = min(best, d + 1)
                    else:
                        queue.append((w, 1))
        else:
            d = blue[v]
            w = mate[v]
            if d + 1 < ready[w]:
                ready[w] = d + 1
                queue.append((w, 0))
    return None if best is INF else int(best)


def sample_aug_path(g: Graph, m: Matching, rng: random.Random) -> AltPath | None:
    """One m-augmenting path found by randomized depth-first search, or None."""
    exposed = _exposed(g, m)
    exposed_set = set(exposed)
    mate = m.mate
    rng.shuffle(exposed)

    def walk(path: list[int], visited: set[int]) -> list[int] | None:
        v = path[-1]
        nbrs = list(g.adj[v])
        rng.shuffle(nbrs)
        for w in nbrs:
            if w in visited or mate.get(v) == w:
                continue
            if w in exposed_set:
                return path + [w]
            mw = mate[w]
            if mw in visited:
                continue
            out = walk(path + [w, mw], visited | {w, mw})
            if out is not None:
                return out
        return None

    for u in exposed:
        out = walk([u], {u})
        if out is not None:
            return AltPath(out)
    return None


# ---------------------------------------------------------------------------
# Replaceability.
# ---------------------------------------------------------------------------

def _all_matchings(g: Graph) -> list[Matching]:
    """Every matching of g (not only maximal ones)."""
    out: list[list[tuple[int, int]]] = []
    edges = g.edges

    def recurse(idx: int, used: int, chosen: list[tuple[int, int]]) -> None:
        out.append(list(chosen))
        for i in range(idx, len(edges)):
            u, v = edges[i]
            bit = (1 << u) | (1 << v)
            if used & bit:
                continue
            chosen.append(edges[i])
            recurse(i + 1, used | bit, chosen)
            chosen.pop()

    recurse(0, 0, [])
    return [Matching(e) for e in out]


def _iter_alternating_paths(g: Graph, m: Matching):
    """Yield every alternating simple path with >= 1 edge, canonical orientation.

    Canonical means the smaller endpoint first; each path surfaces exactly once.
    """
    mate = m.mate

    def extend(path: list[int], visited: set[int], last_red: bool | None):
        v = path[-1]
        for w in g.adj[v]:
            if w in visited:
                continue
            red = mate.get(v) == w
            if last_red is not None and red == last_red:
                continue
            path.append(w)
            visited.add(w)
            if path[0] < path[-1]:
                yield tuple(path)
            yield from extend(path, visited, red)
            visited.discard(w)
            path.pop()

    for start in range(g.n):
        yield from extend([start], {start}, None)


def _min_replacement_length(g: Graph, m: Matching, path: tuple[int, ...],
                            stop_at: int) -> int:
    """Length of a shortest replacement for `path`, searched within its own
    vertex set.  Gives up early (returning the value found so far) once a
    replacement of length <= stop_at exists, since callers only track a max.
    """
    allowed = set(path)
    src, dst = path[0], path[-1]
    first_red = m.has_edge(path[0], path[1])
    last_red = m.has_edge(path[-2], path[-1])
    mate = m.mate
    best = len(path) - 1  # the path replaces itself

    def extend(v: int, visited: set[int], prev_red: bool | None, depth: int) -> None:
        nonlocal best
        if depth >= best or best <= stop_at:
            return
        for w in g.adj[v]:
            if w not in allowed or w in visited:
                continue
            red = mate.get(v) == w
            if prev_red is None:
                if red != first_red:
                    continue
            elif red == prev_red:
                continue
            if w == dst:
                if red == last_red and depth + 1 < best:
                    best = depth + 1
                    if best <= stop_at:
                        return
                continue
            visited.add(w)
            extend(w, visited, red, depth + 1)
            visited.discard(w)

    extend(src, {src}, None, 0)
    return best


def min_replaceability(g: Graph, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """The least L such that every alternating path under every matching of g
    admits a replacement of length at most L.  Exhaustive in both matchings
    and paths.
    """
    if g.n > limits.max_n_replaceability:
        raise OracleLimitError(f"n={g.n} exceeds replaceability limit {limits.max_n_replaceability}")
    worst = 0
    for m in _all_matchings(g):
        for path in _iter_alternating_paths(g, m):
            if len(path) - 1 <= worst:
                continue
            if not is_alternating(m, AltPath(path)):  # defensive; enumeration guarantees it
                continue
            need = _min_replacement_length(g, m, path, stop_at=worst)
            if need > worst:
                worst = need
    return worst


# ---------------------------------------------------------------------------
# Structural lemma checks.
# ---------------------------------------------------------------------------

def check_disjoint_packing(g: Graph, m: Matching, n2: Matching) -> bool:
    """True iff (V, m XOR n2) contains at least |n2|-|m| disjoint m-augmenting
    paths, found by decomposing the symmetric difference into its components.
    """
    m.validate_in(g)
    n2.validate_in(g)
    if n2.size() <= m.size():
        raise ValueError("need |n2| > |m|")
    diff = m.edges ^ n2.edges
    adj: dict[int, list[int]] = {}
    for u, v in diff:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    aug_count = 0
    for start in sorted(adj):
        if start in seen:
            continue
        # walk the whole component, tallying edges from each side
        stack = [start]
        comp: set[int] = {start}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        cm = sum(1 for u, v in m.edges if u in comp and v in comp and norm_edge(u, v) in diff)
        cn = sum(1 for u, v in n2.edges if u in comp and v in comp and norm_edge(u, v) in diff)
        if cn == cm + 1:
            aug_count += 1
    return aug_count >= n2.size() - m.size()


def check_hk_inequality(g: Graph, m: Matching, p: AltPath, p2: AltPath,
                        limits: OracleLimits = DEFAULT_LIMITS) -> bool:
    """Verify |p2| >= |p| + 2*|E(p) ^ E(p2)| for a shortest m-augmenting p and
    a p2 augmenting after p.  Preconditions are enforced exhaustively.
    """
    m.validate_in(g)
    from .graph import is_augmenting
    if not is_augmenting(g, m, p):
        raise ValueError("p is not m-augmenting")
    shortest = shortest_aug_length_exhaustive(g, m, limits)
    if shortest is None or p.length() != shortest:
        raise ValueError("p is not a shortest m-augmenting path")
    from .graph import augment
    m_after = augment(m, p)
    if not is_augmenting(g, m_after, p2):
        raise ValueError("p2 is not augmenting after augmenting along p")
    common = len(p.edge_set() & p2.edge_set())
    return p2.length() >= p.length() + 2 * common
