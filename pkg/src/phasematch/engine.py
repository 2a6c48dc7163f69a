"""Phase framework: maximal sets of vertex-disjoint shortest augmenting paths.

A run starts from the empty matching and repeatedly augments along a maximal
set of vertex-disjoint shortest augmenting paths until the matching is
maximum.  Which maximal set gets picked is fixed by a Strategy (the framework
itself permits any choice):

  * greedy-lex     -- lexicographically smallest paths first, deterministic;
  * seeded-random  -- search order shuffled deterministically from a seed;
  * scripted       -- replays a Plan, validating every listed path and the
                      maximality of every listed set at run time.

Bipartite graphs get exact O(m) phases (layered BFS + disjoint DFS
extraction).  General graphs use an exhaustive search over simple alternating
paths, pruned by alternating-walk distances; walk distances underestimate path
distances, so the pruning is sound.  A (vertex, parity) dominance memo is
deliberately not used for general graphs: odd structures make it unsound, and
soundness outranks speed at desk scale.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import AltPath, Graph, Matching, augment, is_augmenting

_INF = float("inf")

DEFAULT_EXHAUSTIVE_LIMIT = 512


class SizeLimitError(ValueError):
    """General-graph exhaustive search refused beyond the configured size."""


class PlanError(ValueError):
    """A scripted plan failed validation.  Carries the offending phase index."""

    def __init__(self, phase_index: int, reason: str):
        self.phase_index = phase_index
        self.reason = reason
        super().__init__(f"phase {phase_index}: {reason}")


# ---------------------------------------------------------------------------
# Strategies and plans.
# ---------------------------------------------------------------------------

@dataclass
class Plan:
    """Predetermined phase contents: one list of vertex sequences per phase."""

    phases: list[list[tuple[int, ...]]]
    metadata: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "phases": [
                {"index": i + 1, "paths": [list(p) for p in phase]}
                for i, phase in enumerate(self.phases)
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Plan":
        phases = [
            [tuple(p) for p in entry["paths"]]
            for entry in sorted(data["phases"], key=lambda e: e["index"])
        ]
        return cls(phases=phases, metadata=dict(data.get("metadata", {})))


class GreedyLex:
    kind = "greedy-lex"

    def describe(self) -> dict:
        return {"kind": self.kind}

    def reset(self) -> None:
        pass


class SeededRandom:
    kind = "seeded-random"

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    def describe(self) -> dict:
        return {"kind": self.kind, "seed": self.seed}

    def reset(self) -> None:
        self.rng = random.Random(self.seed)


class Scripted:
    kind = "scripted"

    def __init__(self, plan: Plan):
        self.plan = plan
        self._pos = 0

    def describe(self) -> dict:
        return {"kind": self.kind, "metadata": self.plan.metadata}

    def reset(self) -> None:
        self._pos = 0

    def next_phase(self) -> Optional[list[tuple[int, ...]]]:
        if self._pos >= len(self.plan.phases):
            return None
        phase = self.plan.phases[self._pos]
        self._pos += 1
        return phase


Strategy = GreedyLex | SeededRandom | Scripted


# ---------------------------------------------------------------------------
# Traces.
# ---------------------------------------------------------------------------

@dataclass
class PhaseRecord:
    index: int
    length: int
    paths: list[AltPath]
    size_after: int


@dataclass
class PhaseTrace:
    n: int
    strategy: dict
    phases: list[PhaseRecord]
    final_size: int

    def phase_count(self) -> int:
        return len(self.phases)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "strategy": self.strategy,
            "phases": [
                {
                    "index": rec.index,
                    "length": rec.length,
                    "paths": [list(p.vertices) for p in rec.paths],
                }
                for rec in self.phases
            ],
            "final_size": self.final_size,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PhaseTrace":
        phases = [
            PhaseRecord(
                index=entry["index"],
                length=entry["length"],
                paths=[AltPath(p) for p in entry["paths"]],
                size_after=entry.get("size_after", -1),
            )
            for entry in sorted(data["phases"], key=lambda e: e["index"])
        ]
        return cls(n=data["n"], strategy=dict(data.get("strategy", {})),
                   phases=phases, final_size=data["final_size"])


def write_trace(trace: PhaseTrace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(trace.to_json_dict(), fh, indent=1)
        fh.write("\n")


def read_trace(path) -> PhaseTrace:
    with open(path, "r", encoding="utf-8") as fh:
        return PhaseTrace.from_json_dict(json.load(fh))


def write_plan(plan: Plan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan.to_json_dict(), fh, indent=1)
        fh.write("\n")


def read_plan(path) -> Plan:
    with open(path, "r", encoding="utf-8") as fh:
        return Plan.from_json_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Alternating-walk distances.
#
# States: "ready" = at v after a red edge (or at an exposed start), next edge
# must be blue; "blue" = at v just arrived via a blue edge.  Walk distances
# never exceed path distances, which makes them sound pruning bounds; on
# bipartite graphs they coincide with path distances (no odd structures).
# ---------------------------------------------------------------------------

def _walk_distances(g: Graph, m: Matching,
                    forbidden: frozenset | set = frozenset()):
    ready = [_INF] * g.n
    blue = [_INF] * g.n
    mate = m.mate
    queue: list[tuple[int, int]] = []
    for v in range(g.n):
        if v not in mate and v not in forbidden:
            ready[v] = 0
            queue.append((v, 0))
    head = 0
    while head < len(queue):
        v, state = queue[head]
        head += 1
        if state == 0:
            d = ready[v] + 1
            for w in g.adj[v]:
                if w in forbidden or mate.get(v) == w:
                    continue
                if d < blue[w]:
                    blue[w] = d
                    if w in mate:
                        queue.append((w, 1))
        else:
            w = mate[v]
            if w in forbidden:
                continue
            d = blue[v] + 1
            if d < ready[w]:
                ready[w] = d
                queue.append((w, 0))
    return ready, blue


def _walk_aug_lower_bound(g: Graph, m: Matching, blue: list) -> Optional[int]:
    best = _INF
    mate = m.mate
    for v in range(g.n):
        if v not in mate and blue[v] < best:
            best = blue[v]
    return None if best == _INF else int(best)


def _find_path_exact(g: Graph, m: Matching, target_len: int,
                     forbidden: frozenset | set,
                     blue: list,
                     adj_order: Sequence[Sequence[int]],
                     starts: Sequence[int]) -> Optional[list[int]]:
    """One augmenting path of exactly target_len edges avoiding `forbidden`.

    Depth-first over simple alternating paths, pruned by walk distances; the
    first hit in the given exploration order is returned.
    """
    mate = m.mate
    path: list[int] = []
    visited: set[int] = set()

    def rec(v: int, depth: int) -> bool:
        for w in adj_order[v]:
            if w in forbidden or w in visited or mate.get(v) == w:
                continue
            if w not in mate:
                if depth + 1 == target_len:
                    path.append(w)
                    return True
                continue
            mw = mate[w]
            if mw in forbidden or mw in visited:
                continue
            if depth + 2 + blue[mw] > target_len:
                continue
            path.append(w)
            path.append(mw)
            visited.add(w)
            visited.add(mw)
            if rec(mw, depth + 2):
                return True
            visited.discard(mw)
            visited.discard(w)
            path.pop()
            path.pop()
        return False

    for u in starts:
        if u in forbidden or u in mate or blue[u] > target_len:
            continue
        path.clear()
        path.append(u)
        visited.clear()
        visited.add(u)
        if rec(u, 0):
            return list(path)
    return None


def _check_limit(g: Graph, limit_n: int) -> None:
    if g.bipartition is None and g.n > limit_n:
        raise SizeLimitError(
            f"general graph with n={g.n} exceeds the exhaustive-mode limit {limit_n}; "
            "raise the limit explicitly to proceed")


def _max_path_len(g: Graph, m: Matching, forbidden) -> int:
    pairs = sum(1 for u, v in m.edges if u not in forbidden and v not in forbidden)
    return 2 * pairs + 1


def shortest_aug_length(g: Graph, m: Matching,
                        forbidden: frozenset | set = frozenset(),
                        limit_n: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Optional[int]:
    """Length of a shortest m-augmenting path avoiding `forbidden`, or None
    if no augmenting path exists (Berge: the matching is maximum).
    """
    m.validate_in(g)
    ready, blue = _walk_distances(g, m, forbidden)
    lower = _walk_aug_lower_bound(g, m, blue)
    if lower is None:
        return None
    if g.bipartition is not None:
        return lower
    _check_limit(g, limit_n)
    starts = [v for v in range(g.n) if v not in m.mate and v not in forbidden]
    cap = _max_path_len(g, m, forbidden)
    target = lower
    while target <= cap:
        if _find_path_exact(g, m, target, forbidden, blue, g.adj, starts) is not None:
            return target
        target += 2
    return None


def _exists_aug_path_of_length(g: Graph, m: Matching, length: int,
                               forbidden: frozenset | set,
                               limit_n: int) -> bool:
    """Does an augmenting path of exactly `length` edges avoid `forbidden`?

    Callers guarantee no strictly shorter augmenting path avoids it.
    """
    ready, blue = _walk_distances(g, m, forbidden)
    lower = _walk_aug_lower_bound(g, m, blue)
    if lower is None or lower > length:
        return False
    if g.bipartition is not None:
        return lower == length
    _check_limit(g, limit_n)
    starts = [v for v in range(g.n) if v not in m.mate and v not in forbidden]
    return _find_path_exact(g, m, length, forbidden, blue, g.adj, starts) is not None


# ---------------------------------------------------------------------------
# Hopcroft-Karp single phase for bipartite graphs.
# ---------------------------------------------------------------------------

def hopcroft_karp_phase(g: Graph, m: Matching) -> list[AltPath]:
    """A maximal set of vertex-disjoint shortest augmenting paths, computed by
    a layered BFS from exposed left vertices followed by disjoint DFS
    extraction.  Linear in n + m per call.  Empty iff m is maximum.
    """
    if g.bipartition is None:
        raise ValueError("hopcroft_karp_phase needs a graph with a bipartition")
    m.validate_in(g)
    left = sorted(g.bipartition[0])
    pair: dict[int, int] = dict(m.mate)

    dist: dict[int, float] = {}
    queue: list[int] = []
    for u in left:
        if u not in pair:
            dist[u] = 0
            queue.append(u)
    reference = _INF
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        if dist[u] + 1 >= reference:
            continue
        for v in g.adj[u]:
            w = pair.get(v)
            if w is None:
                reference = min(reference, dist[u] + 1)
            elif w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    if reference == _INF:
        return []

    def try_extract(u0: int) -> Optional[list[int]]:
        # iterative DFS along the layer structure; dead vertices get dist -1
        stack: list[tuple[int, int]] = [(u0, 0)]
        rights: list[int] = []
        while stack:
            u, start_idx = stack[-1]
            moved = False
            nbrs = g.adj[u]
            i = start_idx
            while i < len(nbrs):
                v = nbrs[i]
                i += 1
                w = pair.get(v)
                if w is None:
                    if dist[u] + 1 == reference:
                        rights.append(v)
                        seq: list[int] = []
                        for (lu, _), rv in zip(stack, rights):
                            seq.append(lu)
                            seq.append(rv)
                        for (lu, _), rv in zip(stack, rights):
                            pair[rv] = lu
                            pair[lu] = rv
                        return seq
                elif dist.get(w, -1) == dist[u] + 1:
                    stack[-1] = (u, i)
                    rights.append(v)
                    stack.append((w, 0))
                    moved = True
                    break
            if moved:
                continue
            dist[u] = -1
            stack.pop()
            if rights:
                rights.pop()
        return None

    paths: list[AltPath] = []
    for u0 in left:
        if u0 in pair or dist.get(u0, -1) != 0:
            continue
        seq = try_extract(u0)
        if seq is not None:
            paths.append(AltPath(seq))
    used: set[int] = set()
    for p in paths:
        assert used.isdisjoint(p.vertices), "extracted paths must be vertex-disjoint"
        used.update(p.vertices)
    return paths


# ---------------------------------------------------------------------------
# Generic exact phase.
# ---------------------------------------------------------------------------

def _extract_maximal_set(g: Graph, m: Matching, length: int, limit_n: int,
                         rng: Optional[random.Random]) -> list[AltPath]:
    """Greedy extraction of disjoint length-`length` augmenting paths until no
    further one exists.  Lexicographic order when rng is None, otherwise the
    exploration order is shuffled."""
    paths: list[AltPath] = []
    used: set[int] = set()
    while True:
        ready, blue = _walk_distances(g, m, used)
        lower = _walk_aug_lower_bound(g, m, blue)
        if lower is None or lower > length:
            break
        if rng is None:
            adj_order: Sequence[Sequence[int]] = g.adj
            starts = [v for v in range(g.n) if v not in m.mate and v not in used]
        else:
            shuffled = [list(a) for a in g.adj]
            for a in shuffled:
                rng.shuffle(a)
            adj_order = shuffled
            starts = [v for v in range(g.n) if v not in m.mate and v not in used]
            rng.shuffle(starts)
        seq = _find_path_exact(g, m, length, used, blue, adj_order, starts)
        if seq is None:
            break
        p = AltPath(seq)
        paths.append(p)
        used.update(seq)
    return paths


def _validate_scripted_phase(g: Graph, m: Matching, seqs: list[tuple[int, ...]],
                             length: Optional[int], phase_index: int,
                             limit_n: int) -> list[AltPath]:
    if length is None:
        raise PlanError(phase_index, "matching is already maximum but the plan lists more phases")
    if not seqs:
        raise PlanError(phase_index, "phase lists no paths")
    paths: list[AltPath] = []
    used: set[int] = set()
    for seq in seqs:
        try:
            p = AltPath.in_graph(g, seq)
        except ValueError as exc:
            raise PlanError(phase_index, f"listed path {seq} is invalid: {exc}") from None
        if not is_augmenting(g, m, p):
            raise PlanError(phase_index, f"listed path {seq} is not augmenting")
        if p.length() != length:
            raise PlanError(
                phase_index,
                f"listed path {seq} has length {p.length()}, but the shortest "
                f"augmenting length is {length}")
        if not used.isdisjoint(p.vertices):
            raise PlanError(phase_index, f"listed path {seq} shares vertices with another")
        used.update(p.vertices)
        paths.append(p)
    if _exists_aug_path_of_length(g, m, length, frozenset(used), limit_n):
        raise PlanError(
            phase_index,
            "listed set is not maximal: a further disjoint shortest augmenting path exists")
    return paths


def exact_phase(g: Graph, m: Matching, strategy: Strategy,
                limit_n: int = DEFAULT_EXHAUSTIVE_LIMIT,
                _phase_index: int = 1) -> list[AltPath]:
    """One phase: a maximal set of vertex-disjoint shortest augmenting paths.

    greedy-lex on a bipartite graph delegates to hopcroft_karp_phase; scripted
    strategies consume their plan one phase per call and are validated for
    shortestness, disjointness, and maximality.
    """
    m.validate_in(g)
    if isinstance(strategy, GreedyLex) and g.bipartition is not None:
        return hopcroft_karp_phase(g, m)
    _check_limit(g, limit_n)
    length = shortest_aug_length(g, m, limit_n=limit_n)
    if isinstance(strategy, Scripted):
        seqs = strategy.next_phase()
        if seqs is None:
            if length is not None:
                raise PlanError(_phase_index,
                                "plan exhausted but augmenting paths remain")
            return []
        return _validate_scripted_phase(g, m, seqs, length, _phase_index, limit_n)
    if length is None:
        return []
    rng = strategy.rng if isinstance(strategy, SeededRandom) else None
    return _extract_maximal_set(g, m, length, limit_n, rng)


def run_phase_framework(g: Graph, strategy: Strategy,
                        limit_n: int = DEFAULT_EXHAUSTIVE_LIMIT) -> tuple[Matching, PhaseTrace]:
    """Run phases from the empty matching until maximum; record the trace.

    The returned matching is maximum, certified by the final empty phase
    (no augmenting path exists).
    """
    strategy.reset()
    m = Matching()
    records: list[PhaseRecord] = []
    index = 0
    while True:
        index += 1
        paths = exact_phase(g, m, strategy, limit_n=limit_n, _phase_index=index)
        if not paths:
            break
        for p in paths:
            m = augment(m, p)
        records.append(PhaseRecord(index=index, length=paths[0].length(),
                                   paths=list(paths), size_after=m.size()))
    trace = PhaseTrace(n=g.n, strategy=strategy.describe(), phases=records,
                       final_size=m.size())
    return m, trace


# ---------------------------------------------------------------------------
# Trace verification and bound reports.
# ---------------------------------------------------------------------------

@dataclass
class TraceReport:
    legal: bool
    phase_count: int
    final_size: int
    violations: list[str]


def verify_trace(g: Graph, trace: PhaseTrace,
                 limit_n: int = DEFAULT_EXHAUSTIVE_LIMIT) -> TraceReport:
    """Replay a trace from the empty matching, checking per phase that every
    path is a shortest augmenting path, the set is disjoint and maximal, and
    lengths strictly increase across phases; the final matching must be
    maximum.  Violations are report content, not exceptions.
    """
    violations: list[str] = []
    m = Matching()
    prev_len = 0
    for rec in trace.phases:
        tag = f"phase {rec.index}"
        shortest = shortest_aug_length(g, m, limit_n=limit_n)
        if shortest is None:
            violations.append(f"{tag}: matching already maximum, no phase possible")
            break
        if rec.length != shortest:
            violations.append(
                f"{tag}: recorded length {rec.length} != shortest augmenting length {shortest}")
        if rec.length <= prev_len and prev_len:
            violations.append(
                f"{tag}: length {rec.length} does not strictly increase over {prev_len}")
        if not rec.paths:
            violations.append(f"{tag}: empty phase")
            break
        used: set[int] = set()
        ok = True
        for p in rec.paths:
            try:
                AltPath.in_graph(g, p.vertices)
            except ValueError as exc:
                violations.append(f"{tag}: path {list(p.vertices)} invalid: {exc}")
                ok = False
                break
            if p.length() != rec.length:
                violations.append(
                    f"{tag}: path {list(p.vertices)} has length {p.length()} != {rec.length}")
                ok = False
            if not is_augmenting(g, m, p):
                violations.append(f"{tag}: path {list(p.vertices)} is not augmenting")
                ok = False
                break
            if not used.isdisjoint(p.vertices):
                violations.append(f"{tag}: paths are not vertex-disjoint")
                ok = False
                break
            used.update(p.vertices)
        if not ok:
            break
        if shortest == rec.length and _exists_aug_path_of_length(
                g, m, rec.length, frozenset(used), limit_n):
            violations.append(f"{tag}: set is not maximal")
        for p in rec.paths:
            m = augment(m, p)
        if rec.size_after >= 0 and m.size() != rec.size_after:
            violations.append(
                f"{tag}: recorded size {rec.size_after} != replayed size {m.size()}")
        prev_len = rec.length
    else:
        if shortest_aug_length(g, m, limit_n=limit_n) is not None:
            violations.append("final matching is not maximum")
        if m.size() != trace.final_size:
            violations.append(
                f"recorded final size {trace.final_size} != replayed {m.size()}")
    return TraceReport(legal=not violations, phase_count=len(trace.phases),
                       final_size=m.size(), violations=violations)


@dataclass
class PhaseBoundReport:
    phases: int
    nu: int
    n: int
    bound_nu: int
    bound_n: int
    within_nu: bool
    within_n: bool

    def ok(self) -> bool:
        return self.within_nu and self.within_n


def phase_bound_report(g: Graph, trace: PhaseTrace) -> PhaseBoundReport:
    """Compare the observed phase count against 2*ceil(sqrt(nu)) + 2 and
    2*ceil(sqrt(n)).  The trace must be legal, so its final size is nu(g).
    An exceedance would falsify the implementation, not the analysis.
    """
    nu = trace.final_size
    phases = trace.phase_count()
    bound_nu = 2 * _ceil_sqrt(nu) + 2
    bound_n = 2 * _ceil_sqrt(g.n)
    return PhaseBoundReport(
        phases=phases, nu=nu, n=g.n,
        bound_nu=bound_nu, bound_n=bound_n,
        within_nu=phases <= bound_nu, within_n=phases <= bound_n)


def _ceil_sqrt(x: int) -> int:
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1
