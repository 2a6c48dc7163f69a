"""Graph, matching, and alternating-path primitives shared by all other modules.

Vertex ids are dense 0-based integers.  Edges are unordered pairs stored with
the smaller endpoint first; duplicate pairs collapse under set semantics.
Graphs are immutable after construction and safe to share between workers;
matchings and paths are small value-like objects.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence


class GraphFormatError(ValueError):
    """Raised on malformed graph/matching/path files.  Carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def norm_edge(u: int, v: int) -> tuple[int, int]:
    """Normalize an unordered pair to (min, max)."""
    return (u, v) if u <= v else (v, u)


class Graph:
    """Immutable simple undirected graph.

    Attributes:
        n: vertex count, ids 0..n-1.
        edges: sorted tuple of normalized edges.
        adj: per-vertex sorted tuple of neighbors.
        bipartition: optional (left, right) pair of frozensets covering V,
            with every edge crossing the pair.
    """

    __slots__ = ("n", "edges", "adj", "_adjset", "bipartition")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 bipartition: tuple[Iterable[int], Iterable[int]] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range [0,{n})")
            norm.add(norm_edge(u, v))
        self.n = n
        self.edges = tuple(sorted(norm))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self._adjset = tuple(frozenset(a) for a in adj)
        if bipartition is None:
            self.bipartition = None
        else:
            left = frozenset(bipartition[0])
            right = frozenset(bipartition[1])
            if left & right:
                raise ValueError("bipartition sides overlap")
            if left | right != frozenset(range(n)):
                raise ValueError("bipartition does not cover the vertex set")
            for u, v in self.edges:
                if (u in left) == (v in left):
                    raise ValueError(f"edge ({u},{v}) does not cross the bipartition")
            self.bipartition = (left, right)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset:
        return self._adjset[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def vertices(self) -> range:
        return range(self.n)

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on `keep`, relabeled to 0..k-1 in sorted id order."""
        kept = sorted(set(keep))
        index = {v: i for i, v in enumerate(kept)}
        sub = [(index[u], index[v]) for u, v in self.edges
               if u in index and v in index]
        return Graph(len(kept), sub)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.edges == other.edges
                and self.bipartition == other.bipartition)

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.bipartition))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


class Matching:
    """A set of pairwise vertex-disjoint edges with mate lookup.

    Edges in the matching are "red"; all other edges of the host graph are
    "blue".
    """

    __slots__ = ("edges", "mate")

    def __init__(self, edges: Iterable[tuple[int, int]] = ()):
        norm = {norm_edge(u, v) for u, v in edges}
        mate: dict[int, int] = {}
        for u, v in norm:
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) in matching")
            if u in mate or v in mate:
                raise ValueError(f"edge ({u},{v}) shares a vertex with another matching edge")
            mate[u] = v
            mate[v] = u
        self.edges = frozenset(norm)
        self.mate = mate

    def size(self) -> int:
        return len(self.edges)

    def is_matched(self, v: int) -> bool:
        return v in self.mate

    def is_exposed(self, v: int) -> bool:
        return v not in self.mate

    def mate_of(self, v: int) -> Optional[int]:
        return self.mate.get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def validate_in(self, g: Graph) -> None:
        """Check every matching edge exists in the host graph."""
        for u, v in self.edges:
            if not (0 <= u < g.n and 0 <= v < g.n):
                raise ValueError(f"matching edge ({u},{v}) out of range")
            if not g.has_edge(u, v):
                raise ValueError(f"matching edge ({u},{v}) not in host graph")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Matching({sorted(self.edges)})"


class AltPath:
    """A simple path given by its vertex sequence (at least one vertex).

    A single vertex is a legal path of length 0.  Whether the path alternates
    is always judged against a reference matching, see `is_alternating`.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[int]):
        vs = tuple(vertices)
        if not vs:
            raise ValueError("a path needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise ValueError("path vertices must be distinct")
        self.vertices = vs

    @classmethod
    def in_graph(cls, g: Graph, vertices: Sequence[int]) -> "AltPath":
        """Validated constructor: consecutive vertices must be adjacent in g."""
        p = cls(vertices)
        for v in p.vertices:
            if not 0 <= v < g.n:
                raise ValueError(f"path vertex {v} out of range")
        for u, v in p.edge_pairs():
            if not g.has_edge(u, v):
                raise ValueError(f"({u},{v}) on the path is not an edge of the graph")
        return p

    def length(self) -> int:
        """Number of edges."""
        return len(self.vertices) - 1

    def edge_pairs(self) -> Iterator[tuple[int, int]]:
        vs = self.vertices
        for i in range(len(vs) - 1):
            yield vs[i], vs[i + 1]

    def edge_set(self) -> frozenset:
        return frozenset(norm_edge(u, v) for u, v in self.edge_pairs())

    def first(self) -> int:
        return self.vertices[0]

    def last(self) -> int:
        return self.vertices[-1]

    def reversed(self) -> "AltPath":
        return AltPath(tuple(reversed(self.vertices)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltPath):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"AltPath({'-'.join(map(str, self.vertices))})"


def is_alternating(m: Matching, p: AltPath) -> bool:
    """True iff consecutive edges of p strictly alternate red/blue under m.

    Paths with fewer than two edges alternate vacuously.
    """
    colors = [m.has_edge(u, v) for u, v in p.edge_pairs()]
    return all(colors[i] != colors[i + 1] for i in range(len(colors) - 1))


def boundary_edges(g: Graph, s: Iterable[int]) -> set[tuple[int, int]]:
    """Edges of g with exactly one endpoint in the vertex set s."""
    sset = set(s)
    for v in sset:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    return {(u, v) for u, v in g.edges if (u in sset) != (v in sset)}


def is_augmenting(g: Graph, m: Matching, p: AltPath) -> bool:
    """True iff p alternates w.r.t. m and both endpoints are m-exposed.

    Returns False (never raises) on malformed alternation or degenerate paths.
    """
    if p.length() < 1:
        return False
    if m.is_matched(p.first()) or m.is_matched(p.last()):
        return False
    return is_alternating(m, p)


def augment(m: Matching, p: AltPath) -> Matching:
    """Return the matching m symmetric-difference the edges of p.

    p must be an m-augmenting path; the result has size |m| + 1.
    """
    if p.length() < 1 or m.is_matched(p.first()) or m.is_matched(p.last()) \
            or not is_alternating(m, p):
        raise ValueError(f"{p!r} is not augmenting for the given matching")
    return Matching(m.edges ^ p.edge_set())


def _end_parity_agrees(m: Matching, p: AltPath, q: AltPath) -> bool:
    pv, qv = p.vertices, q.vertices
    first_ok = m.has_edge(pv[0], pv[1]) == m.has_edge(qv[0], qv[1])
    last_ok = m.has_edge(pv[-2], pv[-1]) == m.has_edge(qv[-2], qv[-1])
    return first_ok and last_ok


def validate_replacement(m: Matching, p: AltPath, q: AltPath) -> bool:
    """Check that q replaces p: vertices within p, same endpoints in order,
    and matching membership of the first and last edge agrees (parity).

    Both paths must alternate w.r.t. m; a single-vertex path is replaced only
    by itself.
    """
    if not is_alternating(m, p) or not is_alternating(m, q):
        return False
    if not set(q.vertices) <= set(p.vertices):
        return False
    if q.first() != p.first() or q.last() != p.last():
        return False
    if len(p) == 1 or len(q) == 1:
        return p.vertices == q.vertices
    return _end_parity_agrees(m, p, q)


def subpath(p: AltPath, i: int, j: int) -> AltPath:
    """Contiguous subsequence of p from vertex i to vertex j.

    Reversed when i occurs after j on p.  Both vertices must lie on p.
    """
    try:
        a = p.vertices.index(i)
        b = p.vertices.index(j)
    except ValueError as exc:
        raise ValueError(f"vertex not on path: {exc}") from None
    if a <= b:
        return AltPath(p.vertices[a:b + 1])
    return AltPath(tuple(reversed(p.vertices[b:a + 1])))


# ---------------------------------------------------------------------------
# File formats.
#
# Graph (text, one record per line):
#   p <n> <m>
#   e <u> <v>        (m lines, 0-based ids)
#   b <u...>         (optional: one side of a bipartition)
# Matching: lines `e <u> <v>`.  Path: one line of space-separated ids.
# Lines starting with 'c' are comments.
# ---------------------------------------------------------------------------

def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", lineno) from None


def read_graph(path) -> Graph:
    """Parse a graph file; raises GraphFormatError with a line number."""
    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    side: list[int] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            tag = parts[0]
            if tag == "p":
                if n is not None:
                    raise GraphFormatError("duplicate header", lineno)
                if len(parts) != 3:
                    raise GraphFormatError("header must be `p <n> <m>`", lineno)
                n = _parse_int(parts[1], lineno)
                m_declared = _parse_int(parts[2], lineno)
            elif tag == "e":
                if n is None:
                    raise GraphFormatError("edge before header", lineno)
                if len(parts) != 3:
                    raise GraphFormatError("edge line must be `e <u> <v>`", lineno)
                edges.append((_parse_int(parts[1], lineno), _parse_int(parts[2], lineno)))
            elif tag == "b":
                if n is None:
                    raise GraphFormatError("bipartition before header", lineno)
                side = [_parse_int(t, lineno) for t in parts[1:]]
            else:
                raise GraphFormatError(f"unknown record {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing header `p <n> <m>`")
    distinct = {norm_edge(u, v) for u, v in edges}
    if len(distinct) != m_declared:
        raise GraphFormatError(
            f"header declares {m_declared} edges but file defines {len(distinct)}")
    bipartition = None
    if side is not None:
        left = set(side)
        right = set(range(n)) - left
        bipartition = (left, right)
    try:
        return Graph(n, distinct, bipartition)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def write_graph(g: Graph, path) -> None:
    """Write g in canonical form (sorted edge order)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"p {g.n} {len(g.edges)}\n")
        if g.bipartition is not None:
            left = " ".join(map(str, sorted(g.bipartition[0])))
            fh.write(f"b {left}\n" if left else "b\n")
        for u, v in g.edges:
            fh.write(f"e {u} {v}\n")


def read_matching(path) -> Matching:
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] != "e" or len(parts) != 3:
                raise GraphFormatError("matching line must be `e <u> <v>`", lineno)
            edges.append((_parse_int(parts[1], lineno), _parse_int(parts[2], lineno)))
    try:
        return Matching(edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def write_matching(m: Matching, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in m.sorted_edges():
            fh.write(f"e {u} {v}\n")


def read_path(path) -> AltPath:
    with open(path, "r", encoding="utf-8") as fh:
        content = fh.read().split()
    if not content:
        raise GraphFormatError("path file is empty")
    try:
        return AltPath([int(t) for t in content])
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def write_path(p: AltPath, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(" ".join(map(str, p.vertices)) + "\n")
