"""Graph parameters: independence/vertex-cover numbers, neighborhood
diversity, modular decomposition (modular-width and -depth), graph-class
recognition, and vertex-deletion distances.

The modular decomposition uses a correctness-first polynomial algorithm
(connectivity splits plus smallest-module closures for prime nodes); every
produced tree can be re-checked against the graph with `validate_md_tree`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .graph import Graph


class ParamLimitError(ValueError):
    """Exact computation refused beyond the configured size."""


# ---------------------------------------------------------------------------
# Independence number / vertex cover number.
# ---------------------------------------------------------------------------

def _mis_mask(adj_mask: list[int], candidates: int, best_so_far: int) -> int:
    """Maximum independent set size within the candidate bitmask."""
    if candidates == 0:
        return 0
    count = bin(candidates).count("1")
    if count <= 1:
        return count
    # branch on a maximum-degree vertex within the candidate set
    best_v, best_deg = -1, -1
    mask = candidates
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        deg = bin(adj_mask[v] & candidates).count("1")
        if deg > best_deg:
            best_v, best_deg = v, deg
    if best_deg == 0:
        return count
    without = _mis_mask(adj_mask, candidates & ~(1 << best_v), 0)
    with_v = 1 + _mis_mask(adj_mask, candidates & ~(1 << best_v) & ~adj_mask[best_v], 0)
    return max(without, with_v)


def independence_number(g: Graph, limit_n: int = 30) -> int:
    """Exact alpha(G) by branch and bound; refuses n beyond the limit."""
    if g.n > limit_n:
        raise ParamLimitError(f"n={g.n} exceeds the exact limit {limit_n}")
    adj_mask = [0] * g.n
    for u, v in g.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    # independent components add up
    total = 0
    seen = 0
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = [s]
        while frontier:
            x = frontier.pop()
            nxt = adj_mask[x] & ~comp
            while nxt:
                y = (nxt & -nxt).bit_length() - 1
                nxt &= nxt - 1
                comp |= 1 << y
                frontier.append(y)
        seen |= comp
        total += _mis_mask(adj_mask, comp, 0)
    return total


def vertex_cover_number(g: Graph, limit_n: int = 30) -> int:
    """tau(G) = n - alpha(G), computed on the same run."""
    return g.n - independence_number(g, limit_n)


# ---------------------------------------------------------------------------
# Neighborhood diversity.
# ---------------------------------------------------------------------------

@dataclass
class TypePartition:
    """Equivalence classes of the same-type relation N(v)-{w} = N(w)-{v}."""

    classes: list[frozenset]

    def nd(self) -> int:
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        out = {}
        for i, cls in enumerate(self.classes):
            for v in cls:
                out[v] = i
        return out


def same_type(g: Graph, v: int, w: int) -> bool:
    return (g.neighbor_set(v) - {w}) == (g.neighbor_set(w) - {v})


def neighborhood_diversity(g: Graph) -> TypePartition:
    """The exact type partition.

    Two vertices share a class iff their open neighborhoods agree (false
    twins) or their closed neighborhoods agree (true twins); a vertex cannot
    have twins of both kinds, so merging the two groupings yields the
    equivalence classes.
    """
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        parent[find(a)] = find(b)

    open_groups: dict[frozenset, int] = {}
    closed_groups: dict[frozenset, int] = {}
    for v in range(g.n):
        nb = g.neighbor_set(v)
        key_open = nb
        key_closed = frozenset(nb | {v})
        if key_open in open_groups:
            union(v, open_groups[key_open])
        else:
            open_groups[key_open] = v
        if key_closed in closed_groups:
            union(v, closed_groups[key_closed])
        else:
            closed_groups[key_closed] = v
    buckets: dict[int, set] = {}
    for v in range(g.n):
        buckets.setdefault(find(v), set()).add(v)
    classes = sorted((frozenset(c) for c in buckets.values()), key=min)
    return TypePartition(classes=classes)


def validate_type_partition(g: Graph, types: TypePartition) -> None:
    """Every pair inside one class must satisfy the same-type relation."""
    covered: set[int] = set()
    for cls in types.classes:
        members = sorted(cls)
        for i, v in enumerate(members):
            for w in members[i + 1:]:
                if not same_type(g, v, w):
                    raise ValueError(
                        f"vertices {v} and {w} share a class but differ in type")
        covered |= cls
    if covered != set(range(g.n)):
        raise ValueError("type partition does not cover the vertex set")


# ---------------------------------------------------------------------------
# Modular decomposition.
# ---------------------------------------------------------------------------

@dataclass
class MDNode:
    vertices: frozenset
    kind: str                      # leaf | prime | series | parallel
    children: list["MDNode"] = field(default_factory=list)

    def depth(self) -> int:
        if self.kind == "leaf":
            return 0
        return 1 + max(child.depth() for child in self.children)

    def iter_nodes(self):
        yield self
        for child in self.children:
            yield from child.iter_nodes()


@dataclass
class MDTree:
    root: MDNode

    def mw(self) -> int:
        """Largest child count over prime nodes, but at least 2."""
        widths = [len(node.children) for node in self.root.iter_nodes()
                  if node.kind == "prime"]
        return max(widths, default=2) if widths else 2

    def md(self) -> int:
        """Tree depth with leaves at depth 0 (md of a single vertex is 0)."""
        return self.root.depth()


def _components(g: Graph, vertices: list[int]) -> list[list[int]]:
    vset = set(vertices)
    seen: set[int] = set()
    out = []
    for s in vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y in vset and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def _co_components(g: Graph, vertices: list[int]) -> list[list[int]]:
    """Connected components of the complement, restricted to `vertices`."""
    vset = set(vertices)
    seen: set[int] = set()
    out = []
    for s in vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            nbrs = g.neighbor_set(x)
            for y in vertices:
                if y not in seen and y != x and y not in nbrs:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def _smallest_module(g: Graph, vertices: list[int], a: int, b: int) -> set:
    """Closure of {a, b} under splitters, within the induced subgraph."""
    vset = set(vertices)
    module = {a, b}
    changed = True
    while changed:
        changed = False
        for z in vertices:
            if z in module:
                continue
            nbrs = g.neighbor_set(z)
            inside = [x for x in module]
            status = None
            split = False
            for x in inside:
                adj = x in nbrs
                if status is None:
                    status = adj
                elif adj != status:
                    split = True
                    break
            if split:
                module.add(z)
                changed = True
    return module


def _prime_partition(g: Graph, vertices: list[int]) -> list[list[int]]:
    """Maximal proper strong modules when the subgraph and its complement are
    both connected.

    In that case every proper module lies inside one partition class, so the
    class of v is the union of all proper smallest-modules through v
    (modules overlapping in v are closed under union); singleton when none
    stays proper.
    """
    vfull = set(vertices)
    assigned: dict[int, frozenset] = {}
    for v in vertices:
        if v in assigned:
            continue
        best: set = {v}
        for w in vertices:
            if w == v:
                continue
            mod = _smallest_module(g, vertices, v, w)
            if len(mod) < len(vfull):
                best |= mod
        cls = frozenset(best)
        for u in cls:
            prior = assigned.get(u)
            if prior is not None and prior != cls:
                raise ValueError("prime partition classes overlap; "
                                 "decomposition invariant violated")
            assigned[u] = cls
    ordered: list[frozenset] = []
    for v in vertices:
        cls = assigned[v]
        if cls not in ordered:
            ordered.append(cls)
    return [sorted(c) for c in ordered]


def modular_decomposition(g: Graph) -> MDTree:
    """Modular decomposition tree via recursive splitting.

    Disconnected -> parallel over components; co-disconnected -> series over
    co-components; otherwise prime over the maximal proper strong modules.
    """
    if g.n == 0:
        raise ValueError("empty graph has no decomposition")

    def decompose(vertices: list[int]) -> MDNode:
        if len(vertices) == 1:
            return MDNode(vertices=frozenset(vertices), kind="leaf")
        comps = _components(g, vertices)
        if len(comps) > 1:
            return MDNode(vertices=frozenset(vertices), kind="parallel",
                          children=[decompose(c) for c in comps])
        cocomps = _co_components(g, vertices)
        if len(cocomps) > 1:
            return MDNode(vertices=frozenset(vertices), kind="series",
                          children=[decompose(c) for c in cocomps])
        parts = _prime_partition(g, vertices)
        return MDNode(vertices=frozenset(vertices), kind="prime",
                      children=[decompose(c) for c in parts])

    tree = MDTree(root=decompose(list(range(g.n))))
    validate_md_tree(g, tree)
    return tree


def validate_md_tree(g: Graph, tree: MDTree) -> None:
    """Re-check a tree against its graph: every node is a module of G, the
    children partition their parent, and the quotient kinds are right."""
    if tree.root.vertices != frozenset(range(g.n)):
        raise ValueError("root does not cover the vertex set")
    for node in tree.root.iter_nodes():
        verts = node.vertices
        outside = [u for u in range(g.n) if u not in verts]
        witness = None
        for u in outside:
            nbrs = g.neighbor_set(u)
            count = sum(1 for x in verts if x in nbrs)
            if count not in (0, len(verts)):
                raise ValueError(f"node {sorted(verts)} is not a module: "
                                 f"{u} sees only part of it")
        if node.kind == "leaf":
            if len(verts) != 1:
                raise ValueError("leaf with more than one vertex")
            continue
        if len(node.children) < 2:
            raise ValueError("internal node with fewer than two children")
        union = set()
        for child in node.children:
            if union & child.vertices:
                raise ValueError("children overlap")
            union |= child.vertices
        if union != set(verts):
            raise ValueError("children do not partition the node")
        reps = [min(child.vertices) for child in node.children]
        adj_pairs = {(i, j): g.has_edge(reps[i], reps[j])
                     for i in range(len(reps)) for j in range(i + 1, len(reps))}
        if node.kind == "series" and not all(adj_pairs.values()):
            raise ValueError("series node with non-adjacent children")
        if node.kind == "parallel" and any(adj_pairs.values()):
            raise ValueError("parallel node with adjacent children")
        if node.kind == "prime":
            _check_prime_quotient(adj_pairs, len(reps))


def _check_prime_quotient(adj_pairs: dict, k: int) -> None:
    """The quotient on child representatives must have only trivial modules."""

    def adjacent(i: int, j: int) -> bool:
        return adj_pairs[(i, j) if i < j else (j, i)]

    for a in range(k):
        for b in range(a + 1, k):
            module = {a, b}
            changed = True
            while changed:
                changed = False
                for z in range(k):
                    if z in module:
                        continue
                    flags = {adjacent(z, x) for x in module}
                    if len(flags) > 1:
                        module.add(z)
                        changed = True
            if len(module) < k:
                raise ValueError("prime node has a non-trivial quotient module")


# ---------------------------------------------------------------------------
# Class membership.
# ---------------------------------------------------------------------------

@dataclass
class ClassFlags:
    is_cluster: bool
    is_star_forest: bool
    is_bipartite_chain: bool
    is_cograph: bool
    splex_union_s: int     # least s with every component an s-plex

    def is_splex_union(self, s: int) -> bool:
        return self.splex_union_s <= s


def _component_vertex_sets(g: Graph) -> list[list[int]]:
    return _components(g, list(range(g.n)))


def _is_cluster(g: Graph) -> bool:
    for comp in _component_vertex_sets(g):
        cset = set(comp)
        for v in comp:
            if len(g.neighbor_set(v) & cset) != len(comp) - 1:
                return False
    return True


def _is_star_forest(g: Graph) -> bool:
    for comp in _component_vertex_sets(g):
        big = [v for v in comp if g.degree(v) > 1]
        if len(big) > 1:
            return False
        # a star has exactly |comp|-1 edges
        edge_count = sum(g.degree(v) for v in comp) // 2
        if edge_count != len(comp) - 1:
            return False
    return True


def _splex_union_s(g: Graph) -> int:
    worst = 1
    for comp in _component_vertex_sets(g):
        cset = set(comp)
        for v in comp:
            inner_deg = len(g.neighbor_set(v) & cset)
            worst = max(worst, len(comp) - inner_deg)
    return worst


def _two_color(g: Graph, comp: list[int]) -> Optional[dict[int, int]]:
    color = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in color:
                color[y] = 1 - color[x]
                stack.append(y)
            elif color[y] == color[x]:
                return None
    return color


def _is_bipartite_chain(g: Graph) -> bool:
    """Bipartite with nested neighborhoods on each side.

    At most one component may carry edges (nonempty disjoint neighborhoods
    cannot nest); isolated vertices are always fine.
    """
    edged = [c for c in _component_vertex_sets(g) if len(c) > 1]
    if not edged:
        return True
    if len(edged) > 1:
        return False
    comp = edged[0]
    color = _two_color(g, comp)
    if color is None:
        return False
    side = sorted((v for v in comp if color[v] == 0),
                  key=lambda v: (g.degree(v), v))
    for a, b in zip(side, side[1:]):
        if not g.neighbor_set(a) <= g.neighbor_set(b):
            return False
    return True


def class_membership(g: Graph) -> ClassFlags:
    tree = modular_decomposition(g) if g.n else None
    is_cograph = g.n == 0 or all(node.kind != "prime"
                                 for node in tree.root.iter_nodes())
    return ClassFlags(
        is_cluster=_is_cluster(g),
        is_star_forest=_is_star_forest(g),
        is_bipartite_chain=_is_bipartite_chain(g),
        is_cograph=is_cograph,
        splex_union_s=_splex_union_s(g),
    )


_CLASS_PREDICATES: dict[str, Callable[[Graph], bool]] = {
    "cluster": _is_cluster,
    "star_forest": _is_star_forest,
    "bipartite_chain": _is_bipartite_chain,
    "cograph": lambda g: class_membership(g).is_cograph,
}


def class_predicate(class_flag: str) -> Callable[[Graph], bool]:
    """Membership predicate by name; `splex_union:<s>` is parameterized."""
    if class_flag.startswith("splex_union:"):
        s = int(class_flag.split(":", 1)[1])
        return lambda g: _splex_union_s(g) <= s
    try:
        return _CLASS_PREDICATES[class_flag]
    except KeyError:
        raise ValueError(f"unknown class flag {class_flag!r}") from None


# ---------------------------------------------------------------------------
# Vertex-deletion distance.
# ---------------------------------------------------------------------------

def _minimal_obstruction(g: Graph, alive: list[int],
                         pred: Callable[[Graph], bool]) -> list[int]:
    """A minimal vertex set whose induced subgraph is outside the class.

    Works for hereditary classes: greedy deletion keeps the subgraph outside
    the class until every vertex is necessary.
    """
    core = list(alive)
    changed = True
    while changed:
        changed = False
        for v in list(core):
            trial = [u for u in core if u != v]
            if trial and not pred(g.induced(trial)):
                core = trial
                changed = True
    return core


def _cluster_obstruction(g: Graph, alive: list[int]) -> Optional[list[int]]:
    """An induced P_3, the unique minimal non-cluster graph; None if cluster."""
    aset = set(alive)
    for v in alive:
        nbrs = [u for u in g.adj[v] if u in aset]
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if not g.has_edge(nbrs[i], nbrs[j]):
                    return [nbrs[i], v, nbrs[j]]
    return None


_COMPONENT_CLOSED = ("cluster", "star_forest", "cograph")


def _find_obstruction(g: Graph, alive: list[int], class_flag: str,
                      pred: Callable[[Graph], bool]) -> Optional[list[int]]:
    """A minimal obstruction inside `alive`, or None on membership."""
    if class_flag == "cluster":
        return _cluster_obstruction(g, alive)
    sub = g.induced(sorted(set(alive)))
    if pred(sub):
        return None
    scope = alive
    if class_flag in _COMPONENT_CLOSED or class_flag.startswith("splex_union:"):
        for comp in _components(g, sorted(alive)):
            if not pred(g.induced(comp)):
                scope = comp
                break
    return _minimal_obstruction(g, scope, pred)


def distance_to_class(g: Graph, class_flag: str, k_max: int = 10
                      ) -> Optional[tuple[int, tuple[int, ...]]]:
    """Least k <= k_max such that deleting some k vertices lands in the class,
    together with a witness set; None when k_max is exceeded.

    Branches on minimal obstructions, which is exact for hereditary classes
    (every one of the target classes here is hereditary: any deletion set must
    hit every obstruction).
    """
    pred = class_predicate(class_flag)

    def solve(alive: list[int], budget: int) -> Optional[tuple[int, ...]]:
        obstruction = _find_obstruction(g, alive, class_flag, pred)
        if obstruction is None:
            return ()
        if budget == 0:
            return None
        for v in obstruction:
            rest = [u for u in alive if u != v]
            out = solve(rest, budget - 1)
            if out is not None:
                return (v,) + out
        return None

    everything = list(range(g.n))
    for k in range(k_max + 1):
        witness = solve(everything, k)
        if witness is not None:
            return len(witness), tuple(sorted(witness))
    return None


# ---------------------------------------------------------------------------
# Theorem bounds.
# ---------------------------------------------------------------------------

@dataclass
class NamedBound:
    name: str
    value: int
    clamped: bool = False


def _ceil_sqrt(x: int) -> int:
    if x <= 0:
        return 0
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def replaceable_phase_bound(k: int, ell: int) -> tuple[int, bool]:
    """ceil(sqrt(k) * ell) + 2*ceil(sqrt(k)) phases for instances at deletion
    distance k from an ell-replaceable class.  The proof constant holds for
    k >= 16; smaller k are clamped up to 16 and flagged, never asserted
    silently."""
    clamped = k < 16
    kk = max(k, 16)
    value = math.ceil(math.sqrt(kk) * ell) + 2 * _ceil_sqrt(kk)
    return value, clamped


def theorem_bound(nu: Optional[int], n: int,
                  dist_entries: Iterable[tuple[str, int, int]] = ()
                  ) -> list[NamedBound]:
    """Applicable phase-count bounds.

    dist_entries are (label, k, ell) triples for classes with known
    replaceability ell and computed deletion distance k.
    """
    bounds = [NamedBound(name="vertex_count", value=2 * _ceil_sqrt(n))]
    if nu is not None:
        bounds.insert(0, NamedBound(name="matching_number",
                                    value=2 * _ceil_sqrt(nu) + 2))
    for label, k, ell in dist_entries:
        value, clamped = replaceable_phase_bound(k, ell)
        bounds.append(NamedBound(name=f"dist_{label}", value=value,
                                 clamped=clamped))
    return bounds
