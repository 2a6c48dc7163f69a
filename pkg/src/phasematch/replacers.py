"""Constructive path replacement: given a long alternating path, produce a
short replacement path (same endpoints, same end-edge parity, vertices within
the original) whose length is bounded by the instance's structural parameter.

Four procedures are provided, one per hypothesis:

  * replace_splex         : minimum degree >= n - k,      final length <= 2k + 4
  * replace_independence  : independence number <= k,     final <= 4(k+1)^2 + 3
  * replace_nd            : neighborhood diversity <= k,  final <= 6k + 4
  * replace_modular       : any graph with its MD tree,   final <= (21 mw)^md

Every individual splice strictly shortens the path it acts on, and every
result is checked by validate_replacement before being returned.  Hypothesis
violations raise HypothesisError with a witness instead of being silently
tolerated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import AltPath, Graph, Matching, is_alternating, validate_replacement
from .params import MDNode, MDTree, TypePartition, same_type, validate_md_tree


class ReplacerError(ValueError):
    pass


class HypothesisError(ReplacerError):
    """The structural hypothesis failed on this instance (with evidence)."""


@dataclass
class ReplaceResult:
    path: AltPath
    steps: int
    bound: int
    history: tuple[int, ...]   # overall path length after each splice


def _require_alternating(m: Matching, p: AltPath) -> None:
    if not is_alternating(m, p):
        raise ValueError("input path does not alternate under the matching")


def _finish(g: Graph, m: Matching, original: AltPath, verts: list[int],
            steps: int, bound: int, history: list[int]) -> ReplaceResult:
    result = AltPath.in_graph(g, verts)
    if not validate_replacement(m, original, result):
        raise ReplacerError("internal: produced path is not a valid replacement")
    if result.length() > bound:
        raise ReplacerError(
            f"internal: produced length {result.length()} exceeds bound {bound}")
    return ReplaceResult(path=result, steps=steps, bound=bound,
                         history=tuple(history))


# ---------------------------------------------------------------------------
# Parity handling.
# ---------------------------------------------------------------------------

def normalize_parity(m: Matching, p: AltPath) -> tuple[AltPath, int | None, int | None]:
    """Strip a leading/trailing blue edge whose endpoint is matched.

    The remaining core starts and ends with a red edge or at an exposed
    endpoint, so every core vertex is exposed or carries its mate on the core;
    shortcut edges touching it then have certain colors.  Returns the stripped
    end vertices for reattachment (None where nothing was stripped).
    """
    _require_alternating(m, p)
    verts = list(p.vertices)
    prefix = suffix = None
    if len(verts) >= 2 and not m.has_edge(verts[0], verts[1]) \
            and m.is_matched(verts[0]):
        prefix = verts[0]
        verts = verts[1:]
    if len(verts) >= 2 and not m.has_edge(verts[-2], verts[-1]) \
            and m.is_matched(verts[-1]):
        suffix = verts[-1]
        verts = verts[:-1]
    return AltPath(verts), prefix, suffix


def reattach(core: AltPath, prefix: int | None, suffix: int | None) -> AltPath:
    verts = list(core.vertices)
    if prefix is not None:
        verts = [prefix] + verts
    if suffix is not None:
        verts = verts + [suffix]
    return AltPath(verts)


def _strip_red_ends(m: Matching, verts: list[int]) -> tuple[list[int], int | None, int | None]:
    """Detach a leading/trailing red edge, leaving a blue-bounded core."""
    prefix = suffix = None
    if len(verts) >= 2 and m.has_edge(verts[0], verts[1]):
        prefix = verts[0]
        verts = verts[1:]
    if len(verts) >= 2 and m.has_edge(verts[-2], verts[-1]):
        suffix = verts[-1]
        verts = verts[:-1]
    return verts, prefix, suffix


def _reglue(verts: list[int], prefix: int | None, suffix: int | None) -> list[int]:
    if prefix is not None:
        verts = [prefix] + verts
    if suffix is not None:
        verts = verts + [suffix]
    return verts


# ---------------------------------------------------------------------------
# Dense neighborhoods: k-plexes.
# ---------------------------------------------------------------------------

def _splex_step(g: Graph, m: Matching, verts: list[int], k: int) -> list[int]:
    ell = len(verts)
    i = None
    for idx in range(1, ell + 1):
        v = verts[idx - 1]
        if m.is_exposed(v) or (idx >= 2 and m.has_edge(verts[idx - 2], v)):
            i = idx
            break
    j = None
    for idx in range(ell, 0, -1):
        v = verts[idx - 1]
        if m.is_exposed(v) or (idx <= ell - 1 and m.has_edge(v, verts[idx])):
            j = idx
            break
    if i is None or j is None or i > 3 or j < ell - 2:
        raise ReplacerError("internal: endpoint anchors out of position")
    window = [j - 2 * t for t in range(k)]
    vi = verts[i - 1]
    s = None
    for idx in window:   # largest candidate first gives the shortest splice
        if g.has_edge(vi, verts[idx - 1]):
            s = idx
            break
    if s is None:
        witness = sorted([vi] + [verts[idx - 1] for idx in window])
        raise HypothesisError(
            f"no edge from anchor into the window; vertices {witness} refute "
            f"minimum degree >= n - {k}")
    splice = (vi, verts[s - 1])
    if m.has_edge(*splice):
        raise ReplacerError("internal: splice edge is red")
    new = verts[:i] + verts[s - 1:]
    if len(new) >= len(verts):
        raise ReplacerError("internal: splice failed to shorten")
    return new


def replace_splex(g: Graph, m: Matching, p: AltPath, k: int) -> ReplaceResult:
    """Shorten alternating paths in a k-plex to length at most 2k + 4.

    Applies while the path has at least 2k + 5 edges: anchor indices i (first
    exposed or red-entry vertex) and j (last such), a window of every other
    vertex below j, and a guaranteed blue edge from the anchor into it.
    """
    if g.min_degree() < g.n - k:
        raise HypothesisError(
            f"minimum degree {g.min_degree()} < n - k = {g.n - k}")
    _require_alternating(m, p)
    bound = 2 * k + 4
    verts = list(p.vertices)
    history = [len(verts) - 1]
    steps = 0
    while len(verts) - 1 >= 2 * k + 5:
        verts = _splex_step(g, m, verts, k)
        steps += 1
        history.append(len(verts) - 1)
    return _finish(g, m, p, verts, steps, bound, history)


# ---------------------------------------------------------------------------
# Bounded independence number.
# ---------------------------------------------------------------------------

def _independence_step(g: Graph, m: Matching, verts: list[int], k: int) -> list[int]:
    # blue-bounded core: a_t at position 2(t-1), b_t at position 2t-1 (1-based t)
    if len(verts) % 2 != 0:
        raise ReplacerError("internal: blue-bounded core must have even order")
    half = len(verts) // 2

    def vertex_a(t: int) -> int:
        return verts[2 * (t - 1)]

    def vertex_b(t: int) -> int:
        return verts[2 * t - 1]

    pairs = []
    chosen_b: list[int] = []
    for block in range(1, k + 2):
        base = (block - 1) * (2 * k + 2)
        odd_indices = [base + off for off in range(1, 2 * k + 2, 2)]
        if odd_indices[-1] > half:
            raise ReplacerError("internal: block exceeds the path")
        edge = None
        for x in range(len(odd_indices)):
            for y in range(x + 1, len(odd_indices)):
                if g.has_edge(vertex_a(odd_indices[x]), vertex_a(odd_indices[y])):
                    edge = (odd_indices[x], odd_indices[y])
                    break
            if edge:
                break
        if edge is None:
            witness = sorted(vertex_a(t) for t in odd_indices)
            raise HypothesisError(
                f"independent set of size {k + 1} found: {witness}")
        pairs.append(edge)
        chosen_b.append(edge[0] + 1)   # smallest index of the blocked b-range
    tie = None
    for x in range(len(chosen_b)):
        for y in range(x + 1, len(chosen_b)):
            if g.has_edge(vertex_b(chosen_b[x]), vertex_b(chosen_b[y])):
                tie = (x, y)
                break
        if tie:
            break
    if tie is None:
        witness = sorted(vertex_b(t) for t in chosen_b)
        raise HypothesisError(
            f"independent set of size {k + 1} found: {witness}")
    bi, bj = tie
    p_i, q_i = pairs[bi]
    s = chosen_b[bi]
    t = chosen_b[bj]
    seg1 = verts[: 2 * (p_i - 1) + 1]
    seg2 = verts[2 * s - 1: 2 * (q_i - 1) + 1][::-1]
    seg3 = verts[2 * t - 1:]
    new = seg1 + seg2 + seg3
    for u, v in ((seg1[-1], seg2[0]), (seg2[-1], seg3[0])):
        if not g.has_edge(u, v) or m.has_edge(u, v):
            raise ReplacerError("internal: splice edge missing or red")
    if len(new) >= len(verts):
        raise ReplacerError("internal: splice failed to shorten")
    return new


def replace_independence(g: Graph, m: Matching, p: AltPath, k: int) -> ReplaceResult:
    """Shorten alternating paths when alpha(g) <= k; final length is at most
    4(k+1)^2 + 3 (threshold 4(k+1)^2 + 1 on the blue-bounded core plus the
    two reattached red end edges).

    The hypothesis is not pre-checked: the construction either succeeds or
    surfaces an independent set of size k+1 as a counterexample witness.
    """
    _require_alternating(m, p)
    threshold = 4 * (k + 1) ** 2 + 1
    bound = threshold + 2
    full = list(p.vertices)
    history = [len(full) - 1]
    core, pre, suf = _strip_red_ends(m, full)
    extra = (pre is not None) + (suf is not None)
    steps = 0
    while len(core) - 1 > threshold:
        core = _independence_step(g, m, core, k)
        steps += 1
        history.append(len(core) - 1 + extra)
    return _finish(g, m, p, _reglue(core, pre, suf), steps, bound, history)


# ---------------------------------------------------------------------------
# Bounded neighborhood diversity.
# ---------------------------------------------------------------------------

def _nd_step(g: Graph, m: Matching, verts: list[int],
             class_of: dict[int, int], k: int) -> list[int]:
    positions = list(range(2, 6 * k + 3, 3))     # v_2, v_5, ..., v_{6k+2}
    if positions[-1] > len(verts):
        raise ReplacerError("internal: sample positions exceed the path")
    by_class: dict[int, list[int]] = {}
    triple = None
    for pos in positions:
        cls = class_of[verts[pos - 1]]
        bucket = by_class.setdefault(cls, [])
        bucket.append(pos)
        if len(bucket) == 3:
            triple = tuple(bucket)
            break
    if triple is None:
        raise HypothesisError(
            f"no three same-type sample vertices among {len(positions)}; the "
            f"type partition has more than {k} classes on this path")
    r, s, t = triple

    def entry_red(pos: int) -> bool:
        return m.has_edge(verts[pos - 2], verts[pos - 1])

    reds = [x for x in (r, s, t) if entry_red(x)]
    blues = [x for x in (r, s, t) if not entry_red(x)]
    if len(reds) >= 2:
        a, b = reds[0], reds[1]
        splice = (verts[a - 1], verts[b])          # v_a to w_b
        new = verts[:a] + verts[b:]
    else:
        a, b = blues[0], blues[1]
        splice = (verts[a - 2], verts[b - 1])      # u_a to v_b
        new = verts[:a - 1] + verts[b - 1:]
    if not g.has_edge(*splice):
        if not same_type(g, verts[a - 1], verts[b - 1]):
            raise HypothesisError(
                f"vertices {verts[a - 1]} and {verts[b - 1]} share a class "
                "but are not of the same type; partition inconsistent with g")
        raise ReplacerError("internal: guaranteed splice edge missing")
    if m.has_edge(*splice):
        raise ReplacerError("internal: splice edge is red")
    if len(new) >= len(verts):
        raise ReplacerError("internal: splice failed to shorten")
    return new


def replace_nd(g: Graph, m: Matching, p: AltPath,
               types: TypePartition) -> ReplaceResult:
    """Shorten alternating paths using a type partition with k classes; final
    length at most 6k + 4 (core threshold 6k + 3, plus reattached red ends).

    The partition's classes must respect the same-type relation; the pair
    actually used for each shortcut is re-verified and an inconsistent
    partition is reported with the offending pair.
    """
    _require_alternating(m, p)
    covered: set[int] = set()
    for cls in types.classes:
        covered |= cls
    if covered != set(range(g.n)):
        raise ValueError("type partition does not cover the vertex set")
    k = types.nd()
    class_of = types.class_of()
    bound = 6 * k + 4
    full = list(p.vertices)
    history = [len(full) - 1]
    core, pre, suf = _strip_red_ends(m, full)
    extra = (pre is not None) + (suf is not None)
    steps = 0
    while len(core) - 1 >= 6 * k + 3:
        core = _nd_step(g, m, core, class_of, k)
        steps += 1
        history.append(len(core) - 1 + extra)
    return _finish(g, m, p, _reglue(core, pre, suf), steps, bound, history)


# ---------------------------------------------------------------------------
# Modular decomposition.
# ---------------------------------------------------------------------------

def _reduce_entering(g: Graph, m: Matching, verts: list[int],
                     module: frozenset, want_red: bool) -> list[int] | None:
    """One entering-edge reduction for a module, or None when <= 2 remain."""
    entering = [pos for pos in range(1, len(verts))
                if verts[pos] in module and verts[pos - 1] not in module
                and m.has_edge(verts[pos - 1], verts[pos]) == want_red]
    if len(entering) < 3:
        return None
    i1, ik = entering[0], entering[-1]
    if want_red:
        u, w = verts[i1], verts[ik - 1]
        if not g.has_edge(u, w):
            raise ReplacerError(
                f"expected edge ({u},{w}) missing; tree does not match the graph")
        if m.has_edge(u, w):
            raise ReplacerError("internal: red-entry splice is red")
        new = verts[:i1 + 1] + verts[ik - 1:]
    else:
        x = verts[i1 - 1]
        candidates = (
            (verts[ik], verts[:i1] + verts[ik:]),
            (verts[entering[-2]], verts[:i1] + verts[entering[-2]:]),
        )
        new = None
        for target, spliced in candidates:
            if not g.has_edge(x, target):
                raise ReplacerError(
                    f"expected edge ({x},{target}) missing; tree does not "
                    "match the graph")
            if not m.has_edge(x, target):
                new = spliced
                break
        if new is None:
            raise ReplacerError("internal: both blue-entry candidates are red")
    if len(new) >= len(verts):
        raise ReplacerError("internal: border splice failed to shorten")
    return new


def _one_border_step(g: Graph, m: Matching, verts: list[int],
                     module: frozenset) -> list[int] | None:
    for reverse in (False, True):
        work = verts[::-1] if reverse else verts
        for want_red in (True, False):
            new = _reduce_entering(g, m, work, module, want_red)
            if new is not None:
                return new[::-1] if reverse else new
    return None


def _reduce_module_border_verts(g: Graph, m: Matching, verts: list[int],
                                modules: list[frozenset],
                                steps: list[int]) -> list[int]:
    changed = True
    while changed:
        changed = False
        for module in modules:
            while True:
                new = _one_border_step(g, m, verts, module)
                if new is None:
                    break
                verts = new
                steps[0] += 1
                changed = True
    return verts


def reduce_module_border(g: Graph, m: Matching, p: AltPath,
                         modules: list[frozenset]) -> AltPath:
    """Replace p so it uses at most 8 boundary edges of every given module
    (at most 2 entering and 2 leaving of each color).  Needs no parity
    preparation: every splice's color is certified by an on-path mate or by
    the two-candidate rule."""
    _require_alternating(m, p)
    steps = [0]
    out = _reduce_module_border_verts(g, m, list(p.vertices), modules, steps)
    result = AltPath.in_graph(g, out)
    if not validate_replacement(m, p, result):
        raise ReplacerError("internal: border reduction produced an invalid replacement")
    return result


def _external_positions(m: Matching, verts: list[int],
                        class_of: dict[int, int], want_red: bool) -> list[tuple[int, int, int]]:
    out = []
    for pos in range(len(verts) - 1):
        a, b = verts[pos], verts[pos + 1]
        if class_of[a] == class_of[b]:
            continue
        if m.has_edge(a, b) == want_red:
            out.append((pos, class_of[a], class_of[b]))
    return out


def _reduce_series_verts(g: Graph, m: Matching, verts: list[int],
                         modules: list[frozenset], steps: list[int]) -> list[int]:
    """Reduce external edges within a series node on a parity-safe core:
    red external edges to at most 4, then blue external edges to at most 2.
    Red reductions run first since they introduce new blue external edges."""
    class_of = {v: i for i, mod in enumerate(modules) for v in mod}

    while True:
        reds = _external_positions(m, verts, class_of, want_red=True)
        if len(reds) < 5:
            break
        applied = False
        for x in range(len(reds)):
            for y in range(x + 2, len(reds)):
                pos_i, _, t_i = reds[x]
                pos_j, s_j, _ = reds[y]
                if t_i == s_j:
                    continue
                u, w = verts[pos_i + 1], verts[pos_j]
                if not g.has_edge(u, w):
                    raise ReplacerError(
                        f"expected series edge ({u},{w}) missing; tree does "
                        "not match the graph")
                if m.has_edge(u, w):
                    raise ReplacerError("internal: red-external splice is red")
                verts = verts[:pos_i + 2] + verts[pos_j:]
                steps[0] += 1
                applied = True
                break
            if applied:
                break
        if not applied:
            raise ReplacerError("internal: no reducible red pair despite 5+ externals")

    while True:
        blues = _external_positions(m, verts, class_of, want_red=False)
        if len(blues) < 3:
            break
        applied = False
        for x in range(len(blues)):
            for y in range(x + 1, len(blues)):
                pos_i, s_i, _ = blues[x]
                pos_j, _, t_j = blues[y]
                if s_i == t_j:
                    continue
                u, w = verts[pos_i], verts[pos_j + 1]
                if not g.has_edge(u, w):
                    raise ReplacerError(
                        f"expected series edge ({u},{w}) missing; tree does "
                        "not match the graph")
                if m.has_edge(u, w):
                    raise ReplacerError("internal: blue-external splice is red")
                verts = verts[:pos_i + 1] + verts[pos_j + 1:]
                steps[0] += 1
                applied = True
                break
            if applied:
                break
        if not applied:
            raise ReplacerError("internal: no reducible blue pair despite 3+ externals")
    return verts


def reduce_series_external(g: Graph, m: Matching, p: AltPath,
                           modules: list[frozenset]) -> AltPath:
    """Replace p within a series node so the result carries at most 4 blue
    and at most 6 red external edges (2 blue + 4 red on the parity-safe core,
    plus at most one stripped blue edge per end)."""
    _require_alternating(m, p)
    core, pre, suf = normalize_parity(m, p)
    steps = [0]
    out = _reduce_series_verts(g, m, list(core.vertices), modules, steps)
    result = reattach(AltPath(out), pre, suf)
    result = AltPath.in_graph(g, result.vertices)
    if not validate_replacement(m, p, result):
        raise ReplacerError("internal: series reduction produced an invalid replacement")
    return result


def _replace_at_node(g: Graph, m: Matching, verts: list[int], node: MDNode,
                     steps: list[int]) -> list[int]:
    if len(verts) <= 2 or node.kind == "leaf":
        return verts
    if node.kind == "parallel":
        for child in node.children:
            if verts[0] in child.vertices:
                if not set(verts) <= child.vertices:
                    raise ReplacerError(
                        "path crosses a parallel split; tree does not match the graph")
                return _replace_at_node(g, m, verts, child, steps)
        raise ReplacerError("path vertex missing from every child")
    modules = [child.vertices for child in node.children]
    if node.kind == "prime":
        verts = _reduce_module_border_verts(g, m, verts, modules, steps)
        return _recurse_children(g, m, verts, node, steps)
    # series node
    core, pre, suf = _series_safe_core(m, verts)
    core = _reduce_series_verts(g, m, core, modules, steps)
    core = _recurse_children(g, m, core, node, steps)
    return _reglue(core, pre, suf)


def _series_safe_core(m: Matching, verts: list[int]) -> tuple[list[int], int | None, int | None]:
    prefix = suffix = None
    if len(verts) >= 2 and not m.has_edge(verts[0], verts[1]) \
            and m.is_matched(verts[0]):
        prefix = verts[0]
        verts = verts[1:]
    if len(verts) >= 2 and not m.has_edge(verts[-2], verts[-1]) \
            and m.is_matched(verts[-1]):
        suffix = verts[-1]
        verts = verts[:-1]
    return verts, prefix, suffix


def _recurse_children(g: Graph, m: Matching, verts: list[int], node: MDNode,
                      steps: list[int]) -> list[int]:
    child_of: dict[int, MDNode] = {}
    for child in node.children:
        for v in child.vertices:
            child_of[v] = child
    out: list[int] = []
    i = 0
    while i < len(verts):
        child = child_of[verts[i]]
        j = i
        while j + 1 < len(verts) and verts[j + 1] in child.vertices:
            j += 1
        run = verts[i:j + 1]
        if len(run) >= 3:
            run = _replace_at_node(g, m, run, child, steps)
        out.extend(run)
        i = j + 1
    return out


def replace_modular(g: Graph, m: Matching, p: AltPath,
                    md_tree: MDTree) -> ReplaceResult:
    """Recursive replacement along the modular decomposition: border
    reductions at prime nodes, external-edge reductions at series nodes,
    descent into the unique child at parallel nodes, and recursion into the
    module-internal subpaths.  Final length at most (21 mw)^md."""
    _require_alternating(m, p)
    try:
        validate_md_tree(g, md_tree)
    except ValueError as exc:
        raise ReplacerError(f"decomposition tree does not match the graph: {exc}") from None
    bound = (21 * md_tree.mw()) ** md_tree.md()
    steps = [0]
    out = _replace_at_node(g, m, list(p.vertices), md_tree.root, steps)
    return _finish(g, m, p, out, steps[0], bound,
                   [p.length(), len(out) - 1])


# ---------------------------------------------------------------------------
# Edge tallies used by the per-lemma checks.
# ---------------------------------------------------------------------------

def boundary_edge_count(p: AltPath, module: frozenset) -> int:
    return sum(1 for u, v in p.edge_pairs() if (u in module) != (v in module))


def external_color_counts(m: Matching, p: AltPath,
                          modules: list[frozenset]) -> tuple[int, int]:
    """(blue, red) counts of path edges crossing between different modules."""
    class_of = {v: i for i, mod in enumerate(modules) for v in mod}
    blue = red = 0
    for u, v in p.edge_pairs():
        if class_of[u] == class_of[v]:
            continue
        if m.has_edge(u, v):
            red += 1
        else:
            blue += 1
    return blue, red
