"""Body graphs, their per-measure arc weights, and the graph algorithms the
minimizers are built on: lexicographically tie-broken shortest paths,
minimum-weight spanning in-arborescences, and a 2-approximation for the
minimum-weight strongly connected spanning subgraph.

All weights are exact integers; no floating point enters this module.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .core import ClauseGroup, HornCNF, KeyHornInstance, VarSet


class NoBodyInSourceError(ValueError):
    """The source set contains no family body, so nothing can ever fire."""


@dataclass(frozen=True)
class BodyGraph:
    """Complete weighted digraph on a body family.

    ``weight[i][j]`` is the cost of the arc ``nodes[i] -> nodes[j]``, read
    as: the cost of extending forward chaining from node i to cover node j.
    Diagonal entries are 0 and never used.
    """

    nodes: tuple[VarSet, ...]
    weight: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.nodes)
        if len(self.weight) != m or any(len(row) != m for row in self.weight):
            raise ValueError("weight matrix shape does not match node count")
        if any(w < 0 for row in self.weight for w in row):
            raise ValueError("arc weights must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.nodes)

    def w(self, i: int, j: int) -> int:
        return self.weight[i][j]


@dataclass(frozen=True, eq=True)
class InArborescence:
    """Spanning in-arborescence: every non-root node has one outgoing arc and
    following ``succ`` from anywhere reaches ``root``."""

    root: int
    succ: dict[int, int]

    def validate(self, m: int) -> None:
        if not 0 <= self.root < m:
            raise ValueError(f"root {self.root} out of range")
        if sorted(self.succ) != [x for x in range(m) if x != self.root]:
            raise ValueError("succ must map exactly the non-root nodes")
        for x in self.succ:
            seen = {x}
            while x != self.root:
                x = self.succ[x]
                if x in seen:
                    raise ValueError("succ contains a cycle")
                seen.add(x)

    def weight_in(self, g: BodyGraph) -> int:
        return sum(g.weight[x][s] for x, s in self.succ.items())


@dataclass(frozen=True)
class LambdaFormula:
    """A shortest-path-derived formula that chains from a source set to a
    target set, together with its path and literal count."""

    path: tuple[int, ...]
    formula: HornCNF
    weight: int


def price_c(b: VarSet, b2: VarSet) -> int:
    """Exact clause cost of reaching ``b2`` from ``b``: each missing variable
    needs one clause and one clause each suffices."""
    return len(b2 - b)


def body_graph_c(inst: KeyHornInstance) -> BodyGraph:
    """Complete body graph under the clause-count arc costs."""
    bodies = inst.bodies
    masks = [b.mask for b in bodies]
    weight = tuple(
        tuple(
            (masks[j] & ~masks[i]).bit_count() if i != j else 0
            for j in range(inst.m)
        )
        for i in range(inst.m)
    )
    return BodyGraph(bodies, weight)


def _lex_dijkstra(num_nodes: int, arc_weight, src: int, dst: int) -> tuple[list[int], int]:
    """Shortest path with deterministic ties: among minimum-weight simple
    paths, the lexicographically smallest node-index sequence wins.

    ``arc_weight(u, v)`` returns the weight of arc u->v or None if absent.
    Labels are (distance, path); heap order on these pairs is exactly the
    required tie-break because simple paths to one node can never be
    prefixes of each other.
    """
    heap = [(0, (src,))]
    done = set()
    while heap:
        dist, path = heapq.heappop(heap)
        u = path[-1]
        if u == dst:
            return list(path), dist
        if u in done:
            continue
        done.add(u)
        for v in range(num_nodes):
            if v in done or v == u:
                continue
            w = arc_weight(u, v)
            if w is None:
                continue
            heapq.heappush(heap, (dist + w, path + (v,)))
    raise ValueError(f"no path from {src} to {dst}")


def shortest_path(g: BodyGraph, src: int, dst: int) -> tuple[list[int], int]:
    """Minimum-weight directed path in a body graph; see ``_lex_dijkstra``
    for the tie-break.  Complete graphs make every target reachable."""
    if src == dst:
        return [src], 0
    return _lex_dijkstra(g.m, lambda u, v: g.weight[u][v], src, dst)


def lambda_formula(inst: KeyHornInstance, s: VarSet, s2: VarSet) -> LambdaFormula:
    """Constant-factor approximation of the cheapest literal cost of chaining
    from ``s`` to cover ``s2``.

    Extends the body graph with ``s2`` as an extra target node, weights arc
    (B, B') as |B' minus (s union B)| * (|B| + 1), and takes the shortest
    path from the smallest body inside ``s``.  The emitted formula chains
    from ``s`` to ``s2`` and its literal count equals the path weight.
    """
    if s.n != inst.n or s2.n != inst.n:
        raise ValueError("source/target universe does not match the instance")
    if s2.issubset(s):
        return LambdaFormula((), HornCNF(inst.n), 0)
    bodies = inst.bodies
    m = inst.m
    sources = [i for i, b in enumerate(bodies) if b.issubset(s)]
    if not sources:
        raise NoBodyInSourceError("no family body is contained in the source set")
    b0 = sources[0]  # canonical order makes this the smallest such body

    smask = s.mask
    masks = [b.mask for b in bodies]
    sizes = [len(b) for b in bodies]
    target_mask = s2.mask

    def arc_weight(u: int, v: int):
        if u == m:
            return None  # the target has no outgoing arcs
        head = (target_mask if v == m else masks[v]) & ~(smask | masks[u])
        return head.bit_count() * (sizes[u] + 1)

    path, dist = _lex_dijkstra(m + 1, arc_weight, b0, m)
    groups = []
    for u, v in zip(path, path[1:]):
        head_mask = (target_mask if v == m else masks[v]) & ~(smask | masks[u])
        groups.append(ClauseGroup(bodies[u], VarSet._raw(inst.n, head_mask)))
    return LambdaFormula(tuple(path), HornCNF(inst.n, groups), dist)


def body_graph_l(inst: KeyHornInstance) -> BodyGraph:
    """Complete body graph under the literal arc costs.

    ``weight[i][j]`` equals ``lambda_formula(inst, bodies[i], bodies[j]).weight``;
    computed with one dense single-source run per node since the arc costs
    depend on the source body.
    """
    bodies = inst.bodies
    m = inst.m
    masks = [b.mask for b in bodies]
    szp = [len(b) + 1 for b in bodies]
    unreached = (inst.n + 2) * (inst.k + 2) * (m + 2)  # above any path weight
    weight_rows = []
    for i in range(m):
        notc = [~(masks[i] | masks[u]) for u in range(m)]
        dist = [unreached] * m
        dist[i] = 0
        done = [False] * m
        for _ in range(m):
            u = -1
            best = unreached
            for x in range(m):
                if not done[x] and dist[x] < best:
                    best = dist[x]
                    u = x
            if u < 0:
                break
            done[u] = True
            du, nc, sp = dist[u], notc[u], szp[u]
            for v in range(m):
                if not done[v]:
                    nd = du + (masks[v] & nc).bit_count() * sp
                    if nd < dist[v]:
                        dist[v] = nd
        weight_rows.append(tuple(dist))
    return BodyGraph(bodies, tuple(weight_rows))


# ---------------------------------------------------------------------------
# Minimum spanning in-arborescence (Edmonds/Chu-Liu via cycle contraction)
# ---------------------------------------------------------------------------

# Arcs are tuples (u, v, w, base) where base is the pre-contraction arc the
# tuple stands for, or None at the outermost level.


def _all_cycles(pred: dict[int, int], root: int) -> list[list[int]]:
    """Every cycle of the chosen-arc functional graph (they are disjoint)."""
    color: dict[int, int] = {}
    cycles = []
    for start in pred:
        if start in color:
            continue
        path = []
        x = start
        while x != root and x not in color:
            color[x] = 1  # open
            path.append(x)
            x = pred[x]
        if color.get(x) == 1:
            cycles.append(path[path.index(x):])
        for y in path:
            color[y] = 2  # done
    return cycles


def _edmonds(nodes: list[int], arcs: list[tuple], root: int, next_id: int) -> dict[int, tuple]:
    """Minimum spanning out-arborescence rooted at ``root``; returns the
    chosen in-arc per non-root node.

    Cycle contraction with all disjoint cycles collapsed per round, so the
    recursion depth stays small even on tie-heavy uniform graphs.  Ties go
    to the smaller tail, then head, so the result is deterministic.
    """
    best: dict[int, tuple] = {}
    for a in arcs:
        v = a[1]
        if v == root:
            continue
        b = best.get(v)
        if b is None:
            best[v] = a
        else:
            w, bw = a[2], b[2]
            if w < bw or (w == bw and a[0] < b[0]):
                best[v] = a
    for v in nodes:
        if v != root and v not in best:
            raise ValueError(f"node {v} has no incoming arc")
    cycles = _all_cycles({v: a[0] for v, a in best.items()}, root)
    if not cycles:
        return dict(best)

    rep = {}
    for cyc in cycles:
        for x in cyc:
            rep[x] = next_id
        next_id += 1
    contracted = set(rep)
    sub: dict[tuple[int, int], tuple] = {}
    for a in arcs:
        u, v = a[0], a[1]
        u2 = rep.get(u, u)
        v2 = rep.get(v, v)
        if u2 == v2:
            continue
        w2 = a[2] - best[v][2] if v in contracted else a[2]
        key = (u2, v2)
        old = sub.get(key)
        if old is None:
            sub[key] = (u2, v2, w2, a)
        else:
            ow = old[2]
            if w2 < ow or (
                w2 == ow and (u, v) < (old[3][0], old[3][1])
            ):
                sub[key] = (u2, v2, w2, a)
    new_nodes = [x for x in nodes if x not in contracted]
    new_nodes.extend(range(next_id - len(cycles), next_id))
    solved = _edmonds(new_nodes, list(sub.values()), root, next_id)

    parents: dict[int, tuple] = {}
    entries: dict[int, tuple] = {}  # contracted id -> arc entering its cycle
    for a2 in solved.values():
        a = a2[3]
        if a[1] in contracted:
            entries[rep[a[1]]] = a
        else:
            parents[a[1]] = a
    for cyc in cycles:
        entry = entries[rep[cyc[0]]]
        for x in cyc:
            if x != entry[1]:
                parents[x] = best[x]
        parents[entry[1]] = entry
    return parents


def _rooted_in_arborescence(g: BodyGraph, root: int) -> InArborescence:
    # an in-arborescence toward root is an out-arborescence from root in the
    # reversed graph; the reversed parent of x is exactly succ(x)
    m = g.m
    arcs = [
        (u, v, g.weight[v][u], None)
        for u in range(m)
        for v in range(m)
        if u != v
    ]
    parents = _edmonds(list(range(m)), arcs, root, m)
    succ = {v: a[0] for v, a in sorted(parents.items())}
    return InArborescence(root, succ)


def _min_out_parents(g: BodyGraph, root: int) -> dict[int, int]:
    m = g.m
    arcs = [(u, v, g.weight[u][v], None) for u in range(m) for v in range(m) if u != v]
    parents = _edmonds(list(range(m)), arcs, root, m)
    return {v: a[0] for v, a in parents.items()}


def _best_unrooted_root(g: BodyGraph) -> int:
    """Root minimizing the rooted in-arborescence weight, smallest index on
    ties.  One augmented run: real weights are scaled so a virtual-root arc's
    index term acts as the tie-break."""
    m = g.m
    scale = m + 1
    total = sum(w for row in g.weight for w in row)
    big = scale * total + m + 1
    arcs = [
        (u, v, scale * g.weight[v][u], None)
        for u in range(m)
        for v in range(m)
        if u != v
    ]
    arcs.extend((m, v, big + v, None) for v in range(m))
    parents = _edmonds(list(range(m + 1)), arcs, m, m + 1)
    roots = [v for v, a in parents.items() if a[0] == m]
    assert len(roots) == 1, "exactly one virtual arc must be selected"
    return roots[0]


def min_in_arborescence(g: BodyGraph, root: int | None = None) -> InArborescence:
    """Minimum-weight spanning in-arborescence of a complete body graph.

    With ``root`` given, the minimum among arborescences with that root;
    otherwise the minimum over all roots, ties broken by smallest root
    index (equivalent to solving the rooted problem for every root).
    """
    m = g.m
    if m == 0:
        raise ValueError("graph has no nodes")
    if root is not None and not 0 <= root < m:
        raise ValueError(f"root {root} out of range 0..{m - 1}")
    if m == 1:
        return InArborescence(0 if root is None else root, {})
    if root is None:
        root = _best_unrooted_root(g)
    return _rooted_in_arborescence(g, root)


def mwscs_2approx(g: BodyGraph) -> tuple[frozenset[tuple[int, int]], int]:
    """Strongly connected spanning arc set of weight at most twice optimal.

    For each root the union of a minimum in- and a minimum out-arborescence
    is strongly connected and costs at most twice any strongly connected
    subgraph; the best root (by deduplicated union weight, smallest index on
    ties) is returned.
    """
    m = g.m
    if m == 1:
        return frozenset(), 0
    best_arcs: frozenset[tuple[int, int]] | None = None
    best_w = None
    for r in range(m):
        t_in = _rooted_in_arborescence(g, r)
        out_parents = _min_out_parents(g, r)
        arcs = {(x, s) for x, s in t_in.succ.items()}
        arcs.update((u, v) for v, u in out_parents.items())
        w = sum(g.weight[u][v] for u, v in arcs)
        if best_w is None or w < best_w:
            best_arcs, best_w = frozenset(arcs), w
    assert best_arcs is not None and best_w is not None
    return best_arcs, best_w
