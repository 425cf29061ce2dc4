"""Graph values and the exact combinatorial toolbox built on them.

This module owns the immutable :class:`Graph` type plus everything that
treats graphs as plain combinatorial objects: graph6 and JSON parsing,
isomorphism types of node tuples, connected components, shortest-path
distances, homomorphism counting, canonical forms, enumeration of
isomorphism classes, and an exact treewidth solver.  All functions are
pure; none mutates its arguments.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BudgetError, DomainError, GraphFormatError

#: Sentinel distance for unreachable node pairs.  Strictly larger than any
#: supported node count, so predicates of the form ``d(u, v) <= delta``
#: stay total on disconnected graphs.
INFINITY = 2 ** 30

_GRAPH6_MAX_NODES = 62


class Graph:
    """A simple undirected graph on nodes ``0 .. n-1``.

    Edges are unordered pairs with no self-loops and no duplicates.
    Instances are immutable and hashable; equality is label-sensitive
    (use :func:`canonical_form` for isomorphism-class identity).
    """

    __slots__ = ("n", "edge_set", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DomainError(f"node count must be nonnegative, got {n}")
        normalized = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise DomainError(f"self-loop at node {u} is not allowed")
            normalized.add((u, v) if u < v else (v, u))
        adj = [set() for _ in range(n)]
        for u, v in normalized:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edge_set", frozenset(normalized))
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def edge_count(self) -> int:
        return len(self.edge_set)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set or (v, u) in self.edge_set

    def neighbors(self, u: int) -> frozenset:
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Relabel nodes: node ``u`` becomes ``perm[u]``."""
        if sorted(perm) != list(range(self.n)):
            raise DomainError("perm must be a permutation of 0..n-1")
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edge_set))

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edge_set == other.edge_set
        )

    def __hash__(self):
        return hash((self.n, self.edge_set))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edge_set)})"


# ---------------------------------------------------------------------------
# Standard constructions


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError("a cycle needs at least 3 nodes")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and ``leaves`` leaves (``leaves + 1`` nodes)."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def disjoint_union(*graphs: Graph) -> Graph:
    n = 0
    edges = []
    for g in graphs:
        edges.extend((u + n, v + n) for u, v in g.edge_set)
        n += g.n
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# graph6 and JSON edge-list encodings


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one short-form graph6 line (n <= 62).

    Raises :class:`GraphFormatError` with a byte offset on malformed
    input: bad header, characters outside the printable range, body
    length mismatch, or nonzero padding bits.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    if not line:
        raise GraphFormatError("empty graph6 line")
    header = ord(line[0])
    if header == 126:
        raise GraphFormatError("long-form graph6 (n > 62) is not supported", offset=0)
    if not 63 <= header <= 63 + _GRAPH6_MAX_NODES:
        raise GraphFormatError(f"invalid graph6 header byte {header}", offset=0)
    n = header - 63
    bit_count = n * (n - 1) // 2
    body_len = (bit_count + 5) // 6
    if len(line) - 1 != body_len:
        raise GraphFormatError(
            f"graph6 body for n={n} needs {body_len} bytes, got {len(line) - 1}",
            offset=len(line) if len(line) - 1 < body_len else body_len + 1,
        )
    bits = []
    for idx, ch in enumerate(line[1:], start=1):
        b = ord(ch)
        if not 63 <= b <= 126:
            raise GraphFormatError(f"graph6 byte {b} out of range 63..126", offset=idx)
        val = b - 63
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    for pad_idx in range(bit_count, len(bits)):
        if bits[pad_idx]:
            raise GraphFormatError(
                "nonzero padding bits in final graph6 byte",
                offset=pad_idx // 6 + 1,
            )
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    """Encode a graph as one short-form graph6 line (round-trips with
    :func:`parse_graph6`)."""
    if g.n > _GRAPH6_MAX_NODES:
        raise DomainError(f"graph6 short form supports at most 62 nodes, got {g.n}")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(g.n + 63)]
    for pos in range(0, len(bits), 6):
        val = 0
        for b in bits[pos:pos + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph_json(text: str) -> Graph:
    """Decode the JSON edge-list form ``{"n": int, "edges": [[u, v], ...]}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON graph: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj:
        raise GraphFormatError('JSON graph must be an object with an "n" field')
    n = obj["n"]
    edges = obj.get("edges", [])
    if not isinstance(n, int) or not isinstance(edges, list):
        raise GraphFormatError('JSON graph fields: "n" int, "edges" list of pairs')
    pairs = []
    for item in edges:
        if not (isinstance(item, list) and len(item) == 2):
            raise GraphFormatError(f"edge entry {item!r} is not a pair")
        pairs.append((item[0], item[1]))
    try:
        return Graph(n, pairs)
    except DomainError as exc:
        raise GraphFormatError(str(exc)) from exc


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edge_set)]}


# ---------------------------------------------------------------------------
# Isomorphism types of node tuples


@dataclass(frozen=True)
class IsoType:
    """Isomorphism type of a node tuple.

    Two tuples (possibly in different graphs) share an IsoType exactly
    when they have the same length, the same entry-equality pattern, and
    the same induced adjacency between positions.
    """

    length: int
    equality_pattern: tuple[int, ...]
    adjacency_pattern: frozenset


def atp(g: Graph, v: Sequence[int]) -> IsoType:
    """Isomorphism type of tuple ``v`` inside ``g``."""
    v = tuple(v)
    for x in v:
        if not 0 <= x < g.n:
            raise DomainError(f"tuple entry {x} outside 0..{g.n - 1}")
    equality = tuple(v.index(x) for x in v)
    adjacency = frozenset(
        (i, j)
        for i, j in itertools.combinations(range(len(v)), 2)
        if g.has_edge(v[i], v[j])
    )
    return IsoType(len(v), equality, adjacency)


# ---------------------------------------------------------------------------
# Components and distances


def components_avoiding(g: Graph, blocked: Iterable[int]) -> list[frozenset]:
    """Connected components of the subgraph induced on nodes outside
    ``blocked``, sorted by smallest member."""
    blocked = set(blocked)
    for x in blocked:
        if not 0 <= x < g.n:
            raise DomainError(f"blocked node {x} outside 0..{g.n - 1}")
    seen = set(blocked)
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        comp = {start}
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


@dataclass(frozen=True)
class DistanceTable:
    """All-pairs shortest-path distances with :data:`INFINITY` marking
    unreachable pairs."""

    matrix: tuple
    infinity: int = INFINITY

    def dist(self, u: int, v: int) -> int:
        return self.matrix[u][v]


@lru_cache(maxsize=4096)
def distance_table(g: Graph) -> DistanceTable:
    rows = []
    for src in range(g.n):
        row = [INFINITY] * g.n
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if row[w] == INFINITY:
                    row[w] = row[u] + 1
                    queue.append(w)
        rows.append(tuple(row))
    return DistanceTable(tuple(rows))


# ---------------------------------------------------------------------------
# Homomorphism counting


def _component_order(g: Graph, comp: set, seeds: Sequence[int]) -> list[int]:
    """BFS order of ``comp`` starting from ``seeds`` (or the smallest node),
    so all but the first node have an already-ordered neighbor when the
    component is connected."""
    order = []
    seen = set()
    queue = deque()
    for s in sorted(seeds) or [min(comp)]:
        seen.add(s)
        queue.append(s)
    while queue:
        u = queue.popleft()
        order.append(u)
        for w in sorted(g.adj[u]):
            if w in comp and w not in seen:
                seen.add(w)
                queue.append(w)
    return order


def rooted_hom_count(pattern: Graph, pins: Mapping[int, int], target: Graph) -> int:
    """Count homomorphisms ``pattern -> target`` extending ``pins``.

    With empty pins this equals :func:`hom_count`.  Counting backtracks
    over pattern nodes in a per-component BFS order, intersecting the
    target adjacency of already-assigned neighbors.
    """
    for u, img in pins.items():
        if not 0 <= u < pattern.n:
            raise DomainError(f"pin key {u} is not a pattern node")
        if not 0 <= img < target.n:
            raise DomainError(f"pin value {img} is not a target node")

    total = 1
    for comp in components_avoiding(pattern, ()):
        comp_set = set(comp)
        comp_pins = {u: pins[u] for u in comp_set if u in pins}
        order = _component_order(pattern, comp_set, sorted(comp_pins))
        assignment = {}
        ok = True
        for u, img in comp_pins.items():
            assignment[u] = img
        for u, img in comp_pins.items():
            for w in pattern.adj[u]:
                if w in assignment and not target.has_edge(img, assignment[w]):
                    ok = False
        if not ok:
            return 0
        free_order = [u for u in order if u not in comp_pins]

        def count_from(idx: int) -> int:
            if idx == len(free_order):
                return 1
            u = free_order[idx]
            assigned_nbrs = [w for w in pattern.adj[u] if w in assignment]
            if assigned_nbrs:
                candidates = set(target.adj[assignment[assigned_nbrs[0]]])
                for w in assigned_nbrs[1:]:
                    candidates &= target.adj[assignment[w]]
            else:
                candidates = range(target.n)
            subtotal = 0
            for img in candidates:
                assignment[u] = img
                subtotal += count_from(idx + 1)
                del assignment[u]
            return subtotal

        total *= count_from(0)
        if total == 0:
            return 0
    return total


def hom_count(pattern: Graph, target: Graph) -> int:
    """Number of edge-preserving maps ``pattern -> target`` (1 for the
    empty pattern)."""
    return rooted_hom_count(pattern, {}, target)


def homomorphisms(pattern: Graph, target: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism as an image tuple, in lexicographic order."""
    img = [0] * pattern.n

    def extend(u: int) -> Iterator[tuple[int, ...]]:
        if u == pattern.n:
            yield tuple(img)
            return
        for cand in range(target.n):
            if all(
                target.has_edge(cand, img[w])
                for w in pattern.adj[u]
                if w < u
            ):
                img[u] = cand
                yield from extend(u + 1)

    yield from extend(0)


# ---------------------------------------------------------------------------
# Canonical forms


def _refine_colors(g: Graph, colors: list[int]) -> list[int]:
    """Stable color refinement: repeatedly split classes by multisets of
    neighbor colors, with class ids assigned in sorted key order."""
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in g.adj[v])))
            for v in range(g.n)
        ]
        mapping = {key: i for i, key in enumerate(sorted(set(keys)))}
        new = [mapping[keys[v]] for v in range(g.n)]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _cells(colors: list[int]) -> list[list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def _cells_homogeneous(g: Graph, cells: list[list[int]]) -> bool:
    """True when adjacency is constant within every cell and between every
    pair of cells, so any in-cell node order yields identical bytes."""
    for a_idx, cell_a in enumerate(cells):
        inner = sum(1 for u, v in itertools.combinations(cell_a, 2) if g.has_edge(u, v))
        if inner not in (0, len(cell_a) * (len(cell_a) - 1) // 2):
            return False
        for cell_b in cells[a_idx + 1:]:
            cross = sum(
                1 for u in cell_a for v in cell_b if g.has_edge(u, v)
            )
            if cross not in (0, len(cell_a) * len(cell_b)):
                return False
    return True


def canonical_form(g: Graph, *, max_nodes: int = 16, max_leaves: int = 200000) -> bytes:
    """Canonical byte string of the isomorphism class of ``g``.

    The result is the graph6 line of a canonically relabeled copy, so
    ``parse_graph6(canonical_form(g))`` is a canonical representative.
    Labeling search: color refinement, then individualization of the
    first non-singleton cell, taking the minimum over leaf labelings.
    Cell-homogeneous colorings short-circuit the search, which keeps
    complete and empty graphs cheap.
    """
    if g.n > max_nodes:
        raise BudgetError(
            f"canonical form budget is {max_nodes} nodes, got {g.n}",
            stats={"nodes": g.n},
        )
    best: list[bytes] = []
    leaves = [0]

    def leaf_bytes(order: Sequence[int]) -> bytes:
        position = [0] * g.n
        for pos, v in enumerate(order):
            position[v] = pos
        return emit_graph6(g.permuted(position)).encode("ascii")

    def search(colors: list[int]) -> None:
        colors = _refine_colors(g, colors)
        cells = _cells(colors)
        if all(len(c) == 1 for c in cells) or _cells_homogeneous(g, cells):
            leaves[0] += 1
            if leaves[0] > max_leaves:
                raise BudgetError(
                    f"canonical form leaf budget {max_leaves} exceeded",
                    stats={"leaves": leaves[0]},
                )
            candidate = leaf_bytes([v for cell in cells for v in cell])
            if not best or candidate < best[0]:
                best[:] = [candidate]
            return
        target = next(cell for cell in cells if len(cell) > 1)
        target_color = colors[target[0]]
        for v in target:
            # Individualize v: fresh color ordered just before the rest
            # of its cell, preserving the order of all other cells.
            branched = []
            for u in range(g.n):
                c = 2 * colors[u]
                if colors[u] == target_color and u != v:
                    c += 1
                branched.append(c)
            search(branched)

    search([0] * g.n)
    return best[0]


# ---------------------------------------------------------------------------
# Enumeration of isomorphism classes


def enumerate_connected_graphs(
    n_max: int,
    *,
    connected_only: bool = True,
    budget_nodes: int = 8,
) -> Iterator[Graph]:
    """Yield one canonical representative per isomorphism class with
    1..n_max nodes, ordered by node count then canonical form.

    By default only connected classes are produced (query-graph
    enumeration); ``connected_only=False`` switches to all classes,
    which oracle tests use.  Classes on ``n`` nodes are built by adding
    one node to every class on ``n - 1`` nodes with every (nonempty, in
    the connected case) neighborhood subset, deduplicating by canonical
    form.  Every connected graph has a non-cut vertex, so the connected
    augmentation is exhaustive.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    if n_max > budget_nodes:
        raise BudgetError(
            f"enumeration budget is {budget_nodes} nodes, got n_max={n_max}",
            stats={"n_max": n_max},
        )
    previous: list[Graph] = []
    for n in range(1, n_max + 1):
        if n == 1:
            reps = {canonical_form(Graph(1)): Graph(1)}
        else:
            reps = {}
            low = 1 if connected_only else 0
            for base in previous:
                for bits in range(low, 1 << base.n):
                    extra = [
                        (base.n, w) for w in range(base.n) if bits >> w & 1
                    ]
                    candidate = Graph(n, list(base.edge_set) + extra)
                    key = canonical_form(candidate)
                    if key not in reps:
                        reps[key] = parse_graph6(key.decode("ascii"))
        previous = [reps[key] for key in sorted(reps)]
        yield from previous


# ---------------------------------------------------------------------------
# Exact treewidth


def treewidth(g: Graph, *, max_nodes: int = 12) -> int:
    """Exact treewidth by dynamic programming over vertex subsets.

    ``opt[S]`` is the best width eliminating exactly the vertices of
    ``S`` first:  ``opt[S] = min over v in S of max(opt[S - v],
    q(S - v, v))`` where ``q(S, v)`` counts vertices outside ``S + v``
    reachable from ``v`` through ``S``.  The empty graph gets -1.
    """
    n = g.n
    if n > max_nodes:
        raise BudgetError(
            f"treewidth budget is {max_nodes} nodes, got {n}",
            stats={"nodes": n},
        )
    if n == 0:
        return -1

    adj_mask = [0] * n
    for u in range(n):
        for w in g.adj[u]:
            adj_mask[u] |= 1 << w

    def q(s_mask: int, v: int) -> int:
        reach = 0
        frontier = adj_mask[v]
        seen = 1 << v
        while frontier:
            u = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            if seen >> u & 1:
                continue
            seen |= 1 << u
            if s_mask >> u & 1:
                frontier |= adj_mask[u] & ~seen
            else:
                reach += 1
        return reach

    full = (1 << n) - 1
    opt = [0] * (full + 1)
    opt[0] = -1
    for s_mask in range(1, full + 1):
        best = n
        rest = s_mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = s_mask & ~(1 << v)
            width = max(opt[prev], q(prev, v))
            if width < best:
                best = width
        opt[s_mask] = best
    return opt[full]
