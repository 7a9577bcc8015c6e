"""Simple undirected graphs on vertices 1..n, family constructors, graph
operations and the combinatorial predicates used by the bound engine."""

from __future__ import annotations

import heapq
import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedGraph,
    InvalidParams,
    MissingElement,
    OrderMismatch,
    TooLarge,
)

Edge = tuple[int, int]

ZERO_FORCING_LIMIT = 32
HAMILTON_LIMIT = 16
SPANNING_LIMIT = 10
CANONICAL_LIMIT = 12
ENUMERATION_LIMIT = 7


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParams(f"vertex count must be nonnegative, got {self.n}")
        normed = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InvalidParams(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InvalidParams(f"edge {e} has an endpoint outside 1..{self.n}")
            normed.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normed))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(_norm_edge(int(u), int(v)) for u, v in edges))

    # -- basic structure -------------------------------------------------
    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    @cached_property
    def masks(self) -> list[int]:
        """Neighbourhood bitmasks, 0-based (bit u-1 set for neighbour u)."""
        out = [0] * self.n
        for u, v in self.edges:
            out[u - 1] |= 1 << (v - 1)
            out[v - 1] |= 1 << (u - 1)
        return out

    def neighbors(self, v: int) -> frozenset[int]:
        if v not in self.adj:
            raise MissingElement(f"vertex {v} not in graph of order {self.n}")
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def degrees(self) -> list[int]:
        return [len(self.adj[v]) for v in self.vertices]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = a[v - 1, u - 1] = 1.0
        return a

    def complement(self) -> "Graph":
        return Graph(
            self.n,
            frozenset(
                e for e in itertools.combinations(self.vertices, 2) if e not in self.edges
            ),
        )

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = []
            queue = deque([s])
            seen.add(s)
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled 1..k in the order given."""
        index = {v: i + 1 for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            frozenset(
                _norm_edge(index[u], index[v])
                for u, v in self.edges
                if u in index and v in index
            ),
        )

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Apply vertex map v -> perm[v-1]."""
        return Graph(self.n, frozenset(_norm_edge(perm[u - 1], perm[v - 1]) for u, v in self.edges))

    def distances_from(self, s: int) -> dict[int, int]:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(int(data["n"]), data["edges"])

    def to_graph6(self) -> str:
        return to_graph6(self)

    @classmethod
    def from_graph6(cls, s: str) -> "Graph":
        return from_graph6(s)


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _encode_n(n: int) -> list[int]:
    if n <= 62:
        return [n]
    if n <= 258047:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]


def to_graph6(g: Graph) -> str:
    bits = [
        1 if g.has_edge(i, j) else 0
        for j in range(2, g.n + 1)
        for i in range(1, j)
    ]
    while len(bits) % 6:
        bits.append(0)
    data = _encode_n(g.n)
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        data.append(val)
    return "".join(chr(x + 63) for x in data)


def from_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    vals = [ord(c) - 63 for c in s]
    if not vals or any(v < 0 or v > 63 for v in vals):
        raise InvalidParams(f"not a graph6 string: {s!r}")
    if vals[0] < 63:
        n, rest = vals[0], vals[1:]
    elif len(vals) > 1 and vals[1] < 63:
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        rest = vals[4:]
    else:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        rest = vals[8:]
    need = n * (n - 1) // 2
    if len(rest) * 6 < need:
        raise InvalidParams(f"graph6 string too short for n={n}")
    bits = []
    for v in rest:
        bits.extend((v >> k) & 1 for k in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(2, n + 1):
        for i in range(1, j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}: the m-side is 1..m, the n-side m+1..m+n."""
    return join(empty(m), empty(n))


def vertex_sum(g: Graph, h: Graph, vg: int, vh: int) -> Graph:
    """Identify vertex vh of h with vertex vg of g; h's other vertices are
    appended after g's in their original order."""
    if vg not in g.vertices or vh not in h.vertices:
        raise MissingElement(f"summing vertex missing ({vg} in g, {vh} in h)")
    index = {}
    nxt = g.n + 1
    for v in h.vertices:
        if v == vh:
            index[v] = vg
        else:
            index[v] = nxt
            nxt += 1
    edges = set(g.edges) | {_norm_edge(index[u], index[v]) for u, v in h.edges}
    return Graph(g.n + h.n - 1, frozenset(edges))


def clique_path(sizes: Sequence[int]) -> Graph:
    """KP(n_1..n_s); clique i occupies a consecutive vertex block and shares its
    first vertex with the last vertex of clique i-1."""
    _check_clique_sizes(sizes)
    return Graph.from_edges(sum(sizes) - len(sizes) + 1, itertools.chain.from_iterable(
        itertools.combinations(block, 2) for block in clique_path_blocks(sizes)
    ))


def clique_path_blocks(sizes: Sequence[int]) -> list[list[int]]:
    blocks = []
    start = 1
    for k in sizes:
        blocks.append(list(range(start, start + k)))
        start += k - 1
    return blocks


def clique_star(sizes: Sequence[int]) -> Graph:
    """KS(n_1..n_s); noncentral vertices numbered clique by clique, centre last."""
    _check_clique_sizes(sizes)
    return Graph.from_edges(sum(sizes) - len(sizes) + 1, itertools.chain.from_iterable(
        itertools.combinations(block, 2) for block in clique_star_blocks(sizes)
    ))


def clique_star_blocks(sizes: Sequence[int]) -> list[list[int]]:
    n = sum(sizes) - len(sizes) + 1
    blocks = []
    start = 1
    for k in sizes:
        blocks.append(list(range(start, start + k - 1)) + [n])
        start += k - 1
    return blocks


def _check_clique_sizes(sizes: Sequence[int]) -> None:
    if len(sizes) < 2 or any(k < 2 for k in sizes):
        raise InvalidParams(f"clique sizes need s >= 2 and every n_i >= 2, got {list(sizes)}")


def generalized_star(a: int, b: int) -> Graph:
    """S(a, b, 1): path on a+b+1 vertices with a leaf on vertex a+1."""
    if a < 1 or b < 1:
        raise InvalidParams("generalized star S(a,b,1) needs a, b >= 1")
    m = a + b + 1
    return Graph.from_edges(m + 1, [(i, i + 1) for i in range(1, m)] + [(a + 1, m + 1)])


def generalized_bull(a: int, b: int) -> Graph:
    """GB(a, b): path on a+b+3 vertices plus the edge {a+1, a+3}."""
    if a < 0 or b < 0:
        raise InvalidParams("generalized bull GB(a,b) needs a, b >= 0")
    n = a + b + 3
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(a + 1, a + 3)])


def hypercube(d: int) -> Graph:
    g = path(2)
    for _ in range(d - 1):
        g = product("cartesian", g, path(2))
    return g


def wheel(n: int) -> Graph:
    """Hub n joined to the cycle on 1..n-1."""
    return join(cycle(n - 1), complete(1))


def complete_minus_edge(n: int) -> Graph:
    return Graph(n, complete(n).edges - {(1, 2)})


FAMILIES = {
    "path": (1, 1),
    "cycle": (1, 1),
    "complete": (1, 1),
    "empty": (1, 1),
    "complete-bipartite": (2, 2),
    "star": (1, 1),
    "hypercube": (1, 1),
    "cliquepath": (2, None),
    "cliquestar": (2, None),
    "genstar": (2, 2),
    "genbull": (2, 2),
    "wheel": (1, 1),
    "kn-minus-e": (1, 1),
}


def make_family(kind: str, params: Sequence[int]) -> Graph:
    """Build a named graph family member with the numbering used throughout."""
    if kind not in FAMILIES:
        raise InvalidParams(f"unknown family {kind!r}; known: {sorted(FAMILIES)}")
    lo, hi = FAMILIES[kind]
    params = [int(p) for p in params]
    if len(params) < lo or (hi is not None and len(params) > hi):
        raise InvalidParams(f"family {kind!r} takes {lo}..{hi or 'many'} parameters, got {params}")
    p0 = params[0]
    if kind == "path":
        _require(p0 >= 1, kind, params)
        return path(p0)
    if kind == "cycle":
        _require(p0 >= 3, kind, params)
        return cycle(p0)
    if kind == "complete":
        _require(p0 >= 1, kind, params)
        return complete(p0)
    if kind == "empty":
        _require(p0 >= 1, kind, params)
        return empty(p0)
    if kind == "complete-bipartite":
        _require(min(params) >= 1, kind, params)
        return complete_bipartite(*params)
    if kind == "star":
        _require(p0 >= 1, kind, params)
        return complete_bipartite(p0, 1).relabel(list(range(2, p0 + 2)) + [1])
    if kind == "hypercube":
        _require(p0 >= 1, kind, params)
        return hypercube(p0)
    if kind == "cliquepath":
        return clique_path(params)
    if kind == "cliquestar":
        return clique_star(params)
    if kind == "genstar":
        return generalized_star(*params)
    if kind == "genbull":
        return generalized_bull(*params)
    if kind == "wheel":
        _require(p0 >= 4, kind, params)
        return wheel(p0)
    if kind == "kn-minus-e":
        _require(p0 >= 2, kind, params)
        return complete_minus_edge(p0)
    raise AssertionError(kind)


def _require(ok: bool, kind: str, params) -> None:
    if not ok:
        raise InvalidParams(f"invalid parameters {params} for family {kind!r}")


# ---------------------------------------------------------------------------
# Products, joins, operations
# ---------------------------------------------------------------------------

def product(kind: str, g: Graph, h: Graph) -> Graph:
    """Cartesian, tensor or strong product; (u, u') is vertex (u-1)*|V(h)| + u'."""
    if kind not in ("cartesian", "tensor", "strong"):
        raise InvalidParams(f"unknown product {kind!r}")
    if g.n == 0 or h.n == 0:
        raise InvalidParams("products need nonempty factors")
    m = h.n

    def idx(u, up):
        return (u - 1) * m + up

    edges = set()
    if kind in ("cartesian", "strong"):
        for u in g.vertices:
            for a, b in h.edges:
                edges.add(_norm_edge(idx(u, a), idx(u, b)))
        for a, b in g.edges:
            for up in h.vertices:
                edges.add(_norm_edge(idx(a, up), idx(b, up)))
    if kind in ("tensor", "strong"):
        for a, b in g.edges:
            for c, d in h.edges:
                edges.add(_norm_edge(idx(a, c), idx(b, d)))
                edges.add(_norm_edge(idx(a, d), idx(b, c)))
    return Graph(g.n * h.n, frozenset(edges))


def join(g: Graph, h: Graph) -> Graph:
    shift = g.n
    edges = set(g.edges)
    edges |= {(u + shift, v + shift) for u, v in h.edges}
    edges |= {(u, v + shift) for u in g.vertices for v in h.vertices}
    return Graph(g.n + h.n, frozenset(edges))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    return Graph(g.n + h.n, frozenset(set(g.edges) | {(u + shift, v + shift) for u, v in h.edges}))


@dataclass(frozen=True)
class GraphOp:
    """One graph operation.  ``kind`` is one of delete-vertex, delete-edge,
    contract-edge, subdivide-edge, vertex-sum, join, or a product kind."""

    kind: str
    vertex: int | None = None
    edge: Edge | None = None
    other: Graph | None = None
    other_vertex: int | None = None


@dataclass(frozen=True)
class GraphOpLog:
    base: Graph
    op: GraphOp
    result: Graph

    def replay(self) -> Graph:
        return apply_op(self.base, self.op)


def apply_op(g: Graph, op: GraphOp) -> Graph:
    kind = op.kind
    if kind == "delete-vertex":
        v = op.vertex
        if v not in g.vertices:
            raise MissingElement(f"vertex {v} not in graph")
        keep = [u for u in g.vertices if u != v]
        return g.induced(keep)
    if kind in ("delete-edge", "contract-edge", "subdivide-edge"):
        if op.edge is None or not g.has_edge(*op.edge):
            raise MissingElement(f"edge {op.edge} not in graph")
        u, v = _norm_edge(*op.edge)
        if kind == "delete-edge":
            return Graph(g.n, g.edges - {(u, v)})
        if kind == "subdivide-edge":
            w = g.n + 1
            return Graph(w, frozenset((g.edges - {(u, v)}) | {(u, w), (v, w)}))
        # contraction: v merges into u, labels above v shift down by one
        def lab(x):
            x = u if x == v else x
            return x - 1 if x > v else x

        edges = {_norm_edge(lab(a), lab(b)) for a, b in g.edges if {a, b} != {u, v}}
        return Graph(g.n - 1, frozenset(e for e in edges if e[0] != e[1]))
    if kind == "vertex-sum":
        return vertex_sum(g, op.other, op.vertex, op.other_vertex)
    if kind == "join":
        return join(g, op.other)
    if kind in ("cartesian", "tensor", "strong"):
        return product(kind, g, op.other)
    raise InvalidParams(f"unknown graph operation {kind!r}")


def log_op(g: Graph, op: GraphOp) -> GraphOpLog:
    return GraphOpLog(g, op, apply_op(g, op))


# ---------------------------------------------------------------------------
# Shortest paths
# ---------------------------------------------------------------------------

def _path_counts(g: Graph, s: int) -> tuple[dict[int, int], dict[int, int]]:
    """BFS distances and shortest-path counts (capped at 2) from s."""
    dist = {s: 0}
    count = {s: 1}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                count[w] = count[u]
                queue.append(w)
            elif dist[w] == dist[u] + 1:
                count[w] = min(2, count[w] + count[u])
    return dist, count


def longest_unique_shortest_path(g: Graph) -> tuple[int, tuple[int, int] | None]:
    """(d, (u, v)) for a pair with a unique shortest path of maximum length d."""
    if not g.is_connected():
        raise DisconnectedGraph("unique shortest path bound needs a connected graph")
    best, pair = 0, None
    for s in g.vertices:
        dist, count = _path_counts(g, s)
        for t in g.vertices:
            if t > s and count[t] == 1 and dist[t] > best:
                best, pair = dist[t], (s, t)
    return best, pair


def unique_shortest_path_bound(g: Graph) -> int:
    return longest_unique_shortest_path(g)[0] + 1


def shortest_path(g: Graph, s: int, t: int) -> list[int]:
    prev = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for w in sorted(g.adj[u]):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    out = [t]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


# ---------------------------------------------------------------------------
# Zero forcing
# ---------------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def _zf_closure(masks: list[int], s: int) -> int:
    n = len(masks)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if s >> v & 1:
                rest = masks[v] & ~s
                if rest and rest & (rest - 1) == 0:
                    s |= rest
                    changed = True
    return s


def zero_forcing_closure(g: Graph, colored: Iterable[int]) -> set[int]:
    s = 0
    for v in colored:
        s |= 1 << (v - 1)
    s = _zf_closure(g.masks, s)
    return {v + 1 for v in range(g.n) if s >> v & 1}


def is_zero_forcing_set(g: Graph, colored: Iterable[int]) -> bool:
    return len(zero_forcing_closure(g, colored)) == g.n


def greedy_zero_forcing_set(g: Graph) -> list[int]:
    """A (not necessarily minimum) zero forcing set, built greedily."""
    masks = g.masks
    full = (1 << g.n) - 1
    s = 0
    chosen = 0
    while True:
        s = _zf_closure(masks, s)
        if s == full:
            break
        best = None
        for v in range(g.n):
            inside = s >> v & 1
            u = (masks[v] | (0 if inside else 1 << v)) & ~s
            if not u:
                continue
            cost = _popcount(u) - 1 if (masks[v] & ~s) else 1
            gain = _popcount(_zf_closure(masks, s | u)) - _popcount(s)
            key = (cost / gain, cost, v)
            if best is None or key < best[0]:
                best = (key, u, v)
        _, u, v = best
        if masks[v] & ~s:
            # leave one uncoloured neighbour for v to force
            nb = masks[v] & ~s
            u &= ~(nb & -nb)
        chosen |= u
        s |= u
    return [v + 1 for v in range(g.n) if chosen >> v & 1]


def minimum_zero_forcing_set(g: Graph) -> list[int]:
    """Exact minimum zero forcing set by a cost-ordered search over closed
    sets (each step buys all but one uncoloured vertex of some N[v])."""
    if g.n > ZERO_FORCING_LIMIT:
        raise TooLarge(f"zero forcing search limited to {ZERO_FORCING_LIMIT} vertices")
    n = g.n
    if n == 0:
        return []
    masks = g.masks
    full = (1 << n) - 1
    upper = greedy_zero_forcing_set(g)
    best_cost = len(upper)
    start = _zf_closure(masks, 0)
    seen = {start: 0}
    bought = {start: 0}
    heap = [(0, start)]
    while heap:
        r, s = heapq.heappop(heap)
        if s == full:
            chosen = bought[s]
            return [v + 1 for v in range(n) if chosen >> v & 1]
        if seen.get(s, r + 1) < r:
            continue
        for v in range(n):
            inside = s >> v & 1
            open_nb = masks[v] & ~s
            if inside:
                if not open_nb:
                    continue
                keep = open_nb & -open_nb
                buy = open_nb & ~keep
                new = s | open_nb
            elif open_nb:
                keep = open_nb & -open_nb
                buy = (open_nb & ~keep) | (1 << v)
                new = s | open_nb | (1 << v)
            else:
                buy = 1 << v
                new = s | buy
            nr = r + _popcount(buy)
            if nr >= best_cost and new != full:
                continue
            if nr > best_cost:
                continue
            new = _zf_closure(masks, new)
            if nr < seen.get(new, n + 1):
                seen[new] = nr
                bought[new] = bought[s] | buy
                heapq.heappush(heap, (nr, new))
    return upper


def zero_forcing_number(g: Graph) -> int:
    return len(minimum_zero_forcing_set(g))


# ---------------------------------------------------------------------------
# Hamilton cycles
# ---------------------------------------------------------------------------

def hamilton_cycle(g: Graph) -> list[int] | None:
    """A Hamilton cycle as a vertex sequence, or None (subset DP)."""
    n = g.n
    if n > HAMILTON_LIMIT:
        raise TooLarge(f"Hamilton cycle search limited to {HAMILTON_LIMIT} vertices")
    if n < 3 or not g.is_connected() or min(g.degrees()) < 2:
        return None
    masks = g.masks
    # dp[mask]: bitmask of end vertices of paths from vertex 0 covering mask
    dp = [0] * (1 << n)
    dp[1] = 1
    for mask in range(1, 1 << n):
        ends = dp[mask]
        if not ends or not mask & 1:
            continue
        e = ends
        while e:
            low = e & -e
            v = low.bit_length() - 1
            e ^= low
            ext = masks[v] & ~mask
            while ext:
                lw = ext & -ext
                ext ^= lw
                dp[mask | lw] |= lw
    full = (1 << n) - 1
    closing = dp[full] & masks[0]
    if not closing:
        return None
    # walk back
    v = (closing & -closing).bit_length() - 1
    order = [v]
    mask = full
    while mask != 1:
        prev_mask = mask & ~(1 << v)
        cand = dp[prev_mask] & masks[v]
        v = (cand & -cand).bit_length() - 1
        order.append(v)
        mask = prev_mask
    return [x + 1 for x in reversed(order)]


def has_hamilton_cycle(g: Graph) -> bool:
    return hamilton_cycle(g) is not None


# ---------------------------------------------------------------------------
# Independent sets
# ---------------------------------------------------------------------------

def common_neighbor_union(g: Graph, vertices: Sequence[int]) -> set[int]:
    out: set[int] = set()
    for u, w in itertools.combinations(vertices, 2):
        out |= g.adj[u] & g.adj[w]
    return out


def sharing_vertices(g: Graph, vertices: Sequence[int]) -> list[int]:
    """Members of the set that share a neighbour with another member."""
    return sorted(
        v for v in vertices
        if any(w != v and g.adj[v] & g.adj[w] for w in vertices)
    )


def check_independent_set(g: Graph, vertices: Sequence[int]) -> tuple[bool, set[int]]:
    """(violates, union) for the two-eigenvalue obstruction.

    With two distinct eigenvalues A^2 is a combination of A and I, so the
    rows of A indexed by an independent set are pairwise orthogonal and all
    their overlaps lie in the union U of pairwise common neighbourhoods.
    The rows of the members that share a neighbour are nonzero on U, so
    their number cannot exceed |U| when U is nonempty."""
    for v in vertices:
        g.neighbors(v)
    if any(g.has_edge(u, w) for u, w in itertools.combinations(vertices, 2)):
        raise InvalidParams(f"{list(vertices)} is not an independent set")
    union = common_neighbor_union(g, vertices)
    return 0 < len(union) < len(sharing_vertices(g, vertices)), union


def independent_set_violation(
    g: Graph, max_size: int | None = None, candidate: Sequence[int] | None = None
) -> tuple[list[int], set[int]] | None:
    """An independent set certifying q != 2, as (set, union), or None."""
    if candidate is not None:
        bad, union = check_independent_set(g, candidate)
        return (sorted(candidate), union) if bad else None
    if max_size is None:
        max_size = g.n
    order = list(g.vertices)
    for size in range(2, max_size + 1):
        found = False

        def extend(chosen: list[int], start: int):
            nonlocal found
            if len(chosen) == size:
                found = True
                union = common_neighbor_union(g, chosen)
                if 0 < len(union) < len(sharing_vertices(g, chosen)):
                    return list(chosen), union
                return None
            for i in range(start, len(order)):
                v = order[i]
                if any(v in g.adj[c] for c in chosen):
                    continue
                chosen.append(v)
                res = extend(chosen, i + 1)
                chosen.pop()
                if res:
                    return res
            return None

        res = extend([], 0)
        if res:
            return res
        if not found:
            break
    return None


# ---------------------------------------------------------------------------
# Spanning subgraphs
# ---------------------------------------------------------------------------

def is_spanning_subgraph_of(h: Graph, g: Graph) -> list[int] | None:
    """A bijection pi (pi[v-1] = image of v) mapping every edge of h onto an
    edge of g, or None."""
    if h.n != g.n:
        raise OrderMismatch(f"orders differ: {h.n} vs {g.n}")
    if h.n > SPANNING_LIMIT:
        raise TooLarge(f"spanning subgraph search limited to {SPANNING_LIMIT} vertices")
    if h.num_edges > g.num_edges:
        return None
    hd = sorted(h.degrees(), reverse=True)
    gd = sorted(g.degrees(), reverse=True)
    if any(a > b for a, b in zip(hd, gd)):
        return None
    # order h's vertices: BFS from max degree, preferring high degree
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(h.vertices)
    while remaining:
        root = max(remaining, key=lambda v: (len(h.adj[v]), -v))
        queue = [root]
        while queue:
            queue.sort(key=lambda v: (-len(h.adj[v] & placed), -len(h.adj[v]), v))
            v = queue.pop(0)
            if v in placed:
                continue
            placed.add(v)
            remaining.discard(v)
            order.append(v)
            queue.extend(w for w in h.adj[v] if w not in placed and w not in queue)
    gdeg = {v: len(g.adj[v]) for v in g.vertices}
    image: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in g.vertices:
            if w in used or gdeg[w] < len(h.adj[v]):
                continue
            if all(g.has_edge(w, image[u]) for u in h.adj[v] if u in image):
                image[v] = w
                used.add(w)
                if rec(i + 1):
                    return True
                del image[v]
                used.discard(w)
        return False

    if rec(0):
        return [image[v] for v in h.vertices]
    return None


# ---------------------------------------------------------------------------
# Near-path classes
# ---------------------------------------------------------------------------

def _is_path_graph(g: Graph) -> bool:
    return g.is_connected() and g.num_edges == g.n - 1 and (g.n <= 2 or max(g.degrees()) <= 2)


def near_path_class(g: Graph) -> str | None:
    """Classify g as 'path', 'path+isolated', 'generalized-star' or
    'generalized-bull' (the graphs with q >= n - 1), else None."""
    n = g.n
    if n == 0:
        return None
    if _is_path_graph(g):
        return "path"
    m = g.num_edges
    degs = g.degrees()
    if m == n - 2 and degs.count(0) == 1 and n >= 2:
        rest = [v for v in g.vertices if degs[v - 1] > 0] or [1]
        if _is_path_graph(g.induced(rest)) and len(rest) == n - 1:
            return "path+isolated"
        return None
    if not g.is_connected():
        return None
    if m == n - 1 and degs.count(3) == 1 and max(degs) == 3:
        centre = degs.index(3) + 1
        if any(len(g.adj[w]) == 1 for w in g.adj[centre]):
            return "generalized-star"
        return None
    if m == n and max(degs) <= 3:
        for u, v in g.sorted_edges():
            h = Graph(n, g.edges - {(u, v)})
            if _is_path_graph(h) and h.distances_from(u)[v] == 2:
                return "generalized-bull"
    return None


# ---------------------------------------------------------------------------
# Canonical forms and enumeration
# ---------------------------------------------------------------------------

def _refine(g: Graph, colors: list[int]) -> list[int]:
    n = g.n
    ncol = len(set(colors))
    while True:
        sig = [
            (colors[v], tuple(sorted(colors[u - 1] for u in g.adj[v + 1])))
            for v in range(n)
        ]
        index = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [index[s] for s in sig]
        if len(index) == ncol:
            return new
        colors, ncol = new, len(index)


def _certificate(g: Graph, colors: list[int]) -> tuple[int, ...]:
    pos = {v + 1: colors[v] for v in range(g.n)}
    bits = [0] * (g.n * (g.n - 1) // 2)
    for u, v in g.edges:
        a, b = sorted((pos[u], pos[v]))
        bits[b * (b - 1) // 2 + a] = 1
    return tuple(bits)


def canonical_labeling(g: Graph) -> tuple[tuple[int, ...], list[int]]:
    """Minimum adjacency bitstring over an individualisation-refinement
    search tree; returns (certificate, vertex -> canonical position)."""
    if g.n > CANONICAL_LIMIT:
        raise TooLarge(f"canonical form limited to {CANONICAL_LIMIT} vertices")
    best: list = [None, None]

    def twins(cell: list[int]) -> bool:
        u = cell[0] + 1
        nu = g.adj[u]
        return all(nu - {w + 1} == g.adj[w + 1] - {u} for w in cell[1:])

    def rec(colors: list[int]):
        colors = _refine(g, colors)
        if len(set(colors)) == g.n:
            cert = _certificate(g, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colors
            return
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        cell = cells[target]
        choices = cell[:1] if twins(cell) else cell
        for v in choices:
            nc = [2 * c + 1 for c in colors]
            nc[v] = 2 * colors[v]
            rec(nc)

    rec([0] * g.n)
    return best[0], best[1]


def canonical_form(g: Graph) -> Graph:
    cert, colors = canonical_labeling(g)
    return g.relabel([c + 1 for c in colors])


def canonical_key(g: Graph) -> str:
    """Isomorphism-invariant key (canonical graph6); labelled graph6 with an
    'L:' prefix beyond the canonical-form size limit."""
    if g.n > CANONICAL_LIMIT:
        return "L:" + to_graph6(g)
    return to_graph6(canonical_form(g))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    if g.n > CANONICAL_LIMIT:
        if g.edges == h.edges:
            return True
        raise TooLarge(f"isomorphism test limited to {CANONICAL_LIMIT} vertices")
    return canonical_key(g) == canonical_key(h)


def enumerate_connected(n: int) -> list[Graph]:
    """All connected graphs of order n up to isomorphism, in canonical form,
    sorted by (edge count, graph6)."""
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration limited to order {ENUMERATION_LIMIT}")
    if n < 1:
        raise InvalidParams("order must be positive")
    level = {to_graph6(Graph(1)): Graph(1)}
    for k in range(2, n + 1):
        nxt: dict[str, Graph] = {}
        for base in level.values():
            for size in range(1, k):
                for nbrs in itertools.combinations(range(1, k), size):
                    g = Graph(k, frozenset(set(base.edges) | {(u, k) for u in nbrs}))
                    c = canonical_form(g)
                    nxt.setdefault(to_graph6(c), c)
        level = nxt
    return sorted(level.values(), key=lambda g: (g.num_edges, to_graph6(g)))
