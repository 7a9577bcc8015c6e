"""Certified intervals for q(G): every applicable lower and upper rule is
evaluated and kept as a contribution with its rule name and detail."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import CountMismatch, DisconnectedGraph, InfeasibleReport, TooLarge
from .graphs import (
    HAMILTON_LIMIT,
    SPANNING_LIMIT,
    ZERO_FORCING_LIMIT,
    Graph,
    enumerate_connected,
    greedy_zero_forcing_set,
    hamilton_cycle,
    independent_set_violation,
    is_isomorphic,
    longest_unique_shortest_path,
    minimum_zero_forcing_set,
    near_path_class,
    shortest_path,
    to_graph6,
)
from .strongprops import Registry, lift_bound

INDEPENDENT_SET_MAX = 4
# graphs up to this order get an independent-set search over every size
INDEPENDENT_SET_FULL_LIMIT = 12
JOIN_COMPONENT_LIMIT = 16


@dataclass(frozen=True)
class Contribution:
    value: int
    direction: str  # "lower" or "upper"
    rule: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"value": self.value, "direction": self.direction, "rule": self.rule, "detail": self.detail}


@dataclass
class BoundReport:
    graph: Graph
    lo: int
    hi: int
    contributions: list[Contribution] = field(default_factory=list)
    witnesses: list[str] = field(default_factory=list)
    label: str = ""

    @property
    def determined(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def provenance(self) -> str:
        lo_rules = sorted({c.rule for c in self.contributions if c.direction == "lower" and c.value == self.lo})
        hi_rules = sorted({c.rule for c in self.contributions if c.direction == "upper" and c.value == self.hi})
        return f"lo:{'+'.join(lo_rules)};hi:{'+'.join(hi_rules)}"

    def to_json(self) -> dict:
        return {
            "graph": self.label or to_graph6(self.graph),
            "graph6": to_graph6(self.graph),
            "n": self.graph.n,
            "lo": self.lo,
            "hi": self.hi,
            "determined": self.determined,
            "contributions": [c.to_json() for c in self.contributions],
            "witnesses": list(self.witnesses),
        }


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------

def lower_bounds(g: Graph, independent_max: int | None = None,
                 candidates: Sequence[Sequence[int]] = ()) -> list[Contribution]:
    """All applicable lower bounds for a connected graph."""
    if not g.is_connected():
        raise DisconnectedGraph("lower bounds need a connected graph")
    n = g.n
    out = [Contribution(1, "lower", "trivial", "every matrix has an eigenvalue")]
    if n == 1:
        return out
    out.append(Contribution(2, "lower", "has-edge", "a nonzero off-diagonal entry rules out a scalar matrix"))

    d, pair = longest_unique_shortest_path(g)
    if pair is not None:
        p = shortest_path(g, *pair)
        out.append(Contribution(d + 1, "lower", "unique-shortest-path",
                                f"unique path {'-'.join(map(str, p))} of length {d}"))

    if n <= ZERO_FORCING_LIMIT:
        zset = minimum_zero_forcing_set(g)
        how = "minimum"
    else:
        zset = greedy_zero_forcing_set(g)
        how = "greedy"
    out.append(Contribution(math.ceil(n / len(zset)), "lower", "zero-forcing",
                            f"{how} forcing set {sorted(zset)} of size {len(zset)} bounds the maximum nullity"))

    if independent_max is None:
        independent_max = n if n <= INDEPENDENT_SET_FULL_LIMIT else INDEPENDENT_SET_MAX
    found = None
    for cand in candidates:
        found = independent_set_violation(g, candidate=cand)
        if found:
            break
    if found is None and independent_max >= 2:
        found = independent_set_violation(g, max_size=min(independent_max, n))
    if found:
        s, union = found
        out.append(Contribution(3, "lower", "independent-set",
                                f"independent set {s} with common-neighbour union {sorted(union)}"))

    cls = near_path_class(g)
    if cls == "path":
        out.append(Contribution(n, "lower", "near-path", "path"))
    elif cls is not None:
        out.append(Contribution(n - 1, "lower", "near-path", cls))
    return out


# ---------------------------------------------------------------------------
# Upper bounds
# ---------------------------------------------------------------------------

def join_decompositions(g: Graph) -> list[tuple[list[int], list[int]]]:
    """Splits V = S ∪ T with every S-T pair adjacent and both sides inducing
    connected subgraphs.  Built from the components of the complement."""
    comps = g.complement().components()
    if len(comps) < 2:
        return []
    if len(comps) > JOIN_COMPONENT_LIMIT:
        raise TooLarge("too many complement components for join search")
    out = []
    first, rest = comps[0], comps[1:]
    for mask in range(1 << len(rest)):
        side_s = list(first)
        side_t: list[int] = []
        for i, c in enumerate(rest):
            (side_s if mask >> i & 1 else side_t).extend(c)
        if not side_t:
            continue
        if g.induced(sorted(side_s)).is_connected() and g.induced(sorted(side_t)).is_connected():
            out.append((sorted(side_s), sorted(side_t)))
    return out


def upper_bounds(g: Graph, registry: Registry | None = None) -> list[Contribution]:
    """All applicable upper bounds for a connected graph."""
    if not g.is_connected():
        raise DisconnectedGraph("upper bounds need a connected graph")
    n = g.n
    out = [Contribution(n, "upper", "trivial", "at most n eigenvalues")]
    if n == 1:
        return out
    cls = near_path_class(g)
    if cls != "path":
        out.append(Contribution(n - 1, "upper", "near-path", "only paths attain n"))
        if cls is None:
            out.append(Contribution(n - 2, "upper", "near-path",
                                    "not a path, generalized star or generalized bull"))

    if n <= HAMILTON_LIMIT:
        cyc = hamilton_cycle(g)
        if cyc is not None:
            out.append(Contribution(math.ceil(n / 2), "upper", "hamiltonian",
                                    f"Hamilton cycle {'-'.join(map(str, cyc))}"))

    best_join = None
    for s, t in join_decompositions(g):
        val = 2 + abs(len(s) - len(t))
        if best_join is None or val < best_join[0]:
            best_join = (val, s, t)
    if best_join:
        val, s, t = best_join
        rule = "join-equal" if val == 2 else "join"
        out.append(Contribution(val, "upper", rule, f"join of connected parts {s} and {t}"))

    if registry is not None:
        for rec in registry.lookup(g):
            out.append(Contribution(rec.q, "upper", "witness", f"{rec.id}: m={list(rec.summary.ordered_mult)}"))
            out.append(Contribution(rec.rank + 1, "upper", "min-rank", f"{rec.id}: rank {rec.rank}"))
        lifted = lift_bound(g, registry)
        if lifted is not None:
            out.append(Contribution(lifted[0], "upper", "spanning-lift",
                                    f"{lifted[1]} on a spanning subgraph has SMP"))
    return out


def _used_witnesses(contribs: Sequence[Contribution]) -> list[str]:
    ids = []
    for c in contribs:
        if c.rule in ("witness", "min-rank", "spanning-lift"):
            rid = c.detail.split(":")[0].split(" ")[0]
            if rid not in ids:
                ids.append(rid)
    return ids


def bound(g: Graph, registry: Registry | None = None, label: str = "",
          candidates: Sequence[Sequence[int]] = (),
          allow_disconnected: bool = False) -> BoundReport:
    """Interval [lo, hi] for q(g).  Disconnected graphs are handled
    component-wise when ``allow_disconnected`` is set."""
    if not g.is_connected():
        if not allow_disconnected:
            raise DisconnectedGraph("bound needs a connected graph")
        return _bound_disconnected(g, registry, label)
    lows = lower_bounds(g, candidates=candidates)
    highs = upper_bounds(g, registry)
    contribs = lows + highs
    lo = max(c.value for c in lows)
    hi = min(c.value for c in highs)
    rep = BoundReport(g, lo, hi, contribs, _used_witnesses(highs), label)
    if lo > hi:
        raise InfeasibleReport(f"lower bound {lo} exceeds upper bound {hi}: {rep.provenance()}")
    return rep


def _bound_disconnected(g: Graph, registry: Registry | None, label: str) -> BoundReport:
    comps = g.components()
    parts = [bound(g.induced(c), registry) for c in comps]
    contribs = []
    for c, r in zip(comps, parts):
        contribs.append(Contribution(r.lo, "lower", "component", f"component {c} has q >= {r.lo}"))
    lo = max(r.lo for r in parts)
    sub = [g.induced(c) for c in comps]
    same = all(h.n == sub[0].n and is_isomorphic(h, sub[0]) for h in sub[1:])
    if same:
        contribs.append(Contribution(parts[0].hi, "upper", "component",
                                     "isomorphic components share one witness"))
    else:
        contribs.append(Contribution(sum(r.hi for r in parts), "upper", "component",
                                     "direct sum of component witnesses"))
    contribs.append(Contribution(g.n, "upper", "trivial", "at most n eigenvalues"))
    if registry is not None:
        for rec in registry.lookup(g):
            contribs.append(Contribution(rec.q, "upper", "witness", f"{rec.id}: m={list(rec.summary.ordered_mult)}"))
    hi = min(c.value for c in contribs if c.direction == "upper")
    rep = BoundReport(g, lo, hi, contribs, _used_witnesses(contribs), label)
    for r in parts:
        rep.witnesses.extend(w for w in r.witnesses if w not in rep.witnesses)
    if lo > hi:
        raise InfeasibleReport(f"lower bound {lo} exceeds upper bound {hi}")
    return rep


# ---------------------------------------------------------------------------
# Table consistency
# ---------------------------------------------------------------------------

@dataclass
class TableVerdict:
    order: int
    feasible: bool
    graphs: int
    slots: int
    determined: int
    determined_consistent: bool
    reports: list[BoundReport]
    assignment: list[int] | None

    def summary_line(self) -> str:
        state = "feasible" if self.feasible else "INFEASIBLE"
        return (f"order {self.order}: matching {state} {self.graphs}/{self.slots}; "
                f"determined {self.determined}/{self.graphs}")


def match_values(reports: Sequence[BoundReport], values: Mapping[int, int]) -> list[int] | None:
    """Perfect matching of intervals onto the expanded value multiset, or None."""
    slots = [v for v in sorted(values) for _ in range(values[v])]
    if len(slots) != len(reports):
        return None
    rows, cols = [], []
    for i, r in enumerate(reports):
        for j, v in enumerate(slots):
            if r.contains(v):
                rows.append(i)
                cols.append(j)
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(reports), len(slots)))
    match = maximum_bipartite_matching(adj, perm_type="column")
    if np.any(match < 0):
        return None
    return [slots[j] for j in match]


def table_consistency(n: int, paper_multiset: Mapping[int, int], registry: Registry | None = None,
                      orders: Sequence[int] | None = None) -> TableVerdict:
    """Check that the bound intervals of all connected graphs of the given
    order(s) admit a perfect matching onto a value multiset."""
    orders = [n] if orders is None else list(orders)
    graphs = [g for k in orders for g in enumerate_connected(k)]
    total = sum(paper_multiset.values())
    if total != len(graphs):
        raise CountMismatch(f"{len(graphs)} graphs but the value multiset has {total} entries")
    reports = [bound(g, registry) for g in graphs]
    assignment = match_values(reports, paper_multiset)
    det = [r for r in reports if r.determined]
    need: dict[int, int] = {}
    for r in det:
        need[r.lo] = need.get(r.lo, 0) + 1
    det_ok = all(paper_multiset.get(v, 0) >= c for v, c in need.items())
    return TableVerdict(n, assignment is not None, len(graphs), total, len(det), det_ok, reports, assignment)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("graph-id", "q-lo", "q-hi", "determined", "provenance")


def reports_to_csv(reports: Sequence[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([r.label or to_graph6(r.graph), r.lo, r.hi, str(r.determined).lower(), r.provenance()])
    return buf.getvalue()


def reports_to_json(reports: Sequence[BoundReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True)
