"""Shipped reference data: the explicit witness matrices, the named small
graphs, the tabulated values of q for orders up to 6, and the family
formulas.  Everything is re-verified when loaded."""

from __future__ import annotations

import ast
import functools
import json
import math
import operator
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Mapping

import numpy as np

from . import constructions, search
from .bounds import BoundReport, TableVerdict, bound, table_consistency
from .errors import CatalogCorrupt, QBoundsError, UnknownKey, VerificationFailed
from .graphs import (
    Graph,
    check_independent_set,
    complete_minus_edge,
    cycle,
    hypercube,
    independent_set_violation,
    is_isomorphic,
    join,
    make_family,
    path,
    product,
    complete,
)
from .spectra import eigensystem, summarize
from .strongprops import (
    Registry,
    WitnessRecord,
    has_smp,
    has_ssp,
    make_record,
    ssp_direct,
)

# ---------------------------------------------------------------------------
# Closed-form expression evaluation
# ---------------------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"sqrt": math.sqrt}


def evaluate(expr: str | int | float, symbols: Mapping[str, float] | None = None) -> float:
    """Evaluate an arithmetic expression with sqrt and named symbols.
    Anything else (attribute access, calls other than sqrt) is rejected."""
    if isinstance(expr, (int, float)):
        return float(expr)
    symbols = symbols or {}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Name) and node.id in symbols:
            return float(symbols[node.id])
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise CatalogCorrupt(f"unsupported expression element in {expr!r}")

    try:
        tree = ast.parse(str(expr), mode="eval")
    except SyntaxError as exc:
        raise CatalogCorrupt(f"cannot parse {expr!r}") from exc
    return ev(tree)


def _matrix_from_exprs(rows, symbol_exprs: Mapping[str, str] | None) -> np.ndarray:
    symbols: dict[str, float] = {}
    for name, e in (symbol_exprs or {}).items():
        symbols[name] = evaluate(e, symbols)
    return np.array([[evaluate(x, symbols) for x in row] for row in rows], dtype=float)


# ---------------------------------------------------------------------------
# Catalog types
# ---------------------------------------------------------------------------

SPECTRUM_TOL = 1e-8


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    kind: str  # "matrix", "graph" or "value"
    provenance: str
    graph: Graph | None = None
    record: WitnessRecord | None = None
    value: int | None = None


@dataclass
class CheckLine:
    name: str
    ok: bool
    detail: str = ""

    def render(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


@dataclass
class Catalog:
    registry: Registry
    graphs: dict[str, Graph]
    graph_sources: dict[str, str]
    values: dict[str, dict]
    reasons: dict[str, str]
    expected_spectra: dict[str, list[float]]
    independent_sets: dict[str, list[int]]
    raw: dict = field(repr=False, default_factory=dict)

    def entry(self, key: str) -> CatalogEntry:
        k = normalize_key(key)
        if k in self.registry:
            rec = self.registry.get(k)
            return CatalogEntry(k, "matrix", rec.source, rec.graph, rec)
        if k in self.graphs:
            val = self.values.get(k, {}).get("q")
            return CatalogEntry(k, "graph", self.graph_sources[k], self.graphs[k], None, val)
        if k in self.values:
            v = self.values[k]
            return CatalogEntry(k, "value", self.reasons.get(v["reason"], v["reason"]), None, None, v["q"])
        raise UnknownKey(f"no catalog entry {key!r}")

    def graph(self, key: str) -> Graph:
        ent = self.entry(key)
        if ent.graph is None:
            raise UnknownKey(f"catalog entry {key!r} has no graph")
        return ent.graph

    def value_multiset(self, order: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.values.values():
            if v["order"] == order:
                out[v["q"]] = out.get(v["q"], 0) + 1
        return out

    def identified_keys(self) -> list[str]:
        """Graph keys with a pinned structure and a tabulated value."""
        return sorted((k for k in self.graphs if k in self.values), key=_key_order)


def normalize_key(key: str) -> str:
    """Accept "M_96"-style spellings and "Table4:G187"-style prefixes."""
    k = key.strip()
    if ":" in k:
        k = k.split(":", 1)[1]
    return k.replace("_", "")


def _key_order(key: str):
    digits = "".join(ch for ch in key if ch.isdigit())
    return (key.rstrip("0123456789"), int(digits) if digits else -1, key)


def _graph_from_spec(spec: dict) -> Graph:
    if "edges" in spec:
        n = max(max(e) for e in spec["edges"])
        return Graph.from_edges(n, [tuple(e) for e in spec["edges"]])
    if "family" in spec:
        kind, params = spec["family"]
        if kind == "kn-minus-e":
            return complete_minus_edge(params[0])
        return make_family(kind, params)
    if "product" in spec:
        kind, left, right = spec["product"]
        return product(kind, make_family(*left), make_family(*right))
    raise CatalogCorrupt(f"graph spec without edges, family or product: {spec}")


def _raw_data() -> dict:
    text = resources.files("qbounds").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def _check_spectrum(rec: WitnessRecord, expected: list[float]) -> None:
    got = eigensystem(rec.matrix)[0]
    if np.abs(np.sort(got) - np.sort(expected)).max() > SPECTRUM_TOL:
        raise CatalogCorrupt(f"{rec.id}: spectrum {np.round(got, 9).tolist()} differs from the recorded one")


def _augmented_record(item: dict, base: WitnessRecord, graph: Graph, seed: int) -> WitnessRecord:
    out = search.augment(base.matrix, base.graph, item["lambda_index"], item["alpha"],
                         seed=seed, strict=item.get("strict", True))
    if out is None:
        raise CatalogCorrupt(f"{item['id']}: augmentation search was inconclusive")
    mat, h = out
    if not is_isomorphic(h, graph):
        raise CatalogCorrupt(f"{item['id']}: augmented graph differs from the recorded graph")
    rec = make_record(item["id"], h, mat, f"augmentation of {base.id}", ("pattern", "ssp"))
    if rec.summary.ordered_mult != tuple(item["mult"]):
        raise CatalogCorrupt(f"{item['id']}: multiplicities {rec.summary.ordered_mult} != {item['mult']}")
    return rec


def _build(data: dict, augment: bool) -> Catalog:
    graphs = {k: _graph_from_spec(v) for k, v in data["graphs"].items()}
    sources = {k: v.get("source", "") for k, v in data["graphs"].items()}
    reg = Registry()
    expected: dict[str, list[float]] = {}
    try:
        for item in data["matrices"]:
            mat = _matrix_from_exprs(item["entries"], item.get("symbols"))
            g = graphs[item["graph"]]
            rec = make_record(item["id"], g, mat, f"explicit matrix for {item['graph']}", item["claims"])
            spec = [evaluate(x) for x in item["spectrum"]]
            _check_spectrum(rec, spec)
            expected[rec.id] = spec
            reg.register(rec, verify=False)
        fc = data["flipped_cycles"]
        for s in range(fc["min"], fc["max"] + 1):
            rid = f"flipped-C{s}"
            rec = make_record(rid, cycle(s), constructions.flipped_cycle_matrix(s),
                              "flipped cycle", fc["claims"])
            spec = sorted(2 * math.cos(math.pi * (2 * j - 1) / s) for j in range(1, s + 1))
            _check_spectrum(rec, spec)
            expected[rid] = spec
            reg.register(rec, verify=False)
        for key, params in data.get("family_witnesses", []):
            res = constructions.build(key, params, seed=data.get("augment_seed", 0))
            rid = f"{key}{tuple(params)}".replace(" ", "")
            rec = make_record(rid, res.graph, res.matrix, res.citation)
            reg.register(rec, verify=False)
        if augment:
            for item in data["augmented"]:
                base = reg.get(item["base"])
                rec = _augmented_record(item, base, graphs[item["graph"]], data.get("augment_seed", 0))
                reg.register(rec, verify=False)
    except (QBoundsError, KeyError) as exc:
        if isinstance(exc, CatalogCorrupt):
            raise
        raise CatalogCorrupt(str(exc)) from exc
    indep = {k: v["independent_set"] for k, v in data["graphs"].items() if "independent_set" in v}
    return Catalog(reg, graphs, sources, data["values"], data["reasons"], expected, indep, data)


@functools.lru_cache(maxsize=4)
def _cached(augment: bool) -> Catalog:
    return _build(_raw_data(), augment)


def load_catalog(augment: bool = True) -> Catalog:
    """Load and verify the shipped catalog.  With ``augment`` the three
    augmented witnesses are produced by search (fixed seed).  Callers get a
    catalog whose registry they may extend freely."""
    cat = _cached(augment)
    return Catalog(cat.registry.copy(), dict(cat.graphs), dict(cat.graph_sources), cat.values,
                   cat.reasons, cat.expected_spectra, cat.independent_sets, cat.raw)


def reference_value(key: str) -> tuple[int, str]:
    """(q, reason) as tabulated for a graph key such as "G96"."""
    k = normalize_key(key)
    values = _raw_data()["values"]
    if k not in values:
        raise UnknownKey(f"no tabulated value for {key!r}")
    v = values[k]
    reason = v["reason"]
    if v.get("asserted"):
        reason += " (asserted, not re-derived)"
    return v["q"], reason


# ---------------------------------------------------------------------------
# Conformance report
# ---------------------------------------------------------------------------

def verify_catalog(catalog: Catalog | None = None) -> list[CheckLine]:
    """Re-run every load-time check and the dual-route property checks."""
    start = time.perf_counter()
    lines: list[CheckLine] = []
    try:
        cat = catalog if catalog is not None else _build(_raw_data(), augment=False)
    except CatalogCorrupt as exc:
        return [CheckLine("load", False, str(exc))]
    for rec in cat.registry.records():
        if rec.id in cat.expected_spectra:
            got = np.sort(eigensystem(rec.matrix)[0])
            err = float(np.abs(got - np.sort(cat.expected_spectra[rec.id])).max())
            lines.append(CheckLine(f"{rec.id} spectrum", err <= SPECTRUM_TOL,
                                   f"m={list(rec.summary.ordered_mult)} max error {err:.1e}"))
        ssp = has_ssp(rec.matrix, rec.graph)
        direct = ssp_direct(rec.matrix, rec.graph).holds
        lines.append(CheckLine(f"{rec.id} ssp routes agree", ssp == direct, f"ssp={str(ssp).lower()}"))
        smp = has_smp(rec.matrix, rec.graph)
        lines.append(CheckLine(f"{rec.id} ssp implies smp", smp or not ssp, f"smp={str(smp).lower()}"))
        if rec.verified.get("orthogonal"):
            dev = float(np.abs(rec.matrix @ rec.matrix - np.eye(rec.graph.n)).max())
            lines.append(CheckLine(f"{rec.id} orthogonal", dev <= 1e-8, f"max |M^2 - I| {dev:.1e}"))
    keys = cat.identified_keys()
    clash = [(a, b) for i, a in enumerate(keys) for b in keys[i + 1:]
             if is_isomorphic(cat.graphs[a], cat.graphs[b])]
    lines.append(CheckLine("identified graphs pairwise non-isomorphic", not clash,
                           f"{len(keys)} graphs" + (f", clashes {clash}" if clash else "")))
    for key, s in cat.independent_sets.items():
        g = cat.graphs[key]
        bad, union = check_independent_set(g, s)
        lines.append(CheckLine(f"{key} independent-set obstruction", bad,
                               f"set {s}, common-neighbour union {sorted(union)}"))
    lines.append(CheckLine("runtime", True, f"{time.perf_counter() - start:.2f} s"))
    return lines


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

@dataclass
class NamedCheck:
    key: str
    value: int
    report: BoundReport
    constructive: bool

    @property
    def ok(self) -> bool:
        if self.constructive:
            return self.report.lo == self.report.hi == self.value
        return self.report.contains(self.value)


# graphs whose value comes with an explicit witness on the graph itself or
# on a spanning subgraph
CONSTRUCTIVE_KEYS = frozenset({
    "G96", "G174", "G186", "G125", "G129", "G190",
    "G77", "G92", "G117", "G191",
})


def small_order_table(catalog: Catalog | None = None, orders: Iterable[int] = (1, 2, 3, 4, 5)) -> TableVerdict:
    cat = catalog or load_catalog()
    orders = list(orders)
    values: dict[int, int] = {}
    for k in orders:
        for v, c in cat.value_multiset(k).items():
            values[v] = values.get(v, 0) + c
    return table_consistency(orders[-1], values, cat.registry, orders=orders)


def named_checks(catalog: Catalog | None = None) -> list[NamedCheck]:
    cat = catalog or load_catalog()
    out = []
    for key in cat.identified_keys():
        g = cat.graphs[key]
        if g.n != 6:
            continue
        cands = [cat.independent_sets[key]] if key in cat.independent_sets else ()
        rep = bound(g, cat.registry, label=key, candidates=cands)
        out.append(NamedCheck(key, cat.values[key]["q"], rep, key in CONSTRUCTIVE_KEYS))
    return out


def order_six_table(catalog: Catalog | None = None) -> tuple[TableVerdict, list[NamedCheck]]:
    cat = catalog or load_catalog()
    verdict = table_consistency(6, cat.value_multiset(6), cat.registry)
    return verdict, named_checks(cat)


# ---------------------------------------------------------------------------
# Family formulas at desk scale
# ---------------------------------------------------------------------------

@dataclass
class FamilyRow:
    family: str
    label: str
    graph: Graph
    value: int
    witness: Callable[[], tuple[np.ndarray, str]] | None = None
    exact: bool = True  # False: only require the interval to contain value


@dataclass
class FamilyResult:
    row: FamilyRow
    report: BoundReport | None
    error: str = ""

    @property
    def ok(self) -> bool:
        if self.report is None:
            return False
        if self.row.exact:
            return self.report.lo == self.report.hi == self.row.value
        return self.report.contains(self.row.value)

    def line(self) -> str:
        if self.report is None:
            return f"FAIL {self.row.label}: expected {self.row.value}; {self.error}"
        return (f"{'PASS' if self.ok else 'FAIL'} {self.row.label}: expected {self.row.value}, "
                f"interval [{self.report.lo},{self.report.hi}] {self.report.provenance()}")


def _c(res: constructions.ConstructionResult) -> tuple[np.ndarray, str]:
    return res.matrix, res.citation


def _size_lists(s_max: int, n_max: int, ordered: bool) -> list[tuple[int, ...]]:
    import itertools

    out = []
    for s in range(2, s_max + 1):
        if ordered:
            lists = itertools.product(range(2, n_max + 1), repeat=s)
            out.extend(l for l in lists if l <= l[::-1])
        else:
            out.extend(itertools.combinations_with_replacement(range(2, n_max + 1), s))
    return out


def _symmetric_c5(seed: int) -> tuple[np.ndarray, str]:
    # C_5 witness with distinct eigenvalues {-1, 0, 1}
    task = search.RealizationTask(cycle(5), spectrum=[-1, 0, 0, 1, 1], seed=seed, starts=50)
    m = search.realize(task)
    if m is None:
        raise VerificationFailed("no symmetric-spectrum C_5 witness found")
    return _c(constructions.c4_cartesian_witness(m, cycle(5)))


def _hypercube_witness(seed: int) -> tuple[np.ndarray, str]:
    task = search.RealizationTask(hypercube(3), spectrum=[-1] * 4 + [1] * 4, seed=seed, starts=50)
    m = search.realize(task)
    if m is None:
        raise VerificationFailed("no two-eigenvalue Q_3 witness found")
    return m, "realized-hypercube"


def family_rows(seed: int = 0) -> list[FamilyRow]:
    rows: list[FamilyRow] = []
    for n in range(2, 9):
        rows.append(FamilyRow("K_n", f"K_{n}", complete(n), 2, lambda n=n: _c(constructions.complete_witness(n))))
    for n in range(3, 13):
        rows.append(FamilyRow("C_n", f"C_{n}", cycle(n), math.ceil(n / 2),
                              lambda n=n: _c(constructions.flipped_cycle(n))))
    for n in range(1, 9):
        rows.append(FamilyRow("P_n", f"P_{n}", path(n), n))
    for m in range(1, 6):
        for n in range(m, 6):
            rows.append(FamilyRow("K_mn", f"K_{m},{n}", make_family("complete-bipartite", [m, n]),
                                  2 if m == n else 3,
                                  lambda m=m, n=n: _c(constructions.complete_bipartite_witness(m, n))))
    rows.append(FamilyRow("Q_d", "Q_1", hypercube(1), 2))
    rows.append(FamilyRow("Q_d", "Q_2", hypercube(2), 2))
    rows.append(FamilyRow("Q_d", "Q_3", hypercube(3), 2, lambda: _hypercube_witness(seed)))
    rows.append(FamilyRow("Q_d", "Q_4", hypercube(4), 2, exact=False))
    for n in range(3, 9):
        for k in range(0, n - 2):
            rows.append(FamilyRow("GB", f"GB({k},{n - k - 3})", make_family("genbull", [k, n - k - 3]), n - 1))
    for n in range(4, 9):
        for k in range(2, n - 1):
            if k - 1 <= n - k - 1:
                rows.append(FamilyRow("S", f"S({k - 1},{n - k - 1},1)",
                                      make_family("genstar", [k - 1, n - k - 1]), n - 1))
    for sizes in _size_lists(4, 4, ordered=True):
        rows.append(FamilyRow("KP", f"KP{sizes}", make_family("cliquepath", list(sizes)), len(sizes) + 1,
                              lambda s=sizes: _c(constructions.clique_path_matrix(s))))
    for sizes in _size_lists(4, 4, ordered=False):
        rows.append(FamilyRow("KS", f"KS{sizes}", make_family("cliquestar", list(sizes)), 3,
                              lambda s=sizes: _c(constructions.clique_star_matrix(s))))
    for s in range(2, 7):
        rows.append(FamilyRow("P_s box P_2", f"P_{s} box P_2", product("cartesian", path(s), path(2)), s))
    for s in range(1, 4):
        rows.append(FamilyRow("C_4 box P_2s", f"C_4 box P_{2 * s}", product("cartesian", cycle(4), path(2 * s)),
                              2 * s, lambda s=s: _c(constructions.c4_cartesian_witness(
                                  path(2 * s).adjacency_matrix(), path(2 * s)))))
    for s in (4, 5, 8):
        if s % 2 == 0:
            wit = lambda s=s: _c(constructions.c4_cartesian_witness(constructions.flipped_cycle_matrix(s), cycle(s)))
        else:
            wit = lambda: _symmetric_c5(seed)
        rows.append(FamilyRow("C_4 box C_s", f"C_4 box C_{s}", product("cartesian", cycle(4), cycle(s)),
                              math.ceil(s / 2), wit))
    for s in range(2, 7):
        rows.append(FamilyRow("P_s x P_2", f"P_{s} x P_2", product("tensor", path(s), path(2)), s,
                              lambda s=s: (np.kron(path(s).adjacency_matrix(), path(2).adjacency_matrix()),
                                           "tensor-path")))
    for s in range(2, 6):
        rows.append(FamilyRow("C_4 x P_s", f"C_4 x P_{s}", product("tensor", cycle(4), path(s)), s,
                              lambda s=s: _c(constructions.c4_tensor_witness(path(s).adjacency_matrix(), path(s)))))
    rows.append(FamilyRow("P_3 strong P_3", "P_3 strong P_3", product("strong", path(3), path(3)), 3,
                          lambda: _c(constructions.build("strong-p3-p3", []))))
    for s in range(2, 8):
        rows.append(FamilyRow("P_s join K_1", f"P_{s} join K_1", join(path(s), complete(1)), math.ceil((s + 1) / 2)))
    for n in range(4, 8):
        rows.append(FamilyRow("K_n - e", f"K_{n} - e", complete_minus_edge(n), 2,
                              lambda n=n: _c(constructions.kn_minus_e_witness(n, seed))))
    return rows


def family_table(catalog: Catalog | None = None, seed: int = 0,
                 families: Iterable[str] | None = None) -> list[FamilyResult]:
    """Bound every desk-scale family member, registering its witness first."""
    cat = catalog or load_catalog()
    reg = cat.registry.copy()
    wanted = None if families is None else set(families)
    out = []
    for row in family_rows(seed):
        if wanted is not None and row.family not in wanted:
            continue
        try:
            if row.witness is not None:
                mat, cite = row.witness()
                reg.register(make_record(f"{cite}:{row.label}", row.graph, mat, cite))
            rep = bound(row.graph, reg, label=row.label, allow_disconnected=True)
            out.append(FamilyResult(row, rep))
        except QBoundsError as exc:
            out.append(FamilyResult(row, None, f"{type(exc).__name__}: {exc}"))
    return out


def independent_set_checks(catalog: Catalog | None = None) -> list[tuple[str, tuple | None]]:
    """The obstruction on the three figure graphs and on Q_5 join P_2."""
    cat = catalog or load_catalog(augment=False)
    out = []
    for key in ("G161", "G170", "G179"):
        g = cat.graphs[key]
        out.append((key, independent_set_violation(g, candidate=cat.independent_sets[key])))
    g = join(hypercube(5), path(2))
    out.append(("Q_5 join P_2", independent_set_violation(g)))
    return out
