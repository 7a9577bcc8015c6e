"""Command-line front end: ``qbounds <subcommand> ...``.

Exit codes: 0 ok, 1 usage or input error, 2 verification failure,
3 inconclusive search."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import bounds as bounds_mod
from . import catalog as catalog_mod
from . import constructions, search
from .errors import (
    CatalogCorrupt,
    HypothesisNotSatisfied,
    InfeasibleReport,
    QBoundsError,
    RealizationFailed,
    VerificationFailed,
)
from .graphs import Graph, complete_minus_edge, enumerate_connected, from_graph6, make_family, to_graph6
from .spectra import (
    DEFAULT_PATTERN_TOL,
    DEFAULT_RANK_TOL,
    as_symmetric,
    matrix_from_json,
    matrix_to_json,
    spectrum_summary,
)
from .strongprops import smp_report, ssp_report

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SEED_ENV = "QBOUNDS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def _add_graph_input(p: argparse.ArgumentParser, catalog: bool = True) -> None:
    p.add_argument("--g6", help="graph in graph6 format (default: read graph6 from stdin)")
    p.add_argument("--family", nargs="+", metavar=("NAME", "P"), help="named family and integer parameters")
    if catalog:
        p.add_argument("--catalog", metavar="KEY", help="catalog key such as G96 or M_96")


def _family_graph(spec: Sequence[str]) -> Graph:
    name, params = spec[0], [int(x) for x in spec[1:]]
    if name == "kn-minus-e":
        if len(params) != 1:
            raise UsageError("kn-minus-e takes one parameter")
        return complete_minus_edge(params[0])
    return make_family(name, params)


def _read_graph(args, stdin) -> tuple[Graph, str]:
    given = [x for x in (args.g6, args.family, getattr(args, "catalog", None)) if x]
    if len(given) > 1:
        raise UsageError("give exactly one of --g6, --family, --catalog")
    if args.g6:
        return from_graph6(args.g6), args.g6
    if args.family:
        try:
            params = [int(x) for x in args.family[1:]]
        except ValueError:
            raise UsageError("family parameters must be integers") from None
        return _family_graph(args.family), f"{args.family[0]}({','.join(map(str, params))})"
    if getattr(args, "catalog", None):
        cat = catalog_mod.load_catalog(augment=False)
        return cat.graph(args.catalog), catalog_mod.normalize_key(args.catalog)
    text = stdin.read().strip()
    if not text:
        raise UsageError("no graph given: use --g6, --family, --catalog or graph6 on stdin")
    return from_graph6(text.split()[0]), text.split()[0]


def _read_matrix(args, g: Graph) -> np.ndarray:
    if args.matrix:
        with open(args.matrix) as fh:
            data = json.load(fh)
        m = matrix_from_json(data) if data and isinstance(data[0][0], str) else np.array(data, dtype=float)
    else:
        m = g.adjacency_matrix()
    return as_symmetric(m)


def _graph_and_matrix(args, stdin) -> tuple[Graph, np.ndarray, str]:
    if getattr(args, "catalog", None) and not (args.g6 or args.family):
        key = catalog_mod.normalize_key(args.catalog)
        cat = catalog_mod.load_catalog(augment=key.startswith("aug-"))
        ent = cat.entry(key)
        if ent.record is not None:
            return ent.record.graph, ent.record.matrix, key
    g, label = _read_graph(args, stdin)
    return g, _read_matrix(args, g), label


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_bounds(args, out, stdin) -> int:
    g, label = _read_graph(args, stdin)
    reg = None if args.no_catalog else catalog_mod.load_catalog(augment=not args.no_augment).registry
    cands = [[int(x) for x in s.split(",")] for s in args.independent_set or []]
    rep = bounds_mod.bound(g, reg, label=label, candidates=cands, allow_disconnected=True)
    if args.format == "json":
        out.write(_dump(rep.to_json()) + "\n")
    elif args.format == "csv":
        out.write(bounds_mod.reports_to_csv([rep]))
    else:
        out.write(f"{label}: q in [{rep.lo}, {rep.hi}]  {rep.provenance()}\n")
        for c in rep.contributions:
            out.write(f"  {c.direction:5s} {c.value:3d}  {c.rule}: {c.detail}\n")
    return EXIT_OK


def _cmd_construct(args, out, stdin) -> int:
    res = constructions.build(args.key, args.params, seed=args.seed)
    summ = spectrum_summary(res.matrix, args.gap)
    payload = {
        "construction": res.citation,
        "graph6": to_graph6(res.graph),
        "n": res.graph.n,
        "claimed_q_upper": res.claimed_q_upper,
        "q": summ.q,
        "ordered_multiplicities": list(summ.ordered_mult),
        "distinct_eigenvalues": [float(f"{v:.12g}") for v in summ.values],
        "matrix": matrix_to_json(res.matrix),
    }
    if args.format == "json":
        out.write(_dump(payload) + "\n")
    else:
        out.write(f"{res.citation}: n={res.graph.n} q={summ.q} <= {res.claimed_q_upper} "
                  f"m={list(summ.ordered_mult)} graph6={payload['graph6']}\n")
    return EXIT_OK


def _cmd_search(args, out, stdin) -> int:
    g, label = _read_graph(args, stdin)
    if (args.spectrum is None) == (args.mult is None):
        raise UsageError("give exactly one of --spectrum or --mult")
    task = search.RealizationTask(g, spectrum=args.spectrum, mult=args.mult, require_ssp=args.ssp,
                                  seed=args.seed, starts=args.starts, iterations=args.iterations)
    res = search.realize_detailed(task)
    payload = {"graph": label, "graph6": to_graph6(g), "success": res.success,
               "starts_tried": res.starts_tried, "seed": args.seed}
    if res.success:
        summ = spectrum_summary(res.matrix, args.gap)
        payload.update(matrix=matrix_to_json(res.matrix), ordered_multiplicities=list(summ.ordered_mult),
                       distinct_eigenvalues=[float(f"{v:.12g}") for v in summ.values])
    if args.format == "json":
        out.write(_dump(payload) + "\n")
    else:
        state = "found" if res.success else "inconclusive (no matrix found; not a proof of nonexistence)"
        out.write(f"{label}: {state} after {res.starts_tried} starts\n")
    return EXIT_OK if res.success else EXIT_INCONCLUSIVE


def _cmd_property(args, out, stdin, which: str) -> int:
    g, m, label = _graph_and_matrix(args, stdin)
    fn = ssp_report if which == "ssp" else smp_report
    rep = fn(m, g, args.rank_tol, args.pattern_tol)
    name = which.upper()
    if args.format == "json":
        out.write(_dump({"input": label, name.lower(): rep.holds, "unknowns": rep.unknowns,
                         "rank": rep.rank.rank, "threshold": rep.rank.threshold}) + "\n")
    else:
        out.write(f"{name}: {str(rep.holds).lower()}\n")
    return EXIT_OK


def _cmd_augment(args, out, stdin) -> int:
    g, m, label = _graph_and_matrix(args, stdin)
    alpha = [int(x) for x in args.alpha.split(",")]
    res = search.augment(m, g, args.lambda_index, alpha, seed=args.seed, starts=args.starts,
                         strict=not args.no_strict)
    if res is None:
        out.write(_dump({"input": label, "success": False}) + "\n" if args.format == "json"
                  else f"{label}: augmentation inconclusive\n")
        return EXIT_INCONCLUSIVE
    mat, h = res
    summ = spectrum_summary(mat, args.gap)
    payload = {"input": label, "success": True, "graph6": to_graph6(h),
               "ordered_multiplicities": list(summ.ordered_mult), "matrix": matrix_to_json(mat)}
    if args.format == "json":
        out.write(_dump(payload) + "\n")
    else:
        out.write(f"{label}: augmented to {payload['graph6']} with m={list(summ.ordered_mult)}, SSP verified\n")
    return EXIT_OK


def _cmd_catalog_verify(args, out, stdin) -> int:
    lines = catalog_mod.verify_catalog()
    if args.format == "json":
        out.write(_dump([{"check": l.name, "ok": l.ok, "detail": l.detail} for l in lines]) + "\n")
    else:
        for l in lines:
            out.write(l.render() + "\n")
    return EXIT_OK if all(l.ok for l in lines) else EXIT_VERIFY


def _cmd_tables(args, out, stdin) -> int:
    cat = catalog_mod.load_catalog()
    ok = True
    if args.families:
        results = catalog_mod.family_table(cat, seed=args.seed)
        if args.format == "json":
            out.write(_dump([{"family": r.row.family, "graph": r.row.label, "expected": r.row.value,
                              "lo": r.report.lo if r.report else None,
                              "hi": r.report.hi if r.report else None,
                              "ok": r.ok, "error": r.error} for r in results]) + "\n")
        else:
            for r in results:
                out.write(r.line() + "\n")
            out.write(f"families: {sum(r.ok for r in results)}/{len(results)} rows match\n")
        return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY
    if args.order is None:
        raise UsageError("tables needs --order N or --families")
    if args.order <= 5:
        verdict = catalog_mod.small_order_table(cat, orders=range(1, args.order + 1))
        named = []
    elif args.order == 6:
        verdict, named = catalog_mod.order_six_table(cat)
    else:
        raise UsageError("tabulated values exist for orders 1..6 only")
    ok = verdict.feasible and verdict.determined_consistent and all(c.ok for c in named)
    if args.format == "csv":
        out.write(bounds_mod.reports_to_csv(verdict.reports))
    elif args.format == "json":
        out.write(_dump({
            "order": args.order,
            "matching_feasible": verdict.feasible,
            "graphs": verdict.graphs,
            "determined": verdict.determined,
            "reports": [r.to_json() for r in verdict.reports],
            "named": [{"key": c.key, "value": c.value, "lo": c.report.lo, "hi": c.report.hi,
                       "ok": c.ok} for c in named],
        }) + "\n")
    else:
        state = "feasible" if verdict.feasible else "INFEASIBLE"
        out.write(f"matching {state}: {verdict.graphs}/{verdict.slots}; "
                  f"determined {verdict.determined}/{verdict.graphs}\n")
        if named:
            good = [c.key for c in named if c.ok]
            out.write(f"named graphs verified: {len(good)}/{len(named)}: {', '.join(good)}\n")
            for c in named:
                if not c.ok:
                    out.write(f"  FAIL {c.key}: value {c.value}, interval [{c.report.lo},{c.report.hi}]\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_enumerate(args, out, stdin) -> int:
    graphs = enumerate_connected(args.order)
    if args.format == "json":
        out.write(_dump([to_graph6(g) for g in graphs]) + "\n")
    else:
        for g in graphs:
            out.write(to_graph6(g) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbounds", description="Bounds on the minimum number of distinct eigenvalues of a graph.")
    p.add_argument("--gap", type=float, default=None, help="eigenvalue clustering gap")
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--pattern-tol", type=float, default=DEFAULT_PATTERN_TOL)
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, default):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default)

    sp = sub.add_parser("bounds", help="certified interval for q(G)")
    _add_graph_input(sp)
    sp.add_argument("--no-catalog", action="store_true", help="do not use the shipped witnesses")
    sp.add_argument("--no-augment", action="store_true", help="skip the search-built catalog witnesses")
    sp.add_argument("--independent-set", action="append", metavar="V,V,...",
                    help="candidate independent set to test (repeatable)")
    fmt(sp, "json")

    sp = sub.add_parser("construct", help="run an explicit construction")
    sp.add_argument("key", choices=constructions.CONSTRUCTION_KEYS)
    sp.add_argument("params", nargs="*", type=int)
    fmt(sp, "json")

    sp = sub.add_parser("search", help="numeric realisation of a spectrum or multiplicity list")
    _add_graph_input(sp)
    sp.add_argument("--spectrum", nargs="+", type=float)
    sp.add_argument("--mult", nargs="+", type=int)
    sp.add_argument("--ssp", action="store_true", help="require SSP")
    sp.add_argument("--starts", type=int, default=search.DEFAULT_STARTS)
    sp.add_argument("--iterations", type=int, default=search.DEFAULT_ITERATIONS)
    fmt(sp, "json")

    for name in ("ssp", "smp"):
        sp = sub.add_parser(name, help=f"test the {name.upper()} of a matrix (adjacency matrix by default)")
        _add_graph_input(sp)
        sp.add_argument("--matrix", help="JSON file with the matrix rows")
        fmt(sp, "text")

    sp = sub.add_parser("augment", help="add a vertex and raise one eigenvalue multiplicity")
    _add_graph_input(sp)
    sp.add_argument("--matrix", help="JSON file with the matrix rows")
    sp.add_argument("--lambda-index", type=int, required=True, help="0-based index of the distinct eigenvalue")
    sp.add_argument("--alpha", required=True, help="comma-separated neighbours of the new vertex")
    sp.add_argument("--starts", type=int, default=40)
    sp.add_argument("--no-strict", action="store_true", help="do not require SSP of the input matrix")
    fmt(sp, "json")

    sp = sub.add_parser("catalog-verify", help="re-run the catalog load-time checks")
    fmt(sp, "text")

    sp = sub.add_parser("tables", help="reproduce the small-order and family tables")
    sp.add_argument("--order", type=int)
    sp.add_argument("--families", action="store_true", help="family formulas at desk scale")
    fmt(sp, "text")

    sp = sub.add_parser("enumerate", help="connected graphs of a given order, one graph6 per line")
    sp.add_argument("--order", type=int, required=True)
    fmt(sp, "text")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None, stdin=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        cmd = args.command
        if cmd == "bounds":
            return _cmd_bounds(args, out, stdin)
        if cmd == "construct":
            return _cmd_construct(args, out, stdin)
        if cmd == "search":
            return _cmd_search(args, out, stdin)
        if cmd in ("ssp", "smp"):
            return _cmd_property(args, out, stdin, cmd)
        if cmd == "augment":
            return _cmd_augment(args, out, stdin)
        if cmd == "catalog-verify":
            return _cmd_catalog_verify(args, out, stdin)
        if cmd == "tables":
            return _cmd_tables(args, out, stdin)
        return _cmd_enumerate(args, out, stdin)
    except UsageError as exc:
        err.write(f"qbounds: error: {exc}\n")
        return EXIT_USAGE
    except RealizationFailed as exc:
        err.write(f"qbounds: inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except (VerificationFailed, CatalogCorrupt, InfeasibleReport, HypothesisNotSatisfied) as exc:
        err.write(f"qbounds: verification failed: {exc}\n")
        return EXIT_VERIFY
    except (QBoundsError, OSError, ValueError) as exc:
        err.write(f"qbounds: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
