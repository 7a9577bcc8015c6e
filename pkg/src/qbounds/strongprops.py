"""Strong Spectral and Strong Multiplicity Property verifiers, the
augmentation support check, witness records and the witness registry."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    MultiplicityMismatch,
    PatternMismatch,
    UnknownKey,
    VerificationFailed,
)
from .graphs import SPANNING_LIMIT, Graph, canonical_key, from_graph6, is_spanning_subgraph_of, to_graph6
from .spectra import (
    DEFAULT_PATTERN_TOL,
    DEFAULT_RANK_TOL,
    RankReport,
    SpectrumSummary,
    as_symmetric,
    eigensystem,
    in_pattern,
    is_orthogonal_witness,
    matrix_from_json,
    matrix_to_json,
    rank_report,
    rank_tol as _rank,
    summarize,
)


def non_edges(g: Graph) -> list[tuple[int, int]]:
    """Complement edges as 0-based index pairs, lexicographic."""
    return [
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if not g.has_edge(i + 1, j + 1)
    ]


def _check_pattern(a, g: Graph, pattern_tol: float) -> np.ndarray:
    m = as_symmetric(a)
    if not in_pattern(m, g, pattern_tol):
        raise PatternMismatch("matrix is not in S(G) for the given graph")
    return m


@dataclass(frozen=True)
class PropertyReport:
    holds: bool
    unknowns: int
    rank: RankReport


def ssp_verification_matrix(a, g: Graph) -> np.ndarray:
    """p x C(n,2) matrix whose columns are the complement-entries of
    A K_ij - K_ij A, with K_ij = E_ij - E_ji."""
    m = np.asarray(a, dtype=float)
    n = g.n
    comp = non_edges(g)
    rows = np.array([i for i, _ in comp], dtype=int)
    cols = np.array([j for _, j in comp], dtype=int)
    pairs = list(itertools.combinations(range(n), 2))
    out = np.zeros((len(comp), len(pairs)))
    for k, (i, j) in enumerate(pairs):
        kij = np.zeros((n, n))
        kij[i, j] = 1.0
        kij[j, i] = -1.0
        c = m @ kij - kij @ m
        out[:, k] = c[rows, cols]
    return out


def ssp_report(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL) -> PropertyReport:
    m = _check_pattern(a, g, pattern_tol)
    mat = ssp_verification_matrix(m, g)
    p = mat.shape[0]
    rr = rank_report(mat, rank_tol) if p else RankReport(0, None, None, 0.0)
    return PropertyReport(rr.rank == p, p, rr)


def has_ssp(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
            pattern_tol: float = DEFAULT_PATTERN_TOL) -> bool:
    return ssp_report(a, g, rank_tol, pattern_tol).holds


def _commutator_system(m: np.ndarray, g: Graph) -> np.ndarray:
    """Rows: upper-triangle entries of AX - XA; columns: the free entries of
    a symmetric X that vanishes on the diagonal and on the edges of g."""
    n = g.n
    comp = non_edges(g)
    iu = np.triu_indices(n, 1)
    out = np.zeros((len(iu[0]), len(comp)))
    for k, (i, j) in enumerate(comp):
        x = np.zeros((n, n))
        x[i, j] = x[j, i] = 1.0
        c = m @ x - x @ m
        out[:, k] = c[iu]
    return out


def ssp_direct(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL) -> PropertyReport:
    """SSP straight from the definition: no nonzero symmetric X with
    A o X = I o X = 0 commutes with A."""
    m = _check_pattern(a, g, pattern_tol)
    sys = _commutator_system(m, g)
    p = sys.shape[1]
    rr = rank_report(sys, rank_tol) if p else RankReport(0, None, None, 0.0)
    return PropertyReport(rr.rank == p, p, rr)


def smp_report(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL) -> PropertyReport:
    m = _check_pattern(a, g, pattern_tol)
    n = g.n
    comp = non_edges(g)
    p = len(comp)
    if p == 0:
        return PropertyReport(True, 0, RankReport(0, None, None, 0.0))
    comm = _commutator_system(m, g)
    # powers of A / rho keep the trace rows on the scale of the commutator
    # rows; rescaling a whole row never changes the exact rank
    rho = max(1.0, float(np.abs(np.linalg.eigvalsh(m)).max()))
    trace_rows = np.zeros((n, p))
    power = np.eye(n)
    for i in range(n):
        # tr(A^i X) = 2 * sum over free entries of (A^i)_{jk} x_jk
        for k, (r, c) in enumerate(comp):
            trace_rows[i, k] = 2.0 * power[r, c]
        power = power @ (m / rho)
    sys = np.vstack([comm, trace_rows * rho])
    rr = rank_report(sys, rank_tol)
    return PropertyReport(rr.rank == p, p, rr)


def has_smp(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
            pattern_tol: float = DEFAULT_PATTERN_TOL) -> bool:
    return smp_report(a, g, rank_tol, pattern_tol).holds


def eigenspace(a, lambda_index: int, gap: float | None = None) -> tuple[float, np.ndarray]:
    """(value, orthonormal basis) of the eigenspace of the lambda_index-th
    distinct eigenvalue (0-based, ascending)."""
    vals, vecs = eigensystem(a)
    summ = summarize(vals, gap)
    if not 0 <= lambda_index < summ.q:
        raise MultiplicityMismatch(f"eigenvalue index {lambda_index} out of range 0..{summ.q - 1}")
    start = sum(summ.ordered_mult[:lambda_index])
    k = summ.ordered_mult[lambda_index]
    return summ.values[lambda_index], vecs[:, start : start + k]


def augmentation_hypothesis(a, g: Graph, lambda_index: int, alpha: Iterable[int],
                            gap: float | None = None, rank_tol: float = DEFAULT_RANK_TOL,
                            basis: np.ndarray | None = None) -> bool:
    """Every nonzero eigenvector for the chosen eigenvalue meets alpha in at
    least two coordinates.  Tested as: the rows of an eigenbasis indexed by
    alpha minus any one vertex have full rank k."""
    alpha = sorted(set(alpha))
    if basis is None:
        _, basis = eigenspace(a, lambda_index, gap)
    k = basis.shape[1]
    if len(alpha) != k + 1:
        raise MultiplicityMismatch(f"|alpha| = {len(alpha)} but multiplicity is {k}; need k+1")
    for i in alpha:
        rows = [v - 1 for v in alpha if v != i]
        if _rank(basis[rows, :], rank_tol) < k:
            return False
    return True


# ---------------------------------------------------------------------------
# Witness records and registry
# ---------------------------------------------------------------------------

FLAG_NAMES = ("pattern", "ssp", "smp", "orthogonal")


def compute_flags(a, g: Graph, rank_tol: float = DEFAULT_RANK_TOL,
                  pattern_tol: float = DEFAULT_PATTERN_TOL) -> dict[str, bool]:
    pattern = in_pattern(a, g, pattern_tol)
    if not pattern:
        return {"pattern": False, "ssp": False, "smp": False, "orthogonal": False}
    ssp = has_ssp(a, g, rank_tol, pattern_tol)
    smp = True if ssp else has_smp(a, g, rank_tol, pattern_tol)
    return {
        "pattern": True,
        "ssp": ssp,
        "smp": smp,
        "orthogonal": is_orthogonal_witness(a, g),
    }


@dataclass
class WitnessRecord:
    id: str
    graph: Graph
    matrix: np.ndarray
    source: str
    verified: dict[str, bool] = field(default_factory=dict)
    summary: SpectrumSummary | None = None

    @property
    def q(self) -> int:
        return self.summary.q

    @property
    def rank(self) -> int:
        return _rank(self.matrix)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "graph6": to_graph6(self.graph),
            "matrix": matrix_to_json(self.matrix),
            "summary": self.summary.to_json() if self.summary else None,
            "flags": dict(self.verified),
            "source": self.source,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WitnessRecord":
        return cls(
            id=data["id"],
            graph=from_graph6(data["graph6"]),
            matrix=matrix_from_json(data["matrix"]),
            source=data.get("source", ""),
            verified={k: bool(v) for k, v in data.get("flags", {}).items()},
        )


def make_record(id: str, graph: Graph, matrix, source: str,
                claims: Iterable[str] = ("pattern",), gap: float | None = None) -> WitnessRecord:
    """Build a record with freshly computed flags; claimed flags must hold."""
    rec = WitnessRecord(id, graph, as_symmetric(matrix), source,
                        {name: True for name in claims})
    verify_record(rec, gap)
    return rec


def verify_record(rec: WitnessRecord, gap: float | None = None) -> WitnessRecord:
    """Recompute every flag and the spectrum summary; raise when a claimed
    flag does not hold."""
    if rec.matrix.shape != (rec.graph.n, rec.graph.n):
        raise VerificationFailed(f"{rec.id}: matrix shape does not match graph order")
    flags = compute_flags(rec.matrix, rec.graph)
    bad = [k for k, v in rec.verified.items() if v and not flags.get(k, False)]
    if bad:
        raise VerificationFailed(f"{rec.id}: claimed flags do not re-verify: {bad}")
    rec.verified = flags
    rec.summary = summarize(eigensystem(rec.matrix)[0], gap)
    return rec


class Registry:
    """Witness store keyed by the canonical form of the witness graph."""

    def __init__(self):
        self._by_key: dict[str, list[WitnessRecord]] = {}
        self._by_id: dict[str, WitnessRecord] = {}

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, rid: str) -> bool:
        return rid in self._by_id

    def register(self, rec: WitnessRecord, verify: bool = True) -> str:
        if verify:
            verify_record(rec)
        key = canonical_key(rec.graph)
        self._by_key.setdefault(key, []).append(rec)
        self._by_id[rec.id] = rec
        return key

    def get(self, rid: str) -> WitnessRecord:
        try:
            return self._by_id[rid]
        except KeyError:
            raise UnknownKey(f"no witness with id {rid!r}") from None

    def records(self) -> list[WitnessRecord]:
        return list(self._by_id.values())

    def lookup(self, g: Graph) -> list[WitnessRecord]:
        return list(self._by_key.get(canonical_key(g), []))

    def copy(self) -> "Registry":
        out = Registry()
        out._by_key = {k: list(v) for k, v in self._by_key.items()}
        out._by_id = dict(self._by_id)
        return out

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.records()]

    @classmethod
    def from_json(cls, data: list[dict] | str) -> "Registry":
        if isinstance(data, str):
            data = json.loads(data)
        reg = cls()
        for item in data:
            reg.register(WitnessRecord.from_json(item))
        return reg


def register_witness(rec: WitnessRecord, registry: Registry) -> None:
    registry.register(rec)


def lift_bound(g: Graph, registry: Registry) -> tuple[int, str] | None:
    """Smallest q over registered SMP witnesses on a spanning subgraph of g."""
    best = None
    for rec in registry.records():
        if rec.graph.n != g.n or not rec.verified.get("smp"):
            continue
        if best is not None and rec.q >= best[0]:
            continue
        if rec.graph.num_edges > g.num_edges:
            continue
        if g.n > SPANNING_LIMIT:
            if rec.graph.edges <= g.edges:
                best = (rec.q, rec.id)
            continue
        if is_spanning_subgraph_of(rec.graph, g) is not None:
            best = (rec.q, rec.id)
    return best
