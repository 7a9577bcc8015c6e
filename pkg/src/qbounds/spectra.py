"""Dense symmetric linear algebra: eigensolver, eigenvalue clustering,
pattern checks, Kronecker products, tolerant rank and interlacing."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, InvalidParams
from .graphs import Graph

# Symmetric matrices are plain float ndarrays; this alias documents intent.
SymMatrix = np.ndarray

DEFAULT_GAP = 1e-7
DEFAULT_PATTERN_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-8


def as_symmetric(a, tol: float = 1e-12) -> SymMatrix:
    """Validate near-symmetry and return the exactly symmetrised float copy."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > tol * scale:
        raise InvalidParams("matrix is not symmetric")
    return (m + m.T) / 2


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------

def eigensystem(a, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition.  Returns ascending eigenvalues and
    orthonormal eigenvectors as columns."""
    m = as_symmetric(a)
    n = m.shape[0]
    v = np.eye(n)
    if n == 0:
        return np.zeros(0), v
    fro = float(np.linalg.norm(m))
    if fro == 0.0:
        return np.zeros(n), v
    tiny = 1e-300
    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(m - np.diag(np.diag(m))))
        if off <= 1e-15 * fro:
            break
        if sweep == max_sweeps:
            raise ConvergenceFailure("Jacobi sweeps did not converge", sweep)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= 1e-18 * fro or abs(apq) < tiny:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = m[:, p].copy()
                cq = m[:, q].copy()
                m[:, p] = c * cp - s * cq
                m[:, q] = s * cp + c * cq
                rp = m[p, :].copy()
                rq = m[q, :].copy()
                m[p, :] = c * rp - s * rq
                m[q, :] = s * rp + c * rq
                m[p, q] = m[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    vals = np.diag(m).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def eigenvalues(a) -> np.ndarray:
    return eigensystem(a)[0]


# ---------------------------------------------------------------------------
# Clustering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumSummary:
    eigenvalues: tuple[float, ...]
    clusters: tuple[tuple[float, int], ...]
    tolerance_used: float

    @property
    def values(self) -> list[float]:
        return [c[0] for c in self.clusters]

    @property
    def ordered_mult(self) -> tuple[int, ...]:
        return tuple(c[1] for c in self.clusters)

    @property
    def q(self) -> int:
        return len(self.clusters)

    def multiplicity_of(self, value: float, tol: float | None = None) -> int:
        tol = self.tolerance_used if tol is None else tol
        return sum(m for v, m in self.clusters if abs(v - value) <= tol)

    def to_json(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "values": [float(v) for v in self.values],
            "ordered_mult": list(self.ordered_mult),
            "q": self.q,
            "tolerance_used": self.tolerance_used,
        }


def default_gap(eigs: Sequence[float]) -> float:
    radius = max((abs(x) for x in eigs), default=0.0)
    return DEFAULT_GAP * max(1.0, radius)


def summarize(eigs: Iterable[float], gap: float | None = None) -> SpectrumSummary:
    """Greedy left-to-right clustering of a spectrum: a new cluster starts
    whenever consecutive sorted eigenvalues differ by more than ``gap``."""
    vals = sorted(float(x) for x in eigs)
    if gap is None:
        gap = default_gap(vals)
    if gap <= 0:
        raise InvalidParams("clustering gap must be positive")
    groups: list[list[float]] = []
    for x in vals:
        if groups and x - groups[-1][-1] <= gap:
            groups[-1].append(x)
        else:
            groups.append([x])
    clusters = tuple((sum(g) / len(g), len(g)) for g in groups)
    return SpectrumSummary(tuple(vals), clusters, gap)


def spectrum_summary(a, gap: float | None = None) -> SpectrumSummary:
    return summarize(eigenvalues(a), gap)


def q_of(a, gap: float | None = None) -> int:
    return spectrum_summary(a, gap).q


def same_distinct_values(a: Sequence[float], b: Sequence[float], tol: float) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(sorted(a), sorted(b)))


def is_symmetric_spectrum(values: Sequence[float], tol: float = 1e-7) -> bool:
    """True when the set of distinct values equals its negation."""
    vals = sorted(values)
    return all(abs(x + y) <= tol for x, y in zip(vals, reversed(vals)))


# ---------------------------------------------------------------------------
# Pattern, Kronecker, rank
# ---------------------------------------------------------------------------

def in_pattern(a, g: Graph, tol: float = DEFAULT_PATTERN_TOL) -> bool:
    m = np.asarray(a, dtype=float)
    if m.shape != (g.n, g.n):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match order {g.n}")
    mask = g.adjacency_matrix().astype(bool)
    off = ~np.eye(g.n, dtype=bool)
    big = np.abs(m) > tol
    return bool(np.all(big[mask]) and not np.any(big & off & ~mask))


def support_graph(a, tol: float = DEFAULT_PATTERN_TOL) -> Graph:
    m = np.asarray(a, dtype=float)
    n = m.shape[0]
    return Graph.from_edges(
        n, [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if abs(m[i, j]) > tol]
    )


def kron(a, b) -> SymMatrix:
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def singular_values(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


@dataclass(frozen=True)
class RankReport:
    rank: int
    smallest_retained: float | None
    largest_discarded: float | None
    threshold: float


def rank_report(m, tol: float = DEFAULT_RANK_TOL) -> RankReport:
    sv = singular_values(m)
    thresh = tol * max(1.0, float(sv[0]) if sv.size else 0.0)
    kept = sv[sv > thresh]
    dropped = sv[sv <= thresh]
    return RankReport(
        int(kept.size),
        float(kept[-1]) if kept.size else None,
        float(dropped[0]) if dropped.size else None,
        thresh,
    )


def rank_tol(m, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above tol * max(1, largest singular value)."""
    return rank_report(m, tol).rank


# ---------------------------------------------------------------------------
# Interlacing and orthogonality
# ---------------------------------------------------------------------------

def check_interlacing(a, deleted: Iterable[int], tol: float = 1e-9) -> bool:
    """Cauchy interlacing between a and the principal submatrix obtained by
    deleting the 0-based indices in ``deleted``."""
    m = as_symmetric(a)
    n = m.shape[0]
    dele = sorted(set(deleted))
    if any(i < 0 or i >= n for i in dele):
        raise InvalidParams(f"deleted indices {dele} out of range for n={n}")
    keep = [i for i in range(n) if i not in dele]
    lam = eigenvalues(m)
    if not keep:
        return True
    mu = eigenvalues(m[np.ix_(keep, keep)])
    k = len(dele)
    scale = tol * max(1.0, float(np.abs(lam).max(initial=0.0)))
    return all(lam[i] <= mu[i] + scale and mu[i] <= lam[i + k] + scale for i in range(len(mu)))


def is_orthogonal_witness(a, g: Graph, tol: float = 1e-8) -> bool:
    m = np.asarray(a, dtype=float)
    if m.shape != (g.n, g.n) or not in_pattern(m, g):
        return False
    if np.abs(m @ m - np.eye(g.n)).max(initial=0.0) > tol:
        return False
    vals = eigenvalues(m)
    return bool(np.any(vals > 0) and np.any(vals < 0))


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def matrix_to_json(a) -> dict:
    m = np.asarray(a, dtype=float)
    return {"n": int(m.shape[0]), "rows": [[_fmt(x) for x in row] for row in m]}


def matrix_from_json(data: dict | str) -> SymMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    n = int(data["n"])
    m = np.array([[float(x) for x in row] for row in data["rows"]], dtype=float)
    if m.shape != (n, n):
        raise DimensionMismatch(f"rows do not form an {n}x{n} matrix")
    return as_symmetric(m)
