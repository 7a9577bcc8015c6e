"""Explicit witness-matrix constructions.  Each result is checked against
its pattern and its claimed bound on the number of distinct eigenvalues
when it is built."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidParams,
    NonzeroDiagonal,
    PatternMismatch,
    RealizationFailed,
    SpectrumNotConsecutive,
    SpectrumNotSymmetric,
    VerificationFailed,
    ZeroDiagonalEntry,
)
from .graphs import (
    Graph,
    clique_path,
    clique_path_blocks,
    clique_star,
    clique_star_blocks,
    complete,
    complete_bipartite,
    complete_minus_edge,
    cycle,
    path,
    product,
)
from .spectra import as_symmetric, in_pattern, is_symmetric_spectrum, kron, spectrum_summary


@dataclass(frozen=True)
class ConstructionResult:
    graph: Graph
    matrix: np.ndarray
    claimed_q_upper: int
    citation: str

    def __post_init__(self):
        if not in_pattern(self.matrix, self.graph):
            raise VerificationFailed(f"{self.citation}: matrix is not in the pattern of its graph")
        q = spectrum_summary(self.matrix).q
        if q > self.claimed_q_upper:
            raise VerificationFailed(
                f"{self.citation}: matrix has {q} distinct eigenvalues, claimed at most {self.claimed_q_upper}"
            )

    @property
    def q(self) -> int:
        return spectrum_summary(self.matrix).q


def _check(a, g: Graph) -> np.ndarray:
    m = as_symmetric(a)
    if not in_pattern(m, g):
        raise PatternMismatch("input matrix is not in the pattern of the input graph")
    return m


def _distinct(a) -> list[float]:
    return spectrum_summary(a).values


# -- cycles -----------------------------------------------------------------

def flipped_cycle_matrix(s: int) -> np.ndarray:
    if s < 3:
        raise InvalidParams("flipped cycle needs s >= 3")
    m = cycle(s).adjacency_matrix()
    m[0, s - 1] = m[s - 1, 0] = -1.0
    return m


def flipped_cycle_eigenvalues(s: int) -> list[float]:
    return sorted(2 * math.cos(math.pi * (2 * j - 1) / s) for j in range(1, s + 1))


def flipped_cycle(s: int) -> ConstructionResult:
    """Cycle adjacency with one symmetric pair of ones negated; every
    eigenvalue is double except -2, which is simple for odd s."""
    return ConstructionResult(cycle(s), flipped_cycle_matrix(s), math.ceil(s / 2), "flipped-cycle")


# -- products with C_4 ------------------------------------------------------

C4_SIGNS = np.diag([1.0, -1.0, 1.0, -1.0])


def c4_cartesian_witness(a, g: Graph) -> ConstructionResult:
    """Witness on C_4 □ G: flipped C_4 (x) I + diag(1,-1,1,-1) (x) A.  Its square
    is block-diagonal with blocks A^2 + 2I."""
    m = _check(a, g)
    vals = _distinct(m)
    if not is_symmetric_spectrum(vals):
        raise SpectrumNotSymmetric("c4-cartesian needs the distinct eigenvalues to be symmetric about 0")
    big = kron(flipped_cycle_matrix(4), np.eye(g.n)) + kron(C4_SIGNS, m)
    has_zero = any(abs(v) <= 1e-7 * max(1.0, abs(vals[-1])) for v in vals)
    bound = len(vals) + 1 if has_zero else len(vals)
    return ConstructionResult(product("cartesian", cycle(4), g), big, bound, "c4-cartesian")


def c4_tensor_witness(a, g: Graph) -> ConstructionResult:
    """Witness on C_4 x G: (1/sqrt 2) flipped C_4 (x) A, whose square is I (x) A^2."""
    m = _check(a, g)
    if np.abs(np.diag(m)).max(initial=0.0) > 1e-12:
        raise NonzeroDiagonal("c4-tensor needs a zero diagonal")
    vals = _distinct(m)
    if not is_symmetric_spectrum(vals):
        raise SpectrumNotSymmetric("c4-tensor needs the distinct eigenvalues to be symmetric about 0")
    big = kron(flipped_cycle_matrix(4), m) / math.sqrt(2)
    return ConstructionResult(product("tensor", cycle(4), g), big, len(vals), "c4-tensor")


def tensor_path_bound(s: int, t: int) -> int:
    if s % 2 and not t % 2:
        s, t = t, s
    if not s % 2 and not t % 2:
        return t * s // 2
    if not s % 2:
        return (t - 1) * s // 2 + 1
    return (t - 1) * (s - 1) // 2 + 1


def tensor_path_witness(s: int, t: int) -> ConstructionResult:
    if s < 2 or t < 2:
        raise InvalidParams("tensor path witness needs s, t >= 2")
    m = kron(path(s).adjacency_matrix(), path(t).adjacency_matrix())
    return ConstructionResult(product("tensor", path(s), path(t)), m, tensor_path_bound(s, t), "tensor-path")


# -- strong products --------------------------------------------------------

P2_HALVES = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
P2_AVERAGE = np.full((2, 2), 0.5)


def p3_factor() -> np.ndarray:
    """A 3x3 matrix in S(P_3) with spectrum {-1, 0, 1} and nonzero diagonal."""
    c = math.sqrt(3 / 5)
    return np.array([
        [-5 / 6 * c, -5 / 6 * c, 0.0],
        [-5 / 6 * c, c / 2, 2 / 3 * c],
        [0.0, 2 / 3 * c, c / 3],
    ])


def strong_product_witness(a, g: Graph, b, h: Graph, claimed: int | None = None) -> ConstructionResult:
    """A (x) B lies in S(G ⊠ H) when both diagonals are nowhere zero."""
    ma, mb = _check(a, g), _check(b, h)
    for m in (ma, mb):
        if np.abs(np.diag(m)).min(initial=1.0) <= 1e-9:
            raise ZeroDiagonalEntry("strong product witness needs every diagonal entry nonzero")
    big = kron(ma, mb)
    if claimed is None:
        claimed = spectrum_summary(big).q
    return ConstructionResult(product("strong", g, h), big, claimed, "strong-product")


def strong_p2_witness(a, g: Graph) -> ConstructionResult:
    """Witness on G ⊠ P_2 with no more distinct eigenvalues than A."""
    m = _check(a, g)
    vals = _distinct(m)
    tol = 1e-7 * max(1.0, max(abs(v) for v in vals))
    if any(abs(v) <= tol for v in vals):
        factor = P2_AVERAGE
    elif is_symmetric_spectrum(vals):
        factor = P2_HALVES
    else:
        # shift so an eigenvalue sits at 0 while the diagonal stays nonzero
        for v in vals:
            shifted = m - v * np.eye(g.n)
            if np.abs(np.diag(shifted)).min() > 1e-6:
                m, factor = shifted, P2_AVERAGE
                break
        else:
            raise ZeroDiagonalEntry("no eigenvalue shift keeps the diagonal nonzero")
    res = strong_product_witness(m, g, factor, path(2), claimed=len(vals))
    return ConstructionResult(res.graph, res.matrix, len(vals), "strong-p2")


def strong_p3_witness(a, g: Graph) -> ConstructionResult:
    """Witness on G ⊠ P_3; keeps q(A) when the distinct eigenvalues of A are
    symmetric and include 0."""
    m = _check(a, g)
    vals = _distinct(m)
    tol = 1e-7 * max(1.0, max(abs(v) for v in vals))
    if not (is_symmetric_spectrum(vals) and any(abs(v) <= tol for v in vals)):
        raise SpectrumNotSymmetric("strong-p3 needs symmetric distinct eigenvalues containing 0")
    res = strong_product_witness(m, g, p3_factor(), path(3), claimed=len(vals))
    return ConstructionResult(res.graph, res.matrix, len(vals), "strong-p3")


# -- Jacobi matrices with prescribed spectrum -------------------------------

def _lanczos(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    n = len(values)
    q = np.zeros((n, n))
    alpha = np.zeros(n)
    beta = np.zeros(max(n - 1, 0))
    q[:, 0] = weights / np.linalg.norm(weights)
    for k in range(n):
        w = values * q[:, k]
        alpha[k] = q[:, k] @ w
        w = w - alpha[k] * q[:, k]
        if k > 0:
            w = w - beta[k - 1] * q[:, k - 1]
        # full reorthogonalisation, twice
        for _ in range(2):
            w = w - q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        if k < n - 1:
            beta[k] = np.linalg.norm(w)
            q[:, k + 1] = w / beta[k]
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)


def path_with_spectrum(target: Sequence[float], require_nonzero_diag: bool = False,
                       seed: int = 0, retries: int = 200) -> np.ndarray:
    """Tridiagonal matrix with positive off-diagonal and the given distinct
    spectrum, from a Lanczos run on diag(target) with random positive weights."""
    vals = np.array(sorted(float(x) for x in target))
    if len(vals) == 0:
        raise InvalidParams("empty target spectrum")
    if np.any(np.diff(vals) <= 1e-9 * max(1.0, float(np.abs(vals).max()))):
        raise InvalidParams("path realisation needs distinct target values")
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.abs(vals).max()))
    for _ in range(retries):
        w = rng.uniform(0.5, 1.5, size=len(vals))
        t = _lanczos(vals, w)
        off = np.diag(t, 1)
        if off.size and off.min() <= 1e-6 * scale:
            continue
        if require_nonzero_diag and np.abs(np.diag(t)).min() <= 1e-6 * scale:
            continue
        return t
    raise RealizationFailed(f"no admissible tridiagonal realisation after {retries} tries")


def cartesian_sum_witness(a, g: Graph, b, h: Graph) -> ConstructionResult:
    """A (x) I + I (x) B on G □ H for spectra {1..q(A)} and {1..q(B)}."""
    ma, mb = _check(a, g), _check(b, h)
    for m in (ma, mb):
        vals = _distinct(m)
        if any(abs(v - (i + 1)) > 1e-7 for i, v in enumerate(vals)):
            raise SpectrumNotConsecutive(f"distinct eigenvalues {vals} are not 1..{len(vals)}")
    big = kron(ma, np.eye(h.n)) + kron(np.eye(g.n), mb)
    bound = len(_distinct(ma)) + len(_distinct(mb)) - 1
    return ConstructionResult(product("cartesian", g, h), big, bound, "cartesian-sum")


# -- clique families ----------------------------------------------------------

def clique_path_matrix(sizes: Sequence[int]) -> ConstructionResult:
    """Sum of the all-ones blocks of the cliques; rank s, so at most s+1
    distinct eigenvalues."""
    g = clique_path(sizes)
    m = np.zeros((g.n, g.n))
    for block in clique_path_blocks(sizes):
        x = np.zeros(g.n)
        x[[v - 1 for v in block]] = 1.0
        m += np.outer(x, x)
    return ConstructionResult(g, m, len(sizes) + 1, "clique-path")


def clique_star_matrix(sizes: Sequence[int]) -> ConstructionResult:
    """Sum over cliques of J / (number of noncentral vertices); eigenvalues
    are 0, 1 and one simple value above 1."""
    g = clique_star(sizes)
    m = np.zeros((g.n, g.n))
    for block, k in zip(clique_star_blocks(sizes), sizes):
        x = np.zeros(g.n)
        x[[v - 1 for v in block]] = 1.0
        m += np.outer(x, x) / (k - 1)
    return ConstructionResult(g, m, 3, "clique-star")


# -- complete and complete bipartite ----------------------------------------

def complete_witness(n: int) -> ConstructionResult:
    return ConstructionResult(complete(n), np.ones((n, n)), 1 if n == 1 else 2, "complete")


def _orthogonal_full_support(n: int) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        return P2_HALVES.copy()
    return np.eye(n) - 2.0 / n * np.ones((n, n))


def complete_bipartite_witness(m: int, n: int) -> ConstructionResult:
    """[[0, H], [H^T, 0]] with H made of orthonormal rows without zeros: two
    eigenvalues when m = n, three otherwise."""
    if m < 1 or n < 1:
        raise InvalidParams("complete bipartite witness needs m, n >= 1")
    small, big = min(m, n), max(m, n)
    h = _orthogonal_full_support(big)[:small, :]
    if m > n:
        h = h.T
    mat = np.zeros((m + n, m + n))
    mat[:m, m:] = h
    mat[m:, :m] = h.T
    return ConstructionResult(complete_bipartite(m, n), mat, 2 if m == n else 3, "complete-bipartite")


# -- K_n minus an edge --------------------------------------------------------

def kn_minus_e_witness(n: int, seed: int = 0) -> ConstructionResult:
    """SSP witness on K_n - e with two eigenvalues of multiplicities
    (ceil(n/2), floor(n/2)).  Even orders are found numerically, odd orders
    by adding a universal vertex to the previous even witness."""
    from . import search

    if n < 4:
        raise InvalidParams("K_n - e witness needs n >= 4")
    g = complete_minus_edge(n)
    if n % 2 == 0:
        task = search.RealizationTask(g, mult=(n // 2, n // 2), require_ssp=True, seed=seed)
        res = search.realize(task)
        if res is None:
            raise RealizationFailed(f"no two-eigenvalue witness found on K_{n} - e")
        return ConstructionResult(g, res, 2, "kn-minus-e")
    prev = kn_minus_e_witness(n - 1, seed)
    out = search.add_universal_vertex_witness(prev.matrix, prev.graph, 0, seed=seed)
    if out is None:
        raise RealizationFailed(f"augmentation to K_{n} - e did not converge")
    mat, h = out
    if h != g:
        raise VerificationFailed("augmented graph is not K_n - e")
    return ConstructionResult(g, mat, 2, "kn-minus-e")


# -- registry of addressable constructions ----------------------------------

def _matrix_arg(kind: str, params: Sequence[int]):
    from .graphs import make_family

    g = make_family(kind, params)
    return g.adjacency_matrix(), g


def build(key: str, params: Sequence[int], seed: int = 0) -> ConstructionResult:
    """Run a construction by key with integer parameters (used by the CLI)."""
    p = [int(x) for x in params]
    if key == "flipped-cycle":
        return flipped_cycle(*p)
    if key == "c4-cartesian-path":
        return c4_cartesian_witness(*_matrix_arg("path", p))
    if key == "c4-cartesian-cycle":
        return c4_cartesian_witness(flipped_cycle_matrix(p[0]), cycle(p[0]))
    if key == "c4-tensor-path":
        return c4_tensor_witness(*_matrix_arg("path", p))
    if key == "c4-tensor-cycle":
        return c4_tensor_witness(flipped_cycle_matrix(p[0]), cycle(p[0]))
    if key == "tensor-path":
        return tensor_path_witness(*p)
    if key == "strong-p3-p3":
        b = p3_factor()
        return strong_product_witness(b, path(3), b, path(3), claimed=3)
    if key == "clique-path":
        return clique_path_matrix(p)
    if key == "clique-star":
        return clique_star_matrix(p)
    if key == "complete":
        return complete_witness(*p)
    if key == "complete-bipartite":
        return complete_bipartite_witness(*p)
    if key == "kn-minus-e":
        return kn_minus_e_witness(p[0], seed)
    if key == "path-spectrum":
        m = path_with_spectrum([float(x) for x in p], seed=seed)
        return ConstructionResult(path(len(p)), m, len(p), "path-spectrum")
    raise InvalidParams(f"unknown construction {key!r}; known: {', '.join(CONSTRUCTION_KEYS)}")


CONSTRUCTION_KEYS = (
    "flipped-cycle", "c4-cartesian-path", "c4-cartesian-cycle", "c4-tensor-path",
    "c4-tensor-cycle", "tensor-path", "strong-p3-p3", "clique-path", "clique-star",
    "complete", "complete-bipartite", "kn-minus-e", "path-spectrum",
)
