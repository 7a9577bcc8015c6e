"""Numeric realisation of spectra and multiplicity lists inside S(G), and
vertex augmentation that raises one eigenvalue multiplicity.

Every returned matrix is re-verified (pattern, spectrum, SSP when asked);
a None result means the search was inconclusive, never that no matrix
exists."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegreeConditionViolated, HypothesisNotSatisfied, InvalidParams
from .graphs import Graph
from .spectra import (
    DEFAULT_PATTERN_TOL,
    as_symmetric,
    eigensystem,
    in_pattern,
    summarize,
)
from .strongprops import augmentation_hypothesis, eigenspace, has_ssp

log = logging.getLogger(__name__)

DEFAULT_STARTS = 200
DEFAULT_ITERATIONS = 500
SPECTRUM_TOL = 1e-7
EDGE_FLOOR = 1e-2


@dataclass
class RealizationTask:
    """Either ``spectrum`` (all n eigenvalues, with repeats) or ``mult`` (an
    ordered multiplicity list with the values left free) must be given."""

    graph: Graph
    spectrum: Sequence[float] | None = None
    mult: Sequence[int] | None = None
    require_ssp: bool = False
    seed: int = 0
    starts: int = DEFAULT_STARTS
    iterations: int = DEFAULT_ITERATIONS
    init: np.ndarray | None = None
    init_noise: float = 0.05

    def __post_init__(self):
        n = self.graph.n
        if (self.spectrum is None) == (self.mult is None):
            raise InvalidParams("give exactly one of spectrum or mult")
        if self.spectrum is not None:
            self.spectrum = sorted(float(x) for x in self.spectrum)
            if len(self.spectrum) != n:
                raise InvalidParams(f"target spectrum has {len(self.spectrum)} values for order {n}")
        else:
            self.mult = tuple(int(m) for m in self.mult)
            if sum(self.mult) != n or min(self.mult) < 1:
                raise InvalidParams(f"multiplicities {self.mult} do not sum to {n}")

    def target_mult(self) -> tuple[int, ...]:
        if self.mult is not None:
            return self.mult
        return summarize(self.spectrum).ordered_mult


@dataclass
class SearchOutcome:
    matrix: np.ndarray | None
    starts_tried: int
    best_residual: float
    seeds: list[int] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.matrix is not None


class _Objective:
    def __init__(self, task: RealizationTask):
        g = task.graph
        self.n = g.n
        self.edges = [(u - 1, v - 1) for u, v in g.sorted_edges()]
        self.eu = np.array([e[0] for e in self.edges], dtype=int)
        self.ev = np.array([e[1] for e in self.edges], dtype=int)
        self.task = task
        self.floor = EDGE_FLOOR
        if task.spectrum is not None:
            self.target = np.array(task.spectrum)
            self.groups = None
        else:
            self.target = None
            bounds = np.cumsum((0,) + tuple(task.mult))
            self.groups = [np.arange(bounds[k], bounds[k + 1]) for k in range(len(task.mult))]
            self.sep = 0.2 / max(1, len(task.mult) - 1)

    def matrix(self, x: np.ndarray) -> np.ndarray:
        n = self.n
        a = np.diag(x[:n]).astype(float)
        a[self.eu, self.ev] = x[n:]
        a[self.ev, self.eu] = x[n:]
        return a

    def params(self, a: np.ndarray) -> np.ndarray:
        return np.concatenate([np.diag(a), a[self.eu, self.ev]])

    def residual(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        a = self.matrix(x)
        lam, vec = np.linalg.eigh(a)
        # d lambda_i / d diag_j = v_ij^2 ; d lambda_i / d edge_ab = 2 v_ia v_ib
        dj = np.concatenate([(vec ** 2).T, (2 * vec[self.eu, :] * vec[self.ev, :]).T], axis=1)
        # hinge barrier keeping every edge entry away from zero
        k = len(self.edges)
        off = x[self.n:]
        short = np.maximum(0.0, self.floor - np.abs(off))
        bar_jac = np.zeros((k, dj.shape[1]))
        bar_jac[np.arange(k), self.n + np.arange(k)] = -np.sign(off) * (short > 0)
        if self.target is not None:
            return np.concatenate([lam - self.target, short]), np.vstack([dj, bar_jac])
        rows, jac = list(short), list(bar_jac)
        means, mean_jac = [], []
        for grp in self.groups:
            mu = lam[grp].mean()
            mj = dj[grp].mean(axis=0)
            means.append(mu)
            mean_jac.append(mj)
            if len(grp) > 1:
                rows.extend(lam[grp] - mu)
                jac.extend(dj[grp] - mj)
        if len(self.groups) > 1:
            rows.append(means[0] + 1.0)
            jac.append(mean_jac[0])
            rows.append(means[-1] - 1.0)
            jac.append(mean_jac[-1])
            for k in range(len(means) - 1):
                gap = means[k + 1] - means[k]
                if gap < self.sep:
                    rows.append(self.sep - gap)
                    jac.append(mean_jac[k] - mean_jac[k + 1])
                else:
                    rows.append(0.0)
                    jac.append(np.zeros(dj.shape[1]))
        return np.array(rows, dtype=float), np.array(jac, dtype=float).reshape(len(rows), -1)


def _levenberg_marquardt(obj: _Objective, x: np.ndarray, iterations: int) -> tuple[np.ndarray, float]:
    r, jac = obj.residual(x)
    cost = float(r @ r)
    damp = 1e-3
    stall = 0
    for _ in range(iterations):
        if cost < 1e-28:
            break
        jtj = jac.T @ jac
        grad = jac.T @ r
        accepted = False
        while damp < 1e12:
            lhs = jtj + damp * (np.diag(np.diag(jtj)) + 1e-12 * np.eye(len(x)))
            try:
                step = np.linalg.solve(lhs, -grad)
            except np.linalg.LinAlgError:
                damp *= 10
                continue
            xn = x + step
            rn, jn = obj.residual(xn)
            cn = float(rn @ rn)
            if cn < cost:
                stall = stall + 1 if cn > 0.999 * cost else 0
                x, r, jac, cost = xn, rn, jn, cn
                damp = max(damp / 5, 1e-15)
                accepted = True
                break
            damp *= 4
        if not accepted or stall > 60:
            break
    return x, cost


def verify_realization(a: np.ndarray, task: RealizationTask,
                       pattern_tol: float = DEFAULT_PATTERN_TOL) -> bool:
    """Independent re-check of a candidate, using the Jacobi eigensolver."""
    g = task.graph
    if not in_pattern(a, g, pattern_tol):
        return False
    lam = eigensystem(a)[0]
    if task.spectrum is not None:
        if np.abs(lam - np.array(task.spectrum)).max() > SPECTRUM_TOL:
            return False
    else:
        if summarize(lam).ordered_mult != tuple(task.mult):
            return False
    if task.require_ssp and not has_ssp(a, g):
        return False
    return True


def _start_point(obj: _Objective, task: RealizationTask, start: int, rng) -> np.ndarray:
    m = len(obj.edges)
    if task.init is not None and start < max(1, task.starts // 2):
        x0 = obj.params(as_symmetric(task.init))
        if start == 0:
            return x0
        noise = task.init_noise * (1 + start // 10)
        return x0 + noise * rng.standard_normal(x0.shape)
    scale = 1.0
    if task.spectrum is not None:
        scale = max(1.0, float(np.abs(task.spectrum).max()))
    diag = rng.normal(0.0, 1.0, obj.n) * scale * 0.5
    if task.spectrum is not None:
        diag = diag + float(np.mean(task.spectrum))
    off = rng.uniform(0.5, 1.5, m) * rng.choice([-1.0, 1.0], m) * scale * 0.5
    return np.concatenate([diag, off])


def realize_detailed(task: RealizationTask) -> SearchOutcome:
    obj = _Objective(task)
    best = np.inf
    seeds = []
    for start in range(task.starts):
        ss = np.random.SeedSequence([task.seed, start])
        seeds.append(int(ss.generate_state(1)[0]))
        rng = np.random.default_rng(ss)
        x = _start_point(obj, task, start, rng)
        x, cost = _levenberg_marquardt(obj, x, task.iterations)
        best = min(best, cost)
        if cost > 1e-16:
            continue
        a = obj.matrix(x)
        if obj.edges and np.abs(x[obj.n:]).min() < 1e-4:
            continue
        if verify_realization(a, task):
            log.debug("realised after %d starts (residual %.2e)", start + 1, cost)
            return SearchOutcome(a, start + 1, cost, seeds)
    return SearchOutcome(None, task.starts, float(best), seeds)


def realize(task: RealizationTask) -> np.ndarray | None:
    return realize_detailed(task).matrix


# ---------------------------------------------------------------------------
# Augmentation
# ---------------------------------------------------------------------------

def _augmented_graph(g: Graph, alpha: Sequence[int]) -> Graph:
    w = g.n + 1
    return Graph(w, frozenset(set(g.edges) | {(v, w) for v in alpha}))


def _grow_multiplicity(a, g: Graph, lambda_index: int, alpha: Sequence[int], seed: int,
                       starts: int, iterations: int) -> tuple[np.ndarray, Graph] | None:
    m = as_symmetric(a)
    lam = eigensystem(m)[0]
    before = summarize(lam)
    value = before.values[lambda_index]
    spectrum = []
    for k, (v, mult) in enumerate(before.clusters):
        spectrum.extend([v] * (mult + (1 if k == lambda_index else 0)))
    h = _augmented_graph(g, alpha)
    for eps in (0.3, 0.1, 1.0):
        init = np.zeros((h.n, h.n))
        init[: g.n, : g.n] = m
        for v in alpha:
            init[v - 1, g.n] = init[g.n, v - 1] = eps
        init[g.n, g.n] = value
        task = RealizationTask(h, spectrum=spectrum, require_ssp=True, seed=seed,
                               starts=starts, iterations=iterations, init=init)
        out = realize(task)
        if out is None:
            continue
        after = summarize(eigensystem(out)[0])
        expected = list(before.ordered_mult)
        expected[lambda_index] += 1
        if after.ordered_mult == tuple(expected) and all(
            abs(x - y) <= 1e-6 for x, y in zip(after.values, before.values)
        ):
            return out, h
    return None


def augment(a, g: Graph, lambda_index: int, alpha: Sequence[int], seed: int = 0,
            starts: int = 40, iterations: int = DEFAULT_ITERATIONS,
            strict: bool = True) -> tuple[np.ndarray, Graph] | None:
    """Append a vertex adjacent to ``alpha`` and search for a matrix with SSP
    whose spectrum is that of ``a`` with the multiplicity of the
    lambda_index-th distinct eigenvalue raised by one.

    With ``strict`` the input must have SSP; the eigenvector support
    condition on ``alpha`` is always checked."""
    m = as_symmetric(a)
    alpha = sorted(set(int(v) for v in alpha))
    if any(v not in g.vertices for v in alpha):
        raise InvalidParams(f"alpha {alpha} is not a vertex subset")
    if strict and not has_ssp(m, g):
        raise HypothesisNotSatisfied("input matrix does not have SSP")
    if not augmentation_hypothesis(m, g, lambda_index, alpha):
        raise HypothesisNotSatisfied(
            "some eigenvector meets alpha in fewer than two coordinates"
        )
    return _grow_multiplicity(m, g, lambda_index, alpha, seed, starts, iterations)


def add_universal_vertex_witness(a, g: Graph, j: int, seed: int = 0, starts: int = 40,
                                 iterations: int = DEFAULT_ITERATIONS) -> tuple[np.ndarray, Graph] | None:
    """Add a vertex adjacent to every vertex and raise the multiplicity of the
    j-th distinct eigenvalue (0-based) by one."""
    m = as_symmetric(a)
    if min(g.degrees(), default=0) < 2:
        raise DegreeConditionViolated("every vertex needs at least two neighbours")
    if not has_ssp(m, g):
        raise HypothesisNotSatisfied("input matrix does not have SSP")
    eigenspace(m, j)  # validates the index
    return _grow_multiplicity(m, g, j, list(g.vertices), seed, starts, iterations)
