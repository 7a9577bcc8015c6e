from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbounds.catalog import load_catalog
from qbounds.constructions import clique_path_matrix, clique_star_matrix, flipped_cycle_matrix
from qbounds.errors import DimensionMismatch, InvalidParams
from qbounds.graphs import complete, cycle, path, product
from qbounds.spectra import (
    check_interlacing,
    eigensystem,
    eigenvalues,
    in_pattern,
    is_orthogonal_witness,
    kron,
    matrix_from_json,
    matrix_to_json,
    rank_report,
    rank_tol,
    spectrum_summary,
    summarize,
    support_graph,
)


def random_symmetric(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return (a + a.T) / 2


def registry_matrix(rid):
    return load_catalog(augment=False).registry.get(rid)


# -- eigensystem ---------------------------------------------------------

def test_eigensystem_examples():
    vals, _ = eigensystem(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(vals, [1, 2, 3])
    vals, _ = eigensystem(path(2).adjacency_matrix())
    assert np.allclose(vals, [-1, 1])
    rec = registry_matrix("M96")
    assert np.allclose(eigenvalues(rec.matrix), [-1, -1, 0, 0, 2, 2], atol=1e-8)


@pytest.mark.parametrize("seed", range(100))
def test_eigensystem_against_lapack(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    a = random_symmetric(rng, n, scale=10 ** rng.uniform(-3, 3))
    vals, vecs = eigensystem(a)
    scale = max(1.0, np.linalg.norm(a))
    assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-10 * scale)
    assert np.abs(a @ vecs - vecs * vals).max() <= 1e-10 * scale
    assert np.abs(vecs.T @ vecs - np.eye(n)).max() <= 1e-10
    assert np.abs(vecs @ np.diag(vals) @ vecs.T - a).max() <= 1e-8 * scale


def test_eigensystem_degenerate_inputs():
    vals, vecs = eigensystem(np.zeros((3, 3)))
    assert np.all(vals == 0) and np.allclose(vecs, np.eye(3))
    vals, _ = eigensystem(np.ones((5, 5)))
    assert np.allclose(vals, [0, 0, 0, 0, 5])


def test_nonsymmetric_rejected():
    with pytest.raises(InvalidParams):
        eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DimensionMismatch):
        eigensystem(np.zeros((2, 3)))


# -- summaries -----------------------------------------------------------

def test_summarize_examples():
    s = summarize([1.0, 1.0 + 1e-12, 5.0], 1e-8)
    assert s.q == 2 and s.ordered_mult == (2, 1)
    s = spectrum_summary(flipped_cycle_matrix(5))
    assert s.q == 3 and s.ordered_mult == (1, 2, 2)
    s = spectrum_summary(registry_matrix("M115").matrix)
    assert s.ordered_mult == (2, 2, 2)
    r3 = np.sqrt(3)
    assert np.allclose(s.values, [-1 - 2 * r3, 0, -1 + 2 * r3], atol=1e-8)


def test_summarize_rejects_nonpositive_gap():
    with pytest.raises(InvalidParams):
        summarize([1.0, 2.0], 0.0)


@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=12),
    st.floats(1e-6, 1.0),
    st.floats(0.01, 1.0),
)
@settings(max_examples=200, deadline=None)
def test_refining_gap_never_merges(eigs, gap, factor):
    coarse = summarize(eigs, gap)
    fine = summarize(eigs, gap * factor)
    assert sum(coarse.ordered_mult) == len(eigs) == sum(fine.ordered_mult)
    assert fine.q >= coarse.q
    # every fine cluster sits inside one coarse cluster
    bounds = []
    i = 0
    for _, m in coarse.clusters:
        bounds.append((coarse.eigenvalues[i], coarse.eigenvalues[i + m - 1]))
        i += m
    i = 0
    for _, m in fine.clusters:
        lo, hi = fine.eigenvalues[i], fine.eigenvalues[i + m - 1]
        assert any(a <= lo and hi <= b for a, b in bounds)
        i += m
    vals = coarse.values
    assert all(b - a > gap for a, b in zip(vals, vals[1:]))


# -- pattern -------------------------------------------------------------

def test_in_pattern_examples():
    assert in_pattern(cycle(4).adjacency_matrix(), cycle(4))
    assert not in_pattern(np.eye(2), path(2))
    rec = registry_matrix("M174")
    assert in_pattern(rec.matrix, support_graph(rec.matrix))
    with pytest.raises(DimensionMismatch):
        in_pattern(np.eye(3), path(2))


def test_in_pattern_ignores_diagonal():
    a = cycle(5).adjacency_matrix() + np.diag([0, 1, 2, 3, 4])
    assert in_pattern(a, cycle(5))


# -- Kronecker products --------------------------------------------------

def test_kron_examples():
    a = np.array([[1.0, 2.0], [2.0, -1.0]])
    assert np.array_equal(kron(np.eye(2), a), np.block([[a, np.zeros((2, 2))], [np.zeros((2, 2)), a]]))
    assert np.allclose(eigenvalues(kron(np.diag([1.0, 2.0]), np.diag([3.0, 5.0]))), [3, 5, 6, 10])
    k = kron(path(3).adjacency_matrix(), path(4).adjacency_matrix())
    assert in_pattern(k, product("tensor", path(3), path(4)))


@pytest.mark.parametrize("seed", range(30))
def test_kron_spectrum_law(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 5, size=2)
    # few distinct values so that products collide
    a = _with_spectrum(rng, rng.choice([-2.0, 1.0, 3.0], size=n))
    b = _with_spectrum(rng, rng.choice([-1.0, 0.5, 2.0], size=m))
    got = summarize(eigenvalues(kron(a, b)), 1e-7)
    want = summarize([x * y for x in np.linalg.eigvalsh(a) for y in np.linalg.eigvalsh(b)], 1e-7)
    assert got.ordered_mult == want.ordered_mult
    assert np.allclose(got.values, want.values, atol=1e-8)


def _with_spectrum(rng, vals):
    q, _ = np.linalg.qr(rng.normal(size=(len(vals), len(vals))))
    return q @ np.diag(vals) @ q.T


# -- rank ----------------------------------------------------------------

def test_rank_examples():
    assert rank_tol(np.zeros((4, 4))) == 0
    assert rank_tol(np.ones((4, 4))) == 1
    assert rank_tol(clique_path_matrix([3, 4, 3]).matrix) == 3


@pytest.mark.parametrize("seed", range(30))
def test_rank_of_kron_multiplies(seed):
    rng = np.random.default_rng(seed)
    ra, rb = rng.integers(0, 4, size=2)
    a = rng.normal(size=(5, ra)) @ rng.normal(size=(ra, 5))
    b = rng.normal(size=(4, rb)) @ rng.normal(size=(rb, 4))
    assert rank_tol(a) == ra and rank_tol(b) == rb
    assert rank_tol(kron(a, b)) == ra * rb


def test_rank_report_is_auditable():
    r = rank_report(np.diag([1.0, 1e-3, 1e-12]))
    assert r.rank == 2
    assert r.smallest_retained == pytest.approx(1e-3)
    assert r.largest_discarded == pytest.approx(1e-12)


# -- interlacing ---------------------------------------------------------

@given(st.integers(0, 10_000), st.integers(2, 7), st.data())
@settings(max_examples=100, deadline=None)
def test_interlacing_holds(seed, n, data):
    a = random_symmetric(np.random.default_rng(seed), n)
    k = data.draw(st.integers(0, n - 1))
    deleted = data.draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    assert check_interlacing(a, deleted)


def test_interlacing_trivial_cases():
    a = np.diag([0.0, 1.0, 2.0])
    assert check_interlacing(a, [])
    assert check_interlacing(a, [1])
    with pytest.raises(InvalidParams):
        check_interlacing(a, [3])


def test_clique_star_centre_deletion_interlaces():
    res = clique_star_matrix([3, 3, 4])
    a = res.matrix
    n = a.shape[0]
    assert check_interlacing(a, [n - 1])
    # removing the centre leaves s = 3 rank-one blocks with eigenvalue 1, so
    # interlacing forces mult_A(1) >= s - 1
    sub = spectrum_summary(a[: n - 1, : n - 1])
    assert sub.multiplicity_of(1.0, 1e-8) == 3
    assert spectrum_summary(a).multiplicity_of(1.0, 1e-8) >= 2


# -- orthogonality -------------------------------------------------------

def test_orthogonal_examples():
    for rid in ("M174", "M154"):
        rec = registry_matrix(rid)
        assert is_orthogonal_witness(rec.matrix, rec.graph)
    assert not is_orthogonal_witness(np.eye(2), complete(2))


# -- serialisation -------------------------------------------------------

@given(st.integers(0, 10_000), st.integers(1, 7))
@settings(max_examples=50, deadline=None)
def test_matrix_json_round_trip_is_exact(seed, n):
    a = random_symmetric(np.random.default_rng(seed), n)
    b = matrix_from_json(matrix_to_json(a))
    assert np.array_equal(a, b)
