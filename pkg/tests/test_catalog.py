from __future__ import annotations

import math

import numpy as np
import pytest

from qbounds.bounds import bound
from qbounds.catalog import (
    CONSTRUCTIVE_KEYS,
    evaluate,
    family_rows,
    independent_set_checks,
    load_catalog,
    named_checks,
    normalize_key,
    reference_value,
    small_order_table,
    verify_catalog,
)
from qbounds.errors import CatalogCorrupt, UnknownKey
from qbounds.graphs import (
    complete,
    complete_bipartite,
    cycle,
    enumerate_connected,
    is_isomorphic,
    near_path_class,
    path,
    product,
)
from qbounds.spectra import eigenvalues, spectrum_summary

R3 = math.sqrt(3)


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


# -- expression evaluation -----------------------------------------------

def test_evaluate():
    assert evaluate("sqrt(23/6 - 1/sqrt(3))") == pytest.approx(math.sqrt(23 / 6 - 1 / R3))
    assert evaluate("-2**2 + a", {"a": 1.0}) == -3
    assert evaluate(3) == 3.0
    with pytest.raises(CatalogCorrupt):
        evaluate("__import__('os')")


# -- embedded matrices ---------------------------------------------------

@pytest.mark.parametrize("rid,spectrum", [
    ("M96", [-1, -1, 0, 0, 2, 2]),
    ("M99", [-R3, -R3, 0, 0, R3, R3]),
    ("M115", [-1 - 2 * R3, -1 - 2 * R3, 0, 0, -1 + 2 * R3, -1 + 2 * R3]),
    ("banner", [-2 / 3, -2 / 3, 0, 2, 2]),
])
def test_matrix_spectra(cat, rid, spectrum):
    rec = cat.registry.get(rid)
    assert np.allclose(np.linalg.eigvalsh(rec.matrix), sorted(spectrum), atol=1e-8)


@pytest.mark.parametrize("rid", ["M154", "M168", "M174", "M181", "M186"])
def test_orthogonal_matrices(cat, rid):
    rec = cat.registry.get(rid)
    assert np.abs(rec.matrix @ rec.matrix - np.eye(6)).max() <= 1e-8
    assert rec.verified["orthogonal"]
    assert rec.summary.ordered_mult == (3, 3)


def test_claimed_flags(cat):
    reg = cat.registry
    for rid in ("M96", "banner", "M174", "M186", "M48"):
        assert reg.get(rid).verified["ssp"], rid
    assert reg.get("flipped-C5").verified["smp"]
    assert reg.get("M48").summary.ordered_mult == (3, 2)


def test_matrix_supports_are_connected(cat):
    for rid in ("M96", "M99", "M115", "banner", "M48", "M154", "M168", "M174", "M181", "M186"):
        g = cat.registry.get(rid).graph
        assert g.is_connected() and g.n in (5, 6)


@pytest.mark.parametrize("n", range(3, 13))
def test_flipped_cycles_seeded(cat, n):
    rec = cat.registry.get(f"flipped-C{n}")
    assert rec.verified["smp"] and rec.q == math.ceil(n / 2)


@pytest.mark.parametrize("rid,mult", [("aug-G125", (2, 2, 2)), ("aug-G129", (2, 2, 2)), ("aug-G190", (3, 3))])
def test_augmented_witnesses(cat, rid, mult):
    rec = cat.registry.get(rid)
    assert rec.verified["ssp"]
    assert spectrum_summary(rec.matrix).ordered_mult == mult
    key = rid.split("-")[1]
    assert is_isomorphic(rec.graph, cat.graph(key))


def test_catalog_without_augmentation(cat):
    plain = load_catalog(augment=False)
    assert "aug-G125" not in plain.registry
    assert len(plain.registry) < len(cat.registry)


def test_load_returns_independent_copies():
    a = load_catalog()
    b = load_catalog()
    assert a.registry is not b.registry
    a.registry.register(b.registry.get("M96").__class__(
        "extra", complete(2), np.ones((2, 2)), "test", {}))
    assert "extra" not in load_catalog().registry


# -- lookups -------------------------------------------------------------

def test_key_spellings(cat):
    assert normalize_key("M_96") == "M96"
    assert normalize_key("Table4:G187") == "G187"
    assert cat.entry("M_96").kind == "matrix"
    assert cat.entry("Table4:G187").value == 3


def test_reference_values():
    assert reference_value("G83")[0] == 6
    assert reference_value("G96")[0] == 3
    assert reference_value("G208")[0] == 2
    q, reason = reference_value("G187")
    assert q == 3 and "asserted" in reason
    assert reference_value("Table4:G189")[0] == 3
    with pytest.raises(UnknownKey):
        reference_value("G999")
    with pytest.raises(UnknownKey):
        load_catalog().entry("nope")


def test_identified_structures(cat):
    assert is_isomorphic(cat.graph("G83"), path(6))
    assert is_isomorphic(cat.graph("G208"), complete(6))
    assert is_isomorphic(cat.graph("G175"), complete_bipartite(3, 3))
    assert is_isomorphic(cat.graph("G146"), complete_bipartite(2, 4))
    assert is_isomorphic(cat.graph("G77"), complete_bipartite(1, 5))
    assert is_isomorphic(cat.graph("G128"), product("cartesian", path(3), path(2)))
    assert near_path_class(cat.graph("G80")) == "generalized-star"
    assert cat.graph("G187").num_edges == 10


def test_value_multisets(cat):
    six = cat.value_multiset(6)
    assert sum(six.values()) == 112
    assert sum(sum(cat.value_multiset(k).values()) for k in range(1, 6)) == 31
    assert cat.value_multiset(4) == {2: 3, 3: 2, 4: 1}


def test_identified_graphs_distinct(cat):
    keys = cat.identified_keys()
    assert len([k for k in keys if cat.graphs[k].n == 6]) >= 30
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            assert not is_isomorphic(cat.graphs[a], cat.graphs[b]), (a, b)


def test_atlas_edge_counts(cat):
    # edge count ranges of the order-6 atlas numbering
    ranges = [(5, 71, 85), (6, 86, 106), (7, 107, 130), (8, 131, 154), (9, 155, 175),
              (10, 176, 190), (11, 191, 199), (12, 200, 204), (13, 205, 206), (14, 207, 207), (15, 208, 208)]
    for key in cat.identified_keys():
        g = cat.graphs[key]
        if g.n != 6:
            continue
        num = int(key[1:])
        m = next(e for e, lo, hi in ranges if lo <= num <= hi)
        assert g.num_edges == m, key


# -- conformance and tables ----------------------------------------------

def test_verify_catalog_all_pass():
    lines = verify_catalog()
    bad = [l.render() for l in lines if not l.ok]
    assert not bad, bad
    assert any("G161 independent-set" in l.name for l in lines)


def test_small_orders():
    v = small_order_table()
    assert v.feasible and v.graphs == 31
    assert v.determined >= 25


def test_named_checks(cat):
    checks = named_checks(cat)
    assert len(checks) >= 30
    for c in checks:
        assert c.ok, (c.key, c.value, c.report.lo, c.report.hi)
    constructive = {c.key for c in checks if c.constructive}
    assert constructive == set(CONSTRUCTIVE_KEYS)


def test_asserted_values_inside_interval(cat):
    for key in ("G187", "G189"):
        rep = bound(cat.graph(key), cat.registry)
        assert (rep.lo, rep.hi) == (2, 3)


def test_independent_set_checks():
    results = dict(independent_set_checks())
    assert set(results) == {"G161", "G170", "G179", "Q_5 join P_2"}
    for key, found in results.items():
        assert found is not None, key
        assert len(found[1]) == 2


def test_family_rows_cover_every_family():
    fams = {r.family for r in family_rows()}
    assert {"K_n", "C_n", "P_n", "K_mn", "Q_d", "GB", "S", "KP", "KS", "P_s box P_2",
            "C_4 box P_2s", "C_4 box C_s", "P_s x P_2", "C_4 x P_s", "P_3 strong P_3",
            "P_s join K_1", "K_n - e"} <= fams


def test_order_six_enumeration_matches_table(cat):
    assert len(enumerate_connected(6)) == sum(cat.value_multiset(6).values())


def test_flipped_c5_eigenvalues_not_symmetric(cat):
    # the five-cycle flip has -2 but not 2, so the C_4 box C_5 route needs a
    # different C_5 witness
    vals = spectrum_summary(cat.registry.get("flipped-C5").matrix).values
    assert vals[0] == pytest.approx(-2) and vals[-1] < 2
    assert np.allclose(sorted(eigenvalues(cycle(5).adjacency_matrix()))[-1], 2)
