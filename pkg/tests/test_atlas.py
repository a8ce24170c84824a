import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz.algcore import change_basis, opposite_algebra
from leibniz.atlas import (
    ASSERTED, EXPLORATORY, THEOREMS, _orbit, _random_gl, algebra_isomorphic, atlas_document, atlas_text,
    build_corpus, canonical_form, candidate_count, cluster_by_fingerprint, entry_id, enumerate_algebras,
    enumerate_tables, gl_group, gl_order, kernel_law_failures, prop26_failures, prop26_instances,
    replay_violation, run_atlas, run_theorem_suite, sample_population, sample_tables, table_array,
)
from leibniz.errors import BadParams, CapExceeded, MixedFields, RequiresFiniteField
from leibniz.exactfield import GF, Q
from leibniz.families import abelian, almost_abelian, cyclic_algebra, diamond, heisenberg, sl2
from leibniz.invariants import is_lie

from .oracles import dim2_gf2
from .strategies import leibniz_algebras


def flat(L):
    return tuple(int(c) for row in L.table for vec in row for c in vec)


# enumeration


def test_dim2_gf2_matches_brute_force_oracle():
    orbits = dim2_gf2.orbits()
    assert len(dim2_gf2.leibniz_tables()) == 13
    assert sorted(len(o) for o in orbits) == [1, 3, 3, 6]
    reps = enumerate_tables(2, 2)
    assert [flat(L) for L in reps] == [min(o) for o in orbits]


def test_dim1_has_only_the_abelian_algebra():
    for p in (2, 3, 5):
        reps = enumerate_tables(1, p)
        assert len(reps) == 1 and flat(reps[0]) == (0,)


def test_dim2_contains_the_named_algebras():
    for p in (2, 3):
        reps = enumerate_tables(2, p)
        assert len(reps) == 4
        for L in (diamond(GF(p)), cyclic_algebra(2, [0], GF(p)), abelian(2, GF(p)), almost_abelian(2, GF(p))):
            assert sum(algebra_isomorphic(L, R) is not None for R in reps) == 1


def test_dim3_gf2_orbits_cover_every_leibniz_table():
    # 806 Leibniz tables among all 2^27 dim-3 tables over GF(2), counted by a separate brute-force filter
    G, Ginv = gl_group(3, 2)
    reps = enumerate_tables(3, 2)
    assert len(reps) == 20
    assert sum(len(_orbit(table_array(L), 2, G, Ginv)) for L in reps) == 806


def test_dim3_gf3_class_count():
    assert len(enumerate_tables(3, 3)) == 27


def test_left_variant_is_the_opposite():
    right = enumerate_tables(2, 3)
    left = enumerate_tables(2, 3, variant="left")
    assert [L.convention for L in left] == ["left"] * 4
    assert sorted(flat(opposite_algebra(L)) for L in right) == sorted(flat(L) for L in left)


def test_enumeration_caps():
    with pytest.raises(CapExceeded):
        enumerate_tables(4, 2)
    with pytest.raises(CapExceeded):
        gl_group(4, 3)
    assert gl_order(3, 3) == 11232 and gl_order(2, 2) == 6
    assert len(gl_group(2, 3)[0]) == gl_order(2, 3)


def test_candidate_count_is_far_below_all_tables():
    assert candidate_count(3, 3) < 3 ** 27 // 10**6


def test_canonical_form_is_orbit_invariant():
    L = enumerate_tables(3, 3)[5]
    rng = random.Random(4)
    M = change_basis(L, _random_gl(3, 3, rng))
    assert canonical_form(M) == canonical_form(L) == L


def test_corpus_entries():
    entries = list(enumerate_algebras(2, 3))
    assert len(entries) == 4 and all(e.iso_class_rep for e in entries)
    assert entries[0].id == entry_id(entries[0].table) and len(entries[0].id) == 16
    assert [e.id for e in entries] == [e.id for e in enumerate_algebras(2, 3)]
    samples = list(enumerate_algebras(3, 2, mode="sample", count=5, seed=9))
    assert len(samples) == 5 and not any(e.iso_class_rep for e in samples)
    with pytest.raises(BadParams):
        list(enumerate_algebras(2, 2, mode="guess"))


# sampling


def test_sampling_is_seeded():
    a = sample_tables(4, 3, 12, seed=7)
    assert a == sample_tables(4, 3, 12, seed=7)
    assert a != sample_tables(4, 3, 12, seed=8)
    pop = sample_population(40, seed=1)
    assert len(pop) == 40
    assert {(L.dim, L.field.modulus) for L in pop} == {(3, 2), (3, 3), (4, 2), (4, 3)}
    assert any(not is_lie(L) for L in pop) and any(is_lie(L) and any(map(any, L.table)) for L in pop)


def test_left_samples():
    from leibniz.algcore import check_identity
    for L in sample_tables(3, 3, 5, seed=2, variant="left"):
        assert L.convention == "left" and check_identity(L, "left").holds


# isomorphism


def test_isomorphism_examples():
    D = diamond(GF(3))
    swapped = change_basis(D, [[0, 1], [1, 0]], labels=("b", "a"))
    g = algebra_isomorphic(D, swapped)
    assert g is not None and [list(r) for r in g] == [[0, 1], [1, 0]]
    assert algebra_isomorphic(D, abelian(2, GF(3))) is None
    assert algebra_isomorphic(cyclic_algebra(3, fld=GF(3)), heisenberg(GF(3))) is None
    assert algebra_isomorphic(D, abelian(3, GF(3))) is None
    with pytest.raises(MixedFields):
        algebra_isomorphic(D, diamond(GF(5)))
    with pytest.raises(RequiresFiniteField):
        algebra_isomorphic(diamond(Q), diamond(Q))
    with pytest.raises(CapExceeded):
        algebra_isomorphic(sl2(GF(5)), sl2(GF(5)), max_gl_order=1000)


@given(leibniz_algebras(dims=(2, 3)), st.integers(0, 2**32), st.integers(0, 2**32))
def test_isomorphism_is_an_equivalence(L, s1, s2):
    from leibniz.exactfield import mat_inverse

    p, n = L.field.modulus, L.dim
    M = change_basis(L, _random_gl(n, p, random.Random(s1)))
    N = change_basis(M, _random_gl(n, p, random.Random(s2)))
    assert algebra_isomorphic(L, L) is not None
    g = algebra_isomorphic(L, M)
    assert g is not None
    # the images of L's basis satisfy L's table inside M, and the inverse matrix maps back
    assert change_basis(M, g).table == L.table
    assert change_basis(L, mat_inverse(L.field, g)).table == M.table
    assert algebra_isomorphic(M, L) is not None
    assert algebra_isomorphic(L, N) is not None


# suites


@pytest.fixture(scope="module")
def small_run():
    return run_atlas(dims=(1, 2, 3), primes=(2, 3), jobs=1)


def test_dim2_gf2_kernel_basic():
    corpus = build_corpus((2,), (2,))
    rep = {r.theorem_id: r for r in run_theorem_suite(corpus, prop26=[]).reports}["kernel-basic"]
    assert rep.population == 4 and rep.passes == 4 and rep.violations == []


def test_nilpotent_cyclic_unique_max_on_cyclic3():
    from leibniz.atlas import CorpusEntry, _make_entry
    e = _make_entry((cyclic_algebra(3, fld=GF(3)), False))
    rep = {r.theorem_id: r for r in run_theorem_suite([e], prop26=[]).reports}["nilpotent-cyclic-unique-max"]
    assert rep.population == 1 and rep.passes == 1


def test_prop26_instances():
    inst = prop26_instances()
    assert len(inst) >= 10
    assert all(prop26_failures(L) == [] for L in inst)
    # the diamond has x^2 != 0, so it is outside the construction and must be flagged
    assert prop26_failures(diamond(GF(3))) == ["hypothesis: x^2 is nonzero"]


def test_kernel_laws_on_sampled_population():
    for L in sample_population(60, seed=3):
        assert kernel_law_failures(L) == []


def test_small_run_reports(small_run):
    reports = {r.theorem_id: r for r in small_run.suite.reports}
    assert tuple(reports) == THEOREMS
    assert small_run.ok
    for tid in ASSERTED:
        assert reports[tid].mode == "asserted" and reports[tid].violations == []
    for tid in EXPLORATORY:
        assert reports[tid].mode == "exploratory" and reports[tid].population > 0
    barnes = reports["barnes-kernel"]
    exceptions = barnes.notes["documented_exceptions"]
    assert {e["field"] for e in exceptions} >= {"GF(2)", "GF(3)"}
    assert all(e["detail"]["map"] == [0, 2, 1, 3] for e in exceptions)


def test_violations_replay(small_run):
    doc = atlas_document(small_run)
    seen = 0
    for rep in doc["theorems"]:
        for v in rep["violations"]:
            assert replay_violation(rep["theorem_id"], v)
            seen += 1
    assert seen > 0


def test_replay_detects_tampering(small_run):
    doc = atlas_document(small_run)
    rep = next(r for r in doc["theorems"] if r["theorem_id"] == "cyclic-chain")
    v = json.loads(json.dumps(rep["violations"][0]))
    (eid,) = v["ids"]
    v["tables"][eid] = json.loads(json.dumps(v["tables"][eid]))
    v["tables"][eid]["products"] = []
    assert not replay_violation("cyclic-chain", v)


def test_clusters_find_abelian_vs_almost_abelian():
    corpus = build_corpus((2,), (2,))
    clusters = cluster_by_fingerprint(corpus)
    ids = {e.id: e.table for e in corpus}
    pairs = [tuple(sorted((ids[a], ids[b]), key=flat)) for c in clusters for a, b in c.latiso_not_iso]
    ab, aa = abelian(2, GF(2)), almost_abelian(2, GF(2))
    assert any(algebra_isomorphic(x, ab) is not None and algebra_isomorphic(y, aa) is not None
               or algebra_isomorphic(y, ab) is not None and algebra_isomorphic(x, aa) is not None
               for x, y in pairs)
    # every entry is in exactly one class
    members = [i for c in clusters for cls in c.classes for i in cls]
    assert sorted(members) == sorted(ids)


def test_document_is_deterministic_across_jobs(small_run):
    again = run_atlas(dims=(1, 2, 3), primes=(2, 3), jobs=3)
    a = json.dumps(atlas_document(small_run), sort_keys=True)
    assert a == json.dumps(atlas_document(again), sort_keys=True)
    assert atlas_text(small_run) == atlas_text(again)
    header = atlas_document(small_run)["header"]
    assert header["seed"] == 0 and header["convention"] == "right"
