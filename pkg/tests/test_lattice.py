import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz.algcore import Subspace, generated_subalgebra, span
from leibniz.atlas import algebra_isomorphic, enumerate_tables
from leibniz.errors import CapExceeded, RequiresFiniteField
from leibniz.exactfield import GF, Q
from leibniz.families import abelian, almost_abelian, cyclic_algebra, diamond, heisenberg, sl2
from leibniz.invariants import leibniz_kernel
from leibniz.lattice import (
    LatticeMap, abstract_lattice, count_subspaces, enumerate_subspaces, gaussian_binomial, induced_map,
    is_lower_semimodular, is_lower_semimodular_element, is_upper_semimodular_element, join,
    lattice_automorphisms, lattice_fingerprint, lattice_isomorphism, maximal_chain_lengths, meet,
    subalgebra_lattice, to_document, to_dot,
)

from .oracles import brute_lattice
from .strategies import leibniz_algebras


def points(U: Subspace, p: int):
    return brute_lattice._span(p, U.ambient_dim, [tuple(int(x) for x in r) for r in U.basis])


def test_subspace_counts():
    assert len(list(enumerate_subspaces(2, 2))) == 5
    assert len(list(enumerate_subspaces(3, 2))) == 16
    assert list(enumerate_subspaces(0, 5)) == [()]
    assert gaussian_binomial(4, 2, 3) == 130
    for n, p in [(3, 3), (3, 2), (2, 5)]:
        assert len(list(enumerate_subspaces(n, p))) == count_subspaces(n, p) == len(brute_lattice.subspaces(p, n))


def test_subspace_enumeration_is_canonical_and_sorted():
    rows = list(enumerate_subspaces(3, 3))
    spaces = [Subspace.span(GF(3), 3, r) for r in rows]
    assert [U.basis for U in spaces] == rows
    assert spaces == sorted(spaces)


def test_caps_fail_loudly():
    with pytest.raises(CapExceeded, match="subspace count"):
        list(enumerate_subspaces(7, 2))
    with pytest.raises(CapExceeded):
        subalgebra_lattice(abelian(2, GF(11)))
    with pytest.raises(RequiresFiniteField):
        subalgebra_lattice(diamond(Q))


def test_diamond_lattice():
    D = diamond(GF(5))
    lat = subalgebra_lattice(D)
    assert lat.nodes == (span(D, []), span(D, [(1, 0)]), span(D, [(4, 1)]), span(D, [(1, 0), (0, 1)]))
    assert lat.node_meta == ((0, True), (1, True), (1, False), (2, True))
    assert len(subalgebra_lattice(diamond(GF(2))).nodes) == 4
    assert len(subalgebra_lattice(abelian(2, GF(2))).nodes) == 5
    assert len(subalgebra_lattice(almost_abelian(2, GF(2))).nodes) == 5


def test_nilpotent_cyclic_lattice():
    C = cyclic_algebra(3, fld=GF(3))
    lat = subalgebra_lattice(C)
    assert lat.coatoms() == [lat.index_of(leibniz_kernel(C))]
    assert maximal_chain_lengths(lat) == (3, 3)
    # not a chain: span{x^2, x^3} has the four lines of a plane below it
    assert lat.size == 7


def test_join_meet():
    D = diamond(GF(5))
    lat = subalgebra_lattice(D)
    assert join(lat, 1, 2) == lat.top and meet(lat, 1, 2) == 0
    for i in range(lat.size):
        assert meet(lat, i, 0) == 0 and join(lat, i, i) == i


@pytest.mark.parametrize("L", [diamond(GF(3)), heisenberg(GF(2)), cyclic_algebra(3, fld=GF(2)),
                               sl2(GF(3)), almost_abelian(3, GF(2))])
def test_closure_and_transitive_reduction(L):
    lat = subalgebra_lattice(L)
    idx = {U: i for i, U in enumerate(lat.nodes)}
    assert lat.nodes[0].dim == 0 and lat.nodes[-1].dim == L.dim
    for i, U in enumerate(lat.nodes):
        for j, V in enumerate(lat.nodes):
            assert idx[U.intersection(V)] == meet(lat, i, j)
            assert idx[generated_subalgebra(L, U.basis + V.basis)] == join(lat, i, j)
    cov = set(lat.covers)
    for i, j in cov:
        assert not any((i, k) in cov and lat.leq(k, j) and k != j for k in range(lat.size))


def test_chain_lengths():
    assert maximal_chain_lengths(subalgebra_lattice(diamond(GF(5)))) == (2, 2)
    assert maximal_chain_lengths(subalgebra_lattice(abelian(2, GF(2)))) == (2, 2)


def test_semimodularity():
    A = subalgebra_lattice(abelian(2, GF(2)))
    assert all(is_upper_semimodular_element(A, u) and is_lower_semimodular_element(A, u) for u in range(A.size))
    D = subalgebra_lattice(diamond(GF(5)))
    assert is_upper_semimodular_element(D, 1)
    chain = abstract_lattice(4, [(0, 1), (1, 2), (2, 3)])
    assert is_lower_semimodular(chain)
    assert all(is_lower_semimodular_element(chain, u) for u in range(4))
    C = subalgebra_lattice(cyclic_algebra(3, fld=GF(3)))
    assert all(is_lower_semimodular_element(C, u) for u in range(C.size))
    # the pentagon is not lower semimodular
    pentagon = abstract_lattice(5, [(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)])
    assert not is_lower_semimodular(pentagon)


def test_fingerprints():
    D = lattice_fingerprint(subalgebra_lattice(diamond(GF(7))))
    assert (D.nodes, D.atoms, D.coatoms) == (4, 2, 2)
    assert D == lattice_fingerprint(subalgebra_lattice(diamond(GF(2))))
    a, b = abelian(2, GF(2)), almost_abelian(2, GF(2))
    assert lattice_fingerprint(subalgebra_lattice(a)) == lattice_fingerprint(subalgebra_lattice(b))
    assert lattice_fingerprint(subalgebra_lattice(a)).nodes == 5 != D.nodes


def test_isomorphism_examples():
    D = subalgebra_lattice(diamond(GF(5)))
    ident = lattice_isomorphism(D, D)
    assert ident is not None
    autos = lattice_automorphisms(D)
    assert sorted(m.map for m in autos) == [(0, 1, 2, 3), (0, 2, 1, 3)]
    assert lattice_isomorphism(D, D, fixed={1: 2}).map == (0, 2, 1, 3)
    A = subalgebra_lattice(abelian(2, GF(2)))
    assert lattice_isomorphism(subalgebra_lattice(diamond(GF(2))), A) is None
    assert len(lattice_automorphisms(A)) == 6
    chain = abstract_lattice(3, [(0, 1), (1, 2)])
    assert len(lattice_automorphisms(chain)) == 1
    with pytest.raises(CapExceeded):
        lattice_automorphisms(A, max_nodes=4)


def test_lattice_maps_are_checked():
    D = subalgebra_lattice(diamond(GF(5)))
    with pytest.raises(ValueError):
        LatticeMap(D, D, (1, 0, 2, 3))


def test_exports():
    D = subalgebra_lattice(diamond(GF(5)))
    dot = to_dot(D)
    assert dot.startswith("digraph lattice {") and 'label="1:[1,0]"' in dot and 'label="1:[1,4]"' in dot
    assert dot.count("->") == 4
    doc = to_document(D)
    assert [n["ideal"] for n in doc["nodes"]] == [True, True, False, True]
    assert doc["fingerprint"]["nodes"] == 4


@pytest.mark.parametrize("p", [2, 3])
def test_lattices_match_point_set_oracle(p):
    for L in enumerate_tables(3, p) + enumerate_tables(2, p):
        lat = subalgebra_lattice(L)
        raw = [[[int(c) for c in vec] for vec in row] for row in L.table]
        expected = brute_lattice.subalgebras(raw, p)
        assert {points(U, p) for U in lat.nodes} == set(expected)
        assert maximal_chain_lengths(lat) == brute_lattice.chain_lengths(expected)


# properties


@given(leibniz_algebras(dims=(2, 3)), st.integers(0, 10**6))
def test_isomorphism_is_symmetric_and_sound(L, seed):
    from leibniz.atlas import sample_tables

    M = sample_tables(L.dim, L.field.modulus, 1, seed)[0]
    A, B = subalgebra_lattice(L), subalgebra_lattice(M)
    f = lattice_isomorphism(A, B)
    g = lattice_isomorphism(B, A)
    assert (f is None) == (g is None)
    if f is not None:
        assert lattice_fingerprint(A) == lattice_fingerprint(B)
        assert lattice_isomorphism(B, A, fixed=dict(enumerate(f.inverse().map))) is not None


@given(leibniz_algebras(dims=(2, 3)), st.integers(0, 2**32).map(random.Random))
def test_algebra_isomorphisms_induce_lattice_isomorphisms(L, rnd):
    from leibniz.algcore import change_basis
    from leibniz.atlas import _random_gl

    M = change_basis(L, _random_gl(L.dim, L.field.modulus, rnd))
    h = algebra_isomorphic(L, M)
    assert h is not None
    A, B = subalgebra_lattice(L), subalgebra_lattice(M)
    f = induced_map(A, B, h)
    assert sorted(f.map) == list(range(A.size))
    assert f(A.index_of(leibniz_kernel(L))) == B.index_of(leibniz_kernel(M))
