import pytest
from sympy import Poly, symbols

from leibniz.algcore import check_identity, is_lie, span
from leibniz.atlas import algebra_isomorphic
from leibniz.errors import BadParams
from leibniz.exactfield import GF, Q
from leibniz.families import (
    FAMILIES, abelian, almost_abelian, almost_nilpotent, build_family, companion_matrix, cyclic_algebra,
    diamond, heisenberg, irreducible_monics, sl2, split_extension,
)
from leibniz.invariants import (
    centre, is_cyclic, is_nilpotent, is_simple, is_solvable, leibniz_kernel, nilpotency_class,
    quasi_abelian_class,
)
from leibniz.lattice import subalgebra_lattice


def test_cyclic_n2_alpha1_is_diamond():
    for p in (2, 3, 5):
        assert algebra_isomorphic(cyclic_algebra(2, [1], GF(p)), diamond(GF(p))) is not None


def test_cyclic_examples():
    C = cyclic_algebra(3)
    assert is_nilpotent(C) and nilpotency_class(C) == 3
    assert is_cyclic(C).generator == C.basis_vector(0)
    Z = cyclic_algebra(2, [0], GF(3))
    lat = subalgebra_lattice(Z)
    assert [U for U in lat.nodes if 0 < U.dim < 2] == [span(Z, [(0, 1)])]
    assert not is_lie(Z)


def test_cyclic_rejects():
    with pytest.raises(BadParams):
        cyclic_algebra(1)
    with pytest.raises(BadParams):
        cyclic_algebra(2, [1, 2])


def test_diamond_examples():
    D = diamond(GF(5))
    assert leibniz_kernel(D) == span(D, [(1, 0)])
    DQ = diamond(Q)
    assert is_solvable(DQ) and not is_nilpotent(DQ)
    assert len(subalgebra_lattice(diamond(GF(2))).nodes) == 4


def test_almost_abelian():
    A = almost_abelian(2)
    assert is_lie(A) and not is_nilpotent(A)
    assert quasi_abelian_class(almost_abelian(3)) == "almost_abelian"
    assert len(subalgebra_lattice(almost_abelian(2, GF(2))).nodes) == 5
    with pytest.raises(BadParams):
        almost_abelian(1)


def test_almost_nilpotent():
    assert algebra_isomorphic(almost_nilpotent(1, [1], GF(3)), almost_abelian(2, GF(3))) is not None
    L = almost_nilpotent(2, [1, 1], GF(5))
    assert L.dim == 3 and is_lie(L) and is_solvable(L) and not is_nilpotent(L)
    assert almost_nilpotent(3, [1, 2, 2]).dim == 6
    with pytest.raises(BadParams):
        almost_nilpotent(2, [2, 1])
    with pytest.raises(BadParams):
        almost_nilpotent(2, [1])


def test_lie_exemplars():
    H = heisenberg(Q)
    assert nilpotency_class(H) == 2 and centre(H).dim == 1
    assert is_simple(sl2(GF(7)))
    with pytest.raises(BadParams):
        sl2(GF(2))
    A = abelian(3)
    assert is_nilpotent(A) and is_solvable(A) and quasi_abelian_class(A) == "abelian"


def test_every_family_satisfies_its_identity():
    for name in FAMILIES:
        for fld in (Q, GF(3), GF(5)):
            L = build_family(name, fld, n=3 if name not in ("almost_nilpotent",) else 2)
            assert check_identity(L, L.convention).holds
    with pytest.raises(BadParams):
        build_family("octonions")


def _count_irreducibles(m, p):
    x = symbols("x")
    n = 0
    for coeffs in __import__("itertools").product(range(p), repeat=m):
        poly = Poly([1, *reversed(coeffs)], x, modulus=p)
        if poly.is_irreducible:
            n += 1
    return n


@pytest.mark.parametrize("m,p", [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 5)])
def test_irreducible_monics_match_sympy(m, p):
    assert len(irreducible_monics(m, p)) == _count_irreducibles(m, p)


def test_split_extension_is_cyclic_with_kernel_the_module():
    for c in irreducible_monics(2, 3):
        if c[0] == 0:
            continue
        L = split_extension(companion_matrix(c), GF(3))
        assert not is_lie(L)
        assert is_cyclic(L).verdict == "yes"
        assert leibniz_kernel(L) == span(L, [L.basis_vector(0), L.basis_vector(1)])
