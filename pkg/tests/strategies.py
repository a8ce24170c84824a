"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from leibniz.atlas import sample_tables
from leibniz.exactfield import GF, Q

PRIMES = (2, 3, 5, 7)

prime_fields = st.sampled_from(PRIMES).map(GF)


def scalars(fld):
    if fld.is_prime_field:
        return st.integers(0, fld.modulus - 1)
    return st.fractions(min_value=-20, max_value=20, max_denominator=12).map(Fraction)


@st.composite
def matrices(draw, fld=None, max_rows=4, max_cols=4):
    fld = fld or draw(st.sampled_from([Q, GF(2), GF(3), GF(5)]))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(scalars(fld)) for _ in range(c)] for _ in range(r)]
    return fld, rows


@st.composite
def leibniz_algebras(draw, dims=(2, 3), primes=(2, 3)):
    """Seeded sampler output: a random right Leibniz algebra over GF(p)."""
    d = draw(st.sampled_from(dims))
    p = draw(st.sampled_from(primes))
    seed = draw(st.integers(0, 10**6))
    return sample_tables(d, p, 1, seed)[0]


@st.composite
def random_tables(draw, primes=(2, 3), max_dim=3):
    """Arbitrary (usually non-Leibniz) tables over GF(p)."""
    from leibniz.algcore import StructureTable

    p = draw(st.sampled_from(primes))
    n = draw(st.integers(1, max_dim))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=n**3, max_size=n**3))
    it = iter(vals)
    table = tuple(tuple(tuple(next(it) for _ in range(n)) for _ in range(n)) for _ in range(n))
    return StructureTable(GF(p), n, tuple(f"e{i + 1}" for i in range(n)), table)
