"""Leibniz algebras given by structure constants.

A :class:`StructureTable` stores ``[b_i, b_j] = sum_k table[i][j][k] b_k`` for a
fixed basis.  Vectors are coordinate tuples of raw field values (see
:mod:`leibniz.exactfield`).  Nothing about the Leibniz identity is assumed at
construction; :func:`check_identity` verifies it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import BadParams, DimensionMismatch, MixedFields, NotAnIdeal
from .exactfield import FieldSpec, Scalar, reduce_vector, rref_raw

CONVENTIONS = ("right", "left")


def _coerce_vector(fld: FieldSpec, n: int, v: Sequence) -> tuple:
    if len(v) != n:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {n}")
    out = []
    for x in v:
        if isinstance(x, Scalar):
            if x.spec != fld:
                raise MixedFields(f"{x.spec} scalar in a {fld} algebra")
            out.append(x.value)
        else:
            out.append(fld.norm(x))
    return tuple(out)


@dataclass(frozen=True)
class StructureTable:
    field: FieldSpec
    dim: int
    basis_labels: tuple[str, ...]
    table: tuple[tuple[tuple, ...], ...]
    convention: str = "right"

    def __post_init__(self):
        n = self.dim
        if n < 0:
            raise BadParams("negative dimension")
        if len(self.basis_labels) != n or len(set(self.basis_labels)) != n:
            raise BadParams("need exactly dim distinct basis labels")
        if self.convention not in CONVENTIONS:
            raise BadParams(f"unknown convention {self.convention!r}")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise DimensionMismatch("table must be dim x dim")
        table = tuple(
            tuple(_coerce_vector(self.field, n, c) for c in row) for row in self.table
        )
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "table", table)

    @classmethod
    def from_products(
        cls,
        fld: FieldSpec,
        labels: Sequence[str],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        convention: str = "right",
    ) -> StructureTable:
        """Build from ``{(left, right): {label: coefficient}}``; omitted products are zero."""
        n = len(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        table = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (a, b), value in products.items():
            vec = table[idx[a]][idx[b]]
            for lab, coeff in value.items():
                vec[idx[lab]] = coeff
        return cls(fld, n, tuple(labels), tuple(tuple(tuple(c) for c in r) for r in table), convention)

    @classmethod
    def zero_algebra(cls, fld: FieldSpec, n: int, labels: Sequence[str] | None = None) -> StructureTable:
        labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(n))
        z = tuple(fld.zero for _ in range(n))
        return cls(fld, n, labels, tuple(tuple(z for _ in range(n)) for _ in range(n)))

    # cached helpers -------------------------------------------------------

    @cached_property
    def _sparse(self):
        return tuple(
            tuple(tuple((k, c) for k, c in enumerate(vec) if c) for vec in row) for row in self.table
        )

    def basis_vector(self, i: int) -> tuple:
        return tuple(self.field.one if j == i else self.field.zero for j in range(self.dim))

    @property
    def zero(self) -> tuple:
        return tuple(self.field.zero for _ in range(self.dim))

    def vector(self, coords: Mapping[str, object]) -> tuple:
        """Coordinate vector from ``{label: coefficient}``."""
        v = [0] * self.dim
        for lab, c in coords.items():
            v[self.basis_labels.index(lab)] = c
        return _coerce_vector(self.field, self.dim, v)

    def format_vector(self, v: Sequence) -> str:
        terms = []
        for lab, c in zip(self.basis_labels, v):
            if not c:
                continue
            s = self.field.format(c)
            terms.append(lab if s == "1" else f"{s}{lab}" if "/" not in s else f"({s}){lab}")
        return " + ".join(terms) if terms else "0"


def _bracket(L: StructureTable, v: Sequence, w: Sequence) -> tuple:
    n = L.dim
    acc = [0] * n
    sp = L._sparse
    for i, vi in enumerate(v):
        if not vi:
            continue
        row = sp[i]
        for j, wj in enumerate(w):
            if not wj:
                continue
            c = vi * wj
            for k, ck in row[j]:
                acc[k] += c * ck
    norm = L.field.norm
    return tuple(norm(x) for x in acc)


def bracket(L: StructureTable, v: Sequence, w: Sequence) -> tuple:
    """Bilinear extension of the table to arbitrary coordinate vectors."""
    return _bracket(L, _coerce_vector(L.field, L.dim, v), _coerce_vector(L.field, L.dim, w))


# ---------------------------------------------------------------------------
# identities


@dataclass(frozen=True)
class IdentityReport:
    variant: str
    holds: bool
    witness: tuple[int, int, int] | None = None
    defect: tuple | None = None
    failing_variant: str | None = None


def _sub(L, a, b):
    norm = L.field.norm
    return tuple(norm(x - y) for x, y in zip(a, b))


def _add(L, a, b):
    norm = L.field.norm
    return tuple(norm(x + y) for x, y in zip(a, b))


def identity_defect(L: StructureTable, variant: str, i: int, j: int, k: int) -> tuple:
    """``[x,[y,z]] - RHS`` at basis triple (i, j, k) for the right or left identity."""
    x, y, z = (L.basis_vector(t) for t in (i, j, k))
    lhs = _bracket(L, x, L.table[j][k])
    if variant == "right":
        rhs = _sub(L, _bracket(L, L.table[i][j], z), _bracket(L, L.table[i][k], y))
    elif variant == "left":
        rhs = _add(L, _bracket(L, L.table[i][j], z), _bracket(L, y, L.table[i][k]))
    else:
        raise BadParams(f"unknown variant {variant!r}")
    return _sub(L, lhs, rhs)


def check_identity(L: StructureTable, variant: str = "right") -> IdentityReport:
    """Verify the chosen Leibniz identity on all basis triples.

    Trilinearity of the defect makes basis triples sufficient.  ``symmetric``
    means both the right and the left identity.
    """
    if variant == "symmetric":
        for sub in ("right", "left"):
            rep = check_identity(L, sub)
            if not rep.holds:
                return IdentityReport("symmetric", False, rep.witness, rep.defect, sub)
        return IdentityReport("symmetric", True)
    if variant not in CONVENTIONS:
        raise BadParams(f"unknown variant {variant!r}")
    n = L.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                d = identity_defect(L, variant, i, j, k)
                if any(d):
                    return IdentityReport(variant, False, (i, j, k), d, variant)
    return IdentityReport(variant, True)


def is_leibniz(L: StructureTable) -> bool:
    return check_identity(L, L.convention).holds


def is_lie(L: StructureTable) -> bool:
    """Alternating (every square vanishes) and satisfies the Jacobi identity."""
    n = L.dim
    for i in range(n):
        if any(L.table[i][i]):
            return False
        for j in range(i + 1, n):
            if any(_add(L, L.table[i][j], L.table[j][i])):
                return False
    # for an alternating bracket the right Leibniz identity is Jacobi
    return check_identity(L, "right").holds


def right_mult_matrix(L: StructureTable, x: Sequence) -> tuple[tuple, ...]:
    """Matrix M with M @ y == [y, x]; column i is [b_i, x]."""
    x = _coerce_vector(L.field, L.dim, x)
    cols = [_bracket(L, L.basis_vector(i), x) for i in range(L.dim)]
    return tuple(tuple(col[r] for col in cols) for r in range(L.dim))


def left_mult_matrix(L: StructureTable, x: Sequence) -> tuple[tuple, ...]:
    """Matrix M with M @ y == [x, y]."""
    x = _coerce_vector(L.field, L.dim, x)
    cols = [_bracket(L, x, L.basis_vector(i)) for i in range(L.dim)]
    return tuple(tuple(col[r] for col in cols) for r in range(L.dim))


def apply_matrix(fld: FieldSpec, m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(fld.norm(sum(a * b for a, b in zip(row, v))) for row in m)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n held as its canonical rref basis.

    Two subspaces are equal iff their bases are identical.  Instances order by
    ``(dim, basis)``, which is the tie-break used for every emitted list.
    """

    field: FieldSpec
    ambient_dim: int
    basis: tuple[tuple, ...]
    pivots: tuple[int, ...] = dc_field(compare=False, repr=False, default=())

    def __post_init__(self):
        if self.basis and len(self.pivots) != len(self.basis):
            piv = tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)
            object.__setattr__(self, "pivots", piv)

    @classmethod
    def span(cls, fld: FieldSpec, n: int, vectors: Iterable[Sequence]) -> Subspace:
        vecs = [_coerce_vector(fld, n, v) for v in vectors]
        rows, piv = rref_raw(fld, vecs)
        return cls(fld, n, rows, piv)

    @classmethod
    def zero(cls, fld: FieldSpec, n: int) -> Subspace:
        return cls(fld, n, (), ())

    @classmethod
    def full(cls, fld: FieldSpec, n: int) -> Subspace:
        one, z = fld.one, fld.zero
        rows = tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))
        return cls(fld, n, rows, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sort_key(self):
        return (self.dim, self.basis)

    def __lt__(self, other: Subspace) -> bool:
        return self.sort_key() < other.sort_key()

    def reduce(self, v: Sequence) -> tuple:
        return reduce_vector(self.field, self.basis, self.pivots, v)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def issubset(self, other: Subspace) -> bool:
        return self.dim <= other.dim and all(other.contains(r) for r in self.basis)

    def __le__(self, other: Subspace) -> bool:
        return self.issubset(other)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: Subspace) -> Subspace:
        # Zassenhaus: rows (u|u) and (v|0); zero left halves carry U ∩ V
        n = self.ambient_dim
        z = tuple(self.field.zero for _ in range(n))
        rows = [u + u for u in self.basis] + [v + z for v in other.basis]
        red, _ = rref_raw(self.field, rows)
        return Subspace.span(self.field, n, [r[n:] for r in red if not any(r[:n])])

    __and__ = intersection


def _check_ambient(L: StructureTable, *spaces: Subspace):
    for U in spaces:
        if U.ambient_dim != L.dim:
            raise DimensionMismatch(f"subspace of F^{U.ambient_dim} in a {L.dim}-dim algebra")
        if U.field != L.field:
            raise MixedFields(f"{U.field} subspace in a {L.field} algebra")


def full_space(L: StructureTable) -> Subspace:
    return Subspace.full(L.field, L.dim)


def zero_space(L: StructureTable) -> Subspace:
    return Subspace.zero(L.field, L.dim)


def span(L: StructureTable, vectors: Iterable[Sequence]) -> Subspace:
    return Subspace.span(L.field, L.dim, vectors)


def product_space(L: StructureTable, U: Subspace, V: Subspace) -> Subspace:
    """Span of ``[u, v]`` over basis vectors u of U and v of V."""
    _check_ambient(L, U, V)
    return span(L, [_bracket(L, u, v) for u in U.basis for v in V.basis])


def generated_subalgebra(L: StructureTable, gens: Iterable[Sequence]) -> Subspace:
    """Least subalgebra containing ``gens``: extend by pairwise products to a fixpoint."""
    S = span(L, gens)
    while True:
        basis = S.basis
        prods = [_bracket(L, u, v) for u in basis for v in basis]
        T = span(L, basis + tuple(prods))
        if T.dim == S.dim:
            return S
        S = T


def is_subalgebra(L: StructureTable, U: Subspace) -> bool:
    return all(U.contains(_bracket(L, u, v)) for u in U.basis for v in U.basis)


class SubspaceKind(str, enum.Enum):
    NOT_SUBALGEBRA = "not_subalgebra"
    SUBALGEBRA = "subalgebra"
    RIGHT_IDEAL = "right_ideal"
    LEFT_IDEAL = "left_ideal"
    IDEAL = "ideal"


def _absorbs(L: StructureTable, U: Subspace, side: str) -> bool:
    n = L.dim
    for u in U.basis:
        for i in range(n):
            b = L.basis_vector(i)
            w = _bracket(L, u, b) if side == "right" else _bracket(L, b, u)
            if not U.contains(w):
                return False
    return True


def classify_subspace(L: StructureTable, U: Subspace) -> SubspaceKind:
    """Strongest of: ideal, right_ideal ([U,L] ⊆ U), left_ideal ([L,U] ⊆ U), subalgebra."""
    _check_ambient(L, U)
    r = _absorbs(L, U, "right")
    lft = _absorbs(L, U, "left")
    if r and lft:
        return SubspaceKind.IDEAL
    if r:
        return SubspaceKind.RIGHT_IDEAL
    if lft:
        return SubspaceKind.LEFT_IDEAL
    return SubspaceKind.SUBALGEBRA if is_subalgebra(L, U) else SubspaceKind.NOT_SUBALGEBRA


def is_ideal(L: StructureTable, U: Subspace) -> bool:
    return _absorbs(L, U, "right") and _absorbs(L, U, "left")


def quotient_algebra(L: StructureTable, J: Subspace):
    """``L/J`` on the non-pivot coordinates of J's rref basis.

    Returns ``(table, projection)`` where ``projection[i]`` is the class of
    the i-th basis vector of L in quotient coordinates.
    """
    _check_ambient(L, J)
    if not is_ideal(L, J):
        raise NotAnIdeal("quotient needs a two-sided ideal")
    keep = [c for c in range(L.dim) if c not in J.pivots]

    def cls(v):
        r = J.reduce(v)
        return tuple(r[c] for c in keep)

    table = tuple(
        tuple(cls(L.table[a][b]) for b in keep) for a in keep
    )
    labels = tuple(L.basis_labels[c] for c in keep)
    Q = StructureTable(L.field, len(keep), labels, table, L.convention)
    projection = tuple(cls(L.basis_vector(i)) for i in range(L.dim))
    return Q, projection


def lift(L: StructureTable, J: Subspace, qv: Sequence) -> tuple:
    """A representative in L of the quotient vector ``qv`` (inverse of the projection on the complement)."""
    keep = [c for c in range(L.dim) if c not in J.pivots]
    v = [L.field.zero] * L.dim
    for c, x in zip(keep, qv):
        v[c] = x
    return tuple(v)


def direct_sum(L1: StructureTable, L2: StructureTable) -> StructureTable:
    """Block-diagonal table; clashing labels of the second summand get a prime."""
    if L1.field != L2.field:
        raise MixedFields(f"{L1.field} vs {L2.field}")
    if L1.convention != L2.convention:
        raise BadParams("summands use different conventions")
    n1, n2 = L1.dim, L2.dim
    n = n1 + n2
    labels2 = [lab if lab not in L1.basis_labels else lab + "'" for lab in L2.basis_labels]
    while len(set(L1.basis_labels) | set(labels2)) < n:
        labels2 = [lab + "'" for lab in labels2]
    z = tuple(L1.field.zero for _ in range(n))
    table = [[z] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            table[i][j] = L1.table[i][j] + (L1.field.zero,) * n2
    for i in range(n2):
        for j in range(n2):
            table[n1 + i][n1 + j] = (L1.field.zero,) * n1 + L2.table[i][j]
    return StructureTable(
        L1.field, n, L1.basis_labels + tuple(labels2), tuple(map(tuple, table)), L1.convention
    )


def opposite_algebra(L: StructureTable) -> StructureTable:
    """Same space with ``[x, y]_op = [y, x]``; swaps the right and left conventions."""
    n = L.dim
    table = tuple(tuple(L.table[j][i] for j in range(n)) for i in range(n))
    conv = "left" if L.convention == "right" else "right"
    return StructureTable(L.field, n, L.basis_labels, table, conv)


def change_basis(L: StructureTable, g: Sequence[Sequence], labels: Sequence[str] | None = None) -> StructureTable:
    """Table in the basis whose i-th vector is row ``g[i]`` (old coordinates)."""
    from .exactfield import mat_inverse

    fld, n = L.field, L.dim
    ginv = mat_inverse(fld, g)
    if ginv is None:
        raise BadParams("change of basis must be invertible")
    rows = [_coerce_vector(fld, n, r) for r in g]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            w = _bracket(L, rows[i], rows[j])
            # new coordinates: w = sum_k c_k g[k]  =>  c = w @ ginv
            row.append(tuple(fld.norm(sum(w[a] * ginv[a][k] for a in range(n))) for k in range(n)))
        table.append(tuple(row))
    return StructureTable(fld, n, tuple(labels) if labels else L.basis_labels, tuple(table), L.convention)
