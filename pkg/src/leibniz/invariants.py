"""Structural invariants: kernel, centre, series, radicals, Frattini ideal, flags.

Invariants that need the ideal or subalgebra lattice (Frattini ideal,
nilradical, radical, minimal ideals, semisimplicity) enumerate subspaces and
therefore require a prime field.  Algebras in the left convention are handled
through their opposite algebra wherever the computation is one-sided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algcore import (
    StructureTable,
    Subspace,
    _bracket,
    check_identity,
    full_space,
    generated_subalgebra,
    is_ideal,
    is_lie,
    lift,
    opposite_algebra,
    product_space,
    quotient_algebra,
    span,
    zero_space,
)
from .errors import BadParams, MaximalityViolated, NotLeibniz, RequiresFiniteField
from .exactfield import nullspace
from .lattice import ideal_list, subalgebra_lattice

DEFAULT_RATIONAL_HEIGHT = 3


def _require_prime(L: StructureTable, what: str):
    if not L.field.is_prime_field:
        raise RequiresFiniteField(f"{what} needs a prime field")


# ---------------------------------------------------------------------------
# kernel and centre


def leibniz_kernel(L: StructureTable) -> Subspace:
    """Span of all squares, via the polarized span {b_i^2, [b_i,b_j] + [b_j,b_i]}."""
    if not check_identity(L, L.convention).holds:
        raise NotLeibniz(f"table fails the {L.convention} Leibniz identity")
    n, norm = L.dim, L.field.norm
    vecs = []
    for i in range(n):
        vecs.append(L.table[i][i])
        for j in range(i + 1, n):
            vecs.append(tuple(norm(a + b) for a, b in zip(L.table[i][j], L.table[j][i])))
    return span(L, vecs)


def centre(L: StructureTable) -> Subspace:
    """All z with [z, b_i] = [b_i, z] = 0 for every basis vector."""
    n = L.dim
    eqs = []
    for i in range(n):
        for m in range(n):
            eqs.append([L.table[k][i][m] for k in range(n)])
            eqs.append([L.table[i][k][m] for k in range(n)])
    return Subspace(L.field, n, nullspace(L.field, eqs, n))


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class SeriesResult:
    kind: str
    terms: tuple[Subspace, ...]
    stabilized: bool
    class_or_length: int | None

    @property
    def reaches_zero(self) -> bool:
        return self.class_or_length is not None


def series(L: StructureTable, kind: str = "lower_central", U: Subspace | None = None) -> SeriesResult:
    """Lower central (U^{k+1} = [U^k, U]) or derived series of the subalgebra U (default L).

    For left-convention algebras the lower central series multiplies on the
    left instead.
    """
    if kind not in ("lower_central", "derived"):
        raise BadParams(f"unknown series {kind!r}")
    U = full_space(L) if U is None else U
    terms = [U]
    while True:
        cur = terms[-1]
        if kind == "derived":
            nxt = product_space(L, cur, cur)
        elif L.convention == "right":
            nxt = product_space(L, cur, U)
        else:
            nxt = product_space(L, U, cur)
        if nxt.dim == cur.dim:
            break
        terms.append(nxt)
        if nxt.dim == 0:
            break
    last = terms[-1]
    count = len(terms) - 1 if last.dim == 0 else None
    return SeriesResult(kind, tuple(terms), True, count)


def is_nilpotent(L: StructureTable, U: Subspace | None = None) -> bool:
    return series(L, "lower_central", U).reaches_zero


def is_solvable(L: StructureTable, U: Subspace | None = None) -> bool:
    return series(L, "derived", U).reaches_zero


def nilpotency_class(L: StructureTable) -> int | None:
    return series(L, "lower_central").class_or_length


def derived_length(L: StructureTable) -> int | None:
    return series(L, "derived").class_or_length


# ---------------------------------------------------------------------------
# lattice-backed invariants (prime fields)


def ideals(L: StructureTable) -> tuple[Subspace, ...]:
    _require_prime(L, "ideal enumeration")
    return ideal_list(L)


def maximal_subalgebras(L: StructureTable) -> list[Subspace]:
    """Coatoms of the subalgebra lattice."""
    _require_prime(L, "maximal_subalgebras")
    lat = subalgebra_lattice(L)
    return [lat.nodes[i] for i in lat.coatoms()]


def _sum(L: StructureTable, spaces) -> Subspace:
    out = zero_space(L)
    for S in spaces:
        out = out + S
    return out


def frattini_ideal(L: StructureTable) -> Subspace:
    """Largest ideal inside every maximal subalgebra: the sum of the ideals in their intersection."""
    _require_prime(L, "frattini_ideal")
    M = full_space(L)
    for S in maximal_subalgebras(L):
        M = M & S
    phi = _sum(L, [J for J in ideals(L) if J <= M])
    assert is_ideal(L, phi)
    return phi


def nilradical(L: StructureTable) -> Subspace:
    """Largest nilpotent ideal (sum of all nilpotent ideals, verified nilpotent)."""
    _require_prime(L, "nilradical")
    N = _sum(L, [J for J in ideals(L) if is_nilpotent(L, J)])
    if not is_nilpotent(L, N):
        raise MaximalityViolated("sum of nilpotent ideals is not nilpotent")
    return N


def radical(L: StructureTable) -> Subspace:
    """Largest solvable ideal (sum of all solvable ideals, verified solvable)."""
    _require_prime(L, "radical")
    R = _sum(L, [J for J in ideals(L) if is_solvable(L, J)])
    if not is_solvable(L, R):
        raise MaximalityViolated("sum of solvable ideals is not solvable")
    return R


def minimal_ideals(L: StructureTable) -> list[Subspace]:
    """Minimal nonzero ideals (atoms of the ideal lattice)."""
    nonzero = [J for J in ideals(L) if J.dim]
    return [J for J in nonzero if not any(K.dim < J.dim and K <= J for K in nonzero)]


def maximal_solvable_subalgebras(L: StructureTable) -> list[Subspace]:
    _require_prime(L, "maximal_solvable_subalgebras")
    lat = subalgebra_lattice(L)
    solv = [i for i, U in enumerate(lat.nodes) if is_solvable(L, U)]
    out = []
    for i in solv:
        if not any(j != i and lat.leq(i, j) for j in solv):
            out.append(lat.nodes[i])
    return out


# ---------------------------------------------------------------------------
# cyclicity


@dataclass(frozen=True)
class CyclicVerdict:
    verdict: str  # "yes", "no" or "unknown"
    generator: tuple | None = None

    def __bool__(self):
        return self.verdict == "yes"


def _normalized_vectors(values: Sequence, n: int):
    """Vectors whose first nonzero coordinate is 1.

    With sorted ``values`` the output is in lexicographic order (first
    coordinate most significant).
    """
    for lead in reversed(range(n)):
        for tail in product(values, repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def is_cyclic(L: StructureTable, height: int = DEFAULT_RATIONAL_HEIGHT) -> CyclicVerdict:
    """Search for a single generator.

    Exhaustive over GF(p); over Q only vectors with coordinates of height at
    most ``height`` are tried and a failed search answers ``unknown``.  Scalar
    multiples generate the same subalgebra, so only vectors with leading
    coordinate 1 are tried.
    """
    n = L.dim
    if n == 0:
        return CyclicVerdict("yes", ())
    if L.field.is_prime_field:
        values = list(range(L.field.modulus))
    else:
        vals = {Fraction(a, b) for a in range(-height, height + 1) for b in range(1, height + 1)}
        values = sorted(vals, key=lambda q: (max(abs(q.numerator), q.denominator), abs(q), q < 0))
    # <v> lies in Fv + I, so a generator needs dim I = n - 1 (or n = 1)
    if n > 1 and leibniz_kernel(L).dim < n - 1:
        return CyclicVerdict("no")
    for v in _normalized_vectors(values, n):
        v = tuple(L.field.norm(x) for x in v)
        if generated_subalgebra(L, [v]).dim == n:
            return CyclicVerdict("yes", v)
    return CyclicVerdict("no" if L.field.is_prime_field else "unknown")


# ---------------------------------------------------------------------------
# supersolvability


@dataclass(frozen=True)
class SupersolvableResult:
    holds: bool
    chain: tuple[Subspace, ...] = ()

    def __bool__(self):
        return self.holds


def _is_one_dim_ideal(L: StructureTable, v: tuple) -> bool:
    U = span(L, [v])
    for i in range(L.dim):
        b = L.basis_vector(i)
        if not U.contains(_bracket(L, v, b)) or not U.contains(_bracket(L, b, v)):
            return False
    return True


def one_dim_ideals(L: StructureTable) -> list[Subspace]:
    """All 1-dimensional ideals (GF(p)) or a spanning family of candidates (Q)."""
    n = L.dim
    if L.field.is_prime_field:
        out = []
        for v in _normalized_vectors(range(L.field.modulus), n):
            if _is_one_dim_ideal(L, v):
                out.append(span(L, [v]))
        return out
    return _rational_one_dim_ideals(L)


def _rational_one_dim_ideals(L: StructureTable) -> list[Subspace]:
    # common eigenvectors of all left and right multiplications
    from .algcore import left_mult_matrix, right_mult_matrix

    ops = []
    for i in range(L.dim):
        b = L.basis_vector(i)
        ops.append(right_mult_matrix(L, b))
        ops.append(left_mult_matrix(L, b))
    found: list[Subspace] = []

    def rec(W: Subspace, k: int):
        if W.dim == 0:
            return
        if k == len(ops):
            for row in W.basis:
                S = span(L, [row])
                if S not in found:
                    found.append(S)
            return
        T = ops[k]
        for lam in _rational_eigenvalues(T):
            shifted = [[T[r][c] - (lam if r == c else 0) for c in range(L.dim)] for r in range(L.dim)]
            K = Subspace(L.field, L.dim, nullspace(L.field, shifted, L.dim))
            rec(W & K, k + 1)

    rec(full_space(L), 0)
    return sorted(found)


def _rational_eigenvalues(T) -> list[Fraction]:
    import sympy

    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in T])
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(M.charpoly(lam).as_expr(), lam, domain=sympy.QQ)
    roots = poly.ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def is_supersolvable(L: StructureTable) -> SupersolvableResult:
    """Search for a flag of ideals 0 = J_0 < J_1 < ... < J_n = L with dim J_i = i.

    Backtracks over 1-dimensional ideals of successive quotients.  Quotients of
    supersolvable algebras are supersolvable, so the first branch that fails
    already decides; the loop over candidates only matters for the certificate.
    """
    if L.dim == 0:
        return SupersolvableResult(True, (zero_space(L),))
    for J in one_dim_ideals(L):
        Q, _ = quotient_algebra(L, J)
        sub = is_supersolvable(Q)
        if sub:
            chain = [zero_space(L)]
            for W in sub.chain:
                chain.append(span(L, J.basis + tuple(lift(L, J, w) for w in W.basis)))
            return SupersolvableResult(True, tuple(chain))
        return SupersolvableResult(False)
    return SupersolvableResult(False)


def supersolvable_cross_check(L: StructureTable) -> dict:
    """Compare the flag definition with 'solvable and lower semimodular' (prime fields)."""
    from .lattice import is_lower_semimodular

    _require_prime(L, "the semimodularity cross-check")
    flag = bool(is_supersolvable(L))
    lsm = is_solvable(L) and is_lower_semimodular(subalgebra_lattice(L))
    return {"flag_chain": flag, "solvable_lower_semimodular": lsm, "agree": flag == lsm}


# ---------------------------------------------------------------------------
# simplicity, semisimplicity, quasi-abelian


def is_simple(L: StructureTable) -> bool:
    """Only ideals 0, I and L, and L^2 != I."""
    _require_prime(L, "is_simple")
    I = leibniz_kernel(L)
    allowed = {zero_space(L), I, full_space(L)}
    if any(J not in allowed for J in ideals(L)):
        return False
    return product_space(L, full_space(L), full_space(L)) != I


def is_semisimple(L: StructureTable) -> bool:
    """R(L) = I."""
    _require_prime(L, "is_semisimple")
    return radical(L) == leibniz_kernel(L)


def quasi_abelian_class(L: StructureTable) -> str:
    """``abelian``, ``almost_abelian`` (L = L^2 + Fa, L^2 abelian, a acting as a nonzero scalar) or ``neither``."""
    if not is_lie(L):
        return "neither"
    full = full_space(L)
    D = product_space(L, full, full)
    if D.dim == 0:
        return "abelian"
    if D.dim != L.dim - 1 or product_space(L, D, D).dim != 0:
        return "neither"
    # a0: a basis vector outside L^2; scaling a0 makes its action the identity
    a0 = next(L.basis_vector(i) for i in range(L.dim) if not D.contains(L.basis_vector(i)))
    images = [_bracket(L, d, a0) for d in D.basis]
    c = images[0][D.pivots[0]]
    if not c:
        return "neither"
    norm = L.field.norm
    for d, img in zip(D.basis, images):
        if img != tuple(norm(c * x) for x in d):
            return "neither"
    return "almost_abelian"


def every_subspace_is_subalgebra(L: StructureTable) -> bool:
    """Cross-check for quasi-abelian Lie algebras over GF(p)."""
    _require_prime(L, "every_subspace_is_subalgebra")
    from .lattice import count_subspaces

    return subalgebra_lattice(L).size == count_subspaces(L.dim, L.field.modulus)


# ---------------------------------------------------------------------------
# profile


@dataclass(frozen=True)
class StructureProfile:
    kernel: Subspace
    centre: Subspace
    frattini: Subspace | None
    nilradical: Subspace | None
    radical: Subspace | None
    lower_central: SeriesResult
    derived: SeriesResult
    is_lie: bool
    is_nilpotent: bool
    is_solvable: bool
    is_supersolvable: bool
    is_cyclic: CyclicVerdict
    is_simple: bool | None
    is_semisimple: bool | None
    quasi_abelian_class: str


def structure_profile(L: StructureTable, height: int = DEFAULT_RATIONAL_HEIGHT) -> StructureProfile:
    """Every invariant at once; lattice-backed entries are None over Q."""
    M = opposite_algebra(L) if L.convention == "left" else L
    finite = M.field.is_prime_field
    return StructureProfile(
        kernel=leibniz_kernel(M),
        centre=centre(M),
        frattini=frattini_ideal(M) if finite else None,
        nilradical=nilradical(M) if finite else None,
        radical=radical(M) if finite else None,
        lower_central=series(M, "lower_central"),
        derived=series(M, "derived"),
        is_lie=is_lie(M),
        is_nilpotent=is_nilpotent(M),
        is_solvable=is_solvable(M),
        is_supersolvable=bool(is_supersolvable(M)),
        is_cyclic=is_cyclic(M, height),
        is_simple=is_simple(M) if finite else None,
        is_semisimple=is_semisimple(M) if finite else None,
        quasi_abelian_class=quasi_abelian_class(M),
    )


def _space_doc(L: StructureTable, U: Subspace | None):
    if U is None:
        return None
    return [[L.field.format(x) for x in row] for row in U.basis]


def profile_document(L: StructureTable, prof: StructureProfile) -> dict:
    """Deterministic serialization (scalars as in the LBZ format)."""
    return {
        "field": str(L.field),
        "convention": L.convention,
        "dim": L.dim,
        "kernel": _space_doc(L, prof.kernel),
        "centre": _space_doc(L, prof.centre),
        "frattini": _space_doc(L, prof.frattini),
        "nilradical": _space_doc(L, prof.nilradical),
        "radical": _space_doc(L, prof.radical),
        "lower_central_dims": [U.dim for U in prof.lower_central.terms],
        "derived_dims": [U.dim for U in prof.derived.terms],
        "nilpotency_class": prof.lower_central.class_or_length,
        "derived_length": prof.derived.class_or_length,
        "flags": {
            "is_lie": prof.is_lie,
            "is_nilpotent": prof.is_nilpotent,
            "is_solvable": prof.is_solvable,
            "is_supersolvable": prof.is_supersolvable,
            "is_cyclic": prof.is_cyclic.verdict,
            "is_simple": prof.is_simple,
            "is_semisimple": prof.is_semisimple,
            "quasi_abelian_class": prof.quasi_abelian_class,
        },
    }
