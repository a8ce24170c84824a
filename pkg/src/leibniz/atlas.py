"""Small-algebra corpora, isomorphism testing and the theorem harness.

Full enumeration works in a kernel-adapted basis.  If I is the Leibniz
kernel of L with dim I = d, choose a basis u_1..u_m of a complement followed
by a basis w_1..w_d of I.  Then [L, w] = 0, [w, u_a] lies in I, and the
u-components of [u_a, u_b] form an alternating table (L/I is Lie).  Every
Leibniz algebra of dimension n is isomorphic to some table of this shape for
some d, and every shape table that passes the identity is Leibniz.  The union
over d = 0..n-1, deduplicated by GL(n, p) orbits, is therefore exactly the
set of isomorphism classes.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import lbz
from ._version import __version__
from .algcore import (
    StructureTable,
    Subspace,
    bracket,
    change_basis,
    check_identity,
    direct_sum,
    full_space,
    is_ideal,
    is_lie,
    opposite_algebra,
    product_space,
    quotient_algebra,
    span,
)
from .errors import BadParams, CapExceeded, MixedFields, RequiresFiniteField
from .exactfield import GF, FieldSpec, mat_inverse, rref_raw
from .families import almost_nilpotent, companion_matrix, cyclic_algebra, irreducible_monics, split_extension, sl2
from .invariants import (
    StructureProfile,
    centre,
    frattini_ideal,
    ideals,
    is_cyclic,
    leibniz_kernel,
    maximal_solvable_subalgebras,
    maximal_subalgebras,
    minimal_ideals,
    radical,
    series,
    structure_profile,
    supersolvable_cross_check,
)
from .lattice import (
    Fingerprint,
    lattice_fingerprint,
    lattice_isomorphism,
    maximal_chain_lengths,
    subalgebra_lattice,
)

DEFAULT_MAX_GL_ORDER = 10**6
DEFAULT_SEED = 0
FULL_MAX_DIM = 3
MAX_CANDIDATES = 2_000_000
_CHUNK = 4096

ASSERTED = ("kernel-basic", "min-ideal-dichotomy", "nilpotent-cyclic-unique-max", "nilpotent-frattini", "prop-2.6")
EXPLORATORY = (
    "barnes-kernel", "lie-vs-nonlie", "cyclic-chain", "radical-intersection",
    "nilpmin-central", "almost-nilpotent-latiso",
)
THEOREMS = ASSERTED + EXPLORATORY


def _labels(n: int) -> tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(n))


def _right_form(L: StructureTable) -> StructureTable:
    return opposite_algebra(L) if L.convention == "left" else L


# ---------------------------------------------------------------------------
# tables as arrays


def table_array(L: StructureTable) -> np.ndarray:
    if not L.field.is_prime_field:
        raise RequiresFiniteField("array tables need a prime field")
    return np.array(L.table, dtype=np.int64).reshape(L.dim, L.dim, L.dim)


def array_table(arr: np.ndarray, p: int, labels: Sequence[str] | None = None,
                convention: str = "right") -> StructureTable:
    n = arr.shape[0]
    arr = np.asarray(arr, dtype=np.int64).reshape(n, n, n) % p
    table = tuple(tuple(tuple(int(c) for c in arr[i, j]) for j in range(n)) for i in range(n))
    return StructureTable(GF(p), n, tuple(labels) if labels else _labels(n), table, convention)


def identity_holds(C: np.ndarray, p: int) -> np.ndarray:
    """Right identity for a batch of tables C[b, i, j, k] (vectorized)."""
    lhs = np.einsum("bjkm,bimt->bijkt", C, C)
    r1 = np.einsum("bijm,bmkt->bijkt", C, C)
    r2 = np.einsum("bikm,bmjt->bijkt", C, C)
    return ((lhs - r1 + r2) % p == 0).reshape(len(C), -1).all(axis=1)


# ---------------------------------------------------------------------------
# GL(n, p)


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


@lru_cache(maxsize=8)
def _gl(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    total = p ** (n * n)
    powers = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    mats = ((np.arange(total, dtype=np.int64)[:, None] // powers) % p).reshape(total, n, n)
    det = np.rint(np.linalg.det(mats.astype(float))).astype(np.int64)
    keep = det % p != 0
    G, det = mats[keep], det[keep]
    adj = np.rint(np.linalg.inv(G.astype(float)) * det[:, None, None]).astype(np.int64)
    inv_table = np.array([0] + [pow(i, -1, p) for i in range(1, p)], dtype=np.int64)
    Ginv = (adj % p) * inv_table[det % p][:, None, None] % p
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), G.shape)
    if not ((np.matmul(G, Ginv) % p) == eye).all():
        raise ArithmeticError("GL inverse computation lost precision")
    return G, Ginv


def gl_group(n: int, p: int, max_order: int = DEFAULT_MAX_GL_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """All invertible n x n matrices over GF(p) (lexicographic order) and their inverses."""
    order = gl_order(n, p)
    if order > max_order:
        raise CapExceeded(f"|GL({n},{p})| = {order} exceeds the cap of {max_order}")
    return _gl(n, p)


def _orbit(C: np.ndarray, p: int, G: np.ndarray, Ginv: np.ndarray) -> np.ndarray:
    """Sorted distinct flattened tables of the orbit of C under basis change.

    The new basis vector i is row g[i]; the transformed table is
    C'[i,j,k] = sum g[i,a] g[j,b] C[a,b,c] ginv[c,k].
    """
    T = np.einsum("gia,abc->gibc", G, C)
    T = np.einsum("gjb,gibc->gijc", G, T)
    T = np.einsum("gijc,gck->gijk", T, Ginv) % p
    return np.unique(T.reshape(len(G), -1).astype(np.uint16), axis=0)


def canonical_form(L: StructureTable, max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> StructureTable:
    """Lexicographically least table in the GL orbit of L (same convention)."""
    p = L.field.modulus if L.field.is_prime_field else None
    if p is None:
        raise RequiresFiniteField("canonical forms need a prime field")
    G, Ginv = gl_group(L.dim, p, max_gl_order)
    row = _orbit(table_array(L), p, G, Ginv)[0]
    return array_table(row.reshape((L.dim,) * 3), p, convention=L.convention)


def _quick_invariants(L: StructureTable) -> tuple:
    return (
        leibniz_kernel(L).dim,
        centre(L).dim,
        tuple(U.dim for U in series(L, "lower_central").terms),
        tuple(U.dim for U in series(L, "derived").terms),
        is_lie(L),
    )


def algebra_isomorphic(L1: StructureTable, L2: StructureTable,
                       max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> tuple[tuple[int, ...], ...] | None:
    """An isomorphism L1 -> L2 as a matrix g (b_i maps to row g[i]), or None.

    Brute force over GL(n, p) after cheap invariant filters.
    """
    if L1.field != L2.field:
        raise MixedFields(f"{L1.field} vs {L2.field}")
    if not L1.field.is_prime_field:
        raise RequiresFiniteField("algebra_isomorphic searches GL(n, p)")
    if L1.convention != L2.convention:
        raise BadParams("both algebras must use the same convention")
    if L1.dim != L2.dim:
        return None
    n, p = L1.dim, L1.field.modulus
    M1, M2 = _right_form(L1), _right_form(L2)
    if _quick_invariants(M1) != _quick_invariants(M2):
        return None
    G, _ = gl_group(n, p, max_gl_order)
    C1, C2 = table_array(L1), table_array(L2)
    for start in range(0, len(G), 65536):
        g = G[start:start + 65536]
        lhs = np.einsum("ijc,gck->gijk", C1, g) % p
        rhs = np.einsum("gia,gjb,abk->gijk", g, g, C2) % p
        hits = np.nonzero((lhs == rhs).reshape(len(g), -1).all(axis=1))[0]
        if len(hits):
            mat = tuple(tuple(int(x) for x in r) for r in g[hits[0]])
            if not _is_isomorphism(L1, L2, mat):
                raise ArithmeticError("vectorized isomorphism check disagrees with exact check")
            return mat
    return None


def _is_isomorphism(L1: StructureTable, L2: StructureTable, g) -> bool:
    fld, n = L1.field, L1.dim
    if mat_inverse(fld, g) is None:
        return False
    for i in range(n):
        for j in range(n):
            img = tuple(fld.norm(sum(L1.table[i][j][c] * g[c][k] for c in range(n))) for k in range(n))
            if img != bracket(L2, g[i], g[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# full enumeration


def _shape_matrix(n: int, d: int) -> np.ndarray:
    """Parameter -> table map for the kernel-adapted shape with dim I = d."""
    m = n - d

    def pos(i, j, k):
        return (i * n + j) * n + k

    params = []
    for a, b in combinations(range(m), 2):
        for k in range(m):
            params.append([(pos(a, b, k), 1), (pos(b, a, k), -1)])
    for a in range(m):
        for i in range(d):
            for j in range(d):
                params.append([(pos(m + i, a, m + j), 1)])
    for a in range(m):
        for b in range(m):
            for i in range(d):
                params.append([(pos(a, b, m + i), 1)])
    M = np.zeros((len(params), n**3), dtype=np.int64)
    for r, entries in enumerate(params):
        for c, s in entries:
            M[r, c] = s
    return M


def candidate_count(n: int, p: int) -> int:
    return sum(p ** len(_shape_matrix(n, d)) for d in range(n))


def _shape_tables(n: int, p: int) -> Iterator[np.ndarray]:
    """Identity-passing shape tables, chunk by chunk, in a fixed order."""
    for d in range(n):
        M = _shape_matrix(n, d)
        P = len(M)
        total = p**P
        powers = p ** np.arange(P - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            digits = (idx[:, None] // powers) % p if P else np.zeros((len(idx), 0), dtype=np.int64)
            C = (digits @ M % p).reshape(len(idx), n, n, n)
            yield C[identity_holds(C, p)]


def enumerate_tables(dim: int, p: int, variant: str = "right",
                     max_gl_order: int = DEFAULT_MAX_GL_ORDER,
                     max_dim: int = FULL_MAX_DIM) -> list[StructureTable]:
    """One canonical table per isomorphism class, sorted by canonical table."""
    if variant not in ("right", "left"):
        raise BadParams(f"unknown variant {variant!r}")
    if dim < 1:
        raise BadParams("dimension must be positive")
    GF(p)
    if dim > max_dim:
        raise CapExceeded(f"full enumeration is limited to dim <= {max_dim}; use sampling")
    if candidate_count(dim, p) > MAX_CANDIDATES:
        raise CapExceeded(f"{candidate_count(dim, p)} candidate tables exceed the cap of {MAX_CANDIDATES}")
    G, Ginv = gl_group(dim, p, max_gl_order)
    seen: set[bytes] = set()
    reps = []
    for C in _shape_tables(dim, p):
        rows = C.reshape(len(C), -1).astype(np.uint16)
        for k in range(len(rows)):
            key = rows[k].tobytes()
            if key in seen:
                continue
            orbit = _orbit(C[k], p, G, Ginv)
            seen.update(r.tobytes() for r in orbit)
            reps.append(tuple(int(x) for x in orbit[0]))
    reps.sort()
    out = []
    for row in reps:
        L = array_table(np.array(row).reshape(dim, dim, dim), p)
        out.append(opposite_algebra(L) if variant == "left" else L)
    return out


# ---------------------------------------------------------------------------
# sampling


def _affine_solve(A: list[list[int]], b: list[int], p: int, rng: random.Random) -> list[int] | None:
    """A random solution of A t = b over GF(p), or None when inconsistent."""
    ncols = len(A[0]) if A else 0
    fld = GF(p)
    rows, pivots = rref_raw(fld, [list(r) + [c] for r, c in zip(A, b)])
    if ncols in pivots:
        return None
    t = [0] * ncols
    free = [c for c in range(ncols) if c not in pivots]
    for c in free:
        t[c] = rng.randrange(p)
    for r, c in zip(rows, pivots):
        t[c] = (r[ncols] - sum(r[f] * t[f] for f in free)) % p
    return t


def _defect(C: np.ndarray, p: int) -> np.ndarray:
    lhs = np.einsum("jkm,imt->ijkt", C, C)
    r1 = np.einsum("ijm,mkt->ijkt", C, C)
    r2 = np.einsum("ikm,mjt->ijkt", C, C)
    return ((lhs - r1 + r2) % p).reshape(-1)


def _complete(base: np.ndarray, free: list[list[tuple[int, int]]], p: int,
              rng: random.Random) -> np.ndarray | None:
    """Random completion of ``base`` along the ``free`` directions passing the identity.

    In the extension shapes used here the identity is affine in these
    coordinates, so the completion is a linear solve.
    """
    n = base.shape[0]
    flat = base.reshape(-1)

    def with_direction(k):
        t = flat.copy()
        for c, s in free[k]:
            t[c] = (t[c] + s) % p
        return t.reshape(n, n, n)

    d0 = _defect(base, p)
    cols = [(_defect(with_direction(k), p) - d0) % p for k in range(len(free))]
    A = [[int(cols[k][r]) for k in range(len(free))] for r in range(len(d0))]
    t = _affine_solve(A, [int(-x % p) for x in d0], p, rng) if free else ([] if not d0.any() else None)
    if t is None:
        return None
    out = flat.copy()
    for k, tk in enumerate(t):
        for c, s in free[k]:
            out[c] = (out[c] + s * tk) % p
    out = out.reshape(n, n, n)
    return out if not _defect(out, p).any() else None


def _random_lie(m: int, p: int, rng: random.Random) -> np.ndarray:
    if m <= 1:
        return np.zeros((m, m, m), dtype=np.int64)
    if m == 3 and p != 2 and rng.random() < 0.15:
        return table_array(sl2(GF(p)))
    return _random_extension(m, rng.randint(1, m - 1), p, rng, lie=True)


def _random_extension(n: int, d: int, p: int, rng: random.Random, lie: bool) -> np.ndarray:
    """Q (random Lie, dim n - d) extended by an abelian d-dim part V.

    ``lie=False``: V plays the kernel (adapted shape, [L, V] = 0).
    ``lie=True``: [u, v] = -[v, u], which yields a Lie algebra.
    """
    m = n - d
    Q = _random_lie(m, p, rng)

    def pos(i, j, k):
        return (i * n + j) * n + k

    free = [[(pos(a, b, m + i), 1)] + ([(pos(b, a, m + i), -1)] if lie else [])
            for a in range(m) for b in range(m) if not lie or a < b for i in range(d)]
    for attempt in range(24):
        base = np.zeros((n, n, n), dtype=np.int64)
        base[:m, :m, :m] = Q
        if attempt < 23:
            for a in range(m):
                for i in range(d):
                    for j in range(d):
                        c = rng.randrange(p) if rng.random() < 0.6 else 0
                        base[m + i, a, m + j] = c
                        if lie:
                            base[a, m + i, m + j] = -c % p
        done = _complete(base, free, p, rng)
        if done is not None:
            return done
    raise ArithmeticError("zero action must always complete")


def _random_gl(n: int, p: int, rng: random.Random) -> list[list[int]]:
    fld = GF(p)
    while True:
        g = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if mat_inverse(fld, g) is not None:
            return g


def _sample_one(n: int, p: int, rng: random.Random, recipe: str) -> StructureTable:
    fld = GF(p)
    if recipe == "adapted" and n >= 2:
        L = array_table(_random_extension(n, rng.randint(1, n - 1), p, rng, lie=False), p)
    elif recipe == "lie" and n >= 2:
        L = array_table(_random_lie(n, p, rng), p)
    elif recipe == "cyclic" and n >= 2:
        L = cyclic_algebra(n, [rng.randrange(p) for _ in range(n - 1)], fld)
    elif recipe == "split" and n >= 2:
        L = split_extension([[rng.randrange(p) for _ in range(n - 1)] for _ in range(n - 1)], fld)
    elif recipe == "sum" and n >= 2:
        k = rng.randint(1, n - 1)
        L = direct_sum(_sample_one(k, p, rng, rng.choice(_RECIPES)), _sample_one(n - k, p, rng, rng.choice(_RECIPES)))
    else:
        L = StructureTable.zero_algebra(fld, n)
    L = change_basis(L, _random_gl(n, p, rng), _labels(n))
    rep = check_identity(L, "right")
    if not rep.holds:
        raise ArithmeticError(f"sampler produced a non-Leibniz table ({recipe})")
    return L


_RECIPES = ("adapted", "lie", "cyclic", "split", "sum", "adapted")


def sample_tables(dim: int, p: int, count: int, seed: int = DEFAULT_SEED,
                  variant: str = "right") -> list[StructureTable]:
    """Seeded random Leibniz algebras of one dimension over GF(p), random basis."""
    if variant not in ("right", "left"):
        raise BadParams(f"unknown variant {variant!r}")
    GF(p)
    rng = random.Random(f"leibniz-sample:{seed}:{dim}:{p}")
    out = []
    for k in range(count):
        L = _sample_one(dim, p, rng, _RECIPES[k % len(_RECIPES)])
        out.append(opposite_algebra(L) if variant == "left" else L)
    return out


def sample_population(count: int = 500, seed: int = DEFAULT_SEED, dims: Sequence[int] = (3, 4),
                      primes: Sequence[int] = (2, 3)) -> list[StructureTable]:
    """``count`` samples spread round-robin over the (dim, p) combinations."""
    combos = [(d, p) for d in dims for p in primes]
    share = [count // len(combos) + (1 if i < count % len(combos) else 0) for i in range(len(combos))]
    out = []
    for (d, p), k in zip(combos, share):
        out.extend(sample_tables(d, p, k, seed))
    return out


# ---------------------------------------------------------------------------
# corpus entries


def entry_id(L: StructureTable) -> str:
    text = f"{L.field}|{L.convention}|{L.dim}|" + ",".join(str(c) for r in L.table for v in r for c in v)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    table: StructureTable
    profile: StructureProfile
    fingerprint: Fingerprint
    iso_class_rep: bool


def _make_entry(args) -> CorpusEntry:
    L, rep = args
    return CorpusEntry(entry_id(L), L, structure_profile(L), lattice_fingerprint(subalgebra_lattice(L)), rep)


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map, optionally over a process pool."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def enumerate_algebras(dim: int, p: int, variant: str = "right", mode: str = "full",
                       count: int = 100, seed: int = DEFAULT_SEED, jobs: int = 1,
                       max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> Iterator[CorpusEntry]:
    """Corpus entries in deterministic order.

    ``mode="full"``: one entry per isomorphism class.  ``mode="sample"``:
    ``count`` seeded random algebras, not deduplicated (``iso_class_rep`` is
    False for them).
    """
    if mode == "full":
        tables = [(L, True) for L in enumerate_tables(dim, p, variant, max_gl_order)]
    elif mode == "sample":
        tables = [(L, False) for L in sample_tables(dim, p, count, seed, variant)]
    else:
        raise BadParams(f"unknown mode {mode!r}")
    yield from _pmap(_make_entry, tables, jobs)


def build_corpus(dims: Iterable[int], primes: Iterable[int], variant: str = "right", jobs: int = 1,
                 max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> list[CorpusEntry]:
    tables = []
    for p in primes:
        for d in dims:
            tables.extend((L, True) for L in enumerate_tables(d, p, variant, max_gl_order))
    return _pmap(_make_entry, tables, jobs)


# ---------------------------------------------------------------------------
# theorem checks on single algebras


def kernel_law_failures(L: StructureTable) -> list[str]:
    """Empty iff I is an ideal, [L, I] = 0, L/I is Lie and I is the least such ideal."""
    M = _right_form(L)
    I = leibniz_kernel(M)
    out = []
    if not is_ideal(M, I):
        out.append("kernel is not an ideal")
    if product_space(M, full_space(M), I).dim:
        out.append("[L,I] is nonzero")
    if not is_lie(quotient_algebra(M, I)[0]):
        out.append("L/I is not Lie")
    for J in ideals(M):
        if not I <= J and is_lie(quotient_algebra(M, J)[0]):
            out.append(f"ideal {_fmt_space(M, J)} has a Lie quotient but does not contain I")
    return out


def _fmt_space(L: StructureTable, U: Subspace) -> str:
    return "span{" + ", ".join(L.format_vector(v) for v in U.basis) + "}"


def _antisymmetric_on(L: StructureTable, A: Subspace) -> bool:
    fld = L.field
    for i in range(L.dim):
        x = L.basis_vector(i)
        for a in A.basis:
            if bracket(L, x, a) != tuple(fld.neg(c) for c in bracket(L, a, x)):
                return False
    return True


def _check_entry(L: StructureTable) -> dict[str, tuple[int, list[dict]]]:
    """Per-algebra theorem checks: theorem id -> (population, failure details)."""
    M = _right_form(L)
    I = leibniz_kernel(M)
    full = full_space(M)
    out: dict[str, tuple[int, list[dict]]] = {}

    fails = kernel_law_failures(M)
    out["kernel-basic"] = (1, [{"reasons": fails}] if fails else [])

    mins = minimal_ideals(M)
    bad = []
    for A in mins:
        if product_space(M, full, A).dim and not _antisymmetric_on(M, A):
            bad.append({"ideal": _fmt_space(M, A)})
    out["min-ideal-dichotomy"] = (len(mins), bad)

    nilpotent = series(M, "lower_central").reaches_zero
    cyc = is_cyclic(M)
    lat = subalgebra_lattice(M)
    if nilpotent and cyc.verdict == "yes":
        maxs = maximal_subalgebras(M)
        bad = []
        if len(maxs) != 1 or maxs[0] != I:
            bad.append({"maximal_subalgebras": [_fmt_space(M, S) for S in maxs], "kernel": _fmt_space(M, I)})
        elif maxs[0].contains(cyc.generator):
            bad.append({"generator": M.format_vector(cyc.generator), "reason": "generator lies in a maximal subalgebra"})
        out["nilpotent-cyclic-unique-max"] = (1, bad)
    else:
        out["nilpotent-cyclic-unique-max"] = (0, [])

    if nilpotent:
        phi, sq = frattini_ideal(M), product_space(M, full, full)
        bad = [] if phi == sq else [{"frattini": _fmt_space(M, phi), "square": _fmt_space(M, sq)}]
        out["nilpotent-frattini"] = (1, bad)
    else:
        out["nilpotent-frattini"] = (0, [])

    if cyc.verdict == "yes":
        lengths = maximal_chain_lengths(lat)
        bad = [] if lengths == (M.dim, M.dim) else [{"chain_lengths": list(lengths), "dim": M.dim}]
        out["cyclic-chain"] = (1, bad)
    else:
        out["cyclic-chain"] = (0, [])

    R = radical(M)
    gamma = full
    for U in maximal_solvable_subalgebras(M):
        gamma = gamma & U
    bad = [] if gamma == R else [{"radical": _fmt_space(M, R), "intersection": _fmt_space(M, gamma)}]
    out["radical-intersection"] = (1, bad)

    if nilpotent:
        Z = centre(M)
        cands = [A for A in mins if A.dim == 1 and A <= I]
        bad = [{"ideal": _fmt_space(M, A)} for A in cands if not A <= Z]
        out["nilpmin-central"] = (len(cands), bad)
    else:
        out["nilpmin-central"] = (0, [])
    return out


# ---------------------------------------------------------------------------
# split extensions L = A + Fx with x^2 = 0 and A a minimal abelian ideal


def prop26_instances(primes: Sequence[int] = (2, 3, 5), max_degree: int = 3,
                     per_degree: int = 3) -> list[StructureTable]:
    """Split extensions by companion matrices of irreducible monics with nonzero constant term."""
    out = []
    for p in primes:
        for deg in range(1, max_degree + 1):
            polys = [c for c in irreducible_monics(deg, p) if c[0] % p][:per_degree]
            for coeffs in polys:
                out.append(split_extension(companion_matrix(coeffs), GF(p)))
    return out


def prop26_failures(L: StructureTable) -> list[str]:
    """Check hypotheses, then the conclusion (cyclic, kernel = A), for a split extension."""
    n = L.dim
    A = span(L, [L.basis_vector(i) for i in range(n - 1)])
    x = L.basis_vector(n - 1)
    out = []
    if is_lie(L):
        out.append("hypothesis: algebra is Lie")
    if any(bracket(L, x, x)):
        out.append("hypothesis: x^2 is nonzero")
    if product_space(L, A, A).dim:
        out.append("hypothesis: A is not abelian")
    if A not in minimal_ideals(L):
        out.append("hypothesis: A is not a minimal ideal")
    if out:
        return out
    if is_cyclic(L).verdict != "yes":
        out.append("not cyclic")
    if leibniz_kernel(L) != A:
        out.append("kernel differs from A")
    return out


def _prop26_task(L: StructureTable) -> list[str]:
    return prop26_failures(L)


# ---------------------------------------------------------------------------
# clustering and pair checks


@dataclass(frozen=True)
class Cluster:
    field: str
    fingerprint: Fingerprint
    classes: tuple[tuple[str, ...], ...]
    latiso_not_iso: tuple[tuple[str, str], ...]


def _resolve_group(tables: Sequence[StructureTable]) -> list[list[int]]:
    """Split a same-fingerprint group into lattice-isomorphism classes (indices)."""
    classes: list[list[int]] = []
    for k, L in enumerate(tables):
        lat = subalgebra_lattice(L)
        for cls in classes:
            if lattice_isomorphism(subalgebra_lattice(tables[cls[0]]), lat) is not None:
                cls.append(k)
                break
        else:
            classes.append([k])
    return classes


def _group_task(args):
    tables, max_gl_order = args
    classes = _resolve_group(tables)
    pairs = []
    for cls in classes:
        for a, b in combinations(cls, 2):
            if tables[a].dim != tables[b].dim:
                pairs.append((a, b))
                continue
            try:
                if algebra_isomorphic(tables[a], tables[b], max_gl_order) is None:
                    pairs.append((a, b))
            except CapExceeded:
                pass
    return classes, pairs


def _groups(corpus: Sequence[CorpusEntry]) -> list[list[CorpusEntry]]:
    groups: dict[tuple, list[CorpusEntry]] = {}
    for e in corpus:
        groups.setdefault((str(e.table.field), e.fingerprint), []).append(e)
    keys = sorted(groups, key=lambda k: (k[0], repr(k[1])))
    return [groups[k] for k in keys]


def cluster_by_fingerprint(corpus: Sequence[CorpusEntry], jobs: int = 1,
                           max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> list[Cluster]:
    """Fingerprint buckets (per field) split into verified lattice-isomorphism classes."""
    groups = _groups(corpus)
    results = _pmap(_group_task, [([e.table for e in g], max_gl_order) for g in groups], jobs)
    out = []
    for g, (classes, pairs) in zip(groups, results):
        out.append(Cluster(
            str(g[0].table.field),
            g[0].fingerprint,
            tuple(tuple(g[i].id for i in cls) for cls in classes),
            tuple((g[a].id, g[b].id) for a, b in pairs),
        ))
    return out


def kernel_moving_map(L1: StructureTable, L2: StructureTable) -> tuple[int, ...] | None:
    """A lattice isomorphism L1 -> L2 not sending I to I*, as a node map, if one exists."""
    lat1, lat2 = subalgebra_lattice(L1), subalgebra_lattice(L2)
    k1 = lat1.index_of(leibniz_kernel(_right_form(L1)))
    k2 = lat2.index_of(leibniz_kernel(_right_form(L2)))
    for t in range(lat2.size):
        if t == k2:
            continue
        theta = lattice_isomorphism(lat1, lat2, fixed={k1: t})
        if theta is not None:
            return theta.map
    return None


def _kernel_move_task(pair):
    L1, L2 = pair
    return kernel_moving_map(L1, L2)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Violation:
    ids: tuple[str, ...]
    field: str
    detail: dict
    tables: dict[str, dict] = field(default_factory=dict)

    def document(self) -> dict:
        return {
            "ids": list(self.ids),
            "field": self.field,
            "characteristic": FieldSpec.parse(self.field).characteristic,
            "detail": self.detail,
            "tables": self.tables,
        }


@dataclass
class TheoremReport:
    theorem_id: str
    mode: str
    population: int
    passes: int
    violations: list[Violation]
    notes: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.mode == "asserted" and bool(self.violations)

    def document(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "mode": self.mode,
            "population": self.population,
            "passes": self.passes,
            "violations": [v.document() for v in self.violations],
            "notes": self.notes,
        }


def _mode(tid: str) -> str:
    return "asserted" if tid in ASSERTED else "exploratory"


def _witness(entries: Sequence[CorpusEntry | StructureTable], detail: dict) -> Violation:
    ids, tables = [], {}
    fld = None
    for e in entries:
        L = e.table if isinstance(e, CorpusEntry) else e
        i = e.id if isinstance(e, CorpusEntry) else entry_id(L)
        ids.append(i)
        tables[i] = lbz.to_document(L)
        fld = str(L.field)
    return Violation(tuple(ids), fld, detail, tables)


def _an_instances(primes: Sequence[int], max_dim: int) -> list[StructureTable]:
    shapes = [(1, (1,)), (1, (2,)), (2, (1, 1)), (1, (3,)), (2, (1, 2)), (3, (1, 1, 1))]
    out = []
    for p in primes:
        for n, rs in shapes:
            if 1 + sum(rs) <= max_dim:
                out.append(almost_nilpotent(n, rs, GF(p)))
    return out


def _an_task(args):
    inst, partners = args
    lat = subalgebra_lattice(inst)
    fp = lattice_fingerprint(lat)
    for k, P in enumerate(partners):
        plat = subalgebra_lattice(P)
        if lattice_fingerprint(plat) == fp and lattice_isomorphism(lat, plat) is not None:
            return k
    return None


@dataclass
class SuiteResult:
    reports: list[TheoremReport]
    clusters: list[Cluster]

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.reports)


def run_theorem_suite(corpus: Sequence[CorpusEntry], jobs: int = 1,
                      extra: Sequence[StructureTable] = (),
                      prop26: Sequence[StructureTable] | None = None,
                      max_gl_order: int = DEFAULT_MAX_GL_ORDER) -> SuiteResult:
    """Every theorem check over the corpus.

    ``extra`` algebras (e.g. a sampled population) join the per-algebra
    checks but not the pair scans.  Reports come back in ``THEOREMS`` order.
    """
    corpus = list(corpus)
    extra = list(extra)
    subjects = [e.table for e in corpus] + extra
    subject_refs: list[CorpusEntry | StructureTable] = corpus + extra
    checks = _pmap(_check_entry, subjects, jobs)
    tally: dict[str, list] = {t: [0, []] for t in THEOREMS}
    for ref, res in zip(subject_refs, checks):
        for tid, (pop, bad) in res.items():
            tally[tid][0] += pop
            for det in bad:
                tally[tid][1].append(_witness([ref], det))

    instances = prop26_instances() if prop26 is None else list(prop26)
    for L, fails in zip(instances, _pmap(_prop26_task, instances, jobs)):
        tally["prop-2.6"][0] += 1
        if fails:
            tally["prop-2.6"][1].append(_witness([L], {"reasons": fails}))

    clusters = cluster_by_fingerprint(corpus, jobs, max_gl_order)
    by_id = {e.id: e for e in corpus}

    # lattice-isomorphic pairs, self pairs included
    pairs, small_pairs = [], []
    for c in clusters:
        for cls in c.classes:
            members = [by_id[i] for i in cls]
            for a in range(len(members)):
                for b in range(a, len(members)):
                    pr = (members[a], members[b])
                    (pairs if max(pr[0].table.dim, pr[1].table.dim) >= 3 else small_pairs).append(pr)
    moved = _pmap(_kernel_move_task, [(a.table, b.table) for a, b in pairs + small_pairs], jobs)
    exceptions = []
    tally["barnes-kernel"][0] = len(pairs)
    for k, ((a, b), theta) in enumerate(zip(pairs + small_pairs, moved)):
        if theta is None:
            continue
        det = {"map": list(theta), "dims": [a.table.dim, b.table.dim]}
        if k < len(pairs):
            tally["barnes-kernel"][1].append(_witness([a, b], det))
        else:
            exceptions.append(_witness([a, b], det).document())

    lie = [e for e in corpus if e.profile.is_lie]
    nonlie = [e for e in corpus if not e.profile.is_lie]
    tally["lie-vs-nonlie"][0] = sum(1 for x in nonlie for y in lie if x.table.field == y.table.field)
    for c in clusters:
        for cls in c.classes:
            members = [by_id[i] for i in cls]
            for x in members:
                for y in members:
                    if not x.profile.is_lie and y.profile.is_lie:
                        tally["lie-vs-nonlie"][1].append(_witness([x, y], {"reason": "lattice isomorphic"}))

    primes = sorted({e.table.field.modulus for e in corpus})
    max_dim = max((e.table.dim for e in corpus), default=0)
    an = _an_instances(primes, max_dim)
    partner_pool = {p: [e for e in corpus if e.table.field.modulus == p and e.profile.is_nilpotent and e.profile.is_lie]
                    for p in primes}
    found = _pmap(_an_task, [(L, [e.table for e in partner_pool[L.field.modulus]]) for L in an], jobs)
    an_pairs = []
    tally["almost-nilpotent-latiso"][0] = len(an)
    for L, k in zip(an, found):
        if k is None:
            tally["almost-nilpotent-latiso"][1].append(
                _witness([L], {"reason": "no nilpotent Lie algebra in the corpus has an isomorphic lattice"}))
        else:
            an_pairs.append([entry_id(L), partner_pool[L.field.modulus][k].id])

    notes = {
        "barnes-kernel": {"hypothesis": "dim >= 3; self pairs included",
                          "documented_exceptions": exceptions},
        "almost-nilpotent-latiso": {"partners": an_pairs},
        "radical-intersection": {"hypothesis": "characteristic zero"},
        "cyclic-chain": {"hypothesis": "infinite field"},
    }
    reports = []
    for tid in THEOREMS:
        pop, bad = tally[tid]
        reports.append(TheoremReport(tid, _mode(tid), pop, pop - len(bad), bad, notes.get(tid, {})))
    return SuiteResult(reports, clusters)


# ---------------------------------------------------------------------------
# whole runs


@dataclass
class AtlasRun:
    header: dict
    corpus: list[CorpusEntry]
    suite: SuiteResult

    @property
    def ok(self) -> bool:
        return self.suite.ok


def run_atlas(dims: Sequence[int], primes: Sequence[int], variant: str = "right", seed: int = DEFAULT_SEED,
              samples: int = 0, sample_dims: Sequence[int] = (3, 4), jobs: int = 1,
              caps: dict | None = None) -> AtlasRun:
    caps = dict(caps or {})
    max_gl = caps.get("max_gl_order", DEFAULT_MAX_GL_ORDER)
    corpus = build_corpus(dims, primes, variant, jobs, max_gl)
    extra = []
    if samples:
        extra = [L if variant == "right" else opposite_algebra(L)
                 for L in sample_population(samples, seed, sample_dims, primes)]
    suite = run_theorem_suite(corpus, jobs, extra, max_gl_order=max_gl)
    header = {
        "tool": "leibniz atlas",
        "version": __version__,
        "seed": seed,
        "caps": caps,
        "fields": [str(GF(p)) for p in primes],
        "dims": list(dims),
        "convention": variant,
        "samples": samples,
        "notes": [
            "sl2 over GF(p) stands in for three-dimensional non-split simple algebras, "
            "which have no non-split form over finite fields",
            "exploratory checks transcribe statements proved in characteristic zero or over "
            "infinite fields; their violations are findings, not failures",
        ],
    }
    return AtlasRun(header, corpus, suite)


def atlas_document(run: AtlasRun) -> dict:
    entries = []
    for e in run.corpus:
        pr = e.profile
        entries.append({
            "id": e.id,
            "field": str(e.table.field),
            "dim": e.table.dim,
            "kernel_dim": pr.kernel.dim,
            "lie": pr.is_lie,
            "nilpotent": pr.is_nilpotent,
            "solvable": pr.is_solvable,
            "cyclic": pr.is_cyclic.verdict,
            "supersolvable": supersolvable_cross_check(_right_form(e.table)),
            "lattice_nodes": e.fingerprint.nodes,
            "table": lbz.to_document(e.table),
        })
    clusters = run.suite.clusters
    return {
        "header": run.header,
        "status": "pass" if run.ok else "fail",
        "corpus": {"size": len(run.corpus), "entries": entries},
        "clusters": {
            "fingerprint_groups": len(clusters),
            "lattice_classes": sum(len(c.classes) for c in clusters),
            "lattice_isomorphic_not_isomorphic": [list(p) for c in clusters for p in c.latiso_not_iso],
        },
        "theorems": [r.document() for r in run.suite.reports],
    }


def atlas_text(run: AtlasRun) -> str:
    h = run.header
    lines = [
        f"leibniz atlas {h['version']}  convention={h['convention']}  seed={h['seed']}",
        f"fields={','.join(h['fields'])}  dims={','.join(map(str, h['dims']))}  samples={h['samples']}",
        "caps: " + ", ".join(f"{k}={v}" for k, v in sorted(h["caps"].items())),
        f"corpus: {len(run.corpus)} algebras",
    ]
    for e in run.corpus:
        pr = e.profile
        lines.append(f"  {e.id}  {e.table.field}  dim={e.table.dim}  I={pr.kernel.dim}  "
                     f"lie={int(pr.is_lie)} nil={int(pr.is_nilpotent)} solv={int(pr.is_solvable)} "
                     f"cyclic={pr.is_cyclic.verdict} nodes={e.fingerprint.nodes}")
    pairs = [p for c in run.suite.clusters for p in c.latiso_not_iso]
    lines.append(f"lattice-isomorphic but not isomorphic: {len(pairs)} pairs")
    for a, b in pairs:
        lines.append(f"  {a} ~ {b}")
    lines.append("theorems:")
    for r in run.suite.reports:
        status = "FAIL" if r.failed else ("ok" if not r.violations else "violations")
        lines.append(f"  {r.theorem_id:<28} {r.mode:<11} population={r.population:<5} "
                     f"passes={r.passes:<5} violations={len(r.violations):<3} {status}")
        for v in r.violations:
            lines.append(f"    witness {' '.join(v.ids)} [{v.field}] {v.detail}")
        for ex in r.notes.get("documented_exceptions", []):
            lines.append(f"    documented exception {' '.join(ex['ids'])} [{ex['field']}] {ex['detail']}")
    lines.append(f"status: {'pass' if run.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# witness replay


def replay_violation(theorem_id: str, doc: dict) -> bool:
    """Recompute a reported violation from its embedded tables; True if it reproduces."""
    tables = [lbz.from_document(doc["tables"][i]) for i in doc["ids"]]
    if theorem_id == "barnes-kernel":
        from .lattice import LatticeMap

        L1, L2 = tables
        lat1, lat2 = subalgebra_lattice(L1), subalgebra_lattice(L2)
        theta = LatticeMap(lat1, lat2, tuple(doc["detail"]["map"]))
        k1 = lat1.index_of(leibniz_kernel(_right_form(L1)))
        return theta(k1) != lat2.index_of(leibniz_kernel(_right_form(L2)))
    if theorem_id == "lie-vs-nonlie":
        L1, L2 = tables
        return (not is_lie(_right_form(L1)) and is_lie(_right_form(L2))
                and lattice_isomorphism(subalgebra_lattice(L1), subalgebra_lattice(L2)) is not None)
    if theorem_id == "almost-nilpotent-latiso":
        return True  # absence claim; the instance is the witness
    if theorem_id == "prop-2.6":
        return bool(prop26_failures(tables[0]))
    res = _check_entry(tables[0])[theorem_id]
    return bool(res[1])


__all__ = [
    "ASSERTED", "EXPLORATORY", "THEOREMS", "AtlasRun", "Cluster", "CorpusEntry", "SuiteResult",
    "TheoremReport", "Violation", "algebra_isomorphic", "atlas_document", "atlas_text", "build_corpus",
    "canonical_form", "cluster_by_fingerprint", "enumerate_algebras", "enumerate_tables", "gl_group",
    "gl_order", "identity_holds", "kernel_law_failures", "kernel_moving_map", "prop26_failures",
    "prop26_instances", "replay_violation", "run_atlas", "run_theorem_suite", "sample_population",
    "sample_tables",
]
