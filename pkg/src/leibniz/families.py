"""Constructors for the named algebra families.

Every constructor checks its own output against the right Leibniz identity
(and, for the Lie families, against the Lie conditions) before returning it.
"""

from __future__ import annotations

from typing import Sequence

from .algcore import StructureTable, check_identity, is_lie
from .errors import BadParams
from .exactfield import FieldSpec, Q

FAMILIES = ("cyclic", "diamond", "abelian", "almost_abelian", "almost_nilpotent", "heisenberg", "sl2")


def _verified(L: StructureTable, lie: bool = False) -> StructureTable:
    rep = check_identity(L, "right")
    if not rep.holds:
        raise AssertionError(f"constructor produced a non-Leibniz table: witness {rep.witness}")
    if lie and not is_lie(L):
        raise AssertionError("constructor produced a non-Lie table for a Lie family")
    return L


def _table(fld: FieldSpec, n: int, entries: dict[tuple[int, int], dict[int, int]]):
    t = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), vec in entries.items():
        for k, c in vec.items():
            t[i][j][k] = c
    return tuple(tuple(tuple(c) for c in row) for row in t)


def cyclic_algebra(n: int, alphas: Sequence = (), fld: FieldSpec = Q) -> StructureTable:
    """Cyclic algebra on x, x^2, ..., x^n.

    ``[x^i, x] = x^(i+1)`` for i < n and ``[x^n, x] = sum alpha_i x^i`` with
    ``alphas = (alpha_2, ..., alpha_n)``; missing alphas are zero.
    """
    if n < 2:
        raise BadParams("cyclic algebras need n >= 2")
    alphas = list(alphas)
    if len(alphas) > n - 1:
        raise BadParams(f"at most {n - 1} coefficients alpha_2..alpha_n")
    alphas += [0] * (n - 1 - len(alphas))
    labels = ("x",) + tuple(f"x^{i}" for i in range(2, n + 1))
    entries = {(i, 0): {i + 1: 1} for i in range(n - 1)}
    entries[(n - 1, 0)] = {k + 1: a for k, a in enumerate(alphas)}
    return _verified(StructureTable(fld, n, labels, _table(fld, n, entries)))


def diamond(fld: FieldSpec = Q) -> StructureTable:
    """Basis (a, b) with [b, b] = a and [a, b] = a, all other products zero."""
    return _verified(StructureTable(fld, 2, ("a", "b"), _table(fld, 2, {(1, 1): {0: 1}, (0, 1): {0: 1}})))


def abelian(n: int, fld: FieldSpec = Q) -> StructureTable:
    if n < 0:
        raise BadParams("negative dimension")
    return StructureTable.zero_algebra(fld, n)


def almost_abelian(n: int, fld: FieldSpec = Q) -> StructureTable:
    """Abelian ideal e_1..e_{n-1} with [e_i, a] = e_i = -[a, e_i]."""
    if n < 2:
        raise BadParams("almost abelian algebras need n >= 2")
    m = n - 1
    labels = tuple(f"e{i + 1}" for i in range(m)) + ("a",)
    entries = {}
    for i in range(m):
        entries[(i, m)] = {i: 1}
        entries[(m, i)] = {i: -1}
    return _verified(StructureTable(fld, n, labels, _table(fld, n, entries)), lie=True)


def almost_nilpotent(n: int, rs: Sequence[int], fld: FieldSpec = Q) -> StructureTable:
    """Lie algebra on x; e_ij (1 <= i <= n, 1 <= j <= r_i) with
    [x, e_ij] = e_ij + e_{i+1,j} (i < n), [x, e_nj] = e_nj, [e_ij, x] = -[x, e_ij].
    """
    rs = list(rs)
    if n < 1 or len(rs) != n or any(r < 1 for r in rs):
        raise BadParams("need index n >= 1 and n positive multiplicities")
    if any(rs[i] > rs[i + 1] for i in range(n - 1)):
        raise BadParams("multiplicities must be non-decreasing")
    labels = ["x"]
    index = {}
    for i in range(1, n + 1):
        for j in range(1, rs[i - 1] + 1):
            index[(i, j)] = len(labels)
            labels.append(f"e{i}_{j}")
    dim = len(labels)
    entries = {}
    for (i, j), k in index.items():
        img = {k: 1}
        if i < n:
            img[index[(i + 1, j)]] = 1
        entries[(0, k)] = img
        entries[(k, 0)] = {t: -c for t, c in img.items()}
    return _verified(StructureTable(fld, dim, tuple(labels), _table(fld, dim, entries)), lie=True)


def heisenberg(fld: FieldSpec = Q) -> StructureTable:
    """[x, y] = z = -[y, x]."""
    return _verified(
        StructureTable(fld, 3, ("x", "y", "z"), _table(fld, 3, {(0, 1): {2: 1}, (1, 0): {2: -1}})), lie=True
    )


def sl2(fld: FieldSpec = Q) -> StructureTable:
    """[e, f] = h, [h, e] = 2e, [h, f] = -2f, completed antisymmetrically."""
    if fld.characteristic == 2:
        raise BadParams("sl2 needs characteristic other than 2")
    e, f, h = 0, 1, 2
    entries = {
        (e, f): {h: 1}, (f, e): {h: -1},
        (h, e): {e: 2}, (e, h): {e: -2},
        (h, f): {f: -2}, (f, h): {f: 2},
    }
    return _verified(StructureTable(fld, 3, ("e", "f", "h"), _table(fld, 3, entries)), lie=True)


def build_family(name: str, fld: FieldSpec = Q, n: int | None = None,
                 alphas: Sequence = (), rs: Sequence[int] = ()) -> StructureTable:
    """Dispatch used by the CLI ``family`` command."""
    if name == "cyclic":
        return cyclic_algebra(n if n is not None else 2, alphas, fld)
    if name == "diamond":
        return diamond(fld)
    if name == "abelian":
        return abelian(n if n is not None else 1, fld)
    if name == "almost_abelian":
        return almost_abelian(n if n is not None else 2, fld)
    if name == "almost_nilpotent":
        rs = list(rs) or [1] * (n or 1)
        return almost_nilpotent(n if n is not None else len(rs), rs, fld)
    if name == "heisenberg":
        return heisenberg(fld)
    if name == "sl2":
        return sl2(fld)
    raise BadParams(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def split_extension(action: Sequence[Sequence], fld: FieldSpec = Q) -> StructureTable:
    """``L = A + Fx`` with A abelian, [a, x] = action @ a, x^2 = 0 and [L, A] = 0.

    With an irreducible, nonzero action, A is a minimal abelian ideal and L is
    non-Lie: the setting in which L turns out cyclic with kernel A.
    """
    m = len(action)
    if any(len(r) != m for r in action):
        raise BadParams("action must be square")
    labels = tuple(f"a{i + 1}" for i in range(m)) + ("x",)
    entries = {(i, m): {k: action[k][i] for k in range(m)} for i in range(m)}
    return _verified(StructureTable(fld, m + 1, labels, _table(fld, m + 1, entries)))


def companion_matrix(coeffs: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Companion matrix of the monic polynomial t^m + c_{m-1} t^{m-1} + ... + c_0.

    ``coeffs = (c_0, ..., c_{m-1})``.
    """
    m = len(coeffs)
    rows = [[0] * m for _ in range(m)]
    for i in range(1, m):
        rows[i][i - 1] = 1
    for i in range(m):
        rows[i][m - 1] = -coeffs[i]
    return tuple(map(tuple, rows))


def irreducible_monics(degree: int, p: int) -> list[tuple[int, ...]]:
    """Coefficient tuples (c_0..c_{m-1}) of monic irreducibles of the given degree over GF(p).

    Brute force: a monic of degree m is irreducible iff no monic factor of
    degree 1..m//2 divides it.
    """
    from itertools import product

    def polymod(num, den):
        num = list(num)
        while len(num) >= len(den):
            c = num[-1] % p
            if c:
                shift = len(num) - len(den)
                for i, d in enumerate(den):
                    num[shift + i] = (num[shift + i] - c * d) % p
            num.pop()
        return num

    out = []
    for cs in product(range(p), repeat=degree):
        f = list(cs) + [1]
        ok = True
        for d in range(1, degree // 2 + 1):
            for gs in product(range(p), repeat=d):
                if not any(polymod(f, list(gs) + [1])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(cs))
    return out
