"""Independent oracle: subalgebras of a small algebra over GF(p) as point sets.

Input is a plain nested list table[i][j][k] of residues.  Subspaces are
produced as spans of all vector tuples of length <= n and kept as frozensets
of points; closure under the bracket is tested point by point.
"""

from functools import lru_cache
from itertools import product


def _br(table, p, u, v):
    n = len(u)
    return tuple(
        sum(u[i] * v[j] * table[i][j][k] for i in range(n) for j in range(n)) % p for k in range(n)
    )


def _span(p, n, vecs):
    pts = set()
    for cs in product(range(p), repeat=len(vecs)):
        pts.add(tuple(sum(c * v[k] for c, v in zip(cs, vecs)) % p for k in range(n)))
    return frozenset(pts)


@lru_cache(maxsize=None)
def subspaces(p, n):
    pts = list(product(range(p), repeat=n))
    out = {frozenset([(0,) * n])}
    for r in range(1, n + 1):
        for vecs in product(pts, repeat=r):
            out.add(_span(p, n, vecs))
    return frozenset(out)


def subalgebras(table, p):
    n = len(table)
    return [S for S in subspaces(p, n) if all(_br(table, p, u, v) in S for u in S for v in S)]


def chain_lengths(subs):
    """(shortest, longest) maximal chain in the containment order."""
    subs = sorted(subs, key=len)
    bottom, top = subs[0], subs[-1]
    memo = {}

    def rec(S):
        if S == top:
            return (0, 0)
        if S in memo:
            return memo[S]
        ups = [T for T in subs if S < T]
        covers = [T for T in ups if not any(S < U < T for U in ups)]
        vals = [rec(T) for T in covers]
        memo[S] = (1 + min(v[0] for v in vals), 1 + max(v[1] for v in vals))
        return memo[S]

    return rec(bottom)
