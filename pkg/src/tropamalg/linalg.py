"""Exact integer linear algebra on small dense matrices.

Fraction-free (Bareiss) elimination for ranks and span membership, and a
Smith-form reduction for lattice indices.  Matrices are lists of integer
rows; nothing here ever touches floating point.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q via Bareiss fraction-free elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, m):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c, n):
                # exact division is guaranteed by Sylvester's identity
                ai[j] = (p * ai[j] - f * ar[j]) // prev
        prev = p
        r += 1
    return r


def in_span(generators: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether ``v`` lies in the rational span of ``generators``."""
    if not any(v):
        return True
    if not generators:
        return False
    return rank(list(generators) + [list(v)]) == rank(generators)


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form)."""
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry of the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility of the rest of the block by the pivot
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remainder into pivot position and repeat
            best = None
            for i in range(t, m):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                    best = i
            a[t], a[best] = a[best], a[t]
            bestc = None
            for j in range(t, n):
                if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                    bestc = j
            for row in a:
                row[t], row[bestc] = row[bestc], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def saturation_index(rows: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``rows`` inside its saturation.

    This is the product of the nonzero invariant factors; it equals 1 iff
    the rows span a primitive (saturated) sublattice of Z^n.
    """
    out = 1
    for d in smith_diagonal(rows):
        out *= d
    return out


def gcd_of_maximal_minors(rows: Sequence[Sequence[int]]) -> int:
    """Brute-force cross-check for :func:`saturation_index` on full-rank rows."""
    from itertools import combinations

    k = len(rows)
    n = len(rows[0]) if rows else 0
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, abs(det([[r[c] for c in cols] for r in rows])))
    return g


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant via Bareiss."""
    a = [list(r) for r in a]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
