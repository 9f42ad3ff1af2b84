"""Small exhaustive corpora of matroids, amalgam problems and lattice maps.

Everything here is up to isomorphism.  Matroids and amalgam problems are
deduplicated through a canonical form (minimum over the permutations that
respect an invariant-based partition of the elements).  Lattice maps are
enumerated one per orbit of Aut(M1) x Aut(M2) by orderly generation over
the rank levels of the source lattice.
"""

from __future__ import annotations

from itertools import combinations, permutations, product as iproduct
from typing import Iterator, Sequence

import numpy as np

from .amalgam import AmalgamProblem
from .correspondence import LatticeMap
from .groundset import GroundSet, popcount
from .matroid import Matroid, graphic, matroid_from_flats, relabel, restriction, uniform


# -- permutations and canonical forms -----------------------------------------

def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[i]
        mask >>= 1
        i += 1
    return out


def _element_invariant(M: Matroid, i: int):
    counts = {}
    for F in M.flats:
        if F >> i & 1:
            key = (M.rank_of[F], popcount(F))
            counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


def _cell_perms(cells: list[list[int]], n: int) -> Iterator[list[int]]:
    """Permutations sending each cell onto the same positions, cell order kept."""
    targets = []
    pos = 0
    for c in cells:
        targets.append(list(range(pos, pos + len(c))))
        pos += len(c)
    for choice in iproduct(*(permutations(t) for t in targets)):
        perm = [0] * n
        for c, img in zip(cells, choice):
            for x, y in zip(c, img):
                perm[x] = y
        yield perm


def _cells(keys: list) -> list[list[int]]:
    order = sorted(set(keys))
    return [[i for i, k in enumerate(keys) if k == key] for key in order]


def canonical_form(M: Matroid) -> tuple:
    n = len(M.groundset)
    cells = _cells([_element_invariant(M, i) for i in range(n)])
    best = None
    for perm in _cell_perms(cells, n):
        key = tuple(sorted(permute_mask(F, perm) for F in M.flats))
        if best is None or key < best:
            best = key
    return (n, best)


def automorphisms(M: Matroid) -> list[tuple[int, ...]]:
    """All element permutations preserving the flats (brute force on cells)."""
    n = len(M.groundset)
    inv = [_element_invariant(M, i) for i in range(n)]
    cells = _cells(inv)
    out = []
    flats = M.flats
    for choice in iproduct(*(permutations(c) for c in cells)):
        perm = [0] * n
        for c, img in zip(cells, choice):
            for x, y in zip(c, img):
                perm[x] = y
        if all(permute_mask(F, perm) in flats for F in flats):
            out.append(tuple(perm))
    return out


def dedupe(matroids: Sequence[Matroid]) -> list[Matroid]:
    seen = set()
    out = []
    for M in matroids:
        key = canonical_form(M)
        if key not in seen:
            seen.add(key)
            out.append(M)
    return out


# -- base matroids ---------------------------------------------------------------

def uniform_matroids(max_n: int = 6, simple: bool = True) -> list[Matroid]:
    out = []
    for n in range(1, max_n + 1):
        for r in range(1, n + 1):
            if simple and r == 1 and n > 1:
                continue
            out.append(uniform(r, n))
    return out


def graphic_matroids(max_vertices: int = 5, max_edges: int = 8) -> list[Matroid]:
    """Cycle matroids of all simple graphs on at most ``max_vertices`` vertices."""
    import networkx as nx

    out = []
    for G in nx.graph_atlas_g():
        if G.number_of_nodes() > max_vertices:
            break
        m = G.number_of_edges()
        if m == 0 or m > max_edges:
            continue
        edges = {str(i): e for i, e in enumerate(sorted(G.edges()), 1)}
        out.append(graphic(edges))
    return dedupe(out)


def linear_spaces(max_n: int = 6) -> list[Matroid]:
    """Simple matroids of rank <= 3 on at most ``max_n`` elements.

    Rank 3 simple matroids are exactly the families of lines (sets of at
    least three points) pairwise meeting in at most one point, not all
    points on one line.
    """
    out = [uniform(1, 1)]
    for n in range(2, max_n + 1):
        out.append(uniform(2, n))
        if n < 3:
            continue
        pts = range(n)
        cand = [frozenset(c) for k in range(3, n) for c in combinations(pts, k)]

        def rec(i, lines):
            if i == len(cand):
                yield list(lines)
                return
            yield from rec(i + 1, lines)
            L = cand[i]
            if all(len(L & L2) <= 1 for L2 in lines):
                lines.append(L)
                yield from rec(i + 1, lines)
                lines.pop()

        for lines in rec(0, []):
            out.append(_linear_space(n, lines))
    return dedupe(out)


def _linear_space(n: int, lines) -> Matroid:
    g = GroundSet(str(i) for i in range(1, n + 1))
    flats = {0, g.full}
    flats.update(1 << i for i in range(n))
    lm = [sum(1 << i for i in L) for L in lines]
    flats.update(lm)
    for a, b in combinations(range(n), 2):
        if not any(L >> a & 1 and L >> b & 1 for L in lm):
            flats.add((1 << a) | (1 << b))
    return matroid_from_flats(g, flats)


def base_pool(max_n: int = 6, graphic_edges: int = 8) -> list[Matroid]:
    """Uniform, graphic and rank-<=3 simple matroids, up to isomorphism."""
    pool = uniform_matroids(max_n) + linear_spaces(max_n) + graphic_matroids(5, graphic_edges)
    return dedupe(pool)


# -- amalgam problems -----------------------------------------------------------

def _problem_key(M1: Matroid, M2: Matroid, union: GroundSet) -> tuple:
    n = len(union)
    i1 = [union.index[x] for x in M1.groundset.labels]
    i2 = [union.index[x] for x in M2.groundset.labels]
    f1 = [sum(1 << i1[j] for j in range(len(i1)) if F >> j & 1) for F in M1.flats]
    f2 = [sum(1 << i2[j] for j in range(len(i2)) if F >> j & 1) for F in M2.flats]

    def inv(i, flats, M):
        counts = {}
        for F in flats:
            if F >> i & 1:
                key = popcount(F)
                counts[key] = counts.get(key, 0) + 1
        return tuple(sorted(counts.items()))

    keys = [(x in M1.groundset, x in M2.groundset, inv(i, f1, M1), inv(i, f2, M2))
            for i, x in enumerate(union.labels)]
    cells = _cells(keys)
    best = None
    for perm in _cell_perms(cells, n):
        k = (tuple(sorted(permute_mask(F, perm) for F in f1)),
             tuple(sorted(permute_mask(F, perm) for F in f2)))
        if best is None or k < best:
            best = k
    return (tuple(len(c) for c in cells), tuple(k for k in sorted(set(keys))), best)


def problem_key(P: AmalgamProblem) -> tuple:
    """Isomorphism-invariant key of an amalgam problem, symmetric in M1, M2."""
    return min(_problem_key(P.M1, P.M2, P.union), _problem_key(P.M2, P.M1, P.union))


def subset_orbit_reps(M: Matroid, k: int, auts) -> list[int]:
    seen = set()
    reps = []
    for c in combinations(range(len(M.groundset)), k):
        S = sum(1 << i for i in c)
        if S in seen:
            continue
        reps.append(S)
        for p in auts:
            seen.add(permute_mask(S, p))
    return reps


def glue(A: Matroid, B: Matroid, SA: int, SB: int, bij: Sequence[int]) -> AmalgamProblem | None:
    """Identify element SA[j] of A with element bij[j] of B; relabel to 1..n."""
    ia = [i for i in range(len(A.groundset)) if SA >> i & 1]
    ib = list(bij)
    k = len(ia)
    names_a, names_b = {}, {}
    for j, (x, y) in enumerate(zip(ia, ib), 1):
        names_a[A.groundset.labels[x]] = str(j)
        names_b[B.groundset.labels[y]] = str(j)
    nxt = k + 1
    for x in A.groundset.labels:
        if x not in names_a:
            names_a[x] = str(nxt)
            nxt += 1
    for y in B.groundset.labels:
        if y not in names_b:
            names_b[y] = str(nxt)
            nxt += 1
    M1 = relabel(A, names_a)
    M2 = relabel(B, names_b)
    T = [str(j) for j in range(1, k + 1)]
    if restriction(M1, M1.mask(T)) != restriction(M2, M2.mask(T)):
        return None
    return AmalgamProblem(M1, M2)


def _restricted_flats(M: Matroid, positions: Sequence[int]) -> frozenset[int]:
    """Flats of M restricted to ``positions``, re-indexed 0..k-1 in that order."""
    out = set()
    for F in M.flats:
        out.add(sum(1 << j for j, i in enumerate(positions) if F >> i & 1))
    return frozenset(out)


def _bijection_orbits(valid: list[tuple[int, ...]], gens) -> list[tuple[int, ...]]:
    """One representative per orbit of ``valid`` under the generated group."""
    seen = set()
    reps = []
    for b in valid:
        if b in seen:
            continue
        reps.append(b)
        seen.add(b)
        todo = [b]
        while todo:
            x = todo.pop()
            for g in gens:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
    return reps


def amalgam_problems(pool: Sequence[Matroid], max_union: int = 8,
                     progress=None) -> list[AmalgamProblem]:
    """Every gluing of two pool matroids over a common restriction, up to isomorphism.

    ``pool`` must be free of isomorphic duplicates.  An isomorphism of two
    gluings of A and B (A before B in the pool) maps A to A and B to B, so
    it maps a subset orbit representative to itself; what is left is the
    action of the two set-stabilizers on the identifying bijection, plus
    the swap of the two sides when A is B.
    """
    auts = [automorphisms(M) for M in pool]
    out = []
    for a in range(len(pool)):
        for b in range(a, len(pool)):
            A, B = pool[a], pool[b]
            na, nb = len(A.groundset), len(B.groundset)
            for k in range(max(0, na + nb - max_union), min(na, nb) + 1):
                reps_a = subset_orbit_reps(A, k, auts[a])
                reps_b = reps_a if a == b else subset_orbit_reps(B, k, auts[b])
                for ka, SA in enumerate(reps_a):
                    ia = [i for i in range(na) if SA >> i & 1]
                    fa = _restricted_flats(A, ia)
                    pa = {tuple(ia.index(s[i]) for i in ia) for s in auts[a]
                          if permute_mask(SA, s) == SA}
                    for kb, SB in enumerate(reps_b):
                        if a == b and kb < ka:
                            continue
                        ib = [i for i in range(nb) if SB >> i & 1]
                        if len(_restricted_flats(B, ib)) != len(fa):
                            continue
                        valid = [bij for bij in permutations(ib) if _restricted_flats(B, bij) == fa]
                        if not valid:
                            continue
                        pb = [{i: s[i] for i in ib} for s in auts[b] if permute_mask(SB, s) == SB]
                        gens = []
                        # A side: position j of SA goes to position p[j]
                        for p in pa:
                            gens.append(lambda x, p=p: tuple(x[p.index(j)] for j in range(k)))
                        for t in pb:
                            gens.append(lambda x, t=t: tuple(t[y] for y in x))
                        if a == b and SA == SB:
                            # exchanging the sides inverts the bijection
                            def swap(x, ia=ia):
                                inv = {y: ia[j] for j, y in enumerate(x)}
                                return tuple(inv[i] for i in ia)
                            gens.append(swap)
                        for bij in _bijection_orbits(valid, gens):
                            P = glue(A, B, SA, SB, bij)
                            if P is not None:
                                out.append(P)
            if progress:
                progress(a, b, len(out))
    return out


# -- lattice maps up to symmetry ------------------------------------------------

def flat_permutation(M: Matroid, perm: Sequence[int], order: Sequence[int]) -> list[int]:
    """Action of an element permutation on the flats, as indices into ``order``."""
    idx = {F: i for i, F in enumerate(order)}
    return [idx[permute_mask(F, perm)] for F in order]


def map_orbit_reps(M1: Matroid, M2: Matroid, group=None, covering: bool = True,
                   weak: bool = True) -> Iterator[tuple[LatticeMap, list]]:
    """One lattice map per orbit of ``group`` acting by f -> τ f σ^{-1}.

    ``group`` is a list of pairs (σ, τ) of element permutations of M1 and
    M2 (default: all of Aut(M1) x Aut(M2)).  Yields each representative
    with its stabilizer, as a sublist of ``group``.

    Source flats are assigned one rank level at a time.  Inside a level the
    allowed images of each flat depend only on lower levels, so the level
    is a colouring problem; its orbits under the current stabilizer are
    built position by position, deduplicating partial colourings under the
    elements that stabilize the filled positions.
    """
    src = sorted(M1.flats, key=lambda F: (M1.rank_of[F], M1.groundset.sort_key(F)))
    tgt = sorted(M2.flats, key=lambda F: (M2.rank_of[F], M2.groundset.sort_key(F)))
    tidx = {G: i for i, G in enumerate(tgt)}
    if group is None:
        group = [(s, t) for s in automorphisms(M1) for t in automorphisms(M2)]
    # the transformed map reads position sig[g][i] of the original at position i
    sinv = []
    for s, _ in group:
        fp = flat_permutation(M1, s, src)
        inv = [0] * len(src)
        for j, k in enumerate(fp):
            inv[k] = j
        sinv.append(inv)
    sig = np.array(sinv, dtype=np.int64).reshape(len(group), len(src))
    tau = np.array([flat_permutation(M2, t, tgt) for _, t in group],
                   dtype=np.int64).reshape(len(group), len(tgt))
    levels: list[list[int]] = [[] for _ in range(M1.rank + 1)]
    for j, F in enumerate(src):
        levels[M1.rank_of[F]].append(j)
    sidx = {F: j for j, F in enumerate(src)}
    lower: dict[int, list[int]] = {j: [] for j in range(len(src))}
    for F, cov in M1.covers.items():
        for G in cov:
            lower[sidx[G]].append(sidx[F])
    tcov = [set(tidx[H] for H in M2.covers[G]) for G in tgt]
    trank = [M2.rank_of[G] for G in tgt]
    tsub = [[(tgt[a] & tgt[b]) == tgt[a] for b in range(len(tgt))] for a in range(len(tgt))]
    empty = tidx[0]
    base = len(tgt)

    def options(j: int, imgs: list[int]) -> list[int]:
        r = M1.rank_of[src[j]]
        out = []
        for G in range(len(tgt)):
            if trank[G] > r or (weak and j != 0 and G == empty):
                continue
            good = True
            for L in lower[j]:
                a = imgs[L]
                if not tsub[a][G] or (covering and a != G and G not in tcov[a]):
                    good = False
                    break
            if good:
                out.append(G)
        return out

    def canon_keys(cands: np.ndarray, pos: np.ndarray, H: np.ndarray) -> np.ndarray:
        """Lex-min key of each candidate row over the elements H."""
        L = len(pos)
        where = {int(x): i for i, x in enumerate(pos)}
        pmap = np.vectorize(where.__getitem__, otypes=[np.int64])(sig[H][:, pos]) if len(H) else None
        weights = np.array([base ** (L - 1 - i) for i in range(L)], dtype=np.int64)
        out = np.empty(len(cands), dtype=np.int64)
        step = max(1, 200000 // max(1, len(H) * L))
        for a in range(0, len(cands), step):
            C = cands[a:a + step]
            T = tau[H][None, :, :]
            vals = np.take_along_axis(C[:, None, :].repeat(len(H), 1), pmap[None, :, :].repeat(len(C), 0), 2)
            tr = np.take_along_axis(T.repeat(len(C), 0), vals, 2)
            out[a:a + step] = (tr * weights).sum(axis=2).min(axis=1)
        return out

    def level_reps(lv: list[int], imgs: list[int], stab: np.ndarray):
        pos_all = np.array(lv, dtype=np.int64)
        opts = [options(j, imgs) for j in lv]
        partial = np.zeros((1, 0), dtype=np.int64)
        for p in range(len(lv)):
            if not opts[p]:
                return []
            cands = np.concatenate([np.concatenate([partial, np.full((len(partial), 1), x)], axis=1)
                                    for x in opts[p]])
            pos = pos_all[:p + 1]
            H = stab[np.isin(sig[stab][:, pos], pos).all(axis=1)]
            keys = canon_keys(cands, pos, H)
            _, first = np.unique(keys, return_index=True)
            partial = cands[np.sort(first)]
        reps = []
        for row in partial:
            full = imgs[:]
            for j, x in zip(lv, row):
                full[j] = int(x)
            tr = tau[stab[:, None], np.array(full)[sig[stab][:, pos_all]]]
            same = (tr == row).all(axis=1)
            reps.append((full, stab[same]))
        return reps

    def rec(li: int, imgs: list[int], stab: np.ndarray):
        if li == len(levels):
            yield LatticeMap(M1, M2, {src[j]: tgt[imgs[j]] for j in range(len(src))}), \
                [group[int(g)] for g in stab]
            return
        for full, new in level_reps(levels[li], imgs, stab):
            yield from rec(li + 1, full, new)

    yield from rec(0, [0] * len(src), np.arange(len(group)))


def covering_map_pool(max_n: int = 5, max_rank: int = 3) -> list[Matroid]:
    """Simple matroids for the lattice-map corpora."""
    return [M for M in base_pool(max_n, graphic_edges=max_n)
            if len(M.groundset) <= max_n and M.rank <= max_rank and M.is_simple()]


def composable_pair_reps(A: Matroid, B: Matroid, C: Matroid, covering: bool = True,
                         weak: bool = True) -> Iterator[tuple[LatticeMap, LatticeMap]]:
    """One pair f: A -> B, g: B -> C per orbit of Aut(A) x Aut(B) x Aut(C).

    The triple (σ, τ, ρ) acts by f -> τ f σ^{-1}, g -> ρ g τ^{-1}; for a fixed
    representative f only its stabilizer's τ parts remain to act on g.
    """
    auts_c = automorphisms(C)
    for f, stab in map_orbit_reps(A, B, covering=covering, weak=weak):
        taus = sorted({t for _, t in stab})
        group = [(t, r) for t in taus for r in auts_c]
        for g, _ in map_orbit_reps(B, C, group=group, covering=covering, weak=weak):
            yield f, g
