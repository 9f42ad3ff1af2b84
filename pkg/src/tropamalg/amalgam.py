"""Tropical fibre products and proper amalgams of matroids.

``decide_amalgam`` intersects B(M1) x B(M2) with the pullbacks of the cut
functions that carve out the diagonal of B(N) x B(N); the result is a
Bergman fan of the proper amalgam (with the elements of T doubled) or has
a negative cone.  ``oracle_proper_amalgam`` answers the same question by
brute force over all subsets, straight from the definition.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

from .errors import GroundsetTooLarge, RestrictionMismatch
from .fan import FlagFan, bergman_fan, matroid_from_degree1_fan, negative_chains, product, weil_divisor
from .groundset import GroundSet, MaskMap, bits, tag, untag
from .matroid import Matroid, fuse_parallel, from_rank_function, restriction

SIDES = ("L", "R")


class AmalgamProblem:
    """Two matroids that agree on their common elements T = E1 ∩ E2.

    N is always recomputed as M1|T and compared with M2|T.
    """

    def __init__(self, M1: Matroid, M2: Matroid, T=None):
        self.M1, self.M2 = M1, M2
        common = [x for x in M1.groundset.labels if x in M2.groundset]
        if T is not None:
            T = [str(x) for x in T]
            if sorted(T) != sorted(common):
                raise RestrictionMismatch("T must be the intersection of the two groundsets",
                                          witness={"T": sorted(T), "intersection": sorted(common)})
        self.T = GroundSet(common)
        self.N = restriction(M1, M1.mask(common))
        N2 = restriction(M2, M2.mask(common))
        if self.N != N2:
            diff = sorted(self.N.flats ^ N2.flats, key=self.T.sort_key)
            raise RestrictionMismatch(
                "the two matroids restrict differently to their common elements",
                witness={"flat": list(self.T.subset(diff[0])),
                         "in_first": diff[0] in self.N.flats})
        self.union = GroundSet(list(M1.groundset.labels)
                               + [x for x in M2.groundset.labels if x not in M1.groundset])

    def __repr__(self) -> str:
        return (f"<AmalgamProblem E1={list(self.M1.groundset.labels)} "
                f"E2={list(self.M2.groundset.labels)} T={list(self.T.labels)}>")


def diagonal_cut_values(N: Matroid, rk_n, i: int, Y1: int, Y2: int) -> int:
    """Value of the i-th diagonal cut function at (Y1, Y2)."""
    return 0 if rk_n(Y1 | Y2) + N.rank - i >= rk_n(Y1) + rk_n(Y2) else -1


def diagonal_functions(N: Matroid, tags=SIDES) -> tuple[FlagFan, list]:
    """B(N) x B(N) and the cut sets of φ_1 .. φ_r on it."""
    X = product(bergman_fan(N), bergman_fan(N), tags)
    g = X.groundset
    left = MaskMap(g, N.groundset, {tag(x, tags[0]): x for x in N.groundset.labels})
    right = MaskMap(g, N.groundset, {tag(x, tags[1]): x for x in N.groundset.labels})
    cuts = []
    for i in range(1, N.rank + 1):
        cuts.append(frozenset(v for v in X.rank
                              if diagonal_cut_values(N, N.rk, i, left(v), right(v)) == -1))
    return X, cuts


def _pulled_back(P: AmalgamProblem, g: GroundSet):
    N = P.N
    left = MaskMap(g, N.groundset, {tag(x, SIDES[0]): x for x in N.groundset.labels})
    right = MaskMap(g, N.groundset, {tag(x, SIDES[1]): x for x in N.groundset.labels})

    def phi(i):
        return lambda v: diagonal_cut_values(N, N.rk, i, left(v), right(v))

    return [phi(i) for i in range(1, N.rank + 1)]


def fibre_product(P: AmalgamProblem, order=None) -> FlagFan:
    """∏ π*(φ_i) · (B(M1) x B(M2)) on the tagged groundset E1 ⊔ E2.

    The cut functions are applied for i = 1, 2, ..., r (non-increasing
    values); ``order`` permutes them for order-independence checks.
    """
    X = product(bergman_fan(P.M1), bergman_fan(P.M2), SIDES)
    phis = _pulled_back(P, X.groundset)
    for i in (order or range(len(phis))):
        X = weil_divisor(X, phis[i])
    return X


def amalgam_eta(P: AmalgamProblem, F: int, tagged: bool = False) -> int:
    """rk1(F ∩ E1) + rk2(F ∩ E2) - rkN(F ∩ T).

    ``F`` is a bitmask over ``P.union`` or, with ``tagged``, over the tagged
    disjoint union used by :func:`fibre_product`.
    """
    if tagged:
        g = GroundSet([tag(x, SIDES[0]) for x in P.M1.groundset]
                      + [tag(x, SIDES[1]) for x in P.M2.groundset])
        labels = g.subset(F)
        a = [untag(x) for x in labels if x.endswith("@" + SIDES[0])]
        b = [untag(x) for x in labels if x.endswith("@" + SIDES[1])]
        t = [x for x in set(a) | set(b) if x in P.T]
        return P.M1.rk(P.M1.mask(a)) + P.M2.rk(P.M2.mask(b)) - P.N.rk(P.N.mask(t))
    labels = P.union.subset(F)
    return (P.M1.rk(P.M1.mask(x for x in labels if x in P.M1.groundset))
            + P.M2.rk(P.M2.mask(x for x in labels if x in P.M2.groundset))
            - P.N.rk(P.N.mask(x for x in labels if x in P.T)))


def max_groundset() -> int:
    return int(os.environ.get("TROPAMALG_MAX_GROUNDSET", "20"))


def oracle_proper_amalgam(P: AmalgamProblem) -> Matroid | None:
    """The proper amalgam by brute force, or ``None`` if there is none.

    A proper amalgam must have rank function ζ(X) = min{η(Y) : Y ⊇ X}; we
    compute ζ on all subsets and test every defining property.
    """
    g = P.union
    n = len(g)
    cap = max_groundset()
    if n > cap:
        raise GroundsetTooLarge(f"{n} elements exceed the oracle cap of {cap}",
                                witness={"size": n, "cap": cap})
    m1 = MaskMap(g, P.M1.groundset)
    m2 = MaskMap(g, P.M2.groundset)
    mt = MaskMap(g, P.N.groundset)
    r1, r2, rn = P.M1.rank_table(), P.M2.rank_table(), P.N.rank_table()
    size = 1 << n
    eta = [r1[m1(Y)] + r2[m2(Y)] - rn[mt(Y)] for Y in range(size)]
    zeta = eta[:]
    for b in range(n):
        bit = 1 << b
        for X in range(size):
            if not X & bit:
                y = zeta[X | bit]
                if y < zeta[X]:
                    zeta[X] = y
    if zeta[0] != 0:
        return None
    for X in range(size):
        z = zeta[X]
        for b in range(n):
            bit = 1 << b
            if X & bit:
                continue
            d = zeta[X | bit] - z
            if d not in (0, 1):
                return None
            for c in range(b + 1, n):
                cb = 1 << c
                if X & cb:
                    continue
                if zeta[X | bit] + zeta[X | cb] < zeta[X | bit | cb] + z:
                    return None
    if any(zeta[1 << b] != 1 for b in range(n)):
        return None  # a loop
    M = from_rank_function(g, zeta.__getitem__)
    if restriction(M, M.mask(P.M1.groundset)) != P.M1:
        return None
    if restriction(M, M.mask(P.M2.groundset)) != P.M2:
        return None
    if any(zeta[F] != eta[F] for F in M.flats):
        return None
    return M


@dataclass
class AmalgamVerdict:
    """Either the amalgam or the negative maximal cones of the fibre product."""

    matroid: Matroid | None = None
    negative_chains: list = field(default_factory=list)
    fan: FlagFan | None = None

    @property
    def exists(self) -> bool:
        return self.matroid is not None


def untagging_fusion(P: AmalgamProblem, M: Matroid) -> Matroid:
    """Fuse the doubled copies of T and drop the side tags."""
    pairs = [(tag(t, SIDES[0]), tag(t, SIDES[1])) for t in P.T.labels]
    rename = {x: untag(x) for x in M.groundset.labels}
    return fuse_parallel(M, pairs, rename)


def decide_amalgam(P: AmalgamProblem) -> AmalgamVerdict:
    X = fibre_product(P)
    neg = negative_chains(X)
    if neg:
        return AmalgamVerdict(None, neg, X)
    M = matroid_from_degree1_fan(X)
    return AmalgamVerdict(untagging_fusion(P, M), [], X)


def locally_surjective(M: Matroid, T: int) -> bool:
    """Whether B(M) -> B(M|T) is surjective on every star.

    Checks that F -> F ∩ T maps the flats between F' ⊆ F'' onto the flats
    of M|T between F' ∩ T and F'' ∩ T, for every pair of flats.
    """
    N = restriction(M, T)
    toN = MaskMap(M.groundset, N.groundset)
    flats = sorted(M.flats)
    nflats = N.flats
    for lo in flats:
        for hi in flats:
            if lo & hi != lo:
                continue
            img = {toN(F & T) for F in flats if lo & F == lo and F & hi == F}
            a, b = toN(lo & T), toN(hi & T)
            want = {G for G in nflats if a & G == a and G & b == G}
            if img != want:
                return False
    return True


def common_restrictions(M: Matroid, max_size: int | None = None):
    """All subsets T of E (as masks) with the restriction M|T, by size."""
    n = len(M.groundset)
    for k in range(n + 1 if max_size is None else min(n, max_size) + 1):
        for c in combinations(range(n), k):
            T = sum(1 << i for i in c)
            yield T, restriction(M, T)
