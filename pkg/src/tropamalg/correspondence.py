"""Lattice maps between matroids and their graph correspondences.

Γ_f is built two ways: as the Weil divisor ∏ γ_i(f) · (B(M1) x B(M2)), and
combinatorially from Möbius sums over flats of M1.  Groundsets of
correspondences are tagged ``x@L`` (source) and ``y@R`` (target).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from typing import Callable, Iterator, Mapping

from .errors import MalformedLatticeMap, MiddleMismatch, NotCovering, NotSimple, NotWeak
from .fan import (
    AnyFan,
    FlagFan,
    WeightedChainFan,
    bergman_fan,
    product,
    pushforward,
    weil_divisor,
    weil_divisor_chains,
)
from .groundset import GroundSet, MaskMap, side_of, tag
from .matroid import Matroid
from .poset import eta_of_bottom

LEFT, MID, RIGHT = "L", "M", "R"


class LatticeMap:
    """An order-preserving map from the flats of ``source`` to those of ``target``."""

    def __init__(self, source: Matroid, target: Matroid, mapping: Mapping[int, int]):
        self.source, self.target = source, target
        g1, g2 = source.groundset, target.groundset
        missing = [F for F in source.flats if F not in mapping]
        if missing:
            raise MalformedLatticeMap("map is not defined on every flat",
                                      witness=list(g1.subset(min(missing, key=g1.sort_key))))
        extra = [F for F in mapping if F not in source.flats]
        if extra:
            raise MalformedLatticeMap("map is defined on a non-flat", witness=list(g1.subset(extra[0])))
        for F, G in mapping.items():
            if G not in target.flats:
                raise MalformedLatticeMap("image is not a flat",
                                          witness={"flat": list(g1.subset(F)), "image": list(g2.subset(G))})
        self.map = dict(mapping)
        for F, cov in source.covers.items():
            for F2 in cov:
                a, b = self.map[F], self.map[F2]
                if a & b != a:
                    raise MalformedLatticeMap(
                        "map is not order preserving",
                        witness={"flats": [list(g1.subset(F)), list(g1.subset(F2))],
                                 "images": [list(g2.subset(a)), list(g2.subset(b))]})

    def __call__(self, F: int) -> int:
        return self.map[F]

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatticeMap) and self.source == other.source
                and self.target == other.target and self.map == other.map)

    def __hash__(self):
        return hash(frozenset(self.map.items()))

    def __repr__(self) -> str:
        g1, g2 = self.source.groundset, self.target.groundset
        body = ", ".join(f"{''.join(g1.subset(F)) or '∅'}->{''.join(g2.subset(G)) or '∅'}"
                         for F, G in sorted(self.map.items(), key=lambda kv: g1.sort_key(kv[0])))
        return f"<LatticeMap {body}>"

    def then(self, g: "LatticeMap") -> "LatticeMap":
        """The composite g ∘ self."""
        if g.source != self.target:
            raise MiddleMismatch("maps are not composable")
        return LatticeMap(self.source, g.target, {F: g(G) for F, G in self.map.items()})


def identity_map(M: Matroid) -> LatticeMap:
    return LatticeMap(M, M, {F: F for F in M.flats})


def induced_lattice_map(M1: Matroid, M2: Matroid, h: Mapping[str, str]) -> LatticeMap:
    """F -> cl(h(F)) for an element map ``h``."""
    return LatticeMap(M1, M2, {F: M2.closure(M2.mask(h[x] for x in M1.labels(F))) for F in M1.flats})


# -- predicates ----------------------------------------------------------

def is_weak_lattice_map(f: LatticeMap) -> bool:
    M1, M2 = f.source, f.target
    return all((F == 0 or G != 0) and M1.rank_of[F] >= M2.rank_of[G] for F, G in f.map.items())


def is_covering_lattice_map(f: LatticeMap) -> bool:
    M2 = f.target
    for F, cov in f.source.covers.items():
        a = f(F)
        for F2 in cov:
            b = f(F2)
            if b != a and b not in M2.covers[a]:
                return False
    return True


def is_weak_groundset_map(M1: Matroid, M2: Matroid, h: Mapping[str, str]) -> bool:
    """rk1(X) >= rk2(h(X)) for every X ⊆ E1."""
    labels = M1.groundset.labels
    img = [M2.mask([h[x]]) for x in labels]
    for X in range(1 << len(labels)):
        Y = 0
        for i, m in enumerate(img):
            if X >> i & 1:
                Y |= m
        if M1.rk(X) < M2.rk(Y):
            return False
    return True


def pt(f: LatticeMap) -> dict[str, str]:
    """Element map x -> f({x}); needs simple source and target."""
    M1, M2 = f.source, f.target
    for M in (M1, M2):
        if not M.is_simple():
            bad = next(A for A in M.atoms() if bin(A).count("1") > 1)
            raise NotSimple("matroid is not simple", witness=list(M.labels(bad)))
    out = {}
    for x in M1.groundset.labels:
        G = f(M1.mask([x]))
        if G == 0:
            raise NotWeak("a point is sent to the empty flat", witness=x)
        out[x] = M2.labels(G)[0]
    return out


# -- graph rank functions --------------------------------------------------

def gamma(f: LatticeMap, F1: int, F2: int) -> int:
    M1, M2 = f.source, f.target
    return M2.rk(f(M1.closure(F1)) | F2) - M1.rk(F1) - M2.rk(F2)


def gamma_i(f: LatticeMap, i: int, F1: int, F2: int) -> int:
    M1, M2 = f.source, f.target
    lhs = M2.rk(f(M1.closure(F1)) | F2) + M1.rank - i
    return 0 if lhs >= M1.rk(F1) + M2.rk(F2) else -1


@dataclass
class Correspondence:
    """A cycle in B(left) x B(right) on the tagged union E_left ⊔ E_right."""

    left: Matroid
    right: Matroid | None
    fan: AnyFan

    def target_pushforward(self) -> WeightedChainFan:
        return pushforward(self.fan, [tag(x, RIGHT) for x in self.right.groundset])

    def source_pushforward(self) -> WeightedChainFan:
        return pushforward(self.fan, [tag(x, LEFT) for x in self.left.groundset])


def _splitters(g: GroundSet, M: Matroid, side: str) -> MaskMap:
    return MaskMap(g, M.groundset, {tag(x, side): x for x in M.groundset.labels})


def gamma_cuts(f: LatticeMap, g: GroundSet, sides=(LEFT, RIGHT)) -> list[Callable[[int], int]]:
    """γ_1(f) .. γ_r(f) as functions of a bitmask over ``g``."""
    left = _splitters(g, f.source, sides[0])
    right = _splitters(g, f.target, sides[1])

    def mk(i):
        return lambda v: gamma_i(f, i, left(v), right(v))

    return [mk(i) for i in range(1, f.source.rank + 1)]


def graph_correspondence(f: LatticeMap, order=None, chains: bool = False) -> Correspondence:
    """Γ_f = ∏ γ_i(f) · (B(M1) x B(M2)), applied for i = 1, ..., rk M1.

    The poset algorithm needs every γ_i to be upward closed on the current
    poset, which can fail for non-covering maps (NotACut, with the
    offending cover as witness).  ``chains=True`` evaluates the same
    divisors cone by cone instead, which has no such requirement.
    """
    if not is_weak_lattice_map(f):
        raise NotWeak("graph correspondences need a weak lattice map", witness=_weak_witness(f))
    X = product(bergman_fan(f.source), bergman_fan(f.target), (LEFT, RIGHT))
    cuts = gamma_cuts(f, X.groundset)
    if chains:
        X = X.to_chain_fan()
    for i in (order or range(len(cuts))):
        X = weil_divisor_chains(X, cuts[i]) if chains else weil_divisor(X, cuts[i])
    return Correspondence(f.source, f.target, X)


def _weak_witness(f: LatticeMap):
    M1, M2 = f.source, f.target
    for F, G in sorted(f.map.items(), key=lambda kv: M1.groundset.sort_key(kv[0])):
        if (F != 0 and G == 0) or M1.rank_of[F] < M2.rank_of[G]:
            return {"flat": list(M1.labels(F)), "image": list(M2.labels(G))}
    return None


def graph_correspondence_direct(f: LatticeMap) -> Correspondence:
    """Γ_f from its poset description with Möbius weights (covering f only).

    Vertices are pairs (X, Y) with f(X) ≤ Y; edges (X1,Y1) -> (X2,Y2) need
    Y1 ⋖ Y2 and X1 ≤ X2 and carry η(X1) on {F : X1 ≤ F ≤ X2, f(F) ≤ Y1}.
    """
    if not is_covering_lattice_map(f):
        raise NotCovering("the direct construction needs a covering lattice map")
    M1, M2 = f.source, f.target
    g, (ml, mr) = _tagged_union(M1, M2)
    flats1 = sorted(M1.flats, key=lambda F: (M1.rank_of[F], M1.groundset.sort_key(F)))
    below: dict[int, list[int]] = {}  # flats F of M1 with f(F) <= Y1, per Y1
    for Y in M2.flats:
        below[Y] = [F for F in flats1 if f(F) & Y == f(F)]
    memo: dict[tuple[int, int, int], int] = {}
    edges = {}
    rank = {}
    for X1 in flats1:
        fx = f(X1)
        for Y1 in M2.flats:
            if fx & Y1 != fx:
                continue
            v = ml(X1) | mr(Y1)
            rank[v] = M2.rank_of[Y1]
            for X2 in flats1:
                if X1 & X2 != X1:
                    continue
                key = (X1, X2, Y1)
                w = memo.get(key)
                if w is None:
                    members = [F for F in below[Y1] if X1 & F == X1 and F & X2 == F]
                    w = memo[key] = eta_of_bottom(X1, members)
                if not w:
                    continue
                for Y2 in M2.covers[Y1]:
                    if f(X2) & Y2 != f(X2):
                        continue
                    edges[(v, ml(X2) | mr(Y2))] = w
    for X in flats1:
        for Y in M2.flats:
            if f(X) & Y == f(X):
                rank[ml(X) | mr(Y)] = M2.rank_of[Y]
    return Correspondence(M1, M2, FlagFan(g, edges, rank))


def _tagged_union(M1: Matroid, M2: Matroid, sides=(LEFT, RIGHT)):
    from .groundset import disjoint_union

    return disjoint_union([M1.groundset, M2.groundset], sides)


# -- composition -----------------------------------------------------------

def relabel_fan(X: AnyFan, rename: Mapping[str, str]) -> AnyFan:
    g2 = GroundSet(rename.get(x, x) for x in X.groundset.labels)
    mm = MaskMap(X.groundset, g2, dict(rename))
    if isinstance(X, FlagFan):
        return FlagFan(g2, {(mm(a), mm(b)): w for a, b, w in X.edges()},
                       {mm(v): r for v, r in X.rank.items()}, dim=X.dim)
    return WeightedChainFan(g2, {tuple(mm(F) for F in c): w for c, w in X.chains.items()}, dim=X.dim)


def chain_product(A: WeightedChainFan, B: WeightedChainFan) -> WeightedChainFan:
    """Product of chain fans on disjoint groundsets (all shuffles of flags)."""
    from .groundset import disjoint_union

    g, (ma, mb) = disjoint_union([A.groundset, B.groundset])
    out: dict[tuple, int] = {}
    p, q = A.dim, B.dim
    for ca, wa in A.chains.items():
        for cb, wb in B.chains.items():
            for pos in combinations(range(p + q), p):
                i = j = 0
                chain = [0]
                ps = set(pos)
                for s in range(p + q):
                    if s in ps:
                        i += 1
                    else:
                        j += 1
                    chain.append(ma(ca[i]) | mb(cb[j]))
                out[tuple(chain)] = out.get(tuple(chain), 0) + wa * wb
    return WeightedChainFan(g, out, dim=p + q)


def compose(f: LatticeMap, gamma_g: Correspondence | AnyFan, right: Matroid | None = None) -> Correspondence:
    """Γ_g ∘ Γ_f = π_XZ*( ∏ π_XY*(γ_i(f)) · (B_X x Γ_g) ).

    ``gamma_g`` lives on E_Y ⊔ E_Z tagged L/R; E_Y must be the target of f.
    """
    if isinstance(gamma_g, Correspondence):
        if gamma_g.left != f.target:
            raise MiddleMismatch("middle matroids differ",
                                 witness={"target_of_f": list(f.target.groundset.labels),
                                          "source_of_g": list(gamma_g.left.groundset.labels)})
        fan, right = gamma_g.fan, gamma_g.right
    else:
        fan = gamma_g
    M1, M2 = f.source, f.target
    ylab = {tag(y, LEFT) for y in M2.groundset.labels}
    if right is None:
        # a bare fan: the right labels are whatever carries the R tag
        zlab = {x for x in fan.groundset.labels if side_of(x) == RIGHT}
    else:
        zlab = {tag(z, RIGHT) for z in right.groundset.labels}
    if set(fan.groundset.labels) != ylab | zlab:
        raise MiddleMismatch("fan groundset does not match the middle and right matroids",
                             witness=list(fan.groundset.labels))
    mid = relabel_fan(fan, {tag(y, LEFT): tag(y, MID) for y in M2.groundset.labels})
    BX = relabel_fan(bergman_fan(M1), {x: tag(x, LEFT) for x in M1.groundset.labels})
    if isinstance(mid, FlagFan):
        X = product(BX, mid)
    else:
        X = chain_product(BX.to_chain_fan(), mid)
    cuts = gamma_cuts(f, X.groundset, (LEFT, MID))
    for c in cuts:
        X = weil_divisor(X, c) if isinstance(X, FlagFan) else weil_divisor_chains(X, c)
    keep = [tag(x, LEFT) for x in M1.groundset.labels] + sorted(zlab)
    return Correspondence(M1, right, pushforward(X, keep))


def gamma_min_compose_check(f: LatticeMap, g: LatticeMap, FX: int, FZ: int) -> bool:
    """γ(g∘f)(FX,FZ) = min over FY of γ(g)(FY,FZ) + γ(f)(FX,FY) + rk FY."""
    gf = f.then(g)
    lhs = gamma(gf, FX, FZ)
    rhs = min(gamma(g, FY, FZ) + gamma(f, FX, FY) + f.target.rank_of[FY] for FY in f.target.flats)
    return lhs == rhs


# -- enumeration -----------------------------------------------------------

def enumerate_lattice_maps(M1: Matroid, M2: Matroid, covering: bool = False,
                           weak: bool = False) -> Iterator[LatticeMap]:
    """All order-preserving, rank-non-increasing flat maps M1 -> M2."""
    src = sorted(M1.flats, key=lambda F: (M1.rank_of[F], M1.groundset.sort_key(F)))
    lower = {F: [] for F in src}
    for F, cov in M1.covers.items():
        for G in cov:
            lower[G].append(F)
    tgt = sorted(M2.flats, key=lambda G: (M2.rank_of[G], M2.groundset.sort_key(G)))
    assign: dict[int, int] = {}

    def rec(k):
        if k == len(src):
            yield LatticeMap(M1, M2, assign)
            return
        F = src[k]
        r = M1.rank_of[F]
        for G in tgt:
            if M2.rank_of[G] > r:
                break
            if weak and F and not G:
                continue
            ok = True
            for L in lower[F]:
                a = assign[L]
                if a & G != a or (covering and a != G and G not in M2.covers[a]):
                    ok = False
                    break
            if ok:
                assign[F] = G
                yield from rec(k + 1)
                del assign[F]

    yield from rec(0)
