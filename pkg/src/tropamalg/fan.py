"""Flag fans: tropical fans whose cones are flags in a weighted ranked poset.

A :class:`FlagFan` stores only the Hasse diagram of its poset with integer
edge weights; the weight of a maximal cone is the product of the weights
along its flag.  Copies of cones with ``-e_E`` are implicit throughout.

The central routine is :func:`weil_divisor`, a pure poset rewrite.  A
chain-level version (:func:`weil_divisor_chains`) works on
:class:`WeightedChainFan` values and doubles as an independent check.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    AxiomsFailDespitePositivity,
    GroundsetMismatch,
    LocallyUnbalanced,
    MalformedFan,
    NegativeWeight,
    NotACut,
    NotAFlag,
    NotDegreeOne,
    TropError,
    UnexpectedIndex,
)
from .groundset import GroundSet, MaskMap, bits, disjoint_union
from .linalg import saturation_index
from .matroid import Matroid, contraction, matroid_from_flats, restriction
from .poset import RankedPoset

Chain = tuple  # (0, F_1, ..., E) as bitmasks


class FlagFan:
    """Weighted ranked poset of subsets of a groundset.

    ``up[v]`` maps each upper cover of ``v`` to the (nonzero) edge weight.
    Vertices off every ∅-to-E path are pruned on construction; if nothing
    connects ∅ to E the fan is zero and has no vertices.
    """

    __slots__ = ("groundset", "up", "rank", "dim")

    def __init__(self, groundset: GroundSet, edges: Mapping[tuple[int, int], int],
                 rank: Mapping[int, int] | None = None, dim: int | None = None):
        self.groundset = groundset
        E = groundset.full
        up: dict[int, dict[int, int]] = defaultdict(dict)
        for (a, b), w in edges.items():
            if w == 0:
                continue
            if a & b != a or a == b:
                raise MalformedFan("edge is not a strict inclusion",
                                   witness=[list(groundset.subset(a)), list(groundset.subset(b))])
            up[a][b] = int(w)
        # keep vertices on some 0 -> E path
        fwd = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in up.get(v, ()):
                if w not in fwd:
                    fwd.add(w)
                    stack.append(w)
        down = defaultdict(set)
        for a, outs in up.items():
            for b in outs:
                down[b].add(a)
        bwd = {E} if E in fwd else set()
        stack = list(bwd)
        while stack:
            v = stack.pop()
            for u in down.get(v, ()):
                if u not in bwd:
                    bwd.add(u)
                    stack.append(u)
        keep = fwd & bwd
        self.up = {v: {w: x for w, x in up.get(v, {}).items() if w in keep} for v in keep}
        if rank is None:
            r = {0: 0} if keep else {}
            for v in sorted(keep, key=lambda m: bin(m).count("1")):
                for w in self.up[v]:
                    r.setdefault(w, r[v] + 1)
            rank = r
        self.rank = {v: rank[v] for v in keep}
        for v, outs in self.up.items():
            for w in outs:
                if self.rank[w] != self.rank[v] + 1:
                    raise MalformedFan("poset is not graded along its covers",
                                       witness=[list(groundset.subset(v)), list(groundset.subset(w))])
        if keep:
            if self.rank[0] != 0:
                raise MalformedFan("the empty set must have rank 0")
            self.dim = self.rank[E]
        else:
            self.dim = dim if dim is not None else 0

    # -- queries -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.up

    @property
    def vertices(self) -> list[int]:
        g = self.groundset
        return sorted(self.rank, key=lambda v: (self.rank[v], g.sort_key(v)))

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for v in self.vertices:
            for w in sorted(self.up[v], key=self.groundset.sort_key):
                yield v, w, self.up[v][w]

    def edge_dict(self) -> dict[tuple[int, int], int]:
        return {(a, b): w for a, b, w in self.edges()}

    def poset(self) -> RankedPoset:
        return RankedPoset(self.vertices, [(a, b) for a, b, _ in self.edges()], self.rank)

    def chains(self) -> dict[Chain, int]:
        """All maximal flags with their product weights (zero weights dropped)."""
        E = self.groundset.full
        out: dict[Chain, int] = {}
        if self.is_zero:
            return out

        def walk(v, path, w):
            if v == E:
                out[tuple(path)] = w
                return
            for u, x in self.up[v].items():
                path.append(u)
                walk(u, path, w * x)
                path.pop()

        walk(0, [0], 1)
        return out

    def to_chain_fan(self) -> "WeightedChainFan":
        return WeightedChainFan(self.groundset, self.chains(), dim=self.dim)

    def scaled(self, k: int) -> "FlagFan":
        """Multiply every maximal-cone weight by ``k`` (via the edges out of ∅)."""
        edges = self.edge_dict()
        for (a, b) in list(edges):
            if a == 0:
                edges[(a, b)] *= k
        return FlagFan(self.groundset, edges, self.rank, dim=self.dim)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FlagFan) and self.groundset == other.groundset
                and self.edge_dict() == other.edge_dict())

    def __hash__(self):
        return hash((self.groundset, frozenset(self.edge_dict().items())))

    def __repr__(self) -> str:
        n_e = sum(len(o) for o in self.up.values())
        return f"<FlagFan dim {self.dim} on {len(self.groundset)} elements: {len(self.rank)} vertices, {n_e} edges>"


class WeightedChainFan:
    """A tropical cycle given by maximal flags ``(∅, F_1, ..., E)`` and weights."""

    __slots__ = ("groundset", "chains", "dim")

    def __init__(self, groundset: GroundSet, chains: Mapping[Chain, int], dim: int | None = None):
        self.groundset = groundset
        self.chains = {tuple(c): int(w) for c, w in chains.items() if w}
        lens = {len(c) for c in self.chains}
        if len(lens) > 1:
            raise MalformedFan("chains of different lengths", witness=sorted(lens))
        E = groundset.full
        for c in self.chains:
            if c[0] != 0 or c[-1] != E or any(a & b != a or a == b for a, b in zip(c, c[1:])):
                raise MalformedFan("not a strictly increasing flag from ∅ to E",
                                   witness=[list(groundset.subset(x)) for x in c])
        self.dim = lens.pop() - 1 if lens else (dim or 0)

    @property
    def is_zero(self) -> bool:
        return not self.chains

    def to_chain_fan(self) -> "WeightedChainFan":
        return self

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightedChainFan) and self.groundset == other.groundset
                and self.chains == other.chains)

    def __repr__(self) -> str:
        return f"<WeightedChainFan dim {self.dim}: {len(self.chains)} chains>"


AnyFan = Union[FlagFan, WeightedChainFan]


# -- constructions ---------------------------------------------------------

def bergman_fan(M: Matroid) -> FlagFan:
    edges = {(F, G): 1 for F, cov in M.covers.items() for G in cov}
    return FlagFan(M.groundset, edges, M.rank_of)


def product(X: FlagFan, Y: FlagFan, tags: tuple[str, str] | None = None) -> FlagFan:
    """Product fan on the disjoint union; edges move one coordinate."""
    union, (m1, m2) = disjoint_union([X.groundset, Y.groundset], tags)
    ix = {v: m1(v) for v in X.rank}
    iy = {v: m2(v) for v in Y.rank}
    edges = {}
    rank = {}
    for a, ra in X.rank.items():
        for b, rb in Y.rank.items():
            v = ix[a] | iy[b]
            rank[v] = ra + rb
            for a2, w in X.up[a].items():
                edges[(v, ix[a2] | iy[b])] = w
            for b2, w in Y.up[b].items():
                edges[(v, ix[a] | iy[b2])] = w
    return FlagFan(union, edges, rank, dim=X.dim + Y.dim)


def star(M: Matroid, flag: Sequence[int]) -> FlagFan:
    """Star of B(M) at a flag of flats: product of the Bergman fans of the minors."""
    flag = list(flag)
    if not flag or flag[0] != 0 or flag[-1] != M.E:
        raise NotAFlag("a flag must start at ∅ and end at E",
                       witness=[list(M.labels(F)) for F in flag])
    for a, b in zip(flag, flag[1:]):
        if a & b != a or a == b:
            raise NotAFlag("flag is not strictly increasing",
                           witness=[list(M.labels(a)), list(M.labels(b))])
    for F in flag:
        if F not in M.flats:
            raise NotAFlag("flag member is not a flat", witness=list(M.labels(F)))
    out = None
    for a, b in zip(flag, flag[1:]):
        minor = contraction(restriction(M, b), M.groundset.sub(b).mask(M.labels(a)))
        B = bergman_fan(minor)
        out = B if out is None else product(out, B)
    return FlagFan(M.groundset, {(M.mask(out.groundset.subset(a)), M.mask(out.groundset.subset(b))): w
                                 for a, b, w in out.edges()})


# -- Weil divisors -----------------------------------------------------------

def _check_cut(X: FlagFan, A: frozenset[int]) -> None:
    g = X.groundset
    for v in A:
        if v not in X.rank:
            raise NotACut("cut contains a non-vertex", witness=list(g.subset(v)))
    if 0 in A:
        raise NotACut("cut contains the empty set", witness=[])
    for v in A:
        for w in X.up[v]:
            if w not in A:
                raise NotACut("cut is not upward closed",
                              witness=[list(g.subset(v)), list(g.subset(w))])


def cut_from_function(X: FlagFan, phi: Callable[[int], int]) -> frozenset[int]:
    """The set of vertices on which a {0,-1} valued function is -1."""
    return frozenset(v for v in X.rank if phi(v) == -1)


def weil_divisor(X: FlagFan, A: Iterable[int] | Callable[[int], int]) -> FlagFan:
    """φ_A · X for the cut function equal to -1 exactly on the vertex set A.

    ``A`` may also be a {0,-1} valued function of the vertex bitmask.
    """
    if callable(A):
        A = cut_from_function(X, A)
    A = frozenset(A)
    _check_cut(X, A)
    g = X.groundset
    if X.is_zero:
        return FlagFan(g, {}, dim=X.dim - 1)
    if not A:
        # identically zero function: identity fast path
        return X
    edges: dict[tuple[int, int], int] = {}
    for v, outs in X.up.items():
        vin = v in A
        for w, x in outs.items():
            if (w in A) == vin:
                edges[(v, w)] = x
    for lo, outs in X.up.items():
        if lo in A:
            continue
        segs: dict[int, list] = defaultdict(list)
        for mid, w1 in outs.items():
            for hi, w2 in X.up[mid].items():
                if hi in A:
                    segs[hi].append((mid, w1 * w2))
        for hi, lst in segs.items():
            coef: dict[int, int] = defaultdict(int)
            for mid, w in lst:
                for x in bits(mid & ~lo):
                    coef[x] += w
            vals = {coef.get(x, 0) for x in bits(hi & ~lo)}
            if len(vals) != 1:
                raise LocallyUnbalanced(
                    "segment sum is not a multiple of the layer vector",
                    witness={"segment": [list(g.subset(lo)), list(g.subset(hi))],
                             "sum": {g.labels[x]: coef.get(x, 0) for x in bits(hi & ~lo)}})
            c = vals.pop()
            w = c - sum(x for mid, x in lst if mid in A)
            if w:
                edges[(lo, hi)] = w
    rank = {v: r - (v in A) for v, r in X.rank.items()}
    return FlagFan(g, edges, rank, dim=X.dim - 1)


def _layer_values(tau: Chain, coef: Mapping[int, int]):
    """Constant value of ``coef`` on each layer of ``tau``, or None."""
    vals = []
    for a, b in zip(tau, tau[1:]):
        s = {coef.get(x, 0) for x in bits(b & ~a)}
        if len(s) != 1:
            return None
        vals.append(s.pop())
    return vals


def _faces(C: WeightedChainFan):
    faces: dict[Chain, list] = defaultdict(list)
    for chain, w in C.chains.items():
        for j in range(1, len(chain) - 1):
            faces[chain[:j] + chain[j + 1:]].append((chain[j], w))
    return faces


def weil_divisor_chains(C: AnyFan, phi: Callable[[int], int] | Iterable[int]) -> WeightedChainFan:
    """Chain-level Weil divisor of a cut function.

    For every codimension-one face τ the weight is
    Σ ω(σ)φ(v_σ) - φ(Σ ω(σ)v_σ), with φ extended linearly on τ.
    """
    C = C.to_chain_fan()
    if not callable(phi):
        A = frozenset(phi)
        phi = lambda m: -1 if m in A else 0  # noqa: E731
    g = C.groundset
    out: dict[Chain, int] = {}
    for tau, lst in _faces(C).items():
        coef: dict[int, int] = defaultdict(int)
        for F, w in lst:
            for x in bits(F):
                coef[x] += w
        vals = _layer_values(tau, coef)
        if vals is None:
            raise LocallyUnbalanced(
                "face sum is not in the span of the face",
                witness={"face": [list(g.subset(t)) for t in tau],
                         "sum": {g.labels[x]: coef.get(x, 0) for x in bits(g.full)}})
        vals.append(0)
        phi_s = sum((vals[i] - vals[i + 1]) * phi(tau[i + 1]) for i in range(len(tau) - 1))
        w = sum(w * phi(F) for F, w in lst) - phi_s
        if w:
            out[tau] = w
    return WeightedChainFan(g, out, dim=C.dim - 1)


def truncation_cut(X: FlagFan) -> frozenset[int]:
    """The cut {E} defining α."""
    return frozenset([X.groundset.full])


def degree(X: AnyFan) -> int:
    """Weight of ⟨e_E⟩ after cutting by α dim-1 times."""
    E = X.groundset.full
    if isinstance(X, FlagFan):
        Y = X
        for _ in range(X.dim - 1):
            if Y.is_zero:
                return 0
            Y = weil_divisor(Y, [E])
        return 0 if Y.is_zero else Y.up[0][E] if Y.dim == 1 else 0
    Y = X
    for _ in range(X.dim - 1):
        Y = weil_divisor_chains(Y, [E])
    return Y.chains.get((0, E), 0)


# -- balancing ---------------------------------------------------------------

@dataclass
class BalancingReport:
    balanced: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"balanced": self.balanced, "violations": self.violations}


def check_balancing(X: AnyFan) -> BalancingReport:
    """Check the balancing condition at every codimension-one face.

    Faces that drop ±e_E balance by symmetry and are skipped.
    """
    g = X.groundset
    bad = []
    if isinstance(X, WeightedChainFan):
        for tau, lst in sorted(_faces(X).items()):
            coef: dict[int, int] = defaultdict(int)
            for F, w in lst:
                for x in bits(F):
                    coef[x] += w
            if _layer_values(tau, coef) is None:
                bad.append({"face": [list(g.subset(t)) for t in tau],
                            "sum": {g.labels[x]: coef.get(x, 0) for x in bits(g.full)}})
        return BalancingReport(not bad, bad)
    # for a flag fan the condition is local to rank-two segments
    paths_down = _some_path(X, down=True)
    paths_up = _some_path(X, down=False)
    for lo in X.vertices:
        segs: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
        for mid, w1 in X.up[lo].items():
            for hi, w2 in X.up[mid].items():
                for x in bits(mid & ~lo):
                    segs[hi][x] += w1 * w2
        for hi in sorted(segs, key=g.sort_key):
            coef = segs[hi]
            if len({coef.get(x, 0) for x in bits(hi & ~lo)}) != 1:
                face = paths_down[lo] + paths_up[hi]
                bad.append({"face": [list(g.subset(t)) for t in face],
                            "segment": [list(g.subset(lo)), list(g.subset(hi))],
                            "sum": {g.labels[x]: coef.get(x, 0) for x in bits(hi & ~lo)}})
    return BalancingReport(not bad, bad)


def _some_path(X: FlagFan, down: bool) -> dict[int, list[int]]:
    """A canonical path from ∅ to each vertex (or from each vertex to E)."""
    E = X.groundset.full
    out: dict[int, list[int]] = {}
    order = sorted(X.rank, key=lambda v: X.rank[v], reverse=not down)
    if down:
        for v in order:
            if v == 0:
                out[v] = [0]
        for v in order:
            for w in sorted(X.up[v], key=X.groundset.sort_key):
                if w not in out:
                    out[w] = out[v] + [w]
    else:
        for v in order:
            if v == E:
                out[v] = [E]
                continue
            w = min(X.up[v], key=X.groundset.sort_key)
            out[v] = [v] + out[w]
    return out


# -- push-forward ------------------------------------------------------------

def pushforward(X: AnyFan, keep: int | Iterable[str]) -> WeightedChainFan:
    """Push forward along the coordinate projection onto ``keep``."""
    g = X.groundset
    if not isinstance(keep, int):
        keep = g.mask(keep)
    target = g.sub(keep)
    proj = MaskMap(g, target)
    out: dict[Chain, int] = defaultdict(int)
    lam_memo: dict[Chain, int] = {}
    n = len(target)
    for chain, w in X.to_chain_fan().chains.items():
        img = tuple(proj(F) for F in chain)
        if any(a == b for a, b in zip(img, img[1:])):
            continue
        lam = lam_memo.get(img)
        if lam is None:
            rows = [[(F >> i) & 1 for i in range(n)] for F in img[1:]]
            lam = saturation_index(rows)
            if lam != 1:
                raise UnexpectedIndex(f"lattice index {lam} on an image cone",
                                      witness=[list(target.subset(F)) for F in img])
            lam_memo[img] = lam
        out[img] += w * lam
    return WeightedChainFan(target, out, dim=X.dim)


# -- comparison and extraction ------------------------------------------------

def fans_equal(A: AnyFan, B: AnyFan) -> bool:
    if A.groundset != B.groundset:
        raise GroundsetMismatch("fans live on different groundsets",
                                witness=[list(A.groundset.labels), list(B.groundset.labels)])
    return A.to_chain_fan().chains == B.to_chain_fan().chains


def matroid_from_degree1_fan(X: FlagFan) -> Matroid:
    """Recover M from a positive degree-one Flag fan equal to B(M)."""
    g = X.groundset
    chains = X.chains()
    for c in sorted(chains, key=lambda c: [g.sort_key(F) for F in c]):
        if chains[c] < 0:
            raise NegativeWeight("a maximal cone has negative weight",
                                 witness={"chain": [list(g.subset(F)) for F in c],
                                          "weight": str(chains[c])})
    d = degree(X)
    if d != 1:
        raise NotDegreeOne(f"fan has degree {d}", witness=d)
    try:
        M = matroid_from_flats(g, X.rank.keys())
    except TropError as e:
        raise AxiomsFailDespitePositivity(
            f"vertices of a positive degree-one fan are not the flats of a matroid: {e}",
            witness=e.to_json()["error"]) from e
    if bergman_fan(M).chains() != chains:
        raise AxiomsFailDespitePositivity("fan differs from the Bergman fan of its vertex lattice")
    return M


def negative_chains(X: AnyFan) -> list[tuple[Chain, int]]:
    g = X.groundset
    ch = X.to_chain_fan().chains
    return sorted(((c, w) for c, w in ch.items() if w < 0),
                  key=lambda cw: [g.sort_key(F) for F in cw[0]])
