"""Matroids given by their complete lattice of flats.

Everything is lattice-native: a :class:`Matroid` stores its flats as
bitmasks together with precomputed covers and ranks, and all
constructions (restriction, contraction, sums, truncation, ...) produce new
flat lists that are re-validated from scratch.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    CoveringAxiomViolated,
    LabelClash,
    MissingTop,
    NotAFlat,
    NotIntersectionClosed,
    NotLoopless,
    NotParallel,
    RankZero,
)
from .groundset import GroundSet, MaskMap, bits, disjoint_union, natural_key, popcount


class Matroid:
    """A loopless matroid on a labelled groundset, stored by its flats.

    Use :func:`matroid_from_flats` (or the other constructors below) rather
    than calling the class directly; both validate the axioms.
    """

    __slots__ = ("groundset", "flats", "rank_of", "covers", "rank", "_by_size", "_closure")

    def __init__(self, groundset: GroundSet, flats: Iterable[int]):
        flats = frozenset(flats)
        self.groundset = groundset
        self.flats: frozenset[int] = flats
        self.covers: dict[int, tuple[int, ...]] = {}
        self.rank_of: dict[int, int] = {}
        self._by_size = sorted(flats, key=lambda f: (popcount(f), f))
        self._closure: dict[int, int] = {}
        _validate(self)
        self.rank = self.rank_of[groundset.full]

    # -- basic queries -------------------------------------------------
    @property
    def E(self) -> int:
        return self.groundset.full

    def __len__(self) -> int:
        return len(self.groundset)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matroid) and self.groundset == other.groundset
                and self.flats == other.flats)

    def __hash__(self) -> int:
        return hash((self.groundset, self.flats))

    def __repr__(self) -> str:
        return f"<Matroid rank {self.rank} on {list(self.groundset.labels)}, {len(self.flats)} flats>"

    def is_flat(self, X: int) -> bool:
        return X in self.flats

    def closure(self, X: int) -> int:
        """Smallest flat containing ``X``."""
        try:
            return self._closure[X]
        except KeyError:
            pass
        for F in self._by_size:
            if F & X == X:
                self._closure[X] = F
                return F
        raise ValueError("subset not contained in the groundset")

    def rk(self, X: int) -> int:
        return self.rank_of[self.closure(X)]

    def join(self, F1: int, F2: int) -> int:
        self._require_flat(F1, F2)
        return self.closure(F1 | F2)

    def meet(self, F1: int, F2: int) -> int:
        self._require_flat(F1, F2)
        return F1 & F2

    def flats_of_rank(self, k: int) -> list[int]:
        return [F for F in self._by_size if self.rank_of[F] == k]

    def hyperplanes(self) -> list[int]:
        return self.flats_of_rank(self.rank - 1)

    def atoms(self) -> tuple[int, ...]:
        return self.covers[0]

    def is_simple(self) -> bool:
        return all(popcount(a) == 1 for a in self.atoms())

    def leq(self, F1: int, F2: int) -> bool:
        return F1 & F2 == F1

    def sorted_flats(self) -> list[int]:
        g = self.groundset
        return sorted(self.flats, key=g.sort_key)

    def rank_table(self) -> list[int]:
        """``rk`` of every subset, indexed by bitmask."""
        return [self.rk(X) for X in range(1 << len(self.groundset))]

    def mask(self, labels: Iterable[str]) -> int:
        return self.groundset.mask(labels)

    def labels(self, mask: int) -> tuple[str, ...]:
        return self.groundset.subset(mask)

    def _require_flat(self, *Fs: int) -> None:
        for F in Fs:
            if F not in self.flats:
                raise NotAFlat(f"{list(self.labels(F))} is not a flat", witness=list(self.labels(F)))


def _validate(M: Matroid) -> None:
    g = M.groundset
    E = g.full
    flats = M.flats
    if not flats:
        raise MissingTop("empty flat list", witness=None)
    for F in flats:
        if F & ~E:
            raise ValueError("flat not contained in the groundset")
    if E not in flats:
        raise MissingTop("the groundset is not a flat", witness=list(g.labels))
    if 0 not in flats:
        raise NotLoopless("the empty set is not a flat", witness=[])
    fl = M._by_size
    for i, A in enumerate(fl):
        for B in fl[i + 1:]:
            if (A & B) not in flats:
                raise NotIntersectionClosed(
                    f"{list(g.subset(A))} and {list(g.subset(B))} meet in a non-flat",
                    witness=[list(g.subset(A)), list(g.subset(B))])
    covers = M.covers
    for F in fl:
        above = [G for G in fl if G != F and G & F == F]
        cls = set()
        for x in bits(E & ~F):
            c = E
            xb = 1 << x
            for G in above:
                if G & xb:
                    c &= G
            cls.add(c)
        cov = sorted((c for c in cls if not any(d != c and d & c == d for d in cls)),
                     key=g.sort_key)
        hit = {}
        for C in cov:
            for x in bits(C & ~F):
                hit[x] = hit.get(x, 0) + 1
        for x in bits(E & ~F):
            if hit.get(x, 0) != 1:
                raise CoveringAxiomViolated(
                    f"element {g.labels[x]!r} lies in {hit.get(x, 0)} cover differences above "
                    f"{list(g.subset(F))}",
                    witness={"flat": list(g.subset(F)), "element": g.labels[x],
                             "count": hit.get(x, 0)})
        covers[F] = tuple(cov)
    rank_of = M.rank_of
    rank_of[0] = 0
    for F in fl:
        r = rank_of[F]
        for G in covers[F]:
            if rank_of.setdefault(G, r + 1) != r + 1:
                raise CoveringAxiomViolated(
                    "maximal chains of different lengths", witness=list(g.subset(G)))


# -- constructors --------------------------------------------------------

def matroid_from_flats(groundset: GroundSet | Sequence[str], flats: Iterable) -> Matroid:
    """Validate a flat list and build the matroid.

    ``flats`` may contain bitmasks or iterables of labels.
    """
    if not isinstance(groundset, GroundSet):
        groundset = GroundSet(groundset)
    masks = set()
    for F in flats:
        masks.add(F if isinstance(F, int) else groundset.mask(F))
    return Matroid(groundset, masks)


def from_rank_function(groundset: GroundSet, rk: Callable[[int], int]) -> Matroid:
    """Matroid whose flats are the closed sets of a rank function."""
    E = groundset.full
    n = len(groundset)
    flats = []
    for X in range(1 << n):
        r = rk(X)
        if all(rk(X | (1 << x)) > r for x in bits(E & ~X)):
            flats.append(X)
    return Matroid(groundset, flats)


def uniform(r: int, labels: int | Sequence[str]) -> Matroid:
    """U_{r,n}; ``labels`` is either n (labels "1".."n") or explicit labels."""
    if isinstance(labels, int):
        labels = [str(i) for i in range(1, labels + 1)]
    g = GroundSet(labels)
    n = len(g)
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    flats = [sum(1 << i for i in c) for k in range(r) for c in combinations(range(n), k)]
    flats.append(g.full)
    return Matroid(g, set(flats))


def graphic(edges: Mapping[str, tuple]) -> Matroid:
    """Cycle matroid of a graph given as ``{edge label: (u, v)}``; no loops."""
    g = GroundSet(edges)
    ends = [edges[x] for x in g.labels]
    if any(u == v for u, v in ends):
        raise NotLoopless("graph has a loop edge", witness=[x for x in g.labels if edges[x][0] == edges[x][1]])

    def rk(X: int) -> int:
        parent: dict = {}

        def find(a):
            while parent.get(a, a) != a:
                a = parent[a]
            return a

        r = 0
        for i in bits(X):
            u, v = find(ends[i][0]), find(ends[i][1])
            if u != v:
                parent[u] = v
                r += 1
        return r

    return from_rank_function(g, rk)


def relabel(M: Matroid, mapping: Mapping[str, str]) -> Matroid:
    """Rename elements; labels absent from ``mapping`` keep their name."""
    new = [mapping.get(x, x) for x in M.groundset.labels]
    g = GroundSet(new)  # raises LabelClash on collisions
    mm = MaskMap(M.groundset, g, dict(mapping))
    return Matroid(g, {mm(F) for F in M.flats})


def restriction(M: Matroid, T: int) -> Matroid:
    """M|_T: flats are the traces F ∩ T."""
    sub = M.groundset.sub(T)
    mm = MaskMap(M.groundset, sub)
    return Matroid(sub, {mm(F & T) for F in M.flats})


def contraction(M: Matroid, F: int) -> Matroid:
    """M/F on E \\ F; contracting E gives the rank-0 matroid on no elements."""
    M._require_flat(F)
    rest = M.E & ~F
    sub = M.groundset.sub(rest)
    mm = MaskMap(M.groundset, sub)
    return Matroid(sub, {mm(G & rest) for G in M.flats if G & F == F})


def direct_sum(M1: Matroid, M2: Matroid, tags: tuple[str, str] | None = None) -> Matroid:
    """M1 ⊕ M2; pass ``tags`` (e.g. ``("L", "R")``) to disjoin clashing labels."""
    union, (m1, m2) = disjoint_union([M1.groundset, M2.groundset], tags)
    flats = {m1(F1) | m2(F2) for F1 in M1.flats for F2 in M2.flats}
    return Matroid(union, flats)


def truncation(M: Matroid) -> Matroid:
    """Tr(M): drop the hyperplanes.  Refuses to go below rank 1."""
    if M.rank <= 1:
        raise RankZero(f"truncating a rank-{M.rank} matroid leaves no loopless matroid",
                       witness=M.rank)
    return Matroid(M.groundset, {F for F in M.flats if M.rank_of[F] != M.rank - 1})


def simplify(M: Matroid) -> tuple[Matroid, dict[str, str]]:
    """Keep one representative (the first label) of every rank-1 flat.

    Returns the simple matroid and the map element -> representative.
    """
    g = M.groundset
    reps = 0
    emap = {}
    for A in M.atoms():
        r = A & -A
        reps |= r
        rep = g.labels[r.bit_length() - 1]
        for i in bits(A):
            emap[g.labels[i]] = rep
    return restriction(M, reps), emap


def fuse_parallel(M: Matroid, pairs: Iterable[Sequence[str]],
                  rename: Mapping[str, str] | None = None) -> Matroid:
    """Identify each parallel pair ``(a, b)`` by deleting ``b``; then relabel.

    ``rename`` is applied to the surviving labels afterwards.
    """
    g = M.groundset
    drop = 0
    for a, b in pairs:
        ab = g.mask([a, b])
        if M.rk(ab) != 1:
            raise NotParallel(f"{a!r} and {b!r} are not parallel", witness=[a, b])
        drop |= g.mask([b])
    out = restriction(M, M.E & ~drop)
    return relabel(out, rename) if rename else out


# -- modularity ----------------------------------------------------------

def is_modular_pair(M: Matroid, F1: int, F2: int) -> bool:
    M._require_flat(F1, F2)
    return M.rank_of[F1] + M.rank_of[F2] == M.rk(F1 | F2) + M.rank_of[F1 & F2]


def is_modular_flat(M: Matroid, F: int) -> bool:
    M._require_flat(F)
    return all(is_modular_pair(M, F, G) for G in M.flats)


def is_modular_cut(M: Matroid, cut: Iterable[int]) -> bool:
    cut = set(cut)
    M._require_flat(*cut)
    if M.E not in cut:
        return False
    for F in cut:
        if any(G not in cut for G in M.covers[F]):
            return False
    cl = sorted(cut)
    for i, A in enumerate(cl):
        for B in cl[i + 1:]:
            if (A & B) not in cut and is_modular_pair(M, A, B):
                return False
    return True


def modular_cuts(M: Matroid, min_rank: int = 2) -> Iterator[frozenset[int]]:
    """Enumerate all nonempty modular cuts whose flats have rank >= ``min_rank``.

    Breadth-first over cuts: from a cut C, add any flat whose covers all lie
    in C and close under supersets and meets of modular pairs.  Every cut is
    reached this way (add its missing flats in decreasing rank).
    """
    fl = sorted(M.flats, key=lambda F: (-M.rank_of[F], M.groundset.sort_key(F)))
    idx = {F: i for i, F in enumerate(fl)}
    rank = [M.rank_of[F] for F in fl]
    sup = [sum(1 << idx[G] for G in fl if G & F == F) for F in fl]
    cov = [sum(1 << idx[G] for G in M.covers[F]) for F in fl]
    mod: list[list[tuple[int, int]]] = [[] for _ in fl]
    for i, A in enumerate(fl):
        for j in range(i + 1, len(fl)):
            B = fl[j]
            m = A & B
            if m == A or m == B:
                continue
            if rank[i] + rank[j] == M.rk(A | B) + M.rank_of[m]:
                mod[i].append((j, idx[m]))
                mod[j].append((i, idx[m]))

    def close(cut: int, i: int) -> int | None:
        cut |= 1 << i
        work = [i]
        while work:
            x = work.pop()
            for j, m in mod[x]:
                if cut >> j & 1 and not cut >> m & 1:
                    if rank[m] < min_rank:
                        return None
                    new = sup[m] & ~cut
                    cut |= new
                    work.extend(k for k in range(len(fl)) if new >> k & 1)
        return cut

    if M.rank < min_rank:
        return
    start = 1 << idx[M.E]
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for cut in frontier:
            for i in range(len(fl)):
                if cut >> i & 1 or rank[i] < min_rank or cov[i] & ~cut:
                    continue
                c = close(cut, i)
                if c is not None and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    for cut in sorted(seen, key=lambda c: (bin(c).count("1"), c)):
        yield frozenset(fl[i] for i in range(len(fl)) if cut >> i & 1)


def one_element_extension(M: Matroid, cut: Iterable[int], new_label: str = "e") -> Matroid:
    """The extension of M by ``new_label`` determined by a modular cut.

    Flats: F not in the cut; F + e for F in the cut; F + e for F not in the
    cut with no cover in the cut.  Validation rejects non-modular cuts.
    """
    cut = set(cut)
    g = GroundSet(list(M.groundset.labels) + [new_label])
    mm = MaskMap(M.groundset, g)
    e = g.mask([new_label])
    flats = set()
    for F in M.flats:
        if F in cut:
            flats.add(mm(F) | e)
        else:
            flats.add(mm(F))
            if not any(G in cut for G in M.covers[F]):
                flats.add(mm(F) | e)
    return Matroid(g, flats)


def label_sort(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=natural_key)
