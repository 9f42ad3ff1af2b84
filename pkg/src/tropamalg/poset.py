"""Finite posets given by cover relations, and their Möbius functions."""

from __future__ import annotations

import threading
from typing import Callable, Hashable, Iterable, Sequence

from .errors import NotAPoset, NotComparable, NotGraded


class Poset:
    """A finite poset stored by its covers.

    The full order (``above[x]`` = all ``y >= x``) is derived once by a
    transitive closure over a topological order.
    """

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple]):
        self.elements = list(dict.fromkeys(elements))
        els = set(self.elements)
        self.up: dict = {x: set() for x in self.elements}
        self.down: dict = {x: set() for x in self.elements}
        for a, b in covers:
            if a not in els or b not in els:
                raise NotAPoset("cover between unknown elements", witness=[repr(a), repr(b)])
            if a == b:
                raise NotAPoset("self-cover", witness=repr(a))
            self.up[a].add(b)
            self.down[b].add(a)
        self.order = self._toposort()
        self.above: dict = {}
        for x in reversed(self.order):
            s = {x}
            for y in self.up[x]:
                s |= self.above[y]
            self.above[x] = frozenset(s)
        self._mu: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def from_relation(cls, elements: Sequence, leq: Callable[[object, object], bool]) -> "Poset":
        """Build from a partial order relation by transitive reduction."""
        elements = list(elements)
        strictly = {x: [y for y in elements if y != x and leq(x, y)] for x in elements}
        covers = []
        for x in elements:
            ups = strictly[x]
            for y in ups:
                if not any(z != y and leq(z, y) for z in ups):
                    covers.append((x, y))
        return cls(elements, covers)

    def _toposort(self) -> list:
        indeg = {x: len(self.down[x]) for x in self.elements}
        stack = [x for x in self.elements if indeg[x] == 0]
        out = []
        while stack:
            x = stack.pop()
            out.append(x)
            for y in self.up[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    stack.append(y)
        if len(out) != len(self.elements):
            raise NotAPoset("cover relation has a cycle")
        # stable order: keep the caller's order among incomparable elements
        pos = {x: i for i, x in enumerate(self.elements)}
        level = {}
        for x in out:
            level[x] = max((level[y] + 1 for y in self.down[x]), default=0)
        return sorted(out, key=lambda x: (level[x], pos[x]))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.up

    def leq(self, a, b) -> bool:
        return b in self.above[a]

    def minimal(self) -> list:
        return [x for x in self.order if not self.down[x]]

    def maximal(self) -> list:
        return [x for x in self.order if not self.up[x]]

    def bottom(self):
        m = self.minimal()
        return m[0] if len(m) == 1 else None

    def top(self):
        m = self.maximal()
        return m[0] if len(m) == 1 else None

    def meet(self, a, b):
        """Greatest lower bound, or ``None`` if there is none."""
        lows = [x for x in self.order if self.leq(x, a) and self.leq(x, b)]
        best = [x for x in lows if all(self.leq(y, x) for y in lows)]
        return best[0] if best else None

    def induced(self, subset: Iterable) -> "Poset":
        """Induced subposet (order restricted, covers recomputed)."""
        wanted = set(subset)
        keep = [x for x in self.order if x in wanted]
        return Poset.from_relation(keep, self.leq)

    def interval(self, a, b) -> "Poset":
        if not self.leq(a, b):
            raise NotComparable("interval endpoints are not comparable", witness=[repr(a), repr(b)])
        return self.induced(x for x in self.above[a] if self.leq(x, b))

    # -- Möbius --------------------------------------------------------
    def _mu_row(self, a) -> dict:
        row = self._mu.get(a)
        if row is not None:
            return row
        with self._lock:
            row = self._mu.get(a)
            if row is None:
                up = self.above[a]
                row = {}
                for b in self.order:
                    if b not in up:
                        continue
                    if b == a:
                        row[b] = 1
                    else:
                        row[b] = -sum(v for c, v in row.items() if self.leq(c, b))
                self._mu[a] = row
        return row

    def mobius(self, a, b) -> int:
        if not self.leq(a, b):
            raise NotComparable("Möbius function needs a <= b", witness=[repr(a), repr(b)])
        return self._mu_row(a)[b]

    def mobius_eta(self, x) -> int:
        """Sum of mu(x, b) over all b >= x."""
        return sum(self._mu_row(x).values())


class RankedPoset(Poset):
    """Poset of subsets (bitmasks) whose covers add exactly one to the rank.

    ``rank_of`` defaults to the distance from the minimal elements.
    """

    def __init__(self, elements, covers, rank_of: dict | None = None):
        super().__init__(elements, covers)
        for a in self.elements:
            for b in self.up[a]:
                if a & b != a:
                    raise NotAPoset("cover is not a set inclusion", witness=[a, b])
        if rank_of is None:
            rank_of = {}
            for x in self.order:
                rank_of[x] = max((rank_of[y] + 1 for y in self.down[x]), default=0)
        self.rank_of = dict(rank_of)
        for a in self.elements:
            for b in self.up[a]:
                if self.rank_of[b] != self.rank_of[a] + 1:
                    raise NotGraded("cover does not raise the rank by one", witness=[a, b])

    def interval(self, a, b) -> "RankedPoset":
        # covers inside an interval are covers of the whole poset
        base = Poset.interval(self, a, b)
        covers = [(x, y) for x in base.elements for y in base.up[x]]
        return RankedPoset(base.elements, covers, {x: self.rank_of[x] for x in base.elements})


def subset_poset(masks: Iterable[int]) -> Poset:
    """Poset of bitmasks ordered by inclusion."""
    masks = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    return Poset.from_relation(masks, lambda a, b: a & b == a)


def eta_of_bottom(bottom: int, members: Iterable[int]) -> int:
    """η(bottom) in the inclusion poset on ``members`` (which contains bottom).

    Direct O(n^2) recursion; agrees with ``subset_poset(members).mobius_eta``.
    """
    ms = sorted(set(members), key=lambda m: bin(m).count("1"))
    mu: dict[int, int] = {}
    for b in ms:
        if b & bottom != bottom:
            continue
        if b == bottom:
            mu[b] = 1
        else:
            mu[b] = -sum(v for c, v in mu.items() if c & b == c and c != b)
    return sum(mu.values())
