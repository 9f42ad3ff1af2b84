"""Labelled groundsets and subsets encoded as integer bitmasks.

A subset of a groundset with ``n`` elements is a plain ``int`` whose bit
``i`` is set iff ``labels[i]`` belongs to it.  Labels are strings, kept in a
canonical natural order so that serialisation is deterministic.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

from .errors import LabelClash, UnknownLabel

TAG_SEP = "@"

_DIGITS = re.compile(r"(\d+)")


def natural_key(label: str):
    """Sort key that orders embedded integers numerically ("2" < "10")."""
    parts = _DIGITS.split(label)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def tag(label: str, side: str) -> str:
    return f"{label}{TAG_SEP}{side}"


def untag(label: str) -> str:
    return label.rsplit(TAG_SEP, 1)[0] if TAG_SEP in label else label


def side_of(label: str) -> str | None:
    return label.rsplit(TAG_SEP, 1)[1] if TAG_SEP in label else None


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class GroundSet:
    """An ordered set of distinct string labels."""

    __slots__ = ("labels", "index", "full", "_hash")

    def __init__(self, labels: Iterable[str]):
        labels = [str(x) for x in labels]
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1}, key=natural_key)
            raise LabelClash(f"duplicate labels {dup}", witness=dup)
        self.labels: tuple[str, ...] = tuple(sorted(labels, key=natural_key))
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.labels)}
        self.full: int = (1 << len(self.labels)) - 1
        self._hash = hash(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)})"

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            try:
                m |= 1 << self.index[str(x)]
            except KeyError:
                raise UnknownLabel(f"label {x!r} not in groundset", witness=str(x)) from None
        return m

    def subset(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in bits(mask))

    def sub(self, mask: int) -> "GroundSet":
        """The groundset formed by the elements of ``mask``."""
        return GroundSet(self.subset(mask))

    def sort_key(self, mask: int) -> tuple[int, ...]:
        """Lexicographic key on the sorted element positions."""
        return tuple(bits(mask))

    def tagged(self, side: str) -> "GroundSet":
        return GroundSet(tag(x, side) for x in self.labels)


class MaskMap:
    """Transport subsets from one groundset to another along a label map.

    ``rename`` maps source labels to target labels; labels missing from it
    map to themselves.  Source elements whose image is not in the target are
    dropped, which makes this double as a coordinate projection.
    """

    __slots__ = ("table",)

    def __init__(self, src: GroundSet, dst: GroundSet, rename: dict[str, str] | None = None):
        rename = rename or {}
        table = []
        for x in src.labels:
            y = rename.get(x, x)
            table.append(1 << dst.index[y] if y in dst.index else 0)
        self.table = table

    def __call__(self, mask: int) -> int:
        out = 0
        table = self.table
        while mask:
            low = mask & -mask
            out |= table[low.bit_length() - 1]
            mask ^= low
        return out


def disjoint_union(parts: Sequence[GroundSet], tags: Sequence[str] | None = None):
    """Union of groundsets, optionally tagging each part's labels.

    Returns the combined groundset and one :class:`MaskMap` per part.
    Raises :class:`LabelClash` if the (tagged) labels are not disjoint.
    """
    if tags is not None:
        renames = [{x: tag(x, t) for x in g.labels} for g, t in zip(parts, tags)]
    else:
        renames = [{} for _ in parts]
    all_labels: list[str] = []
    for g, ren in zip(parts, renames):
        all_labels.extend(ren.get(x, x) for x in g.labels)
    if len(set(all_labels)) != len(all_labels):
        seen, clash = set(), set()
        for x in all_labels:
            (clash if x in seen else seen).add(x)
        raise LabelClash(f"groundsets share labels {sorted(clash, key=natural_key)}",
                         witness=sorted(clash, key=natural_key))
    union = GroundSet(all_labels)
    maps = [MaskMap(g, union, ren) for g, ren in zip(parts, renames)]
    return union, maps
