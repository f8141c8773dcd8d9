"""Finite partial order-isomorphisms of the rational line.

A finite partial map is stored as a tuple of (x, y) pairs sorted by x.  The
only maps of interest here are the strictly increasing injective ones --
finite partial automorphisms of the dense order -- and the module provides
validation, merging and inversion for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .ratcore import Rat, parse_rat


class MergeConflictError(ValueError):
    """Two partial maps disagree at a shared point, or their union is not
    order-preserving."""


@dataclass(frozen=True)
class FinitePartialMap:
    pairs: Tuple[Tuple[Rat, Rat], ...]

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple[Rat, Rat]]) -> "FinitePartialMap":
        seen = {}
        for x, y in pairs:
            if x in seen and seen[x] != y:
                raise MergeConflictError(f"conflicting images for {x}: {seen[x]} vs {y}")
            seen[x] = y
        ordered = tuple(sorted(seen.items()))
        return FinitePartialMap(ordered)

    def is_partial_automorphism(self) -> bool:
        """Strictly increasing (hence injective) on its domain."""
        ys = [y for _, y in self.pairs]  # pairs already sorted by x
        return all(a < b for a, b in zip(ys, ys[1:]))

    def domain(self):
        return tuple(x for x, _ in self.pairs)

    def image(self):
        return tuple(sorted(y for _, y in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def apply(self, x: Rat) -> Optional[Rat]:
        for a, b in self.pairs:
            if a == x:
                return b
        return None

    def inverse(self) -> "FinitePartialMap":
        if not self.is_partial_automorphism():
            raise ValueError("only partial automorphisms invert cleanly")
        return FinitePartialMap.from_pairs((y, x) for x, y in self.pairs)

    def merge(self, other: "FinitePartialMap") -> "FinitePartialMap":
        """Union of the graphs; raises MergeConflictError if the union is not
        a partial automorphism, naming a violating point."""
        merged = FinitePartialMap.from_pairs(self.pairs + other.pairs)
        pairs = merged.pairs
        for (x1, y1), (x2, y2) in zip(pairs, pairs[1:]):
            if y1 >= y2:
                raise MergeConflictError(
                    f"order violated at {x1} -> {y1} vs {x2} -> {y2}")
        return merged

    def __str__(self):
        return ", ".join(f"{x} -> {y}" for x, y in self.pairs)

    @staticmethod
    def parse(text: str) -> "FinitePartialMap":
        s = text.strip()
        if not s:
            return FinitePartialMap(())
        pairs = []
        for chunk in s.split(","):
            left, arrow, right = chunk.partition("->")
            if not arrow:
                raise ValueError(f"bad pair: {chunk!r}")
            pairs.append((parse_rat(left), parse_rat(right)))
        return FinitePartialMap.from_pairs(pairs)


EMPTY_MAP = FinitePartialMap(())
