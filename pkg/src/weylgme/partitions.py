"""Bipartitions of ``n`` parties.

Parties are labelled ``1..n`` throughout the package, following the usual
notation ``l_1...l_{k-1} | l_k...l_n`` (e.g. ``14|23``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import InvalidIndexError, UnsupportedError

__all__ = ["Bipartition", "enumerate_bipartitions"]


@dataclass(frozen=True)
class Bipartition:
    """Split of parties ``1..n`` into ``left | right``.

    ``left`` holds at most ``n // 2`` parties.  The first entry of ``right``
    is the distinguished party used for the single-party block of the
    F-matrix.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(int(p) for p in self.left)
        right = tuple(int(p) for p in self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        if not left or not right:
            raise InvalidIndexError("both sides of a bipartition must be nonempty")
        parties = left + right
        n = len(parties)
        if sorted(parties) != list(range(1, n + 1)):
            raise InvalidIndexError(
                f"bipartition {left}|{right} must use each of the parties 1..{n} exactly once"
            )
        if len(left) > n // 2:
            raise InvalidIndexError(
                f"left part of {self} has {len(left)} parties; at most {n // 2} allowed"
            )

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def lead(self) -> int:
        """The distinguished right-hand party ``l_k``."""
        return self.right[0]

    @classmethod
    def from_left(cls, left: Iterable[int], n: int) -> "Bipartition":
        """Bipartition with the given left part and the ascending complement on the right."""
        left = tuple(left)
        right = tuple(p for p in range(1, n + 1) if p not in left)
        return cls(left, right)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Bipartition":
        """Parse ``"1|234"`` or ``"1,4|2,3"``.

        Without commas each character is one party label, so labels above 9
        need the comma form.  If ``n`` is given the party count must match.
        """
        if text.count("|") != 1:
            raise InvalidIndexError(f"bipartition {text!r} must contain exactly one '|'")
        sides = []
        for side in text.split("|"):
            side = side.strip()
            items = side.split(",") if "," in side else list(side)
            try:
                sides.append(tuple(int(x) for x in items if x.strip()))
            except ValueError:
                raise InvalidIndexError(f"malformed bipartition {text!r}") from None
        bp = cls(*sides)
        if n is not None and bp.n != n:
            raise InvalidIndexError(f"bipartition {text!r} has {bp.n} parties, expected {n}")
        return bp

    def __str__(self):
        sep = "," if self.n > 9 else ""
        return sep.join(map(str, self.left)) + "|" + sep.join(map(str, self.right))


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """Every bipartition entering the aggregate, in canonical order.

    For ``s = 1 .. n // 2`` and each ascending ``s``-subset of ``1..n`` (in
    lexicographic order) the subset is the left part and its ascending
    complement the right part.  Complementary splits such as ``12|34`` and
    ``34|12`` both appear.
    """
    if n < 3:
        raise UnsupportedError(f"the criteria need at least 3 parties, got n={n}")
    return [
        Bipartition.from_left(left, n)
        for s in range(1, n // 2 + 1)
        for left in combinations(range(1, n + 1), s)
    ]
