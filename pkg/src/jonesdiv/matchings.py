"""2-equal matchings on 2n circle points: enumeration, crossings, rotation.

Points are labelled 1..2n clockwise around the circle.  A matching is a
perfect pairing of the labels; the noncrossing ones are counted by the
Catalan numbers.  Chord intersection data is computed purely combinatorially
(a chord pair crosses iff the pairs interleave cyclically), with a
deterministic ordering rule standing in for generic-position geometry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

MAX_STRANDS = 8


@dataclass(frozen=True)
class Matching:
    """A 2-equal partition of {1, .., 2n} into n unordered pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        labels = sorted(x for p in self.pairs for x in p)
        n = len(self.pairs)
        if n < 1:
            raise ValueError("matching needs at least one pair")
        if labels != list(range(1, 2 * n + 1)):
            raise ValueError(f"pairs do not partition 1..{2 * n}: {self.pairs}")
        norm = tuple(sorted((min(a, b), max(a, b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", norm)

    @property
    def n(self) -> int:
        return len(self.pairs)

    def partner(self, label: int) -> int:
        for a, b in self.pairs:
            if a == label:
                return b
            if b == label:
                return a
        raise KeyError(label)

    def __str__(self) -> str:
        return format_matching(self)


def matching(*pairs: tuple[int, int]) -> Matching:
    return Matching(tuple(pairs))


def _interleaves(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """True iff exactly one endpoint of q lies strictly inside the arc of p."""
    a, b = p
    return (a < q[0] < b) != (a < q[1] < b)


def is_noncrossing(m: Matching) -> bool:
    ps = m.pairs
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if _interleaves(ps[i], ps[j]):
                return False
    return True


def _enumerate(labels: tuple[int, ...], noncrossing_only: bool) -> Iterator[tuple[tuple[int, int], ...]]:
    if not labels:
        yield ()
        return
    first = labels[0]
    for i in range(1, len(labels)):
        # For noncrossing matchings the chord from `first` must leave an even
        # number of points on each side.
        if noncrossing_only and i % 2 == 0:
            continue
        partner = labels[i]
        inside = labels[1:i]
        outside = labels[i + 1:]
        if noncrossing_only:
            for rest_in in _enumerate(inside, True):
                for rest_out in _enumerate(outside, True):
                    yield ((first, partner),) + rest_in + rest_out
        else:
            for rest in _enumerate(inside + outside, False):
                yield ((first, partner),) + rest


def enumerate_matchings(n: int, noncrossing_only: bool = False) -> list[Matching]:
    """All matchings of 2n points, lexicographic by pair list.

    Full count is (2n-1)!!, noncrossing count is the nth Catalan number.
    """
    if not 1 <= n <= MAX_STRANDS:
        raise ValueError(f"n must be between 1 and {MAX_STRANDS}, got {n}")
    labels = tuple(range(1, 2 * n + 1))
    return [Matching(ps) for ps in _enumerate(labels, noncrossing_only)]


def rotate_matching(m: Matching, k: int) -> Matching:
    """Counterclockwise rotation by k steps.

    Labels increase clockwise, so rotating the picture counterclockwise by
    k*pi/n sends the chord endpoint at label i to label i - k (mod 2n).
    """
    two_n = 2 * m.n
    shift = lambda i: (i - 1 - k) % two_n + 1
    return Matching(tuple((shift(a), shift(b)) for a, b in m.pairs))


@dataclass(frozen=True)
class ChordArrangement:
    """Intersection pattern of a matching's chords.

    ``crossings`` lists each intersecting chord pair once (indices into
    ``m.pairs``, lexicographic).  ``along_chord[i]`` gives the crossing ids
    in traversal order along chord i from its smaller endpoint, ordered by
    the position of the other chord's interior endpoint; this is the
    combinatorial stand-in for drawing the chords generically.
    """

    matching: Matching
    crossings: tuple[tuple[int, int], ...]
    along_chord: tuple[tuple[int, ...], ...]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)


def chord_arrangement(m: Matching) -> ChordArrangement:
    ps = m.pairs
    crossings = []
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if _interleaves(ps[i], ps[j]):
                crossings.append((i, j))
    crossings_t = tuple(crossings)

    def inner_endpoint(chord: tuple[int, int], other: tuple[int, int]) -> int:
        a, b = chord
        return other[0] if a < other[0] < b else other[1]

    along = []
    for i, chord in enumerate(ps):
        mine = [cid for cid, (x, y) in enumerate(crossings_t) if i in (x, y)]
        mine.sort(key=lambda cid: inner_endpoint(
            chord, ps[crossings_t[cid][0] if crossings_t[cid][1] == i else crossings_t[cid][1]]))
        along.append(tuple(mine))
    return ChordArrangement(m, crossings_t, tuple(along))


# -- text form -------------------------------------------------------------

_PAIR_RE = re.compile(r"\(\s*(\d+)[\s,]+(\d+)\s*\)")


def format_matching(m: Matching) -> str:
    return "".join(f"({a} {b})" for a, b in m.pairs)


def parse_matching(text: str) -> Matching:
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(text)]
    leftover = _PAIR_RE.sub("", text).strip()
    if leftover or not pairs:
        raise ValueError(f"cannot parse matching text {text!r}")
    return Matching(tuple(pairs))


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n: int) -> int:
    out = 1
    for i in range(n):
        out = out * 2 * (2 * i + 1) // (i + 2)
    return out
