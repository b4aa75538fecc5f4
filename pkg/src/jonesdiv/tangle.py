"""n-tangles, orientation braids, closures, and bracket decomposition.

A tangle is a diagram in a disk with 2n boundary endpoints, labelled 1..2n
clockwise; closed components are allowed.  Closing a tangle by a 2-equal
matching attaches one external arc per pair, realising chord intersections
as virtual crossings.  The modified closure replaces each such virtual
crossing by a small gadget (one classical and one virtual crossing) that
reroutes the arcs so the result carries a consistent global orientation
whatever the matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagram import (BudgetError, Crossing, Endpoint, LinkDiagram,
                      OrientationError, ParseError, Stub, _canonical_relabel,
                      _parse_crossing_lines, _infer_directions, assemble,
                      diagram_stub_data)
from .laurent import LOOP, LaurentPoly
from .matchings import Matching, chord_arrangement

from .bracket import CROSSING_BUDGET


@dataclass(frozen=True)
class Tangle:
    n: int
    crossings: tuple[Crossing, ...]
    endpoints: tuple[Endpoint, ...]
    free_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        eps = tuple(sorted(self.endpoints, key=lambda ep: ep.index))
        object.__setattr__(self, "endpoints", eps)
        if self.free_loops < 0:
            raise ValueError("negative free loop count")
        if [ep.index for ep in eps] != list(range(1, 2 * self.n + 1)):
            raise ValueError(f"endpoints must cover 1..{2 * self.n} exactly once")
        from .diagram import _validate_edges
        _validate_edges(self.crossings, eps)

    # -- inspection ----------------------------------------------------------

    @property
    def classical_count(self) -> int:
        return sum(1 for c in self.crossings if c.kind == "X")

    @property
    def is_classical(self) -> bool:
        return all(c.kind == "X" for c in self.crossings)

    def endpoint(self, index: int) -> Endpoint:
        return self.endpoints[index - 1]

    def orientation_word(self) -> str:
        """Letter i is '+' exactly when endpoint i is outbound."""
        return "".join("+" if ep.out else "-" for ep in self.endpoints)

    def has_standard_orientation(self) -> bool:
        return self.orientation_word() == "+-" * self.n

    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings if c.kind == "X")

    # -- symmetries ----------------------------------------------------------

    def reversed_strands(self) -> "Tangle":
        """Reverse every strand, closed components included; signs unchanged."""
        from .diagram import _reverse_crossing
        crossings = tuple(_reverse_crossing(c) for c in self.crossings)
        eps = tuple(Endpoint(ep.index, ep.edge, not ep.out) for ep in self.endpoints)
        return Tangle(self.n, crossings, eps, self.free_loops)

    def mirror(self) -> "Tangle":
        from .diagram import _mirror_crossing
        return Tangle(self.n, tuple(_mirror_crossing(c) for c in self.crossings),
                      self.endpoints, self.free_loops)

    def relabelled_boundary(self, shift: int) -> "Tangle":
        """Add `shift` to every boundary index (mod 2n)."""
        two_n = 2 * self.n
        eps = tuple(Endpoint((ep.index - 1 + shift) % two_n + 1, ep.edge, ep.out)
                    for ep in self.endpoints)
        return Tangle(self.n, self.crossings, eps, self.free_loops)

    def __str__(self) -> str:
        return render_tangle(self)


# -- text format --------------------------------------------------------------

def parse_tangle(text: str) -> Tangle:
    raw, free_loops, eps, header_n = _parse_crossing_lines(text, allow_endpoints=True)
    if header_n is None:
        raise ParseError("tangle text needs a `TANGLE n` header")
    if sorted(idx for idx, _, _ in eps) != list(range(1, 2 * header_n + 1)):
        raise ParseError(f"endpoint indices must cover 1..{2 * header_n}")
    signed = _infer_directions(raw, eps)
    endpoints = tuple(Endpoint(idx, e, out) for idx, e, out in eps)
    return Tangle(header_n, signed, endpoints, free_loops)


def render_tangle(t: Tangle) -> str:
    relabel = _canonical_relabel(t.crossings, t.endpoints)
    lines = [f"TANGLE {t.n}"]
    for ep in t.endpoints:
        lines.append(f"E {ep.index} {relabel[ep.edge]} {'out' if ep.out else 'in'}")
    for c in t.crossings:
        lines.append(f"{c.kind} " + " ".join(str(relabel[e]) for e in c.slots))
    lines.extend("O" for _ in range(t.free_loops))
    return "\n".join(lines) + "\n"


# -- orientation braid ---------------------------------------------------------

def orientation_word_ok(word: str) -> None:
    if word.count("+") != word.count("-") or len(word) % 2:
        raise ValueError(f"orientation word {word!r} is not balanced")
    if set(word) - {"+", "-"}:
        raise ValueError(f"orientation word {word!r} has letters other than +/-")


def orientation_braid(word: str) -> tuple[int, ...]:
    """Braid generators turning a tangle of this orientation standard.

    Repeatedly: find the longest initial subword of the form (+-)^k or
    (+-)^k+; if it is proper, locate the first later position j holding the
    opposite letter and append sigma_{j-1} ... sigma_{s+1}, which drags that
    letter back to position s+1.  Generators are 1-based, leftmost applied
    first (nearest the tangle).
    """
    orientation_word_ok(word)
    letters = list(word)
    m = len(letters)
    gens: list[int] = []
    while True:
        s = 0
        while s < m and letters[s] == ("+" if s % 2 == 0 else "-"):
            s += 1
        if s == m:
            break
        target = letters[s]
        j = next(i for i in range(s + 1, m) if letters[i] != target)
        gens.extend(range(j, s, -1))
        seg = letters[s:j + 1]
        letters[s:j + 1] = [seg[-1]] + seg[:-1]
    return tuple(gens)


def apply_braid(t: Tangle, gens: Sequence[int]) -> Tangle:
    """Attach braid crossings outside the tangle boundary, leftmost first.

    Generator g > 0 crosses the strands at boundary positions g and g+1 with
    the strand from position g passing under the one from g+1 (read outward
    from the tangle); g < 0 gives the opposite crossing.
    """
    eps = {ep.index: ep for ep in t.endpoints}
    crossings = list(t.crossings)
    next_edge = max((e for c in t.crossings for e in c.slots),
                    default=0)
    next_edge = max(next_edge, max(ep.edge for ep in t.endpoints)) + 1
    for gen in gens:
        virtual = isinstance(gen, tuple)
        if virtual:
            gen = gen[1]
        g = abs(gen)
        if gen == 0 or not 1 <= g <= 2 * t.n - 1:
            raise ValueError(f"generator index {gen} out of range for {2 * t.n} strands")
        lo, hi = eps[g], eps[g + 1]
        f_lo, f_hi = next_edge, next_edge + 1
        next_edge += 2
        # local picture, tangle below: bottom-left = old g, bottom-right =
        # old g+1, top-left = new g, top-right = new g+1.  For gen > 0 the
        # under-strand runs along the bottom-left/top-right diagonal, for
        # gen < 0 along the bottom-right/top-left one.
        if virtual:
            if lo.out and hi.out:
                slots = (lo.edge, hi.edge, f_hi, f_lo)
            elif lo.out:
                slots = (f_lo, lo.edge, hi.edge, f_hi)
            elif hi.out:
                slots = (hi.edge, f_hi, f_lo, lo.edge)
            else:
                slots = (f_hi, f_lo, lo.edge, hi.edge)
            crossings.append(Crossing("V", slots, 0))
            eps[g] = Endpoint(g, f_lo, hi.out)
            eps[g + 1] = Endpoint(g + 1, f_hi, lo.out)
            continue
        if gen > 0:
            if lo.out:
                slots = (lo.edge, hi.edge, f_hi, f_lo)
                sign = -1 if hi.out else 1
            else:
                slots = (f_hi, f_lo, lo.edge, hi.edge)
                sign = 1 if hi.out else -1
        else:
            if hi.out:
                slots = (hi.edge, f_hi, f_lo, lo.edge)
                sign = 1 if lo.out else -1
            else:
                slots = (f_lo, lo.edge, hi.edge, f_hi)
                sign = -1 if lo.out else 1
        crossings.append(Crossing("X", slots, sign))
        eps[g] = Endpoint(g, f_lo, hi.out)
        eps[g + 1] = Endpoint(g + 1, f_hi, lo.out)
    return Tangle(t.n, tuple(crossings), tuple(eps.values()), t.free_loops)


def standardised(t: Tangle) -> Tangle:
    """Compose with the orientation braid so the result is standard."""
    if t.has_standard_orientation():
        return t
    return apply_braid(t, orientation_braid(t.orientation_word()))


# -- closures ------------------------------------------------------------------

def _external_structure(m: Matching, modified: bool):
    """Nodes and pairings of the closure arcs.

    Returns (nodes, pairings) where nodes is a list of
    (kind, preliminary cyclic stub 4-tuple) and pairings connect leg stubs,
    gadget-internal edges, and tangle terminal stubs ("t", "T", index).
    Strand continuation inside every node is slot ^ 2.
    """
    arr = chord_arrangement(m)
    nodes: list[tuple[str, tuple[Stub, ...]]] = []
    legs: list[dict[int, Stub]] = []
    for x, (pi, qi) in enumerate(arr.crossings):
        (i, j), (k, l) = m.pairs[pi], m.pairs[qi]
        # chords interleave with i < k < j < l
        if not i < k < j < l:
            raise AssertionError("chord pairs are not interleaved as expected")
        if not modified:
            stubs = (("x", x, "a1"), ("x", x, "a2"), ("x", x, "a3"), ("x", x, "a4"))
            nodes.append(("V", stubs))
            legs.append({i: stubs[0], k: stubs[1], j: stubs[2], l: stubs[3]})
        else:
            # classical crossing C near the a2/a3 side, virtual crossing V
            # toward a1/a4; the strand pairs become (a1, a2) and (a3, a4).
            c_stubs = (("x", x, "cd"), ("x", x, "L2"), ("x", x, "L3"), ("x", x, "cg"))
            v_stubs = (("x", x, "vg"), ("x", x, "L4"), ("x", x, "L1"), ("x", x, "vd"))
            nodes.append(("X", c_stubs))
            nodes.append(("V", v_stubs))
            legs.append({i: v_stubs[2], k: c_stubs[1], j: c_stubs[2], l: v_stubs[1]})

    pairings: list[tuple[Stub, Stub]] = []
    if modified:
        for x in range(len(arr.crossings)):
            pairings.append(((("x", x, "cd")), ("x", x, "vd")))
            pairings.append(((("x", x, "cg")), ("x", x, "vg")))

    for ci, (i, j) in enumerate(m.pairs):
        chain: list[Stub] = [("t", "T", i)]
        for x in arr.along_chord[ci]:
            chain.append(legs[x][i])
            chain.append(legs[x][j])
        chain.append(("t", "T", j))
        for a, b in zip(chain[::2], chain[1::2]):
            pairings.append((a, b))
    return nodes, pairings


def _orient_external(out_at: dict, nodes, pairings):
    """Trace the closure arcs from the tangle terminals; return io per stub.

    Raises OrientationError when a strand runs between two outbound or two
    inbound endpoints.
    """
    partner: dict[Stub, Stub] = {}
    for a, b in pairings:
        partner[a] = b
        partner[b] = a
    stub_node: dict[Stub, tuple[int, int]] = {}
    for ni, (_, stubs) in enumerate(nodes):
        for s, stub in enumerate(stubs):
            stub_node[stub] = (ni, s)

    io: dict[Stub, str] = {}

    visited: set[Stub] = set()
    for index, is_out in sorted(out_at.items()):
        start = ("t", "T", index)
        if start in visited:
            continue
        if not is_out:
            continue
        visited.add(start)
        cur = partner[start]
        while cur in stub_node:
            visited.add(cur)
            io[cur] = "in"
            ni, s = stub_node[cur]
            nxt = nodes[ni][1][s ^ 2]
            visited.add(nxt)
            io[nxt] = "out"
            cur = partner[nxt]
        visited.add(cur)
        end_index = cur[2]
        if out_at[end_index]:
            raise OrientationError(
                f"closure arc runs from endpoint {index} to endpoint {end_index}, both outbound")
    for index in out_at:
        if ("t", "T", index) not in visited:
            raise OrientationError(
                f"closure arc at endpoint {index} joins two inbound endpoints")
    # orient any closed arc cycles that touch no endpoint
    for stub in stub_node:
        if stub in io:
            continue
        cur = stub
        while cur not in io:
            io[cur] = "in"
            ni, s = stub_node[cur]
            nxt = nodes[ni][1][s ^ 2]
            io[nxt] = "out"
            cur = partner[nxt]
    return io


def _finalise_external(nodes, io):
    """Rotate node stub tuples into slot order and fix classical signs."""
    finalised = []
    for kind, stubs in nodes:
        ins = [s for s in range(4) if io[stubs[s]] == "in"]
        if kind == "V":
            e = next(s for s in ins if s % 2 == 0)
            o = next(s for s in ins if s % 2 == 1)
            r = e if (o - e) % 4 == 1 else o
            rotated = tuple(stubs[(r + s) % 4] for s in range(4))
            finalised.append((Crossing("V", (0, 0, 0, 0), 0), rotated))
        else:
            # under-strand occupies positions {0, 2} of the preliminary tuple
            a = next(s for s in (0, 2) if io[stubs[s]] == "in")
            rotated = tuple(stubs[(a + s) % 4] for s in range(4))
            over_in = next(s for s in range(4) if io[rotated[s]] == "in" and s != 0)
            sign = 1 if over_in == 3 else -1
            finalised.append((Crossing("X", (0, 0, 0, 0), sign), rotated))
    return finalised


def closure(t: Tangle, m: Matching, modified: bool = False) -> LinkDiagram:
    """Close the tangle by the matching; chord crossings become virtual.

    With `modified=True` every such virtual crossing is replaced by the
    orientation-respecting gadget; the tangle must then carry the standard
    orientation.
    """
    if m.n != t.n:
        raise ValueError(f"matching on {2 * m.n} points cannot close a {t.n}-tangle")
    if modified and not t.has_standard_orientation():
        raise OrientationError("modified closures require the standard orientation")
    if not modified:
        word = t.orientation_word()
        for i, j in m.pairs:
            if word[i - 1] == word[j - 1]:
                raise OrientationError(
                    f"arc ({i} {j}) joins two {'outbound' if word[i-1] == '+' else 'inbound'} endpoints")
    nodes, ext_pairings = _external_structure(m, modified)
    io = _orient_external({ep.index: ep.out for ep in t.endpoints}, nodes, ext_pairings)
    finalised = _finalise_external(nodes, io)

    kept_t, pairings, _ = diagram_stub_data("T", t.crossings, t.endpoints)
    kept = list(kept_t) + finalised
    crossings, loops, _ = assemble(kept, pairings + ext_pairings,
                                   extra_loops=t.free_loops)
    return LinkDiagram(crossings, loops)


def modified_closure(t: Tangle, m: Matching) -> LinkDiagram:
    return closure(t, m, modified=True)


def glue(t: Tangle, tp: Tangle) -> LinkDiagram:
    """The link obtained by identifying endpoint i of `t` with endpoint i of `tp`."""
    if t.n != tp.n:
        raise ValueError("tangles must have the same number of strands")
    wt, wp = t.orientation_word(), tp.orientation_word()
    for i in range(2 * t.n):
        if wt[i] == wp[i]:
            raise OrientationError(
                f"endpoint {i + 1}: both tangles are {'outbound' if wt[i] == '+' else 'inbound'}")
    kept_t, pair_t, _ = diagram_stub_data("T", t.crossings, t.endpoints)
    kept_p, pair_p, _ = diagram_stub_data("P", tp.crossings, tp.endpoints)
    joins = [(("t", "T", i), ("t", "P", i)) for i in range(1, 2 * t.n + 1)]
    crossings, loops, _ = assemble(list(kept_t) + list(kept_p),
                                   pair_t + pair_p + joins,
                                   extra_loops=t.free_loops + tp.free_loops)
    return LinkDiagram(crossings, loops)


# -- bracket decomposition ------------------------------------------------------

def bracket_decompose(tp: Tangle) -> dict[Matching, LaurentPoly]:
    """Coefficients q_m with < T u Tp > = sum_m q_m < T(m) > for every T.

    Every smoothing state of Tp reduces to a crossingless tangle realising
    some 2-equal matching of the boundary, times loop factors for the closed
    components created inside Tp.
    """
    classical = [c for c in tp.crossings if c.kind == "X"]
    cc = len(classical)
    if cc > CROSSING_BUDGET:
        raise BudgetError(f"{cc} classical crossings exceeds the budget of {CROSSING_BUDGET}")
    virtual = [c for c in tp.crossings if c.kind == "V"]

    index_of: dict[int, int] = {}
    for ep in tp.endpoints:
        index_of.setdefault(ep.edge, ep.index)
    # crossingless strands contribute a fixed boundary pair in every state
    from collections import Counter
    edge_occurrences = Counter(e for c in tp.crossings for e in c.slots)
    fixed_pairs = []
    seen = set()
    for ep in tp.endpoints:
        if ep.edge in seen or edge_occurrences[ep.edge]:
            continue
        seen.add(ep.edge)
        other = [q.index for q in tp.endpoints if q.edge == ep.edge and q.index != ep.index]
        fixed_pairs.append((ep.index, other[0]))

    from .bracket import _fuse, _loop_powers

    counts: dict[tuple[tuple[tuple[int, int], ...], int, int], int] = {}
    for mask in range(1 << cc):
        partner: dict[int, int] = {}
        loops = 0
        a_count = 0
        for i, c in enumerate(classical):
            s = c.slots
            if (mask >> i) & 1:
                pairs = ((s[0], s[3]), (s[1], s[2]))
            else:
                pairs = ((s[0], s[1]), (s[2], s[3]))
                a_count += 1
            for x, y in pairs:
                loops += _fuse(partner, x, y)
        for c in virtual:
            s = c.slots
            for x, y in ((s[0], s[2]), (s[1], s[3])):
                loops += _fuse(partner, x, y)
        pairs = list(fixed_pairs)
        for u, v in partner.items():
            if u < v:
                pairs.append((index_of[u], index_of[v]))
        key = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        full = (key, 2 * a_count - cc, loops)
        counts[full] = counts.get(full, 0) + 1

    top = max((loops for (_, _, loops) in counts), default=0) + tp.free_loops
    powers = _loop_powers(max(top, 1))
    out: dict[Matching, LaurentPoly] = {}
    for (key, apow, loops), cnt in sorted(counts.items()):
        m = Matching(key)
        term = powers[loops + tp.free_loops].scaled(cnt).shifted(apow)
        out[m] = out.get(m, LaurentPoly.zero()) + term
    return {m: p for m, p in out.items() if not p.is_zero}
