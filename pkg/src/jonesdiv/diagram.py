"""Combinatorial oriented link diagrams with classical and virtual crossings.

A diagram is a list of 4-valent crossings whose slots hold edge labels, plus
a count of crossingless loops.  Classical crossings follow the planar-diagram
convention: slots (a, b, c, d) are listed counterclockwise starting from the
incoming under-edge, the under-strand runs a -> c, and the crossing sign is
+1 exactly when the over-strand runs d -> b.  Virtual crossings carry no
over/under data; both strands pass straight through (a -> c and b -> d) and
they are never smoothed.

No planar embedding is stored or verified; all operations are label-level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Malformed diagram or tangle text."""


class OrientationError(ValueError):
    """Edge directions cannot be made globally consistent."""


class BudgetError(ValueError):
    """Classical crossing count exceeds the supported bound."""


@dataclass(frozen=True)
class Crossing:
    """One 4-valent vertex of a diagram.

    kind "X": classical; sign +1 (over runs slot3 -> slot1), -1 (slot1 ->
    slot3), or 0 when the diagram is carried without orientation data.
    kind "V": virtual; strands run slot0 -> slot2 and slot1 -> slot3.
    """

    kind: str
    slots: tuple[int, int, int, int]
    sign: int = 0

    def __post_init__(self):
        if self.kind not in ("X", "V"):
            raise ValueError(f"unknown crossing kind {self.kind!r}")
        if self.kind == "V" and self.sign != 0:
            raise ValueError("virtual crossings carry no sign")
        if self.kind == "X" and self.sign not in (-1, 0, 1):
            raise ValueError(f"bad crossing sign {self.sign}")

    @property
    def is_classical(self) -> bool:
        return self.kind == "X"

    def in_slots(self) -> tuple[int, ...]:
        """Slot positions whose edges point into this crossing."""
        if self.kind == "V":
            return (0, 1)
        if self.sign == 1:
            return (0, 3)
        if self.sign == -1:
            return (0, 1)
        raise OrientationError("crossing carries no orientation data")

    def continuation(self, slot: int) -> int:
        """The slot where the strand entering at `slot` leaves (ignores direction)."""
        if self.kind == "V":
            return slot ^ 2
        # under-strand occupies slots 0 and 2, over-strand 1 and 3
        return slot ^ 2


def smoothing_pairs(c: Crossing, which: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """Slot pairs joined by an A- or B-smoothing of a classical crossing."""
    if c.kind != "X":
        raise ValueError("only classical crossings are smoothed")
    if which == "A":
        return (0, 1), (2, 3)
    if which == "B":
        return (0, 3), (1, 2)
    raise ValueError(f"smoothing must be 'A' or 'B', got {which!r}")


@dataclass(frozen=True)
class Endpoint:
    """A tangle boundary point: index on the circle, its edge, and direction."""

    index: int
    edge: int
    out: bool  # True when the strand leaves the tangle here


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...] = ()
    free_loops: int = 0
    oriented: bool = True

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if self.free_loops < 0:
            raise ValueError("negative free loop count")
        if self.oriented:
            _validate_edges(self.crossings, ())

    # -- basic invariants ----------------------------------------------------

    @property
    def classical_count(self) -> int:
        return sum(1 for c in self.crossings if c.kind == "X")

    def edge_labels(self) -> list[int]:
        return sorted({e for c in self.crossings for e in c.slots})

    def is_empty(self) -> bool:
        return not self.crossings and self.free_loops == 0

    def components(self) -> int:
        """Number of closed strands, counting free loops."""
        return _count_strand_cycles(self.crossings) + self.free_loops

    def writhe(self) -> int:
        """Sum of classical crossing signs; virtual crossings contribute 0."""
        w = 0
        for c in self.crossings:
            if c.kind == "X":
                if c.sign == 0:
                    raise OrientationError("writhe of an unoriented diagram")
                w += c.sign
        return w

    def mirror(self) -> "LinkDiagram":
        """Swap over and under at every classical crossing."""
        return LinkDiagram(tuple(_mirror_crossing(c) for c in self.crossings),
                           self.free_loops, self.oriented)

    def reversed_strands(self) -> "LinkDiagram":
        """Reverse the direction of every strand (signs are unchanged)."""
        return LinkDiagram(tuple(_reverse_crossing(c) for c in self.crossings),
                           self.free_loops, self.oriented)

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        shift = max(self.edge_labels(), default=0)
        moved = tuple(Crossing(c.kind, tuple(e + shift for e in c.slots), c.sign)
                      for c in other.crossings)
        return LinkDiagram(self.crossings + moved,
                           self.free_loops + other.free_loops,
                           self.oriented and other.oriented)

    def __str__(self) -> str:
        return render_link(self)


def _mirror_crossing(c: Crossing) -> Crossing:
    if c.kind != "X":
        return c
    a, b, cc, d = c.slots
    if c.sign == 1:
        return Crossing("X", (d, a, b, cc), -1)
    if c.sign == -1:
        return Crossing("X", (b, cc, d, a), 1)
    # unoriented: any rotation by one keeps the cyclic order; pick (d, a, b, c)
    return Crossing("X", (d, a, b, cc), 0)


def _reverse_crossing(c: Crossing) -> Crossing:
    a, b, cc, d = c.slots
    return Crossing(c.kind, (cc, d, a, b), c.sign)


# -- edge/direction validation ----------------------------------------------

def _validate_edges(crossings: Sequence[Crossing], endpoints: Sequence[Endpoint]):
    """Every edge must appear exactly twice, once as a head and once as a tail."""
    heads: dict[int, int] = {}
    tails: dict[int, int] = {}

    def head(e):
        heads[e] = heads.get(e, 0) + 1

    def tail(e):
        tails[e] = tails.get(e, 0) + 1

    for c in crossings:
        ins = c.in_slots()
        for s in range(4):
            (head if s in ins else tail)(c.slots[s])
    for ep in endpoints:
        (head if ep.out else tail)(ep.edge)

    edges = set(heads) | set(tails)
    for e in edges:
        if heads.get(e, 0) != 1 or tails.get(e, 0) != 1:
            raise OrientationError(
                f"edge {e} has {heads.get(e, 0)} heads and {tails.get(e, 0)} tails")


def _occurrence_partners(crossings: Sequence[Crossing],
                         terminal_edges: Sequence[tuple[int, object]] = ()):
    """Pair up the two ends of every edge.

    Ends are slot occurrences (i, s) and terminal tokens; an edge may have
    both ends at the same crossing (a kink), which the pairing handles fine.
    """
    ends: dict[int, list] = {}
    for i, c in enumerate(crossings):
        for s, e in enumerate(c.slots):
            ends.setdefault(e, []).append((i, s))
    for e, token in terminal_edges:
        ends.setdefault(e, []).append(token)
    partner = {}
    for e, places in ends.items():
        if len(places) != 2:
            raise OrientationError(f"edge {e} has {len(places)} ends, expected 2")
        p, q = places
        partner[p] = q
        partner[q] = p
    return partner


def _count_strand_cycles(crossings: Sequence[Crossing]) -> int:
    """Number of closed strands (direction-free tracing through every crossing)."""
    partner = _occurrence_partners(crossings)
    visited: set[tuple[int, int]] = set()
    count = 0
    for i, c in enumerate(crossings):
        for s in range(4):
            start = (i, s)
            if start in visited:
                continue
            count += 1
            cur = start
            while True:
                visited.add(cur)
                hop = (cur[0], cur[1] ^ 2)
                visited.add(hop)
                cur = partner[hop]
                if cur == start:
                    break
    return count


# -- stub-level assembly ------------------------------------------------------
#
# Surgery (gluing tangles, attaching closure arcs, smoothing a crossing) is
# expressed uniformly: keep a set of crossings, list every edge as a pair of
# "stubs", add join pairs, then dissolve everything that is not a kept
# crossing port.  Stubs are opaque hashable tokens; crossing ports must be
# `("p", diagram_tag, crossing_index, slot)`.

Stub = tuple


def assemble(kept: Sequence[tuple[Crossing, tuple[Stub, Stub, Stub, Stub]]],
             pairings: Iterable[tuple[Stub, Stub]],
             extra_loops: int = 0,
             terminals: frozenset | set = frozenset(),
             ) -> tuple[tuple[Crossing, ...], int, dict]:
    """Resolve stub chains into edges.

    `kept` lists crossings with the stub at each slot.  `pairings` contains
    both original edges and surgical joins; a stub owned by a kept crossing
    or listed in `terminals` must occur in exactly one pairing, every other
    stub in exactly two.  Chains between kept ends become edges, closed
    chains of dissolved stubs become free loops.  Returns the relabelled
    crossings, the free-loop count, and the edge at each terminal.
    Direction consistency is the caller's concern (the resulting diagram
    re-validates it wholesale).
    """
    adj: dict[Stub, list[Stub]] = {}
    for x, y in pairings:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)

    port_of: dict[Stub, tuple[int, int]] = {}
    for ci, (_, ports) in enumerate(kept):
        for s, stub in enumerate(ports):
            if stub in port_of:
                raise ValueError(f"stub {stub} used by two ports")
            port_of[stub] = (ci, s)

    anchors = set(port_of) | set(terminals)
    for stub, nbrs in adj.items():
        want = 1 if stub in anchors else 2
        if len(nbrs) != want:
            raise OrientationError(f"stub {stub} has degree {len(nbrs)}, expected {want}")

    slot_edges: dict[tuple[int, int], int] = {}
    terminal_edges: dict[Stub, int] = {}
    visited: set[Stub] = set()
    next_edge = 1

    def record(stub, edge):
        if stub in port_of:
            slot_edges[port_of[stub]] = edge
        else:
            terminal_edges[stub] = edge

    for stub in sorted(anchors):
        if stub in visited:
            continue
        chain = [stub]
        prev, cur = stub, adj[stub][0]
        while cur not in anchors:
            chain.append(cur)
            nxt = [z for z in adj[cur] if z != prev]
            if not nxt:
                # two parallel pairings between the same pair of stubs
                nxt = [prev]
            prev, cur = cur, nxt[0]
        chain.append(cur)
        visited.update(chain)
        record(chain[0], next_edge)
        record(chain[-1], next_edge)
        next_edge += 1

    loops = extra_loops
    for stub in adj:
        if stub in visited or stub in anchors:
            continue
        cyc = [stub]
        prev, cur = stub, adj[stub][0]
        while cur != stub:
            cyc.append(cur)
            nxt = [z for z in adj[cur] if z != prev]
            prev, cur = cur, nxt[0] if nxt else prev
        visited.update(cyc)
        loops += 1

    out = []
    for ci, (c, _) in enumerate(kept):
        slots = tuple(slot_edges[(ci, s)] for s in range(4))
        out.append(Crossing(c.kind, slots, c.sign))
    return tuple(out), loops, terminal_edges


def diagram_stub_data(tag, crossings: Sequence[Crossing],
                      endpoints: Sequence[Endpoint] = ()):
    """Stub bookkeeping for one oriented diagram: kept list, edge pairings, io tags.

    Edge pairings connect the tail occurrence of each edge to its head
    occurrence; tangle endpoints appear as stubs ("t", tag, index).
    """
    kept = [(c, tuple(("p", tag, i, s) for s in range(4)))
            for i, c in enumerate(crossings)]
    ends: dict[int, dict[str, list[Stub]]] = {}
    io: dict[Stub, str] = {}

    def record(e, stub, role):
        ends.setdefault(e, {"head": [], "tail": []})[role].append(stub)

    for i, c in enumerate(crossings):
        ins = c.in_slots()
        for s in range(4):
            stub = ("p", tag, i, s)
            role = "head" if s in ins else "tail"
            record(c.slots[s], stub, role)
            io[stub] = "in" if role == "head" else "out"
    for ep in endpoints:
        stub = ("t", tag, ep.index)
        record(ep.edge, stub, "head" if ep.out else "tail")
        io[stub] = "in" if ep.out else "out"

    pairings = []
    for e, d in ends.items():
        if len(d["head"]) != 1 or len(d["tail"]) != 1:
            raise OrientationError(f"edge {e} of diagram {tag!r} is not consistently directed")
        pairings.append((d["tail"][0], d["head"][0]))
    return kept, pairings, io


def smooth_crossing(d: LinkDiagram, index: int, which: str) -> LinkDiagram:
    """Replace one classical crossing by its A- or B-smoothing.

    The result is in general not orientable, so it is returned without
    orientation data and is only good for bracket evaluation.
    """
    target = d.crossings[index]
    if target.kind != "X":
        raise ValueError("cannot smooth a virtual crossing")
    kept_crossings = [c for i, c in enumerate(d.crossings) if i != index]
    ends: dict[int, list[Stub]] = {}
    for i, c in enumerate(kept_crossings):
        for s, e in enumerate(c.slots):
            ends.setdefault(e, []).append(("p", "d", i, s))
    for s, e in enumerate(target.slots):
        ends.setdefault(e, []).append(("rm", s))
    pairings = []
    for e, places in ends.items():
        if len(places) != 2:
            raise OrientationError(f"edge {e} appears {len(places)} times")
        pairings.append((places[0], places[1]))
    for x, y in smoothing_pairs(target, which):
        pairings.append((("rm", x), ("rm", y)))
    kept = [(Crossing(c.kind, c.slots, 0), tuple(("p", "d", i, s) for s in range(4)))
            for i, c in enumerate(kept_crossings)]
    crossings, loops, _ = assemble(kept, pairings, extra_loops=d.free_loops)
    return LinkDiagram(crossings, loops, oriented=False)


# -- text format --------------------------------------------------------------

def parse_link(text: str) -> LinkDiagram:
    """Parse the line-based link format: `X a b c d`, `V a b c d`, `O`, `#` comments."""
    crossings, free_loops = _parse_crossing_lines(text, allow_endpoints=False)[:2]
    signed = _infer_directions(crossings, ())
    return LinkDiagram(signed, free_loops)


def _parse_crossing_lines(text: str, allow_endpoints: bool):
    crossings: list[tuple[str, tuple[int, int, int, int]]] = []
    endpoints: list[tuple[int, int, bool]] = []
    free_loops = 0
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0].upper()
        try:
            if tag in ("X", "V"):
                if len(parts) != 5:
                    raise ParseError(f"line {lineno}: {tag} needs 4 edge labels")
                slots = tuple(int(p) for p in parts[1:])
                if any(e <= 0 for e in slots):
                    raise ParseError(f"line {lineno}: edge labels must be positive")
                crossings.append((tag, slots))
            elif tag == "O":
                if len(parts) != 1:
                    raise ParseError(f"line {lineno}: O takes no arguments")
                free_loops += 1
            elif tag == "TANGLE" and allow_endpoints:
                if len(parts) != 2:
                    raise ParseError(f"line {lineno}: TANGLE needs a strand count")
                header_n = int(parts[1])
            elif tag == "E" and allow_endpoints:
                if len(parts) != 4 or parts[3] not in ("in", "out"):
                    raise ParseError(f"line {lineno}: endpoint lines are `E i e in|out`")
                idx, edge = int(parts[1]), int(parts[2])
                if idx <= 0 or edge <= 0:
                    raise ParseError(f"line {lineno}: indices and edges must be positive")
                endpoints.append((idx, edge, parts[3] == "out"))
            else:
                raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    return crossings, free_loops, endpoints, header_n


def _infer_directions(raw: list[tuple[str, tuple[int, int, int, int]]],
                      endpoints: Sequence[tuple[int, int, bool]]) -> tuple[Crossing, ...]:
    """Recover crossing signs from the consecutive edge-numbering convention.

    Each component's edges are numbered consecutively along its orientation,
    cyclically for closed components; open strands run from the edge named at
    their inbound endpoint up to the edge at their outbound endpoint.
    """
    occurrences: dict[int, int] = {}
    for _, slots in raw:
        for e in slots:
            occurrences[e] = occurrences.get(e, 0) + 1
    for _, e, _ in endpoints:
        occurrences[e] = occurrences.get(e, 0) + 1
    bad = [e for e, n in occurrences.items() if n != 2]
    if bad:
        raise ParseError(f"edges occurring other than twice: {sorted(bad)}")

    # undirected strand structure: pair slots through each crossing
    provisional = [Crossing(kind, slots, 0) for kind, slots in raw]
    terminal_edges = [(e, ("T", idx)) for idx, e, _ in endpoints]
    strands = _strand_pieces(provisional, terminal_edges)

    ep_by_edge: dict[int, list[bool]] = {}
    for _, e, out in endpoints:
        ep_by_edge.setdefault(e, []).append(out)

    succ: dict[int, int] = {}
    for piece, closed in strands:
        labels = sorted(piece)
        lo, hi = labels[0], labels[-1]
        if labels != list(range(lo, hi + 1)):
            raise ParseError(f"component edges {labels} are not consecutive")
        for e in range(lo, hi):
            succ[e] = e + 1
        if closed:
            succ[hi] = lo
        elif lo == hi:
            if sorted(ep_by_edge.get(lo, [])) != [False, True]:
                raise ParseError(f"crossingless strand edge {lo} needs one in and one out endpoint")
        else:
            if ep_by_edge.get(lo, []) != [False] or ep_by_edge.get(hi, []) != [True]:
                raise ParseError(
                    f"strand {lo}..{hi} must start at an inbound endpoint and end at an outbound one")

    crossings = []
    for kind, slots in raw:
        a, b, c, d = slots
        if kind == "V":
            if succ.get(a) == c and succ.get(b) == d:
                crossings.append(Crossing("V", slots, 0))
            elif succ.get(c) == a and succ.get(d) == b:
                crossings.append(Crossing("V", (c, d, a, b), 0))
            elif succ.get(a) == c and succ.get(d) == b:
                crossings.append(Crossing("V", (d, a, b, c), 0))
            elif succ.get(c) == a and succ.get(b) == d:
                crossings.append(Crossing("V", (b, c, d, a), 0))
            else:
                raise ParseError(f"virtual crossing {slots} breaks edge numbering")
        else:
            if succ.get(a) != c:
                raise ParseError(f"crossing {slots}: under-strand must run {a} -> {c}")
            if succ.get(d) == b:
                crossings.append(Crossing("X", slots, 1))
            elif succ.get(b) == d:
                crossings.append(Crossing("X", slots, -1))
            else:
                raise ParseError(f"crossing {slots}: over-strand direction is inconsistent")
    return tuple(crossings)


def _strand_pieces(crossings: Sequence[Crossing],
                   terminal_edges: Sequence[tuple[int, object]]):
    """Undirected strand decomposition: (edge set, is_closed) per strand.

    `terminal_edges` lists (edge, token) for every tangle endpoint; tokens
    must be unique tuples of the form ("T", ...).
    """
    partner = _occurrence_partners(crossings, terminal_edges)
    visited = set()
    pieces = []

    def is_terminal(x):
        return isinstance(x, tuple) and len(x) == 2 and x[0] == "T"

    def edge_at(occ):
        return crossings[occ[0]].slots[occ[1]]

    for e, token in terminal_edges:
        if token in visited:
            continue
        visited.add(token)
        piece = {e}
        cur = partner[token]
        while not is_terminal(cur):
            visited.add(cur)
            hop = (cur[0], cur[1] ^ 2)
            visited.add(hop)
            piece.add(edge_at(hop))
            cur = partner[hop]
        visited.add(cur)
        pieces.append((piece, False))

    for i, _ in enumerate(crossings):
        for s in range(4):
            start = (i, s)
            if start in visited:
                continue
            piece = set()
            cur = start
            while True:
                visited.add(cur)
                piece.add(edge_at(cur))
                hop = (cur[0], cur[1] ^ 2)
                visited.add(hop)
                piece.add(edge_at(hop))
                cur = partner[hop]
                if cur == start:
                    break
            pieces.append((piece, True))
    return pieces


def render_link(d: LinkDiagram) -> str:
    """Canonical text: edges renumbered consecutively along each component."""
    if not d.oriented:
        raise OrientationError("cannot render an unoriented diagram")
    relabel = _canonical_relabel(d.crossings, ())
    lines = []
    for c in d.crossings:
        slots = " ".join(str(relabel[e]) for e in c.slots)
        lines.append(f"{c.kind} {slots}")
    lines.extend("O" for _ in range(d.free_loops))
    return "\n".join(lines) + ("\n" if lines else "")


def _directed_places(crossings: Sequence[Crossing],
                     endpoints: Sequence[Endpoint]):
    """Maps edge -> place of its tail/head, where a place is ("c", i, slot) or ("t", idx)."""
    tail: dict[int, tuple] = {}
    head: dict[int, tuple] = {}
    for i, c in enumerate(crossings):
        ins = c.in_slots()
        for s in range(4):
            e = c.slots[s]
            if s in ins:
                head[e] = ("c", i, s)
            else:
                tail[e] = ("c", i, s)
    for ep in endpoints:
        if ep.out:
            head[ep.edge] = ("t", ep.index)
        else:
            tail[ep.edge] = ("t", ep.index)
    return tail, head


def _canonical_relabel(crossings: Sequence[Crossing],
                       endpoints: Sequence[Endpoint]) -> dict[int, int]:
    """Edge relabeling: strands ordered by inbound endpoint, then closed loops."""
    tail, head = _directed_places(crossings, endpoints)
    relabel: dict[int, int] = {}
    nxt = 1

    def follow(edge):
        nonlocal nxt
        while edge not in relabel:
            relabel[edge] = nxt
            nxt += 1
            place = head.get(edge)
            if place is None or place[0] == "t":
                break
            _, i, s = place
            s2 = crossings[i].continuation(s)
            edge = crossings[i].slots[s2]

    for ep in sorted(endpoints, key=lambda p: p.index):
        if not ep.out:
            follow(ep.edge)
    # closed components: deterministic order by smallest current tail place
    remaining = sorted(set(tail) - set(relabel),
                       key=lambda e: tail[e])
    for e in remaining:
        follow(e)
    return relabel
