"""Built-in diagrams and tangles: named knots, links, and move fixtures.

The twist-region families are generated combinatorially and validated in the
test suite against their closed-form invariants; the two triple-chord move
tangles are frozen data whose closures reproduce the expected unknot,
trefoil, and cable values exactly.
"""

from __future__ import annotations

from .diagram import Crossing, Endpoint, LinkDiagram, ParseError, parse_link
from .matchings import Matching, matching
from .tangle import Tangle, apply_braid, closure, parse_tangle

__all__ = [
    "builtin", "BUILTIN_NAMES", "torus2", "twist_knot",
    "delta_tangle", "double_delta_tangle", "matching_tangle",
    "identity_tangle", "twist_clasp_tangle", "twist_region_tangle",
]


def _wrap(e: int, lo: int, hi: int) -> int:
    span = hi - lo + 1
    return (e - lo) % span + lo


def torus2(k: int) -> LinkDiagram:
    """Closure of k positive half-twists on two strands: the (2,k) torus family.

    k = 1 is an unknot with a kink, k = 2 the Hopf link with linking number
    +1, k = 3 the right-handed trefoil.  Even k yields the two-component
    link oriented so that every crossing is positive (writhe k).
    """
    if k < 1:
        raise ValueError("torus2 needs k >= 1")
    if k % 2:
        # one component, edges 1..2k consecutive along the strand
        crossings = []
        for i in range(1, k + 1):
            a = _wrap(2 * i - 1 + k, 1, 2 * k)
            b = 2 * i
            c = _wrap(2 * i + k, 1, 2 * k)
            d = 2 * i - 1
            crossings.append(Crossing("X", (a, b, c, d), 1))
        return LinkDiagram(tuple(crossings))
    # even: close the twist region so each strand caps onto itself
    return closure(twist_region_tangle(k), matching((1, 4), (2, 3)))


def matching_tangle(m: Matching, word: str) -> Tangle:
    """The crossingless-by-construction tangle realising a matching.

    Chord intersections become virtual crossings; `word` fixes which
    endpoint of every pair is outbound (one of each is required).
    """
    from .tangle import (_external_structure, _finalise_external,
                         _orient_external)
    from .diagram import assemble
    if len(word) != 2 * m.n:
        raise ValueError("orientation word length must match the matching")
    out_at = {i + 1: word[i] == "+" for i in range(2 * m.n)}
    for a, b in m.pairs:
        if out_at[a] == out_at[b]:
            raise ValueError(f"pair ({a} {b}) needs one inbound and one outbound endpoint")
    nodes, pairings = _external_structure(m, modified=False)
    io = _orient_external(out_at, nodes, pairings)
    finalised = _finalise_external(nodes, io)
    terminals = {("t", "T", i) for i in range(1, 2 * m.n + 1)}
    crossings, loops, term_edges = assemble(finalised, pairings, terminals=terminals)
    eps = tuple(Endpoint(i, term_edges[("t", "T", i)], out_at[i])
                for i in range(1, 2 * m.n + 1))
    return Tangle(m.n, crossings, eps, loops)


def identity_tangle() -> Tangle:
    """The standard-orientation 2-tangle whose strands join 1-2 and 3-4."""
    return matching_tangle(matching((1, 2), (3, 4)), "+-+-")


def twist_clasp_tangle(k: int) -> Tangle:
    """Two-strand tangle of k half-twists and a clasp, in plat position.

    Its (1 2)(3 4) closure is the twist knot with k half-twists.  For odd k
    the tangle has the standard orientation and its (1 4)(2 3) closure is a
    Hopf link.
    """
    if k < 1:
        raise ValueError("twist_clasp_tangle needs k >= 1")
    return apply_braid(identity_tangle(), [2] * k + [-1, 2])


def twist_knot(k: int) -> LinkDiagram:
    """The twist knot with k half-twists: trefoil, figure-eight, 5_2, ..."""
    if k < 1:
        raise ValueError("twist_knot needs k >= 1")
    return closure(twist_clasp_tangle(k), matching((1, 2), (3, 4)))


def twist_region_tangle(k: int) -> Tangle:
    """Standard-orientation 2-tangle of k half-twists between its two arcs.

    For even k its (1 2)(3 4) closure is an unknot and its (1 4)(2 3)
    closure is the (2,k) torus link with all-positive crossings.
    """
    if k < 1 or k % 2:
        raise ValueError("the standard-orientation twist region needs even k >= 2")
    nested = matching_tangle(matching((1, 4), (2, 3)), "+-+-")
    return apply_braid(nested, [1] * k)


# The triple-chord move tangle: three strands joining opposite boundary
# points, each passing over one neighbour and under the other.  Its closure
# by (1 2)(3 4)(5 6) is an unknot and by (1 6)(2 3)(4 5) the left trefoil.
_DELTA_TEXT = """
TANGLE 3
E 1 3 out
E 2 4 in
E 3 9 out
E 4 1 in
E 5 6 out
E 6 7 in
X 8 1 9 2
X 2 4 3 5
X 5 7 6 8
"""

# Its doubled form: three bands of two antiparallel strands, twelve
# crossings, invariant under rotation by four strands.
_DOUBLE_DELTA_TEXT = """
TANGLE 6
E 1 5 out
E 2 6 in
E 3 20 out
E 4 11 in
E 5 25 out
E 6 26 in
E 7 10 out
E 8 1 in
E 9 15 out
E 10 16 in
E 11 30 out
E 12 21 in
X 12 4 13 3
X 18 4 19 5
X 2 24 3 23
X 1 27 2 28
X 11 7 12 8
X 19 7 20 6
X 8 24 9 25
X 9 27 10 26
X 22 14 23 13
X 28 14 29 15
X 21 17 22 18
X 29 17 30 16
"""


def delta_tangle() -> Tangle:
    return parse_tangle(_DELTA_TEXT)


def double_delta_tangle() -> Tangle:
    return parse_tangle(_DOUBLE_DELTA_TEXT)


# Kinoshita-Terasaka knot fixture: filled in by the fixture search; see
# tests for the oracle validation of its invariant.
_KT_TEXT: str | None = None


def kinoshita_terasaka() -> LinkDiagram:
    if _KT_TEXT is None:
        raise NotImplementedError("Kinoshita-Terasaka fixture not installed")
    return parse_link(_KT_TEXT)


BUILTIN_NAMES = ("unknot", "unlink", "hopf", "trefoil-left", "trefoil-right",
                 "figure8", "torus2", "twist", "kinoshita-terasaka")


def builtin(name: str, param: int | None = None) -> LinkDiagram:
    """Named diagram fixtures; `param` is k for the parameterized families."""
    def need_k(lo=1):
        if param is None or param < lo:
            raise ValueError(f"builtin {name!r} needs an integer parameter >= {lo}")
        return param

    if name == "unknot":
        return LinkDiagram((), 1)
    if name == "unlink":
        return LinkDiagram((), need_k())
    if name == "hopf":
        return torus2(2)
    if name == "trefoil-right":
        return torus2(3)
    if name == "trefoil-left":
        return torus2(3).mirror()
    if name == "figure8":
        return twist_knot(2)
    if name == "torus2":
        return torus2(need_k())
    if name == "twist":
        return twist_knot(need_k())
    if name == "kinoshita-terasaka":
        return kinoshita_terasaka()
    raise ValueError(f"unknown builtin diagram {name!r}")
