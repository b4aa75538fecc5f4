"""Oriented local moves, rotation operators, and divisibility certificates.

A move is a pair of equally-oriented tangles.  Its divisor is the gcd of the
differences of the writhe-normalised bracket over all closures in the move's
domain; any two links related by a sequence of the move have difference
divisible by it, which yields "impossible" certificates for concrete pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bracket import auxiliary_polynomial
from .diagram import LinkDiagram, OrientationError
from .families import delta_tangle, double_delta_tangle, matching_tangle
from .laurent import (LaurentPoly, ZERO, canonical, divides, exact_div,
                      gcd_many, same_up_to_unit)
from .matchings import Matching, enumerate_matchings, matching
from .tangle import Tangle, apply_braid, closure

__all__ = [
    "MoveSpec", "Verdict", "rotate_tangle", "move_divisor",
    "check_divisibility", "builtin_move", "BUILTIN_MOVE_NAMES",
    "torus2_f", "twist_f", "random_tangle", "verify_theorems",
    "FORBIDDEN_MOVE_DIVISOR", "cn_move_divisor",
]

#: Known divisor for the forbidden move on virtual knots.
FORBIDDEN_MOVE_DIVISOR = LaurentPoly({10: 1, 6: -1, 4: -1, 0: 1})


def cn_move_divisor(n: int) -> LaurentPoly:
    """Known divisor (A^-4 - 1)^n (A^-8 + A^-4 + 1)(A^-8 + 1) for the C_n move."""
    if n < 3:
        raise ValueError("C_n moves need n >= 3")
    base = LaurentPoly({-4: 1, 0: -1}) ** n
    return base * LaurentPoly({-8: 1, -4: 1, 0: 1}) * LaurentPoly({-8: 1, 0: 1})


def rotate_tangle(t: Tangle, k: int) -> Tangle:
    """Rotate a standard-orientation tangle clockwise by k endpoint steps.

    Endpoint i becomes endpoint i + k (mod 2n).  For odd k every strand is
    reversed, closed components included, so the result again carries the
    standard orientation; this leaves every crossing sign unchanged.
    """
    if not t.has_standard_orientation():
        raise OrientationError("rotation is defined for standard-orientation tangles")
    out = t.relabelled_boundary(k)
    if k % 2:
        out = out.reversed_strands()
    return out


@dataclass(frozen=True)
class MoveSpec:
    """A local move: replace tangle t1 by t2 with the same boundary behaviour."""

    t1: Tangle
    t2: Tangle
    name: str = "move"
    closure_domain: str = "noncrossing"

    def __post_init__(self):
        if self.t1.n != self.t2.n:
            raise ValueError("move tangles must have the same strand count")
        if self.t1.orientation_word() != self.t2.orientation_word():
            raise ValueError("move tangles must have equally oriented endpoints")
        if self.closure_domain not in ("noncrossing", "all"):
            raise ValueError("closure_domain must be 'noncrossing' or 'all'")

    @property
    def n(self) -> int:
        return self.t1.n


def move_divisor(mv: MoveSpec, method: str = "auto") -> LaurentPoly:
    """gcd of f(t2(m)) - f(t1(m)) over the move's closure domain.

    Orientation-incompatible matchings (rejected identically by both
    tangles) and zero differences are skipped; all-zero gives 0.
    """
    diffs = []
    for m in enumerate_matchings(mv.n, mv.closure_domain == "noncrossing"):
        try:
            c1 = closure(mv.t1, m)
        except OrientationError:
            continue
        c2 = closure(mv.t2, m)
        d = auxiliary_polynomial(c2, method=method) - auxiliary_polynomial(c1, method=method)
        if not d.is_zero:
            diffs.append(d)
    if not diffs:
        return ZERO
    return gcd_many(diffs)


def _strand_pairing(t: Tangle) -> frozenset:
    """Which boundary endpoints are joined by strands (plus closed-component count)."""
    from .diagram import _strand_pieces
    terminal_edges = [(ep.edge, ("T", ep.index)) for ep in t.endpoints]
    pieces = _strand_pieces(t.crossings, terminal_edges)
    pairs = []
    closed = t.free_loops
    by_edge: dict[int, list[int]] = {}
    for ep in t.endpoints:
        by_edge.setdefault(ep.edge, []).append(ep.index)
    for piece, is_closed in pieces:
        if is_closed:
            closed += 1
            continue
        ends = [i for e in piece for i in by_edge.get(e, [])]
        lo, hi = min(ends), max(ends)
        pairs.append((lo, hi))
    return frozenset(pairs), closed


@dataclass(frozen=True)
class Verdict:
    possible: bool
    reason: str
    divisor: LaurentPoly
    difference: LaurentPoly | None = None


def check_divisibility(l1: LinkDiagram, l2: LinkDiagram, mv: MoveSpec) -> Verdict:
    """Certificate: can l1 be turned into l2 by a sequence of this move?

    "impossible" is sound; "possible" only means no obstruction was found.
    """
    p1, c1 = _strand_pairing(mv.t1)
    p2, c2 = _strand_pairing(mv.t2)
    if p1 == p2 and c1 == c2 and l1.components() != l2.components():
        return Verdict(False, "component counts differ but the move preserves them",
                       ZERO, None)
    divisor = move_divisor(mv)
    difference = auxiliary_polynomial(l1) - auxiliary_polynomial(l2)
    if divisor.is_zero:
        return Verdict(True, "move divisor is zero; no polynomial obstruction",
                       divisor, difference)
    if divides(divisor, difference):
        return Verdict(True, "difference of invariants is divisible by the move divisor",
                       divisor, difference)
    return Verdict(False, "difference of invariants is not divisible by the move divisor",
                   divisor, difference)


BUILTIN_MOVE_NAMES = ("delta", "double-delta", "mutation", "semi-mutation",
                      "rho3", "rho2-third", "virtual-rho1")

_ROTATIONS = {"mutation": (2, 2), "semi-mutation": (2, 1),
              "rho3": (3, 3), "rho2-third": (3, 2), "virtual-rho1": (2, 1)}


def builtin_move(name: str, t: Tangle | None = None) -> MoveSpec:
    """Named move specs; the rotational families take a user tangle."""
    if name == "delta":
        t1 = delta_tangle()
        return MoveSpec(t1, rotate_tangle(t1, 3), "delta", "noncrossing")
    if name == "double-delta":
        t1 = double_delta_tangle()
        return MoveSpec(t1, rotate_tangle(t1, 6), "double-delta", "noncrossing")
    if name in _ROTATIONS:
        n, k = _ROTATIONS[name]
        if t is None:
            raise ValueError(f"move {name!r} needs a tangle argument")
        if t.n != n:
            raise ValueError(f"move {name!r} needs a {n}-strand tangle")
        if name == "virtual-rho1":
            domain = "all"
        else:
            if not t.is_classical:
                raise ValueError(f"move {name!r} is defined for classical tangles")
            domain = "noncrossing"
        if not t.has_standard_orientation():
            raise OrientationError(f"move {name!r} needs the standard orientation")
        t2 = rotate_tangle(t, k)
        domain = "noncrossing" if (t.is_classical and t2.is_classical) else "all"
        return MoveSpec(t, t2, name, domain)
    raise ValueError(f"unknown move {name!r}")


# -- closed forms ------------------------------------------------------------

def torus2_f(k: int) -> LaurentPoly:
    """Invariant of the (2,k) torus family member produced by `torus2`.

    Both branches are exact divisions; a non-exact division signals a
    transcription bug in the closed form.
    """
    if k < 1:
        raise ValueError("torus2_f needs k >= 1")
    A = LaurentPoly.monomial
    if k % 2:
        num = (A(1, 0) - A(1, -12) - A(1, -4 - 4 * k) + A(1, -8 - 4 * k))
        return A(1, -2 * (k - 1)) * exact_div(num, A(1, 0) - A(1, -8))
    num = A(-1, -2) - A(1, -4 * k + 2) - A(1, -4 * k - 2) - A(1, -4 * k - 6)
    return exact_div(num, A(1, 0) + A(1, -4))


def twist_f(k: int) -> LaurentPoly:
    """Invariant of the twist knot with k half-twists produced by `twist_knot`."""
    if k < 1:
        raise ValueError("twist_f needs k >= 1")
    A = LaurentPoly.monomial
    if k % 2:
        num = A(1, 0) + A(1, -8) + A(1, -4 * k) - A(1, -4 * k - 12)
    else:
        num = A(1, 4) + A(1, 12) + A(1, -4 * k) - A(1, -4 * k + 12)
    return exact_div(num, A(1, 0) + A(1, 4))


# -- random tangles -----------------------------------------------------------

def random_tangle(rng: random.Random, n: int, max_crossings: int = 5,
                  virtual: bool = False, word: str | None = None) -> Tangle:
    """A random tangle with the given orientation word (standard by default).

    Generated as a random noncrossing base matching composed with a random
    signed braid word; classical tangles stay planar by construction.  With
    `virtual=True` some braid letters become virtual crossings.
    """
    if word is None:
        word = "+-" * n
    target = list(word)
    for attempt in range(200):
        length = rng.randint(0, max_crossings)
        gens: list = []
        for _ in range(length):
            g = rng.randint(1, 2 * n - 1)
            if virtual and rng.random() < 0.4:
                gens.append(("V", g))
            else:
                gens.append(g if rng.random() < 0.5 else -g)
        # pull the target orientation word back through the braid permutation
        letters = list(target)
        for gen in reversed(gens):
            g = gen[1] if isinstance(gen, tuple) else abs(gen)
            letters[g - 1], letters[g] = letters[g], letters[g - 1]
        base_word = "".join(letters)
        candidates = [m for m in enumerate_matchings(n, noncrossing_only=True)
                      if all(base_word[a - 1] != base_word[b - 1] for a, b in m.pairs)]
        if not candidates:
            continue
        base = matching_tangle(rng.choice(candidates), base_word)
        t = apply_braid(base, gens)
        if t.orientation_word() != word:
            raise AssertionError("braid permutation bookkeeping is off")
        return t
    raise RuntimeError("could not generate a compatible random tangle")


# -- built-in verification ------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


DELTA_DIVISOR = LaurentPoly({16: 1, 12: -1, 4: -1, 0: 1})
DOUBLE_DELTA_DIVISOR = LaurentPoly({36: 1, 32: -1, 28: 1, 24: -1, 12: -1, 8: 1, 4: -1, 0: 1})

_M3 = {
    "a1": matching((1, 2), (3, 4), (5, 6)),
    "a2": matching((1, 6), (2, 3), (4, 5)),
    "b1": matching((1, 2), (3, 6), (4, 5)),
    "b2": matching((1, 4), (2, 3), (5, 6)),
    "b3": matching((1, 6), (2, 5), (3, 4)),
}

DOUBLE_DELTA_REPRESENTATIVES = (
    matching((1, 4), (2, 3), (5, 12), (6, 11), (7, 10), (8, 9)),
    matching((1, 6), (7, 12), (2, 3), (4, 5), (8, 9), (10, 11)),
    matching((1, 12), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)),
    matching((1, 4), (2, 3), (5, 12), (6, 7), (8, 9), (10, 11)),
    matching((1, 12), (2, 3), (4, 5), (6, 11), (7, 10), (8, 9)),
    matching((1, 4), (2, 3), (5, 8), (6, 7), (9, 12), (10, 11)),
    matching((1, 12), (2, 11), (3, 6), (4, 5), (7, 10), (8, 9)),
)

DOUBLE_DELTA_PLAIN_VALUES = (
    LaurentPoly({24: 1, 16: 1, 8: 1, 0: 1}),
    LaurentPoly({20: 1, 12: 1, 8: 1, 0: 2, -4: -1, -8: 1, -12: -1}),
)
DOUBLE_DELTA_CABLE_VALUES = (
    LaurentPoly({26: -1, 18: -1, 14: 1, 10: -1, 6: 1, 2: -1}),
    LaurentPoly({18: -1, 10: -1, 2: -1, -10: 1, -18: 1, -22: -1}),
)


def _check_delta() -> CheckResult:
    mv = builtin_move("delta")
    f_a1 = auxiliary_polynomial(closure(mv.t1, _M3["a1"]))
    f_a2 = auxiliary_polynomial(closure(mv.t1, _M3["a2"]))
    trefoil_left = LaurentPoly({4: 1, 12: 1, 16: -1})
    ok = (f_a1 == LaurentPoly.one() and f_a2 == trefoil_left)
    div = move_divisor(mv)
    ok = ok and same_up_to_unit(div, DELTA_DIVISOR)
    ok = ok and LaurentPoly.one() - f_a2 == DELTA_DIVISOR
    return CheckResult("delta move", ok,
                       f"divisor {div}; closures give the unknot and the left trefoil")


def _check_double_delta() -> CheckResult:
    mv = builtin_move("double-delta")
    t1, t2 = mv.t1, mv.t2
    all_m = enumerate_matchings(6, noncrossing_only=True)
    diffs = []
    skipped = 0
    for m in all_m:
        fa = auxiliary_polynomial(closure(t1, m), method="contract")
        fb = auxiliary_polynomial(closure(t2, m), method="contract")
        d = fb - fa
        odd_arc = any(b == a + 1 and a % 2 == 1 for a, b in m.pairs)
        if odd_arc:
            if not d.is_zero:
                return CheckResult("double-delta move", False,
                                   f"closure {m} should be trivially equal")
            skipped += 1
        elif not d.is_zero:
            diffs.append(d)
    if skipped != 117:
        return CheckResult("double-delta move", False,
                           f"expected 117 trivially equal closures, got {skipped}")
    values = []
    for m in DOUBLE_DELTA_REPRESENTATIVES:
        fa = auxiliary_polynomial(closure(t1, m), method="contract")
        fb = auxiliary_polynomial(closure(t2, m), method="contract")
        values.append((fa, fb))
    ok = all(fa == fb for fa, fb in values[:3])
    ok = ok and {values[3][0], values[3][1]} == set(DOUBLE_DELTA_PLAIN_VALUES)
    ok = ok and {values[4][0], values[4][1]} == set(DOUBLE_DELTA_PLAIN_VALUES)
    ok = ok and {values[5][0], values[5][1]} == set(DOUBLE_DELTA_CABLE_VALUES)
    ok = ok and {values[6][0], values[6][1]} == set(DOUBLE_DELTA_CABLE_VALUES)
    g = gcd_many(diffs)
    ok = ok and same_up_to_unit(g, DOUBLE_DELTA_DIVISOR)
    return CheckResult("double-delta move", ok,
                       f"{skipped} trivial closures, gcd of the rest is {g}")


def _divisor_matches(mv: MoveSpec, expected_diffs) -> bool:
    div = move_divisor(mv)
    nonzero = [d for d in expected_diffs if not d.is_zero]
    if not nonzero:
        return div.is_zero
    return div == gcd_many(nonzero)


def _check_rho3(rng: random.Random, trials: int) -> CheckResult:
    for _ in range(trials):
        t = random_tangle(rng, 3)
        mv = builtin_move("rho3", t)
        d = (auxiliary_polynomial(closure(t, _M3["a1"]))
             - auxiliary_polynomial(closure(t, _M3["a2"])))
        if not _divisor_matches(mv, [d]):
            return CheckResult("rho^3 rotation divisor", False, f"counterexample {t}")
    return CheckResult("rho^3 rotation divisor", True,
                       f"{trials} random 3-tangles match f(T(m_a1)) - f(T(m_a2))")


def _check_rho2_third(rng: random.Random, trials: int) -> CheckResult:
    for _ in range(trials):
        t = random_tangle(rng, 3)
        mv = builtin_move("rho2-third", t)
        f = {k: auxiliary_polynomial(closure(t, _M3[k])) for k in ("b1", "b2", "b3")}
        diffs = [f["b2"] - f["b1"], f["b3"] - f["b2"]]
        if not _divisor_matches(mv, diffs):
            return CheckResult("rho^2 one-third rotation divisor", False,
                               f"counterexample {t}")
    return CheckResult("rho^2 one-third rotation divisor", True,
                       f"{trials} random 3-tangles match the stated gcd")


def _check_semi_mutation(rng: random.Random, trials: int) -> CheckResult:
    m1, m2 = matching((1, 2), (3, 4)), matching((1, 4), (2, 3))
    for _ in range(trials):
        t = random_tangle(rng, 2)
        mv = builtin_move("semi-mutation", t)
        f1 = auxiliary_polynomial(closure(t, m1))
        f2 = auxiliary_polynomial(closure(t, m2))
        if not _divisor_matches(mv, [f1 - f2]):
            return CheckResult("semi-mutation divisor", False, f"counterexample {t}")
        # the two rotational differences are negatives of each other
        r = rotate_tangle(t, 1)
        d1 = auxiliary_polynomial(closure(r, m1)) - f1
        d2 = auxiliary_polynomial(closure(r, m2)) - f2
        if d1 + d2 != ZERO:
            return CheckResult("semi-mutation divisor", False,
                               f"differences not antisymmetric for {t}")
    return CheckResult("semi-mutation divisor", True,
                       f"{trials} random 2-tangles match f(T(m1)) - f(T(m2))")


def _check_mutation(rng: random.Random, trials: int) -> CheckResult:
    for _ in range(trials):
        t = random_tangle(rng, 2)
        tp = random_tangle(rng, 2, word="-+-+")
        from .tangle import glue
        f1 = auxiliary_polynomial(glue(t, tp))
        f2 = auxiliary_polynomial(glue(rotate_tangle(t, 2), tp))
        if f1 != f2:
            return CheckResult("mutation invariance", False, f"counterexample {t} ~ {tp}")
    return CheckResult("mutation invariance", True,
                       f"{trials} random mutations leave the invariant unchanged")


def _check_virtual_rho1(rng: random.Random, trials: int) -> CheckResult:
    from .tangle import glue
    m1, m2 = matching((1, 2), (3, 4)), matching((1, 4), (2, 3))
    for _ in range(trials):
        t = random_tangle(rng, 2, virtual=True)
        tp = random_tangle(rng, 2, virtual=True, word="-+-+")
        div = auxiliary_polynomial(closure(t, m1)) - auxiliary_polynomial(closure(t, m2))
        diff = (auxiliary_polynomial(glue(t, tp))
                - auxiliary_polynomial(glue(rotate_tangle(t, 1), tp)))
        if div.is_zero:
            if not diff.is_zero:
                return CheckResult("virtual rotation divisor", False,
                                   f"zero divisor but nonzero difference for {t}")
            continue
        if not divides(div, diff):
            return CheckResult("virtual rotation divisor", False,
                               f"counterexample {t} ~ {tp}")
    return CheckResult("virtual rotation divisor", True,
                       f"{trials} random virtual 2-tangles obey the divisor")


def _check_end_to_end(rng: random.Random, trials: int) -> CheckResult:
    from .tangle import glue
    specs = [builtin_move("delta"), builtin_move("double-delta")]
    for mv in specs:
        div = move_divisor(mv, method="contract")
        comp = "".join("-" if c == "+" else "+" for c in mv.t1.orientation_word())
        for _ in range(trials):
            tp = random_tangle(rng, mv.n, max_crossings=3, word=comp)
            diff = (auxiliary_polynomial(glue(mv.t2, tp), method="contract")
                    - auxiliary_polynomial(glue(mv.t1, tp), method="contract"))
            if diff.is_zero:
                continue
            if div.is_zero or not divides(div, diff):
                return CheckResult("end-to-end move divisibility", False,
                                   f"{mv.name}: counterexample companion {tp}")
    return CheckResult("end-to-end move divisibility", True,
                       f"glued companions respect the delta and double-delta divisors")


def verify_theorems(seed: int = 0, trials: int = 10) -> list[CheckResult]:
    """Run the built-in checks; each returns a pass/fail with detail."""
    results = [
        _check_delta(),
        _check_double_delta(),
        _check_rho3(random.Random(seed), trials),
        _check_rho2_third(random.Random(seed + 1), trials),
        _check_semi_mutation(random.Random(seed + 2), trials),
        _check_mutation(random.Random(seed + 3), trials),
        _check_virtual_rho1(random.Random(seed + 4), trials),
        _check_end_to_end(random.Random(seed + 5), max(2, trials // 3)),
    ]
    return results
