"""Exact integer-coefficient Laurent polynomials in one variable.

Everything downstream (bracket sums, writhe normalisation, move divisors)
lives in Z[A, A^-1], so this module keeps coefficients as Python ints and
never touches floating point.  Units of the ring are +-A^k; the canonical
form used for gcd results and golden-file comparisons fixes the minimal
exponent at 0 and makes the lowest-degree coefficient positive.
"""

from __future__ import annotations

import re
from math import gcd as _int_gcd
from typing import Iterable, Mapping


class LaurentPoly:
    """A Laurent polynomial stored as a map exponent -> nonzero coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls({exp: coeff})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Copy of the exponent -> coefficient map (no zero coefficients)."""
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no minimal exponent")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no maximal exponent")
        return max(self._terms)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def content(self) -> int:
        """gcd of all coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self._terms.values():
            g = _int_gcd(g, abs(c))
        return g

    @property
    def is_unit(self) -> bool:
        """True iff the polynomial is +-A^k."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return abs(c) == 1

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = LaurentPoly.__new__(LaurentPoly)
        p._terms = out
        return p

    def __neg__(self) -> "LaurentPoly":
        p = LaurentPoly.__new__(LaurentPoly)
        p._terms = {e: -c for e, c in self._terms.items()}
        return p

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        p = LaurentPoly.__new__(LaurentPoly)
        p._terms = out
        return p

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit:
                raise ValueError("negative power of a non-unit Laurent polynomial")
            ((e, c),) = self._terms.items()
            return LaurentPoly({-e: c}) ** (-n)
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scaled(self, k: int) -> "LaurentPoly":
        """Multiply by the integer k."""
        if not k:
            return LaurentPoly.zero()
        return LaurentPoly({e: c * k for e, c in self._terms.items()})

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by A^k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


#: Loop value -A^2 - A^-2 of the bracket skein theory.
LOOP = LaurentPoly({2: -1, -2: -1})

A = LaurentPoly({1: 1})
ONE = LaurentPoly.one()
ZERO = LaurentPoly.zero()


def minus_A_cubed_power(n: int) -> LaurentPoly:
    """(-A^3)^n for any integer n."""
    sign = -1 if n % 2 else 1
    return LaurentPoly({3 * n: sign})


def canonical(p: LaurentPoly) -> LaurentPoly:
    """The associate of p with minimal exponent 0 and positive lowest coefficient.

    Units in Z[A, A^-1] are +-A^k, so every nonzero polynomial has exactly
    one associate of this shape.  Raises on zero input.
    """
    if p.is_zero:
        raise ValueError("cannot normalise the zero polynomial")
    lo = p.min_exp()
    sign = 1 if p.coeff(lo) > 0 else -1
    return LaurentPoly({e - lo: sign * c for e, c in p.terms.items()})


def same_up_to_unit(p: LaurentPoly, q: LaurentPoly) -> bool:
    """True iff p and q agree up to multiplication by +-A^k."""
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    return canonical(p) == canonical(q)


def _coeff_list(p: LaurentPoly) -> list[int]:
    """Ascending coefficient list of p shifted to minimal exponent 0."""
    lo, hi = p.min_exp(), p.max_exp()
    return [p.coeff(e) for e in range(lo, hi + 1)]


def _trim(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int] | None:
    """Exact division of integer coefficient lists, or None.

    Ordinary long division from the top degree; any non-integer quotient
    coefficient or nonzero remainder means "not divisible in Z[A]".
    """
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - dn) if len(num) > dn else []
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if c % lead:
            return None
        f = c // lead
        q[i - dn] = f
        for j, d in enumerate(den):
            num[i - dn + j] -= f * d
    return q if not any(num) else None


def divides(d: LaurentPoly, p: LaurentPoly) -> bool:
    """True iff p = d * q for some q in Z[A, A^-1].

    Divisibility is insensitive to units, so both sides are shifted to
    minimal exponent 0 first; the quotient must have integer coefficients.
    """
    if d.is_zero:
        raise ValueError("divisor must be nonzero")
    if p.is_zero:
        return True
    return _poly_divmod_exact(_coeff_list(p), _coeff_list(d)) is not None


def exact_div(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """The exact quotient p / d in Z[A, A^-1]; raises if division is not exact.

    Exponents are tracked so that p == d * result, not just up to units.
    """
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return ZERO
    q = _poly_divmod_exact(_coeff_list(p), _coeff_list(d))
    if q is None:
        raise ValueError(f"{p} is not divisible by {d} over the integers")
    shift = p.min_exp() - d.min_exp()
    return LaurentPoly({i + shift: c for i, c in enumerate(q) if c})


def _primitive(cs: list[int]) -> list[int]:
    cs = _trim(list(cs))
    if not cs:
        return cs
    g = 0
    for c in cs:
        g = _int_gcd(g, abs(c))
    if cs[-1] < 0:
        g = -g
    return [c // g for c in cs]


def _pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder of f by g over Z (f, g ascending, g nonzero)."""
    f = list(f)
    dg = len(g) - 1
    lead = g[-1]
    while len(f) - 1 >= dg and any(f):
        df = len(f) - 1
        c = f[-1]
        f = [x * lead for x in f]
        for j, d in enumerate(g):
            f[df - dg + j] -= c * d
        f = _trim(f)
        if not f:
            break
    return f


def _gcd_lists(f: list[int], g: list[int]) -> list[int]:
    """gcd of primitive integer polynomials via the primitive remainder sequence."""
    f, g = _primitive(f), _primitive(g)
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _pseudo_rem(f, g)
        f, g = g, _primitive(r)
    return f


def gcd_many(ps: Iterable[LaurentPoly]) -> LaurentPoly:
    """Canonical gcd of a collection of Laurent polynomials.

    Integer content is retained: gcd of contents times gcd of primitive
    parts.  All-zero input returns 0; otherwise the result is in canonical
    (minimal exponent 0, positive lowest coefficient) form.
    """
    ps = list(ps)
    if not ps:
        raise ValueError("gcd of an empty collection")
    g: LaurentPoly | None = None
    content = 0
    for p in ps:
        if p.is_zero:
            continue
        content = _int_gcd(content, p.content())
        prim = _primitive(_coeff_list(p))
        if g is None:
            acc = prim
        else:
            acc = _gcd_lists(acc, prim)
        g = LaurentPoly({i: c for i, c in enumerate(acc)})
        if acc == [1] and content == 1:
            break
    if g is None:
        return ZERO
    return canonical(g.scaled(content))


def invert_variable(p: LaurentPoly) -> LaurentPoly:
    """Substitute A -> A^-1 (exponent negation).

    Evaluating the writhe-normalised bracket at A = t^(-1/4) is the same as
    reading the result in q = t^(1/4) after this substitution.
    """
    return LaurentPoly({-e: c for e, c in p.terms.items()})


# -- text form -------------------------------------------------------------

def format_poly(p: LaurentPoly, var: str = "A") -> str:
    """Render in ascending exponent order, e.g. ``-A^-4 + 2 - A^4``."""
    if p.is_zero:
        return "0"
    out = []
    for e in sorted(p.terms):
        c = p.coeff(e)
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif e == 1:
            body = f"{var}" if mag == 1 else f"{mag}{var}"
        else:
            body = f"{var}^{e}" if mag == 1 else f"{mag}{var}^{e}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+)\s*\*?\s*(?:(?P<var1>[A-Za-z])\s*(?:\^\s*(?P<exp1>-?\d+))?)?
          | (?P<var2>[A-Za-z])\s*(?:\^\s*(?P<exp2>-?\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_poly(text: str, var: str = "A") -> LaurentPoly:
    """Parse the grammar produced by :func:`format_poly`."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text == "0":
        return ZERO
    terms: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign_tok = m.group("sign")
        if sign_tok is None and not first:
            raise ValueError(f"missing sign between terms near {text[pos:]!r}")
        sign = -1 if sign_tok == "-" else 1
        letter = m.group("var1") or m.group("var2")
        if letter is not None and letter != var:
            raise ValueError(f"unexpected variable {letter!r}, expected {var!r}")
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        if letter is None:
            exp = 0
        else:
            etok = m.group("exp1") or m.group("exp2")
            exp = int(etok) if etok else 1
        terms[exp] = terms.get(exp, 0) + sign * coeff
        pos = m.end()
        first = False
    return LaurentPoly(terms)
