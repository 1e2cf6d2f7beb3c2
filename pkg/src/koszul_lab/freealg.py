"""Words, monomial orders, noncommutative polynomials and quadratic
presentations over F_p.

A monomial is a word: a tuple of generator indices (the empty tuple is 1).
A polynomial maps words to nonzero coefficients mod p.  The only supported
admissible orders are degree-lexicographic orders induced by a permutation
of the generators, which is what every instance in scope uses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidParamsError
from .linalg import check_prime, inverse_mod, rref_rows

Word = tuple[int, ...]


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order from a total order on generators.

    ``ranks[g]`` is the position of generator g in the chosen total order;
    word a precedes word b iff a is shorter, or same length and the rank
    sequence of a is lexicographically smaller.
    """

    ranks: tuple[int, ...]

    @staticmethod
    def from_permutation(perm: Sequence[int]) -> "MonomialOrder":
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise InvalidParamsError("generator permutation must be a permutation")
        ranks = [0] * n
        for position, g in enumerate(perm):
            ranks[g] = position
        return MonomialOrder(tuple(ranks))

    @staticmethod
    def natural(n: int) -> "MonomialOrder":
        return MonomialOrder(tuple(range(n)))

    def key(self, word: Word):
        return (len(word), tuple(self.ranks[g] for g in word))

    def compare(self, a: Word, b: Word) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def sort_desc(self, words: Iterable[Word]) -> list[Word]:
        return sorted(words, key=self.key, reverse=True)


class NcPoly:
    """Noncommutative polynomial: finite map word -> coefficient in F_p*.

    Immutable by convention; arithmetic returns new values.  Zero
    coefficients are never stored.
    """

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Word, int]):
        self.p = p
        self.terms = {w: c % p for w, c in terms.items() if c % p}

    @staticmethod
    def zero(p: int) -> "NcPoly":
        return NcPoly(p, {})

    @staticmethod
    def monomial(p: int, word: Word, coeff: int = 1) -> "NcPoly":
        return NcPoly(p, {tuple(word): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def add(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = (out.get(w, 0) + c) % self.p
        return NcPoly(self.p, out)

    def scale(self, c: int) -> "NcPoly":
        return NcPoly(self.p, {w: v * c for w, v in self.terms.items()})

    def sub(self, other: "NcPoly") -> "NcPoly":
        return self.add(other.scale(-1))

    def mul(self, other: "NcPoly") -> "NcPoly":
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = (out.get(w, 0) + c1 * c2) % self.p
        return NcPoly(self.p, out)

    def leading_word(self, order: MonomialOrder) -> Word:
        if not self.terms:
            raise InvalidParamsError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def reversed_words(self) -> "NcPoly":
        return NcPoly(self.p, {tuple(reversed(w)): c for w, c in self.terms.items()})

    def rename(self, index_map: Sequence[int]) -> "NcPoly":
        return NcPoly(
            self.p, {tuple(index_map[g] for g in w): c for w, c in self.terms.items()}
        )

    def sorted_terms(self, order: Optional[MonomialOrder] = None):
        """Terms in descending monomial order (for deterministic output)."""
        if order is None:
            key = lambda w: (len(w), w)
        else:
            key = order.key
        return [(w, self.terms[w]) for w in sorted(self.terms, key=key, reverse=True)]

    def __eq__(self, other) -> bool:
        return isinstance(other, NcPoly) and self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        return f"NcPoly(p={self.p}, {self.terms!r})"


@dataclass(frozen=True)
class QuadraticPresentation:
    """Generators and degree-2 relators: the syntactic quadratic algebra.

    ``designated`` optionally names a degree-1 element (coefficient vector
    over the generators) used as the twisting element by constructor trees;
    ``provenance`` records how the presentation was built.
    """

    p: int
    generator_names: tuple[str, ...]
    relators: tuple[NcPoly, ...]
    provenance: Optional[str] = None
    designated: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        check_prime(self.p)
        if len(set(self.generator_names)) != len(self.generator_names):
            raise InvalidParamsError("generator names must be unique")
        for r in self.relators:
            if r.p != self.p:
                raise InvalidParamsError("relator modulus differs from presentation")
            if r.is_zero():
                continue
            if not r.is_homogeneous(2):
                raise InvalidParamsError("relators must be homogeneous of degree 2")
            for w in r.terms:
                if any(g < 0 or g >= len(self.generator_names) for g in w):
                    raise InvalidParamsError("relator uses unknown generator index")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    def generator_index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise InvalidParamsError(f"unknown generator {name!r}")

    def default_order(self) -> MonomialOrder:
        return MonomialOrder.natural(self.num_generators)

    def order_from_names(self, names: Sequence[str]) -> MonomialOrder:
        if sorted(names) != sorted(self.generator_names):
            raise InvalidParamsError("order must list every generator exactly once")
        return MonomialOrder.from_permutation([self.generator_index(n) for n in names])

    def relator_texts(self) -> list[str]:
        return [poly_text(r, self.generator_names) for r in self.relators]


@dataclass(frozen=True)
class NormalizedBasis:
    """Normalized relator basis: monic leading monomials, pairwise distinct,
    each absent from every other row."""

    order: MonomialOrder
    rows: tuple[NcPoly, ...]
    leading: tuple[Word, ...]


def normalize_relators(pres: QuadraticPresentation, order: Optional[MonomialOrder] = None) -> NormalizedBasis:
    """Gaussian elimination on the relator span, coordinates in descending
    monomial order so each RREF pivot is the row's leading monomial."""
    if order is None:
        order = pres.default_order()
    d = pres.num_generators
    words = order.sort_desc([(i, j) for i in range(d) for j in range(d)])
    index = {w: k for k, w in enumerate(words)}
    coeff_rows = []
    for r in pres.relators:
        if r.is_zero():
            continue
        row = [0] * len(words)
        for w, c in r.terms.items():
            row[index[w]] = c
        coeff_rows.append(row)
    red, pivots = rref_rows(pres.p, coeff_rows, len(words))
    rows = []
    leading = []
    for row, piv in zip(red, pivots):
        poly = NcPoly(pres.p, {words[k]: c for k, c in enumerate(row) if c})
        rows.append(poly)
        leading.append(words[piv])
    return NormalizedBasis(order, tuple(rows), tuple(leading))


# ---------------------------------------------------------------------------
# Canonical text form

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def word_text(word: Word, names: Sequence[str]) -> str:
    if not word:
        return "1"
    return "*".join(names[g] for g in word)


def poly_text(poly: NcPoly, names: Sequence[str], order: Optional[MonomialOrder] = None) -> str:
    """Canonical text: terms joined by " + ", descending monomial order,
    unit coefficients omitted (e.g. "a2*a2 + t*a2")."""
    if poly.is_zero():
        return "0"
    parts = []
    for w, c in poly.sorted_terms(order):
        m = word_text(w, names)
        parts.append(m if c == 1 else f"{c}*{m}")
    return " + ".join(parts)


def parse_poly(text: str, names: Sequence[str], p: int) -> NcPoly:
    """Parse the canonical polynomial text form, plus "-" and "=" sugar.

    "lhs = rhs" yields the relator lhs - rhs; signs are normalized mod p.
    """
    if "=" in text:
        lhs, _, rhs = text.partition("=")
        if "=" in rhs:
            raise InvalidParamsError(f"more than one '=' in relation {text!r}")
        return parse_poly(lhs, names, p).sub(parse_poly(rhs, names, p))
    name_index = {n: i for i, n in enumerate(names)}
    out = NcPoly.zero(p)
    text = text.strip()
    if not text:
        raise InvalidParamsError("empty polynomial text")
    marked = text.replace("+", "\x00+").replace("-", "\x00-")
    terms: list[tuple[int, str]] = []
    for chunk in marked.split("\x00"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk[0] == "+":
            terms.append((1, chunk[1:].strip()))
        elif chunk[0] == "-":
            terms.append((-1, chunk[1:].strip()))
        else:
            terms.append((1, chunk))
    for sgn, term in terms:
        if not term:
            raise InvalidParamsError(f"dangling sign in {text!r}")
        coeff = sgn
        word: list[int] = []
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise InvalidParamsError(f"empty factor in term {term!r}")
            if factor.isdigit():
                coeff *= int(factor)
            elif _NAME_RE.fullmatch(factor):
                if factor not in name_index:
                    raise InvalidParamsError(f"unknown generator {factor!r}")
                word.append(name_index[factor])
            else:
                raise InvalidParamsError(f"bad factor {factor!r} in {text!r}")
        out = out.add(NcPoly.monomial(p, tuple(word), coeff))
    return out


def presentation_from_texts(
    p: int,
    generator_names: Sequence[str],
    relation_texts: Sequence[str],
    provenance: Optional[str] = None,
    designated: Optional[tuple[int, ...]] = None,
) -> QuadraticPresentation:
    names = tuple(generator_names)
    relators = tuple(parse_poly(t, names, p) for t in relation_texts)
    return QuadraticPresentation(p, names, relators, provenance, designated)
