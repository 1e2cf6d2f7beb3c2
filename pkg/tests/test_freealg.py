"""Monomial orders, polynomials, presentations and relator normalization."""

from __future__ import annotations

import random

import pytest

from koszul_lab.constructions import superpythagorean
from koszul_lab.errors import InvalidParamsError
from koszul_lab.freealg import (
    MonomialOrder,
    NcPoly,
    QuadraticPresentation,
    normalize_relators,
    parse_poly,
    poly_text,
    presentation_from_texts,
)
from koszul_lab.linalg import rref_rows


def random_word(rng, d, max_len=4):
    return tuple(rng.randrange(d) for _ in range(rng.randint(0, max_len)))


def test_empty_word_precedes_everything():
    order = MonomialOrder.natural(3)
    rng = random.Random(1)
    for _ in range(30):
        w = random_word(rng, 3)
        if w:
            assert order.compare((), w) == -1


def test_generator_order_from_paper_example():
    # t < a2 < a3 with t listed first
    pres = superpythagorean(3)
    order = pres.order_from_names(["t", "a2", "a3"])
    assert order.compare((0,), (1,)) == -1  # t < a2
    assert order.compare((1,), (2,)) == -1
    assert order.compare((0,), (0,)) == 0


def test_admissibility_translation_invariance():
    order = MonomialOrder.natural(3)
    rng = random.Random(2)
    for _ in range(100):
        a, b, c = (random_word(rng, 3) for _ in range(3))
        cmp = order.compare(a, b)
        if cmp == -1:
            assert order.compare(a + c, b + c) == -1
            assert order.compare(c + a, c + b) == -1


def test_order_permutation_validation():
    with pytest.raises(InvalidParamsError):
        MonomialOrder.from_permutation([0, 0, 1])


def test_normalize_superpythagorean_leading_monomials():
    # normalized basis has leading monomials {a_j a_i (i<j), a_i t, a_i a_i}
    pres = superpythagorean(3)
    nb = normalize_relators(pres)
    # indices: t=0, a2=1, a3=2
    expected = {(2, 1), (1, 0), (2, 0), (1, 1), (2, 2)}
    assert set(nb.leading) == expected
    # normalized rows are monic and leading monomial appears in no other row
    for row, lead in zip(nb.rows, nb.leading):
        assert row.terms[lead] == 1
        for other, other_lead in zip(nb.rows, nb.leading):
            if other_lead != lead:
                assert lead not in other.terms


def test_normalize_hand_example():
    # {xy + yx, xy} over F_2 normalizes to rows {xy, yx}
    p = 2
    pres = QuadraticPresentation(
        p, ("x", "y"),
        (NcPoly(p, {(0, 1): 1, (1, 0): 1}), NcPoly(p, {(0, 1): 1})),
    )
    nb = normalize_relators(pres)
    assert {poly_text(r, ("x", "y")) for r in nb.rows} == {"x*y", "y*x"}


def test_normalize_empty():
    pres = QuadraticPresentation(2, ("x",), ())
    nb = normalize_relators(pres)
    assert nb.rows == () and nb.leading == ()


def test_normalize_preserves_span():
    rng = random.Random(3)
    for p in (2, 3):
        for _ in range(20):
            d = rng.randint(1, 3)
            rels = []
            for _ in range(rng.randint(1, 4)):
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    terms[(rng.randrange(d), rng.randrange(d))] = rng.randrange(1, p)
                rels.append(NcPoly(p, terms))
            pres = QuadraticPresentation(p, tuple(f"g{i}" for i in range(d)), tuple(rels))
            nb = normalize_relators(pres)
            words = [(i, j) for i in range(d) for j in range(d)]
            index = {w: k for k, w in enumerate(words)}

            def rows_of(polys):
                out = []
                for poly in polys:
                    row = [0] * len(words)
                    for w, c in poly.terms.items():
                        row[index[w]] = c
                    out.append(row)
                return out

            span_in, _ = rref_rows(p, rows_of(r for r in rels if not r.is_zero()), len(words))
            span_out, _ = rref_rows(p, rows_of(nb.rows), len(words))
            assert span_in == span_out


def test_leading_monomial_is_greatest_in_row():
    pres = superpythagorean(4)
    nb = normalize_relators(pres)
    for row, lead in zip(nb.rows, nb.leading):
        for w in row.terms:
            assert nb.order.compare(w, lead) <= 0


def test_poly_text_canonical_form():
    p = 2
    names = ("t", "a2")
    poly = NcPoly(p, {(1, 1): 1, (0, 1): 1})
    assert poly_text(poly, names) == "a2*a2 + t*a2"
    assert poly_text(NcPoly(p, {}), names) == "0"
    assert poly_text(NcPoly(p, {(): 1}), names) == "1"


def test_poly_text_nonunit_coefficient():
    poly = NcPoly(3, {(0, 1): 2})
    assert poly_text(poly, ("x", "y")) == "2*x*y"


def test_parse_poly_roundtrip():
    names = ("t", "a2", "a3")
    rng = random.Random(4)
    for p in (2, 3):
        for _ in range(25):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                terms[(rng.randrange(3), rng.randrange(3))] = rng.randrange(1, p)
            poly = NcPoly(p, terms)
            assert parse_poly(poly_text(poly, names), names, p) == poly


def test_parse_poly_equals_sugar_and_signs():
    names = ("t", "a2")
    # a2*a2 = t*a2 means the relator a2*a2 - t*a2
    poly = parse_poly("a2*a2 = t*a2", names, 3)
    assert poly == NcPoly(3, {(1, 1): 1, (0, 1): 2})
    assert parse_poly("-a2", names, 3) == NcPoly(3, {(1,): 2})
    assert parse_poly("a2 - a2", names, 3).is_zero()


def test_parse_poly_errors():
    with pytest.raises(InvalidParamsError):
        parse_poly("a2*b9", ("t", "a2"), 2)
    with pytest.raises(InvalidParamsError):
        parse_poly("a2 = t = a2", ("t", "a2"), 2)
    with pytest.raises(InvalidParamsError):
        parse_poly("", ("t",), 2)


def test_presentation_validation():
    with pytest.raises(InvalidParamsError):
        presentation_from_texts(2, ["x", "x"], [])
    with pytest.raises(InvalidParamsError):
        presentation_from_texts(2, ["x", "y"], ["x"])  # degree 1 relator
    with pytest.raises(InvalidParamsError):
        presentation_from_texts(2, ["x", "y"], ["x*y*x"])  # degree 3
    pres = presentation_from_texts(2, ["x", "y"], ["x*y + y*x"])
    assert pres.relator_texts() == ["y*x + x*y"]
