"""The rewriting method: reduction, critical monomials, confluence graphs,
PBW certificates, DOT export.

Counts and terminal vertices reproduce the published confluence analysis
of the superpythagorean and level-2 presentations; the census formula per
type at rank d is (d-1) + 3*C(d-1,2) + (d-1) + C(d-1,3)."""

from __future__ import annotations

import math
import random

import pytest

from koszul_lab.config import Budget
from koszul_lab.constructions import rigid_level2, superpythagorean
from koszul_lab.errors import BudgetExceededError
from koszul_lab.freealg import NcPoly, poly_text, presentation_from_texts
from koszul_lab.graded import realize
from koszul_lab.rewriting import (
    RewritingSystem,
    certify_pbw,
    confluence_graph,
    critical_monomials,
    graph_to_dot,
    reduce_poly,
    reduced_monomial_counts,
)


def census(d: int) -> int:
    c2 = math.comb(d - 1, 2)
    return (d - 1) + 3 * c2 + (d - 1) + math.comb(d - 1, 3)


def probe_presentation():
    return presentation_from_texts(2, ["x", "y", "z", "t"], ["z*y = t*z", "z*x"])


def test_reduce_single_step_relation():
    pres = superpythagorean(3)
    system = RewritingSystem.from_presentation(pres)
    # a2*a2 -> t*a2  (indices: t=0, a2=1)
    out = reduce_poly(system, NcPoly.monomial(2, (1, 1)))
    assert out == NcPoly.monomial(2, (0, 1))


def test_reduce_ttt_level2():
    system = RewritingSystem.from_presentation(rigid_level2(3))
    assert reduce_poly(system, NcPoly.monomial(2, (0, 0, 0))).is_zero()


def test_reduce_already_reduced():
    system = RewritingSystem.from_presentation(superpythagorean(3))
    poly = NcPoly.monomial(2, (0, 1, 2))  # t a2 a3 is reduced
    assert reduce_poly(system, poly) == poly


def test_reduce_idempotent_random():
    system = RewritingSystem.from_presentation(superpythagorean(4))
    rng = random.Random(21)
    for _ in range(30):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            w = tuple(rng.randrange(4) for _ in range(rng.randint(0, 4)))
            terms[w] = 1
        poly = NcPoly(2, terms)
        once = reduce_poly(system, poly)
        assert reduce_poly(system, once) == once


def test_critical_monomials_superpythagorean_census():
    # d=3: 7 criticals of types (1)-(6) with multiplicities (2,1,1,2,0,1)
    pres = superpythagorean(3)
    system = RewritingSystem.from_presentation(pres)
    crits = critical_monomials(system)
    assert len(crits) == census(3) == 7
    # classify at d=3: t=0, a2=1, a3=2
    type1 = [w for w in crits if w[0] == w[1] == w[2] and w[0] != 0]
    type2 = [w for w in crits if w[0] == w[1] and w[2] != 0 and w[2] < w[0]]
    type3 = [w for w in crits if w[1] == w[2] and w[1] != 0 and w[0] > w[1]]
    type4 = [w for w in crits if w[0] == w[1] and w[0] != 0 and w[2] == 0]
    type5 = [w for w in crits if 0 < w[2] < w[1] < w[0]]
    type6 = [w for w in crits if w[2] == 0 and 0 < w[1] < w[0]]
    assert (len(type1), len(type2), len(type3), len(type4), len(type5), len(type6)) == (2, 1, 1, 2, 0, 1)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_critical_census_formula(d):
    system = RewritingSystem.from_presentation(superpythagorean(d))
    assert len(critical_monomials(system)) == census(d)


def test_critical_monomials_level2():
    # adds type (1') ttt and (3') a_i t t: 7 + 1 + 2 = 10 at d=3
    system = RewritingSystem.from_presentation(rigid_level2(3))
    crits = critical_monomials(system)
    assert len(crits) == 10
    assert (0, 0, 0) in crits
    assert (1, 0, 0) in crits and (2, 0, 0) in crits


def test_critical_monomials_empty():
    pres = presentation_from_texts(2, ["x", "y"], [])
    system = RewritingSystem.from_presentation(pres)
    assert critical_monomials(system) == []


def test_type5_graph_unique_terminal_sorted_word():
    # alpha_k alpha_j alpha_i -> alpha_i alpha_j alpha_k, d = 4 needed
    pres = superpythagorean(4)
    system = RewritingSystem.from_presentation(pres)
    g = confluence_graph(system, (3, 2, 1))
    assert g.confluent
    assert g.terminal_polys() == [NcPoly.monomial(2, (1, 2, 3))]


def test_type1_graph_superpythagorean():
    # alpha_i^3 -> t t alpha_i with 5 vertices (paper figure)
    pres = superpythagorean(3)
    system = RewritingSystem.from_presentation(pres)
    g = confluence_graph(system, (1, 1, 1))
    assert g.confluent
    assert g.terminal_polys() == [NcPoly.monomial(2, (0, 0, 1))]


def test_type1_graph_level2_ends_at_zero():
    system = RewritingSystem.from_presentation(rigid_level2(3))
    g = confluence_graph(system, (1, 1, 1))
    assert g.confluent
    assert g.terminal_polys()[0].is_zero()


def test_type1prime_two_parallel_edges_to_zero():
    system = RewritingSystem.from_presentation(rigid_level2(3))
    g = confluence_graph(system, (0, 0, 0))
    assert len(g.vertices) == 2 and len(g.edges) == 2
    assert g.confluent and g.terminal_polys()[0].is_zero()
    assert {(e[0], e[1]) for e in g.edges} == {(0, 1)}


def test_type3prime_terminal_zero():
    system = RewritingSystem.from_presentation(rigid_level2(3))
    g = confluence_graph(system, (1, 0, 0))  # a2 t t
    assert g.confluent and g.terminal_polys()[0].is_zero()


@pytest.mark.parametrize("d", [3, 4, 5])
def test_certify_superpythagorean_pbw(d):
    cert = certify_pbw(superpythagorean(d), N=8)
    assert cert.is_pbw
    assert len(cert.graphs) == census(d)
    assert all(g.confluent for g in cert.graphs)


@pytest.mark.parametrize("d", [3, 4])
def test_certify_level2_pbw(d):
    cert = certify_pbw(rigid_level2(d), N=8)
    assert cert.is_pbw


def test_commutative_polynomial_ring_pbw():
    # F_2<x,y | yx - xy> with x < y: reduced monomials are x^a y^b
    pres = presentation_from_texts(2, ["x", "y"], ["y*x = x*y"])
    cert = certify_pbw(pres, N=6)
    assert cert.is_pbw
    assert cert.reduced_counts == [1, 2, 3, 4, 5, 6, 7]


def test_probe_not_pbw_under_declared_order():
    # declared order makes tz the leading word of zy - tz; the single
    # critical word tzx reduces to both zyx and 0
    pres = probe_presentation()
    cert = certify_pbw(pres, N=4)
    assert not cert.is_pbw
    assert cert.witness == (3, 2, 0)
    bad = [g for g in cert.graphs if not g.confluent]
    assert len(bad) == 1
    terminals = bad[0].terminal_polys()
    assert len(terminals) == 2
    assert any(t.is_zero() for t in terminals)


def test_probe_pbw_under_reordered_generators():
    pres = probe_presentation()
    order = pres.order_from_names(["x", "y", "t", "z"])
    cert = certify_pbw(pres, order, N=8)
    assert cert.is_pbw
    assert len(cert.graphs) == 0  # no overlaps at all
    assert cert.reduced_counts == realize(pres, 8).dims


def test_reduced_counts_match_dims_iff_pbw():
    cases = [
        (superpythagorean(3), None, True),
        (rigid_level2(3), None, True),
        (probe_presentation(), None, False),
    ]
    for pres, order, expect_pbw in cases:
        cert = certify_pbw(pres, order, N=6)
        dims = realize(pres, 6).dims
        assert cert.is_pbw == expect_pbw
        assert (cert.reduced_counts == dims) == expect_pbw
        # reduced monomials always span: counts dominate dims degreewise
        assert all(c >= d for c, d in zip(cert.reduced_counts, dims))


def test_reduced_counts_dp_against_brute_force():
    import itertools

    pres = rigid_level2(3)
    system = RewritingSystem.from_presentation(pres)
    counts = reduced_monomial_counts(system, 5)
    leads = set(system.rules)
    for n in range(6):
        brute = sum(
            1
            for w in itertools.product(range(3), repeat=n)
            if not any(w[i: i + 2] in leads for i in range(n - 1))
        )
        assert counts[n] == brute


def test_graphs_are_acyclic():
    for pres in (superpythagorean(4), rigid_level2(3)):
        system = RewritingSystem.from_presentation(pres)
        for m in critical_monomials(system):
            g = confluence_graph(system, m)
            # BFS discovery order gives a topological-like order; verify no
            # edge ever returns to an earlier-closed vertex creating a cycle
            # by checking reachability cannot revisit the source
            assert all(dst != 0 for _, dst, _, _ in g.edges)
            out_degree = {i: 0 for i in range(len(g.vertices))}
            for src, _, _, _ in g.edges:
                out_degree[src] += 1
            for t in g.terminals:
                assert out_degree[t] == 0


def test_graph_vertex_budget():
    system = RewritingSystem.from_presentation(superpythagorean(3))
    with pytest.raises(BudgetExceededError):
        confluence_graph(system, (1, 1, 1), budget=Budget(graph_vertex_cap=2))


def test_dot_export_shape():
    pres = superpythagorean(3)
    system = RewritingSystem.from_presentation(pres)
    g = confluence_graph(system, (1, 1, 1))
    dot = graph_to_dot(g, system, title="demo")
    assert dot.startswith('digraph "demo"')
    assert "peripheries=2" in dot
    assert 't*t*a2' in dot
    # deterministic
    assert dot == graph_to_dot(g, system, title="demo")
