"""Minimal resolutions and Betti tables against series-inversion oracles
and hand-computed low steps; linear-resolution verdicts including a
non-Koszul witness; Hilbert/Poincare inversion."""

from __future__ import annotations

import pytest
import sympy

from koszul_lab.constructions import (
    demushkin1,
    free_cohomology,
    poly_t,
    rigid_level2,
    superpythagorean,
)
from koszul_lab.errors import InvalidParamsError
from koszul_lab.freealg import presentation_from_texts
from koszul_lab.graded import realize
from koszul_lab.ideals import ideal_from_subspace
from koszul_lab.linalg import Subspace
from koszul_lab.resolutions import (
    betti_table,
    linear_resolution_check,
    module_augmentation,
    module_ideal,
    module_quotient,
    module_trivial,
    poincare_from_hilbert,
)


def series_inverse_diagonal(dims, n):
    """Oracle: coefficients of 1/h(-z) via sympy series arithmetic."""
    z = sympy.symbols("z")
    h = sum(c * z ** k for k, c in enumerate(dims))
    inv = sympy.series(1 / h.subs(z, -z), z, 0, n + 1).removeO()
    return [int(sympy.expand(inv).coeff(z, k)) for k in range(n + 1)]


def test_betti_K_over_free_diagonal_and_hand_values():
    A = realize(free_cohomology(2, 2), 8)
    table = betti_table(A, module_trivial(A, 6), 6, 6)
    assert table.diagonal() == [1, 2, 4, 8, 16, 32, 64]
    assert table.diagonal() == series_inverse_diagonal(A.dims, 6)
    # hand resolution at low steps: beta_1 = dim V = 2, beta_2 = dim R = 4
    assert table.entry(1, 1) == 2
    assert table.entry(2, 2) == 4
    assert all(j == i for (i, j) in table.entries)


def test_betti_K_over_free_p3():
    A = realize(free_cohomology(2, 3), 8)
    table = betti_table(A, module_trivial(A, 5), 5, 5)
    assert table.diagonal() == [1, 2, 4, 8, 16, 32]


def test_betti_K_over_demushkin():
    A = realize(demushkin1(1, 2), 8)
    table = betti_table(A, module_trivial(A, 6), 6, 6)
    assert table.diagonal() == [i + 1 for i in range(7)]
    assert table.diagonal() == series_inverse_diagonal(A.dims, 6)


def test_betti_zero_zero_is_one():
    for pres in (superpythagorean(3), rigid_level2(3), poly_t(2)):
        A = realize(pres, 6)
        table = betti_table(A, module_trivial(A, 3), 3, 3)
        assert table.entry(0, 0) == 1


def test_linear_resolution_augmentation_over_free():
    A = realize(free_cohomology(2, 2), 8)
    verdict, table = linear_resolution_check(A, module_augmentation(A, 6), 6, 6)
    assert verdict.holds
    assert table.min_degree == 1


def test_linear_resolution_filtration_members_level2():
    # every ideal of the verified Koszul filtration L(A) is a Koszul module
    from koszul_lab.linalg import enumerate_subspaces

    A = realize(rigid_level2(3), 8)
    for W in enumerate_subspaces(3, 2):
        if W.dim == 0:
            continue
        I = ideal_from_subspace(A, W)
        verdict, _ = linear_resolution_check(A, module_ideal(I, 6), 5, 6)
        assert verdict.holds, W.rows


def test_non_koszul_witness():
    # screened counterexample: F_2<x,y,z | xy, yz, zz + xx> has
    # Tor_(3,4) != 0, and the ideal (x) over it has a non-linear
    # resolution with witness at (i, j) = (1, 3)
    pres = presentation_from_texts(2, ["x", "y", "z"], ["x*y", "y*z", "z*z + x*x"])
    A = realize(pres, 8)
    verdict, table = linear_resolution_check(A, module_trivial(A, 6), 6, 6)
    assert verdict.status == "fails"
    assert verdict.witness == {"i": 3, "j": 4, "betti": 1, "linear_j": 3}
    W = Subspace.from_vectors(2, 3, [(1, 0, 0)])
    I = ideal_from_subspace(A, W)
    verdict, _ = linear_resolution_check(A, module_ideal(I, 6), 5, 6)
    assert verdict.status == "fails"
    assert verdict.witness["i"] == 1 and verdict.witness["j"] == 3


def test_linear_resolution_rejects_mixed_generation_degrees():
    # a module generated in two degrees is not a valid input
    pres = presentation_from_texts(2, ["x", "y"], ["x*y", "y*x", "x*x", "y*y"])
    A = realize(pres, 6)
    # quotient A/(x): generated in degree 0 but with extra generator in
    # degree 1 is still cyclic; build an artificial mixed module instead
    from koszul_lab.resolutions import DegreewiseModule
    from koszul_lab.linalg import row_backend

    dims = [1, 2, 0, 0]
    bk1 = row_backend(2, 2)
    acts = [
        [[bk1.from_dict({})] for _ in range(2)],  # degree 0 -> 1: zero maps
        [[row_backend(2, 0).from_dict({})] * 2 for _ in range(2)],
        [[] for _ in range(2)],
    ]
    module = DegreewiseModule(A, dims, acts, "mixed")
    with pytest.raises(InvalidParamsError):
        linear_resolution_check(A, module, 2, 3)


def test_quotient_module_resolution():
    # A/(t) over F_2[t]: 0 -> A(-1) -> A -> A/(t) -> 0, Betti (1,1)
    A = realize(poly_t(2), 6)
    I = ideal_from_subspace(A, Subspace.full(2, 1))
    table = betti_table(A, module_quotient(A, I, 4), 4, 4)
    assert table.entries == {(0, 0): 1, (1, 1): 1}
    assert table.terminated_at is None or table.terminated_at == 2


def test_quotient_module_cyclic_over_level2():
    # A/I is generated in degree 0 for every degree-1 ideal I
    A = realize(rigid_level2(3), 8)
    I = ideal_from_subspace(A, Subspace.from_vectors(2, 3, [(1, 0, 0)]))
    table = betti_table(A, module_quotient(A, I, 5), 4, 5)
    assert table.min_degree == 0
    assert table.entry(0, 0) == 1


def test_ideal_resolution_terminates_for_principal_over_poly():
    # (t) over F_2[t] is free: single generator, no syzygies
    A = realize(poly_t(2), 6)
    I = ideal_from_subspace(A, Subspace.full(2, 1))
    table = betti_table(A, module_ideal(I, 5), 4, 5)
    assert table.entries == {(0, 1): 1}


def test_poincare_inversion_trivial_and_geometric():
    assert poincare_from_hilbert([1, 0, 0, 0], 3) == [1, 0, 0, 0]
    # h = (1, d, 0, ...) -> p_i = d^i
    for d in (1, 2, 3):
        assert poincare_from_hilbert([1, d, 0, 0, 0, 0, 0], 6) == [d ** i for i in range(7)]
    # h of demushkin1(k=1) = (1, 2, 1) -> p_i = i + 1
    assert poincare_from_hilbert([1, 2, 1, 0, 0, 0, 0], 6) == [i + 1 for i in range(7)]


def test_poincare_matches_sympy_oracle():
    for dims in ([1, 3, 4, 4, 4, 4, 4], [1, 3, 3, 1, 0, 0, 0], [1, 1, 1, 1, 1, 1, 1]):
        assert poincare_from_hilbert(dims, 6) == series_inverse_diagonal(dims, 6)


def test_poincare_requires_unit_constant_term():
    with pytest.raises(InvalidParamsError):
        poincare_from_hilbert([2, 1], 3)


def test_hilbert_poincare_identity_for_linear_algebras():
    # whenever K has a linear resolution in the window, the Betti diagonal
    # equals the inverted Hilbert series exactly
    for pres in (free_cohomology(2, 2), demushkin1(1, 2), rigid_level2(3),
                 superpythagorean(3), poly_t(2)):
        A = realize(pres, 8)
        verdict, table = linear_resolution_check(A, module_trivial(A, 6), 6, 6)
        assert verdict.holds
        assert table.diagonal() == poincare_from_hilbert(A.dims, 6)
