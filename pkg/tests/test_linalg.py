"""Exact F_p linear algebra: RREF, kernels, subspace and basis enumeration.

Expected values come from independent oracles: row-space cardinality by
exhaustive combination counting, subspace counts by brute-force span
collection and by the Gaussian binomial product formula, basis counts by
ordered enumeration divided by d!.
"""

from __future__ import annotations

import itertools
import random

import pytest

from koszul_lab.config import Budget
from koszul_lab.errors import BudgetExceededError, InvalidParamsError
from koszul_lab.linalg import (
    Matrix,
    Subspace,
    count_ordered_bases,
    enumerate_bases,
    enumerate_subspaces,
    gaussian_binomial,
    kernel_basis,
    kernel_rows,
    left_kernel_rows,
    pack_row,
    rref,
    rref_rows,
    unpack_row,
)


def row_space_size(rows, p):
    """Oracle: number of distinct linear combinations of the rows."""
    seen = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        vec = tuple(
            sum(c * r[j] for c, r in zip(coeffs, rows)) % p
            for j in range(len(rows[0]))
        )
        seen.add(vec)
    return len(seen)


def naive_rref_gf2(rows, ncols):
    """Independent dense text-book RREF over F_2 (no packing)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                mat[i] = [(a + b) % 2 for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def test_rref_identity_f2():
    m = Matrix.identity(2, 2)
    red, pivots, rank = rref(m)
    assert red.entries == ((1, 0), (0, 1))
    assert pivots == (0, 1)
    assert rank == 2


def test_rref_duplicate_rows_collapse():
    m = Matrix.from_rows(2, [(1, 1), (1, 1)])
    red, pivots, rank = rref(m)
    assert red.entries == ((1, 1),)
    assert rank == 1


def test_rref_rank_matches_row_space_cardinality_oracle():
    rng = random.Random(401)
    for _ in range(25):
        rows = [tuple(rng.randrange(3) for _ in range(4)) for _ in range(4)]
        _, _, rank = rref(Matrix.from_rows(3, rows))
        assert row_space_size(rows, 3) == 3 ** rank


def test_rref_idempotent():
    rng = random.Random(402)
    for p in (2, 3, 5):
        for _ in range(10):
            rows = [tuple(rng.randrange(p) for _ in range(5)) for _ in range(3)]
            red1, pivots1 = rref_rows(p, rows, 5)
            red2, pivots2 = rref_rows(p, red1, 5)
            assert red1 == red2 and pivots1 == pivots2


def test_packed_gf2_matches_dense_reference():
    rng = random.Random(403)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 7)
        rows = [tuple(rng.randrange(2) for _ in range(ncols)) for _ in range(nrows)]
        assert rref_rows(2, rows, ncols) == naive_rref_gf2(rows, ncols)


def test_pack_unpack_roundtrip():
    rng = random.Random(404)
    for _ in range(20):
        row = tuple(rng.randrange(2) for _ in range(11))
        assert unpack_row(pack_row(row), 11) == row


def test_kernel_identity_is_zero():
    assert kernel_basis(Matrix.identity(2, 3)).dim == 0


def test_kernel_zero_matrix_is_full():
    m = Matrix.from_rows(2, [(0, 0, 0), (0, 0, 0)], 3)
    assert kernel_basis(m).dim == 3


def test_kernel_exhaustive_f2():
    # m = [[1,1,0]]: kernel as v with m.v = 0, checked over all 8 vectors
    m = Matrix.from_rows(2, [(1, 1, 0)])
    ker = kernel_basis(m)
    expected = {
        v
        for v in itertools.product(range(2), repeat=3)
        if (v[0] + v[1]) % 2 == 0
    }
    spanned = set()
    for coeffs in itertools.product(range(2), repeat=ker.dim):
        vec = tuple(
            sum(c * r[j] for c, r in zip(coeffs, ker.rows)) % 2 for j in range(3)
        )
        spanned.add(vec)
    assert spanned == expected
    assert ker.dim == 2
    assert ker.contains((1, 1, 0)) and ker.contains((0, 0, 1))


def test_rank_nullity_randomized():
    rng = random.Random(405)
    for p in (2, 3):
        for _ in range(15):
            nrows, ncols = rng.randint(1, 5), rng.randint(1, 6)
            rows = [tuple(rng.randrange(p) for _ in range(ncols)) for _ in range(nrows)]
            _, pivots = rref_rows(p, rows, ncols)
            ker = kernel_rows(p, rows, ncols)
            assert len(pivots) + len(ker) == ncols


def test_left_kernel_definition():
    rng = random.Random(406)
    for p in (2, 3):
        for _ in range(15):
            nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
            rows = [tuple(rng.randrange(p) for _ in range(ncols)) for _ in range(nrows)]
            for combo in left_kernel_rows(p, rows, ncols):
                acc = [0] * ncols
                for c, r in zip(combo, rows):
                    for j in range(ncols):
                        acc[j] = (acc[j] + c * r[j]) % p
                assert all(v == 0 for v in acc)


def brute_force_subspace_count(d, p):
    """Oracle: collect spans of all subsets of F_p^d (tiny d only)."""
    vectors = list(itertools.product(range(p), repeat=d))
    spans = set()
    for size in range(d + 1):
        for subset in itertools.combinations(vectors, size):
            spans.add(Subspace.from_vectors(p, d, subset).rows)
    return len(spans)


def test_enumerate_subspaces_d2_p2():
    subs = enumerate_subspaces(2, 2)
    assert len(subs) == 5  # zero, three lines, full
    assert len(subs) == brute_force_subspace_count(2, 2)


def test_enumerate_subspaces_d3_p2_gaussian():
    subs = enumerate_subspaces(3, 2)
    assert len(subs) == 16  # 1 + 7 + 7 + 1
    assert sum(gaussian_binomial(3, k, 2) for k in range(4)) == 16
    assert len(subs) == brute_force_subspace_count(3, 2)


def test_enumerate_subspaces_d0():
    subs = enumerate_subspaces(0, 2)
    assert len(subs) == 1 and subs[0].dim == 0


def test_enumerate_subspaces_p3():
    subs = enumerate_subspaces(2, 3)
    assert len(subs) == sum(gaussian_binomial(2, k, 3) for k in range(3)) == 6


def test_enumerated_subspaces_canonical_and_distinct():
    for d, p in ((3, 2), (2, 3)):
        subs = enumerate_subspaces(d, p)
        seen = set()
        for s in subs:
            red, _ = rref_rows(p, s.rows, d)
            assert red == s.rows  # already canonical
            assert s.rows not in seen
            seen.add(s.rows)


def test_enumerate_subspaces_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_subspaces(6, 2, budget=Budget(max_enumeration=10))


def ordered_basis_count_brute(d):
    """Oracle: count ordered independent tuples by DFS over F_2^d."""
    vectors = [tuple(unpack_row(w, d)) for w in range(1, 2 ** d)]

    def count(chosen_span, depth):
        if depth == d:
            return 1
        total = 0
        for v in vectors:
            packed = pack_row(v)
            if packed in chosen_span:
                continue
            total += count(chosen_span | {s ^ packed for s in chosen_span}, depth + 1)
        return total

    return count({0}, 0)


def test_enumerate_bases_counts():
    assert len(enumerate_bases(1)) == 1
    assert enumerate_bases(1) == [((1,),)]
    assert len(enumerate_bases(2)) == 3
    assert ordered_basis_count_brute(2) // 2 == 3
    assert len(enumerate_bases(3)) == 28
    assert ordered_basis_count_brute(3) == 168 and 168 // 6 == 28
    assert count_ordered_bases(3, 2) == 168


def test_enumerate_bases_are_bases_and_unique():
    seen = set()
    for basis in enumerate_bases(3):
        s = Subspace.from_vectors(2, 3, basis)
        assert s.dim == 3
        key = frozenset(basis)
        assert key not in seen
        seen.add(key)


def test_enumerate_bases_caps():
    with pytest.raises(BudgetExceededError):
        enumerate_bases(5, 2)
    with pytest.raises(InvalidParamsError):
        enumerate_bases(2, 3)


def test_subspace_membership_and_sum():
    s = Subspace.from_vectors(2, 3, [(1, 1, 0)])
    assert s.contains((1, 1, 0)) and not s.contains((1, 0, 0))
    t = s.add_vector((0, 0, 1))
    assert t.dim == 2 and t.contains((1, 1, 1))
    assert s.sum(t) == t
    assert t.contains_subspace(s)


def test_subspace_coordinates():
    s = Subspace.from_vectors(3, 3, [(1, 0, 2), (0, 1, 1)])
    v = (2, 1, 2)  # 2*(1,0,2) + 1*(0,1,1) = (2,1,5%3=2)
    assert s.coordinates(v) == (2, 1)
    with pytest.raises(InvalidParamsError):
        s.coordinates((0, 0, 1))


def test_matrix_validation():
    with pytest.raises(InvalidParamsError):
        Matrix.from_rows(4, [(1, 0)])  # 4 not prime
    with pytest.raises(InvalidParamsError):
        Matrix.from_rows(2, [(1, 0), (1,)])  # ragged
