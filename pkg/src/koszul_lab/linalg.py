"""Exact dense linear algebra over prime fields F_p.

Vectors are tuples of ints in [0, p); matrices are immutable grids of such
rows.  Everything is deterministic: reduced row echelon form (RREF) is the
canonical representative of a row space, and subspaces compare equal exactly
when their RREF bases coincide.

For p = 2 the elimination kernels pack each row into a single Python int
(bit i = column i) and eliminate with XOR; results are bit-identical to the
generic dense path (see tests), just faster.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .config import DEFAULT_BUDGET, Budget
from .errors import BudgetExceededError, InvalidParamsError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise InvalidParamsError(f"modulus {p} is not prime")


def inverse_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


# ---------------------------------------------------------------------------
# Packing helpers (p = 2)

def pack_row(row: Sequence[int]) -> int:
    word = 0
    for i, v in enumerate(row):
        if v:
            word |= 1 << i
    return word


def unpack_row(word: int, ncols: int) -> tuple[int, ...]:
    return tuple((word >> i) & 1 for i in range(ncols))


# ---------------------------------------------------------------------------
# Echelon accumulators

class EchelonGF2:
    """Incremental row echelon form over F_2 with int-packed rows.

    With reduced=True the stored rows are kept fully back-eliminated, so
    ``rows`` is the canonical RREF at any time.  Pivot of a row is its
    lowest set bit (= leftmost column).
    """

    __slots__ = ("reduced", "pivot_rows")

    def __init__(self, reduced: bool = True):
        self.reduced = reduced
        self.pivot_rows: dict[int, int] = {}  # pivot column -> packed row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def residual(self, word: int) -> int:
        """Fully reduce against every pivot (works in both modes)."""
        out = 0
        rows = self.pivot_rows
        w = word
        while w:
            low = w & -w
            r = rows.get(low.bit_length() - 1)
            if r is None:
                out |= low
                w &= w - 1
            else:
                w ^= r
        return out

    def insert(self, word: int) -> bool:
        w = self.residual(word)
        if w == 0:
            return False
        piv = (w & -w).bit_length() - 1
        if self.reduced:
            for q, r in self.pivot_rows.items():
                if (r >> piv) & 1:
                    self.pivot_rows[q] = r ^ w
        self.pivot_rows[piv] = w
        return True

    def contains(self, word: int) -> bool:
        return self.residual(word) == 0

    def copy(self) -> "EchelonGF2":
        out = EchelonGF2(reduced=self.reduced)
        out.pivot_rows = dict(self.pivot_rows)
        return out

    def sorted_rows(self) -> list[tuple[int, int]]:
        return sorted(self.pivot_rows.items())


class EchelonGFP:
    """Incremental RREF over F_p (p odd) with rows as lists of ints."""

    __slots__ = ("p", "ncols", "reduced", "pivot_rows")

    def __init__(self, p: int, ncols: int, reduced: bool = True):
        self.p = p
        self.ncols = ncols
        self.reduced = reduced
        self.pivot_rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def residual(self, row: Sequence[int]) -> list[int]:
        p = self.p
        w = list(row)
        for piv in range(self.ncols):
            c = w[piv]
            if c == 0:
                continue
            r = self.pivot_rows.get(piv)
            if r is None:
                continue
            # r has 1 at piv
            for j in range(piv, self.ncols):
                rj = r[j]
                if rj:
                    w[j] = (w[j] - c * rj) % p
        return w

    def insert(self, row: Sequence[int]) -> bool:
        p = self.p
        w = self.residual(row)
        piv = next((i for i, v in enumerate(w) if v), None)
        if piv is None:
            return False
        inv = inverse_mod(w[piv], p)
        w = [(v * inv) % p for v in w]
        if self.reduced:
            for q, r in self.pivot_rows.items():
                c = r[piv]
                if c:
                    self.pivot_rows[q] = [
                        (rv - c * wv) % p for rv, wv in zip(r, w)
                    ]
        self.pivot_rows[piv] = w
        return True

    def contains(self, row: Sequence[int]) -> bool:
        return all(v == 0 for v in self.residual(row))

    def copy(self) -> "EchelonGFP":
        out = EchelonGFP(self.p, self.ncols, reduced=self.reduced)
        out.pivot_rows = {k: list(v) for k, v in self.pivot_rows.items()}
        return out

    def sorted_rows(self) -> list[tuple[int, list[int]]]:
        return sorted(self.pivot_rows.items())


def make_echelon(p: int, ncols: int, reduced: bool = True):
    if p == 2:
        return EchelonGF2(reduced=reduced)
    return EchelonGFP(p, ncols, reduced=reduced)


# ---------------------------------------------------------------------------
# Row backends: uniform packed-row interface for the graded engine.
# GF(2) rows are single ints (bit i = column i); odd-p rows are tuples.

class GF2RowBackend:
    p = 2

    def __init__(self, ncols: int):
        self.ncols = ncols

    def from_dict(self, d: dict[int, int]) -> int:
        w = 0
        for i, c in d.items():
            if c % 2:
                w |= 1 << i
        return w

    def support(self, row: int):
        w = row
        while w:
            low = w & -w
            yield low.bit_length() - 1, 1
            w ^= low

    def get(self, row: int, i: int) -> int:
        return (row >> i) & 1

    def is_zero(self, row: int) -> bool:
        return row == 0

    def to_dense(self, row: int) -> tuple[int, ...]:
        return unpack_row(row, self.ncols)

    def from_dense(self, dense: Sequence[int]) -> int:
        return pack_row(dense)

    def unit(self, i: int) -> int:
        return 1 << i

    def vec_mat(self, vec: int, rows: Sequence[int]) -> int:
        """Row vector times matrix: combine matrix rows at vec's support."""
        acc = 0
        w = vec
        while w:
            low = w & -w
            acc ^= rows[low.bit_length() - 1]
            w ^= low
        return acc

    def add_scaled(self, r1: int, r2: int, c: int) -> int:
        return r1 ^ r2 if c % 2 else r1

    def echelon(self, reduced: bool = True):
        return EchelonGF2(reduced=reduced)


class GFPRowBackend:
    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols

    def from_dict(self, d: dict[int, int]) -> tuple[int, ...]:
        row = [0] * self.ncols
        for i, c in d.items():
            row[i] = c % self.p
        return tuple(row)

    def support(self, row: Sequence[int]):
        for i, c in enumerate(row):
            if c:
                yield i, c

    def get(self, row: Sequence[int], i: int) -> int:
        return row[i]

    def is_zero(self, row: Sequence[int]) -> bool:
        return all(v == 0 for v in row)

    def to_dense(self, row: Sequence[int]) -> tuple[int, ...]:
        return tuple(row)

    def from_dense(self, dense: Sequence[int]) -> tuple[int, ...]:
        return tuple(v % self.p for v in dense)

    def unit(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.ncols))

    def vec_mat(self, vec: Sequence[int], rows: Sequence[Sequence[int]]):
        p = self.p
        width = len(rows[0]) if rows else 0
        acc = [0] * width
        for i, c in enumerate(vec):
            if c:
                r = rows[i]
                for j in range(width):
                    if r[j]:
                        acc[j] = (acc[j] + c * r[j]) % p
        return tuple(acc)

    def add_scaled(self, r1: Sequence[int], r2: Sequence[int], c: int):
        p = self.p
        return tuple((a + c * b) % p for a, b in zip(r1, r2))

    def echelon(self, reduced: bool = True):
        return EchelonGFP(self.p, self.ncols, reduced=reduced)


def row_backend(p: int, ncols: int):
    return GF2RowBackend(ncols) if p == 2 else GFPRowBackend(p, ncols)


# ---------------------------------------------------------------------------
# Matrix / RREF / kernel (public dense surface)

@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over F_p."""

    p: int
    nrows: int
    ncols: int
    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(p: int, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "Matrix":
        check_prime(p)
        norm = tuple(tuple(v % p for v in row) for row in rows)
        if norm:
            width = len(norm[0])
            if any(len(r) != width for r in norm):
                raise InvalidParamsError("ragged rows")
            if ncols is not None and ncols != width:
                raise InvalidParamsError("ncols does not match row width")
            ncols = width
        elif ncols is None:
            ncols = 0
        return Matrix(p, len(norm), ncols, norm)

    @staticmethod
    def identity(p: int, n: int) -> "Matrix":
        return Matrix.from_rows(
            p, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n
        )

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]


def rref_rows(p: int, rows: Iterable[Sequence[int]], ncols: int):
    """Canonical RREF of a row collection.

    Returns (rows, pivots): nonzero RREF rows sorted by pivot column, and
    the increasing tuple of pivot columns.
    """
    ech = make_echelon(p, ncols)
    if p == 2:
        for r in rows:
            ech.insert(pack_row(r))
        out = [unpack_row(w, ncols) for _, w in ech.sorted_rows()]
    else:
        for r in rows:
            ech.insert(r)
        out = [tuple(w) for _, w in ech.sorted_rows()]
    pivots = tuple(piv for piv, _ in ech.sorted_rows())
    return tuple(out), pivots


def rref(m: Matrix):
    """RREF of a Matrix.  Returns (Matrix, pivot_columns, rank)."""
    rows, pivots = rref_rows(m.p, m.entries, m.ncols)
    return Matrix(m.p, len(rows), m.ncols, rows), pivots, len(pivots)


def kernel_rows(p: int, rows: Sequence[Sequence[int]], ncols: int):
    """Canonical basis of the right null space {v : rows . v = 0}.

    The kernel of the linear map F_p^ncols -> F_p^nrows given by row-vector
    dot products; returned as canonical RREF rows of length ncols.
    """
    red, pivots = rref_rows(p, rows, ncols)
    pivot_set = set(pivots)
    free_cols = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free_cols:
        v = [0] * ncols
        v[f] = 1
        for r, piv in zip(red, pivots):
            if r[f]:
                v[piv] = (-r[f]) % p
        basis.append(v)
    out, _ = rref_rows(p, basis, ncols)
    return out


def kernel_basis(m: Matrix) -> "Subspace":
    """Null space of m as a map v -> m . v  (v of length ncols)."""
    return Subspace(m.p, m.ncols, kernel_rows(m.p, m.entries, m.ncols))


def left_kernel_rows(p: int, rows: Sequence[Sequence[int]], ncols: int):
    """Canonical basis of {c : sum_i c_i row_i = 0} (left null space).

    Augment each row with a unit tail and eliminate; rows whose pivot lands
    in the tail have zero combination on the left, and their tails form the
    canonical RREF kernel basis.
    """
    nrows = len(rows)
    aug = []
    for i, r in enumerate(rows):
        tail = [0] * nrows
        tail[i] = 1
        aug.append(list(r) + tail)
    red, pivots = rref_rows(p, aug, ncols + nrows)
    out = [row[ncols:] for row, piv in zip(red, pivots) if piv >= ncols]
    return tuple(tuple(r) for r in out)


def left_kernel_packed(p: int, rows, ncols: int):
    """left_kernel_rows on packed rows, returning packed canonical rows.

    For p = 2 rows are ints (the tail occupies bits >= ncols); otherwise
    rows are dense sequences.  Output rows are sorted by pivot.
    """
    nrows = len(rows)
    if p == 2:
        ech = EchelonGF2(reduced=True)
        for i, r in enumerate(rows):
            ech.insert(r | (1 << (ncols + i)))
        return [row >> ncols for piv, row in ech.sorted_rows() if piv >= ncols]
    ech = EchelonGFP(p, ncols + nrows, reduced=True)
    for i, r in enumerate(rows):
        tail = [0] * nrows
        tail[i] = 1
        ech.insert(list(r) + tail)
    return [tuple(row[ncols:]) for piv, row in ech.sorted_rows() if piv >= ncols]


# ---------------------------------------------------------------------------
# Subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^ambient in canonical RREF form.

    ``rows`` are the RREF basis rows with strictly increasing pivots, so two
    Subspace values are equal iff they are the same subspace.
    """

    p: int
    ambient: int
    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_vectors(p: int, ambient: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows, _ = rref_rows(p, vectors, ambient)
        return Subspace(p, ambient, rows)

    @staticmethod
    def zero(p: int, ambient: int) -> "Subspace":
        return Subspace(p, ambient, ())

    @staticmethod
    def full(p: int, ambient: int) -> "Subspace":
        return Subspace.from_vectors(
            p, ambient, [[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)]
        )

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, v in enumerate(r) if v) for r in self.rows)

    def contains(self, vector: Sequence[int]) -> bool:
        return all(v == 0 for v in self.residual(vector))

    def residual(self, vector: Sequence[int]) -> tuple[int, ...]:
        p = self.p
        w = [v % p for v in vector]
        for r in self.rows:
            piv = next(i for i, v in enumerate(r) if v)
            c = w[piv]
            if c:
                for j in range(piv, self.ambient):
                    if r[j]:
                        w[j] = (w[j] - c * r[j]) % p
        return tuple(w)

    def coordinates(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Coefficients of vector in the RREF basis; raises if not contained."""
        coords = tuple(vector[piv] % self.p for piv in self.pivots())
        if not self.contains(vector):
            raise InvalidParamsError("vector not in subspace")
        return coords

    def sum(self, other: "Subspace") -> "Subspace":
        if (self.p, self.ambient) != (other.p, other.ambient):
            raise InvalidParamsError("subspaces in different ambient spaces")
        return Subspace.from_vectors(self.p, self.ambient, self.rows + other.rows)

    def add_vector(self, vector: Sequence[int]) -> "Subspace":
        return Subspace.from_vectors(self.p, self.ambient, self.rows + (tuple(vector),))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def key(self):
        return (len(self.rows), self.rows)


# ---------------------------------------------------------------------------
# Enumeration kernels

def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    assert num % den == 0
    return num // den


def count_subspaces(d: int, p: int, dim_filter: Optional[int] = None) -> int:
    if dim_filter is not None:
        return gaussian_binomial(d, dim_filter, p)
    return sum(gaussian_binomial(d, k, p) for k in range(d + 1))


def enumerate_subspaces(
    d: int,
    p: int,
    dim_filter: Optional[int] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> list[Subspace]:
    """All subspaces of F_p^d, one canonical representative each.

    Ordered by dimension, then pivot columns, then free entries; the total
    count is checked against the budget before any work happens.
    """
    check_prime(p)
    total = count_subspaces(d, p, dim_filter)
    if total > budget.max_enumeration:
        raise BudgetExceededError("subspace enumeration", total, budget.max_enumeration)
    dims = [dim_filter] if dim_filter is not None else list(range(d + 1))
    out: list[Subspace] = []
    for k in dims:
        if k == 0:
            out.append(Subspace.zero(p, d))
            continue
        for pivots in itertools.combinations(range(d), k):
            pivot_set = set(pivots)
            free_positions = [
                (i, j)
                for i in range(k)
                for j in range(pivots[i] + 1, d)
                if j not in pivot_set
            ]
            for assignment in itertools.product(range(p), repeat=len(free_positions)):
                rows = [[0] * d for _ in range(k)]
                for i in range(k):
                    rows[i][pivots[i]] = 1
                for (i, j), v in zip(free_positions, assignment):
                    rows[i][j] = v
                out.append(Subspace(p, d, tuple(tuple(r) for r in rows)))
    return out


def count_ordered_bases(d: int, p: int) -> int:
    n = 1
    for i in range(d):
        n *= p ** d - p ** i
    return n


def enumerate_bases(
    d: int,
    p: int = 2,
    budget: Budget = DEFAULT_BUDGET,
) -> list[tuple[tuple[int, ...], ...]]:
    """All unordered bases of F_p^d (p = 2 only, d capped by the budget).

    Each basis is a tuple of vectors sorted by their packed-bit encoding, so
    every unordered basis appears exactly once.
    """
    if p != 2:
        raise InvalidParamsError("basis enumeration is supported for p=2 only")
    if d > budget.basis_dim_cap:
        raise BudgetExceededError("basis enumeration dimension", d, budget.basis_dim_cap)
    total = count_ordered_bases(d, p)
    for i in range(2, d + 1):
        total //= i
    if total > budget.max_enumeration:
        raise BudgetExceededError("basis enumeration", total, budget.max_enumeration)

    out: list[tuple[tuple[int, ...], ...]] = []

    def extend(chosen: list[int], span: set[int], start: int):
        if len(chosen) == d:
            out.append(tuple(unpack_row(w, d) for w in chosen))
            return
        for w in range(start, 2 ** d):
            if w in span:
                continue
            extend(chosen + [w], span | {s ^ w for s in span}, w + 1)

    extend([], {0}, 1)
    return out
