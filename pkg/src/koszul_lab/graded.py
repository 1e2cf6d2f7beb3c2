"""Semantic realization of quadratic presentations as truncated graded
algebras, plus cyclic quotient modules A/AU.

Degree n+1 is computed iteratively as the cokernel of the image of
A_{n-1} (x) R inside A_n (x) V under multiply-tensor-identity; working
coordinates therefore stay at dims[n] * d instead of d^n.  Coordinates are
sorted in descending monomial order so that elimination pivots are the
greatest words and the surviving basis representatives are the least
preimage words, deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .config import DEFAULT_BUDGET, Budget
from .errors import BudgetExceededError, DegreeOverflowError, InvalidParamsError
from .freealg import (
    MonomialOrder,
    NcPoly,
    NormalizedBasis,
    QuadraticPresentation,
    Word,
    normalize_relators,
    poly_text,
)
from .linalg import Subspace, row_backend


def default_truncation(num_generators: int) -> int:
    return max(2 * num_generators + 2, 8)


class _Stage:
    """Elimination data for one degree step.

    Columns are (parent basis index, generator) pairs sorted in descending
    word order, so pivots are the greatest words; surviving (non-pivot)
    columns become the basis, indexed in ascending word order.
    """

    __slots__ = ("col_index", "echelon", "col_to_basis", "backend")

    def __init__(self, col_index, echelon, col_to_basis, backend):
        self.col_index = col_index
        self.echelon = echelon
        self.col_to_basis = col_to_basis
        self.backend = backend

    def class_of_column(self, col: int, target_backend):
        residual = self.echelon.residual(self.backend.unit(col))
        acc: dict[int, int] = {}
        for idx, coeff in self.backend.support(residual):
            acc[self.col_to_basis[idx]] = coeff
        return target_backend.from_dict(acc)


def _build_stage(p, columns_with_words, order, relation_rows, budget):
    """Shared cokernel step for algebra and module realization.

    columns_with_words: list of (column key, word); relation_rows is called
    with (col_index, backend) and must yield packed relation rows.
    Returns (stage, basis_words) with basis_words ascending.
    """
    if len(columns_with_words) > budget.max_realize_dim:
        raise BudgetExceededError(
            "realization working dimension", len(columns_with_words), budget.max_realize_dim
        )
    ordered = sorted(columns_with_words, key=lambda cw: order.key(cw[1]), reverse=True)
    col_index = {key: i for i, (key, _) in enumerate(ordered)}
    backend = row_backend(p, len(ordered))
    echelon = backend.echelon(reduced=True)
    for row in relation_rows(col_index, backend):
        echelon.insert(row)
    pivots = set(echelon.pivot_rows.keys())
    basis_cols = [i for i in range(len(ordered)) if i not in pivots]
    col_to_basis = {col: len(basis_cols) - 1 - k for k, col in enumerate(basis_cols)}
    basis_words = [ordered[col][1] for col in reversed(basis_cols)]
    return _Stage(col_index, echelon, col_to_basis, backend), basis_words


class GradedAlgebra:
    """A quadratic presentation realized up to a truncation degree.

    dims[n] and basis_words[n] (ascending monomial order) for 0 <= n <= N;
    right/left multiplication matrices per degree and generator are packed
    rows, built on demand and cached.  Immutable after construction.
    """

    def __init__(self, pres: QuadraticPresentation, N: int, order: MonomialOrder,
                 normalized: NormalizedBasis, dims, basis_words, stages, budget: Budget):
        self.pres = pres
        self.N = N
        self.order = order
        self.normalized = normalized
        self.dims = dims
        self.basis_words = basis_words
        self._stages = stages
        self.budget = budget
        self._word_index = [{w: i for i, w in enumerate(words)} for words in basis_words]
        self._rmult: dict[int, list] = {}
        self._lmult: dict[int, list] = {}
        self.backends = [row_backend(pres.p, dim) for dim in dims]

    # -- basic queries ------------------------------------------------------

    @property
    def p(self) -> int:
        return self.pres.p

    @property
    def num_generators(self) -> int:
        return self.pres.num_generators

    @property
    def finite_dim_certified(self) -> bool:
        return any(d == 0 for d in self.dims)

    def hilbert_series(self) -> list[int]:
        return list(self.dims)

    def check_degree(self, n: int):
        if n < 0 or n > self.N:
            raise DegreeOverflowError(n, self.N)

    def word_index(self, n: int, word: Word) -> int:
        return self._word_index[n][word]

    # -- multiplication tables ------------------------------------------------

    def rmult(self, n: int):
        """Right multiplication matrices A_n -> A_{n+1}; rmult(n)[g][b] is
        the packed coordinate row of basis_b * g."""
        self.check_degree(n + 1)
        if n not in self._rmult:
            d = self.num_generators
            if self.dims[n] == 0:
                self._rmult[n] = [[] for _ in range(d)]
            else:
                stage = self._stages[n + 1]
                target = self.backends[n + 1]
                mats = [[None] * self.dims[n] for _ in range(d)]
                for g in range(d):
                    for b in range(self.dims[n]):
                        mats[g][b] = stage.class_of_column(stage.col_index[(b, g)], target)
                self._rmult[n] = mats
        return self._rmult[n]

    def lmult(self, n: int):
        """Left multiplication matrices A_n -> A_{n+1}; lmult(n)[g][b] is
        the packed coordinate row of g * basis_b, built inductively via
        g(wh) = (gw)h to reuse the right tables."""
        self.check_degree(n + 1)
        if n not in self._lmult:
            d = self.num_generators
            if self.dims[n] == 0:
                self._lmult[n] = [[] for _ in range(d)]
            elif n == 0:
                self._lmult[0] = [
                    [self.backends[1].unit(self.word_index(1, (g,)))] for g in range(d)
                ]
            else:
                prev = self.lmult(n - 1)
                rm = self.rmult(n)
                src = self.backends[n]
                mats = [[None] * self.dims[n] for _ in range(d)]
                for b, w in enumerate(self.basis_words[n]):
                    pb = self.word_index(n - 1, w[:-1])
                    h = w[-1]
                    for g in range(d):
                        mats[g][b] = src.vec_mat(prev[g][pb], rm[h])
                self._lmult[n] = mats
        return self._lmult[n]

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        """Versioned cache document with dims, basis words and mult tables."""
        d = self.num_generators
        rmult = []
        lmult = []
        for n in range(self.N):
            bk = self.backends[n + 1]
            rm = self.rmult(n)
            lm = self.lmult(n)
            rmult.append([[list(bk.to_dense(row)) for row in rm[g]] for g in range(d)])
            lmult.append([[list(bk.to_dense(row)) for row in lm[g]] for g in range(d)])
        return {
            "version": 1,
            "p": self.p,
            "N": self.N,
            "generators": list(self.pres.generator_names),
            "relations": self.pres.relator_texts(),
            "dims": list(self.dims),
            "basis": [[list(w) for w in words] for words in self.basis_words],
            "rmult": rmult,
            "lmult": lmult,
        }


def algebra_from_json(doc: dict, budget: Budget = DEFAULT_BUDGET) -> GradedAlgebra:
    """Rebuild a realized algebra from its cache document (version 1);
    dims, basis words and both mult tables are restored without recompute."""
    if doc.get("version") != 1:
        raise InvalidParamsError(f"unsupported cache version {doc.get('version')!r}")
    from .freealg import presentation_from_texts

    p = doc["p"]
    N = doc["N"]
    names = tuple(doc["generators"])
    pres = presentation_from_texts(p, names, doc.get("relations", ()))
    basis_words = [[tuple(w) for w in words] for words in doc["basis"]]
    dims = list(doc["dims"])
    order = pres.default_order()
    normalized = normalize_relators(pres, order)
    algebra = GradedAlgebra(pres, N, order, normalized, dims, basis_words,
                            [None] * (N + 1), budget)
    for n in range(N):
        bk = algebra.backends[n + 1]
        algebra._rmult[n] = [
            [bk.from_dense(row) for row in per_gen] for per_gen in doc["rmult"][n]
        ]
        algebra._lmult[n] = [
            [bk.from_dense(row) for row in per_gen] for per_gen in doc["lmult"][n]
        ]
    return algebra


def realize(
    pres: QuadraticPresentation,
    N: Optional[int] = None,
    budget: Budget = DEFAULT_BUDGET,
    order: Optional[MonomialOrder] = None,
) -> GradedAlgebra:
    """Realize a quadratic presentation up to degree N (default
    max(2d+2, 8)); requires N >= 2."""
    if N is None:
        N = default_truncation(pres.num_generators)
    if N < 2:
        raise InvalidParamsError("truncation degree must be at least 2")
    if order is None:
        order = pres.default_order()
    normalized = normalize_relators(pres, order)
    d = pres.num_generators
    p = pres.p
    reader = row_backend(p, 1)  # support iteration only; width-independent

    dims = [1]
    basis_words: list[list[Word]] = [[()]]
    stages: list[Optional[_Stage]] = [None]
    rmult_cache: dict[int, list] = {}

    for n in range(N):
        if dims[n] == 0:
            dims.append(0)
            basis_words.append([])
            stages.append(None)
            continue
        columns = [
            ((b, g), basis_words[n][b] + (g,))
            for b in range(dims[n])
            for g in range(d)
        ]
        rm_prev = rmult_cache.get(n - 1)

        def relation_rows(col_index, backend, rm_prev=rm_prev, n=n):
            if rm_prev is None:
                return
            for b in range(dims[n - 1]):
                for rel in normalized.rows:
                    acc: dict[int, int] = {}
                    for (g, h), coeff in rel.terms.items():
                        for k, c2 in reader.support(rm_prev[g][b]):
                            col = col_index[(k, h)]
                            acc[col] = (acc.get(col, 0) + coeff * c2) % p
                    yield backend.from_dict(acc)

        stage, words = _build_stage(p, columns, order, relation_rows, budget)
        dims.append(len(words))
        basis_words.append(words)
        stages.append(stage)
        if n < N - 1 and dims[n + 1] > 0:
            target = row_backend(p, dims[n + 1])
            mats = [[None] * dims[n] for _ in range(d)]
            for g in range(d):
                for b in range(dims[n]):
                    mats[g][b] = stage.class_of_column(stage.col_index[(b, g)], target)
            rmult_cache[n] = mats

    algebra = GradedAlgebra(pres, N, order, normalized, dims, basis_words, stages, budget)
    algebra._rmult.update(rmult_cache)
    return algebra


# ---------------------------------------------------------------------------
# Elements

@dataclass(frozen=True)
class Element:
    """Homogeneous element: degree plus dense coordinates in that degree's
    basis."""

    degree: int
    coords: tuple[int, ...]


def identity_element(A: GradedAlgebra) -> Element:
    return Element(0, (1,))


def element_from_vector(A: GradedAlgebra, degree: int, coords: Sequence[int]) -> Element:
    A.check_degree(degree)
    if len(coords) != A.dims[degree]:
        raise InvalidParamsError("coordinate length does not match degree dimension")
    return Element(degree, tuple(c % A.p for c in coords))


def word_class(A: GradedAlgebra, word: Word) -> Element:
    """Image of a monomial word in the realized algebra."""
    n = len(word)
    A.check_degree(n)
    vec = A.backends[0].unit(0)
    deg = 0
    for h in word:
        vec = A.backends[deg].vec_mat(vec, A.rmult(deg)[h])
        deg += 1
    return Element(n, A.backends[n].to_dense(vec))


def element_from_poly(A: GradedAlgebra, poly: NcPoly) -> Element:
    """Image of a homogeneous polynomial (degree read off the terms)."""
    if poly.is_zero():
        raise InvalidParamsError("cannot infer degree of the zero polynomial")
    if not poly.is_homogeneous():
        raise InvalidParamsError("polynomial is not homogeneous")
    n = next(iter(poly.degrees()))
    acc = [0] * A.dims[n]
    for w, c in poly.terms.items():
        wc = word_class(A, w)
        for i, v in enumerate(wc.coords):
            acc[i] = (acc[i] + c * v) % A.p
    return Element(n, tuple(acc))


def multiply(A: GradedAlgebra, a: Element, b: Element) -> Element:
    """Product in the realized algebra; degrees must fit under N."""
    m, n = a.degree, b.degree
    if m + n > A.N:
        raise DegreeOverflowError(m + n, A.N)
    p = A.p
    acc = [0] * A.dims[m + n]
    for j, cj in enumerate(b.coords):
        if cj == 0:
            continue
        vec = A.backends[m].from_dense(a.coords)
        deg = m
        for h in A.basis_words[n][j]:
            vec = A.backends[deg].vec_mat(vec, A.rmult(deg)[h])
            deg += 1
        for i, v in enumerate(A.backends[m + n].to_dense(vec)):
            acc[i] = (acc[i] + cj * v) % p
    return Element(m + n, tuple(acc))


def element_text(A: GradedAlgebra, e: Element) -> str:
    poly = NcPoly(A.p, {A.basis_words[e.degree][i]: c for i, c in enumerate(e.coords) if c})
    return poly_text(poly, A.pres.generator_names, A.order)


# ---------------------------------------------------------------------------
# Cyclic quotient modules A / AU

class CyclicQuotientModule:
    """Left module A/AU for a subspace U of A_1, realized degreewise.

    qdims[n] = dim (A/AU)_n; act(g, n) maps M_n -> M_{n+1} (left action of
    generator g) as packed rows.  The component dims of the left ideal AU
    are dims[n] - qdims[n], which is how the universal-Koszulity driver
    consumes this.
    """

    def __init__(self, pres, N, qdims, acts, backends):
        self.pres = pres
        self.N = N
        self.qdims = qdims
        self._acts = acts
        self.backends = backends

    def act(self, g: int, n: int):
        return self._acts[n][g]

    def ideal_dims(self, algebra_dims: Sequence[int]) -> list[int]:
        return [algebra_dims[n] - self.qdims[n] for n in range(self.N + 1)]


def realize_cyclic_quotient(
    pres: QuadraticPresentation,
    U: Subspace,
    N: int,
    budget: Budget = DEFAULT_BUDGET,
    order: Optional[MonomialOrder] = None,
    normalized: Optional[NormalizedBasis] = None,
) -> CyclicQuotientModule:
    """Realize A/AU degreewise via left-module cokernels.

    Mirrors realize(): M_{n+1} = (V (x) M_n) / image(R (x) M_{n-1}), with
    the U relations entering once at degree 1.
    """
    d = pres.num_generators
    p = pres.p
    if U.ambient != d or U.p != p:
        raise InvalidParamsError("subspace does not match the presentation")
    if order is None:
        order = pres.default_order()
    if normalized is None:
        normalized = normalize_relators(pres, order)
    reader = row_backend(p, 1)

    qdims = [1]
    mwords: list[list[Word]] = [[()]]
    acts: list[list[list]] = []
    backends = [row_backend(p, 1)]

    for n in range(N):
        if qdims[n] == 0:
            qdims.append(0)
            mwords.append([])
            acts.append([[] for _ in range(d)])
            backends.append(row_backend(p, 0))
            continue
        columns = [
            ((g, m), (g,) + mwords[n][m])
            for g in range(d)
            for m in range(qdims[n])
        ]

        def relation_rows(col_index, backend, n=n):
            if n == 0:
                for u in U.rows:
                    acc = {col_index[(g, 0)]: c for g, c in enumerate(u) if c}
                    yield backend.from_dict(acc)
                return
            act_prev = acts[n - 1]
            for m in range(qdims[n - 1]):
                for rel in normalized.rows:
                    acc: dict[int, int] = {}
                    for (g, h), coeff in rel.terms.items():
                        for k, c2 in reader.support(act_prev[h][m]):
                            col = col_index[(g, k)]
                            acc[col] = (acc.get(col, 0) + coeff * c2) % p
                    yield backend.from_dict(acc)

        stage, words = _build_stage(p, columns, order, relation_rows, budget)
        qdims.append(len(words))
        mwords.append(words)
        target = row_backend(p, len(words))
        backends.append(target)
        mats = [[None] * qdims[n] for _ in range(d)]
        for g in range(d):
            for m in range(qdims[n]):
                mats[g][m] = stage.class_of_column(stage.col_index[(g, m)], target)
        acts.append(mats)

    return CyclicQuotientModule(pres, N, qdims, acts, backends)
