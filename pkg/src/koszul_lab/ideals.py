"""Degree-1-generated one-sided ideals in a realized algebra: degreewise
components, colon ideals, generation-in-degree-1 verdicts, equality,
membership and subset-generation tests.

Right ideals are handled entirely through the opposite algebra (relator
words reversed); degree-1 coordinates transfer identically because both
sides share the generator basis, and higher components live in the
opposite algebra's bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .constructions import opposite
from .errors import DegreeOverflowError, InvalidParamsError, MismatchedAlgebraError
from .graded import Element, GradedAlgebra, realize
from .linalg import Subspace, left_kernel_rows


def opposite_algebra(A: GradedAlgebra) -> GradedAlgebra:
    """The realized opposite algebra, cached on the instance."""
    cached = getattr(A, "_opposite", None)
    if cached is None:
        cached = realize(opposite(A.pres), A.N, A.budget)
        A._opposite = cached
        cached._opposite = A
    return cached


@dataclass(frozen=True)
class GenerationVerdict:
    """Is a degreewise family the ideal generated by its degree-1 part?

    status is "certified_yes", "yes_up_to" or "no"; a no always carries the
    witness degree and a concrete vector of the family outside the
    generated ideal (or, for families that are not even termwise larger,
    a vector of the generated ideal missing from the family).
    """

    status: str
    up_to: Optional[int] = None
    witness_degree: Optional[int] = None
    witness_vector: Optional[tuple[int, ...]] = None

    @property
    def is_yes(self) -> bool:
        return self.status in ("certified_yes", "yes_up_to")


@dataclass(frozen=True)
class LinearIdeal:
    """A one-sided ideal generated by a subspace W of A_1.

    components[n] for 0 <= n <= max_degree are canonical subspaces of A_n
    (components[0] is zero, components[1] = W).  For side "right" the
    algebra field holds the opposite algebra and all components live in its
    coordinates.
    """

    algebra: GradedAlgebra
    side: str
    W: Subspace
    components: tuple[Subspace, ...]

    @property
    def max_degree(self) -> int:
        return len(self.components) - 1

    def component(self, n: int) -> Subspace:
        if n > self.max_degree:
            raise DegreeOverflowError(n, self.max_degree)
        return self.components[n]


def _iterate_components(A: GradedAlgebra, W: Subspace, up_to: int) -> list[Subspace]:
    """components[n+1] = span(g . v) over generators g, basis v of
    components[n]; exactly the constructed-ideal generation law."""
    p = A.p
    comps = [Subspace.zero(p, A.dims[0]), W]
    for n in range(1, up_to):
        target_dim = A.dims[n + 1]
        if target_dim == 0 or comps[n].dim == 0:
            comps.append(Subspace.zero(p, target_dim))
            continue
        lm = A.lmult(n)
        src = A.backends[n]
        tgt = A.backends[n + 1]
        vecs = []
        for v in comps[n].rows:
            pv = src.from_dense(v)
            for g in range(A.num_generators):
                vecs.append(tgt.to_dense(src.vec_mat(pv, lm[g])))
        comps.append(Subspace.from_vectors(p, target_dim, vecs))
    return comps


def ideal_from_subspace(
    A: GradedAlgebra, W: Subspace, side: str = "left", up_to: Optional[int] = None
) -> LinearIdeal:
    """The one-sided ideal generated by W inside A_1, with components
    computed up to the truncation degree."""
    if side not in ("left", "right"):
        raise InvalidParamsError(f"side must be 'left' or 'right', got {side!r}")
    if W.ambient != A.dims[1] or W.p != A.p:
        raise InvalidParamsError("W must be a subspace of the degree-1 part")
    if up_to is None:
        up_to = A.N
    if up_to > A.N:
        raise DegreeOverflowError(up_to, A.N)
    work = A if side == "left" else opposite_algebra(A)
    comps = _iterate_components(work, W, up_to)
    return LinearIdeal(work, side, W, tuple(comps))


def augmentation_ideal(A: GradedAlgebra, side: str = "left") -> LinearIdeal:
    return ideal_from_subspace(A, Subspace.full(A.p, A.dims[1]), side)


def _mult_by_element_rows(A: GradedAlgebra, n: int, x: Sequence[int]) -> list:
    """Packed rows of the right-multiplication map A_n -> A_{n+1} by the
    degree-1 element with coefficient vector x."""
    rm = A.rmult(n)
    tgt = A.backends[n + 1]
    rows = []
    zero = tgt.from_dict({})
    for b in range(A.dims[n]):
        acc = zero
        for g, c in enumerate(x):
            if c:
                acc = tgt.add_scaled(acc, rm[g][b], c)
        rows.append(acc)
    return rows


@dataclass(frozen=True)
class ColonResult:
    """Degreewise family (J : x) plus its generation verdict."""

    family: tuple[Subspace, ...]
    verdict: GenerationVerdict
    degenerate: bool

    def component(self, n: int) -> Subspace:
        return self.family[n]


def colon(
    A: GradedAlgebra,
    J: LinearIdeal,
    x: Element,
    up_to: Optional[int] = None,
) -> ColonResult:
    """(J : x)_n = kernel of a |-> a x into A_{n+1}/J_{n+1}.

    x must be homogeneous of degree 1.  If x lies in J the colon is the
    full positive part; the result is flagged degenerate and the
    universal-Koszulity driver skips such pairs.
    """
    if x.degree != 1:
        raise InvalidParamsError("colon divisor must be a degree-1 element")
    if J.algebra is not A and J.algebra is not getattr(A, "_opposite", None):
        raise MismatchedAlgebraError("ideal does not belong to this algebra")
    work = J.algebra
    if up_to is None:
        up_to = work.N - 1
    if up_to > work.N - 1:
        raise DegreeOverflowError(up_to + 1, work.N)
    p = work.p
    if J.component(1).contains(x.coords):
        family = [Subspace.zero(p, work.dims[0])]
        family += [Subspace.full(p, work.dims[n]) for n in range(1, up_to + 1)]
        verdict = generated_in_degree_one(work, tuple(family))
        return ColonResult(tuple(family), verdict, True)
    family = [Subspace.zero(p, work.dims[0])]
    for n in range(1, up_to + 1):
        if work.dims[n] == 0:
            family.append(Subspace.zero(p, 0))
            continue
        rows = _mult_by_element_rows(work, n, x.coords)
        tgt = work.backends[n + 1]
        ech = tgt.echelon(reduced=False)
        for v in J.component(n + 1).rows:
            ech.insert(tgt.from_dense(v))
        dense = [tgt.to_dense(ech.residual(r)) for r in rows]
        kernel = left_kernel_rows(p, dense, work.dims[n + 1])
        family.append(Subspace(p, work.dims[n], kernel))
    verdict = generated_in_degree_one(work, tuple(family))
    return ColonResult(tuple(family), verdict, False)


def generated_in_degree_one(
    A: GradedAlgebra, family: Sequence[Subspace]
) -> GenerationVerdict:
    """Compare a degreewise family against the ideal generated by its
    degree-1 part.  A witness degree is definitive; otherwise the verdict
    is certified exactly when the algebra's dims reach 0 inside the range."""
    max_degree = len(family) - 1
    generated = _iterate_components(A, family[1], max_degree)
    for n in range(2, max_degree + 1):
        F, G = family[n], generated[n]
        if F == G:
            continue
        witness = None
        for v in F.rows:
            if not G.contains(v):
                witness = v
                break
        if witness is None:
            for v in G.rows:
                if not F.contains(v):
                    witness = v
                    break
        return GenerationVerdict("no", witness_degree=n, witness_vector=witness)
    if any(A.dims[n] == 0 for n in range(max_degree + 1)):
        return GenerationVerdict("certified_yes")
    return GenerationVerdict("yes_up_to", up_to=max_degree)


def ideal_equal(I: LinearIdeal, J: LinearIdeal) -> bool:
    if I.algebra is not J.algebra or I.side != J.side:
        raise MismatchedAlgebraError("ideals from different algebras or sides")
    depth = min(I.max_degree, J.max_degree)
    return all(I.component(n) == J.component(n) for n in range(depth + 1))


def membership(I: LinearIdeal, a: Element) -> bool:
    if a.degree > I.max_degree:
        raise DegreeOverflowError(a.degree, I.max_degree)
    return I.component(a.degree).contains(a.coords)


@dataclass(frozen=True)
class SubsetGenerationResult:
    """Outcome of: is this colon family generated by a subset of X?

    subset lists the indices of X lying in the family's degree-1 part (the
    only possible generating subset); a mismatch at any computed degree is
    definitive because any generating subset would be contained in it.
    """

    matches: bool
    subset: tuple[int, ...]
    witness_degree: Optional[int] = None
    certified: bool = False


def generated_by_subset_of(
    A: GradedAlgebra, family: Sequence[Subspace], X: Sequence[Element]
) -> SubsetGenerationResult:
    """Test whether the family equals the ideal generated by S = X meet
    family_1, per the strong-Koszulity colon condition."""
    for u in X:
        if u.degree != 1:
            raise InvalidParamsError("X must consist of degree-1 elements")
    C1 = family[1]
    subset = tuple(i for i, u in enumerate(X) if C1.contains(u.coords))
    span = Subspace.from_vectors(A.p, A.dims[1], [X[i].coords for i in subset])
    max_degree = len(family) - 1
    generated = _iterate_components(A, span, max_degree)
    if span != C1:
        return SubsetGenerationResult(False, subset, witness_degree=1)
    for n in range(2, max_degree + 1):
        if family[n] != generated[n]:
            return SubsetGenerationResult(False, subset, witness_degree=n)
    certified = any(A.dims[n] == 0 for n in range(max_degree + 1))
    return SubsetGenerationResult(True, subset, certified=certified)
