"""The rewriting method: reduction to normal form, critical monomials,
confluence graphs, Diamond-Lemma PBW certification, DOT export.

A normalized relator row with leading monomial gh becomes the rule
gh -> (gh - row), substituting the leading word by lower-order terms.
A degree-3 word is critical when both its first two and last two letters
are leading words; its graph collects every polynomial reachable by
single rule applications, and the basis is PBW for the chosen order
exactly when every such graph has a unique terminal vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .config import DEFAULT_BUDGET, Budget
from .errors import BudgetExceededError, InvalidParamsError
from .freealg import (
    MonomialOrder,
    NcPoly,
    NormalizedBasis,
    QuadraticPresentation,
    Word,
    normalize_relators,
    poly_text,
)


@dataclass(frozen=True)
class RewritingSystem:
    """Reduction rules keyed by their degree-2 leading words."""

    pres: QuadraticPresentation
    order: MonomialOrder
    normalized: NormalizedBasis
    rules: dict[Word, NcPoly]

    @staticmethod
    def from_presentation(
        pres: QuadraticPresentation, order: Optional[MonomialOrder] = None
    ) -> "RewritingSystem":
        if order is None:
            order = pres.default_order()
        normalized = normalize_relators(pres, order)
        rules: dict[Word, NcPoly] = {}
        for row, lead in zip(normalized.rows, normalized.leading):
            rules[lead] = NcPoly.monomial(pres.p, lead).sub(row)
        return RewritingSystem(pres, order, normalized, rules)


def _reducible_positions(rules: dict[Word, NcPoly], word: Word) -> list[int]:
    return [i for i in range(len(word) - 1) if word[i : i + 2] in rules]


def is_reduced_word(system: RewritingSystem, word: Word) -> bool:
    return not _reducible_positions(system.rules, word)


def apply_rule(system: RewritingSystem, poly: NcPoly, word: Word, position: int) -> NcPoly:
    """Replace one occurrence of a leading word inside one monomial."""
    coeff = poly.terms.get(word)
    if coeff is None:
        raise InvalidParamsError("monomial not present in polynomial")
    sub = word[position : position + 2]
    rhs = system.rules[sub]
    prefix = NcPoly.monomial(system.pres.p, word[:position])
    suffix = NcPoly.monomial(system.pres.p, word[position + 2 :])
    replaced = prefix.mul(rhs).mul(suffix).scale(coeff)
    return poly.sub(NcPoly.monomial(system.pres.p, word, coeff)).add(replaced)


def reduce_poly(system: RewritingSystem, poly: NcPoly) -> NcPoly:
    """Normal form under the fixed strategy: take the greatest reducible
    monomial, then the leftmost occurrence of the greatest applicable
    leading word.  Deterministic; path-independent exactly when PBW."""
    rules = system.rules
    order = system.order
    current = poly
    while True:
        reducible = [w for w in current.terms if _reducible_positions(rules, w)]
        if not reducible:
            return current
        word = max(reducible, key=order.key)
        positions = _reducible_positions(rules, word)
        best = max(positions, key=lambda i: (order.key(word[i : i + 2]), -i))
        current = apply_rule(system, current, word, best)


def critical_monomials(system: RewritingSystem) -> list[Word]:
    """Degree-3 words whose first 2 and last 2 letters are both leading."""
    leads = list(system.rules.keys())
    by_first: dict[int, list[Word]] = {}
    for w in leads:
        by_first.setdefault(w[0], []).append(w)
    out = set()
    for ab in leads:
        for bc in by_first.get(ab[1], []):
            out.add((ab[0], ab[1], bc[1]))
    return sorted(out, key=system.order.key)


@dataclass
class ConfluenceGraph:
    """Reduction graph of one critical monomial.

    Vertices are fully collected polynomials in discovery (BFS) order;
    edges are single rule applications (from, to, leading word, position).
    """

    source: Word
    vertices: list[NcPoly]
    edges: list[tuple[int, int, Word, int]]
    terminals: list[int]

    @property
    def confluent(self) -> bool:
        return len(self.terminals) == 1

    def terminal_polys(self) -> list[NcPoly]:
        return [self.vertices[i] for i in self.terminals]


def confluence_graph(
    system: RewritingSystem, source: Word, budget: Budget = DEFAULT_BUDGET
) -> ConfluenceGraph:
    """Exhaustive closure of the reduction relation from a critical word."""
    order = system.order
    rules = system.rules
    start = NcPoly.monomial(system.pres.p, source)

    def poly_key(poly: NcPoly):
        return tuple(sorted(poly.terms.items()))

    vertices = [start]
    index = {poly_key(start): 0}
    edges: list[tuple[int, int, Word, int]] = []
    terminals: list[int] = []
    queue = [0]
    while queue:
        vid = queue.pop(0)
        poly = vertices[vid]
        succ = []
        for word, _coeff in poly.sorted_terms(order):
            for pos in _reducible_positions(rules, word):
                succ.append((word, pos))
        if not succ:
            terminals.append(vid)
            continue
        for word, pos in succ:
            target = apply_rule(system, poly, word, pos)
            key = poly_key(target)
            tid = index.get(key)
            if tid is None:
                if len(vertices) >= budget.graph_vertex_cap:
                    raise BudgetExceededError(
                        f"confluence graph vertices for {source}",
                        len(vertices) + 1,
                        budget.graph_vertex_cap,
                    )
                tid = len(vertices)
                vertices.append(target)
                index[key] = tid
                queue.append(tid)
            edges.append((vid, tid, word[pos : pos + 2], pos))
    return ConfluenceGraph(source, vertices, edges, terminals)


@dataclass
class PbwCertificate:
    """Outcome of the rewriting method for one ordered basis."""

    order: MonomialOrder
    verdict: str  # "pbw" | "not_pbw"
    witness: Optional[Word]
    graphs: list[ConfluenceGraph]
    reduced_counts: list[int]

    @property
    def is_pbw(self) -> bool:
        return self.verdict == "pbw"


def reduced_monomial_counts(system: RewritingSystem, N: int) -> list[int]:
    """Number of reduced words per degree 0..N, by transfer-matrix DP over
    the last letter (forbidden factors are exactly the leading words)."""
    d = system.pres.num_generators
    rules = system.rules
    counts = [1]
    if N == 0:
        return counts
    state = [1] * d  # reduced words of length 1 ending in g
    counts.append(sum(state) if d else 0)
    for _ in range(2, N + 1):
        nxt = [0] * d
        for h in range(d):
            total = 0
            for g in range(d):
                if (g, h) not in rules:
                    total += state[g]
            nxt[h] = total
        state = nxt
        counts.append(sum(state))
    return counts


def certify_pbw(
    pres: QuadraticPresentation,
    order: Optional[MonomialOrder] = None,
    N: Optional[int] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> PbwCertificate:
    """Run the rewriting method: PBW iff every critical graph is confluent."""
    system = RewritingSystem.from_presentation(pres, order)
    if N is None:
        from .graded import default_truncation

        N = default_truncation(pres.num_generators)
    graphs = [confluence_graph(system, m, budget) for m in critical_monomials(system)]
    witness = None
    for g in graphs:
        if not g.confluent:
            witness = g.source
            break
    return PbwCertificate(
        order=system.order,
        verdict="pbw" if witness is None else "not_pbw",
        witness=witness,
        graphs=graphs,
        reduced_counts=reduced_monomial_counts(system, N),
    )


# ---------------------------------------------------------------------------
# DOT export

def graph_to_dot(graph: ConfluenceGraph, system: RewritingSystem, title: str = "") -> str:
    """Render a confluence graph; terminal vertices are double-circled."""
    names = system.pres.generator_names
    order = system.order
    terminals = set(graph.terminals)
    lines = [f'digraph "{title or poly_text(NcPoly.monomial(system.pres.p, graph.source), names)}" {{']
    lines.append('  rankdir=TB;')
    for vid, poly in enumerate(graph.vertices):
        label = poly_text(poly, names, order)
        shape = ' peripheries=2' if vid in terminals else ''
        lines.append(f'  v{vid} [label="{label}"{shape}];')
    for src, dst, lead, pos in graph.edges:
        from .freealg import word_text

        lines.append(
            f'  v{src} -> v{dst} [label="{word_text(lead, names)}@{pos}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
