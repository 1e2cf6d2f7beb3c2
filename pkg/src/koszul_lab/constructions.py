"""Presentation constructors: cohomology presets, direct sum, twisted
extension, skew tensor product, opposite algebra, and constructor trees.

Presets transcribe explicit cup-product tables (free pro-p and the three
Demushkin cases) and the rigid-field presentations; the binary operations
implement the quadratic constructions that mirror free products and
cyclotomic semidirect products on cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidParamsError, InvalidTwistError
from .freealg import NcPoly, QuadraticPresentation, parse_poly
from .linalg import check_prime


def _uniquify(base: Sequence[str], used: set[str]) -> list[str]:
    out = []
    for name in base:
        candidate = name
        i = 2
        while candidate in used:
            candidate = f"{name}_{i}"
            i += 1
        used.add(candidate)
        out.append(candidate)
    return out


def _monomial(p: int, i: int, j: int, coeff: int = 1) -> NcPoly:
    return NcPoly(p, {(i, j): coeff})


def presentation_from_cup_table(
    p: int, names: Sequence[str], table: Sequence[Sequence[int]], provenance: str,
    designated: Optional[tuple[int, ...]] = None,
) -> QuadraticPresentation:
    """Quadratic presentation of an algebra with one-dimensional degree-2
    part given by a cup-product table; relators span the kernel of the
    table as a map V (x) V -> K.

    Vanishing products become monomial relators; every other product is
    rewritten into the first nonzero cell (row-major), which therefore
    represents the chosen degree-2 basis vector.
    """
    d = len(names)
    ref = None
    relators: list[NcPoly] = []
    for i in range(d):
        for j in range(d):
            c = table[i][j] % p
            if c == 0:
                relators.append(_monomial(p, i, j))
            elif ref is None:
                ref = (i, j, c)
            else:
                i0, j0, c0 = ref
                scale = (c * pow(c0, p - 2, p)) % p
                relators.append(_monomial(p, i, j).sub(_monomial(p, i0, j0, scale)))
    if ref is not None:
        provenance = f"{provenance}[omega={names[ref[0]]}*{names[ref[1]]}]"
    return QuadraticPresentation(p, tuple(names), tuple(relators), provenance, designated)


# ---------------------------------------------------------------------------
# Presets

def free_cohomology(d: int, p: int) -> QuadraticPresentation:
    """Cohomology of a free pro-p group on d generators: all products of
    positive-degree elements vanish.  The designated square-class element
    (the class of -1) is 0."""
    check_prime(p)
    if d < 0:
        raise InvalidParamsError("free preset needs d >= 0")
    names = tuple(f"x{i + 1}" for i in range(d))
    relators = tuple(_monomial(p, i, j) for i in range(d) for j in range(d))
    return QuadraticPresentation(p, names, relators, f"free({d},{p})",
                                 designated=(0,) * d)


def poly_t(p: int = 2) -> QuadraticPresentation:
    """Polynomial ring on one degree-1 generator t."""
    check_prime(p)
    return QuadraticPresentation(p, ("t",), (), f"poly_t({p})", designated=(1,))


def c2_cohomology() -> QuadraticPresentation:
    """Cohomology of the group of order 2: F_2[t]."""
    pres = poly_t(2)
    return QuadraticPresentation(2, pres.generator_names, pres.relators, "c2", designated=(1,))


def t_mod_t2() -> QuadraticPresentation:
    """F_2<t | t^2>, the degree-truncated polynomial ring."""
    return QuadraticPresentation(
        2, ("t",), (NcPoly(2, {(0, 0): 1}),), "t_mod_t2", designated=(1,)
    )


def demushkin1(k: int, p: int) -> QuadraticPresentation:
    """Demushkin cohomology, symplectic case (invariant q != 2): 2k
    generators with a_(2i-1) a_(2i) = -a_(2i) a_(2i-1) = omega.

    q != 2 makes -1 a square, so the designated square-class element is 0
    (it is also the only t with l*l = t*l for every degree-1 l)."""
    check_prime(p)
    if k < 1:
        raise InvalidParamsError("demushkin1 needs k >= 1")
    d = 2 * k
    names = [f"a{i + 1}" for i in range(d)]
    table = [[0] * d for _ in range(d)]
    for i in range(k):
        table[2 * i][2 * i + 1] = 1
        table[2 * i + 1][2 * i] = -1 % p
    return presentation_from_cup_table(p, names, table, f"demushkin1(k={k},p={p})",
                                       designated=(0,) * d)


def demushkin2(k: int) -> QuadraticPresentation:
    """Demushkin pro-2 cohomology on 2k+1 generators (q = 2):
    a1 a1 = a_(2i) a_(2i+1) = a_(2i+1) a_(2i) = omega."""
    if k < 1:
        raise InvalidParamsError("demushkin2 needs k >= 1")
    d = 2 * k + 1
    names = [f"a{i + 1}" for i in range(d)]
    table = [[0] * d for _ in range(d)]
    table[0][0] = 1
    for i in range(1, k + 1):
        table[2 * i - 1][2 * i] = 1
        table[2 * i][2 * i - 1] = 1
    # a1 is the unique t with l*l = t*l for all l: the class of -1
    return presentation_from_cup_table(2, names, table, f"demushkin2(k={k})",
                                       designated=(1,) + (0,) * (d - 1))


def demushkin3(k: int) -> QuadraticPresentation:
    """Demushkin pro-2 cohomology on 2k generators (q = 2):
    a1 a1 = a1 a2 = a2 a1 = omega plus symplectic pairs."""
    if k < 1:
        raise InvalidParamsError("demushkin3 needs k >= 1")
    d = 2 * k
    names = [f"a{i + 1}" for i in range(d)]
    table = [[0] * d for _ in range(d)]
    table[0][0] = 1
    table[0][1] = 1
    table[1][0] = 1
    for i in range(2, k + 1):
        table[2 * i - 2][2 * i - 1] = 1
        table[2 * i - 1][2 * i - 2] = 1
    # a2 is the unique t with l*l = t*l for all l: the class of -1
    return presentation_from_cup_table(2, names, table, f"demushkin3(k={k})",
                                       designated=(0, 1) + (0,) * (d - 2))


def superpythagorean(d: int) -> QuadraticPresentation:
    """Cohomology of a superpythagorean field with d square classes:
    generators t, a2..ad with commuting relations and a_i a_i = t a_i."""
    if d < 1:
        raise InvalidParamsError("superpythagorean needs d >= 1")
    p = 2
    names = ("t",) + tuple(f"a{i}" for i in range(2, d + 1))
    rel: list[NcPoly] = []
    for i in range(1, d):
        for j in range(i + 1, d):
            rel.append(_monomial(p, j, i).add(_monomial(p, i, j)))
        rel.append(_monomial(p, i, 0).add(_monomial(p, 0, i)))
        rel.append(_monomial(p, i, i).add(_monomial(p, 0, i)))
    return QuadraticPresentation(
        p, names, tuple(rel), f"superpythagorean({d})", designated=(1,) + (0,) * (d - 1)
    )


def rigid_level2(d: int) -> QuadraticPresentation:
    """Cohomology of a 2-rigid field of level 2: the superpythagorean
    presentation plus tt = 0."""
    base = superpythagorean(d)
    rel = base.relators + (NcPoly(2, {(0, 0): 1}),)
    return QuadraticPresentation(
        2, base.generator_names, rel, f"rigid_level2({d})", designated=base.designated
    )


def exterior_algebra(m: int, p: int) -> QuadraticPresentation:
    """Exterior algebra on m degree-1 generators."""
    check_prime(p)
    if m < 0:
        raise InvalidParamsError("exterior needs m >= 0")
    names = tuple(f"x{i + 1}" for i in range(m))
    rel: list[NcPoly] = []
    for i in range(m):
        rel.append(_monomial(p, i, i))
        for j in range(i + 1, m):
            rel.append(_monomial(p, j, i).add(_monomial(p, i, j)))
    return QuadraticPresentation(p, names, tuple(rel), f"exterior({m},{p})")


PRESET_BUILDERS = {
    "free": lambda params: free_cohomology(int(params["d"]), int(params["p"])),
    "poly_t": lambda params: poly_t(int(params.get("p", 2))),
    "c2": lambda params: c2_cohomology(),
    "t_mod_t2": lambda params: t_mod_t2(),
    "demushkin1": lambda params: demushkin1(int(params["k"]), int(params["p"])),
    "demushkin2": lambda params: demushkin2(int(params["k"])),
    "demushkin3": lambda params: demushkin3(int(params["k"])),
    "superpythagorean": lambda params: superpythagorean(int(params["d"])),
    "rigid_level2": lambda params: rigid_level2(int(params["d"])),
    "exterior": lambda params: exterior_algebra(int(params["m"]), int(params.get("p", 2))),
}


def preset(kind: str, **params) -> QuadraticPresentation:
    if kind not in PRESET_BUILDERS:
        raise InvalidParamsError(f"unknown preset {kind!r}")
    try:
        return PRESET_BUILDERS[kind](params)
    except KeyError as exc:
        raise InvalidParamsError(f"preset {kind!r} is missing parameter {exc}")


def demushkin(case: int, k: int, p: int = 2) -> QuadraticPresentation:
    if case == 1:
        return demushkin1(k, p)
    if case == 2:
        if p != 2:
            raise InvalidParamsError("demushkin case 2 requires p=2")
        return demushkin2(k)
    if case == 3:
        if p != 2:
            raise InvalidParamsError("demushkin case 3 requires p=2")
        return demushkin3(k)
    raise InvalidParamsError(f"demushkin case must be 1, 2 or 3, got {case}")


# ---------------------------------------------------------------------------
# Binary constructions

def _shift_poly(poly: NcPoly, offset: int) -> NcPoly:
    return NcPoly(poly.p, {tuple(g + offset for g in w): c for w, c in poly.terms.items()})


def _combined_designated(pA, pB, dA, dB):
    if pA.designated is None or pB.designated is None:
        return None
    return tuple(pA.designated) + tuple(pB.designated)


def direct_sum(pA: QuadraticPresentation, pB: QuadraticPresentation) -> QuadraticPresentation:
    """Quadratic direct sum: concatenated generators, both relator sets,
    and all mixed products ab, ba as relators."""
    if pA.p != pB.p:
        raise InvalidParamsError("direct sum requires the same prime")
    p = pA.p
    dA, dB = pA.num_generators, pB.num_generators
    used = set(pA.generator_names)
    names = tuple(pA.generator_names) + tuple(_uniquify(pB.generator_names, used))
    rel = list(pA.relators)
    rel.extend(_shift_poly(r, dA) for r in pB.relators)
    for a in range(dA):
        for b in range(dA, dA + dB):
            rel.append(_monomial(p, a, b))
            rel.append(_monomial(p, b, a))
    prov = f"direct_sum({pA.provenance or 'anon'}, {pB.provenance or 'anon'})"
    return QuadraticPresentation(p, names, tuple(rel), prov, _combined_designated(pA, pB, dA, dB))


def skew_tensor(pA: QuadraticPresentation, pB: QuadraticPresentation) -> QuadraticPresentation:
    """Skew-symmetric tensor product: mixed products anticommute."""
    if pA.p != pB.p:
        raise InvalidParamsError("skew tensor requires the same prime")
    p = pA.p
    dA, dB = pA.num_generators, pB.num_generators
    used = set(pA.generator_names)
    names = tuple(pA.generator_names) + tuple(_uniquify(pB.generator_names, used))
    rel = list(pA.relators)
    rel.extend(_shift_poly(r, dA) for r in pB.relators)
    for a in range(dA):
        for b in range(dA, dA + dB):
            rel.append(_monomial(p, a, b).add(_monomial(p, b, a)))
    designated = None
    if pA.designated is not None:
        designated = tuple(pA.designated) + (0,) * dB
    prov = f"skew_tensor({pA.provenance or 'anon'}, {pB.provenance or 'anon'})"
    return QuadraticPresentation(p, names, tuple(rel), prov, designated)


def twisted_extension(
    pA: QuadraticPresentation,
    t: Optional[Sequence[int]],
    m: int,
    new_names: Optional[Sequence[str]] = None,
) -> QuadraticPresentation:
    """Twisted extension A(t | x_1..x_m): m new anticommuting generators
    with x_j^2 = t x_j and x_j a = -a x_j for a in A_1.

    t is a coefficient vector over A's generators (None means the zero
    element); t + t = 0 must hold, so odd characteristic forces t = 0.
    """
    p = pA.p
    dA = pA.num_generators
    if m < 0:
        raise InvalidParamsError("twisted extension needs m >= 0")
    tvec = tuple(0 for _ in range(dA)) if t is None else tuple(v % p for v in t)
    if len(tvec) != dA:
        raise InvalidParamsError("twist vector length must equal generator count")
    if any((2 * v) % p for v in tvec):
        raise InvalidTwistError(
            "twisting element must satisfy t + t = 0; "
            f"for p={p} this forces t = 0"
        )
    used = set(pA.generator_names)
    base_new = new_names if new_names is not None else [f"x{j + 1}" for j in range(m)]
    if len(base_new) != m:
        raise InvalidParamsError("need exactly m new generator names")
    fresh = _uniquify(base_new, used)
    names = tuple(pA.generator_names) + tuple(fresh)
    rel = list(pA.relators)
    for j in range(m):
        xj = dA + j
        for i in range(j + 1, m):
            xi = dA + i
            rel.append(_monomial(p, xj, xi).add(_monomial(p, xi, xj)))
        square = _monomial(p, xj, xj)
        for g, c in enumerate(tvec):
            if c:
                square = square.sub(NcPoly(p, {(g, xj): c}))
        rel.append(square)
        for g in range(dA):
            rel.append(_monomial(p, xj, g).add(_monomial(p, g, xj)))
    designated = None
    if any(tvec):
        designated = tvec + (0,) * m
    elif pA.designated is not None:
        designated = tuple(pA.designated) + (0,) * m
    tname = "0" if not any(tvec) else "+".join(
        pA.generator_names[g] for g, c in enumerate(tvec) if c
    )
    prov = f"twisted_extension({pA.provenance or 'anon'}, t={tname}, m={m})"
    return QuadraticPresentation(p, names, tuple(rel), prov, designated)


def opposite(pres: QuadraticPresentation) -> QuadraticPresentation:
    """Opposite presentation: every relator word reversed."""
    rel = tuple(r.reversed_words() for r in pres.relators)
    prov = f"opposite({pres.provenance or 'anon'})"
    return QuadraticPresentation(pres.p, pres.generator_names, rel, prov, pres.designated)


# ---------------------------------------------------------------------------
# Constructor trees

TREE_KINDS = {
    "preset", "direct_sum", "skew_tensor", "twisted_extension",
    "witt_product", "witt_group_ring",
}


@dataclass(frozen=True)
class ConstructorTree:
    """Tree of quadratic constructions.

    Witt-flavored nodes fold onto the generic ones: witt_product is the
    direct sum, and witt_group_ring is the twisted extension over the
    child's designated element (the initial form of 1+1)."""

    kind: str
    params: dict = field(default_factory=dict)
    children: tuple["ConstructorTree", ...] = ()

    def __post_init__(self):
        if self.kind not in TREE_KINDS:
            raise InvalidParamsError(f"unknown constructor-tree node {self.kind!r}")


def build_tree(tree: ConstructorTree) -> QuadraticPresentation:
    kind = tree.kind
    if kind == "preset":
        params = dict(tree.params)
        name = params.pop("kind")
        return preset(name, **params)
    children = [build_tree(c) for c in tree.children]
    if kind in ("direct_sum", "witt_product"):
        if len(children) < 2:
            raise InvalidParamsError(f"{kind} needs at least two children")
        out = children[0]
        for nxt in children[1:]:
            out = direct_sum(out, nxt)
        return out
    if kind == "skew_tensor":
        if len(children) < 2:
            raise InvalidParamsError("skew_tensor needs at least two children")
        out = children[0]
        for nxt in children[1:]:
            out = skew_tensor(out, nxt)
        return out
    if kind == "twisted_extension":
        (child,) = children
        m = int(tree.params.get("m", 1))
        tspec = tree.params.get("t")
        tvec = resolve_twist(child, tspec)
        return twisted_extension(child, tvec, m)
    if kind == "witt_group_ring":
        (child,) = children
        m = int(tree.params.get("m", 1))
        if child.designated is None:
            raise InvalidParamsError(
                "witt_group_ring needs a child with a designated twisting element"
            )
        return twisted_extension(child, child.designated, m)
    raise InvalidParamsError(f"unknown constructor-tree node {kind!r}")


def resolve_twist(pres: QuadraticPresentation, tspec) -> Optional[tuple[int, ...]]:
    """Interpret a twist spec: None/"designated" uses the presentation's
    designated element, "0"/"zero" the zero element, and any other string
    is parsed as a degree-1 polynomial over the generators."""
    if tspec is None or tspec == "designated":
        return pres.designated
    if isinstance(tspec, (tuple, list)):
        return tuple(int(v) for v in tspec)
    if isinstance(tspec, str):
        if tspec.strip() in ("0", "zero"):
            return tuple(0 for _ in range(pres.num_generators))
        poly = parse_poly(tspec, pres.generator_names, pres.p)
        if not poly.is_homogeneous(1):
            raise InvalidParamsError(f"twist element {tspec!r} is not degree 1")
        vec = [0] * pres.num_generators
        for w, c in poly.terms.items():
            vec[w[0]] = c
        return tuple(vec)
    raise InvalidParamsError(f"bad twist spec {tspec!r}")
