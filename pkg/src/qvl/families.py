"""Constructors for the named algebra families and their variety maps.

All families live on the two-vertex quiver with loops e0 at vertex 0, e1 at
vertex 1, and arrows a1..an from 1 to 0 (the one-vertex family keeps a
single loop e).  The conversion maps identify representations of the
commuting two-loop family with homomorphism triples over the one-loop
algebra, and representations of the corner family B with extension triples;
both are exact bijections on point sets and are inverted here explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .extensions import ExtensionTriple, cocycle_value
from .linalg import Field, Matrix
from .quiver import (BoundQuiver, Quiver, QuiverError, Relation,
                     monomial_relation)
from .reps import HomTriple, Morphism, Representation

FAMILY_KINDS = ("A", "Aprime", "AprimeCommuting", "Lambda", "B")


@dataclass(frozen=True)
class FamilyDescriptor:
    """Name plus parameters of one of the built-in algebra families."""

    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    l: Optional[int] = None
    m0: Optional[int] = None
    m1: Optional[int] = None

    def label(self) -> str:
        if self.kind == "A":
            return f"A({self.n},{self.m},{self.l})"
        if self.kind == "Aprime":
            return f"A'({self.n},{self.m0},{self.m1})"
        if self.kind == "AprimeCommuting":
            return f"A'comm({self.m})"
        if self.kind == "Lambda":
            return f"Lambda({self.m})"
        if self.kind == "B":
            return f"B({self.n},m={self.m})"
        return self.kind


class FamilyParameterError(QuiverError):
    pass


def _require(cond: bool, msg: str):
    if not cond:
        raise FamilyParameterError(msg)


def two_vertex_quiver(n: int, with_loop0: bool = True,
                      with_loop1: bool = True) -> Quiver:
    """Vertices 0, 1 with loops e0, e1 and arrows a1..an from 1 to 0."""
    arrows = []
    if with_loop0:
        arrows.append(("e0", 0, 0))
    if with_loop1:
        arrows.append(("e1", 1, 1))
    arrows.extend((f"a{i}", 1, 0) for i in range(1, n + 1))
    return Quiver([0, 1], arrows, name=f"Q({n})")


def crossing_relation(quiver: Quiver, l: int) -> Relation:
    """The degree-one relation sum of e0^(l-i) a1 e1^i over i in [0, l]."""
    terms = []
    for i in range(l + 1):
        arrows = ["e0"] * (l - i) + ["a1"] + ["e1"] * i
        terms.append((1, quiver.path(arrows)))
    return Relation(terms)


def family_a(n: int, m: int, l: int) -> BoundQuiver:
    """Two loops of order m plus the degree-one crossing relation."""
    _require(n >= 1, f"family A needs n >= 1, got {n}")
    _require(m >= 2, f"family A needs m >= 2, got {m}")
    _require(l >= 1, f"family A needs l >= 1, got {l}")
    quiver = two_vertex_quiver(n)
    rels = [monomial_relation(quiver, "e0", m),
            monomial_relation(quiver, "e1", m),
            crossing_relation(quiver, l)]
    return BoundQuiver(quiver, rels, 2 * m, name=f"A({n},{m},{l})")


def family_a_prime(n: int, m0: int, m1: int) -> BoundQuiver:
    """Loops of orders m0 and m1, no crossing relation.

    An order-1 loop is the zero arrow of the algebra, so it is dropped from
    the quiver instead of imposing a length-1 relation.
    """
    _require(n >= 0, f"family A' needs n >= 0, got {n}")
    _require(m0 >= 1 and m1 >= 1,
             f"family A' needs m0, m1 >= 1, got {m0}, {m1}")
    quiver = two_vertex_quiver(n, with_loop0=m0 >= 2, with_loop1=m1 >= 2)
    rels = []
    if m0 >= 2:
        rels.append(monomial_relation(quiver, "e0", m0))
    if m1 >= 2:
        rels.append(monomial_relation(quiver, "e1", m1))
    bound = max(m0 + m1, 2)
    return BoundQuiver(quiver, rels, bound, name=f"A'({n},{m0},{m1})")


def family_a_prime_commuting(m: int) -> BoundQuiver:
    """One arrow, two order-m loops, and the commuting relation
    e0*a1 - a1*e1."""
    _require(m >= 2, f"the commuting family needs m >= 2, got {m}")
    quiver = two_vertex_quiver(1)
    comm = Relation([(1, quiver.path(["e0", "a1"])),
                     (-1, quiver.path(["a1", "e1"]))])
    rels = [monomial_relation(quiver, "e0", m),
            monomial_relation(quiver, "e1", m),
            comm]
    return BoundQuiver(quiver, rels, 2 * m, name=f"A'comm({m})")


def family_lambda(m: int) -> BoundQuiver:
    """Truncated polynomial algebra: one vertex, one loop e of order m.

    For m = 1 the loop disappears (the algebra is the ground field).
    """
    _require(m >= 1, f"family Lambda needs m >= 1, got {m}")
    if m == 1:
        quiver = Quiver([0], [], name="Lambda(1)")
        return BoundQuiver(quiver, [], 1, name="Lambda(1)")
    quiver = Quiver([0], [("e", 0, 0)], name=f"Lambda({m})")
    return BoundQuiver(quiver, [monomial_relation(quiver, "e", m)], m,
                       name=f"Lambda({m})")


def family_b(n: int, m: int) -> BoundQuiver:
    """The corner family: A(n, m, m-1)."""
    _require(m >= 2, f"family B needs m >= 2, got {m}")
    return family_a(n, m, m - 1)


def build_family(desc: FamilyDescriptor) -> BoundQuiver:
    if desc.kind == "A":
        return family_a(desc.n, desc.m, desc.l)
    if desc.kind == "Aprime":
        return family_a_prime(desc.n, desc.m0, desc.m1)
    if desc.kind == "AprimeCommuting":
        return family_a_prime_commuting(desc.m)
    if desc.kind == "Lambda":
        return family_lambda(desc.m)
    if desc.kind == "B":
        return family_b(desc.n, desc.m)
    raise FamilyParameterError(f"unknown family kind {desc.kind!r}")


def is_geometrically_irreducible_family(desc: FamilyDescriptor) -> bool:
    """Decision table for the named families.

    A(n, m, l) is geometrically irreducible exactly for l = 1 or l = m - 1;
    the loop-only families and the one-vertex family always are, and B is
    the l = m - 1 member of A.
    """
    if desc.kind == "A":
        _require(desc.n is not None and desc.n >= 1, "A: n >= 1 required")
        _require(desc.m is not None and desc.m >= 2, "A: m >= 2 required")
        _require(desc.l is not None and desc.l >= 1, "A: l >= 1 required")
        return desc.l == 1 or desc.l == desc.m - 1
    if desc.kind == "Aprime":
        _require(desc.n is not None and desc.n >= 0, "A': n >= 0 required")
        _require(desc.m0 is not None and desc.m0 >= 1, "A': m0 >= 1 required")
        _require(desc.m1 is not None and desc.m1 >= 1, "A': m1 >= 1 required")
        return True
    if desc.kind == "B":
        _require(desc.n is not None and desc.n >= 1, "B: n >= 1 required")
        _require(desc.m is not None and desc.m >= 2, "B: m >= 2 required")
        return True
    if desc.kind == "Lambda":
        _require(desc.m is not None and desc.m >= 1, "Lambda: m >= 1 required")
        return True
    if desc.kind == "AprimeCommuting":
        _require(desc.m is not None and desc.m >= 2,
                 "commuting family: m >= 2 required")
        return True
    raise FamilyParameterError(f"unknown family kind {desc.kind!r}")


# --- conversion maps ----------------------------------------------------


def _require_valid(rep: Representation):
    if not rep.is_valid():
        raise ValueError("representation violates its defining relations")


def _order_of(pres: BoundQuiver, prefix: str) -> int:
    for rel in pres.relations:
        if rel.is_monomial():
            path = rel.paths()[0]
            if set(path.arrows) == {prefix}:
                return path.length
    raise ValueError(f"presentation has no power relation for {prefix!r}")


def twist_iso(rep: Representation) -> Representation:
    """Negate the e1 matrix: carries points of the commuting family to the
    l = 1 member of family A (and back; over F_2 it is the identity)."""
    _require_valid(rep)
    m = _order_of(rep.pres, "e0")
    target = family_a(1, m, 1)
    mats = dict(rep.mats)
    mats["e1"] = -rep.mats["e1"]
    out = Representation(target, rep.field, rep.dims, mats)
    if not out.is_valid():
        raise AssertionError("twist did not land in the target variety")
    return out


def twist_iso_inverse(rep: Representation) -> Representation:
    """Inverse direction of the twist, into the commuting family."""
    _require_valid(rep)
    m = _order_of(rep.pres, "e0")
    target = family_a_prime_commuting(m)
    mats = dict(rep.mats)
    mats["e1"] = -rep.mats["e1"]
    out = Representation(target, rep.field, rep.dims, mats)
    if not out.is_valid():
        raise AssertionError("twist did not land in the commuting variety")
    return out


def _lambda_rep(m: int, field: Field, mat: Matrix) -> Representation:
    pres = family_lambda(m)
    if m == 1:
        if mat.shape[0] != mat.shape[1]:
            raise ValueError("square matrix required")
        return Representation(pres, field, {0: mat.nrows}, {})
    return Representation(pres, field, {0: mat.nrows}, {"e": mat})


def hom_triple_from_commuting_rep(rep: Representation) -> HomTriple:
    """Read a representation of the commuting family as a homomorphism
    triple over the one-loop algebra.

    The loop at vertex 1 becomes the source module, the loop at vertex 0
    the target, and the arrow matrix the homomorphism between them; the
    commuting relation is exactly the intertwining condition.
    """
    _require_valid(rep)
    m = _order_of(rep.pres, "e0")
    field = rep.field
    src = _lambda_rep(m, field, rep.mats["e1"])
    dst = _lambda_rep(m, field, rep.mats["e0"])
    mor = Morphism(src, dst, {0: rep.mats["a1"]})
    if not mor.intertwines():
        raise AssertionError("commuting relation failed to intertwine")
    return HomTriple(src, dst, mor)


def commuting_rep_from_hom_triple(triple: HomTriple, m: int) -> Representation:
    """Reassemble a commuting-family representation from a triple."""
    if not triple.morphism.intertwines():
        raise ValueError("the triple's map is not a homomorphism")
    pres = family_a_prime_commuting(m)
    field = triple.source.field
    e = triple.source.dims[0]
    d = triple.target.dims[0]
    mats = {
        "e0": triple.target.mats["e"],
        "e1": triple.source.mats["e"],
        "a1": triple.morphism.maps[0],
    }
    out = Representation(pres, field, {0: d, 1: e}, mats)
    _require_valid(out)
    return out


def ext_triple_from_corner_rep(rep: Representation) -> ExtensionTriple:
    """Read a representation of B(1, m) as an extension triple over the
    one-loop algebra.

    The loop at vertex 1 is the quotient, the loop at vertex 0 the sub, and
    the arrow matrix the single cocycle block; the crossing relation of
    B(1, m) is exactly the cocycle equation of the loop power.
    """
    _require_valid(rep)
    m = _order_of(rep.pres, "e0")
    field = rep.field
    quo = _lambda_rep(m, field, rep.mats["e1"])
    sub = _lambda_rep(m, field, rep.mats["e0"])
    return ExtensionTriple(quo, sub, {"e": rep.mats["a1"]})


def corner_rep_from_ext_triple(triple: ExtensionTriple, m: int) -> Representation:
    """Reassemble a B(1, m) representation from an extension triple."""
    pres = family_b(1, m)
    field = triple.quo.field
    e = triple.quo.dims[0]
    d = triple.sub.dims[0]
    lam = family_lambda(m)
    for rel in lam.relations:
        if not cocycle_value(triple.quo, triple.sub, triple.blocks,
                             rel).is_zero():
            raise ValueError("blocks are not a cocycle")
    mats = {
        "e0": triple.sub.mats["e"],
        "e1": triple.quo.mats["e"],
        "a1": triple.blocks["e"],
    }
    out = Representation(pres, field, {0: d, 1: e}, mats)
    _require_valid(out)
    return out


def split_corner_rep(rep: Representation
                     ) -> tuple[Representation, list[Matrix]]:
    """Split a B(n, m) point into its B(1, m) core and the unconstrained
    matrices of the arrows a2..an."""
    _require_valid(rep)
    m = _order_of(rep.pres, "e0")
    n = sum(1 for a in rep.pres.quiver.arrow_names() if a.startswith("a"))
    core_pres = family_b(1, m)
    core = Representation(core_pres, rep.field, rep.dims,
                          {"e0": rep.mats["e0"], "e1": rep.mats["e1"],
                           "a1": rep.mats["a1"]})
    _require_valid(core)
    free = [rep.mats[f"a{i}"] for i in range(2, n + 1)]
    return core, free


def assemble_corner_rep(core: Representation,
                        free: Sequence[Matrix]) -> Representation:
    """Inverse of split_corner_rep."""
    _require_valid(core)
    m = _order_of(core.pres, "e0")
    n = 1 + len(free)
    pres = family_b(n, m)
    mats = {"e0": core.mats["e0"], "e1": core.mats["e1"],
            "a1": core.mats["a1"]}
    for i, mat in enumerate(free, start=2):
        mats[f"a{i}"] = mat
    out = Representation(pres, core.field, core.dims, mats)
    _require_valid(out)
    return out
