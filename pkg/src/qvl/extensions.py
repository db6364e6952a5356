"""Extension cocycles and the block construction of extensions.

For representations ``sub`` (dimension d) and ``quo`` (dimension e), an
arrow-indexed family of d_(t a) x e_(s a) blocks is a cocycle when a certain
bilinear expression vanishes on every generating relation; exactly then the
block upper-triangular matrices

    [[sub_a, block_a], [0, quo_a]]

assemble into a valid representation, the middle term of a short exact
sequence sub -> middle -> quo.  The maps here convert between that cocycle
picture and embeddings of ``sub`` into arbitrary middle terms.
"""

from __future__ import annotations

from typing import Mapping

from .linalg import Field, Matrix, hstack, vstack
from .quiver import BoundQuiver, Relation, Vertex
from .reps import (HomTriple, Morphism, Representation, dims_add,
                   is_monomorphism, gl_action, standard_complement)

ArrowBlocks = Mapping[str, Matrix]


def block_shapes(pres: BoundQuiver, sub_dims, quo_dims) -> dict[str, tuple[int, int]]:
    """Shape d_(t a) x e_(s a) of the block attached to each arrow."""
    return {a: (sub_dims.get(t, 0), quo_dims.get(s, 0))
            for a, s, t in pres.quiver.arrows}


def zero_blocks(pres: BoundQuiver, field: Field, sub_dims, quo_dims) -> dict:
    return {a: Matrix.zeros(field, r, c)
            for a, (r, c) in block_shapes(pres, sub_dims, quo_dims).items()}


def _check_block_shapes(quo: Representation, sub: Representation,
                        blocks: ArrowBlocks):
    if quo.pres != sub.pres or quo.field != sub.field:
        raise ValueError("representations live over different data")
    for a, (r, c) in block_shapes(quo.pres, sub.dims, quo.dims).items():
        if a not in blocks:
            raise ValueError(f"missing block for arrow {a!r}")
        if blocks[a].shape != (r, c):
            raise ValueError(
                f"arrow {a!r}: block shape {blocks[a].shape} != {(r, c)}")


def cocycle_value(quo: Representation, sub: Representation,
                  blocks: ArrowBlocks, rel: Relation) -> Matrix:
    """Value of a relation on an arrow-block family.

    For a term c * a_1..a_l the contribution is the sum over j of

        c * sub_(a_1) .. sub_(a_(j-1)) block_(a_j) quo_(a_(j+1)) .. quo_(a_l),

    linear in the blocks and bilinear in (sub, quo).
    """
    _check_block_shapes(quo, sub, blocks)
    field = quo.field
    acc = Matrix.zeros(field, sub.dims[rel.target], quo.dims[rel.source])
    for coeff, path in rel.terms:
        c = field.coerce(coeff)
        arrows = path.arrows
        for j in range(len(arrows)):
            term = blocks[arrows[j]]
            for a in reversed(arrows[:j]):
                term = sub.mats[a] @ term
            for a in arrows[j + 1:]:
                term = term @ quo.mats[a]
            acc = acc + term.scale(c)
    return acc


def is_cocycle(quo: Representation, sub: Representation,
               blocks: ArrowBlocks) -> bool:
    return all(cocycle_value(quo, sub, blocks, rel).is_zero()
               for rel in quo.pres.relations)


def cocycle_space_basis(quo: Representation,
                        sub: Representation) -> list[dict[str, Matrix]]:
    """Deterministic basis of the space of cocycles for the pair.

    The defining map is linear in the blocks, so its matrix is assembled by
    evaluating on unit blocks; the kernel basis is reshaped back into block
    families.
    """
    _check_block_shapes(quo, sub, zero_blocks(quo.pres, quo.field,
                                              sub.dims, quo.dims))
    field = quo.field
    pres = quo.pres
    shapes = block_shapes(pres, sub.dims, quo.dims)
    arrows = pres.quiver.arrow_names()
    offsets = {}
    total = 0
    for a in arrows:
        offsets[a] = total
        r, c = shapes[a]
        total += r * c

    columns: list[list] = []
    out_slots = None
    for a in arrows:
        r, c = shapes[a]
        for i in range(r):
            for j in range(c):
                unit = zero_blocks(pres, field, sub.dims, quo.dims)
                rows = [[field.one if (p, q) == (i, j) else field.zero
                         for q in range(c)] for p in range(r)]
                unit[a] = Matrix(field, r, c, rows)
                values = [cocycle_value(quo, sub, unit, rel)
                          for rel in pres.relations]
                col = [x for m in values for row in m.rows for x in row]
                columns.append(col)
                if out_slots is None:
                    out_slots = len(col)
    if out_slots is None:
        out_slots = 0

    if total == 0:
        return []
    system = Matrix(field, out_slots, total,
                    [[columns[j][i] for j in range(total)]
                     for i in range(out_slots)])
    basis = []
    for vec in system.kernel_basis():
        fam = {}
        for a in arrows:
            r, c = shapes[a]
            off = offsets[a]
            fam[a] = Matrix(field, r, c,
                            [[vec[off + i * c + j] for j in range(c)]
                             for i in range(r)])
        basis.append(fam)
    return basis


class ExtensionTriple:
    """A point (quo, sub, blocks) of an extension variety."""

    def __init__(self, quo: Representation, sub: Representation,
                 blocks: ArrowBlocks, check: bool = True):
        _check_block_shapes(quo, sub, blocks)
        if check and not is_cocycle(quo, sub, blocks):
            raise ValueError("the blocks are not a cocycle for the pair")
        self.quo = quo
        self.sub = sub
        self.blocks = dict(blocks)

    def key(self) -> tuple:
        arrows = self.quo.pres.quiver.arrow_names()
        return (self.quo.key(), self.sub.key(),
                tuple(self.blocks[a] for a in arrows))

    def __eq__(self, other):
        return isinstance(other, ExtensionTriple) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())


def build_extension(quo: Representation, sub: Representation,
                    blocks: ArrowBlocks
                    ) -> tuple[Representation, Morphism, Morphism]:
    """Middle term of the extension determined by a cocycle.

    Returns (middle, incl, proj) where incl embeds ``sub`` as the upper
    block and proj maps onto ``quo``; the sequence is exact.  Raises if the
    blocks fail the cocycle equations.  As a second line of defense the
    assembled representation is re-checked for validity.
    """
    _check_block_shapes(quo, sub, blocks)
    field = quo.field
    pres = quo.pres
    for rel in pres.relations:
        if not cocycle_value(quo, sub, blocks, rel).is_zero():
            raise ValueError(f"blocks violate the cocycle equation of {rel}")
    dims = dims_add(sub.dims, quo.dims)
    mats = {}
    for a, s, t in pres.quiver.arrows:
        zero = Matrix.zeros(field, quo.dims[t], sub.dims[s])
        mats[a] = vstack(hstack(sub.mats[a], blocks[a]),
                         hstack(zero, quo.mats[a]))
    middle = Representation(pres, field, dims, mats)
    if not middle.is_valid():
        raise AssertionError(
            "cocycle equations passed but the assembled representation is "
            "invalid; generating relations are inconsistent")
    incl_maps = {}
    proj_maps = {}
    for x in pres.quiver.vertices:
        d, e = sub.dims[x], quo.dims[x]
        incl_maps[x] = vstack(Matrix.identity(field, d),
                              Matrix.zeros(field, e, d))
        proj_maps[x] = hstack(Matrix.zeros(field, e, d),
                              Matrix.identity(field, e))
    incl = Morphism(sub, middle, incl_maps)
    proj = Morphism(middle, quo, proj_maps)
    return middle, incl, proj


def splitting_from_mono(mor: Morphism,
                        complement: Mapping[Vertex, Matrix] | None = None
                        ) -> tuple[dict[Vertex, Matrix], dict[str, Matrix],
                                   Representation]:
    """Split a monomorphism sub -> middle into normal form.

    Returns (g, blocks, quo) with g_x = [f_x | h_x] invertible such that
    conjugating the middle term by g^(-1) is block upper triangular: the
    upper-left blocks recover the source, the upper-right blocks are a
    cocycle, and the lower-right blocks define the quotient.  When no
    complement h is supplied, unit vectors at the non-pivot rows of the
    column-reduced f are used.
    """
    if not is_monomorphism(mor):
        raise ValueError("splitting requires a monomorphism")
    field = mor.field
    pres = mor.source.pres
    quiver = pres.quiver
    sub, middle = mor.source, mor.target

    g: dict[Vertex, Matrix] = {}
    for x in quiver.vertices:
        f = mor.maps[x]
        h = complement[x] if complement is not None else standard_complement(f)
        if h.shape != (middle.dims[x], middle.dims[x] - sub.dims[x]):
            raise ValueError(f"vertex {x!r}: complement has wrong shape")
        gx = hstack(f, h)
        if not gx.is_invertible():
            raise ValueError(f"vertex {x!r}: [f, h] is singular")
        g[x] = gx

    conjugated = gl_action({x: g[x].inverse() for x in g}, middle)
    quo_dims = {x: middle.dims[x] - sub.dims[x] for x in quiver.vertices}
    blocks = {}
    quo_mats = {}
    for a, s, t in quiver.arrows:
        m = conjugated.mats[a]
        d_t, d_s = sub.dims[t], sub.dims[s]
        lower_left = Matrix(field, quo_dims[t], d_s,
                            [row[:d_s] for row in m.rows[d_t:]])
        if not lower_left.is_zero():
            raise AssertionError(
                "image of the monomorphism is not closed under the arrows")
        upper_left = Matrix(field, d_t, d_s, [row[:d_s] for row in m.rows[:d_t]])
        if upper_left != sub.mats[a]:
            raise AssertionError("conjugation did not reproduce the source")
        blocks[a] = Matrix(field, d_t, quo_dims[s],
                           [row[d_s:] for row in m.rows[:d_t]])
        quo_mats[a] = Matrix(field, quo_dims[t], quo_dims[s],
                             [row[d_s:] for row in m.rows[d_t:]])
    quo = Representation(pres, field, quo_dims, quo_mats)
    return g, blocks, quo


def mono_triple_from_extension(g: Mapping[Vertex, Matrix],
                               triple: ExtensionTriple) -> HomTriple:
    """Turn an extension plus a base change into a monomorphism triple.

    The result is (sub, g * middle, g . incl); its morphism is always a
    monomorphism since the natural inclusion is split injective.
    """
    middle, incl, _ = build_extension(triple.quo, triple.sub, triple.blocks)
    moved = gl_action(g, middle)
    maps = {x: g[x] @ incl.maps[x] for x in middle.pres.quiver.vertices}
    mor = Morphism(triple.sub, moved, maps)
    return HomTriple(triple.sub, moved, mor)


def extension_from_mono(mor: Morphism,
                        complement: Mapping[Vertex, Matrix] | None = None
                        ) -> ExtensionTriple:
    """Extension triple carried by a monomorphism into a middle term.

    The lower-left blocks of the conjugated middle term vanish because the
    image of a homomorphism is a subrepresentation, so the data always
    assembles into a valid triple.
    """
    _, blocks, quo = splitting_from_mono(mor, complement)
    return ExtensionTriple(quo, mor.source, blocks)
