"""Representations of bound quivers and the morphisms between them.

A representation assigns a coordinate space k^(d_x) to each vertex and a
matrix to each arrow; it is a point of the representation variety when all
generating relations evaluate to zero.  Everything here is pure and
immutable: base change, Hom spaces, direct sums, and cokernels all return
fresh values.
"""

from __future__ import annotations

from typing import Mapping

from .linalg import Field, Matrix, hstack, vstack
from .quiver import BoundQuiver, Path, QuiverError, Relation, Vertex

DimVector = Mapping[Vertex, int]


def dims_leq(e: DimVector, d: DimVector) -> bool:
    return all(e.get(x, 0) <= d.get(x, 0) for x in set(e) | set(d))


def dims_add(a: DimVector, b: DimVector) -> dict:
    return {x: a.get(x, 0) + b.get(x, 0) for x in set(a) | set(b)}


class Representation:
    """Point of a representation space: one matrix per arrow.

    The matrix of an arrow a: x -> y has shape d_y x d_x.  Validity (all
    generating relations vanish) is a checked predicate, not an invariant.
    """

    def __init__(self, pres: BoundQuiver, field: Field, dims: DimVector,
                 mats: Mapping[str, Matrix]):
        self.pres = pres
        self.field = field
        self.dims = {x: int(dims.get(x, 0)) for x in pres.quiver.vertices}
        if any(v < 0 for v in self.dims.values()):
            raise ValueError("dimensions must be nonnegative")
        quiver = pres.quiver
        store = {}
        for arrow, src, dst in quiver.arrows:
            if arrow not in mats:
                raise ValueError(f"missing matrix for arrow {arrow!r}")
            m = mats[arrow]
            expected = (self.dims[dst], self.dims[src])
            if m.shape != expected:
                raise ValueError(
                    f"arrow {arrow!r}: matrix shape {m.shape} != {expected}")
            if m.field != field:
                raise ValueError(f"arrow {arrow!r}: field mismatch")
            store[arrow] = m
        self.mats = store

    @classmethod
    def zero(cls, pres: BoundQuiver, field: Field,
             dims: DimVector) -> "Representation":
        quiver = pres.quiver
        full = {x: int(dims.get(x, 0)) for x in quiver.vertices}
        mats = {a: Matrix.zeros(field, full[t], full[s])
                for a, s, t in quiver.arrows}
        return cls(pres, field, full, mats)

    def key(self) -> tuple:
        """Hashable canonical form, for set-based point comparisons."""
        return (tuple(sorted(self.dims.items(), key=lambda kv: str(kv[0]))),
                tuple(self.mats[a] for a in self.pres.quiver.arrow_names()))

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and other.pres == self.pres and other.field == self.field
                and other.key() == self.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"Representation({self.pres.name}, {self.field}, "
                f"dims={self.dims})")

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def evaluate_path(self, path: Path) -> Matrix:
        """Product of the arrow matrices along the path (identity for a
        trivial path)."""
        if path.is_trivial():
            return Matrix.identity(self.field, self.dims[path.source])
        result = self.mats[path.arrows[0]]
        for arrow in path.arrows[1:]:
            result = result @ self.mats[arrow]
        return result

    def evaluate_relation(self, rel: Relation) -> Matrix:
        acc = Matrix.zeros(self.field, self.dims[rel.target],
                           self.dims[rel.source])
        for coeff, path in rel.terms:
            acc = acc + self.evaluate_path(path).scale(self.field.coerce(coeff))
        return acc

    def is_valid(self) -> bool:
        """Membership in the representation variety: every generating
        relation evaluates to zero (generators suffice since evaluation is
        an algebra map)."""
        return all(self.evaluate_relation(rel).is_zero()
                   for rel in self.pres.relations)


class Morphism:
    """Vertex-indexed collection of matrices between two representations."""

    def __init__(self, source: Representation, target: Representation,
                 maps: Mapping[Vertex, Matrix]):
        if source.pres != target.pres or source.field != target.field:
            raise ValueError("morphism endpoints live over different data")
        self.source = source
        self.target = target
        self.field = source.field
        store = {}
        for x in source.pres.quiver.vertices:
            if x not in maps:
                raise ValueError(f"missing map at vertex {x!r}")
            m = maps[x]
            expected = (target.dims[x], source.dims[x])
            if m.shape != expected:
                raise ValueError(
                    f"vertex {x!r}: map shape {m.shape} != {expected}")
            store[x] = m
        self.maps = store

    def intertwines(self) -> bool:
        """Check target_a . f_(s a) == f_(t a) . source_a for every arrow."""
        for arrow, src, dst in self.source.pres.quiver.arrows:
            lhs = self.target.mats[arrow] @ self.maps[src]
            rhs = self.maps[dst] @ self.source.mats[arrow]
            if lhs != rhs:
                return False
        return True

    def compose(self, inner: "Morphism") -> "Morphism":
        """self . inner (apply inner first)."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("morphisms do not compose")
        return Morphism(inner.source, self.target,
                        {x: self.maps[x] @ inner.maps[x]
                         for x in self.maps})

    def key(self) -> tuple:
        return tuple(self.maps[x] for x in self.source.pres.quiver.vertices)

    def __eq__(self, other):
        return (isinstance(other, Morphism) and other.source == self.source
                and other.target == self.target and other.key() == self.key())

    def __hash__(self):
        return hash((self.source.key(), self.target.key(), self.key()))

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


class HomTriple:
    """A point (V, W, f) of a homomorphism variety: f : V -> W."""

    def __init__(self, source: Representation, target: Representation,
                 morphism: Morphism):
        if morphism.source != source or morphism.target != target:
            raise ValueError("morphism endpoints do not match the triple")
        self.source = source
        self.target = target
        self.morphism = morphism

    def key(self) -> tuple:
        return (self.source.key(), self.target.key(), self.morphism.key())

    def __eq__(self, other):
        return isinstance(other, HomTriple) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())


def hom_basis(source: Representation, target: Representation) -> list[Morphism]:
    """Deterministic basis of Hom(source, target).

    The intertwining constraints form one homogeneous linear system in the
    stacked entries of all vertex maps; its kernel basis is converted back
    to morphisms.
    """
    if source.pres != target.pres or source.field != target.field:
        raise ValueError("representations live over different data")
    field = source.field
    quiver = source.pres.quiver
    offsets = {}
    total = 0
    for x in quiver.vertices:
        offsets[x] = total
        total += target.dims[x] * source.dims[x]

    def slot(x: Vertex, i: int, j: int) -> int:
        return offsets[x] + i * source.dims[x] + j

    rows = []
    for arrow, src, dst in quiver.arrows:
        t_mat = target.mats[arrow]
        s_mat = source.mats[arrow]
        # (target_a f_src - f_dst source_a)[i, j] = 0
        for i in range(target.dims[dst]):
            for j in range(source.dims[src]):
                row = [field.zero] * total
                for k in range(target.dims[src]):
                    row[slot(src, k, j)] = field.add(
                        row[slot(src, k, j)], t_mat[i, k])
                for k in range(source.dims[dst]):
                    row[slot(dst, i, k)] = field.sub(
                        row[slot(dst, i, k)], s_mat[k, j])
                rows.append(row)

    if rows:
        system = Matrix(field, len(rows), total, rows)
        kernel = system.kernel_basis()
    else:
        kernel = Matrix.zeros(field, 0, total).kernel_basis()

    basis = []
    for vec in kernel:
        maps = {}
        for x in quiver.vertices:
            r, c = target.dims[x], source.dims[x]
            maps[x] = Matrix(field, r, c,
                             [[vec[slot(x, i, j)] for j in range(c)]
                              for i in range(r)])
        basis.append(Morphism(source, target, maps))
    return basis


def is_monomorphism(mor: Morphism) -> bool:
    """True iff the morphism intertwines and every vertex map is injective."""
    if not mor.intertwines():
        raise ValueError("not a homomorphism of representations")
    return all(mor.maps[x].rank() == mor.source.dims[x]
               for x in mor.source.pres.quiver.vertices)


def gl_action(g: Mapping[Vertex, Matrix], rep: Representation) -> Representation:
    """Base change (g * V)_a = g_(t a) V_a g_(s a)^(-1); validity is
    preserved.  Raises if any g_x is singular."""
    quiver = rep.pres.quiver
    inverses = {}
    for x in quiver.vertices:
        if x not in g:
            raise ValueError(f"base change is missing vertex {x!r}")
        gx = g[x]
        if gx.shape != (rep.dims[x], rep.dims[x]):
            raise ValueError(f"vertex {x!r}: base change has wrong shape")
        inverses[x] = gx.inverse()
    mats = {a: g[t] @ rep.mats[a] @ inverses[s] for a, s, t in quiver.arrows}
    return Representation(rep.pres, rep.field, rep.dims, mats)


def simple_module(pres: BoundQuiver, field: Field, x: Vertex) -> Representation:
    """One-dimensional representation concentrated at x, all arrows zero."""
    if x not in set(pres.quiver.vertices):
        raise QuiverError(f"unknown vertex {x!r}")
    dims = {v: 1 if v == x else 0 for v in pres.quiver.vertices}
    return Representation.zero(pres, field, dims)


def direct_sum(a: Representation, b: Representation) -> Representation:
    """Block-diagonal sum; equals the extension with zero blocks."""
    if a.pres != b.pres or a.field != b.field:
        raise ValueError("representations live over different data")
    quiver = a.pres.quiver
    dims = dims_add(a.dims, b.dims)
    mats = {}
    for arrow, src, dst in quiver.arrows:
        za = Matrix.zeros(a.field, a.dims[dst], b.dims[src])
        zb = Matrix.zeros(a.field, b.dims[dst], a.dims[src])
        mats[arrow] = vstack(hstack(a.mats[arrow], za),
                             hstack(zb, b.mats[arrow]))
    return Representation(a.pres, a.field, dims, mats)


def standard_complement(f: Matrix) -> Matrix:
    """Unit columns at the non-pivot rows of the column-reduced input.

    For injective f these complete the image to the full space, giving the
    deterministic complement used for cokernels and splittings.
    """
    field = f.field
    pivot_rows = f.transpose().rref()[1]
    pivot_set = set(pivot_rows)
    free_rows = [i for i in range(f.nrows) if i not in pivot_set]
    cols = []
    for i in free_rows:
        col = [field.zero] * f.nrows
        col[i] = field.one
        cols.append(col)
    return Matrix(field, f.nrows, len(free_rows),
                  [[cols[j][i] for j in range(len(free_rows))]
                   for i in range(f.nrows)])


def cokernel(mor: Morphism) -> tuple[Representation, Morphism]:
    """Cokernel of a monomorphism, with the projection onto it.

    The quotient is realized on the deterministic complement coordinates,
    so building a quotient twice gives identical matrices.
    """
    if not is_monomorphism(mor):
        raise ValueError("cokernel requires a monomorphism")
    field = mor.field
    quiver = mor.source.pres.quiver
    proj_maps = {}
    incl = {}
    dims = {}
    for x in quiver.vertices:
        f = mor.maps[x]
        comp = standard_complement(f)
        g = hstack(f, comp)
        ginv = g.inverse()
        k = comp.ncols
        dims[x] = k
        proj_maps[x] = Matrix(field, k, f.nrows, ginv.rows[f.ncols:])
        incl[x] = comp
    mats = {a: proj_maps[t] @ mor.target.mats[a] @ incl[s]
            for a, s, t in quiver.arrows}
    quotient = Representation(mor.source.pres, field, dims, mats)
    proj = Morphism(mor.target, quotient, proj_maps)
    return quotient, proj
