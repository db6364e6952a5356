"""Quivers, paths, relations, and bound quiver presentations.

The path algebra is handled through its length truncations kQ/J^N (J the
arrow ideal): every ideal computation is a finite-dimensional linear algebra
problem in the path basis of a truncation.  A presentation's truncation
bound N certifies that all paths of length N fall into the relation ideal,
so the truncated picture loses nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .linalg import Field, Matrix, QQ

Vertex = Union[int, str]


class QuiverError(ValueError):
    pass


class Quiver:
    """Finite directed multigraph with named arrows.

    Vertices are ints or strings; arrow names are unique strings.  Loops
    (source == target) have degree 0, all other arrows degree 1.
    """

    def __init__(self, vertices: Sequence[Vertex],
                 arrows: Sequence[tuple[str, Vertex, Vertex]],
                 name: str = "Q"):
        if len(set(vertices)) != len(vertices):
            raise QuiverError("duplicate vertex ids")
        self.name = name
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        vertex_set = set(self.vertices)
        seen = set()
        arrow_list = []
        for arrow_name, src, dst in arrows:
            if arrow_name in seen:
                raise QuiverError(f"duplicate arrow id {arrow_name!r}")
            if src not in vertex_set or dst not in vertex_set:
                raise QuiverError(
                    f"arrow {arrow_name!r}: endpoint not a declared vertex")
            seen.add(arrow_name)
            arrow_list.append((arrow_name, src, dst))
        self.arrows: tuple[tuple[str, Vertex, Vertex], ...] = tuple(arrow_list)
        self._source = {a: s for a, s, _ in self.arrows}
        self._target = {a: t for a, _, t in self.arrows}

    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a for a, _, _ in self.arrows)

    def source(self, arrow: str) -> Vertex:
        return self._source[arrow]

    def target(self, arrow: str) -> Vertex:
        return self._target[arrow]

    def has_arrow(self, arrow: str) -> bool:
        return arrow in self._source

    def is_loop(self, arrow: str) -> bool:
        return self._source[arrow] == self._target[arrow]

    def arrow_degree(self, arrow: str) -> int:
        return 0 if self.is_loop(arrow) else 1

    def loops(self) -> tuple[str, ...]:
        return tuple(a for a in self.arrow_names() if self.is_loop(a))

    def loops_at(self, x: Vertex) -> tuple[str, ...]:
        return tuple(a for a in self.loops() if self._source[a] == x)

    def trivial_path(self, x: Vertex) -> "Path":
        if x not in set(self.vertices):
            raise QuiverError(f"unknown vertex {x!r}")
        return Path((), source=x, target=x, degree=0)

    def path(self, arrows: Sequence[str]) -> "Path":
        """Path from an arrow sequence a1..al, with al applied first."""
        if not arrows:
            raise QuiverError("a nonempty arrow sequence is required; "
                              "use trivial_path for length 0")
        degree = 0
        for i, a in enumerate(arrows):
            if a not in self._source:
                raise QuiverError(f"unknown arrow {a!r}")
            degree += self.arrow_degree(a)
            if i + 1 < len(arrows) and self._source[a] != self._target[arrows[i + 1]]:
                raise QuiverError(
                    f"arrows {a!r} and {arrows[i + 1]!r} do not compose")
        return Path(tuple(arrows),
                    source=self._source[arrows[-1]],
                    target=self._target[arrows[0]],
                    degree=degree)

    def compose(self, left: "Path", right: "Path") -> "Path":
        """Product left*right: apply right first, then left."""
        if right.target != left.source:
            raise QuiverError("paths do not compose")
        if not left.arrows:
            return right
        if not right.arrows:
            return left
        return Path(left.arrows + right.arrows, source=right.source,
                    target=left.target, degree=left.degree + right.degree)

    def paths_up_to(self, max_length: int) -> list["Path"]:
        """All paths of length <= max_length, sorted length-first then by
        arrow-id sequence (lexicographic); trivial paths in vertex order."""
        out: list[Path] = [self.trivial_path(x) for x in self.vertices]
        current = [self.path([a]) for a, _, _ in self.arrows]
        length = 1
        while length <= max_length and current:
            current.sort(key=lambda p: p.arrows)
            out.extend(current)
            nxt = []
            for p in current:
                if length + 1 > max_length:
                    break
                for a, _, dst in self.arrows:
                    if dst == p.source:
                        nxt.append(Path((*p.arrows, a), source=self._source[a],
                                        target=p.target,
                                        degree=p.degree + self.arrow_degree(a)))
            current = nxt
            length += 1
        return out

    def __eq__(self, other):
        return (isinstance(other, Quiver) and other.vertices == self.vertices
                and other.arrows == self.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return (f"Quiver({self.name!r}, vertices={list(self.vertices)}, "
                f"arrows={list(self.arrows)})")


@dataclass(frozen=True)
class Path:
    """Composable arrow sequence a1..al (al applied first) or a trivial path.

    Trivial paths have an empty arrow tuple and source == target.
    """

    arrows: tuple[str, ...]
    source: Vertex
    target: Vertex
    degree: int

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_trivial(self) -> bool:
        return not self.arrows

    def sort_key(self) -> tuple:
        return (self.length, self.arrows, str(self.source))

    def contains_subpath(self, other: "Path") -> bool:
        """Contiguous subword test on the arrow sequences."""
        if other.is_trivial():
            return True
        k = other.length
        return any(self.arrows[i:i + k] == other.arrows
                   for i in range(self.length - k + 1))

    def __str__(self):
        if not self.arrows:
            return f"1_{self.source}"
        return "*".join(self.arrows)


def power(quiver: Quiver, arrow: str, k: int) -> Path:
    """The path arrow^k; k = 0 gives the trivial path at its source."""
    if k == 0:
        return quiver.trivial_path(quiver.source(arrow))
    return quiver.path([arrow] * k)


class Relation:
    """Linear combination of parallel paths of length >= 2.

    Terms are merged, zero coefficients dropped, and the survivors stored
    sorted by the length-lexicographic path order, so equal relations
    compare equal.
    """

    def __init__(self, terms: Iterable[tuple[Fraction | int | str, Path]]):
        merged: dict[Path, Fraction] = {}
        for coeff, path in terms:
            c = Fraction(coeff)
            merged[path] = merged.get(path, Fraction(0)) + c
        cleaned = [(c, p) for p, c in merged.items() if c != 0]
        if not cleaned:
            raise QuiverError("relation has no nonzero terms")
        paths = [p for _, p in cleaned]
        src, dst = paths[0].source, paths[0].target
        for p in paths:
            if p.source != src or p.target != dst:
                raise QuiverError("relation terms are not parallel")
            if p.length < 2:
                raise QuiverError(
                    f"relation term {p} has length {p.length} < 2")
        cleaned.sort(key=lambda t: t[1].sort_key())
        self.terms: tuple[tuple[Fraction, Path], ...] = tuple(cleaned)
        self.source: Vertex = src
        self.target: Vertex = dst

    @property
    def degree(self) -> int:
        return min(p.degree for _, p in self.terms)

    def paths(self) -> tuple[Path, ...]:
        return tuple(p for _, p in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other):
        return isinstance(other, Relation) and other.terms == self.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self):
        parts = []
        for c, p in self.terms:
            prefix = "" if c == 1 else f"{c}*"
            parts.append(f"{prefix}{p}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Relation({self})"


def monomial_relation(quiver: Quiver, arrow: str, k: int) -> Relation:
    return Relation([(1, power(quiver, arrow, k))])


def degree(obj: Union[Path, Relation]) -> int:
    """Degree of a path or relation (loops count 0, other arrows 1)."""
    return obj.degree


def is_weakly_triangular(quiver: Quiver) -> bool:
    """True iff the quiver has no oriented cycle of positive degree.

    Equivalent test: no non-loop arrow x -> y admits a return path y -> x.
    """
    adj: dict[Vertex, set[Vertex]] = {v: set() for v in quiver.vertices}
    for a, s, t in quiver.arrows:
        if s != t:
            adj[s].add(t)

    def reaches(start: Vertex, goal: Vertex) -> bool:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            if v == goal:
                return True
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    return not any(s != t and reaches(t, s) for _, s, t in quiver.arrows)


# --- truncated path algebra -------------------------------------------


class AlgebraElement:
    """Element of the truncated path algebra kQ/J^bound.

    Stored as a path -> Fraction mapping; paths of length >= bound are
    dropped at construction.
    """

    def __init__(self, quiver: Quiver, bound: int,
                 coeffs: Mapping[Path, Fraction | int] | None = None):
        self.quiver = quiver
        self.bound = bound
        data = {}
        if coeffs:
            for path, c in coeffs.items():
                c = Fraction(c)
                if c != 0 and path.length < bound:
                    data[path] = data.get(path, Fraction(0)) + c
        self.coeffs: dict[Path, Fraction] = {p: c for p, c in data.items()
                                             if c != 0}

    @classmethod
    def from_path(cls, quiver: Quiver, bound: int, path: Path) -> "AlgebraElement":
        return cls(quiver, bound, {path: Fraction(1)})

    @classmethod
    def from_relation(cls, quiver: Quiver, bound: int,
                      rel: Relation) -> "AlgebraElement":
        return cls(quiver, bound, {p: c for c, p in rel.terms})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        merged = dict(self.coeffs)
        for p, c in other.coeffs.items():
            merged[p] = merged.get(p, Fraction(0)) + c
        return AlgebraElement(self.quiver, self.bound, merged)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.quiver, self.bound,
                              {p: c * v for p, v in self.coeffs.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        out: dict[Path, Fraction] = {}
        for p1, c1 in self.coeffs.items():
            for p2, c2 in other.coeffs.items():
                if p2.target != p1.source:
                    continue
                if p1.length + p2.length >= self.bound:
                    continue
                prod = self.quiver.compose(p1, p2)
                out[prod] = out.get(prod, Fraction(0)) + c1 * c2
        return AlgebraElement(self.quiver, self.bound, out)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and other.coeffs == self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "AlgebraElement(0)"
        parts = [f"{c}*{p}" for p, c in sorted(self.coeffs.items(),
                                               key=lambda kv: kv[0].sort_key())]
        return f"AlgebraElement({' + '.join(parts)})"


class PathBasis:
    """Indexed path basis of kQ/J^bound (all paths of length < bound)."""

    def __init__(self, quiver: Quiver, bound: int):
        self.quiver = quiver
        self.bound = bound
        self.paths: list[Path] = quiver.paths_up_to(bound - 1)
        self.index: dict[Path, int] = {p: i for i, p in enumerate(self.paths)}

    @property
    def dim(self) -> int:
        return len(self.paths)

    def vector(self, elem: AlgebraElement, field: Field) -> tuple:
        v = [field.zero] * self.dim
        for path, c in elem.coeffs.items():
            v[self.index[path]] = field.coerce(c)
        return tuple(v)


class Subspace:
    """Row space in RREF over a field, with membership tests."""

    def __init__(self, field: Field, ambient_dim: int,
                 vectors: Iterable[Sequence] = ()):
        self.field = field
        self.ambient_dim = ambient_dim
        rows = [list(v) for v in vectors]
        if rows:
            m = Matrix(field, len(rows), ambient_dim, rows)
            red, pivots = m.rref()
            self.rows = tuple(red.rows[i] for i in range(len(pivots)))
            self.pivots = pivots
        else:
            self.rows = ()
            self.pivots = ()

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence) -> tuple:
        f = self.field
        v = [f.coerce(x) for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            if v[pc] != f.zero:
                factor = v[pc]
                v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vec: Sequence) -> bool:
        z = self.field.zero
        return all(x == z for x in self.reduce(vec))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.field == self.field
                and other.ambient_dim == self.ambient_dim
                and other.rows == self.rows)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.rows)


# --- bound quiver presentations ----------------------------------------


class BoundQuiver:
    """Quiver plus relation generators and a truncation bound N.

    N certifies that every path of length N lies in the relation ideal;
    this is verified at construction by linear algebra in kQ/J^(N+1).
    All values are immutable after construction.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation],
                 truncation_bound: int, name: str | None = None,
                 check: bool = True):
        if truncation_bound < 1:
            raise QuiverError("truncation bound must be at least 1")
        self.quiver = quiver
        self.relations: tuple[Relation, ...] = tuple(relations)
        self.truncation_bound = truncation_bound
        self.name = name or quiver.name
        for rel in self.relations:
            for _, p in rel.terms:
                for a in p.arrows:
                    if not quiver.has_arrow(a):
                        raise QuiverError(f"relation uses unknown arrow {a!r}")
        if check:
            self._check_truncation_bound()

    def _check_truncation_bound(self):
        n = self.truncation_bound
        span = ideal_subspace(self, bound=n + 1)
        basis = self.path_basis(n + 1)
        for path in self.quiver.paths_up_to(n):
            if path.length != n:
                continue
            vec = basis.vector(
                AlgebraElement.from_path(self.quiver, n + 1, path), QQ)
            if not span.contains(vec):
                raise QuiverError(
                    f"path {path} of length {n} is not in the relation ideal; "
                    f"{n} is not a valid truncation bound")

    def path_basis(self, bound: int | None = None) -> PathBasis:
        return PathBasis(self.quiver, bound or self.truncation_bound)

    def element(self, coeffs: Mapping[Path, Fraction | int],
                bound: int | None = None) -> AlgebraElement:
        return AlgebraElement(self.quiver, bound or self.truncation_bound,
                              coeffs)

    def __eq__(self, other):
        return (isinstance(other, BoundQuiver)
                and other.quiver == self.quiver
                and other.relations == self.relations
                and other.truncation_bound == self.truncation_bound)

    def __hash__(self):
        return hash((self.quiver, self.relations, self.truncation_bound))

    def __repr__(self):
        return (f"BoundQuiver({self.name!r}, {len(self.relations)} relations, "
                f"N={self.truncation_bound})")


def _ideal_rows(pres: BoundQuiver, relations: Sequence[Relation], bound: int,
                field: Field, require_padding: bool | None = None
                ) -> list[tuple]:
    """Vectors spanning the two-sided ideal of the given relations in
    kQ/J^bound.  With require_padding True only products p*rel*q with a
    nontrivial p or q are taken (the span of I*J + J*I); with False only
    the bare relations; with None everything."""
    quiver = pres.quiver
    basis = PathBasis(quiver, bound)
    all_paths = quiver.paths_up_to(bound - 1)
    rows = []
    for rel in relations:
        elem = AlgebraElement.from_relation(quiver, bound, rel)
        min_len = min(p.length for _, p in rel.terms)
        for left in all_paths:
            if left.source != rel.target:
                continue
            if left.length + min_len >= bound:
                continue
            for right in all_paths:
                if right.target != rel.source:
                    continue
                if left.length + min_len + right.length >= bound:
                    continue
                if require_padding is True and left.is_trivial() \
                        and right.is_trivial():
                    continue
                if require_padding is False and not (
                        left.is_trivial() and right.is_trivial()):
                    continue
                prod = AlgebraElement.from_path(quiver, bound, left) * elem \
                    * AlgebraElement.from_path(quiver, bound, right)
                if not prod.is_zero():
                    rows.append(basis.vector(prod, field))
    return rows


def ideal_subspace(pres: BoundQuiver, relations: Sequence[Relation] | None = None,
                   bound: int | None = None, field: Field = QQ) -> Subspace:
    """Span of the two-sided ideal generated by the relations inside
    kQ/J^bound, in the path basis.  Defaults: the presentation's own
    relations and truncation bound, coefficients over Q."""
    rels = pres.relations if relations is None else tuple(relations)
    n = bound or pres.truncation_bound
    rows = _ideal_rows(pres, rels, n, field)
    ambient = PathBasis(pres.quiver, n).dim
    return Subspace(field, ambient, rows)


def ideal_membership(elem: AlgebraElement, pres: BoundQuiver,
                     field: Field = QQ) -> bool:
    """True iff the element lies in the relation ideal of the presentation.

    Valid for elements of kQ/J^N since the ideal contains J^N.
    """
    bound = max(elem.bound, pres.truncation_bound)
    span = ideal_subspace(pres, bound=bound, field=field)
    basis = PathBasis(pres.quiver, bound)
    lifted = AlgebraElement(pres.quiver, bound, elem.coeffs)
    return span.contains(basis.vector(lifted, field))


def loop_nilpotency_index(pres: BoundQuiver, loop: str,
                          field: Field = QQ) -> int:
    """Minimal m >= 1 with loop^m in the relation ideal."""
    if not pres.quiver.is_loop(loop):
        raise QuiverError(f"{loop!r} is not a loop")
    n = pres.truncation_bound
    span = ideal_subspace(pres, bound=n + 1, field=field)
    basis = pres.path_basis(n + 1)
    for m in range(1, n + 1):
        elem = AlgebraElement.from_path(
            pres.quiver, n + 1, power(pres.quiver, loop, m))
        if span.contains(basis.vector(elem, field)):
            return m
    raise QuiverError(
        f"no power of {loop!r} up to {n} lies in the ideal; "
        "the truncation bound is inconsistent")


def _generates_same_ideal(pres: BoundQuiver, relations: Sequence[Relation],
                          bound: int, field: Field) -> bool:
    ours = ideal_subspace(pres, relations=relations, bound=bound, field=field)
    full = ideal_subspace(pres, bound=bound, field=field)
    return ours == full


def is_minimal_relation_set(relations: Sequence[Relation], pres: BoundQuiver,
                            field: Field = QQ) -> bool:
    """True iff the set generates the presentation's ideal and dropping any
    single relation strictly shrinks it.

    Computed in kQ/J^(N+1): one step beyond the truncation bound, where the
    comparison is insensitive to further enlarging the bound.
    """
    rels = tuple(relations)
    bound = pres.truncation_bound + 1
    if not _generates_same_ideal(pres, rels, bound, field):
        raise QuiverError(
            "the given relations do not generate the presentation's ideal")
    full_dim = ideal_subspace(pres, relations=rels, bound=bound,
                              field=field).dim
    for i in range(len(rels)):
        rest = rels[:i] + rels[i + 1:]
        sub = ideal_subspace(pres, relations=rest, bound=bound, field=field)
        if sub.dim == full_dim:
            return False
    return True


def is_normalized_relation_set(relations: Sequence[Relation],
                               pres: BoundQuiver, field: Field = QQ) -> bool:
    """True iff the set is minimal, generating, and for every loop a the
    power a^(m_a) appears in the set as the unique element with a summand
    containing a^(m_a) as a subpath."""
    rels = tuple(relations)
    if not is_minimal_relation_set(rels, pres, field=field):
        raise QuiverError("relation set is not minimal")
    quiver = pres.quiver
    for loop in quiver.loops():
        m = loop_nilpotency_index(pres, loop, field=field)
        loop_power = power(quiver, loop, m)
        holders = [rel for rel in rels
                   if any(p.contains_subpath(loop_power) for p in rel.paths())]
        if len(holders) != 1:
            return False
        holder = holders[0]
        if not (holder.is_monomial() and holder.paths() == (loop_power,)):
            return False
    return True


def ext2_dimension(pres: BoundQuiver, relations: Sequence[Relation],
                   x: Vertex, y: Vertex,
                   field: Field = QQ) -> tuple[int, int]:
    """Relation count from x to y in a minimal generating set, paired with
    the dimension of the corresponding corner of I/(IJ + JI).

    The two numbers agree for weakly triangular presentations and x != y;
    a mismatch indicates a broken relation set and is reported as is.
    """
    if x == y:
        raise QuiverError("the relation-count formula requires x != y")
    if not is_weakly_triangular(pres.quiver):
        raise QuiverError("presentation is not weakly triangular")
    rels = tuple(relations)
    if not is_minimal_relation_set(rels, pres, field=field):
        raise QuiverError("relation set is not a minimal generating set")
    count = sum(1 for rel in rels if rel.source == x and rel.target == y)

    bound = pres.truncation_bound + 1
    basis = PathBasis(pres.quiver, bound)
    block = [i for i, p in enumerate(basis.paths)
             if p.source == x and p.target == y]
    block_pos = {full: i for i, full in enumerate(block)}

    def restrict(rows):
        out = []
        for row in rows:
            if any(row[i] != field.zero for i in block):
                out.append(tuple(row[i] for i in block))
        return out

    ideal_rows = restrict(_ideal_rows(pres, rels, bound, field))
    padded_rows = restrict(_ideal_rows(pres, rels, bound, field,
                                       require_padding=True))
    dim_ideal = Subspace(field, len(block), ideal_rows).dim
    dim_radical = Subspace(field, len(block), padded_rows).dim
    return count, dim_ideal - dim_radical


def is_simple_loop_extension(pres: BoundQuiver) -> bool:
    """True iff every generating relation is a combination of words in the
    loops at one vertex and no vertex carries more than one loop."""
    quiver = pres.quiver
    for x in quiver.vertices:
        if len(quiver.loops_at(x)) > 1:
            return False
    for rel in pres.relations:
        for p in rel.paths():
            if any(not quiver.is_loop(a) for a in p.arrows):
                return False
            anchors = {quiver.source(a) for a in p.arrows}
            if len(anchors) > 1:
                return False
    return True


def _support_of_path(quiver: Quiver, path: Path) -> frozenset:
    visited = {path.target}
    for a in path.arrows:
        visited.add(quiver.source(a))
        visited.add(quiver.target(a))
    return frozenset(visited)


def decompose_by_support(rel: Relation, quiver: Quiver) -> dict[frozenset, Relation]:
    """Partition a relation as a sum of sub-relations grouped by the vertex
    set each term visits; the pieces sum back to the input."""
    groups: dict[frozenset, list] = {}
    for coeff, path in rel.terms:
        key = _support_of_path(quiver, path)
        groups.setdefault(key, []).append((coeff, path))
    return {k: Relation(v) for k, v in groups.items()}
