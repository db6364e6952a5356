"""Exhaustive point enumeration of representation-type varieties over F_q.

Counts are exact: a point is counted only after its defining equations are
checked, and linear fibers (homomorphism spaces, cocycle spaces, arrow
blocks constrained linearly by relations) are counted through exact kernel
computations instead of being walked pointwise.  The enumeration order is
fixed (arrows in declaration order, matrix entries row-major, field elements
ascending), so identical queries give identical traversals.

Point counts over finite fields are evidence about the geometry over an
algebraically closed field, never proof; only reducibility witnesses and
count identities produced here are certificates.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from math import log
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .extensions import cocycle_space_basis, zero_blocks
from .families import family_a, family_a_prime, family_b
from .linalg import Matrix, PrimeField
from .quiver import BoundQuiver
from .reps import HomTriple, Morphism, Representation, hom_basis, is_monomorphism

DEFAULT_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get("QVL_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QVL_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("QVL_BUDGET must be positive")
    return value


class _Meter:
    """Counts explicit enumeration steps against the budget."""

    __slots__ = ("budget", "used")

    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self, k: int = 1):
        self.used += k
        if self.used > self.budget:
            raise BudgetExceededError(
                f"enumeration exceeded the budget of {self.budget} steps")

    def precheck(self, planned: int):
        if planned > self.budget - self.used:
            raise BudgetExceededError(
                f"planned enumeration of {planned} points exceeds the "
                f"budget of {self.budget}")


# --- task descriptions ---------------------------------------------------


@dataclass
class EnumerationTask:
    """One counting job: a variety kind, its data, and a step budget."""

    kind: str
    pres: Optional[BoundQuiver] = None
    field: Optional[PrimeField] = None
    dims: Optional[Mapping] = None         # rep
    source_dims: Optional[Mapping] = None  # hom / mono
    target_dims: Optional[Mapping] = None  # hom / mono
    quo_dims: Optional[Mapping] = None     # ext
    sub_dims: Optional[Mapping] = None     # ext
    ambient: Optional[int] = None          # custom
    predicate: Optional[Callable[[tuple], bool]] = None  # custom
    budget: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("rep", "hom", "mono", "ext", "custom"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.kind == "custom":
            if self.ambient is None or self.predicate is None \
                    or self.field is None:
                raise ValueError(
                    "custom tasks need field, ambient, and predicate")
        else:
            if self.pres is None or self.field is None:
                raise ValueError("variety tasks need pres and field")
        if self.kind == "rep" and self.dims is None:
            raise ValueError("rep tasks need dims")
        if self.kind in ("hom", "mono") and (
                self.source_dims is None or self.target_dims is None):
            raise ValueError("hom/mono tasks need source_dims and target_dims")
        if self.kind == "ext" and (self.quo_dims is None
                                   or self.sub_dims is None):
            raise ValueError("ext tasks need quo_dims and sub_dims")

    def resolved_budget(self) -> int:
        return self.budget if self.budget is not None else default_budget()


def rep_ambient_dim(pres: BoundQuiver, dims: Mapping) -> int:
    return sum(dims.get(t, 0) * dims.get(s, 0)
               for _, s, t in pres.quiver.arrows)


def ambient_dimension(task: EnumerationTask) -> int:
    """Coordinate count of the affine space the variety naturally sits in."""
    if task.kind == "custom":
        return task.ambient
    if task.kind == "rep":
        return rep_ambient_dim(task.pres, task.dims)
    if task.kind in ("hom", "mono"):
        maps_dim = sum(task.target_dims.get(x, 0) * task.source_dims.get(x, 0)
                       for x in task.pres.quiver.vertices)
        return (rep_ambient_dim(task.pres, task.source_dims)
                + rep_ambient_dim(task.pres, task.target_dims) + maps_dim)
    blocks_dim = sum(task.sub_dims.get(t, 0) * task.quo_dims.get(s, 0)
                     for _, s, t in task.pres.quiver.arrows)
    return (rep_ambient_dim(task.pres, task.quo_dims)
            + rep_ambient_dim(task.pres, task.sub_dims) + blocks_dim)


# --- representation points ----------------------------------------------


def _rep_slots(pres: BoundQuiver, dims: Mapping,
               arrow_order: Sequence[str] | None = None):
    """(arrow, shape) in enumeration order with the per-arrow entry count."""
    order = arrow_order or pres.quiver.arrow_names()
    if sorted(order) != sorted(pres.quiver.arrow_names()):
        raise ValueError("arrow_order must be a permutation of the arrows")
    out = []
    for a in order:
        s, t = pres.quiver.source(a), pres.quiver.target(a)
        out.append((a, dims.get(t, 0), dims.get(s, 0)))
    return out


def _mats_from_assignment(field, slots, values) -> dict:
    mats = {}
    pos = 0
    for a, r, c in slots:
        k = r * c
        chunk = values[pos:pos + k]
        pos += k
        mats[a] = Matrix(field, r, c,
                         [chunk[i * c:(i + 1) * c] for i in range(r)])
    return mats


def _relations_hold(pres: BoundQuiver, field, dims, mats) -> bool:
    probe = Representation(pres, field, dims, mats)
    return probe.is_valid()


def iter_rep_points_odometer(pres: BoundQuiver, field: PrimeField,
                             dims: Mapping,
                             arrow_order: Sequence[str] | None = None,
                             meter: _Meter | None = None
                             ) -> Iterator[Representation]:
    """Walk the full ambient coordinate space and keep the valid points."""
    slots = _rep_slots(pres, dims, arrow_order)
    total = sum(r * c for _, r, c in slots)
    if meter is not None:
        meter.precheck(field.p ** total)
    for values in itertools.product(field.elements(), repeat=total):
        if meter is not None:
            meter.tick()
        mats = _mats_from_assignment(field, slots, values)
        rep = Representation(pres, field, dims, mats)
        if rep.is_valid():
            yield rep


def _classify_relations(pres: BoundQuiver):
    """Split relations into loop-only and arrow-linear classes.

    Returns (loop_rels, linear_rels) or None when some relation fits
    neither class (a term with two or more non-loop arrows, or a mix of
    pure-loop and arrow terms)."""
    quiver = pres.quiver
    loop_rels, linear_rels = [], []
    for rel in pres.relations:
        arrow_counts = {sum(0 if quiver.is_loop(a) else 1 for a in p.arrows)
                        for p in rel.paths()}
        if arrow_counts == {0}:
            loop_rels.append(rel)
        elif arrow_counts == {1}:
            linear_rels.append(rel)
        else:
            return None
    return loop_rels, linear_rels


def _eval_loop_path(field, loop_mats, dims, arrows, at_vertex) -> Matrix:
    if not arrows:
        return Matrix.identity(field, dims.get(at_vertex, 0))
    result = loop_mats[arrows[0]]
    for a in arrows[1:]:
        result = result @ loop_mats[a]
    return result


def _linear_system_for_arrows(pres: BoundQuiver, field, dims, loop_mats,
                              linear_rels):
    """Matrix of the linear constraints the non-loop arrow entries satisfy
    once the loop matrices are fixed."""
    quiver = pres.quiver
    arrow_slots = []
    offsets = {}
    total = 0
    for a, s, t in quiver.arrows:
        if quiver.is_loop(a):
            continue
        r, c = dims.get(t, 0), dims.get(s, 0)
        offsets[a] = total
        arrow_slots.append((a, r, c))
        total += r * c
    rows = []
    for rel in linear_rels:
        out_r = dims.get(rel.target, 0)
        out_c = dims.get(rel.source, 0)
        cells = [[[field.zero] * total for _ in range(out_c)]
                 for _ in range(out_r)]
        for coeff, path in rel.terms:
            c_val = field.coerce(coeff)
            j = next(i for i, a in enumerate(path.arrows)
                     if not quiver.is_loop(a))
            arrow = path.arrows[j]
            prefix = path.arrows[:j]
            suffix = path.arrows[j + 1:]
            pre = _eval_loop_path(field, loop_mats, dims, prefix,
                                  quiver.target(arrow))
            suf = _eval_loop_path(field, loop_mats, dims, suffix, rel.source)
            ar, ac = dims.get(quiver.target(arrow), 0), dims.get(
                quiver.source(arrow), 0)
            base = offsets[arrow]
            for u in range(out_r):
                for v in range(out_c):
                    row = cells[u][v]
                    for r_i in range(ar):
                        pre_ur = pre[u, r_i]
                        if pre_ur == field.zero:
                            continue
                        for s_i in range(ac):
                            suf_sv = suf[s_i, v]
                            if suf_sv == field.zero:
                                continue
                            slot = base + r_i * ac + s_i
                            row[slot] = field.add(
                                row[slot],
                                field.mul(c_val, field.mul(pre_ur, suf_sv)))
        for u in range(out_r):
            for v in range(out_c):
                rows.append(cells[u][v])
    system = Matrix(field, len(rows), total, rows) if rows else \
        Matrix.zeros(field, 0, total)
    return arrow_slots, total, system


def _iter_loop_assignments(pres: BoundQuiver, field, dims, loop_rels,
                           meter: _Meter | None):
    quiver = pres.quiver
    loop_slots = [(a, dims.get(quiver.source(a), 0),
                   dims.get(quiver.source(a), 0))
                  for a in quiver.arrow_names() if quiver.is_loop(a)]
    total = sum(r * c for _, r, c in loop_slots)
    if meter is not None:
        meter.precheck(field.p ** total)
    for values in itertools.product(field.elements(), repeat=total):
        if meter is not None:
            meter.tick()
        loop_mats = _mats_from_assignment(field, loop_slots, values)
        ok = True
        for rel in loop_rels:
            acc = None
            for coeff, path in rel.terms:
                term = _eval_loop_path(field, loop_mats, dims, path.arrows,
                                       path.source).scale(field.coerce(coeff))
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                ok = False
                break
        if ok:
            yield loop_mats


def layered_applicable(pres: BoundQuiver) -> bool:
    return _classify_relations(pres) is not None


def count_rep_points_layered(pres: BoundQuiver, field: PrimeField,
                             dims: Mapping, meter: _Meter) -> int:
    split = _classify_relations(pres)
    if split is None:
        raise ValueError("layered enumeration does not apply")
    loop_rels, linear_rels = split
    count = 0
    for loop_mats in _iter_loop_assignments(pres, field, dims, loop_rels,
                                            meter):
        _, total, system = _linear_system_for_arrows(
            pres, field, dims, loop_mats, linear_rels)
        free = total - system.rank()
        count += field.p ** free
    return count


def iter_rep_points_layered(pres: BoundQuiver, field: PrimeField,
                            dims: Mapping, meter: _Meter | None = None
                            ) -> Iterator[Representation]:
    split = _classify_relations(pres)
    if split is None:
        raise ValueError("layered enumeration does not apply")
    loop_rels, linear_rels = split
    for loop_mats in _iter_loop_assignments(pres, field, dims, loop_rels,
                                            meter):
        arrow_slots, total, system = _linear_system_for_arrows(
            pres, field, dims, loop_mats, linear_rels)
        kernel = system.kernel_basis()
        for coeffs in itertools.product(field.elements(),
                                        repeat=len(kernel)):
            if meter is not None:
                meter.tick()
            values = [field.zero] * total
            for c, vec in zip(coeffs, kernel):
                if c == field.zero:
                    continue
                values = [field.add(v, field.mul(c, b))
                          for v, b in zip(values, vec)]
            mats = dict(loop_mats)
            mats.update(_mats_from_assignment(field, arrow_slots, values))
            yield Representation(pres, field, dims, mats)


def iter_rep_points(pres: BoundQuiver, field: PrimeField, dims: Mapping,
                    meter: _Meter | None = None,
                    strategy: str = "auto") -> Iterator[Representation]:
    """Deterministic, duplicate-free stream of all variety points.

    ``strategy`` is "odometer", "layered", or "auto" (layered whenever the
    relations allow it); both strategies produce the same point set.
    """
    if strategy == "odometer":
        return iter_rep_points_odometer(pres, field, dims, meter=meter)
    if strategy == "layered":
        return iter_rep_points_layered(pres, field, dims, meter=meter)
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")
    if layered_applicable(pres):
        return iter_rep_points_layered(pres, field, dims, meter=meter)
    return iter_rep_points_odometer(pres, field, dims, meter=meter)


def count_rep_points(pres: BoundQuiver, field: PrimeField, dims: Mapping,
                     budget: int | None = None,
                     strategy: str = "auto", parts: int = 1) -> int:
    """Exact number of valid points, optionally summed over ``parts``
    round-robin partitions of the outer enumeration (a determinism check:
    every partitioning gives the same total)."""
    meter = _Meter(budget if budget is not None else default_budget())
    if strategy == "auto" and layered_applicable(pres):
        strategy = "layered"
    if strategy == "layered":
        if parts == 1:
            return count_rep_points_layered(pres, field, dims, meter)
        split = _classify_relations(pres)
        loop_rels, linear_rels = split
        totals = [0] * parts
        for i, loop_mats in enumerate(_iter_loop_assignments(
                pres, field, dims, loop_rels, meter)):
            _, total, system = _linear_system_for_arrows(
                pres, field, dims, loop_mats, linear_rels)
            totals[i % parts] += field.p ** (total - system.rank())
        return sum(totals)
    totals = [0] * parts
    for i, _rep in enumerate(iter_rep_points_odometer(
            pres, field, dims, meter=meter)):
        totals[i % parts] += 1
    return sum(totals)


# --- hom / mono / ext points ---------------------------------------------


def _combo_morphism(source, target, basis, coeffs) -> Morphism:
    field = source.field
    quiver = source.pres.quiver
    maps = {}
    for x in quiver.vertices:
        acc = Matrix.zeros(field, target.dims[x], source.dims[x])
        for c, mor in zip(coeffs, basis):
            if c != field.zero:
                acc = acc + mor.maps[x].scale(c)
        maps[x] = acc
    return Morphism(source, target, maps)


def iter_hom_points(pres: BoundQuiver, field: PrimeField, source_dims,
                    target_dims, meter: _Meter | None = None
                    ) -> Iterator[HomTriple]:
    sources = list(iter_rep_points(pres, field, source_dims, meter=meter))
    targets = list(iter_rep_points(pres, field, target_dims, meter=meter))
    for src in sources:
        for dst in targets:
            basis = hom_basis(src, dst)
            for coeffs in itertools.product(field.elements(),
                                            repeat=len(basis)):
                if meter is not None:
                    meter.tick()
                yield HomTriple(src, dst,
                                _combo_morphism(src, dst, basis, coeffs))


def count_hom_points(pres: BoundQuiver, field: PrimeField, source_dims,
                     target_dims, budget: int | None = None) -> int:
    """Sum of q^dim Hom over all source/target point pairs (each linear
    homomorphism space is counted exactly, not walked)."""
    meter = _Meter(budget if budget is not None else default_budget())
    sources = list(iter_rep_points(pres, field, source_dims, meter=meter))
    targets = list(iter_rep_points(pres, field, target_dims, meter=meter))
    total = 0
    for src in sources:
        for dst in targets:
            meter.tick()
            total += field.p ** len(hom_basis(src, dst))
    return total


def iter_mono_points(pres: BoundQuiver, field: PrimeField, source_dims,
                     target_dims, meter: _Meter | None = None
                     ) -> Iterator[HomTriple]:
    """Monomorphism triples: hom points filtered on injectivity at every
    vertex.  Enumerating the homomorphism space instead of the raw map
    coordinates prunes the search massively."""
    for triple in iter_hom_points(pres, field, source_dims, target_dims,
                                  meter=meter):
        if all(triple.morphism.maps[x].rank() == triple.source.dims[x]
               for x in pres.quiver.vertices):
            yield triple


def count_mono_points(pres: BoundQuiver, field: PrimeField, source_dims,
                      target_dims, budget: int | None = None) -> int:
    meter = _Meter(budget if budget is not None else default_budget())
    return sum(1 for _ in iter_mono_points(pres, field, source_dims,
                                           target_dims, meter=meter))


def iter_ext_points(pres: BoundQuiver, field: PrimeField, quo_dims, sub_dims,
                    meter: _Meter | None = None):
    """Extension triples (quotient point, sub point, cocycle blocks)."""
    from .extensions import ExtensionTriple
    quos = list(iter_rep_points(pres, field, quo_dims, meter=meter))
    subs = list(iter_rep_points(pres, field, sub_dims, meter=meter))
    arrows = pres.quiver.arrow_names()
    for quo in quos:
        for sub in subs:
            basis = cocycle_space_basis(quo, sub)
            for coeffs in itertools.product(field.elements(),
                                            repeat=len(basis)):
                if meter is not None:
                    meter.tick()
                blocks = zero_blocks(pres, field, sub.dims, quo.dims)
                for c, fam in zip(coeffs, basis):
                    if c == field.zero:
                        continue
                    blocks = {a: blocks[a] + fam[a].scale(c) for a in arrows}
                yield ExtensionTriple(quo, sub, blocks, check=False)


def count_ext_points(pres: BoundQuiver, field: PrimeField, quo_dims, sub_dims,
                     budget: int | None = None) -> int:
    """Sum of q^dim of the cocycle space over all quotient/sub pairs."""
    meter = _Meter(budget if budget is not None else default_budget())
    quos = list(iter_rep_points(pres, field, quo_dims, meter=meter))
    subs = list(iter_rep_points(pres, field, sub_dims, meter=meter))
    total = 0
    for quo in quos:
        for sub in subs:
            meter.tick()
            total += field.p ** len(cocycle_space_basis(quo, sub))
    return total


def count_custom_points(field: PrimeField, ambient: int,
                        predicate: Callable[[tuple], bool],
                        budget: int | None = None) -> int:
    meter = _Meter(budget if budget is not None else default_budget())
    meter.precheck(field.p ** ambient)
    count = 0
    for values in itertools.product(field.elements(), repeat=ambient):
        meter.tick()
        if predicate(values):
            count += 1
    return count


def count_points(task: EnumerationTask, parts: int = 1) -> int:
    """Exact point count of the task's variety over its finite field."""
    budget = task.resolved_budget()
    if task.kind == "rep":
        return count_rep_points(task.pres, task.field, task.dims,
                                budget=budget, parts=parts)
    if task.kind == "hom":
        return count_hom_points(task.pres, task.field, task.source_dims,
                                task.target_dims, budget=budget)
    if task.kind == "mono":
        return count_mono_points(task.pres, task.field, task.source_dims,
                                 task.target_dims, budget=budget)
    if task.kind == "ext":
        return count_ext_points(task.pres, task.field, task.quo_dims,
                                task.sub_dims, budget=budget)
    return count_custom_points(task.field, task.ambient, task.predicate,
                               budget=budget)


# --- the two explicit reducibility checks --------------------------------


@dataclass
class CensusResult:
    """Exact census of the split-or-vanish variety a_i b = 0."""

    n: int
    q: int
    total: int
    count_b_zero: int
    count_a_zero: int
    union_verified: bool
    hom_bijection_verified: bool

    def identity_holds(self) -> bool:
        return self.total == self.q ** self.n + self.q - 1


def hom_counterexample_census(n: int, q: int,
                              budget: int | None = None) -> CensusResult:
    """Census of {(b, a_1..a_n) : a_i b = 0} and its match with the
    homomorphism variety it models.

    The variety is the union of the hyperplane b = 0 and the line a = 0,
    which is exactly why the ambient homomorphism variety splits into two
    components.  Both the union structure and the bijection with the
    two-vertex homomorphism variety (source concentrated at vertex 1,
    target one-dimensional at both vertices) are verified point by point.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    field = PrimeField(q)
    meter = _Meter(budget if budget is not None else default_budget())
    meter.precheck(q ** (n + 1))
    points = []
    for values in itertools.product(field.elements(), repeat=n + 1):
        meter.tick()
        b, avec = values[0], values[1:]
        if all(field.mul(a, b) == field.zero for a in avec):
            points.append((b, avec))
    total = len(points)
    count_b_zero = sum(1 for b, _ in points if b == field.zero)
    count_a_zero = sum(1 for _, avec in points
                       if all(a == field.zero for a in avec))
    union_ok = all(b == field.zero or all(a == field.zero for a in avec)
                   for b, avec in points)

    pres = family_a_prime(n, 2, 2)
    source_dims = {0: 0, 1: 1}
    target_dims = {0: 1, 1: 1}
    seen = set()
    image = set()
    for triple in iter_hom_points(pres, field, source_dims, target_dims,
                                  meter=meter):
        key = triple.key()
        if key in seen:
            raise AssertionError("duplicate homomorphism point")
        seen.add(key)
        b = triple.morphism.maps[1][0, 0]
        avec = tuple(triple.target.mats[f"a{i}"][0, 0]
                     for i in range(1, n + 1))
        if not all(field.mul(a, b) == field.zero for a in avec):
            raise AssertionError("homomorphism point violates a_i b = 0")
        image.add((b, avec))
    bijective = len(seen) == total and image == set(points)
    return CensusResult(n, q, total, count_b_zero, count_a_zero, union_ok,
                        bijective)


@dataclass
class WitnessPoint:
    """One explicit point of the monomorphism variety, in the coordinates
    (mu, lambda, U, V rows, w column)."""

    mu: tuple
    lam: int
    loop_mat: tuple          # U, rows as tuples
    arrow_rows: tuple        # V_1..V_n, each a row tuple
    emb_col: tuple           # w, entries of the column


@dataclass
class WitnessReport:
    """Disjoint nonempty open sets in a monomorphism variety.

    open_full_rank collects points whose big loop matrix has rank l - 1;
    open_mu1 those with a nonzero first arrow coordinate upstairs.  Their
    disjointness is the reducibility certificate.
    """

    m: int
    l: int
    n: int
    q: int
    family: str
    total: int
    count_full_rank: int
    count_mu1: int
    count_intersection: int
    sample_full_rank: Optional[WitnessPoint]
    sample_mu1: Optional[WitnessPoint]
    implication_verified: bool
    kernel_image_match_verified: bool
    samples_verified: bool

    def disjoint(self) -> bool:
        return self.count_intersection == 0

    def both_nonempty(self) -> bool:
        return self.count_full_rank > 0 and self.count_mu1 > 0


def _column_space(field, mat: Matrix):
    from .quiver import Subspace
    cols = [tuple(mat[i, j] for i in range(mat.nrows))
            for j in range(mat.ncols)]
    return Subspace(field, mat.nrows, cols)


def _kernel_space(field, mat: Matrix):
    from .quiver import Subspace
    return Subspace(field, mat.ncols, mat.kernel_basis())


def mono_reducibility_witness(m: int, l: int, n: int, q: int,
                              budget: int | None = None) -> WitnessReport:
    """Exhaustively enumerate the monomorphism variety with source of
    dimension (1, 1) and target of dimension (1, l) over the family fixed
    by l, and certify its reducibility.

    l = 2 selects the crossing relation of degree-one order 1; l = m selects
    the corner family.  Every point is visited as (target point, kernel
    vector, unit scalar); the upstairs arrow coordinates are then uniquely
    determined, so the walk is a bijective parameterization of the variety.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if l == 2:
        pres = family_a(n, m, 1)
    elif l == m:
        pres = family_b(n, m)
    else:
        raise ValueError("l must be 2 (first family) or m (corner family)")
    if n < 1:
        raise ValueError("n must be at least 1")
    field = PrimeField(q)
    meter = _Meter(budget if budget is not None else default_budget())

    source_dims = {0: 1, 1: 1}
    target_dims = {0: 1, 1: l}

    # The stratified walk below assumes the loops vanish on every source
    # point and on the vertex-0 coordinate of every target point; both are
    # forced by x^m = 0 having only the zero root in a field.  Verify the
    # source side exhaustively rather than assuming it.
    source_pts = list(iter_rep_points(pres, field, source_dims, meter=meter))
    mu_seen = set()
    for rep in source_pts:
        if not (rep.mats["e0"].is_zero() and rep.mats["e1"].is_zero()):
            raise AssertionError("source loops are not forced to zero")
        mu_seen.add(tuple(rep.mats[f"a{i}"][0, 0] for i in range(1, n + 1)))
    if len(mu_seen) != q ** n or len(source_pts) != q ** n:
        raise AssertionError("source variety is not the full mu space")

    p = field.p
    nonzero = [c for c in field.elements() if c != field.zero]
    inverses = {lam: field.inv(lam) for lam in nonzero}
    total = count_u1 = count_u2 = count_both = 0
    sample_u1 = sample_u2 = None
    implication_ok = True
    kernel_image_ok = True

    # Drive the layered enumeration directly: analyze each loop assignment
    # once, then walk its linearly constrained arrow rows and embedding
    # vectors with plain modular arithmetic.
    loop_rels, linear_rels = _classify_relations(pres)
    for loop_mats in _iter_loop_assignments(pres, field, target_dims,
                                            loop_rels, meter):
        if not loop_mats["e0"].is_zero():
            raise AssertionError("target loop at vertex 0 not forced to zero")
        loop = loop_mats["e1"]
        if not (loop ** m).is_zero():
            raise AssertionError("target loop power is not zero")
        head = loop ** (l - 1)
        head_cols = [tuple(head[i, j] for i in range(l)) for j in range(l)]
        rank = loop.rank()
        in_u1 = rank == l - 1
        if in_u1:
            if not (_kernel_space(field, loop) == _column_space(field, head)):
                kernel_image_ok = False
        kernel_vecs = loop.kernel_basis()
        ws = []
        for coeffs in itertools.product(field.elements(),
                                        repeat=len(kernel_vecs)):
            w = [0] * l
            for c, vec in zip(coeffs, kernel_vecs):
                if c:
                    w = [(x + c * v) % p for x, v in zip(w, vec)]
            if any(w):
                ws.append(tuple(w))
        if not ws:
            continue

        arrow_slots, total_slots, system = _linear_system_for_arrows(
            pres, field, target_dims, loop_mats, linear_rels)
        if [(r, c) for _, r, c in arrow_slots] != [(1, l)] * n:
            raise AssertionError("unexpected arrow block shapes")
        arrow_kernel = system.kernel_basis()
        per_solution = len(ws) * len(nonzero)
        for coeffs in itertools.product(field.elements(),
                                        repeat=len(arrow_kernel)):
            meter.tick(per_solution)
            values = [0] * total_slots
            for c, vec in zip(coeffs, arrow_kernel):
                if c:
                    values = [(x + c * v) % p for x, v in zip(values, vec)]
            arrow_rows = tuple(tuple(values[k * l:(k + 1) * l])
                               for k in range(n))
            # re-check the defining constraint on the first arrow row
            if any(sum(a * b for a, b in zip(arrow_rows[0], col)) % p
                   for col in head_cols):
                raise AssertionError("arrow solution violates its relation")
            for w in ws:
                dots = [sum(a * b for a, b in zip(row, w)) % p
                        for row in arrow_rows]
                for lam in nonzero:
                    lam_inv = inverses[lam]
                    mu = tuple((d * lam_inv) % p for d in dots)
                    in_u2 = mu[0] != 0
                    total += 1
                    if in_u1:
                        count_u1 += 1
                        if in_u2:
                            implication_ok = False
                    if in_u2:
                        count_u2 += 1
                    if in_u1 and in_u2:
                        count_both += 1
                    if (in_u1 and sample_u1 is None) or \
                            (in_u2 and sample_u2 is None):
                        point = WitnessPoint(
                            mu=mu, lam=lam,
                            loop_mat=tuple(loop.rows),
                            arrow_rows=arrow_rows,
                            emb_col=w)
                        if in_u1 and sample_u1 is None:
                            sample_u1 = point
                        if in_u2 and sample_u2 is None:
                            sample_u2 = point

    samples_ok = all(
        _verify_witness_point(pres, field, m, l, n, pt)
        for pt in (sample_u1, sample_u2) if pt is not None)
    return WitnessReport(
        m=m, l=l, n=n, q=q, family=pres.name, total=total,
        count_full_rank=count_u1, count_mu1=count_u2,
        count_intersection=count_both,
        sample_full_rank=sample_u1, sample_mu1=sample_u2,
        implication_verified=implication_ok,
        kernel_image_match_verified=kernel_image_ok,
        samples_verified=samples_ok)


def _verify_witness_point(pres: BoundQuiver, field, m: int, l: int, n: int,
                          pt: WitnessPoint) -> bool:
    """Rebuild the point as an honest triple and re-check every defining
    condition: validity of both representations, the intertwining of the
    vertex maps, injectivity, and the explicit equation set."""
    zero1 = Matrix.zeros(field, 1, 1)
    src_mats = {"e0": zero1, "e1": zero1}
    for i in range(1, n + 1):
        src_mats[f"a{i}"] = Matrix(field, 1, 1, [[pt.mu[i - 1]]])
    src = Representation(pres, field, {0: 1, 1: 1}, src_mats)
    loop = Matrix(field, l, l, pt.loop_mat)
    dst_mats = {"e0": zero1, "e1": loop}
    for i in range(1, n + 1):
        dst_mats[f"a{i}"] = Matrix(field, 1, l, [pt.arrow_rows[i - 1]])
    dst = Representation(pres, field, {0: 1, 1: l}, dst_mats)
    w = Matrix.column(field, pt.emb_col)
    mor = Morphism(src, dst, {0: Matrix(field, 1, 1, [[pt.lam]]), 1: w})
    if not (src.is_valid() and dst.is_valid()):
        return False
    if not mor.intertwines() or not is_monomorphism(mor):
        return False
    # explicit equation set of the displayed system
    if not (dst_mats["a1"] @ (loop ** (l - 1))).is_zero():
        return False
    if not (loop ** l).is_zero():
        return False
    if not (loop @ w).is_zero():
        return False
    for i in range(1, n + 1):
        lhs = field.mul(pt.lam, pt.mu[i - 1])
        rhs = (dst_mats[f"a{i}"] @ w)[0, 0]
        if lhs != rhs:
            return False
    return pt.lam != field.zero and not w.is_zero()


# --- product identity and degree probe -----------------------------------


@dataclass
class ProductCheckResult:
    n: int
    m: int
    d: int
    e: int
    q: int
    count_full: int
    count_core: int
    free_factor: int

    @property
    def ok(self) -> bool:
        return self.count_full == self.count_core * self.free_factor

    def __bool__(self) -> bool:
        return self.ok


def product_count_check(n: int, m: int, dims: tuple[int, int], q: int,
                        budget: int | None = None) -> ProductCheckResult:
    """Check #points(B_n) = #points(B_1) * q^((n-1) d e) by enumeration."""
    d, e = dims
    field = PrimeField(q)
    full = count_rep_points(family_b(n, m), field, {0: d, 1: e},
                            budget=budget)
    core = count_rep_points(family_b(1, m), field, {0: d, 1: e},
                            budget=budget)
    return ProductCheckResult(n, m, d, e, q, full, core,
                              q ** ((n - 1) * d * e))


@dataclass
class ProbeReport:
    """Leading-term fit of point counts: evidence only, never proof."""

    counts: dict
    degree: Optional[int]
    coefficients: dict
    looks_affine: bool
    note: str


def leading_coefficient_probe(task_for_q: Callable[[int], EnumerationTask],
                              qs: Sequence[int]) -> ProbeReport:
    """Fit exact counts against c * q^D for the best integer D.

    D comes from the log-log slope between the two largest field sizes
    (or the single available one); the per-q coefficients count/q^D are
    reported exactly.  A constant coefficient 1 is what an affine space
    gives; anything else is flagged as inconclusive evidence.
    """
    if not qs:
        raise ValueError("at least one field size is required")
    counts = {}
    for q in sorted(qs):
        counts[q] = count_points(task_for_q(q))
    usable = {q: c for q, c in counts.items() if c > 0}
    if not usable:
        return ProbeReport(counts, None, {}, False,
                           "all counts are zero; no degree fit possible")
    qs_sorted = sorted(usable)
    if len(qs_sorted) == 1:
        q0 = qs_sorted[0]
        degree = round(log(usable[q0]) / log(q0)) if usable[q0] > 1 else 0
    else:
        q1, q2 = qs_sorted[-2], qs_sorted[-1]
        degree = round((log(usable[q2]) - log(usable[q1]))
                       / (log(q2) - log(q1)))
    degree = max(degree, 0)
    coefficients = {q: Fraction(c, q ** degree) for q, c in counts.items()}
    looks_affine = all(c == 1 for c in coefficients.values())
    note = ("counts match q^D exactly; consistent with an affine space "
            "(evidence only, not a proof of irreducibility)"
            if looks_affine else
            "coefficients deviate from 1; inconclusive by design: finite "
            "field counts cannot certify irreducibility")
    return ProbeReport(counts, degree, coefficients, looks_affine, note)
