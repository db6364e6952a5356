"""Shared generators for seeded random test data."""

from __future__ import annotations

from qvl.extensions import cocycle_space_basis, zero_blocks
from qvl.families import family_lambda
from qvl.linalg import Matrix, random_invertible, random_nilpotent
from qvl.reps import Representation


def random_lambda_rep(m, field, dim, rng) -> Representation:
    pres = family_lambda(m)
    if m == 1:
        return Representation(pres, field, {0: dim}, {})
    return Representation(pres, field, {0: dim},
                          {"e": random_nilpotent(field, dim, m, rng)})


def random_two_vertex_rep(pres, field, d0, d1, rng,
                          max_tries=400) -> Representation:
    """Seeded valid point for any of the two-vertex families: nilpotent
    loops first, then a uniformly random solution of the induced linear
    arrow constraints."""
    from qvl.counting import _classify_relations, _linear_system_for_arrows
    split = _classify_relations(pres)
    assert split is not None
    loop_rels, linear_rels = split
    dims = {0: d0, 1: d1}
    quiver = pres.quiver
    orders = {}
    for rel in loop_rels:
        path = rel.paths()[0]
        orders[path.arrows[0]] = path.length
    for _ in range(max_tries):
        loop_mats = {}
        ok = True
        for a in quiver.loops():
            n = dims[quiver.source(a)]
            loop_mats[a] = random_nilpotent(field, n, orders.get(a, n + 1),
                                            rng)
        for rel in loop_rels:
            acc = None
            for coeff, path in rel.terms:
                term = Matrix.identity(field, dims[path.source])
                for arrow in reversed(path.arrows):
                    term = loop_mats[arrow] @ term
                term = term.scale(field.coerce(coeff))
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                ok = False
        if not ok:
            continue
        arrow_slots, total, system = _linear_system_for_arrows(
            pres, field, dims, loop_mats, linear_rels)
        kernel = system.kernel_basis()
        values = [field.zero] * total
        for vec in kernel:
            c = field.coerce(rng.randrange(field.p)) if hasattr(field, "p") \
                else field.coerce(rng.randint(-3, 3))
            if c != field.zero:
                values = [field.add(x, field.mul(c, v))
                          for x, v in zip(values, vec)]
        mats = dict(loop_mats)
        pos = 0
        for a, r, c in arrow_slots:
            k = r * c
            chunk = values[pos:pos + k]
            pos += k
            mats[a] = Matrix(field, r, c,
                             [chunk[i * c:(i + 1) * c] for i in range(r)])
        rep = Representation(pres, field, dims, mats)
        assert rep.is_valid()
        return rep
    raise AssertionError("could not sample a valid representation")


def random_cocycle(quo, sub, rng):
    """Random element of the cocycle space of the pair."""
    basis = cocycle_space_basis(quo, sub)
    field = quo.field
    blocks = zero_blocks(quo.pres, field, sub.dims, quo.dims)
    for fam in basis:
        if hasattr(field, "p"):
            c = field.coerce(rng.randrange(field.p))
        else:
            c = field.coerce(rng.randint(-3, 3))
        if c != field.zero:
            blocks = {a: blocks[a] + fam[a].scale(c) for a in blocks}
    return blocks


def random_gl(field, dims, rng):
    return {x: random_invertible(field, n, rng) for x, n in dims.items()}
