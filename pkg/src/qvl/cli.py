"""Command line front end.

Every subcommand prints a human-readable report, or a single JSON object
with ``--json``.  Exit codes are stable per error class:

    0  success (and: the checked property holds)
    1  the computation ran but the checked property failed
    2  usage errors (argparse)
    3  DSL syntax errors
    4  semantic errors (unknown names, bad parameters, malformed files)
    5  enumeration budget exceeded

The enumeration budget defaults to 10**8 steps; override with ``--budget``
or the QVL_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .counting import (BudgetExceededError, EnumerationTask, ambient_dimension,
                       count_points, hom_counterexample_census,
                       leading_coefficient_probe, mono_reducibility_witness,
                       product_count_check)
from .dsl import DslSemanticError, DslSyntaxError, parse_quiver_spec
from .extensions import build_extension, cocycle_space_basis, splitting_from_mono
from .families import (FAMILY_KINDS, FamilyDescriptor, FamilyParameterError,
                       build_family, is_geometrically_irreducible_family)
from .linalg import PrimeField
from .quiver import QuiverError, ext2_dimension
from .reps import hom_basis
from .serialize import (SerializationError, blocks_from_json, blocks_to_json,
                        matrix_to_json, morphism_from_json, morphism_to_json,
                        rep_from_json, rep_to_json)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SEMANTIC = 4
EXIT_BUDGET = 5


class CliSemanticError(ValueError):
    pass


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliSemanticError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliSemanticError(f"{path} is not valid JSON: {exc}") from exc


def _load_pres(args):
    if getattr(args, "quiver", None):
        try:
            with open(args.quiver, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliSemanticError(
                f"cannot read {args.quiver}: {exc}") from exc
        return parse_quiver_spec(text)
    if getattr(args, "family", None):
        return build_family(_descriptor(args))
    raise CliSemanticError("provide --quiver FILE or --family KIND")


def _descriptor(args) -> FamilyDescriptor:
    return FamilyDescriptor(kind=args.family, n=args.n, m=args.m, l=args.l,
                            m0=args.m0, m1=args.m1)


def _parse_dims(pres, text: str) -> dict:
    parts = [p.strip() for p in text.split(",") if p.strip() != ""]
    vertices = pres.quiver.vertices
    if len(parts) != len(vertices):
        raise CliSemanticError(
            f"expected {len(vertices)} dimensions (vertex order "
            f"{list(vertices)}), got {len(parts)}")
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise CliSemanticError(f"dimensions must be integers: {text!r}") from exc
    if any(v < 0 for v in values):
        raise CliSemanticError("dimensions must be nonnegative")
    return dict(zip(vertices, values))


def _parse_vertex(pres, token: str):
    for v in pres.quiver.vertices:
        if str(v) == token:
            return v
    raise CliSemanticError(f"unknown vertex {token!r}")


def _field(args) -> PrimeField:
    if args.q is None:
        raise CliSemanticError("this command needs --q (a prime field size)")
    try:
        return PrimeField(args.q)
    except ValueError as exc:
        raise CliSemanticError(str(exc)) from exc


# --- subcommand handlers -------------------------------------------------


def _cmd_check(args):
    pres = _load_pres(args)
    rep = rep_from_json(pres, _load_json_file(args.rep))
    failures = [str(rel) for rel in pres.relations
                if not rep.evaluate_relation(rel).is_zero()]
    valid = not failures
    result = {"valid": valid, "failing_relations": failures,
              "dims": {str(v): rep.dims[v] for v in pres.quiver.vertices}}
    text = "valid point of the representation variety" if valid else \
        "INVALID: nonzero on " + "; ".join(failures)
    return valid, result, text


def _cmd_hom(args):
    pres = _load_pres(args)
    src = rep_from_json(pres, _load_json_file(args.source))
    dst = rep_from_json(pres, _load_json_file(args.target))
    basis = hom_basis(src, dst)
    result = {"dim": len(basis),
              "basis": [morphism_to_json(m) for m in basis]}
    return True, result, f"dim Hom = {len(basis)}"


def _cmd_cocycles(args):
    pres = _load_pres(args)
    quo = rep_from_json(pres, _load_json_file(args.quo))
    sub = rep_from_json(pres, _load_json_file(args.sub))
    basis = cocycle_space_basis(quo, sub)
    result = {"dim": len(basis),
              "basis": [blocks_to_json(quo.field, fam) for fam in basis]}
    return True, result, f"dim of the cocycle space = {len(basis)}"


def _cmd_extend(args):
    pres = _load_pres(args)
    quo = rep_from_json(pres, _load_json_file(args.quo))
    sub = rep_from_json(pres, _load_json_file(args.sub))
    blocks = blocks_from_json(pres, sub.dims, quo.dims,
                              _load_json_file(args.blocks))
    middle, incl, proj = build_extension(quo, sub, blocks)
    result = {"middle": rep_to_json(middle),
              "inclusion": morphism_to_json(incl),
              "projection": morphism_to_json(proj)}
    return True, result, (
        f"built the middle term, dims "
        f"{[middle.dims[v] for v in pres.quiver.vertices]}")


def _cmd_split(args):
    pres = _load_pres(args)
    sub = rep_from_json(pres, _load_json_file(args.sub))
    middle = rep_from_json(pres, _load_json_file(args.middle))
    mor = morphism_from_json(sub, middle, _load_json_file(args.map))
    g, blocks, quo = splitting_from_mono(mor)
    result = {
        "base_change": {str(x): matrix_to_json(g[x]) for x in g},
        "blocks": blocks_to_json(sub.field, blocks),
        "quotient": rep_to_json(quo),
    }
    return True, result, (
        f"split off a quotient of dims "
        f"{[quo.dims[v] for v in pres.quiver.vertices]}")


def _make_task(args, pres, field) -> EnumerationTask:
    kind = args.kind
    budget = args.budget
    if kind == "rep":
        if args.dim is None:
            raise CliSemanticError("rep counting needs --dim")
        return EnumerationTask(kind="rep", pres=pres, field=field,
                               dims=_parse_dims(pres, args.dim),
                               budget=budget)
    if kind in ("hom", "mono"):
        if args.source_dim is None or args.target_dim is None:
            raise CliSemanticError(
                f"{kind} counting needs --source-dim and --target-dim")
        return EnumerationTask(kind=kind, pres=pres, field=field,
                               source_dims=_parse_dims(pres, args.source_dim),
                               target_dims=_parse_dims(pres, args.target_dim),
                               budget=budget)
    if kind == "ext":
        if args.quo_dim is None or args.sub_dim is None:
            raise CliSemanticError("ext counting needs --quo-dim and --sub-dim")
        return EnumerationTask(kind="ext", pres=pres, field=field,
                               quo_dims=_parse_dims(pres, args.quo_dim),
                               sub_dims=_parse_dims(pres, args.sub_dim),
                               budget=budget)
    raise CliSemanticError(f"unknown variety kind {kind!r}")


def _cmd_count(args):
    pres = _load_pres(args)
    field = _field(args)
    task = _make_task(args, pres, field)
    count = count_points(task)
    result = {"count": count, "kind": args.kind, "q": field.p,
              "ambient_dim": ambient_dimension(task)}
    return True, result, f"{count} points over F_{field.p}"


def _cmd_census_hom(args):
    res = hom_counterexample_census(args.n, args.q, budget=args.budget)
    ok = res.identity_holds() and res.union_verified \
        and res.hom_bijection_verified
    result = {
        "n": res.n, "q": res.q, "total": res.total,
        "count_b_zero": res.count_b_zero, "count_a_zero": res.count_a_zero,
        "identity_holds": res.identity_holds(),
        "union_verified": res.union_verified,
        "hom_bijection_verified": res.hom_bijection_verified,
    }
    text = (f"total {res.total} = q^n + q - 1 "
            f"({'holds' if ok else 'FAILS'}); "
            f"b=0 part {res.count_b_zero}, a=0 part {res.count_a_zero}")
    return ok, result, text


def _witness_point_json(pt):
    if pt is None:
        return None
    return {"mu": list(pt.mu), "lambda": pt.lam,
            "loop_matrix": [list(r) for r in pt.loop_mat],
            "arrow_rows": [list(r) for r in pt.arrow_rows],
            "embedding_column": list(pt.emb_col)}


def _cmd_witness_mono(args):
    rep = mono_reducibility_witness(args.m, args.l, args.n, args.q,
                                    budget=args.budget)
    ok = (rep.both_nonempty() and rep.disjoint()
          and rep.implication_verified and rep.kernel_image_match_verified
          and rep.samples_verified)
    result = {
        "family": rep.family, "m": rep.m, "l": rep.l, "n": rep.n, "q": rep.q,
        "total": rep.total,
        "count_full_rank": rep.count_full_rank,
        "count_mu1": rep.count_mu1,
        "count_intersection": rep.count_intersection,
        "disjoint": rep.disjoint(),
        "both_nonempty": rep.both_nonempty(),
        "implication_verified": rep.implication_verified,
        "kernel_image_match_verified": rep.kernel_image_match_verified,
        "samples_verified": rep.samples_verified,
        "sample_full_rank": _witness_point_json(rep.sample_full_rank),
        "sample_mu1": _witness_point_json(rep.sample_mu1),
    }
    text = (f"{rep.family}: |U1| = {rep.count_full_rank}, "
            f"|U2| = {rep.count_mu1}, |U1 n U2| = {rep.count_intersection} "
            f"-> {'reducibility witnessed' if ok else 'WITNESS FAILED'}")
    return ok, result, text


def _cmd_product_check(args):
    dims = [int(x) for x in args.dim.split(",")]
    if len(dims) != 2:
        raise CliSemanticError("--dim must be 'd,e' for the two vertices")
    res = product_count_check(args.n, args.m, (dims[0], dims[1]), args.q,
                              budget=args.budget)
    result = {"n": res.n, "m": res.m, "d": res.d, "e": res.e, "q": res.q,
              "count_full": res.count_full, "count_core": res.count_core,
              "free_factor": res.free_factor, "holds": res.ok}
    text = (f"{res.count_full} "
            f"{'==' if res.ok else '!='} {res.count_core} * {res.free_factor}")
    return res.ok, result, text


def _cmd_ext2(args):
    pres = _load_pres(args)
    x = _parse_vertex(pres, args.x)
    y = _parse_vertex(pres, args.y)
    count, dim = ext2_dimension(pres, pres.relations, x, y)
    agree = count == dim
    result = {"x": str(x), "y": str(y), "relation_count": count,
              "bimodule_dimension": dim, "agree": agree}
    text = (f"relations {x} -> {y}: {count}; bimodule corner dim: {dim} "
            f"({'agree' if agree else 'DISAGREE'})")
    return agree, result, text


def _cmd_classify(args):
    desc = _descriptor(args)
    flag = is_geometrically_irreducible_family(desc)
    verdict = ("geometrically irreducible" if flag
               else "not geometrically irreducible")
    result = {"family": desc.label(), "geometrically_irreducible": flag}
    return True, result, f"{desc.label()}: {verdict}"


def _cmd_probe(args):
    qs = [int(x) for x in args.q_list.split(",")]
    pres = _load_pres(args)

    def task_for_q(q: int) -> EnumerationTask:
        ns = argparse.Namespace(**vars(args))
        ns.q = q
        return _make_task(ns, pres, PrimeField(q))

    report = leading_coefficient_probe(task_for_q, qs)
    result = {
        "counts": {str(q): c for q, c in report.counts.items()},
        "degree": report.degree,
        "coefficients": {str(q): str(c)
                         for q, c in report.coefficients.items()},
        "looks_affine": report.looks_affine,
        "note": report.note,
    }
    lines = [f"q={q}: {c} points" for q, c in report.counts.items()]
    lines.append(f"best degree {report.degree}; {report.note}")
    return True, result, "\n".join(lines)


_HANDLERS = {
    "check": _cmd_check,
    "hom": _cmd_hom,
    "cocycles": _cmd_cocycles,
    "extend": _cmd_extend,
    "split": _cmd_split,
    "count": _cmd_count,
    "census-hom": _cmd_census_hom,
    "witness-mono": _cmd_witness_mono,
    "product-check": _cmd_product_check,
    "ext2": _cmd_ext2,
    "classify": _cmd_classify,
    "probe": _cmd_probe,
}


def _add_quiver_source(parser: argparse.ArgumentParser, family_only=False):
    if not family_only:
        parser.add_argument("--quiver", metavar="FILE",
                            help="presentation in the quiver DSL")
    parser.add_argument("--family", choices=FAMILY_KINDS,
                        help="built-in family")
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--l", type=int)
    parser.add_argument("--m0", type=int)
    parser.add_argument("--m1", type=int)


def _add_dims_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--kind", choices=("rep", "hom", "mono", "ext"),
                        default="rep")
    parser.add_argument("--dim", help="dimension vector, comma separated")
    parser.add_argument("--source-dim", dest="source_dim")
    parser.add_argument("--target-dim", dest="target_dim")
    parser.add_argument("--quo-dim", dest="quo_dim")
    parser.add_argument("--sub-dim", dest="sub_dim")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvl",
        description="exact computations on bound quiver representation "
                    "varieties over small exact fields")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a machine-readable JSON report")
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration step budget "
                             "(default 10^8, or QVL_BUDGET)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="validate a representation file")
    _add_quiver_source(p)
    p.add_argument("--rep", required=True, metavar="FILE")

    p = sub.add_parser("hom", parents=[common],
                       help="basis of the homomorphism space")
    _add_quiver_source(p)
    p.add_argument("--source", required=True, metavar="FILE")
    p.add_argument("--target", required=True, metavar="FILE")

    p = sub.add_parser("cocycles", parents=[common],
                       help="basis of the cocycle space of a pair")
    _add_quiver_source(p)
    p.add_argument("--quo", required=True, metavar="FILE")
    p.add_argument("--sub", required=True, metavar="FILE")

    p = sub.add_parser("extend", parents=[common],
                       help="assemble the extension of a cocycle")
    _add_quiver_source(p)
    p.add_argument("--quo", required=True, metavar="FILE")
    p.add_argument("--sub", required=True, metavar="FILE")
    p.add_argument("--blocks", required=True, metavar="FILE")

    p = sub.add_parser("split", parents=[common],
                       help="split a monomorphism into cocycle normal form")
    _add_quiver_source(p)
    p.add_argument("--sub", required=True, metavar="FILE")
    p.add_argument("--middle", required=True, metavar="FILE")
    p.add_argument("--map", required=True, metavar="FILE")

    p = sub.add_parser("count", parents=[common],
                       help="exact point count of a variety over F_q")
    _add_quiver_source(p)
    _add_dims_flags(p)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("census-hom", parents=[common],
                       help="census of the split-or-vanish variety")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("witness-mono", parents=[common],
                       help="reducibility witness in a monomorphism variety")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("product-check", parents=[common],
                       help="product identity for the corner families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", required=True, help="d,e")
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("ext2", parents=[common],
                       help="relation count vs bimodule corner dimension")
    _add_quiver_source(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="geometric irreducibility of a named family")
    _add_quiver_source(p, family_only=True)

    p = sub.add_parser("probe", parents=[common],
                       help="leading-coefficient fit of counts over several q")
    _add_quiver_source(p)
    _add_dims_flags(p)
    p.add_argument("--q", dest="q_list", required=True,
                   help="comma separated prime field sizes")

    return parser


def run_command(argv) -> tuple[int, dict]:
    """Run one subcommand; returns (exit code, report envelope)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    start = time.monotonic()
    try:
        ok, result, text = _HANDLERS[command](args)
        report = {"command": command, "ok": ok, "result": result,
                  "elapsed_seconds": round(time.monotonic() - start, 3)}
        report["_text"] = text
        return (EXIT_OK if ok else EXIT_FAIL), report
    except DslSyntaxError as exc:
        return EXIT_PARSE, _error_report(command, "syntax", exc)
    except DslSemanticError as exc:
        return EXIT_SEMANTIC, _error_report(command, "semantic", exc)
    except (CliSemanticError, SerializationError, FamilyParameterError,
            QuiverError) as exc:
        return EXIT_SEMANTIC, _error_report(command, "semantic", exc)
    except BudgetExceededError as exc:
        return EXIT_BUDGET, _error_report(command, "budget", exc)
    except (ValueError, ZeroDivisionError, AssertionError) as exc:
        return EXIT_FAIL, _error_report(command, "validation", exc)


def _error_report(command: str, kind: str, exc: Exception) -> dict:
    return {"command": command, "ok": False,
            "error": {"type": kind, "message": str(exc)},
            "_text": f"error ({kind}): {exc}"}


def main(argv=None) -> int:
    code, report = run_command(argv if argv is not None else sys.argv[1:])
    text = report.pop("_text", "")
    parser_args = argv if argv is not None else sys.argv[1:]
    as_json = "--json" in parser_args
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
