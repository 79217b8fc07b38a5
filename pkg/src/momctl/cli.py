"""``momctl``: validate, compare, embed and verify finite metrics.

Exit status is the only success signal: 0 on success, 1 when a validation
or verification fails (the report is still written), 2 on malformed input
or a refused precondition (diagnostics on stderr).
"""
from __future__ import annotations

import argparse
import sys

from . import formats
from .embeddings import (
    BoundedVector,
    PlanError,
    c0_embed,
    discrete_witness,
    frechet_embed,
    one_point_embed,
    plan_truncation,
)
from .metric import METRIC, PSEUDOMETRIC, StructuralError, as_rat, sup_distance, validate
from .oracle import (
    GeneratorConfig,
    audit_outputs,
    gen_band_map,
    gen_random_metric,
    gen_vector_family,
    verify_isometry,
)

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


def _emit(doc: dict, out: str | None) -> None:
    if out:
        formats.write_doc(out, doc)
    else:
        sys.stdout.write(formats.dumps(doc))


def cmd_validate(args) -> int:
    m = formats.matrix_from_doc(formats.read_doc(args.file))
    report = validate(m, PSEUDOMETRIC if args.pseudo else METRIC)
    _emit(formats.validation_to_doc(report), args.output)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_dist(args) -> int:
    d = formats.matrix_from_doc(formats.read_doc(args.d))
    e = formats.matrix_from_doc(formats.read_doc(args.e))
    print(sup_distance(d, e))
    return EXIT_OK


def _embed(args):
    target = args.target
    if target in ("frechet", "onepoint"):
        d = formats.matrix_from_doc(formats.read_doc(args.input))
        if target == "frechet":
            order = args.order.split(",") if args.order else None
            return frechet_embed(d, order)
        return one_point_embed(d, args.pt)

    names, vectors = formats.family_from_doc(formats.read_doc(args.input))
    if target == "c0":
        return c0_embed(vectors, args.M, names)

    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise StructuralError(f"vectors of unequal lengths {sorted(lengths)}")
    length = lengths.pop()
    if args.M is not None and args.M != length:
        raise PlanError(f"pinned M={args.M} does not match the vector length {length}")
    bound = max(v.bound for v in vectors)
    plan = plan_truncation(length, bound, args.N)
    if 2**plan.N < bound:
        raise PlanError(f"precondition 2^N >= bound fails: N={plan.N}, bound={bound}")
    return discrete_witness(vectors, plan, names)


def cmd_embed(args) -> int:
    witness = _embed(args)
    report = verify_isometry(witness, witness.source)
    problems = audit_outputs(witness)
    if not report.ok or problems:
        sys.stdout.write(formats.dumps(formats.isometry_to_doc(report)))
        for line in problems:
            print(line, file=sys.stderr)
        print("refusing to write a witness that fails self-verification", file=sys.stderr)
        return EXIT_FAIL
    formats.write_doc(args.output, formats.witness_to_doc(witness))
    return EXIT_OK


def cmd_verify(args) -> int:
    witness = formats.witness_from_doc(formats.read_doc(args.witness))
    original = formats.read_original(args.original)
    report = verify_isometry(witness, original)
    problems = audit_outputs(witness)
    _emit(formats.isometry_to_doc(report), args.output)
    for line in problems:
        print(line, file=sys.stderr)
    return EXIT_OK if report.ok and not problems else EXIT_FAIL


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(seed=args.seed, n=args.n, M=args.M or 4)
    if args.what == "metric":
        doc = formats.matrix_to_doc(gen_random_metric(cfg))
    elif args.what == "band":
        doc = formats.matrix_to_doc(gen_band_map(cfg, as_rat(args.L)))
    else:
        vectors = [BoundedVector(v) for v in gen_vector_family(cfg, args.n)]
        doc = formats.family_to_doc(vectors)
    formats.write_doc(args.output, doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momctl", description="Validate, compare, embed and verify finite metrics.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="check the metric axioms of a matrix file")
    p.add_argument("file")
    p.add_argument("--pseudo", action="store_true", help="allow zero distances between distinct points")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dist", help="print the sup-distance between two matrices")
    p.add_argument("d")
    p.add_argument("e")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("embed", help="build and self-verify an embedding witness")
    p.add_argument("target", choices=("frechet", "onepoint", "discrete", "c0"))
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--M", type=int, help="coordinates (discrete) or pair blocks (c0)")
    p.add_argument("--N", type=int, help="pin the clamp level of the discrete plan")
    p.add_argument("--order", help="comma-separated enumeration for frechet")
    p.add_argument("--pt", help="label of the extra point for onepoint")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="re-verify a witness against its original input")
    p.add_argument("witness")
    p.add_argument("original")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random metric, band map or vector family")
    p.add_argument("what", choices=("metric", "band", "vectors"))
    p.add_argument("--n", type=int, required=True, help="points, or vectors for 'vectors'")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--L", default="1", help="band level p/q")
    p.add_argument("--M", type=int, help="vector length for 'vectors'")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # every domain error (structural, plan, band, invalid input) is a ValueError
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError) as exc:
        print(f"momctl {args.verb}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
