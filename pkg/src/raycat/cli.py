"""raycat: command-line front end.

Thin client over the operations layer; every subcommand reads a
presentation file, runs one operation and prints a text or JSON report.
Exit codes: 0 clean, 1 structural findings, 2 input errors, 3 NotFinite or
budget exhaustion.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import ops


def _add_common(p, needs_file=True):
    if needs_file:
        p.add_argument("file", help="presentation file (.rc text or JSON)")
    p.add_argument("--cap", type=int, default=ops.DEFAULT_CAP,
                   help="maximum path length enforced by the closure")
    p.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="raycat",
        description="workbench for finite ray categories presented by "
                    "quivers with relations",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the category and dump its homs")
    _add_common(p)

    p = sub.add_parser("axioms", help="verify the six ray-category axioms")
    _add_common(p)

    p = sub.add_parser("morph", help="transit classification tables")
    _add_common(p)
    p.add_argument("--point")
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"))

    p = sub.add_parser("contours", help="enumerate contours")
    _add_common(p)

    p = sub.add_parser("uniqueness", help="path uniqueness for one contour")
    _add_common(p)
    p.add_argument("--contour", type=int, required=True)

    p = sub.add_parser("classify", help="classify non-deep contours")
    _add_common(p)
    p.add_argument("--contour", type=int)
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)

    p = sub.add_parser("check-mild", help="mildness witness search")
    _add_common(p)
    p.add_argument("--contour", type=int, required=True)
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)
    p.add_argument("--k", type=int, default=4)

    p = sub.add_parser("disjoint", help="overlap report for two contours")
    _add_common(p)
    p.add_argument("--contours", nargs=2, type=int, required=True,
                   metavar=("I", "J"))
    p.add_argument("--k", type=int, choices=[5, 6], default=6)
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)

    p = sub.add_parser("neighborhood", help="ambient constraints around a "
                                            "classified contour")
    _add_common(p)
    p.add_argument("--contour", type=int, required=True)
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)

    p = sub.add_parser("quotient", help="kill the ideal generated by a path")
    _add_common(p)
    p.add_argument("--kill", required=True, help="path, e.g. 'r r m'")

    p = sub.add_parser("split", help="split a point into emitter and receiver")
    _add_common(p)
    p.add_argument("--point", required=True)

    p = sub.add_parser("sub", help="full subcategory on a point set")
    _add_common(p)
    p.add_argument("--points", required=True, help="comma separated")

    p = sub.add_parser("decisive", help="decisive subcategory family")
    _add_common(p)
    p.add_argument("--contour", type=int, required=True)
    p.add_argument("--k", type=int, default=4)

    p = sub.add_parser("cleave", help="check a diagram functor")
    _add_common(p)
    p.add_argument("--diagram", required=True, help="diagram JSON file")

    p = sub.add_parser("crown", help="search for a crown")
    _add_common(p)
    p.add_argument("--max-period", type=int, default=6)

    p = sub.add_parser("separate", help="separated quiver and its components")
    _add_common(p)

    p = sub.add_parser("witness", help="extended Dynkin / crown witness search")
    _add_common(p)
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)

    p = sub.add_parser("corpus-verify", help="run the locked corpus checks")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--budget", type=int, default=ops.DEFAULT_BUDGET)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return ap


def _read(path: str) -> str | None:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None


def main(argv=None) -> int:
    threads = os.environ.get("RAYCAT_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print("error: RAYCAT_THREADS must be a positive integer",
                  file=sys.stderr)
            return 2
        # all operations run single-threaded; any positive cap is honoured

    args = build_parser().parse_args(argv)
    cmd = args.command

    if cmd == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if cmd == "corpus-verify":
        result = ops.op_corpus_verify(budget=args.budget)
    else:
        text = _read(args.file)
        if text is None:
            return 2
        if cmd == "build":
            result = ops.op_build(text, cap=args.cap)
        elif cmd == "axioms":
            result = ops.op_axioms(text, cap=args.cap)
        elif cmd == "morph":
            result = ops.op_morph(text, cap=args.cap, point=args.point,
                                  pair=tuple(args.pair) if args.pair else None)
        elif cmd == "contours":
            result = ops.op_contours(text, cap=args.cap)
        elif cmd == "uniqueness":
            result = ops.op_uniqueness(text, contour=args.contour, cap=args.cap)
        elif cmd == "classify":
            result = ops.op_classify(text, cap=args.cap, contour=args.contour,
                                     budget=args.budget)
        elif cmd == "check-mild":
            result = ops.op_check_mild(text, contour=args.contour, cap=args.cap,
                                       budget=args.budget, k=args.k)
        elif cmd == "disjoint":
            result = ops.op_disjoint(text, contours=tuple(args.contours),
                                     k=args.k, cap=args.cap, budget=args.budget)
        elif cmd == "neighborhood":
            result = ops.op_neighborhood(text, contour=args.contour,
                                         cap=args.cap, budget=args.budget)
        elif cmd == "quotient":
            result = ops.op_quotient(text, kill=args.kill, cap=args.cap)
        elif cmd == "split":
            result = ops.op_split(text, point=args.point, cap=args.cap)
        elif cmd == "sub":
            result = ops.op_sub(text, points=tuple(args.points.split(",")),
                                cap=args.cap)
        elif cmd == "decisive":
            result = ops.op_decisive(text, contour=args.contour, k=args.k,
                                     cap=args.cap)
        elif cmd == "cleave":
            diagram = _read(args.diagram)
            if diagram is None:
                return 2
            result = ops.op_cleave(text, diagram_json=diagram, cap=args.cap)
        elif cmd == "crown":
            result = ops.op_crown(text, max_period=args.max_period, cap=args.cap)
        elif cmd == "separate":
            result = ops.op_separate(text, cap=args.cap)
        elif cmd == "witness":
            result = ops.op_witness(text, budget=args.budget, cap=args.cap)
        else:  # pragma: no cover
            print(f"error: unknown command {cmd}", file=sys.stderr)
            return 2

    if args.format == "json":
        sys.stdout.write(result.json())
    else:
        sys.stdout.write(result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
