"""Command line: ``su2splice arcs``, ``su2splice splice``, ``su2splice verify``."""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .presentations import GluingMatrix, PresentationError

EXIT_OK, EXIT_FAIL, EXIT_PROVISIONAL, EXIT_USAGE = 0, 1, 2, 64

# "-2,7" would otherwise be read as an option flag
_NEGATIVE_LIST = re.compile(r"^-\d+(,-?\d+)+$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.strip().split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text.strip()!r}")


def _matrix(text: str) -> GluingMatrix:
    vals = _int_list(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("matrix needs four integers a,b,c,d")
    try:
        return GluingMatrix(*vals)
    except PresentationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _summands(tokens: Sequence[str]) -> tuple[tuple[int, int], ...]:
    nums = [n for t in tokens for n in _int_list(t)]
    if len(nums) % 2:
        raise UsageError(f"knot spec {','.join(map(str, nums))} needs (p, q) pairs")
    return tuple(zip(nums[0::2], nums[1::2]))


def _piece(tokens):
    from .splice import Piece

    if len(tokens) == 1 and tokens[0].strip().lower() in ("u", "unknot"):
        return Piece(())
    return Piece(_summands(tokens))


def _emit(data: dict, path: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_arcs(args) -> int:
    from .figures import FigureSpec, render_svg, strata_layers

    if args.sum:
        if args.knot:
            raise UsageError("give either P Q or --sum, not both")
        piece = _piece(args.sum)
    elif len(args.knot) == 2:
        piece = _piece([f"{args.knot[0]},{args.knot[1]}"])
    else:
        raise UsageError("arcs needs P Q or --sum p1,q1,...")
    strata = piece.strata(samples=args.samples)
    _emit({"knot": piece.label, "summands": [list(s) for s in piece.summands],
           "strata": [s.to_json() for s in strata]}, args.json)
    if args.svg:
        Path(args.svg).write_text(render_svg(FigureSpec(f"image of {piece.label}",
                                                        layers=strata_layers(strata, name=piece.label))))
    return EXIT_OK


def cmd_splice(args) -> int:
    from .figures import overlay_figure, render_svg
    from .splice import census

    left = _piece([args.left])
    if args.sum and args.right:
        raise UsageError("give the right piece either positionally or with --sum")
    if not (args.sum or args.right):
        raise UsageError("missing right piece")
    right = _piece(args.sum or [args.right])
    report = census(left, right, args.matrix, samples=args.samples)
    _emit(report.to_json(), args.json)
    if args.svg:
        loci = [p for c in report.components for p in c.component.pieces] + report.reducible
        fig = overlay_figure(left.strata(samples=args.samples), right.strata(samples=args.samples),
                             args.matrix, loci, f"{left.label} and h-image of {right.label}")
        Path(args.svg).write_text(render_svg(fig))
    if report.provisional:
        print("warning: some numerical ranks were close to the threshold; census is provisional",
              file=sys.stderr)
        return EXIT_PROVISIONAL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all
    from .figures import render_svg, standard_figures

    results = run_all(homology_only=args.homology_only)
    for r in results:
        print(r.line())
    if args.figures is not None:
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        for name, spec in standard_figures().items():
            (out / f"{name}.svg").write_text(render_svg(spec))
        print(f"wrote fig1.svg ... fig5.svg to {out}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="su2splice", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    arcs = sub.add_parser("arcs", help="strata of a torus knot or a connected sum")
    arcs.add_argument("knot", nargs="*", type=int, metavar="P Q")
    arcs.add_argument("--sum", nargs="+", metavar="p,q", help="summands p1,q1[,p2,q2 ...]")
    arcs.set_defaults(func=cmd_arcs)

    spl = sub.add_parser("splice", help="character variety census of a splice")
    spl.add_argument("left", metavar="LEFT", help="left knot p,q[,p,q ...] or 'u'")
    spl.add_argument("right", nargs="?", metavar="RIGHT", help="right knot, or use --sum")
    spl.add_argument("--sum", nargs="+", metavar="p,q", help="right piece as a connected sum")
    spl.add_argument("--matrix", type=_matrix, default=GluingMatrix(1, 0, -1, -1),
                     help="gluing matrix a,b,c,d (default 1,0,-1,-1)")
    spl.set_defaults(func=cmd_splice)

    for p in (arcs, spl):
        p.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")
        p.add_argument("--svg", metavar="PATH", help="also write an SVG picture")
        p.add_argument("--samples", type=int, help="oracle samples per arc (default 64|pq|)")

    ver = sub.add_parser("verify", help="run the acceptance checks")
    ver.add_argument("--homology-only", action="store_true")
    ver.add_argument("--figures", nargs="?", const=".", metavar="DIR",
                     help="also write fig1.svg ... fig5.svg (default: current directory)")
    ver.set_defaults(func=cmd_verify)
    return parser


def _protect_negative_lists(argv: Sequence[str]) -> list[str]:
    # a leading space keeps argparse from treating the token as a flag
    return [f" {a}" if _NEGATIVE_LIST.match(a) else a for a in argv]


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_protect_negative_lists(argv))
    if getattr(args, "samples", None) is not None and args.samples < 2:
        parser.error("--samples must be at least 2")
    try:
        return args.func(args)
    except (UsageError, PresentationError, ValueError) as exc:
        print(f"su2splice: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
