"""Command-line front end: plot {ber|ccdf|par} --in <csv...> --out <image>."""

from __future__ import annotations

import argparse
import sys

from .render import PlotJob, render
from .schema import SchemaError


def _parse_list(text):
    return tuple(tok.strip() for tok in text.split(",") if tok.strip()) or None


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from the simulator's CSV outputs")
    subs = parser.add_subparsers(dest="kind", required=True)
    for kind, source in (("ber", "a ber.csv"), ("ccdf", "an evm.csv"),
                         ("par", "a par.csv")):
        sub = subs.add_parser(kind, help=f"{kind} figure from {source}")
        sub.add_argument("--in", dest="inputs", metavar="CSV", nargs="+",
                         required=True)
        sub.add_argument("--out", metavar="IMAGE", required=True,
                         help="output path; format follows the extension")
        sub.add_argument("--precoder", default=None,
                         help="comma-separated precoder filter, e.g. dr,wf")
        sub.add_argument("--phase-bits", default=None,
                         help="comma-separated p filter, e.g. 2,inf")
        sub.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    job = PlotJob(kind=args.kind, inputs=tuple(args.inputs), output=args.out,
                  precoders=_parse_list(args.precoder) if args.precoder else None,
                  p_labels=_parse_list(args.phase_bits) if args.phase_bits else None,
                  title=args.title)
    try:
        path = render(job)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
