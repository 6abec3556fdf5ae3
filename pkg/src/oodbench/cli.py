"""Command line entry point.

Subcommands: corrupt, params, eval, report, pairs-convert.  Requested
data goes to stdout, progress to stderr.  Exit codes: 0 success,
1 usage error, 2 data error; every failure prints one line starting
with ``error:<category>:``.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import OodbenchError
from .evaluate import EvalConfig, evaluate
from .pairs import pairs_to_csv, parse_pairs
from .params import KIND_NAMES, severity_params
from .pipeline import corrupt_dataset
from .report import emit_report, from_json_dict, to_json_dict


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="oodbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corrupt", help="corrupt an image tree")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--kinds", default="all", help='"all" or comma-separated kind names')
    p.add_argument("--levels", default="all", help='"all" or comma-separated levels')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("params", help="print severity hyperparameters as JSON")
    p.add_argument("--kind", required=True, help='kind name or "all"')
    p.add_argument("--level", type=int, default=None)

    p = sub.add_parser("eval", help="evaluate embeddings over a corruption grid")
    p.add_argument("--pairs", required=True)
    p.add_argument("--format", default="csv", choices=("csv", "lfw"))
    p.add_argument("--clean", required=True)
    p.add_argument("--grid", required=True, help="path pattern with {kind} and {level}")
    p.add_argument("--policy", default="global-best")
    p.add_argument("--mode", default="corruption", choices=("corruption", "variation", "api"))
    p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="render a report JSON file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument(
        "--format",
        required=True,
        choices=("csv", "json", "markdown", "radar-json", "line-json"),
    )
    p.add_argument("--out", default=None)

    p = sub.add_parser("pairs-convert", help="convert LFW pairs text to CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    return parser


def _write_out(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(out).write_bytes(data)


def _cmd_corrupt(args) -> int:
    kinds = list(KIND_NAMES) if args.kinds == "all" else args.kinds.split(",")
    levels = [1, 2, 3, 4, 5] if args.levels == "all" else [int(x) for x in args.levels.split(",")]
    manifest = corrupt_dataset(
        args.input, args.output, kinds, levels, args.seed, jobs=args.jobs
    )
    print(
        f"wrote {len(manifest.entries)} outputs, skipped {len(manifest.skipped)}",
        file=sys.stderr,
    )
    return 0


def _cmd_params(args) -> int:
    kinds = list(KIND_NAMES) if args.kind == "all" else [args.kind]
    levels = [args.level] if args.level is not None else [1, 2, 3, 4, 5]
    rows = [severity_params(k, l) for k in kinds for l in levels]
    payload = rows[0] if len(rows) == 1 else rows
    _write_out((json.dumps(payload, sort_keys=True, indent=2) + "\n").encode(), None)
    return 0


def _cmd_eval(args) -> int:
    config = EvalConfig(
        pairs_path=args.pairs,
        pairs_format="lfw" if args.format == "lfw" else "csv",
        clean_embeddings_path=args.clean,
        grid_embeddings_pattern=args.grid,
        threshold_policy=args.policy,
        mode=args.mode,
    )
    report = evaluate(config)
    data = (json.dumps(to_json_dict(report), sort_keys=True, indent=2) + "\n").encode()
    _write_out(data, args.out)
    return 0


def _cmd_report(args) -> int:
    data = json.loads(Path(args.infile).read_text("utf-8"))
    report = from_json_dict(data)
    fmt = args.format.replace("-", "_")
    _write_out(emit_report(report, fmt), args.out)
    return 0


def _cmd_pairs_convert(args) -> int:
    records = parse_pairs(args.infile, "lfw")
    _write_out(pairs_to_csv(records).encode(), args.out)
    return 0


_COMMANDS = {
    "corrupt": _cmd_corrupt,
    "params": _cmd_params,
    "eval": _cmd_eval,
    "report": _cmd_report,
    "pairs-convert": _cmd_pairs_convert,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error:usage:{exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except OodbenchError as exc:
        print(f"error:{exc.category}:{exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error:io:{exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
