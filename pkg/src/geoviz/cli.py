"""Operator command line: serve the API, check a dataset, export trees."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from geoviz import data as bundled_data
from geoviz.ingest import IngestError, ingest_report, parse_dataset
from geoviz.tree import SPATIAL, TEMPORAL, build_spatial_tree, build_temporal_tree, tree_to_dict


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geoviz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP query service")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument(
        "--data",
        type=Path,
        default=bundled_data.sample_dataset_path(),
        help="dataset file (defaults to the bundled sample)",
    )
    serve.add_argument("--static-dir", type=Path, default=None, help="UI bundle to serve at /")
    serve.add_argument("--embed-endpoint", default=None, help="remote embedding endpoint URL")
    serve.add_argument("--embed-model", default="", help="remote embedding model name")
    serve.add_argument("--lenient", action="store_true", help="ignore unknown record keys")

    check = sub.add_parser("check", help="validate a dataset file and print the report")
    check.add_argument("file", type=Path)
    check.add_argument("--lenient", action="store_true")

    export = sub.add_parser("export-tree", help="print a concept tree as JSON")
    export.add_argument("file", type=Path)
    export.add_argument("--axis", choices=[TEMPORAL, SPATIAL], default=TEMPORAL)
    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    from geoviz.server import ServerConfig, serve

    config = ServerConfig(
        data_path=args.data,
        port=args.port,
        host=args.host,
        static_dir=args.static_dir,
        embed_endpoint=args.embed_endpoint,
        embed_model=args.embed_model,
        lenient_parse=args.lenient,
    )
    try:
        serve(config)
    except IngestError as exc:
        print(f"cannot serve {args.data}:", file=sys.stderr)
        print(exc.report.summary(), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    try:
        with open(args.file, "rb") as f:
            _, report = ingest_report(f, lenient=args.lenient)
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return 1
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_export_tree(args: argparse.Namespace) -> int:
    try:
        with open(args.file, "rb") as f:
            dataset = parse_dataset(f)
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return 1
    except IngestError as exc:
        print(exc.report.summary(), file=sys.stderr)
        return 1
    build = build_temporal_tree if args.axis == TEMPORAL else build_spatial_tree
    print(json.dumps(tree_to_dict(build(dataset)), ensure_ascii=False))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"serve": _cmd_serve, "check": _cmd_check, "export-tree": _cmd_export_tree}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
