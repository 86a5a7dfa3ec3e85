"""Command-line interface.

Exit codes: 0 on success, 1 on usage problems (bad flags, unknown
subcommand, no database path), 2 on data problems (missing files,
malformed input, bad queries).  The database path comes from --db or,
failing that, the GBD_DB environment variable.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from collections.abc import Sequence

from .errors import GbdError
from .hashing import hash_file
from .store import Store

__all__ = ["main", "run"]


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str) -> None:
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    # argparse would exit(2) here; the exit-code contract wants 1
    def error(self, message: str):
        raise _UsageError(self, message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbd", description="Benchmark instance attribute database.")
    parser.add_argument("--db", metavar="PATH", help="database file (default: $GBD_DB)")
    parser.add_argument(
        "--format",
        choices=("plain", "csv"),
        default="plain",
        help="output style for get and dedup",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    cmd = commands.add_parser("init", help="scan a directory tree and register instances")
    cmd.add_argument("path", help="root directory to scan for .cnf/.cnf.gz files")
    cmd.add_argument("--jobs", type=_positive_int, default=1, metavar="N")
    cmd.set_defaults(func=_cmd_init, needs_store=True)

    cmd = commands.add_parser("bootstrap", help="compute base features for all instances")
    cmd.add_argument("--jobs", type=_positive_int, default=1, metavar="N")
    cmd.set_defaults(func=_cmd_bootstrap, needs_store=True)

    cmd = commands.add_parser("import", help="load attribute values from a CSV file")
    cmd.add_argument("csvfile", help="CSV file with a header row containing 'hash'")
    cmd.set_defaults(func=_cmd_import, needs_store=True)

    cmd = commands.add_parser("group", help="create an attribute group, or list them all")
    cmd.add_argument("name", nargs="?", help="group to create; omit to list the catalog")
    cmd.add_argument("--kind", choices=("text", "numeric"), default="text")
    cmd.add_argument("--default", dest="default_value", metavar="VALUE")
    cmd.add_argument("--multi", action="store_true", help="allow several values per hash")
    cmd.set_defaults(func=_cmd_group, needs_store=True)

    cmd = commands.add_parser("set", help="set an attribute value for one instance")
    cmd.add_argument("name", help="attribute group")
    cmd.add_argument("value")
    cmd.add_argument("hash")
    cmd.set_defaults(func=_cmd_set, needs_store=True)

    cmd = commands.add_parser("get", help="query instances and resolve attributes")
    cmd.add_argument("query", nargs="?", default="", help="query text; empty matches all")
    cmd.add_argument(
        "-r",
        "--resolve",
        nargs="*",
        default=[],
        metavar="NAME",
        help="attribute columns to include",
    )
    cmd.set_defaults(func=_cmd_get, needs_store=True)

    cmd = commands.add_parser("hash", help="print the content hash of one instance file")
    cmd.add_argument("file")
    cmd.set_defaults(func=_cmd_hash, needs_store=False)

    cmd = commands.add_parser("dedup", help="report duplicate instance files")
    cmd.set_defaults(func=_cmd_dedup, needs_store=True)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"{exc.parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if args.command is None:
        parser.print_usage(sys.stderr)
        print("gbd: error: no command given", file=sys.stderr)
        return 1

    db_path = args.db or os.environ.get("GBD_DB")
    if not db_path:
        print(
            "gbd: error: no database path: pass --db PATH or set GBD_DB",
            file=sys.stderr,
        )
        return 1

    try:
        store = Store(db_path) if args.needs_store else None
        args.func(store, args)
    except (GbdError, OSError) as exc:
        print(f"gbd: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


def _cmd_init(store: Store, args) -> None:
    summary = store.init_paths(args.path, jobs=args.jobs)
    print(
        f"scanned {summary.files_scanned} files:"
        f" {summary.instances_registered} instances,"
        f" {summary.duplicate_files} duplicates,"
        f" {summary.files_skipped} skipped",
        file=sys.stderr,
    )


def _cmd_bootstrap(store: Store, args) -> None:
    summary = store.bootstrap(jobs=args.jobs)
    print(
        f"computed features for {summary.computed} instances,"
        f" {summary.skipped} already done, {len(summary.failures)} failed",
        file=sys.stderr,
    )
    for hash_, reason in summary.failures:
        print(f"failed {hash_}: {reason}", file=sys.stderr)


def _cmd_import(store: Store, args) -> None:
    summary = store.import_csv(args.csvfile)
    print(
        f"imported {summary.rows_imported} rows,"
        f" created {summary.groups_created} groups",
        file=sys.stderr,
    )


def _cmd_group(store: Store, args) -> None:
    if args.name is None:
        for grp in store.groups():
            line = f"{grp.name} {grp.value_kind}"
            if grp.multi_valued:
                line += " multi"
            if grp.default_value is not None:
                line += f" default={grp.default_value}"
            print(line)
        return
    store.create_group(
        args.name,
        value_kind=args.kind,
        default_value=args.default_value,
        multi_valued=args.multi,
    )


def _cmd_set(store: Store, args) -> None:
    store.set_value(args.name, args.hash, args.value)


def _cmd_get(store: Store, args) -> None:
    rows = store.query_rows(args.query, args.resolve)
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["hash", *args.resolve])
        for row in rows:
            writer.writerow([row.hash, *row.values])
    else:
        for row in rows:
            print(" ".join([row.hash, *row.values]))


def _cmd_hash(_store: None, args) -> None:
    print(hash_file(args.file))


def _cmd_dedup(store: Store, args) -> None:
    report = store.dedup_report()
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["hash", "local"])
        for cluster in report.clusters:
            for path in cluster.paths:
                writer.writerow([cluster.hash, path])
    else:
        for cluster in report.clusters:
            print(" ".join([cluster.hash, *cluster.paths]))
    print(f"nominal={report.nominal} actual={report.actual}", file=sys.stderr)


if __name__ == "__main__":
    main()
