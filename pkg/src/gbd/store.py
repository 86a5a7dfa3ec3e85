"""SQLite-backed attribute store.

One database file holds a ``groups`` catalog table plus one value table
per attribute group, each with columns (hash, value).  Group names are
restricted to identifier syntax, so they double as table names.  The
reserved groups ``local`` and ``filename`` exist in every store and
record where instance files live on disk.

Every public method opens its own connection and runs as a single
transaction, so a failed operation leaves the file unchanged and
concurrent readers see consistent snapshots.
"""

from __future__ import annotations

import csv
import os
import sqlite3
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

from .errors import (
    CsvFormatError,
    GroupExistsError,
    InvalidValueError,
    MalformedNameError,
    ReservedNameError,
    StoreFormatError,
    UnknownGroupError,
)
from .features import features_of_file
from .hashing import hash_file, is_gbd_hash
from .query import GroupData, coerce_number, compile_query, parse
from .query.ast import NAME_RE

__all__ = [
    "AttributeGroup",
    "BootstrapSummary",
    "DedupCluster",
    "DedupReport",
    "ImportSummary",
    "InitSummary",
    "InstanceRow",
    "Store",
    "RESERVED_GROUPS",
    "BASE_FEATURE_GROUPS",
]

RESERVED_GROUPS = ("local", "filename")
BASE_FEATURE_GROUPS = ("variables", "clauses", "clauses_horn")
INSTANCE_EXTENSIONS = (".cnf", ".cnf.gz")

_SQLITE_HEADER = b"SQLite format 3\x00"
# catalog table plus names SQLite claims for itself
_UNCREATABLE = frozenset(RESERVED_GROUPS) | {"groups"}


@dataclass(frozen=True)
class AttributeGroup:
    name: str
    value_kind: str = "text"  # text | numeric
    default_value: str | None = None
    multi_valued: bool = False


@dataclass(frozen=True)
class InstanceRow:
    hash: str
    values: tuple[str, ...] = ()


@dataclass(frozen=True)
class InitSummary:
    files_scanned: int = 0
    instances_registered: int = 0
    duplicate_files: int = 0
    files_skipped: int = 0


@dataclass
class BootstrapSummary:
    computed: int = 0
    skipped: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class ImportSummary:
    rows_imported: int = 0
    groups_created: int = 0


@dataclass(frozen=True)
class DedupCluster:
    hash: str
    paths: tuple[str, ...]


@dataclass(frozen=True)
class DedupReport:
    nominal: int = 0
    actual: int = 0
    clusters: tuple[DedupCluster, ...] = ()


class Store:
    """Open or create the attribute database at ``path``."""

    def __init__(self, path: str | os.PathLike[str]) -> None:
        self.path = os.fspath(path)
        self._check_format()
        with self._connect(write=True) as conn:
            conn.execute(
                "CREATE TABLE IF NOT EXISTS groups ("
                " name TEXT PRIMARY KEY,"
                " value_kind TEXT NOT NULL DEFAULT 'text',"
                " default_value TEXT,"
                " multi_valued INTEGER NOT NULL DEFAULT 0)"
            )
            for name in RESERVED_GROUPS:
                self._add_group(conn, AttributeGroup(name, "text", None, True))

    def _check_format(self) -> None:
        try:
            with open(self.path, "rb") as handle:
                head = handle.read(len(_SQLITE_HEADER))
        except FileNotFoundError:
            return
        except OSError as exc:
            raise StoreFormatError(f"cannot read {self.path}: {exc}") from exc
        if head and head != _SQLITE_HEADER:
            raise StoreFormatError(f"{self.path} is not an SQLite database")
        if not head:
            return
        # A well-formed SQLite file that carries someone else's schema is
        # left alone rather than silently converted.
        with self._connect() as conn:
            tables = [
                row[0]
                for row in conn.execute(
                    "SELECT name FROM sqlite_master WHERE type = 'table'"
                )
            ]
        if tables and "groups" not in tables:
            raise StoreFormatError(f"{self.path} is not an attribute database")

    @contextmanager
    def _connect(self, write: bool = False):
        try:
            conn = sqlite3.connect(self.path, timeout=60.0)
        except sqlite3.Error as exc:
            raise StoreFormatError(f"cannot open {self.path}: {exc}") from exc
        try:
            conn.create_function("gbd_num", 1, coerce_number, deterministic=True)
            if not write:
                conn.execute("PRAGMA query_only = ON")
            yield conn
            if write:
                conn.commit()
        except sqlite3.DatabaseError as exc:
            if write:
                conn.rollback()
            raise StoreFormatError(f"{self.path}: {exc}") from exc
        except BaseException:
            if write:
                conn.rollback()
            raise
        finally:
            conn.close()

    # -- catalog ----------------------------------------------------------

    def groups(self) -> list[AttributeGroup]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT name, value_kind, default_value, multi_valued"
                " FROM groups ORDER BY name"
            ).fetchall()
        return [AttributeGroup(n, k, d, bool(m)) for n, k, d, m in rows]

    def group(self, name: str) -> AttributeGroup:
        for grp in self.groups():
            if grp.name == name:
                return grp
        raise UnknownGroupError(name, [g.name for g in self.groups()])

    def create_group(
        self,
        name: str,
        value_kind: str = "text",
        default_value: str | None = None,
        multi_valued: bool = False,
    ) -> None:
        _check_new_name(name)
        if value_kind not in ("text", "numeric"):
            raise InvalidValueError(f"unknown value kind {value_kind!r}")
        if (
            value_kind == "numeric"
            and default_value is not None
            and coerce_number(default_value) is None
        ):
            raise InvalidValueError(
                f"default {default_value!r} is not numeric"
            )
        group = AttributeGroup(name, value_kind, default_value, multi_valued)
        with self._connect(write=True) as conn:
            # table names compare case-insensitively, so the existence
            # check has to as well
            clash = conn.execute(
                "SELECT name FROM groups WHERE lower(name) = ?", (name.lower(),)
            ).fetchone()
            if clash:
                raise GroupExistsError(f"group {clash[0]!r} already exists")
            self._add_group(conn, group)

    def _add_group(self, conn: sqlite3.Connection, group: AttributeGroup) -> None:
        constraints = ", UNIQUE(hash, value)"
        if not group.multi_valued:
            constraints += ", UNIQUE(hash)"
        conn.execute(
            f'CREATE TABLE IF NOT EXISTS "{group.name}"'
            f" (hash TEXT NOT NULL, value TEXT NOT NULL{constraints})"
        )
        conn.execute(
            "INSERT OR IGNORE INTO groups"
            " (name, value_kind, default_value, multi_valued)"
            " VALUES (?, ?, ?, ?)",
            (group.name, group.value_kind, group.default_value, int(group.multi_valued)),
        )

    # -- values -----------------------------------------------------------

    def set_value(self, group_name: str, hash_: str, value: str) -> None:
        group = self.group(group_name)
        if group.value_kind == "numeric" and coerce_number(value) is None:
            raise InvalidValueError(
                f"group {group_name!r} is numeric; {value!r} is not a number"
            )
        with self._connect(write=True) as conn:
            self._set_value(conn, group, hash_, value)

    def _set_value(
        self, conn: sqlite3.Connection, group: AttributeGroup, hash_: str, value: str
    ) -> None:
        if group.multi_valued:
            conn.execute(
                f'INSERT OR IGNORE INTO "{group.name}" (hash, value) VALUES (?, ?)',
                (hash_, value),
            )
        else:
            conn.execute(f'DELETE FROM "{group.name}" WHERE hash = ?', (hash_,))
            conn.execute(
                f'INSERT INTO "{group.name}" (hash, value) VALUES (?, ?)',
                (hash_, value),
            )

    def get_values(self, group_name: str, hash_: str) -> list[str]:
        self.group(group_name)
        with self._connect() as conn:
            rows = conn.execute(
                f'SELECT value FROM "{group_name}" WHERE hash = ? ORDER BY value',
                (hash_,),
            ).fetchall()
        return [value for (value,) in rows]

    def register_instance(self, path: str | os.PathLike[str], hash_: str) -> None:
        if not is_gbd_hash(hash_):
            raise InvalidValueError(f"{hash_!r} is not a content hash")
        with self._connect(write=True) as conn:
            self._register(conn, os.fspath(path), hash_)

    def _register(self, conn: sqlite3.Connection, path: str, hash_: str) -> None:
        conn.execute(
            'INSERT OR IGNORE INTO "local" (hash, value) VALUES (?, ?)', (hash_, path)
        )
        conn.execute(
            'INSERT OR IGNORE INTO "filename" (hash, value) VALUES (?, ?)',
            (hash_, os.path.basename(path)),
        )

    # -- bulk operations --------------------------------------------------

    def init_paths(self, root: str | os.PathLike[str], jobs: int = 1) -> InitSummary:
        """Hash every instance file under ``root`` and register the paths.

        Hashing runs on up to ``jobs`` threads; registrations are then
        committed in sorted-path order, so the resulting store does not
        depend on scheduling.
        """
        skipped = 0

        def on_walk_error(_error: OSError) -> None:
            nonlocal skipped
            skipped += 1

        candidates: list[str] = []
        root = os.path.abspath(os.fspath(root))
        for dirpath, _dirnames, filenames in os.walk(root, onerror=on_walk_error):
            for filename in filenames:
                if filename.lower().endswith(INSTANCE_EXTENSIONS):
                    candidates.append(os.path.join(dirpath, filename))
        candidates.sort()

        def safe_hash(path: str) -> str | None:
            try:
                return hash_file(path)
            except Exception:
                return None

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            digests = list(pool.map(safe_hash, candidates))

        registered: list[tuple[str, str]] = []
        for path, digest in zip(candidates, digests):
            if digest is None:
                skipped += 1
            else:
                registered.append((path, digest))

        with self._connect(write=True) as conn:
            for path, digest in registered:
                self._register(conn, path, digest)

        distinct = len({digest for _path, digest in registered})
        return InitSummary(
            files_scanned=len(candidates),
            instances_registered=distinct,
            duplicate_files=len(registered) - distinct,
            files_skipped=skipped,
        )

    def bootstrap(self, jobs: int = 1) -> BootstrapSummary:
        """Compute and store the base formula features for every instance.

        Creates the feature groups on first use and skips hashes that
        already have all of them, so reruns are cheap and user-set
        values survive.
        """
        existing = {g.name for g in self.groups()}
        for name in BASE_FEATURE_GROUPS:
            if name not in existing:
                self.create_group(name, "numeric")

        with self._connect() as conn:
            paths_by_hash: dict[str, list[str]] = {}
            for hash_, path in conn.execute('SELECT hash, value FROM "local"'):
                paths_by_hash.setdefault(hash_, []).append(path)
            populated: set[str] = set()
            for index, name in enumerate(BASE_FEATURE_GROUPS):
                hashes = {row[0] for row in conn.execute(f'SELECT hash FROM "{name}"')}
                populated = hashes if index == 0 else populated & hashes

        summary = BootstrapSummary()
        todo = sorted(h for h in paths_by_hash if h not in populated)
        summary.skipped = len(paths_by_hash) - len(todo)

        def extract(hash_: str):
            last_error = "no local path recorded"
            for path in sorted(paths_by_hash[hash_]):
                try:
                    return features_of_file(path)
                except Exception as exc:
                    last_error = f"{path}: {exc}"
            return last_error

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            results = list(pool.map(extract, todo))

        groups = {name: self.group(name) for name in BASE_FEATURE_GROUPS}
        with self._connect(write=True) as conn:
            for hash_, outcome in zip(todo, results):
                if isinstance(outcome, str):
                    summary.failures.append((hash_, outcome))
                    continue
                values = (outcome.variables, outcome.clauses, outcome.clauses_horn)
                for name, value in zip(BASE_FEATURE_GROUPS, values):
                    self._set_value(conn, groups[name], hash_, str(value))
                summary.computed += 1
        return summary

    def import_csv(self, csv_path: str | os.PathLike[str]) -> ImportSummary:
        """Load attribute values from a CSV file with a header row.

        The header must contain a ``hash`` column; every other column
        names a group, created as single-valued text if missing.  Empty
        cells are skipped.  The whole import is one transaction.
        """
        try:
            handle = open(csv_path, "r", encoding="utf-8", newline="")
        except OSError as exc:
            raise CsvFormatError(f"cannot read {csv_path}: {exc}") from exc
        with handle:
            try:
                rows = list(csv.reader(handle))
            except (csv.Error, UnicodeDecodeError) as exc:
                raise CsvFormatError(f"{csv_path}: {exc}") from exc
        if not rows:
            raise CsvFormatError(f"{csv_path}: missing header row")
        header = rows[0]
        if "hash" not in header:
            raise CsvFormatError(f"{csv_path}: no 'hash' column in header")
        hash_index = header.index("hash")
        value_columns = [
            (i, name) for i, name in enumerate(header) if i != hash_index
        ]

        catalog = {g.name: g for g in self.groups()}
        lowered = {name.lower() for name in catalog}
        to_create: list[AttributeGroup] = []
        for _, name in value_columns:
            if name in catalog:
                continue
            _check_new_name(name)
            if name.lower() in lowered:
                raise GroupExistsError(f"column {name!r} clashes with an existing group")
            group = AttributeGroup(name, "text", None, False)
            to_create.append(group)
            catalog[name] = group
            lowered.add(name.lower())

        imported = 0
        with self._connect(write=True) as conn:
            for group in to_create:
                self._add_group(conn, group)
            for row in rows[1:]:
                hash_ = row[hash_index] if hash_index < len(row) else ""
                if not hash_:
                    continue
                imported += 1
                for i, name in value_columns:
                    value = row[i] if i < len(row) else ""
                    if not value:
                        continue
                    group = catalog[name]
                    if group.value_kind == "numeric" and coerce_number(value) is None:
                        raise InvalidValueError(
                            f"group {name!r} is numeric; {value!r} is not a number"
                        )
                    self._set_value(conn, group, hash_, value)
        return ImportSummary(
            rows_imported=imported, groups_created=len(to_create)
        )

    # -- reporting and queries --------------------------------------------

    def dedup_report(self) -> DedupReport:
        with self._connect() as conn:
            paths_by_hash: dict[str, list[str]] = {}
            total = 0
            for hash_, path in conn.execute('SELECT hash, value FROM "local"'):
                paths_by_hash.setdefault(hash_, []).append(path)
                total += 1
        clusters = [
            DedupCluster(hash_, tuple(sorted(paths)))
            for hash_, paths in paths_by_hash.items()
        ]
        clusters.sort(key=lambda c: (-len(c.paths), c.hash))
        return DedupReport(
            nominal=total, actual=len(clusters), clusters=tuple(clusters)
        )

    def query_rows(
        self, query_text: str, resolve: Sequence[str] = ()
    ) -> list[InstanceRow]:
        """Run a query; one row per matching hash, sorted by hash.

        Each resolve name adds a column; multi-valued attributes are
        joined with commas inside the cell.
        """
        node = parse(query_text)
        groups = self.groups()
        catalog = {g.name: g.default_value for g in groups}
        statement = compile_query(node, resolve, catalog)
        with self._connect() as conn:
            raw = conn.execute(statement).fetchall()

        cells: dict[str, list[set[str]]] = {}
        for row in raw:
            per_column = cells.setdefault(row[0], [set() for _ in resolve])
            for j, value in enumerate(row[1:]):
                if value is not None:
                    per_column[j].add(value)
        return [
            InstanceRow(hash_, tuple(",".join(sorted(vals)) for vals in cells[hash_]))
            for hash_ in sorted(cells)
        ]

    def snapshot(self) -> dict[str, GroupData]:
        """In-memory copy of every group, for the reference evaluator."""
        result: dict[str, GroupData] = {}
        with self._connect() as conn:
            for grp in self.groups():
                values: dict[str, list[str]] = {}
                for hash_, value in conn.execute(
                    f'SELECT hash, value FROM "{grp.name}"'
                ):
                    values.setdefault(hash_, []).append(value)
                result[grp.name] = GroupData(
                    grp.default_value,
                    {h: tuple(sorted(v)) for h, v in values.items()},
                )
        return result


def _check_new_name(name: str) -> None:
    if not NAME_RE.match(name):
        raise MalformedNameError(
            f"invalid group name {name!r}: must be a letter followed by"
            " letters, digits, or underscores"
        )
    lowered = name.lower()
    if lowered in _UNCREATABLE or lowered.startswith("sqlite_"):
        raise ReservedNameError(f"group name {name!r} is reserved")
