"""HTTP service exposing the store over the documented routes.

Read-only by construction: every handler goes through the store's
read connections, and the one write that can happen (schema setup on a
fresh file) runs once at startup, not per request.

Routes:
    GET  /attribute/{name}/{hash}   plain-text value(s)
    GET  /info/{hash}               all set attributes as JSON
    GET  /file/{hash}               instance file download
    POST /query                     {"query": ..., "resolve": [...]}
    GET  /groups                    attribute catalog
    GET  /getdatabase               the database file itself
    /                               static web console, when bundled
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import GbdError, ParseError, UnknownGroupError
from .query.ast import NAME_RE
from .store import Store

__all__ = ["create_app", "main"]

_STATIC_DIR = os.path.join(os.path.dirname(__file__), "static")


class QueryRequest(BaseModel):
    query: str = ""
    resolve: list[str] = []


def create_app(
    db_path: str | os.PathLike[str],
    instance_roots: tuple[str, ...] | list[str] = (),
    static_dir: str | None = None,
) -> FastAPI:
    store = Store(db_path)
    roots = tuple(str(Path(r).resolve()) for r in instance_roots)
    app = FastAPI(title="gbd", openapi_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"message": "invalid request body", "position": None}, status_code=400
        )

    @app.get("/attribute/{name}/{hash_}", response_class=PlainTextResponse)
    def get_attribute(name: str, hash_: str):
        if not NAME_RE.match(name):
            return PlainTextResponse("malformed attribute name", status_code=400)
        try:
            values = store.get_values(name, hash_)
        except UnknownGroupError:
            values = []
        if not values:
            return PlainTextResponse("no such attribute value", status_code=404)
        return "\n".join(values)

    @app.get("/info/{hash_}")
    def get_info(hash_: str):
        info: dict[str, str | list[str]] = {}
        for group in store.groups():
            values = store.get_values(group.name, hash_)
            if not values:
                continue
            info[group.name] = values if group.multi_valued else values[0]
        if not info:
            return JSONResponse({"message": "unknown hash"}, status_code=404)
        return info

    @app.get("/file/{hash_}")
    def get_file(hash_: str):
        try:
            paths = store.get_values("local", hash_)
        except UnknownGroupError:
            paths = []
        for path in paths:
            resolved = Path(path).resolve()
            if not _confined(resolved, roots):
                continue
            if resolved.is_file():
                return FileResponse(
                    resolved,
                    media_type="application/octet-stream",
                    filename=os.path.basename(path),
                )
        return JSONResponse({"message": "no file available"}, status_code=404)

    @app.post("/query")
    def post_query(body: QueryRequest):
        try:
            rows = store.query_rows(body.query, body.resolve)
        except ParseError as exc:
            return JSONResponse(
                {"message": str(exc), "position": exc.position}, status_code=400
            )
        except UnknownGroupError as exc:
            return JSONResponse(
                {"message": str(exc), "position": None}, status_code=400
            )
        return {
            "columns": ["hash", *body.resolve],
            "rows": [[row.hash, *row.values] for row in rows],
        }

    @app.get("/groups")
    def get_groups():
        return [
            {
                "name": g.name,
                "valueKind": g.value_kind,
                "multiValued": g.multi_valued,
            }
            for g in store.groups()
        ]

    @app.get("/getdatabase")
    def get_database():
        return FileResponse(
            store.path,
            media_type="application/octet-stream",
            filename=os.path.basename(store.path) or "gbd.db",
        )

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app


def _confined(resolved: Path, roots: tuple[str, ...]) -> bool:
    for root in roots:
        try:
            if os.path.commonpath([str(resolved), root]) == root:
                return True
        except ValueError:
            # different drives or mixed absolute/relative
            continue
    return False


def main() -> None:
    parser = argparse.ArgumentParser(
        prog="gbd-server", description="Serve the attribute database over HTTP."
    )
    parser.add_argument("--db", metavar="PATH", help="database file (default: $GBD_DB)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument(
        "--root",
        action="append",
        default=[],
        metavar="DIR",
        help="directory allowed for file serving; repeatable",
    )
    parser.add_argument(
        "--static",
        default=_STATIC_DIR,
        metavar="DIR",
        help="web console assets (default: bundled)",
    )
    args = parser.parse_args()

    db_path = args.db or os.environ.get("GBD_DB")
    if not db_path:
        print(
            "gbd-server: error: no database path: pass --db PATH or set GBD_DB",
            file=sys.stderr,
        )
        sys.exit(1)

    try:
        app = create_app(db_path, tuple(args.root), args.static)
    except GbdError as exc:
        print(f"gbd-server: error: {exc}", file=sys.stderr)
        sys.exit(2)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
