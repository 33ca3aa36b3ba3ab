"""HTTP facade over a data folder.

Reads are side-effect free and reflect the per-document edit session when one
exists; edits to one document are serialized behind a per-document lock.
Source files are immutable — diffs are the only write path.

Every engine error surfaces as ``{"error": CODE, "message": ...}`` with the
module's own error code and an appropriate status; stack traces never leak.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from ..errors import BaseMismatch, EngineError, ReplayConflict, UnknownId
from ..layout import ViewConfig, geometry_to_json, layout_document, layout_window
from ..model import (
    AnchorRef,
    Document,
    Taxonomy,
    VisibilityFilter,
    document_to_json,
    recolor_type,
    taxonomy_to_json,
)
from ..session import op_from_json, replay_session
from ..svg import StyleSheet, render_annotation_svg, render_tree_svg
from ..tree import extract_tree, tree_to_json
from .schemas import (
    DataFolderEntryModel,
    DocumentModel,
    EditRequest,
    EditResponse,
    RecolorRequest,
    ReplayResponse,
    TaxonomyModel,
)
from .store import DocumentStore, SessionRegistry

_ROWS_RE = re.compile(r"^(\d+)\.\.(\d+)$")

DEFAULT_ROW_WIDTH = ViewConfig().row_width

_STATUS_BY_CODE = {
    "UNKNOWN_ID": 404,
    "BASE_MISMATCH": 409,
}


class MalformedParameter(EngineError):
    code = "MALFORMED_PARAMETER"


def create_app(data_dir: str | Path,
               default_width: float = DEFAULT_ROW_WIDTH,
               frontend_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="annograph", version="0.1.0")
    store = DocumentStore(data_dir)
    registry = SessionRegistry(store)

    @app.exception_handler(EngineError)
    def engine_error_handler(request: Request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        body = {"error": exc.code, "message": str(exc)}
        if isinstance(exc, ReplayConflict):
            body["seq"] = exc.seq
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "MALFORMED_BODY", "message": str(exc.errors()[:3])})

    # -- helpers ---------------------------------------------------------------

    def current_view(doc_id: str) -> tuple[Document, frozenset, dict, Optional[Taxonomy]]:
        session = registry.peek(doc_id)
        if session is not None:
            return (session.current, session.state.hidden_ids,
                    session.state.row_overrides, session.state.taxonomy)
        doc = store.load_document(doc_id)
        taxonomy = None
        if doc.taxonomy_ref:
            taxonomy = store.load_taxonomy(doc.taxonomy_ref)
        return doc, frozenset(), {}, taxonomy

    def view_config(width: Optional[float], overrides: dict, hidden: frozenset,
                    semantics: bool, syntax: bool,
                    include: Optional[str], exclude: Optional[str]) -> ViewConfig:
        include_set = (frozenset(s for s in include.split(",") if s)
                       if include else None)
        exclude_set = (frozenset(s for s in exclude.split(",") if s)
                       if exclude else frozenset())
        return ViewConfig(
            row_width=width if width is not None else default_width,
            row_overrides=dict(overrides),
            visibility=VisibilityFilter(
                include_types=include_set,
                exclude_types=exclude_set,
                show_semantic=semantics,
                show_syntactic=syntax,
                hidden_ids=hidden,
            ),
        )

    def parse_rows(rows: Optional[str]) -> Optional[tuple[int, int]]:
        if rows is None:
            return None
        m = _ROWS_RE.match(rows)
        if m is None:
            raise MalformedParameter(f"rows must look like '0..5', got {rows!r}")
        return int(m.group(1)), int(m.group(2))

    def select_to_ref(doc: Document, select: str) -> AnchorRef:
        if select.startswith("@") and select[1:].isdigit():
            index = int(select[1:])
            if not 0 <= index < len(doc.tokens):
                raise UnknownId(f"token index {index} out of range")
            return AnchorRef.token(index)
        if select in doc.mentions:
            return AnchorRef.mention(select)
        if select in doc.relations:
            return AnchorRef.relation(select)
        raise UnknownId(f"no element with id {select!r}")

    # -- documents ---------------------------------------------------------------

    @app.get("/api/documents", response_model=list[DataFolderEntryModel])
    def list_documents():
        return [DataFolderEntryModel(id=e.id, format=e.format,
                                     files=list(e.files), taxonomy_id=e.taxonomy_id)
                for e in store.entries()]

    @app.get("/api/documents/{doc_id}", response_model=DocumentModel)
    def get_document(doc_id: str):
        doc, _, _, _ = current_view(doc_id)
        return DocumentModel(**document_to_json(doc))

    @app.get("/api/documents/{doc_id}/layout")
    def get_layout(doc_id: str,
                   rows: Optional[str] = Query(default=None),
                   width: Optional[float] = Query(default=None),
                   semantics: bool = Query(default=True),
                   syntax: bool = Query(default=True),
                   include: Optional[str] = Query(default=None),
                   exclude: Optional[str] = Query(default=None)):
        doc, hidden, overrides, _ = current_view(doc_id)
        cfg = view_config(width, overrides, hidden, semantics, syntax,
                          include, exclude)
        row_range = parse_rows(rows)
        if row_range is None:
            geometry = layout_document(doc, cfg)
        else:
            geometry = layout_window(doc, cfg, row_range)
        return JSONResponse(content=geometry_to_json(geometry))

    @app.get("/api/documents/{doc_id}/tree")
    def get_tree(doc_id: str, select: str = Query(...)):
        doc, _, _, _ = current_view(doc_id)
        tree = extract_tree(doc, select_to_ref(doc, select))
        return JSONResponse(content=tree_to_json(tree))

    @app.get("/api/documents/{doc_id}/svg")
    def get_svg(doc_id: str,
                width: Optional[float] = Query(default=None),
                semantics: bool = Query(default=True),
                syntax: bool = Query(default=True),
                include: Optional[str] = Query(default=None),
                exclude: Optional[str] = Query(default=None)):
        doc, hidden, overrides, taxonomy = current_view(doc_id)
        cfg = view_config(width, overrides, hidden, semantics, syntax,
                          include, exclude)
        geometry = layout_document(doc, cfg)
        style = StyleSheet.from_taxonomy(taxonomy)
        return Response(content=render_annotation_svg(geometry, style),
                        media_type="image/svg+xml")

    @app.get("/api/documents/{doc_id}/tree.svg")
    def get_tree_svg(doc_id: str, select: str = Query(...)):
        doc, _, _, taxonomy = current_view(doc_id)
        tree = extract_tree(doc, select_to_ref(doc, select))
        style = StyleSheet.from_taxonomy(taxonomy)
        return Response(content=render_tree_svg(tree, style),
                        media_type="image/svg+xml")

    # -- edits ---------------------------------------------------------------------

    @app.post("/api/documents/{doc_id}/edits", response_model=EditResponse)
    def post_edit(doc_id: str, body: EditRequest):
        store_entry_check(doc_id)
        with registry.lock_for(doc_id):
            session = registry.session(doc_id)
            op = op_from_json(body.op.model_dump())
            before = set(session.current.mentions) | set(session.current.relations)
            seq = session.apply(op)
            after = set(session.current.mentions) | set(session.current.relations)
            return EditResponse(
                seq=seq,
                removed_ids=sorted(before - after),
                document=DocumentModel(**document_to_json(session.current)))

    @app.post("/api/documents/{doc_id}/undo", response_model=EditResponse)
    def post_undo(doc_id: str):
        store_entry_check(doc_id)
        with registry.lock_for(doc_id):
            session = registry.session(doc_id)
            seq = session.undo()
            return EditResponse(
                seq=seq, removed_ids=[],
                document=DocumentModel(**document_to_json(session.current)))

    @app.get("/api/documents/{doc_id}/diff", response_class=PlainTextResponse)
    def get_diff(doc_id: str):
        session = registry.peek(doc_id)
        if session is None:
            from ..session import EditSession
            session = EditSession(store.load_document(doc_id))
        return PlainTextResponse(content=session.export_diff(),
                                 media_type="application/x-ndjson")

    @app.post("/api/documents/{doc_id}/replay", response_model=ReplayResponse)
    async def post_replay(doc_id: str, request: Request):
        diff_text = (await request.body()).decode("utf-8")
        base = store.load_document(doc_id)
        entry = next((e for e in store.entries() if e.id == doc_id), None)
        taxonomy = (store.load_taxonomy(entry.taxonomy_id)
                    if entry is not None and entry.taxonomy_id else None)
        with registry.lock_for(doc_id):
            session = replay_session(base, diff_text, taxonomy=taxonomy)
            registry.put(doc_id, session)
            return ReplayResponse(
                replayed=len(session.active_ops()),
                document=DocumentModel(**document_to_json(session.current)))

    def store_entry_check(doc_id: str) -> None:
        if registry.peek(doc_id) is None:
            store.load_document(doc_id)  # raises UnknownId for unknown documents

    # -- taxonomies -------------------------------------------------------------------

    @app.get("/api/taxonomies/{taxonomy_id}", response_model=TaxonomyModel)
    def get_taxonomy(taxonomy_id: str):
        return TaxonomyModel(**taxonomy_to_json(store.load_taxonomy(taxonomy_id)))

    @app.post("/api/taxonomies/{taxonomy_id}/recolor", response_model=TaxonomyModel)
    def post_recolor(taxonomy_id: str, body: RecolorRequest):
        taxonomy = store.load_taxonomy(taxonomy_id)
        updated = recolor_type(taxonomy, body.type, body.color, body.cascade)
        store.store_taxonomy(taxonomy_id, updated)
        return TaxonomyModel(**taxonomy_to_json(updated))

    # -- optional static frontend --------------------------------------------------------

    if frontend_dir is not None:
        frontend = Path(frontend_dir)
        index = frontend / "index.html"
        if index.exists():
            @app.get("/", include_in_schema=False)
            def serve_index():
                return FileResponse(index)
            app.mount("/", StaticFiles(directory=frontend), name="frontend")

    return app
