"""HTTP service embedding the interview engine.

Sessions are replay-persisted: every mutation appends to a per-session journal
before memory changes, and a restart reconstructs sessions by replaying those
journals through the engine. Private model versions sit behind unguessable
tokens; requests without the right token are indistinguishable from requests
for models that do not exist (always 403 with an opaque body).
"""

from __future__ import annotations

import datetime
import logging
import re
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Request

from .. import engine
from ..localization import (
    TOOLTIP,
    LocalizationPackage,
    localize_answer,
    localize_entity,
    localize_node,
    model_entity_paths,
    negotiate_locale,
)
from ..model import ManifestError, PolicyModel
from .config import ServiceConfig
from .schemas import (
    AnswerRequest,
    CommentList,
    CommentRecord,
    CommentRequest,
    CommentResponse,
    CreateSessionRequest,
    ModelIndex,
    ModelIndexEntry,
    PromptPayload,
    ReviseRequest,
    SessionState,
    TranscriptItem,
    UploadResponse,
    VisibilityRequest,
    VisibilityResponse,
)
from .store import StorageError, Store

log = logging.getLogger("policyspace.service")

PUBLIC = "public"
PRIVATE = "private"


def _new_token() -> str:
    # >=128-bit random, URL-safe
    return secrets.token_urlsafe(32)


@dataclass
class ModelVersion:
    model: PolicyModel
    visibility: str = PRIVATE
    token: str | None = None
    path: str | None = None  # storage-relative path for registry replay


@dataclass
class SessionHolder:
    session: engine.InterviewSession
    locale: str | None
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = Store(config.storage_dir)
        self.models: dict[tuple[str, str], ModelVersion] = {}
        self.sessions: dict[str, SessionHolder] = {}
        self._registry_lock = threading.Lock()
        self._load_preloads()
        self._replay_registry()
        self._replay_sessions()

    # -- startup -----------------------------------------------------------

    def _load_preloads(self) -> None:
        for path in self.config.preload_models:
            try:
                model = PolicyModel.load(path)
            except ManifestError as exc:
                log.warning("skipping preload %s: %s", path, exc)
                continue
            if not model.is_valid:
                log.warning("skipping preload %s: model has errors", path)
                continue
            self.models[(model.id, model.version)] = ModelVersion(
                model, visibility=PUBLIC, path=None)

    def _replay_registry(self) -> None:
        for record in self.store.read_registry():
            event = record.get("event")
            key = (record["model"], record["version"])
            if event == "register":
                try:
                    model = PolicyModel.load(self.store.root / record["path"])
                except (ManifestError, OSError) as exc:
                    log.warning("cannot reload model %s: %s", key, exc)
                    continue
                if not model.is_valid:
                    log.warning("stored model %s no longer validates", key)
                    continue
                self.models[key] = ModelVersion(
                    model, visibility=record.get("visibility", PRIVATE),
                    token=record.get("token"), path=record["path"])
            elif event == "visibility" and key in self.models:
                entry = self.models[key]
                entry.visibility = record["visibility"]
                entry.token = record.get("token", entry.token)

    def _replay_sessions(self) -> None:
        for session_id in self.store.list_sessions():
            records = self.store.read_session(session_id)
            if not records or records[0].get("event") != "create":
                continue
            head = records[0]
            entry = self.models.get((head["model"], head["version"]))
            if entry is None:
                log.warning("session %s references unknown model; skipped", session_id)
                continue
            try:
                session = engine.start(entry.model)
                for record in records[1:]:
                    if record["event"] == "answer":
                        session.answer(record["answer"])
                    elif record["event"] == "revise":
                        session = engine.revise_answer(
                            session, record["index"], record["answer"])
            except (engine.EngineFault, engine.InvalidAnswerError,
                    engine.NotAwaitingError, IndexError) as exc:
                log.warning("session %s journal no longer replays: %s", session_id, exc)
                continue
            self.sessions[session_id] = SessionHolder(session, head.get("locale"))

    # -- model access --------------------------------------------------------

    def resolve_model(self, model_id: str, version: str, key: str | None) -> ModelVersion:
        """Opaque 403 for anything not accessible: wrong token and nonexistent
        versions must be indistinguishable."""
        entry = self.models.get((model_id, version))
        if entry is None:
            raise HTTPException(status_code=403, detail="forbidden")
        if entry.visibility == PRIVATE:
            if not key or not entry.token or not secrets.compare_digest(key, entry.token):
                raise HTTPException(status_code=403, detail="forbidden")
        return entry

    def require_admin(self, token: str | None) -> None:
        if not token or not secrets.compare_digest(token, self.config.admin_token):
            raise HTTPException(status_code=403, detail="forbidden")


# ---------------------------------------------------------------------------
# presentation helpers


_WORD_CACHE: dict[int, re.Pattern] = {}


def _entity_tooltips(model: PolicyModel, package: LocalizationPackage | None,
                     text: str) -> dict[str, str]:
    """Tooltips for space entities whose display name occurs in the prompt text."""
    tooltips: dict[str, str] = {}
    for path in sorted(model_entity_paths(model.space)):
        name = localize_entity(package, model.space, path)
        if len(name) < 3:
            continue
        if re.search(rf"\b{re.escape(name)}\b", text, flags=re.IGNORECASE):
            tooltip = localize_entity(package, model.space, path, TOOLTIP)
            if tooltip != name:
                tooltips[name] = tooltip
    return tooltips


def _prompt_payload(model: PolicyModel, package: LocalizationPackage | None,
                    session: engine.InterviewSession) -> PromptPayload:
    node = session.current_node
    text = localize_node(package, model.graph, node.id)
    elaboration = None
    if package is not None and node.id in package.node_texts:
        elaboration = package.node_texts[node.id].elaboration
    keys = [a.key for a in node.prompt_answers]
    section_titles = [
        localize_node(package, model.graph, sid) for sid, _ in session.section_stack
    ]
    return PromptPayload(
        nodeId=node.id,
        text=text,
        elaboration=elaboration,
        answers=keys,
        answerTexts={k: localize_answer(package, model.graph, k) for k in keys},
        entityTooltips=_entity_tooltips(model, package, text),
        sectionTitles=section_titles,
    )


def _transcript_items(model: PolicyModel, package: LocalizationPackage | None,
                      session: engine.InterviewSession) -> list[TranscriptItem]:
    items = []
    for i, entry in enumerate(session.transcript):
        item = TranscriptItem(index=i, node=entry.node, answer=entry.answer, kind=entry.kind)
        item.text = localize_node(package, model.graph, entry.node)
        if entry.kind == "answer" and entry.answer is not None:
            item.answerText = localize_answer(package, model.graph, entry.answer)
            node = model.graph.nodes.get(entry.node)
            if node is not None and hasattr(node, "prompt_answers"):
                keys = [a.key for a in node.prompt_answers]
                item.answers = keys
                item.answerTexts = {
                    k: localize_answer(package, model.graph, k) for k in keys}
        items.append(item)
    return items


def _session_state(session_id: str, holder: SessionHolder) -> SessionState:
    session = holder.session
    model = session.model
    package = model.package(holder.locale)
    state = SessionState(
        sessionId=session_id,
        modelId=model.id,
        version=model.version,
        locale=holder.locale,
        finished=session.finished,
        transcript=_transcript_items(model, package, session),
    )
    if session.finished:
        state.report = engine.final_report(session, package).to_dict()
    else:
        state.prompt = _prompt_payload(model, package, session)
    return state


# ---------------------------------------------------------------------------
# application factory


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    state = ServiceState(config or ServiceConfig())
    app = FastAPI(title="policyspace interview service", version="0.1.0")
    app.state.service = state

    @app.exception_handler(StorageError)
    async def storage_error_handler(request: Request, exc: StorageError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=503, content={"detail": "storage unavailable"})

    # -- public API --------------------------------------------------------

    @app.get("/api/models", response_model=ModelIndex)
    def list_models() -> ModelIndex:
        entries = [
            ModelIndexEntry(modelId=mid, version=ver, title=entry.model.manifest.title,
                            locales=entry.model.locales)
            for (mid, ver), entry in sorted(state.models.items())
            if entry.visibility == PUBLIC
        ]
        return ModelIndex(models=entries)

    @app.post("/api/models/{model_id}/{version}/sessions", response_model=SessionState,
              status_code=201)
    def create_session(model_id: str, version: str, body: CreateSessionRequest,
                       key: str | None = None) -> SessionState:
        entry = state.resolve_model(model_id, version, key)
        model = entry.model
        locale = negotiate_locale(model.locales, body.locale, model.default_locale)
        session_id = secrets.token_urlsafe(24)
        state.store.append_session(session_id, {
            "event": "create", "model": model.id, "version": model.version,
            "locale": locale,
        })
        holder = SessionHolder(engine.start(model), locale)
        state.sessions[session_id] = holder
        return _session_state(session_id, holder)

    def _holder_or_404(session_id: str) -> SessionHolder:
        holder = state.sessions.get(session_id)
        if holder is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return holder

    @app.get("/api/sessions/{session_id}", response_model=SessionState)
    def get_session(session_id: str) -> SessionState:
        holder = _holder_or_404(session_id)
        with holder.lock:
            return _session_state(session_id, holder)

    @app.post("/api/sessions/{session_id}/answers", response_model=SessionState)
    def post_answer(session_id: str, body: AnswerRequest) -> SessionState:
        holder = _holder_or_404(session_id)
        with holder.lock:
            session = holder.session
            node = session.current_node
            if node is None or node.id != body.nodeId:
                raise HTTPException(
                    status_code=409,
                    detail="the session is not at that question (out of sync)")
            if node.answer(body.answer) is None:
                raise HTTPException(status_code=422, detail="invalid answer")
            state.store.append_session(session_id, {
                "event": "answer", "node": body.nodeId, "answer": body.answer,
            })
            session.answer(body.answer)
            return _session_state(session_id, holder)

    @app.post("/api/sessions/{session_id}/revise", response_model=SessionState)
    def post_revise(session_id: str, body: ReviseRequest) -> SessionState:
        holder = _holder_or_404(session_id)
        with holder.lock:
            try:
                revised = engine.revise_answer(holder.session, body.index, body.answer)
            except (IndexError, engine.InvalidAnswerError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            state.store.append_session(session_id, {
                "event": "revise", "index": body.index, "answer": body.answer,
            })
            holder.session = revised
            return _session_state(session_id, holder)

    @app.get("/api/sessions/{session_id}/report")
    def get_report(session_id: str) -> dict:
        holder = _holder_or_404(session_id)
        with holder.lock:
            session = holder.session
            if not session.finished:
                raise HTTPException(status_code=409, detail="the interview has not finished")
            package = session.model.package(holder.locale)
            return engine.final_report(session, package).to_dict()

    @app.post("/api/comments", response_model=CommentResponse, status_code=201)
    def post_comment(body: CommentRequest) -> CommentResponse:
        entry = state.models.get((body.modelId, body.version))
        if entry is None:
            # same opaque answer as any other inaccessible model reference
            raise HTTPException(status_code=403, detail="forbidden")
        if body.nodeId is not None and body.nodeId not in entry.model.graph.nodes:
            raise HTTPException(status_code=422, detail=f"unknown node '{body.nodeId}'")
        comment_id = secrets.token_urlsafe(16)
        record = {
            "commentId": comment_id,
            "modelId": body.modelId,
            "version": body.version,
            "locale": body.locale,
            "nodeId": body.nodeId,
            "text": body.text,
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        state.store.append_comment(record)
        return CommentResponse(commentId=comment_id)

    # -- admin API -----------------------------------------------------------

    @app.put("/api/admin/models/{model_id}/{version}/visibility",
             response_model=VisibilityResponse)
    def put_visibility(model_id: str, version: str, body: VisibilityRequest,
                       x_admin_token: str | None = Header(default=None)) -> VisibilityResponse:
        state.require_admin(x_admin_token)
        entry = state.models.get((model_id, version))
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown model version")
        with state._registry_lock:
            token = entry.token
            if body.visibility == PRIVATE and not token:
                token = _new_token()
            state.store.append_registry({
                "event": "visibility", "model": model_id, "version": version,
                "visibility": body.visibility, "token": token,
            })
            entry.visibility = body.visibility
            entry.token = token
        return VisibilityResponse(
            modelId=model_id, version=version, visibility=entry.visibility,
            accessToken=entry.token if entry.visibility == PRIVATE else None)

    @app.post("/api/admin/models", response_model=UploadResponse, status_code=201)
    async def upload_model(request: Request,
                           x_admin_token: str | None = Header(default=None)) -> UploadResponse:
        state.require_admin(x_admin_token)
        data = await request.body()
        if not data:
            raise HTTPException(status_code=422, detail="empty upload body")
        try:
            staging = state.store.unpack_bundle(data)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        try:
            model = PolicyModel.load(staging)
        except ManifestError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if not model.is_valid:
            raise HTTPException(status_code=422, detail={
                "message": "model has validation errors",
                "diagnostics": [d.to_dict() for d in model.errors],
            })
        with state._registry_lock:
            final = state.store.promote_bundle(staging, model.id, model.version)
            model = PolicyModel.load(final)
            token = _new_token()
            rel_path = str(final.relative_to(state.store.root))
            state.store.append_registry({
                "event": "register", "model": model.id, "version": model.version,
                "path": rel_path, "visibility": PRIVATE, "token": token,
            })
            state.models[(model.id, model.version)] = ModelVersion(
                model, visibility=PRIVATE, token=token, path=rel_path)
        return UploadResponse(modelId=model.id, version=model.version,
                              visibility=PRIVATE, accessToken=token)

    @app.get("/api/admin/comments", response_model=CommentList)
    def list_comments(x_admin_token: str | None = Header(default=None)) -> CommentList:
        state.require_admin(x_admin_token)
        return CommentList(comments=[
            CommentRecord(**record) for record in state.store.read_comments()
        ])

    # -- static client -------------------------------------------------------

    client_dir = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if (client_dir / "index.html").is_file():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=client_dir, html=True), name="client")
    else:
        @app.get("/", include_in_schema=False)
        def index():
            return {"service": "policyspace", "docs": "/docs"}

    return app
