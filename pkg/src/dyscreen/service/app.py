"""FastAPI application factory for the screening service."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..core.manifest import manifest_to_json, load_manifest
from ..core.variants import variant_by_name
from ..errors import (
    ArtifactError,
    DataError,
    DyscreenError,
    IncompleteSessionError,
    MalformedSessionError,
    SessionStateError,
)
from ..features import extract_features
from .config import ServiceConfig
from .registry import ModelRegistry
from .schemas import (
    ActiveModelInfo,
    ActiveModels,
    AppendAck,
    ErrorBody,
    EventBatch,
    FinalizeResponse,
    ModelActivated,
    ParticipantIn,
    PredictionOut,
    SessionCreated,
    SessionStatusOut,
)
from .store import SessionStore, UnknownSessionError


class NoActiveModelError(DyscreenError):
    """Finalization requested before a model was activated for the variant."""


_ERROR_MAP: list[tuple[type[Exception], int, str]] = [
    (UnknownSessionError, 404, "unknown_session"),
    (NoActiveModelError, 409, "no_active_model"),
    (IncompleteSessionError, 409, "incomplete_session"),
    (SessionStateError, 409, "session_state"),
    (ArtifactError, 422, "bad_artifact"),
    (MalformedSessionError, 422, "malformed_events"),
    (DataError, 422, "invalid_data"),
    (DyscreenError, 422, "invalid_request"),
]


def _error_response(status: int, code: str, message: str, details: dict | None = None):
    body = ErrorBody(code=code, message=message, details=details or {})
    return JSONResponse(status_code=status, content=body.model_dump())


def create_app(config: ServiceConfig) -> FastAPI:
    data_dir = Path(config.data_dir)
    store = SessionStore(data_dir)
    registry = ModelRegistry(data_dir / "models")
    manifest = load_manifest(config.manifest_path)
    manifest_doc = manifest_to_json(manifest)

    app = FastAPI(title="dyscreen", version="1")
    app.state.store = store
    app.state.registry = registry
    app.state.manifest = manifest

    if config.api_token is not None:
        token = config.api_token

        @app.middleware("http")
        async def require_token(request: Request, call_next):
            if request.url.path.startswith("/v1") and request.headers.get("x-api-token") != token:
                return _error_response(401, "unauthorized", "missing or wrong API token")
            return await call_next(request)

    for exc_type, status, code in _ERROR_MAP:

        def handler(request: Request, exc: Exception, status=status, code=code):
            details = {}
            if isinstance(exc, IncompleteSessionError):
                details["missing_qids"] = exc.missing_qids
            return _error_response(status, code, str(exc), details)

        app.add_exception_handler(exc_type, handler)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error_response(
            422, "validation_error", "request body failed validation",
            {"errors": jsonable_encoder(exc.errors())},
        )

    @app.post("/v1/sessions", response_model=SessionCreated, status_code=201)
    def create_session(participant: ParticipantIn) -> SessionCreated:
        record = participant.to_record(hashed_id="pending")
        session = store.create(participant.participant_id, record)
        return SessionCreated(
            session_id=session.session_id,
            variant=session.variant.name,
            feature_count=session.variant.feature_count,
            question_ids=list(session.variant.qids),
        )

    @app.post("/v1/sessions/{session_id}/events", response_model=AppendAck)
    def append_events(session_id: str, batch: EventBatch) -> AppendAck:
        events = [e.to_event() for e in batch.events]
        session, accepted, duplicate = store.append(session_id, batch.seq, events)
        return AppendAck(
            session_id=session_id,
            seq=batch.seq,
            accepted=accepted,
            duplicate=duplicate,
            total_events=len(session.events),
        )

    @app.post("/v1/sessions/{session_id}/finalize", response_model=FinalizeResponse)
    def finalize(session_id: str) -> FinalizeResponse:
        def compute(log):
            vector = extract_features(log, manifest)
            entry = registry.active(log.variant.name)
            if entry is None:
                raise NoActiveModelError(
                    f"no active model for variant {log.variant.name}"
                )
            version, model = entry
            score = model.predict_score(vector.values)
            return {
                "prediction": {
                    "score": score,
                    "flagged": bool(score >= model.threshold),
                    "threshold": model.threshold,
                    "model_version": version,
                    "variant": log.variant.name,
                },
                "feature_vector": [float(x) for x in vector.values],
            }

        session, result, _ = store.finalize(session_id, compute)
        return FinalizeResponse(
            session_id=session_id,
            status=session.status,
            prediction=PredictionOut(**result["prediction"]),
            feature_vector=result["feature_vector"],
        )

    @app.get("/v1/sessions/{session_id}", response_model=SessionStatusOut)
    def session_status(session_id: str) -> SessionStatusOut:
        session = store.get(session_id)
        prediction = None
        if session.result is not None:
            prediction = PredictionOut(**session.result["prediction"])
        return SessionStatusOut(
            session_id=session.session_id,
            status=session.status,
            variant=session.variant.name,
            created_at=session.created_at,
            event_count=len(session.events),
            batch_count=len(session.batch_counts),
            prediction=prediction,
        )

    @app.post("/v1/models", response_model=ModelActivated, status_code=201)
    async def activate_model(request: Request) -> ModelActivated:
        body = await request.body()
        version, variant_name = registry.activate(body)
        return ModelActivated(version=version, variant=variant_name)

    @app.get("/v1/models/active", response_model=ActiveModels)
    def active_models() -> ActiveModels:
        info = registry.info()
        return ActiveModels(
            models={
                name: (ActiveModelInfo(**entry) if entry is not None else None)
                for name, entry in info.items()
            }
        )

    @app.get("/v1/manifest/{variant_name}")
    def manifest_for_variant(variant_name: str) -> JSONResponse:
        try:
            variant = variant_by_name(variant_name)
        except DyscreenError as exc:
            return _error_response(404, "unknown_variant", str(exc))
        qids = set(variant.qids)
        doc = {
            "version": manifest_doc["version"],
            "variant": variant.name,
            "question_ids": list(variant.qids),
            "feature_count": variant.feature_count,
            "questions": [q for q in manifest_doc["questions"] if q["qid"] in qids],
        }
        return JSONResponse(content=doc)

    return app
