"""HTTP facade over the engine: run, parse, validate, completion, metadata.

One KB is loaded at startup and shared immutably across requests; nothing here
mutates server state, so requests may be handled concurrently.  Errors carry a
machine-readable body: ``{"code", "message", "node_index"?, "diagnostics"?}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .backends import BackendKind
from .engine import DEFAULT_PREVIEW_K, ExecutionError, execute, plan_merge
from .indexes import IndexSet, build_indices, complete
from .induction import ParserBinding, UnparsedQuestionError, parse_question, template_binding
from .kb import KnowledgeBase, kb_stats, load_kb
from .program import SIGNATURES, ProgramParseError, parse_program, serialize_program, validate


@dataclass(slots=True)
class ServiceState:
    kb: KnowledgeBase | None = None
    idx: IndexSet | None = None
    binding: ParserBinding = field(default_factory=template_binding)
    preview_k: int = DEFAULT_PREVIEW_K

    @property
    def ready(self) -> bool:
        return self.kb is not None and self.idx is not None


def build_state(
    kb_path: str,
    backend: BackendKind = BackendKind.HASHING,
    preview_k: int = DEFAULT_PREVIEW_K,
    binding: ParserBinding | None = None,
) -> ServiceState:
    kb = load_kb(kb_path)
    return ServiceState(
        kb=kb,
        idx=build_indices(kb, backend),
        binding=binding or template_binding(),
        preview_k=preview_k,
    )


class ApiFailure(Exception):
    def __init__(
        self,
        status: int,
        code: str,
        message: str,
        node_index: int | None = None,
        diagnostics: list[dict] | None = None,
    ) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.node_index = node_index
        self.diagnostics = diagnostics

    def body(self) -> dict:
        out: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.node_index is not None:
            out["node_index"] = self.node_index
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics
        return out


class RunRequest(BaseModel):
    program: list[dict]
    trace: bool = False


class ParseRequest(BaseModel):
    question: str


class ValidateRequest(BaseModel):
    program: list[dict]


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="viskop", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiFailure)
    async def _api_failure(_request: Request, exc: ApiFailure) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"code": "bad_request", "message": str(exc.errors()[:1])}
        )

    def require_ready() -> None:
        if not state.ready:
            raise ApiFailure(503, "not_found", "knowledge base not loaded yet")

    def parse_document(document: list[dict]):
        try:
            return parse_program(document)
        except ProgramParseError as exc:
            raise ApiFailure(422, "parse_error", str(exc)) from None

    @app.get("/healthz")
    def healthz() -> JSONResponse:
        if not state.ready:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return JSONResponse(content={"status": "ok"})

    @app.post("/api/run")
    def api_run(request: RunRequest) -> dict:
        require_ready()
        program = parse_document(request.program)
        report = validate(program)
        if not report.ok:
            raise ApiFailure(
                422,
                "validation_error",
                "program failed validation",
                diagnostics=[d.to_dict() for d in report.diagnostics],
            )
        try:
            result = execute(
                state.kb, state.idx, plan_merge(program),
                trace=request.trace, preview_k=state.preview_k,
            )
        except ExecutionError as exc:
            raise ApiFailure(422, "runtime_error", exc.message, node_index=exc.node_index) from None
        body: dict[str, Any] = {"answer": result.answer}
        if result.trace is not None:
            body["trace"] = [entry.to_dict() for entry in result.trace]
        return body

    @app.post("/api/parse")
    def api_parse(request: ParseRequest) -> dict:
        require_ready()
        if not request.question.strip():
            raise ApiFailure(400, "bad_request", "question must be non-empty")
        try:
            program = parse_question(state.binding, state.idx, request.question)
        except UnparsedQuestionError as exc:
            raise ApiFailure(422, "parse_error", str(exc)) from None
        return {"program": serialize_program(program)}

    @app.post("/api/validate")
    def api_validate(request: ValidateRequest) -> dict:
        require_ready()
        program = parse_document(request.program)
        return validate(program).to_dict()

    @app.get("/api/completion")
    def api_completion(kind: str, prefix: str = "", limit: int = 10) -> dict:
        require_ready()
        try:
            candidates = complete(state.idx, kind, prefix, limit)
        except ValueError as exc:
            raise ApiFailure(400, "bad_request", str(exc)) from None
        return {"candidates": candidates}

    @app.get("/api/meta")
    def api_meta() -> dict:
        require_ready()
        return {
            "health": "ok",
            "stats": kb_stats(state.kb).to_dict(),
            "operators": [sig.to_dict() for sig in SIGNATURES.values()],
            "preview_k": state.preview_k,
        }

    return app
